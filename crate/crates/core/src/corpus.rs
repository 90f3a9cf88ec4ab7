//! Test graphs: named families, exhaustive enumerations of small graphs and
//! seeded random weighted instances.

use crate::graph::WeightedGraph;
use crate::ratio::{frac, int, Ratio};
use crate::weight::WeightFamily;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub type EdgeList = Vec<(usize, usize)>;

pub fn unit_graph(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
    let weighted: Vec<_> = edges.iter().map(|&(u, v)| (u, v, int(1))).collect();
    WeightedGraph::from_indexed(n, &weighted).expect("named graphs are valid")
}

pub fn cycle_edges(n: usize) -> EdgeList {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

pub fn path_edges(n: usize) -> EdgeList {
    (1..n).map(|i| (i - 1, i)).collect()
}

pub fn star_edges(leaves: usize) -> EdgeList {
    (1..=leaves).map(|i| (0, i)).collect()
}

pub fn complete_edges(n: usize) -> EdgeList {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

pub fn petersen_edges() -> EdgeList {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    e
}

/// The Heawood graph: 14 vertices, 21 edges, girth 6 (LCF `[5,-5]^7`).
pub fn heawood_edges() -> EdgeList {
    let mut e = cycle_edges(14);
    for i in (0..14).step_by(2) {
        let j = (i + 5) % 14;
        e.push((i.min(j), i.max(j)));
    }
    e
}

/// Non-isomorphic trees on exactly `n` vertices, grown leaf by leaf and
/// deduplicated by a canonical rooted encoding at the center.
pub fn trees(n: usize) -> Vec<EdgeList> {
    assert!(n >= 2);
    let mut level: Vec<EdgeList> = vec![vec![(0, 1)]];
    for size in 3..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &level {
            for attach in 0..size - 1 {
                let mut grown = t.clone();
                grown.push((attach, size - 1));
                if seen.insert(tree_canonical(size, &grown)) {
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    level
}

fn tree_canonical(n: usize, edges: &[(usize, usize)]) -> String {
    let adj = adjacency(n, edges);
    // Peel leaves to find the center (one or two vertices).
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
        .iter()
        .map(|&c| encode(&adj, c, usize::MAX))
        .min()
        .expect("tree has a center")
}

fn encode(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| encode(adj, w, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// Non-isomorphic connected graphs on exactly `n` vertices (`n <= 7`).
///
/// Every connected graph has a vertex whose removal leaves it connected, so
/// each one arises from a smaller connected graph plus a vertex joined to a
/// nonempty subset.
pub fn connected_graphs(n: usize) -> Vec<EdgeList> {
    assert!((1..=7).contains(&n));
    let perms_by_size: Vec<Vec<Vec<usize>>> = (0..=n).map(permutations).collect();
    let mut level: Vec<u32> = vec![0];
    for size in 2..=n {
        let perms = &perms_by_size[size];
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for &mask in &level {
            for subset in 1u32..(1 << (size - 1)) {
                let mut grown = mask;
                for u in 0..size - 1 {
                    if subset & (1 << u) != 0 {
                        grown |= 1 << pair_bit(u, size - 1);
                    }
                }
                let canon = perms.iter().map(|p| relabel(grown, size, p)).min().unwrap();
                if seen.insert(canon) {
                    next.push(canon);
                }
            }
        }
        level = next;
    }
    level.into_iter().map(|m| mask_edges(m, n)).collect()
}

fn pair_bit(u: usize, v: usize) -> usize {
    let (a, b) = (u.min(v), u.max(v));
    b * (b - 1) / 2 + a
}

fn relabel(mask: u32, n: usize, perm: &[usize]) -> u32 {
    let mut out = 0;
    for b in 1..n {
        for a in 0..b {
            if mask & (1 << pair_bit(a, b)) != 0 {
                out |= 1 << pair_bit(perm[a], perm[b]);
            }
        }
    }
    out
}

fn mask_edges(mask: u32, n: usize) -> EdgeList {
    let mut e = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if mask & (1 << pair_bit(a, b)) != 0 {
                e.push((a, b));
            }
        }
    }
    e
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Lengths drawn for random instances.
pub fn length_palette() -> Vec<Ratio> {
    vec![int(1), int(2), int(3), frac(1, 2), frac(3, 2)]
}

/// Integer lengths, for checks that need an integer metric.
pub fn integer_palette() -> Vec<Ratio> {
    vec![int(1), int(2), int(3)]
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub seed: u64,
    pub graph: WeightedGraph,
    pub family: WeightFamily,
}

/// Which weight families a random instance may draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Constants or non-increasing tables on the occurring lengths.
    NonIncreasing,
    /// `F(t) = t`
    Identity,
}

/// Random connected topology with at most `max_vertices` vertices: trees,
/// unicyclic graphs of controlled girth, sparse graphs, and small named
/// graphs.
pub fn random_topology(rng: &mut impl Rng, max_vertices: usize) -> (String, usize, EdgeList) {
    assert!(max_vertices >= 3);
    match rng.gen_range(0..4) {
        0 => {
            let n = rng.gen_range(2..=max_vertices);
            ("tree".into(), n, random_tree(rng, n))
        }
        1 => {
            let k = rng.gen_range(3..=max_vertices.min(8));
            let n = rng.gen_range(k..=max_vertices);
            let mut e = cycle_edges(k);
            for v in k..n {
                e.push((rng.gen_range(0..v), v));
            }
            (format!("unicyclic-{k}"), n, e)
        }
        2 => {
            let n = rng.gen_range(4..=max_vertices);
            let mut e = random_tree(rng, n);
            let extra = rng.gen_range(1..=2);
            let mut all = complete_edges(n);
            all.shuffle(rng);
            for (u, v) in all {
                if e.len() >= n - 1 + extra {
                    break;
                }
                if !e.contains(&(u, v)) && !e.contains(&(v, u)) {
                    e.push((u, v));
                }
            }
            ("sparse".into(), n, e)
        }
        _ => {
            let named: [(&str, EdgeList); 6] = [
                ("cycle", cycle_edges(rng.gen_range(3..=max_vertices.min(8)))),
                ("path", path_edges(rng.gen_range(2..=max_vertices))),
                ("star", star_edges(rng.gen_range(2..max_vertices))),
                (
                    "complete",
                    complete_edges(rng.gen_range(3..=max_vertices.min(5))),
                ),
                ("cycle", cycle_edges(6)),
                ("cycle", cycle_edges(8.min(max_vertices))),
            ];
            let (name, e) = named.choose(rng).unwrap().clone();
            let n = e.iter().map(|&(u, v)| u.max(v)).max().unwrap() + 1;
            (name.into(), n, e)
        }
    }
}

pub fn random_tree(rng: &mut impl Rng, n: usize) -> EdgeList {
    (1..n).map(|v| (rng.gen_range(0..v), v)).collect()
}

/// Assigns lengths from `palette`, redrawing until the metric is consistent.
/// Falls back to unit lengths after a bounded number of tries.
pub fn random_lengths(
    rng: &mut impl Rng,
    n: usize,
    edges: &[(usize, usize)],
    palette: &[Ratio],
) -> WeightedGraph {
    for _ in 0..64 {
        let weighted: Vec<_> = edges
            .iter()
            .map(|&(u, v)| (u, v, palette.choose(rng).unwrap().clone()))
            .collect();
        if let Ok(g) = WeightedGraph::from_indexed(n, &weighted) {
            return g;
        }
    }
    unit_graph(n, edges)
}

/// A constant, or a non-increasing table over the graph's lengths.
pub fn random_non_increasing(rng: &mut impl Rng, g: &WeightedGraph) -> WeightFamily {
    let lengths = g.occurring_lengths();
    match rng.gen_range(0..3) {
        0 => WeightFamily::Constant([int(1), int(2), frac(1, 3)].choose(rng).unwrap().clone()),
        _ => {
            let choices = [int(1), int(2), int(3), frac(1, 2), frac(5, 2)];
            let mut values: Vec<Ratio> = lengths
                .iter()
                .map(|_| choices.choose(rng).unwrap().clone())
                .collect();
            values.sort_by(|a, b| b.cmp(a));
            WeightFamily::Table(lengths.into_iter().zip(values).collect())
        }
    }
}

/// One seeded random instance.
pub fn random_instance(seed: u64, max_vertices: usize, kind: FamilyKind) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (name, n, edges) = random_topology(&mut rng, max_vertices);
    let graph = random_lengths(&mut rng, n, &edges, &length_palette());
    let family = match kind {
        FamilyKind::NonIncreasing => random_non_increasing(&mut rng, &graph),
        FamilyKind::Identity => WeightFamily::Power(1),
    };
    Instance {
        name,
        seed,
        graph,
        family,
    }
}

/// `count` instances from consecutive seeds starting at `base_seed`.
pub fn random_corpus(
    base_seed: u64,
    count: usize,
    max_vertices: usize,
    kind: FamilyKind,
) -> Vec<Instance> {
    (0..count as u64)
        .map(|i| random_instance(base_seed.wrapping_add(i), max_vertices, kind))
        .collect()
}

/// Random treelike instances: trees with random lengths and six-cycles with
/// opposite edges of equal length (possibly with pendant trees).
pub fn random_treelike(seed: u64, max_vertices: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let palette = length_palette();
    let graph = if rng.gen_bool(0.5) {
        let n = rng.gen_range(2..=max_vertices);
        let edges = random_tree(&mut rng, n);
        let uniform = rng.gen_bool(0.25);
        let len = palette.choose(&mut rng).unwrap().clone();
        let weighted: Vec<_> = edges
            .iter()
            .map(|&(u, v)| {
                let d = if uniform {
                    len.clone()
                } else {
                    palette.choose(&mut rng).unwrap().clone()
                };
                (u, v, d)
            })
            .collect();
        WeightedGraph::from_indexed(n, &weighted).expect("trees accept any lengths")
    } else {
        let abc: Vec<Ratio> = (0..3)
            .map(|_| palette.choose(&mut rng).unwrap().clone())
            .collect();
        let mut weighted: Vec<_> = (0..6)
            .map(|i| (i, (i + 1) % 6, abc[i % 3].clone()))
            .collect();
        let n = rng.gen_range(6..=max_vertices.max(6));
        for v in 6..n {
            weighted.push((
                rng.gen_range(0..v),
                v,
                palette.choose(&mut rng).unwrap().clone(),
            ));
        }
        WeightedGraph::from_indexed(n, &weighted).expect("opposite-equal six-cycle is metric")
    };
    let name = if graph.is_tree() { "tree" } else { "six-cycle" };
    Instance {
        name: name.into(),
        seed,
        graph,
        family: WeightFamily::Power(1),
    }
}
