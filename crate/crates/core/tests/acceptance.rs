//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ricci_ot_core::corpus::{
    connected_graphs, cycle_edges, heawood_edges, integer_palette, petersen_edges, random_corpus,
    random_lengths, random_non_increasing, random_topology, random_treelike, trees, unit_graph,
    FamilyKind, Instance,
};
use ricci_ot_core::curvature::edge_curvature;
use ricci_ot_core::transport::{
    check_complementary_slackness, mu_alpha, slackness_checks_performed, wasserstein,
};
use ricci_ot_core::verify::{gauss_bonnet_from, general_lower_from, main_lower_from, upper_from};
use ricci_ot_core::{
    idleness_profile, kappa_alpha, total_curvature, Ratio, WeightFamily, WeightModel, WeightedGraph,
};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn model(g: &WeightedGraph, family: &WeightFamily) -> WeightModel {
    WeightModel::build(g, family.clone()).expect("corpus families are valid on their graphs")
}

fn int(n: i64) -> Ratio {
    Ratio::from_integer(n.into())
}

fn frac(a: i64, b: i64) -> Ratio {
    Ratio::new(a.into(), b.into())
}

fn non_increasing_corpus() -> Vec<Instance> {
    random_corpus(0x5eed_0002, 220, 9, FamilyKind::NonIncreasing)
}

fn treelike_corpus() -> Vec<Instance> {
    (0..120)
        .map(|i| random_treelike(0x5eed_0003 + i, 9))
        .collect()
}

fn gauss_bonnet() -> Check {
    let mut graphs = vec![
        ("C6".to_string(), unit_graph(6, &cycle_edges(6))),
        ("C7".to_string(), unit_graph(7, &cycle_edges(7))),
        ("C8".to_string(), unit_graph(8, &cycle_edges(8))),
        ("Heawood".to_string(), unit_graph(14, &heawood_edges())),
    ];
    for n in 2..=8 {
        for (i, t) in trees(n).iter().enumerate() {
            graphs.push((format!("tree{n}.{i}"), unit_graph(n, t)));
        }
    }
    for (name, g) in &graphs {
        let report = total_curvature(g, &WeightModel::unit(g));
        let v = gauss_bonnet_from(g, &report);
        ensure(v.hypothesis_met, || format!("{name}: hypothesis not met"))?;
        ensure(v.claim_holds, || {
            format!("{name}: K = {} but chi = {}", v.lhs, v.rhs)
        })?;
    }
    Ok(format!("{} graphs, exact K = 2|V| - 2|E|", graphs.len()))
}

fn lower_bound() -> Check {
    let corpus = non_increasing_corpus();
    let (mut equal, mut strict) = (0, 0);
    for inst in &corpus {
        let wm = model(&inst.graph, &inst.family);
        let report = total_curvature(&inst.graph, &wm);
        let v = main_lower_from(&inst.graph, &wm, &report);
        let tag = || format!("seed {} ({}, F = {})", inst.seed, inst.name, inst.family);
        ensure(v.hypothesis_met, || {
            format!("{}: F not non-increasing", tag())
        })?;
        ensure(v.claim_holds, || {
            format!("{}: K = {} < {}", tag(), v.lhs, v.rhs)
        })?;
        ensure(v.equality == v.equality_condition_met, || {
            format!(
                "{}: equality {} but condition {}",
                tag(),
                v.equality,
                v.equality_condition_met
            )
        })?;
        if v.equality {
            equal += 1;
        } else {
            strict += 1;
        }
    }
    ensure(equal > 0 && strict > 0, || {
        format!("degenerate corpus: {equal} equal, {strict} strict")
    })?;
    Ok(format!(
        "{} instances, {equal} equality / {strict} strict, equality set matches",
        corpus.len()
    ))
}

fn upper_bound() -> Check {
    let corpus = treelike_corpus();
    let (mut equal, mut strict) = (0, 0);
    for inst in &corpus {
        let wm = model(&inst.graph, &inst.family);
        let report = total_curvature(&inst.graph, &wm);
        let v = upper_from(&inst.graph, &wm, &report);
        let tag = || format!("seed {} ({})", inst.seed, inst.name);
        ensure(v.hypothesis_met, || {
            format!("{}: not treelike with increasing F", tag())
        })?;
        ensure(v.claim_holds, || {
            format!("{}: K = {} > {}", tag(), v.lhs, v.rhs)
        })?;
        ensure(v.equality == v.equality_condition_met, || {
            format!(
                "{}: equality {} but constant d {}",
                tag(),
                v.equality,
                v.equality_condition_met
            )
        })?;
        if v.equality {
            equal += 1;
        } else {
            strict += 1;
        }
    }
    ensure(equal > 0 && strict > 0, || {
        format!("degenerate corpus: {equal} equal, {strict} strict")
    })?;
    Ok(format!(
        "{} treelike instances, {equal} equality / {strict} strict",
        corpus.len()
    ))
}

fn full_corpus() -> Vec<(String, WeightedGraph, WeightFamily)> {
    let mut out: Vec<(String, WeightedGraph, WeightFamily)> = Vec::new();
    for inst in non_increasing_corpus()
        .into_iter()
        .chain(treelike_corpus())
        .chain(random_corpus(0x5eed_0004, 80, 9, FamilyKind::Identity))
    {
        out.push((
            format!("seed {} ({})", inst.seed, inst.name),
            inst.graph,
            inst.family,
        ));
    }
    let named = [
        ("C5", unit_graph(5, &cycle_edges(5))),
        ("C6", unit_graph(6, &cycle_edges(6))),
        ("Petersen", unit_graph(10, &petersen_edges())),
        ("Heawood", unit_graph(14, &heawood_edges())),
    ];
    for (name, g) in named {
        for family in [
            WeightFamily::Constant(int(1)),
            WeightFamily::Power(1),
            WeightFamily::Power(-2),
        ] {
            out.push((format!("{name} F = {family}"), g.clone(), family));
        }
    }
    out
}

fn general_bound() -> Check {
    let corpus = full_corpus();
    let (mut treelike, mut other) = (0, 0);
    for (tag, g, family) in &corpus {
        let wm = model(g, family);
        let report = total_curvature(g, &wm);
        let v = general_lower_from(g, &report);
        ensure(v.claim_holds, || {
            format!("{tag}: K = {} < 2|V| - H = {}", v.lhs, v.rhs)
        })?;
        ensure(v.equality == report.treelike, || {
            format!(
                "{tag}: equality {} but treelike {}",
                v.equality, report.treelike
            )
        })?;
        if report.treelike {
            treelike += 1;
        } else {
            other += 1;
        }
    }
    ensure(treelike > 0 && other > 0, || {
        "corpus lacks one side of the equivalence".into()
    })?;
    Ok(format!(
        "{} instances: {treelike} treelike all equal, {other} non-treelike all strict",
        corpus.len()
    ))
}

fn method_agreement() -> Check {
    let mut edges = 0usize;
    let mut graphs = 0usize;
    for n in 2..=6 {
        for e in connected_graphs(n) {
            let g = unit_graph(n, &e);
            let report = total_curvature(&g, &WeightModel::unit(&g));
            for ec in &report.per_edge {
                ensure(ec.methods_agree(), || {
                    format!(
                        "n = {n}, edges {e:?}, edge {}-{}: star {} laplacian {} limit {}",
                        ec.u, ec.v, ec.kappa_star, ec.kappa_laplacian, ec.kappa_limit
                    )
                })?;
            }
            edges += report.per_edge.len();
            graphs += 1;
        }
    }
    let exhaustive = format!("{graphs} graphs / {edges} edges exhaustive");
    let mut weighted = 0usize;
    for inst in non_increasing_corpus()
        .into_iter()
        .take(80)
        .chain(random_corpus(0x5eed_0005, 60, 9, FamilyKind::Identity))
    {
        let wm = model(&inst.graph, &inst.family);
        let report = total_curvature(&inst.graph, &wm);
        ensure(report.methods_agree(), || {
            format!("seed {} ({}): methods disagree", inst.seed, inst.name)
        })?;
        weighted += report.per_edge.len();
    }
    Ok(format!("{exhaustive}, {weighted} weighted edges"))
}

fn profile_checks(
    g: &WeightedGraph,
    wm: &WeightModel,
    max_pieces: impl Fn(usize, usize) -> usize,
) -> Result<usize, String> {
    let probes = [frac(1, 7), frac(2, 5), frac(5, 6)];
    for (id, edge) in g.edges().iter().enumerate() {
        let p = idleness_profile(g, wm, edge.u, edge.v).map_err(|e| e.to_string())?;
        let tag = || format!("edge {id} ({}-{})", g.name(edge.u), g.name(edge.v));
        let bound = max_pieces(id, edge.u);
        ensure(p.num_pieces() <= bound, || {
            format!("{}: {} pieces > {bound}", tag(), p.num_pieces())
        })?;
        ensure(p.is_concave(), || format!("{}: not concave", tag()))?;
        ensure(p.is_continuous(), || format!("{}: not continuous", tag()))?;
        ensure(p.value_at(&Ratio::one()).is_zero(), || {
            format!("{}: kappa_1 != 0", tag())
        })?;
        for a in &probes {
            let direct = kappa_alpha(g, wm, edge.v, edge.u, a).map_err(|e| e.to_string())?;
            ensure(p.value_at(a) == direct, || {
                format!("{}: profile({a}) != kappa_alpha", tag())
            })?;
        }
    }
    Ok(g.num_edges())
}

fn idleness_structure() -> Check {
    let mut unweighted = 0;
    let mut graphs: Vec<WeightedGraph> = Vec::new();
    for n in 2..=5 {
        graphs.extend(connected_graphs(n).iter().map(|e| unit_graph(n, e)));
    }
    graphs.push(unit_graph(10, &petersen_edges()));
    graphs.push(unit_graph(14, &heawood_edges()));
    for g in &graphs {
        let wm = WeightModel::unit(g);
        unweighted += profile_checks(g, &wm, |id, _| {
            let e = &g.edges()[id];
            if g.degree(e.u) == g.degree(e.v) {
                2
            } else {
                3
            }
        })?;
    }

    let mut weighted = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for _ in 0..60 {
        let (_, n, edges) = random_topology(&mut rng, 8);
        let g = random_lengths(&mut rng, n, &edges, &integer_palette());
        let family = match rng.gen_range(0..4) {
            0 => random_non_increasing(&mut rng, &g),
            1 => WeightFamily::Power(1),
            2 => WeightFamily::Power(-1),
            _ => WeightFamily::Exponential(int(2)),
        };
        let wm = model(&g, &family);
        weighted += profile_checks(&g, &wm, |id, _| {
            let d = g.edges()[id].length.to_integer();
            usize::try_from(2 * d + 1).expect("positive length")
        })?;
    }
    Ok(format!(
        "{unweighted} unweighted and {weighted} integer-length profiles"
    ))
}

fn last_segment() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut checked = 0;
    for i in 0..40 {
        let inst = random_treelike(0x5eed_0007 + i, 8);
        let g = &inst.graph;
        let family = match i % 4 {
            0 => WeightFamily::Power(1),
            1 => WeightFamily::Power(-1),
            2 => WeightFamily::Constant(int(1)),
            _ => random_non_increasing(&mut rng, g),
        };
        let wm = model(g, &family);
        ensure(g.is_treelike(), || {
            format!("seed {}: not treelike", inst.seed)
        })?;
        for (id, edge) in g.edges().iter().enumerate() {
            let (x, y) = if wm.degree(edge.u) >= wm.degree(edge.v) {
                (edge.u, edge.v)
            } else {
                (edge.v, edge.u)
            };
            let w = wm.edge_weight(id);
            let t = w / (w + wm.degree(x));
            let p1 = &t + (Ratio::one() - &t) / int(3);
            let p2 = &t + (Ratio::one() - &t) * frac(2, 3);
            let k = |a: &Ratio| kappa_alpha(g, &wm, x, y, a).expect("adjacent pair");
            let (kt, k1, k2, kone) = (k(&t), k(&p1), k(&p2), k(&Ratio::one()));
            let s0 = (&k1 - &kt) / (&p1 - &t);
            let s1 = (&k2 - &k1) / (&p2 - &p1);
            let s2 = (&kone - &k2) / (Ratio::one() - &p2);
            let tag = || format!("seed {} edge {id}", inst.seed);
            ensure(s0 == s1 && s1 == s2, || {
                format!("{}: slopes {s0}, {s1}, {s2} on [{t}, 1]", tag())
            })?;
            let p = idleness_profile(g, &wm, x, y).map_err(|e| e.to_string())?;
            ensure(p.linear_on_tail(&t), || {
                format!("{}: profile bends after {t}", tag())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} treelike edges linear on [w/(w+D_x), 1]"))
}

fn complementary_slackness(earlier_failures: &[String]) -> Check {
    let before = slackness_checks_performed();
    ensure(before > 0, || "no inline slackness checks ran".into())?;
    if let Some(f) = earlier_failures.iter().find(|m| m.contains("slackness")) {
        return Err(format!("inline assertion fired: {f}"));
    }
    let mut extra = 0;
    for inst in random_corpus(0x5eed_0008, 30, 8, FamilyKind::NonIncreasing) {
        let g = &inst.graph;
        let wm = model(g, &inst.family);
        for a in [Ratio::zero(), frac(1, 3), frac(3, 4)] {
            for edge in g.edges() {
                let t = wasserstein(
                    g,
                    &mu_alpha(g, &wm, edge.u, &a).unwrap(),
                    &mu_alpha(g, &wm, edge.v, &a).unwrap(),
                );
                ensure(
                    check_complementary_slackness(&t.coupling, &t.potential, g),
                    || format!("seed {}: slackness fails at alpha {a}", inst.seed),
                )?;
                extra += 1;
            }
        }
    }
    Ok(format!(
        "{before} inline checks during criteria 1-7, {extra} standalone"
    ))
}

fn scale_invariance() -> Check {
    let corpus: Vec<Instance> = random_corpus(0x5eed_0009, 20, 8, FamilyKind::NonIncreasing);
    for inst in &corpus {
        let g = &inst.graph;
        let wm = model(g, &inst.family);
        let base: Vec<_> = (0..g.num_edges())
            .map(|e| edge_curvature(g, &wm, e))
            .collect();
        for c in [int(2), frac(1, 3)] {
            let scaled = g.scaled(&c);
            // F∘(t ↦ t/c) on the scaled lengths.
            let table = g
                .occurring_lengths()
                .into_iter()
                .map(|t| {
                    let f = inst.family.eval(&t).expect("family defined on its lengths");
                    (&t * &c, f)
                })
                .collect();
            let swm = model(&scaled, &WeightFamily::Table(table));
            for (e, b) in base.iter().enumerate() {
                let s = edge_curvature(&scaled, &swm, e);
                ensure(
                    s.kappa_star == b.kappa_star
                        && s.kappa_laplacian == b.kappa_laplacian
                        && s.kappa_limit == b.kappa_limit,
                    || {
                        format!(
                            "seed {} c = {c} edge {e}: {} vs {}",
                            inst.seed, s.kappa_star, b.kappa_star
                        )
                    },
                )?;
            }
        }
    }
    Ok(format!(
        "{} instances x c in {{2, 1/3}}, all per-edge kappa unchanged",
        corpus.len()
    ))
}

fn run(
    id: usize,
    name: &str,
    budget: Duration,
    f: impl FnOnce() -> Check,
) -> (bool, Option<String>) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let ok = result.is_ok() && in_time;
    let detail = match &result {
        Ok(s) => s.clone(),
        Err(e) => e.clone(),
    };
    let timing = if in_time { "" } else { " OVER BUDGET" };
    println!(
        "{} criterion {id} {name}: {detail} [{:.2}s / {}s{timing}]",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    (ok, result.err())
}

fn main() {
    let secs = Duration::from_secs;
    let mut results = vec![
        run(1, "gauss_bonnet", secs(5), gauss_bonnet),
        run(2, "main_lower_bound", secs(120), lower_bound),
        run(3, "upper_bound", secs(60), upper_bound),
        run(4, "general_bound_equality", secs(120), general_bound),
        run(5, "method_agreement", secs(300), method_agreement),
        run(6, "idleness_structure", secs(60), idleness_structure),
        run(7, "last_segment", secs(30), last_segment),
    ];
    let earlier: Vec<String> = results.iter().filter_map(|(_, e)| e.clone()).collect();
    results.push(run(8, "complementary_slackness", secs(60), || {
        complementary_slackness(&earlier)
    }));
    results.push(run(9, "scale_invariance", secs(60), scale_invariance));
    if results.iter().any(|(ok, _)| !ok) {
        std::process::exit(1);
    }
}
