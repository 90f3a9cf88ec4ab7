//! Weight models `w_e = F(d(e)) / d(e)` and the vertex degrees they induce.

use crate::graph::{Vertex, WeightedGraph};
use crate::ratio::{parse_ratio, pow, Ratio};
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("invalid weight spec `{0}`")]
    BadSpec(String),
    #[error("F({t}) is not rational: {reason}")]
    NonRationalValue { t: Ratio, reason: String },
    #[error("F({t}) = {value} gives a non-positive weight")]
    NonPositiveWeight { t: Ratio, value: Ratio },
    #[error("table has no entry for edge length {0}")]
    TableMissingLength(Ratio),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightFamily {
    /// `F(t) = c`
    Constant(Ratio),
    /// `F(t) = t^p`
    Power(i64),
    /// `F(t) = b^t`, integer `t` only
    Exponential(Ratio),
    /// Explicit `(t, F(t))` pairs.
    Table(Vec<(Ratio, Ratio)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Monotonicity {
    NonIncreasing,
    Increasing,
    Neither,
}

impl fmt::Display for Monotonicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Monotonicity::NonIncreasing => "non_increasing",
            Monotonicity::Increasing => "increasing",
            Monotonicity::Neither => "neither",
        })
    }
}

impl WeightFamily {
    /// Parses `const:<q>`, `power:<int>`, `exp:<q>` or
    /// `table:<t1>=<F1>,<t2>=<F2>,...`.
    pub fn parse(spec: &str) -> Result<Self, WeightError> {
        let bad = || WeightError::BadSpec(spec.to_string());
        let (kind, arg) = spec.trim().split_once(':').ok_or_else(bad)?;
        match kind.trim() {
            "const" => Ok(Self::Constant(parse_ratio(arg).map_err(|_| bad())?)),
            "power" => Ok(Self::Power(arg.trim().parse().map_err(|_| bad())?)),
            "exp" => Ok(Self::Exponential(parse_ratio(arg).map_err(|_| bad())?)),
            "table" => {
                let mut entries = Vec::new();
                for item in arg.split(',').filter(|s| !s.trim().is_empty()) {
                    let (t, f) = item.split_once('=').ok_or_else(bad)?;
                    let t = parse_ratio(t).map_err(|_| bad())?;
                    let f = parse_ratio(f).map_err(|_| bad())?;
                    if entries.iter().any(|(s, _): &(Ratio, Ratio)| *s == t) {
                        return Err(bad());
                    }
                    entries.push((t, f));
                }
                if entries.is_empty() {
                    return Err(bad());
                }
                entries.sort();
                Ok(Self::Table(entries))
            }
            _ => Err(bad()),
        }
    }

    pub fn eval(&self, t: &Ratio) -> Result<Ratio, WeightError> {
        let value = match self {
            Self::Constant(c) => c.clone(),
            Self::Power(p) => {
                if *p < 0 && t.is_zero() {
                    return Err(WeightError::NonRationalValue {
                        t: t.clone(),
                        reason: "zero to a negative power".into(),
                    });
                }
                pow(t, *p)
            }
            Self::Exponential(b) => {
                if !t.is_integer() {
                    return Err(WeightError::NonRationalValue {
                        t: t.clone(),
                        reason: "exponential family needs integer lengths".into(),
                    });
                }
                if !b.is_positive() {
                    return Err(WeightError::NonPositiveWeight {
                        t: t.clone(),
                        value: b.clone(),
                    });
                }
                let e: i64 =
                    t.to_integer()
                        .try_into()
                        .map_err(|_| WeightError::NonRationalValue {
                            t: t.clone(),
                            reason: "exponent out of range".into(),
                        })?;
                pow(b, e)
            }
            Self::Table(entries) => entries
                .iter()
                .find(|(s, _)| s == t)
                .map(|(_, f)| f.clone())
                .ok_or_else(|| WeightError::TableMissingLength(t.clone()))?,
        };
        if !value.is_positive() {
            return Err(WeightError::NonPositiveWeight {
                t: t.clone(),
                value,
            });
        }
        Ok(value)
    }

    /// Analytic classification for the closed-form families; `None` for
    /// tables, which are classified on occurring lengths.
    fn analytic(&self) -> Option<(Monotonicity, bool)> {
        let one = Ratio::one();
        match self {
            Self::Constant(_) => Some((Monotonicity::NonIncreasing, true)),
            Self::Power(p) if *p == 0 => Some((Monotonicity::NonIncreasing, true)),
            Self::Power(p) if *p > 0 => Some((Monotonicity::Increasing, false)),
            Self::Power(_) => Some((Monotonicity::NonIncreasing, false)),
            Self::Exponential(b) if *b == one => Some((Monotonicity::NonIncreasing, true)),
            Self::Exponential(b) if *b > one => Some((Monotonicity::Increasing, false)),
            Self::Exponential(_) => Some((Monotonicity::NonIncreasing, false)),
            Self::Table(_) => None,
        }
    }
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "const:{c}"),
            Self::Power(p) => write!(f, "power:{p}"),
            Self::Exponential(b) => write!(f, "exp:{b}"),
            Self::Table(entries) => {
                f.write_str("table:")?;
                for (i, (t, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{t}={v}")?;
                }
                Ok(())
            }
        }
    }
}

/// Edge weights and vertex degrees for one graph under one family.
#[derive(Debug, Clone)]
pub struct WeightModel {
    family: WeightFamily,
    monotonicity: Monotonicity,
    is_constant: bool,
    constant_on_lengths: bool,
    /// `F(d(e))` per edge.
    f_values: Vec<Ratio>,
    edge_weight: Vec<Ratio>,
    degree: Vec<Ratio>,
}

impl WeightModel {
    pub fn build(g: &WeightedGraph, family: WeightFamily) -> Result<Self, WeightError> {
        let lengths = g.occurring_lengths();
        let values: Vec<Ratio> = lengths
            .iter()
            .map(|t| family.eval(t))
            .collect::<Result<_, _>>()?;
        let constant_on_lengths = values.iter().all(|v| *v == values[0]);
        let (monotonicity, is_constant) = match family.analytic() {
            Some(class) => class,
            None => (classify_table(&values), constant_on_lengths),
        };

        let mut f_values = Vec::with_capacity(g.num_edges());
        let mut edge_weight = Vec::with_capacity(g.num_edges());
        for e in g.edges() {
            let i = lengths
                .binary_search(&e.length)
                .expect("length was collected");
            f_values.push(values[i].clone());
            edge_weight.push(&values[i] / &e.length);
        }
        let degree = (0..g.num_vertices())
            .map(|x| g.incident_edges(x).map(|id| &edge_weight[id]).sum())
            .collect();
        Ok(Self {
            family,
            monotonicity,
            is_constant,
            constant_on_lengths,
            f_values,
            edge_weight,
            degree,
        })
    }

    /// `F ≡ 1`, i.e. `w_e = 1/d(e)`; on unit lengths this is the unweighted walk.
    pub fn unit(g: &WeightedGraph) -> Self {
        Self::build(g, WeightFamily::Constant(Ratio::one()))
            .expect("constant family is always valid")
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    /// Whether `F` is constant as a function (for tables: on occurring lengths).
    pub fn is_constant(&self) -> bool {
        self.is_constant
    }

    /// Whether `F` takes a single value over the edge lengths of the graph.
    pub fn constant_on_lengths(&self) -> bool {
        self.constant_on_lengths
    }

    pub fn f_value(&self, edge: usize) -> &Ratio {
        &self.f_values[edge]
    }

    pub fn edge_weight(&self, edge: usize) -> &Ratio {
        &self.edge_weight[edge]
    }

    pub fn weight(&self, g: &WeightedGraph, x: Vertex, y: Vertex) -> &Ratio {
        let id = g.edge_index(x, y).expect("weight of a non-edge");
        &self.edge_weight[id]
    }

    /// `D_x = Σ_{y∼x} w_xy`.
    pub fn degree(&self, x: Vertex) -> &Ratio {
        &self.degree[x]
    }
}

fn classify_table(values: &[Ratio]) -> Monotonicity {
    // `values` is indexed by ascending length.
    let pairs = || {
        values
            .iter()
            .enumerate()
            .flat_map(|(i, a)| values[i + 1..].iter().map(move |b| (a, b)))
    };
    if pairs().all(|(a, b)| a >= b) {
        Monotonicity::NonIncreasing
    } else if pairs().all(|(a, b)| a < b) {
        Monotonicity::Increasing
    } else {
        Monotonicity::Neither
    }
}
