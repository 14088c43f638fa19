//! The discrete Sugeno integral and the axiomatic recognizers for explicit
//! aggregation tables.
//!
//! Three evaluation routes are provided and must always agree:
//!
//! * `Level`: `⋁_t (t ∧ m({i : x_i ≥ t}))`, with `t` ranging over `{⊥} ∪ {x_i}`.
//!   Between consecutive order statistics the level set is constant, so the
//!   supremum over the whole chain is attained at a coordinate.
//! * `Subset`: `⋁_{∅≠I⊆N} (m(I) ∧ ⋀_{i∈I} x_i)`.
//! * `Sorted`: `⋁_i (x_(i) ∧ m({(i), ..., (n)}))` for an ascending ordering of `x`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::capacity::{capacity_from_table, Capacity, CapacityError};
use crate::chain::{median_of, Chain, ChainError, ChainValue, FiniteChain};
use crate::congruence::IntervalPartition;
use crate::table::{grid_size, AggregationTable, TableError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SugenoError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// A score per criterion, all on one chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScoreVector {
    chain: Chain,
    coords: Vec<ChainValue>,
}

impl ScoreVector {
    pub fn new(chain: Chain, coords: Vec<ChainValue>) -> Result<Self, ChainError> {
        if !coords.iter().all(|v| v.belongs_to(&chain)) {
            return Err(ChainError::Mismatch);
        }
        Ok(ScoreVector { chain, coords })
    }

    /// Parses comma-separated literals, e.g. `"0.54,0.7071,3/7"`.
    pub fn parse(chain: &Chain, text: &str) -> Result<Self, ChainError> {
        let coords = text
            .split(',')
            .map(|s| chain.parse_value(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ScoreVector {
            chain: chain.clone(),
            coords,
        })
    }

    pub fn from_levels(chain: &FiniteChain, levels: &[usize]) -> Self {
        ScoreVector {
            chain: Chain::Finite(chain.clone()),
            coords: levels
                .iter()
                .map(|&i| chain.level(i).expect("level within chain"))
                .collect(),
        }
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn coords(&self) -> &[ChainValue] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn level_indices(&self) -> Option<Vec<usize>> {
        self.coords.iter().map(ChainValue::level_index).collect()
    }
}

impl fmt::Display for ScoreVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    Level,
    Subset,
    Sorted,
}

impl Formula {
    pub const ALL: [Formula; 3] = [Formula::Level, Formula::Subset, Formula::Sorted];

    pub fn name(self) -> &'static str {
        match self {
            Formula::Level => "level",
            Formula::Subset => "subset",
            Formula::Sorted => "sorted",
        }
    }
}

impl FromStr for Formula {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "level" => Ok(Formula::Level),
            "subset" => Ok(Formula::Subset),
            "sorted" => Ok(Formula::Sorted),
            other => Err(format!("unknown formula {other:?}")),
        }
    }
}

pub(crate) fn su_level<K: Ord + Copy>(m: &[K], x: &[K], bottom: K) -> K {
    let mut best = bottom;
    for &t in x {
        let mask = x
            .iter()
            .enumerate()
            .filter(|&(_, &xi)| xi >= t)
            .fold(0usize, |acc, (i, _)| acc | 1 << i);
        best = best.max(t.min(m[mask]));
    }
    best
}

pub(crate) fn su_subset<K: Ord + Copy>(m: &[K], x: &[K], bottom: K) -> K {
    let mut best = bottom;
    for (mask, &mi) in m.iter().enumerate().take(1 << x.len()).skip(1) {
        let inner = x
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .fold(mi, |acc, (_, &xi)| acc.min(xi));
        best = best.max(inner);
    }
    best
}

/// Sorted form for a given ascending ordering of the coordinates.
pub(crate) fn su_with_order<K: Ord + Copy>(m: &[K], x: &[K], order: &[usize], bottom: K) -> K {
    debug_assert!(order.windows(2).all(|w| x[w[0]] <= x[w[1]]));
    let mut mask = (1usize << x.len()) - 1;
    let mut best = bottom;
    for &i in order {
        best = best.max(x[i].min(m[mask]));
        mask &= !(1 << i);
    }
    best
}

pub(crate) fn su_sorted<K: Ord + Copy>(m: &[K], x: &[K], bottom: K) -> K {
    let mut order: Vec<usize> = (0..x.len()).collect();
    // stable: ties keep index order
    order.sort_by_key(|&i| x[i]);
    su_with_order(m, x, &order, bottom)
}

pub(crate) fn su_keys<K: Ord + Copy>(formula: Formula, m: &[K], x: &[K], bottom: K) -> K {
    match formula {
        Formula::Level => su_level(m, x, bottom),
        Formula::Subset => su_subset(m, x, bottom),
        Formula::Sorted => su_sorted(m, x, bottom),
    }
}

/// `Su_m(x)` computed by the chosen formula; exact.
pub fn sugeno_eval(c: &Capacity, x: &ScoreVector, formula: Formula) -> Result<ChainValue, SugenoError> {
    if x.chain() != c.chain() {
        return Err(ChainError::Mismatch.into());
    }
    if x.len() != c.n() {
        return Err(SugenoError::Arity {
            expected: c.n(),
            got: x.len(),
        });
    }
    let bottom = c.chain().bottom();
    let m: Vec<_> = c.values().iter().map(ChainValue::key).collect();
    let xs: Vec<_> = x.coords().iter().map(ChainValue::key).collect();
    let key = su_keys(formula, &m, &xs, bottom.key());
    Ok(ChainValue::from_key(c.chain(), key))
}

/// Materializes `Su_m` on every point of `chain^n`. A unit-interval capacity
/// is first re-expressed on `chain`, whose labels must then be numeric and
/// include every capacity value.
pub fn sugeno_table(c: &Capacity, chain: &FiniteChain, max_grid: usize) -> Result<AggregationTable, SugenoError> {
    let c = c.restrict_to(chain)?;
    let n = c.n();
    let k = chain.len();
    let size = grid_size(k, n, max_grid)?;
    let m = c.level_indices().expect("finite capacity");
    let eval = |i: usize| {
        let mut p = vec![0; n];
        crate::table::decode_into(i, k, &mut p);
        su_sorted(&m, &p, 0)
    };
    let entries: Vec<usize> = if size > 1 << 14 {
        (0..size).into_par_iter().map(eval).collect()
    } else {
        (0..size).map(eval).collect()
    };
    Ok(AggregationTable::from_entries_unchecked(chain.clone(), n, entries))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Sugeno,
    Idempotent,
    ComonotoneMaxitive,
    MinHomogeneous,
    MedianDecomposable,
    Compatible,
    ScaleInvariant,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Sugeno => "sugeno",
            Property::Idempotent => "idempotent",
            Property::ComonotoneMaxitive => "comonotone-maxitive",
            Property::MinHomogeneous => "min-homogeneous",
            Property::MedianDecomposable => "median-decomposable",
            Property::Compatible => "compatible",
            Property::ScaleInvariant => "scale-invariant",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [
            Property::Sugeno,
            Property::Idempotent,
            Property::ComonotoneMaxitive,
            Property::MinHomogeneous,
            Property::MedianDecomposable,
            Property::Compatible,
            Property::ScaleInvariant,
        ]
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| format!("unknown property {s:?}"))
    }
}

/// A witness that a property fails.
///
/// What `expected` and `actual` hold depends on the property:
///
/// | property | witness | expected | actual |
/// |---|---|---|---|
/// | sugeno | x | `Su_m(x)`, `m(E) = A(1_E)` | `A(x)` |
/// | idempotent | x = (c,…,c) | c | `A(x)` |
/// | comonotone-maxitive | x, y | `A(x) ∨ A(y)` | `A(x ∨ y)` |
/// | min-homogeneous | x, c | `A(x) ∧ c` | `A(x ∧ c)` |
/// | median-decomposable | x, k | `med(A(x_k), x_k, A(x^k))` | `A(x)` |
/// | compatible | x, y, partition | `A(x)` | `A(y)` |
/// | scale-invariant (capacity) | x | `φ(Su_m(x))` | `Su_φ(m)(φ(x))` |
/// | scale-invariant (table) | x, y, partition | `A(x)` | `A(y)` |
///
/// A table-level scale-invariance witness gives the fibers of an
/// epimorphism `φ` with `φ(x) = φ(y)` but `φ(A(x)) ≠ φ(A(y))`, so no `B`
/// with `φ(A(x)) = B(φ(x))` exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub property: Property,
    pub x: ScoreVector,
    pub y: Option<ScoreVector>,
    pub constant: Option<ChainValue>,
    /// 1-based criterion index.
    pub coordinate: Option<usize>,
    pub partition: Option<IntervalPartition>,
    pub expected: ChainValue,
    pub actual: ChainValue,
}

impl Counterexample {
    fn new(property: Property, x: ScoreVector, expected: ChainValue, actual: ChainValue) -> Self {
        Counterexample {
            property,
            x,
            y: None,
            constant: None,
            coordinate: None,
            partition: None,
            expected,
            actual,
        }
    }

    /// Re-evaluates the witness against `t` and reports whether the
    /// discrepancy is reproduced. Scale-invariance witnesses without a pair
    /// `x, y` depend on the capacity and return `false`.
    pub fn reproduces(&self, t: &AggregationTable) -> bool {
        let Some(x) = self.x.level_indices() else {
            return false;
        };
        let y = self.y.as_ref().and_then(ScoreVector::level_indices);
        let c = self.constant.as_ref().and_then(ChainValue::level_index);
        let a = |p: &[usize]| t.get(p);
        let top = t.chain().top_index();
        let (expected, actual) = match self.property {
            Property::Sugeno => {
                let m = capacity_from_table(t).level_indices().expect("finite");
                (su_sorted(&m, &x, 0), a(&x))
            }
            Property::Idempotent => (x[0], a(&x)),
            Property::ComonotoneMaxitive => {
                let Some(y) = y else { return false };
                if !comonotone(&x, &y) {
                    return false;
                }
                let j: Vec<usize> = x.iter().zip(&y).map(|(p, q)| *p.max(q)).collect();
                (a(&x).max(a(&y)), a(&j))
            }
            Property::MinHomogeneous => {
                let Some(c) = c else { return false };
                let low: Vec<usize> = x.iter().map(|&v| v.min(c)).collect();
                (a(&x).min(c), a(&low))
            }
            Property::MedianDecomposable => {
                let Some(k) = self.coordinate.filter(|&k| k >= 1 && k <= x.len()) else {
                    return false;
                };
                let (mut lo, mut hi) = (x.clone(), x.clone());
                lo[k - 1] = 0;
                hi[k - 1] = top;
                (median_of(a(&lo), x[k - 1], a(&hi)), a(&x))
            }
            Property::Compatible | Property::ScaleInvariant => {
                let (Some(y), Some(p)) = (y, self.partition.as_ref()) else {
                    return false;
                };
                let Ok(class) = p.finite_classes() else {
                    return false;
                };
                if x.iter().zip(&y).any(|(&u, &v)| class[u] != class[v]) {
                    return false;
                }
                return class[a(&x)] != class[a(&y)];
            }
        };
        expected != actual && Some(expected) == self.expected.level_index() && Some(actual) == self.actual.level_index()
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at x = {}", self.property, self.x)?;
        if let Some(y) = &self.y {
            write!(f, ", y = {y}")?;
        }
        if let Some(c) = &self.constant {
            write!(f, ", c = {c}")?;
        }
        if let Some(k) = self.coordinate {
            write!(f, ", k = {k}")?;
        }
        if let Some(p) = &self.partition {
            write!(f, ", partition {}", p.describe())?;
        }
        write!(f, ": expected {}, got {}", self.expected, self.actual)
    }
}

/// No `i, j` with `x_i < x_j` and `y_i > y_j`.
pub(crate) fn comonotone<K: Ord>(x: &[K], y: &[K]) -> bool {
    (0..x.len()).all(|i| (0..x.len()).all(|j| !(x[i] < x[j] && y[i] > y[j])))
}

fn grid_points(t: &AggregationTable) -> Vec<Vec<usize>> {
    (0..t.grid_len()).map(|i| t.point(i)).collect()
}

/// Returns the capacity `m(E) = A(1_E)` when `A = Su_m`, otherwise the first
/// grid point where `A` and `Su_m` differ.
pub fn recognize_sugeno(t: &AggregationTable) -> Result<Capacity, Box<Counterexample>> {
    let m = capacity_from_table(t);
    let levels = m.level_indices().expect("finite capacity");
    let chain = t.chain();
    for (i, &entry) in t.entries().iter().enumerate() {
        let p = t.point(i);
        let su = su_sorted(&levels, &p, 0);
        if su != entry {
            return Err(Box::new(Counterexample::new(
                Property::Sugeno,
                ScoreVector::from_levels(chain, &p),
                t.level(su),
                t.level(entry),
            )));
        }
    }
    Ok(m)
}

pub fn check_idempotent(t: &AggregationTable) -> Result<(), Box<Counterexample>> {
    for c in 0..t.chain().len() {
        let p = vec![c; t.arity()];
        let v = t.get(&p);
        if v != c {
            return Err(Box::new(Counterexample::new(
                Property::Idempotent,
                ScoreVector::from_levels(t.chain(), &p),
                t.level(c),
                t.level(v),
            )));
        }
    }
    Ok(())
}

/// `A(x ∨ y) = A(x) ∨ A(y)` for every comonotone pair of grid points.
pub fn check_comonotone_maxitive(t: &AggregationTable) -> Result<(), Box<Counterexample>> {
    let points = grid_points(t);
    let entries = t.entries();
    for (i, x) in points.iter().enumerate() {
        for (j, y) in points.iter().enumerate().skip(i + 1) {
            if !comonotone(x, y) {
                continue;
            }
            let joined: Vec<usize> = x.iter().zip(y).map(|(a, b)| *a.max(b)).collect();
            let expected = entries[i].max(entries[j]);
            let actual = t.get(&joined);
            if actual != expected {
                let mut cx = Counterexample::new(
                    Property::ComonotoneMaxitive,
                    ScoreVector::from_levels(t.chain(), x),
                    t.level(expected),
                    t.level(actual),
                );
                cx.y = Some(ScoreVector::from_levels(t.chain(), y));
                return Err(Box::new(cx));
            }
        }
    }
    Ok(())
}

/// `A(x ∧ (c,…,c)) = A(x) ∧ c` for every grid point and every constant.
pub fn check_min_homogeneous(t: &AggregationTable) -> Result<(), Box<Counterexample>> {
    let k = t.chain().len();
    for (i, x) in grid_points(t).iter().enumerate() {
        for c in 0..k {
            let low: Vec<usize> = x.iter().map(|&v| v.min(c)).collect();
            let expected = t.entries()[i].min(c);
            let actual = t.get(&low);
            if actual != expected {
                let mut cx = Counterexample::new(
                    Property::MinHomogeneous,
                    ScoreVector::from_levels(t.chain(), x),
                    t.level(expected),
                    t.level(actual),
                );
                cx.constant = Some(t.level(c));
                return Err(Box::new(cx));
            }
        }
    }
    Ok(())
}

/// `A(x) = med(A(x_k), x_k, A(x^k))` for every grid point and coordinate,
/// where `x_k` / `x^k` set the `k`-th coordinate to bottom / top.
pub fn check_median_decomposable(t: &AggregationTable) -> Result<(), Box<Counterexample>> {
    let top = t.chain().top_index();
    for (i, x) in grid_points(t).iter().enumerate() {
        for k in 0..t.arity() {
            let mut lo = x.clone();
            let mut hi = x.clone();
            lo[k] = 0;
            hi[k] = top;
            let expected = median_of(t.get(&lo), x[k], t.get(&hi));
            let actual = t.entries()[i];
            if actual != expected {
                let mut cx = Counterexample::new(
                    Property::MedianDecomposable,
                    ScoreVector::from_levels(t.chain(), x),
                    t.level(expected),
                    t.level(actual),
                );
                cx.coordinate = Some(k + 1);
                return Err(Box::new(cx));
            }
        }
    }
    Ok(())
}
