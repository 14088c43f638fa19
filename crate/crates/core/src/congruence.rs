//! Congruences of chains and compatibility of aggregation tables.
//!
//! On a chain the congruences are exactly the partitions into intervals, so
//! an [`IntervalPartition`] is the working representation. The general
//! [`EquivalenceRelation`] exists to check that claim: the closure test of
//! [`is_congruence`] and the interval test of
//! [`EquivalenceRelation::classes_are_intervals`] are independent routes.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::capacity::{enumerate_capacities, CapacityError};
use crate::chain::{compare, Chain, ChainError, ChainValue, FiniteChain, UnitValue};
use crate::sugeno::{recognize_sugeno, sugeno_table, Counterexample, Property, ScoreVector};
use crate::table::{encode, enumerate_aggregation_tables, AggregationTable, TableError};

pub const MAX_PARTITION_LEVELS: usize = 20;
pub const MAX_RELATION_LEVELS: usize = 10;

/// Outcome of a property check on a table.
pub type Check = Result<(), Box<Counterexample>>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("a partition needs at least one block")]
    NoBlocks,
    #[error("the first block must start at the bottom, closed")]
    BadStart,
    #[error("the last block must end at the top, closed")]
    BadEnd,
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("block {0} is not adjacent to the next one or overlaps it")]
    NotAdjacent(usize),
    #[error("cuts must be strictly increasing level positions below the top, got {0:?}")]
    BadCuts(Vec<usize>),
    #[error("this partition needs a finite chain")]
    NeedsFiniteChain,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CongruenceError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error("chain of {levels} levels exceeds the limit of {limit}")]
    SizeLimit { levels: usize, limit: usize },
}

/// One block of a partition of `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitInterval {
    pub lo: UnitValue,
    pub lo_closed: bool,
    pub hi: UnitValue,
    pub hi_closed: bool,
}

impl UnitInterval {
    pub fn contains(&self, v: &UnitValue) -> bool {
        let above = if self.lo_closed { *v >= self.lo } else { *v > self.lo };
        let below = if self.hi_closed { *v <= self.hi } else { *v < self.hi };
        above && below
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }
}

impl fmt::Display for UnitInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            return write!(f, "{{{}}}", self.lo);
        }
        let open = if self.lo_closed { "[" } else { "]" };
        let close = if self.hi_closed { "]" } else { "[" };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

/// A partition of a chain into consecutive, nonempty intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntervalPartition {
    Unit(Vec<UnitInterval>),
    /// `starts[b]` is the first level of block `b`; `starts[0] == 0`.
    Finite {
        chain: FiniteChain,
        starts: Vec<usize>,
    },
}

impl IntervalPartition {
    pub fn unit(blocks: Vec<UnitInterval>) -> Result<Self, PartitionError> {
        let (first, last) = match (blocks.first(), blocks.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(PartitionError::NoBlocks),
        };
        if !first.lo.as_rational().eq(&num_traits::Zero::zero()) || !first.lo_closed {
            return Err(PartitionError::BadStart);
        }
        if !last.hi.as_rational().eq(&num_traits::One::one()) || !last.hi_closed {
            return Err(PartitionError::BadEnd);
        }
        if let Some(i) = blocks.iter().position(UnitInterval::is_empty) {
            return Err(PartitionError::EmptyBlock(i));
        }
        for (i, w) in blocks.windows(2).enumerate() {
            if w[0].hi != w[1].lo || w[0].hi_closed == w[1].lo_closed {
                return Err(PartitionError::NotAdjacent(i));
            }
        }
        Ok(IntervalPartition::Unit(blocks))
    }

    /// Finite-chain partition from cut positions: a cut `c` separates level
    /// `c` from level `c + 1` (0-based).
    pub fn from_cuts(chain: &FiniteChain, cuts: &[usize]) -> Result<Self, PartitionError> {
        let ok = cuts.windows(2).all(|w| w[0] < w[1]) && cuts.iter().all(|&c| c + 1 < chain.len());
        if !ok {
            return Err(PartitionError::BadCuts(cuts.to_vec()));
        }
        let starts = std::iter::once(0).chain(cuts.iter().map(|c| c + 1)).collect();
        Ok(IntervalPartition::Finite {
            chain: chain.clone(),
            starts,
        })
    }

    /// The one-block partition (total congruence).
    pub fn whole(chain: &Chain) -> Self {
        match chain {
            Chain::Unit => IntervalPartition::Unit(vec![UnitInterval {
                lo: unit_of(&chain.bottom()),
                lo_closed: true,
                hi: unit_of(&chain.top()),
                hi_closed: true,
            }]),
            Chain::Finite(c) => IntervalPartition::Finite {
                chain: c.clone(),
                starts: vec![0],
            },
        }
    }

    /// The all-singletons partition (equality relation) of a finite chain.
    pub fn singletons(chain: &FiniteChain) -> Self {
        IntervalPartition::Finite {
            chain: chain.clone(),
            starts: (0..chain.len()).collect(),
        }
    }

    /// `{[⊥, x], ]x, ⊤]}`; just `{[⊥, ⊤]}` when `x` is the top.
    pub fn split_at(x: &ChainValue) -> Self {
        let chain = x.chain();
        match (&chain, x) {
            (Chain::Finite(c), ChainValue::Level(l)) => {
                let cuts: Vec<usize> = if l.index() < c.top_index() {
                    vec![l.index()]
                } else {
                    vec![]
                };
                Self::from_cuts(c, &cuts).expect("valid cut")
            }
            (Chain::Unit, ChainValue::Unit(v)) => {
                let one = unit_of(&chain.top());
                if *v == one {
                    return Self::whole(&chain);
                }
                IntervalPartition::Unit(vec![
                    UnitInterval {
                        lo: unit_of(&chain.bottom()),
                        lo_closed: true,
                        hi: v.clone(),
                        hi_closed: true,
                    },
                    UnitInterval {
                        lo: v.clone(),
                        lo_closed: false,
                        hi: one,
                        hi_closed: true,
                    },
                ])
            }
            _ => unreachable!("value and chain kind agree"),
        }
    }

    /// `{[⊥, x]} ∪ {{y} : y > x}` on a finite chain.
    pub fn collapse_below(x: &ChainValue) -> Result<Self, PartitionError> {
        match x {
            ChainValue::Level(l) => {
                let cuts: Vec<usize> = (l.index()..l.chain().top_index()).collect();
                Self::from_cuts(l.chain(), &cuts)
            }
            ChainValue::Unit(_) => Err(PartitionError::NeedsFiniteChain),
        }
    }

    /// `{[⊥, x[, [x, ⊤]}`; just `{[⊥, ⊤]}` when `x` is the bottom.
    pub fn split_below(x: &ChainValue) -> Self {
        let chain = x.chain();
        match (&chain, x) {
            (Chain::Finite(c), ChainValue::Level(l)) => {
                let cuts: Vec<usize> = if l.index() > 0 { vec![l.index() - 1] } else { vec![] };
                Self::from_cuts(c, &cuts).expect("valid cut")
            }
            (Chain::Unit, ChainValue::Unit(v)) => {
                let zero = unit_of(&chain.bottom());
                if *v == zero {
                    return Self::whole(&chain);
                }
                IntervalPartition::Unit(vec![
                    UnitInterval {
                        lo: zero,
                        lo_closed: true,
                        hi: v.clone(),
                        hi_closed: false,
                    },
                    UnitInterval {
                        lo: v.clone(),
                        lo_closed: true,
                        hi: unit_of(&chain.top()),
                        hi_closed: true,
                    },
                ])
            }
            _ => unreachable!("value and chain kind agree"),
        }
    }

    /// `{{y} : y < x} ∪ {[x, ⊤]}` on a finite chain.
    pub fn collapse_above(x: &ChainValue) -> Result<Self, PartitionError> {
        match x {
            ChainValue::Level(l) => {
                let cuts: Vec<usize> = (0..l.index()).collect();
                Self::from_cuts(l.chain(), &cuts)
            }
            ChainValue::Unit(_) => Err(PartitionError::NeedsFiniteChain),
        }
    }

    pub fn chain(&self) -> Chain {
        match self {
            IntervalPartition::Unit(_) => Chain::Unit,
            IntervalPartition::Finite { chain, .. } => Chain::Finite(chain.clone()),
        }
    }

    pub fn block_count(&self) -> usize {
        match self {
            IntervalPartition::Unit(b) => b.len(),
            IntervalPartition::Finite { starts, .. } => starts.len(),
        }
    }

    /// Cut positions of a finite-chain partition.
    pub fn cuts(&self) -> Option<Vec<usize>> {
        match self {
            IntervalPartition::Finite { starts, .. } => Some(starts[1..].iter().map(|s| s - 1).collect()),
            IntervalPartition::Unit(_) => None,
        }
    }

    pub fn unit_blocks(&self) -> Option<&[UnitInterval]> {
        match self {
            IntervalPartition::Unit(b) => Some(b),
            IntervalPartition::Finite { .. } => None,
        }
    }

    /// Index of the block containing `v`.
    pub fn class_of(&self, v: &ChainValue) -> Result<usize, ChainError> {
        match (self, v) {
            (IntervalPartition::Unit(blocks), ChainValue::Unit(u)) => {
                // blocks lying entirely below v
                let i = blocks.partition_point(|b| *u > b.hi || (*u == b.hi && !b.hi_closed));
                debug_assert!(blocks[i].contains(u));
                Ok(i)
            }
            (IntervalPartition::Finite { chain, starts }, ChainValue::Level(l)) if l.chain() == chain => {
                Ok(starts.partition_point(|&s| s <= l.index()) - 1)
            }
            _ => Err(ChainError::Mismatch),
        }
    }

    /// Block index of every level of a finite chain.
    pub fn finite_classes(&self) -> Result<Vec<usize>, PartitionError> {
        match self {
            IntervalPartition::Finite { chain, starts } => {
                let mut class = Vec::with_capacity(chain.len());
                for (b, &s) in starts.iter().enumerate() {
                    let end = starts.get(b + 1).copied().unwrap_or(chain.len());
                    class.extend(std::iter::repeat_n(b, end - s));
                }
                Ok(class)
            }
            IntervalPartition::Unit(_) => Err(PartitionError::NeedsFiniteChain),
        }
    }

    /// Human-readable block list, e.g. `{[0, 0.3], ]0.3, 1]}` or `{{a,b},{c}}`.
    pub fn describe(&self) -> String {
        match self {
            IntervalPartition::Unit(blocks) => {
                let parts: Vec<String> = blocks.iter().map(ToString::to_string).collect();
                format!("{{{}}}", parts.join(", "))
            }
            IntervalPartition::Finite { chain, starts } => {
                let parts: Vec<String> = starts
                    .iter()
                    .enumerate()
                    .map(|(b, &s)| {
                        let end = starts.get(b + 1).copied().unwrap_or(chain.len());
                        format!("{{{}}}", chain.levels()[s..end].join(","))
                    })
                    .collect();
                format!("{{{}}}", parts.join(","))
            }
        }
    }
}

impl fmt::Display for IntervalPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn unit_of(v: &ChainValue) -> UnitValue {
    match v {
        ChainValue::Unit(u) => u.clone(),
        ChainValue::Level(_) => unreachable!("unit chain value"),
    }
}

/// Every interval partition of a finite chain, one per subset of the
/// `|L| - 1` gaps, ordered by gap bitmask (bit `g` cuts after level `g`):
/// the one-block partition first, all singletons last.
pub fn enumerate_interval_partitions(
    chain: &FiniteChain,
) -> Result<impl Iterator<Item = IntervalPartition>, CongruenceError> {
    let k = chain.len();
    if k > MAX_PARTITION_LEVELS {
        return Err(CongruenceError::SizeLimit {
            levels: k,
            limit: MAX_PARTITION_LEVELS,
        });
    }
    let chain = chain.clone();
    Ok((0u32..1 << (k - 1)).map(move |mask| {
        let cuts: Vec<usize> = (0..k - 1).filter(|g| mask & (1 << g) != 0).collect();
        IntervalPartition::from_cuts(&chain, &cuts).expect("valid cuts")
    }))
}

/// An equivalence relation on a finite chain, as a class id per level.
/// Class ids are canonical: numbered by first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquivalenceRelation {
    chain: FiniteChain,
    class: Vec<usize>,
}

impl EquivalenceRelation {
    pub fn new(chain: &FiniteChain, assignment: &[usize]) -> Result<Self, ChainError> {
        if assignment.len() != chain.len() {
            return Err(ChainError::IndexOutOfRange {
                index: assignment.len(),
                len: chain.len(),
            });
        }
        let mut seen: Vec<usize> = Vec::new();
        let class = assignment
            .iter()
            .map(|a| match seen.iter().position(|s| s == a) {
                Some(i) => i,
                None => {
                    seen.push(*a);
                    seen.len() - 1
                }
            })
            .collect();
        Ok(EquivalenceRelation {
            chain: chain.clone(),
            class,
        })
    }

    /// Builds the relation from a list of classes of level indices.
    pub fn from_classes(chain: &FiniteChain, classes: &[Vec<usize>]) -> Result<Self, ChainError> {
        let mut assignment = vec![usize::MAX; chain.len()];
        for (c, members) in classes.iter().enumerate() {
            for &m in members {
                match assignment.get_mut(m) {
                    Some(slot) if *slot == usize::MAX => *slot = c,
                    _ => {
                        return Err(ChainError::IndexOutOfRange {
                            index: m,
                            len: chain.len(),
                        })
                    }
                }
            }
        }
        if assignment.contains(&usize::MAX) {
            return Err(ChainError::Parse("classes do not cover the chain".into()));
        }
        Self::new(chain, &assignment)
    }

    pub fn chain(&self) -> &FiniteChain {
        &self.chain
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class[a] == self.class[b]
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let count = self.class.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); count];
        for (level, &c) in self.class.iter().enumerate() {
            out[c].push(level);
        }
        out
    }

    /// Whether every class is a set of consecutive levels.
    pub fn classes_are_intervals(&self) -> bool {
        self.classes().iter().all(|c| c.last().unwrap() - c[0] + 1 == c.len())
    }

    /// The same relation as an interval partition, when it is one.
    pub fn to_interval_partition(&self) -> Option<IntervalPartition> {
        if !self.classes_are_intervals() {
            return None;
        }
        let cuts: Vec<usize> = (0..self.chain.len() - 1)
            .filter(|&i| self.class[i] != self.class[i + 1])
            .collect();
        IntervalPartition::from_cuts(&self.chain, &cuts).ok()
    }

    /// All `Bell(|L|)` equivalence relations, in lexicographic order of
    /// their restricted growth strings.
    pub fn enumerate_all(chain: &FiniteChain) -> Result<Vec<EquivalenceRelation>, CongruenceError> {
        let k = chain.len();
        if k > MAX_RELATION_LEVELS {
            return Err(CongruenceError::SizeLimit {
                levels: k,
                limit: MAX_RELATION_LEVELS,
            });
        }
        let mut out = Vec::new();
        let mut rgs = vec![0usize; k];
        loop {
            out.push(EquivalenceRelation {
                chain: chain.clone(),
                class: rgs.clone(),
            });
            // next restricted growth string
            let mut i = k - 1;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                let bound = rgs[..i].iter().max().unwrap() + 1;
                if rgs[i] < bound {
                    rgs[i] += 1;
                    rgs[i + 1..].iter_mut().for_each(|v| *v = 0);
                    break;
                }
                i -= 1;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeOp {
    Join,
    Meet,
}

/// Related pairs `(a, b)`, `(c, d)` whose coordinatewise join or meet
/// `result` is not related.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceViolation {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub op: LatticeOp,
    pub result: (usize, usize),
}

/// Closure of the relation under coordinatewise join and meet of related
/// pairs. Pairs are scanned in lexicographic order; join before meet.
pub fn is_congruence(r: &EquivalenceRelation) -> Result<(), CongruenceViolation> {
    let k = r.chain.len();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (0..k).map(move |b| (a, b)))
        .filter(|&(a, b)| r.related(a, b))
        .collect();
    for &(a, b) in &pairs {
        for &(c, d) in &pairs {
            let candidates = [
                (LatticeOp::Join, (a.max(c), b.max(d))),
                (LatticeOp::Meet, (a.min(c), b.min(d))),
            ];
            for (op, (e, f)) in candidates {
                if !r.related(e, f) {
                    return Err(CongruenceViolation {
                        first: (a, b),
                        second: (c, d),
                        op,
                        result: (e, f),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Checks that grid points with congruent coordinates have congruent images.
/// The first violation in grid order is reported: `y` is the earliest point
/// whose class tuple was already seen at `x` with an image in another class.
pub fn is_compatible(t: &AggregationTable, p: &IntervalPartition) -> Result<Check, CongruenceError> {
    if p.chain() != Chain::Finite(t.chain().clone()) {
        return Err(ChainError::Mismatch.into());
    }
    let class = p.finite_classes()?;
    Ok(compatible_with_classes(t, &class, p.block_count()).map_err(|(x, y)| {
        let chain = t.chain();
        let (px, py) = (t.point(x), t.point(y));
        Box::new(Counterexample {
            property: Property::Compatible,
            x: ScoreVector::from_levels(chain, &px),
            y: Some(ScoreVector::from_levels(chain, &py)),
            constant: None,
            coordinate: None,
            partition: Some(p.clone()),
            expected: t.level(t.entries()[x]),
            actual: t.level(t.entries()[y]),
        })
    }))
}

fn compatible_with_classes(t: &AggregationTable, class: &[usize], blocks: usize) -> Result<(), (usize, usize)> {
    let n = t.arity();
    let mut seen: Vec<Option<usize>> = vec![None; blocks.pow(n as u32)];
    let mut tuple = vec![0; n];
    for (i, &entry) in t.entries().iter().enumerate() {
        crate::table::decode_into(i, t.chain().len(), &mut tuple);
        tuple.iter_mut().for_each(|v| *v = class[*v]);
        let slot = &mut seen[encode(&tuple, blocks)];
        match *slot {
            None => *slot = Some(i),
            Some(first) if class[t.entries()[first]] != class[entry] => return Err((first, i)),
            Some(_) => {}
        }
    }
    Ok(())
}

/// Compatibility with every congruence of the chain; the counterexample
/// names the first failing partition in enumeration order.
pub fn is_compatible_all(t: &AggregationTable) -> Result<Check, CongruenceError> {
    for p in enumerate_interval_partitions(t.chain())? {
        let check = is_compatible(t, &p)?;
        if check.is_err() {
            return Ok(check);
        }
    }
    Ok(Ok(()))
}

/// A table in the symmetric difference of the compatible and Sugeno sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableWitness {
    pub entries: Vec<String>,
    pub sugeno: bool,
    pub compatible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem1Report {
    pub arity: usize,
    pub chain_size: usize,
    pub tables_total: usize,
    pub compatible_count: usize,
    pub sugeno_count: usize,
    /// Number of capacities on the chain, when enumerable.
    pub capacity_count: Option<usize>,
    /// Distinct tables among the materialized capacities; equal to
    /// `capacity_count` iff `m ↦ Su_m` is injective.
    pub distinct_capacity_tables: Option<usize>,
    pub sets_equal: bool,
    pub witnesses: Vec<TableWitness>,
}

impl Theorem1Report {
    pub fn holds(&self) -> bool {
        self.sets_equal
            && self
                .capacity_count
                .is_none_or(|c| Some(c) == self.distinct_capacity_tables && c == self.sugeno_count)
    }
}

const MAX_WITNESSES: usize = 5;

/// Enumerates every aggregation table on `chain^n` and compares the set of
/// Sugeno tables with the set of tables compatible with every congruence.
pub fn verify_theorem1(n: usize, chain: &FiniteChain, max_grid: usize) -> Result<Theorem1Report, CongruenceError> {
    let partitions: Vec<Vec<usize>> = enumerate_interval_partitions(chain)?
        .map(|p| p.finite_classes().expect("finite"))
        .collect();
    let tables: Vec<AggregationTable> = enumerate_aggregation_tables(n, chain, max_grid)?.collect();
    let verdicts: Vec<(bool, bool)> = tables
        .par_iter()
        .map(|t| {
            let sugeno = recognize_sugeno(t).is_ok();
            let compatible = partitions.iter().all(|class| {
                let blocks = class.last().unwrap() + 1;
                compatible_with_classes(t, class, blocks).is_ok()
            });
            (sugeno, compatible)
        })
        .collect();
    let witnesses = tables
        .iter()
        .zip(&verdicts)
        .filter(|(_, (s, c))| s != c)
        .take(MAX_WITNESSES)
        .map(|(t, &(sugeno, compatible))| TableWitness {
            entries: t.entries().iter().map(|&e| chain.levels()[e].clone()).collect(),
            sugeno,
            compatible,
        })
        .collect::<Vec<_>>();

    let (capacity_count, distinct_capacity_tables) = match enumerate_capacities(n, chain) {
        Ok(caps) => {
            // the grid is within max_grid already, enumeration succeeded above
            let mut tables: Vec<Vec<usize>> = caps
                .map(|m| {
                    sugeno_table(&m, chain, usize::MAX)
                        .expect("capacity on the same chain")
                        .entries()
                        .to_vec()
                })
                .collect();
            let count = tables.len();
            tables.sort();
            tables.dedup();
            (Some(count), Some(tables.len()))
        }
        Err(CapacityError::SizeLimit) => (None, None),
        Err(e) => return Err(e.into()),
    };

    Ok(Theorem1Report {
        arity: n,
        chain_size: chain.len(),
        tables_total: tables.len(),
        compatible_count: verdicts.iter().filter(|v| v.1).count(),
        sugeno_count: verdicts.iter().filter(|v| v.0).count(),
        capacity_count,
        distinct_capacity_tables,
        sets_equal: witnesses.is_empty(),
        witnesses,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Proposition1Report {
    pub chain_size: usize,
    pub relations_total: usize,
    pub congruences: usize,
    pub interval_partitions: usize,
    /// Closure test and interval test agree on every relation.
    pub routes_agree: bool,
    /// The congruences are exactly the enumerated interval partitions.
    pub congruences_are_interval_partitions: bool,
}

impl Proposition1Report {
    pub fn holds(&self) -> bool {
        self.routes_agree && self.congruences_are_interval_partitions
    }
}

/// Checks on every equivalence relation of a `k`-chain that the congruences
/// are exactly the interval partitions.
pub fn verify_proposition1(chain: &FiniteChain) -> Result<Proposition1Report, CongruenceError> {
    let relations = EquivalenceRelation::enumerate_all(chain)?;
    let mut congruent: Vec<IntervalPartition> = Vec::new();
    let mut routes_agree = true;
    let mut all_convert = true;
    for r in &relations {
        let closed = is_congruence(r).is_ok();
        routes_agree &= closed == r.classes_are_intervals();
        if closed {
            match r.to_interval_partition() {
                Some(p) => congruent.push(p),
                None => all_convert = false,
            }
        }
    }
    let mut expected: Vec<IntervalPartition> = enumerate_interval_partitions(chain)?.collect();
    let key = |p: &IntervalPartition| p.cuts().unwrap_or_default();
    congruent.sort_by_key(key);
    expected.sort_by_key(key);
    Ok(Proposition1Report {
        chain_size: chain.len(),
        relations_total: relations.len(),
        congruences: congruent.len(),
        interval_partitions: expected.len(),
        routes_agree,
        congruences_are_interval_partitions: all_convert && congruent == expected,
    })
}

/// Whether `a` and `b` lie in the same block.
pub fn congruent(p: &IntervalPartition, a: &ChainValue, b: &ChainValue) -> Result<bool, ChainError> {
    compare(a, b)?;
    Ok(p.class_of(a)? == p.class_of(b)?)
}
