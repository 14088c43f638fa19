//! Epimorphisms between bounded chains and scale invariance.
//!
//! An epimorphism `φ: L → L1` is stored as the interval partition of `L`
//! into its fibers plus the strictly increasing labelling of the blocks by
//! the elements of `L1`. A Sugeno integral commutes with every epimorphism:
//! `φ(Su_m(x)) = Su_φ(m)(φ(x_1), …, φ(x_n))`, where `φ(m)(I) = φ(m(I))`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::capacity::{enumerate_capacities, pushforward_capacity, Capacity, CapacityError};
use crate::chain::{compare, format_rational, Chain, ChainError, ChainValue, FiniteChain, UnitValue};
use crate::congruence::{
    enumerate_interval_partitions, CongruenceError, IntervalPartition, PartitionError, UnitInterval,
};
use crate::sugeno::{
    recognize_sugeno, su_sorted, sugeno_eval, sugeno_table, Counterexample, Formula, Property, ScoreVector, SugenoError,
};
use crate::table::{encode, enumerate_aggregation_tables, AggregationTable, TableError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScaleError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("{blocks} blocks but {labels} labels")]
    CountMismatch { blocks: usize, labels: usize },
    #[error("labels of block {0} and the next one are not strictly increasing")]
    NotMonotone(usize),
    #[error("block {0} and the next one carry the same label")]
    NotInjective(usize),
    #[error("labels cover {covered} of the {target} target values")]
    NotSurjective { covered: usize, target: String },
    #[error("unknown built-in epimorphism {0:?}")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error(transparent)]
    Sugeno(#[from] SugenoError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Table(#[from] TableError),
}

pub const BUILTIN_NAMES: [&str; 4] = ["decimal-half-up", "centesimal-half-up", "linguistic-bmge", "identity"];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Mapping {
    Identity,
    Blocks {
        partition: IntervalPartition,
        labels: Vec<ChainValue>,
    },
}

/// A surjective monotone map between bounded chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Epimorphism {
    source: Chain,
    target: Chain,
    mapping: Mapping,
}

/// Validates that `labels` maps the blocks of `partition` bijectively and
/// monotonically onto `target`.
pub fn make_epimorphism(
    partition: IntervalPartition,
    target: Chain,
    labels: Vec<ChainValue>,
) -> Result<Epimorphism, ScaleError> {
    let blocks = partition.block_count();
    if labels.len() != blocks {
        return Err(ScaleError::CountMismatch {
            blocks,
            labels: labels.len(),
        });
    }
    if !labels.iter().all(|l| l.belongs_to(&target)) {
        return Err(ChainError::Mismatch.into());
    }
    for (i, w) in labels.windows(2).enumerate() {
        match compare(&w[0], &w[1])? {
            std::cmp::Ordering::Greater => return Err(ScaleError::NotMonotone(i)),
            std::cmp::Ordering::Equal => return Err(ScaleError::NotInjective(i)),
            std::cmp::Ordering::Less => {}
        }
    }
    match target.cardinality() {
        Some(k) if k == labels.len() => {}
        Some(k) => {
            return Err(ScaleError::NotSurjective {
                covered: labels.len(),
                target: k.to_string(),
            })
        }
        None => {
            return Err(ScaleError::NotSurjective {
                covered: labels.len(),
                target: "uncountably many".into(),
            })
        }
    }
    Ok(Epimorphism {
        source: partition.chain(),
        target,
        mapping: Mapping::Blocks { partition, labels },
    })
}

impl Epimorphism {
    pub fn identity(chain: &Chain) -> Self {
        Epimorphism {
            source: chain.clone(),
            target: chain.clone(),
            mapping: Mapping::Identity,
        }
    }

    /// The canonical map of a finite chain onto its quotient by `partition`,
    /// each block labelled by its members, e.g. `{1,2}`.
    pub fn quotient(partition: &IntervalPartition) -> Result<Self, ScaleError> {
        let chain = partition.chain();
        let source = chain.as_finite().ok_or(PartitionError::NeedsFiniteChain)?;
        let class = partition.finite_classes()?;
        let mut labels: Vec<Vec<&str>> = vec![Vec::new(); partition.block_count()];
        for (level, &b) in class.iter().enumerate() {
            labels[b].push(&source.levels()[level]);
        }
        let target = FiniteChain::new(labels.iter().map(|members| format!("{{{}}}", members.join(","))))?;
        let values = (0..target.len()).map(|i| target.level(i)).collect::<Result<_, _>>()?;
        make_epimorphism(partition.clone(), Chain::Finite(target), values)
    }

    pub fn builtin(name: &str) -> Result<Self, ScaleError> {
        match name {
            "decimal-half-up" => Ok(half_up_rounding(10)),
            "centesimal-half-up" => Ok(half_up_rounding(100)),
            "linguistic-bmge" => Ok(linguistic_bmge()),
            "identity" => Ok(Epimorphism::identity(&Chain::Unit)),
            other => Err(ScaleError::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn source(&self) -> &Chain {
        &self.source
    }

    pub fn target(&self) -> &Chain {
        &self.target
    }

    pub fn is_identity(&self) -> bool {
        self.mapping == Mapping::Identity
    }

    /// The fiber partition; `None` for the identity.
    pub fn partition(&self) -> Option<&IntervalPartition> {
        match &self.mapping {
            Mapping::Identity => None,
            Mapping::Blocks { partition, .. } => Some(partition),
        }
    }

    pub fn labels(&self) -> Option<&[ChainValue]> {
        match &self.mapping {
            Mapping::Identity => None,
            Mapping::Blocks { labels, .. } => Some(labels),
        }
    }

    pub fn apply(&self, v: &ChainValue) -> Result<ChainValue, ChainError> {
        if !v.belongs_to(&self.source) {
            return Err(ChainError::Mismatch);
        }
        match &self.mapping {
            Mapping::Identity => Ok(v.clone()),
            Mapping::Blocks { partition, labels } => Ok(labels[partition.class_of(v)?].clone()),
        }
    }

    pub fn apply_vector(&self, x: &ScoreVector) -> Result<ScoreVector, ChainError> {
        let coords = x
            .coords()
            .iter()
            .map(|v| self.apply(v))
            .collect::<Result<Vec<_>, _>>()?;
        ScoreVector::new(self.target.clone(), coords)
    }

    /// `then ∘ self`.
    pub fn compose(&self, then: &Epimorphism) -> Result<Epimorphism, ScaleError> {
        if then.source != self.target {
            return Err(ChainError::Mismatch.into());
        }
        let (partition, labels) = match (&self.mapping, &then.mapping) {
            (_, Mapping::Identity) => return Ok(self.clone()),
            (Mapping::Identity, _) => return Ok(then.clone()),
            (Mapping::Blocks { partition, labels }, _) => (partition, labels),
        };
        let images = labels.iter().map(|l| then.apply(l)).collect::<Result<Vec<_>, _>>()?;
        // merge runs of consecutive blocks with equal image
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for (b, img) in images.iter().enumerate() {
            match runs.last_mut() {
                Some((_, end)) if images[*end] == *img => *end = b,
                _ => runs.push((b, b)),
            }
        }
        let merged = match partition {
            IntervalPartition::Unit(blocks) => IntervalPartition::unit(
                runs.iter()
                    .map(|&(s, e)| UnitInterval {
                        lo: blocks[s].lo.clone(),
                        lo_closed: blocks[s].lo_closed,
                        hi: blocks[e].hi.clone(),
                        hi_closed: blocks[e].hi_closed,
                    })
                    .collect(),
            )?,
            IntervalPartition::Finite { chain, starts } => IntervalPartition::Finite {
                chain: chain.clone(),
                starts: runs.iter().map(|&(s, _)| starts[s]).collect(),
            },
        };
        let labels = runs.iter().map(|&(s, _)| images[s].clone()).collect();
        make_epimorphism(merged, then.target.clone(), labels)
    }
}

fn unit(numer: i64, denom: i64) -> UnitValue {
    UnitValue::from_ratio(numer, denom).expect("within [0, 1]")
}

/// Half-up rounding of `[0, 1]` to multiples of `1/steps`:
/// `[0, 1/2s[, [1/2s, 3/2s[, …, [(2s-1)/2s, 1]`.
pub fn half_up_rounding(steps: i64) -> Epimorphism {
    let s2 = 2 * steps;
    let mut blocks = Vec::with_capacity(steps as usize + 1);
    for j in 0..=steps {
        let lo = if j == 0 { unit(0, 1) } else { unit(2 * j - 1, s2) };
        let hi = if j == steps { unit(1, 1) } else { unit(2 * j + 1, s2) };
        blocks.push(UnitInterval {
            lo,
            lo_closed: true,
            hi,
            hi_closed: j == steps,
        });
    }
    let partition = IntervalPartition::unit(blocks).expect("valid rounding partition");
    let target =
        FiniteChain::new((0..=steps).map(|j| format_rational(unit(j, steps).as_rational()))).expect("distinct labels");
    let labels = (0..target.len()).map(|i| target.level(i).unwrap()).collect();
    make_epimorphism(partition, Chain::Finite(target), labels).expect("valid rounding epimorphism")
}

/// `[0, 0.3] → bad, ]0.3, 0.7[ → medium, [0.7, 0.9[ → good, [0.9, 1] → excellent`.
pub fn linguistic_bmge() -> Epimorphism {
    let iv = |lo: (i64, i64), lc, hi: (i64, i64), hc| UnitInterval {
        lo: unit(lo.0, lo.1),
        lo_closed: lc,
        hi: unit(hi.0, hi.1),
        hi_closed: hc,
    };
    let partition = IntervalPartition::unit(vec![
        iv((0, 1), true, (3, 10), true),
        iv((3, 10), false, (7, 10), false),
        iv((7, 10), true, (9, 10), false),
        iv((9, 10), true, (1, 1), true),
    ])
    .expect("valid linguistic partition");
    let target = FiniteChain::new(["bad", "medium", "good", "excellent"]).unwrap();
    let labels = (0..4).map(|i| target.level(i).unwrap()).collect();
    make_epimorphism(partition, Chain::Finite(target), labels).expect("valid linguistic epimorphism")
}

/// Both sides of `φ(Su_m(x)) = Su_φ(m)(φ(x))` for one input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleMapping {
    pub input: ScoreVector,
    pub mapped_input: ScoreVector,
    pub pushed: Capacity,
    /// `Su_m(x)` on the source chain.
    pub source_value: ChainValue,
    /// `φ(Su_m(x))`.
    pub mapped_value: ChainValue,
    /// `Su_φ(m)(φ(x))`.
    pub pushed_value: ChainValue,
}

impl ScaleMapping {
    pub fn holds(&self) -> bool {
        self.mapped_value == self.pushed_value
    }
}

pub fn map_through(phi: &Epimorphism, c: &Capacity, x: &ScoreVector) -> Result<ScaleMapping, ScaleError> {
    if c.chain() != phi.source() {
        return Err(ChainError::Mismatch.into());
    }
    let pushed = pushforward_capacity(phi, c)?;
    let source_value = sugeno_eval(c, x, Formula::Sorted)?;
    let mapped_input = phi.apply_vector(x)?;
    let pushed_value = sugeno_eval(&pushed, &mapped_input, Formula::Sorted)?;
    Ok(ScaleMapping {
        input: x.clone(),
        mapped_value: phi.apply(&source_value)?,
        mapped_input,
        pushed,
        source_value,
        pushed_value,
    })
}

/// Checks `φ(Su_c(x)) = Su_φ(c)(φ(x))` for every given input.
pub fn check_scale_invariance(
    c: &Capacity,
    phi: &Epimorphism,
    xs: &[ScoreVector],
) -> Result<Result<(), Box<Counterexample>>, ScaleError> {
    for x in xs {
        let m = map_through(phi, c, x)?;
        if !m.holds() {
            return Ok(Err(Box::new(Counterexample {
                property: Property::ScaleInvariant,
                x: x.clone(),
                y: None,
                constant: None,
                coordinate: None,
                partition: phi.partition().cloned(),
                expected: m.mapped_value,
                actual: m.pushed_value,
            })));
        }
    }
    Ok(Ok(()))
}

/// Builds `B` on the quotient grid from `B(φ(x)) = φ(A(x))`. Returns the
/// first pair `x, y` (grid indices) with `φ(x) = φ(y)` but `φ(A(x)) ≠ φ(A(y))`
/// when no such `B` exists.
fn quotient_aggregation(t: &AggregationTable, class: &[usize], blocks: usize) -> Result<Vec<usize>, (usize, usize)> {
    let n = t.arity();
    let mut b: Vec<Option<(usize, usize)>> = vec![None; blocks.pow(n as u32)];
    let mut tuple = vec![0; n];
    for (i, &entry) in t.entries().iter().enumerate() {
        crate::table::decode_into(i, t.chain().len(), &mut tuple);
        tuple.iter_mut().for_each(|v| *v = class[*v]);
        let slot = &mut b[encode(&tuple, blocks)];
        match *slot {
            None => *slot = Some((i, class[entry])),
            Some((first, img)) if img != class[entry] => return Err((first, i)),
            Some(_) => {}
        }
    }
    Ok(b.into_iter().map(|s| s.expect("φ is onto").1).collect())
}

/// Whether the quotient table is an aggregation function on the block chain.
fn is_aggregation(entries: &[usize], blocks: usize, n: usize) -> bool {
    if blocks == 1 {
        return true;
    }
    let Ok(chain) = FiniteChain::numbered(blocks) else {
        return false;
    };
    AggregationTable::new(chain, n, entries.to_vec()).is_ok()
}

/// When `t` is not scale invariant, an epimorphism (given by its fiber
/// partition) for which no `B` satisfies `φ(A(x)) = B(φ(x))`, with the
/// pair `x, y` that rules `B` out.
pub fn scale_invariance_failure(t: &AggregationTable) -> Result<Option<Box<Counterexample>>, ScaleError> {
    for p in enumerate_interval_partitions(t.chain())? {
        let class = p.finite_classes()?;
        if let Err((x, y)) = quotient_aggregation(t, &class, p.block_count()) {
            let chain = t.chain();
            return Ok(Some(Box::new(Counterexample {
                property: Property::ScaleInvariant,
                x: ScoreVector::from_levels(chain, &t.point(x)),
                y: Some(ScoreVector::from_levels(chain, &t.point(y))),
                constant: None,
                coordinate: None,
                partition: Some(p),
                expected: chain.level(t.entries()[x])?,
                actual: chain.level(t.entries()[y])?,
            })));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem2Witness {
    pub table: Vec<String>,
    pub partition: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem2Report {
    pub arity: usize,
    pub chain_size: usize,
    pub epimorphisms: usize,
    pub sugeno_tables: usize,
    /// (table, epimorphism, grid point) triples checked in the forward direction.
    pub forward_checks: usize,
    pub forward_failures: usize,
    pub non_sugeno_tables: usize,
    /// Non-Sugeno tables for which some epimorphism admits no `B`.
    pub converse_refuted: usize,
    pub forward_holds: bool,
    pub converse_holds: bool,
    pub witnesses: Vec<Theorem2Witness>,
}

impl Theorem2Report {
    pub fn holds(&self) -> bool {
        self.forward_holds && self.converse_holds
    }
}

/// Forward: every Sugeno table commutes with every quotient epimorphism via
/// the pushforward capacity, at every grid point. Converse: every other
/// aggregation table admits no `B` for at least one quotient epimorphism.
pub fn verify_theorem2(n: usize, source: &FiniteChain, max_grid: usize) -> Result<Theorem2Report, ScaleError> {
    let partitions: Vec<(Vec<usize>, usize)> = enumerate_interval_partitions(source)?
        .map(|p| (p.finite_classes().expect("finite"), p.block_count()))
        .collect();
    let k = source.len();
    let grid = crate::table::grid_size(k, n, max_grid)?;
    let mut witnesses = Vec::new();

    let mut forward_checks = 0;
    let mut forward_failures = 0;
    let capacities: Vec<Capacity> = enumerate_capacities(n, source)?.collect();
    for m in &capacities {
        let t = sugeno_table(m, source, max_grid)?;
        let ml = m.level_indices().expect("finite");
        for (class, blocks) in &partitions {
            let pushed: Vec<usize> = ml.iter().map(|&v| class[v]).collect();
            let b = quotient_aggregation(&t, class, *blocks);
            let mut point = vec![0; n];
            for i in 0..grid {
                crate::table::decode_into(i, k, &mut point);
                let mapped: Vec<usize> = point.iter().map(|&v| class[v]).collect();
                let lhs = class[t.entries()[i]];
                let rhs = su_sorted(&pushed, &mapped, 0);
                forward_checks += 1;
                let b_agrees = b.as_ref().is_ok_and(|b| b[encode(&mapped, *blocks)] == rhs);
                if lhs != rhs || !b_agrees {
                    forward_failures += 1;
                    if witnesses.len() < 5 {
                        witnesses.push(Theorem2Witness {
                            table: labels(source, t.entries()),
                            partition: Some(format!("{class:?}")),
                            detail: format!("point {point:?}: φ(A(x)) = {lhs}, Su_φ(m)(φ(x)) = {rhs}"),
                        });
                    }
                }
            }
        }
    }

    let tables: Vec<AggregationTable> = enumerate_aggregation_tables(n, source, max_grid)?.collect();
    let outcomes: Vec<Option<bool>> = tables
        .par_iter()
        .map(|t| {
            if recognize_sugeno(t).is_ok() {
                return None;
            }
            // refuted when some quotient admits no aggregation function B
            Some(
                partitions
                    .iter()
                    .any(|(class, blocks)| match quotient_aggregation(t, class, *blocks) {
                        Err(_) => true,
                        Ok(b) => !is_aggregation(&b, *blocks, n),
                    }),
            )
        })
        .collect();
    let non_sugeno_tables = outcomes.iter().filter(|o| o.is_some()).count();
    let converse_refuted = outcomes.iter().filter(|o| **o == Some(true)).count();
    for (t, _) in tables.iter().zip(&outcomes).filter(|(_, o)| **o == Some(false)).take(5) {
        witnesses.push(Theorem2Witness {
            table: labels(source, t.entries()),
            partition: None,
            detail: "non-Sugeno table commutes with every quotient epimorphism".into(),
        });
    }

    Ok(Theorem2Report {
        arity: n,
        chain_size: k,
        epimorphisms: partitions.len(),
        sugeno_tables: capacities.len(),
        forward_checks,
        forward_failures,
        non_sugeno_tables,
        converse_refuted,
        forward_holds: forward_failures == 0,
        converse_holds: converse_refuted == non_sugeno_tables,
        witnesses,
    })
}

fn labels(chain: &FiniteChain, entries: &[usize]) -> Vec<String> {
    entries.iter().map(|&e| chain.levels()[e].clone()).collect()
}
