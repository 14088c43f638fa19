//! Capacities (fuzzy measures) on the criteria set `N = {1, ..., n}`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::chain::{compare, Chain, ChainError, ChainValue, FiniteChain};
use crate::enumerate::MonotoneMaps;
use crate::scale::Epimorphism;
use crate::table::AggregationTable;

pub const MAX_CRITERIA: usize = 16;
pub const MAX_ENUM_CRITERIA: usize = 4;
pub const MAX_ENUM_LEVELS: usize = 5;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CapacityError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("criterion count {0} outside 1..={MAX_CRITERIA}")]
    Arity(usize),
    #[error("no value given for subset {0}")]
    MissingSubset(SubsetId),
    #[error("subset {0} given twice")]
    DuplicateSubset(SubsetId),
    #[error("malformed subset {0:?}")]
    BadSubset(String),
    #[error("not a capacity: {}", display_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("thresholds must be {expected} nondecreasing values ending at the top")]
    Thresholds { expected: usize },
    #[error("enumeration limited to n <= {MAX_ENUM_CRITERIA} and at most {MAX_ENUM_LEVELS} levels")]
    SizeLimit,
}

fn display_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// A subset of the criteria, stored as a bitmask: bit `i - 1` for criterion `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetId(u32);

impl SubsetId {
    pub fn empty() -> Self {
        SubsetId(0)
    }

    pub fn full(n: usize) -> Self {
        SubsetId(((1u64 << n) - 1) as u32)
    }

    pub fn from_mask(mask: u32) -> Self {
        SubsetId(mask)
    }

    /// Builds a subset from 1-based criterion indices.
    pub fn from_criteria(criteria: &[usize], n: usize) -> Result<Self, CapacityError> {
        let mut mask = 0u32;
        for &i in criteria {
            if i == 0 || i > n || mask & (1 << (i - 1)) != 0 {
                return Err(CapacityError::BadSubset(format!("{criteria:?}")));
            }
            mask |= 1 << (i - 1);
        }
        Ok(SubsetId(mask))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, criterion: usize) -> bool {
        criterion >= 1 && self.0 & (1 << (criterion - 1)) != 0
    }

    pub fn criteria(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |b| self.0 & (1 << b) != 0).map(|b| b + 1)
    }

    /// Parses the canonical `{i,j,...}` form: strictly increasing 1-based
    /// indices, no spaces.
    pub fn parse(text: &str, n: usize) -> Result<Self, CapacityError> {
        let bad = || CapacityError::BadSubset(text.to_string());
        let inner = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(bad)?;
        if inner.is_empty() {
            return Ok(SubsetId::empty());
        }
        let mut mask = 0u32;
        let mut last = 0usize;
        for part in inner.split(',') {
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let i: usize = part.parse().map_err(|_| bad())?;
            if i <= last || i > n {
                return Err(bad());
            }
            last = i;
            mask |= 1 << (i - 1);
        }
        Ok(SubsetId(mask))
    }
}

impl fmt::Display for SubsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.criteria().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for SubsetId {
    type Err = CapacityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SubsetId::parse(s, MAX_CRITERIA)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyNotBottom {
        value: ChainValue,
    },
    FullNotTop {
        value: ChainValue,
    },
    /// `m(smaller) > m(larger)` for a covering pair `smaller ⊂ larger`.
    NotMonotone {
        smaller: SubsetId,
        larger: SubsetId,
    },
    WrongChain {
        subset: SubsetId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyNotBottom { value } => write!(f, "m({{}}) = {value} is not the bottom"),
            Violation::FullNotTop { value } => write!(f, "m(N) = {value} is not the top"),
            Violation::NotMonotone { smaller, larger } => {
                write!(f, "m({smaller}) > m({larger})")
            }
            Violation::WrongChain { subset } => write!(f, "m({subset}) is not a value of the chain"),
        }
    }
}

/// A total, not yet validated, set function `2^N -> L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunction {
    n: usize,
    chain: Chain,
    values: Vec<ChainValue>,
}

impl SetFunction {
    /// `values` is indexed by subset bitmask and must have `2^n` entries.
    pub fn from_vec(chain: Chain, n: usize, values: Vec<ChainValue>) -> Result<Self, CapacityError> {
        if n == 0 || n > MAX_CRITERIA {
            return Err(CapacityError::Arity(n));
        }
        if values.len() != 1 << n {
            let missing = SubsetId(values.len().min((1 << n) - 1) as u32);
            return Err(CapacityError::MissingSubset(missing));
        }
        Ok(SetFunction { n, chain, values })
    }

    /// Builds from explicit `(subset, value)` pairs; every subset must appear once.
    pub fn from_pairs<I>(chain: Chain, n: usize, pairs: I) -> Result<Self, CapacityError>
    where
        I: IntoIterator<Item = (SubsetId, ChainValue)>,
    {
        if n == 0 || n > MAX_CRITERIA {
            return Err(CapacityError::Arity(n));
        }
        let mut slots: Vec<Option<ChainValue>> = vec![None; 1 << n];
        for (s, v) in pairs {
            let slot = slots
                .get_mut(s.0 as usize)
                .ok_or_else(|| CapacityError::BadSubset(s.to_string()))?;
            if slot.is_some() {
                return Err(CapacityError::DuplicateSubset(s));
            }
            *slot = Some(v);
        }
        let values = slots
            .into_iter()
            .enumerate()
            .map(|(mask, v)| v.ok_or(CapacityError::MissingSubset(SubsetId(mask as u32))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SetFunction { n, chain, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn value(&self, s: SubsetId) -> &ChainValue {
        &self.values[s.0 as usize]
    }

    pub fn set(&mut self, s: SubsetId, v: ChainValue) {
        self.values[s.0 as usize] = v;
    }

    /// Every violated capacity constraint. Checking the covering pairs
    /// `E ⊂ E ∪ {i}` is enough for monotonicity.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let full = SubsetId::full(self.n);
        for (mask, v) in self.values.iter().enumerate() {
            if !v.belongs_to(&self.chain) {
                out.push(Violation::WrongChain {
                    subset: SubsetId(mask as u32),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }
        let bottom = self.chain.bottom();
        let top = self.chain.top();
        if *self.value(SubsetId::empty()) != bottom {
            out.push(Violation::EmptyNotBottom {
                value: self.value(SubsetId::empty()).clone(),
            });
        }
        if *self.value(full) != top {
            out.push(Violation::FullNotTop {
                value: self.value(full).clone(),
            });
        }
        for mask in 0..self.values.len() as u32 {
            for bit in 0..self.n {
                if mask & (1 << bit) != 0 {
                    continue;
                }
                let larger = mask | (1 << bit);
                if self.values[mask as usize].key() > self.values[larger as usize].key() {
                    out.push(Violation::NotMonotone {
                        smaller: SubsetId(mask),
                        larger: SubsetId(larger),
                    });
                }
            }
        }
        out
    }
}

/// Returns every violated constraint; empty means `f` is a capacity.
pub fn validate_capacity(f: &SetFunction) -> Vec<Violation> {
    f.violations()
}

/// A monotone set function `m: 2^N -> L` with `m(∅) = ⊥` and `m(N) = ⊤`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Capacity {
    inner: SetFunction,
}

impl TryFrom<SetFunction> for Capacity {
    type Error = CapacityError;

    fn try_from(f: SetFunction) -> Result<Self, CapacityError> {
        let violations = f.violations();
        if violations.is_empty() {
            Ok(Capacity { inner: f })
        } else {
            Err(CapacityError::Invalid(violations))
        }
    }
}

impl Capacity {
    pub fn new(chain: Chain, n: usize, values: Vec<ChainValue>) -> Result<Self, CapacityError> {
        SetFunction::from_vec(chain, n, values)?.try_into()
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn chain(&self) -> &Chain {
        &self.inner.chain
    }

    pub fn value(&self, s: SubsetId) -> &ChainValue {
        self.inner.value(s)
    }

    /// Values indexed by subset bitmask.
    pub fn values(&self) -> &[ChainValue] {
        &self.inner.values
    }

    pub fn as_set_function(&self) -> &SetFunction {
        &self.inner
    }

    /// Level indices by bitmask; `None` on the unit interval.
    pub(crate) fn level_indices(&self) -> Option<Vec<usize>> {
        self.inner.values.iter().map(ChainValue::level_index).collect()
    }

    pub(crate) fn from_levels(chain: &FiniteChain, n: usize, levels: &[usize]) -> Self {
        let values = levels
            .iter()
            .map(|&i| chain.level(i).expect("level index within chain"))
            .collect();
        Capacity {
            inner: SetFunction {
                n,
                chain: Chain::Finite(chain.clone()),
                values,
            },
        }
    }

    /// Re-expresses a unit-interval capacity on a finite chain whose labels
    /// are numeric literals containing every capacity value.
    pub fn restrict_to(&self, chain: &FiniteChain) -> Result<Capacity, CapacityError> {
        if *self.chain() == Chain::Finite(chain.clone()) {
            return Ok(self.clone());
        }
        let numeric = match (self.chain(), chain.numeric_levels()) {
            (Chain::Unit, Some(numeric)) => numeric,
            _ => return Err(ChainError::Mismatch.into()),
        };
        let levels = self
            .values()
            .iter()
            .map(|v| {
                let q = v.as_rational().expect("unit chain value");
                numeric
                    .iter()
                    .position(|l| l == q)
                    .ok_or_else(|| ChainError::Parse(v.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Capacity::from_levels(chain, self.n(), &levels))
    }

    pub fn pushforward(&self, phi: &Epimorphism) -> Result<Capacity, CapacityError> {
        pushforward_capacity(phi, self)
    }
}

/// `m(I) = thresholds[|I| - 1]` for nonempty `I`, `m(∅) = ⊥`.
pub fn cardinality_capacity(chain: &Chain, n: usize, thresholds: &[ChainValue]) -> Result<Capacity, CapacityError> {
    if n == 0 || n > MAX_CRITERIA {
        return Err(CapacityError::Arity(n));
    }
    let bad = CapacityError::Thresholds { expected: n };
    if thresholds.len() != n || thresholds.last() != Some(&chain.top()) {
        return Err(bad);
    }
    for w in thresholds.windows(2) {
        if compare(&w[0], &w[1])? == std::cmp::Ordering::Greater {
            return Err(bad);
        }
    }
    if !thresholds.iter().all(|t| t.belongs_to(chain)) {
        return Err(ChainError::Mismatch.into());
    }
    let values = (0..1u32 << n)
        .map(|mask| match mask.count_ones() as usize {
            0 => chain.bottom(),
            k => thresholds[k - 1].clone(),
        })
        .collect();
    Capacity::new(chain.clone(), n, values)
}

/// `φ(m)(I) = φ(m(I))`.
pub fn pushforward_capacity(phi: &Epimorphism, c: &Capacity) -> Result<Capacity, CapacityError> {
    let values = c.values().iter().map(|v| phi.apply(v)).collect::<Result<Vec<_>, _>>()?;
    Capacity::new(phi.target().clone(), c.n(), values)
}

/// Lazily yields every capacity on a small finite chain, in lexicographic
/// order of the value vector (subset bitmask ascending, then level index).
pub fn enumerate_capacities(n: usize, chain: &FiniteChain) -> Result<impl Iterator<Item = Capacity>, CapacityError> {
    if n == 0 {
        return Err(CapacityError::Arity(n));
    }
    if n > MAX_ENUM_CRITERIA || chain.len() > MAX_ENUM_LEVELS {
        return Err(CapacityError::SizeLimit);
    }
    let size = 1usize << n;
    let preds = (0..size)
        .map(|mask| {
            (0..n)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| mask & !(1 << b))
                .collect()
        })
        .collect();
    let mut fixed = vec![None; size];
    fixed[0] = Some(0);
    fixed[size - 1] = Some(chain.top_index());
    let chain = chain.clone();
    Ok(MonotoneMaps::new(preds, fixed, chain.len()).map(move |levels| Capacity::from_levels(&chain, n, &levels)))
}

/// `m(E) = A(1_E)`, the indicator vector being top on `E`, bottom elsewhere.
pub fn capacity_from_table(t: &AggregationTable) -> Capacity {
    let n = t.arity();
    let top = t.chain().top_index();
    let levels: Vec<usize> = (0..1u32 << n)
        .map(|mask| {
            let point: Vec<usize> = (0..n).map(|i| if mask & (1 << i) != 0 { top } else { 0 }).collect();
            t.get(&point)
        })
        .collect();
    Capacity::from_levels(t.chain(), n, &levels)
}
