//! Bounded chains and their values.
//!
//! Two kinds of chain are supported: the real unit interval, whose values are
//! exact rationals in `[0, 1]`, and finite chains given by an ordered list of
//! labels. Every value remembers the chain it belongs to, and comparing values
//! of different chains is an error rather than a coercion.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("values belong to different chains")]
    Mismatch,
    #[error("a finite chain needs at least 2 levels, got {0}")]
    TooFewLevels(usize),
    #[error("duplicate level label {0:?}")]
    DuplicateLabel(String),
    #[error("cannot read {0:?} as a value of this chain")]
    Parse(String),
    #[error("{0} lies outside [0, 1]")]
    OutOfRange(String),
    #[error("level index {index} out of range for a {len}-level chain")]
    IndexOutOfRange { index: usize, len: usize },
}

/// A finite chain `l_0 < l_1 < ... < l_{k-1}` identified by its labels.
#[derive(Clone)]
pub struct FiniteChain {
    levels: Arc<[String]>,
}

impl FiniteChain {
    pub fn new<I, S>(levels: I) -> Result<Self, ChainError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let levels: Vec<String> = levels.into_iter().map(Into::into).collect();
        if levels.len() < 2 {
            return Err(ChainError::TooFewLevels(levels.len()));
        }
        for (i, label) in levels.iter().enumerate() {
            if levels[..i].contains(label) {
                return Err(ChainError::DuplicateLabel(label.clone()));
            }
        }
        Ok(FiniteChain { levels: levels.into() })
    }

    /// The chain `0 < 1 < ... < k-1`, labels being the decimal indices.
    pub fn numbered(k: usize) -> Result<Self, ChainError> {
        Self::new((0..k).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    pub fn top_index(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, index: usize) -> Result<ChainValue, ChainError> {
        if index >= self.len() {
            return Err(ChainError::IndexOutOfRange { index, len: self.len() });
        }
        Ok(ChainValue::Level(Level {
            chain: self.clone(),
            index,
        }))
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.levels.iter().position(|l| l == label)
    }

    /// Reads a level by its label. If no label matches verbatim and the input
    /// is a numeric literal, a label denoting the same rational is accepted.
    pub fn parse_level(&self, text: &str) -> Result<usize, ChainError> {
        let text = text.trim();
        if let Some(i) = self.index_of(text) {
            return Ok(i);
        }
        if let Some(q) = parse_rational(text) {
            if let Some(i) = self.levels.iter().position(|l| parse_rational(l).as_ref() == Some(&q)) {
                return Ok(i);
            }
        }
        Err(ChainError::Parse(text.to_string()))
    }

    /// Rational value of every label, if all labels are numeric literals.
    pub(crate) fn numeric_levels(&self) -> Option<Vec<BigRational>> {
        self.levels.iter().map(|l| parse_rational(l)).collect()
    }
}

impl PartialEq for FiniteChain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.levels, &other.levels) || self.levels == other.levels
    }
}

impl Eq for FiniteChain {}

impl Hash for FiniteChain {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.levels.hash(state)
    }
}

impl fmt::Debug for FiniteChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.levels.iter()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Chain {
    /// The real unit interval `[0, 1]`.
    Unit,
    Finite(FiniteChain),
}

impl Chain {
    pub fn unit() -> Self {
        Chain::Unit
    }

    pub fn finite<I, S>(levels: I) -> Result<Self, ChainError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        FiniteChain::new(levels).map(Chain::Finite)
    }

    pub fn as_finite(&self) -> Option<&FiniteChain> {
        match self {
            Chain::Finite(c) => Some(c),
            Chain::Unit => None,
        }
    }

    /// Number of elements, `None` for the unit interval.
    pub fn cardinality(&self) -> Option<usize> {
        self.as_finite().map(FiniteChain::len)
    }

    pub fn bottom(&self) -> ChainValue {
        match self {
            Chain::Unit => ChainValue::Unit(UnitValue(BigRational::zero())),
            Chain::Finite(c) => ChainValue::Level(Level {
                chain: c.clone(),
                index: 0,
            }),
        }
    }

    pub fn top(&self) -> ChainValue {
        match self {
            Chain::Unit => ChainValue::Unit(UnitValue(BigRational::one())),
            Chain::Finite(c) => ChainValue::Level(Level {
                chain: c.clone(),
                index: c.top_index(),
            }),
        }
    }

    /// Parses a literal: `"0.54"` or `"2/3"` on the unit interval, a level
    /// label on a finite chain.
    pub fn parse_value(&self, text: &str) -> Result<ChainValue, ChainError> {
        match self {
            Chain::Unit => UnitValue::parse(text).map(ChainValue::Unit),
            Chain::Finite(c) => c.parse_level(text).map(|index| {
                ChainValue::Level(Level {
                    chain: c.clone(),
                    index,
                })
            }),
        }
    }

    pub fn contains(&self, v: &ChainValue) -> bool {
        v.belongs_to(self)
    }
}

/// An exact rational in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitValue(BigRational);

impl UnitValue {
    pub fn new(q: BigRational) -> Result<Self, ChainError> {
        if q.is_negative() || q > BigRational::one() {
            return Err(ChainError::OutOfRange(format_rational(&q)));
        }
        Ok(UnitValue(q))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self, ChainError> {
        if denom == 0 {
            return Err(ChainError::Parse(format!("{numer}/{denom}")));
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn parse(text: &str) -> Result<Self, ChainError> {
        let q = parse_rational(text.trim()).ok_or_else(|| ChainError::Parse(text.to_string()))?;
        Self::new(q)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    chain: FiniteChain,
    index: usize,
}

impl Level {
    pub fn chain(&self) -> &FiniteChain {
        &self.chain
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn label(&self) -> &str {
        &self.chain.levels[self.index]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ChainValue {
    Unit(UnitValue),
    Level(Level),
}

/// Ordering key valid among values already known to share a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum OrderKey<'a> {
    Rational(&'a BigRational),
    Level(usize),
}

impl ChainValue {
    pub fn unit(numer: i64, denom: i64) -> Result<Self, ChainError> {
        UnitValue::from_ratio(numer, denom).map(ChainValue::Unit)
    }

    pub fn chain(&self) -> Chain {
        match self {
            ChainValue::Unit(_) => Chain::Unit,
            ChainValue::Level(l) => Chain::Finite(l.chain.clone()),
        }
    }

    pub fn belongs_to(&self, chain: &Chain) -> bool {
        match (self, chain) {
            (ChainValue::Unit(_), Chain::Unit) => true,
            (ChainValue::Level(l), Chain::Finite(c)) => l.chain == *c,
            _ => false,
        }
    }

    pub fn level_index(&self) -> Option<usize> {
        match self {
            ChainValue::Level(l) => Some(l.index),
            ChainValue::Unit(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ChainValue::Unit(u) => Some(&u.0),
            ChainValue::Level(_) => None,
        }
    }

    pub(crate) fn key(&self) -> OrderKey<'_> {
        match self {
            ChainValue::Unit(u) => OrderKey::Rational(&u.0),
            ChainValue::Level(l) => OrderKey::Level(l.index),
        }
    }

    /// Inverse of [`ChainValue::key`] for keys taken from values of `chain`.
    pub(crate) fn from_key(chain: &Chain, key: OrderKey<'_>) -> ChainValue {
        match (chain, key) {
            (Chain::Unit, OrderKey::Rational(q)) => ChainValue::Unit(UnitValue(q.clone())),
            (Chain::Finite(c), OrderKey::Level(index)) => ChainValue::Level(Level {
                chain: c.clone(),
                index,
            }),
            _ => unreachable!("order key taken from another chain kind"),
        }
    }

    fn same_chain(&self, other: &ChainValue) -> bool {
        match (self, other) {
            (ChainValue::Unit(_), ChainValue::Unit(_)) => true,
            (ChainValue::Level(a), ChainValue::Level(b)) => a.chain == b.chain,
            _ => false,
        }
    }
}

impl fmt::Display for ChainValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainValue::Unit(u) => u.fmt(f),
            ChainValue::Level(l) => f.write_str(l.label()),
        }
    }
}

pub fn compare(a: &ChainValue, b: &ChainValue) -> Result<Ordering, ChainError> {
    if !a.same_chain(b) {
        return Err(ChainError::Mismatch);
    }
    Ok(a.key().cmp(&b.key()))
}

pub fn meet(a: &ChainValue, b: &ChainValue) -> Result<ChainValue, ChainError> {
    Ok(match compare(a, b)? {
        Ordering::Greater => b.clone(),
        _ => a.clone(),
    })
}

pub fn join(a: &ChainValue, b: &ChainValue) -> Result<ChainValue, ChainError> {
    Ok(match compare(a, b)? {
        Ordering::Less => b.clone(),
        _ => a.clone(),
    })
}

/// The middle element of three values of one chain.
pub fn median3(a: &ChainValue, b: &ChainValue, c: &ChainValue) -> Result<ChainValue, ChainError> {
    compare(a, c)?;
    let (lo, hi) = if compare(a, b)? == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    };
    // med(a, b, c) = (lo v c) ^ hi
    meet(&join(lo, c)?, hi)
}

pub(crate) fn median_of<T: Ord + Copy>(a: T, b: T, c: T) -> T {
    a.max(b).min(a.min(b).max(c))
}

/// Parses `"p/q"` or a plain decimal such as `"0.54"`, `"1"`, `".5"`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let q = if let Some((p, q)) = body.split_once('/') {
        let p = parse_digits(p.trim())?;
        let q = parse_digits(q.trim())?;
        if q.is_zero() {
            return None;
        }
        BigRational::new(p, q)
    } else {
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let int = if int_part.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(int_part)?
        };
        let frac = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(frac_part)?
        };
        let scale = num_traits::pow(BigInt::from(10u32), frac_part.len());
        BigRational::new(int * &scale + frac, scale)
    };
    Some(if negative { -q } else { q })
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Shortest exact rendering: a decimal when the denominator divides a power
/// of ten, otherwise `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    let (mut twos, mut fives) = (0usize, 0usize);
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut d = q.denom().abs();
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", q.numer(), q.denom());
    }
    let digits = twos.max(fives);
    let scaled = q.numer() * num_traits::pow(BigInt::from(10u32), digits) / q.denom();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let mut s = scaled.abs().to_string();
    if digits == 0 {
        return format!("{sign}{s}");
    }
    if s.len() <= digits {
        s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
    }
    let (int, frac) = s.split_at(s.len() - digits);
    format!("{sign}{int}.{frac}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(s: &str) -> ChainValue {
        Chain::Unit.parse_value(s).unwrap()
    }

    fn linguistic() -> Chain {
        Chain::finite(["bad", "medium", "good", "excellent"]).unwrap()
    }

    #[test]
    fn exact_rational_order() {
        assert_eq!(compare(&u("1/3"), &u("0.34")).unwrap(), Ordering::Less);
        assert_eq!(compare(&u("0.5"), &u("0.5")).unwrap(), Ordering::Equal);
        assert_eq!(compare(&u("1/3"), &u("0.333333")).unwrap(), Ordering::Greater);
        assert_eq!(compare(&u("1/2"), &u("0.50")).unwrap(), Ordering::Equal);
    }

    #[test]
    fn linguistic_order() {
        let l = linguistic();
        let good = l.parse_value("good").unwrap();
        let medium = l.parse_value("medium").unwrap();
        assert_eq!(compare(&good, &medium).unwrap(), Ordering::Greater);
    }

    #[test]
    fn cross_chain_is_an_error() {
        let l = linguistic();
        let other = Chain::finite(["bad", "medium", "good"]).unwrap();
        assert_eq!(compare(&l.bottom(), &other.bottom()), Err(ChainError::Mismatch));
        assert_eq!(compare(&l.bottom(), &u("0")), Err(ChainError::Mismatch));
        assert!(meet(&u("0.1"), &l.top()).is_err());
        assert!(median3(&u("0.1"), &u("0.2"), &l.top()).is_err());
    }

    #[test]
    fn meet_join_examples() {
        assert_eq!(meet(&u("0.54"), &u("2/3")).unwrap(), u("0.54"));
        let x = u("3/7");
        assert_eq!(join(&Chain::Unit.bottom(), &x).unwrap(), x);
        assert_eq!(meet(&Chain::Unit.top(), &x).unwrap(), x);
    }

    #[test]
    fn median_examples() {
        assert_eq!(median3(&u("0.2"), &u("0.9"), &u("0.5")).unwrap(), u("0.5"));
        assert_eq!(median3(&u("0.7"), &u("0.7"), &u("0.1")).unwrap(), u("0.7"));
        // (a^b) v (b^c) v (a^c) with a=0.54, b=1/3, c=2/3: 1/3 v 1/3 v 0.54
        assert_eq!(median3(&u("0.54"), &u("1/3"), &u("2/3")).unwrap(), u("0.54"));
    }

    fn lattice_median(a: &ChainValue, b: &ChainValue, c: &ChainValue) -> ChainValue {
        let ab = meet(a, b).unwrap();
        let bc = meet(b, c).unwrap();
        let ac = meet(a, c).unwrap();
        join(&join(&ab, &bc).unwrap(), &ac).unwrap()
    }

    #[test]
    fn median_matches_lattice_polynomial_exhaustively() {
        for k in 2..=5 {
            let chain = FiniteChain::numbered(k).unwrap();
            let vals: Vec<_> = (0..k).map(|i| chain.level(i).unwrap()).collect();
            for a in &vals {
                for b in &vals {
                    for c in &vals {
                        let m = median3(a, b, c).unwrap();
                        assert_eq!(m, lattice_median(a, b, c));
                        for (p, q, r) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                            assert_eq!(median3(p, q, r).unwrap(), m);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parsing_and_printing() {
        assert_eq!(u("0.54").to_string(), "0.54");
        assert_eq!(u("27/50").to_string(), "0.54");
        assert_eq!(u("2/3").to_string(), "2/3");
        assert_eq!(u("1").to_string(), "1");
        assert_eq!(u("1.000").to_string(), "1");
        assert_eq!(u("0").to_string(), "0");
        assert_eq!(u(".05").to_string(), "0.05");
        assert_eq!(u("1/8").to_string(), "0.125");
        assert_eq!(u("3/7").to_string(), "3/7");
        assert!(matches!(Chain::Unit.parse_value("1.5"), Err(ChainError::OutOfRange(_))));
        assert!(matches!(
            Chain::Unit.parse_value("-0.1"),
            Err(ChainError::OutOfRange(_))
        ));
        assert!(matches!(Chain::Unit.parse_value("abc"), Err(ChainError::Parse(_))));
        assert!(matches!(Chain::Unit.parse_value("1/0"), Err(ChainError::Parse(_))));
        assert!(matches!(Chain::Unit.parse_value("."), Err(ChainError::Parse(_))));
        assert!(matches!(Chain::Unit.parse_value("0.5.1"), Err(ChainError::Parse(_))));
    }

    #[test]
    fn finite_chain_invariants() {
        assert_eq!(Chain::finite(["a"]), Err(ChainError::TooFewLevels(1)));
        assert_eq!(
            Chain::finite(["a", "b", "a"]),
            Err(ChainError::DuplicateLabel("a".into()))
        );
        let l = linguistic();
        assert_eq!(l.bottom().to_string(), "bad");
        assert_eq!(l.top().to_string(), "excellent");
        assert!(l.parse_value("awful").is_err());
    }

    #[test]
    fn numeric_labels_accept_equal_literals() {
        let c = FiniteChain::new(["0", "0.3", "1/2", "1"]).unwrap();
        assert_eq!(c.parse_level("0.30").unwrap(), 1);
        assert_eq!(c.parse_level("0.5").unwrap(), 2);
        assert!(c.parse_level("0.4").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn unit_value() -> impl Strategy<Value = ChainValue> {
            (1i64..50)
                .prop_flat_map(|d| (0..=d, Just(d)))
                .prop_map(|(n, d)| ChainValue::unit(n, d).unwrap())
        }

        proptest! {
            #[test]
            fn meet_join_bracket(a in unit_value(), b in unit_value()) {
                let lo = meet(&a, &b).unwrap();
                let hi = join(&a, &b).unwrap();
                for v in [&a, &b] {
                    prop_assert_ne!(compare(&lo, v).unwrap(), Ordering::Greater);
                    prop_assert_ne!(compare(v, &hi).unwrap(), Ordering::Greater);
                }
                prop_assert_eq!(meet(&a, &b).unwrap(), meet(&b, &a).unwrap());
                prop_assert_eq!(meet(&a, &a).unwrap(), a.clone());
                prop_assert_eq!(join(&a, &a).unwrap(), a);
            }

            #[test]
            fn median_symmetric(a in unit_value(), b in unit_value(), c in unit_value()) {
                let m = median3(&a, &b, &c).unwrap();
                prop_assert_eq!(&m, &lattice_median(&a, &b, &c));
                prop_assert_eq!(&m, &median3(&c, &a, &b).unwrap());
                prop_assert_eq!(&m, &median3(&b, &c, &a).unwrap());
            }

            #[test]
            fn print_parse_roundtrip(v in unit_value()) {
                prop_assert_eq!(Chain::Unit.parse_value(&v.to_string()).unwrap(), v);
            }
        }
    }
}
