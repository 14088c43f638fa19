//! Explicit aggregation functions `A: L^n -> L` on a finite chain.

use thiserror::Error;

use crate::chain::{ChainValue, FiniteChain};
use crate::enumerate::MonotoneMaps;

/// Default cap on the number of grid points for exhaustive table enumeration.
pub const DEFAULT_ENUM_GRID: usize = 16;
/// Default cap on the number of grid points of a single materialized table.
pub const DEFAULT_TABLE_GRID: usize = 1_000_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("grid of {points} points exceeds the limit of {limit}")]
    SizeLimit { points: u128, limit: usize },
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("entry at grid index {index} is not a level of the chain")]
    EntryOutOfRange { index: usize },
    #[error("not monotone: A({lower:?}) > A({upper:?})")]
    NotMonotone { lower: Vec<usize>, upper: Vec<usize> },
    #[error("boundary condition fails: A(bottom,...,bottom) must be bottom and A(top,...,top) top")]
    Boundary,
}

/// Grid points are numbered in lexicographic order, the first coordinate
/// being the most significant digit in base `|L|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AggregationTable {
    chain: FiniteChain,
    n: usize,
    entries: Vec<usize>,
}

pub(crate) fn grid_size(levels: usize, n: usize, limit: usize) -> Result<usize, TableError> {
    let points = (levels as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if points > limit as u128 {
        return Err(TableError::SizeLimit { points, limit });
    }
    Ok(points as usize)
}

impl AggregationTable {
    /// Validates monotonicity and both boundary conditions.
    pub fn new(chain: FiniteChain, n: usize, entries: Vec<usize>) -> Result<Self, TableError> {
        if n == 0 {
            return Err(TableError::ZeroArity);
        }
        let expected = grid_size(chain.len(), n, usize::MAX)?;
        if entries.len() != expected {
            return Err(TableError::EntryCount {
                expected,
                got: entries.len(),
            });
        }
        if let Some(index) = entries.iter().position(|&e| e >= chain.len()) {
            return Err(TableError::EntryOutOfRange { index });
        }
        let t = AggregationTable { chain, n, entries };
        t.check_monotone()?;
        if t.entries[0] != 0 || t.entries[expected - 1] != t.chain.top_index() {
            return Err(TableError::Boundary);
        }
        Ok(t)
    }

    pub fn from_fn<F>(chain: &FiniteChain, n: usize, f: F) -> Result<Self, TableError>
    where
        F: Fn(&[usize]) -> usize,
    {
        if n == 0 {
            return Err(TableError::ZeroArity);
        }
        let size = grid_size(chain.len(), n, DEFAULT_TABLE_GRID)?;
        let mut point = vec![0; n];
        let entries = (0..size)
            .map(|i| {
                decode_into(i, chain.len(), &mut point);
                f(&point)
            })
            .collect();
        Self::new(chain.clone(), n, entries)
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_entries_unchecked(chain: FiniteChain, n: usize, entries: Vec<usize>) -> Self {
        AggregationTable { chain, n, entries }
    }

    fn check_monotone(&self) -> Result<(), TableError> {
        let k = self.chain.len();
        let mut stride = 1;
        for _ in 0..self.n {
            for i in 0..self.entries.len() {
                let digit = (i / stride) % k;
                if digit + 1 < k && self.entries[i] > self.entries[i + stride] {
                    return Err(TableError::NotMonotone {
                        lower: self.point(i),
                        upper: self.point(i + stride),
                    });
                }
            }
            stride *= k;
        }
        Ok(())
    }

    pub fn chain(&self) -> &FiniteChain {
        &self.chain
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn grid_len(&self) -> usize {
        self.entries.len()
    }

    /// Entries as level indices, in grid order.
    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn point(&self, index: usize) -> Vec<usize> {
        let mut p = vec![0; self.n];
        decode_into(index, self.chain.len(), &mut p);
        p
    }

    pub fn index_of(&self, point: &[usize]) -> usize {
        encode(point, self.chain.len())
    }

    pub fn get(&self, point: &[usize]) -> usize {
        self.entries[self.index_of(point)]
    }

    pub fn value_at(&self, point: &[usize]) -> ChainValue {
        self.level(self.get(point))
    }

    pub(crate) fn level(&self, index: usize) -> ChainValue {
        self.chain.level(index).expect("entry within chain")
    }
}

pub(crate) fn encode(point: &[usize], k: usize) -> usize {
    point.iter().fold(0, |acc, &d| acc * k + d)
}

pub(crate) fn decode_into(mut index: usize, k: usize, point: &mut [usize]) {
    for d in point.iter_mut().rev() {
        *d = index % k;
        index /= k;
    }
}

/// Every monotone table with both boundary conditions, each exactly once,
/// in lexicographic order of the entry vector.
pub fn enumerate_aggregation_tables(
    n: usize,
    chain: &FiniteChain,
    max_grid: usize,
) -> Result<impl Iterator<Item = AggregationTable>, TableError> {
    if n == 0 {
        return Err(TableError::ZeroArity);
    }
    let k = chain.len();
    let size = grid_size(k, n, max_grid)?;
    // Lexicographic order is a linear extension of the product order; the
    // covering predecessors of a point lower one coordinate by one.
    let mut point = vec![0; n];
    let preds = (0..size)
        .map(|i| {
            decode_into(i, k, &mut point);
            let mut stride = 1;
            let mut ps = Vec::new();
            for c in (0..n).rev() {
                if point[c] > 0 {
                    ps.push(i - stride);
                }
                stride *= k;
            }
            ps
        })
        .collect();
    let mut fixed = vec![None; size];
    fixed[0] = Some(0);
    fixed[size - 1] = Some(k - 1);
    let chain = chain.clone();
    Ok(MonotoneMaps::new(preds, fixed, k)
        .map(move |entries| AggregationTable::from_entries_unchecked(chain.clone(), n, entries)))
}

/// `A(x) = min(top, x_1 + ... + x_n)` on level indices: monotone, bounded,
/// and not a Sugeno integral for `n >= 2` on at least 3 levels.
pub fn truncated_sum_table(chain: &FiniteChain, n: usize) -> Result<AggregationTable, TableError> {
    let top = chain.top_index();
    AggregationTable::from_fn(chain, n, |x| x.iter().sum::<usize>().min(top))
}
