//! JSON documents for chains, capacities, tables, partitions and
//! epimorphisms. Values are always written as strings in shortest exact
//! form; maps keep a fixed order so that output is byte-stable.

use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::capacity::{Capacity, CapacityError, SetFunction, SubsetId};
use crate::chain::{Chain, ChainError, ChainValue, FiniteChain};
use crate::congruence::{IntervalPartition, PartitionError, UnitInterval};
use crate::scale::{make_epimorphism, Epimorphism, ScaleError};
use crate::sugeno::{Counterexample, ScoreVector};
use crate::table::{AggregationTable, TableError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error("{0}")]
    Shape(String),
}

impl From<serde_json::Error> for JsonError {
    fn from(e: serde_json::Error) -> Self {
        JsonError::Syntax(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ChainJson {
    Unit,
    Finite { levels: Vec<String> },
}

impl From<&Chain> for ChainJson {
    fn from(c: &Chain) -> Self {
        match c {
            Chain::Unit => ChainJson::Unit,
            Chain::Finite(f) => ChainJson::Finite {
                levels: f.levels().to_vec(),
            },
        }
    }
}

impl TryFrom<&ChainJson> for Chain {
    type Error = ChainError;

    fn try_from(j: &ChainJson) -> Result<Self, ChainError> {
        match j {
            ChainJson::Unit => Ok(Chain::Unit),
            ChainJson::Finite { levels } => Chain::finite(levels.iter().cloned()),
        }
    }
}

/// String pairs serialized as a JSON object in insertion order. Duplicate
/// keys survive deserialization so that they can be rejected.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderedPairs(pub Vec<(String, String)>);

impl Serialize for OrderedPairs {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for OrderedPairs {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct PairsVisitor;

        impl<'de> Visitor<'de> for PairsVisitor {
            type Value = OrderedPairs;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object of string values")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<OrderedPairs, A::Error> {
                let mut pairs = Vec::new();
                while let Some(entry) = map.next_entry::<String, String>()? {
                    pairs.push(entry);
                }
                Ok(OrderedPairs(pairs))
            }
        }

        d.deserialize_map(PairsVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapacityJson {
    pub n: usize,
    pub chain: ChainJson,
    pub values: OrderedPairs,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub x: Vec<String>,
    pub v: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableJson {
    pub chain: ChainJson,
    pub n: usize,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockJson {
    pub lo: String,
    pub lo_closed: bool,
    pub hi: String,
    pub hi_closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionJson {
    pub chain: ChainJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<BlockJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cuts: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpimorphismJson {
    pub source: ChainJson,
    pub target: ChainJson,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub identity: bool,
    #[serde(default)]
    pub blocks: Vec<BlockJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CounterexampleJson {
    pub property: String,
    pub x: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coordinate: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
    pub expected: String,
    pub actual: String,
}

pub fn vector_strings(x: &ScoreVector) -> Vec<String> {
    x.coords().iter().map(ToString::to_string).collect()
}

impl From<&Counterexample> for CounterexampleJson {
    fn from(c: &Counterexample) -> Self {
        CounterexampleJson {
            property: c.property.to_string(),
            x: vector_strings(&c.x),
            y: c.y.as_ref().map(vector_strings),
            constant: c.constant.as_ref().map(ToString::to_string),
            coordinate: c.coordinate,
            partition: c.partition.as_ref().map(IntervalPartition::describe),
            expected: c.expected.to_string(),
            actual: c.actual.to_string(),
        }
    }
}

/// Subsets by cardinality, then lexicographically by criteria.
fn subset_order(n: usize) -> Vec<SubsetId> {
    let mut all: Vec<SubsetId> = (0..1u32 << n).map(SubsetId::from_mask).collect();
    all.sort_by_key(|s| (s.len(), s.criteria().collect::<Vec<_>>()));
    all
}

impl From<&Capacity> for CapacityJson {
    fn from(c: &Capacity) -> Self {
        let values = subset_order(c.n())
            .into_iter()
            .map(|s| (s.to_string(), c.value(s).to_string()))
            .collect();
        CapacityJson {
            n: c.n(),
            chain: c.chain().into(),
            values: OrderedPairs(values),
        }
    }
}

impl TryFrom<&CapacityJson> for Capacity {
    type Error = JsonError;

    fn try_from(j: &CapacityJson) -> Result<Self, JsonError> {
        let chain = Chain::try_from(&j.chain)?;
        let n = j.n;
        if n == 0 || n > crate::capacity::MAX_CRITERIA {
            return Err(CapacityError::Arity(n).into());
        }
        let mut pairs = Vec::with_capacity(j.values.0.len() + 2);
        let (mut has_empty, mut has_full) = (false, false);
        for (k, v) in &j.values.0 {
            let s = SubsetId::parse(k, n)?;
            has_empty |= s == SubsetId::empty();
            has_full |= s == SubsetId::full(n);
            pairs.push((s, chain.parse_value(v)?));
        }
        if !has_empty {
            pairs.push((SubsetId::empty(), chain.bottom()));
        }
        if !has_full {
            pairs.push((SubsetId::full(n), chain.top()));
        }
        let f = SetFunction::from_pairs(chain, n, pairs)?;
        Ok(Capacity::try_from(f)?)
    }
}

impl From<&AggregationTable> for TableJson {
    fn from(t: &AggregationTable) -> Self {
        let levels = t.chain().levels();
        let entries = (0..t.grid_len())
            .map(|i| EntryJson {
                x: t.point(i).into_iter().map(|l| levels[l].clone()).collect(),
                v: levels[t.entries()[i]].clone(),
            })
            .collect();
        TableJson {
            chain: ChainJson::Finite {
                levels: levels.to_vec(),
            },
            n: t.arity(),
            entries,
        }
    }
}

impl TryFrom<&TableJson> for AggregationTable {
    type Error = JsonError;

    fn try_from(j: &TableJson) -> Result<Self, JsonError> {
        let chain = match Chain::try_from(&j.chain)? {
            Chain::Finite(f) => f,
            Chain::Unit => return Err(JsonError::Shape("aggregation tables need a finite chain".into())),
        };
        if j.n == 0 {
            return Err(TableError::ZeroArity.into());
        }
        let expected = crate::table::grid_size(chain.len(), j.n, crate::table::DEFAULT_TABLE_GRID)?;
        if j.entries.len() != expected {
            return Err(TableError::EntryCount {
                expected,
                got: j.entries.len(),
            }
            .into());
        }
        let mut point = vec![0; j.n];
        let mut entries = Vec::with_capacity(expected);
        for (i, e) in j.entries.iter().enumerate() {
            crate::table::decode_into(i, chain.len(), &mut point);
            let x =
                e.x.iter()
                    .map(|s| chain.parse_level(s))
                    .collect::<Result<Vec<_>, _>>()?;
            if x != point {
                return Err(JsonError::Shape(format!(
                    "entry {i} has x = {:?}, expected the grid point {:?}",
                    e.x,
                    point.iter().map(|&l| &chain.levels()[l]).collect::<Vec<_>>()
                )));
            }
            entries.push(chain.parse_level(&e.v)?);
        }
        Ok(AggregationTable::new(chain, j.n, entries)?)
    }
}

fn block_json(lo: String, lo_closed: bool, hi: String, hi_closed: bool, label: Option<String>) -> BlockJson {
    BlockJson {
        lo,
        lo_closed,
        hi,
        hi_closed,
        label,
    }
}

/// Blocks of a partition; finite blocks are closed level ranges.
fn partition_blocks(p: &IntervalPartition) -> Vec<BlockJson> {
    match p {
        IntervalPartition::Unit(blocks) => blocks
            .iter()
            .map(|b| block_json(b.lo.to_string(), b.lo_closed, b.hi.to_string(), b.hi_closed, None))
            .collect(),
        IntervalPartition::Finite { chain, starts } => {
            let levels = chain.levels();
            starts
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    let end = starts.get(i + 1).map_or(chain.top_index(), |next| next - 1);
                    block_json(levels[s].clone(), true, levels[end].clone(), true, None)
                })
                .collect()
        }
    }
}

fn partition_from_blocks(chain: &Chain, blocks: &[BlockJson]) -> Result<IntervalPartition, JsonError> {
    match chain {
        Chain::Unit => {
            let intervals = blocks
                .iter()
                .map(|b| {
                    let value = |s: &str| match chain.parse_value(s)? {
                        ChainValue::Unit(u) => Ok(u),
                        ChainValue::Level(_) => Err(ChainError::Mismatch),
                    };
                    Ok(UnitInterval {
                        lo: value(&b.lo)?,
                        lo_closed: b.lo_closed,
                        hi: value(&b.hi)?,
                        hi_closed: b.hi_closed,
                    })
                })
                .collect::<Result<Vec<_>, ChainError>>()?;
            Ok(IntervalPartition::unit(intervals)?)
        }
        Chain::Finite(f) => finite_partition_from_blocks(f, blocks),
    }
}

fn finite_partition_from_blocks(chain: &FiniteChain, blocks: &[BlockJson]) -> Result<IntervalPartition, JsonError> {
    if blocks.is_empty() {
        return Err(PartitionError::NoBlocks.into());
    }
    let mut ranges = Vec::with_capacity(blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        let lo = chain.parse_level(&b.lo)? + usize::from(!b.lo_closed);
        let hi = chain.parse_level(&b.hi)?;
        if hi < lo + usize::from(!b.hi_closed) {
            return Err(PartitionError::EmptyBlock(i).into());
        }
        ranges.push((lo, hi - usize::from(!b.hi_closed)));
    }
    if ranges[0].0 != 0 {
        return Err(PartitionError::BadStart.into());
    }
    for (i, w) in ranges.windows(2).enumerate() {
        if w[1].0 != w[0].1 + 1 {
            return Err(PartitionError::NotAdjacent(i).into());
        }
    }
    if ranges[ranges.len() - 1].1 != chain.top_index() {
        return Err(PartitionError::BadEnd.into());
    }
    let cuts: Vec<usize> = ranges[1..].iter().map(|r| r.0 - 1).collect();
    Ok(IntervalPartition::from_cuts(chain, &cuts)?)
}

impl From<&IntervalPartition> for PartitionJson {
    fn from(p: &IntervalPartition) -> Self {
        match p {
            IntervalPartition::Unit(_) => PartitionJson {
                chain: ChainJson::Unit,
                blocks: Some(partition_blocks(p)),
                cuts: None,
            },
            IntervalPartition::Finite { chain, .. } => PartitionJson {
                chain: ChainJson::Finite {
                    levels: chain.levels().to_vec(),
                },
                blocks: None,
                cuts: p.cuts(),
            },
        }
    }
}

impl TryFrom<&PartitionJson> for IntervalPartition {
    type Error = JsonError;

    fn try_from(j: &PartitionJson) -> Result<Self, JsonError> {
        let chain = Chain::try_from(&j.chain)?;
        match (&chain, &j.blocks, &j.cuts) {
            (Chain::Finite(f), None, Some(cuts)) => Ok(IntervalPartition::from_cuts(f, cuts)?),
            (_, Some(blocks), None) => partition_from_blocks(&chain, blocks),
            _ => Err(JsonError::Shape(
                "a partition needs either \"blocks\" or, on a finite chain, \"cuts\"".into(),
            )),
        }
    }
}

impl From<&Epimorphism> for EpimorphismJson {
    fn from(e: &Epimorphism) -> Self {
        let blocks = match (e.partition(), e.labels()) {
            (Some(p), Some(labels)) => partition_blocks(p)
                .into_iter()
                .zip(labels)
                .map(|(b, l)| BlockJson {
                    label: Some(l.to_string()),
                    ..b
                })
                .collect(),
            _ => Vec::new(),
        };
        EpimorphismJson {
            source: e.source().into(),
            target: e.target().into(),
            identity: e.is_identity(),
            blocks,
        }
    }
}

impl TryFrom<&EpimorphismJson> for Epimorphism {
    type Error = JsonError;

    fn try_from(j: &EpimorphismJson) -> Result<Self, JsonError> {
        let source = Chain::try_from(&j.source)?;
        let target = Chain::try_from(&j.target)?;
        if j.identity {
            if source != target || !j.blocks.is_empty() {
                return Err(JsonError::Shape(
                    "an identity epimorphism has equal source and target and no blocks".into(),
                ));
            }
            return Ok(Epimorphism::identity(&source));
        }
        let partition = partition_from_blocks(&source, &j.blocks)?;
        let labels = j
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let label = b
                    .label
                    .as_deref()
                    .ok_or_else(|| JsonError::Shape(format!("block {i} has no label")))?;
                Ok(target.parse_value(label)?)
            })
            .collect::<Result<Vec<_>, JsonError>>()?;
        Ok(make_epimorphism(partition, target, labels)?)
    }
}

pub fn chain_from_json(text: &str) -> Result<Chain, JsonError> {
    Ok(Chain::try_from(&serde_json::from_str::<ChainJson>(text)?)?)
}

pub fn capacity_from_json(text: &str) -> Result<Capacity, JsonError> {
    Capacity::try_from(&serde_json::from_str::<CapacityJson>(text)?)
}

pub fn capacity_to_json(c: &Capacity) -> String {
    to_pretty(&CapacityJson::from(c))
}

pub fn table_from_json(text: &str) -> Result<AggregationTable, JsonError> {
    AggregationTable::try_from(&serde_json::from_str::<TableJson>(text)?)
}

pub fn table_to_json(t: &AggregationTable) -> String {
    to_pretty(&TableJson::from(t))
}

pub fn partition_from_json(text: &str) -> Result<IntervalPartition, JsonError> {
    IntervalPartition::try_from(&serde_json::from_str::<PartitionJson>(text)?)
}

pub fn partition_to_json(p: &IntervalPartition) -> String {
    to_pretty(&PartitionJson::from(p))
}

pub fn epimorphism_from_json(text: &str) -> Result<Epimorphism, JsonError> {
    Epimorphism::try_from(&serde_json::from_str::<EpimorphismJson>(text)?)
}

pub fn epimorphism_to_json(e: &Epimorphism) -> String {
    to_pretty(&EpimorphismJson::from(e))
}

/// A JSON array of value literals, e.g. `["0.54", "0.7071", "3/7"]`.
pub fn vector_from_json(chain: &Chain, text: &str) -> Result<ScoreVector, JsonError> {
    let literals: Vec<String> = serde_json::from_str(text)?;
    let coords = literals
        .iter()
        .map(|s| chain.parse_value(s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ScoreVector::new(chain.clone(), coords)?)
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}
