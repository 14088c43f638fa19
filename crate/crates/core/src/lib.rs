//! Discrete Sugeno integrals over bounded chains.
//!
//! Values live either in the rational unit interval or in a finite chain of
//! labelled levels. The crate evaluates Sugeno integrals, recognizes them
//! among explicit aggregation tables, checks compatibility with chain
//! congruences, and pushes capacities forward along scale epimorphisms.

pub mod capacity;
pub mod chain;

pub mod cli;
pub mod congruence;
mod enumerate;
pub mod json;

pub mod scale;
pub mod sugeno;
pub mod table;

pub use capacity::{
    capacity_from_table, cardinality_capacity, enumerate_capacities, pushforward_capacity, validate_capacity, Capacity,
    CapacityError, SetFunction, SubsetId, Violation,
};
pub use chain::{compare, join, median3, meet, Chain, ChainError, ChainValue, FiniteChain, Level, UnitValue};
pub use congruence::{
    congruent, enumerate_interval_partitions, is_compatible, is_compatible_all, is_congruence, verify_proposition1,
    verify_theorem1, CongruenceError, EquivalenceRelation, IntervalPartition, PartitionError, Theorem1Report,
    UnitInterval,
};
pub use scale::{
    check_scale_invariance, make_epimorphism, map_through, scale_invariance_failure, verify_theorem2, Epimorphism,
    ScaleError, ScaleMapping, Theorem2Report,
};
pub use sugeno::{
    check_comonotone_maxitive, check_idempotent, check_median_decomposable, check_min_homogeneous, recognize_sugeno,
    sugeno_eval, sugeno_table, Counterexample, Formula, Property, ScoreVector, SugenoError,
};
pub use table::{enumerate_aggregation_tables, truncated_sum_table, AggregationTable, TableError};

/// Runs the recognizer for `p` on `t`. Compatibility is checked against
/// every interval partition, scale invariance against every quotient
/// epimorphism.
pub fn check_property(t: &AggregationTable, p: Property) -> Result<Result<(), Box<Counterexample>>, ScaleError> {
    Ok(match p {
        Property::Sugeno => recognize_sugeno(t).map(|_| ()),
        Property::Idempotent => check_idempotent(t),
        Property::ComonotoneMaxitive => check_comonotone_maxitive(t),
        Property::MinHomogeneous => check_min_homogeneous(t),
        Property::MedianDecomposable => check_median_decomposable(t),
        Property::Compatible => is_compatible_all(t)?,
        Property::ScaleInvariant => match scale_invariance_failure(t)? {
            Some(cx) => Err(cx),
            None => Ok(()),
        },
    })
}
