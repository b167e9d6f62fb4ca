//! Test cases from subspecifications and hand-written partition models.
//!
//! Every combination of partitions (one per parameter, plus an optional
//! receiver fixture) becomes one case. A partition may map to a
//! subspecification label; cases bound to a subspecification that signals
//! expect that exception.

mod cases;
mod emit;
mod model;

pub use cases::{enumerate_cases, test_name, Expectation, Namer, TestCase};
pub use emit::{derive_suite, emit_manifest, emit_skeletons, SkeletonStyle, TestSuite, MANIFEST_SCHEMA_VERSION};
pub use model::{
    load_test_model, parse_test_model, validate_model, Domain, Fixture, Observation, Partition, PartitionKind,
    TestModel,
};
