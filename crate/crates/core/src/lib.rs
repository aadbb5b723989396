//! EMOF-style abstract syntax for bigraphs.
//!
//! - [`bigraph`]: pure bigraphs over basic signatures and their validation.
//! - [`typegraph`]: type graphs, typed instance graphs and their checkers.
//! - [`mapping`]: the canonical encoding of bigraphs as typed graphs and back.
//! - [`variability`]: the feature model of representation variants, the 150%
//!   type graph and instance-level deltas.
//! - [`constraints`]: a small navigation-constraint language over instance graphs.
//! - [`io`]: JSON document envelopes for every artifact.
//! - [`generate`]: random valid bigraphs.

pub mod bigraph;
pub mod constraints;
pub mod generate;
pub mod io;
pub mod mapping;
pub mod names;
pub mod report;
pub mod typegraph;
pub mod variability;

pub use bigraph::{
    make_signature, ports_of, validate_bigraph, Bigraph, BigraphBuilder, Control, Interface, Link,
    Parent, Place, Point, Port, Signature,
};
pub use mapping::{
    base_type_graph, check_arity_rule, check_encoding, check_soundness, decode, encode,
    extend_for_signature, Element, ElementMap,
};
pub use report::{Finding, Severity, ValidationReport};
pub use typegraph::{
    all_sub, check_multiplicities, check_typing, check_validity, AttrValue, DataType,
    InstanceGraph, Multiplicity, TypeGraph,
};
pub use variability::{
    annotate_150, apply_deltas, derive_type_graph, enumerate_configs, validate_config, Feature,
    FeatureConfig, FeatureModel,
};
