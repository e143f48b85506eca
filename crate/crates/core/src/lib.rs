//! Architecture decision models for quantum software systems.
//!
//! * [`model`]: the typed gateway graph, QA vocabulary and structural validation.
//! * [`dsl`]: the `.qdm` authoring language (parser, canonical serializer, linter).
//! * [`engine`]: decision sessions, weighted scoring, ranking and automatic selection.
//! * [`catalog`]: the six bundled decision models and provenance utilities.

pub mod catalog;
pub mod dsl;
pub mod engine;
pub mod model;
#[cfg(feature = "testkit")]
pub mod testkit;

pub use model::{
    Branch, DecisionModel, DesignArea, Direction, Gateway, GatewayKind, Pattern, QualityImpact,
    Vocabulary,
};
