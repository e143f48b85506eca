//! Decision sessions, weighted scoring and selection.
//!
//! A pattern's score is `Σ w(qa) · σ(qa)` where `σ` is `+1` for an improved
//! attribute and `-1` for a degraded one. Arithmetic is exact decimal.

mod oracle;
mod rank;
mod select;
mod session;

use std::collections::BTreeMap;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use crate::model::{Pattern, Vocabulary};

pub use oracle::{brute_force_oracle, ENUMERATION_LIMIT};
pub use rank::{compare_whatif, recommend, DiffReport, PatternChange, Recommendation, Top};
pub use select::{auto_select, Selection};
pub use session::{start_session, Session};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("model fails structural checks: {}", .0.join(", "))]
    UnvalidatedModel(Vec<String>),
    #[error("unknown gateway `{0}`")]
    UnknownGateway(String),
    #[error("gateway `{gateway}` has no branch `{label}`")]
    UnknownBranch { gateway: String, label: String },
    #[error("gateway `{gateway}`: {reason}")]
    ArityViolation { gateway: String, reason: String },
    #[error("gateway `{0}` is not reached by the current answers")]
    GatewayNotPending(String),
    #[error("unknown quality attribute `{0}`")]
    UnknownAttribute(String),
    #[error("weight for `{0}` is negative")]
    NegativeWeight(String),
    #[error("{count} candidate assignments exceed the enumeration limit of {limit}")]
    TooLargeToEnumerate { count: u128, limit: u128 },
}

impl EngineError {
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::UnvalidatedModel(_) => "unvalidated-model",
            EngineError::UnknownGateway(_) => "unknown-gateway",
            EngineError::UnknownBranch { .. } => "unknown-branch",
            EngineError::ArityViolation { .. } => "arity-violation",
            EngineError::GatewayNotPending(_) => "gateway-not-pending",
            EngineError::UnknownAttribute(_) => "unknown-attribute",
            EngineError::NegativeWeight(_) => "negative-weight",
            EngineError::TooLargeToEnumerate { .. } => "too-large-to-enumerate",
        }
    }
}

impl From<crate::model::ModelError> for EngineError {
    fn from(e: crate::model::ModelError) -> Self {
        let crate::model::ModelError::Unvalidated { codes } = e;
        EngineError::UnvalidatedModel(codes)
    }
}

/// Nonnegative priorities over quality attributes; absent attributes weigh 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct WeightVector {
    weights: BTreeMap<String, Decimal>,
}

impl WeightVector {
    /// Rejects attributes outside `vocabulary` and negative weights. Zero
    /// entries are dropped so equal vectors compare equal.
    pub fn new<I, K>(weights: I, vocabulary: &Vocabulary) -> Result<Self, EngineError>
    where
        I: IntoIterator<Item = (K, Decimal)>,
        K: Into<String>,
    {
        let mut out = BTreeMap::new();
        for (k, w) in weights {
            let k = k.into();
            if !vocabulary.contains(&k) {
                return Err(EngineError::UnknownAttribute(k));
            }
            if w.is_sign_negative() && !w.is_zero() {
                return Err(EngineError::NegativeWeight(k));
            }
            if !w.is_zero() {
                out.insert(k, w.normalize());
            }
        }
        Ok(WeightVector { weights: out })
    }

    pub fn empty() -> Self {
        WeightVector::default()
    }

    pub fn get(&self, attribute: &str) -> Decimal {
        self.weights.get(attribute).copied().unwrap_or(Decimal::ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Decimal)> {
        self.weights.iter().map(|(k, w)| (k.as_str(), *w))
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    /// `c · self`; `c` must be nonnegative.
    pub fn scaled(&self, c: Decimal) -> Self {
        assert!(!c.is_sign_negative() || c.is_zero(), "scale factor must be nonnegative");
        let weights = self
            .weights
            .iter()
            .map(|(k, w)| (k.clone(), (w * c).normalize()))
            .filter(|(_, w)| !w.is_zero())
            .collect();
        WeightVector { weights }
    }

    /// Pointwise sum.
    pub fn plus(&self, other: &WeightVector) -> Self {
        let mut weights = self.weights.clone();
        for (k, w) in &other.weights {
            let e = weights.entry(k.clone()).or_insert(Decimal::ZERO);
            *e = (*e + w).normalize();
        }
        WeightVector { weights }
    }

    /// Copy with one attribute's weight replaced.
    pub fn with(&self, attribute: &str, weight: Decimal) -> Self {
        let mut weights = self.weights.clone();
        if weight.is_zero() {
            weights.remove(attribute);
        } else {
            assert!(!weight.is_sign_negative(), "weights must be nonnegative");
            weights.insert(attribute.to_string(), weight.normalize());
        }
        WeightVector { weights }
    }
}

/// Branch labels chosen per gateway. Labels are kept sorted and unique.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AnswerSet {
    answers: BTreeMap<String, Vec<String>>,
}

impl AnswerSet {
    pub fn new() -> Self {
        AnswerSet::default()
    }

    pub fn with(mut self, gateway: &str, labels: &[&str]) -> Self {
        self.set(gateway, labels.iter().map(|l| l.to_string()).collect());
        self
    }

    pub fn set(&mut self, gateway: &str, mut labels: Vec<String>) {
        labels.sort();
        labels.dedup();
        self.answers.insert(gateway.to_string(), labels);
    }

    pub fn get(&self, gateway: &str) -> Option<&[String]> {
        self.answers.get(gateway).map(Vec::as_slice)
    }

    pub fn remove(&mut self, gateway: &str) -> Option<Vec<String>> {
        self.answers.remove(gateway)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.answers.iter().map(|(g, l)| (g.as_str(), l.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }

    pub fn into_map(self) -> BTreeMap<String, Vec<String>> {
        self.answers
    }
}

impl From<BTreeMap<String, Vec<String>>> for AnswerSet {
    fn from(map: BTreeMap<String, Vec<String>>) -> Self {
        let mut set = AnswerSet::new();
        for (g, labels) in map {
            set.set(&g, labels);
        }
        set
    }
}

pub fn score_pattern(pattern: &Pattern, weights: &WeightVector) -> Decimal {
    pattern
        .impacts
        .iter()
        .map(|i| weights.get(&i.attribute) * Decimal::from(i.direction.sign()))
        .sum::<Decimal>()
        .normalize()
}
