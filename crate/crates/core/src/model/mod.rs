//! Typed graph model for architecture decision models.
//!
//! A [`DecisionModel`] is one design area's directed acyclic graph: a start
//! node, gateways that branch on user-answered conditions, and pattern nodes
//! annotated with the quality attributes they improve or degrade.

mod validate;
mod vocabulary;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use validate::{
    is_identifier, qa_usage, reachable_patterns, validate_model, Finding, ModelError, QaUsage,
    Severity, ValidationReport,
};
pub(crate) use validate::check_executable;
pub use vocabulary::{QualityAttribute, Resolved, Vocabulary, VocabularyError};

/// The six design areas a catalog covers.
///
/// Variants are declared in id order so the derived `Ord` sorts by id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DesignArea {
    AlgorithmImplementation,
    Communication,
    DataProcessing,
    Decomposition,
    FaultTolerance,
    IntegrationOptimization,
}

impl DesignArea {
    pub const ALL: [DesignArea; 6] = [
        DesignArea::AlgorithmImplementation,
        DesignArea::Communication,
        DesignArea::DataProcessing,
        DesignArea::Decomposition,
        DesignArea::FaultTolerance,
        DesignArea::IntegrationOptimization,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DesignArea::AlgorithmImplementation => "algorithm-implementation",
            DesignArea::Communication => "communication",
            DesignArea::DataProcessing => "data-processing",
            DesignArea::Decomposition => "decomposition",
            DesignArea::FaultTolerance => "fault-tolerance",
            DesignArea::IntegrationOptimization => "integration-optimization",
        }
    }

    /// Human readable area name.
    pub fn display_name(self) -> &'static str {
        match self {
            DesignArea::AlgorithmImplementation => "Algorithm Implementation",
            DesignArea::Communication => "Communication",
            DesignArea::DataProcessing => "Data Processing",
            DesignArea::Decomposition => "Decomposition",
            DesignArea::FaultTolerance => "Fault Tolerance",
            DesignArea::IntegrationOptimization => "Integration and Optimization",
        }
    }
}

impl fmt::Display for DesignArea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown design area `{0}`")]
pub struct UnknownArea(pub String);

impl FromStr for DesignArea {
    type Err = UnknownArea;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DesignArea::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| UnknownArea(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Improves,
    Degrades,
}

impl Direction {
    /// +1 for improves, -1 for degrades.
    pub fn sign(self) -> i64 {
        match self {
            Direction::Improves => 1,
            Direction::Degrades => -1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Improves => "improves",
            Direction::Degrades => "degrades",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QualityImpact {
    pub attribute: String,
    pub direction: Direction,
}

impl QualityImpact {
    pub fn improves(attribute: impl Into<String>) -> Self {
        QualityImpact { attribute: attribute.into(), direction: Direction::Improves }
    }

    pub fn degrades(attribute: impl Into<String>) -> Self {
        QualityImpact { attribute: attribute.into(), direction: Direction::Degrades }
    }
}

/// A catalog entry: an architecture pattern or strategy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    pub id: String,
    pub name: String,
    pub area: DesignArea,
    #[serde(default)]
    pub summary: String,
    /// Improvements first, then degradations, each in authored order.
    #[serde(default)]
    pub impacts: Vec<QualityImpact>,
    /// Advisory prose; never used as a filter.
    #[serde(default)]
    pub constraints: Vec<String>,
    /// Sorted, deduplicated ids of complementary patterns in the same model.
    #[serde(default)]
    pub complements: Vec<String>,
    /// Conditional flow target.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next: Option<String>,
    #[serde(default)]
    pub refs: Vec<String>,
    /// Shared id linking the same pattern catalogued in several areas.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<String>,
}

impl Pattern {
    pub fn new(id: impl Into<String>, name: impl Into<String>, area: DesignArea) -> Self {
        Pattern {
            id: id.into(),
            name: name.into(),
            area,
            summary: String::new(),
            impacts: Vec::new(),
            constraints: Vec::new(),
            complements: Vec::new(),
            next: None,
            refs: Vec::new(),
            canonical: None,
        }
    }

    pub fn improved(&self) -> impl Iterator<Item = &str> {
        self.impacts_in(Direction::Improves)
    }

    pub fn degraded(&self) -> impl Iterator<Item = &str> {
        self.impacts_in(Direction::Degrades)
    }

    fn impacts_in(&self, direction: Direction) -> impl Iterator<Item = &str> {
        self.impacts
            .iter()
            .filter(move |i| i.direction == direction)
            .map(|i| i.attribute.as_str())
    }

    /// Direction this pattern lists for `attribute`, if any.
    pub fn impact_on(&self, attribute: &str) -> Option<Direction> {
        self.impacts.iter().find(|i| i.attribute == attribute).map(|i| i.direction)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GatewayKind {
    /// Activates any nonempty subset of its branches.
    Inclusive,
    /// Activates exactly one branch.
    Exclusive,
    /// Activates every branch; takes no answer.
    Parallel,
}

impl GatewayKind {
    pub const ALL: [GatewayKind; 3] =
        [GatewayKind::Inclusive, GatewayKind::Exclusive, GatewayKind::Parallel];

    pub fn as_str(self) -> &'static str {
        match self {
            GatewayKind::Inclusive => "inclusive",
            GatewayKind::Exclusive => "exclusive",
            GatewayKind::Parallel => "parallel",
        }
    }

    pub fn parse(s: &str) -> Option<GatewayKind> {
        GatewayKind::ALL.into_iter().find(|k| k.as_str() == s)
    }
}

impl fmt::Display for GatewayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub label: String,
    /// Guard prose shown to the user.
    pub condition: String,
    pub target: String,
}

impl Branch {
    pub fn new(
        label: impl Into<String>,
        condition: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        Branch { label: label.into(), condition: condition.into(), target: target.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gateway {
    pub id: String,
    pub kind: GatewayKind,
    pub question: String,
    /// Declaration order is significant.
    pub branches: Vec<Branch>,
}

impl Gateway {
    pub fn new(id: impl Into<String>, kind: GatewayKind, question: impl Into<String>) -> Self {
        Gateway { id: id.into(), kind, question: question.into(), branches: Vec::new() }
    }

    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branches.push(branch);
        self
    }

    pub fn branch(&self, label: &str) -> Option<&Branch> {
        self.branches.iter().find(|b| b.label == label)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    #[serde(default)]
    pub refs: Vec<String>,
}

/// Borrowed view of a graph node.
#[derive(Debug, Clone, Copy)]
pub enum Node<'a> {
    Gateway(&'a Gateway),
    Pattern(&'a Pattern),
}

impl<'a> Node<'a> {
    pub fn id(&self) -> &'a str {
        match self {
            Node::Gateway(g) => &g.id,
            Node::Pattern(p) => &p.id,
        }
    }

    /// Outgoing edge targets: branch targets for gateways, `next` for patterns.
    pub fn successors(&self) -> Vec<&'a str> {
        match self {
            Node::Gateway(g) => g.branches.iter().map(|b| b.target.as_str()).collect(),
            Node::Pattern(p) => p.next.as_deref().into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionModel {
    pub area: DesignArea,
    pub start: String,
    #[serde(default)]
    pub gateways: BTreeMap<String, Gateway>,
    #[serde(default)]
    pub patterns: BTreeMap<String, Pattern>,
    #[serde(default)]
    pub meta: ModelMeta,
}

impl DecisionModel {
    pub fn new(area: DesignArea, title: impl Into<String>, start: impl Into<String>) -> Self {
        DecisionModel {
            area,
            start: start.into(),
            gateways: BTreeMap::new(),
            patterns: BTreeMap::new(),
            meta: ModelMeta { title: title.into(), version: None, refs: Vec::new() },
        }
    }

    pub fn with_gateway(mut self, gateway: Gateway) -> Self {
        self.gateways.insert(gateway.id.clone(), gateway);
        self
    }

    pub fn with_pattern(mut self, pattern: Pattern) -> Self {
        self.patterns.insert(pattern.id.clone(), pattern);
        self
    }

    pub fn node(&self, id: &str) -> Option<Node<'_>> {
        self.gateways
            .get(id)
            .map(Node::Gateway)
            .or_else(|| self.patterns.get(id).map(Node::Pattern))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.gateways.contains_key(id) || self.patterns.contains_key(id)
    }

    /// Every node id, gateways and patterns merged, ascending.
    pub fn node_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> =
            self.gateways.keys().chain(self.patterns.keys()).map(String::as_str).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Adds missing reverse `complements` edges.
    ///
    /// Returns the `(from, to)` pairs that were added, where `to` now lists
    /// `from`. Links to unknown patterns are left for validation to report.
    pub fn close_complements(&mut self) -> Vec<(String, String)> {
        let mut missing = Vec::new();
        for (id, p) in &self.patterns {
            for other in &p.complements {
                if let Some(q) = self.patterns.get(other) {
                    if other != id && !q.complements.contains(id) {
                        missing.push((id.clone(), other.clone()));
                    }
                }
            }
        }
        for (from, to) in &missing {
            if let Some(q) = self.patterns.get_mut(to) {
                q.complements.push(from.clone());
            }
        }
        for p in self.patterns.values_mut() {
            p.complements.sort();
            p.complements.dedup();
        }
        missing
    }
}
