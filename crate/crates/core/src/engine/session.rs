//! Walking a model from its start node under a set of answers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{AnswerSet, EngineError};
use crate::model::{check_executable, DecisionModel, GatewayKind, Node};

/// Immutable snapshot of a decision in progress.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session<'a> {
    model: &'a DecisionModel,
    answers: AnswerSet,
    frontier: BTreeSet<String>,
    active: BTreeSet<String>,
    paths: BTreeMap<String, Vec<String>>,
}

pub fn start_session(model: &DecisionModel) -> Result<Session<'_>, EngineError> {
    Session::from_answers(model, &AnswerSet::new())
}

/// Checks labels and arity of one answer against its gateway.
pub(super) fn check_answer(model: &DecisionModel, gateway: &str, labels: &[String]) -> Result<(), EngineError> {
    let g = model.gateways.get(gateway).ok_or_else(|| EngineError::UnknownGateway(gateway.to_string()))?;
    let arity = |reason: &str| EngineError::ArityViolation { gateway: gateway.to_string(), reason: reason.to_string() };
    match g.kind {
        GatewayKind::Parallel => return Err(arity("parallel gateways take no answer")),
        GatewayKind::Exclusive if labels.len() != 1 => {
            return Err(arity(&format!("exclusive gateways take exactly one label, got {}", labels.len())))
        }
        GatewayKind::Inclusive if labels.is_empty() => {
            return Err(arity("inclusive gateways take at least one label"))
        }
        _ => {}
    }
    for label in labels {
        if g.branch(label).is_none() {
            return Err(EngineError::UnknownBranch { gateway: gateway.to_string(), label: label.clone() });
        }
    }
    Ok(())
}

impl<'a> Session<'a> {
    /// Builds a session from a complete answer set. Every answer must be
    /// well-formed; answers for gateways the walk never reaches are dropped.
    pub fn from_answers(model: &'a DecisionModel, answers: &AnswerSet) -> Result<Self, EngineError> {
        check_executable(model)?;
        for (g, labels) in answers.iter() {
            check_answer(model, g, labels)?;
        }
        Ok(Session::walk(model, answers))
    }

    /// Closure of `start` under the answers, breadth first in branch order.
    fn walk(model: &'a DecisionModel, answers: &AnswerSet) -> Self {
        let mut active = BTreeSet::new();
        let mut frontier = BTreeSet::new();
        let mut paths: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut used = AnswerSet::new();
        let mut queue = VecDeque::from([(model.start.clone(), vec![model.start.clone()])]);

        while let Some((id, path)) = queue.pop_front() {
            if !active.insert(id.clone()) {
                continue;
            }
            let targets: Vec<&str> = match model.node(&id) {
                Some(Node::Pattern(p)) => p.next.as_deref().into_iter().collect(),
                Some(Node::Gateway(g)) if g.kind == GatewayKind::Parallel => {
                    g.branches.iter().map(|b| b.target.as_str()).collect()
                }
                Some(Node::Gateway(g)) => match answers.get(&id) {
                    Some(labels) => {
                        used.set(&id, labels.to_vec());
                        g.branches
                            .iter()
                            .filter(|b| labels.contains(&b.label))
                            .map(|b| b.target.as_str())
                            .collect()
                    }
                    None => {
                        frontier.insert(id.clone());
                        Vec::new()
                    }
                },
                None => Vec::new(),
            };
            for t in targets {
                if !active.contains(t) {
                    let mut p = path.clone();
                    p.push(t.to_string());
                    queue.push_back((t.to_string(), p));
                }
            }
            paths.insert(id, path);
        }
        Session { model, answers: used, frontier, active, paths }
    }

    /// Answers (or re-answers) a reached gateway and recomputes the closure.
    pub fn answer(&self, gateway: &str, labels: &[&str]) -> Result<Session<'a>, EngineError> {
        let mut labels: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
        labels.sort();
        labels.dedup();
        check_answer(self.model, gateway, &labels)?;
        if !self.active.contains(gateway) {
            return Err(EngineError::GatewayNotPending(gateway.to_string()));
        }
        let mut answers = self.answers.clone();
        answers.set(gateway, labels);
        Ok(Session::walk(self.model, &answers))
    }

    pub fn model(&self) -> &'a DecisionModel {
        self.model
    }

    /// Answers that took effect.
    pub fn answers(&self) -> &AnswerSet {
        &self.answers
    }

    /// Reached gateways still waiting for an answer, ascending.
    pub fn frontier(&self) -> &BTreeSet<String> {
        &self.frontier
    }

    /// Every reached node, gateways included.
    pub fn active(&self) -> &BTreeSet<String> {
        &self.active
    }

    /// Reached pattern ids, ascending.
    pub fn active_patterns(&self) -> impl Iterator<Item = &str> + '_ {
        self.active.iter().filter(|id| self.model.patterns.contains_key(*id)).map(String::as_str)
    }

    /// First-discovered path from `start` to `node`, both ends included.
    pub fn path_to(&self, node: &str) -> Option<&[String]> {
        self.paths.get(node).map(Vec::as_slice)
    }

    pub fn is_complete(&self) -> bool {
        self.frontier.is_empty()
    }
}
