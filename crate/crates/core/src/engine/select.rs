//! Score-maximizing automatic selection.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::{score_pattern, AnswerSet, EngineError, Session, WeightVector};
use crate::model::{DecisionModel, GatewayKind};

/// One admissible outcome of a whole decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    /// Sorted labels per activated non-parallel gateway.
    pub choices: BTreeMap<String, Vec<String>>,
    /// Selected pattern ids, ascending.
    pub patterns: Vec<String>,
    pub total_score: Decimal,
}

impl Selection {
    /// Total order used to pick among selections: higher score first, then
    /// the lexicographically smaller pattern-id sequence, then smaller choices.
    pub fn preference(&self, other: &Selection) -> Ordering {
        other
            .total_score
            .cmp(&self.total_score)
            .then_with(|| self.patterns.cmp(&other.patterns))
            .then_with(|| self.choices.iter().cmp(other.choices.iter()))
    }
}

/// The branch options of a gateway, each a sorted label list: singletons
/// for exclusive, every nonempty subset for inclusive.
pub(super) fn options(model: &DecisionModel, gateway: &str) -> Vec<Vec<String>> {
    let g = &model.gateways[gateway];
    let mut labels: Vec<String> = g.branches.iter().map(|b| b.label.clone()).collect();
    labels.sort();
    match g.kind {
        GatewayKind::Parallel => vec![Vec::new()],
        GatewayKind::Exclusive => labels.into_iter().map(|l| vec![l]).collect(),
        GatewayKind::Inclusive => (1u64..1 << labels.len())
            .map(|mask| {
                labels.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, l)| l.clone()).collect()
            })
            .collect(),
    }
}

struct Search<'m> {
    model: &'m DecisionModel,
    scores: BTreeMap<&'m str, Decimal>,
    best: Option<Selection>,
}

impl<'m> Search<'m> {
    /// Patterns reachable from `roots` along any edge.
    fn reachable_from(&self, roots: &BTreeSet<String>) -> BTreeSet<&'m str> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&str> = roots.iter().map(String::as_str).collect();
        let mut out = BTreeSet::new();
        while let Some(id) = stack.pop() {
            let Some(node) = self.model.node(id) else { continue };
            let id = node.id();
            if !seen.insert(id) {
                continue;
            }
            if self.model.patterns.contains_key(id) {
                out.insert(id);
            }
            stack.extend(node.successors());
        }
        out
    }

    fn visit(&mut self, session: Session<'m>) {
        let selected: Vec<String> = session.active_patterns().map(str::to_string).collect();
        let score: Decimal = selected.iter().map(|id| self.scores[id.as_str()]).sum();

        let Some(next) = session.frontier().iter().next().cloned() else {
            let candidate = Selection {
                choices: session.answers().clone().into_map(),
                patterns: selected,
                total_score: score.normalize(),
            };
            if self.best.as_ref().is_none_or(|b| candidate.preference(b) == Ordering::Less) {
                self.best = Some(candidate);
            }
            return;
        };

        if let Some(best) = &self.best {
            let chosen: BTreeSet<&str> = selected.iter().map(String::as_str).collect();
            let open: BTreeSet<&str> =
                self.reachable_from(session.frontier()).into_iter().filter(|p| !chosen.contains(p)).collect();
            let bound = score + open.iter().map(|p| self.scores[p].max(Decimal::ZERO)).sum::<Decimal>();
            match bound.cmp(&best.total_score) {
                Ordering::Less => return,
                Ordering::Equal => {
                    // Smallest pattern sequence any completion could reach.
                    let mut floor: Vec<&str> = chosen.iter().copied().collect();
                    if let Some(max) = chosen.last() {
                        floor.extend(open.iter().filter(|p| *p < max));
                    }
                    floor.sort_unstable();
                    if floor.iter().copied().cmp(best.patterns.iter().map(String::as_str)) == Ordering::Greater {
                        return;
                    }
                }
                Ordering::Greater => {}
            }
        }

        for option in options(self.model, &next) {
            let labels: Vec<&str> = option.iter().map(String::as_str).collect();
            let child = session.answer(&next, &labels).expect("options are admissible");
            self.visit(child);
        }
    }
}

/// Best admissible selection over every way of answering the model.
///
/// Branch and bound over pending gateways taken in id order; the bound adds
/// every positive score still reachable.
pub fn auto_select(model: &DecisionModel, weights: &WeightVector) -> Result<Selection, EngineError> {
    let root = Session::from_answers(model, &AnswerSet::new())?;
    let scores = model.patterns.iter().map(|(id, p)| (id.as_str(), score_pattern(p, weights))).collect();
    let mut search = Search { model, scores, best: None };
    search.visit(root);
    Ok(search.best.expect("an executable model has at least one admissible selection"))
}
