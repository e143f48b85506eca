//! Ranking active patterns and comparing two weightings.

use std::num::NonZeroUsize;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

use super::{score_pattern, AnswerSet, EngineError, Session, WeightVector};
use crate::model::{DecisionModel, DesignArea};

/// A ranked pattern with the facts behind its score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recommendation {
    pub pattern: String,
    pub name: String,
    pub area: DesignArea,
    pub score: Decimal,
    pub improves: Vec<String>,
    pub degrades: Vec<String>,
    pub constraints: Vec<String>,
    pub complements: Vec<String>,
    /// Node ids from `start` to the pattern.
    pub path: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Top {
    All,
    K(NonZeroUsize),
}

impl Top {
    /// `None` for zero.
    pub fn k(k: usize) -> Option<Top> {
        NonZeroUsize::new(k).map(Top::K)
    }
}

fn ranked(session: &Session<'_>, weights: &WeightVector) -> Vec<Recommendation> {
    let model = session.model();
    let mut recs: Vec<Recommendation> = session
        .active_patterns()
        .map(|id| {
            let p = &model.patterns[id];
            Recommendation {
                pattern: p.id.clone(),
                name: p.name.clone(),
                area: p.area,
                score: score_pattern(p, weights),
                improves: p.improved().map(str::to_string).collect(),
                degrades: p.degraded().map(str::to_string).collect(),
                constraints: p.constraints.clone(),
                complements: p.complements.clone(),
                path: session.path_to(id).map(<[String]>::to_vec).unwrap_or_default(),
            }
        })
        .collect();
    recs.sort_by(|a, b| b.score.cmp(&a.score).then_with(|| a.pattern.cmp(&b.pattern)));
    recs
}

/// Patterns active under `answers`, by score descending then id ascending.
pub fn recommend(
    model: &DecisionModel,
    answers: &AnswerSet,
    weights: &WeightVector,
    top: Top,
) -> Result<Vec<Recommendation>, EngineError> {
    let session = Session::from_answers(model, answers)?;
    let mut recs = ranked(&session, weights);
    if let Top::K(k) = top {
        recs.truncate(k.get());
    }
    Ok(recs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternChange {
    pub pattern: String,
    pub score_a: Decimal,
    pub score_b: Decimal,
    pub delta: Decimal,
    /// 1-based.
    pub rank_a: usize,
    pub rank_b: usize,
    /// Places gained going from `a` to `b`; negative when the pattern drops.
    pub movement: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffReport {
    /// Patterns whose score or rank differs, by id.
    pub changes: Vec<PatternChange>,
    /// Pairs `(p, q)` with `p < q` whose relative order differs.
    pub flipped: Vec<(String, String)>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.changes.is_empty() && self.flipped.is_empty()
    }
}

/// Score and rank differences between two weightings of the same answers.
pub fn compare_whatif(
    model: &DecisionModel,
    answers: &AnswerSet,
    weights_a: &WeightVector,
    weights_b: &WeightVector,
) -> Result<DiffReport, EngineError> {
    let session = Session::from_answers(model, answers)?;
    let a = ranked(&session, weights_a);
    let b = ranked(&session, weights_b);
    let position = |recs: &[Recommendation], id: &str| recs.iter().position(|r| r.pattern == id).map(|i| i + 1);

    let mut ids: Vec<&str> = a.iter().map(|r| r.pattern.as_str()).collect();
    ids.sort_unstable();
    let ranks: Vec<(&str, usize, usize)> = ids
        .iter()
        .map(|id| (*id, position(&a, id).unwrap_or(0), position(&b, id).unwrap_or(0)))
        .collect();

    let mut report = DiffReport::default();
    for &(id, rank_a, rank_b) in &ranks {
        let score_a = a[rank_a - 1].score;
        let score_b = b[rank_b - 1].score;
        if score_a != score_b || rank_a != rank_b {
            report.changes.push(PatternChange {
                pattern: id.to_string(),
                score_a,
                score_b,
                delta: (score_b - score_a).normalize(),
                rank_a,
                rank_b,
                movement: rank_a as i64 - rank_b as i64,
            });
        }
    }
    for (i, &(p, pa, pb)) in ranks.iter().enumerate() {
        for &(q, qa, qb) in &ranks[i + 1..] {
            if (pa < qa) != (pb < qb) {
                report.flipped.push((p.to_string(), q.to_string()));
            }
        }
    }
    Ok(report)
}
