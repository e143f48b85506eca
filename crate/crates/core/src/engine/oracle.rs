//! Exhaustive reference for [`auto_select`](super::auto_select).
//!
//! Shares nothing with the search beyond the model types and
//! [`score_pattern`]: it assigns an option to every gateway, walks the
//! graph, keeps only the choices of gateways that were reached and
//! deduplicates.

use std::collections::{BTreeMap, BTreeSet};

use rust_decimal::Decimal;

use super::{score_pattern, EngineError, Selection, WeightVector};
use crate::model::{check_executable, DecisionModel, GatewayKind};

/// Most candidate assignments the oracle will enumerate.
pub const ENUMERATION_LIMIT: u128 = 1 << 20;

fn gateway_options(model: &DecisionModel, gateway: &str) -> Vec<BTreeSet<String>> {
    let g = &model.gateways[gateway];
    let labels: BTreeSet<String> = g.branches.iter().map(|b| b.label.clone()).collect();
    match g.kind {
        GatewayKind::Parallel => vec![labels],
        GatewayKind::Exclusive => labels.into_iter().map(|l| BTreeSet::from([l])).collect(),
        GatewayKind::Inclusive => {
            // Grow the power set one label at a time, then drop the empty set.
            let mut subsets = vec![BTreeSet::new()];
            for l in labels {
                let with: Vec<BTreeSet<String>> = subsets
                    .iter()
                    .map(|s| {
                        let mut s = s.clone();
                        s.insert(l.clone());
                        s
                    })
                    .collect();
                subsets.extend(with);
            }
            subsets.retain(|s| !s.is_empty());
            subsets
        }
    }
}

fn activate<'m>(
    model: &'m DecisionModel,
    node: &'m str,
    assignment: &BTreeMap<&str, &BTreeSet<String>>,
    reached: &mut BTreeSet<&'m str>,
) {
    if !reached.insert(node) {
        return;
    }
    if let Some(p) = model.patterns.get(node) {
        if let Some(next) = &p.next {
            activate(model, next, assignment, reached);
        }
    } else if let Some(g) = model.gateways.get(node) {
        let chosen = assignment[node];
        for b in &g.branches {
            if chosen.contains(&b.label) {
                activate(model, &b.target, assignment, reached);
            }
        }
    }
}

/// Enumerates every admissible selection and returns the preferred one
/// together with how many distinct selections were seen.
pub fn brute_force_oracle(model: &DecisionModel, weights: &WeightVector) -> Result<(Selection, usize), EngineError> {
    check_executable(model)?;
    let ids: Vec<&str> = model.gateways.keys().map(String::as_str).collect();
    let options: Vec<Vec<BTreeSet<String>>> = ids.iter().map(|id| gateway_options(model, id)).collect();
    let count = options.iter().try_fold(1u128, |acc, o| acc.checked_mul(o.len() as u128));
    match count {
        Some(c) if c <= ENUMERATION_LIMIT => {}
        other => {
            return Err(EngineError::TooLargeToEnumerate { count: other.unwrap_or(u128::MAX), limit: ENUMERATION_LIMIT })
        }
    }

    let mut seen: BTreeSet<BTreeMap<String, Vec<String>>> = BTreeSet::new();
    let mut best: Option<Selection> = None;
    let mut digits = vec![0usize; ids.len()];
    loop {
        let assignment: BTreeMap<&str, &BTreeSet<String>> =
            ids.iter().zip(&digits).enumerate().map(|(i, (id, d))| (*id, &options[i][*d])).collect();
        let mut reached = BTreeSet::new();
        activate(model, &model.start, &assignment, &mut reached);

        let choices: BTreeMap<String, Vec<String>> = reached
            .iter()
            .filter(|id| model.gateways.get(**id).is_some_and(|g| g.kind != GatewayKind::Parallel))
            .map(|id| (id.to_string(), assignment[id].iter().cloned().collect()))
            .collect();
        if seen.insert(choices.clone()) {
            let patterns: Vec<String> =
                reached.iter().filter(|id| model.patterns.contains_key(**id)).map(|id| id.to_string()).collect();
            let total: Decimal = patterns.iter().map(|id| score_pattern(&model.patterns[id], weights)).sum();
            let candidate = Selection { choices, patterns, total_score: total.normalize() };
            if best.as_ref().is_none_or(|b| candidate.preference(b).is_lt()) {
                best = Some(candidate);
            }
        }

        // Mixed-radix increment.
        let mut i = 0;
        loop {
            if i == digits.len() {
                let best = best.expect("at least one assignment was enumerated");
                return Ok((best, seen.len()));
            }
            digits[i] += 1;
            if digits[i] < options[i].len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}
