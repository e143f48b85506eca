//! Study quality scoring used when the catalog sources were screened.

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssessmentError {
    #[error("expected {expected} {kind} scores, got {got}")]
    WrongLength { kind: &'static str, expected: usize, got: usize },
    #[error("{kind} score {index} is {value}; allowed values are 0, 0.5 and 1")]
    InvalidScore { kind: &'static str, index: usize, value: Decimal },
}

/// Five generic and three specific criteria, each scored 0, 0.5 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QualityAssessment {
    generic: [Decimal; 5],
    specific: [Decimal; 3],
}

fn check<const N: usize>(kind: &'static str, scores: &[Decimal]) -> Result<[Decimal; N], AssessmentError> {
    let arr: [Decimal; N] = scores
        .try_into()
        .map_err(|_| AssessmentError::WrongLength { kind, expected: N, got: scores.len() })?;
    let half = Decimal::new(5, 1);
    for (index, value) in arr.iter().enumerate() {
        if ![Decimal::ZERO, half, Decimal::ONE].contains(value) {
            return Err(AssessmentError::InvalidScore { kind, index: index + 1, value: *value });
        }
    }
    Ok(arr)
}

impl QualityAssessment {
    pub fn new(generic: &[Decimal], specific: &[Decimal]) -> Result<Self, AssessmentError> {
        Ok(QualityAssessment { generic: check("generic", generic)?, specific: check("specific", specific)? })
    }

    pub fn generic(&self) -> &[Decimal; 5] {
        &self.generic
    }

    pub fn specific(&self) -> &[Decimal; 3] {
        &self.specific
    }
}

/// `ΣG + 3·ΣS`.
pub fn slr_quality_score(a: &QualityAssessment) -> Decimal {
    let g: Decimal = a.generic.iter().sum();
    let s: Decimal = a.specific.iter().sum();
    (g + Decimal::from(3) * s).normalize()
}

/// Inclusion threshold: a score of 1.5 or more.
pub fn slr_include(score: Decimal) -> bool {
    score >= Decimal::new(15, 1)
}
