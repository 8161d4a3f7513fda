//! Dimension verdicts for linear systems on `X_r` under the
//! Segre–Harbourne–Gimigliano–Hirschowitz conjecture, in Gimigliano's form:
//! if `d > m_1 + m_2 + m_3` (three largest multiplicities) then
//! `dim |D| = edim(D)`.
//!
//! Dimensions are projective, `dim |D| = h⁰(D) - 1`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::divisor::DivisorClass;
use crate::serde_util::decimal;

/// Which assumption a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AssumptionStatus {
    Unconditional,
    ShghConditional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DimStatus {
    UnconditionalLowerBound,
    ShghConditionalExact,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionalDim {
    #[serde(with = "decimal")]
    pub value: BigInt,
    pub status: DimStatus,
    pub criterion_met: bool,
}

/// Multiplicities as the conjecture sees them: zeros dropped, sorted
/// descending. `None` if any multiplicity is negative.
fn conjecture_mults(class: &DivisorClass) -> Option<Vec<&BigInt>> {
    if class.mults().iter().any(Signed::is_negative) {
        return None;
    }
    let mut ms: Vec<&BigInt> = class.mults().iter().filter(|m| !m.is_zero()).collect();
    ms.sort_unstable_by(|a, b| b.cmp(a));
    Some(ms)
}

/// `d > m_(1) + m_(2) + m_(3)` after dropping zero multiplicities.
/// Always false when some multiplicity is negative.
pub fn shgh_applicable(class: &DivisorClass) -> bool {
    match conjecture_mults(class) {
        Some(ms) => {
            let top3: BigInt = ms.into_iter().take(3).sum();
            *class.degree() > top3
        }
        None => false,
    }
}

pub fn shgh_dim(class: &DivisorClass) -> ConditionalDim {
    if class.degree().is_negative() {
        // H is nef, so a class of negative degree has no sections.
        return ConditionalDim {
            value: BigInt::from(-1),
            status: DimStatus::UnconditionalLowerBound,
            criterion_met: false,
        };
    }
    let edim = class.edim();
    if conjecture_mults(class).is_none() {
        return ConditionalDim {
            value: edim,
            status: DimStatus::Unknown,
            criterion_met: false,
        };
    }
    let met = shgh_applicable(class);
    ConditionalDim {
        value: edim,
        status: if met {
            DimStatus::ShghConditionalExact
        } else {
            DimStatus::UnconditionalLowerBound
        },
        criterion_met: met,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Effectivity {
    Effective,
    Empty,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EffectivityVerdict {
    pub verdict: Effectivity,
    /// `None` for `Unknown`.
    pub assumption: Option<AssumptionStatus>,
}

/// Effective when `edim >= 0` and `d >= 0` (Riemann–Roch with `h² = 0`),
/// empty when `d < 0`, and empty under SHGH when the criterion holds and
/// `edim = -1`.
pub fn conditional_effectivity(class: &DivisorClass) -> EffectivityVerdict {
    let verdict = |verdict, assumption| EffectivityVerdict {
        verdict,
        assumption: Some(assumption),
    };
    if class.degree().is_negative() {
        return verdict(Effectivity::Empty, AssumptionStatus::Unconditional);
    }
    let edim = class.edim();
    if !edim.is_negative() {
        return verdict(Effectivity::Effective, AssumptionStatus::Unconditional);
    }
    if shgh_applicable(class) {
        return verdict(Effectivity::Empty, AssumptionStatus::ShghConditional);
    }
    EffectivityVerdict {
        verdict: Effectivity::Unknown,
        assumption: None,
    }
}
