//! Two-outcome analysis: closed-form evaluators, break-even probability
//! search, and numeric verification of the ratio, reversal, and
//! reflection effects.
//!
//! The parameterized family under study is
//!
//! ```text
//! f̄ = (f₁, λp; unknown, 1 − λp)      ḡ = (g₁, p; 0, 1 − p)
//! ```
//!
//! with `λ ∈ (0, 1]`, `p ∈ (0, 1]`, and the fear mass `p_fu = 1 − λp`
//! co-varying with `p`. The closed forms below expand the four-row joint
//! matrix with `u(0) = 0`; they must agree with the generic engine to
//! 1e-12, which the tests enforce on seeded random setups.

use thiserror::Error;

use crate::choice::{AgentProfile, ChoiceError, Mode, Relation};
use crate::functions::FunctionError;
use crate::prospect::{Interpretation, Outcome, Prospect};

/// Grid size for the break-even pre-scan over `(0, 1]`.
pub const BREAK_EVEN_GRID: usize = 1024;
/// A break-even probability must bring |Ψ| at or below this residual.
pub const BREAK_EVEN_RESIDUAL: f64 = 1e-10;
/// Bisection iteration cap.
pub const BREAK_EVEN_MAX_ITERS: usize = 200;
/// Sample points per side when replaying a proposition around its root.
pub const PROP1_SAMPLES_PER_SIDE: usize = 32;
/// Number of halvings in the small-probability reversal scan.
pub const PROP2_MAX_HALVINGS: u32 = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Choice(#[from] ChoiceError),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error("invalid {what}: {value}")]
    InvalidParameter { what: &'static str, value: f64 },
    #[error("closed form requires the {expected} variant")]
    VariantMismatch { expected: &'static str },
    #[error("no sign change of psi on the probability grid")]
    NoRoot,
    #[error("bisection stalled at p={p} with residual {residual}")]
    ResidualNotMet { p: f64, residual: f64 },
    #[error("hypothesis unmet: {reason}")]
    HypothesisUnmet { reason: String },
    #[error("no preference reversal found within {halvings} halvings")]
    NoReversalFound { halvings: u32 },
    #[error("reflection check requires the bilinear profile (u:identity v:poly:1)")]
    BilinearRequired,
}

/// Which side of the two-outcome pair carries the unknown branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    FHasUnknown,
    GHasUnknown,
    BothZero,
}

/// Outcome of the ratio-effect side conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prop1Case {
    /// `f₁ > g₁ > 0` and `0 < v(p_fu)·u(f₁) < u(g₁)`.
    CaseI,
    /// `f₁ < g₁ < 0` and `u(g₁) < v(p_fu)·u(f₁) < 0`.
    CaseII,
    Neither,
}

impl std::fmt::Display for Prop1Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Prop1Case::CaseI => write!(f, "case-I"),
            Prop1Case::CaseII => write!(f, "case-II"),
            Prop1Case::Neither => write!(f, "neither"),
        }
    }
}

/// A parameterized two-outcome comparison.
///
/// Outcomes are money values (the profile's utility function applies).
#[derive(Debug, Clone)]
pub struct TwoOutcomeSetup {
    pub f1: f64,
    pub g1: f64,
    pub lambda: f64,
    pub p: f64,
    pub profile: AgentProfile,
    pub variant: Variant,
}

impl TwoOutcomeSetup {
    pub fn new(
        f1: f64,
        g1: f64,
        lambda: f64,
        p: f64,
        profile: AgentProfile,
        variant: Variant,
    ) -> Result<Self, AnalysisError> {
        if !f1.is_finite() {
            return Err(AnalysisError::InvalidParameter {
                what: "f1",
                value: f1,
            });
        }
        if !g1.is_finite() {
            return Err(AnalysisError::InvalidParameter {
                what: "g1",
                value: g1,
            });
        }
        if !lambda.is_finite() || lambda <= 0.0 || lambda > 1.0 {
            return Err(AnalysisError::InvalidParameter {
                what: "lambda",
                value: lambda,
            });
        }
        if !p.is_finite() || p <= 0.0 || p > 1.0 {
            return Err(AnalysisError::InvalidParameter { what: "p", value: p });
        }
        Ok(TwoOutcomeSetup {
            f1,
            g1,
            lambda,
            p,
            profile,
            variant,
        })
    }

    fn at(&self, p: f64) -> TwoOutcomeSetup {
        TwoOutcomeSetup {
            p,
            ..(*self).clone()
        }
    }

    /// The prospect pair at the setup's own `p`.
    pub fn prospects(&self) -> (Prospect, Prospect) {
        self.prospects_at(self.p)
    }

    fn prospects_at(&self, p: f64) -> (Prospect, Prospect) {
        let pf = self.lambda * p;
        let f_tail = if self.variant == Variant::FHasUnknown {
            Outcome::Unknown
        } else {
            Outcome::Known(0.0)
        };
        let g_tail = if self.variant == Variant::GHasUnknown {
            Outcome::Unknown
        } else {
            Outcome::Known(0.0)
        };
        let f = Prospect::new(
            vec![(Outcome::Known(self.f1), pf), (f_tail, 1.0 - pf)],
            Interpretation::Money,
        )
        .expect("two-outcome prospect is valid by construction");
        let g = Prospect::new(
            vec![(Outcome::Known(self.g1), p), (g_tail, 1.0 - p)],
            Interpretation::Money,
        )
        .expect("two-outcome prospect is valid by construction");
        (f, g)
    }

    /// Ψ at probability `p` through the generic matrix engine.
    pub fn psi_engine_at(&self, p: f64, mode: Mode) -> Result<f64, AnalysisError> {
        let setup = match mode {
            Mode::Classical => {
                let mut s = self.at(p);
                s.variant = Variant::BothZero;
                s
            }
            Mode::Modified => self.at(p),
        };
        let (f, g) = setup.prospects();
        Ok(setup.profile.psi_modified(&f, &g)?)
    }

    /// Ψ at the setup's own `p` through the engine.
    pub fn psi_engine(&self) -> Result<f64, AnalysisError> {
        self.psi_engine_at(self.p, Mode::Modified)
    }

    /// Closed-form Ψ for the unknown-bearing pair,
    /// `p·{λQ(v·u(f₁)) − Q(u(g₁)) + λp·[Q(v·u(f₁) − u(g₁)) − Q(v·u(f₁)) + Q(u(g₁))]}`
    /// with `v = v(1 − λp)`.
    ///
    /// Requires the `FHasUnknown` variant and a utility with `u(0) = 0`
    /// for equality with the engine.
    pub fn psi_closed_modified(&self) -> Result<f64, AnalysisError> {
        if self.variant != Variant::FHasUnknown {
            return Err(AnalysisError::VariantMismatch {
                expected: "f-has-unknown",
            });
        }
        self.closed_modified_at(self.p)
    }

    fn closed_modified_at(&self, p: f64) -> Result<f64, AnalysisError> {
        let p_fu = 1.0 - self.lambda * p;
        let v = self.profile.fear.eval(p_fu)?;
        let a = v * self.profile.utility.eval(self.f1)?;
        let b = self.profile.utility.eval(self.g1)?;
        self.bracketed(p, a, b)
    }

    /// Closed-form classical Φ,
    /// `p·{λQ(u(f₁)) − Q(u(g₁)) + λp·[Q(u(f₁) − u(g₁)) − Q(u(f₁)) + Q(u(g₁))]}`.
    ///
    /// Requires the `BothZero` variant.
    pub fn psi_closed_classical(&self) -> Result<f64, AnalysisError> {
        if self.variant != Variant::BothZero {
            return Err(AnalysisError::VariantMismatch {
                expected: "both-zero",
            });
        }
        self.closed_classical_at(self.p)
    }

    fn closed_classical_at(&self, p: f64) -> Result<f64, AnalysisError> {
        let a = self.profile.utility.eval(self.f1)?;
        let b = self.profile.utility.eval(self.g1)?;
        self.bracketed(p, a, b)
    }

    fn bracketed(&self, p: f64, a: f64, b: f64) -> Result<f64, AnalysisError> {
        let q = &self.profile.regret;
        let qa = q.eval(a)?;
        let qb = q.eval(b)?;
        let qab = q.eval(a - b)?;
        Ok(p * (self.lambda * qa - qb + self.lambda * p * (qab - qa + qb)))
    }

    /// Evaluate the ratio-effect side conditions at the setup's `p`
    /// (with `p_fu = 1 − λp`).
    pub fn check_prop1_conditions(&self) -> Result<Prop1Case, AnalysisError> {
        let p_fu = 1.0 - self.lambda * self.p;
        let v = self.profile.fear.eval(p_fu)?;
        let uf = self.profile.utility.eval(self.f1)?;
        let ug = self.profile.utility.eval(self.g1)?;
        let feared = v * uf;
        if self.f1 > self.g1 && self.g1 > 0.0 && 0.0 < feared && feared < ug {
            Ok(Prop1Case::CaseI)
        } else if self.f1 < self.g1 && self.g1 < 0.0 && ug < feared && feared < 0.0 {
            Ok(Prop1Case::CaseII)
        } else {
            Ok(Prop1Case::Neither)
        }
    }

    /// Scan `p` over `(0, 1]` for a sign change of Ψ(p) and bisect to the
    /// break-even probability.
    ///
    /// With several sign changes the smallest root is returned and the
    /// change count reported in [`BreakEven::sign_changes`].
    pub fn find_break_even(&self, mode: Mode) -> Result<BreakEven, AnalysisError> {
        let n = BREAK_EVEN_GRID;
        let mut sign_changes = 0usize;
        let mut bracket: Option<(f64, f64, f64, f64)> = None;
        let mut prev: Option<(f64, f64)> = None;
        for i in 1..=n {
            let p = i as f64 / n as f64;
            let psi = self.psi_engine_at(p, mode)?;
            if let Some((pp, pv)) = prev {
                if pv == 0.0 || pv.signum() != psi.signum() {
                    sign_changes += 1;
                    if bracket.is_none() {
                        bracket = Some((pp, p, pv, psi));
                    }
                }
            }
            prev = Some((p, psi));
        }
        let (mut lo, mut hi, mut flo, _) = bracket.ok_or(AnalysisError::NoRoot)?;
        if flo == 0.0 {
            return Ok(BreakEven {
                p_bar: lo,
                residual: 0.0,
                bracket: (lo, hi),
                sign_changes,
            });
        }
        let bracket_out = (lo, hi);
        let mut best = (lo, flo);
        for _ in 0..BREAK_EVEN_MAX_ITERS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fmid = self.psi_engine_at(mid, mode)?;
            best = (mid, fmid);
            if fmid.abs() <= BREAK_EVEN_RESIDUAL {
                break;
            }
            if fmid.signum() == flo.signum() {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        let (p_bar, residual) = best;
        if residual.abs() > BREAK_EVEN_RESIDUAL {
            return Err(AnalysisError::ResidualNotMet { p: p_bar, residual });
        }
        Ok(BreakEven {
            p_bar,
            residual,
            bracket: bracket_out,
            sign_changes,
        })
    }

    /// Replay the ratio effect around the break-even probability.
    ///
    /// Samples `p` on both sides of `p̄`, keeps the points where the side
    /// conditions still hold (the fear factor moves with `p`, so they can
    /// exit the condition region), and asserts the predicted strict
    /// preference at each kept point.
    pub fn verify_prop1(&self) -> Result<Prop1Report, AnalysisError> {
        let break_even = self
            .find_break_even(Mode::Modified)
            .map_err(|e| match e {
                AnalysisError::NoRoot => AnalysisError::HypothesisUnmet {
                    reason: "no break-even probability exists for this setup".into(),
                },
                other => other,
            })?;
        let p_bar = break_even.p_bar;
        let side = PROP1_SAMPLES_PER_SIDE;
        let mut checked_below = 0usize;
        let mut checked_above = 0usize;
        let mut skipped = 0usize;
        let mut violations = Vec::new();
        let mut case_seen = None;
        let steps = (side + 1) as f64;
        let sample_points: Vec<(f64, bool)> = (1..=side)
            .map(|i| (p_bar * i as f64 / steps, false))
            .chain((1..=side).map(|i| (p_bar + (1.0 - p_bar) * i as f64 / steps, true)))
            .collect();
        for (p, above) in sample_points {
            if p <= 0.0 || p > 1.0 {
                skipped += 1;
                continue;
            }
            let at_p = self.at(p);
            let case = at_p.check_prop1_conditions()?;
            let expect_positive = match case {
                Prop1Case::CaseI => above,
                Prop1Case::CaseII => !above,
                Prop1Case::Neither => {
                    skipped += 1;
                    continue;
                }
            };
            case_seen.get_or_insert(case);
            if above {
                checked_above += 1;
            } else {
                checked_below += 1;
            }
            let psi = self.psi_engine_at(p, Mode::Modified)?;
            let ok = if expect_positive { psi > 0.0 } else { psi < 0.0 };
            if !ok {
                violations.push(Prop1Violation {
                    p,
                    psi,
                    expect_positive,
                });
            }
        }
        let case = case_seen.ok_or_else(|| AnalysisError::HypothesisUnmet {
            reason: "side conditions fail at every sampled probability".into(),
        })?;
        Ok(Prop1Report {
            break_even,
            case,
            checked_below,
            checked_above,
            skipped,
            violations,
        })
    }

    /// Scan the geometric sequence `p·2^{-k}` for the first probability at
    /// which the fear-aware verdict flips against the classical one.
    ///
    /// The baseline classical relation must hold at the given `p`
    /// (`Φ > 0` for `f₁ > g₁ > 0`, `Φ < 0` for `f₁ < g₁ < 0`).
    pub fn verify_prop2(&self) -> Result<Prop2Report, AnalysisError> {
        let positive_case = if self.f1 > self.g1 && self.g1 > 0.0 {
            true
        } else if self.f1 < self.g1 && self.g1 < 0.0 {
            false
        } else {
            return Err(AnalysisError::HypothesisUnmet {
                reason: format!(
                    "outcomes f1={}, g1={} fit neither sign pattern",
                    self.f1, self.g1
                ),
            });
        };
        let baseline = self.psi_engine_at(self.p, Mode::Classical)?;
        let baseline_ok = if positive_case {
            baseline > 0.0
        } else {
            baseline < 0.0
        };
        if !baseline_ok {
            return Err(AnalysisError::HypothesisUnmet {
                reason: format!("classical baseline has psi={baseline} at p={}", self.p),
            });
        }
        for k in 0..=PROP2_MAX_HALVINGS {
            let p_k = self.p * 0.5f64.powi(k as i32);
            let classical = self.psi_engine_at(p_k, Mode::Classical)?;
            let modified = self.psi_engine_at(p_k, Mode::Modified)?;
            let flipped = if positive_case {
                classical > 0.0 && modified < 0.0
            } else {
                classical < 0.0 && modified > 0.0
            };
            if flipped {
                let case_at_flip = self.at(p_k).check_prop1_conditions()?;
                let expected = if positive_case {
                    Prop1Case::CaseI
                } else {
                    Prop1Case::CaseII
                };
                return Ok(Prop2Report {
                    case: expected,
                    baseline_p: self.p,
                    flip_step: k,
                    flip_p: p_k,
                    classical_psi: classical,
                    modified_psi: modified,
                    conditions_hold_at_flip: case_at_flip == expected,
                });
            }
        }
        Err(AnalysisError::NoReversalFound {
            halvings: PROP2_MAX_HALVINGS,
        })
    }
}

/// A located break-even probability.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakEven {
    pub p_bar: f64,
    /// Ψ at `p_bar`; within [`BREAK_EVEN_RESIDUAL`] by construction.
    pub residual: f64,
    /// Grid bracket the root was refined from; Ψ changes sign across it.
    pub bracket: (f64, f64),
    /// Number of sign changes seen on the pre-scan grid.
    pub sign_changes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop1Violation {
    pub p: f64,
    pub psi: f64,
    pub expect_positive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop1Report {
    pub break_even: BreakEven,
    pub case: Prop1Case,
    pub checked_below: usize,
    pub checked_above: usize,
    pub skipped: usize,
    pub violations: Vec<Prop1Violation>,
}

impl Prop1Report {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop2Report {
    pub case: Prop1Case,
    pub baseline_p: f64,
    pub flip_step: u32,
    pub flip_p: f64,
    pub classical_psi: f64,
    pub modified_psi: f64,
    pub conditions_hold_at_flip: bool,
}

/// Verdicts for a pair and its outcome-negated mirror.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionReport {
    pub psi: f64,
    pub relation: Relation,
    pub negated_psi: f64,
    pub negated_relation: Relation,
}

impl ReflectionReport {
    /// True when negating every outcome reversed the relation
    /// (indifference maps to indifference).
    pub fn holds(&self) -> bool {
        self.negated_relation == self.relation.flipped()
    }
}

/// Check the reflection effect for
/// `f̄ = (f₁, p_f; ?, 1 − p_f)` vs `ḡ = (g₁, p_g; 0, 1 − p_g)`
/// and the negated pair, under the bilinear adjusted utility
/// `ū(x, p_u) = (1 − p_u)·x`.
///
/// Requires `f₁ > 0`, `g₁ > 0`, and a profile with identity utility and
/// linear fear; raw outcomes are read as utilities.
pub fn verify_reflection(
    f1: f64,
    g1: f64,
    p_f: f64,
    p_g: f64,
    profile: &AgentProfile,
) -> Result<ReflectionReport, AnalysisError> {
    if !f1.is_finite() || f1 <= 0.0 {
        return Err(AnalysisError::InvalidParameter {
            what: "f1",
            value: f1,
        });
    }
    if !g1.is_finite() || g1 <= 0.0 {
        return Err(AnalysisError::InvalidParameter {
            what: "g1",
            value: g1,
        });
    }
    for (what, value) in [("p_f", p_f), ("p_g", p_g)] {
        if !value.is_finite() || !(0.0..=1.0).contains(&value) {
            return Err(AnalysisError::InvalidParameter { what, value });
        }
    }
    if profile.utility != crate::functions::UtilityFn::Identity
        || profile.fear != crate::functions::FearFn::linear()
    {
        return Err(AnalysisError::BilinearRequired);
    }
    let pair = |f1: f64, g1: f64| -> (Prospect, Prospect) {
        let f = Prospect::new(
            vec![(Outcome::Known(f1), p_f), (Outcome::Unknown, 1.0 - p_f)],
            Interpretation::Utility,
        )
        .expect("reflection prospect is valid by construction");
        let g = Prospect::new(
            vec![(Outcome::Known(g1), p_g), (Outcome::Known(0.0), 1.0 - p_g)],
            Interpretation::Utility,
        )
        .expect("reflection prospect is valid by construction");
        (f, g)
    };
    let (f, g) = pair(f1, g1);
    let (fp, gp) = pair(-f1, -g1);
    let verdict = profile.compare(&f, &g, Mode::Modified)?;
    let negated = profile.compare(&fp, &gp, Mode::Modified)?;
    Ok(ReflectionReport {
        psi: verdict.psi,
        relation: verdict.relation,
        negated_psi: negated.psi,
        negated_relation: negated.relation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{FearFn, RegretQ, UtilityFn};

    fn scaled_profile(scale: f64, fear: FearFn) -> AgentProfile {
        AgentProfile::new(
            UtilityFn::affine(scale, 0.0).unwrap(),
            fear,
            RegretQ::power_odd(3).unwrap(),
        )
    }

    fn rooted_setup() -> TwoOutcomeSetup {
        // Weak fear and lambda near 1: the feared utility climbs above
        // u(g1) as p grows, so psi crosses zero inside (0, 1].
        TwoOutcomeSetup::new(
            4000.0,
            3000.0,
            0.99,
            1.0,
            scaled_profile(1.0 / 4000.0, FearFn::poly(2.0).unwrap()),
            Variant::FHasUnknown,
        )
        .unwrap()
    }

    // ── closed forms vs engine ──────────────────────────────────────

    #[test]
    fn closed_modified_matches_engine() {
        let s = rooted_setup();
        let closed = s.psi_closed_modified().unwrap();
        let engine = s.psi_engine().unwrap();
        assert!((closed - engine).abs() <= 1e-12, "{closed} vs {engine}");
    }

    #[test]
    fn closed_classical_matches_engine() {
        let s = TwoOutcomeSetup::new(
            4000.0,
            3000.0,
            0.8,
            0.7,
            scaled_profile(1.0 / 4000.0, FearFn::linear()),
            Variant::BothZero,
        )
        .unwrap();
        let closed = s.psi_closed_classical().unwrap();
        let engine = s.psi_engine().unwrap();
        assert!((closed - engine).abs() <= 1e-12, "{closed} vs {engine}");
    }

    #[test]
    fn closed_forms_enforce_variant() {
        let mut s = rooted_setup();
        assert!(s.psi_closed_classical().is_err());
        s.variant = Variant::BothZero;
        assert!(s.psi_closed_modified().is_err());
    }

    #[test]
    fn small_p_limit_has_sign_of_minus_q_ug() {
        let s = rooted_setup();
        let tiny = s.at(1e-9);
        let psi = tiny.psi_closed_modified().unwrap();
        // -p·Q(u(g1)) with u(g1) > 0: negative.
        assert!(psi < 0.0);
        let approx = -1e-9
            * s.profile
                .regret
                .eval(s.profile.utility.eval(s.g1).unwrap())
                .unwrap();
        assert!((psi - approx).abs() < 1e-9 * 1e-3);
    }

    #[test]
    fn lambda_p_one_degenerates_to_classical() {
        // At lambda = p = 1 the unknown branch has probability zero and
        // p_fu = 0, so the modified closed form is the classical one.
        let profile = scaled_profile(1.0 / 4000.0, FearFn::linear());
        let s = TwoOutcomeSetup::new(
            4000.0,
            3000.0,
            1.0,
            1.0,
            profile.clone(),
            Variant::FHasUnknown,
        )
        .unwrap();
        let classical = TwoOutcomeSetup::new(
            4000.0,
            3000.0,
            1.0,
            1.0,
            profile,
            Variant::BothZero,
        )
        .unwrap();
        let a = s.psi_closed_modified().unwrap();
        let b = classical.psi_closed_classical().unwrap();
        assert!((a - b).abs() <= 1e-15);
    }

    // ── side conditions ─────────────────────────────────────────────

    #[test]
    fn mild_fear_leaves_conditions_unmet() {
        // v(0.2) = 0.8 under linear fear: 0.8·4000 = 3200 > 3000.
        let s = TwoOutcomeSetup::new(
            4000.0,
            3000.0,
            0.8,
            1.0,
            AgentProfile::default(),
            Variant::FHasUnknown,
        )
        .unwrap();
        assert_eq!(s.check_prop1_conditions().unwrap(), Prop1Case::Neither);
    }

    #[test]
    fn strong_fear_meets_case_one() {
        // v(0.2) = 1 - sqrt(0.2) ~ 0.5528 under poly(0.5): 2211 < 3000.
        let profile = AgentProfile::new(
            UtilityFn::identity(),
            FearFn::poly(0.5).unwrap(),
            RegretQ::power_odd(3).unwrap(),
        );
        let s =
            TwoOutcomeSetup::new(4000.0, 3000.0, 0.8, 1.0, profile, Variant::FHasUnknown).unwrap();
        assert_eq!(s.check_prop1_conditions().unwrap(), Prop1Case::CaseI);
    }

    #[test]
    fn mirrored_losses_meet_case_two() {
        let profile = AgentProfile::new(
            UtilityFn::identity(),
            FearFn::poly(0.5).unwrap(),
            RegretQ::power_odd(3).unwrap(),
        );
        let s = TwoOutcomeSetup::new(-4000.0, -3000.0, 0.8, 1.0, profile, Variant::FHasUnknown)
            .unwrap();
        assert_eq!(s.check_prop1_conditions().unwrap(), Prop1Case::CaseII);
    }

    // ── break-even search ───────────────────────────────────────────

    #[test]
    fn break_even_exists_for_weak_fear() {
        let s = rooted_setup();
        let be = s.find_break_even(Mode::Modified).unwrap();
        assert!(be.residual.abs() <= BREAK_EVEN_RESIDUAL);
        assert!(be.p_bar > 0.0 && be.p_bar <= 1.0);
        // Postcondition replay: the bracket straddles the sign change.
        let lo = s.psi_engine_at(be.bracket.0, Mode::Modified).unwrap();
        let hi = s.psi_engine_at(be.bracket.1, Mode::Modified).unwrap();
        assert!(lo.signum() != hi.signum());
    }

    #[test]
    fn one_signed_psi_has_no_root() {
        // Strong fear keeps psi negative on the whole grid.
        let s = TwoOutcomeSetup::new(
            4000.0,
            3000.0,
            0.8,
            1.0,
            scaled_profile(1.0 / 4000.0, FearFn::poly(0.5).unwrap()),
            Variant::FHasUnknown,
        )
        .unwrap();
        assert_eq!(
            s.find_break_even(Mode::Modified).unwrap_err(),
            AnalysisError::NoRoot
        );
    }

    #[test]
    fn positive_everywhere_has_no_root() {
        // f over a negative-payoff g: psi > 0 on the whole grid.
        let s = TwoOutcomeSetup::new(
            4000.0,
            -2000.0,
            0.99,
            1.0,
            scaled_profile(1.0 / 4000.0, FearFn::poly(2.0).unwrap()),
            Variant::FHasUnknown,
        )
        .unwrap();
        assert_eq!(
            s.find_break_even(Mode::Modified).unwrap_err(),
            AnalysisError::NoRoot
        );
    }

    // ── proposition replays ─────────────────────────────────────────

    #[test]
    fn ratio_effect_replay_is_consistent() {
        let report = rooted_setup().verify_prop1().unwrap();
        assert_eq!(report.case, Prop1Case::CaseI);
        assert!(report.checked_below > 0);
        assert!(report.consistent(), "violations: {:?}", report.violations);
    }

    #[test]
    fn mirrored_ratio_effect_replay() {
        let s = TwoOutcomeSetup::new(
            -4000.0,
            -3000.0,
            0.99,
            1.0,
            scaled_profile(1.0 / 4000.0, FearFn::poly(2.0).unwrap()),
            Variant::FHasUnknown,
        )
        .unwrap();
        let report = s.verify_prop1().unwrap();
        assert_eq!(report.case, Prop1Case::CaseII);
        assert!(report.consistent());
    }

    #[test]
    fn no_root_setup_is_hypothesis_unmet() {
        let s = TwoOutcomeSetup::new(
            4000.0,
            3000.0,
            0.8,
            1.0,
            scaled_profile(1.0 / 4000.0, FearFn::poly(0.5).unwrap()),
            Variant::FHasUnknown,
        )
        .unwrap();
        assert!(matches!(
            s.verify_prop1().unwrap_err(),
            AnalysisError::HypothesisUnmet { .. }
        ));
    }

    #[test]
    fn reversal_found_for_gain_pair() {
        // f = (2500, 0.33; ...) vs g = (2400, 0.34; ...): lambda = 33/34.
        let s = TwoOutcomeSetup::new(
            2500.0,
            2400.0,
            33.0 / 34.0,
            0.34,
            scaled_profile(1.0 / 2500.0, FearFn::linear()),
            Variant::FHasUnknown,
        )
        .unwrap();
        let report = s.verify_prop2().unwrap();
        assert!(report.flip_p <= 0.34);
        assert_eq!(report.case, Prop1Case::CaseI);
        assert!(report.conditions_hold_at_flip);
        assert!(report.classical_psi > 0.0 && report.modified_psi < 0.0);
    }

    #[test]
    fn reversal_found_for_mirrored_loss_pair() {
        let s = TwoOutcomeSetup::new(
            -2500.0,
            -2400.0,
            33.0 / 34.0,
            0.34,
            scaled_profile(1.0 / 2500.0, FearFn::linear()),
            Variant::FHasUnknown,
        )
        .unwrap();
        let report = s.verify_prop2().unwrap();
        assert_eq!(report.case, Prop1Case::CaseII);
        assert!(report.classical_psi < 0.0 && report.modified_psi > 0.0);
    }

    #[test]
    fn no_reversal_without_unknowns() {
        // Replacing the unknown branch by a zero payoff removes the fear
        // channel entirely, so the scan can never find a flip.
        let s = TwoOutcomeSetup::new(
            2500.0,
            2400.0,
            33.0 / 34.0,
            0.34,
            scaled_profile(1.0 / 2500.0, FearFn::linear()),
            Variant::BothZero,
        )
        .unwrap();
        assert!(matches!(
            s.verify_prop2().unwrap_err(),
            AnalysisError::NoReversalFound { .. }
        ));
    }

    // ── reflection ──────────────────────────────────────────────────

    #[test]
    fn reflection_on_the_survey_pair() {
        let report =
            verify_reflection(4000.0, 3000.0, 0.8, 1.0, &AgentProfile::default()).unwrap();
        assert_eq!(report.relation, Relation::GStrict);
        assert_eq!(report.negated_relation, Relation::FStrict);
        assert!(report.holds());
    }

    #[test]
    fn reflection_of_identical_pair_is_indifferent() {
        // At p_f = p_g = 1 both prospects are the same certainty.
        let report = verify_reflection(1.0, 1.0, 1.0, 1.0, &AgentProfile::default()).unwrap();
        assert_eq!(report.relation, Relation::Indifferent);
        assert_eq!(report.negated_relation, Relation::Indifferent);
        assert!(report.holds());
    }

    #[test]
    fn reflection_requires_bilinear_profile() {
        let profile = AgentProfile::new(
            UtilityFn::power(0.5).unwrap(),
            FearFn::linear(),
            RegretQ::power_odd(3).unwrap(),
        );
        assert_eq!(
            verify_reflection(1.0, 2.0, 0.5, 0.5, &profile).unwrap_err(),
            AnalysisError::BilinearRequired
        );
    }
}
