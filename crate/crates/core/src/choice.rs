//! The choice engine: fear-adjusted utilities, the preference functional
//! Ψ, and verdict classification.
//!
//! For prospects `f` and `g` with unknown masses `p_fu` and `p_gu`, each
//! known outcome is first depressed by the owner's fear factor,
//!
//! ```text
//! ū(f_i) = v(p_fu)·u(f_i),    ū(g_i) = v(p_gu)·u(g_i),    ū(?) = 0,
//! ```
//!
//! and the verdict is decided by the sign of
//!
//! ```text
//! Ψ = Σ_i  p_i · Q(ū(f_i) − ū(g_i))
//! ```
//!
//! over the joint decision matrix. With no unknowns on either side the
//! fear factor is exactly 1 and Ψ reduces to the classical rule — the
//! classical path is literally the same code.

use std::fmt;

use thiserror::Error;

use crate::functions::{FearFn, FunctionError, RegretQ, UtilityFn};
use crate::prospect::{DecisionMatrix, Interpretation, Outcome, Prospect, ProspectError};
use crate::sum::CompensatedSum;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChoiceError {
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Prospect(#[from] ProspectError),
    #[error("classical mode requires prospects without unknown outcomes")]
    UnknownOutcomePresent,
    #[error("tie tolerance must be a positive finite number, got {value}")]
    InvalidTieTolerance { value: f64 },
}

/// The agent: utility `u`, fear `v`, regret `Q`, and a tie tolerance for
/// verdict classification.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentProfile {
    pub utility: UtilityFn,
    pub fear: FearFn,
    pub regret: RegretQ,
    pub tie_eps: f64,
}

/// Verdicts at |Ψ| ≤ tie_eps are classified as indifference.
pub const DEFAULT_TIE_EPS: f64 = 1e-12;

impl Default for AgentProfile {
    /// The worked-example configuration: identity utility, linear fear,
    /// cubic regret.
    fn default() -> Self {
        AgentProfile {
            utility: UtilityFn::identity(),
            fear: FearFn::linear(),
            regret: RegretQ::PowerOdd { exponent: 3 },
            tie_eps: DEFAULT_TIE_EPS,
        }
    }
}

impl AgentProfile {
    pub fn new(utility: UtilityFn, fear: FearFn, regret: RegretQ) -> Self {
        AgentProfile {
            utility,
            fear,
            regret,
            tie_eps: DEFAULT_TIE_EPS,
        }
    }

    pub fn with_tie_eps(mut self, tie_eps: f64) -> Result<Self, ChoiceError> {
        if !tie_eps.is_finite() || tie_eps <= 0.0 {
            return Err(ChoiceError::InvalidTieTolerance { value: tie_eps });
        }
        self.tie_eps = tie_eps;
        Ok(self)
    }

    /// Parse a space-separated profile spec such as
    /// `"u:power:0.5 v:poly:2 q:power:3"`.
    ///
    /// Omitted components default to `u:identity v:poly:1 q:power:3`.
    /// An `r:...` token derives `Q` from the given rejoice/regret term
    /// and conflicts with an explicit `q:...` token.
    pub fn from_spec(spec: &str) -> Result<Self, ChoiceError> {
        let mut profile = AgentProfile::default();
        let mut saw_q = false;
        let mut saw_r = false;
        for token in spec.split_whitespace() {
            match token.split(':').next() {
                Some("u") => profile.utility = token.parse()?,
                Some("v") => profile.fear = token.parse()?,
                Some("q") => {
                    if saw_r {
                        return Err(FunctionError::InvalidParameter {
                            family: "profile",
                            reason: "q:... conflicts with r:...".into(),
                        }
                        .into());
                    }
                    profile.regret = token.parse()?;
                    saw_q = true;
                }
                Some("r") => {
                    if saw_q {
                        return Err(FunctionError::InvalidParameter {
                            family: "profile",
                            reason: "r:... conflicts with q:...".into(),
                        }
                        .into());
                    }
                    profile.regret = RegretQ::from_r(token.parse()?);
                    saw_r = true;
                }
                _ => {
                    return Err(FunctionError::UnknownSpec {
                        spec: token.to_string(),
                    }
                    .into())
                }
            }
        }
        Ok(profile)
    }

    /// Fear-adjusted utility of a single outcome.
    ///
    /// Unknown outcomes carry utility zero regardless of the fear factor;
    /// known outcomes are scaled by `v(p_u)` of the owning prospect.
    pub fn adjusted_utility(
        &self,
        outcome: Outcome,
        owner_unknown_mass: f64,
        interpretation: Interpretation,
    ) -> Result<f64, ChoiceError> {
        match outcome {
            Outcome::Unknown => Ok(0.0),
            Outcome::Known(_) => {
                let v = self.fear.eval(owner_unknown_mass)?;
                self.adjusted_known(outcome, v, interpretation)
            }
        }
    }

    fn adjusted_known(
        &self,
        outcome: Outcome,
        fear_factor: f64,
        interpretation: Interpretation,
    ) -> Result<f64, ChoiceError> {
        Ok(match outcome {
            Outcome::Unknown => 0.0,
            Outcome::Known(x) => match interpretation {
                Interpretation::Money => fear_factor * self.utility.eval(x)?,
                Interpretation::Utility => {
                    if !x.is_finite() {
                        return Err(FunctionError::NonFiniteInput { input: x }.into());
                    }
                    fear_factor * x
                }
            },
        })
    }

    /// Ψ over an explicit joint state table, with the two sides' unknown
    /// masses and interpretations given by the caller.
    ///
    /// Rows are accumulated in order with compensated summation.
    pub fn psi_over(
        &self,
        matrix: &DecisionMatrix,
        p_fu: f64,
        p_gu: f64,
        interp_f: Interpretation,
        interp_g: Interpretation,
    ) -> Result<f64, ChoiceError> {
        let v_f = self.fear.eval(p_fu)?;
        let v_g = self.fear.eval(p_gu)?;
        let mut acc = CompensatedSum::new();
        for row in matrix.rows() {
            let uf = self.adjusted_known(row.outcome_f, v_f, interp_f)?;
            let ug = self.adjusted_known(row.outcome_g, v_g, interp_g)?;
            acc.add(row.prob * self.regret.eval(uf - ug)?);
        }
        Ok(acc.value())
    }

    /// Ψ for two independent prospects under the modified (fear-aware) rule.
    pub fn psi_modified(&self, f: &Prospect, g: &Prospect) -> Result<f64, ChoiceError> {
        let matrix = DecisionMatrix::joint(f, g);
        self.psi_over(
            &matrix,
            f.unknown_mass().value(),
            g.unknown_mass().value(),
            f.interpretation(),
            g.interpretation(),
        )
    }

    /// Classical Ψ: both prospects must be free of unknown outcomes.
    ///
    /// This is the p_u = 0 path of [`AgentProfile::psi_modified`], not a
    /// separate implementation, so degeneration is exact.
    pub fn psi_classical(&self, f: &Prospect, g: &Prospect) -> Result<f64, ChoiceError> {
        if f.has_unknown() || g.has_unknown() {
            return Err(ChoiceError::UnknownOutcomePresent);
        }
        self.psi_modified(f, g)
    }

    /// Classify Ψ into a verdict under the profile's tie tolerance.
    pub fn classify(&self, psi: f64) -> PreferenceVerdict {
        let relation = if psi > self.tie_eps {
            Relation::FStrict
        } else if psi < -self.tie_eps {
            Relation::GStrict
        } else {
            Relation::Indifferent
        };
        PreferenceVerdict { psi, relation }
    }

    /// Compare two prospects in the requested mode.
    pub fn compare(
        &self,
        f: &Prospect,
        g: &Prospect,
        mode: Mode,
    ) -> Result<PreferenceVerdict, ChoiceError> {
        let psi = match mode {
            Mode::Classical => self.psi_classical(f, g)?,
            Mode::Modified => self.psi_modified(f, g)?,
        };
        Ok(self.classify(psi))
    }
}

impl fmt::Display for AgentProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.utility, self.fear, self.regret)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Classical,
    Modified,
}

/// Strict preference for `f`, strict preference for `g`, or indifference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    FStrict,
    GStrict,
    Indifferent,
}

impl Relation {
    /// The relation seen from the swapped pair `(g, f)`.
    pub fn flipped(self) -> Relation {
        match self {
            Relation::FStrict => Relation::GStrict,
            Relation::GStrict => Relation::FStrict,
            Relation::Indifferent => Relation::Indifferent,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::FStrict => write!(f, "f>g"),
            Relation::GStrict => write!(f, "f<g"),
            Relation::Indifferent => write!(f, "f~g"),
        }
    }
}

/// The Ψ value together with its classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreferenceVerdict {
    pub psi: f64,
    pub relation: Relation,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn utility_prospect(branches: Vec<(Outcome, f64)>) -> Prospect {
        Prospect::new(branches, Interpretation::Utility).unwrap()
    }

    fn surgery() -> Prospect {
        utility_prospect(vec![(Outcome::Known(0.5), 0.6), (Outcome::Known(0.27), 0.4)])
    }

    fn radiotherapy() -> Prospect {
        utility_prospect(vec![(Outcome::Known(0.7), 0.3), (Outcome::Known(0.28), 0.7)])
    }

    // ── adjusted utility ────────────────────────────────────────────

    #[test]
    fn unknown_has_zero_utility_at_any_mass() {
        let profile = AgentProfile::default();
        for p_u in [0.0, 0.3, 1.0] {
            assert_eq!(
                profile
                    .adjusted_utility(Outcome::Unknown, p_u, Interpretation::Utility)
                    .unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn known_is_scaled_by_fear_factor() {
        let profile = AgentProfile::default();
        let got = profile
            .adjusted_utility(Outcome::Known(0.5), 0.1, Interpretation::Utility)
            .unwrap();
        assert!((got - 0.45).abs() < 1e-15);
    }

    #[test]
    fn zero_mass_degenerates_to_plain_utility() {
        let profile = AgentProfile::default();
        let got = profile
            .adjusted_utility(Outcome::Known(0.7), 0.0, Interpretation::Utility)
            .unwrap();
        assert_eq!(got, 0.7);
    }

    #[test]
    fn money_interpretation_routes_through_utility() {
        let profile = AgentProfile {
            utility: UtilityFn::power(0.5).unwrap(),
            ..AgentProfile::default()
        };
        let got = profile
            .adjusted_utility(Outcome::Known(4.0), 0.0, Interpretation::Money)
            .unwrap();
        assert!((got - 2.0).abs() < 1e-15);
    }

    // ── Ψ values from the treatment-choice example ──────────────────

    #[test]
    fn classical_treatment_choice() {
        let profile = AgentProfile::default();
        let psi = profile.psi_classical(&surgery(), &radiotherapy()).unwrap();
        assert!((psi + 0.0065).abs() < 5e-5, "psi = {psi}");
        assert!(psi < 0.0);
    }

    #[test]
    fn unknown_surgical_risk_enhances_radiotherapy() {
        let profile = AgentProfile::default();
        let f = utility_prospect(vec![
            (Outcome::Known(0.5), 0.55),
            (Outcome::Known(0.27), 0.35),
            (Outcome::Unknown, 0.1),
        ]);
        let psi = profile.psi_modified(&f, &radiotherapy()).unwrap();
        assert!((psi + 0.0225).abs() < 1e-4, "psi = {psi}");
    }

    #[test]
    fn unknown_radiotherapy_risk_reverses_the_preference() {
        let profile = AgentProfile::default();
        let g = utility_prospect(vec![
            (Outcome::Known(0.7), 0.25),
            (Outcome::Known(0.28), 0.65),
            (Outcome::Unknown, 0.1),
        ]);
        let psi = profile.psi_modified(&surgery(), &g).unwrap();
        assert!((psi - 0.0092).abs() < 1e-4, "psi = {psi}");
        assert_eq!(profile.classify(psi).relation, Relation::FStrict);
    }

    #[test]
    fn unknowns_on_both_sides() {
        let profile = AgentProfile::default();
        let f = utility_prospect(vec![
            (Outcome::Known(0.5), 0.55),
            (Outcome::Known(0.27), 0.35),
            (Outcome::Unknown, 0.1),
        ]);
        let g = utility_prospect(vec![
            (Outcome::Known(0.7), 0.25),
            (Outcome::Known(0.28), 0.65),
            (Outcome::Unknown, 0.1),
        ]);
        let psi = profile.psi_modified(&f, &g).unwrap();
        assert!((psi + 0.0049).abs() < 1e-4, "psi = {psi}");
    }

    // ── modes and degeneration ──────────────────────────────────────

    #[test]
    fn classical_rejects_unknowns() {
        let profile = AgentProfile::default();
        let f = utility_prospect(vec![(Outcome::Known(0.5), 0.5), (Outcome::Unknown, 0.5)]);
        assert_eq!(
            profile.psi_classical(&f, &radiotherapy()).unwrap_err(),
            ChoiceError::UnknownOutcomePresent
        );
    }

    #[test]
    fn modified_equals_classical_without_unknowns() {
        let profile = AgentProfile::default();
        let psi_m = profile.psi_modified(&surgery(), &radiotherapy()).unwrap();
        let psi_c = profile.psi_classical(&surgery(), &radiotherapy()).unwrap();
        assert_eq!(psi_m, psi_c);
    }

    #[test]
    fn identical_prospects_are_indifferent() {
        let profile = AgentProfile::default();
        let v = profile
            .compare(&surgery(), &surgery(), Mode::Classical)
            .unwrap();
        assert_eq!(v.relation, Relation::Indifferent);
        assert_eq!(v.psi, 0.0);
    }

    #[test]
    fn fully_unknown_prospects_are_indifferent() {
        let profile = AgentProfile::default();
        let f = utility_prospect(vec![(Outcome::Unknown, 1.0)]);
        let g = utility_prospect(vec![(Outcome::Unknown, 0.4), (Outcome::Unknown, 0.6)]);
        let v = profile.compare(&f, &g, Mode::Modified).unwrap();
        assert_eq!(v.psi, 0.0);
        assert_eq!(v.relation, Relation::Indifferent);
    }

    #[test]
    fn skew_symmetry_of_classical_psi() {
        let profile = AgentProfile::default();
        let ab = profile.psi_classical(&surgery(), &radiotherapy()).unwrap();
        let ba = profile.psi_classical(&radiotherapy(), &surgery()).unwrap();
        assert!((ab + ba).abs() <= 1e-12);
    }

    // ── profile specs ───────────────────────────────────────────────

    #[test]
    fn default_profile_spec_round_trips() {
        let p = AgentProfile::from_spec("").unwrap();
        assert_eq!(p, AgentProfile::default());
        assert_eq!(p.to_string(), "u:identity v:poly:1 q:power:3");
    }

    #[test]
    fn profile_spec_overrides_components() {
        let p = AgentProfile::from_spec("u:power:0.5 v:sin:2 q:linear").unwrap();
        assert_eq!(p.utility, UtilityFn::power(0.5).unwrap());
        assert_eq!(p.fear, FearFn::sin_poly(2.0).unwrap());
        assert_eq!(p.regret, RegretQ::linear());
    }

    #[test]
    fn profile_spec_derives_q_from_r() {
        let p = AgentProfile::from_spec("r:power:3:0.5").unwrap();
        assert_eq!(
            p.regret,
            RegretQ::from_r(crate::functions::RegretR::power_odd(3, 0.5).unwrap())
        );
    }

    #[test]
    fn profile_spec_rejects_q_and_r_together() {
        assert!(AgentProfile::from_spec("q:power:3 r:power:3:0.5").is_err());
        assert!(AgentProfile::from_spec("r:power:3:0.5 q:power:3").is_err());
    }
}
