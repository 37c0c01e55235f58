//! Prospects, unknown outcomes, and joint decision matrices.
//!
//! A prospect is a finite list of `(outcome, probability)` branches. An
//! outcome is either a known real value or the distinguished unknown
//! marker `?`. Known values are read either as money amounts (passed
//! through the agent's utility function) or as utility values directly,
//! depending on the prospect's [`Interpretation`].
//!
//! Two independent prospects are compared over their joint decision
//! matrix: the Cartesian product of their branches, with row probability
//! equal to the product of the branch probabilities.

use std::fmt;

use thiserror::Error;

/// Absolute tolerance on `sum(probabilities) == 1`.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

/// One branch payoff: a known real value or the unknown marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Known(f64),
    Unknown,
}

impl Outcome {
    pub fn is_unknown(self) -> bool {
        matches!(self, Outcome::Unknown)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Known(x) => write!(f, "{x}"),
            Outcome::Unknown => write!(f, "?"),
        }
    }
}

/// How the known values of a prospect are to be read.
///
/// `Money` values pass through the agent's utility function; `Utility`
/// values are used as utilities directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpretation {
    Money,
    Utility,
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interpretation::Money => write!(f, "money"),
            Interpretation::Utility => write!(f, "utility"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProspectError {
    #[error("prospect has no branches")]
    EmptyProspect,
    #[error("branch {index} has negative probability {prob}")]
    NegativeProbability { index: usize, prob: f64 },
    #[error("branch {index} has non-finite probability")]
    NonFiniteProbability { index: usize },
    #[error("branch probabilities sum to {sum}, expected 1")]
    ProbabilitySumMismatch { sum: f64 },
    #[error("branch {index} has a non-finite known outcome")]
    NonFiniteOutcome { index: usize },
    #[error("cannot normalize: probabilities sum to {sum}")]
    UnnormalizableSum { sum: f64 },
    #[error("decision matrix rows sum to {sum}, expected 1")]
    MatrixSumMismatch { sum: f64 },
}

/// Check the prospect invariants on a raw branch list.
///
/// Every probability must be finite and nonnegative, every known outcome
/// finite, the list nonempty, and the probabilities must sum to 1 within
/// [`PROBABILITY_SUM_TOLERANCE`].
pub fn validate_branches(branches: &[(Outcome, f64)]) -> Result<(), ProspectError> {
    if branches.is_empty() {
        return Err(ProspectError::EmptyProspect);
    }
    for (index, &(outcome, prob)) in branches.iter().enumerate() {
        if !prob.is_finite() {
            return Err(ProspectError::NonFiniteProbability { index });
        }
        if prob < 0.0 {
            return Err(ProspectError::NegativeProbability { index, prob });
        }
        if let Outcome::Known(x) = outcome {
            if !x.is_finite() {
                return Err(ProspectError::NonFiniteOutcome { index });
            }
        }
    }
    let sum = crate::sum::compensated_sum(branches.iter().map(|&(_, p)| p));
    if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
        return Err(ProspectError::ProbabilitySumMismatch { sum });
    }
    Ok(())
}

/// Total probability mass sitting on unknown branches of one prospect.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct UnknownMass(f64);

impl UnknownMass {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }
}

impl fmt::Display for UnknownMass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A validated prospect: branches plus the interpretation of its known values.
///
/// Construction enforces the invariants, so every `Prospect` in circulation
/// is valid. Branch order is preserved; it fixes the row order of joint
/// decision matrices and the canonical text form.
#[derive(Debug, Clone, PartialEq)]
pub struct Prospect {
    branches: Vec<(Outcome, f64)>,
    interpretation: Interpretation,
}

impl Prospect {
    /// Build a prospect, rejecting any invariant violation.
    pub fn new(
        branches: Vec<(Outcome, f64)>,
        interpretation: Interpretation,
    ) -> Result<Self, ProspectError> {
        validate_branches(&branches)?;
        Ok(Self {
            branches,
            interpretation,
        })
    }

    /// Build a prospect after rescaling the probabilities to sum to 1.
    ///
    /// Normalization never happens silently; this constructor is the one
    /// explicit opt-in.
    pub fn new_normalized(
        mut branches: Vec<(Outcome, f64)>,
        interpretation: Interpretation,
    ) -> Result<Self, ProspectError> {
        if branches.is_empty() {
            return Err(ProspectError::EmptyProspect);
        }
        for (index, &(_, prob)) in branches.iter().enumerate() {
            if !prob.is_finite() {
                return Err(ProspectError::NonFiniteProbability { index });
            }
            if prob < 0.0 {
                return Err(ProspectError::NegativeProbability { index, prob });
            }
        }
        let sum = crate::sum::compensated_sum(branches.iter().map(|&(_, p)| p));
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(ProspectError::UnnormalizableSum { sum });
        }
        for branch in &mut branches {
            branch.1 /= sum;
        }
        Self::new(branches, interpretation)
    }

    /// The degenerate prospect paying `outcome` with certainty.
    pub fn certain(outcome: Outcome, interpretation: Interpretation) -> Self {
        Self {
            branches: vec![(outcome, 1.0)],
            interpretation,
        }
    }

    pub fn branches(&self) -> &[(Outcome, f64)] {
        &self.branches
    }

    pub fn interpretation(&self) -> Interpretation {
        self.interpretation
    }

    pub fn has_unknown(&self) -> bool {
        self.branches.iter().any(|&(o, _)| o.is_unknown())
    }

    /// Summed probability over unknown branches, clamped into `[0, 1]`.
    ///
    /// The clamp only trims the sub-ulp overshoot a compensated sum of
    /// valid probabilities can produce.
    pub fn unknown_mass(&self) -> UnknownMass {
        let mass = crate::sum::compensated_sum(
            self.branches
                .iter()
                .filter(|(o, _)| o.is_unknown())
                .map(|&(_, p)| p),
        );
        UnknownMass(mass.clamp(0.0, 1.0))
    }
}

/// One joint state: its probability and the pair of contingent outcomes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixRow {
    pub prob: f64,
    pub outcome_f: Outcome,
    pub outcome_g: Outcome,
}

/// Joint state table for a pair of prospects.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMatrix {
    rows: Vec<MatrixRow>,
}

impl DecisionMatrix {
    /// Cartesian product of the branches of two independent prospects.
    ///
    /// Rows are emitted f-branch-major (for each branch of `f`, all
    /// branches of `g` in order); rows whose probability is exactly zero
    /// are pruned.
    pub fn joint(f: &Prospect, g: &Prospect) -> Self {
        let mut rows = Vec::with_capacity(f.branches.len() * g.branches.len());
        for &(outcome_f, pf) in &f.branches {
            for &(outcome_g, pg) in &g.branches {
                let prob = pf * pg;
                if prob == 0.0 {
                    continue;
                }
                rows.push(MatrixRow {
                    prob,
                    outcome_f,
                    outcome_g,
                });
            }
        }
        Self { rows }
    }

    /// Wrap explicit rows (a shared state partition), validating that the
    /// probabilities are nonnegative and sum to 1. Zero-probability rows
    /// are kept: they are the representation of null states.
    pub fn from_rows(rows: Vec<MatrixRow>) -> Result<Self, ProspectError> {
        if rows.is_empty() {
            return Err(ProspectError::EmptyProspect);
        }
        for (index, row) in rows.iter().enumerate() {
            if !row.prob.is_finite() {
                return Err(ProspectError::NonFiniteProbability { index });
            }
            if row.prob < 0.0 {
                return Err(ProspectError::NegativeProbability {
                    index,
                    prob: row.prob,
                });
            }
        }
        let sum = crate::sum::compensated_sum(rows.iter().map(|r| r.prob));
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(ProspectError::MatrixSumMismatch { sum });
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[MatrixRow] {
        &self.rows
    }

    pub fn total_probability(&self) -> f64 {
        crate::sum::compensated_sum(self.rows.iter().map(|r| r.prob))
    }

    /// Probability mass on rows whose f-side (resp. g-side) outcome is
    /// unknown, clamped into `[0, 1]`.
    pub fn side_unknown_mass(&self, f_side: bool) -> f64 {
        crate::sum::compensated_sum(self.rows.iter().filter_map(|r| {
            let o = if f_side { r.outcome_f } else { r.outcome_g };
            o.is_unknown().then_some(r.prob)
        }))
        .clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn money(branches: Vec<(Outcome, f64)>) -> Prospect {
        Prospect::new(branches, Interpretation::Money).unwrap()
    }

    // ── validation ──────────────────────────────────────────────────

    #[test]
    fn accepts_certain_payoff() {
        assert!(Prospect::new(
            vec![(Outcome::Known(2400.0), 1.0)],
            Interpretation::Money
        )
        .is_ok());
    }

    #[test]
    fn accepts_unknown_branch() {
        assert!(Prospect::new(
            vec![(Outcome::Known(2500.0), 0.33), (Outcome::Unknown, 0.67)],
            Interpretation::Money
        )
        .is_ok());
    }

    #[test]
    fn rejects_probability_sum_mismatch() {
        let err = Prospect::new(
            vec![(Outcome::Known(2500.0), 0.33), (Outcome::Unknown, 0.60)],
            Interpretation::Money,
        )
        .unwrap_err();
        match err {
            ProspectError::ProbabilitySumMismatch { sum } => {
                assert!((sum - 0.93).abs() < 1e-12);
            }
            other => panic!("expected sum mismatch, got {other:?}"),
        }
    }

    #[test]
    fn rejects_empty_prospect() {
        assert_eq!(
            Prospect::new(vec![], Interpretation::Money).unwrap_err(),
            ProspectError::EmptyProspect
        );
    }

    #[test]
    fn rejects_negative_probability() {
        let err = Prospect::new(
            vec![(Outcome::Known(1.0), 1.2), (Outcome::Known(0.0), -0.2)],
            Interpretation::Money,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            ProspectError::NegativeProbability { index: 1, .. }
        ));
    }

    #[test]
    fn rejects_non_finite_outcome() {
        let err = Prospect::new(
            vec![(Outcome::Known(f64::NAN), 1.0)],
            Interpretation::Money,
        )
        .unwrap_err();
        assert!(matches!(err, ProspectError::NonFiniteOutcome { index: 0 }));
    }

    #[test]
    fn rejects_nan_probability() {
        let err = Prospect::new(
            vec![(Outcome::Known(1.0), f64::NAN)],
            Interpretation::Money,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            ProspectError::NonFiniteProbability { index: 0 }
        ));
    }

    #[test]
    fn normalization_is_explicit() {
        let p = Prospect::new_normalized(
            vec![(Outcome::Known(1.0), 2.0), (Outcome::Known(0.0), 2.0)],
            Interpretation::Money,
        )
        .unwrap();
        assert_eq!(p.branches()[0].1, 0.5);
        assert_eq!(p.branches()[1].1, 0.5);
    }

    // ── unknown mass ────────────────────────────────────────────────

    #[test]
    fn unknown_mass_sums_unknown_branches() {
        let p = money(vec![(Outcome::Known(4000.0), 0.8), (Outcome::Unknown, 0.2)]);
        assert_eq!(p.unknown_mass().value(), 0.2);
    }

    #[test]
    fn unknown_mass_zero_without_unknowns() {
        let p = money(vec![(Outcome::Known(3000.0), 1.0)]);
        assert!(p.unknown_mass().is_zero());
    }

    #[test]
    fn unknown_mass_one_when_all_unknown() {
        let p = money(vec![(Outcome::Unknown, 0.3), (Outcome::Unknown, 0.7)]);
        assert_eq!(p.unknown_mass().value(), 1.0);
    }

    // ── joint matrices ──────────────────────────────────────────────

    #[test]
    fn joint_matrix_of_radiotherapy_pair() {
        let f = Prospect::new(
            vec![(Outcome::Known(0.5), 0.6), (Outcome::Known(0.27), 0.4)],
            Interpretation::Utility,
        )
        .unwrap();
        let g = Prospect::new(
            vec![(Outcome::Known(0.7), 0.3), (Outcome::Known(0.28), 0.7)],
            Interpretation::Utility,
        )
        .unwrap();
        let m = DecisionMatrix::joint(&f, &g);
        let probs: Vec<f64> = m.rows().iter().map(|r| r.prob).collect();
        let expected = [0.18, 0.42, 0.12, 0.28];
        assert_eq!(probs.len(), 4);
        for (got, want) in probs.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
    }

    #[test]
    fn joint_matrix_with_unknown_branch() {
        let f = Prospect::new(
            vec![
                (Outcome::Known(0.5), 0.55),
                (Outcome::Known(0.27), 0.35),
                (Outcome::Unknown, 0.1),
            ],
            Interpretation::Utility,
        )
        .unwrap();
        let g = Prospect::new(
            vec![(Outcome::Known(0.7), 0.3), (Outcome::Known(0.28), 0.7)],
            Interpretation::Utility,
        )
        .unwrap();
        let m = DecisionMatrix::joint(&f, &g);
        let probs: Vec<f64> = m.rows().iter().map(|r| r.prob).collect();
        let expected = [0.165, 0.385, 0.105, 0.245, 0.03, 0.07];
        assert_eq!(probs.len(), 6);
        for (got, want) in probs.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
    }

    #[test]
    fn joint_matrix_of_certainties_is_single_row() {
        let f = Prospect::certain(Outcome::Known(1.0), Interpretation::Utility);
        let g = Prospect::certain(Outcome::Known(2.0), Interpretation::Utility);
        let m = DecisionMatrix::joint(&f, &g);
        assert_eq!(m.rows().len(), 1);
        assert_eq!(m.rows()[0].prob, 1.0);
    }

    #[test]
    fn joint_matrix_prunes_zero_probability_rows() {
        let f = Prospect::new(
            vec![(Outcome::Known(1.0), 1.0), (Outcome::Unknown, 0.0)],
            Interpretation::Utility,
        )
        .unwrap();
        let g = Prospect::certain(Outcome::Known(2.0), Interpretation::Utility);
        let m = DecisionMatrix::joint(&f, &g);
        assert_eq!(m.rows().len(), 1);
    }

    #[test]
    fn from_rows_keeps_null_states() {
        let rows = vec![
            MatrixRow {
                prob: 1.0,
                outcome_f: Outcome::Known(1.0),
                outcome_g: Outcome::Known(0.0),
            },
            MatrixRow {
                prob: 0.0,
                outcome_f: Outcome::Known(5.0),
                outcome_g: Outcome::Known(-5.0),
            },
        ];
        let m = DecisionMatrix::from_rows(rows).unwrap();
        assert_eq!(m.rows().len(), 2);
    }
}
