//! The bundled treatment-choice scenario and its parameter sweeps.
//!
//! A patient weighs surgery against radiotherapy. Outcomes are stated
//! directly as utilities:
//!
//! ```text
//! surgery      = (0.5, 0.6; 0.27, 0.4)
//! radiotherapy = (0.7, 0.3; 0.28, 0.7)
//! ```
//!
//! An unknown treatment risk with probability `p_u` is introduced by
//! revising each known branch down by `p_u/2` and adding an unknown
//! branch. Three configurations are studied: unknown risk on the surgery
//! side (case I), on the radiotherapy side (case II), and on both sides
//! at once (case III, a contour over `(p_fu, p_gu)`).
//!
//! With the reference profile (linear fear, cubic regret) the four
//! headline values are −0.0065 (no unknowns), −0.0225 (case I at
//! `p_u = 0.1`), +0.0092 (case II at `p_u = 0.1`, a preference
//! reversal), and −0.0049 (case III at `p_fu = p_gu = 0.1`).

use crate::analysis::AnalysisError;
use crate::choice::AgentProfile;
use crate::functions::FearFn;
use crate::prospect::{Interpretation, Outcome, Prospect};

/// Surgery utilities and branch probabilities.
pub const SURGERY: [(f64, f64); 2] = [(0.5, 0.6), (0.27, 0.4)];
/// Radiotherapy utilities and branch probabilities.
pub const RADIOTHERAPY: [(f64, f64); 2] = [(0.7, 0.3), (0.28, 0.7)];

/// Reference Ψ for the classical comparison, within [`CLASSICAL_TOL`].
pub const CLASSICAL_REF: f64 = -0.0065;
pub const CLASSICAL_TOL: f64 = 5e-5;
/// Reference Ψ for case I at `p_u = 0.1` under linear fear.
pub const CASE_I_REF: f64 = -0.0225;
pub const CASE_I_TOL: f64 = 1e-4;
/// Reference Ψ for case II at `p_u = 0.1` under linear fear.
pub const CASE_II_REF: f64 = 0.0092;
pub const CASE_II_TOL: f64 = 1e-4;
/// Reference Ψ for case III at `p_fu = p_gu = 0.1` under linear fear.
pub const CASE_III_REF: f64 = -0.0049;
pub const CASE_III_TOL: f64 = 1e-4;

/// The surgery prospect without unknown risk.
pub fn surgery() -> Prospect {
    base_prospect(&SURGERY)
}

/// The radiotherapy prospect without unknown risk.
pub fn radiotherapy() -> Prospect {
    base_prospect(&RADIOTHERAPY)
}

fn base_prospect(base: &[(f64, f64)]) -> Prospect {
    Prospect::new(
        base.iter()
            .map(|&(x, p)| (Outcome::Known(x), p))
            .collect(),
        Interpretation::Utility,
    )
    .expect("bundled scenario prospects are valid")
}

/// Largest unknown mass the half-and-half revision supports for a base:
/// twice the smallest branch probability.
fn max_mass(base: &[(f64, f64)]) -> f64 {
    2.0 * base.iter().map(|&(_, p)| p).fold(f64::INFINITY, f64::min)
}

/// Largest representable unknown mass for the surgery side (0.8).
pub fn surgery_max_mass() -> f64 {
    max_mass(&SURGERY)
}

/// Largest representable unknown mass for the radiotherapy side (0.6).
pub fn radiotherapy_max_mass() -> f64 {
    max_mass(&RADIOTHERAPY)
}

fn with_unknown(base: &[(f64, f64)], p_u: f64) -> Result<Prospect, AnalysisError> {
    if !p_u.is_finite() || !(0.0..=1.0).contains(&p_u) {
        return Err(AnalysisError::InvalidParameter {
            what: "p_u",
            value: p_u,
        });
    }
    // p_u = 1 collapses to the fully unknown prospect; between the
    // revision limit and 1 the construction is undefined.
    if p_u == 1.0 {
        return Ok(Prospect::new(
            vec![(Outcome::Unknown, 1.0)],
            Interpretation::Utility,
        )
        .expect("fully unknown prospect is valid"));
    }
    let mut branches = Vec::with_capacity(base.len() + 1);
    for &(x, p) in base {
        let revised = p - 0.5 * p_u;
        if revised < 0.0 {
            return Err(AnalysisError::InvalidParameter {
                what: "p_u (revision drives a probability negative)",
                value: p_u,
            });
        }
        branches.push((Outcome::Known(x), revised));
    }
    branches.push((Outcome::Unknown, p_u));
    Ok(Prospect::new(branches, Interpretation::Utility)
        .expect("revised scenario prospect is valid"))
}

/// Surgery with an unknown risk of probability `p_u`.
pub fn surgery_with_unknown(p_u: f64) -> Result<Prospect, AnalysisError> {
    with_unknown(&SURGERY, p_u)
}

/// Radiotherapy with an unknown consequence of probability `p_u`.
pub fn radiotherapy_with_unknown(p_u: f64) -> Result<Prospect, AnalysisError> {
    with_unknown(&RADIOTHERAPY, p_u)
}

/// Which treatment carries the unknown risk in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MedicalCase {
    I,
    II,
}

impl std::fmt::Display for MedicalCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MedicalCase::I => write!(f, "I"),
            MedicalCase::II => write!(f, "II"),
        }
    }
}

/// Ψ(surgery-side, radiotherapy-side) for a sweep case at unknown mass `p_u`.
pub fn case_psi(case: MedicalCase, p_u: f64, profile: &AgentProfile) -> Result<f64, AnalysisError> {
    let (f, g) = match case {
        MedicalCase::I => (surgery_with_unknown(p_u)?, radiotherapy()),
        MedicalCase::II => (surgery(), radiotherapy_with_unknown(p_u)?),
    };
    Ok(profile.psi_modified(&f, &g)?)
}

/// Ψ with unknown risks on both sides.
pub fn case_iii_psi(
    p_fu: f64,
    p_gu: f64,
    profile: &AgentProfile,
) -> Result<f64, AnalysisError> {
    let f = surgery_with_unknown(p_fu)?;
    let g = radiotherapy_with_unknown(p_gu)?;
    Ok(profile.psi_modified(&f, &g)?)
}

/// One sweep row: the unknown mass and Ψ per fear function.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p_u: f64,
    pub psi: Vec<f64>,
}

/// Ψ versus `p_u`, one column per fear function.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub case: MedicalCase,
    pub fears: Vec<FearFn>,
    pub rows: Vec<SweepRow>,
}

/// One contour row: both unknown masses and Ψ per fear function.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourRow {
    pub p_fu: f64,
    pub p_gu: f64,
    pub psi: Vec<f64>,
}

/// Ψ versus `(p_fu, p_gu)` in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourTable {
    pub fears: Vec<FearFn>,
    pub rows: Vec<ContourRow>,
}

/// Grid points `j/(grid-1)` over `[0, 1]`, restricted to masses the
/// revision rule can represent for the given base (its limit, plus the
/// fully-unknown endpoint at exactly 1).
fn grid_points(grid: usize, limit: f64) -> Vec<f64> {
    let n = (grid - 1) as f64;
    (0..grid)
        .map(|j| j as f64 / n)
        .filter(|&p| p <= limit || p == 1.0)
        .collect()
}

fn check_sweep_args(fears: &[FearFn], grid: usize) -> Result<(), AnalysisError> {
    if grid < 2 {
        return Err(AnalysisError::InvalidParameter {
            what: "grid size (must be >= 2)",
            value: grid as f64,
        });
    }
    if fears.is_empty() {
        return Err(AnalysisError::InvalidParameter {
            what: "fear list (must be non-empty)",
            value: 0.0,
        });
    }
    Ok(())
}

/// Sweep Ψ over a `p_u` grid for each fear function.
///
/// The grid subdivides `[0, 1]` into `grid - 1` steps; points beyond the
/// revision limit are omitted, except the fully-unknown endpoint. The
/// base profile supplies the utility and regret functions; its fear
/// function is replaced column by column.
pub fn sweep_pu(
    case: MedicalCase,
    fears: &[FearFn],
    grid: usize,
    base: &AgentProfile,
) -> Result<SweepTable, AnalysisError> {
    check_sweep_args(fears, grid)?;
    let limit = match case {
        MedicalCase::I => surgery_max_mass(),
        MedicalCase::II => radiotherapy_max_mass(),
    };
    let mut rows = Vec::new();
    for p_u in grid_points(grid, limit) {
        let mut psi = Vec::with_capacity(fears.len());
        for fear in fears {
            let profile = AgentProfile {
                fear: *fear,
                ..base.clone()
            };
            psi.push(case_psi(case, p_u, &profile)?);
        }
        rows.push(SweepRow { p_u, psi });
    }
    Ok(SweepTable {
        case,
        fears: fears.to_vec(),
        rows,
    })
}

/// Sweep Ψ over a `(p_fu, p_gu)` grid for each fear function, row-major
/// (`p_fu` outer, `p_gu` inner).
pub fn sweep_contour(
    fears: &[FearFn],
    grid: usize,
    base: &AgentProfile,
) -> Result<ContourTable, AnalysisError> {
    check_sweep_args(fears, grid)?;
    let f_points = grid_points(grid, surgery_max_mass());
    let g_points = grid_points(grid, radiotherapy_max_mass());
    let mut rows = Vec::new();
    for &p_fu in &f_points {
        for &p_gu in &g_points {
            let mut psi = Vec::with_capacity(fears.len());
            for fear in fears {
                let profile = AgentProfile {
                    fear: *fear,
                    ..base.clone()
                };
                psi.push(case_iii_psi(p_fu, p_gu, &profile)?);
            }
            rows.push(ContourRow { p_fu, p_gu, psi });
        }
    }
    Ok(ContourTable {
        fears: fears.to_vec(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::Relation;

    #[test]
    fn classical_reference_value() {
        let profile = AgentProfile::default();
        let psi = profile.psi_classical(&surgery(), &radiotherapy()).unwrap();
        assert!((psi - CLASSICAL_REF).abs() < CLASSICAL_TOL);
    }

    #[test]
    fn case_values_at_one_tenth() {
        let profile = AgentProfile::default();
        let i = case_psi(MedicalCase::I, 0.1, &profile).unwrap();
        let ii = case_psi(MedicalCase::II, 0.1, &profile).unwrap();
        let iii = case_iii_psi(0.1, 0.1, &profile).unwrap();
        assert!((i - CASE_I_REF).abs() < CASE_I_TOL, "case I: {i}");
        assert!((ii - CASE_II_REF).abs() < CASE_II_TOL, "case II: {ii}");
        assert!((iii - CASE_III_REF).abs() < CASE_III_TOL, "case III: {iii}");
        assert_eq!(profile.classify(ii).relation, Relation::FStrict);
    }

    #[test]
    fn zero_mass_keeps_classical_value() {
        let profile = AgentProfile::default();
        let classical = profile.psi_classical(&surgery(), &radiotherapy()).unwrap();
        assert_eq!(case_psi(MedicalCase::I, 0.0, &profile).unwrap(), classical);
        assert_eq!(case_psi(MedicalCase::II, 0.0, &profile).unwrap(), classical);
        assert_eq!(case_iii_psi(0.0, 0.0, &profile).unwrap(), classical);
    }

    #[test]
    fn revision_limits() {
        assert_eq!(surgery_max_mass(), 0.8);
        assert_eq!(radiotherapy_max_mass(), 0.6);
        assert!(surgery_with_unknown(0.8).is_ok());
        assert!(surgery_with_unknown(0.81).is_err());
        assert!(radiotherapy_with_unknown(0.6).is_ok());
        assert!(radiotherapy_with_unknown(0.61).is_err());
    }

    #[test]
    fn unit_mass_collapses_to_fully_unknown() {
        let p = surgery_with_unknown(1.0).unwrap();
        assert_eq!(p.branches().len(), 1);
        assert_eq!(p.unknown_mass().value(), 1.0);
        // Both sides fully unknown: indifference, exactly.
        let profile = AgentProfile::default();
        assert_eq!(case_iii_psi(1.0, 1.0, &profile).unwrap(), 0.0);
    }

    #[test]
    fn sweep_grid_hits_the_reference_point() {
        let profile = AgentProfile::default();
        let table = sweep_pu(MedicalCase::I, &[FearFn::linear()], 101, &profile).unwrap();
        let row = table
            .rows
            .iter()
            .find(|r| (r.p_u - 0.1).abs() < 1e-12)
            .expect("p_u = 0.1 is on the 101-point grid");
        assert!((row.psi[0] - CASE_I_REF).abs() < CASE_I_TOL);
    }

    #[test]
    fn sweep_rows_stop_at_the_revision_limit() {
        let profile = AgentProfile::default();
        let table = sweep_pu(MedicalCase::II, &[FearFn::linear()], 11, &profile).unwrap();
        let masses: Vec<f64> = table.rows.iter().map(|r| r.p_u).collect();
        // 0.0 .. 0.6 in steps of 0.1, plus the fully-unknown endpoint.
        assert_eq!(masses.len(), 8);
        assert_eq!(*masses.last().unwrap(), 1.0);
        assert!((masses[6] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn sweep_rejects_bad_arguments() {
        let profile = AgentProfile::default();
        assert!(sweep_pu(MedicalCase::I, &[], 11, &profile).is_err());
        assert!(sweep_pu(MedicalCase::I, &[FearFn::linear()], 1, &profile).is_err());
    }

    #[test]
    fn contour_corners() {
        let profile = AgentProfile::default();
        let table = sweep_contour(&[FearFn::linear()], 2, &profile).unwrap();
        // Grid {0, 1} on both axes: all four corners are representable.
        assert_eq!(table.rows.len(), 4);
        let classical = profile.psi_classical(&surgery(), &radiotherapy()).unwrap();
        let corner = &table.rows[0];
        assert_eq!(corner.p_fu, 0.0);
        assert_eq!(corner.p_gu, 0.0);
        assert!((corner.psi[0] - classical).abs() < CLASSICAL_TOL);
        let last = table.rows.last().unwrap();
        assert_eq!((last.p_fu, last.p_gu), (1.0, 1.0));
        assert_eq!(last.psi[0], 0.0);
    }

    #[test]
    fn sweeps_are_reproducible() {
        let profile = AgentProfile::default();
        let fears = [FearFn::linear(), FearFn::poly(2.0).unwrap()];
        let a = sweep_pu(MedicalCase::I, &fears, 51, &profile).unwrap();
        let b = sweep_pu(MedicalCase::I, &fears, 51, &profile).unwrap();
        assert_eq!(a, b);
        let c = sweep_contour(&fears, 9, &profile).unwrap();
        let d = sweep_contour(&fears, 9, &profile).unwrap();
        assert_eq!(c, d);
    }
}
