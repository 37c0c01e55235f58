//! Sampled, executable checks of the behavioral-foundation properties.
//!
//! The audits work on shared-state ensembles: a probability partition
//! `p_1..p_k` (zero-probability entries are the null states) with one
//! outcome vector per prospect. Each audit draws ensembles from a seeded
//! ChaCha stream, constructs instances whose premises hold, re-evaluates
//! them through the choice engine, and records any violation as a
//! finding with its sample index. Fixed seed, identical report — bytes
//! included.
//!
//! Audits:
//!
//! * profile compliance — the profile's own contract: `u` strictly
//!   increasing, `v` strictly decreasing with exact endpoints, `Q`
//!   skew-symmetric and strictly increasing, convex when declared.
//! * completeness — every sampled pair gets a finite, total verdict,
//!   and every prospect is indifferent to itself.
//! * monotonicity — pairs built to dominate in adjusted utility must
//!   come out weakly (and, with a strict non-null state, strictly)
//!   preferred.
//! * d-transitivity — a strict-dominance link composed with a weak
//!   preference must force strict overall preference.
//! * trade-off consistency — premise triples are solved exactly on the
//!   strictly increasing `Q`, then the implied conclusion must be an
//!   indifference.
//! * continuity (heuristic only) — a 1e-9 outcome nudge must not jump
//!   between the two strict verdicts while |Ψ| is large. Closedness of
//!   preference sets is not finitely decidable, so findings here are
//!   warnings, not counterexamples.
//!
//! In the trade-off construction the four prospects share one
//! unknown-state pattern, so a single fear factor applies to every
//! substituted outcome; the solved premises pin down equal adjusted
//! trade-offs only under that alignment.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::choice::{AgentProfile, ChoiceError, Relation};
use crate::prospect::{DecisionMatrix, Interpretation, MatrixRow, Outcome};
use crate::sum::{compensated_sum, CompensatedSum};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuditError {
    #[error("d-transitivity audit requires a regret function declared convex")]
    ConvexityRequired,
    #[error("invalid audit config: {reason}")]
    InvalidConfig { reason: String },
    #[error(transparent)]
    Choice(#[from] ChoiceError),
    #[error(transparent)]
    Function(#[from] crate::functions::FunctionError),
}

/// Sampling parameters for the audits.
#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub samples: usize,
    pub outcome_range: (f64, f64),
    pub max_states: usize,
    pub seed: u64,
    pub profile: AgentProfile,
}

impl AuditConfig {
    pub fn new(profile: AgentProfile) -> Self {
        AuditConfig {
            samples: 10_000,
            outcome_range: (-1.0, 1.0),
            max_states: 5,
            seed: 0,
            profile,
        }
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn check(&self) -> Result<(), AuditError> {
        let (lo, hi) = self.outcome_range;
        if self.samples == 0 {
            return Err(AuditError::InvalidConfig {
                reason: "samples must be >= 1".into(),
            });
        }
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(AuditError::InvalidConfig {
                reason: format!("outcome range [{lo}, {hi}] must satisfy lo < hi"),
            });
        }
        if self.max_states < 2 {
            return Err(AuditError::InvalidConfig {
                reason: "max_states must be >= 2".into(),
            });
        }
        Ok(())
    }
}

/// One violation, replayable from the audit seed and sample index.
#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub sample: usize,
    pub detail: String,
}

/// Result of one audit.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub name: &'static str,
    pub seed: u64,
    pub samples: usize,
    pub skipped: usize,
    pub findings: Vec<Finding>,
    /// Heuristic reports warn instead of failing the run.
    pub heuristic: bool,
    pub notes: Vec<String>,
}

impl AuditReport {
    fn new(name: &'static str, seed: u64) -> Self {
        AuditReport {
            name,
            seed,
            samples: 0,
            skipped: 0,
            findings: Vec::new(),
            heuristic: false,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.heuristic { "warnings" } else { "findings" };
        write!(
            f,
            "audit {}: samples={} skipped={} {}={}",
            self.name,
            self.samples,
            self.skipped,
            kind,
            self.findings.len()
        )?;
        for note in &self.notes {
            write!(f, " [{note}]")?;
        }
        for finding in &self.findings {
            write!(f, "\n  sample {} (seed {}): {}", finding.sample, self.seed, finding.detail)?;
        }
        Ok(())
    }
}

/// All audit reports for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditRun {
    pub reports: Vec<AuditReport>,
}

impl AuditRun {
    /// Number of non-heuristic findings; the run passes at zero.
    pub fn counterexamples(&self) -> usize {
        self.reports
            .iter()
            .filter(|r| !r.heuristic)
            .map(|r| r.findings.len())
            .sum()
    }

    pub fn warnings(&self) -> usize {
        self.reports
            .iter()
            .filter(|r| r.heuristic)
            .map(|r| r.findings.len())
            .sum()
    }

    /// Findings as CSV (`audit,sample,seed,detail`), deterministic.
    pub fn findings_csv(&self) -> String {
        let mut out = String::from("audit,sample,seed,detail\n");
        for report in &self.reports {
            for finding in &report.findings {
                let detail = finding.detail.replace('"', "\"\"");
                out.push_str(&format!(
                    "{},{},{},\"{}\"\n",
                    report.name, finding.sample, report.seed, detail
                ));
            }
        }
        out
    }
}

impl fmt::Display for AuditRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for report in &self.reports {
            writeln!(f, "{report}")?;
        }
        write!(
            f,
            "total: {} counterexamples, {} warnings",
            self.counterexamples(),
            self.warnings()
        )
    }
}

/// Run every audit. The d-transitivity audit is skipped (with a note)
/// when the regret function is not declared convex.
pub fn run_all(cfg: &AuditConfig) -> Result<AuditRun, AuditError> {
    cfg.check()?;
    let mut reports = vec![
        audit_profile(cfg)?,
        audit_completeness(cfg)?,
        audit_monotonicity(cfg)?,
    ];
    match audit_d_transitivity(cfg) {
        Ok(report) => reports.push(report),
        Err(AuditError::ConvexityRequired) => {
            let mut report = AuditReport::new("d-transitivity", cfg.seed);
            report.notes.push("skipped: regret function not declared convex".into());
            reports.push(report);
        }
        Err(other) => return Err(other),
    }
    reports.push(audit_tradeoff_consistency(cfg)?);
    reports.push(audit_continuity(cfg)?);
    Ok(AuditRun { reports })
}

// ── shared-state machinery ──────────────────────────────────────────

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn gen_probs(rng: &mut ChaCha8Rng, max_states: usize) -> Vec<f64> {
    let k = rng.random_range(2..=max_states);
    let mut weights: Vec<f64> = (0..k).map(|_| 0.01 + rng.random::<f64>()).collect();
    // one null state in a fifth of the ensembles
    if k > 2 && rng.random::<f64>() < 0.2 {
        let idx = rng.random_range(0..k);
        weights[idx] = 0.0;
    }
    let total: f64 = compensated_sum(weights.iter().copied());
    weights.iter().map(|w| w / total).collect()
}

fn gen_known(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn gen_vector(
    rng: &mut ChaCha8Rng,
    states: usize,
    range: (f64, f64),
    unknown_p: f64,
) -> Vec<Outcome> {
    (0..states)
        .map(|_| {
            if rng.random::<f64>() < unknown_p {
                Outcome::Unknown
            } else {
                Outcome::Known(gen_known(rng, range))
            }
        })
        .collect()
}

fn vector_mass(probs: &[f64], outcomes: &[Outcome]) -> f64 {
    compensated_sum(
        probs
            .iter()
            .zip(outcomes)
            .filter(|(_, o)| o.is_unknown())
            .map(|(&p, _)| p),
    )
    .clamp(0.0, 1.0)
}

fn matrix_of(probs: &[f64], f: &[Outcome], g: &[Outcome]) -> DecisionMatrix {
    let rows = probs
        .iter()
        .zip(f.iter().zip(g))
        .map(|(&prob, (&outcome_f, &outcome_g))| MatrixRow {
            prob,
            outcome_f,
            outcome_g,
        })
        .collect();
    DecisionMatrix::from_rows(rows).expect("sampled state partition is a valid matrix")
}

/// Ψ over a shared state partition, money interpretation.
fn psi_vectors(
    profile: &AgentProfile,
    probs: &[f64],
    f: &[Outcome],
    g: &[Outcome],
) -> Result<f64, ChoiceError> {
    profile.psi_over(
        &matrix_of(probs, f, g),
        vector_mass(probs, f),
        vector_mass(probs, g),
        Interpretation::Money,
        Interpretation::Money,
    )
}

/// Per-state dominance flags for an aligned pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateFlags {
    /// `ū(f_i) >= ū(g_i)`.
    pub weakly_ge: bool,
    /// `ū(f_i) > ū(g_i)`.
    pub strict: bool,
    /// The state has positive probability.
    pub non_null: bool,
}

/// Two prospects aligned on one state partition, with per-state
/// adjusted-utility comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct DominancePair {
    pub probs: Vec<f64>,
    pub f: Vec<Outcome>,
    pub g: Vec<Outcome>,
    pub flags: Vec<StateFlags>,
}

impl DominancePair {
    /// Align two independent prospects on their joint matrix — the
    /// common refinement of both branch partitions — and flag each
    /// refined state.
    pub fn align(
        profile: &AgentProfile,
        f: &crate::prospect::Prospect,
        g: &crate::prospect::Prospect,
    ) -> Result<Self, ChoiceError> {
        let matrix = DecisionMatrix::joint(f, g);
        let probs: Vec<f64> = matrix.rows().iter().map(|r| r.prob).collect();
        let fv: Vec<Outcome> = matrix.rows().iter().map(|r| r.outcome_f).collect();
        let gv: Vec<Outcome> = matrix.rows().iter().map(|r| r.outcome_g).collect();
        Self::from_parts(
            profile,
            probs,
            fv,
            gv,
            f.unknown_mass().value(),
            g.unknown_mass().value(),
            f.interpretation(),
            g.interpretation(),
        )
    }

    /// Flag vectors over an explicit shared partition (money
    /// interpretation, as used by the audits).
    pub fn from_vectors(
        profile: &AgentProfile,
        probs: &[f64],
        f: &[Outcome],
        g: &[Outcome],
    ) -> Result<Self, ChoiceError> {
        let p_fu = vector_mass(probs, f);
        let p_gu = vector_mass(probs, g);
        Self::from_parts(
            profile,
            probs.to_vec(),
            f.to_vec(),
            g.to_vec(),
            p_fu,
            p_gu,
            Interpretation::Money,
            Interpretation::Money,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn from_parts(
        profile: &AgentProfile,
        probs: Vec<f64>,
        f: Vec<Outcome>,
        g: Vec<Outcome>,
        p_fu: f64,
        p_gu: f64,
        interp_f: Interpretation,
        interp_g: Interpretation,
    ) -> Result<Self, ChoiceError> {
        let mut flags = Vec::with_capacity(probs.len());
        for ((&prob, &of), &og) in probs.iter().zip(&f).zip(&g) {
            let uf = profile.adjusted_utility(of, p_fu, interp_f)?;
            let ug = profile.adjusted_utility(og, p_gu, interp_g)?;
            flags.push(StateFlags {
                weakly_ge: uf >= ug,
                strict: uf > ug,
                non_null: prob > 0.0,
            });
        }
        Ok(DominancePair { probs, f, g, flags })
    }

    pub fn dominates_weakly(&self) -> bool {
        self.flags.iter().all(|s| s.weakly_ge)
    }

    /// Weak dominance plus a strict, non-null state.
    pub fn dominates_strictly(&self) -> bool {
        self.dominates_weakly() && self.flags.iter().any(|s| s.strict && s.non_null)
    }
}

// ── profile compliance ──────────────────────────────────────────────

const GRID: usize = 512;
const SKEW_SAMPLES: usize = 1000;
const SKEW_TOL: f64 = 1e-12;
const ENDPOINT_TOL: f64 = 1e-15;

/// Check the profile's own contract by sampling.
pub fn audit_profile(cfg: &AuditConfig) -> Result<AuditReport, AuditError> {
    cfg.check()?;
    let mut report = AuditReport::new("profile-compliance", cfg.seed);
    let profile = &cfg.profile;
    let (lo, hi) = cfg.outcome_range;

    // u strictly increasing over the outcome range
    let mut prev = profile.utility.eval(lo)?;
    for i in 1..GRID {
        let x = lo + (hi - lo) * i as f64 / (GRID - 1) as f64;
        let cur = profile.utility.eval(x)?;
        report.samples += 1;
        if cur <= prev {
            report.findings.push(Finding {
                sample: i,
                detail: format!("utility not strictly increasing at x={x}"),
            });
        }
        prev = cur;
    }

    // v strictly decreasing on [0, 1], range within [0, 1], exact endpoints
    let mut prev = profile.fear.eval(0.0)?;
    if (prev - 1.0).abs() > ENDPOINT_TOL {
        report.findings.push(Finding {
            sample: 0,
            detail: format!("fear endpoint v(0)={prev}, expected 1"),
        });
    }
    for i in 1..GRID {
        let x = i as f64 / (GRID - 1) as f64;
        let cur = profile.fear.eval(x)?;
        report.samples += 1;
        if cur >= prev {
            report.findings.push(Finding {
                sample: i,
                detail: format!("fear function not strictly decreasing at p_u={x}"),
            });
        }
        if !(0.0..=1.0).contains(&cur) {
            report.findings.push(Finding {
                sample: i,
                detail: format!("fear value {cur} outside [0, 1] at p_u={x}"),
            });
        }
        prev = cur;
    }
    let at_one = profile.fear.eval(1.0)?;
    if at_one.abs() > ENDPOINT_TOL {
        report.findings.push(Finding {
            sample: GRID,
            detail: format!("fear endpoint v(1)={at_one}, expected 0"),
        });
    }

    // Q skew-symmetric and strictly increasing on the induced scale
    let scale = 2.0 * profile.utility.eval(lo)?.abs().max(profile.utility.eval(hi)?.abs());
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let mut rng = rng_for(cfg.seed, 1);
    for i in 0..SKEW_SAMPLES {
        let xi = scale * (2.0 * rng.random::<f64>() - 1.0);
        let residual = profile.regret.eval(xi)? + profile.regret.eval(-xi)?;
        report.samples += 1;
        if residual.abs() > SKEW_TOL {
            report.findings.push(Finding {
                sample: i,
                detail: format!("skew symmetry violated: Q({xi})+Q({}) = {residual}", -xi),
            });
        }
    }
    let mut prev = profile.regret.eval(-scale)?;
    for i in 1..GRID {
        let xi = -scale + 2.0 * scale * i as f64 / (GRID - 1) as f64;
        let cur = profile.regret.eval(xi)?;
        report.samples += 1;
        if cur <= prev {
            report.findings.push(Finding {
                sample: i,
                detail: format!("regret function not strictly increasing at xi={xi}"),
            });
        }
        prev = cur;
    }

    // declared convexity, verified by second differences on xi > 0
    if profile.regret.declared_convex() {
        let h = scale / GRID as f64;
        for i in 1..GRID {
            let x = scale * i as f64 / GRID as f64;
            let second = profile.regret.eval(x + h)? - 2.0 * profile.regret.eval(x)?
                + profile.regret.eval(x - h)?;
            report.samples += 1;
            if second < -SKEW_TOL * scale.max(1.0) {
                report.findings.push(Finding {
                    sample: i,
                    detail: format!("convexity violated at xi={x}: second difference {second}"),
                });
            }
        }
    } else {
        report.notes.push("convexity not declared; not checked".into());
    }

    Ok(report)
}

// ── completeness ────────────────────────────────────────────────────

/// Every sampled pair must yield a finite Ψ (a total verdict), and every
/// prospect must be indifferent to itself. Indifference counts toward
/// both weak-preference tallies.
pub fn audit_completeness(cfg: &AuditConfig) -> Result<AuditReport, AuditError> {
    cfg.check()?;
    let mut report = AuditReport::new("completeness", cfg.seed);
    let mut rng = rng_for(cfg.seed, 2);
    let (mut f_weak, mut g_weak) = (0usize, 0usize);
    for sample in 0..cfg.samples {
        report.samples += 1;
        let probs = gen_probs(&mut rng, cfg.max_states);
        let f = gen_vector(&mut rng, probs.len(), cfg.outcome_range, 0.25);
        let g = gen_vector(&mut rng, probs.len(), cfg.outcome_range, 0.25);
        let psi = match psi_vectors(&cfg.profile, &probs, &f, &g) {
            Ok(psi) => psi,
            Err(err) => {
                report.findings.push(Finding {
                    sample,
                    detail: format!("psi evaluation failed: {err}"),
                });
                continue;
            }
        };
        if !psi.is_finite() {
            report.findings.push(Finding {
                sample,
                detail: format!("psi is not finite: {psi}"),
            });
            continue;
        }
        match cfg.profile.classify(psi).relation {
            Relation::FStrict => f_weak += 1,
            Relation::GStrict => g_weak += 1,
            Relation::Indifferent => {
                f_weak += 1;
                g_weak += 1;
            }
        }
        let self_psi = psi_vectors(&cfg.profile, &probs, &f, &f)?;
        if self_psi.abs() > 1e-12 {
            report.findings.push(Finding {
                sample,
                detail: format!("prospect not indifferent to itself: psi={self_psi}"),
            });
        }
    }
    report.notes.push(format!("f-weak={f_weak} g-weak={g_weak}"));
    Ok(report)
}

// ── monotonicity ────────────────────────────────────────────────────

/// Weak and strong monotonicity over constructed dominating pairs.
///
/// Even samples bump known outcomes of a copy (equal unknown masses);
/// odd samples replace unknown states by known outcomes with nonnegative
/// utility (the replacing side carries less fear). Expectations come
/// from the computed [`DominancePair`] flags, not from the construction.
pub fn audit_monotonicity(cfg: &AuditConfig) -> Result<AuditReport, AuditError> {
    cfg.check()?;
    let mut report = AuditReport::new("monotonicity", cfg.seed);
    let mut rng = rng_for(cfg.seed, 3);
    let (lo, hi) = cfg.outcome_range;
    let span = hi - lo;
    let zero_money = cfg.profile.utility.invert(0.0)?;
    for sample in 0..cfg.samples {
        report.samples += 1;
        let probs = gen_probs(&mut rng, cfg.max_states);
        let pair = if sample % 2 == 0 {
            // same unknown pattern, bumped knowns
            let g = gen_vector(&mut rng, probs.len(), cfg.outcome_range, 0.25);
            let known: Vec<usize> = g
                .iter()
                .enumerate()
                .filter(|(_, o)| !o.is_unknown())
                .map(|(i, _)| i)
                .collect();
            if known.is_empty() {
                report.skipped += 1;
                continue;
            }
            let mut f = g.clone();
            let mut bumped = false;
            for &i in &known {
                if rng.random::<f64>() < 0.5 {
                    if let Outcome::Known(x) = g[i] {
                        f[i] = Outcome::Known(x + (0.05 + 0.45 * rng.random::<f64>()) * span);
                        bumped = true;
                    }
                }
            }
            if !bumped {
                if let Outcome::Known(x) = g[known[0]] {
                    f[known[0]] = Outcome::Known(x + 0.25 * span);
                }
            }
            (f, g)
        } else {
            // replace unknowns by outcomes with nonnegative utility;
            // known outcomes sampled at or above u^{-1}(0) so the lower
            // fear on the replacing side cannot hurt them
            let positive_range = (zero_money, zero_money + span);
            let g = gen_vector(&mut rng, probs.len(), positive_range, 0.4);
            let unknowns: Vec<usize> = g
                .iter()
                .enumerate()
                .filter(|(_, o)| o.is_unknown())
                .map(|(i, _)| i)
                .collect();
            if unknowns.is_empty() {
                report.skipped += 1;
                continue;
            }
            let mut f = g.clone();
            let mut replaced = false;
            for &i in &unknowns {
                if rng.random::<f64>() < 0.6 {
                    let y = zero_money + (0.05 + 0.95 * rng.random::<f64>()) * span;
                    f[i] = Outcome::Known(y);
                    replaced = true;
                }
            }
            if !replaced {
                f[unknowns[0]] = Outcome::Known(zero_money + 0.5 * span);
            }
            (f, g)
        };
        let (f, g) = pair;
        let flags = DominancePair::from_vectors(&cfg.profile, &probs, &f, &g)?;
        if !flags.dominates_weakly() {
            // construction failed to establish the premise (e.g. the
            // fear factor collapsed to zero); not a violation
            report.skipped += 1;
            continue;
        }
        let psi = psi_vectors(&cfg.profile, &probs, &f, &g)?;
        if flags.dominates_strictly() {
            if !(psi > 0.0) {
                report.findings.push(Finding {
                    sample,
                    detail: format!("strict dominance but psi={psi}"),
                });
            }
        } else if !(psi >= 0.0) {
            report.findings.push(Finding {
                sample,
                detail: format!("weak dominance but psi={psi}"),
            });
        }
    }
    Ok(report)
}

// ── d-transitivity ──────────────────────────────────────────────────

/// Strict-dominance link composed with a weak preference must give
/// strict preference, in both clause orders.
pub fn audit_d_transitivity(cfg: &AuditConfig) -> Result<AuditReport, AuditError> {
    cfg.check()?;
    if !cfg.profile.regret.declared_convex() {
        return Err(AuditError::ConvexityRequired);
    }
    let mut report = AuditReport::new("d-transitivity", cfg.seed);
    let mut rng = rng_for(cfg.seed, 4);
    let span = cfg.outcome_range.1 - cfg.outcome_range.0;
    // margin below which a constructed premise is too thin to assert a
    // strict conclusion through floating point
    const PREMISE_MARGIN: f64 = 1e-9;
    for sample in 0..cfg.samples {
        report.samples += 1;
        let probs = gen_probs(&mut rng, cfg.max_states);
        let base = gen_vector(&mut rng, probs.len(), cfg.outcome_range, 0.25);
        // bump (or lower) the highest-probability known state
        let target = probs
            .iter()
            .enumerate()
            .filter(|&(i, _)| !base[i].is_unknown())
            .max_by(|a, b| a.1.partial_cmp(b.1).expect("probabilities are ordered"))
            .map(|(i, _)| i);
        let Some(target) = target else {
            report.skipped += 1;
            continue;
        };
        let delta = (0.1 + 0.4 * rng.random::<f64>()) * span;
        let other = gen_vector(&mut rng, probs.len(), cfg.outcome_range, 0.25);
        if sample % 2 == 0 {
            // f >=_SD g by construction, g >= h sampled: f > h expected
            let g = base;
            let mut f = g.clone();
            if let Outcome::Known(x) = g[target] {
                f[target] = Outcome::Known(x + delta);
            }
            let dominance = DominancePair::from_vectors(&cfg.profile, &probs, &f, &g)?;
            let psi_fg = psi_vectors(&cfg.profile, &probs, &f, &g)?;
            if !dominance.dominates_strictly() || psi_fg < PREMISE_MARGIN {
                report.skipped += 1;
                continue;
            }
            let h = other;
            let psi_gh = psi_vectors(&cfg.profile, &probs, &g, &h)?;
            if psi_gh < 0.0 {
                report.skipped += 1;
                continue;
            }
            let psi_fh = psi_vectors(&cfg.profile, &probs, &f, &h)?;
            if !(psi_fh > 0.0) {
                report.findings.push(Finding {
                    sample,
                    detail: format!(
                        "f>=SD g (psi={psi_fg}) and g>=h (psi={psi_gh}) but psi(f,h)={psi_fh}"
                    ),
                });
            }
        } else {
            // f >= g sampled, g >=_SD h by construction: f > h expected
            let g = base;
            let mut h = g.clone();
            if let Outcome::Known(x) = g[target] {
                h[target] = Outcome::Known(x - delta);
            }
            let dominance = DominancePair::from_vectors(&cfg.profile, &probs, &g, &h)?;
            let psi_gh = psi_vectors(&cfg.profile, &probs, &g, &h)?;
            if !dominance.dominates_strictly() || psi_gh < PREMISE_MARGIN {
                report.skipped += 1;
                continue;
            }
            let f = other;
            let psi_fg = psi_vectors(&cfg.profile, &probs, &f, &g)?;
            if psi_fg < 0.0 {
                report.skipped += 1;
                continue;
            }
            let psi_fh = psi_vectors(&cfg.profile, &probs, &f, &h)?;
            if !(psi_fh > 0.0) {
                report.findings.push(Finding {
                    sample,
                    detail: format!(
                        "f>=g (psi={psi_fg}) and g>=SD h (psi={psi_gh}) but psi(f,h)={psi_fh}"
                    ),
                });
            }
        }
    }
    Ok(report)
}

// ── trade-off consistency ───────────────────────────────────────────

/// Solve the three premises exactly, then require the conclusion to be
/// an indifference within 1e-9.
///
/// All four vectors share one unknown-state pattern (one common fear
/// factor); the pivotal state `i` and the balancing state `j` stay
/// known throughout. Constructions that leave the outcome range or fail
/// the root solve are skipped and counted.
pub fn audit_tradeoff_consistency(cfg: &AuditConfig) -> Result<AuditReport, AuditError> {
    cfg.check()?;
    let mut report = AuditReport::new("tradeoff-consistency", cfg.seed);
    let mut rng = rng_for(cfg.seed, 5);
    let (lo, hi) = cfg.outcome_range;
    let boundary = 3.0 * (lo.abs().max(hi.abs()) + 1.0);
    const TOL: f64 = 1e-9;
    'samples: for sample in 0..cfg.samples {
        report.samples += 1;
        let probs = gen_probs(&mut rng, cfg.max_states);
        // pivotal state i: highest probability; balancing state j: second
        let mut order: Vec<usize> = (0..probs.len()).collect();
        order.sort_by(|&a, &b| probs[b].partial_cmp(&probs[a]).expect("finite probs"));
        let i = order[0];
        let j = order[1];
        if probs[i] <= 0.0 || probs[j] <= 0.0 {
            report.skipped += 1;
            continue;
        }
        // one unknown pattern shared by all four vectors
        let pattern: Vec<bool> = (0..probs.len())
            .map(|s| s != i && s != j && rng.random::<f64>() < 0.2)
            .collect();
        let draw = |rng: &mut ChaCha8Rng| -> Vec<Outcome> {
            (0..probs.len())
                .map(|s| {
                    if pattern[s] {
                        Outcome::Unknown
                    } else {
                        Outcome::Known(gen_known(rng, (lo, hi)))
                    }
                })
                .collect()
        };
        let f = draw(&mut rng);
        let g = draw(&mut rng);
        let x = draw(&mut rng);
        let mut y = draw(&mut rng);
        let mass = vector_mass(&probs, &f);
        let v = cfg.profile.fear.eval(mass)?;
        if v <= 0.0 {
            report.skipped += 1;
            continue;
        }
        let u = &cfg.profile.utility;
        let q = &cfg.profile.regret;
        let adjusted = |outcome: Outcome| -> Result<f64, AuditError> {
            Ok(cfg
                .profile
                .adjusted_utility(outcome, mass, Interpretation::Money)?)
        };
        // off-pivot sums
        let mut s_fg = CompensatedSum::new();
        for s in 0..probs.len() {
            if s == i {
                continue;
            }
            s_fg.add(probs[s] * q.eval(adjusted(f[s])? - adjusted(g[s])?)?);
        }
        let s_fg = s_fg.value();
        let alpha = gen_known(&mut rng, (lo, hi));
        let gamma = gen_known(&mut rng, (lo, hi));
        // premise 1 and 2: alpha_i f ~ beta_i g and gamma_i f ~ delta_i g
        let z = match q.invert(-s_fg / probs[i]) {
            Ok(z) => z,
            Err(_) => {
                report.skipped += 1;
                continue;
            }
        };
        let solve_against = |anchor: f64| -> Option<f64> {
            let target_utility = (v * u.eval(anchor).ok()? - z) / v;
            let outcome = u.invert(target_utility).ok()?;
            (outcome.abs() <= boundary).then_some(outcome)
        };
        let Some(beta) = solve_against(alpha) else {
            report.skipped += 1;
            continue;
        };
        let Some(delta) = solve_against(gamma) else {
            report.skipped += 1;
            continue;
        };
        // premise 3: alpha_i x ~ beta_i y, balanced through y_j
        let mut s_xy_partial = CompensatedSum::new();
        for s in 0..probs.len() {
            if s == i || s == j {
                continue;
            }
            s_xy_partial.add(probs[s] * q.eval(adjusted(x[s])? - adjusted(y[s])?)?);
        }
        let d_j = match q.invert((s_fg - s_xy_partial.value()) / probs[j]) {
            Ok(d) => d,
            Err(_) => {
                report.skipped += 1;
                continue;
            }
        };
        let y_j_utility = (adjusted(x[j])? - d_j) / v;
        let y_j = match u.invert(y_j_utility) {
            Ok(out) if out.abs() <= boundary => out,
            _ => {
                report.skipped += 1;
                continue;
            }
        };
        y[j] = Outcome::Known(y_j);
        // re-verify the premises through the engine
        let substituted = |base: &[Outcome], outcome: f64| -> Vec<Outcome> {
            let mut v = base.to_vec();
            v[i] = Outcome::Known(outcome);
            v
        };
        let premises = [
            (substituted(&f, alpha), substituted(&g, beta)),
            (substituted(&f, gamma), substituted(&g, delta)),
            (substituted(&x, alpha), substituted(&y, beta)),
        ];
        for (a, b) in &premises {
            let psi = psi_vectors(&cfg.profile, &probs, a, b)?;
            if psi.abs() > TOL {
                report.skipped += 1;
                continue 'samples;
            }
        }
        // the solved premises force equal adjusted trade-offs
        let lhs = v * u.eval(alpha)? - v * u.eval(beta)?;
        let rhs = v * u.eval(gamma)? - v * u.eval(delta)?;
        if (lhs - rhs).abs() > TOL {
            report.findings.push(Finding {
                sample,
                detail: format!("adjusted trade-offs differ: {lhs} vs {rhs}"),
            });
            continue;
        }
        // conclusion: gamma_i x ~ delta_i y
        let conclusion = psi_vectors(
            &cfg.profile,
            &probs,
            &substituted(&x, gamma),
            &substituted(&y, delta),
        )?;
        if conclusion.abs() > TOL {
            report.findings.push(Finding {
                sample,
                detail: format!("conclusion not indifferent: psi={conclusion}"),
            });
        }
    }
    Ok(report)
}

// ── continuity (heuristic) ──────────────────────────────────────────

/// A 1e-9 nudge of one known outcome must not flip the verdict between
/// the two strict classes while |Ψ| stays above 1e-6 on both sides.
/// Heuristic: findings are warnings.
pub fn audit_continuity(cfg: &AuditConfig) -> Result<AuditReport, AuditError> {
    cfg.check()?;
    let mut report = AuditReport::new("continuity-heuristic", cfg.seed);
    report.heuristic = true;
    let mut rng = rng_for(cfg.seed, 6);
    const NUDGE: f64 = 1e-9;
    const PSI_GAP: f64 = 1e-6;
    for sample in 0..cfg.samples {
        report.samples += 1;
        let probs = gen_probs(&mut rng, cfg.max_states);
        let f = gen_vector(&mut rng, probs.len(), cfg.outcome_range, 0.25);
        let g = gen_vector(&mut rng, probs.len(), cfg.outcome_range, 0.25);
        let Some(idx) = f.iter().position(|o| !o.is_unknown()) else {
            report.skipped += 1;
            continue;
        };
        let mut nudged = f.clone();
        if let Outcome::Known(x) = f[idx] {
            nudged[idx] = Outcome::Known(x + NUDGE);
        }
        let psi0 = psi_vectors(&cfg.profile, &probs, &f, &g)?;
        let psi1 = psi_vectors(&cfg.profile, &probs, &nudged, &g)?;
        let r0 = cfg.profile.classify(psi0).relation;
        let r1 = cfg.profile.classify(psi1).relation;
        let strict_jump = matches!(
            (r0, r1),
            (Relation::FStrict, Relation::GStrict) | (Relation::GStrict, Relation::FStrict)
        );
        if strict_jump && psi0.abs().min(psi1.abs()) > PSI_GAP {
            report.findings.push(Finding {
                sample,
                detail: format!("verdict jumped across a 1e-9 nudge: psi {psi0} -> {psi1}"),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{FearFn, RegretQ, UtilityFn};
    use crate::prospect::Prospect;

    fn small_cfg(profile: AgentProfile) -> AuditConfig {
        AuditConfig::new(profile).with_samples(400).with_seed(7)
    }

    #[test]
    fn default_profile_passes_every_audit() {
        let run = run_all(&small_cfg(AgentProfile::default())).unwrap();
        assert_eq!(run.counterexamples(), 0, "{run}");
        assert_eq!(run.warnings(), 0, "{run}");
    }

    #[test]
    fn linear_regret_also_passes() {
        let profile = AgentProfile::new(
            UtilityFn::identity(),
            FearFn::linear(),
            RegretQ::linear(),
        );
        let run = run_all(&small_cfg(profile)).unwrap();
        assert_eq!(run.counterexamples(), 0, "{run}");
    }

    #[test]
    fn derived_and_power_utility_profile_passes() {
        let profile = AgentProfile::new(
            UtilityFn::power(0.5).unwrap(),
            FearFn::sin_poly(2.0).unwrap(),
            RegretQ::from_r(crate::functions::RegretR::power_odd(3, 0.5).unwrap()),
        );
        let run = run_all(&small_cfg(profile)).unwrap();
        assert_eq!(run.counterexamples(), 0, "{run}");
    }

    #[test]
    fn non_skew_regret_is_detected() {
        let profile = AgentProfile {
            regret: RegretQ::biased(0.05).unwrap(),
            ..AgentProfile::default()
        };
        let run = run_all(&small_cfg(profile)).unwrap();
        assert!(run.counterexamples() > 0);
        let compliance = &run.reports[0];
        assert_eq!(compliance.name, "profile-compliance");
        assert!(!compliance.passed());
    }

    #[test]
    fn runs_are_deterministic_per_seed() {
        let cfg = small_cfg(AgentProfile::default());
        let a = run_all(&cfg).unwrap();
        let b = run_all(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn different_seeds_sample_differently() {
        let base = small_cfg(AgentProfile::default());
        let a = run_all(&base).unwrap();
        let b = run_all(&base.clone().with_seed(8)).unwrap();
        // same verdicts, different tallies
        assert_eq!(a.counterexamples(), b.counterexamples());
        assert_ne!(
            a.reports[1].notes, b.reports[1].notes,
            "weak-preference tallies should move with the seed"
        );
    }

    #[test]
    fn align_flags_a_dominating_pair() {
        // Independent prospects dominate statewise on the joint matrix
        // only when f's worst outcome beats g's best.
        let profile = AgentProfile::default();
        let f = Prospect::new(
            vec![(Outcome::Known(0.6), 0.5), (Outcome::Known(0.55), 0.5)],
            Interpretation::Money,
        )
        .unwrap();
        let g = Prospect::new(
            vec![(Outcome::Known(0.5), 0.5), (Outcome::Known(0.3), 0.5)],
            Interpretation::Money,
        )
        .unwrap();
        let pair = DominancePair::align(&profile, &f, &g).unwrap();
        assert!(pair.dominates_weakly());
        assert!(pair.dominates_strictly());
        let psi = profile.psi_modified(&f, &g).unwrap();
        assert!(psi > 0.0);
    }

    #[test]
    fn null_state_does_not_make_dominance_strict() {
        let profile = AgentProfile::default();
        let probs = vec![1.0, 0.0];
        let f = vec![Outcome::Known(0.5), Outcome::Known(0.9)];
        let g = vec![Outcome::Known(0.5), Outcome::Known(0.1)];
        let pair = DominancePair::from_vectors(&profile, &probs, &f, &g).unwrap();
        assert!(pair.dominates_weakly());
        assert!(!pair.dominates_strictly());
        let psi = psi_vectors(&profile, &probs, &f, &g).unwrap();
        assert_eq!(psi, 0.0);
    }

    #[test]
    fn findings_csv_lists_counterexamples() {
        let profile = AgentProfile {
            regret: RegretQ::biased(-0.2).unwrap(),
            ..AgentProfile::default()
        };
        let run = run_all(&small_cfg(profile)).unwrap();
        let csv = run.findings_csv();
        assert!(csv.starts_with("audit,sample,seed,detail\n"));
        assert!(csv.lines().count() > 1);
    }

    #[test]
    fn config_validation() {
        let mut cfg = AuditConfig::new(AgentProfile::default());
        cfg.samples = 0;
        assert!(run_all(&cfg).is_err());
        let mut cfg = AuditConfig::new(AgentProfile::default());
        cfg.outcome_range = (1.0, 1.0);
        assert!(run_all(&cfg).is_err());
    }
}
