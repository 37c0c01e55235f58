//! Utility, fear, and regret function families.
//!
//! Each family carries its parameters and validates them at construction:
//!
//! * [`UtilityFn`] — strictly increasing valuation of known outcomes.
//! * [`FearFn`] — strictly decreasing map from a prospect's unknown mass
//!   to a multiplier in `[0, 1]`, pinned to `v(0) = 1` and `v(1) = 0`.
//! * [`RegretR`] — rejoice/regret adjustment with `R(0) = 0`, from which
//!   a [`RegretQ`] can be derived as `Q(x) = x + R(x) - R(-x)`.
//! * [`RegretQ`] — strictly increasing, skew-symmetric comparison of
//!   utility differences; the sign of its probability-weighted sum
//!   decides the preference.
//!
//! Every family has a textual registry name (`u:power:0.5`, `v:poly:1`,
//! `q:power:3`, `r:power:3:0.5`) used by the CLI and config files; the
//! `FromStr`/`Display` pair below round-trips them.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionError {
    #[error("non-finite input {input}")]
    NonFiniteInput { input: f64 },
    #[error("input {input} outside domain [{lo}, {hi}]")]
    DomainViolation { input: f64, lo: f64, hi: f64 },
    #[error("invalid parameter for {family}: {reason}")]
    InvalidParameter {
        family: &'static str,
        reason: String,
    },
    #[error("unknown function spec `{spec}`")]
    UnknownSpec { spec: String },
    #[error("root solve failed: {reason}")]
    RootSolveFailed { reason: String },
}

fn require_finite(x: f64) -> Result<f64, FunctionError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(FunctionError::NonFiniteInput { input: x })
    }
}

fn invalid(family: &'static str, reason: impl Into<String>) -> FunctionError {
    FunctionError::InvalidParameter {
        family,
        reason: reason.into(),
    }
}

// ── choiceless utility ──────────────────────────────────────────────

/// Strictly increasing continuous valuation of known outcomes.
///
/// The power family is applied sign-symmetrically, `sign(x)·|x|^a`, so it
/// stays strictly increasing on losses and keeps `u(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UtilityFn {
    Identity,
    Affine { slope: f64, intercept: f64 },
    Power { exponent: f64 },
}

impl UtilityFn {
    pub fn identity() -> Self {
        UtilityFn::Identity
    }

    pub fn affine(slope: f64, intercept: f64) -> Result<Self, FunctionError> {
        if !slope.is_finite() || slope <= 0.0 {
            return Err(invalid("u:affine", format!("slope must be > 0, got {slope}")));
        }
        if !intercept.is_finite() {
            return Err(invalid("u:affine", "intercept must be finite"));
        }
        Ok(UtilityFn::Affine { slope, intercept })
    }

    pub fn power(exponent: f64) -> Result<Self, FunctionError> {
        if !exponent.is_finite() || exponent <= 0.0 {
            return Err(invalid(
                "u:power",
                format!("exponent must be > 0, got {exponent}"),
            ));
        }
        Ok(UtilityFn::Power { exponent })
    }

    pub fn eval(&self, x: f64) -> Result<f64, FunctionError> {
        let x = require_finite(x)?;
        Ok(match *self {
            UtilityFn::Identity => x,
            UtilityFn::Affine { slope, intercept } => slope * x + intercept,
            UtilityFn::Power { exponent } => x.signum() * x.abs().powf(exponent),
        })
    }

    /// Inverse of `eval`; exists in closed form for every family.
    pub fn invert(&self, y: f64) -> Result<f64, FunctionError> {
        let y = require_finite(y)?;
        Ok(match *self {
            UtilityFn::Identity => y,
            UtilityFn::Affine { slope, intercept } => (y - intercept) / slope,
            UtilityFn::Power { exponent } => y.signum() * y.abs().powf(1.0 / exponent),
        })
    }
}

impl fmt::Display for UtilityFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            UtilityFn::Identity => write!(f, "u:identity"),
            UtilityFn::Affine { slope, intercept } => write!(f, "u:affine:{slope}:{intercept}"),
            UtilityFn::Power { exponent } => write!(f, "u:power:{exponent}"),
        }
    }
}

// ── fear of the unknown ─────────────────────────────────────────────

/// Strictly decreasing fear weight on a prospect's unknown mass.
///
/// `poly(a)` is `1 - x^a`; `sin(a)` is `sin((π/2)(1 - x^a))`. Both hit
/// the endpoint conditions `v(0) = 1`, `v(1) = 0` exactly and stay in
/// `[0, 1]` on the unit interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FearFn {
    Poly { exponent: f64 },
    SinPoly { exponent: f64 },
}

impl FearFn {
    /// The linear fear function `v(x) = 1 - x`.
    pub fn linear() -> Self {
        FearFn::Poly { exponent: 1.0 }
    }

    pub fn poly(exponent: f64) -> Result<Self, FunctionError> {
        if !exponent.is_finite() || exponent <= 0.0 {
            return Err(invalid(
                "v:poly",
                format!("exponent must be > 0, got {exponent}"),
            ));
        }
        Ok(FearFn::Poly { exponent })
    }

    pub fn sin_poly(exponent: f64) -> Result<Self, FunctionError> {
        if !exponent.is_finite() || exponent <= 0.0 {
            return Err(invalid(
                "v:sin",
                format!("exponent must be > 0, got {exponent}"),
            ));
        }
        Ok(FearFn::SinPoly { exponent })
    }

    pub fn eval(&self, p_u: f64) -> Result<f64, FunctionError> {
        if !(0.0..=1.0).contains(&p_u) {
            return Err(FunctionError::DomainViolation {
                input: p_u,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(match *self {
            // exponent 1 avoids powf so the linear family is exact at
            // every representable probability, not just the endpoints
            FearFn::Poly { exponent } if exponent == 1.0 => 1.0 - p_u,
            FearFn::Poly { exponent } => 1.0 - p_u.powf(exponent),
            FearFn::SinPoly { exponent } => {
                (std::f64::consts::FRAC_PI_2 * (1.0 - p_u.powf(exponent))).sin()
            }
        })
    }
}

impl fmt::Display for FearFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FearFn::Poly { exponent } => write!(f, "v:poly:{exponent}"),
            FearFn::SinPoly { exponent } => write!(f, "v:sin:{exponent}"),
        }
    }
}

// ── rejoice/regret adjustment R ─────────────────────────────────────

/// The additive rejoice/regret term `R` with `R(0) = 0`.
///
/// `power_odd(k, β)` is `R(x) = β·x^k` for odd `k`; `β = 0` degenerates
/// to the zero function (no sensitivity to regret).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegretR {
    Zero,
    PowerOdd { exponent: u32, scale: f64 },
}

impl RegretR {
    pub fn zero() -> Self {
        RegretR::Zero
    }

    pub fn power_odd(exponent: u32, scale: f64) -> Result<Self, FunctionError> {
        if exponent == 0 || exponent % 2 == 0 {
            return Err(invalid(
                "r:power",
                format!("exponent must be odd and >= 1, got {exponent}"),
            ));
        }
        if !scale.is_finite() || scale < 0.0 {
            return Err(invalid("r:power", format!("scale must be >= 0, got {scale}")));
        }
        Ok(RegretR::PowerOdd { exponent, scale })
    }

    pub fn eval(&self, x: f64) -> Result<f64, FunctionError> {
        let x = require_finite(x)?;
        Ok(match *self {
            RegretR::Zero => 0.0,
            RegretR::PowerOdd { exponent, scale } => scale * x.powi(exponent as i32),
        })
    }
}

impl fmt::Display for RegretR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RegretR::Zero => write!(f, "r:zero"),
            RegretR::PowerOdd { exponent, scale } => write!(f, "r:power:{exponent}:{scale}"),
        }
    }
}

// ── regret comparison Q ─────────────────────────────────────────────

/// Skew-symmetric, strictly increasing comparison of utility differences.
///
/// `Biased` deliberately violates skew symmetry (`Q(x) = x + c`); it
/// exists as a negative control so the axiom audit can demonstrate that
/// it detects a non-compliant profile. It is not a model of preference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegretQ {
    PowerOdd { exponent: u32 },
    Linear,
    FromR(RegretR),
    Biased { offset: f64 },
}

impl RegretQ {
    pub fn power_odd(exponent: u32) -> Result<Self, FunctionError> {
        if exponent == 0 || exponent % 2 == 0 {
            return Err(invalid(
                "q:power",
                format!("exponent must be odd and >= 1, got {exponent}"),
            ));
        }
        Ok(RegretQ::PowerOdd { exponent })
    }

    pub fn linear() -> Self {
        RegretQ::Linear
    }

    /// Derive `Q(x) = x + R(x) - R(-x)` from a rejoice/regret term.
    pub fn from_r(r: RegretR) -> Self {
        RegretQ::FromR(r)
    }

    pub fn biased(offset: f64) -> Result<Self, FunctionError> {
        if !offset.is_finite() {
            return Err(invalid("q:biased", "offset must be finite"));
        }
        Ok(RegretQ::Biased { offset })
    }

    pub fn eval(&self, xi: f64) -> Result<f64, FunctionError> {
        let xi = require_finite(xi)?;
        Ok(match *self {
            RegretQ::PowerOdd { exponent } => xi.powi(exponent as i32),
            RegretQ::Linear => xi,
            RegretQ::FromR(r) => xi + r.eval(xi)? - r.eval(-xi)?,
            RegretQ::Biased { offset } => xi + offset,
        })
    }

    /// Whether this family is declared convex on positive arguments
    /// (regret aversion). The audit verifies the declaration by sampling
    /// second differences rather than trusting it.
    pub fn declared_convex(&self) -> bool {
        match *self {
            RegretQ::PowerOdd { .. } | RegretQ::Linear | RegretQ::Biased { .. } => true,
            RegretQ::FromR(_) => true,
        }
    }

    /// Solve `Q(z) = target` by bisection on the strictly increasing `Q`.
    ///
    /// The bracket is grown geometrically from `[-1, 1]` until it
    /// straddles the target, then bisected 200 times.
    pub fn invert(&self, target: f64) -> Result<f64, FunctionError> {
        let target = require_finite(target)?;
        let mut hi = 1.0f64;
        for _ in 0..64 {
            if self.eval(hi)? >= target && self.eval(-hi)? <= target {
                break;
            }
            hi *= 2.0;
        }
        let (mut lo, mut hi) = (-hi, hi);
        if self.eval(lo)? > target || self.eval(hi)? < target {
            return Err(FunctionError::RootSolveFailed {
                reason: format!("no bracket for target {target}"),
            });
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eval(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

impl fmt::Display for RegretQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RegretQ::PowerOdd { exponent } => write!(f, "q:power:{exponent}"),
            RegretQ::Linear => write!(f, "q:linear"),
            RegretQ::FromR(r) => write!(f, "q:from-{r}"),
            RegretQ::Biased { offset } => write!(f, "q:biased:{offset}"),
        }
    }
}

// ── registry parsing ────────────────────────────────────────────────

fn parse_param(spec: &str, token: &str) -> Result<f64, FunctionError> {
    token.parse::<f64>().map_err(|_| FunctionError::UnknownSpec {
        spec: spec.to_string(),
    })
}

impl FromStr for UtilityFn {
    type Err = FunctionError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            ["u", "identity"] => Ok(UtilityFn::Identity),
            ["u", "affine", a, c] => {
                UtilityFn::affine(parse_param(spec, a)?, parse_param(spec, c)?)
            }
            ["u", "power", a] => UtilityFn::power(parse_param(spec, a)?),
            _ => Err(FunctionError::UnknownSpec {
                spec: spec.to_string(),
            }),
        }
    }
}

impl FromStr for FearFn {
    type Err = FunctionError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            ["v", "poly", a] => FearFn::poly(parse_param(spec, a)?),
            ["v", "sin", a] => FearFn::sin_poly(parse_param(spec, a)?),
            _ => Err(FunctionError::UnknownSpec {
                spec: spec.to_string(),
            }),
        }
    }
}

impl FromStr for RegretR {
    type Err = FunctionError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            ["r", "zero"] => Ok(RegretR::Zero),
            ["r", "power", k, beta] => {
                let k: u32 = k.parse().map_err(|_| FunctionError::UnknownSpec {
                    spec: spec.to_string(),
                })?;
                RegretR::power_odd(k, parse_param(spec, beta)?)
            }
            _ => Err(FunctionError::UnknownSpec {
                spec: spec.to_string(),
            }),
        }
    }
}

impl FromStr for RegretQ {
    type Err = FunctionError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            ["q", "power", k] => {
                let k: u32 = k.parse().map_err(|_| FunctionError::UnknownSpec {
                    spec: spec.to_string(),
                })?;
                RegretQ::power_odd(k)
            }
            ["q", "linear"] => Ok(RegretQ::Linear),
            ["q", "biased", c] => RegretQ::biased(parse_param(spec, c)?),
            _ => Err(FunctionError::UnknownSpec {
                spec: spec.to_string(),
            }),
        }
    }
}
