//! Problem definitions shared by the radial and lattice solvers.
//!
//! An instance is `div(a(|x|) |∇u|^{p-2} ∇u) = h(|x|) u_+^m`, with `a` the
//! coefficient weight and `h` the source weight. Both weights are radial and
//! factor near the origin as `r^e · smooth(r)`; the solvers integrate the
//! power part exactly and only sample the smooth part.

use serde::{Deserialize, Serialize};

use crate::closed_forms::ExponentParams;
use crate::error::{domain, Result};

/// Radial weight `r ↦ w(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    /// `r^exponent`.
    Power { exponent: f64 },
    /// Matukuma weight `1 / (1 + r^sigma)`.
    Matukuma { sigma: f64 },
    /// Batt–Faltenbacher–Horst weight `r^{sigma-p'} / (1 + r^{p'})^{sigma/p'}`.
    Bfh { sigma: f64 },
    /// `r^l (r^s / (1 + r^s))^{sigma/s}`.
    General64 { l: f64, s: f64, sigma: f64 },
}

impl WeightSpec {
    pub const fn power(exponent: f64) -> Self {
        WeightSpec::Power { exponent }
    }

    pub const fn identity() -> Self {
        WeightSpec::Power { exponent: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64, name: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                domain(format!("weight parameter {name} must be finite"))
            }
        };
        match *self {
            WeightSpec::Power { exponent } => finite(exponent, "exponent"),
            WeightSpec::Matukuma { sigma } | WeightSpec::Bfh { sigma } => {
                finite(sigma, "sigma")?;
                if sigma > 0.0 {
                    Ok(())
                } else {
                    domain(format!("weight sigma must be positive, got {sigma}"))
                }
            }
            WeightSpec::General64 { l, s, sigma } => {
                finite(l, "l")?;
                if s > 0.0 && sigma > 0.0 && s.is_finite() && sigma.is_finite() {
                    Ok(())
                } else {
                    domain(format!(
                        "weight needs s > 0 and sigma > 0, got s = {s}, sigma = {sigma}"
                    ))
                }
            }
        }
    }

    /// Weight value at radius `r`; `p` is only read by the BFH variant.
    pub fn value(&self, r: f64, p: f64) -> f64 {
        let e = self.leading_exponent(p);
        if r == 0.0 {
            return if e == 0.0 {
                self.smooth_factor(0.0, p)
            } else if e > 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
        }
        r.powf(e) * self.smooth_factor(r, p)
    }

    /// Exponent `e` of the factorisation `w(r) = r^e · smooth(r)` with `smooth(0) = 1`.
    pub fn leading_exponent(&self, p: f64) -> f64 {
        match *self {
            WeightSpec::Power { exponent } => exponent,
            WeightSpec::Matukuma { .. } => 0.0,
            WeightSpec::Bfh { sigma } => sigma - conjugate(p),
            WeightSpec::General64 { l, sigma, .. } => l + sigma,
        }
    }

    /// The smooth factor `w(r) / r^e`, bounded and positive on `[0, ∞)`.
    pub fn smooth_factor(&self, r: f64, p: f64) -> f64 {
        match *self {
            WeightSpec::Power { .. } => 1.0,
            WeightSpec::Matukuma { sigma } => 1.0 / (1.0 + r.powf(sigma)),
            WeightSpec::Bfh { sigma } => {
                let pc = conjugate(p);
                (1.0 + r.powf(pc)).powf(-sigma / pc)
            }
            WeightSpec::General64 { s, sigma, .. } => (1.0 + r.powf(s)).powf(-sigma / s),
        }
    }
}

/// Hölder conjugate `p' = p / (p - 1)`.
pub fn conjugate(p: f64) -> f64 {
    1.0 + 1.0 / (p - 1.0)
}

/// Source `f(r, u) = weight(r) · u_+^m`, with `0^0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub weight: WeightSpec,
    pub m: f64,
    /// Lower bound `c0` in `c0 |x|^alpha <= f`, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound_c0: Option<f64>,
}

impl SourceSpec {
    pub fn power(alpha: f64, m: f64) -> Self {
        SourceSpec {
            weight: WeightSpec::power(alpha),
            m,
            lower_bound_c0: None,
        }
    }

    /// `u_+^m` with the convention `0^0 = 1`.
    #[inline]
    pub fn nonlinearity(&self, u: f64) -> f64 {
        positive_power(u, self.m)
    }
}

#[inline]
pub(crate) fn positive_power(u: f64, m: f64) -> f64 {
    if m == 0.0 {
        1.0
    } else if u > 0.0 {
        u.powf(m)
    } else {
        0.0
    }
}

/// One radially structured PDE instance in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub n: usize,
    pub p: f64,
    pub coefficient: WeightSpec,
    pub source: SourceSpec,
}

impl ProblemSpec {
    /// `div(|x|^k |∇u|^{p-2} ∇u) = |x|^alpha u_+^m`.
    pub fn power(n: usize, p: f64, m: f64, alpha: f64, k: f64) -> Self {
        ProblemSpec {
            n,
            p,
            coefficient: WeightSpec::power(k),
            source: SourceSpec::power(alpha, m),
        }
    }

    pub fn m(&self) -> f64 {
        self.source.m
    }

    /// Leading exponent of the source weight (plays the role of alpha).
    pub fn alpha(&self) -> f64 {
        self.source.weight.leading_exponent(self.p)
    }

    /// Leading exponent of the coefficient weight (plays the role of k).
    pub fn k(&self) -> f64 {
        self.coefficient.leading_exponent(self.p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return domain("dimension n must be at least 1");
        }
        if !(self.p > 1.0 && self.p.is_finite()) {
            return domain(format!("p must be finite and > 1, got {}", self.p));
        }
        let m = self.source.m;
        if !(m >= 0.0 && m.is_finite()) {
            return domain(format!("m must be finite and >= 0, got {m}"));
        }
        self.coefficient.validate()?;
        self.source.weight.validate()?;
        if let Some(c0) = self.source.lower_bound_c0 {
            if !(c0 >= 0.0) {
                return domain(format!("c0 must be >= 0, got {c0}"));
            }
        }
        Ok(())
    }

    /// True when the degenerate zero data admit the nontrivial branch `c r^β̂`.
    pub fn in_dead_core_regime(&self) -> bool {
        let m = self.m();
        m > 0.0 && m < self.p - 1.0 && self.alpha() + 1.0 + m - self.k() > 0.0
    }

    /// Exponent data seen by the closed forms (leading powers of both weights).
    pub fn exponent_params(&self, alpha_h: f64) -> ExponentParams {
        ExponentParams {
            n: self.n,
            p: self.p,
            m: self.m(),
            alpha: self.alpha(),
            k: self.k(),
            alpha_h,
        }
    }

    /// `r^{n-1} a(r)`, the factor relating flux and `Φ(u')`.
    #[inline]
    pub(crate) fn flux_scale(&self, r: f64) -> f64 {
        r.powi(self.n as i32 - 1) * self.coefficient.value(r, self.p)
    }
}

/// Source term of the planar solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Source2D {
    /// `h(|x|) u_+^m`.
    Radial(SourceSpec),
    /// `|x_axis|^alpha`, independent of `u`.
    AxisPower { axis: usize, alpha: f64 },
    /// `f = 0`.
    Zero,
}

impl Source2D {
    pub fn m(&self) -> f64 {
        match self {
            Source2D::Radial(s) => s.m,
            Source2D::AxisPower { .. } | Source2D::Zero => 0.0,
        }
    }

    /// Weight multiplying `u_+^m` at the planar point `(x, y)`.
    pub fn weight_at(&self, x: f64, y: f64, p: f64) -> f64 {
        match self {
            Source2D::Radial(s) => s.weight.value(x.hypot(y), p),
            Source2D::AxisPower { axis, alpha } => {
                let t = if *axis == 0 { x } else { y };
                if t == 0.0 {
                    if *alpha == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    t.abs().powf(*alpha)
                }
            }
            Source2D::Zero => 0.0,
        }
    }
}

/// Planar instance `div((|∇u|^2 + ε^2)^{(p-2)/2} A(|x|) ∇u) = f` on the unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec2D {
    pub p: f64,
    pub coefficient: WeightSpec,
    pub source: Source2D,
}

impl ProblemSpec2D {
    pub fn power(p: f64, m: f64, alpha: f64) -> Self {
        ProblemSpec2D {
            p,
            coefficient: WeightSpec::identity(),
            source: Source2D::Radial(SourceSpec::power(alpha, m)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return domain(format!("p must be finite and > 1, got {}", self.p));
        }
        self.coefficient.validate()?;
        match self.source {
            Source2D::Radial(s) => {
                s.weight.validate()?;
                if !(s.m >= 0.0 && s.m.is_finite()) {
                    return domain(format!("m must be finite and >= 0, got {}", s.m));
                }
            }
            Source2D::AxisPower { axis, alpha } => {
                if axis > 1 {
                    return domain(format!("axis must be 0 or 1 in the plane, got {axis}"));
                }
                if !(alpha >= 0.0 && alpha.is_finite()) {
                    return domain(format!("axis source exponent must be >= 0, got {alpha}"));
                }
            }
            Source2D::Zero => {}
        }
        Ok(())
    }
}
