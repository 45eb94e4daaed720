//! Explicit exponents, constants and exact solutions.
//!
//! Every derivative in this module is taken by the power rule on
//! `(coefficient, exponent)` pairs, so a vanishing residual certifies the
//! formula itself rather than a difference quotient.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Exponent data of `div(|x|^k |∇u|^{p-2} ∇u) = |x|^alpha u_+^m` in `R^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentParams {
    pub n: usize,
    pub p: f64,
    #[serde(default)]
    pub m: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub k: f64,
    /// Gradient Hölder exponent of the homogeneous problem, in `(0, 1]`.
    pub alpha_h: f64,
}

impl ExponentParams {
    /// `k = 0` and the default `alpha_h` (1 for `p = 2`, 0.9 otherwise).
    pub fn new(n: usize, p: f64, m: f64, alpha: f64) -> Self {
        ExponentParams {
            n,
            p,
            m,
            alpha,
            k: 0.0,
            alpha_h: default_alpha_h(p),
        }
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    pub fn with_alpha_h(mut self, alpha_h: f64) -> Self {
        self.alpha_h = alpha_h;
        self
    }

    /// `p - 1 - m`.
    pub fn gap(&self) -> f64 {
        self.p - 1.0 - self.m
    }

    fn check_basic(&self) -> Result<()> {
        if self.n < 2 {
            return domain(format!("dimension must be >= 2, got {}", self.n));
        }
        if !(self.p > 1.0 && self.p.is_finite()) {
            return domain(format!("p must be finite and > 1, got {}", self.p));
        }
        if !(self.m >= 0.0 && self.m.is_finite()) {
            return domain(format!("m must be finite and >= 0, got {}", self.m));
        }
        if !self.alpha.is_finite() || !self.k.is_finite() {
            return domain("alpha and k must be finite");
        }
        if !(self.alpha_h > 0.0 && self.alpha_h <= 1.0) {
            return domain(format!("alpha_H must lie in (0, 1], got {}", self.alpha_h));
        }
        Ok(())
    }

    /// Checks `m < p - 1` and `alpha + 1 + m - k > 0`.
    pub fn validate(&self) -> Result<()> {
        self.check_basic()?;
        if self.gap() <= 0.0 {
            return Err(Error::BorderlineRegime { p: self.p, m: self.m });
        }
        if self.alpha + 1.0 + self.m - self.k <= 0.0 {
            return domain(format!(
                "need alpha + 1 + m - k > 0, got {}",
                self.alpha + 1.0 + self.m - self.k
            ));
        }
        Ok(())
    }

    fn require_unweighted(&self) -> Result<()> {
        if self.k != 0.0 {
            return domain(format!("formula is stated for k = 0, got k = {}", self.k));
        }
        Ok(())
    }
}

pub fn default_alpha_h(p: f64) -> f64 {
    if p == 2.0 {
        1.0
    } else {
        0.9
    }
}

/// Sharp gradient Hölder exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpExponent {
    pub beta: f64,
    /// True when `alpha_H` realises the minimum. The bound is then an open
    /// supremum: every exponent below `beta` is attained, `beta` itself need not be.
    pub limited_by_alpha_h: bool,
}

/// `min(alpha_H^-, (alpha + 1) min(1, 1/(p-1)))`. `m` and `k` are ignored.
pub fn sharp_exponent(params: &ExponentParams) -> Result<SharpExponent> {
    params.check_basic()?;
    if params.alpha <= -1.0 {
        return domain(format!("need alpha > -1, got {}", params.alpha));
    }
    let source_branch = (params.alpha + 1.0) * (1.0f64).min(1.0 / (params.p - 1.0));
    let limited = params.alpha_h <= source_branch;
    Ok(SharpExponent {
        beta: params.alpha_h.min(source_branch),
        limited_by_alpha_h: limited,
    })
}

/// Growth exponent `β̂ = 1 + (1 + alpha + m - k)/(p - 1 - m)` at extremum points.
pub fn growth_exponent(params: &ExponentParams) -> Result<f64> {
    params.validate()?;
    Ok(1.0 + (1.0 + params.alpha + params.m - params.k) / params.gap())
}

/// Regularity class at a critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regularity {
    C1Beta,
    C11,
    C2,
}

/// Tolerance for the `alpha = p - 2(1 + m)` equality case.
const TRICHOTOMY_TIE: f64 = 1e-12;

pub fn regularity_trichotomy(params: &ExponentParams) -> Result<Regularity> {
    params.validate()?;
    params.require_unweighted()?;
    let threshold = params.p - 2.0 * (1.0 + params.m);
    let scale = 1.0f64.max(threshold.abs());
    Ok(if (params.alpha - threshold).abs() <= TRICHOTOMY_TIE * scale {
        Regularity::C11
    } else if params.alpha < threshold {
        Regularity::C1Beta
    } else {
        Regularity::C2
    })
}

/// `u(r) = coefficient · r^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub coefficient: f64,
    pub exponent: f64,
}

impl RadialProfile {
    pub fn new(coefficient: f64, exponent: f64) -> Result<Self> {
        if !(coefficient >= 0.0 && coefficient.is_finite()) {
            return domain(format!(
                "profile coefficient must be finite and >= 0, got {coefficient}"
            ));
        }
        if !(exponent >= 0.0 && exponent.is_finite()) {
            return domain(format!("profile exponent must be finite and >= 0, got {exponent}"));
        }
        Ok(RadialProfile { coefficient, exponent })
    }

    pub fn value(&self, r: f64) -> f64 {
        if self.exponent == 0.0 {
            self.coefficient
        } else if r == 0.0 {
            0.0
        } else {
            self.coefficient * r.powf(self.exponent)
        }
    }

    /// `coefficient · exponent · r^{exponent-1}`.
    pub fn derivative(&self, r: f64) -> f64 {
        if self.exponent == 0.0 || self.coefficient == 0.0 {
            0.0
        } else {
            self.coefficient * self.exponent * r.powf(self.exponent - 1.0)
        }
    }

    /// `λ^{-scaling} u(λ r)`, again a power profile.
    pub fn rescaled(&self, lambda: f64, scaling: f64) -> RadialProfile {
        RadialProfile {
            coefficient: self.coefficient * lambda.powf(self.exponent - scaling),
            exponent: self.exponent,
        }
    }
}

/// `d/dr(r^k Φ(u')) + (n-1)/r · r^k Φ(u')` for `u = c r^e`, by the power rule.
///
/// `dim` may be 1, which gives the one-dimensional operator `(Φ(u'))'`.
fn power_flux_divergence(coefficient: f64, exponent: f64, p: f64, k: f64, dim: f64, r: f64) -> f64 {
    let slope = coefficient * exponent;
    if slope == 0.0 {
        return 0.0;
    }
    // r^k Φ(u') = amp · r^q
    let amp = slope.signum() * slope.abs().powf(p - 1.0);
    let q = k + (exponent - 1.0) * (p - 1.0);
    amp * (q + dim - 1.0) * r.powf(q - 1.0)
}

/// Exact nonnegative entire solution `c r^β̂` of
/// `div(|x|^k |∇u|^{p-2}∇u) = |x|^alpha u_+^m`.
///
/// For `k = 0` the coefficient comes from the explicit formula shared with
/// [`liouville_threshold`]; otherwise it is `C^{-1/(p-1-m)}` with `C` from
/// [`matukuma_constant`].
pub fn radial_model_solution(params: &ExponentParams) -> Result<RadialProfile> {
    let beta = growth_exponent(params)?;
    let coefficient = if params.k == 0.0 {
        threshold_formula(params)
    } else {
        let c = matukuma_constant(params.n, params.p, beta, params.k)?;
        c.powf(-1.0 / params.gap())
    };
    RadialProfile::new(coefficient, beta)
}

/// `β^{p-1} [β(p-1) + k + n - p]`.
pub fn matukuma_constant(n: usize, p: f64, beta: f64, k: f64) -> Result<f64> {
    let bracket = beta * (p - 1.0) + k + n as f64 - p;
    if !(bracket > 0.0) {
        return domain(format!("beta(p-1) + k + n - p must be positive, got {bracket}"));
    }
    if !(beta > 0.0) {
        return domain(format!("beta must be positive, got {beta}"));
    }
    Ok(beta.powf(p - 1.0) * bracket)
}

fn threshold_formula(params: &ExponentParams) -> f64 {
    let ExponentParams { n, p, m, alpha, .. } = *params;
    let gap = p - 1.0 - m;
    let denom = (1.0 + alpha + m) * (p - 1.0) + (n as f64 - 1.0) * gap;
    (gap / denom).powf(1.0 / gap) * (gap / (p + alpha)).powf((p - 1.0) / gap)
}

/// Liouville threshold `τ(n, p, m, alpha)`.
pub fn liouville_threshold(params: &ExponentParams) -> Result<f64> {
    params.validate()?;
    params.require_unweighted()?;
    Ok(threshold_formula(params))
}

/// Non-degeneracy constant
/// `ε0 = (c0 / (Λ0 + nΛ(1+alpha)/(p-1)))^{1/(p-1)} · (p-1)/(p+alpha)`.
#[allow(non_snake_case)]
pub fn nondegeneracy_constant(n: usize, p: f64, alpha: f64, c0: f64, Lambda: f64, Lambda0: f64) -> Result<f64> {
    if !(p > 1.0) {
        return domain(format!("p must be > 1, got {p}"));
    }
    if !(c0 >= 0.0) {
        return domain(format!("c0 must be >= 0, got {c0}"));
    }
    if !(p + alpha > 0.0) {
        return domain(format!("p + alpha must be positive, got {}", p + alpha));
    }
    let denom = Lambda0 + n as f64 * Lambda * (1.0 + alpha) / (p - 1.0);
    if !(denom > 0.0) {
        return domain(format!("Λ0 + nΛ(1+alpha)/(p-1) must be positive, got {denom}"));
    }
    Ok((c0 / denom).powf(1.0 / (p - 1.0)) * (p - 1.0) / (p + alpha))
}

/// `u(x) = |x_axis|^γ / ((1+alpha)^{1/(p-1)} γ)` with `γ = 1 + (1+alpha)/(p-1)`,
/// solving `Δ_p u = |x_axis|^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparableProfile {
    /// Zero-based coordinate index.
    pub axis: usize,
    pub p: f64,
    pub alpha: f64,
}

impl SeparableProfile {
    pub fn exponent(&self) -> f64 {
        1.0 + (1.0 + self.alpha) / (self.p - 1.0)
    }

    pub fn coefficient(&self) -> f64 {
        1.0 / ((1.0 + self.alpha).powf(1.0 / (self.p - 1.0)) * self.exponent())
    }

    /// Profile as a function of the single coordinate `t = x_axis`.
    pub fn along_axis(&self) -> RadialProfile {
        RadialProfile {
            coefficient: self.coefficient(),
            exponent: self.exponent(),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.along_axis().value(x[self.axis].abs())
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let t = x[self.axis];
        let mut g = vec![0.0; x.len()];
        g[self.axis] = t.signum() * self.along_axis().derivative(t.abs());
        g
    }

    /// `Δ_p u` at a point with `x_axis = t ≠ 0`.
    pub fn p_laplacian(&self, t: f64) -> f64 {
        let prof = self.along_axis();
        power_flux_divergence(prof.coefficient, prof.exponent, self.p, 0.0, 1.0, t.abs())
    }

    /// Largest `|Δ_p u - |t|^alpha| / max(1, |t|^alpha)` over the samples.
    pub fn residual(&self, samples: &[f64]) -> f64 {
        samples
            .iter()
            .filter(|t| **t != 0.0)
            .map(|&t| {
                let rhs = t.abs().powf(self.alpha);
                (self.p_laplacian(t) - rhs).abs() / rhs.max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

/// Exact solution of `Δ_p u = |x_axis|^alpha`; needs `0 < alpha < |p - 2|`.
pub fn separable_solution(p: f64, alpha: f64, axis: usize) -> Result<SeparableProfile> {
    if !(p > 1.0 && p.is_finite()) {
        return domain(format!("p must be finite and > 1, got {p}"));
    }
    if !(alpha > 0.0 && alpha < (p - 2.0).abs()) {
        return domain(format!("need 0 < alpha < |p - 2| = {}, got {alpha}", (p - 2.0).abs()));
    }
    Ok(SeparableProfile { axis, p, alpha })
}

/// Weighted radial p-Laplacian `div(r^k |u'|^{p-2}u')` of a power profile.
pub fn p_laplacian_radial(profile: &RadialProfile, params: &ExponentParams, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return domain(format!("radius must be positive, got {r}"));
    }
    Ok(power_flux_divergence(
        profile.coefficient,
        profile.exponent,
        params.p,
        params.k,
        params.n as f64,
        r,
    ))
}

/// Largest `|L u - r^alpha u_+^m| / max(1, r^alpha u_+^m)` over the sample radii.
pub fn p_laplacian_residual(profile: &RadialProfile, params: &ExponentParams, radii: &[f64]) -> f64 {
    radii
        .iter()
        .filter(|r| **r > 0.0)
        .map(|&r| {
            let lhs = power_flux_divergence(
                profile.coefficient,
                profile.exponent,
                params.p,
                params.k,
                params.n as f64,
                r,
            );
            let rhs = r.powf(params.alpha) * crate::problem::positive_power(profile.value(r), params.m);
            (lhs - rhs).abs() / rhs.max(1.0)
        })
        .fold(0.0, f64::max)
}

/// The parameter grid n ∈ {2,3}, p ∈ {1.5,2,3,4}, m ∈ {0,0.5}, alpha ∈ {-0.5,0,1},
/// k ∈ {0,0.5}, restricted to admissible combinations, in lexicographic order.
pub fn default_sweep() -> Vec<ExponentParams> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        for p in [1.5, 2.0, 3.0, 4.0] {
            for m in [0.0, 0.5] {
                for alpha in [-0.5, 0.0, 1.0] {
                    for k in [0.0, 0.5] {
                        let params = ExponentParams::new(n, p, m, alpha).with_k(k);
                        if radial_model_solution(&params).is_ok() {
                            out.push(params);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Ten evenly spaced radii `0.1, 0.2, …, 1.0`.
pub fn unit_radii() -> Vec<f64> {
    (1..=10).map(|i| i as f64 / 10.0).collect()
}
