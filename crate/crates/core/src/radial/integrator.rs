//! Adaptive step-doubling integrator for the flux system
//!
//! ```text
//! w'(r) = r^{n-1} h(r) u_+^m,      u'(r) = Φ^{-1}(w / (r^{n-1} a(r)))
//! ```
//!
//! One step is a two-stage product-integration rule: the power part
//! `r^{n-1+e_h}` of the source weight is integrated in closed form, the
//! remaining smooth factor and `u_+^m` are sampled at the midpoint, and `u`
//! is advanced with the midpoint rule on `Φ^{-1}`. The rule is second order;
//! the error of a step is estimated by comparing one step of size `H` with two
//! steps of size `H/2`, and the accepted value is the Richardson extrapolant.

use crate::error::{Error, Result};
use crate::problem::{positive_power, ProblemSpec};

/// Values of `|u|` beyond this are reported as blow-up.
pub const OVERFLOW_GUARD: f64 = 1e12;

/// Inverse of `Φ(s) = |s|^{p-2} s`.
#[inline]
pub fn phi_inverse(t: f64, p: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t.signum() * t.abs().powf(1.0 / (p - 1.0))
    }
}

#[inline]
pub fn phi(s: f64, p: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else {
        s.signum() * s.abs().powf(p - 1.0)
    }
}

/// Node data produced by the integrator.
#[derive(Debug, Default)]
pub(crate) struct Trace {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
    pub fluxes: Vec<f64>,
}

impl Trace {
    pub fn push(&mut self, r: f64, u: f64, du: f64, w: f64) {
        self.radii.push(r);
        self.values.push(u);
        self.derivatives.push(du);
        self.fluxes.push(w);
    }
}

pub(crate) struct FluxSystem<'a> {
    spec: &'a ProblemSpec,
    /// Exponent of the exactly integrated power `r^q`, `q = n - 1 + e_h`.
    q: f64,
}

impl<'a> FluxSystem<'a> {
    pub fn new(spec: &'a ProblemSpec) -> Self {
        FluxSystem {
            spec,
            q: spec.n as f64 - 1.0 + spec.alpha(),
        }
    }

    /// `∫_a^b s^q ds` for `0 < a < b`.
    fn power_integral(&self, a: f64, b: f64) -> f64 {
        let e = self.q + 1.0;
        let ratio_log = ((b - a) / a).ln_1p();
        if e.abs() < 1e-12 {
            ratio_log
        } else {
            a.powf(e) * (e * ratio_log).exp_m1() / e
        }
    }

    #[inline]
    fn source_density(&self, r: f64, u: f64) -> f64 {
        self.spec.source.weight.smooth_factor(r, self.spec.p) * positive_power(u, self.spec.m())
    }

    /// `u'` from the flux at radius `r > 0`.
    #[inline]
    pub fn slope(&self, r: f64, w: f64) -> f64 {
        phi_inverse(w / self.spec.flux_scale(r), self.spec.p)
    }

    /// Flux matching the slope `du` at radius `r`.
    #[inline]
    pub fn flux(&self, r: f64, du: f64) -> f64 {
        self.spec.flux_scale(r) * phi(du, self.spec.p)
    }

    /// One step of size `h` from `(r, u, w)`.
    fn step(&self, r: f64, h: f64, u: f64, w: f64) -> (f64, f64) {
        let r_quarter = r + 0.25 * h;
        let r_mid = r + 0.5 * h;
        let r_end = r + h;

        let w_quarter = w + self.source_density(r, u) * self.power_integral(r, r_quarter);
        let u_mid = u + 0.5 * h * self.slope(r_quarter, w_quarter);
        let w_mid = w + self.source_density(r_quarter, 0.5 * (u + u_mid)) * self.power_integral(r, r_mid);

        let w_end = w + self.source_density(r_mid, u_mid) * self.power_integral(r, r_end);
        let u_end = u + h * self.slope(r_mid, w_mid);
        (u_end, w_end)
    }

    /// Integrates from `(r0, u0, w0)` with `r0 > 0` up to `r_max`, appending
    /// accepted nodes (excluding the start) to `trace`.
    pub fn run(
        &self,
        trace: &mut Trace,
        start: (f64, f64, f64),
        initial_step: f64,
        r_max: f64,
        tol: f64,
    ) -> Result<()> {
        const TINY: f64 = 1e-300;
        let (mut r, mut u, mut w) = start;
        debug_assert!(r > 0.0);
        let span = r_max - r;
        let h_max = (r_max / 64.0).max(f64::MIN_POSITIVE);
        let mut h = initial_step.min(h_max).min(span);
        if !(h > 0.0) {
            return Ok(());
        }

        while r < r_max {
            let last = r_max - r <= h * (1.0 + 1e-12);
            let h_try = if last { r_max - r } else { h };
            let h_min = 1e-13 * r.max(1e-12 * r_max);

            let (u_full, w_full) = self.step(r, h_try, u, w);
            let (u_half, w_half) = self.step(r, 0.5 * h_try, u, w);
            let (u_two, w_two) = self.step(r + 0.5 * h_try, 0.5 * h_try, u_half, w_half);
            let r_new = if last { r_max } else { r + h_try };
            let du_new = self.slope(r_new, w_two);

            let scale_u = tol * u_two.abs().max(r_new * du_new.abs()).max(TINY);
            let scale_w = tol * w_two.abs().max(TINY);
            let err = ((u_two - u_full).abs() / scale_u).max((w_two - w_full).abs() / scale_w) / 3.0;
            let err = if err.is_finite() && u_two.is_finite() && w_two.is_finite() {
                err
            } else {
                f64::INFINITY
            };

            if err <= 1.0 {
                if u_two.abs() > OVERFLOW_GUARD {
                    return Err(Error::GrowthOverflow { radius: r });
                }
                r = r_new;
                u = u_two + (u_two - u_full) / 3.0;
                w = w_two + (w_two - w_full) / 3.0;
                trace.push(r, u, self.slope(r, w), w);
            } else if h_try <= h_min {
                if u.abs() > OVERFLOW_GUARD * 1e-3 || !err.is_finite() {
                    return Err(Error::GrowthOverflow { radius: r });
                }
                return Err(Error::StepUnderflow { radius: r });
            }

            let factor = if err == 0.0 {
                4.0
            } else {
                (0.9 * err.powf(-1.0 / 3.0)).clamp(0.2, 4.0)
            };
            h = (h_try * factor).min(h_max).max(h_min);
        }
        Ok(())
    }
}
