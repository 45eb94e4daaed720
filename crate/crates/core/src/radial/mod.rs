//! Radial reduction `(r^{n-1} a(r) Φ(u'))' = r^{n-1} h(r) f(u)`, solved as an
//! initial-value problem and, by shooting, as a Dirichlet problem on a ball.
//!
//! The unknowns are `u` and the flux `w = r^{n-1} a(r) Φ(u')`. Working with
//! the flux removes the degeneracy of `|u'|^{p-2}` at critical points: where
//! `w = 0` the slope is exactly zero.
//!
//! Degenerate data `u(0) = 0` with `0 < m < p - 1` admit two solutions, the
//! zero branch and `c r^β̂`. [`integrate_ivp`] always returns the zero branch;
//! [`seed_positive_branch`] selects the other one explicitly.

mod integrator;
mod shooting;

pub use integrator::{phi, phi_inverse, OVERFLOW_GUARD};
pub use shooting::{dead_core_radius, solve_bvp, ShotParameter};

use serde::{Deserialize, Serialize};

use crate::closed_forms::{growth_exponent, matukuma_constant, radial_model_solution};
use crate::error::{domain, Result};
use crate::problem::{positive_power, ProblemSpec};
use integrator::{FluxSystem, Trace};

/// Relative offset of the first integration node from the origin (or from
/// the edge of a dead core).
pub const DEFAULT_SEED_OFFSET: f64 = 1e-6;

/// Node arrays of a computed radial solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSolution {
    pub spec: ProblemSpec,
    /// Strictly increasing, starting at 0.
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
    /// `w = r^{n-1} a(r) Φ(u')`.
    pub fluxes: Vec<f64>,
    /// On `[0, radii[1]]` the solution is `u0 + (u1 - u0)(r / r1)^origin_exponent`.
    pub origin_exponent: f64,
    pub tol: f64,
    /// Parameter hit by the shooting method, when this came from [`solve_bvp`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shot: Option<ShotParameter>,
}

impl RadialSolution {
    pub fn r_max(&self) -> f64 {
        *self.radii.last().expect("nonempty solution")
    }

    pub fn center_value(&self) -> f64 {
        self.values[0]
    }

    pub fn boundary_value(&self) -> f64 {
        *self.values.last().expect("nonempty solution")
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    fn locate(&self, r: f64) -> usize {
        // index i with radii[i] <= r <= radii[i+1]
        match self.radii.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(self.radii.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.radii.len() - 2),
        }
    }

    /// `u(r)`, cubic Hermite between nodes (power law on the first interval).
    /// Radii beyond `r_max` are clamped.
    pub fn value_at(&self, r: f64) -> f64 {
        let r = r.abs().min(self.r_max());
        let i = self.locate(r);
        let (r0, r1) = (self.radii[i], self.radii[i + 1]);
        let (u0, u1) = (self.values[i], self.values[i + 1]);
        if i == 0 {
            return u0 + (u1 - u0) * (r / r1).powf(self.origin_exponent);
        }
        let h = r1 - r0;
        let t = (r - r0) / h;
        let (d0, d1) = (self.derivatives[i] * h, self.derivatives[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * u0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * u1 + (t3 - t2) * d1
    }

    /// `u'(r)` from the same interpolant.
    pub fn derivative_at(&self, r: f64) -> f64 {
        let r = r.abs().min(self.r_max());
        let i = self.locate(r);
        let (r0, r1) = (self.radii[i], self.radii[i + 1]);
        let (u0, u1) = (self.values[i], self.values[i + 1]);
        if i == 0 {
            if r == 0.0 {
                return self.derivatives[0];
            }
            let e = self.origin_exponent;
            return (u1 - u0) * e * (r / r1).powf(e - 1.0) / r1;
        }
        let h = r1 - r0;
        let t = (r - r0) / h;
        let (d0, d1) = (self.derivatives[i], self.derivatives[i + 1]);
        let t2 = t * t;
        ((6.0 * t2 - 6.0 * t) * (u0 - u1)) / h + (3.0 * t2 - 4.0 * t + 1.0) * d0 + (3.0 * t2 - 2.0 * t) * d1
    }

    /// Largest relative deviation `|u' - Φ^{-1}(w / (r^{n-1} a))| / max(|u'|, tiny)`
    /// over nodes with `r > 0`.
    pub fn slope_flux_mismatch(&self) -> f64 {
        let sys = FluxSystem::new(&self.spec);
        self.radii
            .iter()
            .zip(&self.derivatives)
            .zip(&self.fluxes)
            .filter(|((r, _), _)| **r > 0.0)
            .map(|((&r, &du), &w)| {
                let expect = sys.slope(r, w);
                (du - expect).abs() / expect.abs().max(1e-300)
            })
            .fold(0.0, f64::max)
    }
}

fn validate_common(spec: &ProblemSpec, r_max: f64, tol: f64) -> Result<()> {
    spec.validate()?;
    if !(r_max > 0.0 && r_max.is_finite()) {
        return domain(format!("r_max must be positive, got {r_max}"));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return domain(format!("tolerance must lie in (0, 1), got {tol}"));
    }
    Ok(())
}

fn zero_solution(spec: &ProblemSpec, r_max: f64, tol: f64) -> RadialSolution {
    let nodes = 65;
    let radii: Vec<f64> = (0..nodes).map(|i| r_max * i as f64 / (nodes - 1) as f64).collect();
    RadialSolution {
        spec: *spec,
        values: vec![0.0; nodes],
        derivatives: vec![0.0; nodes],
        fluxes: vec![0.0; nodes],
        radii,
        origin_exponent: 1.0,
        tol,
        shot: None,
    }
}

fn finish(spec: &ProblemSpec, trace: Trace, origin_exponent: f64, tol: f64) -> RadialSolution {
    RadialSolution {
        spec: *spec,
        radii: trace.radii,
        values: trace.values,
        derivatives: trace.derivatives,
        fluxes: trace.fluxes,
        origin_exponent,
        tol,
        shot: None,
    }
}

/// Solves the flux system from `u(0) = u0`, `w(0) = 0` up to `r_max`.
///
/// With `m > 0` and `u0 = 0` this is the zero branch. Negative `u0` is
/// accepted when `m = 0` (the source then does not see `u`).
pub fn integrate_ivp(spec: &ProblemSpec, u0: f64, r_max: f64, tol: f64) -> Result<RadialSolution> {
    validate_common(spec, r_max, tol)?;
    let m = spec.m();
    if !u0.is_finite() || (u0 < 0.0 && m > 0.0) {
        return domain(format!("initial value must be >= 0, got {u0}"));
    }
    if m > 0.0 && u0 == 0.0 {
        return Ok(zero_solution(spec, r_max, tol));
    }

    let n = spec.n as f64;
    let a = spec.alpha();
    let k = spec.k();
    let p = spec.p;
    if n + a <= 0.0 {
        return domain(format!(
            "source weight r^{a} is not integrable against r^{{n-1}} at the origin"
        ));
    }
    // Leading behaviour: w ≈ s0 r^{n+a}/(n+a),  u ≈ u0 + B r^{g+1}/(g+1).
    let s0 = positive_power(u0, m);
    let g = (1.0 + a - k) / (p - 1.0);
    if g <= -1.0 {
        return domain("slope is not integrable at the origin (need p + alpha - k > 0)");
    }
    let b = (s0 / (n + a)).powf(1.0 / (p - 1.0));
    let mut r_start = DEFAULT_SEED_OFFSET * r_max;
    if m > 0.0 && b > 0.0 {
        // keep the first increment negligible against u0 so that u^m ≈ u0^m holds there
        let r_lin = (1e-8 * u0.abs() * (g + 1.0) / b).powf(1.0 / (g + 1.0));
        r_start = r_start.min(r_lin);
    }
    let sys = FluxSystem::new(spec);
    let w_start = s0 * r_start.powf(n + a) / (n + a) * spec.source.weight.smooth_factor(0.0, p);
    let u_start = u0 + b * r_start.powf(g + 1.0) / (g + 1.0);
    let du_start = sys.slope(r_start, w_start);

    let du_origin = if g > 0.0 {
        0.0
    } else if g == 0.0 {
        b
    } else {
        f64::INFINITY
    };
    let mut trace = Trace::default();
    trace.push(0.0, u0, du_origin, 0.0);
    trace.push(r_start, u_start, du_start, w_start);
    sys.run(&mut trace, (r_start, u_start, w_start), 0.1 * r_start, r_max, tol)?;
    Ok(finish(spec, trace, g + 1.0, tol))
}

/// Nontrivial branch from degenerate zero data, started at `r_seed` from the
/// exact power profile `c r^β̂` of the leading powers of both weights.
pub fn seed_positive_branch(spec: &ProblemSpec, r_seed: f64, r_max: f64, tol: f64) -> Result<RadialSolution> {
    validate_common(spec, r_max, tol)?;
    if !(r_seed > 0.0 && r_seed < r_max) {
        return domain(format!("seed radius must lie in (0, r_max), got {r_seed}"));
    }
    if spec.m() == 0.0 {
        return integrate_ivp(spec, 0.0, r_max, tol);
    }
    if !spec.in_dead_core_regime() {
        return domain("seeding needs 0 < m < p - 1 and alpha + 1 + m - k > 0");
    }
    let params = spec.exponent_params(1.0);
    let beta = growth_exponent(&params)?;
    let profile = radial_model_solution(&params)?;
    let sys = FluxSystem::new(spec);
    let u = profile.value(r_seed);
    let du = profile.derivative(r_seed);
    let w = sys.flux(r_seed, du);

    let mut trace = Trace::default();
    trace.push(0.0, 0.0, 0.0, 0.0);
    trace.push(r_seed, u, sys.slope(r_seed, w), w);
    sys.run(&mut trace, (r_seed, u, w), 0.01 * r_seed, r_max, tol)?;
    Ok(finish(spec, trace, beta, tol))
}

/// Nontrivial branch leaving a dead core `[0, core]`, `core > 0`. Near the
/// edge the equation is one-dimensional and the seed is `A s^γ` with
/// `γ = p/(p-1-m)`, `s = r - core`.
pub(crate) fn seed_from_core(spec: &ProblemSpec, core: f64, r_max: f64, tol: f64) -> Result<RadialSolution> {
    debug_assert!(core > 0.0 && core < r_max);
    let p = spec.p;
    let m = spec.m();
    let gap = p - 1.0 - m;
    let gamma = p / gap;
    let one_dim = matukuma_constant(1, p, gamma, 0.0)?;
    let h = spec.source.weight.value(core, p);
    let a = spec.coefficient.value(core, p);
    let amp = (h / (a * one_dim)).powf(1.0 / gap);

    let delta = (DEFAULT_SEED_OFFSET * r_max).min(0.5 * (r_max - core));
    let r0 = core + delta;
    let sys = FluxSystem::new(spec);
    let u = amp * delta.powf(gamma);
    let w = sys.flux(r0, amp * gamma * delta.powf(gamma - 1.0));

    let mut trace = Trace::default();
    trace.push(0.0, 0.0, 0.0, 0.0);
    trace.push(core, 0.0, 0.0, 0.0);
    trace.push(r0, u, sys.slope(r0, w), w);
    sys.run(&mut trace, (r0, u, w), 0.01 * delta, r_max, tol)?;
    Ok(finish(spec, trace, 1.0, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs_error(sol: &RadialSolution, exact: impl Fn(f64) -> f64) -> f64 {
        sol.radii
            .iter()
            .zip(&sol.values)
            .map(|(&r, &u)| (u - exact(r)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn poisson_in_the_plane() {
        let spec = ProblemSpec::power(2, 2.0, 0.0, 0.0, 0.0);
        let tol = 1e-8;
        let sol = integrate_ivp(&spec, 0.0, 1.0, tol).unwrap();
        assert!(max_abs_error(&sol, |r| r * r / 4.0) <= 10.0 * tol);
        assert!(sol.slope_flux_mismatch() <= 1e-10);
    }

    #[test]
    fn shifted_poisson_in_space() {
        let spec = ProblemSpec::power(3, 2.0, 0.0, 0.0, 0.0);
        let tol = 1e-8;
        let sol = integrate_ivp(&spec, 1.0, 1.0, tol).unwrap();
        assert!(max_abs_error(&sol, |r| 1.0 + r * r / 6.0) <= 10.0 * tol);
    }

    #[test]
    fn zero_branch_for_degenerate_data() {
        let spec = ProblemSpec::power(2, 3.0, 0.5, 0.0, 0.0);
        let sol = integrate_ivp(&spec, 0.0, 1.0, 1e-8).unwrap();
        assert!(sol.values.iter().all(|&u| u == 0.0));
        assert!(sol.fluxes.iter().all(|&w| w == 0.0));
    }

    #[test]
    fn seeded_branch_tracks_exact_profile() {
        let spec = ProblemSpec::power(2, 2.0, 0.5, 0.0, 0.0);
        let tol = 1e-8;
        let sol = seed_positive_branch(&spec, 1e-6, 1.0, tol).unwrap();
        let exact = radial_model_solution(&spec.exponent_params(1.0)).unwrap();
        for (&r, &u) in sol.radii.iter().zip(&sol.values).skip(1) {
            let e = exact.value(r);
            assert!((u - e).abs() <= 100.0 * tol * e, "r={r}: {u} vs {e}");
        }
    }

    #[test]
    fn seeded_branch_with_unit_m_reaches_fourth_power() {
        let spec = ProblemSpec::power(3, 3.0, 1.0, 1.0, 0.0);
        let sol = seed_positive_branch(&spec, 1e-6, 1.0, 1e-8).unwrap();
        let slope = (sol.value_at(0.5) / sol.value_at(0.05)).ln() / 10f64.ln();
        assert!((slope - 4.0).abs() < 0.04, "slope {slope}");
    }

    #[test]
    fn seeding_without_absorption_is_plain_integration() {
        let spec = ProblemSpec::power(2, 2.0, 0.0, 0.0, 0.0);
        let a = seed_positive_branch(&spec, 1e-6, 1.0, 1e-8).unwrap();
        let b = integrate_ivp(&spec, 0.0, 1.0, 1e-8).unwrap();
        assert_eq!(a, b);
        assert!(seed_positive_branch(&spec, 0.0, 1.0, 1e-8).is_err());
    }

    #[test]
    fn supercritical_source_blows_up() {
        let spec = ProblemSpec::power(2, 2.0, 3.0, 0.0, 0.0);
        match integrate_ivp(&spec, 10.0, 10.0, 1e-6) {
            Err(crate::Error::GrowthOverflow { radius }) => assert!(radius > 0.0 && radius < 10.0),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn flux_is_monotone_for_nonnegative_sources() {
        let specs = [
            ProblemSpec::power(2, 1.5, 0.0, -0.5, 0.0),
            ProblemSpec::power(3, 4.0, 1.0, 1.0, 0.5),
            ProblemSpec {
                source: crate::problem::SourceSpec {
                    weight: crate::WeightSpec::Matukuma { sigma: 2.0 },
                    m: 0.5,
                    lower_bound_c0: None,
                },
                ..ProblemSpec::power(3, 2.0, 0.5, 0.0, 0.0)
            },
        ];
        for spec in specs {
            let sol = integrate_ivp(&spec, 0.3, 2.0, 1e-8).unwrap();
            assert!(sol.fluxes.windows(2).all(|w| w[1] >= w[0]), "{spec:?}");
            assert!(sol.values.windows(2).all(|w| w[1] >= w[0]), "{spec:?}");
            assert!(sol.slope_flux_mismatch() <= 1e-10);
        }
    }

    #[test]
    fn interpolation_reproduces_nodes() {
        let spec = ProblemSpec::power(3, 3.0, 0.5, 0.5, 0.0);
        let sol = integrate_ivp(&spec, 0.2, 1.0, 1e-9).unwrap();
        for i in [0, 1, 5, sol.len() - 1] {
            assert!((sol.value_at(sol.radii[i]) - sol.values[i]).abs() < 1e-14);
        }
        let mid = 0.5 * (sol.radii[10] + sol.radii[11]);
        let v = sol.value_at(mid);
        assert!(v >= sol.values[10] && v <= sol.values[11]);
    }
}
