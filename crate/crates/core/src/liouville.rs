//! Comparison barriers behind the Liouville theorem and the borderline
//! positivity experiment `m = p - 1`.

use serde::{Deserialize, Serialize};

use crate::closed_forms::{growth_exponent, liouville_threshold, ExponentParams};
use crate::error::{domain, Result};
use crate::problem::ProblemSpec;
use crate::radial::{dead_core_radius, solve_bvp, RadialSolution};

/// `v(r) = τ (r - R + (s/τ)^{1/β̂})_+^{β̂}` with `s = boundary_sup`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierProfile {
    pub tau: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub boundary_sup: f64,
    pub beta_hat: f64,
    pub params: ExponentParams,
    /// Smallest sampled `h(r) v^m - Δ_p v` on `(flat_core_radius, R]`.
    pub supersolution_margin: f64,
}

impl BarrierProfile {
    /// `(s/τ)^{1/β̂}`, the width of the support inside `B_R`.
    fn reach(&self) -> f64 {
        (self.boundary_sup / self.tau).powf(1.0 / self.beta_hat)
    }

    /// Radius of the ball where `v ≡ 0` (zero when `v(0) > 0`).
    pub fn flat_core_radius(&self) -> f64 {
        (self.radius - self.reach()).max(0.0)
    }

    pub fn value(&self, r: f64) -> f64 {
        let s = r - self.radius + self.reach();
        if s <= 0.0 {
            0.0
        } else {
            self.tau * s.powf(self.beta_hat)
        }
    }

    /// `Δ_p v` at `r > 0`.
    pub fn p_laplacian(&self, r: f64) -> f64 {
        let s = r - self.radius + self.reach();
        if s <= 0.0 {
            return 0.0;
        }
        let p = self.params.p;
        let n = self.params.n as f64;
        let amp = (self.tau * self.beta_hat).powf(p - 1.0);
        let q = (self.beta_hat - 1.0) * (p - 1.0);
        amp * (q * s.powf(q - 1.0) + (n - 1.0) / r * s.powf(q))
    }

    /// `(r - r0)_+^alpha v^m - Δ_p v`; nonnegative where `v` is a supersolution.
    pub fn supersolution_residual(&self, r: f64, r0: f64) -> f64 {
        let weight = (r - r0).max(0.0).powf(self.params.alpha);
        weight * self.value(r).powf(self.params.m) - self.p_laplacian(r)
    }
}

/// Barrier with `v(R) = boundary_sup`, its margin sampled on 256 radii with `r0 = 0`.
pub fn barrier(params: &ExponentParams, radius: f64, boundary_sup: f64) -> Result<BarrierProfile> {
    if !(radius > 0.0 && radius.is_finite()) {
        return domain(format!("R must be finite and > 0, got {radius}"));
    }
    if !(boundary_sup >= 0.0 && boundary_sup.is_finite()) {
        return domain(format!("boundary sup must be finite and >= 0, got {boundary_sup}"));
    }
    let tau = liouville_threshold(params)?;
    let beta_hat = growth_exponent(params)?;
    let mut profile = BarrierProfile {
        tau,
        radius,
        boundary_sup,
        beta_hat,
        params: *params,
        supersolution_margin: 0.0,
    };
    let core = profile.flat_core_radius();
    const SAMPLES: usize = 256;
    profile.supersolution_margin = (1..=SAMPLES)
        .map(|i| core + (radius - core) * i as f64 / SAMPLES as f64)
        .map(|r| profile.supersolution_residual(r, 0.0))
        .fold(f64::INFINITY, f64::min);
    Ok(profile)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum DecayVerdict {
    SubcriticalDecay,
    NotConcluded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecaySettings {
    #[serde(rename = "R_list")]
    pub r_list: Vec<f64>,
    pub probes: Vec<f64>,
    /// Required ratio `final / first` of every probe.
    pub decay_ratio: f64,
    pub tol: f64,
}

impl Default for DecaySettings {
    fn default() -> Self {
        DecaySettings {
            r_list: vec![4.0, 8.0, 16.0, 32.0],
            probes: vec![1.0, 2.0],
            decay_ratio: 0.01,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    #[serde(rename = "R")]
    pub radius: f64,
    pub boundary_value: f64,
    pub probe_values: Vec<f64>,
    pub core_radius: Option<f64>,
    /// Largest `|u - τ r^β̂| / (τ r^β̂)` over the nodes; only when `g = τ`.
    pub exact_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub verdict: DecayVerdict,
    pub tau: f64,
    pub g: f64,
    pub rows: Vec<DecayRow>,
    /// Probe values nonincreasing in `R` for every probe.
    pub monotone: bool,
    /// `final <= decay_ratio · first` for every probe.
    pub decayed: bool,
}

/// Solves on `B_R` with `u = g R^β̂` on the sphere for each `R` and records
/// `u_R` at the fixed probes.
pub fn liouville_decay_experiment(params: &ExponentParams, g: f64, settings: &DecaySettings) -> Result<DecayReport> {
    let tau = liouville_threshold(params)?;
    let beta_hat = growth_exponent(params)?;
    if !(g >= 0.0 && g.is_finite()) {
        return domain(format!("g must be finite and >= 0, got {g}"));
    }
    if settings.r_list.windows(2).any(|w| w[0] >= w[1]) || settings.r_list.is_empty() {
        return domain("R_list must be nonempty and strictly increasing");
    }
    let spec = ProblemSpec::power(params.n, params.p, params.m, params.alpha, params.k);
    let mut rows = Vec::with_capacity(settings.r_list.len());
    for &radius in &settings.r_list {
        if let Some(&probe) = settings.probes.iter().find(|&&x| !(x >= 0.0 && x <= radius)) {
            return domain(format!("probe {probe} outside [0, {radius}]"));
        }
        let boundary_value = g * radius.powf(beta_hat);
        let sol = solve_bvp(&spec, boundary_value, radius, settings.tol)?;
        let exact_deviation = (g == tau).then(|| max_relative_deviation(&sol, tau, beta_hat));
        rows.push(DecayRow {
            radius,
            boundary_value,
            probe_values: settings.probes.iter().map(|&x| sol.value_at(x)).collect(),
            core_radius: dead_core_radius(&sol, 0.0).filter(|&c| c > 0.0),
            exact_deviation,
        });
    }
    let probes = settings.probes.len();
    let monotone = (0..probes).all(|j| rows.windows(2).all(|w| w[1].probe_values[j] <= w[0].probe_values[j]));
    let first = &rows[0].probe_values;
    let last = &rows[rows.len() - 1].probe_values;
    let decayed = (0..probes).all(|j| last[j] <= settings.decay_ratio * first[j]);
    let verdict = if g < tau && monotone && decayed {
        DecayVerdict::SubcriticalDecay
    } else {
        DecayVerdict::NotConcluded
    };
    Ok(DecayReport {
        verdict,
        tau,
        g,
        rows,
        monotone,
        decayed,
    })
}

fn max_relative_deviation(sol: &RadialSolution, tau: f64, beta_hat: f64) -> f64 {
    sol.radii
        .iter()
        .zip(&sol.values)
        .filter(|(&r, _)| r > 0.0)
        .map(|(&r, &u)| {
            let e = tau * r.powf(beta_hat);
            (u - e).abs() / e
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum BorderlineVerdict {
    Pass,
    Fail,
    /// Zero boundary data; the solution is the trivial one.
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BorderlineLevel {
    pub tol: f64,
    pub center_value: f64,
    pub minimum: f64,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorderlineReport {
    pub verdict: BorderlineVerdict,
    pub levels: Vec<BorderlineLevel>,
    /// Smallest minimum over the levels.
    pub floor: f64,
    /// `(max - min) / max` of the level minima.
    pub spread: f64,
}

/// Relative spread of the level minima tolerated by the verdict.
pub const BORDERLINE_STABILITY: f64 = 1e-2;

/// Radial Dirichlet problems with `m = p - 1` at a ladder of tolerances;
/// passes when `min u` stays at a positive, tolerance-independent floor.
pub fn borderline_positivity_probe(
    spec: &ProblemSpec,
    boundary_value: f64,
    r_max: f64,
    tolerances: &[f64],
) -> Result<BorderlineReport> {
    if (spec.m() - (spec.p - 1.0)).abs() > 1e-12 {
        return domain(format!(
            "borderline probe needs m = p - 1, got m = {} and p = {}",
            spec.m(),
            spec.p
        ));
    }
    if tolerances.is_empty() {
        return domain("tolerance ladder is empty");
    }
    let mut levels = Vec::with_capacity(tolerances.len());
    for &tol in tolerances {
        let sol = solve_bvp(spec, boundary_value, r_max, tol)?;
        levels.push(BorderlineLevel {
            tol,
            center_value: sol.center_value(),
            minimum: sol.values.iter().copied().fold(f64::INFINITY, f64::min),
            nodes: sol.len(),
        });
    }
    let floor = levels.iter().map(|l| l.minimum).fold(f64::INFINITY, f64::min);
    let top = levels.iter().map(|l| l.minimum).fold(f64::NEG_INFINITY, f64::max);
    let spread = if top > 0.0 { (top - floor) / top } else { 0.0 };
    let verdict = if boundary_value == 0.0 {
        BorderlineVerdict::NotApplicable
    } else if floor > 0.0 && spread <= BORDERLINE_STABILITY {
        BorderlineVerdict::Pass
    } else {
        BorderlineVerdict::Fail
    };
    Ok(BorderlineReport {
        verdict,
        levels,
        floor,
        spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::radial_model_solution;

    #[test]
    fn quadratic_barrier() {
        let params = ExponentParams::new(2, 2.0, 0.0, 0.0);
        let b = barrier(&params, 1.0, 0.25).unwrap();
        assert_eq!(b.tau, 0.25);
        assert_eq!(b.flat_core_radius(), 0.0);
        for r in [0.0, 0.3, 0.7, 1.0] {
            assert!((b.value(r) - 0.25 * r * r).abs() < 1e-15);
        }
        assert!(b.supersolution_margin.abs() < 1e-12);
    }

    #[test]
    fn barrier_hits_boundary_value() {
        for params in [
            ExponentParams::new(2, 2.0, 0.5, 0.0),
            ExponentParams::new(3, 3.0, 1.0, 1.0),
        ] {
            for (radius, s) in [(1.0, 0.01), (4.0, 3.0), (0.5, 100.0)] {
                let b = barrier(&params, radius, s).unwrap();
                assert!((b.value(radius) - s).abs() <= 1e-12 * s);
            }
            let b = barrier(&params, 2.0, 0.0).unwrap();
            assert_eq!(b.flat_core_radius(), 2.0);
            assert!((0..=20).all(|i| b.value(0.1 * i as f64) == 0.0));
        }
    }

    #[test]
    fn barrier_core_is_empty_exactly_above_threshold() {
        let params = ExponentParams::new(2, 2.0, 0.0, 0.0);
        let radius = 3.0;
        let threshold = 0.25 * radius * radius;
        assert!(barrier(&params, radius, 0.9 * threshold).unwrap().flat_core_radius() > 0.0);
        assert_eq!(barrier(&params, radius, threshold).unwrap().flat_core_radius(), 0.0);
        assert_eq!(
            barrier(&params, radius, 1.1 * threshold).unwrap().flat_core_radius(),
            0.0
        );
    }

    #[test]
    fn threshold_barrier_is_the_model_solution() {
        let params = ExponentParams::new(3, 2.5, 0.5, 0.5);
        let exact = radial_model_solution(&params).unwrap();
        let radius = 2.0;
        let b = barrier(&params, radius, exact.value(radius)).unwrap();
        assert!(b.flat_core_radius() <= 1e-12);
        for i in 0..=40 {
            let r = radius * i as f64 / 40.0;
            assert!((b.value(r) - exact.value(r)).abs() <= 1e-12 * exact.value(radius));
        }
    }

    #[test]
    fn barrier_is_a_supersolution_off_threshold() {
        let params = ExponentParams::new(2, 2.0, 0.5, 0.0);
        let tau = liouville_threshold(&params).unwrap();
        for s in [0.1 * tau, 0.5 * tau, tau] {
            assert!(barrier(&params, 1.0, s).unwrap().supersolution_margin >= -1e-12);
        }
    }

    #[test]
    fn zero_growth_gives_zero() {
        let params = ExponentParams::new(2, 2.0, 0.5, 0.0);
        let settings = DecaySettings {
            r_list: vec![2.0, 4.0],
            probes: vec![1.0],
            ..Default::default()
        };
        let report = liouville_decay_experiment(&params, 0.0, &settings).unwrap();
        assert!(report.rows.iter().all(|r| r.probe_values[0] == 0.0));
    }

    #[test]
    fn borderline_zero_data_not_applicable() {
        let spec = ProblemSpec::power(2, 2.0, 1.0, 0.0, 0.0);
        let report = borderline_positivity_probe(&spec, 0.0, 1.0, &[1e-6]).unwrap();
        assert_eq!(report.verdict, BorderlineVerdict::NotApplicable);
        assert!(borderline_positivity_probe(&ProblemSpec::power(2, 2.0, 0.5, 0.0, 0.0), 1.0, 1.0, &[1e-6]).is_err());
    }
}
