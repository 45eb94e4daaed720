use serde::{Deserialize, Serialize};

use super::{integrate_ivp, seed_from_core, seed_positive_branch, RadialSolution, DEFAULT_SEED_OFFSET};
use crate::error::{domain, Error, Result};
use crate::problem::ProblemSpec;

const MAX_BISECTIONS: usize = 200;

/// What the shooting method adjusted to hit the boundary value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShotParameter {
    /// `u(0)`; zero means the seeded branch touching the origin.
    CenterValue { value: f64, iterations: usize },
    /// Radius of the dead core `{u = 0}`.
    CoreRadius { value: f64, iterations: usize },
}

/// Dirichlet problem on `B_{r_max}` with `u = boundary_value` on the sphere.
///
/// The shot `u0 ↦ u(r_max)` is monotone by comparison, so bisection
/// converges. When `0 < m < p - 1`, boundary values below the shot of the
/// seeded branch `c r^β̂` are reached by solutions with a dead core; the core
/// radius is then bisected instead. With `m = 0` the source does not depend
/// on `u` and the center value is obtained by translation.
///
/// Stops when `|u(r_max) - boundary_value| <= tol · boundary_value` or the
/// bracket collapses to rounding level.
pub fn solve_bvp(spec: &ProblemSpec, boundary_value: f64, r_max: f64, tol: f64) -> Result<RadialSolution> {
    if !(boundary_value >= 0.0 && boundary_value.is_finite()) {
        return domain(format!("boundary value must be finite and >= 0, got {boundary_value}"));
    }
    let m = spec.m();
    if m == 0.0 {
        let base = integrate_ivp(spec, 0.0, r_max, tol)?;
        let u0 = boundary_value - base.boundary_value();
        let mut sol = integrate_ivp(spec, u0, r_max, tol)?;
        sol.shot = Some(ShotParameter::CenterValue {
            value: u0,
            iterations: 1,
        });
        return Ok(sol);
    }
    if boundary_value == 0.0 {
        let mut sol = integrate_ivp(spec, 0.0, r_max, tol)?;
        sol.shot = Some(ShotParameter::CenterValue {
            value: 0.0,
            iterations: 0,
        });
        return Ok(sol);
    }

    let target = boundary_value;
    let accept = tol * target;
    let hit = |sol: &RadialSolution| (sol.boundary_value() - target).abs() <= accept;

    let floor_shot = if spec.in_dead_core_regime() {
        Some(seed_positive_branch(spec, DEFAULT_SEED_OFFSET * r_max, r_max, tol)?)
    } else {
        None
    };
    let floor_value = floor_shot.as_ref().map_or(0.0, |s| s.boundary_value());

    if let Some(mut seeded) = floor_shot {
        if hit(&seeded) {
            seeded.shot = Some(ShotParameter::CenterValue {
                value: 0.0,
                iterations: 0,
            });
            return Ok(seeded);
        }
        if target < floor_value {
            return bisect_core(spec, target, accept, r_max, tol, seeded);
        }
    }

    // center value in [0, target]; u is nondecreasing so u0 = target overshoots
    let mut hi_sol = integrate_ivp(spec, target, r_max, tol)?;
    if hi_sol.boundary_value() < target - accept {
        return Err(Error::InconsistentWeights {
            target,
            reached: hi_sol.boundary_value(),
        });
    }
    let (mut lo, mut hi) = (0.0, target);
    let mut iterations = 0;
    while iterations < MAX_BISECTIONS && !hit(&hi_sol) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let sol = integrate_ivp(spec, mid, r_max, tol)?;
        if sol.boundary_value() > target {
            hi = mid;
            hi_sol = sol;
        } else {
            lo = mid;
            if hit(&sol) {
                hi = mid;
                hi_sol = sol;
                break;
            }
        }
    }
    hi_sol.shot = Some(ShotParameter::CenterValue { value: hi, iterations });
    Ok(hi_sol)
}

fn bisect_core(
    spec: &ProblemSpec,
    target: f64,
    accept: f64,
    r_max: f64,
    tol: f64,
    seeded: RadialSolution,
) -> Result<RadialSolution> {
    // shot decreases from the seeded value at core = 0 to 0 at core = r_max
    let (mut lo, mut hi) = (0.0, r_max);
    let mut best = seeded;
    let mut best_core = 0.0;
    let mut iterations = 0;
    while iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= 1e-15 * r_max {
            break;
        }
        iterations += 1;
        let sol = seed_from_core(spec, mid, r_max, tol)?;
        let reached = sol.boundary_value();
        let better = (reached - target).abs() < (best.boundary_value() - target).abs();
        if better {
            best = sol;
            best_core = mid;
        }
        if (reached - target).abs() <= accept {
            break;
        }
        if reached > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    best.shot = Some(ShotParameter::CoreRadius {
        value: best_core,
        iterations,
    });
    Ok(best)
}

/// Largest `r*` with `u <= threshold` on `[0, r*]`; `None` when `u(0) > threshold`.
pub fn dead_core_radius(sol: &RadialSolution, threshold: f64) -> Option<f64> {
    if sol.values[0] > threshold {
        return None;
    }
    let Some(first_above) = sol.values.iter().position(|&u| u > threshold) else {
        return Some(sol.r_max());
    };
    // the interpolant is monotone between nodes of a nondecreasing solution
    let (mut lo, mut hi) = (sol.radii[first_above - 1], sol.radii[first_above]);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sol.value_at(mid) > threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(lo)
}
