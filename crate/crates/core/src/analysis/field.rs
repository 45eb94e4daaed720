use std::f64::consts::TAU;

use crate::closed_forms::{RadialProfile, SeparableProfile};
use crate::error::{Error, Result};
use crate::grid::{gradient_at, GridSolution};
use crate::radial::RadialSolution;

const RINGS: usize = 64;
const ANGLES: usize = 256;

/// A scalar field sampled in a plane; radial solutions are viewed on a
/// planar slice through the origin.
pub trait Field {
    fn value(&self, x: [f64; 2]) -> Result<f64>;

    fn gradient(&self, x: [f64; 2]) -> Result<[f64; 2]>;

    /// Radius of the disc on which the field is defined.
    fn extent(&self) -> f64;

    /// Mesh width below which measurements are resolution-dominated.
    fn resolution(&self) -> f64 {
        0.0
    }

    /// Values at or below this count as zero.
    fn zero_tolerance(&self) -> f64 {
        0.0
    }

    /// Default pass tolerance for fitted exponents.
    fn exponent_tolerance(&self) -> f64 {
        0.01
    }

    /// Sample points of the closed ball `B_r(x0)`.
    fn ball_points(&self, x0: [f64; 2], r: f64) -> Result<Vec<[f64; 2]>> {
        self.check_ball(x0, r)?;
        Ok(polar_points(x0, r))
    }

    /// Sample points of the circle `∂B_r(x0)`.
    fn sphere_points(&self, x0: [f64; 2], r: f64) -> Result<Vec<[f64; 2]>> {
        self.check_ball(x0, r)?;
        Ok(circle_points(x0, r, ANGLES * 4))
    }

    /// Fails unless `B_r(x0)` is resolved and inside the domain.
    fn check_ball(&self, x0: [f64; 2], r: f64) -> Result<()> {
        let limit = 4.0 * self.resolution();
        if !(r >= limit && r > 0.0) {
            return Err(Error::Resolution { radius: r, limit });
        }
        if x0[0].hypot(x0[1]) + r > self.extent() {
            return Err(Error::OutsideDomain(format!(
                "ball of radius {r} around ({}, {}) leaves the domain of radius {}",
                x0[0],
                x0[1],
                self.extent()
            )));
        }
        Ok(())
    }
}

/// Direction of `x0`, or the first axis at the origin.
fn base_angle(x0: [f64; 2]) -> f64 {
    if x0 == [0.0, 0.0] {
        0.0
    } else {
        x0[1].atan2(x0[0])
    }
}

fn circle_points(x0: [f64; 2], r: f64, count: usize) -> Vec<[f64; 2]> {
    let a0 = base_angle(x0);
    (0..count)
        .map(|k| {
            let a = a0 + TAU * k as f64 / count as f64;
            [x0[0] + r * a.cos(), x0[1] + r * a.sin()]
        })
        .collect()
}

fn polar_points(x0: [f64; 2], r: f64) -> Vec<[f64; 2]> {
    let mut pts = vec![x0];
    for ring in 1..=RINGS {
        pts.extend(circle_points(x0, r * ring as f64 / RINGS as f64, ANGLES));
    }
    pts
}

fn radial_gradient(x: [f64; 2], slope: f64) -> [f64; 2] {
    let r = x[0].hypot(x[1]);
    if r == 0.0 {
        [0.0, 0.0]
    } else {
        [slope * x[0] / r, slope * x[1] / r]
    }
}

impl Field for RadialSolution {
    fn value(&self, x: [f64; 2]) -> Result<f64> {
        let r = x[0].hypot(x[1]);
        if r > self.r_max() * (1.0 + 1e-12) {
            return Err(Error::OutsideDomain(format!("radius {r} beyond {}", self.r_max())));
        }
        Ok(self.value_at(r))
    }

    fn gradient(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        let r = x[0].hypot(x[1]);
        if r > self.r_max() * (1.0 + 1e-12) {
            return Err(Error::OutsideDomain(format!("radius {r} beyond {}", self.r_max())));
        }
        Ok(radial_gradient(x, self.derivative_at(r)))
    }

    fn extent(&self) -> f64 {
        self.r_max()
    }

    /// Centered balls are sampled at the radial nodes.
    fn ball_points(&self, x0: [f64; 2], r: f64) -> Result<Vec<[f64; 2]>> {
        self.check_ball(x0, r)?;
        if x0 != [0.0, 0.0] {
            return Ok(polar_points(x0, r));
        }
        let mut pts: Vec<[f64; 2]> = self.radii.iter().take_while(|&&s| s < r).map(|&s| [s, 0.0]).collect();
        pts.push([r, 0.0]);
        Ok(pts)
    }

    fn sphere_points(&self, x0: [f64; 2], r: f64) -> Result<Vec<[f64; 2]>> {
        self.check_ball(x0, r)?;
        if x0 == [0.0, 0.0] {
            return Ok(vec![[r, 0.0]]);
        }
        Ok(circle_points(x0, r, ANGLES * 4))
    }
}

impl Field for GridSolution {
    fn value(&self, x: [f64; 2]) -> Result<f64> {
        self.value_at(x)
    }

    fn gradient(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        gradient_at(self, x)
    }

    fn extent(&self) -> f64 {
        1.0 - 2.0 * self.h()
    }

    fn resolution(&self) -> f64 {
        self.h()
    }

    fn zero_tolerance(&self) -> f64 {
        10.0 * self.tol_fp
    }

    fn exponent_tolerance(&self) -> f64 {
        0.05
    }

    /// Lattice nodes in the ball.
    fn ball_points(&self, x0: [f64; 2], r: f64) -> Result<Vec<[f64; 2]>> {
        self.check_ball(x0, r)?;
        let r2 = r * r * (1.0 + 1e-12);
        Ok(self
            .interior_values()
            .filter(|(x, y, _)| (x - x0[0]).powi(2) + (y - x0[1]).powi(2) <= r2)
            .map(|(x, y, _)| [x, y])
            .collect())
    }

    fn sphere_points(&self, x0: [f64; 2], r: f64) -> Result<Vec<[f64; 2]>> {
        self.check_ball(x0, r)?;
        let count = ((8.0 * TAU * r / self.h()).ceil() as usize).max(64);
        Ok(circle_points(x0, r, count))
    }
}

impl Field for RadialProfile {
    fn value(&self, x: [f64; 2]) -> Result<f64> {
        Ok(RadialProfile::value(self, x[0].hypot(x[1])))
    }

    fn gradient(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        Ok(radial_gradient(x, self.derivative(x[0].hypot(x[1]))))
    }

    fn extent(&self) -> f64 {
        f64::INFINITY
    }
}

impl Field for SeparableProfile {
    fn value(&self, x: [f64; 2]) -> Result<f64> {
        Ok(SeparableProfile::value(self, &x))
    }

    fn gradient(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        let g = SeparableProfile::gradient(self, &x);
        Ok([g[0], g[1]])
    }

    fn extent(&self) -> f64 {
        f64::INFINITY
    }
}
