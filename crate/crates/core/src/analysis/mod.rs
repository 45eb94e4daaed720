//! Growth and oscillation measurements on computed or exact solutions.
//!
//! Every measurement is a sup over a ladder of dyadic radii
//! `r_j = r_max 2^{-j}`, followed by a least-squares fit in log-log
//! coordinates.

mod field;

pub use field::Field;

use serde::{Deserialize, Serialize};

use crate::closed_forms::{growth_exponent, nondegeneracy_constant, ExponentParams};
use crate::error::{domain, Error, Result};

/// `r_max 2^{-j}` for `j = 0..=levels`, descending.
pub fn dyadic_radii(r_max: f64, levels: usize) -> Vec<f64> {
    (0..=levels).map(|j| r_max * 0.5f64.powi(j as i32)).collect()
}

/// Dyadic ladder with radii below four mesh widths removed.
pub fn resolved_radii<F: Field + ?Sized>(field: &F, r_max: f64, levels: usize) -> Vec<f64> {
    let limit = 4.0 * field.resolution();
    dyadic_radii(r_max, levels)
        .into_iter()
        .filter(|&r| r >= limit)
        .collect()
}

/// Where and how finely growth is measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Ladder {
    pub r_max: f64,
    pub levels: usize,
    /// Exponent tolerance; the field's default when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl Default for Ladder {
    fn default() -> Self {
        Ladder {
            r_max: 0.5,
            levels: 5,
            tolerance: None,
        }
    }
}

impl Ladder {
    fn radii<F: Field + ?Sized>(&self, field: &F) -> Vec<f64> {
        resolved_radii(field, self.r_max, self.levels)
    }

    fn tolerance<F: Field + ?Sized>(&self, field: &F) -> f64 {
        self.tolerance.unwrap_or_else(|| field.exponent_tolerance())
    }
}

/// `S(r) = sup_{B_r(x0)} |u(x) - u(x0) - ∇u(x0)·(x - x0)|` for each radius.
pub fn oscillation_profile<F: Field + ?Sized>(field: &F, x0: [f64; 2], radii: &[f64]) -> Result<Vec<(f64, f64)>> {
    let u0 = field.value(x0)?;
    let g0 = field.gradient(x0)?;
    radii
        .iter()
        .map(|&r| {
            let s = field
                .ball_points(x0, r)?
                .into_iter()
                .map(|x| {
                    let u = field.value(x)?;
                    Ok((u - u0 - g0[0] * (x[0] - x0[0]) - g0[1] * (x[1] - x0[1])).abs())
                })
                .try_fold(0.0, |acc: f64, v: Result<f64>| v.map(|v| acc.max(v)))?;
            Ok((r, s))
        })
        .collect()
}

/// Least-squares line through `(log r, log S(r))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    /// Radii of the fitted window, descending.
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    /// `log C` in `S(r) ≈ C r^slope`.
    pub intercept: f64,
    pub r_squared: f64,
    /// Closed radius interval actually fitted.
    pub window: (f64, f64),
}

impl GrowthFit {
    pub fn constant(&self) -> f64 {
        self.intercept.exp()
    }

    pub fn rows(&self) -> Vec<ProfileRow> {
        self.radii
            .iter()
            .zip(&self.values)
            .map(|(&r, &v)| ProfileRow {
                r,
                value: v,
                log_r: r.ln(),
                log_value: v.ln(),
            })
            .collect()
    }
}

/// One line of `profile.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub r: f64,
    pub value: f64,
    pub log_r: f64,
    pub log_value: f64,
}

/// Fits the profile points with radius inside `window` (all points when `None`).
pub fn fit_growth_exponent(profile: &[(f64, f64)], window: Option<(f64, f64)>) -> Result<GrowthFit> {
    let mut pts: Vec<(f64, f64)> = profile
        .iter()
        .copied()
        .filter(|&(r, _)| window.is_none_or(|(lo, hi)| r >= lo && r <= hi))
        .collect();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    if pts.len() < 4 {
        return domain(format!(
            "need at least 4 profile points in the window, got {}",
            pts.len()
        ));
    }
    if let Some(&(r, v)) = pts.iter().find(|(r, v)| !(*v > 0.0 && v.is_finite() && *r > 0.0)) {
        return Err(Error::DegenerateProfile(format!("value {v} at radius {r}")));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateProfile("all radii coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(GrowthFit {
        window: (pts[pts.len() - 1].0, pts[0].0),
        radii: pts.iter().map(|p| p.0).collect(),
        values: pts.iter().map(|p| p.1).collect(),
        slope,
        intercept,
        r_squared,
    })
}

/// Kind of extremum found at `x0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremum {
    Minimum,
    Maximum,
}

/// Classifies `x0` on the largest ball of the ladder.
pub fn classify_extremum<F: Field + ?Sized>(field: &F, x0: [f64; 2], r: f64) -> Result<Extremum> {
    let u0 = field.value(x0)?;
    let values = field
        .ball_points(x0, r)?
        .into_iter()
        .map(|x| field.value(x))
        .collect::<Result<Vec<f64>>>()?;
    let scale = values.iter().fold(u0.abs(), |a, v| a.max(v.abs()));
    let slack = field.zero_tolerance() + 1e-12 * scale;
    if values.iter().all(|&u| u >= u0 - slack) {
        Ok(Extremum::Minimum)
    } else if values.iter().all(|&u| u <= u0 + slack) {
        Ok(Extremum::Maximum)
    } else {
        Err(Error::NotExtremum(format!(
            "u takes values on both sides of u(x0) = {u0} within radius {r}"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremumCheck {
    pub extremum: Extremum,
    pub fitted_exponent: f64,
    pub theory_exponent: f64,
    /// `max_r S(r) / r^β̂`.
    pub best_constant: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub fit: GrowthFit,
}

/// Growth `sup_{B_r(x0)} |u - u(x0)| ~ r^β̂` at an extremum point.
pub fn extremum_growth_check<F: Field + ?Sized>(
    field: &F,
    x0: [f64; 2],
    params: &ExponentParams,
    ladder: &Ladder,
) -> Result<ExtremumCheck> {
    let beta_hat = growth_exponent(params)?;
    let radii = ladder.radii(field);
    let outer = radii.first().copied().ok_or_else(|| Error::Resolution {
        radius: ladder.r_max,
        limit: 4.0 * field.resolution(),
    })?;
    let extremum = classify_extremum(field, x0, outer)?;
    let u0 = field.value(x0)?;
    let profile = sup_profile(field, x0, &radii, |x| Ok((field.value(x)? - u0).abs()), false)?;
    let fit = fit_growth_exponent(&profile, None)?;
    let best_constant = profile.iter().map(|&(r, s)| s / r.powf(beta_hat)).fold(0.0, f64::max);
    let tolerance = ladder.tolerance(field);
    Ok(ExtremumCheck {
        extremum,
        fitted_exponent: fit.slope,
        theory_exponent: beta_hat,
        best_constant,
        tolerance,
        pass: (fit.slope - beta_hat).abs() <= tolerance,
        fit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientCheck {
    pub fitted_exponent: f64,
    /// `β̃ = β̂ - 1`.
    pub theory_exponent: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub fit: GrowthFit,
}

/// Growth of `sup_{B_r(x0)} |∇u|`; passes when the fitted exponent is at least `β̂ - 1`.
pub fn gradient_growth_check<F: Field + ?Sized>(
    field: &F,
    x0: [f64; 2],
    params: &ExponentParams,
    ladder: &Ladder,
) -> Result<GradientCheck> {
    let beta_tilde = growth_exponent(params)? - 1.0;
    let radii = ladder.radii(field);
    if let Some(&outer) = radii.first() {
        classify_extremum(field, x0, outer)?;
    }
    let profile = sup_profile(
        field,
        x0,
        &radii,
        |x| {
            let g = field.gradient(x)?;
            Ok(g[0].hypot(g[1]))
        },
        false,
    )?;
    let fit = fit_growth_exponent(&profile, None)?;
    let tolerance = ladder.tolerance(field);
    Ok(GradientCheck {
        fitted_exponent: fit.slope,
        theory_exponent: beta_tilde,
        tolerance,
        pass: fit.slope >= beta_tilde - tolerance,
        fit,
    })
}

fn sup_profile<F: Field + ?Sized>(
    field: &F,
    x0: [f64; 2],
    radii: &[f64],
    quantity: impl Fn([f64; 2]) -> Result<f64>,
    sphere: bool,
) -> Result<Vec<(f64, f64)>> {
    radii
        .iter()
        .map(|&r| {
            let pts = if sphere {
                field.sphere_points(x0, r)?
            } else {
                field.ball_points(x0, r)?
            };
            let mut s: f64 = 0.0;
            for x in pts {
                s = s.max(quantity(x)?);
            }
            Ok((r, s))
        })
        .collect()
}

/// Constants of the source lower bound `c0 |x|^alpha <= f` and of the
/// operator ellipticity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct NondegeneracyData {
    pub c0: f64,
    pub Lambda: f64,
    pub Lambda0: f64,
    /// Absolute slack on the comparison with `ε0`.
    pub tolerance: f64,
}

impl Default for NondegeneracyData {
    fn default() -> Self {
        NondegeneracyData {
            c0: 1.0,
            Lambda: 1.0,
            Lambda0: 0.0,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NondegeneracyCheck {
    /// `min_r sup_{∂B_r(x0)} (u - u(x0)) / r^e` over radii where the sup is positive.
    pub measured_constant: f64,
    pub exponent: f64,
    /// `ε0`; only defined for sources independent of `u`.
    pub theory_constant: Option<f64>,
    /// Largest ladder radius at which the shell sup still vanishes.
    pub core_radius: Option<f64>,
    pub profile: Vec<(f64, f64)>,
    pub pass: bool,
}

/// Lower bound `sup_{∂B_r(x0)} (u - u(x0)) >= C r^e` at a minimum point,
/// with `e = 1 + (1+alpha)/(p-1)` when `m = 0` and `e = β̂` otherwise.
pub fn nondegeneracy_check<F: Field + ?Sized>(
    field: &F,
    x0: [f64; 2],
    params: &ExponentParams,
    ladder: &Ladder,
    data: &NondegeneracyData,
) -> Result<NondegeneracyCheck> {
    let radii = ladder.radii(field);
    let outer = radii.first().copied().ok_or_else(|| Error::Resolution {
        radius: ladder.r_max,
        limit: 4.0 * field.resolution(),
    })?;
    if classify_extremum(field, x0, outer)? != Extremum::Minimum {
        return Err(Error::NotExtremum(
            "non-degeneracy is measured at a minimum point".into(),
        ));
    }
    let (exponent, theory) = if params.m == 0.0 {
        let e = 1.0 + (1.0 + params.alpha) / (params.p - 1.0);
        let eps0 = nondegeneracy_constant(params.n, params.p, params.alpha, data.c0, data.Lambda, data.Lambda0)?;
        (e, Some(eps0))
    } else {
        (growth_exponent(params)?, None)
    };
    let u0 = field.value(x0)?;
    let profile = sup_profile(field, x0, &radii, |x| Ok(field.value(x)? - u0), true)?;
    let zero = field.zero_tolerance();
    let core_radius = profile
        .iter()
        .filter(|&&(_, s)| s <= zero)
        .map(|&(r, _)| r)
        .fold(None, |a: Option<f64>, r| Some(a.map_or(r, |a| a.max(r))));
    let measured = profile
        .iter()
        .filter(|&&(r, s)| s > zero && core_radius.is_none_or(|c| r > c))
        .map(|&(r, s)| s / r.powf(exponent))
        .fold(f64::INFINITY, f64::min);
    let measured = if measured.is_finite() { measured } else { 0.0 };
    let pass = match theory {
        Some(eps0) => measured >= eps0 - data.tolerance,
        None => measured > 0.0,
    };
    Ok(NondegeneracyCheck {
        measured_constant: measured,
        exponent,
        theory_constant: theory,
        core_radius,
        profile,
        pass,
    })
}

/// Fraction of sample points of `B_r(x0)` where `u` exceeds the zero tolerance.
pub fn positive_density<F: Field + ?Sized>(field: &F, x0: [f64; 2], r: f64) -> Result<f64> {
    let pts = area_points(field, x0, r)?;
    let zero = field.zero_tolerance();
    let mut positive = 0usize;
    for x in &pts {
        if field.value(*x)? > zero {
            positive += 1;
        }
    }
    Ok(positive as f64 / pts.len() as f64)
}

/// Area-uniform samples: lattice nodes for grids, a fine square lattice otherwise.
fn area_points<F: Field + ?Sized>(field: &F, x0: [f64; 2], r: f64) -> Result<Vec<[f64; 2]>> {
    field.check_ball(x0, r)?;
    let h = field.resolution();
    if h > 0.0 {
        return field.ball_points(x0, r);
    }
    // cell midpoints of a square lattice
    const HALF: i32 = 100;
    let step = r / HALF as f64;
    let mut pts = Vec::new();
    for j in -HALF..HALF {
        for i in -HALF..HALF {
            let (a, b) = (i as f64 + 0.5, j as f64 + 0.5);
            if a * a + b * b <= (HALF * HALF) as f64 {
                pts.push([x0[0] + a * step, x0[1] + b * step]);
            }
        }
    }
    Ok(pts)
}
