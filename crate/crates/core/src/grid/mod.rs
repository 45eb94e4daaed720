//! Planar Dirichlet solver on the unit disc.
//!
//! The operator `div((|∇u|^2 + ε^2)^{(p-2)/2} A(|x|) ∇u)` is discretized by
//! the five-point stencil with coefficients frozen on cell edges. Edges that
//! leave the disc are shortened to the crossing point with the circle, where
//! the Dirichlet value is imposed; only the diagonal sees the shortened edge,
//! so the matrix stays symmetric. Each Picard step solves one linear problem
//! by preconditioned conjugate gradients.

mod pcg;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::problem::{ProblemSpec2D, Source2D, SourceSpec, WeightSpec};

const MAX_PICARD: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    /// `|x| < 1`; carries an unknown.
    Interior,
    /// Outside the open disc with an interior 4-neighbor; carries `g(angle)`.
    Ring,
    Outside,
}

/// `N × N` lattice on `[-1, 1]^2` restricted to the unit disc.
#[derive(Debug, Clone)]
pub struct DiscGrid {
    pub n: usize,
    pub h: f64,
    kinds: Vec<NodeKind>,
    /// Unknown index of each interior lattice node.
    unknown: Vec<usize>,
    /// Lattice index of each unknown.
    nodes: Vec<usize>,
}

impl DiscGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 33 || n.is_multiple_of(2) {
            return domain(format!("lattice size must be odd and >= 33, got {n}"));
        }
        let h = 2.0 / (n - 1) as f64;
        let mut grid = DiscGrid {
            n,
            h,
            kinds: vec![NodeKind::Outside; n * n],
            unknown: vec![pcg::NONE; n * n],
            nodes: Vec::new(),
        };
        for j in 0..n {
            for i in 0..n {
                let (x, y) = grid.coord(i, j);
                if x * x + y * y < 1.0 {
                    let k = grid.index(i, j);
                    grid.kinds[k] = NodeKind::Interior;
                    grid.unknown[k] = grid.nodes.len();
                    grid.nodes.push(k);
                }
            }
        }
        for t in 0..grid.nodes.len() {
            let k = grid.nodes[t];
            for nb in [k - 1, k + 1, k - n, k + n] {
                if grid.kinds[nb] == NodeKind::Outside {
                    grid.kinds[nb] = NodeKind::Ring;
                }
            }
        }
        Ok(grid)
    }

    /// Lattice coordinate; exactly antisymmetric under `i ↦ n-1-i`.
    pub fn coordinate(&self, i: usize) -> f64 {
        let m = (self.n - 1) as f64;
        (2.0 * i as f64 - m) / m
    }

    pub fn coord(&self, i: usize, j: usize) -> (f64, f64) {
        (self.coordinate(i), self.coordinate(j))
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n + i
    }

    pub fn kind(&self, i: usize, j: usize) -> NodeKind {
        self.kinds[self.index(i, j)]
    }

    pub fn interior_count(&self) -> usize {
        self.nodes.len()
    }

    /// `(i, j)` of every interior node, row by row.
    pub fn interior_nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes.iter().map(move |&k| (k % self.n, k / self.n))
    }

    fn position(&self, k: usize) -> (f64, f64) {
        self.coord(k % self.n, k / self.n)
    }
}

/// Mesh-dependent regularization parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EpsilonRule {
    /// `ε = factor · h`.
    MeshMultiple {
        factor: f64,
    },
    Fixed {
        value: f64,
    },
}

impl Default for EpsilonRule {
    fn default() -> Self {
        EpsilonRule::MeshMultiple { factor: 1.0 }
    }
}

impl EpsilonRule {
    pub fn epsilon(&self, h: f64) -> f64 {
        match *self {
            EpsilonRule::MeshMultiple { factor } => factor * h,
            EpsilonRule::Fixed { value } => value,
        }
    }
}

/// Converged lattice function.
#[derive(Debug, Clone)]
pub struct GridSolution {
    pub grid: DiscGrid,
    /// Lattice values, row by row; `NaN` at [`NodeKind::Outside`] nodes.
    pub values: Vec<f64>,
    pub iterations: usize,
    pub linear_iterations: usize,
    /// Relative max-norm change of the last Picard step.
    pub update_norm: f64,
    pub epsilon: f64,
    pub tol_fp: f64,
    pub spec: ProblemSpec2D,
}

#[derive(Debug, Clone, Copy)]
enum Link {
    Node(usize),
    /// Edge shortened to `theta · h`, ending on the circle where `u = value`.
    Cut {
        theta: f64,
        value: f64,
    },
}

// E, W, N, S
const DIRS: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

struct Assembly<'a> {
    grid: &'a DiscGrid,
    spec: &'a ProblemSpec2D,
    epsilon: f64,
    links: Vec<[Link; 4]>,
    /// Coefficient `A` at the midpoint of each link.
    edge_weight: Vec<[f64; 4]>,
    source_weight: Vec<f64>,
}

impl<'a> Assembly<'a> {
    fn new(grid: &'a DiscGrid, spec: &'a ProblemSpec2D, epsilon: f64, boundary: &dyn Fn(f64) -> f64) -> Self {
        let h = grid.h;
        let n = grid.n as isize;
        let mut links = Vec::with_capacity(grid.nodes.len());
        let mut edge_weight = Vec::with_capacity(grid.nodes.len());
        let mut source_weight = Vec::with_capacity(grid.nodes.len());
        for &k in &grid.nodes {
            let (x, y) = grid.position(k);
            let mut node_links = [Link::Node(0); 4];
            let mut weights = [0.0; 4];
            for (d, &(dx, dy)) in DIRS.iter().enumerate() {
                let nb = (k as isize + dx + dy * n) as usize;
                let (link, length) = if grid.kinds[nb] == NodeKind::Interior {
                    (Link::Node(grid.unknown[nb]), h)
                } else {
                    // distance along the axis to the circle
                    let t = if dx != 0 {
                        (1.0 - y * y).max(0.0).sqrt() - x * dx as f64
                    } else {
                        (1.0 - x * x).max(0.0).sqrt() - y * dy as f64
                    };
                    let t = t.clamp(1e-12 * h, h);
                    let (bx, by) = (x + t * dx as f64, y + t * dy as f64);
                    let value = boundary(by.atan2(bx));
                    (Link::Cut { theta: t / h, value }, t)
                };
                node_links[d] = link;
                let (mx, my) = (x + 0.5 * length * dx as f64, y + 0.5 * length * dy as f64);
                weights[d] = spec.coefficient.value(mx.hypot(my), spec.p);
            }
            links.push(node_links);
            edge_weight.push(weights);
            source_weight.push(node_source_weight(spec, x, y, h));
        }
        Assembly {
            grid,
            spec,
            epsilon,
            links,
            edge_weight,
            source_weight,
        }
    }

    /// Centered difference along `(dx, dy)` at lattice node `k`.
    fn centered(&self, u: &[f64], k: usize, horizontal: bool) -> f64 {
        let s = if horizontal { 1 } else { self.grid.n };
        (u[k + s] - u[k - s]) / (2.0 * self.grid.h)
    }

    fn edge_gradient_sq(&self, u: &[f64], t: usize, d: usize) -> f64 {
        let k = self.grid.nodes[t];
        let horizontal = DIRS[d].0 != 0;
        let sign = (DIRS[d].0 + DIRS[d].1) as f64;
        let h = self.grid.h;
        match self.links[t][d] {
            Link::Node(other) => {
                let j = self.grid.nodes[other];
                let normal = sign * (u[j] - u[k]) / h;
                let tangential = 0.5 * (self.centered(u, k, !horizontal) + self.centered(u, j, !horizontal));
                normal * normal + tangential * tangential
            }
            Link::Cut { theta, value } => {
                let normal = (value - u[k]) / (theta * h);
                let tangential = self.centered(u, k, !horizontal);
                normal * normal + tangential * tangential
            }
        }
    }

    /// Frozen-coefficient system at the iterate `u`; `linear` selects the
    /// `p = 2` operator used for the initial guess.
    #[allow(clippy::needless_range_loop)]
    fn system(&self, u: &[f64], linear: bool, delta: f64) -> Result<(pcg::Stencil, Vec<f64>)> {
        let size = self.grid.nodes.len();
        let h2 = self.grid.h * self.grid.h;
        let p = self.spec.p;
        let m = self.spec.source.m();
        let mut a = pcg::Stencil::new(size);
        let mut b = vec![0.0; size];
        for t in 0..size {
            let k = self.grid.nodes[t];
            for d in 0..4 {
                let mut gamma = self.edge_weight[t][d];
                if !linear && p != 2.0 {
                    let g2 = self.edge_gradient_sq(u, t, d);
                    gamma *= (g2 + self.epsilon * self.epsilon).powf(0.5 * (p - 2.0));
                }
                if !(gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::Invariant(format!("edge coefficient {gamma} at node {k}")));
                }
                match self.links[t][d] {
                    Link::Node(other) => {
                        let c = gamma / h2;
                        a.diag[t] += c;
                        a.off[t][d] = (other, -c);
                    }
                    Link::Cut { theta, value } => {
                        let c = gamma / (theta * h2);
                        a.diag[t] += c;
                        b[t] += c * value;
                    }
                }
            }
            let w = self.source_weight[t];
            if m == 0.0 {
                b[t] -= w;
            } else if u[k] > 0.0 {
                // u_+^m = (u^{m-1}) u with the first factor lagged
                a.diag[t] += w * u[k].max(delta).powf(m - 1.0);
            }
        }
        Ok((a, b))
    }
}

/// Average of the source weight over the lattice cell centered at `(x, y)`.
fn node_source_weight(spec: &ProblemSpec2D, x: f64, y: f64, h: f64) -> f64 {
    match spec.source {
        Source2D::Zero => 0.0,
        Source2D::AxisPower { axis, alpha } => {
            let t = if axis == 0 { x } else { y };
            let antiderivative = |s: f64| s.signum() * s.abs().powf(alpha + 1.0) / (alpha + 1.0);
            (antiderivative(t + 0.5 * h) - antiderivative(t - 0.5 * h)) / h
        }
        Source2D::Radial(_) => {
            // 4 x 4 Gauss-Legendre; the nodes avoid the cell center
            const NODES: [f64; 4] = [
                -0.861_136_311_594_052_6,
                -0.339_981_043_584_856_3,
                0.339_981_043_584_856_3,
                0.861_136_311_594_052_6,
            ];
            const WEIGHTS: [f64; 4] = [
                0.347_854_845_137_453_9,
                0.652_145_154_862_546_1,
                0.652_145_154_862_546_1,
                0.347_854_845_137_453_9,
            ];
            let mut acc = 0.0;
            for (a, wa) in NODES.iter().zip(WEIGHTS) {
                for (b, wb) in NODES.iter().zip(WEIGHTS) {
                    acc += wa * wb * spec.source.weight_at(x + 0.5 * h * a, y + 0.5 * h * b, spec.p);
                }
            }
            acc / 4.0
        }
    }
}

fn max_abs<'a>(it: impl Iterator<Item = &'a f64>) -> f64 {
    it.fold(0.0, |acc: f64, v| acc.max(v.abs()))
}

/// Picard relaxation; the frozen-coefficient map has spectrum in
/// `[-(p-2), 0]` for `p > 2`, which `2/p` centers around zero.
fn relaxation(p: f64) -> f64 {
    if p > 2.0 {
        2.0 / p
    } else {
        1.0
    }
}

/// Solves the regularized Dirichlet problem with `u = boundary(θ)` at the
/// point `(cos θ, sin θ)`.
pub fn solve_disc(
    spec: &ProblemSpec2D,
    boundary: impl Fn(f64) -> f64,
    n: usize,
    epsilon: f64,
    tol_fp: f64,
    tol_lin: f64,
) -> Result<GridSolution> {
    spec.validate()?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return domain(format!("epsilon must be finite and > 0, got {epsilon}"));
    }
    if !(tol_fp > 0.0 && tol_lin > 0.0) {
        return domain(format!("tolerances must be > 0, got {tol_fp} and {tol_lin}"));
    }
    let grid = DiscGrid::new(n)?;
    let assembly = Assembly::new(&grid, spec, epsilon, &boundary);

    let mut u = vec![f64::NAN; n * n];
    let mut scale: f64 = 0.0;
    for (k, kind) in grid.kinds.iter().enumerate() {
        match kind {
            NodeKind::Interior => u[k] = 0.0,
            NodeKind::Ring => {
                let (x, y) = grid.position(k);
                u[k] = boundary(y.atan2(x));
                scale = scale.max(u[k].abs());
            }
            NodeKind::Outside => {}
        }
    }
    let delta = 1e-12 * scale.max(1.0);
    let theta = relaxation(spec.p);
    let max_linear = 4 * grid.nodes.len() + 100;

    let mut x: Vec<f64> = vec![0.0; grid.nodes.len()];
    let mut linear_iterations = 0;
    let mut update = f64::INFINITY;
    for iteration in 0..MAX_PICARD {
        let first = iteration == 0;
        let (a, b) = assembly.system(&u, first, delta)?;
        linear_iterations += pcg::solve(&a, &b, &mut x, tol_lin, max_linear)?;
        let relax = if first { 1.0 } else { theta };
        let mut change: f64 = 0.0;
        for (t, &k) in grid.nodes.iter().enumerate() {
            let next = u[k] + relax * (x[t] - u[k]);
            change = change.max((next - u[k]).abs());
            u[k] = next;
        }
        let size = max_abs(grid.nodes.iter().map(|&k| &u[k])).max(scale);
        update = if size > 0.0 { change / size } else { change };
        if !update.is_finite() {
            break;
        }
        if !first && update <= tol_fp {
            return Ok(GridSolution {
                grid,
                values: u,
                iterations: iteration + 1,
                linear_iterations,
                update_norm: update,
                epsilon,
                tol_fp,
                spec: *spec,
            });
        }
        for (t, &k) in grid.nodes.iter().enumerate() {
            x[t] = u[k];
        }
    }
    Err(Error::NonConvergence {
        iterations: MAX_PICARD,
        update,
    })
}

impl GridSolution {
    pub fn h(&self) -> f64 {
        self.grid.h
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// `(x, y, u)` for every interior node.
    pub fn interior_values(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.grid.nodes.iter().map(move |&k| {
            let (x, y) = self.grid.position(k);
            (x, y, self.values[k])
        })
    }

    /// `(x, y, u)` for every interior and ring node, row by row.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.grid
            .kinds
            .iter()
            .enumerate()
            .filter(|(_, kind)| **kind != NodeKind::Outside)
            .map(move |(k, _)| {
                let (x, y) = self.grid.position(k);
                (x, y, self.values[k])
            })
    }

    /// Largest `|u - oracle|` over interior nodes.
    pub fn max_error(&self, oracle: impl Fn(f64, f64) -> f64) -> f64 {
        self.interior_values()
            .map(|(x, y, u)| (u - oracle(x, y)).abs())
            .fold(0.0, f64::max)
    }

    fn cell(&self, x: f64, y: f64, margin: f64) -> Result<(usize, usize, f64, f64)> {
        let r = x.hypot(y);
        if !(1.0 - r > margin) {
            return Err(Error::OutsideDomain(format!(
                "point ({x}, {y}) is within {margin} of the boundary"
            )));
        }
        let h = self.grid.h;
        let locate = |c: f64| {
            let s = (c + 1.0) / h;
            let i = (s.floor() as usize).min(self.grid.n - 2);
            (i, s - i as f64)
        };
        let (i, fx) = locate(x);
        let (j, fy) = locate(y);
        Ok((i, j, fx, fy))
    }

    fn bilinear(&self, i: usize, j: usize, fx: f64, fy: f64, f: impl Fn(usize, usize) -> f64) -> f64 {
        (1.0 - fx) * (1.0 - fy) * f(i, j)
            + fx * (1.0 - fy) * f(i + 1, j)
            + (1.0 - fx) * fy * f(i, j + 1)
            + fx * fy * f(i + 1, j + 1)
    }

    /// Bilinear interpolant; requires the enclosing cell to lie in the disc.
    pub fn value_at(&self, x: [f64; 2]) -> Result<f64> {
        let (i, j, fx, fy) = self.cell(x[0], x[1], std::f64::consts::SQRT_2 * self.grid.h)?;
        Ok(self.bilinear(i, j, fx, fy, |a, b| self.value(a, b)))
    }

    /// Centered node gradient at interior node `(i, j)`.
    pub fn node_gradient(&self, i: usize, j: usize) -> [f64; 2] {
        let h2 = 2.0 * self.grid.h;
        [
            (self.value(i + 1, j) - self.value(i - 1, j)) / h2,
            (self.value(i, j + 1) - self.value(i, j - 1)) / h2,
        ]
    }
}

/// Bilinear interpolation of centered node gradients; `x` must be farther
/// than `2h` from the circle.
pub fn gradient_at(sol: &GridSolution, x: [f64; 2]) -> Result<[f64; 2]> {
    let (i, j, fx, fy) = sol.cell(x[0], x[1], 2.0 * sol.grid.h)?;
    let gx = sol.bilinear(i, j, fx, fy, |a, b| sol.node_gradient(a, b)[0]);
    let gy = sol.bilinear(i, j, fx, fy, |a, b| sol.node_gradient(a, b)[1]);
    Ok([gx, gy])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementRow {
    pub n: usize,
    pub h: f64,
    pub epsilon: f64,
    pub error: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementStudy {
    pub rows: Vec<RefinementRow>,
    /// Least-squares slope of `log error` against `log h`; `None` when some
    /// error vanishes or fewer than two rows exist.
    pub order: Option<f64>,
}

/// Max-norm error against `oracle` on successively finer lattices.
pub fn refine_study(
    spec: &ProblemSpec2D,
    boundary: impl Fn(f64) -> f64,
    oracle: impl Fn(f64, f64) -> f64,
    n_list: &[usize],
    rule: EpsilonRule,
    tol_fp: f64,
    tol_lin: f64,
) -> Result<RefinementStudy> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return domain("lattice sizes must be strictly increasing");
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let h = 2.0 / (n as f64 - 1.0);
        let epsilon = rule.epsilon(h);
        let sol = solve_disc(spec, &boundary, n, epsilon, tol_fp, tol_lin)?;
        rows.push(RefinementRow {
            n,
            h,
            epsilon,
            error: sol.max_error(&oracle),
            iterations: sol.iterations,
        });
    }
    let order = if rows.len() >= 2 && rows.iter().all(|r| r.error > 0.0) {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.h.ln(), r.error.ln())).collect();
        Some(least_squares_slope(&pts))
    } else {
        None
    };
    Ok(RefinementStudy { rows, order })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Uniform-source Poisson data `Δu = 1`, `u = 0` on the circle.
pub fn poisson_spec() -> ProblemSpec2D {
    ProblemSpec2D {
        p: 2.0,
        coefficient: WeightSpec::identity(),
        source: Source2D::Radial(SourceSpec::power(0.0, 0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::separable_solution;

    fn poisson_exact(x: f64, y: f64) -> f64 {
        (x * x + y * y - 1.0) / 4.0
    }

    #[test]
    fn lattice_is_symmetric_and_padded() {
        let grid = DiscGrid::new(33).unwrap();
        let n = grid.n;
        for j in 0..n {
            for i in 0..n {
                let kind = grid.kind(i, j);
                assert_eq!(kind, grid.kind(n - 1 - i, j));
                assert_eq!(kind, grid.kind(j, i));
                if kind == NodeKind::Interior {
                    assert!(i > 0 && j > 0 && i < n - 1 && j < n - 1);
                }
            }
        }
        assert_eq!(grid.coord(16, 16), (0.0, 0.0));
        assert!(DiscGrid::new(32).is_err());
        assert!(DiscGrid::new(31).is_err());
    }

    #[test]
    fn poisson_error_is_second_order_small() {
        let sol = solve_disc(&poisson_spec(), |_| 0.0, 129, 1.0 / 64.0, 1e-10, 1e-12).unwrap();
        let h = sol.h();
        let err = sol.max_error(poisson_exact);
        assert!(err <= 3.0 * h * h, "error {err} vs {}", 3.0 * h * h);
        let g = gradient_at(&sol, [0.0, 0.0]).unwrap();
        assert!(g[0].abs() <= h * h && g[1].abs() <= h * h);
    }

    #[test]
    fn affine_data_are_reproduced() {
        let spec = ProblemSpec2D {
            source: Source2D::Zero,
            ..poisson_spec()
        };
        let sol = solve_disc(&spec, |t| 0.3 + 2.0 * t.cos() - 0.5 * t.sin(), 65, 0.01, 1e-12, 1e-14).unwrap();
        assert!(sol.max_error(|x, y| 0.3 + 2.0 * x - 0.5 * y) < 1e-10);
        let g = gradient_at(&sol, [0.2, -0.1]).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-10 && (g[1] + 0.5).abs() < 1e-10);
        assert!(gradient_at(&sol, [0.99, 0.0]).is_err());
    }

    #[test]
    fn constants_are_exact_for_any_p() {
        let spec = ProblemSpec2D {
            p: 4.0,
            source: Source2D::Zero,
            ..poisson_spec()
        };
        let study = refine_study(
            &spec,
            |_| 1.5,
            |_, _| 1.5,
            &[33, 65],
            EpsilonRule::default(),
            1e-10,
            1e-12,
        )
        .unwrap();
        for row in &study.rows {
            assert!(row.error < 1e-10);
        }
    }

    #[test]
    fn zero_data_with_absorption_give_zero() {
        let spec = ProblemSpec2D::power(2.0, 0.5, 0.0);
        let sol = solve_disc(&spec, |_| 0.0, 33, 0.1, 1e-10, 1e-12).unwrap();
        assert!(sol.interior_values().all(|(_, _, u)| u == 0.0));
    }

    #[test]
    fn separable_p4_profile() {
        let exact = separable_solution(4.0, 1.0, 0).unwrap();
        let spec = ProblemSpec2D {
            p: 4.0,
            coefficient: WeightSpec::identity(),
            source: Source2D::AxisPower { axis: 0, alpha: 1.0 },
        };
        let sol = solve_disc(&spec, |t| exact.value(&[t.cos(), t.sin()]), 65, 1.0 / 32.0, 1e-9, 1e-12).unwrap();
        let h = sol.h();
        let err = sol.max_error(|x, y| exact.value(&[x, y]));
        assert!(err < 2.0 * h, "error {err}");
        let g = gradient_at(&sol, [0.0, 0.3]).unwrap();
        assert!(g[0].abs() <= h, "{g:?}");
    }

    #[test]
    fn signs_follow_the_source() {
        let sol = solve_disc(&poisson_spec(), |_| 0.0, 33, 0.1, 1e-10, 1e-12).unwrap();
        assert!(sol.interior_values().all(|(_, _, u)| u <= 0.0));
        let spec = ProblemSpec2D::power(3.0, 0.5, 1.0);
        let sol = solve_disc(&spec, |t| 0.2 + 0.1 * t.cos(), 33, 1.0 / 16.0, 1e-9, 1e-12).unwrap();
        assert!(sol.interior_values().all(|(_, _, u)| u >= 0.0));
    }

    #[test]
    fn radial_data_give_symmetric_solution() {
        let spec = ProblemSpec2D::power(3.0, 0.5, 0.0);
        let sol = solve_disc(&spec, |_| 0.5, 33, 1.0 / 16.0, 1e-10, 1e-13).unwrap();
        let n = sol.grid.n;
        for (i, j) in sol.grid.interior_nodes() {
            let u = sol.value(i, j);
            for (a, b) in [(n - 1 - i, j), (i, n - 1 - j), (j, i)] {
                assert!((u - sol.value(a, b)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn raising_boundary_data_raises_solution() {
        let spec = ProblemSpec2D::power(2.5, 0.5, 0.0);
        let g = |t: f64| 0.3 + 0.2 * (2.0 * t).sin();
        let lo = solve_disc(&spec, g, 33, 1.0 / 16.0, 1e-10, 1e-13).unwrap();
        let hi = solve_disc(&spec, |t| g(t) + 0.05 * (1.0 + t.cos()), 33, 1.0 / 16.0, 1e-10, 1e-13).unwrap();
        for (a, b) in lo.interior_values().zip(hi.interior_values()) {
            assert!(b.2 >= a.2 - 1e-8);
        }
    }
}
