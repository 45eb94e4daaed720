//! Experiment configuration, parsed from a single JSON document.

use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use phenon::analysis::{Ladder, NondegeneracyData};
use phenon::closed_forms::{default_alpha_h, default_sweep, ExponentParams};
use phenon::grid::EpsilonRule;
use phenon::liouville::DecaySettings;
use phenon::{ProblemSpec, ProblemSpec2D, Source2D, SourceSpec, WeightSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    ExactCheck,
    Shoot,
    Bvp,
    #[serde(rename = "solve-2d")]
    Solve2d,
    Fit,
    Nondegeneracy,
    Liouville,
    Borderline,
    Sweep,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::ExactCheck => "exact-check",
            Experiment::Shoot => "shoot",
            Experiment::Bvp => "bvp",
            Experiment::Solve2d => "solve-2d",
            Experiment::Fit => "fit",
            Experiment::Nondegeneracy => "nondegeneracy",
            Experiment::Liouville => "liouville",
            Experiment::Borderline => "borderline",
            Experiment::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// When present, must name the subcommand being run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    pub problem: ProblemConfig,
    pub radial: RadialConfig,
    pub grid: GridConfig,
    pub measure: MeasureConfig,
    pub liouville: LiouvilleConfig,
    pub borderline: BorderlineConfig,
    pub sweep: SweepConfig,
    /// Write `solution.csv`.
    pub write_solution: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
#[allow(non_snake_case)]
pub struct ProblemConfig {
    pub n: usize,
    pub p: f64,
    pub m: f64,
    /// Exponent of the power source weight; excludes `source_weight`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Exponent of the power coefficient; excludes `coefficient`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<WeightSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_weight: Option<WeightSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_h: Option<f64>,
    pub c0: f64,
    pub Lambda: f64,
    pub Lambda0: f64,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig {
            n: 2,
            p: 2.0,
            m: 0.0,
            alpha: None,
            k: None,
            coefficient: None,
            source_weight: None,
            alpha_h: None,
            c0: 1.0,
            Lambda: 1.0,
            Lambda0: 0.0,
        }
    }
}

impl ProblemConfig {
    fn coefficient(&self) -> WeightSpec {
        self.coefficient
            .unwrap_or_else(|| WeightSpec::power(self.k.unwrap_or(0.0)))
    }

    fn source_weight(&self) -> WeightSpec {
        self.source_weight
            .unwrap_or_else(|| WeightSpec::power(self.alpha.unwrap_or(0.0)))
    }

    pub fn spec(&self) -> ProblemSpec {
        ProblemSpec {
            n: self.n,
            p: self.p,
            coefficient: self.coefficient(),
            source: SourceSpec {
                weight: self.source_weight(),
                m: self.m,
                lower_bound_c0: None,
            },
        }
    }

    pub fn params(&self) -> ExponentParams {
        let alpha_h = self.alpha_h.unwrap_or_else(|| default_alpha_h(self.p));
        self.spec().exponent_params(alpha_h)
    }

    pub fn nondegeneracy(&self) -> NondegeneracyData {
        NondegeneracyData {
            c0: self.c0,
            Lambda: self.Lambda,
            Lambda0: self.Lambda0,
            ..Default::default()
        }
    }

    fn validate(&self) -> anyhow::Result<()> {
        if self.alpha.is_some() && self.source_weight.is_some() {
            bail!("problem.alpha and problem.source_weight are mutually exclusive");
        }
        if self.k.is_some() && self.coefficient.is_some() {
            bail!("problem.k and problem.coefficient are mutually exclusive");
        }
        self.spec().validate().context("problem")?;
        if let Some(a) = self.alpha_h {
            if !(a > 0.0 && a <= 1.0) {
                bail!("problem.alpha_h must lie in (0, 1], got {a}");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadialConfig {
    pub tol: f64,
    pub r_max: f64,
    /// Dirichlet value for `bvp`; defaults to the value of the exact
    /// profile `c r^β̂` at `r_max`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_value: Option<f64>,
    /// Center value for `shoot`.
    pub u0: f64,
    /// `shoot` from zero data follows `c r^β̂` instead of the zero branch.
    pub seeded: bool,
}

impl Default for RadialConfig {
    fn default() -> Self {
        RadialConfig {
            tol: 1e-8,
            r_max: 1.0,
            boundary_value: None,
            u0: 0.0,
            seeded: false,
        }
    }
}

/// Dirichlet data of the planar solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Boundary2D {
    /// Trace of the exact solution of the configured problem.
    Exact,
    Constant {
        value: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    /// Lattice size `N` (odd).
    pub size: usize,
    pub epsilon: EpsilonRule,
    pub tol_fp: f64,
    pub tol_lin: f64,
    /// Overrides the radial source built from `problem`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<Source2D>,
    pub boundary: Boundary2D,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            size: 129,
            epsilon: EpsilonRule::default(),
            tol_fp: 1e-9,
            tol_lin: 1e-12,
            source: None,
            boundary: Boundary2D::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    Radial,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `sup |u - u(x0) - ∇u(x0)·(x - x0)|`.
    Oscillation,
    /// `sup |u - u(x0)|`.
    Extremum,
    /// `sup |∇u|`.
    Gradient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeasureConfig {
    pub solver: Solver,
    pub quantity: Quantity,
    pub x0: [f64; 2],
    pub ladder: Ladder,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig {
            solver: Solver::Radial,
            quantity: Quantity::Oscillation,
            x0: [0.0, 0.0],
            ladder: Ladder::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LiouvilleConfig {
    /// Growth coefficient `g` in units of `τ`.
    pub g_over_tau: f64,
    pub decay: DecaySettings,
}

impl Default for LiouvilleConfig {
    fn default() -> Self {
        LiouvilleConfig {
            g_over_tau: 0.5,
            decay: DecaySettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BorderlineConfig {
    pub boundary_value: f64,
    pub r_max: f64,
    pub tolerances: Vec<f64>,
}

impl Default for BorderlineConfig {
    fn default() -> Self {
        BorderlineConfig {
            boundary_value: 1.0,
            r_max: 1.0,
            tolerances: vec![1e-6, 1e-8, 1e-10],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    /// Fit of the exact profile `c r^β̂`.
    Exact,
    /// Fit of `solve_bvp` with dead-core-touching data.
    Radial,
}

/// Cartesian parameter grid; combinations outside the admissible range are skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterGrid {
    pub n: Vec<usize>,
    pub p: Vec<f64>,
    pub m: Vec<f64>,
    pub alpha: Vec<f64>,
    pub k: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub kind: SweepKind,
    /// The default 2 x 4 x 2 x 3 x 2 grid when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<ParameterGrid>,
    /// Exponent tolerance; 1e-10 for exact profiles, 0.01 for radial solves.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            kind: SweepKind::Exact,
            grid: None,
            tolerance: None,
        }
    }
}

impl SweepConfig {
    /// Admissible combinations in lexicographic `(n, p, m, alpha, k)` order.
    pub fn points(&self) -> Vec<ExponentParams> {
        let Some(grid) = &self.grid else {
            return default_sweep();
        };
        let mut out = Vec::new();
        for &n in &grid.n {
            for &p in &grid.p {
                for &m in &grid.m {
                    for &alpha in &grid.alpha {
                        for &k in &grid.k {
                            let params = ExponentParams::new(n, p, m, alpha).with_k(k);
                            if phenon::closed_forms::radial_model_solution(&params).is_ok() {
                                out.push(params);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text).context("invalid config")?;
        Ok(config)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn planar_spec(&self) -> ProblemSpec2D {
        let problem = &self.problem;
        ProblemSpec2D {
            p: problem.p,
            coefficient: problem.coefficient(),
            source: self.grid.source.unwrap_or(Source2D::Radial(SourceSpec {
                weight: problem.source_weight(),
                m: problem.m,
                lower_bound_c0: None,
            })),
        }
    }

    /// Checks every numeric field that the experiment will read.
    pub fn validate(&self, experiment: Experiment) -> anyhow::Result<()> {
        if let Some(named) = self.experiment {
            if named != experiment {
                bail!(
                    "config names experiment `{}` but `{}` was requested",
                    named.name(),
                    experiment.name()
                );
            }
        }
        self.problem.validate()?;
        let radial = &self.radial;
        if !(radial.tol > 0.0 && radial.tol < 1.0) {
            bail!("radial.tol must lie in (0, 1), got {}", radial.tol);
        }
        if !(radial.r_max > 0.0 && radial.r_max.is_finite()) {
            bail!("radial.r_max must be finite and > 0, got {}", radial.r_max);
        }
        if let Some(g) = radial.boundary_value {
            if !(g >= 0.0 && g.is_finite()) {
                bail!("radial.boundary_value must be finite and >= 0, got {g}");
            }
        }
        let grid = &self.grid;
        if grid.size < 33 || grid.size.is_multiple_of(2) {
            bail!("grid.size must be odd and >= 33, got {}", grid.size);
        }
        if !(grid.tol_fp > 0.0 && grid.tol_lin > 0.0) {
            bail!("grid tolerances must be > 0");
        }
        let eps = grid.epsilon.epsilon(2.0 / (grid.size - 1) as f64);
        if !(eps > 0.0 && eps.is_finite()) {
            bail!("grid.epsilon must give a positive value, got {eps}");
        }
        if matches!(experiment, Experiment::Solve2d) || self.measure.solver == Solver::Grid {
            self.planar_spec().validate().context("planar problem")?;
        }
        let ladder = &self.measure.ladder;
        if !(ladder.r_max > 0.0) || ladder.levels < 3 {
            bail!("measure.ladder needs r_max > 0 and at least 3 levels");
        }
        if !self.measure.x0.iter().all(|c| c.is_finite()) {
            bail!("measure.x0 must be finite");
        }
        let decay = &self.liouville.decay;
        if !(self.liouville.g_over_tau >= 0.0) || !(decay.tol > 0.0) || !(decay.decay_ratio >= 0.0) {
            bail!("liouville settings must be nonnegative with tol > 0");
        }
        let borderline = &self.borderline;
        if !(borderline.boundary_value >= 0.0 && borderline.r_max > 0.0)
            || borderline.tolerances.iter().any(|t| !(*t > 0.0))
        {
            bail!("borderline needs boundary_value >= 0, r_max > 0 and positive tolerances");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ExperimentConfig::from_json(r#"{"problem": {"n": 2, "q": 3}}"#).unwrap_err();
        assert!(format!("{err:#}").contains("unknown field `q`"));
        assert!(ExperimentConfig::from_json(r#"{"colour": 1}"#).is_err());
    }

    #[test]
    fn empty_document_gives_defaults() {
        let config = ExperimentConfig::from_json("{}").unwrap();
        assert_eq!(config, ExperimentConfig::default());
        config.validate(Experiment::Sweep).unwrap();
    }

    #[test]
    fn serialized_config_round_trips() {
        let text = r#"{"problem": {"n": 3, "p": 3.0, "m": 0.5, "alpha": 1.0},
                       "grid": {"source": {"kind": "axis_power", "axis": 0, "alpha": 1.0}},
                       "sweep": {"kind": "radial", "grid": {"n": [2], "p": [2.0], "m": [0.5], "alpha": [0.0], "k": [0.0]}}}"#;
        let config = ExperimentConfig::from_json(text).unwrap();
        let again = ExperimentConfig::from_json(&serde_json::to_string(&config).unwrap()).unwrap();
        assert_eq!(config, again);
    }

    #[test]
    fn conflicting_fields_fail_validation() {
        let config = ExperimentConfig::from_json(
            r#"{"problem": {"alpha": 1.0, "source_weight": {"kind": "matukuma", "sigma": 2.0}}}"#,
        )
        .unwrap();
        assert!(config.validate(Experiment::Bvp).is_err());
        let config = ExperimentConfig::from_json(r#"{"experiment": "bvp"}"#).unwrap();
        assert!(config.validate(Experiment::Shoot).is_err());
        let config = ExperimentConfig::from_json(r#"{"grid": {"size": 64}}"#).unwrap();
        assert!(config.validate(Experiment::Solve2d).is_err());
    }

    #[test]
    fn explicit_grid_filters_inadmissible_points() {
        let config = SweepConfig {
            grid: Some(ParameterGrid {
                n: vec![2],
                p: vec![2.0],
                m: vec![0.5, 1.0, 1.5],
                alpha: vec![0.0],
                k: vec![0.0],
            }),
            ..Default::default()
        };
        assert_eq!(config.points().len(), 1);
    }
}
