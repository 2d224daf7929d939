//! TOML scenario configuration. Unknown keys are rejected and `seed` is
//! mandatory; all checks happen before any computation.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Rotation,
    Bounded,
    Sectorial,
    Elliptic1d,
    Elliptic2d,
    Sweep,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Rotation => "rotation",
            Self::Bounded => "bounded",
            Self::Sectorial => "sectorial",
            Self::Elliptic1d => "elliptic1d",
            Self::Elliptic2d => "elliptic2d",
            Self::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Option<ScenarioKind>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub operator: Option<OperatorSource>,
    pub cone: Option<ConeConfig>,
    #[serde(default)]
    pub report: ReportConfig,
    pub mesh: Option<MeshConfig>,
    #[serde(default)]
    pub coefficients: CoefficientsConfig,
    #[serde(default)]
    pub boundary: BoundaryConfig,
    pub sweep: Option<SweepConfig>,
    /// Checks whose `Fail` is the documented outcome of this scenario.
    #[serde(default)]
    pub expected_fail: Vec<String>,
    /// Directory used to resolve relative paths; set by the loader.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub membership: Option<f64>,
    pub ge: Option<f64>,
    pub gap: Option<f64>,
    pub power: Option<f64>,
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSource {
    pub builtin: Option<String>,
    pub matrix: Option<PathBuf>,
    pub rows: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeKind {
    Orthant,
    IceCream,
    Grid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    pub kind: ConeKind,
    pub dim: Option<usize>,
    /// CSV of 0/1 flags for the grid-function cone.
    pub mask: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportConfig {
    pub lambda_samples: Option<Vec<f64>>,
    pub t_samples: Option<Vec<f64>>,
    pub samples: Option<usize>,
}

/// Interval end: a number or an expression `pi`, `k*pi`, `pi/k`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Number(f64),
    Expr(String),
}

impl Bound {
    pub fn value(&self) -> Result<f64, RunError> {
        let s = match self {
            Self::Number(v) => return Ok(*v),
            Self::Expr(s) => s.replace(' ', ""),
        };
        let pi = std::f64::consts::PI;
        let bad = || RunError::Config(format!("cannot read bound {s:?}; use a number, pi, k*pi or pi/k"));
        if s == "pi" {
            Ok(pi)
        } else if let Some(k) = s.strip_suffix("*pi") {
            k.parse::<f64>().map(|k| k * pi).map_err(|_| bad())
        } else if let Some(k) = s.strip_prefix("pi/") {
            k.parse::<f64>().map(|k| pi / k).map_err(|_| bad())
        } else {
            Err(bad())
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    pub lower: Option<Vec<Bound>>,
    pub upper: Option<Vec<Bound>>,
    pub counts: Vec<usize>,
    /// Two copies of the problem with no coupling.
    #[serde(default)]
    pub decoupled: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FieldConfig {
    Number(f64),
    Spec(FieldSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Constant {
        value: f64,
    },
    Linear {
        value: f64,
        gradient: Vec<f64>,
    },
    Sinusoidal {
        #[serde(default)]
        offset: f64,
        amplitude: f64,
        wavenumber: Vec<f64>,
        #[serde(default)]
        phase: f64,
    },
    Grid {
        file: PathBuf,
    },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsConfig {
    #[serde(alias = "a")]
    pub a11: Option<FieldConfig>,
    pub a12: Option<FieldConfig>,
    pub a22: Option<FieldConfig>,
    #[serde(alias = "b")]
    pub b1: Option<FieldConfig>,
    pub b2: Option<FieldConfig>,
    pub c: Option<FieldConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            Self::One(v) => vec![*v],
            Self::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideValues {
    pub alpha: OneOrMany,
    pub beta: OneOrMany,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SideConfig {
    Named(String),
    Values(SideValues),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    pub left: Option<SideConfig>,
    pub right: Option<SideConfig>,
    pub bottom: Option<SideConfig>,
    pub top: Option<SideConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub counts: Vec<usize>,
    /// Continuum principal eigenvalue; derived from the closed form when
    /// omitted.
    pub reference: Option<f64>,
    #[serde(default = "default_order")]
    pub expected_order: f64,
    #[serde(default = "default_order_tol")]
    pub order_tol: f64,
}

fn default_order() -> f64 {
    2.0
}

fn default_order_tol() -> f64 {
    0.2
}

impl ScenarioConfig {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self, RunError> {
        let mut cfg: Self = toml::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml(&text, &base)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn check(&self) -> Result<(), RunError> {
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x > 0.0 && x.is_finite()) => Err(RunError::Config(format!("tolerances.{name} must be positive"))),
            _ => Ok(()),
        };
        positive("membership", self.tolerances.membership)?;
        positive("ge", self.tolerances.ge)?;
        positive("gap", self.tolerances.gap)?;
        positive("power", self.tolerances.power)?;
        if let Some(op) = &self.operator {
            let given = [op.builtin.is_some(), op.matrix.is_some(), op.rows.is_some()].iter().filter(|b| **b).count();
            if given != 1 {
                return Err(RunError::Config("operator needs exactly one of builtin, matrix, rows".into()));
            }
        }
        if let Some(ts) = &self.report.t_samples {
            if ts.iter().any(|t| !(*t >= 0.0)) {
                return Err(RunError::Config("report.t_samples must be nonnegative".into()));
            }
        }
        if let Some(s) = &self.sweep {
            if s.counts.len() < 3 {
                return Err(RunError::Config("sweep.counts needs at least three mesh sizes".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ScenarioConfig, RunError> {
        ScenarioConfig::from_toml(text, Path::new("."))
    }

    #[test]
    fn minimal_and_full_configs() {
        let c = parse("seed = 3\nscenario = \"rotation\"\n").unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.scenario, Some(ScenarioKind::Rotation));
        let c = parse(
            r#"
            seed = 1
            scenario = "elliptic1d"
            [mesh]
            upper = ["pi"]
            counts = [50]
            [coefficients]
            a = 1.0
            c = { kind = "sinusoidal", amplitude = 0.5, wavenumber = [2.0] , offset = 1.0 }
            [boundary]
            left = "dirichlet"
            right = { alpha = 0.0, beta = 1.0 }
            "#,
        )
        .unwrap();
        let m = c.mesh.unwrap();
        assert_eq!(m.upper.unwrap()[0].value().unwrap(), std::f64::consts::PI);
        assert!(matches!(c.coefficients.c, Some(FieldConfig::Spec(FieldSpec::Sinusoidal { .. }))));
    }

    #[test]
    fn rejects_unknown_keys_and_missing_seed() {
        assert!(matches!(parse("scenario = \"bounded\"\n"), Err(RunError::Config(_))));
        assert!(matches!(parse("seed = 1\ncolour = 2\n"), Err(RunError::Config(_))));
        assert!(matches!(parse("seed = 1\n[mesh]\ncounts = [3]\nextra = 1\n"), Err(RunError::Config(_))));
        assert!(matches!(parse("seed = 1\n[operator]\nbuiltin = \"rotation\"\nrows = [[1.0]]\n"), Err(RunError::Config(_))));
    }

    #[test]
    fn bound_expressions() {
        assert_eq!(Bound::Expr("2*pi".into()).value().unwrap(), 2.0 * std::f64::consts::PI);
        assert_eq!(Bound::Expr("pi/2".into()).value().unwrap(), std::f64::consts::FRAC_PI_2);
        assert!(Bound::Expr("tau".into()).value().is_err());
    }
}
