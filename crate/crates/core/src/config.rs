//! Flat TOML run configuration. Unknown keys are rejected; every field has a
//! default so a config may be as short as the space parameters.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{ball_grid, ConvergenceOptions, TestFunction};
use crate::cylinder::CylinderSpace;
use crate::error::{invalid, Error, Result};
use crate::verify::Check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionName {
    #[default]
    AbsX1,
    ExpX1PlusY1,
    RadialBump,
    Polynomial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub d: usize,
    pub m: usize,
    pub mu: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,

    pub n_list: Vec<usize>,
    pub delta_list: Vec<f64>,

    /// Chebyshev extrema per cube axis on the sup-error grid.
    pub cube_grid: usize,
    /// Points (`d = 1`) or radii (`d = 2`) of the `y'` grid; 0 picks 33
    /// points or 17 radii.
    pub ball_radii: usize,
    /// Angles per radius of the `y'` grid (`d = 2` only).
    pub ball_angles: usize,

    /// Each level doubles the base exactness `4n + 16` of Lebesgue rules.
    pub refinement_level: u32,
    /// Expansion rule exactness is `2 n_max + oversample`.
    pub oversample: usize,
    /// Nodes of the `D_lambda` rule; the refinement uses twice as many.
    pub dlambda_nodes: usize,

    /// Kernel and Lebesgue evaluation points. `x_prime` defaults to the
    /// corner `(1, ..., 1)`. Without `y_prime`, `lebesgue` takes the sup over
    /// the `y'` grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_prime: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_prime: Option<Vec<f64>>,

    pub function: FunctionName,
    /// Polynomial terms: coefficient `poly_coeffs[i]` times the monomial with
    /// exponents `poly_exponents[i]` over `(x_1..x_m, y_1..y_d)`.
    pub poly_coeffs: Vec<f64>,
    pub poly_exponents: Vec<Vec<u32>>,
    /// Also report the Lebesgue sup for each `converge` row.
    pub converge_lebesgue: bool,

    pub lambda_list: Vec<f64>,
    pub dlambda_v: f64,
    pub dlambda_u: f64,

    pub checks: Vec<Check>,
    /// Test hook: scale one basis element by 1 + 1e-3 before the Gram check.
    pub perturb_basis: bool,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            d: 1,
            m: 1,
            mu: 0.0,
            alpha: vec![-0.5],
            beta: vec![-0.5],
            n_list: vec![0, 4, 8],
            delta_list: vec![0.0, 1.0],
            cube_grid: 33,
            ball_radii: 0,
            ball_angles: 32,
            refinement_level: 0,
            oversample: 16,
            dlambda_nodes: 200,
            x: None,
            y: None,
            x_prime: None,
            y_prime: None,
            function: FunctionName::AbsX1,
            poly_coeffs: Vec::new(),
            poly_exponents: Vec::new(),
            converge_lebesgue: false,
            lambda_list: vec![1.0, 1.5, 3.0],
            dlambda_v: 0.3,
            dlambda_u: -0.4,
            checks: Check::ALL.to_vec(),
            perturb_basis: false,
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

/// Parameters resolved from a validated config.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub space: CylinderSpace,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub x_prime: Vec<f64>,
    pub y_prime: Option<Vec<f64>>,
    pub grid: Vec<Vec<f64>>,
    pub function: TestFunction,
}

fn check_len(name: &str, v: &[f64], len: usize) -> Result<()> {
    if v.len() != len {
        return invalid(format!("`{name}` has {} entries, expected {len}", v.len()));
    }
    if v.iter().any(|t| !t.is_finite()) {
        return invalid(format!("`{name}` contains a non-finite value"));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidParameter(format!("config: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Validates every numeric field and resolves defaults that depend on
    /// the space. Nothing is computed before this succeeds.
    pub fn resolve(&self) -> Result<Resolved> {
        let space = CylinderSpace::new(self.d, self.m, self.mu, self.alpha.clone(), self.beta.clone())?;
        if let Some(dl) = self.delta_list.iter().find(|d| !(**d >= 0.0 && d.is_finite())) {
            return invalid(format!("delta_list entry {dl} must be finite and >= 0"));
        }
        if let Some(l) = self.lambda_list.iter().find(|l| !(**l >= 0.5 && l.is_finite())) {
            return invalid(format!("lambda_list entry {l} must be >= 1/2"));
        }
        if !(self.dlambda_v.abs() < 1.0) || !(self.dlambda_u.abs() < 1.0) {
            return invalid("dlambda_v and dlambda_u must lie in (-1, 1)");
        }
        if self.dlambda_nodes == 0 {
            return invalid("dlambda_nodes must be positive");
        }
        if (self.d == 2 && self.ball_angles == 0) || self.cube_grid == 0 {
            return invalid("grid sizes must be positive");
        }
        if self.refinement_level > 8 {
            return invalid("refinement_level must be at most 8");
        }
        if self.poly_coeffs.len() != self.poly_exponents.len() {
            return invalid("poly_coeffs and poly_exponents differ in length");
        }
        if let Some(e) = self.poly_exponents.iter().find(|e| e.len() != self.m + self.d) {
            return invalid(format!("polynomial exponent {e:?} needs m + d = {} entries", self.m + self.d));
        }
        let in_ball = |y: &[f64]| y.iter().map(|v| v * v).sum::<f64>() <= 1.0;
        let in_cube = |x: &[f64]| x.iter().all(|v| v.abs() <= 1.0);
        let x = self.x.clone().unwrap_or_else(|| vec![0.25; self.m]);
        let y = self.y.clone().unwrap_or_else(|| vec![0.1; self.d]);
        let x_prime = self.x_prime.clone().unwrap_or_else(|| space.corner());
        check_len("x", &x, self.m)?;
        check_len("x_prime", &x_prime, self.m)?;
        check_len("y", &y, self.d)?;
        if !in_cube(&x) || !in_cube(&x_prime) || !in_ball(&y) {
            return invalid("evaluation point outside the cylinder");
        }
        if let Some(yp) = &self.y_prime {
            check_len("y_prime", yp, self.d)?;
            if !in_ball(yp) {
                return invalid("y_prime outside the ball");
            }
        }
        let function = match self.function {
            FunctionName::AbsX1 => TestFunction::AbsX1,
            FunctionName::ExpX1PlusY1 => TestFunction::ExpX1Y1,
            FunctionName::RadialBump => TestFunction::RadialBump,
            FunctionName::Polynomial => {
                if self.poly_coeffs.is_empty() {
                    return invalid("function = \"polynomial\" needs poly_coeffs");
                }
                TestFunction::Polynomial(self.poly_coeffs.iter().copied().zip(self.poly_exponents.clone()).collect())
            }
        };
        Ok(Resolved {
            grid: ball_grid(self.d, self.grid_radii(), self.ball_angles)?,
            space,
            x,
            y,
            x_prime,
            y_prime: self.y_prime.clone(),
            function,
        })
    }

    fn grid_radii(&self) -> usize {
        match (self.ball_radii, self.d) {
            (0, 1) => 33,
            (0, _) => 17,
            (r, _) => r,
        }
    }

    pub fn convergence_options(&self, resolved: &Resolved) -> ConvergenceOptions {
        ConvergenceOptions {
            cube_grid: self.cube_grid,
            ball_grid: resolved.grid.clone(),
            oversample: self.oversample,
            with_lebesgue: self.converge_lebesgue,
            refinement_level: self.refinement_level,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trip() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn full_round_trip() {
        let c = RunConfig {
            d: 2,
            mu: 0.5,
            alpha: vec![0.1 + 0.2],
            beta: vec![1.0 / 3.0],
            delta_list: vec![0.5, 1e-300, 2.0f64.sqrt()],
            x: Some(vec![-0.7]),
            y_prime: Some(vec![0.1, -0.2]),
            function: FunctionName::Polynomial,
            poly_coeffs: vec![1.5, -0.25],
            poly_exponents: vec![vec![1, 0, 2], vec![0, 0, 0]],
            checks: vec![Check::Gram],
            output: Some(PathBuf::from("out.csv")),
            format: OutputFormat::Json,
            ..RunConfig::default()
        };
        let text = c.to_toml();
        let back = RunConfig::from_toml(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_toml(), text);
        back.resolve().unwrap();
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml("d = 1\nbogus = 3\n").is_err());
        assert!(RunConfig::from_toml("d = \"one\"\n").is_err());
        assert!(RunConfig::from_toml("checks = [\"gram\", \"nope\"]\n").is_err());
    }

    #[test]
    fn validation() {
        let ok = RunConfig::from_toml("d = 2\nmu = 0.5\nalpha = [0.0]\nbeta = [0.0]\n").unwrap();
        assert_eq!(ok.resolve().unwrap().grid.len(), 17 * 32);
        let bad = |t: &str| RunConfig::from_toml(t).unwrap().resolve().is_err();
        assert!(bad("mu = -1.0\n"));
        assert!(bad("alpha = [0.0, 0.0]\n"));
        assert!(bad("delta_list = [-0.5]\n"));
        assert!(bad("lambda_list = [0.25]\n"));
        assert!(bad("y_prime = [1.5]\n"));
        assert!(bad("function = \"polynomial\"\n"));
        assert!(bad("poly_coeffs = [1.0]\npoly_exponents = [[1]]\n"));
    }
}
