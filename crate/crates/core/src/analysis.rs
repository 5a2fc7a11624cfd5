//! Critical-index bound, Lebesgue quantities of the Cesàro kernel, the
//! `D_lambda` identity, the ball majorant probe and convergence experiments.
//!
//! Integrals of `|K_n^delta|` are not polynomial. Every estimate uses a rule
//! of exactness `(4n + 16) * 2^level`, repeats it with the degree doubled and
//! records the relative change as `refinement`. Estimates whose refinement
//! exceeds [`UNRELIABLE_REFINEMENT`] are flagged, never dropped.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::ballbasis::ball_mass;
use crate::cylinder::{expand, CylinderKernel, CylinderSpace, ExpansionCoeffs};
use crate::error::{invalid, Result};
use crate::orthopoly::{beta_fn, zonal_fill, CesaroPlan, JacobiParams};
use crate::quadrature::{ball_rule, cylinder_factors, cylinder_rule, gauss_jacobi_rule, QuadratureRule};

/// Relative change under node doubling above which an estimate is flagged.
pub const UNRELIABLE_REFINEMENT: f64 = 0.05;

/// The convergence-index bound for a cylinder space.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalIndexReport {
    pub space: CylinderSpace,
    /// `sum_i max(alpha_i, beta_i) + mu + (d + m - 1)/2`
    pub first_term: f64,
    /// `max(0, -sum_i min(alpha_i, beta_i) - mu - (d + m + 1)/2)`
    pub second_term: f64,
    pub bound: f64,
    pub warnings: Vec<String>,
}

pub fn critical_delta(space: &CylinderSpace) -> CriticalIndexReport {
    let (d, m) = (space.d() as f64, space.m() as f64);
    let sum_max: f64 = space.alpha().iter().zip(space.beta()).map(|(a, b)| a.max(*b)).sum();
    let sum_min: f64 = space.alpha().iter().zip(space.beta()).map(|(a, b)| a.min(*b)).sum();
    let first_term = sum_max + space.mu() + (d + m - 1.0) / 2.0;
    let second_term = (-sum_min - space.mu() - (d + m + 1.0) / 2.0).max(0.0);
    let mut warnings = Vec::new();
    for (i, (a, b)) in space.alpha().iter().zip(space.beta()).enumerate() {
        if a + b < -1.0 {
            warnings.push(format!(
                "alpha[{i}] + beta[{i}] = {} < -1: the bound is not established here",
                a + b
            ));
        }
    }
    CriticalIndexReport { space: space.clone(), first_term, second_term, bound: first_term + second_term, warnings }
}

/// Quadrature estimate of `∫∫ |K_n^delta(x, x', y, y')| w dx dy`, or the max
/// of it over a grid of `y'`.
#[derive(Debug, Clone, PartialEq)]
pub struct LebesgueEstimate {
    pub n: usize,
    pub delta: f64,
    pub x_prime: Vec<f64>,
    /// The evaluation point, or the grid argmax for a sup estimate.
    pub y_prime: Vec<f64>,
    /// Number of `y'` points the value was maximised over (1 for a point).
    pub grid_points: usize,
    pub value: f64,
    /// Relative change of the value under one node doubling.
    pub refinement: f64,
    /// Exactness degree of the finer rule.
    pub rule_degree: usize,
}

impl LebesgueEstimate {
    pub fn reliable(&self) -> bool {
        self.refinement <= UNRELIABLE_REFINEMENT
    }
}

fn base_degree(n: usize, level: u32) -> usize {
    (4 * n + 16) << level
}

fn rel_change(coarse: f64, fine: f64) -> f64 {
    let diff = (fine - coarse).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / fine.abs().max(f64::MIN_POSITIVE)
    }
}

/// `∫∫ |K^delta| w` on one tensor rule, using `K = sum_j cube_j(x) H_j(y)`
/// with `H_j(y) = sum_t c_{j+t} ball_t(y)`.
fn abs_kernel_integral(
    kern: &CylinderKernel,
    plan: &CesaroPlan,
    cube: &QuadratureRule,
    ball: &QuadratureRule,
    xp: &[f64],
    yp: &[f64],
) -> f64 {
    let n = plan.n();
    let c = plan.coeffs();
    let cube_s: Vec<Vec<f64>> = cube.points().map(|x| kern.cube_slices(x, xp)).collect();
    let h: Vec<Vec<f64>> = ball
        .points()
        .map(|y| {
            let b = kern.ball_slices(y, yp);
            (0..=n).map(|j| (0..=n - j).map(|t| c[j + t] * b[t]).sum()).collect()
        })
        .collect();
    let mut acc = 0.0;
    for (cs, wx) in cube_s.iter().zip(cube.weights()) {
        let mut inner = 0.0;
        for (hy, wy) in h.iter().zip(ball.weights()) {
            let k: f64 = cs.iter().zip(hy).map(|(a, b)| a * b).sum();
            inner += wy * k.abs();
        }
        acc += wx * inner;
    }
    acc
}

/// Coarse and doubled rules plus the kernel, shared across `y'` points.
struct LebesgueSetup {
    plan: CesaroPlan,
    kern: CylinderKernel,
    coarse: (QuadratureRule, QuadratureRule),
    fine: (QuadratureRule, QuadratureRule),
    rule_degree: usize,
}

impl LebesgueSetup {
    fn new(space: &CylinderSpace, n: usize, delta: f64, level: u32) -> Result<Self> {
        let deg = base_degree(n, level);
        Ok(Self {
            plan: CesaroPlan::new(n, delta)?,
            kern: CylinderKernel::new(space, n)?,
            coarse: cylinder_factors(space, deg)?,
            fine: cylinder_factors(space, 2 * deg)?,
            rule_degree: 2 * deg,
        })
    }

    fn estimate(&self, xp: &[f64], yp: &[f64]) -> LebesgueEstimate {
        let coarse = abs_kernel_integral(&self.kern, &self.plan, &self.coarse.0, &self.coarse.1, xp, yp);
        let fine = abs_kernel_integral(&self.kern, &self.plan, &self.fine.0, &self.fine.1, xp, yp);
        LebesgueEstimate {
            n: self.plan.n(),
            delta: self.plan.delta(),
            x_prime: xp.to_vec(),
            y_prime: yp.to_vec(),
            grid_points: 1,
            value: fine,
            refinement: rel_change(coarse, fine),
            rule_degree: self.rule_degree,
        }
    }
}

fn check_point(space: &CylinderSpace, xp: &[f64], yp: &[f64]) -> Result<()> {
    if xp.len() != space.m() || yp.len() != space.d() {
        return invalid("evaluation point does not match the space dimensions");
    }
    Ok(())
}

/// `∫_{I^m} ∫_{B^d} |K_n^delta(x, x', y, y')| w(x, y) dy dx`.
pub fn lebesgue_quantity(
    space: &CylinderSpace,
    n: usize,
    delta: f64,
    xp: &[f64],
    yp: &[f64],
    refinement_level: u32,
) -> Result<LebesgueEstimate> {
    check_point(space, xp, yp)?;
    Ok(LebesgueSetup::new(space, n, delta, refinement_level)?.estimate(xp, yp))
}

/// Chebyshev extrema `cos(k pi / (count - 1))`, `k = 0..count`.
pub fn chebyshev_extrema(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => (0..count).map(|k| (k as f64 * PI / (count - 1) as f64).cos()).collect(),
    }
}

/// Grid of `y'` points clustering toward the boundary of the ball.
///
/// `d = 1`: `radii` Chebyshev extrema of `[-1, 1]`. `d = 2`: radii
/// `cos(k pi / (2 (radii - 1)))`, `k = 0..radii` (from 1 down to 0), each
/// with `angles` equally spaced angles.
pub fn ball_grid(d: usize, radii: usize, angles: usize) -> Result<Vec<Vec<f64>>> {
    match d {
        1 => Ok(chebyshev_extrema(radii).into_iter().map(|y| vec![y]).collect()),
        2 => {
            let rs: Vec<f64> = match radii {
                0 => Vec::new(),
                1 => vec![1.0],
                _ => (0..radii).map(|k| (k as f64 * PI / (2 * (radii - 1)) as f64).cos()).collect(),
            };
            let mut out = Vec::with_capacity(rs.len() * angles);
            for r in rs {
                for l in 0..angles {
                    let t = 2.0 * PI * l as f64 / angles as f64;
                    out.push(vec![r * t.cos(), r * t.sin()]);
                }
            }
            Ok(out)
        }
        _ => invalid(format!("ball dimension d = {d} is not supported (1 or 2)")),
    }
}

/// Default sup grid: 33 points for `d = 1`, 17 radii x 32 angles for `d = 2`.
pub fn default_ball_grid(d: usize) -> Result<Vec<Vec<f64>>> {
    match d {
        1 => ball_grid(1, 33, 1),
        _ => ball_grid(d, 17, 32),
    }
}

/// Max of [`lebesgue_quantity`] over `y'` in `grid` with `x' = e`. The
/// reported refinement is the worst one over the grid.
pub fn lebesgue_sup(
    space: &CylinderSpace,
    n: usize,
    delta: f64,
    grid: &[Vec<f64>],
    refinement_level: u32,
) -> Result<LebesgueEstimate> {
    if grid.is_empty() {
        return invalid("sup grid is empty");
    }
    let e = space.corner();
    for yp in grid {
        check_point(space, &e, yp)?;
    }
    let setup = LebesgueSetup::new(space, n, delta, refinement_level)?;
    let estimates: Vec<LebesgueEstimate> = grid.par_iter().map(|yp| setup.estimate(&e, yp)).collect();
    let mut best = estimates[0].clone();
    let mut worst_refinement: f64 = 0.0;
    for est in &estimates {
        worst_refinement = worst_refinement.max(est.refinement);
        if est.value > best.value {
            best = est.clone();
        }
    }
    best.grid_points = grid.len();
    best.refinement = worst_refinement;
    Ok(best)
}

/// `D_lambda(v, p, u) = (1-v^2-p^2-u^2+2upv)^{lambda-1/2} / [(1-v^2)(1-u^2)(1-p^2)]^lambda`
/// where the bracket in the numerator is nonnegative, 0 elsewhere.
pub fn dlambda(lambda: f64, v: f64, p: f64, u: f64) -> f64 {
    let disc = 1.0 - v * v - p * p - u * u + 2.0 * u * p * v;
    if disc < 0.0 {
        return 0.0;
    }
    disc.powf(lambda - 0.5) / ((1.0 - v * v) * (1.0 - u * u) * (1.0 - p * p)).powf(lambda)
}

/// Quadrature estimate of `∫ D_lambda(u, v, p) (1-p^2)^lambda dp` together
/// with the closed form `2^{2 lambda} B(lambda + 1/2, lambda + 1/2)`.
///
/// The integrand vanishes outside `|p - uv| <= s`, `s = sqrt((1-u^2)(1-v^2))`.
/// Nodes are placed by `p = uv + s cos(phi)` with a Gauss–Legendre rule in
/// `phi`, which clusters them toward the edges of the support.
pub fn dlambda_identity_check(lambda: f64, v: f64, u: f64, node_count: usize) -> Result<(f64, f64)> {
    if !(lambda >= 0.5) || !lambda.is_finite() {
        return invalid(format!("lambda must be >= 1/2 (got {lambda})"));
    }
    if !(v.abs() < 1.0) || !(u.abs() < 1.0) {
        return invalid("v and u must lie in (-1, 1)");
    }
    let rule = gauss_jacobi_rule(node_count.max(1), &JacobiParams::legendre())?;
    let center = u * v;
    let s = ((1.0 - u * u) * (1.0 - v * v)).sqrt();
    let mut est = 0.0;
    for (t, w) in rule.points().zip(rule.weights()) {
        let phi = PI / 2.0 * (t[0] + 1.0);
        let p = center + s * phi.cos();
        let jac = s * phi.sin() * PI / 2.0;
        est += w * dlambda(lambda, u, v, p) * (1.0 - p * p).powf(lambda) * jac;
    }
    let exact = 2f64.powf(2.0 * lambda) * beta_fn(lambda + 0.5, lambda + 0.5);
    Ok((est, exact))
}

/// Ball majorant probe at a fixed cube point.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorantProbe {
    /// `∫_{B^d} |K_n^delta(x, e, y, y')| w_mu(y) dy`
    pub lhs: f64,
    /// `∫ |F_{n,mu}^delta(u; x)| (1-u^2)^{(d-2)/2 + mu} du`
    pub rhs: f64,
    pub lhs_refinement: f64,
    pub rhs_refinement: f64,
}

impl MajorantProbe {
    pub fn ratio(&self) -> f64 {
        self.lhs / self.rhs
    }

    pub fn reliable(&self) -> bool {
        self.lhs_refinement <= UNRELIABLE_REFINEMENT && self.rhs_refinement <= UNRELIABLE_REFINEMENT
    }
}

/// `F(u) = sum_j c_{n,j} sum_{k<=j} Z_k(u) cube_{j-k}(x, e)` with
/// `Z_k = (k+lambda)/lambda C_k^lambda`, `lambda = mu + (d-1)/2`.
fn majorant_function(plan: &CesaroPlan, lambda: f64, cube: &[f64], u: f64) -> f64 {
    let n = plan.n();
    let mut z = vec![0.0; n + 1];
    zonal_fill(lambda, u, &mut z);
    let mut acc = 0.0;
    for (j, c) in plan.coeffs().iter().enumerate() {
        let inner: f64 = (0..=j).map(|k| z[k] * cube[j - k]).sum();
        acc += c * inner;
    }
    acc
}

pub fn majorant_probe(
    space: &CylinderSpace,
    n: usize,
    delta: f64,
    x: &[f64],
    yp: &[f64],
    refinement_level: u32,
) -> Result<MajorantProbe> {
    if x.len() != space.m() || yp.len() != space.d() {
        return invalid("probe point does not match the space dimensions");
    }
    let plan = CesaroPlan::new(n, delta)?;
    let kern = CylinderKernel::new(space, n)?;
    let cube = kern.cube_slices(x, &space.corner());
    let c = plan.coeffs();

    let lhs_at = |degree: usize| -> Result<f64> {
        let rule = ball_rule(space.d(), space.mu(), degree)?;
        let mut acc = 0.0;
        for (y, w) in rule.points().zip(rule.weights()) {
            let slices = CylinderKernel::combine(&cube, &kern.ball_slices(y, yp));
            let k: f64 = c.iter().zip(&slices).map(|(a, b)| a * b).sum();
            acc += w * k.abs();
        }
        Ok(acc)
    };

    let lambda = space.mu() + (space.d() as f64 - 1.0) / 2.0;
    let expo = (space.d() as f64 - 2.0) / 2.0 + space.mu();
    let u_params = JacobiParams::new(expo, expo)?;
    let rhs_at = |degree: usize| -> Result<f64> {
        let rule = gauss_jacobi_rule(degree / 2 + 1, &u_params)?;
        Ok(rule
            .points()
            .zip(rule.weights())
            .map(|(u, w)| w * majorant_function(&plan, lambda, &cube, u[0]).abs())
            .sum())
    };

    let deg = base_degree(n, refinement_level);
    let (l1, l2) = (lhs_at(deg)?, lhs_at(2 * deg)?);
    let (r1, r2) = (rhs_at(deg)?, rhs_at(2 * deg)?);
    Ok(MajorantProbe { lhs: l2, rhs: r2, lhs_refinement: rel_change(l1, l2), rhs_refinement: rel_change(r1, r2) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorNorm {
    L1,
    L2,
    Sup,
}

/// Weighted `L^1`/`L^2` norm of `approx - f` over quadrature nodes, or the
/// max over the points for `Sup` (weights ignored).
pub fn error_norm(f_values: &[f64], approx_values: &[f64], weights: &[f64], norm: ErrorNorm) -> f64 {
    let errs = f_values.iter().zip(approx_values).map(|(f, a)| (a - f).abs());
    match norm {
        ErrorNorm::L1 => errs.zip(weights).map(|(e, w)| w * e).sum(),
        ErrorNorm::L2 => errs.zip(weights).map(|(e, w)| w * e * e).sum::<f64>().sqrt(),
        ErrorNorm::Sup => errs.fold(0.0, f64::max),
    }
}

/// Continuous test functions for convergence experiments.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    /// Sum of `coeff * prod x_i^{e_i} * prod y_k^{e_{m+k}}`.
    Polynomial(Vec<(f64, Vec<u32>)>),
    /// `|x_1|`
    AbsX1,
    /// `exp(x_1 + y_1)`
    ExpX1Y1,
    /// `max(0, 1/2 - |x|^2 - |y|^2)^2`, C^1 but not C^2.
    RadialBump,
}

impl TestFunction {
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            TestFunction::Polynomial(terms) => terms
                .iter()
                .map(|(c, e)| c * x.iter().chain(y).zip(e).map(|(v, &k)| v.powi(k as i32)).product::<f64>())
                .sum(),
            TestFunction::AbsX1 => x[0].abs(),
            TestFunction::ExpX1Y1 => (x[0] + y[0]).exp(),
            TestFunction::RadialBump => {
                let r2: f64 = x.iter().chain(y).map(|v| v * v).sum();
                (0.5 - r2).max(0.0).powi(2)
            }
        }
    }

    /// Total degree for polynomials.
    pub fn degree(&self) -> Option<usize> {
        match self {
            TestFunction::Polynomial(terms) => {
                Some(terms.iter().map(|(_, e)| e.iter().sum::<u32>() as usize).max().unwrap_or(0))
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceOptions {
    /// Chebyshev-extrema count per cube axis of the sup grid.
    pub cube_grid: usize,
    /// `y'`-grid used both for the sup error and for `lebesgue_sup`.
    pub ball_grid: Vec<Vec<f64>>,
    /// Extra exactness beyond `2 n_max` for the expansion rule.
    pub oversample: usize,
    pub with_lebesgue: bool,
    pub refinement_level: u32,
}

impl ConvergenceOptions {
    pub fn for_space(space: &CylinderSpace) -> Result<Self> {
        Ok(Self {
            cube_grid: 33,
            ball_grid: default_ball_grid(space.d())?,
            oversample: 16,
            with_lebesgue: false,
            refinement_level: 0,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub delta: f64,
    pub l1: f64,
    pub l2: f64,
    pub sup: f64,
    /// Largest coefficient change when the expansion rule is doubled,
    /// relative to the largest coefficient.
    pub refinement: f64,
    pub lebesgue: Option<LebesgueEstimate>,
}

/// Degree sums `s_k(p)` at every point, `k <= n`.
fn degree_sums_at(coeffs: &ExpansionCoeffs, n: usize, points: &[(Vec<f64>, Vec<f64>)]) -> Result<Vec<Vec<f64>>> {
    points.par_iter().map(|(x, y)| coeffs.degree_sums(n, x, y)).collect()
}

fn cesaro_from_sums(plan: &CesaroPlan, sums: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (c, s) in plan.coeffs().iter().zip(sums) {
        acc += c * s;
    }
    acc
}

/// `L^1`, `L^2` and sup-grid errors of `S_n^delta f` for every `(delta, n)`,
/// rows ordered by `delta` then `n`.
pub fn convergence_experiment<F>(
    space: &CylinderSpace,
    f: F,
    n_list: &[usize],
    delta_list: &[f64],
    opts: &ConvergenceOptions,
) -> Result<Vec<ConvergenceRow>>
where
    F: Fn(&[f64], &[f64]) -> f64 + Sync,
{
    if n_list.is_empty() || delta_list.is_empty() {
        return invalid("n_list and delta_list must be non-empty");
    }
    if let Some(d) = delta_list.iter().find(|d| !(**d >= 0.0)) {
        return invalid(format!("Cesàro order must be >= 0 (got {d})"));
    }
    let n_max = *n_list.iter().max().expect("non-empty");
    let deg = 2 * n_max + opts.oversample;
    let coeffs = expand(space, n_max, &f, deg)?;
    let check = expand(space, n_max, &f, 2 * deg)?;
    let scale = check.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let refinement = if scale > 0.0 { coeffs.max_abs_diff(&check) / scale } else { 0.0 };

    let m = space.m();
    let rule = cylinder_rule(space, deg)?;
    let rule_points: Vec<(Vec<f64>, Vec<f64>)> =
        rule.points().map(|p| (p[..m].to_vec(), p[m..].to_vec())).collect();
    let axis = chebyshev_extrema(opts.cube_grid);
    let mut grid_points = Vec::new();
    let mut cube_pts: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..m {
        cube_pts = cube_pts
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    for x in &cube_pts {
        for y in &opts.ball_grid {
            grid_points.push((x.clone(), y.clone()));
        }
    }

    let f_rule: Vec<f64> = rule_points.iter().map(|(x, y)| f(x, y)).collect();
    let f_grid: Vec<f64> = grid_points.iter().map(|(x, y)| f(x, y)).collect();
    let sums_rule = degree_sums_at(&coeffs, n_max, &rule_points)?;
    let sums_grid = degree_sums_at(&coeffs, n_max, &grid_points)?;
    let weights = rule.weight_slice();

    let mut deltas = delta_list.to_vec();
    deltas.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    deltas.dedup();
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();

    let mut rows = Vec::new();
    for &delta in &deltas {
        for &n in &ns {
            let plan = CesaroPlan::new(n, delta)?;
            let approx_rule: Vec<f64> = sums_rule.iter().map(|s| cesaro_from_sums(&plan, s)).collect();
            let approx_grid: Vec<f64> = sums_grid.iter().map(|s| cesaro_from_sums(&plan, s)).collect();
            let lebesgue = if opts.with_lebesgue {
                Some(lebesgue_sup(space, n, delta, &opts.ball_grid, opts.refinement_level)?)
            } else {
                None
            };
            rows.push(ConvergenceRow {
                n,
                delta,
                l1: error_norm(&f_rule, &approx_rule, weights, ErrorNorm::L1),
                l2: error_norm(&f_rule, &approx_rule, weights, ErrorNorm::L2),
                sup: error_norm(&f_grid, &approx_grid, &[], ErrorNorm::Sup),
                refinement,
                lebesgue,
            });
        }
    }
    Ok(rows)
}

/// Normalisation check helper: total weight mass of the cylinder.
pub fn total_mass(space: &CylinderSpace) -> f64 {
    space.cube_mass() * ball_mass(space.d(), space.mu())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spaces() -> Vec<CylinderSpace> {
        vec![
            CylinderSpace::chebyshev(),
            CylinderSpace::new(2, 1, 0.5, vec![0.0], vec![0.0]).unwrap(),
            CylinderSpace::new(1, 2, 0.0, vec![-0.5, -0.5], vec![-0.5, -0.5]).unwrap(),
            CylinderSpace::new(2, 1, 0.0, vec![1.5], vec![-0.5]).unwrap(),
            CylinderSpace::new(1, 1, 1.25, vec![0.5], vec![2.0]).unwrap(),
        ]
    }

    #[test]
    fn critical_index_examples() {
        let r = critical_delta(&CylinderSpace::chebyshev());
        assert_eq!((r.first_term, r.second_term, r.bound), (0.0, 0.0, 0.0));
        let r = critical_delta(&spaces()[1]);
        assert!((r.bound - 1.5).abs() < 1e-14);
        let r = critical_delta(&spaces()[2]);
        assert!(r.bound.abs() < 1e-14);
        assert!(r.warnings.is_empty());

        let sp = CylinderSpace::new(1, 1, 0.0, vec![-0.9], vec![-0.9]).unwrap();
        let r = critical_delta(&sp);
        assert_eq!(r.warnings.len(), 1);
        // -0.9 + 0 + 1/2 plus max(0, 0.9 - 0 - 3/2) = 0
        assert!((r.bound + 0.4).abs() < 1e-14);
        let sp = CylinderSpace::new(1, 3, 0.0, vec![-0.9; 3], vec![-0.95; 3]).unwrap();
        let r = critical_delta(&sp);
        // second term: 2.85 - 2.5
        assert!((r.second_term - 0.35).abs() < 1e-14);
        assert_eq!(r.bound, r.first_term + r.second_term);
    }

    #[test]
    fn lebesgue_normalisation_at_degree_zero() {
        for sp in spaces() {
            for delta in [0.0, 1.0, 2.0] {
                let yp = vec![0.3; sp.d()];
                let est = lebesgue_quantity(&sp, 0, delta, &sp.corner(), &yp, 0).unwrap();
                assert!((est.value - 1.0).abs() < 1e-10, "{sp:?}");
                assert!(est.refinement < 1e-10);
            }
        }
    }

    #[test]
    fn lebesgue_matches_kernel_evaluation() {
        let sp = CylinderSpace::new(2, 1, 0.5, vec![0.0], vec![0.0]).unwrap();
        let n = 3;
        let yp = [0.2, -0.5];
        let est = lebesgue_quantity(&sp, n, 0.0, &sp.corner(), &yp, 0).unwrap();
        let kern = CylinderKernel::new(&sp, n).unwrap();
        let rule = cylinder_rule(&sp, est.rule_degree).unwrap();
        let brute: f64 = rule
            .points()
            .zip(rule.weights())
            .map(|(p, w)| w * kern.kernel(&p[..1], &[1.0], &p[1..], &yp).abs())
            .sum();
        assert!((est.value - brute).abs() < 1e-12 * brute);
    }

    #[test]
    fn lebesgue_against_riemann_oracle() {
        // Chebyshev cylinder, n = 1, delta = 0. In angle variables
        // x = cos s, y = cos t the weight becomes ds dt on [0, pi]^2.
        let sp = CylinderSpace::chebyshev();
        let yp = [0.35];
        let est = lebesgue_quantity(&sp, 1, 0.0, &[1.0], &yp, 0).unwrap();
        let kern = CylinderKernel::new(&sp, 1).unwrap();
        let grid = 2000;
        let h = PI / grid as f64;
        let mut acc = 0.0;
        for i in 0..grid {
            let x = ((i as f64 + 0.5) * h).cos();
            for j in 0..grid {
                let y = ((j as f64 + 0.5) * h).cos();
                acc += kern.kernel(&[x], &[1.0], &[y], &yp).abs();
            }
        }
        let riemann = acc * h * h;
        assert!((est.value - riemann).abs() < 0.01 * riemann, "{} vs {riemann}", est.value);
    }

    #[test]
    fn sup_is_max_over_grid() {
        let sp = CylinderSpace::chebyshev();
        let grid = ball_grid(1, 5, 1).unwrap();
        let sup = lebesgue_sup(&sp, 4, 0.5, &grid, 0).unwrap();
        for yp in &grid {
            let est = lebesgue_quantity(&sp, 4, 0.5, &[1.0], yp, 0).unwrap();
            assert!(sup.value >= est.value);
        }
        let single = lebesgue_sup(&sp, 4, 0.5, &grid[1..2], 0).unwrap();
        let direct = lebesgue_quantity(&sp, 4, 0.5, &[1.0], &grid[1], 0).unwrap();
        assert_eq!(single.value, direct.value);
        assert!(lebesgue_sup(&sp, 4, 0.5, &[], 0).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(default_ball_grid(1).unwrap().len(), 33);
        let g2 = default_ball_grid(2).unwrap();
        assert_eq!(g2.len(), 17 * 32);
        assert!(g2.iter().all(|p| p[0] * p[0] + p[1] * p[1] <= 1.0 + 1e-15));
        assert_eq!(chebyshev_extrema(3), vec![1.0, (PI / 2.0).cos(), -1.0]);
    }

    #[test]
    fn dlambda_values() {
        assert_eq!(dlambda(1.0, 0.0, 0.0, 0.0), 1.0);
        assert_eq!(dlambda(1.5, 0.9, 0.9, -0.9), 0.0);
        for &(v, p, u) in &[(0.1, 0.3, -0.2), (0.5, 0.4, 0.6), (-0.7, 0.2, 0.1)] {
            let a = dlambda(1.3, v, p, u);
            assert!((a - dlambda(1.3, v, u, p)).abs() < 1e-14 * a.abs().max(1.0));
        }
        // indicator numerator at lambda = 1/2
        let v = dlambda(0.5, 0.1, 0.2, 0.3);
        assert!((v - 1.0 / ((0.99f64 * 0.91 * 0.96).sqrt())).abs() < 1e-14);
    }

    #[test]
    fn dlambda_identity() {
        let (est, exact) = dlambda_identity_check(1.0, 0.3, -0.4, 200).unwrap();
        assert!((exact - PI / 2.0).abs() < 1e-14);
        assert!((est - exact).abs() < 1e-6);
        let (est, exact) = dlambda_identity_check(1.5, 0.3, -0.4, 200).unwrap();
        assert!((est - exact).abs() < 1e-6);
        let pairs = [(0.3, -0.4), (0.0, 0.0), (0.9, 0.8), (-0.6, 0.2), (0.95, -0.95)];
        let vals: Vec<f64> = pairs
            .iter()
            .map(|&(v, u)| dlambda_identity_check(3.0, v, u, 200).unwrap().0)
            .collect();
        for v in &vals {
            assert!((v - vals[0]).abs() < 1e-6);
        }
        assert!(dlambda_identity_check(0.4, 0.1, 0.1, 50).is_err());
        assert!(dlambda_identity_check(1.0, 1.0, 0.1, 50).is_err());
    }

    #[test]
    fn majorant_degree_zero_and_sign() {
        let sp = CylinderSpace::chebyshev();
        let x = [0.3];
        let r0: Vec<f64> = [[-1.0], [0.2], [0.8]]
            .iter()
            .map(|yp| majorant_probe(&sp, 0, 1.0, &x, yp, 0).unwrap().ratio())
            .collect();
        assert!((r0[0] - r0[1]).abs() < 1e-12 && (r0[1] - r0[2]).abs() < 1e-12);
        let p = majorant_probe(&sp, 6, 0.5, &x, &[0.4], 0).unwrap();
        assert!(p.lhs >= 0.0 && p.rhs >= 0.0);
        let disk = CylinderSpace::new(2, 1, 0.5, vec![0.0], vec![0.0]).unwrap();
        let p = majorant_probe(&disk, 4, 1.0, &[0.1], &[0.3, 0.2], 0).unwrap();
        assert!(p.lhs > 0.0 && p.rhs > 0.0 && p.reliable());
    }

    #[test]
    fn error_norm_basics() {
        let w = [0.5, 1.0, 1.5];
        assert_eq!(error_norm(&[0.0; 3], &[0.0; 3], &w, ErrorNorm::L1), 0.0);
        let f = [1.0, 2.0, 3.0];
        let a = [1.5, 1.0, 3.0];
        let l1 = error_norm(&f, &a, &w, ErrorNorm::L1);
        let l2 = error_norm(&f, &a, &w, ErrorNorm::L2);
        assert!((l1 - 1.25).abs() < 1e-15);
        assert!(l1 <= 3f64.sqrt() * l2);
        assert_eq!(error_norm(&f, &a, &[], ErrorNorm::Sup), 1.0);
    }

    #[test]
    fn convergence_reproduces_polynomials() {
        let sp = CylinderSpace::chebyshev();
        let f = TestFunction::Polynomial(vec![(1.0, vec![2, 1]), (-0.5, vec![0, 3]), (0.25, vec![1, 0])]);
        assert_eq!(f.degree(), Some(3));
        let mut opts = ConvergenceOptions::for_space(&sp).unwrap();
        opts.cube_grid = 9;
        opts.ball_grid = ball_grid(1, 9, 1).unwrap();
        let rows = convergence_experiment(&sp, |x, y| f.eval(x, y), &[6, 3, 4], &[1.0, 0.0], &opts).unwrap();
        let order: Vec<(f64, usize)> = rows.iter().map(|r| (r.delta, r.n)).collect();
        assert_eq!(order, vec![(0.0, 3), (0.0, 4), (0.0, 6), (1.0, 3), (1.0, 4), (1.0, 6)]);
        for r in rows.iter().filter(|r| r.delta == 0.0) {
            assert!(r.sup < 1e-8 && r.l1 < 1e-8 && r.l2 < 1e-8);
        }
        assert!(rows[3].sup > 1e-3);
        let zero = convergence_experiment(&sp, |_, _| 0.0, &[2], &[0.5], &opts).unwrap();
        assert_eq!(zero[0].sup, 0.0);
        assert!(convergence_experiment(&sp, |_, _| 0.0, &[2], &[-0.5], &opts).is_err());
    }
}
