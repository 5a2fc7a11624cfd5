//! Orthonormal product basis, reproducing kernel and `(C, delta)` means on
//! the cylinder `B^d x I^m` with weight
//! `w(x, y) = prod_i (1-x_i)^{alpha_i} (1+x_i)^{beta_i} * (1-|y|^2)^{mu-1/2}`.
//!
//! The kernel is assembled from degree slices
//! `slice_k = sum_{j<=k} cube_j(x, x') ball_{k-j}(y, y')`; the partial sum
//! kernel is `sum_k slice_k` and the Cesàro kernel `sum_k c_{n,k} slice_k`.
//! Both accumulate in the same order, so at `delta = 0` they agree bit for bit.

use std::collections::HashMap;

use crate::ballbasis::{ball_elements, ball_mass, BallBasis, BallBasisElement, BallKernel};
use crate::error::{invalid, Error, Result};
use crate::orthopoly::{CesaroPlan, JacobiParams, OrthonormalJacobi};
use crate::quadrature::cylinder_rule;

/// Parameters of the cylinder `B^d x [-1,1]^m` and its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderSpace {
    d: usize,
    m: usize,
    mu: f64,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    cube_params: Vec<JacobiParams>,
}

impl CylinderSpace {
    pub fn new(d: usize, m: usize, mu: f64, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if d != 1 && d != 2 {
            return invalid(format!("ball dimension d = {d} is not supported (1 or 2)"));
        }
        if m == 0 {
            return invalid("cube dimension m must be at least 1");
        }
        if !(mu >= 0.0) || !mu.is_finite() {
            return invalid(format!("mu must be >= 0 (got {mu})"));
        }
        if alpha.len() != m || beta.len() != m {
            return invalid(format!(
                "alpha and beta need {m} entries (got {} and {})",
                alpha.len(),
                beta.len()
            ));
        }
        let cube_params = alpha
            .iter()
            .zip(&beta)
            .map(|(&a, &b)| JacobiParams::new(a, b))
            .collect::<Result<_>>()?;
        Ok(Self { d, m, mu, alpha, beta, cube_params })
    }

    /// `B^1 x [-1,1]` with Chebyshev weights on both factors.
    pub fn chebyshev() -> Self {
        Self::new(1, 1, 0.0, vec![-0.5], vec![-0.5]).expect("valid parameters")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn cube_params(&self) -> &[JacobiParams] {
        &self.cube_params
    }

    /// Whether `alpha_i + beta_i >= -1` on every axis. The critical-index
    /// bound is only claimed under this condition.
    pub fn alpha_beta_condition(&self) -> bool {
        self.alpha.iter().zip(&self.beta).all(|(a, b)| a + b >= -1.0)
    }

    pub fn weight(&self, x: &[f64], y: &[f64]) -> f64 {
        let wx: f64 = self.cube_params.iter().zip(x).map(|(p, &xi)| p.weight(xi)).product();
        let ny: f64 = y.iter().map(|v| v * v).sum();
        wx * (1.0 - ny).powf(self.mu - 0.5)
    }

    pub fn cube_mass(&self) -> f64 {
        self.cube_params.iter().map(|p| p.total_mass()).product()
    }

    pub fn total_mass(&self) -> f64 {
        self.cube_mass() * ball_mass(self.d, self.mu)
    }

    /// The cube corner `e = (1, ..., 1)`.
    pub fn corner(&self) -> Vec<f64> {
        vec![1.0; self.m]
    }

    fn check_points(&self, x: &[f64], y: &[f64]) -> Result<()> {
        if x.len() != self.m || y.len() != self.d {
            return invalid(format!(
                "expected cube point of length {} and ball point of length {} (got {} and {})",
                self.m,
                self.d,
                x.len(),
                y.len()
            ));
        }
        Ok(())
    }
}

/// Address of one product basis element `P_gamma(x) s(y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub gamma: Vec<usize>,
    pub ball: BallBasisElement,
}

impl BasisIndex {
    pub fn cube_degree(&self) -> usize {
        self.gamma.iter().sum()
    }

    pub fn total_degree(&self) -> usize {
        self.cube_degree() + self.ball.n
    }
}

/// Multi-indices of `m` entries with sum `j`, lexicographically ascending.
pub fn multi_indices(m: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, j: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if m == 1 {
            prefix.push(j);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=j {
            prefix.push(first);
            rec(m - 1, j - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, j, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Every basis index of total degree `<= n`, ordered by total degree, cube
/// degree, `gamma` (lexicographic) and finally the ball element.
pub fn enumerate_basis(space: &CylinderSpace, n: usize) -> Vec<BasisIndex> {
    let mut out = Vec::new();
    for k in 0..=n {
        for j in 0..=k {
            let balls = ball_elements(space.d, k - j);
            for gamma in multi_indices(space.m, j) {
                for &ball in &balls {
                    out.push(BasisIndex { gamma: gamma.clone(), ball });
                }
            }
        }
    }
    out
}

fn cube_families(space: &CylinderSpace, n: usize) -> Vec<OrthonormalJacobi> {
    space.cube_params.iter().map(|p| OrthonormalJacobi::new(*p, n)).collect()
}

/// Evaluates every basis element of degree `<= n` at a point.
#[derive(Debug, Clone)]
pub struct CylinderBasis {
    space: CylinderSpace,
    n: usize,
    indices: Vec<BasisIndex>,
    /// Position of each index's ball element in `BallBasis::eval_all`.
    ball_pos: Vec<usize>,
    /// `degree_offsets[k]..degree_offsets[k+1]` are the indices of degree `k`.
    degree_offsets: Vec<usize>,
    cube: Vec<OrthonormalJacobi>,
    ball: BallBasis,
}

impl CylinderBasis {
    pub fn new(space: &CylinderSpace, n: usize) -> Result<Self> {
        let indices = enumerate_basis(space, n);
        let mut ball_offsets = vec![0usize];
        for k in 0..=n {
            ball_offsets.push(ball_offsets[k] + ball_elements(space.d, k).len());
        }
        let ball_pos = indices
            .iter()
            .map(|idx| {
                let within = ball_elements(space.d, idx.ball.n)
                    .iter()
                    .position(|e| *e == idx.ball)
                    .expect("enumerated ball element");
                ball_offsets[idx.ball.n] + within
            })
            .collect();
        let mut degree_offsets = vec![0usize; n + 2];
        for idx in &indices {
            degree_offsets[idx.total_degree() + 1] += 1;
        }
        for k in 0..=n {
            degree_offsets[k + 1] += degree_offsets[k];
        }
        Ok(Self {
            space: space.clone(),
            n,
            indices,
            ball_pos,
            degree_offsets,
            cube: cube_families(space, n),
            ball: BallBasis::new(space.d, space.mu, n)?,
        })
    }

    pub fn space(&self) -> &CylinderSpace {
        &self.space
    }

    pub fn max_degree(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[BasisIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Range of positions holding indices of total degree `k`.
    pub fn degree_range(&self, k: usize) -> std::ops::Range<usize> {
        self.degree_offsets[k]..self.degree_offsets[k + 1]
    }

    /// Values of all basis elements at `(x, y)` in enumeration order.
    pub fn eval_all(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let axes: Vec<Vec<f64>> = self.cube.iter().zip(x).map(|(f, &xi)| f.eval_all(xi)).collect();
        let ball = self.ball.eval_all(y);
        self.indices
            .iter()
            .zip(&self.ball_pos)
            .map(|(idx, &bp)| {
                let cube: f64 = idx.gamma.iter().zip(&axes).map(|(&g, a)| a[g]).product();
                cube * ball[bp]
            })
            .collect()
    }

    /// One element; `idx` must be within this basis's degree.
    pub fn eval(&self, idx: &BasisIndex, x: &[f64], y: &[f64]) -> Result<f64> {
        self.space.check_points(x, y)?;
        if idx.gamma.len() != self.space.m || idx.total_degree() > self.n {
            return Err(Error::InvalidIndex(format!("{idx:?} is not in this basis")));
        }
        idx.ball.validate(self.space.d)?;
        let cube: f64 = idx
            .gamma
            .iter()
            .zip(&self.cube)
            .zip(x)
            .map(|((&g, f), &xi)| f.eval_all(xi)[g])
            .product();
        Ok(cube * self.ball.eval(&idx.ball, y)?)
    }
}

/// `P_gamma(x) s(y)` for a single index.
pub fn eval_basis(space: &CylinderSpace, idx: &BasisIndex, x: &[f64], y: &[f64]) -> Result<f64> {
    CylinderBasis::new(space, idx.total_degree())?.eval(idx, x, y)
}

/// Degree slices of the cylinder reproducing kernel up to degree `n`.
#[derive(Debug, Clone)]
pub struct CylinderKernel {
    space: CylinderSpace,
    n: usize,
    cube: Vec<OrthonormalJacobi>,
    ball: BallKernel,
}

impl CylinderKernel {
    pub fn new(space: &CylinderSpace, n: usize) -> Result<Self> {
        Ok(Self {
            space: space.clone(),
            n,
            cube: cube_families(space, n),
            ball: BallKernel::new(space.d, space.mu, n)?,
        })
    }

    pub fn space(&self) -> &CylinderSpace {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Cube kernel slices `[P_j(x)]^T P_j(x')` for `j = 0..=n`, obtained by
    /// convolving the per-axis products `p̂_g(x_i) p̂_g(x'_i)`.
    pub fn cube_slices(&self, x: &[f64], xp: &[f64]) -> Vec<f64> {
        let len = self.n + 1;
        let mut acc = vec![0.0; len];
        acc[0] = 1.0;
        let mut a = vec![0.0; len];
        let mut b = vec![0.0; len];
        let mut next = vec![0.0; len];
        for ((fam, &xi), &xpi) in self.cube.iter().zip(x).zip(xp) {
            fam.fill(xi, &mut a);
            fam.fill(xpi, &mut b);
            for j in 0..len {
                let mut s = 0.0;
                for g in 0..=j {
                    s += acc[j - g] * a[g] * b[g];
                }
                next[j] = s;
            }
            std::mem::swap(&mut acc, &mut next);
        }
        acc
    }

    pub fn ball_slices(&self, y: &[f64], yp: &[f64]) -> Vec<f64> {
        self.ball.slices(y, yp)
    }

    /// `slice_k = sum_{j<=k} cube_j ball_{k-j}` from precomputed factors.
    pub fn combine(cube: &[f64], ball: &[f64]) -> Vec<f64> {
        let len = cube.len().min(ball.len());
        (0..len)
            .map(|k| (0..=k).map(|j| cube[j] * ball[k - j]).sum())
            .collect()
    }

    pub fn slices(&self, x: &[f64], xp: &[f64], y: &[f64], yp: &[f64]) -> Vec<f64> {
        Self::combine(&self.cube_slices(x, xp), &self.ball_slices(y, yp))
    }

    /// `K_n` as the plain sum of the slices.
    pub fn kernel(&self, x: &[f64], xp: &[f64], y: &[f64], yp: &[f64]) -> f64 {
        sum_slices(&self.slices(x, xp, y, yp))
    }

    /// `K_n^delta`; `plan.n()` must not exceed this kernel's degree.
    pub fn cesaro(&self, plan: &CesaroPlan, x: &[f64], xp: &[f64], y: &[f64], yp: &[f64]) -> f64 {
        let s = self.slices(x, xp, y, yp);
        weighted_slices(plan, &s)
    }
}

pub(crate) fn sum_slices(s: &[f64]) -> f64 {
    let mut acc = 0.0;
    for v in s {
        acc += v;
    }
    acc
}

/// `sum_k c_{n,k} s_k`, accumulated in the same order as [`sum_slices`].
pub(crate) fn weighted_slices(plan: &CesaroPlan, s: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (c, v) in plan.coeffs().iter().zip(s) {
        acc += c * v;
    }
    acc
}

/// Reproducing kernel `K_n(x, x', y, y')` of the cylinder.
pub fn kernel(space: &CylinderSpace, n: usize, x: &[f64], xp: &[f64], y: &[f64], yp: &[f64]) -> Result<f64> {
    space.check_points(x, y)?;
    space.check_points(xp, yp)?;
    Ok(CylinderKernel::new(space, n)?.kernel(x, xp, y, yp))
}

/// Cesàro kernel `K_n^delta(x, x', y, y')`.
pub fn cesaro_kernel(
    space: &CylinderSpace,
    plan: &CesaroPlan,
    x: &[f64],
    xp: &[f64],
    y: &[f64],
    yp: &[f64],
) -> Result<f64> {
    space.check_points(x, y)?;
    space.check_points(xp, yp)?;
    Ok(CylinderKernel::new(space, plan.n())?.cesaro(plan, x, xp, y, yp))
}

/// Fourier coefficients `<f, P_idx>` for every index of degree `<= n`.
#[derive(Debug, Clone)]
pub struct ExpansionCoeffs {
    basis: CylinderBasis,
    values: Vec<f64>,
    lookup: HashMap<BasisIndex, usize>,
}

impl ExpansionCoeffs {
    pub fn space(&self) -> &CylinderSpace {
        self.basis.space()
    }

    pub fn max_degree(&self) -> usize {
        self.basis.max_degree()
    }

    pub fn indices(&self) -> &[BasisIndex] {
        self.basis.indices()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, idx: &BasisIndex) -> Option<f64> {
        self.lookup.get(idx).map(|&i| self.values[i])
    }

    /// `s_k = sum_{|idx| = k} coeff(idx) P_idx(x, y)` for `k = 0..=n`.
    pub fn degree_sums(&self, n: usize, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        if n > self.max_degree() {
            return Err(Error::DegreeExceeded { plan: n, table: self.max_degree() });
        }
        self.space().check_points(x, y)?;
        let vals = self.basis.eval_all(x, y);
        Ok((0..=n)
            .map(|k| {
                let mut acc = 0.0;
                for i in self.basis.degree_range(k) {
                    acc += self.values[i] * vals[i];
                }
                acc
            })
            .collect())
    }

    /// Largest absolute coefficient difference against another expansion of
    /// the same space and degree.
    pub fn max_abs_diff(&self, other: &ExpansionCoeffs) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Expands `f(x, y)` in the orthonormal basis to degree `n` with a cylinder
/// rule of exactness `rule_degree >= 2n`.
pub fn expand<F>(space: &CylinderSpace, n: usize, f: F, rule_degree: usize) -> Result<ExpansionCoeffs>
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    if rule_degree < 2 * n {
        return invalid(format!("rule degree {rule_degree} is below 2n = {}", 2 * n));
    }
    let basis = CylinderBasis::new(space, n)?;
    let rule = cylinder_rule(space, rule_degree)?;
    let m = space.m;
    let mut values = vec![0.0; basis.len()];
    for (i, (p, w)) in rule.points().zip(rule.weights()).enumerate() {
        let (x, y) = p.split_at(m);
        let fv = f(x, y);
        if !fv.is_finite() {
            return Err(Error::NonFinite { node: i, value: fv });
        }
        let wf = w * fv;
        for (c, b) in values.iter_mut().zip(basis.eval_all(x, y)) {
            *c += wf * b;
        }
    }
    let lookup = basis.indices().iter().cloned().enumerate().map(|(i, idx)| (idx, i)).collect();
    Ok(ExpansionCoeffs { basis, values, lookup })
}

/// Partial sum `S_n f(x', y')` from the coefficient table.
pub fn partial_sum_eval(coeffs: &ExpansionCoeffs, n: usize, xp: &[f64], yp: &[f64]) -> Result<f64> {
    Ok(sum_slices(&coeffs.degree_sums(n, xp, yp)?))
}

/// Cesàro mean `S_n^delta f(x', y')` from the coefficient table.
pub fn cesaro_sum_eval(coeffs: &ExpansionCoeffs, plan: &CesaroPlan, xp: &[f64], yp: &[f64]) -> Result<f64> {
    Ok(weighted_slices(plan, &coeffs.degree_sums(plan.n(), xp, yp)?))
}

/// `S_n^delta f(x', y')` as the quadrature of `f K_n^delta w`; the
/// cross-check for [`cesaro_sum_eval`].
pub fn cesaro_sum_via_kernel<F>(
    space: &CylinderSpace,
    plan: &CesaroPlan,
    f: F,
    rule_degree: usize,
    xp: &[f64],
    yp: &[f64],
) -> Result<f64>
where
    F: Fn(&[f64], &[f64]) -> f64,
{
    space.check_points(xp, yp)?;
    let kern = CylinderKernel::new(space, plan.n())?;
    let rule = cylinder_rule(space, rule_degree)?;
    let mut acc = 0.0;
    for (i, (p, w)) in rule.points().zip(rule.weights()).enumerate() {
        let (x, y) = p.split_at(space.m);
        let fv = f(x, y);
        if !fv.is_finite() {
            return Err(Error::NonFinite { node: i, value: fv });
        }
        acc += w * fv * kern.cesaro(plan, x, xp, y, yp);
    }
    Ok(acc)
}
