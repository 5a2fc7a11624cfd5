//! Gaussian quadrature on the interval, the cube, the ball (d = 1, 2) and the
//! cylinder.
//!
//! Gauss–Jacobi rules come from the eigen-decomposition of the symmetric
//! Jacobi matrix built from the monic recurrence coefficients. Nodes are then
//! polished with a Newton step on `P_N` and weights are taken as Christoffel
//! numbers `1 / sum_k p̂_k(x_i)^2`, which is accurate even where the
//! eigenvector components are tiny.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::cylinder::CylinderSpace;
use crate::error::{invalid, Error, Result};
use crate::orthopoly::{eval_jacobi, JacobiParams, OrthonormalJacobi};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Interval,
    Cube,
    Ball1,
    Ball2,
    Cylinder,
}

/// Nodes and positive weights with a declared polynomial exactness degree.
///
/// Points are stored row-major; every point has `dim` coordinates.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exactness_degree: usize,
    domain: Domain,
}

impl QuadratureRule {
    fn new(dim: usize, nodes: Vec<f64>, weights: Vec<f64>, exactness_degree: usize, domain: Domain) -> Self {
        debug_assert_eq!(nodes.len(), dim * weights.len());
        Self { dim, nodes, weights, exactness_degree, domain }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn exactness_degree(&self) -> usize {
        self.exactness_degree
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.nodes.chunks_exact(self.dim)
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.weights.iter().copied()
    }

    pub fn weight_slice(&self) -> &[f64] {
        &self.weights
    }

    /// Sum of the weights, i.e. the total mass of the weight function.
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// First coordinate of every node; convenient for one-dimensional rules.
    pub fn abscissae(&self) -> Vec<f64> {
        self.points().map(|p| p[0]).collect()
    }

    /// Tensor product `self x other`; points are `(p, q)` with `p` outer.
    pub fn tensor(&self, other: &QuadratureRule, domain: Domain) -> QuadratureRule {
        let dim = self.dim + other.dim;
        let mut nodes = Vec::with_capacity(dim * self.len() * other.len());
        let mut weights = Vec::with_capacity(self.len() * other.len());
        for (p, wp) in self.points().zip(self.weights()) {
            for (q, wq) in other.points().zip(other.weights()) {
                nodes.extend_from_slice(p);
                nodes.extend_from_slice(q);
                weights.push(wp * wq);
            }
        }
        let exactness = self.exactness_degree.min(other.exactness_degree);
        QuadratureRule::new(dim, nodes, weights, exactness, domain)
    }
}

/// Node count per axis so that a Gauss rule integrates degree `degree`.
pub fn gauss_nodes_for_degree(degree: usize) -> usize {
    degree / 2 + 1
}

/// Monic recurrence coefficients `(a_k, b_k)` of the Jacobi weight, with
/// `b_k` the off-diagonal of the Jacobi matrix (square roots taken).
fn jacobi_matrix_coeffs(n: usize, p: &JacobiParams) -> (Vec<f64>, Vec<f64>) {
    let (a, b) = (p.alpha(), p.beta());
    let diag = (0..n)
        .map(|k| {
            let kf = k as f64;
            let s = 2.0 * kf + a + b;
            if k == 0 {
                (b - a) / (a + b + 2.0)
            } else {
                (b * b - a * a) / (s * (s + 2.0))
            }
        })
        .collect();
    let off = (1..n)
        .map(|k| {
            let kf = k as f64;
            let s = 2.0 * kf + a + b;
            if k == 1 {
                // (s - 1) cancels against (k + a + b) at k = 1
                (4.0 * (1.0 + a) * (1.0 + b) / (s * s * (s + 1.0))).sqrt()
            } else {
                (4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (s * s * (s + 1.0) * (s - 1.0)))
                    .sqrt()
            }
        })
        .collect();
    (diag, off)
}

/// `N`-point Gauss–Jacobi rule for `(1-x)^alpha (1+x)^beta`, exact through
/// degree `2N - 1`. Nodes are strictly increasing.
pub fn gauss_jacobi_rule(n: usize, p: &JacobiParams) -> Result<QuadratureRule> {
    if n == 0 {
        return invalid("Gauss rule needs at least one node");
    }
    let (diag, off) = jacobi_matrix_coeffs(n, p);
    let mut mat = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        mat[(i, i)] = diag[i];
    }
    for (i, &o) in off.iter().enumerate() {
        mat[(i, i + 1)] = o;
        mat[(i + 1, i)] = o;
    }
    let eig = SymmetricEigen::try_new(mat, f64::EPSILON, 100 * n.max(10)).ok_or(Error::EigenSolve(n))?;
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));

    // Newton polish on P_N; P_N' = (N+a+b+1)/2 P_{N-1}^{(a+1,b+1)}.
    let shifted = JacobiParams::new(p.alpha() + 1.0, p.beta() + 1.0)?;
    let dscale = (n as f64 + p.alpha() + p.beta() + 1.0) / 2.0;
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let f = eval_jacobi(n, p, *x);
            let df = dscale * eval_jacobi(n - 1, &shifted, *x);
            if df == 0.0 || !df.is_finite() {
                break;
            }
            let step = f / df;
            if !(step.abs() < 1e-8) {
                break;
            }
            *x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
    }

    let fam = OrthonormalJacobi::new(*p, n - 1);
    let mut buf = vec![0.0; n];
    let weights = nodes
        .iter()
        .map(|&x| {
            fam.fill(x, &mut buf);
            1.0 / buf.iter().map(|v| v * v).sum::<f64>()
        })
        .collect();
    Ok(QuadratureRule::new(1, nodes, weights, 2 * n - 1, Domain::Interval))
}

/// Tensor Gauss–Jacobi rule on `[-1,1]^m` with `n` nodes per axis.
pub fn product_rule_cube(n: usize, params: &[JacobiParams], m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return invalid("cube dimension m must be at least 1");
    }
    if params.len() != m {
        return invalid(format!("expected {m} Jacobi parameter pairs, got {}", params.len()));
    }
    let mut rule = gauss_jacobi_rule(n, &params[0])?;
    for p in &params[1..] {
        rule = rule.tensor(&gauss_jacobi_rule(n, p)?, Domain::Cube);
    }
    rule.domain = Domain::Cube;
    Ok(rule)
}

/// Rule for `w_mu(y) = (1 - |y|^2)^{mu - 1/2}` on `B^d`, exact for total degree
/// `degree`.
///
/// For `d = 2` the disk is parametrised by `y = r (cos t, sin t)`; the radial
/// integral becomes a Gauss–Jacobi rule in `u = 2r^2 - 1` with parameters
/// `(mu - 1/2, 0)` and the angles are equally spaced.
pub fn ball_rule(d: usize, mu: f64, degree: usize) -> Result<QuadratureRule> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return invalid(format!("ball weight exponent mu must be >= 0 (got {mu})"));
    }
    match d {
        1 => {
            let p = JacobiParams::new(mu - 0.5, mu - 0.5)?;
            let mut rule = gauss_jacobi_rule(gauss_nodes_for_degree(degree), &p)?;
            rule.domain = Domain::Ball1;
            Ok(rule)
        }
        2 => {
            let radial_nodes = degree / 4 + 1;
            let angles = degree + 1;
            let radial = gauss_jacobi_rule(radial_nodes, &JacobiParams::new(mu - 0.5, 0.0)?)?;
            // dy = r dr dt, r dr = du / 4, 1 - r^2 = (1 - u)/2
            let scale = 2f64.powf(-(mu - 0.5)) / 4.0 * (2.0 * PI / angles as f64);
            let mut nodes = Vec::with_capacity(2 * radial.len() * angles);
            let mut weights = Vec::with_capacity(radial.len() * angles);
            for (u, wu) in radial.points().zip(radial.weights()) {
                let r = ((1.0 + u[0]) / 2.0).sqrt();
                for k in 0..angles {
                    let t = 2.0 * PI * k as f64 / angles as f64;
                    nodes.push(r * t.cos());
                    nodes.push(r * t.sin());
                    weights.push(wu * scale);
                }
            }
            let exactness = (4 * radial_nodes - 1).min(angles - 1);
            Ok(QuadratureRule::new(2, nodes, weights, exactness, Domain::Ball2))
        }
        _ => invalid(format!("ball dimension d = {d} is not supported (1 or 2)")),
    }
}

/// The ball and cube factors of [`cylinder_rule`].
pub fn cylinder_factors(space: &CylinderSpace, degree: usize) -> Result<(QuadratureRule, QuadratureRule)> {
    let cube = product_rule_cube(gauss_nodes_for_degree(degree), space.cube_params(), space.m())?;
    let ball = ball_rule(space.d(), space.mu(), degree)?;
    Ok((cube, ball))
}

/// Tensor rule on `B^d x I^m` with points laid out as `(x_1..x_m, y_1..y_d)`.
pub fn cylinder_rule(space: &CylinderSpace, degree: usize) -> Result<QuadratureRule> {
    let (cube, ball) = cylinder_factors(space, degree)?;
    Ok(cube.tensor(&ball, Domain::Cylinder))
}

/// `sum_i w_i f(p_i)` in ascending node order. A non-finite `f` value aborts.
pub fn integrate<F>(f: F, rule: &QuadratureRule) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut acc = 0.0;
    for (i, (p, w)) in rule.points().zip(rule.weights()).enumerate() {
        let v = f(p);
        if !v.is_finite() {
            return Err(Error::NonFinite { node: i, value: v });
        }
        acc += w * v;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::beta_fn;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    /// ∫ x^k (1-x)^a (1+x)^b dx by expanding x^k = ((x+1) - 1)^k:
    /// sum_i C(k,i)(-1)^{k-i} 2^{a+b+i+1} B(a+1, b+i+1).
    /// Moments of `(1-x)^a (1+x)^b` by the integration-by-parts recurrence
    /// `(a+b+k+2) m_{k+1} = (b-a) m_k + k m_{k-1}`.
    fn jacobi_moment(k: usize, a: f64, b: f64) -> f64 {
        let mut prev = 0.0;
        let mut cur = 2f64.powf(a + b + 1.0) * beta_fn(a + 1.0, b + 1.0);
        for j in 0..k {
            let next = ((b - a) * cur + j as f64 * prev) / (a + b + j as f64 + 2.0);
            prev = cur;
            cur = next;
        }
        cur
    }

    #[test]
    fn one_point_legendre() {
        let r = gauss_jacobi_rule(1, &JacobiParams::legendre()).unwrap();
        assert!(r.point(0)[0].abs() < 1e-15);
        assert!((r.weight_slice()[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn two_point_legendre_integrates_square() {
        let r = gauss_jacobi_rule(2, &JacobiParams::legendre()).unwrap();
        let v = integrate(|x| x[0] * x[0], &r).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_chebyshev_closed_form() {
        let r = gauss_jacobi_rule(5, &JacobiParams::chebyshev()).unwrap();
        let mut expected: Vec<f64> = (1..=5).map(|k| ((2 * k - 1) as f64 * PI / 10.0).cos()).collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, e) in r.abscissae().iter().zip(&expected) {
            assert!((x - e).abs() < 1e-13);
        }
        for w in r.weights() {
            assert!((w - PI / 5.0).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_nodes_rejected() {
        assert!(gauss_jacobi_rule(0, &JacobiParams::legendre()).is_err());
    }

    #[test]
    fn exactness_against_moments() {
        for &(a, b) in &[(0.0, 0.0), (-0.5, -0.5), (0.7, -0.3), (2.0, 0.5), (-0.9, 1.5)] {
            let p = JacobiParams::new(a, b).unwrap();
            for n in 1..=12 {
                let r = gauss_jacobi_rule(n, &p).unwrap();
                assert!(rel(r.total_mass(), jacobi_moment(0, a, b)) < 1e-12);
                for k in 0..=(2 * n - 1) {
                    let q = integrate(|x| x[0].powi(k as i32), &r).unwrap();
                    let exact = jacobi_moment(k, a, b);
                    assert!((q - exact).abs() < 1e-10 * exact.abs().max(1.0), "a={a} b={b} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn nodes_interlace() {
        for &(a, b) in &[(0.0, 0.0), (-0.5, -0.5), (1.3, -0.4)] {
            let p = JacobiParams::new(a, b).unwrap();
            for n in 1..30 {
                let x = gauss_jacobi_rule(n, &p).unwrap().abscissae();
                let y = gauss_jacobi_rule(n + 1, &p).unwrap().abscissae();
                assert!(x.windows(2).all(|w| w[0] < w[1]));
                assert!(x.iter().all(|v| *v > -1.0 && *v < 1.0));
                for i in 0..n {
                    assert!(y[i] < x[i] && x[i] < y[i + 1], "a={a} b={b} n={n}");
                }
            }
        }
    }

    #[test]
    fn doubling_stability_smooth_integrand() {
        for &(a, b) in &[(0.0, 0.0), (-0.5, -0.5), (0.5, 1.5)] {
            let p = JacobiParams::new(a, b).unwrap();
            for n in [32usize, 64] {
                let r1 = gauss_jacobi_rule(n, &p).unwrap();
                let r2 = gauss_jacobi_rule(2 * n, &p).unwrap();
                let f = |x: &[f64]| x[0].exp();
                let (i1, i2) = (integrate(f, &r1).unwrap(), integrate(f, &r2).unwrap());
                assert!((i1 - i2).abs() < 1e-8);
            }
        }
        let rule1 = ball_rule(2, 0.5, 64).unwrap();
        let rule2 = ball_rule(2, 0.5, 128).unwrap();
        let f = |y: &[f64]| y[0].exp();
        assert!((integrate(f, &rule1).unwrap() - integrate(f, &rule2).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn large_rule_is_healthy() {
        let p = JacobiParams::new(-0.5, -0.5).unwrap();
        let r = gauss_jacobi_rule(300, &p).unwrap();
        assert!(rel(r.total_mass(), PI) < 1e-12);
        assert!(r.weights().all(|w| w > 0.0));
        for (k, x) in r.abscissae().iter().enumerate() {
            let e = -((2 * k + 1) as f64 * PI / 600.0).cos();
            assert!((x - e).abs() < 1e-13);
        }
    }

    #[test]
    fn cube_rules() {
        let leg = JacobiParams::legendre();
        let r1 = product_rule_cube(4, &[leg], 1).unwrap();
        let g = gauss_jacobi_rule(4, &leg).unwrap();
        assert_eq!(r1.abscissae(), g.abscissae());
        assert_eq!(r1.domain(), Domain::Cube);

        let r2 = product_rule_cube(3, &[leg, leg], 2).unwrap();
        let v = integrate(|x| x[0].powi(2) * x[1].powi(4), &r2).unwrap();
        assert!((v - (2.0 / 3.0) * (2.0 / 5.0)).abs() < 1e-14);

        let ch = JacobiParams::chebyshev();
        let r3 = product_rule_cube(6, &[ch, ch], 2).unwrap();
        assert!(rel(r3.total_mass(), PI * PI) < 1e-13);

        assert!(product_rule_cube(3, &[], 0).is_err());
        assert!(product_rule_cube(3, &[leg], 2).is_err());
    }

    #[test]
    fn ball_rule_masses() {
        assert!(rel(ball_rule(2, 0.5, 6).unwrap().total_mass(), PI) < 1e-13);
        assert!(rel(ball_rule(2, 1.5, 6).unwrap().total_mass(), PI / 2.0) < 1e-13);
        assert!(rel(ball_rule(2, 0.0, 6).unwrap().total_mass(), 2.0 * PI) < 1e-13);
        let b1 = ball_rule(1, 0.0, 9).unwrap();
        let gc = gauss_jacobi_rule(5, &JacobiParams::chebyshev()).unwrap();
        assert_eq!(b1.abscissae(), gc.abscissae());
        assert!(ball_rule(3, 0.5, 4).is_err());
        assert!(ball_rule(2, -0.1, 4).is_err());
    }

    /// ∫_{B^2} y1^a y2^b (1-|y|^2)^{mu-1/2} dy for even a, b:
    /// angular part 2 B((a+1)/2, (b+1)/2), radial part B((a+b+2)/2, mu+1/2)/2.
    fn disk_moment(a: u32, b: u32, mu: f64) -> f64 {
        if a % 2 == 1 || b % 2 == 1 {
            return 0.0;
        }
        let ang = 2.0 * beta_fn((a as f64 + 1.0) / 2.0, (b as f64 + 1.0) / 2.0);
        let rad = 0.5 * beta_fn((a + b) as f64 / 2.0 + 1.0, mu + 0.5);
        ang * rad
    }

    #[test]
    fn disk_rule_exactness() {
        for &mu in &[0.0, 0.5, 1.5, 2.2] {
            for degree in [0usize, 3, 8, 13] {
                let r = ball_rule(2, mu, degree).unwrap();
                assert!(r.exactness_degree() >= degree);
                for a in 0..=degree as u32 {
                    for b in 0..=(degree as u32 - a) {
                        let q = integrate(|y| y[0].powi(a as i32) * y[1].powi(b as i32), &r).unwrap();
                        let e = disk_moment(a, b, mu);
                        assert!((q - e).abs() < 1e-12, "mu={mu} deg={degree} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn cylinder_rule_mass_and_monomials() {
        let sp = CylinderSpace::new(1, 1, 0.0, vec![-0.5], vec![-0.5]).unwrap();
        let r = cylinder_rule(&sp, 6).unwrap();
        assert!(rel(r.total_mass(), PI * PI) < 1e-13);
        assert_eq!(r.dim(), 2);

        let sp2 = CylinderSpace::new(2, 1, 0.5, vec![0.0], vec![0.0]).unwrap();
        let r2 = cylinder_rule(&sp2, 8).unwrap();
        let v = integrate(|p| p[0].powi(2) * p[1].powi(2) * p[2].powi(4), &r2).unwrap();
        let e = (2.0 / 3.0) * disk_moment(2, 4, 0.5);
        assert!((v - e).abs() < 1e-14);
    }

    #[test]
    fn integrate_rejects_non_finite() {
        let r = gauss_jacobi_rule(3, &JacobiParams::legendre()).unwrap();
        let err = integrate(|x| if x[0] > 0.5 { f64::NAN } else { 1.0 }, &r).unwrap_err();
        assert!(matches!(err, Error::NonFinite { node: 2, .. }));
        assert!((integrate(|_| 1.0, &r).unwrap() - 2.0).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn random_polynomials_integrate_exactly(
            a in -0.9f64..3.0,
            b in -0.9f64..3.0,
            n in 1usize..10,
            coeffs in proptest::collection::vec(-1.0f64..1.0, 20),
        ) {
            let p = JacobiParams::new(a, b).unwrap();
            let r = gauss_jacobi_rule(n, &p).unwrap();
            let deg = 2 * n - 1;
            let poly = |x: f64| coeffs[..=deg].iter().rev().fold(0.0, |acc, c| acc * x + c);
            let q = integrate(|x| poly(x[0]), &r).unwrap();
            let exact: f64 = (0..=deg).map(|k| coeffs[k] * jacobi_moment(k, a, b)).sum();
            let scale: f64 = (0..=deg).map(|k| (coeffs[k] * jacobi_moment(k, a, b)).abs()).sum();
            prop_assert!((q - exact).abs() <= 1e-10 * scale.max(1.0));
        }
    }
}
