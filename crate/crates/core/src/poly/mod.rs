//! Dense multivariate polynomials over the graded monomial basis.
//!
//! Coefficients are stored densely for every monomial of total degree
//! `<= degree`, in the graded lexicographic order of
//! [`basis_multiindices`]. All integrals of polynomials over simplices go
//! through affine composition with the simplex parameterization followed by
//! the closed-form moments of the reference simplex, so they carry no
//! quadrature error.

mod multiindex;
pub mod quadrature;

pub use multiindex::{
    basis_multiindices, binomial, factorial, indices_of_order, monomial_count, MultiIndex,
    MAX_DEGREE, MAX_DIM,
};
pub use quadrature::{quadrature, QuadratureRule};

use crate::error::{Error, Result};
use multiindex::table;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug)]
pub struct Poly {
    dim: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "degree {degree} exceeds {MAX_DEGREE}");
        // touch the table so dimension errors surface at construction
        table(dim);
        Poly {
            dim,
            degree,
            coeffs: vec![0.0; monomial_count(dim, degree)],
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Poly::zero(dim, 0);
        p.coeffs[0] = c;
        p
    }

    /// `coef · x^α`
    pub fn monomial(alpha: &[usize], coef: f64) -> Self {
        let degree = alpha.iter().sum();
        let mut p = Poly::zero(alpha.len(), degree);
        let i = table(alpha.len()).index(alpha);
        p.coeffs[i] = coef;
        p
    }

    /// `c0 + g · x`
    pub fn linear(c0: f64, gradient: &[f64]) -> Self {
        let dim = gradient.len();
        let mut p = Poly::zero(dim, 1);
        p.coeffs[0] = c0;
        p.coeffs[1..].copy_from_slice(gradient);
        p
    }

    /// Builds a polynomial from coefficients in graded order.
    pub fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        let expected = monomial_count(dim, degree);
        if coeffs.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Poly {
            dim,
            degree,
            coeffs,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Degree bound of the storage (not necessarily the exact degree).
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &[usize]) -> f64 {
        if alpha.iter().sum::<usize>() > self.degree {
            return 0.0;
        }
        self.coeffs[table(self.dim).index(alpha)]
    }

    /// Exponents of the `i`-th stored coefficient.
    pub fn exponents(&self, i: usize) -> &'static [usize] {
        table(self.dim).exps(i)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs_coeff() <= tol
    }

    /// Coefficientwise comparison, relative to the larger coefficient scale.
    pub fn approx_eq(&self, other: &Poly, rel: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let scale = self.max_abs_coeff().max(other.max_abs_coeff()).max(1e-300);
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| {
            let a = self.coeffs.get(i).copied().unwrap_or(0.0);
            let b = other.coeffs.get(i).copied().unwrap_or(0.0);
            (a - b).abs() <= rel * scale
        })
    }

    /// Re-expresses the polynomial with a different degree bound; dropped
    /// coefficients must be (numerically) zero.
    pub fn with_degree(&self, degree: usize) -> Poly {
        let mut p = Poly::zero(self.dim, degree);
        let n = p.coeffs.len().min(self.coeffs.len());
        p.coeffs[..n].copy_from_slice(&self.coeffs[..n]);
        p
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let powers = powers_table(x, self.degree);
        let t = table(self.dim);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, c)| {
                let e = t.exps(i);
                c * e
                    .iter()
                    .enumerate()
                    .map(|(j, &a)| powers[j][a])
                    .product::<f64>()
            })
            .sum()
    }

    /// Exact partial derivative `∂^α p`.
    pub fn derivative(&self, alpha: &[usize]) -> Poly {
        assert_eq!(alpha.len(), self.dim, "multi-index dimension mismatch");
        let order: usize = alpha.iter().sum();
        let degree = self.degree.saturating_sub(order);
        let mut out = Poly::zero(self.dim, degree);
        if order > self.degree {
            return out;
        }
        let t = table(self.dim);
        let mut reduced = vec![0usize; self.dim];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let e = t.exps(i);
            if e.iter().zip(alpha).any(|(a, b)| a < b) {
                continue;
            }
            let mut factor = c;
            for j in 0..self.dim {
                reduced[j] = e[j] - alpha[j];
                factor *= falling_factorial(e[j], alpha[j]);
            }
            out.coeffs[t.index(&reduced)] += factor;
        }
        out
    }

    /// Iterated directional derivative `∂^{|α|} p / ∂d_1^{α_1} ⋯ ∂d_k^{α_k}`.
    ///
    /// The operator has constant coefficients, so it is expanded once into
    /// `Σ_β c_β ∂^β` and the order of the directions is irrelevant.
    pub fn directional_derivative(&self, directions: &[Vec<f64>], orders: &[usize]) -> Poly {
        let symbol = directional_symbol(self.dim, directions, orders);
        apply_symbol(self, &symbol)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self += a · other`, widening the degree bound if needed.
    pub fn axpy(&mut self, a: f64, other: &Poly) {
        assert_eq!(self.dim, other.dim);
        if other.degree > self.degree {
            *self = self.with_degree(other.degree);
        }
        for (s, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *s += a * o;
        }
    }

    pub fn mul_poly(&self, other: &Poly) -> Poly {
        assert_eq!(self.dim, other.dim);
        let degree = self.degree + other.degree;
        let mut out = Poly::zero(self.dim, degree);
        let t = table(self.dim);
        let mut sum = vec![0usize; self.dim];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let ei = t.exps(i);
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let ej = t.exps(j);
                for k in 0..self.dim {
                    sum[k] = ei[k] + ej[k];
                }
                out.coeffs[t.index(&sum)] += a * b;
            }
        }
        out
    }

    /// `p ∘ map`, a polynomial in the map's source variables.
    pub fn compose(&self, map: &AffineMap) -> Poly {
        let images = map.monomial_images(self.degree);
        compose_with_images(self, &images, map.source_dim())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.with_degree(self.degree.max(rhs.degree));
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.with_degree(self.degree.max(rhs.degree));
        out.axpy(-1.0, rhs);
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_poly(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-1.0)
    }
}

/// Position of `x^α` in the graded ordering.
pub fn monomial_index(alpha: &[usize]) -> usize {
    table(alpha.len()).index(alpha)
}

fn falling_factorial(a: usize, k: usize) -> f64 {
    (0..k).map(|i| (a - i) as f64).product()
}

fn powers_table(x: &[f64], degree: usize) -> Vec<Vec<f64>> {
    x.iter()
        .map(|&xi| {
            let mut p = Vec::with_capacity(degree + 1);
            let mut acc = 1.0;
            for _ in 0..=degree {
                p.push(acc);
                acc *= xi;
            }
            p
        })
        .collect()
}

/// Symbol `∏_l (d_l · ξ)^{α_l}` of a mixed directional derivative; its
/// coefficient at `ξ^β` multiplies `∂^β`.
pub fn directional_symbol(dim: usize, directions: &[Vec<f64>], orders: &[usize]) -> Poly {
    assert_eq!(directions.len(), orders.len(), "one order per direction");
    let mut symbol = Poly::constant(dim, 1.0);
    for (d, &k) in directions.iter().zip(orders) {
        assert_eq!(d.len(), dim, "direction dimension mismatch");
        let lin = Poly::linear(0.0, d);
        for _ in 0..k {
            symbol = symbol.mul_poly(&lin);
        }
    }
    symbol
}

/// Applies the constant-coefficient operator `Σ_β c_β ∂^β` given by `symbol`.
pub fn apply_symbol(p: &Poly, symbol: &Poly) -> Poly {
    let mut out = Poly::zero(p.dim, p.degree.saturating_sub(min_order(symbol)));
    for (i, &c) in symbol.coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let beta = table(p.dim).exps(i);
        out.axpy(c, &p.derivative(beta));
    }
    out
}

fn min_order(symbol: &Poly) -> usize {
    let t = table(symbol.dim);
    symbol
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(i, _)| t.exps(i).iter().sum())
        .min()
        .unwrap_or(0)
}

/// Affine map `x = offset + linear · t` from `R^d` (source) into `R^n`.
#[derive(Clone, Debug)]
pub struct AffineMap {
    pub offset: Vec<f64>,
    /// `n` rows of `d` entries.
    pub linear: Vec<Vec<f64>>,
    source_dim: usize,
}

impl AffineMap {
    pub fn new(offset: Vec<f64>, linear: Vec<Vec<f64>>, source_dim: usize) -> Self {
        assert_eq!(offset.len(), linear.len());
        assert!(linear.iter().all(|r| r.len() == source_dim));
        AffineMap {
            offset,
            linear,
            source_dim,
        }
    }

    /// Parameterization `x(t) = v_0 + Σ_j t_j (v_j − v_0)` of a simplex.
    pub fn simplex<P: AsRef<[f64]>>(vertices: &[P]) -> Self {
        let v0 = vertices[0].as_ref();
        let d = vertices.len() - 1;
        let linear = (0..v0.len())
            .map(|i| (1..=d).map(|j| vertices[j].as_ref()[i] - v0[i]).collect())
            .collect();
        AffineMap::new(v0.to_vec(), linear, d)
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.offset.len()
    }

    pub fn apply(&self, t: &[f64]) -> Vec<f64> {
        self.offset
            .iter()
            .zip(&self.linear)
            .map(|(o, row)| o + row.iter().zip(t).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }

    /// Images `x(t)^α` of every target monomial of degree `<= degree`, as
    /// polynomials in `t`, indexed in graded order.
    pub fn monomial_images(&self, degree: usize) -> Vec<Poly> {
        let n = self.target_dim();
        let d = self.source_dim;
        let forms: Vec<Poly> = (0..n)
            .map(|i| Poly::linear(self.offset[i], &self.linear[i]))
            .collect();
        let t = table(n);
        let count = monomial_count(n, degree);
        let mut images: Vec<Poly> = Vec::with_capacity(count);
        images.push(Poly::constant(d, 1.0));
        let mut parent = vec![0usize; n];
        for i in 1..count {
            let e = t.exps(i);
            let j = e
                .iter()
                .position(|&a| a > 0)
                .expect("non-constant monomial");
            parent.copy_from_slice(e);
            parent[j] -= 1;
            let img = images[t.index(&parent)].mul_poly(&forms[j]);
            images.push(img);
        }
        images
    }
}

fn compose_with_images(p: &Poly, images: &[Poly], source_dim: usize) -> Poly {
    let mut out = Poly::zero(source_dim, p.degree);
    for (c, img) in p.coeffs.iter().zip(images) {
        if *c != 0.0 {
            out.axpy(*c, img);
        }
    }
    out
}

/// `∫ t^a dt` over the reference simplex `{t_i >= 0, Σ t_i <= 1}` in `R^d`.
pub fn reference_monomial_integral(a: &[usize]) -> f64 {
    let d = a.len();
    let total: usize = a.iter().sum();
    a.iter().map(|&k| factorial(k)).product::<f64>() / factorial(total + d)
}

/// `∫ q` over the reference simplex of `q`'s dimension.
pub fn integrate_reference(q: &Poly) -> f64 {
    let t = table(q.dim);
    q.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(i, c)| c * reference_monomial_integral(t.exps(i)))
        .sum()
}

/// Closed-form `∫_S ∏ λ_i^{a_i} dS = |S| d! ∏ a_i! / (Σ a_i + d)!` for a
/// `d`-simplex with measure `measure`; `a` has `d + 1` entries.
pub fn barycentric_moment(a: &[usize], measure: f64) -> f64 {
    let d = a.len() - 1;
    let total: usize = a.iter().sum();
    measure * factorial(d) * a.iter().map(|&k| factorial(k)).product::<f64>() / factorial(total + d)
}

/// `d`-dimensional measure of the simplex spanned by `d + 1` points.
pub fn simplex_measure<P: AsRef<[f64]>>(vertices: &[P]) -> Result<f64> {
    let d = vertices
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::DegenerateSimplex("a simplex needs at least one vertex".into()))?;
    if d == 0 {
        return Ok(1.0);
    }
    let v0 = vertices[0].as_ref();
    let edges: Vec<Vec<f64>> = vertices[1..]
        .iter()
        .map(|v| v.as_ref().iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    if edges.iter().any(|e| e.len() != v0.len()) || d > v0.len() {
        return Err(Error::DegenerateSimplex(format!(
            "{d}-simplex cannot embed in R^{}",
            v0.len()
        )));
    }
    let gram: Vec<Vec<f64>> = edges
        .iter()
        .map(|a| edges.iter().map(|b| dot(a, b)).collect())
        .collect();
    let det = determinant(gram).max(0.0);
    let measure = det.sqrt() / factorial(d);
    let diam = diameter(vertices);
    if !(measure > 1e-12 * diam.powi(d as i32)) {
        return Err(Error::DegenerateSimplex(format!(
            "measure {measure:.3e} with diameter {diam:.3e}"
        )));
    }
    Ok(measure)
}

/// Maximum pairwise distance.
pub fn diameter<P: AsRef<[f64]>>(points: &[P]) -> f64 {
    let mut h: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d2: f64 = a
                .as_ref()
                .iter()
                .zip(b.as_ref())
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            h = h.max(d2.sqrt());
        }
    }
    h
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot = &top[col];
        for row in rest.iter_mut().take(n - col - 1) {
            let f = row[col] / pivot[col];
            for (x, p) in row[col..n].iter_mut().zip(&pivot[col..n]) {
                *x -= f * p;
            }
        }
    }
    det
}

/// Exact integral of `p` over a simplex of any dimension `d <= n` embedded
/// in `R^n`.
pub fn integrate_simplex_exact<P: AsRef<[f64]>>(p: &Poly, vertices: &[P]) -> Result<f64> {
    let measure = simplex_measure(vertices)?;
    let d = vertices.len() - 1;
    let map = AffineMap::simplex(vertices);
    Ok(measure * factorial(d) * integrate_reference(&p.compose(&map)))
}

/// Integrals `∫_S x^α` of every monomial up to a degree over one simplex.
#[derive(Clone, Debug)]
pub struct SimplexMoments {
    pub dim: usize,
    pub degree: usize,
    pub measure: f64,
    pub values: Vec<f64>,
}

impl SimplexMoments {
    pub fn new<P: AsRef<[f64]>>(vertices: &[P], degree: usize) -> Result<Self> {
        let measure = simplex_measure(vertices)?;
        let d = vertices.len() - 1;
        let dim = vertices[0].as_ref().len();
        let scale = measure * factorial(d);
        let values = AffineMap::simplex(vertices)
            .monomial_images(degree)
            .iter()
            .map(|img| scale * integrate_reference(img))
            .collect();
        Ok(SimplexMoments {
            dim,
            degree,
            measure,
            values,
        })
    }

    pub fn integrate(&self, p: &Poly) -> f64 {
        assert!(p.degree <= self.degree, "moments too low for polynomial");
        p.coeffs.iter().zip(&self.values).map(|(c, m)| c * m).sum()
    }

    /// `∫_S p q` without forming the product.
    pub fn inner(&self, p: &Poly, q: &Poly) -> f64 {
        assert!(
            p.degree + q.degree <= self.degree,
            "moments too low for product"
        );
        let t = table(self.dim);
        let mut sum = vec![0usize; self.dim];
        let mut acc = 0.0;
        for (i, &a) in p.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let ei = t.exps(i);
            let mut row = 0.0;
            for (j, &b) in q.coeffs.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let ej = t.exps(j);
                for k in 0..self.dim {
                    sum[k] = ei[k] + ej[k];
                }
                row += b * self.values[t.index(&sum)];
            }
            acc += a * row;
        }
        acc
    }
}

/// Reference-simplex moments `∫ t^γ` in `d` variables up to `degree`.
pub fn reference_moments(d: usize, degree: usize) -> Vec<f64> {
    let t = table(d);
    (0..monomial_count(d, degree))
        .map(|i| reference_monomial_integral(t.exps(i)))
        .collect()
}

/// `∫ p q` over the reference simplex of their dimension, given moments
/// from [`reference_moments`] of sufficient degree.
pub fn reference_inner(p: &Poly, q: &Poly, moments: &[f64]) -> f64 {
    let t = table(p.dim);
    let mut sum = vec![0usize; p.dim];
    let mut acc = 0.0;
    for (i, &a) in p.coeffs.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let ei = t.exps(i);
        for (j, &b) in q.coeffs.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            let ej = t.exps(j);
            for k in 0..p.dim {
                sum[k] = ei[k] + ej[k];
            }
            acc += a * b * moments[t.index(&sum)];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hand_derivatives() {
        // x²y, α=(1,1) → 2x
        let p = Poly::monomial(&[2, 1], 1.0);
        let d = p.derivative(&[1, 1]);
        assert!(d.approx_eq(&Poly::monomial(&[1, 0], 2.0), 1e-14));
        assert!(p.derivative(&[3, 1]).is_zero(0.0));
        let c = Poly::monomial(&[3, 0], 1.0).derivative(&[3, 0]);
        assert_relative_eq!(c.eval(&[0.3, -2.0]), 6.0);
    }

    #[test]
    fn directional_examples() {
        let x2 = Poly::monomial(&[2, 0], 1.0);
        let d = x2.directional_derivative(&[vec![1.0, 0.0]], &[2]);
        assert_relative_eq!(d.eval(&[0.7, 0.1]), 2.0);

        let xy = Poly::monomial(&[1, 1], 1.0);
        let d = xy.directional_derivative(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[1, 1]);
        assert_relative_eq!(d.eval(&[0.2, 0.9]), 1.0);

        let s = Poly::linear(0.0, &[1.0, 1.0]);
        let p = s.mul_poly(&s);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let d = p.directional_derivative(&[vec![r, r]], &[2]);
        assert_relative_eq!(d.eval(&[0.0, 0.0]), 4.0, epsilon = 1e-14);
    }

    #[test]
    fn exact_integration_examples() {
        let tri = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let one = Poly::constant(2, 1.0);
        assert_relative_eq!(integrate_simplex_exact(&one, &tri).unwrap(), 0.5);
        let xy = Poly::monomial(&[1, 1], 1.0);
        assert_relative_eq!(
            integrate_simplex_exact(&xy, &tri).unwrap(),
            1.0 / 24.0,
            epsilon = 1e-16
        );
        let seg = [[0.0, 0.0], [1.0, 1.0]];
        let x = Poly::monomial(&[1, 0], 1.0);
        assert_relative_eq!(
            integrate_simplex_exact(&x, &seg).unwrap(),
            2f64.sqrt() / 2.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn point_integral_is_evaluation() {
        let p = &Poly::monomial(&[2, 1], 3.0) + &Poly::constant(2, 1.0);
        let v = integrate_simplex_exact(&p, &[[0.5, 2.0]]).unwrap();
        assert_relative_eq!(v, 1.0 + 3.0 * 0.25 * 2.0);
    }

    #[test]
    fn degenerate_simplex_rejected() {
        let flat = [[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]];
        assert!(matches!(
            integrate_simplex_exact(&Poly::constant(2, 1.0), &flat),
            Err(Error::DegenerateSimplex(_))
        ));
    }

    #[test]
    fn moments_agree_with_direct_integration() {
        let tet = [
            [0.1, 0.0, 0.2],
            [1.0, 0.1, 0.0],
            [0.2, 0.9, 0.1],
            [0.0, 0.3, 1.1],
        ];
        let mom = SimplexMoments::new(&tet, 4).unwrap();
        for a in basis_multiindices(3, 4) {
            let p = Poly::monomial(a.exponents(), 1.0);
            let direct = integrate_simplex_exact(&p, &tet).unwrap();
            assert_relative_eq!(mom.integrate(&p), direct, max_relative = 1e-13);
        }
        let p = &Poly::linear(1.0, &[1.0, -2.0, 0.5]) * &Poly::monomial(&[0, 1, 0], 1.0);
        let q = Poly::linear(0.3, &[0.0, 1.0, 1.0]);
        assert_relative_eq!(
            mom.inner(&p, &q),
            mom.integrate(&(&p * &q)),
            max_relative = 1e-13
        );
    }

    #[test]
    fn compose_matches_pointwise_evaluation() {
        let p = &Poly::monomial(&[2, 1], 1.5) + &Poly::linear(0.2, &[1.0, -1.0]);
        let map = AffineMap::new(vec![0.3, -0.1], vec![vec![2.0], vec![-0.5]], 1);
        let q = p.compose(&map);
        for t in [0.0, 0.25, 0.8, -1.3] {
            assert_relative_eq!(q.eval(&[t]), p.eval(&map.apply(&[t])), max_relative = 1e-13);
        }
    }
}
