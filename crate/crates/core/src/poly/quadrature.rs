//! Collapsed (Duffy) Gauss–Legendre rules on the simplex.
//!
//! Positive weights everywhere and no node on the simplex boundary, which
//! matters for integrands that blow up at a vertex.

use super::simplex_measure;
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub dim: usize,
    /// Barycentric coordinates `(λ_0, …, λ_d)` of each node.
    pub points: Vec<Vec<f64>>,
    /// Normalized to sum to one.
    pub weights: Vec<f64>,
    pub exactness: usize,
}

/// Rule on the `dim`-simplex exact for polynomials of degree `<= exactness`.
pub fn quadrature(dim: usize, exactness: usize) -> QuadratureRule {
    if dim == 0 {
        return QuadratureRule {
            dim,
            points: vec![vec![1.0]],
            weights: vec![1.0],
            exactness,
        };
    }
    // the collapse Jacobian adds up to dim-1 degrees in the first direction
    let q = (exactness + dim).div_ceil(2).max(1);
    let (nodes, gw) = gauss_legendre_unit(q);
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let total = q.pow(dim as u32);
    let d_fact: f64 = (1..=dim).map(|i| i as f64).product();
    let mut idx = vec![0usize; dim];
    for _ in 0..total {
        let mut t = vec![0.0; dim];
        let mut remaining = 1.0;
        let mut w = d_fact;
        for i in 0..dim {
            let u = nodes[idx[i]];
            t[i] = remaining * u;
            w *= gw[idx[i]] * remaining;
            remaining *= 1.0 - u;
        }
        let mut lam = Vec::with_capacity(dim + 1);
        lam.push(1.0 - t.iter().sum::<f64>());
        lam.extend_from_slice(&t);
        points.push(lam);
        weights.push(w);
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < q {
                break;
            }
            *slot = 0;
        }
    }
    QuadratureRule {
        dim,
        points,
        weights,
        exactness,
    }
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Physical node locations on a simplex with `dim + 1` vertices.
    pub fn physical_points<P: AsRef<[f64]>>(&self, vertices: &[P]) -> Vec<Vec<f64>> {
        assert_eq!(vertices.len(), self.dim + 1, "vertex count mismatch");
        let n = vertices[0].as_ref().len();
        self.points
            .iter()
            .map(|lam| {
                let mut x = vec![0.0; n];
                for (l, v) in lam.iter().zip(vertices) {
                    for (xi, vi) in x.iter_mut().zip(v.as_ref()) {
                        *xi += l * vi;
                    }
                }
                x
            })
            .collect()
    }

    /// `∫_S f` over a physical simplex.
    pub fn integrate<P, F>(&self, vertices: &[P], mut f: F) -> Result<f64>
    where
        P: AsRef<[f64]>,
        F: FnMut(&[f64]) -> f64,
    {
        let measure = simplex_measure(vertices)?;
        let sum: f64 = self
            .physical_points(vertices)
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(x))
            .sum();
        Ok(measure * sum)
    }
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre_unit(q: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(q);
    let mut weights = Vec::with_capacity(q);
    for i in 0..q {
        // Tricomi initial guess, then Newton on P_q
        let mut x = ((4 * i + 3) as f64 * std::f64::consts::PI / (4 * q + 2) as f64).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(q, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(q, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes.push(0.5 * (1.0 - x));
        weights.push(0.5 * w);
    }
    (nodes, weights)
}

fn legendre_with_derivative(q: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if q == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=q {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{barycentric_moment, basis_multiindices};
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_one() {
        for dim in 0..=3 {
            for e in 0..=12 {
                let r = quadrature(dim, e);
                assert_relative_eq!(r.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-13);
                assert!(r.weights.iter().all(|w| *w > 0.0));
            }
        }
    }

    #[test]
    fn cubic_on_unit_interval() {
        let r = quadrature(1, 3);
        let v = r.integrate(&[[0.0], [1.0]], |x| x[0].powi(3)).unwrap();
        assert_relative_eq!(v, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn barycentric_moments_reproduced() {
        for dim in 1..=3 {
            for e in 0..=8 {
                let r = quadrature(dim, e);
                for a in basis_multiindices(dim + 1, e) {
                    let a = a.exponents();
                    let exact = barycentric_moment(a, 1.0);
                    let approx: f64 = r
                        .points
                        .iter()
                        .zip(&r.weights)
                        .map(|(l, w)| {
                            w * l
                                .iter()
                                .zip(a)
                                .map(|(x, &k)| x.powi(k as i32))
                                .product::<f64>()
                        })
                        .sum();
                    assert!(
                        (approx - exact).abs() <= 1e-12 * exact.abs(),
                        "dim {dim} exactness {e} a {a:?}: {approx} vs {exact}"
                    );
                }
            }
        }
    }
}
