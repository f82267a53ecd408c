//! Exact solutions with closed-form partial derivatives.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::indices_of_order;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Smoothness {
    Analytic,
    /// Lies in `H^s` only up to the given index because of a point
    /// singularity.
    Singular {
        sobolev_index: f64,
        point: [f64; 2],
    },
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    HarmonicExpSin,
    LShapeSingular,
    ProductSineSquared,
}

/// Exact solution `u` with closed-form partials and the matching source.
#[derive(Clone, Debug)]
pub struct ExactSolution {
    name: &'static str,
    dim: usize,
    smoothness: Smoothness,
    /// Whether all boundary DOFs of `u` vanish, so no lifting is needed.
    homogeneous: bool,
    kind: Kind,
}

impl ExactSolution {
    pub fn name(&self) -> &str {
        self.name
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn has_homogeneous_data(&self) -> bool {
        self.homogeneous
    }

    pub fn singular_point(&self) -> Option<Vec<f64>> {
        match self.smoothness {
            Smoothness::Singular { point, .. } => Some(point.to_vec()),
            Smoothness::Analytic => None,
        }
    }

    /// Source term `f` matching the order-`m` stiffness form:
    /// `(−1)^m Σ_{|γ|=m} ∂^{2γ} u`. This is `−Δu` for `m = 1` but differs
    /// from `(−Δ)^m u` by the mixed terms for `m >= 2`.
    ///
    /// For harmonic `u` in the plane, `∂_y² = −∂_x²` collapses the sum to
    /// `Σ_j (−1)^j ∂_x^{2m} u`: zero for odd `m`, `∂_x^{2m} u` for even `m`.
    pub fn source(&self, x: &[f64], m: usize) -> f64 {
        match self.kind {
            Kind::HarmonicExpSin | Kind::LShapeSingular => {
                if m % 2 == 1 {
                    0.0
                } else {
                    self.partial(x, &[2 * m, 0])
                }
            }
            Kind::ProductSineSquared => form_operator(self, x, m),
        }
    }
}

impl Field for ExactSolution {
    fn dim(&self) -> usize {
        self.dim
    }

    fn partial(&self, x: &[f64], alpha: &[usize]) -> f64 {
        match self.kind {
            Kind::HarmonicExpSin => {
                let order = (alpha[0] + alpha[1]) as i32;
                PI.powi(order) * (PI * x[1]).exp() * sin_derivative(PI * x[0], alpha[0])
            }
            Kind::LShapeSingular => lshape_partial(x, alpha),
            Kind::ProductSineSquared => alpha
                .iter()
                .zip(x)
                .map(|(&k, &xi)| sin_squared_derivative(xi, k))
                .product(),
        }
    }
}

/// `(−1)^m Σ_{|γ|=m} ∂^{2γ} u`, the operator of the unweighted form
/// `Σ_{|γ|=m} (∂^γ u, ∂^γ v)` on `H_0^m`; it equals `−Δu` for `m = 1`.
fn form_operator(u: &ExactSolution, x: &[f64], m: usize) -> f64 {
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * indices_of_order(u.dim, m)
        .iter()
        .map(|g| {
            let doubled: Vec<usize> = g.exponents().iter().map(|a| 2 * a).collect();
            u.partial(x, &doubled)
        })
        .sum::<f64>()
}

/// `d^k/dt^k sin(t)`
fn sin_derivative(t: f64, k: usize) -> f64 {
    match k % 4 {
        0 => t.sin(),
        1 => t.cos(),
        2 => -t.sin(),
        _ => -t.cos(),
    }
}

/// `d^k/dx^k sin²(πx)`, using `sin²(πx) = (1 − cos 2πx)/2`.
fn sin_squared_derivative(x: f64, k: usize) -> f64 {
    if k == 0 {
        return (PI * x).sin().powi(2);
    }
    // d^k cos(2πx) = (2π)^k cos^{(k)}(2πx)
    let t = TAU * x;
    let cos_k = match k % 4 {
        0 => t.cos(),
        1 => -t.sin(),
        2 => -t.cos(),
        _ => t.sin(),
    };
    -0.5 * TAU.powi(k as i32) * cos_k
}

/// Polar angle on the branch `[−π/2, 3π/2)`, cut through the removed
/// quadrant of the L-shaped domain.
pub fn lshape_angle(x: f64, y: f64) -> f64 {
    let theta = y.atan2(x);
    if theta <= -FRAC_PI_2 {
        theta + TAU
    } else {
        theta
    }
}

const LSHAPE_EXPONENT: f64 = 2.5;

/// `∂^α Im(z^{5/2}) = Im(i^{α_2} c_k z^{5/2−k})`, `k = |α|`.
fn lshape_partial(x: &[f64], alpha: &[usize]) -> f64 {
    let k = alpha[0] + alpha[1];
    let p = LSHAPE_EXPONENT - k as f64;
    let r = x[0].hypot(x[1]);
    if r == 0.0 {
        return if p > 0.0 { 0.0 } else { f64::NAN };
    }
    let c: f64 = (0..k).map(|j| LSHAPE_EXPONENT - j as f64).product();
    let theta = lshape_angle(x[0], x[1]);
    let mag = c * r.powf(p);
    let (re, im) = (mag * (p * theta).cos(), mag * (p * theta).sin());
    match alpha[1] % 4 {
        0 => im,
        1 => re,
        2 => -im,
        _ => -re,
    }
}

/// `u = exp(πy) sin(πx)`, harmonic.
pub fn harmonic_exp_sin() -> ExactSolution {
    ExactSolution {
        name: "harmonic_exp_sin",
        dim: 2,
        smoothness: Smoothness::Analytic,
        homogeneous: false,
        kind: Kind::HarmonicExpSin,
    }
}

/// `u = r^{5/2} sin(5θ/2)` on the L-shaped domain, harmonic.
pub fn lshape_singular() -> ExactSolution {
    ExactSolution {
        name: "lshape_singular",
        dim: 2,
        smoothness: Smoothness::Singular {
            sobolev_index: 3.5,
            point: [0.0, 0.0],
        },
        homogeneous: false,
        kind: Kind::LShapeSingular,
    }
}

/// `u = ∏ sin²(πx_i)` on the unit box; its trace and first normal
/// derivative vanish, which covers homogeneous data for `m <= 2`.
pub fn manufactured_poly_trig(m: usize, n: usize) -> Result<ExactSolution> {
    if !matches!((m, n), (1, 2) | (2, 2) | (1, 3)) {
        return Err(Error::Unsupported(format!(
            "manufactured solution is available for (m,n) in {{(1,2),(2,2),(1,3)}}, got ({m},{n})"
        )));
    }
    Ok(ExactSolution {
        name: "manufactured",
        dim: n,
        smoothness: Smoothness::Analytic,
        homogeneous: true,
        kind: Kind::ProductSineSquared,
    })
}

/// Registry lookup by the names used on the command line.
pub fn solution_by_name(name: &str, m: usize, n: usize) -> Result<ExactSolution> {
    match name {
        "harmonic_exp_sin" => Ok(harmonic_exp_sin()),
        "lshape_singular" => Ok(lshape_singular()),
        "manufactured" => manufactured_poly_trig(m, n),
        other => Err(Error::Config(format!("unknown solution '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::basis_multiindices;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Richardson-extrapolated central difference of `∂^{α−e_i} u` along `x_i`.
    fn fd_check(u: &ExactSolution, x: &[f64], alpha: &[usize], i: usize, h: f64) -> f64 {
        let mut lower = alpha.to_vec();
        lower[i] -= 1;
        let diff = |h: f64| {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            (u.partial(&xp, &lower) - u.partial(&xm, &lower)) / (2.0 * h)
        };
        (4.0 * diff(h / 2.0) - diff(h)) / 3.0
    }

    fn consistency(
        u: &ExactSolution,
        max_order: usize,
        sample: impl Fn(&mut ChaCha8Rng) -> Vec<f64>,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = sample(&mut rng);
            for a in basis_multiindices(u.dim(), max_order) {
                let a = a.exponents();
                let Some(i) = a.iter().position(|&k| k > 0) else {
                    continue;
                };
                let exact = u.partial(&x, a);
                let fd = fd_check(u, &x, a, i, 1e-4);
                let scale = exact.abs().max(1.0);
                assert!(
                    (exact - fd).abs() <= 1e-5 * scale,
                    "{} at {x:?} α={a:?}: {exact} vs {fd}",
                    u.name()
                );
            }
        }
    }

    #[test]
    fn harmonic_values() {
        let u = harmonic_exp_sin();
        assert!((u.value(&[0.5, 0.0]) - 1.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let x = [rng.gen::<f64>(), rng.gen::<f64>()];
            let lap = u.partial(&x, &[2, 0]) + u.partial(&x, &[0, 2]);
            assert!(lap.abs() < 1e-12 * u.partial(&x, &[2, 0]).abs().max(1.0));
            let d3 = -PI.powi(3) * (PI * x[1]).exp() * (PI * x[0]).cos();
            assert!((u.partial(&x, &[3, 0]) - d3).abs() < 1e-12 * d3.abs().max(1.0));
        }
        assert_eq!(u.source(&[0.3, 0.2], 3), 0.0);
        for m in [2, 4] {
            let x = [0.3, 0.2];
            let direct = form_operator(&u, &x, m);
            assert!((u.source(&x, m) - direct).abs() < 1e-9 * direct.abs());
            assert!(direct.abs() > 1.0);
        }
        consistency(&u, 4, |r| vec![r.gen(), r.gen()]);
    }

    #[test]
    fn lshape_values() {
        let u = lshape_singular();
        assert!(u.value(&[1.0, 0.0]).abs() < 1e-15);
        let t = PI / 5.0;
        assert!((u.value(&[t.cos(), t.sin()]) - 1.0).abs() < 1e-14);
        // bottom edge of the re-entrant corner is θ = 3π/2
        assert!((lshape_angle(0.0, -0.5) - 1.5 * PI).abs() < 1e-15);
        assert!((lshape_angle(-0.5, -0.5) - 1.25 * PI).abs() < 1e-15);
        assert!(u.partial(&[0.0, 0.0], &[2, 1]).is_nan());
        assert_eq!(u.partial(&[0.0, 0.0], &[1, 1]), 0.0);
        let x = [0.3, 0.4];
        let h = 1e-5;
        let fd = (u.value(&[x[0] + h, x[1]]) - u.value(&[x[0] - h, x[1]])) / (2.0 * h);
        assert!((u.partial(&x, &[1, 0]) - fd).abs() < 1e-7);
        // biharmonic-type source vanishes: u is harmonic
        let lap = u.partial(&[-0.3, 0.2], &[2, 0]) + u.partial(&[-0.3, 0.2], &[0, 2]);
        assert!(lap.abs() < 1e-12);
        consistency(&u, 3, |r| loop {
            let p = vec![r.gen_range(-0.95..0.95), r.gen_range(-0.95..0.95)];
            if !(p[0] > -0.05 && p[1] < 0.05) {
                return p;
            }
        });
    }

    #[test]
    fn lshape_continuous_across_positive_axis() {
        let u = lshape_singular();
        for x in [0.1, 0.5, 0.9] {
            for a in basis_multiindices(2, 3) {
                let above = u.partial(&[x, 1e-12], a.exponents());
                let below = u.partial(&[x, -1e-12], a.exponents());
                // θ slightly negative is in the removed quadrant but the
                // formula is analytic across θ = 0
                assert!((above - below).abs() < 1e-8 * above.abs().max(1.0));
            }
        }
    }

    #[test]
    fn manufactured_checks() {
        assert!(manufactured_poly_trig(3, 2).is_err());
        let u = manufactured_poly_trig(1, 2).unwrap();
        for t in [0.0, 0.3, 0.77, 1.0] {
            for p in [[0.0, t], [1.0, t], [t, 0.0], [t, 1.0]] {
                assert!(u.value(&p).abs() < 1e-15);
                assert!(u.partial(&p, &[1, 0]).abs() < 1e-14);
                assert!(u.partial(&p, &[0, 1]).abs() < 1e-14);
            }
        }
        // −Δu against a finite-difference Laplacian
        let x = [0.31, 0.62];
        let h = 1e-3;
        let v = |p: [f64; 2]| u.value(&p);
        let fd_lap =
            (v([x[0] + h, x[1]]) + v([x[0] - h, x[1]]) + v([x[0], x[1] + h]) + v([x[0], x[1] - h])
                - 4.0 * v(x))
                / (h * h);
        assert!((u.source(&x, 1) + fd_lap).abs() < 1e-4 * fd_lap.abs().max(1.0));
        let closed = -2.0
            * PI
            * PI
            * ((TAU * x[0]).cos() * (PI * x[1]).sin().powi(2)
                + (PI * x[0]).sin().powi(2) * (TAU * x[1]).cos());
        assert!((u.source(&x, 1) - closed).abs() < 1e-12);
        // ∫ sin²(πx) sin²(πy) over the unit square
        let rule = crate::poly::quadrature(2, 20);
        let tri = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| {
            rule.integrate(&[a, b, c], |p| u.value(p)).unwrap()
        };
        let total =
            tri([0.0, 0.0], [1.0, 0.0], [1.0, 1.0]) + tri([0.0, 0.0], [0.0, 1.0], [1.0, 1.0]);
        assert!((total - 0.25).abs() < 1e-10);
        consistency(&u, 4, |r| vec![r.gen(), r.gen()]);
        let u3 = manufactured_poly_trig(1, 3).unwrap();
        consistency(&u3, 3, |r| vec![r.gen(), r.gen(), r.gen()]);
        let b = manufactured_poly_trig(2, 2).unwrap();
        let y = [0.2, 0.7];
        let op = b.partial(&y, &[4, 0]) + b.partial(&y, &[2, 2]) + b.partial(&y, &[0, 4]);
        assert!((b.source(&y, 2) - op).abs() < 1e-9 * op.abs());
    }

    #[test]
    fn registry() {
        assert_eq!(
            solution_by_name("harmonic_exp_sin", 3, 2).unwrap().name(),
            "harmonic_exp_sin"
        );
        assert!(solution_by_name("nope", 3, 2).is_err());
        assert!(solution_by_name("manufactured", 3, 2).is_err());
    }
}
