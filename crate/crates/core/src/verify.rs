//! Quick invariant suite behind `ipnc verify`.

use crate::assemble::{assemble, norm_breakdown, penalty_plan};
use crate::element::{build_element, CellGeometry, NODAL_DUALITY_TOL};
use crate::error::Result;
use crate::linalg::{cg_solve, dense_solve};
use crate::mesh::build_box_mesh;
use crate::poly::{barycentric_moment, binomial, quadrature, simplex_measure, Poly};
use crate::solutions::harmonic_exp_sin;
use crate::space::{continuity_report, DiscreteFunction, Discretization};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, result: Result<(bool, String)>) -> Check {
    match result {
        Ok((passed, detail)) => Check {
            name,
            passed,
            detail,
        },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Deterministic pseudo-random numbers in `[0, 1)` (SplitMix64), so the
/// suite needs no RNG dependency and is reproducible.
struct Mix(u64);

impl Mix {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        ((z ^ (z >> 31)) >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Perturbed reference simplex: vertex `i` is `e_i` plus a small offset.
fn random_simplex(n: usize, rng: &mut Mix) -> Vec<Vec<f64>> {
    (0..=n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j + 1 { 1.0 } else { 0.0 } + 0.3 * (rng.next() - 0.5))
                .collect()
        })
        .collect()
}

fn unisolvence(samples: usize) -> Result<(bool, String)> {
    let mut rng = Mix(11);
    let mut worst: f64 = 0.0;
    let mut count_ok = true;
    for n in 1..=3 {
        for m in 0..=5 {
            for _ in 0..samples {
                let geom = CellGeometry::standalone(random_simplex(n, &mut rng))?;
                let e = build_element(m, n, &geom)?;
                count_ok &= e.len() == binomial(m + n, n);
                worst = worst.max(e.duality_residual);
            }
        }
    }
    Ok((
        count_ok && worst <= NODAL_DUALITY_TOL,
        format!("max duality residual {worst:.2e}"),
    ))
}

fn plan_forms() -> Result<(bool, String)> {
    let got: Vec<(usize, i32)> = [(3, 2), (4, 2)]
        .iter()
        .map(|&(m, n)| {
            let t = &penalty_plan(m, n).terms[0];
            (t.order, t.exponent)
        })
        .collect();
    Ok((
        got == vec![(0, -5), (1, -5)] && penalty_plan(2, 2).is_empty(),
        format!("(3,2) -> {:?}, (4,2) -> {:?}", got[0], got[1]),
    ))
}

fn moments() -> Result<(bool, String)> {
    let mut rng = Mix(5);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let d = 1 + (rng.next() * 3.0) as usize;
        let verts = random_simplex(d, &mut rng);
        let a: Vec<usize> = (0..=d).map(|_| (rng.next() * 4.0) as usize).collect();
        let exact = barycentric_moment(&a, simplex_measure(&verts)?);
        // λ-monomial integrated through the quadrature rule as an
        // independent route
        let rule = quadrature(d, a.iter().sum());
        let num: f64 = rule
            .points
            .iter()
            .zip(&rule.weights)
            .map(|(l, w)| {
                w * l
                    .iter()
                    .zip(&a)
                    .map(|(li, &k)| li.powi(k as i32))
                    .product::<f64>()
            })
            .sum::<f64>()
            * simplex_measure(&verts)?;
        worst = worst.max((num - exact).abs() / exact.abs());
    }
    Ok((worst <= 1e-12, format!("max relative error {worst:.2e}")))
}

fn system_checks() -> Result<(bool, String)> {
    let disc = Discretization::new(build_box_mesh(2, 4, &[0.0, 0.0], &[1.0, 1.0])?, 3)?;
    let u = harmonic_exp_sin();
    let g = disc.interpolate(&u, 10)?;
    let sys = assemble(&disc, 1.0, None, Some(&g), 10)?;
    let asym = sys.matrix.asymmetry();
    let (a, b) = sys.reduced();
    let (x, rep) = cg_solve(&a, &b, 1e-12, 20 * b.len())?;
    let xd = dense_solve(&a.to_dense(), &b)?;
    let scale = xd.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let diff = x
        .iter()
        .zip(&xd)
        .fold(0.0f64, |s, (p, q)| s.max((p - q).abs()))
        / scale;
    let mut rng = Mix(3);
    let mut sandwich = true;
    for _ in 0..10 {
        let v: Vec<f64> = (0..disc.n_dofs()).map(|_| rng.next() - 0.5).collect();
        let av = sys.form(&v, &v);
        let e2 = norm_breakdown(&disc, &DiscreteFunction { values: v }, None, 6, None)?
            .energy()
            .powi(2);
        sandwich &= (av - e2).abs() <= 1e-10 * av;
    }
    Ok((
        asym <= 1e-12 && rep.converged && diff <= 1e-7 && sandwich,
        format!(
            "asymmetry {asym:.1e}, CG {} its, CG vs dense {diff:.1e}, sandwich {}",
            rep.iterations,
            if sandwich { "ok" } else { "violated" }
        ),
    ))
}

fn continuity() -> Result<(bool, String)> {
    let disc = Discretization::new(build_box_mesh(2, 4, &[0.0, 0.0], &[1.0, 1.0])?, 3)?;
    let ip = disc.interpolate(&harmonic_exp_sin(), 10)?;
    let r = continuity_report(&disc, &ip)?;
    Ok((
        r.interior <= 1e-8,
        format!("max relative jump of shared means {:.2e}", r.interior),
    ))
}

fn polynomial_reproduction() -> Result<(bool, String)> {
    let disc = Discretization::new(build_box_mesh(3, 1, &[0.0; 3], &[1.0; 3])?, 2)?;
    let p = Poly::from_coeffs(3, 2, (0..10).map(|i| 1.0 - 0.2 * i as f64).collect())?;
    let ip = disc.interpolate(&p, 6)?;
    let nb = norm_breakdown(&disc, &ip, Some(&p), 6, None)?;
    let err = nb.seminorm(0);
    Ok((err <= 1e-12, format!("‖p − Π_h p‖_0 = {err:.1e}")))
}

/// Runs every check; each takes well under a second in release builds.
pub fn run_all() -> Vec<Check> {
    vec![
        check("unisolvence m<=5 n<=3", unisolvence(5)),
        check("penalty plan closed form", plan_forms()),
        check("barycentric moments", moments()),
        check("assembled system", system_checks()),
        check("shared DOF continuity", continuity()),
        check("polynomial reproduction", polynomial_reproduction()),
    ]
}
