//! Interior-penalty bilinear form, load vector, Dirichlet elimination and the
//! mesh-dependent norms.
//!
//! Matrix entries are exact: the volume term integrates constants (all `m`-th
//! derivatives of a degree-`m` polynomial) and face terms integrate traces
//! on the reference face with closed-form moments. Load vectors and error
//! norms use quadrature.

use crate::element::top_level;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::SparseSym;
use crate::poly::{
    factorial, indices_of_order, quadrature, reference_moments, simplex_measure, AffineMap,
    MultiIndex, Poly, QuadratureRule,
};
use crate::space::{dirichlet_partition, local_map, DiscreteFunction, Discretization};
use nalgebra::DMatrix;
use std::collections::BTreeMap;

/// Jump penalty on derivatives of one order.
#[derive(Clone, Debug, PartialEq)]
pub struct PenaltyTerm {
    pub level: usize,
    pub order: usize,
    /// Exponent of `h_F` in the face weight.
    pub exponent: i32,
    pub betas: Vec<MultiIndex>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PenaltyPlan {
    pub m: usize,
    pub n: usize,
    pub terms: Vec<PenaltyTerm>,
}

impl PenaltyPlan {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// For `l = 1..=L`: order `m − (n+1)(L−l+1)`, exponent `1 − 2(n+1)(L−l+1)`.
pub fn penalty_plan(m: usize, n: usize) -> PenaltyPlan {
    let top = top_level(m, n);
    let terms = (1..=top)
        .map(|l| {
            let gap = (n + 1) * (top - l + 1);
            let order = m - gap;
            PenaltyTerm {
                level: l,
                order,
                exponent: 1 - 2 * gap as i32,
                betas: indices_of_order(n, order),
            }
        })
        .collect();
    PenaltyPlan { m, n, terms }
}

/// Full (unreduced) system plus what is needed to eliminate constrained DOFs.
#[derive(Clone, Debug)]
pub struct AssembledSystem {
    pub matrix: SparseSym,
    /// `(f, p_i)` without any lifting.
    pub load: Vec<f64>,
    /// Right-hand side for the free DOFs after lifting, indexed globally;
    /// constrained entries are zero.
    pub rhs: Vec<f64>,
    pub dirichlet: BTreeMap<usize, f64>,
    pub eta: f64,
    pub free: Vec<usize>,
}

impl AssembledSystem {
    /// Free-free block and its right-hand side.
    pub fn reduced(&self) -> (SparseSym, Vec<f64>) {
        (
            self.matrix.submatrix(&self.free),
            self.free.iter().map(|&i| self.rhs[i]).collect(),
        )
    }

    /// Combines a reduced solution with the Dirichlet values.
    pub fn expand(&self, free_values: &[f64]) -> Result<DiscreteFunction> {
        if free_values.len() != self.free.len() {
            return Err(Error::LengthMismatch {
                expected: self.free.len(),
                got: free_values.len(),
            });
        }
        let mut values = vec![0.0; self.matrix.dim()];
        for (&i, v) in self.free.iter().zip(free_values) {
            values[i] = *v;
        }
        for (&i, v) in &self.dirichlet {
            values[i] = *v;
        }
        Ok(DiscreteFunction { values })
    }

    /// `vᵀ A w` on full vectors.
    pub fn form(&self, v: &[f64], w: &[f64]) -> f64 {
        self.matrix.mul(w).iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

/// Right-hand side callback.
pub type Source<'a> = &'a (dyn Fn(&[f64]) -> f64 + Sync);

/// Assembles `a_h` with penalty parameter `eta`.
///
/// Constrained DOFs take their values from `dirichlet` (zero when `None`);
/// boundary faces penalize the trace of `u_h − g` with `g` the full data
/// function, free DOFs included.
pub fn assemble(
    disc: &Discretization,
    eta: f64,
    f: Option<Source>,
    dirichlet: Option<&DiscreteFunction>,
    exactness: usize,
) -> Result<AssembledSystem> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidPenalty(eta));
    }
    let n_dofs = disc.n_dofs();
    if let Some(g) = dirichlet {
        if g.values.len() != n_dofs {
            return Err(Error::LengthMismatch {
                expected: n_dofs,
                got: g.values.len(),
            });
        }
    }
    let plan = penalty_plan(disc.m, disc.mesh.dim());
    let mut triplets = Vec::new();
    for c in 0..disc.mesh.num_cells() {
        let k = volume_matrix(disc, c)?;
        scatter(&mut triplets, &disc.space.cell_dofs[c], &k);
    }
    let (free, constrained) = dirichlet_partition(&disc.space);
    let g: Vec<f64> = match dirichlet {
        Some(g) => {
            let mut v = vec![0.0; n_dofs];
            for &i in &constrained {
                v[i] = g.values[i];
            }
            v
        }
        None => vec![0.0; n_dofs],
    };
    // boundary faces penalize the trace of u_h minus the full data function,
    // whose trace also involves free DOFs of the boundary cells
    let data: Vec<f64> = dirichlet.map_or_else(|| vec![0.0; n_dofs], |d| d.values.clone());
    let mut boundary_shift = vec![0.0; n_dofs];
    if !plan.is_empty() {
        let faces = disc.mesh.faces();
        for face in 0..faces.len() {
            let (dofs, m) = face_matrix(disc, &plan, face, eta)?;
            if faces.boundary[face] {
                for (a, &i) in dofs.iter().enumerate() {
                    boundary_shift[i] += dofs
                        .iter()
                        .enumerate()
                        .map(|(b, &j)| m[(a, b)] * data[j])
                        .sum::<f64>();
                }
            }
            scatter(&mut triplets, &dofs, &m);
        }
    }
    let matrix = SparseSym::from_triplets(n_dofs, triplets)?;
    let load = match f {
        Some(f) => load_vector(disc, f, exactness)?,
        None => vec![0.0; n_dofs],
    };
    let ag = matrix.mul(&g);
    let mut rhs = vec![0.0; n_dofs];
    for &i in &free {
        rhs[i] = load[i] - ag[i] + boundary_shift[i];
    }
    let dirichlet = constrained.iter().map(|&i| (i, g[i])).collect();
    Ok(AssembledSystem {
        matrix,
        load,
        rhs,
        dirichlet,
        eta,
        free,
    })
}

fn scatter(triplets: &mut Vec<(usize, usize, f64)>, dofs: &[usize], m: &DMatrix<f64>) {
    for (a, &i) in dofs.iter().enumerate() {
        for (b, &j) in dofs.iter().enumerate() {
            triplets.push((i, j, m[(a, b)]));
        }
    }
}

/// `∫_T Σ_{|α|=m} ∂^α p_i ∂^α p_j`
pub fn volume_matrix(disc: &Discretization, cell: usize) -> Result<DMatrix<f64>> {
    let e = &disc.elements[cell];
    let measure = simplex_measure(&disc.mesh.cell_points(cell))?;
    let alphas = indices_of_order(e.n, e.m);
    // m-th derivatives of degree-m polynomials are constants: α! · coeff
    let d = DMatrix::from_fn(alphas.len(), e.len(), |a, i| {
        alphas[a].factorial() * e.basis[i].coeff(alphas[a].exponents())
    });
    let scale = measure * e.scaling.scale.powi(-2 * e.m as i32);
    Ok(d.transpose() * d * scale)
}

/// Penalty matrix of one face over the union of its cells' DOFs (duplicates
/// allowed, `scatter` sums them), weighted by `eta`.
pub fn face_matrix(
    disc: &Discretization,
    plan: &PenaltyPlan,
    face: usize,
    eta: f64,
) -> Result<(Vec<usize>, DMatrix<f64>)> {
    let mesh = &disc.mesh;
    let n = mesh.dim();
    let table = mesh.faces();
    let cells = &table.incident_cells[face];
    let pts = mesh.key_points(&table.keys[face]);
    let measure = simplex_measure(&pts)?;
    let face_map = AffineMap::simplex(&pts);
    let moments = reference_moments(n - 1, 2 * disc.m);
    let ref_factor = measure * factorial(n - 1);
    let mut dofs = Vec::new();
    for &c in cells {
        dofs.extend_from_slice(&disc.space.cell_dofs[c]);
    }
    let mut out = DMatrix::zeros(dofs.len(), dofs.len());
    let h_f = disc.sizes.face[face];
    for term in &plan.terms {
        let weight = eta * h_f.powi(term.exponent) * ref_factor;
        let trace_degree = disc.m - term.order;
        let count = crate::poly::monomial_count(n - 1, trace_degree);
        let gram = DMatrix::from_fn(count, count, |a, b| {
            let ea = Poly::zero(n - 1, trace_degree).exponents(a);
            let eb = Poly::zero(n - 1, trace_degree).exponents(b);
            let sum: Vec<usize> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            moments[crate::poly::monomial_index(&sum)]
        });
        for beta in &term.betas {
            // columns: signed traces of ∂^β p_i, one per local DOF of each cell
            let mut traces = DMatrix::zeros(count, dofs.len());
            let mut col = 0;
            for (side, &c) in cells.iter().enumerate() {
                let e = &disc.elements[c];
                let sign = if side == 0 { 1.0 } else { -1.0 };
                let s = e.scaling.scale;
                let local_map = local_map(&face_map, &e.scaling.center, s);
                let factor = sign * s.powi(-(term.order as i32));
                for p in &e.basis {
                    let tr = p.derivative(beta.exponents()).compose(&local_map);
                    for (r, v) in tr.coeffs().iter().enumerate().take(count) {
                        traces[(r, col)] = factor * v;
                    }
                    col += 1;
                }
            }
            out += traces.transpose() * &gram * &traces * weight;
        }
    }
    Ok((dofs, out))
}

/// `(f, p_i)` by cellwise quadrature.
pub fn load_vector(disc: &Discretization, f: Source, exactness: usize) -> Result<Vec<f64>> {
    let rule = quadrature(disc.mesh.dim(), exactness);
    let mut load = vec![0.0; disc.n_dofs()];
    for c in 0..disc.mesh.num_cells() {
        let pts = disc.mesh.cell_points(c);
        let measure = simplex_measure(&pts)?;
        let e = &disc.elements[c];
        for (x, w) in rule.physical_points(&pts).iter().zip(&rule.weights) {
            let fx = f(x);
            if !fx.is_finite() {
                return Err(Error::NonFinite {
                    what: "source".into(),
                    point: x.clone(),
                });
            }
            let xi = e.scaling.to_local(x);
            for (p, &g) in e.basis.iter().zip(&disc.space.cell_dofs[c]) {
                load[g] += measure * w * fx * p.eval(&xi);
            }
        }
    }
    Ok(load)
}

/// Squared broken seminorms `|v|_{k,h}²` for `k = 0..=m` and the penalty
/// part `Σ_l Σ_F h_F^{exp} Σ_β ‖[∂^β v]‖²_F`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormBreakdown {
    pub seminorms_sq: Vec<f64>,
    pub penalty_sq: f64,
}

impl NormBreakdown {
    pub fn seminorm(&self, k: usize) -> f64 {
        self.seminorms_sq[k].sqrt()
    }

    /// `‖v‖_h`
    pub fn energy(&self) -> f64 {
        (self.seminorms_sq.last().copied().unwrap_or(0.0) + self.penalty_sq).sqrt()
    }
}

/// How many dyadic refinements toward a singular point are applied to the
/// cells touching it.
pub const SINGULAR_REFINEMENTS: usize = 4;

/// Norms of `u − v_h` (or of `v_h` when `exact` is `None`) by quadrature.
///
/// Cells with a vertex at `singular` are integrated on a dyadic subdivision
/// graded toward that vertex.
pub fn norm_breakdown(
    disc: &Discretization,
    v: &DiscreteFunction,
    exact: Option<&dyn Field>,
    exactness: usize,
    singular: Option<&[f64]>,
) -> Result<NormBreakdown> {
    let mesh = &disc.mesh;
    let n = mesh.dim();
    let m = disc.m;
    let rule = quadrature(n, exactness);
    let by_order: Vec<Vec<MultiIndex>> = (0..=m).map(|k| indices_of_order(n, k)).collect();
    let mut seminorms_sq = vec![0.0; m + 1];
    for c in 0..mesh.num_cells() {
        let local = disc.local_poly(c, v)?;
        let derivs: Vec<Vec<Poly>> = by_order
            .iter()
            .map(|alphas| {
                alphas
                    .iter()
                    .map(|a| local.derivative(a.exponents()).local)
                    .collect()
            })
            .collect();
        let scaling = &local.scaling;
        let pts: Vec<Vec<f64>> = mesh.cell_points(c).iter().map(|p| p.to_vec()).collect();
        let mut integrand = |x: &[f64]| -> Result<Vec<f64>> {
            let xi = scaling.to_local(x);
            let mut out = vec![0.0; m + 1];
            for k in 0..=m {
                for (a, p) in by_order[k].iter().zip(&derivs[k]) {
                    let mut val = -p.eval(&xi);
                    if let Some(u) = exact {
                        val += u.partial(x, a.exponents());
                    }
                    if !val.is_finite() {
                        return Err(Error::NonFinite {
                            what: format!("error integrand ∂^{a}"),
                            point: x.to_vec(),
                        });
                    }
                    out[k] += val * val;
                }
            }
            Ok(out)
        };
        let levels = match singular {
            Some(s) if pts.iter().any(|p| same_point(p, s)) => SINGULAR_REFINEMENTS,
            _ => 0,
        };
        let sums = integrate_graded(&pts, singular, levels, &rule, &mut integrand)?;
        for k in 0..=m {
            seminorms_sq[k] += sums[k];
        }
    }
    let penalty_sq = penalty_part(disc, v, exact, exactness)?;
    Ok(NormBreakdown {
        seminorms_sq,
        penalty_sq,
    })
}

/// `‖u − v_h‖_h` (or `‖v_h‖_h`).
pub fn energy_norm(
    disc: &Discretization,
    v: &DiscreteFunction,
    exact: Option<&dyn Field>,
) -> Result<f64> {
    Ok(norm_breakdown(disc, v, exact, 2 * disc.m + 4, None)?.energy())
}

fn same_point(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-14)
}

/// Integrates a vector-valued integrand over a simplex, refining `levels`
/// times toward `toward` (2D red refinement, 1D bisection).
fn integrate_graded<F>(
    vertices: &[Vec<f64>],
    toward: Option<&[f64]>,
    levels: usize,
    rule: &QuadratureRule,
    f: &mut F,
) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let n = vertices[0].len();
    let touches = toward.is_some_and(|s| vertices.iter().any(|p| same_point(p, s)));
    if levels == 0 || !touches || n > 2 {
        let measure = simplex_measure(vertices)?;
        let mut acc: Vec<f64> = Vec::new();
        for (x, w) in rule.physical_points(vertices).iter().zip(&rule.weights) {
            let vals = f(x)?;
            if acc.is_empty() {
                acc = vec![0.0; vals.len()];
            }
            for (a, v) in acc.iter_mut().zip(vals) {
                *a += measure * w * v;
            }
        }
        return Ok(acc);
    }
    let mid = |a: &[f64], b: &[f64]| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
    };
    let children: Vec<Vec<Vec<f64>>> = if n == 1 {
        let c = mid(&vertices[0], &vertices[1]);
        vec![
            vec![vertices[0].clone(), c.clone()],
            vec![c, vertices[1].clone()],
        ]
    } else {
        let (a, b, c) = (&vertices[0], &vertices[1], &vertices[2]);
        let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
        vec![
            vec![a.clone(), ab.clone(), ca.clone()],
            vec![ab.clone(), b.clone(), bc.clone()],
            vec![ca.clone(), bc.clone(), c.clone()],
            vec![ab, bc, ca],
        ]
    };
    let mut acc: Vec<f64> = Vec::new();
    for child in &children {
        let vals = integrate_graded(child, toward, levels - 1, rule, f)?;
        if acc.is_empty() {
            acc = vec![0.0; vals.len()];
        }
        for (a, v) in acc.iter_mut().zip(vals) {
            *a += v;
        }
    }
    Ok(acc)
}

/// `Σ_l Σ_F h_F^{exp} Σ_β ‖[∂^β (u − v_h)]‖²_F` by face quadrature.
fn penalty_part(
    disc: &Discretization,
    v: &DiscreteFunction,
    exact: Option<&dyn Field>,
    exactness: usize,
) -> Result<f64> {
    let mesh = &disc.mesh;
    let n = mesh.dim();
    let plan = penalty_plan(disc.m, n);
    if plan.is_empty() {
        return Ok(0.0);
    }
    let rule = quadrature(n - 1, exactness);
    let faces = mesh.faces();
    let locals = (0..mesh.num_cells())
        .map(|c| disc.local_poly(c, v))
        .collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for face in 0..faces.len() {
        let pts = mesh.key_points(&faces.keys[face]);
        let measure = simplex_measure(&pts)?;
        let cells = &faces.incident_cells[face];
        let boundary = faces.boundary[face];
        for term in &plan.terms {
            let weight = disc.sizes.face[face].powi(term.exponent) * measure;
            for beta in &term.betas {
                let sides: Vec<_> = cells
                    .iter()
                    .map(|&c| locals[c].derivative(beta.exponents()))
                    .collect();
                for (x, w) in rule.physical_points(&pts).iter().zip(&rule.weights) {
                    let jump = if boundary {
                        let uh = sides[0].eval(x);
                        exact.map_or(0.0, |u| u.partial(x, beta.exponents())) - uh
                    } else {
                        // the jump of a smooth u vanishes
                        sides[0].eval(x) - sides[1].eval(x)
                    };
                    if !jump.is_finite() {
                        return Err(Error::NonFinite {
                            what: "face jump".into(),
                            point: x.clone(),
                        });
                    }
                    total += weight * w * jump * jump;
                }
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cg_solve, dense_solve};
    use crate::mesh::build_box_mesh;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn square(d: usize, m: usize) -> Discretization {
        Discretization::new(build_box_mesh(2, d, &[0.0, 0.0], &[1.0, 1.0]).unwrap(), m).unwrap()
    }

    #[test]
    fn plan_closed_forms() {
        let p = penalty_plan(3, 2);
        assert_eq!(p.terms.len(), 1);
        assert_eq!((p.terms[0].order, p.terms[0].exponent), (0, -5));
        // the general closed form gives −5 here, not the −7 quoted for m = 4
        let p = penalty_plan(4, 2);
        assert_eq!((p.terms[0].order, p.terms[0].exponent), (1, -5));
        assert_eq!(p.terms[0].betas.len(), 2);
        assert!(penalty_plan(2, 2).is_empty());
        assert!(penalty_plan(1, 3).is_empty());
        let p = penalty_plan(7, 2);
        assert_eq!(
            p.terms
                .iter()
                .map(|t| (t.order, t.exponent))
                .collect::<Vec<_>>(),
            vec![(1, -11), (4, -5)]
        );
        let p = penalty_plan(2, 1);
        assert_eq!(
            p.terms
                .iter()
                .map(|t| (t.order, t.exponent))
                .collect::<Vec<_>>(),
            vec![(0, -3)]
        );
    }

    #[test]
    fn crouzeix_raviart_two_triangles() {
        let disc = square(1, 1);
        let sys = assemble(&disc, 1.0, None, None, 6).unwrap();
        assert_eq!(sys.matrix.dim(), 5);
        // hand assembly: K_ij = 4|T| ∇λ_i·∇λ_j with CR basis 1 − 2λ_opposite
        let mut expect = DMatrix::<f64>::zeros(5, 5);
        let mesh = &disc.mesh;
        for c in 0..2 {
            let p = mesh.cell_points(c);
            let area = 0.5;
            let grads: Vec<[f64; 2]> = (0..3)
                .map(|i| {
                    let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
                    // ∇λ_i is perpendicular to the opposite edge
                    let s =
                        (a[0] - p[i][0]) * (b[1] - p[i][1]) - (a[1] - p[i][1]) * (b[0] - p[i][0]);
                    [(a[1] - b[1]) / s, (b[0] - a[0]) / s]
                })
                .collect();
            for i in 0..3 {
                for j in 0..3 {
                    let ei = opposite_edge(mesh, c, i);
                    let ej = opposite_edge(mesh, c, j);
                    expect[(ei, ej)] +=
                        4.0 * area * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
                }
            }
        }
        for i in 0..5 {
            for j in 0..5 {
                assert!(
                    (sys.matrix.get(i, j) - expect[(i, j)]).abs() < 1e-12,
                    "{i},{j}"
                );
            }
        }
    }

    fn opposite_edge(mesh: &crate::mesh::Mesh, cell: usize, local_vertex: usize) -> usize {
        let mut ids = mesh.cells()[cell].clone();
        ids.remove(local_vertex);
        let key = crate::mesh::SubSimplexKey::new(ids);
        mesh.faces().find(&key).unwrap()
    }

    #[test]
    fn symmetric_and_rejects_eta() {
        let disc = square(2, 3);
        assert!(assemble(&disc, 0.0, None, None, 10).is_err());
        assert!(assemble(&disc, -1.0, None, None, 10).is_err());
        let sys = assemble(&disc, 1.0, None, None, 10).unwrap();
        assert!(sys.matrix.asymmetry() <= 1e-12);
        assert!(sys.rhs.iter().all(|v| *v == 0.0));
        // constants: no volume term and no interior jumps; only the boundary
        // traces remain
        let one = disc.interpolate(&Poly::constant(2, 1.0), 10).unwrap();
        let a = sys.form(&one.values, &one.values);
        let faces = disc.mesh.faces();
        let boundary: f64 = (0..faces.len())
            .filter(|&f| faces.boundary[f])
            .map(|f| {
                disc.sizes.face[f].powi(-5)
                    * simplex_measure(&disc.mesh.key_points(&faces.keys[f])).unwrap()
            })
            .sum();
        assert!((a - boundary).abs() <= 1e-10 * boundary);
    }

    #[test]
    fn sandwich_and_penalty_scaling() {
        let disc = square(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for eta in [0.5, 1.0, 3.0] {
            let sys = assemble(&disc, eta, None, None, 10).unwrap();
            for _ in 0..10 {
                let v: Vec<f64> = (0..disc.n_dofs())
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect();
                let a = sys.form(&v, &v);
                let nb = norm_breakdown(
                    &disc,
                    &DiscreteFunction { values: v.clone() },
                    None,
                    6,
                    None,
                )
                .unwrap();
                let expect = nb.seminorms_sq[3] + eta * nb.penalty_sq;
                assert!((a - expect).abs() <= 1e-10 * a, "{a} vs {expect}");
                let e2 = nb.energy().powi(2);
                assert!(eta.min(1.0) * e2 <= a * (1.0 + 1e-10));
                assert!(a <= eta.max(1.0) * e2 * (1.0 + 1e-10));
            }
        }
    }

    #[test]
    fn galerkin_orthogonality_and_solver_agreement() {
        let disc = square(4, 2);
        let u = crate::solutions::manufactured_poly_trig(2, 2).unwrap();
        let f = |x: &[f64]| u.source(x, 2);
        let sys = assemble(&disc, 1.0, Some(&f), None, 8).unwrap();
        let (a, b) = sys.reduced();
        let (x, rep) = cg_solve(&a, &b, 1e-12, 20 * b.len()).unwrap();
        assert!(rep.converged);
        let xd = dense_solve(&a.to_dense(), &b).unwrap();
        let scale = xd.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for (p, q) in x.iter().zip(&xd) {
            assert!((p - q).abs() <= 1e-8 * scale);
        }
        let uh = sys.expand(&x).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let mut v = vec![0.0; disc.n_dofs()];
            for &i in &sys.free {
                v[i] = rng.gen_range(-1.0..1.0);
            }
            let lhs = sys.form(&v, &uh.values);
            let rhs: f64 = v.iter().zip(&sys.load).map(|(a, b)| a * b).sum();
            assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn global_polynomial_has_no_jumps() {
        let disc = square(2, 3);
        let p = Poly::from_coeffs(2, 3, (0..10).map(|i| (i as f64).sin()).collect()).unwrap();
        let ip = disc.interpolate(&p, 10).unwrap();
        let nb = norm_breakdown(&disc, &ip, Some(&p), 10, None).unwrap();
        // boundary faces see u − u_h, interior faces the jump of u_h
        assert!(nb.penalty_sq < 1e-20);
        assert!(nb.seminorms_sq.iter().all(|v| *v < 1e-20));
        let nb = norm_breakdown(&disc, &ip, None, 10, None).unwrap();
        let sys = assemble(&disc, 1.0, None, None, 10).unwrap();
        // interior faces only contribute through boundary traces of p
        let full = sys.form(&ip.values, &ip.values);
        assert!((full - nb.seminorms_sq[3] - nb.penalty_sq).abs() < 1e-9 * full);
    }

    #[test]
    fn one_dimensional_penalty() {
        let disc = Discretization::new(build_box_mesh(1, 4, &[0.0], &[1.0]).unwrap(), 2).unwrap();
        let sys = assemble(&disc, 2.0, None, None, 8).unwrap();
        assert!(sys.matrix.asymmetry() < 1e-12);
        let (a, _) = sys.reduced();
        assert!(dense_solve(&a.to_dense(), &vec![1.0; a.dim()]).is_ok());
    }
}
