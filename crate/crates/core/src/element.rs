//! The minimal (m, n) nonconforming element: shape space `P_m(T)`, degrees
//! of freedom at levels `−1..=L`, nodal basis and local interpolation.
//!
//! Degrees of freedom on a codim-`k` sub-simplex `F` are means over `F` of
//! mixed derivatives along the global normal frame of `F`, of order
//! `m − k − (n+1)(L − l)` at level `l`, with `L = ⌊m/(n+1)⌋`. When
//! `m ≡ 0 (mod n+1)` a cell average completes the set (level `−1`).
//!
//! Basis polynomials are stored in cell-local coordinates
//! `ξ = (x − centroid) / h_T`, which keeps the generalized Vandermonde matrix
//! well conditioned as the mesh is refined.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::mesh::{frame_from_points, local_subsimplices, Mesh, MeshFrames};
use crate::poly::{
    basis_multiindices, binomial, diameter, directional_symbol, indices_of_order,
    integrate_simplex_exact, monomial_index, quadrature, simplex_measure, AffineMap, MultiIndex,
    Poly, QuadratureRule, SimplexMoments,
};
use nalgebra::DMatrix;

/// Largest condition number accepted for the scaled Vandermonde matrix.
pub const MAX_VANDERMONDE_CONDITION: f64 = 1e12;
/// Tolerance on `max |d_j(p_i) − δ_ij|` after the nodal solve.
pub const NODAL_DUALITY_TOL: f64 = 1e-9;

/// One degree-of-freedom functional.
///
/// `codim == 0` denotes the cell average of level `−1`; otherwise
/// `normal_orders` has one entry per frame direction of the sub-simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DofSpec {
    pub level: i32,
    pub codim: usize,
    pub local_subsimplex: usize,
    pub normal_orders: MultiIndex,
}

impl DofSpec {
    pub fn derivative_order(&self) -> usize {
        self.normal_orders.order()
    }

    pub fn is_cell_average(&self) -> bool {
        self.codim == 0
    }
}

/// `L = ⌊m / (n+1)⌋`
pub fn top_level(m: usize, n: usize) -> usize {
    m / (n + 1)
}

/// Ordered DOF catalogue of the `(m, n)` element: level ascending, then
/// codim descending, then local sub-simplex, then graded-lex orders.
pub fn enumerate_dofs(m: usize, n: usize) -> Vec<DofSpec> {
    assert!(n >= 1, "dimension must be at least 1");
    let big_l = top_level(m, n);
    let mut out = Vec::with_capacity(binomial(m + n, n));
    if m.is_multiple_of(n + 1) {
        out.push(DofSpec {
            level: -1,
            codim: 0,
            local_subsimplex: 0,
            normal_orders: MultiIndex::new(Vec::new()),
        });
    }
    for l in 0..=big_l {
        let base = m as i64 - ((n + 1) * (big_l - l)) as i64;
        if base < 1 {
            continue;
        }
        let kmax = n.min(base as usize);
        for k in (1..=kmax).rev() {
            let order = base as usize - k;
            let count = binomial(n + 1, n + 1 - k);
            let alphas = indices_of_order(k, order);
            for local in 0..count {
                for a in &alphas {
                    out.push(DofSpec {
                        level: l as i32,
                        codim: k,
                        local_subsimplex: local,
                        normal_orders: a.clone(),
                    });
                }
            }
        }
    }
    out
}

/// Affine change of variables `ξ = (x − center) / scale`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalScaling {
    pub center: Vec<f64>,
    pub scale: f64,
}

impl LocalScaling {
    pub fn for_simplex<P: AsRef<[f64]>>(vertices: &[P]) -> Self {
        let n = vertices[0].as_ref().len();
        let mut center = vec![0.0; n];
        for v in vertices {
            for (c, x) in center.iter_mut().zip(v.as_ref()) {
                *c += x;
            }
        }
        let k = vertices.len() as f64;
        center.iter_mut().for_each(|c| *c /= k);
        LocalScaling {
            center,
            scale: diameter(vertices),
        }
    }

    pub fn to_local(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.center)
            .map(|(a, c)| (a - c) / self.scale)
            .collect()
    }

    /// Map `x ↦ ξ`, for composing local polynomials into physical ones.
    pub fn physical_to_local(&self) -> AffineMap {
        let n = self.center.len();
        let offset = self.center.iter().map(|c| -c / self.scale).collect();
        let linear = (0..n)
            .map(|i| {
                let mut row = vec![0.0; n];
                row[i] = 1.0 / self.scale;
                row
            })
            .collect();
        AffineMap::new(offset, linear, n)
    }
}

/// Vertices of one cell together with the normal frames of all its
/// sub-simplexes, `frames[codim][local]`.
#[derive(Clone, Debug)]
pub struct CellGeometry {
    pub vertices: Vec<Vec<f64>>,
    pub frames: Vec<Vec<Vec<Vec<f64>>>>,
}

impl CellGeometry {
    pub fn from_mesh(mesh: &Mesh, frames: &MeshFrames, cell: usize) -> Self {
        CellGeometry {
            vertices: mesh.cell_points(cell).iter().map(|p| p.to_vec()).collect(),
            frames: frames.cell_frames(mesh, cell),
        }
    }

    /// Geometry of a free-standing simplex, treating the given vertex order
    /// as the sorted global order.
    pub fn standalone(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices[0].len();
        if vertices.len() != n + 1 {
            return Err(Error::DegenerateSimplex(format!(
                "{} vertices for an {n}-simplex",
                vertices.len()
            )));
        }
        simplex_measure(&vertices)?;
        let mut frames = vec![vec![Vec::new()]];
        for k in 1..=n {
            let fk = local_subsimplices(n, k)
                .iter()
                .map(|loc| {
                    let pts: Vec<&[f64]> = loc.iter().map(|&i| vertices[i].as_slice()).collect();
                    frame_from_points(&pts)
                })
                .collect::<Result<Vec<_>>>()?;
            frames.push(fk);
        }
        Ok(CellGeometry { vertices, frames })
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn subsimplex_points(&self, codim: usize, local: usize) -> Vec<&[f64]> {
        let n = self.dim();
        local_subsimplices(n, codim)[local]
            .iter()
            .map(|&i| self.vertices[i].as_slice())
            .collect()
    }

    fn frame(&self, codim: usize, local: usize) -> Result<&[Vec<f64>]> {
        self.frames
            .get(codim)
            .and_then(|f| f.get(local))
            .filter(|f| f.len() == codim)
            .map(|f| f.as_slice())
            .ok_or(Error::MissingFrame { codim, local })
    }
}

/// Evaluates one DOF on a polynomial given in physical coordinates.
pub fn evaluate_dof(spec: &DofSpec, p: &Poly, geom: &CellGeometry) -> Result<f64> {
    if spec.is_cell_average() {
        let measure = simplex_measure(&geom.vertices)?;
        return Ok(integrate_simplex_exact(p, &geom.vertices)? / measure);
    }
    let normals = geom.frame(spec.codim, spec.local_subsimplex)?;
    let pts = geom.subsimplex_points(spec.codim, spec.local_subsimplex);
    let q = p.directional_derivative(normals, spec.normal_orders.exponents());
    Ok(integrate_simplex_exact(&q, &pts)? / simplex_measure(&pts)?)
}

/// A polynomial on one cell, stored in that cell's local coordinates.
#[derive(Clone, Debug)]
pub struct CellPoly {
    pub local: Poly,
    pub scaling: LocalScaling,
}

impl CellPoly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.local.eval(&self.scaling.to_local(x))
    }

    /// `∂^α` in physical coordinates, still stored locally.
    pub fn derivative(&self, alpha: &[usize]) -> CellPoly {
        let order: usize = alpha.iter().sum();
        CellPoly {
            local: self
                .local
                .derivative(alpha)
                .scale(self.scaling.scale.powi(-(order as i32))),
            scaling: self.scaling.clone(),
        }
    }

    pub fn partial(&self, x: &[f64], alpha: &[usize]) -> f64 {
        self.derivative(alpha).eval(x)
    }

    pub fn to_physical(&self) -> Poly {
        self.local.compose(&self.scaling.physical_to_local())
    }
}

/// Nodal basis of the `(m, n)` element on one cell.
#[derive(Clone, Debug)]
pub struct ElementBasis {
    pub m: usize,
    pub n: usize,
    pub cell: Option<usize>,
    pub dofs: Vec<DofSpec>,
    /// `basis[i]` satisfies `d_j(basis[i]) = δ_ij`; coefficients in local
    /// coordinates.
    pub basis: Vec<Poly>,
    pub scaling: LocalScaling,
    /// 2-norm condition number of the row-scaled Vandermonde matrix.
    pub vandermonde_condition: f64,
    /// `max |d_j(p_i) − δ_ij|` of the scaled system after the solve.
    pub duality_residual: f64,
}

impl ElementBasis {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis_function(&self, i: usize) -> CellPoly {
        CellPoly {
            local: self.basis[i].clone(),
            scaling: self.scaling.clone(),
        }
    }

    /// Basis polynomials expressed in physical coordinates.
    pub fn physical_basis(&self) -> Vec<Poly> {
        let map = self.scaling.physical_to_local();
        self.basis.iter().map(|p| p.compose(&map)).collect()
    }

    /// `Π_T v = Σ_i p_i · value_i`
    pub fn interpolate_local(&self, dof_values: &[f64]) -> Result<CellPoly> {
        if dof_values.len() != self.basis.len() {
            return Err(Error::LengthMismatch {
                expected: self.basis.len(),
                got: dof_values.len(),
            });
        }
        let mut local = Poly::zero(self.n, self.m);
        for (p, v) in self.basis.iter().zip(dof_values) {
            if *v != 0.0 {
                local.axpy(*v, p);
            }
        }
        Ok(CellPoly {
            local,
            scaling: self.scaling.clone(),
        })
    }
}

/// Solves the generalized Vandermonde system for the nodal basis.
pub fn build_element(m: usize, n: usize, geom: &CellGeometry) -> Result<ElementBasis> {
    if geom.dim() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: geom.dim(),
        });
    }
    let dofs = enumerate_dofs(m, n);
    let monomials = basis_multiindices(n, m);
    let j = dofs.len();
    debug_assert_eq!(j, monomials.len());
    let scaling = LocalScaling::for_simplex(&geom.vertices);
    let local_vertices: Vec<Vec<f64>> = geom.vertices.iter().map(|v| scaling.to_local(v)).collect();

    // mean moments of every sub-simplex carrying DOFs, keyed by (codim, local)
    let mut means: Vec<Vec<Option<Vec<f64>>>> = (0..=n)
        .map(|k| vec![None; binomial(n + 1, n + 1 - k)])
        .collect();
    let mut vander = DMatrix::<f64>::zeros(j, j);
    for (row, spec) in dofs.iter().enumerate() {
        let (k, loc) = (spec.codim, spec.local_subsimplex);
        if means[k][loc].is_none() {
            let pts: Vec<&[f64]> = local_subsimplices(n, k)[loc]
                .iter()
                .map(|&i| local_vertices[i].as_slice())
                .collect();
            let mom = SimplexMoments::new(&pts, m)?;
            means[k][loc] = Some(mom.values.iter().map(|v| v / mom.measure).collect());
        }
        let mean = means[k][loc].as_ref().unwrap();
        let normals = if k == 0 { &[][..] } else { geom.frame(k, loc)? };
        let symbol = directional_symbol(n, normals, spec.normal_orders.exponents());
        for (col, a) in monomials.iter().enumerate() {
            vander[(row, col)] = scaled_dof_of_monomial(&symbol, a.exponents(), mean);
        }
    }

    let sv = vander.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if !(condition <= MAX_VANDERMONDE_CONDITION) {
        return Err(Error::SingularVandermonde { m, n, condition });
    }
    let inverse = vander
        .clone()
        .full_piv_lu()
        .try_inverse()
        .ok_or(Error::SingularVandermonde { m, n, condition })?;
    let residual = (&vander * &inverse - DMatrix::<f64>::identity(j, j)).amax();
    if !(residual <= NODAL_DUALITY_TOL) {
        return Err(Error::NodalDuality { residual });
    }

    // physical DOF j is s^{-|α_j|} times its scaled counterpart
    let basis = (0..j)
        .map(|i| {
            let factor = scaling.scale.powi(dofs[i].derivative_order() as i32);
            let coeffs: Vec<f64> = (0..j).map(|r| inverse[(r, i)] * factor).collect();
            Poly::from_coeffs(n, m, coeffs)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ElementBasis {
        m,
        n,
        cell: None,
        dofs,
        basis,
        scaling,
        vandermonde_condition: condition,
        duality_residual: residual,
    })
}

/// Builds the element of a mesh cell.
pub fn build_mesh_element(
    m: usize,
    mesh: &Mesh,
    frames: &MeshFrames,
    cell: usize,
) -> Result<ElementBasis> {
    let geom = CellGeometry::from_mesh(mesh, frames, cell);
    let mut e = build_element(m, mesh.dim(), &geom)?;
    e.cell = Some(cell);
    Ok(e)
}

/// `Σ_β c_β ⨍ ∂^β ξ^a`, with `mean` the mean moments of the sub-simplex.
fn scaled_dof_of_monomial(symbol: &Poly, a: &[usize], mean: &[f64]) -> f64 {
    let n = a.len();
    let mut reduced = vec![0usize; n];
    let mut total = 0.0;
    for (i, &c) in symbol.coeffs().iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let beta = symbol.exponents(i);
        if beta.iter().zip(a).any(|(b, e)| b > e) {
            continue;
        }
        let mut factor = c;
        for t in 0..n {
            reduced[t] = a[t] - beta[t];
            factor *= (0..beta[t]).map(|s| (a[t] - s) as f64).product::<f64>();
        }
        total += factor * mean[monomial_index(&reduced)];
    }
    total
}

/// DOF values of a smooth function on one cell, each computed by quadrature
/// of the mixed directional derivative assembled from the partials of `v`.
pub fn dof_values_of_function(
    m: usize,
    n: usize,
    geom: &CellGeometry,
    v: &dyn Field,
    exactness: usize,
) -> Result<Vec<f64>> {
    let rules: Vec<QuadratureRule> = (0..=n).map(|d| quadrature(d, exactness)).collect();
    enumerate_dofs(m, n)
        .iter()
        .map(|spec| {
            if spec.is_cell_average() {
                mean_of_directional(v, &geom.vertices, &[], &[], &rules[n])
            } else {
                let normals = geom.frame(spec.codim, spec.local_subsimplex)?;
                let pts = geom.subsimplex_points(spec.codim, spec.local_subsimplex);
                mean_of_directional(
                    v,
                    &pts,
                    normals,
                    spec.normal_orders.exponents(),
                    &rules[n - spec.codim],
                )
            }
        })
        .collect()
}

/// `⨍_S ∂^{|α|} v / ∂d_1^{α_1} ⋯ ∂d_k^{α_k}` by quadrature.
pub(crate) fn mean_of_directional<P: AsRef<[f64]>>(
    v: &dyn Field,
    points: &[P],
    directions: &[Vec<f64>],
    orders: &[usize],
    rule: &QuadratureRule,
) -> Result<f64> {
    let n = v.dim();
    let symbol = directional_symbol(n, directions, orders);
    let terms: Vec<(f64, &[usize])> = symbol
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(i, c)| (*c, symbol.exponents(i)))
        .collect();
    let mut sum = 0.0;
    for (x, w) in rule.physical_points(points).iter().zip(&rule.weights) {
        let val: f64 = terms.iter().map(|(c, beta)| c * v.partial(x, beta)).sum();
        if !val.is_finite() {
            return Err(Error::NonFinite {
                what: "field derivative".into(),
                point: x.clone(),
            });
        }
        sum += w * val;
    }
    Ok(sum)
}
