//! Global DOF numbering, discrete functions and global interpolation.
//!
//! A DOF is shared by every cell containing its home sub-simplex; cell
//! averages are private to their cell. DOFs on boundary sub-simplexes are
//! the constrained ones.

use crate::element::{
    build_mesh_element, enumerate_dofs, mean_of_directional, top_level, CellPoly, DofSpec,
    ElementBasis,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::mesh::{mesh_sizes, Mesh, MeshFrames, MeshSizes};
use crate::poly::{
    factorial, indices_of_order, monomial_index, quadrature, reference_moments, AffineMap,
    MultiIndex, Poly,
};
use std::collections::HashMap;
use std::io::Write;

/// Where a global DOF lives: codim, global sub-simplex index (the cell for
/// codim 0), level and normal-derivative orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DofHome {
    pub codim: usize,
    pub subsimplex: usize,
    pub level: i32,
    pub normal_orders: MultiIndex,
}

#[derive(Clone, Debug)]
pub struct GlobalDofMap {
    pub m: usize,
    pub n: usize,
    pub local_dofs: Vec<DofSpec>,
    /// `cell_dofs[c][i]` is the global id of local DOF `i` on cell `c`.
    pub cell_dofs: Vec<Vec<usize>>,
    pub homes: Vec<DofHome>,
    pub boundary: Vec<bool>,
}

impl GlobalDofMap {
    pub fn n_dofs(&self) -> usize {
        self.homes.len()
    }

    pub fn n_constrained(&self) -> usize {
        self.boundary.iter().filter(|b| **b).count()
    }
}

pub fn build_space(mesh: &Mesh, m: usize) -> GlobalDofMap {
    let n = mesh.dim();
    let local_dofs = enumerate_dofs(m, n);
    // position of each local DOF within its sub-simplex block
    let block_pos: Vec<usize> = local_dofs
        .iter()
        .enumerate()
        .map(|(i, s)| {
            local_dofs[..i]
                .iter()
                .filter(|t| t.codim == s.codim && t.local_subsimplex == s.local_subsimplex)
                .count()
        })
        .collect();
    let mut ids: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut homes = Vec::new();
    let mut boundary = Vec::new();
    let mut cell_dofs = Vec::with_capacity(mesh.num_cells());
    for c in 0..mesh.num_cells() {
        let mut row = Vec::with_capacity(local_dofs.len());
        for (spec, &pos) in local_dofs.iter().zip(&block_pos) {
            let g = if spec.codim == 0 {
                c
            } else {
                mesh.cell_subsimplices(spec.codim, c)[spec.local_subsimplex]
            };
            let id = *ids.entry((spec.codim, g, pos)).or_insert_with(|| {
                homes.push(DofHome {
                    codim: spec.codim,
                    subsimplex: g,
                    level: spec.level,
                    normal_orders: spec.normal_orders.clone(),
                });
                boundary.push(spec.codim > 0 && mesh.table(spec.codim).boundary[g]);
                homes.len() - 1
            });
            row.push(id);
        }
        cell_dofs.push(row);
    }
    GlobalDofMap {
        m,
        n,
        local_dofs,
        cell_dofs,
        homes,
        boundary,
    }
}

/// Free and constrained global ids, each ascending.
pub fn dirichlet_partition(map: &GlobalDofMap) -> (Vec<usize>, Vec<usize>) {
    (0..map.n_dofs()).partition(|&i| !map.boundary[i])
}

/// Global DOF vector of a piecewise polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteFunction {
    pub values: Vec<f64>,
}

impl DiscreteFunction {
    pub fn zeros(n: usize) -> Self {
        DiscreteFunction {
            values: vec![0.0; n],
        }
    }
}

/// Everything derived from a mesh for a fixed `m`.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub m: usize,
    pub mesh: Mesh,
    pub frames: MeshFrames,
    pub sizes: MeshSizes,
    pub space: GlobalDofMap,
    pub elements: Vec<ElementBasis>,
}

impl Discretization {
    pub fn new(mesh: Mesh, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Unsupported("m must be at least 1".into()));
        }
        let frames = MeshFrames::new(&mesh)?;
        let sizes = mesh_sizes(&mesh);
        let space = build_space(&mesh, m);
        let elements = (0..mesh.num_cells())
            .map(|c| build_mesh_element(m, &mesh, &frames, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Discretization {
            m,
            mesh,
            frames,
            sizes,
            space,
            elements,
        })
    }

    pub fn n_dofs(&self) -> usize {
        self.space.n_dofs()
    }

    /// Restriction of `v` to `cell`.
    pub fn local_poly(&self, cell: usize, v: &DiscreteFunction) -> Result<CellPoly> {
        if v.values.len() != self.n_dofs() {
            return Err(Error::LengthMismatch {
                expected: self.n_dofs(),
                got: v.values.len(),
            });
        }
        let vals: Vec<f64> = self.space.cell_dofs[cell]
            .iter()
            .map(|&g| v.values[g])
            .collect();
        self.elements[cell].interpolate_local(&vals)
    }

    /// Point evaluation; picks the first cell containing `x`.
    pub fn eval(&self, v: &DiscreteFunction, x: &[f64]) -> Result<f64> {
        let cell = self
            .locate(x)
            .ok_or_else(|| Error::InvalidMesh(format!("point {x:?} is outside the mesh")))?;
        Ok(self.local_poly(cell, v)?.eval(x))
    }

    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        (0..self.mesh.num_cells()).find(|&c| {
            barycentric(&self.mesh.cell_points(c), x)
                .is_some_and(|l| l.iter().all(|&t| t >= -1e-12))
        })
    }

    /// Canonical interpolant `Π_h v`.
    pub fn interpolate(&self, v: &dyn Field, exactness: usize) -> Result<DiscreteFunction> {
        let n = self.mesh.dim();
        let rules: Vec<_> = (0..=n).map(|d| quadrature(d, exactness)).collect();
        let values = self
            .space
            .homes
            .iter()
            .map(|home| {
                if home.codim == 0 {
                    let pts = self.mesh.cell_points(home.subsimplex);
                    return mean_of_directional(v, &pts, &[], &[], &rules[n]);
                }
                let frame = self.frames.get(home.codim, home.subsimplex);
                let pts = self.mesh.key_points(&frame.key);
                mean_of_directional(
                    v,
                    &pts,
                    &frame.normals,
                    home.normal_orders.exponents(),
                    &rules[n - home.codim],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DiscreteFunction { values })
    }

    /// CSV of `id,codim,vertices,level,orders,boundary,value`.
    pub fn write_dofs_csv<W: Write>(&self, v: &DiscreteFunction, mut w: W) -> Result<()> {
        writeln!(w, "id,codim,vertices,level,orders,boundary,value")?;
        for (i, home) in self.space.homes.iter().enumerate() {
            let verts = if home.codim == 0 {
                self.mesh.cells()[home.subsimplex].clone()
            } else {
                self.mesh.table(home.codim).keys[home.subsimplex]
                    .vertex_ids()
                    .to_vec()
            };
            let join = |v: &[usize]| {
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            writeln!(
                w,
                "{i},{},{},{},{},{},{:.16e}",
                home.codim,
                join(&verts),
                home.level,
                join(home.normal_orders.exponents()),
                self.space.boundary[i] as u8,
                v.values[i]
            )?;
        }
        Ok(())
    }
}

/// Shared-DOF agreement of a discrete function.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityReport {
    /// Largest `|⨍_F ∂^α v|_T − ⨍_F ∂^α v|_T'|` over interior sub-simplexes,
    /// relative to the largest mean of the same order.
    pub interior: f64,
    /// Largest `|⨍_F ∂^α v|_T|` over boundary sub-simplexes, same scaling.
    pub boundary: f64,
}

/// For every sub-simplex `F` of codim `k` and every `|α|` that some level's
/// DOFs control on `F`, compares `⨍_F ∂^α v` across the cells containing
/// `F`. Means are exact (traces integrated with reference moments).
pub fn continuity_report(disc: &Discretization, v: &DiscreteFunction) -> Result<ContinuityReport> {
    let mesh = &disc.mesh;
    let n = mesh.dim();
    let m = disc.m;
    let top = top_level(m, n);
    let locals = (0..mesh.num_cells())
        .map(|c| disc.local_poly(c, v))
        .collect::<Result<Vec<_>>>()?;
    // (order, interior spread, boundary magnitude, overall magnitude)
    let mut stats: Vec<[f64; 3]> = vec![[0.0; 3]; m + 1];
    for k in 1..=n {
        let table = mesh.table(k);
        let orders: Vec<usize> = (0..=top)
            .filter_map(|l| {
                let base = m - (n + 1) * (top - l);
                (k <= n.min(base)).then(|| base - k)
            })
            .collect();
        if orders.is_empty() {
            continue;
        }
        let d = n - k;
        let moments = reference_moments(d, m);
        for g in 0..table.len() {
            let pts = mesh.key_points(&table.keys[g]);
            let face_map = AffineMap::simplex(&pts);
            for &order in &orders {
                for alpha in indices_of_order(n, order) {
                    let means: Vec<f64> = table.incident_cells[g]
                        .iter()
                        .map(|&c| {
                            let p = locals[c].derivative(alpha.exponents());
                            let map = local_map(&face_map, &p.scaling.center, p.scaling.scale);
                            factorial(d) * reference_integral(&p.local.compose(&map), &moments)
                        })
                        .collect();
                    let st = &mut stats[order];
                    for &a in &means {
                        st[2] = st[2].max(a.abs());
                    }
                    if table.boundary[g] {
                        st[1] = st[1].max(means[0].abs());
                    } else {
                        let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
                        let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                        st[0] = st[0].max(hi - lo);
                    }
                }
            }
        }
    }
    let rel = |a: f64, scale: f64| if scale > 0.0 { a / scale } else { a };
    Ok(ContinuityReport {
        interior: stats.iter().map(|s| rel(s[0], s[2])).fold(0.0, f64::max),
        boundary: stats.iter().map(|s| rel(s[1], s[2])).fold(0.0, f64::max),
    })
}

fn reference_integral(p: &Poly, moments: &[f64]) -> f64 {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c * moments[monomial_index(p.exponents(i))])
        .sum()
}

/// `t ↦ (x(t) − center) / s`
pub(crate) fn local_map(face: &AffineMap, center: &[f64], s: f64) -> AffineMap {
    let offset = face
        .offset
        .iter()
        .zip(center)
        .map(|(o, c)| (o - c) / s)
        .collect();
    let linear = face
        .linear
        .iter()
        .map(|row| row.iter().map(|v| v / s).collect())
        .collect();
    AffineMap::new(offset, linear, face.source_dim())
}

/// Barycentric coordinates of `x` in the simplex, `None` if degenerate.
pub(crate) fn barycentric(vertices: &[&[f64]], x: &[f64]) -> Option<Vec<f64>> {
    let n = x.len();
    let v0 = vertices[0];
    let a = nalgebra::DMatrix::from_fn(n, n, |i, j| vertices[j + 1][i] - v0[i]);
    let b = nalgebra::DVector::from_fn(n, |i, _| x[i] - v0[i]);
    let t = a.lu().solve(&b)?;
    let mut l = vec![1.0 - t.sum()];
    l.extend(t.iter());
    Some(l)
}
