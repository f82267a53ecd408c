//! One orthonormal normal frame per global sub-simplex.
//!
//! The frame depends only on the vertex coordinates of the sorted key: the
//! edge vectors from the lowest-id vertex are extended by canonical axes
//! (skipping those that drop the rank), orthonormalized by Gram–Schmidt with
//! reorthogonalization, and the trailing `k` vectors span the normal space.

use super::{Mesh, SubSimplexKey};
use crate::error::{Error, Result};
use crate::poly::dot;

#[derive(Clone, Debug, PartialEq)]
pub struct NormalFrame {
    pub key: SubSimplexKey,
    pub normals: Vec<Vec<f64>>,
}

impl NormalFrame {
    pub fn codim(&self) -> usize {
        self.normals.len()
    }
}

const AXIS_RANK_TOL: f64 = 1e-8;
const EDGE_RANK_TOL: f64 = 1e-10;

/// Orthonormal basis of the normal space of the simplex spanned by `points`
/// (ordered as in the sorted key).
pub fn frame_from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Vec<Vec<f64>>> {
    let n = points[0].as_ref().len();
    let s = points.len() - 1;
    if s > n {
        return Err(Error::DegenerateSimplex(format!("{s}-simplex in R^{n}")));
    }
    let p0 = points[0].as_ref();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    for p in &points[1..] {
        let e: Vec<f64> = p.as_ref().iter().zip(p0).map(|(a, b)| a - b).collect();
        let norm = dot(&e, &e).sqrt();
        match orthogonalize(&e, &basis) {
            Some((v, r)) if r > EDGE_RANK_TOL * norm => basis.push(v),
            _ => {
                return Err(Error::DegenerateSimplex(format!(
                    "edge vectors of {s}-simplex are dependent"
                )))
            }
        }
    }
    for axis in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = vec![0.0; n];
        e[axis] = 1.0;
        if let Some((v, r)) = orthogonalize(&e, &basis) {
            if r > AXIS_RANK_TOL {
                basis.push(v);
            }
        }
    }
    debug_assert_eq!(basis.len(), n);
    Ok(basis.split_off(s))
}

/// Two passes of modified Gram–Schmidt; returns the normalized residual and
/// the residual norm.
fn orthogonalize(v: &[f64], basis: &[Vec<f64>]) -> Option<(Vec<f64>, f64)> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let c = dot(&w, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
    }
    let r = dot(&w, &w).sqrt();
    if r == 0.0 {
        return None;
    }
    Some((w.iter().map(|x| x / r).collect(), r))
}

pub fn normal_frame(mesh: &Mesh, key: &SubSimplexKey) -> Result<NormalFrame> {
    if mesh.find(key).is_none() {
        return Err(Error::UnknownSubSimplex(key.vertex_ids().to_vec()));
    }
    let normals = frame_from_points(&mesh.key_points(key))?;
    Ok(NormalFrame {
        key: key.clone(),
        normals,
    })
}

/// Frames of every sub-simplex of codim `1..=n`, indexed like the mesh tables.
#[derive(Clone, Debug)]
pub struct MeshFrames {
    frames: Vec<Vec<NormalFrame>>,
}

impl MeshFrames {
    pub fn new(mesh: &Mesh) -> Result<Self> {
        let mut frames = vec![Vec::new()];
        for k in 1..=mesh.dim() {
            let table = mesh.table(k);
            let fk = table
                .keys
                .iter()
                .map(|key| {
                    Ok(NormalFrame {
                        key: key.clone(),
                        normals: frame_from_points(&mesh.key_points(key))?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            frames.push(fk);
        }
        Ok(MeshFrames { frames })
    }

    pub fn get(&self, codim: usize, global: usize) -> &NormalFrame {
        &self.frames[codim][global]
    }

    /// Frames of one cell's sub-simplexes, `[codim][local]`; codim 0 is empty.
    pub fn cell_frames(&self, mesh: &Mesh, cell: usize) -> Vec<Vec<Vec<Vec<f64>>>> {
        let mut out = vec![vec![Vec::new()]];
        for k in 1..=mesh.dim() {
            out.push(
                mesh.cell_subsimplices(k, cell)
                    .iter()
                    .map(|&g| self.frames[k][g].normals.clone())
                    .collect(),
            );
        }
        out
    }
}
