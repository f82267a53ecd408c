//! Conforming simplicial meshes with their full sub-simplex lattice.
//!
//! Every sub-simplex is identified mesh-wide by the sorted tuple of its
//! global vertex ids. For each codimension `k = 0..=n` the mesh stores the
//! table of distinct sub-simplexes, their incident cells and a boundary flag,
//! plus the map from each cell's local sub-simplexes to the global tables.

mod frames;
mod generators;

pub use frames::{frame_from_points, normal_frame, MeshFrames, NormalFrame};
pub use generators::{build_box_mesh, build_lshape_mesh};

use crate::error::{Error, Result};
use crate::poly::{diameter, simplex_measure};
use std::collections::HashMap;
use std::io::Write;

/// Sorted, strictly increasing global vertex ids of a sub-simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubSimplexKey(Vec<usize>);

impl SubSimplexKey {
    pub fn new(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        SubSimplexKey(ids)
    }

    pub fn vertex_ids(&self) -> &[usize] {
        &self.0
    }

    /// Dimension of the sub-simplex itself.
    pub fn simplex_dim(&self) -> usize {
        self.0.len() - 1
    }
}

/// All distinct sub-simplexes of one codimension.
#[derive(Clone, Debug)]
pub struct SubSimplexTable {
    pub codim: usize,
    pub keys: Vec<SubSimplexKey>,
    pub incident_cells: Vec<Vec<usize>>,
    pub boundary: Vec<bool>,
    index: HashMap<SubSimplexKey, usize>,
}

impl SubSimplexTable {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn find(&self, key: &SubSimplexKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary.iter().filter(|b| **b).count()
    }
}

/// Local vertex positions of every codim-`k` sub-simplex of an `n`-simplex,
/// in lexicographic order. This order defines local sub-simplex indices.
pub fn local_subsimplices(n: usize, k: usize) -> Vec<Vec<usize>> {
    assert!(k <= n);
    combinations(n + 1, n + 1 - k)
}

fn combinations(total: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(
        start: usize,
        total: usize,
        size: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..total {
            if total - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, total, size, cur, out);
            cur.pop();
        }
    }
    rec(0, total, size, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct Mesh {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    cells: Vec<Vec<usize>>,
    /// `tables[k]` holds the codim-`k` sub-simplexes; `tables[0]` are the cells.
    tables: Vec<SubSimplexTable>,
    /// `cell_subsimplices[k][cell][local]` is a global index into `tables[k]`.
    cell_subsimplices: Vec<Vec<Vec<usize>>>,
}

impl Mesh {
    /// Builds the sub-simplex lattice and validates the cells.
    pub fn new(dim: usize, vertices: Vec<Vec<f64>>, cells: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMesh("dimension must be at least 1".into()));
        }
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidMesh("vertex dimension mismatch".into()));
        }
        let mut sorted_cells = Vec::with_capacity(cells.len());
        for (c, cell) in cells.into_iter().enumerate() {
            let mut cell = cell;
            cell.sort_unstable();
            if cell.len() != dim + 1 || cell.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidMesh(format!(
                    "cell {c} is not an {dim}-simplex"
                )));
            }
            if cell.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidMesh(format!(
                    "cell {c} references a missing vertex"
                )));
            }
            let pts: Vec<&[f64]> = cell.iter().map(|&v| vertices[v].as_slice()).collect();
            simplex_measure(&pts).map_err(|e| Error::InvalidMesh(format!("cell {c}: {e}")))?;
            sorted_cells.push(cell);
        }

        let mut tables = Vec::with_capacity(dim + 1);
        let mut cell_subsimplices = Vec::with_capacity(dim + 1);
        for k in 0..=dim {
            let locals = local_subsimplices(dim, k);
            let mut keys = Vec::new();
            let mut incident: Vec<Vec<usize>> = Vec::new();
            let mut index = HashMap::new();
            let mut per_cell = Vec::with_capacity(sorted_cells.len());
            for (c, cell) in sorted_cells.iter().enumerate() {
                let mut ids = Vec::with_capacity(locals.len());
                for local in &locals {
                    let key = SubSimplexKey(local.iter().map(|&p| cell[p]).collect());
                    let g = *index.entry(key.clone()).or_insert_with(|| {
                        keys.push(key);
                        incident.push(Vec::new());
                        keys.len() - 1
                    });
                    incident[g].push(c);
                    ids.push(g);
                }
                per_cell.push(ids);
            }
            let n = keys.len();
            tables.push(SubSimplexTable {
                codim: k,
                keys,
                incident_cells: incident,
                boundary: vec![false; n],
                index,
            });
            cell_subsimplices.push(per_cell);
        }

        if let Some(faces) = tables.get(1) {
            for (f, cells) in faces.incident_cells.iter().enumerate() {
                if cells.is_empty() || cells.len() > 2 {
                    return Err(Error::InvalidMesh(format!(
                        "face {:?} has {} incident cells",
                        faces.keys[f].0,
                        cells.len()
                    )));
                }
            }
        }

        // a sub-simplex is on the boundary iff it lies in a boundary facet
        let boundary_faces: Vec<SubSimplexKey> = tables[1]
            .keys
            .iter()
            .zip(&tables[1].incident_cells)
            .filter(|(_, c)| c.len() == 1)
            .map(|(k, _)| k.clone())
            .collect();
        for face in &boundary_faces {
            for size in 1..=dim {
                let k = dim + 1 - size;
                for subset in combinations(dim, size) {
                    let key = SubSimplexKey(subset.iter().map(|&p| face.0[p]).collect());
                    let g = tables[k].index[&key];
                    tables[k].boundary[g] = true;
                }
            }
        }

        Ok(Mesh {
            dim,
            vertices,
            cells: sorted_cells,
            tables,
            cell_subsimplices,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// Codim-`k` sub-simplex table (`k = 0` are the cells, `k = n` vertices).
    pub fn table(&self, codim: usize) -> &SubSimplexTable {
        &self.tables[codim]
    }

    pub fn faces(&self) -> &SubSimplexTable {
        &self.tables[1]
    }

    /// Global indices of a cell's codim-`k` sub-simplexes in local order.
    pub fn cell_subsimplices(&self, codim: usize, cell: usize) -> &[usize] {
        &self.cell_subsimplices[codim][cell]
    }

    pub fn cell_points(&self, cell: usize) -> Vec<&[f64]> {
        self.cells[cell]
            .iter()
            .map(|&v| self.vertices[v].as_slice())
            .collect()
    }

    pub fn key_points(&self, key: &SubSimplexKey) -> Vec<&[f64]> {
        key.0.iter().map(|&v| self.vertices[v].as_slice()).collect()
    }

    pub fn find(&self, key: &SubSimplexKey) -> Option<(usize, usize)> {
        let codim = self.dim.checked_sub(key.simplex_dim())?;
        self.tables.get(codim)?.find(key).map(|g| (codim, g))
    }

    /// Plain-text dump: header `n <dim> <#vertices> <#cells>`, one vertex
    /// per line with 17 significant digits, then one cell per line.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "n {} {} {}",
            self.dim,
            self.vertices.len(),
            self.cells.len()
        )?;
        for v in &self.vertices {
            let line: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        for c in &self.cells {
            let line: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Cell diameters `h_T`, face patch diameters `h_F` and the global `h`.
#[derive(Clone, Debug)]
pub struct MeshSizes {
    pub cell: Vec<f64>,
    /// Indexed like `mesh.faces()`; diameter of the union of incident cells.
    pub face: Vec<f64>,
    pub h: f64,
}

pub fn mesh_sizes(mesh: &Mesh) -> MeshSizes {
    let cell: Vec<f64> = (0..mesh.num_cells())
        .map(|c| diameter(&mesh.cell_points(c)))
        .collect();
    let faces = mesh.faces();
    let face = faces
        .incident_cells
        .iter()
        .map(|cells| {
            let mut ids: Vec<usize> = cells.iter().flat_map(|&c| mesh.cells[c].clone()).collect();
            ids.sort_unstable();
            ids.dedup();
            let pts: Vec<&[f64]> = ids.iter().map(|&v| mesh.vertices[v].as_slice()).collect();
            diameter(&pts)
        })
        .collect();
    let h = cell.iter().copied().fold(0.0, f64::max);
    MeshSizes { cell, face, h }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_enumeration() {
        assert_eq!(
            local_subsimplices(2, 1),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(local_subsimplices(2, 2), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(local_subsimplices(3, 0), vec![vec![0, 1, 2, 3]]);
        assert_eq!(local_subsimplices(3, 2).len(), 6);
    }

    #[test]
    fn rejects_degenerate_and_bad_cells() {
        let v = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]];
        assert!(Mesh::new(2, v.clone(), vec![vec![0, 1, 2]]).is_err());
        assert!(Mesh::new(2, v, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn boundary_flags_two_triangles() {
        let v = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ];
        let mesh = Mesh::new(2, v, vec![vec![0, 1, 3], vec![0, 2, 3]]).unwrap();
        assert_eq!(mesh.faces().len(), 5);
        assert_eq!(mesh.faces().boundary_count(), 4);
        let diag = mesh.faces().find(&SubSimplexKey::new(vec![0, 3])).unwrap();
        assert!(!mesh.faces().boundary[diag]);
        assert_eq!(mesh.faces().incident_cells[diag], vec![0, 1]);
        assert_eq!(mesh.table(2).boundary_count(), 4);
    }

    #[test]
    fn dump_format() {
        let mesh = build_box_mesh(1, 2, &[0.0], &[1.0]).unwrap();
        let mut buf = Vec::new();
        mesh.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n 1 3 2");
        assert_eq!(lines[2], "5.0000000000000000e-1");
        assert_eq!(lines[4], "0 1");
    }
}
