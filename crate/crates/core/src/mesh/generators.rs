//! Structured Kuhn triangulations of boxes and of the L-shaped domain.

use super::Mesh;
use crate::error::{Error, Result};

/// Uniform grid of `divisions^n` boxes over `[lo, hi]`, each box split into
/// `n!` Kuhn simplices. In 2-D this is the split along the `(+1,+1)`
/// diagonal.
pub fn build_box_mesh(n: usize, divisions: usize, lo: &[f64], hi: &[f64]) -> Result<Mesh> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidMesh(format!(
            "box meshes need n in 1..=3, got {n}"
        )));
    }
    if divisions == 0 {
        return Err(Error::InvalidMesh("divisions must be at least 1".into()));
    }
    if lo.len() != n || hi.len() != n || lo.iter().zip(hi).any(|(a, b)| !(a < b)) {
        return Err(Error::InvalidMesh(
            "box corners must satisfy lo < hi componentwise".into(),
        ));
    }
    kuhn_grid(n, divisions, lo, hi, |_| true)
}

/// `(−1,1)² \ [0,1)×(−1,0]` meshed as three unit squares with
/// `divisions_per_unit` intervals per unit length.
pub fn build_lshape_mesh(divisions_per_unit: usize) -> Result<Mesh> {
    if divisions_per_unit == 0 {
        return Err(Error::InvalidMesh(
            "divisions_per_unit must be at least 1".into(),
        ));
    }
    let d = divisions_per_unit;
    kuhn_grid(2, 2 * d, &[-1.0, -1.0], &[1.0, 1.0], |b| {
        !(b[0] >= d && b[1] < d)
    })
}

fn kuhn_grid(
    n: usize,
    divisions: usize,
    lo: &[f64],
    hi: &[f64],
    keep_box: impl Fn(&[usize]) -> bool,
) -> Result<Mesh> {
    let per_axis = divisions + 1;
    let total_vertices = per_axis.pow(n as u32);
    let grid_id = |p: &[usize]| p.iter().rev().fold(0, |acc, &i| acc * per_axis + i);

    let perms = permutations(n);
    let mut raw_cells = Vec::new();
    let mut corner = vec![0usize; n];
    for _ in 0..divisions.pow(n as u32) {
        if keep_box(&corner) {
            for perm in &perms {
                let mut p = corner.clone();
                let mut cell = Vec::with_capacity(n + 1);
                cell.push(grid_id(&p));
                for &axis in perm {
                    p[axis] += 1;
                    cell.push(grid_id(&p));
                }
                raw_cells.push(cell);
            }
        }
        for slot in corner.iter_mut() {
            *slot += 1;
            if *slot < divisions {
                break;
            }
            *slot = 0;
        }
    }

    // compact to the vertices actually used, preserving grid order
    let mut used = vec![false; total_vertices];
    for c in &raw_cells {
        for &v in c {
            used[v] = true;
        }
    }
    let mut renumber = vec![usize::MAX; total_vertices];
    let mut vertices = Vec::new();
    for (g, _) in used.iter().enumerate().filter(|(_, u)| **u) {
        renumber[g] = vertices.len();
        let mut rem = g;
        let coords = (0..n)
            .map(|i| {
                let idx = rem % per_axis;
                rem /= per_axis;
                lo[i] + (hi[i] - lo[i]) * idx as f64 / divisions as f64
            })
            .collect();
        vertices.push(coords);
    }
    let cells = raw_cells
        .into_iter()
        .map(|c| c.into_iter().map(|v| renumber[v]).collect())
        .collect();
    Mesh::new(n, vertices, cells)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|r| if r >= first { r + 1 } else { r }));
            out.push(p);
        }
    }
    out
}
