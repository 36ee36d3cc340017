use rayon::prelude::*;

use crate::domains::VoxelDomain;
use crate::error::{invalid, Result};

/// Discrete quadratic form `a[u] = Σ h1h2h3 (|X1 u|² + |X2 u|²)` on the occupied
/// cells of a voxel grid, with `u = 0` outside the mask.
///
/// On the cell with center `(x1, x2, ·)`:
///
/// ```text
/// X1 u = D1⁺u + (x2/2) D3⁺u
/// X2 u = D2⁺u − (x1/2) D3⁺u
/// ```
///
/// The sum runs over every cell of the grid padded by one layer, so differences
/// reaching into the mask from outside are counted as well. The matrix is stored
/// as symmetric CSR.
#[derive(Debug, Clone)]
pub struct SparseForm {
    dimension: usize,
    spacing: [f64; 3],
    dofs: Vec<usize>,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

/// One discrete field value `X_a u` at one cell, as up to three `(dof, weight)` pairs.
type StencilRow = Vec<(usize, f64)>;

fn stencil_rows(vox: &VoxelDomain, dof_of: &[usize], c: [i64; 3]) -> [StencilRow; 2] {
    let [h1, h2, h3] = vox.spacing;
    let x1 = vox.origin[0] + (c[0] as f64 + 0.5) * h1;
    let x2 = vox.origin[1] + (c[1] as f64 + 0.5) * h2;
    let dof = |d: [i64; 3]| -> Option<usize> {
        let q = [c[0] + d[0], c[1] + d[1], c[2] + d[2]];
        if vox.is_occupied(q) {
            Some(dof_of[vox.index(q.map(|v| v as usize))])
        } else {
            None
        }
    };
    let here = dof([0, 0, 0]);
    let up = dof([0, 0, 1]);
    let mut rows = [Vec::with_capacity(3), Vec::with_capacity(3)];
    for (a, (shift, twist)) in [([1, 0, 0], 0.5 * x2), ([0, 1, 0], -0.5 * x1)].into_iter().enumerate() {
        let h = if a == 0 { h1 } else { h2 };
        let row = &mut rows[a];
        if let Some(i) = here {
            row.push((i, -1.0 / h - twist / h3));
        }
        if let Some(i) = dof(shift) {
            row.push((i, 1.0 / h));
        }
        if let Some(i) = up {
            row.push((i, twist / h3));
        }
    }
    rows
}

impl SparseForm {
    pub fn assemble(vox: &VoxelDomain) -> Result<Self> {
        if vox.occupied_count() == 0 {
            return invalid("cannot assemble a form on an empty mask");
        }
        let dofs: Vec<usize> = vox.occupied().collect();
        let mut dof_of = vec![usize::MAX; vox.len()];
        for (k, &cell) in dofs.iter().enumerate() {
            dof_of[cell] = k;
        }
        let [n1, n2, n3] = vox.dims.map(|n| n as i64);
        let weight = vox.cell_volume();

        // each padded cell contributes b bᵀ for both of its stencil rows
        let padded: Vec<[i64; 3]> =
            (-1..n1).flat_map(|i| (-1..n2).flat_map(move |j| (-1..n3).map(move |k| [i, j, k]))).collect();
        let mut triplets: Vec<(usize, usize, f64)> = padded
            .par_iter()
            .flat_map_iter(|&c| {
                stencil_rows(vox, &dof_of, c).into_iter().flat_map(move |row| {
                    let outer: Vec<(usize, usize, f64)> =
                        row.iter().flat_map(|&(i, a)| row.iter().map(move |&(j, b)| (i, j, weight * a * b))).collect();
                    outer
                })
            })
            .collect();
        // stable sort keeps the summation order fixed for identical inputs
        triplets.par_sort_by_key(|&(i, j, _)| (i, j));

        let n = dofs.len();
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            if last == Some((i, j)) {
                *values.last_mut().expect("entry exists") += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self { dimension: n, spacing: vox.spacing, dofs, row_ptr, col_idx, values })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    /// Grid cell index of every unknown.
    pub fn dofs(&self) -> &[usize] {
        &self.dofs
    }

    /// `h1 h2 h3`, the mass of one unknown.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored coefficients `(row, col, value)`, both triangles.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dimension).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |p| (i, self.col_idx[p], self.values[p]))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let cols = &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]];
        match cols.binary_search(&j) {
            Ok(p) => self.values[self.row_ptr[i] + p],
            Err(_) => 0.0,
        }
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dimension);
        assert_eq!(y.len(), self.dimension);
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
            *yi = self.col_idx[a..b].iter().zip(&self.values[a..b]).map(|(&j, &v)| v * x[j]).sum();
        });
    }

    /// `a[u] = uᵀ A u`.
    pub fn quadratic_form(&self, u: &[f64]) -> f64 {
        let mut au = vec![0.0; self.dimension];
        self.apply(u, &mut au);
        u.iter().zip(&au).map(|(a, b)| a * b).sum()
    }
}
