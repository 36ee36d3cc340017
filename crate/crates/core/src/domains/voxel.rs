use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hgeom::GroupPoint;

use super::DomainSpec;

/// Occupancy grid of cell centers; cell `(i, j, k)` has linear index `(i·n2 + j)·n3 + k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoxelDomain {
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    pub dims: [usize; 3],
    pub mask: Vec<bool>,
}

impl VoxelDomain {
    /// An all-empty grid.
    pub fn empty(origin: [f64; 3], spacing: [f64; 3], dims: [usize; 3]) -> Self {
        Self { origin, spacing, dims, mask: vec![false; dims[0] * dims[1] * dims[2]] }
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied_count() == 0
    }

    pub fn index(&self, c: [usize; 3]) -> usize {
        (c[0] * self.dims[1] + c[1]) * self.dims[2] + c[2]
    }

    pub fn cell(&self, index: usize) -> [usize; 3] {
        let k = index % self.dims[2];
        let ij = index / self.dims[2];
        [ij / self.dims[1], ij % self.dims[1], k]
    }

    pub fn center(&self, c: [usize; 3]) -> GroupPoint {
        GroupPoint::new(
            self.origin[0] + (c[0] as f64 + 0.5) * self.spacing[0],
            self.origin[1] + (c[1] as f64 + 0.5) * self.spacing[1],
            self.origin[2] + (c[2] as f64 + 0.5) * self.spacing[2],
        )
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn occupied_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Linear indices of occupied cells in ascending order.
    pub fn occupied(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter_map(|(i, &m)| m.then_some(i))
    }

    pub fn volume(&self) -> f64 {
        self.occupied_count() as f64 * self.cell_volume()
    }

    pub fn is_occupied(&self, c: [i64; 3]) -> bool {
        if (0..3).any(|a| c[a] < 0 || c[a] >= self.dims[a] as i64) {
            return false;
        }
        self.mask[self.index([c[0] as usize, c[1] as usize, c[2] as usize])]
    }
}

/// Grid over the bounding box of `spec` with every side split into `resolution` cells;
/// a cell is occupied iff its center lies in the domain.
pub fn voxelize(spec: &DomainSpec, resolution: usize) -> Result<VoxelDomain> {
    if resolution < 8 {
        return invalid(format!("voxel resolution must be at least 8, got {resolution}"));
    }
    spec.validate()?;
    let (lo, hi) = spec.bounding_box();
    let spacing = [0, 1, 2].map(|a| (hi[a] - lo[a]) / resolution as f64);
    let mut vox = VoxelDomain::empty(lo, spacing, [resolution; 3]);
    for idx in 0..vox.len() {
        let p = vox.center(vox.cell(idx));
        vox.mask[idx] = spec.contains(p);
    }
    Ok(vox)
}
