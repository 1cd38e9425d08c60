//! Splitting of tensor unknowns into strict interior and near-boundary sets.

use crate::error::{Error, Result};
use crate::linop::{check_len, LinOp};
use crate::tensor::{for_each_multi, TensorSpace};

/// Classification of the `m^d` multi-indices: strict interior unknowns have
/// every 1D index in `2..=m-1` (1-based), i.e. they carry no boundary trace;
/// the near-boundary rest have some index equal to 1 or m. The packed
/// orderings are lexicographic, matching the full vector.
#[derive(Debug, Clone)]
pub struct DofPartition {
    m: usize,
    d: usize,
    interior: Vec<usize>,
    boundary: Vec<usize>,
}

impl DofPartition {
    pub fn new(space: &TensorSpace) -> Result<Self> {
        let (m, d) = (space.m(), space.d());
        if m < 3 {
            return Err(Error::NoInteriorDofs(m));
        }
        let mut interior = Vec::with_capacity((m - 2).pow(d as u32));
        let mut boundary = Vec::with_capacity(m.pow(d as u32) - (m - 2).pow(d as u32));
        let mut pos = 0usize;
        for_each_multi(&vec![m; d], |idx| {
            if idx.iter().all(|&i| i >= 1 && i <= m - 2) {
                interior.push(pos);
            } else {
                boundary.push(pos);
            }
            pos += 1;
        });
        Ok(Self {
            m,
            d,
            interior,
            boundary,
        })
    }

    pub fn interior_ids(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary_ids(&self) -> &[usize] {
        &self.boundary
    }

    pub fn interior_len(&self) -> usize {
        self.interior.len()
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.len()
    }

    pub fn total_len(&self) -> usize {
        self.m.pow(self.d as u32)
    }

    fn ids(&self, sel: BlockSel) -> &[usize] {
        match sel {
            BlockSel::Interior => &self.interior,
            BlockSel::Boundary => &self.boundary,
        }
    }

    /// Scatters a packed block vector into a zeroed full vector.
    pub fn embed(&self, sel: BlockSel, packed: &[f64]) -> Result<Vec<f64>> {
        check_len(self.ids(sel).len(), packed.len())?;
        let mut full = vec![0.0; self.total_len()];
        for (&id, &v) in self.ids(sel).iter().zip(packed) {
            full[id] = v;
        }
        Ok(full)
    }

    /// Gathers the block entries of a full vector.
    pub fn restrict(&self, sel: BlockSel, full: &[f64]) -> Result<Vec<f64>> {
        check_len(self.total_len(), full.len())?;
        Ok(self.ids(sel).iter().map(|&id| full[id]).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockSel {
    Interior,
    Boundary,
}

/// A block of a full-space operator in packed indices, realized by
/// embed - apply - restrict.
pub struct BlockOperator<'a> {
    op: &'a dyn LinOp,
    part: &'a DofPartition,
    rows: BlockSel,
    cols: BlockSel,
}

impl<'a> BlockOperator<'a> {
    pub fn new(op: &'a dyn LinOp, part: &'a DofPartition, rows: BlockSel, cols: BlockSel) -> Self {
        Self {
            op,
            part,
            rows,
            cols,
        }
    }
}

impl LinOp for BlockOperator<'_> {
    fn len(&self) -> usize {
        // row dimension; apply checks the column dimension explicitly
        self.part.ids(self.rows).len()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        check_len(self.part.ids(self.cols).len(), v.len())?;
        check_len(self.part.ids(self.rows).len(), out.len())?;
        let full = self.part.embed(self.cols, v)?;
        let applied = self.op.apply(&full)?;
        for (o, &id) in out.iter_mut().zip(self.part.ids(self.rows)) {
            *o = applied[id];
        }
        Ok(())
    }
}
