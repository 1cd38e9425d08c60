//! Geometric multigrid V-cycle on the nested tensor mesh hierarchy.
//!
//! The coarse modified spaces embed exactly in the fine ones (a coarse flat
//! end interval stays flat on the two finest end subintervals), so nodal
//! interpolation is the exact prolongation and the rediscretized coarse
//! operators coincide with the Galerkin ones. Smoothing is damped Jacobi;
//! restriction is the transpose of prolongation; the coarsest level is
//! solved directly.

use crate::dense::materialize;
use crate::error::{Error, Result};
use crate::linop::{check_len, LinOp};
use crate::solver::{Precond, SystemOperator};
use crate::tensor::{boundary_mass, h1_operator, BoundaryMassOperator, KronSumOperator, TensorSpace};

#[derive(Debug, Clone, Copy)]
pub struct SmootherConfig {
    pub damping: f64,
    pub pre_smooth: usize,
    pub post_smooth: usize,
}

impl Default for SmootherConfig {
    fn default() -> Self {
        Self {
            damping: 0.8,
            pre_smooth: 1,
            post_smooth: 1,
        }
    }
}

struct GmgLevel {
    m: usize,
    d: usize,
    h1: KronSumOperator,
    bmass: BoundaryMassOperator,
    inv_diag: Vec<f64>,
}

impl GmgLevel {
    fn system(&self, rho: f64) -> SystemOperator<'_> {
        SystemOperator {
            boundary_mass: &self.bmass,
            h1: &self.h1,
            rho,
        }
    }
}

/// V(pre, post) multigrid cycle, usable as a PCG preconditioner for the
/// full discrete system at the finest level.
pub struct GmgPreconditioner {
    levels: Vec<GmgLevel>, // coarsest first
    rho: f64,
    smoother: SmootherConfig,
    coarse_chol: Option<nalgebra::Cholesky<f64, nalgebra::Dyn>>,
}

impl GmgPreconditioner {
    /// Builds the hierarchy for the given ascending interval counts, which
    /// must double from one level to the next.
    pub fn build(
        d: usize,
        intervals: &[usize],
        rho: f64,
        smoother: SmootherConfig,
    ) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidConfig("empty multigrid hierarchy".into()));
        }
        for pair in intervals.windows(2) {
            if pair[1] != 2 * pair[0] {
                return Err(Error::NonNestedLevels(pair[1], pair[0]));
            }
        }
        let mut levels = Vec::with_capacity(intervals.len());
        for &n in intervals {
            let space = TensorSpace::new(d, n)?;
            let h1 = h1_operator(&space);
            let bmass = boundary_mass(&space);
            let mut diag = bmass.diagonal();
            for (dv, a) in diag.iter_mut().zip(h1.diagonal()) {
                *dv += rho * a;
            }
            let inv_diag = diag
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    if v <= 0.0 {
                        Err(Error::NonPositiveDiagonal(i, v))
                    } else {
                        Ok(1.0 / v)
                    }
                })
                .collect::<Result<Vec<f64>>>()?;
            levels.push(GmgLevel {
                m: space.m(),
                d,
                h1,
                bmass,
                inv_diag,
            });
        }
        let coarse_chol = if levels.len() > 1 {
            let sys = levels[0].system(rho);
            let dense = materialize(&sys)?;
            Some(nalgebra::Cholesky::new(dense).ok_or(Error::FactorizationFailed)?)
        } else {
            None
        };
        Ok(Self {
            levels,
            rho,
            smoother,
            coarse_chol,
        })
    }

    /// Hierarchy for a given fine space, coarsening by halving the interval
    /// count as long as it stays even and at least 4.
    pub fn for_space(space: &TensorSpace, rho: f64, smoother: SmootherConfig) -> Result<Self> {
        let mut ns = vec![space.basis().mesh().intervals()];
        while ns.last().unwrap() % 2 == 0 && ns.last().unwrap() / 2 >= 4 {
            let half = ns.last().unwrap() / 2;
            ns.push(half);
        }
        ns.reverse();
        Self::build(space.d(), &ns, rho, smoother)
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    fn jacobi_from_zero(&self, level: &GmgLevel, b: &[f64]) -> Vec<f64> {
        let w = self.smoother.damping;
        b.iter()
            .zip(&level.inv_diag)
            .map(|(r, d)| w * r * d)
            .collect()
    }

    fn smooth(&self, level: &GmgLevel, b: &[f64], x: &mut [f64]) -> Result<()> {
        let sys = level.system(self.rho);
        let ax = sys.apply(x)?;
        let w = self.smoother.damping;
        for ((xi, (&bi, &axi)), &di) in x
            .iter_mut()
            .zip(b.iter().zip(&ax))
            .zip(&level.inv_diag)
        {
            *xi += w * (bi - axi) * di;
        }
        Ok(())
    }

    fn vcycle(&self, idx: usize, b: &[f64]) -> Result<Vec<f64>> {
        let level = &self.levels[idx];
        if self.levels.len() == 1 {
            // degenerate hierarchy: one application of damped Jacobi
            return Ok(self.jacobi_from_zero(level, b));
        }
        if idx == 0 {
            let chol = self.coarse_chol.as_ref().expect("coarse factorization");
            let sol = chol.solve(&nalgebra::DVector::from_column_slice(b));
            return Ok(sol.as_slice().to_vec());
        }
        let mut x = self.jacobi_from_zero(level, b);
        for _ in 1..self.smoother.pre_smooth {
            self.smooth(level, b, &mut x)?;
        }
        let sys = level.system(self.rho);
        let ax = sys.apply(&x)?;
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let coarse_m = self.levels[idx - 1].m;
        let rc = restrict_tensor(&r, level.m, coarse_m, level.d);
        let ec = self.vcycle(idx - 1, &rc)?;
        let ef = prolong_tensor(&ec, coarse_m, level.m, level.d);
        for (xi, e) in x.iter_mut().zip(&ef) {
            *xi += e;
        }
        for _ in 0..self.smoother.post_smooth {
            self.smooth(level, b, &mut x)?;
        }
        Ok(x)
    }
}

impl Precond for GmgPreconditioner {
    fn len(&self) -> usize {
        let fine = self.levels.last().unwrap();
        fine.m.pow(fine.d as u32)
    }

    fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), r.len())?;
        self.vcycle(self.levels.len() - 1, r)
    }
}

/// Nodal-interpolation prolongation along every dimension. Coarse dof j
/// (0-based) sits at the coarse node j+1; with `m_f = 2 m_c + 1` the fine
/// values are: copies at coinciding nodes and inside the flat end
/// intervals, averages at the new midpoints.
pub(crate) fn prolong_tensor(coarse: &[f64], m_c: usize, m_f: usize, d: usize) -> Vec<f64> {
    debug_assert_eq!(m_f, 2 * m_c + 1);
    let mut data = coarse.to_vec();
    let mut shape = vec![m_c; d];
    for dim in 0..d {
        data = prolong_along_dim(&data, &shape, dim, m_f);
        shape[dim] = m_f;
    }
    data
}

/// Transpose of [`prolong_tensor`].
pub(crate) fn restrict_tensor(fine: &[f64], m_f: usize, m_c: usize, d: usize) -> Vec<f64> {
    debug_assert_eq!(m_f, 2 * m_c + 1);
    let mut data = fine.to_vec();
    let mut shape = vec![m_f; d];
    for dim in 0..d {
        data = restrict_along_dim(&data, &shape, dim, m_c);
        shape[dim] = m_c;
    }
    data
}

/// Fine index -> (coarse contributions) of the 1D prolongation.
fn prolong_sources(k: usize, m_c: usize, m_f: usize) -> ([(usize, f64); 2], usize) {
    if k == 0 {
        ([(0, 1.0), (0, 0.0)], 1)
    } else if k == m_f - 1 {
        ([(m_c - 1, 1.0), (0, 0.0)], 1)
    } else if k % 2 == 1 {
        ([((k - 1) / 2, 1.0), (0, 0.0)], 1)
    } else {
        ([(k / 2 - 1, 0.5), (k / 2, 0.5)], 2)
    }
}

fn prolong_along_dim(src: &[f64], shape: &[usize], dim: usize, m_f: usize) -> Vec<f64> {
    let m_c = shape[dim];
    let inner: usize = shape[..dim].iter().product();
    let outer: usize = shape[dim + 1..].iter().product();
    let mut dst = vec![0.0; inner * m_f * outer];
    for o in 0..outer {
        let sb = o * inner * m_c;
        let db = o * inner * m_f;
        for k in 0..m_f {
            let (sources, cnt) = prolong_sources(k, m_c, m_f);
            let line = &mut dst[db + k * inner..db + (k + 1) * inner];
            for &(j, w) in &sources[..cnt] {
                let s = &src[sb + j * inner..sb + (j + 1) * inner];
                for (t, v) in line.iter_mut().zip(s) {
                    *t += w * v;
                }
            }
        }
    }
    dst
}

fn restrict_along_dim(src: &[f64], shape: &[usize], dim: usize, m_c: usize) -> Vec<f64> {
    let m_f = shape[dim];
    let inner: usize = shape[..dim].iter().product();
    let outer: usize = shape[dim + 1..].iter().product();
    let mut dst = vec![0.0; inner * m_c * outer];
    for o in 0..outer {
        let sb = o * inner * m_f;
        let db = o * inner * m_c;
        for k in 0..m_f {
            let (sources, cnt) = prolong_sources(k, m_c, m_f);
            let line = &src[sb + k * inner..sb + (k + 1) * inner];
            for &(j, w) in &sources[..cnt] {
                let t = &mut dst[db + j * inner..db + (j + 1) * inner];
                for (ti, v) in t.iter_mut().zip(line) {
                    *ti += w * v;
                }
            }
        }
    }
    dst
}
