//! Run configuration for single solves and studies.

use crate::error::{Error, Result};
use crate::ocp::Target;
use crate::solver::SolverConfig;
use crate::tensor::TensorSpace;

/// Coupling of the regularization weight to the mesh size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoRule {
    /// `rho = h`
    H,
    /// `rho = h^(3/2)`
    H32,
    /// `rho = h^2`
    H2,
    /// Fixed value independent of the mesh.
    Const(f64),
}

impl RhoRule {
    pub fn eval(&self, h: f64) -> f64 {
        match self {
            RhoRule::H => h,
            RhoRule::H32 => h.powf(1.5),
            RhoRule::H2 => h * h,
            RhoRule::Const(v) => *v,
        }
    }

    pub fn label(&self) -> String {
        match self {
            RhoRule::H => "h".into(),
            RhoRule::H32 => "h32".into(),
            RhoRule::H2 => "h2".into(),
            RhoRule::Const(v) => format!("const:{v}"),
        }
    }
}

/// Which solver drives the discrete system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverPath {
    /// CG on the boundary Schur complement, no preconditioner.
    SchurCg,
    /// CG on the Schur complement, lumped-boundary-mass preconditioner.
    SchurPcg,
    /// PCG on the full system (multigrid preconditioner by default).
    FullPcg,
}

impl SolverPath {
    pub fn label(&self) -> &'static str {
        match self {
            SolverPath::SchurCg => "schur-cg",
            SolverPath::SchurPcg => "schur-pcg",
            SolverPath::FullPcg => "full-pcg",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OcpConfig {
    pub d: usize,
    /// Refinement level; `n = 2^(level+1)` intervals per direction.
    pub level: usize,
    pub rho_rule: RhoRule,
    pub target: Target,
    pub path: SolverPath,
    pub solver: SolverConfig,
    /// Quadrature exactness degree for right-hand sides and boundary
    /// errors (at least 5).
    pub quad_order: usize,
}

impl OcpConfig {
    pub fn new(d: usize, level: usize, rho_rule: RhoRule, target: Target) -> Self {
        Self {
            d,
            level,
            rho_rule,
            target,
            path: SolverPath::SchurPcg,
            solver: SolverConfig::default(),
            quad_order: 5,
        }
    }

    pub fn space(&self) -> Result<TensorSpace> {
        TensorSpace::at_level(self.d, self.level)
    }

    pub fn validate(&self) -> Result<()> {
        if self.level == 0 {
            return Err(Error::InvalidConfig("level must be at least 1".into()));
        }
        if !(5..=10).contains(&self.quad_order) {
            return Err(Error::InvalidConfig(format!(
                "quadrature order must lie in 5..=10, got {}",
                self.quad_order
            )));
        }
        let h = 1.0 / (1usize << (self.level + 1)) as f64;
        let rho = self.rho_rule.eval(h);
        if !(rho > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "regularization weight must be positive at every level, got {rho}"
            )));
        }
        self.solver.validate()
    }

    pub fn rho(&self) -> f64 {
        let h = 1.0 / (1usize << (self.level + 1)) as f64;
        self.rho_rule.eval(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_rules() {
        assert_eq!(RhoRule::H.eval(0.25), 0.25);
        assert_eq!(RhoRule::H2.eval(0.25), 0.0625);
        assert!((RhoRule::H32.eval(0.25) - 0.125).abs() < 1e-15);
        assert_eq!(RhoRule::Const(0.5).eval(0.25), 0.5);
    }

    #[test]
    fn validation_rejects_bad_values() {
        let mut cfg = OcpConfig::new(2, 2, RhoRule::H, Target::Cosine);
        assert!(cfg.validate().is_ok());
        cfg.level = 0;
        assert!(cfg.validate().is_err());
        cfg.level = 2;
        cfg.quad_order = 4;
        assert!(cfg.validate().is_err());
        cfg.quad_order = 5;
        cfg.rho_rule = RhoRule::Const(0.0);
        assert!(cfg.validate().is_err());
    }
}
