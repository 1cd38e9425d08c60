//! Boundary data the state is driven toward.

use std::fmt;
use std::sync::Arc;

/// Regularity of the target's extension into the domain, which governs the
/// attainable convergence order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    /// Trace of a smooth function with vanishing normal derivative;
    /// second-order convergence is expected with `rho = h^2`.
    NeumannCompatible,
    /// Trace of a smooth function violating the homogeneous Neumann
    /// condition; order ~1.5 is expected with `rho = h^(3/2)`.
    NeumannIncompatible,
    Unknown,
}

/// Target function, evaluable on the closed cube (the solver only samples
/// it on the boundary; volume evaluation is used by projection tests).
#[derive(Clone)]
pub enum Target {
    /// `prod_i cos(pi x_i)` - extends smoothly with zero normal derivative.
    Cosine,
    /// d=3: `x_1^2 - 0.5 x_2^2 - 0.5 x_3^2`; d=2: `x_1^2 - x_2^2`;
    /// d=1: `x^2`. Violates the homogeneous Neumann condition.
    Quadratic,
    Custom {
        name: String,
        smoothness: Smoothness,
        eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    },
}

impl Target {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Target::Cosine => x
                .iter()
                .map(|&xi| (std::f64::consts::PI * xi).cos())
                .product(),
            Target::Quadratic => match x.len() {
                1 => x[0] * x[0],
                2 => x[0] * x[0] - x[1] * x[1],
                _ => x[0] * x[0] - 0.5 * x[1] * x[1] - 0.5 * x[2] * x[2],
            },
            Target::Custom { eval, .. } => eval(x),
        }
    }

    pub fn smoothness(&self) -> Smoothness {
        match self {
            Target::Cosine => Smoothness::NeumannCompatible,
            Target::Quadratic => Smoothness::NeumannIncompatible,
            Target::Custom { smoothness, .. } => *smoothness,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Target::Cosine => "cosine",
            Target::Quadratic => "quadratic",
            Target::Custom { name, .. } => name,
        }
    }

    /// A target that is identically zero (useful for degenerate checks).
    pub fn zero() -> Self {
        Target::Custom {
            name: "zero".into(),
            smoothness: Smoothness::NeumannCompatible,
            eval: Arc::new(|_| 0.0),
        }
    }
}

impl fmt::Debug for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Target({})", self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_is_a_product_of_cosines() {
        let t = Target::Cosine;
        assert!((t.eval(&[0.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);
        assert!((t.eval(&[1.0, 0.0, 0.0]) + 1.0).abs() < 1e-15);
        assert!((t.eval(&[0.5, 0.25]) - 0.0).abs() < 1e-15);
    }

    #[test]
    fn quadratic_matches_per_dimension_forms() {
        let t = Target::Quadratic;
        assert!((t.eval(&[1.0, 1.0, 1.0]) - 0.0).abs() < 1e-15);
        assert!((t.eval(&[1.0, 0.5, 0.0]) - (1.0 - 0.125)).abs() < 1e-15);
        assert!((t.eval(&[0.5, 0.5]) - 0.0).abs() < 1e-15);
        assert!((t.eval(&[0.3]) - 0.09).abs() < 1e-15);
    }
}
