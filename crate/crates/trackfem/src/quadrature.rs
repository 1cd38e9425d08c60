//! Gauss–Legendre quadrature on the reference interval [0, 1].

use crate::error::{Error, Result};

/// A quadrature rule on [0, 1] that is exact for polynomials up to `order`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    /// Polynomial exactness degree.
    pub order: usize,
}

// Gauss-Legendre abscissae/weights on [-1, 1], positive half only.
const GL1_X: [f64; 1] = [0.0];
const GL1_W: [f64; 1] = [2.0];
const GL2_X: [f64; 1] = [0.577_350_269_189_625_8];
const GL2_W: [f64; 1] = [1.0];
const GL3_X: [f64; 2] = [0.0, 0.774_596_669_241_483_4];
const GL3_W: [f64; 2] = [0.888_888_888_888_888_9, 0.555_555_555_555_555_6];
const GL4_X: [f64; 2] = [0.339_981_043_584_856_26, 0.861_136_311_594_052_6];
const GL4_W: [f64; 2] = [0.652_145_154_862_546_2, 0.347_854_845_137_453_86];
const GL5_X: [f64; 3] = [0.0, 0.538_469_310_105_683_1, 0.906_179_845_938_664];
const GL5_W: [f64; 3] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
];
const GL6_X: [f64; 3] = [
    0.238_619_186_083_196_9,
    0.661_209_386_466_264_5,
    0.932_469_514_203_152_1,
];
const GL6_W: [f64; 3] = [
    0.467_913_934_572_691,
    0.360_761_573_048_138_6,
    0.171_324_492_379_170_4,
];

fn symmetric_rule(half_x: &[f64], half_w: &[f64], npoints: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::with_capacity(npoints);
    let mut w = Vec::with_capacity(npoints);
    // negative half, then (for odd counts) the center, then positive half
    for (&xi, &wi) in half_x.iter().zip(half_w).rev() {
        if xi > 0.0 {
            x.push(-xi);
            w.push(wi);
        }
    }
    for (&xi, &wi) in half_x.iter().zip(half_w) {
        x.push(xi);
        w.push(wi);
    }
    debug_assert_eq!(x.len(), npoints);
    (x, w)
}

/// Builds the smallest Gauss–Legendre rule on [0, 1] exact to degree `order`.
///
/// `order` must lie in 1..=10. A rule with q points is exact to degree
/// 2q - 1, so q = order/2 + 1 points suffice.
pub fn gauss_rule(order: usize) -> Result<QuadratureRule> {
    if !(1..=10).contains(&order) {
        return Err(Error::UnsupportedQuadratureOrder(order));
    }
    let q = order / 2 + 1;
    let (x, w) = match q {
        1 => symmetric_rule(&GL1_X, &GL1_W, 1),
        2 => symmetric_rule(&GL2_X, &GL2_W, 2),
        3 => symmetric_rule(&GL3_X, &GL3_W, 3),
        4 => symmetric_rule(&GL4_X, &GL4_W, 4),
        5 => symmetric_rule(&GL5_X, &GL5_W, 5),
        6 => symmetric_rule(&GL6_X, &GL6_W, 6),
        _ => unreachable!(),
    };
    // map from [-1, 1] to [0, 1]
    let points = x.iter().map(|xi| 0.5 * (xi + 1.0)).collect();
    let weights = w.iter().map(|wi| 0.5 * wi).collect();
    Ok(QuadratureRule {
        points,
        weights,
        order: 2 * q - 1,
    })
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integrates `f` over [a, b] with a single application of the rule.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let len = b - a;
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * len * f(a + len * p))
            .sum()
    }
}
