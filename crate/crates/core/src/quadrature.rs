//! One-dimensional quadrature rules shared by the potential and weak-form
//! modules.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

/// Adaptive Simpson rule with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tolerance: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tolerance, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tolerance: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tolerance {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tolerance, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tolerance, depth - 1)
}

/// Composite Gauss-Legendre rule: `panels` equal panels, `order` nodes each.
#[derive(Debug, Clone)]
pub struct CompositeGauss {
    rule: GaussLegendre,
    panels: usize,
}

impl CompositeGauss {
    pub fn new(order: usize, panels: usize) -> Self {
        let order = NonZeroUsize::new(order.max(1)).expect("nonzero");
        CompositeGauss { rule: GaussLegendre::new(order), panels: panels.max(1) }
    }

    pub fn order(&self) -> usize {
        self.rule.degree()
    }

    /// Physical nodes and weights on `[a, b]`.
    pub fn nodes(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let width = (b - a) / self.panels as f64;
        let mut out = Vec::with_capacity(self.panels * self.order());
        for k in 0..self.panels {
            let lo = a + k as f64 * width;
            let half = 0.5 * width;
            for &(xi, w) in self.rule.as_node_weight_pairs() {
                out.push((lo + half * (xi + 1.0), half * w));
            }
        }
        out
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.nodes(a, b).into_iter().map(|(x, w)| w * f(x)).sum()
    }
}
