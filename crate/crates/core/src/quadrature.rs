//! Gauss–Legendre quadrature and Legendre polynomials on [-1, 1].

use crate::summation::CompensatedSum;

/// Legendre polynomial `P_n(t)` by the three-term recurrence.
pub fn legendre(n: usize, t: f64) -> f64 {
    legendre_with_derivative(n, t).0
}

/// `(P_n(t), P_n'(t))`.
pub fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, t);
    let (mut d_prev, mut d) = (0.0, 1.0);
    for j in 2..=n {
        let jf = j as f64;
        let p_next = ((2.0 * jf - 1.0) * t * p - (jf - 1.0) * p_prev) / jf;
        // P'_j = P'_{j-2} + (2j - 1) P_{j-1}
        let d_next = d_prev + (2.0 * jf - 1.0) * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut deriv = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            deriv = d;
            let step = p / d;
            t -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        deriv = if d != 0.0 { d } else { deriv };
        let w = 2.0 / ((1.0 - t * t) * deriv * deriv);
        nodes[i] = -t;
        nodes[n - 1 - i] = t;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule on `[a, b]`.
///
/// The interval is cut at `breakpoints` first (so piecewise-smooth integrands
/// are integrated panel by panel) and each resulting segment is split into
/// `panels_per_segment` equal panels carrying `order` nodes each.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(a: f64, b: f64, breakpoints: &[f64], panels_per_segment: usize, order: usize) -> Self {
        let (ref_nodes, ref_weights) = gauss_legendre(order);
        let mut cuts = Vec::with_capacity(breakpoints.len() + 2);
        cuts.push(a);
        cuts.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
        cuts.push(b);

        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for seg in cuts.windows(2) {
            let h = (seg[1] - seg[0]) / panels_per_segment as f64;
            for p in 0..panels_per_segment {
                let lo = seg[0] + h * p as f64;
                let mid = lo + 0.5 * h;
                for (t, w) in ref_nodes.iter().zip(&ref_weights) {
                    nodes.push(mid + 0.5 * h * t);
                    weights.push(0.5 * h * w);
                }
            }
        }
        CompositeRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut acc = CompensatedSum::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(x));
        }
        acc.value()
    }
}
