//! Orthonormal sieve bases on a window `[a, b]`.
//!
//! Two families are provided:
//!
//! * **Trigonometric**: `f_1 = (b-a)^{-1/2}`; for even `k`,
//!   `f_k = (2/(b-a))^{1/2} cos(kπ(x-a)/(b-a))`; for odd `k > 1`,
//!   `f_k = (2/(b-a))^{1/2} sin((k-1)π(x-a)/(b-a))`. The family is nested:
//!   the first `K` functions do not depend on `K`.
//! * **Piecewise Legendre**: on a regular partition of the window into `L`
//!   pieces, `f_{(j,l)}(x) = ((2j+1)/h)^{1/2} P_j((2x - x_{l-1} - x_l)/h)` on the
//!   open piece `(x_{l-1}, x_l)`, `j = 0..J`. Functions are enumerated in
//!   piece-major order: index `k = (l-1)·J + j + 1`, so all degrees of piece 1
//!   come first, then piece 2, and so on.
//!
//! Every basis function is zero outside its window.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{LevyError, Result};
use crate::estimator::{CoefficientRole, CoefficientVector};
use crate::process::TrueLevyDensity;
use crate::quadrature::{legendre, legendre_with_derivative, CompositeRule};

/// A closed interval `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub a: f64,
    pub b: f64,
}

impl Window {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(LevyError::Window(format!("need finite a < b, got [{a}, {b}]")));
        }
        Ok(Window { a, b })
    }

    /// A window usable for a Lévy density, i.e. one that excludes the origin.
    pub fn for_levy_density(a: f64, b: f64) -> Result<Self> {
        let w = Window::new(a, b)?;
        if w.contains(0.0) {
            return Err(LevyError::Window(format!("[{a}, {b}] contains the origin")));
        }
        Ok(w)
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    pub fn contains_window(&self, inner: &Window) -> bool {
        inner.a >= self.a && inner.b <= self.b
    }

    /// `points` equally spaced abscissae including both endpoints.
    pub fn grid(&self, points: usize) -> Vec<f64> {
        let m = points.max(2);
        let h = self.width() / (m - 1) as f64;
        (0..m)
            .map(|i| if i == m - 1 { self.b } else { self.a + h * i as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisFamily {
    Trigonometric,
    /// `degrees` = J (maximum degree + 1), `pieces` = L.
    PiecewiseLegendre { degrees: usize, pieces: usize },
}

/// An orthonormal family `f_1..f_K` on a window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BasisDescriptor", into = "BasisDescriptor")]
pub struct BasisSystem {
    family: BasisFamily,
    window: Window,
    k: usize,
}

/// Serialized form: `family`, `a`, `b`, `K` and, for Legendre, `J` and `L`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisDescriptor {
    pub family: String,
    pub a: f64,
    pub b: f64,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none", default)]
    pub j: Option<usize>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none", default)]
    pub l: Option<usize>,
}

impl From<BasisSystem> for BasisDescriptor {
    fn from(b: BasisSystem) -> Self {
        let (family, j, l) = match b.family {
            BasisFamily::Trigonometric => ("trigonometric", None, None),
            BasisFamily::PiecewiseLegendre { degrees, pieces } => {
                ("piecewise-legendre", Some(degrees), Some(pieces))
            }
        };
        BasisDescriptor { family: family.into(), a: b.window.a, b: b.window.b, k: b.k, j, l }
    }
}

impl TryFrom<BasisDescriptor> for BasisSystem {
    type Error = LevyError;

    fn try_from(d: BasisDescriptor) -> Result<Self> {
        let window = Window::new(d.a, d.b)?;
        match d.family.as_str() {
            "trigonometric" | "trig" => BasisSystem::trigonometric(window, d.k),
            "piecewise-legendre" | "legendre" => {
                let (j, l) = d.j.zip(d.l).ok_or_else(|| {
                    LevyError::parameter("piecewise-legendre descriptor needs J and L")
                })?;
                let basis = BasisSystem::piecewise_legendre(window, j, l)?;
                if basis.k != d.k {
                    return Err(LevyError::parameter(format!("K={} but J*L={}", d.k, basis.k)));
                }
                Ok(basis)
            }
            other => Err(LevyError::parameter(format!("unknown basis family `{other}`"))),
        }
    }
}

/// The two smoothness features `F₁(K)`, `F₂(K)` that enter the sampling-frequency condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisFeatures {
    pub f1: f64,
    pub f2: f64,
}

impl BasisSystem {
    pub fn trigonometric(window: Window, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(LevyError::parameter("K must be at least 1"));
        }
        Ok(BasisSystem { family: BasisFamily::Trigonometric, window, k })
    }

    pub fn piecewise_legendre(window: Window, degrees: usize, pieces: usize) -> Result<Self> {
        if degrees == 0 || pieces == 0 {
            return Err(LevyError::parameter("J and L must be at least 1"));
        }
        let k = degrees
            .checked_mul(pieces)
            .ok_or_else(|| LevyError::Range("J*L overflows".into()))?;
        Ok(BasisSystem { family: BasisFamily::PiecewiseLegendre { degrees, pieces }, window, k })
    }

    pub fn family(&self) -> BasisFamily {
        self.family
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// True when the first `K` functions are shared by every larger `K'`.
    pub fn nested(&self) -> bool {
        matches!(self.family, BasisFamily::Trigonometric)
    }

    /// Same family and window with a different size. For Legendre `k` must be
    /// a multiple of `J`.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        match self.family {
            BasisFamily::Trigonometric => BasisSystem::trigonometric(self.window, k),
            BasisFamily::PiecewiseLegendre { degrees, .. } => {
                if !k.is_multiple_of(degrees) {
                    return Err(LevyError::parameter(format!("K={k} is not a multiple of J={degrees}")));
                }
                BasisSystem::piecewise_legendre(self.window, degrees, k / degrees)
            }
        }
    }

    /// Interior breakpoints where basis functions may be discontinuous.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.family {
            BasisFamily::Trigonometric => Vec::new(),
            BasisFamily::PiecewiseLegendre { pieces, .. } => {
                (1..pieces).map(|l| self.breakpoint(l, pieces)).collect()
            }
        }
    }

    fn breakpoint(&self, l: usize, pieces: usize) -> f64 {
        if l == pieces {
            self.window.b
        } else {
            self.window.a + self.window.width() * l as f64 / pieces as f64
        }
    }

    /// `f_k(x)` for `k` in `1..=K`.
    pub fn eval(&self, k: usize, x: f64) -> Result<f64> {
        if k == 0 || k > self.k {
            return Err(LevyError::Index { index: k, k: self.k });
        }
        Ok(self.eval_unchecked(k, x))
    }

    fn eval_unchecked(&self, k: usize, x: f64) -> f64 {
        if !self.window.contains(x) {
            return 0.0;
        }
        match self.family {
            BasisFamily::Trigonometric => {
                let w = self.window.width();
                if k == 1 {
                    return 1.0 / w.sqrt();
                }
                let u = (x - self.window.a) / w;
                let amp = (2.0 / w).sqrt();
                if k.is_multiple_of(2) {
                    amp * (k as f64 * PI * u).cos()
                } else {
                    amp * ((k - 1) as f64 * PI * u).sin()
                }
            }
            BasisFamily::PiecewiseLegendre { degrees, pieces } => {
                let l = (k - 1) / degrees + 1;
                let j = (k - 1) % degrees;
                let (lo, hi) = (self.breakpoint(l - 1, pieces), self.breakpoint(l, pieces));
                if x <= lo || x >= hi {
                    return 0.0;
                }
                let h = hi - lo;
                ((2 * j + 1) as f64 / h).sqrt() * legendre(j, (2.0 * x - (lo + hi)) / h)
            }
        }
    }

    /// Writes `f_1(x)..f_K(x)` into `out[..K]`.
    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        let out = &mut out[..self.k];
        if !self.window.contains(x) {
            out.fill(0.0);
            return;
        }
        match self.family {
            BasisFamily::Trigonometric => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = self.eval_unchecked(i + 1, x);
                }
            }
            BasisFamily::PiecewiseLegendre { degrees, pieces } => {
                out.fill(0.0);
                let pos = (x - self.window.a) / self.window.width() * pieces as f64;
                let guess = (pos.floor() as usize).min(pieces - 1);
                // the floor may land one piece off right next to a breakpoint
                for l in guess.saturating_sub(1)..=(guess + 1).min(pieces - 1) {
                    for j in 0..degrees {
                        let k = l * degrees + j + 1;
                        out[k - 1] = self.eval_unchecked(k, x);
                    }
                }
            }
        }
    }

    pub fn eval_all(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.k];
        self.eval_into(x, &mut out);
        out
    }

    fn check_len(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.k {
            return Err(LevyError::Dimension { expected: self.k, got: theta.len() });
        }
        Ok(())
    }

    /// `ψ_θ(x) = Σ_k θ_k f_k(x)`.
    pub fn synthesize(&self, theta: &[f64], x: f64) -> Result<f64> {
        self.check_len(theta)?;
        let mut vals = vec![0.0; self.k];
        self.eval_into(x, &mut vals);
        Ok(theta.iter().zip(&vals).map(|(t, f)| t * f).sum())
    }

    /// `ψ_θ` on every point of `grid`.
    pub fn synthesize_on(&self, theta: &[f64], grid: &[f64]) -> Result<Vec<f64>> {
        self.check_len(theta)?;
        let mut vals = vec![0.0; self.k];
        Ok(grid
            .iter()
            .map(|&x| {
                self.eval_into(x, &mut vals);
                theta.iter().zip(&vals).map(|(t, f)| t * f).sum()
            })
            .collect())
    }

    /// A composite Gauss–Legendre rule on the window with at least `min_nodes`
    /// nodes, split at the basis breakpoints.
    pub fn quadrature_rule(&self, min_nodes: usize) -> CompositeRule {
        let breaks = self.breakpoints();
        let segments = breaks.len() + 1;
        let order = match self.family {
            BasisFamily::Trigonometric => 16,
            BasisFamily::PiecewiseLegendre { degrees, .. } => 16.max(degrees + 1),
        };
        let panels = min_nodes.div_ceil(segments * order).max(1);
        CompositeRule::new(self.window.a, self.window.b, &breaks, panels, order)
    }

    /// Numerical Gram matrix `⟨f_j, f_k⟩` over the window.
    pub fn gram_matrix(&self, quad_nodes: usize) -> Result<Vec<Vec<f64>>> {
        if quad_nodes < 4 * self.k {
            return Err(LevyError::parameter(format!(
                "need at least 4K = {} quadrature nodes, got {quad_nodes}",
                4 * self.k
            )));
        }
        let rule = self.quadrature_rule(quad_nodes);
        let k = self.k;
        let mut g = vec![vec![0.0; k]; k];
        let mut vals = vec![0.0; k];
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            self.eval_into(x, &mut vals);
            for i in 0..k {
                let wi = w * vals[i];
                if wi == 0.0 {
                    continue;
                }
                for j in i..k {
                    g[i][j] += wi * vals[j];
                }
            }
        }
        for i in 0..k {
            for j in 0..i {
                g[i][j] = g[j][i];
            }
        }
        Ok(g)
    }

    /// `F₁ = max_k { sup|f_k| + ∫|f_k'| }`, `F₂ = max_k { sup f_k² + 2∫|f_k f_k'| }`,
    /// both over the basis window.
    pub fn features(&self) -> BasisFeatures {
        match self.family {
            BasisFamily::Trigonometric => {
                let w = self.window.width();
                if self.k == 1 {
                    return BasisFeatures { f1: 1.0 / w.sqrt(), f2: 1.0 / w };
                }
                // cos/sin(2mπu) on [0,1] have total variation 4m; their squares 4m as well.
                let m = (self.k / 2) as f64;
                let amp = (2.0 / w).sqrt();
                BasisFeatures { f1: amp * (1.0 + 4.0 * m), f2: amp * amp * (1.0 + 4.0 * m) }
            }
            BasisFamily::PiecewiseLegendre { degrees, pieces } => {
                let h = self.window.width() / pieces as f64;
                let mut f1 = 0.0f64;
                let mut f2 = 0.0f64;
                for j in 0..degrees {
                    let c2 = (2 * j + 1) as f64 / h;
                    // sup |P_j| = 1 on [-1, 1]; the affine map preserves total variation
                    f1 = f1.max(c2.sqrt() * (1.0 + legendre_total_variation(j, false)));
                    f2 = f2.max(c2 * (1.0 + legendre_total_variation(j, true)));
                }
                BasisFeatures { f1, f2 }
            }
        }
    }
}

/// Total variation of `P_j` (or `P_j²`) on [-1, 1], from its critical points.
fn legendre_total_variation(j: usize, squared: bool) -> f64 {
    if j == 0 {
        return 0.0;
    }
    let mut crit = roots_on_grid(|t| legendre_with_derivative(j, t).1);
    if squared {
        crit.extend(roots_on_grid(|t| legendre(j, t)));
    }
    crit.push(-1.0);
    crit.push(1.0);
    crit.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let value = |t: f64| {
        let p = legendre(j, t);
        if squared {
            p * p
        } else {
            p
        }
    };
    crit.windows(2).map(|w| (value(w[1]) - value(w[0])).abs()).sum()
}

/// Simple roots of `f` in (-1, 1), bracketed on a fine grid and bisected.
fn roots_on_grid(f: impl Fn(f64) -> f64) -> Vec<f64> {
    const CELLS: usize = 4096;
    let mut roots = Vec::new();
    let mut prev_t = -1.0;
    let mut prev_v = f(prev_t);
    for i in 1..=CELLS {
        let t = -1.0 + 2.0 * i as f64 / CELLS as f64;
        let v = f(t);
        if v == 0.0 && i < CELLS {
            roots.push(t);
        } else if prev_v * v < 0.0 {
            let (mut lo, mut hi, mut flo) = (prev_t, t, prev_v);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 || hi - lo < 1e-16 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_v = v;
    }
    roots
}

/// Result of projecting a density onto a basis.
#[derive(Debug, Clone)]
pub struct Projection {
    pub coefficients: CoefficientVector,
    /// Per-coefficient absolute error estimate (difference of two successive rules).
    pub error_estimates: Vec<f64>,
}

/// Absolute error the projection quadrature aims for, per coefficient.
pub const PROJECTION_TOLERANCE: f64 = 1e-10;

/// `θ⊥_k = ∫ f_k ψ★` over the basis window.
pub fn project_density(basis: &BasisSystem, psi: &TrueLevyDensity, quad_nodes: usize) -> Result<Projection> {
    project_function(basis, |x| psi.eval(x), quad_nodes)
}

/// Projection of an arbitrary function. Rules are doubled until two successive
/// estimates agree to [`PROJECTION_TOLERANCE`] in every coefficient.
pub fn project_function(
    basis: &BasisSystem,
    f: impl Fn(f64) -> Result<f64>,
    quad_nodes: usize,
) -> Result<Projection> {
    let k = basis.k();
    let mut nodes = quad_nodes.max(4 * k).max(256);
    let mut previous = integrate_against_basis(basis, &f, nodes)?;
    for _ in 0..10 {
        nodes *= 2;
        let current = integrate_against_basis(basis, &f, nodes)?;
        let errs: Vec<f64> = current.iter().zip(&previous).map(|(c, p)| (c - p).abs()).collect();
        let worst = errs.iter().cloned().fold(0.0, f64::max);
        if worst <= PROJECTION_TOLERANCE {
            return Ok(Projection {
                coefficients: CoefficientVector::new(*basis, current, CoefficientRole::Projected)?,
                error_estimates: errs,
            });
        }
        previous = current;
    }
    Err(LevyError::Integration(format!(
        "projection did not reach {PROJECTION_TOLERANCE:e} with {nodes} nodes"
    )))
}

fn integrate_against_basis(
    basis: &BasisSystem,
    f: &impl Fn(f64) -> Result<f64>,
    nodes: usize,
) -> Result<Vec<f64>> {
    use crate::summation::CompensatedSum;
    let rule = basis.quadrature_rule(nodes);
    let k = basis.k();
    let mut acc = vec![CompensatedSum::new(); k];
    let mut vals = vec![0.0; k];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let fx = f(x)?;
        if !fx.is_finite() {
            return Err(LevyError::Integration(format!("integrand is {fx} at x = {x}")));
        }
        basis.eval_into(x, &mut vals);
        for (a, v) in acc.iter_mut().zip(&vals) {
            if *v != 0.0 {
                a.add(w * fx * v);
            }
        }
    }
    Ok(acc.iter().map(|a| a.value()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d_prime() -> Window {
        Window::new(0.005, 0.015).unwrap()
    }

    #[test]
    fn trig_values() {
        let b = BasisSystem::trigonometric(d_prime(), 8).unwrap();
        for x in [0.005, 0.0101, 0.015] {
            assert!((b.eval(1, x).unwrap() - 10.0).abs() < 1e-12);
        }
        assert!((b.eval(2, 0.005).unwrap() - 200f64.sqrt()).abs() < 1e-12);
        assert_eq!(b.eval(3, 0.005).unwrap(), 0.0);
        assert!(matches!(b.eval(9, 0.01), Err(LevyError::Index { index: 9, k: 8 })));
        assert!(matches!(b.eval(0, 0.01), Err(LevyError::Index { .. })));
    }

    #[test]
    fn legendre_degree_zero_is_normalized_indicator() {
        let b = BasisSystem::piecewise_legendre(Window::new(0.0, 1.0).unwrap(), 1, 4).unwrap();
        assert_eq!(b.eval(2, 0.3).unwrap(), 2.0);
        assert_eq!(b.eval(1, 0.3).unwrap(), 0.0);
        // open pieces: zero on the breakpoints
        assert_eq!(b.eval(2, 0.25).unwrap(), 0.0);
        assert_eq!(b.eval(2, 0.5).unwrap(), 0.0);
        let all = b.eval_all(0.3);
        assert_eq!(all, vec![0.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn legendre_eval_into_matches_eval() {
        let b = BasisSystem::piecewise_legendre(Window::new(-1.0, 2.0).unwrap(), 3, 7).unwrap();
        for i in 0..=300 {
            let x = -1.2 + 3.4 * i as f64 / 300.0;
            let all = b.eval_all(x);
            for k in 1..=b.k() {
                assert_eq!(all[k - 1], b.eval(k, x).unwrap(), "x={x} k={k}");
            }
        }
    }

    #[test]
    fn zero_outside_window() {
        let trig = BasisSystem::trigonometric(d_prime(), 16).unwrap();
        let leg = BasisSystem::piecewise_legendre(d_prime(), 3, 4).unwrap();
        for x in [-1.0, 0.0, 0.004_999_999, 0.015_000_001, 3.0] {
            for k in 1..=12 {
                assert_eq!(trig.eval(k, x).unwrap(), 0.0);
                assert_eq!(leg.eval(k, x).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn gram_single_function() {
        let b = BasisSystem::trigonometric(d_prime(), 1).unwrap();
        let g = b.gram_matrix(16).unwrap();
        assert!((g[0][0] - 1.0).abs() < 1e-13);
        assert!(b.gram_matrix(3).is_err());
    }

    #[test]
    fn trig_k1_features() {
        let b = BasisSystem::trigonometric(d_prime(), 1).unwrap();
        let f = b.features();
        assert!((f.f1 - 10.0).abs() < 1e-12);
        assert!((f.f2 - 100.0).abs() < 1e-10);
    }

    #[test]
    fn legendre_total_variation_values() {
        // P_1 = t: TV 2; P_1² = t²: TV 2. P_2 = (3t²-1)/2: from 1 down to -1/2 and back: 3.
        assert!((legendre_total_variation(1, false) - 2.0).abs() < 1e-12);
        assert!((legendre_total_variation(1, true) - 2.0).abs() < 1e-12);
        assert!((legendre_total_variation(2, false) - 3.0).abs() < 1e-12);
        // P_2² : 1 -> 0 -> 1/4 -> 0 -> 1 gives 2.5
        assert!((legendre_total_variation(2, true) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn descriptor_round_trip() {
        let b = BasisSystem::piecewise_legendre(d_prime(), 3, 4).unwrap();
        let s = serde_json::to_string(&b).unwrap();
        assert!(s.contains("\"family\":\"piecewise-legendre\"") && s.contains("\"J\":3"));
        let back: BasisSystem = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        let bad = r#"{"family":"piecewise-legendre","a":0,"b":1,"K":5,"J":3,"L":4}"#;
        assert!(serde_json::from_str::<BasisSystem>(bad).is_err());
        let t = BasisSystem::trigonometric(d_prime(), 8).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert!(!s.contains("\"J\""));
    }

    #[test]
    fn window_checks() {
        assert!(Window::new(1.0, 1.0).is_err());
        assert!(Window::for_levy_density(-0.1, 0.1).is_err());
        let g = d_prime().grid(512);
        assert_eq!(g.len(), 512);
        assert_eq!(g[0], 0.005);
        assert_eq!(g[511], 0.015);
    }

    #[test]
    fn synthesize_dimension_checked() {
        let b = BasisSystem::trigonometric(d_prime(), 4).unwrap();
        assert!(matches!(b.synthesize(&[1.0; 3], 0.01), Err(LevyError::Dimension { .. })));
        assert_eq!(b.synthesize(&[0.0; 4], 0.01).unwrap(), 0.0);
        assert!((b.synthesize(&[1.0, 0.0, 0.0, 0.0], 0.012).unwrap() - 10.0).abs() < 1e-12);
    }
}
