//! Oscillation-resolving composite Gauss–Legendre quadrature for
//! `∫ trig(ω(c − s)) · g(s) ds`.
//!
//! Panel widths never exceed `2π / (ω · panels_per_period)`, so the error
//! is controlled uniformly in ω. Node placement is fixed by the inputs;
//! there is no adaptivity and results are bit-reproducible.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fnmodel::SmoothFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kernel {
    Sin,
    Cos,
}

/// `s ↦ kernel(ω(c − s)) · g⁽ᵒʳᵈᵉʳ⁾(s)`.
#[derive(Debug, Clone, Copy)]
pub struct OscIntegrand<'a> {
    pub kind: Kernel,
    pub omega: f64,
    pub shift: f64,
    pub g: &'a SmoothFunction,
    /// Which derivative of `g` multiplies the kernel.
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadConfig {
    pub panels_per_period: usize,
    pub gauss_order: usize,
    pub min_panels: usize,
    /// `BudgetExceeded` is raised above this many panels.
    pub max_panels: u64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            panels_per_period: 4,
            gauss_order: 8,
            min_panels: 4,
            max_panels: 10_000_000,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if self.panels_per_period == 0 || self.gauss_order == 0 || self.min_panels == 0 {
            return Err(Error::InvalidArgument(format!(
                "quadrature settings must be positive: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Required panel count as a real number (may exceed any integer type).
fn required_panels(omega: f64, lo: f64, hi: f64, cfg: &QuadConfig) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let per_period = ((hi - lo) * omega * cfg.panels_per_period as f64 / (2.0 * PI)).ceil();
    per_period.max(cfg.min_panels as f64)
}

/// Exact number of integrand evaluations [`osc_integral`] performs.
pub fn estimate_cost(omega: f64, lo: f64, hi: f64, cfg: &QuadConfig) -> u64 {
    let panels = required_panels(omega, lo, hi, cfg);
    // saturating float-to-int conversion
    (panels * cfg.gauss_order as f64) as u64
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panel centre `mid = lo + j·width` and `(sin, cos)` of ω(c − mid).
///
/// The centre and the phase are carried in double-double so the kernel is
/// evaluated at exactly the node the tiling intends, even when ω(c − mid)
/// is large.
fn centre_phase(omega: f64, shift: f64, lo: f64, j: f64, width: &Width) -> (f64, f64, f64) {
    let off = j * width.hi;
    let off_lo = j.mul_add(width.hi, -off) + j * width.lo;
    let (m_hi, m_lo) = two_sum(lo, off);
    let m_lo = m_lo + off_lo;
    let (d_hi, d_lo) = two_sum(shift, -m_hi);
    let d_lo = d_lo - m_lo;
    let p = omega * d_hi;
    let e = omega.mul_add(d_hi, -p) + omega * d_lo;
    let (s, c) = p.sin_cos();
    (m_hi + m_lo, s + e * c, c - e * s)
}

/// `(hi − lo) / panels` in double-double, so the tiling ends exactly at `hi`.
struct Width {
    hi: f64,
    lo: f64,
}

impl Width {
    fn new(lo: f64, hi: f64, panels: u64) -> Self {
        let (s_hi, s_lo) = two_sum(hi, -lo);
        let n = panels as f64;
        let w = s_hi / n;
        Self {
            hi: w,
            lo: ((-w).mul_add(n, s_hi) + s_lo) / n,
        }
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Integrates `kernel(ω(shift − s)) · g(s)` over `[lo, hi]` for an arbitrary
/// fallible `g`.
pub fn osc_integral_with<G>(
    kind: Kernel,
    omega: f64,
    shift: f64,
    lo: f64,
    hi: f64,
    cfg: &QuadConfig,
    mut g: G,
) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidArgument(format!("omega = {omega} must be positive")));
    }
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty range [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok(0.0);
    }
    let required = required_panels(omega, lo, hi, cfg);
    if required > cfg.max_panels as f64 {
        return Err(Error::BudgetExceeded {
            required,
            cap: cfg.max_panels,
        });
    }
    let panels = required as u64;
    let (nodes, weights) = gauss_legendre(cfg.gauss_order);
    let width = Width::new(lo, hi, panels);
    let half = 0.5 * width.hi;
    // Node offsets from the panel centre are the same for every panel, so
    // their phase rotations are computed once.
    let rot: Vec<(f64, f64)> = nodes.iter().map(|x| (omega * half * x).sin_cos()).collect();
    let mut total = CompensatedSum::default();
    for p in 0..panels {
        let (mid, sin_a, cos_a) = centre_phase(omega, shift, lo, p as f64 + 0.5, &width);
        let mut panel = 0.0;
        for ((x, w), (sin_b, cos_b)) in nodes.iter().zip(&weights).zip(&rot) {
            // kernel(A − B) with A = ω(c − mid), B = ω·half·x
            let k = match kind {
                Kernel::Sin => sin_a * cos_b - cos_a * sin_b,
                Kernel::Cos => cos_a * cos_b + sin_a * sin_b,
            };
            panel += w * k * g(mid + half * x)?;
        }
        total.add(panel * half);
    }
    Ok(total.total())
}

/// Composite Gauss–Legendre value of `∫_lo^hi q(s) ds`; exactly 0 on an
/// empty range.
pub fn osc_integral(q: &OscIntegrand<'_>, lo: f64, hi: f64, cfg: &QuadConfig) -> Result<f64> {
    let (g, order) = (q.g, q.order);
    osc_integral_with(q.kind, q.omega, q.shift, lo, hi, cfg, |s| g.eval(s, order))
}
