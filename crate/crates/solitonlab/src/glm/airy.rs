use num_complex::Complex64;

use crate::numeric::{gauss_legendre, ChebTable};

const AI0: f64 = 0.355_028_053_887_817_2; // Ai(0) = 3^{-2/3}/Γ(2/3)
#[allow(clippy::excessive_precision)]
const AIP0: f64 = -0.258_819_403_792_806_8; // Ai'(0) = -3^{-1/3}/Γ(1/3)

/// Airy function of the first kind on the real line.
///
/// Maclaurin series for |x| ≤ 2, rotated-contour quadrature of the defining
/// integral for x < 6, asymptotic expansion for x ≥ 6. Absolute error stays
/// below ~1e-13 on [-12, 2] and relative error below ~1e-13 for x ≥ 2.
pub fn airy_ai(x: f64) -> f64 {
    if x.abs() <= 2.0 {
        airy_series(x)
    } else if x >= 6.0 {
        airy_asymptotic_pos(x)
    } else {
        airy_contour(x)
    }
}

/// Frobenius series of the Airy ODE around 0.
fn airy_series(x: f64) -> f64 {
    let z3 = x * x * x;
    let mut f_term = 1.0;
    let mut g_term = x;
    let mut f_sum = f_term;
    let mut g_sum = g_term;
    for k in 0..40u32 {
        let k = k as f64;
        f_term *= z3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        g_term *= z3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f_sum += f_term;
        g_sum += g_term;
        if f_term.abs() < 1e-18 && g_term.abs() < 1e-18 {
            break;
        }
    }
    AI0 * f_sum + AIP0 * g_sum
}

/// Rotated contour t = s·e^{iπ/6}:
/// Ai(x) = (1/π)·Re[e^{iπ/6} ∫₀^∞ exp(−s³/3 + i·x·s·e^{iπ/6}) ds].
fn airy_contour(x: f64) -> f64 {
    let rot = Complex64::from_polar(1.0, std::f64::consts::PI / 6.0);
    let s_max = 9.0;
    let panels = 180;
    let (nodes, weights) = gauss_legendre(20);
    let h = s_max / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (n, w) in nodes.iter().zip(&weights) {
            let s = mid + 0.5 * h * n;
            let arg = Complex64::new(-s * s * s / 3.0, 0.0) + Complex64::new(0.0, x * s) * rot;
            acc += arg.exp() * *w;
        }
    }
    acc *= 0.5 * h;
    (rot * acc).re / std::f64::consts::PI
}

/// Large-positive asymptotic expansion, truncated at the smallest term.
fn airy_asymptotic_pos(x: f64) -> f64 {
    let xi = 2.0 / 3.0 * x.powf(1.5);
    let prefactor = (-xi).exp() / (2.0 * std::f64::consts::PI.sqrt() * x.powf(0.25));
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..40u32 {
        let kf = k as f64;
        term *= -(6.0 * kf - 5.0) * (6.0 * kf - 1.0) / (72.0 * kf * xi);
        if term.abs() >= prev {
            break;
        }
        sum += term;
        prev = term.abs();
        if term.abs() < 1e-18 {
            break;
        }
    }
    prefactor * sum
}

/// The dispersive GLM kernel F(s) = Ai(s/ν)/ν with ν = 2(3t)^{1/3}, backed by
/// a piecewise-Chebyshev table over the working range.
pub struct AiryKernelTable {
    pub nu: f64,
    table: ChebTable,
    /// |F| < 1e-12 for arguments beyond this point
    pub decay_point: f64,
}

impl AiryKernelTable {
    pub fn build(t: f64) -> Self {
        assert!(t > 0.0, "Airy kernel needs t > 0");
        let nu = 2.0 * (3.0 * t).powf(1.0 / 3.0);
        let lo = -10.0 * nu;
        let hi = 22.0 * nu;
        let intervals = (3.0 * (hi - lo) / nu).ceil() as usize + 8;
        let table = ChebTable::build(|s| airy_ai(s / nu) / nu, lo, hi, intervals, 20);
        // find the decay certificate by marching right
        let mut s = 0.0;
        while airy_ai(s / nu).abs() / nu >= 1e-12 {
            s += 0.05 * nu;
        }
        AiryKernelTable { nu, table, decay_point: s }
    }

    pub fn eval(&self, s: f64) -> f64 {
        let (lo, hi) = self.table.range();
        if s >= hi {
            return airy_ai(s / self.nu) / self.nu;
        }
        assert!(s >= lo, "argument {s} below tabulated range");
        self.table.eval(s)
    }
}
