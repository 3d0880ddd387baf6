//! Shared numeric kernels: finite-difference weights, 2x2 complex matrices,
//! Gauss–Legendre quadrature, small dense linear solves, Chebyshev tables.

use num_complex::Complex64;

/// Fornberg weights for the `order`-th derivative at `x0` from nodes at
/// `offsets` (in units of the grid spacing).
pub fn fd_weights(x0: f64, offsets: &[f64], order: usize) -> Vec<f64> {
    let n = offsets.len();
    assert!(n > order, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = offsets[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = offsets[i] - x0;
        for j in 0..i {
            let c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Fourth-order central first derivative in time from 5 equispaced samples
/// `[f(t-2h), f(t-h), f(t), f(t+h), f(t+2h)]`.
pub fn fd4_time_derivative(samples: &[Complex64; 5], h: f64) -> Complex64 {
    (samples[0] - samples[1] * 8.0 + samples[3] * 8.0 - samples[4]) / (12.0 * h)
}

// ---------------------------------------------------------------------------
// 2x2 complex matrices
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2 {
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Mat2::new(z, z, z, z)
    }

    pub fn identity() -> Self {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        Mat2::new(o, z, z, o)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn commutator(&self, o: &Mat2) -> Mat2 {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.a.norm().max(self.b.norm()).max(self.c.norm()).max(self.d.norm())
    }

    /// Degree-4 truncated exponential I + A + A²/2 + A³/6 + A⁴/24.
    pub fn exp4(&self) -> Mat2 {
        let mut acc = Mat2::identity();
        let mut term = Mat2::identity();
        for k in 1..=4u32 {
            term = term.mul(self).scale(Complex64::new(1.0 / k as f64, 0.0));
            acc = acc.add(&term);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Gauss–Legendre quadrature
// ---------------------------------------------------------------------------

/// Nodes and weights on [-1, 1], by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Composite Gauss–Legendre quadrature of `f` over `[a, b]`.
pub fn integrate_gl(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, nodes_per_panel: usize) -> f64 {
    let (xs, ws) = gauss_legendre(nodes_per_panel);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in xs.iter().zip(&ws) {
            total += w * f(mid + 0.5 * h * x);
        }
    }
    total * 0.5 * (b - a) / panels as f64
}

pub fn integrate_gl_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    panels: usize,
    nodes_per_panel: usize,
) -> Complex64 {
    let (xs, ws) = gauss_legendre(nodes_per_panel);
    let h = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in xs.iter().zip(&ws) {
            total += f(mid + 0.5 * h * x) * *w;
        }
    }
    total * (0.5 * (b - a) / panels as f64)
}

// ---------------------------------------------------------------------------
// Small dense linear algebra (row-major)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<f64>,
    piv: Vec<usize>,
    sign: f64,
}

/// LU with partial pivoting. Returns None if exactly singular.
pub fn lu_factor(a: &[f64], n: usize) -> Option<LuFactors> {
    assert_eq!(a.len(), n * n);
    let mut lu = a.to_vec();
    let mut piv: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let mut pmax = k;
        let mut vmax = lu[k * n + k].abs();
        for i in k + 1..n {
            let v = lu[i * n + k].abs();
            if v > vmax {
                vmax = v;
                pmax = i;
            }
        }
        if vmax == 0.0 {
            return None;
        }
        if pmax != k {
            for j in 0..n {
                lu.swap(k * n + j, pmax * n + j);
            }
            piv.swap(k, pmax);
            sign = -sign;
        }
        let pivot = lu[k * n + k];
        for i in k + 1..n {
            let factor = lu[i * n + k] / pivot;
            lu[i * n + k] = factor;
            for j in k + 1..n {
                lu[i * n + j] -= factor * lu[k * n + j];
            }
        }
    }
    Some(LuFactors { n, lu, piv, sign })
}

impl LuFactors {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    /// Natural log of |det| together with the determinant sign.
    pub fn log_abs_det(&self) -> (f64, f64) {
        let mut logdet = 0.0;
        let mut sign = self.sign;
        for i in 0..self.n {
            let d = self.lu[i * self.n + i];
            logdet += d.abs().ln();
            if d < 0.0 {
                sign = -sign;
            }
        }
        (logdet, sign)
    }
}

/// 1-norm condition number via the explicit inverse; fine for the small
/// dense systems used here.
pub fn cond_1norm(a: &[f64], n: usize) -> Option<f64> {
    let lu = lu_factor(a, n)?;
    let norm_a = one_norm(a, n);
    let mut norm_inv: f64 = 0.0;
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = lu.solve(&e);
        e[j] = 0.0;
        let colsum: f64 = col.iter().map(|v| v.abs()).sum();
        norm_inv = norm_inv.max(colsum);
    }
    Some(norm_a * norm_inv)
}

fn one_norm(a: &[f64], n: usize) -> f64 {
    let mut best: f64 = 0.0;
    for j in 0..n {
        let mut s = 0.0;
        for i in 0..n {
            s += a[i * n + j].abs();
        }
        best = best.max(s);
    }
    best
}

// ---------------------------------------------------------------------------
// Chebyshev interpolation table
// ---------------------------------------------------------------------------

/// Piecewise Chebyshev interpolant of a smooth function on `[a, b]`.
pub struct ChebTable {
    a: f64,
    b: f64,
    intervals: usize,
    coeffs: Vec<Vec<f64>>,
}

impl ChebTable {
    pub fn build(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize, degree: usize) -> Self {
        let h = (b - a) / intervals as f64;
        let m = degree + 1;
        let mut coeffs = Vec::with_capacity(intervals);
        for k in 0..intervals {
            let lo = a + k as f64 * h;
            let mid = lo + 0.5 * h;
            let vals: Vec<f64> = (0..m)
                .map(|j| {
                    let theta = std::f64::consts::PI * (j as f64 + 0.5) / m as f64;
                    f(mid + 0.5 * h * theta.cos())
                })
                .collect();
            let mut c = vec![0.0; m];
            for (i, ci) in c.iter_mut().enumerate() {
                let mut s = 0.0;
                for (j, v) in vals.iter().enumerate() {
                    let theta = std::f64::consts::PI * (j as f64 + 0.5) / m as f64;
                    s += v * (i as f64 * theta).cos();
                }
                *ci = 2.0 * s / m as f64;
            }
            c[0] *= 0.5;
            coeffs.push(c);
        }
        ChebTable { a, b, intervals, coeffs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let h = (self.b - self.a) / self.intervals as f64;
        let k = (((x - self.a) / h).floor() as isize).clamp(0, self.intervals as isize - 1) as usize;
        let lo = self.a + k as f64 * h;
        let t = 2.0 * (x - lo) / h - 1.0;
        // Clenshaw recurrence
        let c = &self.coeffs[k];
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &ck in c.iter().skip(1).rev() {
            let tmp = 2.0 * t * b1 - b2 + ck;
            b2 = b1;
            b1 = tmp;
        }
        t * b1 - b2 + c[0]
    }

    pub fn range(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}
