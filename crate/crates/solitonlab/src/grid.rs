//! Uniform 1-D grids and sampled complex fields.
//!
//! A [`Grid1D`] is either periodic (point `x0 + n*dx` identified with `x0`)
//! or decaying (both endpoints stored, field assumed negligible outside).
//! Spectral derivatives require a periodic grid with power-of-two length;
//! `Fd4` derivatives work on both, using shifted 4th-order stencils near the
//! edges of decaying grids.

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Boundary {
    Periodic,
    Decaying,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DerivScheme {
    Spectral,
    Fd4,
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GridError {
    #[error("grid spacing must be positive, got {0}")]
    NonPositiveSpacing(f64),
    #[error("grid needs at least 8 points, got {0}")]
    TooFew(usize),
    #[error("spectral derivatives need a periodic grid with power-of-two length, got n={n}, {boundary:?}")]
    SpectralUnsupported { n: usize, boundary: Boundary },
    #[error("fields live on different grids")]
    GridMismatch,
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Grid1D {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
    pub boundary: Boundary,
}

impl Grid1D {
    pub fn new(x0: f64, dx: f64, n: usize, boundary: Boundary) -> Result<Self, GridError> {
        if dx <= 0.0 {
            return Err(GridError::NonPositiveSpacing(dx));
        }
        if n < 8 {
            return Err(GridError::TooFew(n));
        }
        Ok(Grid1D { x0, dx, n, boundary })
    }

    /// Periodic grid covering `[a, b)` with `n` points.
    pub fn periodic(a: f64, b: f64, n: usize) -> Result<Self, GridError> {
        Self::new(a, (b - a) / n as f64, n, Boundary::Periodic)
    }

    /// Decaying grid covering `[a, b]` inclusive with `n` points.
    pub fn decaying(a: f64, b: f64, n: usize) -> Result<Self, GridError> {
        Self::new(a, (b - a) / (n - 1) as f64, n, Boundary::Decaying)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + self.dx * i as f64
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }

    /// Box length: periodic grids wrap after `n*dx`, decaying span `(n-1)*dx`.
    pub fn length(&self) -> f64 {
        match self.boundary {
            Boundary::Periodic => self.dx * self.n as f64,
            Boundary::Decaying => self.dx * (self.n - 1) as f64,
        }
    }

    pub fn spectral_ok(&self) -> bool {
        self.boundary == Boundary::Periodic && self.n.is_power_of_two()
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct ScalarField {
    pub grid: Grid1D,
    pub values: Vec<Complex64>,
}

impl ScalarField {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Self {
        assert_eq!(grid.n, values.len(), "field length must match grid");
        ScalarField { grid, values }
    }

    pub fn zeros(grid: Grid1D) -> Self {
        ScalarField { grid, values: vec![Complex64::new(0.0, 0.0); grid.n] }
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.xs().map(f).collect();
        ScalarField { grid, values }
    }

    pub fn from_real_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        ScalarField { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self, GridError> {
        if self.grid != other.grid {
            return Err(GridError::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(ScalarField { grid: self.grid, values })
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    pub fn linf(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn linf_masked(&self, mask: &[bool]) -> f64 {
        assert_eq!(mask.len(), self.values.len());
        self.values
            .iter()
            .zip(mask)
            .filter(|(_, &keep)| keep)
            .map(|(v, _)| v.norm())
            .fold(0.0, f64::max)
    }

    /// d^order/dx^order with the chosen scheme.
    pub fn derivative(&self, order: usize, scheme: DerivScheme) -> Result<Self, GridError> {
        if order == 0 {
            return Ok(self.clone());
        }
        match scheme {
            DerivScheme::Spectral => self.spectral_derivative(order),
            DerivScheme::Fd4 => Ok(self.fd4_derivative(order)),
        }
    }

    fn spectral_derivative(&self, order: usize) -> Result<Self, GridError> {
        if !self.grid.spectral_ok() {
            return Err(GridError::SpectralUnsupported { n: self.grid.n, boundary: self.grid.boundary });
        }
        let n = self.grid.n;
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);
        let mut buf = self.values.clone();
        fft.process(&mut buf);
        let dk = 2.0 * std::f64::consts::PI / (self.grid.dx * n as f64);
        for (m, c) in buf.iter_mut().enumerate() {
            let m_signed = if m <= n / 2 { m as i64 } else { m as i64 - n as i64 };
            // Nyquist mode carries no usable phase for odd derivatives.
            if m == n / 2 && order % 2 == 1 {
                *c = Complex64::new(0.0, 0.0);
                continue;
            }
            let ik = Complex64::new(0.0, dk * m_signed as f64);
            *c *= ik.powu(order as u32);
        }
        ifft.process(&mut buf);
        let scale = 1.0 / n as f64;
        Ok(ScalarField { grid: self.grid, values: buf.into_iter().map(|v| v * scale).collect() })
    }

    fn fd4_derivative(&self, order: usize) -> Self {
        let n = self.grid.n;
        let width = order + 4; // stencil size for 4th-order accuracy
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        match self.grid.boundary {
            Boundary::Periodic => {
                let half = width / 2;
                let offsets: Vec<f64> = (0..width).map(|j| j as f64 - half as f64).collect();
                let w = crate::numeric::fd_weights(0.0, &offsets, order);
                for i in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, &wj) in w.iter().enumerate() {
                        let idx = (i + n + j - half) % n;
                        acc += self.values[idx] * wj;
                    }
                    out[i] = acc;
                }
            }
            Boundary::Decaying => {
                for i in 0..n {
                    let start = i.saturating_sub(width / 2).min(n - width);
                    let offsets: Vec<f64> = (0..width).map(|j| (start + j) as f64 - i as f64).collect();
                    let w = crate::numeric::fd_weights(0.0, &offsets, order);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, &wj) in w.iter().enumerate() {
                        acc += self.values[start + j] * wj;
                    }
                    out[i] = acc;
                }
            }
        }
        let scale = self.grid.dx.powi(-(order as i32));
        ScalarField { grid: self.grid, values: out.into_iter().map(|v| v * scale).collect() }
    }

    /// Quadrature over the grid: rectangle rule on periodic grids, composite
    /// trapezoid on decaying grids.
    pub fn integrate(&self) -> Complex64 {
        let dx = self.grid.dx;
        match self.grid.boundary {
            Boundary::Periodic => self.values.iter().sum::<Complex64>() * dx,
            Boundary::Decaying => {
                let inner: Complex64 = self.values[1..self.grid.n - 1].iter().sum();
                (inner + (self.values[0] + self.values[self.grid.n - 1]) * 0.5) * dx
            }
        }
    }

    /// Interior restriction: drop `pad` points from each end.
    pub fn trim(&self, pad: usize) -> Self {
        assert!(self.grid.n > 2 * pad + 8, "trim would leave too few points");
        let values: Vec<_> = self.values[pad..self.grid.n - pad].to_vec();
        let grid = Grid1D {
            x0: self.grid.x(pad),
            dx: self.grid.dx,
            n: values.len(),
            boundary: self.grid.boundary,
        };
        ScalarField { grid, values }
    }

    /// Every `stride`-th sample as a coarser field on the same span.
    pub fn subsample(&self, stride: usize) -> Self {
        assert!(stride >= 1 && (self.grid.n - 1).is_multiple_of(stride), "stride must divide the cell count");
        let values: Vec<_> = self.values.iter().step_by(stride).copied().collect();
        let grid = Grid1D {
            x0: self.grid.x0,
            dx: self.grid.dx * stride as f64,
            n: values.len(),
            boundary: self.grid.boundary,
        };
        ScalarField { grid, values }
    }

    /// Trigonometric interpolation onto a `factor`-times finer periodic grid
    /// (zero-padding in Fourier space). Exact for band-limited data.
    pub fn refine_spectral(&self, factor: usize) -> Result<Self, GridError> {
        if !self.grid.spectral_ok() {
            return Err(GridError::SpectralUnsupported { n: self.grid.n, boundary: self.grid.boundary });
        }
        if factor <= 1 {
            return Ok(self.clone());
        }
        let n = self.grid.n;
        let m = n * factor;
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(m);
        let mut buf = self.values.clone();
        fft.process(&mut buf);
        let mut padded = vec![Complex64::new(0.0, 0.0); m];
        for (k, &c) in buf.iter().enumerate() {
            let dst = if k <= n / 2 { k } else { m - (n - k) };
            padded[dst] = c;
        }
        // Split the Nyquist coefficient between +n/2 and -n/2 to keep the
        // interpolant real for real input.
        let half = buf[n / 2] * 0.5;
        padded[n / 2] = half;
        padded[m - n / 2] = half;
        ifft.process(&mut padded);
        let scale = 1.0 / n as f64;
        let grid = Grid1D { x0: self.grid.x0, dx: self.grid.dx / factor as f64, n: m, boundary: Boundary::Periodic };
        Ok(ScalarField { grid, values: padded.into_iter().map(|v| v * scale).collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sin_field(n: usize) -> ScalarField {
        let grid = Grid1D::periodic(0.0, 2.0 * std::f64::consts::PI, n).unwrap();
        ScalarField::from_real_fn(grid, f64::sin)
    }

    #[test]
    fn spectral_derivative_of_sin() {
        let f = sin_field(64);
        let d = f.derivative(1, DerivScheme::Spectral).unwrap();
        for (i, x) in f.grid.xs().enumerate() {
            assert!((d.values[i].re - x.cos()).abs() < 1e-12);
        }
        let d3 = f.derivative(3, DerivScheme::Spectral).unwrap();
        for (i, x) in f.grid.xs().enumerate() {
            assert!((d3.values[i].re + x.cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn fd4_matches_analytic_on_decaying_grid() {
        let grid = Grid1D::decaying(-8.0, 8.0, 2048).unwrap();
        let f = ScalarField::from_real_fn(grid, |x| (-x * x / 2.0).exp());
        let d = f.derivative(1, DerivScheme::Fd4);
        let d = d.unwrap();
        for (i, x) in grid.xs().enumerate() {
            let exact = -x * (-x * x / 2.0).exp();
            assert!((d.values[i].re - exact).abs() < 1e-8, "at x={x}");
        }
        let d2 = f.derivative(2, DerivScheme::Fd4).unwrap();
        for (i, x) in grid.xs().enumerate() {
            let exact = (x * x - 1.0) * (-x * x / 2.0).exp();
            assert!((d2.values[i].re - exact).abs() < 1e-7, "at x={x}");
        }
    }

    #[test]
    fn trapezoid_integrates_gaussian() {
        let grid = Grid1D::decaying(-10.0, 10.0, 801).unwrap();
        let f = ScalarField::from_real_fn(grid, |x| (-x * x).exp());
        let exact = std::f64::consts::PI.sqrt();
        assert!((f.integrate().re - exact).abs() < 1e-10);
    }

    #[test]
    fn spectral_refinement_interpolates() {
        let f = sin_field(32);
        let fine = f.refine_spectral(4).unwrap();
        for (i, x) in fine.grid.xs().enumerate() {
            assert!((fine.values[i].re - x.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_rejects_decaying_grid() {
        let grid = Grid1D::decaying(-1.0, 1.0, 64).unwrap();
        let f = ScalarField::zeros(grid);
        assert!(matches!(
            f.derivative(1, DerivScheme::Spectral),
            Err(GridError::SpectralUnsupported { .. })
        ));
    }
}
