use num_complex::Complex64;

use super::builtin::MatrixLaxPair;
use crate::diffpoly::{eval_lambda_matrix, EvalError, FieldBinding};
use crate::grid::{DerivScheme, Grid1D, ScalarField};
use crate::numeric::Mat2;
use crate::pde::DT_PROBE;

/// A Lax pair together with numeric field samples for its alphabet at any
/// time. The binding must cover every (field, t-order) jet family appearing
/// in the pair's U and V entries.
pub struct SampledPair<'a> {
    pub pair: &'a MatrixLaxPair,
    pub fields: &'a dyn Fn(f64) -> FieldBinding,
}

impl SampledPair<'_> {
    fn u_at(&self, t: f64, lambda: Complex64) -> Result<Vec<Mat2>, EvalError> {
        eval_lambda_matrix(&self.pair.u, &self.pair.alphabet, &(self.fields)(t), lambda, DerivScheme::Fd4)
    }

    fn v_at(&self, t: f64, lambda: Complex64) -> Result<Vec<Mat2>, EvalError> {
        eval_lambda_matrix(&self.pair.v, &self.pair.alphabet, &(self.fields)(t), lambda, DerivScheme::Fd4)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DarbouxResidual {
    /// max-norm of ∂ₓG − ŨG + GU over the grid and λ samples
    pub x_part: f64,
    /// max-norm of ∂ₜG − ṼG + GV
    pub t_part: f64,
}

impl DarbouxResidual {
    pub fn max(&self) -> f64 {
        self.x_part.max(self.t_part)
    }
}

/// Residual of the fundamental Darboux relations for a candidate matrix G
/// mapping `pair` solutions to `tilde_pair` solutions:
/// ∂ₓG = ŨG − GU and ∂ₜG = ṼG − GV. Derivatives of G are 4th-order finite
/// differences on the grid (x) and around `t0` (t).
pub fn darboux_residual(
    tilde_pair: &SampledPair,
    pair: &SampledPair,
    g: &dyn Fn(f64, f64, Complex64) -> Mat2,
    lambdas: &[Complex64],
    grid: Grid1D,
    t0: f64,
) -> Result<DarbouxResidual, EvalError> {
    let mut x_part: f64 = 0.0;
    let mut t_part: f64 = 0.0;
    for &lam in lambdas {
        let g_now: Vec<Mat2> = grid.xs().map(|x| g(x, t0, lam)).collect();
        let dg_dx = mat_field_dx(&g_now, grid)?;
        let u_tilde = tilde_pair.u_at(t0, lam)?;
        let u_base = pair.u_at(t0, lam)?;
        for i in 0..grid.n {
            let res = dg_dx[i].sub(&u_tilde[i].mul(&g_now[i])).add(&g_now[i].mul(&u_base[i]));
            x_part = x_part.max(res.max_abs());
        }

        let v_tilde = tilde_pair.v_at(t0, lam)?;
        let v_base = pair.v_at(t0, lam)?;
        let probes: Vec<Vec<Mat2>> = [-2.0, -1.0, 1.0, 2.0]
            .iter()
            .map(|&j| grid.xs().map(|x| g(x, t0 + j * DT_PROBE, lam)).collect())
            .collect();
        for i in 0..grid.n {
            let dg_dt = probes[0][i]
                .sub(&probes[1][i].scale(Complex64::new(8.0, 0.0)))
                .add(&probes[2][i].scale(Complex64::new(8.0, 0.0)))
                .sub(&probes[3][i])
                .scale(Complex64::new(1.0 / (12.0 * DT_PROBE), 0.0));
            let res = dg_dt.sub(&v_tilde[i].mul(&g_now[i])).add(&g_now[i].mul(&v_base[i]));
            t_part = t_part.max(res.max_abs());
        }
    }
    Ok(DarbouxResidual { x_part, t_part })
}

/// Entrywise fd4 x-derivative of a matrix-valued grid sample.
fn mat_field_dx(ms: &[Mat2], grid: Grid1D) -> Result<Vec<Mat2>, EvalError> {
    let pick = |f: fn(&Mat2) -> Complex64| -> Result<Vec<Complex64>, EvalError> {
        let field = ScalarField::new(grid, ms.iter().map(f).collect());
        Ok(field.derivative(1, DerivScheme::Fd4)?.values)
    };
    let a = pick(|m| m.a)?;
    let b = pick(|m| m.b)?;
    let c = pick(|m| m.c)?;
    let d = pick(|m| m.d)?;
    Ok((0..ms.len()).map(|i| Mat2::new(a[i], b[i], c[i], d[i])).collect())
}
