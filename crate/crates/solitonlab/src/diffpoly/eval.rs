use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use thiserror::Error;

use super::lambda::LambdaMatrix;
use super::poly::{Alphabet, DiffPoly, FieldId};
use crate::grid::{DerivScheme, Grid1D, ScalarField};
use crate::numeric::Mat2;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum EvalError {
    #[error("field `{0}` (t-order {1}) is not bound")]
    UnboundField(String, u8),
    #[error("bound fields live on different grids")]
    GridMismatch,
    #[error("{0}")]
    Grid(#[from] crate::grid::GridError),
}

/// Sampled values for the base fields appearing in a polynomial.
///
/// Keys are (field, t-order): time derivatives of a field must be bound as
/// separate samples; x-derivatives are produced by the chosen scheme.
#[derive(Clone, Default)]
pub struct FieldBinding {
    map: HashMap<(FieldId, u8), ScalarField>,
}

impl FieldBinding {
    pub fn new() -> Self {
        FieldBinding::default()
    }

    pub fn bind(&mut self, field: FieldId, values: ScalarField) -> &mut Self {
        self.map.insert((field, 0), values);
        self
    }

    pub fn bind_t(&mut self, field: FieldId, t_order: u8, values: ScalarField) -> &mut Self {
        self.map.insert((field, t_order), values);
        self
    }

    pub fn get(&self, field: FieldId, t_order: u8) -> Option<&ScalarField> {
        self.map.get(&(field, t_order))
    }

    pub fn fields(&self) -> impl Iterator<Item = &ScalarField> {
        self.map.values()
    }

    pub fn common_grid(&self) -> Result<Grid1D, EvalError> {
        let mut it = self.map.values();
        let first = it.next().ok_or(EvalError::GridMismatch)?;
        for f in it {
            if f.grid != first.grid {
                return Err(EvalError::GridMismatch);
            }
        }
        Ok(first.grid)
    }
}

/// Pointwise evaluation of a differential polynomial on bound fields.
pub fn dp_evaluate(
    p: &DiffPoly,
    alph: &Alphabet,
    binding: &FieldBinding,
    scheme: DerivScheme,
) -> Result<ScalarField, EvalError> {
    let grid = binding.common_grid()?;
    let mut cache: HashMap<(FieldId, u8, u8), ScalarField> = HashMap::new();
    let mut out = ScalarField::zeros(grid);
    for (m, c) in p.terms() {
        let cf = rational_to_f64(c);
        let mut term = vec![Complex64::new(cf, 0.0); grid.n];
        for &(v, pow) in m.factors() {
            let key = (v.field, v.t_order, v.x_order);
            if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
                let base = binding
                    .get(v.field, v.t_order)
                    .ok_or_else(|| EvalError::UnboundField(alph.name(v.field).to_string(), v.t_order))?;
                let d = base.derivative(v.x_order as usize, scheme)?;
                e.insert(d);
            }
            let vals = &cache[&key].values;
            for (t, val) in term.iter_mut().zip(vals) {
                *t *= val.powu(pow);
            }
        }
        for (o, t) in out.values.iter_mut().zip(&term) {
            *o += t;
        }
    }
    Ok(out)
}

/// Evaluate a λ-matrix at one numeric λ over bound fields: per-grid-point 2x2
/// matrices.
pub fn eval_lambda_matrix(
    m: &LambdaMatrix,
    alph: &Alphabet,
    binding: &FieldBinding,
    lambda: Complex64,
    scheme: DerivScheme,
) -> Result<Vec<Mat2>, EvalError> {
    let grid = binding.common_grid()?;
    let mut entries: [[Vec<Complex64>; 2]; 2] = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            let lp = m.entry(i, j);
            let mut acc = vec![Complex64::new(0.0, 0.0); grid.n];
            if let Some((lo, hi)) = lp.degree_range() {
                for d in lo..=hi {
                    let c = lp.coeff(d);
                    if c.is_zero() {
                        continue;
                    }
                    let vals = dp_evaluate(&c, alph, binding, scheme)?;
                    let zp = lambda.powi(d);
                    for (a, v) in acc.iter_mut().zip(&vals.values) {
                        *a += v * zp;
                    }
                }
            }
            entries[i][j] = acc;
        }
    }
    Ok((0..grid.n)
        .map(|k| Mat2::new(entries[0][0][k], entries[0][1][k], entries[1][0][k], entries[1][1][k]))
        .collect())
}

pub(crate) fn rational_to_f64(c: &super::poly::Coeff) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::Alphabet;
    use crate::grid::Boundary;

    #[test]
    fn evaluate_ux_on_sine_spectral() {
        let mut alph = Alphabet::new();
        let u = alph.register("u");
        let grid = Grid1D::periodic(0.0, 2.0 * std::f64::consts::PI, 128).unwrap();
        let mut b = FieldBinding::new();
        b.bind(u, ScalarField::from_real_fn(grid, f64::sin));
        let ux = dp_evaluate(&DiffPoly::jet(u, 1), &alph, &b, DerivScheme::Spectral).unwrap();
        for (i, x) in grid.xs().enumerate() {
            assert!((ux.values[i].re - x.cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn evaluate_zero_poly_is_zero_field() {
        let mut alph = Alphabet::new();
        let u = alph.register("u");
        let grid = Grid1D::periodic(-1.0, 1.0, 16).unwrap();
        let mut b = FieldBinding::new();
        b.bind(u, ScalarField::from_real_fn(grid, |_| 1.0));
        let z = dp_evaluate(&DiffPoly::zero(), &alph, &b, DerivScheme::Fd4).unwrap();
        assert_eq!(z.linf(), 0.0);
    }

    #[test]
    fn evaluate_product_of_sech() {
        let mut alph = Alphabet::new();
        let u = alph.register("u");
        let uh = alph.register("uh");
        let grid = Grid1D::decaying(-20.0, 20.0, 401).unwrap();
        let sech = ScalarField::from_real_fn(grid, |x| 1.0 / x.cosh());
        let mut b = FieldBinding::new();
        b.bind(u, sech.clone()).bind(uh, sech);
        let p = &DiffPoly::jet(u, 0) * &DiffPoly::jet(uh, 0);
        let prod = dp_evaluate(&p, &alph, &b, DerivScheme::Fd4).unwrap();
        for (i, x) in grid.xs().enumerate() {
            let expect = 1.0 / x.cosh().powi(2);
            assert!((prod.values[i].re - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn unbound_and_mismatch_errors() {
        let mut alph = Alphabet::new();
        let u = alph.register("u");
        let v = alph.register("v");
        let grid = Grid1D::periodic(0.0, 1.0, 16).unwrap();
        let mut b = FieldBinding::new();
        b.bind(u, ScalarField::zeros(grid));
        let p = DiffPoly::jet(v, 0);
        assert!(matches!(
            dp_evaluate(&p, &alph, &b, DerivScheme::Fd4),
            Err(EvalError::UnboundField(name, 0)) if name == "v"
        ));
        let grid2 = Grid1D::periodic(0.0, 2.0, 16).unwrap();
        b.bind(v, ScalarField::zeros(grid2));
        assert!(matches!(dp_evaluate(&p, &alph, &b, DerivScheme::Fd4), Err(EvalError::GridMismatch)));
        let _ = Boundary::Periodic;
    }
}
