use num_complex::Complex64;

use crate::grid::ScalarField;
use crate::numeric::Mat2;

/// Path-ordered exponential across the sampled interval: ordered product over
/// cells of the degree-4 truncated exponential of U·dx, the cell value of U
/// being the average of its endpoint samples. Samples run left to right; the
/// leftmost cell is the rightmost factor.
pub fn continuous_monodromy(u_samples: &[Mat2], dx: f64) -> Mat2 {
    assert!(u_samples.len() >= 2, "need at least one cell");
    let mut t = Mat2::identity();
    let half_dx = Complex64::new(0.5 * dx, 0.0);
    for w in u_samples.windows(2) {
        let cell = w[0].add(&w[1]).scale(half_dx);
        t = cell.exp4().mul(&t);
    }
    t
}

/// NLS-type spatial Lax matrix U = [[λ/2, û], [u, −λ/2]] sampled per point.
pub fn nls_u_samples(u: &ScalarField, uh: &ScalarField, lambda: Complex64) -> Vec<Mat2> {
    assert_eq!(u.grid, uh.grid, "fields must share a grid");
    let half = lambda * 0.5;
    u.values
        .iter()
        .zip(&uh.values)
        .map(|(&uv, &uhv)| Mat2::new(half, uhv, uv, -half))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;

    #[test]
    fn zero_u_gives_identity() {
        let samples = vec![Mat2::zero(); 64];
        let t = continuous_monodromy(&samples, 0.1);
        assert!(t.sub(&Mat2::identity()).max_abs() < 1e-15);
    }

    #[test]
    fn constant_diagonal_exponentiates() {
        // U = diag(λ/2, −λ/2) over [−L, L] → diag(e^{λL}, e^{−λL})
        let lam = Complex64::new(1.0, 0.0);
        let l = 5.0;
        let n = 8001;
        let dx = 2.0 * l / (n - 1) as f64;
        let samples = vec![Mat2::new(lam * 0.5, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), -lam * 0.5); n];
        let t = continuous_monodromy(&samples, dx);
        let expect = (lam * l).exp();
        assert!((t.a - expect).norm() / expect.norm() < 1e-10, "got {} want {}", t.a, expect);
        assert!((t.d - (-lam * l).exp()).norm() / (-lam * l).exp().norm() < 1e-10);
        assert!(t.b.norm() < 1e-14 && t.c.norm() < 1e-14);
    }

    #[test]
    fn sech_potential_monodromy_converges_at_second_order() {
        let lam = Complex64::new(1.0, 0.0);
        let make = |n: usize| {
            let grid = Grid1D::decaying(-15.0, 15.0, n).unwrap();
            let u = ScalarField::from_real_fn(grid, |x| 0.8 / x.cosh());
            let uh = ScalarField::from_real_fn(grid, |x| -0.8 / x.cosh());
            let s = nls_u_samples(&u, &uh, lam);
            continuous_monodromy(&s, grid.dx).trace()
        };
        let t1 = make(10_000);
        let t2 = make(20_000);
        let t4 = make(40_000);
        let ratio = (t1 - t2).norm() / (t2 - t4).norm();
        assert!((3.2..4.8).contains(&ratio), "refinement ratio {ratio}");
        assert!((t1 - t4).norm() / t4.norm() < 1e-4);
    }
}
