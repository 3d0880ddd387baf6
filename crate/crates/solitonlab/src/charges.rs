//! Conserved densities from the three charge-generating recursions
//! (Gardner, Γ-Riccati, AKNS W/Z) and their numeric integration.

use num_complex::Complex64;
use thiserror::Error;

use crate::diffpoly::{dp_evaluate, Alphabet, DiffPoly, EvalError, FieldBinding};
use crate::grid::{Boundary, DerivScheme, Grid1D, ScalarField};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DensityScheme {
    Gardner,
    Gamma,
    AknsZ,
}

/// Symbolic densities indexed from a scheme-dependent base.
#[derive(Clone, Debug)]
pub struct DensitySequence {
    pub scheme: DensityScheme,
    pub base_index: usize,
    pub densities: Vec<DiffPoly>,
    pub alphabet: Alphabet,
}

impl DensitySequence {
    /// Density at the scheme's index `n` (Gardner: n ≥ 0, Γ/Z: n ≥ 1).
    pub fn density(&self, n: usize) -> &DiffPoly {
        &self.densities[n - self.base_index]
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.base_index..self.base_index + self.densities.len()
    }
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ChargeError {
    #[error("decaying field exceeds 1e-10 at a grid edge (|edge| = {0:.3e})")]
    BoundaryViolation(f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Gardner densities w₀..w_{n_max}: w₀ = u,
/// wₙ = −∂ₓw_{n−1} − Σ_{i+j=n−2} wᵢwⱼ.
pub fn gardner_densities(n_max: usize) -> DensitySequence {
    let mut alphabet = Alphabet::new();
    let u = alphabet.register("u");
    let mut densities: Vec<DiffPoly> = vec![DiffPoly::jet(u, 0)];
    for n in 1..=n_max {
        let mut w = -&densities[n - 1].dx(&alphabet);
        if n >= 2 {
            for i in 0..=n - 2 {
                let j = n - 2 - i;
                w = &w - &(&densities[i] * &densities[j]);
            }
        }
        densities.push(w);
    }
    DensitySequence { scheme: DensityScheme::Gardner, base_index: 0, densities, alphabet }
}

/// Γ-Riccati densities Γ⁽¹⁾..Γ⁽ⁿ⁾ over {u, û}:
/// Γ⁽¹⁾ = u, Γ⁽ᵏ⁺¹⁾ = −∂ₓΓ⁽ᵏ⁾ − Σ_{l=1}^{k−1} Γ⁽ˡ⁾ û Γ⁽ᵏ⁻ˡ⁾.
pub fn riccati_gamma(n_max: usize) -> DensitySequence {
    assert!(n_max >= 1);
    let mut alphabet = Alphabet::new();
    let u = alphabet.register("u");
    let uh = alphabet.register("uh");
    let uh0 = DiffPoly::jet(uh, 0);
    let mut densities: Vec<DiffPoly> = vec![DiffPoly::jet(u, 0)];
    for k in 1..n_max {
        let mut g = -&densities[k - 1].dx(&alphabet);
        for l in 1..k {
            let prod = &(&densities[l - 1] * &uh0) * &densities[k - l - 1];
            g = &g - &prod;
        }
        densities.push(g);
    }
    DensitySequence { scheme: DensityScheme::Gamma, base_index: 1, densities, alphabet }
}

/// 2x2 matrix of differential polynomials (λ-independent), used for the AKNS
/// W-coefficients.
pub type PolyMat2 = [[DiffPoly; 2]; 2];

/// Output of the AKNS W/Z recursion.
pub struct AknsWz {
    /// W⁽¹⁾..W⁽ⁿ⁾ (anti-diagonal matrices).
    pub w: Vec<PolyMat2>,
    /// Z⁽ᵏ⁾ (1,1)-integrands, i.e. the charge densities of (integrals1).
    pub z_integrands: DensitySequence,
    /// Z⁽ᵏ⁾ (2,2)-integrands.
    pub z_diag22: Vec<DiffPoly>,
}

/// AKNS recursion for the monodromy decomposition: W⁽¹⁾σ = U_A,
/// W⁽ⁿ⁺¹⁾σ = −∂ₓW⁽ⁿ⁾ − Σ_{m=1}^{n−1} W⁽ᵐ⁾ U_A W⁽ⁿ⁻ᵐ⁾;
/// Z-integrands are the diagonal of U_A W⁽ⁿ⁾.
pub fn akns_wz(n_max: usize) -> AknsWz {
    assert!(n_max >= 1);
    let mut alphabet = Alphabet::new();
    let u = alphabet.register("u");
    let uh = alphabet.register("uh");
    let u0 = DiffPoly::jet(u, 0);
    let uh0 = DiffPoly::jet(uh, 0);
    let zero = DiffPoly::zero;
    let u_a: PolyMat2 = [[zero(), uh0], [u0, zero()]];

    let matmul = |a: &PolyMat2, b: &PolyMat2| -> PolyMat2 {
        let mut out: PolyMat2 = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
            }
        }
        out
    };
    let sub = |a: &PolyMat2, b: &PolyMat2| -> PolyMat2 {
        let mut out: PolyMat2 = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = &a[i][j] - &b[i][j];
            }
        }
        out
    };
    // right-multiplication by σ⁻¹ = σ = diag(1, -1)
    let mul_sigma = |a: &PolyMat2| -> PolyMat2 {
        [
            [a[0][0].clone(), -&a[0][1]],
            [a[1][0].clone(), -&a[1][1]],
        ]
    };
    let dxm = |a: &PolyMat2, alph: &Alphabet| -> PolyMat2 {
        [
            [a[0][0].dx(alph), a[0][1].dx(alph)],
            [a[1][0].dx(alph), a[1][1].dx(alph)],
        ]
    };

    let mut w: Vec<PolyMat2> = vec![mul_sigma(&u_a)]; // W⁽¹⁾ = U_A σ
    for n in 1..n_max {
        // rhs = −∂ₓW⁽ⁿ⁾ − Σ_{m=1}^{n−1} W⁽ᵐ⁾ U_A W⁽ⁿ⁻ᵐ⁾, then W⁽ⁿ⁺¹⁾ = rhs·σ
        let mut rhs = sub(&Default::default(), &dxm(&w[n - 1], &alphabet));
        for m in 1..n {
            let prod = matmul(&matmul(&w[m - 1], &u_a), &w[n - m - 1]);
            rhs = sub(&rhs, &prod);
        }
        w.push(mul_sigma(&rhs));
    }

    let mut z11 = Vec::with_capacity(n_max);
    let mut z22 = Vec::with_capacity(n_max);
    for wn in &w {
        let prod = matmul(&u_a, wn);
        z11.push(prod[0][0].clone());
        z22.push(prod[1][1].clone());
    }
    AknsWz {
        w,
        z_integrands: DensitySequence {
            scheme: DensityScheme::AknsZ,
            base_index: 1,
            densities: z11,
            alphabet,
        },
        z_diag22: z22,
    }
}

/// How the second AKNS field û relates to u when evaluating numerically.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AknsReduction {
    /// û = u* (non-linear Schrödinger)
    Conjugate,
    /// û = u (mKdV / sine-Gordon)
    Equal,
    /// û supplied independently (KdV-type)
    Independent,
}

pub fn uhat_field(u: &ScalarField, reduction: AknsReduction, independent: Option<&ScalarField>) -> ScalarField {
    match reduction {
        AknsReduction::Conjugate => u.map(|v| v.conj()),
        AknsReduction::Equal => u.clone(),
        AknsReduction::Independent => independent.expect("independent û required").clone(),
    }
}

/// Quadrature of a density over its grid: trapezoid on decaying grids (with a
/// decay check at both edges), rectangle rule on periodic grids.
pub fn integrate_density(
    d: &DiffPoly,
    alph: &Alphabet,
    binding: &FieldBinding,
    scheme: DerivScheme,
) -> Result<Complex64, ChargeError> {
    let grid = binding.common_grid()?;
    if grid.boundary == Boundary::Decaying {
        let worst = binding_edge_magnitude(binding, grid);
        if worst >= 1e-10 {
            return Err(ChargeError::BoundaryViolation(worst));
        }
    }
    let vals = dp_evaluate(d, alph, binding, scheme)?;
    Ok(vals.integrate())
}

fn binding_edge_magnitude(binding: &FieldBinding, grid: Grid1D) -> f64 {
    let mut worst: f64 = 0.0;
    for f in binding.fields() {
        worst = worst.max(f.values[0].norm());
        worst = worst.max(f.values[grid.n - 1].norm());
    }
    worst
}

/// KdV charge weight grading (u ↦ 2, ∂ₓ ↦ 1) used by the homogeneity check.
pub fn density_is_weight_homogeneous(d: &DiffPoly, weight: u32) -> bool {
    d.terms().all(|(m, _)| m.weight(2) == weight)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gardner_first_four_match_printed_densities() {
        let seq = gardner_densities(3);
        let a = &seq.alphabet;
        assert_eq!(seq.density(0).render(a), "u");
        assert_eq!(seq.density(1).render(a), "-u[1]");
        assert_eq!(seq.density(2).render(a), "-u^2 + u[2]");
        assert_eq!(seq.density(3).render(a), "4*u*u[1] - u[3]");
    }

    #[test]
    fn gamma_first_three_match_printed_densities() {
        let seq = riccati_gamma(3);
        let a = &seq.alphabet;
        assert_eq!(seq.density(1).render(a), "u");
        assert_eq!(seq.density(2).render(a), "-u[1]");
        assert_eq!(seq.density(3).render(a), "-u^2*uh + u[2]");
    }

    #[test]
    fn akns_w_matrices_match_printed_entries() {
        let wz = akns_wz(3);
        let a = &wz.z_integrands.alphabet;
        // W⁽¹⁾ = (0, −û; u, 0)
        assert_eq!(wz.w[0][0][1].render(a), "-uh");
        assert_eq!(wz.w[0][1][0].render(a), "u");
        assert!(wz.w[0][0][0].is_zero() && wz.w[0][1][1].is_zero());
        // W⁽²⁾ = (0, −û_x; −u_x, 0)
        assert_eq!(wz.w[1][0][1].render(a), "-uh[1]");
        assert_eq!(wz.w[1][1][0].render(a), "-u[1]");
        // W⁽³⁾ = (0, −û_xx + uû²; u_xx − ûu², 0)
        assert_eq!(wz.w[2][0][1].render(a), "u*uh^2 - uh[2]");
        assert_eq!(wz.w[2][1][0].render(a), "-u^2*uh + u[2]");
    }

    #[test]
    fn akns_z_integrands_match_gamma_duality() {
        let wz = akns_wz(5);
        let gam = riccati_gamma(5);
        let a = &wz.z_integrands.alphabet;
        let uh = a.id("uh").unwrap();
        let uh0 = DiffPoly::jet(uh, 0);
        // Z⁽ᵏ⁾ (1,1)-integrand = û·Γ⁽ᵏ⁾ symbolically (Γ is the analogue of W₂₁)
        for k in 1..=5 {
            let lhs = wz.z_integrands.density(k);
            let rhs = &uh0 * gam.density(k);
            assert_eq!(lhs, &rhs, "duality fails at k={k}");
        }
        // Z⁽³⁾ (1,1) = û u_xx − (û u)²
        assert_eq!(wz.z_integrands.density(3).render(a), "-u^2*uh^2 + u[2]*uh");
    }

    #[test]
    fn gardner_weight_grading() {
        let seq = gardner_densities(8);
        for n in 0..=8 {
            assert!(density_is_weight_homogeneous(seq.density(n), n as u32 + 2), "w_{n} not homogeneous");
        }
    }

    #[test]
    fn integrate_density_boundary_violation() {
        let seq = gardner_densities(0);
        let a = &seq.alphabet;
        let u = a.id("u").unwrap();
        let grid = Grid1D::decaying(-5.0, 5.0, 64).unwrap();
        let mut b = FieldBinding::new();
        b.bind(u, ScalarField::from_real_fn(grid, |x| 1.0 / x.cosh()));
        let res = integrate_density(seq.density(0), a, &b, DerivScheme::Fd4);
        assert!(matches!(res, Err(ChargeError::BoundaryViolation(_))));
    }

    #[test]
    fn integrate_density_zero_and_refined_oracle() {
        let seq = gardner_densities(0);
        let a = &seq.alphabet;
        let u = a.id("u").unwrap();
        let grid = Grid1D::decaying(-30.0, 30.0, 1201).unwrap();
        let mut b = FieldBinding::new();
        b.bind(u, ScalarField::from_real_fn(grid, |x| 1.0 / x.cosh()));
        // zero density integrates to zero
        let z = integrate_density(&DiffPoly::zero(), a, &b, DerivScheme::Fd4).unwrap();
        assert_eq!(z, Complex64::new(0.0, 0.0));
        // ∫ u dx against a refined-grid quadrature oracle
        let coarse = integrate_density(seq.density(0), a, &b, DerivScheme::Fd4).unwrap();
        let fine_grid = Grid1D::decaying(-30.0, 30.0, 9601).unwrap();
        let mut bf = FieldBinding::new();
        bf.bind(u, ScalarField::from_real_fn(fine_grid, |x| 1.0 / x.cosh()));
        let fine = integrate_density(seq.density(0), a, &bf, DerivScheme::Fd4).unwrap();
        assert!((coarse - fine).norm() / fine.norm() < 1e-8);
    }
}
