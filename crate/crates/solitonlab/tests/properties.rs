//! Property tests for the symbolic substrate: ring laws, the derivation
//! property, antisymmetry of commutators, and the evaluation/derivative
//! consistency of sampled fields.

use proptest::prelude::*;

use solitonlab::diffpoly::{dp_evaluate, q, Alphabet, DiffOperator, DiffPoly, FieldBinding, FieldId, JetVar};
use solitonlab::grid::{DerivScheme, Grid1D, ScalarField};

fn two_field_alphabet() -> (Alphabet, FieldId, FieldId) {
    let mut a = Alphabet::new();
    let u = a.register("u");
    let uh = a.register("uh");
    (a, u, uh)
}

/// Small random differential polynomials over {u, û} with jets to order 2,
/// up to 4 terms, small rational coefficients.
fn arb_poly() -> impl Strategy<Value = DiffPoly> {
    let term = (
        prop::collection::vec((0..2u8, 0..3u8, 1..3u32), 0..3),
        -6i64..7i64,
        1..4i64,
    );
    prop::collection::vec(term, 0..4).prop_map(|terms| {
        let (_, u, uh) = two_field_alphabet();
        let mut p = DiffPoly::zero();
        for (vars, num, den) in terms {
            if num == 0 {
                continue;
            }
            let mut mono = DiffPoly::constant(q(num, den));
            for (f, x_order, pow) in vars {
                let field = if f == 0 { u } else { uh };
                mono = &mono * &DiffPoly::var(JetVar::new(field, 0, x_order)).pow(pow);
            }
            p = &p + &mono;
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        // associativity and commutativity of the product, distributivity
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn total_derivative_is_a_derivation(a in arb_poly(), b in arb_poly()) {
        let (alph, _, _) = two_field_alphabet();
        let lhs = (&a * &b).dx(&alph);
        let rhs = &(&a.dx(&alph) * &b) + &(&a * &b.dx(&alph));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn operator_commutator_antisymmetry(a in arb_poly(), b in arb_poly()) {
        let (alph, _, _) = two_field_alphabet();
        let op_a = DiffOperator::from_coeffs(vec![a.clone(), b.clone()]);
        let op_b = DiffOperator::dx_pow(2, q(1, 2)).add(&DiffOperator::mult(b));
        let ab = op_a.commutator(&op_b, &alph);
        let ba = op_b.commutator(&op_a, &alph);
        prop_assert_eq!(ab, ba.neg());
    }

    #[test]
    fn evaluation_commutes_with_derivation(seed in 0u64..1000) {
        // eval(∂ₓ p) ≈ D_spectral(eval p) on a resolved periodic field
        let (alph, u, uh) = two_field_alphabet();
        let grid = Grid1D::periodic(0.0, 2.0 * std::f64::consts::PI, 128).unwrap();
        let a1 = 0.3 + (seed % 7) as f64 * 0.1;
        let a2 = 0.2 + (seed % 5) as f64 * 0.05;
        let mut binding = FieldBinding::new();
        binding.bind(u, ScalarField::from_real_fn(grid, |x| a1 * x.sin()));
        binding.bind(uh, ScalarField::from_real_fn(grid, |x| a2 * (2.0 * x).cos()));
        let p = &(&DiffPoly::jet(u, 0) * &DiffPoly::jet(uh, 0)) + &DiffPoly::jet(u, 1).pow(2);
        let lhs = dp_evaluate(&p.dx(&alph), &alph, &binding, DerivScheme::Spectral).unwrap();
        let rhs = dp_evaluate(&p, &alph, &binding, DerivScheme::Spectral).unwrap()
            .derivative(1, DerivScheme::Spectral)
            .unwrap();
        let diff = lhs.zip(&rhs, |x, y| x - y).unwrap().linf();
        prop_assert!(diff < 1e-8, "diff {}", diff);
    }
}
