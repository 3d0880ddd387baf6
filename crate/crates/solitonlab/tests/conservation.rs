//! Charge conservation along numerically evolved flows: low Gardner charges
//! along KdV, and the first three AKNS integrals along the literal (u, û)
//! pair evolution.

use num_complex::Complex64;
use solitonlab::charges::{akns_wz, gardner_densities, integrate_density};
use solitonlab::diffpoly::{DiffPoly, FieldBinding};
use solitonlab::grid::{DerivScheme, Grid1D, ScalarField};
use solitonlab::pde::{evolve, EquationId};
use solitonlab::solitons::{KdvSolitonSpec, NlsSechSoliton};

fn charge(d: &DiffPoly, alph: &solitonlab::diffpoly::Alphabet, b: &FieldBinding) -> Complex64 {
    integrate_density(d, alph, b, DerivScheme::Spectral).unwrap()
}

#[test]
fn gardner_charges_conserved_along_kdv_flow() {
    let grid = Grid1D::periodic(-40.0, 40.0, 512).unwrap();
    let spec = KdvSolitonSpec::new(1.0, 0.0, 1.0);
    let u0 = ScalarField::from_real_fn(grid, |x| spec.value(x, 0.0));
    let dt = 2e-4;
    let steps = 5000; // T = 1
    let traj = evolve(EquationId::Kdv, &[u0], dt, steps, steps).unwrap();

    let seq = gardner_densities(3);
    let u_id = seq.alphabet.id("u").unwrap();
    let bind = |f: &ScalarField| {
        let mut b = FieldBinding::new();
        b.bind(u_id, f.clone());
        b
    };
    let b0 = bind(&traj.states[0][0]);
    let b1 = bind(&traj.states.last().unwrap()[0]);

    // ∫u and ∫u² first
    let u0p = DiffPoly::jet(u_id, 0);
    let u2p = u0p.pow(2);
    for (name, d) in [("int u", &u0p), ("int u^2", &u2p)] {
        let a = charge(d, &seq.alphabet, &b0);
        let b = charge(d, &seq.alphabet, &b1);
        let scale = a.norm().max(1.0);
        assert!((a - b).norm() / scale < 1e-5, "{name} drift {} -> {}", a, b);
    }
    // Gardner charges n ≤ 3; odd densities integrate to ~0, so the drift is
    // measured against the density's L¹ size
    for n in 0..=3usize {
        let d = seq.density(n);
        let a = charge(d, &seq.alphabet, &b0);
        let b = charge(d, &seq.alphabet, &b1);
        let l1 = solitonlab::diffpoly::dp_evaluate(d, &seq.alphabet, &b0, DerivScheme::Spectral)
            .unwrap()
            .map(|v| Complex64::new(v.norm(), 0.0))
            .integrate()
            .re;
        let scale = a.norm().max(l1).max(1e-12);
        assert!((a - b).norm() / scale < 1e-5, "w_{n} drift {} -> {}", a, b);
    }
}

#[test]
fn akns_integrals_conserved_along_pair_evolution() {
    // same resolution/horizon regime as the monodromy checks: wide soliton
    // so the anti-diffusive direction stays quiet over T = 0.1
    let grid = Grid1D::periodic(-30.0, 30.0, 128).unwrap();
    let sol = NlsSechSoliton { k: 0.6, chi: 0.0 };
    let (u0, uh0) = sol.fields(0.0, grid);
    let dt = 5e-4;
    let steps = 200; // T = 0.1
    let traj = evolve(EquationId::NlsPair, &[u0, uh0], dt, steps, steps).unwrap();

    let wz = akns_wz(3);
    let alph = &wz.z_integrands.alphabet;
    let u_id = alph.id("u").unwrap();
    let uh_id = alph.id("uh").unwrap();
    let bind = |s: &[ScalarField]| {
        let mut b = FieldBinding::new();
        b.bind(u_id, s[0].clone());
        b.bind(uh_id, s[1].clone());
        b
    };
    let b0 = bind(&traj.states[0]);
    let b1 = bind(traj.states.last().unwrap());
    for k in 1..=3usize {
        let d = wz.z_integrands.density(k);
        let a = charge(d, alph, &b0);
        let b = charge(d, alph, &b1);
        let l1 = solitonlab::diffpoly::dp_evaluate(d, alph, &b0, DerivScheme::Spectral)
            .unwrap()
            .map(|v| Complex64::new(v.norm(), 0.0))
            .integrate()
            .re;
        let scale = a.norm().max(l1).max(1e-12);
        assert!((a - b).norm() / scale < 1e-4, "I({k}) drift {} -> {}", a, b);
    }
}
