use crate::charges::PolyMat2;
use crate::diffpoly::{q, Alphabet, DiffPoly, LambdaMatrix, LambdaPoly};

/// Builds the AKNS alphabet {u, û} used by the hierarchy.
fn akns_alphabet() -> Alphabet {
    let mut a = Alphabet::new();
    a.register("u");
    a.register("uh");
    a
}

fn u_a(alph: &Alphabet) -> PolyMat2 {
    let u = alph.id("u").unwrap();
    let uh = alph.id("uh").unwrap();
    [
        [DiffPoly::zero(), DiffPoly::jet(uh, 0)],
        [DiffPoly::jet(u, 0), DiffPoly::zero()],
    ]
}

fn matmul(a: &PolyMat2, b: &PolyMat2) -> PolyMat2 {
    let mut out: PolyMat2 = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        }
    }
    out
}

fn msub(a: &PolyMat2, b: &PolyMat2) -> PolyMat2 {
    let mut out: PolyMat2 = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = &a[i][j] - &b[i][j];
        }
    }
    out
}

fn commutator(a: &PolyMat2, b: &PolyMat2) -> PolyMat2 {
    msub(&matmul(a, b), &matmul(b, a))
}

fn dxm(a: &PolyMat2, alph: &Alphabet) -> PolyMat2 {
    [
        [a[0][0].dx(alph), a[0][1].dx(alph)],
        [a[1][0].dx(alph), a[1][1].dx(alph)],
    ]
}

/// Left-multiplication by σ = diag(1, −1).
fn sigma_mul(a: &PolyMat2) -> PolyMat2 {
    [
        [a[0][0].clone(), a[0][1].clone()],
        [-&a[1][0], -&a[1][1]],
    ]
}

/// The depth-j block of every dressed time component: starting from σ/2, each
/// step fixes the next anti-diagonal part from the zero-curvature order and
/// the next diagonal part by exact x-antidifferentiation of [U_A, a].
/// Returns (diagonal, anti-diagonal) pairs for depths 0..=depth.
fn hierarchy_blocks(depth: usize, alph: &Alphabet) -> Vec<(PolyMat2, PolyMat2)> {
    let ua = u_a(alph);
    let half = DiffPoly::constant(q(1, 2));
    let mhalf = DiffPoly::constant(q(-1, 2));
    let d0: PolyMat2 = [
        [half, DiffPoly::zero()],
        [DiffPoly::zero(), mhalf],
    ];
    let a0: PolyMat2 = Default::default();
    let mut blocks = vec![(d0, a0)];
    for _ in 0..depth {
        let (d_prev, a_prev) = blocks.last().unwrap();
        // anti-diagonal: σ a_next = ∂ₓ a_prev − [U_A, d_prev]
        let a_next = sigma_mul(&msub(&dxm(a_prev, alph), &commutator(&ua, d_prev)));
        // diagonal: ∂ₓ d_next = [U_A, a_next]
        let comm = commutator(&ua, &a_next);
        let d11 = comm[0][0]
            .x_antiderivative(alph)
            .expect("hierarchy diagonal must be a total derivative");
        let d22 = comm[1][1]
            .x_antiderivative(alph)
            .expect("hierarchy diagonal must be a total derivative");
        let d_next: PolyMat2 = [
            [d11, DiffPoly::zero()],
            [DiffPoly::zero(), d22],
        ];
        blocks.push((d_next, a_next));
    }
    blocks
}

/// Time components V⁽⁰⁾..V⁽ⁿ⁾ of the AKNS hierarchy: V⁽⁰⁾ = σ/2 and
/// V⁽ⁿ⁾ = λV⁽ⁿ⁻¹⁾ + w₀⁽ⁿ⁾, with each w₀⁽ⁿ⁾ fixed by order-by-order
/// cancellation of the zero-curvature residual.
pub fn akns_hierarchy(n_max: usize) -> Vec<LambdaMatrix> {
    let alph = akns_alphabet();
    let blocks = hierarchy_blocks(n_max, &alph);
    (0..=n_max)
        .map(|n| {
            let mut v = LambdaMatrix::zero();
            for (j, (d, a)) in blocks.iter().take(n + 1).enumerate() {
                let deg = (n - j) as i32;
                let mut m = LambdaMatrix::zero();
                for r in 0..2 {
                    for c in 0..2 {
                        let p = &d[r][c] + &a[r][c];
                        if !p.is_zero() {
                            m.e[r][c] = LambdaPoly::monomial(deg, p);
                        }
                    }
                }
                v = v.add(&m);
            }
            v
        })
        .collect()
}

/// Equations of motion of the n-th flow: ∂ₜU_A = ∂ₓv₀ − [U_A, v₀] where v₀
/// is the depth-n block. Returns (u_t rhs, û_t rhs).
pub fn akns_flow_eom(n: usize) -> (DiffPoly, DiffPoly) {
    let alph = akns_alphabet();
    let blocks = hierarchy_blocks(n, &alph);
    let (d, a) = &blocks[n];
    let v0: PolyMat2 = [
        [&d[0][0] + &a[0][0], &d[0][1] + &a[0][1]],
        [&d[1][0] + &a[1][0], &d[1][1] + &a[1][1]],
    ];
    let rhs = msub(&dxm(&v0, &alph), &commutator(&u_a(&alph), &v0));
    // the diagonal of the rhs must vanish by construction
    assert!(rhs[0][0].is_zero() && rhs[1][1].is_zero(), "flow rhs must be anti-diagonal");
    (rhs[1][0].clone(), rhs[0][1].clone())
}
