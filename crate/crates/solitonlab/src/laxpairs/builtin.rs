use std::str::FromStr;

use thiserror::Error;

use crate::diffpoly::{q, qi, Alphabet, Coeff, DiffPoly, EomRule, LambdaMatrix, LambdaPoly};

/// A registered matrix Lax pair: U, V with Laurent spectral dependence over a
/// session alphabet, plus the equations of motion that close the
/// zero-curvature condition. For relativistic pairs the spectral symbol
/// stands for e^λ; for AKNS-type pairs it is λ itself.
#[derive(Clone, Debug)]
pub struct MatrixLaxPair {
    pub name: String,
    pub alphabet: Alphabet,
    pub u: LambdaMatrix,
    pub v: LambdaMatrix,
    pub eom: Vec<EomRule>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Model {
    Nls,
    SinhGordon,
    Liouville,
    Free,
    Akns,
}

#[derive(Error, Debug, Clone, PartialEq)]
#[error("unknown model `{0}`; expected nls|sinh_gordon|liouville|free|akns")]
pub struct UnknownModel(pub String);

impl FromStr for Model {
    type Err = UnknownModel;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nls" => Ok(Model::Nls),
            "sinh_gordon" => Ok(Model::SinhGordon),
            "liouville" => Ok(Model::Liouville),
            "free" => Ok(Model::Free),
            "akns" => Ok(Model::Akns),
            other => Err(UnknownModel(other.to_string())),
        }
    }
}

pub fn builtin_lax(model: Model) -> MatrixLaxPair {
    match model {
        Model::Nls => nls_pair(),
        Model::SinhGordon => sinh_gordon_pair(),
        Model::Liouville => liouville_pair(qi(1)),
        Model::Free => free_pair(),
        Model::Akns => akns_pair(),
    }
}

fn nls_pair() -> MatrixLaxPair {
    let mut alphabet = Alphabet::new();
    let u = alphabet.register("u");
    let uh = alphabet.register("uh");
    let u0 = DiffPoly::jet(u, 0);
    let uh0 = DiffPoly::jet(uh, 0);
    let big_u = LambdaMatrix::new(
        LambdaPoly::monomial(1, DiffPoly::constant(q(1, 2))),
        LambdaPoly::from_poly(uh0.clone()),
        LambdaPoly::from_poly(u0.clone()),
        LambdaPoly::monomial(1, DiffPoly::constant(q(-1, 2))),
    );
    let uu = &uh0 * &u0;
    let big_v = LambdaMatrix::new(
        LambdaPoly::monomial(2, DiffPoly::constant(q(1, 2))).add(&LambdaPoly::from_poly(-&uu)),
        LambdaPoly::monomial(1, uh0.clone()).add(&LambdaPoly::from_poly(DiffPoly::jet(uh, 1))),
        LambdaPoly::monomial(1, u0.clone()).add(&LambdaPoly::from_poly(-&DiffPoly::jet(u, 1))),
        LambdaPoly::monomial(2, DiffPoly::constant(q(-1, 2))).add(&LambdaPoly::from_poly(uu.clone())),
    );
    let eom = nls_type_eom(&alphabet);
    MatrixLaxPair { name: "nls".into(), alphabet, u: big_u, v: big_v, eom }
}

/// u_t = −u_xx + 2ûu², û_t = û_xx − 2uû².
fn nls_type_eom(alphabet: &Alphabet) -> Vec<EomRule> {
    let u = alphabet.id("u").unwrap();
    let uh = alphabet.id("uh").unwrap();
    let u0 = DiffPoly::jet(u, 0);
    let uh0 = DiffPoly::jet(uh, 0);
    vec![
        EomRule {
            field: u,
            t_order: 1,
            rhs: &(-&DiffPoly::jet(u, 2)) + &(&uh0 * &u0.pow(2)).scale(&qi(2)),
        },
        EomRule {
            field: uh,
            t_order: 1,
            rhs: &DiffPoly::jet(uh, 2) - &(&u0 * &uh0.pow(2)).scale(&qi(2)),
        },
    ]
}

fn sinh_gordon_pair() -> MatrixLaxPair {
    let mut alphabet = Alphabet::new();
    let w = alphabet.register("w");
    let ep = alphabet.register_exp("ew", w, 1);
    let em = alphabet.register_exp("emw", w, -1);
    let epp = DiffPoly::jet(ep, 0);
    let emm = DiffPoly::jet(em, 0);
    let wt = DiffPoly::jet_t(w, 1, 0);
    let wx = DiffPoly::jet(w, 1);
    // sinh(λ±w)/2 and cosh(λ±w)/2 over the symbol z = e^λ
    let sinh_plus = LambdaPoly::monomial(1, epp.scale(&q(1, 4))).add(&LambdaPoly::monomial(-1, emm.scale(&q(-1, 4))));
    let sinh_minus = LambdaPoly::monomial(1, emm.scale(&q(1, 4))).add(&LambdaPoly::monomial(-1, epp.scale(&q(-1, 4))));
    let cosh_plus = LambdaPoly::monomial(1, epp.scale(&q(1, 4))).add(&LambdaPoly::monomial(-1, emm.scale(&q(1, 4))));
    let cosh_minus = LambdaPoly::monomial(1, emm.scale(&q(1, 4))).add(&LambdaPoly::monomial(-1, epp.scale(&q(1, 4))));
    let big_u = LambdaMatrix::new(
        LambdaPoly::from_poly(wt.scale(&q(-1, 2))),
        sinh_plus,
        sinh_minus,
        LambdaPoly::from_poly(wt.scale(&q(1, 2))),
    );
    let big_v = LambdaMatrix::new(
        LambdaPoly::from_poly(wx.scale(&q(-1, 2))),
        cosh_plus,
        cosh_minus,
        LambdaPoly::from_poly(wx.scale(&q(1, 2))),
    );
    // w_tt = w_xx + (1/2) sinh 2w = w_xx + (e^{2w} − e^{−2w})/4
    let eom = vec![EomRule {
        field: w,
        t_order: 2,
        rhs: &DiffPoly::jet(w, 2) + &(&epp.pow(2).scale(&q(1, 4)) - &emm.pow(2).scale(&q(1, 4))),
    }];
    MatrixLaxPair { name: "sinh_gordon".into(), alphabet, u: big_u, v: big_v, eom }
}

/// Liouville pair with coupling `c`. The V₁₂ entry carries the sign forced by
/// the zero-curvature condition and the Darboux t-relation (the printed form
/// with both V off-diagonal signs positive does not close).
pub fn liouville_pair(c: Coeff) -> MatrixLaxPair {
    let mut alphabet = Alphabet::new();
    let p = alphabet.register("p");
    let e = alphabet.register_exp("ephi", p, 1);
    let e0 = DiffPoly::jet(e, 0);
    let pt = DiffPoly::jet_t(p, 1, 0);
    let px = DiffPoly::jet(p, 1);
    let mc = -c.clone();
    let big_u = LambdaMatrix::new(
        LambdaPoly::from_poly(pt.scale(&q(-1, 2))),
        LambdaPoly::monomial(-1, e0.scale(&mc)),
        LambdaPoly::monomial(1, e0.scale(&mc)),
        LambdaPoly::from_poly(pt.scale(&q(1, 2))),
    );
    let big_v = LambdaMatrix::new(
        LambdaPoly::from_poly(px.scale(&q(-1, 2))),
        LambdaPoly::monomial(-1, e0.scale(&mc)),
        LambdaPoly::monomial(1, e0.scale(&c)),
        LambdaPoly::from_poly(px.scale(&q(1, 2))),
    );
    // p_tt = p_xx − 4c² e^{2p}
    let c2 = &c * &c;
    let eom = vec![EomRule {
        field: p,
        t_order: 2,
        rhs: &DiffPoly::jet(p, 2) - &e0.pow(2).scale(&(c2 * qi(4))),
    }];
    MatrixLaxPair { name: "liouville".into(), alphabet, u: big_u, v: big_v, eom }
}

fn free_pair() -> MatrixLaxPair {
    let mut alphabet = Alphabet::new();
    let f = alphabet.register("phi");
    let big_u = LambdaMatrix::scalar(LambdaPoly::from_poly(DiffPoly::jet_t(f, 1, 0).scale(&q(-1, 2))));
    let big_v = LambdaMatrix::scalar(LambdaPoly::from_poly(DiffPoly::jet(f, 1).scale(&q(-1, 2))));
    let eom = vec![EomRule { field: f, t_order: 2, rhs: DiffPoly::jet(f, 2) }];
    MatrixLaxPair { name: "free".into(), alphabet, u: big_u, v: big_v, eom }
}

/// AKNS third flow: (U, V⁽³⁾) from the dressing hierarchy; with û = u this is
/// the mKdV Lax pair.
fn akns_pair() -> MatrixLaxPair {
    let vs = super::hierarchy::akns_hierarchy(3);
    let v3 = vs.into_iter().nth(3).unwrap();
    let mut alphabet = Alphabet::new();
    let u = alphabet.register("u");
    let uh = alphabet.register("uh");
    let big_u = LambdaMatrix::new(
        LambdaPoly::monomial(1, DiffPoly::constant(q(1, 2))),
        LambdaPoly::from_poly(DiffPoly::jet(uh, 0)),
        LambdaPoly::from_poly(DiffPoly::jet(u, 0)),
        LambdaPoly::monomial(1, DiffPoly::constant(q(-1, 2))),
    );
    let (u_rhs, uh_rhs) = super::hierarchy::akns_flow_eom(3);
    let eom = vec![
        EomRule { field: u, t_order: 1, rhs: u_rhs },
        EomRule { field: uh, t_order: 1, rhs: uh_rhs },
    ];
    MatrixLaxPair { name: "akns".into(), alphabet, u: big_u, v: v3, eom }
}
