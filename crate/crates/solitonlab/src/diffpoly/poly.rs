use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Coeff = BigRational;

/// Index into a session [`Alphabet`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FieldId(pub u16);

/// How the total derivative acts on a field.
///
/// `Jet` fields follow the usual rule (raise the derivative order); `Exp`
/// fields represent exp(sign·base) and differentiate by the chain rule, so
/// their own jets never exceed order zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldRule {
    Jet,
    Exp { base: FieldId, sign: i8 },
}

#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    fields: Vec<(String, FieldRule)>,
}

impl Alphabet {
    pub fn new() -> Self {
        Alphabet::default()
    }

    pub fn register(&mut self, name: &str) -> FieldId {
        assert!(self.id(name).is_none(), "field {name} already registered");
        self.fields.push((name.to_string(), FieldRule::Jet));
        FieldId(self.fields.len() as u16 - 1)
    }

    /// Register a field standing for exp(sign·base).
    pub fn register_exp(&mut self, name: &str, base: FieldId, sign: i8) -> FieldId {
        assert!(self.id(name).is_none(), "field {name} already registered");
        assert!(sign == 1 || sign == -1);
        self.fields.push((name.to_string(), FieldRule::Exp { base, sign }));
        FieldId(self.fields.len() as u16 - 1)
    }

    pub fn id(&self, name: &str) -> Option<FieldId> {
        self.fields.iter().position(|(n, _)| n == name).map(|i| FieldId(i as u16))
    }

    pub fn name(&self, id: FieldId) -> &str {
        &self.fields[id.0 as usize].0
    }

    pub fn rule(&self, id: FieldId) -> FieldRule {
        self.fields[id.0 as usize].1
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }
}

/// A field symbol with t- and x-derivative orders.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct JetVar {
    pub field: FieldId,
    pub t_order: u8,
    pub x_order: u8,
}

impl JetVar {
    pub fn new(field: FieldId, t_order: u8, x_order: u8) -> Self {
        JetVar { field, t_order, x_order }
    }

    pub fn base(field: FieldId) -> Self {
        JetVar { field, t_order: 0, x_order: 0 }
    }

    fn raised(self, dir: Direction) -> Self {
        match dir {
            Direction::X => JetVar { x_order: self.x_order + 1, ..self },
            Direction::T => JetVar { t_order: self.t_order + 1, ..self },
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    X,
    T,
}

/// Product of jet variables with positive integer powers, kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial {
    factors: Vec<(JetVar, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: JetVar) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    pub fn from_factors(mut factors: Vec<(JetVar, u32)>) -> Self {
        factors.retain(|&(_, p)| p > 0);
        factors.sort();
        let mut merged: Vec<(JetVar, u32)> = Vec::with_capacity(factors.len());
        for (v, p) in factors {
            match merged.last_mut() {
                Some((lv, lp)) if *lv == v => *lp += p,
                _ => merged.push((v, p)),
            }
        }
        Monomial { factors: merged }
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.factors
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut f = self.factors.clone();
        f.extend_from_slice(&other.factors);
        Monomial::from_factors(f)
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|&(_, p)| p).sum()
    }

    /// Graded weight with each field counting `field_weight` and each x- or
    /// t-derivative counting 1.
    pub fn weight(&self, field_weight: u32) -> u32 {
        self.factors
            .iter()
            .map(|&(v, p)| p * (field_weight + v.x_order as u32 + v.t_order as u32))
            .sum()
    }

    /// Divide out one power of `v`, if present.
    fn without_one(&self, v: JetVar) -> Option<Monomial> {
        let idx = self.factors.iter().position(|&(w, _)| w == v)?;
        let mut f = self.factors.clone();
        if f[idx].1 == 1 {
            f.remove(idx);
        } else {
            f[idx].1 -= 1;
        }
        Some(Monomial { factors: f })
    }
}

/// Differential polynomial: exact rational combination of jet monomials.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Coeff>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn constant(c: Coeff) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn var(v: JetVar) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(Monomial::var(v), Coeff::one());
        p
    }

    pub fn jet(field: FieldId, x_order: u8) -> Self {
        Self::var(JetVar::new(field, 0, x_order))
    }

    pub fn jet_t(field: FieldId, t_order: u8, x_order: u8) -> Self {
        Self::var(JetVar::new(field, t_order, x_order))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Coeff) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> DiffPoly {
        let mut acc = DiffPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficient of the empty monomial.
    pub fn constant_term(&self) -> Coeff {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Total derivative along `dir`, honoring each field's rule.
    pub fn total_derivative(&self, dir: Direction, alph: &Alphabet) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (i, &(v, p)) in m.factors.iter().enumerate() {
                // Leibniz: c * p * v^(p-1) * dv * (other factors)
                let mut rest: Vec<(JetVar, u32)> = m.factors.clone();
                if p == 1 {
                    rest.remove(i);
                } else {
                    rest[i].1 -= 1;
                }
                let rest = Monomial::from_factors(rest);
                let dv = jetvar_derivative(v, dir, alph);
                let coeff = c * Coeff::from_integer(p.into());
                for (dm, dc) in &dv.terms {
                    out.add_term(rest.mul(dm), &coeff * dc);
                }
            }
        }
        out
    }

    pub fn dx(&self, alph: &Alphabet) -> DiffPoly {
        self.total_derivative(Direction::X, alph)
    }

    pub fn dt(&self, alph: &Alphabet) -> DiffPoly {
        self.total_derivative(Direction::T, alph)
    }

    /// Replace every jet of `field` by the matching derivative of `replacement`.
    pub fn substitute(&self, field: FieldId, replacement: &DiffPoly, alph: &Alphabet) -> DiffPoly {
        let mut cache: BTreeMap<(u8, u8), DiffPoly> = BTreeMap::new();
        cache.insert((0, 0), replacement.clone());
        let derived = |t: u8, x: u8, cache: &mut BTreeMap<(u8, u8), DiffPoly>| -> DiffPoly {
            if let Some(p) = cache.get(&(t, x)) {
                return p.clone();
            }
            let prev = if x > 0 {
                let p = cache.get(&(t, x - 1)).cloned();
                p.map(|p| p.dx(alph))
            } else {
                cache.get(&(t - 1, 0)).cloned().map(|p| p.dt(alph))
            };
            let p = match prev {
                Some(p) => p,
                None => {
                    // fill the chain bottom-up
                    let mut cur = cache.get(&(0, 0)).unwrap().clone();
                    for _ in 0..t {
                        cur = cur.dt(alph);
                    }
                    for _ in 0..x {
                        cur = cur.dx(alph);
                    }
                    cur
                }
            };
            cache.insert((t, x), p.clone());
            p
        };
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = DiffPoly::constant(c.clone());
            for &(v, p) in &m.factors {
                let factor = if v.field == field {
                    // make sure lower orders exist in the cache first
                    for t in 0..=v.t_order {
                        for x in 0..=v.x_order {
                            let _ = derived(t, x, &mut cache);
                        }
                    }
                    derived(v.t_order, v.x_order, &mut cache).pow(p)
                } else {
                    DiffPoly::var(v).pow(p)
                };
                acc = &acc * &factor;
            }
            out = &out + &acc;
        }
        out
    }

    /// Exact antiderivative in x: a polynomial `P` with `∂ₓP = self`, found by
    /// linear solving over candidate monomials (lowerings of the terms of
    /// `self`). Returns None when no differential-polynomial antiderivative
    /// exists in that span.
    pub fn x_antiderivative(&self, alph: &Alphabet) -> Option<DiffPoly> {
        if self.is_zero() {
            return Some(DiffPoly::zero());
        }
        // Candidate monomials: lower one x-derivative of one jet factor.
        let mut candidates: Vec<Monomial> = Vec::new();
        let push = |m: Monomial, list: &mut Vec<Monomial>| {
            if !list.contains(&m) {
                list.push(m);
            }
        };
        for m in self.terms.keys() {
            for &(v, _) in m.factors() {
                if v.x_order > 0 && matches!(alph.rule(v.field), FieldRule::Jet) {
                    let lowered = JetVar::new(v.field, v.t_order, v.x_order - 1);
                    if let Some(rest) = m.without_one(v) {
                        push(rest.mul(&Monomial::var(lowered)), &mut candidates);
                    }
                }
            }
        }
        if candidates.is_empty() {
            return None;
        }
        // Assemble Σ c_j ∂ₓ(M_j) = self as an exact linear system.
        let derivs: Vec<DiffPoly> = candidates
            .iter()
            .map(|m| {
                let mut p = DiffPoly::zero();
                p.add_term(m.clone(), Coeff::one());
                p.dx(alph)
            })
            .collect();
        let mut rows: Vec<Monomial> = Vec::new();
        for d in derivs.iter().chain(std::iter::once(self)) {
            for m in d.terms.keys() {
                if !rows.contains(m) {
                    rows.push(m.clone());
                }
            }
        }
        let nr = rows.len();
        let nc = candidates.len();
        let mut mat = vec![Coeff::zero(); nr * (nc + 1)];
        for (j, d) in derivs.iter().enumerate() {
            for (m, c) in &d.terms {
                let i = rows.iter().position(|r| r == m).unwrap();
                mat[i * (nc + 1) + j] = c.clone();
            }
        }
        for (m, c) in &self.terms {
            let i = rows.iter().position(|r| r == m).unwrap();
            mat[i * (nc + 1) + nc] = c.clone();
        }
        let sol = solve_exact(&mut mat, nr, nc)?;
        let mut out = DiffPoly::zero();
        for (m, c) in candidates.into_iter().zip(sol) {
            out.add_term(m, c);
        }
        Some(out)
    }

    /// Canonical ASCII rendering: terms in the monomial order, `u[k]` for the
    /// k-th x-derivative, `u[tx]`-style letter tags when t-derivatives appear.
    pub fn render(&self, alph: &Alphabet) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.factors.is_empty() {
                parts.push(render_rational(&mag));
            }
            for &(v, p) in &m.factors {
                let mut s = alph.name(v.field).to_string();
                if v.t_order > 0 {
                    s.push('[');
                    for _ in 0..v.t_order {
                        s.push('t');
                    }
                    for _ in 0..v.x_order {
                        s.push('x');
                    }
                    s.push(']');
                } else if v.x_order > 0 {
                    let _ = write!(s, "[{}]", v.x_order);
                }
                if p > 1 {
                    let _ = write!(s, "^{p}");
                }
                parts.push(s);
            }
            out.push_str(&parts.join("*"));
        }
        out
    }
}

fn render_rational(c: &Coeff) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Derivative of one jet variable as a polynomial.
fn jetvar_derivative(v: JetVar, dir: Direction, alph: &Alphabet) -> DiffPoly {
    match alph.rule(v.field) {
        FieldRule::Jet => DiffPoly::var(v.raised(dir)),
        FieldRule::Exp { base, sign } => {
            debug_assert!(v.t_order == 0 && v.x_order == 0, "exp fields carry no jets");
            let d_base = match dir {
                Direction::X => JetVar::new(base, 0, 1),
                Direction::T => JetVar::new(base, 1, 0),
            };
            let m = Monomial::from_factors(vec![(d_base, 1), (v, 1)]);
            let mut p = DiffPoly::zero();
            p.add_term(m, Coeff::from_integer(sign.into()));
            p
        }
    }
}

/// Exact Gaussian elimination on an augmented matrix; returns the solution of
/// the least-index pivots, or None if inconsistent.
fn solve_exact(mat: &mut [Coeff], nr: usize, nc: usize) -> Option<Vec<Coeff>> {
    let w = nc + 1;
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; nc];
    let mut row = 0;
    for col in 0..nc {
        let pr = (row..nr).find(|&r| !mat[r * w + col].is_zero());
        let Some(pr) = pr else { continue };
        for j in 0..w {
            mat.swap(row * w + j, pr * w + j);
        }
        let inv = mat[row * w + col].recip();
        for j in col..w {
            let v = &mat[row * w + j] * &inv;
            mat[row * w + j] = v;
        }
        for r in 0..nr {
            if r != row && !mat[r * w + col].is_zero() {
                let f = mat[r * w + col].clone();
                for j in col..w {
                    let v = &mat[r * w + j] - &(&f * &mat[row * w + j]);
                    mat[r * w + j] = v;
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == nr {
            break;
        }
    }
    // Inconsistency: a zero row with nonzero rhs.
    for r in 0..nr {
        if (0..nc).all(|c| mat[r * w + c].is_zero()) && !mat[r * w + nc].is_zero() {
            return None;
        }
    }
    Some(
        (0..nc)
            .map(|c| match pivot_of_col[c] {
                Some(r) => mat[r * w + nc].clone(),
                None => Coeff::zero(),
            })
            .collect(),
    )
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::{q, qi};

    fn u_alph() -> (Alphabet, FieldId) {
        let mut a = Alphabet::new();
        let u = a.register("u");
        (a, u)
    }

    #[test]
    fn additive_inverse_cancels() {
        let (_, u) = u_alph();
        let p = DiffPoly::jet(u, 0);
        assert!((&p - &p).is_zero());
        assert!((&p + &(-&p)).is_zero());
    }

    #[test]
    fn monomial_product_and_identity() {
        let mut a = Alphabet::new();
        let v = a.register("v");
        let p = DiffPoly::jet(v, 0);
        let sq = &p * &p;
        assert_eq!(sq.render(&a), "v^2");
        let one = DiffPoly::one();
        assert_eq!((&sq * &one), sq);
    }

    #[test]
    fn leibniz_on_u_squared() {
        let (a, u) = u_alph();
        let p = DiffPoly::jet(u, 0).pow(2);
        let d = p.dx(&a);
        assert_eq!(d.render(&a), "2*u*u[1]");
    }

    #[test]
    fn jet_raise_and_linearity() {
        let mut a = Alphabet::new();
        let v = a.register("v");
        let p = &DiffPoly::jet(v, 0).pow(2) + &DiffPoly::jet(v, 1);
        assert_eq!(p.dx(&a).render(&a), "2*v*v[1] + v[2]");
        assert_eq!(DiffPoly::jet(v, 1).dx(&a).render(&a), "v[2]");
    }

    #[test]
    fn miura_substitution() {
        let mut a = Alphabet::new();
        let u = a.register("u");
        let v = a.register("v");
        let miura = &DiffPoly::jet(v, 0).pow(2) + &DiffPoly::jet(v, 1);
        let subst = DiffPoly::jet(u, 0).substitute(u, &miura, &a);
        assert_eq!(subst, miura);
        let subst_x = DiffPoly::jet(u, 1).substitute(u, &miura, &a);
        assert_eq!(subst_x.render(&a), "2*v*v[1] + v[2]");
        // identity substitution
        let p = &DiffPoly::jet(u, 2) + &DiffPoly::jet(u, 0).pow(3);
        assert_eq!(p.substitute(u, &DiffPoly::jet(u, 0), &a), p);
    }

    #[test]
    fn exp_field_chain_rule() {
        let mut a = Alphabet::new();
        let w = a.register("w");
        let e = a.register_exp("ew", w, 1);
        let p = DiffPoly::jet(e, 0);
        assert_eq!(p.dx(&a).render(&a), "w[1]*ew");
        assert_eq!(p.dt(&a).render(&a), "w[t]*ew");
        let em = a.register_exp("emw", w, -1);
        assert_eq!(DiffPoly::jet(em, 0).dx(&a).render(&a), "-w[1]*emw");
    }

    #[test]
    fn antiderivative_recovers_products() {
        let (a, u) = u_alph();
        let p = &DiffPoly::jet(u, 0) * &DiffPoly::jet(u, 1); // u u_x = ∂(u²/2)
        let anti = p.x_antiderivative(&a).unwrap();
        assert_eq!(anti.render(&a), "1/2*u^2");
        // û u_xx − u û_xx = ∂(û u_x − u û_x)
        let mut a2 = Alphabet::new();
        let u = a2.register("u");
        let uh = a2.register("uh");
        let q_ = &(&DiffPoly::jet(uh, 0) * &DiffPoly::jet(u, 2)) - &(&DiffPoly::jet(u, 0) * &DiffPoly::jet(uh, 2));
        let anti = q_.x_antiderivative(&a2).unwrap();
        assert_eq!(anti.dx(&a2), q_);
        // u alone has no polynomial antiderivative
        assert!(DiffPoly::jet(u, 0).x_antiderivative(&a2).is_none());
    }

    #[test]
    fn canonical_rendering_matches_spec_format() {
        let (a, u) = u_alph();
        // 4*u*u[1] - u[3]
        let p = &(&DiffPoly::jet(u, 0) * &DiffPoly::jet(u, 1)).scale(&qi(4)) - &DiffPoly::jet(u, 3);
        assert_eq!(p.render(&a), "4*u*u[1] - u[3]");
        let half = DiffPoly::constant(q(-3, 4));
        assert_eq!(half.render(&a), "-3/4");
    }
}
