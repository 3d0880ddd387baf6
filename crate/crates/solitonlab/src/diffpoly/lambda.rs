use super::poly::{Alphabet, Coeff, DiffPoly, FieldId, JetVar, Monomial};

/// Laurent polynomial in the spectral symbol with differential-polynomial
/// coefficients. The symbol stands for λ in AKNS-type pairs and for e^λ in the
/// relativistic pairs; the algebra is the same.
#[derive(Clone, PartialEq, Debug)]
pub struct LambdaPoly {
    min_deg: i32,
    coeffs: Vec<DiffPoly>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly { min_deg: 0, coeffs: Vec::new() }
    }

    pub fn from_poly(p: DiffPoly) -> Self {
        Self::monomial(0, p)
    }

    /// p·z^deg
    pub fn monomial(deg: i32, p: DiffPoly) -> Self {
        let mut out = LambdaPoly { min_deg: deg, coeffs: vec![p] };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.min_deg += lead_zeros as i32;
        }
        if self.coeffs.is_empty() {
            self.min_deg = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, deg: i32) -> DiffPoly {
        if deg < self.min_deg {
            return DiffPoly::zero();
        }
        self.coeffs.get((deg - self.min_deg) as usize).cloned().unwrap_or_else(DiffPoly::zero)
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some((self.min_deg, self.min_deg + self.coeffs.len() as i32 - 1))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.min_deg.min(other.min_deg);
        let hi = (self.min_deg + self.coeffs.len() as i32).max(other.min_deg + other.coeffs.len() as i32);
        let coeffs = (lo..hi).map(|d| &self.coeff(d) + &other.coeff(d)).collect();
        let mut out = LambdaPoly { min_deg: lo, coeffs };
        out.normalize();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LambdaPoly { min_deg: self.min_deg, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let min = self.min_deg + other.min_deg;
        let mut coeffs = vec![DiffPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        let mut out = LambdaPoly { min_deg: min, coeffs };
        out.normalize();
        out
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = LambdaPoly { min_deg: self.min_deg, coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() };
        out.normalize();
        out
    }

    pub fn map(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> Self {
        let mut out = LambdaPoly { min_deg: self.min_deg, coeffs: self.coeffs.iter().map(f).collect() };
        out.normalize();
        out
    }

    pub fn dx(&self, alph: &Alphabet) -> Self {
        self.map(|p| p.dx(alph))
    }

    pub fn dt(&self, alph: &Alphabet) -> Self {
        self.map(|p| p.dt(alph))
    }

    pub fn render(&self, alph: &Alphabet, sym: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let d = self.min_deg + i as i32;
                match d {
                    0 => format!("({})", c.render(alph)),
                    1 => format!("({})*{}", c.render(alph), sym),
                    _ => format!("({})*{}^{}", c.render(alph), sym, d),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// One evolution rule ∂ₜ^{t_order} field = rhs, used to reduce residuals
/// modulo declared equations of motion.
#[derive(Clone, Debug)]
pub struct EomRule {
    pub field: FieldId,
    pub t_order: u8,
    pub rhs: DiffPoly,
}

/// Substitute every jet with t-order ≥ a rule's order by the appropriately
/// differentiated rule right-hand side, to a fixed point.
pub fn reduce_mod_eom(p: &DiffPoly, rules: &[EomRule], alph: &Alphabet) -> DiffPoly {
    let mut cur = p.clone();
    for _ in 0..64 {
        let Some((var, rule)) = find_reducible(&cur, rules) else {
            return cur;
        };
        // Replacement for this particular jet: ∂ₓ^x ∂ₜ^(t - t0) rhs
        let mut rep = rule.rhs.clone();
        for _ in 0..(var.t_order - rule.t_order) {
            rep = rep.dt(alph);
        }
        for _ in 0..var.x_order {
            rep = rep.dx(alph);
        }
        cur = substitute_single_var(&cur, var, &rep);
    }
    panic!("eom reduction did not terminate");
}

fn find_reducible(p: &DiffPoly, rules: &[EomRule]) -> Option<(JetVar, EomRule)> {
    for (m, _) in p.terms() {
        for &(v, _) in m.factors() {
            for r in rules {
                if v.field == r.field && v.t_order >= r.t_order {
                    return Some((v, r.clone()));
                }
            }
        }
    }
    None
}

/// Replace one exact jet variable by a polynomial.
fn substitute_single_var(p: &DiffPoly, var: JetVar, rep: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (m, c) in p.terms() {
        let power = m.factors().iter().find(|&&(v, _)| v == var).map(|&(_, p)| p).unwrap_or(0);
        if power == 0 {
            out.add_term(m.clone(), c.clone());
            continue;
        }
        let rest = Monomial::from_factors(m.factors().iter().copied().filter(|&(v, _)| v != var).collect());
        let mut acc = DiffPoly::zero();
        acc.add_term(rest, c.clone());
        let acc = &acc * &rep.pow(power);
        out = &out + &acc;
    }
    out
}

/// 2x2 matrix of Laurent polynomials in the spectral symbol.
#[derive(Clone, PartialEq, Debug)]
pub struct LambdaMatrix {
    pub e: [[LambdaPoly; 2]; 2],
}

impl LambdaMatrix {
    pub fn zero() -> Self {
        LambdaMatrix {
            e: [
                [LambdaPoly::zero(), LambdaPoly::zero()],
                [LambdaPoly::zero(), LambdaPoly::zero()],
            ],
        }
    }

    pub fn new(e11: LambdaPoly, e12: LambdaPoly, e21: LambdaPoly, e22: LambdaPoly) -> Self {
        LambdaMatrix { e: [[e11, e12], [e21, e22]] }
    }

    /// Diagonal p·I.
    pub fn scalar(p: LambdaPoly) -> Self {
        LambdaMatrix::new(p.clone(), LambdaPoly::zero(), LambdaPoly::zero(), p)
    }

    /// Matrix of plain differential polynomials (degree 0 in the symbol).
    pub fn from_polys(m: [[DiffPoly; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = m;
        LambdaMatrix::new(
            LambdaPoly::from_poly(a),
            LambdaPoly::from_poly(b),
            LambdaPoly::from_poly(c),
            LambdaPoly::from_poly(d),
        )
    }

    pub fn entry(&self, i: usize, j: usize) -> &LambdaPoly {
        &self.e[i][j]
    }

    pub fn add(&self, o: &Self) -> Self {
        LambdaMatrix::new(
            self.e[0][0].add(&o.e[0][0]),
            self.e[0][1].add(&o.e[0][1]),
            self.e[1][0].add(&o.e[1][0]),
            self.e[1][1].add(&o.e[1][1]),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        LambdaMatrix::new(self.e[0][0].neg(), self.e[0][1].neg(), self.e[1][0].neg(), self.e[1][1].neg())
    }

    pub fn matmul(&self, o: &Self) -> Self {
        let prod = |i: usize, j: usize| {
            self.e[i][0].mul(&o.e[0][j]).add(&self.e[i][1].mul(&o.e[1][j]))
        };
        LambdaMatrix::new(prod(0, 0), prod(0, 1), prod(1, 0), prod(1, 1))
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.matmul(o).sub(&o.matmul(self))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        LambdaMatrix::new(
            self.e[0][0].scale(c),
            self.e[0][1].scale(c),
            self.e[1][0].scale(c),
            self.e[1][1].scale(c),
        )
    }

    pub fn mul_poly(&self, p: &LambdaPoly) -> Self {
        LambdaMatrix::new(
            self.e[0][0].mul(p),
            self.e[0][1].mul(p),
            self.e[1][0].mul(p),
            self.e[1][1].mul(p),
        )
    }

    pub fn dx(&self, alph: &Alphabet) -> Self {
        self.map(|p| p.dx(alph))
    }

    pub fn dt(&self, alph: &Alphabet) -> Self {
        self.map(|p| p.dt(alph))
    }

    pub fn map(&self, f: impl Fn(&LambdaPoly) -> LambdaPoly) -> Self {
        LambdaMatrix::new(f(&self.e[0][0]), f(&self.e[0][1]), f(&self.e[1][0]), f(&self.e[1][1]))
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|row| row.iter().all(|p| p.is_zero()))
    }

    pub fn reduce_mod_eom(&self, rules: &[EomRule], alph: &Alphabet) -> Self {
        self.map(|p| p.map(|c| reduce_mod_eom(c, rules, alph)))
    }

    pub fn render(&self, alph: &Alphabet, sym: &str) -> String {
        format!(
            "[[{}, {}], [{}, {}]]",
            self.e[0][0].render(alph, sym),
            self.e[0][1].render(alph, sym),
            self.e[1][0].render(alph, sym),
            self.e[1][1].render(alph, sym)
        )
    }
}
