use super::poly::{Alphabet, Coeff, DiffPoly};
use num_traits::One;

/// Polynomial in ∂ₓ with differential-polynomial coefficients;
/// `coeffs[k]` multiplies ∂ₓᵏ.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct DiffOperator {
    coeffs: Vec<DiffPoly>,
}

impl DiffOperator {
    pub fn zero() -> Self {
        DiffOperator::default()
    }

    pub fn from_coeffs(coeffs: Vec<DiffPoly>) -> Self {
        let mut op = DiffOperator { coeffs };
        op.normalize();
        op
    }

    /// Multiplication operator by `p` (order zero).
    pub fn mult(p: DiffPoly) -> Self {
        Self::from_coeffs(vec![p])
    }

    pub fn identity() -> Self {
        Self::mult(DiffPoly::one())
    }

    /// c·∂ₓᵏ
    pub fn dx_pow(k: usize, c: Coeff) -> Self {
        let mut coeffs = vec![DiffPoly::zero(); k + 1];
        coeffs[k] = DiffPoly::constant(c);
        Self::from_coeffs(coeffs)
    }

    pub fn dx() -> Self {
        Self::dx_pow(1, Coeff::one())
    }

    fn normalize(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order in ∂ₓ; zero operator reports None.
    pub fn order(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> DiffPoly {
        self.coeffs.get(k).cloned().unwrap_or_else(DiffPoly::zero)
    }

    pub fn coeffs(&self) -> &[DiffPoly] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) - &other.coeff(k)).collect();
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        DiffOperator { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    /// Operator product, resolving ∂ₓ∘f = f∂ₓ + f_x symbolically:
    /// ∂ᵢ∘(b·∂ʲ) = Σₖ C(i,k) (∂ₓᵏ b) ∂^{i−k+j}.
    pub fn compose(&self, other: &Self, alph: &Alphabet) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let out_order = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![DiffPoly::zero(); out_order];
        for (j, b) in other.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            // successive x-derivatives of b
            let mut db = b.clone();
            let max_i = self.coeffs.len() - 1;
            let mut derivs = Vec::with_capacity(max_i + 1);
            derivs.push(db.clone());
            for _ in 0..max_i {
                db = db.dx(alph);
                derivs.push(db.clone());
            }
            for (i, a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, dkb) in derivs.iter().enumerate().take(i + 1) {
                    let c = binomial(i as u64, k as u64);
                    let term = (a * dkb).scale(&c);
                    let idx = i - k + j;
                    coeffs[idx] = &coeffs[idx] + &term;
                }
            }
        }
        Self::from_coeffs(coeffs)
    }

    /// AB − BA.
    pub fn commutator(&self, other: &Self, alph: &Alphabet) -> Self {
        self.compose(other, alph).sub(&other.compose(self, alph))
    }

    pub fn render(&self, alph: &Alphabet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({})", c.render(alph)),
                1 => format!("({})*Dx", c.render(alph)),
                _ => format!("({})*Dx^{}", c.render(alph), k),
            })
            .collect();
        parts.join(" + ")
    }
}

fn binomial(n: u64, k: u64) -> Coeff {
    let mut acc = Coeff::one();
    for i in 0..k {
        acc = acc * Coeff::from_integer((n - i).into()) / Coeff::from_integer((i + 1).into());
    }
    acc
}

impl DiffOperator {
    /// Convenience: is this a pure multiplication operator?
    pub fn is_multiplication(&self) -> bool {
        self.coeffs.len() <= 1
    }
}
