//! Exact symbolic algebra of differential polynomials.
//!
//! The atoms are jet variables: a field symbol together with t- and x-derivative
//! orders. Polynomials in jets with exact rational coefficients carry every
//! recursion in the crate; floats appear only when a polynomial is evaluated on
//! sampled fields ([`eval`]). Differential operators (polynomials in ∂ₓ) and
//! 2x2 matrices with Laurent-polynomial spectral dependence build on the same
//! substrate.

mod eval;
mod lambda;
mod operator;
mod poly;

pub use eval::{dp_evaluate, eval_lambda_matrix, EvalError, FieldBinding};
pub use lambda::{reduce_mod_eom, EomRule, LambdaMatrix, LambdaPoly};
pub use operator::DiffOperator;
pub use poly::{Alphabet, Coeff, DiffPoly, Direction, FieldId, FieldRule, JetVar, Monomial};

use num_bigint::BigInt;

/// Exact rational from an integer pair.
pub fn q(num: i64, den: i64) -> Coeff {
    Coeff::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational from an integer.
pub fn qi(num: i64) -> Coeff {
    q(num, 1)
}
