//! Lax pair registry with symbolic zero-curvature verification, the AKNS
//! dressing hierarchy, KdV differential-operator Lax algebra and dressing,
//! the continuous monodromy matrix, and numeric Darboux-relation residuals.

mod builtin;
mod darboux;
mod dressing;
mod hierarchy;
mod monodromy;

pub use builtin::{builtin_lax, liouville_pair, MatrixLaxPair, Model, UnknownModel};
pub use darboux::{darboux_residual, DarbouxResidual, SampledPair};
pub use dressing::{kdv_lax_coefficients, kdv_operator_dressing, DressingCheck, KdvLax};
pub use hierarchy::akns_hierarchy;
pub use monodromy::{continuous_monodromy, nls_u_samples};

use crate::diffpoly::LambdaMatrix;

/// Raw zero-curvature residual ∂ₜU − ∂ₓV + [U, V], with time derivatives as
/// t-jets. Reduce modulo the pair's equations of motion to test vanishing.
pub fn zero_curvature_residual(pair: &MatrixLaxPair) -> LambdaMatrix {
    let a = &pair.alphabet;
    pair.u.dt(a).sub(&pair.v.dx(a)).add(&pair.u.commutator(&pair.v))
}

/// Residual reduced modulo the declared equations of motion; identically zero
/// for every registered pair.
pub fn zero_curvature_residual_reduced(pair: &MatrixLaxPair) -> LambdaMatrix {
    zero_curvature_residual(pair).reduce_mod_eom(&pair.eom, &pair.alphabet)
}
