//! Semi-discrete integrable lattices: the Toda chain (open and periodic) and
//! the discrete NLS model, with RK4 evolution, trace and monodromy charges,
//! transfer matrices, the discrete soliton, and the stationary Bäcklund
//! solution.

use num_complex::Complex64;
use thiserror::Error;

use crate::numeric::Mat2;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LatticeBoundary {
    Open,
    Periodic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TodaState {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub boundary: LatticeBoundary,
}

impl TodaState {
    pub fn new(q: Vec<f64>, p: Vec<f64>, boundary: LatticeBoundary) -> Self {
        assert!(q.len() == p.len() && q.len() >= 2, "need |q| = |p| = N >= 2");
        TodaState { q, p, boundary }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DnlsState {
    pub x: Vec<Complex64>,
    pub cap_x: Vec<Complex64>,
}

impl DnlsState {
    pub fn new(x: Vec<Complex64>, cap_x: Vec<Complex64>) -> Self {
        assert!(x.len() == cap_x.len() && x.len() >= 3, "need |x| = |X| = N >= 3");
        DnlsState { x, cap_x }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n_j(&self, j: usize) -> Complex64 {
        Complex64::new(1.0, 0.0) + self.x[j] * self.cap_x[j]
    }
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum LatticeError {
    #[error("operation requires {0:?} boundary conditions")]
    WrongBoundary(LatticeBoundary),
    #[error("cosh(xi + eta*j) vanishes on the requested range")]
    PoleOnRange,
}

// ---------------------------------------------------------------------------
// Equations of motion
// ---------------------------------------------------------------------------

/// Toda chain: dq_j = p_j, dp_j = e^{q_{j+1}−q_j} − e^{q_j−q_{j−1}}, with
/// out-of-range exponentials dropped on open chains.
pub fn toda_rhs(s: &TodaState) -> (Vec<f64>, Vec<f64>) {
    let n = s.len();
    let dq = s.p.clone();
    let mut dp = vec![0.0; n];
    for j in 0..n {
        let right = if j + 1 < n {
            (s.q[j + 1] - s.q[j]).exp()
        } else {
            match s.boundary {
                LatticeBoundary::Open => 0.0,
                LatticeBoundary::Periodic => (s.q[0] - s.q[j]).exp(),
            }
        };
        let left = if j > 0 {
            (s.q[j] - s.q[j - 1]).exp()
        } else {
            match s.boundary {
                LatticeBoundary::Open => 0.0,
                LatticeBoundary::Periodic => (s.q[0] - s.q[n - 1]).exp(),
            }
        };
        dp[j] = right - left;
    }
    (dq, dp)
}

/// DNLS equations of motion, as forced by the semi-discrete zero-curvature
/// condition for the model's Lax pair (with ℕ_j = 1 + x_j X_j):
///   dx_j = −x_j x_{j+1} X_j − x_{j+1}(ℕ_j + ℕ_{j+1}) + x_j ℕ_j² − x_j² X_{j−1} + x_{j+2}
///   dX_j =  x_j X_{j−1} X_j + X_{j−1}(ℕ_j + ℕ_{j−1}) − X_j ℕ_j² + x_{j+1} X_j² − X_{j−2}
pub fn dnls_rhs(s: &DnlsState) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = s.len();
    let mut dx = vec![Complex64::new(0.0, 0.0); n];
    let mut dcx = vec![Complex64::new(0.0, 0.0); n];
    let nj: Vec<Complex64> = (0..n).map(|j| s.n_j(j)).collect();
    for j in 0..n {
        let jp = (j + 1) % n;
        let jpp = (j + 2) % n;
        let jm = (j + n - 1) % n;
        let jmm = (j + n - 2) % n;
        dx[j] = -s.x[j] * s.x[jp] * s.cap_x[j] - s.x[jp] * (nj[j] + nj[jp]) + s.x[j] * nj[j] * nj[j]
            - s.x[j] * s.x[j] * s.cap_x[jm]
            + s.x[jpp];
        dcx[j] = s.x[j] * s.cap_x[jm] * s.cap_x[j] + s.cap_x[jm] * (nj[j] + nj[jm]) - s.cap_x[j] * nj[j] * nj[j]
            + s.x[jp] * s.cap_x[j] * s.cap_x[j]
            - s.cap_x[jmm];
    }
    (dx, dcx)
}

// ---------------------------------------------------------------------------
// RK4 evolution
// ---------------------------------------------------------------------------

pub struct TodaTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<TodaState>,
}

pub struct DnlsTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<DnlsState>,
}

/// Fixed-step RK4 for the Toda chain; snapshots every `snap_stride` steps.
pub fn evolve_toda(s: &TodaState, dt: f64, steps: usize, snap_stride: usize) -> TodaTrajectory {
    assert!(dt > 0.0);
    let stride = snap_stride.max(1);
    let n = s.len();
    let mut cur = s.clone();
    let mut times = vec![0.0];
    let mut states = vec![cur.clone()];
    for step in 1..=steps {
        let k1 = toda_rhs(&cur);
        let st2 = add_toda(&cur, &k1, dt / 2.0);
        let k2 = toda_rhs(&st2);
        let st3 = add_toda(&cur, &k2, dt / 2.0);
        let k3 = toda_rhs(&st3);
        let st4 = add_toda(&cur, &k3, dt);
        let k4 = toda_rhs(&st4);
        for j in 0..n {
            cur.q[j] += dt / 6.0 * (k1.0[j] + 2.0 * (k2.0[j] + k3.0[j]) + k4.0[j]);
            cur.p[j] += dt / 6.0 * (k1.1[j] + 2.0 * (k2.1[j] + k3.1[j]) + k4.1[j]);
        }
        if step % stride == 0 || step == steps {
            times.push(step as f64 * dt);
            states.push(cur.clone());
        }
    }
    TodaTrajectory { times, states }
}

fn add_toda(s: &TodaState, k: &(Vec<f64>, Vec<f64>), a: f64) -> TodaState {
    TodaState {
        q: s.q.iter().zip(&k.0).map(|(x, d)| x + a * d).collect(),
        p: s.p.iter().zip(&k.1).map(|(x, d)| x + a * d).collect(),
        boundary: s.boundary,
    }
}

pub fn evolve_dnls(s: &DnlsState, dt: f64, steps: usize, snap_stride: usize) -> DnlsTrajectory {
    assert!(dt > 0.0);
    let stride = snap_stride.max(1);
    let n = s.len();
    let mut cur = s.clone();
    let mut times = vec![0.0];
    let mut states = vec![cur.clone()];
    for step in 1..=steps {
        let k1 = dnls_rhs(&cur);
        let k2 = dnls_rhs(&add_dnls(&cur, &k1, dt / 2.0));
        let k3 = dnls_rhs(&add_dnls(&cur, &k2, dt / 2.0));
        let k4 = dnls_rhs(&add_dnls(&cur, &k3, dt));
        for j in 0..n {
            cur.x[j] += (k1.0[j] + (k2.0[j] + k3.0[j]) * 2.0 + k4.0[j]) * (dt / 6.0);
            cur.cap_x[j] += (k1.1[j] + (k2.1[j] + k3.1[j]) * 2.0 + k4.1[j]) * (dt / 6.0);
        }
        if step % stride == 0 || step == steps {
            times.push(step as f64 * dt);
            states.push(cur.clone());
        }
    }
    DnlsTrajectory { times, states }
}

fn add_dnls(s: &DnlsState, k: &(Vec<Complex64>, Vec<Complex64>), a: f64) -> DnlsState {
    DnlsState {
        x: s.x.iter().zip(&k.0).map(|(x, d)| x + d * a).collect(),
        cap_x: s.cap_x.iter().zip(&k.1).map(|(x, d)| x + d * a).collect(),
    }
}

// ---------------------------------------------------------------------------
// Conserved quantities
// ---------------------------------------------------------------------------

/// tr(Lⁿ) for n = 1..n_max with the symmetric tridiagonal open-chain Lax
/// matrix L = diag(p) + offdiag(e^{(q_{j+1}−q_j)/2}).
pub fn toda_trace_charges(s: &TodaState, n_max: usize) -> Result<Vec<f64>, LatticeError> {
    if s.boundary != LatticeBoundary::Open {
        return Err(LatticeError::WrongBoundary(LatticeBoundary::Open));
    }
    let n = s.len();
    let a: Vec<f64> = (0..n - 1).map(|j| (0.5 * (s.q[j + 1] - s.q[j])).exp()).collect();
    // band-limited products: rows of L^k have bandwidth k
    let mut charges = Vec::with_capacity(n_max);
    let mut power = vec![0.0; n * n]; // L^1 dense but built from the band
    for j in 0..n {
        power[j * n + j] = s.p[j];
        if j + 1 < n {
            power[j * n + j + 1] = a[j];
            power[(j + 1) * n + j] = a[j];
        }
    }
    let lmat = power.clone();
    charges.push((0..n).map(|j| power[j * n + j]).sum());
    for k in 2..=n_max {
        let mut next = vec![0.0; n * n];
        for i in 0..n {
            // row i of power is zero outside the band |col − i| ≤ k−1
            let lo = i.saturating_sub(k - 1);
            let hi = (i + k - 1).min(n - 1);
            for col in lo..=hi {
                let v = power[i * n + col];
                if v == 0.0 {
                    continue;
                }
                let blo = col.saturating_sub(1);
                let bhi = (col + 1).min(n - 1);
                for c2 in blo..=bhi {
                    next[i * n + c2] += v * lmat[col * n + c2];
                }
            }
        }
        power = next;
        charges.push((0..n).map(|j| power[j * n + j]).sum());
    }
    Ok(charges)
}

/// Open-chain Hamiltonian H = ½Σp² + Σ_{j<N} e^{q_{j+1}−q_j}.
pub fn toda_energy_open(s: &TodaState) -> f64 {
    let n = s.len();
    0.5 * s.p.iter().map(|p| p * p).sum::<f64>()
        + (0..n - 1).map(|j| (s.q[j + 1] - s.q[j]).exp()).sum::<f64>()
}

/// Monodromy charges of the periodic dual description:
/// t1 = −Σp, t2 = Σ_{j>i}p_jp_i − Σe^{q_{j+1}−q_j}, I1 = t1,
/// I2 = t2 − t1²/2 = −H_periodic.
pub fn toda_monodromy_charges(s: &TodaState) -> Result<(f64, f64, f64, f64), LatticeError> {
    if s.boundary != LatticeBoundary::Periodic {
        return Err(LatticeError::WrongBoundary(LatticeBoundary::Periodic));
    }
    let n = s.len();
    let psum: f64 = s.p.iter().sum();
    let p2: f64 = s.p.iter().map(|p| p * p).sum();
    let pp = 0.5 * (psum * psum - p2);
    let esum: f64 = (0..n).map(|j| (s.q[(j + 1) % n] - s.q[j]).exp()).sum();
    let t1 = -psum;
    let t2 = pp - esum;
    let i1 = t1;
    let i2 = t2 - 0.5 * t1 * t1;
    Ok((t1, t2, i1, i2))
}

/// Periodic Hamiltonian H = ½Σp² + Σ e^{q_j − q_{j−1}} (indices mod N).
pub fn toda_energy_periodic(s: &TodaState) -> f64 {
    let n = s.len();
    0.5 * s.p.iter().map(|p| p * p).sum::<f64>()
        + (0..n).map(|j| (s.q[j] - s.q[(j + n - 1) % n]).exp()).sum::<f64>()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LatticeModel {
    Toda,
    Dnls,
}

/// Spatial Lax matrix L_j(λ) of the dual-description Toda chain.
pub fn toda_l_matrix(s: &TodaState, j: usize, lambda: Complex64) -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    Mat2::new(
        lambda - s.p[j],
        Complex64::new(s.q[j].exp(), 0.0),
        Complex64::new(-(-s.q[j]).exp(), 0.0),
        z,
    )
}

/// Time Lax matrix A_j(λ) of the dual-description Toda chain.
pub fn toda_a_matrix(s: &TodaState, j: usize, lambda: Complex64) -> Mat2 {
    let n = s.len();
    let jm = (j + n - 1) % n;
    Mat2::new(
        lambda,
        Complex64::new(s.q[j].exp(), 0.0),
        Complex64::new(-(-s.q[jm]).exp(), 0.0),
        Complex64::new(0.0, 0.0),
    )
}

/// Spatial Lax matrix L_j(λ) of the DNLS model.
pub fn dnls_l_matrix(s: &DnlsState, j: usize, lambda: Complex64) -> Mat2 {
    Mat2::new(lambda + s.n_j(j), s.x[j], s.cap_x[j], Complex64::new(1.0, 0.0))
}

/// Time Lax matrix A_j(λ) of the DNLS model.
pub fn dnls_a_matrix(s: &DnlsState, j: usize, lambda: Complex64) -> Mat2 {
    let n = s.len();
    let jp = (j + 1) % n;
    let jm = (j + n - 1) % n;
    let jmm = (j + n - 2) % n;
    Mat2::new(
        lambda * lambda - s.x[j] * s.cap_x[jm],
        lambda * s.x[j] - s.x[j] * s.n_j(j) + s.x[jp],
        lambda * s.cap_x[jm] - s.cap_x[jm] * s.n_j(jm) + s.cap_x[jmm],
        s.x[j] * s.cap_x[jm],
    )
}

/// Trace of the ordered product L_N(λ)···L_1(λ) (periodic monodromy).
pub fn transfer_trace_toda(s: &TodaState, lambda: Complex64) -> Result<Complex64, LatticeError> {
    if s.boundary != LatticeBoundary::Periodic {
        return Err(LatticeError::WrongBoundary(LatticeBoundary::Periodic));
    }
    let mut t = Mat2::identity();
    for j in 0..s.len() {
        t = toda_l_matrix(s, j, lambda).mul(&t);
    }
    Ok(t.trace())
}

pub fn transfer_trace_dnls(s: &DnlsState, lambda: Complex64) -> Complex64 {
    let mut t = Mat2::identity();
    for j in 0..s.len() {
        t = dnls_l_matrix(s, j, lambda).mul(&t);
    }
    t.trace()
}

/// Local DNLS charges from the ln-expansion of the transfer matrix:
/// I1 = Σℕ_j, I2 = Σx_jX_{j−1} − ½Σℕ_j², I3 = Σx_jX_{j−2} − Σ(ℕ_j+ℕ_{j−1})x_jX_{j−1} + ⅓Σℕ_j³.
pub fn dnls_charges(s: &DnlsState) -> (Complex64, Complex64, Complex64) {
    let n = s.len();
    let nj: Vec<Complex64> = (0..n).map(|j| s.n_j(j)).collect();
    let mut i1 = Complex64::new(0.0, 0.0);
    let mut i2 = Complex64::new(0.0, 0.0);
    let mut i3 = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let jm = (j + n - 1) % n;
        let jmm = (j + n - 2) % n;
        i1 += nj[j];
        i2 += s.x[j] * s.cap_x[jm] - nj[j] * nj[j] * 0.5;
        i3 += s.x[j] * s.cap_x[jmm] - (nj[j] + nj[jm]) * s.x[j] * s.cap_x[jm] + nj[j] * nj[j] * nj[j] / 3.0;
    }
    (i1, i2, i3)
}

// ---------------------------------------------------------------------------
// Zero-curvature residual along a trajectory
// ---------------------------------------------------------------------------

/// Max over sites, interior snapshot times, and λ samples of
/// ‖dL_j/dt − (A_{j+1} L_j − L_j A_j)‖, with dL_j/dt by 4th-order central
/// differences over the (uniformly spaced) snapshots.
pub fn semidiscrete_zc_residual_toda(traj: &TodaTrajectory, lambdas: &[Complex64]) -> f64 {
    let m = traj.states.len();
    assert!(m >= 5, "need at least 5 snapshots");
    let dt = traj.times[1] - traj.times[0];
    let n = traj.states[0].len();
    // open chains have no valid neighbors at the wrap sites
    let sites: std::ops::Range<usize> = match traj.states[0].boundary {
        LatticeBoundary::Open => 1..n - 1,
        LatticeBoundary::Periodic => 0..n,
    };
    let mut worst: f64 = 0.0;
    for ti in 2..m - 2 {
        let s = &traj.states[ti];
        for &lam in lambdas {
            for j in sites.clone() {
                let dl = mat_time_derivative(
                    [
                        toda_l_matrix(&traj.states[ti - 2], j, lam),
                        toda_l_matrix(&traj.states[ti - 1], j, lam),
                        toda_l_matrix(&traj.states[ti + 1], j, lam),
                        toda_l_matrix(&traj.states[ti + 2], j, lam),
                    ],
                    dt,
                );
                let a_j = toda_a_matrix(s, j, lam);
                let a_jp = toda_a_matrix(s, (j + 1) % n, lam);
                let rhs = a_jp.mul(&toda_l_matrix(s, j, lam)).sub(&toda_l_matrix(s, j, lam).mul(&a_j));
                worst = worst.max(dl.sub(&rhs).max_abs());
            }
        }
    }
    worst
}

pub fn semidiscrete_zc_residual_dnls(traj: &DnlsTrajectory, lambdas: &[Complex64]) -> f64 {
    let m = traj.states.len();
    assert!(m >= 5, "need at least 5 snapshots");
    let dt = traj.times[1] - traj.times[0];
    let n = traj.states[0].len();
    let mut worst: f64 = 0.0;
    for ti in 2..m - 2 {
        let s = &traj.states[ti];
        for &lam in lambdas {
            for j in 0..n {
                let dl = mat_time_derivative(
                    [
                        dnls_l_matrix(&traj.states[ti - 2], j, lam),
                        dnls_l_matrix(&traj.states[ti - 1], j, lam),
                        dnls_l_matrix(&traj.states[ti + 1], j, lam),
                        dnls_l_matrix(&traj.states[ti + 2], j, lam),
                    ],
                    dt,
                );
                let a_j = dnls_a_matrix(s, j, lam);
                let a_jp = dnls_a_matrix(s, (j + 1) % n, lam);
                let rhs = a_jp.mul(&dnls_l_matrix(s, j, lam)).sub(&dnls_l_matrix(s, j, lam).mul(&a_j));
                worst = worst.max(dl.sub(&rhs).max_abs());
            }
        }
    }
    worst
}

fn mat_time_derivative(samples: [Mat2; 4], dt: f64) -> Mat2 {
    // (f(-2h) - 8f(-h) + 8f(h) - f(2h)) / 12h
    samples[0]
        .sub(&samples[1].scale(Complex64::new(8.0, 0.0)))
        .add(&samples[2].scale(Complex64::new(8.0, 0.0)))
        .sub(&samples[3])
        .scale(Complex64::new(1.0 / (12.0 * dt), 0.0))
}

// ---------------------------------------------------------------------------
// Closed-form solutions
// ---------------------------------------------------------------------------

/// Discrete Toda soliton
/// q_j(t) = q₊ + ln[(1 + g e^{−2κ(j+1)+σ sinh(κ)t}) / (1 + g e^{−2κj+σ sinh(κ)t})]
/// with g = γ/(1−e^{−2κ}); p_j is the analytic time derivative.
pub fn toda_soliton(
    q_plus: f64,
    kappa: f64,
    sigma: f64,
    gamma: f64,
    j_range: std::ops::Range<i64>,
    t: f64,
    boundary: LatticeBoundary,
) -> TodaState {
    assert!(kappa > 0.0 && gamma > 0.0);
    assert!(sigma == 2.0 || sigma == -2.0, "sigma must be ±2");
    let g = gamma / (1.0 - (-2.0 * kappa).exp());
    let s = sigma * kappa.sinh();
    let e = |j: f64| g * (-2.0 * kappa * j + s * t).exp();
    let mut q = Vec::new();
    let mut p = Vec::new();
    for j in j_range {
        let j = j as f64;
        let ej = e(j);
        let ej1 = e(j + 1.0);
        q.push(q_plus + ((1.0 + ej1) / (1.0 + ej)).ln());
        p.push(s * (ej1 / (1.0 + ej1) - ej / (1.0 + ej)));
    }
    TodaState::new(q, p, boundary)
}

/// Analytic second time derivative of the soliton coordinates, for
/// equations-of-motion residual checks.
pub fn toda_soliton_qddot(kappa: f64, sigma: f64, gamma: f64, j_range: std::ops::Range<i64>, t: f64) -> Vec<f64> {
    let g = gamma / (1.0 - (-2.0 * kappa).exp());
    let s = sigma * kappa.sinh();
    let e = |j: f64| g * (-2.0 * kappa * j + s * t).exp();
    j_range
        .map(|j| {
            let j = j as f64;
            let ej = e(j);
            let ej1 = e(j + 1.0);
            s * s * (ej1 / (1.0 + ej1).powi(2) - ej / (1.0 + ej).powi(2))
        })
        .collect()
}

/// Stationary Bäcklund solution of the open Toda chain:
/// e^{q_j} = cosh(ξ+η(j+1)) / cosh(ξ+ηj), which solves
/// e^{−q_j} + e^{q_{j+1}} = Θ = 2 cosh η.
pub fn toda_bt_stationary(xi: f64, eta: f64, j_range: std::ops::Range<i64>) -> Result<Vec<f64>, LatticeError> {
    let mut out = Vec::new();
    for j in j_range {
        let denom = (xi + eta * j as f64).cosh();
        if denom.abs() < 1e-300 {
            return Err(LatticeError::PoleOnRange);
        }
        out.push((xi + eta * (j as f64 + 1.0)).cosh() / denom);
    }
    Ok(out)
}

/// Residual of the stationary difference equation 0 = e^{−q_j} + e^{q_{j+1}} − Θ.
pub fn toda_bt_stationary_residual(eq: &[f64], eta: f64) -> f64 {
    let theta = 2.0 * eta.cosh();
    eq.windows(2)
        .map(|w| (1.0 / w[0] + w[1] - theta).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_toda(n: usize, boundary: LatticeBoundary, seed: u64) -> TodaState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        TodaState::new(
            (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect(),
            (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect(),
            boundary,
        )
    }

    fn random_dnls(n: usize, amp: f64, seed: u64) -> DnlsState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp;
        DnlsState::new((0..n).map(|_| c()).collect(), (0..n).map(|_| c()).collect())
    }

    #[test]
    fn toda_equilibrium_and_two_site_force() {
        let s = TodaState::new(vec![0.0; 4], vec![0.0; 4], LatticeBoundary::Periodic);
        let (_, dp) = toda_rhs(&s);
        assert!(dp.iter().all(|&v| v == 0.0));
        let s2 = TodaState::new(vec![0.0, 0.0], vec![0.0, 0.0], LatticeBoundary::Open);
        let (_, dp2) = toda_rhs(&s2);
        assert_eq!(dp2, vec![1.0, -1.0]);
    }

    #[test]
    fn trace_charges_against_dense_power_oracle() {
        let s = random_toda(5, LatticeBoundary::Open, 11);
        let charges = toda_trace_charges(&s, 4).unwrap();
        // dense oracle
        let n = 5;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            l[j * n + j] = s.p[j];
            if j + 1 < n {
                let a = (0.5 * (s.q[j + 1] - s.q[j])).exp();
                l[j * n + j + 1] = a;
                l[(j + 1) * n + j] = a;
            }
        }
        let mut power = l.clone();
        for k in 1..=4 {
            let tr: f64 = (0..n).map(|i| power[i * n + i]).sum();
            assert!((tr - charges[k - 1]).abs() < 1e-12, "n={k}");
            let mut next = vec![0.0; n * n];
            for i in 0..n {
                for kk in 0..n {
                    if power[i * n + kk] == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        next[i * n + j] += power[i * n + kk] * l[kk * n + j];
                    }
                }
            }
            power = next;
        }
    }

    #[test]
    fn trace_is_momentum_and_tr_l2_is_energy() {
        let s = random_toda(6, LatticeBoundary::Open, 3);
        let charges = toda_trace_charges(&s, 2).unwrap();
        assert!((charges[0] - s.p.iter().sum::<f64>()).abs() < 1e-14);
        let expect: f64 = s.p.iter().map(|p| p * p).sum::<f64>()
            + 2.0 * (0..5).map(|j| (s.q[j + 1] - s.q[j]).exp()).sum::<f64>();
        assert!((charges[1] - expect).abs() < 1e-12);
        // p ≡ 0 → tr L = 0
        let s0 = TodaState::new(s.q.clone(), vec![0.0; 6], LatticeBoundary::Open);
        assert!(toda_trace_charges(&s0, 1).unwrap()[0].abs() < 1e-15);
    }

    #[test]
    fn monodromy_charges_match_polynomial_coefficients() {
        let s = random_toda(6, LatticeBoundary::Periodic, 17);
        let (t1, t2, _, i2) = toda_monodromy_charges(&s).unwrap();
        // Expand tr T(λ) as a polynomial by exact product of linear-in-λ
        // matrices with polynomial entries.
        let n = s.len();
        // entries are polynomials in λ stored as coefficient vectors
        type Poly = Vec<f64>;
        let pmul = |a: &Poly, b: &Poly| -> Poly {
            let mut out = vec![0.0; a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        };
        let padd = |a: &Poly, b: &Poly| -> Poly {
            let mut out = vec![0.0; a.len().max(b.len())];
            for (i, x) in a.iter().enumerate() {
                out[i] += x;
            }
            for (i, y) in b.iter().enumerate() {
                out[i] += y;
            }
            out
        };
        let mut t: [[Poly; 2]; 2] = [[vec![1.0], vec![0.0]], [vec![0.0], vec![1.0]]];
        for j in 0..n {
            let l: [[Poly; 2]; 2] = [
                [vec![-s.p[j], 1.0], vec![s.q[j].exp()]],
                [vec![-(-s.q[j]).exp()], vec![0.0]],
            ];
            let mut nt: [[Poly; 2]; 2] = [[vec![0.0], vec![0.0]], [vec![0.0], vec![0.0]]];
            for r in 0..2 {
                for c in 0..2 {
                    nt[r][c] = padd(&pmul(&l[r][0], &t[0][c]), &pmul(&l[r][1], &t[1][c]));
                }
            }
            t = nt;
        }
        let trace = padd(&t[0][0], &t[1][1]);
        assert!((trace[n] - 1.0).abs() < 1e-12, "leading coefficient");
        assert!((trace[n - 1] - t1).abs() < 1e-10, "t1 {} vs {}", trace[n - 1], t1);
        assert!((trace[n - 2] - t2).abs() < 1e-10, "t2 {} vs {}", trace[n - 2], t2);
        // I2 = −H_periodic exactly
        assert!((i2 + toda_energy_periodic(&s)).abs() < 1e-12);
        // equilibrium values
        let s0 = TodaState::new(vec![0.0; 6], vec![0.0; 6], LatticeBoundary::Periodic);
        let (t1, t2, _, _) = toda_monodromy_charges(&s0).unwrap();
        assert_eq!(t1, 0.0);
        assert_eq!(t2, -6.0);
    }

    #[test]
    fn open_charges_conserved_along_flow() {
        let s = random_toda(8, LatticeBoundary::Open, 23);
        let c0 = toda_trace_charges(&s, 4).unwrap();
        let traj = evolve_toda(&s, 1e-3, 10_000, 10_000);
        let c1 = toda_trace_charges(traj.states.last().unwrap(), 4).unwrap();
        for (a, b) in c0.iter().zip(&c1) {
            let denom = a.abs().max(1.0);
            assert!((a - b).abs() / denom < 1e-6, "drift {} -> {}", a, b);
        }
        let e0 = toda_energy_open(&s);
        let e1 = toda_energy_open(traj.states.last().unwrap());
        assert!((e0 - e1).abs() / e0.abs() < 1e-6);
    }

    #[test]
    fn transfer_trace_constant_in_time() {
        let s = random_toda(6, LatticeBoundary::Periodic, 29);
        let lambdas = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.0, 1.0),
        ];
        let tr0: Vec<Complex64> = lambdas.iter().map(|&l| transfer_trace_toda(&s, l).unwrap()).collect();
        let traj = evolve_toda(&s, 1e-3, 5000, 5000);
        let send = traj.states.last().unwrap();
        for (&lam, &t0) in lambdas.iter().zip(&tr0) {
            let t1 = transfer_trace_toda(send, lam).unwrap();
            assert!((t1 - t0).norm() / t0.norm() < 1e-6, "λ={lam}");
        }
    }

    #[test]
    fn dnls_zero_state_values() {
        let s = DnlsState::new(vec![Complex64::new(0.0, 0.0); 5], vec![Complex64::new(0.0, 0.0); 5]);
        let (dx, dcx) = dnls_rhs(&s);
        assert!(dx.iter().chain(&dcx).all(|v| v.norm() == 0.0));
        let (i1, i2, i3) = dnls_charges(&s);
        assert!((i1.re - 5.0).abs() < 1e-15);
        assert!((i2.re + 2.5).abs() < 1e-15);
        assert!((i3.re - 5.0 / 3.0).abs() < 1e-14);
        // transfer trace at zero fields is the plain product
        let lam = Complex64::new(1.3, 0.4);
        let tr = transfer_trace_dnls(&s, lam);
        let direct = {
            let l = dnls_l_matrix(&s, 0, lam);
            let mut t = Mat2::identity();
            for _ in 0..5 {
                t = l.mul(&t);
            }
            t.trace()
        };
        assert!((tr - direct).norm() < 1e-12);
    }

    #[test]
    fn dnls_single_site_linearization() {
        // x = ε at site 0 only, X = 0: dx_j = −2x_{j+1} + x_j + x_{j+2} exactly
        let n = 6;
        let eps = 1e-3;
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        x[0] = Complex64::new(eps, 0.0);
        let s = DnlsState::new(x.clone(), vec![Complex64::new(0.0, 0.0); n]);
        let (dx, _) = dnls_rhs(&s);
        for j in 0..n {
            let expect = -x[(j + 1) % n] * 2.0 + x[j] + x[(j + 2) % n];
            assert!((dx[j] - expect).norm() < 1e-18, "site {j}");
        }
    }

    #[test]
    fn dnls_charges_match_duplicate_formula_and_log_expansion() {
        let s = random_dnls(4, 0.4, 41);
        let (i1, i2, i3) = dnls_charges(&s);
        // duplicate transcription of the formulas
        let n = 4;
        let nv: Vec<Complex64> = (0..n).map(|j| s.n_j(j)).collect();
        let mut j1 = Complex64::new(0.0, 0.0);
        let mut j2 = Complex64::new(0.0, 0.0);
        let mut j3 = Complex64::new(0.0, 0.0);
        for j in 0..n {
            j1 += nv[j];
        }
        for j in 0..n {
            j2 += s.x[j] * s.cap_x[(j + n - 1) % n];
        }
        for j in 0..n {
            j2 -= nv[j] * nv[j] * 0.5;
        }
        for j in 0..n {
            j3 += s.x[j] * s.cap_x[(j + n - 2) % n]
                - (nv[j] + nv[(j + n - 1) % n]) * s.x[j] * s.cap_x[(j + n - 1) % n]
                + nv[j].powu(3) / 3.0;
        }
        assert!((i1 - j1).norm() < 1e-14);
        assert!((i2 - j2).norm() < 1e-14);
        assert!((i3 - j3).norm() < 1e-14);
    }

    #[test]
    fn dnls_conservation_and_order_check() {
        let s = random_dnls(8, 0.05, 7);
        let c0 = dnls_charges(&s);
        let drift = |dt: f64| {
            let steps = (1.0 / dt).round() as usize;
            let traj = evolve_dnls(&s, dt, steps, steps);
            let c1 = dnls_charges(traj.states.last().unwrap());
            let d1 = (c1.0 - c0.0).norm() / c0.0.norm();
            let d2 = (c1.1 - c0.1).norm() / c0.1.norm();
            let d3 = (c1.2 - c0.2).norm() / c0.2.norm();
            d1.max(d2).max(d3)
        };
        assert!(drift(1e-3) < 1e-6);
        // RK4 order: halving dt cuts drift ≥ 8x (coarse dt so roundoff is negligible)
        let dcoarse = drift(0.04);
        let dfine = drift(0.02);
        assert!(dcoarse / dfine >= 8.0, "ratio {}", dcoarse / dfine);
    }

    #[test]
    fn dnls_zero_curvature_along_trajectory() {
        let s = random_dnls(6, 0.1, 13);
        let traj = evolve_dnls(&s, 1e-3, 200, 1);
        let lambdas = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-2.0, 0.0)];
        let r = semidiscrete_zc_residual_dnls(&traj, &lambdas);
        assert!(r < 1e-8, "residual {r}");
    }

    #[test]
    fn toda_soliton_satisfies_eom_analytically() {
        let (kappa, sigma, gamma) = (0.8, 2.0, 0.7);
        for &t in &[-2.0, 0.0, 1.5] {
            let s = toda_soliton(0.1, kappa, sigma, gamma, -12..13, t, LatticeBoundary::Open);
            let qdd = toda_soliton_qddot(kappa, sigma, gamma, -12..13, t);
            // interior sites: compare with e^{q_{j+1}−q_j} − e^{q_j−q_{j−1}}
            for j in 1..s.len() - 1 {
                let rhs = (s.q[j + 1] - s.q[j]).exp() - (s.q[j] - s.q[j - 1]).exp();
                assert!((qdd[j] - rhs).abs() < 1e-8, "site {j} t {t}");
            }
        }
    }

    #[test]
    fn toda_soliton_past_limit_and_zc() {
        // σ sinh(κ) t → −∞ ⇒ q_j → q₊
        let s = toda_soliton(0.3, 1.0, 2.0, 0.5, -5..6, -30.0, LatticeBoundary::Open);
        for &q in &s.q {
            assert!((q - 0.3).abs() < 1e-12);
        }
        // p from dq/dt by central differences
        let h = 1e-3;
        let sp = toda_soliton(0.3, 1.0, 2.0, 0.5, -5..6, h, LatticeBoundary::Open);
        let sm = toda_soliton(0.3, 1.0, 2.0, 0.5, -5..6, -h, LatticeBoundary::Open);
        let s0 = toda_soliton(0.3, 1.0, 2.0, 0.5, -5..6, 0.0, LatticeBoundary::Open);
        for j in 0..s0.len() {
            let fd = (sp.q[j] - sm.q[j]) / (2.0 * h);
            assert!((fd - s0.p[j]).abs() < 1e-6, "site {j}");
        }
    }

    #[test]
    fn toda_bt_stationary_identity() {
        // η = 0 → e^{q_j} = 1
        let flat = toda_bt_stationary(0.4, 0.0, -10..11).unwrap();
        assert!(flat.iter().all(|&e| (e - 1.0).abs() < 1e-15));
        let eq = toda_bt_stationary(0.3, 0.7, -10..11).unwrap();
        assert!(toda_bt_stationary_residual(&eq, 0.7) < 1e-12);
        // large-j limit e^{q_j} → e^η
        let tail = toda_bt_stationary(0.3, 0.7, 40..45).unwrap();
        for e in tail {
            assert!((e - 0.7f64.exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn static_equilibrium_zc_residual_vanishes() {
        let s = TodaState::new(vec![0.0; 6], vec![0.0; 6], LatticeBoundary::Periodic);
        let traj = TodaTrajectory { times: (0..5).map(|i| i as f64 * 0.01).collect(), states: vec![s; 5] };
        let lam = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        assert!(semidiscrete_zc_residual_toda(&traj, &lam) < 1e-10);
    }
}
