//! Lewis-Riesenfeld invariant machinery for the four-level Hamiltonian with
//! Omega_y = 0: the alpha-parameterization of the invariant, its eigensystem,
//! the LR phases, coupling extraction, and a residual checker.
//!
//! The invariant is I(t) = sum_i alpha_i(t) G_i over the closed algebra
//! G_1..G_4 below, in the fixed basis order (|10>, |00>, |01>, |11>). Given
//! free functions alpha_1(t), alpha_2(t) and constants C1, C2, xi, the
//! remaining components are
//!     alpha_3 = xi sqrt(2 C2 - [a1^2 + a2^2] + C1 a2),
//!     alpha_4 = C1 - alpha_2,
//! and the Hamiltonian H = (hbar/2)(Omega_x G_1 + Omega_rho G_2) satisfying
//! dI/dt + (i/hbar)[H, I] = 0 has
//!     Omega_x = -a2_dot / alpha_3,   Omega_rho = 2 a1_dot / alpha_3.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics;
use crate::schemes::PulseSchedule;

/// Basis dimension of the reduced model.
pub const DIM: usize = 4;

pub type Mat4 = [[C64; 4]; 4];

const I_UNIT: C64 = C64::new(0.0, 1.0);

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// The Hermitian operator algebra underlying H and I, in basis
/// (|10>, |00>, |01>, |11>).
pub fn g_matrices() -> [Mat4; 4] {
    let z = C64::new(0.0, 0.0);
    let one = c(1.0);
    let g1 = [
        [z, one, z, z],
        [one, z, z, z],
        [z, z, z, one],
        [z, z, one, z],
    ];
    let g2 = [
        [z, z, one, z],
        [z, z, z, z],
        [one, z, z, z],
        [z, z, z, z],
    ];
    let g3 = [
        [z, z, z, I_UNIT],
        [z, z, -I_UNIT, z],
        [z, I_UNIT, z, z],
        [-I_UNIT, z, z, z],
    ];
    let g4 = [
        [z, z, z, z],
        [z, z, z, one],
        [z, z, z, z],
        [z, one, z, z],
    ];
    [g1, g2, g3, g4]
}

/// Sign of the alpha_3 square root branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Xi {
    Plus,
    Minus,
}

impl Xi {
    pub fn value(self) -> f64 {
        match self {
            Xi::Plus => 1.0,
            Xi::Minus => -1.0,
        }
    }
}

/// Constants of the invariant family.
#[derive(Debug, Clone, Copy)]
pub struct InvariantConstants {
    pub c1: f64,
    pub c2: f64,
    pub xi: Xi,
    /// Q = sqrt(C1^2 + 8 C2), cached.
    q: f64,
}

impl InvariantConstants {
    pub fn new(c1: f64, c2: f64, xi: Xi) -> Result<Self> {
        let q2 = c1 * c1 + 8.0 * c2;
        if !(q2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "C1^2 + 8 C2 must be positive for a nonzero Q, got {q2}"
            )));
        }
        Ok(Self { c1, c2, xi, q: q2.sqrt() })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Invariant eigenvalues (kappa_1, kappa_2, kappa_3, kappa_4).
    pub fn kappas(&self) -> [f64; 4] {
        [
            0.5 * (-self.c1 - self.q),
            0.5 * (self.c1 - self.q),
            0.5 * (-self.c1 + self.q),
            0.5 * (self.c1 + self.q),
        ]
    }
}

/// The two free functions of the parameterization, with first derivatives.
///
/// `radicand` may be overridden when the parameterization admits a
/// better-conditioned closed form near the endpoints (both shipped schemes
/// do); the default evaluates the defining expression directly.
pub trait AlphaFunctions: Send + Sync {
    fn alpha1(&self, t: f64) -> f64;
    fn alpha1_dot(&self, t: f64) -> f64;
    fn alpha2(&self, t: f64) -> f64;
    fn alpha2_dot(&self, t: f64) -> f64;

    fn radicand(&self, t: f64, constants: &InvariantConstants) -> f64 {
        let a1 = self.alpha1(t);
        let a2 = self.alpha2(t);
        2.0 * constants.c2 - (a1 * a1 + a2 * a2) + constants.c1 * a2
    }
}

/// An immutable invariant trajectory over [0, T].
#[derive(Clone)]
pub struct InvariantTrajectory {
    alphas: Arc<dyn AlphaFunctions>,
    constants: InvariantConstants,
    total_time: f64,
}

/// Tolerance below which a slightly negative radicand is clamped to zero.
const RADICAND_TOL: f64 = 1e-12;

impl InvariantTrajectory {
    /// Validate (by dense sampling) that the radicand stays non-negative and
    /// wrap the alpha functions.
    pub fn new(
        alphas: Arc<dyn AlphaFunctions>,
        constants: InvariantConstants,
        total_time: f64,
    ) -> Result<Self> {
        if !(total_time > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "total time must be positive, got {total_time}"
            )));
        }
        let scale = constants.q() * constants.q();
        let n = 4096;
        for i in 0..=n {
            let t = total_time * i as f64 / n as f64;
            let rad = alphas.radicand(t, &constants);
            if rad < -RADICAND_TOL * scale.max(1.0) {
                return Err(Error::Domain {
                    t,
                    message: format!("alpha_3 radicand negative ({rad:.3e}) at construction"),
                });
            }
        }
        Ok(Self { alphas, constants, total_time })
    }

    pub fn constants(&self) -> &InvariantConstants {
        &self.constants
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn alpha1(&self, t: f64) -> f64 {
        self.alphas.alpha1(t)
    }

    pub fn alpha1_dot(&self, t: f64) -> f64 {
        self.alphas.alpha1_dot(t)
    }

    pub fn alpha2(&self, t: f64) -> f64 {
        self.alphas.alpha2(t)
    }

    pub fn alpha2_dot(&self, t: f64) -> f64 {
        self.alphas.alpha2_dot(t)
    }

    /// alpha_3(t) = xi sqrt(2 C2 - [a1^2 + a2^2] + C1 a2).
    pub fn alpha3(&self, t: f64) -> Result<f64> {
        let rad = self.alphas.radicand(t, &self.constants);
        let scale = self.constants.q() * self.constants.q();
        if rad < -RADICAND_TOL * scale.max(1.0) {
            return Err(Error::Domain {
                t,
                message: format!("alpha_3 radicand negative: {rad:.6e}"),
            });
        }
        Ok(self.constants.xi.value() * rad.max(0.0).sqrt())
    }

    /// alpha_4(t) = C1 - alpha_2(t).
    pub fn alpha4(&self, t: f64) -> f64 {
        self.constants.c1 - self.alphas.alpha2(t)
    }

    /// d alpha_3 / dt from the analytic derivative of the radicand.
    /// Only valid where alpha_3 != 0.
    pub fn alpha3_dot(&self, t: f64) -> Result<f64> {
        let a3 = self.alpha3(t)?;
        if a3 == 0.0 {
            return Err(Error::Singularity {
                t,
                message: "alpha_3 vanishes; alpha_3_dot undefined".into(),
            });
        }
        let a1 = self.alpha1(t);
        let a2 = self.alpha2(t);
        let da1 = self.alpha1_dot(t);
        let da2 = self.alpha2_dot(t);
        Ok((self.constants.c1 * da2 - 2.0 * a1 * da1 - 2.0 * a2 * da2) / (2.0 * a3))
    }

    /// Coupling strengths (Omega_x, Omega_rho) = (-a2_dot/a3, 2 a1_dot/a3).
    ///
    /// Where alpha_3 vanishes (scheme endpoints), the limit is taken by
    /// one-sided quadratic extrapolation from interior samples; if no finite
    /// limit exists the call reports a singularity.
    pub fn couplings(&self, t: f64) -> Result<(f64, f64)> {
        let a3 = self.alpha3(t)?;
        let q = self.constants.q();
        if a3.abs() > 1e-7 * q {
            return Ok(self.couplings_direct(t, a3));
        }
        // 0/0 candidate: extrapolate from the interior side
        let h = 1e-3 * self.total_time;
        let dir = if t < 0.5 * self.total_time { 1.0 } else { -1.0 };
        let mut samples = [(0.0, 0.0); 3];
        for (i, s) in samples.iter_mut().enumerate() {
            let ti = t + dir * h * (i + 1) as f64;
            let a3i = self.alpha3(ti)?;
            if a3i.abs() < 1e-14 * q {
                return Err(Error::Singularity {
                    t,
                    message: "alpha_3 vanishes on a neighbourhood; couplings have no limit".into(),
                });
            }
            *s = self.couplings_direct(ti, a3i);
        }
        // quadratic extrapolation to the endpoint
        let ox = 3.0 * samples[0].0 - 3.0 * samples[1].0 + samples[2].0;
        let orho = 3.0 * samples[0].1 - 3.0 * samples[1].1 + samples[2].1;
        if !ox.is_finite() || !orho.is_finite() {
            return Err(Error::Singularity {
                t,
                message: "coupling limit diverges".into(),
            });
        }
        Ok((ox, orho))
    }

    fn couplings_direct(&self, t: f64, a3: f64) -> (f64, f64) {
        (-self.alpha2_dot(t) / a3, 2.0 * self.alpha1_dot(t) / a3)
    }

    /// The invariant as a concrete Hermitian matrix sum_i alpha_i G_i.
    pub fn matrix(&self, t: f64) -> Result<Mat4> {
        let [g1, g2, g3, g4] = g_matrices();
        let a = [self.alpha1(t), self.alpha2(t), self.alpha3(t)?, self.alpha4(t)];
        let mut m = [[C64::new(0.0, 0.0); 4]; 4];
        for (coef, g) in a.iter().zip([&g1, &g2, &g3, &g4]) {
            for r in 0..4 {
                for col in 0..4 {
                    m[r][col] += c(*coef) * g[r][col];
                }
            }
        }
        Ok(m)
    }

    /// Eigenvalues and the four closed-form eigenvectors of I(t).
    pub fn eigensystem(&self, t: f64) -> Result<InvariantEigensystem> {
        let cst = &self.constants;
        let q = cst.q();
        let a1 = self.alpha1(t);
        let a2 = self.alpha2(t);
        let a3 = self.alpha3(t)?;
        // B_pm denominators: +C1 + Q - 2 a2 and -C1 + Q + 2 a2
        let den_p = cst.c1 + q - 2.0 * a2;
        let den_m = -cst.c1 + q + 2.0 * a2;
        let tol = 1e-12 * q.max(1.0);
        if den_p <= tol || den_m <= tol {
            return Err(Error::Degenerate {
                t,
                message: format!(
                    "eigenvector denominators vanish (C1+Q-2a2 = {den_p:.3e}, -C1+Q+2a2 = {den_m:.3e})"
                ),
            });
        }
        let b_p = (q / den_p).sqrt();
        let b_m = (q / den_m).sqrt();
        let d_p = C64::new(a1, a3) / q;
        let d_m = C64::new(-a1, a3) / q;

        let half_bp = c(0.5 / b_p);
        let half_bm = c(0.5 / b_m);
        let phi1 = [-c(b_p) * d_m, -half_bp, c(b_p) * d_m, half_bp];
        let phi2 = [-c(b_m) * d_p, half_bm, -c(b_m) * d_p, half_bm];
        let phi3 = [c(b_m) * d_m, -half_bm, -c(b_m) * d_m, half_bm];
        let phi4 = [c(b_p) * d_p, half_bp, c(b_p) * d_p, half_bp];

        Ok(InvariantEigensystem {
            kappas: cst.kappas(),
            phis: [phi1, phi2, phi3, phi4],
        })
    }

    /// LR-phase integrand d(chi_pm)/dt.
    ///
    /// The closed form reduces algebraically (using Q^2 = C1^2 + 8 C2, which
    /// makes the bracket in the numerator equal (C1 +- Q - 2 a2)^2 / 2) to
    ///     a1 a2_dot / [alpha_3 (C1 +- Q - 2 a2)],
    /// which is the form evaluated here; it avoids the catastrophic
    /// cancellation of the cubed denominator near the endpoints. At scheme
    /// endpoints the limit is 0 because a1 a2_dot vanishes faster than the
    /// denominator.
    pub fn chi_integrand(&self, t: f64, plus: bool) -> Result<f64> {
        let cst = &self.constants;
        let q = cst.q();
        let a1 = self.alpha1(t);
        let da2 = self.alpha2_dot(t);
        let a3 = self.alpha3(t)?;
        let den_lin = if plus {
            cst.c1 + q - 2.0 * self.alpha2(t)
        } else {
            cst.c1 - q - 2.0 * self.alpha2(t)
        };
        let den = a3 * den_lin;
        let num = a1 * da2;
        if den.abs() < 1e-300 {
            if num.abs() < 1e-150 {
                return Ok(0.0); // resolvable 0/0 endpoint limit
            }
            return Err(Error::Quadrature(format!(
                "non-integrable LR-phase singularity at t = {t}"
            )));
        }
        Ok(num / den)
    }

    /// chi_+(T): total accumulated phase, by adaptive quadrature.
    pub fn chi_plus_total(&self) -> Result<f64> {
        let f = |t: f64| self.chi_integrand(t, true).unwrap_or(f64::NAN);
        let v = numerics::integrate(&f, 0.0, self.total_time, 1e-11)?;
        if !v.is_finite() {
            return Err(Error::Quadrature("chi_+ integrand left its domain".into()));
        }
        Ok(v)
    }
}

/// Eigenvalues and instantaneous eigenvectors of I(t), basis
/// (|10>, |00>, |01>, |11>).
#[derive(Debug, Clone)]
pub struct InvariantEigensystem {
    pub kappas: [f64; 4],
    pub phis: [[C64; 4]; 4],
}

/// Cumulative LR phases chi_pm on a uniform node grid, linearly interpolated
/// between nodes. beta_1 = -chi_+, beta_2 = chi_-, beta_3 = -chi_-,
/// beta_4 = chi_+.
#[derive(Debug, Clone)]
pub struct LrPhases {
    total_time: f64,
    chi_plus: Vec<f64>,
    chi_minus: Vec<f64>,
}

impl LrPhases {
    fn interp(table: &[f64], total_time: f64, t: f64) -> f64 {
        let n = table.len() - 1;
        let u = (t / total_time * n as f64).clamp(0.0, n as f64);
        let i = (u.floor() as usize).min(n - 1);
        let frac = u - i as f64;
        table[i] * (1.0 - frac) + table[i + 1] * frac
    }

    pub fn chi_plus(&self, t: f64) -> f64 {
        Self::interp(&self.chi_plus, self.total_time, t)
    }

    pub fn chi_minus(&self, t: f64) -> f64 {
        Self::interp(&self.chi_minus, self.total_time, t)
    }

    /// beta_n(t) for n in 1..=4.
    pub fn beta(&self, n: usize, t: f64) -> f64 {
        match n {
            1 => -self.chi_plus(t),
            2 => self.chi_minus(t),
            3 => -self.chi_minus(t),
            4 => self.chi_plus(t),
            _ => panic!("beta index must be 1..=4"),
        }
    }
}

/// Compute the cumulative LR phases on `n_nodes + 1` uniform nodes, each
/// segment integrated adaptively to absolute tolerance 1e-10 overall.
pub fn lr_phases(traj: &InvariantTrajectory, n_nodes: usize) -> Result<LrPhases> {
    let total_time = traj.total_time();
    let seg_tol = 1e-10 / n_nodes as f64;
    let mut chi_plus = Vec::with_capacity(n_nodes + 1);
    let mut chi_minus = Vec::with_capacity(n_nodes + 1);
    chi_plus.push(0.0);
    chi_minus.push(0.0);
    let mut acc_p = 0.0;
    let mut acc_m = 0.0;
    for i in 0..n_nodes {
        let a = total_time * i as f64 / n_nodes as f64;
        let b = total_time * (i + 1) as f64 / n_nodes as f64;
        let fp = |t: f64| traj.chi_integrand(t, true).unwrap_or(f64::NAN);
        let fm = |t: f64| traj.chi_integrand(t, false).unwrap_or(f64::NAN);
        acc_p += numerics::integrate(&fp, a, b, seg_tol)?;
        acc_m += numerics::integrate(&fm, a, b, seg_tol)?;
        if !acc_p.is_finite() || !acc_m.is_finite() {
            return Err(Error::Quadrature(format!(
                "LR-phase integrand not finite in [{a}, {b}]"
            )));
        }
        chi_plus.push(acc_p);
        chi_minus.push(acc_m);
    }
    Ok(LrPhases { total_time, chi_plus, chi_minus })
}

/// Max Frobenius norm of dI/dt + (i/hbar)[H, I] over `n_samples` interior
/// sample times, with dI/dt from the analytic alpha derivatives and H built
/// from the schedule's couplings. Large residuals are reported, not errors.
pub fn verify_invariant(
    schedule: &PulseSchedule,
    traj: &InvariantTrajectory,
    n_samples: usize,
) -> Result<f64> {
    let [g1, g2, g3, g4] = g_matrices();
    let total_time = traj.total_time();
    let mut worst = 0.0_f64;
    for k in 0..n_samples {
        // interior sampling: alpha_3 vanishes at the exact endpoints
        let t = total_time * (k as f64 + 0.5) / n_samples as f64;
        let a3 = traj.alpha3(t)?;
        if a3.abs() < 1e-9 * traj.constants().q() {
            continue;
        }
        let da = [
            traj.alpha1_dot(t),
            traj.alpha2_dot(t),
            traj.alpha3_dot(t)?,
            -traj.alpha2_dot(t),
        ];
        let i_mat = traj.matrix(t)?;
        let ox = schedule.omega_x(t);
        let orho = schedule.omega_rho(t);
        // H/hbar = (Omega_x G1 + Omega_rho G2)/2
        let mut resid = [[C64::new(0.0, 0.0); 4]; 4];
        for r in 0..4 {
            for col in 0..4 {
                resid[r][col] = c(da[0]) * g1[r][col]
                    + c(da[1]) * g2[r][col]
                    + c(da[2]) * g3[r][col]
                    + c(da[3]) * g4[r][col];
            }
        }
        // add (i/hbar) [H, I]
        for r in 0..4 {
            for col in 0..4 {
                let mut hi = C64::new(0.0, 0.0);
                let mut ih = C64::new(0.0, 0.0);
                for m in 0..4 {
                    let h_rm = c(0.5 * ox) * g1[r][m] + c(0.5 * orho) * g2[r][m];
                    hi += h_rm * i_mat[m][col];
                    let h_mcol = c(0.5 * ox) * g1[m][col] + c(0.5 * orho) * g2[m][col];
                    ih += i_mat[r][m] * h_mcol;
                }
                resid[r][col] += I_UNIT * (hi - ih);
            }
        }
        let fro: f64 = resid
            .iter()
            .flat_map(|row| row.iter())
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(fro);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Constant-alpha trajectory for algebra tests.
    struct ConstAlphas {
        a1: f64,
        a2: f64,
    }

    impl AlphaFunctions for ConstAlphas {
        fn alpha1(&self, _t: f64) -> f64 {
            self.a1
        }
        fn alpha1_dot(&self, _t: f64) -> f64 {
            0.0
        }
        fn alpha2(&self, _t: f64) -> f64 {
            self.a2
        }
        fn alpha2_dot(&self, _t: f64) -> f64 {
            0.0
        }
    }

    fn traj(a1: f64, a2: f64) -> InvariantTrajectory {
        let constants = InvariantConstants::new(10.0, 11.0, Xi::Plus).unwrap();
        InvariantTrajectory::new(Arc::new(ConstAlphas { a1, a2 }), constants, 1.0).unwrap()
    }

    #[test]
    fn alpha3_boundary_and_interior_values() {
        let cst = InvariantConstants::new(10.0, 11.0, Xi::Plus).unwrap();
        let q = cst.q();
        assert!((q - 188.0_f64.sqrt()).abs() < 1e-14);
        // boundary value alpha_2 = (C1 - Q)/2 makes the radicand vanish
        let t0 = traj(0.0, 0.5 * (10.0 - q));
        assert!(t0.alpha3(0.0).unwrap().abs() < 1e-7);
        // alpha_1 = 0, alpha_2 = C1/2 = 5: radicand = 22 - 25 + 50 = 47
        let t1 = traj(0.0, 5.0);
        assert!((t1.alpha3(0.0).unwrap() - 47.0_f64.sqrt()).abs() < 1e-12);
        // xi flips the sign
        let cst_m = InvariantConstants::new(10.0, 11.0, Xi::Minus).unwrap();
        let tm =
            InvariantTrajectory::new(Arc::new(ConstAlphas { a1: 0.0, a2: 5.0 }), cst_m, 1.0)
                .unwrap();
        assert!((tm.alpha3(0.0).unwrap() + 47.0_f64.sqrt()).abs() < 1e-12);
        // alpha_4 = C1 - alpha_2 identically
        assert_eq!(t1.alpha4(0.3), 10.0 - 5.0);
    }

    #[test]
    fn radicand_out_of_domain_is_rejected() {
        let constants = InvariantConstants::new(10.0, 11.0, Xi::Plus).unwrap();
        // alpha_2 far outside [(C1-Q)/2, (C1+Q)/2] makes the radicand negative
        let r = InvariantTrajectory::new(
            Arc::new(ConstAlphas { a1: 0.0, a2: 40.0 }),
            constants,
            1.0,
        );
        assert!(matches!(r, Err(Error::Domain { .. })));
    }

    #[test]
    fn kappa_values() {
        let cst = InvariantConstants::new(10.0, 11.0, Xi::Plus).unwrap();
        let ks = cst.kappas();
        let q = 188.0_f64.sqrt();
        assert!((ks[0] - 0.5 * (-10.0 - q)).abs() < 1e-14);
        assert!((ks[1] - 0.5 * (10.0 - q)).abs() < 1e-14);
        assert!((ks[2] - 0.5 * (-10.0 + q)).abs() < 1e-14);
        assert!((ks[3] - 0.5 * (10.0 + q)).abs() < 1e-14);
        assert!((ks[0] + 11.856).abs() < 1e-3);
        assert!((ks[1] + 1.856).abs() < 1e-3);
    }

    #[test]
    fn eigensystem_solves_invariant() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let cst = InvariantConstants::new(10.0, 11.0, Xi::Plus).unwrap();
        let q = cst.q();
        for _ in 0..50 {
            // sample alpha_2 strictly inside the allowed interval, then a
            // compatible alpha_1
            let a2 = 0.5 * (10.0 - q) + q * rng.gen_range(0.05..0.95);
            let max_a1_sq = 2.0 * 11.0 + (10.0 - a2) * a2;
            let a1 = (max_a1_sq.max(0.0)).sqrt() * rng.gen_range(-0.9..0.9);
            let tr = traj(a1, a2);
            let sys = tr.eigensystem(0.0).unwrap();
            let m = tr.matrix(0.0).unwrap();
            for i in 0..4 {
                // residual of the eigen equation
                let mut worst = 0.0_f64;
                for r in 0..4 {
                    let mut v = C64::new(0.0, 0.0);
                    for col in 0..4 {
                        v += m[r][col] * sys.phis[i][col];
                    }
                    worst = worst.max((v - c(sys.kappas[i]) * sys.phis[i][r]).norm());
                }
                assert!(worst < 1e-10, "eigen residual {worst} for phi_{}", i + 1);
                // unit norm
                let n: f64 = sys.phis[i].iter().map(|z| z.norm_sqr()).sum();
                assert!((n - 1.0).abs() < 1e-12);
            }
            // orthogonality of all pairs
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let dot: C64 = (0..4)
                        .map(|k| sys.phis[i][k].conj() * sys.phis[j][k])
                        .sum();
                    assert!(dot.norm() < 1e-12, "<phi_{}|phi_{}> = {dot}", i + 1, j + 1);
                }
            }
            // D_+^* = -D_-, checked through the first components of phi_4, phi_1
            let d_p = C64::new(a1, tr.alpha3(0.0).unwrap()) / q;
            let d_m = C64::new(-a1, tr.alpha3(0.0).unwrap()) / q;
            assert!((d_p.conj() + d_m).norm() < 1e-14);
        }
    }

    #[test]
    fn eigensystem_degenerate_at_boundary() {
        let cst = InvariantConstants::new(10.0, 11.0, Xi::Plus).unwrap();
        let q = cst.q();
        let tr = traj(0.0, 0.5 * (10.0 + q)); // B_+ denominator vanishes
        assert!(matches!(tr.eigensystem(0.0), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn constant_alphas_have_zero_couplings_and_phases() {
        let tr = traj(1.0, 5.0);
        let (ox, orho) = tr.couplings(0.5).unwrap();
        assert_eq!(ox, 0.0);
        assert_eq!(orho, 0.0);
        // chi integrand proportional to a1 * a2_dot = 0
        let phases = lr_phases(&tr, 64).unwrap();
        assert_eq!(phases.chi_plus(1.0), 0.0);
        assert_eq!(phases.chi_minus(1.0), 0.0);
    }
}
