//! Time-dependent few-level models: the resonant rotating-wave four-level
//! Hamiltonian, the detuned pre-RWA four-level Hamiltonian, and the
//! six-level extension including |20> and |02>, plus a fixed-step RK4
//! integrator and population/fidelity observables.
//!
//! Basis order: (|10>, |00>, |01>, |11>) and, for six levels,
//! (|10>, |00>, |01>, |11>, |20>, |02>). All Hamiltonians are returned as
//! full H/hbar matrices ready for i d(psi)/dt = H psi.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lattice::WellSpectrum;
use crate::schemes::PulseSchedule;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn cis(phase: f64) -> C64 {
    C64::new(phase.cos(), phase.sin())
}

/// State of the reduced model at a given time.
#[derive(Debug, Clone)]
pub struct LevelState {
    pub amplitudes: Vec<C64>,
    pub time: f64,
}

impl LevelState {
    pub fn new(amplitudes: Vec<C64>, time: f64) -> Self {
        Self { amplitudes, time }
    }

    /// |00> in the 4-level basis.
    pub fn ground4() -> Self {
        Self::new(vec![c(0.0), c(1.0), c(0.0), c(0.0)], 0.0)
    }

    /// |00> in the 6-level basis.
    pub fn ground6() -> Self {
        Self::new(vec![c(0.0), c(1.0), c(0.0), c(0.0), c(0.0), c(0.0)], 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Per-basis-state probabilities plus |<state|->|^2.
pub fn populations_and_fidelity(state: &LevelState) -> (Vec<f64>, f64) {
    let pops: Vec<f64> = state.amplitudes.iter().map(|a| a.norm_sqr()).collect();
    // <-| = (<10| + i <01|)/sqrt(2) in the fixed basis order
    let overlap = state.amplitudes[0] + C64::new(0.0, 1.0) * state.amplitudes[2];
    (pops, 0.5 * overlap.norm_sqr())
}

/// The resonant rotating-wave four-level Hamiltonian (H/hbar).
pub fn h4l_rwa(omega_x: f64, omega_rho: f64, omega_y: f64) -> [[C64; 4]; 4] {
    let z = C64::new(0.0, 0.0);
    let ox = c(0.5 * omega_x);
    let orho = c(0.5 * omega_rho);
    let oy = C64::new(0.0, 0.5 * omega_y); // i Omega_y / 2
    [
        [z, ox, orho, -oy],
        [ox, z, -oy, z],
        [orho, oy, z, ox],
        [oy, z, ox, z],
    ]
}

/// Detuned pre-RWA four-level Hamiltonian (H/hbar) at time `t`, with the
/// carrier frequency `omega_x_carrier` (resonance is -omega_d) and
/// omega_y = omega_x. The pulse envelope is the resonance-calibrated one:
/// g_x = hbar Omega_x / (m omega_d^2 gamma_1) held fixed while the carrier
/// is detuned, so the drive carries a (omega_x/omega_d)^2 amplitude factor.
pub fn h4l_detuned(
    t: f64,
    schedule: &PulseSchedule,
    spectrum: &WellSpectrum,
    omega_x_carrier: f64,
) -> [[C64; 4]; 4] {
    let z = C64::new(0.0, 0.0);
    let wd = spectrum.omega_d;
    let wx = omega_x_carrier;
    let ratio = (wx / wd) * (wx / wd);
    let ox = schedule.omega_x(t);
    let orho = schedule.omega_rho(t);

    // half couplings
    let x_half = 0.5 * ox * ratio;
    let r_half = c(0.5 * orho);
    // |10><00|: e^{-i wx t} gamma1 f_x = (Ox/2) ratio (1 + e^{-2 i wx t})
    let h10_00 = c(x_half) * (c(1.0) + cis(-2.0 * wx * t));
    // |01><11|: e^{-i wd t} gamma1 f_x = (Ox/2) ratio (e^{i(wx-wd)t} + e^{-i(wx+wd)t})
    let h01_11 = c(x_half) * (cis((wx - wd) * t) + cis(-(wx + wd) * t));
    // |00><11|: (Orho/2) e^{i(wx-wd)t}
    let h00_11 = r_half * cis((wx - wd) * t);

    let mut h = [[z; 4]; 4];
    h[1][1] = c(-(wd + wx)); // omega_00 - omega_10 - omega_x
    h[2][2] = z; // omega_y - omega_x = 0
    h[0][1] = h10_00;
    h[1][0] = h10_00.conj();
    h[0][2] = r_half;
    h[2][0] = r_half;
    h[2][3] = h01_11;
    h[3][2] = h01_11.conj();
    h[1][3] = h00_11;
    h[3][1] = h00_11.conj();
    h
}

/// Six-level Hamiltonian (H/hbar) including |20> and |02>, with all explicit
/// time-dependent phases and no rotating-wave approximation.
pub fn h6l(
    t: f64,
    schedule: &PulseSchedule,
    spectrum: &WellSpectrum,
    omega_x_carrier: f64,
) -> [[C64; 6]; 6] {
    let z = C64::new(0.0, 0.0);
    let wd = spectrum.omega_d;
    let wx = omega_x_carrier;
    let ratio = (wx / wd) * (wx / wd);
    let ox = schedule.omega_x(t);
    let orho = schedule.omega_rho(t);
    let omega = &spectrum.omega;

    let theta_minus = c(ratio) * (c(1.0) + cis(-2.0 * wx * t));
    let theta_plus = c(ratio) * (c(1.0) + cis(2.0 * wx * t));
    // delta_1 = (d1/gamma1) Ox e^{i(w10 - w20 + wx) t} theta_-
    let delta1 = c(spectrum.d1_integral / spectrum.gamma1 * ox)
        * cis((omega.omega_10 - omega.omega_20 + wx) * t)
        * theta_minus;
    // delta_2 = (d2/sqrt(gamma2)) Orho e^{-i(w20 - w11) t}
    let delta2 = c(spectrum.d2_integral / spectrum.sqrt_gamma2 * orho)
        * cis(-(omega.omega_20 - omega.omega_11) * t);

    let half = |v: C64| v * c(0.5);
    let mut h = [[z; 6]; 6];
    h[0][1] = half(c(ox) * theta_minus);
    h[0][2] = half(c(orho));
    h[0][4] = half(delta1);
    h[1][1] = c(-(wd + wx));
    h[1][3] = half(c(orho) * cis((wx - wd) * t));
    h[2][3] = half(c(ox) * theta_plus);
    h[3][4] = half(delta2);
    h[3][5] = half(delta2);
    // Hermitian completion of the lower triangle
    for r in 0..6 {
        for col in 0..r {
            h[r][col] = h[col][r].conj();
        }
    }
    h
}

/// Fixed-step RK4 propagation of i d(psi)/dt = H(t) psi with dense output at
/// `sample_times` (must be increasing, within [0, T]). The step between
/// consecutive samples is subdivided so every sample time is hit exactly.
///
/// Errors if the final norm drifts from 1 by more than 1e-6.
pub fn evolve_levels<const N: usize, H>(
    hamiltonian: H,
    psi0: &LevelState,
    total_time: f64,
    dt: f64,
    sample_times: &[f64],
) -> Result<Vec<LevelState>>
where
    H: Fn(f64) -> [[C64; N]; N],
{
    if psi0.amplitudes.len() != N {
        return Err(Error::InvalidParameter(format!(
            "state dimension {} does not match model dimension {N}",
            psi0.amplitudes.len()
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let mut psi = [C64::new(0.0, 0.0); N];
    psi.copy_from_slice(&psi0.amplitudes);

    let mut out = Vec::with_capacity(sample_times.len());
    let mut t = 0.0_f64;
    for &ts in sample_times {
        if ts < t - 1e-12 || ts > total_time + 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "sample times must be increasing within [0, {total_time}], got {ts}"
            )));
        }
        if ts > t {
            let span = ts - t;
            let n_sub = (span / dt).ceil().max(1.0) as usize;
            let h = span / n_sub as f64;
            for k in 0..n_sub {
                let tk = t + k as f64 * h;
                rk4_step(&hamiltonian, &mut psi, tk, h);
            }
            t = ts;
        }
        out.push(LevelState::new(psi.to_vec(), ts));
    }
    let norm = out
        .last()
        .map(|s| s.norm())
        .unwrap_or_else(|| psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt());
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::IntegratorFailure(format!(
            "norm drifted to {norm:.9} (> 1e-6 from unity); reduce dt"
        )));
    }
    Ok(out)
}

/// Like [`evolve_levels`] but halves the step until the final norm drift is
/// below 1e-9.
pub fn evolve_levels_auto<const N: usize, H>(
    hamiltonian: H,
    psi0: &LevelState,
    total_time: f64,
    dt0: f64,
    sample_times: &[f64],
) -> Result<Vec<LevelState>>
where
    H: Fn(f64) -> [[C64; N]; N] + Copy,
{
    let mut dt = dt0;
    for _ in 0..8 {
        let traj = evolve_levels(hamiltonian, psi0, total_time, dt, sample_times)?;
        let drift = (traj.last().map(|s| s.norm()).unwrap_or(1.0) - 1.0).abs();
        if drift < 1e-9 {
            return Ok(traj);
        }
        dt *= 0.5;
    }
    Err(Error::IntegratorFailure(
        "norm drift stayed above 1e-9 after 8 step halvings".into(),
    ))
}

fn rk4_step<const N: usize, H>(hamiltonian: &H, psi: &mut [C64; N], t: f64, h: f64)
where
    H: Fn(f64) -> [[C64; N]; N],
{
    let minus_i = C64::new(0.0, -1.0);
    let rhs = |m: &[[C64; N]; N], v: &[C64; N]| -> [C64; N] {
        let mut out = [C64::new(0.0, 0.0); N];
        for r in 0..N {
            let mut acc = C64::new(0.0, 0.0);
            for col in 0..N {
                acc += m[r][col] * v[col];
            }
            out[r] = minus_i * acc;
        }
        out
    };
    let h_t = hamiltonian(t);
    let h_mid = hamiltonian(t + 0.5 * h);
    let h_end = hamiltonian(t + h);

    let k1 = rhs(&h_t, psi);
    let mut tmp = *psi;
    for i in 0..N {
        tmp[i] += c(0.5 * h) * k1[i];
    }
    let k2 = rhs(&h_mid, &tmp);
    tmp = *psi;
    for i in 0..N {
        tmp[i] += c(0.5 * h) * k2[i];
    }
    let k3 = rhs(&h_mid, &tmp);
    tmp = *psi;
    for i in 0..N {
        tmp[i] += c(h) * k3[i];
    }
    let k4 = rhs(&h_end, &tmp);
    for i in 0..N {
        psi[i] += c(h / 6.0) * (k1[i] + c(2.0) * (k2[i] + k3[i]) + k4[i]);
    }
}

/// Default integrator step satisfying dt <= 0.01 min(1/omega_d, 1/max|Omega|).
pub fn default_dt(spectrum: &WellSpectrum, schedule: &PulseSchedule) -> f64 {
    let max_omega = (0..=2048)
        .map(|i| {
            let t = schedule.total_time() * i as f64 / 2048.0;
            schedule.omega_x(t).abs().max(schedule.omega_rho(t).abs())
        })
        .fold(0.0_f64, f64::max)
        .max(1e-12);
    0.01 * (1.0 / spectrum.omega_d).min(1.0 / max_omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{well_spectrum, LatticeConfig};
    use crate::schemes::{piecewise_scheme, polynomial_scheme};

    fn spectrum3() -> WellSpectrum {
        well_spectrum(&LatticeConfig::new(3.0).unwrap(), 512).unwrap()
    }

    #[test]
    fn h4l_rwa_shape() {
        let h = h4l_rwa(0.0, 0.0, 0.0);
        for row in &h {
            for v in row {
                assert_eq!(*v, C64::new(0.0, 0.0));
            }
        }
        // Omega_x = 2: couplings |10><00| and |01><11| of magnitude 1
        let h = h4l_rwa(2.0, 0.0, 0.0);
        assert_eq!(h[0][1], C64::new(1.0, 0.0));
        assert_eq!(h[2][3], C64::new(1.0, 0.0));
        assert_eq!(h[0][2], C64::new(0.0, 0.0));
        // hermiticity including Omega_y entries
        let h = h4l_rwa(0.7, 0.3, 0.2);
        for r in 0..4 {
            for col in 0..4 {
                assert_eq!(h[r][col], h[col][r].conj());
            }
        }
    }

    #[test]
    fn h4l_rwa_eigenvalues_against_dense_oracle() {
        // numerical diagonalization oracle (no closed form asserted)
        let (a, b) = (0.9_f64, 0.4_f64);
        let h = h4l_rwa(a, b, 0.0);
        let m = nalgebra::DMatrix::from_fn(4, 4, |r, c_| {
            nalgebra::Complex::new(h[r][c_].re, h[r][c_].im)
        });
        let eig = m.symmetric_eigenvalues();
        let mut vals: Vec<f64> = eig.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        // spectrum must be symmetric about zero (chiral structure)
        assert!((vals[0] + vals[3]).abs() < 1e-12);
        assert!((vals[1] + vals[2]).abs() < 1e-12);
        // and reproduce H^2 trace: sum lambda^2 = ||H||_F^2
        let fro2: f64 = h.iter().flatten().map(|z| z.norm_sqr()).sum();
        let sum2: f64 = vals.iter().map(|v| v * v).sum();
        assert!((fro2 - sum2).abs() < 1e-12);
    }

    #[test]
    fn detuned_reduces_to_rwa_at_resonance() {
        let sp = spectrum3();
        let schedule = piecewise_scheme(200.0, 150.0, 10.0, 11.0).unwrap();
        let wd = sp.omega_d;
        for &t in &[13.0, 77.0, 161.0] {
            let h = h4l_detuned(t, &schedule, &sp, -wd);
            let hr = h4l_rwa(schedule.omega_x(t), schedule.omega_rho(t), 0.0);
            // counter-rotating pieces carry phase e^{+-2 i wd t}; averaging the
            // oscillating factor out leaves the RWA matrix. Check that the
            // static part matches: H_detuned - H_rwa has only e^{2iwd t} terms.
            let d01 = h[0][1] - hr[0][1];
            let expect = C64::new(0.5 * schedule.omega_x(t), 0.0) * cis(2.0 * wd * t);
            assert!((d01 - expect).norm() < 1e-12);
            // diagonal detuning term vanishes on resonance
            assert!(h[1][1].norm() < 1e-12);
        }
    }

    #[test]
    fn h6l_structure() {
        let sp = spectrum3();
        let schedule = piecewise_scheme(200.0, 150.0, 10.0, 11.0).unwrap();
        let wd = sp.omega_d;
        // hermiticity at arbitrary t
        let h = h6l(42.0, &schedule, &sp, -wd + 0.02);
        for r in 0..6 {
            for col in 0..6 {
                assert!((h[r][col] - h[col][r].conj()).norm() < 1e-15);
            }
        }
        // during the Omega_x pulse, Omega_rho = 0, so |02> couplings vanish
        let h = h6l(50.0, &schedule, &sp, -wd);
        for r in 0..6 {
            assert!(h[r][5].norm() < 1e-15);
        }
        // truncating rows/cols 5-6 at resonance recovers the detuned 4L matrix
        let h4 = h4l_detuned(50.0, &schedule, &sp, -wd);
        for r in 0..4 {
            for col in 0..4 {
                if (r, col) == (2, 3) || (r, col) == (3, 2) {
                    continue; // printed six-level form uses the resonance shorthand here
                }
                assert!((h[r][col] - h4[r][col]).norm() < 1e-12);
            }
        }
        // at exact resonance the shorthand agrees too
        assert!((h[2][3] - h4[2][3]).norm() < 1e-12);
    }

    #[test]
    fn free_evolution_is_identity() {
        let psi0 = LevelState::ground4();
        let zero = |_t: f64| [[C64::new(0.0, 0.0); 4]; 4];
        let traj = evolve_levels(zero, &psi0, 10.0, 0.01, &[10.0]).unwrap();
        let (pops, _) = populations_and_fidelity(&traj[0]);
        assert!((pops[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rabi_oscillation_oracle() {
        // constant Omega_x = O0 from |00>: P_|10>(t) = sin^2(O0 t / 2)
        let o0 = 0.31_f64;
        let h = move |_t: f64| h4l_rwa(o0, 0.0, 0.0);
        let samples: Vec<f64> = (1..=20).map(|i| i as f64).collect();
        let traj = evolve_levels(h, &LevelState::ground4(), 20.0, 0.005, &samples).unwrap();
        for st in &traj {
            let (pops, _) = populations_and_fidelity(&st);
            let expect = (0.5 * o0 * st.time).sin().powi(2);
            assert!(
                (pops[0] - expect).abs() < 1e-8,
                "t = {}: {} vs {}",
                st.time,
                pops[0],
                expect
            );
        }
    }

    #[test]
    fn fidelity_examples() {
        let s = 1.0 / 2.0_f64.sqrt();
        // |-> itself
        let minus = LevelState::new(
            vec![c(s), c(0.0), C64::new(0.0, -s), c(0.0)],
            0.0,
        );
        let (pops, fid) = populations_and_fidelity(&minus);
        assert!((fid - 1.0).abs() < 1e-14);
        assert!((pops[0] - 0.5).abs() < 1e-14 && (pops[2] - 0.5).abs() < 1e-14);
        // |+> is orthogonal
        let plus = LevelState::new(vec![c(s), c(0.0), C64::new(0.0, s), c(0.0)], 0.0);
        assert!(populations_and_fidelity(&plus).1 < 1e-14);
        // |10> overlaps with probability 1/2
        let ten = LevelState::new(vec![c(1.0), c(0.0), c(0.0), c(0.0)], 0.0);
        assert!((populations_and_fidelity(&ten).1 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn both_schemes_transfer_exactly_in_model() {
        for (name, schedule) in [
            ("polynomial", polynomial_scheme(300.0, 10.0, 11.0).unwrap()),
            ("piecewise", piecewise_scheme(300.0, 225.0, 10.0, 11.0).unwrap()),
        ] {
            let h = |t: f64| h4l_rwa(schedule.omega_x(t), schedule.omega_rho(t), 0.0);
            let traj =
                evolve_levels(h, &LevelState::ground4(), 300.0, 0.01, &[300.0]).unwrap();
            let (_, fid) = populations_and_fidelity(&traj[0]);
            assert!(fid >= 1.0 - 1e-6, "{name}: fidelity {fid}");
        }
    }

    #[test]
    fn piecewise_never_populates_11() {
        let schedule = piecewise_scheme(200.0, 150.0, 10.0, 11.0).unwrap();
        let h = |t: f64| h4l_rwa(schedule.omega_x(t), schedule.omega_rho(t), 0.0);
        let samples: Vec<f64> = (1..=100).map(|i| 2.0 * i as f64).collect();
        let traj = evolve_levels(h, &LevelState::ground4(), 200.0, 0.01, &samples).unwrap();
        for st in &traj {
            let (pops, _) = populations_and_fidelity(&st);
            assert!(pops[3] < 1e-6, "P11 = {} at t = {}", pops[3], st.time);
        }
    }

    #[test]
    fn time_reversal_returns_to_ground() {
        let schedule = polynomial_scheme(150.0, 10.0, 11.0).unwrap();
        let total = 150.0;
        let fwd = |t: f64| h4l_rwa(schedule.omega_x(t), schedule.omega_rho(t), 0.0);
        let out = evolve_levels(fwd, &LevelState::ground4(), total, 0.01, &[total]).unwrap();
        // conjugate the state, then run the time-reversed (real) controls
        let conj = LevelState::new(
            out[0].amplitudes.iter().map(|a| a.conj()).collect(),
            0.0,
        );
        let rev = |t: f64| {
            h4l_rwa(
                schedule.omega_x(total - t),
                schedule.omega_rho(total - t),
                0.0,
            )
        };
        let back = evolve_levels(rev, &conj, total, 0.01, &[total]).unwrap();
        let (pops, _) = populations_and_fidelity(&back[0]);
        assert!(pops[1] >= 1.0 - 1e-6, "P00 after reversal = {}", pops[1]);
    }

    #[test]
    fn norm_is_preserved() {
        let schedule = piecewise_scheme(100.0, 75.0, 10.0, 11.0).unwrap();
        let sp = spectrum3();
        let h = |t: f64| h6l(t, &schedule, &sp, -sp.omega_d);
        let samples: Vec<f64> = (1..=10).map(|i| 10.0 * i as f64).collect();
        let traj = evolve_levels(h, &LevelState::ground6(), 100.0, 0.01, &samples).unwrap();
        for st in &traj {
            assert!((st.norm() - 1.0).abs() < 1e-9);
        }
    }
}
