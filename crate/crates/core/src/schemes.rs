//! The two concrete pulse schedules: a smooth polynomial scheme with a
//! numerically determined amplitude constant W, and a piecewise scheme (a
//! pi pulse in Omega_x followed by a pi/2 pulse in Omega_rho).
//!
//! Schedules carry analytic first and second derivatives of both couplings;
//! the grid simulator differentiates r_x(t) exactly and numerical
//! differentiation of these curves near the endpoints is catastrophically
//! ill-conditioned.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::invariant::{AlphaFunctions, InvariantConstants, InvariantTrajectory, Xi};
use crate::numerics;

/// Which built-in scheme produced a schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeTag {
    Polynomial { w: f64 },
    Piecewise { t_s: f64 },
    Custom,
}

impl SchemeTag {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeTag::Polynomial { .. } => "polynomial",
            SchemeTag::Piecewise { .. } => "piecewise",
            SchemeTag::Custom => "custom",
        }
    }
}

/// Coupling curves with analytic derivatives.
pub trait ScheduleCouplings: Send + Sync {
    fn omega_x(&self, t: f64) -> f64;
    fn omega_x_dot(&self, t: f64) -> f64;
    fn omega_x_ddot(&self, t: f64) -> f64;
    fn omega_rho(&self, t: f64) -> f64;
    fn omega_rho_dot(&self, t: f64) -> f64;
    fn omega_rho_ddot(&self, t: f64) -> f64;
}

/// An immutable control schedule over [0, T].
#[derive(Clone)]
pub struct PulseSchedule {
    total_time: f64,
    tag: SchemeTag,
    constants: InvariantConstants,
    couplings: Arc<dyn ScheduleCouplings>,
    trajectory: InvariantTrajectory,
}

impl PulseSchedule {
    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn tag(&self) -> SchemeTag {
        self.tag
    }

    pub fn constants(&self) -> &InvariantConstants {
        &self.constants
    }

    /// The invariant trajectory this schedule was derived from. For the
    /// piecewise scheme this is the epsilon-representation with
    /// epsilon = 1e-6, used for verification only.
    pub fn invariant_trajectory(&self) -> &InvariantTrajectory {
        &self.trajectory
    }

    pub fn omega_x(&self, t: f64) -> f64 {
        self.couplings.omega_x(t)
    }

    pub fn omega_x_dot(&self, t: f64) -> f64 {
        self.couplings.omega_x_dot(t)
    }

    pub fn omega_x_ddot(&self, t: f64) -> f64 {
        self.couplings.omega_x_ddot(t)
    }

    pub fn omega_rho(&self, t: f64) -> f64 {
        self.couplings.omega_rho(t)
    }

    pub fn omega_rho_dot(&self, t: f64) -> f64 {
        self.couplings.omega_rho_dot(t)
    }

    pub fn omega_rho_ddot(&self, t: f64) -> f64 {
        self.couplings.omega_rho_ddot(t)
    }

    /// Peak |Omega_rho| over a dense sample (for control-feasibility checks).
    pub fn max_abs_omega_rho(&self, n: usize) -> f64 {
        (0..=n)
            .map(|i| self.omega_rho(self.total_time * i as f64 / n as f64).abs())
            .fold(0.0, f64::max)
    }

    /// Assemble a schedule from user-supplied coupling curves; intended for
    /// custom alpha parameterizations.
    pub fn from_couplings(
        total_time: f64,
        constants: InvariantConstants,
        trajectory: InvariantTrajectory,
        couplings: Arc<dyn ScheduleCouplings>,
    ) -> Self {
        Self { total_time, tag: SchemeTag::Custom, constants, couplings, trajectory }
    }
}

// ---------------------------------------------------------------------------
// Polynomial scheme
// ---------------------------------------------------------------------------

/// The smoothstep-like ramp P(s) = 126 s^5 - 420 s^6 + 540 s^7 - 315 s^8 + 70 s^9,
/// with P(0) = 0, P(1) = 1 and four vanishing derivatives at both ends.
fn ramp(s: f64) -> f64 {
    s.powi(5) * (((((70.0 * s - 315.0) * s) + 540.0) * s - 420.0) * s + 126.0)
}

fn ramp_d1(s: f64) -> f64 {
    630.0 * (s * (1.0 - s)).powi(4)
}

fn ramp_d2(s: f64) -> f64 {
    2520.0 * (s * (1.0 - s)).powi(3) * (1.0 - 2.0 * s)
}

fn ramp_d3(s: f64) -> f64 {
    let u = s * (1.0 - s);
    2520.0 * u * u * (3.0 * (1.0 - 2.0 * s).powi(2) - 2.0 * u)
}

/// alpha_1 bump (s(1-s))^5 and derivatives.
fn bump(s: f64) -> f64 {
    (s * (1.0 - s)).powi(5)
}

fn bump_d1(s: f64) -> f64 {
    5.0 * (s * (1.0 - s)).powi(4) * (1.0 - 2.0 * s)
}

fn bump_d2(s: f64) -> f64 {
    let u = s * (1.0 - s);
    20.0 * u.powi(3) * (1.0 - 2.0 * s).powi(2) - 10.0 * u.powi(4)
}

struct PolynomialAlphas {
    w: f64,
    c_lo: f64, // (C1 - Q)/2
    q: f64,
    total_time: f64,
}

impl PolynomialAlphas {
    fn s(&self, t: f64) -> f64 {
        (t / self.total_time).clamp(0.0, 1.0)
    }
}

impl AlphaFunctions for PolynomialAlphas {
    fn alpha1(&self, t: f64) -> f64 {
        1024.0 * self.w * bump(self.s(t))
    }

    fn alpha1_dot(&self, t: f64) -> f64 {
        1024.0 * self.w * bump_d1(self.s(t)) / self.total_time
    }

    fn alpha2(&self, t: f64) -> f64 {
        self.c_lo + self.q * ramp(self.s(t))
    }

    fn alpha2_dot(&self, t: f64) -> f64 {
        self.q * ramp_d1(self.s(t)) / self.total_time
    }

    fn radicand(&self, t: f64, _constants: &InvariantConstants) -> f64 {
        // 2C2 - (a1^2 + a2^2) + C1 a2 factorizes as Q^2 P(s) P(1-s) - a1^2;
        // evaluating P(1-s) directly (the ramp is symmetric, P(s) + P(1-s) = 1)
        // avoids the cancellation in 1 - P(s) near s = 1.
        let s = self.s(t);
        let a1 = 1024.0 * self.w * bump(s);
        self.q * self.q * ramp(s) * ramp(1.0 - s) - a1 * a1
    }
}

/// Analytic couplings of the polynomial scheme. All quantities are built
/// from endpoint-factorized polynomials in s = t/T, so they stay accurate
/// arbitrarily close to the endpoints.
struct PolynomialCouplings {
    w: f64,
    q: f64,
    xi: f64,
    total_time: f64,
}

impl PolynomialCouplings {
    /// (g/sqrt(R), d/ds, d^2/ds^2) for g in {N = Q P', M = 2 A'} where
    /// R(s) = Q^2 P(s) P(1-s) - A(s)^2 and A = 1024 W (s(1-s))^5.
    fn ratio(&self, s: f64, g: f64, g1: f64, g2: f64) -> (f64, f64, f64) {
        let q2 = self.q * self.q;
        let a = 1024.0 * self.w * bump(s);
        let a1 = 1024.0 * self.w * bump_d1(s);
        let a2 = 1024.0 * self.w * bump_d2(s);
        let p = ramp(s);
        let pc = ramp(1.0 - s); // = 1 - P(s), exactly
        let r = q2 * p * pc - a * a;
        if r <= 0.0 {
            return (0.0, 0.0, 0.0);
        }
        // R' = Q^2 P'(s) [P(1-s) - P(s)] - 2 A A'   (d/ds P(1-s) = -P'(s))
        let rp = q2 * ramp_d1(s) * (pc - p) - 2.0 * a * a1;
        // R'' = Q^2 [P''(Pc - P) - 2 P'^2] - 2 A'^2 - 2 A A''
        let rpp = q2 * (ramp_d2(s) * (pc - p) - 2.0 * ramp_d1(s) * ramp_d1(s))
            - 2.0 * a1 * a1
            - 2.0 * a * a2;
        let sqrt_r = r.sqrt();
        let val = g / sqrt_r;
        let d1 = (g1 - g * rp / (2.0 * r)) / sqrt_r;
        let d2 = (g2 * r + g1 * rp / 2.0 - g * rpp / 2.0) / (r * sqrt_r)
            - 1.5 * rp * (g1 * r - g * rp / 2.0) / (r * r * sqrt_r);
        (val, d1, d2)
    }

    fn omega_x_all(&self, t: f64) -> (f64, f64, f64) {
        let s = (t / self.total_time).clamp(0.0, 1.0);
        if s <= 0.0 || s >= 1.0 {
            return (0.0, 0.0, 0.0);
        }
        let g = self.q * ramp_d1(s);
        let g1 = self.q * ramp_d2(s);
        let g2 = self.q * ramp_d3(s);
        let (v, d1, d2) = self.ratio(s, g, g1, g2);
        let c = -1.0 / (self.xi * self.total_time);
        (c * v, c * d1 / self.total_time, c * d2 / (self.total_time * self.total_time))
    }

    fn omega_rho_all(&self, t: f64) -> (f64, f64, f64) {
        let s = (t / self.total_time).clamp(0.0, 1.0);
        if s <= 0.0 || s >= 1.0 {
            return (0.0, 0.0, 0.0);
        }
        let g = 1024.0 * self.w * bump_d1(s);
        let g1 = 1024.0 * self.w * bump_d2(s);
        // A''' = 1024 W [60 u^2 (1-2s)^3 - 60 u^3 (1-2s)], u = s(1-s)
        let u = s * (1.0 - s);
        let g2 = 1024.0 * self.w * (60.0 * u * u * (1.0 - 2.0 * s).powi(3) - 60.0 * u.powi(3) * (1.0 - 2.0 * s));
        let (v, d1, d2) = self.ratio(s, g, g1, g2);
        let c = 2.0 / (self.xi * self.total_time);
        (c * v, c * d1 / self.total_time, c * d2 / (self.total_time * self.total_time))
    }
}

impl ScheduleCouplings for PolynomialCouplings {
    fn omega_x(&self, t: f64) -> f64 {
        self.omega_x_all(t).0
    }
    fn omega_x_dot(&self, t: f64) -> f64 {
        self.omega_x_all(t).1
    }
    fn omega_x_ddot(&self, t: f64) -> f64 {
        self.omega_x_all(t).2
    }
    fn omega_rho(&self, t: f64) -> f64 {
        self.omega_rho_all(t).0
    }
    fn omega_rho_dot(&self, t: f64) -> f64 {
        self.omega_rho_all(t).1
    }
    fn omega_rho_ddot(&self, t: f64) -> f64 {
        self.omega_rho_all(t).2
    }
}

/// Build the polynomial trajectory for a candidate W. Fails if the alpha_3
/// radicand goes negative anywhere (|W| too large).
fn polynomial_trajectory(
    w: f64,
    constants: InvariantConstants,
    total_time: f64,
) -> Result<InvariantTrajectory> {
    let alphas = PolynomialAlphas {
        w,
        c_lo: 0.5 * (constants.c1 - constants.q()),
        q: constants.q(),
        total_time,
    };
    InvariantTrajectory::new(Arc::new(alphas), constants, total_time)
}

/// Accumulated LR phase chi_+(T) required for the |00> -> |-> transfer.
///
/// The invariant eigenvectors collapse at t = T onto (|10> -+ |01>)/sqrt(2)
/// with an intrinsic phase of +-pi/2, so the superposition
/// (-phi_1 e^{-i chi_+} + phi_4 e^{i chi_+})/sqrt(2) lands on |-> exactly
/// when chi_+(T) = -pi/4 (mod pi).
pub const POLYNOMIAL_TARGET_PHASE: f64 = -PI / 4.0;

/// Construct the polynomial scheme: root-find W so that the total LR phase
/// matches the transfer condition, then assemble the analytic couplings.
pub fn polynomial_scheme(total_time: f64, c1: f64, c2: f64) -> Result<PulseSchedule> {
    if !(total_time > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "total time must be positive, got {total_time}"
        )));
    }
    let constants = InvariantConstants::new(c1, c2, Xi::Plus)?;

    // chi_+(T) depends on W only through s = t/T, so the root is
    // T-independent; solve on the actual horizon anyway.
    let objective = |w: f64| -> f64 {
        match polynomial_trajectory(w, constants, total_time) {
            Ok(traj) => match traj.chi_plus_total() {
                Ok(chi) => chi - POLYNOMIAL_TARGET_PHASE,
                Err(_) => f64::NAN,
            },
            Err(_) => f64::NAN, // radicand negative: rejected bracket
        }
    };

    // bracket scan over W in [-10, -0.1], excluding the trivial root W = 0
    let mut roots: Vec<f64> = Vec::new();
    let mut prev_w = -10.0;
    let mut prev_v = objective(prev_w);
    let n_scan = 120;
    for i in 1..=n_scan {
        let w = -10.0 + 9.9 * i as f64 / n_scan as f64;
        let v = objective(w);
        if prev_v.is_finite() && v.is_finite() && prev_v.signum() != v.signum() {
            let root = numerics::bisect(&|x| objective(x), prev_w, w, 1e-8)?;
            roots.push(root);
        }
        prev_w = w;
        prev_v = v;
    }
    if roots.is_empty() {
        return Err(Error::Synthesis(
            "no W root of the LR phase-matching condition in [-10, -0.1]".into(),
        ));
    }
    // pin to the operating point nearest the expected root
    roots.sort_by(|a, b| (a + 2.74).abs().total_cmp(&(b + 2.74).abs()));
    let w = roots[0];

    let trajectory = polynomial_trajectory(w, constants, total_time)?;
    let couplings = PolynomialCouplings {
        w,
        q: constants.q(),
        xi: constants.xi.value(),
        total_time,
    };
    Ok(PulseSchedule {
        total_time,
        tag: SchemeTag::Polynomial { w },
        constants,
        couplings: Arc::new(couplings),
        trajectory,
    })
}

// ---------------------------------------------------------------------------
// Piecewise scheme
// ---------------------------------------------------------------------------

struct PiecewiseCouplings {
    t_s: f64,
    total_time: f64,
}

impl PiecewiseCouplings {
    /// Integrated pulse area of Omega_x up to t (a full pi at t = t_s).
    fn theta(&self, t: f64) -> f64 {
        let ts = self.t_s;
        let t = t.clamp(0.0, ts);
        PI * (6.0 * t.powi(5) - 15.0 * ts * t.powi(4) + 10.0 * ts * ts * t.powi(3)) / ts.powi(5)
    }

    /// Integrated pulse area of Omega_rho from t_s up to t (pi/2 at t = T).
    fn phi(&self, t: f64) -> f64 {
        let l = self.total_time - self.t_s;
        let u = (t - self.t_s).clamp(0.0, l);
        PI * (3.0 * u.powi(5) - 7.5 * l * u.powi(4) + 5.0 * l * l * u.powi(3)) / l.powi(5)
    }
}

impl ScheduleCouplings for PiecewiseCouplings {
    fn omega_x(&self, t: f64) -> f64 {
        if t < 0.0 || t > self.t_s {
            return 0.0;
        }
        let ts = self.t_s;
        30.0 * PI * t * t * (t - ts) * (t - ts) / ts.powi(5)
    }

    fn omega_x_dot(&self, t: f64) -> f64 {
        if t < 0.0 || t > self.t_s {
            return 0.0;
        }
        let ts = self.t_s;
        60.0 * PI * t * (t - ts) * (2.0 * t - ts) / ts.powi(5)
    }

    fn omega_x_ddot(&self, t: f64) -> f64 {
        if t < 0.0 || t > self.t_s {
            return 0.0;
        }
        let ts = self.t_s;
        30.0 * PI * (2.0 * (t - ts) * (t - ts) + 8.0 * t * (t - ts) + 2.0 * t * t) / ts.powi(5)
    }

    fn omega_rho(&self, t: f64) -> f64 {
        if t < self.t_s || t > self.total_time {
            return 0.0;
        }
        let l = self.total_time - self.t_s;
        let u = t - self.t_s;
        let v = t - self.total_time;
        15.0 * PI * v * v * u * u / l.powi(5)
    }

    fn omega_rho_dot(&self, t: f64) -> f64 {
        if t < self.t_s || t > self.total_time {
            return 0.0;
        }
        let l = self.total_time - self.t_s;
        let u = t - self.t_s;
        let v = t - self.total_time;
        30.0 * PI * u * v * (u + v) / l.powi(5)
    }

    fn omega_rho_ddot(&self, t: f64) -> f64 {
        if t < self.t_s || t > self.total_time {
            return 0.0;
        }
        let l = self.total_time - self.t_s;
        let u = t - self.t_s;
        let v = t - self.total_time;
        15.0 * PI * (2.0 * v * v + 8.0 * u * v + 2.0 * u * u) / l.powi(5)
    }
}

/// Piecewise alpha representation (exact inverse-engineering form of the
/// piecewise pulses for a small regularization epsilon).
struct PiecewiseAlphas {
    couplings: PiecewiseCouplings,
    epsilon: f64,
    c1: f64,
    /// sqrt(C1^2 + 8 C2 - 4 eps^2)
    q_eps: f64,
}

/// Regularization used for invariant verification of the piecewise scheme.
pub const PIECEWISE_EPSILON: f64 = 1e-6;

impl AlphaFunctions for PiecewiseAlphas {
    fn alpha1(&self, t: f64) -> f64 {
        if t <= self.couplings.t_s {
            self.epsilon
        } else {
            self.epsilon * (0.5 * self.couplings.phi(t)).cos()
        }
    }

    fn alpha1_dot(&self, t: f64) -> f64 {
        if t <= self.couplings.t_s {
            0.0
        } else {
            -0.5 * self.epsilon
                * (0.5 * self.couplings.phi(t)).sin()
                * self.couplings.omega_rho(t)
        }
    }

    fn alpha2(&self, t: f64) -> f64 {
        if t < self.couplings.t_s {
            0.5 * (self.c1 - self.q_eps * self.couplings.theta(t).cos())
        } else {
            0.5 * (self.c1 + self.q_eps)
        }
    }

    fn alpha2_dot(&self, t: f64) -> f64 {
        if t < self.couplings.t_s {
            0.5 * self.q_eps * self.couplings.theta(t).sin() * self.couplings.omega_x(t)
        } else {
            0.0
        }
    }

    fn radicand(&self, t: f64, _constants: &InvariantConstants) -> f64 {
        // closed forms per piece (exact, no cancellation):
        // piece 1: (Q_eps sin(theta) / 2)^2; piece 2: (eps sin(phi/2))^2
        if t < self.couplings.t_s {
            let s = 0.5 * self.q_eps * self.couplings.theta(t).sin();
            s * s
        } else {
            let s = self.epsilon * (0.5 * self.couplings.phi(t)).sin();
            s * s
        }
    }
}

/// Construct the piecewise scheme: a pi pulse in Omega_x on [0, t_s], then a
/// pi/2 pulse in Omega_rho on [t_s, T].
pub fn piecewise_scheme(total_time: f64, t_s: f64, c1: f64, c2: f64) -> Result<PulseSchedule> {
    if !(total_time > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "total time must be positive, got {total_time}"
        )));
    }
    if !(t_s > 0.0 && t_s < total_time) {
        return Err(Error::InvalidParameter(format!(
            "switch time must lie strictly inside (0, {total_time}), got {t_s}"
        )));
    }
    let constants = InvariantConstants::new(c1, c2, Xi::Minus)?;
    let q2_eps = constants.q() * constants.q() - 4.0 * PIECEWISE_EPSILON * PIECEWISE_EPSILON;
    let alphas = PiecewiseAlphas {
        couplings: PiecewiseCouplings { t_s, total_time },
        epsilon: PIECEWISE_EPSILON,
        c1,
        q_eps: q2_eps.sqrt(),
    };
    let trajectory = InvariantTrajectory::new(Arc::new(alphas), constants, total_time)?;
    Ok(PulseSchedule {
        total_time,
        tag: SchemeTag::Piecewise { t_s },
        constants,
        couplings: Arc::new(PiecewiseCouplings { t_s, total_time }),
        trajectory,
    })
}

// ---------------------------------------------------------------------------
// Boundary checks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct BoundaryCheckItem {
    pub name: String,
    pub magnitude: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct BoundaryReport {
    pub items: Vec<BoundaryCheckItem>,
}

impl BoundaryReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

/// Evaluate the endpoint conditions of a schedule: couplings and their first
/// derivatives vanish at t = 0 and t = T; piecewise continuity at the switch
/// time; for the polynomial scheme, the alpha derivatives up to fourth order
/// vanish at both ends. Reporting only; nothing fails hard here.
pub fn boundary_check(schedule: &PulseSchedule) -> BoundaryReport {
    let total_time = schedule.total_time();
    let scale = (0..=512)
        .map(|i| schedule.omega_x(total_time * i as f64 / 512.0).abs())
        .fold(0.0_f64, f64::max)
        .max(schedule.max_abs_omega_rho(512))
        .max(1e-30);
    let tol = 1e-10 * scale.max(1.0);

    let mut items = Vec::new();
    let mut push = |name: String, magnitude: f64, tolerance: f64| {
        items.push(BoundaryCheckItem { name, magnitude, tolerance, pass: magnitude <= tolerance });
    };

    for (label, t) in [("0", 0.0), ("T", total_time)] {
        push(format!("omega_x({label})"), schedule.omega_x(t).abs(), tol);
        push(format!("omega_rho({label})"), schedule.omega_rho(t).abs(), tol);
        push(format!("omega_x_dot({label})"), schedule.omega_x_dot(t).abs(), tol);
        push(format!("omega_rho_dot({label})"), schedule.omega_rho_dot(t).abs(), tol);
    }

    if let SchemeTag::Piecewise { t_s } = schedule.tag() {
        let below = t_s - 1e-9 * total_time;
        let above = t_s + 1e-9 * total_time;
        push(
            "omega_x continuity at t_s".into(),
            (schedule.omega_x(below) - schedule.omega_x(above)).abs(),
            1e-8 * scale,
        );
        push(
            "omega_x_dot continuity at t_s".into(),
            (schedule.omega_x_dot(below) - schedule.omega_x_dot(above)).abs(),
            1e-6 * scale,
        );
        push("omega_rho(t_s)".into(), schedule.omega_rho(t_s).abs(), tol);
    }

    if let SchemeTag::Polynomial { w } = schedule.tag() {
        // alpha polynomials in s: derivatives up to order 4 at s in {0, 1}
        // via exact coefficient differentiation
        let q = schedule.constants().q();
        let mut a1_coef = [0.0_f64; 11];
        // 1024 W (s^5 - 5 s^6 + 10 s^7 - 10 s^8 + 5 s^9 - s^10)
        for (p, c) in [(5, 1.0), (6, -5.0), (7, 10.0), (8, -10.0), (9, 5.0), (10, -1.0)] {
            a1_coef[p] = 1024.0 * w * c;
        }
        let mut a2_coef = [0.0_f64; 11];
        for (p, c) in [(5, 126.0), (6, -420.0), (7, 540.0), (8, -315.0), (9, 70.0)] {
            a2_coef[p] = q * c;
        }
        let alpha_scale = q.max(1024.0 * w.abs() / 1024.0);
        for (name, coef) in [("alpha1", a1_coef), ("alpha2", a2_coef)] {
            let mut d = coef;
            for order in 1..=4usize {
                // differentiate the coefficient array once
                let mut next = [0.0_f64; 11];
                for p in 1..11 {
                    next[p - 1] = d[p] * p as f64;
                }
                d = next;
                let at0 = d[0];
                let at1: f64 = d.iter().sum();
                push(
                    format!("d^{order} {name}/ds^{order} (0)"),
                    at0.abs(),
                    1e-9 * alpha_scale * 630.0 * 24.0,
                );
                push(
                    format!("d^{order} {name}/ds^{order} (1)"),
                    at1.abs(),
                    1e-9 * alpha_scale * 630.0 * 24.0,
                );
            }
        }
    }

    BoundaryReport { items }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_properties() {
        assert_eq!(ramp(0.0), 0.0);
        assert!((ramp(1.0) - 1.0).abs() < 1e-15); // 70-315+540-420+126 = 1
        assert!((ramp(0.5) - 0.5).abs() < 1e-15);
        for i in 0..=20 {
            let s = i as f64 / 20.0;
            assert!((ramp(s) + ramp(1.0 - s) - 1.0).abs() < 1e-14);
            // derivative consistency by central differences
            if i > 0 && i < 20 {
                let h = 1e-5;
                let fd = (ramp(s + h) - ramp(s - h)) / (2.0 * h);
                assert!((fd - ramp_d1(s)).abs() < 1e-8);
                let fd2 = (ramp_d1(s + h) - ramp_d1(s - h)) / (2.0 * h);
                assert!((fd2 - ramp_d2(s)).abs() < 1e-6);
                let fd3 = (ramp_d2(s + h) - ramp_d2(s - h)) / (2.0 * h);
                assert!((fd3 - ramp_d3(s)).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn polynomial_w_matches_reported_value() {
        let schedule = polynomial_scheme(200.0, 10.0, 11.0).unwrap();
        let SchemeTag::Polynomial { w } = schedule.tag() else {
            panic!("wrong tag")
        };
        assert!((-2.75..=-2.73).contains(&w), "W = {w}");
        // frozen from the independent quadrature/RK4 prototype
        assert!((w - (-2.7358404)).abs() < 1e-5, "W = {w}");
    }

    #[test]
    fn polynomial_alpha_boundary_values() {
        let schedule = polynomial_scheme(100.0, 10.0, 11.0).unwrap();
        let traj = schedule.invariant_trajectory();
        let q = schedule.constants().q();
        let SchemeTag::Polynomial { w } = schedule.tag() else {
            panic!()
        };
        // alpha_1(T/2) = W exactly: 1024 W (1/2)^10
        assert!((traj.alpha1(50.0) - w).abs() < 1e-12);
        // alpha_2 endpoints: coefficient sum 70-315+540-420+126 = 1
        assert!((traj.alpha2(0.0) - 0.5 * (10.0 - q)).abs() < 1e-12);
        assert!((traj.alpha2(100.0) - 0.5 * (10.0 + q)).abs() < 1e-12);
    }

    #[test]
    fn polynomial_couplings_match_trajectory() {
        let schedule = polynomial_scheme(80.0, 10.0, 11.0).unwrap();
        let traj = schedule.invariant_trajectory();
        for i in 1..40 {
            let t = 80.0 * i as f64 / 40.0;
            let (ox, orho) = traj.couplings(t).unwrap();
            assert!((ox - schedule.omega_x(t)).abs() < 1e-10 * (1.0 + ox.abs()));
            assert!((orho - schedule.omega_rho(t)).abs() < 1e-10 * (1.0 + orho.abs()));
        }
        // endpoints resolve to zero through the limit path
        let (ox0, orho0) = traj.couplings(0.0).unwrap();
        assert!(ox0.abs() < 1e-4 && orho0.abs() < 1e-4);
        assert_eq!(schedule.omega_x(0.0), 0.0);
        assert_eq!(schedule.omega_rho(80.0), 0.0);
    }

    #[test]
    fn polynomial_coupling_derivatives_consistent() {
        let schedule = polynomial_scheme(120.0, 10.0, 11.0).unwrap();
        let h = 1e-4;
        for i in 1..60 {
            let t = 120.0 * i as f64 / 60.0;
            if t + h >= 120.0 {
                continue;
            }
            let fd = (schedule.omega_x(t + h) - schedule.omega_x(t - h)) / (2.0 * h);
            assert!(
                (fd - schedule.omega_x_dot(t)).abs() < 1e-6 * (1.0 + fd.abs()),
                "t={t}: {} vs {}",
                fd,
                schedule.omega_x_dot(t)
            );
            let fd2 = (schedule.omega_x_dot(t + h) - schedule.omega_x_dot(t - h)) / (2.0 * h);
            assert!((fd2 - schedule.omega_x_ddot(t)).abs() < 1e-5 * (1.0 + fd2.abs()));
            let fdr = (schedule.omega_rho(t + h) - schedule.omega_rho(t - h)) / (2.0 * h);
            assert!((fdr - schedule.omega_rho_dot(t)).abs() < 1e-6 * (1.0 + fdr.abs()));
            let fdr2 = (schedule.omega_rho_dot(t + h) - schedule.omega_rho_dot(t - h)) / (2.0 * h);
            assert!((fdr2 - schedule.omega_rho_ddot(t)).abs() < 1e-5 * (1.0 + fdr2.abs()));
        }
    }

    #[test]
    fn piecewise_pulse_areas() {
        let schedule = piecewise_scheme(400.0, 300.0, 10.0, 11.0).unwrap();
        let ax = numerics::integrate(&|t| schedule.omega_x(t), 0.0, 400.0, 1e-12).unwrap();
        let ar = numerics::integrate(&|t| schedule.omega_rho(t), 0.0, 400.0, 1e-12).unwrap();
        assert!((ax - PI).abs() < 1e-10, "pi pulse area = {ax}");
        assert!((ar - PI / 2.0).abs() < 1e-10, "pi/2 pulse area = {ar}");
    }

    #[test]
    fn piecewise_peak_and_supports() {
        let t_s = 300.0;
        let schedule = piecewise_scheme(400.0, t_s, 10.0, 11.0).unwrap();
        // peak of Omega_x at t = t_s/2 equals 15 pi / (8 t_s)
        let peak = schedule.omega_x(t_s / 2.0);
        assert!((peak - 15.0 * PI / (8.0 * t_s)).abs() < 1e-12);
        // supports are disjoint
        assert_eq!(schedule.omega_rho(100.0), 0.0);
        assert_eq!(schedule.omega_x(350.0), 0.0);
        assert_eq!(schedule.omega_rho(t_s), 0.0);
        assert_eq!(schedule.omega_rho(400.0), 0.0);
    }

    #[test]
    fn piecewise_alphas_reproduce_closed_forms() {
        // the epsilon-representation inserted into the coupling formulas
        // gives back the closed-form pulses pointwise
        let schedule = piecewise_scheme(500.0, 375.0, 10.0, 11.0).unwrap();
        let traj = schedule.invariant_trajectory();
        for k in 0..1000 {
            let t = 500.0 * (k as f64 + 0.5) / 1000.0;
            let (ox, orho) = traj.couplings(t).unwrap();
            assert!(
                (ox - schedule.omega_x(t)).abs() < 1e-9,
                "t={t}: omega_x {} vs {}",
                ox,
                schedule.omega_x(t)
            );
            assert!(
                (orho - schedule.omega_rho(t)).abs() < 1e-9,
                "t={t}: omega_rho {} vs {}",
                orho,
                schedule.omega_rho(t)
            );
        }
    }

    #[test]
    fn piecewise_rejects_bad_switch_time() {
        assert!(piecewise_scheme(100.0, 0.0, 10.0, 11.0).is_err());
        assert!(piecewise_scheme(100.0, 100.0, 10.0, 11.0).is_err());
        assert!(piecewise_scheme(100.0, -5.0, 10.0, 11.0).is_err());
    }

    #[test]
    fn boundary_checks_pass_for_both_schemes() {
        for schedule in [
            polynomial_scheme(150.0, 10.0, 11.0).unwrap(),
            piecewise_scheme(150.0, 112.5, 10.0, 11.0).unwrap(),
        ] {
            let report = boundary_check(&schedule);
            assert!(
                report.all_pass(),
                "failed items: {:?}",
                report.items.iter().filter(|i| !i.pass).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn tampered_schedule_fails_boundary_check() {
        struct Shifted(Arc<dyn ScheduleCouplings>);
        impl ScheduleCouplings for Shifted {
            fn omega_x(&self, t: f64) -> f64 {
                self.0.omega_x(t) + 0.01
            }
            fn omega_x_dot(&self, t: f64) -> f64 {
                self.0.omega_x_dot(t)
            }
            fn omega_x_ddot(&self, t: f64) -> f64 {
                self.0.omega_x_ddot(t)
            }
            fn omega_rho(&self, t: f64) -> f64 {
                self.0.omega_rho(t)
            }
            fn omega_rho_dot(&self, t: f64) -> f64 {
                self.0.omega_rho_dot(t)
            }
            fn omega_rho_ddot(&self, t: f64) -> f64 {
                self.0.omega_rho_ddot(t)
            }
        }
        let base = piecewise_scheme(100.0, 75.0, 10.0, 11.0).unwrap();
        let tampered = PulseSchedule::from_couplings(
            100.0,
            *base.constants(),
            base.invariant_trajectory().clone(),
            Arc::new(Shifted(base.couplings.clone())),
        );
        assert!(!boundary_check(&tampered).all_pass());
    }

    #[test]
    fn scaling_covariance() {
        // piecewise: Omega(t; 2T) = Omega(t/2; T) / 2 (pure pulse-area scaling)
        let s1 = piecewise_scheme(100.0, 75.0, 10.0, 11.0).unwrap();
        let s2 = piecewise_scheme(200.0, 150.0, 10.0, 11.0).unwrap();
        for i in 0..=50 {
            let t = 200.0 * i as f64 / 50.0;
            assert!((s2.omega_x(t) - 0.5 * s1.omega_x(t / 2.0)).abs() < 1e-12);
            assert!((s2.omega_rho(t) - 0.5 * s1.omega_rho(t / 2.0)).abs() < 1e-12);
        }
        // polynomial: W is T-independent and the couplings scale the same way
        let p1 = polynomial_scheme(100.0, 10.0, 11.0).unwrap();
        let p2 = polynomial_scheme(200.0, 10.0, 11.0).unwrap();
        let (SchemeTag::Polynomial { w: w1 }, SchemeTag::Polynomial { w: w2 }) =
            (p1.tag(), p2.tag())
        else {
            panic!()
        };
        assert!((w1 - w2).abs() < 1e-7);
        for i in 1..50 {
            let t = 200.0 * i as f64 / 50.0;
            assert!((p2.omega_x(t) - 0.5 * p1.omega_x(t / 2.0)).abs() < 1e-9);
        }
    }
}
