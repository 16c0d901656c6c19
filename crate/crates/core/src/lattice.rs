//! Dimensionless single-well problem: lattice geometry, the three lowest
//! eigenstates of one lattice site, and every matrix element the reduced
//! models need.
//!
//! Units: hbar = m = omega = 1, with omega^2 = 2 V0 k^2 / m fixing
//! k = 1/sqrt(2 V0). The well is the single site [-l, l], l = pi/(2k),
//! truncated with Dirichlet walls.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensionless lattice setup.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LatticeConfig {
    /// Lattice depth in units of hbar*omega.
    pub v0: f64,
    /// Wavenumber, k = 1/sqrt(2 V0).
    pub k: f64,
    /// Half lattice period, l = pi/(2k). The lattice constant is 2l.
    pub ell: f64,
}

impl LatticeConfig {
    /// Build the configuration for a given depth `v0 > 0` (units of hbar*omega).
    pub fn new(v0: f64) -> Result<Self> {
        if !(v0 > 0.0) || !v0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lattice depth must be positive and finite, got {v0}"
            )));
        }
        let k = 1.0 / (2.0 * v0).sqrt();
        let ell = std::f64::consts::PI / (2.0 * k);
        Ok(Self { v0, k, ell })
    }

    /// Static single-site potential V0 sin^2(k x).
    pub fn potential_1d(&self, x: f64) -> f64 {
        let s = (self.k * x).sin();
        self.v0 * s * s
    }
}

/// Sampled eigenstates of the single-well 1D problem (lowest three), before
/// matrix elements have been attached.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WellEigenstates {
    /// Interior grid points over (-l, l); spacing `h`.
    pub xs: Vec<f64>,
    pub h: f64,
    /// Gamma_0, Gamma_1, Gamma_2 sampled on `xs`, unit L2 norm.
    pub gamma: [Vec<f64>; 3],
    /// E0 < E1 < E2 in units of hbar*omega.
    pub energies: [f64; 3],
    /// Max eigen-residual ||H psi - E psi|| / ||psi|| over the three states.
    pub max_residual: f64,
}

/// Table of two-particle-in-a-product-state frequencies omega_ij = E_i + E_j.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OmegaTable {
    pub omega_00: f64,
    pub omega_10: f64,
    pub omega_11: f64,
    pub omega_20: f64,
}

/// Complete single-well spectrum: eigenstates plus the matrix elements and
/// frequencies entering the reduced models.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WellSpectrum {
    pub states: WellEigenstates,
    pub omega: OmegaTable,
    /// omega_d = omega_10 - omega_00 = E1 - E0.
    pub omega_d: f64,
    /// gamma_1 = <Gamma_0| x |Gamma_1>.
    pub gamma1: f64,
    /// gamma_2 = <Gamma_0| sin(kx) |Gamma_1>^2.
    pub gamma2: f64,
    /// sqrt(gamma_2) with the sign of the underlying integral (positive
    /// under our sign conventions).
    pub sqrt_gamma2: f64,
    /// <Gamma_2| x |Gamma_1>.
    pub d1_integral: f64,
    /// <Gamma_2| sin(kx) |Gamma_1>.
    pub d2_integral: f64,
}

/// Default spatial resolution for the well solve.
pub const DEFAULT_WELL_POINTS: usize = 1024;

/// Solve the lowest three eigenpairs of -(1/2) d^2/dx^2 + V0 sin^2(kx) on
/// [-l, l] with Dirichlet walls.
///
/// Discretization is a 4th-order central stencil on `n_points` interior
/// points, with antisymmetric reflection closing the stencil at the walls.
/// Sign conventions: Gamma_0(0) > 0, Gamma_1'(0) > 0, Gamma_2(0) < 0.
pub fn solve_well_eigenstates(config: &LatticeConfig, n_points: usize) -> Result<WellEigenstates> {
    if n_points < 256 {
        return Err(Error::InvalidParameter(format!(
            "n_points must be at least 256, got {n_points}"
        )));
    }
    let n = n_points;
    let h = 2.0 * config.ell / (n + 1) as f64;
    let xs: Vec<f64> = (0..n).map(|j| -config.ell + (j + 1) as f64 * h).collect();

    let c = 1.0 / (24.0 * h * h);
    let mut diag: Vec<f64> = xs.iter().map(|&x| 30.0 * c + config.potential_1d(x)).collect();
    // Dirichlet wall: psi extended antisymmetrically, which folds the
    // second-neighbour coefficient back onto the first interior point.
    diag[0] -= c;
    diag[n - 1] -= c;
    let off1 = vec![-16.0 * c; n - 1];
    let off2 = vec![c; n - 2];
    let matrix = PentaMatrix { diag, off1, off2 };

    let mut gamma: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut energies = [0.0_f64; 3];
    let mut max_residual = 0.0_f64;
    let mut found: Vec<Vec<f64>> = Vec::new();
    for k_idx in 0..3 {
        let (lambda, mut vec, residual) = matrix.eigenpair(k_idx, &found)?;
        if residual > 1e-8 {
            return Err(Error::NumericalFailure(format!(
                "well eigensolver: state {k_idx} residual {residual:.3e} exceeds 1e-8"
            )));
        }
        max_residual = max_residual.max(residual);
        // normalize to unit L2 norm with quadrature weight h
        let nrm = (vec.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
        for v in vec.iter_mut() {
            *v /= nrm;
        }
        found.push(vec.clone());
        energies[k_idx] = lambda;
        gamma[k_idx] = vec;
    }
    if !(energies[0] < energies[1] && energies[1] < energies[2]) {
        return Err(Error::NumericalFailure(format!(
            "well energies not strictly increasing: {energies:?}"
        )));
    }

    // sign conventions, fixed near x = 0 (between indices n/2 - 1 and n/2)
    let mid = n / 2;
    if gamma[0][mid] < 0.0 {
        gamma[0].iter_mut().for_each(|v| *v = -*v);
    }
    if gamma[1][mid + 8] - gamma[1][mid - 8] < 0.0 {
        gamma[1].iter_mut().for_each(|v| *v = -*v);
    }
    if gamma[2][mid] > 0.0 {
        gamma[2].iter_mut().for_each(|v| *v = -*v);
    }

    Ok(WellEigenstates { xs, h, gamma, energies, max_residual })
}

/// Attach matrix elements and the frequency table to solved eigenstates.
pub fn matrix_elements(states: WellEigenstates, config: &LatticeConfig) -> WellSpectrum {
    let h = states.h;
    let quad = |f: &dyn Fn(usize) -> f64| -> f64 {
        (0..states.xs.len()).map(f).sum::<f64>() * h
    };
    let g = &states.gamma;
    let xs = &states.xs;
    let gamma1 = quad(&|j| g[0][j] * xs[j] * g[1][j]);
    let sqrt_gamma2 = quad(&|j| g[0][j] * (config.k * xs[j]).sin() * g[1][j]);
    let d1_integral = quad(&|j| g[2][j] * xs[j] * g[1][j]);
    let d2_integral = quad(&|j| g[2][j] * (config.k * xs[j]).sin() * g[1][j]);
    let [e0, e1, e2] = states.energies;
    let omega = OmegaTable {
        omega_00: 2.0 * e0,
        omega_10: e1 + e0,
        omega_11: 2.0 * e1,
        omega_20: e2 + e0,
    };
    WellSpectrum {
        states,
        omega,
        omega_d: e1 - e0,
        gamma1,
        gamma2: sqrt_gamma2 * sqrt_gamma2,
        sqrt_gamma2,
        d1_integral,
        d2_integral,
    }
}

/// Convenience: solve and attach matrix elements in one call.
pub fn well_spectrum(config: &LatticeConfig, n_points: usize) -> Result<WellSpectrum> {
    let states = solve_well_eigenstates(config, n_points)?;
    Ok(matrix_elements(states, config))
}

// ---------------------------------------------------------------------------
// Symmetric pentadiagonal eigensolver: spectrum slicing by LDL^T inertia plus
// inverse iteration through a banded LU with partial pivoting.
// ---------------------------------------------------------------------------

struct PentaMatrix {
    diag: Vec<f64>,
    off1: Vec<f64>,
    off2: Vec<f64>,
}

impl PentaMatrix {
    fn n(&self) -> usize {
        self.diag.len()
    }

    fn matvec(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n();
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i >= 1 {
                v += self.off1[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.off1[i] * x[i + 1];
            }
            if i >= 2 {
                v += self.off2[i - 2] * x[i - 2];
            }
            if i + 2 < n {
                v += self.off2[i] * x[i + 2];
            }
            out[i] = v;
        }
    }

    /// Number of eigenvalues strictly below `sigma` (LDL^T inertia count).
    fn count_below(&self, sigma: f64) -> usize {
        let n = self.n();
        let scale = self.gershgorin_radius();
        let mut shift = sigma;
        'retry: for _attempt in 0..8 {
            let mut count = 0usize;
            let mut d_im1 = 0.0_f64;
            let mut d_im2 = 0.0_f64;
            let mut l1_im1 = 0.0_f64; // L[i-1][i-2]
            for i in 0..n {
                let l2 = if i >= 2 { self.off2[i - 2] / d_im2 } else { 0.0 };
                let l1 = if i >= 1 {
                    let mut v = self.off1[i - 1];
                    if i >= 2 {
                        v -= l2 * l1_im1 * d_im2;
                    }
                    v / d_im1
                } else {
                    0.0
                };
                let mut d = self.diag[i] - shift;
                if i >= 1 {
                    d -= l1 * l1 * d_im1;
                }
                if i >= 2 {
                    d -= l2 * l2 * d_im2;
                }
                if d.abs() < 1e-300 * scale.max(1.0) {
                    // exactly-singular pivot: nudge the shift and restart
                    shift = sigma + (1e-12 * scale).max(1e-290) * (_attempt + 1) as f64;
                    continue 'retry;
                }
                if d < 0.0 {
                    count += 1;
                }
                d_im2 = d_im1;
                d_im1 = d;
                l1_im1 = l1;
            }
            return count;
        }
        // unreachable in practice; a final nudged pass
        self.count_below(sigma + 1e-9 * scale)
    }

    fn gershgorin_radius(&self) -> f64 {
        let n = self.n();
        let mut r: f64 = 0.0;
        for i in 0..n {
            let mut s = self.diag[i].abs();
            if i >= 1 {
                s += self.off1[i - 1].abs();
            }
            if i + 1 < n {
                s += self.off1[i].abs();
            }
            if i >= 2 {
                s += self.off2[i - 2].abs();
            }
            if i + 2 < n {
                s += self.off2[i].abs();
            }
            r = r.max(s);
        }
        r
    }

    /// k-th eigenvalue (ascending) by bisection on the inertia count.
    fn eigenvalue(&self, k: usize) -> f64 {
        let r = self.gershgorin_radius();
        let mut lo = -r;
        let mut hi = r;
        // invariant: count_below(lo) <= k < count_below(hi)
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if self.count_below(mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 * r.max(1.0) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenpair for index `k`: bisected eigenvalue, inverse-iteration vector
    /// (orthogonalized against `previous`), and the relative residual.
    fn eigenpair(&self, k: usize, previous: &[Vec<f64>]) -> Result<(f64, Vec<f64>, f64)> {
        let n = self.n();
        let lambda = self.eigenvalue(k);
        let lu = BandLu::factor(self, lambda)?;
        // deterministic start vector with nonzero overlap
        let mut v: Vec<f64> = (0..n)
            .map(|i| {
                let t = (i + 1) as f64 / (n + 1) as f64;
                (std::f64::consts::PI * (k + 1) as f64 * t).sin()
            })
            .collect();
        let mut work = vec![0.0; n];
        let mut rayleigh = lambda;
        let mut residual = f64::INFINITY;
        for _iter in 0..6 {
            lu.solve(&mut v);
            for p in previous {
                let dot: f64 = v.iter().zip(p).map(|(a, b)| a * b).sum();
                let nrm2: f64 = p.iter().map(|x| x * x).sum();
                let coef = dot / nrm2;
                v.iter_mut().zip(p).for_each(|(a, b)| *a -= coef * b);
            }
            let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(nrm > 0.0) || !nrm.is_finite() {
                return Err(Error::NumericalFailure(format!(
                    "inverse iteration collapsed for eigenpair {k}"
                )));
            }
            v.iter_mut().for_each(|x| *x /= nrm);
            self.matvec(&v, &mut work);
            rayleigh = v.iter().zip(&work).map(|(a, b)| a * b).sum();
            residual = work
                .iter()
                .zip(&v)
                .map(|(hv, vi)| (hv - rayleigh * vi).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual < 1e-10 * rayleigh.abs().max(1.0) {
                break;
            }
        }
        Ok((rayleigh, v, residual))
    }
}

/// Banded LU with partial pivoting for (A - sigma I), bandwidths kl = ku = 2.
/// LAPACK-style band storage with two extra superdiagonals of pivot fill.
struct BandLu {
    n: usize,
    /// ab[r][j] holds M[i][j] at r = i - j + 4, for i - j in [-4, 2].
    ab: Vec<f64>,
    ipiv: Vec<usize>,
}

const KL: usize = 2;
const KU: usize = 2;
const LDAB: usize = KL + KU + 1 + KL; // 7 logical rows

impl BandLu {
    #[inline]
    fn idx(r: usize, j: usize) -> usize {
        j * LDAB + r
    }

    fn factor(m: &PentaMatrix, sigma: f64) -> Result<Self> {
        let n = m.n();
        let mut ab = vec![0.0_f64; LDAB * n];
        for j in 0..n {
            ab[Self::idx(4, j)] = m.diag[j] - sigma;
            if j >= 1 {
                ab[Self::idx(5, j - 1)] = m.off1[j - 1]; // A[j][j-1]
                ab[Self::idx(3, j)] = m.off1[j - 1]; // A[j-1][j]
            }
            if j >= 2 {
                ab[Self::idx(6, j - 2)] = m.off2[j - 2]; // A[j][j-2]
                ab[Self::idx(2, j)] = m.off2[j - 2]; // A[j-2][j]
            }
        }
        let mut ipiv = vec![0usize; n];
        let tiny = 1e-305;
        for j in 0..n {
            // pivot among rows i = j .. j+KL (band rows 4..=6 at column j)
            let mut p = 0usize;
            let mut best = ab[Self::idx(4, j)].abs();
            for off in 1..=KL.min(n - 1 - j) {
                let v = ab[Self::idx(4 + off, j)].abs();
                if v > best {
                    best = v;
                    p = off;
                }
            }
            ipiv[j] = p;
            if p != 0 {
                // swap rows j and j+p across columns j .. j+KU+KL
                // (row i lives at band row i - col + 4)
                for col in j..(j + KU + KL + 1).min(n) {
                    let ra = j + 4 - col;
                    let rb = j + p + 4 - col;
                    ab.swap(Self::idx(ra, col), Self::idx(rb, col));
                }
            }
            let mut pivot = ab[Self::idx(4, j)];
            if pivot == 0.0 {
                // keep the factorization alive for inverse iteration
                pivot = tiny;
                ab[Self::idx(4, j)] = tiny;
            }
            for off in 1..=KL.min(n - 1 - j) {
                let mult = ab[Self::idx(4 + off, j)] / pivot;
                ab[Self::idx(4 + off, j)] = mult;
                if mult != 0.0 {
                    for col in (j + 1)..(j + KU + KL + 1).min(n) {
                        let rj = (j + 4) - col; // row j at column col
                        let ri = (j + off + 4) - col;
                        if rj <= 6 && ri <= 6 {
                            let upd = mult * ab[Self::idx(rj, col)];
                            ab[Self::idx(ri, col)] -= upd;
                        }
                    }
                }
            }
        }
        Ok(Self { n, ab, ipiv })
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        // forward: apply P and L
        for j in 0..n {
            let p = self.ipiv[j];
            if p != 0 {
                b.swap(j, j + p);
            }
            for off in 1..=KL.min(n - 1 - j) {
                let m = self.ab[Self::idx(4 + off, j)];
                b[j + off] -= m * b[j];
            }
        }
        // back substitution with up to KU+KL superdiagonals
        for j in (0..n).rev() {
            let mut v = b[j];
            for col in (j + 1)..(j + KU + KL + 1).min(n) {
                let r = (j + 4) - col;
                if r <= 6 {
                    v -= self.ab[Self::idx(r, col)] * b[col];
                }
            }
            b[j] = v / self.ab[Self::idx(4, j)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_examples() {
        let c = LatticeConfig::new(3.0).unwrap();
        assert!((c.k - 1.0 / 6.0_f64.sqrt()).abs() < 1e-15);
        assert!((c.ell - std::f64::consts::PI * 6.0_f64.sqrt() / 2.0).abs() < 1e-12);
        let c = LatticeConfig::new(0.5).unwrap();
        assert!((c.k - 1.0).abs() < 1e-15);
        assert!((c.ell - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let c = LatticeConfig::new(2.0).unwrap();
        assert!((c.k - 0.5).abs() < 1e-15);
        assert!((c.ell - std::f64::consts::PI).abs() < 1e-12);
        // l * k = pi/2 always
        for v0 in [0.3, 1.0, 7.3] {
            let c = LatticeConfig::new(v0).unwrap();
            assert!((c.ell * c.k - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        }
        assert!(LatticeConfig::new(0.0).is_err());
        assert!(LatticeConfig::new(-1.0).is_err());
        assert!(LatticeConfig::new(f64::NAN).is_err());
    }

    #[test]
    fn penta_eigen_against_dense_oracle() {
        // small random-ish symmetric pentadiagonal vs nalgebra dense solve
        let n = 60;
        let diag: Vec<f64> = (0..n).map(|i| 2.0 + (i as f64 * 0.7).sin()).collect();
        let off1: Vec<f64> = (0..n - 1).map(|i| -0.8 + 0.1 * (i as f64 * 1.3).cos()).collect();
        let off2: Vec<f64> = (0..n - 2).map(|i| 0.2 * (i as f64 * 0.31).sin()).collect();
        let m = PentaMatrix { diag: diag.clone(), off1: off1.clone(), off2: off2.clone() };

        let mut dense = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            dense[(i, i)] = diag[i];
            if i + 1 < n {
                dense[(i, i + 1)] = off1[i];
                dense[(i + 1, i)] = off1[i];
            }
            if i + 2 < n {
                dense[(i, i + 2)] = off2[i];
                dense[(i + 2, i)] = off2[i];
            }
        }
        let mut oracle: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
        oracle.sort_by(f64::total_cmp);

        let mut found = Vec::new();
        for k in 0..3 {
            let (lambda, vec, residual) = m.eigenpair(k, &found).unwrap();
            assert!(residual < 1e-10, "residual {residual}");
            assert!((lambda - oracle[k]).abs() < 1e-9, "k={k}: {lambda} vs {}", oracle[k]);
            found.push(vec);
        }
    }

    #[test]
    fn well_solve_orthonormal_and_ordered() {
        let cfg = LatticeConfig::new(3.0).unwrap();
        let st = solve_well_eigenstates(&cfg, 512).unwrap();
        let h = st.h;
        for a in 0..3 {
            for b in 0..3 {
                let dot: f64 =
                    st.gamma[a].iter().zip(&st.gamma[b]).map(|(x, y)| x * y).sum::<f64>() * h;
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-10, "<{a}|{b}> = {dot}");
            }
        }
        assert!(st.energies[0] < st.energies[1] && st.energies[1] < st.energies[2]);
        assert!(st.max_residual < 1e-8);
    }

    #[test]
    fn rejects_too_few_points() {
        let cfg = LatticeConfig::new(3.0).unwrap();
        assert!(matches!(
            solve_well_eigenstates(&cfg, 128),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn grid_convergence_512_to_1024() {
        let cfg = LatticeConfig::new(3.0).unwrap();
        let a = well_spectrum(&cfg, 512).unwrap();
        let b = well_spectrum(&cfg, 1024).unwrap();
        for i in 0..3 {
            assert!(
                (a.states.energies[i] - b.states.energies[i]).abs() < 1e-6,
                "E{i} moved by {}",
                (a.states.energies[i] - b.states.energies[i]).abs()
            );
        }
        assert!((a.gamma1 - b.gamma1).abs() < 1e-6);
        assert!((a.gamma2 - b.gamma2).abs() < 1e-6);
    }

    #[test]
    fn spectrum_values_v0_3() {
        // frozen from an independent banded eigensolver run (4th-order stencil)
        let cfg = LatticeConfig::new(3.0).unwrap();
        let sp = well_spectrum(&cfg, 1024).unwrap();
        assert!((sp.states.energies[0] - 0.478194862).abs() < 1e-6);
        assert!((sp.states.energies[1] - 1.386765823).abs() < 1e-6);
        assert!((sp.states.energies[2] - 2.198593263).abs() < 1e-6);
        assert!((sp.omega_d - 0.908570961).abs() < 1e-6);
        assert!((sp.gamma1 - 0.741262564).abs() < 1e-6);
        assert!((sp.gamma2 - 0.083134541).abs() < 1e-6);
        assert!((sp.d1_integral - 1.108062864).abs() < 1e-6);
        assert!((sp.d2_integral - 0.407543366).abs() < 1e-6);
    }

    #[test]
    fn parity_and_symmetry_invariants() {
        let cfg = LatticeConfig::new(3.0).unwrap();
        let sp = well_spectrum(&cfg, 1024).unwrap();
        let st = &sp.states;
        let h = st.h;
        // parity: <G0|x|G0> and <G0|x|G2> vanish
        let x_00: f64 =
            st.xs.iter().enumerate().map(|(j, &x)| st.gamma[0][j] * x * st.gamma[0][j]).sum::<f64>() * h;
        let x_02: f64 =
            st.xs.iter().enumerate().map(|(j, &x)| st.gamma[0][j] * x * st.gamma[2][j]).sum::<f64>() * h;
        assert!(x_00.abs() < 1e-9);
        assert!(x_02.abs() < 1e-9);
        // omega_11 = 2 omega_10 - omega_00 exactly by construction
        assert_eq!(sp.omega.omega_11, 2.0 * sp.omega.omega_10 - sp.omega.omega_00);
        // gamma2 strictly inside (0, 1): Cauchy-Schwarz with |sin(kx)| <= 1
        assert!(sp.gamma2 > 0.0 && sp.gamma2 < 1.0);
        assert!(sp.gamma1 > 0.0);
        // anharmonic softening
        assert!(sp.omega_d < 1.0 && sp.omega_d > 0.8);
    }

    #[test]
    fn omega_d_increases_with_depth() {
        let mut prev = 0.0;
        for v0 in [2.0, 2.5, 3.0, 3.5] {
            let cfg = LatticeConfig::new(v0).unwrap();
            let sp = well_spectrum(&cfg, 512).unwrap();
            assert!(sp.omega_d > prev && sp.omega_d < 1.0, "omega_d({v0}) = {}", sp.omega_d);
            prev = sp.omega_d;
        }
    }

    #[test]
    fn harmonic_limit_v0_30() {
        let cfg = LatticeConfig::new(30.0).unwrap();
        let sp = well_spectrum(&cfg, 1024).unwrap();
        // oscillator oracle: E1 - E0 -> omega = 1, gamma1 -> 1/sqrt(2),
        // <2|x|1> -> 1 (ladder operators with hbar = m = omega = 1)
        assert!((sp.omega_d - 1.0).abs() < 0.02);
        assert!((sp.gamma1 - std::f64::consts::FRAC_1_SQRT_2).abs() / std::f64::consts::FRAC_1_SQRT_2 < 0.03);
        assert!((sp.d1_integral - 1.0).abs() < 0.05);
    }
}
