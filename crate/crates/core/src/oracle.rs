//! Exact quantum evolution in truncated Fock bases, used as ground truth for
//! both the analytic (`chi = 0`) and stochastic (`chi != 0`, small `N`)
//! routes, plus an exact two-mode beamsplitter reference.
//!
//! The three-well Hamiltonian conserves total atom number, so evolution from
//! `|0, N, 0⟩` stays in the fixed-`N` sector of dimension `(N+1)(N+2)/2`.
//! States are propagated through one symmetric eigendecomposition of the
//! (real, symmetric) Hamiltonian, which keeps the norm at machine precision
//! for arbitrary times.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::beamsplitter::BsInput;
use crate::moments::{MomentVector, PairMoments, N_MOMENTS};
use crate::{Error, Result};

/// Ordered basis of three-mode occupation triples with fixed total `N`.
#[derive(Clone, Debug)]
pub struct FockBasis {
    n_total: usize,
    states: Vec<[usize; 3]>,
}

impl FockBasis {
    pub fn new(n_total: usize) -> Self {
        let mut states = Vec::with_capacity((n_total + 1) * (n_total + 2) / 2);
        for n1 in 0..=n_total {
            for n2 in 0..=(n_total - n1) {
                states.push([n1, n2, n_total - n1 - n2]);
            }
        }
        FockBasis { n_total, states }
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn occupations(&self, idx: usize) -> [usize; 3] {
        self.states[idx]
    }

    /// Index of `(n1, n2, N - n1 - n2)`; the map is bijective on the sector.
    pub fn index_of(&self, n1: usize, n2: usize) -> usize {
        // The n1 block starts after sum_{k<n1} (N - k + 1) earlier states.
        n1 * (self.n_total + 1) - n1 * (n1.saturating_sub(1)) / 2 + n2
    }
}

/// State vector over a [`FockBasis`].
#[derive(Clone, Debug)]
pub struct FockState {
    pub amplitudes: Vec<Complex64>,
}

impl FockState {
    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Sector dimension up to which the Hamiltonian is diagonalized densely
/// (`N ≲ 60`); larger sectors propagate by adaptive high-order integration
/// of the sparse Schrödinger equation instead.
pub const DENSE_DIM_LIMIT: usize = 2000;

enum Propagator {
    /// Spectral decomposition of the dense sector Hamiltonian.
    Eigen {
        eigenvalues: Vec<f64>,
        eigenvectors: DMatrix<f64>,
    },
    /// Classic fourth-order Runge-Kutta with step-doubling error control on
    /// the sparse `-iHψ` application.
    AdaptiveOde,
}

/// Exact propagator for the fixed-`N` sector at given `J` and `chi`.
pub struct ThreeWellOracle {
    basis: FockBasis,
    j: f64,
    chi: f64,
    propagator: Propagator,
}

/// Hop matrix element `√((n_i + 1) n_j)` moving one atom from `j` to `i`.
fn hop(n_to: usize, n_from: usize) -> f64 {
    (((n_to + 1) * n_from) as f64).sqrt()
}

fn add_scaled(base: &FockState, derivative: &FockState, factor: f64) -> FockState {
    FockState {
        amplitudes: base
            .amplitudes
            .iter()
            .zip(&derivative.amplitudes)
            .map(|(b, d)| b + factor * d)
            .collect(),
    }
}

impl ThreeWellOracle {
    pub fn new(n_total: usize, j: f64, chi: f64) -> Result<Self> {
        if n_total > 300 {
            return Err(Error::InvalidConfig(format!(
                "oracle sectors above N = 300 are not supported, got {n_total}"
            )));
        }
        let basis = FockBasis::new(n_total);
        let dim = basis.dim();
        let propagator = if dim <= DENSE_DIM_LIMIT {
            let mut h = DMatrix::<f64>::zeros(dim, dim);
            for (idx, &[n1, n2, n3]) in basis.states.iter().enumerate() {
                let on_site = (n1 * n1 - n1 + n2 * n2 - n2 + n3 * n3 - n3) as f64;
                h[(idx, idx)] = chi * on_site;
                // a1† a2 and a3† a2 (the Hermitian partners fill in by symmetry).
                if n2 > 0 {
                    let to = basis.index_of(n1 + 1, n2 - 1);
                    h[(to, idx)] += j * hop(n1, n2);
                    h[(idx, to)] = h[(to, idx)];
                    let to = basis.index_of(n1, n2 - 1);
                    h[(to, idx)] += j * hop(n3, n2);
                    h[(idx, to)] = h[(to, idx)];
                }
            }
            let eigen = SymmetricEigen::new(h);
            Propagator::Eigen {
                eigenvalues: eigen.eigenvalues.as_slice().to_vec(),
                eigenvectors: eigen.eigenvectors,
            }
        } else {
            Propagator::AdaptiveOde
        };
        Ok(ThreeWellOracle {
            basis,
            j,
            chi,
            propagator,
        })
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    /// `|0, N, 0⟩`.
    pub fn middle_fock_state(&self) -> FockState {
        let mut amplitudes = vec![Complex64::ZERO; self.basis.dim()];
        amplitudes[self.basis.index_of(0, self.basis.n_total)] = Complex64::ONE;
        FockState { amplitudes }
    }

    /// Schrödinger derivative `-i H ψ`, built directly from the hopping
    /// rules (independent of the stored eigendecomposition).
    pub fn state_derivative(&self, state: &FockState) -> FockState {
        let mut h_psi = vec![Complex64::ZERO; self.basis.dim()];
        for (idx, &[n1, n2, n3]) in self.basis.states.iter().enumerate() {
            let c = state.amplitudes[idx];
            if c == Complex64::ZERO {
                continue;
            }
            let on_site = (n1 * n1 - n1 + n2 * n2 - n2 + n3 * n3 - n3) as f64;
            h_psi[idx] += self.chi * on_site * c;
            // J (a1†a2 + a2†a1 + a3†a2 + a2†a3) |n1 n2 n3⟩
            if n2 > 0 {
                h_psi[self.basis.index_of(n1 + 1, n2 - 1)] += self.j * hop(n1, n2) * c;
                h_psi[self.basis.index_of(n1, n2 - 1)] += self.j * hop(n3, n2) * c;
            }
            if n1 > 0 {
                h_psi[self.basis.index_of(n1 - 1, n2 + 1)] += self.j * hop(n2, n1) * c;
            }
            if n3 > 0 {
                h_psi[self.basis.index_of(n1, n2 + 1)] += self.j * hop(n2, n3) * c;
            }
        }
        FockState {
            amplitudes: h_psi.into_iter().map(|z| -Complex64::I * z).collect(),
        }
    }

    /// Propagates `state0` by time `t`: spectrally for dense sectors,
    /// otherwise by adaptive integration (cost grows with `|t|`, so prefer
    /// stepping a series incrementally in that regime).
    pub fn evolve(&self, state0: &FockState, t: f64) -> FockState {
        match &self.propagator {
            Propagator::Eigen {
                eigenvalues,
                eigenvectors,
            } => self.evolve_spectral(state0, t, eigenvalues, eigenvectors),
            Propagator::AdaptiveOde => self.evolve_ode(state0, t),
        }
    }

    fn evolve_spectral(
        &self,
        state0: &FockState,
        t: f64,
        eigenvalues: &[f64],
        v: &DMatrix<f64>,
    ) -> FockState {
        let dim = self.basis.dim();
        // c = Vᵀ ψ0
        let mut c = vec![Complex64::ZERO; dim];
        for (k, ck) in c.iter_mut().enumerate() {
            let mut acc = Complex64::ZERO;
            for i in 0..dim {
                acc += v[(i, k)] * state0.amplitudes[i];
            }
            *ck = acc;
        }
        for (k, ck) in c.iter_mut().enumerate() {
            *ck *= Complex64::from_polar(1.0, -eigenvalues[k] * t);
        }
        let mut out = vec![Complex64::ZERO; dim];
        for (i, oi) in out.iter_mut().enumerate() {
            let mut acc = Complex64::ZERO;
            for (k, ck) in c.iter().enumerate() {
                acc += v[(i, k)] * ck;
            }
            *oi = acc;
        }
        FockState { amplitudes: out }
    }

    /// RK4 with step doubling: each step is accepted when the full step and
    /// two half steps agree within the target, and the Richardson-corrected
    /// half-step result is kept.
    fn evolve_ode(&self, state0: &FockState, t: f64) -> FockState {
        const TOL: f64 = 1e-11;
        let rk4 = |psi: &FockState, h: f64| -> FockState {
            let k1 = self.state_derivative(psi);
            let mid1 = add_scaled(psi, &k1, 0.5 * h);
            let k2 = self.state_derivative(&mid1);
            let mid2 = add_scaled(psi, &k2, 0.5 * h);
            let k3 = self.state_derivative(&mid2);
            let end = add_scaled(psi, &k3, h);
            let k4 = self.state_derivative(&end);
            let amplitudes = psi
                .amplitudes
                .iter()
                .zip(&k1.amplitudes)
                .zip(&k2.amplitudes)
                .zip(&k3.amplitudes)
                .zip(&k4.amplitudes)
                .map(|((((p, a), b), c), d)| p + h / 6.0 * (a + 2.0 * b + 2.0 * c + d))
                .collect();
            FockState { amplitudes }
        };

        let total = t.abs();
        let direction = t.signum();
        // Initial step from the energy scale of the sector.
        let n = self.basis.n_total() as f64;
        let energy = (self.chi.abs() * n * n + 2.0 * self.j.abs() * n.sqrt()).max(1e-9);
        let mut h = (0.1 / energy).min(total.max(1e-12));
        let mut psi = state0.clone();
        let mut advanced = 0.0;
        while advanced < total {
            h = h.min(total - advanced);
            let full = rk4(&psi, direction * h);
            let half = rk4(&rk4(&psi, direction * 0.5 * h), direction * 0.5 * h);
            let err: f64 = full
                .amplitudes
                .iter()
                .zip(&half.amplitudes)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if err > TOL && h > 1e-9 {
                h *= 0.5;
                continue;
            }
            // Fifth-order Richardson combination of the two estimates.
            psi = FockState {
                amplitudes: half
                    .amplitudes
                    .iter()
                    .zip(&full.amplitudes)
                    .map(|(hv, fv)| hv + (hv - fv) / 15.0)
                    .collect(),
            };
            advanced += h;
            if err < 0.1 * TOL {
                h *= 1.6;
            }
        }
        psi
    }

    /// Exact normally ordered moments of `state` as a [`MomentVector`].
    ///
    /// Within a fixed-`N` sector every `⟨a_j⟩` and `⟨a_i a_j⟩` vanishes
    /// identically (they change the total number), so those entries are zero.
    pub fn moments(&self, state: &FockState) -> MomentVector {
        let mut m = [Complex64::ZERO; N_MOMENTS];
        let amp = &state.amplitudes;

        // Diagonal number moments.
        let mut n_mean = [0.0; 3];
        let mut nn = [0.0; 3]; // pairs (1,2), (1,3), (2,3)
        let mut n2 = [0.0; 3];
        for (idx, &occ) in self.basis.states.iter().enumerate() {
            let p = amp[idx].norm_sqr();
            if p == 0.0 {
                continue;
            }
            let nf = [occ[0] as f64, occ[1] as f64, occ[2] as f64];
            for j in 0..3 {
                n_mean[j] += p * nf[j];
                n2[j] += p * nf[j] * (nf[j] - 1.0);
            }
            nn[0] += p * nf[0] * nf[1];
            nn[1] += p * nf[0] * nf[2];
            nn[2] += p * nf[1] * nf[2];
        }
        for j in 0..3 {
            m[6 + 3 * j + j] = Complex64::new(n_mean[j], 0.0);
            m[30 + j] = Complex64::new(n2[j], 0.0);
        }
        for (k, &v) in nn.iter().enumerate() {
            m[27 + k] = Complex64::new(v, 0.0);
        }

        // Off-diagonal ⟨a_i† a_j⟩: move one atom from well j to well i.
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let mut acc = Complex64::ZERO;
                for (idx, &occ) in self.basis.states.iter().enumerate() {
                    if occ[j] == 0 {
                        continue;
                    }
                    let mut to = occ;
                    to[j] -= 1;
                    to[i] += 1;
                    let to_idx = self.basis.index_of(to[0], to[1]);
                    acc += amp[to_idx].conj() * amp[idx] * hop(occ[i], occ[j]);
                }
                m[6 + 3 * i + j] = acc;
            }
        }
        MomentVector(m)
    }
}

// ---------------------------------------------------------------------------
// Exact two-mode beamsplitter
// ---------------------------------------------------------------------------

/// Result of the exact balanced-beamsplitter transformation.
#[derive(Clone, Debug)]
pub struct BsExact {
    /// Output-port pair moments (`i` = transmitted port a, `j` = port b).
    pub pair: PairMoments,
    /// Probability mass outside the number-basis truncation.
    pub tail_mass: f64,
}

/// Number-basis amplitudes of the input state in mode a, grown until the
/// neglected tail is below `tail_bound`.
fn input_amplitudes(input: &BsInput, tail_bound: f64) -> (Vec<f64>, f64) {
    match *input {
        BsInput::Fock(n) => {
            let mut c = vec![0.0; n as usize + 1];
            c[n as usize] = 1.0;
            (c, 0.0)
        }
        BsInput::Coherent(mean_n) => {
            let beta = mean_n.sqrt();
            let mut c = vec![(-0.5 * mean_n).exp()];
            let mut mass = c[0] * c[0];
            let mut m = 0usize;
            while 1.0 - mass > tail_bound && m < 4096 {
                m += 1;
                let next = c[m - 1] * beta / (m as f64).sqrt();
                c.push(next);
                mass += next * next;
            }
            (c, (1.0 - mass).max(0.0))
        }
        BsInput::Squeezed(r) => {
            // Squeezing parameter s = r/2 gives V(X) = e^{-r}; only even
            // number states are populated.
            let s = 0.5 * r;
            let tanh = s.tanh();
            let mut c = vec![1.0 / s.cosh().sqrt()];
            let mut mass = c[0] * c[0];
            let mut m = 0usize;
            while 1.0 - mass > tail_bound && m < 4096 {
                m += 1;
                let prev = c[2 * (m - 1)];
                let next = -tanh * prev * ((2.0 * m as f64 - 1.0) / (2.0 * m as f64)).sqrt();
                c.push(0.0);
                c.push(next);
                mass += next * next;
            }
            (c, (1.0 - mass).max(0.0))
        }
    }
}

/// Applies the balanced (`η = ½`) lossless beamsplitter to `input ⊗ |0⟩`
/// exactly on the truncated two-mode number basis and returns all output
/// moments the witnesses need.
///
/// Total number is conserved, so the output state is assembled sector by
/// sector: the sector-`M` input component `|M, 0⟩` maps to the binomial
/// superposition `Σ_k √C(M,k) cosθ^k (−sinθ)^{M−k} |k, M−k⟩` with
/// `cosθ = √η`.
pub fn bs_exact(input: &BsInput) -> BsExact {
    let (c_in, tail_mass) = input_amplitudes(input, 1e-12);
    let theta = std::f64::consts::FRAC_PI_4;
    let (sin_t, cos_t) = theta.sin_cos();

    // sectors[m][k] = amplitude of |n_a = k, n_b = m - k⟩
    let sectors: Vec<Vec<f64>> = c_in
        .iter()
        .enumerate()
        .map(|(m, &cm)| {
            let mut v = vec![0.0; m + 1];
            if cm != 0.0 {
                // k = 0 term is (-sinθ)^m; build upward via the binomial ratio.
                let mut a = cm * (-sin_t).powi(m as i32);
                v[0] = a;
                for k in 0..m {
                    a *= ((m - k) as f64 / (k + 1) as f64).sqrt() * (cos_t / -sin_t);
                    v[k + 1] = a;
                }
            }
            v
        })
        .collect();

    let n_sectors = sectors.len();
    let real = |x: f64| Complex64::new(x, 0.0);

    // Number-conserving moments (within sectors).
    let mut n_a = 0.0;
    let mut n_b = 0.0;
    let mut nn = 0.0;
    let mut n2_a = 0.0;
    let mut n2_b = 0.0;
    let mut ata = 0.0; // ⟨a† b⟩
    for (m, v) in sectors.iter().enumerate() {
        for (k, &c) in v.iter().enumerate() {
            let p = c * c;
            let (ka, kb) = (k as f64, (m - k) as f64);
            n_a += p * ka;
            n_b += p * kb;
            nn += p * ka * kb;
            n2_a += p * ka * (ka - 1.0);
            n2_b += p * kb * (kb - 1.0);
            if k < m {
                // ⟨a† b⟩ couples |k+1, m-k-1⟩ ← |k, m-k⟩
                ata += v[k + 1] * c * (((k + 1) as f64) * kb).sqrt();
            }
        }
    }

    // Sector-lowering moments.
    let mut a_mean = 0.0;
    let mut b_mean = 0.0;
    let mut aa = 0.0;
    let mut bb = 0.0;
    let mut ab = 0.0;
    for m in 0..n_sectors {
        let v = &sectors[m];
        if m >= 1 {
            let lower = &sectors[m - 1];
            for (k, &c) in v.iter().enumerate() {
                if k >= 1 {
                    a_mean += lower[k - 1] * c * (k as f64).sqrt();
                }
                if m - k >= 1 {
                    b_mean += lower[k] * c * ((m - k) as f64).sqrt();
                }
            }
        }
        if m >= 2 {
            let lower = &sectors[m - 2];
            for (k, &c) in v.iter().enumerate() {
                if k >= 2 {
                    aa += lower[k - 2] * c * ((k * (k - 1)) as f64).sqrt();
                }
                if m - k >= 2 {
                    bb += lower[k] * c * (((m - k) * (m - k - 1)) as f64).sqrt();
                }
                if k >= 1 && m - k >= 1 {
                    ab += lower[k - 1] * c * ((k * (m - k)) as f64).sqrt();
                }
            }
        }
    }

    BsExact {
        pair: PairMoments {
            n_i: real(n_a),
            n_j: real(n_b),
            ata_ij: real(ata),
            ata_ji: real(ata),
            a_i: real(a_mean),
            a_j: real(b_mean),
            ap_i: real(a_mean),
            ap_j: real(b_mean),
            aa_ii: real(aa),
            aa_jj: real(bb),
            aa_ij: real(ab),
            apap_ii: real(aa),
            apap_jj: real(bb),
            apap_ij: real(ab),
            nn_ij: real(nn),
            n2_i: real(n2_a),
            n2_j: real(n2_b),
        },
        tail_mass,
    }
}
