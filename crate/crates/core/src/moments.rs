//! Ensemble-averaged operator moments.
//!
//! Positive-P averages of products of the phase-space variables represent
//! normally ordered operator moments: `mean(α_j^m α_k^{+n}) → ⟨a_k†^n a_j^m⟩`.
//! One [`MomentVector`] holds every product needed by the witness formulas,
//! through fourth order, in a fixed layout shared by the stochastic sampler
//! (per trajectory), the ensemble averages and the exact oracle.

use num_complex::Complex64;

use crate::stats::Meas;

/// Number of complex moments tracked per time point.
pub const N_MOMENTS: usize = 33;

/// Flattened length when the real and imaginary parts are interleaved.
pub const N_FLAT: usize = 2 * N_MOMENTS;

// Layout:
//   0..3    ⟨a_j⟩                      (means of α_j)
//   3..6    ⟨a_j†⟩                     (means of α_j⁺)
//   6..15   ⟨a_i† a_j⟩ row-major       (α_i⁺ α_j)
//   15..21  ⟨a_i a_j⟩ upper triangle   (α_i α_j)
//   21..27  ⟨a_i† a_j†⟩ upper triangle (α_i⁺ α_j⁺)
//   27..30  ⟨a_i† a_i a_j† a_j⟩ pairs (1,2),(1,3),(2,3)
//   30..33  ⟨a_j†² a_j²⟩

const SYM_IDX: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
const PAIR_IDX: [[usize; 3]; 3] = [[9, 0, 1], [0, 9, 2], [1, 2, 9]];

#[inline]
fn idx_a(j: usize) -> usize {
    j
}
#[inline]
fn idx_ap(j: usize) -> usize {
    3 + j
}
#[inline]
fn idx_ata(i: usize, j: usize) -> usize {
    6 + 3 * i + j
}
#[inline]
fn idx_aa(i: usize, j: usize) -> usize {
    15 + SYM_IDX[i][j]
}
#[inline]
fn idx_apap(i: usize, j: usize) -> usize {
    21 + SYM_IDX[i][j]
}
#[inline]
fn idx_nn(i: usize, j: usize) -> usize {
    debug_assert_ne!(i, j);
    27 + PAIR_IDX[i][j]
}
#[inline]
fn idx_n2(j: usize) -> usize {
    30 + j
}

/// The 33 complex moment values at one time point (means, or one
/// trajectory's products before averaging). Mode indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentVector(pub [Complex64; N_MOMENTS]);

impl MomentVector {
    pub fn zero() -> Self {
        MomentVector([Complex64::ZERO; N_MOMENTS])
    }

    /// Per-trajectory products of the doubled phase-space variables.
    pub fn from_state(alpha: &[Complex64; 3], alpha_plus: &[Complex64; 3]) -> Self {
        let mut v = [Complex64::ZERO; N_MOMENTS];
        let w = [
            alpha_plus[0] * alpha[0],
            alpha_plus[1] * alpha[1],
            alpha_plus[2] * alpha[2],
        ];
        for j in 0..3 {
            v[idx_a(j)] = alpha[j];
            v[idx_ap(j)] = alpha_plus[j];
            v[idx_n2(j)] = w[j] * w[j];
        }
        for i in 0..3 {
            for j in 0..3 {
                v[idx_ata(i, j)] = alpha_plus[i] * alpha[j];
            }
            for j in i..3 {
                v[idx_aa(i, j)] = alpha[i] * alpha[j];
                v[idx_apap(i, j)] = alpha_plus[i] * alpha_plus[j];
            }
        }
        v[idx_nn(0, 1)] = w[0] * w[1];
        v[idx_nn(0, 2)] = w[0] * w[2];
        v[idx_nn(1, 2)] = w[1] * w[2];
        MomentVector(v)
    }

    /// `⟨a_j⟩`
    pub fn a(&self, j: usize) -> Complex64 {
        self.0[idx_a(j)]
    }
    /// `⟨a_j†⟩`
    pub fn ap(&self, j: usize) -> Complex64 {
        self.0[idx_ap(j)]
    }
    /// `⟨a_i† a_j⟩`
    pub fn ata(&self, i: usize, j: usize) -> Complex64 {
        self.0[idx_ata(i, j)]
    }
    /// `⟨a_i a_j⟩`
    pub fn aa(&self, i: usize, j: usize) -> Complex64 {
        self.0[idx_aa(i, j)]
    }
    /// `⟨a_i† a_j†⟩`
    pub fn apap(&self, i: usize, j: usize) -> Complex64 {
        self.0[idx_apap(i, j)]
    }
    /// `⟨N̂_j⟩`
    pub fn n(&self, j: usize) -> Complex64 {
        self.0[idx_ata(j, j)]
    }
    /// `⟨a_i† a_i a_j† a_j⟩`, `i != j`
    pub fn nn(&self, i: usize, j: usize) -> Complex64 {
        self.0[idx_nn(i, j)]
    }
    /// `⟨a_j†² a_j²⟩`
    pub fn n2(&self, j: usize) -> Complex64 {
        self.0[idx_n2(j)]
    }

    /// Everything the two-mode witnesses need for the ordered pair `(i, j)`.
    pub fn pair(&self, i: usize, j: usize) -> PairMoments {
        PairMoments {
            n_i: self.n(i),
            n_j: self.n(j),
            ata_ij: self.ata(i, j),
            ata_ji: self.ata(j, i),
            a_i: self.a(i),
            a_j: self.a(j),
            ap_i: self.ap(i),
            ap_j: self.ap(j),
            aa_ii: self.aa(i, i),
            aa_jj: self.aa(j, j),
            aa_ij: self.aa(i, j),
            apap_ii: self.apap(i, i),
            apap_jj: self.apap(j, j),
            apap_ij: self.apap(i, j),
            nn_ij: self.nn(i, j),
            n2_i: self.n2(i),
            n2_j: self.n2(j),
        }
    }

    pub fn write_flat(&self, out: &mut [f64]) {
        assert_eq!(out.len(), N_FLAT);
        for (k, z) in self.0.iter().enumerate() {
            out[2 * k] = z.re;
            out[2 * k + 1] = z.im;
        }
    }

    pub fn from_flat(flat: &[f64]) -> Self {
        assert_eq!(flat.len(), N_FLAT);
        let mut v = [Complex64::ZERO; N_MOMENTS];
        for (k, z) in v.iter_mut().enumerate() {
            *z = Complex64::new(flat[2 * k], flat[2 * k + 1]);
        }
        MomentVector(v)
    }
}

/// Moments of one mode pair, the input to every bipartite witness. Used both
/// for well pairs of the three-well system and for the two beamsplitter
/// output ports.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairMoments {
    pub n_i: Complex64,
    pub n_j: Complex64,
    pub ata_ij: Complex64,
    pub ata_ji: Complex64,
    pub a_i: Complex64,
    pub a_j: Complex64,
    pub ap_i: Complex64,
    pub ap_j: Complex64,
    pub aa_ii: Complex64,
    pub aa_jj: Complex64,
    pub aa_ij: Complex64,
    pub apap_ii: Complex64,
    pub apap_jj: Complex64,
    pub apap_ij: Complex64,
    pub nn_ij: Complex64,
    pub n2_i: Complex64,
    pub n2_j: Complex64,
}

/// A complex mean with standard errors on both parts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CMeas {
    pub re: Meas,
    pub im: Meas,
}

impl CMeas {
    pub fn exact(z: Complex64) -> Self {
        CMeas {
            re: Meas::exact(z.re),
            im: Meas::exact(z.im),
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value, self.im.value)
    }
}

/// Ensemble-averaged moments at one time point, with per-moment standard
/// errors and the trajectory bookkeeping of the run that produced them.
/// Exact sources (the oracle) carry zero standard errors.
#[derive(Clone, Debug)]
pub struct MomentSet {
    pub t: f64,
    pub moments: [CMeas; N_MOMENTS],
    pub n_used: u64,
    pub n_diverged: u64,
}

impl MomentSet {
    pub fn exact(t: f64, values: &MomentVector) -> Self {
        let mut moments = [CMeas::default(); N_MOMENTS];
        for (m, z) in moments.iter_mut().zip(values.0.iter()) {
            *m = CMeas::exact(*z);
        }
        MomentSet {
            t,
            moments,
            n_used: 0,
            n_diverged: 0,
        }
    }

    /// The central values as a plain vector.
    pub fn values(&self) -> MomentVector {
        let mut v = [Complex64::ZERO; N_MOMENTS];
        for (z, m) in v.iter_mut().zip(self.moments.iter()) {
            *z = m.value();
        }
        MomentVector(v)
    }

    /// `⟨N̂_j⟩` with standard error.
    pub fn n(&self, j: usize) -> CMeas {
        self.moments[idx_ata(j, j)]
    }

    pub fn ata(&self, i: usize, j: usize) -> CMeas {
        self.moments[idx_ata(i, j)]
    }

    pub fn n2(&self, j: usize) -> CMeas {
        self.moments[idx_n2(j)]
    }
}
