//! Inseparability, entanglement, EPR-steering and Bell witnesses evaluated
//! from ensemble-averaged moments.
//!
//! Every function here consumes normally ordered moments (a [`MomentVector`]
//! or a [`PairMoments`] view), so the same code serves the stochastic
//! ensemble, the exact Fock-space oracle and the beamsplitter oracle.
//!
//! Witness sign conventions: positive `ξ_ij` signals entanglement between
//! modes `i` and `j`; positive `Σ_ij` signals that a measurement of mode `j`
//! steers mode `i`; positive `ζ_ij` signals Bell correlations; a Duan-Simon
//! sum below 4 signals inseparability; a Reid product `Γ` below 1
//! demonstrates the EPR paradox.

use crate::analytic::inferred_variance;
use crate::moments::{MomentVector, PairMoments};
use crate::ppsim::EnsembleSeries;
use crate::stats::{batch_se, Meas};
use crate::Result;

/// Column order shared by reports, tables and the CLI output.
pub const COLUMN_NAMES: [&str; 23] = [
    "N1", "N2", "N3", "VN1", "VN2", "VN3", "VN1m3", "xi13", "sigma13", "sigma31", "zeta13", "VX1",
    "VY1", "VX2", "VY2", "VX3", "VY3", "DSp13", "DSm13", "DSp12", "DSm12", "gamma13", "gamma12",
];

/// One row of witness values, in [`COLUMN_NAMES`] order via `as_array`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CriteriaValues {
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    pub vn1: f64,
    pub vn2: f64,
    pub vn3: f64,
    pub vn13: f64,
    pub xi13: f64,
    pub sigma13: f64,
    pub sigma31: f64,
    pub zeta13: f64,
    pub vx1: f64,
    pub vy1: f64,
    pub vx2: f64,
    pub vy2: f64,
    pub vx3: f64,
    pub vy3: f64,
    pub dsp13: f64,
    pub dsm13: f64,
    pub dsp12: f64,
    pub dsm12: f64,
    pub gamma13: f64,
    pub gamma12: f64,
}

impl CriteriaValues {
    pub fn as_array(&self) -> [f64; 23] {
        [
            self.n1,
            self.n2,
            self.n3,
            self.vn1,
            self.vn2,
            self.vn3,
            self.vn13,
            self.xi13,
            self.sigma13,
            self.sigma31,
            self.zeta13,
            self.vx1,
            self.vy1,
            self.vx2,
            self.vy2,
            self.vx3,
            self.vy3,
            self.dsp13,
            self.dsm13,
            self.dsp12,
            self.dsm12,
            self.gamma13,
            self.gamma12,
        ]
    }

    pub fn from_array(a: &[f64; 23]) -> Self {
        CriteriaValues {
            n1: a[0],
            n2: a[1],
            n3: a[2],
            vn1: a[3],
            vn2: a[4],
            vn3: a[5],
            vn13: a[6],
            xi13: a[7],
            sigma13: a[8],
            sigma31: a[9],
            zeta13: a[10],
            vx1: a[11],
            vy1: a[12],
            vx2: a[13],
            vy2: a[14],
            vx3: a[15],
            vy3: a[16],
            dsp13: a[17],
            dsm13: a[18],
            dsp12: a[19],
            dsm12: a[20],
            gamma13: a[21],
            gamma12: a[22],
        }
    }
}

// ---------------------------------------------------------------------------
// Pair kernels
// ---------------------------------------------------------------------------

/// `ξ_ij = ⟨a_i†a_j⟩⟨a_i a_j†⟩ − ⟨a_i†a_i a_j†a_j⟩` (Hillery-Zubairy form).
pub fn pair_xi(p: &PairMoments) -> f64 {
    (p.ata_ij * p.ata_ji).re - p.nn_ij.re
}

/// `Σ_ij = ⟨a_i a_j†⟩⟨a_i†a_j⟩ − ⟨a_i†a_i (a_j†a_j + ½)⟩ = ξ_ij − ½⟨N̂_i⟩`.
pub fn pair_sigma(p: &PairMoments) -> f64 {
    pair_xi(p) - 0.5 * p.n_i.re
}

/// `ζ_ij = ⟨a_i a_j†⟩⟨a_i†a_j⟩ − ⟨(a_i†a_i + ½)(a_j†a_j + ½)⟩
///       = Σ_ij − ½⟨N̂_j⟩ − ¼`.
pub fn pair_zeta(p: &PairMoments) -> f64 {
    (p.ata_ij * p.ata_ji).re - (p.nn_ij.re + 0.5 * p.n_i.re + 0.5 * p.n_j.re + 0.25)
}

/// `V(N̂) = ⟨a†²a²⟩ + ⟨a†a⟩ − ⟨a†a⟩²` from normally ordered moments.
fn mode_number_variance(n2: f64, n: f64) -> f64 {
    n2 + n - n * n
}

/// `V(N̂_i − N̂_j) = V(N̂_i) + V(N̂_j) − 2[⟨N̂_iN̂_j⟩ − ⟨N̂_i⟩⟨N̂_j⟩]`.
pub fn pair_number_diff_variance(p: &PairMoments) -> f64 {
    let vi = mode_number_variance(p.n2_i.re, p.n_i.re);
    let vj = mode_number_variance(p.n2_j.re, p.n_j.re);
    vi + vj - 2.0 * (p.nn_ij.re - p.n_i.re * p.n_j.re)
}

struct ModeQuad {
    vx: f64,
    vy: f64,
    x_mean: f64,
    y_mean: f64,
}

/// Single-mode quadrature means and variances from the definitions
/// `X = a + a†`, `Y = -i(a - a†)` and the normally ordered moments:
/// `V(X) = 1 + 2⟨a†a⟩ + ⟨a²⟩ + ⟨a†²⟩ − ⟨X⟩²` and the sign-flipped version
/// for `Y`.
fn mode_quad(n: f64, aa: f64, apap: f64, x_mean: f64, y_mean: f64) -> ModeQuad {
    ModeQuad {
        vx: 1.0 + 2.0 * n + aa + apap - x_mean * x_mean,
        vy: 1.0 + 2.0 * n - aa - apap - y_mean * y_mean,
        x_mean,
        y_mean,
    }
}

fn quad_i(p: &PairMoments) -> ModeQuad {
    mode_quad(
        p.n_i.re,
        p.aa_ii.re,
        p.apap_ii.re,
        p.a_i.re + p.ap_i.re,
        p.a_i.im - p.ap_i.im,
    )
}

fn quad_j(p: &PairMoments) -> ModeQuad {
    mode_quad(
        p.n_j.re,
        p.aa_jj.re,
        p.apap_jj.re,
        p.a_j.re + p.ap_j.re,
        p.a_j.im - p.ap_j.im,
    )
}

/// Quadrature covariances `(V(X̂_i,X̂_j), V(Ŷ_i,Ŷ_j))` of a mode pair.
pub fn pair_quad_covariances(p: &PairMoments) -> (f64, f64) {
    let qi = quad_i(p);
    let qj = quad_j(p);
    let cross = p.ata_ij.re + p.ata_ji.re;
    let cov_x = p.aa_ij.re + cross + p.apap_ij.re - qi.x_mean * qj.x_mean;
    let cov_y = -p.aa_ij.re + cross - p.apap_ij.re - qi.y_mean * qj.y_mean;
    (cov_x, cov_y)
}

/// Duan-Simon sums `(DS₊, DS₋)` with `DS± = V(X̂_i ± X̂_j) + V(Ŷ_i ∓ Ŷ_j)`.
pub fn pair_duan_simon(p: &PairMoments) -> (f64, f64) {
    let qi = quad_i(p);
    let qj = quad_j(p);
    let (cov_x, cov_y) = pair_quad_covariances(p);
    let base = qi.vx + qj.vx + qi.vy + qj.vy;
    (base + 2.0 * (cov_x - cov_y), base - 2.0 * (cov_x - cov_y))
}

/// Reid EPR product for mode `i` inferred from mode `j`.
pub fn pair_reid_gamma(p: &PairMoments) -> Result<f64> {
    let qi = quad_i(p);
    let qj = quad_j(p);
    let (cov_x, cov_y) = pair_quad_covariances(p);
    Ok(inferred_variance(qi.vx, cov_x, qj.vx)? * inferred_variance(qi.vy, cov_y, qj.vy)?)
}

/// Reid product that reports a degenerate conditioning variance as NaN
/// instead of an error; used on per-block means, where sampling noise can
/// make a conditioning variance estimate collapse without invalidating the
/// full-ensemble value.
fn pair_reid_gamma_or_nan(p: &PairMoments) -> f64 {
    pair_reid_gamma(p).unwrap_or(f64::NAN)
}

// ---------------------------------------------------------------------------
// Three-mode front end
// ---------------------------------------------------------------------------

/// Number variances `[V(N̂₁), V(N̂₂), V(N̂₃), V(N̂₁−N̂₃)]`.
pub fn number_variances(m: &MomentVector) -> [f64; 4] {
    let v = [0, 1, 2].map(|j| mode_number_variance(m.n2(j).re, m.n(j).re));
    [v[0], v[1], v[2], pair_number_diff_variance(&m.pair(0, 2))]
}

/// Hillery-Zubairy `ξ_ij` for wells `i, j` (1-based).
pub fn hz_xi(m: &MomentVector, i: usize, j: usize) -> f64 {
    pair_xi(&m.pair(i - 1, j - 1))
}

/// Steering witness `Σ_ij` for wells `i, j` (1-based); positive means well
/// `j`'s measurements steer well `i`.
pub fn steering_sigma(m: &MomentVector, i: usize, j: usize) -> f64 {
    pair_sigma(&m.pair(i - 1, j - 1))
}

/// Bell witness `ζ_ij` for wells `i, j` (1-based).
pub fn bell_zeta(m: &MomentVector, i: usize, j: usize) -> f64 {
    pair_zeta(&m.pair(i - 1, j - 1))
}

/// All quadrature-based quantities of the report.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureBlock {
    /// `[V(X₁), V(Y₁), V(X₂), V(Y₂), V(X₃), V(Y₃)]`
    pub variances: [f64; 6],
    pub cov_x13: f64,
    pub cov_y13: f64,
    pub ds13: (f64, f64),
    pub ds12: (f64, f64),
    pub gamma13: f64,
    pub gamma12: f64,
}

pub fn quadrature_block(m: &MomentVector) -> Result<QuadratureBlock> {
    let p13 = m.pair(0, 2);
    let p12 = m.pair(0, 1);
    let p23 = m.pair(1, 2);
    let q1 = quad_i(&p13);
    let q2 = quad_i(&p23);
    let q3 = quad_j(&p13);
    let (cov_x13, cov_y13) = pair_quad_covariances(&p13);
    Ok(QuadratureBlock {
        variances: [q1.vx, q1.vy, q2.vx, q2.vy, q3.vx, q3.vy],
        cov_x13,
        cov_y13,
        ds13: pair_duan_simon(&p13),
        ds12: pair_duan_simon(&p12),
        gamma13: pair_reid_gamma(&p13)?,
        gamma12: pair_reid_gamma(&p12)?,
    })
}

/// Every witness column from one moment vector; a degenerate Reid inference
/// is an error.
pub fn evaluate(m: &MomentVector) -> Result<CriteriaValues> {
    let q = quadrature_block(m)?;
    Ok(assemble(m, &q))
}

/// Like [`evaluate`], but a degenerate Reid inference yields NaN in the
/// gamma columns. Used for per-block witness values behind the batch-means
/// standard errors.
pub fn evaluate_lenient(m: &MomentVector) -> CriteriaValues {
    let p13 = m.pair(0, 2);
    let p12 = m.pair(0, 1);
    let p23 = m.pair(1, 2);
    let q1 = quad_i(&p13);
    let q2 = quad_i(&p23);
    let q3 = quad_j(&p13);
    let (cov_x13, cov_y13) = pair_quad_covariances(&p13);
    let q = QuadratureBlock {
        variances: [q1.vx, q1.vy, q2.vx, q2.vy, q3.vx, q3.vy],
        cov_x13,
        cov_y13,
        ds13: pair_duan_simon(&p13),
        ds12: pair_duan_simon(&p12),
        gamma13: pair_reid_gamma_or_nan(&p13),
        gamma12: pair_reid_gamma_or_nan(&p12),
    };
    assemble(m, &q)
}

fn assemble(m: &MomentVector, q: &QuadratureBlock) -> CriteriaValues {
    let [vn1, vn2, vn3, vn13] = number_variances(m);
    CriteriaValues {
        n1: m.n(0).re,
        n2: m.n(1).re,
        n3: m.n(2).re,
        vn1,
        vn2,
        vn3,
        vn13,
        xi13: hz_xi(m, 1, 3),
        sigma13: steering_sigma(m, 1, 3),
        sigma31: steering_sigma(m, 3, 1),
        zeta13: bell_zeta(m, 1, 3),
        vx1: q.variances[0],
        vy1: q.variances[1],
        vx2: q.variances[2],
        vy2: q.variances[3],
        vx3: q.variances[4],
        vy3: q.variances[5],
        dsp13: q.ds13.0,
        dsm13: q.ds13.1,
        dsp12: q.ds12.0,
        dsm12: q.ds12.1,
        gamma13: q.gamma13,
        gamma12: q.gamma12,
    }
}

/// A witness row with standard errors.
#[derive(Clone, Copy, Debug, Default)]
pub struct CriteriaPoint {
    pub value: CriteriaValues,
    pub se: CriteriaValues,
}

impl CriteriaPoint {
    /// `(value, se)` for one column index in [`COLUMN_NAMES`] order.
    pub fn column(&self, idx: usize) -> Meas {
        Meas {
            value: self.value.as_array()[idx],
            se: self.se.as_array()[idx],
        }
    }
}

/// Witness time series with standard errors.
#[derive(Clone, Debug, Default)]
pub struct CriteriaReport {
    pub times: Vec<f64>,
    pub points: Vec<CriteriaPoint>,
    pub n_used: u64,
    pub n_diverged: u64,
}

impl CriteriaReport {
    /// The `(value, se)` series of a named column.
    pub fn series(&self, name: &str) -> Option<Vec<Meas>> {
        let idx = COLUMN_NAMES.iter().position(|&c| c == name)?;
        Some(self.points.iter().map(|p| p.column(idx)).collect())
    }

    /// Sanity scan: variance-like columns may dip marginally below zero from
    /// sampling noise, but anything beyond `-3·SE` (or a Duan-Simon sum that
    /// far below zero) points at a corrupted run and is reported here.
    pub fn sanity_warnings(&self) -> Vec<String> {
        const VARIANCE_COLUMNS: [&str; 14] = [
            "VN1", "VN2", "VN3", "VN1m3", "VX1", "VY1", "VX2", "VY2", "VX3", "VY3", "DSp13",
            "DSm13", "DSp12", "DSm12",
        ];
        let mut warnings = Vec::new();
        for name in VARIANCE_COLUMNS {
            let idx = col_index(name).unwrap();
            for (k, point) in self.points.iter().enumerate() {
                let m = point.column(idx);
                if m.value < -3.0 * m.se {
                    warnings.push(format!(
                        "{name} = {} ± {} at t = {} is below -3·SE",
                        m.value, m.se, self.times[k]
                    ));
                }
            }
        }
        warnings
    }
}

/// Index of a named column in [`COLUMN_NAMES`].
pub fn col_index(name: &str) -> Option<usize> {
    COLUMN_NAMES.iter().position(|&c| c == name)
}

/// Witness report for a stochastic ensemble.
///
/// Central values come from the full-ensemble means; standard errors from the
/// between-block spread of the witnesses evaluated on each trajectory block
/// (batch means), which respects the correlations between the moment
/// estimators entering one witness.
///
/// The Reid gamma columns are NaN wherever the sampled conditioning variance
/// is degenerate (possible for strongly interacting, badly sampled regimes);
/// everything else stays usable.
pub fn report(series: &EnsembleSeries) -> Result<CriteriaReport> {
    let mut points = Vec::with_capacity(series.times.len());
    let mut block_rows: Vec<(u64, [f64; 23])> = Vec::with_capacity(series.blocks.len());
    for (g, ms) in series.moments.iter().enumerate() {
        let value = evaluate_lenient(&ms.values());
        block_rows.clear();
        for block in &series.blocks {
            block_rows.push((block.n_used, evaluate_lenient(&block.means[g]).as_array()));
        }
        let mut se = [0.0; 23];
        for (c, s) in se.iter_mut().enumerate() {
            let col: Vec<(u64, f64)> = block_rows.iter().map(|(n, row)| (*n, row[c])).collect();
            *s = batch_se(&col);
        }
        points.push(CriteriaPoint {
            value,
            se: CriteriaValues::from_array(&se),
        });
    }
    Ok(CriteriaReport {
        times: series.times.clone(),
        points,
        n_used: series.n_used,
        n_diverged: series.n_diverged,
    })
}

/// Witness report for an exact moment series (zero standard errors).
pub fn report_exact(times: &[f64], frames: &[MomentVector]) -> Result<CriteriaReport> {
    assert_eq!(times.len(), frames.len());
    let points = frames
        .iter()
        .map(|m| {
            Ok(CriteriaPoint {
                value: evaluate(m)?,
                se: CriteriaValues::default(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CriteriaReport {
        times: times.to_vec(),
        points,
        n_used: 0,
        n_diverged: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    /// Moments of a product of independent single-mode states, specified by
    /// `(⟨a⟩, ⟨a†a⟩, ⟨a²⟩, ⟨a†²a²⟩)` per mode.
    fn product_moments(modes: [(Complex64, f64, Complex64, f64); 3]) -> MomentVector {
        let mut m = MomentVector::zero();
        for (j, &(a, n, _aa, n2)) in modes.iter().enumerate() {
            m.0[j] = a;
            m.0[3 + j] = a.conj();
            m.0[6 + 3 * j + j] = Complex64::new(n, 0.0);
            m.0[30 + j] = Complex64::new(n2, 0.0);
        }
        // Cross moments factorize for product states.
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    m.0[6 + 3 * i + j] = modes[i].0.conj() * modes[j].0;
                }
            }
        }
        let sym = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
        for (k, &(i, j)) in sym.iter().enumerate() {
            let aa = if i == j {
                modes[i].2
            } else {
                modes[i].0 * modes[j].0
            };
            m.0[15 + k] = aa;
            m.0[21 + k] = aa.conj();
        }
        let pairs = [(0, 1), (0, 2), (1, 2)];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            m.0[27 + k] = Complex64::new(modes[i].1 * modes[j].1, 0.0);
        }
        m
    }

    fn fock_mode(n: f64) -> (Complex64, f64, Complex64, f64) {
        (Complex64::ZERO, n, Complex64::ZERO, n * (n - 1.0))
    }

    fn coherent_mode(beta: f64) -> (Complex64, f64, Complex64, f64) {
        let n = beta * beta;
        (Complex64::new(beta, 0.0), n, Complex64::new(n, 0.0), n * n)
    }

    const VACUUM: (Complex64, f64, Complex64, f64) = (Complex64::ZERO, 0.0, Complex64::ZERO, 0.0);

    #[test]
    fn fock_number_variances_vanish() {
        let m = product_moments([fock_mode(3.0), fock_mode(200.0), fock_mode(7.0)]);
        let v = number_variances(&m);
        assert!(v[0].abs() < 1e-12 && v[1].abs() < 1e-12 && v[2].abs() < 1e-12);
        // Independent wells: V(N1-N3) = V(N1) + V(N3) = 0.
        assert!(v[3].abs() < 1e-12);
    }

    #[test]
    fn coherent_number_variances_are_poissonian() {
        let m = product_moments([
            coherent_mode(2.0),
            coherent_mode(200.0f64.sqrt()),
            coherent_mode(3.0),
        ]);
        let v = number_variances(&m);
        assert!((v[0] - 4.0).abs() < 1e-12);
        assert!((v[1] - 200.0).abs() < 1e-9);
        assert!((v[2] - 9.0).abs() < 1e-12);
        assert!((v[3] - 13.0).abs() < 1e-12);
    }

    #[test]
    fn hz_xi_on_independent_states() {
        // Independent coherent states: exactly zero.
        let m = product_moments([coherent_mode(2.0), VACUUM, coherent_mode(3.0)]);
        assert!(hz_xi(&m, 1, 3).abs() < 1e-12);
        // Independent Fock states: -N1*N3.
        let m = product_moments([fock_mode(4.0), VACUUM, fock_mode(5.0)]);
        assert!((hz_xi(&m, 1, 3) + 20.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_and_zeta_on_simple_states() {
        let vac = product_moments([VACUUM, VACUUM, VACUUM]);
        assert_eq!(steering_sigma(&vac, 1, 3), 0.0);
        assert!((bell_zeta(&vac, 1, 3) + 0.25).abs() < 1e-15);

        // Independent coherent states, N each: zeta = N^2 - (N + 1/2)^2 < 0.
        let n = 9.0;
        let m = product_moments([coherent_mode(3.0), VACUUM, coherent_mode(3.0)]);
        let expect = n * n - (n + 0.5) * (n + 0.5);
        assert!((bell_zeta(&m, 1, 3) - expect).abs() < 1e-12);
    }

    #[test]
    fn zeta_sigma_identity() {
        let m = product_moments([fock_mode(4.0), coherent_mode(1.5), fock_mode(2.0)]);
        let zeta = bell_zeta(&m, 1, 3);
        let sigma = steering_sigma(&m, 1, 3);
        let n3 = m.n(2).re;
        assert!((zeta - (sigma - 0.5 * n3 - 0.25)).abs() < 1e-12);
    }

    #[test]
    fn vacuum_quadratures_are_unit() {
        let m = product_moments([VACUUM, VACUUM, VACUUM]);
        let q = quadrature_block(&m).unwrap();
        for v in q.variances {
            assert!((v - 1.0).abs() < 1e-15);
        }
        assert_eq!(q.ds13, (4.0, 4.0));
        assert!((q.gamma13 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coherent_quadratures_subtract_means() {
        // A displaced mode still has unit variances; the mean must cancel.
        let m = product_moments([coherent_mode(2.5), coherent_mode(1.0), VACUUM]);
        let q = quadrature_block(&m).unwrap();
        for v in q.variances {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert_eq!(q.ds13, (4.0, 4.0));
    }
}
