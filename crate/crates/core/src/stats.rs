//! Streaming moment accumulation and standard-error estimation.
//!
//! Ensemble averages use Welford's algorithm per scalar, merged across
//! trajectory blocks in a fixed order so results are bit-identical for any
//! thread count. Standard errors of nonlinear witness functions come from the
//! between-block spread (batch means), which accounts for correlations
//! between the moment estimators entering one witness.

/// A value with its standard error.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Meas {
    pub value: f64,
    pub se: f64,
}

impl Meas {
    pub const fn exact(value: f64) -> Self {
        Meas { value, se: 0.0 }
    }
}

/// Streaming mean/variance accumulator over vectors of fixed length.
///
/// `push` consumes one sample vector; `merge` combines two accumulators with
/// the usual pooled mean/M2 update, which is deterministic for a fixed merge
/// order.
#[derive(Clone, Debug)]
pub struct Accumulator {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Accumulator {
    pub fn new(len: usize) -> Self {
        Accumulator {
            count: 0,
            mean: vec![0.0; len],
            m2: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn push(&mut self, sample: &[f64]) {
        assert_eq!(sample.len(), self.mean.len());
        self.count += 1;
        let inv_n = 1.0 / self.count as f64;
        for (i, &x) in sample.iter().enumerate() {
            let delta = x - self.mean[i];
            self.mean[i] += delta * inv_n;
            self.m2[i] += delta * (x - self.mean[i]);
        }
    }

    pub fn merge(&mut self, other: &Accumulator) {
        assert_eq!(self.mean.len(), other.mean.len());
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            self.count = other.count;
            self.mean.copy_from_slice(&other.mean);
            self.m2.copy_from_slice(&other.m2);
            return;
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        for i in 0..self.mean.len() {
            let delta = other.mean[i] - self.mean[i];
            self.mean[i] += delta * (nb / n);
            self.m2[i] += other.m2[i] + delta * delta * (na * nb / n);
        }
        self.count += other.count;
    }

    pub fn mean(&self, i: usize) -> f64 {
        self.mean[i]
    }

    /// Mean with its standard error `sqrt(var / n)`.
    pub fn meas(&self, i: usize) -> Meas {
        let n = self.count;
        if n < 2 {
            return Meas::exact(self.mean[i]);
        }
        let var = (self.m2[i] / (n as f64 - 1.0)).max(0.0);
        Meas {
            value: self.mean[i],
            se: (var / n as f64).sqrt(),
        }
    }
}

/// Standard error of a pooled estimate from per-block values `(n_b, y_b)`.
///
/// Each block value is an estimate over `n_b` samples; the per-sample
/// variance is estimated as `Σ n_b (y_b - ŷ)² / (B - 1)` with `ŷ` the
/// weighted block mean, giving `se = σ̂ / sqrt(Σ n_b)`. Non-finite block
/// values (a degenerate nonlinear witness on one block) are skipped; with
/// fewer than two usable blocks the error is unknown and reported as NaN.
pub fn batch_se(blocks: &[(u64, f64)]) -> f64 {
    let valid: Vec<(u64, f64)> = blocks
        .iter()
        .copied()
        .filter(|&(_, y)| y.is_finite())
        .collect();
    let b = valid.len();
    let n: u64 = valid.iter().map(|&(nb, _)| nb).sum();
    if b < 2 || n < 2 {
        return f64::NAN;
    }
    let n = n as f64;
    let y_bar: f64 = valid.iter().map(|&(nb, y)| nb as f64 * y).sum::<f64>() / n;
    let ss: f64 = valid
        .iter()
        .map(|&(nb, y)| nb as f64 * (y - y_bar) * (y - y_bar))
        .sum();
    (ss / (b as f64 - 1.0) / n).max(0.0).sqrt()
}
