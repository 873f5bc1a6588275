//! Exact binomial confidence intervals by inverting the binomial tails.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::ProbInterval;

/// Absolute tolerance on `p` at which bisection stops.
pub const BISECTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleCount {
    successes: u64,
    trials: u64,
}

impl SampleCount {
    pub fn new(successes: u64, trials: u64) -> Result<Self> {
        if trials == 0 || successes > trials {
            return Err(Error::InvalidSample { successes, trials });
        }
        Ok(Self { successes, trials })
    }

    pub fn successes(&self) -> u64 {
        self.successes
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    /// The count of failures, i.e. successes of the complementary event.
    pub fn reflected(&self) -> Self {
        Self { successes: self.trials - self.successes, trials: self.trials }
    }
}

/// Which one-sided bound to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Lower,
    Upper,
}

/// Two-sided, equal-tailed Clopper-Pearson interval: each tail carries
/// `(1 - confidence) / 2`.
pub fn clopper_pearson(c: SampleCount, confidence: f64) -> Result<ProbInterval> {
    check_confidence(confidence)?;
    let half = (1.0 - confidence) / 2.0;
    let tails = Tails::new(c.trials);
    let lo = lower_bound(&tails, c, half);
    let hi = upper_bound(&tails, c, half);
    ProbInterval::new(lo, hi.max(lo))
}

/// One-sided Clopper-Pearson bound at `confidence`; the whole error mass
/// `1 - confidence` sits in one tail.
pub fn clopper_pearson_bound(c: SampleCount, confidence: f64, bound: Bound) -> Result<f64> {
    check_confidence(confidence)?;
    let alpha = 1.0 - confidence;
    let tails = Tails::new(c.trials);
    Ok(match bound {
        Bound::Lower => lower_bound(&tails, c, alpha),
        Bound::Upper => upper_bound(&tails, c, alpha),
    })
}

fn check_confidence(confidence: f64) -> Result<()> {
    if confidence > 0.0 && confidence < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange { name: "confidence", value: confidence, range: "(0, 1)" })
    }
}

/// `p` with `P[X >= successes] = alpha`; 0 when there are no successes.
fn lower_bound(tails: &Tails, c: SampleCount, alpha: f64) -> f64 {
    if c.successes == 0 {
        return 0.0;
    }
    // P[X >= x] increases with p
    bisect(|p| tails.upper_tail(c.successes, p) - alpha)
}

/// `p` with `P[X <= successes] = alpha`; 1 when every trial succeeded.
fn upper_bound(tails: &Tails, c: SampleCount, alpha: f64) -> f64 {
    if c.successes == c.trials {
        return 1.0;
    }
    // P[X <= x] decreases with p
    bisect(|p| alpha - tails.lower_tail(c.successes, p))
}

/// Root of an increasing function on [0, 1].
fn bisect(f: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Binomial tail sums for a fixed number of trials.
pub struct Tails {
    n: u64,
    ln_fact: Vec<f64>,
}

impl Tails {
    pub fn new(n: u64) -> Self {
        let mut ln_fact = Vec::with_capacity(n as usize + 1);
        let mut acc = 0.0;
        ln_fact.push(0.0);
        for i in 1..=n {
            acc += (i as f64).ln();
            ln_fact.push(acc);
        }
        Self { n, ln_fact }
    }

    pub fn pmf(&self, k: u64, p: f64) -> f64 {
        if p <= 0.0 {
            return if k == 0 { 1.0 } else { 0.0 };
        }
        if p >= 1.0 {
            return if k == self.n { 1.0 } else { 0.0 };
        }
        let n = self.n as usize;
        let k_ = k as usize;
        let ln_choose = self.ln_fact[n] - self.ln_fact[k_] - self.ln_fact[n - k_];
        (ln_choose + k as f64 * p.ln() + (self.n - k) as f64 * (-p).ln_1p()).exp()
    }

    /// `P[X <= k]`.
    pub fn lower_tail(&self, k: u64, p: f64) -> f64 {
        (0..=k.min(self.n)).map(|i| self.pmf(i, p)).sum::<f64>().min(1.0)
    }

    /// `P[X >= k]`.
    pub fn upper_tail(&self, k: u64, p: f64) -> f64 {
        (k..=self.n).map(|i| self.pmf(i, p)).sum::<f64>().min(1.0)
    }
}
