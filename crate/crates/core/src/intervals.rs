//! Closed real intervals and probability intervals.
//!
//! Both types serialize as a two-element array `[lo, hi]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` of reals, `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidInterval { lo, hi, reason: "endpoint is NaN" });
        }
        if lo > hi {
            return Err(Error::InvalidInterval { lo, hi, reason: "lo > hi" });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        (self.lo + self.hi) / 2.0
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Affine image `{c*x + d : x in self}`.
    pub fn scale_add(&self, c: f64, d: f64) -> Interval {
        let a = c * self.lo + d;
        let b = c * self.hi + d;
        Interval { lo: a.min(b), hi: a.max(b) }
    }

    /// Strict interval dominance: every value of `self` exceeds every value
    /// of `other`. Touching intervals are incomparable.
    pub fn dominates(&self, other: &Interval) -> bool {
        self.lo > other.hi
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(4);
        write!(f, "[{:.*}, {:.*}]", p, self.lo, p, self.hi)
    }
}

/// A probability interval: `0 <= lo <= hi <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct ProbInterval {
    lo: f64,
    hi: f64,
}

impl ProbInterval {
    /// `[0, 1]`: no commitment at all.
    pub const VACUOUS: ProbInterval = ProbInterval { lo: 0.0, hi: 1.0 };
    pub const CERTAIN: ProbInterval = ProbInterval { lo: 1.0, hi: 1.0 };
    pub const IMPOSSIBLE: ProbInterval = ProbInterval { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidInterval { lo, hi, reason: "endpoint is NaN" });
        }
        if lo > hi {
            return Err(Error::InvalidInterval { lo, hi, reason: "lo > hi" });
        }
        if lo < 0.0 || hi > 1.0 {
            return Err(Error::InvalidInterval { lo, hi, reason: "probability outside [0, 1]" });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(p: f64) -> Result<Self> {
        Self::new(p, p)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }

    pub fn contains_interval(&self, other: &ProbInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Bounds on the probability of the complementary event.
    pub fn complement(&self) -> ProbInterval {
        ProbInterval { lo: 1.0 - self.hi, hi: 1.0 - self.lo }
    }

    /// Intersection, or `None` when the intervals are disjoint.
    pub fn intersect(&self, other: &ProbInterval) -> Option<ProbInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(ProbInterval { lo, hi })
    }

    pub fn as_interval(&self) -> Interval {
        Interval { lo: self.lo, hi: self.hi }
    }
}

impl Default for ProbInterval {
    fn default() -> Self {
        ProbInterval::VACUOUS
    }
}

impl TryFrom<[f64; 2]> for ProbInterval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        ProbInterval::new(v[0], v[1])
    }
}

impl From<ProbInterval> for [f64; 2] {
    fn from(p: ProbInterval) -> Self {
        [p.lo, p.hi]
    }
}

impl From<ProbInterval> for Interval {
    fn from(p: ProbInterval) -> Self {
        p.as_interval()
    }
}

impl fmt::Display for ProbInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.as_interval(), f)
    }
}

/// Tightest bounds on `P(A and B)` given only the marginal intervals for
/// `A` and `B` (the Fréchet bounds).
pub fn frechet_and(p: ProbInterval, q: ProbInterval) -> ProbInterval {
    // 1 - x is exact for x >= 1/2, so complement the larger lower bound
    let (small, large) = if p.lo <= q.lo { (p.lo, q.lo) } else { (q.lo, p.lo) };
    let lo = (small - (1.0 - large)).max(0.0);
    let hi = p.hi.min(q.hi);
    ProbInterval { lo: lo.min(hi), hi }
}
