//! Dempster-Shafer mass functions on small frames.
//!
//! Subsets of the frame are bitmasks over the atom list; masses are stored
//! densely, one slot per subset, so frames are capped at [`MAX_FRAME`] atoms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::ProbInterval;

pub const MAX_FRAME: usize = 8;
pub const MASS_TOL: f64 = 1e-9;

/// A subset of the frame as a bitmask over atom positions.
pub type Subset = u32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MassSpec", into = "MassSpec")]
pub struct MassFunction {
    frame: Vec<String>,
    masses: Vec<f64>,
}

/// Serialized form: the frame plus a list of focal sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassSpec {
    pub frame: Vec<String>,
    pub focal: Vec<FocalMass>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FocalMass {
    pub set: Vec<String>,
    pub mass: f64,
}

impl TryFrom<MassSpec> for MassFunction {
    type Error = Error;

    fn try_from(spec: MassSpec) -> Result<Self> {
        let frame = spec.frame;
        let masks = spec
            .focal
            .iter()
            .map(|f| Ok((subset_of(&frame, &f.set)?, f.mass)))
            .collect::<Result<Vec<_>>>()?;
        MassFunction::from_masks(frame, &masks)
    }
}

impl From<MassFunction> for MassSpec {
    fn from(m: MassFunction) -> Self {
        let focal = m
            .focal_sets()
            .map(|(s, mass)| FocalMass { set: m.labels(s), mass })
            .collect();
        MassSpec { frame: m.frame, focal }
    }
}

fn subset_of(frame: &[String], labels: &[impl AsRef<str>]) -> Result<Subset> {
    labels.iter().try_fold(0, |acc, l| {
        let l = l.as_ref();
        frame
            .iter()
            .position(|a| a == l)
            .map(|i| acc | (1 << i))
            .ok_or_else(|| Error::InvalidMass(format!("`{l}` is not in the frame")))
    })
}

impl MassFunction {
    /// Builds a mass function from `(focal set, mass)` pairs. Repeated focal
    /// sets accumulate.
    pub fn new<S: AsRef<str>>(frame: Vec<String>, focal: &[(&[S], f64)]) -> Result<Self> {
        let masks = focal
            .iter()
            .map(|(set, m)| Ok((subset_of(&frame, set)?, *m)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_masks(frame, &masks)
    }

    pub fn from_masks(frame: Vec<String>, focal: &[(Subset, f64)]) -> Result<Self> {
        check_frame(&frame)?;
        let full = (1u32 << frame.len()) - 1;
        let mut masses = vec![0.0; full as usize + 1];
        for &(s, m) in focal {
            if s == 0 || s > full {
                return Err(Error::InvalidMass(format!("focal set {s:#b} is empty or outside the frame")));
            }
            if m.is_nan() || m < 0.0 {
                return Err(Error::InvalidMass(format!("negative mass {m}")));
            }
            masses[s as usize] += m;
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMass(format!("masses sum to {total}")));
        }
        Ok(Self { frame, masses })
    }

    /// All mass on the whole frame.
    pub fn vacuous(frame: Vec<String>) -> Result<Self> {
        check_frame(&frame)?;
        let full = (1u32 << frame.len()) - 1;
        Self::from_masks(frame, &[(full, 1.0)])
    }

    pub fn frame(&self) -> &[String] {
        &self.frame
    }

    pub fn full(&self) -> Subset {
        (1 << self.frame.len()) - 1
    }

    pub fn subset(&self, labels: &[impl AsRef<str>]) -> Result<Subset> {
        subset_of(&self.frame, labels)
    }

    pub fn labels(&self, s: Subset) -> Vec<String> {
        self.frame
            .iter()
            .enumerate()
            .filter(|(i, _)| s & (1 << i) != 0)
            .map(|(_, l)| l.clone())
            .collect()
    }

    pub fn mass(&self, s: Subset) -> f64 {
        self.masses.get(s as usize).copied().unwrap_or(0.0)
    }

    /// Focal sets (positive mass) with their masses, in mask order.
    pub fn focal_sets(&self) -> impl Iterator<Item = (Subset, f64)> + '_ {
        self.masses
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0.0)
            .map(|(s, &m)| (s as Subset, m))
    }

    /// Every focal set is a single atom.
    pub fn is_bayesian(&self) -> bool {
        self.focal_sets().all(|(s, _)| s.count_ones() == 1)
    }

    pub fn belief(&self, event: Subset) -> f64 {
        self.focal_sets().filter(|(s, _)| s & !event == 0).map(|(_, m)| m).sum()
    }

    pub fn plausibility(&self, event: Subset) -> f64 {
        self.focal_sets().filter(|(s, _)| s & event != 0).map(|(_, m)| m).sum()
    }
}

fn check_frame(frame: &[String]) -> Result<()> {
    if !(2..=MAX_FRAME).contains(&frame.len()) {
        return Err(Error::InvalidMass(format!("frame must have 2..={MAX_FRAME} atoms, got {}", frame.len())));
    }
    for (i, a) in frame.iter().enumerate() {
        if frame[..i].contains(a) {
            return Err(Error::Duplicate(a.clone()));
        }
    }
    Ok(())
}

/// Shafer discounting with reliability loss `r`: a fraction `r` of every
/// focal mass moves to the whole frame.
pub fn discount(m: &MassFunction, r: f64) -> Result<MassFunction> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::OutOfRange { name: "r", value: r, range: "[0, 1]" });
    }
    let full = m.full() as usize;
    let mut masses: Vec<f64> = m.masses.iter().map(|x| (1.0 - r) * x).collect();
    masses[full] = r + (1.0 - r) * m.masses[full];
    Ok(MassFunction { frame: m.frame.clone(), masses })
}

/// Dempster's rule of combination.
pub fn dempster_combine(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    if m1.frame != m2.frame {
        return Err(Error::InvalidMass("mass functions are over different frames".into()));
    }
    let mut out = vec![0.0; m1.masses.len()];
    let mut conflict = 0.0;
    for (a, x) in m1.focal_sets() {
        for (b, y) in m2.focal_sets() {
            let c = a & b;
            if c == 0 {
                conflict += x * y;
            } else {
                out[c as usize] += x * y;
            }
        }
    }
    let norm = 1.0 - conflict;
    if norm <= 0.0 || out.iter().all(|&m| m == 0.0) {
        return Err(Error::TotalConflict);
    }
    out.iter_mut().for_each(|m| *m /= norm);
    Ok(MassFunction { frame: m1.frame.clone(), masses: out })
}

/// `[belief, plausibility]` of `event`.
pub fn bel_pl_interval(m: &MassFunction, event: Subset) -> Result<ProbInterval> {
    if event == 0 || event > m.full() {
        return Err(Error::InvalidMass(format!("event {event:#b} is empty or outside the frame")));
    }
    let bel = m.belief(event).clamp(0.0, 1.0);
    let pl = m.plausibility(event).clamp(bel, 1.0);
    ProbInterval::new(bel, pl)
}

/// Belief in `event` after combining `m1` with `m2` discounted by `r`.
pub fn discounted_belief(m1: &MassFunction, m2: &MassFunction, event: Subset, r: f64) -> Result<f64> {
    let combined = dempster_combine(m1, &discount(m2, r)?)?;
    Ok(bel_pl_interval(&combined, event)?.lo())
}

/// The discount `r*` at which the combined belief in `event` equals `target`.
///
/// Requires a binary frame, a Bayesian `m1`, and a combined belief that is
/// monotone in `r` (checked on a grid).
pub fn discount_threshold(m1: &MassFunction, m2: &MassFunction, event: Subset, target: f64) -> Result<f64> {
    if m1.frame().len() != 2 {
        return Err(Error::InvalidMass("discount threshold needs a binary frame".into()));
    }
    if !m1.is_bayesian() {
        return Err(Error::InvalidMass("first mass function must be Bayesian".into()));
    }
    let f = |r: f64| discounted_belief(m1, m2, event, r);
    let grid = (0..=100).map(|k| f(k as f64 / 100.0)).collect::<Result<Vec<_>>>()?;
    let increasing = grid.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    let decreasing = grid.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    if !increasing && !decreasing {
        return Err(Error::InvalidMass("combined belief is not monotone in r".into()));
    }
    let (at_zero, at_one) = (grid[0], grid[100]);
    if target == at_zero {
        return Ok(0.0);
    }
    if target == at_one {
        return Ok(1.0);
    }
    if target < at_zero.min(at_one) || target > at_zero.max(at_one) {
        return Err(Error::NotBracketed { target, at_zero, at_one });
    }
    // orient so that g increases in r
    let sign = if increasing && !decreasing { 1.0 } else { -1.0 };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if sign * (f(mid)? - target) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
