use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{RemezError, Result};

/// Gaps at or below this width are closed when canonicalising.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// A finite union of arcs of `K = ℝ mod 2π`.
///
/// Canonical form: arcs lie in `[0, 2π]`, are sorted by start, pairwise
/// disjoint and separated by gaps wider than [`MERGE_TOLERANCE`]. An arc that
/// wraps through `0` is stored as two pieces `[lo, 2π]` and `[0, hi]`; the
/// full circle is the single arc `[0, 2π]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleIntervalSet {
    arcs: Vec<(f64, f64)>,
}

impl CircleIntervalSet {
    pub fn empty() -> Self {
        CircleIntervalSet { arcs: Vec::new() }
    }

    pub fn full() -> Self {
        CircleIntervalSet { arcs: vec![(0.0, TAU)] }
    }

    /// Canonicalises arbitrary arcs. A pair with `lo > hi` (after reduction
    /// mod 2π) wraps through zero; an arc of length `≥ 2π` covers everything.
    pub fn from_arcs(raw: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut pieces = Vec::new();
        for (lo, hi) in raw {
            if hi - lo >= TAU {
                return CircleIntervalSet::full();
            }
            let len = if hi >= lo { hi - lo } else { (hi - lo).rem_euclid(TAU) };
            if len <= 0.0 {
                continue;
            }
            let a = lo.rem_euclid(TAU);
            if a + len <= TAU {
                pieces.push((a, a + len));
            } else {
                pieces.push((a, TAU));
                pieces.push((0.0, a + len - TAU));
            }
        }
        CircleIntervalSet {
            arcs: merge_sorted(pieces),
        }
    }

    /// Arcs in canonical order.
    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].0 <= 0.0 && self.arcs[0].1 >= TAU
    }

    /// Lebesgue measure `m`.
    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|(lo, hi)| hi - lo).sum::<f64>().min(TAU)
    }

    pub fn contains(&self, t: f64) -> bool {
        let t = t.rem_euclid(TAU);
        self.arcs.iter().any(|&(lo, hi)| lo <= t && t <= hi)
    }

    /// Arcs as they sit on the circle: the two halves of a wrapping arc are
    /// joined into one `(lo, hi)` with `lo > hi`.
    pub fn cyclic_arcs(&self) -> Vec<(f64, f64)> {
        let mut arcs = self.arcs.clone();
        if arcs.len() >= 2 {
            let first = arcs[0];
            let last = arcs[arcs.len() - 1];
            if first.0 <= 0.0 && last.1 >= TAU {
                arcs.remove(0);
                let end = arcs.len() - 1;
                arcs[end] = (last.0, first.1);
            }
        }
        arcs
    }

    /// Midpoints of the complementary gaps, wrapping included.
    pub fn gap_midpoints(&self) -> Vec<f64> {
        let arcs = self.cyclic_arcs();
        if arcs.is_empty() {
            return vec![0.0];
        }
        let mut out = Vec::new();
        for i in 0..arcs.len() {
            let end = arcs[i].1;
            let next = arcs[(i + 1) % arcs.len()].0;
            let gap = (next - end).rem_euclid(TAU);
            if gap > 0.0 {
                out.push((end + gap / 2.0).rem_euclid(TAU));
            }
        }
        out
    }

    pub fn complement(&self) -> CircleIntervalSet {
        if self.is_empty() {
            return CircleIntervalSet::full();
        }
        if self.is_full() {
            return CircleIntervalSet::empty();
        }
        let arcs = self.cyclic_arcs();
        let gaps = (0..arcs.len()).map(|i| {
            let end = arcs[i].1;
            let next = arcs[(i + 1) % arcs.len()].0;
            let next = if next <= end { next + TAU } else { next };
            (end, next)
        });
        CircleIntervalSet::from_arcs(gaps.collect::<Vec<_>>())
    }
}

/// Lebesgue measure of a circle set.
pub fn lebesgue(set: &CircleIntervalSet) -> f64 {
    set.measure()
}

/// A finite union of closed subintervals of a host interval `[a, b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineIntervalSet {
    host: (f64, f64),
    arcs: Vec<(f64, f64)>,
}

impl LineIntervalSet {
    /// Sorts and merges the given intervals; fails if any leaves `[a, b]`.
    pub fn new(a: f64, b: f64, arcs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        if !(a < b) {
            return Err(RemezError::domain(format!("host interval needs a < b, got [{a}, {b}]")));
        }
        let mut pieces = Vec::new();
        for (lo, hi) in arcs {
            if !(lo <= hi) {
                return Err(RemezError::domain(format!("interval [{lo}, {hi}] is reversed")));
            }
            if lo < a || hi > b {
                return Err(RemezError::domain(format!(
                    "interval [{lo}, {hi}] leaves the host [{a}, {b}]"
                )));
            }
            if hi > lo {
                pieces.push((lo, hi));
            }
        }
        Ok(LineIntervalSet {
            host: (a, b),
            arcs: merge_sorted(pieces),
        })
    }

    pub fn full(a: f64, b: f64) -> Result<Self> {
        LineIntervalSet::new(a, b, [(a, b)])
    }

    pub fn empty(a: f64, b: f64) -> Result<Self> {
        LineIntervalSet::new(a, b, [])
    }

    pub fn host(&self) -> (f64, f64) {
        self.host
    }

    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Lebesgue measure `m`.
    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|(lo, hi)| hi - lo).sum()
    }

    /// Pieces left and right of `cut`, with hosts `[a, cut]` and `[cut, b]`.
    pub fn split_at(&self, cut: f64) -> Result<(LineIntervalSet, LineIntervalSet)> {
        let (a, b) = self.host;
        if !(cut > a && cut < b) {
            return Err(RemezError::domain(format!("cut {cut} outside ({a}, {b})")));
        }
        let left = self
            .arcs
            .iter()
            .filter(|&&(lo, _)| lo < cut)
            .map(|&(lo, hi)| (lo, hi.min(cut)));
        let right = self
            .arcs
            .iter()
            .filter(|&&(_, hi)| hi > cut)
            .map(|&(lo, hi)| (lo.max(cut), hi));
        Ok((
            LineIntervalSet::new(a, cut, left.collect::<Vec<_>>())?,
            LineIntervalSet::new(cut, b, right.collect::<Vec<_>>())?,
        ))
    }

    /// A union of up to five random intervals in `[a, b]` with endpoints drawn
    /// uniformly; draws of measure below `1e-6·(b − a)` are rejected.
    pub fn random(rng: &mut impl Rng, a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return Err(RemezError::domain(format!("host interval needs a < b, got [{a}, {b}]")));
        }
        loop {
            let count = rng.random_range(1..=5);
            let arcs: Vec<(f64, f64)> = (0..count)
                .map(|_| {
                    let u = a + (b - a) * rng.random::<f64>();
                    let v = a + (b - a) * rng.random::<f64>();
                    (u.min(v), u.max(v))
                })
                .collect();
            let set = LineIntervalSet::new(a, b, arcs)?;
            if set.measure() >= 1e-6 * (b - a) {
                return Ok(set);
            }
        }
    }

    /// `{-x : x ∈ A}` with host `[-b, -a]`.
    pub fn reflect(&self) -> LineIntervalSet {
        let (a, b) = self.host;
        LineIntervalSet {
            host: (-b, -a),
            arcs: self.arcs.iter().rev().map(|&(lo, hi)| (-hi, -lo)).collect(),
        }
    }
}

fn merge_sorted(mut pieces: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
    for (lo, hi) in pieces {
        if hi <= lo {
            continue;
        }
        match out.last_mut() {
            Some(last) if lo <= last.1 + MERGE_TOLERANCE => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn lebesgue_examples() {
        assert_eq!(lebesgue(&CircleIntervalSet::full()), TAU);
        assert_eq!(lebesgue(&CircleIntervalSet::empty()), 0.0);
        let set = CircleIntervalSet::from_arcs([(PI / 3.0, 2.0 * PI / 3.0), (4.0 * PI / 3.0, 5.0 * PI / 3.0)]);
        assert!((lebesgue(&set) - 2.0 * PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn wrapping_arc_is_split() {
        let set = CircleIntervalSet::from_arcs([(-0.5, 0.5)]);
        assert_eq!(set.arcs().len(), 2);
        assert!((set.arcs()[0].0).abs() < 1e-15);
        assert!((set.arcs()[1].1 - TAU).abs() < 1e-15);
        assert!((set.measure() - 1.0).abs() < 1e-14);
        assert_eq!(set.cyclic_arcs().len(), 1);
        assert!(set.contains(0.0) && set.contains(-0.25) && !set.contains(1.0));
    }

    #[test]
    fn near_adjacent_arcs_merge() {
        let set = CircleIntervalSet::from_arcs([(1.0, 2.0), (2.0 + 1e-13, 3.0), (4.0, 5.0)]);
        assert_eq!(set.arcs(), &[(1.0, 3.0), (4.0, 5.0)]);
    }

    #[test]
    fn complement_and_gaps() {
        let set = CircleIntervalSet::from_arcs([(1.0, 2.0)]);
        let comp = set.complement();
        assert!((comp.measure() - (TAU - 1.0)).abs() < 1e-14);
        assert_eq!(set.gap_midpoints().len(), 1);
        assert!(CircleIntervalSet::full().complement().is_empty());
    }

    #[test]
    fn split_examples() {
        let s = LineIntervalSet::full(-1.0, 1.0).unwrap();
        let (l, r) = s.split_at(0.0).unwrap();
        assert_eq!(l.arcs(), &[(-1.0, 0.0)]);
        assert_eq!(r.arcs(), &[(0.0, 1.0)]);

        let s = LineIntervalSet::new(-1.0, 1.0, [(0.5, 0.9)]).unwrap();
        let (l, r) = s.split_at(0.0).unwrap();
        assert!(l.is_empty());
        assert_eq!(r.arcs(), &[(0.5, 0.9)]);

        let cut = 1.0 - 2.0 * 0.4;
        let s = LineIntervalSet::new(-1.0, 1.0, [(-0.5, 0.5)]).unwrap();
        let (l, r) = s.split_at(cut).unwrap();
        assert_eq!(l.arcs(), &[(-0.5, cut)]);
        assert_eq!(r.arcs(), &[(cut, 0.5)]);
        assert!((l.measure() + r.measure() - s.measure()).abs() < 1e-15);
    }

    #[test]
    fn line_set_rejects_escaping_intervals() {
        assert!(LineIntervalSet::new(0.0, 1.0, [(0.5, 1.5)]).is_err());
        assert!(LineIntervalSet::new(1.0, 0.0, []).is_err());
        assert!(LineIntervalSet::full(-1.0, 1.0).unwrap().split_at(1.0).is_err());
    }

    #[test]
    fn json_shape() {
        let set = CircleIntervalSet::from_arcs([(1.0, 2.0)]);
        assert_eq!(serde_json::to_string(&set).unwrap(), r#"{"arcs":[[1.0,2.0]]}"#);
    }
}
