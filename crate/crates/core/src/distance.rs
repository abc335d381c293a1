//! Bottleneck distance between barcodes, ε-triviality, and distance to the
//! homology of a point.
//!
//! Distances can be half-integers (a bar of length 3 sits 3/2 away from the
//! diagonal), so every value is stored doubled in a [`HalfGrid`].

use std::fmt;

use serde_json::{json, Value};

use crate::barcode::{Barcode, Interval};
use crate::tower::PersistenceTower;

/// Non-negative half-integer or infinity, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HalfGrid {
    Doubled(u64),
    Infinite,
}

impl HalfGrid {
    pub const ZERO: HalfGrid = HalfGrid::Doubled(0);

    /// The integer `k` grid steps.
    pub fn steps(k: u64) -> Self {
        HalfGrid::Doubled(2 * k)
    }

    pub fn doubled(self) -> Option<u64> {
        match self {
            HalfGrid::Doubled(d) => Some(d),
            HalfGrid::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        self != HalfGrid::Infinite
    }

    /// `k * self`, with `0 * inf = 0`.
    pub fn times(self, k: u64) -> HalfGrid {
        match self {
            HalfGrid::Doubled(d) => HalfGrid::Doubled(d * k),
            HalfGrid::Infinite if k == 0 => HalfGrid::ZERO,
            HalfGrid::Infinite => HalfGrid::Infinite,
        }
    }

    /// Doubled integer, or `"inf"`.
    pub fn to_json(self) -> Value {
        match self {
            HalfGrid::Doubled(d) => json!(d),
            HalfGrid::Infinite => json!("inf"),
        }
    }
}

impl fmt::Display for HalfGrid {
    /// Value in grid steps: `2`, `3/2`, or `inf`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HalfGrid::Doubled(d) if d % 2 == 0 => write!(f, "{}", d / 2),
            HalfGrid::Doubled(d) => write!(f, "{d}/2"),
            HalfGrid::Infinite => write!(f, "inf"),
        }
    }
}

/// One matched pair in a bottleneck matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pairing {
    Both(Interval, Interval),
    /// Interval of the first barcode sent to the diagonal.
    LeftDiagonal(Interval),
    /// Interval of the second barcode sent to the diagonal.
    RightDiagonal(Interval),
}

impl Pairing {
    pub fn cost(&self) -> HalfGrid {
        match self {
            Pairing::Both(a, b) => pair_cost(a, b),
            Pairing::LeftDiagonal(a) | Pairing::RightDiagonal(a) => diagonal_cost(a),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Pairing::Both(a, b) => json!([a.to_json(), b.to_json()]),
            Pairing::LeftDiagonal(a) => json!([a.to_json(), "diagonal"]),
            Pairing::RightDiagonal(b) => json!(["diagonal", b.to_json()]),
        }
    }
}

/// Optimal matching with its cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub distance: HalfGrid,
    /// Empty when the distance is infinite.
    pub pairs: Vec<Pairing>,
}

impl Matching {
    pub fn to_json(&self) -> Value {
        json!({
            "distance": self.distance.to_json(),
            "units": "doubled-grid-steps",
            "witness_matching": self.pairs.iter().map(Pairing::to_json).collect::<Vec<_>>(),
        })
    }
}

/// `max(|Δbirth|, |Δdeath|)`, doubled. Essential intervals only pair with
/// essential intervals.
fn pair_cost(a: &Interval, b: &Interval) -> HalfGrid {
    match (a.length(), b.length()) {
        (Some(_), Some(_)) | (None, None) => {
            let db = a.birth.abs_diff(b.birth);
            let dd = match (a.death, b.death) {
                (crate::barcode::Death::Finite(x), crate::barcode::Death::Finite(y)) => x.abs_diff(y),
                _ => 0,
            };
            HalfGrid::Doubled(2 * db.max(dd))
        }
        _ => HalfGrid::Infinite,
    }
}

/// Half the length, doubled: just the length.
fn diagonal_cost(a: &Interval) -> HalfGrid {
    match a.length() {
        Some(l) => HalfGrid::Doubled(l as u64),
        None => HalfGrid::Infinite,
    }
}

/// Bottleneck distance between two single-degree barcodes, with a witness.
pub fn bottleneck(a: &[Interval], b: &[Interval]) -> Matching {
    let (mut ess_a, fin_a): (Vec<Interval>, Vec<Interval>) = a.iter().partition(|i| i.is_essential());
    let (mut ess_b, fin_b): (Vec<Interval>, Vec<Interval>) = b.iter().partition(|i| i.is_essential());
    if ess_a.len() != ess_b.len() {
        return Matching { distance: HalfGrid::Infinite, pairs: Vec::new() };
    }
    // On the line, sorted order minimizes the largest displacement.
    ess_a.sort();
    ess_b.sort();
    let mut pairs: Vec<Pairing> =
        ess_a.iter().zip(&ess_b).map(|(x, y)| Pairing::Both(*x, *y)).collect();
    let ess_cost = pairs.iter().map(Pairing::cost).max().unwrap_or(HalfGrid::ZERO);

    let mut candidates: Vec<u64> = vec![0];
    for x in &fin_a {
        candidates.push(diagonal_cost(x).doubled().unwrap());
        for y in &fin_b {
            candidates.push(pair_cost(x, y).doubled().unwrap());
        }
    }
    for y in &fin_b {
        candidates.push(diagonal_cost(y).doubled().unwrap());
    }
    candidates.sort_unstable();
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    // The largest candidate is always feasible: send everything to the diagonal.
    while lo < hi {
        let mid = (lo + hi) / 2;
        if finite_matching(&fin_a, &fin_b, candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let fin_pairs = finite_matching(&fin_a, &fin_b, candidates[lo]).expect("threshold is feasible");
    let fin_cost = HalfGrid::Doubled(candidates[lo]);
    pairs.extend(fin_pairs);
    Matching { distance: ess_cost.max(fin_cost), pairs }
}

/// Perfect matching of the augmented bipartite graph where each side also
/// has diagonal copies of the other side, using only edges of cost at most
/// `threshold` (doubled).
fn finite_matching(a: &[Interval], b: &[Interval], threshold: u64) -> Option<Vec<Pairing>> {
    let (n, m) = (a.len(), b.len());
    // Left vertices: a[0..n], then diagonal copies of b. Right vertices:
    // b[0..m], then diagonal copies of a.
    let size = n + m;
    let ok = |c: HalfGrid| c.doubled().is_some_and(|d| d <= threshold);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size];
    for i in 0..n {
        for j in 0..m {
            if ok(pair_cost(&a[i], &b[j])) {
                adj[i].push(j);
            }
        }
        if ok(diagonal_cost(&a[i])) {
            adj[i].push(m + i);
        }
    }
    for j in 0..m {
        let left = n + j;
        if ok(diagonal_cost(&b[j])) {
            adj[left].push(j);
        }
        // Diagonal to diagonal is free.
        adj[left].extend((0..n).map(|i| m + i));
    }
    let mut match_right: Vec<Option<usize>> = vec![None; size];
    for u in 0..size {
        let mut seen = vec![false; size];
        if !augment(u, &adj, &mut match_right, &mut seen) {
            return None;
        }
    }
    let mut pairs = Vec::new();
    for (r, l) in match_right.iter().enumerate() {
        let l = l.expect("perfect matching");
        match (l < n, r < m) {
            (true, true) => pairs.push(Pairing::Both(a[l], b[r])),
            (true, false) => pairs.push(Pairing::LeftDiagonal(a[l])),
            (false, true) => pairs.push(Pairing::RightDiagonal(b[r])),
            (false, false) => {}
        }
    }
    Some(pairs)
}

fn augment(u: usize, adj: &[Vec<usize>], match_right: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if match_right[v].is_none() || augment(match_right[v].unwrap(), adj, match_right, seen) {
            match_right[v] = Some(u);
            return true;
        }
    }
    false
}

/// Largest bottleneck distance over all degrees.
pub fn bottleneck_all(a: &Barcode, b: &Barcode) -> HalfGrid {
    let top = a.max_degree().max(b.max_degree());
    match top {
        None => HalfGrid::ZERO,
        Some(top) => (0..=top)
            .map(|q| bottleneck(a.degree(q), b.degree(q)).distance)
            .max()
            .unwrap_or(HalfGrid::ZERO),
    }
}

/// Smallest `ε` with `t^{2ε} M = 0`, doubled: the longest bar length, or
/// infinity if some bar is essential.
pub fn eps_trivial_bars(bars: &[Interval]) -> HalfGrid {
    bars.iter().map(diagonal_cost).max().unwrap_or(HalfGrid::ZERO)
}

pub fn eps_trivial(tower: &PersistenceTower) -> HalfGrid {
    eps_trivial_bars(&tower.barcode())
}

/// Same as [`eps_trivial_bars`] over every degree.
pub fn eps_trivial_barcode(barcode: &Barcode) -> HalfGrid {
    barcode.iter().map(|(_, bars)| eps_trivial_bars(bars)).max().unwrap_or(HalfGrid::ZERO)
}

/// Interleaving distance between a barcode and the homology of a point
/// born at `apex`, minimized over `apex`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointDistance {
    pub epsilon: HalfGrid,
    /// Optimal birth of the point; `None` when the distance is infinite.
    pub apex: Option<i64>,
    /// Why the distance is infinite, if it is.
    pub reason: Option<&'static str>,
}

/// Distance from `barcode` to `H_*(pt_a)`, minimized over integer `a`.
///
/// Against `{[a, inf)}` in degree 0 and nothing above, the only term that
/// depends on `a` is the displacement of the single essential class of
/// degree 0, so `a` equal to its birth is optimal.
pub fn point_distance(barcode: &Barcode) -> PointDistance {
    let infinite = |reason| PointDistance { epsilon: HalfGrid::Infinite, apex: None, reason: Some(reason) };
    if barcode.is_empty() {
        return infinite("empty");
    }
    let essentials: Vec<&Interval> = barcode.degree(0).iter().filter(|i| i.is_essential()).collect();
    match essentials.len() {
        0 => return infinite("no essential class in degree 0"),
        1 => {}
        _ => return infinite("several essential classes in degree 0"),
    }
    if barcode.iter().any(|(q, bars)| q > 0 && bars.iter().any(Interval::is_essential)) {
        return infinite("essential class in positive degree");
    }
    let apex = essentials[0].birth;
    let point = [Interval::essential(apex)];
    let mut eps = bottleneck(barcode.degree(0), &point).distance;
    for (q, bars) in barcode.iter() {
        if q > 0 {
            eps = eps.max(bottleneck(bars, &[]).distance);
        }
    }
    PointDistance { epsilon: eps, apex: Some(apex), reason: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(b: i64, d: i64) -> Interval {
        Interval::finite(b, d)
    }

    #[test]
    fn basic_distances() {
        let a = [fin(0, 4), Interval::essential(1)];
        assert_eq!(bottleneck(&a, &a).distance, HalfGrid::ZERO);
        let d = bottleneck(&[Interval::essential(0)], &[Interval::essential(2)]);
        assert_eq!(d.distance, HalfGrid::steps(2));
        assert_eq!(
            bottleneck(&[Interval::essential(0)], &[]).distance,
            HalfGrid::Infinite
        );
        // A length-6 bar against a length-4 bar with the same birth.
        assert_eq!(bottleneck(&[fin(-2, 4)], &[fin(-2, 2)]).distance, HalfGrid::steps(2));
        // Odd-length bar against nothing.
        assert_eq!(bottleneck(&[fin(0, 3)], &[]).distance, HalfGrid::Doubled(3));
    }

    #[test]
    fn diagonal_beats_bad_pairing() {
        // Pairing costs 10; both to the diagonal costs 1/2.
        let d = bottleneck(&[fin(0, 1)], &[fin(10, 11)]);
        assert_eq!(d.distance, HalfGrid::Doubled(1));
        assert_eq!(d.pairs.len(), 2);
    }

    #[test]
    fn trivial_eps() {
        assert_eq!(eps_trivial_bars(&[]), HalfGrid::ZERO);
        assert_eq!(eps_trivial_bars(&[fin(3, 5)]), HalfGrid::steps(1));
        let e = eps_trivial_bars(&[fin(0, 3), fin(2, 4)]);
        assert_eq!(e, HalfGrid::Doubled(3));
        assert_eq!(e.to_string(), "3/2");
        assert_eq!(eps_trivial_bars(&[Interval::essential(0)]), HalfGrid::Infinite);
    }

    #[test]
    fn point() {
        let b = Barcode::from_degrees([(0, vec![Interval::essential(3)])]);
        assert_eq!(
            point_distance(&b),
            PointDistance { epsilon: HalfGrid::ZERO, apex: Some(3), reason: None }
        );
        let two = Barcode::from_degrees([(0, vec![Interval::essential(0), Interval::essential(0)])]);
        assert_eq!(point_distance(&two).epsilon, HalfGrid::Infinite);
        assert_eq!(point_distance(&Barcode::new()).reason, Some("empty"));
        let b = Barcode::from_degrees([
            (0, vec![Interval::essential(0), fin(1, 2)]),
            (1, vec![fin(2, 4)]),
        ]);
        assert_eq!(point_distance(&b).epsilon, HalfGrid::steps(1));
    }
}
