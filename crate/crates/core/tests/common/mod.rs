//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nerveseq::barcode::{Death, Interval};
use nerveseq::complex::{FilteredCover, Simplex};
use nerveseq::distance::HalfGrid;
use nerveseq::field::Prime;
use nerveseq::nerve::{nerve, NerveStrategy};
use nerveseq::persistence::barcode;

/// Doubled cost of matching two bars, by brute force over the definition.
fn pair_cost(a: &Interval, b: &Interval) -> Option<u64> {
    match (a.death, b.death) {
        (Death::Finite(x), Death::Finite(y)) => {
            Some(2 * (a.birth - b.birth).unsigned_abs().max((x - y).unsigned_abs()))
        }
        (Death::Infinite, Death::Infinite) => Some(2 * (a.birth - b.birth).unsigned_abs()),
        _ => None,
    }
}

fn diagonal_cost(a: &Interval) -> Option<u64> {
    match a.death {
        Death::Finite(d) => Some((d - a.birth) as u64),
        Death::Infinite => None,
    }
}

/// Bottleneck distance by exhausting all partial matchings. Exponential;
/// only for a handful of bars.
pub fn brute_bottleneck(a: &[Interval], b: &[Interval]) -> HalfGrid {
    fn go(a: &[Interval], b: &[Interval], used: &mut Vec<bool>, i: usize) -> Option<u64> {
        if i == a.len() {
            let mut worst = 0;
            for (k, bar) in b.iter().enumerate() {
                if !used[k] {
                    worst = worst.max(diagonal_cost(bar)?);
                }
            }
            return Some(worst);
        }
        let mut best: Option<u64> = None;
        if let Some(c) = diagonal_cost(&a[i]) {
            if let Some(rest) = go(a, b, used, i + 1) {
                best = Some(c.max(rest));
            }
        }
        for k in 0..b.len() {
            if used[k] {
                continue;
            }
            if let Some(c) = pair_cost(&a[i], &b[k]) {
                used[k] = true;
                if let Some(rest) = go(a, b, used, i + 1) {
                    let v = c.max(rest);
                    best = Some(best.map_or(v, |x| x.min(v)));
                }
                used[k] = false;
            }
        }
        best
    }
    match go(a, b, &mut vec![false; b.len()], 0) {
        Some(d) => HalfGrid::Doubled(d),
        None => HalfGrid::Infinite,
    }
}

pub fn add(a: HalfGrid, b: HalfGrid) -> HalfGrid {
    match (a, b) {
        (HalfGrid::Doubled(x), HalfGrid::Doubled(y)) => HalfGrid::Doubled(x + y),
        _ => HalfGrid::Infinite,
    }
}

pub fn sorted(mut bars: Vec<Interval>) -> Vec<Interval> {
    bars.sort_unstable();
    bars
}

/// `E¹_{p,q} = ⊕_{|I| = p+1} H_q(U_I)`, from the barcodes of the
/// intersections themselves.
pub fn first_page_oracle(cover: &FilteredCover, field: Prime) -> BTreeMap<(usize, usize), Vec<Interval>> {
    let n = nerve(cover, None, NerveStrategy::FirstNonempty);
    let mut out: BTreeMap<(usize, usize), Vec<Interval>> = BTreeMap::new();
    for (set, inter) in n.provenance() {
        let p = set.dim();
        let bars = barcode(inter, inter.dim().unwrap_or(0), field);
        for (q, list) in bars.iter() {
            out.entry((p, q)).or_default().extend(list.iter().copied());
        }
    }
    out.into_iter().map(|(k, v)| (k, sorted(v))).filter(|(_, v)| !v.is_empty()).collect()
}

pub fn interval_set(set: &Simplex) -> Option<(u32, u32)> {
    let v = set.vertices();
    let (lo, hi) = (*v.first()?, *v.last()?);
    (hi - lo + 1 == v.len() as u32).then_some((lo, hi))
}
