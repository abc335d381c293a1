mod common;

use proptest::prelude::*;

use nerveseq::barcode::{Barcode, Interval};
use nerveseq::distance::{bottleneck, bottleneck_all, eps_trivial_bars, point_distance, HalfGrid, Pairing};

use common::{add, brute_bottleneck, sorted};

fn interval() -> impl Strategy<Value = Interval> {
    (-4i64..6, prop::option::of(1i64..6)).prop_map(|(b, len)| match len {
        Some(l) => Interval::finite(b, b + l),
        None => Interval::essential(b),
    })
}

fn bars(max: usize) -> impl Strategy<Value = Vec<Interval>> {
    prop::collection::vec(interval(), 0..=max)
}


proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn metric_axioms(a in bars(5), b in bars(5), c in bars(5)) {
        let ab = bottleneck(&a, &b).distance;
        prop_assert_eq!(bottleneck(&a, &a).distance, HalfGrid::ZERO);
        prop_assert_eq!(ab, bottleneck(&b, &a).distance);
        prop_assert!(bottleneck(&a, &c).distance <= add(ab, bottleneck(&b, &c).distance));
        prop_assert_eq!(ab == HalfGrid::ZERO, sorted(a) == sorted(b));
    }

    #[test]
    fn matches_exhaustive_search(a in bars(4), b in bars(4)) {
        prop_assert_eq!(bottleneck(&a, &b).distance, brute_bottleneck(&a, &b));
    }

    /// The reported matching uses every bar once and realizes the distance.
    #[test]
    fn matching_is_a_witness(a in bars(5), b in bars(5)) {
        let m = bottleneck(&a, &b);
        if m.distance.is_finite() {
            let worst = m.pairs.iter().map(Pairing::cost).max().unwrap_or(HalfGrid::ZERO);
            prop_assert_eq!(worst, m.distance);
            let mut left = Vec::new();
            let mut right = Vec::new();
            for p in &m.pairs {
                match *p {
                    Pairing::Both(x, y) => { left.push(x); right.push(y); }
                    Pairing::LeftDiagonal(x) => left.push(x),
                    Pairing::RightDiagonal(y) => right.push(y),
                }
            }
            prop_assert_eq!(sorted(left), sorted(a));
            prop_assert_eq!(sorted(right), sorted(b));
        } else {
            prop_assert!(m.pairs.is_empty());
        }
    }

    #[test]
    fn eps_trivial_is_distance_to_empty(a in bars(6)) {
        prop_assert_eq!(eps_trivial_bars(&a), bottleneck(&a, &[]).distance);
    }

    /// Distance to a point, against a scan over every candidate apex.
    #[test]
    fn point_distance_scans_apexes(h0 in bars(3), h1 in bars(3)) {
        let mut b = Barcode::new();
        b.extend(0, h0);
        b.extend(1, h1);
        let mut best = HalfGrid::Infinite;
        for apex in -10..=10 {
            let mut point = Barcode::new();
            point.push(0, Interval::essential(apex));
            best = best.min(bottleneck_all(&b, &point));
        }
        prop_assert_eq!(point_distance(&b).epsilon, best);
    }
}

#[test]
fn half_steps_appear() {
    let d = bottleneck(&[Interval::finite(0, 3)], &[]).distance;
    assert_eq!(d, HalfGrid::Doubled(3));
    assert_eq!(d.to_string(), "3/2");
    assert_eq!(bottleneck(&[Interval::essential(0)], &[]).distance, HalfGrid::Infinite);
}
