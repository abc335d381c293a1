use num_rational::Ratio;
use proptest::prelude::*;

use nerveseq::complex::{discretize, FilteredComplex, GridMap, Simplex};
use nerveseq::io::{parse_complex_str, parse_cover_str, serialize_complex, serialize_cover};
use nerveseq::random::{any_instance, flag_complex, seeded};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complex_round_trip(seed in any::<u64>()) {
        let c = flag_complex(&mut seeded(seed), 8, 0.5, 5);
        let again = parse_complex_str(&serialize_complex(&c), None).unwrap();
        prop_assert_eq!(again, c);
    }

    #[test]
    fn cover_round_trip(seed in any::<u64>()) {
        let cover = any_instance(&mut seeded(seed)).cover;
        let again = parse_cover_str(&serialize_cover(&cover), None).unwrap();
        prop_assert_eq!(again, cover);
    }

    #[test]
    fn births_are_monotone_on_faces(seed in any::<u64>()) {
        let c = flag_complex(&mut seeded(seed), 9, 0.5, 6);
        for (s, b) in c.iter() {
            for f in s.facets() {
                prop_assert!(c.birth(&f).unwrap() <= b);
            }
        }
    }

    /// Flooring onto the grid agrees with `floor((t - origin) / step)`
    /// computed in exact rationals.
    #[test]
    fn grid_index_is_floor(num in -400i64..400, den in 1i64..12, step_num in 1i64..7, step_den in 1i64..7) {
        let t = Ratio::new(num, den);
        let step = Ratio::new(step_num, step_den);
        let grid = GridMap::new(step).unwrap();
        let q = t / step;
        let mut expected = q.numer() / q.denom();
        if q.numer().rem_euclid(*q.denom()) != 0 && *q.numer() < 0 {
            expected -= 1;
        }
        prop_assert_eq!(grid.index(t), expected);
    }
}

#[test]
fn discretize_takes_the_minimum_over_cofaces() {
    let grid = GridMap::new(Ratio::new(1, 2)).unwrap();
    let records = vec![(vec![0, 1], Ratio::new(7, 4)), (vec![1, 2], Ratio::new(3, 4)), (vec![1], Ratio::new(1, 4))];
    let c = discretize(records.into_iter(), &grid).unwrap();
    let v = |s: Vec<u32>| Simplex::new(s).unwrap();
    assert_eq!(c.birth(&v(vec![0, 1])), Some(3));
    assert_eq!(c.birth(&v(vec![1])), Some(0));
    assert_eq!(c.birth(&v(vec![0])), Some(3));
    assert_eq!(c.birth(&v(vec![2])), Some(1));
    let late_face = vec![(vec![0, 1], Ratio::new(1, 1)), (vec![1], Ratio::new(5, 2))];
    assert!(discretize(late_face.into_iter(), &grid).is_err());
}

#[test]
fn build_closes_faces_and_rejects_conflicts() {
    let c = FilteredComplex::build(vec![(vec![0, 1, 2, 3], 4), (vec![0, 1], -1)]).unwrap();
    assert_eq!(c.len(), 15);
    assert_eq!(c.min_birth(), Some(-1));
    assert_eq!(c.max_birth(), Some(4));
    assert!(FilteredComplex::build(vec![(vec![0, 1], 1), (vec![1, 0], 2)]).is_err());
}
