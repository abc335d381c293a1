use proptest::prelude::*;

use nerveseq::complex::Simplex;
use nerveseq::nerve::{nerve, NerveStrategy};
use nerveseq::random::{any_instance, seeded};

/// All nonempty subsets of `0..k` with at most `cap` elements.
fn index_sets(k: usize, cap: usize) -> Vec<Vec<usize>> {
    (1u32..1 << k)
        .map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| s.len() <= cap)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// A set of members spans a nerve simplex exactly when the members meet,
    /// and the simplex is born when the intersection first becomes nonempty.
    #[test]
    fn nerve_simplices_are_nonempty_intersections(seed in any::<u64>()) {
        let cover = any_instance(&mut seeded(seed)).cover;
        let k = cover.len();
        prop_assume!(k <= 10);
        let n = nerve(&cover, None, NerveStrategy::FirstNonempty);
        for set in index_sets(k, k) {
            let inter = cover.intersection(&set).unwrap();
            let simplex = Simplex::new(set.iter().map(|&i| i as u32).collect()).unwrap();
            prop_assert_eq!(n.complex().birth(&simplex), inter.min_birth());
        }
    }

    #[test]
    fn capping_gives_a_skeleton(seed in any::<u64>(), cap in 1usize..4) {
        let cover = any_instance(&mut seeded(seed)).cover;
        let full = nerve(&cover, None, NerveStrategy::FirstNonempty);
        let capped = nerve(&cover, Some(cap), NerveStrategy::FirstNonempty);
        let expected: Vec<_> = full.complex().iter().filter(|(s, _)| s.dim() < cap).collect();
        let got: Vec<_> = capped.complex().iter().collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn latest_birth_strategy_is_monotone_and_later(seed in any::<u64>()) {
        let cover = any_instance(&mut seeded(seed)).cover;
        let first = nerve(&cover, None, NerveStrategy::FirstNonempty);
        let latest = nerve(&cover, None, NerveStrategy::Max);
        prop_assert_eq!(first.complex().len(), latest.complex().len());
        for (s, b) in latest.complex().iter() {
            prop_assert!(b >= first.complex().birth(s).unwrap());
            for f in s.facets() {
                prop_assert!(latest.complex().birth(&f).unwrap() <= b);
            }
        }
    }
}
