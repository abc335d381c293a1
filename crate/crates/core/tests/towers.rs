mod common;

use proptest::prelude::*;

use nerveseq::distance::{bottleneck, eps_trivial, HalfGrid};
use nerveseq::field::Prime;
use nerveseq::morphism::{homology_at, induced_on_cokernels, induced_on_kernels, verify_short_exact, TowerMorphism};
use nerveseq::random::{random_morphism, random_tower, seeded};

use common::add;

fn field(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    /// Slice ranks of kernel, image and cokernel add up.
    #[test]
    fn rank_nullity(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3, 5])) {
        let mut rng = seeded(seed);
        let f = field(p);
        let a = random_tower(&mut rng, f, -2, 5, 4);
        let b = random_tower(&mut rng, f, -2, 5, 4);
        let g = random_morphism(&mut rng, &a, &b);
        for j in -2..=5 {
            prop_assert_eq!(g.kernel().dim_at(j) + g.image().dim_at(j), a.dim_at(j));
            prop_assert_eq!(g.cokernel().dim_at(j) + g.image().dim_at(j), b.dim_at(j));
        }
    }

    /// Taking the kernel or cokernel of a map out of or into a tower that
    /// is ε-trivial moves the barcode by at most 2ε.
    #[test]
    fn kernel_and_cokernel_stay_close(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let n = random_tower(&mut rng, Prime::TWO, -2, 6, 4);
        let p = random_tower(&mut rng, Prime::TWO, -2, 6, 4);
        let g = random_morphism(&mut rng, &n, &p);
        prop_assert!(bottleneck(&n.barcode(), &g.kernel().barcode()).distance <= eps_trivial(&p).times(2));
        prop_assert!(bottleneck(&p.barcode(), &g.cokernel().barcode()).distance <= eps_trivial(&n).times(2));
        prop_assert!(eps_trivial(&n) <= add(eps_trivial(&g.kernel()), eps_trivial(&g.image())));
    }

    #[test]
    fn subquotients_are_no_less_trivial(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let n = random_tower(&mut rng, Prime::TWO, -2, 6, 4);
        let p = random_tower(&mut rng, Prime::TWO, -2, 6, 4);
        let g = random_morphism(&mut rng, &n, &p);
        let extra = random_tower(&mut rng, Prime::TWO, -2, 6, 3);
        let into = random_morphism(&mut rng, &extra, &g.kernel()).then(&g.kernel_inclusion()).unwrap();
        let h = homology_at(&into, &g).unwrap();
        prop_assert!(eps_trivial(&h) <= eps_trivial(&n));
    }

    /// `0 -> coker f -> coker gf -> coker g -> 0` for injective `g`.
    #[test]
    fn cokernel_sequence_is_exact(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let big = random_tower(&mut rng, Prime::TWO, -1, 5, 4);
        let other = random_tower(&mut rng, Prime::TWO, -1, 5, 3);
        let g = random_morphism(&mut rng, &big, &other).kernel_inclusion();
        let m = random_tower(&mut rng, Prime::TWO, -1, 5, 3);
        let f = random_morphism(&mut rng, &m, g.source());
        let gf = f.then(&g).unwrap();
        let first = induced_on_cokernels(&f, &gf, &g).unwrap();
        let second = induced_on_cokernels(&gf, &g, &TowerMorphism::identity(g.target())).unwrap();
        prop_assert!(verify_short_exact(&first, &second).is_ok());
    }

    /// `0 -> ker f -> ker gf -> ker g -> 0` for surjective `f`.
    #[test]
    fn kernel_sequence_is_exact(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let big = random_tower(&mut rng, Prime::TWO, -1, 5, 4);
        let src = random_tower(&mut rng, Prime::TWO, -1, 5, 3);
        let f = random_morphism(&mut rng, &src, &big).cokernel_with_projection();
        let p = random_tower(&mut rng, Prime::TWO, -1, 5, 3);
        let g = random_morphism(&mut rng, f.target(), &p);
        let gf = f.then(&g).unwrap();
        let first = induced_on_kernels(&f, &gf, &TowerMorphism::identity(f.source())).unwrap();
        let second = induced_on_kernels(&gf, &g, &f).unwrap();
        prop_assert!(verify_short_exact(&first, &second).is_ok());
    }

    #[test]
    fn shifting_is_a_translation(seed in any::<u64>(), eps in 0i64..3) {
        let t = random_tower(&mut seeded(seed), Prime::TWO, -2, 5, 4);
        let mut moved: Vec<_> = t.barcode().into_iter().map(|b| b.shifted(-eps)).collect();
        moved.sort_unstable();
        let mut shifted = t.shift(eps).barcode();
        shifted.sort_unstable();
        prop_assert_eq!(shifted, moved);
        prop_assert_eq!(eps_trivial(&t) == HalfGrid::ZERO, t.barcode().is_empty());
    }
}
