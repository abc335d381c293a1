mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use nerveseq::barcode::Interval;
use nerveseq::complex::FilteredCover;
use nerveseq::examples::{bipyramid_example, sphere_example};
use nerveseq::field::Prime;
use nerveseq::persistence::barcode;
use nerveseq::random::{any_instance, seeded};
use nerveseq::spectral::{column_quotients, infinity_page, page, pages, DoubleComplex};

use common::{first_page_oracle, sorted};

type Cells = BTreeMap<(usize, usize), Vec<Interval>>;

fn cells(list: &[((usize, usize), Interval)]) -> Cells {
    let mut out = Cells::new();
    for &(k, i) in list {
        out.entry(k).or_default().push(i);
    }
    out
}

fn instance(seed: u64) -> FilteredCover {
    any_instance(&mut seeded(seed)).cover
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn first_page_is_intersection_homology(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3])) {
        let cover = instance(seed);
        let field = Prime::new(p).unwrap();
        let dc = DoubleComplex::build(&cover, field);
        prop_assert_eq!(page(&dc, 1).unwrap().barcodes(), first_page_oracle(&cover, field));
    }

    #[test]
    fn stable_page_is_graded_total_homology(seed in any::<u64>()) {
        let cover = instance(seed);
        let dc = DoubleComplex::build(&cover, Prime::TWO);
        let einf = infinity_page(&dc).unwrap();
        for n in 0..dc.degrees() {
            for (p, tower) in column_quotients(&dc, n).unwrap().iter().enumerate() {
                prop_assert_eq!(sorted(tower.barcode()), einf.barcode(p, n - p));
            }
        }
    }

    #[test]
    fn total_complex_computes_ambient_homology(seed in any::<u64>()) {
        let cover = instance(seed);
        let dc = DoubleComplex::build(&cover, Prime::TWO);
        dc.check_d_squared().unwrap();
        let top = dc.degrees();
        prop_assert_eq!(dc.total_barcode(top), barcode(cover.ambient(), top, Prime::TWO));
    }

    /// Pages settle by the advertised page, and every differential squares
    /// to zero along the way.
    #[test]
    fn pages_stabilize(seed in any::<u64>()) {
        let cover = instance(seed);
        let dc = DoubleComplex::build(&cover, Prime::TWO);
        let last = dc.infinity_page();
        let all = pages(&dc, last + 2).unwrap();
        for pg in &all {
            pg.check_d_squared().unwrap();
        }
        // all[r - 1] is E^r.
        let stable = all[last - 1].barcodes();
        prop_assert_eq!(&all[last].barcodes(), &stable);
        prop_assert_eq!(&all[last + 1].barcodes(), &stable);
        prop_assert_eq!(infinity_page(&dc).unwrap().barcodes(), stable);
    }
}

/// Bottom row at (0,0) and (D,0); a ladder `[2q+2, 2q+4)` at `(D-q-1, q)`
/// on the second page that is gone by the stable page.
#[test]
fn sphere_pages() {
    for d in 1..=3usize {
        let dc = DoubleComplex::build(&sphere_example(d).unwrap(), Prime::TWO);
        let di = d as i64;
        let mut e2 = vec![((0, 0), Interval::essential(0)), ((d, 0), Interval::essential(4))];
        for q in 1..d {
            e2.push(((d - q - 1, q), Interval::finite(2 * q as i64 + 2, 2 * q as i64 + 4)));
        }
        let einf = [((0, 0), Interval::essential(0)), ((d, 0), Interval::essential(2 * di + 2))];
        assert_eq!(page(&dc, 2).unwrap().barcodes(), cells(&e2), "D={d}");
        assert_eq!(infinity_page(&dc).unwrap().barcodes(), cells(&einf), "D={d}");
    }
}

/// The bipyramid sequence degenerates at the second page: bottom row
/// `[-2D, inf)` and `[-2D, 2)`, and `[2q, 2q+2)` at `(D-q, q)`.
#[test]
fn bipyramid_pages() {
    for d in 1..=3usize {
        let cover = bipyramid_example(d).unwrap();
        let dc = DoubleComplex::build(&cover, Prime::TWO);
        let di = d as i64;
        let mut want = vec![((0, 0), Interval::essential(-2 * di)), ((d, 0), Interval::finite(-2 * di, 2))];
        for q in 1..=d {
            want.push(((d - q, q), Interval::finite(2 * q as i64, 2 * q as i64 + 2)));
        }
        assert_eq!(page(&dc, 2).unwrap().barcodes(), cells(&want), "D={d}");
        assert_eq!(infinity_page(&dc).unwrap().barcodes(), cells(&want), "D={d}");
        let x = barcode(cover.ambient(), d, Prime::TWO);
        assert_eq!(x.degree(d), &[Interval::finite(-2 * di, 2 * di + 2)]);
    }
}
