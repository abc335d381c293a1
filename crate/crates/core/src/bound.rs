//! Certification of the approximate nerve bounds on a concrete cover, and the
//! sharpness checks on the sphere and bipyramid families.
//!
//! Every quantity is a [`HalfGrid`] (doubled grid steps). The acyclicity
//! parameter measured by bottleneck distance can be a half-integer, while an
//! interleaving of ℤ-graded modules shifts by whole steps; the bounds are
//! evaluated with the integer parameter `ceil(ε)`.

use serde_json::{json, Value};

use crate::barcode::Barcode;
use crate::complex::FilteredCover;
use crate::distance::{bottleneck, bottleneck_all, eps_trivial, HalfGrid};
use crate::error::Result;
use crate::examples::{bipyramid_example, sphere_example};
use crate::field::Prime;
use crate::nerve::{acyclicity, nerve, NerveStrategy};
use crate::persistence::barcode;
use crate::spectral::{DoubleComplex, SpectralPage, SpectralSequence};

pub const REPORT_SCHEMA: &str = "nerveseq.bound-report/1";
pub const SHARPNESS_SCHEMA: &str = "nerveseq.sharpness-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Some intersection is not close to a point; every bound is infinite.
    Vacuous,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Vacuous => "vacuous",
        }
    }
}

/// A measured distance and the bound it must respect.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Check {
    pub distance: HalfGrid,
    pub bound: HalfGrid,
}

impl Check {
    pub fn holds(&self) -> bool {
        self.distance <= self.bound
    }

    fn to_json(self) -> Value {
        json!({ "distance": self.distance.to_json(), "bound": self.bound.to_json(), "holds": self.holds() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: usize,
    /// `d(H_d X, H_d N)` against `2(Q+1)ε`.
    pub main: Check,
    /// Same distance against `2(d+1)ε`.
    pub degreewise: Check,
    /// Same distance against `(4D+2)ε`.
    pub easy: Check,
    /// `H_d N` against `E²_{d,0}`.
    pub nerve_to_e2: Check,
    /// `E²_{d,0}` against `E^∞_{d,0}`.
    pub e2_to_infinity: Check,
    /// `E^∞_{d,0}` against `H_d X`.
    pub infinity_to_ambient: Check,
}

impl DegreeReport {
    pub fn checks(&self) -> [Check; 6] {
        [self.main, self.degreewise, self.easy, self.nerve_to_e2, self.e2_to_infinity, self.infinity_to_ambient]
    }

    fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "distance": self.main.distance.to_json(),
            "main_bound": self.main.bound.to_json(),
            "degreewise_bound": self.degreewise.bound.to_json(),
            "easy_bound": self.easy.bound.to_json(),
            "stepwise": {
                "nerve_to_e2": self.nerve_to_e2.to_json(),
                "e2_to_infinity": self.e2_to_infinity.to_json(),
                "infinity_to_ambient": self.infinity_to_ambient.to_json(),
            },
        })
    }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    /// Largest distance of an intersection to a point.
    pub epsilon: HalfGrid,
    /// `ceil(ε)`, the parameter the bounds are evaluated with.
    pub epsilon_steps: HalfGrid,
    pub nerve_dim: usize,
    pub ambient_dim: usize,
    pub ambient: Barcode,
    pub nerve: Barcode,
    pub e2_bottom: Barcode,
    pub infinity_bottom: Barcode,
    pub degrees: Vec<DegreeReport>,
    /// Largest `eps_trivial` over the cells off the bottom row of `E²` and
    /// `E^∞`, checked against `ε`.
    pub above_row: Check,
    pub verdict: Verdict,
}

impl BoundReport {
    pub fn q(&self) -> usize {
        self.nerve_dim.min(self.ambient_dim)
    }

    /// Largest distance between ambient and nerve over all degrees.
    pub fn max_distance(&self) -> HalfGrid {
        self.degrees.iter().map(|d| d.main.distance).max().unwrap_or(HalfGrid::ZERO)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": REPORT_SCHEMA,
            "units": "doubled-grid-steps",
            "epsilon": self.epsilon.to_json(),
            "epsilon_steps": self.epsilon_steps.to_json(),
            "nerve_dim": self.nerve_dim,
            "ambient_dim": self.ambient_dim,
            "q": self.q(),
            "max_distance": self.max_distance().to_json(),
            "verdict": self.verdict.as_str(),
            "ambient_barcode": self.ambient.to_json(),
            "nerve_barcode": self.nerve.to_json(),
            "e2_bottom_row": self.e2_bottom.to_json(),
            "infinity_bottom_row": self.infinity_bottom.to_json(),
            "above_row": self.above_row.to_json(),
            "degrees": self.degrees.iter().map(DegreeReport::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "epsilon {}  D {}  Delta {}  Q {}\nX: {}\nN: {}\n",
            self.epsilon,
            self.nerve_dim,
            self.ambient_dim,
            self.q(),
            self.ambient,
            self.nerve
        );
        for d in &self.degrees {
            out.push_str(&format!(
                "degree {}: distance {}  main {}  degreewise {}  easy {}  nerve-E2 {} <= {}  E2-Einf {} <= {}  Einf-X {} <= {}\n",
                d.degree,
                d.main.distance,
                d.main.bound,
                d.degreewise.bound,
                d.easy.bound,
                d.nerve_to_e2.distance,
                d.nerve_to_e2.bound,
                d.e2_to_infinity.distance,
                d.e2_to_infinity.bound,
                d.infinity_to_ambient.distance,
                d.infinity_to_ambient.bound,
            ));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict.as_str()));
        out
    }
}

/// Rounds a doubled value up to a whole number of grid steps.
fn ceil_steps(eps: HalfGrid) -> HalfGrid {
    match eps {
        HalfGrid::Doubled(d) => HalfGrid::Doubled(d + d % 2),
        HalfGrid::Infinite => HalfGrid::Infinite,
    }
}

fn above_row_eps(page: &SpectralPage) -> HalfGrid {
    page.cells
        .iter()
        .filter(|((_, q), _)| *q > 0)
        .map(|(_, t)| eps_trivial(t))
        .max()
        .unwrap_or(HalfGrid::ZERO)
}

/// Runs the whole pipeline on `cover`: ambient and nerve barcodes, the
/// acyclicity parameter, the pages `E²` and `E^∞`, and every bound.
pub fn certify(cover: &FilteredCover, field: Prime) -> Result<BoundReport> {
    let n = nerve(cover, None, NerveStrategy::FirstNonempty);
    let acyc = acyclicity(cover, &n, field);
    let (big_d, delta) = (acyc.nerve_dim, acyc.ambient_dim);
    let top = big_d.max(delta);
    let ambient = barcode(cover.ambient(), top, field);
    let nerve_bars = barcode(n.complex(), top, field);

    let dc = DoubleComplex::build(cover, field);
    let mut seq = SpectralSequence::new(&dc);
    seq.advance()?;
    let e2 = seq.advance()?;
    let mut einf = e2.clone();
    while seq.r() <= dc.infinity_page() {
        einf = seq.advance()?;
    }
    let e2_bottom = e2.row(0);
    let infinity_bottom = einf.row(0);

    let eps = ceil_steps(acyc.epsilon);
    let k = |m: usize| eps.times(m as u64);
    let q = big_d.min(delta);
    let degrees = (0..=top)
        .map(|d| {
            let distance = bottleneck(ambient.degree(d), nerve_bars.degree(d)).distance;
            let e2_to_infinity_factor = 2 * big_d.min(d).saturating_sub(1);
            let ambient_factor = if d <= big_d { 2 * d } else { 2 * (big_d + 1) };
            DegreeReport {
                degree: d,
                main: Check { distance, bound: k(2 * (q + 1)) },
                degreewise: Check { distance, bound: k(2 * (d + 1)) },
                easy: Check { distance, bound: k(4 * big_d + 2) },
                nerve_to_e2: Check {
                    distance: bottleneck(nerve_bars.degree(d), e2_bottom.degree(d)).distance,
                    bound: k(2),
                },
                e2_to_infinity: Check {
                    distance: bottleneck(e2_bottom.degree(d), infinity_bottom.degree(d)).distance,
                    bound: k(e2_to_infinity_factor),
                },
                infinity_to_ambient: Check {
                    distance: bottleneck(infinity_bottom.degree(d), ambient.degree(d)).distance,
                    bound: k(ambient_factor.min(2 * delta)),
                },
            }
        })
        .collect::<Vec<_>>();
    let above_row = Check { distance: above_row_eps(&e2).max(above_row_eps(&einf)), bound: eps };
    let verdict = if !eps.is_finite() {
        Verdict::Vacuous
    } else if above_row.holds() && degrees.iter().all(|d| d.checks().iter().all(Check::holds)) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(BoundReport {
        epsilon: acyc.epsilon,
        epsilon_steps: eps,
        nerve_dim: big_d,
        ambient_dim: delta,
        ambient,
        nerve: nerve_bars,
        e2_bottom,
        infinity_bottom,
        degrees,
        above_row,
        verdict,
    })
}

/// A measured distance next to the value it should equal exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Equality {
    pub name: &'static str,
    pub measured: HalfGrid,
    pub expected: HalfGrid,
}

impl Equality {
    pub fn holds(&self) -> bool {
        self.measured == self.expected
    }
}

#[derive(Clone, Debug)]
pub struct SharpnessReport {
    pub dim: usize,
    pub sphere: BoundReport,
    pub bipyramid: BoundReport,
    pub equalities: Vec<Equality>,
}

impl SharpnessReport {
    pub fn holds(&self) -> bool {
        self.equalities.iter().all(Equality::holds)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SHARPNESS_SCHEMA,
            "units": "doubled-grid-steps",
            "dim": self.dim,
            "holds": self.holds(),
            "equalities": self.equalities.iter().map(|e| json!({
                "name": e.name,
                "measured": e.measured.to_json(),
                "expected": e.expected.to_json(),
                "holds": e.holds(),
            })).collect::<Vec<_>>(),
            "sphere": self.sphere.to_json(),
            "bipyramid": self.bipyramid.to_json(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("dimension {}\n", self.dim);
        for e in &self.equalities {
            out.push_str(&format!(
                "{}: measured {} expected {} {}\n",
                e.name,
                e.measured,
                e.expected,
                if e.holds() { "ok" } else { "MISMATCH" }
            ));
        }
        out
    }
}

/// Builds both example families in dimension `dim >= 1` and compares the
/// distances at which their bounds are attained.
pub fn sharpness_suite(dim: usize, field: Prime) -> Result<SharpnessReport> {
    let bip_cover = bipyramid_example(dim)?;
    let sphere = certify(&sphere_example(dim)?, field)?;
    let bipyramid = certify(&bip_cover, field)?;
    let equalities = vec![
        Equality {
            name: "sphere: E2 bottom row vs nerve",
            measured: bottleneck_all(&sphere.e2_bottom, &sphere.nerve),
            expected: HalfGrid::steps(2),
        },
        Equality {
            name: "sphere: E2 bottom row vs E-infinity bottom row",
            measured: bottleneck_all(&sphere.e2_bottom, &sphere.infinity_bottom),
            expected: HalfGrid::steps(2 * (dim as u64 - 1)),
        },
        Equality {
            name: "bipyramid: top ambient degree vs E-infinity",
            measured: bottleneck(bipyramid.ambient.degree(dim), bipyramid.infinity_bottom.degree(dim)).distance,
            expected: HalfGrid::steps(2 * dim as u64),
        },
    ];
    Ok(SharpnessReport { dim, sphere, bipyramid, equalities })
}
