//! Seeded random complexes and covers for property suites.
//!
//! Three families:
//! * flag complexes of Erdős–Rényi graphs with monotone random births,
//!   covered by random assignments of their maximal simplices or by closed
//!   vertex neighborhoods;
//! * unions of full simplices under a lower-star filtration, covered by those
//!   simplices (every intersection is persistently contractible);
//! * the same unions with births perturbed upward, which keeps every final
//!   intersection contractible but lets transient cycles appear.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{full_subcomplex, induced_cover, lower_star, FilteredComplex, FilteredCover, Member, Simplex, Vertex};
use crate::barcode::Interval;
use crate::field::Prime;
use crate::linalg::Matrix;
use crate::morphism::{morphism_space, TowerMorphism};
use crate::nerve::{acyclicity, nerve, NerveStrategy};
use crate::tower::PersistenceTower;

/// Largest complex any generator here returns.
pub const MAX_SIMPLICES: usize = 300;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Flag complex of `G(n, p)` up to dimension 3, cut off at
/// [`MAX_SIMPLICES`]. Vertex births are uniform in `[0, span]`; every other
/// simplex is born at the latest of its facets plus a small random delay.
pub fn flag_complex<R: Rng>(rng: &mut R, n: usize, p: f64, span: i64) -> FilteredComplex {
    let mut births: BTreeMap<Simplex, i64> = BTreeMap::new();
    let mut adjacent = vec![vec![false; n]; n];
    for v in 0..n {
        births.insert(Simplex::new(vec![v as Vertex]).unwrap(), rng.gen_range(0..=span));
    }
    let mut layer: Vec<Vec<Vertex>> = (0..n as Vertex).map(|v| vec![v]).collect();
    for u in 0..n {
        for v in u + 1..n {
            adjacent[u][v] = rng.gen_bool(p);
            adjacent[v][u] = adjacent[u][v];
        }
    }
    for _dim in 1..=3 {
        let mut next = Vec::new();
        for s in &layer {
            let last = *s.last().unwrap() as usize;
            for w in last + 1..n {
                if s.iter().all(|&v| adjacent[v as usize][w]) {
                    let mut t = s.clone();
                    t.push(w as Vertex);
                    next.push(t);
                }
            }
        }
        for verts in &next {
            if births.len() >= MAX_SIMPLICES {
                break;
            }
            let s = Simplex::new(verts.clone()).unwrap();
            let base = s.facets().map(|f| births[&f]).max().unwrap();
            births.insert(s, base + rng.gen_range(0..=span / 3));
        }
        layer = next.into_iter().filter(|v| births.contains_key(&Simplex::new(v.clone()).unwrap())).collect();
    }
    FilteredComplex::build(births.into_iter().map(|(s, b)| (s.vertices().to_vec(), b))).unwrap()
}

fn maximal_simplices(complex: &FilteredComplex) -> Vec<Simplex> {
    let all: Vec<&Simplex> = complex.simplices().collect();
    all.iter()
        .filter(|s| !all.iter().any(|t| t.dim() > s.dim() && s.is_face_of(t)))
        .map(|s| Simplex::clone(s))
        .collect()
}

/// Induced cover with `k` members (fewer if there are fewer maximal
/// simplices, but at least 2): every maximal simplex goes to one random
/// member, and to a second one with probability `overlap`.
pub fn assignment_cover<R: Rng>(rng: &mut R, complex: &FilteredComplex, k: usize, overlap: f64) -> FilteredCover {
    let mut maximal = maximal_simplices(complex);
    maximal.shuffle(rng);
    let k = k.min(maximal.len()).max(2);
    let mut parts: Vec<Vec<Vec<Vertex>>> = vec![Vec::new(); k];
    for (i, s) in maximal.iter().enumerate() {
        let first = if i < k { i } else { rng.gen_range(0..k) };
        parts[first].push(s.vertices().to_vec());
        if rng.gen_bool(overlap) {
            let second = rng.gen_range(0..k);
            if second != first {
                parts[second].push(s.vertices().to_vec());
            }
        }
    }
    for i in 0..k {
        if parts[i].is_empty() {
            let donor = parts[(i + 1) % k][0].clone();
            parts[i].push(donor);
        }
    }
    let named = parts.into_iter().enumerate().map(|(i, p)| (format!("U{i}"), p)).collect();
    induced_cover(complex, named).expect("assignment covers every maximal simplex")
}

/// Cover by full subcomplexes on closed vertex neighborhoods, with centers
/// picked until every simplex is covered. `None` if that takes more than
/// `max_members` centers.
pub fn neighborhood_cover<R: Rng>(rng: &mut R, complex: &FilteredComplex, max_members: usize) -> Option<FilteredCover> {
    let mut neighbors: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
    for s in complex.simplices() {
        for &v in s.vertices() {
            neighbors.entry(v).or_default().extend(s.vertices().iter().copied());
        }
    }
    let mut uncovered: Vec<Simplex> = complex.simplices().cloned().collect();
    let mut members = Vec::new();
    while !uncovered.is_empty() {
        if members.len() == max_members {
            return None;
        }
        let s = uncovered.choose(rng).unwrap().clone();
        let center = *s.vertices().choose(rng).unwrap();
        let hood = &neighbors[&center];
        members.push(Member { name: format!("N{center}"), complex: full_subcomplex(complex, hood) });
        uncovered.retain(|t| !t.vertices().iter().all(|v| hood.contains(v)));
    }
    if members.len() < 2 {
        return None;
    }
    FilteredCover::new(complex.clone(), members).ok()
}

/// Union of `k` full simplices on random vertex sets, each a cover member,
/// under the lower-star filtration of random vertex values. When `noise > 0`
/// every simplex is additionally delayed by up to `noise` steps, kept
/// monotone, and the members inherit the perturbed births.
pub fn simplex_cover<R: Rng>(rng: &mut R, k: usize, noise: i64) -> FilteredCover {
    let pool = rng.gen_range(k.max(4)..=9) as Vertex;
    let sets: Vec<Vec<Vertex>> = (0..k)
        .map(|_| {
            let size = rng.gen_range(1..=5usize.min(pool as usize));
            let mut all: Vec<Vertex> = (0..pool).collect();
            all.shuffle(rng);
            let mut s = all[..size].to_vec();
            s.sort_unstable();
            s
        })
        .collect();
    let values: BTreeMap<Vertex, i64> = (0..pool).map(|v| (v, rng.gen_range(-3..=6))).collect();
    let base = lower_star(sets.clone(), &values).expect("every vertex has a value");
    let ambient = if noise == 0 {
        base
    } else {
        let mut births: BTreeMap<Simplex, i64> = BTreeMap::new();
        // Simplices iterate by size, so facets are settled first.
        for (s, b) in base.iter() {
            let lifted = s.facets().map(|f| births[&f]).fold(b + rng.gen_range(0..=noise), i64::max);
            births.insert(s.clone(), lifted);
        }
        FilteredComplex::build(births.into_iter().map(|(s, b)| (s.vertices().to_vec(), b))).unwrap()
    };
    let named = sets.into_iter().enumerate().map(|(i, s)| (format!("S{i}"), vec![s])).collect();
    induced_cover(&ambient, named).expect("members are faces of the ambient complex")
}

/// Which generator produced an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    FlagAssignment,
    FlagNeighborhood,
    GoodCover,
    NoisyCover,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub family: Family,
    pub cover: FilteredCover,
}

fn flag_size<R: Rng>(rng: &mut R) -> (usize, f64) {
    (rng.gen_range(6..=16), rng.gen_range(0.25..0.7))
}

/// An instance from any family, 2 to 5 members, at most [`MAX_SIMPLICES`]
/// simplices.
pub fn any_instance<R: Rng>(rng: &mut R) -> Instance {
    loop {
        let family = *[Family::FlagAssignment, Family::FlagNeighborhood, Family::GoodCover, Family::NoisyCover]
            .choose(rng)
            .unwrap();
        if let Some(inst) = instance_of(rng, family) {
            return inst;
        }
    }
}

/// One draw from `family`; `None` when the draw was rejected.
pub fn instance_of<R: Rng>(rng: &mut R, family: Family) -> Option<Instance> {
    let k = rng.gen_range(2..=5);
    let cover = match family {
        Family::FlagAssignment => {
            let (n, p) = flag_size(rng);
            let complex = flag_complex(rng, n, p, 8);
            assignment_cover(rng, &complex, k, 0.4)
        }
        Family::FlagNeighborhood => {
            let (n, p) = flag_size(rng);
            let complex = flag_complex(rng, n, p, 8);
            neighborhood_cover(rng, &complex, 5)?
        }
        Family::GoodCover => simplex_cover(rng, k, 0),
        Family::NoisyCover => {
            let noise = rng.gen_range(1..=3);
            simplex_cover(rng, k, noise)
        }
    };
    (cover.ambient().len() <= MAX_SIMPLICES).then_some(Instance { family, cover })
}

/// An instance whose acyclicity parameter is finite, drawn from the
/// neighborhood and perturbed families.
pub fn finite_epsilon_instance<R: Rng>(rng: &mut R, field: Prime) -> Instance {
    loop {
        let family = if rng.gen_bool(0.5) { Family::FlagNeighborhood } else { Family::NoisyCover };
        if let Some(inst) = instance_of(rng, family) {
            let n = nerve(&inst.cover, None, NerveStrategy::FirstNonempty);
            if acyclicity(&inst.cover, &n, field).epsilon.is_finite() {
                return inst;
            }
        }
    }
}

/// A persistently contractible cover (all intersections at distance 0 from a
/// point).
pub fn good_cover<R: Rng>(rng: &mut R) -> Instance {
    let k = rng.gen_range(2..=5);
    Instance { family: Family::GoodCover, cover: simplex_cover(rng, k, 0) }
}

/// Up to `max_bars` random bars with births in `[lo, hi)`; about one in
/// four is essential.
pub fn random_bars<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_bars: usize) -> Vec<Interval> {
    (0..rng.gen_range(0..=max_bars))
        .map(|_| {
            let b = rng.gen_range(lo..hi);
            if rng.gen_bool(0.25) {
                Interval::essential(b)
            } else {
                Interval::finite(b, rng.gen_range(b + 1..=hi))
            }
        })
        .collect()
}

/// Interval-decomposable tower on `[lo, hi]` with random bars, presented in
/// a randomly changed basis at every slice.
pub fn random_tower<R: Rng>(rng: &mut R, field: Prime, lo: i64, hi: i64, max_bars: usize) -> PersistenceTower {
    let bars = random_bars(rng, lo, hi, max_bars);
    let plain = PersistenceTower::from_intervals(field, lo, hi, &bars).expect("bars lie in the window");
    let changes: Vec<(Matrix, Matrix)> = plain.dims().iter().map(|&d| random_invertible(rng, field, d)).collect();
    let maps = plain
        .maps()
        .iter()
        .enumerate()
        .map(|(k, m)| changes[k + 1].0.mul(&m.mul(&changes[k].1, field), field))
        .collect();
    PersistenceTower::new(field, lo, plain.dims().to_vec(), maps).expect("conjugation keeps shapes")
}

/// Random invertible matrix and its inverse, as a product of elementary
/// row operations.
fn random_invertible<R: Rng>(rng: &mut R, field: Prime, n: usize) -> (Matrix, Matrix) {
    let mut m = Matrix::identity(n);
    let mut inv = Matrix::identity(n);
    if n < 2 {
        return (m, inv);
    }
    let p = field.value();
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let a = rng.gen_range(1..p);
        // Row i += a * row j, and the inverse operation on the other side.
        let mut e = Matrix::identity(n);
        e.set(i, j, a);
        let mut e_inv = Matrix::identity(n);
        e_inv.set(i, j, field.neg(a));
        m = e.mul(&m, field);
        inv = inv.mul(&e_inv, field);
    }
    (m, inv)
}

/// Random element of the space of morphisms `source -> target`.
pub fn random_morphism<R: Rng>(rng: &mut R, source: &PersistenceTower, target: &PersistenceTower) -> TowerMorphism {
    let f = source.field();
    let basis = morphism_space(source, target).expect("towers share a field");
    let mut acc = TowerMorphism::zero(source, target).expect("towers share a window");
    for m in &basis {
        let a = rng.gen_range(0..f.value());
        if a == 0 {
            continue;
        }
        let components = acc
            .components()
            .iter()
            .zip(m.components())
            .map(|(x, y)| {
                let mut scaled = y.clone();
                for r in 0..scaled.rows() {
                    for c in 0..scaled.cols() {
                        scaled.set(r, c, f.mul(a, y.get(r, c)));
                    }
                }
                x.sub(&scaled, f)
            })
            .collect();
        acc = TowerMorphism::new(source.clone(), target.clone(), components).expect("sums of morphisms are natural");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::HalfGrid;

    #[test]
    fn flag_complexes_are_valid_and_bounded() {
        let mut rng = seeded(7);
        for _ in 0..20 {
            let c = flag_complex(&mut rng, 14, 0.7, 6);
            c.validate().unwrap();
            assert!(c.len() <= MAX_SIMPLICES);
        }
    }

    #[test]
    fn good_covers_have_zero_epsilon() {
        let mut rng = seeded(11);
        for _ in 0..20 {
            let inst = good_cover(&mut rng);
            let n = nerve(&inst.cover, None, NerveStrategy::FirstNonempty);
            assert_eq!(acyclicity(&inst.cover, &n, Prime::TWO).epsilon, HalfGrid::ZERO);
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let a = any_instance(&mut seeded(3)).cover;
        let b = any_instance(&mut seeded(3)).cover;
        assert_eq!(a, b);
    }
}
