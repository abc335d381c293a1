//! The Mayer-Vietoris double complex of a filtered cover, its total complex,
//! and the pages of the spectral sequence of the column filtration.
//!
//! Pages are computed slice by slice. At a slice, the cell `(p, n)` of page
//! `r` is stored in column-`p` coordinates: a set of chains of `Tot_n` whose
//! differential lands `r` columns to the left (the representatives), and the
//! projections of boundaries that are divided out (the denominators), each
//! remembered together with a chain it is the boundary of. Evaluating `d^r`
//! on a representative and reducing against the target cell yields both its
//! class and, when the class vanishes, the correction that lifts the
//! representative one page further.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::barcode::{Barcode, Interval};
use crate::complex::{FilteredCover, Simplex};
use crate::error::{Error, Result};
use crate::field::{Coeff, Prime};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::morphism::TowerMorphism;
use crate::nerve::{nerve, NerveStrategy};
use crate::persistence::{Cell as ChainCell, FilteredChainComplex};
use crate::tower::PersistenceTower;

/// A generator `(σ, I)` of the double complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    /// Position of `σ` in [`DoubleComplex::simplices`].
    pub simplex: usize,
    /// Position of `I` in [`DoubleComplex::index_sets`].
    pub set: usize,
    /// `|I| - 1`
    pub p: usize,
    /// `dim σ`
    pub q: usize,
    /// Birth of `σ` in the intersection `U_I`.
    pub birth: i64,
}

/// Double complex `E⁰_{p,q} = ⊕_{|I|=p+1} C_q(U_I)` with total differential
/// `D = ∂¹ + (-1)^p ∂⁰`.
///
/// `∂⁰` is the simplicial boundary inside a fixed `U_I`, with sign `(-1)^k`
/// on the face omitting the `k`-th vertex; `∂¹` drops the `l`-th index of `I`
/// with sign `(-1)^l`. Generators of `Tot_n` are ordered by column `p`.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    field: Prime,
    simplices: Vec<Simplex>,
    index_sets: Vec<Simplex>,
    generators: Vec<Generator>,
    /// `tot[n]`: generator ids of total degree `n`, ordered by column.
    tot: Vec<Vec<usize>>,
    /// `col_start[n][p]..col_start[n][p + 1]` is column `p` of `Tot_n`.
    col_start: Vec<Vec<usize>>,
    /// `boundary[n][i]`: `D` of the `i`-th generator of `Tot_n`, over `Tot_{n-1}`.
    boundary: Vec<Vec<SparseVec>>,
    nerve_dim: usize,
    ambient_dim: usize,
}

impl DoubleComplex {
    /// Enumerates every `(σ, I)` with `σ` in the nonempty intersection `U_I`.
    pub fn build(cover: &FilteredCover, field: Prime) -> DoubleComplex {
        let nerve = nerve(cover, None, NerveStrategy::FirstNonempty);
        let simplices: Vec<Simplex> = cover.ambient().simplices().cloned().collect();
        let simplex_id: HashMap<&Simplex, usize> =
            simplices.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let index_sets: Vec<Simplex> = nerve.provenance().keys().cloned().collect();
        let set_id: HashMap<&Simplex, usize> =
            index_sets.iter().enumerate().map(|(i, s)| (s, i)).collect();

        let mut generators = Vec::new();
        for (set, (i_set, inter)) in nerve.provenance().iter().enumerate() {
            for (s, birth) in inter.iter() {
                generators.push(Generator {
                    simplex: simplex_id[s],
                    set,
                    p: i_set.dim(),
                    q: s.dim(),
                    birth,
                });
            }
        }
        let top = generators.iter().map(|g| g.p + g.q).max().map_or(0, |n| n + 1);
        let max_p = generators.iter().map(|g| g.p).max().unwrap_or(0);
        let mut tot: Vec<Vec<usize>> = vec![Vec::new(); top];
        for (id, g) in generators.iter().enumerate() {
            tot[g.p + g.q].push(id);
        }
        for ids in &mut tot {
            ids.sort_by_key(|&id| (generators[id].p, generators[id].set, generators[id].simplex));
        }
        let col_start: Vec<Vec<usize>> = tot
            .iter()
            .map(|ids| {
                (0..=max_p + 1).map(|p| ids.partition_point(|&id| generators[id].p < p)).collect()
            })
            .collect();
        let mut position: HashMap<(usize, usize), usize> = HashMap::new();
        for ids in &tot {
            for (pos, &id) in ids.iter().enumerate() {
                position.insert((generators[id].simplex, generators[id].set), pos);
            }
        }
        let boundary = tot
            .iter()
            .map(|ids| {
                ids.iter()
                    .map(|&id| {
                        let g = generators[id];
                        let sigma = &simplices[g.simplex];
                        let i_set = &index_sets[g.set];
                        let mut entries = Vec::new();
                        if g.p > 0 {
                            for (l, face) in i_set.facets().enumerate() {
                                let pos = position[&(g.simplex, set_id[&face])];
                                entries.push((pos, field.sign(l)));
                            }
                        }
                        if g.q > 0 {
                            for (k, face) in sigma.facets().enumerate() {
                                let pos = position[&(simplex_id[&face], g.set)];
                                entries.push((pos, field.mul(field.sign(g.p), field.sign(k))));
                            }
                        }
                        SparseVec::from_entries(entries, field)
                    })
                    .collect()
            })
            .collect();
        DoubleComplex {
            field,
            simplices,
            index_sets,
            generators,
            tot,
            col_start,
            boundary,
            nerve_dim: nerve.dim().unwrap_or(0),
            ambient_dim: cover.ambient().dim().unwrap_or(0),
        }
    }

    pub fn field(&self) -> Prime {
        self.field
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn index_sets(&self) -> &[Simplex] {
        &self.index_sets
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn nerve_dim(&self) -> usize {
        self.nerve_dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Largest total degree with a generator, plus one.
    pub fn degrees(&self) -> usize {
        self.tot.len()
    }

    /// Number of generators in each nonempty bidegree `(p, q)`.
    pub fn counts(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for g in &self.generators {
            *out.entry((g.p, g.q)).or_insert(0) += 1;
        }
        out
    }

    /// Generators of `Tot_n`, in column order.
    pub fn total_generators(&self, n: usize) -> impl Iterator<Item = &Generator> {
        self.tot.get(n).into_iter().flatten().map(|&id| &self.generators[id])
    }

    fn birth(&self, n: usize, i: usize) -> i64 {
        self.generators[self.tot[n][i]].birth
    }

    fn columns(&self, n: usize) -> usize {
        self.col_start.get(n).map_or(0, |c| c.len() - 1)
    }

    fn column_range(&self, n: usize, p: usize) -> std::ops::Range<usize> {
        match self.col_start.get(n) {
            Some(c) if p + 1 < c.len() => c[p]..c[p + 1],
            _ => 0..0,
        }
    }

    /// Generators of column `p` of `Tot_n` alive at slice `j`.
    fn alive(&self, n: usize, p: usize, j: i64) -> impl Iterator<Item = usize> + '_ {
        self.column_range(n, p).filter(move |&i| self.birth(n, i) <= j)
    }

    /// `D` applied to a chain of `Tot_n`.
    pub fn apply(&self, n: usize, chain: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        if n == 0 {
            return out;
        }
        for &(i, c) in chain.entries() {
            out.axpy(c, &self.boundary[n][i], self.field);
        }
        out
    }

    /// `D ∘ D = 0` on every generator.
    pub fn check_d_squared(&self) -> Result<()> {
        for n in 2..self.tot.len() {
            for (i, col) in self.boundary[n].iter().enumerate() {
                if !self.apply(n - 1, col).is_zero() {
                    return Err(Error::Internal(format!(
                        "D∘D is nonzero on generator {i} of total degree {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Total complex as a filtered chain complex.
    pub fn total_complex(&self) -> FilteredChainComplex {
        let mut offset = vec![0];
        for ids in &self.tot {
            offset.push(offset.last().unwrap() + ids.len());
        }
        let mut cells = Vec::new();
        let mut boundary = Vec::new();
        for (n, ids) in self.tot.iter().enumerate() {
            for (i, &id) in ids.iter().enumerate() {
                cells.push(ChainCell { dim: n, birth: self.generators[id].birth });
                let col = if n == 0 {
                    SparseVec::new()
                } else {
                    self.boundary[n][i].reindex(|k| Some(offset[n - 1] + k), self.field)
                };
                boundary.push(col);
            }
        }
        FilteredChainComplex::new(self.field, cells, boundary).expect("total complex is well formed")
    }

    /// Barcode of the total complex.
    pub fn total_barcode(&self, max_degree: usize) -> Barcode {
        self.total_complex().barcode(max_degree)
    }

    /// `(min birth - 1, max birth + 1)`
    pub fn window(&self) -> (i64, i64) {
        let lo = self.generators.iter().map(|g| g.birth).min();
        let hi = self.generators.iter().map(|g| g.birth).max();
        match (lo, hi) {
            (Some(lo), Some(hi)) => (lo - 1, hi + 1),
            _ => (0, 0),
        }
    }

    /// Page index at which the sequence has certainly stopped changing:
    /// `min(nerve dim, ambient dim) + 2`.
    pub fn infinity_page(&self) -> usize {
        self.nerve_dim.min(self.ambient_dim) + 2
    }
}

/// One page of the spectral sequence, as persistence towers.
#[derive(Clone, Debug)]
pub struct SpectralPage {
    pub r: usize,
    /// Cell towers keyed by `(p, q)`.
    pub cells: BTreeMap<(usize, usize), PersistenceTower>,
    /// `d^r` out of `(p, q)`, toward `(p - r, q + r - 1)`. Missing entries
    /// are zero maps (their target lies outside the first quadrant).
    pub differentials: BTreeMap<(usize, usize), TowerMorphism>,
    /// Chains of the total complex representing the basis at each slice.
    pub representatives: BTreeMap<(usize, usize), Vec<Vec<SparseVec>>>,
    /// Every differential on this page vanishes.
    pub collapsed: bool,
}

impl SpectralPage {
    pub fn barcode(&self, p: usize, q: usize) -> Vec<Interval> {
        self.cells.get(&(p, q)).map(PersistenceTower::barcode).unwrap_or_default()
    }

    /// Nonempty cell barcodes.
    pub fn barcodes(&self) -> BTreeMap<(usize, usize), Vec<Interval>> {
        self.cells
            .iter()
            .map(|(&k, t)| (k, t.barcode()))
            .filter(|(_, b)| !b.is_empty())
            .collect()
    }

    /// Row `q`, graded by the column index `p`.
    pub fn row(&self, q: usize) -> Barcode {
        Barcode::from_degrees(
            self.cells.iter().filter(|((_, qq), _)| *qq == q).map(|(&(p, _), t)| (p, t.barcode())),
        )
    }

    /// `d^r ∘ d^r = 0` at every slice.
    pub fn check_d_squared(&self) -> Result<()> {
        for (&(p, q), d) in &self.differentials {
            if p < self.r {
                continue;
            }
            let Some(next_q) = (q + self.r).checked_sub(1) else { continue };
            if let Some(next) = self.differentials.get(&(p - self.r, next_q)) {
                if !d.then(next)?.is_zero() {
                    return Err(Error::Internal(format!("d^{} ∘ d^{} is nonzero at ({p},{q})", self.r, self.r)));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let cells: serde_json::Map<String, Value> = self
            .barcodes()
            .into_iter()
            .map(|((p, q), bars)| {
                (format!("{p},{q}"), Value::Array(bars.iter().map(Interval::to_json).collect()))
            })
            .collect();
        json!({ "r": self.r, "cells": cells, "collapsed": self.collapsed })
    }

    /// Grid with `q` increasing upward and `p` to the right; each nonempty
    /// cell lists its intervals.
    pub fn render_grid(&self) -> String {
        let bars = self.barcodes();
        let max_p = self.cells.keys().map(|k| k.0).max().unwrap_or(0);
        let max_q = self.cells.keys().map(|k| k.1).max().unwrap_or(0);
        let text = |p: usize, q: usize| -> String {
            match bars.get(&(p, q)) {
                Some(b) => b.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
                None => "0".to_string(),
            }
        };
        let width = (0..=max_p)
            .flat_map(|p| (0..=max_q).map(move |q| (p, q)))
            .map(|(p, q)| text(p, q).len())
            .max()
            .unwrap_or(1)
            .max(3);
        let mut out = String::new();
        let _ = writeln!(out, "E^{}", self.r);
        for q in (0..=max_q).rev() {
            let _ = write!(out, "q={q:<3}|");
            for p in 0..=max_p {
                let _ = write!(out, " {:<width$}", text(p, q));
            }
            out.push('\n');
        }
        let _ = write!(out, "     +");
        for p in 0..=max_p {
            let _ = write!(out, " {:<width$}", format!("p={p}"));
        }
        out.push('\n');
        out
    }
}

/// Echelon tag: coordinates over the cell representatives, and a chain of
/// the next total degree whose boundary accounts for the denominator part.
type CellTag = (SparseVec, SparseVec);

#[derive(Clone, Debug)]
struct CellState {
    reps: Vec<SparseVec>,
    /// Denominator vectors in column coordinates, each with a chain whose
    /// boundary projects onto it.
    den: Vec<(SparseVec, SparseVec)>,
    echelon: Echelon<CellTag>,
}

impl CellState {
    /// Keeps the independent denominators, then the candidates independent
    /// of them and of each other.
    fn build(
        f: Prime,
        den: Vec<(SparseVec, SparseVec)>,
        candidates: Vec<SparseVec>,
        project: impl Fn(&SparseVec) -> SparseVec,
    ) -> Self {
        let mut echelon: Echelon<CellTag> = Echelon::new(f);
        let mut kept = Vec::new();
        for (v, w) in den {
            if echelon.insert(v.clone(), (SparseVec::new(), w.clone())).is_ok() {
                kept.push((v, w));
            }
        }
        let mut reps = Vec::new();
        for x in candidates {
            if echelon.insert(project(&x), (SparseVec::unit(reps.len()), SparseVec::new())).is_ok() {
                reps.push(x);
            }
        }
        CellState { reps, den: kept, echelon }
    }
}

/// Value of `d^r` on one representative.
#[derive(Clone, Debug)]
struct Evaluation {
    /// Coordinates of the class over the target representatives.
    coords: Vec<Coeff>,
    /// Chain whose boundary matches the rest of the image in the target column.
    preimage: SparseVec,
    /// Target-column projection of the image.
    image: SparseVec,
}

/// All cells of one slice at one page.
#[derive(Clone, Debug)]
struct SliceState {
    j: i64,
    /// `cells[n][p]`
    cells: Vec<Vec<CellState>>,
}

impl SliceState {
    fn cell(&self, n: usize, p: usize) -> Option<&CellState> {
        self.cells.get(n).and_then(|row| row.get(p))
    }
}

/// Incremental computation of the pages `E^1, E^2, ...`.
pub struct SpectralSequence<'a> {
    dc: &'a DoubleComplex,
    lo: i64,
    r: usize,
    slices: Vec<SliceState>,
}

impl<'a> SpectralSequence<'a> {
    /// Starts at page 1.
    pub fn new(dc: &'a DoubleComplex) -> Self {
        let (lo, hi) = dc.window();
        let slices = (lo..=hi).into_par_iter().map(|j| first_page(dc, j)).collect();
        SpectralSequence { dc, lo, r: 1, slices }
    }

    /// Index of the page that [`SpectralSequence::advance`] returns next.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Returns the current page with its differentials and moves on to the
    /// next one.
    pub fn advance(&mut self) -> Result<SpectralPage> {
        let dc = self.dc;
        let r = self.r;
        let evaluations: Vec<Vec<Vec<Vec<Evaluation>>>> = self
            .slices
            .par_iter()
            .map(|s| evaluate_differentials(dc, s, r))
            .collect::<Result<_>>()?;
        let page = self.assemble(&evaluations)?;
        let next: Vec<SliceState> = self
            .slices
            .par_iter()
            .zip(evaluations.par_iter())
            .map(|(s, ev)| next_page(dc, s, ev, r))
            .collect();
        self.slices = next;
        self.r += 1;
        Ok(page)
    }

    fn assemble(&self, evaluations: &[Vec<Vec<Vec<Evaluation>>>]) -> Result<SpectralPage> {
        let dc = self.dc;
        let f = dc.field;
        let r = self.r;
        let mut cells = BTreeMap::new();
        let mut representatives = BTreeMap::new();
        for n in 0..dc.degrees() {
            for p in 0..dc.columns(n).min(n + 1) {
                let dims: Vec<usize> =
                    self.slices.iter().map(|s| s.cell(n, p).map_or(0, |c| c.reps.len())).collect();
                let mut maps = Vec::new();
                for k in 0..self.slices.len() - 1 {
                    let (here, there) = (self.slices[k].cell(n, p), self.slices[k + 1].cell(n, p));
                    let mut cols = Vec::new();
                    if let (Some(here), Some(there)) = (here, there) {
                        for x in &here.reps {
                            let red = there.echelon.reduce(x.restrict(dc.column_range(n, p)));
                            if !red.residual.is_zero() {
                                return Err(Error::Internal(format!(
                                    "page {r}, cell ({p},{}): class at slice {} does not survive to the next slice",
                                    n - p,
                                    self.slices[k].j
                                )));
                            }
                            cols.push(red.combination.0.to_dense(there.reps.len()));
                        }
                    }
                    maps.push(Matrix::from_columns(dims[k + 1], &cols));
                }
                let tower = PersistenceTower::new(f, self.lo, dims, maps)?;
                cells.insert((p, n - p), tower);
                representatives.insert(
                    (p, n - p),
                    self.slices.iter().map(|s| s.cell(n, p).map_or(Vec::new(), |c| c.reps.clone())).collect(),
                );
            }
        }
        let mut differentials = BTreeMap::new();
        let mut collapsed = true;
        for (&(p, q), source) in &cells {
            if p < r {
                continue;
            }
            let target_key = (p - r, q + r - 1);
            let Some(target) = cells.get(&target_key) else { continue };
            let n = p + q;
            let components: Vec<Matrix> = evaluations
                .iter()
                .enumerate()
                .map(|(k, ev)| {
                    let cols: Vec<Vec<Coeff>> =
                        ev[n][p].iter().map(|e| e.coords.clone()).collect();
                    Matrix::from_columns(target.dims()[k], &cols)
                })
                .collect();
            let d = TowerMorphism::new(source.clone(), target.clone(), components)?;
            collapsed &= d.is_zero();
            differentials.insert((p, q), d);
        }
        Ok(SpectralPage { r, cells, differentials, representatives, collapsed })
    }
}

/// `E^1` at slice `j`: column-wise homology of `(-1)^p ∂⁰`.
fn first_page(dc: &DoubleComplex, j: i64) -> SliceState {
    let f = dc.field;
    let mut cells = Vec::with_capacity(dc.degrees());
    for n in 0..dc.degrees() {
        let mut row = Vec::new();
        for p in 0..dc.columns(n).min(n + 1) {
            let range = dc.column_range(n, p);
            let mut kernel: Echelon<SparseVec> = Echelon::new(f);
            let mut cycles = Vec::new();
            for i in dc.alive(n, p, j) {
                let image = if n == 0 {
                    SparseVec::new()
                } else {
                    dc.boundary[n][i].restrict(dc.column_range(n - 1, p))
                };
                if let Err(rel) = kernel.insert(image, SparseVec::unit(i)) {
                    cycles.push(rel);
                }
            }
            let den: Vec<(SparseVec, SparseVec)> = if n + 1 < dc.degrees() {
                dc.alive(n + 1, p, j)
                    .map(|h| (dc.boundary[n + 1][h].restrict(range.clone()), SparseVec::unit(h)))
                    .collect()
            } else {
                Vec::new()
            };
            row.push(CellState::build(f, den, cycles, |x| x.restrict(range.clone())));
        }
        cells.push(row);
    }
    SliceState { j, cells }
}

/// `d^r` on every representative of every cell of one slice.
fn evaluate_differentials(dc: &DoubleComplex, s: &SliceState, r: usize) -> Result<Vec<Vec<Vec<Evaluation>>>> {
    let mut out = Vec::with_capacity(s.cells.len());
    for (n, row) in s.cells.iter().enumerate() {
        let mut row_out = Vec::with_capacity(row.len());
        for (p, cell) in row.iter().enumerate() {
            let mut evals = Vec::with_capacity(cell.reps.len());
            for x in &cell.reps {
                let dx = dc.apply(n, x);
                let check = |ok: bool| -> Result<()> {
                    if ok {
                        Ok(())
                    } else {
                        Err(Error::Internal(format!(
                            "page {r}, slice {}: representative in ({p},{}) does not reach {r} columns left",
                            s.j,
                            n - p
                        )))
                    }
                };
                if p < r || n == 0 {
                    check(dx.is_zero())?;
                    evals.push(Evaluation { coords: Vec::new(), preimage: SparseVec::new(), image: SparseVec::new() });
                    continue;
                }
                let tp = p - r;
                let beyond = dc.column_range(n - 1, tp + 1).start;
                check(dx.leading().is_none_or(|(i, _)| i < beyond))?;
                let image = dx.restrict(dc.column_range(n - 1, tp));
                let target = s.cell(n - 1, tp);
                let (coords, preimage) = match target {
                    Some(t) => {
                        let red = t.echelon.reduce(image.clone());
                        if !red.residual.is_zero() {
                            return Err(Error::Internal(format!(
                                "page {r}, slice {}: d^{r} of a class in ({p},{}) leaves the target cell",
                                s.j,
                                n - p
                            )));
                        }
                        (red.combination.0.to_dense(t.reps.len()), red.combination.1)
                    }
                    None => {
                        check(image.is_zero())?;
                        (Vec::new(), SparseVec::new())
                    }
                };
                evals.push(Evaluation { coords, preimage, image });
            }
            row_out.push(evals);
        }
        out.push(row_out);
    }
    Ok(out)
}

/// `E^{r+1}` at one slice: kernels of `d^r` lifted to chains, modulo the
/// images of the incoming `d^r`.
fn next_page(dc: &DoubleComplex, s: &SliceState, ev: &[Vec<Vec<Evaluation>>], r: usize) -> SliceState {
    let f = dc.field;
    let mut cells = Vec::with_capacity(s.cells.len());
    for (n, row) in s.cells.iter().enumerate() {
        let mut new_row = Vec::with_capacity(row.len());
        for (p, cell) in row.iter().enumerate() {
            let evals = &ev[n][p];
            let target_len = evals.first().map_or(0, |e| e.coords.len());
            let a = Matrix::from_columns(target_len, &evals.iter().map(|e| e.coords.clone()).collect::<Vec<_>>());
            let candidates: Vec<SparseVec> = a
                .kernel(f)
                .into_iter()
                .map(|k| {
                    let mut x = SparseVec::new();
                    for (i, &c) in k.iter().enumerate() {
                        if c != 0 {
                            x.axpy(c, &cell.reps[i], f);
                            x.axpy(f.neg(c), &evals[i].preimage, f);
                        }
                    }
                    x
                })
                .collect();
            let mut den = cell.den.clone();
            if let Some(source) = s.cell(n + 1, p + r) {
                for (y, e) in source.reps.iter().zip(&ev[n + 1][p + r]) {
                    den.push((e.image.clone(), y.clone()));
                }
            }
            let range = dc.column_range(n, p);
            new_row.push(CellState::build(f, den, candidates, |x| x.restrict(range.clone())));
        }
        cells.push(new_row);
    }
    SliceState { j: s.j, cells }
}

/// Pages `E^1..=E^r_max`.
pub fn pages(dc: &DoubleComplex, r_max: usize) -> Result<Vec<SpectralPage>> {
    let mut seq = SpectralSequence::new(dc);
    (1..=r_max).map(|_| seq.advance()).collect()
}

/// Page `r`. Page 0 is the double complex itself, with the vertical
/// differential `(-1)^p ∂⁰`.
pub fn page(dc: &DoubleComplex, r: usize) -> Result<SpectralPage> {
    if r == 0 {
        return zeroth_page(dc);
    }
    let mut seq = SpectralSequence::new(dc);
    for _ in 1..r {
        seq.advance()?;
    }
    seq.advance()
}

/// The stable page `E^{min(D, Δ) + 2}`.
pub fn infinity_page(dc: &DoubleComplex) -> Result<SpectralPage> {
    page(dc, dc.infinity_page())
}

fn zeroth_page(dc: &DoubleComplex) -> Result<SpectralPage> {
    let f = dc.field;
    let (lo, hi) = dc.window();
    let slices: Vec<i64> = (lo..=hi).collect();
    let mut cells = BTreeMap::new();
    let mut representatives = BTreeMap::new();
    let alive_list = |n: usize, p: usize, j: i64| -> Vec<usize> { dc.alive(n, p, j).collect() };
    for n in 0..dc.degrees() {
        for p in 0..dc.columns(n).min(n + 1) {
            let lists: Vec<Vec<usize>> = slices.iter().map(|&j| alive_list(n, p, j)).collect();
            let maps = (0..slices.len() - 1)
                .map(|k| {
                    let cols: Vec<Vec<Coeff>> = lists[k]
                        .iter()
                        .map(|g| {
                            let mut v = vec![0; lists[k + 1].len()];
                            v[lists[k + 1].iter().position(|h| h == g).unwrap()] = 1;
                            v
                        })
                        .collect();
                    Matrix::from_columns(lists[k + 1].len(), &cols)
                })
                .collect();
            let tower = PersistenceTower::new(f, lo, lists.iter().map(Vec::len).collect(), maps)?;
            cells.insert((p, n - p), tower);
            representatives.insert(
                (p, n - p),
                lists.iter().map(|l| l.iter().map(|&g| SparseVec::unit(g)).collect()).collect(),
            );
        }
    }
    let mut differentials = BTreeMap::new();
    let mut collapsed = true;
    for (&(p, q), source) in &cells {
        if q == 0 {
            continue;
        }
        let n = p + q;
        let target = &cells[&(p, q - 1)];
        let components = slices
            .iter()
            .enumerate()
            .map(|(k, &j)| {
                let targets = alive_list(n - 1, p, j);
                let cols: Vec<Vec<Coeff>> = alive_list(n, p, j)
                    .iter()
                    .map(|&g| {
                        let mut v = vec![0; targets.len()];
                        for &(i, c) in dc.boundary[n][g].restrict(dc.column_range(n - 1, p)).entries() {
                            v[targets.iter().position(|&h| h == i).unwrap()] = c;
                        }
                        v
                    })
                    .collect();
                Matrix::from_columns(target.dims()[k], &cols)
            })
            .collect();
        let d = TowerMorphism::new(source.clone(), target.clone(), components)?;
        collapsed &= d.is_zero();
        differentials.insert((p, q), d);
    }
    Ok(SpectralPage { r: 0, cells, differentials, representatives, collapsed })
}

/// Quotients `G_p / G_{p-1}` of the column filtration on total homology in
/// degree `n`, where `G_p` is the image of the cycles supported in columns
/// `<= p`. Computed from a single reduction of the total differential at each
/// slice, independently of the page machinery.
pub fn column_quotients(dc: &DoubleComplex, n: usize) -> Result<Vec<PersistenceTower>> {
    let f = dc.field;
    let (lo, hi) = dc.window();
    let columns = dc.columns(n).min(n + 1);
    // Per slice and column: echelon over Tot_n whose tagged rows are the
    // representatives of the quotient.
    let per_slice: Vec<Vec<(Echelon<SparseVec>, Vec<SparseVec>)>> = (lo..=hi)
        .into_par_iter()
        .map(|j| {
            let alive: Vec<usize> = (0..dc.tot.get(n).map_or(0, Vec::len)).filter(|&i| dc.birth(n, i) <= j).collect();
            let mut kernel: Echelon<SparseVec> = Echelon::new(f);
            let mut cycles: Echelon<()> = Echelon::new(f);
            for &i in &alive {
                let image = if n == 0 { SparseVec::new() } else { dc.boundary[n][i].clone() };
                if let Err(rel) = kernel.insert(image, SparseVec::unit(i)) {
                    let _ = cycles.insert(rel, ());
                }
            }
            let boundaries: Vec<SparseVec> = if n + 1 < dc.degrees() {
                (0..dc.tot[n + 1].len())
                    .filter(|&h| dc.birth(n + 1, h) <= j)
                    .map(|h| dc.boundary[n + 1][h].clone())
                    .collect()
            } else {
                Vec::new()
            };
            let cycle_rows: Vec<SparseVec> = cycles.rows().map(|(v, _)| v.clone()).collect();
            (0..columns)
                .map(|p| {
                    let below = dc.column_range(n, p).start;
                    let upto = dc.column_range(n, p).end;
                    let mut e: Echelon<SparseVec> = Echelon::new(f);
                    for b in &boundaries {
                        let _ = e.insert(b.clone(), SparseVec::new());
                    }
                    for z in cycle_rows.iter().filter(|z| z.leading().unwrap().0 < below) {
                        let _ = e.insert(z.clone(), SparseVec::new());
                    }
                    let mut reps = Vec::new();
                    for z in cycle_rows.iter().filter(|z| {
                        let l = z.leading().unwrap().0;
                        below <= l && l < upto
                    }) {
                        if e.insert(z.clone(), SparseVec::unit(reps.len())).is_ok() {
                            reps.push(z.clone());
                        }
                    }
                    (e, reps)
                })
                .collect()
        })
        .collect();
    (0..columns)
        .map(|p| {
            let dims: Vec<usize> = per_slice.iter().map(|s| s[p].1.len()).collect();
            let mut maps = Vec::new();
            for k in 0..per_slice.len() - 1 {
                let (next_e, next_reps) = &per_slice[k + 1][p];
                let mut cols = Vec::new();
                for z in &per_slice[k][p].1 {
                    let red = next_e.reduce(z.clone());
                    if !red.residual.is_zero() {
                        return Err(Error::Internal("cycle lost between slices".into()));
                    }
                    cols.push(red.combination.to_dense(next_reps.len()));
                }
                maps.push(Matrix::from_columns(dims[k + 1], &cols));
            }
            PersistenceTower::new(f, lo, dims, maps)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{induced_cover, FilteredComplex};
    use crate::persistence::barcode;

    fn two_edge_cover() -> FilteredCover {
        let amb = FilteredComplex::build([(vec![0, 1], 1), (vec![1, 2], 2), (vec![0, 2], 3)]).unwrap();
        induced_cover(
            &amb,
            vec![("a".into(), vec![vec![0, 1], vec![1, 2]]), ("b".into(), vec![vec![0, 2]])],
        )
        .unwrap()
    }

    #[test]
    fn single_member_is_the_complex() {
        let amb = FilteredComplex::build([(vec![0, 1, 2], 2), (vec![2, 3], 0)]).unwrap();
        let all: Vec<Vec<u32>> = amb.simplices().map(|s| s.vertices().to_vec()).collect();
        let cover = induced_cover(&amb, vec![("x".into(), all)]).unwrap();
        let dc = DoubleComplex::build(&cover, Prime::TWO);
        assert!(dc.counts().keys().all(|&(p, _)| p == 0));
        assert_eq!(dc.total_barcode(2), barcode(&amb, 2, Prime::TWO));
    }

    #[test]
    fn circle_from_two_arcs() {
        let cover = two_edge_cover();
        for p in [2, 3] {
            let f = Prime::new(p).unwrap();
            let dc = DoubleComplex::build(&cover, f);
            dc.check_d_squared().unwrap();
            assert_eq!(dc.total_barcode(2), barcode(cover.ambient(), 2, f));
            let pages = pages(&dc, 3).unwrap();
            for pg in &pages {
                pg.check_d_squared().unwrap();
            }
            let inf = &pages[2];
            // The circle is carried by the nerve edge.
            for n in 0..2 {
                let q = column_quotients(&dc, n).unwrap();
                for (p, t) in q.iter().enumerate() {
                    assert_eq!(t.barcode(), inf.barcode(p, n - p), "n={n} p={p}");
                }
            }
        }
    }

    #[test]
    fn zeroth_page_counts_generators() {
        let dc = DoubleComplex::build(&two_edge_cover(), Prime::TWO);
        let e0 = page(&dc, 0).unwrap();
        let (_, hi) = dc.window();
        for (&(p, q), &c) in &dc.counts() {
            assert_eq!(e0.cells[&(p, q)].dim_at(hi), c);
        }
        e0.check_d_squared().unwrap();
    }
}
