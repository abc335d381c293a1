//! Persistent homology of filtered chain complexes.
//!
//! Two independent routes are provided. [`FilteredChainComplex::barcode`]
//! runs the column reduction with clearing over a single global filtration
//! order. [`tower_homology`] computes homology slice by slice from explicit
//! per-slice boundary matrices and inclusion maps, then reads off intervals
//! from the rank invariant of the induced tower.

use std::collections::HashMap;

use crate::barcode::{Barcode, Interval};
use crate::complex::{FilteredComplex, Simplex};
use crate::error::{Error, Result};
use crate::field::{Coeff, Prime};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::tower::PersistenceTower;

/// Generator of a filtered chain complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub dim: usize,
    pub birth: i64,
}

/// Chain complex with a birth per generator, stored in filtration order:
/// cells sorted by `(birth, dim)` with ties kept in input order.
#[derive(Clone, Debug)]
pub struct FilteredChainComplex {
    field: Prime,
    cells: Vec<Cell>,
    boundary: Vec<SparseVec>,
}

impl FilteredChainComplex {
    /// `boundary[i]` lists the faces of cell `i` by input position. Faces must
    /// have dimension one less and birth no later than the cell.
    pub fn new(field: Prime, cells: Vec<Cell>, boundary: Vec<SparseVec>) -> Result<Self> {
        if cells.len() != boundary.len() {
            return Err(Error::Shape(format!(
                "{} cells but {} boundary columns",
                cells.len(),
                boundary.len()
            )));
        }
        for (i, col) in boundary.iter().enumerate() {
            for &(k, _) in col.entries() {
                let face = cells.get(k).ok_or_else(|| {
                    Error::Shape(format!("boundary of cell {i} references missing cell {k}"))
                })?;
                if face.dim + 1 != cells[i].dim {
                    return Err(Error::Shape(format!(
                        "cell {i} of dimension {} has a face of dimension {}",
                        cells[i].dim, face.dim
                    )));
                }
                if face.birth > cells[i].birth {
                    return Err(Error::Shape(format!("cell {i} is born before its face {k}")));
                }
            }
        }
        let mut order: Vec<usize> = (0..cells.len()).collect();
        order.sort_by_key(|&i| (cells[i].birth, cells[i].dim, i));
        let mut position = vec![0; cells.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let sorted_cells = order.iter().map(|&i| cells[i]).collect();
        let sorted_boundary = order
            .iter()
            .map(|&i| boundary[i].reindex(|k| Some(position[k]), field))
            .collect();
        Ok(FilteredChainComplex { field, cells: sorted_cells, boundary: sorted_boundary })
    }

    /// Simplicial chains with signs `(-1)^k` for the face omitting the `k`-th
    /// vertex. Simplices are ordered by `(birth, dim, lexicographic)`.
    pub fn from_complex(complex: &FilteredComplex, field: Prime) -> Self {
        let mut simplices: Vec<(&Simplex, i64)> = complex.iter().collect();
        simplices.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
        let index: HashMap<&Simplex, usize> =
            simplices.iter().enumerate().map(|(i, (s, _))| (*s, i)).collect();
        let cells = simplices.iter().map(|(s, b)| Cell { dim: s.dim(), birth: *b }).collect();
        let boundary = simplices
            .iter()
            .map(|(s, _)| {
                let entries =
                    s.facets().enumerate().map(|(k, face)| (index[&face], field.sign(k))).collect();
                SparseVec::from_entries(entries, field)
            })
            .collect();
        FilteredChainComplex { field, cells, boundary }
    }

    pub fn field(&self) -> Prime {
        self.field
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn boundary(&self) -> &[SparseVec] {
        &self.boundary
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    /// `(min birth - 1, max birth + 1)`, or `(0, 0)` when empty.
    pub fn window(&self) -> (i64, i64) {
        match (self.cells.first(), self.cells.last()) {
            (Some(a), Some(b)) => (a.birth - 1, b.birth + 1),
            _ => (0, 0),
        }
    }

    /// Checks `d∘d = 0`.
    pub fn check_boundary_squared(&self) -> Result<()> {
        let f = self.field;
        for (i, col) in self.boundary.iter().enumerate() {
            let mut acc = SparseVec::new();
            for &(k, c) in col.entries() {
                acc.axpy(c, &self.boundary[k], f);
            }
            if !acc.is_zero() {
                return Err(Error::Internal(format!("boundary squared is nonzero on cell {i}")));
            }
        }
        Ok(())
    }

    /// Barcode in degrees `0..=max_degree` by column reduction with clearing.
    pub fn barcode(&self, max_degree: usize) -> Barcode {
        let f = self.field;
        let n = self.cells.len();
        let mut reduced: Vec<Option<SparseVec>> = vec![None; n];
        // low index -> column owning it
        let mut owner: HashMap<usize, usize> = HashMap::new();
        let mut cleared = vec![false; n];
        let top = (max_degree + 1).min(self.max_dim().unwrap_or(0));
        for d in (1..=top).rev() {
            for j in (0..n).filter(|&j| self.cells[j].dim == d) {
                if cleared[j] {
                    continue;
                }
                let mut col = self.boundary[j].clone();
                while let Some((low, c)) = col.leading() {
                    match owner.get(&low) {
                        Some(&k) => {
                            let other = reduced[k].as_ref().unwrap();
                            let factor = f.div(c, other.leading().unwrap().1);
                            col.axpy(f.neg(factor), other, f);
                        }
                        None => break,
                    }
                }
                if let Some((low, _)) = col.leading() {
                    owner.insert(low, j);
                    // The paired face column is a cycle that reduces to zero.
                    cleared[low] = true;
                    reduced[j] = Some(col);
                }
            }
        }
        let mut out = Barcode::new();
        for (low, &j) in &owner {
            let q = self.cells[*low].dim;
            let (b, d) = (self.cells[*low].birth, self.cells[j].birth);
            if q <= max_degree && b < d {
                out.push(q, Interval::finite(b, d));
            }
        }
        for i in 0..n {
            let q = self.cells[i].dim;
            if q <= max_degree && reduced[i].is_none() && !owner.contains_key(&i) && !cleared[i] {
                out.push(q, Interval::essential(self.cells[i].birth));
            }
        }
        out
    }

    /// Explicit slice-wise presentation over the window `[lo, hi]`: the slice
    /// at `j` holds the cells born at or before `j`, in filtration order.
    pub fn chain_tower(&self, lo: i64, hi: i64) -> ChainTower {
        let top = self.max_dim().map_or(0, |d| d + 1);
        let mut slices = Vec::new();
        let mut positions: Vec<HashMap<usize, usize>> = Vec::new();
        for j in lo..=hi {
            let mut dims = vec![0; top + 1];
            let mut pos = HashMap::new();
            for (i, c) in self.cells.iter().enumerate().filter(|(_, c)| c.birth <= j) {
                pos.insert(i, dims[c.dim]);
                dims[c.dim] += 1;
            }
            let mut boundary: Vec<Vec<SparseVec>> = vec![Vec::new(); top + 1];
            for (i, c) in self.cells.iter().enumerate().filter(|(_, c)| c.birth <= j) {
                boundary[c.dim].push(self.boundary[i].reindex(|k| pos.get(&k).copied(), self.field));
            }
            slices.push(ChainSlice { dims, boundary });
            positions.push(pos);
        }
        let inclusions = (0..slices.len().saturating_sub(1))
            .map(|k| {
                let mut maps: Vec<Vec<SparseVec>> = vec![Vec::new(); top + 1];
                let mut by_pos: Vec<(usize, usize)> =
                    positions[k].iter().map(|(&cell, &p)| (cell, p)).collect();
                by_pos.sort_by_key(|&(cell, _)| cell);
                for (cell, _) in by_pos {
                    let d = self.cells[cell].dim;
                    maps[d].push(SparseVec::unit(positions[k + 1][&cell]));
                }
                maps
            })
            .collect();
        ChainTower { field: self.field, start: lo, slices, inclusions }
    }
}

/// Barcode of a filtered simplicial complex in degrees `0..=max_degree`.
pub fn barcode(complex: &FilteredComplex, max_degree: usize, field: Prime) -> Barcode {
    FilteredChainComplex::from_complex(complex, field).barcode(max_degree)
}

/// Chain complex at one slice: `dims[q]` generators in degree `q` and
/// `boundary[q][c]` the boundary of generator `c` in degree `q - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSlice {
    pub dims: Vec<usize>,
    pub boundary: Vec<Vec<SparseVec>>,
}

impl ChainSlice {
    fn dim(&self, q: usize) -> usize {
        self.dims.get(q).copied().unwrap_or(0)
    }

    fn column(&self, q: usize, c: usize) -> &SparseVec {
        &self.boundary[q][c]
    }
}

/// Sequence of chain complexes with chain maps between consecutive slices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainTower {
    pub field: Prime,
    pub start: i64,
    pub slices: Vec<ChainSlice>,
    /// `inclusions[k][q][c]`: image of generator `c` of degree `q` of slice
    /// `k` in slice `k + 1`.
    pub inclusions: Vec<Vec<Vec<SparseVec>>>,
}

impl ChainTower {
    pub fn validate(&self) -> Result<()> {
        if self.slices.is_empty() {
            return Err(Error::Shape("chain tower has no slices".into()));
        }
        if self.inclusions.len() + 1 != self.slices.len() {
            return Err(Error::Shape("one inclusion map is needed between each pair of slices".into()));
        }
        for (k, s) in self.slices.iter().enumerate() {
            if s.boundary.len() != s.dims.len() {
                return Err(Error::Shape(format!("slice {k}: boundary degrees do not match dims")));
            }
            for (q, cols) in s.boundary.iter().enumerate() {
                if cols.len() != s.dims[q] {
                    return Err(Error::Shape(format!(
                        "slice {k}, degree {q}: {} columns for {} generators",
                        cols.len(),
                        s.dims[q]
                    )));
                }
                let bound = if q == 0 { 0 } else { s.dims[q - 1] };
                if cols.iter().any(|c| c.leading().is_some_and(|(i, _)| i >= bound)) {
                    return Err(Error::Shape(format!("slice {k}, degree {q}: boundary index out of range")));
                }
            }
        }
        for (k, maps) in self.inclusions.iter().enumerate() {
            let (a, b) = (&self.slices[k], &self.slices[k + 1]);
            for q in 0..a.dims.len().max(maps.len()) {
                let cols = maps.get(q).map(Vec::as_slice).unwrap_or(&[]);
                if cols.len() != a.dim(q) {
                    return Err(Error::Shape(format!(
                        "map {k}->{}: degree {q} has {} columns for {} generators",
                        k + 1,
                        cols.len(),
                        a.dim(q)
                    )));
                }
                if cols.iter().any(|c| c.leading().is_some_and(|(i, _)| i >= b.dim(q))) {
                    return Err(Error::Shape(format!("map {k}->{}: index out of range", k + 1)));
                }
            }
        }
        Ok(())
    }
}

/// Homology tower in a single degree together with the cycle
/// representatives chosen as a basis at each slice.
#[derive(Clone, Debug)]
pub struct HomologyTower {
    pub tower: PersistenceTower,
    /// `representatives[k]` are cycles in slice `start + k` whose classes
    /// form the basis used by `tower`.
    pub representatives: Vec<Vec<SparseVec>>,
}

/// Homology of one slice in one degree: cycle representatives and a way to
/// express any cycle in that basis.
struct SliceHomology {
    reps: Vec<SparseVec>,
    /// Boundaries with tag zero followed by representatives tagged `e_k`.
    echelon: Echelon<SparseVec>,
}

impl SliceHomology {
    fn compute(slice: &ChainSlice, q: usize, f: Prime) -> SliceHomology {
        let mut echelon: Echelon<SparseVec> = Echelon::new(f);
        if q + 1 < slice.dims.len() {
            for c in 0..slice.dims[q + 1] {
                let _ = echelon.insert(slice.column(q + 1, c).clone(), SparseVec::new());
            }
        }
        let mut kernel: Echelon<SparseVec> = Echelon::new(f);
        let mut cycles = Vec::new();
        for c in 0..slice.dim(q) {
            let col = if q == 0 { SparseVec::new() } else { slice.column(q, c).clone() };
            if let Err(rel) = kernel.insert(col, SparseVec::unit(c)) {
                cycles.push(rel);
            }
        }
        let mut reps = Vec::new();
        for z in cycles {
            if echelon.insert(z.clone(), SparseVec::unit(reps.len())).is_ok() {
                reps.push(z);
            }
        }
        SliceHomology { reps, echelon }
    }

    /// Coordinates of the class of cycle `z`; `None` if `z` is not a cycle
    /// modulo boundaries in the span.
    fn coordinates(&self, z: &SparseVec) -> Option<Vec<Coeff>> {
        let red = self.echelon.reduce(z.clone());
        red.residual.is_zero().then(|| red.combination.to_dense(self.reps.len()))
    }
}

/// Slice-wise homology in degree `q` with induced maps.
pub fn tower_homology(chains: &ChainTower, q: usize) -> Result<HomologyTower> {
    chains.validate()?;
    let f = chains.field;
    let homs: Vec<SliceHomology> =
        chains.slices.iter().map(|s| SliceHomology::compute(s, q, f)).collect();
    let mut maps = Vec::with_capacity(homs.len().saturating_sub(1));
    for k in 0..homs.len().saturating_sub(1) {
        let incl = chains.inclusions[k].get(q).map(Vec::as_slice).unwrap_or(&[]);
        let mut columns = Vec::with_capacity(homs[k].reps.len());
        for z in &homs[k].reps {
            let mut image = SparseVec::new();
            for &(i, c) in z.entries() {
                image.axpy(c, &incl[i], f);
            }
            let coords = homs[k + 1].coordinates(&image).ok_or_else(|| {
                Error::Shape(format!("map {k}->{} does not send cycles to cycles", k + 1))
            })?;
            columns.push(coords);
        }
        maps.push(Matrix::from_columns(homs[k + 1].reps.len(), &columns));
    }
    let dims = homs.iter().map(|h| h.reps.len()).collect();
    let tower = PersistenceTower::new(f, chains.start, dims, maps)?;
    Ok(HomologyTower { tower, representatives: homs.into_iter().map(|h| h.reps).collect() })
}

/// Barcode through the slice-wise route, for comparison with [`barcode`].
pub fn barcode_via_towers(complex: &FilteredComplex, max_degree: usize, field: Prime) -> Result<Barcode> {
    let chains = FilteredChainComplex::from_complex(complex, field);
    let (lo, hi) = chains.window();
    let tower = chains.chain_tower(lo, hi);
    let mut out = Barcode::new();
    for q in 0..=max_degree {
        out.extend(q, tower_homology(&tower, q)?.tower.barcode());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_boundary() -> FilteredComplex {
        FilteredComplex::build([(vec![0, 1], 0), (vec![1, 2], 0), (vec![0, 2], 2)]).unwrap()
    }

    #[test]
    fn point() {
        let c = FilteredComplex::build([(vec![0], 4)]).unwrap();
        let b = barcode(&c, 2, Prime::TWO);
        assert_eq!(b, Barcode::from_degrees([(0, vec![Interval::essential(4)])]));
    }

    #[test]
    fn circle_born_then_filled() {
        let mut records = vec![(vec![0, 1], 0), (vec![1, 2], 0), (vec![0, 2], 2)];
        records.push((vec![0, 1, 2], 5));
        let c = FilteredComplex::build(records).unwrap();
        for p in [2, 3, 5] {
            let f = Prime::new(p).unwrap();
            let b = barcode(&c, 2, f);
            assert_eq!(b.degree(0), &[Interval::essential(0)]);
            assert_eq!(b.degree(1), &[Interval::finite(2, 5)]);
            assert_eq!(barcode_via_towers(&c, 2, f).unwrap(), b);
        }
        let chains = FilteredChainComplex::from_complex(&c, Prime::TWO);
        let t = tower_homology(&chains.chain_tower(0, 6), 1).unwrap();
        assert_eq!(t.tower.dims(), &[0, 0, 1, 1, 1, 0, 0]);
    }

    #[test]
    fn lower_star_path() {
        let vals = std::collections::BTreeMap::from([(0, 0), (1, 2), (2, 1)]);
        let c = crate::complex::lower_star([vec![0, 1], vec![1, 2]], &vals).unwrap();
        let b = barcode(&c, 1, Prime::TWO);
        assert_eq!(b.degree(0), &[Interval::essential(0), Interval::finite(1, 2)]);
    }

    #[test]
    fn boundary_squares_to_zero() {
        let c = FilteredComplex::build([(vec![0, 1, 2, 3], 0)]).unwrap();
        FilteredChainComplex::from_complex(&c, Prime::new(3).unwrap())
            .check_boundary_squared()
            .unwrap();
    }

    #[test]
    fn constant_chains_give_identity_maps() {
        let c = triangle_boundary().shifted(-10);
        let chains = FilteredChainComplex::from_complex(&c.refiltered(|_| 0).unwrap(), Prime::TWO);
        let t = tower_homology(&chains.chain_tower(0, 3), 1).unwrap();
        assert!(t.tower.maps().iter().all(|m| *m == Matrix::identity(1)));
    }

    #[test]
    fn inconsistent_shapes_rejected() {
        let tower = ChainTower {
            field: Prime::TWO,
            start: 0,
            slices: vec![ChainSlice { dims: vec![2], boundary: vec![vec![SparseVec::new()]] }],
            inclusions: vec![],
        };
        assert!(matches!(tower_homology(&tower, 0), Err(Error::Shape(_))));
    }

    #[test]
    fn general_constructor_sorts_by_birth() {
        let cells = vec![Cell { dim: 1, birth: 3 }, Cell { dim: 0, birth: 1 }, Cell { dim: 0, birth: 0 }];
        let boundary = vec![
            SparseVec::from_entries(vec![(1, 1), (2, 1)], Prime::TWO),
            SparseVec::new(),
            SparseVec::new(),
        ];
        let c = FilteredChainComplex::new(Prime::TWO, cells, boundary).unwrap();
        assert_eq!(
            c.barcode(0).degree(0),
            &[Interval::essential(0), Interval::finite(1, 3)]
        );
        let bad = FilteredChainComplex::new(
            Prime::TWO,
            vec![Cell { dim: 1, birth: 0 }, Cell { dim: 0, birth: 1 }],
            vec![SparseVec::unit(1), SparseVec::new()],
        );
        assert!(bad.is_err());
    }
}
