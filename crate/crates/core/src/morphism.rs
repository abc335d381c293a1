//! Morphisms of persistence towers and the module operations built on them.

use crate::error::{Error, Result};
use crate::field::{Coeff, Prime};
use crate::linalg::{Coordinates, Echelon, Matrix, SparseVec};
use crate::tower::PersistenceTower;

/// Natural transformation between two towers stored over the same window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerMorphism {
    source: PersistenceTower,
    target: PersistenceTower,
    components: Vec<Matrix>,
}

impl TowerMorphism {
    /// Checks shapes and every naturality square inside the window.
    pub fn new(source: PersistenceTower, target: PersistenceTower, components: Vec<Matrix>) -> Result<Self> {
        if source.start() != target.start() || source.end() != target.end() {
            return Err(Error::Shape(format!(
                "source window [{},{}] differs from target window [{},{}]",
                source.start(),
                source.end(),
                target.start(),
                target.end()
            )));
        }
        if source.field() != target.field() {
            return Err(Error::Shape("source and target use different fields".into()));
        }
        if components.len() != source.dims().len() {
            return Err(Error::Shape(format!(
                "{} components for {} slices",
                components.len(),
                source.dims().len()
            )));
        }
        for (k, c) in components.iter().enumerate() {
            if c.cols() != source.dims()[k] || c.rows() != target.dims()[k] {
                return Err(Error::Shape(format!(
                    "component at slice {} is {}x{}, expected {}x{}",
                    source.start() + k as i64,
                    c.rows(),
                    c.cols(),
                    target.dims()[k],
                    source.dims()[k]
                )));
            }
        }
        let m = TowerMorphism { source, target, components };
        m.check_naturality()?;
        Ok(m)
    }

    fn check_naturality(&self) -> Result<()> {
        let f = self.field();
        for k in 0..self.components.len().saturating_sub(1) {
            let j = self.source.start() + k as i64;
            let lhs = self.target.map_at(j).mul(&self.components[k], f);
            let rhs = self.components[k + 1].mul(&self.source.map_at(j), f);
            if lhs != rhs {
                return Err(Error::Naturality { slice: j });
            }
        }
        Ok(())
    }

    pub fn identity(tower: &PersistenceTower) -> Self {
        let components = tower.dims().iter().map(|&d| Matrix::identity(d)).collect();
        TowerMorphism { source: tower.clone(), target: tower.clone(), components }
    }

    pub fn zero(source: &PersistenceTower, target: &PersistenceTower) -> Result<Self> {
        let components = source
            .dims()
            .iter()
            .zip(target.dims())
            .map(|(&s, &t)| Matrix::zeros(t, s))
            .collect();
        TowerMorphism::new(source.clone(), target.clone(), components)
    }

    pub fn field(&self) -> Prime {
        self.source.field()
    }

    pub fn source(&self) -> &PersistenceTower {
        &self.source
    }

    pub fn target(&self) -> &PersistenceTower {
        &self.target
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &TowerMorphism) -> Result<TowerMorphism> {
        if self.target != other.source {
            return Err(Error::Shape("morphisms are not composable".into()));
        }
        let f = self.field();
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| b.mul(a, f))
            .collect();
        Ok(TowerMorphism { source: self.source.clone(), target: other.target.clone(), components })
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    pub fn is_injective(&self) -> bool {
        let f = self.field();
        self.components.iter().all(|c| c.rank(f) == c.cols())
    }

    pub fn is_surjective(&self) -> bool {
        let f = self.field();
        self.components.iter().all(|c| c.rank(f) == c.rows())
    }

    /// Slice-wise kernel with induced structure maps.
    pub fn kernel(&self) -> PersistenceTower {
        self.kernel_inclusion().source
    }

    /// Inclusion of the kernel tower into the source.
    pub fn kernel_inclusion(&self) -> TowerMorphism {
        let f = self.field();
        let bases: Vec<Vec<Vec<Coeff>>> = self.components.iter().map(|c| c.kernel(f)).collect();
        let tower = subtower(&self.source, &bases);
        inclusion_morphism(&tower, &self.source, &bases)
    }

    /// Slice-wise image, as a subtower of the target.
    pub fn image(&self) -> PersistenceTower {
        let f = self.field();
        let bases: Vec<Vec<Vec<Coeff>>> = self
            .components
            .iter()
            .map(|c| c.pivot_columns(f).into_iter().map(|j| c.column(j)).collect())
            .collect();
        subtower(&self.target, &bases)
    }

    /// Slice-wise cokernel with induced structure maps.
    pub fn cokernel(&self) -> PersistenceTower {
        self.cokernel_with_projection().target
    }

    /// Cokernel tower together with the projection from the target.
    pub fn cokernel_with_projection(&self) -> TowerMorphism {
        let f = self.field();
        let n = self.components.len();
        let mut echelons = Vec::with_capacity(n);
        let mut dims = Vec::with_capacity(n);
        for c in &self.components {
            let mut e: Echelon<SparseVec> = Echelon::new(f);
            for j in 0..c.cols() {
                let _ = e.insert(c.column_sparse(j), SparseVec::new());
            }
            let mut k = 0;
            for i in 0..c.rows() {
                if e.insert(SparseVec::unit(i), SparseVec::unit(k)).is_ok() {
                    k += 1;
                }
            }
            echelons.push(e);
            dims.push(k);
        }
        // Class of a target vector in the quotient basis.
        let project = |slice: usize, v: &[Coeff]| -> Vec<Coeff> {
            let red = echelons[slice].reduce(SparseVec::from_dense(v));
            red.combination.to_dense(dims[slice])
        };
        let mut projections = Vec::with_capacity(n);
        for k in 0..n {
            let cols: Vec<Vec<Coeff>> = (0..self.target.dims()[k])
                .map(|i| {
                    let mut e = vec![0; self.target.dims()[k]];
                    e[i] = 1;
                    project(k, &e)
                })
                .collect();
            projections.push(Matrix::from_columns(dims[k], &cols));
        }
        let mut maps = Vec::with_capacity(n.saturating_sub(1));
        for k in 0..n.saturating_sub(1) {
            let j = self.target.start() + k as i64;
            // Lift each quotient basis vector to the target: the unit vectors
            // that survived the insertion, in insertion order.
            let lifts = quotient_lifts(&self.components[k], f);
            let t = self.target.map_at(j);
            let cols: Vec<Vec<Coeff>> = lifts.iter().map(|v| project(k + 1, &t.apply(v, f))).collect();
            maps.push(Matrix::from_columns(dims[k + 1], &cols));
        }
        let coker = PersistenceTower::new(f, self.target.start(), dims, maps)
            .expect("cokernel shapes are consistent");
        TowerMorphism { source: self.target.clone(), target: coker, components: projections }
    }
}

fn quotient_lifts(c: &Matrix, f: Prime) -> Vec<Vec<Coeff>> {
    let mut e: Echelon<()> = Echelon::new(f);
    for j in 0..c.cols() {
        let _ = e.insert(c.column_sparse(j), ());
    }
    (0..c.rows())
        .filter(|&i| e.insert(SparseVec::unit(i), ()).is_ok())
        .map(|i| {
            let mut v = vec![0; c.rows()];
            v[i] = 1;
            v
        })
        .collect()
}

/// Tower spanned slice-wise by `bases` inside `ambient`; the structure maps
/// of `ambient` must preserve the spans.
fn subtower(ambient: &PersistenceTower, bases: &[Vec<Vec<Coeff>>]) -> PersistenceTower {
    let f = ambient.field();
    let coords: Vec<Coordinates> = bases
        .iter()
        .map(|b| {
            let sparse: Vec<SparseVec> = b.iter().map(|v| SparseVec::from_dense(v)).collect();
            Coordinates::new(&sparse, f).expect("subspace basis is independent")
        })
        .collect();
    let mut maps = Vec::new();
    for k in 0..bases.len().saturating_sub(1) {
        let m = ambient.map_at(ambient.start() + k as i64);
        let cols: Vec<Vec<Coeff>> = bases[k]
            .iter()
            .map(|v| {
                coords[k + 1]
                    .of(&SparseVec::from_dense(&m.apply(v, f)))
                    .expect("structure map preserves the subspace")
            })
            .collect();
        maps.push(Matrix::from_columns(bases[k + 1].len(), &cols));
    }
    PersistenceTower::new(f, ambient.start(), bases.iter().map(Vec::len).collect(), maps)
        .expect("subtower shapes are consistent")
}

fn inclusion_morphism(sub: &PersistenceTower, ambient: &PersistenceTower, bases: &[Vec<Vec<Coeff>>]) -> TowerMorphism {
    let components = bases
        .iter()
        .zip(ambient.dims())
        .map(|(b, &d)| Matrix::from_columns(d, b))
        .collect();
    TowerMorphism { source: sub.clone(), target: ambient.clone(), components }
}

/// Homology `ker(outgoing) / im(incoming)` of a composable pair whose
/// composite is zero, with induced structure maps.
pub fn homology_at(incoming: &TowerMorphism, outgoing: &TowerMorphism) -> Result<PersistenceTower> {
    if incoming.target() != outgoing.source() {
        return Err(Error::Shape("morphisms are not composable".into()));
    }
    if !incoming.then(outgoing)?.is_zero() {
        return Err(Error::Parameter("composite is not zero".into()));
    }
    let f = incoming.field();
    let inclusion = outgoing.kernel_inclusion();
    let kernel = inclusion.source().clone();
    let mut components = Vec::with_capacity(kernel.dims().len());
    for (k, c) in incoming.components().iter().enumerate() {
        let basis: Vec<SparseVec> = (0..inclusion.components()[k].cols())
            .map(|i| inclusion.components()[k].column_sparse(i))
            .collect();
        let coords = Coordinates::new(&basis, f).expect("kernel basis is independent");
        let cols: Vec<Vec<Coeff>> = (0..c.cols())
            .map(|i| coords.of(&c.column_sparse(i)).expect("image lies in the kernel"))
            .collect();
        components.push(Matrix::from_columns(basis.len(), &cols));
    }
    let into_kernel = TowerMorphism::new(incoming.source().clone(), kernel, components)?;
    Ok(into_kernel.cokernel())
}

/// Basis of the space of morphisms `source -> target`, found by solving the
/// naturality equations over the union of the two windows.
pub fn morphism_space(source: &PersistenceTower, target: &PersistenceTower) -> Result<Vec<TowerMorphism>> {
    if source.field() != target.field() {
        return Err(Error::Shape("towers use different fields".into()));
    }
    let f = source.field();
    let lo = source.start().min(target.start());
    let hi = source.end().max(target.end());
    let s = source.with_window(lo, hi)?;
    let t = target.with_window(lo, hi)?;
    let n = s.dims().len();
    // Unknown offsets: component k occupies dims_t[k] * dims_s[k] entries.
    let mut offset = vec![0usize; n + 1];
    for k in 0..n {
        offset[k + 1] = offset[k] + s.dims()[k] * t.dims()[k];
    }
    let unknowns = offset[n];
    let var = |k: usize, r: usize, c: usize| offset[k] + r * s.dims()[k] + c;
    let mut rows: Vec<Vec<Coeff>> = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let j = lo + k as i64;
        let (sm, tm) = (s.map_at(j), t.map_at(j));
        // (T_j C_j - C_{j+1} S_j)[r][c] = 0
        for r in 0..t.dims()[k + 1] {
            for c in 0..s.dims()[k] {
                let mut row = vec![0; unknowns];
                for m in 0..t.dims()[k] {
                    let a = tm.get(r, m);
                    if a != 0 {
                        let v = var(k, m, c);
                        row[v] = f.add(row[v], a);
                    }
                }
                for m in 0..s.dims()[k + 1] {
                    let a = sm.get(m, c);
                    if a != 0 {
                        let v = var(k + 1, r, m);
                        row[v] = f.sub(row[v], a);
                    }
                }
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_rows(&rows, unknowns);
    let solutions = system.kernel(f);
    solutions
        .into_iter()
        .map(|x| {
            let components = (0..n)
                .map(|k| {
                    let mut m = Matrix::zeros(t.dims()[k], s.dims()[k]);
                    for r in 0..t.dims()[k] {
                        for c in 0..s.dims()[k] {
                            m.set(r, c, x[var(k, r, c)]);
                        }
                    }
                    m
                })
                .collect();
            TowerMorphism::new(s.clone(), t.clone(), components)
        })
        .collect()
}

/// Map `coker f -> coker h`, `[b] -> [g b]`, for `f: A -> B`, `h: C -> D`
/// and `g: B -> D` with `g(im f)` inside `im h`.
pub fn induced_on_cokernels(f: &TowerMorphism, h: &TowerMorphism, g: &TowerMorphism) -> Result<TowerMorphism> {
    if f.target() != g.source() || h.target() != g.target() {
        return Err(Error::Shape("maps do not form a square".into()));
    }
    let field = f.field();
    let into = h.cokernel_with_projection();
    if !f.then(g)?.then(&into)?.is_zero() {
        return Err(Error::Parameter("image of the first map does not land in the image of the second".into()));
    }
    let source = f.cokernel();
    let components = (0..f.components().len())
        .map(|k| {
            let cols: Vec<Vec<Coeff>> = quotient_lifts(&f.components()[k], field)
                .iter()
                .map(|v| into.components()[k].apply(&g.components()[k].apply(v, field), field))
                .collect();
            Matrix::from_columns(into.target().dims()[k], &cols)
        })
        .collect();
    TowerMorphism::new(source, into.target().clone(), components)
}

/// Map `ker f -> ker h`, `x -> g x`, for `f: A -> B`, `h: C -> D` and
/// `g: A -> C` with `g(ker f)` inside `ker h`.
pub fn induced_on_kernels(f: &TowerMorphism, h: &TowerMorphism, g: &TowerMorphism) -> Result<TowerMorphism> {
    if f.source() != g.source() || h.source() != g.target() {
        return Err(Error::Shape("maps do not form a square".into()));
    }
    let field = f.field();
    let from = f.kernel_inclusion();
    let into = h.kernel_inclusion();
    let mut components = Vec::with_capacity(f.components().len());
    for k in 0..f.components().len() {
        let basis: Vec<SparseVec> =
            (0..into.components()[k].cols()).map(|i| into.components()[k].column_sparse(i)).collect();
        let coords = Coordinates::new(&basis, field).expect("kernel basis is independent");
        let mut cols = Vec::with_capacity(from.components()[k].cols());
        for i in 0..from.components()[k].cols() {
            let image = g.components()[k].apply(&from.components()[k].column(i), field);
            let c = coords.of(&SparseVec::from_dense(&image)).ok_or_else(|| {
                Error::Parameter("kernel of the first map does not land in the kernel of the second".into())
            })?;
            cols.push(c);
        }
        components.push(Matrix::from_columns(basis.len(), &cols));
    }
    TowerMorphism::new(from.source().clone(), into.source().clone(), components)
}

/// Checks that `0 -> A --i--> B --g--> C -> 0` is exact at every slice.
pub fn verify_short_exact(i: &TowerMorphism, g: &TowerMorphism) -> Result<()> {
    if i.target() != g.source() {
        return Err(Error::Shape("middle terms differ".into()));
    }
    let f = i.field();
    if !i.is_injective() {
        return Err(Error::Parameter("first map is not injective".into()));
    }
    if !g.is_surjective() {
        return Err(Error::Parameter("second map is not surjective".into()));
    }
    if !i.then(g)?.is_zero() {
        return Err(Error::Parameter("composite is not zero".into()));
    }
    for (k, (a, b)) in i.components().iter().zip(g.components()).enumerate() {
        if a.rank(f) + b.rank(f) != b.cols() {
            return Err(Error::Parameter(format!(
                "not exact in the middle at slice {}",
                i.source().start() + k as i64
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcode::Interval;

    fn bars(start: i64, end: i64, bars: &[Interval]) -> PersistenceTower {
        PersistenceTower::from_intervals(Prime::TWO, start, end, bars).unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let m = bars(0, 5, &[Interval::finite(1, 4), Interval::essential(2)]);
        let id = TowerMorphism::identity(&m);
        assert!(id.kernel().is_zero());
        assert!(id.cokernel().is_zero());
        let z = TowerMorphism::zero(&m, &m).unwrap();
        assert_eq!(z.kernel().barcode(), m.barcode());
        assert_eq!(z.cokernel().barcode(), m.barcode());
        assert!(z.image().is_zero());
    }

    #[test]
    fn multiplication_by_t() {
        // [1,inf) -> [0,inf), the inclusion t k[t] -> k[t].
        let s = bars(0, 2, &[Interval::essential(1)]);
        let t = bars(0, 2, &[Interval::essential(0)]);
        let comps = vec![Matrix::zeros(1, 0), Matrix::identity(1), Matrix::identity(1)];
        let f = TowerMorphism::new(s, t, comps).unwrap();
        assert_eq!(f.cokernel().barcode(), vec![Interval::finite(0, 1)]);
        assert!(f.kernel().is_zero());
    }

    #[test]
    fn naturality_violation_names_slice() {
        let s = bars(0, 2, &[Interval::essential(0)]);
        let t = bars(0, 2, &[Interval::essential(0)]);
        let comps = vec![Matrix::identity(1), Matrix::zeros(1, 1), Matrix::zeros(1, 1)];
        assert_eq!(TowerMorphism::new(s, t, comps), Err(Error::Naturality { slice: 0 }));
    }

    #[test]
    fn no_morphism_from_short_to_long_bar() {
        let long = bars(0, 6, &[Interval::finite(0, 5)]);
        let short = bars(0, 6, &[Interval::finite(0, 3)]);
        assert!(morphism_space(&short, &long).unwrap().is_empty());
        assert_eq!(morphism_space(&long, &short).unwrap().len(), 1);
    }

    #[test]
    fn exact_sequence_from_quotient() {
        let long = bars(0, 6, &[Interval::finite(0, 5)]);
        let short = bars(0, 6, &[Interval::finite(0, 3)]);
        let g = morphism_space(&long, &short).unwrap().remove(0);
        let k = g.kernel_inclusion();
        verify_short_exact(&k, &g).unwrap();
        assert_eq!(k.source().barcode(), vec![Interval::finite(3, 5)]);
    }
}
