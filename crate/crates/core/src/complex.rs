//! Integer-filtered simplicial complexes and filtered covers.
//!
//! A [`FilteredComplex`] stores each simplex with its birth degree; the slice
//! at degree `j` is the subcomplex of simplices born at or before `j`.
//! Vertices are ordered by identifier, which fixes boundary orientations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// A simplex as a strictly increasing list of vertices.
///
/// Ordered by dimension first, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Sorts the vertices; rejects empty input and repeated vertices.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptySimplex);
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::RepeatedVertex(Simplex(vertices)));
        }
        Ok(Simplex(vertices))
    }

    /// Caller guarantees `vertices` is nonempty and strictly increasing.
    pub(crate) fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces; face `k` omits the `k`-th vertex.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (0..if n > 1 { n } else { 0 }).map(move |k| {
            let mut v = self.0.clone();
            v.remove(k);
            Simplex(v)
        })
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        assert!(n < 31, "simplex too large to enumerate faces");
        (1u32..(1 << n)).map(move |mask| {
            Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect())
        })
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Simplicial complex with an integer birth degree per simplex.
///
/// Invariants: face-closed, and births are monotone along faces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FilteredComplex {
    simplices: BTreeMap<Simplex, i64>,
}

impl FilteredComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a complex from explicit `(vertices, birth)` records.
    ///
    /// Missing faces are added with the smallest birth among their listed
    /// cofaces. A listed face born after a listed coface is rejected, as is a
    /// simplex listed twice with different births.
    pub fn build<I>(records: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<Vertex>, i64)>,
    {
        let mut explicit: BTreeMap<Simplex, i64> = BTreeMap::new();
        for (verts, birth) in records {
            let s = Simplex::new(verts)?;
            if let Some(&prev) = explicit.get(&s) {
                if prev != birth {
                    return Err(Error::ConflictingBirth { simplex: s, first: prev, second: birth });
                }
            }
            explicit.insert(s, birth);
        }
        Self::close(explicit)
    }

    fn close(explicit: BTreeMap<Simplex, i64>) -> Result<Self> {
        let mut implied: BTreeMap<Simplex, i64> = BTreeMap::new();
        for (s, &b) in &explicit {
            for face in s.faces() {
                if &face == s {
                    continue;
                }
                if let Some(&fb) = explicit.get(&face) {
                    if fb > b {
                        return Err(Error::Monotonicity {
                            face,
                            face_birth: fb,
                            coface: s.clone(),
                            coface_birth: b,
                        });
                    }
                } else {
                    let e = implied.entry(face).or_insert(b);
                    *e = (*e).min(b);
                }
            }
        }
        let mut simplices = explicit;
        simplices.extend(implied);
        Ok(FilteredComplex { simplices })
    }

    /// Trusted constructor; the map must already be face-closed and monotone.
    pub(crate) fn from_map(simplices: BTreeMap<Simplex, i64>) -> Self {
        let c = FilteredComplex { simplices };
        debug_assert!(c.validate().is_ok());
        c
    }

    /// Re-checks face closure and monotonicity.
    pub fn validate(&self) -> Result<()> {
        for (s, &b) in &self.simplices {
            for face in s.facets() {
                match self.simplices.get(&face) {
                    None => {
                        return Err(Error::Internal(format!("face {face} of {s} missing")));
                    }
                    Some(&fb) if fb > b => {
                        return Err(Error::Monotonicity {
                            face,
                            face_birth: fb,
                            coface: s.clone(),
                            coface_birth: b,
                        });
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Largest simplex dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.keys().next_back().map(Simplex::dim)
    }

    pub fn birth(&self, s: &Simplex) -> Option<i64> {
        self.simplices.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains_key(s)
    }

    /// Simplices in (dimension, lexicographic) order with their births.
    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, i64)> {
        self.simplices.iter().map(|(s, &b)| (s, b))
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.keys()
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.simplices.keys().filter(|s| s.dim() == 0).map(|s| s.0[0]).collect()
    }

    /// Simplices present in the slice at degree `j`.
    pub fn slice(&self, j: i64) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().filter(move |(_, &b)| b <= j).map(|(s, _)| s)
    }

    pub fn count(&self, dim: usize, j: i64) -> usize {
        self.simplices.iter().filter(|(s, &b)| s.dim() == dim && b <= j).count()
    }

    pub fn min_birth(&self) -> Option<i64> {
        self.simplices.values().min().copied()
    }

    pub fn max_birth(&self) -> Option<i64> {
        self.simplices.values().max().copied()
    }

    /// Common simplices, born at the later of the two births.
    pub fn intersect(&self, other: &FilteredComplex) -> FilteredComplex {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let simplices = small
            .simplices
            .iter()
            .filter_map(|(s, &b)| large.birth(s).map(|b2| (s.clone(), b.max(b2))))
            .collect();
        FilteredComplex { simplices }
    }

    /// Same simplices with births replaced by `f(simplex)`.
    pub fn refiltered(&self, f: impl Fn(&Simplex) -> i64) -> Result<FilteredComplex> {
        let simplices = self.simplices.keys().map(|s| (s.clone(), f(s))).collect();
        let c = FilteredComplex { simplices };
        c.validate()?;
        Ok(c)
    }

    /// Translates every birth by `delta`.
    pub fn shifted(&self, delta: i64) -> FilteredComplex {
        FilteredComplex {
            simplices: self.simplices.iter().map(|(s, &b)| (s.clone(), b + delta)).collect(),
        }
    }
}

/// Lower-star filtration: each simplex is born at the largest value of its
/// vertices. `simplices` is face-closed automatically.
pub fn lower_star<I>(simplices: I, values: &BTreeMap<Vertex, i64>) -> Result<FilteredComplex>
where
    I: IntoIterator<Item = Vec<Vertex>>,
{
    let mut map = BTreeMap::new();
    for verts in simplices {
        let s = Simplex::new(verts)?;
        for face in s.faces() {
            if map.contains_key(&face) {
                continue;
            }
            let mut birth = i64::MIN;
            for v in face.vertices() {
                let val = *values.get(v).ok_or(Error::MissingVertexValue(*v))?;
                birth = birth.max(val);
            }
            map.insert(face, birth);
        }
    }
    Ok(FilteredComplex::from_map(map))
}

/// Uniform grid `origin + k * epsilon` used to discretize real-valued births.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridMap {
    epsilon: Ratio<i64>,
    origin: Ratio<i64>,
}

impl GridMap {
    pub fn new(epsilon: Ratio<i64>) -> Result<Self> {
        Self::with_origin(epsilon, Ratio::from_integer(0))
    }

    pub fn with_origin(epsilon: Ratio<i64>, origin: Ratio<i64>) -> Result<Self> {
        if epsilon <= Ratio::from_integer(0) {
            return Err(Error::NonPositiveGrid);
        }
        Ok(GridMap { epsilon, origin })
    }

    pub fn epsilon(&self) -> Ratio<i64> {
        self.epsilon
    }

    /// `floor((r - origin) / epsilon)`
    pub fn index(&self, r: Ratio<i64>) -> i64 {
        ((r - self.origin) / self.epsilon).floor().to_integer()
    }
}

/// Snaps real births onto the grid by flooring.
pub fn discretize<I>(births: I, grid: &GridMap) -> Result<FilteredComplex>
where
    I: IntoIterator<Item = (Vec<Vertex>, Ratio<i64>)>,
{
    let records: Vec<(Vec<Vertex>, i64)> =
        births.into_iter().map(|(v, r)| (v, grid.index(r))).collect();
    FilteredComplex::build(records)
}

/// Parses a decimal such as `-2.75` or a fraction such as `11/4` exactly.
pub fn parse_rational(text: &str) -> Option<Ratio<i64>> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        return (d != 0).then(|| Ratio::new(n, d));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let int_val: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let frac_val: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let denom = 10i64.checked_pow(frac.len() as u32)?;
    let num = int_val.checked_mul(denom)?.checked_add(frac_val)?;
    Some(Ratio::new(if neg { -num } else { num }, denom))
}

/// One indexed element of a cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub name: String,
    pub complex: FilteredComplex,
}

/// Indexed family of filtered subcomplexes whose slice-wise union is the
/// ambient slice. The index order is the declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredCover {
    ambient: FilteredComplex,
    members: Vec<Member>,
}

impl FilteredCover {
    /// Validates that each member is a subcomplex of `ambient` and that every
    /// ambient birth is the minimum of the member births.
    pub fn new(ambient: FilteredComplex, members: Vec<Member>) -> Result<Self> {
        let cover = FilteredCover { ambient, members };
        cover.check_compatibility()?;
        Ok(cover)
    }

    /// Cover of the union of `members`, whose births follow the min rule.
    pub fn from_members(members: Vec<Member>) -> Result<Self> {
        let mut ambient: BTreeMap<Simplex, i64> = BTreeMap::new();
        for m in &members {
            m.complex.validate()?;
            for (s, b) in m.complex.iter() {
                let e = ambient.entry(s.clone()).or_insert(b);
                *e = (*e).min(b);
            }
        }
        Self::new(FilteredComplex::from_map(ambient), members)
    }

    /// Re-verifies the subcomplex and min-rule invariants.
    pub fn check_compatibility(&self) -> Result<()> {
        let mut min_birth: BTreeMap<&Simplex, i64> = BTreeMap::new();
        for m in &self.members {
            m.complex.validate()?;
            for (s, b) in m.complex.iter() {
                if !self.ambient.contains(s) {
                    return Err(Error::NotSubcomplex { member: m.name.clone(), simplex: s.clone() });
                }
                let e = min_birth.entry(s).or_insert(b);
                *e = (*e).min(b);
            }
        }
        let uncovered: Vec<Simplex> =
            self.ambient.simplices().filter(|s| !min_birth.contains_key(s)).cloned().collect();
        if !uncovered.is_empty() {
            return Err(Error::Uncovered(uncovered));
        }
        for (s, b) in self.ambient.iter() {
            let m = min_birth[s];
            if m != b {
                return Err(Error::IncompatibleCover { simplex: s.clone(), ambient: b, members: m });
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> &FilteredComplex {
        &self.ambient
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Intersection of the members at positions `indices`, each simplex born
    /// at the latest of its member births. Possibly empty.
    pub fn intersection(&self, indices: &[usize]) -> Result<FilteredComplex> {
        if indices.is_empty() {
            return Err(Error::IndexSet("empty index set".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.members.len()) {
            return Err(Error::IndexSet(format!(
                "index {bad} out of range for a cover with {} members",
                self.members.len()
            )));
        }
        let mut acc = self.members[indices[0]].complex.clone();
        for &i in &indices[1..] {
            if acc.is_empty() {
                break;
            }
            acc = acc.intersect(&self.members[i].complex);
        }
        Ok(acc)
    }
}

/// Cover whose members carry the ambient filtration restricted to the given
/// simplex sets. Each set is closed under faces before use.
pub fn induced_cover(
    ambient: &FilteredComplex,
    assignment: Vec<(String, Vec<Vec<Vertex>>)>,
) -> Result<FilteredCover> {
    let mut members = Vec::with_capacity(assignment.len());
    for (name, simplices) in assignment {
        let mut map = BTreeMap::new();
        for verts in simplices {
            let s = Simplex::new(verts)?;
            for face in s.faces() {
                if map.contains_key(&face) {
                    continue;
                }
                let b = ambient
                    .birth(&face)
                    .ok_or_else(|| Error::NotSubcomplex { member: name.clone(), simplex: face.clone() })?;
                map.insert(face, b);
            }
        }
        members.push(Member { name, complex: FilteredComplex::from_map(map) });
    }
    FilteredCover::new(ambient.clone(), members)
}

/// Full subcomplex of `complex` spanned by `vertices`.
pub fn full_subcomplex(complex: &FilteredComplex, vertices: &BTreeSet<Vertex>) -> FilteredComplex {
    let simplices = complex
        .iter()
        .filter(|(s, _)| s.vertices().iter().all(|v| vertices.contains(v)))
        .map(|(s, b)| (s.clone(), b))
        .collect();
    FilteredComplex { simplices }
}
