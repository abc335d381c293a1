//! Nerves of filtered covers and the ε-acyclicity of a cover.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::complex::{FilteredComplex, FilteredCover, Simplex, Vertex};
use crate::distance::{point_distance, HalfGrid, PointDistance};
use crate::field::Prime;
use crate::persistence::barcode;

/// How a nerve simplex gets its birth from the intersection it stands for.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NerveStrategy {
    /// First slice at which the intersection is nonempty.
    #[default]
    FirstNonempty,
    /// Latest birth among the simplices of the intersection, raised to the
    /// births of the nerve faces so that the result stays monotone.
    Max,
}

/// Nerve of a cover: vertex `i` is the `i`-th member in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveComplex {
    complex: FilteredComplex,
    /// Intersection of the members indexed by each nerve simplex.
    provenance: BTreeMap<Simplex, FilteredComplex>,
    names: Vec<String>,
}

impl NerveComplex {
    pub fn complex(&self) -> &FilteredComplex {
        &self.complex
    }

    pub fn provenance(&self) -> &BTreeMap<Simplex, FilteredComplex> {
        &self.provenance
    }

    pub fn intersection(&self, simplex: &Simplex) -> Option<&FilteredComplex> {
        self.provenance.get(simplex)
    }

    /// Member names, indexed by nerve vertex.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dim(&self) -> Option<usize> {
        self.complex.dim()
    }
}

/// Nerve of `cover`, keeping index sets of at most `max_card` members.
pub fn nerve(cover: &FilteredCover, max_card: Option<usize>, strategy: NerveStrategy) -> NerveComplex {
    let cap = max_card.unwrap_or(usize::MAX);
    let mut found: BTreeMap<Simplex, FilteredComplex> = BTreeMap::new();
    let members = cover.members();
    // Depth-first over increasing index lists; an empty intersection prunes
    // every superset.
    let mut stack: Vec<(Vec<usize>, FilteredComplex)> = members
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, m)| !m.complex.is_empty())
        .map(|(i, m)| (vec![i], m.complex.clone()))
        .collect();
    while let Some((set, inter)) = stack.pop() {
        if set.len() < cap {
            let last = *set.last().unwrap();
            for k in (last + 1..members.len()).rev() {
                let next = inter.intersect(&members[k].complex);
                if !next.is_empty() {
                    let mut s = set.clone();
                    s.push(k);
                    stack.push((s, next));
                }
            }
        }
        let verts: Vec<Vertex> = set.iter().map(|&i| i as Vertex).collect();
        found.insert(Simplex::new(verts).expect("index sets are strictly increasing"), inter);
    }
    let mut births: BTreeMap<Simplex, i64> = BTreeMap::new();
    // Simplex order is by size first, so faces come before cofaces.
    for (s, inter) in &found {
        let b = match strategy {
            NerveStrategy::FirstNonempty => inter.min_birth().unwrap(),
            NerveStrategy::Max => {
                let own = inter.max_birth().unwrap();
                s.facets().map(|f| births[&f]).fold(own, i64::max)
            }
        };
        births.insert(s.clone(), b);
    }
    let complex = FilteredComplex::from_map(births);
    NerveComplex {
        complex,
        provenance: found,
        names: members.iter().map(|m| m.name.clone()).collect(),
    }
}

/// Per-intersection distances to a point, and the dimensions that enter the
/// nerve bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicityReport {
    pub entries: Vec<(Simplex, PointDistance)>,
    /// Largest distance over all nerve simplices.
    pub epsilon: HalfGrid,
    /// Dimension of the nerve.
    pub nerve_dim: usize,
    /// Dimension of the ambient complex.
    pub ambient_dim: usize,
}

impl AcyclicityReport {
    /// `min(nerve_dim, ambient_dim)`
    pub fn q(&self) -> usize {
        self.nerve_dim.min(self.ambient_dim)
    }

    pub fn to_json(&self, names: &[String]) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(s, pd)| {
                json!({
                    "members": s.vertices().iter().map(|&i| names[i as usize].clone()).collect::<Vec<_>>(),
                    "epsilon_doubled": pd.epsilon.to_json(),
                    "apex": pd.apex,
                    "reason": pd.reason,
                })
            })
            .collect();
        json!({
            "epsilon_doubled": self.epsilon.to_json(),
            "epsilon": self.epsilon.to_string(),
            "units": "doubled-grid-steps",
            "nerve_dim": self.nerve_dim,
            "ambient_dim": self.ambient_dim,
            "q": self.q(),
            "intersections": entries,
        })
    }
}

/// Measures how far every intersection of the cover is from a point.
pub fn acyclicity(cover: &FilteredCover, nerve: &NerveComplex, field: Prime) -> AcyclicityReport {
    let list: Vec<(&Simplex, &FilteredComplex)> = nerve.provenance().iter().collect();
    let entries: Vec<(Simplex, PointDistance)> = list
        .par_iter()
        .map(|(s, inter)| {
            let top = inter.dim().unwrap_or(0);
            (Simplex::clone(s), point_distance(&barcode(inter, top, field)))
        })
        .collect();
    let epsilon = entries.iter().map(|(_, pd)| pd.epsilon).max().unwrap_or(HalfGrid::ZERO);
    AcyclicityReport {
        entries,
        epsilon,
        nerve_dim: nerve.dim().unwrap_or(0),
        ambient_dim: cover.ambient().dim().unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::induced_cover;

    #[test]
    fn disjoint_members() {
        let amb = FilteredComplex::build([(vec![0, 1], 0), (vec![2, 3], 1)]).unwrap();
        let cover = induced_cover(&amb, vec![("a".into(), vec![vec![0, 1]]), ("b".into(), vec![vec![2, 3]])])
            .unwrap();
        let n = nerve(&cover, None, NerveStrategy::FirstNonempty);
        assert_eq!(n.complex().len(), 2);
        assert_eq!(n.dim(), Some(0));
        assert_eq!(n.complex().birth(&Simplex::new(vec![1]).unwrap()), Some(1));
    }

    #[test]
    fn strategies_and_cap() {
        // Path 0-1-2 covered by its two edges, overlapping at vertex 1.
        let amb = FilteredComplex::build([(vec![0, 1], 5), (vec![1, 2], 7), (vec![1], 2)]).unwrap();
        let cover = induced_cover(&amb, vec![("a".into(), vec![vec![0, 1]]), ("b".into(), vec![vec![1, 2]])])
            .unwrap();
        let edge = Simplex::new(vec![0, 1]).unwrap();
        let n = nerve(&cover, None, NerveStrategy::FirstNonempty);
        assert_eq!(n.complex().birth(&edge), Some(2));
        let m = nerve(&cover, None, NerveStrategy::Max);
        assert_eq!(m.complex().birth(&edge), Some(7));
        m.complex().validate().unwrap();
        let capped = nerve(&cover, Some(1), NerveStrategy::FirstNonempty);
        assert_eq!(capped.dim(), Some(0));
        let report = acyclicity(&cover, &n, Prime::TWO);
        assert_eq!(report.epsilon, HalfGrid::ZERO);
        assert_eq!(report.q(), 1);
    }
}
