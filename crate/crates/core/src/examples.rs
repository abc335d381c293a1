//! Two families of filtered covers on which the nerve bounds are attained.
//!
//! * [`sphere_example`]: the boundary of the `(D+1)`-simplex on `[0, D+1]`,
//!   covered by its facets `U_i` (the faces missing `i`), filled in one
//!   facet at a time: `X^{2j} = U_0 ∪ ... ∪ U_j`.
//! * [`bipyramid_example`]: two cones with apices `D+2`, `D+3` over the
//!   `D`-simplex `[1, D+1]` subdivided at an interior vertex `0`. The
//!   boundary `A` (simplices avoiding `0`) is present from `-2D`, and
//!   `X^{2j} = A ∪ U_0 ∪ ... ∪ U_j`.

use std::collections::BTreeMap;

use crate::complex::{induced_cover, FilteredComplex, FilteredCover, Simplex, Vertex};
use crate::error::{Error, Result};

/// Nonempty subsets of `vertices` (sorted) accepted by `keep`.
fn subsets(vertices: &[Vertex], keep: impl Fn(&[Vertex]) -> bool) -> Vec<Simplex> {
    let n = vertices.len();
    (1u64..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).map(|i| vertices[i]).collect::<Vec<_>>())
        .filter(|s| keep(s))
        .map(Simplex::from_sorted)
        .collect()
}

fn cover_of(ambient: &FilteredComplex, members: Vec<(String, Vec<&Simplex>)>) -> Result<FilteredCover> {
    induced_cover(
        ambient,
        members
            .into_iter()
            .map(|(name, simplices)| (name, simplices.into_iter().map(|s| s.vertices().to_vec()).collect()))
            .collect(),
    )
}

/// Sphere example of dimension `dim >= 0`.
pub fn sphere_example(dim: usize) -> Result<FilteredCover> {
    if dim > 12 {
        return Err(Error::Parameter(format!("dimension {dim} is too large")));
    }
    let top = dim as Vertex + 1;
    let vertices: Vec<Vertex> = (0..=top).collect();
    let simplices = subsets(&vertices, |s| s.len() < vertices.len());
    let births: BTreeMap<Simplex, i64> = simplices
        .iter()
        .map(|s| {
            let first_missing = (0..=top).find(|i| !s.vertices().contains(i)).unwrap();
            (s.clone(), 2 * first_missing as i64)
        })
        .collect();
    let ambient = FilteredComplex::from_map(births);
    let members = (0..=top)
        .map(|i| {
            let faces = simplices.iter().filter(|s| !s.vertices().contains(&i)).collect();
            (format!("U{i}"), faces)
        })
        .collect();
    cover_of(&ambient, members)
}

/// Bipyramid example of dimension `dim >= 1`.
pub fn bipyramid_example(dim: usize) -> Result<FilteredCover> {
    if dim == 0 {
        return Err(Error::Parameter("the bipyramid example needs dimension at least 1".into()));
    }
    if dim > 10 {
        return Err(Error::Parameter(format!("dimension {dim} is too large")));
    }
    let d = dim as Vertex;
    let (apex_low, apex_high) = (d + 2, d + 3);
    let vertices: Vec<Vertex> = (0..=d + 3).collect();
    let simplices = subsets(&vertices, |s| {
        let base = (1..=d + 1).all(|v| s.contains(&v));
        let apices = s.contains(&apex_low) && s.contains(&apex_high);
        !base && !apices
    });
    let in_member = |s: &Simplex, i: Vertex| -> bool {
        if i == 0 {
            !s.vertices().contains(&apex_low)
        } else {
            !s.vertices().contains(&i) && !s.vertices().contains(&apex_high)
        }
    };
    let births: BTreeMap<Simplex, i64> = simplices
        .iter()
        .map(|s| {
            let b = if s.vertices().contains(&0) {
                let j = (0..=d + 1).find(|&i| in_member(s, i)).expect("simplex lies in some member");
                2 * j as i64
            } else {
                -2 * dim as i64
            };
            (s.clone(), b)
        })
        .collect();
    let ambient = FilteredComplex::from_map(births);
    let members = (0..=d + 1)
        .map(|i| {
            let faces = simplices.iter().filter(|s| in_member(s, i)).collect();
            (format!("U{i}"), faces)
        })
        .collect();
    cover_of(&ambient, members)
}
