//! Persistence modules over a finite window of the integer grid.
//!
//! A [`PersistenceTower`] with window `[start, end]` stands for the graded
//! `k[t]`-module that is zero below `start`, has the stored spaces and
//! structure maps inside the window, and is constant (identity maps) from
//! `end` on.

use crate::barcode::{Death, Interval};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersistenceTower {
    field: Prime,
    start: i64,
    dims: Vec<usize>,
    /// `maps[k]` goes from slice `start + k` to `start + k + 1`.
    maps: Vec<Matrix>,
}

impl PersistenceTower {
    pub fn new(field: Prime, start: i64, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Shape("tower window must contain at least one slice".into()));
        }
        if maps.len() + 1 != dims.len() {
            return Err(Error::Shape(format!(
                "{} slices need {} maps, got {}",
                dims.len(),
                dims.len() - 1,
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.cols() != dims[k] || m.rows() != dims[k + 1] {
                return Err(Error::Shape(format!(
                    "map at slice {} is {}x{}, expected {}x{}",
                    start + k as i64,
                    m.rows(),
                    m.cols(),
                    dims[k + 1],
                    dims[k]
                )));
            }
        }
        Ok(PersistenceTower { field, start, dims, maps })
    }

    pub fn zero(field: Prime, start: i64, end: i64) -> Self {
        let len = (end - start + 1).max(1) as usize;
        PersistenceTower {
            field,
            start,
            dims: vec![0; len],
            maps: vec![Matrix::zeros(0, 0); len - 1],
        }
    }

    /// Direct sum of interval modules, one basis vector per interval.
    /// Every finite death must lie in `(start, end]` and every birth in
    /// `[start, end]`.
    pub fn from_intervals(field: Prime, start: i64, end: i64, intervals: &[Interval]) -> Result<Self> {
        for iv in intervals {
            let ok_death = match iv.death {
                Death::Finite(d) => d <= end,
                Death::Infinite => true,
            };
            if iv.birth < start || iv.birth > end || !ok_death {
                return Err(Error::Shape(format!("interval {iv} outside window [{start},{end}]")));
            }
        }
        let len = (end - start + 1) as usize;
        let alive: Vec<Vec<usize>> = (0..len)
            .map(|k| {
                let j = start + k as i64;
                (0..intervals.len()).filter(|&i| intervals[i].contains(j)).collect()
            })
            .collect();
        let dims = alive.iter().map(Vec::len).collect();
        let maps = (0..len - 1)
            .map(|k| {
                let mut m = Matrix::zeros(alive[k + 1].len(), alive[k].len());
                for (c, i) in alive[k].iter().enumerate() {
                    if let Some(r) = alive[k + 1].iter().position(|x| x == i) {
                        m.set(r, c, 1);
                    }
                }
                m
            })
            .collect();
        PersistenceTower::new(field, start, dims, maps)
    }

    pub fn field(&self) -> Prime {
        self.field
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.dims.len() as i64 - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn dim_at(&self, j: i64) -> usize {
        if j < self.start {
            0
        } else if j > self.end() {
            *self.dims.last().unwrap()
        } else {
            self.dims[(j - self.start) as usize]
        }
    }

    /// Structure map from slice `j` to slice `j + 1`.
    pub fn map_at(&self, j: i64) -> Matrix {
        if j < self.start {
            Matrix::zeros(self.dim_at(j + 1), 0)
        } else if j >= self.end() {
            Matrix::identity(self.dim_at(j))
        } else {
            self.maps[(j - self.start) as usize].clone()
        }
    }

    /// Composite structure map from slice `a` to slice `b >= a`.
    pub fn transition(&self, a: i64, b: i64) -> Matrix {
        assert!(a <= b);
        let mut acc = Matrix::identity(self.dim_at(a));
        for j in a..b {
            acc = self.map_at(j).mul(&acc, self.field);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// The same module stored over a larger window `[lo, hi]`.
    pub fn with_window(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo > self.start || hi < self.end() {
            if lo > self.start && (self.start..lo).any(|j| self.dim_at(j) != 0) {
                return Err(Error::Shape(format!("window [{lo},{hi}] drops nonzero slices")));
            }
            if hi < self.end() {
                // Shrinking from above is only valid when the tail is constant.
                for j in hi..self.end() {
                    let m = self.map_at(j);
                    if m.rows() != m.cols() || m != Matrix::identity(m.rows()) {
                        return Err(Error::Shape(format!("window [{lo},{hi}] truncates a non-constant tail")));
                    }
                }
            }
        }
        let dims: Vec<usize> = (lo..=hi).map(|j| self.dim_at(j)).collect();
        let maps = (lo..hi).map(|j| self.map_at(j)).collect();
        PersistenceTower::new(self.field, lo, dims, maps)
    }

    /// `M(eps)^j = M^(j + eps)`: intervals move by `-eps`.
    pub fn shift(&self, eps: i64) -> PersistenceTower {
        PersistenceTower { start: self.start - eps, ..self.clone() }
    }

    /// Interval decomposition, via the rank invariant of composite maps.
    ///
    /// The multiplicity of `[b, d)` is
    /// `r(b, d-1) - r(b-1, d-1) - r(b, d) + r(b-1, d)`.
    pub fn barcode(&self) -> Vec<Interval> {
        let n = self.dims.len();
        // rank[a][b] = rank of the composite from window slot a to slot b.
        let mut rank = vec![vec![0usize; n]; n];
        for a in 0..n {
            let mut acc = Matrix::identity(self.dims[a]);
            rank[a][a] = self.dims[a];
            for b in a + 1..n {
                acc = self.maps[b - 1].mul(&acc, self.field);
                rank[a][b] = acc.rank(self.field);
            }
        }
        let r = |a: isize, b: isize| -> usize {
            if a < 0 || b < a {
                0
            } else {
                rank[a as usize][b as usize]
            }
        };
        let mut out = Vec::new();
        for b in 0..n as isize {
            for d in b + 1..n as isize {
                let m = r(b, d - 1) + r(b - 1, d) - r(b - 1, d - 1) - r(b, d);
                for _ in 0..m {
                    out.push(Interval::finite(self.start + b as i64, self.start + d as i64));
                }
            }
            let m = r(b, n as isize - 1) - r(b - 1, n as isize - 1);
            for _ in 0..m {
                out.push(Interval::essential(self.start + b as i64));
            }
        }
        out.sort_unstable();
        out
    }
}

/// Interval decomposition of a single-degree tower.
pub fn barcode_of_tower(tower: &PersistenceTower) -> Vec<Interval> {
    tower.barcode()
}
