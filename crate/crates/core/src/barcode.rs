//! Barcodes: per-degree multisets of half-open integer intervals.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

/// Right endpoint of an interval. `Finite(d) < Infinite` for every `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Death {
    Finite(i64),
    Infinite,
}

/// Half-open interval `[birth, death)`; the module `t^b k[t] / t^d k[t]`, or
/// `t^b k[t]` when the death is infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub birth: i64,
    pub death: Death,
}

impl Interval {
    /// Panics unless `birth < death`.
    pub fn finite(birth: i64, death: i64) -> Self {
        assert!(birth < death, "empty interval [{birth},{death})");
        Interval { birth, death: Death::Finite(death) }
    }

    pub fn essential(birth: i64) -> Self {
        Interval { birth, death: Death::Infinite }
    }

    pub fn is_essential(&self) -> bool {
        self.death == Death::Infinite
    }

    /// `death - birth`, or `None` for essential intervals.
    pub fn length(&self) -> Option<i64> {
        match self.death {
            Death::Finite(d) => Some(d - self.birth),
            Death::Infinite => None,
        }
    }

    pub fn contains(&self, j: i64) -> bool {
        j >= self.birth
            && match self.death {
                Death::Finite(d) => j < d,
                Death::Infinite => true,
            }
    }

    pub fn shifted(&self, delta: i64) -> Interval {
        Interval {
            birth: self.birth + delta,
            death: match self.death {
                Death::Finite(d) => Death::Finite(d + delta),
                Death::Infinite => Death::Infinite,
            },
        }
    }

    pub fn to_json(&self) -> Value {
        match self.death {
            Death::Finite(d) => json!([self.birth, d]),
            Death::Infinite => json!([self.birth, "inf"]),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.death {
            Death::Finite(d) => write!(f, "[{},{})", self.birth, d),
            Death::Infinite => write!(f, "[{},inf)", self.birth),
        }
    }
}

/// Per-degree interval multisets, kept sorted so that equality is multiset
/// equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Barcode {
    degrees: BTreeMap<usize, Vec<Interval>>,
}

impl Barcode {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_degrees<I>(degrees: I) -> Self
    where
        I: IntoIterator<Item = (usize, Vec<Interval>)>,
    {
        let mut b = Barcode::new();
        for (q, bars) in degrees {
            b.extend(q, bars);
        }
        b
    }

    pub fn push(&mut self, degree: usize, interval: Interval) {
        self.extend(degree, [interval]);
    }

    pub fn extend(&mut self, degree: usize, intervals: impl IntoIterator<Item = Interval>) {
        let bars = self.degrees.entry(degree).or_default();
        bars.extend(intervals);
        bars.sort_unstable();
        if bars.is_empty() {
            self.degrees.remove(&degree);
        }
    }

    /// Intervals in degree `q`, sorted by `(birth, death)`.
    pub fn degree(&self, q: usize) -> &[Interval] {
        self.degrees.get(&q).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Highest degree with a nonempty multiset.
    pub fn max_degree(&self) -> Option<usize> {
        self.degrees.keys().next_back().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[Interval])> {
        self.degrees.iter().map(|(&q, v)| (q, v.as_slice()))
    }

    /// Betti number of the slice at `j` in degree `q`.
    pub fn rank_at(&self, q: usize, j: i64) -> usize {
        self.degree(q).iter().filter(|i| i.contains(j)).count()
    }

    /// Drops degrees above `max_degree`.
    pub fn truncated(&self, max_degree: usize) -> Barcode {
        Barcode {
            degrees: self
                .degrees
                .iter()
                .filter(|(&q, _)| q <= max_degree)
                .map(|(&q, v)| (q, v.clone()))
                .collect(),
        }
    }

    /// `{ "q": [[b, d | "inf"], ...], ... }`
    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .degrees
            .iter()
            .map(|(q, bars)| (q.to_string(), Value::Array(bars.iter().map(Interval::to_json).collect())))
            .collect();
        Value::Object(map)
    }

    /// One line per interval: `degree birth death`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (q, bars) in &self.degrees {
            for bar in bars {
                match bar.death {
                    Death::Finite(d) => out.push_str(&format!("{q} {} {d}\n", bar.birth)),
                    Death::Infinite => out.push_str(&format!("{q} {} inf\n", bar.birth)),
                }
            }
        }
        out
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degrees.is_empty() {
            return write!(f, "(empty)");
        }
        for (i, (q, bars)) in self.degrees.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "H{q}:")?;
            for b in bars {
                write!(f, " {b}")?;
            }
        }
        Ok(())
    }
}
