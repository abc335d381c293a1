//! Plain-text complexes and covers.
//!
//! ```text
//! # comment, also allowed after a record
//! grid 0.5             # optional: births below are real and floored onto this grid
//! simplex 0 1 2 3      # vertices 0 1 2, born at 3
//! cover left           # starts the member named `left`
//! simplex 0 1 3
//! ```
//!
//! A complex file holds `simplex` lines only; missing faces are added with
//! the smallest birth among their listed cofaces. In a cover file, `simplex`
//! lines before the first `cover` header describe the ambient complex; if
//! there are none, the ambient complex is the union of the members with the
//! earliest member birth of each simplex. Births are integers unless a grid
//! is in effect, in which case decimals (`-2.75`) and fractions (`11/4`) are
//! accepted. A grid given by the caller overrides a `grid` line.

use std::fmt::Write as _;
use std::path::Path;

use num_rational::Ratio;

use crate::complex::{discretize, parse_rational, FilteredComplex, FilteredCover, GridMap, Member, Vertex};
use crate::error::{Error, Result};

type Record = (Vec<Vertex>, Ratio<i64>);

enum Line {
    Simplex(Record),
    Cover(String),
    Grid(GridMap),
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

fn parse_line(number: usize, text: &str) -> Result<Option<Line>> {
    let body = text.split('#').next().unwrap_or("");
    let tokens: Vec<&str> = body.split_whitespace().collect();
    let Some((&keyword, rest)) = tokens.split_first() else {
        return Ok(None);
    };
    match keyword {
        "simplex" => {
            if rest.len() < 2 {
                return Err(syntax(number, "expected `simplex v0 ... vk birth`"));
            }
            let (birth, verts) = rest.split_last().unwrap();
            let vertices = verts
                .iter()
                .map(|t| t.parse::<Vertex>().map_err(|_| syntax(number, format!("bad vertex `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            let birth = parse_rational(birth).ok_or_else(|| syntax(number, format!("bad birth `{birth}`")))?;
            Ok(Some(Line::Simplex((vertices, birth))))
        }
        "cover" => match rest {
            [name] => Ok(Some(Line::Cover(name.to_string()))),
            _ => Err(syntax(number, "expected `cover <name>` with a name without spaces")),
        },
        "grid" => {
            let value = |t: &str| parse_rational(t).ok_or_else(|| syntax(number, format!("bad grid value `{t}`")));
            let grid = match rest {
                [step] => GridMap::new(value(step)?),
                [step, origin] => GridMap::with_origin(value(step)?, value(origin)?),
                _ => return Err(syntax(number, "expected `grid <step> [origin]`")),
            };
            Ok(Some(Line::Grid(grid.map_err(|e| syntax(number, e.to_string()))?)))
        }
        other => Err(syntax(number, format!("unknown record `{other}`"))),
    }
}

/// Converts births to grid indices, or insists on integers without a grid.
fn to_grid(records: Vec<(usize, Record)>, grid: Option<&GridMap>) -> Result<FilteredComplex> {
    match grid {
        Some(g) => discretize(records.into_iter().map(|(_, r)| r), g),
        None => {
            let mut ints = Vec::with_capacity(records.len());
            for (line, (v, b)) in records {
                if !b.is_integer() {
                    return Err(syntax(line, format!("birth {b} is not an integer and no grid is set")));
                }
                ints.push((v, b.to_integer()));
            }
            FilteredComplex::build(ints)
        }
    }
}

struct Parsed {
    grid: Option<GridMap>,
    ambient: Vec<(usize, Record)>,
    /// Name, header line, records.
    members: Vec<(String, usize, Vec<(usize, Record)>)>,
}

fn parse_lines(text: &str) -> Result<Parsed> {
    let mut parsed = Parsed { grid: None, ambient: Vec::new(), members: Vec::new() };
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        match parse_line(number, raw)? {
            None => {}
            Some(Line::Grid(g)) => {
                if parsed.grid.is_some() || !parsed.ambient.is_empty() || !parsed.members.is_empty() {
                    return Err(syntax(number, "`grid` must come once, before any simplex or cover"));
                }
                parsed.grid = Some(g);
            }
            Some(Line::Cover(name)) => {
                if parsed.members.iter().any(|(n, _, _)| *n == name) {
                    return Err(syntax(number, format!("cover member `{name}` declared twice")));
                }
                parsed.members.push((name, number, Vec::new()));
            }
            Some(Line::Simplex(r)) => match parsed.members.last_mut() {
                Some((_, _, list)) => list.push((number, r)),
                None => parsed.ambient.push((number, r)),
            },
        }
    }
    Ok(parsed)
}

/// Parses a complex. `grid` overrides a `grid` line in the text.
pub fn parse_complex_str(text: &str, grid: Option<&GridMap>) -> Result<FilteredComplex> {
    let parsed = parse_lines(text)?;
    if let Some((_, line, _)) = parsed.members.first() {
        return Err(syntax(*line, "a complex file cannot contain `cover` sections"));
    }
    to_grid(parsed.ambient, grid.or(parsed.grid.as_ref()))
}

/// Parses a cover. `grid` overrides a `grid` line in the text.
pub fn parse_cover_str(text: &str, grid: Option<&GridMap>) -> Result<FilteredCover> {
    let parsed = parse_lines(text)?;
    let grid = grid.or(parsed.grid.as_ref());
    let members = parsed
        .members
        .into_iter()
        .map(|(name, _, records)| Ok(Member { name, complex: to_grid(records, grid)? }))
        .collect::<Result<Vec<_>>>()?;
    if parsed.ambient.is_empty() {
        FilteredCover::from_members(members)
    } else {
        FilteredCover::new(to_grid(parsed.ambient, grid)?, members)
    }
}

pub fn parse_complex(path: &Path, grid: Option<&GridMap>) -> Result<FilteredComplex> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_complex_str(&text, grid)
}

pub fn parse_cover(path: &Path, grid: Option<&GridMap>) -> Result<FilteredCover> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_cover_str(&text, grid)
}

fn write_simplices(out: &mut String, complex: &FilteredComplex) {
    for (s, b) in complex.iter() {
        out.push_str("simplex");
        for v in s.vertices() {
            let _ = write!(out, " {v}");
        }
        let _ = writeln!(out, " {b}");
    }
}

/// Every simplex of `complex`, one per line, births on the integer grid.
pub fn serialize_complex(complex: &FilteredComplex) -> String {
    let mut out = String::new();
    write_simplices(&mut out, complex);
    out
}

/// Ambient simplices followed by one section per member.
pub fn serialize_cover(cover: &FilteredCover) -> String {
    let mut out = String::from("# ambient complex\n");
    write_simplices(&mut out, cover.ambient());
    for m in cover.members() {
        let _ = writeln!(out, "cover {}", m.name);
        write_simplices(&mut out, &m.complex);
    }
    out
}
