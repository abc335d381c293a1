mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nerveseq::barcode::Barcode;
use nerveseq::bound::{certify, sharpness_suite, Verdict};
use nerveseq::complex::{parse_rational, FilteredCover, GridMap};
use nerveseq::error::Error;
use nerveseq::examples::{bipyramid_example, sphere_example};
use nerveseq::field::Prime;
use nerveseq::io::{parse_complex, parse_cover, serialize_complex, serialize_cover};
use nerveseq::nerve::{acyclicity, nerve, NerveStrategy};
use nerveseq::persistence::barcode;
use nerveseq::random::{any_instance, seeded};
use nerveseq::spectral::{page, DoubleComplex, SpectralSequence};

const GRAMMAR: &str = "\
Persistent homology of filtered complexes and covers, nerves, the
Mayer-Vietoris spectral sequence and approximate nerve bounds.

Input files are plain text, one record per line; `#` starts a comment.

  grid <step> [origin]       optional, first record: births are real numbers
                             (decimals or fractions) floored onto this grid
  simplex v0 v1 ... vk b     simplex on vertices v0..vk born at b; missing
                             faces get the smallest birth of their cofaces
  cover <name>               starts a cover member; the simplex lines that
                             follow belong to it

A complex file holds simplex lines only. In a cover file, simplex lines
before the first `cover` header give the ambient complex; without them the
ambient complex is the union of the members, each simplex born at its
earliest member birth.

Distances are reported on the doubled grid (\"units\": \"doubled-grid-steps\"),
so a value of 3 means one and a half grid steps.

Exit status: 0 on success or a passing verdict, 1 on a failing verdict,
2 on invalid input.";

#[derive(Parser)]
#[command(name = "nerveseq", version, about = "Nerves, spectral sequences and approximate nerve bounds", long_about = GRAMMAR)]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Config {
    /// Prime field of coefficients.
    #[arg(long, global = true, default_value_t = 2)]
    field: u32,
    /// Grid step for real-valued births, e.g. `0.5` or `1/3`.
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for emitted files.
    #[arg(long, global = true, env = "NERVESEQ_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    /// First slice at which the intersection is nonempty.
    Min,
    /// Latest birth inside the intersection.
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleKind {
    Sphere,
    Bipyramid,
    Sharpness,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Persistence barcode of a filtered complex.
    Barcode {
        complex: PathBuf,
        /// Report only this degree.
        #[arg(long)]
        degree: Option<usize>,
        /// Highest degree to compute (default: the dimension of the complex).
        #[arg(long)]
        max_degree: Option<usize>,
        /// Also write `barcode.svg` to the output directory.
        #[arg(long)]
        svg: bool,
    },
    /// Nerve of a cover in the complex format, with the acyclicity report.
    Nerve {
        cover: PathBuf,
        /// Largest index set to consider (default: ambient dimension + 2).
        #[arg(long)]
        max_card: Option<usize>,
        #[arg(long, value_enum, default_value_t = Strategy::Min)]
        strategy: Strategy,
    },
    /// Validates a cover and summarizes its acyclicity.
    CheckCover { cover: PathBuf },
    /// Pages of the Mayer-Vietoris spectral sequence.
    Spectral {
        cover: PathBuf,
        /// Only this page (0 is the double complex itself).
        #[arg(long)]
        page: Option<usize>,
    },
    /// Barcode of the total complex next to the ambient barcode.
    Total { cover: PathBuf },
    /// Certifies the nerve bounds. With two files, the first is the ambient
    /// complex and the cover must be compatible with it.
    VerifyBound {
        #[arg(num_args = 1..=2, required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Built-in example covers and the sharpness checks.
    Examples {
        #[arg(value_enum)]
        kind: ExampleKind,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Write the complex and cover files to the output directory.
        #[arg(long)]
        emit: bool,
        /// Seed for `random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// What a command produced: a JSON value, its text rendering, and whether a
/// verdict failed.
struct Report {
    json: Value,
    text: String,
    failed: bool,
}

fn ok(json: Value, text: String) -> Report {
    Report { json, text, failed: false }
}

fn grid_of(config: &Config) -> Result<Option<GridMap>, Error> {
    config
        .grid
        .as_deref()
        .map(|g| {
            let step = parse_rational(g).ok_or_else(|| Error::Parameter(format!("bad grid step `{g}`")))?;
            GridMap::new(step)
        })
        .transpose()
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn barcode_report(bars: &Barcode) -> Report {
    ok(bars.to_json(), bars.to_text())
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let config = &cli.config;
    let field = Prime::new(config.field)?;
    let grid = grid_of(config)?;
    let load_cover = |p: &Path| parse_cover(p, grid.as_ref());
    match &cli.command {
        Command::Barcode { complex, degree, max_degree, svg } => {
            let c = parse_complex(complex, grid.as_ref())?;
            let top = max_degree.or(*degree).unwrap_or(c.dim().unwrap_or(0));
            let mut bars = barcode(&c, top, field);
            if let Some(d) = degree {
                bars = Barcode::from_degrees([(*d, bars.degree(*d).to_vec())]);
            }
            if *svg {
                write_file(&config.out_dir, "barcode.svg", &svg::render(&bars, &complex.display().to_string()))?;
            }
            Ok(barcode_report(&bars))
        }
        Command::Nerve { cover, max_card, strategy } => {
            let cover = load_cover(cover)?;
            let cap = max_card.unwrap_or(cover.ambient().dim().unwrap_or(0) + 2);
            let strategy = match strategy {
                Strategy::Min => NerveStrategy::FirstNonempty,
                Strategy::Max => NerveStrategy::Max,
            };
            let n = nerve(&cover, Some(cap), strategy);
            let report = acyclicity(&cover, &n, field);
            let mut text = String::new();
            for (i, name) in n.names().iter().enumerate() {
                text.push_str(&format!("# vertex {i} = {name}\n"));
            }
            text.push_str(&serialize_complex(n.complex()));
            let json = json!({
                "max_card": cap,
                "names": n.names(),
                "nerve": serialize_complex(n.complex()),
                "acyclicity": report.to_json(n.names()),
            });
            text.push_str(&format!("# epsilon {} (nerve dim {}, ambient dim {})\n", report.epsilon, report.nerve_dim, report.ambient_dim));
            Ok(ok(json, text))
        }
        Command::CheckCover { cover } => {
            let cover = load_cover(cover)?;
            let n = nerve(&cover, None, NerveStrategy::FirstNonempty);
            let report = acyclicity(&cover, &n, field);
            let text = format!(
                "valid cover: {} members, {} ambient simplices\nepsilon {}  D {}  Delta {}  Q {}\n",
                cover.len(),
                cover.ambient().len(),
                report.epsilon,
                report.nerve_dim,
                report.ambient_dim,
                report.q()
            );
            let json = json!({
                "valid": true,
                "members": cover.members().iter().map(|m| json!({"name": m.name, "simplices": m.complex.len()})).collect::<Vec<_>>(),
                "ambient_simplices": cover.ambient().len(),
                "acyclicity": report.to_json(n.names()),
            });
            Ok(ok(json, text))
        }
        Command::Spectral { cover, page: which } => {
            let cover = load_cover(cover)?;
            let dc = DoubleComplex::build(&cover, field);
            let pages = match which {
                Some(r) => vec![page(&dc, *r)?],
                None => {
                    let mut seq = SpectralSequence::new(&dc);
                    (1..=dc.infinity_page()).map(|_| seq.advance()).collect::<Result<Vec<_>, _>>()?
                }
            };
            let text = pages.iter().map(|p| p.render_grid()).collect::<Vec<_>>().join("\n");
            let json = json!({
                "infinity_page": dc.infinity_page(),
                "pages": pages.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            });
            Ok(ok(json, text))
        }
        Command::Total { cover } => {
            let cover = load_cover(cover)?;
            let dc = DoubleComplex::build(&cover, field);
            let top = dc.degrees();
            let total = dc.total_barcode(top);
            let ambient = barcode(cover.ambient(), top, field);
            let agree = total == ambient;
            let json = json!({ "total": total.to_json(), "ambient": ambient.to_json(), "agree": agree });
            let text = format!("total:   {total}\nambient: {ambient}\nagree: {agree}\n");
            Ok(Report { json, text, failed: !agree })
        }
        Command::VerifyBound { inputs } => {
            let cover = match inputs.as_slice() {
                [c] => load_cover(c)?,
                [a, c] => {
                    let ambient = parse_complex(a, grid.as_ref())?;
                    let parsed = load_cover(c)?;
                    FilteredCover::new(ambient, parsed.members().to_vec())?
                }
                _ => unreachable!("clap enforces one or two inputs"),
            };
            let report = certify(&cover, field)?;
            Ok(Report { json: report.to_json(), text: report.to_text(), failed: report.verdict == Verdict::Fail })
        }
        Command::Examples { kind, dim, emit, seed } => {
            let cover = match kind {
                ExampleKind::Sharpness => {
                    let s = sharpness_suite(*dim, field)?;
                    return Ok(Report { json: s.to_json(), text: s.to_text(), failed: !s.holds() });
                }
                ExampleKind::Sphere => sphere_example(*dim)?,
                ExampleKind::Bipyramid => bipyramid_example(*dim)?,
                ExampleKind::Random => any_instance(&mut seeded(*seed)).cover,
            };
            let stem = match kind {
                ExampleKind::Random => format!("random-{seed}"),
                ExampleKind::Sphere => format!("sphere-{dim}"),
                _ => format!("bipyramid-{dim}"),
            };
            let mut written = Vec::new();
            if *emit {
                written.push(write_file(&config.out_dir, &format!("{stem}.cplx"), &serialize_complex(cover.ambient()))?);
                written.push(write_file(&config.out_dir, &format!("{stem}.cover"), &serialize_cover(&cover))?);
            }
            let report = certify(&cover, field)?;
            let mut json = report.to_json();
            json["written"] = json!(written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>());
            let mut text = report.to_text();
            for p in &written {
                text.push_str(&format!("wrote {}\n", p.display()));
            }
            Ok(Report { json, text, failed: report.verdict == Verdict::Fail })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.config.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("values serialize")),
                Format::Text => print!("{}", report.text),
            }
            if report.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
