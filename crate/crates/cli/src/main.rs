mod output;
mod verify;

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use lozenge::lattice::{closed_weight, generate_region, is_represented, minimum_weight, Bounds, WeightGrid};
use lozenge::modular::{count_form_residues_with_cap, empirical_tiling_density_with_cap, DEFAULT_SWEEP_CAP};
use lozenge::reduction::{
    center_path, classify, negative_census_with_cap, shortest_word, zigzag_apply, Germ, DEFAULT_CENSUS_CAP,
    DEFAULT_DEPTH_CAP, DEFAULT_STATE_BUDGET,
};
use lozenge::render::{to_svg, Coloring, Palette, RenderSpec, Shape};
use lozenge::triple::{apply_operator, apply_word, OperatorId, Word};
use lozenge::{Error, Triple};
use num_bigint::BigInt;
use serde_json::json;

use output::{Format, Output};

/// Environment variable overriding the largest prime accepted by density sweeps.
const SWEEP_CAP_VAR: &str = "LOZENGE_SWEEP_CAP";
const MAX_REGION_NODES: usize = 4_000_000;

#[derive(Parser)]
#[command(name = "lozenge", version, about = "Operators on integer triples and the lozenge tilings they generate")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply one operator to a triple.
    Apply {
        #[arg(long)]
        op: OperatorId,
        #[arg(long)]
        triple: String,
        /// Exact arbitrary-precision arithmetic.
        #[arg(long)]
        bigint: bool,
    },
    /// Apply a word over {1,2,3} to a triple.
    Word {
        /// Operators in execution order (first digit applied first).
        #[arg(long)]
        word: String,
        #[arg(long)]
        triple: String,
        /// Read the word in composition order (rightmost applied first).
        #[arg(long)]
        paper_order: bool,
        #[arg(long)]
        bigint: bool,
    },
    /// Weight of node (m, n) in the tiling with the given base triple.
    Weight {
        #[arg(long)]
        base: String,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        bigint: bool,
    },
    /// Weights of a rectangular region.
    Region {
        #[arg(long)]
        base: String,
        /// Square |m|, |n| <= radius.
        #[arg(long, conflicts_with = "bounds")]
        radius: Option<i64>,
        /// Explicit bounds `m_min,m_max,n_min,n_max`.
        #[arg(long, allow_hyphen_values = true)]
        bounds: Option<String>,
        /// Grow the region triangle by triangle instead of using the closed form.
        #[arg(long)]
        grow: bool,
    },
    /// Tower, translation and center of the tiling containing a triple.
    Classify {
        #[arg(long)]
        triple: String,
    },
    /// Shortest word reaching a triple that contains a value.
    Length {
        #[arg(long)]
        triple: String,
        #[arg(long, allow_hyphen_values = true)]
        value: i64,
        #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
        depth_cap: usize,
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        state_budget: usize,
    },
    /// Residue-class counts and densities modulo a prime.
    Density {
        #[arg(long)]
        p: u64,
        /// Germ `000` or `011` (brute-force count of the quadratic form).
        #[arg(long, conflicts_with = "base")]
        germ: Option<Germ>,
        /// Any base triple; counts over one period of its tiling.
        #[arg(long)]
        base: Option<String>,
    },
    /// Zigzag descent from (0,0,c), or the closed form of n zigzag steps on (a,a,c).
    Zigzag {
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
        #[arg(long, allow_hyphen_values = true, requires = "n")]
        a: Option<i64>,
        #[arg(long, requires = "a")]
        n: Option<i64>,
    },
    /// Negative weights in the tiling of (0,0,c).
    Census {
        #[arg(long)]
        c: i64,
        #[arg(long, default_value_t = DEFAULT_CENSUS_CAP)]
        cap: i64,
    },
    /// SVG drawing of a tiling patch.
    Render {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 5)]
        radius: i64,
        #[arg(long, value_enum, default_value_t = ShapeArg::HexCenter)]
        shape: ShapeArg,
        /// Color by residue modulo this prime instead of by value.
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long)]
        labels: bool,
        /// Comma-separated `#rrggbb` colors, one per residue class.
        #[arg(long, conflicts_with_all = ["low", "high"])]
        colors: Option<String>,
        #[arg(long, requires = "high")]
        low: Option<String>,
        #[arg(long, requires = "low")]
        high: Option<String>,
        /// Write the SVG here instead of standard output.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Whether a value is of the form x² + xy + y².
    Loeschian {
        #[arg(long, allow_hyphen_values = true)]
        value: i64,
    },
    /// Run the built-in self-checks.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Scope::All)]
        scope: verify::Scope,
        #[arg(long, default_value_t = 1000)]
        pmax: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    /// Hexagon around the minimum-weight nodes.
    HexCenter,
    /// Hexagon around the anchor triangle.
    HexAnchor,
    /// The full square |m|, |n| <= radius.
    Rect,
}

enum Failure {
    Lib(Error),
    /// Self-checks ran and some failed; the report is still printed.
    Checks(Output),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run = Result<Output, Failure>;

fn parse<T: FromStr<Err = Error>>(s: &str) -> Result<T, Error> {
    s.parse()
}

fn parse_big(s: &str) -> Result<Triple<BigInt>, Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::invalid(format!("expected three comma-separated integers, got {s:?}")));
    }
    let mut vals = Vec::with_capacity(3);
    for part in parts {
        vals.push(BigInt::from_str(part.trim()).map_err(|_| Error::invalid(format!("not an integer: {part:?}")))?);
    }
    let z = vals.pop().unwrap();
    let y = vals.pop().unwrap();
    let x = vals.pop().unwrap();
    Ok(Triple::new(x, y, z))
}

fn big_json(t: &Triple<BigInt>) -> serde_json::Value {
    json!([t.x.to_string(), t.y.to_string(), t.z.to_string()])
}

fn parse_word(s: &str, paper_order: bool) -> Result<Word, Error> {
    if paper_order {
        Word::parse_composition(s)
    } else {
        Word::parse_execution(s)
    }
}

fn sweep_cap() -> Result<u64, Error> {
    match std::env::var(SWEEP_CAP_VAR) {
        Ok(v) => {
            v.parse().map_err(|_| Error::invalid(format!("{SWEEP_CAP_VAR} must be a positive integer, got {v:?}")))
        }
        Err(_) => Ok(DEFAULT_SWEEP_CAP),
    }
}

fn region_bounds(radius: Option<i64>, bounds: Option<&str>) -> Result<Bounds, Error> {
    let b = match (radius, bounds) {
        (Some(r), None) if r >= 0 => Bounds::square(r),
        (Some(r), None) => return Err(Error::invalid(format!("radius must be >= 0, got {r}"))),
        (None, Some(s)) => {
            let v: Vec<i64> = s
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::invalid(format!("bad bounds {s:?}"))))
                .collect::<Result<_, _>>()?;
            if v.len() != 4 {
                return Err(Error::invalid("bounds need m_min,m_max,n_min,n_max"));
            }
            Bounds::new(v[0], v[1], v[2], v[3])
        }
        _ => Bounds::square(10),
    };
    if b.len() > MAX_REGION_NODES {
        return Err(Error::resource(format!("region of {} nodes exceeds {MAX_REGION_NODES}", b.len())));
    }
    Ok(b)
}

fn run(cmd: Command) -> Run {
    Ok(match cmd {
        Command::Apply { op, triple, bigint } => {
            if bigint {
                let r = apply_operator(op, &parse_big(&triple)?)?;
                Output::json(json!({ "result": big_json(&r) }))
            } else {
                let r = apply_operator(op, &parse::<Triple>(&triple)?)?;
                Output::json(json!({ "result": r }))
            }
        }
        Command::Word { word, triple, paper_order, bigint } => {
            let w = parse_word(&word, paper_order)?;
            let result = if bigint {
                big_json(&apply_word(&w, &parse_big(&triple)?)?)
            } else {
                json!(apply_word(&w, &parse::<Triple>(&triple)?)?)
            };
            Output::json(json!({ "word": w, "result": result }))
        }
        Command::Weight { base, m, n, bigint } => {
            let weight = if bigint {
                json!(closed_weight(&parse_big(&base)?, m, n)?.to_string())
            } else {
                json!(closed_weight(&parse::<Triple>(&base)?, m, n)?)
            };
            Output::json(json!({ "m": m, "n": n, "weight": weight }))
        }
        Command::Region { base, radius, bounds, grow } => {
            let base = parse::<Triple>(&base)?;
            let b = region_bounds(radius, bounds.as_deref())?;
            let grid = if grow { generate_region(base, b)? } else { WeightGrid::from_closed_form(base, b)? };
            Output::with_csv(grid.to_json_value(), grid.to_csv())
        }
        Command::Classify { triple } => {
            let t = parse::<Triple>(&triple)?;
            Output::json(serde_json::to_value(classify(&t)?).expect("serializable"))
        }
        Command::Length { triple, value, depth_cap, state_budget } => {
            let t = parse::<Triple>(&triple)?;
            let w = shortest_word(&t, value, depth_cap, state_budget)?;
            let reached = w.as_ref().map(|w| apply_word(w, &t)).transpose()?;
            Output::json(json!({
                "value": value,
                "length": w.as_ref().map(Word::len),
                "word": w,
                "reached": reached,
            }))
        }
        Command::Density { p, germ, base } => {
            let cap = sweep_cap()?;
            let table = match (germ, base) {
                (_, Some(b)) => empirical_tiling_density_with_cap(&parse::<Triple>(&b)?, p, cap)?,
                (Some(g), None) => count_form_residues_with_cap(g, p, cap)?,
                (None, None) => return Err(Error::invalid("density needs --germ or --base").into()),
            };
            Output::with_csv(serde_json::to_value(&table).expect("serializable"), table.to_csv())
        }
        Command::Zigzag { c, a, n } => match (a, n) {
            (Some(a), Some(n)) => Output::json(json!({ "a": a, "c": c, "n": n, "result": zigzag_apply(a, c, n)? })),
            _ => Output::json(serde_json::to_value(center_path(c)?).expect("serializable")),
        },
        Command::Census { c, cap } => {
            Output::json(serde_json::to_value(negative_census_with_cap(c, cap)?).expect("serializable"))
        }
        Command::Render { base, radius, shape, modulus, labels, colors, low, high, out } => {
            let base = parse::<Triple>(&base)?;
            if radius < 0 {
                return Err(Error::invalid("radius must be >= 0").into());
            }
            let reach = match shape {
                ShapeArg::HexCenter => {
                    let c = minimum_weight(&base)?.argmin[0];
                    c.m.abs().max(c.n.abs()) + radius + 1
                }
                _ => radius + 1,
            };
            let grid = WeightGrid::from_closed_form(base, region_bounds(Some(reach), None)?)?;
            let mut spec = RenderSpec::new(grid);
            spec.shape = match shape {
                ShapeArg::HexCenter => Shape::hex_around_center(&spec.grid, radius)?,
                ShapeArg::HexAnchor => Shape::hex_around_anchor(radius),
                ShapeArg::Rect => Shape::Rectangle,
            };
            if let Some(p) = modulus {
                spec.coloring = Coloring::Residue { p };
            }
            spec.show_labels = labels;
            spec.palette = match (colors, low, high) {
                (Some(c), _, _) => Palette::Residues(c.split(',').map(str::to_string).collect()),
                (None, Some(low), Some(high)) => Palette::Gradient { low, high },
                _ => Palette::Default,
            };
            let svg = to_svg(&spec)?;
            let nodes = spec.selected_nodes();
            let csv = output::nodes_csv(&nodes);
            match out {
                Some(path) => {
                    std::fs::write(&path, &svg)
                        .map_err(|e| Error::resource(format!("cannot write {}: {e}", path.display())))?;
                    let summary = json!({ "path": path.display().to_string(), "nodes": nodes.len() });
                    Output::with_csv(summary, csv)
                }
                None => Output::document(json!({ "nodes": nodes.len(), "svg": svg }), svg, csv),
            }
        }
        Command::Loeschian { value } => {
            let r = is_represented(&Triple::new(0, 1, 1), value)?;
            let witness = r.witnesses.first().map(|v| json!([v.m, v.n]));
            Output::json(json!({ "value": value, "loeschian": r.represented, "witness": witness }))
        }
        Command::Verify { scope, pmax, seed, samples } => {
            let report = verify::run(scope, pmax, seed, samples, sweep_cap()?)?;
            let ok = report.passed;
            let out = Output::with_text(serde_json::to_value(&report).expect("serializable"), report.text());
            if !ok {
                return Err(Failure::Checks(out));
            }
            out
        }
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 2,
        Error::Overflow(_) | Error::Resource(_) => 3,
        Error::Consistency(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, code) = match run(cli.command) {
        Ok(out) => (out, ExitCode::SUCCESS),
        Err(Failure::Checks(out)) => (out, ExitCode::from(1)),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    match out.emit(cli.format) {
        Ok(()) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
