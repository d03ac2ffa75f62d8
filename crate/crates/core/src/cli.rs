//! The `ncpoly` command line.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::complexes::{
    annulus_vertex_classes, basketball_table, dual_braid_complex_stats, rectangle_complex_stats, ComplexStats, RectangleStats,
};
use crate::error::{Error, Result};
use crate::fiber::{default_starts, fiber_enumerate};
use crate::noncrossing::{enumerate_ncpart, enumerate_ncperm, maximal_chains, partition_of_perm, NoncrossingPartition, Side};
use crate::poly::{ComplexPoly, NumericMultiset, Rectangle};
use crate::render::{render_chords, render_report, What};
use crate::report::{analyze, AnalysisReport};

#[derive(Parser, Debug)]
#[command(name = "ncpoly", version, about = "Noncrossing partitions and the critical values of complex polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Critical data, side chains, GeoCom point and constellations of a polynomial.
    Analyze {
        /// Polynomial JSON file, `-` for stdin.
        input: String,
        /// Working rectangle `xl,xr,yb,yt`.
        #[arg(long, allow_hyphen_values = true)]
        rect: Option<String>,
        /// Clustering tolerance, 0 for the default.
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Counts and listings of the combinatorial objects.
    Enum {
        kind: EnumKind,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Preimages of a critical value multiset.
    Fiber {
        /// NumericMultiset JSON file, `-` for stdin.
        #[arg(long)]
        cvl: String,
        /// Degree; defaults to one more than the size of the multiset.
        #[arg(long)]
        d: Option<usize>,
        /// Newton starts; defaults to 200 d^(d-2).
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG drawings of an analysis report or of a single partition's matching.
    Render {
        /// Report written by `analyze`.
        #[arg(long)]
        analysis: Option<String>,
        /// Partition such as `137|2|45|6|8|9`, drawn as chords.
        #[arg(long, conflicts_with = "analysis")]
        partition: Option<String>,
        #[arg(long, default_value = "top")]
        side: String,
        #[arg(long, default_value = "qprime")]
        what: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumKind {
    Ncpart,
    Chains,
    Basketballs,
    DualBraid,
    Rectangle,
    Annulus,
}

#[derive(Debug, Serialize)]
pub struct EnumOutput {
    pub kind: EnumKind,
    pub d: usize,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rectangle: Option<RectangleStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub items: Option<Vec<String>>,
}

fn read_input(path: &str) -> Result<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::InvalidInput(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))?;
    }
    Ok(s)
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed {what}: {e}")))
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn range(d: usize, lo: usize, hi: usize) -> Result<()> {
    if d < lo || d > hi {
        Err(Error::UnsupportedDegree(d))
    } else {
        Ok(())
    }
}

pub fn run_enum(kind: EnumKind, d: usize, list: bool) -> Result<EnumOutput> {
    let mut out = EnumOutput { kind, d, count: 0, complex: None, rectangle: None, items: None };
    match kind {
        EnumKind::Ncpart => {
            range(d, 1, 12)?;
            let v = enumerate_ncpart(d);
            out.count = v.len() as u64;
            out.items = list.then(|| v.iter().map(|p| p.to_string()).collect());
        }
        EnumKind::Chains => {
            range(d, 1, 8)?;
            let v = maximal_chains(d);
            out.count = v.len() as u64;
            out.items = list.then(|| v.iter().map(|c| c.to_string()).collect());
        }
        EnumKind::Basketballs => {
            range(d, 1, 7)?;
            let table = basketball_table(d)?;
            let perms = enumerate_ncperm(d);
            let mut items = Vec::new();
            for (i, row) in table.iter().enumerate() {
                for (j, &b) in row.iter().enumerate() {
                    if b {
                        out.count += 1;
                        if list {
                            let l = partition_of_perm(&perms[i])?;
                            let r = partition_of_perm(&perms[j])?;
                            items.push(format!("{l} / {r}"));
                        }
                    }
                }
            }
            out.items = list.then_some(items);
        }
        EnumKind::DualBraid => {
            let s = dual_braid_complex_stats(d)?;
            out.count = s.cells_by_dim.iter().sum();
            out.complex = Some(s);
        }
        EnumKind::Rectangle => {
            let s = rectangle_complex_stats(d)?;
            out.count = s.vertices;
            out.rectangle = Some(s);
        }
        EnumKind::Annulus => {
            out.count = annulus_vertex_classes(d)?;
        }
    }
    Ok(out)
}

fn run_command(cmd: Command) -> Result<()> {
    match cmd {
        Command::Analyze { input, rect, tol, seed, out } => {
            let p: ComplexPoly = parse_json(&read_input(&input)?, "polynomial")?;
            let rect = rect.as_deref().map(Rectangle::parse).transpose()?;
            let report = analyze(&p, rect, tol, seed)?;
            emit(&to_json(&report), &out)
        }
        Command::Enum { kind, d, list, out } => emit(&to_json(&run_enum(kind, d, list)?), &out),
        Command::Fiber { cvl, d, starts, seed, out } => {
            let target: NumericMultiset = parse_json(&read_input(&cvl)?, "multiset")?;
            let d = d.unwrap_or(target.size() + 1);
            let starts = starts.unwrap_or_else(|| default_starts(d));
            let r = fiber_enumerate(&target, d, starts, seed)?;
            if !r.diagnostics.complete {
                eprintln!("warning: found {} of {} preimages", r.found, r.expected);
            }
            emit(&to_json(&r), &out)
        }
        Command::Render { analysis, partition, side, what, out } => {
            let what: What = what.parse()?;
            let svg = match (analysis, partition) {
                (Some(path), None) => {
                    let report: AnalysisReport = parse_json(&read_input(&path)?, "analysis report")?;
                    render_report(&report, what)
                }
                (None, Some(p)) => {
                    if what != What::Chords {
                        return Err(Error::InvalidInput("a bare partition can only be drawn as chords".into()));
                    }
                    let side: Side = side.parse()?;
                    render_chords(&NoncrossingPartition::parse(&p)?, side)
                }
                _ => return Err(Error::InvalidInput("give --analysis or --partition".into())),
            };
            emit(&svg, &out)
        }
    }
}

fn configure_threads() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var("NCPOLY_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    configure_threads();
    match run_command(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
