//! `morsekit`: tables, verification suites, the brute-force oracle, fiber
//! pictures and OEIS cross-references for `K_n^l`.
//!
//! Exit status: 0 on success, 1 when a check or lookup fails, 2 on usage or
//! domain errors.

pub mod export;
pub mod oeis;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};
use morsekit_core::exact::{to_f64, Integer};
use morsekit_core::fiber::{build_arrangement, count_regions, realize_snake, render_svg, RegionOptions};
use morsekit_core::oracle::{count_types, enumerate_snakes, OracleError};
use morsekit_core::suites::{self, Suite, SuiteOptions};
use morsekit_core::table::KTable;

use export::{export_table, render, Format, TableSpec};
use oeis::{oeis_lookup, OeisConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const CACHE_FILE: &str = "knl-cache.json";

#[derive(Parser, Debug)]
#[command(name = "morsekit", version, about = "Generalized Bernoulli-Euler numbers K_n^l")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Export K_n^l over a range or for listed cells.
    Table {
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        nmin: i64,
        #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
        nmax: i64,
        #[arg(long, default_value_t = 0)]
        lmin: u32,
        #[arg(long, default_value_t = 4)]
        lmax: u32,
        /// A single cell `n,l`; may be repeated. Overrides the range.
        #[arg(long = "cell", value_parser = parse_cell, allow_hyphen_values = true)]
        cells: Vec<(i64, u32)>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Emit `?` for cells without a value instead of skipping or failing.
        #[arg(long)]
        with_unknown: bool,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = clap::builder::ValueParser::new(parse_suite))]
        suite: Suite,
        #[arg(long, default_value_t = 20)]
        order: usize,
        /// Largest n-1+l for the brute-force oracle.
        #[arg(long, default_value_t = morsekit_core::oracle::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Count morsification types by brute force.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: usize,
        /// Compare with the table value.
        #[arg(long)]
        compare: bool,
        #[arg(long, default_value_t = morsekit_core::oracle::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Realize a snake, count the regions of its B_n^2 fiber, write an SVG.
    Fiber {
        #[arg(long)]
        n: usize,
        /// Index into the snakes of degree n, in lexicographic order.
        #[arg(long, default_value_t = 0)]
        snake: usize,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = morsekit_core::fiber::DEFAULT_MARGIN)]
        margin: f64,
    },
    /// Look a sequence up in the OEIS.
    Oeis {
        /// At least six comma-separated terms.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        terms: Vec<String>,
        #[arg(long, default_value_t = 10)]
        timeout: u64,
    },
}

fn parse_cell(s: &str) -> Result<(i64, u32), String> {
    let (n, l) = s.split_once(',').ok_or("expected n,l")?;
    Ok((
        n.trim().parse().map_err(|e| format!("n: {e}"))?,
        l.trim().parse().map_err(|e| format!("l: {e}"))?,
    ))
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

/// Process environment relevant to the commands.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub oeis_base_url: Option<String>,
    pub offline: bool,
    pub fixture_dir: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
}

impl Env {
    /// `OEIS_BASE_URL`, `MORSEKIT_OFFLINE=1`, `MORSEKIT_FIXTURE_DIR`,
    /// `MORSEKIT_CACHE_DIR`.
    pub fn from_process() -> Self {
        let var = |k: &str| std::env::var(k).ok().filter(|v| !v.is_empty());
        Env {
            oeis_base_url: var("OEIS_BASE_URL"),
            offline: var("MORSEKIT_OFFLINE").is_some_and(|v| v == "1"),
            fixture_dir: var("MORSEKIT_FIXTURE_DIR").map(PathBuf::from),
            cache_dir: var("MORSEKIT_CACHE_DIR").map(PathBuf::from),
        }
    }
}

fn load_table(env: &Env, err: &mut dyn Write) -> KTable {
    let Some(dir) = &env.cache_dir else { return KTable::new() };
    let path = dir.join(CACHE_FILE);
    match std::fs::read_to_string(&path) {
        Ok(s) => match export::import_json(&s) {
            Ok(t) => t,
            Err(e) => {
                let _ = writeln!(err, "warning: ignoring cache {}: {e}", path.display());
                KTable::new()
            }
        },
        Err(_) => KTable::new(),
    }
}

fn save_table(env: &Env, table: &KTable, err: &mut dyn Write) {
    let Some(dir) = &env.cache_dir else { return };
    let entries = table
        .entries()
        .into_iter()
        .map(|(n, l, k)| export::Row { n, l: l as i64, k: k.to_string() })
        .collect();
    let res = std::fs::create_dir_all(dir).and_then(|_| {
        let json = export::to_json(&export::TableExport { entries }).map_err(std::io::Error::other)?;
        std::fs::write(dir.join(CACHE_FILE), json)
    });
    if let Err(e) = res {
        let _ = writeln!(err, "warning: could not write cache in {}: {e}", dir.display());
    }
}

pub fn run_command<I, T>(argv: I, env: &Env, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match cli.command {
        Command::Table { nmin, nmax, lmin, lmax, cells, format, with_unknown, out: path } => {
            let mut table = load_table(env, err);
            let spec = TableSpec { n_min: nmin, n_max: nmax, l_min: lmin, l_max: lmax, cells, with_unknown };
            let text = match export_table(&mut table, &spec).and_then(|t| render(&t, format)) {
                Ok(t) => t,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_USAGE;
                }
            };
            save_table(env, &table, err);
            write_output(path.as_deref(), &text, out, err)
        }
        Command::Verify { suite, order, budget } => {
            // always from scratch, so a stale cache cannot vouch for itself
            let mut table = KTable::new();
            let opts = SuiteOptions { order, oracle_budget: budget, ..SuiteOptions::default() };
            let reports = suites::run(suite, &mut table, &opts);
            let mut failed = 0;
            let mut total = 0;
            for r in &reports {
                let _ = writeln!(out, "{r}");
                total += r.checks.len();
                failed += r.failures().count();
            }
            let _ = writeln!(out, "verify {suite}: {total} checks, {failed} failed");
            if failed == 0 { EXIT_OK } else { EXIT_FAIL }
        }
        Command::Oracle { n, l, compare, budget } => {
            if n == 0 {
                let _ = writeln!(err, "error: n must be at least 1");
                return EXIT_USAGE;
            }
            let count = match count_types(n, l, budget) {
                Ok(c) => c,
                Err(e @ OracleError::BudgetExceeded { .. }) => {
                    let _ = writeln!(err, "error: {e}; raise --budget to run anyway");
                    return EXIT_USAGE;
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_USAGE;
                }
            };
            let _ = writeln!(out, "types({n},{l}) = {count}");
            if !compare {
                return EXIT_OK;
            }
            let mut table = load_table(env, err);
            let want = table.knl(n as i64, l as u32).expect("n >= 1 is in the domain");
            let same = Integer::from(count) == want;
            let _ = writeln!(out, "{count} {} {want}", if same { "=" } else { "!=" });
            if same { EXIT_OK } else { EXIT_FAIL }
        }
        Command::Fiber { n, snake, svg, resolution, seed, margin } => {
            fiber(n, snake, &svg, resolution, seed, margin, out, err)
        }
        Command::Oeis { terms, timeout } => {
            let mut parsed = Vec::with_capacity(terms.len());
            for t in &terms {
                match t.trim().parse::<Integer>() {
                    Ok(v) => parsed.push(v),
                    Err(_) => {
                        let _ = writeln!(err, "error: not an integer: {t:?}");
                        return EXIT_USAGE;
                    }
                }
            }
            let cfg = OeisConfig {
                base_url: env.oeis_base_url.clone().unwrap_or_else(|| oeis::DEFAULT_BASE_URL.into()),
                offline: env.offline,
                fixture_dir: env.fixture_dir.clone().unwrap_or_else(|| OeisConfig::default().fixture_dir),
                timeout: Duration::from_secs(timeout),
            };
            match oeis_lookup(&parsed, &cfg) {
                Ok(ids) => {
                    if ids.is_empty() {
                        let _ = writeln!(err, "no matching sequences");
                    }
                    for id in ids {
                        let _ = writeln!(out, "{id}");
                    }
                    EXIT_OK
                }
                Err(e @ oeis::OeisError::TooFewTerms(_)) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_USAGE
                }
                Err(e) => {
                    let _ = writeln!(err, "{}: {e}", if e.is_soft() { "warning" } else { "error" });
                    EXIT_FAIL
                }
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn fiber(
    n: usize,
    snake: usize,
    svg: &Path,
    resolution: usize,
    seed: u64,
    margin: f64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    if !(1..=7).contains(&n) {
        let _ = writeln!(err, "error: --n must be in 1..=7");
        return EXIT_USAGE;
    }
    if resolution < 64 || !margin.is_finite() || margin <= 0.0 {
        let _ = writeln!(err, "error: need --resolution >= 64 and --margin > 0");
        return EXIT_USAGE;
    }
    let snakes = enumerate_snakes(n);
    let Some(s) = snakes.get(snake) else {
        let _ = writeln!(err, "error: degree {n} has {} snakes, index {snake} is out of range", snakes.len());
        return EXIT_USAGE;
    };
    let mut run = || -> Result<u64, morsekit_core::fiber::FiberError> {
        let r = realize_snake(n, s, seed)?;
        let arr = build_arrangement(&r.poly, margin)?;
        let crits: Vec<String> = r.poly.critical_points().iter().map(ToString::to_string).collect();
        let values: Vec<String> = r.poly.critical_values().iter().map(|v| format!("{:.6}", to_f64(v))).collect();
        let net: Vec<String> = arr.net.iter().map(|p| format!("{p:.6}")).collect();
        let _ = writeln!(out, "snake {s} ({} of {})", snake + 1, snakes.len());
        let _ = writeln!(out, "critical points: {}", crits.join(" "));
        let _ = writeln!(out, "critical values: {}", values.join(" "));
        let _ = writeln!(out, "net: {}", net.join(" "));
        let regions = count_regions(&arr, RegionOptions { resolution, ..RegionOptions::default() })?;
        render_svg(&arr, resolution, svg)?;
        Ok(regions)
    };
    match run() {
        Ok(regions) => {
            let _ = writeln!(out, "regions: {regions}");
            let _ = writeln!(out, "svg: {}", svg.display());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAIL
        }
    }
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match path {
        None => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Some(p) => match std::fs::write(p, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {}: {e}", p.display());
                EXIT_FAIL
            }
        },
    }
}
