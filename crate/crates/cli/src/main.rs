//! `sdet` — compute, verify, and serialize Sklyanin determinants of the
//! reflection algebra, exactly.
//!
//! Exit codes: 0 success, 1 verification mismatch (or internal
//! inconsistency), 2 bad arguments.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use sdet_core::emit::{golden_compare, to_json, to_latex, to_text};
use sdet_core::scalars::rat;
use sdet_core::sdetcore::{cross_check, leading, sdet, series_coeffs, Path};

/// The largest size accepted at all; sizes 5 and up hide behind `--deep`
/// because the expansion sums walk all of `S_5` through 5^5-dimensional
/// columns (expect minutes, and set `SDET_MEM_CAP_MB` to bound memory).
const MAX_N: usize = 5;
const DEEP_THRESHOLD: usize = 5;

#[derive(Parser)]
#[command(
    name = "sdet",
    version,
    about = "Exact Sklyanin determinants of the reflection algebra, by seven independent routes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy)]
struct PathFlag(Path);

impl FromStr for PathFlag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Path::parse(s).map(PathFlag).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the determinant along one route and emit it
    Compute {
        /// Size of the generating matrix (n >= 1)
        #[arg(long)]
        n: usize,
        /// Route: def, pi, bp, qa, qb, qc, or thm
        #[arg(long, default_value = "thm")]
        path: PathFlag,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow n = 5 (slow: minutes, not seconds)
        #[arg(long)]
        deep: bool,
    },
    /// Mutually verify the routes, the golden files, and the leading term
    Verify {
        /// Largest size to cross-check (every size up to it is run)
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// `all` for the full mutual cross-check, or a single route to
        /// compare against the closed formula
        #[arg(long, default_value = "all")]
        path: String,
        /// Check the leading coefficient only for this l (default: all l)
        #[arg(long)]
        l: Option<usize>,
        /// Directory holding n2.golden and n3.golden
        #[arg(long, default_value = "goldens")]
        goldens_dir: PathBuf,
        /// Allow n = 5 (slow: minutes, not seconds)
        #[arg(long)]
        deep: bool,
    },
    /// Expand the determinant as a series at u = infinity
    Expand {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "thm")]
        path: PathFlag,
        /// Truncation order (coefficients of t^0 .. t^order)
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        deep: bool,
    },
    /// Regenerate golden-file candidates for n = 2 and 3
    Goldens {
        /// Write n2.golden / n3.golden into this directory instead of stdout
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Time every route at one size and print a table
    Bench {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        deep: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn bad_args() -> ExitCode {
    ExitCode::from(2)
}

fn mismatch() -> ExitCode {
    ExitCode::from(1)
}

fn check_size(n: usize, deep: bool) -> Result<(), String> {
    if n < 1 {
        return Err(format!("--n must be at least 1, got {n}"));
    }
    if n > MAX_N {
        return Err(format!("--n is capped at {MAX_N}"));
    }
    if n >= DEEP_THRESHOLD && !deep {
        return Err(format!("--n {n} needs --deep (runtime is minutes, not seconds)"));
    }
    Ok(())
}

fn write_output(bytes: &[u8], out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes),
        None => std::io::stdout().write_all(bytes),
    }
}

fn run(cmd: Cmd) -> Result<ExitCode, String> {
    match cmd {
        Cmd::Compute { n, path, format, out, deep } => {
            if let Err(e) = check_size(n, deep) {
                eprintln!("error: {e}");
                return Ok(bad_args());
            }
            let r = sdet(n, path.0).map_err(|e| e.to_string())?;
            let bytes = match format {
                Format::Text => to_text(&r.value).into_bytes(),
                Format::Json => to_json(&r).map_err(|e| e.to_string())?,
                Format::Latex => {
                    let mut s = to_latex(&r.value, n).map_err(|e| e.to_string())?;
                    s.push('\n');
                    s.into_bytes()
                }
            };
            write_output(&bytes, out.as_ref()).map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { n, path, l, goldens_dir, deep } => {
            if let Err(e) = check_size(n, deep) {
                eprintln!("error: {e}");
                return Ok(bad_args());
            }
            if let Some(l) = l {
                if l > 3 {
                    eprintln!("error: --l is checked against sizes 2 and 3, so it must be <= 3");
                    return Ok(bad_args());
                }
            }
            let single = match path.as_str() {
                "all" => None,
                other => match Path::parse(other) {
                    Ok(p) => Some(p),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return Ok(bad_args());
                    }
                },
            };
            let ok = verify(n, single, l, &goldens_dir)?;
            if ok {
                println!("VERIFY: PASS");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("VERIFY: FAIL");
                Ok(mismatch())
            }
        }
        Cmd::Expand { n, path, order, out, deep } => {
            if let Err(e) = check_size(n, deep) {
                eprintln!("error: {e}");
                return Ok(bad_args());
            }
            let r = sdet(n, path.0).map_err(|e| e.to_string())?;
            let series = series_coeffs(&r.value, n, order).map_err(|e| e.to_string())?;
            write_output(series.text().as_bytes(), out.as_ref()).map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Goldens { out_dir } => {
            for m in [2usize, 3] {
                let r = sdet(m, Path::Pi).map_err(|e| e.to_string())?;
                let content = format!(
                    "# candidate regenerated by `sdet goldens`; term lines are\n\
                     # canonical and should match the checked-in file exactly\n\
                     # (compare with `diff -I '^#'`).\n\
                     n: {m}\n{}",
                    to_text(&r.value)
                );
                match &out_dir {
                    Some(dir) => {
                        std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
                        std::fs::write(dir.join(format!("n{m}.golden")), content)
                            .map_err(|e| e.to_string())?;
                    }
                    None => {
                        println!("== n{m}.golden ==");
                        print!("{content}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bench { n, deep } => {
            if let Err(e) = check_size(n, deep) {
                eprintln!("error: {e}");
                return Ok(bad_args());
            }
            println!("{:<6} {:>10} {:>8}", "path", "millis", "terms");
            for path in Path::ALL {
                let start = Instant::now();
                let r = sdet(n, path).map_err(|e| e.to_string())?;
                let ms = start.elapsed().as_millis();
                println!("{:<6} {:>10} {:>8}", path.as_str(), ms, r.value.num_terms());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// The verification report: cross-checks per size, golden comparisons, and
/// the leading-coefficient law. Returns overall pass/fail.
fn verify(
    n: usize,
    single: Option<Path>,
    l_only: Option<usize>,
    goldens_dir: &std::path::Path,
) -> Result<bool, String> {
    let mut ok = true;
    for m in 1..=n {
        match single {
            None => {
                let report = cross_check(m).map_err(|e| e.to_string())?;
                for line in &report.lines {
                    let status = if line.pass { "pass" } else { "FAIL" };
                    println!("cross-check n={m}: {}: {status}", line.name);
                    if let Some(d) = &line.detail {
                        println!("  {d}");
                    }
                    ok &= line.pass;
                }
                for note in &report.info {
                    println!("note: {note}");
                }
            }
            Some(p) => {
                let a = sdet(m, p).map_err(|e| e.to_string())?;
                let b = sdet(m, Path::Thm).map_err(|e| e.to_string())?;
                let pass = a.value == b.value;
                println!(
                    "single-path n={m}: sdet {} == thm: {}",
                    p.as_str(),
                    if pass { "pass" } else { "FAIL" }
                );
                ok &= pass;
            }
        }
    }
    let reference = single.unwrap_or(Path::Pi);
    for m in [2usize, 3] {
        let file = goldens_dir.join(format!("n{m}.golden"));
        let value = sdet(m, reference).map_err(|e| e.to_string())?.value;
        match golden_compare(&value, &file) {
            Ok(report) if report.matched && report.n == m => {
                println!("golden n={m}: match");
            }
            Ok(report) => {
                println!("golden n={m}: MISMATCH");
                if let Some(d) = report.detail {
                    println!("  {d}");
                }
                if report.n != m {
                    println!("  header size {} does not match file name", report.n);
                }
                ok = false;
            }
            Err(e) => {
                println!("golden n={m}: unreadable ({e})");
                ok = false;
            }
        }
    }
    for m in [2usize, 3] {
        let value = sdet(m, reference).map_err(|e| e.to_string())?.value;
        for l in 0..=m {
            if let Some(only) = l_only {
                if l != only {
                    continue;
                }
            }
            let expect = if l % 2 == 0 { rat(1) } else { rat(-1) };
            let got = leading(&value, m, l).map_err(|e| e.to_string())?;
            let pass = got == expect;
            println!(
                "leading n={m} l={l}: {} (expect (-1)^{l})",
                if pass { "pass" } else { "FAIL" }
            );
            ok &= pass;
        }
    }
    Ok(ok)
}
