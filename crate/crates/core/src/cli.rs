//! Command-line front end: `build`, `verify`, `sample`, `report`.

use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use crate::bump::Grade;
use crate::config::{BankChoice, Format, RunConfig};
use crate::report::{reports_csv, write_file, write_reports, SampledFunction, VerificationReport};
use crate::suite;
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "wavelab", version, about = "Build and verify generalized filter banks and their wavelets")]
pub struct Cli {
    /// JSON run configuration; flags override its keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write sampled filters, scaling functions, wavelet and the bank description.
    Build(Common),
    /// Run the verification suite and write one report per check.
    Verify(Common),
    /// Sample one target curve.
    Sample {
        /// p, h11, h12, h21, g1, g2, phi1_hat, phi2_hat, psi_hat, psi_time,
        /// per_phi1, per_phi2, per_psi or dimension
        target: String,
        /// Sampling window as `lo,hi`.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Summarize a directory of reports written by `verify`.
    Report {
        /// Reports directory; defaults to `<out>/reports`.
        dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Default, Clone)]
pub struct Common {
    /// journe, example, classical:haar, classical:shannon or classical:cohen
    #[arg(long)]
    pub bank: Option<BankChoice>,
    /// Smoothness target of the bump.
    #[arg(long)]
    pub r: Option<u32>,
    /// Transition grade: a positive integer or `inf`.
    #[arg(long)]
    pub grade: Option<Grade>,
    /// Points per curve and per verification grid (at least 64).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Overrides every floating-point tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for every jittered grid.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    pub format: Option<Format>,
}

impl Common {
    fn apply(&self, mut c: RunConfig) -> RunConfig {
        if let Some(v) = self.bank {
            c.bank = v;
        }
        if let Some(v) = self.r {
            c.r = v;
        }
        if let Some(v) = self.grade {
            c.grade = v;
        }
        if let Some(v) = self.grid {
            c.grid = v;
        }
        if let Some(v) = self.tol {
            c.tol = Some(v);
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = &self.out {
            c.out = v.clone();
        }
        if let Some(v) = self.format {
            c.format = v;
        }
        c
    }
}

/// Caps the rayon pool from `WAVELAB_THREADS`.
pub fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("WAVELAB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("WAVELAB_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(Error::Config("WAVELAB_THREADS must be at least 1".into()));
        }
        // a second initialization (tests, embedding) keeps the existing pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn resolve(config: &Option<PathBuf>, common: &Common) -> Result<RunConfig> {
    let base = match config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let cfg = common.apply(base);
    cfg.validate()?;
    Ok(cfg)
}

fn write_curve(dir: &Path, stem: &str, s: &SampledFunction, format: Format) -> Result<PathBuf> {
    let (ext, body) = match format {
        Format::Csv => ("csv", s.to_csv()),
        Format::Json => ("json", s.to_json()? + "\n"),
    };
    let path = dir.join(format!("{stem}.{ext}"));
    write_file(&path, &body)?;
    Ok(path)
}

/// Writes the sampled curves and `bank.json`; returns the files written.
pub fn cmd_build(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let out = &cfg.out;
    let mut files = Vec::new();
    let mut curve = |stem: &str, target: &str, lo: f64, hi: f64| -> Result<()> {
        let s = suite::sample_target(cfg, target, lo, hi)?;
        files.push(write_curve(out, stem, &s, cfg.format)?);
        Ok(())
    };
    match cfg.bank {
        BankChoice::Classical(_) => {
            curve("phi", "phi1_hat", -4.0, 4.0)?;
            curve("psi", "psi_hat", -4.0, 4.0)?;
        }
        b => {
            if b == BankChoice::Example {
                curve("p", "p", 0.0, 1.0)?;
            }
            for f in ["h11", "h12", "h21", "g1", "g2"] {
                curve(f, f, 0.0, 1.0)?;
            }
            curve("phi1", "phi1_hat", -1.0, 1.0)?;
            curve("phi2", "phi2_hat", -8.0 / 7.0, 8.0 / 7.0)?;
            curve("psi", "psi_hat", -4.0, 4.0)?;
        }
    }
    let doc = bank_json(cfg)?;
    let path = out.join("bank.json");
    write_file(&path, &(doc + "\n"))?;
    files.push(path);
    Ok(files)
}

fn bank_json(cfg: &RunConfig) -> Result<String> {
    let mut root = serde_json::Map::new();
    root.insert("config".into(), serde_json::to_value(cfg)?);
    match suite::build_bank(cfg)? {
        Some(b) => {
            root.insert("bank".into(), serde_json::to_value(b.doc())?);
            if let Some(p) = &b.bump {
                root.insert("validation".into(), serde_json::to_value(&p.validation)?);
            }
        }
        None => {
            let BankChoice::Classical(w) = cfg.bank else { unreachable!() };
            let pair = crate::classical::reference_filters(w);
            root.insert(
                "bank".into(),
                serde_json::json!({
                    "name": pair.name,
                    "h": pair.h.doc(),
                    "g": pair.g.doc(),
                    "plateau": pair.plateau,
                }),
            );
        }
    }
    Ok(serde_json::to_string_pretty(&root)?)
}

/// Runs the suite, writes reports under `<out>/reports` and a CSV summary.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Vec<VerificationReport>> {
    let reports = suite::run(cfg)?;
    let dir = cfg.out.join("reports");
    write_reports(&dir, &reports)?;
    write_file(&cfg.out.join("summary.csv"), &reports_csv(&reports))?;
    Ok(reports)
}

pub fn load_reports(dir: &Path) -> Result<Vec<VerificationReport>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| Ok(serde_json::from_str(&std::fs::read_to_string(p)?)?))
        .collect()
}

fn parse_window(w: &str) -> Result<(f64, f64)> {
    let bad = || Error::Parse(format!("window must be lo,hi with lo < hi, got {w:?}"));
    let (a, b) = w.split_once(',').ok_or_else(bad)?;
    let lo: f64 = a.trim().parse().map_err(|_| bad())?;
    let hi: f64 = b.trim().parse().map_err(|_| bad())?;
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err(bad())
    }
}

fn default_window(target: &str) -> (f64, f64) {
    match target {
        "p" | "h11" | "h12" | "h21" | "g1" | "g2" => (0.0, 1.0),
        "phi1_hat" => (-1.0, 1.0),
        "phi2_hat" => (-8.0 / 7.0, 8.0 / 7.0),
        "psi_hat" => (-3.0, 3.0),
        "psi_time" => (-8.0, 8.0),
        _ => (-0.5, 0.5),
    }
}

/// Entry point behind the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    init_threads()?;
    match &cli.command {
        Command::Build(common) => {
            let cfg = resolve(&cli.config, common)?;
            for f in cmd_build(&cfg)? {
                println!("{}", f.display());
            }
            Ok(0)
        }
        Command::Verify(common) => {
            let cfg = resolve(&cli.config, common)?;
            let reports = cmd_verify(&cfg)?;
            for r in &reports {
                println!("{}", r.summary_line());
            }
            summarize(&reports)
        }
        Command::Sample { target, window, common } => {
            let cfg = resolve(&cli.config, common)?;
            if !suite::SAMPLE_TARGETS.contains(&target.as_str()) {
                eprintln!("error: unknown target {target:?}; expected one of {}", suite::SAMPLE_TARGETS.join(", "));
                return Ok(2);
            }
            let (lo, hi) = match window {
                Some(w) => parse_window(w)?,
                None => default_window(target),
            };
            let s = suite::sample_target(&cfg, target, lo, hi)?;
            let path = write_curve(&cfg.out, target, &s, cfg.format)?;
            println!("{}", path.display());
            Ok(0)
        }
        Command::Report { dir, common } => {
            let cfg = resolve(&cli.config, common)?;
            let dir = dir.clone().unwrap_or_else(|| cfg.out.join("reports"));
            let reports = load_reports(&dir)?;
            for r in &reports {
                println!("{}", r.summary_line());
            }
            summarize(&reports)
        }
    }
}

fn summarize(reports: &[VerificationReport]) -> Result<i32> {
    let failing: Vec<&VerificationReport> = reports.iter().filter(|r| !r.informational && !r.pass).collect();
    let info = reports.iter().filter(|r| r.informational).count();
    println!(
        "{} checks: {} passed, {} failed, {} informational",
        reports.len(),
        reports.len() - failing.len() - info,
        failing.len(),
        info
    );
    if failing.is_empty() {
        return Ok(0);
    }
    eprintln!("failing checks:");
    for r in failing {
        eprint!("  {}", r.summary_line());
        match r.notes.last() {
            Some(n) => eprintln!(" [{n}]"),
            None => eprintln!(),
        }
    }
    Ok(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config() {
        let cli = Cli::try_parse_from(["wavelab", "verify", "--bank", "classical:shannon", "--r", "2", "--grade", "inf"]).unwrap();
        let Command::Verify(c) = cli.command else { panic!() };
        let cfg = c.apply(RunConfig { seed: 99, ..Default::default() });
        assert_eq!(cfg.bank, BankChoice::Classical(crate::classical::Reference::Shannon));
        assert_eq!(cfg.r, 2);
        assert_eq!(cfg.seed, 99);
    }

    #[test]
    fn window_parsing() {
        assert_eq!(parse_window("-3,3").unwrap(), (-3.0, 3.0));
        assert!(parse_window("3,-3").is_err());
        let cli = Cli::try_parse_from(["wavelab", "sample", "psi_hat", "--window", "-3,3"]).unwrap();
        assert!(matches!(cli.command, Command::Sample { .. }));
    }

    #[test]
    fn bad_bank_is_usage_error() {
        assert!(Cli::try_parse_from(["wavelab", "build", "--bank", "meyer"]).is_err());
    }
}
