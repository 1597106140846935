//! `zn`: restricted sumsets, representation counts, exponential sums and
//! verifiers over `Z_n`.
//!
//! Exit status: 0 pass, vacuous or informational output; 1 counterexample;
//! 2 usage or internal error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zn_sumset::expsum::{alpha0_cardano, cutoff_N, spectrum, DensityConstants};
use zn_sumset::report::VerificationReport;
use zn_sumset::reps::rep_profile;
use zn_sumset::sumset::{restricted_sumset, unrestricted_sumset};
use zn_sumset::verify::{run_verifier, search_problem1, NRange, RunConfig, VerifierId, VerifyOptions};
use zn_sumset::{ExhaustiveLimits, Modulus, ResidueSet};

#[derive(Parser)]
#[command(name = "zn", version, about = "Restricted sumsets over Z_n and checks of covering results")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print h^A (distinct summands), or hA with --unrestricted.
    ///
    /// h = 0 gives {0}, the empty sum.
    Sumset(SumsetArgs),
    /// Representation counts R, R1..R5, C4 and the identity residual.
    Reps(RepsArgs),
    /// Exponential sum S(h/n) of a set.
    Expsum(ExpsumArgs),
    /// Run a verifier and emit its report.
    Verify(VerifyArgs),
    /// Counterexample search for an open question.
    Search(SearchArgs),
    /// Density constants.
    Constants(ConstantsArgs),
}

#[derive(Args)]
struct SetArgs {
    /// Modulus.
    #[arg(long)]
    n: u32,
    /// Set literal: "0,1,2,5" or a hex bitmask "0x27" (bit i = residue i).
    #[arg(long, allow_hyphen_values = true)]
    set: String,
}

impl SetArgs {
    fn resolve(&self) -> Result<ResidueSet, String> {
        let m = Modulus::new(self.n as u64).map_err(|e| e.to_string())?;
        ResidueSet::parse(m, &self.set).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct SumsetArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long, default_value_t = 2)]
    h: usize,
    /// Allow repeated summands.
    #[arg(long)]
    unrestricted: bool,
}

#[derive(Args)]
struct RepsArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Residue to report; all residues when omitted.
    #[arg(long)]
    m: Option<u32>,
}

#[derive(Args)]
struct ExpsumArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Frequency; all frequencies when omitted.
    #[arg(long)]
    h: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct RunArgs {
    /// Inclusive range "a..b".
    #[arg(long, conflicts_with = "n")]
    n_range: Option<String>,
    /// Single modulus, same as --n-range a..a.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    /// Random draws per modulus.
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Largest n enumerated exhaustively (default: ZN_EXHAUSTIVE_CEILING or 24).
    #[arg(long)]
    exhaustive_ceiling: Option<u32>,
}

impl RunArgs {
    fn range(&self) -> Result<NRange, String> {
        match (&self.n_range, self.n) {
            (Some(r), None) => r.parse().map_err(|e: zn_sumset::Error| e.to_string()),
            (None, Some(n)) => NRange::single(n).map_err(|e| e.to_string()),
            _ => Err("one of --n-range or --n is required".into()),
        }
    }

    fn config(&self) -> Result<RunConfig, String> {
        let limits = match self.exhaustive_ceiling {
            Some(c) => ExhaustiveLimits::new(c),
            None => ExhaustiveLimits::from_env(),
        }
        .map_err(|e| e.to_string())?;
        let base = match self.mode {
            ModeArg::Exhaustive => RunConfig::exhaustive(),
            ModeArg::Random => RunConfig::random(self.samples, self.seed),
        };
        Ok(base.with_limits(limits).with_workers(self.workers))
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Verifier id (thmA, thmB, thmC-d-odd, thmD, thm-even, thm-parity,
    /// thm-odd-density, lemma1, lemma2, lemma4, lemma5, lemma6, lemma20,
    /// factI, parseval).
    id: String,
    #[command(flatten)]
    run: RunArgs,
    /// Number of summands for thmA.
    #[arg(long, default_value_t = 3)]
    m: u32,
    /// Density for thm-odd-density.
    #[arg(long, default_value_t = 0.45)]
    alpha: f64,
    /// Cube side for lemma1; repeatable.
    #[arg(long = "x")]
    x: Vec<f64>,
}

#[derive(Args)]
struct SearchArgs {
    /// Search target; only `problem1` (|A| >= 4 with |3^A| < |A|).
    target: String,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct ConstantsArgs {
    /// `alpha0` or `N`.
    which: String,
    #[arg(long)]
    alpha: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Sumset(a) => cmd_sumset(&a),
        Command::Reps(a) => cmd_reps(&a),
        Command::Expsum(a) => cmd_expsum(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Search(a) => cmd_search(&a),
        Command::Constants(a) => cmd_constants(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_sumset(a: &SumsetArgs) -> Result<u8, String> {
    let set = a.set.resolve()?;
    let s = if a.unrestricted {
        unrestricted_sumset(&set, a.h)
    } else {
        restricted_sumset(&set, a.h)
    };
    if s.is_empty() {
        println!("(empty)");
    } else {
        let full = if s.is_full() { ", = Z_n" } else { "" };
        println!("{} ({} of {}{full})", s, s.len(), s.n());
    }
    Ok(0)
}

fn cmd_reps(a: &RepsArgs) -> Result<u8, String> {
    let set = a.set.resolve()?;
    let p = rep_profile(&set).map_err(|e| e.to_string())?;
    let ms: Vec<u32> = match a.m {
        Some(m) if m >= set.n() => return Err(format!("m = {m} is not a residue mod {}", set.n())),
        Some(m) => vec![m],
        None => (0..set.n()).collect(),
    };
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>8}",
        "m", "R", "R1", "R2", "R3", "R4", "R5", "C4", "residual"
    );
    for &m in &ms {
        println!(
            "{:>6} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>8}",
            m,
            p.r.get(m),
            p.r1.get(m),
            p.r2.get(m),
            p.r3.get(m),
            p.r4.get(m),
            p.r5.get(m),
            p.c4.get(m),
            p.residual(m)
        );
    }
    if a.m.is_none() {
        let k = set.len() as u128;
        let binom = zn_sumset::zn::binomial(k as u64, 4);
        println!("sum C4 = {} (C({k},4) = {binom})", p.c4.total());
    }
    Ok(if p.max_abs_residual() == 0 { 0 } else { 1 })
}

fn cmd_expsum(a: &ExpsumArgs) -> Result<u8, String> {
    let set = a.set.resolve()?;
    let s = spectrum(&set);
    let hs: Vec<u32> = match a.h {
        Some(h) => vec![h % set.n()],
        None => (0..set.n()).collect(),
    };
    println!("{:>6} {:>20} {:>20} {:>20}", "h", "re", "im", "abs");
    for h in hs {
        let z = s.at(h);
        println!("{h:>6} {:>20.12} {:>20.12} {:>20.12}", z.re, z.im, z.norm());
    }
    if let Some((h, v)) = s.max_offdc() {
        println!("max |S(h/n)| over h != 0: {v:.12} at h = {h} (n/3 = {:.12})", set.n() as f64 / 3.0);
    }
    Ok(0)
}

fn emit(report: &VerificationReport, format: Format) -> u8 {
    match format {
        Format::Json => println!("{}", report.to_json_pretty()),
        Format::Csv => {
            println!("{}", VerificationReport::csv_header());
            println!("{}", report.to_csv_row());
        }
        Format::Text => print!("{}", report.to_text()),
    }
    report.verdict.exit_code() as u8
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8, String> {
    let id: VerifierId = a.id.parse().map_err(|e: zn_sumset::Error| e.to_string())?;
    if id == VerifierId::Problem1 {
        return Err("problem1 is run with `zn search problem1`".into());
    }
    let opts = VerifyOptions {
        m: a.m,
        alpha: a.alpha,
        x_values: if a.x.is_empty() { VerifyOptions::default().x_values } else { a.x.clone() },
    };
    let report = run_verifier(id, a.run.range()?, &a.run.config()?, &opts).map_err(|e| e.to_string())?;
    Ok(emit(&report, a.run.format))
}

fn cmd_search(a: &SearchArgs) -> Result<u8, String> {
    if a.target != "problem1" {
        return Err(format!("unknown search target `{}`; valid: problem1", a.target));
    }
    let report = search_problem1(a.run.range()?, &a.run.config()?).map_err(|e| e.to_string())?;
    if a.run.format == Format::Json {
        match (&report.stats.min_slack, &report.stats.argmin) {
            (Some(s), Some(arg)) => eprintln!("min slack {s} at n={} A={{{}}}", arg.0.n(), arg.0),
            _ => eprintln!("no sets checked"),
        }
    }
    Ok(emit(&report, a.run.format))
}

fn cmd_constants(a: &ConstantsArgs) -> Result<u8, String> {
    match a.which.as_str() {
        "alpha0" => {
            let c = DensityConstants::compute();
            println!("alpha0 = {:.12}", c.alpha0);
            println!(
                "cardano = {:.12} (|difference| {:.1e}, {})",
                alpha0_cardano(),
                c.disagreement(),
                if c.agree() { "agree" } else { "DISAGREE" }
            );
            Ok(if c.agree() { 0 } else { 2 })
        }
        "N" => {
            let alpha = a.alpha.ok_or("constants N needs --alpha")?;
            let n = cutoff_N(alpha).map_err(|e| e.to_string())?;
            println!("{n}");
            Ok(0)
        }
        other => Err(format!("unknown constant `{other}`; valid: alpha0, N")),
    }
}
