//! Command-line front end: channel analysis, construction sweeps, decoding
//! simulation, and the randomized verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 resource cap exceeded.

use clap::{Args, Parser, Subcommand};
use mlpolar::{construct, ChannelSpec, Error, Limits, SchedulePolicy};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mlpolar",
    version,
    about = "Multilevel polarization toolkit for Pauli-label channels"
)]
struct Cli {
    /// Worker threads for parallel sections (0 = rayon default). Output does
    /// not depend on this value.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the scalar metrics of a channel.
    Analyze(AnalyzeArgs),
    /// Classify all 2^n virtual channels and write the CSV report.
    Construct(ConstructArgs),
    /// Monte Carlo frame-error simulation of successive-cancellation decoding.
    Simulate(SimulateArgs),
    /// Run a randomized property suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Channel spec file (JSON).
    #[arg(long)]
    channel: PathBuf,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    channel: PathBuf,
    /// Number of polarization steps.
    #[arg(long)]
    n: usize,
    /// fixed | alternating | adaptive
    #[arg(long, default_value = "fixed")]
    schedule: String,
    /// Classification threshold in (0, 0.5).
    #[arg(long)]
    delta: f64,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sort CSV rows by T value instead of index.
    #[arg(long)]
    sort_by_t: bool,
    /// Two-column (rank, T) data file for plotting.
    #[arg(long)]
    plot_out: Option<PathBuf>,
    /// Run the generic matrix engine even for erasure specs.
    #[arg(long)]
    force_generic: bool,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    channel: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "fixed")]
    schedule: String,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// lemmas | martingale | equivalence
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// 12 significant digits.
fn fmt12(v: f64) -> String {
    format!("{v:.11e}")
}

fn parse_schedule(s: &str) -> Result<SchedulePolicy, Error> {
    SchedulePolicy::from_name(s)
        .ok_or_else(|| Error::Spec(format!("unknown schedule {s:?} (fixed|alternating|adaptive)")))
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::DepthCapExceeded { .. }
        | Error::DepthTooLarge { .. }
        | Error::WidthCapExceeded { .. } => 3,
        _ => 2,
    }
}

fn run_analyze(args: &AnalyzeArgs) -> Result<(), Error> {
    let spec = ChannelSpec::from_path(&args.channel)?;
    let w = spec.lower()?;
    let m = w.metric_vector();
    for (k, v) in [
        ("z1", m.z_d[0]),
        ("z2", m.z_d[1]),
        ("z3", m.z_d[2]),
        ("z_global", m.z_global),
        ("i_sym", m.i_sym),
        ("z_partial_1", m.z_partial[0]),
        ("z_partial_2", m.z_partial[1]),
        ("z_partial_3", m.z_partial[2]),
    ] {
        println!("{k}={}", fmt12(v));
    }
    Ok(())
}

fn run_construct(args: &ConstructArgs) -> Result<(), Error> {
    let spec = ChannelSpec::from_path(&args.channel)?;
    let policy = parse_schedule(&args.schedule)?;
    let limits = Limits::default();
    let report = construct(&spec, args.n, policy, args.delta, &limits, args.force_generic)?;
    if let Some(path) = &args.out {
        let file = std::fs::File::create(path)
            .map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
        let mut buf = std::io::BufWriter::new(file);
        report
            .write_csv(&mut buf, args.sort_by_t)
            .map_err(|e| Error::Spec(e.to_string()))?;
    }
    if let Some(path) = &args.plot_out {
        let file = std::fs::File::create(path)
            .map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
        let mut buf = std::io::BufWriter::new(file);
        report
            .write_plot_data(&mut buf)
            .map_err(|e| Error::Spec(e.to_string()))?;
    }
    let (fa, fbc, fd, fu) = report.fractions();
    println!(
        "n={} delta={} schedule={}",
        report.n,
        report.delta,
        report.policy.name()
    );
    println!(
        "counts: A={} B={} C={} D={} unpolarized={}",
        report.counts.a, report.counts.b, report.counts.c, report.counts.d,
        report.counts.unpolarized
    );
    println!(
        "fractions: A={} B+C={} D={} unpolarized={}",
        fmt12(fa),
        fmt12(fbc),
        fmt12(fd),
        fmt12(fu)
    );
    println!(
        "fractions_5dp: A={fa:.5} B+C={fbc:.5} D={fd:.5} covered={:.5}",
        report.covered_fraction()
    );
    let p10 = report.set_size_check();
    println!(
        "bound_D: {} <= {} holds={}",
        fmt12(p10.bound_d.lhs),
        fmt12(p10.bound_d.rhs),
        p10.bound_d.holds
    );
    println!(
        "bound_BC: {} >= {} holds={}",
        fmt12(p10.bound_bc.lhs),
        fmt12(p10.bound_bc.rhs),
        p10.bound_bc.holds
    );
    Ok(())
}

fn run_simulate(args: &SimulateArgs) -> Result<(), Error> {
    let spec = ChannelSpec::from_path(&args.channel)?;
    let policy = parse_schedule(&args.schedule)?;
    let limits = Limits::default();
    let report = construct(&spec, args.n, policy, args.delta, &limits, false)?;
    let fer = mlpolar::codec::simulate_with_report(&spec, &report, args.trials, args.seed)?;
    println!("{fer}");
    println!("union_bound={}", fmt12(report.union_bound()));
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<bool, Error> {
    let results = mlpolar::verify::run_suite(&args.suite, args.samples, args.seed)?;
    let mut all_pass = true;
    for r in &results {
        println!(
            "{}: {} (samples={}, worst_slack={})",
            if r.passed() { "PASS" } else { "FAIL" },
            r.name,
            r.samples,
            fmt12(r.worst_slack)
        );
        if let Some(ce) = &r.counterexample {
            println!("  counterexample rows: {ce}");
        }
        all_pass &= r.passed();
    }
    Ok(all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // ignore failure when a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let outcome: Result<bool, Error> = match &cli.command {
        Command::Analyze(a) => run_analyze(a).map(|_| true),
        Command::Construct(a) => run_construct(a).map(|_| true),
        Command::Simulate(a) => run_simulate(a).map(|_| true),
        Command::Verify(a) => run_verify(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
