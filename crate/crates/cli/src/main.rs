//! Command line front end: sweeps fringe visibility into correlation
//! curve data, runs the seeded property suite, and reports the duality
//! quantities of a single configuration.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use duality_core::correlations::{
    cc_dephased_analytic, cc_pure_analytic, correlation_report, distinguishability_analytic,
    mutual_information_analytic, qd_dephased_analytic, JointStateKind,
};
use duality_core::interferometer::{
    distinguishability, duality_check, fringe_visibility, output_probability, BlochVector,
    Configuration, DetectorModel,
};
use duality_core::verification::run_verification;

#[derive(Parser)]
#[command(
    name = "duality",
    version,
    about = "Which-way interferometer sweeps and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep fringe visibility and emit correlation curve data
    Sweep(SweepArgs),
    /// Run the seeded property suite and print a pass/fail table
    Verify(VerifyArgs),
    /// Report V, D, P, and the duality bounds for one configuration
    Inspect(InspectArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// First visibility on the grid
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    v_start: f64,
    /// Last visibility on the grid
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    v_end: f64,
    /// Number of grid points, endpoints included
    #[arg(long, default_value_t = 21)]
    steps: usize,
    #[arg(long, value_enum, default_value_t = KindChoice::Both)]
    kind: KindChoice,
    #[arg(long, value_enum, default_value_t = QuantityChoice::All)]
    quantity: QuantityChoice,
    #[arg(long, value_enum, default_value_t = FormatChoice::Csv)]
    format: FormatChoice,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit 1 when any numeric curve strays beyond the tolerance
    #[arg(long)]
    verify: bool,
    /// Largest allowed |analytic - numeric| in --verify mode
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Tolerance for the curve-agreement properties
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Sample count for the randomized properties
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// Seed for the property suite's random stream
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct InspectArgs {
    /// Preparation Bloch vector as "sx,sy,sz"
    #[arg(long, allow_hyphen_values = true)]
    bloch: String,
    /// Real part of the pointer overlap
    #[arg(long, allow_negative_numbers = true)]
    overlap_re: f64,
    /// Imaginary part of the pointer overlap
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    overlap_im: f64,
    /// Relative phase between the interferometer arms
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindChoice {
    Entangled,
    Dephased,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuantityChoice {
    Cc,
    Qd,
    Mi,
    D,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatChoice {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Cc,
    Qd,
    Mi,
    D,
}

impl Quantity {
    fn label(self) -> &'static str {
        match self {
            Quantity::Cc => "cc",
            Quantity::Qd => "qd",
            Quantity::Mi => "mi",
            Quantity::D => "d",
        }
    }
}

fn kind_label(kind: JointStateKind) -> &'static str {
    match kind {
        JointStateKind::Entangled => "entangled",
        JointStateKind::Dephased => "dephased",
    }
}

#[derive(Serialize)]
struct Record {
    #[serde(rename = "V")]
    v: f64,
    quantity: &'static str,
    kind: &'static str,
    method: &'static str,
    value: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sweep(args) => run_sweep(&args),
        Command::Verify(args) => run_verify(&args),
        Command::Inspect(args) => run_inspect(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run_sweep(args: &SweepArgs) -> Result<ExitCode, String> {
    if !args.v_start.is_finite() || !args.v_end.is_finite() {
        return Err("visibility bounds must be finite".into());
    }
    if !(0.0..=1.0).contains(&args.v_start) || !(0.0..=1.0).contains(&args.v_end) {
        return Err("visibility bounds must lie in [0, 1]".into());
    }
    if args.v_start > args.v_end {
        return Err("--v-start must not exceed --v-end".into());
    }
    if args.steps < 2 {
        return Err("--steps must be at least 2".into());
    }
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return Err("--tolerance must be positive".into());
    }

    let kinds: &[JointStateKind] = match args.kind {
        KindChoice::Entangled => &[JointStateKind::Entangled],
        KindChoice::Dephased => &[JointStateKind::Dephased],
        KindChoice::Both => &[JointStateKind::Entangled, JointStateKind::Dephased],
    };
    let quantities: &[Quantity] = match args.quantity {
        QuantityChoice::Cc => &[Quantity::Cc],
        QuantityChoice::Qd => &[Quantity::Qd],
        QuantityChoice::Mi => &[Quantity::Mi],
        QuantityChoice::D => &[Quantity::D],
        QuantityChoice::All => &[Quantity::Cc, Quantity::Qd, Quantity::Mi, Quantity::D],
    };

    let mut records = Vec::new();
    let mut diffs = vec![f64::NEG_INFINITY; kinds.len() * quantities.len()];
    for i in 0..args.steps {
        let v = grid_point(args.v_start, args.v_end, args.steps, i);
        let analytic_only = (v - 1.0).abs() <= 1e-12;
        for (ki, &kind) in kinds.iter().enumerate() {
            let numeric = if analytic_only {
                None
            } else {
                Some(correlation_report(kind, v).map_err(|e| e.to_string())?)
            };
            for (qi, &quantity) in quantities.iter().enumerate() {
                let analytic = analytic_value(kind, quantity, v)?;
                records.push(Record {
                    v,
                    quantity: quantity.label(),
                    kind: kind_label(kind),
                    method: "analytic",
                    value: analytic,
                });
                if let Some(report) = &numeric {
                    let value = match quantity {
                        Quantity::Cc => report.classical_correlations,
                        Quantity::Qd => report.quantum_discord,
                        Quantity::Mi => report.mutual_information,
                        Quantity::D => report.distinguishability,
                    };
                    records.push(Record {
                        v,
                        quantity: quantity.label(),
                        kind: kind_label(kind),
                        method: "numeric",
                        value,
                    });
                    let slot = &mut diffs[ki * quantities.len() + qi];
                    *slot = slot.max((analytic - value).abs());
                }
            }
        }
    }

    let output = match args.format {
        FormatChoice::Csv => render_csv(&records, kinds, quantities, &diffs),
        FormatChoice::Json => {
            let mut body =
                serde_json::to_string_pretty(&records).expect("records serialize cleanly");
            body.push('\n');
            body
        }
    };
    match &args.out {
        Some(path) => std::fs::write(path, output)
            .map_err(|e| format!("cannot write {}: {}", path.display(), e))?,
        None => print!("{output}"),
    }

    if args.verify {
        let mut failed = false;
        for (ki, &kind) in kinds.iter().enumerate() {
            for (qi, &quantity) in quantities.iter().enumerate() {
                let diff = diffs[ki * quantities.len() + qi];
                if diff > args.tolerance {
                    eprintln!(
                        "verification failed: kind={} quantity={} max|analytic-numeric| = {:.3e} > {:.1e}",
                        kind_label(kind),
                        quantity.label(),
                        diff,
                        args.tolerance
                    );
                    failed = true;
                }
            }
        }
        if failed {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn grid_point(v_start: f64, v_end: f64, steps: usize, index: usize) -> f64 {
    if index == 0 {
        v_start
    } else if index == steps - 1 {
        v_end
    } else {
        v_start + (v_end - v_start) * index as f64 / (steps - 1) as f64
    }
}

fn analytic_value(kind: JointStateKind, quantity: Quantity, v: f64) -> Result<f64, String> {
    let value = match (quantity, kind) {
        (Quantity::Cc, JointStateKind::Entangled) => cc_pure_analytic(v),
        (Quantity::Cc, JointStateKind::Dephased) => cc_dephased_analytic(v),
        // A pure joint state splits its correlations evenly, so the
        // discord curve coincides with the classical one.
        (Quantity::Qd, JointStateKind::Entangled) => cc_pure_analytic(v),
        (Quantity::Qd, JointStateKind::Dephased) => qd_dephased_analytic(v),
        (Quantity::Mi, _) => mutual_information_analytic(kind, v),
        (Quantity::D, _) => distinguishability_analytic(v),
    };
    value.map_err(|e| e.to_string())
}

fn render_csv(
    records: &[Record],
    kinds: &[JointStateKind],
    quantities: &[Quantity],
    diffs: &[f64],
) -> String {
    let mut out = String::from("V,quantity,kind,method,value\n");
    for r in records {
        writeln!(
            out,
            "{:.11e},{},{},{},{:.11e}",
            r.v, r.quantity, r.kind, r.method, r.value
        )
        .expect("writing to a string cannot fail");
    }
    for (ki, &kind) in kinds.iter().enumerate() {
        for (qi, &quantity) in quantities.iter().enumerate() {
            let diff = diffs[ki * quantities.len() + qi];
            if diff > f64::NEG_INFINITY {
                writeln!(
                    out,
                    "# max|analytic-numeric| kind={} quantity={} {:.3e}",
                    kind_label(kind),
                    quantity.label(),
                    diff
                )
                .expect("writing to a string cannot fail");
            }
        }
    }
    out
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode, String> {
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return Err("--tolerance must be positive".into());
    }
    if args.trials == 0 {
        return Err("--trials must be positive".into());
    }
    let report = run_verification(args.tolerance, args.trials, args.seed);
    println!(
        "verification: tolerance {:e}, trials {}, seed {}",
        report.tolerance, report.trials, report.seed
    );
    println!();
    for result in &report.results {
        println!(
            "{} {}: {}",
            if result.passed { "PASS" } else { "FAIL" },
            result.name,
            result.detail
        );
    }
    println!();
    let failed = report.failed_count();
    println!(
        "{} properties, {} passed, {} failed",
        report.results.len(),
        report.results.len() - failed,
        failed
    );
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_inspect(args: &InspectArgs) -> Result<ExitCode, String> {
    let parts: Vec<&str> = args.bloch.split(',').collect();
    if parts.len() != 3 {
        return Err("--bloch expects three comma-separated components".into());
    }
    let mut components = [0.0_f64; 3];
    for (slot, part) in components.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("--bloch component {:?} is not a number", part.trim()))?;
    }
    let bloch =
        BlochVector::new(components[0], components[1], components[2]).map_err(|e| e.to_string())?;
    let detector = DetectorModel::new(Complex64::new(args.overlap_re, args.overlap_im))
        .map_err(|e| e.to_string())?;
    let config = Configuration::new(bloch, detector, args.phi).map_err(|e| e.to_string())?;

    let outcome = duality_check(&bloch, &detector);
    println!("{:<15} = {:.12}", "V", fringe_visibility(&bloch, &detector));
    println!(
        "{:<15} = {:.12}",
        "D",
        distinguishability(&bloch, &detector)
    );
    println!("{:<15} = {:.12}", "P", bloch.predictability());
    println!("{:<15} = {:.12}", "V0", bloch.a_priori_visibility());
    println!("{:<15} = {:.12}", "P_a(phi)", output_probability(&config));
    match outcome.main {
        Some(main) => println!("{:<15} = {:.12}", "duality_lhs", main.lhs),
        None => println!("{:<15} = undefined", "duality_lhs"),
    }
    println!(
        "{:<15} = {:.12}",
        "preparation_lhs", outcome.preparation.lhs
    );
    Ok(ExitCode::SUCCESS)
}
