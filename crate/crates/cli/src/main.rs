use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use kstab_cli::{exit, exit_code, run, write_plot, CommandKind, Params};
use kstab_core::input::InputDocument;
use serde_json::json;

/// Exact K-stability computations on toric log Fano couples.
#[derive(Parser, Debug)]
#[command(name = "kstab", version)]
struct Cli {
    /// Operation to run.
    #[arg(value_enum)]
    command: CommandKind,
    /// Input document (JSON, or TOML with a .toml extension).
    input: PathBuf,
    /// Coefficient vector, e.g. `1/2` or `1/4,1/3`.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Threshold τ as `p/q` (defaults to the document's option, else 1).
    #[arg(long)]
    tau: Option<String>,
    /// Valuation direction in the lattice, e.g. `-1,-1`.
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    /// 1-based index of the divisor moving in the CM family.
    #[arg(long)]
    j: Option<usize>,
    /// Seed for audits.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random audit points.
    #[arg(long)]
    n: Option<usize>,
    /// Number of closedness sequences in audits.
    #[arg(long)]
    sequences: Option<usize>,
    /// Write exact plot samples (δ, or the normalized volume for `domains`
    /// and `cm`) to this CSV file.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Plot grid: `lo:hi:step` or a comma list, `;`-separated per coordinate.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Write the result JSON here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn fail(code: i32, kind: &str, message: String) -> ExitCode {
    let err = json!({ "error": { "code": kind, "message": message } });
    eprintln!("{}", serde_json::to_string_pretty(&err).expect("json"));
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::SUCCESS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    if let Some(n) = std::env::var("KSTAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let bytes = match std::fs::read(&cli.input) {
        Ok(b) => b,
        Err(e) => return fail(exit::INPUT, "E_IO", format!("cannot read {}: {e}", cli.input.display())),
    };
    let text = String::from_utf8_lossy(&bytes);
    let format = kstab_core::input::Format::from_path(&cli.input);
    let doc = match InputDocument::parse_str(&text, format) {
        Ok(d) => d,
        Err(e) => return fail(exit_code(&e), e.code(), e.to_string()),
    };
    let params = Params {
        x: cli.x,
        tau: cli.tau,
        u: cli.u,
        j: cli.j,
        seed: cli.seed,
        n: cli.n,
        sequences: cli.sequences,
        grid: cli.grid,
        plot: cli.plot.is_some(),
    };
    let outcome = match run(cli.command, &bytes, &doc, &params) {
        Ok(o) => o,
        Err(e) => return fail(exit_code(&e), e.code(), e.to_string()),
    };
    let body = serde_json::to_string_pretty(&outcome.document).expect("json") + "\n";
    match &cli.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                return fail(exit::IO, "E_IO", format!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{body}"),
    }
    if let Some(path) = &cli.plot {
        let k = doc.divisors.len();
        let res = std::fs::File::create(path).map_err(csv::Error::from).and_then(|f| write_plot(&outcome.plot, k, f));
        if let Err(e) = res {
            return fail(exit::IO, "E_IO", format!("cannot write {}: {e}", path.display()));
        }
    }
    if outcome.clean {
        ExitCode::from(exit::SUCCESS as u8)
    } else {
        ExitCode::from(exit::AUDIT_FAILURE as u8)
    }
}
