use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use g2kit::report::{exit_code, to_json_lines, CheckReport, RunConfig, SuiteManifest, SUITES};

/// Run certification and convergence suites and print one JSON report per check.
#[derive(Parser, Debug)]
#[command(name = "g2kit", version)]
struct Args {
    /// Suite to run (default: all).
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Random samples per check.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// First-derivative step; convergence ladders use 2h, h, h/2.
    #[arg(long)]
    h: Option<f64>,
    /// Skip the summary table on stderr.
    #[arg(long)]
    json_only: bool,
    /// List suites, or the checks of --suite when given, and exit.
    #[arg(long)]
    list: bool,
    /// Write the JSON Lines stream here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write each check's sample points as CSV into this directory.
    #[arg(long)]
    dump_samples: Option<PathBuf>,
}

fn summary(reports: &[CheckReport]) -> String {
    let width = reports
        .iter()
        .map(|r| r.check_id.len())
        .max()
        .unwrap_or(8)
        .max(8);
    let mut out = format!(
        "{:<width$}  {:<6} {:<8} {:>10} {:>9}\n",
        "check", "status", "expected", "order", "ms"
    );
    for r in reports {
        let order = r
            .order_estimate
            .map(|o| o.to_string())
            .unwrap_or_else(|| "-".into());
        let mark = if r.as_expected() {
            ""
        } else {
            "  <-- unexpected"
        };
        out.push_str(&format!(
            "{:<width$}  {:<6} {:<8} {:>10} {:>9}{mark}\n",
            r.check_id,
            r.status.to_string(),
            r.expected.to_string(),
            order,
            r.runtime_ms
        ));
    }
    let bad = reports.iter().filter(|r| !r.as_expected()).count();
    out.push_str(&format!("{} checks, {} unexpected\n", reports.len(), bad));
    out
}

fn dump_samples(dir: &Path, reports: &[CheckReport]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for r in reports.iter().filter(|r| !r.samples.is_empty()) {
        let mut body = String::new();
        for p in &r.samples {
            let row: Vec<String> = p.iter().map(|x| format!("{x:e}")).collect();
            body.push_str(&row.join(","));
            body.push('\n');
        }
        fs::write(dir.join(format!("{}.csv", r.check_id)), body)?;
    }
    Ok(())
}

fn run(args: &Args) -> Result<i32, String> {
    if args.list && args.suite.is_none() {
        for s in SUITES {
            println!("{s}");
        }
        return Ok(0);
    }
    let config = RunConfig {
        seed: args.seed,
        samples: args.samples,
        h: args.h,
    };
    let manifest = SuiteManifest::new(args.suite.as_deref().unwrap_or("all"), config)
        .map_err(|e| e.to_string())?;
    if args.list {
        for (id, description) in manifest.descriptions() {
            println!("{id}\t{description}");
        }
        return Ok(0);
    }
    let reports = manifest.run();
    let lines = to_json_lines(&reports).map_err(|e| e.to_string())?;
    match &args.out {
        Some(path) => fs::write(path, &lines).map_err(|e| format!("{}: {e}", path.display()))?,
        None => std::io::stdout()
            .write_all(lines.as_bytes())
            .map_err(|e| e.to_string())?,
    }
    if let Some(dir) = &args.dump_samples {
        dump_samples(dir, &reports).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    if !args.json_only {
        eprint!("{}", summary(&reports));
    }
    Ok(exit_code(&reports))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
