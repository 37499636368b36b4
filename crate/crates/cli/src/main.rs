//! `acf` — eigenvalue solves, monotonicity sweeps, disjoint-pair scans, the
//! verification suite, and rigidity detection on metric measure cones.
//!
//! Exit status: 0 when every contract in the run holds, 1 on a contract
//! violation (a machine-readable failure block is printed and written into
//! the report), 2 on invalid configuration.

mod config;
mod report;

use acf_core::fmt::sig17;
use acf_core::functionals::{self, RigidityOptions};
use acf_core::geometry::LinkDomain;
use acf_core::par::Exec;
use acf_core::spectral::{self, CapSolver};
use clap::{Parser, Subcommand};
use config::{CaseSpec, LinkSpec, OutputFormat, RunConfig, Sweep};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "acf",
    version,
    about = "ACF monotonicity functional on metric measure cones"
)]
struct Cli {
    /// Output directory for reports (default: $ACF_OUT_DIR or ./reports)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parallel sweeps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// First Dirichlet eigenvalue of a cap or arc domain
    Eigen {
        /// Link: sphere:N, circle:c, or suspension:N:y_measure
        #[arg(long)]
        link: String,
        /// Cap polar radius θ₀ ∈ (0, π)
        #[arg(long, visible_alias = "theta")]
        cap: Option<f64>,
        /// Arc length on a circle link
        #[arg(long)]
        arc: Option<f64>,
        /// Solve with the dense Sturm–Liouville matrix instead of shooting
        #[arg(long)]
        sturm_liouville: bool,
        /// Also write two-column (coordinate, value) eigenfunction samples
        #[arg(long)]
        emit_eigenfunction: bool,
    },
    /// Sweep complementary cap pairs (θ₀, π − θ₀) and report α₁ + α₂
    FhScan {
        #[arg(long)]
        link: String,
        /// Sweep lo:hi:n over θ₀
        #[arg(long)]
        theta: String,
    },
    /// ACF profile A₁, A₂, J of a two-phase case over a radius window
    Acf {
        #[arg(long)]
        link: String,
        /// Case: halfspace:k1=..,k2=..[,pole=..] or homogeneous:…
        #[arg(long)]
        case: String,
        /// Radius window lo:hi:n (default 0.1:1:100)
        #[arg(long)]
        r: Option<String>,
        /// Grid sizes m,n (radial, link; default 512,256)
        #[arg(long)]
        grid: Option<String>,
        /// Multiply both phases by (1 + εr)
        #[arg(long)]
        radial_factor: Option<f64>,
        /// Truncate a phase, given as phase:level
        #[arg(long)]
        truncate: Option<String>,
        /// Scale the phases, given as c1,c2
        #[arg(long)]
        scale: Option<String>,
        /// Also write the sampled field arrays as a CSV bundle
        #[arg(long)]
        emit_fields: bool,
    },
    /// Detect constant-J intervals and recover the linear configuration
    Rigidity {
        #[arg(long)]
        link: String,
        #[arg(long)]
        case: String,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        grid: Option<String>,
        /// Relative constancy tolerance for interval detection
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run the built-in verification catalog
    Verify {
        /// Run every section (the default; kept for CI ergonomics)
        #[arg(long)]
        all: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let out_dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os("ACF_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("reports"));
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            std::process::exit(2);
        }
        if let Err(e) = acf_core::par::configure_threads(n) {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
    let threads = cli
        .threads
        .map_or_else(|| "default".to_string(), |n| n.to_string());

    let started = Instant::now();
    let outcome = dispatch(&cli, &out_dir);
    match outcome {
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Ok((config, payload, failures)) => {
            let wall = started.elapsed().as_millis();
            let path = match report::write_report(&out_dir, &config, payload, wall, &threads) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: cannot write report: {e}");
                    std::process::exit(2);
                }
            };
            println!("report: {}", path.display());
            if failures.is_empty() {
                std::process::exit(0);
            }
            let block = json!({ "failures": failures });
            println!("{}", serde_json::to_string_pretty(&block).unwrap());
            std::process::exit(1);
        }
    }
}

type Dispatch = Result<(RunConfig, serde_json::Value, Vec<serde_json::Value>), String>;

fn dispatch(cli: &Cli, out_dir: &Path) -> Dispatch {
    match &cli.command {
        Command::Eigen {
            link,
            cap,
            arc,
            sturm_liouville,
            emit_eigenfunction,
        } => run_eigen(
            cli,
            out_dir,
            link,
            *cap,
            *arc,
            *sturm_liouville,
            *emit_eigenfunction,
        ),
        Command::FhScan { link, theta } => run_fh_scan(cli, out_dir, link, theta),
        Command::Acf {
            link,
            case,
            r,
            grid,
            radial_factor,
            truncate,
            scale,
            emit_fields,
        } => run_acf(
            cli,
            out_dir,
            link,
            case,
            r.as_deref(),
            grid.as_deref(),
            *radial_factor,
            truncate.as_deref(),
            scale.as_deref(),
            *emit_fields,
            false,
            None,
        ),
        Command::Rigidity {
            link,
            case,
            r,
            grid,
            tol,
        } => run_acf(
            cli,
            out_dir,
            link,
            case,
            r.as_deref(),
            grid.as_deref(),
            None,
            None,
            None,
            false,
            true,
            *tol,
        ),
        Command::Verify { all: _ } => run_verify(cli),
    }
}

fn run_eigen(
    cli: &Cli,
    out_dir: &Path,
    link: &str,
    cap: Option<f64>,
    arc: Option<f64>,
    sturm_liouville: bool,
    emit_eigenfunction: bool,
) -> Dispatch {
    let link_spec = LinkSpec::parse(link)?;
    let mut config = RunConfig::new("eigen");
    config.link = Some(link_spec.clone());
    config.cap = cap;
    config.arc = arc;
    config.format = cli.format;
    config.validate()?;

    let link = link_spec.build().map_err(|e| e.to_string())?;
    let solver = if sturm_liouville {
        CapSolver::SturmLiouville
    } else {
        CapSolver::Shooting
    };
    let result = match (cap, arc) {
        (Some(theta0), None) => {
            if !link.is_polar() {
                return Err("--cap needs a polar link (sphere or suspension)".into());
            }
            let dom = LinkDomain::cap(&link, theta0, acf_core::geometry::Pole::North)
                .map_err(|e| e.to_string())?;
            spectral::domain_eigenvalue_with(&dom, solver).map_err(|e| e.to_string())?
        }
        (None, Some(length)) => {
            let c = link
                .circumference()
                .ok_or("--arc needs a circle link".to_string())?;
            if length > c + 1e-12 {
                return Err(format!(
                    "--arc: length {length} exceeds the circumference {c}"
                ));
            }
            spectral::arc_eigenvalue(length).map_err(|e| e.to_string())?
        }
        _ => return Err("eigen needs exactly one of --cap or --arc".into()),
    };

    let mut files = Vec::new();
    let mut embedded_samples = None;
    if emit_eigenfunction {
        match config.format {
            OutputFormat::Csv => {
                let mut csv = String::from("coordinate,value\n");
                for (x, v) in &result.eigenfunction {
                    csv.push_str(&format!("{},{}\n", sig17(*x), sig17(*v)));
                }
                report::write_aux_file(out_dir, "eigenfunction.csv", &csv)
                    .map_err(|e| e.to_string())?;
                files.push("eigenfunction.csv".to_string());
            }
            OutputFormat::Json => embedded_samples = Some(result.eigenfunction.clone()),
        }
    }

    let mut failures = Vec::new();
    let n = link.ambient_dim();
    if !result.quadratic_identity_holds(n, 1e-12) {
        failures.push(json!({
            "check": "quadratic identity α(N-2+α) = λ",
            "lambda": result.lambda,
            "alpha": result.alpha,
        }));
    }
    if result.residual > 1e-8 {
        failures.push(json!({
            "check": "boundary residual",
            "residual": result.residual,
            "threshold": 1e-8,
        }));
    }

    println!(
        "lambda = {:.12}, alpha = {:.12} ({:?}, residual {:.2e})",
        result.lambda, result.alpha, result.method, result.residual
    );
    let mut payload = json!({
        "link": link,
        "result": result,
        "files": files,
    });
    if let Some(samples) = embedded_samples {
        payload["eigenfunction"] = serde_json::to_value(samples).unwrap();
    }
    Ok((config, payload, failures))
}

fn run_fh_scan(cli: &Cli, out_dir: &Path, link: &str, theta: &str) -> Dispatch {
    let link_spec = LinkSpec::parse(link)?;
    let sweep = Sweep::parse(theta)?;
    let mut config = RunConfig::new("fh-scan");
    config.link = Some(link_spec.clone());
    config.theta_sweep = Some(sweep);
    config.format = cli.format;
    config.validate()?;
    let n = match link_spec {
        LinkSpec::RoundSphere { n } => n,
        _ => return Err("fh-scan runs on round-sphere links".into()),
    };

    let rows = spectral::fh_scan(n, &sweep.points(), Exec::default()).map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    if config.format == OutputFormat::Csv {
        let mut csv = String::from("theta0,alpha1,alpha2,sum,deficit\n");
        for r in &rows {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                sig17(r.theta0),
                sig17(r.alpha1),
                sig17(r.alpha2),
                sig17(r.sum),
                sig17(r.deficit)
            ));
        }
        report::write_aux_file(out_dir, "fh_scan.csv", &csv).map_err(|e| e.to_string())?;
        files.push("fh_scan.csv".to_string());
    }

    let min_row = rows
        .iter()
        .min_by(|a, b| a.sum.total_cmp(&b.sum))
        .ok_or("empty sweep".to_string())?;
    let mut failures = Vec::new();
    for r in &rows {
        if r.deficit < -config.tolerances.fh_deficit {
            failures.push(json!({
                "check": "disjoint-pair sum ≥ 2",
                "theta0": r.theta0,
                "deficit": r.deficit,
            }));
        }
    }
    println!(
        "{} pairs: min sum {:.12} at θ₀ = {:.6}",
        rows.len(),
        min_row.sum,
        min_row.theta0,
    );
    let payload = json!({
        "rows": rows,
        "min_sum": min_row.sum,
        "argmin_theta0": min_row.theta0,
        "files": files,
    });
    Ok((config, payload, failures))
}

#[allow(clippy::too_many_arguments)]
fn run_acf(
    cli: &Cli,
    out_dir: &Path,
    link: &str,
    case: &str,
    r: Option<&str>,
    grid: Option<&str>,
    radial_factor: Option<f64>,
    truncate: Option<&str>,
    scale: Option<&str>,
    emit_fields: bool,
    rigidity: bool,
    rigidity_tol: Option<f64>,
) -> Dispatch {
    let link_spec = LinkSpec::parse(link)?;
    let case_spec = CaseSpec::parse(case)?;
    let command = if rigidity { "rigidity" } else { "acf" };
    let mut config = RunConfig::new(command);
    config.link = Some(link_spec.clone());
    config.case = Some(case_spec.clone());
    config.r_window = Some(match r {
        Some(text) => Sweep::parse(text)?,
        // documented default window
        None => Sweep {
            lo: 0.1,
            hi: 1.0,
            n: 100,
        },
    });
    if let Some(g) = grid {
        let (m, n) = g
            .split_once(',')
            .ok_or(format!("--grid: expected m,n, got {g:?}"))?;
        config.grid = (
            m.trim()
                .parse()
                .map_err(|_| format!("--grid: bad radial count {m:?}"))?,
            n.trim()
                .parse()
                .map_err(|_| format!("--grid: bad link count {n:?}"))?,
        );
    }
    config.radial_factor = radial_factor;
    if let Some(t) = truncate {
        let (phase, level) = t
            .split_once(':')
            .ok_or(format!("--truncate: expected phase:level, got {t:?}"))?;
        let phase: usize = phase
            .trim()
            .parse()
            .map_err(|_| "bad phase index".to_string())?;
        if phase > 1 {
            return Err("--truncate: phase must be 0 or 1".into());
        }
        config.truncate = Some((
            phase,
            level.trim().parse().map_err(|_| "bad level".to_string())?,
        ));
    }
    if let Some(s) = scale {
        let (c1, c2) = s
            .split_once(',')
            .ok_or(format!("--scale: expected c1,c2, got {s:?}"))?;
        config.scale = Some((
            c1.trim().parse().map_err(|_| "bad scale".to_string())?,
            c2.trim().parse().map_err(|_| "bad scale".to_string())?,
        ));
    }
    if let Some(t) = rigidity_tol {
        config.tolerances.rigidity_constancy = t;
    }
    config.format = cli.format;
    config.validate()?;

    let window = config.r_window.unwrap();
    let grid_cfg = config.grid_config(window.hi);
    let mut case = case_spec.build(&link_spec, &grid_cfg)?;
    if let Some((c1, c2)) = config.scale {
        case = case.scaled(c1, c2);
    }
    if let Some(eps) = config.radial_factor {
        case = case.with_radial_factor(eps);
    }
    if let Some((phase, level)) = config.truncate {
        case = case.with_truncated_phase(phase, level);
    }

    let radii = window.points();
    let profile = functionals::compute_profile(&case, &radii).map_err(|e| e.to_string())?;
    // csv format writes the profile table next to the report; json embeds it
    let mut files = Vec::new();
    let mut embedded_profile = None;
    match config.format {
        OutputFormat::Csv => {
            let csv_name = format!("{command}_profile.csv");
            report::write_aux_file(out_dir, &csv_name, &profile.to_csv())
                .map_err(|e| e.to_string())?;
            files.push(csv_name);
        }
        OutputFormat::Json => {
            embedded_profile = Some(serde_json::to_value(&profile).map_err(|e| e.to_string())?);
        }
    }
    if emit_fields {
        for (i, field) in [(1, &case.u1), (2, &case.u2)] {
            for (name, contents) in field.csv_bundle(&format!("u{i}")) {
                report::write_aux_file(out_dir, &name, &contents).map_err(|e| e.to_string())?;
                files.push(name);
            }
        }
    }

    let mono = functionals::monotonicity_check(&profile, config.tolerances.monotonicity);
    let (chain_ok, chain_worst) = functionals::lower_bound_check(&profile, config.tolerances.chain);
    let mut failures = Vec::new();
    if !mono.pass {
        failures.push(json!({
            "check": "monotonicity of J",
            "first_violation": mono.first_violation,
        }));
    }
    if !chain_ok {
        failures.push(json!({
            "check": "log-derivative chain bound",
            "worst_slack": chain_worst,
        }));
    }
    if !profile.integrals_monotone() {
        failures.push(json!({ "check": "A_i nonnegative and nondecreasing" }));
    }

    let slices = acf_core::fields::positivity_slices(&case, radii[0]).map_err(|e| e.to_string())?;
    let mut payload = json!({
        "case": case.label,
        "degenerate": profile.degenerate,
        "j_first": profile.j.first(),
        "j_last": profile.j.last(),
        "log_log_slope": functionals::log_log_slope(&profile.radii, &profile.j),
        "monotonicity": mono,
        "chain_worst_slack": chain_worst,
        "positivity_slices": [slices.0, slices.1],
        "flagged_nodes": profile.flagged,
        "files": files,
    });
    if let Some(table) = embedded_profile {
        payload["profile"] = table;
    }

    if rigidity {
        let opts = RigidityOptions {
            constancy_tol: config.tolerances.rigidity_constancy,
            ..Default::default()
        };
        let scan = functionals::rigidity_scan(&profile, &case, &opts).map_err(|e| e.to_string())?;
        println!(
            "rigidity: {:?}, intervals {:?}",
            scan.verdict, scan.constant_intervals
        );
        payload["rigidity"] = serde_json::to_value(&scan).unwrap();
    } else {
        println!(
            "J: {} … {} (slope {:.6}), monotone: {}, chain slack ≥ {:.2e}",
            sig17(*profile.j.first().unwrap()),
            sig17(*profile.j.last().unwrap()),
            functionals::log_log_slope(&profile.radii, &profile.j),
            mono.pass,
            chain_worst,
        );
    }
    Ok((config, payload, failures))
}

fn run_verify(cli: &Cli) -> Dispatch {
    let mut config = RunConfig::new("verify");
    config.format = cli.format;
    config.validate()?;
    let report = acf_core::verification::run_all(Exec::default()).map_err(|e| e.to_string())?;
    let mut failures = Vec::new();
    for section in &report.sections {
        let status = if section.all_pass() { "ok" } else { "FAIL" };
        println!(
            "[{status}] {} ({} checks)",
            section.name,
            section.checks.len()
        );
        for check in &section.checks {
            if !check.pass {
                println!(
                    "    FAIL {}: {} vs {}",
                    check.name, check.value, check.threshold
                );
                failures.push(json!({
                    "section": section.name,
                    "check": check.name,
                    "value": check.value,
                    "threshold": check.threshold,
                }));
            }
        }
    }
    let payload = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    Ok((config, payload, failures))
}
