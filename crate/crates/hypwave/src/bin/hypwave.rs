//! Thin command-line front end over the `hypwave` library: single
//! simulations, admissibility queries, the cone-transform exports, the
//! lemma sweeps, and the named experiment runner.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hypwave::admissibility::{min_sigma, region_polygon};
use hypwave::cone::{local_energy_j1, local_energy_j2, pushforward, CartesianSolution};
use hypwave::csvio::{
    write_csv, write_json, write_snapshots2d_csv, write_snapshots_csv, write_trajectory2d_csv,
    write_trajectory_csv,
};
use hypwave::experiments::{catalog_json, run as run_experiment, ExperimentSpec};
use hypwave::geometry::RadialGrid;
use hypwave::inequalities::{randomized_check, LemmaId};
use hypwave::solver::euclidean::{simulate_quintic, InitialData2d, SimConfig2d};
use hypwave::solver::hyperbolic::{simulate, InitialData, SimConfig};
use hypwave::solver::{SnapshotPolicy, Zeta};

#[derive(Parser)]
#[command(name = "hypwave", version, about = "Shifted-wave and quintic-wave numerical laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Equation {
    Hyperbolic,
    Quintic2d,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and export the trajectory and snapshots.
    Simulate {
        #[arg(long, value_enum, default_value = "hyperbolic")]
        eq: Equation,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3.0)]
        p: f64,
        /// -1 defocusing, +1 focusing
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        zeta: i64,
        #[arg(long, default_value_t = 20.0)]
        r_max: f64,
        #[arg(long, default_value_t = 2001)]
        num_points: usize,
        #[arg(long, default_value_t = 10.0)]
        t_final: f64,
        /// dt = cfl * h
        #[arg(long, default_value_t = 0.4)]
        cfl: f64,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        #[arg(long, default_value_t = 0.0)]
        center: f64,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        /// switch the nonlinearity off
        #[arg(long)]
        linear: bool,
        /// load initial data from a snapshot CSV (r, u, ut) instead of the
        /// gaussian profile
        #[arg(long)]
        initial_file: Option<PathBuf>,
        /// start from the k-th discrete eigenmode instead of the gaussian
        #[arg(long)]
        eigenmode: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Export the sigma-admissible region polygon as CSV.
    Regions {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value = "region.csv")]
        out: PathBuf,
    },
    /// Minimal regularity sigma for (n, p), printed as JSON.
    Minsigma {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Push a quintic run through the light-cone map and export J1/J2/g.
    Transform {
        #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, default_value_t = 14.0)]
        r_max: f64,
        #[arg(long, default_value_t = 1401)]
        num_points: usize,
        #[arg(long, default_value_t = 5.0)]
        t_forward: f64,
        #[arg(long, default_value_t = 3.0)]
        t_backward: f64,
        #[arg(long, default_value_t = 0.09)]
        delta: f64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Randomized verification of the weighted integral inequalities.
    VerifyLemmas {
        /// one of: all, sphere, two_factor, three_factor
        #[arg(long, default_value = "all")]
        lemma: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = "report.json")]
        out: PathBuf,
    },
    /// Run a named experiment from a TOML spec.
    Run {
        spec: PathBuf,
        /// override the spec's output directory
        #[arg(long)]
        out: Option<PathBuf>,
        /// override the spec's seed
        #[arg(long)]
        seed: Option<u64>,
        /// parallel workers for parameter sweeps
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// List the experiment catalog.
    List {
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                hypwave::Error::Config(_)
                | hypwave::Error::InvalidParameter(_)
                | hypwave::Error::DimensionOutOfRange(_) => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn dispatch(cmd: Command) -> hypwave::Result<ExitCode> {
    match cmd {
        Command::Simulate {
            eq,
            n,
            p,
            zeta,
            r_max,
            num_points,
            t_final,
            cfl,
            amplitude,
            center,
            width,
            linear,
            initial_file,
            eigenmode,
            out,
        } => {
            std::fs::create_dir_all(&out)?;
            let h = r_max / (num_points - 1) as f64;
            match eq {
                Equation::Hyperbolic => {
                    let mut cfg = SimConfig::defaults(
                        n,
                        p,
                        if zeta >= 0 { Zeta::Focusing } else { Zeta::Defocusing },
                        r_max,
                        num_points,
                    );
                    cfg.t_final = t_final;
                    cfg.dt = cfl * h;
                    cfg.nonlinear = !linear;
                    cfg.initial = match (&initial_file, eigenmode) {
                        (Some(path), _) => InitialData::File { path: path.clone() },
                        (None, Some(k)) => InitialData::Eigenmode { k },
                        (None, None) => InitialData::Gaussian {
                            amplitude,
                            center,
                            width,
                        },
                    };
                    let traj = simulate(&cfg)?;
                    write_trajectory_csv(out.join("trajectory.csv"), &traj, 4096)?;
                    write_snapshots_csv(out.join("snapshots"), &traj, 64)?;
                    println!(
                        "status: {:?}; energy0 = {:.6e}; wrote {}",
                        traj.status,
                        traj.initial_energy(),
                        out.display()
                    );
                }
                Equation::Quintic2d => {
                    let mut cfg = SimConfig2d::defaults(r_max, num_points, t_final);
                    cfg.dt = cfl * h;
                    cfg.nonlinear = !linear;
                    cfg.initial = InitialData2d::Gaussian {
                        amplitude,
                        center,
                        width,
                    };
                    let traj = simulate_quintic(&cfg)?;
                    write_trajectory2d_csv(out.join("trajectory.csv"), &traj, 4096)?;
                    write_snapshots2d_csv(out.join("snapshots"), &traj, 64)?;
                    println!(
                        "status: {:?}; energy0 = {:.6e}; wrote {}",
                        traj.status,
                        traj.initial_energy(),
                        out.display()
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Regions { n, sigma, out } => {
            let poly = region_polygon(sigma, n)?;
            write_csv(
                &out,
                &["inv_p", "inv_q", "in_original", "on_open_boundary"],
                poly.vertices.iter().map(|v| {
                    vec![
                        v.inv_p,
                        v.inv_q,
                        if v.in_original { 1.0 } else { 0.0 },
                        if v.on_open_boundary { 1.0 } else { 0.0 },
                    ]
                }),
            )?;
            println!("wrote {} ({} vertices)", out.display(), poly.vertices.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::Minsigma { n, p, tol } => {
            let result = min_sigma(p, n, tol)?;
            let json = serde_json::json!({
                "n": n,
                "p": p,
                "sigma": result.sigma,
                "witness_pair": {
                    "p1": 1.0 / result.witness.0,
                    "q1": 1.0 / result.witness.1,
                    "inv_p1": result.witness.0,
                    "inv_q1": result.witness.1,
                },
            });
            println!("{}", serde_json::to_string_pretty(&json).expect("serialize"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Transform {
            t0,
            r_max,
            num_points,
            t_forward,
            t_backward,
            delta,
            out,
        } => {
            std::fs::create_dir_all(&out)?;
            let mut cfg = SimConfig2d::defaults(r_max, num_points, t_forward);
            cfg.initial = InitialData2d::PowerLaw {
                amplitude: 1.0,
                eps: 0.5,
                taper_start: 4.0,
                taper_end: 7.0,
            };
            cfg.snapshots = SnapshotPolicy::EveryKSteps(4);
            let fwd = simulate_quintic(&cfg)?;
            let mut bcfg = cfg.clone();
            bcfg.t_final = t_backward;
            bcfg.initial = InitialData2d::Fields {
                u0: fwd.snapshots[0].u.clone(),
                u1: fwd.snapshots[0].ut.iter().map(|v| -v).collect(),
            };
            let bwd = simulate_quintic(&bcfg)?;
            let sol = CartesianSolution::from_trajectories(&fwd, Some(&bwd))?;

            let h2_grid = RadialGrid::new(2, 2.4, 481)?;
            let mut j1_rows = Vec::new();
            for k in 0..=10 {
                let tau = -1.0 + 0.1 * k as f64;
                let state = pushforward(&sol, t0, tau, &h2_grid)?;
                j1_rows.push(vec![tau, local_energy_j1(&state, t0)?]);
            }
            write_csv(out.join("j1.csv"), &["tau", "J1"], j1_rows.into_iter())?;

            let (s_lo, s_hi) =
                hypwave::cone::ring_s0_range(-0.5, t0, t_forward - 0.3, r_max - 1.0)?;
            let mut j2_rows = Vec::new();
            for k in 0..=6 {
                let s0 = s_lo + (s_hi - s_lo) * k as f64 / 6.0;
                let (j2, _) = local_energy_j2(&sol, -0.5, s0, t0, delta, 384)?;
                j2_rows.push(vec![s0, j2]);
            }
            write_csv(out.join("j2.csv"), &["s0", "J2"], j2_rows.into_iter())?;

            let (_, profile) = local_energy_j2(&sol, -0.5, s_hi, t0, delta, 384)?;
            write_csv(
                out.join("g_profile.csv"),
                &["r", "g", "g1", "g2", "g3", "g4"],
                (0..profile.r.len()).map(|i| {
                    vec![
                        profile.r[i],
                        profile.g[i],
                        profile.g1[i],
                        profile.g2[i],
                        profile.g3[i],
                        profile.g4[i],
                    ]
                }),
            )?;
            println!("wrote j1.csv, j2.csv, g_profile.csv under {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyLemmas {
            lemma,
            samples,
            seed,
            out,
        } => {
            let ids: Vec<LemmaId> = if lemma == "all" {
                vec![LemmaId::Sphere, LemmaId::TwoFactor, LemmaId::ThreeFactor]
            } else {
                vec![LemmaId::parse(&lemma)?]
            };
            let mut reports = Vec::new();
            let mut clean = true;
            for id in ids {
                let rep = randomized_check(id, samples, seed)?;
                clean &= rep.violations == 0;
                println!(
                    "{}: samples {}, max_ratio {:.6}, violations {}",
                    id.name(),
                    rep.samples,
                    rep.max_ratio,
                    rep.violations
                );
                reports.push(serde_json::json!({
                    "lemma_id": id.name(),
                    "samples": rep.samples,
                    "seed": rep.seed,
                    "max_ratio": rep.max_ratio,
                    "violations": rep.violations,
                    "fitted_constant": rep.fitted_constant,
                }));
            }
            write_json(&out, &reports)?;
            Ok(if clean { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
        Command::Run {
            spec,
            out,
            seed,
            jobs,
        } => {
            let text = std::fs::read_to_string(&spec)?;
            let mut parsed = ExperimentSpec::from_toml_str(&text)?;
            if let Some(dir) = out {
                parsed.output_dir = Some(dir);
            }
            if let Some(s) = seed {
                parsed.seed = s;
            }
            let report = run_experiment(&parsed, jobs.max(1));
            for a in &report.assertions {
                println!(
                    "[{}] {}: {}",
                    if a.passed { "pass" } else { "FAIL" },
                    a.name,
                    a.detail
                );
            }
            println!(
                "experiment {} finished in {:.2}s with exit code {}",
                report.experiment, report.wall_time_secs, report.exit_code
            );
            Ok(ExitCode::from(report.exit_code as u8))
        }
        Command::List { format } => {
            match format {
                OutputFormat::Json => println!("{}", catalog_json()),
                OutputFormat::Csv => {
                    println!("name,summary");
                    for info in hypwave::experiments::list_experiments() {
                        println!("{},{}", info.name, info.summary.replace(',', ";"));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
