use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ctopprm::bench::{run_bench, BenchOptions, DEFAULT_N_SHORTEST};
use ctopprm::env::Environment;
use ctopprm::oracle::{enumerate_classes, DEFAULT_BUDGET_RATIO, DEFAULT_PITCH};
use ctopprm::planner::{plan, PlannerParams};
use ctopprm::scenario::{generate, Family, Scenario};
use ctopprm::svg::{render, SvgOptions};
use ctopprm::topology::Path;
use ctopprm::Error;

#[derive(Parser)]
#[command(
    name = "ctopprm",
    version,
    about = "Topologically distinct paths with a clustering PRM"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated scenario file.
    Gen {
        /// windows:<spec> (e.g. 1-3-1, 1s-2-1s), poles[:count[:spacing]] or building
        #[arg(long)]
        family: Family,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plan once and write the distinct paths as JSON.
    Plan {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Draw the dense roadmap in the SVG.
        #[arg(long)]
        roadmap: bool,
    },
    /// Repeat planning over seeds and report success rates.
    Bench {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Seed of the first trial; trial i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV report; the JSON report goes next to it with a .json extension.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_N_SHORTEST)]
        n_shortest: usize,
        /// Write zero timings so the CSV is byte-identical across runs.
        #[arg(long)]
        reproducible: bool,
    },
    /// Count path classes by brute force on a lattice roadmap.
    Oracle {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long, default_value_t = DEFAULT_PITCH)]
        pitch: f64,
        /// Length budget as a multiple of the lattice shortest path.
        #[arg(long, default_value_t = DEFAULT_BUDGET_RATIO)]
        budget: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SceneArgs {
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    scenario: Option<PathBuf>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    kappa_p: Option<f64>,
    #[arg(long)]
    kappa_s: Option<f64>,
    #[arg(long)]
    delta_d: Option<f64>,
    #[arg(long)]
    clearance: Option<f64>,
}

impl SceneArgs {
    fn load(&self) -> ctopprm::Result<(Scenario, Environment)> {
        let mut scenario = match (&self.scenario, &self.family) {
            (Some(path), _) => Scenario::load(path)?.0,
            (None, Some(family)) => generate(family, None)?,
            (None, None) => unreachable!("clap requires one of them"),
        };
        let p = &mut scenario.params;
        p.num_samples = self.samples.unwrap_or(p.num_samples);
        p.k = self.k.unwrap_or(p.k);
        p.max_clusters = self.m.unwrap_or(p.max_clusters);
        p.kappa_p = self.kappa_p.unwrap_or(p.kappa_p);
        p.kappa_s = self.kappa_s.unwrap_or(p.kappa_s);
        p.delta_d = self.delta_d.unwrap_or(p.delta_d);
        p.clearance = self.clearance.unwrap_or(p.clearance);
        p.validate()?;
        let base = self.scenario.as_deref().and_then(FsPath::parent);
        let env = scenario.environment(base)?;
        Ok((scenario, env))
    }
}

fn write_or_print(out: Option<&FsPath>, text: &str) -> ctopprm::Result<()> {
    match out {
        Some(path) => Ok(std::fs::write(path, text)?),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn svg_options(scenario: &Scenario, show_roadmap: bool) -> SvgOptions {
    SvgOptions {
        slice_z: scenario.params.planar.then_some(scenario.start.z),
        show_roadmap,
        ..SvgOptions::default()
    }
}

fn paths_json(paths: &[Path]) -> String {
    let list: Vec<serde_json::Value> = paths.iter().map(Path::to_json_value).collect();
    serde_json::to_string_pretty(&serde_json::json!({ "paths": list })).expect("paths serialize")
}

fn run(cli: Cli) -> ctopprm::Result<ExitCode> {
    match cli.command {
        Command::Gen { family, out } => {
            let scenario = generate(&family, None)?;
            write_or_print(out.as_deref(), &scenario.to_json())?;
        }
        Command::Plan {
            scene,
            seed,
            out,
            svg,
            roadmap,
        } => {
            let (scenario, env) = scene.load()?;
            let params = PlannerParams {
                seed: seed.unwrap_or(scenario.params.seed),
                ..scenario.params
            };
            let result = match plan(&env, &scenario.start, &scenario.goal, &params) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("planning failed ({}): {e}", e.kind());
                    return Ok(ExitCode::from(2));
                }
            };
            write_or_print(out.as_deref(), &result.to_json())?;
            if let Some(path) = svg {
                let drawing = render(
                    &env,
                    &scenario.start,
                    &scenario.goal,
                    &result.paths,
                    Some(&result.roadmap),
                    &svg_options(&scenario, roadmap),
                );
                std::fs::write(path, drawing)?;
            }
            eprintln!(
                "{} distinct paths, shortest {:.3} m, {:.1} ms",
                result.paths.len(),
                result.paths.first().map_or(f64::NAN, Path::length),
                result.stats.times.total().as_secs_f64() * 1e3
            );
            if result.paths.is_empty() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Bench {
            scene,
            trials,
            seed,
            out,
            n_shortest,
            reproducible,
        } => {
            if trials == 0 {
                return Err(Error::InvalidParams("trials must be at least 1".into()));
            }
            let (scenario, env) = scene.load()?;
            let opts = BenchOptions {
                trials,
                seed_base: seed,
                n_shortest,
                zero_timings: reproducible,
            };
            let report = run_bench(&env, &scenario, &scenario.params, &opts)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, report.to_csv())?;
                    std::fs::write(path.with_extension("json"), report.to_json())?;
                }
                None => print!("{}", report.to_csv()),
            }
            eprintln!("{}", report.summary());
        }
        Command::Oracle {
            scene,
            pitch,
            budget,
            out,
        } => {
            let (scenario, env) = scene.load()?;
            let p = &scenario.params;
            let result = match enumerate_classes(
                &env,
                &scenario.start,
                &scenario.goal,
                pitch,
                budget,
                p.delta_d,
                p.planar,
            ) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("oracle failed ({}): {e}", e.kind());
                    return Ok(ExitCode::from(2));
                }
            };
            write_or_print(out.as_deref(), &paths_json(&result.class_representatives))?;
            eprintln!(
                "{} classes from {} lattice paths over {} nodes",
                result.class_count, result.enumerated_paths, result.lattice_nodes
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error ({}): {e}", e.kind());
            ExitCode::FAILURE
        }
    }
}
