use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use garage_core::catalog;
use garage_core::covers::{branch_point_count, certify_tiling, cover_analysis, suitability_screen};
use garage_core::dynamics::billiard::lift_to_surface;
use garage_core::dynamics::growth::directions_up_to_sign as sc_directions;
use garage_core::dynamics::{
    aperiodicity_evidence, billiard_trace, classify_direction, flow_trace, growth_count, saddle_connections, ClassifyOptions,
    Location, Tolerances,
};
use garage_core::format::{read_garage, write_garage};
use garage_core::surface::unfold;
use garage_core::{report, repro, svg, Garage, Vec2};

#[derive(Parser, Debug)]
#[command(name = "garage", version, about = "Translation surfaces from rational polygons and parking garages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a catalog garage in the explicit file format.
    Gen {
        family: String,
        n: Option<u32>,
        stage: Option<String>,
        /// Output file (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Unfold a garage and report the translation surface.
    Unfold {
        file: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Certify that P tiles Q and analyze the induced cover M_Q -> M_P.
    Cover {
        p: PathBuf,
        q: PathBuf,
        /// Run the suitability screen.
        #[arg(long)]
        screen: bool,
        /// Assert that P is a lattice polygon.
        #[arg(long)]
        lattice: bool,
        /// Height-split heuristic at each branch point in this direction.
        #[arg(long, value_name = "DX,DY", value_parser = parse_pair, allow_hyphen_values = true)]
        aperiodic: Option<(f64, f64)>,
        #[arg(long, default_value_t = 40)]
        cf_depth: usize,
        #[arg(long, default_value_t = 1e6)]
        cf_cap: f64,
        #[arg(long, default_value_t = 100.0)]
        budget: f64,
    },
    /// Trace the straight-line flow on the unfolding, or the billiard.
    Trace {
        file: PathBuf,
        /// Plane point inside the garage.
        #[arg(long, value_name = "X,Y", value_parser = parse_pair, allow_hyphen_values = true)]
        start: (f64, f64),
        #[arg(long, value_name = "DX,DY", value_parser = parse_pair, allow_hyphen_values = true)]
        dir: (f64, f64),
        #[arg(long)]
        len: f64,
        #[arg(long)]
        billiard: bool,
        #[arg(long, default_value_t = 1000)]
        bounces: u64,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Classify evenly spread directions and saddle-connection directions.
    Scan {
        file: PathBuf,
        #[arg(long)]
        dirs: usize,
        /// Separatrix length budget for decompositions.
        #[arg(long)]
        budget: f64,
        /// Saddle connections up to this length contribute directions
        /// (default: twice the longest base edge).
        #[arg(long)]
        sc_len: Option<f64>,
        /// Face crossings per test orbit.
        #[arg(long, default_value_t = 100_000)]
        crossings: u64,
        #[arg(long, default_value_t = 20)]
        grid: usize,
        #[arg(long, default_value_t = 8)]
        orbits: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List saddle connections up to a length; optionally fit growth.
    Sc {
        file: PathBuf,
        #[arg(long)]
        lmax: f64,
        /// Fit the growth exponent on T = lmax/8, lmax/4, lmax/2, lmax.
        #[arg(long)]
        fit: bool,
    },
    /// Run a reproduction script.
    Repro { script: String, n: u32 },
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated numbers, got {s:?}"))?;
    let x: f64 = a.trim().parse().map_err(|_| format!("bad number {a:?}"))?;
    let y: f64 = b.trim().parse().map_err(|_| format!("bad number {b:?}"))?;
    if !(x.is_finite() && y.is_finite()) {
        return Err("coordinates must be finite".into());
    }
    Ok((x, y))
}

fn load(path: &Path) -> Result<Garage> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_garage(&text).with_context(|| format!("in {}", path.display()))
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Failures that map to a distinct exit code.
enum Failure {
    Domain(anyhow::Error),
    Repro(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Domain(e)
    }
}

fn run(cmd: Command) -> Result<String, Failure> {
    let tol = Tolerances::default();
    let out = match cmd {
        Command::Gen { family, n, stage, output } => {
            let g = catalog::generate(&family, n, stage.as_deref()).map_err(anyhow::Error::from)?;
            let text = write_garage(&g);
            match output {
                Some(p) => {
                    write_out(&p, &text)?;
                    String::new()
                }
                None => text,
            }
        }
        Command::Unfold { file, svg: svg_path } => {
            let g = load(&file)?;
            let s = unfold(&g);
            if let Some(p) = svg_path {
                write_out(&p, &svg::surface_svg(&s, &[]))?;
            }
            report::surface_report(&s).render()
        }
        Command::Cover {
            p,
            q,
            screen,
            lattice,
            aperiodic,
            cf_depth,
            cf_cap,
            budget,
        } => {
            let (p, q) = (load(&p)?, load(&q)?);
            let cert = certify_tiling(&p, &q).map_err(|e| anyhow!("tiling certification failed: {e}"))?;
            let mut r = report::Report::new();
            r.merge("cover", &report::cover_report(&cover_analysis(&cert)));
            if screen {
                r.merge("screen", &report::verdict_report(&suitability_screen(&cert, lattice)));
            }
            if let Some((dx, dy)) = aperiodic {
                for &pt in branch_point_count(&cert).keys() {
                    let key = format!("aperiodic.point.{pt:04}");
                    match aperiodicity_evidence(&cert.map.mp, Location::Class(pt), Vec2::new(dx, dy), budget, cf_depth, cf_cap, &tol) {
                        Ok(h) => {
                            r.merge(&key, &report::height_split_report(&h));
                        }
                        Err(e) => {
                            r.set(format!("{key}.error"), e);
                        }
                    }
                }
            }
            r.render()
        }
        Command::Trace {
            file,
            start,
            dir,
            len,
            billiard,
            bounces,
            svg: svg_path,
        } => {
            let g = load(&file)?;
            let start = Vec2::new(start.0, start.1);
            let dir = Vec2::new(dir.0, dir.1);
            if billiard {
                let t = billiard_trace(&g, start, dir, bounces, len, &tol).map_err(anyhow::Error::from)?;
                if let Some(p) = svg_path {
                    write_out(&p, &svg::garage_svg(&g, Some(&t)))?;
                }
                report::billiard_report(&t).render()
            } else {
                let s = unfold(&g);
                let sp = lift_to_surface(&g, &s, start, tol.eps_len).ok_or_else(|| anyhow!("start point is outside the garage"))?;
                let t = flow_trace(&s, sp, dir, len, &tol).map_err(anyhow::Error::from)?;
                if let Some(p) = svg_path {
                    write_out(&p, &svg::surface_svg(&s, &[&t.segments]))?;
                }
                report::trajectory_report(&t).render()
            }
        }
        Command::Scan {
            file,
            dirs,
            budget,
            sc_len,
            crossings,
            grid,
            orbits,
            seed,
        } => {
            let g = load(&file)?;
            let s = unfold(&g);
            let longest = (0..g.base().len()).map(|e| g.base().edge_length(e)).fold(0.0, f64::max);
            let bound = sc_len.unwrap_or(2.0 * longest);
            let opts = ClassifyOptions {
                separatrix_budget: budget,
                crossings,
                grid,
                orbits,
                seed,
                checkpoints: None,
            };
            let mut directions: Vec<Vec2> = (0..dirs)
                .map(|i| Vec2::from_angle(std::f64::consts::PI * (i as f64 + 0.5) / dirs as f64))
                .collect();
            let hol: Vec<Vec2> = saddle_connections(&s, bound, &tol).iter().map(|h| h.vec()).collect();
            directions.extend(sc_directions(&hol));
            let mut r = report::Report::new();
            r.set("directions", directions.len());
            r.set("saddle_connection_bound", bound);
            for (i, d) in directions.iter().enumerate() {
                let rep = classify_direction(&s, *d, &opts, &tol).map_err(anyhow::Error::from)?;
                r.merge(&format!("direction.{i:04}"), &report::direction_report(&rep));
            }
            r.render()
        }
        Command::Sc { file, lmax, fit } => {
            let g = load(&file)?;
            let s = unfold(&g);
            let h = saddle_connections(&s, lmax, &tol);
            let mut r = report::saddle_report(&h, lmax);
            if fit {
                let ts = [lmax / 8.0, lmax / 4.0, lmax / 2.0, lmax];
                let gr = growth_count(&s, &ts, &tol).map_err(anyhow::Error::from)?;
                r.merge("growth", &report::growth_report(&gr));
            }
            r.render()
        }
        Command::Repro { script, n } => {
            let o = repro::run(&script, n).map_err(anyhow::Error::from)?;
            let text = o.render();
            if !o.passed() {
                return Err(Failure::Repro(text));
            }
            text
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Repro(text)) => {
            print!("{text}");
            ExitCode::from(3)
        }
    }
}
