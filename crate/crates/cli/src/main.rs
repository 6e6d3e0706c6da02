//! Command-line surface for the bistellar flip toolkit.
//!
//! Facet files travel between commands: `#` comment lines are ignored, each
//! data line is four whitespace-separated positive integers. Stats are
//! line-oriented `key=value` pairs; they go to stdout unless the command's
//! payload (a facet file or trace) occupies stdout, in which case stats move
//! to stderr so pipelines stay clean. Exit codes: 0 success, 1 domain error
//! (error name on stderr), 2 usage error.

use std::fmt::Display;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use bistellar::anneal::{self, AnnealConfig, AnnealResult, Objective};
use bistellar::canon::canonical_form;
use bistellar::complex::Triangulation;
use bistellar::explorer::{self, BfsLimits, PathOutcome};
use bistellar::flips::{self, FlipKind};
use bistellar::generators;
use bistellar::homology;

#[derive(Parser)]
#[command(name = "bistellar", version, about = "Bistellar flips on triangulated 3-spheres")]
struct Cli {
    /// Write a reproducibility manifest (key=value lines) to this path.
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a facet file is a valid closed 3-pseudomanifold.
    Validate { input: Option<String> },
    /// Print the f-vector as `V E F T`.
    Fvector { input: Option<String> },
    /// Emit the canonical facet file of the input's isomorphism class.
    Canon {
        input: Option<String>,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Print integer homology, e.g. `H0=Z H1=0 H2=0 H3=Z`.
    Homology { input: Option<String> },
    /// List all legal moves of the given kinds, one trace line each.
    Moves {
        input: Option<String>,
        #[arg(long, default_value = "14,23,32,41")]
        kinds: String,
    },
    /// Apply a flip trace to the input complex.
    Flip {
        input: Option<String>,
        #[arg(long, value_name = "PATH")]
        trace: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Generate a triangulation from a named family.
    Gen {
        #[command(subcommand)]
        family: GenCmd,
    },
    /// Random walk by uniformly chosen legal moves.
    Walk {
        input: Option<String>,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value = "23,32")]
        kinds: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Breadth-first search of the flip-graph component of the input.
    Bfs {
        input: Option<String>,
        #[arg(long, default_value = "23,32")]
        kinds: String,
        #[arg(long)]
        max_classes: Option<usize>,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Dump every visited class as a canonical facet file into this directory.
        #[arg(long, value_name = "DIR")]
        dump_dir: Option<PathBuf>,
    },
    /// Report whether the input is a seed (no legal moves of the given kinds).
    Seeds {
        input: Option<String>,
        #[arg(long, default_value = "32")]
        kinds: String,
    },
    /// Search for a vertex-preserving flip path to a stacked sphere.
    Certify {
        input: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        max_classes: usize,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
    },
    /// Simulated annealing with the reduction or stacked-potential objective.
    Anneal {
        input: Option<String>,
        #[arg(long, value_parser = ["reduction", "stacked"])]
        objective: String,
        /// Stacked-potential weight; defaults to s_max + 1.
        #[arg(long)]
        weight: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        /// Initial temperature; defaults to 3 * s_max.
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long, default_value_t = 0.99)]
        cooling: f64,
        #[arg(long, default_value_t = 200)]
        epoch: usize,
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
        #[arg(short, long, value_name = "PATH")]
        output: Option<String>,
    },
    /// Certify sphericity by reducing to the 4-simplex boundary.
    CertifySphere {
        input: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long, default_value_t = 0.99)]
        cooling: f64,
        #[arg(long, default_value_t = 200)]
        epoch: usize,
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
    },
    /// Insert a vertex and expand its link across all original vertices.
    Prepare {
        input: Option<String>,
        #[arg(short, long, default_value = "-")]
        output: String,
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// The boundary of the 4-simplex.
    Simplex {
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// A stacked sphere built by seeded random 1-4 flips.
    Stacked {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// The cyclic 4-polytope boundary C(n,4).
    Cyclic {
        #[arg(long)]
        n: usize,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Random walk from an input complex (same as the top-level `walk`).
    Walk {
        #[arg(long, default_value = "-")]
        input: String,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value = "23,32")]
        kinds: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

/// Collects `key=value` pairs and remembers whether stdout carries a payload.
struct Report {
    stats: Vec<(String, String)>,
    payload_on_stdout: bool,
}

impl Report {
    fn new() -> Self {
        Report {
            stats: Vec::new(),
            payload_on_stdout: false,
        }
    }

    fn push(&mut self, key: &str, value: impl Display) {
        self.stats.push((key.to_string(), value.to_string()));
    }

    fn print(&self) {
        for (k, v) in &self.stats {
            if self.payload_on_stdout {
                eprintln!("{k}={v}");
            } else {
                println!("{k}={v}");
            }
        }
    }
}

/// The reproduction recipe for one run: tool version, command, parameters,
/// and canonical digests of every input.
struct Manifest {
    pairs: Vec<(String, String)>,
}

impl Manifest {
    fn new(command: &str) -> Self {
        let mut pairs = vec![
            ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("command".to_string(), command.to_string()),
        ];
        pairs.reserve(8);
        Manifest { pairs }
    }

    fn param(&mut self, key: &str, value: impl Display) {
        self.pairs.push((key.to_string(), value.to_string()));
    }

    fn input_digest(&mut self, t: &Triangulation) {
        self.pairs.push((
            "input_hash".to_string(),
            format!("{:016x}", canonical_form(t).hash64()),
        ));
    }

    fn write(&self, path: &Path) -> Result<()> {
        let mut text = String::new();
        for (k, v) in &self.pairs {
            text.push_str(&format!("{k}={v}\n"));
        }
        fs::write(path, text).with_context(|| format!("writing manifest {}", path.display()))?;
        Ok(())
    }
}

fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading stdin")?;
        Ok(buf)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn read_triangulation(input: &Option<String>) -> Result<Triangulation> {
    let path = input.as_deref().unwrap_or("-");
    let text = read_source(path)?;
    Ok(bistellar::parse_triangulation(&text)?)
}

/// Writes payload text to a path, or to stdout when the path is `-`.
fn write_payload(path: &str, content: &str, report: &mut Report) -> Result<()> {
    if path == "-" {
        print!("{content}");
        report.payload_on_stdout = true;
    } else {
        fs::write(path, content).with_context(|| format!("writing {path}"))?;
    }
    Ok(())
}

fn parse_kinds(s: &str) -> Result<Vec<FlipKind>> {
    s.split(',')
        .map(|c| {
            FlipKind::from_code(c.trim())
                .ok_or_else(|| anyhow!("unknown move kind {c:?}; use 14, 23, 32, 41"))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut report = Report::new();
    let mut manifest = match &cli.command {
        Cmd::Validate { .. } => Manifest::new("validate"),
        Cmd::Fvector { .. } => Manifest::new("fvector"),
        Cmd::Canon { .. } => Manifest::new("canon"),
        Cmd::Homology { .. } => Manifest::new("homology"),
        Cmd::Moves { .. } => Manifest::new("moves"),
        Cmd::Flip { .. } => Manifest::new("flip"),
        Cmd::Gen { .. } => Manifest::new("gen"),
        Cmd::Walk { .. } => Manifest::new("walk"),
        Cmd::Bfs { .. } => Manifest::new("bfs"),
        Cmd::Seeds { .. } => Manifest::new("seeds"),
        Cmd::Certify { .. } => Manifest::new("certify"),
        Cmd::Anneal { .. } => Manifest::new("anneal"),
        Cmd::CertifySphere { .. } => Manifest::new("certify-sphere"),
        Cmd::Prepare { .. } => Manifest::new("prepare"),
    };

    match cli.command {
        Cmd::Validate { input } => {
            let t = read_triangulation(&input)?;
            manifest.input_digest(&t);
            let fv = t.f_vector();
            report.push("valid", true);
            report.push("n", t.vertex_count());
            report.push("v", fv.v);
            report.push("e", fv.e);
            report.push("f", fv.f);
            report.push("t", fv.t);
            report.push("neighborly", t.is_neighborly());
        }
        Cmd::Fvector { input } => {
            let t = read_triangulation(&input)?;
            manifest.input_digest(&t);
            println!("{}", t.f_vector());
        }
        Cmd::Canon { input, output } => {
            let t = read_triangulation(&input)?;
            manifest.input_digest(&t);
            let form = canonical_form(&t);
            write_payload(&output, &form.emit(), &mut report)?;
            report.push("n", form.n());
            report.push("hash", format!("{:016x}", form.hash64()));
        }
        Cmd::Homology { input } => {
            let t = read_triangulation(&input)?;
            manifest.input_digest(&t);
            println!("{}", homology::homology_profile(&t));
        }
        Cmd::Moves { input, kinds } => {
            let t = read_triangulation(&input)?;
            manifest.input_digest(&t);
            manifest.param("kinds", &kinds);
            let kinds = parse_kinds(&kinds)?;
            let moves = flips::enumerate_moves(&t, &kinds);
            write_payload("-", &flips::emit_trace(&moves), &mut report)?;
            report.push("moves", moves.len());
        }
        Cmd::Flip {
            input,
            trace,
            output,
        } => {
            let t = read_triangulation(&input)?;
            manifest.input_digest(&t);
            let trace_text =
                fs::read_to_string(&trace).with_context(|| format!("reading {}", trace.display()))?;
            let moves = flips::parse_trace(&trace_text)?;
            manifest.param("trace_moves", moves.len());
            let result = flips::replay(&t, &moves)?;
            write_payload(&output, &result.emit(), &mut report)?;
            report.push("applied", moves.len());
            report.push("n", result.vertex_count());
            report.push("t", result.facets().len());
        }
        Cmd::Gen { family } => match family {
            GenCmd::Simplex { output } => {
                let t = generators::boundary_simplex();
                manifest.param("family", "simplex");
                write_payload(&output, &t.emit(), &mut report)?;
                report.push("n", 5);
            }
            GenCmd::Stacked { n, seed, output } => {
                manifest.param("family", "stacked");
                manifest.param("n", n);
                manifest.param("seed", seed);
                let t = generators::stacked_sphere(n, seed)?;
                write_payload(&output, &t.emit(), &mut report)?;
                report.push("n", n);
                report.push("seed", seed);
                report.push("t", t.facets().len());
            }
            GenCmd::Cyclic { n, output } => {
                manifest.param("family", "cyclic");
                manifest.param("n", n);
                let t = generators::cyclic_sphere(n)?;
                write_payload(&output, &t.emit(), &mut report)?;
                report.push("n", n);
                report.push("t", t.facets().len());
            }
            GenCmd::Walk {
                input,
                steps,
                kinds,
                seed,
                output,
            } => {
                let t = bistellar::parse_triangulation(&read_source(&input)?)?;
                manifest.param("family", "walk");
                manifest.input_digest(&t);
                manifest.param("steps", steps);
                manifest.param("kinds", &kinds);
                manifest.param("seed", seed);
                let kinds = parse_kinds(&kinds)?;
                let walk = generators::random_walk(&t, &kinds, steps, seed);
                write_payload(&output, &walk.result.emit(), &mut report)?;
                report.push("seed", seed);
                report.push("steps_applied", walk.steps_applied);
                report.push("stalled", walk.terminated_early(steps));
            }
        },
        Cmd::Walk {
            input,
            steps,
            kinds,
            seed,
            output,
        } => {
            let t = read_triangulation(&input)?;
            manifest.input_digest(&t);
            manifest.param("steps", steps);
            manifest.param("kinds", &kinds);
            manifest.param("seed", seed);
            let kinds = parse_kinds(&kinds)?;
            let walk = generators::random_walk(&t, &kinds, steps, seed);
            write_payload(&output, &walk.result.emit(), &mut report)?;
            report.push("seed", seed);
            report.push("steps_applied", walk.steps_applied);
            report.push("n", walk.result.vertex_count());
        }
        Cmd::Bfs {
            input,
            kinds,
            max_classes,
            max_depth,
            threads,
            dump_dir,
        } => {
            let t = read_triangulation(&input)?;
            manifest.input_digest(&t);
            manifest.param("kinds", &kinds);
            if let Some(c) = max_classes {
                manifest.param("max_classes", c);
            }
            if let Some(d) = max_depth {
                manifest.param("max_depth", d);
            }
            let kinds = parse_kinds(&kinds)?;
            let limits = BfsLimits {
                max_classes,
                max_depth,
                threads,
            };
            let outcome = explorer::bfs_explore(&t, &kinds, &limits);
            if let Some(dir) = dump_dir {
                fs::create_dir_all(&dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
                for (i, class) in outcome.classes.iter().enumerate() {
                    let name = dir.join(format!("class_{i:06}.facets"));
                    fs::write(&name, class.canon.emit())
                        .with_context(|| format!("writing {}", name.display()))?;
                }
            }
            let r = &outcome.report;
            report.push("classes", r.class_count);
            report.push("seeds", r.seed_classes.len());
            report.push("depth", r.max_depth);
            report.push("exhausted", r.frontier_exhausted);
        }
        Cmd::Seeds { input, kinds } => {
            let t = read_triangulation(&input)?;
            manifest.input_digest(&t);
            manifest.param("kinds", &kinds);
            let kinds = parse_kinds(&kinds)?;
            let moves = flips::enumerate_moves(&t, &kinds);
            report.push("kinds", kinds.iter().map(|k| k.code()).collect::<Vec<_>>().join(","));
            report.push("moves", moves.len());
            report.push("seed", moves.is_empty());
        }
        Cmd::Certify {
            input,
            max_classes,
            max_depth,
            threads,
            trace,
        } => {
            let t = read_triangulation(&input)?;
            manifest.input_digest(&t);
            manifest.param("max_classes", max_classes);
            let limits = BfsLimits {
                max_classes: Some(max_classes),
                max_depth,
                threads,
            };
            match explorer::closure_certificate(&t, &limits)? {
                PathOutcome::Found(path) => {
                    report.push("found", true);
                    report.push("length", path.moves.len());
                    report.push("end_hash", format!("{:016x}", path.end.hash64()));
                    if let Some(p) = trace {
                        fs::write(&p, flips::emit_trace(&path.moves))
                            .with_context(|| format!("writing {}", p.display()))?;
                        report.push("trace", p.display());
                    }
                }
                PathOutcome::NotFound { classes_searched } => {
                    report.push("found", false);
                    report.push("classes_searched", classes_searched);
                }
            }
        }
        Cmd::Anneal {
            input,
            objective,
            weight,
            seed,
            budget,
            t0,
            cooling,
            epoch,
            trace,
            output,
        } => {
            let t = read_triangulation(&input)?;
            manifest.input_digest(&t);
            manifest.param("objective", &objective);
            if let Some(w) = weight {
                manifest.param("weight", w);
            }
            manifest.param("seed", seed);
            manifest.param("budget", budget);
            if let Some(t0) = t0 {
                manifest.param("t0", t0);
            }
            manifest.param("cooling", cooling);
            manifest.param("epoch", epoch);
            let obj = match objective.as_str() {
                "reduction" => Objective::Reduction,
                _ => Objective::StackedPotential { weight },
            };
            let config = AnnealConfig {
                initial_temperature: t0,
                cooling_factor: cooling,
                steps_per_temperature: epoch,
                max_flips: budget,
                rng_seed: seed,
                allowed_kinds: None,
            };
            let r = anneal::run(&t, obj, &config)?;
            finish_anneal(&r, seed, trace, output, &mut report)?;
        }
        Cmd::CertifySphere {
            input,
            seed,
            budget,
            t0,
            cooling,
            epoch,
            trace,
        } => {
            let t = read_triangulation(&input)?;
            manifest.input_digest(&t);
            manifest.param("seed", seed);
            manifest.param("budget", budget);
            manifest.param("cooling", cooling);
            manifest.param("epoch", epoch);
            let config = AnnealConfig {
                initial_temperature: t0,
                cooling_factor: cooling,
                steps_per_temperature: epoch,
                max_flips: budget,
                rng_seed: seed,
                allowed_kinds: None,
            };
            let r = anneal::reduce_to_simplex(&t, &config)?;
            report.push("sphere", r.success);
            finish_anneal(&r, seed, trace, None, &mut report)?;
        }
        Cmd::Prepare {
            input,
            output,
            trace,
        } => {
            let t = read_triangulation(&input)?;
            manifest.input_digest(&t);
            let p = anneal::prepare_unflippable(&t)?;
            write_payload(&output, &p.result.emit(), &mut report)?;
            if let Some(path) = trace {
                fs::write(&path, flips::emit_trace(&p.moves))
                    .with_context(|| format!("writing {}", path.display()))?;
                report.push("trace", path.display());
            }
            report.push("new_vertex", p.new_vertex);
            report.push("link_size", p.link_size);
            report.push("flips", p.moves.len());
        }
    }

    report.print();
    if let Some(path) = cli.manifest {
        manifest.write(&path)?;
    }
    Ok(())
}

fn finish_anneal(
    r: &AnnealResult,
    seed: u64,
    trace: Option<PathBuf>,
    output: Option<String>,
    report: &mut Report,
) -> Result<()> {
    if let Some(out) = output {
        write_payload(&out, &r.final_state.emit(), report)?;
    }
    report.push("seed", seed);
    report.push("success", r.success);
    report.push("best_cost", r.best_cost);
    report.push("proposals", r.proposals);
    report.push("applied", r.applied);
    report.push("final_n", r.final_state.vertex_count());
    report.push("final_t", r.final_state.facets().len());
    if let Some(p) = trace {
        fs::write(&p, flips::emit_trace(&r.trace))
            .with_context(|| format!("writing {}", p.display()))?;
        report.push("trace", p.display());
    }
    Ok(())
}
