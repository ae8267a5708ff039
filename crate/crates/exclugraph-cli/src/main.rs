//! Command-line front end: family generation, graph transforms, bounds,
//! quantum-set membership and witnesses, and the result verifiers.
//!
//! Exit codes: 0 success, 2 parameter/structural errors, 3 numerical
//! errors (including verifications that ran but did not pass).

mod cache;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use exclugraph::bounds::{bounds_report, WeightVector};
use exclugraph::graph::{parse_graph_text, to_edge_list, to_graph6, FamilySpec, Graph};
use exclugraph::quantum::{
    membership, quantum_max, symmetrize, verify_result1, verify_result2, verify_result3,
    Distribution, Witness,
};
use exclugraph::sdp::solve_theta_sdp;
use exclugraph::Error;

use cache::CacheKey;
use report::{format_float, unix_timestamp, CsvRow, RunReport, CSV_HEADER};

#[derive(Parser)]
#[command(
    name = "exclugraph",
    version,
    about = "Classical, quantum, and exclusivity-principle bounds of exclusivity graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Duality-gap tolerance for the SDP solves.
    #[arg(long, global = true, default_value_t = exclugraph::sdp::SDP_DEFAULT_TOL)]
    tol: f64,

    /// Cache file path (overrides the EXCLUGRAPH_CACHE environment variable).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Disable the result cache for this run.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Append a CSV row (bounds and sweep commands).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphInput {
    /// Family spec: cycle:N, antihole:N, circulant:N:d1,d2, complete:N,
    /// empty:N, paley:Q, petersen.
    #[arg(long)]
    family: Option<String>,

    /// Graph text: graph6, or an edge list like "5; 0-1 1-2 2-3 3-4 4-0".
    #[arg(long)]
    graph: Option<String>,
}

impl GraphInput {
    fn load(&self) -> Result<(Graph, String), Error> {
        match (&self.family, &self.graph) {
            (Some(spec), None) => {
                let g = FamilySpec::parse(spec)?.generate()?;
                Ok((g, format!("--family {spec}")))
            }
            (None, Some(text)) => {
                let g = parse_graph_text(text)?;
                Ok((g, format!("--graph \"{text}\"")))
            }
            _ => Err(Error::Parameter("exactly one of --family/--graph is required".into())),
        }
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DistInput {
    /// Comma-separated per-vertex probabilities.
    #[arg(long)]
    dist: Option<String>,

    /// File with one probability per line.
    #[arg(long, value_name = "PATH")]
    dist_file: Option<PathBuf>,
}

impl DistInput {
    fn load(&self) -> Result<Distribution<f64>, Error> {
        let values: Vec<f64> = match (&self.dist, &self.dist_file) {
            (Some(text), None) => parse_float_list(text)?,
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::Parameter(format!("cannot read {}: {e}", path.display()))
                })?;
                text.lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(|l| {
                        l.parse::<f64>()
                            .map_err(|_| Error::Parameter(format!("bad probability '{l}'")))
                    })
                    .collect::<Result<_, _>>()?
            }
            _ => return Err(Error::Parameter("exactly one of --dist/--dist-file is required".into())),
        };
        Distribution::new(values)
    }
}

fn parse_float_list(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::Parameter(format!("bad number '{t}'"))))
        .collect()
}

#[derive(Subcommand)]
enum Command {
    /// Emit the graph6 form of a named family member.
    Family {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Emit the graph6 form of the edge-complement.
    Complement {
        #[command(flatten)]
        input: GraphInput,
    },
    /// OR product (co-normal product) of two graphs.
    Product {
        /// Use the OR product (the only supported product).
        #[arg(long)]
        or: bool,
        #[command(flatten)]
        input: GraphInput,
        /// Family spec of the right factor.
        #[arg(long)]
        family2: Option<String>,
        /// Graph text of the right factor.
        #[arg(long)]
        graph2: Option<String>,
    },
    /// Classical, quantum, and exclusivity-principle bounds.
    Bounds {
        #[command(flatten)]
        input: GraphInput,
        /// Comma-separated vertex weights (default: all ones).
        #[arg(long)]
        weights: Option<String>,
    },
    /// Quantum-set membership of a distribution.
    Membership {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        dist: DistInput,
    },
    /// Exclusivity witness against a supra-quantum distribution.
    Witness {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        dist: DistInput,
    },
    /// Average a distribution over the automorphism group.
    Symmetrize {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        dist: DistInput,
    },
    /// Quantum maxima of the graph and its complement.
    QuantumMax {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Run one of the three duality verifications.
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
    /// Bounds CSV rows over a size range of a family.
    Sweep {
        /// Family kind: cycle, antihole, complete, empty, or paley.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Sampled quantum-set exclusion: inside points respect the
    /// exclusivity products, outside points get verified witnesses.
    Result1 {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Witness products against scaled supra-quantum points on a
    /// self-complementary graph.
    Result2 {
        #[command(flatten)]
        input: GraphInput,
        /// Comma-separated supra-quantum scales.
        #[arg(long, default_value = "0.05,0.1,0.2")]
        eps: String,
    },
    /// theta(G) * theta(complement) = n on a vertex-transitive graph.
    Result3 {
        #[command(flatten)]
        input: GraphInput,
    },
}

fn main() -> ExitCode {
    // die quietly when stdout is closed early (e.g. piped into `head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Numerical(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn cache_path(cli: &Cli) -> Option<PathBuf> {
    if cli.no_cache {
        return None;
    }
    if let Some(path) = &cli.cache {
        return Some(path.clone());
    }
    if let Ok(path) = std::env::var("EXCLUGRAPH_CACHE") {
        return Some(PathBuf::from(path));
    }
    Some(PathBuf::from(".exclugraph_cache.jsonl"))
}

/// Prints a finished record: cached body or fresh body, then the timestamp.
/// CSV side outputs are produced inside `build`, so `--csv` runs skip the
/// cache lookup (the row must be appended either way).
fn emit(cli: &Cli, key: CacheKey, build: impl FnOnce() -> Result<String, Error>) -> Result<(), Error> {
    let path = cache_path(cli);
    if let Some(path) = path.as_ref().filter(|_| cli.csv.is_none()) {
        if let Some(body) = cache::lookup(path, &key) {
            eprintln!("cache: hit");
            print!("{body}");
            println!("timestamp = {}", unix_timestamp());
            return Ok(());
        }
    }
    let body = build()?;
    print!("{body}");
    println!("timestamp = {}", unix_timestamp());
    if let Some(path) = &path {
        if let Err(e) = cache::store(path, &key, &body) {
            eprintln!("cache: write failed: {e}");
        } else {
            eprintln!("cache: stored");
        }
    }
    Ok(())
}

fn append_csv(path: &Path, row: &CsvRow) -> Result<(), Error> {
    use std::io::Write;
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::Parameter(format!("cannot open {}: {e}", path.display())))?;
    if fresh {
        writeln!(file, "{CSV_HEADER}").ok();
    }
    writeln!(file, "{}", row.render()).ok();
    Ok(())
}

fn echo_floats(values: &[f64]) -> String {
    values.iter().map(|v| format_float(*v)).collect::<Vec<_>>().join(",")
}

fn witness_fields(report: &mut RunReport, witness: &Witness<f64>) {
    report.push_floats("witness_dist", witness.distribution.as_slice());
    report.push_float("witness_product", witness.product);
    report.push_float("witness_membership_check", witness.membership_check);
}

fn run(cli: &Cli) -> Result<(), Error> {
    let tol = cli.tol;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }
    let tol_echo = format!("{tol:e}");

    match &cli.command {
        Command::Family { input } => {
            let (g, echo) = input.load()?;
            let mut report = RunReport::new(&format!("family {echo}"));
            describe_graph(&mut report, &g);
            print!("{}", report.body());
            println!("timestamp = {}", unix_timestamp());
            Ok(())
        }
        Command::Complement { input } => {
            let (g, echo) = input.load()?;
            let c = g.complement();
            let mut report = RunReport::new(&format!("complement {echo}"));
            describe_graph(&mut report, &c);
            print!("{}", report.body());
            println!("timestamp = {}", unix_timestamp());
            Ok(())
        }
        Command::Product { or, input, family2, graph2 } => {
            if !*or {
                return Err(Error::Parameter("only the OR product is supported; pass --or".into()));
            }
            let (left, left_echo) = input.load()?;
            let (right, right_echo) = match (family2, graph2) {
                (Some(spec), None) => {
                    (FamilySpec::parse(spec)?.generate()?, format!("--family2 {spec}"))
                }
                (None, Some(text)) => (parse_graph_text(text)?, format!("--graph2 \"{text}\"")),
                _ => {
                    return Err(Error::Parameter(
                        "exactly one of --family2/--graph2 is required".into(),
                    ))
                }
            };
            let product = left.or_product(&right)?;
            let mut report = RunReport::new(&format!("product --or {left_echo} {right_echo}"));
            describe_graph(&mut report, &product);
            print!("{}", report.body());
            println!("timestamp = {}", unix_timestamp());
            Ok(())
        }
        Command::Bounds { input, weights } => {
            let (g, echo) = input.load()?;
            let n = g.vertex_count();
            let w = match weights {
                Some(text) => WeightVector::new(parse_float_list(text)?)?,
                None => WeightVector::unit(n),
            };
            let weights_echo = echo_floats(w.as_slice());
            let command_echo = format!("bounds {echo} --weights {weights_echo} --tol {tol_echo}");
            let graph6 = to_graph6(&g);
            let key = CacheKey {
                graph6: graph6.clone(),
                weights: weights_echo.clone(),
                command: command_echo.clone(),
                tol: tol_echo.clone(),
            };
            let csv = cli.csv.clone();
            emit(cli, key, move || {
                let b = bounds_report(&g, &w, tol)?;
                let mut report = RunReport::new(&command_echo);
                report.push("graph6", &graph6);
                report.push("n", n);
                report.push("weights", &weights_echo);
                report.push_float("alpha", b.alpha);
                report.push_indices("alpha_set", &b.independent_set);
                report.push_float("theta", b.theta);
                report.push("theta_gap", format!("{:.3e}", b.theta_solution.gap));
                report.push("theta_iterations", b.theta_solution.iterations);
                report.push_float("alpha_star", b.alpha_star);
                report.push_floats("packing_point", &b.packing_point);
                report.push("vertex_transitive", b.vertex_transitive);
                report.push("self_complementary", b.self_complementary);
                report.push("version", env!("CARGO_PKG_VERSION"));
                if let Some(path) = &csv {
                    let theta_complement = solve_theta_sdp(&g.complement(), &w, tol)?.value;
                    append_csv(
                        path,
                        &CsvRow {
                            graph6: graph6.clone(),
                            n,
                            alpha: b.alpha,
                            theta: b.theta,
                            alpha_star: b.alpha_star,
                            vertex_transitive: b.vertex_transitive,
                            self_complementary: b.self_complementary,
                            theta_complement,
                        },
                    )?;
                }
                Ok(report.body())
            })
        }
        Command::Membership { input, dist } => {
            let (g, echo) = input.load()?;
            let p = dist.load()?;
            let dist_echo = echo_floats(p.as_slice());
            let command_echo = format!("membership {echo} --dist {dist_echo} --tol {tol_echo}");
            let graph6 = to_graph6(&g);
            let key = CacheKey {
                graph6: graph6.clone(),
                weights: dist_echo.clone(),
                command: command_echo.clone(),
                tol: tol_echo.clone(),
            };
            emit(cli, key, move || {
                let verdict = membership(&g, &p, tol)?;
                let mut report = RunReport::new(&command_echo);
                report.push("graph6", &graph6);
                report.push("n", g.vertex_count());
                report.push("dist", &dist_echo);
                report.push_float("theta_complement", verdict.theta_complement);
                report.push("classification", verdict.classification);
                if let Some(witness) = &verdict.witness {
                    witness_fields(&mut report, witness);
                }
                report.push("version", env!("CARGO_PKG_VERSION"));
                Ok(report.body())
            })
        }
        Command::Witness { input, dist } => {
            let (g, echo) = input.load()?;
            let p = dist.load()?;
            let dist_echo = echo_floats(p.as_slice());
            let command_echo = format!("witness {echo} --dist {dist_echo} --tol {tol_echo}");
            let graph6 = to_graph6(&g);
            let key = CacheKey {
                graph6: graph6.clone(),
                weights: dist_echo.clone(),
                command: command_echo.clone(),
                tol: tol_echo.clone(),
            };
            emit(cli, key, move || {
                let witness = exclugraph::quantum::extract_witness(&g, &p, tol)?;
                let mut report = RunReport::new(&command_echo);
                report.push("graph6", &graph6);
                report.push("n", g.vertex_count());
                report.push("dist", &dist_echo);
                witness_fields(&mut report, &witness);
                report.push("version", env!("CARGO_PKG_VERSION"));
                Ok(report.body())
            })
        }
        Command::Symmetrize { input, dist } => {
            let (g, echo) = input.load()?;
            let p = dist.load()?;
            let dist_echo = echo_floats(p.as_slice());
            let command_echo = format!("symmetrize {echo} --dist {dist_echo}");
            let graph6 = to_graph6(&g);
            let key = CacheKey {
                graph6: graph6.clone(),
                weights: dist_echo.clone(),
                command: command_echo.clone(),
                tol: "exact".into(),
            };
            emit(cli, key, move || {
                let q = symmetrize(&g, &p)?;
                let group_order = g.automorphism_group()?.order();
                let mut report = RunReport::new(&command_echo);
                report.push("graph6", &graph6);
                report.push("n", g.vertex_count());
                report.push("dist", &dist_echo);
                report.push_floats("symmetrized", q.as_slice());
                report.push("group_order", group_order);
                report.push("version", env!("CARGO_PKG_VERSION"));
                Ok(report.body())
            })
        }
        Command::QuantumMax { input } => {
            let (g, echo) = input.load()?;
            let command_echo = format!("quantum-max {echo} --tol {tol_echo}");
            let graph6 = to_graph6(&g);
            let key = CacheKey {
                graph6: graph6.clone(),
                weights: "unit".into(),
                command: command_echo.clone(),
                tol: tol_echo.clone(),
            };
            emit(cli, key, move || {
                let r = quantum_max(&g, tol)?;
                let mut report = RunReport::new(&command_echo);
                report.push("graph6", &graph6);
                report.push("n", r.n);
                report.push_float("m_q", r.m_q);
                report.push_float("complement_m_q", r.complement_m_q);
                report.push_float("product", r.product);
                report.push("vertex_transitive", r.vertex_transitive);
                if let Some(p_max) = r.p_max {
                    report.push_float("p_max", p_max);
                }
                report.push("version", env!("CARGO_PKG_VERSION"));
                Ok(report.body())
            })
        }
        Command::Verify { which } => run_verify(cli, which, tol, &tol_echo),
        Command::Sweep { kind, from, to } => {
            if from > to {
                return Err(Error::Parameter(format!("empty sweep range {from}..{to}")));
            }
            println!("{CSV_HEADER}");
            for n in *from..=*to {
                let g = FamilySpec::parse(&format!("{kind}:{n}"))?.generate()?;
                let w = WeightVector::unit(n);
                let b = bounds_report(&g, &w, tol)?;
                let theta_complement = solve_theta_sdp(&g.complement(), &w, tol)?.value;
                let row = CsvRow {
                    graph6: to_graph6(&g),
                    n,
                    alpha: b.alpha,
                    theta: b.theta,
                    alpha_star: b.alpha_star,
                    vertex_transitive: b.vertex_transitive,
                    self_complementary: b.self_complementary,
                    theta_complement,
                };
                println!("{}", row.render());
                if let Some(path) = &cli.csv {
                    append_csv(path, &row)?;
                }
            }
            Ok(())
        }
    }
}

fn run_verify(cli: &Cli, which: &VerifyCommand, tol: f64, tol_echo: &str) -> Result<(), Error> {
    match which {
        VerifyCommand::Result1 { input, trials, seed } => {
            let (g, echo) = input.load()?;
            let command_echo =
                format!("verify result1 {echo} --trials {trials} --seed {seed} --tol {tol_echo}");
            let graph6 = to_graph6(&g);
            let key = CacheKey {
                graph6: graph6.clone(),
                weights: "sampled".into(),
                command: command_echo.clone(),
                tol: tol_echo.to_string(),
            };
            let (trials, seed) = (*trials, *seed);
            emit(cli, key, move || {
                let r = verify_result1(&g, trials, seed, tol)?;
                let mut report = RunReport::new(&command_echo);
                report.push("graph6", &graph6);
                report.push("trials", r.trials);
                report.push("seed", seed);
                report.push("inside", r.inside);
                report.push("boundary", r.boundary);
                report.push("outside", r.outside);
                report.push("product_checks", r.product_checks);
                report.push("product_violations", r.product_violations);
                report.push("witnesses_verified", r.witnesses_verified);
                report.push("witness_failures", r.witness_failures);
                report.push("passed", r.passed());
                report.push("version", env!("CARGO_PKG_VERSION"));
                if !r.passed() {
                    return Err(Error::Numerical(format!(
                        "quantum-set exclusion failed: {} product violations, {} unverified \
                         witnesses",
                        r.product_violations, r.witness_failures
                    )));
                }
                Ok(report.body())
            })
        }
        VerifyCommand::Result2 { input, eps } => {
            let (g, echo) = input.load()?;
            let grid = parse_float_list(eps)?;
            let command_echo = format!("verify result2 {echo} --eps {eps} --tol {tol_echo}");
            let graph6 = to_graph6(&g);
            let key = CacheKey {
                graph6: graph6.clone(),
                weights: eps.clone(),
                command: command_echo.clone(),
                tol: tol_echo.to_string(),
            };
            emit(cli, key, move || {
                let r = verify_result2(&g, &grid, tol)?;
                let mut report = RunReport::new(&command_echo);
                report.push("graph6", &graph6);
                report.push("n", g.vertex_count());
                report.push_float("theta", r.theta);
                report.push_indices("sigma", r.sigma.as_slice());
                for entry in &r.entries {
                    report.push_float(&format!("product_at_{}", entry.epsilon), entry.product);
                    report.push_float(
                        &format!("permuted_membership_at_{}", entry.epsilon),
                        entry.permuted_membership,
                    );
                }
                report.push("all_products_exceed_one", r.all_products_exceed_one);
                report.push("products_increasing", r.products_increasing);
                report.push("passed", r.passed());
                report.push("version", env!("CARGO_PKG_VERSION"));
                if !r.passed() {
                    return Err(Error::Numerical(
                        "supra-quantum exclusion failed: products not above one or not \
                         increasing"
                            .into(),
                    ));
                }
                Ok(report.body())
            })
        }
        VerifyCommand::Result3 { input } => {
            let (g, echo) = input.load()?;
            let command_echo = format!("verify result3 {echo} --tol {tol_echo}");
            let graph6 = to_graph6(&g);
            let key = CacheKey {
                graph6: graph6.clone(),
                weights: "unit".into(),
                command: command_echo.clone(),
                tol: tol_echo.to_string(),
            };
            emit(cli, key, move || {
                let r = verify_result3(&g, tol)?;
                let mut report = RunReport::new(&command_echo);
                report.push("graph6", &graph6);
                report.push("n", r.n);
                report.push_float("theta", r.theta);
                report.push_float("theta_complement", r.theta_complement);
                report.push_float("product", r.product);
                report.push_float("e_product_at_maxima", r.e_product_at_maxima);
                report.push("upper_margin", format!("{:.3e}", r.upper_margin));
                report.push("lower_margin", format!("{:.3e}", r.lower_margin));
                report.push("passed", r.passed());
                report.push("version", env!("CARGO_PKG_VERSION"));
                Ok(report.body())
            })
        }
    }
}

fn describe_graph(report: &mut RunReport, g: &Graph) {
    report.push("graph6", to_graph6(g));
    report.push("n", g.vertex_count());
    report.push("edges", g.edge_count());
    report.push("edge_list", to_edge_list(g));
}
