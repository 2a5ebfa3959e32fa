//! `algdist`: algebraic distances, matching and hypergraph bisection
//! experiments from the command line. All outputs are CSV with the full
//! configuration in `# key=value` comment lines.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, CommandFactory, Parser, Subcommand};

use algdist::bench::{batch_inputs, run_batch, write_distance_csv, write_run_records, BatchConfig, ConfigHeader, RunRecord};
use algdist::hpart::{DEFAULT_ARGS_TEMPLATE, DEFAULT_IMBALANCE};
use algdist::io::hgr::read_hgr;
use algdist::io::mtx::read_matrix_market;
use algdist::relax::{
    deflate_constant, initial_vectors, model_residual, stability_report, SpectralExpansion, DENSE_LIMIT, RNG_ALGORITHM,
};
use algdist::spectral::theta_curve;
use algdist::{
    edge_distances, hpart_experiment, matching_experiment, pencil_eigen, relax, DistanceMeta, ExternalPartitioner, Graph,
    HpartExperimentConfig, MatchingAlgorithm, MatchingExperimentConfig, PNorm, Partitioner, RelaxationConfig,
};

#[derive(Parser, Debug)]
#[command(
    name = "algdist",
    version,
    about = "Algebraic distances on graphs and their use in matching and partitioning"
)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-edge distances of a Matrix Market graph as `i,j,rho` (1-based ids)
    Distance {
        input: PathBuf,
        #[command(flatten)]
        relax: RelaxArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Matching with and without distance preprocessing
    Match {
        input: PathBuf,
        #[command(flatten)]
        relax: RelaxArgs,
        #[command(flatten)]
        exp: MatchArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Hypergraph bisection with and without distance preprocessing
    Hpart {
        input: PathBuf,
        #[command(flatten)]
        relax: RelaxArgs,
        #[command(flatten)]
        exp: HpartArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Stability and convergence diagnostics of the relaxation on one graph
    Diag {
        input: PathBuf,
        #[command(flatten)]
        relax: RelaxArgs,
        /// Also tabulate theta on this many evenly spaced omegas in (0, 2/mu_n)
        #[arg(long, default_value_t = 0)]
        theta_points: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run `match` on every .mtx and `hpart` on every .hgr file of a directory
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        relax: RelaxArgs,
        #[command(flatten)]
        matching: MatchArgs,
        #[command(flatten)]
        hpart: HpartArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct RelaxArgs {
    /// JOR relaxation parameter
    #[arg(long, default_value_t = 0.5)]
    omega: f64,
    /// Sweeps per run
    #[arg(long = "k", default_value_t = 20)]
    k: usize,
    /// Independent random starts
    #[arg(long = "R", default_value_t = 10)]
    runs: usize,
    /// Norm over runs: 1, 2 or inf
    #[arg(long = "p", default_value = "inf", value_parser = parse_p)]
    p: PNorm,
    /// Base seed; repetition r uses seed + r
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repetitions (seeds) per experiment
    #[arg(long, default_value_t = 20)]
    seeds: usize,
    /// Guard for divisions by small distances
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
    /// Restrict graph inputs to their largest connected component
    #[arg(long)]
    largest_component: bool,
}

#[derive(Args, Debug, Clone)]
struct MatchArgs {
    /// greedy or path-growing
    #[arg(long, default_value = "greedy")]
    algo: MatchingAlgorithm,
    /// Prefer small surrogate weights instead of large ones
    #[arg(long)]
    invert_surrogate: bool,
}

#[derive(Args, Debug, Clone)]
struct HpartArgs {
    /// hMetis-compatible executable; the internal bisector is used without it
    #[arg(long)]
    partitioner: Option<PathBuf>,
    /// Argument template for the partitioner ({hgr} {nparts} {ubfactor} {seed})
    #[arg(long, default_value = DEFAULT_ARGS_TEMPLATE)]
    partitioner_args: String,
    /// Seconds before the partitioner is killed
    #[arg(long, default_value_t = 300)]
    timeout: u64,
    /// Allowed imbalance alpha: parts hold at most (1 + alpha) n / 2 vertices
    #[arg(long, default_value_t = DEFAULT_IMBALANCE)]
    imbalance: f64,
    /// Unrelaxed sweeps (omega = 1) on the bipartite model
    #[arg(long)]
    literal_alg4: bool,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Output CSV (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add wall-clock columns
    #[arg(long)]
    timings: bool,
}

fn parse_p(s: &str) -> Result<PNorm, String> {
    let p: PNorm = s.parse()?;
    match p {
        PNorm::Infinity => Ok(p),
        PNorm::Finite(v) if v == 1.0 || v == 2.0 => Ok(p),
        _ => Err(format!("p must be 1, 2 or inf, got '{s}'")),
    }
}

type CliResult = Result<(), Box<dyn std::error::Error>>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("{}", Cli::command().render_usage());
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::Distance { input, relax, out } => distance(&input, &relax, &out),
        Command::Match { input, relax, exp, out } => run_match(&input, &relax, &exp, &out),
        Command::Hpart { input, relax, exp, out } => run_hpart(&input, &relax, &exp, &out),
        Command::Diag {
            input,
            relax,
            theta_points,
            out,
        } => diag(&input, &relax, theta_points, &out),
        Command::Bench {
            dir,
            relax,
            matching,
            hpart,
            out,
        } => bench(&dir, &relax, &matching, &hpart, &out),
    }
}

fn open_out(out: &OutArgs) -> io::Result<Box<dyn Write>> {
    Ok(match &out.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn relax_config(a: &RelaxArgs) -> RelaxationConfig {
    RelaxationConfig {
        omega: a.omega,
        iterations: a.k,
        runs: a.runs,
        seed: a.seed,
        ..Default::default()
    }
}

fn header(command: &str, input: &Path, a: &RelaxArgs) -> ConfigHeader {
    let mut h = ConfigHeader::default();
    h.push("tool", concat!("algdist ", env!("CARGO_PKG_VERSION")))
        .push("command", command)
        .push("input", input.display())
        .push("omega", a.omega)
        .push("k", a.k)
        .push("R", a.runs)
        .push("p", a.p)
        .push("seed", a.seed)
        .push("rng", RNG_ALGORITHM)
        .push("largest_component", a.largest_component);
    h
}

fn push_match(h: &mut ConfigHeader, a: &RelaxArgs, m: &MatchArgs) {
    h.push("seeds", a.seeds)
        .push("eps", a.eps)
        .push("algo", m.algo)
        .push("invert_surrogate", m.invert_surrogate);
}

fn push_hpart(h: &mut ConfigHeader, a: &RelaxArgs, p: &HpartArgs) {
    h.push("seeds", a.seeds)
        .push("eps", a.eps)
        .push("imbalance", p.imbalance)
        .push("literal_alg4", p.literal_alg4)
        .push(
            "partitioner",
            p.partitioner
                .as_ref()
                .map_or_else(|| "internal".to_owned(), |x| x.display().to_string()),
        );
    if p.partitioner.is_some() {
        h.push("partitioner_args", &p.partitioner_args).push("timeout_s", p.timeout);
    }
}

/// Reads a graph, restricting it to the largest component on request.
/// Returns the graph and the original id of each of its vertices.
fn load_graph(path: &Path, a: &RelaxArgs) -> Result<(Graph, Vec<usize>), Box<dyn std::error::Error>> {
    let g = read_matrix_market(path).map_err(|e| with_path(path, e))?.graph;
    if g.is_connected() {
        let ids = (0..g.n()).collect();
        return Ok((g, ids));
    }
    if !a.largest_component {
        return Err(format!("{} is disconnected; rerun with --largest-component", path.display()).into());
    }
    let (sub, ids) = g.largest_component();
    log::warn!("{}: kept {} of {} vertices", path.display(), sub.n(), g.n());
    Ok((sub, ids))
}

/// Parse errors already name the file; I/O errors do not.
fn with_path(path: &Path, e: algdist::Error) -> Box<dyn std::error::Error> {
    match e {
        algdist::Error::Io(io) => format!("{}: {io}", path.display()).into(),
        other => other.into(),
    }
}

fn matching_config(a: &RelaxArgs, m: &MatchArgs) -> MatchingExperimentConfig {
    MatchingExperimentConfig {
        relax: relax_config(a),
        p: a.p,
        eps: a.eps,
        repetitions: a.seeds,
        algorithm: m.algo,
        invert_surrogate: m.invert_surrogate,
    }
}

fn hpart_config(a: &RelaxArgs, p: &HpartArgs) -> HpartExperimentConfig {
    let mut relax = relax_config(a);
    if p.literal_alg4 {
        relax.omega = 1.0;
    }
    let partitioner = match &p.partitioner {
        Some(exe) => Partitioner::External(ExternalPartitioner {
            args_template: p.partitioner_args.clone(),
            timeout: Duration::from_secs(p.timeout),
            ..ExternalPartitioner::new(exe)
        }),
        None => Partitioner::Fallback,
    };
    HpartExperimentConfig {
        relax,
        eps: a.eps,
        repetitions: a.seeds,
        imbalance: p.imbalance,
        partitioner,
    }
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn distance(input: &Path, a: &RelaxArgs, out: &OutArgs) -> CliResult {
    let (g, ids) = load_graph(input, a)?;
    let cfg = relax_config(a);
    let iters = relax(&g, &cfg)?;
    let meta = DistanceMeta {
        iterations: cfg.iterations,
        runs: cfg.runs,
        p: a.p,
        omega: cfg.omega,
        seed: cfg.seed,
    };
    let mut field = edge_distances(&g, &iters, a.p, meta)?;
    for pair in &mut field.pairs {
        *pair = (ids[pair.0], ids[pair.1]);
    }
    let mut h = header("distance", input, a);
    h.push("vertices", g.n()).push("edges", g.num_edges());
    let mut w = open_out(out)?;
    write_distance_csv(&mut w, &h, &field)?;
    w.flush()?;
    Ok(())
}

fn run_match(input: &Path, a: &RelaxArgs, m: &MatchArgs, out: &OutArgs) -> CliResult {
    let (g, _) = load_graph(input, a)?;
    let report = matching_experiment(&g, &matching_config(a, m))?;
    let rec = RunRecord::from_matching(&file_name(input), &g, &report);
    let mut h = header("match", input, a);
    push_match(&mut h, a, m);
    let mut w = open_out(out)?;
    write_run_records(&mut w, &h, &[rec], out.timings)?;
    w.flush()?;
    Ok(())
}

fn run_hpart(input: &Path, a: &RelaxArgs, p: &HpartArgs, out: &OutArgs) -> CliResult {
    let hg = read_hgr(input).map_err(|e| with_path(input, e))?;
    let report = hpart_experiment(&hg, &hpart_config(a, p))?;
    for t in &report.trials {
        for c in &t.command_lines {
            log::info!("seed {}: {c}", t.seed);
        }
    }
    let rec = RunRecord::from_hpart(&file_name(input), &hg, &report);
    let mut h = header("hpart", input, a);
    push_hpart(&mut h, a, p);
    let mut w = open_out(out)?;
    write_run_records(&mut w, &h, &[rec], out.timings)?;
    w.flush()?;
    Ok(())
}

fn bench(dir: &Path, a: &RelaxArgs, m: &MatchArgs, p: &HpartArgs, out: &OutArgs) -> CliResult {
    let files = batch_inputs(dir)?;
    if files.is_empty() {
        return Err(format!("no .mtx or .hgr files in {}", dir.display()).into());
    }
    let cfg = BatchConfig {
        matching: matching_config(a, m),
        hpart: hpart_config(a, p),
        largest_component: a.largest_component,
    };
    let records = run_batch(&files, &cfg)?;
    let mut h = header("bench", dir, a);
    push_match(&mut h, a, m);
    h.0.retain(|(k, _)| k != "seeds" && k != "eps");
    push_hpart(&mut h, a, p);
    let mut w = open_out(out)?;
    write_run_records(&mut w, &h, &records, out.timings)?;
    w.flush()?;
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| format!("{x:e}"))
}

/// Per-run stability of the last two iterates and the residual of the
/// model equation `x = mu x + D^{-1} W x`. With at most `DENSE_LIMIT`
/// vertices the pencil spectrum is computed, which adds the a-priori angle
/// bound, theta and the residual at `mu_2`.
fn diag(input: &Path, a: &RelaxArgs, theta_points: usize, out: &OutArgs) -> CliResult {
    let (g, _) = load_graph(input, a)?;
    let cfg = RelaxationConfig {
        keep_previous: true,
        ..relax_config(a)
    };
    if cfg.iterations == 0 {
        return Err("diag needs --k >= 1".into());
    }
    let iters = relax(&g, &cfg)?;
    let previous = iters.previous.as_ref().expect("kept for k >= 1");
    let eig = if g.n() <= DENSE_LIMIT { Some(pencil_eigen(&g)?) } else { None };
    let starts = initial_vectors(g.n(), cfg.runs, cfg.seed);

    let mut h = header("diag", input, a);
    h.push("vertices", g.n()).push("edges", g.num_edges());
    let mut theta_rows = Vec::new();
    if let Some(e) = &eig {
        let curve = theta_curve(e, &[cfg.omega]);
        let s2 = e.sigma2(cfg.omega).map(|s| s.sigma);
        h.push("mu_2", format!("{:e}", e.mu[1.min(e.n() - 1)]))
            .push("mu_n", format!("{:e}", e.mu_max()))
            .push("cutting_point", format!("{:e}", e.cutting_point()))
            .push("sigma_2", fmt_opt(s2))
            .push("theta", fmt_opt(curve[0].theta))
            .push("degenerate", curve[0].degenerate);
        if theta_points > 0 {
            let top = 2.0 / e.mu_max();
            let omegas: Vec<f64> = (1..=theta_points)
                .map(|i| top * i as f64 / (theta_points + 1) as f64)
                .collect();
            theta_rows = theta_curve(e, &omegas);
        }
    } else {
        h.push("spectrum", format!("skipped, more than {DENSE_LIMIT} vertices"));
    }

    let mut w = open_out(out)?;
    h.write(&mut w)?;
    writeln!(
        w,
        "run,angle_defect,kappa,alpha,r_k,f_k,bound_rhs,bound_status,rayleigh_mu,residual_rayleigh,residual_mu2"
    )?;
    for r in 0..iters.runs() {
        let coeffs = eig.as_ref().map(|e| e.expansion(&starts[r])).transpose()?;
        let expansion = eig.as_ref().zip(coeffs.as_deref()).map(|(e, c)| SpectralExpansion {
            coefficients: c,
            mu_max: e.mu_max(),
        });
        let rep = stability_report(&g, &previous[r], &iters.vectors[r], expansion.as_ref(), &cfg)?;
        let x = deflate_constant(&g, &iters.vectors[r]);
        let rayleigh = rayleigh_mu(&g, &x);
        let res_rayleigh = rayleigh.map(|mu| model_residual(&g, &x, mu)).transpose()?;
        let res_mu2 = match (&eig, rayleigh) {
            (Some(e), Some(_)) if e.n() > 1 => Some(model_residual(&g, &x, e.mu[1])?),
            _ => None,
        };
        writeln!(
            w,
            "{},{:e},{:e},{},{},{},{},{:?},{},{},{}",
            r,
            rep.angle_defect,
            rep.kappa,
            fmt_opt(rep.alpha),
            fmt_opt(rep.r_k),
            fmt_opt(rep.f_k),
            fmt_opt(rep.bound_rhs),
            rep.status,
            fmt_opt(rayleigh),
            fmt_opt(res_rayleigh),
            fmt_opt(res_mu2),
        )?;
    }
    if !theta_rows.is_empty() {
        writeln!(w)?;
        writeln!(w, "omega,theta,limit_index,degenerate,out_of_range")?;
        for t in &theta_rows {
            writeln!(
                w,
                "{:e},{},{},{},{}",
                t.omega,
                fmt_opt(t.theta),
                t.limit_index + 1,
                t.degenerate,
                t.out_of_range
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `x^T L x / x^T D x`, the pencil eigenvalue estimate for `x`. `None` for
/// a zero vector.
fn rayleigh_mu(g: &Graph, x: &[f64]) -> Option<f64> {
    let d = g.weighted_degrees();
    let xdx: f64 = x.iter().zip(d).map(|(v, d)| d * v * v).sum();
    if xdx == 0.0 {
        return None;
    }
    let xlx: f64 = g.edges().map(|e| e.w * (x[e.u] - x[e.v]).powi(2)).sum();
    Some(xlx / xdx)
}
