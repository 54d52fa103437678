use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use symmetria::evaluation::{correspondence_rate, mesh_rate, EvalReport};
use symmetria::export::write_ply;
use symmetria::files::{read_correspondence, read_ground_truth, write_correspondence};
use symmetria::geodesics::Dijkstra;
use symmetria::meshio::parse_mesh;
use symmetria::pipeline::eigen_options;
use symmetria::signatures::{hks_energy, reference_time};
use symmetria::spectral::eigendecompose_with;
use symmetria::{detect, AdjacencyIndex, LaplaceOperator, RunConfig, SymmetryError, TriangleMesh};

#[derive(Parser)]
#[command(name = "symmetria", version, about = "Intrinsic reflective symmetry detection on triangle meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect the symmetry map of a mesh.
    Detect(DetectArgs),
    /// Score a correspondence against ground truth.
    Eval(EvalArgs),
    /// Write a color-coded PLY of a scalar field.
    Export(ExportArgs),
}

#[derive(Args)]
struct DetectArgs {
    mesh: PathBuf,
    /// Correspondence output, one `j sigma(j)` line per vertex.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON run report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// `key = value` config file, applied before flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d_max: Option<usize>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    tau_gap: Option<f64>,
    #[arg(long)]
    no_correction: bool,
    /// Extra `key=value` overrides.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Write eigenvalues and eigenfunctions as text.
    #[arg(long)]
    dump_spectrum: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Mesh file, or a directory in batch mode.
    mesh: PathBuf,
    corr: Option<PathBuf>,
    gt: Option<PathBuf>,
    /// Ground-truth indices start at 1.
    #[arg(long)]
    one_based: bool,
    /// Evaluate every `NAME.off|obj` with `NAME.corr` and `NAME.gt` in the directory.
    #[arg(long)]
    batch: bool,
    /// Write the per-pair report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write per-pair errors as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    Eigenfunction,
    Hks,
    CorrespondenceError,
}

#[derive(Args)]
struct ExportArgs {
    mesh: PathBuf,
    #[arg(long, value_enum)]
    field: Field,
    out: PathBuf,
    /// 1-based eigenfunction index in ascending eigenvalue order.
    #[arg(long, default_value_t = 2)]
    index: usize,
    #[arg(long, default_value_t = 13)]
    k: usize,
    #[arg(long)]
    corr: Option<PathBuf>,
    #[arg(long)]
    gt: Option<PathBuf>,
    #[arg(long)]
    one_based: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("SYMMETRIA_THREADS").ok().and_then(|v| v.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let result = match cli.command {
        Command::Detect(args) => run_detect(args),
        Command::Eval(args) => run_eval(args),
        Command::Export(args) => run_export(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err
                .chain()
                .find_map(|e| e.downcast_ref::<SymmetryError>())
                .map_or(1, SymmetryError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn run_detect(args: DetectArgs) -> anyhow::Result<()> {
    let mut config = RunConfig::default();
    if let Some(path) = &args.config {
        config.apply_file(path)?;
    }
    for kv in &args.overrides {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| SymmetryError::Config(format!("expected KEY=VALUE, got `{kv}`")))?;
        config.set(key, value)?;
    }
    if let Some(k) = args.k {
        config.k = k;
    }
    if let Some(d) = args.d_max {
        config.d_max = d;
    }
    if args.pairs.is_some() {
        config.pairs = args.pairs;
    }
    if let Some(mu) = args.mu {
        config.mu = mu;
    }
    if let Some(tau) = args.tau_gap {
        config.tau_gap = tau;
    }
    if args.no_correction {
        config.correction = false;
    }
    config.validate()?;

    let mesh = parse_mesh(&args.mesh, None)?;
    let det = detect(&mesh, &config)?;
    let k_active = det.map.active.len();
    eprintln!(
        "n={} features={} pairs={} active={} cost {:.3e} -> {:.3e}",
        mesh.n_vertices(),
        det.features.len(),
        det.vertex_pairs.len(),
        k_active,
        det.correction.initial_cost,
        det.correction.final_cost
    );
    match &args.out {
        Some(path) => write_correspondence(path, det.sigma(), k_active)?,
        None => print!("{}", symmetria::files::correspondence_string(det.sigma(), k_active)),
    }
    if let Some(path) = &args.report {
        let json = serde_json::to_string_pretty(&det.report(&mesh, &config))?;
        fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.dump_spectrum {
        let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        det.basis.write_text(std::io::BufWriter::new(file))?;
    }
    Ok(())
}

fn evaluate_one(mesh_path: &Path, corr: &Path, gt: &Path, one_based: bool) -> anyhow::Result<EvalReport> {
    let start = Instant::now();
    let mesh = parse_mesh(mesh_path, None)?;
    let adj = AdjacencyIndex::build(&mesh)?;
    let sigma = read_correspondence(corr)?;
    let pairs = read_ground_truth(gt, one_based)?;
    let mut report = correspondence_rate(&mesh, &adj, &sigma, &pairs)?;
    report.runtime_seconds = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

fn write_reports(reports: &[(String, EvalReport)], json: Option<&Path>, csv: Option<&Path>) -> anyhow::Result<()> {
    if let Some(path) = json {
        let map: serde_json::Map<String, serde_json::Value> = reports
            .iter()
            .map(|(name, r)| Ok((name.clone(), serde_json::to_value(r)?)))
            .collect::<anyhow::Result<_>>()?;
        fs::write(path, serde_json::to_string_pretty(&map)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = csv {
        let mut text = String::from("mesh,pair,error,threshold\n");
        for (name, r) in reports {
            for (i, e) in r.per_pair_error.iter().enumerate() {
                text.push_str(&format!("{name},{i},{e},{}\n", r.threshold));
            }
        }
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run_eval(args: EvalArgs) -> anyhow::Result<()> {
    if !args.batch {
        let (corr, gt) = args
            .corr
            .as_ref()
            .zip(args.gt.as_ref())
            .ok_or_else(|| SymmetryError::Config("eval needs MESH CORR GT, or --batch DIR".into()))?;
        let report = evaluate_one(&args.mesh, corr, gt, args.one_based)?;
        println!("corr_rate {:.6}", report.corr_rate);
        println!("threshold {:.6e}", report.threshold);
        println!("true_positives {}/{}", report.true_positives, report.per_pair_error.len());
        let name = args.mesh.display().to_string();
        return write_reports(&[(name, report)], args.json.as_deref(), args.csv.as_deref());
    }

    let mut meshes: Vec<PathBuf> = fs::read_dir(&args.mesh)
        .with_context(|| format!("reading {}", args.mesh.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("off" | "obj")))
        .collect();
    meshes.sort();
    let mut reports = Vec::new();
    for path in &meshes {
        let (corr, gt) = (path.with_extension("corr"), path.with_extension("gt"));
        if !corr.exists() || !gt.exists() {
            eprintln!("skipping {}: missing .corr or .gt", path.display());
            continue;
        }
        let report = evaluate_one(path, &corr, &gt, args.one_based)
            .with_context(|| format!("evaluating {}", path.display()))?;
        let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        println!("{name} corr_rate {:.6}", report.corr_rate);
        reports.push((name, report));
    }
    if reports.is_empty() {
        return Err(anyhow!(SymmetryError::EmptyGroundTruth)).context("no evaluable meshes in batch directory");
    }
    let rates: Vec<f64> = reports.iter().map(|(_, r)| r.corr_rate).collect();
    println!("mesh_rate {:.6}", mesh_rate(&rates)?);
    write_reports(&reports, args.json.as_deref(), args.csv.as_deref())
}

fn correspondence_error(mesh: &TriangleMesh, corr: &Path, gt: &Path, one_based: bool) -> anyhow::Result<Vec<f64>> {
    let adj = AdjacencyIndex::build(mesh)?;
    let sigma = read_correspondence(corr)?;
    let pairs = read_ground_truth(gt, one_based)?;
    let n = mesh.n_vertices();
    if sigma.len() != n {
        return Err(SymmetryError::Dimension(format!("correspondence has {} entries for {n} vertices", sigma.len())).into());
    }
    let mut field = vec![f64::NAN; n];
    let mut dijkstra = Dijkstra::new(mesh, &adj);
    for (j, g) in pairs {
        if j >= n || g >= n || sigma[j] >= n {
            return Err(SymmetryError::Index { index: j.max(g).max(sigma[j.min(n - 1)]), len: n }.into());
        }
        field[j] = dijkstra.distance(g, sigma[j]);
    }
    Ok(field)
}

fn run_export(args: ExportArgs) -> anyhow::Result<()> {
    let mesh = parse_mesh(&args.mesh, None)?;
    let spectrum = |k: usize| -> anyhow::Result<_> {
        let k = k.min(mesh.n_vertices().saturating_sub(1));
        let op = LaplaceOperator::assemble(&mesh)?;
        let mut config = RunConfig::default();
        config.k = k;
        Ok(eigendecompose_with(&op, k, &eigen_options(&config))?)
    };
    let (field, name) = match args.field {
        Field::Eigenfunction => {
            if args.index == 0 {
                return Err(SymmetryError::Config("eigenfunction index is 1-based".into()).into());
            }
            let basis = spectrum(args.k.max(args.index))?;
            let col = *basis.order().get(args.index - 1).ok_or(SymmetryError::Index {
                index: args.index,
                len: basis.k(),
            })?;
            (basis.phi.column(col).iter().copied().collect(), format!("eigenfunction {}", args.index))
        }
        Field::Hks => {
            let basis = spectrum(args.k)?;
            let t = reference_time(&basis)?;
            (hks_energy(&basis, t), format!("hks t={t:e}"))
        }
        Field::CorrespondenceError => {
            let (corr, gt) = args
                .corr
                .as_ref()
                .zip(args.gt.as_ref())
                .ok_or_else(|| SymmetryError::Config("correspondence-error needs --corr and --gt".into()))?;
            (correspondence_error(&mesh, corr, gt, args.one_based)?, "correspondence error".into())
        }
    };
    write_ply(&args.out, &mesh, &field, &name)?;
    Ok(())
}
