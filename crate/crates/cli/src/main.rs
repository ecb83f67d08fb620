mod svg;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use raycell::{
    build_diagram, compare, delaunay_graph, naive_cell, uniform_in_world, BuildConfig, BuildError,
    Diagram, Point2, World, DEFAULT_TOL, MATCH_TOL,
};

/// Voronoi diagrams of point sites inside a convex polygonal world.
#[derive(Debug, Parser)]
#[command(name = "raycell", version, about)]
struct Args {
    /// Site file: one "x y" pair per line, '#' starts a comment.
    #[arg(long, value_name = "PATH", conflicts_with = "generate")]
    sites: Option<PathBuf>,

    /// Generate sites instead of reading them, e.g. "uniform:1000:42".
    #[arg(long, value_name = "SPEC")]
    generate: Option<String>,

    /// World polygon as whitespace-separated ccw coordinates: "x y x y ...".
    /// Defaults to a square padded 10% beyond the site bounding box
    /// (generated sites without --world use the square [0, 1000]^2).
    #[arg(long, value_name = "COORDS")]
    world: Option<String>,

    /// Number of worker threads (default: hardware count).
    #[arg(long, value_name = "Q")]
    threads: Option<usize>,

    /// Geometric tolerance.
    #[arg(long, value_name = "EPS", default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Write the diagram as JSON.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Render the diagram as SVG.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,

    /// Extract the Delaunay graph and include it in the outputs.
    #[arg(long)]
    delaunay: bool,

    /// Verify every cell against the naive half-plane-intersection oracle.
    #[arg(long)]
    oracle_check: bool,

    /// Disable the bucket grid (quadratic nearest-conflict scans).
    #[arg(long)]
    no_grid: bool,

    /// Benchmark mode: build REPS times and print CSV timing rows.
    #[arg(long, value_name = "REPS")]
    bench: Option<u32>,

    /// Corrupt the diagram before oracle checking (testing only).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

/// Exit codes: 0 success, 1 invalid input, 2 oracle mismatch, 3 internal error.
enum RunError {
    Invalid(String),
    OracleMismatch(String),
    Internal(String),
}

impl RunError {
    fn code(&self) -> u8 {
        match self {
            RunError::Invalid(_) => 1,
            RunError::OracleMismatch(_) => 2,
            RunError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            RunError::Invalid(m) | RunError::OracleMismatch(m) | RunError::Internal(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(args: &Args) -> Result<(), RunError> {
    let (sites, world) = load_input(args)?;
    let workers = args
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
    if workers == 0 {
        return Err(RunError::Invalid("--threads must be at least 1".into()));
    }
    let config = BuildConfig {
        workers,
        use_grid: !args.no_grid,
        tol: args.tol,
    };

    if let Some(reps) = args.bench {
        return bench(sites, world, &config, reps);
    }

    let start = Instant::now();
    let mut diagram =
        build_diagram(sites, world, &config).map_err(|e| classify_build_error(&e))?;
    let elapsed = start.elapsed();

    if args.delaunay {
        diagram.delaunay = Some(delaunay_graph(&diagram));
    }
    if args.inject_fault {
        sabotage(&mut diagram);
    }
    if args.oracle_check {
        oracle_check(&diagram)?;
    }

    if let Some(path) = &args.out {
        let json = serde_json::to_string(&diagram)
            .map_err(|e| RunError::Internal(format!("JSON serialization failed: {e}")))?;
        fs::write(path, json)
            .map_err(|e| RunError::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = &args.svg {
        let rendered = svg::render(&diagram);
        fs::write(path, rendered)
            .map_err(|e| RunError::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }

    eprintln!(
        "built {} cells in {:.1} ms ({} rays, mean e_k {:.2})",
        diagram.cells.len(),
        elapsed.as_secs_f64() * 1e3,
        diagram.stats.total_rays(),
        diagram.stats.mean_e_k()
    );
    Ok(())
}

/// Resolves the site list and world polygon from the configured input source.
fn load_input(args: &Args) -> Result<(Vec<Point2>, World), RunError> {
    if let Some(spec) = &args.generate {
        let (n, seed) = parse_generate_spec(spec)?;
        let world = match &args.world {
            Some(coords) => parse_world(coords)?,
            None => World::square(0.0, 1000.0).expect("fixed square is valid"),
        };
        let sites = uniform_in_world(&world, n, seed, args.tol);
        Ok((sites, world))
    } else if let Some(path) = &args.sites {
        let text = fs::read_to_string(path)
            .map_err(|e| RunError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        let sites = parse_site_file(&text)?;
        let world = match &args.world {
            Some(coords) => parse_world(coords)?,
            None => padded_bbox_world(&sites)?,
        };
        Ok((sites, world))
    } else {
        Err(RunError::Invalid(
            "exactly one of --sites or --generate is required".into(),
        ))
    }
}

fn parse_generate_spec(spec: &str) -> Result<(usize, u64), RunError> {
    let bad = || RunError::Invalid(format!("malformed --generate spec {spec:?}, want uniform:n:seed"));
    let mut parts = spec.split(':');
    match (parts.next(), parts.next(), parts.next(), parts.next()) {
        (Some("uniform"), Some(n), Some(seed), None) => {
            let n: usize = n.parse().map_err(|_| bad())?;
            let seed: u64 = seed.parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(RunError::Invalid("--generate needs n >= 1".into()));
            }
            Ok((n, seed))
        }
        _ => Err(bad()),
    }
}

fn parse_site_file(text: &str) -> Result<Vec<Point2>, RunError> {
    let mut sites = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut nums = line.split_whitespace().map(str::parse::<f64>);
        match (nums.next(), nums.next(), nums.next()) {
            (Some(Ok(x)), Some(Ok(y)), None) if x.is_finite() && y.is_finite() => {
                sites.push(Point2::new(x, y));
            }
            _ => {
                return Err(RunError::Invalid(format!(
                    "site file line {}: expected \"x y\", got {raw:?}",
                    lineno + 1
                )));
            }
        }
    }
    if sites.is_empty() {
        return Err(RunError::Invalid("site file contains no sites".into()));
    }
    Ok(sites)
}

fn parse_world(coords: &str) -> Result<World, RunError> {
    let nums: Vec<f64> = coords
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|e| RunError::Invalid(format!("bad --world coordinate: {e}")))?;
    if nums.len() < 6 || !nums.len().is_multiple_of(2) {
        return Err(RunError::Invalid(
            "--world needs an even number of coordinates (at least 3 vertices)".into(),
        ));
    }
    let vertices = nums.chunks(2).map(|c| Point2::new(c[0], c[1])).collect();
    World::new(vertices).map_err(|e| RunError::Invalid(format!("invalid world: {e}")))
}

/// Axis-aligned square centered on the site bounding box, padded 10% per side.
fn padded_bbox_world(sites: &[Point2]) -> Result<World, RunError> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut lo_y, mut hi_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in sites {
        lo = lo.min(s.x);
        hi = hi.max(s.x);
        lo_y = lo_y.min(s.y);
        hi_y = hi_y.max(s.y);
    }
    let span = (hi - lo).max(hi_y - lo_y).max(1.0);
    let pad = 0.1 * span;
    let cx = 0.5 * (lo + hi);
    let cy = 0.5 * (lo_y + hi_y);
    let half = 0.5 * span + pad;
    World::new(vec![
        Point2::new(cx - half, cy - half),
        Point2::new(cx + half, cy - half),
        Point2::new(cx + half, cy + half),
        Point2::new(cx - half, cy + half),
    ])
    .map_err(|e| RunError::Internal(format!("default world construction failed: {e}")))
}

fn classify_build_error(e: &BuildError) -> RunError {
    match e {
        BuildError::Validation(report) => RunError::Invalid(format!("invalid input: {report}")),
        BuildError::World(err) => RunError::Invalid(format!("invalid world: {err}")),
        BuildError::Geometry(_) | BuildError::InternalLogic { .. } | BuildError::InconsistentCell { .. } => {
            RunError::Internal(format!("diagram construction failed: {e}"))
        }
    }
}

fn oracle_check(diagram: &Diagram) -> Result<(), RunError> {
    for cell in &diagram.cells {
        let oc = naive_cell(cell.site, &diagram.sites, &diagram.world)
            .map_err(|e| RunError::Internal(format!("oracle failed on cell {}: {e}", cell.site)))?;
        let report = compare(cell, &oc, MATCH_TOL);
        if !report.pass() {
            return Err(RunError::OracleMismatch(format!(
                "cell {} disagrees with the oracle:\n{report}",
                cell.site
            )));
        }
    }
    eprintln!("oracle check passed for {} cells", diagram.cells.len());
    Ok(())
}

/// Deliberately drops one vertex so the oracle check must fail.
fn sabotage(diagram: &mut Diagram) {
    for cell in &mut diagram.cells {
        if cell.vertices.len() > 3 {
            cell.vertices.pop();
            cell.ccw.retain(|&i| i < cell.vertices.len());
            return;
        }
    }
}

fn bench(sites: Vec<Point2>, world: World, config: &BuildConfig, reps: u32) -> Result<(), RunError> {
    println!("n,workers,build_ms,mean_e_k,max_r_k,total_rays");
    for _ in 0..reps.max(1) {
        let start = Instant::now();
        let diagram = build_diagram(sites.clone(), world.clone(), config)
            .map_err(|e| classify_build_error(&e))?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        println!(
            "{},{},{:.3},{:.4},{},{}",
            diagram.sites.len(),
            config.workers,
            ms,
            diagram.stats.mean_e_k(),
            diagram.stats.max_r_k(),
            diagram.stats.total_rays()
        );
    }
    Ok(())
}
