use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use squaremap::geomimage::{self, Sampling, WeldStatus};
use squaremap::mesh::{generate, load_mesh, read_obj, write_obj, TriMesh};
use squaremap::param::{FreeLayout, ParamMap};
use squaremap::pipeline::{self, Measure, PipelineConfig};
use squaremap::slicer::{parse_loops, CutPath, Genus};
use squaremap::solver::{write_trajectory_csv, SolverConfig};

#[derive(Parser)]
#[command(name = "squaremap", version, about = "Square area-preserving parameterization and geometry images")]
struct Cli {
    /// Worker threads for parallel assembly; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parameterize a closed genus-0 or genus-1 mesh onto the unit square.
    Param(ParamArgs),
    /// Encode, decode or angle-correct geometry images.
    Gimg {
        #[command(subcommand)]
        command: GimgCommand,
    },
    /// Write a generated test mesh.
    Gen {
        #[command(subcommand)]
        command: GenCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Rho {
    Area,
    Const,
}

#[derive(Args, Clone)]
struct SourceArgs {
    #[arg(long)]
    input: PathBuf,
    /// Two cut loops, one per line, required for genus 1.
    #[arg(long)]
    loops: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    genus: usize,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    /// Energy-deficit stopping tolerance.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 10)]
    fpm_iters: usize,
}

#[derive(Args)]
struct ParamArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value_t = Rho::Area)]
    rho: Rho,
    /// Map OBJ with texture coordinates.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-iteration trajectory CSV.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Summary JSON.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Recorded in the summary; the pipeline itself is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run the mean-value correction even without folds.
    #[arg(long)]
    force_correct: bool,
    /// Include wall time in the summary, which makes it run-dependent.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Png,
    F32,
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplingArg {
    Corners,
    Centers,
}

impl From<SamplingArg> for Sampling {
    fn from(s: SamplingArg) -> Self {
        match s {
            SamplingArg::Corners => Sampling::LatticeCorners,
            SamplingArg::Centers => Sampling::PixelCenters,
        }
    }
}

#[derive(Args)]
struct ImageOut {
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// Pixel data path; the JSON sidecar is written next to it.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Png)]
    format: Format,
    #[arg(long, value_enum, default_value_t = SamplingArg::Corners)]
    sampling: SamplingArg,
}

#[derive(Subcommand)]
enum GimgCommand {
    /// Sample a map OBJ onto an N x N grid.
    Encode {
        #[arg(long)]
        map: PathBuf,
        /// Overrides the genus comment of the map OBJ.
        #[arg(long)]
        genus: Option<usize>,
        #[command(flatten)]
        image: ImageOut,
    },
    /// Rebuild a mesh from a stored image.
    Decode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Constant-area map, Beltrami truncation against the harmonic map, then encoding.
    Correct {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 0.8)]
        delta: f64,
        #[command(flatten)]
        image: ImageOut,
        /// Also write the corrected map OBJ.
        #[arg(long)]
        map_out: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    Icosphere {
        #[arg(long, default_value_t = 3)]
        subdiv: usize,
        #[arg(long)]
        out: PathBuf,
    },
    Torus {
        #[arg(long, default_value_t = 24)]
        nu: usize,
        #[arg(long, default_value_t = 24)]
        nv: usize,
        #[arg(long, default_value_t = 1.0)]
        major: f64,
        #[arg(long, default_value_t = 0.4)]
        minor: f64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the canonical cut loops.
        #[arg(long)]
        loops: Option<PathBuf>,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, kind: "usage", message: message.into() }
    }
}

impl From<squaremap::Error> for Failure {
    fn from(e: squaremap::Error) -> Self {
        Self { code: 1, kind: "runtime", message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { code: 1, kind: "io", message: e.to_string() }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn write(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| Failure { code: 1, kind: "io", message: format!("{}: {e}", path.display()) })
}

fn to_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
}

fn genus_of(g: usize) -> CliResult<Genus> {
    Genus::from_index(g).ok_or_else(|| Failure::usage(format!("unsupported genus {g}; expected 0 or 1")))
}

fn pipeline_config(src: &SourceArgs, measure: Measure, force_correct: bool) -> CliResult<PipelineConfig> {
    let genus = genus_of(src.genus)?;
    let loops = match (&src.loops, genus) {
        (None, Genus::One) => return Err(Failure::usage("loops file required")),
        (Some(p), _) => Some(parse_loops(&fs::read_to_string(p)?)?),
        (None, Genus::Zero) => None,
    };
    let solver = SolverConfig { max_iters: src.max_iters, energy_tol: src.tol, fpm_iters: src.fpm_iters, ..SolverConfig::default() };
    solver.validate()?;
    Ok(PipelineConfig { genus, measure, loops, solver, force_correct })
}

fn param(args: &ParamArgs) -> CliResult {
    let measure = match args.rho {
        Rho::Area => Measure::Area,
        Rho::Const => Measure::Const,
    };
    let cfg = pipeline_config(&args.source, measure, args.force_correct)?;
    let mesh: TriMesh<f64> = load_mesh(&args.source.input)?;
    let out = pipeline::run(&mesh, &cfg)?;
    if let Some(p) = &args.out {
        write(p, &out.map_obj())?;
    }
    if let Some(p) = &args.report {
        write(p, &write_trajectory_csv(&out.solve.trajectory))?;
    }
    let mut summary = out.summary.clone();
    if !args.timing {
        summary.time_secs = None;
    }
    let mut value = serde_json::to_value(&summary).expect("summary serializes");
    value["seed"] = json!(args.seed);
    match &args.summary {
        Some(p) => write(p, &to_json(&value))?,
        None => print!("{}", to_json(&value)),
    }
    Ok(())
}

/// Mesh and texture coordinates of a map OBJ, with the genus from its comments.
fn read_map(path: &Path) -> CliResult<(TriMesh<f64>, ParamMap<f64>, Option<usize>)> {
    let data = read_obj::<f64>(&fs::read_to_string(path)?)?;
    if data.texcoords.len() != data.vertices.len() {
        return Err(Failure { code: 1, kind: "runtime", message: "map OBJ needs one texture coordinate per vertex".into() });
    }
    let genus = data.comments.iter().find_map(|c| c.strip_prefix("genus ").and_then(|g| g.trim().parse().ok()));
    let map = ParamMap::from_points(&data.texcoords);
    Ok((TriMesh::new(data.vertices, data.faces)?, map, genus))
}

fn store(img: &squaremap::Image, opts: &ImageOut) -> CliResult<Value> {
    let meta = match opts.format {
        Format::Png => geomimage::write_png(img, &opts.out)?,
        Format::F32 => geomimage::write_f32(img, &opts.out)?,
    };
    let mut v = serde_json::to_value(&meta).expect("sidecar serializes");
    v["fallback_pixels"] = json!(img.fallback_pixels);
    Ok(v)
}

fn emit_warning(fallback: usize) {
    if fallback > 0 {
        eprintln!("{}", json!({ "warning": "nearest-triangle fallback used", "pixels": fallback }));
    }
}

fn gimg(cmd: &GimgCommand) -> CliResult {
    match cmd {
        GimgCommand::Encode { map, genus, image } => {
            let (mesh, uv, tagged) = read_map(map)?;
            let g = genus_of(genus.or(tagged).unwrap_or(0))?;
            let img = geomimage::encode(&mesh, &uv, image.n, g, image.sampling.into())?;
            emit_warning(img.fallback_pixels);
            print!("{}", to_json(&store(&img, image)?));
        }
        GimgCommand::Decode { input, out } => {
            let img = geomimage::read_image::<f64>(input)?;
            let decoded = geomimage::decode(&img)?;
            if let WeldStatus::Open(reason) = &decoded.status {
                eprintln!("{}", json!({ "warning": "emitted open mesh", "reason": reason }));
            }
            write(out, &write_obj(&decoded.mesh, None, &[format!("genus {}", img.genus.index())]))?;
            let m = &decoded.mesh;
            print!(
                "{}",
                to_json(&json!({
                    "vertices": m.n_vertices(),
                    "faces": m.n_faces(),
                    "euler_characteristic": m.euler_characteristic(),
                    "closed": m.is_closed(),
                    "welded": decoded.status == WeldStatus::Welded,
                    "angle_histogram_deg10": geomimage::angle_histogram(m, 18),
                }))
            );
        }
        GimgCommand::Correct { source, delta, image, map_out, summary } => {
            let cfg = pipeline_config(source, Measure::Const, false)?;
            let mesh: TriMesh<f64> = load_mesh(&source.input)?;
            let out = pipeline::run(&mesh, &cfg)?;
            let sliced = &out.sliced.mesh;
            let harmonic = out.solve.harmonic.as_ref().expect("pipeline runs the fixed-point initialization");
            let layout = FreeLayout::new(sliced.n_vertices(), out.sliced.segments()?)?;
            let corr = geomimage::correct_angles(sliced, harmonic, &out.map, &layout, *delta)?;
            let folds = squaremap::bijectivity::count_folded(sliced, &corr.map).count;
            let positions = sliced.scaled(1.0 / out.scale);
            if let Some(p) = map_out {
                let uv = corr.map.points();
                write(p, &write_obj(&positions, Some(&uv), &[format!("genus {}", cfg.genus.index())]))?;
            }
            let img = geomimage::encode(&positions, &corr.map, image.n, cfg.genus, image.sampling.into())?;
            emit_warning(img.fallback_pixels);
            let mut v = store(&img, image)?;
            v["max_mu_before"] = json!(corr.max_before);
            v["max_mu_after"] = json!(corr.max_after);
            v["delta"] = json!(delta);
            v["folds"] = json!(folds);
            match summary {
                Some(p) => write(p, &to_json(&v))?,
                None => print!("{}", to_json(&v)),
            }
        }
    }
    Ok(())
}

fn gen(cmd: &GenCommand) -> CliResult {
    match cmd {
        GenCommand::Icosphere { subdiv, out } => {
            write(out, &write_obj(&generate::icosphere::<f64>(*subdiv), None, &["genus 0".into()]))?;
        }
        GenCommand::Torus { nu, nv, major, minor, out, loops } => {
            if *nu < 3 || *nv < 3 || !(minor > &0.0 && major > minor) {
                return Err(Failure::usage("torus needs nu, nv >= 3 and major > minor > 0"));
            }
            write(out, &write_obj(&generate::torus::<f64>(*nu, *nv, *major, *minor), None, &["genus 1".into()]))?;
            if let Some(p) = loops {
                let (a, b) = generate::torus_loops(*nu, *nv);
                let line = |l: &CutPath| l.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
                write(p, &format!("{}\n{}\n", line(&CutPath::closed(a)), line(&CutPath::closed(b))))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("{}", json!({ "error": "usage", "message": e.to_string() }));
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Param(a) => param(a),
        Command::Gimg { command } => gimg(command),
        Command::Gen { command } => gen(command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.kind, "message": f.message }));
            ExitCode::from(f.code)
        }
    }
}
