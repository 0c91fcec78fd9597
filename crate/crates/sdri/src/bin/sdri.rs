//! Batch front door over the library: validate, evaluate, relax, minimize,
//! verify, sweep, and render. Emits one JSON record per line; exit code 0
//! means no error record was produced.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde::Serialize;

use sdri::analysis::{generate_sequence, lsc_check_weighted, SequenceKind};
use sdri::elasticity::{relax, IsotropicPhase, Material};
use sdri::energy::total_energy;
use sdri::geometry::{validate_configuration, Configuration};
use sdri::grid::Grid;
use sdri::io;
use sdri::minimize::{
    minimize_constrained_observed, minimize_penalized_observed, MinimizeParams, Schedule,
    Trajectory,
};
use sdri::render::render_svg;
use sdri::tension::{validate_hypotheses, SurfaceTensions};

const USAGE: &str = "sdri <command> [flags]

commands:
  validate   --config FILE [--m m0,m1]
  energy     --config FILE --tensions FILE [--material FILE] [--lambda a,b --volumes v0,v1]
  relax      --config FILE --material FILE
  minimize   --config FILE --tensions FILE [--material FILE] [--constrained]
             [--m m0,m1] [--lambda a,b] [--volumes v0,v1] [--seed N]
             [--t0 X] [--cooling X] [--steps N] [--cadence N]
             [--render-every N] [--deterministic] [--out DIR]
  lsc        --kind NAME --tensions FILE [--count K] [--grid nx,ny]
             [--tolerance X] [--adversarial]
  sweep      --config FILE --tensions FILE [--lambda-values 1,10,100]
             [--tension-ratios 0.5,1,2] [minimize flags] [--out DIR]
  render     --config FILE [--out DIR]

common flags: --config --tensions --material --seed --out --deterministic
              --render-every N --lambda a,b --volumes v0,v1 --m m0,m1
";

#[derive(Debug, Serialize)]
struct Header<'a> {
    r#type: &'static str,
    command: &'a str,
    seed: u64,
    deterministic: bool,
}

#[derive(Debug, Serialize)]
struct ErrorRecord {
    r#type: &'static str,
    message: String,
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            let record = ErrorRecord {
                r#type: "error",
                message: msg,
            };
            println!("{}", serde_json::to_string(&record).unwrap());
            ExitCode::FAILURE
        }
    }
}

struct Flags {
    values: BTreeMap<String, String>,
    switches: Vec<String>,
}

impl Flags {
    fn parse(args: &[String]) -> Result<Flags, String> {
        let mut values = BTreeMap::new();
        let mut switches = Vec::new();
        let mut it = args.iter().peekable();
        while let Some(arg) = it.next() {
            let Some(name) = arg.strip_prefix("--") else {
                return Err(format!("unexpected argument '{arg}'\n{USAGE}"));
            };
            match name {
                "deterministic" | "adversarial" | "constrained" => {
                    switches.push(name.to_string());
                }
                _ => {
                    let value = it
                        .next()
                        .ok_or_else(|| format!("flag --{name} needs a value"))?;
                    values.insert(name.to_string(), value.clone());
                }
            }
        }
        Ok(Flags { values, switches })
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.values.get(name).map(|s| s.as_str())
    }

    fn required(&self, name: &str) -> Result<&str, String> {
        self.get(name).ok_or_else(|| format!("missing --{name}"))
    }

    fn switch(&self, name: &str) -> bool {
        self.switches.iter().any(|s| s == name)
    }

    fn parse_pair(&self, name: &str) -> Result<Option<(f64, f64)>, String> {
        match self.get(name) {
            None => Ok(None),
            Some(raw) => {
                let parts: Vec<&str> = raw.split(',').collect();
                if parts.len() != 2 {
                    return Err(format!("--{name} wants 'a,b', got '{raw}'"));
                }
                let a = parts[0].parse().map_err(|_| format!("--{name}: bad number"))?;
                let b = parts[1].parse().map_err(|_| format!("--{name}: bad number"))?;
                Ok(Some((a, b)))
            }
        }
    }

    fn parse_usize_pair(&self, name: &str) -> Result<Option<(usize, usize)>, String> {
        match self.get(name) {
            None => Ok(None),
            Some(raw) => {
                let parts: Vec<&str> = raw.split(',').collect();
                if parts.len() != 2 {
                    return Err(format!("--{name} wants 'a,b', got '{raw}'"));
                }
                let a = parts[0].parse().map_err(|_| format!("--{name}: bad count"))?;
                let b = parts[1].parse().map_err(|_| format!("--{name}: bad count"))?;
                Ok(Some((a, b)))
            }
        }
    }
}

fn run(args: &[String]) -> Result<(), String> {
    let Some(command) = args.first() else {
        return Err(USAGE.to_string());
    };
    let flags = Flags::parse(&args[1..])?;
    let seed: u64 = flags
        .get("seed")
        .map(|s| s.parse().map_err(|_| "--seed: bad integer".to_string()))
        .transpose()?
        .unwrap_or(1);
    let header = Header {
        r#type: "header",
        command,
        seed,
        deterministic: flags.switch("deterministic"),
    };
    println!("{}", serde_json::to_string(&header).unwrap());

    match command.as_str() {
        "validate" => cmd_validate(&flags),
        "energy" => cmd_energy(&flags),
        "relax" => cmd_relax(&flags),
        "minimize" => cmd_minimize(&flags, seed),
        "lsc" => cmd_lsc(&flags),
        "sweep" => cmd_sweep(&flags, seed),
        "render" => cmd_render(&flags),
        other => Err(format!("unknown command '{other}'\n{USAGE}")),
    }
}

fn load_config(flags: &Flags) -> Result<Configuration, String> {
    let path = flags.required("config")?;
    io::load_configuration(Path::new(path)).map_err(|e| e.to_string())
}

fn load_tensions(flags: &Flags) -> Result<SurfaceTensions, String> {
    let path = flags.required("tensions")?;
    io::load_tensions(Path::new(path)).map_err(|e| e.to_string())
}

fn load_material(flags: &Flags) -> Result<Material, String> {
    match flags.get("material") {
        Some(path) => io::load_material(Path::new(path)).map_err(|e| e.to_string()),
        None => Ok(Material::isotropic(
            IsotropicPhase::new(1.0, 1.0),
            IsotropicPhase::new(1.0, 1.0),
        )),
    }
}

fn out_dir(flags: &Flags) -> Result<Option<PathBuf>, String> {
    match flags.get("out") {
        None => Ok(None),
        Some(dir) => {
            let path = PathBuf::from(dir);
            std::fs::create_dir_all(&path).map_err(|e| e.to_string())?;
            Ok(Some(path))
        }
    }
}

fn emit<T: Serialize>(record: &T) {
    println!("{}", serde_json::to_string(record).unwrap());
}

fn cmd_validate(flags: &Flags) -> Result<(), String> {
    let cfg = load_config(flags)?;
    let m = flags.parse_usize_pair("m")?.unwrap_or((1, 4));
    let report = validate_configuration(&cfg, m);
    #[derive(Serialize)]
    struct Rec {
        r#type: &'static str,
        admissible: bool,
        substrate_components: usize,
        composite_components: usize,
        violations: Vec<String>,
    }
    emit(&Rec {
        r#type: "admissibility",
        admissible: report.admissible,
        substrate_components: report.substrate_components,
        composite_components: report.composite_components,
        violations: report.violations.iter().map(|v| v.to_string()).collect(),
    });
    if report.admissible {
        Ok(())
    } else {
        Err("configuration is inadmissible".into())
    }
}

fn cmd_energy(flags: &Flags) -> Result<(), String> {
    let cfg = load_config(flags)?;
    let tensions = load_tensions(flags)?;
    let material = load_material(flags)?;
    let lambda = flags.parse_pair("lambda")?;
    let volumes = flags.parse_pair("volumes")?;
    let breakdown =
        total_energy(&cfg, &tensions, &material, lambda, volumes).map_err(|e| e.to_string())?;
    let hyp = validate_hypotheses(&cfg.grid, &tensions, &material).map_err(|e| e.to_string())?;
    #[derive(Serialize)]
    struct Rec<'a> {
        r#type: &'static str,
        breakdown: &'a sdri::energy::EnergyBreakdown,
        class_names: Vec<&'static str>,
        c1: f64,
        c2: f64,
        h2_ok: bool,
    }
    emit(&Rec {
        r#type: "energy",
        breakdown: &breakdown,
        class_names: sdri::geometry::BoundaryClass::ALL.iter().map(|c| c.name()).collect(),
        c1: hyp.c1,
        c2: hyp.c2,
        h2_ok: hyp.h2_ok,
    });
    Ok(())
}

fn cmd_relax(flags: &Flags) -> Result<(), String> {
    let cfg = load_config(flags)?;
    let material = load_material(flags)?;
    let (mesh, u, w) = relax(&cfg, &material).map_err(|e| e.to_string())?;
    #[derive(Serialize)]
    struct Rec {
        r#type: &'static str,
        elastic: f64,
        nodes: usize,
        elements: usize,
        components: usize,
    }
    emit(&Rec {
        r#type: "relax",
        elastic: w,
        nodes: mesh.node_count(),
        elements: mesh.elements.len(),
        components: mesh.component_count,
    });
    if let Some(dir) = out_dir(flags)? {
        #[derive(Serialize)]
        struct NodeRec {
            node: usize,
            x: f64,
            y: f64,
            ux: f64,
            uy: f64,
        }
        let mut writer = io::RecordWriter::new(
            std::fs::File::create(dir.join("displacement.jsonl")).map_err(|e| e.to_string())?,
        );
        for (n, &(ux, uy)) in u.values.iter().enumerate() {
            let (x, y) = mesh.nodes[n].pos;
            writer
                .write(&NodeRec { node: n, x, y, ux, uy })
                .map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

fn minimize_params(flags: &Flags, seed: u64) -> Result<MinimizeParams, String> {
    let mut params = MinimizeParams {
        seed,
        ..Default::default()
    };
    if let Some(m) = flags.parse_usize_pair("m")? {
        params.m = m;
    }
    if let Some(l) = flags.parse_pair("lambda")? {
        params.lambda = l;
    }
    params.volumes = flags.parse_pair("volumes")?;
    let mut schedule = Schedule::default();
    if let Some(t0) = flags.get("t0") {
        schedule.t0 = t0.parse().map_err(|_| "--t0: bad number".to_string())?;
    }
    if let Some(c) = flags.get("cooling") {
        schedule.cooling = c.parse().map_err(|_| "--cooling: bad number".to_string())?;
    }
    if let Some(n) = flags.get("steps") {
        schedule.steps = n.parse().map_err(|_| "--steps: bad count".to_string())?;
    }
    params.schedule = schedule;
    if let Some(n) = flags.get("cadence") {
        params.elastic_cadence = n.parse().map_err(|_| "--cadence: bad count".to_string())?;
    }
    Ok(params)
}

fn write_trajectory(dir: Option<&Path>, traj: &Trajectory) -> Result<(), String> {
    for record in &traj.records {
        emit(record);
    }
    #[derive(Serialize)]
    struct BestRec {
        r#type: &'static str,
        f: f64,
        surface: f64,
        elastic: f64,
        penalty: f64,
        step: usize,
        accepted_moves: usize,
    }
    emit(&BestRec {
        r#type: "best",
        f: traj.best.f,
        surface: traj.best.surface,
        elastic: traj.best.elastic,
        penalty: traj.best.penalty,
        step: traj.best.step,
        accepted_moves: traj.accepted_count,
    });
    if let Some(dir) = dir {
        let mut writer = io::RecordWriter::new(
            std::fs::File::create(dir.join("trajectory.jsonl")).map_err(|e| e.to_string())?,
        );
        for record in &traj.records {
            writer.write(record).map_err(|e| e.to_string())?;
        }
        io::save_configuration(&dir.join("best.json"), &traj.best.configuration)
            .map_err(|e| e.to_string())?;
        std::fs::write(dir.join("best.svg"), render_svg(&traj.best.configuration))
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn cmd_minimize(flags: &Flags, seed: u64) -> Result<(), String> {
    let cfg = load_config(flags)?;
    let tensions = load_tensions(flags)?;
    let material = load_material(flags)?;
    let params = minimize_params(flags, seed)?;
    let dir = out_dir(flags)?;
    let render_every: usize = flags
        .get("render-every")
        .map(|s| s.parse().map_err(|_| "--render-every: bad count".to_string()))
        .transpose()?
        .unwrap_or(0);
    let mut observer = |accepted: usize, state: &Configuration| {
        if render_every > 0 && accepted.is_multiple_of(render_every) {
            if let Some(dir) = &dir {
                let _ = std::fs::write(
                    dir.join(format!("snapshot-{accepted:06}.svg")),
                    render_svg(state),
                );
            }
        }
    };
    let traj = if flags.switch("constrained") {
        minimize_constrained_observed(&cfg, &tensions, &material, &params, &mut observer)
    } else {
        minimize_penalized_observed(&cfg, &tensions, &material, &params, &mut observer)
    }
    .map_err(|e| e.to_string())?;
    write_trajectory(dir.as_deref(), &traj)
}

fn cmd_lsc(flags: &Flags) -> Result<(), String> {
    let kind_name = flags.required("kind")?;
    let kind = SequenceKind::parse(kind_name)
        .ok_or_else(|| format!("unknown sequence kind '{kind_name}'"))?;
    let tensions = load_tensions(flags)?;
    let count: usize = flags
        .get("count")
        .map(|s| s.parse().map_err(|_| "--count: bad count".to_string()))
        .transpose()?
        .unwrap_or(6);
    let (nx, ny) = flags.parse_usize_pair("grid")?.unwrap_or((16, 8));
    let grid = Grid::new(1.0, 1.0, nx, ny).map_err(|e| e.to_string())?;
    let tolerance: f64 = flags
        .get("tolerance")
        .map(|s| s.parse().map_err(|_| "--tolerance: bad number".to_string()))
        .transpose()?
        .unwrap_or(1e-9);
    let bundle = generate_sequence(kind, count, &grid).map_err(|e| e.to_string())?;
    let report = lsc_check_weighted(&bundle, &tensions, tolerance, flags.switch("adversarial"))
        .map_err(|e| e.to_string())?;
    if let Some(dir) = out_dir(flags)? {
        for (k, member) in bundle.members.iter().enumerate() {
            std::fs::write(
                dir.join(format!("{}-{:02}.svg", kind.name(), k + 1)),
                render_svg(member),
            )
            .map_err(|e| e.to_string())?;
        }
        std::fs::write(dir.join(format!("{}-limit.svg", kind.name())), render_svg(&bundle.limit))
            .map_err(|e| e.to_string())?;
    }
    #[derive(Serialize)]
    struct Rec<'a> {
        r#type: &'static str,
        kind: &'a str,
        report: &'a sdri::analysis::LscReport,
        gaps_composite: &'a [f64],
        gaps_substrate: &'a [f64],
    }
    emit(&Rec {
        r#type: "lsc",
        kind: kind.name(),
        report: &report,
        gaps_composite: &bundle.report.gaps_composite,
        gaps_substrate: &bundle.report.gaps_substrate,
    });
    if report.pass {
        Ok(())
    } else {
        Err(format!("lower semicontinuity failed: margin {}", report.margin))
    }
}

fn scale_norm(norm: &sdri::tension::FinslerNorm, ratio: f64) -> sdri::tension::FinslerNorm {
    let mut out = norm.clone();
    let q = out.quadrant_scale.get_or_insert([1.0; 4]);
    for v in q.iter_mut() {
        *v *= ratio;
    }
    out
}

fn cmd_sweep(flags: &Flags, seed: u64) -> Result<(), String> {
    let cfg = load_config(flags)?;
    let tensions = load_tensions(flags)?;
    let material = load_material(flags)?;
    let volumes = flags
        .parse_pair("volumes")?
        .unwrap_or((cfg.substrate_area(), cfg.composite_area()));
    // Sweep axis: substrate-tension ratios when given, penalty weights
    // otherwise. Results merge in parameter order.
    let (axis, values): (&str, Vec<f64>) = match flags.get("tension-ratios") {
        Some(raw) => (
            "substrate_ratio",
            raw.split(',')
                .map(|s| s.parse().map_err(|_| format!("--tension-ratios: bad number '{s}'")))
                .collect::<Result<_, String>>()?,
        ),
        None => (
            "lambda",
            flags
                .get("lambda-values")
                .unwrap_or("1,10,100")
                .split(',')
                .map(|s| s.parse().map_err(|_| format!("--lambda-values: bad number '{s}'")))
                .collect::<Result<_, String>>()?,
        ),
    };
    let mut csv = format!("{axis},best_f,surface,elastic,penalty,substrate_error,composite_error\n");
    for &v in &values {
        let mut params = minimize_params(flags, seed)?;
        params.volumes = Some(volumes);
        let swept_tensions;
        let run_tensions = if axis == "substrate_ratio" {
            if flags.get("lambda").is_none() {
                // Ratio sweeps still need the volumes held: pin them firmly
                // unless the caller chose weights.
                params.lambda = (10.0, 10.0);
            }
            swept_tensions = SurfaceTensions {
                substrate: scale_norm(&tensions.substrate, v),
                ..tensions.clone()
            };
            &swept_tensions
        } else {
            params.lambda = (v, v);
            &tensions
        };
        let traj =
            minimize_penalized_observed(&cfg, run_tensions, &material, &params, &mut |_, _| {})
                .map_err(|e| e.to_string())?;
        let best = &traj.best.configuration;
        csv.push_str(&format!(
            "{v},{},{},{},{},{},{}\n",
            traj.best.f,
            traj.best.surface,
            traj.best.elastic,
            traj.best.penalty,
            (best.substrate_area() - volumes.0).abs(),
            (best.composite_area() - volumes.1).abs(),
        ));
        #[derive(Serialize)]
        struct Rec<'a> {
            r#type: &'static str,
            axis: &'a str,
            value: f64,
            best_f: f64,
            substrate_error: f64,
            composite_error: f64,
        }
        emit(&Rec {
            r#type: "sweep-point",
            axis,
            value: v,
            best_f: traj.best.f,
            substrate_error: (best.substrate_area() - volumes.0).abs(),
            composite_error: (best.composite_area() - volumes.1).abs(),
        });
    }
    if let Some(dir) = out_dir(flags)? {
        std::fs::write(dir.join("sweep.csv"), &csv).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn cmd_render(flags: &Flags) -> Result<(), String> {
    let cfg = load_config(flags)?;
    let svg = render_svg(&cfg);
    match out_dir(flags)? {
        Some(dir) => {
            std::fs::write(dir.join("render.svg"), &svg).map_err(|e| e.to_string())?;
            #[derive(Serialize)]
            struct Rec {
                r#type: &'static str,
                path: String,
            }
            emit(&Rec {
                r#type: "render",
                path: dir.join("render.svg").display().to_string(),
            });
        }
        None => print!("{svg}"),
    }
    Ok(())
}
