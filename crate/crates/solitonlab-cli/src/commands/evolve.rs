use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use solitonlab::grid::{Grid1D, ScalarField};
use solitonlab::lattice::{evolve_dnls, evolve_toda, toda_soliton, DnlsState, LatticeBoundary, TodaState};
use solitonlab::pde::{evolve, EquationId};
use solitonlab::solitons::{KdvSolitonSpec, NlsSechSoliton};

use crate::config;
use crate::output::{fmt17, write_config, CsvWriter};

#[derive(clap::Args, Clone)]
pub struct Args {
    /// kdv | mkdv | nls_pair | sinh_gordon | liouville | toda | dnls
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    dt: Option<f64>,
    /// total integration time (continuum models)
    #[arg(long)]
    t_end: Option<f64>,
    /// steps (lattice models; t_end*dt wins if both given)
    #[arg(long)]
    steps: Option<usize>,
    /// half-box size (continuum)
    #[arg(long)]
    length: Option<f64>,
    /// grid points (continuum)
    #[arg(long)]
    points: Option<usize>,
    /// lattice size
    #[arg(long)]
    n: Option<usize>,
    /// open | periodic (toda)
    #[arg(long)]
    boundary: Option<String>,
    /// snapshots to record
    #[arg(long)]
    snapshots: Option<usize>,
    /// RNG seed for seeded initial data
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct InitConfig {
    /// auto | kdv_soliton | sine | nls_sech | toda_soliton | seeded | zero
    pub kind: String,
    pub c: f64,
    pub x0: f64,
    pub amplitude: f64,
    pub mode: f64,
    pub k: f64,
    pub chi: f64,
    pub kappa: f64,
    pub sigma: f64,
    pub gamma: f64,
    pub q_plus: f64,
}

impl Default for InitConfig {
    fn default() -> Self {
        InitConfig {
            kind: "auto".into(),
            c: 1.0,
            x0: 0.0,
            amplitude: 0.1,
            mode: 1.0,
            k: 0.8,
            chi: 0.0,
            kappa: 0.8,
            sigma: 2.0,
            gamma: 0.7,
            q_plus: 0.0,
        }
    }
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub model: String,
    pub length: f64,
    pub points: usize,
    pub dt: f64,
    pub t_end: f64,
    pub n: usize,
    pub steps: usize,
    pub boundary: String,
    pub snapshots: usize,
    pub seed: u64,
    pub init: InitConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            model: "kdv".into(),
            length: 40.0,
            points: 512,
            dt: 2e-4,
            t_end: 0.2,
            n: 8,
            steps: 1000,
            boundary: "periodic".into(),
            snapshots: 5,
            seed: 7,
            init: InitConfig::default(),
        }
    }
}

fn effective(args: &Args, file: Option<&Path>) -> Result<Config, String> {
    let mut cfg: Config = config::load(file)?;
    if let Some(v) = &args.model {
        cfg.model = v.clone();
    }
    if let Some(v) = args.dt {
        cfg.dt = v;
    }
    if let Some(v) = args.t_end {
        cfg.t_end = v;
    }
    if let Some(v) = args.steps {
        cfg.steps = v;
    }
    if let Some(v) = args.length {
        cfg.length = v;
    }
    if let Some(v) = args.points {
        cfg.points = v;
    }
    if let Some(v) = args.n {
        cfg.n = v;
    }
    if let Some(v) = &args.boundary {
        cfg.boundary = v.clone();
    }
    if let Some(v) = args.snapshots {
        cfg.snapshots = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if cfg.init.kind == "auto" {
        cfg.init.kind = match cfg.model.as_str() {
            "kdv" | "mkdv" => "kdv_soliton",
            "nls_pair" => "nls_sech",
            "toda" | "dnls" => "seeded",
            _ => "zero",
        }
        .to_string();
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &Config) -> Result<(), String> {
    match cfg.model.as_str() {
        "kdv" | "mkdv" | "nls_pair" | "sinh_gordon" | "liouville" | "toda" | "dnls" => {}
        other => return Err(format!("unknown model `{other}`")),
    }
    if cfg.dt <= 0.0 {
        return Err("dt must be positive".into());
    }
    match cfg.boundary.as_str() {
        "open" | "periodic" => {}
        other => return Err(format!("unknown boundary `{other}`")),
    }
    // CFL guidance for dispersive models: dt ≤ 0.1 dx³
    if matches!(cfg.model.as_str(), "kdv" | "mkdv") {
        let dx = 2.0 * cfg.length / cfg.points as f64;
        let cap = 0.1 * dx * dx * dx;
        if cfg.dt > cap {
            return Err(format!("dt = {} exceeds the CFL-safe bound 0.1·dx³ = {cap:.3e}", cfg.dt));
        }
    }
    Ok(())
}

pub fn override_param(mut args: Args, key: &str, value: f64) -> Result<Args, String> {
    match key {
        "dt" => args.dt = Some(value),
        "t_end" => args.t_end = Some(value),
        other => return Err(format!("evolve cannot sweep `{other}`")),
    }
    Ok(args)
}

pub fn run(args: Args, file: Option<&Path>, dry_run: bool, dir: &Path) -> Result<(), String> {
    let cfg = effective(&args, file)?;
    if dry_run {
        println!("config ok");
        return Ok(());
    }
    write_config(dir, &cfg)?;
    match cfg.model.as_str() {
        "toda" => run_toda(&cfg, dir),
        "dnls" => run_dnls(&cfg, dir),
        _ => run_pde(&cfg, dir),
    }
}

fn run_pde(cfg: &Config, dir: &Path) -> Result<(), String> {
    let grid = Grid1D::periodic(-cfg.length, cfg.length, cfg.points).map_err(|e| e.to_string())?;
    let eq = match cfg.model.as_str() {
        "kdv" => EquationId::Kdv,
        "mkdv" => EquationId::Mkdv,
        "nls_pair" => EquationId::NlsPair,
        "sinh_gordon" => EquationId::SinhGordon { beta: 2.0 },
        "liouville" => EquationId::Liouville { c: 1.0 },
        _ => unreachable!(),
    };
    let state: Vec<ScalarField> = match (cfg.model.as_str(), cfg.init.kind.as_str()) {
        ("kdv" | "mkdv", "kdv_soliton") => {
            let spec = KdvSolitonSpec::new(cfg.init.c, cfg.init.x0, 1.0);
            vec![ScalarField::from_real_fn(grid, |x| spec.value(x, 0.0))]
        }
        ("kdv" | "mkdv", "sine") => {
            let (a, m, l) = (cfg.init.amplitude, cfg.init.mode, cfg.length);
            vec![ScalarField::from_real_fn(grid, move |x| {
                a * (std::f64::consts::PI * m * x / l).sin()
            })]
        }
        ("nls_pair", "nls_sech") => {
            let sol = NlsSechSoliton { k: cfg.init.k, chi: cfg.init.chi };
            let (u, uh) = sol.fields(0.0, grid);
            vec![u, uh]
        }
        (_, "zero") => (0..eq.components()).map(|_| ScalarField::zeros(grid)).collect(),
        (m, k) => return Err(format!("init `{k}` is not available for model `{m}`")),
    };
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    let stride = (steps / cfg.snapshots.max(1)).max(1);
    let traj = evolve(eq, &state, cfg.dt, steps, stride).map_err(|e| e.to_string())?;
    let mut csv = CsvWriter::new("t,x,re,im");
    for (ti, t) in traj.times.iter().enumerate() {
        let f = &traj.states[ti][0];
        for (i, x) in grid.xs().enumerate() {
            csv.row(&[fmt17(*t), fmt17(x), fmt17(f.values[i].re), fmt17(f.values[i].im)]);
        }
    }
    csv.write(&dir.join("trajectory.csv"))
}

fn run_toda(cfg: &Config, dir: &Path) -> Result<(), String> {
    let boundary = if cfg.boundary == "open" { LatticeBoundary::Open } else { LatticeBoundary::Periodic };
    let state = match cfg.init.kind.as_str() {
        "toda_soliton" => {
            let half = cfg.n as i64 / 2;
            toda_soliton(cfg.init.q_plus, cfg.init.kappa, cfg.init.sigma, cfg.init.gamma, -half..(cfg.n as i64 - half), 0.0, boundary)
        }
        "seeded" => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
            let amp = cfg.init.amplitude;
            TodaState::new(
                (0..cfg.n).map(|_| rng.gen_range(-amp..amp)).collect(),
                (0..cfg.n).map(|_| rng.gen_range(-amp..amp)).collect(),
                boundary,
            )
        }
        other => return Err(format!("init `{other}` is not available for toda")),
    };
    let stride = (cfg.steps / cfg.snapshots.max(1)).max(1);
    let traj = evolve_toda(&state, cfg.dt, cfg.steps, stride);
    let mut csv = CsvWriter::new("t,site,q,p");
    for (ti, t) in traj.times.iter().enumerate() {
        let s = &traj.states[ti];
        for j in 0..s.len() {
            csv.row(&[fmt17(*t), j.to_string(), fmt17(s.q[j]), fmt17(s.p[j])]);
        }
    }
    csv.write(&dir.join("trajectory.csv"))
}

fn run_dnls(cfg: &Config, dir: &Path) -> Result<(), String> {
    let state = match cfg.init.kind.as_str() {
        "seeded" => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
            let amp = cfg.init.amplitude;
            let mut c = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp;
            DnlsState::new((0..cfg.n).map(|_| c()).collect(), (0..cfg.n).map(|_| c()).collect())
        }
        other => return Err(format!("init `{other}` is not available for dnls")),
    };
    let stride = (cfg.steps / cfg.snapshots.max(1)).max(1);
    let traj = evolve_dnls(&state, cfg.dt, cfg.steps, stride);
    let mut csv = CsvWriter::new("t,site,x_re,x_im,X_re,X_im");
    for (ti, t) in traj.times.iter().enumerate() {
        let s = &traj.states[ti];
        for j in 0..s.len() {
            csv.row(&[
                fmt17(*t),
                j.to_string(),
                fmt17(s.x[j].re),
                fmt17(s.x[j].im),
                fmt17(s.cap_x[j].re),
                fmt17(s.cap_x[j].im),
            ]);
        }
    }
    csv.write(&dir.join("trajectory.csv"))
}
