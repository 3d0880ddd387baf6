use std::path::Path;

use serde::{Deserialize, Serialize};
use solitonlab::grid::{DerivScheme, Grid1D, ScalarField};
use solitonlab::pde::{residual, EquationId};
use solitonlab::solitons::{kdv_n_soliton, nls_bt_soliton, shg_one_soliton, KdvSolitonSpec, ShgSolitonSpec};

use crate::config;
use crate::output::{fmt17, write_config, write_text, CsvWriter};

#[derive(clap::Args, Clone)]
pub struct Args {
    /// kdv | shg | nls
    #[arg(long)]
    eq: Option<String>,
    /// KdV closed-form speed (uses eq:KdVSoliton directly)
    #[arg(long)]
    c: Option<f64>,
    /// comma-separated GLM exponents for the N-soliton
    #[arg(long)]
    kappa: Option<String>,
    /// comma-separated GLM norming constants (default 2κ each)
    #[arg(long)]
    b: Option<String>,
    /// dispersion scale (default -4)
    #[arg(long)]
    alpha: Option<f64>,
    /// evaluation time
    #[arg(long)]
    t: Option<f64>,
    /// half-box size
    #[arg(long)]
    length: Option<f64>,
    /// grid points
    #[arg(long)]
    points: Option<usize>,
    /// sinh-Gordon BT parameter
    #[arg(long)]
    bt_alpha: Option<f64>,
    /// sinh-Gordon integration constant
    #[arg(long)]
    a: Option<f64>,
    /// sinh-Gordon coupling
    #[arg(long)]
    beta: Option<f64>,
    /// NLS-type dressing parameter k
    #[arg(long)]
    k: Option<f64>,
    /// NLS-type phase constant f0
    #[arg(long)]
    f0: Option<f64>,
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub eq: String,
    pub c: Option<f64>,
    pub kappa: Vec<f64>,
    pub b: Option<Vec<f64>>,
    pub alpha: f64,
    pub t: f64,
    pub length: f64,
    pub points: usize,
    pub bt_alpha: f64,
    pub a: f64,
    pub beta: f64,
    pub k: f64,
    pub f0: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            eq: "kdv".into(),
            c: None,
            kappa: vec![1.0],
            b: None,
            alpha: -4.0,
            t: 0.0,
            length: 20.0,
            points: 1025,
            bt_alpha: 1.3,
            a: 0.4,
            beta: 2.0,
            k: 1.0,
            f0: -24.0,
        }
    }
}

fn effective(args: &Args, file: Option<&Path>) -> Result<Config, String> {
    let mut cfg: Config = config::load(file)?;
    if let Some(v) = &args.eq {
        cfg.eq = v.clone();
    }
    if args.c.is_some() {
        cfg.c = args.c;
    }
    if let Some(v) = &args.kappa {
        cfg.kappa = config::parse_f64_list(v)?;
    }
    if let Some(v) = &args.b {
        cfg.b = Some(config::parse_f64_list(v)?);
    }
    if let Some(v) = args.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = args.t {
        cfg.t = v;
    }
    if let Some(v) = args.length {
        cfg.length = v;
    }
    if let Some(v) = args.points {
        cfg.points = v;
    }
    if let Some(v) = args.bt_alpha {
        cfg.bt_alpha = v;
    }
    if let Some(v) = args.a {
        cfg.a = v;
    }
    if let Some(v) = args.beta {
        cfg.beta = v;
    }
    if let Some(v) = args.k {
        cfg.k = v;
    }
    if let Some(v) = args.f0 {
        cfg.f0 = v;
    }
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &Config) -> Result<(), String> {
    match cfg.eq.as_str() {
        "kdv" | "shg" | "nls" => {}
        other => return Err(format!("unknown equation `{other}` (kdv|shg|nls)")),
    }
    if cfg.points < 16 {
        return Err("need at least 16 grid points".into());
    }
    if cfg.length <= 0.0 {
        return Err("length must be positive".into());
    }
    if cfg.eq == "kdv" && cfg.c.is_none() {
        if cfg.kappa.is_empty() {
            return Err("kdv needs --c or --kappa".into());
        }
        if let Some(b) = &cfg.b {
            if b.len() != cfg.kappa.len() {
                return Err("kappa and b lengths differ".into());
            }
        }
    }
    Ok(())
}

pub fn override_param(mut args: Args, key: &str, value: f64) -> Result<Args, String> {
    match key {
        "c" => args.c = Some(value),
        "t" => args.t = Some(value),
        "k" => args.k = Some(value),
        "alpha" => args.alpha = Some(value),
        other => return Err(format!("soliton cannot sweep `{other}`")),
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
    let grid = Grid1D::decaying(-cfg.length, cfg.length, cfg.points).map_err(|e| e.to_string())?;
    match cfg.eq.as_str() {
        "kdv" => run_kdv(&cfg, grid, dir),
        "shg" => run_shg(&cfg, grid, dir),
        "nls" => run_nls(&cfg, grid, dir),
        _ => unreachable!(),
    }
}

fn write_profile(dir: &Path, name: &str, field: &ScalarField) -> Result<(), String> {
    let mut csv = CsvWriter::new("x,re,im");
    for (i, x) in field.grid.xs().enumerate() {
        csv.row(&[fmt17(x), fmt17(field.values[i].re), fmt17(field.values[i].im)]);
    }
    csv.write(&dir.join(name))
}

fn run_kdv(cfg: &Config, grid: Grid1D, dir: &Path) -> Result<(), String> {
    let (field, meta): (ScalarField, serde_json::Value) = if let Some(c) = cfg.c {
        let spec = KdvSolitonSpec::new(c, 0.0, 1.0);
        let t = cfg.t;
        let u = ScalarField::from_real_fn(grid, |x| spec.value(x, t));
        let sampler = move |tt: f64| vec![ScalarField::from_real_fn(grid, |x| spec.value(x, tt))];
        let r = residual(EquationId::Kdv, &sampler, cfg.t, DerivScheme::Fd4, None).map_err(|e| e.to_string())?;
        (u, serde_json::json!({"form": "closed", "c": c, "residual": r, "masks": []}))
    } else {
        let b: Vec<f64> = match &cfg.b {
            Some(b) => b.clone(),
            None => cfg.kappa.iter().map(|k| 2.0 * k).collect(),
        };
        let u = kdv_n_soliton(&cfg.kappa, &b, cfg.alpha, cfg.t, grid).map_err(|e| e.to_string())?;
        let kap = cfg.kappa.clone();
        let bb = b.clone();
        let alpha = cfg.alpha;
        let sampler = move |tt: f64| vec![kdv_n_soliton(&kap, &bb, alpha, tt, grid).unwrap()];
        let r = residual(EquationId::Kdv, &sampler, cfg.t, DerivScheme::Fd4, None).map_err(|e| e.to_string())?;
        (
            u,
            serde_json::json!({
                "form": "glm", "kappa": cfg.kappa, "b": b, "alpha": cfg.alpha, "residual": r, "masks": []
            }),
        )
    };
    write_profile(dir, "profile.csv", &field)?;
    write_text(&dir.join("meta.json"), &(serde_json::to_string_pretty(&meta).unwrap() + "\n"))
}

fn run_shg(cfg: &Config, grid: Grid1D, dir: &Path) -> Result<(), String> {
    let spec = ShgSolitonSpec::new(cfg.bt_alpha, cfg.a, cfg.beta);
    let (phi, _pi) = shg_one_soliton(spec, cfg.t, grid).map_err(|e| e.to_string())?;
    let sampler = move |tt: f64| {
        let (phi, pi) = shg_one_soliton(spec, tt, grid).unwrap();
        vec![phi, pi]
    };
    let r = residual(EquationId::SinhGordon { beta: cfg.beta }, &sampler, cfg.t, DerivScheme::Fd4, None)
        .map_err(|e| e.to_string())?;
    write_profile(dir, "profile.csv", &phi)?;
    let meta = serde_json::json!({
        "alpha": cfg.bt_alpha, "a": cfg.a, "beta": cfg.beta, "residual": r, "masks": []
    });
    write_text(&dir.join("meta.json"), &(serde_json::to_string_pretty(&meta).unwrap() + "\n"))
}

fn run_nls(cfg: &Config, grid: Grid1D, dir: &Path) -> Result<(), String> {
    let sol = nls_bt_soliton(cfg.k, cfg.f0, grid).map_err(|e| e.to_string())?;
    let t = cfg.t;
    let u = ScalarField::from_real_fn(grid, |x| sol.u(x, t));
    let uh = ScalarField::from_real_fn(grid, |x| sol.uhat(x, t));
    write_profile(dir, "profile_u.csv", &u)?;
    write_profile(dir, "profile_uhat.csv", &uh)?;
    let meta = serde_json::json!({
        "k": sol.k, "f0": sol.f0, "mu": sol.mu, "f1": sol.f1,
        "residual": sol.residual, "pole": sol.pole(cfg.t), "masks": [sol.pole(cfg.t)]
    });
    write_text(&dir.join("meta.json"), &(serde_json::to_string_pretty(&meta).unwrap() + "\n"))
}
