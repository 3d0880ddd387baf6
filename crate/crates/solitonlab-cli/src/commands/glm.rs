use std::path::Path;

use serde::{Deserialize, Serialize};
use solitonlab::glm::{airy_kernel, glm_discrete, glm_nystrom, glm_nystrom_u, trace_identity_residual, DiscreteKernelSpec};
use solitonlab::grid::Grid1D;

use crate::config;
use crate::output::{fmt17, write_config, write_text, CsvWriter};

#[derive(clap::Args, Clone)]
pub struct Args {
    /// discrete | airy
    #[arg(long)]
    kernel: Option<String>,
    /// comma-separated exponents (discrete)
    #[arg(long)]
    kappa: Option<String>,
    /// comma-separated norming constants (discrete)
    #[arg(long)]
    b: Option<String>,
    /// evaluation time
    #[arg(long)]
    t: Option<f64>,
    /// dispersion scale
    #[arg(long)]
    alpha: Option<f64>,
    /// Nyström nodes (airy)
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub kernel: String,
    pub kappa: Vec<f64>,
    pub b: Vec<f64>,
    pub t: f64,
    pub alpha: f64,
    pub length: f64,
    pub points: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
    pub m: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            kernel: "discrete".into(),
            kappa: vec![1.0],
            b: vec![2.0],
            t: 0.0,
            alpha: -4.0,
            length: 15.0,
            points: 4096,
            x_min: -4.0,
            x_max: 2.0,
            x_points: 25,
            m: 480,
        }
    }
}

fn effective(args: &Args, file: Option<&Path>) -> Result<Config, String> {
    let mut cfg: Config = config::load(file)?;
    if let Some(v) = &args.kernel {
        cfg.kernel = v.clone();
    }
    if let Some(v) = &args.kappa {
        cfg.kappa = config::parse_f64_list(v)?;
    }
    if let Some(v) = &args.b {
        cfg.b = config::parse_f64_list(v)?;
    }
    if let Some(v) = args.t {
        cfg.t = v;
    }
    if let Some(v) = args.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = args.m {
        cfg.m = v;
    }
    match cfg.kernel.as_str() {
        "discrete" => {
            DiscreteKernelSpec::new(cfg.kappa.clone(), cfg.b.clone(), cfg.alpha).map_err(|e| e.to_string())?;
        }
        "airy" => {
            if cfg.t <= 0.0 {
                return Err("airy kernel needs t > 0".into());
            }
        }
        other => return Err(format!("unknown kernel `{other}`")),
    }
    Ok(cfg)
}

pub fn override_param(mut args: Args, key: &str, value: f64) -> Result<Args, String> {
    match key {
        "t" => args.t = Some(value),
        "alpha" => args.alpha = Some(value),
        other => return Err(format!("glm cannot sweep `{other}`")),
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
    match cfg.kernel.as_str() {
        "discrete" => {
            let spec = DiscreteKernelSpec::new(cfg.kappa.clone(), cfg.b.clone(), cfg.alpha).map_err(|e| e.to_string())?;
            let grid = Grid1D::decaying(-cfg.length, cfg.length, cfg.points).map_err(|e| e.to_string())?;
            let res = glm_discrete(&spec, cfg.t, grid).map_err(|e| e.to_string())?;
            let mut csv = CsvWriter::new("x,u");
            for (i, x) in grid.xs().enumerate() {
                csv.row(&[fmt17(x), fmt17(res.u.values[i].re)]);
            }
            csv.write(&dir.join("u.csv"))?;
            let meta = serde_json::json!({
                "kernel": "discrete",
                "trace_identity_residual": trace_identity_residual(&res),
            });
            write_text(&dir.join("meta.json"), &(serde_json::to_string_pretty(&meta).unwrap() + "\n"))
        }
        "airy" => {
            let kernel = airy_kernel(cfg.t);
            let mut csv = CsvWriter::new("x,u");
            let mut worst_cond: f64 = 0.0;
            for i in 0..cfg.x_points {
                let x = cfg.x_min + (cfg.x_max - cfg.x_min) * i as f64 / (cfg.x_points - 1) as f64;
                let sol = glm_nystrom(&kernel, x, cfg.m).map_err(|e| e.to_string())?;
                worst_cond = worst_cond.max(sol.cond);
                let u = glm_nystrom_u(&kernel, x, cfg.m, 1e-3).map_err(|e| e.to_string())?;
                csv.row(&[fmt17(x), fmt17(u)]);
            }
            csv.write(&dir.join("u.csv"))?;
            let meta = serde_json::json!({
                "kernel": "airy",
                "l_cut": kernel.decay_point,
                "max_condition_number": worst_cond,
            });
            write_text(&dir.join("meta.json"), &(serde_json::to_string_pretty(&meta).unwrap() + "\n"))
        }
        _ => unreachable!(),
    }
}
