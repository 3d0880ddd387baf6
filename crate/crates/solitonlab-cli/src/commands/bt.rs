use std::path::Path;

use serde::{Deserialize, Serialize};
use solitonlab::grid::{DerivScheme, Grid1D, ScalarField};
use solitonlab::pde::{residual, EquationId};
use solitonlab::solitons::{
    kdv_bt_ode, kdv_two_soliton_bianchi, nls_bt_soliton, shg_bt_residual_vacuum, ShgSolitonSpec,
};

use crate::config;
use crate::output::{fmt17, write_config, write_text, CsvWriter};

#[derive(clap::Args, Clone)]
pub struct Args {
    /// kdv | kdv2 | shg | nls
    #[arg(long)]
    model: Option<String>,
    /// KdV BT parameter Λ (or Λ₁ for kdv2)
    #[arg(long)]
    lambda: Option<f64>,
    /// second KdV BT parameter (kdv2)
    #[arg(long)]
    lambda2: Option<f64>,
    /// evaluation time
    #[arg(long)]
    t: Option<f64>,
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub model: String,
    pub lambda: f64,
    pub lambda2: f64,
    pub f0: f64,
    pub f02: f64,
    pub t: f64,
    pub shg_alpha: f64,
    pub shg_a: f64,
    pub shg_beta: f64,
    pub k: f64,
    pub nls_f0: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            model: "kdv".into(),
            lambda: 1.0,
            lambda2: 2.0,
            f0: 0.0,
            f02: 0.5,
            t: 0.0,
            shg_alpha: 1.3,
            shg_a: 0.4,
            shg_beta: 2.0,
            k: 1.0,
            nls_f0: -24.0,
        }
    }
}

fn effective(args: &Args, file: Option<&Path>) -> Result<Config, String> {
    let mut cfg: Config = config::load(file)?;
    if let Some(v) = &args.model {
        cfg.model = v.clone();
    }
    if let Some(v) = args.lambda {
        cfg.lambda = v;
    }
    if let Some(v) = args.lambda2 {
        cfg.lambda2 = v;
    }
    if let Some(v) = args.t {
        cfg.t = v;
    }
    match cfg.model.as_str() {
        "kdv" | "kdv2" | "shg" | "nls" => Ok(cfg),
        other => Err(format!("unknown BT model `{other}`")),
    }
}

pub fn run(args: Args, file: Option<&Path>, dry_run: bool, dir: &Path) -> Result<(), String> {
    let cfg = effective(&args, file)?;
    if dry_run {
        println!("config ok");
        return Ok(());
    }
    write_config(dir, &cfg)?;
    match cfg.model.as_str() {
        "kdv" => {
            // window to the right of the pole x* = Λ²t − f₀
            let pole = cfg.lambda * cfg.lambda * cfg.t - cfg.f0;
            let grid = Grid1D::decaying(pole + 3.0, pole + 12.0, 1024).map_err(|e| e.to_string())?;
            let run = kdv_bt_ode(cfg.lambda, cfg.f0, cfg.t, grid).map_err(|e| e.to_string())?;
            let mut csv = CsvWriter::new("x,w,u");
            for (i, x) in grid.xs().enumerate() {
                csv.row(&[fmt17(x), fmt17(run.w.values[i].re), fmt17(run.u.values[i].re)]);
            }
            csv.write(&dir.join("profile.csv"))?;
            let sol = run.soliton;
            let sampler = move |tt: f64| vec![ScalarField::from_real_fn(grid, |x| sol.u(x, tt))];
            let r = residual(EquationId::Kdv, &sampler, cfg.t, DerivScheme::Fd4, None).map_err(|e| e.to_string())?;
            let meta = serde_json::json!({
                "model": "kdv", "lambda": cfg.lambda, "f0": cfg.f0,
                "ode_match": run.ode_match, "kdv_residual": r, "pole": pole, "masks": [pole]
            });
            write_text(&dir.join("meta.json"), &(serde_json::to_string_pretty(&meta).unwrap() + "\n"))
        }
        "kdv2" => {
            let ts = kdv_two_soliton_bianchi(cfg.lambda, cfg.lambda2, cfg.f0, cfg.f02).map_err(|e| e.to_string())?;
            let poles = ts.poles(cfg.t, -14.0, 14.0);
            let windows = ts.windows(cfg.t, -14.0, 14.0, 3.0, 1.5);
            let mut worst: f64 = 0.0;
            let mut csv = CsvWriter::new("x,u");
            for &(a, b) in &windows {
                let n = (((b - a) / 0.015).ceil() as usize).max(16);
                let grid = Grid1D::decaying(a, b, n).map_err(|e| e.to_string())?;
                for x in grid.xs() {
                    csv.row(&[fmt17(x), fmt17(ts.u(x, cfg.t))]);
                }
                let s = move |tt: f64| vec![ScalarField::from_real_fn(grid, |x| ts.u(x, tt))];
                worst = worst.max(
                    residual(EquationId::Kdv, &s, cfg.t, DerivScheme::Fd4, None).map_err(|e| e.to_string())?,
                );
            }
            csv.write(&dir.join("profile.csv"))?;
            let meta = serde_json::json!({
                "model": "kdv2", "lambda1": cfg.lambda, "lambda2": cfg.lambda2,
                "kdv_residual_off_masks": worst, "poles": poles, "windows": windows
            });
            write_text(&dir.join("meta.json"), &(serde_json::to_string_pretty(&meta).unwrap() + "\n"))
        }
        "shg" => {
            let spec = ShgSolitonSpec::new(cfg.shg_alpha, cfg.shg_a, cfg.shg_beta);
            let grid = Grid1D::decaying(-2.0, 3.0, 256).map_err(|e| e.to_string())?;
            let r = shg_bt_residual_vacuum(spec, cfg.t, grid).map_err(|e| e.to_string())?;
            let mut csv = CsvWriter::new("x,w");
            for x in grid.xs() {
                csv.row(&[fmt17(x), fmt17(spec.w(x, cfg.t).unwrap())]);
            }
            csv.write(&dir.join("profile.csv"))?;
            let meta = serde_json::json!({
                "model": "shg", "alpha": cfg.shg_alpha, "a": cfg.shg_a, "beta": cfg.shg_beta,
                "bt_residual": r
            });
            write_text(&dir.join("meta.json"), &(serde_json::to_string_pretty(&meta).unwrap() + "\n"))
        }
        "nls" => {
            let grid = Grid1D::decaying(-10.0, 10.0, 512).map_err(|e| e.to_string())?;
            let sol = nls_bt_soliton(cfg.k, cfg.nls_f0, grid).map_err(|e| e.to_string())?;
            let t = cfg.t;
            let mut csv = CsvWriter::new("x,u,uhat");
            for x in grid.xs() {
                csv.row(&[fmt17(x), fmt17(sol.u(x, t)), fmt17(sol.uhat(x, t))]);
            }
            csv.write(&dir.join("profile.csv"))?;
            let meta = serde_json::json!({
                "model": "nls", "k": sol.k, "f0": sol.f0, "mu": sol.mu, "f1": sol.f1,
                "residual": sol.residual, "masks": [sol.pole(t)]
            });
            write_text(&dir.join("meta.json"), &(serde_json::to_string_pretty(&meta).unwrap() + "\n"))
        }
        _ => unreachable!(),
    }
}
