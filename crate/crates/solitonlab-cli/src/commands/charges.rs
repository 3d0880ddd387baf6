use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use solitonlab::charges::{akns_wz, gardner_densities, integrate_density, riccati_gamma, uhat_field, AknsReduction, DensitySequence};
use solitonlab::diffpoly::FieldBinding;
use solitonlab::grid::{DerivScheme, Grid1D, ScalarField};

use crate::config;
use crate::output::{fmt17, write_config, write_text, CsvWriter};

#[derive(clap::Args, Clone)]
pub struct Args {
    /// gardner | gamma | akns
    #[arg(long)]
    scheme: Option<String>,
    /// highest density index
    #[arg(long)]
    n_max: Option<usize>,
    /// conjugate | equal | independent (û relation for numeric charges)
    #[arg(long)]
    reduction: Option<String>,
    /// sech amplitude of the evaluation profile
    #[arg(long)]
    amplitude: Option<f64>,
    /// sech width of the evaluation profile
    #[arg(long)]
    width: Option<f64>,
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub scheme: String,
    pub n_max: usize,
    pub reduction: String,
    pub amplitude: f64,
    pub width: f64,
    pub length: f64,
    pub points: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            scheme: "gardner".into(),
            n_max: 5,
            reduction: "conjugate".into(),
            amplitude: 1.0,
            width: 0.9,
            length: 30.0,
            points: 1201,
        }
    }
}

fn effective(args: &Args, file: Option<&Path>) -> Result<Config, String> {
    let mut cfg: Config = config::load(file)?;
    if let Some(v) = &args.scheme {
        cfg.scheme = v.clone();
    }
    if let Some(v) = args.n_max {
        cfg.n_max = v;
    }
    if let Some(v) = &args.reduction {
        cfg.reduction = v.clone();
    }
    if let Some(v) = args.amplitude {
        cfg.amplitude = v;
    }
    if let Some(v) = args.width {
        cfg.width = v;
    }
    match cfg.scheme.as_str() {
        "gardner" | "gamma" | "akns" => {}
        other => return Err(format!("unknown scheme `{other}`")),
    }
    match cfg.reduction.as_str() {
        "conjugate" | "equal" | "independent" => {}
        other => return Err(format!("unknown reduction `{other}`")),
    }
    if cfg.n_max == 0 || cfg.n_max > 10 {
        return Err("n_max must be in 1..=10".into());
    }
    Ok(cfg)
}

pub fn run(args: Args, file: Option<&Path>, dry_run: bool, dir: &Path) -> Result<(), String> {
    let cfg = effective(&args, file)?;
    if dry_run {
        println!("config ok");
        return Ok(());
    }
    write_config(dir, &cfg)?;
    let seq: DensitySequence = match cfg.scheme.as_str() {
        "gardner" => gardner_densities(cfg.n_max),
        "gamma" => riccati_gamma(cfg.n_max),
        "akns" => akns_wz(cfg.n_max).z_integrands,
        _ => unreachable!(),
    };
    // densities in canonical ASCII
    let mut text = String::new();
    for n in seq.indices() {
        text.push_str(&format!("{}[{}] = {}\n", cfg.scheme, n, seq.density(n).render(&seq.alphabet)));
    }
    print!("{text}");
    write_text(&dir.join("densities.txt"), &text)?;

    // numeric charges on a sech profile
    let grid = Grid1D::decaying(-cfg.length, cfg.length, cfg.points).map_err(|e| e.to_string())?;
    let amp = cfg.amplitude;
    let wid = cfg.width;
    let u_field = ScalarField::from_fn(grid, |x| Complex64::new(amp, 0.15 * amp) / (wid * x).cosh());
    let mut binding = FieldBinding::new();
    let u = seq.alphabet.id("u").unwrap();
    binding.bind(u, u_field.clone());
    if let Some(uh) = seq.alphabet.id("uh") {
        let reduction = match cfg.reduction.as_str() {
            "conjugate" => AknsReduction::Conjugate,
            "equal" => AknsReduction::Equal,
            _ => AknsReduction::Independent,
        };
        let independent = ScalarField::from_real_fn(grid, |x| 0.7 * amp / (0.8 * wid * x).cosh());
        binding.bind(uh, uhat_field(&u_field, reduction, Some(&independent)));
    }
    let mut csv = CsvWriter::new("n,value_re,value_im");
    for n in seq.indices() {
        let val = integrate_density(seq.density(n), &seq.alphabet, &binding, DerivScheme::Fd4)
            .map_err(|e| e.to_string())?;
        csv.row(&[n.to_string(), fmt17(val.re), fmt17(val.im)]);
    }
    csv.write(&dir.join("charges.csv"))
}
