use std::path::Path;
use std::str::FromStr;

use solitonlab::laxpairs::{builtin_lax, zero_curvature_residual_reduced, Model};

use crate::output::write_text;

#[derive(clap::Args, Clone)]
pub struct Args {
    /// nls | sinh_gordon | liouville | free | akns
    #[arg(long)]
    model: String,
}

pub fn run(args: Args, dry_run: bool, dir: &Path) -> Result<bool, String> {
    let model = Model::from_str(&args.model).map_err(|e| e.to_string())?;
    if dry_run {
        println!("config ok");
        return Ok(true);
    }
    let pair = builtin_lax(model);
    let reduced = zero_curvature_residual_reduced(&pair);
    let ok = reduced.is_zero();
    let mut text = String::new();
    text.push_str(&format!("model: {}\n", pair.name));
    text.push_str(&format!(
        "zero-curvature residual (reduced modulo eom): {}\n",
        if ok { "0".to_string() } else { reduced.render(&pair.alphabet, "z") }
    ));
    text.push_str("equations of motion:\n");
    for rule in &pair.eom {
        let name = pair.alphabet.name(rule.field);
        let lhs = match rule.t_order {
            1 => format!("{name}[t]"),
            2 => format!("{name}[tt]"),
            k => format!("d^{k}/dt^{k} {name}"),
        };
        text.push_str(&format!("  {lhs} = {}\n", rule.rhs.render(&pair.alphabet)));
    }
    print!("{text}");
    write_text(&dir.join("laxcheck.txt"), &text)?;
    Ok(ok)
}
