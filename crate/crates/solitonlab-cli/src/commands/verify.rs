use std::path::Path;
use std::str::FromStr;

use solitonlab::verify::{render_report, run_suite, Suite};

use crate::output::write_text;

#[derive(clap::Args, Clone)]
pub struct Args {
    /// all | charges | lattice | pde | solitons | glm | lax
    #[arg(long, default_value = "all")]
    suite: String,
}

pub fn run(args: Args, dry_run: bool, dir: &Path) -> Result<bool, String> {
    let suite = Suite::from_str(&args.suite)?;
    if dry_run {
        println!("config ok");
        return Ok(true);
    }
    let criteria = run_suite(suite);
    let report = render_report(&criteria);
    print!("{report}");
    write_text(&dir.join("report.txt"), &report)?;
    Ok(criteria.iter().all(|c| c.passed()))
}
