mod config;
mod error;
mod output;
mod selector;
mod sweep;
mod verify;

use std::process::ExitCode;

use affine_spheres::families::{cone_mesh, modulus_k2, modulus_match, ConeSpec, Mesh};
use affine_spheres::surface::Grid;
use clap::Parser;
use rayon::prelude::*;

use config::{Cli, Command, Flags, Format};
use error::CliError;
use output::{mesh_csv, mesh_json, mesh_obj, num, write_output};
use selector::Selector;

const THREADS_VAR: &str = "AFFSPH_THREADS";

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("affsph: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(text) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_VAR} must be a positive integer, got {text:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot start {n} threads: {e}")))
}

fn run(command: &Command) -> Result<(), CliError> {
    configure_threads()?;
    let flags = command.flags().resolve()?;
    match command {
        Command::Mesh(_) => cmd_mesh(&flags),
        Command::Verify(_) => cmd_verify(&flags),
        Command::Sweep(_) => sweep::cmd_sweep(&flags),
        Command::MatchModulus(_) => cmd_match_modulus(&flags),
    }
}

fn cmd_mesh(flags: &Flags) -> Result<(), CliError> {
    let grid = flags.grid()?;
    let mesh = if let Some(case_id) = flags.cone {
        if flags.surface.is_some() || flags.family.is_some() {
            return Err(CliError::Config("--cone cannot be combined with --surface or --family".into()));
        }
        let p = match (case_id, flags.p) {
            (3..=5, None) => return Err(CliError::Config(format!("--p is required for cone {case_id}"))),
            (_, p) => p.unwrap_or(2.0),
        };
        let spec = ConeSpec::new(case_id, p, flags.alpha.unwrap_or(1.0))?;
        cone_mesh(&spec, grid.map_or(32, |g| g.0))?
    } else {
        let sel = Selector::from_flags(flags)?
            .ok_or_else(|| CliError::Config("mesh needs --surface, --family or --cone".into()))?;
        let built = sel.build()?;
        let (nx, ny) = grid.unwrap_or((32, 32));
        let g = Grid::new(flags.xrange()?.unwrap_or(built.x), flags.yrange()?.unwrap_or(built.y), nx, ny)?;
        let vertices = g
            .points()
            .par_iter()
            .map(|&(x, y)| built.surface.position(x, y))
            .collect::<affine_spheres::Result<Vec<_>>>()?;
        Mesh::from_grid(vertices, nx, ny)
    };
    let text = match flags.format.unwrap_or(Format::Obj) {
        Format::Obj => mesh_obj(&mesh),
        Format::Csv => mesh_csv(&mesh),
        Format::Json => mesh_json(&mesh),
    };
    write_output(flags.out.as_deref(), &text)?;
    Ok(())
}

fn cmd_verify(flags: &Flags) -> Result<(), CliError> {
    let tol = flags.tol()?;
    if let Some(name) = &flags.only {
        if !verify::CHECK_NAMES.contains(&name.as_str()) {
            return Err(CliError::Config(format!(
                "unknown check {name:?}; known checks: {}",
                verify::CHECK_NAMES.join(", ")
            )));
        }
    }
    let surface = Selector::from_flags(flags)?;
    let results = verify::run_suite(flags.only.as_deref(), surface, tol);
    for (r, err) in &results {
        if let Some(e) = err {
            eprintln!("affsph: check {} errored: {e}", r.name);
        }
    }
    let records: Vec<_> = results.into_iter().map(|(r, _)| r).collect();
    if records.is_empty() {
        return Err(CliError::Config("no check applies to the selected surface".into()));
    }
    let text = match flags.format.unwrap_or(Format::Json) {
        Format::Json => verify::report_json(&records),
        Format::Csv => verify::report_csv(&records),
        Format::Obj => return Err(CliError::Config("verify reports are json or csv".into())),
    };
    write_output(flags.out.as_deref(), &text)?;
    let failed = records.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(CliError::ChecksFailed { failed, total: records.len() });
    }
    Ok(())
}

fn cmd_match_modulus(flags: &Flags) -> Result<(), CliError> {
    let need = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::Config(format!("--{name} is required")));
    let (p1, c1, p) = (need(flags.p1, "p1")?, need(flags.c1, "c1")?, need(flags.p, "p")?);
    let c = modulus_match(p1, c1, p)?;
    let k2 = modulus_k2(p, c)?;
    let text = match flags.format.unwrap_or(Format::Csv) {
        Format::Json => format!("{{\"c\":{},\"k2\":{}}}\n", num(c), num(k2)),
        _ => format!("c,k2\n{},{}\n", num(c), num(k2)),
    };
    write_output(flags.out.as_deref(), &text)?;
    Ok(())
}
