use std::f64::consts::PI;

use affine_spheres::blaschke::invariants_isothermal;
use affine_spheres::surface::Grid;
use affine_spheres::Error;
use rayon::prelude::*;

use crate::config::{Flags, Format};
use crate::error::CliError;
use crate::output::{json_num, json_str, num, write_output};
use crate::selector::Selector;

#[derive(Debug, Clone, Copy, PartialEq)]
enum FamilyKind {
    Case1,
    Elliptic { p: f64, c: f64 },
}

impl FamilyKind {
    fn member(&self, t: f64) -> Selector {
        match *self {
            FamilyKind::Case1 => Selector::Case1Family { t },
            FamilyKind::Elliptic { p, c } => Selector::Family { p, c, t },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub t: f64,
    pub h_defect: f64,
    pub conformal_drift: f64,
    pub arg_defect: f64,
    pub flag: Option<String>,
    conformal: Vec<f64>,
}

fn family_kind(flags: &Flags) -> Result<FamilyKind, CliError> {
    match flags.surface.as_deref() {
        Some("case1" | "case1-iso" | "case1-family") => return Ok(FamilyKind::Case1),
        Some("family" | "general") | None if flags.family.is_some() || flags.surface.is_some() => {}
        Some(other) => return Err(CliError::Config(format!("sweep needs a family, got surface {other:?}"))),
        None => return Err(CliError::Config("sweep needs --surface case1, --surface family or --family".into())),
    }
    let probe = Flags { surface: Some("family".into()), t: Some(0.1), s: None, ..flags.clone() };
    match Selector::from_flags(&probe)? {
        Some(Selector::Family { p, c, .. }) => Ok(FamilyKind::Elliptic { p, c }),
        _ => Err(CliError::Config("sweep needs p and c for the family".into())),
    }
}

fn angles(flags: &Flags) -> Result<Vec<f64>, CliError> {
    let top = 2.0 * PI / 3.0;
    let ts = match flags.t {
        Some(t) => vec![t],
        None => {
            let n = flags.tcount.unwrap_or(12);
            if n == 0 {
                return Err(CliError::Config("--tcount must be positive".into()));
            }
            (0..n).map(|k| top * k as f64 / n as f64).collect()
        }
    };
    if let Some(t) = ts.iter().find(|t| !(0.0..top).contains(*t)) {
        return Err(CliError::Config(format!("t must lie in [0, 2pi/3), got {t}")));
    }
    Ok(ts)
}

fn wrap(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

fn row(kind: FamilyKind, t: f64, flags: &Flags) -> Result<Row, CliError> {
    let flagged = |flag: &str| Row {
        t,
        h_defect: f64::NAN,
        conformal_drift: f64::NAN,
        arg_defect: f64::NAN,
        flag: Some(flag.into()),
        conformal: Vec::new(),
    };
    let built = match kind.member(t).build() {
        Ok(b) => b,
        Err(Error::BranchAmbiguity { .. }) => return Ok(flagged("guard_band")),
        Err(Error::SingularGauge { .. }) => return Ok(flagged("singular_gauge")),
        Err(e) => return Err(e.into()),
    };
    let (nx, ny) = flags.grid()?.unwrap_or((4, 4));
    let grid = Grid::new(flags.xrange()?.unwrap_or(built.x), flags.yrange()?.unwrap_or(built.y), nx, ny)?;
    let mut out = Row { t, h_defect: 0.0, conformal_drift: 0.0, arg_defect: 0.0, flag: None, conformal: Vec::new() };
    for (x, y) in grid.points() {
        let inv = invariants_isothermal(&built.surface.jet(x, y)?)?;
        out.h_defect = out.h_defect.max((inv.h + 1.0).abs());
        out.arg_defect = out.arg_defect.max(wrap(inv.u.arg() - 3.0 * t).abs());
        out.conformal.push(inv.conformal);
    }
    Ok(out)
}

/// One row per angle: max |H + 1|, the largest relative change of e^ψ
/// against the first unflagged angle, and the largest |arg U − 3t|.
pub fn sweep_rows(flags: &Flags) -> Result<Vec<Row>, CliError> {
    let kind = family_kind(flags)?;
    let ts = angles(flags)?;
    let mut rows = ts.par_iter().map(|&t| row(kind, t, flags)).collect::<Result<Vec<_>, _>>()?;
    if let Some(reference) = rows.iter().find(|r| r.flag.is_none()).map(|r| r.conformal.clone()) {
        for r in rows.iter_mut().filter(|r| r.flag.is_none()) {
            r.conformal_drift = r.conformal.iter().zip(&reference).map(|(a, b)| (a - b).abs() / b).fold(0.0, f64::max);
        }
    }
    Ok(rows)
}

pub fn cmd_sweep(flags: &Flags) -> Result<(), CliError> {
    let rows = sweep_rows(flags)?;
    let text = match flags.format.unwrap_or(Format::Csv) {
        Format::Csv | Format::Obj => {
            let mut s = String::from("t,max_abs_h_plus_1,max_conformal_drift,arg_u_defect,flag\n");
            for r in &rows {
                s += &format!(
                    "{},{},{},{},{}\n",
                    num(r.t),
                    num(r.h_defect),
                    num(r.conformal_drift),
                    num(r.arg_defect),
                    r.flag.as_deref().unwrap_or("")
                );
            }
            s
        }
        Format::Json => {
            let items: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "  {{\"t\":{},\"max_abs_h_plus_1\":{},\"max_conformal_drift\":{},\"arg_u_defect\":{},\"flag\":{}}}",
                        json_num(r.t),
                        json_num(r.h_defect),
                        json_num(r.conformal_drift),
                        json_num(r.arg_defect),
                        r.flag.as_deref().map_or("null".into(), json_str)
                    )
                })
                .collect();
            format!("[\n{}\n]\n", items.join(",\n"))
        }
    };
    write_output(flags.out.as_deref(), &text)?;
    Ok(())
}
