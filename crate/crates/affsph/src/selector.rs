use std::f64::consts::PI;

use affine_spheres::families::{
    c_zero_surface, case1_cone, case1_conformal, case1_family, case1_isothermal_cone, conjugate, coth_surface,
    family_surface, general_surface, hildebrand_original, Case1Isothermal, Case1Raw, ConeEmbedding, CothWhich,
    FamilyConfig, ORIGINAL_CHART_H,
};
use affine_spheres::numerics::{Dual2, Jet2};
use affine_spheres::structure::TzitzeicaData;
use affine_spheres::surface::Surface;
use affine_spheres::Result;
use num_complex::Complex64;

use crate::config::Flags;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selector {
    Case1Raw,
    Case1Iso,
    Case1Family {
        t: f64,
    },
    General {
        p: f64,
        c: f64,
        s: f64,
    },
    Family {
        p: f64,
        c: f64,
        t: f64,
    },
    CZero {
        p: f64,
        s: f64,
    },
    Coth {
        p: f64,
        which: CothWhich,
    },
    OdeChart {
        p: f64,
        c: f64,
        s: f64,
    },
    /// Elliptic quadric, a sphere with H > 0; used as a negative control.
    Ellipsoid,
}

pub type Conformal = Box<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// A selected surface with its default chart window and the closed-form
/// data it is expected to reproduce.
pub struct Built {
    pub surface: Box<dyn Surface>,
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub expected_h: f64,
    pub conformal: Option<Conformal>,
    pub cubic: Option<Complex64>,
    /// Tzitzéica data and the family angle t of this member.
    pub data: Option<(TzitzeicaData, f64)>,
    pub cone: Option<ConeEmbedding>,
    /// Jets come from finite differences rather than exact derivatives.
    pub fd_jets: bool,
}

fn need(v: Option<f64>, name: &str, surface: &str) -> std::result::Result<f64, CliError> {
    v.ok_or_else(|| CliError::Config(format!("--{name} is required for surface {surface}")))
}

fn resolve_p(flags: &Flags, surface: &str) -> std::result::Result<f64, CliError> {
    match (flags.p, flags.q) {
        (Some(p), None) => Ok(p),
        (None, Some(q)) => {
            if q.is_nan() || q <= 1.0 {
                return Err(CliError::Config(format!("q must exceed 1, got {q}")));
            }
            Ok(q / (q - 1.0))
        }
        (Some(p), Some(q)) => {
            if (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
                return Err(CliError::Config(format!("p = {p} and q = {q} violate 1/p + 1/q = 1")));
            }
            Ok(p)
        }
        (None, None) => Err(CliError::Config(format!("--p is required for surface {surface}"))),
    }
}

fn parse_family(text: &str) -> std::result::Result<Flags, CliError> {
    let mut f = Flags::default();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--family expects key=value pairs, got {part:?}")))?;
        let v: f64 =
            v.trim().parse().map_err(|_| CliError::Config(format!("--family value for {k} is not a number: {v:?}")))?;
        let slot = match k.trim() {
            "p" => &mut f.p,
            "q" => &mut f.q,
            "c" => &mut f.c,
            "s" => &mut f.s,
            "t" => &mut f.t,
            other => return Err(CliError::Config(format!("--family has unknown key {other:?}"))),
        };
        *slot = Some(v);
    }
    Ok(f)
}

fn family_config(p: f64, c: f64, s: Option<f64>, t: Option<f64>) -> std::result::Result<(), CliError> {
    let q = conjugate(p)?;
    FamilyConfig { p, q, c, s, t }.validate()?;
    Ok(())
}

impl Selector {
    pub fn from_flags(flags: &Flags) -> std::result::Result<Option<Self>, CliError> {
        if let Some(text) = &flags.family {
            let fam = parse_family(text)?;
            let merged = Flags {
                p: fam.p.or(flags.p),
                q: fam.q.or(flags.q),
                c: fam.c.or(flags.c),
                s: fam.s.or(flags.s),
                t: fam.t.or(flags.t),
                ..Flags::default()
            };
            let name = if merged.t.is_some() { "family" } else { "general" };
            return Self::named(name, &merged).map(Some);
        }
        match &flags.surface {
            Some(name) => Self::named(name, flags).map(Some),
            None => Ok(None),
        }
    }

    pub fn named(name: &str, flags: &Flags) -> std::result::Result<Self, CliError> {
        let sel = match name {
            "case1-raw" => Selector::Case1Raw,
            "case1" | "case1-iso" => Selector::Case1Iso,
            "case1-family" => {
                let t = need(flags.t, "t", name)?;
                if !t.is_finite() {
                    return Err(CliError::Config(format!("t must be finite, got {t}")));
                }
                Selector::Case1Family { t }
            }
            "general" => {
                let p = resolve_p(flags, name)?;
                let c = need(flags.c, "c", name)?;
                let s = need(flags.s, "s", name)?;
                family_config(p, c, Some(s), None)?;
                if c == 0.0 {
                    return Err(CliError::Config("c = 0 has its own surface; use --surface c-zero".into()));
                }
                Selector::General { p, c, s }
            }
            "family" => {
                let p = resolve_p(flags, name)?;
                let c = need(flags.c, "c", name)?;
                let t = need(flags.t, "t", name)?;
                family_config(p, c, flags.s, Some(t))?;
                Selector::Family { p, c, t }
            }
            "c-zero" => {
                let p = resolve_p(flags, name)?;
                let s = flags.s.unwrap_or(1.0);
                family_config(p, 0.0, Some(s), None)?;
                Selector::CZero { p, s }
            }
            "case5" | "case3" => {
                let p = resolve_p(flags, name)?;
                conjugate(p)?;
                let which = if name == "case5" { CothWhich::Case5 } else { CothWhich::Case3 };
                Selector::Coth { p, which }
            }
            "ode-chart" => {
                let p = resolve_p(flags, name)?;
                let c = need(flags.c, "c", name)?;
                let s = flags.s.unwrap_or(1.0);
                family_config(p, c, Some(s), None)?;
                Selector::OdeChart { p, c, s }
            }
            "ellipsoid" => Selector::Ellipsoid,
            other => return Err(CliError::Config(format!("unknown surface {other:?}"))),
        };
        Ok(sel)
    }

    pub fn label(&self) -> String {
        match self {
            Selector::Case1Raw => "case1-raw".into(),
            Selector::Case1Iso => "case1".into(),
            Selector::Case1Family { t } => format!("case1-family(t={t})"),
            Selector::General { p, c, s } => format!("general(p={p},c={c},s={s})"),
            Selector::Family { p, c, t } => format!("family(p={p},c={c},t={t})"),
            Selector::CZero { p, s } => format!("c-zero(p={p},s={s})"),
            Selector::Coth { p, which } => format!("{which:?}(p={p})").to_lowercase(),
            Selector::OdeChart { p, c, s } => format!("ode-chart(p={p},c={c},s={s})"),
            Selector::Ellipsoid => "ellipsoid".into(),
        }
    }

    pub fn build(&self) -> Result<Built> {
        let inset = |(a, b): (f64, f64), k: f64| (a + k * (b - a), b - k * (b - a));
        let built = match *self {
            Selector::Case1Raw => Built {
                surface: Box::new(Case1Raw),
                x: (0.5, 2.0),
                y: (0.5, 2.0),
                expected_h: ORIGINAL_CHART_H,
                conformal: None,
                cubic: None,
                data: None,
                cone: Some(case1_cone()),
                fd_jets: false,
            },
            Selector::Case1Iso => Built {
                surface: Box::new(Case1Isothermal),
                x: (0.3, 1.5),
                y: (-1.0, 1.0),
                expected_h: -1.0,
                conformal: Some(Box::new(|u| Ok(case1_conformal(u)))),
                cubic: Some(Complex64::new(0.0, 1.0)),
                data: Some((TzitzeicaData::case1(), PI / 6.0)),
                cone: Some(case1_isothermal_cone()),
                fd_jets: false,
            },
            Selector::Case1Family { t } => Built {
                surface: Box::new(case1_family(t)?),
                x: (0.3, 1.5),
                y: (-1.0, 1.0),
                expected_h: -1.0,
                conformal: Some(Box::new(|u| Ok(case1_conformal(u)))),
                cubic: Some(Complex64::from_polar(1.0, 3.0 * t)),
                data: Some((TzitzeicaData::case1(), t)),
                cone: None,
                fd_jets: false,
            },
            Selector::General { p, c, s } => {
                let surf = general_surface(p, c, s)?;
                let range = surf.xi2_range();
                let x = if range.0.is_finite() { inset(range, 0.1) } else { (-1.5, -0.2) };
                let metric = surf.clone();
                Built {
                    x,
                    y: (-1.0, 1.0),
                    expected_h: -1.0,
                    cubic: Some(surf.cubic_coefficient()),
                    data: Some((TzitzeicaData::weierstrass(p, c)?, surf.base_angle())),
                    cone: Some(surf.cone()?),
                    fd_jets: false,
                    conformal: Some(Box::new(move |u| metric.expected_conformal(u))),
                    surface: Box::new(surf),
                }
            }
            Selector::Family { p, c, t } => {
                let fam = family_surface(p, c, t)?;
                let metric = general_surface(p, c, 1.0)?;
                let range = metric.xi2_range();
                let x = if range.0.is_finite() { inset(range, 0.1) } else { (-1.5, -0.2) };
                Built {
                    x,
                    y: (-1.0, 1.0),
                    expected_h: -1.0,
                    cubic: Some(fam.expected_cubic()),
                    data: Some((TzitzeicaData::weierstrass(p, c)?, t)),
                    cone: None,
                    fd_jets: false,
                    conformal: Some(Box::new(move |u| metric.expected_conformal(u))),
                    surface: Box::new(fam),
                }
            }
            Selector::CZero { p, s } => {
                let surf = c_zero_surface(p, s)?;
                let metric = surf.clone();
                Built {
                    x: inset(surf.xi2_range(), 0.1),
                    y: (-1.0, 1.0),
                    expected_h: -1.0,
                    cubic: Some(surf.cubic_coefficient()),
                    data: Some((TzitzeicaData::weierstrass(p, 0.0)?, surf.cubic_coefficient().arg() / 3.0)),
                    cone: Some(surf.cone()),
                    fd_jets: false,
                    conformal: Some(Box::new(move |u| metric.expected_conformal(u))),
                    surface: Box::new(surf),
                }
            }
            Selector::Coth { p, which } => {
                let surf = coth_surface(p, which)?;
                let metric = surf;
                Built {
                    x: (-1.5, -0.2),
                    y: (-1.0, 1.0),
                    expected_h: -1.0,
                    cubic: Some(surf.cubic_coefficient()),
                    data: Some((TzitzeicaData::coth(p)?, surf.cubic_coefficient().arg() / 3.0)),
                    cone: Some(surf.cone()),
                    fd_jets: false,
                    conformal: Some(Box::new(move |u| Ok(metric.expected_conformal(u)))),
                    surface: Box::new(surf),
                }
            }
            Selector::OdeChart { p, c, s } => {
                let h = hildebrand_original(p, c, s)?;
                let iv = h.interval;
                let x = if iv.hi.is_finite() { inset((iv.lo, iv.hi), 0.1) } else { (iv.lo + 0.2, iv.lo + 3.0) };
                Built {
                    x,
                    y: (-1.0, 1.0),
                    expected_h: ORIGINAL_CHART_H,
                    conformal: None,
                    cubic: None,
                    data: None,
                    cone: Some(h.cone()),
                    fd_jets: true,
                    surface: Box::new(h),
                }
            }
            Selector::Ellipsoid => Built {
                surface: Box::new(ellipsoid),
                x: (-0.5, 0.5),
                y: (-0.5, 0.5),
                expected_h: -1.0,
                conformal: None,
                cubic: None,
                data: None,
                cone: None,
                fd_jets: false,
            },
        };
        Ok(built)
    }
}

/// (2 cos x cos y, sin x cos y, ½ sin y).
fn ellipsoid(x: f64, y: f64) -> Result<Jet2> {
    let (dx, dy) = (Dual2::var_x(x), Dual2::var_y(y));
    let cy = dy.cos();
    Jet2::from_components(&[dx.cos() * cy * 2.0, dx.sin() * cy, dy.sin() * 0.5], (x, y))
}
