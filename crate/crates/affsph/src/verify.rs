use affine_spheres::blaschke::{fundamental_dets, invariants_isothermal, isothermal_defect, verify_affine_sphere};
use affine_spheres::elliptic::{EllipticContext, Lattice};
use affine_spheres::families::{
    c_zero_surface, case1_pushforward, case1_raw, conjugate, equivalence_theorem33_to_31, f_functions, family_surface,
    general_surface, modulus_match, ode_residual, shorthand_coeffs, CothWhich,
};
use affine_spheres::structure::{
    reconstruct_family, tzitzeica_residual, zero_curvature_residual, FrameState, TzitzeicaData,
};
use affine_spheres::surface::{Grid, Surface};
use affine_spheres::Result;
use num_complex::Complex64;

use crate::output::{json_num, json_str, num};
use crate::selector::{Built, Selector};

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub name: &'static str,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sense {
    /// Passes when the residual is at most the tolerance.
    Below,
    /// Negative control: passes when the residual exceeds the tolerance.
    Above,
}

enum Body {
    Fixed(fn() -> Result<f64>),
    /// Evaluated on each selected surface; the worst value is reported.
    /// `None` means the check does not apply to that surface.
    PerSurface(fn(&Built) -> Result<Option<f64>>, fn() -> Vec<Selector>),
}

struct Check {
    name: &'static str,
    tol: f64,
    sense: Sense,
    body: Body,
}

pub const CHECK_NAMES: [&str; 22] = [
    "elliptic_ode",
    "elliptic_sn",
    "case1_determinants",
    "isothermal_chart",
    "affine_sphere",
    "fd_affine_sphere",
    "conformal_factor",
    "cubic_form",
    "cone_containment",
    "family_root_sum",
    "family_base_angle",
    "c_zero_limit",
    "coth_equivalence",
    "cone_ode",
    "tzitzeica",
    "zero_curvature",
    "frame_reconstruction",
    "frame_determinant",
    "path_independence",
    "modulus_match",
    "negative_control_ellipsoid",
    "negative_control_perturbed_psi",
];

fn checks() -> Vec<Check> {
    use Body::*;
    use Sense::*;
    let c = |name, tol, sense, body| Check { name, tol, sense, body };
    vec![
        c("elliptic_ode", 1e-10, Below, Fixed(elliptic_ode)),
        c("elliptic_sn", 1e-9, Below, Fixed(elliptic_sn)),
        c("case1_determinants", 1e-8, Below, Fixed(case1_determinants)),
        c("isothermal_chart", 1e-8, Below, Fixed(isothermal_chart)),
        c("affine_sphere", 1e-6, Below, PerSurface(affine_sphere, sphere_selectors)),
        c("fd_affine_sphere", 1e-5, Below, PerSurface(fd_sphere, sphere_selectors)),
        c("conformal_factor", 1e-6, Below, PerSurface(conformal_factor, sphere_selectors)),
        c("cubic_form", 1e-6, Below, PerSurface(cubic_form, sphere_selectors)),
        c("cone_containment", 1e-9, Below, PerSurface(cone_containment, sphere_selectors)),
        c("family_root_sum", 1e-12, Below, Fixed(family_root_sum)),
        c("family_base_angle", 1e-6, Below, Fixed(family_base_angle)),
        c("c_zero_limit", 1e-3, Below, Fixed(c_zero_limit)),
        c("coth_equivalence", 1e-8, Below, Fixed(coth_equivalence)),
        c("cone_ode", 1e-7, Below, Fixed(cone_ode)),
        c("tzitzeica", 1e-8, Below, PerSurface(tzitzeica, sphere_selectors)),
        c("zero_curvature", 1e-7, Below, PerSurface(zero_curvature, sphere_selectors)),
        c("frame_reconstruction", 1e-5, Below, PerSurface(frame_reconstruction, frame_selectors)),
        c("frame_determinant", 1e-7, Below, PerSurface(frame_determinant, frame_selectors)),
        c("path_independence", 1e-6, Below, PerSurface(path_independence, frame_selectors)),
        c("modulus_match", 1e-2, Below, Fixed(modulus_check)),
        c("negative_control_ellipsoid", 0.1, Above, Fixed(negative_ellipsoid)),
        c("negative_control_perturbed_psi", 1e-4, Above, Fixed(negative_psi)),
    ]
}

fn sphere_selectors() -> Vec<Selector> {
    vec![
        Selector::Case1Raw,
        Selector::Case1Iso,
        Selector::Case1Family { t: 0.3 },
        Selector::General { p: 3.0, c: -1.0, s: 1.0 },
        Selector::General { p: 3.0, c: -1.0, s: -1.0 },
        Selector::General { p: 2.0, c: -0.5, s: 1.0 },
        Selector::General { p: 5.0, c: -3.0, s: -1.0 },
        Selector::Family { p: 3.0, c: -1.0, t: 0.3 },
        Selector::CZero { p: 3.0, s: 1.0 },
        Selector::CZero { p: 2.5, s: -1.0 },
        Selector::Coth { p: 3.0, which: CothWhich::Case5 },
        Selector::Coth { p: 3.0, which: CothWhich::Case3 },
        Selector::OdeChart { p: 3.0, c: -2.0, s: 1.0 },
        Selector::OdeChart { p: 3.0, c: -9.0, s: 1.0 },
        Selector::OdeChart { p: 3.0, c: -9.0, s: -1.0 },
    ]
}

fn frame_selectors() -> Vec<Selector> {
    vec![
        Selector::Case1Family { t: 0.3 },
        Selector::General { p: 3.0, c: -1.0, s: 1.0 },
        Selector::Family { p: 3.0, c: -1.0, t: 0.3 },
        Selector::Coth { p: 3.0, which: CothWhich::Case3 },
    ]
}

fn grid_on(b: &Built, n: usize) -> Result<Grid> {
    Grid::new(b.x, b.y, n, n)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn contexts() -> Result<Vec<EllipticContext>> {
    let mut out = Vec::new();
    for p in [2.0, 2.5, 3.0, 5.0] {
        let q = conjugate(p)?;
        for c in [0.0, -1.0, -(p + q), -2.0 * (p + q)] {
            out.push(shorthand_coeffs(p, q, c)?.ctx);
        }
    }
    Ok(out)
}

fn real_samples(ctx: &EllipticContext, n: usize) -> Vec<f64> {
    let span = if ctx.omega1.is_finite() { 2.0 * ctx.omega1 } else { 6.0 };
    (0..n).map(|k| span * (0.02 + 0.96 * k as f64 / (n - 1) as f64)).collect()
}

fn elliptic_ode() -> Result<f64> {
    let mut worst = 0.0f64;
    for ctx in contexts()? {
        let mut pts: Vec<Complex64> = real_samples(&ctx, 40).into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        if let Lattice::Rectangular { omega3_im, .. } = ctx.lattice {
            pts.extend(real_samples(&ctx, 20).into_iter().map(|x| Complex64::new(x, 0.37 * omega3_im)));
        }
        for z in pts {
            let w = ctx.wp_eval(z)?;
            let rhs = 4.0 * w.wp * w.wp * w.wp - ctx.g2 * w.wp - ctx.g3;
            let scale = 1.0 + w.wp_prime.norm_sqr() + (4.0 * w.wp * w.wp * w.wp).norm();
            worst = worst.max((w.wp_prime * w.wp_prime - rhs).norm() / scale);
        }
    }
    Ok(worst)
}

fn elliptic_sn() -> Result<f64> {
    let mut worst = 0.0f64;
    for ctx in contexts()? {
        for x in real_samples(&ctx, 40) {
            let wp = ctx.wp(Complex64::new(x, 0.0))?.re;
            worst = worst.max((wp - ctx.wp_via_sn(x)).abs() / (1.0 + wp.abs()));
        }
    }
    Ok(worst)
}

fn case1_determinants() -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            let (x, y) = (0.3 + 0.25 * i as f64, 0.4 + 0.2 * j as f64);
            let (l, m, n) = fundamental_dets(&case1_raw(x, y)?)?;
            let k = (2.0 * x + 3.0).powi(2);
            let l0 = (4.0 * x + 3.0) * k / (8.0 * x.powf(4.5) * y * (1.0 + x).powf(1.5));
            let m0 = 0.75 * k / (x.powf(3.5) * y * y * (1.0 + x).sqrt());
            let n0 = 1.5 * k / (x.powf(2.5) * y.powi(3) * (1.0 + x).sqrt());
            worst = worst.max(rel(l, l0)).max(rel(m, m0)).max(rel(n, n0));
        }
    }
    Ok(worst)
}

fn isothermal_chart() -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            let (u, v) = (0.3 + 0.12 * i as f64, -1.0 + 0.2 * j as f64);
            let (l, m, n) = fundamental_dets(&case1_pushforward(u, v)?)?;
            worst = worst.max(isothermal_defect(l, m, n));
        }
    }
    Ok(worst)
}

fn affine_sphere(b: &Built) -> Result<Option<f64>> {
    if b.fd_jets {
        return Ok(None);
    }
    Ok(Some(verify_affine_sphere(&*b.surface, &grid_on(b, 6)?, b.expected_h)?.max_defect()))
}

fn fd_sphere(b: &Built) -> Result<Option<f64>> {
    if !b.fd_jets {
        return Ok(None);
    }
    Ok(Some(verify_affine_sphere(&*b.surface, &grid_on(b, 6)?, b.expected_h)?.max_defect()))
}

fn conformal_factor(b: &Built) -> Result<Option<f64>> {
    let Some(expected) = &b.conformal else {
        return Ok(None);
    };
    let mut worst = 0.0f64;
    for (x, y) in grid_on(b, 6)?.points() {
        let inv = invariants_isothermal(&b.surface.jet(x, y)?)?;
        worst = worst.max(rel(inv.conformal, expected(x)?));
    }
    Ok(Some(worst))
}

fn cubic_form(b: &Built) -> Result<Option<f64>> {
    let Some(u) = b.cubic else { return Ok(None) };
    let mut worst = 0.0f64;
    for (x, y) in grid_on(b, 6)?.points() {
        let inv = invariants_isothermal(&b.surface.jet(x, y)?)?;
        worst = worst.max((inv.u - u).norm() / u.norm());
    }
    Ok(Some(worst))
}

fn cone_containment(b: &Built) -> Result<Option<f64>> {
    let Some(cone) = &b.cone else { return Ok(None) };
    let mut worst = 0.0f64;
    for (x, y) in grid_on(b, 8)?.points() {
        worst = worst.max(-cone.boundary_distance(&b.surface.position(x, y)?));
    }
    Ok(Some(worst))
}

fn family_root_sum() -> Result<f64> {
    let mut worst = 0.0f64;
    for (p, c) in [(3.0, -1.0), (2.0, -0.5), (5.0, -4.0)] {
        let u = general_surface(p, c, 1.0)?.cubic_coefficient().norm();
        for k in 0..100 {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 300.0;
            let f = f_functions(p, u, t);
            worst = worst.max((f[0] + f[1] + f[2]).abs());
        }
    }
    Ok(worst)
}

fn max_rel_distance<A: Surface + ?Sized, B: Surface + ?Sized>(a: &A, b: &B, pts: &[(f64, f64)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(x, y) in pts {
        let (u, v) = (a.position(x, y)?, b.position(x, y)?);
        worst = worst.max((u - v).norm() / v.norm());
    }
    Ok(worst)
}

fn family_base_angle() -> Result<f64> {
    let pts = [(-0.3, 0.2), (0.1, -0.4), (0.35, 0.6)];
    let mut worst = 0.0f64;
    for (p, c) in [(3.0, -1.0), (2.0, -0.5), (5.0, -3.0)] {
        for s in [1.0, -1.0] {
            let g = general_surface(p, c, s)?;
            let f = family_surface(p, c, g.base_angle())?;
            worst = worst.max(max_rel_distance(&f, &g, &pts)?);
        }
    }
    Ok(worst)
}

fn c_zero_limit() -> Result<f64> {
    let pts = [(-0.8, 0.2), (-0.3, -0.5), (-0.1, 0.9)];
    let mut worst = 0.0f64;
    for s in [1.0, -1.0] {
        let g = general_surface(3.0, -1e-6, s)?;
        let f = family_surface(3.0, -1e-6, g.base_angle())?;
        worst = worst.max(max_rel_distance(&f, &c_zero_surface(3.0, s)?, &pts)?);
    }
    Ok(worst)
}

fn coth_equivalence() -> Result<f64> {
    let mut worst = 0.0f64;
    for (p, t) in [(3.0, 0.2), (2.0, 1.3)] {
        for i in 0..8 {
            for j in 0..8 {
                let (x, y) = (0.4 + 0.15 * i as f64, -0.8 + 0.2 * j as f64);
                let (a, b) = equivalence_theorem33_to_31(p, t, x, y)?;
                worst = worst.max((a - b).norm() / b.norm());
            }
        }
    }
    Ok(worst)
}

fn cone_ode() -> Result<f64> {
    let mut worst = 0.0f64;
    let runs: [(f64, f64, f64, &[f64]); 4] = [
        (3.0, -9.0, 1.0, &[0.3, 1.0, 4.0]),
        (3.0, -9.0, -1.0, &[-1.2, -0.6, -0.2]),
        (3.0, -2.0, 1.0, &[1.5, 3.0]),
        (2.5, -1.0, 1.0, &[1.5, 2.5]),
    ];
    for (p, c, s, xis) in runs {
        for &xi in xis {
            worst = worst.max(ode_residual(p, c, s, xi)?);
        }
    }
    Ok(worst)
}

fn tzitzeica(b: &Built) -> Result<Option<f64>> {
    let Some((data, _)) = &b.data else {
        return Ok(None);
    };
    Ok(Some(tzitzeica_residual(data, &grid_on(b, 8)?)?))
}

fn zero_curvature(b: &Built) -> Result<Option<f64>> {
    let Some((data, t)) = &b.data else {
        return Ok(None);
    };
    Ok(Some(zero_curvature_residual(data, Complex64::from_polar(1.0, 3.0 * t), &grid_on(b, 8)?)?))
}

fn frame_window(b: &Built) -> Result<Grid> {
    let shrink = |(a, c): (f64, f64)| (a + 0.2 * (c - a), c - 0.2 * (c - a));
    Grid::new(shrink(b.x), shrink(b.y), 5, 5)
}

fn frame_run(b: &Built) -> Result<Option<(f64, f64)>> {
    let Some((data, t)) = &b.data else {
        return Ok(None);
    };
    let grid = frame_window(b)?;
    let base = FrameState::from_jet(&b.surface.jet(grid.x.0, grid.y.0)?)?;
    let rec = reconstruct_family(data, *t, &base, &grid)?;
    let mut worst = 0.0f64;
    for (r, (x, y)) in rec.points.iter().zip(grid.points()) {
        let want = b.surface.position(x, y)?;
        worst = worst.max((r - want).norm() / want.norm());
    }
    Ok(Some((worst, rec.diagnostics.max_det_drift)))
}

fn frame_reconstruction(b: &Built) -> Result<Option<f64>> {
    Ok(frame_run(b)?.map(|r| r.0))
}

fn frame_determinant(b: &Built) -> Result<Option<f64>> {
    Ok(frame_run(b)?.map(|r| r.1))
}

fn path_independence(b: &Built) -> Result<Option<f64>> {
    let Some((data, t)) = &b.data else {
        return Ok(None);
    };
    let grid = frame_window(b)?;
    let start = FrameState::from_jet(&b.surface.jet(grid.x.0, grid.y.0)?)?;
    let lambda = Complex64::from_polar(1.0, 3.0 * t);
    Ok(Some(affine_spheres::structure::holonomy_defect(data, lambda, &start, (grid.x.1, grid.y.1))?))
}

fn modulus_check() -> Result<f64> {
    Ok((modulus_match(3.0, 1.0, 2.0)? - 4.39).abs())
}

fn negative_ellipsoid() -> Result<f64> {
    let b = Selector::Ellipsoid.build()?;
    Ok(verify_affine_sphere(&*b.surface, &grid_on(&b, 6)?, -1.0)?.max_defect())
}

fn negative_psi() -> Result<f64> {
    let grid = Grid::new((0.3, 1.5), (-1.0, 1.0), 8, 8)?;
    tzitzeica_residual(&TzitzeicaData::case1().perturbed(0.01), &grid)
}

/// Runs the suite, or the named check, either on the built-in sample
/// surfaces or only on `surface`. With a surface, checks that are not tied
/// to one are skipped, as are checks that do not apply to it.
pub fn run_suite(only: Option<&str>, surface: Option<Selector>, tol: Option<f64>) -> Vec<(Record, Option<String>)> {
    let mut out = Vec::new();
    for check in checks() {
        if only.is_some_and(|o| o != check.name) {
            continue;
        }
        let outcome: std::result::Result<Option<f64>, String> = match (&check.body, surface) {
            (Body::Fixed(_), Some(_)) => continue,
            (Body::Fixed(f), None) => f().map(Some).map_err(|e| e.to_string()),
            (Body::PerSurface(f, defaults), sel) => {
                let sels = sel.map(|s| vec![s]).unwrap_or_else(defaults);
                sels.into_iter().try_fold(None, |worst: Option<f64>, s| match s.build().and_then(|b| f(&b)) {
                    Ok(Some(v)) => {
                        let v = if v.is_nan() { f64::INFINITY } else { v };
                        Ok(Some(worst.map_or(v, |w| w.max(v))))
                    }
                    Ok(None) => Ok(worst),
                    Err(e) => Err(format!("{}: {e}", s.label())),
                })
            }
        };
        let tol = tol.unwrap_or(check.tol);
        match outcome {
            Ok(None) => {}
            Ok(Some(residual)) => {
                let pass = match check.sense {
                    Sense::Below => residual <= tol,
                    Sense::Above => residual > tol,
                };
                out.push((Record { name: check.name, residual, tol, pass }, None));
            }
            Err(e) => out.push((Record { name: check.name, residual: f64::NAN, tol, pass: false }, Some(e))),
        }
    }
    out
}

pub fn report_json(records: &[Record]) -> String {
    let rows: Vec<String> = records
        .iter()
        .map(|r| {
            format!(
                "  {{\"name\":{},\"residual\":{},\"tol\":{},\"pass\":{}}}",
                json_str(r.name),
                json_num(r.residual),
                json_num(r.tol),
                r.pass
            )
        })
        .collect();
    format!("[\n{}\n]\n", rows.join(",\n"))
}

pub fn report_csv(records: &[Record]) -> String {
    let mut s = String::from("name,residual,tol,pass\n");
    for r in records {
        s += &format!("{},{},{},{}\n", r.name, num(r.residual), num(r.tol), r.pass);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_listed() {
        let names: Vec<_> = checks().iter().map(|c| c.name).collect();
        assert_eq!(names, CHECK_NAMES.to_vec());
    }

    #[test]
    fn single_check_on_one_surface() {
        let out = run_suite(Some("tzitzeica"), Some(Selector::Case1Iso), None);
        assert_eq!(out.len(), 1);
        assert!(out[0].0.pass && out[0].0.residual < 1e-8);
    }

    #[test]
    fn negative_controls_fail_the_property_they_probe() {
        let out = run_suite(Some("affine_sphere"), Some(Selector::Ellipsoid), None);
        assert!(!out[0].0.pass);
        let out = run_suite(Some("negative_control_ellipsoid"), None, None);
        assert!(out[0].0.pass && out[0].0.residual > 0.1);
    }

    #[test]
    fn report_is_valid_json() {
        let r = [Record { name: "x", residual: f64::NAN, tol: 1e-8, pass: false }];
        let v: serde_json::Value = serde_json::from_str(&report_json(&r)).unwrap();
        assert_eq!(v[0]["name"], "x");
        assert!(v[0]["residual"].is_null());
    }
}
