//! Equiaffine invariants of a parametrized surface from its second-order
//! jet: the determinants L, M, N, the Blaschke metric and Beltrami
//! coefficient, and (in isothermal charts) the affine normal, the cubic
//! coefficient U and the affine mean curvature.

use num_complex::Complex64;

use crate::numerics::{c, cdet3, complexify, det3, Jet2, Vec3, I};
use crate::surface::{Grid, Surface};
use crate::{Error, Result};

/// Charts whose isothermal defect exceeds this are refused by
/// [`invariants_isothermal`].
pub const ISOTHERMAL_GATE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineSample {
    pub l: f64,
    pub m: f64,
    pub n: f64,
    /// e^ψ with g = 2e^ψ |dz|².
    pub conformal: f64,
    pub xi: Vec3,
    pub u: Complex64,
    pub h: f64,
    /// |ξ + H r| / |ξ|
    pub collinearity_defect: f64,
    pub isothermal_defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeltramiCoefficient {
    pub mu: Complex64,
}

pub fn fundamental_dets(jet: &Jet2) -> Result<(f64, f64, f64)> {
    let normal = jet.r_x.cross(&jet.r_y);
    if normal.norm() <= 1e-14 * jet.r_x.norm() * jet.r_y.norm() || normal.norm() == 0.0 {
        return Err(Error::DegenerateTangentPlane);
    }
    Ok((det3(&jet.r_x, &jet.r_y, &jet.r_xx), det3(&jet.r_x, &jet.r_y, &jet.r_xy), det3(&jet.r_x, &jet.r_y, &jet.r_yy)))
}

/// (|L − N| + 2|M|) / (|L| + |N|); zero exactly in isothermal charts.
pub fn isothermal_defect(l: f64, m: f64, n: f64) -> f64 {
    ((l - n).abs() + 2.0 * m.abs()) / (l.abs() + n.abs())
}

/// Blaschke metric coefficients (E, F, G), normalized positive definite.
pub fn blaschke_metric(l: f64, m: f64, n: f64) -> Result<(f64, f64, f64)> {
    let det = l * n - m * m;
    if !(det > 0.0) {
        return Err(Error::IndefiniteMetric { det });
    }
    let k = l.signum() / det.powf(0.25);
    Ok((k * l, k * m, k * n))
}

pub fn beltrami_mu(l: f64, m: f64, n: f64) -> Result<BeltramiCoefficient> {
    let (e, f, g) = blaschke_metric(l, m, n)?;
    let lambda = 0.25 * (e + g + 2.0 * (e * g - f * f).sqrt());
    Ok(BeltramiCoefficient { mu: Complex64::new(e - g, 2.0 * f) / (4.0 * lambda) })
}

/// H from ξ = −H r, with the relative collinearity defect.
pub fn mean_curvature_fit(xi: &Vec3, r: &Vec3) -> (f64, f64) {
    let rr = r.dot(r);
    if rr == 0.0 {
        return (0.0, 1.0);
    }
    let h = -xi.dot(r) / rr;
    let scale = xi.norm();
    let defect = if scale == 0.0 { 0.0 } else { (xi + h * r).norm() / scale };
    (h, defect)
}

pub fn invariants_isothermal(jet: &Jet2) -> Result<AffineSample> {
    invariants_isothermal_gated(jet, ISOTHERMAL_GATE)
}

pub fn invariants_isothermal_gated(jet: &Jet2, gate: f64) -> Result<AffineSample> {
    let (l, m, n) = fundamental_dets(jet)?;
    let det = l * n - m * m;
    if !(det > 0.0) {
        return Err(Error::IndefiniteMetric { det });
    }
    let defect = isothermal_defect(l, m, n);
    if defect > gate {
        return Err(Error::NotIsothermal { defect });
    }
    let conformal = 0.25 * (l.abs() + n.abs()) / det.powf(0.25);
    let xi = (jet.r_xx + jet.r_yy) / (4.0 * conformal);
    let r_z = (complexify(&jet.r_x) - complexify(&jet.r_y) * I) * c(0.5);
    let r_zz = (complexify(&(jet.r_xx - jet.r_yy)) - complexify(&jet.r_xy) * (2.0 * I)) * c(0.25);
    let xi_c = complexify(&xi);
    let u = 2.0 * I * conformal * cdet3(&r_z, &r_zz, &xi_c) / det3(&jet.r_x, &jet.r_y, &xi);
    let (h, collinearity_defect) = mean_curvature_fit(&xi, &jet.r);
    Ok(AffineSample { l, m, n, conformal, xi, u, h, collinearity_defect, isothermal_defect: defect })
}

/// Affine mean curvature of a proper affine sphere centred at the origin,
/// valid in any chart: with ξ = λ r the volume condition forces
/// λ = sgn(L) |LN − M²|^{1/4} / det(r_x, r_y, r), so H = −λ. The value is
/// constant over the surface exactly when the surface is such a sphere.
pub fn centroaffine_h(jet: &Jet2) -> Result<f64> {
    let (l, m, n) = fundamental_dets(jet)?;
    let det = l * n - m * m;
    if !(det > 0.0) {
        return Err(Error::IndefiniteMetric { det });
    }
    let support = det3(&jet.r_x, &jet.r_y, &jet.r);
    if support == 0.0 {
        return Err(Error::DegenerateTangentPlane);
    }
    Ok(-l.signum() * det.powf(0.25) / support)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereReport {
    /// Largest |ξ + H r| / |ξ| (isothermal charts) or relative spread of
    /// the centro-affine H (other charts).
    pub max_collinearity: f64,
    pub max_h_error: f64,
    pub points: usize,
}

impl SphereReport {
    pub fn max_defect(&self) -> f64 {
        self.max_collinearity.max(self.max_h_error)
    }
}

/// Check the proper-affine-sphere condition ξ = −H r with H = `expected_h`
/// over a grid. Isothermal charts use the affine normal directly; other
/// charts fall back to the centro-affine mean curvature.
pub fn verify_affine_sphere<S: Surface + ?Sized>(surface: &S, grid: &Grid, expected_h: f64) -> Result<SphereReport> {
    let mut report = SphereReport { max_collinearity: 0.0, max_h_error: 0.0, points: 0 };
    let mut centro = Vec::new();
    for (x, y) in grid.points() {
        let jet = surface.jet(x, y).map_err(|e| point_error(e, x, y))?;
        match invariants_isothermal(&jet) {
            Ok(s) => {
                report.max_collinearity = report.max_collinearity.max(s.collinearity_defect);
                report.max_h_error = report.max_h_error.max((s.h - expected_h).abs());
            }
            Err(Error::NotIsothermal { .. }) => {
                let h = centroaffine_h(&jet).map_err(|e| point_error(e, x, y))?;
                report.max_h_error = report.max_h_error.max((h - expected_h).abs());
                centro.push(h);
            }
            Err(e) => return Err(point_error(e, x, y)),
        }
        report.points += 1;
    }
    if !centro.is_empty() {
        let mean = centro.iter().sum::<f64>() / centro.len() as f64;
        let spread = centro.iter().map(|h| (h - mean).abs()).fold(0.0, f64::max) / mean.abs().max(1e-300);
        report.max_collinearity = report.max_collinearity.max(spread);
    }
    Ok(report)
}

fn point_error(e: Error, x: f64, y: f64) -> Error {
    match e {
        Error::DomainViolation(msg) => Error::DomainViolation(format!("{msg} at ({x}, {y})")),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph_jet(fxx: f64, fxy: f64, fyy: f64) -> Jet2 {
        Jet2 {
            r: Vec3::zeros(),
            r_x: Vec3::new(1.0, 0.0, 0.0),
            r_y: Vec3::new(0.0, 1.0, 0.0),
            r_xx: Vec3::new(0.0, 0.0, fxx),
            r_xy: Vec3::new(0.0, 0.0, fxy),
            r_yy: Vec3::new(0.0, 0.0, fyy),
            at: (0.0, 0.0),
        }
    }

    #[test]
    fn paraboloid_dets() {
        let (l, m, n) = fundamental_dets(&graph_jet(2.0, 0.0, 2.0)).unwrap();
        assert_eq!((l, m, n), (2.0, 0.0, 2.0));
    }

    #[test]
    fn plane_has_zero_dets_and_is_rejected_downstream() {
        let (l, m, n) = fundamental_dets(&graph_jet(0.0, 0.0, 0.0)).unwrap();
        assert_eq!((l, m, n), (0.0, 0.0, 0.0));
        assert!(matches!(blaschke_metric(l, m, n), Err(Error::IndefiniteMetric { .. })));
    }

    #[test]
    fn beltrami_of_conformal_and_stretched() {
        assert_eq!(beltrami_mu(1.0, 0.0, 1.0).unwrap().mu, Complex64::new(0.0, 0.0));
        let mu = beltrami_mu(2.0, 0.0, 1.0).unwrap().mu;
        let k = 2f64.powf(-0.25);
        let (e, g) = (2.0 * k, k);
        let lambda = 0.25 * (e + g + 2.0 * (e * g).sqrt());
        assert!((mu - Complex64::new((e - g) / (4.0 * lambda), 0.0)).norm() < 1e-15);
        assert!(mu.re > 0.0 && mu.norm() < 1.0);
    }

    #[test]
    fn mean_curvature_fit_cases() {
        let r = Vec3::new(1.0, 2.0, -0.5);
        assert_eq!(mean_curvature_fit(&(-r), &r), (1.0, 0.0));
        assert_eq!(mean_curvature_fit(&r, &r), (-1.0, 0.0));
        let (h, d) = mean_curvature_fit(&Vec3::new(2.0, -1.0, 0.0), &r);
        assert!(h.abs() < 1e-15 && (d - 1.0).abs() < 1e-15);
    }
}
