//! Hyperbolic-cotangent affine spheres at the extreme c = −2(p+q), where the
//! lattice degenerates, and their associated family.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numerics::{c, CMat3, Jet2, Mat3, Vec3};
use crate::surface::Surface;
use crate::{Error, Result};

use super::case1::{base_frame_w, case1_family, matrix_a, Case1Family};
use super::coeffs::conjugate;
use super::cones::{ConeEmbedding, ConeSpec};
use super::dual_xy;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// The two coth displays: the first is asymptotic to the case-5 cone, the
/// second to the case-3 cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CothWhich {
    Case5,
    Case3,
}

impl CothWhich {
    fn sign(self) -> f64 {
        match self {
            CothWhich::Case5 => 1.0,
            CothWhich::Case3 => -1.0,
        }
    }
}

fn s2(p: f64) -> f64 {
    p * p - p + 1.0
}

/// Rate k of coth(k ξ₂).
fn coth_rate(p: f64) -> f64 {
    s2(p).sqrt() / (2.0 * (p - 1.0).sqrt())
}

/// κ = √((p² − p + 1)/(12(p − 1))), the chart scale relating the coth
/// family to the case-1 family.
fn chart_scale(p: f64) -> f64 {
    (s2(p) / (12.0 * (p - 1.0))).sqrt()
}

/// e^ψ = (p² − p + 1)/(8(p − 1))·(coth²(k ξ₂) − 1/3).
pub fn coth_conformal(p: f64, xi2: f64) -> f64 {
    let co = 1.0 / (coth_rate(p) * xi2).tanh();
    s2(p) / (8.0 * (p - 1.0)) * (co * co - 1.0 / 3.0)
}

/// |U| = (√3/72)((p² − p + 1)/(p − 1))^{3/2}, shared by every member.
pub fn coth_cubic_modulus(p: f64) -> f64 {
    SQRT_3 / 72.0 * (s2(p) / (p - 1.0)).powf(1.5)
}

/// U = −i√3(2p ∓ √3 i − 1)³/(576 (p−1)^{3/2}), upper sign for case 5.
pub fn coth_display_cubic(p: f64, which: CothWhich) -> Complex64 {
    let z = Complex64::new(2.0 * p - 1.0, -which.sign() * SQRT_3);
    Complex64::new(0.0, -SQRT_3) * z.powi(3) / (576.0 * (p - 1.0).powf(1.5))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CothSurface {
    pub p: f64,
    pub which: CothWhich,
}

pub fn coth_surface(p: f64, which: CothWhich) -> Result<CothSurface> {
    conjugate(p)?;
    Ok(CothSurface { p, which })
}

fn check_negative(xi2: f64) -> Result<()> {
    if !(xi2 < 0.0) {
        return Err(Error::DomainViolation(format!("coth chart needs xi2 < 0, got {xi2}")));
    }
    Ok(())
}

impl CothSurface {
    pub fn expected_conformal(&self, xi2: f64) -> f64 {
        coth_conformal(self.p, xi2)
    }

    pub fn cubic_coefficient(&self) -> Complex64 {
        coth_display_cubic(self.p, self.which)
    }

    /// (r₁, r₂, r₃) ↦ (−r₁, p r₃/√(p−1), −r₂); the cone opening is reached
    /// as ξ₂ → 0⁻.
    pub fn cone(&self) -> ConeEmbedding {
        let p = self.p;
        let case_id = match self.which {
            CothWhich::Case5 => 5,
            CothWhich::Case3 => 3,
        };
        let k = p / (p - 1.0).sqrt();
        ConeEmbedding {
            spec: ConeSpec { case_id, p, q: p / (p - 1.0), alpha: 1.0, beta: 1.0 },
            map: Mat3::new(-1.0, 0.0, 0.0, 0.0, 0.0, k, 0.0, -1.0, 0.0),
        }
    }
}

impl Surface for CothSurface {
    fn jet(&self, xi2: f64, y3: f64) -> Result<Jet2> {
        check_negative(xi2)?;
        let p = self.p;
        let sg = self.which.sign();
        let (x, y) = dual_xy(xi2, y3);
        let big_s = s2(p).sqrt();
        let co = (x * coth_rate(p)).coth() * big_s;
        let d = 2.0 * (3.0 * (p - 1.0)).sqrt();
        let rp = (p - 1.0).sqrt();
        let lead = 1.0 / (3.0 * (p - 1.0)).sqrt();
        let comps = [
            (co + sg) * (x * (-sg / (2.0 * rp)) + y * ((2.0 * p - 1.0) / d)).exp() * lead,
            (co + sg * (p - 1.0)) * (x * (-sg * rp / 2.0) - y * ((p + 1.0) / d)).exp() * lead,
            (co - sg * p) * (x * (sg * p / (2.0 * rp)) - y * ((p - 2.0) / d)).exp() * (-1.0 / (SQRT_3 * p)),
        ];
        Jet2::from_components(&comps, (xi2, y3))
    }
}

/// Constant matrix E with literal(t)(ξ₂, y₃) = E⁻¹ w(κξ₂, κy₃, t), where w
/// spans the case-1 family.
pub fn matrix_e(p: f64) -> Mat3 {
    let a = (3.0 * p * p / s2(p)).sqrt();
    let b = (3.0 * (p - 1.0) / s2(p)).sqrt();
    Mat3::new(0.0, 0.0, a, 0.0, -b, 0.0, -b, 0.0, 0.0)
}

/// The family as displayed with parameter t, without normalization; its
/// affine mean curvature is −1 only at the base angles.
pub fn coth_family_literal(p: f64, t: f64) -> Result<impl Fn(f64, f64) -> Result<Jet2>> {
    conjugate(p)?;
    let kap = chart_scale(p);
    let k2 = (s2(p) / (4.0 * (p - 1.0))).sqrt();
    let lead = (s2(p) / (3.0 * (p - 1.0))).sqrt();
    let (ct, st) = (t.cos(), t.sin());
    Ok(move |xi2: f64, y3: f64| {
        let (x, y) = dual_xy(xi2, y3);
        let co = (x * k2).coth();
        let a = SQRT_3 * st + ct;
        let b = -SQRT_3 * st + ct;
        let comps = [
            (co - a / SQRT_3) * ((x * a + y * (SQRT_3 * ct - st)) * kap).exp() * lead,
            (co - b / SQRT_3) * ((x * b + y * (-SQRT_3 * ct - st)) * kap).exp() * lead,
            (co + 2.0 * ct / SQRT_3) * ((x * (-ct) + y * st) * (2.0 * kap)).exp() * (-lead * (p - 1.0).sqrt() / p),
        ];
        Jet2::from_components(&comps, (xi2, y3))
    })
}

/// Literal parameter t at which the displayed family reproduces the coth
/// display: exactly for case 3, and after swapping the first two
/// components for case 5.
pub fn coth_family_base_angle(p: f64, which: CothWhich) -> f64 {
    let t = coth_display_cubic(p, which).arg() / 3.0;
    match which {
        CothWhich::Case3 => t,
        CothWhich::Case5 => t + 4.0 * PI / 3.0,
    }
}

/// Positions A·W₀(t)⁻¹·E·literal(t)(X/κ, Y/κ) and r₃₁(t)(X, Y) of the
/// case-1 family member at a point with X > 0; equal up to rounding.
pub fn equivalence_theorem33_to_31(p: f64, t: f64, x: f64, y: f64) -> Result<(Vec3, Vec3)> {
    let kap = chart_scale(p);
    let lit = coth_family_literal(p, t)?;
    let w0_inv = base_frame_w(c(t)).map(|z| z.re).try_inverse().ok_or(Error::SingularGauge { t })?;
    let lhs = matrix_a() * w0_inv * matrix_e(p) * lit(x / kap, y / kap)?.r;
    let rhs = case1_family(t)?.position(x, y)?;
    Ok((lhs, rhs))
}

/// Member of the associated family of the case-3 coth display with
/// λ = e^{3it}, normalized to H = −1 and coinciding with that display at
/// its base angle.
#[derive(Debug, Clone)]
pub struct CothFamily {
    pub p: f64,
    pub t: f64,
    member: Case1Family,
    gauge: CMat3,
    scale: f64,
}

impl CothFamily {
    pub fn new(p: f64, t: f64) -> Result<Self> {
        conjugate(p)?;
        let base = coth_family_base_angle(p, CothWhich::Case3);
        let e_inv = matrix_e(p).try_inverse().ok_or(Error::SingularGauge { t })?;
        let a_inv = matrix_a().try_inverse().ok_or(Error::SingularGauge { t })?;
        let gauge = e_inv.map(c) * base_frame_w(c(base)) * a_inv.map(c);
        Ok(Self { p, t, member: Case1Family::new(t)?, gauge, scale: chart_scale(p) })
    }

    pub fn cubic_modulus(&self) -> f64 {
        coth_cubic_modulus(self.p)
    }

    pub fn expected_cubic(&self) -> Complex64 {
        Complex64::from_polar(self.cubic_modulus(), 3.0 * self.t)
    }

    pub fn expected_conformal(&self, xi2: f64) -> f64 {
        coth_conformal(self.p, xi2)
    }
}

impl Surface for CothFamily {
    fn jet(&self, xi2: f64, y3: f64) -> Result<Jet2> {
        check_negative(xi2)?;
        let (x, y) = dual_xy(xi2, y3);
        let comps = self.member.components(x * self.scale, y * self.scale, &self.gauge);
        Jet2::from_components(&comps, (xi2, y3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::invariants_isothermal;

    #[test]
    fn displays_have_closed_form_invariants() {
        for p in [2.0, 3.0, 4.5] {
            for which in [CothWhich::Case5, CothWhich::Case3] {
                let surf = coth_surface(p, which).unwrap();
                for &(x, y) in &[(-0.7, 0.3), (-2.0, -1.0)] {
                    let inv = invariants_isothermal(&surf.jet(x, y).unwrap()).unwrap();
                    assert!((inv.h + 1.0).abs() < 1e-9, "{which:?} p {p}: H {}", inv.h);
                    assert!((inv.conformal - coth_conformal(p, x)).abs() < 1e-9 * inv.conformal);
                    assert!((inv.u - coth_display_cubic(p, which)).norm() < 1e-9);
                    assert!((inv.u.norm() - coth_cubic_modulus(p)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn literal_family_matches_displays_at_base_angles() {
        for p in [2.0, 3.0] {
            let lit3 = coth_family_literal(p, coth_family_base_angle(p, CothWhich::Case3)).unwrap();
            let lit5 = coth_family_literal(p, coth_family_base_angle(p, CothWhich::Case5)).unwrap();
            let c3 = coth_surface(p, CothWhich::Case3).unwrap();
            let c5 = coth_surface(p, CothWhich::Case5).unwrap();
            for &(x, y) in &[(-0.6, 0.3), (-1.5, -0.2)] {
                assert!(lit3(x, y).unwrap().rel_diff(&c3.jet(x, y).unwrap()) < 1e-12);
                let swapped = lit5(x, y)
                    .unwrap()
                    .transform(&Mat3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0), &Vec3::zeros());
                assert!(swapped.rel_diff(&c5.jet(x, y).unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn literal_family_is_not_normalized_off_base() {
        let lit = coth_family_literal(3.0, 0.2).unwrap();
        let inv = invariants_isothermal(&lit(0.6, 0.3).unwrap()).unwrap();
        assert!((inv.h + 1.0).abs() > 1e-3);
    }

    #[test]
    fn literal_family_is_a_gauge_of_the_case1_family() {
        for t in [0.2, 0.9, 1.4] {
            let (a, b) = equivalence_theorem33_to_31(3.0, t, 0.8, 0.25).unwrap();
            assert!((a - b).norm() < 1e-10 * b.norm(), "t {t}: {a:?} {b:?}");
        }
    }

    #[test]
    fn normalized_family() {
        let p = 3.0;
        let base = coth_family_base_angle(p, CothWhich::Case3);
        let c3 = coth_surface(p, CothWhich::Case3).unwrap();
        let fam = CothFamily::new(p, base).unwrap();
        assert!(fam.jet(-0.6, 0.2).unwrap().rel_diff(&c3.jet(-0.6, 0.2).unwrap()) < 1e-10);
        for t in [0.0, 0.3, 0.52, 1.1, 2.0] {
            let fam = CothFamily::new(p, t).unwrap();
            let inv = invariants_isothermal(&fam.jet(-0.8, 0.4).unwrap()).unwrap();
            assert!((inv.h + 1.0).abs() < 1e-8, "t {t}: H {}", inv.h);
            assert!((inv.conformal - coth_conformal(p, -0.8)).abs() < 1e-8 * inv.conformal);
            assert!((inv.u - fam.expected_cubic()).norm() < 1e-8, "t {t}: {} vs {}", inv.u, fam.expected_cubic());
        }
    }

    #[test]
    fn displays_lie_in_their_cones() {
        for p in [2.0, 3.0, 6.0] {
            for which in [CothWhich::Case5, CothWhich::Case3] {
                let surf = coth_surface(p, which).unwrap();
                let cone = surf.cone();
                for xi2 in [-4.0, -1.0, -0.3, -0.05] {
                    for y3 in [-3.0, 0.0, 2.0] {
                        let r = surf.position(xi2, y3).unwrap();
                        assert!(cone.boundary_distance(&r) > 0.0, "{which:?} p {p} at ({xi2}, {y3})");
                    }
                }
            }
        }
    }
}
