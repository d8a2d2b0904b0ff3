//! The affine sphere asymptotic to the homogenized exponential epigraph:
//! the raw chart, its isothermal chart and the associated family.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::numerics::{CMat3, Dual2, Jet2, Mat3, Vec3};
use crate::surface::Surface;
use crate::{Error, Result};

use super::cones::{ConeEmbedding, ConeSpec};
use super::{apply_matrix, dual_xy};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Isothermal coordinates of the point (x, y) = (1, 1).
pub fn base_point() -> (f64, f64) {
    ((1.0 + SQRT_2).ln() / SQRT_3, 0.0)
}

fn raw_dual(x: Dual2, y: Dual2) -> [Dual2; 3] {
    let r1 = -(y * (x.ln() * 1.5 + y.ln() * 3.0 + x));
    let r2 = x.powf(-1.5) * y.powf(-2.0) * (x + 1.0).sqrt();
    [r1, r2, y]
}

/// r = (−y(3/2 ln x + 3 ln y + x), x^{−3/2} y^{−2} √(1+x), y) on x, y > 0.
pub fn case1_raw(x: f64, y: f64) -> Result<Jet2> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::DomainViolation(format!("raw chart needs x, y > 0, got ({x}, {y})")));
    }
    let (dx, dy) = dual_xy(x, y);
    Jet2::from_components(&raw_dual(dx, dy), (x, y))
}

pub fn case1_iso_map(x: f64, y: f64) -> Result<(f64, f64)> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::DomainViolation(format!("raw chart needs x, y > 0, got ({x}, {y})")));
    }
    Ok((x.sqrt().asinh() / SQRT_3, y.ln() + 0.5 * x.ln()))
}

pub fn case1_iso_inverse(u: f64, v: f64) -> Result<(f64, f64)> {
    if !(u > 0.0) {
        return Err(Error::DomainViolation(format!("isothermal chart needs u > 0, got {u}")));
    }
    let sh = (SQRT_3 * u).sinh();
    Ok((sh * sh, v.exp() / sh))
}

/// The raw immersion composed with the inverse isothermal map, so its jets
/// are taken in (u, v).
pub fn case1_pushforward(u: f64, v: f64) -> Result<Jet2> {
    case1_iso_inverse(u, v)?;
    let (du, dv) = dual_xy(u, v);
    let sh = (du * SQRT_3).sinh();
    Jet2::from_components(&raw_dual(sh * sh, dv.exp() / sh), (u, v))
}

/// Isothermal chart (1/√3)·(e^v (sinh² + 3v), −e^{−2v} cosh, −e^v) / sinh(√3u).
pub fn case1_isothermal(u: f64, v: f64) -> Result<Jet2> {
    if !(u > 0.0) {
        return Err(Error::DomainViolation(format!("isothermal chart needs u > 0, got {u}")));
    }
    let (du, dv) = dual_xy(u, v);
    let sh = (du * SQRT_3).sinh();
    let ch = (du * SQRT_3).cosh();
    let k = sh.recip() / SQRT_3;
    let ev = dv.exp();
    Jet2::from_components(&[k * ev * (sh * sh + dv * 3.0), -(k * (dv * -2.0).exp() * ch), -(k * ev)], (u, v))
}

/// e^ψ = (3 csch²(√3u) + 2)/2 of the isothermal chart.
pub fn case1_conformal(u: f64) -> f64 {
    let sh = (SQRT_3 * u).sinh();
    (3.0 / (sh * sh) + 2.0) / 2.0
}

/// Frame (r, r_u, r_v) of the isothermal chart at the base point.
pub fn matrix_a() -> Mat3 {
    Mat3::new(
        1.0 / SQRT_3,
        SQRT_2,
        4.0 / SQRT_3,
        -SQRT_2 / SQRT_3,
        1.0,
        2.0 * SQRT_2 / SQRT_3,
        -1.0 / SQRT_3,
        SQRT_2,
        -1.0 / SQRT_3,
    )
}

/// The vector w(x, y, t) whose span carries every member of the family.
pub(crate) fn family_w(x: Dual2, y: Dual2, t: Complex64) -> [Dual2; 3] {
    let (c, s) = (t.cos(), t.sin());
    let co = (x * SQRT_3).coth();
    let w1 = -((co + c * (2.0 / SQRT_3)) * ((x * (-c) + y * s) * 2.0).exp());
    let k2 = -SQRT_3 * s + c;
    let w2 = -((co - k2 / SQRT_3) * (x * k2 + y * (-s - SQRT_3 * c)).exp());
    let k3 = SQRT_3 * s + c;
    let w3 = -((co - k3 / SQRT_3) * (x * k3 + y * (-s + SQRT_3 * c)).exp());
    [w1, w2, w3]
}

/// Columns (w, w_x, w_y) at the base point.
pub(crate) fn base_frame_w(t: Complex64) -> CMat3 {
    let (x0, y0) = base_point();
    let (dx, dy) = dual_xy(x0, y0);
    let w = family_w(dx, dy, t);
    CMat3::from_fn(|i, j| match j {
        0 => w[i].v,
        1 => w[i].x,
        _ => w[i].y,
    })
}

/// A, D(t) and B(t) = D(t)⁻¹·(w, w_x, w_y)|base with r_λ = A (D B)⁻¹ w.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeMatrices {
    pub a: Mat3,
    pub d: Mat3,
    pub b: Mat3,
}

pub fn gauge_matrices(t: f64) -> GaugeMatrices {
    let (c, s) = (t.cos(), t.sin());
    let base = 1.0 + SQRT_2;
    let d = Mat3::from_diagonal(&Vec3::new(
        base.powf(-2.0 / SQRT_3 * c),
        base.powf(-s + c / SQRT_3),
        base.powf(s + c / SQRT_3),
    ));
    let w0 = base_frame_w(Complex64::new(t, 0.0)).map(|z| z.re);
    let b = d.try_inverse().expect("diagonal with positive entries") * w0;
    GaugeMatrices { a: matrix_a(), d, b }
}

/// Angles t = π/6 + kπ/3 where (D·B)(t) is singular.
pub fn singular_angle_near(t: f64) -> f64 {
    let k = ((t - PI / 6.0) / (PI / 3.0)).round();
    PI / 6.0 + k * PI / 3.0
}

/// Half-width of the band around a singular angle where the family is
/// evaluated by a contour mean in complex t.
pub const CONTOUR_BAND: f64 = 0.1;
const CONTOUR_RADIUS: f64 = 0.2;
const CONTOUR_NODES: usize = 32;

/// Member r_λ of the associated family, λ = e^{3it}, on x > 0.
///
/// The gauge (D·B)(t) degenerates at t = π/6 + kπ/3 although the member
/// itself is analytic in t there; within [`CONTOUR_BAND`] of those angles
/// the member is recovered as the mean over a circle in complex t.
#[derive(Debug, Clone)]
pub struct Case1Family {
    pub t: f64,
    nodes: Vec<(Complex64, CMat3)>,
}

impl Case1Family {
    pub fn new(t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::InvalidParameter(format!("family angle must be finite, got {t}")));
        }
        let a = matrix_a().map(|v| Complex64::new(v, 0.0));
        let gauge = |tc: Complex64| -> Result<CMat3> {
            let inv = base_frame_w(tc).try_inverse().ok_or(Error::SingularGauge { t: tc.re })?;
            let m = a * inv;
            if m.iter().all(|z| z.is_finite()) {
                Ok(m)
            } else {
                Err(Error::SingularGauge { t: tc.re })
            }
        };
        let nodes = if (t - singular_angle_near(t)).abs() < CONTOUR_BAND {
            (0..CONTOUR_NODES)
                .map(|k| {
                    let tc =
                        t + CONTOUR_RADIUS * Complex64::from_polar(1.0, 2.0 * PI * k as f64 / CONTOUR_NODES as f64);
                    gauge(tc).map(|m| (tc, m))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            let tc = Complex64::new(t, 0.0);
            vec![(tc, gauge(tc)?)]
        };
        Ok(Self { t, nodes })
    }

    pub fn uses_contour(&self) -> bool {
        self.nodes.len() > 1
    }

    /// Components of g·r_λ at dual arguments, with no domain check.
    pub(crate) fn components(&self, x: Dual2, y: Dual2, g: &CMat3) -> [Dual2; 3] {
        let mut acc = [Dual2::constant(0.0); 3];
        for (tc, m) in &self.nodes {
            let r = apply_matrix(&(g * m), &family_w(x, y, *tc));
            for (a, v) in acc.iter_mut().zip(r) {
                *a += v;
            }
        }
        let n = self.nodes.len() as f64;
        acc.map(|d| d / n)
    }
}

impl Surface for Case1Family {
    fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        if !(x > 0.0) {
            return Err(Error::DomainViolation(format!("family chart needs x > 0, got {x}")));
        }
        let (dx, dy) = dual_xy(x, y);
        Jet2::from_components(&self.components(dx, dy, &CMat3::identity()), (x, y))
    }
}

pub fn case1_family(t: f64) -> Result<Case1Family> {
    Case1Family::new(t)
}

pub struct Case1Raw;
pub struct Case1Isothermal;

impl Surface for Case1Raw {
    fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        case1_raw(x, y)
    }
}

impl Surface for Case1Isothermal {
    fn jet(&self, u: f64, v: f64) -> Result<Jet2> {
        case1_isothermal(u, v)
    }
}

/// The exponential cone {x₃ ≥ 0, x₂ ≥ x₃ e^{x₁/x₃}} around the raw chart.
pub fn case1_cone() -> ConeEmbedding {
    ConeEmbedding { spec: ConeSpec { case_id: 1, p: 2.0, q: 2.0, alpha: 1.0, beta: 1.0 }, map: Mat3::identity() }
}

/// The same cone around the isothermal chart, which is −1/√3 times the raw one.
pub fn case1_isothermal_cone() -> ConeEmbedding {
    ConeEmbedding { map: Mat3::identity() * -SQRT_3, ..case1_cone() }
}
