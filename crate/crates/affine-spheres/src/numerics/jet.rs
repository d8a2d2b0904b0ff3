use super::{Dual2, Mat3, Vec3};
use crate::{Error, Result};

/// Position and first/second partial derivatives of an immersion at a
/// parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub r: Vec3,
    pub r_x: Vec3,
    pub r_y: Vec3,
    pub r_xx: Vec3,
    pub r_xy: Vec3,
    pub r_yy: Vec3,
    pub at: (f64, f64),
}

/// Imaginary residue tolerated when a surface is assembled from complex
/// intermediates that are real in exact arithmetic.
const NON_REAL_REL: f64 = 1e-7;

impl Jet2 {
    /// Assemble from three component jets, dropping (and checking) the
    /// imaginary parts.
    pub fn from_components(c: &[Dual2; 3], at: (f64, f64)) -> Result<Self> {
        let scale = c.iter().map(|d| d.max_abs()).fold(0.0, f64::max);
        let imag = c.iter().map(|d| d.max_imag()).fold(0.0, f64::max);
        if !c.iter().all(|d| d.is_finite()) {
            return Err(Error::DomainViolation(format!("non-finite surface value at ({}, {})", at.0, at.1)));
        }
        if imag > NON_REAL_REL * scale.max(1e-300) {
            return Err(Error::NonReal { imag: imag / scale.max(1e-300) });
        }
        let re = [c[0].re(), c[1].re(), c[2].re()];
        let slot = |k: usize| Vec3::new(re[0][k], re[1][k], re[2][k]);
        Ok(Self { r: slot(0), r_x: slot(1), r_y: slot(2), r_xx: slot(3), r_xy: slot(4), r_yy: slot(5), at })
    }

    /// Image of the jet under r -> A r + shift.
    pub fn transform(&self, a: &Mat3, shift: &Vec3) -> Self {
        Self {
            r: a * self.r + shift,
            r_x: a * self.r_x,
            r_y: a * self.r_y,
            r_xx: a * self.r_xx,
            r_xy: a * self.r_xy,
            r_yy: a * self.r_yy,
            at: self.at,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        self.transform(&(Mat3::identity() * k), &Vec3::zeros())
    }

    pub fn max_abs(&self) -> f64 {
        [self.r, self.r_x, self.r_y, self.r_xx, self.r_xy, self.r_yy].iter().map(|v| v.amax()).fold(0.0, f64::max)
    }

    /// Largest slot-wise difference, relative to the larger jet.
    pub fn rel_diff(&self, other: &Jet2) -> f64 {
        let pairs = [
            (self.r, other.r),
            (self.r_x, other.r_x),
            (self.r_y, other.r_y),
            (self.r_xx, other.r_xx),
            (self.r_xy, other.r_xy),
            (self.r_yy, other.r_yy),
        ];
        let diff = pairs.iter().map(|(a, b)| (a - b).amax()).fold(0.0, f64::max);
        diff / self.max_abs().max(other.max_abs()).max(1e-300)
    }
}
