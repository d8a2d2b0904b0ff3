//! Numerical kernel shared by every other module: linear algebra aliases,
//! cubic roots, second-order jets, finite differences, RK4 stepping,
//! quadrature and scalar root bracketing.

mod cubic;
mod dual;
mod fd;
mod jet;
mod ode;
mod quad;
mod root1d;

pub use cubic::{cubic_roots, CubicRoots};
pub use dual::Dual2;
pub use fd::{derivative1, numeric_jet2};
pub use jet::Jet2;
pub use ode::{integrate_ode, OdeState};
pub use quad::{integrate, integrate_to_infinity};
pub use root1d::bisect;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;
pub type CVec3 = Vector3<Complex64>;
pub type CMat3 = Matrix3<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    a.dot(&b.cross(c))
}

pub fn cdet3(a: &CVec3, b: &CVec3, c: &CVec3) -> Complex64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

pub fn complexify(v: &Vec3) -> CVec3 {
    v.map(c)
}

/// Tolerances threaded through verification code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub fd_step: f64,
    pub residual_tol: f64,
    pub fd_residual_tol: f64,
    pub root_tol: f64,
    pub ode_step: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            fd_step: f64::EPSILON.powf(0.25),
            residual_tol: 1e-8,
            fd_residual_tol: 1e-5,
            root_tol: 1e-12,
            ode_step: 2e-3,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> crate::Result<()> {
        let all = [
            ("fd_step", self.fd_step),
            ("residual_tol", self.residual_tol),
            ("fd_residual_tol", self.fd_residual_tol),
            ("root_tol", self.root_tol),
            ("ode_step", self.ode_step),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(crate::Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}
