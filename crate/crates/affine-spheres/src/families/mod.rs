//! Explicit affine spheres asymptotic to the semi-homogeneous cones, their
//! isothermal charts and associated families, as analytic-jet samplers.

mod case1;
mod coeffs;
mod cones;
mod coth;
mod modulus;
mod ode_chart;
mod weierstrass;

pub use case1::{
    base_point, case1_cone, case1_conformal, case1_family, case1_iso_inverse, case1_iso_map, case1_isothermal,
    case1_isothermal_cone, case1_pushforward, case1_raw, gauge_matrices, matrix_a, singular_angle_near, Case1Family,
    Case1Isothermal, Case1Raw, GaugeMatrices, CONTOUR_BAND,
};
pub use coeffs::{conjugate, shorthand_coeffs, xi_roots, CoefficientSet};
pub use cones::{cone_contains, cone_mesh, ConeEmbedding, ConeSpec, Membership, Mesh, BOUNDARY_TOL};
pub use coth::{
    coth_conformal, coth_cubic_modulus, coth_display_cubic, coth_family_base_angle, coth_family_literal, coth_surface,
    equivalence_theorem33_to_31, matrix_e, CothFamily, CothSurface, CothWhich,
};
pub use modulus::{modulus_k2, modulus_match};
pub use ode_chart::{hildebrand_original, ode_residual, OdeChart, XiInterval, ORIGINAL_CHART_H};
pub use weierstrass::{
    c_zero_surface, f_functions, family_surface, general_surface, unsimplified_surface, CZeroSurface, FamilySurface,
    GeneralSurface, SigmaComponents, BRANCH_GUARD,
};

use std::f64::consts::PI;

use crate::numerics::{CMat3, Dual2};
use crate::{Error, Result};

/// Parameters selecting one member of a family: cone exponents, the
/// integration constant c ≤ 0, the branch sign s and the family angle t
/// (λ = e^{3it}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyConfig {
    pub p: f64,
    pub q: f64,
    pub c: f64,
    pub s: Option<f64>,
    pub t: Option<f64>,
}

impl FamilyConfig {
    pub fn new(p: f64, c: f64) -> Result<Self> {
        let cfg = Self { p, q: conjugate(p)?, c, s: None, t: None };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        coeffs::check_pq(self.p, self.q)?;
        let lo = -2.0 * (self.p + self.q);
        if !(self.c <= 0.0 && self.c >= lo - 1e-12) {
            return Err(Error::InvalidParameter(format!("c must lie in [{lo}, 0], got {}", self.c)));
        }
        if let Some(s) = self.s {
            if s != 1.0 && s != -1.0 {
                return Err(Error::InvalidParameter(format!("s must be +1 or -1, got {s}")));
            }
        }
        if let Some(t) = self.t {
            if !(0.0..2.0 * PI / 3.0).contains(&t) {
                return Err(Error::InvalidParameter(format!("t must lie in [0, 2pi/3), got {t}")));
            }
            if let Some(s) = self.s {
                let c3 = (3.0 * t).cos();
                if c3 != 0.0 && s != -c3.signum() {
                    return Err(Error::InvalidParameter(format!("s = {s} contradicts s = -sgn(cos 3t) at t = {t}")));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn dual_xy(x: f64, y: f64) -> (Dual2, Dual2) {
    (Dual2::var_x(x), Dual2::var_y(y))
}

pub(crate) fn apply_matrix(m: &CMat3, v: &[Dual2; 3]) -> [Dual2; 3] {
    std::array::from_fn(|i| v[0] * m[(i, 0)] + v[1] * m[(i, 1)] + v[2] * m[(i, 2)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(FamilyConfig::new(3.0, -1.0).is_ok());
        assert!(FamilyConfig::new(3.0, 0.5).is_err());
        assert!(FamilyConfig::new(1.5, -1.0).is_err());
        let mut cfg = FamilyConfig::new(3.0, -1.0).unwrap();
        cfg.t = Some(0.1);
        cfg.s = Some(-1.0);
        assert!(cfg.validate().is_ok());
        cfg.s = Some(1.0);
        assert!(cfg.validate().is_err());
        cfg.t = Some(2.5);
        cfg.s = None;
        assert!(cfg.validate().is_err());
    }
}
