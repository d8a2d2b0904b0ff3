//! The affine spheres in their original ODE parametrization (ξ, μ), where
//! e^φ is algebraic in ξ and t = e^τ comes from integrating dτ/dξ.

use crate::numerics::{derivative1, integrate_to_infinity, numeric_jet2, Dual2, Jet2, Vec3};
use crate::surface::Surface;
use crate::{Error, Result};

use super::coeffs::{conjugate, shorthand_coeffs};
use super::cones::{swap_map, ConeEmbedding, ConeSpec};

/// Open interval of the ODE parameter ξ covered by one regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiInterval {
    pub lo: f64,
    pub hi: f64,
}

impl XiInterval {
    pub fn contains(&self, xi: f64) -> bool {
        xi > self.lo && xi < self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum TauMap {
    /// Elementary t(ξ) available at c = −2(p+q).
    Closed,
    /// τ(ξ) = −∫_ξ^∞ dτ/dξ, starting at the branch point ξ_r.
    Quadrature { root: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeChart {
    pub p: f64,
    pub q: f64,
    pub c: f64,
    pub s: f64,
    pub interval: XiInterval,
    tau_map: TauMap,
}

const QUAD_TOL: f64 = 1e-12;

/// Affine mean curvature of the (ξ, μ) immersion, shared with the raw
/// exponential-cone chart: both are 3^{1/4} times a sphere with H = −1.
pub const ORIGINAL_CHART_H: f64 = -0.438_691_337_650_831;

pub fn hildebrand_original(p: f64, c: f64, s: f64) -> Result<OdeChart> {
    let q = conjugate(p)?;
    if s != 1.0 && s != -1.0 {
        return Err(Error::InvalidParameter(format!("s must be +1 or -1, got {s}")));
    }
    let lo = -2.0 * (p + q);
    if !(c <= 0.0 && c >= lo * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!("c must lie in [{lo}, 0], got {c}")));
    }
    let closed = (c - lo).abs() <= 1e-12 * (p + q);
    let (interval, tau_map) = if closed {
        let interval = if s > 0.0 { XiInterval { lo: 0.0, hi: f64::INFINITY } } else { XiInterval { lo: -q, hi: 0.0 } };
        (interval, TauMap::Closed)
    } else if s > 0.0 {
        let root = shorthand_coeffs(p, q, c)?.largest_xi_root();
        (XiInterval { lo: root, hi: f64::INFINITY }, TauMap::Quadrature { root })
    } else {
        return Err(Error::InvalidParameter("s = -1 is only available at c = -2(p+q)".into()));
    };
    Ok(OdeChart { p, q, c: if closed { lo } else { c }, s, interval, tau_map })
}

impl OdeChart {
    fn check(&self, xi: f64) -> Result<()> {
        if !self.interval.contains(xi) {
            return Err(Error::DomainViolation(format!(
                "xi = {xi} outside ({}, {})",
                self.interval.lo, self.interval.hi
            )));
        }
        Ok(())
    }

    fn discriminant(&self, xi: f64) -> f64 {
        let pq = self.p + self.q;
        self.c * self.c + 4.0 * pq * (xi - 1.0) * (xi + self.p) * (xi + self.q)
    }

    /// e^φ with φ = ϕ + τ, the algebraic solution.
    pub fn exp_varphi(&self, xi: f64) -> f64 {
        let d = self.discriminant(xi).max(0.0);
        (-self.c + self.s * d.sqrt()) / (2.0 * (self.p + self.q))
    }

    /// dτ/dξ.
    pub fn tau_prime(&self, xi: f64) -> f64 {
        let pq = self.p + self.q;
        let sd = self.discriminant(xi).max(0.0).sqrt();
        2.0 * pq * (3.0 * xi + 2.0 * (pq - 1.0)) / (sd * (-self.c * self.s + sd))
    }

    fn closed_t(&self, xi: Dual2) -> Dual2 {
        let (p, q) = (self.p, self.q);
        let pq = p + q;
        let a = (xi + (pq - 1.0)).sqrt();
        let abs_xi = if xi.v.re < 0.0 { -xi } else { xi };
        let g = (pq - 1.0).sqrt() / pq.sqrt();
        (a + pq.sqrt())
            * (abs_xi / ((a + (pq - 1.0).sqrt()) * (a + (pq - 1.0).sqrt()))).powf(g)
            * ((a + (q - 1.0).sqrt()) / (xi + p)).powf(1.0 / p)
            * ((a + (p - 1.0).sqrt()) / (xi + q)).powf(1.0 / q)
    }

    /// τ = ln t at ξ.
    pub fn tau(&self, xi: f64) -> Result<f64> {
        self.check(xi)?;
        match self.tau_map {
            TauMap::Closed => Ok(self.closed_t(Dual2::var_x(xi)).v.re.ln()),
            TauMap::Quadrature { root } => {
                let integrand = |u: f64| 2.0 * u * self.tau_prime(root + u * u);
                Ok(-integrate_to_infinity(integrand, (xi - root).sqrt(), QUAD_TOL)?)
            }
        }
    }

    pub fn t(&self, xi: f64) -> Result<f64> {
        Ok(self.tau(xi)?.exp())
    }

    /// dτ/dξ as seen by the t(ξ) in use: differentiated exactly for the
    /// closed form, by finite differences of the quadrature otherwise.
    fn tau_prime_from_t(&self, xi: f64) -> Result<f64> {
        match self.tau_map {
            TauMap::Closed => {
                let t = self.closed_t(Dual2::var_x(xi));
                Ok((t.x / t.v).re)
            }
            TauMap::Quadrature { root } => {
                let h = 1e-4 * (xi - root).min(1.0 + xi.abs());
                derivative1(|x| self.tau(x), xi, h)
            }
        }
    }

    pub fn position(&self, xi: f64, mu: f64) -> Result<Vec3> {
        let (p, q) = (self.p, self.q);
        let tau = self.tau(xi)?;
        let e = self.exp_varphi(xi);
        if !(e > 0.0) {
            return Err(Error::DomainViolation(format!("e^phi = {e} is not positive at xi = {xi}")));
        }
        let front = ((e.ln() - tau) / 3.0).exp();
        Ok(front
            * Vec3::new(
                ((q + 1.0) * mu / (3.0 * q)).exp(),
                (-(p + 1.0) * mu / (3.0 * p)).exp(),
                tau.exp() * (-(p - q) * mu / (3.0 * (p + q))).exp(),
            ))
    }

    /// The image satisfies r₃/(r₁^{1/p} r₂^{1/q}) = t, so the cone
    /// coordinates are (r₁, ±r₃, r₂), with the sign flipped on the s = −1 sheet.
    pub fn cone(&self) -> ConeEmbedding {
        let (case_id, sign) = match self.tau_map {
            TauMap::Closed if self.s > 0.0 => (5, 1.0),
            TauMap::Closed => (3, -1.0),
            TauMap::Quadrature { .. } => (4, 1.0),
        };
        ConeEmbedding { spec: ConeSpec { case_id, p: self.p, q: self.q, alpha: 1.0, beta: 1.0 }, map: swap_map(sign) }
    }
}

impl Surface for OdeChart {
    fn jet(&self, xi: f64, mu: f64) -> Result<Jet2> {
        let h = 1e-3 * (xi - self.interval.lo).min(1.0 + xi.abs()).min(1.0);
        numeric_jet2(|a, b| self.position(a, b), (xi, mu), h)
    }
}

/// Absolute defect of e^{−ϕ}ϕ̇(tϕ̇+p+1)(tϕ̇+q+1) = (p+q)te^ϕ + c with ϕ(t)
/// assembled from e^φ and t(ξ) through the chain rule.
pub fn ode_residual(p: f64, c: f64, s: f64, xi: f64) -> Result<f64> {
    let h = hildebrand_original(p, c, s)?;
    let tau = h.tau(xi)?;
    let t = tau.exp();
    let e = h.exp_varphi(xi);
    let dvarphi = derivative1(|x| Ok(h.exp_varphi(x).ln()), xi, 1e-5 * (1.0 + xi.abs()))?;
    let dtau = h.tau_prime_from_t(xi)?;
    let t_phidot = (dvarphi - dtau) / dtau;
    let phi = e.ln() - tau;
    let lhs = (-phi).exp() * (t_phidot / t) * (t_phidot + p + 1.0) * (t_phidot + h.q + 1.0);
    let rhs = (p + h.q) * t * phi.exp() + c;
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_t_solves_the_tau_equation() {
        for (p, s, xis) in [(3.0, 1.0, vec![0.3, 2.0, 10.0]), (3.0, -1.0, vec![-0.5, -1.2]), (2.0, 1.0, vec![0.7])] {
            let h = hildebrand_original(p, -2.0 * (p + p / (p - 1.0)), s).unwrap();
            for xi in xis {
                let a = h.tau_prime_from_t(xi).unwrap();
                let b = h.tau_prime(xi);
                assert!((a - b).abs() < 1e-10 * b.abs(), "p {p} s {s} xi {xi}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn quadrature_matches_closed_form_near_the_extreme() {
        let p = 3.0;
        let q = 1.5;
        let closed = hildebrand_original(p, -2.0 * (p + q), 1.0).unwrap();
        let near = hildebrand_original(p, -2.0 * (p + q) * (1.0 - 1e-9), 1.0).unwrap();
        for xi in [0.5, 2.0, 8.0] {
            let a = closed.tau(xi).unwrap();
            let b = near.tau(xi).unwrap();
            assert!((a - b).abs() < 1e-5, "xi {xi}: {a} vs {b}");
        }
    }

    #[test]
    fn residuals_vanish() {
        let p = 3.0;
        let lo = -2.0 * (p + 1.5);
        for (c, s, xi) in [(lo, 1.0, 0.4), (lo, 1.0, 5.0), (lo, -1.0, -0.7), (-2.0, 1.0, 2.0), (0.0, 1.0, 1.5)] {
            let r = ode_residual(p, c, s, xi).unwrap();
            assert!(r < 1e-6, "c {c} s {s} xi {xi}: {r}");
        }
    }

    #[test]
    fn cone_coordinate_recovers_t() {
        let h = hildebrand_original(3.0, -2.0, 1.0).unwrap();
        let xi = 2.0;
        let r = h.position(xi, 0.7).unwrap();
        let x = h.cone().map * r;
        let ratio = x[1] / (x[0].powf(1.0 / 3.0) * x[2].powf(1.0 / 1.5));
        assert!((ratio - h.t(xi).unwrap()).abs() < 1e-12);
    }
}
