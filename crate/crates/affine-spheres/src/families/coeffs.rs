use num_complex::Complex64;

use crate::elliptic::{make_context, EllipticContext, Lattice};
use crate::numerics::cubic_roots;
use crate::{Error, Result};

/// Conjugate exponent q with 1/p + 1/q = 1.
pub fn conjugate(p: f64) -> Result<f64> {
    if !(p.is_finite() && p >= 2.0) {
        return Err(Error::InvalidParameter(format!("p must lie in [2, inf), got {p}")));
    }
    Ok(p / (p - 1.0))
}

pub(crate) fn check_pq(p: f64, q: f64) -> Result<()> {
    let expected = conjugate(p)?;
    if (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("q = {q} is not conjugate to p = {p} (expected {expected})")));
    }
    Ok(())
}

/// Bookkeeping for the cubic c²/(4(p+q)) + (ξ−1)(ξ+p)(ξ+q) = ξ³ + 3b₁ξ² + 3b₂ξ + b₃
/// and the Weierstrass lattice it induces through ξ = 4℘ − b₁.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub p: f64,
    pub q: f64,
    pub c: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub g2: f64,
    pub g3: f64,
    pub ctx: EllipticContext,
    /// Preimages with ℘(aᵢ) = (b₁ − {p, q, −1}ᵢ)/4 and ℘′(aᵢ) ≤ 0. `None`
    /// where the value sits at a lattice point of a degenerate lattice.
    pub a: [Option<Complex64>; 3],
    /// Coefficients of P(ξ) = (ξ−1)(ξ+p)(ξ+q), highest degree first.
    pub poly: [f64; 4],
}

impl CoefficientSet {
    /// Values ℘(aᵢ) prescribed by the root conditions.
    pub fn a_targets(&self) -> [f64; 3] {
        [(self.b1 - self.p) / 4.0, (self.b1 - self.q) / 4.0, (self.b1 + 1.0) / 4.0]
    }

    pub fn a_root(&self, i: usize) -> Result<Complex64> {
        self.a[i].ok_or_else(|| {
            Error::InvalidParameter(format!("root a{} is not defined for p = {}, c = {}", i + 1, self.p, self.c))
        })
    }

    /// Largest real root of ξ³ + 3b₁ξ² + 3b₂ξ + b₃.
    pub fn largest_xi_root(&self) -> f64 {
        4.0 * self.ctx.e1 - self.b1
    }

    /// ξ³ + 3b₁ξ² + 3b₂ξ + b₃ at ξ.
    pub fn shifted_cubic(&self, xi: f64) -> f64 {
        ((xi + 3.0 * self.b1) * xi + 3.0 * self.b2) * xi + self.b3
    }

    /// Additive constant k in e^ψ = ½(℘(ξ₂+ω₁) + k).
    pub fn metric_shift(&self) -> f64 {
        (2.0 * (self.p + self.q - 1.0) - 3.0 * self.b1) / 12.0
    }

    /// Cubic coefficient of the σ-quotient surfaces for the sign s.
    pub fn cubic_coefficient(&self, s: f64) -> Complex64 {
        let p = self.p;
        Complex64::new(
            s * self.c * (p - 1.0).sqrt() / (32.0 * p),
            -(p - 2.0) * (2.0 * p - 1.0) * (p + 1.0) / (2.0 * (12.0 * (p - 1.0)).powf(1.5)),
        )
    }
}

pub fn shorthand_coeffs(p: f64, q: f64, c: f64) -> Result<CoefficientSet> {
    check_pq(p, q)?;
    if !c.is_finite() {
        return Err(Error::InvalidParameter(format!("c must be finite, got {c}")));
    }
    let b1 = (p + q - 1.0) / 3.0;
    let b2 = (p * q - p - q) / 3.0;
    let b3 = c * c / (4.0 * (p + q)) - p * q;
    let g2 = 0.75 * (b1 * b1 - b2);
    let g3 = (3.0 * b1 * b2 - 2.0 * b1.powi(3) - b3) / 16.0;
    let ctx = make_context(g2, g3)?;
    let poly = [1.0, p + q - 1.0, p * q - p - q, -p * q];
    let mut set = CoefficientSet { p, q, c, b1, b2, b3, g2, g3, ctx, a: [None; 3], poly };
    let targets = set.a_targets();
    for (slot, w) in set.a.iter_mut().zip(targets) {
        *slot = set.ctx.wp_inverse(w, -1.0).ok();
    }
    if let (Lattice::Rectangular { .. }, true) = (set.ctx.lattice, c != 0.0) {
        set.a[2] = Some(set.root_above_e1(set.a3_gap())?);
    }
    Ok(set)
}

impl CoefficientSet {
    /// ℘(a₃) − e₁ = (1 − ξ_r)/4 without cancellation: ξ_r − 1 = δ solves
    /// δ(1+p+δ)(1+q+δ) = −c²/(4(p+q)), polished by Newton from the lattice root.
    pub fn a3_gap(&self) -> f64 {
        let (p, q) = (self.p, self.q);
        let k = self.c * self.c / (4.0 * (p + q));
        let mut d = (self.largest_xi_root() - 1.0).min(0.0);
        for _ in 0..8 {
            let f = d * (1.0 + p + d) * (1.0 + q + d) + k;
            let df = (1.0 + p + d) * (1.0 + q + d) + d * (2.0 + p + q + 2.0 * d);
            d -= f / df;
        }
        -d / 4.0
    }

    /// The preimage ω₁ − ε of e₁ + gap with ℘′ < 0, where
    /// ℘(ε) = e₁ + (e₁−e₂)(e₁−e₃)/gap; accurate for arbitrarily small gaps.
    pub(crate) fn root_above_e1(&self, gap: f64) -> Result<Complex64> {
        let ctx = &self.ctx;
        if !(gap > 0.0) {
            return Err(Error::InvalidParameter(format!("root coincides with the half period at c = {}", self.c)));
        }
        let eps = ctx.wp_inverse(ctx.e1 + (ctx.e1 - ctx.e2) * (ctx.e1 - ctx.e3) / gap, -1.0)?;
        Ok(Complex64::new(ctx.omega1, 0.0) - eps)
    }
}

/// Real roots of ξ³ + 3b₁ξ² + 3b₂ξ + b₃, descending.
pub fn xi_roots(set: &CoefficientSet) -> Result<[f64; 3]> {
    let r = cubic_roots(1.0, 3.0 * set.b1, 3.0 * set.b2, set.b3)?;
    r.real().ok_or(Error::ComplexLattice {
        g2: set.g2,
        g3: set.g3,
        discriminant: set.g2.powi(3) - 27.0 * set.g3 * set.g3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2_c0_is_degenerate() {
        let s = shorthand_coeffs(2.0, 2.0, 0.0).unwrap();
        assert_eq!((s.b1, s.b2, s.b3), (1.0, 0.0, -4.0));
        assert!((s.g2 - 0.75).abs() < 1e-15 && (s.g3 - 0.125).abs() < 1e-15);
        assert!(s.ctx.degenerate);
    }

    #[test]
    fn p3_c1_values() {
        let s = shorthand_coeffs(3.0, 1.5, 1.0).unwrap();
        assert!((s.b1 - 7.0 / 6.0).abs() < 1e-15);
        assert!(s.b2.abs() < 1e-15);
        assert!((s.b3 - (1.0 / 18.0 - 4.5)).abs() < 1e-14);
        assert!((s.g2 - 49.0 / 48.0).abs() < 1e-14);
        // g3 = (−2b₁³ − b₃)/16 by hand
        let g3 = (-2.0 * (7.0f64 / 6.0).powi(3) - (1.0 / 18.0 - 4.5)) / 16.0;
        assert!((s.g3 - g3).abs() < 1e-15 && (s.g3 - 0.079282).abs() < 1e-6);
    }

    #[test]
    fn xi_roots_map_to_lattice_roots() {
        for &(p, c) in &[(3.0, -1.0), (2.5, -2.0), (5.0, -0.3)] {
            let s = shorthand_coeffs(p, conjugate(p).unwrap(), c).unwrap();
            let xs = xi_roots(&s).unwrap();
            let es = [s.ctx.e1, s.ctx.e2, s.ctx.e3];
            for (x, e) in xs.iter().zip(es) {
                assert!(((x + s.b1) / 4.0 - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn expansion_matches_product_form() {
        let (p, c) = (3.7, -2.2);
        let q = conjugate(p).unwrap();
        let s = shorthand_coeffs(p, q, c).unwrap();
        for xi in [-3.0, -0.4, 0.0, 1.3, 5.0] {
            let direct = c * c / (4.0 * (p + q)) + (xi - 1.0) * (xi + p) * (xi + q);
            assert!((s.shifted_cubic(xi) - direct).abs() < 1e-12 * (1.0 + direct.abs()));
        }
    }

    #[test]
    fn a_roots_satisfy_their_equations() {
        let s = shorthand_coeffs(3.0, 1.5, -1.0).unwrap();
        for (i, w) in s.a_targets().iter().enumerate() {
            let a = s.a_root(i).unwrap();
            let v = s.ctx.wp_eval(a).unwrap();
            assert!((v.wp - w).norm() < 1e-10, "a{} wp {} vs {}", i + 1, v.wp, w);
            assert!(v.wp_prime.re <= 1e-9 && v.wp_prime.im.abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_bad_pairs() {
        assert!(shorthand_coeffs(3.0, 2.0, -1.0).is_err());
        assert!(conjugate(1.5).is_err());
    }
}
