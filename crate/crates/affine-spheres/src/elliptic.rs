//! Weierstrass ℘, ℘′, ζ, σ over real rectangular lattices (and their two
//! degenerate limits), Jacobi sn, inverse ℘ on the real lines of the
//! lattice, and complete elliptic integrals.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numerics::{cubic_roots, Dual2};
use crate::{Error, Result};

/// Pole guard radius as a fraction of the real half-period (or of the
/// finite half-period for the hyperbolic limit).
pub const POLE_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lattice {
    /// Three distinct real roots: rectangular lattice spanned by 2ω₁, 2ω₃.
    Rectangular { nome: f64, eta1: f64, omega3_im: f64, ln_theta1p0: f64 },
    /// e₂ = e₃ = −a: ℘(z) = −a + 3a / sin²(√(3a) z).
    Trigonometric { a: f64 },
    /// e₁ = e₂ = a: ℘(z) = a + 3a / sinh²(√(3a) z), ω₁ = ∞.
    Hyperbolic { a: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticContext {
    pub g2: f64,
    pub g3: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub omega1: f64,
    pub k2: f64,
    pub degenerate: bool,
    pub lattice: Lattice,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WpValues {
    pub wp: Complex64,
    pub wp_prime: Complex64,
    pub zeta: Complex64,
    pub ln_sigma: Complex64,
}

impl WpValues {
    pub fn sigma(&self) -> Complex64 {
        self.ln_sigma.exp()
    }
}

/// Arithmetic–geometric mean of two positive reals.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 1e-16 * an {
            return an;
        }
        a = an;
        b = bn;
    }
    a
}

/// Complete elliptic integral of the first kind, parameter m = k².
pub fn ellip_k(m: f64) -> f64 {
    if m >= 1.0 {
        return f64::INFINITY;
    }
    PI / (2.0 * agm(1.0, (1.0 - m).sqrt()))
}

/// Carlson's symmetric integral R_F(x, y, z) by duplication.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..100 {
        let mu = (x + y + z) / 3.0;
        let dx = 1.0 - x / mu;
        let dy = 1.0 - y / mu;
        let dz = 1.0 - z / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-4 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / mu.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
    1.0 / ((x + y + z) / 3.0).sqrt()
}

/// Jacobi sn(u | m) for real u, 0 ≤ m ≤ 1, by descending Landen/AGM.
pub fn jacobi_sn(u: f64, m: f64) -> f64 {
    if m <= 0.0 {
        return u.sin();
    }
    if m >= 1.0 {
        return u.tanh();
    }
    let mut a = vec![1.0f64];
    let mut c = vec![m.sqrt()];
    let mut b = (1.0 - m).sqrt();
    while c.last().unwrap().abs() > 1e-16 && a.len() < 40 {
        let an = *a.last().unwrap();
        let cn = 0.5 * (an - b);
        let nb = (an * b).sqrt();
        a.push(0.5 * (an + b));
        c.push(cn);
        b = nb;
    }
    let n = a.len() - 1;
    let mut phi = 2f64.powi(n as i32) * a[n] * u;
    for k in (1..=n).rev() {
        phi = 0.5 * (phi + (c[k] / a[k] * phi.sin()).asin());
    }
    phi.sin()
}

/// Roots of 4z³ − g₂z − g₃, descending.
fn lattice_roots(g2: f64, g3: f64) -> Result<([f64; 3], bool)> {
    let disc = g2 * g2 * g2 - 27.0 * g3 * g3;
    let scale = (g2 * g2 * g2).abs() + 27.0 * g3 * g3;
    let complex = || Error::ComplexLattice { g2, g3, discriminant: disc };
    if disc < -1e-12 * scale {
        return Err(complex());
    }
    let roots = cubic_roots(4.0, 0.0, -g2, -g3)?;
    if roots.triple_root {
        return Err(Error::InvalidParameter("g2 = g3 = 0 has no finite period lattice".into()));
    }
    let r = roots.real().ok_or_else(complex)?;
    Ok((r, roots.double_root))
}

pub fn make_context(g2: f64, g3: f64) -> Result<EllipticContext> {
    let ([e1, e2, e3], double) = lattice_roots(g2, g3)?;
    let base = EllipticContext {
        g2,
        g3,
        e1,
        e2,
        e3,
        omega1: 0.0,
        k2: 0.0,
        degenerate: double,
        lattice: Lattice::Trigonometric { a: 0.0 },
    };
    if double {
        if (e2 - e3).abs() <= (e1 - e2).abs() {
            let a = e1 / 2.0;
            let s = (3.0 * a).sqrt();
            return Ok(EllipticContext {
                omega1: PI / (2.0 * s),
                k2: 0.0,
                lattice: Lattice::Trigonometric { a },
                ..base
            });
        }
        let a = -e3 / 2.0;
        return Ok(EllipticContext { omega1: f64::INFINITY, k2: 1.0, lattice: Lattice::Hyperbolic { a }, ..base });
    }
    let k2 = (e2 - e3) / (e1 - e3);
    let root = (e1 - e3).sqrt();
    let kk = ellip_k(k2);
    let kp = ellip_k(1.0 - k2);
    let omega1 = kk / root;
    let omega3_im = kp / root;
    let nome = (-PI * kp / kk).exp();
    let lnq = nome.ln();
    let (mut d1, mut d3) = (0.0, 0.0);
    for n in 0..200 {
        let m = 2 * n + 1;
        let w = (lnq * (n as f64 + 0.5).powi(2)).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let t1 = sign * w * m as f64;
        d1 += t1;
        d3 -= t1 * (m * m) as f64;
        if w < 1e-18 * d1.abs() {
            break;
        }
    }
    let (d1, d3) = (2.0 * d1, 2.0 * d3);
    let eta1 = -(PI * PI / (12.0 * omega1)) * d3 / d1;
    Ok(EllipticContext {
        omega1,
        k2,
        lattice: Lattice::Rectangular { nome, eta1, omega3_im, ln_theta1p0: d1.ln() },
        ..base
    })
}

impl EllipticContext {
    /// Imaginary part of the second half-period (∞ for the trigonometric limit).
    pub fn omega3_im(&self) -> f64 {
        match self.lattice {
            Lattice::Rectangular { omega3_im, .. } => omega3_im,
            Lattice::Trigonometric { .. } => f64::INFINITY,
            Lattice::Hyperbolic { a } => PI / (2.0 * (3.0 * a).sqrt()),
        }
    }

    pub fn omega3(&self) -> Complex64 {
        Complex64::new(0.0, self.omega3_im())
    }

    pub fn eta1(&self) -> f64 {
        match self.lattice {
            Lattice::Rectangular { eta1, .. } => eta1,
            // ζ(ω₁) for the closed forms: aω₁ + √(3a)·cot(π/2) = aω₁
            Lattice::Trigonometric { a } => a * self.omega1,
            Lattice::Hyperbolic { .. } => f64::NAN,
        }
    }

    fn guard_radius(&self) -> f64 {
        let scale = if self.omega1.is_finite() { self.omega1 } else { self.omega3_im() };
        POLE_GUARD * scale
    }

    fn check_pole(&self, z: Complex64) -> Result<()> {
        let near = |period: f64, v: f64| (v - period * (v / period).round()).abs();
        let dre = if self.omega1.is_finite() { near(2.0 * self.omega1, z.re) } else { z.re.abs() };
        let w3 = self.omega3_im();
        let dim = if w3.is_finite() { near(2.0 * w3, z.im) } else { z.im.abs() };
        if dre.hypot(dim) < self.guard_radius() {
            return Err(Error::PoleProximity { re: z.re, im: z.im });
        }
        Ok(())
    }

    /// ℘, ℘′, ζ and ln σ at a complex point.
    pub fn wp_eval(&self, z: Complex64) -> Result<WpValues> {
        self.check_pole(z)?;
        Ok(self.eval_unguarded(z))
    }

    /// ln σ, which stays finite arbitrarily close to the lattice points
    /// (−∞ exactly on them).
    pub fn ln_sigma(&self, z: Complex64) -> Complex64 {
        self.eval_unguarded(z).ln_sigma
    }

    fn eval_unguarded(&self, z: Complex64) -> WpValues {
        match self.lattice {
            Lattice::Trigonometric { a } => {
                let s = (3.0 * a).sqrt();
                let (sn, cs) = ((s * z).sin(), (s * z).cos());
                WpValues {
                    wp: -a + 3.0 * a / (sn * sn),
                    wp_prime: -6.0 * a * s * cs / (sn * sn * sn),
                    zeta: a * z + s * cs / sn,
                    ln_sigma: a * z * z / 2.0 + (sn / s).ln(),
                }
            }
            Lattice::Hyperbolic { a } => {
                let s = (3.0 * a).sqrt();
                let (sn, cs) = ((s * z).sinh(), (s * z).cosh());
                WpValues {
                    wp: a + 3.0 * a / (sn * sn),
                    wp_prime: -6.0 * a * s * cs / (sn * sn * sn),
                    zeta: -a * z + s * cs / sn,
                    ln_sigma: -a * z * z / 2.0 + (sn / s).ln(),
                }
            }
            Lattice::Rectangular { nome, eta1, ln_theta1p0, .. } => {
                let w1 = self.omega1;
                let n = (z.re / (2.0 * w1)).round();
                let zr = z - 2.0 * n * w1;
                let v = PI * zr / (2.0 * w1);
                let lnq = nome.ln();
                let (mut t0, mut t1, mut t2, mut t3) =
                    (Complex64::default(), Complex64::default(), Complex64::default(), Complex64::default());
                for k in 0..200 {
                    let m = (2 * k + 1) as f64;
                    let w = (lnq * (k as f64 + 0.5).powi(2)).exp() * if k % 2 == 0 { 1.0 } else { -1.0 };
                    let (sn, cs) = ((m * v).sin(), (m * v).cos());
                    t0 += w * sn;
                    t1 += w * m * cs;
                    t2 -= w * m * m * sn;
                    t3 -= w * m * m * m * cs;
                    if w.abs() * (m * v.im.abs()).exp() * m * m * m < 1e-18 * t1.norm().max(1e-300) && k > 1 {
                        break;
                    }
                }
                let a = t1 / t0;
                let b = t2 / t0;
                let c3 = t3 / t0;
                let kap = PI / (2.0 * w1);
                let wp = -eta1 / w1 - kap * kap * (b - a * a);
                let wp_prime = -kap * kap * kap * (c3 - 3.0 * a * b + 2.0 * a * a * a);
                let zeta_r = eta1 * zr / w1 + kap * a;
                let ln_sigma_r = (2.0 * w1 / PI).ln() + eta1 * zr * zr / (2.0 * w1) + (2.0 * t0).ln() - ln_theta1p0;
                // quasi-periodicity back to z = zr + 2nω₁
                let zeta = zeta_r + 2.0 * n * eta1;
                let ln_sigma = ln_sigma_r + Complex64::new(0.0, PI * n) + 2.0 * eta1 * n * (zr + n * w1);
                WpValues { wp, wp_prime, zeta, ln_sigma }
            }
        }
    }

    pub fn wp(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.wp_eval(z)?.wp)
    }

    /// ℘ through the Jacobi sn relation, for real arguments.
    pub fn wp_via_sn(&self, x: f64) -> f64 {
        let d = self.e1 - self.e3;
        let sn = jacobi_sn(d.sqrt() * x, self.k2);
        d / (sn * sn) + self.e3
    }

    /// ℘ applied to a jet.
    pub fn wp_jet(&self, z: Dual2) -> Result<Dual2> {
        let w = self.wp_eval(z.v)?;
        Ok(z.compose(w.wp, w.wp_prime, 6.0 * w.wp * w.wp - self.g2 / 2.0))
    }

    /// ζ applied to a jet.
    pub fn zeta_jet(&self, z: Dual2) -> Result<Dual2> {
        let w = self.wp_eval(z.v)?;
        Ok(z.compose(w.zeta, -w.wp, -w.wp_prime))
    }

    /// σ applied to a jet; regular at the zeros of σ.
    pub fn sigma_jet(&self, z: Dual2) -> Dual2 {
        let w = self.eval_unguarded(z.v);
        let sigma = w.ln_sigma.exp();
        z.compose(sigma, sigma * w.zeta, sigma * (w.zeta * w.zeta - w.wp))
    }

    /// ln σ applied to a jet.
    pub fn ln_sigma_jet(&self, z: Dual2) -> Result<Dual2> {
        let w = self.wp_eval(z.v)?;
        Ok(z.compose(w.ln_sigma, w.zeta, -w.wp))
    }

    /// A preimage of `w` under ℘ with the requested sign of ℘′, on the real
    /// axis (w ≥ e₁) or on the line ω₃ + ℝ (e₃ ≤ w ≤ e₂), reduced to the
    /// fundamental rectangle.
    pub fn wp_inverse(&self, w: f64, sign_wp_prime: f64) -> Result<Complex64> {
        let (e1, e2, e3) = (self.e1, self.e2, self.e3);
        let tol = 1e-12 * (1.0 + e1.abs());
        let want_negative = sign_wp_prime < 0.0;
        if w >= e1 - tol {
            let w = w.max(e1);
            let x = match self.lattice {
                Lattice::Rectangular { .. } => carlson_rf(w - e1, w - e2, w - e3),
                Lattice::Trigonometric { a } => {
                    let s = (3.0 * a).sqrt();
                    (3.0 * a / (w + a)).sqrt().min(1.0).asin() / s
                }
                Lattice::Hyperbolic { a } => {
                    if w <= a {
                        return Err(Error::ValueOutOfRealRange { w });
                    }
                    let s = (3.0 * a).sqrt();
                    (3.0 * a / (w - a)).sqrt().asinh() / s
                }
            };
            // ℘′ < 0 on (0, ω₁)
            let z = if want_negative { x } else { 2.0 * self.omega1 - x };
            if !z.is_finite() {
                return Err(Error::ValueOutOfRealRange { w });
            }
            return Ok(Complex64::new(z, 0.0));
        }
        if w >= e3 - tol && w <= e2 + tol {
            let w3 = self.omega3_im();
            let x = match self.lattice {
                Lattice::Rectangular { .. } => {
                    let wd = (w - e3).max(1e-300);
                    let big = e3 + (e1 - e3) * (e2 - e3) / wd;
                    carlson_rf(big - e1, big - e2, big - e3)
                }
                Lattice::Hyperbolic { a } => {
                    let s = (3.0 * a).sqrt();
                    (3.0 * a / (a - w)).sqrt().max(1.0).acosh() / s
                }
                Lattice::Trigonometric { .. } => return Err(Error::ValueOutOfRealRange { w }),
            };
            let cand = Complex64::new(x, w3);
            let d = self.wp_eval(cand)?.wp_prime.re;
            if (d < 0.0) == want_negative || d == 0.0 {
                return Ok(cand);
            }
            let other = if self.omega1.is_finite() { 2.0 * self.omega1 - x } else { -x };
            return Ok(Complex64::new(other, w3));
        }
        Err(Error::ValueOutOfRealRange { w })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx40() -> EllipticContext {
        make_context(4.0, 0.0).unwrap()
    }

    #[test]
    fn lemniscatic_roots_and_modulus() {
        let c = ctx40();
        assert!((c.e1 - 1.0).abs() < 1e-14 && c.e2.abs() < 1e-14 && (c.e3 + 1.0).abs() < 1e-14);
        assert!((c.k2 - 0.5).abs() < 1e-14);
        assert!(!c.degenerate);
    }

    #[test]
    fn half_period_value() {
        let c = ctx40();
        let w = c.wp_eval(Complex64::new(c.omega1, 0.0)).unwrap();
        assert!((w.wp.re - 1.0).abs() < 1e-12);
        assert!(w.wp_prime.norm() < 1e-10);
    }

    #[test]
    fn degenerate_trigonometric() {
        let c = make_context(0.75, 0.125).unwrap();
        assert!(c.degenerate);
        assert_eq!(c.k2, 0.0);
        assert!((c.e1 - 0.5).abs() < 1e-14 && (c.e2 + 0.25).abs() < 1e-14);
        assert!((c.omega1 - PI / 3f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn sn_limits() {
        for u in [0.1, 0.7, 2.3] {
            assert!((jacobi_sn(u, 0.0) - u.sin()).abs() < 1e-15);
            assert!((jacobi_sn(u, 1.0) - u.tanh()).abs() < 1e-15);
        }
        assert_eq!(jacobi_sn(0.0, 0.3), 0.0);
    }

    #[test]
    fn inverse_round_trip() {
        let c = ctx40();
        let a = c.wp_inverse(2.0, -1.0).unwrap();
        let w = c.wp_eval(a).unwrap();
        assert!((w.wp.re - 2.0).abs() < 1e-12 && w.wp_prime.re < 0.0);
        assert!(a.re > 0.0 && a.re < c.omega1);
        let m = c.wp_inverse(-0.5, -1.0).unwrap();
        let w = c.wp_eval(m).unwrap();
        assert!((w.wp - Complex64::new(-0.5, 0.0)).norm() < 1e-12 && w.wp_prime.re < 0.0);
        assert!(c.wp_inverse(0.5, -1.0).is_err());
    }

    #[test]
    fn pole_guard() {
        let c = ctx40();
        assert!(matches!(c.wp_eval(Complex64::new(1e-9, 0.0)), Err(Error::PoleProximity { .. })));
        assert!(c.wp_eval(Complex64::new(2.0 * c.omega1 + 1e-9, 0.0)).is_err());
    }

    #[test]
    fn complex_lattice_rejected() {
        assert!(matches!(make_context(-1.0, 1.0), Err(Error::ComplexLattice { .. })));
    }
}
