//! Affine spheres built from Weierstrass σ-quotients in the isothermal
//! chart (ξ₂, y₃): the simplified surfaces for −2(p+q) < c < 0, their
//! associated family, and the c = 0 square-root forms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::blaschke::invariants_isothermal;
use crate::elliptic::{EllipticContext, Lattice};
use crate::numerics::{Dual2, Jet2, Vec3};
use crate::surface::Surface;
use crate::{Error, Result};

use super::coeffs::{conjugate, shorthand_coeffs, CoefficientSet};
use super::cones::{swap_map, ConeEmbedding, ConeSpec};
use super::coth::{coth_surface, CothFamily, CothSurface, CothWhich};
use super::dual_xy;

/// Family angles with |cos 3t| below this are refused: the branch sign
/// s = −sgn(cos 3t) is undefined there.
pub const BRANCH_GUARD: f64 = 1e-9;

fn y_rates(p: f64) -> [f64; 3] {
    let d = 2.0 * (3.0 * (p - 1.0)).sqrt();
    [(2.0 * p - 1.0) / d, -(p + 1.0) / d, -(p - 2.0) / d]
}

fn prefactors(p: f64, c: f64) -> [f64; 3] {
    [1.0 / (3.0 * p), 1.0 / (3.0 * p), 3f64.sqrt() * (p - 1.0) * c / 2.0]
}

fn is_coth_limit(p: f64, q: f64, c: f64) -> bool {
    (c + 2.0 * (p + q)).abs() <= 1e-12 * (p + q)
}

/// Three components C·σ(ξ₂+ω₁−s·m)σ(ω₁)/(σ(ξ₂+ω₁)σ(ω₁−s·m))·e^{sζ(m)ξ₂ + f·y₃},
/// evaluated in log form.
#[derive(Debug, Clone)]
pub struct SigmaComponents {
    ctx: EllipticContext,
    consts: [Complex64; 3],
    shifts: [Complex64; 3],
    slopes: [Complex64; 3],
    y_rates: [f64; 3],
}

impl SigmaComponents {
    pub fn new(
        ctx: &EllipticContext,
        prefactors: [f64; 3],
        roots: [Complex64; 3],
        s: f64,
        y_rates: [f64; 3],
    ) -> Result<Self> {
        let w1 = Complex64::new(ctx.omega1, 0.0);
        let ln_sigma_w1 = ctx.wp_eval(w1)?.ln_sigma;
        let mut consts = [Complex64::default(); 3];
        let mut shifts = [Complex64::default(); 3];
        let mut slopes = [Complex64::default(); 3];
        for i in 0..3 {
            let shift = s * roots[i];
            let at_root = ctx.wp_eval(roots[i])?;
            consts[i] = Complex64::new(prefactors[i], 0.0).ln() + ln_sigma_w1 - ctx.ln_sigma(w1 - shift);
            shifts[i] = shift;
            slopes[i] = s * at_root.zeta;
        }
        Ok(Self { ctx: *ctx, consts, shifts, slopes, y_rates })
    }

    fn check_domain(&self, xi2: f64) -> Result<()> {
        if !(xi2.abs() < self.ctx.omega1) {
            return Err(Error::DomainViolation(format!("xi2 = {xi2} outside (-{w}, {w})", w = self.ctx.omega1)));
        }
        Ok(())
    }

    pub fn duals(&self, xi2: f64, y3: f64) -> Result<[Dual2; 3]> {
        self.check_domain(xi2)?;
        let (dx, dy) = dual_xy(xi2, y3);
        let big_x = dx + self.ctx.omega1;
        let ln_den = self.ctx.ln_sigma_jet(big_x)?;
        let mut out = [Dual2::constant(0.0); 3];
        for (i, slot) in out.iter_mut().enumerate() {
            let num = self.ctx.sigma_jet(big_x - self.shifts[i]);
            *slot = num * (dx * self.slopes[i] + dy * self.y_rates[i] + self.consts[i] - ln_den).exp();
        }
        Ok(out)
    }

    pub fn jet(&self, xi2: f64, y3: f64) -> Result<Jet2> {
        Jet2::from_components(&self.duals(xi2, y3)?, (xi2, y3))
    }

    /// Components times σ(X) at y₃ = 0, X = ξ₂ + ω₁; finite at X = 0 and 2ω₁.
    fn regularized(&self, big_x: f64) -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        for (i, slot) in out.iter_mut().enumerate() {
            let z = Complex64::new(big_x, 0.0) - self.shifts[i];
            let v = self.consts[i] + self.ctx.wp_eval(z)?.ln_sigma + self.slopes[i] * (big_x - self.ctx.omega1);
            *slot = v.exp().re;
        }
        Ok(out)
    }
}

/// r₃ / (r₁^{1/p} r₂^{1/q}); constant along lines of fixed ξ₂.
fn ratio(v: [f64; 3], p: f64, q: f64) -> Result<f64> {
    if !(v[0] > 0.0 && v[1] > 0.0) {
        return Err(Error::DomainViolation("first two components must be positive".into()));
    }
    Ok(v[2] / (v[0].powf(1.0 / p) * v[1].powf(1.0 / q)))
}

/// Case-4 cone whose opening is fixed by the limits of r₃/(r₁^{1/p} r₂^{1/q}) at
/// the two chart edges ξ₂ → ±ω₁.
fn sigma_cone(comps: &SigmaComponents, p: f64, q: f64) -> Result<ConeEmbedding> {
    let w1 = comps.ctx.omega1;
    let a = ratio(comps.regularized(0.0)?, p, q)?;
    let b = ratio(comps.regularized(2.0 * w1)?, p, q)?;
    let (lo, hi) = (a.min(b), a.max(b));
    if !(lo < 0.0 && hi > 0.0) {
        return Err(Error::DomainViolation(format!("edge ratios {lo}, {hi} do not straddle zero")));
    }
    let (scale, alpha) = if hi >= -lo { (1.0 / hi, -lo / hi) } else { (1.0 / lo, hi / -lo) };
    Ok(ConeEmbedding { spec: ConeSpec { case_id: 4, p, q, alpha, beta: 1.0 }, map: swap_map(scale) })
}

#[derive(Debug, Clone)]
enum GeneralKind {
    Sigma(Box<SigmaComponents>),
    Coth(CothSurface),
}

/// Simplified σ-quotient affine sphere for −2(p+q) < c < 0 and branch s,
/// or the coth display at c = −2(p+q).
#[derive(Debug, Clone)]
pub struct GeneralSurface {
    pub coeffs: CoefficientSet,
    pub s: f64,
    kind: GeneralKind,
}

pub fn general_surface(p: f64, c: f64, s: f64) -> Result<GeneralSurface> {
    let q = conjugate(p)?;
    if s != 1.0 && s != -1.0 {
        return Err(Error::InvalidParameter(format!("s must be +1 or -1, got {s}")));
    }
    if !(c < 0.0 && c >= -2.0 * (p + q) * (1.0 + 1e-12)) {
        let hint = if c == 0.0 { " (use the c = 0 surface)" } else { "" };
        return Err(Error::InvalidParameter(format!("c must lie in [-2(p+q), 0), got {c}{hint}")));
    }
    let coeffs = shorthand_coeffs(p, q, c)?;
    if is_coth_limit(p, q, c) {
        let which = if s > 0.0 { CothWhich::Case5 } else { CothWhich::Case3 };
        return Ok(GeneralSurface { coeffs, s, kind: GeneralKind::Coth(coth_surface(p, which)?) });
    }
    let roots = [coeffs.a_root(0)?, coeffs.a_root(1)?, coeffs.a_root(2)?];
    let comps = SigmaComponents::new(&coeffs.ctx, prefactors(p, c), roots, s, y_rates(p))?;
    Ok(GeneralSurface { coeffs, s, kind: GeneralKind::Sigma(Box::new(comps)) })
}

impl GeneralSurface {
    /// Chart interval of ξ₂ covering the complete surface.
    pub fn xi2_range(&self) -> (f64, f64) {
        match &self.kind {
            GeneralKind::Sigma(c) => (-c.ctx.omega1, c.ctx.omega1),
            GeneralKind::Coth(_) => (f64::NEG_INFINITY, 0.0),
        }
    }

    /// e^ψ = ½(℘(ξ₂+ω₁) + (2(p+q−1) − 3b₁)/12).
    pub fn expected_conformal(&self, xi2: f64) -> Result<f64> {
        match &self.kind {
            GeneralKind::Sigma(c) => {
                let wp = c.ctx.wp(Complex64::new(xi2 + c.ctx.omega1, 0.0))?;
                Ok(0.5 * (wp.re + self.coeffs.metric_shift()))
            }
            GeneralKind::Coth(c) => Ok(c.expected_conformal(xi2)),
        }
    }

    pub fn cubic_coefficient(&self) -> Complex64 {
        match &self.kind {
            GeneralKind::Sigma(_) => self.coeffs.cubic_coefficient(self.s),
            GeneralKind::Coth(c) => c.cubic_coefficient(),
        }
    }

    /// Angle t₀ = arg(U)/3 of this member within its associated family.
    pub fn base_angle(&self) -> f64 {
        self.cubic_coefficient().arg() / 3.0
    }

    pub fn cone(&self) -> Result<ConeEmbedding> {
        match &self.kind {
            GeneralKind::Sigma(c) => sigma_cone(c, self.coeffs.p, self.coeffs.q),
            GeneralKind::Coth(c) => Ok(c.cone()),
        }
    }

    pub fn components(&self) -> Option<&SigmaComponents> {
        match &self.kind {
            GeneralKind::Sigma(c) => Some(c),
            GeneralKind::Coth(_) => None,
        }
    }
}

impl Surface for GeneralSurface {
    fn jet(&self, xi2: f64, y3: f64) -> Result<Jet2> {
        match &self.kind {
            GeneralKind::Sigma(c) => c.jet(xi2, y3),
            GeneralKind::Coth(c) => c.jet(xi2, y3),
        }
    }
}

/// The unsimplified square-root form of the σ-surfaces, before the
/// constant diagonal gauge. The square-root branch is the principal one.
pub fn unsimplified_surface(p: f64, c: f64, s: f64) -> Result<impl Fn(f64, f64) -> Result<Vec3>> {
    let q = conjugate(p)?;
    let coeffs = shorthand_coeffs(p, q, c)?;
    let roots = [coeffs.a_root(0)?, coeffs.a_root(1)?, coeffs.a_root(2)?];
    let ctx = coeffs.ctx;
    let rates = y_rates(p);
    let shifts = [p, q, -1.0];
    let b1 = coeffs.b1;
    Ok(move |xi2: f64, y3: f64| -> Result<Vec3> {
        let w1 = Complex64::new(ctx.omega1, 0.0);
        let x = Complex64::new(xi2, 0.0) + w1;
        let wp_x = ctx.wp(x)?;
        let wp_w1 = ctx.wp(w1)?;
        let mut out = Vec3::zeros();
        for i in 0..3 {
            let a = roots[i];
            let lq = ctx.wp_eval(x + a)?.ln_sigma + ctx.wp_eval(w1 - a)?.ln_sigma
                - ctx.wp_eval(x - a)?.ln_sigma
                - ctx.wp_eval(w1 + a)?.ln_sigma;
            let ratio = (4.0 * wp_x - b1 + shifts[i]) / (4.0 * wp_w1 - b1 + shifts[i]);
            let inner = ratio * (-s * lq).exp();
            let v = inner.sqrt() * (s * ctx.wp_eval(a)?.zeta * xi2 + rates[i] * y3).exp();
            if v.im.abs() > 1e-7 * v.norm().max(1e-300) {
                return Err(Error::NonReal { imag: v.im });
            }
            out[i] = v.re;
        }
        Ok(out)
    })
}

#[derive(Debug, Clone)]
enum FamilyKind {
    Sigma { comps: SigmaComponents, scale: f64 },
    Coth(CothFamily),
}

/// Member of the associated family of the σ-surfaces with λ = e^{3it},
/// normalized to affine mean curvature −1.
#[derive(Debug, Clone)]
pub struct FamilySurface {
    pub coeffs: CoefficientSet,
    pub t: f64,
    pub s: f64,
    /// f-exponents of the three components, in component order.
    pub f: [f64; 3],
    /// Preimages mᵢ with ℘′(mᵢ) < 0.
    pub m: [Complex64; 3],
    kind: FamilyKind,
}

/// (f₁, f₂, f₃)(t) for the family with |U| = `u_abs` and H = −1.
pub fn f_functions(p: f64, u_abs: f64, t: f64) -> [f64; 3] {
    let s2 = p * p - p + 1.0;
    let amp = (s2 / (p - 1.0)).sqrt() / 3f64.sqrt();
    let arg = (-u_abs * (3.0 * t).sin() / (s2 / (12.0 * (p - 1.0))).powf(1.5)).clamp(-1.0, 1.0);
    let th = arg.acos() / 3.0;
    [-amp * (PI / 6.0 + th).sin(), -amp * (PI / 3.0 + th).cos(), amp * th.cos()]
}

/// Exponents fᵢ(t) and preimages mᵢ, written as corrections to the base
/// member (fᵢ = f⁰ᵢ, mᵢ = aᵢ at t₀) so that ℘(mᵢ) − e₁ keeps full relative
/// accuracy when it is small.
fn family_roots(coeffs: &CoefficientSet, s: f64, t: f64) -> Result<([f64; 3], [Complex64; 3])> {
    let p = coeffs.p;
    let s2 = p * p - p + 1.0;
    let amp = (s2 / (p - 1.0)).sqrt() / 3f64.sqrt();
    let a = s2 / (4.0 * (p - 1.0));
    let u_abs = coeffs.cubic_coefficient(1.0).norm();
    let kappa0 = (s2 / (12.0 * (p - 1.0))).powf(1.5);
    let period = 2.0 * PI / 3.0;
    let base = coeffs.cubic_coefficient(s).arg() / 3.0;
    let t0 = base + period * ((t - base) / period).round();
    let dsin = 2.0 * (1.5 * (t + t0)).cos() * (1.5 * (t - t0)).sin();
    // fᵢ solve f³ − a f = (amp³/4) cos θ with cos θ = −|U| sin 3t / κ₀
    let db = -amp.powi(3) / 4.0 * u_abs / kappa0 * dsin;
    let f0 = y_rates(p);
    let fs = f_functions(p, u_abs, t);
    let approx = [fs[2], fs[0], fs[1]];
    let targets = coeffs.a_targets();
    let mut f = [0.0; 3];
    let mut m = [Complex64::default(); 3];
    for i in 0..3 {
        let fi = approx[i];
        let df = db / (fi * fi + fi * f0[i] + f0[i] * f0[i] - a);
        f[i] = f0[i] + df;
        let shift = df * (f[i] + f0[i]);
        let rect = matches!(coeffs.ctx.lattice, Lattice::Rectangular { .. });
        let gap = coeffs.a3_gap() - shift;
        m[i] = if i == 2 && rect && gap > 0.0 {
            coeffs.root_above_e1(gap)?
        } else {
            coeffs.ctx.wp_inverse(targets[i] - shift, -1.0)?
        };
    }
    Ok((f, m))
}

pub fn family_surface(p: f64, c: f64, t: f64) -> Result<FamilySurface> {
    let q = conjugate(p)?;
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("family angle must be finite, got {t}")));
    }
    if !(c < 0.0 && c >= -2.0 * (p + q) * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!("c must lie in [-2(p+q), 0), got {c}")));
    }
    let c3 = (3.0 * t).cos();
    if c3.abs() < BRANCH_GUARD {
        return Err(Error::BranchAmbiguity { t });
    }
    let s = -c3.signum();
    let coeffs = shorthand_coeffs(p, q, c)?;
    if is_coth_limit(p, q, c) {
        let fam = CothFamily::new(p, t)?;
        return Ok(FamilySurface {
            coeffs,
            t,
            s,
            f: [0.0; 3],
            m: [Complex64::default(); 3],
            kind: FamilyKind::Coth(fam),
        });
    }
    let (f, m) = family_roots(&coeffs, s, t)?;
    let comps = SigmaComponents::new(&coeffs.ctx, prefactors(p, c), m, s, f)?;
    let probe = invariants_isothermal(&comps.jet(0.0, 0.0)?)?;
    let scale = probe.h.abs().powf(2.0 / 3.0);
    Ok(FamilySurface { coeffs, t, s, f, m, kind: FamilyKind::Sigma { comps, scale } })
}

impl FamilySurface {
    pub fn expected_cubic(&self) -> Complex64 {
        let modulus = match &self.kind {
            FamilyKind::Sigma { .. } => self.coeffs.cubic_coefficient(1.0).norm(),
            FamilyKind::Coth(f) => f.cubic_modulus(),
        };
        Complex64::from_polar(modulus, 3.0 * self.t)
    }

    /// Factor applied to the displayed components so that H = −1.
    pub fn normalization(&self) -> f64 {
        match &self.kind {
            FamilyKind::Sigma { scale, .. } => *scale,
            FamilyKind::Coth(_) => 1.0,
        }
    }
}

impl Surface for FamilySurface {
    fn jet(&self, xi2: f64, y3: f64) -> Result<Jet2> {
        match &self.kind {
            FamilyKind::Sigma { comps, scale } => Ok(comps.jet(xi2, y3)?.scaled(*scale)),
            FamilyKind::Coth(f) => f.jet(xi2, y3),
        }
    }
}

/// The c = 0 surface: Kᵢ √(℘(ξ₂+ω₁) − ℘(aᵢ)) e^{fᵢ y₃} on −ω₁ < ξ₂ < 0, with
/// the third component negated for the negative-t member.
#[derive(Debug, Clone)]
pub struct CZeroSurface {
    pub coeffs: CoefficientSet,
    pub t_sign: f64,
    consts: [f64; 3],
}

pub fn c_zero_surface(p: f64, t_sign: f64) -> Result<CZeroSurface> {
    let q = conjugate(p)?;
    if t_sign != 1.0 && t_sign != -1.0 {
        return Err(Error::InvalidParameter(format!("t_sign must be +1 or -1, got {t_sign}")));
    }
    let coeffs = shorthand_coeffs(p, q, 0.0)?;
    let consts = [
        2.0 / (3.0 * p * (p + 1.0).sqrt()),
        2.0 / (3.0 * (p * q * (2.0 * p - 1.0)).sqrt()),
        t_sign * 2.0 * (3.0 * p * q * (p - 1.0) * (p + 1.0) * (2.0 * p - 1.0)).sqrt(),
    ];
    Ok(CZeroSurface { coeffs, t_sign, consts })
}

impl CZeroSurface {
    pub fn xi2_range(&self) -> (f64, f64) {
        (-self.coeffs.ctx.omega1, 0.0)
    }

    pub fn cubic_coefficient(&self) -> Complex64 {
        self.coeffs.cubic_coefficient(1.0)
    }

    pub fn expected_conformal(&self, xi2: f64) -> Result<f64> {
        let wp = self.coeffs.ctx.wp(Complex64::new(xi2 + self.coeffs.ctx.omega1, 0.0))?;
        Ok(0.5 * (wp.re + self.coeffs.metric_shift()))
    }

    /// Case-4 cone with α = 1: the ratio r₃/(r₁^{1/p} r₂^{1/q}) runs from 0 at
    /// ξ₂ = 0 to ±K₃/(K₁^{1/p}K₂^{1/q}) at ξ₂ → −ω₁.
    pub fn cone(&self) -> ConeEmbedding {
        let (p, q) = (self.coeffs.p, self.coeffs.q);
        let k = &self.consts;
        let hi = k[2].abs() / (k[0].powf(1.0 / p) * k[1].powf(1.0 / q));
        ConeEmbedding { spec: ConeSpec { case_id: 4, p, q, alpha: 1.0, beta: 1.0 }, map: swap_map(1.0 / hi) }
    }
}

impl Surface for CZeroSurface {
    fn jet(&self, xi2: f64, y3: f64) -> Result<Jet2> {
        let ctx = &self.coeffs.ctx;
        if !(xi2 < 0.0 && xi2 > -ctx.omega1) {
            return Err(Error::DomainViolation(format!("xi2 = {xi2} outside (-{}, 0)", ctx.omega1)));
        }
        let (dx, dy) = dual_xy(xi2, y3);
        let wp = ctx.wp_jet(dx + ctx.omega1)?;
        let targets = self.coeffs.a_targets();
        let rates = y_rates(self.coeffs.p);
        let comps: [Dual2; 3] =
            std::array::from_fn(|i| (wp - targets[i]).sqrt() * (dy * rates[i]).exp() * self.consts[i]);
        Jet2::from_components(&comps, (xi2, y3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::invariants_isothermal;
    use crate::numerics::numeric_jet2;

    #[test]
    fn analytic_jets_match_finite_differences() {
        let surf = general_surface(3.0, -1.0, 1.0).unwrap();
        for &(x, y) in &[(-0.5, 0.2), (0.3, -0.4)] {
            let j = surf.jet(x, y).unwrap();
            let f = numeric_jet2(|a, b| surf.position(a, b), (x, y), 1e-3).unwrap();
            assert!(j.rel_diff(&f) < 1e-7, "{}", j.rel_diff(&f));
        }
    }

    #[test]
    fn invariants_match_closed_forms() {
        for &(p, c, s) in &[(3.0, -1.0, 1.0), (3.0, -1.0, -1.0), (2.5, -2.0, 1.0), (5.0, -0.5, -1.0)] {
            let surf = general_surface(p, c, s).unwrap();
            for &(x, y) in &[(-0.4, 0.3), (0.2, -1.0)] {
                let inv = invariants_isothermal(&surf.jet(x, y).unwrap()).unwrap();
                assert!((inv.h + 1.0).abs() < 1e-9, "H {}", inv.h);
                assert!(inv.collinearity_defect < 1e-9);
                let e = surf.expected_conformal(x).unwrap();
                assert!((inv.conformal - e).abs() < 1e-9 * e, "{} vs {}", inv.conformal, e);
                assert!((inv.u - surf.cubic_coefficient()).norm() < 1e-9, "{} vs {}", inv.u, surf.cubic_coefficient());
            }
        }
    }

    #[test]
    fn f_functions_sum_to_zero() {
        for k in 0..20 {
            let f = f_functions(3.0, 0.1, 0.1 * k as f64);
            assert!((f[0] + f[1] + f[2]).abs() < 1e-14);
        }
    }

    #[test]
    fn family_at_base_angle_is_the_general_surface() {
        for s in [1.0, -1.0] {
            let g = general_surface(3.0, -1.0, s).unwrap();
            let fam = family_surface(3.0, -1.0, g.base_angle()).unwrap();
            assert_eq!(fam.s, s);
            assert!((fam.normalization() - 1.0).abs() < 1e-9);
            for &(x, y) in &[(-0.5, 0.2), (0.4, -0.7)] {
                let d = fam.jet(x, y).unwrap().rel_diff(&g.jet(x, y).unwrap());
                assert!(d < 1e-9, "s {s}: {d}");
            }
        }
    }

    #[test]
    fn family_invariants() {
        let base = general_surface(3.0, -1.0, 1.0).unwrap();
        for t in [0.05, 0.3, 0.7, 1.3, 2.0] {
            let fam = family_surface(3.0, -1.0, t).unwrap();
            let inv = invariants_isothermal(&fam.jet(-0.3, 0.4).unwrap()).unwrap();
            assert!((inv.h + 1.0).abs() < 1e-8, "t {t} H {}", inv.h);
            let e = base.expected_conformal(-0.3).unwrap();
            assert!((inv.conformal - e).abs() < 1e-8 * e, "t {t}");
            assert!((inv.u - fam.expected_cubic()).norm() < 1e-8, "t {t}: {} vs {}", inv.u, fam.expected_cubic());
        }
    }

    #[test]
    fn guard_band() {
        let t = PI / 6.0;
        assert!(matches!(family_surface(3.0, -1.0, t), Err(Error::BranchAmbiguity { .. })));
    }

    #[test]
    fn c_zero_invariants() {
        for p in [2.0, 3.0, 2.5] {
            let surf = c_zero_surface(p, 1.0).unwrap();
            let inv = invariants_isothermal(&surf.jet(-0.4, 0.3).unwrap()).unwrap();
            assert!((inv.h + 1.0).abs() < 1e-9, "p {p} H {}", inv.h);
            assert!(inv.u.re.abs() < 1e-9);
            assert!((inv.u - surf.cubic_coefficient()).norm() < 1e-9);
        }
    }

    #[test]
    fn small_c_family_approaches_the_c_zero_surface() {
        for s in [1.0, -1.0] {
            let g = general_surface(3.0, -1e-6, s).unwrap();
            let fam = family_surface(3.0, -1e-6, g.base_angle()).unwrap();
            let z = c_zero_surface(3.0, s).unwrap();
            for &(x, y) in &[(-0.8, 0.2), (-0.3, -0.5)] {
                let (a, b) = (fam.position(x, y).unwrap(), z.position(x, y).unwrap());
                assert!((a - b).norm() < 1e-5 * b.norm(), "s {s}: {a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn invariants_hold_beside_the_base_angle_at_small_c() {
        let g = general_surface(3.0, -1e-6, 1.0).unwrap();
        let e = g.expected_conformal(-0.5).unwrap();
        for dt in [0.0, 1e-9, -1e-6, 1e-3] {
            let fam = family_surface(3.0, -1e-6, g.base_angle() + dt).unwrap();
            let inv = invariants_isothermal(&fam.jet(-0.5, 0.1).unwrap()).unwrap();
            assert!((inv.h + 1.0).abs() < 1e-7, "dt {dt}: H {}", inv.h);
            assert!((inv.conformal - e).abs() < 1e-7 * e, "dt {dt}");
            assert!((inv.u - fam.expected_cubic()).norm() < 1e-7, "dt {dt}");
        }
    }

    #[test]
    fn sigma_surfaces_lie_in_their_cones() {
        for &(p, c, s) in &[(3.0, -1.0, 1.0), (3.0, -1.0, -1.0), (2.5, -5.0, 1.0), (5.0, -0.2, -1.0)] {
            let surf = general_surface(p, c, s).unwrap();
            let cone = surf.cone().unwrap();
            let w = surf.xi2_range().1;
            for k in 1..20 {
                let x = -w + 2.0 * w * k as f64 / 20.0;
                for y in [-3.0, 0.0, 2.0] {
                    let r = surf.position(x, y).unwrap();
                    assert!(cone.boundary_distance(&r) > 0.0, "({p}, {c}, {s}) at ({x}, {y})");
                }
            }
            for edge in [-w * (1.0 - 1e-5), w * (1.0 - 1e-5)] {
                let d = cone.boundary_distance(&surf.position(edge, 0.0).unwrap());
                assert!(d.abs() < 1e-3, "({p}, {c}, {s}) edge {edge}: {d}");
            }
        }
    }

    #[test]
    fn c_zero_surface_lies_in_its_cone() {
        for sign in [1.0, -1.0] {
            let surf = c_zero_surface(3.0, sign).unwrap();
            let cone = surf.cone();
            let w = surf.xi2_range().0;
            for x in [0.9 * w, 0.5 * w, 0.1 * w] {
                assert!(cone.boundary_distance(&surf.position(x, 0.4).unwrap()) > 0.0);
            }
            let d = cone.boundary_distance(&surf.position(w * (1.0 - 1e-5), 0.0).unwrap());
            assert!(d.abs() < 1e-3, "{d}");
        }
    }

    #[test]
    fn unsimplified_matches_up_to_diagonal_gauge() {
        let (p, c, s) = (3.0, -1.0, 1.0);
        let raw = unsimplified_surface(p, c, s).unwrap();
        let simple = general_surface(p, c, s).unwrap();
        let pre = prefactors(p, c);
        for &(x, y) in &[(-0.5, 0.1), (0.2, 0.7), (0.9, -0.3)] {
            let a = raw(x, y).unwrap();
            let b = simple.position(x, y).unwrap();
            for i in 0..3 {
                assert!(
                    (b[i].abs() - (pre[i] * a[i]).abs()).abs() < 1e-9 * b[i].abs(),
                    "{i}: {} {}",
                    b[i],
                    pre[i] * a[i]
                );
            }
        }
    }
}
