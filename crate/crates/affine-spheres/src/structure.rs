//! The integrable-systems layer: Tzitzéica residuals, the Lax frame with
//! spectral parameter λ, zero-curvature checks and reconstruction of
//! surfaces by integrating the frame along paths.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::blaschke::invariants_isothermal;
use crate::elliptic::EllipticContext;
use crate::families::{conjugate, coth_conformal, coth_cubic_modulus, shorthand_coeffs};
use crate::numerics::{c, integrate_ode, numeric_jet2, CMat3, CVec3, Dual2, Jet2, Vec3, I};
use crate::surface::{Grid, Surface};
use crate::{Error, Result};

/// Largest tolerated reality defect of a frame before integration is
/// abandoned.
pub const REALITY_LIMIT: f64 = 1e-4;

/// Default RK4 step for frame integration.
pub const FRAME_STEP: f64 = 2e-3;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// The metric potential ψ as a function on the chart, with analytic
/// first and second partials.
#[derive(Debug, Clone, PartialEq)]
pub enum PsiField {
    /// e^ψ = (3 csch²(√3x) + 2)/2.
    Case1,
    /// e^ψ = ½(℘(x + ω₁) + shift).
    Weierstrass {
        ctx: EllipticContext,
        shift: f64,
    },
    /// e^ψ = (p² − p + 1)/(8(p − 1))·(coth²(kx) − 1/3).
    Coth {
        p: f64,
    },
    Constant(f64),
    /// ψ + eps·x.
    Perturbed {
        inner: Box<PsiField>,
        eps: f64,
    },
}

/// ψ and its partials at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiJet {
    pub psi: f64,
    pub psi_x: f64,
    pub psi_y: f64,
    pub psi_xx: f64,
    pub psi_xy: f64,
    pub psi_yy: f64,
}

impl PsiJet {
    fn psi_z(&self) -> Complex64 {
        Complex64::new(self.psi_x, -self.psi_y) * 0.5
    }

    /// ψ_zz̄ = (ψ_xx + ψ_yy)/4.
    pub fn laplacian_quarter(&self) -> f64 {
        (self.psi_xx + self.psi_yy) / 4.0
    }
}

impl PsiField {
    fn dual(&self, x: f64, y: f64) -> Result<Dual2> {
        let dx = Dual2::var_x(x);
        let out = match self {
            PsiField::Case1 => {
                let sh = (dx * SQRT_3).sinh();
                ((sh * sh).recip() * 1.5 + 1.0).ln()
            }
            PsiField::Weierstrass { ctx, shift } => {
                let wp = ctx.wp_jet(dx + ctx.omega1)?;
                ((wp + *shift) * 0.5).ln()
            }
            PsiField::Coth { p } => {
                let s2 = p * p - p + 1.0;
                let k = s2.sqrt() / (2.0 * (p - 1.0).sqrt());
                let co = (dx * k).coth();
                ((co * co - 1.0 / 3.0) * (s2 / (8.0 * (p - 1.0)))).ln()
            }
            PsiField::Constant(v) => Dual2::constant(*v),
            PsiField::Perturbed { inner, eps } => inner.dual(x, y)? + dx * *eps,
        };
        if !out.is_finite() || out.v.im.abs() > 1e-12 * (1.0 + out.v.re.abs()) {
            return Err(Error::DomainViolation(format!("metric potential undefined at ({x}, {y})")));
        }
        Ok(out)
    }

    pub fn jet(&self, x: f64, y: f64) -> Result<PsiJet> {
        let [psi, psi_x, psi_y, psi_xx, psi_xy, psi_yy] = self.dual(x, y)?.re();
        Ok(PsiJet { psi, psi_x, psi_y, psi_xx, psi_xy, psi_yy })
    }
}

/// Metric potential ψ, cubic coefficient U and affine mean curvature H.
#[derive(Debug, Clone, PartialEq)]
pub struct TzitzeicaData {
    pub psi: PsiField,
    pub u: Complex64,
    pub h: f64,
}

impl TzitzeicaData {
    /// The isothermal case-1 sphere with U normalized to 1.
    pub fn case1() -> Self {
        Self { psi: PsiField::Case1, u: c(1.0), h: -1.0 }
    }

    /// Data shared by every member of the family at (p, c), with U = |U|.
    /// At c = −2(p+q) the lattice degenerates and the coth data is used.
    pub fn weierstrass(p: f64, cc: f64) -> Result<Self> {
        let q = conjugate(p)?;
        let edge = -2.0 * (p + q);
        if (cc - edge).abs() <= 1e-12 * (p + q) {
            return Self::coth(p);
        }
        if !(cc <= 0.0 && cc > edge) {
            return Err(Error::InvalidParameter(format!("c must lie in [{edge}, 0], got {cc}")));
        }
        let coeffs = shorthand_coeffs(p, q, cc)?;
        Ok(Self {
            psi: PsiField::Weierstrass { ctx: coeffs.ctx, shift: coeffs.metric_shift() },
            u: c(coeffs.cubic_coefficient(1.0).norm()),
            h: -1.0,
        })
    }

    pub fn coth(p: f64) -> Result<Self> {
        conjugate(p)?;
        Ok(Self { psi: PsiField::Coth { p }, u: c(coth_cubic_modulus(p)), h: -1.0 })
    }

    /// ψ ≡ 0 with H = −1 and |U| = 1.
    pub fn vacuum() -> Self {
        Self { psi: PsiField::Constant(0.0), u: c(1.0), h: -1.0 }
    }

    pub fn perturbed(self, eps: f64) -> Self {
        Self { psi: PsiField::Perturbed { inner: Box::new(self.psi), eps }, ..self }
    }

    /// ψ_zz̄ + H e^ψ + |U|² e^{−2ψ} at one point.
    pub fn residual_at(&self, x: f64, y: f64) -> Result<f64> {
        let j = self.psi.jet(x, y)?;
        Ok(j.laplacian_quarter() + self.h * j.psi.exp() + self.u.norm_sqr() * (-2.0 * j.psi).exp())
    }
}

/// Largest |ψ_zz̄ + H e^ψ + |U|² e^{−2ψ}| over the grid.
pub fn tzitzeica_residual(data: &TzitzeicaData, grid: &Grid) -> Result<f64> {
    grid.points().into_iter().try_fold(0.0f64, |m, (x, y)| Ok(m.max(data.residual_at(x, y)?.abs())))
}

fn assemble(pz: Complex64, ep: f64, em: f64, minus_h: f64, lu: Complex64) -> (CMat3, CMat3) {
    let z = c(0.0);
    let uz = CMat3::new(pz, z, c(minus_h), -lu * em, z, z, z, c(ep), z);
    let vzb = CMat3::new(z, -lu.conj() * em, z, z, pz.conj(), c(minus_h), c(ep), z, z);
    (uz, vzb)
}

/// The Lax matrices (U_z, V_z̄) of F_z = F U_z, F_z̄ = F V_z̄ for the frame
/// F = (r_z, r_z̄, ξ), with U replaced by λU.
pub fn frame_matrices(data: &TzitzeicaData, lambda: Complex64, at: (f64, f64)) -> Result<(CMat3, CMat3)> {
    check_lambda(lambda)?;
    let j = data.psi.jet(at.0, at.1)?;
    Ok(assemble(j.psi_z(), j.psi.exp(), (-j.psi).exp(), -data.h, lambda * data.u))
}

fn check_lambda(lambda: Complex64) -> Result<()> {
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("spectral parameter must have modulus 1, got {lambda}")));
    }
    Ok(())
}

/// Real-coordinate connection: F_x = F 𝒜, F_y = F ℬ with 𝒜 = U_z + V_z̄ and
/// ℬ = i(U_z − V_z̄).
fn connection(data: &TzitzeicaData, lu: Complex64, at: (f64, f64)) -> Result<(CMat3, CMat3)> {
    let j = data.psi.jet(at.0, at.1)?;
    let (uz, vzb) = assemble(j.psi_z(), j.psi.exp(), (-j.psi).exp(), -data.h, lu);
    Ok((uz + vzb, (uz - vzb) * I))
}

/// Largest entry of 𝒜_y − ℬ_x − [𝒜, ℬ] over the grid. It vanishes exactly
/// when ψ solves the Tzitzéica equation.
pub fn zero_curvature_residual(data: &TzitzeicaData, lambda: Complex64, grid: &Grid) -> Result<f64> {
    check_lambda(lambda)?;
    let lu = lambda * data.u;
    let mut worst = 0.0f64;
    for (x, y) in grid.points() {
        let j = data.psi.jet(x, y)?;
        let (ep, em) = (j.psi.exp(), (-j.psi).exp());
        let (uz, vzb) = assemble(j.psi_z(), ep, em, -data.h, lu);
        let (a, b) = (uz + vzb, (uz - vzb) * I);
        let dpz_x = Complex64::new(j.psi_xx, -j.psi_xy) * 0.5;
        let dpz_y = Complex64::new(j.psi_xy, -j.psi_yy) * 0.5;
        let (ux, vx) = assemble(dpz_x, j.psi_x * ep, -j.psi_x * em, 0.0, lu);
        let (uy, vy) = assemble(dpz_y, j.psi_y * ep, -j.psi_y * em, 0.0, lu);
        let a_y = uy + vy;
        let b_x = (ux - vx) * I;
        let r = a_y - b_x - (a * b - b * a);
        worst = worst.max(r.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    Ok(worst)
}

/// The frame (r_z, r_z̄, ξ) at a parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameState {
    pub f: CMat3,
    pub at: (f64, f64),
}

impl FrameState {
    /// Frame of an isothermal chart read off its jet.
    pub fn from_jet(jet: &Jet2) -> Result<Self> {
        let xi = invariants_isothermal(jet)?.xi;
        let rx = jet.r_x.map(c);
        let ry = jet.r_y.map(c);
        let rz: CVec3 = (rx - ry * I) * c(0.5);
        let rzb: CVec3 = (rx + ry * I) * c(0.5);
        Ok(Self { f: CMat3::from_columns(&[rz, rzb, xi.map(c)]), at: jet.at })
    }

    /// ‖col₂ − conj col₁‖ + ‖Im col₃‖ relative to ‖F‖.
    pub fn reality_defect(&self) -> f64 {
        let f = &self.f;
        let conj = (f.column(1) - f.column(0).map(|z| z.conj())).norm();
        let imag = f.column(2).map(|z| z.im).norm();
        (conj + imag) / f.norm().max(1e-300)
    }

    /// Position r = ξ/(−H).
    pub fn position(&self, h: f64) -> Vec3 {
        self.f.column(2).map(|z| z.re) / -h
    }
}

/// Worst relative drift of det F·e^{−ψ} and worst reality defect seen at
/// the vertices of a path.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrameDiagnostics {
    pub max_det_drift: f64,
    pub max_reality_defect: f64,
}

impl FrameDiagnostics {
    fn merge(self, other: Self) -> Self {
        Self {
            max_det_drift: self.max_det_drift.max(other.max_det_drift),
            max_reality_defect: self.max_reality_defect.max(other.max_reality_defect),
        }
    }
}

fn det_ratio(data: &TzitzeicaData, state: &FrameState) -> Result<Complex64> {
    let psi = data.psi.jet(state.at.0, state.at.1)?.psi;
    Ok(state.f.determinant() * (-psi).exp())
}

fn check_reality(state: &FrameState) -> Result<f64> {
    let defect = state.reality_defect();
    if !(defect <= REALITY_LIMIT) {
        return Err(Error::RealityLoss { defect });
    }
    Ok(defect)
}

/// Integrates dF = F(𝒜 dx + ℬ dy) along a polyline starting at
/// `initial.at`, with the default step.
pub fn integrate_frame(
    data: &TzitzeicaData,
    lambda: Complex64,
    initial: &FrameState,
    path: &[(f64, f64)],
) -> Result<FrameState> {
    Ok(integrate_frame_tracked(data, lambda, initial, path, FRAME_STEP)?.0)
}

/// As [`integrate_frame`] with an explicit step, also reporting the
/// determinant drift and reality defect at every vertex.
pub fn integrate_frame_tracked(
    data: &TzitzeicaData,
    lambda: Complex64,
    initial: &FrameState,
    path: &[(f64, f64)],
    step: f64,
) -> Result<(FrameState, FrameDiagnostics)> {
    check_lambda(lambda)?;
    let lu = lambda * data.u;
    let start_defect = check_reality(initial)?;
    let reference = det_ratio(data, initial)?;
    let mut diag = FrameDiagnostics { max_det_drift: 0.0, max_reality_defect: start_defect };
    let mut state = *initial;
    for &to in path {
        let from = state.at;
        let (dx, dy) = (to.0 - from.0, to.1 - from.1);
        let len = dx.hypot(dy);
        if len == 0.0 {
            continue;
        }
        let field = |s: f64, f: &CMat3| -> Result<CMat3> {
            let (a, b) = connection(data, lu, (from.0 + s * dx, from.1 + s * dy))?;
            Ok(f * (a * c(dx) + b * c(dy)))
        };
        let f = integrate_ode(field, state.f, (0.0, 1.0), step / len)?;
        state = FrameState { f, at: to };
        let drift = ((det_ratio(data, &state)? - reference) / reference).norm();
        diag.max_det_drift = diag.max_det_drift.max(drift);
        diag.max_reality_defect = diag.max_reality_defect.max(check_reality(&state)?);
    }
    Ok((state, diag))
}

/// ‖F_loop − F_start‖/‖F_start‖ after going once around the rectangle with
/// opposite corners `initial.at` and `corner`.
pub fn holonomy_defect(
    data: &TzitzeicaData,
    lambda: Complex64,
    initial: &FrameState,
    corner: (f64, f64),
) -> Result<f64> {
    let (x0, y0) = initial.at;
    let path = [(corner.0, y0), corner, (x0, corner.1), (x0, y0)];
    let end = integrate_frame(data, lambda, initial, &path)?;
    Ok((end.f - initial.f).norm() / initial.f.norm())
}

/// Surface reconstructed on a grid by frame integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// Row-major over the grid (x fastest).
    pub points: Vec<Vec3>,
    pub frames: Vec<FrameState>,
    pub diagnostics: FrameDiagnostics,
}

/// Reconstructs the family member λ = e^{3it} on the grid. The base frame
/// is carried to the grid corner (x_min, y_min), along the first row in x,
/// then up every column in y; columns run in parallel.
pub fn reconstruct_family(
    data: &TzitzeicaData,
    t: f64,
    base_frame: &FrameState,
    grid: &Grid,
) -> Result<Reconstruction> {
    reconstruct_family_with_step(data, t, base_frame, grid, FRAME_STEP)
}

pub fn reconstruct_family_with_step(
    data: &TzitzeicaData,
    t: f64,
    base_frame: &FrameState,
    grid: &Grid,
    step: f64,
) -> Result<Reconstruction> {
    let lambda = Complex64::from_polar(1.0, 3.0 * t);
    let (xs, ys) = (grid.xs(), grid.ys());
    let corner = (xs[0], ys[0]);
    let (seed, mut diag) =
        integrate_frame_tracked(data, lambda, base_frame, &[(base_frame.at.0, corner.1), corner], step)?;
    let mut row = Vec::with_capacity(xs.len());
    let mut state = seed;
    for &x in &xs {
        let (next, d) = integrate_frame_tracked(data, lambda, &state, &[(x, corner.1)], step)?;
        diag = diag.merge(d);
        state = next;
        row.push(state);
    }
    let columns = row
        .par_iter()
        .map(|start| {
            let mut col = Vec::with_capacity(ys.len());
            let mut state = *start;
            let mut diag = FrameDiagnostics::default();
            for &y in &ys {
                let (next, d) = integrate_frame_tracked(data, lambda, &state, &[(state.at.0, y)], step)?;
                diag = diag.merge(d);
                state = next;
                col.push(state);
            }
            Ok((col, diag))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut frames = Vec::with_capacity(grid.len());
    for j in 0..ys.len() {
        for (col, d) in &columns {
            frames.push(col[j]);
            diag = diag.merge(*d);
        }
    }
    let reference = det_ratio(data, base_frame)?;
    for fr in &frames {
        let drift = ((det_ratio(data, fr)? - reference) / reference).norm();
        diag.max_det_drift = diag.max_det_drift.max(drift);
    }
    let points = frames.iter().map(|f| f.position(data.h)).collect();
    Ok(Reconstruction { points, frames, diagnostics: diag })
}

/// e^ψ of the coth data, for comparison with reconstructed metrics.
pub fn coth_metric(p: f64, x: f64) -> f64 {
    coth_conformal(p, x)
}

/// A family member evaluated pointwise by integrating from the base frame
/// along x and then y. Jets come from finite differences, so the step must
/// be small enough for the integration error to sit well below them.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSurface {
    data: TzitzeicaData,
    lambda: Complex64,
    base: FrameState,
    step: f64,
}

impl FrameSurface {
    pub fn new(data: TzitzeicaData, t: f64, base: FrameState, step: f64) -> Self {
        Self { data, lambda: Complex64::from_polar(1.0, 3.0 * t), base, step }
    }
}

impl Surface for FrameSurface {
    fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        let at = |a: f64, b: f64| -> Result<Vec3> {
            let path = [(a, self.base.at.1), (a, b)];
            let (end, _) = integrate_frame_tracked(&self.data, self.lambda, &self.base, &path, self.step)?;
            Ok(end.position(self.data.h))
        };
        numeric_jet2(at, (x, y), 1e-2)
    }
}

#[cfg(test)]
mod tests {

    use super::*;
    use crate::families::{
        base_point, case1_conformal, case1_family, case1_isothermal, coth_surface, family_surface, general_surface,
        Case1Isothermal, CothWhich,
    };

    fn small_grid(x: (f64, f64), y: (f64, f64)) -> Grid {
        Grid::new(x, y, 9, 9).unwrap()
    }

    #[test]
    fn tzitzeica_closed_forms() {
        let g = small_grid((0.3, 1.5), (-1.0, 1.0));
        assert!(tzitzeica_residual(&TzitzeicaData::case1(), &g).unwrap() < 1e-8);
        assert_eq!(tzitzeica_residual(&TzitzeicaData::vacuum(), &g).unwrap(), 0.0);
        for (p, cc) in [(3.0, -1.0), (2.0, -0.5), (5.0, -3.0), (2.5, 0.0)] {
            let data = TzitzeicaData::weierstrass(p, cc).unwrap();
            let g = small_grid((-0.4, 0.4), (-1.0, 1.0));
            let r = tzitzeica_residual(&data, &g).unwrap();
            assert!(r < 1e-8, "p {p} c {cc}: {r}");
        }
        let g = small_grid((-1.5, -0.2), (-1.0, 1.0));
        assert!(tzitzeica_residual(&TzitzeicaData::coth(3.0).unwrap(), &g).unwrap() < 1e-8);
    }

    #[test]
    fn perturbation_is_detected() {
        let g = small_grid((0.3, 1.5), (-1.0, 1.0));
        let r = tzitzeica_residual(&TzitzeicaData::case1().perturbed(0.01), &g).unwrap();
        assert!(r > 1e-4, "{r}");
    }

    #[test]
    fn metric_matches_surface_invariants() {
        let (u, v) = (0.7, 0.2);
        let inv = invariants_isothermal(&case1_isothermal(u, v).unwrap()).unwrap();
        let psi = PsiField::Case1.jet(u, v).unwrap().psi;
        assert!((psi.exp() - inv.conformal).abs() < 1e-9 * inv.conformal);
        assert!((psi.exp() - case1_conformal(u)).abs() < 1e-12);
        let data = TzitzeicaData::weierstrass(3.0, -1.0).unwrap();
        let surf = general_surface(3.0, -1.0, 1.0).unwrap();
        let e = surf.expected_conformal(-0.3).unwrap();
        assert!((data.psi.jet(-0.3, 0.0).unwrap().psi.exp() - e).abs() < 1e-12 * e);
        assert!((data.u.re - surf.cubic_coefficient().norm()).abs() < 1e-14);
        let coth = TzitzeicaData::coth(3.0).unwrap();
        assert!((coth.psi.jet(-0.5, 0.0).unwrap().psi.exp() - coth_metric(3.0, -0.5)).abs() < 1e-12);
    }

    #[test]
    fn lax_matrices() {
        let data = TzitzeicaData::case1();
        let at = (0.8, 0.1);
        let j = data.psi.jet(at.0, at.1).unwrap();
        let (uz, vzb) = frame_matrices(&data, c(1.0), at).unwrap();
        assert!((uz.trace() - j.psi_z()).norm() < 1e-15);
        assert!((vzb.trace() - j.psi_z().conj()).norm() < 1e-15);
        assert!((uz[(1, 0)] + (-j.psi).exp()).norm() < 1e-15);
        let (uz2, _) = frame_matrices(&data, I, at).unwrap();
        assert!((uz2[(1, 0)] - I * uz[(1, 0)]).norm() < 1e-15);
        assert!(frame_matrices(&data, c(2.0), at).is_err());
    }

    #[test]
    fn zero_curvature() {
        let lam = Complex64::from_polar(1.0, 0.7);
        let g = small_grid((0.3, 1.5), (-1.0, 1.0));
        assert!(zero_curvature_residual(&TzitzeicaData::case1(), lam, &g).unwrap() < 1e-8);
        let g2 = small_grid((-0.4, 0.4), (-1.0, 1.0));
        let w = TzitzeicaData::weierstrass(3.0, -1.0).unwrap();
        assert!(zero_curvature_residual(&w, lam, &g2).unwrap() < 1e-8);
        let bad = TzitzeicaData::case1().perturbed(0.01);
        assert!(zero_curvature_residual(&bad, lam, &g).unwrap() > 1e-4);
    }

    #[test]
    fn zero_curvature_by_finite_differences() {
        let data = TzitzeicaData::weierstrass(2.5, -0.8).unwrap();
        let lu = Complex64::from_polar(1.0, 1.1) * data.u;
        let (x, y, h) = (0.1, 0.3, 1e-4);
        let a = |x: f64, y: f64| connection(&data, lu, (x, y)).unwrap();
        let a_y = (a(x, y + h).0 - a(x, y - h).0) / c(2.0 * h);
        let b_x = (a(x + h, y).1 - a(x - h, y).1) / c(2.0 * h);
        let (aa, bb) = a(x, y);
        let r = (a_y - b_x - (aa * bb - bb * aa)).norm();
        assert!(r < 1e-7, "{r}");
    }

    #[test]
    fn zero_length_path() {
        let data = TzitzeicaData::case1();
        let start = FrameState::from_jet(&case1_isothermal(0.8, 0.0).unwrap()).unwrap();
        let end = integrate_frame(&data, c(1.0), &start, &[]).unwrap();
        assert_eq!(end, start);
        let end = integrate_frame(&data, c(1.0), &start, &[start.at]).unwrap();
        assert_eq!(end, start);
    }

    #[test]
    fn case1_endpoint_matches_closed_form() {
        let data = TzitzeicaData::case1();
        let b = base_point();
        let start = FrameState::from_jet(&case1_isothermal(b.0, b.1).unwrap()).unwrap();
        let target = (1.3, 0.6);
        let end = integrate_frame(&data, I, &start, &[(target.0, b.1), target]).unwrap();
        let want = Case1Isothermal.position(target.0, target.1).unwrap();
        assert!((end.position(-1.0) - want).norm() < 1e-5 * want.norm());
        assert!(end.reality_defect() < 1e-6);
    }

    #[test]
    fn staircase_paths_agree_and_loops_close() {
        let data = TzitzeicaData::case1();
        let start = FrameState::from_jet(&case1_isothermal(0.6, -0.2).unwrap()).unwrap();
        let lam = Complex64::from_polar(1.0, 0.9);
        let a = integrate_frame(&data, lam, &start, &[(1.2, -0.2), (1.2, 0.5)]).unwrap();
        let b = integrate_frame(&data, lam, &start, &[(0.6, 0.5), (1.2, 0.5)]).unwrap();
        assert!((a.f - b.f).norm() < 1e-6 * a.f.norm());
        assert!(holonomy_defect(&data, lam, &start, (1.2, 0.5)).unwrap() < 1e-6);
    }

    #[test]
    fn wrong_initial_frame_is_rejected() {
        let data = TzitzeicaData::case1();
        let mut start = FrameState::from_jet(&case1_isothermal(0.6, 0.0).unwrap()).unwrap();
        start.f[(0, 2)] += I;
        let r = integrate_frame(&data, c(1.0), &start, &[(0.9, 0.0)]);
        assert!(matches!(r, Err(Error::RealityLoss { .. })));
    }

    #[test]
    fn reconstructs_case1_family() {
        let data = TzitzeicaData::case1();
        let grid = Grid::new((0.5, 1.2), (-0.4, 0.4), 6, 5).unwrap();
        for t in [0.2, 1.0, 2.5] {
            let fam = case1_family(t).unwrap();
            let base = FrameState::from_jet(&fam.jet(0.5, -0.4).unwrap()).unwrap();
            let rec = reconstruct_family(&data, t, &base, &grid).unwrap();
            for (r, (x, y)) in rec.points.iter().zip(grid.points()) {
                let want = fam.position(x, y).unwrap();
                assert!((r - want).norm() < 1e-5 * want.norm(), "t {t} at ({x}, {y})");
            }
            assert!(rec.diagnostics.max_det_drift < 1e-7, "{}", rec.diagnostics.max_det_drift);
            assert!(rec.diagnostics.max_reality_defect < 1e-6);
        }
    }

    #[test]
    fn reconstructs_general_family() {
        let (p, cc) = (3.0, -1.0);
        let data = TzitzeicaData::weierstrass(p, cc).unwrap();
        let grid = Grid::new((-0.4, 0.3), (-0.5, 0.5), 5, 5).unwrap();
        let surf = general_surface(p, cc, 1.0).unwrap();
        let t0 = surf.base_angle();
        let base = FrameState::from_jet(&surf.jet(-0.4, -0.5).unwrap()).unwrap();
        let rec = reconstruct_family(&data, t0, &base, &grid).unwrap();
        for (r, (x, y)) in rec.points.iter().zip(grid.points()) {
            let want = surf.position(x, y).unwrap();
            assert!((r - want).norm() < 1e-5 * want.norm(), "({x}, {y})");
        }
        let t = 0.3;
        let fam = family_surface(p, cc, t).unwrap();
        let base = FrameState::from_jet(&fam.jet(-0.4, -0.5).unwrap()).unwrap();
        let rec = reconstruct_family(&data, t, &base, &grid).unwrap();
        for (r, (x, y)) in rec.points.iter().zip(grid.points()) {
            let want = fam.position(x, y).unwrap();
            assert!((r - want).norm() < 1e-5 * want.norm(), "t {t} at ({x}, {y})");
        }
    }

    #[test]
    fn reconstructs_coth_display() {
        let p = 3.0;
        let data = TzitzeicaData::coth(p).unwrap();
        let surf = coth_surface(p, CothWhich::Case3).unwrap();
        let t = surf.cubic_coefficient().arg() / 3.0;
        let grid = Grid::new((-1.0, -0.4), (-0.3, 0.3), 4, 4).unwrap();
        let base = FrameState::from_jet(&surf.jet(-1.0, -0.3).unwrap()).unwrap();
        let rec = reconstruct_family(&data, t, &base, &grid).unwrap();
        for (r, (x, y)) in rec.points.iter().zip(grid.points()) {
            let want = surf.position(x, y).unwrap();
            assert!((r - want).norm() < 1e-5 * want.norm(), "({x}, {y})");
        }
    }

    #[test]
    fn metric_is_independent_of_lambda() {
        let data = TzitzeicaData::case1();
        let b = base_point();
        let base = FrameState::from_jet(&case1_isothermal(b.0, b.1).unwrap()).unwrap();
        for t in [0.1, 0.8, 1.9] {
            let surf = FrameSurface::new(data.clone(), t, base, 1e-3);
            for (x, y) in [(0.7, 0.1), (1.1, -0.3)] {
                let inv = invariants_isothermal(&surf.jet(x, y).unwrap()).unwrap();
                let e = case1_conformal(x);
                assert!((inv.conformal - e).abs() < 1e-5 * e, "t {t}: {} vs {e}", inv.conformal);
                assert!((inv.u - Complex64::from_polar(1.0, 3.0 * t)).norm() < 1e-5);
            }
        }
    }
}
