use num_complex::Complex64;

use crate::{Error, Result};

/// Roots of a real cubic. When all three are real they are sorted in
/// descending order; otherwise the real root comes first, followed by the
/// conjugate pair with positive imaginary part first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoots {
    pub roots: [Complex64; 3],
    pub all_real: bool,
    /// Two roots coincide (within the discriminant threshold).
    pub double_root: bool,
    /// All three coincide.
    pub triple_root: bool,
}

impl CubicRoots {
    pub fn real(&self) -> Option<[f64; 3]> {
        self.all_real.then(|| [self.roots[0].re, self.roots[1].re, self.roots[2].re])
    }
}

/// Relative discriminant below which two roots are merged into an exact
/// double root. Coefficients assembled in floating point that are double
/// roots in exact arithmetic split by about the square root of the
/// rounding error, so the threshold sits well above that level.
const DOUBLE_ROOT_REL: f64 = 1e-13;

/// Solve a3 z^3 + a2 z^2 + a1 z + a0 = 0.
pub fn cubic_roots(a3: f64, a2: f64, a1: f64, a0: f64) -> Result<CubicRoots> {
    if a3 == 0.0 || !a3.is_finite() {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let b = a2 / a3;
    let c = a1 / a3;
    let d = a0 / a3;
    let shift = b / 3.0;
    // depressed: t^3 + p t + q, z = t - b/3
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let scale = (p.abs().sqrt()).max(q.abs().cbrt());

    let poly = |z: f64| ((a3 * z + a2) * z + a1) * z + a0;
    let dpoly = |z: f64| (3.0 * a3 * z + 2.0 * a2) * z + a1;
    let polish = |z: f64| {
        let dz = dpoly(z);
        if dz == 0.0 {
            return z;
        }
        let cand = z - poly(z) / dz;
        if poly(cand).abs() <= poly(z).abs() {
            cand
        } else {
            z
        }
    };

    if scale == 0.0 {
        let z = Complex64::new(-shift, 0.0);
        return Ok(CubicRoots { roots: [z; 3], all_real: true, double_root: true, triple_root: true });
    }

    let big = 4.0 * p * p * p;
    let small = 27.0 * q * q;
    let disc = big + small;
    let rel = disc / (big.abs() + small);

    if rel.abs() < DOUBLE_ROOT_REL {
        if p.abs() < 1e-300 {
            let z = Complex64::new(-shift, 0.0);
            return Ok(CubicRoots { roots: [z; 3], all_real: true, double_root: true, triple_root: true });
        }
        let t_double = -1.5 * q / p;
        let t_single = 3.0 * q / p;
        let mut r = [t_single - shift, t_double - shift, t_double - shift];
        r[0] = polish(r[0]);
        r.sort_by(|x, y| y.total_cmp(x));
        return Ok(CubicRoots {
            roots: r.map(|x| Complex64::new(x, 0.0)),
            all_real: true,
            double_root: true,
            triple_root: false,
        });
    }

    if disc < 0.0 {
        // three distinct real roots
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut r = [0.0f64; 3];
        for (k, slot) in r.iter_mut().enumerate() {
            let t = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            *slot = polish(t - shift);
        }
        r.sort_by(|x, y| y.total_cmp(x));
        return Ok(CubicRoots {
            roots: r.map(|x| Complex64::new(x, 0.0)),
            all_real: true,
            double_root: false,
            triple_root: false,
        });
    }

    let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let u = (-q / 2.0 + s).cbrt();
    let v = (-q / 2.0 - s).cbrt();
    let real = polish(u + v - shift);
    let re = -(u + v) / 2.0 - shift;
    let im = 3f64.sqrt() / 2.0 * (u - v).abs();
    Ok(CubicRoots {
        roots: [Complex64::new(real, 0.0), Complex64::new(re, im), Complex64::new(re, -im)],
        all_real: false,
        double_root: false,
        triple_root: false,
    })
}
