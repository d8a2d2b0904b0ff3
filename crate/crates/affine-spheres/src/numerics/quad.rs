#![allow(clippy::excessive_precision)]

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let d = h * XGK[j];
        let s = f(c - d) + f(c + d);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mut stack = vec![(a, b, 0usize)];
    let mut total = 0.0;
    let mut worst = 0.0f64;
    let scale = kronrod(&f, a, b).0.abs().max(1e-300);
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err) = kronrod(&f, lo, hi);
        if !v.is_finite() {
            return Err(Error::QuadratureFailure { estimate: f64::INFINITY });
        }
        if err <= tol * scale.max(v.abs()) * ((hi - lo) / (b - a)).abs().max(1e-3) || depth >= 50 {
            if depth >= 50 {
                worst = worst.max(err);
            }
            total += v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    if worst > 1e3 * tol * scale {
        return Err(Error::QuadratureFailure { estimate: worst });
    }
    Ok(total)
}

/// Integral over [a, inf) through the map x = a + w / (1 - w).
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> Result<f64> {
    integrate(
        |w| {
            if w >= 1.0 {
                return 0.0;
            }
            let one_minus = 1.0 - w;
            f(a + w / one_minus) / (one_minus * one_minus)
        },
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_oscillatory() {
        let v = integrate(|x| x * x * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((v - 4.0).abs() < 1e-13);
        let v = integrate(|x| (10.0 * x).sin(), 0.0, 3.0, 1e-13).unwrap();
        assert!((v - (1.0 - 30f64.cos()) / 10.0).abs() < 1e-12);
    }

    #[test]
    fn infinite_tail() {
        let v = integrate_to_infinity(|x| 1.0 / (x * x), 1.0, 1e-13).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }
}
