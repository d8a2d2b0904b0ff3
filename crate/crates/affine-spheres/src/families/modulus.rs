//! Matching lattice moduli across different exponents p.

use crate::numerics::bisect;
use crate::{Error, Result};

use super::coeffs::{conjugate, shorthand_coeffs};

/// Squared modulus k² = (e₂ − e₃)/(e₁ − e₃) of the lattice for (p, c). It
/// depends on c only through c².
pub fn modulus_k2(p: f64, c: f64) -> Result<f64> {
    let q = conjugate(p)?;
    Ok(shorthand_coeffs(p, q, c)?.ctx.k2)
}

/// The c with k²(p, c) = k²(p₁, c₁) and the sign of c₁. The modulus grows
/// monotonically in |c| from k²(p, 0) to 1 at |c| = 2(p+q).
pub fn modulus_match(p1: f64, c1: f64, p: f64) -> Result<f64> {
    let target = modulus_k2(p1, c1)?;
    let q = conjugate(p)?;
    let edge = 2.0 * (p + q);
    let floor = modulus_k2(p, 0.0)?;
    let no_bracket = || Error::NoBracket { target, p };
    if (target - floor).abs() <= 1e-14 {
        return Ok(0.0);
    }
    if !(target > floor && target < 1.0) {
        return Err(no_bracket());
    }
    let hi = edge * (1.0 - 1e-12);
    if modulus_k2(p, hi)? < target {
        return Err(no_bracket());
    }
    let mag = bisect(|x| Ok(modulus_k2(p, x)? - target), 0.0, hi, 1e-13 * edge).map_err(|_| no_bracket())?;
    Ok(if c1 < 0.0 { -mag } else { mag })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_in_c() {
        for c in [0.3, 1.7, 4.0] {
            assert_eq!(modulus_k2(3.0, c).unwrap(), modulus_k2(3.0, -c).unwrap());
        }
    }

    #[test]
    fn monotone_in_abs_c() {
        let mut last = modulus_k2(2.0, 0.0).unwrap();
        for k in 1..80 {
            let v = modulus_k2(2.0, 0.1 * k as f64).unwrap();
            assert!(v > last, "c {}", 0.1 * k as f64);
            last = v;
        }
    }

    #[test]
    fn identity_and_sign() {
        let c = modulus_match(3.0, -1.3, 3.0).unwrap();
        assert!((c + 1.3).abs() < 1e-9);
        let c = modulus_match(3.0, 1.0, 2.0).unwrap();
        assert!((c - 4.39).abs() < 0.01, "{c}");
        let k = modulus_k2(2.0, c).unwrap() - modulus_k2(3.0, 1.0).unwrap();
        assert!(k.abs() < 1e-10);
    }

    #[test]
    fn unreachable_target() {
        // k²(2, 0) is the smallest modulus available at p = 2.
        let small = modulus_k2(2.0, 0.0).unwrap();
        let mut found = None;
        for p1 in [2.5, 3.0, 5.0, 10.0] {
            if modulus_k2(p1, 0.0).unwrap() < small {
                found = Some(p1);
            }
        }
        if let Some(p1) = found {
            assert!(matches!(modulus_match(p1, 0.0, 2.0), Err(Error::NoBracket { .. })));
        }
    }
}
