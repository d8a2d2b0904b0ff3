use num_complex::Complex64;

use super::CMat3;
use crate::{Error, Result};

/// States the RK4 stepper can advance: a vector space over the reals.
pub trait OdeState: Clone {
    /// self + a * other
    fn axpy(&self, a: f64, other: &Self) -> Self;
    fn is_finite(&self) -> bool;
}

impl OdeState for f64 {
    fn axpy(&self, a: f64, other: &Self) -> Self {
        self + a * other
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl OdeState for Vec<f64> {
    fn axpy(&self, a: f64, other: &Self) -> Self {
        self.iter().zip(other).map(|(u, v)| u + a * v).collect()
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

impl OdeState for CMat3 {
    fn axpy(&self, a: f64, other: &Self) -> Self {
        self + other * Complex64::new(a, 0.0)
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|z| z.is_finite())
    }
}

/// Classical fourth-order Runge–Kutta over `s_span` with
/// ceil(|span| / step) equal steps.
pub fn integrate_ode<S, F>(field: F, initial: S, s_span: (f64, f64), step: f64) -> Result<S>
where
    S: OdeState,
    F: Fn(f64, &S) -> Result<S>,
{
    let (s0, s1) = s_span;
    let span = s1 - s0;
    if span == 0.0 {
        return Ok(initial);
    }
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!("ode step must be positive, got {step}")));
    }
    let n = (span.abs() / step).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut y = initial;
    for k in 0..n {
        let s = s0 + k as f64 * h;
        let k1 = field(s, &y)?;
        let k2 = field(s + h / 2.0, &y.axpy(h / 2.0, &k1))?;
        let k3 = field(s + h / 2.0, &y.axpy(h / 2.0, &k2))?;
        let k4 = field(s + h, &y.axpy(h, &k3))?;
        y = y.axpy(h / 6.0, &k1).axpy(h / 3.0, &k2).axpy(h / 3.0, &k3).axpy(h / 6.0, &k4);
        if !y.is_finite() {
            return Err(Error::NonFiniteState { at: s + h });
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_benchmark() {
        let y = integrate_ode(|_, y: &f64| Ok(*y), 1.0, (0.0, 1.0), 1e-3).unwrap();
        assert!((y - std::f64::consts::E).abs() < 1e-10);
    }

    #[test]
    fn zero_field_returns_initial() {
        let y0 = vec![1.5, -2.0];
        let y = integrate_ode(|_, _: &Vec<f64>| Ok(vec![0.0, 0.0]), y0.clone(), (0.0, 3.0), 0.1).unwrap();
        assert_eq!(y, y0);
    }

    #[test]
    fn blow_up_is_reported() {
        let err = integrate_ode(|_, y: &f64| Ok(y * y), 1.0, (0.0, 2.0), 1e-2).unwrap_err();
        assert!(matches!(err, Error::NonFiniteState { .. }));
    }
}
