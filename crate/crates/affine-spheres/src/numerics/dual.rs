use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Complex value together with its first and second partial derivatives
/// in two real variables (x, y). Arithmetic propagates the derivatives
/// exactly, so closed-form surfaces get analytic jets for free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual2 {
    pub v: Complex64,
    pub x: Complex64,
    pub y: Complex64,
    pub xx: Complex64,
    pub xy: Complex64,
    pub yy: Complex64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Dual2 {
    pub fn constant(v: impl Into<Complex64>) -> Self {
        Self { v: v.into(), x: ZERO, y: ZERO, xx: ZERO, xy: ZERO, yy: ZERO }
    }

    pub fn var_x(x: f64) -> Self {
        Self { x: ONE, ..Self::constant(x) }
    }

    pub fn var_y(y: f64) -> Self {
        Self { y: ONE, ..Self::constant(y) }
    }

    /// Chain rule: h(self) given h, h', h'' evaluated at self.v.
    pub fn compose(self, h0: Complex64, h1: Complex64, h2: Complex64) -> Self {
        Self {
            v: h0,
            x: h1 * self.x,
            y: h1 * self.y,
            xx: h2 * self.x * self.x + h1 * self.xx,
            xy: h2 * self.x * self.y + h1 * self.xy,
            yy: h2 * self.y * self.y + h1 * self.yy,
        }
    }

    pub fn scale(self, k: Complex64) -> Self {
        Self { v: self.v * k, x: self.x * k, y: self.y * k, xx: self.xx * k, xy: self.xy * k, yy: self.yy * k }
    }

    pub fn recip(self) -> Self {
        let r = self.v.inv();
        self.compose(r, -r * r, 2.0 * r * r * r)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.compose(e, e, e)
    }

    pub fn ln(self) -> Self {
        let r = self.v.inv();
        self.compose(self.v.ln(), r, -r * r)
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.compose(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn powc(self, a: Complex64) -> Self {
        let f = self.v.powc(a);
        let f1 = a * self.v.powc(a - 1.0);
        let f2 = a * (a - 1.0) * self.v.powc(a - 2.0);
        self.compose(f, f1, f2)
    }

    pub fn powf(self, a: f64) -> Self {
        self.powc(Complex64::new(a, 0.0))
    }

    pub fn sin(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.compose(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = (self.v.sin(), self.v.cos());
        self.compose(c, -s, -c)
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.compose(s, c, s)
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.compose(c, s, c)
    }

    pub fn coth(self) -> Self {
        let ct = self.v.cosh() / self.v.sinh();
        let d1 = ONE - ct * ct;
        self.compose(ct, d1, -2.0 * ct * d1)
    }

    pub fn re(&self) -> [f64; 6] {
        [self.v.re, self.x.re, self.y.re, self.xx.re, self.xy.re, self.yy.re]
    }

    /// Largest imaginary part across all slots.
    pub fn max_imag(&self) -> f64 {
        [self.v, self.x, self.y, self.xx, self.xy, self.yy].iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        [self.v, self.x, self.y, self.xx, self.xy, self.yy].iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        [self.v, self.x, self.y, self.xx, self.xy, self.yy].iter().all(|z| z.is_finite())
    }
}

impl Add for Dual2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            x: self.x + o.x,
            y: self.y + o.y,
            xx: self.xx + o.xx,
            xy: self.xy + o.xy,
            yy: self.yy + o.yy,
        }
    }
}

impl AddAssign for Dual2 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Dual2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Dual2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul for Dual2 {
    type Output = Self;
    fn mul(self, g: Self) -> Self {
        let f = self;
        Self {
            v: f.v * g.v,
            x: f.x * g.v + f.v * g.x,
            y: f.y * g.v + f.v * g.y,
            xx: f.xx * g.v + 2.0 * f.x * g.x + f.v * g.xx,
            xy: f.xy * g.v + f.x * g.y + f.y * g.x + f.v * g.xy,
            yy: f.yy * g.v + 2.0 * f.y * g.y + f.v * g.yy,
        }
    }
}

impl Div for Dual2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, g: Self) -> Self {
        self * g.recip()
    }
}

macro_rules! scalar_ops {
    ($t:ty, $conv:expr) => {
        impl Add<$t> for Dual2 {
            type Output = Dual2;
            fn add(mut self, k: $t) -> Dual2 {
                self.v += $conv(k);
                self
            }
        }
        impl Sub<$t> for Dual2 {
            type Output = Dual2;
            fn sub(mut self, k: $t) -> Dual2 {
                self.v -= $conv(k);
                self
            }
        }
        impl Mul<$t> for Dual2 {
            type Output = Dual2;
            fn mul(self, k: $t) -> Dual2 {
                self.scale($conv(k))
            }
        }
        impl Div<$t> for Dual2 {
            type Output = Dual2;
            fn div(self, k: $t) -> Dual2 {
                self.scale(ONE / $conv(k))
            }
        }
        impl Mul<Dual2> for $t {
            type Output = Dual2;
            fn mul(self, d: Dual2) -> Dual2 {
                d.scale($conv(self))
            }
        }
        impl Add<Dual2> for $t {
            type Output = Dual2;
            fn add(self, d: Dual2) -> Dual2 {
                d + self
            }
        }
        impl Sub<Dual2> for $t {
            type Output = Dual2;
            fn sub(self, d: Dual2) -> Dual2 {
                -d + self
            }
        }
    };
}

scalar_ops!(f64, |k: f64| Complex64::new(k, 0.0));
scalar_ops!(Complex64, |k: Complex64| k);
