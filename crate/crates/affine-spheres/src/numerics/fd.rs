use super::{Jet2, Vec3};
use crate::{Error, Result};

/// Central-difference jet with one level of Richardson extrapolation
/// (steps h and 2h), giving O(h^4) error for smooth samplers.
pub fn numeric_jet2<F>(sampler: F, point: (f64, f64), step: f64) -> Result<Jet2>
where
    F: Fn(f64, f64) -> Result<Vec3>,
{
    let (x, y) = point;
    let eval = |i: i32, j: i32| -> Result<Vec3> {
        let (px, py) = (x + i as f64 * step, y + j as f64 * step);
        match sampler(px, py) {
            Ok(v) if v.iter().all(|c| c.is_finite()) => Ok(v),
            _ => Err(Error::StencilOutOfDomain { x: px, y: py }),
        }
    };
    let mut g = [[Vec3::zeros(); 5]; 5];
    for i in -2..=2i32 {
        for j in -2..=2i32 {
            if i.abs() == j.abs() || i == 0 || j == 0 {
                g[(i + 2) as usize][(j + 2) as usize] = eval(i, j)?;
            }
        }
    }
    let at = |i: i32, j: i32| g[(i + 2) as usize][(j + 2) as usize];
    let h = step;
    let rich = |fine: Vec3, coarse: Vec3| (4.0 * fine - coarse) / 3.0;

    let r = at(0, 0);
    let dx = |k: i32| (at(k, 0) - at(-k, 0)) / (2.0 * k as f64 * h);
    let dy = |k: i32| (at(0, k) - at(0, -k)) / (2.0 * k as f64 * h);
    let dxx = |k: i32| (at(k, 0) - 2.0 * r + at(-k, 0)) / ((k as f64 * h).powi(2));
    let dyy = |k: i32| (at(0, k) - 2.0 * r + at(0, -k)) / ((k as f64 * h).powi(2));
    let dxy = |k: i32| (at(k, k) - at(k, -k) - at(-k, k) + at(-k, -k)) / (4.0 * (k as f64 * h).powi(2));

    Ok(Jet2 {
        r,
        r_x: rich(dx(1), dx(2)),
        r_y: rich(dy(1), dy(2)),
        r_xx: rich(dxx(1), dxx(2)),
        r_xy: rich(dxy(1), dxy(2)),
        r_yy: rich(dyy(1), dyy(2)),
        at: point,
    })
}

/// Richardson-extrapolated central first derivative of a scalar function.
pub fn derivative1<F>(f: F, x: f64, step: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let d = |k: f64| -> Result<f64> { Ok((f(x + k * step)? - f(x - k * step)?) / (2.0 * k * step)) };
    Ok((4.0 * d(1.0)? - d(2.0)?) / 3.0)
}
