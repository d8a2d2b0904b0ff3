use crate::numerics::{numeric_jet2, Jet2, Vec3};
use crate::{Error, Result};

/// A parametrized surface that can report second-order jets.
pub trait Surface: Send + Sync {
    fn jet(&self, x: f64, y: f64) -> Result<Jet2>;

    fn position(&self, x: f64, y: f64) -> Result<Vec3> {
        Ok(self.jet(x, y)?.r)
    }
}

impl<F> Surface for F
where
    F: Fn(f64, f64) -> Result<Jet2> + Send + Sync,
{
    fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        self(x, y)
    }
}

/// Position-only sampler whose jets come from finite differences.
pub struct FdSurface<F> {
    pub sampler: F,
    pub step: f64,
}

impl<F> FdSurface<F>
where
    F: Fn(f64, f64) -> Result<Vec3> + Send + Sync,
{
    pub fn new(sampler: F, step: f64) -> Self {
        Self { sampler, step }
    }
}

impl<F> Surface for FdSurface<F>
where
    F: Fn(f64, f64) -> Result<Vec3> + Send + Sync,
{
    fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        let h = self.step * (1.0 + x.abs().max(y.abs()));
        numeric_jet2(&self.sampler, (x, y), h)
    }

    fn position(&self, x: f64, y: f64) -> Result<Vec3> {
        (self.sampler)(x, y)
    }
}

/// Uniform rectangular parameter grid, traversed row-major (y outer).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidParameter("grid needs at least one node per axis".into()));
        }
        if !(x.0.is_finite() && x.1.is_finite() && y.0.is_finite() && y.1.is_finite()) {
            return Err(Error::InvalidParameter("grid ranges must be finite".into()));
        }
        Ok(Self { x, y, nx, ny })
    }

    fn coord(range: (f64, f64), n: usize, i: usize) -> f64 {
        if n == 1 {
            return 0.5 * (range.0 + range.1);
        }
        range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.nx).map(|i| Self::coord(self.x, self.nx, i)).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|j| Self::coord(self.y, self.ny, j)).collect()
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        let xs = self.xs();
        self.ys().into_iter().flat_map(|y| xs.iter().map(move |&x| (x, y))).collect()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
