use crate::numerics::{Mat3, Vec3};
use crate::{Error, Result};

use super::coeffs::check_pq;

/// One of the five semi-homogeneous cone types of ℝ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSpec {
    pub case_id: u8,
    pub p: f64,
    pub q: f64,
    /// Lower opening of case 4, x₂ ≥ −α x₁^{1/p} x₃^{1/q}.
    pub alpha: f64,
    /// Upper opening, x₂ ≤ β x₁^{1/p} x₃^{1/q} (cases 3–5).
    pub beta: f64,
}

impl ConeSpec {
    pub fn new(case_id: u8, p: f64, alpha: f64) -> Result<Self> {
        let q = if (3..=5).contains(&case_id) { super::coeffs::conjugate(p)? } else { 2.0 };
        let spec = Self { case_id, p: if (3..=5).contains(&case_id) { p } else { 2.0 }, q, alpha, beta: 1.0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=5).contains(&self.case_id) {
            return Err(Error::InvalidParameter(format!("cone case must be 1..5, got {}", self.case_id)));
        }
        if (3..=5).contains(&self.case_id) {
            check_pq(self.p, self.q)?;
            if !(self.beta > 0.0) {
                return Err(Error::InvalidParameter(format!("beta must be positive, got {}", self.beta)));
            }
        }
        if self.case_id == 4 && !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1], got {}", self.alpha)));
        }
        Ok(())
    }

    fn mean(&self, x: &Vec3) -> f64 {
        x[0].max(0.0).powf(1.0 / self.p) * x[2].max(0.0).powf(1.0 / self.q)
    }

    /// Smallest slack among the defining inequalities, each homogeneous of
    /// degree one; negative outside the cone.
    pub fn slack(&self, x: &Vec3) -> f64 {
        match self.case_id {
            1 => {
                if x[2] > 0.0 {
                    let bound = x[2] * (x[0] / x[2]).exp();
                    let s = x[1] - bound;
                    if s.is_nan() {
                        f64::NEG_INFINITY
                    } else {
                        s.min(x[2])
                    }
                } else if x[2] == 0.0 {
                    x[1].min(-x[0])
                } else {
                    x[2]
                }
            }
            2 => x[0].min(x[1]).min(x[2]),
            3 => x[0].min(x[2]).min(self.beta * self.mean(x) - x[1]),
            4 => {
                let m = self.mean(x);
                x[0].min(x[2]).min(self.beta * m - x[1]).min(x[1] + self.alpha * m)
            }
            _ => x[0].min(x[2]).min(self.beta * self.mean(x) - x[1]).min(x[1]),
        }
    }

    /// Slack of the direction x/|x|.
    pub fn boundary_distance(&self, x: &Vec3) -> f64 {
        let n = x.norm();
        if n == 0.0 {
            return 0.0;
        }
        self.slack(&(x / n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Membership {
    Inside,
    Boundary(f64),
    Outside,
}

/// Relative slack below which a point counts as lying on the boundary.
pub const BOUNDARY_TOL: f64 = 1e-9;

pub fn cone_contains(spec: &ConeSpec, point: &Vec3) -> Membership {
    let d = spec.boundary_distance(point);
    if d.abs() <= BOUNDARY_TOL {
        Membership::Boundary(d.abs())
    } else if d > 0.0 {
        Membership::Inside
    } else {
        Membership::Outside
    }
}

/// A cone together with the linear map taking surface coordinates into the
/// cone's standard coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeEmbedding {
    pub spec: ConeSpec,
    pub map: Mat3,
}

impl ConeEmbedding {
    pub fn contains(&self, r: &Vec3) -> Membership {
        cone_contains(&self.spec, &(self.map * r))
    }

    pub fn boundary_distance(&self, r: &Vec3) -> f64 {
        self.spec.boundary_distance(&(self.map * r))
    }
}

/// Map (r₁, r₂, r₃) ↦ (r₁, k·r₃, r₂).
pub(crate) fn swap_map(k: f64) -> Mat3 {
    Mat3::new(1.0, 0.0, 0.0, 0.0, 0.0, k, 0.0, 1.0, 0.0)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
}

impl Mesh {
    /// Row-major grid of vertices, two triangles per cell.
    pub fn from_grid(vertices: Vec<Vec3>, nx: usize, ny: usize) -> Self {
        let mut mesh = Mesh { vertices: Vec::new(), triangles: Vec::new() };
        mesh.append_grid(vertices, nx, ny);
        mesh
    }

    fn append_grid(&mut self, vertices: Vec<Vec3>, nx: usize, ny: usize) {
        let base = self.vertices.len();
        for j in 0..ny.saturating_sub(1) {
            for i in 0..nx.saturating_sub(1) {
                let v00 = base + j * nx + i;
                let v10 = v00 + 1;
                let v01 = v00 + nx;
                let v11 = v01 + 1;
                self.triangles.push([v00, v10, v11]);
                self.triangles.push([v00, v11, v01]);
            }
        }
        self.vertices.extend(vertices);
    }
}

/// Triangulated truncation of the cone boundary inside the unit box.
pub fn cone_mesh(spec: &ConeSpec, resolution: usize) -> Result<Mesh> {
    spec.validate()?;
    if resolution < 2 {
        return Err(Error::InvalidParameter("mesh resolution must be at least 2".into()));
    }
    let n = resolution;
    let lin = |k: usize| k as f64 / (n - 1) as f64;
    let mut mesh = Mesh::default();
    let mut sheet = |f: &dyn Fn(f64, f64) -> Vec3| {
        let mut vs = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                vs.push(f(lin(i), lin(j)));
            }
        }
        mesh.append_grid(vs, n, n);
    };
    let (ip, iq) = (1.0 / spec.p, 1.0 / spec.q);
    let upper = move |u: f64, rho: f64| {
        let (x1, x3) = (rho * (1.0 - u), rho * u);
        Vec3::new(x1, spec.beta * x1.powf(ip) * x3.powf(iq), x3)
    };
    match spec.case_id {
        1 => sheet(&|u, rho| {
            let w = 5.0 * u - 4.0;
            Vec3::new(rho * w, rho * w.exp(), rho)
        }),
        2 => {
            sheet(&|u, v| Vec3::new(0.0, u, v));
            sheet(&|u, v| Vec3::new(u, 0.0, v));
            sheet(&|u, v| Vec3::new(u, v, 0.0));
        }
        3 => sheet(&upper),
        4 => {
            sheet(&upper);
            let alpha = spec.alpha;
            sheet(&|u, rho| {
                let v = upper(u, rho);
                Vec3::new(v[0], -alpha * v[1] / spec.beta, v[2])
            });
        }
        _ => {
            sheet(&upper);
            sheet(&|u, v| Vec3::new(u, 0.0, v));
        }
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_examples() {
        let orthant = ConeSpec::new(2, 2.0, 1.0).unwrap();
        assert_eq!(cone_contains(&orthant, &Vec3::new(1.0, 1.0, 1.0)), Membership::Inside);
        let c3 = ConeSpec::new(3, 2.0, 1.0).unwrap();
        assert_eq!(cone_contains(&c3, &Vec3::new(1.0, 0.9, 1.0)), Membership::Inside);
        let c4 = ConeSpec::new(4, 2.0, 1.0).unwrap();
        assert_eq!(cone_contains(&c4, &Vec3::new(1.0, -1.1, 1.0)), Membership::Outside);
        assert_eq!(cone_contains(&c4, &Vec3::new(1.0, -0.9, 1.0)), Membership::Inside);
        let c5 = ConeSpec::new(5, 3.0, 1.0).unwrap();
        assert_eq!(cone_contains(&c5, &Vec3::new(1.0, -0.1, 1.0)), Membership::Outside);
    }

    #[test]
    fn exponential_cone() {
        let c1 = ConeSpec::new(1, 2.0, 1.0).unwrap();
        assert_eq!(cone_contains(&c1, &Vec3::new(0.0, 2.0, 1.0)), Membership::Inside);
        assert_eq!(cone_contains(&c1, &Vec3::new(1.0, 2.0, 1.0)), Membership::Outside);
        assert!(matches!(cone_contains(&c1, &Vec3::new(0.0, 1.0, 1.0)), Membership::Boundary(_)));
    }

    #[test]
    fn mesh_vertices_lie_on_boundary() {
        for (case, p, alpha) in [(1, 2.0, 1.0), (2, 2.0, 1.0), (3, 5.0, 1.0), (4, 3.0, 0.4), (5, 2.5, 1.0)] {
            let spec = ConeSpec::new(case, p, alpha).unwrap();
            let mesh = cone_mesh(&spec, 9).unwrap();
            assert!(!mesh.triangles.is_empty());
            for v in &mesh.vertices {
                assert!(
                    matches!(cone_contains(&spec, v), Membership::Boundary(_)),
                    "case {case}: {v:?} slack {}",
                    spec.boundary_distance(v)
                );
            }
        }
    }

    #[test]
    fn orthant_mesh_is_three_quarter_planes() {
        let mesh = cone_mesh(&ConeSpec::new(2, 2.0, 1.0).unwrap(), 4).unwrap();
        assert_eq!(mesh.vertices.len(), 3 * 16);
        assert_eq!(mesh.triangles.len(), 3 * 2 * 9);
    }
}
