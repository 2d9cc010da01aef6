//! Steady advection-diffusion problems and the built-in benchmarks.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub type Field = Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync>;
pub type VectorField = Arc<dyn Fn([f64; 2]) -> [f64; 2] + Send + Sync>;

/// `u . grad(phi) - kappa lap(phi) = f` in the domain, `phi = g` on the
/// boundary.
#[derive(Clone)]
pub struct Problem {
    pub name: String,
    pub velocity: VectorField,
    pub kappa: f64,
    pub source: Field,
    pub dirichlet: Field,
    pub exact: Option<Field>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem").field("name", &self.name).field("kappa", &self.kappa).finish()
    }
}

/// Where the inflow data of the skew benchmark jumps from 0 to 1 on the
/// left edge.
pub const SKEW_SPLIT: f64 = 0.25;

impl Problem {
    /// Advection skew to the mesh on the unit square: unit velocity at
    /// `theta` degrees, `phi = 1` on the left edge above `SKEW_SPLIT`, zero
    /// elsewhere on the boundary.
    pub fn skew(theta_deg: f64, kappa: f64) -> Problem {
        let th = theta_deg.to_radians();
        let u = [th.cos(), th.sin()];
        Problem {
            name: format!("skew{theta_deg}"),
            velocity: Arc::new(move |_| u),
            kappa,
            source: Arc::new(|_| 0.0),
            dirichlet: Arc::new(|x: [f64; 2]| if x[0] <= 1e-12 && x[1] > SKEW_SPLIT { 1.0 } else { 0.0 }),
            exact: None,
        }
    }

    pub fn skew45() -> Problem {
        let mut p = Problem::skew(45.0, 1e-6);
        p.name = "skew45".into();
        p
    }

    /// Smooth manufactured solution `sin(pi x) sin(pi y)` with a moderate
    /// Peclet number.
    pub fn manufactured() -> Problem {
        let u = [1.0, 0.5];
        let kappa = 0.05;
        let exact = |x: [f64; 2]| (PI * x[0]).sin() * (PI * x[1]).sin();
        Problem {
            name: "manufactured".into(),
            velocity: Arc::new(move |_| u),
            kappa,
            source: Arc::new(move |x: [f64; 2]| {
                let (sx, cx) = (PI * x[0]).sin_cos();
                let (sy, cy) = (PI * x[1]).sin_cos();
                u[0] * PI * cx * sy + u[1] * PI * sx * cy + kappa * 2.0 * PI * PI * sx * sy
            }),
            dirichlet: Arc::new(move |x| exact(x)),
            exact: Some(Arc::new(exact)),
        }
    }

    /// Pure diffusion with the linear solution `a + b x + c y`.
    pub fn linear_patch(a: f64, b: f64, c: f64) -> Problem {
        let exact = move |x: [f64; 2]| a + b * x[0] + c * x[1];
        Problem {
            name: "patch".into(),
            velocity: Arc::new(|_| [0.0, 0.0]),
            kappa: 1.0,
            source: Arc::new(|_| 0.0),
            dirichlet: Arc::new(move |x| exact(x)),
            exact: Some(Arc::new(exact)),
        }
    }

    /// Same data with velocity and diffusivity multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Problem {
        let u = self.velocity.clone();
        let src = self.source.clone();
        Problem {
            name: format!("{}*{c}", self.name),
            velocity: Arc::new(move |x| {
                let v = u(x);
                [c * v[0], c * v[1]]
            }),
            kappa: c * self.kappa,
            source: Arc::new(move |x| c * src(x)),
            dirichlet: self.dirichlet.clone(),
            exact: self.exact.clone(),
        }
    }
}
