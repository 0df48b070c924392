//! Magnetic trajectories `u' = F u + j_{u_z} u_v` of left-invariant fields,
//! in double precision.
//!
//! Velocity is integrated with classical RK4; the position is advanced by
//! right multiplication with `exp(h u_bar)` in exponential coordinates,
//! `(x, z)(x', z') = (x + x', z + z' + [x, x'] / 2)`, where `u_bar` is the
//! average of the step's endpoint velocities.

use crate::exactmath::rational::to_f64;
use crate::magnetic::LorentzForce;
use crate::nilalgebra::NilAlgebra;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("step size must be positive and T >= dt (dt = {dt}, t = {t})")]
    BadStep { dt: f64, t: f64 },
    #[error("state left the finite range at t = {0}")]
    NonFinite(f64),
}

/// Float copies of the structure constants and the force.
#[derive(Debug, Clone)]
pub struct FlowSystem {
    n: usize,
    m: usize,
    /// `(i, j, c_ij)` for `i < j`.
    brackets: Vec<(usize, usize, Vec<f64>)>,
    force: Vec<Vec<f64>>,
}

impl FlowSystem {
    pub fn new(a: &NilAlgebra, f: &LorentzForce) -> Result<Self, FlowError> {
        if f.dim_v() != a.dim_v() || f.dim_z() != a.dim_z() {
            return Err(FlowError::DimensionMismatch {
                expected: a.dim(),
                got: f.dim_v() + f.dim_z(),
            });
        }
        let brackets = a
            .brackets()
            .iter()
            .map(|(&(i, j), c)| (i, j, c.iter().map(to_f64).collect()))
            .collect();
        let force = f.matrix().to_rows().iter().map(|r| r.iter().map(to_f64).collect()).collect();
        Ok(FlowSystem {
            n: a.dim_v(),
            m: a.dim_z(),
            brackets,
            force,
        })
    }

    pub fn dim(&self) -> usize {
        self.n + self.m
    }

    /// `F u + j_{u_z} u_v`.
    pub fn derivative(&self, u: &[f64]) -> Result<Vec<f64>, FlowError> {
        let d = self.dim();
        if u.len() != d {
            return Err(FlowError::DimensionMismatch { expected: d, got: u.len() });
        }
        let mut out: Vec<f64> = self.force.iter().map(|row| row.iter().zip(u).map(|(a, b)| a * b).sum()).collect();
        let uz = &u[self.n..];
        for (i, j, c) in &self.brackets {
            let w: f64 = c.iter().zip(uz).map(|(a, b)| a * b).sum();
            // <j_Z V_i, V_j> = <Z, [V_i, V_j]>
            out[*j] += w * u[*i];
            out[*i] -= w * u[*j];
        }
        Ok(out)
    }

    /// `[x, y]` for `v`-vectors.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        for (i, j, c) in &self.brackets {
            let w = x[*i] * y[*j] - x[*j] * y[*i];
            if w != 0.0 {
                for (o, ct) in out.iter_mut().zip(c) {
                    *o += w * ct;
                }
            }
        }
        out
    }

    /// Group product in exponential coordinates.
    pub fn compose(&self, (x, z): (&[f64], &[f64]), (x2, z2): (&[f64], &[f64])) -> (Vec<f64>, Vec<f64>) {
        let br = self.bracket(x, x2);
        let xs = x.iter().zip(x2).map(|(a, b)| a + b).collect();
        let zs = z.iter().zip(z2).zip(br).map(|((a, b), c)| a + b + 0.5 * c).collect();
        (xs, zs)
    }
}

/// `F u + j_{u_z} u_v` for one velocity.
pub fn magnetic_derivative(a: &NilAlgebra, f: &LorentzForce, u: &[f64]) -> Result<Vec<f64>, FlowError> {
    FlowSystem::new(a, f)?.derivative(u)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowSample {
    pub t: f64,
    pub u: Vec<f64>,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
}

impl FlowSample {
    pub fn speed(&self) -> f64 {
        self.u.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| yi + a * xi).collect()
}

/// Samples at `t = 0, dt, 2 dt, ...` up to the last step not past `t_end`
/// (within rounding).
pub fn integrate(a: &NilAlgebra, f: &LorentzForce, u0: &[f64], dt: f64, t_end: f64) -> Result<Vec<FlowSample>, FlowError> {
    if !(dt > 0.0) || !(t_end >= dt) || !dt.is_finite() || !t_end.is_finite() {
        return Err(FlowError::BadStep { dt, t: t_end });
    }
    let sys = FlowSystem::new(a, f)?;
    if u0.len() != sys.dim() {
        return Err(FlowError::DimensionMismatch {
            expected: sys.dim(),
            got: u0.len(),
        });
    }
    let (n, m) = (sys.n, sys.m);
    let steps = (t_end / dt + 1e-9).floor() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    let mut u = u0.to_vec();
    let (mut x, mut z) = (vec![0.0; n], vec![0.0; m]);
    out.push(FlowSample {
        t: 0.0,
        u: u.clone(),
        x: x.clone(),
        z: z.clone(),
    });
    for k in 1..=steps {
        let k1 = sys.derivative(&u)?;
        let k2 = sys.derivative(&axpy(dt / 2.0, &k1, &u))?;
        let k3 = sys.derivative(&axpy(dt / 2.0, &k2, &u))?;
        let k4 = sys.derivative(&axpy(dt, &k3, &u))?;
        let next: Vec<f64> = (0..u.len())
            .map(|i| u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        let bar: Vec<f64> = u.iter().zip(&next).map(|(a, b)| 0.5 * dt * (a + b)).collect();
        let (nx, nz) = sys.compose((&x, &z), (&bar[..n], &bar[n..]));
        let t = k as f64 * dt;
        if next.iter().chain(&nx).chain(&nz).any(|c| !c.is_finite()) {
            return Err(FlowError::NonFinite(t));
        }
        u = next;
        x = nx;
        z = nz;
        out.push(FlowSample {
            t,
            u: u.clone(),
            x: x.clone(),
            z: z.clone(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, CatalogId};
    use crate::exactmath::rational::{int, one};
    use proptest::prelude::*;

    fn h3() -> NilAlgebra {
        build(CatalogId::Heisenberg(1)).unwrap()
    }

    #[test]
    fn central_velocity_is_constant() {
        let a = h3();
        let d = magnetic_derivative(&a, &LorentzForce::zero(2, 1), &[0.0, 0.0, 2.0]).unwrap();
        assert_eq!(d, vec![0.0; 3]);
        let run = integrate(&a, &LorentzForce::zero(2, 1), &[0.0, 0.0, 1.5], 0.1, 1.0).unwrap();
        let last = run.last().unwrap();
        assert_eq!(last.u, vec![0.0, 0.0, 1.5]);
        assert!((last.z[0] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn geodesic_derivative_on_h3() {
        let d = magnetic_derivative(&h3(), &LorentzForce::zero(2, 1), &[1.0, 0.0, 1.0]).unwrap();
        assert_eq!(d, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn rotation_in_v() {
        let a = h3();
        let q = 2.0;
        let f = LorentzForce::from_j(&a, &[int(2)]).unwrap();
        let run = integrate(&a, &f, &[1.0, 0.0, 0.0], 1e-3, 2.0).unwrap();
        for s in &run {
            assert!((s.u[0] - (q * s.t).cos()).abs() < 1e-9);
            assert!((s.u[1] - (q * s.t).sin()).abs() < 1e-9);
            assert_eq!(s.u[2], 0.0);
        }
    }

    #[test]
    fn group_law() {
        let a = h3();
        let sys = FlowSystem::new(&a, &LorentzForce::zero(2, 1)).unwrap();
        let (x, z) = sys.compose((&[1.0, 0.0], &[0.0]), (&[0.0, 1.0], &[0.0]));
        assert_eq!((x, z), (vec![1.0, 1.0], vec![0.5]));
    }

    #[test]
    fn errors() {
        let a = h3();
        let f = LorentzForce::zero(2, 1);
        assert!(matches!(integrate(&a, &f, &[1.0, 0.0, 0.0], 0.0, 1.0), Err(FlowError::BadStep { .. })));
        assert!(matches!(integrate(&a, &f, &[1.0, 0.0, 0.0], 1.0, 0.5), Err(FlowError::BadStep { .. })));
        assert!(matches!(integrate(&a, &f, &[1.0, 0.0], 0.1, 1.0), Err(FlowError::DimensionMismatch { .. })));
        let j = LorentzForce::from_j(&a, &[one()]).unwrap();
        assert!(matches!(integrate(&a, &j, &[f64::INFINITY, 0.0, 0.0], 0.5, 1.0), Err(FlowError::NonFinite(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn derivative_is_orthogonal_to_velocity(u in proptest::collection::vec(-3.0f64..3.0, 11), c in proptest::collection::vec(-3i64..4, 55)) {
            let a = build(CatalogId::QuatHeisenberg(2)).unwrap();
            let f = LorentzForce::from_coordinates(8, 3, &c.into_iter().map(int).collect::<Vec<_>>());
            let d = magnetic_derivative(&a, &f, &u).unwrap();
            let ip: f64 = d.iter().zip(&u).map(|(a, b)| a * b).sum();
            prop_assert!(ip.abs() < 1e-9);
        }
    }
}
