//! Fixed-step RK4 integration of Lie–Poisson dynamics with drift monitoring.

use crate::error::{Error, Result};
use crate::lie::phase_space_labels;
use crate::orbit::{
    angular_residual, free_hamiltonian, momentum_maps, orbit_casimir, plucker_aux_residual, quadratic_casimirs, Branch,
    ChartPoint, DualPoint, PoissonStructure,
};
use crate::params::DeformationParams;
use crate::poly::Polynomial;
use crate::tolerance::Tolerances;
use serde::{Deserialize, Serialize};
use num_traits::Zero;
use std::io::Write;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftMetrics {
    pub hamiltonian: f64,
    /// One entry per central quadratic, in `quadratic_casimirs` order.
    pub casimirs: Vec<f64>,
    pub orbit_casimir: f64,
    pub angular_growth: f64,
    pub plucker_growth: f64,
    /// Per-component drift of `μ0 = (l, p)`; present on the family `eps1 = eps3 = 0`.
    pub mu0: Option<Vec<f64>>,
}

impl DriftMetrics {
    pub fn max_mu0(&self) -> Option<f64> {
        self.mu0.as_ref().map(|v| v.iter().copied().fold(0.0, f64::max))
    }
    pub fn max_casimir(&self) -> f64 {
        self.casimirs.iter().copied().fold(self.orbit_casimir, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub params: DeformationParams,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub drift: DriftMetrics,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowSettings {
    pub t_end: f64,
    pub dt: f64,
    /// Keep every `stride`-th state; drift is monitored at every step.
    pub stride: usize,
}

impl FlowSettings {
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

fn rk4_step(ps: &PoissonStructure, h: &Polynomial, y: &[f64], dt: f64, k: &mut [Vec<f64>; 4], tmp: &mut Vec<f64>) {
    let d = y.len();
    ps.vector_field(y, &h.gradient_f64(y), &mut k[0]);
    for stage in 1..4 {
        let c = if stage == 3 { dt } else { dt / 2.0 };
        for i in 0..d {
            tmp[i] = y[i] + c * k[stage - 1][i];
        }
        let g = h.gradient_f64(tmp);
        ps.vector_field(tmp, &g, &mut k[stage]);
    }
    for i in 0..d {
        tmp[i] = y[i] + dt / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]);
    }
}

/// Integrates `ξ̇ = Π(ξ) ∇H` from `point0` with classical RK4; no projection.
pub fn hamiltonian_flow(h: &Polynomial, point0: &DualPoint, settings: FlowSettings) -> Result<Trajectory> {
    if !(settings.dt > 0.0) || !(settings.t_end >= 0.0) || settings.stride == 0 {
        return Err(Error::Parameter("need dt > 0, T >= 0 and stride >= 1".into()));
    }
    let params = &point0.params;
    let ps = PoissonStructure::for_params(params);
    let casimirs = quadratic_casimirs(params);
    let k_orbit = orbit_casimir(params)?;
    let track_mu0 = params.e1().is_zero() && params.e3().is_zero();

    let y0 = point0.coords.clone();
    let h0 = h.eval_f64(&y0);
    let c0: Vec<f64> = casimirs.iter().map(|c| c.eval(&y0)).collect();
    let k0 = k_orbit.eval(&y0);
    let a0 = angular_residual(point0);
    let pl0 = plucker_aux_residual(point0);
    let mu_start = momentum_maps(point0).mu0_flat();

    let mut drift = DriftMetrics {
        hamiltonian: 0.0,
        casimirs: vec![0.0; c0.len()],
        orbit_casimir: 0.0,
        angular_growth: 0.0,
        plucker_growth: 0.0,
        mu0: track_mu0.then(|| vec![0.0; mu_start.len()]),
    };
    let steps = settings.steps();
    let mut times = vec![0.0];
    let mut states = vec![y0.clone()];
    let mut y = y0;
    let d = y.len();
    let mut k = [vec![0.0; d], vec![0.0; d], vec![0.0; d], vec![0.0; d]];
    let mut tmp = vec![0.0; d];
    for step in 1..=steps {
        rk4_step(&ps, h, &y, settings.dt, &mut k, &mut tmp);
        std::mem::swap(&mut y, &mut tmp);
        let pt = DualPoint { params: params.clone(), coords: y.clone() };
        drift.hamiltonian = drift.hamiltonian.max((h.eval_f64(&y) - h0).abs());
        for (m, (c, v0)) in drift.casimirs.iter_mut().zip(casimirs.iter().zip(&c0)) {
            *m = m.max((c.eval(&y) - v0).abs());
        }
        drift.orbit_casimir = drift.orbit_casimir.max((k_orbit.eval(&y) - k0).abs());
        drift.angular_growth = drift.angular_growth.max(angular_residual(&pt) - a0);
        drift.plucker_growth = drift.plucker_growth.max(plucker_aux_residual(&pt) - pl0);
        if let Some(mu) = drift.mu0.as_mut() {
            for (m, (v, v0)) in mu.iter_mut().zip(momentum_maps(&pt).mu0_flat().iter().zip(&mu_start)) {
                *m = m.max((v - v0).abs());
            }
        }
        if step % settings.stride == 0 || step == steps {
            times.push(step as f64 * settings.dt);
            states.push(y.clone());
        }
    }
    Ok(Trajectory { params: params.clone(), times, states, drift })
}

/// Max distance of the points from the line through the first point and the farthest one.
pub fn collinearity(points: &[Vec<f64>]) -> f64 {
    let Some(first) = points.first() else { return 0.0 };
    let diff = |p: &Vec<f64>| p.iter().zip(first).map(|(a, b)| a - b).collect::<Vec<f64>>();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let far = points.iter().map(diff).max_by(|a, b| norm(a).total_cmp(&norm(b))).unwrap();
    let len = norm(&far);
    if len == 0.0 {
        return 0.0;
    }
    let u: Vec<f64> = far.iter().map(|x| x / len).collect();
    points
        .iter()
        .map(|p| {
            let v = diff(p);
            let t: f64 = v.iter().zip(&u).map(|(a, b)| a * b).sum();
            norm(&v.iter().zip(&u).map(|(a, b)| a - t * b).collect::<Vec<_>>())
        })
        .fold(0.0, f64::max)
}

impl Trajectory {
    pub fn point(&self, k: usize) -> DualPoint {
        DualPoint { params: self.params.clone(), coords: self.states[k].clone() }
    }

    /// Gnomonic images `q = x / I` of the stored states.
    pub fn gnomonic(&self) -> Result<Vec<Vec<f64>>> {
        (0..self.states.len()).map(|k| self.point(k).q()).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let n = self.params.n;
        let labels = phase_space_labels(n);
        let k = orbit_casimir(&self.params)?;
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["t".to_string(), "I".into()];
        header.extend((1..=n).map(|i| format!("x_{i}")));
        header.extend((1..=n).map(|i| format!("p_{i}")));
        header.extend(labels.iter().take(n * (n - 1) / 2).map(|l| l.to_string()));
        header.extend(["H0".into(), "K".into(), "max_angular_residual".into()]);
        w.write_record(&header).map_err(io_err)?;
        for (t, s) in self.times.iter().zip(&self.states) {
            let pt = DualPoint { params: self.params.clone(), coords: s.clone() };
            let mut row = vec![t.to_string(), pt.i().to_string()];
            row.extend(pt.x().iter().map(f64::to_string));
            row.extend(pt.p().iter().map(f64::to_string));
            row.extend(s[..n * (n - 1) / 2].iter().map(f64::to_string));
            row.push(free_hamiltonian(&pt).to_string());
            row.push(k.eval(s).to_string());
            row.push(angular_residual(&pt).to_string());
            w.write_record(&row).map_err(io_err)?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(())
    }
}

fn io_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Reproducibility record written next to a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub params: DeformationParams,
    pub q0: Vec<f64>,
    pub p0: Vec<f64>,
    pub branch: Branch,
    pub integrator: String,
    pub settings: FlowSettings,
    pub steps: usize,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub drift: DriftMetrics,
    pub collinearity: Option<f64>,
}

/// Runs the free-motion flow from a chart point on the family `(0, eps2, 0)`.
pub fn simulate_free_motion(
    params: &DeformationParams,
    start: &ChartPoint,
    branch: Branch,
    settings: FlowSettings,
    tolerances: Tolerances,
    seed: Option<u64>,
) -> Result<(Trajectory, RunManifest)> {
    let pt = crate::orbit::chart_to_point(params, start, branch)?;
    let h = crate::orbit::free_hamiltonian_poly(params);
    let traj = hamiltonian_flow(&h, &pt, settings)?;
    let collinearity = traj.gnomonic().ok().map(|q| collinearity(&q));
    let manifest = RunManifest {
        params: params.clone(),
        q0: start.q.clone(),
        p0: start.p.clone(),
        branch,
        integrator: "rk4".into(),
        settings,
        steps: settings.steps(),
        seed,
        tolerances,
        drift: traj.drift.clone(),
        collinearity,
    };
    Ok((traj, manifest))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_flow_is_linear() {
        let p = DeformationParams::zero(3);
        let c = ChartPoint::new(vec![0.1, -0.2, 0.3], vec![0.5, 0.25, -1.0]).unwrap();
        let s = FlowSettings { t_end: 2.0, dt: 0.01, stride: 10 };
        let (tr, _) = simulate_free_motion(&p, &c, Branch::Positive, s, Tolerances::default(), None).unwrap();
        for (t, q) in tr.times.iter().zip(tr.gnomonic().unwrap()) {
            for i in 0..3 {
                assert!((q[i] - (c.q[i] + t * c.p[i])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sphere_conservation() {
        let p = DeformationParams::from_ints(3, [0, 1, 0]);
        let c = ChartPoint::new(vec![0.0; 3], vec![1.0, 0.0, 0.0]).unwrap();
        let s = FlowSettings { t_end: 10.0, dt: 1e-3, stride: 100 };
        let (tr, m) = simulate_free_motion(&p, &c, Branch::Positive, s, Tolerances::default(), None).unwrap();
        assert!(tr.drift.hamiltonian <= 1e-8);
        assert!(tr.drift.max_casimir() <= 1e-8);
        assert!(tr.drift.max_mu0().unwrap() <= 1e-8);
        assert!(m.collinearity.unwrap() <= 1e-6);
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,I,x_1,x_2,x_3,p_1,p_2,p_3,l_12,l_13,l_23,H0,K,max_angular_residual\n"));
    }

    #[test]
    fn collinearity_detects_bend() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.5], vec![2.0, 0.0]];
        assert!((collinearity(&pts) - 0.5).abs() < 1e-15);
    }
}
