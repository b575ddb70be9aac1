//! Oriented 2-planes in `R^{n+2}` and their Plücker coordinates in the phase-space basis.

use crate::error::{Error, Result};
use crate::lie::{phase_space_labels, wedge_label};
use crate::orbit::{CasimirQuadratic, Layout};
use serde::{Deserialize, Serialize};

/// Ordered spanning pair; the order fixes the orientation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientedPlane {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl OrientedPlane {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() || u.len() < 3 {
            return Err(Error::DimensionMismatch { expected: u.len().max(3), found: v.len() });
        }
        let gram = dot(&u, &u) * dot(&v, &v) - dot(&u, &v).powi(2);
        let scale = dot(&u, &u) * dot(&v, &v);
        if !(gram > 1e-24 * scale) || scale == 0.0 {
            return Err(Error::Parameter("spanning vectors are linearly dependent".into()));
        }
        Ok(OrientedPlane { u, v })
    }

    /// Two rows of length `n + 2`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        match rows {
            [u, v] => Self::new(u.clone(), v.clone()),
            _ => Err(Error::Parse("a plane is two rows".into())),
        }
    }

    pub fn n(&self) -> usize {
        self.u.len() - 2
    }

    pub fn flipped(&self) -> Self {
        OrientedPlane { u: self.v.clone(), v: self.u.clone() }
    }

    pub fn rows(&self) -> [Vec<f64>; 2] {
        [self.u.clone(), self.v.clone()]
    }
}

/// Coefficients `l_ab`, `a < b`, stored in the frozen order `l_ij, x_i, p_i, I`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BivectorCoords {
    pub n: usize,
    pub coords: Vec<f64>,
}

impl BivectorCoords {
    pub fn new(n: usize, coords: Vec<f64>) -> Result<Self> {
        let d = Layout { n }.dim();
        if coords.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: coords.len() });
        }
        Ok(BivectorCoords { n, coords })
    }

    fn slot(&self, a: usize, b: usize) -> usize {
        let label = wedge_label(self.n, a, b);
        phase_space_labels(self.n).iter().position(|&l| l == label).expect("label")
    }

    /// Signed `l_ab` for `1 <= a, b <= n + 2`.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self.coords[self.slot(a, b)],
            std::cmp::Ordering::Greater => -self.coords[self.slot(b, a)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    pub fn i(&self) -> f64 {
        self.coords[Layout { n: self.n }.i()]
    }

    pub fn negated(&self) -> Self {
        BivectorCoords { n: self.n, coords: self.coords.iter().map(|c| -c).collect() }
    }

    /// Antisymmetric `(n+2) x (n+2)` matrix of the bivector.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let m = self.n + 2;
        (1..=m).map(|a| (1..=m).map(|b| self.get(a, b)).collect()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Normalization<'a> {
    None,
    /// Rescale both spanning vectors so that `|I| = 1`.
    ChartU,
    /// Rescale both spanning vectors so that the Casimir equals `level^2`.
    Orbit { casimir: &'a CasimirQuadratic, level: f64 },
}

fn wedge(n: usize, u: &[f64], v: &[f64]) -> BivectorCoords {
    let labels = phase_space_labels(n);
    let mut coords = vec![0.0; labels.len()];
    for a in 1..=n + 2 {
        for b in a + 1..=n + 2 {
            let k = labels.iter().position(|&l| l == wedge_label(n, a, b)).expect("label");
            coords[k] = u[a - 1] * v[b - 1] - u[b - 1] * v[a - 1];
        }
    }
    BivectorCoords { n, coords }
}

/// Plücker coordinates `l_ab = u_a v_b - u_b v_a`, with optional rescaling of the spanning pair.
pub fn plucker(plane: &OrientedPlane, norm: Normalization<'_>) -> Result<BivectorCoords> {
    let n = plane.n();
    let raw = wedge(n, &plane.u, &plane.v);
    let s = match norm {
        Normalization::None => return Ok(raw),
        Normalization::ChartU => {
            let i = raw.i();
            if i.abs() < 1e-12 {
                return Err(Error::OutsideChart(i));
            }
            1.0 / i.abs().sqrt()
        }
        Normalization::Orbit { casimir, level } => {
            let k = casimir.eval(&raw.coords);
            if !(k > 0.0) {
                return Err(Error::Parameter(format!("Casimir value {k} cannot be scaled to a positive level")));
            }
            (level * level / k).powf(0.25)
        }
    };
    let u: Vec<f64> = plane.u.iter().map(|x| x * s).collect();
    let v: Vec<f64> = plane.v.iter().map(|x| x * s).collect();
    Ok(wedge(n, &u, &v))
}

/// Max violation of `l_ab l_cd - l_ac l_bd + l_ad l_bc = 0` over `a < b < c < d`.
pub fn plucker_residuals(b: &BivectorCoords) -> f64 {
    let m = b.n + 2;
    let l = b.matrix();
    let mut worst = 0.0f64;
    for a in 0..m {
        for bb in a + 1..m {
            for c in bb + 1..m {
                for d in c + 1..m {
                    let r = l[a][bb] * l[c][d] - l[a][c] * l[bb][d] + l[a][d] * l[bb][c];
                    worst = worst.max(r.abs());
                }
            }
        }
    }
    worst
}

/// Oriented plane with `plucker(plane, None) == b`, built from the two rows of the bivector
/// matrix meeting at its largest entry.
pub fn point_to_plane(b: &BivectorCoords, tol: f64) -> Result<OrientedPlane> {
    let i = b.i();
    if i.abs() < 1e-12 {
        return Err(Error::OutsideChart(i));
    }
    let scale = b.coords.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let res = plucker_residuals(b);
    if res > tol * scale.max(1.0).powi(2) {
        return Err(Error::NotDecomposable(res));
    }
    let l = b.matrix();
    let m = b.n + 2;
    let (mut ra, mut rb, mut best) = (0, 1, 0.0f64);
    for a in 0..m {
        for c in a + 1..m {
            if l[a][c].abs() > best {
                (ra, rb, best) = (a, c, l[a][c].abs());
            }
        }
    }
    let piv = l[ra][rb];
    let u: Vec<f64> = l[ra].iter().map(|x| x / piv).collect();
    let v = l[rb].clone();
    OrientedPlane::new(u, v)
}

/// Whether two planes span the same subspace with the same orientation.
pub fn same_oriented_plane(a: &OrientedPlane, b: &OrientedPlane, tol: f64) -> bool {
    let pa = wedge(a.n(), &a.u, &a.v);
    let pb = wedge(b.n(), &b.u, &b.v);
    let na = pa.coords.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = pb.coords.iter().map(|x| x * x).sum::<f64>().sqrt();
    pa.coords.iter().zip(&pb.coords).all(|(x, y)| (x / na - y / nb).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{orbit_casimir, orbit_residuals, DualPoint, OrbitSpec};
    use crate::params::DeformationParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(m: usize, k: usize) -> Vec<f64> {
        let mut v = vec![0.0; m];
        v[k - 1] = 1.0;
        v
    }

    fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    #[test]
    fn examples() {
        let lay = Layout { n: 3 };
        let b = plucker(&OrientedPlane::new(e(5, 4), e(5, 5)).unwrap(), Normalization::ChartU).unwrap();
        let mut expect = vec![0.0; 10];
        expect[lay.i()] = 1.0;
        assert_eq!(b.coords, expect);

        let pl = OrientedPlane::new(add(&e(5, 1), &e(5, 4)), add(&e(5, 2), &e(5, 5))).unwrap();
        let b = plucker(&pl, Normalization::None).unwrap();
        assert_eq!(b.coords[lay.l(1, 2)], 1.0);
        assert_eq!(b.coords[lay.p(1)], 1.0);
        assert_eq!(b.coords[lay.x(2)], -1.0);
        assert_eq!(b.i(), 1.0);
        assert_eq!(plucker_residuals(&b), 0.0);

        let off = OrientedPlane::new(e(5, 1), e(5, 2)).unwrap();
        assert!(matches!(plucker(&off, Normalization::ChartU), Err(Error::OutsideChart(_))));

        let mut nd = vec![0.0; 10];
        nd[lay.l(1, 2)] = 1.0;
        nd[lay.x(3)] = 1.0;
        // l_12 and l_34 = x_3 for n = 3
        assert_eq!(plucker_residuals(&BivectorCoords::new(3, nd).unwrap()), 1.0);
    }

    #[test]
    fn roundtrip_flip_and_bridge() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = DeformationParams::from_ints(3, [1, 1, 0]);
        let spec = OrbitSpec::new(&p, 1.0).unwrap();
        let k = orbit_casimir(&p).unwrap();
        for _ in 0..100 {
            let u: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let pl = OrientedPlane::new(u, v).unwrap();
            let b = plucker(&pl, Normalization::ChartU).unwrap();
            let back = point_to_plane(&b, 1e-10).unwrap();
            assert!(same_oriented_plane(&pl, &back, 1e-10));
            let b2 = plucker(&back, Normalization::ChartU).unwrap();
            assert!(b.coords.iter().zip(&b2.coords).all(|(x, y)| (x - y).abs() <= 1e-10));
            assert_eq!(plucker(&pl.flipped(), Normalization::ChartU).unwrap(), b.negated());
            let ob = plucker(&pl, Normalization::Orbit { casimir: &k, level: 1.0 }).unwrap();
            let pt = DualPoint::new(&p, ob.coords).unwrap();
            assert!(orbit_residuals(&spec, &pt).unwrap().max() <= 1e-10);
        }
    }
}
