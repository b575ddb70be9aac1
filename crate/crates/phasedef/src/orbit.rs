//! Lie–Poisson geometry on the dual of `g_n(eps)`: Casimirs, the special `2n`-dimensional
//! orbits, the gnomonic chart on the family `(0, eps2, 0)` and its symplectic form.

use crate::error::{Error, Result};
use crate::lie::{build_deformed, phase_space_labels, BasisLabel, StructureConstants};
use crate::linalg::{kernel, numeric_rank, SparseVec};
use crate::params::DeformationParams;
use crate::poly::{lie_poisson, Polynomial};
use crate::rational::{format_rational, int, serde_rational_vec, Rational};
use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Positions of the coordinate groups in the frozen basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
}

impl Layout {
    pub fn dim(&self) -> usize {
        self.n * (self.n - 1) / 2 + 2 * self.n + 1
    }
    pub fn nl(&self) -> usize {
        self.n * (self.n - 1) / 2
    }
    /// Index of `l_ij` for `1 <= i < j <= n`.
    pub fn l(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j <= self.n);
        (i - 1) * (2 * self.n - i) / 2 + (j - i - 1)
    }
    pub fn x(&self, i: usize) -> usize {
        self.nl() + i - 1
    }
    pub fn p(&self, i: usize) -> usize {
        self.nl() + self.n + i - 1
    }
    pub fn i(&self) -> usize {
        self.nl() + 2 * self.n
    }
}

/// A point of `g_n(eps)^∨` in frozen-basis coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualPoint {
    pub params: DeformationParams,
    pub coords: Vec<f64>,
}

impl DualPoint {
    pub fn new(params: &DeformationParams, coords: Vec<f64>) -> Result<Self> {
        let lay = Layout { n: params.n };
        if coords.len() != lay.dim() {
            return Err(Error::DimensionMismatch { expected: lay.dim(), found: coords.len() });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parameter("dual point has non-finite entries".into()));
        }
        Ok(DualPoint { params: params.clone(), coords })
    }

    /// Builds a point from `I`, `x`, `p` and the antisymmetric `l` block.
    pub fn from_parts(params: &DeformationParams, i: f64, x: &[f64], p: &[f64], l: &DMatrix<f64>) -> Result<Self> {
        let n = params.n;
        if x.len() != n || p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len().min(p.len()) });
        }
        let lay = Layout { n };
        let mut c = vec![0.0; lay.dim()];
        for a in 1..=n {
            for b in a + 1..=n {
                c[lay.l(a, b)] = l[(a - 1, b - 1)];
            }
            c[lay.x(a)] = x[a - 1];
            c[lay.p(a)] = p[a - 1];
        }
        c[lay.i()] = i;
        Self::new(params, c)
    }

    pub fn layout(&self) -> Layout {
        Layout { n: self.params.n }
    }
    pub fn n(&self) -> usize {
        self.params.n
    }
    pub fn i(&self) -> f64 {
        self.coords[self.layout().i()]
    }
    pub fn x(&self) -> Vec<f64> {
        let lay = self.layout();
        (1..=lay.n).map(|k| self.coords[lay.x(k)]).collect()
    }
    pub fn p(&self) -> Vec<f64> {
        let lay = self.layout();
        (1..=lay.n).map(|k| self.coords[lay.p(k)]).collect()
    }
    /// Signed `l_ij` for any `i != j`.
    pub fn l(&self, i: usize, j: usize) -> f64 {
        let lay = self.layout();
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.coords[lay.l(i, j)],
            // subtraction keeps zero entries positive in serialized output
            std::cmp::Ordering::Greater => 0.0 - self.coords[lay.l(j, i)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }
    pub fn l_matrix(&self) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |a, b| self.l(a + 1, b + 1))
    }
    /// Gnomonic coordinates `q_i = x_i / I`.
    pub fn q(&self) -> Result<Vec<f64>> {
        let i = self.i();
        if i.abs() < 1e-300 {
            return Err(Error::ChartDomain("I = 0".into()));
        }
        Ok(self.x().iter().map(|v| v / i).collect())
    }
}

/// Floating Lie–Poisson tensor `Π_ab(ξ) = Σ_c c_ab^c ξ_c`.
#[derive(Clone, Debug)]
pub struct PoissonStructure {
    pub dim: usize,
    terms: Vec<(usize, usize, usize, f64)>,
}

impl PoissonStructure {
    pub fn new(g: &StructureConstants) -> Self {
        PoissonStructure { dim: g.dim(), terms: g.expanded_f64() }
    }

    pub fn for_params(p: &DeformationParams) -> Self {
        Self::new(&build_deformed(p))
    }

    pub fn matrix(&self, xi: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(a, b, c, v) in &self.terms {
            m[(a, b)] += v * xi[c];
        }
        m
    }

    /// `{F, G}(ξ)` from the gradients of `F` and `G`.
    pub fn bracket(&self, xi: &[f64], df: &[f64], dg: &[f64]) -> f64 {
        self.terms.iter().map(|&(a, b, c, v)| v * xi[c] * df[a] * dg[b]).sum()
    }

    /// Hamiltonian vector field `ξ̇_a = Σ_b Π_ab ∂_b H`.
    pub fn vector_field(&self, xi: &[f64], dh: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for &(a, b, c, v) in &self.terms {
            out[a] += v * xi[c] * dh[b];
        }
    }
}

/// Lie–Poisson bracket of two polynomials at a floating point.
pub fn lie_poisson_bracket(ps: &PoissonStructure, f: &Polynomial, g: &Polynomial, point: &[f64]) -> f64 {
    ps.bracket(point, &f.gradient_f64(point), &g.gradient_f64(point))
}

/// Numeric rank of the Poisson tensor, threshold `rel * ||Π||`.
pub fn poisson_rank(ps: &PoissonStructure, point: &[f64], rel: f64) -> usize {
    numeric_rank(&ps.matrix(point), rel)
}

/// Central quadratic polynomial on the dual.
#[derive(Clone, Debug, PartialEq)]
pub struct CasimirQuadratic {
    pub params: DeformationParams,
    pub poly: Polynomial,
}

/// Coefficients of `I^2`, `x^2`, `p^2`, `xp` and `l^2` for rotation-invariant quadratics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupedQuadratic {
    #[serde(with = "serde_rational_vec")]
    pub coeffs: Vec<Rational>,
}

impl GroupedQuadratic {
    pub fn names() -> [&'static str; 5] {
        ["I^2", "x^2", "p^2", "xp", "l^2"]
    }

    pub fn to_polynomial(&self, n: usize) -> Polynomial {
        let lay = Layout { n };
        let d = lay.dim() as u16;
        let c = &self.coeffs;
        let mut p = Polynomial::zero(d as usize);
        let ii = lay.i() as u16;
        p.add_term(vec![ii, ii], c[0].clone());
        for k in 1..=n {
            let (x, pk) = (lay.x(k) as u16, lay.p(k) as u16);
            p.add_term(vec![x, x], c[1].clone());
            p.add_term(vec![pk, pk], c[2].clone());
            p.add_term(vec![x, pk], c[3].clone());
            for j in k + 1..=n {
                let l = lay.l(k, j) as u16;
                p.add_term(vec![l, l], c[4].clone());
            }
        }
        p
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (c, name) in self.coeffs.iter().zip(Self::names()) {
            if c.is_zero() {
                continue;
            }
            if !s.is_empty() {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            } else if c.is_negative() {
                s.push('-');
            }
            let a = c.abs();
            if a != Rational::one() {
                s.push_str(&a.to_string());
                s.push('*');
            }
            s.push_str(name);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

fn monomial_name(labels: &[BasisLabel], m: &[u16]) -> String {
    if m.len() == 2 && m[0] == m[1] {
        return format!("{}^2", labels[m[0] as usize]);
    }
    m.iter().map(|&v| labels[v as usize].to_string()).collect::<Vec<_>>().join("*")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialTerm {
    pub monomial: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CasimirJson {
    pub terms: Vec<MonomialTerm>,
    pub grouped: Option<String>,
    pub centrality_residual: String,
}

impl CasimirQuadratic {
    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.poly.eval_f64(point)
    }

    /// Max absolute coefficient of `{K, ξ_a}` over all coordinates; exactly zero when central.
    pub fn centrality_residual(&self, g: &StructureConstants) -> Rational {
        let d = g.dim();
        let mut worst = Rational::zero();
        for a in 0..d {
            for c in lie_poisson(g, &self.poly, &Polynomial::var(d, a)).terms.values() {
                if c.abs() > worst {
                    worst = c.abs();
                }
            }
        }
        worst
    }

    /// Reads off the rotation-invariant grouped form, if the polynomial has one.
    pub fn grouped(&self) -> Option<GroupedQuadratic> {
        let lay = Layout { n: self.n() };
        let c = |a: usize, b: usize| {
            let mut m = vec![a as u16, b as u16];
            m.sort_unstable();
            self.poly.coefficient(&m)
        };
        let g = GroupedQuadratic {
            coeffs: vec![
                c(lay.i(), lay.i()),
                c(lay.x(1), lay.x(1)),
                c(lay.p(1), lay.p(1)),
                c(lay.x(1), lay.p(1)),
                if self.n() >= 2 { c(lay.l(1, 2), lay.l(1, 2)) } else { Rational::zero() },
            ],
        };
        (g.to_polynomial(self.n()) == self.poly).then_some(g)
    }

    pub fn to_json(&self, g: &StructureConstants) -> CasimirJson {
        let labels = phase_space_labels(self.n());
        CasimirJson {
            terms: self
                .poly
                .terms
                .iter()
                .map(|(m, c)| MonomialTerm { monomial: monomial_name(&labels, m), coeff: format_rational(c) })
                .collect(),
            grouped: self.grouped().map(|q| q.render()),
            centrality_residual: format_rational(&self.centrality_residual(g)),
        }
    }
}

/// Quadratic monomials with `I^2` first so that normalization fixes its coefficient.
fn quadratic_monomials(n: usize) -> Vec<Vec<u16>> {
    let lay = Layout { n };
    let d = lay.dim() as u16;
    let ii = lay.i() as u16;
    let mut v = vec![vec![ii, ii]];
    for a in 0..d {
        for b in a..d {
            if !(a == ii && b == ii) {
                v.push(vec![a, b]);
            }
        }
    }
    v
}

/// Exact basis of the space of central quadratic polynomials.
///
/// Each element with a nonzero `I^2` coefficient is normalized so that coefficient is 1.
pub fn quadratic_casimirs(params: &DeformationParams) -> Vec<CasimirQuadratic> {
    let g = build_deformed(params);
    let d = g.dim();
    let monos = quadratic_monomials(params.n);
    let mut row_of: BTreeMap<(usize, Vec<u16>), usize> = BTreeMap::new();
    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    for (col, m) in monos.iter().enumerate() {
        let mp = Polynomial::monomial(d, m.clone(), Rational::one());
        for a in 0..d {
            for (rm, c) in lie_poisson(&g, &mp, &Polynomial::var(d, a)).terms {
                let key = (a, rm);
                let r = *row_of.entry(key).or_insert_with(|| {
                    rows.push(Vec::new());
                    rows.len() - 1
                });
                rows[r].push((col, c));
            }
        }
    }
    let sparse: Vec<SparseVec> = rows.into_iter().map(SparseVec::from_pairs).collect();
    let mut basis = kernel(&sparse, monos.len());
    basis.sort_by_key(|v| v.leading());
    basis
        .into_iter()
        .map(|v| {
            let lead = v.get(0);
            let v = if lead.is_zero() { v } else { v.scale(&(Rational::one() / lead)) };
            let mut poly = Polynomial::zero(d);
            for (col, c) in &v.entries {
                poly.add_term(monos[*col].clone(), c.clone());
            }
            CasimirQuadratic { params: params.clone(), poly }
        })
        .collect()
}

/// The closed-form central quadratic `I^2 + e2 x^2 + e1 p^2 - 2 e3 xp + (e1 e2 - e3^2) l^2`.
pub fn derived_casimir_grouped(p: &DeformationParams) -> GroupedQuadratic {
    let (e1, e2, e3) = (p.e1().clone(), p.e2().clone(), p.e3().clone());
    GroupedQuadratic { coeffs: vec![Rational::one(), e2.clone(), e1.clone(), -int(2) * &e3, e1 * e2 - e3.clone() * e3] }
}

/// The quadratic as printed alongside the orbit equations, with `x^2` and `p^2` weighted by
/// `e1` and `e2` respectively.
pub fn printed_casimir_grouped(p: &DeformationParams) -> GroupedQuadratic {
    let (e1, e2, e3) = (p.e1().clone(), p.e2().clone(), p.e3().clone());
    GroupedQuadratic { coeffs: vec![Rational::one(), e1.clone(), e2.clone(), -int(2) * &e3, e1 * e2 - e3.clone() * e3] }
}

/// The orbit-defining Casimir, i.e. the unique central quadratic with unit `I^2` coefficient.
pub fn orbit_casimir(p: &DeformationParams) -> Result<CasimirQuadratic> {
    let cs = quadratic_casimirs(p);
    let with_i: Vec<_> = cs.iter().filter(|c| !c.poly.coefficient(&{
        let i = Layout { n: p.n }.i() as u16;
        vec![i, i]
    }).is_zero()).collect();
    match with_i.as_slice() {
        [k] => Ok((*k).clone()),
        _ if p.is_zero() => Ok(CasimirQuadratic { params: p.clone(), poly: derived_casimir_grouped(p).to_polynomial(p.n) }),
        _ => Err(Error::Structure(format!("{} central quadratics carry I^2", with_i.len()))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CasimirComparison {
    #[serde(with = "serde_rational_vec")]
    pub eps: Vec<Rational>,
    pub casimir_space_dim: usize,
    pub derived: Option<String>,
    pub printed: String,
    pub printed_centrality_residual: String,
    pub matches_printed: bool,
    pub status: String,
}

/// Compares the derived Casimir with the printed convention; mismatch is a warning.
pub fn compare_with_printed(p: &DeformationParams) -> Result<CasimirComparison> {
    let g = build_deformed(p);
    let space = quadratic_casimirs(p);
    let derived = orbit_casimir(p)?;
    let printed = CasimirQuadratic { params: p.clone(), poly: printed_casimir_grouped(p).to_polynomial(p.n) };
    let res = printed.centrality_residual(&g);
    let matches = derived.poly == printed.poly;
    Ok(CasimirComparison {
        eps: p.eps.clone(),
        casimir_space_dim: space.len(),
        derived: derived.grouped().map(|q| q.render()),
        printed: printed_casimir_grouped(p).render(),
        printed_centrality_residual: format_rational(&res),
        matches_printed: matches,
        status: if matches { "OK" } else { "WARN" }.into(),
    })
}

/// Parameters, level and Casimir of a special orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSpec {
    pub params: DeformationParams,
    pub level: f64,
    pub casimir: CasimirQuadratic,
}

impl OrbitSpec {
    pub fn new(params: &DeformationParams, level: f64) -> Result<Self> {
        if !(level > 0.0) {
            return Err(Error::Parameter("orbit level must be positive".into()));
        }
        Ok(OrbitSpec { params: params.clone(), level, casimir: orbit_casimir(params)? })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitResiduals {
    pub casimir: f64,
    pub angular: f64,
    pub plucker_aux: f64,
}

impl OrbitResiduals {
    pub fn max(&self) -> f64 {
        self.casimir.abs().max(self.angular).max(self.plucker_aux)
    }
}

/// `max |I l_ij - x_i p_j + x_j p_i|`.
pub fn angular_residual(pt: &DualPoint) -> f64 {
    let (i, x, p, n) = (pt.i(), pt.x(), pt.p(), pt.n());
    let mut worst = 0.0f64;
    for a in 1..=n {
        for b in a + 1..=n {
            let r = i * pt.l(a, b) - x[a - 1] * p[b - 1] + x[b - 1] * p[a - 1];
            worst = worst.max(r.abs());
        }
    }
    worst
}

/// Max over triples of `l_ij v_k - l_ik v_j + l_jk v_i` for `v = x, p`.
pub fn plucker_aux_residual(pt: &DualPoint) -> f64 {
    let (x, p, n) = (pt.x(), pt.p(), pt.n());
    let mut worst = 0.0f64;
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for v in [&x, &p] {
                    let r = pt.l(i, j) * v[k - 1] - pt.l(i, k) * v[j - 1] + pt.l(j, k) * v[i - 1];
                    worst = worst.max(r.abs());
                }
            }
        }
    }
    worst
}

pub fn orbit_residuals(spec: &OrbitSpec, pt: &DualPoint) -> Result<OrbitResiduals> {
    let d = Layout { n: spec.params.n }.dim();
    if pt.coords.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: pt.coords.len() });
    }
    Ok(OrbitResiduals {
        casimir: spec.casimir.eval(&pt.coords) - spec.level * spec.level,
        angular: angular_residual(pt),
        plucker_aux: plucker_aux_residual(pt),
    })
}

/// Sheet of the orbit selected by the sign of `I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Positive,
    Negative,
}

impl Branch {
    pub fn sign(&self) -> f64 {
        match self {
            Branch::Positive => 1.0,
            Branch::Negative => -1.0,
        }
    }
}

/// Gnomonic chart point on the family `(0, eps2, 0)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl ChartPoint {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch { expected: q.len(), found: p.len() });
        }
        Ok(ChartPoint { q, p })
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn q2(&self) -> f64 {
        self.q.iter().map(|v| v * v).sum()
    }

    pub fn qp(&self) -> f64 {
        self.q.iter().zip(&self.p).map(|(a, b)| a * b).sum()
    }

    /// Reads `q = x / I` and `p` off a dual point.
    pub fn from_point(pt: &DualPoint) -> Result<Self> {
        Ok(ChartPoint { q: pt.q()?, p: pt.p() })
    }
}

fn check_chart_domain(eps2: f64, c: &ChartPoint) -> Result<f64> {
    let den = 1.0 + eps2 * c.q2();
    if !(den > 0.0) {
        return Err(Error::ChartDomain(format!("1 + eps2 q^2 = {den} is not positive")));
    }
    Ok(den)
}

/// Chart family parameters `(0, eps2, 0)` as a float, rejecting other strata.
pub fn chart_eps2(p: &DeformationParams) -> Result<f64> {
    if !p.e1().is_zero() || !p.e3().is_zero() {
        return Err(Error::Parameter("the gnomonic chart is defined on the family (0, eps2, 0)".into()));
    }
    Ok(p.to_f64()[1])
}

/// Orbit point at level 1: `I = ±1/sqrt(1 + eps2 q^2)`, `x = I q`, `l = q ∧ p`.
pub fn chart_to_point(params: &DeformationParams, c: &ChartPoint, branch: Branch) -> Result<DualPoint> {
    let eps2 = chart_eps2(params)?;
    if c.n() != params.n {
        return Err(Error::DimensionMismatch { expected: params.n, found: c.n() });
    }
    let den = check_chart_domain(eps2, c)?;
    let i = branch.sign() / den.sqrt();
    let x: Vec<f64> = c.q.iter().map(|v| i * v).collect();
    let n = params.n;
    let l = DMatrix::from_fn(n, n, |a, b| c.q[a] * c.p[b] - c.q[b] * c.p[a]);
    DualPoint::from_parts(params, i, &x, &c.p, &l)
}

/// Conjugate momenta `P_i = p_i - eps2 (q·p) q_i / (1 + eps2 q^2)`.
pub fn darboux_momenta(eps2: f64, c: &ChartPoint) -> Result<Vec<f64>> {
    let den = check_chart_domain(eps2, c)?;
    let s = c.qp();
    Ok(c.q.iter().zip(&c.p).map(|(q, p)| p - eps2 * s * q / den).collect())
}

/// Liouville form `θ = Σ P_i dq_i` as a covector on `(q, p)`.
pub fn liouville_form(eps2: f64, c: &ChartPoint) -> Result<Vec<f64>> {
    let mut th = darboux_momenta(eps2, c)?;
    th.extend(std::iter::repeat(0.0).take(c.n()));
    Ok(th)
}

/// Matrix of `ω = -dθ`, i.e. `ω = ½ Σ Ω_ab dz_a ∧ dz_b` in `z = (q, p)`.
pub fn symplectic_matrix(eps2: f64, c: &ChartPoint) -> Result<DMatrix<f64>> {
    let den = check_chart_domain(eps2, c)?;
    let n = c.n();
    let s = c.qp();
    let q = &c.q;
    // A_ij = ∂P_i/∂q_j, B_ij = ∂P_i/∂p_j
    let a = DMatrix::from_fn(n, n, |i, j| {
        let kd = if i == j { 1.0 } else { 0.0 };
        -eps2 * ((c.p[j] * q[i] + s * kd) * den - 2.0 * eps2 * s * q[i] * q[j]) / (den * den)
    });
    let b = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } - eps2 * q[i] * q[j] / den);
    let mut om = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            om[(i, j)] = a[(i, j)] - a[(j, i)];
            om[(i, n + j)] = b[(i, j)];
            om[(n + j, i)] = -b[(i, j)];
        }
    }
    Ok(om)
}

/// Poisson matrix of the chart functions `(q, p)`: `Π = -Ω^{-1}`, so `{q_i, p_j} = δ_ij` when flat.
pub fn chart_poisson_from_form(eps2: f64, c: &ChartPoint) -> Result<DMatrix<f64>> {
    let om = symplectic_matrix(eps2, c)?;
    let inv = om.try_inverse().ok_or_else(|| Error::ChartDomain("degenerate symplectic matrix".into()))?;
    Ok(-inv)
}

/// Jacobian of `(q, p)` with respect to dual coordinates, `q_i = x_i / I`.
fn chart_jacobian(pt: &DualPoint) -> Result<DMatrix<f64>> {
    let lay = pt.layout();
    let n = lay.n;
    let i = pt.i();
    if i.abs() < 1e-300 {
        return Err(Error::ChartDomain("I = 0".into()));
    }
    let mut j = DMatrix::zeros(2 * n, lay.dim());
    for k in 1..=n {
        j[(k - 1, lay.x(k))] = 1.0 / i;
        j[(k - 1, lay.i())] = -pt.coords[lay.x(k)] / (i * i);
        j[(n + k - 1, lay.p(k))] = 1.0;
    }
    Ok(j)
}

/// Brackets of the chart functions computed from the Lie–Poisson tensor by the quotient rule.
pub fn chart_poisson_from_brackets(ps: &PoissonStructure, pt: &DualPoint) -> Result<DMatrix<f64>> {
    let j = chart_jacobian(pt)?;
    Ok(&j * ps.matrix(&pt.coords) * j.transpose())
}

/// Closed-form chart brackets on `(0, eps2, 0)`.
pub fn chart_brackets_closed_form(eps2: f64, c: &ChartPoint) -> DMatrix<f64> {
    let n = c.n();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let kd = if i == j { 1.0 } else { 0.0 };
            m[(i, n + j)] = kd + eps2 * c.q[i] * c.q[j];
            m[(n + j, i)] = -m[(i, n + j)];
            m[(n + i, n + j)] = eps2 * (c.q[i] * c.p[j] - c.q[j] * c.p[i]);
        }
    }
    m
}

/// Max `|{x_i/I, x_j/I}|` and `|{p_i/I, p_j/I}|` at a point.
pub fn polarization_involution(ps: &PoissonStructure, pt: &DualPoint) -> Result<f64> {
    let lay = pt.layout();
    let n = lay.n;
    let i = pt.i();
    if i.abs() < 1e-300 {
        return Err(Error::ChartDomain("I = 0".into()));
    }
    let mut jac = DMatrix::zeros(2 * n, lay.dim());
    for k in 1..=n {
        jac[(k - 1, lay.x(k))] = 1.0 / i;
        jac[(k - 1, lay.i())] = -pt.coords[lay.x(k)] / (i * i);
        jac[(n + k - 1, lay.p(k))] = 1.0 / i;
        jac[(n + k - 1, lay.i())] = -pt.coords[lay.p(k)] / (i * i);
    }
    let m = &jac * ps.matrix(&pt.coords) * jac.transpose();
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            worst = worst.max(m[(a, b)].abs()).max(m[(n + a, n + b)].abs());
        }
    }
    Ok(worst)
}

/// `H_0 = ½ (p^2 + eps2 l^2)`.
pub fn free_hamiltonian(pt: &DualPoint) -> f64 {
    let eps2 = pt.params.to_f64()[1];
    let p2: f64 = pt.p().iter().map(|v| v * v).sum();
    0.5 * (p2 + eps2 * l_squared(pt))
}

pub fn l_squared(pt: &DualPoint) -> f64 {
    (0..pt.layout().nl()).map(|k| pt.coords[k] * pt.coords[k]).sum()
}

/// `H_0` as an exact polynomial on the dual.
pub fn free_hamiltonian_poly(params: &DeformationParams) -> Polynomial {
    let lay = Layout { n: params.n };
    let half = Rational::new(1.into(), 2.into());
    let mut h = Polynomial::zero(lay.dim());
    for k in 1..=params.n {
        let p = lay.p(k) as u16;
        h.add_term(vec![p, p], half.clone());
        for j in k + 1..=params.n {
            let l = lay.l(k, j) as u16;
            h.add_term(vec![l, l], half.clone() * params.e2());
        }
    }
    h
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumValue {
    /// Antisymmetric `o(n)^*` part, rows of the `l` matrix.
    pub lambda: Vec<Vec<f64>>,
    /// `(l, p)` components of the `k(eps)^*` momentum, `l` in frozen order.
    pub mu0: (Vec<f64>, Vec<f64>),
}

impl MomentumValue {
    /// `|μ0|^2 = p^2 + eps2 l^2`.
    pub fn mu0_norm_sq(&self, eps2: f64) -> f64 {
        let l2: f64 = self.mu0.0.iter().map(|v| v * v).sum();
        let p2: f64 = self.mu0.1.iter().map(|v| v * v).sum();
        p2 + eps2 * l2
    }

    /// Flattened μ0 components, `l` then `p`.
    pub fn mu0_flat(&self) -> Vec<f64> {
        self.mu0.0.iter().chain(&self.mu0.1).copied().collect()
    }
}

pub fn momentum_maps(pt: &DualPoint) -> MomentumValue {
    let l = pt.l_matrix();
    let nl = pt.layout().nl();
    MomentumValue {
        lambda: (0..pt.n()).map(|a| (0..pt.n()).map(|b| l[(a, b)]).collect()).collect(),
        mu0: (pt.coords[..nl].to_vec(), pt.p()),
    }
}

/// Real roots in `I` of `K(I, x, p, (x ∧ p)/I) = r^2`, sorted.
pub fn solve_i_branches(params: &DeformationParams, x: &[f64], p: &[f64], r: f64) -> Vec<f64> {
    let [e1, e2, e3] = params.to_f64();
    let x2: f64 = x.iter().map(|v| v * v).sum();
    let p2: f64 = p.iter().map(|v| v * v).sum();
    let xp: f64 = x.iter().zip(p).map(|(a, b)| a * b).sum();
    let w2 = x2 * p2 - xp * xp;
    // u^2 + (A - r^2) u + c w2 = 0 with u = I^2
    let a = e2 * x2 + e1 * p2 - 2.0 * e3 * xp;
    let c = e1 * e2 - e3 * e3;
    let bq = a - r * r;
    let cq = c * w2;
    let mut us = Vec::new();
    if cq == 0.0 {
        us.push(-bq);
    } else {
        let disc = bq * bq - 4.0 * cq;
        if disc >= 0.0 {
            let s = disc.sqrt();
            us.push((-bq + s) / 2.0);
            us.push((-bq - s) / 2.0);
        }
    }
    let mut roots: Vec<f64> = Vec::new();
    for u in us {
        if u > 0.0 {
            let v = u.sqrt();
            for root in [v, -v] {
                if !roots.iter().any(|z| (z - root).abs() <= 1e-14 * v.max(1.0)) {
                    roots.push(root);
                }
            }
        }
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    roots
}

/// Variables carrying the quadric of the degenerate Casimir on the cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseVariables {
    /// `(I, u)` with `u_i = eps2 x_i - eps3 p_i`; `K = I^2 + u^2/eps2`.
    IAndShiftedX,
    /// `(I, p)` when `eps2 = 0`; `K = I^2 + eps1 p^2`.
    IAndP,
    /// `eps = 0`: `K = I^2`.
    IOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerationReport {
    #[serde(with = "serde_rational_vec")]
    pub eps: Vec<Rational>,
    pub base_variables: BaseVariables,
    pub base_residual: f64,
    pub fiber_dim: Vec<usize>,
    pub component_sign: Vec<i8>,
    pub components: usize,
}

fn base_map(params: &DeformationParams, pt: &DualPoint) -> (BaseVariables, Vec<f64>, DMatrix<f64>, f64) {
    let [e1, e2, e3] = params.to_f64();
    let lay = pt.layout();
    let n = lay.n;
    let mut jac = DMatrix::zeros(n + 1, lay.dim());
    jac[(0, lay.i())] = 1.0;
    let i = pt.i();
    if !params.e2().is_zero() {
        let mut u = vec![0.0; n];
        for k in 1..=n {
            u[k - 1] = e2 * pt.coords[lay.x(k)] - e3 * pt.coords[lay.p(k)];
            jac[(k, lay.x(k))] = e2;
            jac[(k, lay.p(k))] = -e3;
        }
        let k = i * i + u.iter().map(|v| v * v).sum::<f64>() / e2;
        (BaseVariables::IAndShiftedX, u, jac, k)
    } else if !params.e1().is_zero() {
        let p = pt.p();
        for k in 1..=n {
            jac[(k, lay.p(k))] = 1.0;
        }
        let k = i * i + e1 * p.iter().map(|v| v * v).sum::<f64>();
        (BaseVariables::IAndP, p, jac, k)
    } else {
        (BaseVariables::IOnly, Vec::new(), jac.rows(0, 1).into_owned(), i * i)
    }
}

/// Base quadric, fibre dimension and sheet structure of orbits on the cone `e3^2 = e1 e2`.
pub fn degeneration_structure(params: &DeformationParams, points: &[DualPoint], level: f64, rel: f64) -> Result<DegenerationReport> {
    if !params.on_cone() {
        return Err(Error::Parameter("degeneration structure needs eps3^2 = eps1 eps2".into()));
    }
    let ps = PoissonStructure::for_params(params);
    let mut kind = BaseVariables::IOnly;
    let mut base_residual = 0.0f64;
    let mut fiber = Vec::new();
    let mut signs = Vec::new();
    for pt in points {
        let (k, _, jac, kval) = base_map(params, pt);
        kind = k;
        base_residual = base_residual.max((kval - level * level).abs());
        let pi = ps.matrix(&pt.coords);
        let r = numeric_rank(&pi, rel);
        let rb = numeric_rank(&(&jac * &pi), rel);
        fiber.push(r - rb);
        signs.push(if pt.i() > 0.0 { 1 } else if pt.i() < 0.0 { -1 } else { 0 });
    }
    // The slice I = 0 meets the level set iff the base quadric can reach r^2 without I.
    let [e1, e2, _] = params.to_f64();
    let reaches_zero = match kind {
        BaseVariables::IAndShiftedX => e2 > 0.0,
        BaseVariables::IAndP => e1 > 0.0,
        BaseVariables::IOnly => false,
    };
    Ok(DegenerationReport {
        eps: params.eps.clone(),
        base_variables: kind,
        base_residual,
        fiber_dim: fiber,
        component_sign: signs,
        components: if reaches_zero { 1 } else { 2 },
    })
}

/// Deterministic sample of chart points with `|q|` inside the chart domain.
pub fn sample_chart_points(eps2: f64, n: usize, count: usize, rng: &mut impl rand::Rng) -> Vec<ChartPoint> {
    let qmax = if eps2 < 0.0 { 0.9 / (-eps2).sqrt() / (n as f64).sqrt() } else { 1.5 };
    (0..count)
        .map(|_| ChartPoint {
            q: (0..n).map(|_| rng.gen_range(-qmax..qmax)).collect(),
            p: (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect(),
        })
        .collect()
}

/// Wraps a gradient evaluation of a polynomial as a vector.
pub fn gradient(poly: &Polynomial, pt: &[f64]) -> DVector<f64> {
    DVector::from_vec(poly.gradient_f64(pt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p3(e: [i64; 3]) -> DeformationParams {
        DeformationParams::from_ints(3, e)
    }

    #[test]
    fn layout_matches_labels() {
        for n in 1..=5 {
            let labels = phase_space_labels(n);
            let lay = Layout { n };
            assert_eq!(labels.len(), lay.dim());
            for i in 1..=n {
                assert_eq!(labels[lay.x(i)], BasisLabel::X(i));
                assert_eq!(labels[lay.p(i)], BasisLabel::P(i));
                for j in i + 1..=n {
                    assert_eq!(labels[lay.l(i, j)], BasisLabel::L(i, j));
                }
            }
            assert_eq!(labels[lay.i()], BasisLabel::Iz);
        }
    }

    #[test]
    fn bracket_examples() {
        let p = DeformationParams::zero(3);
        let ps = PoissonStructure::for_params(&p);
        let lay = Layout { n: 3 };
        let d = lay.dim();
        let mut pt = vec![0.0; d];
        pt[lay.i()] = 1.0;
        let v = |i| Polynomial::var(d, i);
        assert_eq!(lie_poisson_bracket(&ps, &v(lay.x(1)), &v(lay.p(1)), &pt), 1.0);
        pt[lay.x(2)] = 1.0;
        assert_eq!(lie_poisson_bracket(&ps, &v(lay.l(1, 2)), &v(lay.x(1)), &pt), 1.0);
    }

    #[test]
    fn casimir_examples() {
        let k = quadratic_casimirs(&p3([1, 1, 0]));
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].grouped().unwrap().coeffs, vec![int(1), int(1), int(1), int(0), int(1)]);
        let k = orbit_casimir(&p3([2, 3, 0])).unwrap();
        assert_eq!(k.grouped().unwrap().coeffs, vec![int(1), int(3), int(2), int(0), int(6)]);
        let k = orbit_casimir(&p3([1, 2, 3])).unwrap();
        assert_eq!(k.grouped().unwrap(), derived_casimir_grouped(&p3([1, 2, 3])));
        let zero = quadratic_casimirs(&DeformationParams::zero(3));
        let i2 = Polynomial::monomial(10, vec![9, 9], int(1));
        assert!(zero.iter().any(|c| c.poly == i2));
        let cmp = compare_with_printed(&p3([2, 3, 0])).unwrap();
        assert_eq!(cmp.status, "WARN");
        assert!(compare_with_printed(&p3([1, 1, 0])).unwrap().matches_printed);
    }

    #[test]
    fn chart_examples() {
        let p = p3([0, 1, 0]);
        let c = ChartPoint::new(vec![1.0, 0.0, 0.0], vec![0.0; 3]).unwrap();
        let pt = chart_to_point(&p, &c, Branch::Positive).unwrap();
        assert!((pt.i() - 0.5f64.sqrt()).abs() < 1e-15);
        let spec = OrbitSpec::new(&p, 1.0).unwrap();
        assert!(orbit_residuals(&spec, &pt).unwrap().max() < 1e-12);
        let c = ChartPoint::new(vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]).unwrap();
        let pt = chart_to_point(&p, &c, Branch::Positive).unwrap();
        assert!((free_hamiltonian(&pt) - 1.0).abs() < 1e-15);
        assert!((momentum_maps(&pt).mu0_norm_sq(1.0) - 2.0).abs() < 1e-15);
        let bad = ChartPoint::new(vec![2.0, 0.0, 0.0], vec![0.0; 3]).unwrap();
        assert!(matches!(chart_to_point(&p3([0, -1, 0]), &bad, Branch::Positive), Err(Error::ChartDomain(_))));
    }

    #[test]
    fn negative_control_angular() {
        let p = DeformationParams::zero(3);
        let lay = Layout { n: 3 };
        let mut c = vec![0.0; lay.dim()];
        c[lay.i()] = 1.0;
        c[lay.l(1, 2)] = 1.0;
        let pt = DualPoint::new(&p, c).unwrap();
        assert_eq!(angular_residual(&pt), 1.0);
    }

    #[test]
    fn symplectic_inverse_matches_brackets() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for eps2 in [-1.0, -0.5, 0.5, 1.0, 2.0] {
            let p = DeformationParams::new(3, Rational::zero(), Rational::from_float(eps2).unwrap(), Rational::zero()).unwrap();
            let ps = PoissonStructure::for_params(&p);
            for c in sample_chart_points(eps2, 3, 20, &mut rng) {
                let a = chart_poisson_from_form(eps2, &c).unwrap();
                let pt = chart_to_point(&p, &c, Branch::Positive).unwrap();
                let b = chart_poisson_from_brackets(&ps, &pt).unwrap();
                assert!((&a - &b).amax() < 1e-10, "{}", (&a - &b).amax());
                assert!((chart_brackets_closed_form(eps2, &c) - &b).amax() < 1e-10);
                assert!(polarization_involution(&ps, &pt).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn rank_and_degeneration() {
        let p = p3([0, -1, 0]);
        let ps = PoissonStructure::for_params(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut pts = Vec::new();
        for c in sample_chart_points(-1.0, 3, 5, &mut rng) {
            for b in [Branch::Positive, Branch::Negative] {
                let pt = chart_to_point(&p, &c, b).unwrap();
                assert_eq!(poisson_rank(&ps, &pt.coords, 1e-9), 6);
                pts.push(pt);
            }
        }
        let rep = degeneration_structure(&p, &pts, 1.0, 1e-9).unwrap();
        assert_eq!(rep.components, 2);
        assert!(rep.fiber_dim.iter().all(|&f| f == 3));
        assert!(rep.base_residual < 1e-10);
        assert!(rep.component_sign.contains(&-1) && rep.component_sign.contains(&1));
        let zero = DeformationParams::zero(3);
        assert_eq!(solve_i_branches(&zero, &[0.3, 0.1, 0.0], &[1.0, 2.0, 0.5], 1.0), vec![-1.0, 1.0]);
        assert_eq!(poisson_rank(&ps, &vec![0.0; 10], 1e-9), 0);
    }
}
