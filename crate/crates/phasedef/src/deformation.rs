//! Strata of the parameter space, real forms, explicit normal-form isomorphisms and a
//! bracket-preservation validator.
//!
//! Every map here is induced by a linear transformation `T = id_n ⊕ M` of the ambient
//! space acting on bivectors. `T ∧ T` carries `g(S)` onto `g(R)` exactly when
//! `S_W = Mᵀ R_W M` on the distinguished plane, so targets are computed by congruence and
//! then checked independently with [`is_isomorphism`].

use crate::error::{Error, Result};
use crate::lie::{build_deformed, build_from_form, deformed_table, phase_space_labels, wedge_label, BilinearForm, StructureConstants};
use crate::linalg::determinant;
use crate::params::DeformationParams;
use crate::rational::{format_rational, serde_rational_vec, Rational};
use crate::scalar::{QuadraticNumber, Scalar};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComplexStratum {
    U,
    Conic,
    LLine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RealStratum {
    #[serde(rename = "R++")]
    Rpp,
    #[serde(rename = "R+-")]
    Rpm,
    #[serde(rename = "R--")]
    Rmm,
    #[serde(rename = "C+")]
    Cp,
    #[serde(rename = "C-")]
    Cm,
    L,
    Zero,
}

impl fmt::Display for RealStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RealStratum::Rpp => "R++",
            RealStratum::Rpm => "R+-",
            RealStratum::Rmm => "R--",
            RealStratum::Cp => "C+",
            RealStratum::Cm => "C-",
            RealStratum::L => "L",
            RealStratum::Zero => "Zero",
        };
        f.write_str(s)
    }
}

pub fn complex_stratum(p: &DeformationParams) -> Result<ComplexStratum> {
    if p.is_zero() {
        return Err(Error::Parameter("zero parameter triple has no stratum".into()));
    }
    Ok(if p.on_cone() {
        ComplexStratum::Conic
    } else if !p.e1().is_zero() && !p.e2().is_zero() {
        ComplexStratum::U
    } else {
        ComplexStratum::LLine
    })
}

/// Total decision procedure on real triples; the zero triple gets `Zero`.
pub fn real_stratum(p: &DeformationParams) -> RealStratum {
    if p.is_zero() {
        return RealStratum::Zero;
    }
    let (e1, e2) = (p.e1(), p.e2());
    if p.on_cone() {
        return if !e1.is_negative() && !e2.is_negative() { RealStratum::Cp } else { RealStratum::Cm };
    }
    if e1.is_zero() || e2.is_zero() {
        return RealStratum::L;
    }
    match (e1.is_positive(), e2.is_positive()) {
        (true, true) => RealStratum::Rpp,
        (false, false) => RealStratum::Rmm,
        _ => RealStratum::Rpm,
    }
}

/// Isomorphism types named by the real-forms table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaperLabel {
    Compact,
    Lorentzian,
    Split,
    EuclideanSemidirect,
    LorentzSemidirect,
    DSemidirect,
}

impl PaperLabel {
    pub fn for_real(s: RealStratum) -> Option<PaperLabel> {
        Some(match s {
            RealStratum::Rpp => PaperLabel::Compact,
            RealStratum::Rpm => PaperLabel::Lorentzian,
            RealStratum::Rmm => PaperLabel::Split,
            RealStratum::Cp => PaperLabel::EuclideanSemidirect,
            RealStratum::Cm => PaperLabel::LorentzSemidirect,
            RealStratum::L => PaperLabel::DSemidirect,
            RealStratum::Zero => return None,
        })
    }

    pub fn name(&self, n: usize) -> String {
        match self {
            PaperLabel::Compact => format!("o({})", n + 2),
            PaperLabel::Lorentzian => format!("o({},1)", n + 1),
            PaperLabel::Split => format!("o({n},2)"),
            PaperLabel::EuclideanSemidirect => format!("o({})⋉R^{}", n + 1, n + 1),
            PaperLabel::LorentzSemidirect => format!("o({n},1)⋉R^{}", n + 1),
            PaperLabel::DSemidirect => format!("o({n})⋉d_{n}"),
        }
    }

    /// Signature of the defining quadratic form implied by the label, if it is orthogonal.
    pub fn expected_form_signature(&self, n: usize) -> Option<(usize, usize, usize)> {
        match self {
            PaperLabel::Compact => Some((n + 2, 0, 0)),
            PaperLabel::Lorentzian => Some((n + 1, 1, 0)),
            PaperLabel::Split => Some((n, 2, 0)),
            PaperLabel::EuclideanSemidirect => Some((n + 1, 0, 1)),
            PaperLabel::LorentzSemidirect => Some((n, 1, 1)),
            PaperLabel::DSemidirect => None,
        }
    }

    pub fn is_semisimple(&self) -> bool {
        matches!(self, PaperLabel::Compact | PaperLabel::Lorentzian | PaperLabel::Split)
    }
}

/// Killing signature of o(p, q): noncompact directions are positive.
pub fn orthogonal_killing_signature(p: usize, q: usize) -> (usize, usize, usize) {
    (p * q, p * (p.saturating_sub(1)) / 2 + q * (q.saturating_sub(1)) / 2, 0)
}

pub fn complex_label_name(s: ComplexStratum, n: usize) -> String {
    match s {
        ComplexStratum::U => format!("o({},C)", n + 2),
        ComplexStratum::Conic => format!("o({},C)⋉C^{}", n + 1, n + 1),
        ComplexStratum::LLine => format!("o({n},C)⋉d_{n}^C"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexReport {
    #[serde(with = "serde_rational_vec")]
    pub eps: Vec<Rational>,
    pub complex_stratum: ComplexStratum,
    pub paper_label: String,
    pub form_rank: usize,
    pub conflict: bool,
    pub conflict_reasons: Vec<String>,
}

pub fn classify_complex(p: &DeformationParams) -> Result<ComplexReport> {
    p.require_classifiable()?;
    let s = complex_stratum(p)?;
    let (pp, q, z) = BilinearForm::deformation(p).signature();
    let rank = pp + q;
    let n = p.n;
    let mut reasons = Vec::new();
    match s {
        ComplexStratum::U if rank != n + 2 => reasons.push(format!("form rank {rank}, expected {}", n + 2)),
        ComplexStratum::Conic if rank != n + 1 => reasons.push(format!("form rank {rank}, expected {}", n + 1)),
        ComplexStratum::LLine if z == 0 => reasons.push(
            "form is nondegenerate, so the algebra is o(n+2,C), not a semidirect product".into(),
        ),
        _ => {}
    }
    Ok(ComplexReport {
        eps: p.eps.clone(),
        complex_stratum: s,
        paper_label: complex_label_name(s, n),
        form_rank: rank,
        conflict: !reasons.is_empty(),
        conflict_reasons: reasons,
    })
}

/// Real classification beside derived invariants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsoClassReport {
    #[serde(with = "serde_rational_vec")]
    pub eps: Vec<Rational>,
    pub n: usize,
    pub complex_stratum: ComplexStratum,
    pub real_stratum: RealStratum,
    pub paper_label: String,
    #[serde(rename = "B_signature")]
    pub b_signature: [usize; 3],
    pub killing_signature: [usize; 3],
    pub radical_dim: usize,
    pub conflict: bool,
    pub conflict_reasons: Vec<String>,
    pub normal_form: NormalFormSummary,
}

/// Signature of `I_n ⊕ [[e1, e3], [e3, e2]]` from the determinant and trace of the block.
pub fn block_signature(p: &DeformationParams) -> (usize, usize, usize) {
    let det = p.e1() * p.e2() - p.e3() * p.e3();
    let tr = p.e1() + p.e2();
    let n = p.n;
    let (a, b, c) = if det.is_positive() {
        if tr.is_positive() { (2, 0, 0) } else { (0, 2, 0) }
    } else if det.is_negative() {
        (1, 1, 0)
    } else if tr.is_positive() {
        (1, 0, 1)
    } else if tr.is_negative() {
        (0, 1, 1)
    } else {
        (0, 0, 2)
    };
    (n + a, b, c)
}

pub fn classify_real(p: &DeformationParams) -> Result<IsoClassReport> {
    p.require_classifiable()?;
    let cs = complex_stratum(p)?;
    let rs = real_stratum(p);
    let label = PaperLabel::for_real(rs).expect("nonzero triple");
    let n = p.n;
    let b = BilinearForm::deformation(p);
    let bsig = b.signature();
    let g = build_from_form(&b);
    let ksig = g.killing_signature();
    let radical = g.killing_radical_dim();
    let mut reasons = Vec::new();
    match label.expected_form_signature(n) {
        Some(exp) if exp != bsig => reasons.push(format!(
            "form signature {bsig:?} differs from {exp:?} implied by {}",
            label.name(n)
        )),
        None if bsig.2 == 0 => reasons.push(format!(
            "form is nondegenerate with signature {bsig:?}, so the algebra is orthogonal, not {}",
            label.name(n)
        )),
        _ => {}
    }
    if label.is_semisimple() != (radical == 0) {
        reasons.push(format!("Killing radical has dimension {radical}, inconsistent with {}", label.name(n)));
    }
    if label.is_semisimple() {
        if let Some((pp, q, _)) = label.expected_form_signature(n) {
            let exp = orthogonal_killing_signature(pp, q);
            if exp != ksig {
                reasons.push(format!("Killing signature {ksig:?} differs from {exp:?}"));
            }
        }
    }
    let normal_form = match normal_form_map(p) {
        Ok(m) => m.summary(),
        Err(e) => NormalFormSummary::failed(&e),
    };
    Ok(IsoClassReport {
        eps: p.eps.clone(),
        n,
        complex_stratum: cs,
        real_stratum: rs,
        paper_label: label.name(n),
        b_signature: [bsig.0, bsig.1, bsig.2],
        killing_signature: [ksig.0, ksig.1, ksig.2],
        radical_dim: radical,
        conflict: !reasons.is_empty(),
        conflict_reasons: reasons,
        normal_form,
    })
}

/// A linear map of the frozen basis; column `j` is the image of basis element `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearBasisMap<S> {
    pub n: usize,
    pub matrix: Vec<Vec<S>>,
    pub source: DeformationParams,
    /// Target parameters, possibly irrational.
    pub target: [S; 3],
    pub kind: MapKind,
    pub lambda: Option<S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Identity,
    MixingU,
    Conic,
    Line,
    Scaling,
    EffectiveParameters,
    Literal,
}

/// Plane transformation `M` (columns are images of `v_{n+1}`, `v_{n+2}`) lifted to bivectors.
pub fn plane_lift<S: Scalar>(n: usize, m: &[[S; 2]; 2], scale: &S) -> Vec<Vec<S>> {
    let size = n + 2;
    let mut t = vec![vec![S::zero(); size]; size];
    for (i, row) in t.iter_mut().enumerate().take(n) {
        row[i] = S::one();
    }
    for r in 0..2 {
        for c in 0..2 {
            t[n + r][n + c] = m[r][c].clone();
        }
    }
    wedge_square(n, &t, scale)
}

/// `scale * (T ∧ T)` in the frozen basis for an `(n+2) x (n+2)` matrix `T`.
pub fn wedge_square<S: Scalar>(n: usize, t: &[Vec<S>], scale: &S) -> Vec<Vec<S>> {
    let labels = phase_space_labels(n);
    let dim = labels.len();
    let pos = |a: usize, b: usize| labels.iter().position(|&l| l == wedge_label(n, a, b)).expect("label");
    let size = n + 2;
    let mut out = vec![vec![S::zero(); dim]; dim];
    for a in 1..=size {
        for b in a + 1..=size {
            let col = pos(a, b);
            for c in 1..=size {
                for d in c + 1..=size {
                    // coefficient of v_c ∧ v_d in T v_a ∧ T v_b
                    let v = t[c - 1][a - 1].clone() * t[d - 1][b - 1].clone()
                        - t[d - 1][a - 1].clone() * t[c - 1][b - 1].clone();
                    if !v.is_zero() {
                        out[pos(c, d)][col] = scale.clone() * v;
                    }
                }
            }
        }
    }
    out
}

/// Target plane block `M^{-T} S_W M^{-1}` as `(e1, e2, e3)`.
pub fn congruence_target<S: Scalar>(eps: &[S; 3], m: &[[S; 2]; 2]) -> Result<[S; 3]> {
    let det = m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone();
    if det.is_zero() {
        return Err(Error::Structure("singular plane transformation".into()));
    }
    let inv = [
        [m[1][1].clone() / det.clone(), -m[0][1].clone() / det.clone()],
        [-m[1][0].clone() / det.clone(), m[0][0].clone() / det],
    ];
    let w = [[eps[0].clone(), eps[2].clone()], [eps[2].clone(), eps[1].clone()]];
    let mut r = [[S::zero(), S::zero()], [S::zero(), S::zero()]];
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = S::zero();
            for k in 0..2 {
                for l in 0..2 {
                    acc = acc + inv[k][i].clone() * w[k][l].clone() * inv[l][j].clone();
                }
            }
            r[i][j] = acc;
        }
    }
    Ok([r[0][0].clone(), r[1][1].clone(), r[0][1].clone()])
}

fn lift_eps<S: Scalar>(p: &DeformationParams) -> [S; 3] {
    [S::from_rational(p.e1()), S::from_rational(p.e2()), S::from_rational(p.e3())]
}

impl<S: Scalar> LinearBasisMap<S> {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    fn from_plane(source: &DeformationParams, m: [[S; 2]; 2], kind: MapKind, lambda: Option<S>) -> Result<Self> {
        let target = congruence_target(&lift_eps::<S>(source), &m)?;
        Ok(LinearBasisMap {
            n: source.n,
            matrix: plane_lift(source.n, &m, &S::one()),
            source: source.clone(),
            target,
            kind,
            lambda,
        })
    }

    pub fn identity(source: &DeformationParams) -> Self {
        let m = [[S::one(), S::zero()], [S::zero(), S::one()]];
        Self::from_plane(source, m, MapKind::Identity, None).expect("identity is invertible")
    }

    pub fn determinant(&self) -> S {
        determinant(&self.matrix)
    }

    pub fn is_invertible(&self) -> bool {
        let d = self.determinant();
        if S::is_exact() {
            !d.is_zero()
        } else {
            d.approx_f64().abs() > 1e-12
        }
    }

    /// Image of one basis element as sparse terms.
    pub fn image(&self, j: usize) -> Vec<(usize, S)> {
        (0..self.dim()).filter(|&i| !self.matrix[i][j].is_zero()).map(|i| (i, self.matrix[i][j].clone())).collect()
    }

    /// Source algebra over the map's scalars.
    pub fn source_algebra(&self) -> StructureConstants<S> {
        deformed_table(self.n, lift_eps::<S>(&self.source))
    }

    pub fn target_algebra(&self) -> StructureConstants<S> {
        deformed_table(self.n, self.target.clone())
    }

    /// Exact bracket-preservation residual between source and target algebras.
    pub fn residual(&self) -> Result<S> {
        is_isomorphism(self, &self.source_algebra(), &self.target_algebra())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &LinearBasisMap<S>) -> LinearBasisMap<S> {
        let d = self.dim();
        let mut m = vec![vec![S::zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = S::zero();
                for k in 0..d {
                    if !next.matrix[i][k].is_zero() && !self.matrix[k][j].is_zero() {
                        acc = acc + next.matrix[i][k].clone() * self.matrix[k][j].clone();
                    }
                }
                m[i][j] = acc;
            }
        }
        LinearBasisMap {
            n: self.n,
            matrix: m,
            source: self.source.clone(),
            target: next.target.clone(),
            kind: self.kind,
            lambda: self.lambda.clone(),
        }
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LinearBasisMap<T> {
        LinearBasisMap {
            n: self.n,
            matrix: self.matrix.iter().map(|r| r.iter().map(&f).collect()).collect(),
            source: self.source.clone(),
            target: [f(&self.target[0]), f(&self.target[1]), f(&self.target[2])],
            kind: self.kind,
            lambda: self.lambda.as_ref().map(&f),
        }
    }

    pub fn summary(&self) -> NormalFormSummary {
        let labels = phase_space_labels(self.n);
        let images = (0..self.dim())
            .filter(|&j| self.image(j) != vec![(j, S::one())])
            .map(|j| ImageJson {
                basis: labels[j].to_string(),
                image: self.image(j).into_iter().map(|(i, v)| TermOut { label: labels[i].to_string(), coeff: v.render() }).collect(),
            })
            .collect();
        let residual = self.residual().map(|r| r.render()).unwrap_or_else(|e| e.to_string());
        NormalFormSummary {
            kind: Some(self.kind),
            exact: S::is_exact(),
            lambda: self.lambda.as_ref().map(Scalar::render),
            target: self.target.iter().map(Scalar::render).collect(),
            residual,
            images,
            error: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermOut {
    pub label: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageJson {
    pub basis: String,
    pub image: Vec<TermOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormSummary {
    pub kind: Option<MapKind>,
    pub exact: bool,
    pub lambda: Option<String>,
    pub target: Vec<String>,
    pub residual: String,
    /// Images of the basis elements the map moves.
    pub images: Vec<ImageJson>,
    pub error: Option<String>,
}

impl NormalFormSummary {
    fn failed(e: &Error) -> Self {
        NormalFormSummary {
            kind: None,
            exact: true,
            lambda: None,
            target: Vec::new(),
            residual: String::new(),
            images: Vec::new(),
            error: Some(format!("{}: {e}", e.code())),
        }
    }
}

/// Max coefficient of `φ([u,v]_A) - [φu, φv]_B` over basis pairs.
pub fn is_isomorphism<S: Scalar>(map: &LinearBasisMap<S>, a: &StructureConstants<S>, b: &StructureConstants<S>) -> Result<S> {
    let d = map.dim();
    for x in [a.dim(), b.dim()] {
        if x != d {
            return Err(Error::DimensionMismatch { expected: d, found: x });
        }
    }
    let images: Vec<Vec<(usize, S)>> = (0..d).map(|j| map.image(j)).collect();
    let mut worst = S::zero();
    for u in 0..d {
        for v in u + 1..d {
            let mut diff = vec![S::zero(); d];
            for (c, coef) in a.bracket_basis(u, v) {
                for (i, x) in &images[c] {
                    diff[*i] = diff[*i].clone() + coef.clone() * x.clone();
                }
            }
            for (i, x) in b.bracket_sparse(&images[u], &images[v]) {
                diff[i] = diff[i].clone() - x;
            }
            for x in diff {
                let m = x.magnitude();
                if m.compare(&worst).is_gt() {
                    worst = m;
                }
            }
        }
    }
    Ok(worst)
}

/// Normal-form isomorphism of `g(eps)` onto its stratum representative, over Q(sqrt d).
///
/// * generic stratum: the mixing map with parameter `lambda`, onto `c * (e1, e2, 0)`;
/// * cone: `p -> p + (e3/e1) x`, onto `(e1, 0, 0)`;
/// * lines: a shear plus rescaling, onto `(0, 0, 1)`.
pub fn normal_form_map(p: &DeformationParams) -> Result<LinearBasisMap<QuadraticNumber>> {
    type Q = QuadraticNumber;
    let q = |r: &Rational| Q::rational(r.clone());
    let (e1, e2, e3) = (p.e1(), p.e2(), p.e3());
    match complex_stratum(p)? {
        ComplexStratum::U => {
            if e3.is_zero() {
                return Ok(LinearBasisMap::identity(p));
            }
            let t = e3 * e3 / (e1 * e2);
            if t > Rational::one() {
                return Err(Error::NotRealRepresentable(format!(
                    "eps3^2/(eps1 eps2) = {} > 1",
                    format_rational(&t)
                )));
            }
            let s = Q::sqrt_of(&(Rational::one() - &t))?;
            let lambda = q(&(Rational::from_integer(2.into()) / &t)) * (Q::one() - s);
            let a = lambda.clone() * q(&(e3 / (e2 * Rational::from_integer(2.into()))));
            let b = lambda.clone() * q(&(e3 / (e1 * Rational::from_integer(2.into()))));
            // x -> x + a p, p -> b x + p
            let m = [[Q::one(), b], [a, Q::one()]];
            LinearBasisMap::from_plane(p, m, MapKind::MixingU, Some(lambda))
        }
        ComplexStratum::Conic => {
            if e1.is_zero() {
                return Ok(LinearBasisMap::identity(p));
            }
            let r = q(&(e3 / e1));
            LinearBasisMap::from_plane(p, [[Q::one(), r], [Q::zero(), Q::one()]], MapKind::Conic, None)
        }
        ComplexStratum::LLine => {
            let two = Rational::from_integer(2.into());
            let m = if e1.is_zero() {
                // x -> x, p -> (e2 / 2 e3) x + e3 p
                [[Q::one(), q(&(e2 / (&two * e3)))], [Q::zero(), q(e3)]]
            } else {
                // x -> e3 x + (e1 / 2 e3) p, p -> p
                [[q(e3), Q::zero()], [q(&(e1 / (&two * e3))), Q::one()]]
            };
            LinearBasisMap::from_plane(p, m, MapKind::Line, None)
        }
    }
}

/// `g(eps) -> g(lambda eps)`: positions and momenta divided by `sqrt(lambda)`, centre by `lambda`.
pub fn scaling_map(p: &DeformationParams, lambda: &Rational) -> Result<LinearBasisMap<QuadraticNumber>> {
    if !lambda.is_positive() {
        return Err(Error::Parameter("scaling factor must be positive".into()));
    }
    let r = QuadraticNumber::one() / QuadraticNumber::sqrt_of(lambda)?;
    let m = [[r.clone(), QuadraticNumber::zero()], [QuadraticNumber::zero(), r]];
    LinearBasisMap::from_plane(p, m, MapKind::Scaling, None)
}

/// `g(e1, e2, e3) -> g(e1, e2, 0)` on the generic stratum:
/// `x -> x`, `p -> (e3/e1) x + s p`, `I -> s I` with `s = sqrt(1 - e3^2/(e1 e2))`.
pub fn effective_parameter_map(p: &DeformationParams) -> Result<LinearBasisMap<QuadraticNumber>> {
    type Q = QuadraticNumber;
    if complex_stratum(p)? != ComplexStratum::U {
        return Err(Error::Parameter("effective parameters need the generic stratum".into()));
    }
    let t = p.e3() * p.e3() / (p.e1() * p.e2());
    if t > Rational::one() {
        return Err(Error::NotRealRepresentable("eps3^2 > eps1 eps2".into()));
    }
    let s = Q::sqrt_of(&(Rational::one() - t))?;
    let m = [[Q::one(), Q::rational(p.e3() / p.e1())], [Q::zero(), s]];
    LinearBasisMap::from_plane(p, m, MapKind::EffectiveParameters, None)
}

/// Generator rescaling in floating point onto the target scaled by `1/c`.
pub fn float_rescale(map_target: &[f64; 3], n: usize, c: f64, source: &DeformationParams) -> LinearBasisMap<f64> {
    let r = c.sqrt();
    let m = [[r, 0.0], [0.0, r]];
    LinearBasisMap {
        n,
        matrix: plane_lift(n, &m, &1.0),
        source: source.clone(),
        target: [map_target[0] / c, map_target[1] / c, map_target[2] / c],
        kind: MapKind::Scaling,
        lambda: None,
    }
}

/// Which direction a commonly quoted normal-form map actually holds in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Inverse,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionReport {
    pub stratum: ComplexStratum,
    pub claimed_target: Vec<String>,
    pub forward_residual: String,
    pub inverse_residual: String,
    pub validated: Direction,
}

/// Tests the literal printed map in the stated direction `g(eps) -> g(target)` and, if that
/// fails, as `g(target) -> g(eps)`.
pub fn literal_map_direction(p: &DeformationParams) -> Result<DirectionReport> {
    type Q = QuadraticNumber;
    let q = |r: &Rational| Q::rational(r.clone());
    let two = Rational::from_integer(2.into());
    let (e1, e2, e3) = (p.e1(), p.e2(), p.e3());
    let n = p.n;
    let stratum = complex_stratum(p)?;
    let (matrix, target): (Vec<Vec<Q>>, [Q; 3]) = match stratum {
        ComplexStratum::U => {
            let t = e3 * e3 / (e1 * e2);
            if e3.is_zero() || t > Rational::one() {
                return Err(Error::Parameter("literal mixing map needs 0 < eps3^2 < eps1 eps2".into()));
            }
            let s = Q::sqrt_of(&(Rational::one() - &t))?;
            let lambda = q(&(&two / &t)) * (Q::one() - s);
            let a = lambda.clone() * q(&(e3 / (e2 * &two)));
            let b = lambda.clone() * q(&(e3 / (e1 * &two)));
            let mut m = plane_lift(n, &[[Q::one(), b.clone()], [a.clone(), Q::one()]], &Q::one());
            let labels = phase_space_labels(n);
            for (j, l) in labels.iter().enumerate() {
                if matches!(l, crate::lie::BasisLabel::L(..)) {
                    m[j][j] = lambda.clone();
                }
            }
            (m, [q(e1), q(e2), Q::zero()])
        }
        ComplexStratum::Conic => {
            if e1.is_zero() {
                return Err(Error::Parameter("literal conic map needs eps1 != 0".into()));
            }
            let r = Q::sqrt_of(&(e2 / e1)).or_else(|_| Ok::<Q, Error>(Q::zero()))?;
            (plane_lift(n, &[[Q::one(), r], [Q::zero(), Q::one()]], &Q::one()), [q(e1), Q::zero(), Q::zero()])
        }
        ComplexStratum::LLine => {
            if !e1.is_zero() {
                return Err(Error::Parameter("literal line map is stated for eps1 = 0".into()));
            }
            let k = q(&(e2 / (&two * e3)));
            (plane_lift(n, &[[Q::one(), -k], [Q::zero(), Q::one()]], &Q::one()), [Q::zero(), Q::zero(), q(e3)])
        }
    };
    let src = deformed_table(n, lift_eps::<Q>(p));
    let tgt = deformed_table(n, target.clone());
    let map = LinearBasisMap { n, matrix, source: p.clone(), target: target.clone(), kind: MapKind::Literal, lambda: None };
    let fwd = is_isomorphism(&map, &src, &tgt)?;
    let inv = is_isomorphism(&map, &tgt, &src)?;
    let validated = if fwd.is_zero() {
        Direction::Forward
    } else if inv.is_zero() {
        Direction::Inverse
    } else {
        Direction::Neither
    };
    Ok(DirectionReport {
        stratum,
        claimed_target: target.iter().map(Scalar::render).collect(),
        forward_residual: fwd.render(),
        inverse_residual: inv.render(),
        validated,
    })
}

/// Rational structure constants of the stratum representative when the target is rational.
pub fn rational_target(map: &LinearBasisMap<QuadraticNumber>) -> Option<DeformationParams> {
    if map.target.iter().all(QuadraticNumber::is_rational) {
        DeformationParams::new(map.n, map.target[0].a.clone(), map.target[1].a.clone(), map.target[2].a.clone()).ok()
    } else {
        None
    }
}

/// Bracket residual of the identity between `g(eps)` built both ways; used by checks.
pub fn form_route_agrees(p: &DeformationParams) -> bool {
    build_from_form(&BilinearForm::deformation(p)) == build_deformed(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn params(e: [Rational; 3]) -> DeformationParams {
        let [a, b, c] = e;
        DeformationParams::new(3, a, b, c).unwrap()
    }

    #[test]
    fn complex_examples() {
        let r = classify_complex(&DeformationParams::from_ints(3, [1, 1, 0])).unwrap();
        assert_eq!((r.complex_stratum, r.paper_label.as_str(), r.conflict), (ComplexStratum::U, "o(5,C)", false));
        let r = classify_complex(&DeformationParams::from_ints(3, [1, 1, 1])).unwrap();
        assert_eq!(r.complex_stratum, ComplexStratum::Conic);
        assert!(!r.conflict);
        let r = classify_complex(&DeformationParams::from_ints(3, [0, 1, 5])).unwrap();
        assert_eq!(r.complex_stratum, ComplexStratum::LLine);
        assert!(r.conflict);
        assert!(classify_complex(&DeformationParams::zero(3)).is_err());
        assert!(classify_complex(&DeformationParams::from_ints(2, [1, 1, 0])).is_err());
    }

    #[test]
    fn real_examples() {
        let r = classify_real(&DeformationParams::from_ints(3, [1, 1, 0])).unwrap();
        assert_eq!(r.real_stratum, RealStratum::Rpp);
        assert_eq!(r.paper_label, "o(5)");
        assert_eq!(r.b_signature, [5, 0, 0]);
        assert!(!r.conflict);
        let r = classify_real(&DeformationParams::from_ints(3, [0, -2, 0])).unwrap();
        assert_eq!(r.real_stratum, RealStratum::Cm);
        assert_eq!(r.b_signature[2], 1);
        assert!(!r.conflict);
        let r = classify_real(&DeformationParams::from_ints(3, [1, 1, 2])).unwrap();
        assert_eq!(r.real_stratum, RealStratum::Rpp);
        assert_eq!(r.b_signature, [4, 1, 0]);
        assert!(r.conflict);
        let r = classify_real(&DeformationParams::from_ints(3, [1, -1, 0])).unwrap();
        assert_eq!(r.killing_signature, [4, 6, 0]);
        assert!(!r.conflict);
    }

    #[test]
    fn mixing_map_exact() {
        let p = params([int(1), int(1), rat(3, 5)]);
        let m = normal_form_map(&p).unwrap();
        assert_eq!(m.lambda.clone().unwrap(), QuadraticNumber::rational(rat(10, 9)));
        assert!(m.residual().unwrap().is_zero());
        assert_eq!(rational_target(&m).unwrap().eps, vec![rat(9, 10), rat(9, 10), int(0)]);
        assert!(m.is_invertible());
    }

    #[test]
    fn conic_and_line_maps() {
        let m = normal_form_map(&DeformationParams::from_ints(3, [1, 4, 2])).unwrap();
        assert!(m.residual().unwrap().is_zero());
        assert_eq!(rational_target(&m).unwrap().eps, vec![int(1), int(0), int(0)]);
        let p = DeformationParams::from_ints(3, [0, 4, 1]);
        let m = normal_form_map(&p).unwrap();
        assert!(m.residual().unwrap().is_zero());
        assert_eq!(rational_target(&m).unwrap().eps, vec![int(0), int(0), int(1)]);
        let d = literal_map_direction(&p).unwrap();
        assert_eq!(d.validated, Direction::Inverse);
    }

    #[test]
    fn irrational_lambda() {
        let p = params([int(1), int(2), int(1)]);
        let m = normal_form_map(&p).unwrap();
        assert!(!m.lambda.clone().unwrap().is_rational());
        assert!(m.residual().unwrap().is_zero());
        let e = effective_parameter_map(&p).unwrap();
        assert!(e.residual().unwrap().is_zero());
        assert_eq!(rational_target(&e).unwrap().eps, vec![int(1), int(2), int(0)]);
    }

    #[test]
    fn not_real_representable() {
        let p = DeformationParams::from_ints(3, [1, 1, 2]);
        assert!(matches!(normal_form_map(&p), Err(Error::NotRealRepresentable(_))));
    }

    #[test]
    fn scaling_by_two() {
        let p = params([rat(1, 3), int(-2), rat(5, 7)]);
        let m = scaling_map(&p, &int(2)).unwrap();
        assert!(m.residual().unwrap().is_zero());
        assert_eq!(rational_target(&m).unwrap(), p.scaled(&int(2)));
    }

    #[test]
    fn literal_mixing_map_fails_both_ways() {
        let d = literal_map_direction(&params([int(1), int(1), rat(3, 5)])).unwrap();
        assert_eq!(d.validated, Direction::Neither);
    }
}
