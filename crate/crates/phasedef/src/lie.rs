//! Lie algebras given by structure constants over a frozen basis.

use crate::error::{Error, Result};
use crate::linalg::{kernel, numeric_signature, DenseMatrix, SparseVec};
use crate::params::DeformationParams;
use crate::rational::{common_denominator, format_rational, parse_rational, Rational};
use crate::scalar::Scalar;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Basis element names. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisLabel {
    L(usize, usize),
    X(usize),
    P(usize),
    Iz,
    E(usize),
}

impl BasisLabel {
    /// `L(i, j)` normalized to `i < j`, with the sign picked up by the swap.
    pub fn l(i: usize, j: usize) -> Result<(BasisLabel, i32)> {
        if i == 0 || j == 0 || i == j {
            return Err(Error::Parameter(format!("invalid rotation label l_({i},{j})")));
        }
        Ok(if i < j { (BasisLabel::L(i, j), 1) } else { (BasisLabel::L(j, i), -1) })
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BasisLabel::L(i, j) if i < 10 && j < 10 => write!(f, "l_{i}{j}"),
            BasisLabel::L(i, j) => write!(f, "l_{{{i},{j}}}"),
            BasisLabel::X(i) => write!(f, "x_{i}"),
            BasisLabel::P(i) => write!(f, "p_{i}"),
            BasisLabel::Iz => write!(f, "I"),
            BasisLabel::E(i) => write!(f, "e_{i}"),
        }
    }
}

impl FromStr for BasisLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown basis label '{s}'"));
        if s == "I" {
            return Ok(BasisLabel::Iz);
        }
        let (head, idx) = s.split_once('_').ok_or_else(bad)?;
        let one = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match head {
            "x" => Ok(BasisLabel::X(one(idx)?)),
            "p" => Ok(BasisLabel::P(one(idx)?)),
            "e" => Ok(BasisLabel::E(one(idx)?)),
            "l" => {
                let (i, j) = if let Some(inner) = idx.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
                    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
                    (one(a)?, one(b)?)
                } else if idx.len() == 2 {
                    (one(&idx[..1])?, one(&idx[1..])?)
                } else {
                    return Err(bad());
                };
                match BasisLabel::l(i, j)? {
                    (lab, 1) => Ok(lab),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}

/// Sparse bracket table; only pairs `a < b` are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<S = Rational> {
    pub n: usize,
    pub labels: Vec<BasisLabel>,
    table: BTreeMap<(usize, usize), Vec<(usize, S)>>,
}

pub type Terms<S> = Vec<(usize, S)>;

fn add_term<S: Scalar>(acc: &mut BTreeMap<usize, S>, c: usize, v: S) {
    if v.is_zero() {
        return;
    }
    let e = acc.entry(c).or_insert_with(S::zero);
    *e = e.clone() + v;
    if e.is_zero() {
        acc.remove(&c);
    }
}

impl<S: Scalar> StructureConstants<S> {
    pub fn new(n: usize, labels: Vec<BasisLabel>) -> Self {
        StructureConstants { n, labels, table: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, l: BasisLabel) -> Option<usize> {
        self.labels.iter().position(|&x| x == l)
    }

    pub fn idx(&self, l: BasisLabel) -> usize {
        self.index_of(l).unwrap_or_else(|| panic!("label {l} not in basis"))
    }

    /// Adds `v * e_c` to `[e_a, e_b]` (and the antisymmetric partner).
    pub fn add_bracket_term(&mut self, a: usize, b: usize, c: usize, v: S) {
        assert!(a != b, "diagonal bracket");
        let (key, v) = if a < b { ((a, b), v) } else { ((b, a), -v) };
        let mut acc: BTreeMap<usize, S> = self.table.remove(&key).unwrap_or_default().into_iter().collect();
        add_term(&mut acc, c, v);
        if !acc.is_empty() {
            self.table.insert(key, acc.into_iter().collect());
        }
    }

    /// `[e_a, e_b]` as sparse terms, sign-adjusted for `a > b`.
    pub fn bracket_basis(&self, a: usize, b: usize) -> Terms<S> {
        if a == b {
            return Vec::new();
        }
        if a < b {
            self.table.get(&(a, b)).cloned().unwrap_or_default()
        } else {
            self.table
                .get(&(b, a))
                .map(|t| t.iter().map(|(c, v)| (*c, -v.clone())).collect())
                .unwrap_or_default()
        }
    }

    pub fn coeff(&self, a: usize, b: usize, c: usize) -> S {
        self.bracket_basis(a, b)
            .into_iter()
            .find(|(k, _)| *k == c)
            .map(|(_, v)| v)
            .unwrap_or_else(S::zero)
    }

    /// Stored entries `((a, b), terms)` with `a < b`.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Terms<S>)> {
        self.table.iter()
    }

    pub fn bracket_sparse(&self, u: &[(usize, S)], v: &[(usize, S)]) -> Terms<S> {
        let mut acc = BTreeMap::new();
        for (a, x) in u {
            for (b, y) in v {
                if a == b {
                    continue;
                }
                for (c, z) in self.bracket_basis(*a, *b) {
                    add_term(&mut acc, c, x.clone() * y.clone() * z);
                }
            }
        }
        acc.into_iter().collect()
    }

    /// Bilinear extension of the table to coefficient vectors.
    pub fn bracket(&self, u: &[S], v: &[S]) -> Result<Vec<S>> {
        for w in [u, v] {
            if w.len() != self.dim() {
                return Err(Error::DimensionMismatch { expected: self.dim(), found: w.len() });
            }
        }
        let su = to_sparse(u);
        let sv = to_sparse(v);
        let mut out = vec![S::zero(); self.dim()];
        for (c, x) in self.bracket_sparse(&su, &sv) {
            out[c] = x;
        }
        Ok(out)
    }

    /// Largest Jacobiator coefficient over all basis triples.
    pub fn jacobi_residual(&self) -> S {
        let d = self.dim();
        let mut worst = S::zero();
        for a in 0..d {
            for b in a + 1..d {
                for c in b + 1..d {
                    let mut acc = BTreeMap::new();
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        let xy = self.bracket_basis(x, y);
                        for (k, v) in self.bracket_sparse(&xy, &[(z, S::one())]) {
                            add_term(&mut acc, k, v);
                        }
                    }
                    for v in acc.values() {
                        let m = v.magnitude();
                        if m.compare(&worst).is_gt() {
                            worst = m;
                        }
                    }
                }
            }
        }
        worst
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> StructureConstants<T> {
        let mut out = StructureConstants::new(self.n, self.labels.clone());
        for (&(a, b), terms) in &self.table {
            for (c, v) in terms {
                out.add_bracket_term(a, b, *c, f(v));
            }
        }
        out
    }

    /// Dense adjoint matrix: column `b` holds `[e_a, e_b]`.
    pub fn ad_matrix(&self, a: usize) -> Vec<Vec<S>> {
        let d = self.dim();
        let mut m = vec![vec![S::zero(); d]; d];
        for b in 0..d {
            for (c, v) in self.bracket_basis(a, b) {
                m[c][b] = v;
            }
        }
        m
    }

    /// True when the span of `sub` is closed under brackets with the span of `with`,
    /// landing in the span of `target`.
    pub fn brackets_land_in(&self, sub: &[usize], with: &[usize], target: &[usize]) -> bool {
        sub.iter().all(|&a| {
            with.iter().all(|&b| self.bracket_basis(a, b).iter().all(|(c, _)| target.contains(c)))
        })
    }

    pub fn is_subalgebra(&self, h: &[usize]) -> bool {
        self.brackets_land_in(h, h, h)
    }

    pub fn is_ideal(&self, h: &[usize]) -> bool {
        let all: Vec<usize> = (0..self.dim()).collect();
        self.brackets_land_in(h, &all, h)
    }

    /// Expanded table `(a, b, c, coeff)` over all ordered pairs, in floating point.
    pub fn expanded_f64(&self) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for (&(a, b), terms) in &self.table {
            for (c, v) in terms {
                let x = v.approx_f64();
                out.push((a, b, *c, x));
                out.push((b, a, *c, -x));
            }
        }
        out
    }

    /// Indices of the labels, panicking on absent ones.
    pub fn indices(&self, labels: &[BasisLabel]) -> Vec<usize> {
        labels.iter().map(|&l| self.idx(l)).collect()
    }
}

fn to_sparse<S: Scalar>(u: &[S]) -> Terms<S> {
    u.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

impl StructureConstants<Rational> {
    /// Exact Killing form `tr(ad_a ad_b)`.
    pub fn killing_form(&self) -> DenseMatrix {
        let d = self.dim();
        let ads: Vec<Vec<Vec<Rational>>> = (0..d).map(|a| self.ad_matrix(a)).collect();
        let mut k = DenseMatrix::zeros(d, d);
        for a in 0..d {
            for b in a..d {
                let mut t = Rational::zero();
                for i in 0..d {
                    for j in 0..d {
                        if !ads[a][i][j].is_zero() && !ads[b][j][i].is_zero() {
                            t += &ads[a][i][j] * &ads[b][j][i];
                        }
                    }
                }
                k.set(a, b, t.clone());
                k.set(b, a, t);
            }
        }
        k
    }

    /// Signature `(positives, negatives, nulls)` of the Killing form by symmetric
    /// eigendecomposition; `|mu| < rel * max|mu|` counts as null.
    pub fn killing_signature_with(&self, rel: f64) -> (usize, usize, usize) {
        numeric_signature(&self.killing_form().to_f64(), rel)
    }

    pub fn killing_signature(&self) -> (usize, usize, usize) {
        self.killing_signature_with(crate::tolerance::Tolerances::default().killing_rel)
    }

    /// Dimension of the null space of the Killing form, exactly.
    pub fn killing_radical_dim(&self) -> usize {
        self.dim() - self.killing_form().rank_bareiss()
    }

    /// Integer gradings compatible with the bracket: every weight vector `w` with
    /// `w(c) = w(a) + w(b)` whenever `c_ab^c != 0`. Returns one weight tuple per basis element.
    pub fn gradings(&self) -> Vec<Vec<i64>> {
        let d = self.dim();
        let mut rows = Vec::new();
        for (&(a, b), terms) in &self.table {
            for (c, _) in terms {
                let mut r = BTreeMap::new();
                for (k, v) in [(*c, 1i64), (a, -1), (b, -1)] {
                    *r.entry(k).or_insert(0i64) += v;
                }
                rows.push(SparseVec::from_pairs(r.into_iter().map(|(k, v)| (k, Rational::from_integer(v.into())))));
            }
        }
        let basis = kernel(&rows, d);
        let mut weights = vec![Vec::with_capacity(basis.len()); d];
        for v in &basis {
            let dense = v.to_dense(d);
            let l = Rational::from_integer(common_denominator(&dense));
            for (i, x) in dense.iter().enumerate() {
                weights[i].push((x * &l).to_integer().to_i64().expect("small weight"));
            }
        }
        weights
    }

    /// Quotient by a coordinate ideal spanned by basis elements.
    pub fn quotient(&self, ideal: &[usize]) -> Result<StructureConstants> {
        if !self.is_ideal(ideal) {
            return Err(Error::Structure("quotient by a non-ideal".into()));
        }
        let keep: Vec<usize> = (0..self.dim()).filter(|i| !ideal.contains(i)).collect();
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut out = StructureConstants::new(self.n, keep.iter().map(|&i| self.labels[i]).collect());
        for (&(a, b), terms) in &self.table {
            if let (Some(&na), Some(&nb)) = (pos.get(&a), pos.get(&b)) {
                for (c, v) in terms {
                    if let Some(&nc) = pos.get(c) {
                        out.add_bracket_term(na, nb, nc, v.clone());
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> StructureConstantsJson {
        StructureConstantsJson {
            n: self.n,
            dim: self.dim(),
            labels: self.labels.iter().map(ToString::to_string).collect(),
            brackets: self
                .table
                .iter()
                .map(|(&(a, b), terms)| BracketJson {
                    a,
                    b,
                    terms: terms
                        .iter()
                        .map(|(c, v)| TermJson { c: *c, coeff: format_rational(v) })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &StructureConstantsJson) -> Result<Self> {
        let labels = j.labels.iter().map(|s| s.parse()).collect::<Result<Vec<BasisLabel>>>()?;
        if labels.len() != j.dim {
            return Err(Error::DimensionMismatch { expected: j.dim, found: labels.len() });
        }
        let mut out = StructureConstants::new(j.n, labels);
        for br in &j.brackets {
            if br.a >= br.b || br.b >= j.dim {
                return Err(Error::Parse(format!("bad bracket key ({}, {})", br.a, br.b)));
            }
            for t in &br.terms {
                if t.c >= j.dim {
                    return Err(Error::Parse(format!("bad term index {}", t.c)));
                }
                out.add_bracket_term(br.a, br.b, t.c, parse_rational(&t.coeff)?);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: usize,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketJson {
    pub a: usize,
    pub b: usize,
    pub terms: Vec<TermJson>,
}

/// Canonical serialized form of a bracket table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureConstantsJson {
    pub n: usize,
    pub dim: usize,
    pub labels: Vec<String>,
    pub brackets: Vec<BracketJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    Orthogonal,
    Euclidean,
    Heisenberg,
    GN,
}

impl FromStr for AlgebraKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orthogonal" | "o" => Ok(AlgebraKind::Orthogonal),
            "euclidean" | "e" => Ok(AlgebraKind::Euclidean),
            "heisenberg" | "h" => Ok(AlgebraKind::Heisenberg),
            "g_n" | "g" | "gn" => Ok(AlgebraKind::GN),
            _ => Err(Error::Parse(format!("unknown algebra kind '{s}'"))),
        }
    }
}

pub fn rotation_labels(m: usize) -> Vec<BasisLabel> {
    let mut v = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            v.push(BasisLabel::L(i, j));
        }
    }
    v
}

/// Frozen basis of the phase-space algebras: rotations, positions, momenta, centre.
pub fn phase_space_labels(n: usize) -> Vec<BasisLabel> {
    let mut v = rotation_labels(n);
    v.extend((1..=n).map(BasisLabel::X));
    v.extend((1..=n).map(BasisLabel::P));
    v.push(BasisLabel::Iz);
    v
}

fn delta(i: usize, j: usize) -> bool {
    i == j
}

/// Adds the rotation-rotation brackets of o(m) on the L labels.
fn add_rotation_brackets<S: Scalar>(g: &mut StructureConstants<S>, m: usize) {
    let rot = rotation_labels(m);
    for (ai, &la) in rot.iter().enumerate() {
        for &lb in rot.iter().skip(ai + 1) {
            let (BasisLabel::L(i, j), BasisLabel::L(k, l)) = (la, lb) else { unreachable!() };
            let a = g.idx(la);
            let b = g.idx(lb);
            let mut push = |flag: bool, p: usize, q: usize, sign: i32| {
                if flag && p != q {
                    let (lab, s) = BasisLabel::l(p, q).expect("valid");
                    let v = if s * sign > 0 { S::one() } else { -S::one() };
                    g.add_bracket_term(a, b, g.idx(lab), v);
                }
            };
            push(delta(i, k), j, l, 1);
            push(delta(j, l), i, k, 1);
            push(delta(i, l), j, k, -1);
            push(delta(j, k), i, l, -1);
        }
    }
}

/// Adds `[l_ij, v_k] = delta_ik v_j - delta_jk v_i` for a vector family `vec_label`.
fn add_vector_action<S: Scalar>(
    g: &mut StructureConstants<S>,
    n: usize,
    vec_label: impl Fn(usize) -> BasisLabel,
) {
    for (i, j) in rotation_labels(n).iter().map(|l| match l {
        BasisLabel::L(i, j) => (*i, *j),
        _ => unreachable!(),
    }) {
        let a = g.idx(BasisLabel::L(i, j));
        for k in 1..=n {
            let b = g.idx(vec_label(k));
            if k == i {
                g.add_bracket_term(a, b, g.idx(vec_label(j)), S::one());
            }
            if k == j {
                g.add_bracket_term(a, b, g.idx(vec_label(i)), -S::one());
            }
        }
    }
}

/// The standard algebras: o(n), e_n, the Heisenberg algebra h_n and g_n = o(n) ⋉ h_n.
pub fn build_standard(kind: AlgebraKind, n: usize) -> Result<StructureConstants> {
    match kind {
        AlgebraKind::Orthogonal => {
            if n < 2 {
                return Err(Error::Parameter(format!("o(n) needs n >= 2, got {n}")));
            }
            let mut g = StructureConstants::new(n, rotation_labels(n));
            add_rotation_brackets(&mut g, n);
            Ok(g)
        }
        AlgebraKind::Euclidean => {
            if n < 1 {
                return Err(Error::Parameter("e_n needs n >= 1".into()));
            }
            let mut labels = rotation_labels(n);
            labels.extend((1..=n).map(BasisLabel::E));
            let mut g = StructureConstants::new(n, labels);
            add_rotation_brackets(&mut g, n);
            add_vector_action(&mut g, n, BasisLabel::E);
            Ok(g)
        }
        AlgebraKind::Heisenberg => {
            if n < 1 {
                return Err(Error::Parameter("h_n needs n >= 1".into()));
            }
            let mut labels: Vec<BasisLabel> = (1..=2 * n).map(BasisLabel::E).collect();
            labels.push(BasisLabel::Iz);
            let mut g = StructureConstants::new(n, labels);
            let iz = g.idx(BasisLabel::Iz);
            for i in 1..=n {
                g.add_bracket_term(i - 1, n + i - 1, iz, Rational::one());
            }
            Ok(g)
        }
        AlgebraKind::GN => {
            if n < 1 {
                return Err(Error::Parameter("g_n needs n >= 1".into()));
            }
            Ok(build_deformed(&DeformationParams::zero(n)))
        }
    }
}

/// The deformed algebra g_n(eps) from its explicit commutation relations.
pub fn build_deformed(params: &DeformationParams) -> StructureConstants {
    deformed_table(params.n, [params.e1().clone(), params.e2().clone(), params.e3().clone()])
}

/// g_n(eps) over any scalar field.
pub fn deformed_table<S: Scalar>(n: usize, eps: [S; 3]) -> StructureConstants<S> {
    let [e1, e2, e3] = eps;
    let mut g = StructureConstants::new(n, phase_space_labels(n));
    add_rotation_brackets(&mut g, n);
    add_vector_action(&mut g, n, BasisLabel::X);
    add_vector_action(&mut g, n, BasisLabel::P);
    let iz = g.idx(BasisLabel::Iz);
    for i in 1..=n {
        let (xi, pi) = (g.idx(BasisLabel::X(i)), g.idx(BasisLabel::P(i)));
        for j in 1..=n {
            let (xj, pj) = (g.idx(BasisLabel::X(j)), g.idx(BasisLabel::P(j)));
            if i == j {
                g.add_bracket_term(xi, pj, iz, S::one());
                continue;
            }
            let (lab, s) = BasisLabel::l(i, j).expect("valid");
            let l = g.idx(lab);
            let sg = |e: &S| if s > 0 { e.clone() } else { -e.clone() };
            if i < j {
                g.add_bracket_term(xi, xj, l, sg(&e1));
                g.add_bracket_term(pi, pj, l, sg(&e2));
            }
            g.add_bracket_term(xi, pj, l, sg(&e3));
        }
        g.add_bracket_term(xi, iz, xi, e3.clone());
        g.add_bracket_term(xi, iz, pi, -e1.clone());
        g.add_bracket_term(pi, iz, xi, e2.clone());
        g.add_bracket_term(pi, iz, pi, -e3.clone());
    }
    g
}

/// Symmetric bilinear form on R^m; the last two coordinates span the distinguished plane.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearForm {
    pub matrix: DenseMatrix,
}

impl BilinearForm {
    pub fn new(matrix: DenseMatrix) -> Result<Self> {
        if !matrix.is_symmetric() {
            return Err(Error::Parameter("bilinear form must be symmetric".into()));
        }
        if matrix.nrows < 2 {
            return Err(Error::Parameter("bilinear form needs size >= 2".into()));
        }
        Ok(BilinearForm { matrix })
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows
    }

    /// Identity on the first `n` coordinates and `[[e1, e3], [e3, e2]]` on the plane.
    pub fn deformation(params: &DeformationParams) -> Self {
        let n = params.n;
        let mut m = DenseMatrix::zeros(n + 2, n + 2);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m.set(n, n, params.e1().clone());
        m.set(n + 1, n + 1, params.e2().clone());
        m.set(n, n + 1, params.e3().clone());
        m.set(n + 1, n, params.e3().clone());
        BilinearForm { matrix: m }
    }

    pub fn identity(m: usize) -> Self {
        let mut d = DenseMatrix::zeros(m, m);
        for i in 0..m {
            d.set(i, i, Rational::one());
        }
        BilinearForm { matrix: d }
    }

    /// Exact inertia `(p, q, null)`.
    pub fn signature(&self) -> (usize, usize, usize) {
        crate::linalg::rational_inertia(&self.matrix)
    }
}

/// Basis label of `v_a ∧ v_b` (1-based, `a < b`) in an ambient space of dimension `n + 2`.
pub fn wedge_label(n: usize, a: usize, b: usize) -> BasisLabel {
    debug_assert!(a < b);
    if b <= n {
        BasisLabel::L(a, b)
    } else if b == n + 1 {
        BasisLabel::X(a)
    } else if a <= n {
        BasisLabel::P(a)
    } else {
        BasisLabel::Iz
    }
}

/// The orthogonal algebra of a symmetric form acting on bivectors, relabeled to the
/// phase-space basis.
pub fn build_from_form(b: &BilinearForm) -> StructureConstants {
    let m = b.size();
    let rows: Vec<Vec<Rational>> =
        (0..m).map(|i| (0..m).map(|j| b.matrix.get(i, j).clone()).collect()).collect();
    form_table(&rows)
}

/// Bivector algebra of a symmetric matrix over any scalar field.
pub fn form_table<S: Scalar>(bm: &[Vec<S>]) -> StructureConstants<S> {
    let m = bm.len();
    let n = m - 2;
    let mut g = StructureConstants::new(n, phase_space_labels(n));
    // v_p ∧ v_q as (index, sign)
    let wedge = |p: usize, q: usize| -> Option<(usize, bool)> {
        match p.cmp(&q) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some((g.idx(wedge_label(n, p, q)), true)),
            std::cmp::Ordering::Greater => Some((g.idx(wedge_label(n, q, p)), false)),
        }
    };
    let pairs: Vec<(usize, usize)> =
        (1..=m).flat_map(|i| (i + 1..=m).map(move |j| (i, j))).collect();
    let mut terms = Vec::new();
    for (ai, &(i, j)) in pairs.iter().enumerate() {
        for &(k, l) in pairs.iter().skip(ai + 1) {
            let a = wedge(i, j).expect("distinct").0;
            let bidx = wedge(k, l).expect("distinct").0;
            let bf = |p: usize, q: usize| bm[p - 1][q - 1].clone();
            for (coef, neg, p, q) in [
                (bf(i, k), false, j, l),
                (bf(j, k), true, i, l),
                (bf(i, l), false, k, j),
                (bf(j, l), true, k, i),
            ] {
                if coef.is_zero() {
                    continue;
                }
                if let Some((c, pos)) = wedge(p, q) {
                    let v = if pos != neg { coef } else { -coef };
                    terms.push((a, bidx, c, v));
                }
            }
        }
    }
    for (a, b, c, v) in terms {
        g.add_bracket_term(a, b, c, v);
    }
    g
}

/// o(n) ⋉ C^{2n}: g_n with the centre divided out.
pub fn build_quotient_model(n: usize) -> Result<StructureConstants> {
    let g = build_standard(AlgebraKind::GN, n)?;
    let iz = g.idx(BasisLabel::Iz);
    g.quotient(&[iz])
}

/// Index lists for the rotation part, the Heisenberg ideal and the vector part of g_n.
pub fn rotation_indices<S: Scalar>(g: &StructureConstants<S>) -> Vec<usize> {
    (0..g.dim()).filter(|&i| matches!(g.labels[i], BasisLabel::L(..))).collect()
}

pub fn non_rotation_indices<S: Scalar>(g: &StructureConstants<S>) -> Vec<usize> {
    (0..g.dim()).filter(|&i| !matches!(g.labels[i], BasisLabel::L(..))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn unit(d: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); d];
        v[i] = Rational::one();
        v
    }

    #[test]
    fn orthogonal_three() {
        let g = build_standard(AlgebraKind::Orthogonal, 3).unwrap();
        let (l12, l13, l23) =
            (g.idx(BasisLabel::L(1, 2)), g.idx(BasisLabel::L(1, 3)), g.idx(BasisLabel::L(2, 3)));
        assert_eq!(g.bracket_basis(l12, l13), vec![(l23, int(1))]);
        assert!(g.jacobi_residual().is_zero());
    }

    #[test]
    fn euclidean_three() {
        let g = build_standard(AlgebraKind::Euclidean, 3).unwrap();
        let l12 = g.idx(BasisLabel::L(1, 2));
        let (e1, e2) = (g.idx(BasisLabel::E(1)), g.idx(BasisLabel::E(2)));
        assert_eq!(g.bracket_basis(l12, e1), vec![(e2, int(1))]);
        assert!(g.bracket_basis(e1, e2).is_empty());
    }

    #[test]
    fn heisenberg_two() {
        let g = build_standard(AlgebraKind::Heisenberg, 2).unwrap();
        let iz = g.idx(BasisLabel::Iz);
        assert_eq!(g.bracket_basis(0, 2), vec![(iz, int(1))]);
        assert!(g.bracket_basis(0, 1).is_empty());
    }

    #[test]
    fn g_n_dimension() {
        for n in 1..=6 {
            let g = build_standard(AlgebraKind::GN, n).unwrap();
            assert_eq!(g.dim(), n * (n - 1) / 2 + 2 * n + 1);
        }
    }

    #[test]
    fn deformed_examples() {
        let g = build_deformed(&DeformationParams::from_ints(3, [1, 2, 3]));
        let d = g.dim();
        let (x1, p1, iz) = (g.idx(BasisLabel::X(1)), g.idx(BasisLabel::P(1)), g.idx(BasisLabel::Iz));
        let r = g.bracket(&unit(d, x1), &unit(d, iz)).unwrap();
        let mut expect = vec![Rational::zero(); d];
        expect[x1] = int(3);
        expect[p1] = int(-1);
        assert_eq!(r, expect);

        let g = build_deformed(&DeformationParams::from_ints(3, [5, 0, 0]));
        let (x1, x2, l12) = (g.idx(BasisLabel::X(1)), g.idx(BasisLabel::X(2)), g.idx(BasisLabel::L(1, 2)));
        assert_eq!(g.bracket_basis(x1, x2), vec![(l12, int(5))]);

        let g = build_deformed(&DeformationParams::zero(3));
        let (x1, p1, p2, iz) =
            (g.idx(BasisLabel::X(1)), g.idx(BasisLabel::P(1)), g.idx(BasisLabel::P(2)), g.idx(BasisLabel::Iz));
        assert_eq!(g.bracket_basis(x1, p1), vec![(iz, int(1))]);
        assert!(g.bracket_basis(x1, p2).is_empty());

        let g = build_deformed(&DeformationParams::from_ints(3, [0, 0, 1]));
        let (x1, p1, iz) = (g.idx(BasisLabel::X(1)), g.idx(BasisLabel::P(1)), g.idx(BasisLabel::Iz));
        assert_eq!(g.bracket_basis(x1, iz), vec![(x1, int(1))]);
        assert_eq!(g.bracket_basis(p1, iz), vec![(p1, int(-1))]);
    }

    #[test]
    fn form_route_matches_relations() {
        let p = DeformationParams::new(4, rat(2, 3), int(-5), rat(7, 2)).unwrap();
        assert_eq!(build_from_form(&BilinearForm::deformation(&p)), build_deformed(&p));
        let q0 = DeformationParams::zero(3);
        assert_eq!(build_from_form(&BilinearForm::deformation(&q0)), build_standard(AlgebraKind::GN, 3).unwrap());
    }

    #[test]
    fn identity_form_is_orthogonal() {
        let g = build_from_form(&BilinearForm::identity(5));
        let o5 = build_standard(AlgebraKind::Orthogonal, 5).unwrap();
        // v_a ∧ v_b in g corresponds to L(a, b) in o(5)
        let to_o5 = |i: usize| -> usize {
            let lab = g.labels[i];
            let (a, b) = match lab {
                BasisLabel::L(a, b) => (a, b),
                BasisLabel::X(a) => (a, 4),
                BasisLabel::P(a) => (a, 5),
                BasisLabel::Iz => (4, 5),
                BasisLabel::E(_) => unreachable!(),
            };
            o5.idx(BasisLabel::L(a, b))
        };
        for a in 0..g.dim() {
            for b in 0..g.dim() {
                let mut lhs: Vec<(usize, Rational)> =
                    g.bracket_basis(a, b).into_iter().map(|(c, v)| (to_o5(c), v)).collect();
                lhs.sort();
                assert_eq!(lhs, o5.bracket_basis(to_o5(a), to_o5(b)));
            }
        }
    }

    #[test]
    fn jacobi_negative_control() {
        let mut g = build_deformed(&DeformationParams::from_ints(3, [1, 0, 0]));
        assert!(g.jacobi_residual().is_zero());
        let (x1, x2, l12) = (g.idx(BasisLabel::X(1)), g.idx(BasisLabel::X(2)), g.idx(BasisLabel::L(1, 2)));
        g.add_bracket_term(x1, x2, l12, int(1));
        assert!(!g.jacobi_residual().is_zero());
    }

    #[test]
    fn killing_examples() {
        let sig = |e: [i64; 3]| build_deformed(&DeformationParams::from_ints(3, e)).killing_signature();
        assert_eq!(sig([1, 1, 0]), (0, 10, 0));
        assert_eq!(sig([0, 0, 0]).2, 7);
        assert_eq!(sig([1, -1, 0]), (4, 6, 0));
        assert_eq!(build_deformed(&DeformationParams::zero(3)).killing_radical_dim(), 7);
    }

    #[test]
    fn labels_round_trip() {
        for l in phase_space_labels(11) {
            assert_eq!(l.to_string().parse::<BasisLabel>().unwrap(), l);
        }
        assert_eq!("e_4".parse::<BasisLabel>().unwrap(), BasisLabel::E(4));
        assert_eq!(BasisLabel::l(3, 1).unwrap(), (BasisLabel::L(1, 3), -1));
        assert!(BasisLabel::l(2, 2).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = build_deformed(&DeformationParams::new(3, rat(1, 2), int(2), rat(-3, 7)).unwrap());
        let j = g.to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back: StructureConstantsJson = serde_json::from_str(&s).unwrap();
        assert_eq!(StructureConstants::from_json(&back).unwrap(), g);
    }

    #[test]
    fn gradings_respect_brackets() {
        let g = build_standard(AlgebraKind::GN, 3).unwrap();
        let w = g.gradings();
        assert_eq!(w[0].len(), 2);
        for (&(a, b), terms) in g.entries() {
            for (c, _) in terms {
                for k in 0..w[0].len() {
                    assert_eq!(w[*c][k], w[a][k] + w[b][k]);
                }
            }
        }
    }
}
