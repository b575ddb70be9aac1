//! Chevalley–Eilenberg cochains of a subalgebra `h` of `g` with values in a submodule `M`,
//! exact coboundary matrices, cohomology and invariant cocycles.
//!
//! A basis cochain of degree `k` is a strictly increasing `k`-tuple of positions in `h`
//! together with one position in `M`; it sends that tuple to the chosen basis vector and
//! every other increasing tuple to zero.

use crate::error::{Error, Result};
use crate::lie::{non_rotation_indices, rotation_indices, BasisLabel, StructureConstants};
use crate::linalg::{kernel, Echelon, SparseMatrix, SparseVec};
use crate::params::DeformationParams;
use crate::rational::{format_rational, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Cochain spaces `C^k(h, M)` inside an ambient algebra.
#[derive(Clone, Debug)]
pub struct CochainComplex<'a> {
    pub g: &'a StructureConstants,
    /// Indices of `h` in `g`, increasing.
    pub source: Vec<usize>,
    /// Indices of `M` in `g`, increasing.
    pub values: Vec<usize>,
    weights: Vec<Vec<i64>>,
}

fn combinations(s: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, s: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..s {
            cur.push(i);
            rec(i + 1, s, k, cur, out);
            cur.pop();
        }
    }
    rec(0, s, k, &mut cur, &mut out);
    out
}

fn parity(i: usize) -> Rational {
    if i % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Basis of one cochain degree.
#[derive(Clone, Debug)]
pub struct CochainBasis {
    pub degree: usize,
    pub tuples: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    nvalues: usize,
}

impl CochainBasis {
    fn new(s: usize, k: usize, nvalues: usize) -> Self {
        let tuples = combinations(s, k);
        let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        CochainBasis { degree: k, tuples, index, nvalues }
    }

    pub fn len(&self) -> usize {
        self.tuples.len() * self.nvalues
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn position(&self, tuple: &[usize], value: usize) -> usize {
        self.index[tuple] * self.nvalues + value
    }

    pub fn split(&self, i: usize) -> (&[usize], usize) {
        (&self.tuples[i / self.nvalues], i % self.nvalues)
    }
}

impl<'a> CochainComplex<'a> {
    /// `h` must be a subalgebra and `M` must be stable under brackets with `h`.
    pub fn new(g: &'a StructureConstants, source: &[usize], values: &[usize]) -> Result<Self> {
        let mut source = source.to_vec();
        source.sort_unstable();
        source.dedup();
        let mut values = values.to_vec();
        values.sort_unstable();
        values.dedup();
        if source.iter().chain(values.iter()).any(|&i| i >= g.dim()) {
            return Err(Error::Structure("index outside the algebra".into()));
        }
        if !g.is_subalgebra(&source) {
            return Err(Error::Structure("source is not a subalgebra".into()));
        }
        if !g.brackets_land_in(&source, &values, &values) {
            return Err(Error::Structure("values are not a module over the source".into()));
        }
        Ok(CochainComplex { g, source, values, weights: g.gradings() })
    }

    /// Adjoint cochains of the whole algebra.
    pub fn adjoint(g: &'a StructureConstants) -> Self {
        let all: Vec<usize> = (0..g.dim()).collect();
        Self::new(g, &all, &all).expect("g is a g-module")
    }

    pub fn basis(&self, k: usize) -> CochainBasis {
        CochainBasis::new(self.source.len(), k, self.values.len())
    }

    fn value_pos(&self, gi: usize) -> usize {
        self.values.binary_search(&gi).expect("bracket stays in the module")
    }

    fn source_pos(&self, gi: usize) -> Option<usize> {
        self.source.binary_search(&gi).ok()
    }

    /// Multi-weight of a basis cochain: weight of the value minus weights of the arguments.
    pub fn weight(&self, basis: &CochainBasis, i: usize) -> Vec<i64> {
        let (t, c) = basis.split(i);
        let mut w = self.weights[self.values[c]].clone();
        for &a in t {
            for (k, x) in self.weights[self.source[a]].iter().enumerate() {
                w[k] -= x;
            }
        }
        w
    }

    /// Matrix of `d_k : C^k -> C^{k+1}`.
    pub fn differential(&self, k: usize) -> SparseMatrix {
        let bk = self.basis(k);
        let bk1 = self.basis(k + 1);
        let s = self.source.len();
        let mut mat = SparseMatrix::zeros(bk1.len(), bk.len());
        // [h_y, M_c] in value positions
        let act: Vec<Vec<Vec<(usize, Rational)>>> = (0..s)
            .map(|y| {
                (0..self.values.len())
                    .map(|c| {
                        self.g
                            .bracket_basis(self.source[y], self.values[c])
                            .into_iter()
                            .map(|(d, v)| (self.value_pos(d), v))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        // pairs a < b of h with a nonzero component of [h_a, h_b] on h_z
        let mut producers: Vec<Vec<(usize, usize, Rational)>> = vec![Vec::new(); s];
        for a in 0..s {
            for b in a + 1..s {
                for (z, v) in self.g.bracket_basis(self.source[a], self.source[b]) {
                    let zp = self.source_pos(z).expect("subalgebra");
                    producers[zp].push((a, b, v));
                }
            }
        }
        for (col, colvec) in mat.cols.iter_mut().enumerate() {
            let (t, c) = bk.split(col);
            let mut pairs = Vec::new();
            for y in 0..s {
                if t.contains(&y) {
                    continue;
                }
                let pos = t.iter().filter(|&&u| u < y).count();
                let mut big = t.to_vec();
                big.insert(pos, y);
                let sign = parity(pos);
                for (d, v) in &act[y][c] {
                    pairs.push((bk1.position(&big, *d), &sign * v));
                }
            }
            for (zi, &z) in t.iter().enumerate() {
                let sz = parity(zi);
                let rest: Vec<usize> = t.iter().copied().filter(|&u| u != z).collect();
                for (a, b, v) in &producers[z] {
                    if rest.contains(a) || rest.contains(b) {
                        continue;
                    }
                    let mut big = rest.clone();
                    big.push(*a);
                    big.push(*b);
                    big.sort_unstable();
                    let i = big.iter().position(|u| u == a).expect("a");
                    let j = big.iter().position(|u| u == b).expect("b");
                    pairs.push((bk1.position(&big, c), parity(i + j) * &sz * v));
                }
            }
            *colvec = SparseVec::from_pairs(pairs);
        }
        mat
    }

    /// Action of `y` in `g` on 2-cochains: `(y.f)(a,b) = [y, f(a,b)] - f([y,a],b) - f(a,[y,b])`.
    pub fn action_on_2cochains(&self, y: usize) -> Result<SparseMatrix> {
        if !self.g.brackets_land_in(&[y], &self.source, &self.source)
            || !self.g.brackets_land_in(&[y], &self.values, &self.values)
        {
            return Err(Error::Structure("generator does not preserve source and values".into()));
        }
        let b2 = self.basis(2);
        let s = self.source.len();
        // inv[z] = [(a, A_za)] with [y, h_a] = sum_z A_za h_z
        let mut inv: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); s];
        for a in 0..s {
            for (z, v) in self.g.bracket_basis(y, self.source[a]) {
                inv[self.source_pos(z).expect("preserved")].push((a, v));
            }
        }
        let mut mat = SparseMatrix::zeros(b2.len(), b2.len());
        for (col, colvec) in mat.cols.iter_mut().enumerate() {
            let (t, c) = b2.split(col);
            let (t1, t2) = (t[0], t[1]);
            let mut pairs = Vec::new();
            for (d, v) in self.g.bracket_basis(y, self.values[c]) {
                pairs.push((b2.position(t, self.value_pos(d)), v));
            }
            let mut push = |p: usize, q: usize, v: Rational| {
                pairs.push((b2.position(&[p, q], c), v));
            };
            for (a, v) in &inv[t1] {
                if *a < t2 {
                    push(*a, t2, -v.clone());
                }
                if *a > t2 {
                    push(t2, *a, v.clone());
                }
            }
            for (a, v) in &inv[t2] {
                if *a < t1 {
                    push(*a, t1, v.clone());
                }
                if *a > t1 {
                    push(t1, *a, -v.clone());
                }
            }
            *colvec = SparseVec::from_pairs(pairs);
        }
        Ok(mat)
    }

    /// Cohomology in degree `k`, computed blockwise on the weight decomposition.
    pub fn cohomology(&self, k: usize) -> CohomologyResult {
        let bk = self.basis(k);
        let dout = self.differential(k);
        let din = if k > 0 { Some(self.differential(k - 1)) } else { None };
        let mut blocks: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for i in 0..bk.len() {
            blocks.entry(self.weight(&bk, i)).or_default().push(i);
        }
        let in_blocks: BTreeMap<Vec<i64>, Vec<usize>> = match &din {
            Some(d) => {
                let bprev = self.basis(k - 1);
                let mut m: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
                for j in 0..d.ncols {
                    m.entry(self.weight(&bprev, j)).or_default().push(j);
                }
                m
            }
            None => BTreeMap::new(),
        };
        let (mut rank_in, mut rank_out, mut kernel_dim) = (0, 0, 0);
        let mut reps = Vec::new();
        for (w, cols) in &blocks {
            let local: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(l, &g)| (g, l)).collect();
            let sub = SparseMatrix {
                nrows: dout.nrows,
                ncols: cols.len(),
                cols: cols.iter().map(|&c| dout.cols[c].clone()).collect(),
            };
            let z = kernel(&sub.rows().into_iter().filter(|r| !r.is_zero()).collect::<Vec<_>>(), cols.len());
            kernel_dim += z.len();
            rank_out += cols.len() - z.len();
            let mut image = Echelon::new(true);
            if let (Some(d), Some(jcols)) = (&din, in_blocks.get(w)) {
                for &j in jcols {
                    image.insert(&d.cols[j].remap(|g| local[&g]));
                }
            }
            rank_in += image.rank();
            let mut quot = Echelon::new(true);
            for v in &z {
                quot.insert(&image.reduce(v));
            }
            debug_assert_eq!(quot.rank(), z.len() - image.rank());
            reps.extend(quot.rows_sorted().into_iter().map(|r| r.remap(|l| cols[l])));
        }
        reps.sort_by_key(|r| r.leading());
        CohomologyResult {
            degree: k,
            dimension: reps.len(),
            rank_in,
            rank_out,
            kernel_dim,
            cochain_dim: bk.len(),
            representatives: reps.into_iter().map(|c| self.cochain(k, c)).collect(),
        }
    }

    pub fn cochain(&self, k: usize, coeffs: SparseVec) -> CochainMap {
        CochainMap {
            degree: k,
            source: self.source.clone(),
            values: self.values.clone(),
            labels: self.g.labels.clone(),
            coeffs,
        }
    }

    /// Builds a cochain from `(arguments, value, coefficient)` triples given by labels;
    /// argument order is arbitrary and the antisymmetry sign is applied.
    pub fn cochain_from_labels(
        &self,
        k: usize,
        entries: &[(Vec<BasisLabel>, BasisLabel, Rational)],
    ) -> Result<CochainMap> {
        let basis = self.basis(k);
        let mut pairs = Vec::new();
        for (args, val, coef) in entries {
            if args.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: args.len() });
            }
            let mut pos = Vec::with_capacity(k);
            for l in args {
                let gi = self.g.index_of(*l).ok_or_else(|| Error::Structure(format!("no label {l}")))?;
                pos.push(self.source_pos(gi).ok_or_else(|| Error::Structure(format!("{l} not in source")))?);
            }
            let mut sorted = pos.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let inversions = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| pos[i] > pos[j]).count();
            let vi = self.g.index_of(*val).ok_or_else(|| Error::Structure(format!("no label {val}")))?;
            let vp = self.values.binary_search(&vi).map_err(|_| Error::Structure(format!("{val} not in values")))?;
            pairs.push((basis.position(&sorted, vp), parity(inversions) * coef));
        }
        Ok(self.cochain(k, SparseVec::from_pairs(pairs)))
    }

    /// Restriction of a bracket table difference to `h x h`, as a 2-cochain with values in `M`.
    pub fn restrict_bilinear(&self, delta: &StructureConstants) -> Result<CochainMap> {
        let basis = self.basis(2);
        let mut pairs = Vec::new();
        for (i, &a) in self.source.iter().enumerate() {
            for (j, &b) in self.source.iter().enumerate().skip(i + 1) {
                for (c, v) in delta.bracket_basis(a, b) {
                    let vp = self
                        .values
                        .binary_search(&c)
                        .map_err(|_| Error::Structure("value outside the module".into()))?;
                    pairs.push((basis.position(&[i, j], vp), v));
                }
            }
        }
        Ok(self.cochain(2, SparseVec::from_pairs(pairs)))
    }
}

/// An antisymmetric multilinear map from `h` into the module, in the increasing-tuple basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CochainMap {
    pub degree: usize,
    pub source: Vec<usize>,
    pub values: Vec<usize>,
    pub labels: Vec<BasisLabel>,
    pub coeffs: SparseVec,
}

impl CochainMap {
    /// Value on an increasing tuple of source positions, as `(g index, coefficient)` pairs.
    pub fn on_tuple(&self, tuple: &[usize]) -> Vec<(usize, Rational)> {
        let basis = CochainBasis::new(self.source.len(), self.degree, self.values.len());
        (0..self.values.len())
            .filter_map(|c| {
                let v = self.coeffs.get(basis.position(tuple, c));
                (!v.is_zero()).then(|| (self.values[c], v))
            })
            .collect()
    }

    /// Entries `(argument labels, value label, coefficient)` in frozen order.
    pub fn entries(&self) -> Vec<CochainEntry> {
        let nv = self.values.len();
        let tuples = combinations(self.source.len(), self.degree);
        self.coeffs
            .entries
            .iter()
            .map(|(i, v)| {
                let t = &tuples[i / nv];
                CochainEntry {
                    index: *i,
                    args: t.iter().map(|&a| self.labels[self.source[a]].to_string()).collect(),
                    value: self.labels[self.values[i % nv]].to_string(),
                    coeff: format_rational(v),
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainEntry {
    pub index: usize,
    pub args: Vec<String>,
    pub value: String,
    pub coeff: String,
}

/// Dimension, ranks and canonical representatives of one cohomology group.
#[derive(Clone, Debug)]
pub struct CohomologyResult {
    pub degree: usize,
    pub dimension: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub kernel_dim: usize,
    pub cochain_dim: usize,
    pub representatives: Vec<CochainMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyJson {
    pub degree: usize,
    pub dimension: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub kernel_dim: usize,
    pub cochain_dim: usize,
    pub representatives: Vec<Vec<CochainEntry>>,
}

impl CohomologyResult {
    pub fn to_json(&self) -> CohomologyJson {
        CohomologyJson {
            degree: self.degree,
            dimension: self.dimension,
            rank_in: self.rank_in,
            rank_out: self.rank_out,
            kernel_dim: self.kernel_dim,
            cochain_dim: self.cochain_dim,
            representatives: self.representatives.iter().map(CochainMap::entries).collect(),
        }
    }
}

/// Matrix of `d_k` on `C^k(h, g)`; `h` must be an ideal of `g`.
pub fn coboundary_matrix(g: &StructureConstants, h: &[usize], k: usize) -> Result<SparseMatrix> {
    if !g.is_ideal(h) {
        return Err(Error::Structure("h is not an ideal".into()));
    }
    let all: Vec<usize> = (0..g.dim()).collect();
    Ok(CochainComplex::new(g, h, &all)?.differential(k))
}

/// Adjoint cohomology `H^k(g, g)`.
pub fn cohomology_dim(g: &StructureConstants, k: usize) -> Result<CohomologyResult> {
    if !(1..=3).contains(&k) {
        return Err(Error::Parameter(format!("degree must be 1, 2 or 3, got {k}")));
    }
    Ok(CochainComplex::adjoint(g).cohomology(k))
}

/// Cohomology of a subalgebra with coefficients in a submodule.
pub fn subalgebra_cohomology(
    g: &StructureConstants,
    sub: &[usize],
    module: &[usize],
    k: usize,
) -> Result<CohomologyResult> {
    Ok(CochainComplex::new(g, sub, module)?.cohomology(k))
}

fn check_decomposition(g: &StructureConstants, h: &[usize], k_part: &[usize]) -> Result<()> {
    if !g.is_ideal(h) {
        return Err(Error::Structure("h is not an ideal".into()));
    }
    if !g.is_subalgebra(k_part) {
        return Err(Error::Structure("k is not a subalgebra".into()));
    }
    let mut all: Vec<usize> = h.iter().chain(k_part.iter()).copied().collect();
    all.sort_unstable();
    all.dedup();
    if all.len() != g.dim() || h.len() + k_part.len() != g.dim() {
        return Err(Error::Structure("h and k are not complementary".into()));
    }
    Ok(())
}

/// Classes of 2-cocycles on `h` whose transform under every generator of `k` is a coboundary.
pub fn invariant_cocycles(g: &StructureConstants, h: &[usize], k_part: &[usize]) -> Result<CohomologyResult> {
    check_decomposition(g, h, k_part)?;
    let all: Vec<usize> = (0..g.dim()).collect();
    let cx = CochainComplex::new(g, h, &all)?;
    let (b1, b2, b3) = (cx.basis(1), cx.basis(2), cx.basis(3));
    let (n1, n2, n3) = (b1.len(), b2.len(), b3.len());
    let d1 = cx.differential(1);
    let d2 = cx.differential(2);
    let m = k_part.len();
    let actions: Vec<SparseMatrix> = k_part.iter().map(|&y| cx.action_on_2cochains(y)).collect::<Result<_>>()?;
    // unknowns (f, l_1..l_m); equations d2 f = 0 and y_j.f - d1 l_j = 0
    let ncols = n2 + m * n1;
    let nrows = n3 + m * n2;
    let mut sys = SparseMatrix::zeros(nrows, ncols);
    for t in 0..n2 {
        let mut entries = d2.cols[t].entries.clone();
        for (j, a) in actions.iter().enumerate() {
            entries.extend(a.cols[t].entries.iter().map(|(r, v)| (n3 + j * n2 + r, v.clone())));
        }
        sys.cols[t] = SparseVec { entries };
    }
    for j in 0..m {
        for s in 0..n1 {
            sys.cols[n2 + j * n1 + s] = d1.cols[s].remap(|r| n3 + j * n2 + r).scale(&-Rational::one());
        }
    }
    // block by weight; generators of k have weight zero in every grading used here
    let mut blocks: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    let zero_weight = k_part.iter().all(|&y| cx.weights[y].iter().all(|&w| w == 0));
    for t in 0..ncols {
        let w = if !zero_weight {
            Vec::new()
        } else if t < n2 {
            cx.weight(&b2, t)
        } else {
            cx.weight(&b1, (t - n2) % n1)
        };
        blocks.entry(w).or_default().push(t);
    }
    let mut zinv = Echelon::new(true);
    for cols in blocks.values() {
        let sub = SparseMatrix { nrows, ncols: cols.len(), cols: cols.iter().map(|&c| sys.cols[c].clone()).collect() };
        let rows: Vec<SparseVec> = sub.rows().into_iter().filter(|r| !r.is_zero()).collect();
        for v in kernel(&rows, cols.len()) {
            let f = SparseVec { entries: v.entries.iter().filter(|(l, _)| cols[*l] < n2).map(|(l, x)| (cols[*l], x.clone())).collect() };
            zinv.insert(&f);
        }
    }
    let mut image = Echelon::new(true);
    for c in &d1.cols {
        image.insert(c);
    }
    let mut quot = Echelon::new(true);
    for f in zinv.rows_sorted() {
        quot.insert(&image.reduce(&f));
    }
    let reps = quot.rows_sorted();
    Ok(CohomologyResult {
        degree: 2,
        dimension: reps.len(),
        rank_in: image.rank(),
        rank_out: n2 - cx.cohomology_kernel_dim(&d2),
        kernel_dim: zinv.rank(),
        cochain_dim: n2,
        representatives: reps.into_iter().map(|c| cx.cochain(2, c)).collect(),
    })
}

impl CochainComplex<'_> {
    fn cohomology_kernel_dim(&self, d: &SparseMatrix) -> usize {
        d.ncols - d.rank()
    }
}

/// Compares the full adjoint `H^2(g, g)` with the invariant part of `H^2(h, g)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HochschildSerreReport {
    pub h2_full: usize,
    pub h2_invariant: usize,
    pub equal: bool,
}

pub fn hochschild_serre_check(g: &StructureConstants, h: &[usize], k_part: &[usize]) -> Result<HochschildSerreReport> {
    let full = cohomology_dim(g, 2)?.dimension;
    let inv = invariant_cocycles(g, h, k_part)?.dimension;
    Ok(HochschildSerreReport { h2_full: full, h2_invariant: inv, equal: full == inv })
}

/// Whether `f` is a coboundary (`f` in the image of `d_{k-1}` of its complex).
pub fn is_coboundary(cx: &CochainComplex, f: &CochainMap) -> bool {
    if f.degree == 0 {
        return f.coeffs.is_zero();
    }
    let d = cx.differential(f.degree - 1);
    let mut e = Echelon::new(false);
    for c in &d.cols {
        e.insert(c);
    }
    e.contains(&f.coeffs)
}

/// Rank of a family of cochains modulo coboundaries.
pub fn rank_modulo_coboundaries(cx: &CochainComplex, fs: &[CochainMap]) -> usize {
    let k = fs.first().map_or(1, |f| f.degree);
    let d = cx.differential(k - 1);
    let mut image = Echelon::new(true);
    for c in &d.cols {
        image.insert(c);
    }
    let mut quot = Echelon::new(true);
    for f in fs {
        quot.insert(&image.reduce(&f.coeffs));
    }
    quot.rank()
}

/// Whether two families of cochains span the same subspace modulo coboundaries.
pub fn same_span_modulo_coboundaries(cx: &CochainComplex, a: &[CochainMap], b: &[CochainMap]) -> bool {
    let k = a.first().or(b.first()).map_or(1, |f| f.degree);
    let d = cx.differential(k - 1);
    let mut image = Echelon::new(true);
    for c in &d.cols {
        image.insert(c);
    }
    let canon = |fs: &[CochainMap]| {
        let mut e = Echelon::new(true);
        for f in fs {
            e.insert(&image.reduce(&f.coeffs));
        }
        e.rows_sorted()
    };
    canon(a) == canon(b)
}

/// The three deformation cocycles of g_n: derivatives of the deformed bracket in each
/// parameter, restricted to the Heisenberg ideal. With `lifted = false` only the
/// position/momentum pairs are kept, dropping the components on pairs with the centre.
pub fn deformation_cocycles(cx: &CochainComplex, n: usize, lifted: bool) -> Result<Vec<CochainMap>> {
    let base = crate::lie::build_deformed(&DeformationParams::zero(n));
    let mut out = Vec::new();
    for k in 0..3 {
        let mut e = [0i64; 3];
        e[k] = 1;
        let def = crate::lie::build_deformed(&DeformationParams::from_ints(n, e));
        let mut delta = StructureConstants::new(n, base.labels.clone());
        let iz = base.idx(BasisLabel::Iz);
        for a in 0..base.dim() {
            for b in a + 1..base.dim() {
                if !lifted && (a == iz || b == iz) {
                    continue;
                }
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (c, v) in def.bracket_basis(a, b) {
                    *acc.entry(c).or_insert_with(Rational::zero) += v;
                }
                for (c, v) in base.bracket_basis(a, b) {
                    *acc.entry(c).or_insert_with(Rational::zero) -= v;
                }
                for (c, v) in acc {
                    if !v.is_zero() {
                        delta.add_bracket_term(a, b, c, v);
                    }
                }
            }
        }
        out.push(cx.restrict_bilinear(&delta)?);
    }
    Ok(out)
}

/// Index split `(h, k)` of g_n into the Heisenberg ideal and the rotation subalgebra.
pub fn heisenberg_split(g: &StructureConstants) -> (Vec<usize>, Vec<usize>) {
    (non_rotation_indices(g), rotation_indices(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_quotient_model, build_standard, AlgebraKind};

    #[test]
    fn d_squared_vanishes() {
        let g = build_standard(AlgebraKind::GN, 3).unwrap();
        let (h, _) = heisenberg_split(&g);
        let d1 = coboundary_matrix(&g, &h, 1).unwrap();
        let d2 = coboundary_matrix(&g, &h, 2).unwrap();
        assert!(d2.mul(&d1).is_zero());
        let cx = CochainComplex::adjoint(&g);
        assert!(cx.differential(1).mul(&cx.differential(0)).is_zero());
    }

    #[test]
    fn non_ideal_rejected() {
        let g = build_standard(AlgebraKind::GN, 3).unwrap();
        let (_, k) = heisenberg_split(&g);
        assert!(matches!(coboundary_matrix(&g, &k, 1), Err(Error::Structure(_))));
    }

    #[test]
    fn euclidean_vector_ideal() {
        let g = build_standard(AlgebraKind::Euclidean, 3).unwrap();
        let h: Vec<usize> = (3..6).collect();
        let d1 = coboundary_matrix(&g, &h, 1).unwrap();
        assert_eq!(d1.shape(), (18, 18));
        assert_eq!(d1.rank(), 9);
        assert_eq!(d1.to_dense().rank_bareiss(), 9);
    }

    #[test]
    fn small_cohomology() {
        let o3 = build_standard(AlgebraKind::Orthogonal, 3).unwrap();
        assert_eq!(cohomology_dim(&o3, 2).unwrap().dimension, 0);
        assert_eq!(cohomology_dim(&o3, 1).unwrap().dimension, 0);
        let e3 = build_standard(AlgebraKind::Euclidean, 3).unwrap();
        let r = cohomology_dim(&e3, 2).unwrap();
        assert_eq!(r.dimension, 1);
        assert_eq!(r.dimension, r.kernel_dim - r.rank_in);
    }

    #[test]
    fn euclidean_invariant_cocycle() {
        let g = build_standard(AlgebraKind::Euclidean, 3).unwrap();
        let h: Vec<usize> = (3..6).collect();
        let k: Vec<usize> = (0..3).collect();
        let r = invariant_cocycles(&g, &h, &k).unwrap();
        assert_eq!(r.dimension, 1);
        let all: Vec<usize> = (0..6).collect();
        let cx = CochainComplex::new(&g, &h, &all).unwrap();
        let f = cx
            .cochain_from_labels(
                2,
                &[
                    (vec![BasisLabel::E(1), BasisLabel::E(2)], BasisLabel::L(1, 2), Rational::one()),
                    (vec![BasisLabel::E(1), BasisLabel::E(3)], BasisLabel::L(1, 3), Rational::one()),
                    (vec![BasisLabel::E(3), BasisLabel::E(2)], BasisLabel::L(2, 3), -Rational::one()),
                ],
            )
            .unwrap();
        assert!(same_span_modulo_coboundaries(&cx, &r.representatives, &[f]));
    }

    #[test]
    fn quotient_model_invariants() {
        let q = build_quotient_model(3).unwrap();
        let (h, k) = heisenberg_split(&q);
        let r = invariant_cocycles(&q, &h, &k).unwrap();
        assert_eq!(r.dimension, 4);
    }
}
