//! Sparse multivariate polynomials with exact coefficients, used as functions on a dual space.

use crate::lie::StructureConstants;
use crate::rational::{to_f64, Rational};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A monomial is the sorted multiset of its variable indices.
pub type Monomial = Vec<u16>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![i as u16], Rational::one());
        p
    }

    pub fn monomial(nvars: usize, mut m: Monomial, c: Rational) -> Self {
        m.sort_unstable();
        let mut p = Self::zero(nvars);
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u16]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        let mut r = Polynomial::zero(self.nvars);
        for (m, v) in &self.terms {
            r.add_term(m.clone(), v * c);
        }
        r
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        let mut r = Polynomial::zero(self.nvars.max(o.nvars));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m: Monomial = m1.iter().chain(m2.iter()).copied().collect();
                m.sort_unstable();
                r.add_term(m, c1 * c2);
            }
        }
        r
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut r = Polynomial::zero(self.nvars);
        let v = i as u16;
        for (m, c) in &self.terms {
            let k = m.iter().filter(|&&x| x == v).count();
            if k == 0 {
                continue;
            }
            let pos = m.iter().position(|&x| x == v).expect("present");
            let mut mm = m.clone();
            mm.remove(pos);
            r.add_term(mm, c * Rational::from_integer((k as i64).into()));
        }
        r
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| m.iter().fold(c.clone(), |acc, &i| acc * &x[i as usize]))
            .sum()
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| m.iter().fold(to_f64(c), |acc, &i| acc * x[i as usize]))
            .sum()
    }

    pub fn gradient_f64(&self, x: &[f64]) -> Vec<f64> {
        (0..self.nvars).map(|i| self.derivative(i).eval_f64(x)).collect()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }
}

/// Exact Lie–Poisson bracket `{F, G}(xi) = sum_{a,b,c} c_ab^c xi_c dF/dxi_a dG/dxi_b`.
pub fn lie_poisson(g: &StructureConstants, f: &Polynomial, h: &Polynomial) -> Polynomial {
    let d = g.dim();
    let df: Vec<Polynomial> = (0..d).map(|a| f.derivative(a)).collect();
    let dh: Vec<Polynomial> = (0..d).map(|b| h.derivative(b)).collect();
    let mut out = Polynomial::zero(d);
    for (&(a, b), terms) in g.entries() {
        let cross = df[a].mul(&dh[b]).sub(&df[b].mul(&dh[a]));
        if cross.is_zero() {
            continue;
        }
        for (c, v) in terms {
            out = out.add(&cross.mul(&Polynomial::var(d, *c)).scale(v));
        }
    }
    out
}

/// Exact Lie–Poisson bracket evaluated at a rational point.
pub fn lie_poisson_at(g: &StructureConstants, f: &Polynomial, h: &Polynomial, x: &[Rational]) -> Rational {
    lie_poisson(g, f, h).eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_deformed, BasisLabel};
    use crate::params::DeformationParams;
    use crate::rational::int;

    #[test]
    fn calculus() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = x.mul(&x).mul(&y).add(&y.scale(&int(3)));
        assert_eq!(p.derivative(0), x.mul(&y).scale(&int(2)));
        assert_eq!(p.eval(&[int(2), int(5)]), int(35));
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn coordinate_brackets_match_table() {
        let g = build_deformed(&DeformationParams::from_ints(3, [1, 2, 3]));
        let d = g.dim();
        for a in 0..d {
            for b in 0..d {
                let lp = lie_poisson(&g, &Polynomial::var(d, a), &Polynomial::var(d, b));
                let mut expect = Polynomial::zero(d);
                for (c, v) in g.bracket_basis(a, b) {
                    expect.add_term(vec![c as u16], v);
                }
                assert_eq!(lp, expect);
            }
        }
        let x1 = g.idx(BasisLabel::X(1));
        let p1 = g.idx(BasisLabel::P(1));
        let s = lie_poisson(&g, &Polynomial::var(d, x1), &Polynomial::var(d, p1));
        assert_eq!(s.coefficient(&[g.idx(BasisLabel::Iz) as u16]), int(1));
    }
}
