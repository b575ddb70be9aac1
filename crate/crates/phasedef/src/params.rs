use crate::error::{Error, Result};
use crate::rational::{int, parse_rational_list, serde_rational_vec, to_f64, Rational};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

/// The deformation triple `(eps1, eps2, eps3)` for rank `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformationParams {
    pub n: usize,
    #[serde(with = "serde_rational_vec")]
    pub eps: Vec<Rational>,
}

impl DeformationParams {
    pub fn new(n: usize, eps1: Rational, eps2: Rational, eps3: Rational) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("n must be positive".into()));
        }
        Ok(DeformationParams { n, eps: vec![eps1, eps2, eps3] })
    }

    pub fn from_ints(n: usize, e: [i64; 3]) -> Self {
        Self::new(n, int(e[0]), int(e[1]), int(e[2])).expect("valid n")
    }

    pub fn zero(n: usize) -> Self {
        Self::from_ints(n, [0, 0, 0])
    }

    /// Parses `"e1,e2,e3"` with each entry a rational such as `3/5` or `0.6`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let v = parse_rational_list(s)?;
        if v.len() != 3 {
            return Err(Error::Parse(format!("expected three parameters, got {}", v.len())));
        }
        let mut it = v.into_iter();
        Self::new(n, it.next().unwrap(), it.next().unwrap(), it.next().unwrap())
    }

    pub fn e1(&self) -> &Rational {
        &self.eps[0]
    }
    pub fn e2(&self) -> &Rational {
        &self.eps[1]
    }
    pub fn e3(&self) -> &Rational {
        &self.eps[2]
    }

    pub fn is_zero(&self) -> bool {
        self.eps.iter().all(Zero::is_zero)
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [to_f64(&self.eps[0]), to_f64(&self.eps[1]), to_f64(&self.eps[2])]
    }

    pub fn scaled(&self, lambda: &Rational) -> Self {
        DeformationParams { n: self.n, eps: self.eps.iter().map(|e| e * lambda).collect() }
    }

    /// `eps3^2 - eps1 eps2`.
    pub fn discriminant(&self) -> Rational {
        self.e3() * self.e3() - self.e1() * self.e2()
    }

    pub fn on_cone(&self) -> bool {
        self.discriminant().is_zero()
    }

    /// Refuses the low ranks where the classification is not established.
    pub fn require_classifiable(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Parameter(format!(
                "classification needs n >= 3, got n = {}",
                self.n
            )));
        }
        Ok(())
    }
}

impl fmt::Display for DeformationParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} eps=({}, {}, {})", self.n, self.eps[0], self.eps[1], self.eps[2])
    }
}
