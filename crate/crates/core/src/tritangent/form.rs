//! Binary forms with rational coefficients.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::poly::{q, Poly, Q};

/// Parses `"n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let bad = || format!("invalid rational {s:?}");
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// `sum_k c_k x0^(d-k) x1^k`; coefficients in descending powers of `x0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<Q>,
}

impl Serialize for BinaryForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(format_rational))
    }
}

impl BinaryForm {
    /// A form of degree `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Q>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a binary form needs at least one coefficient"
        );
        BinaryForm { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![Q::zero(); degree + 1])
    }

    /// `x0^i x1^j`, i.e. the linear forms `x0` = `(1, 0)` and `x1` = `(0, 1)`.
    pub fn monomial(i: usize, j: usize) -> Self {
        let mut c = vec![Q::zero(); i + j + 1];
        c[j] = Q::one();
        Self::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, x0: &Q, x1: &Q) -> Q {
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * pow(x0, d - k) * pow(x1, k))
            .sum()
    }

    /// `t -> f(t, 1)`; roots are the affine coordinates `x0 / x1`.
    pub fn dehomogenize(&self) -> Poly {
        Poly::new(self.coeffs.iter().rev().cloned().collect())
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(
            self.degree(),
            o.degree(),
            "adding forms of different degree"
        );
        Self::new(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut c = vec![Q::zero(); self.degree() + o.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::from_ints(&[1]), |acc, _| acc.mul(self))
    }

    /// `f(a x0 + b x1, c x0 + d x1)`.
    pub fn substitute(&self, m: &[[Q; 2]; 2]) -> Self {
        let l0 = Self::new(vec![m[0][0].clone(), m[0][1].clone()]);
        let l1 = Self::new(vec![m[1][0].clone(), m[1][1].clone()]);
        let d = self.degree();
        let mut out = Self::zero(d);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&l0.pow(d - k).mul(&l1.pow(k)).scale(c));
        }
        out
    }

    /// First nonzero coefficient, in descending powers of `x0`.
    pub fn leading_nonzero(&self) -> Option<&Q> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    pub fn is_positive_normalized(&self) -> bool {
        self.leading_nonzero().is_some_and(Signed::is_positive)
    }
}

fn pow(x: &Q, n: usize) -> Q {
    (0..n).fold(Q::one(), |acc, _| acc * x)
}

impl FromStr for BinaryForm {
    type Err = String;

    /// Comma-separated rationals in descending powers of `x0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err("empty coefficient list".into());
        }
        let coeffs = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(coeffs))
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_string()
                } else {
                    c.to_string()
                }
            })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let f: BinaryForm = "1, -2/4, 0".parse().unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.coeffs()[1], Q::new((-1).into(), 2.into()));
        assert_eq!(f.to_string(), "1,-1/2,0");
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"["1/1","-1/2","0/1"]"#
        );
        assert!("1,x".parse::<BinaryForm>().is_err());
        assert!("1/0".parse::<BinaryForm>().is_err());
        assert!("".parse::<BinaryForm>().is_err());
    }

    #[test]
    fn evaluation_and_substitution() {
        // x0^2 - x1^2
        let f = BinaryForm::from_ints(&[1, 0, -1]);
        assert_eq!(f.eval(&q(3), &q(2)), q(5));
        assert_eq!(f.dehomogenize(), Poly::from_ints(&[-1, 0, 1]));
        // swap variables
        let swap = [[q(0), q(1)], [q(1), q(0)]];
        assert_eq!(f.substitute(&swap), BinaryForm::from_ints(&[-1, 0, 1]));
        let prod = BinaryForm::from_ints(&[1, 1]).mul(&BinaryForm::from_ints(&[1, -1]));
        assert_eq!(prod, f);
        assert_eq!(
            BinaryForm::monomial(1, 2),
            BinaryForm::from_ints(&[0, 0, 1, 0])
        );
    }
}
