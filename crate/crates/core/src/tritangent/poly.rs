//! Univariate polynomials over Q with exact real-root isolation.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Coefficients in ascending powers, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    c: Vec<Q>,
}

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::new(vec![Q::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.c.iter().rev().fold(Q::zero(), |acc, a| acc * x + a)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * q(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Q) -> Self {
        Poly::new(self.c.iter().map(|a| a * s).collect())
    }

    pub fn add(&self, o: &Poly) -> Self {
        let n = self.c.len().max(o.c.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.c.get(i).cloned().unwrap_or_else(Q::zero)
                        + o.c.get(i).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &Poly) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn mul(&self, o: &Poly) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut r = self.c.clone();
        let mut quo = vec![Q::zero(); self.c.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (i, b) in d.c.iter().enumerate() {
                r[k + i] -= &f * b;
            }
            quo[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Poly::new(quo), Poly::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&(Q::one() / self.leading()))
    }

    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.div_rem(&y).1;
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Square-free factorization `p = c * prod f_i^i` (Yun); returns the
    /// non-constant `(f_i, i)`.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let dp = self.derivative();
        let a0 = Poly::gcd(self, &dp);
        let mut b = self.div_rem(&a0).0;
        let c = dp.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = Poly::gcd(&b, &d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            let c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn sturm_sequence(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            seq.push(r.scale(&-Q::one()));
        }
        seq.pop();
        seq
    }

    /// Strict upper bound on the absolute value of every real root.
    pub fn root_bound(&self) -> Q {
        let lead = self.leading().abs();
        let m = self.c[..self.c.len() - 1]
            .iter()
            .map(|a| a.abs() / &lead)
            .fold(Q::zero(), |acc, x| if x > acc { x } else { acc });
        m + Q::one()
    }
}

fn sign(x: &Q) -> Ordering {
    x.cmp(&Q::zero())
}

pub fn sign_changes(seq: &[Poly], x: &Q) -> usize {
    let signs: Vec<Ordering> = seq
        .iter()
        .map(|p| sign(&p.eval(x)))
        .filter(|s| *s != Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots in `(a, b]`, for `a` not a root.
pub fn count_roots(seq: &[Poly], a: &Q, b: &Q) -> usize {
    sign_changes(seq, a) - sign_changes(seq, b)
}

/// An isolated real root of a square-free polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isolated {
    Exact(Q),
    /// Open interval with one simple root and non-root endpoints.
    Between(Q, Q),
}

/// Real roots of a square-free polynomial, in increasing order.
pub fn isolate_roots(p: &Poly) -> Vec<Isolated> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let seq = p.sturm_sequence();
    let b = p.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let hi_root = p.eval(&hi).is_zero();
        let inner = count_roots(&seq, &lo, &hi) - usize::from(hi_root);
        if inner == 0 {
            continue;
        }
        if inner == 1 && !hi_root && !p.eval(&lo).is_zero() {
            out.push(Isolated::Between(lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / q(2);
        if p.eval(&mid).is_zero() {
            out.push(Isolated::Exact(mid.clone()));
        }
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|x, y| lower(x).cmp(lower(y)));
    out
}

fn lower(r: &Isolated) -> &Q {
    match r {
        Isolated::Exact(x) | Isolated::Between(x, _) => x,
    }
}

/// Sign of `g` at the root isolated by `r` of the square-free `f`, assuming
/// `g` does not vanish there.
pub fn sign_at_root(f: &Poly, r: &Isolated, g: &Poly) -> Ordering {
    let (mut lo, mut hi) = match r {
        Isolated::Exact(x) => return sign(&g.eval(x)),
        Isolated::Between(a, b) => (a.clone(), b.clone()),
    };
    let gs = if g.is_zero() {
        Vec::new()
    } else {
        g.sturm_sequence()
    };
    loop {
        let g_lo = g.eval(&lo);
        let g_hi = g.eval(&hi);
        if !g_lo.is_zero() && !g_hi.is_zero() && count_roots(&gs, &lo, &hi) == 0 {
            return sign(&g_hi);
        }
        let mid = (&lo + &hi) / q(2);
        let f_mid = f.eval(&mid);
        if f_mid.is_zero() {
            return sign(&g.eval(&mid));
        }
        if sign(&f.eval(&lo)) != sign(&f_mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}
