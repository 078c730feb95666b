//! Tritangent sections of a sextic on the quadric cone.
//!
//! The double cover is `w^2 = y^3 + p2 y^2 + p4 y + p6` with `p_i` binary
//! forms in `(x0, x1)`. The section `y = 0` is tritangent when `p6 = q3^2`;
//! it is hyperbolic when `p4` is positive at an odd number of the real roots
//! of `q3`, equivalently when `Res(p4, q3) > 0`.

pub mod form;
pub mod poly;

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{orthogonal_complement, LatticeVector, Sublattice};
use crate::pin::{admissible_chis, line_counts, LineCount, PinError};
use crate::qmat;
use crate::real::{bertini_dual, catalog_entry, RealStructure};
use crate::roots::Root;

pub use form::{format_rational, parse_rational, BinaryForm};
pub use poly::{Poly, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TritangentError {
    #[error("expected a form of degree {expected}, got degree {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("the cubic q3 is the zero form")]
    ZeroForm,
    #[error("p4 and q3 share a root (the curve would be singular there)")]
    SharedRoot,
    #[error("q3 has a root at infinity; apply a substitution first")]
    InfiniteRoot,
    #[error("q3 has a repeated root")]
    RepeatedRoot,
    #[error("neither p6 nor -p6 is the square of a cubic form")]
    NotTritangent,
    #[error("degenerate curve: {0}")]
    DegenerateCurve(&'static str),
    #[error("sextic has terms of odd degree in x2")]
    NotSymmetric,
    #[error("sextic passes through the center point [0:0:1]")]
    ThroughCenter,
    #[error("expected {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("unknown arrangement code {0:?}")]
    UnknownArrangement(String),
    #[error("node roots are linearly dependent together with K")]
    DependentNodes,
    #[error(transparent)]
    Pin(#[from] PinError),
}

fn expect_degree(f: &BinaryForm, d: usize) -> Result<(), TritangentError> {
    if f.degree() == d {
        Ok(())
    } else {
        Err(TritangentError::WrongDegree {
            expected: d,
            got: f.degree(),
        })
    }
}

/// Sylvester matrix: `deg g` shifted rows of `f`, then `deg f` shifted rows
/// of `g`, coefficients in descending powers of `x0`.
pub fn sylvester_matrix(f: &BinaryForm, g: &BinaryForm) -> Vec<Vec<Q>> {
    let (m, n) = (f.degree(), g.degree());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (count, src) in [(n, f), (m, g)] {
        for i in 0..count {
            let mut row = vec![Q::zero(); size];
            for (k, c) in src.coeffs().iter().enumerate() {
                row[i + k] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

pub fn resultant(f: &BinaryForm, g: &BinaryForm) -> Q {
    qmat::determinant(&sylvester_matrix(f, g))
}

/// Real projective roots of `q3` counted with multiplicity, and how many of
/// them (with multiplicity) have `p4 > 0`.
pub fn real_root_signs(
    p4: &BinaryForm,
    q3: &BinaryForm,
) -> Result<(usize, usize), TritangentError> {
    expect_degree(p4, 4)?;
    expect_degree(q3, 3)?;
    if q3.is_zero() {
        return Err(TritangentError::ZeroForm);
    }
    if resultant(p4, q3).is_zero() {
        return Err(TritangentError::SharedRoot);
    }
    let q = q3.dehomogenize();
    let p = p4.dehomogenize();
    let mut real = 0;
    let mut positive = 0;
    // Degree drop of the dehomogenization is the multiplicity of [1:0],
    // where p4 takes the value of its x0^4 coefficient.
    let at_infinity = 3 - q.degree().expect("nonzero");
    if at_infinity > 0 {
        real += at_infinity;
        if p4.coeffs()[0].is_positive() {
            positive += at_infinity;
        }
    }
    for (factor, mult) in q.squarefree_decomposition() {
        for root in poly::isolate_roots(&factor) {
            real += mult;
            if poly::sign_at_root(&factor, &root, &p) == Ordering::Greater {
                positive += mult;
            }
        }
    }
    Ok((real, positive))
}

fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Q::new(n, d))
}

/// `q` with `q^2 = p` and positive first nonzero coefficient, if it exists.
pub fn sqrt_form(p: &BinaryForm) -> Option<BinaryForm> {
    let d = p.degree();
    if d % 2 == 1 {
        return None;
    }
    let c = p.coeffs();
    let k0 = c.iter().position(|x| !x.is_zero())?;
    if k0 % 2 == 1 {
        return None;
    }
    // Power-series square root of R(u) = sum c[k0 + j] u^j.
    let r = &c[k0..];
    let s0 = rational_sqrt(&r[0])?;
    let len = d / 2 - k0 / 2 + 1;
    let mut s = vec![s0.clone()];
    let two_s0 = &s0 * Q::from_integer(2.into());
    for j in 1..len {
        let mut acc = r[j].clone();
        for i in 1..j {
            acc -= &s[i] * &s[j - i];
        }
        s.push(acc / &two_s0);
    }
    let mut coeffs = vec![Q::zero(); d / 2 + 1];
    for (j, v) in s.into_iter().enumerate() {
        coeffs[k0 / 2 + j] = v;
    }
    let root = BinaryForm::new(coeffs);
    (root.mul(&root) == *p).then_some(root)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadricSide {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Hyperbolic,
    Elliptic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TritangentVerdict {
    pub side: QuadricSide,
    pub species: Species,
    #[serde(serialize_with = "ser_rational")]
    pub resultant: Q,
    pub positive_real_tangencies: usize,
    pub real_tangencies: usize,
    pub q3: BinaryForm,
}

fn ser_rational<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

pub fn species_by_parity(positive: usize) -> Species {
    if positive % 2 == 1 {
        Species::Hyperbolic
    } else {
        Species::Elliptic
    }
}

pub fn species_by_resultant(res: &Q) -> Species {
    if res.is_positive() {
        Species::Hyperbolic
    } else {
        Species::Elliptic
    }
}

/// Classifies the section `y = 0` of `w^2 = y^3 + p2 y^2 + p4 y + p6`.
///
/// When `-p6` is the square, `y -> -y` moves the section to the other half
/// of the cone; that flips `p2` and `p6` and keeps `p4`.
pub fn classify_tritangent(
    p2: &BinaryForm,
    p4: &BinaryForm,
    p6: &BinaryForm,
) -> Result<TritangentVerdict, TritangentError> {
    expect_degree(p2, 2)?;
    expect_degree(p4, 4)?;
    expect_degree(p6, 6)?;
    if p6.is_zero() {
        return Err(TritangentError::DegenerateCurve("p6 vanishes identically"));
    }
    let (side, q3) = if let Some(q3) = sqrt_form(p6) {
        (QuadricSide::Plus, q3)
    } else if let Some(q3) = sqrt_form(&p6.neg()) {
        (QuadricSide::Minus, q3)
    } else {
        return Err(TritangentError::NotTritangent);
    };
    let res = resultant(p4, &q3);
    if res.is_zero() {
        return Err(TritangentError::DegenerateCurve("p4 and q3 share a root"));
    }
    let (real, positive) = real_root_signs(p4, &q3)?;
    let species = species_by_parity(positive);
    debug_assert_eq!(species, species_by_resultant(&res));
    Ok(TritangentVerdict {
        side,
        species,
        resultant: res,
        positive_real_tangencies: positive,
        real_tangencies: real,
        q3,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramReport {
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: Vec<Vec<Q>>,
    #[serde(serialize_with = "ser_rational")]
    pub determinant: Q,
    #[serde(serialize_with = "ser_rational")]
    pub resultant: Q,
    pub real_roots: usize,
    pub determinant_sign: i8,
    pub resultant_sign: i8,
    pub signs_agree: bool,
}

fn ser_matrix<S: serde::Serializer>(m: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        m.iter()
            .map(|r| r.iter().map(format_rational).collect::<Vec<_>>()),
    )
}

fn sign_of(x: &Q) -> i8 {
    match x.cmp(&Q::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

/// Power sums `s_0..=s_n` of the roots of a monic cubic `t^3 + a1 t^2 + a2 t + a3`.
pub fn power_sums(a: [&Q; 3], n: usize) -> Vec<Q> {
    let [a1, a2, a3] = a;
    let mut s: Vec<Q> = vec![Q::from_integer(3.into())];
    for k in 1..=n {
        let mut v = Q::zero();
        for (i, ai) in [a1, a2, a3].into_iter().enumerate() {
            let i = i + 1;
            if i < k {
                v -= ai * &s[k - i];
            } else if i == k {
                v -= ai * Q::from_integer((k as i64).into());
            }
        }
        s.push(v);
    }
    s
}

/// Moment matrix `M_ij = sum_l p4(c_l) c_l^(i+j)` over the affine roots `c_l`
/// of `q3`, with its determinant compared against the resultant's sign.
pub fn gram_matrix(p4: &BinaryForm, q3: &BinaryForm) -> Result<GramReport, TritangentError> {
    expect_degree(p4, 4)?;
    expect_degree(q3, 3)?;
    if q3.coeffs()[0].is_zero() {
        return Err(TritangentError::InfiniteRoot);
    }
    let res = resultant(p4, q3);
    if res.is_zero() {
        return Err(TritangentError::SharedRoot);
    }
    let qq = q3.dehomogenize();
    if Poly::gcd(&qq, &qq.derivative()).degree() != Some(0) {
        return Err(TritangentError::RepeatedRoot);
    }
    let monic = qq.monic();
    let c = monic.coeffs();
    let s = power_sums([&c[2], &c[1], &c[0]], 8);
    let p = p4.dehomogenize();
    let matrix: Vec<Vec<Q>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    p.coeffs()
                        .iter()
                        .enumerate()
                        .map(|(k, pk)| pk * &s[k + i + j])
                        .sum()
                })
                .collect()
        })
        .collect();
    let det = qmat::determinant(&matrix);
    let real_roots = poly::isolate_roots(&qq).len();
    let (ds, rs) = (sign_of(&det), sign_of(&res));
    Ok(GramReport {
        matrix,
        determinant: det,
        resultant: res,
        real_roots,
        determinant_sign: ds,
        resultant_sign: rs,
        signs_agree: ds == rs,
    })
}

/// `(p2, p4, p6)` of a ternary sextic even in `x2`.
///
/// The 28 coefficients are grouped by the power `k = 0..=6` of `x2`; group
/// `k` is a binary form of degree `6 - k` in descending powers of `x0`.
pub fn symmetric_to_cone(
    coeffs: &[Q],
) -> Result<(BinaryForm, BinaryForm, BinaryForm), TritangentError> {
    if coeffs.len() != 28 {
        return Err(TritangentError::WrongLength {
            expected: 28,
            got: coeffs.len(),
        });
    }
    let mut groups = Vec::new();
    let mut at = 0;
    for k in 0..=6 {
        let len = 7 - k;
        groups.push(BinaryForm::new(coeffs[at..at + len].to_vec()));
        at += len;
    }
    if [1, 3, 5].iter().any(|&k| !groups[k].is_zero()) {
        return Err(TritangentError::NotSymmetric);
    }
    let top = groups[6].coeffs()[0].clone();
    if top.is_zero() {
        return Err(TritangentError::ThroughCenter);
    }
    let inv = Q::one() / top;
    Ok((
        groups[4].scale(&inv),
        groups[2].scale(&inv),
        groups[0].scale(&inv),
    ))
}

/// `2 rank` of the orthogonal complement of `K` and the node roots.
pub fn nodal_signed_count(nodes: &[Root]) -> Result<i64, TritangentError> {
    let mut basis = vec![LatticeVector::canonical()];
    basis.extend(nodes.iter().map(|r| *r.vector()));
    let span = Sublattice::from_basis(basis).map_err(|_| TritangentError::DependentNodes)?;
    Ok(2 * orthogonal_complement(&span).rank() as i64)
}

/// Signed count of symmetric tritangent conics to a `k`-nodal affine cubic:
/// half the nodal line count, less the four contributed by the lines through
/// the origin.
pub fn cubic_conic_count(nodes: &[Root]) -> Result<i64, TritangentError> {
    Ok(nodal_signed_count(nodes)? / 2 - 4)
}

/// Arrangement of the real sextic on the cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Arrangement {
    /// `<a|0>`: `a` ovals on one side of the embracing component.
    Ovals(u8),
    /// `<1|1>`.
    Split,
    /// `<|||>`: three embracing components.
    Parallel,
}

impl Arrangement {
    pub const ALL: [Arrangement; 7] = [
        Arrangement::Ovals(4),
        Arrangement::Ovals(3),
        Arrangement::Ovals(2),
        Arrangement::Ovals(1),
        Arrangement::Ovals(0),
        Arrangement::Parallel,
        Arrangement::Split,
    ];

    pub fn parse(s: &str) -> Result<Self, TritangentError> {
        let t: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && !matches!(c, '<' | '>' | '\u{27e8}' | '\u{27e9}'))
            .collect();
        match t.as_str() {
            "|||" => Ok(Arrangement::Parallel),
            "1|1" => Ok(Arrangement::Split),
            _ => match t.split_once('|') {
                Some((a, "0")) => match a.parse::<u8>() {
                    Ok(a) if a <= 4 => Ok(Arrangement::Ovals(a)),
                    _ => Err(TritangentError::UnknownArrangement(s.to_string())),
                },
                _ => Err(TritangentError::UnknownArrangement(s.to_string())),
            },
        }
    }

    pub fn code(&self) -> String {
        match self {
            Arrangement::Ovals(a) => format!("<{a}|0>"),
            Arrangement::Split => "<1|1>".into(),
            Arrangement::Parallel => "<|||>".into(),
        }
    }

    /// The class whose real locus has the handles; its Bertini dual is the
    /// real structure on the other half of the cone.
    pub fn class_label(&self) -> &'static str {
        match self {
            Arrangement::Ovals(4) => "RP2+4T2",
            Arrangement::Ovals(3) => "RP2+3T2",
            Arrangement::Ovals(2) => "RP2+2T2",
            Arrangement::Ovals(1) => "RP2+1T2",
            Arrangement::Ovals(_) => "RP2",
            Arrangement::Parallel => "RP2+Klein",
            Arrangement::Split => "RP2+T2+S2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TritangentRow {
    pub arrangement: String,
    pub class: &'static str,
    pub plus: LineCount,
    pub minus: LineCount,
    pub total: usize,
    pub hyperbolic: usize,
    pub elliptic: usize,
}

fn counts_for(sigma: &RealStructure) -> Result<LineCount, TritangentError> {
    let chis = admissible_chis(sigma)?;
    let first = chis.first().ok_or(PinError::NotAdmissible)?;
    Ok(line_counts(sigma, first)?)
}

/// Real tritangents: each projects two real lines from one of the two Bertini
/// dual surfaces, so the counts are half the line counts summed over the pair.
pub fn tritangent_table(arrangement: Arrangement) -> Result<TritangentRow, TritangentError> {
    let label = arrangement.class_label();
    let sigma = &catalog_entry(label).expect("catalog label").structure;
    let plus = counts_for(sigma)?;
    let minus = counts_for(&bertini_dual(sigma))?;
    let h = plus.hyperbolic + minus.hyperbolic;
    let e = plus.elliptic + minus.elliptic;
    debug_assert!(h % 2 == 0 && e % 2 == 0);
    Ok(TritangentRow {
        arrangement: arrangement.code(),
        class: label,
        plus,
        minus,
        total: (h + e) / 2,
        hyperbolic: h / 2,
        elliptic: e / 2,
    })
}
