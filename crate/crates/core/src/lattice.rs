//! The rank-9 odd unimodular lattice `I_{1,8}` that models second homology
//! of a degree-1 del Pezzo surface.
//!
//! Coordinates are taken in the blow-up basis `(h, e_1, ..., e_8)` with Gram
//! matrix `diag(+1, -1, ..., -1)`. The canonical class is
//! `K = -3h + e_1 + ... + e_8`, so `K.K = 1`.
//!
//! All sublattice operations (span, saturation, orthogonal complement,
//! coordinates and finite quotients) go through [`crate::snf`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::snf::{smith_normal_form, IntMatrix, Smith};

/// Rank of the ambient lattice.
pub const RANK: usize = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("vector {0} is not in the sublattice")]
    NotInSublattice(LatticeVector),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("sublattice is not contained in the ambient sublattice")]
    NotContained,
    #[error("quotient is infinite (rank {sub} inside rank {ambient})")]
    InfiniteQuotient { sub: usize, ambient: usize },
    #[error("invariant factor {0} exceeds 2; quotient is not 2-elementary")]
    FactorTooLarge(i64),
}

/// An element of `H_2(X) = Z^9` in the basis `(h, e_1, ..., e_8)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector(pub [i64; RANK]);

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector([0; RANK]);

    pub fn new(coords: [i64; RANK]) -> Self {
        LatticeVector(coords)
    }

    /// The canonical class `K = (-3; 1, ..., 1)`.
    pub fn canonical() -> Self {
        LatticeVector([-3, 1, 1, 1, 1, 1, 1, 1, 1])
    }

    /// The pullback `h` of a line class.
    pub fn hyperplane() -> Self {
        Self::unit(0)
    }

    /// The exceptional divisor `e_i`, `1 <= i <= 8`.
    pub fn exceptional(i: usize) -> Self {
        assert!((1..RANK).contains(&i), "e_{i} out of range");
        Self::unit(i)
    }

    pub fn unit(i: usize) -> Self {
        let mut c = [0; RANK];
        c[i] = 1;
        LatticeVector(c)
    }

    pub fn coords(&self) -> &[i64; RANK] {
        &self.0
    }

    pub fn from_slice(s: &[i64]) -> Self {
        let mut c = [0; RANK];
        c.copy_from_slice(s);
        LatticeVector(c)
    }

    /// Intersection pairing `a a' - sum b_i b'_i`.
    pub fn dot(&self, other: &LatticeVector) -> i64 {
        let [a, rest @ ..] = &self.0;
        let [a2, rest2 @ ..] = &other.0;
        a * a2 - rest.iter().zip(rest2).map(|(x, y)| x * y).sum::<i64>()
    }

    pub fn norm(&self) -> i64 {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// The vector `J v` with `J` the Gram matrix; `u.dot(v)` equals the
    /// Euclidean product of `u` with `v.dualized()`.
    pub fn dualized(&self) -> LatticeVector {
        let mut c = self.0;
        for x in &mut c[1..] {
            *x = -*x;
        }
        LatticeVector(c)
    }
}

/// Symmetric bilinear form of signature (1, 8).
pub fn inner(u: &LatticeVector, v: &LatticeVector) -> i64 {
    u.dot(v)
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.0[0])?;
        for (i, x) in self.0[1..].iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for LatticeVector {
    type Output = LatticeVector;
    fn add(mut self, rhs: LatticeVector) -> LatticeVector {
        for (x, y) in self.0.iter_mut().zip(rhs.0) {
            *x += y;
        }
        self
    }
}

impl Sub for LatticeVector {
    type Output = LatticeVector;
    fn sub(mut self, rhs: LatticeVector) -> LatticeVector {
        for (x, y) in self.0.iter_mut().zip(rhs.0) {
            *x -= y;
        }
        self
    }
}

impl Neg for LatticeVector {
    type Output = LatticeVector;
    fn neg(mut self) -> LatticeVector {
        for x in &mut self.0 {
            *x = -*x;
        }
        self
    }
}

impl Mul<LatticeVector> for i64 {
    type Output = LatticeVector;
    fn mul(self, mut rhs: LatticeVector) -> LatticeVector {
        for x in &mut rhs.0 {
            *x *= self;
        }
        rhs
    }
}

/// A sublattice of `Z^9` given by a linearly independent basis.
///
/// The Smith decomposition of the basis matrix is cached; it answers
/// membership and coordinate queries.
#[derive(Clone)]
pub struct Sublattice {
    basis: Vec<LatticeVector>,
    smith: Smith,
}

impl fmt::Debug for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sublattice")
            .field("rank", &self.rank())
            .field("basis", &self.basis)
            .finish()
    }
}

fn basis_matrix(vectors: &[LatticeVector]) -> IntMatrix {
    let rows: Vec<[i64; RANK]> = vectors.iter().map(|v| v.0).collect();
    IntMatrix::from_rows(RANK, &rows)
}

impl Sublattice {
    /// Uses `basis` verbatim; fails if it is not linearly independent.
    pub fn from_basis(basis: Vec<LatticeVector>) -> Result<Self, LatticeError> {
        let smith = smith_normal_form(&basis_matrix(&basis));
        if smith.rank() != basis.len() {
            return Err(LatticeError::DependentBasis);
        }
        Ok(Sublattice { basis, smith })
    }

    /// The Z-span of arbitrary (possibly dependent) generators.
    pub fn span(generators: &[LatticeVector]) -> Self {
        let smith = smith_normal_form(&basis_matrix(generators));
        // rowspace(G) = rowspace(D V^{-1})
        let basis = smith
            .invariant_factors
            .iter()
            .enumerate()
            .map(|(i, &d)| d * LatticeVector::from_slice(smith.v_inv.row(i)))
            .collect();
        Self::from_basis(basis).expect("Smith rows are independent")
    }

    pub fn full() -> Self {
        Self::from_basis((0..RANK).map(LatticeVector::unit).collect()).expect("unit basis")
    }

    pub fn zero() -> Self {
        Self::from_basis(Vec::new()).expect("empty basis")
    }

    pub fn basis(&self) -> &[LatticeVector] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Integer coordinates of `x` in this basis, if `x` lies in the sublattice.
    pub fn coordinates(&self, x: &LatticeVector) -> Option<Vec<i64>> {
        let r = self.rank();
        let z = self.smith.v.left_apply(&x.0);
        if z[r..].iter().any(|&t| t != 0) {
            return None;
        }
        let mut w = Vec::with_capacity(r);
        for (zi, &d) in z.iter().zip(&self.smith.invariant_factors) {
            if zi % d != 0 {
                return None;
            }
            w.push(zi / d);
        }
        Some(self.smith.u.left_apply(&w))
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        self.coordinates(x).is_some()
    }

    pub fn contains_lattice(&self, other: &Sublattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn same_lattice(&self, other: &Sublattice) -> bool {
        self.rank() == other.rank() && self.contains_lattice(other) && other.contains_lattice(self)
    }

    pub fn combine(&self, coords: &[i64]) -> LatticeVector {
        assert_eq!(coords.len(), self.rank());
        self.basis
            .iter()
            .zip(coords)
            .fold(LatticeVector::ZERO, |acc, (b, &c)| acc + c * *b)
    }

    pub fn gram(&self) -> IntMatrix {
        let n = self.rank();
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = self.basis[i].dot(&self.basis[j]);
            }
        }
        g
    }

    pub fn discriminant(&self) -> i128 {
        self.gram().determinant()
    }

    /// `[self : sub]`, or `None` when `sub` is not a full-rank sublattice of `self`.
    pub fn index_of(&self, sub: &Sublattice) -> Option<i64> {
        if sub.rank() != self.rank() {
            return None;
        }
        let coords = self.coordinate_matrix(sub).ok()?;
        let s = smith_normal_form(&coords);
        (s.rank() == self.rank()).then(|| s.invariant_factors.iter().product())
    }

    fn coordinate_matrix(&self, sub: &Sublattice) -> Result<IntMatrix, LatticeError> {
        let rows = sub
            .basis
            .iter()
            .map(|b| self.coordinates(b).ok_or(LatticeError::NotContained))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntMatrix::from_rows(self.rank(), &rows))
    }
}

/// `{x | x.s = 0 for all s in S}`; always primitive.
pub fn orthogonal_complement(s: &Sublattice) -> Sublattice {
    if s.rank() == 0 {
        return Sublattice::full();
    }
    let dual: Vec<LatticeVector> = s.basis().iter().map(|b| b.dualized()).collect();
    let smith = smith_normal_form(&basis_matrix(&dual));
    let kernel = (smith.rank()..RANK)
        .map(|j| LatticeVector::from_slice(&smith.v.column(j)))
        .collect();
    Sublattice::from_basis(kernel).expect("kernel columns of a unimodular matrix")
}

/// `(S tensor Q) intersect Z^9`.
pub fn saturate(s: &Sublattice) -> Sublattice {
    let smith = smith_normal_form(&basis_matrix(s.basis()));
    let basis = (0..smith.rank())
        .map(|i| LatticeVector::from_slice(smith.v_inv.row(i)))
        .collect();
    Sublattice::from_basis(basis).expect("rows of a unimodular matrix")
}

/// The F_2-vector space `A / B` for `2A <= B <= A`.
#[derive(Clone, Debug)]
pub struct QuotientF2 {
    ambient: Sublattice,
    // A-coordinates c reduce to (c V)_i mod 2 for i in `two_slots`.
    adapted: IntMatrix,
    adapted_inv: IntMatrix,
    two_slots: Vec<usize>,
}

impl QuotientF2 {
    pub fn dimension(&self) -> usize {
        self.two_slots.len()
    }

    pub fn ambient(&self) -> &Sublattice {
        &self.ambient
    }

    /// Image of `x` in `F_2^dimension`.
    pub fn reduce(&self, x: &LatticeVector) -> Result<Vec<u8>, LatticeError> {
        let c = self
            .ambient
            .coordinates(x)
            .ok_or(LatticeError::NotInSublattice(*x))?;
        let y = self.adapted.left_apply(&c);
        Ok(self
            .two_slots
            .iter()
            .map(|&i| y[i].rem_euclid(2) as u8)
            .collect())
    }

    /// Lattice representatives of the standard basis of the quotient.
    pub fn lifts(&self) -> Vec<LatticeVector> {
        self.two_slots
            .iter()
            .map(|&i| self.ambient.combine(self.adapted_inv.row(i)))
            .collect()
    }

    /// Mod-2 intersection matrix on the quotient, computed on lifts.
    pub fn pairing_matrix(&self) -> Vec<Vec<u8>> {
        let lifts = self.lifts();
        lifts
            .iter()
            .map(|a| lifts.iter().map(|b| a.dot(b).rem_euclid(2) as u8).collect())
            .collect()
    }
}

/// Quotient of `a` by `b`, requiring `2a <= b <= a`.
pub fn quotient_mod2(a: &Sublattice, b: &Sublattice) -> Result<QuotientF2, LatticeError> {
    let coords = a.coordinate_matrix(b)?;
    if b.rank() != a.rank() {
        return Err(LatticeError::InfiniteQuotient {
            sub: b.rank(),
            ambient: a.rank(),
        });
    }
    let smith = smith_normal_form(&coords);
    if smith.rank() != a.rank() {
        return Err(LatticeError::InfiniteQuotient {
            sub: smith.rank(),
            ambient: a.rank(),
        });
    }
    if let Some(&d) = smith.invariant_factors.iter().find(|&&d| d > 2) {
        return Err(LatticeError::FactorTooLarge(d));
    }
    let two_slots = smith
        .invariant_factors
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 2)
        .map(|(i, _)| i)
        .collect();
    Ok(QuotientF2 {
        ambient: a.clone(),
        adapted: smith.v,
        adapted_inv: smith.v_inv,
        two_slots,
    })
}
