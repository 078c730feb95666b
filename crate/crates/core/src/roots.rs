//! Roots and exceptional classes of the degree-1 del Pezzo lattice.
//!
//! A root is a vector `e` with `e.K = 0`, `e.e = -2`; an exceptional class is
//! a vector `v` with `v.v = v.K = -1`. There are 240 of each and the affine
//! map `v -> -K - v` exchanges them.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::dynkin::{classify_cartan, DynkinError, DynkinType};
use crate::lattice::{LatticeVector, Sublattice};
use crate::snf::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("{0} is not a root (needs v.K = 0 and v.v = -2)")]
    NotARoot(LatticeVector),
    #[error("{0} is not an exceptional class (needs v.v = v.K = -1)")]
    NotExceptional(LatticeVector),
    #[error("root set is not closed under negation: {0} present without its negative")]
    NotSymmetric(LatticeVector),
    #[error(
        "root set is not a closed subsystem: {0} is not a signed combination of the simple roots"
    )]
    NotClosed(LatticeVector),
    #[error("positivity functional vanishes on {0}")]
    DegenerateFunctional(LatticeVector),
    #[error("invalid simple system: {0}")]
    InvalidSimpleSystem(String),
    #[error(transparent)]
    Dynkin(#[from] DynkinError),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Root(LatticeVector);

impl Root {
    pub fn new(v: LatticeVector) -> Result<Self, RootError> {
        if v.dot(&LatticeVector::canonical()) == 0 && v.norm() == -2 {
            Ok(Root(v))
        } else {
            Err(RootError::NotARoot(v))
        }
    }

    pub fn vector(&self) -> &LatticeVector {
        &self.0
    }

    pub fn dot(&self, other: &Root) -> i64 {
        self.0.dot(&other.0)
    }

    /// Reflection `x -> x + (x.e) e` through the hyperplane orthogonal to this root.
    pub fn reflect(&self, x: &LatticeVector) -> LatticeVector {
        *x + x.dot(&self.0) * self.0
    }
}

impl std::ops::Neg for Root {
    type Output = Root;
    fn neg(self) -> Root {
        Root(-self.0)
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Root{}", self.0)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ExceptionalClass(LatticeVector);

impl ExceptionalClass {
    pub fn new(v: LatticeVector) -> Result<Self, RootError> {
        if v.dot(&LatticeVector::canonical()) == -1 && v.norm() == -1 {
            Ok(ExceptionalClass(v))
        } else {
            Err(RootError::NotExceptional(v))
        }
    }

    pub fn vector(&self) -> &LatticeVector {
        &self.0
    }
}

impl fmt::Debug for ExceptionalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Exc{}", self.0)
    }
}

/// All `b in Z^n` with `sum b = sum` and `sum b^2 = squares`.
fn integer_points(n: usize, sum: i64, squares: i64) -> Vec<Vec<i64>> {
    fn go(n: usize, sum: i64, squares: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if squares < 0 {
            return;
        }
        if n == 0 {
            if sum == 0 && squares == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        // Cauchy-Schwarz: sum^2 <= n * squares on the remaining slots.
        if sum * sum > n as i64 * squares {
            return;
        }
        let bound = (squares as f64).sqrt() as i64 + 1;
        for b in -bound..=bound {
            if b * b > squares {
                continue;
            }
            prefix.push(b);
            go(n - 1, sum - b, squares - b * b, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, sum, squares, &mut Vec::with_capacity(n), &mut out);
    out
}

fn vectors_with(
    a_range: std::ops::RangeInclusive<i64>,
    kdot: i64,
    norm: i64,
) -> Vec<LatticeVector> {
    // v.K = -3a - sum b, v.v = a^2 - sum b^2
    let mut out = Vec::new();
    for a in a_range {
        for b in integer_points(8, -3 * a - kdot, a * a - norm) {
            let mut c = [0; 9];
            c[0] = a;
            c[1..].copy_from_slice(&b);
            out.push(LatticeVector(c));
        }
    }
    out.sort();
    out
}

/// The 240 roots in lexicographic order.
///
/// `sum b_i = -3a` together with `sum b_i^2 = a^2 + 2` forces `|a| <= 3` by
/// Cauchy-Schwarz, so the search range is exhaustive.
pub fn enumerate_roots() -> &'static [Root] {
    static ROOTS: OnceLock<Vec<Root>> = OnceLock::new();
    ROOTS.get_or_init(|| {
        vectors_with(-3..=3, 0, -2)
            .into_iter()
            .map(|v| Root::new(v).expect("search yields roots"))
            .collect()
    })
}

/// The 240 exceptional classes in lexicographic order.
///
/// Here Cauchy-Schwarz gives `-1 <= a <= 7`; the search runs over a wider
/// window and lets the pruning discard the rest.
pub fn enumerate_exceptional() -> &'static [ExceptionalClass] {
    static CLASSES: OnceLock<Vec<ExceptionalClass>> = OnceLock::new();
    CLASSES.get_or_init(|| {
        vectors_with(-10..=10, -1, -1)
            .into_iter()
            .map(|v| ExceptionalClass::new(v).expect("search yields exceptional classes"))
            .collect()
    })
}

pub fn phi(v: &ExceptionalClass) -> Root {
    Root(-LatticeVector::canonical() - v.0)
}

pub fn phi_inverse(e: &Root) -> ExceptionalClass {
    ExceptionalClass(-LatticeVector::canonical() - e.0)
}

/// Linear functional fixing which roots count as positive: coordinates are
/// weighted by `100^8, 100^7, ..., 1`, i.e. lexicographic sign for vectors
/// with small entries.
pub fn positivity(v: &LatticeVector) -> i128 {
    v.0.iter().fold(0i128, |acc, &x| acc * 100 + x as i128)
}

/// Roots among the 240 that lie in `lattice`.
pub fn roots_in(lattice: &Sublattice) -> Vec<Root> {
    enumerate_roots()
        .iter()
        .copied()
        .filter(|r| lattice.contains(r.vector()))
        .collect()
}

/// The blow-up basis of simple roots: `h - e1 - e2 - e3` and `e_i - e_{i+1}`.
pub fn standard_e8_basis() -> Vec<Root> {
    let mut out = vec![Root::new(LatticeVector([1, -1, -1, -1, 0, 0, 0, 0, 0])).unwrap()];
    for i in 1..8 {
        out.push(
            Root::new(LatticeVector::exceptional(i) - LatticeVector::exceptional(i + 1)).unwrap(),
        );
    }
    out
}

/// A Coxeter basis together with its Cartan matrix `C_ij = -(r_i . r_j)`, `C_ii = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleSystem {
    roots: Vec<Root>,
    cartan: IntMatrix,
}

impl Serialize for SimpleSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SimpleSystem", 2)?;
        st.serialize_field("type", &self.dynkin_type().ok())?;
        st.serialize_field("roots", &self.roots)?;
        st.end()
    }
}

impl SimpleSystem {
    /// Validates that `roots` are independent with pairwise products in `{0, 1}`.
    pub fn from_roots(roots: Vec<Root>) -> Result<Self, RootError> {
        let n = roots.len();
        let mut cartan = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let p = roots[i].dot(&roots[j]);
                if i != j && !(p == 0 || p == 1) {
                    return Err(RootError::InvalidSimpleSystem(format!(
                        "{} . {} = {p}",
                        roots[i], roots[j]
                    )));
                }
                cartan[(i, j)] = -p;
            }
        }
        let vectors: Vec<LatticeVector> = roots.iter().map(|r| *r.vector()).collect();
        Sublattice::from_basis(vectors)
            .map_err(|_| RootError::InvalidSimpleSystem("roots are linearly dependent".into()))?;
        Ok(SimpleSystem { roots, cartan })
    }

    pub fn empty() -> Self {
        SimpleSystem {
            roots: Vec::new(),
            cartan: IntMatrix::zeros(0, 0),
        }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.roots.len()
    }

    pub fn lattice(&self) -> Sublattice {
        Sublattice::from_basis(self.roots.iter().map(|r| *r.vector()).collect())
            .expect("validated as independent")
    }

    pub fn dynkin_type(&self) -> Result<DynkinType, DynkinError> {
        classify_cartan(&self.cartan)
    }
}

/// Simple roots of a closed, negation-symmetric root set with respect to
/// [`positivity`]: the positive roots that are not a sum of two positive roots.
pub fn simple_system(roots: &[Root]) -> Result<SimpleSystem, RootError> {
    let set: HashSet<LatticeVector> = roots.iter().map(|r| *r.vector()).collect();
    for r in roots {
        if !set.contains(&-*r.vector()) {
            return Err(RootError::NotSymmetric(*r.vector()));
        }
    }
    let mut positive = Vec::new();
    for r in roots {
        match positivity(r.vector()) {
            0 => return Err(RootError::DegenerateFunctional(*r.vector())),
            p if p > 0 => positive.push(*r),
            _ => {}
        }
    }
    let positive_set: HashSet<LatticeVector> = positive.iter().map(|r| *r.vector()).collect();
    let mut simple: Vec<Root> = positive
        .iter()
        .copied()
        .filter(|p| {
            !positive
                .iter()
                .any(|q| q != p && positive_set.contains(&(*p.vector() - *q.vector())))
        })
        .collect();
    simple.sort();
    simple.dedup();
    let system = SimpleSystem::from_roots(simple)?;

    let lattice = system.lattice();
    for r in roots {
        let c = lattice
            .coordinates(r.vector())
            .ok_or(RootError::NotClosed(*r.vector()))?;
        if !(c.iter().all(|&x| x >= 0) || c.iter().all(|&x| x <= 0)) {
            return Err(RootError::NotClosed(*r.vector()));
        }
    }
    for p in positive_roots(&system) {
        if !positive_set.contains(p.root.vector()) {
            return Err(RootError::NotClosed(*p.root.vector()));
        }
    }
    Ok(system)
}

pub fn dynkin_type(s: &SimpleSystem) -> Result<DynkinType, DynkinError> {
    s.dynkin_type()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositiveRoot {
    pub root: Root,
    /// Coefficients in the simple roots, in the order of [`SimpleSystem::roots`].
    pub coefficients: Vec<i64>,
    pub height: i64,
}

/// Positive roots of the system generated by `s`, sorted by height then
/// lexicographically.
///
/// Built upward from the simple roots: in a simply-laced system `b + a_i` is a
/// root exactly when `b . a_i = 1` in this lattice's sign convention.
pub fn positive_roots(s: &SimpleSystem) -> Vec<PositiveRoot> {
    let n = s.rank();
    let mut all: Vec<PositiveRoot> = Vec::new();
    let mut index: HashMap<LatticeVector, usize> = HashMap::new();
    let mut layer: Vec<usize> = Vec::new();
    for (i, r) in s.roots().iter().enumerate() {
        let mut c = vec![0; n];
        c[i] = 1;
        index.insert(*r.vector(), all.len());
        layer.push(all.len());
        all.push(PositiveRoot {
            root: *r,
            coefficients: c,
            height: 1,
        });
    }
    while !layer.is_empty() {
        let mut next = Vec::new();
        for &b in &layer {
            for (i, a) in s.roots().iter().enumerate() {
                if all[b].root.dot(a) != 1 {
                    continue;
                }
                let v = *all[b].root.vector() + *a.vector();
                if index.contains_key(&v) {
                    continue;
                }
                let mut c = all[b].coefficients.clone();
                c[i] += 1;
                index.insert(v, all.len());
                next.push(all.len());
                all.push(PositiveRoot {
                    root: Root::new(v).expect("sum of roots with product 1 is a root"),
                    coefficients: c,
                    height: all[b].height + 1,
                });
            }
        }
        layer = next;
    }
    all.sort_by(|x, y| x.height.cmp(&y.height).then(x.root.cmp(&y.root)));
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn counts_and_membership() {
        let roots = enumerate_roots();
        assert_eq!(roots.len(), 240);
        let set: HashSet<_> = roots.iter().map(|r| *r.vector()).collect();
        assert!(set.contains(&LatticeVector([0, 1, -1, 0, 0, 0, 0, 0, 0])));
        assert!(roots.iter().all(|r| set.contains(&-*r.vector())));

        let exc = enumerate_exceptional();
        assert_eq!(exc.len(), 240);
        assert!(exc
            .iter()
            .any(|v| *v.vector() == LatticeVector::exceptional(1)));
        assert!(!exc
            .iter()
            .any(|v| *v.vector() == LatticeVector::canonical()));
    }

    #[test]
    fn wide_search_finds_no_extra_roots() {
        // Same equations over a much larger window.
        assert_eq!(vectors_with(-8..=8, 0, -2).len(), 240);
    }

    #[test]
    fn phi_examples() {
        let e1 = ExceptionalClass::new(LatticeVector::exceptional(1)).unwrap();
        let r = phi(&e1);
        assert_eq!(
            *r.vector(),
            LatticeVector([3, -2, -1, -1, -1, -1, -1, -1, -1])
        );
        assert_eq!(phi_inverse(&r), e1);
        let image: BTreeSet<Root> = enumerate_exceptional().iter().map(phi).collect();
        let all: BTreeSet<Root> = enumerate_roots().iter().copied().collect();
        assert_eq!(image, all);
        for e in enumerate_roots() {
            let v = phi_inverse(e);
            assert_eq!(v.vector().norm(), -1);
            assert_eq!(v.vector().dot(&LatticeVector::canonical()), -1);
            assert_eq!(phi(&v), *e);
        }
    }

    #[test]
    fn functional_never_vanishes_on_roots() {
        assert!(enumerate_roots()
            .iter()
            .all(|r| positivity(r.vector()) != 0));
    }

    #[test]
    fn full_system_is_standard_e8() {
        let s = simple_system(enumerate_roots()).unwrap();
        assert_eq!(s.rank(), 8);
        assert_eq!(dynkin_type(&s).unwrap().to_string(), "E8");
        let mut expected = standard_e8_basis();
        expected.sort();
        assert_eq!(s.roots(), expected.as_slice());
        let pos = positive_roots(&s);
        assert_eq!(pos.len(), 120);
        assert_eq!(pos.last().unwrap().height, 29);
        assert_eq!(pos.iter().filter(|p| p.height == 29).count(), 1);
    }

    #[test]
    fn small_systems() {
        let r = Root::new(LatticeVector([0, 1, -1, 0, 0, 0, 0, 0, 0])).unwrap();
        let s = simple_system(&[r, -r]).unwrap();
        assert_eq!(s.roots(), &[r]);
        assert_eq!(dynkin_type(&s).unwrap().to_string(), "A1");
        let pos = positive_roots(&s);
        assert_eq!(pos.len(), 1);
        assert_eq!(pos[0].height, 1);

        let empty = simple_system(&[]).unwrap();
        assert_eq!(empty.rank(), 0);
        assert_eq!(dynkin_type(&empty).unwrap().to_string(), "0");

        assert!(matches!(
            simple_system(&[r]),
            Err(RootError::NotSymmetric(_))
        ));
    }

    #[test]
    fn four_orthogonal_and_d4() {
        let b = standard_e8_basis();
        // alpha0, alpha2, alpha4 are the legs around alpha3.
        let quad = SimpleSystem::from_roots(vec![b[0], b[1], b[4], b[6]]).unwrap();
        assert_eq!(dynkin_type(&quad).unwrap().to_string(), "4A1");
        let d4 = SimpleSystem::from_roots(vec![b[0], b[2], b[3], b[4]]).unwrap();
        assert_eq!(dynkin_type(&d4).unwrap().to_string(), "D4");
        let pos = positive_roots(&d4);
        assert_eq!(pos.len(), 12);
        let top = pos.last().unwrap();
        assert_eq!(top.height, 5);
        assert_eq!(top.coefficients, vec![1, 1, 2, 1]);
    }

    #[test]
    fn non_closed_input_rejected() {
        // {+-a, +-b} with a.b = 1 misses a+b.
        let b = standard_e8_basis();
        let set = [b[1], -b[1], b[2], -b[2]];
        assert!(matches!(
            simple_system(&set),
            Err(RootError::NotClosed(_)) | Err(RootError::InvalidSimpleSystem(_))
        ));
    }

    #[test]
    fn positive_counts_match_type() {
        let b = standard_e8_basis();
        for (subset, expect) in [
            (vec![0usize, 1, 2, 3, 4, 5, 6], "E7"),
            (vec![0, 2, 3, 4, 5, 6], "D6"),
            (vec![0, 2, 3, 4, 6], "D4+A1"),
        ] {
            let s = SimpleSystem::from_roots(subset.iter().map(|&i| b[i]).collect()).unwrap();
            let t = dynkin_type(&s).unwrap();
            assert_eq!(t.to_string(), expect);
            assert_eq!(positive_roots(&s).len() * 2, t.root_count());
        }
    }
}
