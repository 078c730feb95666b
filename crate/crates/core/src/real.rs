//! Real structures as lattice involutions, and the catalog of the eleven
//! real deformation classes.

use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::dynkin::DynkinType;
use crate::lattice::{orthogonal_complement, saturate, LatticeVector, Sublattice, RANK};
use crate::qmat;
use crate::roots::{
    enumerate_exceptional, enumerate_roots, roots_in, simple_system, standard_e8_basis,
    ExceptionalClass, Root, RootError, SimpleSystem,
};
use crate::snf::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealStructureError {
    #[error("reflection through the span does not preserve the integer lattice")]
    NonIntegral,
    #[error("generators span a {spanned} root system but their saturation carries {saturated}")]
    SaturationMismatch { spanned: String, saturated: String },
    #[error("generators are not orthogonal to K or are linearly dependent")]
    BadGenerators,
    #[error("matrix is not an involutive isometry reversing K: {0}")]
    NotAnInvolution(&'static str),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// An involutive isometry `sigma` of the lattice with `sigma(K) = -K`,
/// stored as a matrix acting on coordinate columns.
#[derive(Clone, PartialEq, Eq)]
pub struct RealStructure {
    matrix: IntMatrix,
    label: Option<&'static str>,
}

impl fmt::Debug for RealStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealStructure")
            .field("label", &self.label)
            .field("matrix", &self.matrix)
            .finish()
    }
}

fn form_matrix() -> IntMatrix {
    let mut j = IntMatrix::identity(RANK);
    for i in 1..RANK {
        j[(i, i)] = -1;
    }
    j
}

impl RealStructure {
    pub fn from_matrix(matrix: IntMatrix) -> Result<Self, RealStructureError> {
        if matrix.rows() != RANK || matrix.cols() != RANK {
            return Err(RealStructureError::NotAnInvolution("wrong shape"));
        }
        if matrix.mul(&matrix) != IntMatrix::identity(RANK) {
            return Err(RealStructureError::NotAnInvolution(
                "square is not the identity",
            ));
        }
        let j = form_matrix();
        if matrix.transpose().mul(&j).mul(&matrix) != j {
            return Err(RealStructureError::NotAnInvolution("form not preserved"));
        }
        let s = RealStructure {
            matrix,
            label: None,
        };
        if s.apply(&LatticeVector::canonical()) != -LatticeVector::canonical() {
            return Err(RealStructureError::NotAnInvolution("K is not reversed"));
        }
        Ok(s)
    }

    pub fn with_label(mut self, label: &'static str) -> Self {
        self.label = Some(label);
        self
    }

    pub fn label(&self) -> Option<&'static str> {
        self.label
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &LatticeVector) -> LatticeVector {
        LatticeVector::from_slice(&self.matrix.apply(&x.0))
    }

    pub fn is_anti_invariant(&self, x: &LatticeVector) -> bool {
        self.apply(x) == -*x
    }

    /// `ker(1 + sigma)` as a primitive sublattice.
    pub fn minus_lattice(&self) -> Sublattice {
        eigenlattice(&self.matrix, -1)
    }

    /// `ker(1 - sigma)` as a primitive sublattice.
    pub fn plus_lattice(&self) -> Sublattice {
        eigenlattice(&self.matrix, 1)
    }

    /// `(1 - sigma) H_2`.
    pub fn coinvariant_image(&self) -> Sublattice {
        let gens: Vec<LatticeVector> = (0..RANK)
            .map(|i| {
                let u = LatticeVector::unit(i);
                u - self.apply(&u)
            })
            .collect();
        Sublattice::span(&gens)
    }
}

fn eigenlattice(m: &IntMatrix, eigenvalue: i64) -> Sublattice {
    let mut a = m.clone();
    for i in 0..RANK {
        a[(i, i)] -= eigenvalue;
    }
    let smith = crate::snf::smith_normal_form(&a.transpose());
    // a x = 0 iff x^T lies in the left kernel of a^T.
    let rank = smith.rank();
    let basis: Vec<LatticeVector> = (rank..RANK)
        .map(|i| LatticeVector::from_slice(smith.u.row(i)))
        .collect();
    let lattice = Sublattice::from_basis(basis).expect("unimodular rows");
    debug_assert!(lattice
        .basis()
        .iter()
        .all(|b| a.apply(&b.0).iter().all(|&t| t == 0)));
    saturate(&lattice)
}

/// Involution acting as `-1` on `K` and on the span of `generators`, and as
/// `+1` on the orthogonal complement of both.
pub fn involution_from_subsystem(generators: &[Root]) -> Result<RealStructure, RealStructureError> {
    let k = LatticeVector::canonical();
    if generators.iter().any(|g| g.vector().dot(&k) != 0) {
        return Err(RealStructureError::BadGenerators);
    }
    let span = Sublattice::span(&generators.iter().map(|g| *g.vector()).collect::<Vec<_>>());
    let spanned = simple_system(&roots_in(&span))?
        .dynkin_type()
        .map_err(RootError::from)?;
    let saturated = simple_system(&roots_in(&saturate(&span)))?
        .dynkin_type()
        .map_err(RootError::from)?;
    if spanned != saturated {
        return Err(RealStructureError::SaturationMismatch {
            spanned: spanned.to_string(),
            saturated: saturated.to_string(),
        });
    }

    let mut u = vec![k];
    u.extend_from_slice(span.basis());
    let n = u.len();
    let gram: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| u[i].dot(&u[j])).collect())
        .collect();
    let gram_inv =
        qmat::inverse(&qmat::from_integers(&gram)).ok_or(RealStructureError::BadGenerators)?;
    // P = U^T G^{-1} U J, sigma = I - 2P.
    let ut = qmat::from_integers(
        &(0..RANK)
            .map(|c| u.iter().map(|v| v.0[c]).collect())
            .collect::<Vec<_>>(),
    );
    let uj = qmat::from_integers(
        &u.iter()
            .map(|v| v.dualized().0.to_vec())
            .collect::<Vec<_>>(),
    );
    let p = qmat::mul(&qmat::mul(&ut, &gram_inv), &uj);
    let two = BigRational::from_integer(2.into());
    let mut m = IntMatrix::zeros(RANK, RANK);
    for i in 0..RANK {
        for j in 0..RANK {
            let delta = if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            let x = delta - &two * &p[i][j];
            if !x.is_integer() {
                return Err(RealStructureError::NonIntegral);
            }
            m[(i, j)] = x
                .to_integer()
                .to_i64()
                .ok_or(RealStructureError::NonIntegral)?;
        }
    }
    RealStructure::from_matrix(m)
}

/// Bertini involution: `+1` on `K`, `-1` on its orthogonal complement.
pub fn bertini_matrix() -> IntMatrix {
    // tau(x) = -x + 2 (x.K) K
    let k = LatticeVector::canonical();
    let mut m = IntMatrix::zeros(RANK, RANK);
    for j in 0..RANK {
        let u = LatticeVector::unit(j);
        let image = -u + 2 * u.dot(&k) * k;
        for i in 0..RANK {
            m[(i, j)] = image.0[i];
        }
    }
    m
}

/// `sigma` composed with the Bertini involution.
pub fn bertini_dual(sigma: &RealStructure) -> RealStructure {
    RealStructure::from_matrix(sigma.matrix.mul(&bertini_matrix()))
        .expect("Bertini involution commutes with every sigma reversing K")
}

pub fn real_roots(sigma: &RealStructure) -> Vec<Root> {
    enumerate_roots()
        .iter()
        .copied()
        .filter(|r| sigma.is_anti_invariant(r.vector()))
        .collect()
}

pub fn real_exceptional(sigma: &RealStructure) -> Vec<ExceptionalClass> {
    enumerate_exceptional()
        .iter()
        .copied()
        .filter(|v| sigma.is_anti_invariant(v.vector()))
        .collect()
}

/// Coxeter basis of the real root system, for the fixed positivity order.
pub fn real_simple_system(sigma: &RealStructure) -> SimpleSystem {
    simple_system(&real_roots(sigma)).expect("real roots of an involution form a closed subsystem")
}

/// First set of four pairwise orthogonal positive roots, in lexicographic
/// order, whose span is primitive.
pub fn find_primitive_orthogonal_quadruple() -> Option<[Root; 4]> {
    let positive: Vec<Root> = enumerate_roots()
        .iter()
        .copied()
        .filter(|r| crate::roots::positivity(r.vector()) > 0)
        .collect();
    fn extend(pool: &[Root], chosen: &mut Vec<Root>, start: usize) -> Option<[Root; 4]> {
        if chosen.len() == 4 {
            let span = Sublattice::span(&chosen.iter().map(|r| *r.vector()).collect::<Vec<_>>());
            return (roots_in(&saturate(&span)).len() == 8)
                .then(|| [chosen[0], chosen[1], chosen[2], chosen[3]]);
        }
        for i in start..pool.len() {
            if chosen.iter().all(|c| c.dot(&pool[i]) == 0) {
                chosen.push(pool[i]);
                if let Some(found) = extend(pool, chosen, i + 1) {
                    return Some(found);
                }
                chosen.pop();
            }
        }
        None
    }
    extend(&positive, &mut Vec::new(), 0)
}

/// Stored witness for the `4A1` class; reproduced by
/// [`find_primitive_orthogonal_quadruple`] in the tests.
pub const ORTHOGONAL_QUADRUPLE: [[i64; RANK]; 4] = [
    [0, 0, 0, 0, 0, 0, 0, 1, -1],
    [0, 0, 0, 0, 0, 1, -1, 0, 0],
    [0, 0, 0, 1, -1, 0, 0, 0, 0],
    [0, 1, -1, 0, 0, 0, 0, 0, 0],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    /// Orientable handles: `RP2 # nT2`, the Klein bottle class and `(RP2 # T2) + S2`.
    Handles,
    /// Spheres: `RP2 + nS2`.
    Spheres,
}

/// Golden data for one real deformation class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeformationClass {
    pub label: &'static str,
    pub smith_type: &'static str,
    pub topology: &'static str,
    pub eigen_type: &'static str,
    pub expected_lines: usize,
    pub expected_h: usize,
    pub expected_e: usize,
    pub expected_h1_dim: usize,
    pub bertini_partner: &'static str,
    pub side: Side,
}

impl DeformationClass {
    pub fn eigen_dynkin(&self) -> DynkinType {
        self.eigen_type.parse().expect("catalog labels are valid")
    }
}

#[allow(clippy::too_many_arguments)]
const fn class(
    label: &'static str,
    smith_type: &'static str,
    topology: &'static str,
    eigen_type: &'static str,
    counts: (usize, usize, usize),
    expected_h1_dim: usize,
    bertini_partner: &'static str,
    side: Side,
) -> DeformationClass {
    DeformationClass {
        label,
        smith_type,
        topology,
        eigen_type,
        expected_lines: counts.0,
        expected_h: counts.1,
        expected_e: counts.2,
        expected_h1_dim,
        bertini_partner,
        side,
    }
}

/// Catalog version embedded in reports.
pub const CATALOG_VERSION: &str = "dp1-catalog/1";

/// The eleven classes: root lattice of the minus part, line counts and the
/// first Betti number mod 2 of the real locus.
pub const CLASSES: [DeformationClass; 11] = [
    class(
        "RP2+4T2",
        "M",
        "RP2#4T2",
        "E8",
        (240, 128, 112),
        9,
        "RP2+4S2",
        Side::Handles,
    ),
    class(
        "RP2+3T2",
        "M-1",
        "RP2#3T2",
        "E7",
        (126, 70, 56),
        7,
        "RP2+3S2",
        Side::Handles,
    ),
    class(
        "RP2+2T2",
        "M-2",
        "RP2#2T2",
        "D6",
        (60, 36, 24),
        5,
        "RP2+2S2",
        Side::Handles,
    ),
    class(
        "RP2+1T2",
        "M-3",
        "RP2#T2",
        "D4+A1",
        (26, 18, 8),
        3,
        "RP2+1S2",
        Side::Handles,
    ),
    class(
        "RP2",
        "M-4",
        "RP2",
        "4A1",
        (8, 8, 0),
        1,
        "RP2",
        Side::Handles,
    ),
    class(
        "RP2+Klein",
        "(M-2)Ia",
        "RP2+K",
        "D4",
        (24, 16, 8),
        3,
        "RP2+Klein",
        Side::Handles,
    ),
    class(
        "RP2+T2+S2",
        "(M-2)Ib",
        "(RP2#T2)+S2",
        "D4",
        (24, 16, 8),
        3,
        "RP2+T2+S2",
        Side::Handles,
    ),
    class(
        "RP2+4S2",
        "M",
        "RP2+4S2",
        "0",
        (0, 0, 0),
        1,
        "RP2+4T2",
        Side::Spheres,
    ),
    class(
        "RP2+3S2",
        "M-1",
        "RP2+3S2",
        "A1",
        (2, 2, 0),
        1,
        "RP2+3T2",
        Side::Spheres,
    ),
    class(
        "RP2+2S2",
        "M-2",
        "RP2+2S2",
        "2A1",
        (4, 4, 0),
        1,
        "RP2+2T2",
        Side::Spheres,
    ),
    class(
        "RP2+1S2",
        "M-3",
        "RP2+S2",
        "3A1",
        (6, 6, 0),
        1,
        "RP2+1T2",
        Side::Spheres,
    ),
];

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub class: DeformationClass,
    pub structure: RealStructure,
}

fn handle_generators(label: &str) -> Vec<Root> {
    let b = standard_e8_basis();
    let pick = |idx: &[usize]| idx.iter().map(|&i| b[i]).collect::<Vec<_>>();
    match label {
        "RP2+4T2" => pick(&[0, 1, 2, 3, 4, 5, 6, 7]),
        "RP2+3T2" => pick(&[0, 1, 2, 3, 4, 5, 6]),
        "RP2+2T2" => pick(&[0, 2, 3, 4, 5, 6]),
        "RP2+1T2" => pick(&[0, 2, 3, 4, 6]),
        "RP2+Klein" | "RP2+T2+S2" => pick(&[0, 2, 3, 4]),
        "RP2" => ORTHOGONAL_QUADRUPLE
            .iter()
            .map(|c| Root::new(LatticeVector(*c)).expect("stored witness is a root"))
            .collect(),
        _ => unreachable!("not a handle-side class: {label}"),
    }
}

fn build_entry(class: &DeformationClass) -> Result<CatalogEntry, String> {
    let structure = match class.side {
        Side::Handles => involution_from_subsystem(&handle_generators(class.label))
            .map_err(|e| format!("{}: {e}", class.label))?,
        Side::Spheres => bertini_dual(
            &involution_from_subsystem(&handle_generators(class.bertini_partner))
                .map_err(|e| format!("{}: {e}", class.label))?,
        ),
    }
    .with_label(class.label);
    validate_entry(class, &structure)?;
    Ok(CatalogEntry {
        class: class.clone(),
        structure,
    })
}

fn validate_entry(class: &DeformationClass, sigma: &RealStructure) -> Result<(), String> {
    let fail = |what: String| Err(format!("{}: {what}", class.label));
    let roots = real_roots(sigma);
    if roots.len() != class.expected_lines {
        return fail(format!(
            "{} real roots, expected {}",
            roots.len(),
            class.expected_lines
        ));
    }
    let ty = real_simple_system(sigma)
        .dynkin_type()
        .map_err(|e| format!("{}: {e}", class.label))?;
    if ty != class.eigen_dynkin() {
        return fail(format!(
            "real root type {ty}, expected {}",
            class.eigen_type
        ));
    }
    let partner = CLASSES
        .iter()
        .find(|c| c.label == class.bertini_partner)
        .ok_or_else(|| format!("{}: partner missing", class.label))?;
    let dual_ty = real_simple_system(&bertini_dual(sigma))
        .dynkin_type()
        .map_err(|e| format!("{}: {e}", class.label))?;
    if dual_ty != partner.eigen_dynkin() {
        return fail(format!(
            "dual type {dual_ty}, expected {}",
            partner.eigen_type
        ));
    }
    if real_exceptional(sigma).len() != roots.len() {
        return fail("real exceptional classes do not match real roots".into());
    }
    Ok(())
}

/// The validated catalog, in fixed order. Built once; panics on a class that
/// fails validation.
pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        CLASSES
            .iter()
            .map(|c| build_entry(c).unwrap_or_else(|e| panic!("catalog validation failed: {e}")))
            .collect()
    })
}

pub fn catalog_entry(label: &str) -> Option<&'static CatalogEntry> {
    catalog()
        .iter()
        .find(|e| e.class.label.eq_ignore_ascii_case(label))
}

/// Root lattice `K^perp` as a sublattice, used in several invariants.
pub fn k_perp() -> Sublattice {
    orthogonal_complement(
        &Sublattice::from_basis(vec![LatticeVector::canonical()]).expect("K != 0"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_span_gives_minus_identity() {
        let sigma = involution_from_subsystem(&standard_e8_basis()).unwrap();
        let mut minus = IntMatrix::identity(RANK);
        for i in 0..RANK {
            minus[(i, i)] = -1;
        }
        assert_eq!(sigma.matrix(), &minus);
        assert_eq!(real_roots(&sigma).len(), 240);
    }

    #[test]
    fn empty_span_fixes_k_perp() {
        let sigma = involution_from_subsystem(&[]).unwrap();
        assert!(real_roots(&sigma).is_empty());
        for b in k_perp().basis() {
            assert_eq!(sigma.apply(b), *b);
        }
        assert_eq!(
            bertini_dual(&sigma).matrix(),
            involution_from_subsystem(&standard_e8_basis())
                .unwrap()
                .matrix()
        );
    }

    #[test]
    fn imprimitive_quadruple_rejected() {
        let b = standard_e8_basis();
        // legs of D4 plus its highest root: alpha0 + alpha2 + 2 alpha3 + alpha4
        let top = Root::new(*b[0].vector() + *b[2].vector() + 2 * *b[3].vector() + *b[4].vector())
            .unwrap();
        let quad = [b[0], b[2], b[4], top];
        assert!(quad
            .iter()
            .all(|x| quad.iter().all(|y| x == y || x.dot(y) == 0)));
        let err = involution_from_subsystem(&quad).unwrap_err();
        assert_eq!(
            err,
            RealStructureError::SaturationMismatch {
                spanned: "4A1".into(),
                saturated: "D4".into()
            }
        );
        let span = Sublattice::span(&quad.iter().map(|r| *r.vector()).collect::<Vec<_>>());
        assert_eq!(roots_in(&saturate(&span)).len(), 24);
    }

    #[test]
    fn quadruple_witness_is_reproduced() {
        let found = find_primitive_orthogonal_quadruple().unwrap();
        let stored: Vec<LatticeVector> = ORTHOGONAL_QUADRUPLE
            .iter()
            .map(|c| LatticeVector(*c))
            .collect();
        assert_eq!(
            found.iter().map(|r| *r.vector()).collect::<Vec<_>>(),
            stored
        );
        let sigma = involution_from_subsystem(&found).unwrap();
        assert_eq!(
            real_simple_system(&sigma)
                .dynkin_type()
                .unwrap()
                .to_string(),
            "4A1"
        );
        assert_eq!(
            real_simple_system(&bertini_dual(&sigma))
                .dynkin_type()
                .unwrap()
                .to_string(),
            "4A1"
        );
    }

    #[test]
    fn non_matrix_rejected() {
        assert!(RealStructure::from_matrix(IntMatrix::identity(RANK)).is_err());
        assert!(RealStructure::from_matrix(IntMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn catalog_is_valid() {
        let cat = catalog();
        assert_eq!(cat.len(), 11);
        for e in cat {
            let m = e.structure.matrix();
            assert_eq!(m.mul(m), IntMatrix::identity(RANK));
            assert_eq!(m.determinant().abs(), 1);
            let dual = bertini_dual(&e.structure);
            assert_eq!(bertini_dual(&dual).matrix(), m);
            let r = real_simple_system(&e.structure).rank() + real_simple_system(&dual).rank();
            assert_eq!(r, 8, "{}", e.class.label);
            assert_eq!(
                e.class.expected_h + e.class.expected_e,
                e.class.expected_lines
            );
            assert_eq!(
                e.class.expected_h - e.class.expected_e,
                2 * e.class.eigen_dynkin().rank()
            );
        }
        assert_eq!(
            catalog_entry("RP2+Klein").unwrap().class.bertini_partner,
            "RP2+Klein"
        );
        assert_eq!(catalog_entry("rp2").unwrap().class.eigen_type, "4A1");
        assert_eq!(
            catalog_entry("RP2+2S2").unwrap().class.bertini_partner,
            "RP2+2T2"
        );
    }

    #[test]
    fn minus_lattice_splits() {
        for e in catalog() {
            let minus = e.structure.minus_lattice();
            let simple = real_simple_system(&e.structure);
            let mut basis = vec![LatticeVector::canonical()];
            basis.extend(simple.roots().iter().map(|r| *r.vector()));
            let split = Sublattice::from_basis(basis).unwrap();
            assert!(split.same_lattice(&minus), "{}", e.class.label);
            let in_perp = saturate(&simple.lattice());
            assert!(in_perp.same_lattice(&simple.lattice()), "{}", e.class.label);
        }
    }
}
