//! The Smith quotient of the minus lattice and Z/4-valued quadratic functions on it.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{
    quotient_mod2, saturate, LatticeError, LatticeVector, QuotientF2, Sublattice,
};
use crate::real::{real_roots, real_simple_system, RealStructure};
use crate::roots::{phi_inverse, Root, SimpleSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PinError {
    #[error("{0} is not in the minus lattice")]
    NotInMinusLattice(LatticeVector),
    #[error("minus lattice is not K plus the real root lattice")]
    SplitMismatch,
    #[error("(1 - sigma)H2 differs from the 2-kernel of the minus lattice")]
    KernelMismatch,
    #[error("quadratic function is not admissible for this structure")]
    NotAdmissible,
    #[error("quadratic function lives on a different minus lattice")]
    ForeignFunction,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `A = ker(1 + sigma)`, `B = (1 - sigma)H2` and the quotient `A / B`.
#[derive(Clone, Debug)]
pub struct SmithModel {
    pub minus_lattice: Arc<Sublattice>,
    pub upsilon_kernel: Sublattice,
    pub quotient: QuotientF2,
    /// Coxeter basis of the real roots; the minus lattice basis is `[K, simple...]`.
    pub simple: SimpleSystem,
}

/// Null space of a matrix over F_2 (entries 0/1), as 0/1 vectors.
pub fn f2_kernel(rows: &[Vec<u8>], cols: usize) -> Vec<Vec<u8>> {
    let mut m: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x & 1).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| m[r][col] == 1) else {
            continue;
        };
        m.swap(row, p);
        for r in 0..m.len() {
            if r != row && m[r][col] == 1 {
                let src = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u8; cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m[r][f];
            }
            v
        })
        .collect()
}

/// `{v in A | v.A in 2Z}`.
pub fn two_kernel(a: &Sublattice) -> Sublattice {
    let g = a.gram();
    let n = a.rank();
    let rows: Vec<Vec<u8>> = (0..n)
        .map(|i| (0..n).map(|j| g[(i, j)].rem_euclid(2) as u8).collect())
        .collect();
    let mut gens: Vec<LatticeVector> = a.basis().iter().map(|b| 2 * *b).collect();
    for v in f2_kernel(&rows, n) {
        let c: Vec<i64> = v.iter().map(|&x| x as i64).collect();
        gens.push(a.combine(&c));
    }
    Sublattice::span(&gens)
}

pub fn smith_model(sigma: &RealStructure) -> Result<SmithModel, PinError> {
    let simple = real_simple_system(sigma);
    let mut basis = vec![LatticeVector::canonical()];
    basis.extend(simple.roots().iter().map(|r| *r.vector()));
    let minus = Sublattice::from_basis(basis)?;
    if !minus.same_lattice(&sigma.minus_lattice()) || !saturate(&minus).same_lattice(&minus) {
        return Err(PinError::SplitMismatch);
    }
    let upsilon = sigma.coinvariant_image();
    if !upsilon.same_lattice(&two_kernel(&minus)) {
        return Err(PinError::KernelMismatch);
    }
    let quotient = quotient_mod2(&minus, &upsilon)?;
    Ok(SmithModel {
        minus_lattice: Arc::new(minus),
        upsilon_kernel: upsilon,
        quotient,
        simple,
    })
}

/// `chi` is a Z/2-linear functional given by its values on the basis of the
/// minus lattice (bit `i` is the value on basis vector `i`); it induces
/// `qhat(x) = x.x + 2 chi(x) mod 4`.
#[derive(Clone, Debug)]
pub struct QuadraticFunction {
    chi: u16,
    minus: Arc<Sublattice>,
}

impl PartialEq for QuadraticFunction {
    fn eq(&self, other: &Self) -> bool {
        self.chi == other.chi && self.minus.basis() == other.minus.basis()
    }
}

impl Eq for QuadraticFunction {}

impl Serialize for QuadraticFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.chi_bits().serialize(s)
    }
}

impl QuadraticFunction {
    pub fn new(chi: u16, minus: Arc<Sublattice>) -> Self {
        QuadraticFunction { chi, minus }
    }

    pub fn mask(&self) -> u16 {
        self.chi
    }

    pub fn chi_bits(&self) -> Vec<u8> {
        (0..self.minus.rank())
            .map(|i| ((self.chi >> i) & 1) as u8)
            .collect()
    }

    pub fn minus_lattice(&self) -> &Sublattice {
        &self.minus
    }

    pub fn chi(&self, x: &LatticeVector) -> Result<u8, PinError> {
        let c = self
            .minus
            .coordinates(x)
            .ok_or(PinError::NotInMinusLattice(*x))?;
        let s: i64 = c
            .iter()
            .enumerate()
            .filter(|(i, _)| (self.chi >> i) & 1 == 1)
            .map(|(_, &v)| v)
            .sum();
        Ok(s.rem_euclid(2) as u8)
    }

    pub fn qhat(&self, x: &LatticeVector) -> Result<u8, PinError> {
        let chi = self.chi(x)? as i64;
        Ok((x.norm() + 2 * chi).rem_euclid(4) as u8)
    }

    pub fn qhat_root(&self, e: &Root) -> u8 {
        self.qhat(e.vector())
            .expect("real roots lie in the minus lattice")
    }
}

pub fn qhat(f: &QuadraticFunction, x: &LatticeVector) -> Result<u8, PinError> {
    f.qhat(x)
}

fn satisfies_kernel(f: &QuadraticFunction, model: &SmithModel) -> bool {
    model
        .upsilon_kernel
        .basis()
        .iter()
        .all(|b| f.qhat(b) == Ok(0))
}

/// All `chi` with `chi(K) = 0` whose `qhat` vanishes on `(1 - sigma)H2`.
pub fn kernel_compatible_chis(sigma: &RealStructure) -> Result<Vec<QuadraticFunction>, PinError> {
    let model = smith_model(sigma)?;
    let r = model.minus_lattice.rank();
    Ok((0..1u16 << r)
        .filter(|m| m & 1 == 0)
        .map(|m| QuadraticFunction::new(m, model.minus_lattice.clone()))
        .filter(|f| satisfies_kernel(f, &model))
        .collect())
}

/// Every `chi` that is `1` on some Coxeter basis of the real roots (and `0` on
/// `K`), with one such basis as witness.
///
/// Coxeter bases form one orbit of the Weyl group of the real roots, so the
/// search walks that orbit from the fixed basis, using the simple reflections
/// as generators.
fn admissible_orbit(model: &SmithModel) -> BTreeMap<u16, Vec<Root>> {
    let simple = model.simple.roots();
    let basis = model.minus_lattice.basis();
    let start: u16 = (1..basis.len()).fold(0, |m, i| m | (1 << i));
    let mut seen: BTreeMap<u16, Vec<Root>> = BTreeMap::new();
    seen.insert(start, simple.to_vec());
    let mut queue = VecDeque::from([start]);
    while let Some(chi) = queue.pop_front() {
        let witness = seen[&chi].clone();
        for (k, r) in simple.iter().enumerate() {
            // basis index of r is k + 1
            let chi_r = ((chi >> (k + 1)) & 1) as i64;
            let mut next = 0u16;
            for (i, a) in basis.iter().enumerate() {
                let bit = (((chi >> i) & 1) as i64 + a.dot(r.vector()) * chi_r).rem_euclid(2);
                next |= (bit as u16) << i;
            }
            if seen.contains_key(&next) {
                continue;
            }
            let moved = witness
                .iter()
                .map(|b| Root::new(r.reflect(b.vector())).expect("reflection maps roots to roots"))
                .collect();
            seen.insert(next, moved);
            queue.push_back(next);
        }
    }
    seen
}

/// Admissible quadratic functions with their special bases, sorted by mask.
pub fn admissible_with_bases(
    sigma: &RealStructure,
) -> Result<Vec<(QuadraticFunction, SimpleSystem)>, PinError> {
    let model = smith_model(sigma)?;
    Ok(admissible_orbit(&model)
        .into_iter()
        .map(|(chi, witness)| {
            let f = QuadraticFunction::new(chi, model.minus_lattice.clone());
            let basis = SimpleSystem::from_roots(witness).expect("image of a Coxeter basis");
            (f, basis)
        })
        .filter(|(f, _)| satisfies_kernel(f, &model))
        .collect())
}

pub fn admissible_chis(sigma: &RealStructure) -> Result<Vec<QuadraticFunction>, PinError> {
    Ok(admissible_with_bases(sigma)?
        .into_iter()
        .map(|(f, _)| f)
        .collect())
}

fn check_domain(sigma: &RealStructure, f: &QuadraticFunction) -> Result<SmithModel, PinError> {
    let model = smith_model(sigma)?;
    if model.minus_lattice.basis() != f.minus.basis() {
        return Err(PinError::ForeignFunction);
    }
    Ok(model)
}

/// A Coxeter basis of the real roots on which `qhat` vanishes, if one exists.
pub fn special_basis(sigma: &RealStructure, f: &QuadraticFunction) -> Option<SimpleSystem> {
    let model = check_domain(sigma, f).ok()?;
    let witness = admissible_orbit(&model).remove(&f.chi)?;
    let basis = SimpleSystem::from_roots(witness).ok()?;
    debug_assert!(basis.roots().iter().all(|e| f.qhat_root(e) == 0));
    Some(basis)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LineCount {
    pub hyperbolic: usize,
    pub elliptic: usize,
    pub signed_sum: i64,
}

/// Real lines `phi^{-1}(e)` split by `qhat(e)`: `0` is hyperbolic, `2` elliptic.
pub fn line_counts(sigma: &RealStructure, f: &QuadraticFunction) -> Result<LineCount, PinError> {
    let model = check_domain(sigma, f)?;
    if !satisfies_kernel(f, &model) || !admissible_orbit(&model).contains_key(&f.chi) {
        return Err(PinError::NotAdmissible);
    }
    let mut hyperbolic = 0;
    let mut elliptic = 0;
    for e in real_roots(sigma) {
        let line = phi_inverse(&e);
        debug_assert_eq!((f.qhat(line.vector())? + f.qhat_root(&e)) % 4, 1);
        match f.qhat_root(&e) {
            0 => hyperbolic += 1,
            _ => elliptic += 1,
        }
    }
    Ok(LineCount {
        hyperbolic,
        elliptic,
        signed_sum: hyperbolic as i64 - elliptic as i64,
    })
}

/// Whether some real root has `qhat = 2`.
pub fn has_elliptic_root(sigma: &RealStructure, f: &QuadraticFunction) -> bool {
    real_roots(sigma).iter().any(|e| f.qhat_root(e) == 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{catalog, catalog_entry};

    #[test]
    fn f2_kernel_small() {
        let k = f2_kernel(&[vec![1, 1, 0], vec![0, 1, 1]], 3);
        assert_eq!(k, vec![vec![1, 1, 1]]);
        assert_eq!(f2_kernel(&[], 2).len(), 2);
    }

    #[test]
    fn quotient_dimensions() {
        let dims: Vec<usize> = catalog()
            .iter()
            .map(|e| smith_model(&e.structure).unwrap().quotient.dimension())
            .collect();
        assert_eq!(dims, vec![9, 7, 5, 3, 1, 3, 3, 1, 1, 1, 1]);
        for e in catalog() {
            assert_eq!(
                smith_model(&e.structure).unwrap().quotient.dimension(),
                e.class.expected_h1_dim
            );
        }
    }

    #[test]
    fn qhat_basics() {
        let m = &catalog_entry("RP2+4T2").unwrap().structure;
        for f in admissible_chis(m).unwrap() {
            assert_eq!(f.qhat(&LatticeVector::canonical()).unwrap(), 1);
            for e in real_roots(m).iter().take(40) {
                let q = f.qhat_root(e);
                assert!(q == 0 || q == 2);
                assert_eq!(q, f.qhat(&-*e.vector()).unwrap());
            }
        }
        let dual = &catalog_entry("RP2+4S2").unwrap().structure;
        let f = &admissible_chis(dual).unwrap()[0];
        assert!(matches!(
            f.qhat(&LatticeVector::exceptional(1)),
            Err(PinError::NotInMinusLattice(_))
        ));
    }

    #[test]
    fn m_class_standard_basis() {
        let m = &catalog_entry("RP2+4T2").unwrap().structure;
        let model = smith_model(m).unwrap();
        let all_ones = QuadraticFunction::new(0b1_1111_1110, model.minus_lattice.clone());
        let b = special_basis(m, &all_ones).unwrap();
        assert_eq!(b.roots(), model.simple.roots());
        let zero = QuadraticFunction::new(0, model.minus_lattice.clone());
        assert!(special_basis(m, &zero).is_none());
        assert_eq!(line_counts(m, &zero), Err(PinError::NotAdmissible));
        let c = line_counts(m, &all_ones).unwrap();
        assert_eq!((c.hyperbolic, c.elliptic, c.signed_sum), (128, 112, 16));
    }

    #[test]
    fn sphere_side_is_forced() {
        for label in ["RP2+4S2", "RP2+3S2", "RP2+2S2", "RP2+1S2", "RP2"] {
            let s = &catalog_entry(label).unwrap().structure;
            let compatible = kernel_compatible_chis(s).unwrap();
            let admissible = admissible_chis(s).unwrap();
            assert_eq!(compatible, admissible, "{label}");
            for f in &admissible {
                assert!(!has_elliptic_root(s, f));
            }
        }
    }

    #[test]
    fn admissible_sets_nonempty() {
        for e in catalog() {
            let adm = admissible_chis(&e.structure).unwrap();
            assert!(!adm.is_empty(), "{}", e.class.label);
            for f in &adm {
                let c = line_counts(&e.structure, f).unwrap();
                assert_eq!(c.hyperbolic, e.class.expected_h, "{}", e.class.label);
                assert_eq!(c.elliptic, e.class.expected_e, "{}", e.class.label);
            }
        }
    }
}
