//! Reference computations written directly from the definitions, used to
//! cross-check the library.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use dp1lines::lattice::LatticeVector;
use dp1lines::real::RealStructure;
use dp1lines::roots::Root;

pub type V = [i64; 9];

pub const K: V = [-3, 1, 1, 1, 1, 1, 1, 1, 1];

pub fn dot(a: &V, b: &V) -> i64 {
    a[0] * b[0] - (1..9).map(|i| a[i] * b[i]).sum::<i64>()
}

pub fn add(a: &V, b: &V) -> V {
    std::array::from_fn(|i| a[i] + b[i])
}

pub fn sub(a: &V, b: &V) -> V {
    std::array::from_fn(|i| a[i] - b[i])
}

pub fn neg(a: &V) -> V {
    a.map(|x| -x)
}

pub fn scale(a: &V, s: i64) -> V {
    a.map(|x| x * s)
}

pub fn unit(i: usize) -> V {
    let mut v = [0; 9];
    v[i] = 1;
    v
}

pub fn root(v: &V) -> Root {
    Root::new(LatticeVector::new(*v)).expect("oracle vector is a root")
}

/// All `x` with `x.K = k_dot` and `x.x = norm`, by exhaustive search.
pub fn solutions(k_dot: i64, norm: i64) -> Vec<V> {
    fn fill(x: &mut V, i: usize, budget: i64, rest: i64, out: &mut Vec<V>) {
        if i == 9 {
            if budget == 0 && rest == 0 {
                out.push(*x);
            }
            return;
        }
        if rest * rest > (9 - i as i64) * budget {
            return;
        }
        let b = (0..)
            .take_while(|v: &i64| v * v <= budget)
            .last()
            .unwrap_or(0);
        for v in -b..=b {
            x[i] = v;
            fill(x, i + 1, budget - v * v, rest - v, out);
        }
        x[i] = 0;
    }
    let mut out = Vec::new();
    for x0 in -8..=8 {
        let budget = x0 * x0 - norm;
        if budget < 0 {
            continue;
        }
        let mut x = [0; 9];
        x[0] = x0;
        fill(&mut x, 1, budget, -3 * x0 - k_dot, &mut out);
    }
    out.sort();
    out
}

pub fn roots() -> Vec<V> {
    solutions(0, -2)
}

pub fn exceptional() -> Vec<V> {
    solutions(-1, -1)
}

/// `sigma` applied as a matrix to a column vector.
pub fn act(sigma: &RealStructure, x: &V) -> V {
    let m = sigma.matrix();
    std::array::from_fn(|i| (0..9).map(|j| m[(i, j)] * x[j]).sum())
}

/// The Bertini involution `x -> -x + 2 (x.K) K`.
pub fn bertini(x: &V) -> V {
    add(&neg(x), &scale(&K, 2 * dot(x, &K)))
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Reduced row echelon form over Q; returns the pivot columns.
fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(vs: &[V]) -> usize {
    let mut m: Vec<Vec<BigRational>> = vs
        .iter()
        .map(|v| v.iter().map(|&x| rational(x)).collect())
        .collect();
    rref(&mut m).len()
}

/// Coordinates of `x` in the independent family `basis`, if `x` is in its rational span.
pub fn coords(basis: &[V], x: &V) -> Option<Vec<BigRational>> {
    let n = basis.len();
    let mut m: Vec<Vec<BigRational>> = (0..9)
        .map(|i| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| rational(b[i])).collect();
            row.push(rational(x[i]));
            row
        })
        .collect();
    let pivots = rref(&mut m);
    assert!(
        pivots.iter().filter(|&&p| p < n).count() == n,
        "basis is dependent"
    );
    if pivots.contains(&n) {
        return None;
    }
    Some((0..n).map(|j| m[j][n].clone()).collect())
}

pub fn int_coords(basis: &[V], x: &V) -> Option<Vec<i64>> {
    coords(basis, x)?
        .into_iter()
        .map(|c| {
            c.is_integer()
                .then(|| i64::try_from(c.to_integer()).unwrap())
        })
        .collect()
}

pub fn rank_f2(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] == 1) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][c] == 1 {
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Determinant by cofactor-free Gaussian elimination over Q.
pub fn det(m: &[Vec<i64>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| rational(x)).collect())
        .collect();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            let row = a[c].clone();
            for (x, p) in a[i].iter_mut().zip(&row).skip(c) {
                *x -= &f * p;
            }
        }
    }
    d
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Whether the independent family `basis` spans a primitive sublattice of Z^9:
/// the maximal minors have gcd 1.
pub fn is_primitive(basis: &[V]) -> bool {
    let r = basis.len();
    let mut g = BigInt::zero();
    for rows in subsets(9, r) {
        let m: Vec<Vec<i64>> = rows
            .iter()
            .map(|&i| basis.iter().map(|b| b[i]).collect())
            .collect();
        let d = det(&m);
        g = gcd(&g, &d.to_integer());
    }
    g.is_one()
}

/// Checks that `basis` is a basis of the anti-invariant lattice of `sigma`.
pub fn check_minus_basis(sigma: &RealStructure, basis: &[V]) -> Result<(), String> {
    for b in basis {
        if act(sigma, b) != neg(b) {
            return Err(format!("{b:?} is not anti-invariant"));
        }
    }
    let image: Vec<V> = (0..9)
        .map(|i| add(&unit(i), &act(sigma, &unit(i))))
        .collect();
    let expected = 9 - rank(&image);
    if rank(basis) != basis.len() || basis.len() != expected {
        return Err(format!(
            "rank {} against kernel rank {expected}",
            basis.len()
        ));
    }
    if !is_primitive(basis) {
        return Err("not saturated".into());
    }
    Ok(())
}

/// Checks that `sigma` is an isometric involution with `sigma(K) = -K`.
pub fn check_real_structure(sigma: &RealStructure) -> Result<(), String> {
    for i in 0..9 {
        let e = unit(i);
        if act(sigma, &act(sigma, &e)) != e {
            return Err("not an involution".into());
        }
        for j in 0..9 {
            let f = unit(j);
            if dot(&act(sigma, &e), &act(sigma, &f)) != dot(&e, &f) {
                return Err("not an isometry".into());
            }
        }
    }
    if act(sigma, &K) != neg(&K) {
        return Err("K is not anti-invariant".into());
    }
    Ok(())
}

/// Coordinates in a fixed independent family, as `c = P x / d` with an
/// integer matrix `P`.
pub struct Coordinates {
    basis: Vec<V>,
    p: Vec<[i64; 9]>,
    d: i64,
}

impl Coordinates {
    /// Uses `c = M^-1 B^T G x`, `M` the Gram matrix of the family.
    pub fn new(basis: &[V]) -> Self {
        let r = basis.len();
        let gram: Vec<Vec<i64>> = basis
            .iter()
            .map(|a| basis.iter().map(|b| dot(a, b)).collect())
            .collect();
        let mut aug: Vec<Vec<BigRational>> = (0..r)
            .map(|i| {
                let mut row: Vec<BigRational> = gram[i].iter().map(|&x| rational(x)).collect();
                row.extend((0..9).map(|j| rational(dot(&basis[i], &unit(j)))));
                row
            })
            .collect();
        let pivots = rref(&mut aug);
        assert!(
            pivots == (0..r).collect::<Vec<_>>(),
            "degenerate Gram matrix"
        );
        let mut d = BigInt::one();
        for row in &aug {
            for x in &row[r..] {
                let den = x.denom().clone();
                d = &d * &den / gcd(&d, &den);
            }
        }
        let p = aug
            .iter()
            .map(|row| {
                std::array::from_fn(|j| {
                    i64::try_from((&row[r + j] * BigRational::from_integer(d.clone())).to_integer())
                        .unwrap()
                })
            })
            .collect();
        Coordinates {
            basis: basis.to_vec(),
            p,
            d: i64::try_from(d).unwrap(),
        }
    }

    /// Whether `x` lies in the rational span.
    pub fn in_span(&self, x: &V) -> bool {
        let mut back = [0; 9];
        for (row, b) in self.p.iter().zip(&self.basis) {
            let n: i64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            back = add(&back, &scale(b, n));
        }
        back == scale(x, self.d)
    }

    /// Integer coordinates of `x`, if it lies in the integer span.
    pub fn get(&self, x: &V) -> Option<Vec<i64>> {
        let mut c = Vec::with_capacity(self.p.len());
        for row in &self.p {
            let n: i64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            if n % self.d != 0 {
                return None;
            }
            c.push(n / self.d);
        }
        let mut back = [0; 9];
        for (ci, b) in c.iter().zip(&self.basis) {
            back = add(&back, &scale(b, *ci));
        }
        (back == *x).then_some(c)
    }
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let t = &a % &b;
        a = b;
        b = t;
    }
    a
}

/// `qhat(x) = x.x + 2 chi(x) mod 4`, with `chi` given by its values on a
/// basis of the anti-invariant lattice.
pub struct Refinement<'a> {
    pub coords: &'a Coordinates,
    pub bits: Vec<u8>,
}

impl Refinement<'_> {
    pub fn chi(&self, x: &V) -> u8 {
        let c = self
            .coords
            .get(x)
            .expect("vector in the anti-invariant lattice");
        c.iter()
            .zip(&self.bits)
            .map(|(c, &b)| c.rem_euclid(2) as u8 * b)
            .sum::<u8>()
            % 2
    }

    pub fn qhat(&self, x: &V) -> u8 {
        (dot(x, x) + 2 * i64::from(self.chi(x))).rem_euclid(4) as u8
    }
}

/// Hyperbolic and elliptic counts among `real_roots`.
pub fn count_lines(f: &Refinement, real_roots: &[V]) -> (usize, usize) {
    let h = real_roots.iter().filter(|r| f.qhat(r) == 0).count();
    let e = real_roots.iter().filter(|r| f.qhat(r) == 2).count();
    assert_eq!(h + e, real_roots.len(), "qhat on a root is even");
    (h, e)
}

/// Positive roots of `system` with respect to `basis`, with their
/// coefficients, or `None` if `basis` is not a set of simple roots for it.
pub fn positive_system(basis: &[V], system: &[V]) -> Option<Vec<(V, Vec<i64>)>> {
    if rank(basis) != basis.len() {
        return None;
    }
    let coords = Coordinates::new(basis);
    let mut out = Vec::new();
    for r in system {
        let c = coords.get(r)?;
        if c.iter().all(|&x| x >= 0) {
            out.push((*r, c));
        } else if !c.iter().all(|&x| x <= 0) {
            return None;
        }
    }
    Some(out)
}

/// Depth-first search for a set of simple roots of `system` inside `allowed`.
pub fn find_coxeter_basis(system: &[V], allowed: &[V]) -> Option<Vec<V>> {
    let target = rank(system);
    fn go(system: &[V], allowed: &[V], target: usize, start: usize, chosen: &mut Vec<V>) -> bool {
        if chosen.len() == target {
            return positive_system(chosen, system).is_some();
        }
        for i in start..allowed.len() {
            let r = allowed[i];
            if chosen.iter().any(|c| !matches!(dot(c, &r), 0 | 1)) {
                continue;
            }
            chosen.push(r);
            if rank(chosen) == chosen.len() && go(system, allowed, target, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    go(system, allowed, target, 0, &mut chosen).then_some(chosen)
}

pub fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Determinant by the Leibniz permutation expansion.
pub fn leibniz(m: &[Vec<i128>]) -> i128 {
    fn go(
        m: &[Vec<i128>],
        row: usize,
        used: &mut Vec<bool>,
        perm_sign: i128,
        acc: i128,
        total: &mut i128,
    ) {
        let n = m.len();
        if row == n {
            *total += perm_sign * acc;
            return;
        }
        let mut s = perm_sign;
        for c in 0..n {
            if used[c] {
                continue;
            }
            // Sign flips once per unused column skipped.
            if m[row][c] != 0 {
                used[c] = true;
                go(m, row + 1, used, s, acc * m[row][c], total);
                used[c] = false;
            }
            s = -s;
        }
    }
    let mut total = 0;
    go(m, 0, &mut vec![false; m.len()], 1, 1, &mut total);
    total
}

/// Sylvester matrix of two forms given in descending powers of `x0`.
pub fn sylvester(f: &[i128], g: &[i128]) -> Vec<Vec<i128>> {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut out = vec![vec![0; size]; size];
    for i in 0..n {
        out[i][i..i + m + 1].copy_from_slice(f);
    }
    for i in 0..m {
        out[n + i][i..i + n + 1].copy_from_slice(g);
    }
    out
}

/// Value of a form in descending powers of `x0` at `(x0, x1)`.
pub fn eval_form(c: &[i128], x0: i128, x1: i128) -> i128 {
    let d = c.len() as u32 - 1;
    c.iter()
        .enumerate()
        .map(|(k, a)| a * x0.pow(d - k as u32) * x1.pow(k as u32))
        .sum()
}

pub fn mul_forms(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// A basis of the integer span of `gens`, by integer row reduction.
pub fn integer_basis(gens: &[V]) -> Vec<V> {
    let mut rows: Vec<V> = gens.to_vec();
    let mut out = Vec::new();
    for c in 0..9 {
        loop {
            rows.retain(|r| r.iter().any(|&x| x != 0));
            let live: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if live.len() <= 1 {
                if let Some(&i) = live.first() {
                    out.push(rows.remove(i));
                }
                break;
            }
            let p = *live.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            let pivot = rows[p];
            for &i in &live {
                if i != p {
                    let f = rows[i][c].div_euclid(pivot[c]);
                    rows[i] = sub(&rows[i], &scale(&pivot, f));
                }
            }
        }
    }
    out
}

/// Whether two bases span the same sublattice of Z^9.
pub fn same_span(a: &[V], b: &[V]) -> bool {
    a.len() == b.len()
        && a.iter().all(|x| int_coords(b, x).is_some())
        && b.iter().all(|x| int_coords(a, x).is_some())
}
