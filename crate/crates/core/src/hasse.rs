//! Cover graph of the positive roots and its pairing into adjacent roots.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::LatticeVector;
use crate::pin::QuadraticFunction;
use crate::roots::{positive_roots, PositiveRoot, Root, SimpleSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HasseError {
    #[error("no perfect pairing of the non-simple positive roots ({unmatched} left unmatched)")]
    MatchingNotFound { unmatched: usize },
    #[error("quadratic function does not vanish on the pairing's simple root {0}")]
    BasisMismatch(Root),
    #[error("root {0} does not lie in the minus lattice of the quadratic function")]
    Foreign(Root),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub lower: usize,
    pub upper: usize,
    /// Index of the simple root `upper - lower`.
    pub simple: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct HassePoset {
    pub nodes: Vec<PositiveRoot>,
    pub covers: Vec<Cover>,
}

impl HassePoset {
    pub fn node_index(&self, v: &LatticeVector) -> Option<usize> {
        self.nodes.iter().position(|n| n.root.vector() == v)
    }
}

pub fn hasse_covers(s: &SimpleSystem) -> HassePoset {
    let nodes = positive_roots(s);
    let index: HashMap<LatticeVector, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (*n.root.vector(), i))
        .collect();
    let mut covers = Vec::new();
    for (i, f) in nodes.iter().enumerate() {
        for (k, b) in s.roots().iter().enumerate() {
            let g = *f.root.vector() + *b.vector();
            if let Some(&j) = index.get(&g) {
                assert_eq!(
                    f.root.dot(b),
                    1,
                    "cover {} -> {} is not a string step",
                    f.root,
                    nodes[j].root
                );
                assert_eq!(nodes[j].height, f.height + 1);
                covers.push(Cover {
                    lower: i,
                    upper: j,
                    simple: k,
                });
            }
        }
    }
    HassePoset { nodes, covers }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pairing {
    pub simple: SimpleSystem,
    /// `(lower, upper)` pairs joined by a cover edge.
    pub pairs: Vec<(Root, Root)>,
}

/// Pairs the non-simple positive roots along cover edges.
///
/// Covers join consecutive heights, so the cover graph is bipartite by height
/// parity; augmenting paths from the odd-height side in (height, root) order
/// give a deterministic maximum matching.
pub fn pair_matching(s: &SimpleSystem) -> Result<Pairing, HasseError> {
    let poset = hasse_covers(s);
    let n = poset.nodes.len();
    let inner = |i: usize| poset.nodes[i].height >= 2;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for c in &poset.covers {
        if inner(c.lower) && inner(c.upper) {
            adj[c.lower].push(c.upper);
            adj[c.upper].push(c.lower);
        }
    }
    for a in adj.iter_mut() {
        a.sort_unstable();
    }
    let left: Vec<usize> = (0..n)
        .filter(|&i| inner(i) && poset.nodes[i].height % 2 == 1)
        .collect();
    let right_count = (0..n)
        .filter(|&i| inner(i) && poset.nodes[i].height % 2 == 0)
        .count();

    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        mate: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if mate[v].is_none() || augment(mate[v].unwrap(), adj, mate, seen) {
                mate[v] = Some(u);
                return true;
            }
        }
        false
    }

    let mut mate: Vec<Option<usize>> = vec![None; n];
    let mut matched = 0;
    for &u in &left {
        let mut seen = vec![false; n];
        if augment(u, &adj, &mut mate, &mut seen) {
            matched += 1;
        }
    }
    let unmatched = left.len() + right_count - 2 * matched;
    if unmatched != 0 {
        return Err(HasseError::MatchingNotFound { unmatched });
    }
    let mut pairs: Vec<(usize, usize)> = mate
        .iter()
        .enumerate()
        .filter_map(|(v, m)| {
            m.map(|u| {
                if poset.nodes[u].height < poset.nodes[v].height {
                    (u, v)
                } else {
                    (v, u)
                }
            })
        })
        .collect();
    pairs.sort_unstable();
    Ok(Pairing {
        simple: s.clone(),
        pairs: pairs
            .into_iter()
            .map(|(a, b)| (poset.nodes[a].root, poset.nodes[b].root))
            .collect(),
    })
}

fn check_basis(f: &QuadraticFunction, p: &Pairing) -> Result<(), HasseError> {
    for b in p.simple.roots() {
        match f.qhat(b.vector()) {
            Ok(0) => {}
            Ok(_) => return Err(HasseError::BasisMismatch(*b)),
            Err(_) => return Err(HasseError::Foreign(*b)),
        }
    }
    Ok(())
}

fn qhat_of(f: &QuadraticFunction, r: &Root) -> Result<u8, HasseError> {
    f.qhat(r.vector()).map_err(|_| HasseError::Foreign(*r))
}

/// Whether every pair has distinct `qhat` values.
pub fn verify_cancelation(f: &QuadraticFunction, p: &Pairing) -> Result<bool, HasseError> {
    check_basis(f, p)?;
    for (u, v) in &p.pairs {
        if qhat_of(f, u)? == qhat_of(f, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Signed line count rebuilt from the special basis and the pairs:
/// `2 * (sum over basis + sum over pairs)`, counting `+1` for `qhat = 0`.
pub fn paired_signed_sum(f: &QuadraticFunction, p: &Pairing) -> Result<i64, HasseError> {
    check_basis(f, p)?;
    let s = |r: &Root| -> Result<i64, HasseError> { Ok(if qhat_of(f, r)? == 0 { 1 } else { -1 }) };
    let mut total = 0;
    for b in p.simple.roots() {
        total += s(b)?;
    }
    for (u, v) in &p.pairs {
        total += s(u)? + s(v)?;
    }
    Ok(2 * total)
}
