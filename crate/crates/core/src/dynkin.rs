//! ADE labels and classification of simply-laced Cartan matrices.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::snf::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynkinError {
    #[error("Cartan matrix is not of simply-laced finite type: {0}")]
    NotAde(String),
    #[error("cannot parse Dynkin label {0:?}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    D,
    E,
}

/// One connected component, e.g. `D4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub family: Family,
    pub rank: usize,
}

impl Component {
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::D => 2 * n * (n - 1),
            Family::E => match n {
                6 => 72,
                7 => 126,
                8 => 240,
                _ => unreachable!("E{n} is not a finite type"),
            },
        }
    }

    fn sort_key(&self) -> (u8, std::cmp::Reverse<usize>) {
        let f = match self.family {
            Family::E => 0,
            Family::D => 1,
            Family::A => 2,
        };
        (f, std::cmp::Reverse(self.rank))
    }
}

/// A direct sum of ADE components in canonical order (E, then D, then A;
/// larger ranks first). Displays as `E8`, `D4+A1`, `4A1`, or `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DynkinType {
    components: Vec<Component>,
}

impl DynkinType {
    pub fn new(mut components: Vec<Component>) -> Self {
        components.sort_by_key(Component::sort_key);
        DynkinType { components }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn root_count(&self) -> usize {
        self.components.iter().map(Component::root_count).sum()
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.components.len() {
            let c = self.components[i];
            let run = self.components[i..].iter().take_while(|&&x| x == c).count();
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{run}")?;
            }
            write!(f, "{:?}{}", c.family, c.rank)?;
            i += run;
        }
        Ok(())
    }
}

impl Serialize for DynkinType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for DynkinType {
    type Err = DynkinError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DynkinError::Parse(s.to_string());
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Self::empty());
        }
        let mut comps = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let pos = part
                .find(|c: char| c.is_ascii_alphabetic())
                .ok_or_else(err)?;
            let mult: usize = if pos == 0 {
                1
            } else {
                part[..pos].parse().map_err(|_| err())?
            };
            let family = match &part[pos..pos + 1] {
                "A" | "a" => Family::A,
                "D" | "d" => Family::D,
                "E" | "e" => Family::E,
                _ => return Err(err()),
            };
            let rank: usize = part[pos + 1..].parse().map_err(|_| err())?;
            let valid = match family {
                Family::A => rank >= 1,
                Family::D => rank >= 4,
                Family::E => (6..=8).contains(&rank),
            };
            if !valid || mult == 0 {
                return Err(err());
            }
            comps.extend(std::iter::repeat_n(Component { family, rank }, mult));
        }
        Ok(Self::new(comps))
    }
}

/// Classifies a Cartan matrix (2 on the diagonal, 0/-1 off it).
pub fn classify_cartan(cartan: &IntMatrix) -> Result<DynkinType, DynkinError> {
    let n = cartan.rows();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        if cartan[(i, i)] != 2 {
            return Err(DynkinError::NotAde(format!(
                "diagonal entry {}",
                cartan[(i, i)]
            )));
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            match cartan[(i, j)] {
                0 => {}
                -1 => adj[i].push(j),
                x => return Err(DynkinError::NotAde(format!("off-diagonal entry {x}"))),
            }
            if cartan[(i, j)] != cartan[(j, i)] {
                return Err(DynkinError::NotAde("asymmetric".into()));
            }
        }
    }

    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut members = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < members.len() {
            for &w in &adj[members[k]] {
                if !seen[w] {
                    seen[w] = true;
                    members.push(w);
                }
            }
            k += 1;
        }
        comps.push(classify_tree(&members, &adj)?);
    }
    Ok(DynkinType::new(comps))
}

fn classify_tree(members: &[usize], adj: &[Vec<usize>]) -> Result<Component, DynkinError> {
    let n = members.len();
    let edges: usize = members.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
    if edges + 1 != n {
        return Err(DynkinError::NotAde("diagram has a cycle".into()));
    }
    let branch: Vec<usize> = members
        .iter()
        .copied()
        .filter(|&v| adj[v].len() > 2)
        .collect();
    match branch.as_slice() {
        [] => Ok(Component {
            family: Family::A,
            rank: n,
        }),
        [center] if adj[*center].len() == 3 => {
            // Arm lengths from the branch node.
            let mut arms: Vec<usize> = adj[*center]
                .iter()
                .map(|&first| {
                    let (mut prev, mut cur, mut len) = (*center, first, 1);
                    loop {
                        let next: Vec<usize> =
                            adj[cur].iter().copied().filter(|&w| w != prev).collect();
                        match next.as_slice() {
                            [] => break len,
                            [w] => {
                                prev = cur;
                                cur = *w;
                                len += 1;
                            }
                            _ => break usize::MAX,
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, k] => Ok(Component {
                    family: Family::D,
                    rank: k + 3,
                }),
                [1, 2, k @ 2..=4] => Ok(Component {
                    family: Family::E,
                    rank: k + 4,
                }),
                _ => Err(DynkinError::NotAde(format!("arms {arms:?}"))),
            }
        }
        _ => Err(DynkinError::NotAde("more than one branch node".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cartan_from_edges(n: usize, edges: &[(usize, usize)]) -> IntMatrix {
        let mut c = IntMatrix::identity(n);
        for i in 0..n {
            c[(i, i)] = 2;
        }
        for &(a, b) in edges {
            c[(a, b)] = -1;
            c[(b, a)] = -1;
        }
        c
    }

    #[test]
    fn textbook_diagrams() {
        let e8 = cartan_from_edges(8, &[(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]);
        assert_eq!(classify_cartan(&e8).unwrap().to_string(), "E8");
        let d4 = cartan_from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(classify_cartan(&d4).unwrap().to_string(), "D4");
        let a1x4 = cartan_from_edges(4, &[]);
        assert_eq!(classify_cartan(&a1x4).unwrap().to_string(), "4A1");
        let d4a1 = cartan_from_edges(5, &[(1, 2), (1, 3), (1, 4)]);
        assert_eq!(classify_cartan(&d4a1).unwrap().to_string(), "D4+A1");
        assert_eq!(
            classify_cartan(&IntMatrix::zeros(0, 0))
                .unwrap()
                .to_string(),
            "0"
        );
    }

    #[test]
    fn rejects_affine_and_cycles() {
        let cycle = cartan_from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(classify_cartan(&cycle).is_err());
        let d4_affine = cartan_from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(classify_cartan(&d4_affine).is_err());
        let e9 = cartan_from_edges(
            9,
            &[
                (0, 2),
                (1, 3),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 8),
            ],
        );
        assert!(classify_cartan(&e9).is_err());
    }

    #[test]
    fn parse_roundtrip_and_counts() {
        for label in [
            "E8", "E7", "D6", "D4+A1", "4A1", "D4", "0", "A1", "2A1", "3A1",
        ] {
            let t: DynkinType = label.parse().unwrap();
            assert_eq!(t.to_string(), label);
        }
        let t: DynkinType = "A1+D4".parse().unwrap();
        assert_eq!(t.to_string(), "D4+A1");
        assert_eq!(t.root_count(), 26);
        assert_eq!(t.rank(), 5);
        assert_eq!("E7".parse::<DynkinType>().unwrap().root_count(), 126);
        assert!("E9".parse::<DynkinType>().is_err());
        assert!("D3".parse::<DynkinType>().is_err());
    }
}
