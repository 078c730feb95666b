//! Consistency checks against the golden tables, grouped for the command line.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::hasse::{hasse_covers, pair_matching, paired_signed_sum, verify_cancelation};
use crate::lattice::{LatticeVector, Sublattice};
use crate::pin::{admissible_with_bases, has_elliptic_root, line_counts, smith_model, LineCount};
use crate::real::{bertini_dual, catalog, real_roots, real_simple_system, CatalogEntry};
use crate::roots::{
    enumerate_exceptional, enumerate_roots, phi, phi_inverse, standard_e8_basis, Root, SimpleSystem,
};
use crate::tritangent::{
    classify_tritangent, nodal_signed_count, resultant, species_by_parity, species_by_resultant,
    tritangent_table, Arrangement, BinaryForm, QuadricSide, Species, Q,
};

/// Fixed seed for the randomized checks.
pub const SEED: u64 = 0x5eed_d1e5;
pub const RANDOM_INSTANCES: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    Tables,
    Pairs,
    Matching,
    Tritangents,
    All,
}

impl Group {
    fn ids(self) -> &'static [u8] {
        match self {
            Group::Tables => &[1, 2, 3, 5, 7, 11],
            Group::Pairs => &[4],
            Group::Matching => &[6],
            Group::Tritangents => &[8, 9, 10],
            Group::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11],
        }
    }
}

pub fn run(group: Group) -> Vec<Check> {
    group.ids().iter().map(|&id| run_one(id)).collect()
}

pub fn run_one(id: u8) -> Check {
    let (name, result) = match id {
        1 => ("enumeration", enumeration()),
        2 => ("eigenlattice types", eigen_types()),
        3 => ("real line counts", line_table()),
        4 => ("Bertini pairs", bertini_pairs()),
        5 => ("Smith quotient", smith_quotients()),
        6 => ("matching and cancelation", matching()),
        7 => ("elliptic roots present", elliptic_roots()),
        8 => ("tritangent table", tritangent_rows()),
        9 => ("tritangent classifier", classifier()),
        10 => ("nodal formula", nodal()),
        11 => ("admissible sets", admissible_sets()),
        _ => ("unknown", Err(format!("no check with id {id}"))),
    };
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Check {
        id,
        name,
        passed,
        detail,
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn enumeration() -> Outcome {
    let roots = enumerate_roots();
    let exc = enumerate_exceptional();
    ensure(roots.len() == 240 && exc.len() == 240, || {
        format!("{} roots, {} classes", roots.len(), exc.len())
    })?;
    let k = LatticeVector::canonical();
    let image: BTreeSet<Root> = exc.iter().map(phi).collect();
    ensure(image.len() == 240 && image.iter().eq(roots.iter()), || {
        "phi is not onto the roots".into()
    })?;
    for v in exc {
        ensure(*phi(v).vector() == -k - *v.vector(), || {
            format!("phi({:?})", v)
        })?;
        ensure(phi_inverse(&phi(v)) == *v, || {
            format!("phi inverse at {:?}", v)
        })?;
    }
    Ok("240 roots, 240 exceptional classes, phi bijective".into())
}

fn eigen_types() -> Outcome {
    let mut seen = Vec::new();
    for e in catalog() {
        let t = real_simple_system(&e.structure)
            .dynkin_type()
            .map_err(|x| x.to_string())?;
        ensure(t.to_string() == e.class.eigen_type, || {
            format!("{}: {t}", e.class.label)
        })?;
        seen.push(t.to_string());
    }
    Ok(seen.join(", "))
}

fn all_counts(e: &CatalogEntry) -> Result<Vec<LineCount>, String> {
    let adm = admissible_with_bases(&e.structure).map_err(|x| x.to_string())?;
    adm.iter()
        .map(|(f, _)| line_counts(&e.structure, f).map_err(|x| x.to_string()))
        .collect()
}

fn line_table() -> Outcome {
    let mut n = 0;
    for e in catalog() {
        let lines = real_roots(&e.structure).len();
        ensure(lines == e.class.expected_lines, || {
            format!("{}: {lines} real lines", e.class.label)
        })?;
        for c in all_counts(e)? {
            ensure(
                (c.hyperbolic, c.elliptic) == (e.class.expected_h, e.class.expected_e),
                || format!("{}: h={} e={}", e.class.label, c.hyperbolic, c.elliptic),
            )?;
            n += 1;
        }
    }
    Ok(format!("11 classes, {n} admissible functions"))
}

fn bertini_pairs() -> Outcome {
    let mut pairs = 0;
    for e in catalog()
        .iter()
        .filter(|e| e.class.side == crate::real::Side::Handles)
    {
        let dual = bertini_dual(&e.structure);
        let ranks = real_simple_system(&e.structure).rank() + real_simple_system(&dual).rank();
        ensure(ranks == 8, || {
            format!("{}: ranks sum to {ranks}", e.class.label)
        })?;
        let plus = first_count(&e.structure)?;
        let minus = first_count(&dual)?;
        let s = plus.signed_sum + minus.signed_sum;
        ensure(s == 16, || format!("{}: signed sum {s}", e.class.label))?;
        pairs += 1;
    }
    Ok(format!("{pairs} pairs with signed sum 16 and rank 8"))
}

fn first_count(s: &crate::real::RealStructure) -> Result<LineCount, String> {
    let adm = admissible_with_bases(s).map_err(|x| x.to_string())?;
    let (f, _) = adm.first().ok_or("no admissible function")?;
    line_counts(s, f).map_err(|x| x.to_string())
}

fn smith_quotients() -> Outcome {
    let mut dims = Vec::new();
    for e in catalog() {
        // smith_model cross-checks (1 - sigma)H2 against the 2-kernel.
        let m = smith_model(&e.structure).map_err(|x| format!("{}: {x}", e.class.label))?;
        let d = m.quotient.dimension();
        ensure(d == e.class.expected_h1_dim, || {
            format!("{}: dimension {d}", e.class.label)
        })?;
        dims.push(d.to_string());
    }
    Ok(format!("dimensions {}", dims.join(",")))
}

fn matching() -> Outcome {
    let b = standard_e8_basis();
    for (idx, expected) in [
        (&[0usize, 1, 2, 3, 4, 5, 6, 7][..], 56),
        (&[0, 1, 2, 3, 4, 5, 6][..], 28),
        (&[0, 2, 3, 4, 5, 6][..], 12),
        (&[0, 2, 3, 4][..], 4),
        (&[3][..], 0),
    ] {
        let s = SimpleSystem::from_roots(idx.iter().map(|&i| b[i]).collect())
            .map_err(|x| x.to_string())?;
        let p = pair_matching(&s).map_err(|x| x.to_string())?;
        ensure(p.pairs.len() == expected, || {
            format!("{} pairs for {idx:?}", p.pairs.len())
        })?;
    }
    let mut checked = 0;
    for e in catalog() {
        let rank = real_simple_system(&e.structure).rank() as i64;
        for (f, basis) in admissible_with_bases(&e.structure).map_err(|x| x.to_string())? {
            let p = pair_matching(&basis).map_err(|x| format!("{}: {x}", e.class.label))?;
            let poset = hasse_covers(&basis);
            for (u, v) in &p.pairs {
                let (i, j) = (poset.node_index(u.vector()), poset.node_index(v.vector()));
                ensure(
                    poset
                        .covers
                        .iter()
                        .any(|c| Some(c.lower) == i && Some(c.upper) == j),
                    || format!("{}: pair is not a cover", e.class.label),
                )?;
            }
            ensure(verify_cancelation(&f, &p) == Ok(true), || {
                format!("{}: pair without cancelation", e.class.label)
            })?;
            let s = paired_signed_sum(&f, &p).map_err(|x| x.to_string())?;
            ensure(s == 2 * rank, || {
                format!("{}: paired sum {s}", e.class.label)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (class, function) pairs cancel"))
}

fn elliptic_roots() -> Outcome {
    for e in catalog() {
        let expect = matches!(e.class.eigen_type, "E8" | "E7" | "D6" | "D4+A1" | "D4");
        for (f, _) in admissible_with_bases(&e.structure).map_err(|x| x.to_string())? {
            ensure(has_elliptic_root(&e.structure, &f) == expect, || {
                e.class.label.to_string()
            })?;
        }
    }
    Ok("present exactly for E8, E7, D6, D4+A1, D4".into())
}

const TABLE4: [(usize, usize, usize); 7] = [
    (120, 64, 56),
    (64, 36, 28),
    (32, 20, 12),
    (16, 12, 4),
    (8, 8, 0),
    (24, 16, 8),
    (24, 16, 8),
];

fn tritangent_rows() -> Outcome {
    for (a, want) in Arrangement::ALL.iter().zip(TABLE4) {
        let r = tritangent_table(*a).map_err(|x| x.to_string())?;
        ensure((r.total, r.hyperbolic, r.elliptic) == want, || {
            format!("{}: {:?}", a.code(), (r.total, r.hyperbolic, r.elliptic))
        })?;
        ensure(r.hyperbolic - r.elliptic == 8, || a.code())?;
    }
    Ok("7 arrangements, h - e = 8".into())
}

pub fn random_form(rng: &mut impl Rng, degree: usize, range: i64) -> BinaryForm {
    BinaryForm::new(
        (0..=degree)
            .map(|_| {
                Q::new(
                    rng.gen_range(-range..=range).into(),
                    rng.gen_range(1..=3i64).into(),
                )
            })
            .collect(),
    )
}

/// Random cubic, half of the time a product of rational linear forms.
pub fn random_cubic(rng: &mut impl Rng) -> BinaryForm {
    if rng.gen_bool(0.5) {
        (0..3).fold(BinaryForm::from_ints(&[1]), |acc, _| {
            acc.mul(&random_form(rng, 1, 4))
        })
    } else {
        random_form(rng, 3, 6)
    }
}

pub fn random_substitution(rng: &mut impl Rng) -> [[Q; 2]; 2] {
    loop {
        let m: [[i64; 2]; 2] = [
            [rng.gen_range(-3..=3), rng.gen_range(-3..=3)],
            [rng.gen_range(-3..=3), rng.gen_range(-3..=3)],
        ];
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0 {
            return m.map(|r| r.map(|x| Q::from_integer(x.into())));
        }
    }
}

fn classifier() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut done = 0;
    while done < RANDOM_INSTANCES {
        let p4 = random_form(&mut rng, 4, 6);
        let q3 = random_cubic(&mut rng);
        let res = resultant(&p4, &q3);
        if q3.is_zero() || res.is_zero() {
            continue;
        }
        let (_, pos) = crate::tritangent::real_root_signs(&p4, &q3).map_err(|x| x.to_string())?;
        ensure(species_by_parity(pos) == species_by_resultant(&res), || {
            format!("p4={p4} q3={q3}")
        })?;

        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let p6 = q3.mul(&q3).scale(&Q::from_integer(sign.into()));
        let p2 = random_form(&mut rng, 2, 5);
        let v = classify_tritangent(&p2, &p4, &p6).map_err(|x| x.to_string())?;
        let side = if sign > 0 {
            QuadricSide::Plus
        } else {
            QuadricSide::Minus
        };
        ensure(
            v.side == side && v.species == species_by_resultant(&res),
            || format!("verdict for p4={p4} q3={q3}"),
        )?;
        let other = classify_tritangent(&random_form(&mut rng, 2, 5), &p4, &p6)
            .map_err(|x| x.to_string())?;
        ensure((other.side, other.species) == (v.side, v.species), || {
            "p2 changed the verdict".into()
        })?;
        let a = random_substitution(&mut rng);
        let moved = classify_tritangent(&p2.substitute(&a), &p4.substitute(&a), &p6.substitute(&a))
            .map_err(|x| x.to_string())?;
        ensure((moved.side, moved.species) == (v.side, v.species), || {
            format!("substitution changed p4={p4} q3={q3}")
        })?;
        done += 1;
    }
    let q = BinaryForm::from_ints(&[0, 1, -1, 0]);
    let p6 = q.mul(&q);
    let p2 = BinaryForm::zero(2);
    let examples = [
        (BinaryForm::from_ints(&[1, 0, 2, 0, 1]), Species::Hyperbolic),
        (BinaryForm::from_ints(&[-1, 0, 3, 0, 4]), Species::Elliptic),
    ];
    for (p4, want) in examples {
        let v = classify_tritangent(&p2, &p4, &p6).map_err(|x| x.to_string())?;
        ensure(v.species == want && v.side == QuadricSide::Plus, || {
            format!("worked example p4={p4}")
        })?;
    }
    let q = BinaryForm::from_ints(&[1, 0, -1, 0]);
    let v = classify_tritangent(
        &p2,
        &BinaryForm::from_ints(&[1, 0, 2, 0, 1]),
        &q.mul(&q).neg(),
    )
    .map_err(|x| x.to_string())?;
    ensure(
        v.side == QuadricSide::Minus && v.species == Species::Hyperbolic,
        || "worked example with negative p6".into(),
    )?;
    Ok(format!("{done} random instances agree"))
}

pub fn random_independent_roots(rng: &mut impl Rng, k: usize) -> Vec<Root> {
    let roots = enumerate_roots();
    loop {
        let mut chosen: Vec<Root> = Vec::new();
        for _ in 0..200 {
            if chosen.len() == k {
                break;
            }
            let r = roots[rng.gen_range(0..roots.len())];
            let mut basis = vec![LatticeVector::canonical()];
            basis.extend(chosen.iter().map(|c| *c.vector()));
            basis.push(*r.vector());
            if Sublattice::from_basis(basis).is_ok() {
                chosen.push(r);
            }
        }
        if chosen.len() == k {
            return chosen;
        }
    }
}

fn nodal() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x10);
    for k in 0..=8 {
        for _ in 0..4 {
            let nodes = random_independent_roots(&mut rng, k);
            let n = nodal_signed_count(&nodes).map_err(|x| x.to_string())?;
            ensure(n == 16 - 2 * k as i64, || format!("k={k}: {n}"))?;
        }
    }
    Ok("16 - 2k for k = 0..8".into())
}

fn admissible_sets() -> Outcome {
    let mut sizes = Vec::new();
    for e in catalog() {
        let counts = all_counts(e)?;
        ensure(!counts.is_empty(), || {
            format!("{}: no admissible function", e.class.label)
        })?;
        ensure(counts.windows(2).all(|w| w[0] == w[1]), || {
            format!("{}: counts depend on chi", e.class.label)
        })?;
        sizes.push(format!("{}:{}", e.class.label, counts.len()));
    }
    Ok(sizes.join(" "))
}
