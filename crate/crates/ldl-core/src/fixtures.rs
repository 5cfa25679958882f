//! Deterministic instance suite: named posets, a family of disjunctive
//! bases, and exhaustive enumeration of small posets.
//!
//! Everything here is reproducible from code so the acceptance suite and
//! the CLI agree on what "the fixtures" are.

use crate::calculus::FreeCalculus;
use crate::error::Result;
use crate::formula::DisjunctiveBasis;
use crate::order::FinitePoset;

/// The one-point domain.
pub fn point() -> FinitePoset {
    FinitePoset::from_covers(vec!["bot".into()], &[]).unwrap()
}

/// The two-chain `bot < a`.
pub fn chain2() -> FinitePoset {
    FinitePoset::from_covers(vec!["bot".into(), "a".into()], &[(0, 1)]).unwrap()
}

/// The three-chain `bot < a < b`.
pub fn chain3() -> FinitePoset {
    FinitePoset::from_covers(vec!["bot".into(), "a".into(), "b".into()], &[(0, 1), (1, 2)])
        .unwrap()
}

/// The flat domain `bot < a, b` with `a`, `b` incomparable.
pub fn flat3() -> FinitePoset {
    FinitePoset::from_covers(vec!["bot".into(), "a".into(), "b".into()], &[(0, 1), (0, 2)])
        .unwrap()
}

/// The flat domain `bot < a, b, c`.
pub fn flat4() -> FinitePoset {
    FinitePoset::from_covers(
        vec!["bot".into(), "a".into(), "b".into(), "c".into()],
        &[(0, 1), (0, 2), (0, 3)],
    )
    .unwrap()
}

/// The diamond lattice `bot < a, b < top`.
pub fn diamond() -> FinitePoset {
    FinitePoset::from_covers(
        vec!["bot".into(), "a".into(), "b".into(), "top".into()],
        &[(0, 1), (0, 2), (1, 3), (2, 3)],
    )
    .unwrap()
}

/// The M-shaped L-domain `bot < a, b; a, b < c; a, b < d`: the pair `a, b`
/// has two minimal upper bounds, so it is an L-domain that is not a lattice.
pub fn m_poset() -> FinitePoset {
    FinitePoset::from_covers(
        vec!["bot".into(), "a".into(), "b".into(), "c".into(), "d".into()],
        &[(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4)],
    )
    .unwrap()
}

/// Named poset fixtures (all L-domains).
pub fn poset_fixtures() -> Vec<(&'static str, FinitePoset)> {
    vec![
        ("point", point()),
        ("chain2", chain2()),
        ("chain3", chain3()),
        ("flat3", flat3()),
        ("flat4", flat4()),
        ("diamond", diamond()),
        ("m_poset", m_poset()),
    ]
}

/// The L-domain fixtures with at most four elements, for the morphism
/// criteria.
pub fn small_domain_fixtures() -> Vec<(&'static str, FinitePoset)> {
    poset_fixtures()
        .into_iter()
        .filter(|(_, p)| p.len() <= 4)
        .collect()
}

/// The fixture bases: every basis over one and two atoms, and a spread of
/// three- and four-atom bases with varying axiom sets. At least twenty
/// bases, none with more than four atoms.
pub fn basis_fixtures() -> Vec<(String, DisjunctiveBasis)> {
    let mut out: Vec<(String, DisjunctiveBasis)> = Vec::new();
    let mut push = |name: &str, basis: Result<DisjunctiveBasis>| {
        out.push((name.to_string(), basis.expect("fixture basis is well-formed")));
    };

    // Zero and one atom.
    push("empty", DisjunctiveBasis::from_names::<&str>(&[], &[]));
    push("p", DisjunctiveBasis::from_names::<&str>(&["p"], &[]));
    push("p_refuted", DisjunctiveBasis::from_names(&["p"], &[&["p"]]));

    // All axiom sets over two atoms (axioms are nonempty atom subsets).
    push("pq_free", DisjunctiveBasis::from_names::<&str>(&["p", "q"], &[]));
    push("pq_disjoint", DisjunctiveBasis::from_names(&["p", "q"], &[&["p", "q"]]));
    push("pq_p_refuted", DisjunctiveBasis::from_names(&["p", "q"], &[&["p"]]));
    push(
        "pq_p_refuted_disjoint",
        DisjunctiveBasis::from_names(&["p", "q"], &[&["p"], &["p", "q"]]),
    );
    push(
        "pq_both_refuted",
        DisjunctiveBasis::from_names(&["p", "q"], &[&["p"], &["q"]]),
    );

    // Three atoms.
    push("pqr_free", DisjunctiveBasis::from_names::<&str>(&["p", "q", "r"], &[]));
    push("pqr_pq", DisjunctiveBasis::from_names(&["p", "q", "r"], &[&["p", "q"]]));
    push(
        "pqr_pq_qr",
        DisjunctiveBasis::from_names(&["p", "q", "r"], &[&["p", "q"], &["q", "r"]]),
    );
    push(
        "pqr_pairwise",
        DisjunctiveBasis::from_names(
            &["p", "q", "r"],
            &[&["p", "q"], &["q", "r"], &["p", "r"]],
        ),
    );
    push("pqr_triple", DisjunctiveBasis::from_names(&["p", "q", "r"], &[&["p", "q", "r"]]));
    push(
        "pqr_mixed",
        DisjunctiveBasis::from_names(&["p", "q", "r"], &[&["p", "q"], &["p", "q", "r"]]),
    );
    push(
        "pqr_r_refuted",
        DisjunctiveBasis::from_names(&["p", "q", "r"], &[&["r"], &["p", "q"]]),
    );

    // Four atoms.
    push("pqrs_free", DisjunctiveBasis::from_names::<&str>(&["p", "q", "r", "s"], &[]));
    push(
        "pqrs_pq_rs",
        DisjunctiveBasis::from_names(&["p", "q", "r", "s"], &[&["p", "q"], &["r", "s"]]),
    );
    push(
        "pqrs_chainwise",
        DisjunctiveBasis::from_names(
            &["p", "q", "r", "s"],
            &[&["p", "q"], &["q", "r"], &["r", "s"]],
        ),
    );
    push(
        "pqrs_pairwise",
        DisjunctiveBasis::from_names(
            &["p", "q", "r", "s"],
            &[
                &["p", "q"], &["p", "r"], &["p", "s"],
                &["q", "r"], &["q", "s"], &["r", "s"],
            ],
        ),
    );
    push(
        "pqrs_quad",
        DisjunctiveBasis::from_names(&["p", "q", "r", "s"], &[&["p", "q", "r", "s"]]),
    );
    push(
        "pqrs_mixed",
        DisjunctiveBasis::from_names(
            &["p", "q", "r", "s"],
            &[&["p", "q"], &["p", "r", "s"], &["q", "s"]],
        ),
    );
    push(
        "pqrs_s_refuted",
        DisjunctiveBasis::from_names(&["p", "q", "r", "s"], &[&["s"], &["p", "q", "r"]]),
    );

    out
}

/// The fixture calculi as free backends.
pub fn calculus_fixtures() -> Vec<(String, FreeCalculus)> {
    basis_fixtures()
        .into_iter()
        .map(|(name, basis)| (name, FreeCalculus::new(basis)))
        .collect()
}

/// All bases over the given atom names with at most `max_axioms` axioms.
/// Axiom candidates are the nonempty subsets of the atom set; bases are the
/// subsets of candidates of size up to the cap.
pub fn all_bases(atom_names: &[&str], max_axioms: usize) -> Vec<DisjunctiveBasis> {
    let n = atom_names.len();
    let candidates: Vec<Vec<&str>> = (1u32..(1 << n))
        .map(|mask| {
            (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| atom_names[i])
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let k = candidates.len();
    for choice in 0u32..(1 << k) {
        if (choice.count_ones() as usize) > max_axioms {
            continue;
        }
        let axioms: Vec<&[&str]> = (0..k)
            .filter(|&i| choice & (1 << i) != 0)
            .map(|i| candidates[i].as_slice())
            .collect();
        out.push(
            DisjunctiveBasis::from_names(atom_names, &axioms)
                .expect("enumerated basis is well-formed"),
        );
    }
    out
}

/// Exhaustively enumerate all labeled posets on `n` elements (`n <= 5`),
/// presented as `FinitePoset` values. Element names are `e0`, `e1`, ....
pub fn all_posets(n: usize) -> Vec<FinitePoset> {
    assert!((1..=5).contains(&n), "exhaustive poset enumeration is for 1..=5 elements");
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    // Candidate strict relations on ordered pairs (i, j), i != j.
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let k = pairs.len();
    let mut out = Vec::new();
    'relations: for choice in 0u32..(1 << k) {
        // Build up-masks with reflexivity.
        let mut up = vec![0u32; n];
        for (i, mask) in up.iter_mut().enumerate() {
            *mask = 1 << i;
        }
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            if choice & (1 << bit) != 0 {
                up[i] |= 1 << j;
            }
        }
        // Antisymmetry.
        for i in 0..n {
            for j in (i + 1)..n {
                if up[i] & (1 << j) != 0 && up[j] & (1 << i) != 0 {
                    continue 'relations;
                }
            }
        }
        // Transitivity (exact: closure must not add anything).
        for i in 0..n {
            for j in 0..n {
                if up[i] & (1 << j) != 0 && up[j] & !up[i] != 0 {
                    continue 'relations;
                }
            }
        }
        let leq_pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| {
                let mask = up[i];
                (0..n).filter(move |&j| mask & (1 << j) != 0).map(move |j| (i, j))
            })
            .collect();
        out.push(
            FinitePoset::new(names.clone(), &leq_pairs).expect("enumerated relation is a poset"),
        );
    }
    out
}
