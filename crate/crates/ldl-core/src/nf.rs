//! Internal flattening engine.
//!
//! Conjunction classes over a fixed backend are represented as bitmasks over
//! the backend's atom order, and flat forms as sorted mask lists. Both the
//! free and the semantic backend drive the same structural algorithm: rewrite
//! by T/F absorption, distribute `&` over `|` dropping contradictory
//! products, and splice nested `|` groups. The only backend-specific
//! ingredient is the contradiction test on a single class.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formula::{Atom, ConjunctionClass, FlatForm, Formula, FormulaKind};

/// Atom-set bitmask; backends are capped at 32 atoms.
pub(crate) type Mask = u32;

pub(crate) const MAX_ATOMS: usize = 32;

/// Backend hook: decides whether the conjunction with the given atom mask is
/// contradictory. Incompatibility of two classes is contradiction of their
/// union, which is exact for both backends.
pub(crate) trait ClassOracle {
    fn contradictory(&self, class: Mask) -> bool;
}

/// Normal form of a formula relative to an oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Nf {
    Taut,
    Contra,
    /// Sorted list of distinct, pairwise incompatible, satisfiable masks.
    Flat(Vec<Mask>),
}

/// Index atoms in sorted order. Shared by every backend so that masks and
/// public classes translate deterministically.
pub(crate) fn index_atoms<'a>(atoms: impl Iterator<Item = &'a Atom>) -> BTreeMap<Atom, u8> {
    atoms
        .enumerate()
        .map(|(i, a)| (a.clone(), i as u8))
        .collect()
}

pub(crate) fn class_to_mask(
    class: &ConjunctionClass,
    index: &BTreeMap<Atom, u8>,
) -> Result<Mask> {
    let mut mask = 0;
    for a in class.atoms() {
        let bit = index
            .get(a)
            .ok_or_else(|| Error::UnknownAtom(a.name().to_string()))?;
        mask |= 1 << bit;
    }
    Ok(mask)
}

pub(crate) fn mask_to_class(mask: Mask, index: &BTreeMap<Atom, u8>) -> ConjunctionClass {
    let atoms = index
        .iter()
        .filter(|(_, bit)| mask & (1 << **bit) != 0)
        .map(|(a, _)| a.clone());
    ConjunctionClass::new(atoms).expect("nonzero mask yields a nonempty class")
}

/// Flatten a formula to its normal form. Structural recursion, so it
/// terminates on every input.
pub(crate) fn flatten_nf(
    f: &Formula,
    index: &BTreeMap<Atom, u8>,
    oracle: &dyn ClassOracle,
) -> Result<Nf> {
    Ok(match f.kind() {
        FormulaKind::Top => Nf::Taut,
        FormulaKind::Bottom => Nf::Contra,
        FormulaKind::Atom(a) => {
            let bit = index
                .get(a)
                .ok_or_else(|| Error::UnknownAtom(a.name().to_string()))?;
            let mask = 1 << bit;
            if oracle.contradictory(mask) {
                Nf::Contra
            } else {
                Nf::Flat(vec![mask])
            }
        }
        FormulaKind::Conj(l, r) => {
            let left = flatten_nf(l, index, oracle)?;
            let right = flatten_nf(r, index, oracle)?;
            conj_nf(&left, &right, oracle)
        }
        FormulaKind::Disj(parts) => {
            let mut masks: Vec<Mask> = Vec::new();
            let mut saw_taut = false;
            for p in parts {
                match flatten_nf(p, index, oracle)? {
                    // A tautologous part forces every other part to be
                    // contradictory (they are pairwise disjoint), so the
                    // whole disjunction is a tautology.
                    Nf::Taut => saw_taut = true,
                    Nf::Contra => {}
                    Nf::Flat(ms) => masks.extend(ms),
                }
            }
            if saw_taut {
                Nf::Taut
            } else if masks.is_empty() {
                Nf::Contra
            } else {
                masks.sort_unstable();
                masks.dedup();
                Nf::Flat(masks)
            }
        }
    })
}

/// Conjunction of two normal forms: T absorbs, F dominates, flat lists
/// multiply out with contradictory products dropped.
pub(crate) fn conj_nf(left: &Nf, right: &Nf, oracle: &dyn ClassOracle) -> Nf {
    match (left, right) {
        (Nf::Contra, _) | (_, Nf::Contra) => Nf::Contra,
        (Nf::Taut, other) | (other, Nf::Taut) => other.clone(),
        (Nf::Flat(ms), Nf::Flat(ns)) => {
            let mut products: Vec<Mask> = Vec::with_capacity(ms.len() * ns.len());
            for m in ms {
                for n in ns {
                    let p = m | n;
                    if !oracle.contradictory(p) {
                        products.push(p);
                    }
                }
            }
            if products.is_empty() {
                Nf::Contra
            } else {
                products.sort_unstable();
                products.dedup();
                Nf::Flat(products)
            }
        }
    }
}

/// The entailment decision on normal forms: a contradictory antecedent
/// entails everything; a tautologous antecedent entails exactly the
/// tautologies; otherwise every antecedent class must refine some succedent
/// class (class containment, i.e. superset of atoms).
pub(crate) fn entails_nf(antecedent: &Nf, succedent: &Nf) -> bool {
    match antecedent {
        Nf::Contra => true,
        Nf::Taut => matches!(succedent, Nf::Taut),
        Nf::Flat(ms) => match succedent {
            Nf::Taut => true,
            Nf::Contra => false,
            Nf::Flat(ns) => ms
                .iter()
                .all(|m| ns.iter().any(|n| n & m == *n)),
        },
    }
}

pub(crate) fn nf_to_flat_form(nf: &Nf, index: &BTreeMap<Atom, u8>) -> FlatForm {
    match nf {
        Nf::Taut => FlatForm::TautologyEquivalent,
        Nf::Contra => FlatForm::ContradictionEquivalent,
        Nf::Flat(masks) => {
            let mut classes: Vec<ConjunctionClass> =
                masks.iter().map(|m| mask_to_class(*m, index)).collect();
            classes.sort();
            FlatForm::Flat(classes)
        }
    }
}
