//! Calculus backends: the entailment interface and the free calculus over a
//! disjunctive basis.
//!
//! The free backend decides `Γ |- φ` by a closed-form procedure on flat
//! forms. Its correctness is not taken on faith: the derivation-search
//! oracle in [`crate::calculus::search`] re-derives every verdict at desk
//! scale, and the acceptance suite requires exact agreement.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::formula::{
    Atom, ConjunctionClass, DisjunctiveBasis, FlatForm, Formula, Sequent,
};
use crate::nf::{self, ClassOracle, Mask, Nf};

pub mod derivation;
pub mod search;

/// How a formula sits relative to a calculus: valid, absurd, or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Tautology,
    Contradiction,
    Satisfiable,
}

/// A decision backend for one disjunctive sequent calculus.
///
/// Implementations are immutable after construction and all methods are
/// pure, so a backend can be shared freely across threads.
pub trait Calculus: Sync {
    /// The atom set of the calculus.
    fn atom_universe(&self) -> &BTreeSet<Atom>;

    /// Decide validity of the sequent `gamma |- phi`.
    fn entails(&self, gamma: &BTreeSet<Formula>, phi: &Formula) -> Result<bool>;

    /// Flatten a formula: tautology, contradiction, or a disjoint
    /// disjunction of satisfiable conjunction classes that is mutually
    /// entailing with the input.
    fn flat_form(&self, f: &Formula) -> Result<FlatForm>;

    /// Whether a conjunction class is satisfiable (not contradictory).
    fn class_satisfiable(&self, class: &ConjunctionClass) -> Result<bool>;

    /// Whether a satisfiable conjunction class is irreducible.
    fn is_irreducible(&self, class: &ConjunctionClass) -> Result<bool>;

    /// Canonical representatives of all irreducible conjunction classes, one
    /// per logical-equivalence class, in a deterministic order.
    fn irreducible_classes(&self) -> Result<Vec<ConjunctionClass>>;

    /// An irreducible flat formula mutually entailing with the given
    /// satisfiable formula.
    fn expressive_witness(&self, f: &Formula) -> Result<FlatForm>;

    /// Whether the given atom set is an axiom instance `p1,...,pn |- F` of
    /// this calculus (used to check the `Ax` rule).
    fn is_axiom(&self, atoms: &BTreeSet<Atom>) -> bool;

    /// Short human-readable description for reports and diagnostics.
    fn label(&self) -> String;
}

/// Decide a whole sequent.
pub fn entails_sequent(calc: &dyn Calculus, s: &Sequent) -> Result<bool> {
    calc.entails(&s.antecedent, &s.succedent)
}

/// Classify a formula by the two defining sequents `T |- f` and `f |- F`.
pub fn classify(f: &Formula, calc: &dyn Calculus) -> Result<Classification> {
    let top: BTreeSet<Formula> = [Formula::top()].into_iter().collect();
    if calc.entails(&top, f)? {
        return Ok(Classification::Tautology);
    }
    let just_f: BTreeSet<Formula> = [f.clone()].into_iter().collect();
    if calc.entails(&just_f, &Formula::bottom())? {
        return Ok(Classification::Contradiction);
    }
    Ok(Classification::Satisfiable)
}

/// Flatten a formula through the backend.
pub fn flatten(f: &Formula, calc: &dyn Calculus) -> Result<FlatForm> {
    calc.flat_form(f)
}

/// The freely generated calculus over a disjunctive basis: valid sequents
/// are exactly those derivable from the basis axioms by the ten rules.
#[derive(Debug, Clone)]
pub struct FreeCalculus {
    basis: DisjunctiveBasis,
    atoms: BTreeSet<Atom>,
    index: BTreeMap<Atom, u8>,
    axiom_masks: Vec<Mask>,
}

struct FreeOracle<'a> {
    axiom_masks: &'a [Mask],
}

impl ClassOracle for FreeOracle<'_> {
    fn contradictory(&self, class: Mask) -> bool {
        self.axiom_masks.iter().any(|ax| ax & class == *ax)
    }
}

impl FreeCalculus {
    pub fn new(basis: DisjunctiveBasis) -> FreeCalculus {
        assert!(
            basis.atoms().len() <= nf::MAX_ATOMS,
            "free calculus supports at most {} atoms",
            nf::MAX_ATOMS
        );
        let index = nf::index_atoms(basis.atoms().iter());
        let axiom_masks = basis
            .axioms()
            .iter()
            .map(|ax| {
                let mut m = 0;
                for a in ax {
                    m |= 1 << index[a];
                }
                m
            })
            .collect();
        FreeCalculus {
            atoms: basis.atoms().clone(),
            basis,
            index,
            axiom_masks,
        }
    }

    pub fn basis(&self) -> &DisjunctiveBasis {
        &self.basis
    }

    fn oracle(&self) -> FreeOracle<'_> {
        FreeOracle { axiom_masks: &self.axiom_masks }
    }

    fn nf(&self, f: &Formula) -> Result<Nf> {
        nf::flatten_nf(f, &self.index, &self.oracle())
    }

    /// Normal form of a whole antecedent (empty set flattens to `T`).
    fn antecedent_nf(&self, gamma: &BTreeSet<Formula>) -> Result<Nf> {
        let oracle = self.oracle();
        let mut acc = Nf::Taut;
        for g in gamma {
            let next = nf::flatten_nf(g, &self.index, &oracle)?;
            acc = nf::conj_nf(&acc, &next, &oracle);
            if acc == Nf::Contra {
                break;
            }
        }
        Ok(acc)
    }
}

impl Calculus for FreeCalculus {
    fn atom_universe(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    fn entails(&self, gamma: &BTreeSet<Formula>, phi: &Formula) -> Result<bool> {
        let antecedent = self.antecedent_nf(gamma)?;
        let succedent = self.nf(phi)?;
        Ok(nf::entails_nf(&antecedent, &succedent))
    }

    fn flat_form(&self, f: &Formula) -> Result<FlatForm> {
        Ok(nf::nf_to_flat_form(&self.nf(f)?, &self.index))
    }

    fn class_satisfiable(&self, class: &ConjunctionClass) -> Result<bool> {
        let mask = nf::class_to_mask(class, &self.index)?;
        Ok(!self.oracle().contradictory(mask))
    }

    fn is_irreducible(&self, class: &ConjunctionClass) -> Result<bool> {
        if !self.class_satisfiable(class)? {
            return Err(Error::NotAConjunction(format!(
                "`{class}` is contradictory in {}",
                self.label()
            )));
        }
        // In a freely generated calculus every satisfiable conjunction is
        // irreducible. This is a consequence of the flat-form decision
        // procedure; the test suite cross-checks it exhaustively at small
        // scale against derivation search.
        Ok(true)
    }

    fn irreducible_classes(&self) -> Result<Vec<ConjunctionClass>> {
        let n = self.atoms.len();
        if n > 12 {
            return Err(Error::SizeLimit(format!(
                "enumerating conjunction classes over {n} atoms"
            )));
        }
        let oracle = self.oracle();
        let mut out = Vec::new();
        for mask in 1..(1u32 << n) {
            if !oracle.contradictory(mask) {
                out.push(nf::mask_to_class(mask, &self.index));
            }
        }
        out.sort();
        Ok(out)
    }

    fn expressive_witness(&self, f: &Formula) -> Result<FlatForm> {
        match self.flat_form(f)? {
            FlatForm::Flat(classes) => Ok(FlatForm::Flat(classes)),
            other => Err(Error::PreconditionViolated(format!(
                "expressive witness requires a satisfiable formula, got `{}`",
                match other {
                    FlatForm::TautologyEquivalent => "a tautology",
                    _ => "a contradiction",
                }
            ))),
        }
    }

    fn is_axiom(&self, atoms: &BTreeSet<Atom>) -> bool {
        self.basis.axioms().contains(atoms)
    }

    fn label(&self) -> String {
        let atoms: Vec<&str> = self.atoms.iter().map(Atom::name).collect();
        format!("free({})+{}ax", atoms.join(","), self.basis.axioms().len())
    }
}
