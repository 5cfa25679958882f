//! Property tests for the syntax layer and the flattening engine.

use std::collections::BTreeSet;

use proptest::prelude::*;

use ldl_core::calculus::{classify, Calculus, Classification, FreeCalculus};
use ldl_core::formula::{
    parse_formula, Atom, ConjunctionClass, DisjunctiveBasis, FlatForm, Formula,
};

fn fixture_calculus() -> FreeCalculus {
    FreeCalculus::new(
        DisjunctiveBasis::from_names(&["p", "q", "r"], &[&["p", "q"], &["q", "r"]]).unwrap(),
    )
}

/// Strategy for well-formed formulas over the fixture calculus. Disjunction
/// attempts that fail the disjointness certificate degrade to conjunctions,
/// mirroring how any client would construct formulas.
fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::top()),
        Just(Formula::bottom()),
        Just(Formula::atom(Atom::new("p").unwrap())),
        Just(Formula::atom(Atom::new("q").unwrap())),
        Just(Formula::atom(Atom::new("r").unwrap())),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::conj(l, r)),
            prop::collection::vec(inner, 2..4).prop_map(|parts| {
                let calc = fixture_calculus();
                Formula::disj(parts.clone(), &calc)
                    .unwrap_or_else(|_| Formula::conj_all(&parts))
            }),
        ]
    })
}

proptest! {
    /// parse(print(f)) is structurally f for every constructible formula.
    #[test]
    fn print_parse_round_trip(f in arb_formula()) {
        let calc = fixture_calculus();
        let printed = f.to_string();
        let reparsed = parse_formula(&printed, &calc).unwrap();
        prop_assert_eq!(f, reparsed);
    }

    /// Flattening is sound: the flat form and the input entail each other,
    /// and the flat verdict agrees with classification.
    #[test]
    fn flatten_is_mutually_entailing(f in arb_formula()) {
        let calc = fixture_calculus();
        let flat = calc.flat_form(&f).unwrap();
        let classification = classify(&f, &calc).unwrap();
        match (&flat, classification) {
            (FlatForm::TautologyEquivalent, Classification::Tautology) => {}
            (FlatForm::ContradictionEquivalent, Classification::Contradiction) => {}
            (FlatForm::Flat(_), Classification::Satisfiable) => {}
            other => prop_assert!(false, "verdicts disagree: {:?}", other),
        }
        let flat_formula = flat.to_formula(&calc).unwrap();
        let fwd: BTreeSet<Formula> = [f.clone()].into_iter().collect();
        prop_assert!(calc.entails(&fwd, &flat_formula).unwrap());
        let bwd: BTreeSet<Formula> = [flat_formula].into_iter().collect();
        prop_assert!(calc.entails(&bwd, &f).unwrap());
    }

    /// Any disjunction that survives construction has pairwise
    /// contradictory parts under the backend that certified it.
    #[test]
    fn disjunction_parts_stay_disjoint(f in arb_formula()) {
        let calc = fixture_calculus();
        fn walk(f: &Formula, calc: &FreeCalculus) -> Result<(), TestCaseError> {
            if let ldl_core::formula::FormulaKind::Disj(parts) = f.kind() {
                for (i, a) in parts.iter().enumerate() {
                    for b in &parts[i + 1..] {
                        let gamma: BTreeSet<Formula> =
                            [a.clone(), b.clone()].into_iter().collect();
                        prop_assert!(calc.entails(&gamma, &Formula::bottom()).unwrap());
                    }
                }
                for p in parts {
                    walk(p, calc)?;
                }
            } else if let ldl_core::formula::FormulaKind::Conj(l, r) = f.kind() {
                walk(l, calc)?;
                walk(r, calc)?;
            }
            Ok(())
        }
        walk(&f, &calc)?;
    }

    /// Conjunction classes are invariant under reordering and duplication
    /// of their atoms.
    #[test]
    fn conjunction_class_canonicalization(
        mut names in prop::collection::vec(prop_oneof![Just("p"), Just("q"), Just("r")], 1..6),
        seed in any::<u64>(),
    ) {
        let atoms = |ns: &[&str]| -> Vec<Atom> {
            ns.iter().map(|n| Atom::new(*n).unwrap()).collect()
        };
        let class_a = ConjunctionClass::new(atoms(&names)).unwrap();
        // Shuffle deterministically and duplicate one atom.
        let k = (seed as usize) % names.len();
        names.rotate_left(k);
        let dup = names[0];
        names.push(dup);
        let class_b = ConjunctionClass::new(atoms(&names)).unwrap();
        prop_assert_eq!(class_a, class_b);
    }
}
