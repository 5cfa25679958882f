//! Law checks for the entailment decision: closure under the ten rule
//! schemas on sampled instances, the conjunction/disjunction laws, and the
//! exhaustive small-scale irreducibility check for free calculi.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ldl_core::calculus::{Calculus, FreeCalculus};
use ldl_core::fixtures;
use ldl_core::formula::{Formula, FormulaKind, Sequent};
use ldl_core::states::FormulaUniverse;
use ldl_core::suite::random_formula;

const SEED: u64 = 0xac1d;

fn sample_calculi() -> Vec<FreeCalculus> {
    let mut out = fixtures::all_bases(&["p", "q"], 2);
    out.extend(fixtures::all_bases(&["p", "q", "r"], 2));
    out.into_iter().map(FreeCalculus::new).collect()
}

fn entails(calc: &FreeCalculus, gamma: &[Formula], phi: &Formula) -> bool {
    let set: BTreeSet<Formula> = gamma.iter().cloned().collect();
    calc.entails(&set, phi).unwrap()
}

fn random_context(rng: &mut ChaCha8Rng, calc: &FreeCalculus) -> Vec<Formula> {
    let len = rng.random_range(0..=2usize);
    (0..len)
        .map(|_| {
            let budget = rng.random_range(1..=5);
            random_formula(rng, calc, budget)
        })
        .collect()
}

/// Try to produce a pairwise-disjoint family of 2..=3 formulas.
fn random_disjoint_family(rng: &mut ChaCha8Rng, calc: &FreeCalculus) -> Option<Vec<Formula>> {
    for _ in 0..8 {
        let len = rng.random_range(2..=3usize);
        let parts: Vec<Formula> = (0..len)
            .map(|_| {
                let budget = rng.random_range(1..=4);
                random_formula(rng, calc, budget)
            })
            .collect();
        if let Ok(f) = Formula::disj(parts, calc) {
            if let FormulaKind::Disj(parts) = f.kind() {
                return Some(parts.clone());
            }
        }
    }
    None
}

/// For 1000 sampled instances of each rule schema whose premises the
/// decision procedure declares valid, the conclusion must be declared
/// valid too.
#[test]
fn rule_closure_on_sampled_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let calculi = sample_calculi();
    let per_rule = 1000;

    // (Ax): every axiom instance is valid.
    let mut done = 0;
    'ax: loop {
        for calc in &calculi {
            for axiom in calc.basis().axioms() {
                let gamma: Vec<Formula> =
                    axiom.iter().cloned().map(Formula::atom).collect();
                assert!(entails(calc, &gamma, &Formula::bottom()), "(Ax) instance rejected");
                done += 1;
                if done >= per_rule {
                    break 'ax;
                }
            }
        }
        if calculi.iter().all(|c| c.basis().axioms().is_empty()) {
            break;
        }
    }

    // (Id): every formula entails itself.
    for i in 0..per_rule {
        let calc = &calculi[i % calculi.len()];
        let f = random_formula(&mut rng, calc, 6);
        assert!(entails(calc, std::slice::from_ref(&f), &f), "(Id) instance rejected");
    }

    // (RT): the empty context proves T.
    for calc in &calculi {
        assert!(entails(calc, &[], &Formula::top()), "(RT) instance rejected");
    }

    // (LF): F proves anything.
    for i in 0..per_rule {
        let calc = &calculi[i % calculi.len()];
        let f = random_formula(&mut rng, calc, 6);
        assert!(entails(calc, &[Formula::bottom()], &f), "(LF) instance rejected");
    }

    // (Lwk): weakening preserves validity.
    let mut done = 0;
    while done < per_rule {
        let calc = &calculi[done % calculi.len()];
        let gamma = random_context(&mut rng, calc);
        let phi = random_formula(&mut rng, calc, 5);
        if !entails(calc, &gamma, &phi) {
            continue;
        }
        let mut weakened = gamma.clone();
        weakened.push(random_formula(&mut rng, calc, 5));
        assert!(entails(calc, &weakened, &phi), "(Lwk) broke validity");
        done += 1;
    }

    // (Cut): valid premises give a valid conclusion.
    let mut done = 0;
    while done < per_rule {
        let calc = &calculi[done % calculi.len()];
        let gamma = random_context(&mut rng, calc);
        let cut = random_formula(&mut rng, calc, 5);
        let psi = random_formula(&mut rng, calc, 5);
        let mut delta_cut = random_context(&mut rng, calc);
        delta_cut.push(cut.clone());
        if !entails(calc, &gamma, &cut) || !entails(calc, &delta_cut, &psi) {
            continue;
        }
        let mut conclusion = gamma.clone();
        conclusion.extend(delta_cut.into_iter().filter(|f| *f != cut));
        assert!(entails(calc, &conclusion, &psi), "(Cut) broke validity");
        done += 1;
    }

    // (LConj) both directions via the conjunction law below; here the rule
    // direction: from Gamma, phi, psi |- theta infer Gamma, phi&psi |- theta.
    let mut done = 0;
    while done < per_rule {
        let calc = &calculi[done % calculi.len()];
        let mut gamma = random_context(&mut rng, calc);
        let phi = random_formula(&mut rng, calc, 4);
        let psi = random_formula(&mut rng, calc, 4);
        let theta = random_formula(&mut rng, calc, 5);
        gamma.push(phi.clone());
        gamma.push(psi.clone());
        if !entails(calc, &gamma, &theta) {
            continue;
        }
        gamma.pop();
        gamma.pop();
        gamma.push(Formula::conj(phi, psi));
        assert!(entails(calc, &gamma, &theta), "(LConj) broke validity");
        done += 1;
    }

    // (RConj): two valid premises give the conjunction.
    let mut done = 0;
    while done < per_rule {
        let calc = &calculi[done % calculi.len()];
        let gamma = random_context(&mut rng, calc);
        let delta = random_context(&mut rng, calc);
        let phi = random_formula(&mut rng, calc, 4);
        let psi = random_formula(&mut rng, calc, 4);
        if !entails(calc, &gamma, &phi) || !entails(calc, &delta, &psi) {
            continue;
        }
        let mut union = gamma.clone();
        union.extend(delta);
        assert!(
            entails(calc, &union, &Formula::conj(phi, psi)),
            "(RConj) broke validity"
        );
        done += 1;
    }

    // (LDisj): all branch premises valid gives the disjunction premise.
    let mut done = 0;
    while done < per_rule {
        let calc = &calculi[done % calculi.len()];
        let Some(parts) = random_disjoint_family(&mut rng, calc) else { continue };
        let gamma = random_context(&mut rng, calc);
        let theta = random_formula(&mut rng, calc, 5);
        let all_branches_valid = parts.iter().all(|part| {
            let mut branch = gamma.clone();
            branch.push(part.clone());
            entails(calc, &branch, &theta)
        });
        if !all_branches_valid {
            continue;
        }
        let disj = Formula::disj(parts, calc).unwrap();
        let mut conclusion = gamma.clone();
        conclusion.push(disj);
        assert!(entails(calc, &conclusion, &theta), "(LDisj) broke validity");
        done += 1;
    }

    // (RDisj): one valid disjunct premise gives the disjunction.
    let mut done = 0;
    while done < per_rule {
        let calc = &calculi[done % calculi.len()];
        let Some(parts) = random_disjoint_family(&mut rng, calc) else { continue };
        let gamma = random_context(&mut rng, calc);
        let hit = parts.iter().any(|part| entails(calc, &gamma, part));
        if !hit {
            continue;
        }
        let disj = Formula::disj(parts, calc).unwrap();
        assert!(entails(calc, &gamma, &disj), "(RDisj) broke validity");
        done += 1;
    }
}

/// The conjunction laws as two-way equivalences, plus the disjunction law:
/// with pairwise-disjoint parts, a disjunction on the left behaves as the
/// conjunction of its branches.
#[test]
fn structural_laws_are_equivalences() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED.wrapping_add(1));
    let calculi = sample_calculi();
    let samples = 1500;

    for i in 0..samples {
        let calc = &calculi[i % calculi.len()];
        let gamma = random_context(&mut rng, calc);
        let phi = random_formula(&mut rng, calc, 4);
        let psi = random_formula(&mut rng, calc, 4);
        let theta = random_formula(&mut rng, calc, 5);

        // Gamma, phi, psi |- theta iff Gamma, phi & psi |- theta.
        let mut split = gamma.clone();
        split.push(phi.clone());
        split.push(psi.clone());
        let mut joined = gamma.clone();
        joined.push(Formula::conj(phi.clone(), psi.clone()));
        assert_eq!(
            entails(calc, &split, &theta),
            entails(calc, &joined, &theta),
            "left conjunction law failed"
        );

        // Gamma |- phi and Gamma |- psi iff Gamma |- phi & psi.
        let both = entails(calc, &gamma, &phi) && entails(calc, &gamma, &psi);
        assert_eq!(
            both,
            entails(calc, &gamma, &Formula::conj(phi, psi)),
            "right conjunction law failed"
        );
    }

    let mut done = 0;
    while done < samples / 3 {
        let calc = &calculi[done % calculi.len()];
        let Some(parts) = random_disjoint_family(&mut rng, calc) else { continue };
        let gamma = random_context(&mut rng, calc);
        let theta = random_formula(&mut rng, calc, 5);
        let branchwise = parts.iter().all(|part| {
            let mut branch = gamma.clone();
            branch.push(part.clone());
            entails(calc, &branch, &theta)
        });
        let disj = Formula::disj(parts, calc).unwrap();
        let mut with_disj = gamma.clone();
        with_disj.push(disj);
        assert_eq!(
            branchwise,
            entails(calc, &with_disj, &theta),
            "left disjunction law failed"
        );
        done += 1;
    }
}

/// In a free calculus every satisfiable conjunction is irreducible:
/// whenever it entails a disjoint disjunction from the bounded universe,
/// it entails one of the disjuncts. Checked exhaustively over all bases
/// with up to three atoms and two axioms.
#[test]
fn free_satisfiable_conjunctions_are_irreducible_exhaustively() {
    for basis in fixtures::all_bases(&["p", "q", "r"], 2) {
        let calc = FreeCalculus::new(basis);
        let universe = FormulaUniverse::enumerate(&calc, 6, 500_000).unwrap();
        let classes = calc.irreducible_classes().unwrap();
        for class in &classes {
            assert!(calc.is_irreducible(class).unwrap());
            let mu = class.to_formula();
            let gamma: BTreeSet<Formula> = [mu].into_iter().collect();
            for f in universe.formulas() {
                let FormulaKind::Disj(parts) = f.kind() else { continue };
                if !calc.entails(&gamma, f).unwrap() {
                    continue;
                }
                let selected = parts
                    .iter()
                    .any(|part| calc.entails(&gamma, part).unwrap());
                assert!(
                    selected,
                    "`{class}` entails `{f}` but no single disjunct in {}",
                    calc.label()
                );
            }
        }
    }
}

/// Named examples that pin the oracle behavior, re-run through
/// the public sequent interface.
#[test]
fn named_sequent_examples() {
    let basis = fixtures::all_bases(&["p", "q"], 2)
        .into_iter()
        .find(|b| b.axioms().len() == 1 && b.axioms().iter().next().unwrap().len() == 2)
        .unwrap();
    let calc = FreeCalculus::new(basis);
    let check = |text: &str, expected: bool| {
        let s = ldl_core::formula::parse_sequent(text, &calc).unwrap();
        assert_eq!(
            calc.entails(&s.antecedent, &s.succedent).unwrap(),
            expected,
            "`{text}`"
        );
    };
    check("p, q |- F", true);
    check("|- T", true);
    check("|- p", false);
    check("|- p | q", false);
    check("p |- p | q", true);
    check("p & q |- F", true);
    check("T |- p", false);
    check("F |- p & q", true);
}

/// Derivation search agrees with the decision procedure on the handful of
/// sequents with pinned expected shapes.
#[test]
fn named_derivation_examples() {
    use ldl_core::calculus::derivation::{check_derivation, Rule};
    use ldl_core::calculus::search::{search_derivation, SearchConfig};

    let basis = fixtures::all_bases(&["p", "q"], 2)
        .into_iter()
        .find(|b| b.axioms().len() == 1 && b.axioms().iter().next().unwrap().len() == 2)
        .unwrap();
    let calc = FreeCalculus::new(basis);
    let cfg = SearchConfig::default();

    let find = |text: &str| -> Option<ldl_core::calculus::derivation::Derivation> {
        let goal: Sequent = ldl_core::formula::parse_sequent(text, &calc).unwrap();
        let found = search_derivation(&calc, &goal, &cfg).unwrap();
        if let Some(d) = &found {
            check_derivation(&calc, d).unwrap();
        }
        found
    };

    assert_eq!(find("|- T").unwrap().rule, Rule::RT);
    assert_eq!(find("p, q |- F").unwrap().rule, Rule::Ax);
    let d = find("p |- p | q").unwrap();
    assert_eq!(d.rule, Rule::RDisj);
    assert_eq!(d.premises[0].rule, Rule::Id);
    assert!(find("|- p").is_none());
}
