//! Bounded-depth backward proof search for the free calculus.
//!
//! This is the independent oracle that gates the flat-form entailment
//! decision: any sequent the decision procedure declares valid must come
//! with a findable derivation, and any derivation found must check. The
//! depth bound counts nested connective and cut steps; structural closing
//! moves (`Id`, `Ax`, `RT`, `LF` and their weakening wrappers) are free, so
//! completeness improves monotonically with depth.

use std::collections::{BTreeSet, HashMap};

use crate::calculus::derivation::{Derivation, Rule, Side};
use crate::calculus::{Calculus, FreeCalculus};
use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaKind, Sequent};

/// Which formulas backward `Cut` may introduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutPolicy {
    /// Cut only on `F`. Sufficient to replay the flat-form decision
    /// procedure: the one place a cut is genuinely needed is discharging a
    /// contradictory antecedent against a non-`F` succedent.
    #[default]
    BottomOnly,
    /// Additionally cut on subformulas of the goal and on axiom atoms.
    Extended,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Maximum nesting of connective/cut steps.
    pub max_depth: usize,
    /// Hard cap on visited subgoals before giving up with `BudgetExceeded`.
    pub node_budget: usize,
    pub cut_policy: CutPolicy,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            max_depth: 8,
            node_budget: 1_000_000,
            cut_policy: CutPolicy::BottomOnly,
        }
    }
}

impl SearchConfig {
    pub fn with_depth(depth: usize) -> SearchConfig {
        SearchConfig { max_depth: depth, ..SearchConfig::default() }
    }
}

/// Search for a derivation of `goal` within the configured depth. Returns
/// `Ok(None)` when the bounded space is exhausted without a proof.
pub fn search_derivation(
    calc: &FreeCalculus,
    goal: &Sequent,
    config: &SearchConfig,
) -> Result<Option<Derivation>> {
    if config.max_depth == 0 {
        return Err(Error::PreconditionViolated("search depth must be at least 1".into()));
    }
    for f in goal.antecedent.iter().chain([&goal.succedent]) {
        for a in f.atoms() {
            if !calc.atom_universe().contains(&a) {
                return Err(Error::UnknownAtom(a.name().to_string()));
            }
        }
    }
    let mut searcher = Searcher {
        calc,
        config,
        memo: HashMap::new(),
        nodes: 0,
    };
    searcher.prove(goal, config.max_depth)
}

enum MemoEntry {
    Proved(Derivation),
    /// Failed with this much remaining depth; also covers smaller budgets.
    FailedAt(usize),
}

struct Searcher<'a> {
    calc: &'a FreeCalculus,
    config: &'a SearchConfig,
    memo: HashMap<Sequent, MemoEntry>,
    nodes: usize,
}

impl Searcher<'_> {
    fn prove(&mut self, goal: &Sequent, remaining: usize) -> Result<Option<Derivation>> {
        self.nodes += 1;
        if self.nodes > self.config.node_budget {
            return Err(Error::BudgetExceeded { nodes: self.nodes });
        }
        match self.memo.get(goal) {
            Some(MemoEntry::Proved(d)) => return Ok(Some(d.clone())),
            Some(MemoEntry::FailedAt(r)) if *r >= remaining => return Ok(None),
            _ => {}
        }
        let result = self.attempt(goal, remaining)?;
        match &result {
            Some(d) => {
                self.memo.insert(goal.clone(), MemoEntry::Proved(d.clone()));
            }
            None => {
                let entry = self.memo.entry(goal.clone()).or_insert(MemoEntry::FailedAt(0));
                if let MemoEntry::FailedAt(r) = entry {
                    *r = (*r).max(remaining);
                }
            }
        }
        Ok(result)
    }

    fn attempt(&mut self, goal: &Sequent, remaining: usize) -> Result<Option<Derivation>> {
        if let Some(leaf) = self.close_leaf(goal) {
            return Ok(Some(leaf));
        }
        if remaining == 0 {
            return Ok(None);
        }
        let next = remaining - 1;

        // Invertible decompositions first: they preserve provability.
        // Left conjunction.
        for f in goal.antecedent.clone() {
            if let FormulaKind::Conj(l, r) = f.kind() {
                let mut ante = goal.antecedent.clone();
                ante.remove(&f);
                ante.insert((**l).clone());
                ante.insert((**r).clone());
                let sub = Sequent { antecedent: ante, succedent: goal.succedent.clone() };
                if let Some(p) = self.prove(&sub, next)? {
                    return Ok(Some(Derivation {
                        rule: Rule::LConj,
                        conclusion: goal.clone(),
                        premises: vec![p],
                        side: Side::Principal(f.clone()),
                    }));
                }
            }
        }
        // Right conjunction.
        if let FormulaKind::Conj(l, r) = goal.succedent.kind() {
            let left_goal = Sequent {
                antecedent: goal.antecedent.clone(),
                succedent: (**l).clone(),
            };
            if let Some(lp) = self.prove(&left_goal, next)? {
                let right_goal = Sequent {
                    antecedent: goal.antecedent.clone(),
                    succedent: (**r).clone(),
                };
                if let Some(rp) = self.prove(&right_goal, next)? {
                    return Ok(Some(Derivation {
                        rule: Rule::RConj,
                        conclusion: goal.clone(),
                        premises: vec![lp, rp],
                        side: Side::None,
                    }));
                }
            }
        }
        // Left disjunction: all branches must close.
        'ldisj: for f in goal.antecedent.clone() {
            if let FormulaKind::Disj(parts) = f.kind() {
                let mut premises = Vec::with_capacity(parts.len());
                for part in parts {
                    let mut ante = goal.antecedent.clone();
                    ante.remove(&f);
                    ante.insert(part.clone());
                    let sub = Sequent { antecedent: ante, succedent: goal.succedent.clone() };
                    match self.prove(&sub, next)? {
                        Some(p) => premises.push(p),
                        None => continue 'ldisj,
                    }
                }
                return Ok(Some(Derivation {
                    rule: Rule::LDisj,
                    conclusion: goal.clone(),
                    premises,
                    side: Side::Principal(f.clone()),
                }));
            }
        }
        // Right disjunction: commit to one disjunct.
        if let FormulaKind::Disj(parts) = goal.succedent.kind() {
            for (i, part) in parts.iter().enumerate() {
                let sub = Sequent {
                    antecedent: goal.antecedent.clone(),
                    succedent: part.clone(),
                };
                if let Some(p) = self.prove(&sub, next)? {
                    return Ok(Some(Derivation {
                        rule: Rule::RDisj,
                        conclusion: goal.clone(),
                        premises: vec![p],
                        side: Side::ChosenIndex(i),
                    }));
                }
            }
        }
        // Cut on F: proves anything from a refutable antecedent.
        if let Some(d) = self.try_cut(goal, &Formula::bottom(), next)? {
            return Ok(Some(d));
        }
        if self.config.cut_policy == CutPolicy::Extended {
            for cut in self.extended_cut_candidates(goal) {
                if let Some(d) = self.try_cut(goal, &cut, next)? {
                    return Ok(Some(d));
                }
            }
        }
        Ok(None)
    }

    fn try_cut(
        &mut self,
        goal: &Sequent,
        cut: &Formula,
        next: usize,
    ) -> Result<Option<Derivation>> {
        // Cutting on the succedent itself or on an assumption is never
        // progress.
        if *cut == goal.succedent || goal.antecedent.contains(cut) {
            return Ok(None);
        }
        let left_goal = Sequent {
            antecedent: goal.antecedent.clone(),
            succedent: cut.clone(),
        };
        let Some(left) = self.prove(&left_goal, next)? else {
            return Ok(None);
        };
        let mut ante = goal.antecedent.clone();
        ante.insert(cut.clone());
        let right_goal = Sequent { antecedent: ante, succedent: goal.succedent.clone() };
        let Some(right) = self.prove(&right_goal, next)? else {
            return Ok(None);
        };
        Ok(Some(Derivation {
            rule: Rule::Cut,
            conclusion: goal.clone(),
            premises: vec![left, right],
            side: Side::CutFormula(cut.clone()),
        }))
    }

    fn extended_cut_candidates(&self, goal: &Sequent) -> Vec<Formula> {
        let mut out: BTreeSet<Formula> = BTreeSet::new();
        out.insert(Formula::top());
        for f in goal.antecedent.iter().chain([&goal.succedent]) {
            collect_subformulas(f, &mut out);
        }
        for ax in self.calc.basis().axioms() {
            for a in ax {
                out.insert(Formula::atom(a.clone()));
            }
        }
        out.into_iter().collect()
    }

    /// Close the goal with a structural leaf plus weakening, if possible.
    fn close_leaf(&self, goal: &Sequent) -> Option<Derivation> {
        // Id.
        if goal.antecedent.contains(&goal.succedent) {
            let core = Derivation::leaf(
                Rule::Id,
                Sequent::new([goal.succedent.clone()], goal.succedent.clone()),
                Side::None,
            );
            return Some(weaken_to(core, &goal.antecedent));
        }
        // RT.
        if goal.succedent == Formula::top() {
            let core = Derivation::leaf(Rule::RT, Sequent::new([], Formula::top()), Side::None);
            return Some(weaken_to(core, &goal.antecedent));
        }
        // LF.
        if goal.antecedent.contains(&Formula::bottom()) {
            let core = Derivation::leaf(
                Rule::LF,
                Sequent::new([Formula::bottom()], goal.succedent.clone()),
                Side::None,
            );
            return Some(weaken_to(core, &goal.antecedent));
        }
        // Ax: the goal proves F and some axiom's atoms all appear as
        // antecedent formulas.
        if goal.succedent == Formula::bottom() {
            'axioms: for ax in self.calc.basis().axioms() {
                let mut instance = BTreeSet::new();
                for a in ax {
                    let f = Formula::atom(a.clone());
                    if !goal.antecedent.contains(&f) {
                        continue 'axioms;
                    }
                    instance.insert(f);
                }
                let core = Derivation {
                    rule: Rule::Ax,
                    conclusion: Sequent { antecedent: instance, succedent: Formula::bottom() },
                    premises: Vec::new(),
                    side: Side::Axiom(ax.clone()),
                };
                return Some(weaken_to(core, &goal.antecedent));
            }
        }
        None
    }
}

fn collect_subformulas(f: &Formula, out: &mut BTreeSet<Formula>) {
    out.insert(f.clone());
    match f.kind() {
        FormulaKind::Conj(l, r) => {
            collect_subformulas(l, out);
            collect_subformulas(r, out);
        }
        FormulaKind::Disj(parts) => {
            for p in parts {
                collect_subformulas(p, out);
            }
        }
        _ => {}
    }
}

/// Wrap a derivation in `Lwk` steps until its antecedent matches `target`.
fn weaken_to(core: Derivation, target: &BTreeSet<Formula>) -> Derivation {
    let mut d = core;
    for f in target {
        if d.conclusion.antecedent.contains(f) {
            continue;
        }
        let mut ante = d.conclusion.antecedent.clone();
        ante.insert(f.clone());
        let conclusion = Sequent { antecedent: ante, succedent: d.conclusion.succedent.clone() };
        d = Derivation {
            rule: Rule::Lwk,
            conclusion,
            premises: vec![d],
            side: Side::Added(f.clone()),
        };
    }
    d
}
