//! Logical states of a calculus: entailment closures, state recognition
//! over a bounded formula universe, state enumeration, and the state poset.
//!
//! Over a finite basis every logical state is principal: it is the
//! entailment closure of a single generator, either `T` (giving the set of
//! tautologies, the bottom state) or an irreducible conjunction. State
//! equality and inclusion reduce to entailment between generators, which
//! keeps everything decidable. The principal representation is not assumed
//! blindly: the decomposition law (`state_decomposition_holds`) re-derives
//! each enumerated state as the directed union of the principal states of
//! its member irreducible conjunctions.

use std::collections::BTreeSet;
use std::fmt;

use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::formula::{Atom, ConjunctionClass, Formula, FormulaKind, Sequent};
use crate::nf::{self, Mask, Nf};
use crate::order::FinitePoset;

/// Generator of a principal logical state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// Generates the set of tautologies: the bottom state.
    Top,
    /// Generates the closure of an irreducible conjunction.
    Class(ConjunctionClass),
}

impl Generator {
    pub fn formula(&self) -> Formula {
        match self {
            Generator::Top => Formula::top(),
            Generator::Class(c) => c.to_formula(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Top => f.write_str("T"),
            Generator::Class(c) => {
                let names: Vec<&str> = c.atoms().iter().map(Atom::name).collect();
                f.write_str(&names.join("&"))
            }
        }
    }
}

/// A logical state in principal (generator) form. Operations take the
/// owning calculus explicitly; a state value is only meaningful relative to
/// the calculus it was built from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogicalState {
    generator: Generator,
}

impl LogicalState {
    /// The bottom state `Tau(P)`.
    pub fn tau() -> LogicalState {
        LogicalState { generator: Generator::Top }
    }

    /// The principal state of an irreducible conjunction.
    pub fn principal(class: ConjunctionClass, calc: &dyn Calculus) -> Result<LogicalState> {
        if !calc.is_irreducible(&class)? {
            return Err(Error::PreconditionViolated(format!(
                "`{class}` is not irreducible in {}; its closure fails (S1)",
                calc.label()
            )));
        }
        Ok(LogicalState { generator: Generator::Class(class) })
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self.generator, Generator::Top)
    }

    /// Membership: `phi` is in the state iff the generator entails it.
    pub fn contains(&self, phi: &Formula, calc: &dyn Calculus) -> Result<bool> {
        let gamma: BTreeSet<Formula> = [self.generator.formula()].into_iter().collect();
        calc.entails(&gamma, phi)
    }

    /// State inclusion: `self` is a subset of `other` iff the other
    /// generator entails this one.
    pub fn le(&self, other: &LogicalState, calc: &dyn Calculus) -> Result<bool> {
        other.contains(&self.generator.formula(), calc)
    }

    /// State equality is mutual generator entailment, not syntactic
    /// equality of generators.
    pub fn same_state(&self, other: &LogicalState, calc: &dyn Calculus) -> Result<bool> {
        Ok(self.le(other, calc)? && other.le(self, calc)?)
    }
}

impl fmt::Display for LogicalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.generator)
    }
}

/// The membership predicate `X[|-]`: a formula is in the closure iff some
/// finite subset of `X` entails it; for finite `X` that is just `X |- phi`
/// by weakening.
pub struct EntailmentClosure<'c> {
    calc: &'c dyn Calculus,
    support: BTreeSet<Formula>,
}

impl EntailmentClosure<'_> {
    pub fn contains(&self, phi: &Formula) -> Result<bool> {
        self.calc.entails(&self.support, phi)
    }

    pub fn support(&self) -> &BTreeSet<Formula> {
        &self.support
    }
}

pub fn entail_closure<'c>(
    calc: &'c dyn Calculus,
    support: impl IntoIterator<Item = Formula>,
) -> EntailmentClosure<'c> {
    EntailmentClosure { calc, support: support.into_iter().collect() }
}

// ---------------------------------------------------------------------------
// Bounded formula universe with cached flat forms.
// ---------------------------------------------------------------------------

/// Every constructible formula of the calculus up to a syntactic size
/// bound, with flat forms cached as atom masks for fast membership and
/// entailment queries. Disjunction candidates are certified through the
/// backend, so the universe only contains well-formed formulas.
pub struct FormulaUniverse {
    formulas: Vec<Formula>,
    nfs: Vec<Nf>,
    size_bound: usize,
    index: std::collections::BTreeMap<Atom, u8>,
    /// `contra[mask]` decides contradiction of a conjunction class; built
    /// once through the backend's public interface.
    contra: Vec<bool>,
}

const UNIVERSE_ATOM_LIMIT: usize = 16;

impl FormulaUniverse {
    /// Enumerate all formulas of size at most `size_bound`, up to
    /// `max_formulas` of them.
    pub fn enumerate(
        calc: &dyn Calculus,
        size_bound: usize,
        max_formulas: usize,
    ) -> Result<FormulaUniverse> {
        let atoms = calc.atom_universe();
        if atoms.len() > UNIVERSE_ATOM_LIMIT {
            return Err(Error::SizeLimit(format!(
                "formula universe over {} atoms (max {UNIVERSE_ATOM_LIMIT})",
                atoms.len()
            )));
        }
        let index = nf::index_atoms(atoms.iter());
        let contra = build_contra_table(calc, &index)?;

        // Pools by size. Size 1: constants and atoms.
        let mut pools: Vec<Vec<(Formula, Nf)>> = vec![Vec::new(); size_bound + 1];
        let mut total = 0usize;
        if size_bound >= 1 {
            let mut first: Vec<(Formula, Nf)> = vec![
                (Formula::top(), Nf::Taut),
                (Formula::bottom(), Nf::Contra),
            ];
            for a in atoms {
                let f = Formula::atom(a.clone());
                let mask = 1u32 << index[a];
                let nf = if contra[mask as usize] { Nf::Contra } else { Nf::Flat(vec![mask]) };
                first.push((f, nf));
            }
            first.sort_by(|(a, _), (b, _)| a.cmp(b));
            total += first.len();
            pools[1] = first;
        }

        for size in 2..=size_bound {
            let mut pool: Vec<(Formula, Nf)> = Vec::new();
            // Conjunctions: ordered pairs with sizes summing to size - 1.
            for left_size in 1..size.saturating_sub(1) {
                let right_size = size - 1 - left_size;
                if right_size < 1 || pools[left_size].is_empty() || pools[right_size].is_empty() {
                    continue;
                }
                for (l, lnf) in pools[left_size].clone() {
                    for (r, rnf) in &pools[right_size] {
                        let f = Formula::conj(l.clone(), r.clone());
                        let nf = conj_with_table(&lnf, rnf, &contra);
                        pool.push((f, nf));
                    }
                }
            }
            // Disjunctions: sets of distinct smaller formulas with sizes
            // summing to size - 1, certified pairwise disjoint.
            let mut flat_pool: Vec<(Formula, Nf)> = Vec::new();
            for smaller in pools.iter().take(size) {
                flat_pool.extend(smaller.iter().cloned());
            }
            let mut parts: Vec<usize> = Vec::new();
            enumerate_disjunctions(
                calc,
                &flat_pool,
                &contra,
                0,
                size - 1,
                &mut parts,
                &mut pool,
            )?;
            pool.sort_by(|(a, _), (b, _)| a.cmp(b));
            pool.dedup_by(|(a, _), (b, _)| a == b);
            total += pool.len();
            if total > max_formulas {
                return Err(Error::SizeLimit(format!(
                    "formula universe exceeds {max_formulas} formulas at size {size}"
                )));
            }
            pools[size] = pool;
        }

        let mut formulas = Vec::with_capacity(total);
        let mut nfs = Vec::with_capacity(total);
        for pool in pools {
            for (f, nf) in pool {
                formulas.push(f);
                nfs.push(nf);
            }
        }
        Ok(FormulaUniverse { formulas, nfs, size_bound, index, contra })
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn size_bound(&self) -> usize {
        self.size_bound
    }

    pub fn position(&self, f: &Formula) -> Option<usize> {
        self.formulas.iter().position(|g| g == f)
    }

    pub(crate) fn nf(&self, idx: usize) -> &Nf {
        &self.nfs[idx]
    }

    pub(crate) fn class_contradictory(&self, mask: Mask) -> bool {
        self.contra[mask as usize]
    }

    pub(crate) fn class_mask(&self, class: &ConjunctionClass) -> Result<Mask> {
        nf::class_to_mask(class, &self.index)
    }

    /// Membership of the `idx`-th formula in the principal state generated
    /// by `gen`.
    pub(crate) fn member(&self, gen: &GenMask, idx: usize) -> bool {
        match gen {
            GenMask::Top => matches!(self.nfs[idx], Nf::Taut),
            GenMask::Class(g) => match &self.nfs[idx] {
                Nf::Taut => true,
                Nf::Contra => false,
                Nf::Flat(ns) => ns.iter().any(|n| n & g == *n),
            },
        }
    }

    /// Entailment `antecedent |- succedent` over cached forms, where the
    /// antecedent is the conjunction of the given universe indices.
    pub(crate) fn entails_indices(&self, antecedent: &[usize], succedent: usize) -> bool {
        let mut acc = Nf::Taut;
        for &i in antecedent {
            acc = conj_with_table(&acc, &self.nfs[i], &self.contra);
            if acc == Nf::Contra {
                break;
            }
        }
        nf::entails_nf(&acc, &self.nfs[succedent])
    }
}

/// Compact generator form used by the fast universe queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum GenMask {
    Top,
    Class(Mask),
}

pub(crate) fn gen_mask(universe: &FormulaUniverse, state: &LogicalState) -> Result<GenMask> {
    Ok(match state.generator() {
        Generator::Top => GenMask::Top,
        Generator::Class(c) => GenMask::Class(universe.class_mask(c)?),
    })
}

struct TableOracle<'a> {
    contra: &'a [bool],
}

impl nf::ClassOracle for TableOracle<'_> {
    fn contradictory(&self, class: Mask) -> bool {
        self.contra[class as usize]
    }
}

fn conj_with_table(left: &Nf, right: &Nf, contra: &[bool]) -> Nf {
    nf::conj_nf(left, right, &TableOracle { contra })
}

fn build_contra_table(
    calc: &dyn Calculus,
    index: &std::collections::BTreeMap<Atom, u8>,
) -> Result<Vec<bool>> {
    let n = index.len();
    let mut table = vec![false; 1usize << n];
    for mask in 1..(1u32 << n) {
        let class = nf::mask_to_class(mask, index);
        table[mask as usize] = !calc.class_satisfiable(&class)?;
    }
    Ok(table)
}

/// Extend `parts` with pool entries (by ascending index) until the size
/// budget is exactly consumed, certifying each complete candidate group.
fn enumerate_disjunctions(
    calc: &dyn Calculus,
    pool: &[(Formula, Nf)],
    contra: &[bool],
    start: usize,
    remaining: usize,
    parts: &mut Vec<usize>,
    out: &mut Vec<(Formula, Nf)>,
) -> Result<()> {
    if remaining == 0 {
        if parts.len() < 2 {
            return Ok(());
        }
        // Cheap mask-level prescreen before the certifying constructor.
        for (pi, &i) in parts.iter().enumerate() {
            for &j in &parts[pi + 1..] {
                if conj_with_table(&pool[i].1, &pool[j].1, contra) != Nf::Contra {
                    return Ok(());
                }
            }
        }
        let fs: Vec<Formula> = parts.iter().map(|&i| pool[i].0.clone()).collect();
        match Formula::disj(fs, calc) {
            Ok(f) => {
                if matches!(f.kind(), FormulaKind::Disj(_)) {
                    let nf = parts
                        .iter()
                        .fold(Nf::Contra, |acc, &i| disj_merge(&acc, &pool[i].1));
                    out.push((f, nf));
                }
                Ok(())
            }
            Err(Error::DisjointnessViolation { .. }) => Ok(()),
            Err(e) => Err(e),
        }
    } else {
        for i in start..pool.len() {
            let size = pool[i].0.size();
            if size > remaining {
                continue;
            }
            parts.push(i);
            enumerate_disjunctions(calc, pool, contra, i + 1, remaining - size, parts, out)?;
            parts.pop();
        }
        Ok(())
    }
}

fn disj_merge(acc: &Nf, part: &Nf) -> Nf {
    match (acc, part) {
        (Nf::Taut, _) | (_, Nf::Taut) => Nf::Taut,
        (Nf::Contra, other) | (other, Nf::Contra) => other.clone(),
        (Nf::Flat(a), Nf::Flat(b)) => {
            let mut masks = a.clone();
            masks.extend(b);
            masks.sort_unstable();
            masks.dedup();
            Nf::Flat(masks)
        }
    }
}

// ---------------------------------------------------------------------------
// State recognition.
// ---------------------------------------------------------------------------

/// How the (S1) disjunct-selection condition was certified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum S1Status {
    /// This many proper flat formulas were found in the state, each with a
    /// member disjunct.
    Certified(usize),
    /// The bounded universe contains no proper flat member, so (S1) was
    /// only vacuously checked.
    UniverseTooSmall,
}

/// Result of a state check: the verdict plus the (S1) certification status
/// and the violations found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateCheck {
    pub is_state: bool,
    pub s1: S1Status,
    pub violations: Vec<String>,
}

/// Input to [`is_logical_state`]: a principal state or an explicit formula
/// set over the universe.
pub enum StateInput<'a> {
    Principal(&'a LogicalState),
    Explicit(&'a BTreeSet<Formula>),
}

/// Check the logical-state conditions over the bounded universe: nonempty,
/// proper, disjunct selection (S1), and entailment closure (S2).
pub fn is_logical_state(
    calc: &dyn Calculus,
    input: StateInput<'_>,
    universe: &FormulaUniverse,
) -> Result<StateCheck> {
    let _ = calc;
    let members: Vec<bool> = match &input {
        StateInput::Principal(state) => {
            let gen = gen_mask(universe, state)?;
            (0..universe.len()).map(|i| universe.member(&gen, i)).collect()
        }
        StateInput::Explicit(set) => {
            for f in set.iter() {
                if universe.position(f).is_none() {
                    return Err(Error::UniverseTooSmall(format!(
                        "explicit member `{f}` is outside the enumerated universe"
                    )));
                }
            }
            universe.formulas().iter().map(|f| set.contains(f)).collect()
        }
    };
    let mut violations = Vec::new();

    let member_indices: Vec<usize> = (0..universe.len()).filter(|&i| members[i]).collect();
    if member_indices.is_empty() {
        violations.push("state is empty over the universe".to_string());
    }
    if member_indices.len() == universe.len() {
        violations.push("state is not a proper subset of the universe".to_string());
    }

    // (S1): every member that is a proper flat formula has a member
    // disjunct. Single conjunctions are flat formulas too, but their only
    // disjunct is themselves, so only Disj-shaped members are informative.
    let mut proper_flats = 0usize;
    for &i in &member_indices {
        let f = &universe.formulas()[i];
        let FormulaKind::Disj(parts) = f.kind() else { continue };
        let Some(classes) = f.as_flat_candidate() else { continue };
        let satisfiable = classes.iter().all(|c| {
            universe
                .class_mask(c)
                .map(|m| !universe.class_contradictory(m))
                .unwrap_or(false)
        });
        if !satisfiable {
            continue;
        }
        proper_flats += 1;
        let mut selected = false;
        for part in parts {
            let idx = universe
                .position(part)
                .expect("subformulas of universe members are in the universe");
            if members[idx] {
                selected = true;
                break;
            }
        }
        if !selected {
            violations.push(format!("(S1) fails: flat member `{f}` has no member disjunct"));
        }
    }
    let s1 = if proper_flats == 0 {
        S1Status::UniverseTooSmall
    } else {
        S1Status::Certified(proper_flats)
    };

    // (S2): the closure of the member set adds nothing new within the
    // universe. For a finite support, closure membership is a single
    // entailment with the whole member set as antecedent.
    for (i, &is_member) in members.iter().enumerate() {
        if !is_member && universe.entails_indices(&member_indices, i) {
            violations.push(format!(
                "(S2) fails: members entail `{}` which is not a member",
                universe.formulas()[i]
            ));
            break;
        }
    }

    Ok(StateCheck { is_state: violations.is_empty(), s1, violations })
}

// ---------------------------------------------------------------------------
// State laws over the universe.
// ---------------------------------------------------------------------------

/// Check the closure laws of a principal state over the universe:
/// F-freeness, idempotence of the closure, conjunction closure, and
/// pairwise compatibility of members. Returns the first violation.
pub fn state_laws_violation(
    state: &LogicalState,
    universe: &FormulaUniverse,
) -> Result<Option<String>> {
    let gen = gen_mask(universe, state)?;
    let members: Vec<usize> =
        (0..universe.len()).filter(|&i| universe.member(&gen, i)).collect();

    // F-freeness.
    for &i in &members {
        if universe.formulas()[i] == Formula::bottom() {
            return Ok(Some(format!("{state} contains F")));
        }
    }

    // Closure idempotence: the member set entails exactly the members.
    for i in 0..universe.len() {
        let closed = universe.entails_indices(&members, i);
        let is_member = universe.member(&gen, i);
        if closed != is_member {
            return Ok(Some(format!(
                "closure of {state} disagrees at `{}` (closed={closed}, member={is_member})",
                universe.formulas()[i]
            )));
        }
    }

    // Conjunction closure and pairwise compatibility of members.
    for &i in &members {
        let nf_i = universe.nf(i);
        for &j in &members {
            let combined = conj_with_table(nf_i, universe.nf(j), {
                // Reuse the table oracle through the private helper.
                &universe.contra
            });
            // Incompatible members violate the compatibility law.
            if combined == Nf::Contra {
                return Ok(Some(format!(
                    "members `{}` and `{}` of {state} are incompatible",
                    universe.formulas()[i], universe.formulas()[j]
                )));
            }
            // The conjunction of two members must stay in the state.
            let in_state = match (&gen, &combined) {
                (GenMask::Top, nf) => matches!(nf, Nf::Taut),
                (GenMask::Class(g), Nf::Flat(masks)) => masks.iter().any(|n| n & g == *n),
                (GenMask::Class(_), Nf::Taut) => true,
                (GenMask::Class(_), Nf::Contra) => false,
            };
            if !in_state {
                return Ok(Some(format!(
                    "conjunction of members `{}` and `{}` escapes {state}",
                    universe.formulas()[i], universe.formulas()[j]
                )));
            }
        }
    }
    Ok(None)
}

/// The decomposition law: a state is the union of the principal states of
/// its member irreducible conjunctions, a directed family whose maximum is
/// the generator. The bottom state's family specializes to the bottom
/// generator alone.
pub fn state_decomposition_holds(
    calc: &dyn Calculus,
    state: &LogicalState,
    universe: &FormulaUniverse,
) -> Result<bool> {
    if state.is_bottom() {
        return Ok(true);
    }
    let gen = gen_mask(universe, state)?;
    let mut member_classes: Vec<ConjunctionClass> = Vec::new();
    for class in calc.irreducible_classes()? {
        if state.contains(&class.to_formula(), calc)? {
            member_classes.push(class);
        }
    }

    // Directedness with a maximum: the generator class is a member and
    // entails every member class.
    let Generator::Class(gen_class) = state.generator() else { unreachable!() };
    if !member_classes.iter().any(|c| c == gen_class) {
        return Ok(false);
    }
    let gamma: BTreeSet<Formula> = [gen_class.to_formula()].into_iter().collect();
    for class in &member_classes {
        if !calc.entails(&gamma, &class.to_formula())? {
            return Ok(false);
        }
    }

    // Union: membership in the state coincides with membership in some
    // principal member state, over the whole universe.
    let class_masks: Vec<GenMask> = member_classes
        .iter()
        .map(|c| universe.class_mask(c).map(GenMask::Class))
        .collect::<Result<_>>()?;
    for i in 0..universe.len() {
        let in_state = universe.member(&gen, i);
        let in_union = class_masks.iter().any(|g| universe.member(g, i));
        if in_state != in_union {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// State enumeration and the state poset.
// ---------------------------------------------------------------------------

/// The enumerated state space of a calculus: the states in a deterministic
/// order and their inclusion order as a finite poset.
pub struct StateSpace {
    pub states: Vec<LogicalState>,
    pub poset: FinitePoset,
}

impl StateSpace {
    pub fn bottom_index(&self) -> usize {
        self.states
            .iter()
            .position(LogicalState::is_bottom)
            .expect("the bottom state is always enumerated")
    }

    /// Locate a state up to mutual generator entailment.
    pub fn position_of(
        &self,
        state: &LogicalState,
        calc: &dyn Calculus,
    ) -> Result<Option<usize>> {
        for (i, s) in self.states.iter().enumerate() {
            if s.same_state(state, calc)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

/// Enumerate all logical states of the calculus (the bottom state plus one
/// principal state per irreducible conjunction class, deduplicated up to
/// mutual entailment) and order them by inclusion.
pub fn state_poset(calc: &dyn Calculus, max_states: usize) -> Result<StateSpace> {
    let mut states: Vec<LogicalState> = vec![LogicalState::tau()];
    for class in calc.irreducible_classes()? {
        let candidate = LogicalState::principal(class, calc)?;
        let mut fresh = true;
        for existing in &states {
            if existing.same_state(&candidate, calc)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            states.push(candidate);
        }
        if states.len() > max_states {
            return Err(Error::SizeLimit(format!(
                "state enumeration exceeds {max_states} states"
            )));
        }
    }
    states.sort();
    let names: Vec<String> = states.iter().map(|s| s.generator().to_string()).collect();
    let mut leq_pairs: Vec<(usize, usize)> = Vec::new();
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            if a.le(b, calc)? {
                leq_pairs.push((i, j));
            }
        }
    }
    let poset = FinitePoset::new(names, &leq_pairs)?;
    Ok(StateSpace { states, poset })
}

/// Check that a finite family of states is directed (every pair has an
/// upper bound within the family) and that its union, which in the finite
/// case is the family's maximum, is again a logical state.
pub fn directed_union_check(
    calc: &dyn Calculus,
    family: &[LogicalState],
    universe: &FormulaUniverse,
) -> Result<bool> {
    if family.is_empty() {
        return Err(Error::NotDirected("a directed family must be nonempty".into()));
    }
    for a in family {
        for b in family {
            let mut bounded = false;
            for w in family {
                if a.le(w, calc)? && b.le(w, calc)? {
                    bounded = true;
                    break;
                }
            }
            if !bounded {
                return Err(Error::NotDirected(format!(
                    "{a} and {b} have no upper bound in the family"
                )));
            }
        }
    }
    let mut max = &family[0];
    for s in family {
        if max.le(s, calc)? {
            max = s;
        }
    }
    for s in family {
        if !s.le(max, calc)? {
            return Err(Error::NotDirected("directed finite family has no maximum".into()));
        }
    }
    let check = is_logical_state(calc, StateInput::Principal(max), universe)?;
    Ok(check.is_state)
}

/// The least logical state `W` with `X ⊆ W ⊆ S`, computed by scanning the
/// enumerated states between the two bounds.
pub fn bracket_closure(
    calc: &dyn Calculus,
    x: &BTreeSet<Formula>,
    s: &LogicalState,
    max_states: usize,
) -> Result<LogicalState> {
    for f in x {
        if !s.contains(f, calc)? {
            return Err(Error::PreconditionViolated(format!("`{f}` is not a member of {s}")));
        }
    }
    let space = state_poset(calc, max_states)?;
    let mut candidates: Vec<&LogicalState> = Vec::new();
    'outer: for w in &space.states {
        if !w.le(s, calc)? {
            continue;
        }
        for f in x {
            if !w.contains(f, calc)? {
                continue 'outer;
            }
        }
        candidates.push(w);
    }
    for &w in &candidates {
        let mut least = true;
        for &other in &candidates {
            if !w.le(other, calc)? {
                least = false;
                break;
            }
        }
        if least {
            return Ok(w.clone());
        }
    }
    Err(Error::PreconditionViolated(format!(
        "no least state between the given set and {s}"
    )))
}

// ---------------------------------------------------------------------------
// Dumps.
// ---------------------------------------------------------------------------

/// JSON-lines dump of a state space: one record per state with its
/// generator atoms and the cover edges of the inclusion order.
pub fn states_jsonl(space: &StateSpace) -> String {
    let covers = space.poset.covers();
    let mut out = String::new();
    for (i, state) in space.states.iter().enumerate() {
        let atoms: Vec<String> = match state.generator() {
            Generator::Top => Vec::new(),
            Generator::Class(c) => c.atoms().iter().map(|a| a.name().to_string()).collect(),
        };
        let cover_ids: Vec<usize> =
            covers.iter().filter(|(lo, _)| *lo == i).map(|(_, hi)| *hi).collect();
        let record = serde_json::json!({
            "id": i,
            "generator": state.generator().to_string(),
            "atoms": atoms,
            "covers": cover_ids,
        });
        out.push_str(&record.to_string());
        out.push('\n');
    }
    out
}

/// DOT rendering of the state poset's Hasse diagram.
pub fn state_poset_dot(space: &StateSpace, graph_name: &str) -> String {
    space.poset.to_dot(graph_name)
}

/// Convenience: parse and decide a textual sequent against a calculus.
pub fn check_sequent_text(calc: &dyn Calculus, text: &str) -> Result<(Sequent, bool)> {
    let sequent = crate::formula::parse_sequent(text, calc)?;
    let valid = calc.entails(&sequent.antecedent, &sequent.succedent)?;
    Ok((sequent, valid))
}
