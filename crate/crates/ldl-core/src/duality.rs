//! The two directions of the representation theorem and the morphism
//! correspondence.
//!
//! One direction is [`SemanticCalculus`]: every finite L-domain presents a
//! calculus whose atoms name the principal up-sets of non-bottom elements,
//! whose axioms are the inclusion-minimal atom tuples with empty
//! intersection, and whose entailment is inclusion of evaluations. The
//! other direction is the state poset from [`crate::states`]. The round
//! trip is [`check_representation_iso`].
//!
//! Evaluation is implemented twice on purpose: the backend's `entails`
//! evaluates formulas by direct recursion on element sets, while
//! [`SemanticCalculus::hat`] computes in the algebra of decomposable sets
//! through minimal upper bounds. The two must agree, and the test suite
//! holds them to that.
//!
//! Morphisms: a [`ConsequenceRelation`] is stored as a finite monotone
//! table from source generators to target states. The table carries a row
//! for the bottom generator `T` in addition to the irreducible-conjunction
//! rows; without it the correspondence with monotone maps breaks at
//! non-strict maps, which send the bottom state strictly upward.

use std::collections::{BTreeMap, BTreeSet};

use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::formula::{Atom, ConjunctionClass, FlatForm, Formula, FormulaKind};
use crate::nf::{self, ClassOracle, Mask};
use crate::order::{self, DecomposableSet, ElementMap, FinitePoset, LDomainCheck};
use crate::states::{state_poset, FormulaUniverse, Generator, LogicalState, StateSpace};

// ---------------------------------------------------------------------------
// The calculus of a domain.
// ---------------------------------------------------------------------------

/// The disjunctive sequent calculus associated with a finite algebraic
/// L-domain.
pub struct SemanticCalculus {
    domain: FinitePoset,
    atoms: BTreeSet<Atom>,
    /// Atom bit order (sorted atom names), as used by mask-valued classes.
    atom_index: BTreeMap<Atom, u8>,
    /// Element carrying each atom bit.
    elem_of_bit: Vec<usize>,
    /// Atom of each element; `None` exactly for the bottom.
    atom_of_elem: Vec<Option<Atom>>,
    /// Inclusion-minimal empty-intersection atom tuples. The full axiom set
    /// of the construction is recovered from these by weakening and does
    /// not change the valid sequents.
    minimal_axioms: BTreeSet<BTreeSet<Atom>>,
    bottom: usize,
}

impl SemanticCalculus {
    pub fn new(domain: FinitePoset) -> Result<SemanticCalculus> {
        let LDomainCheck { is_l_domain, diagnostic } = order::is_l_domain(&domain);
        if !is_l_domain {
            return Err(Error::NotAnLDomain(diagnostic));
        }
        let bottom = domain.bottom().expect("an L-domain has a bottom");
        let mut atom_of_elem: Vec<Option<Atom>> = vec![None; domain.len()];
        let mut atoms = BTreeSet::new();
        for (e, slot) in atom_of_elem.iter_mut().enumerate() {
            if e == bottom {
                continue;
            }
            let atom = Atom::new(format!("up_{}", domain.name(e)))?;
            atoms.insert(atom.clone());
            *slot = Some(atom);
        }
        let atom_index = nf::index_atoms(atoms.iter());
        let mut elem_of_bit = vec![usize::MAX; atoms.len()];
        for (e, atom) in atom_of_elem.iter().enumerate() {
            if let Some(a) = atom {
                elem_of_bit[atom_index[a] as usize] = e;
            }
        }
        let mut calc = SemanticCalculus {
            domain,
            atoms,
            atom_index,
            elem_of_bit,
            atom_of_elem,
            minimal_axioms: BTreeSet::new(),
            bottom,
        };
        calc.minimal_axioms = calc.compute_minimal_axioms();
        Ok(calc)
    }

    pub fn domain(&self) -> &FinitePoset {
        &self.domain
    }

    pub fn bottom_element(&self) -> usize {
        self.bottom
    }

    pub fn atom_of(&self, elem: usize) -> Option<&Atom> {
        self.atom_of_elem[elem].as_ref()
    }

    pub fn element_of(&self, atom: &Atom) -> Option<usize> {
        self.atom_index.get(atom).map(|b| self.elem_of_bit[*b as usize])
    }

    pub fn minimal_axioms(&self) -> &BTreeSet<BTreeSet<Atom>> {
        &self.minimal_axioms
    }

    /// Intersection of the elements' up-sets for an atom mask.
    fn class_elements(&self, class_mask: Mask) -> u32 {
        let mut acc = self.domain.full_mask();
        for (bit, &elem) in self.elem_of_bit.iter().enumerate() {
            if class_mask & (1 << bit) != 0 {
                acc &= self.domain.up_mask(elem);
            }
        }
        acc
    }

    fn compute_minimal_axioms(&self) -> BTreeSet<BTreeSet<Atom>> {
        let n = self.atoms.len();
        let mut minimal: Vec<Mask> = Vec::new();
        // Ascending popcount, so subsets are seen before supersets.
        let mut masks: Vec<Mask> = (1..(1u32 << n)).collect();
        masks.sort_by_key(|m| m.count_ones());
        for mask in masks {
            if self.class_elements(mask) == 0 && !minimal.iter().any(|m| m & mask == *m) {
                minimal.push(mask);
            }
        }
        minimal
            .into_iter()
            .map(|m| nf::mask_to_class(m, &self.atom_index).atoms().iter().cloned().collect())
            .collect()
    }

    /// Direct evaluation of a formula as the element set it denotes. This
    /// is the decision route used by `entails`.
    fn eval_mask(&self, f: &Formula) -> Result<u32> {
        Ok(match f.kind() {
            FormulaKind::Top => self.domain.full_mask(),
            FormulaKind::Bottom => 0,
            FormulaKind::Atom(a) => {
                let elem = self
                    .element_of(a)
                    .ok_or_else(|| Error::UnknownAtom(a.name().to_string()))?;
                self.domain.up_mask(elem)
            }
            FormulaKind::Conj(l, r) => self.eval_mask(l)? & self.eval_mask(r)?,
            FormulaKind::Disj(parts) => {
                let mut acc = 0;
                for p in parts {
                    acc |= self.eval_mask(p)?;
                }
                acc
            }
        })
    }

    /// Evaluation in the decomposable-set algebra: atoms become principal
    /// up-sets, conjunction goes through minimal upper bounds of generator
    /// pairs, and disjunction concatenates generator antichains. A second
    /// route, independent of [`entails`](Calculus::entails) by
    /// construction.
    pub fn hat(&self, f: &Formula) -> Result<DecomposableSet> {
        let gens = self.hat_generators(f)?;
        self.antichain_to_set(&gens)
    }

    /// Internal antichain form: the bottom element may appear (denoting the
    /// whole domain) but then only alone.
    fn hat_generators(&self, f: &Formula) -> Result<Vec<usize>> {
        Ok(match f.kind() {
            FormulaKind::Top => vec![self.bottom],
            FormulaKind::Bottom => Vec::new(),
            FormulaKind::Atom(a) => {
                let elem = self
                    .element_of(a)
                    .ok_or_else(|| Error::UnknownAtom(a.name().to_string()))?;
                vec![elem]
            }
            FormulaKind::Conj(l, r) => {
                let left = self.hat_generators(l)?;
                let right = self.hat_generators(r)?;
                let mut collected: BTreeSet<usize> = BTreeSet::new();
                for &a in &left {
                    for &b in &right {
                        for c in order::minimal_upper_bounds(&self.domain, &[a, b]) {
                            collected.insert(c);
                        }
                    }
                }
                let all: Vec<usize> = collected.into_iter().collect();
                all.iter()
                    .copied()
                    .filter(|&c| all.iter().all(|&d| d == c || !self.domain.leq(d, c)))
                    .collect()
            }
            FormulaKind::Disj(parts) => {
                let mut acc: Vec<usize> = Vec::new();
                for p in parts {
                    acc.extend(self.hat_generators(p)?);
                }
                acc.sort_unstable();
                acc.dedup();
                acc
            }
        })
    }

    fn antichain_to_set(&self, gens: &[usize]) -> Result<DecomposableSet> {
        if gens.is_empty() {
            return Ok(DecomposableSet::empty());
        }
        if gens.contains(&self.bottom) {
            if gens.len() != 1 {
                return Err(Error::InvalidPoset(
                    "bottom generator must stand alone in an antichain".into(),
                ));
            }
            return Ok(DecomposableSet::whole(&self.domain));
        }
        DecomposableSet::from_generators(&self.domain, gens)
    }
}

struct SemanticOracle<'a> {
    calc: &'a SemanticCalculus,
}

impl ClassOracle for SemanticOracle<'_> {
    fn contradictory(&self, class: Mask) -> bool {
        self.calc.class_elements(class) == 0
    }
}

impl Calculus for SemanticCalculus {
    fn atom_universe(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    fn entails(&self, gamma: &BTreeSet<Formula>, phi: &Formula) -> Result<bool> {
        let mut antecedent = self.domain.full_mask();
        for g in gamma {
            antecedent &= self.eval_mask(g)?;
        }
        let succedent = self.eval_mask(phi)?;
        Ok(antecedent & !succedent == 0)
    }

    fn flat_form(&self, f: &Formula) -> Result<FlatForm> {
        let nf = nf::flatten_nf(f, &self.atom_index, &SemanticOracle { calc: self })?;
        Ok(nf::nf_to_flat_form(&nf, &self.atom_index))
    }

    fn class_satisfiable(&self, class: &ConjunctionClass) -> Result<bool> {
        let mask = nf::class_to_mask(class, &self.atom_index)?;
        Ok(self.class_elements(mask) != 0)
    }

    fn is_irreducible(&self, class: &ConjunctionClass) -> Result<bool> {
        if !self.class_satisfiable(class)? {
            return Err(Error::NotAConjunction(format!(
                "`{class}` is contradictory in {}",
                self.label()
            )));
        }
        let elems: Vec<usize> = class
            .atoms()
            .iter()
            .map(|a| {
                self.element_of(a).ok_or_else(|| Error::UnknownAtom(a.name().to_string()))
            })
            .collect::<Result<_>>()?;
        // Irreducible exactly when the elements have a supremum.
        Ok(order::supremum(&self.domain, &elems).is_some())
    }

    fn irreducible_classes(&self) -> Result<Vec<ConjunctionClass>> {
        // One canonical representative per non-bottom element: every
        // irreducible conjunction is equivalent to the atom of its
        // supremum.
        let mut out: Vec<ConjunctionClass> = Vec::new();
        for e in 0..self.domain.len() {
            if let Some(atom) = &self.atom_of_elem[e] {
                out.push(ConjunctionClass::new([atom.clone()])?);
            }
        }
        out.sort();
        Ok(out)
    }

    fn expressive_witness(&self, f: &Formula) -> Result<FlatForm> {
        let value = self.hat(f)?;
        if value.is_empty() || value.is_whole(&self.domain) {
            return Err(Error::PreconditionViolated(format!(
                "expressive witness requires a satisfiable formula, `{f}` denotes {}",
                value.describe(&self.domain)
            )));
        }
        let mut classes: Vec<ConjunctionClass> = Vec::new();
        for g in value.generators(&self.domain) {
            let atom = self.atom_of_elem[g]
                .clone()
                .expect("generators of a proper decomposable set are non-bottom");
            classes.push(ConjunctionClass::new([atom])?);
        }
        classes.sort();
        Ok(FlatForm::Flat(classes))
    }

    fn is_axiom(&self, atoms: &BTreeSet<Atom>) -> bool {
        // The construction's axiom set is every atom tuple whose up-sets
        // have empty intersection; only the minimal ones are stored.
        if atoms.is_empty() {
            return false;
        }
        let mut acc = self.domain.full_mask();
        for a in atoms {
            match self.element_of(a) {
                Some(e) => acc &= self.domain.up_mask(e),
                None => return false,
            }
        }
        acc == 0
    }

    fn label(&self) -> String {
        format!("domain-calculus({} elements)", self.domain.len())
    }
}

/// The formula denoting a decomposable set: `F` for the empty set, `T` for
/// the whole domain, and the disjoint disjunction of the generator atoms
/// otherwise.
pub fn formula_of_decomposable(sc: &SemanticCalculus, set: &DecomposableSet) -> Result<Formula> {
    if set.is_empty() {
        return Ok(Formula::bottom());
    }
    if set.is_whole(sc.domain()) {
        return Ok(Formula::top());
    }
    let parts: Vec<Formula> = set
        .generators(sc.domain())
        .into_iter()
        .map(|g| {
            sc.atom_of(g)
                .cloned()
                .map(Formula::atom)
                .ok_or_else(|| Error::InvalidPoset("bottom generator in a proper set".into()))
        })
        .collect::<Result<_>>()?;
    Formula::disj(parts, sc)
}

/// The logical state of a point: all formulas whose value contains it. In
/// generator form that is the atom of the point, or the bottom state for
/// the bottom element.
pub fn state_of_point(sc: &SemanticCalculus, elem: usize) -> Result<LogicalState> {
    match sc.atom_of(elem) {
        None => Ok(LogicalState::tau()),
        Some(atom) => LogicalState::principal(ConjunctionClass::new([atom.clone()])?, sc),
    }
}

/// Certificate for the representation round trip on one domain.
#[derive(Debug, Clone)]
pub struct RepresentationCheck {
    pub ok: bool,
    /// Element name paired with the generator of its state.
    pub bijection: Vec<(String, String)>,
    pub detail: String,
}

/// Verify that a finite L-domain is order-isomorphic to the state poset of
/// its own calculus, via the point-to-state map, and that each point is
/// recovered as the supremum of its state's atom elements.
pub fn check_representation_iso(domain: &FinitePoset) -> Result<RepresentationCheck> {
    let sc = SemanticCalculus::new(domain.clone())?;
    let space = state_poset(&sc, 1 << 16)?;
    let mut map: ElementMap = Vec::with_capacity(domain.len());
    let mut bijection = Vec::new();
    for e in 0..domain.len() {
        let state = state_of_point(&sc, e)?;
        let pos = space.position_of(&state, &sc)?.ok_or_else(|| {
            Error::PreconditionViolated(format!(
                "state of `{}` is missing from the enumeration",
                domain.name(e)
            ))
        })?;
        map.push(pos);
        bijection.push((domain.name(e).to_string(), space.states[pos].generator().to_string()));
    }
    if !order::order_iso(domain, &space.poset, &map) {
        return Ok(RepresentationCheck {
            ok: false,
            bijection,
            detail: "point-to-state map is not an order isomorphism".into(),
        });
    }
    // Recovery: each point is the supremum of the elements whose atoms lie
    // in its state; the bottom state recovers the bottom as an empty
    // supremum.
    for (e, &mapped) in map.iter().enumerate() {
        let state = &space.states[mapped];
        let mut xs = Vec::new();
        for x in 0..domain.len() {
            if let Some(atom) = sc.atom_of(x) {
                if state.contains(&Formula::atom(atom.clone()), &sc)? {
                    xs.push(x);
                }
            }
        }
        let recovered = if xs.is_empty() {
            sc.bottom_element()
        } else {
            order::supremum(domain, &xs).ok_or_else(|| {
                Error::PreconditionViolated(format!(
                    "state atoms of `{}` have no supremum",
                    domain.name(e)
                ))
            })?
        };
        if recovered != e {
            return Ok(RepresentationCheck {
                ok: false,
                bijection,
                detail: format!(
                    "recovery failed: `{}` came back as `{}`",
                    domain.name(e),
                    domain.name(recovered)
                ),
            });
        }
    }
    Ok(RepresentationCheck {
        ok: true,
        bijection,
        detail: format!("{}-point bijection verified", domain.len()),
    })
}

// ---------------------------------------------------------------------------
// Consequence relations.
// ---------------------------------------------------------------------------

/// A consequence relation in finite presentation: a monotone table from the
/// source calculus's state generators (the bottom generator `T` plus one
/// canonical irreducible conjunction per state) to target states. The pair
/// `(mu, psi)` is in the relation iff `psi` belongs to the row of `mu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsequenceRelation {
    table: BTreeMap<Generator, LogicalState>,
}

impl ConsequenceRelation {
    /// Build from an explicit row map. The map must contain a row for the
    /// bottom generator and one row per canonical irreducible class of the
    /// source.
    pub fn new(
        source: &dyn Calculus,
        table: BTreeMap<Generator, LogicalState>,
    ) -> Result<ConsequenceRelation> {
        if !table.contains_key(&Generator::Top) {
            return Err(Error::PreconditionViolated(
                "consequence table needs a bottom-generator row".into(),
            ));
        }
        let mut expected: BTreeSet<Generator> = BTreeSet::new();
        expected.insert(Generator::Top);
        for class in source.irreducible_classes()? {
            expected.insert(Generator::Class(class));
        }
        let actual: BTreeSet<Generator> = table.keys().cloned().collect();
        if actual != expected {
            return Err(Error::PreconditionViolated(format!(
                "consequence table keys do not match the source generators of {}",
                source.label()
            )));
        }
        Ok(ConsequenceRelation { table })
    }

    /// Build by assigning a target state to each source generator.
    pub fn from_fn(
        source: &dyn Calculus,
        mut row: impl FnMut(&Generator) -> Result<LogicalState>,
    ) -> Result<ConsequenceRelation> {
        let mut table = BTreeMap::new();
        let top = Generator::Top;
        let top_state = row(&top)?;
        table.insert(top, top_state);
        for class in source.irreducible_classes()? {
            let gen = Generator::Class(class);
            let state = row(&gen)?;
            table.insert(gen, state);
        }
        Ok(ConsequenceRelation { table })
    }

    /// The identity relation: every generator maps to its own state.
    pub fn identity(source: &dyn Calculus) -> Result<ConsequenceRelation> {
        ConsequenceRelation::from_fn(source, |gen| match gen {
            Generator::Top => Ok(LogicalState::tau()),
            Generator::Class(c) => LogicalState::principal(c.clone(), source),
        })
    }

    pub fn table(&self) -> &BTreeMap<Generator, LogicalState> {
        &self.table
    }

    /// The row of an arbitrary irreducible conjunction, located up to
    /// logical equivalence of generators.
    pub fn row_of_class(
        &self,
        class: &ConjunctionClass,
        source: &dyn Calculus,
    ) -> Result<&LogicalState> {
        if let Some(state) = self.table.get(&Generator::Class(class.clone())) {
            return Ok(state);
        }
        let probe = LogicalState::principal(class.clone(), source)?;
        for (gen, state) in &self.table {
            if let Generator::Class(c) = gen {
                let candidate = LogicalState::principal(c.clone(), source)?;
                if candidate.same_state(&probe, source)? {
                    return Ok(state);
                }
            }
        }
        Err(Error::PreconditionViolated(format!(
            "`{class}` has no row in the consequence table"
        )))
    }

    /// Membership `(mu, psi)` in the relation.
    pub fn contains(
        &self,
        mu: &ConjunctionClass,
        psi: &Formula,
        source: &dyn Calculus,
        target: &dyn Calculus,
    ) -> Result<bool> {
        self.row_of_class(mu, source)?.contains(psi, target)
    }

    /// Apply the relation to a state: the union of the rows of its member
    /// irreducible conjunctions. The member rows form a directed family
    /// with the generator's row as maximum, so in generator form the image
    /// is the row of the state's generator.
    pub fn apply(&self, state: &LogicalState, source: &dyn Calculus) -> Result<LogicalState> {
        match state.generator() {
            Generator::Top => Ok(self.table[&Generator::Top].clone()),
            Generator::Class(c) => Ok(self.row_of_class(c, source)?.clone()),
        }
    }

    /// Equality as relations: rows agree up to state equality.
    pub fn equivalent(
        &self,
        other: &ConsequenceRelation,
        target: &dyn Calculus,
    ) -> Result<bool> {
        if self.table.len() != other.table.len() {
            return Ok(false);
        }
        for (gen, state) in &self.table {
            let Some(other_state) = other.table.get(gen) else {
                return Ok(false);
            };
            if !state.same_state(other_state, target)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Outcome of the consequence-relation law check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsequenceCheck {
    pub ok: bool,
    pub violation: Option<String>,
}

/// Verify the defining conditions of a consequence relation over sampled
/// universes: monotonicity of the table (R1), entailment closure of every
/// row state (R2), irreducible witnesses for satisfiable members (R3), and
/// the four-way membership equivalence.
pub fn is_consequence_relation(
    theta: &ConsequenceRelation,
    source: &dyn Calculus,
    target: &dyn Calculus,
    target_universe: &FormulaUniverse,
) -> Result<ConsequenceCheck> {
    let fail = |msg: String| Ok(ConsequenceCheck { ok: false, violation: Some(msg) });

    let state_of_gen = |gen: &Generator| -> Result<LogicalState> {
        match gen {
            Generator::Top => Ok(LogicalState::tau()),
            Generator::Class(c) => LogicalState::principal(c.clone(), source),
        }
    };

    // (R1): if <g> ⊆ <h> in the source then row(g) ⊆ row(h).
    for (g, row_g) in theta.table() {
        let sg = state_of_gen(g)?;
        for (h, row_h) in theta.table() {
            let sh = state_of_gen(h)?;
            if sg.le(&sh, source)? && !row_g.le(row_h, target)? {
                return fail(format!(
                    "(R1) fails: <{g}> ⊆ <{h}> but row {row_g} ⊄ row {row_h}"
                ));
            }
        }
    }

    let target_classes = target.irreducible_classes()?;
    for (g, row) in theta.table() {
        // (R2): rows are entailment-closed; checked as a state condition
        // over the sampled universe.
        let check = crate::states::is_logical_state(
            target,
            crate::states::StateInput::Principal(row),
            target_universe,
        )?;
        if !check.is_state {
            return fail(format!(
                "(R2) fails: row {row} of <{g}> is not a state: {:?}",
                check.violations
            ));
        }
        // (R3): every satisfiable member formula is entailed by a member
        // irreducible conjunction. Tautologies are exempt: conjunctions
        // are satisfiable, so a row equal to the bottom state has no
        // conjunction member to offer for them.
        for psi in target_universe.formulas() {
            if !row.contains(psi, target)? {
                continue;
            }
            if crate::calculus::classify(psi, target)?
                != crate::calculus::Classification::Satisfiable
            {
                continue;
            }
            let mut witnessed = false;
            for nu in &target_classes {
                let nu_formula = nu.to_formula();
                if row.contains(&nu_formula, target)? {
                    let gamma: BTreeSet<Formula> = [nu_formula].into_iter().collect();
                    if target.entails(&gamma, psi)? {
                        witnessed = true;
                        break;
                    }
                }
            }
            if !witnessed {
                return fail(format!(
                    "(R3) fails: member `{psi}` of row {row} has no irreducible witness"
                ));
            }
        }
    }

    // Four-way equivalence of membership, sampled over source classes and
    // a prefix of the target universe.
    let source_classes = source.irreducible_classes()?;
    for mu in &source_classes {
        let row = theta.row_of_class(mu, source)?;
        let mu_state = LogicalState::principal(mu.clone(), source)?;
        for psi in target_universe.formulas().iter().take(64) {
            let direct = row.contains(psi, target)?;
            // Via a source class below mu.
            let mut via_source = false;
            for nu in &source_classes {
                let nu_state = LogicalState::principal(nu.clone(), source)?;
                if nu_state.le(&mu_state, source)?
                    && theta.row_of_class(nu, source)?.contains(psi, target)?
                {
                    via_source = true;
                    break;
                }
            }
            // Via an irreducible witness in the target (meaningful for
            // satisfiable members; see (R3)).
            let mut via_target = false;
            for nu in &target_classes {
                let nu_formula = nu.to_formula();
                if row.contains(&nu_formula, target)? {
                    let gamma: BTreeSet<Formula> = [nu_formula].into_iter().collect();
                    if target.entails(&gamma, psi)? {
                        via_target = true;
                        break;
                    }
                }
            }
            let satisfiable = crate::calculus::classify(psi, target)?
                == crate::calculus::Classification::Satisfiable;
            if via_source != direct || (satisfiable && via_target != direct) {
                return fail(format!(
                    "membership equivalence fails at ({mu}, {psi}): \
                     direct={direct}, via_source={via_source}, via_target={via_target}"
                ));
            }
        }
    }

    Ok(ConsequenceCheck { ok: true, violation: None })
}

/// The state-poset map of a consequence relation, as an index map on the
/// enumerated state spaces. Monotonicity is verified.
pub fn f_of_theta(
    theta: &ConsequenceRelation,
    source: &dyn Calculus,
    target: &dyn Calculus,
    source_space: &StateSpace,
    target_space: &StateSpace,
) -> Result<ElementMap> {
    let mut map = Vec::with_capacity(source_space.states.len());
    for state in &source_space.states {
        let image = theta.apply(state, source)?;
        let pos = target_space.position_of(&image, target)?.ok_or_else(|| {
            Error::PreconditionViolated(format!(
                "image {image} is not an enumerated target state"
            ))
        })?;
        map.push(pos);
    }
    for i in 0..source_space.states.len() {
        for j in 0..source_space.states.len() {
            if source_space.poset.leq(i, j) && !target_space.poset.leq(map[i], map[j]) {
                return Err(Error::NotMonotone(format!(
                    "state map of the relation breaks monotonicity at ({i}, {j})"
                )));
            }
        }
    }
    Ok(map)
}

/// The consequence relation of a monotone state-poset map: the row of a
/// generator is the image of its principal state.
pub fn theta_of_f(
    f: &ElementMap,
    source: &dyn Calculus,
    source_space: &StateSpace,
    target_space: &StateSpace,
) -> Result<ConsequenceRelation> {
    if f.len() != source_space.states.len() {
        return Err(Error::PreconditionViolated(
            "state map length does not match the source state space".into(),
        ));
    }
    for i in 0..f.len() {
        for j in 0..f.len() {
            if source_space.poset.leq(i, j) && !target_space.poset.leq(f[i], f[j]) {
                return Err(Error::NotMonotone(format!(
                    "state map breaks monotonicity at ({i}, {j})"
                )));
            }
        }
    }
    ConsequenceRelation::from_fn(source, |gen| {
        let state = match gen {
            Generator::Top => LogicalState::tau(),
            Generator::Class(c) => LogicalState::principal(c.clone(), source)?,
        };
        let pos = source_space
            .position_of(&state, source)?
            .expect("generator states are enumerated");
        Ok(target_space.states[f[pos]].clone())
    })
}

/// Relational composition of consequence tables: `(mu, phi)` holds iff
/// some middle generator links the two relations; in table form the row of
/// `mu` is the second relation applied to the first relation's row.
pub fn compose(
    theta2: &ConsequenceRelation,
    theta1: &ConsequenceRelation,
    source: &dyn Calculus,
    middle: &dyn Calculus,
) -> Result<ConsequenceRelation> {
    for state in theta1.table().values() {
        if let Generator::Class(c) = state.generator() {
            for atom in c.atoms() {
                if !middle.atom_universe().contains(atom) {
                    return Err(Error::CompositionMismatch(format!(
                        "first relation lands outside {}",
                        middle.label()
                    )));
                }
            }
        }
    }
    for gen in theta2.table().keys() {
        if let Generator::Class(c) = gen {
            for atom in c.atoms() {
                if !middle.atom_universe().contains(atom) {
                    return Err(Error::CompositionMismatch(format!(
                        "second relation does not start from {}",
                        middle.label()
                    )));
                }
            }
        }
    }
    ConsequenceRelation::from_fn(source, |gen| {
        let mid_state = match gen {
            Generator::Top => theta1.table()[&Generator::Top].clone(),
            Generator::Class(c) => theta1.row_of_class(c, source)?.clone(),
        };
        theta2.apply(&mid_state, middle)
    })
}

// ---------------------------------------------------------------------------
// Scott-continuous maps between domains vs consequence relations.
// ---------------------------------------------------------------------------

/// The consequence relation of a monotone element map `h: D1 -> D2`
/// between the domains' calculi: `(mu, psi)` holds iff the image of the
/// value of `mu` is contained in the value of `psi`. Values are upper
/// sets, so that is equivalent to `h(sup mu)` lying in the value of `psi`,
/// and each row is the state of the image point.
pub fn scott_to_consequence(
    h: &ElementMap,
    sc1: &SemanticCalculus,
    sc2: &SemanticCalculus,
) -> Result<ConsequenceRelation> {
    let d1 = sc1.domain();
    let d2 = sc2.domain();
    if h.len() != d1.len() {
        return Err(Error::PreconditionViolated("element map has the wrong length".into()));
    }
    for a in 0..d1.len() {
        for b in 0..d1.len() {
            if d1.leq(a, b) && !d2.leq(h[a], h[b]) {
                return Err(Error::NotMonotone(format!(
                    "element map breaks monotonicity at (`{}`, `{}`)",
                    d1.name(a),
                    d1.name(b)
                )));
            }
        }
    }
    ConsequenceRelation::from_fn(sc1, |gen| {
        let point = match gen {
            Generator::Top => sc1.bottom_element(),
            Generator::Class(c) => {
                let atom = c.atoms().iter().next().expect("canonical class has one atom");
                sc1.element_of(atom)
                    .ok_or_else(|| Error::UnknownAtom(atom.name().to_string()))?
            }
        };
        state_of_point(sc2, h[point])
    })
}

/// Literal membership test for the relation of an element map: the direct
/// image of the value of `mu` under `h` is contained in the value of
/// `psi`. Used to cross-check the table construction.
pub fn omega_member_literal(
    h: &ElementMap,
    sc1: &SemanticCalculus,
    sc2: &SemanticCalculus,
    mu: &ConjunctionClass,
    psi: &Formula,
) -> Result<bool> {
    let mu_value = sc1.hat(&mu.to_formula())?;
    let psi_value = sc2.hat(psi)?;
    for e in sc1.domain().elements_of_mask(mu_value.mask()) {
        if !psi_value.contains(h[e]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Recover the element map of a consequence relation between two domain
/// calculi by the supremum formula: the image of `x` is the supremum of
/// the elements whose atoms appear in the row of some generator valid at
/// `x`. The supremum is computed by a literal minimal-upper-bound scan and
/// its existence is checked, not assumed.
pub fn consequence_to_scott(
    theta: &ConsequenceRelation,
    sc1: &SemanticCalculus,
    sc2: &SemanticCalculus,
) -> Result<ElementMap> {
    let d1 = sc1.domain();
    let d2 = sc2.domain();
    let mut out = Vec::with_capacity(d1.len());
    for x in 0..d1.len() {
        let mut candidates: BTreeSet<usize> = BTreeSet::new();
        for (gen, row) in theta.table() {
            let valid_at_x = match gen {
                Generator::Top => true,
                Generator::Class(c) => {
                    let atom = c.atoms().iter().next().expect("canonical class");
                    let d = sc1
                        .element_of(atom)
                        .ok_or_else(|| Error::UnknownAtom(atom.name().to_string()))?;
                    d1.leq(d, x)
                }
            };
            if !valid_at_x {
                continue;
            }
            for y in 0..d2.len() {
                if let Some(atom) = sc2.atom_of(y) {
                    if row.contains(&Formula::atom(atom.clone()), sc2)? {
                        candidates.insert(y);
                    }
                }
            }
        }
        let image = if candidates.is_empty() {
            d2.bottom().expect("an L-domain has a bottom")
        } else {
            let xs: Vec<usize> = candidates.into_iter().collect();
            order::supremum(d2, &xs).ok_or_else(|| {
                Error::PreconditionViolated(format!(
                    "candidate images of `{}` have no supremum",
                    d1.name(x)
                ))
            })?
        };
        out.push(image);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// DOT.
// ---------------------------------------------------------------------------

/// DOT rendering of a state-poset morphism: both Hasse diagrams plus
/// mapping edges labeled by the generator assignment.
pub fn morphism_dot(
    source_space: &StateSpace,
    target_space: &StateSpace,
    map: &ElementMap,
    graph_name: &str,
) -> String {
    let mut out = format!("digraph \"{graph_name}\" {{\n  rankdir=BT;\n");
    out.push_str("  subgraph cluster_source {\n    label=\"source\";\n");
    for (i, s) in source_space.states.iter().enumerate() {
        out.push_str(&format!("    s{i} [label=\"{}\"];\n", s.generator()));
    }
    for (lo, hi) in source_space.poset.covers() {
        out.push_str(&format!("    s{lo} -> s{hi};\n"));
    }
    out.push_str("  }\n  subgraph cluster_target {\n    label=\"target\";\n");
    for (i, s) in target_space.states.iter().enumerate() {
        out.push_str(&format!("    t{i} [label=\"{}\"];\n", s.generator()));
    }
    for (lo, hi) in target_space.poset.covers() {
        out.push_str(&format!("    t{lo} -> t{hi};\n"));
    }
    out.push_str("  }\n");
    for (i, &j) in map.iter().enumerate() {
        out.push_str(&format!(
            "  s{i} -> t{j} [style=dashed, label=\"{} -> {}\"];\n",
            source_space.states[i].generator(),
            target_space.states[j].generator()
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn semantic(p: FinitePoset) -> SemanticCalculus {
        SemanticCalculus::new(p).unwrap()
    }

    fn atom(sc: &SemanticCalculus, elem_name: &str) -> Formula {
        let e = sc.domain().index_of(elem_name).unwrap();
        Formula::atom(sc.atom_of(e).unwrap().clone())
    }

    fn single_class(sc: &SemanticCalculus, elem_name: &str) -> ConjunctionClass {
        let e = sc.domain().index_of(elem_name).unwrap();
        ConjunctionClass::new([sc.atom_of(e).unwrap().clone()]).unwrap()
    }

    #[test]
    fn calculus_of_domain_examples() {
        // One-point domain: no atoms.
        let sc = semantic(fixtures::point());
        assert!(sc.atom_universe().is_empty());
        assert!(sc.minimal_axioms().is_empty());

        // Two-chain: one atom, no axioms.
        let sc = semantic(fixtures::chain2());
        assert_eq!(sc.atom_universe().len(), 1);
        assert!(sc.minimal_axioms().is_empty());

        // Flat three-point: two atoms, one axiom pair.
        let sc = semantic(fixtures::flat3());
        assert_eq!(sc.atom_universe().len(), 2);
        assert_eq!(sc.minimal_axioms().len(), 1);
        let ax = sc.minimal_axioms().iter().next().unwrap();
        assert_eq!(ax.len(), 2);

        // Non-L-domains are rejected with the failing clause named.
        let bad = FinitePoset::from_covers(
            vec![
                "bot".into(), "a".into(), "b".into(), "c".into(), "d".into(), "e".into(),
            ],
            &[(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 5), (4, 5)],
        )
        .unwrap();
        assert!(matches!(SemanticCalculus::new(bad), Err(Error::NotAnLDomain(_))));
    }

    #[test]
    fn semantic_entailment_is_inclusion() {
        let sc = semantic(fixtures::m_poset());
        let a = atom(&sc, "a");
        let c = atom(&sc, "c");
        let gamma: BTreeSet<Formula> = [c.clone()].into_iter().collect();
        // up(c) ⊆ up(a), so up_c |- up_a.
        assert!(sc.entails(&gamma, &a).unwrap());
        let gamma: BTreeSet<Formula> = [a].into_iter().collect();
        assert!(!sc.entails(&gamma, &c).unwrap());
    }

    #[test]
    fn hat_agrees_with_direct_evaluation() {
        for (name, p) in fixtures::poset_fixtures() {
            let sc = semantic(p);
            let universe = FormulaUniverse::enumerate(&sc, 5, 100_000).unwrap();
            for f in universe.formulas() {
                let via_hat = sc.hat(f).unwrap().mask();
                let direct = sc.eval_mask(f).unwrap();
                assert_eq!(via_hat, direct, "evaluations disagree on `{f}` over {name}");
            }
        }
    }

    #[test]
    fn hat_image_is_exactly_the_decomposable_sets() {
        for (name, p) in fixtures::poset_fixtures() {
            if p.len() > 4 {
                continue;
            }
            let sc = semantic(p.clone());
            let universe = FormulaUniverse::enumerate(&sc, 5, 100_000).unwrap();
            let mut image: BTreeSet<u32> = BTreeSet::new();
            for f in universe.formulas() {
                image.insert(sc.hat(f).unwrap().mask());
            }
            let all: BTreeSet<u32> = order::decomposable_sets(&p)
                .unwrap()
                .into_iter()
                .map(|d| d.mask())
                .collect();
            assert_eq!(image, all, "hat image mismatch on {name}");
        }
    }

    #[test]
    fn irreducibility_examples() {
        let sc = semantic(fixtures::m_poset());
        let ab = ConjunctionClass::new([
            sc.atom_of(sc.domain().index_of("a").unwrap()).unwrap().clone(),
            sc.atom_of(sc.domain().index_of("b").unwrap()).unwrap().clone(),
        ])
        .unwrap();
        // Satisfiable (c and d lie above both) but not irreducible: the
        // pair has two minimal upper bounds.
        assert!(sc.class_satisfiable(&ab).unwrap());
        assert!(!sc.is_irreducible(&ab).unwrap());

        let diamond = semantic(fixtures::diamond());
        let ab = ConjunctionClass::new([
            diamond.atom_of(diamond.domain().index_of("a").unwrap()).unwrap().clone(),
            diamond.atom_of(diamond.domain().index_of("b").unwrap()).unwrap().clone(),
        ])
        .unwrap();
        assert!(diamond.is_irreducible(&ab).unwrap());
    }

    #[test]
    fn expressive_witness_on_m_poset() {
        let sc = semantic(fixtures::m_poset());
        let f = Formula::conj(atom(&sc, "a"), atom(&sc, "b"));
        let witness = sc.expressive_witness(&f).unwrap();
        let FlatForm::Flat(classes) = &witness else { panic!("expected flat") };
        let names: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
        assert_eq!(names, vec!["up_c", "up_d"]);
        // Forward and both reverse entailments hold.
        let w = witness.to_formula(&sc).unwrap();
        let gamma: BTreeSet<Formula> = [f.clone()].into_iter().collect();
        assert!(sc.entails(&gamma, &w).unwrap());
        for class in classes {
            let gamma: BTreeSet<Formula> = [class.to_formula()].into_iter().collect();
            assert!(sc.entails(&gamma, &f).unwrap());
        }
    }

    #[test]
    fn formula_of_decomposable_cases() {
        let sc = semantic(fixtures::m_poset());
        assert_eq!(
            formula_of_decomposable(&sc, &DecomposableSet::empty()).unwrap(),
            Formula::bottom()
        );
        assert_eq!(
            formula_of_decomposable(&sc, &DecomposableSet::whole(sc.domain())).unwrap(),
            Formula::top()
        );
        let c = sc.domain().index_of("c").unwrap();
        let d = sc.domain().index_of("d").unwrap();
        let cd = DecomposableSet::from_generators(sc.domain(), &[c, d]).unwrap();
        let f = formula_of_decomposable(&sc, &cd).unwrap();
        assert_eq!(f.to_string(), "up_c | up_d");
        assert_eq!(sc.hat(&f).unwrap(), cd);
    }

    #[test]
    fn state_of_point_examples() {
        let sc = semantic(fixtures::m_poset());
        assert!(state_of_point(&sc, sc.bottom_element()).unwrap().is_bottom());
        let c = sc.domain().index_of("c").unwrap();
        let state = state_of_point(&sc, c).unwrap();
        // The state of c contains up_a & up_b since c is above both.
        let f = Formula::conj(atom(&sc, "a"), atom(&sc, "b"));
        assert!(state.contains(&f, &sc).unwrap());
    }

    #[test]
    fn representation_iso_on_fixtures() {
        for (name, p) in fixtures::poset_fixtures() {
            let check = check_representation_iso(&p).unwrap();
            assert!(check.ok, "{name}: {}", check.detail);
            assert_eq!(check.bijection.len(), p.len());
        }
    }

    #[test]
    fn identity_relation_is_a_consequence_relation() {
        let sc = semantic(fixtures::diamond());
        let id = ConsequenceRelation::identity(&sc).unwrap();
        let universe = FormulaUniverse::enumerate(&sc, 4, 100_000).unwrap();
        let check = is_consequence_relation(&id, &sc, &sc, &universe).unwrap();
        assert!(check.ok, "{:?}", check.violation);
        // Identity applies as the identity on states.
        let space = state_poset(&sc, 1000).unwrap();
        for state in &space.states {
            let image = id.apply(state, &sc).unwrap();
            assert!(image.same_state(state, &sc).unwrap());
        }
    }

    #[test]
    fn constant_bottom_relation_is_valid() {
        let sc = semantic(fixtures::diamond());
        let theta = ConsequenceRelation::from_fn(&sc, |_| Ok(LogicalState::tau())).unwrap();
        let universe = FormulaUniverse::enumerate(&sc, 4, 100_000).unwrap();
        let check = is_consequence_relation(&theta, &sc, &sc, &universe).unwrap();
        assert!(check.ok, "{:?}", check.violation);
        let space = state_poset(&sc, 1000).unwrap();
        for state in &space.states {
            assert!(theta.apply(state, &sc).unwrap().is_bottom());
        }
    }

    #[test]
    fn r1_violation_is_reported() {
        // On the diamond calculus: send the top class somewhere that is
        // not above the image of the a-class.
        let sc = semantic(fixtures::diamond());
        let a_class = single_class(&sc, "a");
        let b_class = single_class(&sc, "b");
        let top_class = single_class(&sc, "top");
        let theta = ConsequenceRelation::from_fn(&sc, |gen| match gen {
            Generator::Top => Ok(LogicalState::tau()),
            Generator::Class(c) if *c == top_class => {
                LogicalState::principal(b_class.clone(), &sc)
            }
            Generator::Class(c) if *c == a_class => {
                LogicalState::principal(a_class.clone(), &sc)
            }
            Generator::Class(_) => LogicalState::principal(b_class.clone(), &sc),
        })
        .unwrap();
        let universe = FormulaUniverse::enumerate(&sc, 4, 100_000).unwrap();
        let check = is_consequence_relation(&theta, &sc, &sc, &universe).unwrap();
        assert!(!check.ok);
        assert!(check.violation.unwrap().contains("(R1)"));
    }

    #[test]
    fn theta_f_round_trips_on_small_pair() {
        let sc1 = semantic(fixtures::flat3());
        let sc2 = semantic(fixtures::diamond());
        let space1 = state_poset(&sc1, 1000).unwrap();
        let space2 = state_poset(&sc2, 1000).unwrap();
        let maps = order::monotone_maps(&space1.poset, &space2.poset, 1 << 20).unwrap();
        assert!(!maps.is_empty());
        for f in &maps {
            let theta = theta_of_f(f, &sc1, &space1, &space2).unwrap();
            let back = f_of_theta(&theta, &sc1, &sc2, &space1, &space2).unwrap();
            assert_eq!(&back, f, "f -> theta -> f must be the identity");
        }
    }

    #[test]
    fn scott_map_round_trips() {
        let sc1 = semantic(fixtures::chain2());
        let sc2 = semantic(fixtures::diamond());
        let d2 = sc2.domain();
        // Embedding bot -> bot, a -> top.
        let h: ElementMap = vec![d2.index_of("bot").unwrap(), d2.index_of("top").unwrap()];
        let omega = scott_to_consequence(&h, &sc1, &sc2).unwrap();
        // The a-row is the state of the top point.
        let a_class = single_class(&sc1, "a");
        let row = omega.row_of_class(&a_class, &sc1).unwrap();
        let top_state = state_of_point(&sc2, d2.index_of("top").unwrap()).unwrap();
        assert!(row.same_state(&top_state, &sc2).unwrap());
        // Literal membership agrees on every universe formula.
        let universe = FormulaUniverse::enumerate(&sc2, 4, 100_000).unwrap();
        for psi in universe.formulas() {
            let literal = omega_member_literal(&h, &sc1, &sc2, &a_class, psi).unwrap();
            let table = omega.contains(&a_class, psi, &sc1, &sc2).unwrap();
            assert_eq!(literal, table, "literal vs table membership on `{psi}`");
        }
        // Round trip recovers h, including at the bottom.
        assert_eq!(consequence_to_scott(&omega, &sc1, &sc2).unwrap(), h);

        // Constant-bottom map: every row is the bottom state.
        let const_bot: ElementMap = vec![d2.index_of("bot").unwrap(); 2];
        let omega = scott_to_consequence(&const_bot, &sc1, &sc2).unwrap();
        for row in omega.table().values() {
            assert!(row.is_bottom());
        }
        assert_eq!(consequence_to_scott(&omega, &sc1, &sc2).unwrap(), const_bot);
    }

    #[test]
    fn omega_round_trips_over_all_relations() {
        // Every valid relation between two domain calculi is the relation
        // of its own recovered element map, and vice versa.
        let sc1 = semantic(fixtures::flat3());
        let sc2 = semantic(fixtures::diamond());
        let space1 = state_poset(&sc1, 1000).unwrap();
        let space2 = state_poset(&sc2, 1000).unwrap();
        let maps = order::monotone_maps(&space1.poset, &space2.poset, 1 << 20).unwrap();
        for f in &maps {
            let theta = theta_of_f(f, &sc1, &space1, &space2).unwrap();
            let h = consequence_to_scott(&theta, &sc1, &sc2).unwrap();
            let back = scott_to_consequence(&h, &sc1, &sc2).unwrap();
            assert!(back.equivalent(&theta, &sc2).unwrap(), "relation round trip for {f:?}");
            let h_again = consequence_to_scott(&back, &sc1, &sc2).unwrap();
            assert_eq!(h, h_again, "element-map round trip for {f:?}");
        }
    }

    #[test]
    fn composition_and_identity_laws_small() {
        let sc = semantic(fixtures::flat3());
        let space = state_poset(&sc, 1000).unwrap();
        let maps = order::monotone_maps(&space.poset, &space.poset, 1 << 20).unwrap();
        let id = ConsequenceRelation::identity(&sc).unwrap();
        for f in maps.iter().take(10) {
            let theta = theta_of_f(f, &sc, &space, &space).unwrap();
            let left = compose(&id, &theta, &sc, &sc).unwrap();
            let right = compose(&theta, &id, &sc, &sc).unwrap();
            assert!(left.equivalent(&theta, &sc).unwrap());
            assert!(right.equivalent(&theta, &sc).unwrap());
        }
    }

    #[test]
    fn composition_mismatch_detected() {
        let sc1 = semantic(fixtures::flat3());
        let sc2 = semantic(fixtures::chain2());
        let id1 = ConsequenceRelation::identity(&sc1).unwrap();
        let id2 = ConsequenceRelation::identity(&sc2).unwrap();
        assert!(matches!(
            compose(&id2, &id1, &sc1, &sc2),
            Err(Error::CompositionMismatch(_))
        ));
    }
}
