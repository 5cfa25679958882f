//! Finite poset toolkit: construction and validation, L-domain recognition,
//! minimal upper bounds, decomposable sets, monotone map enumeration, and
//! order isomorphism.
//!
//! Everything here is finite, so the dcpo and algebraicity clauses of the
//! L-domain definition degenerate: a finite pointed poset is automatically a
//! dcpo in which every element is compact. What remains to check is the
//! least element and that every principal downset is a lattice.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Maximum number of elements; up-sets are stored as `u32` masks.
pub const MAX_ELEMENTS: usize = 32;

/// An explicit finite poset. Elements are indices `0..len`; `up[i]` is the
/// bitmask of elements above or equal to `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    up: Vec<u32>,
}

impl FinitePoset {
    /// Build from a `leq` predicate given as a list of related pairs
    /// `(lo, hi)`, which must already be reflexive and transitive.
    pub fn new(names: Vec<String>, leq_pairs: &[(usize, usize)]) -> Result<FinitePoset> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidPoset("a poset needs at least one element".into()));
        }
        if n > MAX_ELEMENTS {
            return Err(Error::SizeLimit(format!("poset with {n} elements (max {MAX_ELEMENTS})")));
        }
        let mut up = vec![0u32; n];
        for &(lo, hi) in leq_pairs {
            if lo >= n || hi >= n {
                return Err(Error::InvalidPoset(format!("pair ({lo}, {hi}) out of range")));
            }
            up[lo] |= 1 << hi;
        }
        let poset = FinitePoset { names, up };
        poset.validate()?;
        Ok(poset)
    }

    /// Build from cover pairs `(lo, hi)`, taking the reflexive-transitive
    /// closure. This is the one ingestion path that repairs anything.
    pub fn from_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<FinitePoset> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidPoset("a poset needs at least one element".into()));
        }
        if n > MAX_ELEMENTS {
            return Err(Error::SizeLimit(format!("poset with {n} elements (max {MAX_ELEMENTS})")));
        }
        let mut up = vec![0u32; n];
        for (i, mask) in up.iter_mut().enumerate() {
            *mask = 1 << i;
        }
        for &(lo, hi) in covers {
            if lo >= n || hi >= n {
                return Err(Error::InvalidPoset(format!("cover ({lo}, {hi}) out of range")));
            }
            up[lo] |= 1 << hi;
        }
        // Warshall closure over the up masks.
        for mid in 0..n {
            for i in 0..n {
                if up[i] & (1 << mid) != 0 {
                    up[i] |= up[mid];
                }
            }
        }
        let poset = FinitePoset { names, up };
        poset.validate()?;
        Ok(poset)
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        {
            let mut seen = BTreeSet::new();
            for name in &self.names {
                if !seen.insert(name) {
                    return Err(Error::InvalidPoset(format!("duplicate element id `{name}`")));
                }
            }
        }
        for i in 0..n {
            if self.up[i] & (1 << i) == 0 {
                return Err(Error::InvalidPoset(format!("leq is not reflexive at `{}`", self.names[i])));
            }
            if self.up[i] >> n != 0 {
                return Err(Error::InvalidPoset("relation mentions out-of-range elements".into()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && self.leq(i, j) && self.leq(j, i) {
                    return Err(Error::InvalidPoset(format!(
                        "leq is not antisymmetric on `{}`, `{}`",
                        self.names[i], self.names[j]
                    )));
                }
                if self.leq(i, j) && self.up[j] & !self.up[i] != 0 {
                    return Err(Error::InvalidPoset(format!(
                        "leq is not transitive through `{}` <= `{}`",
                        self.names[i], self.names[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, lo: usize, hi: usize) -> bool {
        self.up[lo] & (1 << hi) != 0
    }

    /// Bitmask of `{ j : i <= j }`.
    pub fn up_mask(&self, i: usize) -> u32 {
        self.up[i]
    }

    /// Bitmask of `{ j : j <= i }`.
    pub fn down_mask(&self, i: usize) -> u32 {
        let mut m = 0;
        for j in 0..self.len() {
            if self.leq(j, i) {
                m |= 1 << j;
            }
        }
        m
    }

    pub fn full_mask(&self) -> u32 {
        if self.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.len()) - 1
        }
    }

    /// The least element, if any.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.up[i] == self.full_mask())
    }

    /// Minimal elements of the set given by `mask`.
    pub fn minimal_of_mask(&self, mask: u32) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                mask & (1 << i) != 0
                    && (0..self.len())
                        .all(|j| j == i || mask & (1 << j) == 0 || !self.leq(j, i))
            })
            .collect()
    }

    /// Iterate elements of a mask in index order.
    pub fn elements_of_mask(&self, mask: u32) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |i| mask & (1 << i) != 0)
    }

    /// Parse the line-oriented `.pos` format: `elem <id>` declarations
    /// followed by `cover <lo> <hi>` lines; `#` starts a comment. The loader
    /// emits the reflexive-transitive closure and requires a unique bottom.
    pub fn parse(text: &str) -> Result<FinitePoset> {
        let mut names: Vec<String> = Vec::new();
        let mut covers: Vec<(usize, usize)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("elem") => {
                    let id = words.next().ok_or_else(|| {
                        Error::InvalidPoset(format!("line {}: elem needs an id", lineno + 1))
                    })?;
                    if names.iter().any(|n| n == id) {
                        return Err(Error::InvalidPoset(format!(
                            "line {}: duplicate element `{id}`",
                            lineno + 1
                        )));
                    }
                    names.push(id.to_string());
                }
                Some("cover") => {
                    let lo = words.next().and_then(|w| names.iter().position(|n| n == w));
                    let hi = words.next().and_then(|w| names.iter().position(|n| n == w));
                    match (lo, hi) {
                        (Some(lo), Some(hi)) => covers.push((lo, hi)),
                        _ => {
                            return Err(Error::InvalidPoset(format!(
                                "line {}: cover needs two declared element ids",
                                lineno + 1
                            )))
                        }
                    }
                }
                Some(other) => {
                    return Err(Error::InvalidPoset(format!(
                        "line {}: unknown directive `{other}`",
                        lineno + 1
                    )));
                }
                None => unreachable!(),
            }
        }
        let poset = FinitePoset::from_covers(names, &covers)?;
        if poset.bottom().is_none() {
            return Err(Error::InvalidPoset("poset file must have a unique least element".into()));
        }
        Ok(poset)
    }

    /// Cover pairs `(lo, hi)`: lo < hi with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for lo in 0..self.len() {
            for hi in 0..self.len() {
                if lo == hi || !self.leq(lo, hi) {
                    continue;
                }
                let between = (0..self.len()).any(|m| {
                    m != lo && m != hi && self.leq(lo, m) && self.leq(m, hi)
                });
                if !between {
                    out.push((lo, hi));
                }
            }
        }
        out
    }

    /// Render the `.pos` format.
    pub fn to_pos_format(&self) -> String {
        let mut out = String::new();
        for name in &self.names {
            out.push_str(&format!("elem {name}\n"));
        }
        for (lo, hi) in self.covers() {
            out.push_str(&format!("cover {} {}\n", self.names[lo], self.names[hi]));
        }
        out
    }

    /// DOT rendering of the Hasse diagram (covers point upward).
    pub fn to_dot(&self, graph_name: &str) -> String {
        let mut out = format!("digraph \"{graph_name}\" {{\n  rankdir=BT;\n");
        for name in &self.names {
            out.push_str(&format!("  \"{name}\";\n"));
        }
        for (lo, hi) in self.covers() {
            out.push_str(&format!("  \"{}\" -> \"{}\";\n", self.names[lo], self.names[hi]));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pos_format())
    }
}

/// Verdict of the L-domain check, with a human-readable account.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LDomainCheck {
    pub is_l_domain: bool,
    pub diagnostic: String,
}

/// Check whether a finite poset is an algebraic L-domain: it has a least
/// element and every principal downset is a lattice. Finiteness makes the
/// remaining clauses of the definition automatic, which the diagnostic
/// records.
pub fn is_l_domain(p: &FinitePoset) -> LDomainCheck {
    let Some(bottom) = p.bottom() else {
        return LDomainCheck {
            is_l_domain: false,
            diagnostic: "no least element".to_string(),
        };
    };
    for x in 0..p.len() {
        let down = p.down_mask(x);
        let members: Vec<usize> = p.elements_of_mask(down).collect();
        for (ai, &a) in members.iter().enumerate() {
            for &b in &members[ai + 1..] {
                // Join within the downset: least upper bound among
                // elements <= x.
                let ubs: Vec<usize> = members
                    .iter()
                    .copied()
                    .filter(|&u| p.leq(a, u) && p.leq(b, u))
                    .collect();
                if !has_least(p, &ubs) {
                    return LDomainCheck {
                        is_l_domain: false,
                        diagnostic: format!(
                            "down({}) is not a lattice: `{}` and `{}` have no join below `{}`",
                            p.name(x), p.name(a), p.name(b), p.name(x)
                        ),
                    };
                }
                // Meets come for free in a finite poset with all joins, but
                // checking them keeps the diagnostic story direct.
                let lbs: Vec<usize> = members
                    .iter()
                    .copied()
                    .filter(|&l| p.leq(l, a) && p.leq(l, b))
                    .collect();
                if !has_greatest(p, &lbs) {
                    return LDomainCheck {
                        is_l_domain: false,
                        diagnostic: format!(
                            "down({}) is not a lattice: `{}` and `{}` have no meet",
                            p.name(x), p.name(a), p.name(b)
                        ),
                    };
                }
            }
        }
    }
    LDomainCheck {
        is_l_domain: true,
        diagnostic: format!(
            "least element `{}`; every principal downset is a lattice; \
             finiteness makes the dcpo and compact-basis clauses automatic",
            p.name(bottom)
        ),
    }
}

fn has_least(p: &FinitePoset, xs: &[usize]) -> bool {
    xs.iter().any(|&m| xs.iter().all(|&u| p.leq(m, u)))
}

fn has_greatest(p: &FinitePoset, xs: &[usize]) -> bool {
    xs.iter().any(|&m| xs.iter().all(|&u| p.leq(u, m)))
}

/// Minimal upper bounds of a nonempty element set: the minimal elements of
/// the intersection of their up-sets. Empty exactly when there is no upper
/// bound.
pub fn minimal_upper_bounds(p: &FinitePoset, xs: &[usize]) -> Vec<usize> {
    assert!(!xs.is_empty(), "minimal_upper_bounds needs a nonempty set");
    let mut mask = p.full_mask();
    for &x in xs {
        mask &= p.up_mask(x);
    }
    p.minimal_of_mask(mask)
}

/// The supremum of a nonempty set, when it exists: the unique minimal upper
/// bound that lies below every upper bound. In a finite poset this is
/// exactly "the set of minimal upper bounds is a singleton".
pub fn supremum(p: &FinitePoset, xs: &[usize]) -> Option<usize> {
    let mubs = minimal_upper_bounds(p, xs);
    match mubs.as_slice() {
        [single] => Some(*single),
        _ => None,
    }
}

/// An upper set `up(A)` generated by a pairwise-inconsistent antichain of
/// non-bottom elements, or the whole domain, or the empty set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecomposableSet {
    mask: u32,
}

impl DecomposableSet {
    pub fn empty() -> DecomposableSet {
        DecomposableSet { mask: 0 }
    }

    pub fn whole(p: &FinitePoset) -> DecomposableSet {
        DecomposableSet { mask: p.full_mask() }
    }

    /// Build from a generator antichain, checking pairwise inconsistency
    /// (`up(a) ∩ up(b) = ∅` for distinct generators) and that no generator
    /// is the bottom element.
    pub fn from_generators(p: &FinitePoset, generators: &[usize]) -> Result<DecomposableSet> {
        let bottom = p.bottom();
        let mut mask = 0u32;
        for (i, &a) in generators.iter().enumerate() {
            if Some(a) == bottom {
                return Err(Error::InvalidPoset(
                    "decomposable-set generators must be non-bottom".into(),
                ));
            }
            for &b in &generators[i + 1..] {
                if p.up_mask(a) & p.up_mask(b) != 0 {
                    return Err(Error::InvalidPoset(format!(
                        "generators `{}` and `{}` are consistent",
                        p.name(a), p.name(b)
                    )));
                }
            }
            mask |= p.up_mask(a);
        }
        Ok(DecomposableSet { mask })
    }

    pub(crate) fn from_mask(mask: u32) -> DecomposableSet {
        DecomposableSet { mask }
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_whole(&self, p: &FinitePoset) -> bool {
        self.mask == p.full_mask()
    }

    pub fn contains(&self, elem: usize) -> bool {
        self.mask & (1 << elem) != 0
    }

    pub fn is_subset(&self, other: &DecomposableSet) -> bool {
        self.mask & !other.mask == 0
    }

    /// The generator antichain: minimal elements of the member set.
    pub fn generators(&self, p: &FinitePoset) -> Vec<usize> {
        p.minimal_of_mask(self.mask)
    }

    /// Intersection. In an L-domain the result is again decomposable.
    pub fn intersect(&self, other: &DecomposableSet) -> DecomposableSet {
        DecomposableSet { mask: self.mask & other.mask }
    }

    /// Disjoint union; errors if the operands overlap.
    pub fn disjoint_union(&self, other: &DecomposableSet) -> Result<DecomposableSet> {
        if self.mask & other.mask != 0 {
            return Err(Error::PreconditionViolated(
                "disjoint union of overlapping decomposable sets".into(),
            ));
        }
        Ok(DecomposableSet { mask: self.mask | other.mask })
    }

    pub fn describe(&self, p: &FinitePoset) -> String {
        if self.is_empty() {
            "Empty".to_string()
        } else if self.is_whole(p) {
            "Whole".to_string()
        } else {
            let gens: Vec<&str> = self.generators(p).into_iter().map(|i| p.name(i)).collect();
            format!("up({})", gens.join(","))
        }
    }
}

/// All decomposable subsets of an L-domain: the empty set, the whole domain,
/// and `up(A)` for every nonempty pairwise-inconsistent antichain of
/// non-bottom elements. Deterministic order by member mask.
pub fn decomposable_sets(p: &FinitePoset) -> Result<Vec<DecomposableSet>> {
    let check = is_l_domain(p);
    if !check.is_l_domain {
        return Err(Error::NotAnLDomain(check.diagnostic));
    }
    let bottom = p.bottom().expect("L-domain has a bottom");
    let non_bottom: Vec<usize> = (0..p.len()).filter(|&i| i != bottom).collect();
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    seen.insert(0);
    seen.insert(p.full_mask());
    // Enumerate antichains as subsets of the non-bottom elements, keeping
    // those that are pairwise inconsistent.
    let k = non_bottom.len();
    if k > 20 {
        return Err(Error::SizeLimit(format!("decomposable sets over {k} non-bottom elements")));
    }
    for choice in 1u32..(1 << k) {
        let gens: Vec<usize> = (0..k)
            .filter(|&b| choice & (1 << b) != 0)
            .map(|b| non_bottom[b])
            .collect();
        if let Ok(ds) = DecomposableSet::from_generators(p, &gens) {
            seen.insert(ds.mask());
        }
    }
    Ok(seen.into_iter().map(DecomposableSet::from_mask).collect())
}

/// A total map between two posets, by element index.
pub type ElementMap = Vec<usize>;

/// Exhaustively enumerate monotone (order-preserving) maps `p -> q`. For
/// finite posets these are exactly the Scott-continuous functions, since
/// every directed set has a maximum.
pub fn monotone_maps(p: &FinitePoset, q: &FinitePoset, budget: usize) -> Result<Vec<ElementMap>> {
    let candidates = (q.len() as f64).powi(p.len() as i32);
    if candidates > budget as f64 {
        return Err(Error::SizeLimit(format!(
            "{} candidate maps exceed the budget of {budget}",
            candidates
        )));
    }
    let mut out = Vec::new();
    let mut current = vec![0usize; p.len()];
    enumerate_maps(p, q, 0, &mut current, &mut out);
    Ok(out)
}

fn enumerate_maps(
    p: &FinitePoset,
    q: &FinitePoset,
    position: usize,
    current: &mut ElementMap,
    out: &mut Vec<ElementMap>,
) {
    if position == p.len() {
        out.push(current.clone());
        return;
    }
    'targets: for target in 0..q.len() {
        // Check order preservation against the already-assigned prefix.
        for (earlier, &assigned) in current.iter().enumerate().take(position) {
            if p.leq(earlier, position) && !q.leq(assigned, target) {
                continue 'targets;
            }
            if p.leq(position, earlier) && !q.leq(target, assigned) {
                continue 'targets;
            }
        }
        current[position] = target;
        enumerate_maps(p, q, position + 1, current, out);
    }
}

/// Whether `f` is an order isomorphism `p -> q`: a bijection with
/// `x <= y` iff `f(x) <= f(y)`.
pub fn order_iso(p: &FinitePoset, q: &FinitePoset, f: &ElementMap) -> bool {
    if f.len() != p.len() || p.len() != q.len() {
        return false;
    }
    let mut hit = vec![false; q.len()];
    for &y in f {
        if y >= q.len() || hit[y] {
            return false;
        }
        hit[y] = true;
    }
    for a in 0..p.len() {
        for b in 0..p.len() {
            if p.leq(a, b) != q.leq(f[a], f[b]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn poset_validation_rejects_bad_relations() {
        // Not antisymmetric.
        let r = FinitePoset::new(
            vec!["a".into(), "b".into()],
            &[(0, 0), (1, 1), (0, 1), (1, 0)],
        );
        assert!(matches!(r, Err(Error::InvalidPoset(_))));
        // Not transitive.
        let r = FinitePoset::new(
            vec!["a".into(), "b".into(), "c".into()],
            &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)],
        );
        assert!(matches!(r, Err(Error::InvalidPoset(_))));
        // Not reflexive.
        let r = FinitePoset::new(vec!["a".into()], &[]);
        assert!(matches!(r, Err(Error::InvalidPoset(_))));
    }

    #[test]
    fn covers_close_transitively() {
        let p = FinitePoset::from_covers(
            vec!["bot".into(), "a".into(), "top".into()],
            &[(0, 1), (1, 2)],
        )
        .unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.bottom(), Some(0));
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn l_domain_recognition_examples() {
        assert!(is_l_domain(&fixtures::point()).is_l_domain);
        assert!(is_l_domain(&fixtures::m_poset()).is_l_domain);
        assert!(is_l_domain(&fixtures::diamond()).is_l_domain);
        // bot < a,b < c,d: a and b have two incomparable joins below c.
        let p = FinitePoset::from_covers(
            vec!["bot".into(), "a".into(), "b".into(), "c".into(), "d".into()],
            &[(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4)],
        )
        .unwrap();
        let check = is_l_domain(&p);
        assert!(check.is_l_domain, "{}", check.diagnostic);

        // Adding e above c,d only: down(e) contains a,b with joins c,d
        // incomparable, so it is not a lattice.
        let q = FinitePoset::from_covers(
            vec![
                "bot".into(), "a".into(), "b".into(), "c".into(), "d".into(), "e".into(),
            ],
            &[(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 5), (4, 5)],
        )
        .unwrap();
        let check = is_l_domain(&q);
        assert!(!check.is_l_domain);
        assert!(check.diagnostic.contains("no join"), "{}", check.diagnostic);
    }

    #[test]
    fn minimal_upper_bound_examples() {
        let m = fixtures::m_poset();
        let bot = m.index_of("bot").unwrap();
        assert_eq!(minimal_upper_bounds(&m, &[bot]), vec![bot]);
        let a = m.index_of("a").unwrap();
        let b = m.index_of("b").unwrap();
        let mubs = minimal_upper_bounds(&m, &[a, b]);
        let names: Vec<&str> = mubs.iter().map(|&i| m.name(i)).collect();
        assert_eq!(names, vec!["c", "d"]);
        assert_eq!(supremum(&m, &[a, b]), None);

        let d = fixtures::diamond();
        let a = d.index_of("a").unwrap();
        let b = d.index_of("b").unwrap();
        let top = d.index_of("top").unwrap();
        assert_eq!(minimal_upper_bounds(&d, &[a, b]), vec![top]);
        assert_eq!(supremum(&d, &[a, b]), Some(top));
    }

    #[test]
    fn decomposable_sets_examples() {
        // One-point domain: only Empty and Whole.
        let sets = decomposable_sets(&fixtures::point()).unwrap();
        assert_eq!(sets.len(), 2);

        // Two-chain: Empty, Whole, up(a).
        let sets = decomposable_sets(&fixtures::chain2()).unwrap();
        assert_eq!(sets.len(), 3);

        // M-poset: up({c,d}) is decomposable since up(c) and up(d) are
        // disjoint.
        let m = fixtures::m_poset();
        let c = m.index_of("c").unwrap();
        let d = m.index_of("d").unwrap();
        let cd = DecomposableSet::from_generators(&m, &[c, d]).unwrap();
        let sets = decomposable_sets(&m).unwrap();
        assert!(sets.contains(&cd));
        // But up({a,b}) is not: a and b share the upper bound c.
        let a = m.index_of("a").unwrap();
        let b = m.index_of("b").unwrap();
        assert!(DecomposableSet::from_generators(&m, &[a, b]).is_err());
    }

    #[test]
    fn mub_decomposition_identity() {
        // In an L-domain, for every nonempty element set with an upper
        // bound, the intersection of the up-sets is the disjoint union of
        // the up-sets of the minimal upper bounds.
        for (name, p) in fixtures::poset_fixtures() {
            let n = p.len();
            for subset in 1u32..(1 << n) {
                let xs: Vec<usize> = p.elements_of_mask(subset).collect();
                let mut inter = p.full_mask();
                for &x in &xs {
                    inter &= p.up_mask(x);
                }
                let mubs = minimal_upper_bounds(&p, &xs);
                assert_eq!(mubs.is_empty(), inter == 0, "{name}: emptiness mismatch");
                let mut union = 0u32;
                for &m in &mubs {
                    union |= p.up_mask(m);
                }
                assert_eq!(inter, union, "{name}: decomposition fails for {xs:?}");
                for (i, &a) in mubs.iter().enumerate() {
                    for &b in &mubs[i + 1..] {
                        assert_eq!(
                            p.up_mask(a) & p.up_mask(b),
                            0,
                            "{name}: mubs of {xs:?} are not pairwise inconsistent"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn decomposable_sets_closed_under_ops() {
        for p in [fixtures::m_poset(), fixtures::diamond(), fixtures::flat3()] {
            let sets = decomposable_sets(&p).unwrap();
            for u in &sets {
                for v in &sets {
                    let inter = u.intersect(v);
                    assert!(sets.contains(&inter), "intersection closure in {}", p.name(0));
                    if u.mask() & v.mask() == 0 {
                        let uni = u.disjoint_union(v).unwrap();
                        assert!(sets.contains(&uni), "disjoint-union closure");
                    }
                }
            }
        }
    }

    #[test]
    fn monotone_map_counts() {
        let point = fixtures::point();
        let chain = fixtures::chain2();
        assert_eq!(monotone_maps(&point, &chain, 10_000).unwrap().len(), 2);
        assert_eq!(monotone_maps(&chain, &chain, 10_000).unwrap().len(), 3);
        // Flat three-point domain to the two-chain: bottom low leaves the
        // two incomparable points free (4 maps), bottom high forces both
        // points high (1 map).
        let flat = fixtures::flat3();
        assert_eq!(monotone_maps(&flat, &chain, 10_000).unwrap().len(), 5);
    }

    #[test]
    fn order_iso_examples() {
        let d = fixtures::diamond();
        let id: ElementMap = (0..d.len()).collect();
        assert!(order_iso(&d, &d, &id));
        let point = fixtures::point();
        assert!(order_iso(&point, &point, &vec![0]));
        let chain = fixtures::chain2();
        assert!(!order_iso(&chain, &chain, &vec![0, 0]));
        // Swapping the incomparable middle elements of the diamond is an
        // automorphism.
        let a = d.index_of("a").unwrap();
        let b = d.index_of("b").unwrap();
        let mut swap: ElementMap = (0..d.len()).collect();
        swap[a] = b;
        swap[b] = a;
        assert!(order_iso(&d, &d, &swap));
    }

    #[test]
    fn pos_format_round_trip() {
        let m = fixtures::m_poset();
        let text = m.to_pos_format();
        let back = FinitePoset::parse(&text).unwrap();
        assert_eq!(m, back);
        assert!(FinitePoset::parse("elem a\nelem b\n").is_err()); // no bottom
    }
}
