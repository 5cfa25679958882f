//! Formula and sequent syntax: atoms, disjunctive bases, certified
//! construction, parsing and printing, conjunction classes and flat forms.
//!
//! The disjunction constructor is the only way to build an n-ary `|` node,
//! and it certifies pairwise disjointness against a calculus backend. That
//! makes "every `Disj` node has provably contradictory parts" a structural
//! invariant of [`Formula`], which the flattening engine depends on.

use std::collections::BTreeSet;
use std::fmt;

use crate::calculus::Calculus;
use crate::error::{Error, Result};

/// An atomic formula symbol. Names are tokens of the form
/// `[A-Za-z][A-Za-z0-9_]*`; `T` and `F` are reserved for the constants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Atom> {
        let name = name.into();
        if !is_atom_token(&name) {
            return Err(Error::InvalidBasis(format!(
                "`{name}` is not a legal atom token"
            )));
        }
        if name == "T" || name == "F" {
            return Err(Error::InvalidBasis(format!(
                "`{name}` is reserved for a constant and cannot name an atom"
            )));
        }
        Ok(Atom(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_atom_token(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Shape of a formula node. Obtainable from a [`Formula`] via
/// [`Formula::kind`]; not constructible directly, so that `Disj` nodes can
/// only come from the certifying constructor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormulaKind {
    /// The constant `T`.
    Top,
    /// The constant `F`.
    Bottom,
    /// An atomic formula.
    Atom(Atom),
    /// Binary conjunction `&`.
    Conj(Box<Formula>, Box<Formula>),
    /// N-ary disjoint disjunction `|`, always with at least two parts.
    Disj(Vec<Formula>),
}

/// A disjunctive formula. Structural equality is syntactic; logical
/// equivalence is decided by a calculus backend.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Formula {
    kind: FormulaKind,
}

impl Formula {
    pub fn top() -> Formula {
        Formula { kind: FormulaKind::Top }
    }

    pub fn bottom() -> Formula {
        Formula { kind: FormulaKind::Bottom }
    }

    pub fn atom(a: Atom) -> Formula {
        Formula { kind: FormulaKind::Atom(a) }
    }

    pub fn conj(left: Formula, right: Formula) -> Formula {
        Formula {
            kind: FormulaKind::Conj(Box::new(left), Box::new(right)),
        }
    }

    /// Conjunction of a nonempty slice, associated to the left.
    pub fn conj_all(parts: &[Formula]) -> Formula {
        assert!(!parts.is_empty(), "conj_all needs at least one part");
        let mut it = parts.iter().cloned();
        let first = it.next().unwrap();
        it.fold(first, Formula::conj)
    }

    /// The certifying disjunction constructor. A single part collapses to
    /// itself; otherwise every pair of parts must satisfy `a, b |- F` in
    /// `calc`. Parts are sorted and syntactic duplicates dropped, so the
    /// result is canonical.
    pub fn disj(parts: Vec<Formula>, calc: &dyn Calculus) -> Result<Formula> {
        if parts.is_empty() {
            return Err(Error::PreconditionViolated(
                "disjunction of an empty list (write F instead)".into(),
            ));
        }
        let mut parts: Vec<Formula> = parts;
        parts.sort();
        parts.dedup();
        if parts.len() == 1 {
            return Ok(parts.pop().unwrap());
        }
        for i in 0..parts.len() {
            for j in (i + 1)..parts.len() {
                let gamma: BTreeSet<Formula> =
                    [parts[i].clone(), parts[j].clone()].into_iter().collect();
                if !calc.entails(&gamma, &Formula::bottom())? {
                    return Err(Error::DisjointnessViolation {
                        left: parts[i].to_string(),
                        right: parts[j].to_string(),
                    });
                }
            }
        }
        Ok(Formula { kind: FormulaKind::Disj(parts) })
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.kind
    }

    /// Syntactic size: the number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match &self.kind {
            FormulaKind::Top | FormulaKind::Bottom | FormulaKind::Atom(_) => 1,
            FormulaKind::Conj(l, r) => 1 + l.size() + r.size(),
            FormulaKind::Disj(parts) => 1 + parts.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// All atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match &self.kind {
            FormulaKind::Top | FormulaKind::Bottom => {}
            FormulaKind::Atom(a) => {
                out.insert(a.clone());
            }
            FormulaKind::Conj(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
            FormulaKind::Disj(parts) => {
                for p in parts {
                    p.collect_atoms(out);
                }
            }
        }
    }

    /// True when the tree uses only atoms and `&`, i.e. the formula is a
    /// candidate conjunction in the sense of the flat-form machinery.
    pub fn is_conjunction_shaped(&self) -> bool {
        match &self.kind {
            FormulaKind::Atom(_) => true,
            FormulaKind::Conj(l, r) => l.is_conjunction_shaped() && r.is_conjunction_shaped(),
            _ => false,
        }
    }

    /// The atom set of a conjunction-shaped formula, as a canonical class.
    pub fn as_conjunction_class(&self) -> Option<ConjunctionClass> {
        if !self.is_conjunction_shaped() {
            return None;
        }
        Some(ConjunctionClass { atoms: self.atoms() })
    }

    /// Recognize a syntactic flat-formula candidate: either a conjunction
    /// shape (one class) or a `|` node all of whose parts are conjunction
    /// shaped. Satisfiability of the classes is the caller's concern.
    pub fn as_flat_candidate(&self) -> Option<Vec<ConjunctionClass>> {
        if let Some(c) = self.as_conjunction_class() {
            return Some(vec![c]);
        }
        if let FormulaKind::Disj(parts) = &self.kind {
            let mut classes = Vec::with_capacity(parts.len());
            for p in parts {
                classes.push(p.as_conjunction_class()?);
            }
            return Some(classes);
        }
        None
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl Formula {
    /// `level` 0: disjunction context, 1: left of `&`, 2: right of `&`.
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
        match &self.kind {
            FormulaKind::Top => f.write_str("T"),
            FormulaKind::Bottom => f.write_str("F"),
            FormulaKind::Atom(a) => write!(f, "{a}"),
            FormulaKind::Conj(l, r) => {
                // `&` is left associative, so a right-nested conjunction
                // needs parentheses to round-trip structurally.
                let parens = level >= 2;
                if parens {
                    f.write_str("(")?;
                }
                l.fmt_prec(f, 1)?;
                f.write_str(" & ")?;
                r.fmt_prec(f, 2)?;
                if parens {
                    f.write_str(")")?;
                }
                Ok(())
            }
            FormulaKind::Disj(parts) => {
                let parens = level >= 1;
                if parens {
                    f.write_str("(")?;
                }
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    // A nested disjunction must keep its own parentheses or
                    // reparsing would splice it into the outer group.
                    let nested = matches!(p.kind(), FormulaKind::Disj(_));
                    p.fmt_prec(f, if nested { 1 } else { 0 })?;
                }
                if parens {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Render a formula. Inverse of [`parse_formula`] up to structural equality.
pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

/// A sequent `g1, g2, ... |- f`. The antecedent is a set: duplicates are
/// removed and order is irrelevant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub antecedent: BTreeSet<Formula>,
    pub succedent: Formula,
}

impl Sequent {
    pub fn new(antecedent: impl IntoIterator<Item = Formula>, succedent: Formula) -> Sequent {
        Sequent {
            antecedent: antecedent.into_iter().collect(),
            succedent,
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        if self.antecedent.is_empty() {
            f.write_str("|- ")?;
        } else {
            f.write_str(" |- ")?;
        }
        write!(f, "{}", self.succedent)
    }
}

/// A finite disjunctive basis: atoms plus atomic disjointness axioms. Each
/// axiom `{p1, ..., pn}` stands for the sequent `p1, ..., pn |- F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjunctiveBasis {
    atoms: BTreeSet<Atom>,
    axioms: BTreeSet<BTreeSet<Atom>>,
}

impl DisjunctiveBasis {
    pub fn new(
        atoms: impl IntoIterator<Item = Atom>,
        axioms: impl IntoIterator<Item = BTreeSet<Atom>>,
    ) -> Result<DisjunctiveBasis> {
        let atoms: BTreeSet<Atom> = atoms.into_iter().collect();
        let axioms: BTreeSet<BTreeSet<Atom>> = axioms.into_iter().collect();
        for ax in &axioms {
            if ax.is_empty() {
                // An empty axiom would make `T |- F` valid and collapse the
                // calculus; reject it at load time.
                return Err(Error::InvalidBasis("empty axiom".into()));
            }
            for a in ax {
                if !atoms.contains(a) {
                    return Err(Error::InvalidBasis(format!(
                        "axiom mentions unknown atom `{a}`"
                    )));
                }
            }
        }
        Ok(DisjunctiveBasis { atoms, axioms })
    }

    /// Convenience constructor from string names.
    pub fn from_names<S: AsRef<str>>(atoms: &[S], axioms: &[&[S]]) -> Result<DisjunctiveBasis> {
        let atom_list: Vec<Atom> = atoms
            .iter()
            .map(|s| Atom::new(s.as_ref()))
            .collect::<Result<_>>()?;
        let mut axiom_sets = Vec::new();
        for ax in axioms {
            let set: BTreeSet<Atom> = ax
                .iter()
                .map(|s| Atom::new(s.as_ref()))
                .collect::<Result<_>>()?;
            axiom_sets.push(set);
        }
        DisjunctiveBasis::new(atom_list, axiom_sets)
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    pub fn axioms(&self) -> &BTreeSet<BTreeSet<Atom>> {
        &self.axioms
    }

    /// Parse the line-oriented `.dsb` format: `atom <name>` and
    /// `axiom <name> <name> ...` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<DisjunctiveBasis> {
        let mut atoms: Vec<Atom> = Vec::new();
        let mut axioms: Vec<BTreeSet<Atom>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("atom") => {
                    let name = words.next().ok_or_else(|| {
                        Error::InvalidBasis(format!("line {}: atom needs a name", lineno + 1))
                    })?;
                    if words.next().is_some() {
                        return Err(Error::InvalidBasis(format!(
                            "line {}: one atom per line",
                            lineno + 1
                        )));
                    }
                    let atom = Atom::new(name)?;
                    if atoms.contains(&atom) {
                        return Err(Error::InvalidBasis(format!(
                            "line {}: duplicate atom `{name}`",
                            lineno + 1
                        )));
                    }
                    atoms.push(atom);
                }
                Some("axiom") => {
                    let set: BTreeSet<Atom> = words.map(Atom::new).collect::<Result<_>>()?;
                    if set.is_empty() {
                        return Err(Error::InvalidBasis(format!(
                            "line {}: empty axiom",
                            lineno + 1
                        )));
                    }
                    axioms.push(set);
                }
                Some(other) => {
                    return Err(Error::InvalidBasis(format!(
                        "line {}: unknown directive `{other}`",
                        lineno + 1
                    )));
                }
                None => unreachable!(),
            }
        }
        DisjunctiveBasis::new(atoms, axioms)
    }
}

impl fmt::Display for DisjunctiveBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.atoms {
            writeln!(f, "atom {a}")?;
        }
        for ax in &self.axioms {
            write!(f, "axiom")?;
            for a in ax {
                write!(f, " {a}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A conjunction of atoms up to associativity, commutativity and
/// idempotence: a canonical nonempty sorted atom set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConjunctionClass {
    atoms: BTreeSet<Atom>,
}

impl ConjunctionClass {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Result<ConjunctionClass> {
        let atoms: BTreeSet<Atom> = atoms.into_iter().collect();
        if atoms.is_empty() {
            return Err(Error::NotAConjunction("empty atom set".into()));
        }
        Ok(ConjunctionClass { atoms })
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    pub fn contains(&self, other: &ConjunctionClass) -> bool {
        other.atoms.is_subset(&self.atoms)
    }

    /// The canonical formula `a1 & a2 & ...` in sorted atom order.
    pub fn to_formula(&self) -> Formula {
        let parts: Vec<Formula> = self.atoms.iter().cloned().map(Formula::atom).collect();
        Formula::conj_all(&parts)
    }
}

impl fmt::Display for ConjunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// The flattening verdict for a formula: logically a tautology, logically a
/// contradiction, or equivalent to a disjoint disjunction of satisfiable
/// conjunction classes. Flat lists are sorted, so equality is syntactic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlatForm {
    TautologyEquivalent,
    ContradictionEquivalent,
    Flat(Vec<ConjunctionClass>),
}

impl FlatForm {
    /// The canonical formula of a flat form. Tautology and contradiction
    /// render as `T` and `F`; a flat list becomes its disjoint disjunction,
    /// re-certified against the given backend.
    pub fn to_formula(&self, calc: &dyn Calculus) -> Result<Formula> {
        match self {
            FlatForm::TautologyEquivalent => Ok(Formula::top()),
            FlatForm::ContradictionEquivalent => Ok(Formula::bottom()),
            FlatForm::Flat(classes) => {
                let parts: Vec<Formula> = classes.iter().map(ConjunctionClass::to_formula).collect();
                Formula::disj(parts, calc)
            }
        }
    }
}

impl fmt::Display for FlatForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatForm::TautologyEquivalent => f.write_str("T"),
            FlatForm::ContradictionEquivalent => f.write_str("F"),
            FlatForm::Flat(classes) => {
                for (i, c) in classes.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    if c.atoms().len() > 1 && classes.len() > 1 {
                        write!(f, "({c})")?;
                    } else {
                        write!(f, "{c}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Amp,
    Pipe,
    LParen,
    RParen,
    Comma,
    Turnstile,
}

struct Lexer<'a> {
    src: &'a str,
    tokens: Vec<(usize, Token)>,
}

impl<'a> Lexer<'a> {
    fn lex(src: &'a str) -> Result<Lexer<'a>> {
        let bytes = src.as_bytes();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            match c {
                ' ' | '\t' | '\r' | '\n' => i += 1,
                '&' => {
                    tokens.push((i, Token::Amp));
                    i += 1;
                }
                '|' => {
                    if i + 1 < bytes.len() && bytes[i + 1] == b'-' {
                        tokens.push((i, Token::Turnstile));
                        i += 2;
                    } else {
                        tokens.push((i, Token::Pipe));
                        i += 1;
                    }
                }
                '(' => {
                    tokens.push((i, Token::LParen));
                    i += 1;
                }
                ')' => {
                    tokens.push((i, Token::RParen));
                    i += 1;
                }
                ',' => {
                    tokens.push((i, Token::Comma));
                    i += 1;
                }
                c if c.is_ascii_alphabetic() => {
                    let start = i;
                    while i < bytes.len()
                        && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    tokens.push((start, Token::Ident(src[start..i].to_string())));
                }
                other => {
                    return Err(Error::Syntax {
                        pos: i,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            }
        }
        Ok(Lexer { src, tokens })
    }
}

/// Recursive-descent parser over the token stream. Grammar:
///
/// ```text
/// formula  := conjunct ( '|' conjunct )*
/// conjunct := primary ( '&' primary )*
/// primary  := 'T' | 'F' | atom | '(' formula ')'
/// sequent  := ( formula ( ',' formula )* )? '|-' formula
/// ```
struct Parser<'a, 'c> {
    lexer: Lexer<'a>,
    pos: usize,
    calc: &'c dyn Calculus,
}

impl<'a, 'c> Parser<'a, 'c> {
    fn peek(&self) -> Option<&Token> {
        self.lexer.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.lexer
            .tokens
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.lexer.src.len())
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.lexer.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Token, what: &str) -> Result<()> {
        let pos = self.here();
        match self.bump() {
            Some(ref t) if t == want => Ok(()),
            _ => Err(Error::Syntax { pos, msg: format!("expected {what}") }),
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        let pos = self.here();
        match self.bump() {
            Some(Token::Ident(name)) => match name.as_str() {
                "T" => Ok(Formula::top()),
                "F" => Ok(Formula::bottom()),
                _ => {
                    let atom = Atom::new(&name)
                        .map_err(|_| Error::Syntax { pos, msg: format!("bad atom `{name}`") })?;
                    if !self.calc.atom_universe().contains(&atom) {
                        return Err(Error::UnknownAtom(name));
                    }
                    Ok(Formula::atom(atom))
                }
            },
            Some(Token::LParen) => {
                let inner = self.formula()?;
                self.expect(&Token::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(Error::Syntax { pos, msg: "expected a formula".into() }),
        }
    }

    fn conjunct(&mut self) -> Result<Formula> {
        let mut acc = self.primary()?;
        while self.peek() == Some(&Token::Amp) {
            self.bump();
            let rhs = self.primary()?;
            acc = Formula::conj(acc, rhs);
        }
        Ok(acc)
    }

    fn formula(&mut self) -> Result<Formula> {
        let first = self.conjunct()?;
        let mut parts = vec![first];
        while self.peek() == Some(&Token::Pipe) {
            self.bump();
            parts.push(self.conjunct()?);
        }
        if parts.len() == 1 {
            Ok(parts.pop().unwrap())
        } else {
            Formula::disj(parts, self.calc)
        }
    }

    fn sequent(&mut self) -> Result<Sequent> {
        let mut antecedent = Vec::new();
        if self.peek() != Some(&Token::Turnstile) {
            loop {
                antecedent.push(self.formula()?);
                match self.peek() {
                    Some(Token::Comma) => {
                        self.bump();
                    }
                    _ => break,
                }
            }
        }
        self.expect(&Token::Turnstile, "`|-`")?;
        let succedent = self.formula()?;
        Ok(Sequent::new(antecedent, succedent))
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.lexer.tokens.len() {
            return Err(Error::Syntax {
                pos: self.here(),
                msg: "trailing input".into(),
            });
        }
        Ok(())
    }
}

/// Parse a formula against a calculus. Every `|` group is certified through
/// the backend, so the result always satisfies the `Disj` invariant.
pub fn parse_formula(text: &str, calc: &dyn Calculus) -> Result<Formula> {
    let mut parser = Parser { lexer: Lexer::lex(text)?, pos: 0, calc };
    let f = parser.formula()?;
    parser.finish()?;
    Ok(f)
}

/// Parse a sequent `g1, g2 |- f`; the empty antecedent is written `|- f`.
pub fn parse_sequent(text: &str, calc: &dyn Calculus) -> Result<Sequent> {
    let mut parser = Parser { lexer: Lexer::lex(text)?, pos: 0, calc };
    let s = parser.sequent()?;
    parser.finish()?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::FreeCalculus;

    fn basis_pq_axiom() -> FreeCalculus {
        let basis =
            DisjunctiveBasis::from_names(&["p", "q"], &[&["p", "q"]]).unwrap();
        FreeCalculus::new(basis)
    }

    fn basis_pq_free() -> FreeCalculus {
        let basis = DisjunctiveBasis::from_names::<&str>(&["p", "q"], &[]).unwrap();
        FreeCalculus::new(basis)
    }

    #[test]
    fn atom_names_validated() {
        assert!(Atom::new("p").is_ok());
        assert!(Atom::new("up_c2").is_ok());
        assert!(Atom::new("2p").is_err());
        assert!(Atom::new("").is_err());
        assert!(Atom::new("T").is_err());
        assert!(Atom::new("F").is_err());
    }

    #[test]
    fn parse_constants_and_atoms() {
        let calc = basis_pq_axiom();
        assert_eq!(parse_formula("T", &calc).unwrap(), Formula::top());
        assert_eq!(parse_formula("F", &calc).unwrap(), Formula::bottom());
        let p = Formula::atom(Atom::new("p").unwrap());
        assert_eq!(parse_formula("p", &calc).unwrap(), p);
        assert!(matches!(
            parse_formula("r", &calc),
            Err(Error::UnknownAtom(_))
        ));
    }

    #[test]
    fn parse_conj_is_left_assoc() {
        let calc = basis_pq_axiom();
        let f = parse_formula("F & p", &calc).unwrap();
        assert_eq!(
            f,
            Formula::conj(Formula::bottom(), Formula::atom(Atom::new("p").unwrap()))
        );
        let g = parse_formula("p & q & T", &calc).unwrap();
        assert_eq!(g.size(), 5);
        assert_eq!(g.to_string(), "p & q & T");
    }

    #[test]
    fn disjunction_requires_certificate() {
        let with_axiom = basis_pq_axiom();
        let f = parse_formula("p | q", &with_axiom).unwrap();
        assert!(matches!(f.kind(), FormulaKind::Disj(parts) if parts.len() == 2));

        let free = basis_pq_free();
        assert!(matches!(
            parse_formula("p | q", &free),
            Err(Error::DisjointnessViolation { .. })
        ));
    }

    #[test]
    fn disj_singleton_collapses() {
        let calc = basis_pq_axiom();
        let p = Formula::atom(Atom::new("p").unwrap());
        assert_eq!(Formula::disj(vec![p.clone()], &calc).unwrap(), p);
    }

    #[test]
    fn degenerate_disjunction_is_constructible() {
        // T | (F & p) is well-formed because T, F & p |- F holds.
        let calc = basis_pq_free();
        let f = parse_formula("T | F & p", &calc).unwrap();
        assert!(matches!(f.kind(), FormulaKind::Disj(parts) if parts.len() == 2));
    }

    #[test]
    fn printing_round_trips() {
        let calc = basis_pq_axiom();
        for text in [
            "T",
            "F",
            "p",
            "p & q",
            "p | q",
            "(p | q) & p",
            "p & (q & T)",
            "F & p & q",
            "T | F & p",
        ] {
            let f = parse_formula(text, &calc).unwrap();
            let printed = print_formula(&f);
            let again = parse_formula(&printed, &calc).unwrap();
            assert_eq!(f, again, "`{text}` printed as `{printed}`");
        }
    }

    #[test]
    fn sequent_parsing() {
        let calc = basis_pq_axiom();
        let s = parse_sequent("p, q |- F", &calc).unwrap();
        assert_eq!(s.antecedent.len(), 2);
        assert_eq!(s.succedent, Formula::bottom());
        let t = parse_sequent("|- T", &calc).unwrap();
        assert!(t.antecedent.is_empty());
        // Duplicates in the antecedent collapse.
        let d = parse_sequent("p, p |- q", &calc).unwrap();
        assert_eq!(d.antecedent.len(), 1);
        assert_eq!(d.to_string(), "p |- q");
    }

    #[test]
    fn basis_validation() {
        assert!(matches!(
            DisjunctiveBasis::from_names(&["p"], &[&[] as &[&str]]),
            Err(Error::InvalidBasis(_))
        ));
        assert!(matches!(
            DisjunctiveBasis::from_names(&["p"], &[&["q"]]),
            Err(Error::InvalidBasis(_))
        ));
    }

    #[test]
    fn basis_file_format() {
        let text = "# sample basis\natom p\natom q\naxiom p q\n";
        let basis = DisjunctiveBasis::parse(text).unwrap();
        assert_eq!(basis.atoms().len(), 2);
        assert_eq!(basis.axioms().len(), 1);
        let rendered = basis.to_string();
        let again = DisjunctiveBasis::parse(&rendered).unwrap();
        assert_eq!(basis, again);
        assert!(DisjunctiveBasis::parse("atom p\naxiom\n").is_err());
        assert!(DisjunctiveBasis::parse("atom p\natom p\n").is_err());
    }
}
