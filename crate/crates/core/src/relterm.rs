//! Relational terms over `{∧, ∘, +}`.
//!
//! Concrete syntax: `&`/`∧` for meet, `o`/`∘` for composition, `+` for the
//! join-like `R + T`, parentheses, and `<=`/`≤` between the two sides of an
//! inequality. Meet binds tighter than composition, which binds tighter than
//! `+`; all three are left-associative.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::error::{Error, Result};

/// A relation variable. Identity is the index alone; the name is display-only.
#[derive(Clone, Debug)]
pub struct VarId {
    index: usize,
    name: Option<String>,
}

impl VarId {
    pub fn new(index: usize) -> Self {
        assert!(index >= 1, "variable indices start at 1");
        VarId { index, name: None }
    }

    pub fn named(index: usize, name: impl Into<String>) -> Self {
        assert!(index >= 1, "variable indices start at 1");
        VarId {
            index,
            name: Some(name.into()),
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// The name used in printed output: the source name, or `X<index>`.
    pub fn display_name(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => format!("X{}", self.index),
        }
    }
}

impl PartialEq for VarId {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index
    }
}

impl Eq for VarId {}

impl Hash for VarId {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.index.hash(state);
    }
}

impl PartialOrd for VarId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VarId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index.cmp(&other.index)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RelTerm {
    Var(VarId),
    Meet(Box<RelTerm>, Box<RelTerm>),
    Compose(Box<RelTerm>, Box<RelTerm>),
    Plus(Box<RelTerm>, Box<RelTerm>),
}

impl RelTerm {
    pub fn var(v: VarId) -> Self {
        RelTerm::Var(v)
    }

    pub fn meet(a: RelTerm, b: RelTerm) -> Self {
        RelTerm::Meet(Box::new(a), Box::new(b))
    }

    pub fn compose(a: RelTerm, b: RelTerm) -> Self {
        RelTerm::Compose(Box::new(a), Box::new(b))
    }

    pub fn plus(a: RelTerm, b: RelTerm) -> Self {
        RelTerm::Plus(Box::new(a), Box::new(b))
    }

    pub fn is_plus_free(&self) -> bool {
        match self {
            RelTerm::Var(_) => true,
            RelTerm::Plus(..) => false,
            RelTerm::Meet(a, b) | RelTerm::Compose(a, b) => a.is_plus_free() && b.is_plus_free(),
        }
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            RelTerm::Var(v) => {
                out.insert(v.clone());
            }
            RelTerm::Meet(a, b) | RelTerm::Compose(a, b) | RelTerm::Plus(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Number of distinct variables.
    pub fn arity(&self) -> usize {
        self.vars().len()
    }

    /// Number of variable occurrences (leaves).
    pub fn occurrences(&self) -> usize {
        match self {
            RelTerm::Var(_) => 1,
            RelTerm::Meet(a, b) | RelTerm::Compose(a, b) | RelTerm::Plus(a, b) => {
                a.occurrences() + b.occurrences()
            }
        }
    }

    pub fn compose_count(&self) -> usize {
        match self {
            RelTerm::Var(_) => 0,
            RelTerm::Compose(a, b) => 1 + a.compose_count() + b.compose_count(),
            RelTerm::Meet(a, b) | RelTerm::Plus(a, b) => a.compose_count() + b.compose_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            RelTerm::Var(_) => 0,
            RelTerm::Meet(a, b) | RelTerm::Compose(a, b) | RelTerm::Plus(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Direct subterms, left to right.
    pub fn children(&self) -> Vec<&RelTerm> {
        match self {
            RelTerm::Var(_) => Vec::new(),
            RelTerm::Meet(a, b) | RelTerm::Compose(a, b) | RelTerm::Plus(a, b) => {
                vec![a.as_ref(), b.as_ref()]
            }
        }
    }

    pub fn render(&self, format: TermFormat) -> String {
        let mut out = String::new();
        self.write(format, &mut out);
        out
    }

    fn level(&self) -> u8 {
        match self {
            RelTerm::Plus(..) => 1,
            RelTerm::Compose(..) => 2,
            RelTerm::Meet(..) => 3,
            RelTerm::Var(_) => 4,
        }
    }

    fn write(&self, format: TermFormat, out: &mut String) {
        let (a, b, op) = match self {
            RelTerm::Var(v) => {
                out.push_str(&render_var(v, format));
                return;
            }
            RelTerm::Meet(a, b) => (a, b, format.meet()),
            RelTerm::Compose(a, b) => (a, b, format.compose()),
            RelTerm::Plus(a, b) => (a, b, " + "),
        };
        let level = self.level();
        write_child(a, a.level() < level, format, out);
        out.push_str(op);
        write_child(b, b.level() <= level, format, out);
    }
}

fn write_child(t: &RelTerm, parens: bool, format: TermFormat, out: &mut String) {
    if parens {
        out.push('(');
        t.write(format, out);
        out.push(')');
    } else {
        t.write(format, out);
    }
}

fn render_var(v: &VarId, format: TermFormat) -> String {
    let name = v.display_name();
    match format {
        TermFormat::Text => name,
        TermFormat::Latex => {
            let split = name
                .char_indices()
                .find(|(_, c)| c.is_ascii_digit())
                .map(|(i, _)| i);
            match split {
                Some(i) if i > 0 && name[i..].chars().all(|c| c.is_ascii_digit()) => {
                    format!("{}_{{{}}}", &name[..i], &name[i..])
                }
                _ => name,
            }
        }
    }
}

impl fmt::Display for RelTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(TermFormat::Text))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermFormat {
    Text,
    Latex,
}

impl TermFormat {
    fn meet(self) -> &'static str {
        match self {
            TermFormat::Text => " & ",
            TermFormat::Latex => " \\wedge ",
        }
    }

    fn compose(self) -> &'static str {
        match self {
            TermFormat::Text => " o ",
            TermFormat::Latex => " \\circ ",
        }
    }
}

/// An inequality `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub lhs: RelTerm,
    pub rhs: RelTerm,
}

impl Inequality {
    pub fn new(lhs: RelTerm, rhs: RelTerm) -> Self {
        Inequality { lhs, rhs }
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    pub fn render(&self, format: TermFormat) -> String {
        let sep = match format {
            TermFormat::Text => " <= ",
            TermFormat::Latex => " \\leq ",
        };
        format!("{}{}{}", self.lhs.render(format), sep, self.rhs.render(format))
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(TermFormat::Text))
    }
}

/// Left variables `L_t`. Defined only for `+`-free terms.
pub fn left_vars(t: &RelTerm) -> Result<BTreeSet<VarId>> {
    side_vars(t, Side::Left)
}

/// Right variables `R_t`. Defined only for `+`-free terms.
pub fn right_vars(t: &RelTerm) -> Result<BTreeSet<VarId>> {
    side_vars(t, Side::Right)
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn side_vars(t: &RelTerm, side: Side) -> Result<BTreeSet<VarId>> {
    match t {
        RelTerm::Var(v) => Ok(BTreeSet::from([v.clone()])),
        RelTerm::Compose(a, b) => match side {
            Side::Left => side_vars(a, side),
            Side::Right => side_vars(b, side),
        },
        RelTerm::Meet(a, b) => {
            let mut s = side_vars(a, side)?;
            s.extend(side_vars(b, side)?);
            Ok(s)
        }
        RelTerm::Plus(..) => Err(Error::PlusNotAllowed),
    }
}

/// Membership in the inductive class of regular `{∘, ∧}`-terms.
pub fn is_regular(t: &RelTerm) -> Result<bool> {
    // Returns (regular, L, R) in one pass.
    fn walk(t: &RelTerm) -> Result<(bool, BTreeSet<VarId>, BTreeSet<VarId>)> {
        match t {
            RelTerm::Var(v) => Ok((true, BTreeSet::from([v.clone()]), BTreeSet::from([v.clone()]))),
            RelTerm::Compose(a, b) => {
                let (ra, la, rra) = walk(a)?;
                let (rb, lb, rrb) = walk(b)?;
                let ok = ra && rb && rra.is_disjoint(&lb);
                Ok((ok, la, rrb))
            }
            RelTerm::Meet(a, b) => {
                let (ra, mut la, mut rra) = walk(a)?;
                let (rb, lb, rrb) = walk(b)?;
                let ok = ra && rb && la.is_disjoint(&lb) && rra.is_disjoint(&rrb);
                la.extend(lb);
                rra.extend(rrb);
                Ok((ok, la, rra))
            }
            RelTerm::Plus(..) => Err(Error::PlusNotAllowed),
        }
    }
    walk(t).map(|(ok, _, _)| ok)
}

/// Replaces every `u + v` by the alternating product `u ∘ v ∘ u ∘ …` with
/// exactly `k` factors, innermost occurrences first.
pub fn expand_plus(t: &RelTerm, k: usize) -> Result<RelTerm> {
    if k < 2 {
        return Err(Error::InvalidK { k, min: 2 });
    }
    Ok(expand(t, k))
}

fn expand(t: &RelTerm, k: usize) -> RelTerm {
    match t {
        RelTerm::Var(_) => t.clone(),
        RelTerm::Meet(a, b) => RelTerm::meet(expand(a, k), expand(b, k)),
        RelTerm::Compose(a, b) => RelTerm::compose(expand(a, k), expand(b, k)),
        RelTerm::Plus(a, b) => {
            let u = expand(a, k);
            let v = expand(b, k);
            kfold_term(&u, &v, k)
        }
    }
}

/// The `{∘}`-term `u ∘ v ∘ u ∘ …` with `k ≥ 1` factors, left-associated.
pub fn kfold_term(u: &RelTerm, v: &RelTerm, k: usize) -> RelTerm {
    assert!(k >= 1);
    let mut acc = u.clone();
    for i in 1..k {
        let next = if i % 2 == 0 { u } else { v };
        acc = RelTerm::compose(acc, next.clone());
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
}

/// Result of [`parse`]: a bare term or an inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Term(RelTerm),
    Inequality(Inequality),
}

/// Parses either a term or an inequality, depending on whether `<=` occurs.
pub fn parse(text: &str) -> std::result::Result<Parsed, ParseError> {
    let mut p = Parser::new(text)?;
    let lhs = p.term()?;
    if p.eat(&Tok::Le) {
        let rhs = p.term()?;
        p.expect_end()?;
        Ok(Parsed::Inequality(Inequality { lhs, rhs }))
    } else {
        p.expect_end()?;
        Ok(Parsed::Term(lhs))
    }
}

pub fn parse_term(text: &str) -> std::result::Result<RelTerm, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

pub fn parse_inequality(text: &str) -> std::result::Result<Inequality, ParseError> {
    let mut p = Parser::new(text)?;
    let lhs = p.term()?;
    if !p.eat(&Tok::Le) {
        return Err(p.error("expected `<=`"));
    }
    let rhs = p.term()?;
    p.expect_end()?;
    Ok(Inequality { lhs, rhs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Meet,
    Compose,
    Plus,
    LParen,
    RParen,
    Le,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Meet => "`&`".into(),
            Tok::Compose => "`o`".into(),
            Tok::Plus => "`+`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Le => "`<=`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> std::result::Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '&' | '∧' => Tok::Meet,
            '∘' => Tok::Compose,
            '+' => Tok::Plus,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '≤' => Tok::Le,
            '<' if chars.get(i + 1) == Some(&'=') => {
                i += 1;
                Tok::Le
            }
            c if c.is_alphabetic() || c == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                let word: String = chars[start..=i].iter().collect();
                if word == "o" {
                    Tok::Compose
                } else {
                    Tok::Ident(word)
                }
            }
            other => {
                return Err(ParseError::Syntax {
                    position: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        toks.push((start, tok));
        i += 1;
    }
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    toks.push((chars.len(), Tok::End));
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    names: HashMap<String, usize>,
}

impl Parser {
    fn new(text: &str) -> std::result::Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            names: HashMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        let (position, tok) = &self.toks[self.pos];
        ParseError::Syntax {
            position: *position,
            message: format!("{expected}, found {}", tok.describe()),
        }
    }

    fn expect_end(&self) -> std::result::Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error("expected end of input"))
        }
    }

    fn term(&mut self) -> std::result::Result<RelTerm, ParseError> {
        let mut acc = self.composition()?;
        while self.eat(&Tok::Plus) {
            acc = RelTerm::plus(acc, self.composition()?);
        }
        Ok(acc)
    }

    fn composition(&mut self) -> std::result::Result<RelTerm, ParseError> {
        let mut acc = self.meet()?;
        while self.eat(&Tok::Compose) {
            acc = RelTerm::compose(acc, self.meet()?);
        }
        Ok(acc)
    }

    fn meet(&mut self) -> std::result::Result<RelTerm, ParseError> {
        let mut acc = self.atom()?;
        while self.eat(&Tok::Meet) {
            acc = RelTerm::meet(acc, self.atom()?);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> std::result::Result<RelTerm, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.pos += 1;
                let next = self.names.len() + 1;
                let index = *self.names.entry(name.clone()).or_insert(next);
                Ok(RelTerm::Var(VarId::named(index, name)))
            }
            Tok::LParen => {
                self.pos += 1;
                let t = self.term()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                Ok(t)
            }
            _ => Err(self.error("expected a variable or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(i: usize) -> RelTerm {
        RelTerm::Var(VarId::new(i))
    }

    fn t(s: &str) -> RelTerm {
        parse_term(s).unwrap()
    }

    fn names(set: &BTreeSet<VarId>) -> Vec<String> {
        set.iter().map(|v| v.display_name()).collect()
    }

    #[test]
    fn precedence_and_grouping() {
        assert_eq!(t("R & (S o T)"), RelTerm::meet(v(1), RelTerm::compose(v(2), v(3))));
        assert_eq!(t("X1 o X2 + X3"), RelTerm::plus(RelTerm::compose(v(1), v(2)), v(3)));
        assert_eq!(t("R & S o T"), RelTerm::compose(RelTerm::meet(v(1), v(2)), v(3)));
        assert_eq!(t("a ∘ b ∧ c"), RelTerm::compose(v(1), RelTerm::meet(v(2), v(3))));
        assert_eq!(t("X o Y o Z"), RelTerm::compose(RelTerm::compose(v(1), v(2)), v(3)));
    }

    #[test]
    fn variables_indexed_by_first_occurrence() {
        let ineq = parse_inequality("b o a <= a o b").unwrap();
        let lhs_vars: Vec<_> = ineq.lhs.vars().into_iter().collect();
        assert_eq!(lhs_vars[0].index(), 1);
        assert_eq!(lhs_vars[0].name(), Some("b"));
        assert_eq!(ineq.rhs, RelTerm::compose(v(2), v(1)));
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert_eq!(
            parse_term("R &").unwrap_err(),
            ParseError::Syntax {
                position: 3,
                message: "expected a variable or `(`, found end of input".into()
            }
        );
        assert_eq!(parse_term("   ").unwrap_err(), ParseError::Empty);
        assert!(matches!(parse_term("(R o S"), Err(ParseError::Syntax { position: 6, .. })));
        assert!(matches!(parse_term("R $ S"), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse_inequality("R o S"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("R <= S <= T"), Err(ParseError::Syntax { position: 7, .. })));
    }

    #[test]
    fn parse_dispatches_on_le() {
        assert!(matches!(parse("X"), Ok(Parsed::Term(_))));
        assert!(matches!(parse("X ≤ X o X"), Ok(Parsed::Inequality(_))));
    }

    #[test]
    fn left_and_right_vars() {
        assert_eq!(names(&left_vars(&t("X")).unwrap()), ["X"]);
        assert_eq!(names(&left_vars(&t("Y o Z")).unwrap()), ["Y"]);
        let p = t("X & (Y o Z)");
        assert_eq!(names(&left_vars(&p).unwrap()), ["X", "Y"]);
        assert_eq!(names(&right_vars(&p).unwrap()), ["X", "Z"]);
        assert_eq!(left_vars(&t("X + Y")), Err(Error::PlusNotAllowed));
    }

    #[test]
    fn regular_examples() {
        assert!(is_regular(&t("X & (Y o Z)")).unwrap());
        assert!(is_regular(&t("X & (Y o X o Y)")).unwrap());
        assert!(!is_regular(&t("X o X")).unwrap());
        assert!(!is_regular(&t("X & (Y o Z o X)")).unwrap());
        assert!(!is_regular(&t("X & X")).unwrap());
        assert_eq!(is_regular(&t("X + X")), Err(Error::PlusNotAllowed));
    }

    #[test]
    fn expand_plus_examples() {
        assert_eq!(expand_plus(&t("X + Y"), 3).unwrap(), t("X o Y o X"));
        assert_eq!(expand_plus(&t("X & Y"), 5).unwrap(), t("X & Y"));
        assert_eq!(expand_plus(&t("R & (S + T)"), 2).unwrap(), t("R & (S o T)"));
        assert_eq!(expand_plus(&t("X + Y"), 1), Err(Error::InvalidK { k: 1, min: 2 }));
        // nested: inner + expanded before the outer alternation
        assert_eq!(expand_plus(&t("(X + Y) + Z"), 2).unwrap(), t("X o Y o Z"));
    }

    #[test]
    fn rendering() {
        let m = RelTerm::meet(v(1), RelTerm::compose(v(2), v(3)));
        assert_eq!(m.to_string(), "X1 & (X2 o X3)");
        assert_eq!(t("R & (S o T)").to_string(), "R & (S o T)");
        assert_eq!(t("X + Y").render(TermFormat::Latex), "X + Y");
        assert_eq!(t("X o Y o X").to_string(), "X o Y o X");
        assert_eq!(t("X o (Y o X)").to_string(), "X o (Y o X)");
        assert_eq!(t("R & S o T").to_string(), "R & S o T");
        assert_eq!(t("X1 & (X2 o X3)").render(TermFormat::Latex), "X_{1} \\wedge (X_{2} \\circ X_{3})");
        let ineq = parse_inequality("a o b <= b o a").unwrap();
        assert_eq!(ineq.to_string(), "a o b <= b o a");
    }

    #[test]
    fn term_statistics() {
        let p = t("R & (S o T) o R");
        assert_eq!(p.arity(), 3);
        assert_eq!(p.occurrences(), 4);
        assert_eq!(p.compose_count(), 2);
    }

    /// Random terms whose variable indices appear in first-occurrence order,
    /// so that rendering and reparsing is exactly the identity.
    fn arb_term(plus: bool) -> impl Strategy<Value = RelTerm> {
        let leaf = (1usize..=4).prop_map(|i| RelTerm::Var(VarId::new(i)));
        leaf.prop_recursive(6, 64, 2, move |inner| {
            let ops = if plus { 3 } else { 2 };
            (0..ops, inner.clone(), inner).prop_map(|(op, a, b)| match op {
                0 => RelTerm::meet(a, b),
                1 => RelTerm::compose(a, b),
                _ => RelTerm::plus(a, b),
            })
        })
        .prop_map(|t| canonical(&t))
    }

    fn canonical(t: &RelTerm) -> RelTerm {
        fn go(t: &RelTerm, map: &mut HashMap<usize, usize>) -> RelTerm {
            match t {
                RelTerm::Var(v) => {
                    let next = map.len() + 1;
                    RelTerm::Var(VarId::new(*map.entry(v.index()).or_insert(next)))
                }
                RelTerm::Meet(a, b) => {
                    let a = go(a, map);
                    RelTerm::meet(a, go(b, map))
                }
                RelTerm::Compose(a, b) => {
                    let a = go(a, map);
                    RelTerm::compose(a, go(b, map))
                }
                RelTerm::Plus(a, b) => {
                    let a = go(a, map);
                    RelTerm::plus(a, go(b, map))
                }
            }
        }
        go(t, &mut HashMap::new())
    }

    fn subterms(t: &RelTerm) -> Vec<&RelTerm> {
        let mut out = vec![t];
        for c in t.children() {
            out.extend(subterms(c));
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn parse_render_round_trip(t in arb_term(true)) {
            prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        }

        #[test]
        fn regularity_is_hereditary(t in arb_term(false)) {
            if is_regular(&t).unwrap() {
                for s in subterms(&t) {
                    prop_assert!(is_regular(s).unwrap());
                }
            }
        }

        #[test]
        fn side_vars_are_term_vars(t in arb_term(false)) {
            let vars = t.vars();
            prop_assert!(left_vars(&t).unwrap().is_subset(&vars));
            prop_assert!(right_vars(&t).unwrap().is_subset(&vars));
        }

        #[test]
        fn expansion_is_plus_free(t in arb_term(true), k in 2usize..5) {
            let e = expand_plus(&t, k).unwrap();
            prop_assert!(e.is_plus_free());
            if t.is_plus_free() {
                prop_assert_eq!(e, t);
            }
        }
    }
}
