//! First-order formulas over the signature `{<}` with exact rational
//! parameters: syntax trees, a recursive-descent parser, finite-witness
//! evaluation over the rational order, and normalization into positive
//! disjunctive normal form.
//!
//! Grammar (operators listed loosest-binding first):
//!
//! ```text
//! formula := iff
//! iff     := imp ("<->" imp)*
//! imp     := or ("->" or)*
//! or      := and ("|" and)*
//! and     := not ("&" not)*
//! not     := "!" not | quant | atom | "(" formula ")"
//! quant   := ("E" | "A") ident "." not
//! atom    := term ("<" | "=" | "<=" | ">" | ">=") term | "true" | "false"
//! term    := ident | rational
//! rational:= ["-"] digits ["/" digits]
//! ```
//!
//! Identifiers are `[a-z][a-z0-9_]*`. `<=`, `>` and `>=` are parse-time
//! sugar over `<` and `=`; `<->` desugars into two implications.

use crate::rat::{format_rat, parse_rat, rat_int, Rat};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Relation symbol of a positive atomic formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Eq,
}

/// A term is a variable or an exact rational parameter.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(Rat),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{}", format_rat(c)),
        }
    }
}

/// Formula syntax tree. Quantifiers bind a single variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    True,
    False,
    Atom(Term, Rel, Term),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Exists(String, Box<Node>),
    Forall(String, Box<Node>),
}

/// A parsed formula together with the index order of its free variables.
///
/// Bound variables are renamed apart from free variables (and from each
/// other) during construction, so evaluation never needs capture checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    node: Node,
    vars: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaError {
    Parse { pos: usize, message: String },
    MissingAssignment(String),
    NotQuantifierFree,
    UnknownVariable(String),
    DuplicateVariable(String),
}

impl fmt::Display for FormulaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaError::Parse { pos, message } => {
                write!(f, "parse error at position {pos}: {message}")
            }
            FormulaError::MissingAssignment(v) => write!(f, "no value assigned to variable `{v}`"),
            FormulaError::NotQuantifierFree => write!(f, "formula contains quantifiers"),
            FormulaError::UnknownVariable(v) => {
                write!(f, "free variable `{v}` not in the declared variable order")
            }
            FormulaError::DuplicateVariable(v) => {
                write!(f, "variable `{v}` listed twice in the variable order")
            }
        }
    }
}

impl std::error::Error for FormulaError {}

// ---------------------------------------------------------------------------
// Tokenizer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    LParen,
    RParen,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    IffSym,
    Lt,
    Le,
    Gt,
    Ge,
    Equal,
    ExistsKw,
    ForallKw,
    TrueKw,
    FalseKw,
    Ident(String),
    Num(Rat),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, message: String| FormulaError::Parse { pos, message };
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                out.push((i, Token::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Token::RParen));
                i += 1;
            }
            b'.' => {
                out.push((i, Token::Dot));
                i += 1;
            }
            b'!' => {
                out.push((i, Token::Bang));
                i += 1;
            }
            b'&' => {
                out.push((i, Token::Amp));
                i += 1;
            }
            b'|' => {
                out.push((i, Token::Pipe));
                i += 1;
            }
            b'=' => {
                out.push((i, Token::Equal));
                i += 1;
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    out.push((i, Token::IffSym));
                    i += 3;
                } else if bytes.get(i + 1) == Some(&b'=') {
                    out.push((i, Token::Le));
                    i += 2;
                } else {
                    out.push((i, Token::Lt));
                    i += 1;
                }
            }
            b'>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    out.push((i, Token::Ge));
                    i += 2;
                } else {
                    out.push((i, Token::Gt));
                    i += 1;
                }
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((i, Token::Arrow));
                    i += 2;
                } else if bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
                    let (tok, next) = lex_number(text, i)?;
                    out.push((i, tok));
                    i = next;
                } else {
                    return Err(err(i, "dangling `-`".into()));
                }
            }
            b'0'..=b'9' => {
                let (tok, next) = lex_number(text, i)?;
                out.push((i, tok));
                i = next;
            }
            b'E' => {
                out.push((i, Token::ExistsKw));
                i += 1;
            }
            b'A' => {
                out.push((i, Token::ForallKw));
                i += 1;
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase()
                        || bytes[i].is_ascii_digit()
                        || bytes[i] == b'_')
                {
                    i += 1;
                }
                let word = &text[start..i];
                out.push((
                    start,
                    match word {
                        "true" => Token::TrueKw,
                        "false" => Token::FalseKw,
                        _ => Token::Ident(word.to_string()),
                    },
                ));
            }
            _ => return Err(err(i, format!("unknown token `{}`", &text[i..i + 1]))),
        }
    }
    Ok(out)
}

fn lex_number(text: &str, start: usize) -> Result<(Token, usize), FormulaError> {
    let bytes = text.as_bytes();
    let mut i = start;
    if bytes[i] == b'-' {
        i += 1;
    }
    let digits = |j: &mut usize| {
        while *j < bytes.len() && bytes[*j].is_ascii_digit() {
            *j += 1;
        }
    };
    digits(&mut i);
    if i < bytes.len() && bytes[i] == b'/' {
        i += 1;
        let before = i;
        digits(&mut i);
        if i == before {
            return Err(FormulaError::Parse {
                pos: i,
                message: "expected denominator digits".into(),
            });
        }
    }
    let r = parse_rat(&text[start..i]).map_err(|message| FormulaError::Parse {
        pos: start,
        message,
    })?;
    Ok((Token::Num(r), i))
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: &Token, what: &str) -> Result<(), FormulaError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn error(&self, message: String) -> FormulaError {
        FormulaError::Parse {
            pos: self.here(),
            message,
        }
    }

    fn formula(&mut self) -> Result<Node, FormulaError> {
        let mut lhs = self.implication()?;
        while self.peek() == Some(&Token::IffSym) {
            self.pos += 1;
            let rhs = self.implication()?;
            lhs = Node::And(
                Box::new(Node::Implies(Box::new(lhs.clone()), Box::new(rhs.clone()))),
                Box::new(Node::Implies(Box::new(rhs), Box::new(lhs))),
            );
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Node, FormulaError> {
        let mut lhs = self.disjunction()?;
        while self.peek() == Some(&Token::Arrow) {
            self.pos += 1;
            let rhs = self.disjunction()?;
            lhs = Node::Implies(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Node, FormulaError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Token::Pipe) {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = Node::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Node, FormulaError> {
        let mut lhs = self.negation()?;
        while self.peek() == Some(&Token::Amp) {
            self.pos += 1;
            let rhs = self.negation()?;
            lhs = Node::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn negation(&mut self) -> Result<Node, FormulaError> {
        match self.peek() {
            Some(Token::Bang) => {
                self.pos += 1;
                Ok(Node::Not(Box::new(self.negation()?)))
            }
            Some(Token::ExistsKw) | Some(Token::ForallKw) => {
                let forall = self.bump() == Some(Token::ForallKw);
                let var = match self.bump() {
                    Some(Token::Ident(v)) => v,
                    _ => return Err(self.error("expected quantified variable name".into())),
                };
                self.expect(&Token::Dot, "`.` after quantified variable")?;
                let body = Box::new(self.negation()?);
                Ok(if forall {
                    Node::Forall(var, body)
                } else {
                    Node::Exists(var, body)
                })
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(&Token::RParen, "closing `)`")?;
                Ok(inner)
            }
            Some(Token::TrueKw) => {
                self.pos += 1;
                Ok(Node::True)
            }
            Some(Token::FalseKw) => {
                self.pos += 1;
                Ok(Node::False)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Node, FormulaError> {
        let lhs = self.term()?;
        let rel = self.bump();
        let make = |l: Term, r: Term, rel| Node::Atom(l, rel, r);
        match rel {
            Some(Token::Lt) => Ok(make(lhs, self.term()?, Rel::Lt)),
            Some(Token::Equal) => Ok(make(lhs, self.term()?, Rel::Eq)),
            Some(Token::Le) => {
                let rhs = self.term()?;
                Ok(Node::Or(
                    Box::new(make(lhs.clone(), rhs.clone(), Rel::Lt)),
                    Box::new(make(lhs, rhs, Rel::Eq)),
                ))
            }
            Some(Token::Gt) => {
                let rhs = self.term()?;
                Ok(make(rhs, lhs, Rel::Lt))
            }
            Some(Token::Ge) => {
                let rhs = self.term()?;
                Ok(Node::Or(
                    Box::new(make(rhs.clone(), lhs.clone(), Rel::Lt)),
                    Box::new(make(lhs, rhs, Rel::Eq)),
                ))
            }
            rel => {
                if rel.is_some() {
                    self.pos -= 1;
                }
                Err(self.error("expected a relation symbol".into()))
            }
        }
    }

    fn term(&mut self) -> Result<Term, FormulaError> {
        match self.bump() {
            Some(Token::Ident(v)) => Ok(Term::Var(v)),
            Some(Token::Num(r)) => Ok(Term::Const(r)),
            _ => {
                if self.pos < self.tokens.len() {
                    self.pos -= 1;
                }
                Err(self.error("expected a term".into()))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Formula construction

impl Formula {
    /// Parses `text`; free variables are indexed by `variable_order` when
    /// given, otherwise by first occurrence.
    pub fn parse(text: &str, variable_order: Option<&[String]>) -> Result<Formula, FormulaError> {
        let tokens = tokenize(text)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            end: text.len(),
        };
        let node = parser.formula()?;
        if parser.pos != parser.tokens.len() {
            return Err(parser.error("trailing input".into()));
        }
        Formula::from_node_with_order(node, variable_order)
    }

    /// Wraps a syntax tree, renaming bound variables apart and fixing the
    /// free-variable order (first occurrence unless supplied).
    pub fn from_node(node: Node) -> Result<Formula, FormulaError> {
        Formula::from_node_with_order(node, None)
    }

    pub fn from_node_with_order(
        mut node: Node,
        variable_order: Option<&[String]>,
    ) -> Result<Formula, FormulaError> {
        let mut free = Vec::new();
        collect_free(&node, &mut Vec::new(), &mut free);
        let vars = match variable_order {
            None => free,
            Some(order) => {
                let mut seen = BTreeSet::new();
                for v in order {
                    if !seen.insert(v.clone()) {
                        return Err(FormulaError::DuplicateVariable(v.clone()));
                    }
                }
                for v in &free {
                    if !order.contains(v) {
                        return Err(FormulaError::UnknownVariable(v.clone()));
                    }
                }
                order.to_vec()
            }
        };
        let mut used: BTreeSet<String> = vars.iter().cloned().collect();
        rename_apart(&mut node, &mut used, &mut Vec::new());
        Ok(Formula { node, vars })
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    /// Free variables in index order.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// All rational constants occurring in the formula.
    pub fn constants(&self) -> BTreeSet<Rat> {
        let mut out = BTreeSet::new();
        collect_constants(&self.node, &mut out);
        out
    }

    pub fn is_quantifier_free(&self) -> bool {
        quantifier_free(&self.node)
    }
}

fn collect_free(node: &Node, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match node {
        Node::True | Node::False => {}
        Node::Atom(l, _, r) => {
            for t in [l, r] {
                if let Term::Var(v) = t {
                    if !bound.contains(v) && !out.contains(v) {
                        out.push(v.clone());
                    }
                }
            }
        }
        Node::Not(x) => collect_free(x, bound, out),
        Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Node::Exists(v, body) | Node::Forall(v, body) => {
            bound.push(v.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
    }
}

/// Gives every binder a name unused anywhere else in the formula.
fn rename_apart(node: &mut Node, used: &mut BTreeSet<String>, env: &mut Vec<(String, String)>) {
    match node {
        Node::True | Node::False => {}
        Node::Atom(l, _, r) => {
            for t in [l, r] {
                if let Term::Var(v) = t {
                    if let Some((_, to)) = env.iter().rev().find(|(from, _)| from == v) {
                        *v = to.clone();
                    }
                }
            }
        }
        Node::Not(x) => rename_apart(x, used, env),
        Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) => {
            rename_apart(a, used, env);
            rename_apart(b, used, env);
        }
        Node::Exists(v, body) | Node::Forall(v, body) => {
            let fresh = if used.contains(v) {
                let mut k = 2;
                loop {
                    let cand = format!("{v}_{k}");
                    if !used.contains(&cand) {
                        break cand;
                    }
                    k += 1;
                }
            } else {
                v.clone()
            };
            used.insert(fresh.clone());
            env.push((v.clone(), fresh.clone()));
            *v = fresh;
            rename_apart(body, used, env);
            env.pop();
        }
    }
}

fn collect_constants(node: &Node, out: &mut BTreeSet<Rat>) {
    match node {
        Node::True | Node::False => {}
        Node::Atom(l, _, r) => {
            for t in [l, r] {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            }
        }
        Node::Not(x) => collect_constants(x, out),
        Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) => {
            collect_constants(a, out);
            collect_constants(b, out);
        }
        Node::Exists(_, body) | Node::Forall(_, body) => collect_constants(body, out),
    }
}

fn quantifier_free(node: &Node) -> bool {
    match node {
        Node::True | Node::False | Node::Atom(..) => true,
        Node::Not(x) => quantifier_free(x),
        Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) => {
            quantifier_free(a) && quantifier_free(b)
        }
        Node::Exists(..) | Node::Forall(..) => false,
    }
}

// ---------------------------------------------------------------------------
// Pretty printing (round-trips through the parser)

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(&self.node, 1, f)
    }
}

fn node_prec(node: &Node) -> u8 {
    match node {
        Node::Implies(..) => 1,
        Node::Or(..) => 2,
        Node::And(..) => 3,
        Node::Not(..) | Node::Exists(..) | Node::Forall(..) => 4,
        Node::True | Node::False | Node::Atom(..) => 5,
    }
}

fn write_node(node: &Node, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = node_prec(node);
    if prec < min_prec {
        write!(f, "(")?;
        write_node(node, 1, f)?;
        return write!(f, ")");
    }
    match node {
        Node::True => write!(f, "true"),
        Node::False => write!(f, "false"),
        Node::Atom(l, rel, r) => {
            let sym = match rel {
                Rel::Lt => "<",
                Rel::Eq => "=",
            };
            write!(f, "{l} {sym} {r}")
        }
        Node::Not(x) => {
            write!(f, "!")?;
            write_node(x, 4, f)
        }
        Node::And(a, b) => {
            write_node(a, 3, f)?;
            write!(f, " & ")?;
            write_node(b, 4, f)
        }
        Node::Or(a, b) => {
            write_node(a, 2, f)?;
            write!(f, " | ")?;
            write_node(b, 3, f)
        }
        Node::Implies(a, b) => {
            write_node(a, 1, f)?;
            write!(f, " -> ")?;
            write_node(b, 2, f)
        }
        Node::Exists(v, body) => {
            write!(f, "E {v}. ")?;
            write_node(body, 4, f)
        }
        Node::Forall(v, body) => {
            write!(f, "A {v}. ")?;
            write_node(body, 4, f)
        }
    }
}

// ---------------------------------------------------------------------------
// Evaluation

/// Evaluates `f` at `point` over the rational order.
///
/// Quantifiers range over finitely many candidate values derived from the
/// constraint structure: every constant of the formula and value of the
/// current assignment, midpoints between consecutive such values, and one
/// value below the minimum and above the maximum. Definable subsets of the
/// line are finite unions of points and intervals with endpoints among those
/// values, so the candidate set meets every nonempty definable set and the
/// restriction is sound.
pub fn eval_formula(f: &Formula, point: &BTreeMap<String, Rat>) -> Result<bool, FormulaError> {
    let consts = f.constants();
    let mut env = point.clone();
    eval_node(&f.node, &mut env, &consts)
}

fn eval_node(
    node: &Node,
    env: &mut BTreeMap<String, Rat>,
    consts: &BTreeSet<Rat>,
) -> Result<bool, FormulaError> {
    match node {
        Node::True => Ok(true),
        Node::False => Ok(false),
        Node::Atom(l, rel, r) => {
            let lv = resolve(l, env)?;
            let rv = resolve(r, env)?;
            Ok(match rel {
                Rel::Lt => lv < rv,
                Rel::Eq => lv == rv,
            })
        }
        Node::Not(x) => Ok(!eval_node(x, env, consts)?),
        Node::And(a, b) => Ok(eval_node(a, env, consts)? && eval_node(b, env, consts)?),
        Node::Or(a, b) => Ok(eval_node(a, env, consts)? || eval_node(b, env, consts)?),
        Node::Implies(a, b) => Ok(!eval_node(a, env, consts)? || eval_node(b, env, consts)?),
        Node::Exists(v, body) => {
            for cand in candidate_values(consts, env) {
                let saved = env.insert(v.clone(), cand);
                let found = eval_node(body, env, consts)?;
                restore(env, v, saved);
                if found {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Node::Forall(v, body) => {
            for cand in candidate_values(consts, env) {
                let saved = env.insert(v.clone(), cand);
                let holds = eval_node(body, env, consts)?;
                restore(env, v, saved);
                if !holds {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

fn restore(env: &mut BTreeMap<String, Rat>, var: &str, saved: Option<Rat>) {
    match saved {
        Some(old) => {
            env.insert(var.to_string(), old);
        }
        None => {
            env.remove(var);
        }
    }
}

fn resolve(term: &Term, env: &BTreeMap<String, Rat>) -> Result<Rat, FormulaError> {
    match term {
        Term::Const(c) => Ok(c.clone()),
        Term::Var(v) => env
            .get(v)
            .cloned()
            .ok_or_else(|| FormulaError::MissingAssignment(v.clone())),
    }
}

fn candidate_values(consts: &BTreeSet<Rat>, env: &BTreeMap<String, Rat>) -> Vec<Rat> {
    let mut anchors: BTreeSet<Rat> = consts.clone();
    anchors.extend(env.values().cloned());
    if anchors.is_empty() {
        return vec![rat_int(0)];
    }
    let sorted: Vec<Rat> = anchors.into_iter().collect();
    let mut out = Vec::with_capacity(2 * sorted.len() + 1);
    out.push(sorted[0].clone() - rat_int(1));
    for (i, v) in sorted.iter().enumerate() {
        out.push(v.clone());
        if let Some(next) = sorted.get(i + 1) {
            out.push(crate::rat::midpoint(v, next));
        }
    }
    out.push(sorted[sorted.len() - 1].clone() + rat_int(1));
    out
}

// ---------------------------------------------------------------------------
// Positive DNF

/// A term of a clause constraint: a free-variable index or a constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CTerm {
    Var(usize),
    Const(Rat),
}

/// A positive atomic constraint. Equalities store their operands in
/// canonical order so clause sets compare syntactically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Constraint {
    pub lhs: CTerm,
    pub rel: Rel,
    pub rhs: CTerm,
}

impl Constraint {
    pub fn lt(lhs: CTerm, rhs: CTerm) -> Constraint {
        Constraint {
            lhs,
            rel: Rel::Lt,
            rhs,
        }
    }

    pub fn eq(a: CTerm, b: CTerm) -> Constraint {
        let (lhs, rhs) = if a <= b { (a, b) } else { (b, a) };
        Constraint {
            lhs,
            rel: Rel::Eq,
            rhs,
        }
    }
}

enum Simplified {
    Keep(Constraint),
    AlwaysTrue,
    AlwaysFalse,
}

fn simplify_constraint(c: Constraint) -> Simplified {
    if c.lhs == c.rhs {
        return match c.rel {
            Rel::Eq => Simplified::AlwaysTrue,
            Rel::Lt => Simplified::AlwaysFalse,
        };
    }
    if let (CTerm::Const(a), CTerm::Const(b)) = (&c.lhs, &c.rhs) {
        let holds = match c.rel {
            Rel::Lt => a < b,
            Rel::Eq => a == b,
        };
        return if holds {
            Simplified::AlwaysTrue
        } else {
            Simplified::AlwaysFalse
        };
    }
    Simplified::Keep(match c.rel {
        Rel::Eq => Constraint::eq(c.lhs, c.rhs),
        Rel::Lt => c,
    })
}

/// A conjunctive clause of positive atomic constraints. Unsatisfiable
/// clauses are rejected at construction; the empty clause is `true`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Clause(BTreeSet<Constraint>);

impl Clause {
    /// Normalizes a constraint collection; `None` means the clause is
    /// unsatisfiable over the dense-order theory.
    pub fn new(constraints: impl IntoIterator<Item = Constraint>) -> Option<Clause> {
        let mut set = BTreeSet::new();
        for c in constraints {
            match simplify_constraint(c) {
                Simplified::Keep(k) => {
                    set.insert(k);
                }
                Simplified::AlwaysTrue => {}
                Simplified::AlwaysFalse => return None,
            }
        }
        let clause = Clause(set);
        clause.is_satisfiable().then_some(clause)
    }

    pub fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.0.iter()
    }

    pub fn is_true(&self) -> bool {
        self.0.is_empty()
    }

    /// Satisfiability over a dense linear order without endpoints: merge
    /// equality classes, then look for a `<`-cycle (constant order included)
    /// or a class holding two distinct constants.
    fn is_satisfiable(&self) -> bool {
        let mut terms: Vec<&CTerm> = Vec::new();
        let mut index = BTreeMap::new();
        for c in &self.0 {
            for t in [&c.lhs, &c.rhs] {
                index.entry(t.clone()).or_insert_with(|| {
                    terms.push(t);
                    terms.len() - 1
                });
            }
        }
        let mut parent: Vec<usize> = (0..terms.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for c in &self.0 {
            if c.rel == Rel::Eq {
                let a = find(&mut parent, index[&c.lhs]);
                let b = find(&mut parent, index[&c.rhs]);
                parent[a] = b;
            }
        }
        // Each class may carry at most one constant value.
        let mut value: BTreeMap<usize, Rat> = BTreeMap::new();
        for (i, t) in terms.iter().enumerate() {
            if let CTerm::Const(v) = t {
                let root = find(&mut parent, i);
                match value.get(&root) {
                    Some(existing) if *existing != *v => return false,
                    _ => {
                        value.insert(root, (*v).clone());
                    }
                }
            }
        }
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for c in &self.0 {
            if c.rel == Rel::Lt {
                let a = find(&mut parent, index[&c.lhs]);
                let b = find(&mut parent, index[&c.rhs]);
                if a == b {
                    return false;
                }
                edges.insert((a, b));
            }
        }
        let anchored: Vec<(usize, &Rat)> = value.iter().map(|(k, v)| (*k, v)).collect();
        for (i, (ra, va)) in anchored.iter().enumerate() {
            for (rb, vb) in anchored.iter().skip(i + 1) {
                if va < vb {
                    edges.insert((*ra, *rb));
                } else {
                    edges.insert((*rb, *ra));
                }
            }
        }
        // Cycle detection over the strict-order digraph.
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (a, b) in &edges {
            adj.entry(*a).or_default().push(*b);
        }
        let mut state: BTreeMap<usize, u8> = BTreeMap::new();
        fn dfs(
            node: usize,
            adj: &BTreeMap<usize, Vec<usize>>,
            state: &mut BTreeMap<usize, u8>,
        ) -> bool {
            match state.get(&node) {
                Some(1) => return false,
                Some(2) => return true,
                _ => {}
            }
            state.insert(node, 1);
            if let Some(children) = adj.get(&node) {
                for &c in children {
                    if !dfs(c, adj, state) {
                        return false;
                    }
                }
            }
            state.insert(node, 2);
            true
        }
        let nodes: Vec<usize> = adj.keys().copied().collect();
        nodes.into_iter().all(|n| dfs(n, &adj, &mut state))
    }

    fn eval(&self, point: &[Rat]) -> bool {
        self.0.iter().all(|c| {
            let resolve = |t: &CTerm| match t {
                CTerm::Var(i) => point[*i].clone(),
                CTerm::Const(v) => v.clone(),
            };
            let (l, r) = (resolve(&c.lhs), resolve(&c.rhs));
            match c.rel {
                Rel::Lt => l < r,
                Rel::Eq => l == r,
            }
        })
    }

    /// Replaces every occurrence of variable `var`; `None` if the result is
    /// unsatisfiable.
    pub fn substitute_var(&self, var: usize, replacement: &CTerm) -> Option<Clause> {
        let subst = |t: &CTerm| {
            if *t == CTerm::Var(var) {
                replacement.clone()
            } else {
                t.clone()
            }
        };
        Clause::new(self.0.iter().map(|c| Constraint {
            lhs: subst(&c.lhs),
            rel: c.rel,
            rhs: subst(&c.rhs),
        }))
    }
}

/// A quantifier-free formula in positive disjunctive normal form: a set of
/// conjunctive clauses over `<` and `=` only, with an explicit free-variable
/// order. The empty clause set is `false`; a clause with no constraints is
/// `true`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveDnf {
    vars: Vec<String>,
    clauses: BTreeSet<Clause>,
}

impl PositiveDnf {
    pub fn false_dnf(vars: Vec<String>) -> PositiveDnf {
        PositiveDnf {
            vars,
            clauses: BTreeSet::new(),
        }
    }

    pub fn true_dnf(vars: Vec<String>) -> PositiveDnf {
        let mut clauses = BTreeSet::new();
        clauses.insert(Clause(BTreeSet::new()));
        PositiveDnf { vars, clauses }
    }

    pub fn from_clauses(
        vars: Vec<String>,
        clauses: impl IntoIterator<Item = Clause>,
    ) -> PositiveDnf {
        PositiveDnf {
            vars,
            clauses: clauses.into_iter().collect(),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Ambient dimension: number of free variables.
    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter()
    }

    pub fn is_false(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Parameters (rational constants) occurring in the clauses.
    pub fn params(&self) -> BTreeSet<Rat> {
        let mut out = BTreeSet::new();
        for clause in &self.clauses {
            for c in &clause.0 {
                for t in [&c.lhs, &c.rhs] {
                    if let CTerm::Const(v) = t {
                        out.insert(v.clone());
                    }
                }
            }
        }
        out
    }

    /// Truth value at the point `point[i]` for variable index `i`.
    pub fn eval(&self, point: &[Rat]) -> bool {
        assert_eq!(point.len(), self.vars.len(), "point dimension mismatch");
        self.clauses.iter().any(|c| c.eval(point))
    }

    pub fn and(&self, other: &PositiveDnf) -> PositiveDnf {
        assert_eq!(
            self.vars, other.vars,
            "conjunction over mismatched variables"
        );
        let mut clauses = BTreeSet::new();
        for a in &self.clauses {
            for b in &other.clauses {
                if let Some(c) = Clause::new(a.0.iter().chain(b.0.iter()).cloned()) {
                    clauses.insert(c);
                }
            }
        }
        PositiveDnf {
            vars: self.vars.clone(),
            clauses,
        }
    }

    pub fn or(&self, other: &PositiveDnf) -> PositiveDnf {
        assert_eq!(
            self.vars, other.vars,
            "disjunction over mismatched variables"
        );
        PositiveDnf {
            vars: self.vars.clone(),
            clauses: self.clauses.union(&other.clauses).cloned().collect(),
        }
    }

    /// Complement, re-expressed as a positive DNF via `¬(a<b) ≡ (b<a)∨(a=b)`
    /// and `¬(a=b) ≡ (a<b)∨(b<a)`.
    pub fn not(&self) -> PositiveDnf {
        let mut acc = PositiveDnf::true_dnf(self.vars.clone());
        for clause in &self.clauses {
            let mut negated = PositiveDnf::false_dnf(self.vars.clone());
            for c in &clause.0 {
                for flipped in negate_constraint(c) {
                    if let Some(cl) = Clause::new([flipped]) {
                        negated.clauses.insert(cl);
                    }
                }
            }
            acc = acc.and(&negated);
        }
        acc
    }

    /// Extends the variable list (used by dimension padding and the QE
    /// driver); new variables are unconstrained.
    pub fn with_vars(&self, vars: Vec<String>) -> PositiveDnf {
        assert!(vars.len() >= self.vars.len());
        assert_eq!(vars[..self.vars.len()], self.vars[..]);
        PositiveDnf {
            vars,
            clauses: self.clauses.clone(),
        }
    }
}

pub(crate) fn negate_constraint(c: &Constraint) -> Vec<Constraint> {
    match c.rel {
        Rel::Lt => vec![
            Constraint::lt(c.rhs.clone(), c.lhs.clone()),
            Constraint::eq(c.lhs.clone(), c.rhs.clone()),
        ],
        Rel::Eq => vec![
            Constraint::lt(c.lhs.clone(), c.rhs.clone()),
            Constraint::lt(c.rhs.clone(), c.lhs.clone()),
        ],
    }
}

/// Converts a quantifier-free formula into an equivalent positive DNF.
/// Clauses that are unsatisfiable over the theory are dropped.
pub fn to_positive_dnf(f: &Formula) -> Result<PositiveDnf, FormulaError> {
    if !f.is_quantifier_free() {
        return Err(FormulaError::NotQuantifierFree);
    }
    let index: BTreeMap<&str, usize> = f
        .vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    Ok(build_dnf(&f.node, true, &index, &f.vars))
}

fn cterm(term: &Term, index: &BTreeMap<&str, usize>) -> CTerm {
    match term {
        Term::Var(v) => CTerm::Var(index[v.as_str()]),
        Term::Const(c) => CTerm::Const(c.clone()),
    }
}

fn build_dnf(
    node: &Node,
    positive: bool,
    index: &BTreeMap<&str, usize>,
    vars: &[String],
) -> PositiveDnf {
    let vars_vec = vars.to_vec();
    match node {
        Node::True => {
            if positive {
                PositiveDnf::true_dnf(vars_vec)
            } else {
                PositiveDnf::false_dnf(vars_vec)
            }
        }
        Node::False => {
            if positive {
                PositiveDnf::false_dnf(vars_vec)
            } else {
                PositiveDnf::true_dnf(vars_vec)
            }
        }
        Node::Atom(l, rel, r) => {
            let (lt, rt) = (cterm(l, index), cterm(r, index));
            let base = match rel {
                Rel::Lt => Constraint::lt(lt, rt),
                Rel::Eq => Constraint::eq(lt, rt),
            };
            let constraints: Vec<Constraint> = if positive {
                vec![base]
            } else {
                negate_constraint(&base)
            };
            PositiveDnf::from_clauses(
                vars_vec,
                constraints.into_iter().filter_map(|c| Clause::new([c])),
            )
        }
        Node::Not(x) => build_dnf(x, !positive, index, vars),
        Node::And(a, b) => {
            let (da, db) = (
                build_dnf(a, positive, index, vars),
                build_dnf(b, positive, index, vars),
            );
            if positive {
                da.and(&db)
            } else {
                da.or(&db)
            }
        }
        Node::Or(a, b) => {
            let (da, db) = (
                build_dnf(a, positive, index, vars),
                build_dnf(b, positive, index, vars),
            );
            if positive {
                da.or(&db)
            } else {
                da.and(&db)
            }
        }
        Node::Implies(a, b) => {
            // a → b is ¬a ∨ b, so its negation is a ∧ ¬b.
            let da = build_dnf(a, !positive, index, vars);
            let db = build_dnf(b, positive, index, vars);
            if positive {
                da.or(&db)
            } else {
                da.and(&db)
            }
        }
        Node::Exists(..) | Node::Forall(..) => {
            unreachable!("quantifier-free precondition checked by caller")
        }
    }
}

impl fmt::Display for PositiveDnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "false");
        }
        let term = |t: &CTerm| match t {
            CTerm::Var(i) => self.vars[*i].clone(),
            CTerm::Const(v) => format_rat(v),
        };
        let rendered: Vec<String> = self
            .clauses
            .iter()
            .map(|clause| {
                if clause.is_true() {
                    return "true".to_string();
                }
                let body = clause
                    .0
                    .iter()
                    .map(|c| {
                        let sym = match c.rel {
                            Rel::Lt => "<",
                            Rel::Eq => "=",
                        };
                        format!("{} {sym} {}", term(&c.lhs), term(&c.rhs))
                    })
                    .collect::<Vec<_>>()
                    .join(" & ");
                if clause.0.len() > 1 && self.clauses.len() > 1 {
                    format!("({body})")
                } else {
                    body
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" | "))
    }
}
