//! Quantifier elimination for the theory of dense linear orders without
//! endpoints.
//!
//! Elimination works innermost-first on positive DNFs. A clause loses an
//! existential variable either by equality substitution or by replacing its
//! bounds with all lower-bound/upper-bound combinations; density and the
//! absence of endpoints make both steps exact. Universal quantifiers are
//! handled as `¬∃¬`.

use crate::formula::{to_positive_dnf, CTerm, Clause, Constraint, Formula, Node, PositiveDnf, Rel};
use std::collections::BTreeMap;

/// Eliminates all quantifiers from `f`, returning an equivalent
/// quantifier-free positive DNF over the theory.
pub fn eliminate_quantifiers(f: &Formula) -> PositiveDnf {
    // Work over the combined namespace of free and bound variables; bound
    // names are already renamed apart by `Formula` construction.
    let mut all_vars: Vec<String> = f.vars().to_vec();
    collect_bound(f.node(), &mut all_vars);
    let index: BTreeMap<&str, usize> = all_vars
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let full = eliminate_node(f.node(), &index, &all_vars);
    // Bound variables are gone; restrict the DNF to the free prefix.
    PositiveDnf::from_clauses(f.vars().to_vec(), full.clauses().cloned())
}

fn collect_bound(node: &Node, out: &mut Vec<String>) {
    match node {
        Node::True | Node::False | Node::Atom(..) => {}
        Node::Not(x) => collect_bound(x, out),
        Node::And(a, b) | Node::Or(a, b) | Node::Implies(a, b) => {
            collect_bound(a, out);
            collect_bound(b, out);
        }
        Node::Exists(v, body) | Node::Forall(v, body) => {
            if !out.contains(v) {
                out.push(v.clone());
            }
            collect_bound(body, out);
        }
    }
}

fn eliminate_node(node: &Node, index: &BTreeMap<&str, usize>, vars: &[String]) -> PositiveDnf {
    match node {
        Node::True => PositiveDnf::true_dnf(vars.to_vec()),
        Node::False => PositiveDnf::false_dnf(vars.to_vec()),
        Node::Atom(..) => {
            let wrapped = Formula::from_node_with_order(node.clone(), Some(vars))
                .expect("atom variables are in scope");
            to_positive_dnf(&wrapped).expect("atoms are quantifier-free")
        }
        Node::Not(x) => eliminate_node(x, index, vars).not(),
        Node::And(a, b) => eliminate_node(a, index, vars).and(&eliminate_node(b, index, vars)),
        Node::Or(a, b) => eliminate_node(a, index, vars).or(&eliminate_node(b, index, vars)),
        Node::Implies(a, b) => eliminate_node(a, index, vars)
            .not()
            .or(&eliminate_node(b, index, vars)),
        Node::Exists(v, body) => {
            let inner = eliminate_node(body, index, vars);
            eliminate_exists(&inner, index[v.as_str()])
        }
        Node::Forall(v, body) => {
            let inner = eliminate_node(body, index, vars).not();
            eliminate_exists(&inner, index[v.as_str()]).not()
        }
    }
}

/// Eliminates `∃ v` from every clause of a positive DNF.
pub fn eliminate_exists(d: &PositiveDnf, var: usize) -> PositiveDnf {
    let mut out = PositiveDnf::false_dnf(d.vars().to_vec());
    for clause in d.clauses() {
        out = out.or(&eliminate_exists_clause(clause, var, d.vars()));
    }
    out
}

/// Kernel step: eliminates `∃ var` from a single positive-atomic clause.
///
/// If the clause pins `var` to another term, that term is substituted.
/// Otherwise the constraints mentioning `var` are replaced by `l < u` for
/// every lower bound `l` and upper bound `u`; an empty side simply drops
/// (the order has no endpoints, so one-sided constraints are satisfiable).
pub fn eliminate_exists_clause(clause: &Clause, var: usize, vars: &[String]) -> PositiveDnf {
    let v = CTerm::Var(var);
    let equal_partner = clause.constraints().find_map(|c| {
        if c.rel != Rel::Eq {
            return None;
        }
        if c.lhs == v {
            Some(c.rhs.clone())
        } else if c.rhs == v {
            Some(c.lhs.clone())
        } else {
            None
        }
    });
    let reduced = if let Some(t) = equal_partner {
        clause.substitute_var(var, &t)
    } else {
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut rest = Vec::new();
        for c in clause.constraints() {
            if c.lhs == v {
                upper.push(c.rhs.clone());
            } else if c.rhs == v {
                lower.push(c.lhs.clone());
            } else {
                rest.push(c.clone());
            }
        }
        for l in &lower {
            for u in &upper {
                rest.push(Constraint::lt(l.clone(), u.clone()));
            }
        }
        Clause::new(rest)
    };
    match reduced {
        Some(c) => PositiveDnf::from_clauses(vars.to_vec(), [c]),
        None => PositiveDnf::false_dnf(vars.to_vec()),
    }
}
