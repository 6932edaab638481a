//! The `k0` mini expression language: `chi(<formula>)`, generators
//! `X(a;n)`, integer literals, `+`, `-`, `*` and parentheses, evaluated to
//! integer-valued characteristics over the union of every parameter that
//! occurs.

use dlo_k0::characteristic::{chi, Characteristic, ParamSet};
use dlo_k0::formula::{to_positive_dnf, Formula, PositiveDnf};
use dlo_k0::genring::{zeta, GenParam, GenPoly, Generator};
use dlo_k0::grothendieck as k0;
use dlo_k0::rat::{parse_rat, BigInt, Rat};

pub enum K0Expr {
    Set(PositiveDnf),
    Gen(GenParam, usize),
    Int(BigInt),
    Neg(Box<K0Expr>),
    Add(Box<K0Expr>, Box<K0Expr>),
    Sub(Box<K0Expr>, Box<K0Expr>),
    Mul(Box<K0Expr>, Box<K0Expr>),
}

impl K0Expr {
    /// Every rational parameter mentioned anywhere in the expression.
    pub fn params(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut Vec<Rat>) {
        match self {
            K0Expr::Set(d) => out.extend(d.params()),
            K0Expr::Gen(GenParam::Value(v), _) => out.push(v.clone()),
            K0Expr::Gen(GenParam::NegInf, _) | K0Expr::Int(_) => {}
            K0Expr::Neg(x) => x.collect_params(out),
            K0Expr::Add(a, b) | K0Expr::Sub(a, b) | K0Expr::Mul(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
        }
    }

    pub fn eval(&self, params: &ParamSet) -> Result<Characteristic, String> {
        match self {
            K0Expr::Set(d) => Ok(chi(d, params)),
            K0Expr::Gen(p, n) => {
                let poly = GenPoly::generator(Generator::new(p.clone(), *n));
                zeta(&poly, params).map_err(|e| e.to_string())
            }
            K0Expr::Int(c) => Ok(Characteristic::one(params.clone()).scale(c)),
            K0Expr::Neg(x) => Ok(x.eval(params)?.neg()),
            K0Expr::Add(a, b) => Ok(k0::add(&a.eval(params)?, &b.eval(params)?)),
            K0Expr::Sub(a, b) => Ok(k0::sub(&a.eval(params)?, &b.eval(params)?)),
            K0Expr::Mul(a, b) => Ok(k0::mul(&a.eval(params)?, &b.eval(params)?)),
        }
    }
}

/// Parses an expression and evaluates it over its own parameters united
/// with `extra`.
pub fn eval_k0_expr(text: &str, extra: &ParamSet) -> Result<(Characteristic, ParamSet), String> {
    let expr = parse_k0_expr(text)?;
    let params = ParamSet::new(
        expr.params()
            .into_iter()
            .chain(extra.values().iter().cloned()),
    );
    let value = expr.eval(&params)?;
    Ok((value, params))
}

pub fn parse_k0_expr(text: &str) -> Result<K0Expr, String> {
    let mut p = ExprParser { text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(format!("trailing input at position {}", p.pos));
    }
    Ok(e)
}

struct ExprParser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn bytes(&self) -> &[u8] {
        self.text.as_bytes()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes().get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<K0Expr, String> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = K0Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = K0Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<K0Expr, String> {
        let mut lhs = self.factor()?;
        while self.eat(b'*') {
            lhs = K0Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<K0Expr, String> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(K0Expr::Neg(Box::new(self.factor()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(format!("expected `)` at position {}", self.pos));
                }
                Ok(inner)
            }
            Some(b'X') => {
                self.pos += 1;
                self.generator()
            }
            Some(b'c') if self.text[self.pos..].starts_with("chi") => {
                self.pos += 3;
                self.chi_call()
            }
            Some(d) if d.is_ascii_digit() => {
                let start = self.pos;
                while self.bytes().get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                Ok(K0Expr::Int(self.text[start..self.pos].parse().unwrap()))
            }
            _ => Err(format!(
                "expected `chi(...)`, `X(a;n)`, an integer or parentheses at position {}",
                self.pos
            )),
        }
    }

    fn chi_call(&mut self) -> Result<K0Expr, String> {
        if !self.eat(b'(') {
            return Err(format!("expected `(` after chi at position {}", self.pos));
        }
        // The formula text runs to the matching close paren.
        let start = self.pos;
        let mut depth = 1usize;
        while self.pos < self.text.len() {
            match self.bytes()[self.pos] {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                _ => {}
            }
            self.pos += 1;
        }
        if depth != 0 {
            return Err("unbalanced parentheses in chi(...)".into());
        }
        let formula_text = &self.text[start..self.pos];
        self.pos += 1;
        let f = Formula::parse(formula_text, None).map_err(|e| e.to_string())?;
        let d = to_positive_dnf(&f).map_err(|e| e.to_string())?;
        Ok(K0Expr::Set(d))
    }

    fn generator(&mut self) -> Result<K0Expr, String> {
        if !self.eat(b'(') {
            return Err(format!("expected `(` after X at position {}", self.pos));
        }
        self.skip_ws();
        let param = if self.text[self.pos..].starts_with("-inf") {
            self.pos += 4;
            GenParam::NegInf
        } else {
            let start = self.pos;
            while self
                .bytes()
                .get(self.pos)
                .is_some_and(|b| b.is_ascii_digit() || *b == b'/' || *b == b'-')
            {
                self.pos += 1;
            }
            GenParam::Value(parse_rat(&self.text[start..self.pos])?)
        };
        if !self.eat(b';') {
            return Err(format!("expected `;` in X(a;n) at position {}", self.pos));
        }
        self.skip_ws();
        let start = self.pos;
        while self.bytes().get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let n: usize = self.text[start..self.pos]
            .parse()
            .map_err(|_| format!("expected a positive index at position {start}"))?;
        if n == 0 {
            return Err("generator index must be positive".into());
        }
        if !self.eat(b')') {
            return Err(format!("expected `)` at position {}", self.pos));
        }
        Ok(K0Expr::Gen(param, n))
    }
}
