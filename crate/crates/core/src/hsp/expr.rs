//! Expression language used by certificate payloads.
//!
//! Grammar: `+ - * / ^`, parentheses, integers, `i`, parameter symbols such
//! as `a2` (first upper entry of the second matrix), matrices `A1, A2, …`,
//! the identity `E`, matrix literals `[[…],[…]]` and the functions `tr`,
//! `det`, `sigmaT` (e.g. `sigma3`), `T` (transpose) and `entry(M, r, c)`.

use std::collections::HashMap;

use crate::corealg::{GaussianRational, Polynomial, Var};
use crate::error::{Error, Result};
use crate::genmat::{generic_skew, Matrix};

/// Quotient of polynomials; denominators only come from explicit division.
#[derive(Clone, Debug)]
pub(crate) struct Frac {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl Frac {
    fn poly(p: Polynomial) -> Self {
        Frac { num: p, den: Polynomial::one() }
    }

    fn normalize(mut self) -> Self {
        if self.den.is_constant() && !self.den.is_one() {
            let c = self.den.constant_term().inv();
            self.num = self.num.scale(&c);
            self.den = Polynomial::one();
        }
        self
    }

    fn add(&self, o: &Frac) -> Frac {
        if self.den == o.den {
            return Frac { num: self.num.add(&o.num), den: self.den.clone() };
        }
        Frac { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }.normalize()
    }

    fn neg(&self) -> Frac {
        Frac { num: self.num.neg(), den: self.den.clone() }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.normalize()
    }

    fn div(&self, o: &Frac) -> Result<Frac> {
        if o.num.is_zero() {
            return Err(malformed("division by zero"));
        }
        Ok(Frac { num: self.num.mul(&o.den), den: self.den.mul(&o.num) }.normalize())
    }

    fn as_poly(&self) -> Result<&Polynomial> {
        if self.den.is_one() {
            Ok(&self.num)
        } else {
            Err(malformed("a rational function cannot enter a matrix"))
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Value {
    Scalar(Frac),
    Matrix(Matrix<Polynomial>),
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedCertificate(msg.into())
}

/// Parameter symbol `<letter><k>`: the letter indexes the strict upper
/// triangle of `A_k` in row-major order.
pub(crate) fn symbol_var(name: &str, n: usize) -> Option<Var> {
    let mut chars = name.chars();
    let c = chars.next()?;
    if !c.is_ascii_lowercase() {
        return None;
    }
    let digits = chars.as_str();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    let k: usize = digits.parse().ok()?;
    let mut idx = (c as u8 - b'a') as usize;
    for i in 1..=n {
        for j in i + 1..=n {
            if idx == 0 {
                return (k < 256).then(|| Var::new(i, j, k));
            }
            idx -= 1;
        }
    }
    None
}

/// Inverse of [`symbol_var`].
pub(crate) fn symbol_name(v: Var, n: usize) -> String {
    let (i, j) = (v.i as usize, v.j as usize);
    let idx = (1..i).map(|r| n - r).sum::<usize>() + (j - i - 1);
    format!("{}{}", (b'a' + idx as u8) as char, v.k)
}

/// Evaluation context: matrix slots, symbol values and named definitions.
pub(crate) struct Env<'a> {
    pub n: usize,
    pub base: Option<(usize, &'a Matrix<Polynomial>)>,
    pub symbols: &'a HashMap<Var, Polynomial>,
    pub definitions: &'a [(String, String)],
}

impl Env<'_> {
    fn symbol(&self, v: Var) -> Polynomial {
        self.symbols.get(&v).cloned().unwrap_or_else(|| Polynomial::var(v))
    }

    fn slot(&self, k: usize) -> Result<Matrix<Polynomial>> {
        if k == 0 || k > 255 {
            return Err(malformed(format!("bad matrix index A{k}")));
        }
        if let Some((b, m)) = self.base {
            if b == k {
                return Ok(m.clone());
            }
        }
        Ok(generic_skew(self.n, k).map(|p| {
            let terms = p.terms();
            if terms.is_empty() {
                return Polynomial::zero();
            }
            let (m, c) = &terms[0];
            let v = m.iter().next().expect("linear entry").0;
            self.symbol(v).scale(c)
        }))
    }

    pub fn eval(&self, src: &str) -> Result<Value> {
        self.eval_depth(src, 0)
    }

    fn eval_depth(&self, src: &str, depth: usize) -> Result<Value> {
        if depth > 16 {
            return Err(malformed("definitions nest too deeply"));
        }
        let tokens = tokenize(src)?;
        let mut p = Parser { toks: &tokens, pos: 0, env: self, depth };
        let v = p.expr()?;
        if p.pos != tokens.len() {
            return Err(malformed(format!("trailing input in `{src}`")));
        }
        Ok(v)
    }

    pub fn scalar(&self, src: &str) -> Result<Frac> {
        match self.eval(src)? {
            Value::Scalar(f) => Ok(f),
            Value::Matrix(_) => Err(malformed(format!("`{src}` is a matrix, expected a scalar"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let v = s[st..i].parse().map_err(|_| malformed(format!("number too large in `{s}`")))?;
            out.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(s[st..i].to_string()));
        } else if "+-*/^()[],".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(malformed(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser<'t, 'e> {
    toks: &'t [Tok],
    pos: usize,
    env: &'e Env<'e>,
    depth: usize,
}

impl Parser<'_, '_> {
    fn peek_op(&self, c: char) -> bool {
        self.toks.get(self.pos) == Some(&Tok::Op(c))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek_op(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(malformed(format!("expected `{c}` at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            if self.peek_op('+') {
                self.pos += 1;
                let r = self.term()?;
                acc = add(&acc, &r)?;
            } else if self.peek_op('-') {
                self.pos += 1;
                let r = self.term()?;
                acc = add(&acc, &neg(&r))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            if self.peek_op('*') {
                self.pos += 1;
                let r = self.unary()?;
                acc = mul(&acc, &r)?;
            } else if self.peek_op('/') {
                self.pos += 1;
                let r = self.unary()?;
                acc = div(&acc, &r)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.peek_op('-') {
            self.pos += 1;
            return Ok(neg(&self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if !self.peek_op('^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = match self.toks.get(self.pos) {
            Some(Tok::Num(e)) if *e >= 0 && *e < 1000 => *e as u32,
            _ => return Err(malformed("exponent must be a small nonnegative integer")),
        };
        self.pos += 1;
        Ok(match base {
            Value::Scalar(f) => Value::Scalar(Frac { num: f.num.pow(e), den: f.den.pow(e) }),
            Value::Matrix(m) => Value::Matrix(m.pow(e)),
        })
    }

    fn args(&mut self) -> Result<Vec<Value>> {
        self.expect('(')?;
        let mut out = vec![self.expr()?];
        while self.peek_op(',') {
            self.pos += 1;
            out.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn atom(&mut self) -> Result<Value> {
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| malformed("unexpected end of expression"))?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(Value::Scalar(Frac::poly(Polynomial::constant(GaussianRational::from_integer(v))))),
            Tok::Op('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Op('[') => self.literal(),
            Tok::Op(c) => Err(malformed(format!("unexpected `{c}`"))),
            Tok::Ident(name) => self.ident(&name),
        }
    }

    fn literal(&mut self) -> Result<Value> {
        let mut rows = Vec::new();
        loop {
            self.expect('[')?;
            let mut row = vec![self.entry()?];
            while self.peek_op(',') {
                self.pos += 1;
                row.push(self.entry()?);
            }
            self.expect(']')?;
            rows.push(row);
            if self.peek_op(',') {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.expect(']')?;
        Ok(Value::Matrix(Matrix::from_rows(rows).map_err(|e| malformed(e.to_string()))?))
    }

    fn entry(&mut self) -> Result<Polynomial> {
        match self.expr()? {
            Value::Scalar(f) => Ok(f.as_poly()?.clone()),
            Value::Matrix(_) => Err(malformed("matrix literal entries must be scalars")),
        }
    }

    fn ident(&mut self, name: &str) -> Result<Value> {
        let env = self.env;
        if let Some((_, def)) = env.definitions.iter().find(|(k, _)| k == name) {
            return env.eval_depth(def, self.depth + 1);
        }
        if self.peek_op('(') {
            return self.call(name);
        }
        if name == "i" {
            return Ok(Value::Scalar(Frac::poly(Polynomial::constant(GaussianRational::i()))));
        }
        if name == "E" {
            return Ok(Value::Matrix(Matrix::identity(env.n)));
        }
        if let Some(k) = name.strip_prefix('A').and_then(|d| d.parse::<usize>().ok()) {
            return Ok(Value::Matrix(env.slot(k)?));
        }
        if let Some(v) = symbol_var(name, env.n) {
            return Ok(Value::Scalar(Frac::poly(env.symbol(v))));
        }
        Err(malformed(format!("unknown identifier `{name}`")))
    }

    fn call(&mut self, name: &str) -> Result<Value> {
        let args = self.args()?;
        let one_matrix = |args: &[Value]| -> Result<Matrix<Polynomial>> {
            match args {
                [Value::Matrix(m)] => Ok(m.clone()),
                _ => Err(malformed(format!("`{name}` takes one matrix"))),
            }
        };
        let n = self.env.n;
        let scalar = |p: Polynomial| Ok(Value::Scalar(Frac::poly(p)));
        match name {
            "tr" => scalar(one_matrix(&args)?.trace()),
            "det" => scalar(one_matrix(&args)?.sigma(n).map_err(|e| malformed(e.to_string()))?),
            "T" => Ok(Value::Matrix(one_matrix(&args)?.transpose())),
            "entry" => match args.as_slice() {
                [Value::Matrix(m), Value::Scalar(r), Value::Scalar(c)] => {
                    let (r, c) = (small_index(r)?, small_index(c)?);
                    if r == 0 || c == 0 || r > m.n() || c > m.n() {
                        return Err(malformed(format!("entry ({r},{c}) out of range")));
                    }
                    scalar(m.get(r - 1, c - 1).clone())
                }
                _ => Err(malformed("`entry` takes a matrix and two indices")),
            },
            _ => {
                let t = name
                    .strip_prefix("sigma")
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| malformed(format!("unknown function `{name}`")))?;
                scalar(one_matrix(&args)?.sigma(t).map_err(|e| malformed(e.to_string()))?)
            }
        }
    }
}

fn small_index(f: &Frac) -> Result<usize> {
    let p = f.as_poly()?;
    let c = p.constant_term();
    if !p.is_constant() || !c.is_real() || !c.re.is_integer() || c.re.is_negative() {
        return Err(malformed("index must be a nonnegative integer"));
    }
    c.re.numer().to_string().parse().map_err(|_| malformed("index too large"))
}

fn neg(v: &Value) -> Value {
    match v {
        Value::Scalar(f) => Value::Scalar(f.neg()),
        Value::Matrix(m) => Value::Matrix(m.neg()),
    }
}

fn add(a: &Value, b: &Value) -> Result<Value> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x.add(y))),
        (Value::Matrix(x), Value::Matrix(y)) if x.n() == y.n() => Ok(Value::Matrix(x.add(y))),
        (Value::Matrix(_), Value::Matrix(_)) => Err(malformed("matrix sizes differ")),
        _ => Err(malformed("cannot add a scalar and a matrix")),
    }
}

fn mul(a: &Value, b: &Value) -> Result<Value> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x.mul(y))),
        (Value::Matrix(x), Value::Matrix(y)) if x.n() == y.n() => Ok(Value::Matrix(x.mul(y))),
        (Value::Matrix(_), Value::Matrix(_)) => Err(malformed("matrix sizes differ")),
        (Value::Scalar(s), Value::Matrix(m)) | (Value::Matrix(m), Value::Scalar(s)) => {
            Ok(Value::Matrix(m.scale_by(s.as_poly()?)))
        }
    }
}

fn div(a: &Value, b: &Value) -> Result<Value> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x.div(y)?)),
        (Value::Matrix(m), Value::Scalar(y)) if y.num.is_constant() && y.den.is_constant() => {
            let c = y.num.constant_term();
            if c.is_zero() {
                return Err(malformed("division by zero"));
            }
            Ok(Value::Matrix(m.scale(&(&y.den.constant_term() / &c))))
        }
        _ => Err(malformed("a matrix can only be divided by a constant")),
    }
}

/// Parse `sym^e` as used in reduction rules.
pub(crate) fn parse_power(s: &str, n: usize) -> Result<(Var, u32)> {
    let (sym, e) = s.split_once('^').unwrap_or((s, "1"));
    let v = symbol_var(sym.trim(), n).ok_or_else(|| malformed(format!("bad symbol `{sym}`")))?;
    let e: u32 = e.trim().parse().map_err(|_| malformed(format!("bad exponent in `{s}`")))?;
    if e == 0 {
        return Err(malformed(format!("zero exponent in `{s}`")));
    }
    Ok((v, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env_eval(n: usize, src: &str) -> Result<Value> {
        let syms = HashMap::new();
        Env { n, base: None, symbols: &syms, definitions: &[] }.eval(src)
    }

    #[test]
    fn symbols_follow_row_major_upper_triangle() {
        assert_eq!(symbol_var("a2", 4), Some(Var::new(1, 2, 2)));
        assert_eq!(symbol_var("d2", 4), Some(Var::new(2, 3, 2)));
        assert_eq!(symbol_var("j2", 5), Some(Var::new(4, 5, 2)));
        assert_eq!(symbol_var("g2", 4), None);
        assert_eq!(symbol_var("i", 5), None);
        for v in [Var::new(1, 3, 1), Var::new(3, 5, 2), Var::new(4, 5, 3)] {
            assert_eq!(symbol_var(&symbol_name(v, 5), 5), Some(v));
        }
    }

    #[test]
    fn trace_of_generic_product() {
        let Value::Scalar(f) = env_eval(3, "tr(A1*A2) + 2*(a1*a2 + b1*b2 + c1*c2)").unwrap() else { panic!() };
        assert!(f.num.is_zero());
        let Value::Scalar(f) = env_eval(3, "sigma2(A1) - (a1^2 + b1^2 + c1^2)").unwrap() else { panic!() };
        assert!(f.num.is_zero());
    }

    #[test]
    fn literals_and_division() {
        let Value::Matrix(m) = env_eval(2, "[[0, 1/2], [-1/2, 0]]*2 - [[0,1],[-1,0]]").unwrap() else { panic!() };
        assert!(m.is_zero());
        let Value::Scalar(f) = env_eval(3, "(a1*c2)/c2").unwrap() else { panic!() };
        assert!(!f.den.is_one());
        assert!(env_eval(3, "A1 + 1").is_err());
        assert!(env_eval(3, "foo(A1)").is_err());
        assert!(env_eval(3, "tr(A1").is_err());
    }
}
