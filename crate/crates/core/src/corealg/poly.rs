//! Sparse multivariate polynomials in the entries `x_ij(k)` of generic skew
//! matrices.
//!
//! Variables are ordered so that `x_ij(k) > x_pq(l)` iff `k < l`, or `k = l`
//! and `(i, j)` precedes `(p, q)` lexicographically. Monomials are compared
//! first by total degree and then lexicographically with respect to that
//! variable order; terms of a [`Polynomial`] are kept sorted from largest to
//! smallest, so the highest term of a homogeneous polynomial is its first term.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use super::modular::{add_mod, mul_mod, ModElem, ModField};
use super::scalar::{GaussianRational, Rational};
use crate::error::{Error, Result};

/// Entry `x_ij(k)` of the `k`-th generic skew matrix, `1 ≤ i < j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var {
    pub i: u8,
    pub j: u8,
    pub k: u8,
}

impl Var {
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        assert!(i >= 1 && i < j && j < 256 && (1..256).contains(&k), "bad variable x_{i}{j}({k})");
        Var { i: i as u8, j: j as u8, k: k as u8 }
    }

    /// Key that grows as the variable gets smaller.
    fn rank(self) -> u32 {
        ((self.k as u32) << 16) | ((self.i as u32) << 8) | self.j as u32
    }

    fn pack(self, exp: u32) -> u32 {
        debug_assert!(exp > 0 && exp < 256);
        ((255 - self.k as u32) << 24) | ((255 - self.i as u32) << 16) | ((255 - self.j as u32) << 8) | exp
    }

    fn unpack(f: u32) -> (Var, u32) {
        let v = Var {
            k: (255 - (f >> 24)) as u8,
            i: (255 - ((f >> 16) & 0xff)) as u8,
            j: (255 - ((f >> 8) & 0xff)) as u8,
        };
        (v, f & 0xff)
    }

    fn key_bits(f: u32) -> u32 {
        f & !0xff
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        other.rank().cmp(&self.rank())
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.i < 10 && self.j < 10 {
            write!(f, "x_{}{}({})", self.i, self.j, self.k)
        } else {
            write!(f, "x_{},{}({})", self.i, self.j, self.k)
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Product of variables with positive exponents.
///
/// Each factor packs `(variable, exponent)` into a `u32` such that plain
/// integer comparison of the factor sequences (largest variable first) is the
/// lexicographic monomial order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    degree: u32,
    factors: SmallVec<[u32; 8]>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self::from_pairs([(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            if e > 0 {
                m = m.mul(&Monomial { degree: e, factors: SmallVec::from_slice(&[v.pack(e)]) });
            }
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// `(variable, exponent)` pairs, largest variable first.
    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.factors.iter().map(|&f| Var::unpack(f))
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| e)
    }

    /// Exponent sums grouped by matrix index `k = 1..=d`.
    pub fn mdeg(&self, d: usize) -> MultiDegree {
        let mut out = vec![0u32; d];
        for (v, e) in self.iter() {
            let k = v.k as usize;
            if k > out.len() {
                out.resize(k, 0);
            }
            out[k - 1] += e;
        }
        MultiDegree(out)
    }

    /// Largest matrix index appearing in the monomial.
    pub fn max_k(&self) -> usize {
        self.iter().map(|(v, _)| v.k as usize).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.factors.is_empty() {
            return self.clone();
        }
        if self.factors.is_empty() {
            return other.clone();
        }
        let mut out: SmallVec<[u32; 8]> = SmallVec::with_capacity(self.factors.len() + other.factors.len());
        let (a, b) = (&self.factors, &other.factors);
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            let (ka, kb) = (Var::key_bits(a[x]), Var::key_bits(b[y]));
            match ka.cmp(&kb) {
                Ordering::Greater => {
                    out.push(a[x]);
                    x += 1;
                }
                Ordering::Less => {
                    out.push(b[y]);
                    y += 1;
                }
                Ordering::Equal => {
                    let e = (a[x] & 0xff) + (b[y] & 0xff);
                    assert!(e < 256, "exponent overflow");
                    out.push(ka | e);
                    x += 1;
                    y += 1;
                }
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend_from_slice(&b[y..]);
        Monomial { degree: self.degree + other.degree, factors: out }
    }

    /// Split off the power of `v`: returns `(exponent, rest)`.
    pub fn take(&self, v: Var) -> (u32, Monomial) {
        let key = Var::key_bits(v.pack(1));
        match self.factors.iter().position(|&f| Var::key_bits(f) == key) {
            None => (0, self.clone()),
            Some(pos) => {
                let e = self.factors[pos] & 0xff;
                let mut factors = self.factors.clone();
                factors.remove(pos);
                (e, Monomial { degree: self.degree - e, factors })
            }
        }
    }

    /// `[[i, j, k, exp], …]` as used in the JSON polynomial format.
    pub fn to_quads(&self) -> Vec<[u32; 4]> {
        self.iter().map(|(v, e)| [v.i as u32, v.j as u32, v.k as u32, e]).collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (idx, (v, e)) in self.iter().enumerate() {
            if idx > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Multidegree `(t_1, …, t_d)`: `t_k` is the degree in the variables of `Y_k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct MultiDegree(pub Vec<u32>);

impl MultiDegree {
    pub fn zero(d: usize) -> Self {
        MultiDegree(vec![0; d])
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &MultiDegree) -> MultiDegree {
        let d = self.d().max(other.d());
        MultiDegree((0..d).map(|k| self.get(k) + other.get(k)).collect())
    }

    pub fn get(&self, k: usize) -> u32 {
        self.0.get(k).copied().unwrap_or(0)
    }

    /// `self − other` if componentwise nonnegative.
    pub fn checked_sub(&self, other: &MultiDegree) -> Option<MultiDegree> {
        let d = self.d().max(other.d());
        (0..d)
            .map(|k| self.get(k).checked_sub(other.get(k)))
            .collect::<Option<Vec<_>>>()
            .map(MultiDegree)
    }

    pub fn scaled(&self, t: u32) -> MultiDegree {
        MultiDegree(self.0.iter().map(|x| x * t).collect())
    }

    /// Pad or trim trailing zeros to length `d`.
    pub fn with_len(&self, d: usize) -> MultiDegree {
        MultiDegree((0..d).map(|k| self.get(k)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

type Term = (Monomial, GaussianRational);

/// Polynomial with Gaussian-rational coefficients in canonical form: no zero
/// coefficients, no repeated monomials, terms sorted from largest monomial.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<Term>,
}

fn merge(a: Vec<Term>, b: Vec<Term>, negate_b: bool) -> Vec<Term> {
    if b.is_empty() {
        return a;
    }
    if a.is_empty() && !negate_b {
        return b;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().map(|(m, c)| if negate_b { (m, -c) } else { (m, c) }).peekable();
    loop {
        let ord = match (ia.peek(), ib.peek()) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => break,
        };
        match ord {
            Ordering::Greater => out.push(ia.next().unwrap()),
            Ordering::Less => out.push(ib.next().unwrap()),
            Ordering::Equal => {
                let (m, c1) = ia.next().unwrap();
                let (_, c2) = ib.next().unwrap();
                let c = &c1 + &c2;
                if !c.is_zero() {
                    out.push((m, c));
                }
            }
        }
    }
    out
}

const PAR_THRESHOLD: usize = 1 << 14;

fn mul_terms(a: &[Term], b: &[Term]) -> Vec<Term> {
    if a.len() == 1 {
        let (m, c) = &a[0];
        // Multiplying by a monomial preserves the order.
        return b.iter().map(|(m2, c2)| (m.mul(m2), c * c2)).collect();
    }
    let mid = a.len() / 2;
    let (l, r) = if a.len() * b.len() > PAR_THRESHOLD {
        rayon::join(|| mul_terms(&a[..mid], b), || mul_terms(&a[mid..], b))
    } else {
        (mul_terms(&a[..mid], b), mul_terms(&a[mid..], b))
    };
    merge(l, r, false)
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: vec![(Monomial::one(), c)] }
    }

    pub fn var(v: Var) -> Self {
        Polynomial { terms: vec![(Monomial::var(v), GaussianRational::one())] }
    }

    pub fn x(i: usize, j: usize, k: usize) -> Self {
        Self::var(Var::new(i, j, k))
    }

    pub fn monomial(m: Monomial, c: GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: vec![(m, c)] }
    }

    /// Canonicalize arbitrary terms: sort, combine, drop zeros.
    pub fn from_terms(mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial { terms: out }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms
            .binary_search_by(|t| m.cmp(&t.0))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    /// Constant term.
    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&Monomial::one())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        Polynomial { terms: merge(self.terms.clone(), other.terms.clone(), false) }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        Polynomial { terms: merge(self.terms.clone(), other.terms.clone(), true) }
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        let a = std::mem::take(&mut self.terms);
        self.terms = merge(a, other.terms.clone(), false);
    }

    pub fn sub_assign(&mut self, other: &Polynomial) {
        let a = std::mem::take(&mut self.terms);
        self.terms = merge(a, other.terms.clone(), true);
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (a, b) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        Polynomial { terms: mul_terms(&a.terms, &b.terms) }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m2, c2)| (m.mul(m2), c * c2)).collect() }
    }

    /// `self · v`, or `−self · v` when `negate`; used by generic matrix products.
    pub fn mul_var(&self, v: Var, negate: bool) -> Polynomial {
        let m = Monomial::var(v);
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m2, c)| (m.mul(m2), if negate { -c } else { c.clone() }))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Sum of many polynomials via balanced pairwise merging.
    pub fn sum<I: IntoIterator<Item = Polynomial>>(items: I) -> Polynomial {
        let mut v: Vec<Polynomial> = items.into_iter().collect();
        while v.len() > 1 {
            let mut next = Vec::with_capacity(v.len().div_ceil(2));
            let mut it = v.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(Polynomial { terms: merge(a.terms, b.terms, false) }),
                    None => next.push(a),
                }
            }
            v = next;
        }
        v.pop().unwrap_or_default()
    }

    /// Total degree of the largest term (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.first().map_or(0, |t| t.0.degree())
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    /// Shared multidegree of all terms; `d` is the number of matrices.
    pub fn mdeg(&self, d: usize) -> Result<MultiDegree> {
        let mut it = self.terms.iter().map(|(m, _)| m.mdeg(d));
        let Some(first) = it.next() else {
            return Ok(MultiDegree::zero(d));
        };
        let first = first.with_len(d);
        for m in it {
            if m.with_len(d) != first {
                return Err(Error::NonHomogeneous);
            }
        }
        Ok(first)
    }

    /// Highest term under the graded lexicographic order.
    pub fn hterm(&self) -> Result<Monomial> {
        self.terms.first().map(|t| t.0.clone()).ok_or(Error::ZeroPolynomial)
    }

    /// Largest matrix index among the variables.
    pub fn max_k(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.max_k()).max().unwrap_or(0)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.iter().flat_map(|(m, _)| m.iter().map(|(v, _)| v)).collect();
        vs.sort_by(|a, b| b.cmp(a));
        vs.dedup();
        vs
    }

    pub fn derivative(&self, v: Var) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let (e, rest) = m.take(v);
                (e > 0).then(|| {
                    let mono = if e > 1 { rest.mul(&Monomial::from_pairs([(v, e - 1)])) } else { rest };
                    (mono, c.scale(&Rational::from_integer(e as i64)))
                })
            })
            .collect();
        Polynomial::from_terms(terms)
    }

    /// `den^E · self(v ↦ num/den)` where `E` is the degree of `self` in `v`.
    ///
    /// With `den = 1` this is ordinary substitution. For any nonzero `den` the
    /// result vanishes iff the substituted rational function vanishes.
    pub fn substitute(&self, v: Var, num: &Polynomial, den: &Polynomial) -> Polynomial {
        let top = self.degree_in(v);
        if top == 0 {
            return self.clone();
        }
        let unit_den = den.is_one();
        let mut by_power: Vec<Vec<Term>> = vec![Vec::new(); top as usize + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.take(v);
            by_power[e as usize].push((rest, c.clone()));
        }
        let num_pows = powers(num, top);
        let den_pows = if unit_den { Vec::new() } else { powers(den, top) };
        let parts = by_power.into_iter().enumerate().filter(|(_, t)| !t.is_empty()).map(|(e, t)| {
            let coeff = Polynomial::from_terms(t);
            let mut p = coeff.mul(&num_pows[e]);
            if !unit_den {
                p = p.mul(&den_pows[top as usize - e]);
            }
            p
        });
        Polynomial::sum(parts.collect::<Vec<_>>())
    }

    /// Reduce modulo `v^e − rhs` by rewriting every `v^(q·e + r)` as
    /// `rhs^q · v^r`. `rhs` must not involve `v` with exponent ≥ `e`.
    pub fn reduce_power(&self, v: Var, e: u32, rhs: &Polynomial) -> Polynomial {
        assert!(e >= 1);
        let top = self.degree_in(v);
        if top < e {
            return self.clone();
        }
        let rhs_pows = powers(rhs, top / e);
        let parts: Vec<Polynomial> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let (x, rest) = m.take(v);
                let (q, r) = (x / e, x % e);
                let mono = rest.mul(&Monomial::from_pairs([(v, r)]));
                rhs_pows[q as usize].mul_monomial(&mono, c)
            })
            .collect();
        let out = Polynomial::sum(parts);
        if out.degree_in(v) >= e {
            out.reduce_power(v, e, rhs)
        } else {
            out
        }
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Evaluate with a value for every variable.
    pub fn eval(&self, value: &impl Fn(Var) -> GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                t = &t * &value(v).pow(e);
            }
            acc += &t;
        }
        acc
    }

    /// Evaluate modulo a prime; `None` if the prime divides a denominator.
    pub fn eval_mod(&self, f: &ModField, value: &impl Fn(Var) -> ModElem) -> Option<ModElem> {
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = f.reduce(c)?;
            for (v, e) in m.iter() {
                let x = value(v);
                for _ in 0..e {
                    t = f.mul(&t, &x);
                }
            }
            acc = f.add(&acc, &t);
        }
        Some(acc)
    }

    /// Real coefficients evaluated at integer residues; fast path for the
    /// integer-coefficient invariants.
    pub fn eval_mod_real(&self, p: u64, value: &impl Fn(Var) -> u64) -> Option<u64> {
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            if !c.is_real() {
                return None;
            }
            let mut t = c.re.to_mod(p)?;
            for (v, e) in m.iter() {
                let x = value(v);
                for _ in 0..e {
                    t = mul_mod(t, x, p);
                }
            }
            acc = add_mod(acc, t, p);
        }
        Some(acc)
    }

    /// Rename matrix indices (used to instantiate templates on other letters).
    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Polynomial {
        Polynomial::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (Monomial::from_pairs(m.iter().map(|(v, e)| (f(v), e))), c.clone()))
                .collect(),
        )
    }
}

fn powers(p: &Polynomial, top: u32) -> Vec<Polynomial> {
    let mut out = Vec::with_capacity(top as usize + 1);
    out.push(Polynomial::one());
    for e in 1..=top as usize {
        out.push(out[e - 1].mul(p));
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_real() && c.re.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let coef = if mag.is_real() && mag.re.is_integer() {
                mag.re.numer().to_string()
            } else {
                format!("({mag})")
            };
            if m.is_one() {
                write!(f, "{coef}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{coef}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    monomial: Vec<[u32; 4]>,
    coeff: GaussianRational,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&JsonTerm { monomial: m.to_quads(), coeff: c.clone() })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<JsonTerm> = Vec::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.len());
        for t in raw {
            let mut pairs = Vec::new();
            for [i, j, k, e] in t.monomial {
                if !(i >= 1 && i < j && j < 256 && (1..256).contains(&k) && e < 256) {
                    return Err(D::Error::custom(format!("bad variable [{i},{j},{k},{e}]")));
                }
                pairs.push((Var::new(i as usize, j as usize, k as usize), e));
            }
            terms.push((Monomial::from_pairs(pairs), t.coeff));
        }
        Ok(Polynomial::from_terms(terms))
    }
}

impl From<GaussianRational> for Polynomial {
    fn from(c: GaussianRational) -> Self {
        Polynomial::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(i: usize, j: usize, k: usize) -> Polynomial {
        Polynomial::x(i, j, k)
    }

    #[test]
    fn additive_inverse() {
        assert!(x(1, 2, 1).add(&x(1, 2, 1).neg()).is_zero());
    }

    #[test]
    fn variable_order() {
        assert!(Var::new(1, 2, 1) > Var::new(1, 3, 1));
        assert!(Var::new(1, 3, 1) > Var::new(2, 3, 1));
        assert!(Var::new(2, 3, 1) > Var::new(1, 2, 2));
    }

    #[test]
    fn mdeg_reads_exponents() {
        let f = x(1, 2, 1).mul(&x(1, 3, 2));
        assert_eq!(f.mdeg(2).unwrap(), MultiDegree(vec![1, 1]));
        assert_eq!(x(1, 2, 1).add(&x(1, 3, 2)).mdeg(2), Err(Error::NonHomogeneous));
    }

    #[test]
    fn hterm_follows_order() {
        let f = x(1, 3, 1).sub(&x(1, 2, 1));
        assert_eq!(f.hterm().unwrap(), Monomial::var(Var::new(1, 2, 1)));
        assert_eq!(Polynomial::zero().hterm(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn lex_beats_later_variables() {
        // x12*x34^2 > x13^3 since x12 is the largest variable present.
        let a = Monomial::from_pairs([(Var::new(1, 2, 1), 1), (Var::new(3, 4, 1), 2)]);
        let b = Monomial::from_pairs([(Var::new(1, 3, 1), 3)]);
        assert!(a > b);
    }

    #[test]
    fn substitution_clears_denominators() {
        // f = a*c + b with c = -b/a  ->  a*(a*(-b/a) + b) = 0
        let (a, b, c) = (Var::new(1, 2, 1), Var::new(1, 3, 1), Var::new(2, 3, 1));
        let f = Polynomial::var(a).mul(&Polynomial::var(c)).add(&Polynomial::var(b));
        let g = f.substitute(c, &Polynomial::var(b).neg(), &Polynomial::var(a));
        assert!(g.is_zero());
    }

    #[test]
    fn power_reduction() {
        let (a, b) = (Var::new(1, 2, 1), Var::new(1, 3, 1));
        // a^5 mod (a^2 - b) = b^2 a
        let f = Polynomial::var(a).pow(5);
        let r = f.reduce_power(a, 2, &Polynomial::var(b));
        assert_eq!(r, Polynomial::var(b).pow(2).mul(&Polynomial::var(a)));
    }

    #[test]
    fn derivative_of_square() {
        let a = Var::new(1, 2, 1);
        let f = Polynomial::var(a).pow(2);
        assert_eq!(f.derivative(a), Polynomial::var(a).scale(&2.into()));
    }

    #[test]
    fn json_format() {
        let f = x(1, 2, 1).pow(2).scale(&GaussianRational::gauss(1, 1));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"[{"monomial":[[1,2,1,2]],"coeff":"1/1+1/1*i"}]"#);
        let g: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        let var = (1usize..4, 1usize..3).prop_map(|(i, k)| Var::new(i, i + 1, k));
        let term = (prop::collection::vec((var, 1u32..3), 0..3), -5i64..5, -2i64..3);
        prop::collection::vec(term, 0..5).prop_map(|ts| {
            Polynomial::from_terms(
                ts.into_iter()
                    .map(|(pairs, a, b)| (Monomial::from_pairs(pairs), GaussianRational::gauss(a, b)))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn hterm_is_multiplicative(a in arb_poly(), b in arb_poly()) {
            // restrict to the top-degree homogeneous parts
            let top = |p: &Polynomial| {
                let d = p.degree();
                Polynomial::from_terms(p.terms().iter().filter(|t| t.0.degree() == d).cloned().collect())
            };
            let (a, b) = (top(&a), top(&b));
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!(a.mul(&b).hterm().unwrap(), a.hterm().unwrap().mul(&b.hterm().unwrap()));
        }

        #[test]
        fn json_roundtrip(a in arb_poly()) {
            let s = serde_json::to_string(&a).unwrap();
            let back: Polynomial = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
