//! Generic and numeric skew-symmetric matrices, traces and `σ_t` of words.
//!
//! `σ_t(X)` is the coefficient of `λ^{n−t}` in `det(X + λE)`, i.e. the
//! `t`-th elementary symmetric function of the eigenvalues of `X`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::corealg::{GaussianRational, MultiDegree, Polynomial, Var};
use crate::error::{Error, Result};
use crate::words::{is_reversal_symmetric, Word};

/// Commutative ring of matrix entries; integer division is only used by
/// Newton's identities and is exact in characteristic zero.
pub trait Ring: Clone + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &GaussianRational) -> Self;
    fn from_scalar(c: GaussianRational) -> Self;
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        self * c
    }
    fn from_scalar(c: GaussianRational) -> Self {
        c
    }
}

impl Ring for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Polynomial::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Polynomial::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Polynomial::mul(self, other)
    }
    fn neg(&self) -> Self {
        Polynomial::neg(self)
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        Polynomial::scale(self, c)
    }
    fn from_scalar(c: GaussianRational) -> Self {
        Polynomial::constant(c)
    }
}

/// Dense square matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

/// Skew-symmetric matrices use the general matrix type; [`Matrix::is_skew`]
/// checks the shape.
pub type SkewMatrix<T = GaussianRational> = Matrix<T>;

impl<T: Ring> Matrix<T> {
    pub fn zero(n: usize) -> Self {
        Matrix { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, T::one())
    }

    pub fn scalar(n: usize, c: T) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::BadSize("rows of unequal length".into()));
        }
        Ok(Matrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Zero-based entry access.
    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.n + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, T::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, T::sub)
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        Matrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(T::neg)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map(|x| x.scale(c))
    }

    pub fn scale_by(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let mut out = Self::zero(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = T::zero();
                for j in 0..n {
                    let a = self.get(r, j);
                    let b = other.get(j, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.data[r * n + c] = acc;
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.get(r, c).clone();
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.n {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> T {
        let n = self.n;
        let mut acc = T::zero();
        for r in 0..n {
            for j in 0..n {
                let a = self.get(r, j);
                let b = other.get(j, r);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn is_skew(&self) -> bool {
        let n = self.n;
        (0..n).all(|r| self.get(r, r).is_zero() && (r + 1..n).all(|c| self.get(c, r).add(self.get(r, c)).is_zero()))
    }

    /// Strict upper triangle, row-major.
    pub fn upper(&self) -> Vec<T> {
        let n = self.n;
        (0..n).flat_map(|r| (r + 1..n).map(move |c| (r, c))).map(|(r, c)| self.get(r, c).clone()).collect()
    }

    /// Coefficients `σ_0, …, σ_n` of `det(self + λE)` by the Faddeev–LeVerrier
    /// recurrence.
    pub fn char_coefficients(&self) -> Vec<T> {
        // M_k = A·M_{k−1} + c_{k−1}E, c_k = −tr(A·M_k)/k gives
        // det(λE − A) = Σ c_k λ^{n−k}; then σ_k = (−1)^k c_k.
        let n = self.n;
        let mut sig = vec![T::one()];
        let mut m = Self::identity(n);
        let mut c_prev = T::one();
        for k in 1..=n {
            if k > 1 {
                m = self.mul(&m).add(&Self::scalar(n, c_prev.clone()));
            }
            let tr = self.trace_of_product(&m);
            let c = tr.scale(&GaussianRational::ratio(-1, k as i64));
            sig.push(if k % 2 == 0 { c.clone() } else { c.neg() });
            c_prev = c;
        }
        sig
    }

    pub fn sigma(&self, t: usize) -> Result<T> {
        if t > self.n {
            return Err(Error::BadT { t, n: self.n });
        }
        Ok(self.char_coefficients().swap_remove(t))
    }
}

impl Matrix<GaussianRational> {
    /// Numeric `σ_t` through the trace powers, independent of the
    /// Faddeev–LeVerrier route.
    pub fn sigma_newton(&self, t: usize) -> Result<GaussianRational> {
        if t > self.n {
            return Err(Error::BadT { t, n: self.n });
        }
        let mut p = Vec::with_capacity(t + 1);
        p.push(GaussianRational::zero());
        let mut pw = self.clone();
        for k in 1..=t {
            if k > 1 {
                pw = pw.mul(self);
            }
            p.push(pw.trace());
        }
        Ok(newton(&p, t).swap_remove(t))
    }
}

/// `σ_0..=σ_t` from power sums `p[1..=t]` (`p[0]` ignored).
fn newton<T: Ring>(p: &[T], t: usize) -> Vec<T> {
    let mut sig = vec![T::one()];
    for k in 1..=t {
        let mut acc = T::zero();
        for i in 1..=k {
            let term = sig[k - i].mul(&p[i]);
            acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        sig.push(acc.scale(&GaussianRational::ratio(1, k as i64)));
    }
    sig
}

impl<T: Ring + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T: Ring + fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct SkewJson {
    n: usize,
    upper: Vec<GaussianRational>,
}

impl Serialize for Matrix<GaussianRational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SkewJson { n: self.n, upper: self.upper() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix<GaussianRational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SkewJson::deserialize(d)?;
        let m = skew_from_upper(j.upper).map_err(serde::de::Error::custom)?;
        if m.n != j.n {
            return Err(serde::de::Error::custom(format!("upper triangle does not match n = {}", j.n)));
        }
        Ok(m)
    }
}

/// `Y_k`: entries `x_ij(k)` above the diagonal, `−x_ij(k)` below.
pub fn generic_skew(n: usize, k: usize) -> Matrix<Polynomial> {
    let mut m = Matrix::zero(n);
    for i in 1..=n {
        for j in i + 1..=n {
            let x = Polynomial::x(i, j, k);
            m.set(j - 1, i - 1, x.neg());
            m.set(i - 1, j - 1, x);
        }
    }
    m
}

/// `Skew(a_1, …, a_s)`: row-major fill of the strict upper triangle.
pub fn skew_from_upper<T: Ring>(values: Vec<T>) -> Result<Matrix<T>> {
    let s = values.len();
    let n = (2..=64).find(|n| n * (n - 1) / 2 == s).ok_or(Error::BadLength(s))?;
    let mut m = Matrix::zero(n);
    let mut it = values.into_iter();
    for r in 0..n {
        for c in r + 1..n {
            let v = it.next().expect("length checked");
            m.set(c, r, v.neg());
            m.set(r, c, v);
        }
    }
    Ok(m)
}

/// Convenience for literals: `Skew` of Gaussian rationals scaled by `c`.
pub fn skew_scaled(values: &[GaussianRational], c: &GaussianRational) -> Result<Matrix<GaussianRational>> {
    skew_from_upper(values.iter().map(|v| v * c).collect())
}

/// `M · Y_k` using the sparsity of the generic matrix.
fn mul_generic(m: &Matrix<Polynomial>, k: usize) -> Matrix<Polynomial> {
    let n = m.n;
    let mut out = Matrix::zero(n);
    for r in 0..n {
        for c in 0..n {
            let parts = (0..n).filter(|&j| j != c && !m.get(r, j).is_zero()).map(|j| {
                let (lo, hi, negate) = if j < c { (j, c, false) } else { (c, j, true) };
                m.get(r, j).mul_var(Var::new(lo + 1, hi + 1, k), negate)
            });
            out.set(r, c, Polynomial::sum(parts));
        }
    }
    out
}

/// Exact product `Y_{i1}⋯Y_{is}` of generic matrices.
pub fn word_product(w: &Word, n: usize) -> Matrix<Polynomial> {
    let letters = w.letters();
    let mut m = generic_skew(n, letters[0] as usize);
    for &l in &letters[1..] {
        m = mul_generic(&m, l as usize);
    }
    m
}

/// `A_{i1}⋯A_{is}` for numeric or symbolic matrices.
pub fn word_product_of<T: Ring>(w: &Word, mats: &[Matrix<T>]) -> Result<Matrix<T>> {
    let d = mats.len();
    if w.max_letter() > d {
        return Err(Error::SizeMismatch { expected: w.max_letter(), got: d });
    }
    let letters = w.letters();
    let mut m = mats[letters[0] as usize - 1].clone();
    for &l in &letters[1..] {
        m = m.mul(&mats[l as usize - 1]);
    }
    Ok(m)
}

/// `tr(Y_{i1}⋯Y_{is})`.
///
/// Reversal negates the trace of an odd-length word, so a word of odd length
/// whose reversal is one of its rotations has zero trace; that case returns
/// without multiplying. Other odd words, such as `Y1 Y2 Y3`, have nonzero
/// trace.
pub fn trace_word(w: &Word, n: usize) -> Polynomial {
    let s = w.len();
    if s % 2 == 1 && is_reversal_symmetric(w) {
        return Polynomial::zero();
    }
    let letters = w.letters();
    let head = Word::from_slice(&letters[..s - 1]);
    word_product(&head, n).trace_of_product(&generic_skew(n, letters[s - 1] as usize))
}

/// `σ_t(Y_{i1}⋯Y_{is})`.
///
/// Uses Newton's identities on the power traces `tr(M^k)`, which is the
/// scalar form of the Faddeev–LeVerrier recurrence; odd power traces of
/// odd-length reversal-symmetric words vanish and are skipped.
pub fn sigma_word(t: usize, w: &Word, n: usize) -> Result<Polynomial> {
    if t == 0 || t > n {
        return Err(Error::BadT { t, n });
    }
    if t == 1 {
        return Ok(trace_word(w, n));
    }
    let odd = w.len() % 2 == 1 && is_reversal_symmetric(w);
    let m = word_product(w, n);
    let mut p = vec![Polynomial::zero()];
    // `pw` holds M^{k−1}.
    let mut pw = m.clone();
    for k in 1..=t {
        if k >= 3 {
            pw = pw.mul(&m);
        }
        if odd && k % 2 == 1 {
            p.push(Polynomial::zero());
        } else if k == 1 {
            p.push(m.trace());
        } else {
            p.push(pw.trace_of_product(&m));
        }
    }
    Ok(newton(&p, t).swap_remove(t))
}

/// `Σ_{i=0}^{n} U^{n−i} σ_i(U)` for `U = Y_1`; zero by Cayley–Hamilton since
/// the odd `σ_i` of a skew matrix vanish.
pub fn cayley_hamilton_residual(n: usize) -> Matrix<Polynomial> {
    let u = generic_skew(n, 1);
    let mut acc = Matrix::zero(n);
    let mut upow = Matrix::identity(n);
    // Horner: ((U + σ_1)U + σ_2)U + … + σ_n.
    let sig: Vec<Polynomial> = (0..=n)
        .map(|i| if i == 0 { Polynomial::one() } else { sigma_word(i, &Word::from_slice(&[1]), n).expect("t ≤ n") })
        .collect();
    for (i, s) in sig.iter().enumerate().rev() {
        acc = acc.add(&upow.scale_by(s));
        if i > 0 {
            upow = upow.mul(&u);
        }
    }
    acc
}

/// `d` numeric skew matrices of a common size.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    pub matrices: Vec<Matrix<GaussianRational>>,
}

impl Assignment {
    pub fn new(matrices: Vec<Matrix<GaussianRational>>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::BadSize("empty assignment".into()));
        };
        let n = first.n();
        for m in &matrices {
            if m.n() != n {
                return Err(Error::SizeMismatch { expected: n, got: m.n() });
            }
            if !m.is_skew() {
                return Err(Error::BadSize("matrix is not skew-symmetric".into()));
            }
        }
        Ok(Assignment { matrices })
    }

    pub fn zero(n: usize, d: usize) -> Self {
        Assignment { matrices: vec![Matrix::zero(n); d] }
    }

    pub fn n(&self) -> usize {
        self.matrices[0].n()
    }

    pub fn d(&self) -> usize {
        self.matrices.len()
    }

    /// Value of the coordinate `x_ij(k)`.
    pub fn coordinate(&self, v: Var) -> GaussianRational {
        self.matrices[v.k as usize - 1].get(v.i as usize - 1, v.j as usize - 1).clone()
    }

    /// Accepts `{"matrices": [...]}` or a bare array of matrices.
    pub fn from_json(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Form {
            Wrapped { matrices: Vec<Matrix<GaussianRational>> },
            Bare(Vec<Matrix<GaussianRational>>),
        }
        let form: Form = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        match form {
            Form::Wrapped { matrices } | Form::Bare(matrices) => Assignment::new(matrices),
        }
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wrapped<'a> {
            matrices: &'a [Matrix<GaussianRational>],
        }
        Wrapped { matrices: &self.matrices }.serialize(s)
    }
}

/// One factor `σ_t(w)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SigmaFactor {
    pub t: usize,
    pub word: Word,
}

impl SigmaFactor {
    pub fn new(t: usize, word: Word) -> Self {
        SigmaFactor { t, word }
    }

    pub fn label(&self, n: usize) -> String {
        Invariant::label_for(self.t, &self.word, n)
    }

    pub fn mdeg(&self, d: usize) -> MultiDegree {
        MultiDegree(self.word.content(d).iter().map(|c| c * self.t as u32).collect())
    }

    pub fn value(&self, n: usize) -> Result<Polynomial> {
        sigma_word(self.t, &self.word, n)
    }
}

/// An invariant polynomial with its multidegree: `σ_t` of a word, a product
/// of such, or a general combination (empty `factors`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Invariant {
    pub label: String,
    pub n: usize,
    pub mdeg: MultiDegree,
    pub factors: Vec<SigmaFactor>,
    #[serde(skip)]
    pub value: Polynomial,
}

impl Invariant {
    /// `σ_t(w)` at size `n`; the multidegree has one slot per letter up to `d`.
    pub fn sigma(t: usize, word: Word, n: usize, d: usize) -> Result<Self> {
        let f = SigmaFactor::new(t, word);
        let value = f.value(n)?;
        Ok(Invariant { label: f.label(n), n, mdeg: f.mdeg(d), factors: vec![f], value })
    }

    pub fn trace(word: Word, n: usize, d: usize) -> Result<Self> {
        Self::sigma(1, word, n, d)
    }

    /// Product of invariants of a common size.
    pub fn product(parts: &[&Invariant]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::BadSize("empty product".into()))?;
        let d = parts.iter().map(|p| p.mdeg.d()).max().unwrap_or(0);
        let mut out = Invariant {
            label: String::new(),
            n: first.n,
            mdeg: MultiDegree::zero(d),
            factors: Vec::new(),
            value: Polynomial::one(),
        };
        let mut labels = Vec::new();
        for p in parts {
            if p.n != first.n {
                return Err(Error::SizeMismatch { expected: first.n, got: p.n });
            }
            out.mdeg = out.mdeg.add(&p.mdeg.with_len(d));
            out.factors.extend(p.factors.iter().cloned());
            out.value = out.value.mul(&p.value);
            labels.push(p.label.clone());
        }
        if parts.iter().any(|p| p.factors.is_empty()) {
            out.factors.clear();
        }
        out.label = labels.join("·");
        Ok(out)
    }

    /// A general invariant given by its polynomial, which must be
    /// multihomogeneous of multidegree `mdeg`.
    pub fn custom(label: impl Into<String>, n: usize, mdeg: MultiDegree, value: Polynomial) -> Result<Self> {
        if !value.is_zero() {
            let got = value.mdeg(mdeg.d())?;
            if got != mdeg {
                return Err(Error::MixedMultidegree(mdeg, got));
            }
        }
        Ok(Invariant { label: label.into(), n, mdeg, factors: Vec::new(), value })
    }

    /// `t` of a single `σ_t(w)`.
    pub fn t(&self) -> Option<usize> {
        (self.factors.len() == 1).then(|| self.factors[0].t)
    }

    /// Word of a single `σ_t(w)`.
    pub fn word(&self) -> Option<&Word> {
        (self.factors.len() == 1).then(|| &self.factors[0].word)
    }

    /// Number of matrices the invariant actually involves.
    pub fn letters_used(&self) -> usize {
        self.mdeg.0.iter().rposition(|&c| c > 0).map_or(0, |i| i + 1)
    }

    pub fn label_for(t: usize, word: &Word, n: usize) -> String {
        let inner = word.product_label();
        if t == 1 {
            format!("tr({inner})")
        } else if t == n && word.len() == 1 {
            format!("det({inner})")
        } else {
            format!("σ{t}({inner})")
        }
    }
}

fn check_sizes(inv: &Invariant, a: &Assignment) -> Result<()> {
    if a.n() != inv.n {
        return Err(Error::SizeMismatch { expected: inv.n, got: a.n() });
    }
    if inv.letters_used() > a.d() {
        return Err(Error::SizeMismatch { expected: inv.letters_used(), got: a.d() });
    }
    Ok(())
}

/// Substitute the assignment into the invariant's polynomial.
pub fn evaluate(inv: &Invariant, a: &Assignment) -> Result<GaussianRational> {
    check_sizes(inv, a)?;
    Ok(inv.value.eval(&|v| a.coordinate(v)))
}

/// Evaluate the invariant by first multiplying numeric matrices and then
/// taking `σ_t` numerically. General combinations fall back to substitution.
pub fn evaluate_direct(inv: &Invariant, a: &Assignment) -> Result<GaussianRational> {
    check_sizes(inv, a)?;
    if inv.factors.is_empty() {
        return evaluate(inv, a);
    }
    let mut acc = GaussianRational::one();
    for f in &inv.factors {
        acc *= &word_product_of(&f.word, &a.matrices)?.sigma(f.t)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::gauss(a, b)
    }

    fn w(l: &[u8]) -> Word {
        Word::from_slice(l)
    }

    fn x(i: usize, j: usize, k: usize) -> Polynomial {
        Polynomial::x(i, j, k)
    }

    #[test]
    fn generic_shape() {
        let y = generic_skew(2, 1);
        assert_eq!(y.get(0, 1), &x(1, 2, 1));
        assert_eq!(y.get(1, 0), &x(1, 2, 1).neg());
        assert!(y.is_skew());
        let y = generic_skew(4, 3);
        assert_eq!(y.transpose(), y.neg());
        assert_eq!(generic_skew(3, 2).upper(), vec![x(1, 2, 2), x(1, 3, 2), x(2, 3, 2)]);
    }

    #[test]
    fn skew_literals() {
        let k = skew_from_upper(vec![g(1, 1), g(0, 0), g(-1, 1)]).unwrap();
        assert_eq!(k.n(), 3);
        for t in 1..=3 {
            assert!(k.sigma(t).unwrap().is_zero());
        }
        assert!(matches!(skew_from_upper(vec![g(1, 0); 4]), Err(Error::BadLength(4))));
        assert!(skew_from_upper(vec![g(0, 0); 6]).unwrap().is_zero());
    }

    #[test]
    fn products_and_traces() {
        let p = word_product(&w(&[1, 1]), 2);
        let sq = x(1, 2, 1).pow(2).neg();
        assert_eq!(p, Matrix::scalar(2, sq));
        assert_eq!(word_product(&w(&[2]), 4), generic_skew(4, 2));
        assert_eq!(trace_word(&w(&[1, 2]), 2), x(1, 2, 1).mul(&x(1, 2, 2)).scale(&g(-2, 0)));
        assert!(trace_word(&w(&[1]), 5).is_zero());
        assert!(trace_word(&w(&[1, 1, 2]), 4).is_zero());
        let t123 = trace_word(&w(&[1, 2, 3]), 3);
        assert!(!t123.is_zero());
        assert_eq!(t123.add(&trace_word(&w(&[1, 3, 2]), 3)), Polynomial::zero());
        let expect = Polynomial::sum([(1, 2), (1, 3), (2, 3)].map(|(i, j)| x(i, j, 1).mul(&x(i, j, 2))))
            .scale(&g(-2, 0));
        assert_eq!(trace_word(&w(&[1, 2]), 3), expect);
    }

    #[test]
    fn sigma_examples() {
        let s2 = sigma_word(2, &w(&[1]), 3).unwrap();
        assert_eq!(s2, Polynomial::sum([(1, 2), (1, 3), (2, 3)].map(|(i, j)| x(i, j, 1).pow(2))));
        assert!(sigma_word(1, &w(&[1]), 3).unwrap().is_zero());
        assert!(sigma_word(3, &w(&[1]), 3).unwrap().is_zero());
        assert_eq!(sigma_word(2, &w(&[1]), 2).unwrap(), x(1, 2, 1).pow(2));
        assert!(matches!(sigma_word(4, &w(&[1]), 3), Err(Error::BadT { t: 4, n: 3 })));
        assert!(matches!(sigma_word(0, &w(&[1]), 3), Err(Error::BadT { .. })));
    }

    #[test]
    fn sigma_word_agrees_with_matrix_recurrence() {
        for (n, word) in [(3, vec![1, 2]), (4, vec![1, 1, 2]), (4, vec![1, 2, 3]), (3, vec![1, 2, 2, 1, 2])] {
            let word = w(&word);
            let fl = word_product(&word, n).char_coefficients();
            for t in 1..=n {
                assert_eq!(sigma_word(t, &word, n).unwrap(), fl[t], "t={t} w={word:?}");
            }
        }
    }

    #[test]
    fn determinant_of_skew_four_is_pfaffian_square() {
        let det = sigma_word(4, &w(&[1]), 4).unwrap();
        let pf = x(1, 2, 1).mul(&x(3, 4, 1)).sub(&x(1, 3, 1).mul(&x(2, 4, 1))).add(&x(1, 4, 1).mul(&x(2, 3, 1)));
        assert_eq!(det, pf.pow(2));
    }

    #[test]
    fn cayley_hamilton_vanishes() {
        for n in 2..=5 {
            assert!(cayley_hamilton_residual(n).is_zero(), "n={n}");
        }
    }

    #[test]
    fn numeric_evaluation() {
        let k3 = skew_from_upper(vec![g(1, 1), g(0, 0), g(-1, 1)]).unwrap().scale(&GaussianRational::ratio(1, 2));
        let a = Assignment::new(vec![k3]).unwrap();
        let inv = Invariant::sigma(2, w(&[1]), 3, 1).unwrap();
        assert!(evaluate(&inv, &a).unwrap().is_zero());

        let j = skew_from_upper(vec![g(1, 0), g(0, 0), g(0, 0)]).unwrap();
        let a = Assignment::new(vec![j.clone(), j]).unwrap();
        let tr = Invariant::trace(w(&[1, 2]), 3, 2).unwrap();
        assert_eq!(evaluate(&tr, &a).unwrap(), g(-2, 0));
        assert_eq!(evaluate_direct(&tr, &a).unwrap(), g(-2, 0));

        let z = Assignment::zero(3, 2);
        assert!(evaluate(&tr, &z).unwrap().is_zero());
        assert!(matches!(evaluate(&tr, &Assignment::zero(4, 2)), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn labels_and_mdeg() {
        let inv = Invariant::sigma(2, w(&[1, 1, 2]), 4, 3).unwrap();
        assert_eq!(inv.label, "σ2(Y1^2 Y2)");
        assert_eq!(inv.mdeg, MultiDegree(vec![4, 2, 0]));
        assert_eq!(inv.value.mdeg(3).unwrap(), inv.mdeg);
        assert_eq!(Invariant::sigma(4, w(&[2]), 4, 2).unwrap().label, "det(Y2)");
        assert_eq!(Invariant::trace(w(&[1, 2]), 4, 2).unwrap().label, "tr(Y1 Y2)");
        let a = Invariant::sigma(2, w(&[1]), 4, 2).unwrap();
        let b = Invariant::sigma(2, w(&[2]), 4, 2).unwrap();
        let ab = Invariant::product(&[&a, &b]).unwrap();
        assert_eq!(ab.label, "σ2(Y1)·σ2(Y2)");
        assert_eq!(ab.mdeg, MultiDegree(vec![2, 2]));
        assert_eq!(ab.factors.len(), 2);
        let j = skew_from_upper((1..=6).map(|v| g(v, 0)).collect()).unwrap();
        let k = skew_from_upper((1..=6).map(|v| g(v * v - 3, 1)).collect()).unwrap();
        let asg = Assignment::new(vec![j, k]).unwrap();
        assert_eq!(evaluate(&ab, &asg).unwrap(), evaluate_direct(&ab, &asg).unwrap());
        assert!(matches!(
            Invariant::custom("bad", 4, MultiDegree(vec![2, 0]), b.value.clone()),
            Err(Error::MixedMultidegree(..))
        ));
    }

    #[test]
    fn assignment_json() {
        let j = skew_from_upper(vec![g(1, 0), GaussianRational::ratio(1, 2), g(0, -1)]).unwrap();
        let a = Assignment::new(vec![j]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"matrices":[{"n":3,"upper":["1/1","1/2","0/1+-1/1*i"]}]}"#);
        assert_eq!(Assignment::from_json(&s).unwrap(), a);
        let bare = format!("[{}]", serde_json::to_string(&a.matrices[0]).unwrap());
        assert_eq!(Assignment::from_json(&bare).unwrap(), a);
        assert!(Assignment::from_json(r#"[{"n":4,"upper":["1","0","0"]}]"#).is_err());
    }

    fn arb_skew(n: usize) -> impl Strategy<Value = Matrix<GaussianRational>> {
        proptest::collection::vec((-3i64..=3, -2i64..=2), n * (n - 1) / 2)
            .prop_map(|v| skew_from_upper(v.into_iter().map(|(a, b)| g(a, b)).collect()).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn substitution_commutes_with_sigma(a in arb_skew(4), b in arb_skew(4), t in 1usize..=4, word in proptest::collection::vec(1u8..=2, 1..4)) {
            let word = Word::new(word).unwrap();
            let inv = Invariant::sigma(t, word, 4, 2).unwrap();
            let asg = Assignment::new(vec![a, b]).unwrap();
            let direct = evaluate_direct(&inv, &asg).unwrap();
            prop_assert_eq!(evaluate(&inv, &asg).unwrap(), direct.clone());
            let m = word_product_of(inv.word().unwrap(), &asg.matrices).unwrap();
            prop_assert_eq!(m.sigma_newton(t).unwrap(), direct);
        }

        #[test]
        fn second_sigma_from_traces(word in proptest::collection::vec(1u8..=3, 1..=3), n in 2usize..=4) {
            let word = Word::new(word).unwrap();
            let m = word_product(&word, n);
            let lhs = sigma_word(2, &word, n).unwrap().scale(&g(2, 0));
            let rhs = m.trace().pow(2).sub(&m.mul(&m).trace());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rotation_and_reversal_symmetry(word in proptest::collection::vec(1u8..=2, 1..=4), k in 0usize..4, t in 1usize..=3) {
            let word = Word::new(word).unwrap();
            let n = 3;
            let s = sigma_word(t, &word, n).unwrap();
            prop_assert_eq!(sigma_word(t, &word.rotated(k), n).unwrap(), s.clone());
            let rev = sigma_word(t, &word.reversed(), n).unwrap();
            let expect = if (t * word.len()) % 2 == 1 { rev.neg() } else { rev };
            prop_assert_eq!(s, expect);
            prop_assert_eq!(trace_word(&word, n), trace_word(&word.rotated(k), n));
        }
    }
}
