//! Replayable nullcone certificates: ordered substitutions per branch plus
//! claimed identities, all checked in exact arithmetic.

use std::collections::{BTreeSet, HashMap};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::expr::{parse_power, symbol_name, symbol_var, Env, Frac, Value};
use crate::canonical::CanonicalMatrix;
use crate::corealg::{Polynomial, Var};
use crate::error::{Error, Result};
use crate::genmat::{skew_from_upper, Matrix};

/// One identity to verify after the branch's substitutions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Claim {
    MatrixZero(String),
    PolyZero(String),
    MatrixEquals { lhs: String, rhs: String },
}

impl Claim {
    pub fn label(&self) -> String {
        match self {
            Claim::MatrixZero(e) | Claim::PolyZero(e) => format!("{e} = 0"),
            Claim::MatrixEquals { lhs, rhs } => format!("{lhs} = {rhs}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub label: String,
    /// Matrix slot occupied by the base matrix.
    #[serde(default = "one")]
    pub base_slot: usize,
    /// Symbols assumed nonzero; the only allowed factors of a denominator.
    #[serde(default)]
    pub nonzero: Vec<String>,
    /// Applied in order; each right side may only mention symbols that are
    /// substituted later or not at all.
    pub substitutions: Vec<(String, String)>,
    /// Rules `sym^e → poly` applied after all substitutions.
    #[serde(default)]
    pub reductions: Vec<(String, String)>,
    pub claims: Vec<Claim>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NullconeCertificate {
    pub name: String,
    pub n: usize,
    /// `generic`, a block list such as `K3;0:1`, or `skew(v1, …, vs)`.
    pub base: String,
    pub params: Vec<String>,
    #[serde(default)]
    pub definitions: Vec<(String, String)>,
    pub branches: Vec<Branch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimFailure {
    pub branch: String,
    pub claim: String,
    /// First nonzero residual entry, abbreviated.
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub name: String,
    pub passed: bool,
    pub branches: usize,
    pub claims_checked: usize,
    pub failure: Option<ClaimFailure>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedCertificate(msg.into())
}

impl NullconeCertificate {
    /// Copy with one substitution of one branch removed.
    pub fn without_substitution(&self, branch: usize, index: usize) -> Option<Self> {
        let mut c = self.clone();
        let b = c.branches.get_mut(branch)?;
        if index >= b.substitutions.len() {
            return None;
        }
        b.substitutions.remove(index);
        c.name = format!("{}-mutated", self.name);
        Some(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| malformed(e.to_string()))
    }

    fn base_matrix(&self) -> Result<Option<Matrix<Polynomial>>> {
        let b = self.base.trim();
        if b == "generic" {
            return Ok(None);
        }
        let m = if let Some(inner) = b.strip_prefix("skew(").and_then(|r| r.strip_suffix(')')) {
            let syms = HashMap::new();
            let env = Env { n: self.n, base: None, symbols: &syms, definitions: &[] };
            let vals = inner
                .split(',')
                .map(|s| {
                    let f = env.scalar(s)?;
                    if f.den.is_one() && f.num.is_constant() {
                        Ok(f.num)
                    } else {
                        Err(malformed(format!("base entry `{s}` is not a constant")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            skew_from_upper(vals).map_err(|e| malformed(e.to_string()))?
        } else {
            let c = CanonicalMatrix::from_str(b).map_err(|e| malformed(format!("base `{b}`: {e}")))?;
            c.matrix.map(|z| Polynomial::constant(z.clone()))
        };
        if m.n() != self.n {
            return Err(malformed(format!("base has size {}, certificate has n = {}", m.n(), self.n)));
        }
        Ok(Some(m))
    }
}

struct Prepared {
    subs: Vec<(Var, Frac)>,
    reductions: Vec<(Var, u32, Polynomial)>,
}

fn prepare(cert: &NullconeCertificate, br: &Branch, has_base: bool) -> Result<Prepared> {
    let n = cert.n;
    let params: BTreeSet<Var> = cert
        .params
        .iter()
        .map(|p| symbol_var(p, n).ok_or_else(|| malformed(format!("bad parameter `{p}`"))))
        .collect::<Result<_>>()?;
    let nonzero: BTreeSet<Var> = br
        .nonzero
        .iter()
        .map(|p| symbol_var(p, n).ok_or_else(|| malformed(format!("bad nonzero symbol `{p}`"))))
        .collect::<Result<_>>()?;
    let raw = HashMap::new();
    let env = Env { n, base: None, symbols: &raw, definitions: &[] };
    let mut subs: Vec<(Var, Frac)> = Vec::new();
    for (sym, rhs) in &br.substitutions {
        let v = symbol_var(sym, n).ok_or_else(|| malformed(format!("bad symbol `{sym}`")))?;
        if !params.contains(&v) {
            return Err(malformed(format!("`{sym}` is not a parameter")));
        }
        if subs.iter().any(|(w, _)| *w == v) {
            return Err(malformed(format!("`{sym}` is substituted twice")));
        }
        if has_base && v.k as usize == br.base_slot {
            return Err(malformed(format!("`{sym}` belongs to the base matrix")));
        }
        if nonzero.contains(&v) {
            return Err(malformed(format!("`{sym}` is assumed nonzero and cannot be substituted")));
        }
        let f = env.scalar(rhs)?;
        let mentions = |p: &Polynomial, w: Var| p.degree_in(w) > 0;
        if subs.iter().map(|(w, _)| *w).chain([v]).any(|w| mentions(&f.num, w) || mentions(&f.den, w)) {
            return Err(malformed(format!("substitution for `{sym}` mentions an eliminated symbol")));
        }
        if !f.den.is_one() {
            let ok = f.den.len() == 1 && f.den.terms()[0].0.iter().all(|(w, _)| nonzero.contains(&w));
            if !ok {
                return Err(malformed(format!("denominator of `{sym}` is not a monomial in nonzero symbols")));
            }
        }
        subs.push((v, f));
    }
    let mut reductions = Vec::new();
    for (lhs, rhs) in &br.reductions {
        let (v, e) = parse_power(lhs, n)?;
        if subs.iter().any(|(w, _)| *w == v) {
            return Err(malformed(format!("reduction on substituted symbol `{lhs}`")));
        }
        let f = env.scalar(rhs)?;
        if !f.den.is_one() || f.num.degree_in(v) >= e {
            return Err(malformed(format!("reduction `{lhs}` has an unusable right side")));
        }
        reductions.push((v, e, f.num));
    }
    Ok(Prepared { subs, reductions })
}

fn apply_subs(p: &Polynomial, subs: &[(Var, Frac)]) -> Polynomial {
    subs.iter().fold(p.clone(), |acc, (v, f)| acc.substitute(*v, &f.num, &f.den))
}

fn apply_reductions(p: Polynomial, reds: &[(Var, u32, Polynomial)]) -> Polynomial {
    // Repeat until stable: a rule's right side may reintroduce another rule's symbol.
    let mut cur = p;
    for _ in 0..16 {
        let next = reds.iter().fold(cur.clone(), |acc, (v, e, r)| acc.reduce_power(*v, *e, r));
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

fn abbreviate(p: &Polynomial) -> String {
    let s = p.to_string();
    if s.chars().count() > 160 {
        let head: String = s.chars().take(157).collect();
        format!("{head}...")
    } else {
        s
    }
}

struct BranchOutcome {
    claims: usize,
    failure: Option<ClaimFailure>,
}

fn check_branch(cert: &NullconeCertificate, base: Option<&Matrix<Polynomial>>, br: &Branch) -> Result<BranchOutcome> {
    let n = cert.n;
    let prep = prepare(cert, br, base.is_some())?;
    // Without denominators, substitute into the matrix entries up front.
    let early = prep.subs.iter().all(|(_, f)| f.den.is_one());
    let mut symbols = HashMap::new();
    if early {
        for p in &cert.params {
            let v = symbol_var(p, n).expect("validated");
            let val = apply_subs(&Polynomial::var(v), &prep.subs);
            if val != Polynomial::var(v) {
                symbols.insert(v, val);
            }
        }
    }
    let env = Env { n, base: base.map(|m| (br.base_slot, m)), symbols: &symbols, definitions: &cert.definitions };
    let finish = |p: &Polynomial| -> Polynomial {
        let p = if early { p.clone() } else { apply_subs(p, &prep.subs) };
        apply_reductions(p, &prep.reductions)
    };
    let mut count = 0;
    for claim in &br.claims {
        count += 1;
        let residual: Vec<Polynomial> = match claim {
            Claim::MatrixZero(e) => match env.eval(e)? {
                Value::Matrix(m) => m.rows().into_iter().flatten().collect(),
                Value::Scalar(_) => return Err(malformed(format!("`{e}` is not a matrix"))),
            },
            Claim::PolyZero(e) => vec![scalar_numerator(&env.scalar(e)?, br, n)?],
            Claim::MatrixEquals { lhs, rhs } => match (env.eval(lhs)?, env.eval(rhs)?) {
                (Value::Matrix(a), Value::Matrix(b)) if a.n() == b.n() => {
                    a.sub(&b).rows().into_iter().flatten().collect()
                }
                (Value::Scalar(a), Value::Scalar(b)) => {
                    let d = Frac { num: a.num.mul(&b.den).sub(&b.num.mul(&a.den)), den: a.den.mul(&b.den) };
                    vec![scalar_numerator(&d, br, n)?]
                }
                _ => return Err(malformed(format!("sides of `{}` differ in kind", claim.label()))),
            },
        };
        if let Some(r) = residual.iter().map(&finish).find(|r| !r.is_zero()) {
            return Ok(BranchOutcome {
                claims: count,
                failure: Some(ClaimFailure { branch: br.label.clone(), claim: claim.label(), residual: abbreviate(&r) }),
            });
        }
    }
    Ok(BranchOutcome { claims: count, failure: None })
}

/// A scalar claim vanishes iff its numerator does, provided the
/// denominator is a monomial in symbols assumed nonzero.
fn scalar_numerator(f: &Frac, br: &Branch, n: usize) -> Result<Polynomial> {
    if !f.den.is_one() {
        let nz: Vec<String> = f.den.variables().into_iter().map(|v| symbol_name(v, n)).collect();
        if f.den.len() != 1 || nz.iter().any(|s| !br.nonzero.contains(s)) {
            return Err(malformed("claim divides by something not assumed nonzero"));
        }
    }
    Ok(f.num.clone())
}

/// Replay every branch. `Ok` with `passed = false` names the first failing
/// claim; `Err` means the certificate itself is malformed.
pub fn check_certificate(cert: &NullconeCertificate) -> Result<CertificateCheck> {
    if cert.branches.is_empty() {
        return Err(malformed("no branches"));
    }
    let base = cert.base_matrix()?;
    if base.is_none() && cert.branches.iter().any(|b| b.base_slot != 1) {
        return Err(malformed("base slot given without a base matrix"));
    }
    let outcomes: Vec<Result<BranchOutcome>> =
        cert.branches.par_iter().map(|b| check_branch(cert, base.as_ref(), b)).collect();
    let mut claims = 0;
    let mut failure = None;
    for o in outcomes {
        let o = o?;
        claims += o.claims;
        if failure.is_none() {
            failure = o.failure;
        }
    }
    Ok(CertificateCheck {
        name: cert.name.clone(),
        passed: failure.is_none(),
        branches: cert.branches.len(),
        claims_checked: claims,
        failure,
    })
}
