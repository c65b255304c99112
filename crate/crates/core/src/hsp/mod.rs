//! Homogeneous systems of parameters for `n = 3, 4, 5`: the candidate
//! families, algebraic independence through the Jacobian criterion, and the
//! nullcone certificates that replay the case analyses.

mod catalog;
mod certificate;
mod expr;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use catalog::builtin_certificates;
pub use certificate::{check_certificate, Branch, CertificateCheck, Claim, ClaimFailure, NullconeCertificate};

use crate::canonical::nilpotent_representatives;
use crate::corealg::{linalg::dense_rank, GaussianRational, MultiDegree, Polynomial, Var};
use crate::error::{Error, Result};
use crate::genmat::{sigma_word, skew_from_upper, trace_word, Assignment};
use crate::words::Word;

pub const DEFAULT_RETRIES: usize = 5;
/// Coordinates of sampled points lie in `[−POINT_RANGE, POINT_RANGE]`.
pub const POINT_RANGE: i64 = 9;

/// The supported `(n, d)` pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HspCase {
    /// `n = 3`, any `d ≥ 2`.
    A(usize),
    /// `n = 4`, `d = 2`.
    B,
    /// `n = 4`, `d = 3`.
    C,
    /// `n = 5`, `d = 2`.
    D,
}

impl HspCase {
    pub fn new(letter: &str, d: Option<usize>) -> Result<Self> {
        let case = match letter.trim().to_ascii_uppercase().as_str() {
            "A" => {
                let d = d.ok_or_else(|| Error::UnsupportedCase("case A needs d".into()))?;
                if d == 0 {
                    return Err(Error::UnsupportedCase("case A needs d ≥ 1".into()));
                }
                if d == 1 {
                    return Err(Error::UnsupportedCase(
                        "case A with d = 1: the algebra is generated by σ2(Y1) alone, which is its own \
                         system of parameters; the count n(n−1)(d−1)/2 = 0 does not apply (see the \
                         single-matrix generation check)"
                            .into(),
                    ));
                }
                HspCase::A(d)
            }
            "B" => HspCase::B,
            "C" => HspCase::C,
            "D" => HspCase::D,
            other => return Err(Error::UnsupportedCase(format!("unknown case `{other}`"))),
        };
        if let Some(d) = d {
            if d != case.d() {
                return Err(Error::UnsupportedCase(format!("case {letter} requires d = {}", case.d())));
            }
        }
        Ok(case)
    }

    pub fn n(&self) -> usize {
        match self {
            HspCase::A(_) => 3,
            HspCase::B | HspCase::C => 4,
            HspCase::D => 5,
        }
    }

    pub fn d(&self) -> usize {
        match self {
            HspCase::A(d) => *d,
            HspCase::B | HspCase::D => 2,
            HspCase::C => 3,
        }
    }

    /// `n(n−1)(d−1)/2`.
    pub fn expected_count(&self) -> usize {
        let (n, d) = (self.n(), self.d());
        n * (n - 1) * (d - 1) / 2
    }

    /// Certificates whose case analysis backs this family.
    pub fn certificate_names(&self) -> &'static [&'static str] {
        match self {
            HspCase::A(_) => &["N3_TRABC", "N3_INDUCTION"],
            HspCase::B => &["N4_Q1", "N4_Q2"],
            HspCase::C => &["N4_Q1", "N4_Q2", "N4_ABC_Q1", "N4_ABC_Q2"],
            HspCase::D => &["N5_Q1", "N5_Q3", "N5_Q2"],
        }
    }
}

impl fmt::Display for HspCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HspCase::A(d) => write!(f, "A(d={d})"),
            HspCase::B => write!(f, "B"),
            HspCase::C => write!(f, "C"),
            HspCase::D => write!(f, "D"),
        }
    }
}

impl FromStr for HspCase {
    type Err = Error;
    /// `A3`, `A:3`, `B`, `C`, `D`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, tail) = s.split_at(s.len().min(1));
        let d = tail.trim_start_matches(':').trim();
        let d = if d.is_empty() {
            None
        } else {
            Some(d.parse().map_err(|_| Error::Parse(format!("bad case `{s}`")))?)
        };
        HspCase::new(head, d)
    }
}

impl Serialize for HspCase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One member of a family. `mdeg` is `None` for the sums `h_r`, which are
/// homogeneous only in total degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HspElement {
    pub label: String,
    pub degree: u32,
    pub mdeg: Option<MultiDegree>,
    #[serde(skip)]
    pub value: Polynomial,
}

impl HspElement {
    fn sigma(t: usize, w: &[u8], case: HspCase) -> Result<Self> {
        let (n, d) = (case.n(), case.d());
        let word = Word::from_slice(w);
        let value = sigma_word(t, &word, n)?;
        let mdeg = value.mdeg(d)?;
        Ok(HspElement {
            label: crate::genmat::Invariant::label_for(t, &word, n),
            degree: mdeg.total(),
            mdeg: Some(mdeg),
            value,
        })
    }

    fn trace(w: &[u8], case: HspCase) -> Result<Self> {
        Self::sigma(1, w, case)
    }
}

fn rep(l: u8, e: usize) -> Vec<u8> {
    vec![l; e]
}

/// The family's elements in a fixed order.
pub fn hsp_elements(case: HspCase) -> Result<Vec<HspElement>> {
    let mut out = Vec::new();
    match case {
        HspCase::A(d) => {
            for i in 1..=d as u8 {
                out.push(HspElement::sigma(2, &[i], case)?);
            }
            for r in 3..=2 * d - 1 {
                let pairs: Vec<(usize, usize)> =
                    (1..=d).flat_map(|i| (i + 1..=d).map(move |j| (i, j))).filter(|(i, j)| i + j == r).collect();
                let value = Polynomial::sum(pairs.iter().map(|&(i, j)| trace_word(&Word::from_slice(&[i as u8, j as u8]), 3)));
                let terms: Vec<String> = pairs.iter().map(|(i, j)| format!("tr(Y{i} Y{j})")).collect();
                let mdeg = value.mdeg(d).ok();
                out.push(HspElement { label: format!("h{r} = {}", terms.join(" + ")), degree: 2, mdeg, value });
            }
        }
        HspCase::B => {
            out.push(HspElement::sigma(2, &[1], case)?);
            out.push(HspElement::sigma(2, &[2], case)?);
            out.push(HspElement::sigma(4, &[1], case)?);
            out.push(HspElement::sigma(4, &[2], case)?);
            out.push(HspElement::trace(&[1, 2], case)?);
            out.push(HspElement::trace(&[1, 1, 2, 2], case)?);
        }
        HspCase::C => {
            for i in 1..=3 {
                out.push(HspElement::sigma(2, &[i], case)?);
                out.push(HspElement::sigma(4, &[i], case)?);
            }
            for i in 1..=3u8 {
                for j in i + 1..=3 {
                    out.push(HspElement::trace(&[i, j], case)?);
                    out.push(HspElement::trace(&[i, i, j, j], case)?);
                }
            }
        }
        HspCase::D => {
            out.push(HspElement::sigma(2, &[1], case)?);
            out.push(HspElement::sigma(2, &[2], case)?);
            out.push(HspElement::sigma(4, &[1], case)?);
            out.push(HspElement::sigma(4, &[2], case)?);
            for (a, b) in [(1, 1), (2, 2), (3, 1), (1, 3), (4, 2), (2, 4)] {
                let w: Vec<u8> = rep(1, a).into_iter().chain(rep(2, b)).collect();
                out.push(HspElement::trace(&w, case)?);
            }
        }
    }
    Ok(out)
}

/// Coordinates `x_ij(k)` for `k ≤ d`, in the variable order.
fn coordinates(n: usize, d: usize) -> Vec<Var> {
    let mut vs = Vec::new();
    for k in 1..=d {
        for i in 1..=n {
            for j in i + 1..=n {
                vs.push(Var::new(i, j, k));
            }
        }
    }
    vs
}

fn check_point(fs: &[Polynomial], point: &Assignment) -> Result<()> {
    for f in fs {
        for v in f.variables() {
            if v.j as usize > point.n() {
                return Err(Error::SizeMismatch { expected: v.j as usize, got: point.n() });
            }
            if v.k as usize > point.d() {
                return Err(Error::SizeMismatch { expected: v.k as usize, got: point.d() });
            }
        }
    }
    Ok(())
}

struct Jacobian {
    partials: Vec<Vec<Polynomial>>,
}

impl Jacobian {
    fn new(fs: &[Polynomial], n: usize, d: usize) -> Self {
        let vars = coordinates(n, d);
        let partials = fs.iter().map(|f| vars.iter().map(|v| f.derivative(*v)).collect()).collect();
        Jacobian { partials }
    }

    fn rank_at(&self, point: &Assignment) -> usize {
        let rows: Vec<Vec<GaussianRational>> = self
            .partials
            .iter()
            .map(|row| row.iter().map(|p| p.eval(&|v| point.coordinate(v))).collect())
            .collect();
        dense_rank(&rows)
    }
}

/// Rank of the matrix of partial derivatives `∂f_a/∂x_ij(k)` at `point`.
pub fn jacobian_rank(fs: &[Polynomial], point: &Assignment) -> Result<usize> {
    check_point(fs, point)?;
    Ok(Jacobian::new(fs, point.n(), point.d()).rank_at(point))
}

/// Integer point with coordinates uniform in `[−POINT_RANGE, POINT_RANGE]`.
pub fn random_point(n: usize, d: usize, rng: &mut impl Rng) -> Assignment {
    let m = n * (n - 1) / 2;
    let mats = (0..d)
        .map(|_| {
            let vals = (0..m).map(|_| GaussianRational::from_integer(rng.gen_range(-POINT_RANGE..=POINT_RANGE))).collect();
            skew_from_upper(vals).expect("right length")
        })
        .collect();
    Assignment::new(mats).expect("consistent sizes")
}

/// Outcome of the sampled Jacobian test. Full rank certifies algebraic
/// independence; failure to reach it never certifies dependence.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Independence {
    Certified { rank: usize, point: Assignment, attempts: usize },
    Inconclusive { best_rank: usize, needed: usize, attempts: usize },
}

impl Independence {
    pub fn is_certified(&self) -> bool {
        matches!(self, Independence::Certified { .. })
    }

    pub fn rank(&self) -> usize {
        match self {
            Independence::Certified { rank, .. } => *rank,
            Independence::Inconclusive { best_rank, .. } => *best_rank,
        }
    }
}

/// Try up to `max_retries` seeded random points (at least one).
pub fn verify_independence(fs: &[Polynomial], n: usize, d: usize, seed: u64, max_retries: usize) -> Independence {
    let jac = Jacobian::new(fs, n, d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    let attempts = max_retries.max(1);
    for a in 1..=attempts {
        let point = random_point(n, d, &mut rng);
        let rank = jac.rank_at(&point);
        if rank == fs.len() {
            return Independence::Certified { rank, point, attempts: a };
        }
        best = best.max(rank);
    }
    Independence::Inconclusive { best_rank: best, needed: fs.len(), attempts }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountCheck {
    pub expected: usize,
    pub actual: usize,
    pub passed: bool,
}

/// `σ_t` of every nilpotent canonical representative of size `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaVanishing {
    pub representatives: Vec<String>,
    pub passed: bool,
}

pub fn sigma_vanishing(n: usize) -> Result<SigmaVanishing> {
    let reps = nilpotent_representatives(n)?;
    let mut passed = true;
    for r in &reps {
        for t in 1..=n {
            passed &= r.matrix.sigma(t)?.is_zero();
        }
    }
    Ok(SigmaVanishing { representatives: reps.iter().map(|r| r.label()).collect(), passed })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub case: HspCase,
    pub n: usize,
    pub d: usize,
    pub elements: Vec<String>,
    pub count: CountCheck,
    pub independence: Independence,
    pub nullcone: Vec<CertificateCheck>,
    pub canonical_sigma: SigmaVanishing,
    pub notes: Vec<String>,
    pub passed: bool,
}

/// Count, independence, nullcone certificates and the canonical σ check.
pub fn verify_hsp(case: HspCase, seed: u64, retries: usize) -> Result<VerificationReport> {
    let (n, d) = (case.n(), case.d());
    let elements = hsp_elements(case)?;
    let count = CountCheck {
        expected: case.expected_count(),
        actual: elements.len(),
        passed: elements.len() == case.expected_count(),
    };
    let values: Vec<Polynomial> = elements.iter().map(|e| e.value.clone()).collect();
    let independence = verify_independence(&values, n, d, seed, retries);
    let wanted = case.certificate_names();
    let nullcone = builtin_certificates()
        .iter()
        .filter(|c| wanted.contains(&c.name.as_str()))
        .map(check_certificate)
        .collect::<Result<Vec<_>>>()?;
    let canonical_sigma = sigma_vanishing(n)?;
    let mut notes = Vec::new();
    if let HspCase::A(_) = case {
        notes.push(format!(
            "h_r is taken for 3 ≤ r ≤ 2d−1 = {}; larger r give empty sums (zero polynomials)",
            2 * d - 1
        ));
        notes.push("the induction certificate uses c_i = +i·a_i, which is what tr(A_k A_i) = 0 forces".into());
    }
    let passed = count.passed
        && independence.is_certified()
        && nullcone.len() == wanted.len()
        && nullcone.iter().all(|c| c.passed)
        && canonical_sigma.passed;
    Ok(VerificationReport {
        case,
        n,
        d,
        elements: elements.iter().map(|e| e.label.clone()).collect(),
        count,
        independence,
        nullcone,
        canonical_sigma,
        notes,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_counts() {
        for (case, k) in [(HspCase::A(2), 3), (HspCase::A(3), 6), (HspCase::A(4), 9), (HspCase::B, 6), (HspCase::C, 12), (HspCase::D, 10)] {
            let e = hsp_elements(case).unwrap();
            assert_eq!(e.len(), k, "{case}");
            assert_eq!(case.expected_count(), k);
            assert!(e.iter().all(|x| !x.value.is_zero()));
        }
        let labels: Vec<String> = hsp_elements(HspCase::A(2)).unwrap().into_iter().map(|e| e.label).collect();
        assert_eq!(labels, vec!["σ2(Y1)", "σ2(Y2)", "h3 = tr(Y1 Y2)"]);
    }

    #[test]
    fn case_parsing() {
        assert_eq!("A3".parse::<HspCase>().unwrap(), HspCase::A(3));
        assert_eq!("C".parse::<HspCase>().unwrap(), HspCase::C);
        assert!(matches!(HspCase::new("A", Some(1)), Err(Error::UnsupportedCase(_))));
        assert!(HspCase::new("B", Some(3)).is_err());
        assert!(HspCase::new("E", None).is_err());
    }

    #[test]
    fn gradient_of_sigma2() {
        let f = sigma_word(2, &Word::from_slice(&[1]), 3).unwrap();
        let p = skew_from_upper(vec![1.into(), 2.into(), 3.into()]).unwrap();
        let a = Assignment::new(vec![p]).unwrap();
        assert_eq!(jacobian_rank(std::slice::from_ref(&f), &a).unwrap(), 1);
        assert_eq!(jacobian_rank(&[f.clone(), f.scale(&2.into())], &a).unwrap(), 1);
        let small = Assignment::zero(2, 1);
        assert!(matches!(jacobian_rank(&[f], &small), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn dependent_pair_is_inconclusive() {
        let f = trace_word(&Word::from_slice(&[1, 2]), 3);
        let r = verify_independence(&[f.clone(), f.mul(&f)], 3, 2, 0, 5);
        assert_eq!(r, Independence::Inconclusive { best_rank: 1, needed: 2, attempts: 5 });
    }

    #[test]
    fn rank_is_invariant_under_recombination() {
        let fs: Vec<Polynomial> = hsp_elements(HspCase::A(2)).unwrap().into_iter().map(|e| e.value).collect();
        let mixed = vec![fs[0].add(&fs[1]), fs[1].sub(&fs[2].scale(&3.into())), fs[2].clone()];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let p = random_point(3, 2, &mut rng);
            assert_eq!(jacobian_rank(&fs, &p).unwrap(), jacobian_rank(&mixed, &p).unwrap());
        }
    }

    #[test]
    fn small_families_verify() {
        for case in [HspCase::A(2), HspCase::B] {
            let r = verify_hsp(case, 0, DEFAULT_RETRIES).unwrap();
            assert!(r.passed, "{r:?}");
            assert_eq!(r.independence.rank(), case.expected_count());
        }
    }

    #[test]
    fn mutated_certificate_names_a_claim() {
        let q1 = builtin_certificates().into_iter().find(|c| c.name == "N4_Q1").unwrap();
        let bad = q1.without_substitution(0, 0).unwrap();
        let r = check_certificate(&bad).unwrap();
        assert!(!r.passed);
        assert!(r.failure.unwrap().claim.ends_with("= 0"));
    }

    #[test]
    fn malformed_certificates_are_rejected() {
        let mut c = builtin_certificates().into_iter().find(|c| c.name == "N5_Q2").unwrap();
        c.branches[0].substitutions.push(("a2".into(), "b2".into()));
        assert!(matches!(check_certificate(&c), Err(Error::MalformedCertificate(_))));
        let mut c = builtin_certificates().into_iter().find(|c| c.name == "N5_Q2").unwrap();
        c.branches[0].substitutions[0].1 = "a2 + 1".into();
        assert!(matches!(check_certificate(&c), Err(Error::MalformedCertificate(_))));
        let mut c = builtin_certificates().into_iter().find(|c| c.name == "N5_Q2").unwrap();
        c.branches[0].claims.push(Claim::MatrixZero("tr(A1)".into()));
        assert!(matches!(check_certificate(&c), Err(Error::MalformedCertificate(_))));
    }
}
