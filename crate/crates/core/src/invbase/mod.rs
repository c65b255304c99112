//! Graded components of the invariant algebra, decomposability certificates
//! and minimal homogeneous generating sets.
//!
//! Decomposability is searched for with evaluations at random points modulo
//! `2^61 − 1`; every positive answer is turned into an explicit combination
//! of products of lower-degree `σ_t(w)` and replayed exactly. Negative
//! answers are confirmed by exact elimination on coefficient vectors.

mod engine;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::corealg::{
    Backend, CoeffMatrix, Echelon, Exact, GaussianRational, Insert, ModField, MultiDegree, Polynomial, LARGE_PRIME,
};
use crate::error::{Error, Result};
use crate::genmat::{Invariant, SigmaFactor};

use engine::{multidegrees_up_to, strictly_below, EvalEngine, ExactEngine, Structure};

pub use engine::multidegrees_up_to as all_multidegrees;

/// Default bound on total degree.
pub const DEFAULT_BOUND: u32 = 8;

/// Settings shared by the structure computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Options {
    pub bound: u32,
    pub backend: Backend,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { bound: DEFAULT_BOUND, backend: Backend::Exact, seed: 0 }
    }
}

impl Options {
    pub fn with_bound(bound: u32) -> Self {
        Options { bound, ..Self::default() }
    }

    fn check(&self, mdeg: &MultiDegree) -> Result<()> {
        if mdeg.total() > self.bound {
            return Err(Error::DegreeBoundExceeded { degree: mdeg.total() as usize, bound: self.bound as usize });
        }
        Ok(())
    }
}

/// Spanning set of one multidegree component.
#[derive(Clone, Debug)]
pub struct GradedComponent {
    pub n: usize,
    pub d: usize,
    pub mdeg: MultiDegree,
    /// Coefficient vectors of a basis of the component.
    pub basis: CoeffMatrix,
    /// Product of invariants that produced each basis row.
    pub sources: Vec<String>,
    /// Dimension of the span of products of lower-degree invariants.
    pub decomposable_dim: usize,
}

impl GradedComponent {
    pub fn dimension(&self) -> usize {
        self.basis.nrows()
    }
}

/// One product in a decomposition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateTerm {
    pub coeff: GaussianRational,
    pub factors: Vec<SigmaFactor>,
    pub labels: Vec<String>,
}

/// `target = Σ coeff · Π factors` with every factor of lower degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionCertificate {
    pub target: String,
    pub n: usize,
    pub mdeg: MultiDegree,
    pub terms: Vec<CertificateTerm>,
    /// How the combination was found.
    pub route: String,
}

impl DecompositionCertificate {
    /// Expand the stated combination.
    pub fn expand(&self) -> Result<Polynomial> {
        let mut memo: HashMap<SigmaFactor, Polynomial> = HashMap::new();
        let mut parts = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let mut acc = Polynomial::constant(term.coeff.clone());
            for f in &term.factors {
                if !memo.contains_key(f) {
                    memo.insert(f.clone(), f.value(self.n)?);
                }
                acc = acc.mul(&memo[f]);
            }
            parts.push(acc);
        }
        Ok(Polynomial::sum(parts))
    }

    /// Does the combination reproduce `target` exactly, with every factor of
    /// strictly lower total degree?
    pub fn replay(&self, target: &Polynomial) -> Result<bool> {
        let d = self.mdeg.d();
        let lower = self
            .terms
            .iter()
            .all(|t| t.factors.len() >= 2 && t.factors.iter().all(|f| f.mdeg(d).total() < self.mdeg.total()));
        Ok(lower && self.expand()? == *target)
    }

    pub fn replay_invariant(&self, target: &Invariant) -> Result<bool> {
        self.replay(&target.value)
    }
}

impl fmt::Display for DecompositionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "{} = 0", self.target);
        }
        let parts: Vec<String> = self.terms.iter().map(|t| format!("({})·{}", t.coeff, t.labels.join("·"))).collect();
        write!(f, "{} = {}", self.target, parts.join(" + "))
    }
}

/// Per-multidegree line of a [`GeneratorReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub mdeg: MultiDegree,
    pub dimension: usize,
    pub decomposable_dimension: usize,
    pub new_generators: usize,
    pub representatives: Vec<String>,
}

/// A minimal generator chosen by the report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorInfo {
    pub label: String,
    pub mdeg: MultiDegree,
    pub factor: SigmaFactor,
}

/// Minimal generators up to a total-degree bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorReport {
    pub n: usize,
    pub d: usize,
    pub bound: u32,
    pub backend: Backend,
    pub components: Vec<ComponentSummary>,
    pub generators: Vec<GeneratorInfo>,
}

impl GeneratorReport {
    pub fn total_generators(&self) -> usize {
        self.generators.len()
    }

    /// Number of new generators in each multidegree that has any.
    pub fn profile(&self) -> BTreeMap<MultiDegree, usize> {
        self.components.iter().filter(|c| c.new_generators > 0).map(|c| (c.mdeg.clone(), c.new_generators)).collect()
    }

    pub fn new_in_total_degree(&self, total: u32) -> usize {
        self.components.iter().filter(|c| c.mdeg.total() == total).map(|c| c.new_generators).sum()
    }

    /// Table `mdeg,dimension,new_generators` for regression comparison.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["mdeg", "dimension", "decomposable_dimension", "new_generators", "representatives"])
            .expect("in-memory write");
        for c in &self.components {
            w.write_record([
                c.mdeg.to_string(),
                c.dimension.to_string(),
                c.decomposable_dimension.to_string(),
                c.new_generators.to_string(),
                c.representatives.join("; "),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

fn product_label(gens: &[engine::GenEntry<Polynomial>], n: usize, p: &[usize]) -> String {
    p.iter().map(|&g| gens[g].factor.label(n)).collect::<Vec<_>>().join("·")
}

/// Basis of the invariants of multidegree `mdeg`: products of minimal
/// generators of lower degree, followed by the new generators.
pub fn invariant_span(n: usize, d: usize, mdeg: &MultiDegree, opts: &Options) -> Result<GradedComponent> {
    let mdeg = mdeg.with_len(d);
    opts.check(&mdeg)?;
    let eng = ExactEngine { n, backend: opts.backend };
    let mut st = Structure::new(&eng, n);
    let mut degs = strictly_below(&mdeg);
    degs.push(mdeg.clone());
    st.ensure(&degs)?;
    let comp = &st.comps[&mdeg];
    Ok(GradedComponent {
        n,
        d,
        mdeg: mdeg.clone(),
        basis: CoeffMatrix::from_polys(&comp.values),
        sources: comp.products.iter().map(|p| product_label(&st.gens, n, p)).collect(),
        decomposable_dim: comp.decomposable_dim,
    })
}

/// Minimal homogeneous generators in every multidegree of total degree
/// `≤ bound`. Representatives are the first independent candidates in
/// `(t, word)` order.
pub fn minimal_generators(n: usize, d: usize, opts: &Options) -> Result<GeneratorReport> {
    let eng = ExactEngine { n, backend: opts.backend };
    let mut st = Structure::new(&eng, n);
    let degs = multidegrees_up_to(d, opts.bound);
    st.ensure(&degs)?;
    let mut components = Vec::new();
    for m in &degs {
        let c = &st.comps[m];
        components.push(ComponentSummary {
            mdeg: m.clone(),
            dimension: c.dim(),
            decomposable_dimension: c.decomposable_dim,
            new_generators: c.new_gens.len(),
            representatives: c.new_gens.iter().map(|&g| st.gens[g].factor.label(n)).collect(),
        });
    }
    let generators = st
        .gens
        .iter()
        .map(|g| GeneratorInfo { label: g.factor.label(n), mdeg: g.mdeg.clone(), factor: g.factor.clone() })
        .collect();
    Ok(GeneratorReport { n, d, bound: opts.bound, backend: opts.backend, components, generators })
}

/// Outcome of [`verify_generation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationCheck {
    pub generates: bool,
    /// First multidegree (by total degree, then lexicographically) where
    /// the candidates fall short.
    pub failing: Option<MultiDegree>,
    pub bound: u32,
    pub components_checked: usize,
}

/// Do products of `candidates` span every component up to the bound?
pub fn verify_generation(candidates: &[Invariant], n: usize, d: usize, opts: &Options) -> Result<GenerationCheck> {
    let eng = ExactEngine { n, backend: opts.backend };
    let mut st = Structure::new(&eng, n);
    let degs = multidegrees_up_to(d, opts.bound);
    st.ensure(&degs)?;
    let cands: Vec<(MultiDegree, &Polynomial)> = candidates.iter().map(|c| (c.mdeg.with_len(d), &c.value)).collect();
    // Monomials in the candidates, grouped by multidegree; factor indices
    // are non-decreasing so each multiset appears once.
    let mut monos: BTreeMap<MultiDegree, Vec<(usize, Polynomial)>> = BTreeMap::new();
    monos.insert(MultiDegree::zero(d), vec![(0, Polynomial::one())]);
    let mut checked = 0;
    for m in &degs {
        let mut here = Vec::new();
        for (ci, (cm, cv)) in cands.iter().enumerate() {
            if cm.is_zero() {
                continue;
            }
            let Some(rest) = m.checked_sub(cm) else { continue };
            if let Some(prev) = monos.get(&rest) {
                for (last, p) in prev {
                    if rest.is_zero() || *last <= ci {
                        here.push((ci, p.mul(cv)));
                    }
                }
            }
        }
        let dim = st.comps[m].dim();
        if dim > 0 {
            checked += 1;
            let polys: Vec<Polynomial> = here.iter().map(|(_, p)| p.clone()).collect();
            let rank = crate::corealg::rank_and_basis(&CoeffMatrix::from_polys(&polys), opts.backend)?.rank;
            if rank < dim {
                return Ok(GenerationCheck { generates: false, failing: Some(m.clone()), bound: opts.bound, components_checked: checked });
            }
        }
        monos.insert(m.clone(), here);
    }
    Ok(GenerationCheck { generates: true, failing: None, bound: opts.bound, components_checked: checked })
}

/// Rank over `ℚ(i)` of invariants sharing one multidegree.
pub fn linear_rank(invs: &[Invariant], backend: Backend) -> Result<usize> {
    let Some(first) = invs.first() else { return Ok(0) };
    let d = invs.iter().map(|i| i.mdeg.d()).max().unwrap_or(0);
    let m0 = first.mdeg.with_len(d);
    for inv in invs {
        let m = inv.mdeg.with_len(d);
        if m != m0 {
            return Err(Error::MixedMultidegree(m0, m));
        }
    }
    let polys: Vec<&Polynomial> = invs.iter().map(|i| &i.value).collect();
    Ok(crate::corealg::rank_and_basis(&CoeffMatrix::from_polys(polys), backend)?.rank)
}

/// Reusable decomposability checker for fixed `(n, d)`; caches the graded
/// structure across queries.
pub struct Decomposer {
    n: usize,
    d: usize,
    opts: Options,
    eval_points: usize,
}

/// Number of evaluation points tried first; doubled on saturation.
const INITIAL_POINTS: usize = 64;
const MAX_POINTS: usize = 8192;

impl Decomposer {
    pub fn new(n: usize, d: usize, opts: Options) -> Self {
        Decomposer { n, d, opts, eval_points: INITIAL_POINTS }
    }

    /// A certificate iff `target` is a combination of products of
    /// invariants of strictly lower degree.
    pub fn decompose(&mut self, target: &Invariant) -> Result<Option<DecompositionCertificate>> {
        let mdeg = target.mdeg.with_len(self.d);
        self.opts.check(&mdeg)?;
        if !target.value.is_zero() {
            let got = target.value.mdeg(self.d)?;
            if got != mdeg {
                return Err(Error::MixedMultidegree(mdeg, got));
            }
        }
        let base = DecompositionCertificate {
            target: target.label.clone(),
            n: self.n,
            mdeg: mdeg.clone(),
            terms: Vec::new(),
            route: String::new(),
        };
        if target.value.is_zero() {
            return Ok(Some(DecompositionCertificate { route: "zero polynomial".into(), ..base }));
        }
        if let Some(cert) = self.search_modular(target, &mdeg, &base)? {
            return Ok(Some(cert));
        }
        self.solve_exact(target, &mdeg, &base)
    }

    fn search_modular(
        &mut self,
        target: &Invariant,
        mdeg: &MultiDegree,
        base: &DecompositionCertificate,
    ) -> Result<Option<DecompositionCertificate>> {
        let field = ModField::new(LARGE_PRIME).expect("prime");
        let degs = strictly_below(mdeg);
        loop {
            let eng = EvalEngine::new(field, self.n, self.d, self.eval_points, self.opts.seed);
            let mut st = Structure::new(&eng, self.n);
            if !st.ensure(&degs)? {
                if self.eval_points >= MAX_POINTS {
                    return Ok(None);
                }
                self.eval_points *= 2;
                continue;
            }
            let prods = st.products_at(mdeg);
            let Some(tv) = eng.poly(&target.value) else { return Ok(None) };
            let mut ech = Echelon::new(field, true);
            for (_, v) in &prods {
                ech.insert(&eng.row(v));
            }
            if ech.rank() + 8 >= eng.k() && self.eval_points < MAX_POINTS {
                self.eval_points *= 2;
                continue;
            }
            let Some(combo) = ech.express(&eng.row(&tv)) else { return Ok(None) };
            let mut terms = Vec::with_capacity(combo.len());
            for (idx, c) in combo {
                let Some(coeff) = field.reconstruct(&c) else { return Ok(None) };
                terms.push(self.term(coeff, prods[idx].0.iter().map(|&g| st.gens[g].factor.clone()).collect()));
            }
            let cert = DecompositionCertificate { terms, route: "modular search, exact replay".into(), ..base.clone() };
            return Ok(cert.replay(&target.value)?.then_some(cert));
        }
    }

    fn solve_exact(
        &self,
        target: &Invariant,
        mdeg: &MultiDegree,
        base: &DecompositionCertificate,
    ) -> Result<Option<DecompositionCertificate>> {
        let eng = ExactEngine { n: self.n, backend: self.opts.backend };
        let mut st = Structure::new(&eng, self.n);
        st.ensure(&strictly_below(mdeg))?;
        let prods = st.products_at(mdeg);
        let mut cm = CoeffMatrix::new();
        for (_, p) in &prods {
            cm.push(p);
        }
        let target_row = cm.row_of(&target.value);
        let mut ech = Echelon::new(Exact, true);
        for r in &cm.rows {
            let _: Insert<_> = ech.insert(r);
        }
        let Some(combo) = ech.express(&target_row) else { return Ok(None) };
        let terms = combo
            .into_iter()
            .map(|(idx, c)| self.term(c, prods[idx].0.iter().map(|&g| st.gens[g].factor.clone()).collect()))
            .collect();
        let cert = DecompositionCertificate { terms, route: "exact elimination".into(), ..base.clone() };
        if !cert.replay(&target.value)? {
            return Err(Error::MalformedCertificate(format!("exact combination for {} failed replay", target.label)));
        }
        Ok(Some(cert))
    }

    fn term(&self, coeff: GaussianRational, mut factors: Vec<SigmaFactor>) -> CertificateTerm {
        factors.sort();
        let labels = factors.iter().map(|f| f.label(self.n)).collect();
        CertificateTerm { coeff, factors, labels }
    }
}

/// One-off decomposability check; see [`Decomposer`].
pub fn is_decomposable(target: &Invariant, n: usize, d: usize, opts: &Options) -> Result<Option<DecompositionCertificate>> {
    Decomposer::new(n, d, *opts).decompose(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Word;

    fn w(l: &[u8]) -> Word {
        Word::from_slice(l)
    }

    fn md(v: &[u32]) -> MultiDegree {
        MultiDegree(v.to_vec())
    }

    #[test]
    fn small_components() {
        let o = Options::default();
        let c = invariant_span(3, 2, &md(&[1, 1]), &o).unwrap();
        assert_eq!(c.dimension(), 1);
        assert_eq!(c.sources, vec!["tr(Y1 Y2)"]);
        assert_eq!(invariant_span(3, 1, &md(&[1]), &o).unwrap().dimension(), 0);
        // At n = 2 the only monomial of bidegree (2,2) is x_12(1)²x_12(2)², so
        // σ2(Y1)·σ2(Y2) and tr(Y1 Y2)² are proportional.
        let c = invariant_span(2, 2, &md(&[2, 2]), &o).unwrap();
        assert_eq!(c.dimension(), 1);
        assert_eq!(c.decomposable_dim, 1);
        assert_eq!(c.basis.ncols(), 1);
        assert!(matches!(
            invariant_span(3, 2, &md(&[5, 4]), &o),
            Err(Error::DegreeBoundExceeded { degree: 9, bound: 8 })
        ));
    }

    #[test]
    fn four_letter_trace_identity() {
        let o = Options::default();
        let t = Invariant::trace(w(&[1, 2, 3, 4]), 3, 4).unwrap();
        let cert = is_decomposable(&t, 3, 4, &o).unwrap().expect("decomposable");
        assert!(cert.replay(&t.value).unwrap());
        let mut got: Vec<(String, String)> =
            cert.terms.iter().map(|t| (t.coeff.to_string(), t.labels.join("·"))).collect();
        got.sort();
        assert_eq!(
            got,
            vec![
                ("1/4".to_string(), "tr(Y1 Y2)·tr(Y3 Y4)".to_string()),
                ("1/4".to_string(), "tr(Y1 Y4)·tr(Y2 Y3)".to_string())
            ]
        );
    }

    #[test]
    fn indecomposable_examples() {
        let o = Options::default();
        let s2 = Invariant::sigma(2, w(&[1]), 3, 1).unwrap();
        assert!(is_decomposable(&s2, 3, 1, &o).unwrap().is_none());
        let t123 = Invariant::trace(w(&[1, 2, 3]), 3, 3).unwrap();
        assert!(is_decomposable(&t123, 3, 3, &o).unwrap().is_none());
    }

    #[test]
    fn exact_route_matches_modular_route() {
        let t = Invariant::trace(w(&[1, 2, 1, 2]), 3, 2).unwrap();
        let dec = Decomposer::new(3, 2, Options::default());
        let base = DecompositionCertificate {
            target: t.label.clone(),
            n: 3,
            mdeg: t.mdeg.clone(),
            terms: vec![],
            route: String::new(),
        };
        let exact = dec.solve_exact(&t, &t.mdeg, &base).unwrap().unwrap();
        assert!(exact.replay(&t.value).unwrap());
        let modular = is_decomposable(&t, 3, 2, &Options::default()).unwrap().unwrap();
        assert_eq!(exact.expand().unwrap(), modular.expand().unwrap());
    }

    #[test]
    fn generator_reports() {
        let r = minimal_generators(2, 2, &Options::with_bound(6)).unwrap();
        let labels: Vec<&str> = r.generators.iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, vec!["det(Y1)", "tr(Y1 Y2)", "det(Y2)"]);
        let r = minimal_generators(3, 1, &Options::with_bound(6)).unwrap();
        assert_eq!(r.total_generators(), 1);
        assert_eq!(r.generators[0].label, "σ2(Y1)");
        let csv = r.to_csv();
        assert!(csv.starts_with("mdeg,dimension,decomposable_dimension,new_generators,representatives\n"));
        assert!(csv.contains("(2),1,0,1,σ2(Y1)"));
    }

    #[test]
    fn generation_checks() {
        let s1 = Invariant::sigma(2, w(&[1]), 3, 2).unwrap();
        let chk = verify_generation(&[s1], 3, 2, &Options::with_bound(2)).unwrap();
        assert!(!chk.generates);
        assert_eq!(chk.failing, Some(md(&[0, 2])));
    }

    #[test]
    fn ranks() {
        let a = Invariant::trace(w(&[1, 2, 3]), 3, 3).unwrap();
        let b = Invariant::trace(w(&[1, 3, 2]), 3, 3).unwrap();
        assert_eq!(linear_rank(&[a.clone(), b], Backend::Exact).unwrap(), 1);
        assert_eq!(linear_rank(&[a.clone(), a.clone()], Backend::Exact).unwrap(), 1);
        let c = Invariant::sigma(2, w(&[1]), 3, 3).unwrap();
        assert!(matches!(linear_rank(&[a, c], Backend::Exact), Err(Error::MixedMultidegree(..))));
    }
}
