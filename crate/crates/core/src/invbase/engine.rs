//! Graded structure of the invariant algebra, computed degree by degree.
//!
//! For each multidegree `α` the component `A_α` is spanned by the products
//! `g·b` (minimal generator `g` of degree `γ < α`, basis element `b` of
//! `A_{α−γ}`) together with the candidate generators `σ_t(w)` landing in `α`.
//! Candidates independent of the products are the new minimal generators.
//! The same procedure runs over two value types: exact polynomials, and
//! evaluations at random points modulo a large prime.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corealg::linalg::SparseRow;
use crate::corealg::modular::{add_mod, inv_mod, mul_mod, sub_mod};
use crate::corealg::{
    rank_and_basis, Backend, CoeffMatrix, Echelon, Insert, ModElem, ModField, MultiDegree, Polynomial,
};
use crate::error::Result;
use crate::genmat::SigmaFactor;
use crate::words::primitive_classes_with_content;

/// Value domain for the structure computation.
pub(crate) trait Engine: Sync {
    type V: Clone + Send + Sync;
    fn sigma(&self, f: &SigmaFactor) -> Result<Self::V>;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    /// Greedy maximal independent subset of `rows`, in order. `None` means
    /// the engine cannot separate this many vectors and must be enlarged.
    fn independent(&self, rows: &[Self::V]) -> Result<Option<Vec<usize>>>;
}

/// Exact polynomials; ranks through the chosen backend.
pub(crate) struct ExactEngine {
    pub n: usize,
    pub backend: Backend,
}

impl Engine for ExactEngine {
    type V = Polynomial;

    fn sigma(&self, f: &SigmaFactor) -> Result<Polynomial> {
        f.value(self.n)
    }

    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        a.mul(b)
    }

    fn independent(&self, rows: &[Polynomial]) -> Result<Option<Vec<usize>>> {
        let m = CoeffMatrix::from_polys(rows);
        Ok(Some(rank_and_basis(&m, self.backend)?.pivot_rows))
    }
}

/// Values at `K` random points of `𝔽_p^{d·n(n−1)/2}`.
pub(crate) struct EvalEngine {
    pub field: ModField,
    n: usize,
    /// `points[k][letter]`: dense `n × n` skew matrix mod `p`.
    points: Vec<Vec<Vec<u64>>>,
}

/// Ranks this close to the number of points trigger a restart with more
/// points.
const SATURATION_MARGIN: usize = 8;

impl EvalEngine {
    pub fn new(field: ModField, n: usize, d: usize, k: usize, seed: u64) -> Self {
        let p = field.p;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..k)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let mut m = vec![0u64; n * n];
                        for i in 0..n {
                            for j in i + 1..n {
                                let x = rng.gen_range(0..p);
                                m[i * n + j] = x;
                                m[j * n + i] = sub_mod(0, x, p);
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        EvalEngine { field, n, points }
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    fn matmul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (n, p) = (self.n, self.field.p);
        let mut out = vec![0u64; n * n];
        for r in 0..n {
            for j in 0..n {
                let x = a[r * n + j];
                if x == 0 {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] = add_mod(out[r * n + c], mul_mod(x, b[j * n + c], p), p);
                }
            }
        }
        out
    }

    /// `σ_t` of a numeric matrix by Faddeev–LeVerrier mod `p`.
    fn sigma_numeric(&self, a: &[u64], t: usize) -> u64 {
        let (n, p) = (self.n, self.field.p);
        let mut m: Vec<u64> = (0..n * n).map(|i| u64::from(i % (n + 1) == 0)).collect();
        let mut c_prev = 1u64;
        let mut c = 1u64;
        for k in 1..=t {
            if k > 1 {
                m = self.matmul(a, &m);
                for i in 0..n {
                    m[i * n + i] = add_mod(m[i * n + i], c_prev, p);
                }
            }
            let am = self.matmul(a, &m);
            let tr = (0..n).fold(0u64, |acc, i| add_mod(acc, am[i * n + i], p));
            c = mul_mod(sub_mod(0, tr, p), inv_mod(k as u64, p), p);
            c_prev = c;
        }
        if t % 2 == 1 {
            sub_mod(0, c, p)
        } else {
            c
        }
    }

    /// Values of a polynomial at the points.
    pub fn poly(&self, poly: &Polynomial) -> Option<Vec<ModElem>> {
        let n = self.n;
        self.points
            .iter()
            .map(|pt| poly.eval_mod(&self.field, &|v| (pt[v.k as usize - 1][(v.i as usize - 1) * n + v.j as usize - 1], 0)))
            .collect()
    }

    pub fn row(&self, v: &[ModElem]) -> SparseRow<ModElem> {
        v.iter().enumerate().filter(|(_, x)| **x != (0, 0)).map(|(i, x)| (i, *x)).collect()
    }
}

impl Engine for EvalEngine {
    type V = Vec<ModElem>;

    fn sigma(&self, f: &SigmaFactor) -> Result<Vec<ModElem>> {
        let letters = f.word.letters();
        Ok(self
            .points
            .iter()
            .map(|pt| {
                let mut m = pt[letters[0] as usize - 1].clone();
                for &l in &letters[1..] {
                    m = self.matmul(&m, &pt[l as usize - 1]);
                }
                (self.sigma_numeric(&m, f.t), 0)
            })
            .collect())
    }

    fn mul(&self, a: &Vec<ModElem>, b: &Vec<ModElem>) -> Vec<ModElem> {
        a.iter().zip(b).map(|(x, y)| self.field.mul(x, y)).collect()
    }

    fn independent(&self, rows: &[Vec<ModElem>]) -> Result<Option<Vec<usize>>> {
        let mut ech = Echelon::new(self.field, false);
        let mut out = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            if let Insert::Independent = ech.insert(&self.row(r)) {
                out.push(i);
            }
        }
        Ok((ech.rank() + SATURATION_MARGIN < self.k()).then_some(out))
    }
}

/// A minimal generator found by the structure computation.
#[derive(Clone, Debug)]
pub(crate) struct GenEntry<V> {
    pub factor: SigmaFactor,
    pub mdeg: MultiDegree,
    pub value: V,
}

/// One graded component.
#[derive(Clone, Debug)]
pub(crate) struct Comp<V> {
    /// Basis of `A_α` as monomials in the minimal generators (sorted
    /// generator indices); new generators appear as singletons.
    pub products: Vec<Vec<usize>>,
    pub values: Vec<V>,
    pub new_gens: Vec<usize>,
    pub decomposable_dim: usize,
}

impl<V> Comp<V> {
    pub fn dim(&self) -> usize {
        self.products.len()
    }
}

/// Candidate generators `σ_t(w)` of multidegree `α`, in `(t, word)` order.
pub(crate) fn candidates(n: usize, alpha: &MultiDegree) -> Vec<SigmaFactor> {
    let mut out = Vec::new();
    for t in 1..=n as u32 {
        if alpha.0.iter().any(|a| a % t != 0) {
            continue;
        }
        let content: Vec<u32> = alpha.0.iter().map(|a| a / t).collect();
        for w in primitive_classes_with_content(&content) {
            out.push(SigmaFactor::new(t as usize, w));
        }
    }
    out
}

/// All nonzero multidegrees `β ≤ top` componentwise, by total degree and
/// then lexicographically.
pub(crate) fn multidegrees_below(top: &MultiDegree) -> Vec<MultiDegree> {
    let mut out = vec![MultiDegree::zero(top.d())];
    for (slot, &cap) in top.0.iter().enumerate() {
        out = out
            .into_iter()
            .flat_map(|b| {
                (0..=cap).map(move |v| {
                    let mut b = b.clone();
                    b.0[slot] = v;
                    b
                })
            })
            .collect();
    }
    out.retain(|b| !b.is_zero());
    out.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
    out
}

/// All nonzero multidegrees with `d` slots and total degree `≤ bound`.
pub fn multidegrees_up_to(d: usize, bound: u32) -> Vec<MultiDegree> {
    let mut out: Vec<MultiDegree> = multidegrees_below(&MultiDegree(vec![bound; d]))
        .into_iter()
        .filter(|b| b.total() <= bound)
        .collect();
    out.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
    out
}

pub(crate) struct Structure<'e, E: Engine> {
    pub engine: &'e E,
    pub n: usize,
    pub gens: Vec<GenEntry<E::V>>,
    pub comps: BTreeMap<MultiDegree, Comp<E::V>>,
}

impl<'e, E: Engine> Structure<'e, E> {
    pub fn new(engine: &'e E, n: usize) -> Self {
        Structure { engine, n, gens: Vec::new(), comps: BTreeMap::new() }
    }

    /// Products `g·b` landing in `α`, deduplicated by factor multiset.
    /// Requires every component strictly below `α`.
    pub fn products_at(&self, alpha: &MultiDegree) -> Vec<(Vec<usize>, E::V)> {
        let mut seen: BTreeMap<Vec<usize>, E::V> = BTreeMap::new();
        for (gi, g) in self.gens.iter().enumerate() {
            let Some(rest) = alpha.checked_sub(&g.mdeg) else { continue };
            if rest.is_zero() {
                continue;
            }
            let comp = &self.comps[&rest];
            for (b, bv) in comp.products.iter().zip(&comp.values) {
                let mut key = b.clone();
                let pos = key.partition_point(|&x| x <= gi);
                key.insert(pos, gi);
                seen.entry(key).or_insert_with(|| {
                    
                    self.engine.mul(&g.value, bv)
                });
            }
        }
        seen.into_iter().collect()
    }

    /// Compute one component from the lower ones. `None` on saturation.
    #[allow(clippy::type_complexity)]
    fn compute(&self, alpha: &MultiDegree) -> Result<Option<(Comp<E::V>, Vec<(SigmaFactor, E::V)>)>> {
        let prods = self.products_at(alpha);
        let cands = candidates(self.n, alpha);
        let cand_vals = cands.iter().map(|f| self.engine.sigma(f)).collect::<Result<Vec<_>>>()?;
        let rows: Vec<E::V> = prods.iter().map(|(_, v)| v.clone()).chain(cand_vals.iter().cloned()).collect();
        let Some(indep) = self.engine.independent(&rows)? else { return Ok(None) };
        let np = prods.len();
        let mut comp = Comp {
            products: Vec::new(),
            values: Vec::new(),
            new_gens: Vec::new(),
            decomposable_dim: 0,
        };
        let mut new = Vec::new();
        for i in indep {
            if i < np {
                comp.products.push(prods[i].0.clone());
                comp.values.push(prods[i].1.clone());
                comp.decomposable_dim += 1;
            } else {
                new.push((cands[i - np].clone(), cand_vals[i - np].clone()));
            }
        }
        Ok(Some((comp, new)))
    }

    /// Compute every listed component not yet known; the list must be closed
    /// under `≤` and sorted by total degree. Returns `false` on saturation.
    pub fn ensure(&mut self, degrees: &[MultiDegree]) -> Result<bool> {
        let todo: Vec<&MultiDegree> = degrees.iter().filter(|b| !self.comps.contains_key(*b)).collect();
        let mut levels: BTreeMap<u32, Vec<&MultiDegree>> = BTreeMap::new();
        for b in todo {
            levels.entry(b.total()).or_default().push(b);
        }
        for (_, level) in levels {
            let this = &*self;
            let results: Vec<Result<Option<_>>> = level.par_iter().map(|b| this.compute(b)).collect();
            let mut done = Vec::with_capacity(level.len());
            for (b, r) in level.iter().zip(results) {
                match r? {
                    None => return Ok(false),
                    Some(x) => done.push(((*b).clone(), x)),
                }
            }
            // Number generators with earlier letters first.
            done.sort_by(|a, b| b.0.cmp(&a.0));
            for (b, (mut comp, new)) in done {
                for (factor, value) in new {
                    let gi = self.gens.len();
                    self.gens.push(GenEntry { factor, mdeg: b.clone(), value: value.clone() });
                    comp.new_gens.push(gi);
                    comp.products.push(vec![gi]);
                    comp.values.push(value);
                }
                self.comps.insert(b, comp);
            }
        }
        Ok(true)
    }
}

/// Degrees needed to form the products landing in `α`.
pub(crate) fn strictly_below(alpha: &MultiDegree) -> Vec<MultiDegree> {
    multidegrees_below(alpha).into_iter().filter(|b| b != alpha).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corealg::LARGE_PRIME;
    use crate::words::Word;

    #[test]
    fn degree_enumeration() {
        let below = multidegrees_below(&MultiDegree(vec![1, 2]));
        let expect: Vec<MultiDegree> =
            [[0, 1], [1, 0], [0, 2], [1, 1], [1, 2]].iter().map(|v| MultiDegree(v.to_vec())).collect();
        assert_eq!(below, expect);
        assert_eq!(multidegrees_up_to(2, 2).len(), 5);
    }

    #[test]
    fn candidate_lists() {
        let c = candidates(3, &MultiDegree(vec![2, 2]));
        let labels: Vec<String> = c.iter().map(|f| f.label(3)).collect();
        assert_eq!(labels, vec!["tr(Y1^2 Y2^2)", "σ2(Y1 Y2)"]);
    }

    #[test]
    fn numeric_sigma_matches_symbolic() {
        let f = ModField::new(LARGE_PRIME).unwrap();
        let e = EvalEngine::new(f, 4, 2, 5, 7);
        for (t, w) in [(1, vec![1, 2]), (2, vec![1, 1, 2]), (4, vec![1, 2]), (3, vec![1, 2, 2])] {
            let fac = SigmaFactor::new(t, Word::from_slice(&w));
            let sym = e.poly(&fac.value(4).unwrap()).unwrap();
            assert_eq!(e.sigma(&fac).unwrap(), sym, "σ{t}{w:?}");
        }
    }

    #[test]
    fn engines_agree_on_small_structure() {
        let exact = ExactEngine { n: 3, backend: Backend::Exact };
        let f = ModField::new(LARGE_PRIME).unwrap();
        let eval = EvalEngine::new(f, 3, 2, 64, 1);
        let degs = multidegrees_up_to(2, 4);
        let mut a = Structure::new(&exact, 3);
        let mut b = Structure::new(&eval, 3);
        assert!(a.ensure(&degs).unwrap());
        assert!(b.ensure(&degs).unwrap());
        for d in &degs {
            assert_eq!(a.comps[d].dim(), b.comps[d].dim(), "{d}");
            assert_eq!(a.comps[d].new_gens.len(), b.comps[d].new_gens.len(), "{d}");
        }
        assert_eq!(a.gens.len(), 3);
    }
}
