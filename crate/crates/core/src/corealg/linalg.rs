//! Sparse row-echelon elimination over `ℚ(i)` or `ℤ[i]/(p)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::modular::{ModElem, ModField};
use super::poly::{Monomial, Polynomial};
use super::scalar::GaussianRational;
use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u64 = 1_000_003;

/// Field operations used by [`Echelon`].
pub trait FieldOps: Sync {
    type E: Clone + Send + Sync + std::fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
}

/// `ℚ(i)` with exact arithmetic.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exact;

impl FieldOps for Exact {
    type E = GaussianRational;
    fn zero(&self) -> GaussianRational {
        GaussianRational::zero()
    }
    fn one(&self) -> GaussianRational {
        GaussianRational::one()
    }
    fn is_zero(&self, a: &GaussianRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a + b
    }
    fn sub(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a - b
    }
    fn mul(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a * b
    }
    fn inv(&self, a: &GaussianRational) -> GaussianRational {
        a.inv()
    }
}

impl FieldOps for ModField {
    type E = ModElem;
    fn zero(&self) -> ModElem {
        ModField::zero(self)
    }
    fn one(&self) -> ModElem {
        ModField::one(self)
    }
    fn is_zero(&self, a: &ModElem) -> bool {
        ModField::is_zero(self, a)
    }
    fn add(&self, a: &ModElem, b: &ModElem) -> ModElem {
        ModField::add(self, a, b)
    }
    fn sub(&self, a: &ModElem, b: &ModElem) -> ModElem {
        ModField::sub(self, a, b)
    }
    fn mul(&self, a: &ModElem, b: &ModElem) -> ModElem {
        ModField::mul(self, a, b)
    }
    fn inv(&self, a: &ModElem) -> ModElem {
        ModField::inv(self, a)
    }
}

pub type SparseRow<E> = Vec<(usize, E)>;

struct Pivot<E> {
    col: usize,
    row: SparseRow<E>,
    /// Pivot row as a combination of the inserted rows.
    combo: SparseRow<E>,
}

/// Incremental row-echelon form. Rows are inserted one at a time; each
/// insertion reports whether the row was independent of the previous ones
/// and, if not, how it is expressed through them.
pub struct Echelon<F: FieldOps> {
    field: F,
    pivots: Vec<Pivot<F::E>>,
    pivot_of_col: HashMap<usize, usize>,
    inserted: usize,
    track: bool,
}

/// Outcome of [`Echelon::insert`].
#[derive(Debug, Clone)]
pub enum Insert<E> {
    Independent,
    /// Coefficients over the indices of previously inserted rows.
    Dependent(SparseRow<E>),
}

impl<F: FieldOps> Echelon<F> {
    pub fn new(field: F, track: bool) -> Self {
        Echelon { field, pivots: Vec::new(), pivot_of_col: HashMap::new(), inserted: 0, track }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Reduce `row` against the current pivots. Returns the residual and the
    /// expression of `row − residual` through inserted rows.
    fn reduce(&self, row: &SparseRow<F::E>) -> (SparseRow<F::E>, HashMap<usize, F::E>) {
        let f = &self.field;
        let width = row.iter().map(|(c, _)| *c + 1).max().unwrap_or(0);
        let width = self.pivots.iter().flat_map(|p| p.row.last().map(|(c, _)| *c + 1)).fold(width, usize::max);
        let mut work: Vec<Option<F::E>> = vec![None; width];
        for (c, x) in row {
            work[*c] = Some(x.clone());
        }
        let mut expr: HashMap<usize, F::E> = HashMap::new();
        for col in 0..width {
            let Some(factor) = work[col].take() else { continue };
            if f.is_zero(&factor) {
                continue;
            }
            match self.pivot_of_col.get(&col) {
                None => work[col] = Some(factor),
                Some(&pi) => {
                    let piv = &self.pivots[pi];
                    for (c, x) in piv.row.iter().skip(1) {
                        let cur = work[*c].take().unwrap_or_else(|| f.zero());
                        work[*c] = Some(f.sub(&cur, &f.mul(&factor, x)));
                    }
                    if self.track {
                        for (idx, x) in &piv.combo {
                            let e = expr.entry(*idx).or_insert_with(|| f.zero());
                            *e = f.add(e, &f.mul(&factor, x));
                        }
                    }
                }
            }
        }
        let residual = work
            .into_iter()
            .enumerate()
            .filter_map(|(c, x)| x.filter(|x| !f.is_zero(x)).map(|x| (c, x)))
            .collect();
        (residual, expr)
    }

    /// Does `row` lie in the span, and if so through which inserted rows?
    pub fn express(&self, row: &SparseRow<F::E>) -> Option<SparseRow<F::E>> {
        let (residual, expr) = self.reduce(row);
        residual.is_empty().then(|| finish(&self.field, expr))
    }

    pub fn insert(&mut self, row: &SparseRow<F::E>) -> Insert<F::E> {
        let idx = self.inserted;
        self.inserted += 1;
        let (residual, expr) = self.reduce(row);
        if residual.is_empty() {
            return Insert::Dependent(finish(&self.field, expr));
        }
        let f = &self.field;
        let lead_inv = f.inv(&residual[0].1);
        let col = residual[0].0;
        let row: SparseRow<F::E> = residual.into_iter().map(|(c, x)| (c, f.mul(&x, &lead_inv))).collect();
        let combo = if self.track {
            let mut combo: Vec<(usize, F::E)> =
                expr.into_iter().map(|(i, x)| (i, f.sub(&f.zero(), &f.mul(&x, &lead_inv)))).collect();
            combo.push((idx, lead_inv));
            combo.retain(|(_, x)| !f.is_zero(x));
            combo.sort_by_key(|(i, _)| *i);
            combo
        } else {
            Vec::new()
        };
        self.pivot_of_col.insert(col, self.pivots.len());
        self.pivots.push(Pivot { col, row, combo });
        Insert::Independent
    }

    /// Leading columns of the pivots, in insertion order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.iter().map(|p| p.col).collect()
    }
}

fn finish<F: FieldOps>(f: &F, expr: HashMap<usize, F::E>) -> SparseRow<F::E> {
    let mut v: SparseRow<F::E> = expr.into_iter().filter(|(_, x)| !f.is_zero(x)).collect();
    v.sort_by_key(|(i, _)| *i);
    v
}

/// Rows of coefficient vectors over one shared, ordered monomial basis.
#[derive(Clone, Debug, Default)]
pub struct CoeffMatrix {
    pub basis: Vec<Monomial>,
    pub rows: Vec<SparseRow<GaussianRational>>,
    index: HashMap<Monomial, usize>,
}

impl CoeffMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_polys<'a>(polys: impl IntoIterator<Item = &'a Polynomial>) -> Self {
        let mut m = Self::new();
        for p in polys {
            m.push(p);
        }
        m
    }

    pub fn column(&mut self, mono: &Monomial) -> usize {
        if let Some(&c) = self.index.get(mono) {
            return c;
        }
        let c = self.basis.len();
        self.basis.push(mono.clone());
        self.index.insert(mono.clone(), c);
        c
    }

    /// Coefficient vector of `p`, extending the basis as needed.
    pub fn row_of(&mut self, p: &Polynomial) -> SparseRow<GaussianRational> {
        let mut row: SparseRow<GaussianRational> =
            p.terms().iter().map(|(m, c)| (self.column(m), c.clone())).collect();
        row.sort_by_key(|(c, _)| *c);
        row
    }

    pub fn push(&mut self, p: &Polynomial) -> usize {
        let row = self.row_of(p);
        self.rows.push(row);
        self.rows.len() - 1
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.basis.len()
    }
}

/// Linear-algebra backend for rank computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
#[derive(Default)]
pub enum Backend {
    #[default]
    Exact,
    Modular { prime: u64 },
}


/// Result of [`rank_and_basis`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankResult {
    pub rank: usize,
    /// Indices of a maximal independent subset of rows, chosen greedily in
    /// row order.
    pub pivot_rows: Vec<usize>,
}

pub fn reduce_row_mod(f: &ModField, row: &SparseRow<GaussianRational>) -> Result<SparseRow<ModElem>> {
    row.iter()
        .map(|(c, x)| f.reduce(x).map(|y| (*c, y)).ok_or(Error::BadPrime(f.p)))
        .filter(|r| !matches!(r, Ok((_, (0, 0)))))
        .collect()
}

/// Rank of `m` and a greedy basis of its rows.
///
/// The exact backend returns the rank over `ℚ(i)`. The modular backend
/// returns the rank of the reduction mod `p`, which never exceeds the true
/// rank and agrees with it unless `p` divides one of finitely many minors.
pub fn rank_and_basis(m: &CoeffMatrix, backend: Backend) -> Result<RankResult> {
    fn run<F: FieldOps>(ech: &mut Echelon<F>, rows: impl Iterator<Item = Result<SparseRow<F::E>>>) -> Result<RankResult> {
        let mut pivot_rows = Vec::new();
        for (i, r) in rows.enumerate() {
            if let Insert::Independent = ech.insert(&r?) {
                pivot_rows.push(i);
            }
        }
        Ok(RankResult { rank: pivot_rows.len(), pivot_rows })
    }
    match backend {
        Backend::Exact => run(&mut Echelon::new(Exact, false), m.rows.iter().map(|r| Ok(r.clone()))),
        Backend::Modular { prime } => {
            let f = ModField::new(prime).ok_or(Error::BadPrime(prime))?;
            run(&mut Echelon::new(f, false), m.rows.iter().map(|r| reduce_row_mod(&f, r)))
        }
    }
}

/// Rank of a dense matrix over `ℚ(i)`.
pub fn dense_rank(rows: &[Vec<GaussianRational>]) -> usize {
    let mut ech = Echelon::new(Exact, false);
    for r in rows {
        let sparse: SparseRow<GaussianRational> =
            r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (c, x.clone())).collect();
        ech.insert(&sparse);
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corealg::Var;
    use proptest::prelude::*;

    fn x() -> Polynomial {
        Polynomial::var(Var::new(1, 2, 1))
    }
    fn y() -> Polynomial {
        Polynomial::var(Var::new(1, 3, 1))
    }

    #[test]
    fn monomials_are_independent() {
        let m = CoeffMatrix::from_polys(&[x().mul(&x()), x().mul(&y())]);
        assert_eq!(rank_and_basis(&m, Backend::Exact).unwrap().rank, 2);
    }

    #[test]
    fn multiple_is_dependent() {
        let f = x().add(&y().scale(&GaussianRational::gauss(0, 3)));
        let m = CoeffMatrix::from_polys(&[f.clone(), f.scale(&2.into())]);
        let r = rank_and_basis(&m, Backend::Exact).unwrap();
        assert_eq!(r, RankResult { rank: 1, pivot_rows: vec![0] });
        let r = rank_and_basis(&m, Backend::Modular { prime: DEFAULT_PRIME }).unwrap();
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn bad_prime() {
        let m = CoeffMatrix::from_polys(&[x().scale(&GaussianRational::ratio(1, 7))]);
        assert_eq!(rank_and_basis(&m, Backend::Modular { prime: 7 }), Err(Error::BadPrime(7)));
        assert_eq!(rank_and_basis(&m, Backend::Modular { prime: 5 }), Err(Error::BadPrime(5)));
        assert_eq!(rank_and_basis(&m, Backend::Modular { prime: 1_000_001 }), Err(Error::BadPrime(1_000_001)));
    }

    #[test]
    fn expression_is_tracked() {
        let mut ech = Echelon::new(Exact, true);
        let rows: Vec<SparseRow<GaussianRational>> = vec![
            vec![(0, 1.into()), (1, 2.into())],
            vec![(1, 1.into()), (2, 1.into())],
        ];
        for r in &rows {
            assert!(matches!(ech.insert(r), Insert::Independent));
        }
        // 3*r0 - 2*r1 = (3, 4, -2)
        let target = vec![(0, 3.into()), (1, 4.into()), (2, (-2).into())];
        let combo = ech.express(&target).unwrap();
        assert_eq!(combo, vec![(0, 3.into()), (1, (-2).into())]);
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-3i64..4, 5), 1..6)
    }

    fn to_cm(rows: &[Vec<i64>]) -> CoeffMatrix {
        let mut m = CoeffMatrix::new();
        for c in 0..5 {
            m.column(&Monomial::var(Var::new(1, 2 + c, 1)));
        }
        for r in rows {
            m.rows.push(r.iter().enumerate().filter(|(_, x)| **x != 0).map(|(c, x)| (c, (*x).into())).collect());
        }
        m
    }

    proptest! {
        #[test]
        fn rank_invariant_under_scaling_and_permutation(rows in arb_matrix(), s in 1i64..5, rot in 0usize..6) {
            let r0 = rank_and_basis(&to_cm(&rows), Backend::Exact).unwrap().rank;
            let mut perm: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x * s).collect()).collect();
            let k = rot % perm.len();
            perm.rotate_left(k);
            let r1 = rank_and_basis(&to_cm(&perm), Backend::Exact).unwrap().rank;
            prop_assert_eq!(r0, r1);
            let rm = rank_and_basis(&to_cm(&rows), Backend::Modular { prime: 11 }).unwrap().rank;
            prop_assert!(rm <= r0);
        }
    }
}
