//! Canonical blocks of skew-symmetric matrices under orthogonal similarity
//! over `ℚ(i)`, and the nilpotent representatives for `n = 3, 4, 5`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::corealg::GaussianRational;
use crate::error::{Error, Result};
use crate::genmat::Matrix;

/// One diagonal block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockSpec {
    /// `K^(2p)_μ`, size `2p`.
    KEven { p: usize, mu: GaussianRational },
    /// `K^(2p+1)`, size `2p + 1`.
    KOdd { p: usize },
    /// `0^(p)`.
    Zero { p: usize },
}

impl BlockSpec {
    pub fn size(&self) -> usize {
        match self {
            BlockSpec::KEven { p, .. } => 2 * p,
            BlockSpec::KOdd { p } => 2 * p + 1,
            BlockSpec::Zero { p } => *p,
        }
    }

    fn p(&self) -> usize {
        match self {
            BlockSpec::KEven { p, .. } | BlockSpec::KOdd { p } | BlockSpec::Zero { p } => *p,
        }
    }
}

impl fmt::Display for BlockSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockSpec::KEven { p, mu } if mu.is_zero() => write!(f, "K{}:mu=0", 2 * p),
            BlockSpec::KEven { p, mu } => write!(f, "K{}:mu={}", 2 * p, mu),
            BlockSpec::KOdd { p } => write!(f, "K{}", 2 * p + 1),
            BlockSpec::Zero { p } => write!(f, "0:{p}"),
        }
    }
}

impl FromStr for BlockSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("block spec {s:?}"));
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("0:") {
            let p = rest.parse().map_err(|_| bad())?;
            return Ok(BlockSpec::Zero { p });
        }
        let rest = s.strip_prefix('K').ok_or_else(bad)?;
        let (size, mu) = match rest.split_once(':') {
            Some((size, param)) => {
                let v = param.strip_prefix("mu=").ok_or_else(bad)?;
                (size, Some(v.parse::<GaussianRational>().map_err(|_| bad())?))
            }
            None => (rest, None),
        };
        let size: usize = size.parse().map_err(|_| bad())?;
        if size < 2 {
            return Err(bad());
        }
        if size.is_multiple_of(2) {
            Ok(BlockSpec::KEven { p: size / 2, mu: mu.unwrap_or_else(GaussianRational::zero) })
        } else if mu.is_some() {
            Err(bad())
        } else {
            Ok(BlockSpec::KOdd { p: size / 2 })
        }
    }
}

impl Serialize for BlockSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BlockSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Parse a `;`-separated direct sum such as `"K3;0:1"`.
pub fn parse_blocks(s: &str) -> Result<Vec<BlockSpec>> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

/// Block-diagonal skew matrix with its block list.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalMatrix {
    pub blocks: Vec<BlockSpec>,
    pub matrix: Matrix<GaussianRational>,
}

impl CanonicalMatrix {
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn label(&self) -> String {
        self.blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(";")
    }
}

impl FromStr for CanonicalMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        direct_sum(&parse_blocks(s)?)
    }
}

fn gi(a: i64, b: i64) -> GaussianRational {
    GaussianRational::gauss(a, b)
}

/// `A^(p)`: `+1` on the superdiagonal, `−1` on the subdiagonal.
pub fn block_a(p: usize) -> Matrix<GaussianRational> {
    let mut m = Matrix::zero(p);
    for r in 0..p.saturating_sub(1) {
        m.set(r, r + 1, gi(1, 0));
        m.set(r + 1, r, gi(-1, 0));
    }
    m
}

/// `B^(p)`: ones on the two anti-diagonals `r + c = p` and `r + c = p + 2`
/// (1-based), i.e. just above and below the main anti-diagonal.
pub fn block_b(p: usize) -> Matrix<GaussianRational> {
    let mut m = Matrix::zero(p);
    for r in 1..=p {
        for c in 1..=p {
            if r + c == p || r + c == p + 2 {
                m.set(r - 1, c - 1, gi(1, 0));
            }
        }
    }
    m
}

/// `C^(p)`: the main anti-diagonal.
pub fn block_c(p: usize) -> Matrix<GaussianRational> {
    let mut m = Matrix::zero(p);
    for r in 0..p {
        m.set(r, p - 1 - r, gi(1, 0));
    }
    m
}

fn place(dst: &mut Matrix<GaussianRational>, src: &Matrix<GaussianRational>, r0: usize, c0: usize) {
    for r in 0..src.n() {
        for c in 0..src.n() {
            dst.set(r0 + r, c0 + c, src.get(r, c).clone());
        }
    }
}

/// Exact matrix of one canonical block.
pub fn build_block(spec: &BlockSpec) -> Result<Matrix<GaussianRational>> {
    let p = spec.p();
    if p == 0 {
        return Err(Error::BadSize(format!("block {spec} has p = 0")));
    }
    let half = GaussianRational::ratio(1, 2);
    let m = match spec {
        BlockSpec::Zero { p } => Matrix::zero(*p),
        BlockSpec::KEven { p, mu } => {
            let p = *p;
            let a = block_a(p);
            let off = block_b(p).scale(&GaussianRational::i()).add(&block_c(p).scale(&(mu * &gi(2, 0))));
            let mut m = Matrix::zero(2 * p);
            place(&mut m, &a, 0, 0);
            place(&mut m, &off, 0, p);
            place(&mut m, &off.neg(), p, 0);
            place(&mut m, &a.neg(), p, p);
            m.scale(&half)
        }
        BlockSpec::KOdd { p } => {
            let p = *p;
            let a = block_a(p);
            let ib = block_b(p).scale(&GaussianRational::i());
            let mut m = Matrix::zero(2 * p + 1);
            place(&mut m, &a, 0, 0);
            place(&mut m, &ib, 0, p + 1);
            place(&mut m, &ib.neg(), p + 1, 0);
            place(&mut m, &a.neg(), p + 1, p + 1);
            // V_λ has λ in its last slot, U_λ in its first.
            m.set(p - 1, p, gi(1, 1));
            m.set(p, p - 1, gi(-1, -1));
            m.set(p, p + 1, gi(-1, 1));
            m.set(p + 1, p, gi(1, -1));
            m.scale(&half)
        }
    };
    Ok(m)
}

/// Block-diagonal assembly.
pub fn direct_sum(blocks: &[BlockSpec]) -> Result<CanonicalMatrix> {
    if blocks.is_empty() {
        return Err(Error::BadSize("empty block list".into()));
    }
    let built = blocks.iter().map(build_block).collect::<Result<Vec<_>>>()?;
    let n = built.iter().map(Matrix::n).sum();
    let mut m = Matrix::zero(n);
    let mut off = 0;
    for b in &built {
        place(&mut m, b, off, off);
        off += b.n();
    }
    Ok(CanonicalMatrix { blocks: blocks.to_vec(), matrix: m })
}

/// Representatives of the nonzero nilpotent orbits of skew matrices for
/// `n = 3, 4, 5`.
pub fn nilpotent_representatives(n: usize) -> Result<Vec<CanonicalMatrix>> {
    let specs: &[&str] = match n {
        3 => &["K3"],
        4 => &["K3;0:1", "K4:mu=0"],
        5 => &["K3;0:2", "K4:mu=0;0:1", "K5"],
        _ => return Err(Error::UnsupportedSize(n)),
    };
    specs.iter().map(|s| s.parse()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genmat::skew_from_upper;

    fn half_skew(v: &[(i64, i64)]) -> Matrix<GaussianRational> {
        skew_from_upper(v.iter().map(|&(a, b)| gi(a, b)).collect())
            .unwrap()
            .scale(&GaussianRational::ratio(1, 2))
    }

    #[test]
    fn literals() {
        let k3 = half_skew(&[(1, 1), (0, 0), (-1, 1)]);
        assert_eq!(build_block(&"K3".parse().unwrap()).unwrap(), k3);
        let q2 = half_skew(&[(1, 0), (0, 1), (0, 0), (0, 0), (0, 1), (-1, 0)]);
        assert_eq!(build_block(&"K4:mu=0".parse().unwrap()).unwrap(), q2);
        let q3 = half_skew(&[(1, 0), (0, 0), (0, 1), (0, 0), (1, 1), (0, 0), (0, 1), (-1, 1), (0, 0), (-1, 0)]);
        assert_eq!(build_block(&"K5".parse().unwrap()).unwrap(), q3);
        let q1 = half_skew(&[(1, 1), (0, 0), (0, 0), (-1, 1), (0, 0), (0, 0)]);
        assert_eq!("K3;0:1".parse::<CanonicalMatrix>().unwrap().matrix, q1);
        let q1_5 = half_skew(&[(1, 1), (0, 0), (0, 0), (0, 0), (-1, 1), (0, 0), (0, 0), (0, 0), (0, 0), (0, 0)]);
        assert_eq!("K3;0:2".parse::<CanonicalMatrix>().unwrap().matrix, q1_5);
        assert!("0:3".parse::<CanonicalMatrix>().unwrap().matrix.is_zero());
    }

    #[test]
    fn blocks_are_skew_and_nilpotent() {
        for p in 1..=4 {
            for spec in [BlockSpec::KOdd { p }, BlockSpec::KEven { p, mu: GaussianRational::zero() }] {
                let m = build_block(&spec).unwrap();
                assert!(m.is_skew(), "{spec}");
                assert_eq!(m.n(), spec.size());
                for (t, s) in m.char_coefficients().iter().enumerate().skip(1) {
                    assert!(s.is_zero(), "σ{t} of {spec} is {s}");
                }
            }
        }
    }

    #[test]
    fn nonzero_counts() {
        for p in 1..=7 {
            let count = |m: Matrix<GaussianRational>| m.rows().iter().flatten().filter(|x| !x.is_zero()).count();
            assert_eq!(count(block_a(p)), 2 * (p - 1));
            assert_eq!(count(block_b(p)), 2 * (p - 1));
        }
        assert_eq!(block_b(2), Matrix::identity(2));
    }

    #[test]
    fn nonzero_mu_is_not_nilpotent() {
        let m = build_block(&BlockSpec::KEven { p: 2, mu: gi(1, 0) }).unwrap();
        assert!(m.is_skew());
        assert!(m.char_coefficients().iter().skip(1).any(|s| !s.is_zero()));
    }

    #[test]
    fn representatives() {
        assert!(matches!(nilpotent_representatives(6), Err(Error::UnsupportedSize(6))));
        for n in 3..=5 {
            let reps = nilpotent_representatives(n).unwrap();
            assert_eq!(reps.len(), n - 2);
            for r in reps {
                assert_eq!(r.n(), n);
                for t in 1..=n {
                    assert!(r.matrix.sigma(t).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn grammar() {
        for s in ["K3", "K4:mu=0", "K5", "0:2", "K6:mu=1/2"] {
            let b: BlockSpec = s.parse().unwrap();
            assert_eq!(b.to_string().parse::<BlockSpec>().unwrap(), b);
        }
        assert_eq!("K4".parse::<BlockSpec>().unwrap(), BlockSpec::KEven { p: 2, mu: GaussianRational::zero() });
        assert_eq!(parse_blocks("K3;0:1").unwrap().len(), 2);
        for bad in ["K1", "K3:mu=1", "X4", "0:x", "K4:nu=0"] {
            assert!(bad.parse::<BlockSpec>().is_err(), "{bad}");
        }
        assert!(matches!(build_block(&BlockSpec::Zero { p: 0 }), Err(Error::BadSize(_))));
        assert!(direct_sum(&[]).is_err());
    }
}
