//! Words `Y_{i1}⋯Y_{is}` in the generic matrices, up to rotation and reversal.
//!
//! Rotating a word does not change the trace (or any `σ_t`) of the product.
//! Reversing a word of length `s` transposes the product up to the sign
//! `(−1)^s`, so `σ_t` picks up `(−1)^{t·s}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Nonempty sequence of letters in `1..=d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if letters.is_empty() || letters.contains(&0) {
            return Err(Error::BadWord(format!("{letters:?}")));
        }
        Ok(Word(letters))
    }

    /// Panicking constructor for literals in code and tests.
    pub fn from_slice(letters: &[u8]) -> Self {
        Self::new(letters.to_vec()).expect("valid word")
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest letter used.
    pub fn max_letter(&self) -> usize {
        *self.0.iter().max().expect("nonempty") as usize
    }

    /// Letter counts `(c_1, …, c_d)`.
    pub fn content(&self, d: usize) -> Vec<u32> {
        let mut c = vec![0u32; d.max(self.max_letter())];
        for &l in &self.0 {
            c[l as usize - 1] += 1;
        }
        c
    }

    pub fn rotated(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        v.rotate_left(k % self.len());
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// `w^m`.
    pub fn power(&self, m: usize) -> Word {
        Word(self.0.repeat(m))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Display label of the product, e.g. `Y1^2 Y2`.
    pub fn product_label(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut e = 1;
            while i + e < self.0.len() && self.0[i + e] == l {
                e += 1;
            }
            parts.push(if e == 1 { format!("Y{l}") } else { format!("Y{l}^{e}") });
            i += e;
        }
        parts.join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .split(',')
            .map(|t| t.trim().parse::<u8>().map_err(|_| Error::BadWord(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// True iff `w` is not `u^m` for a shorter word `u`.
pub fn is_primitive(w: &Word) -> bool {
    let s = w.len();
    (1..s).filter(|p| s.is_multiple_of(*p)).all(|p| (p..s).any(|i| w.0[i] != w.0[i - p]))
}

/// True iff the reversal of `w` is a rotation of `w`. For odd length this
/// forces every odd power trace of the product to vanish.
pub fn is_reversal_symmetric(w: &Word) -> bool {
    let rev = w.reversed();
    (0..w.len()).any(|k| w.rotated(k) == rev)
}

/// Canonical representative together with the signs relating invariants of
/// `w` to invariants of the representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalRep {
    pub rep: Word,
    /// Only a reversal (not a rotation) maps `w` onto `rep`.
    pub via_reversal: bool,
    pub len: usize,
}

impl CanonicalRep {
    /// `σ_t(w) = sigma_sign(t) · σ_t(rep)`.
    pub fn sigma_sign(&self, t: usize) -> i64 {
        if self.via_reversal && (t * self.len) % 2 == 1 {
            -1
        } else {
            1
        }
    }

    /// `tr(w) = trace_sign · tr(rep)`.
    pub fn trace_sign(&self) -> i64 {
        self.sigma_sign(1)
    }
}

/// Lexicographically least word among rotations of `w` and of its reversal.
pub fn canonical_rep(w: &Word) -> CanonicalRep {
    let s = w.len();
    let best_rot = (0..s).map(|k| w.rotated(k)).min().expect("nonempty");
    let rev = w.reversed();
    let best_rev = (0..s).map(|k| rev.rotated(k)).min().expect("nonempty");
    if best_rev < best_rot {
        CanonicalRep { rep: best_rev, via_reversal: true, len: s }
    } else {
        CanonicalRep { rep: best_rot, via_reversal: false, len: s }
    }
}

/// One orbit of words under rotation and reversal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordClass {
    pub representative: Word,
    pub members: Vec<Word>,
    /// Parity of the length; reversal multiplies traces by `(−1)^s`.
    pub reversal_parity: usize,
}

/// All words over `1..=d` of length exactly `s`, in lexicographic order.
pub fn all_words(d: usize, s: usize) -> impl Iterator<Item = Word> {
    let total = (d as u64).pow(s as u32);
    (0..total).map(move |mut code| {
        let mut v = vec![0u8; s];
        for slot in v.iter_mut().rev() {
            *slot = (code % d as u64) as u8 + 1;
            code /= d as u64;
        }
        Word(v)
    })
}

/// One class per orbit for every word of length `≤ max_len`, ordered by
/// length and then by representative.
pub fn enumerate_words(d: usize, max_len: usize, primitive_only: bool) -> Vec<WordClass> {
    let mut out = Vec::new();
    for s in 1..=max_len {
        let mut classes: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
        for w in all_words(d, s) {
            let c = canonical_rep(&w);
            classes.entry(c.rep).or_default().push(w);
        }
        for (rep, members) in classes {
            if primitive_only && !is_primitive(&rep) {
                continue;
            }
            out.push(WordClass { representative: rep, members, reversal_parity: s % 2 });
        }
    }
    out
}

/// Canonical representatives of primitive classes with the given letter
/// counts, sorted.
pub fn primitive_classes_with_content(content: &[u32]) -> Vec<Word> {
    let s: u32 = content.iter().sum();
    if s == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut counts = content.to_vec();
    let mut cur = Vec::with_capacity(s as usize);
    fn rec(counts: &mut [u32], cur: &mut Vec<u8>, out: &mut Vec<Word>, s: usize) {
        if cur.len() == s {
            let w = Word(cur.clone());
            if canonical_rep(&w).rep == w && is_primitive(&w) {
                out.push(w);
            }
            return;
        }
        for l in 0..counts.len() {
            if counts[l] > 0 {
                // A representative starts with its smallest letter.
                if !cur.is_empty() && (l as u8 + 1) < cur[0] {
                    continue;
                }
                counts[l] -= 1;
                cur.push(l as u8 + 1);
                rec(counts, cur, out, s);
                cur.pop();
                counts[l] += 1;
            }
        }
    }
    rec(&mut counts, &mut cur, &mut out, s as usize);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(l: &[u8]) -> Word {
        Word::from_slice(l)
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&w(&[1, 2])));
        assert!(!is_primitive(&w(&[1, 2, 1, 2])));
        assert!(is_primitive(&w(&[1, 1, 2])));
        assert!(!is_primitive(&w(&[1, 1])));
        assert!(is_primitive(&w(&[1])));
    }

    #[test]
    fn representative_signs() {
        let c = canonical_rep(&w(&[1, 3, 2]));
        assert_eq!(c.rep, w(&[1, 2, 3]));
        assert_eq!(c.trace_sign(), -1);
        let c = canonical_rep(&w(&[2, 1]));
        assert_eq!(c.rep, w(&[1, 2]));
        assert_eq!(c.trace_sign(), 1);
        let c = canonical_rep(&w(&[1, 1, 2]));
        assert_eq!(c.sigma_sign(2), 1);
    }

    #[test]
    fn enumeration_examples() {
        let reps = |v: Vec<WordClass>| v.into_iter().map(|c| c.representative).collect::<Vec<_>>();
        assert_eq!(reps(enumerate_words(1, 3, true)), vec![w(&[1])]);
        assert_eq!(reps(enumerate_words(2, 2, true)), vec![w(&[1]), w(&[2]), w(&[1, 2])]);
        let classes = enumerate_words(3, 3, false);
        let c = classes.iter().find(|c| c.representative == w(&[1, 2, 3])).unwrap();
        assert!(c.members.contains(&w(&[1, 3, 2])));
    }

    #[test]
    fn orbit_partition() {
        for d in 1..=3 {
            let classes = enumerate_words(d, 5, false);
            let mut seen = std::collections::HashSet::new();
            for c in &classes {
                for m in &c.members {
                    assert!(seen.insert(m.clone()), "{m:?} in two classes");
                }
            }
            let total: usize = (1..=5).map(|s| d.pow(s as u32)).sum();
            assert_eq!(seen.len(), total);
        }
    }

    #[test]
    fn content_enumeration_matches_full_enumeration() {
        let all = enumerate_words(3, 5, true);
        for content in [vec![2, 2, 0], vec![1, 1, 1], vec![3, 1, 1], vec![2, 1, 2]] {
            let mut expect: Vec<Word> =
                all.iter().map(|c| c.representative.clone()).filter(|r| r.content(3) == content).collect();
            expect.sort();
            assert_eq!(primitive_classes_with_content(&content), expect, "{content:?}");
        }
    }

    #[test]
    fn reversal_symmetry() {
        assert!(is_reversal_symmetric(&w(&[1, 1, 2])));
        assert!(is_reversal_symmetric(&w(&[1, 2, 1, 2, 2])));
        assert!(!is_reversal_symmetric(&w(&[1, 2, 3])));
    }

    #[test]
    fn parse_and_label() {
        let x: Word = "1,1,2".parse().unwrap();
        assert_eq!(x, w(&[1, 1, 2]));
        assert_eq!(x.to_string(), "1,1,2");
        assert_eq!(x.product_label(), "Y1^2 Y2");
        assert!("1,0".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
    }
}
