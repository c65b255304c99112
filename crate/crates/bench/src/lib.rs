//! Fixed inputs shared by the benchmarks.

use skewinv::genmat::{generic_skew, Invariant};
use skewinv::{Polynomial, Word};

/// Entry (1,2) of `Y1 Y2` squared, a dense product of moderate size.
pub fn product_operands(n: usize) -> (Polynomial, Polynomial) {
    let m = generic_skew(n, 1).mul(&generic_skew(n, 2));
    let a = m.get(0, 1).clone();
    let b = m.get(1, 0).clone();
    (a, b)
}

/// Words of increasing length over two letters.
pub fn words() -> Vec<Word> {
    vec![Word::from_slice(&[1, 2]), Word::from_slice(&[1, 1, 2, 2]), Word::from_slice(&[1, 1, 2, 1, 2, 2])]
}

/// All trace and σ2 invariants of degree (2,2) at `n = 4`.
pub fn rank_fixture() -> Vec<Invariant> {
    let (n, d) = (4, 2);
    let w = Word::from_slice;
    let t12 = Invariant::trace(w(&[1, 2]), n, d).expect("valid word");
    let s1 = Invariant::sigma(2, w(&[1]), n, d).expect("valid word");
    let s2 = Invariant::sigma(2, w(&[2]), n, d).expect("valid word");
    vec![
        Invariant::trace(w(&[1, 1, 2, 2]), n, d).expect("valid word"),
        Invariant::trace(w(&[1, 2, 1, 2]), n, d).expect("valid word"),
        Invariant::sigma(2, w(&[1, 2]), n, d).expect("valid word"),
        Invariant::product(&[&s1, &s2]).expect("same size"),
        Invariant::product(&[&t12, &t12]).expect("same size"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_nontrivial() {
        let (a, b) = product_operands(4);
        assert!(!a.is_zero() && !b.is_zero());
        assert_eq!(words().len(), 3);
        assert_eq!(rank_fixture().len(), 5);
    }
}
