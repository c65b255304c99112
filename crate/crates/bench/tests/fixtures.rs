use skewinv::corealg::{Backend, DEFAULT_PRIME};
use skewinv::invbase::linear_rank;
use skewinv_bench::{product_operands, rank_fixture, words};

#[test]
fn rank_fixture_has_one_relation() {
    let invs = rank_fixture();
    let exact = linear_rank(&invs, Backend::Exact).unwrap();
    let modular = linear_rank(&invs, Backend::Modular { prime: DEFAULT_PRIME }).unwrap();
    assert_eq!(exact, 4);
    assert_eq!(modular, exact);
}

#[test]
fn product_is_commutative() {
    let (a, b) = product_operands(4);
    assert_eq!(a.mul(&b), b.mul(&a));
    assert!(words().iter().all(|w| w.letters().iter().all(|&l| l <= 2)));
}
