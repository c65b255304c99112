//! The built-in nullcone certificates, one per case of the case analyses
//! for `n = 3, 4, 5`.

use super::certificate::{Branch, Claim, NullconeCertificate};
use super::expr::symbol_name;
use crate::corealg::Var;

fn params(n: usize, slots: &[usize]) -> Vec<String> {
    let mut out = Vec::new();
    for &k in slots {
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(symbol_name(Var::new(i, j, k), n));
            }
        }
    }
    out
}

fn branch(label: impl Into<String>) -> Branch {
    Branch {
        label: label.into(),
        base_slot: 1,
        nonzero: Vec::new(),
        substitutions: Vec::new(),
        reductions: Vec::new(),
        claims: Vec::new(),
    }
}

impl Branch {
    fn slot(mut self, k: usize) -> Self {
        self.base_slot = k;
        self
    }
    fn nonzero(mut self, s: &str) -> Self {
        self.nonzero.push(s.into());
        self
    }
    fn sub(mut self, sym: impl Into<String>, rhs: impl Into<String>) -> Self {
        self.substitutions.push((sym.into(), rhs.into()));
        self
    }
    fn reduce(mut self, lhs: &str, rhs: &str) -> Self {
        self.reductions.push((lhs.into(), rhs.into()));
        self
    }
    fn zero(mut self, e: impl Into<String>) -> Self {
        self.claims.push(Claim::MatrixZero(e.into()));
        self
    }
    fn vanishes(mut self, e: impl Into<String>) -> Self {
        self.claims.push(Claim::PolyZero(e.into()));
        self
    }
    fn equals(mut self, lhs: impl Into<String>, rhs: impl Into<String>) -> Self {
        self.claims.push(Claim::MatrixEquals { lhs: lhs.into(), rhs: rhs.into() });
        self
    }
}

fn cert(name: &str, n: usize, base: &str, slots: &[usize], branches: Vec<Branch>) -> NullconeCertificate {
    NullconeCertificate {
        name: name.into(),
        n,
        base: base.into(),
        params: params(n, slots),
        definitions: Vec::new(),
        branches,
    }
}

/// `tr(A1 A2 A3) = 0` from `σ2(Ai) = 0` and `tr(Ai Aj) = 0`, `n = 3`.
fn n3_trabc() -> NullconeCertificate {
    let hyps = |b: Branch| b.vanishes("tr(A1*A2)").vanishes("tr(A2*A3)");
    cert(
        "N3_TRABC",
        3,
        "generic",
        &[1, 2, 3],
        vec![
            hyps(branch("c2 != 0")
                .nonzero("c2")
                .sub("c1", "-(a1*a2 + b1*b2)/c2")
                .sub("c3", "-(a2*a3 + b2*b3)/c2"))
            .vanishes("c2*tr(A1*A2*A3) - (a3*b1 - a1*b3)*sigma2(A2)"),
            hyps(branch("c2 = 0, b2 != 0")
                .nonzero("b2")
                .sub("c2", "0")
                .sub("b1", "-a1*a2/b2")
                .sub("b3", "-a2*a3/b2"))
            .vanishes("b2*tr(A1*A2*A3) + (a3*c1 - a1*c3)*sigma2(A2)"),
            branch("b2 = c2 = 0").sub("b2", "0").sub("c2", "0").vanishes("sigma2(A2) - a2^2"),
        ],
    )
}

/// Induction step for `n = 3`: with `A_k = Skew(1+i, 0, −1+i)` the
/// hypotheses force `tr(A_i A_l) = 0`. One branch per `(k, i, l)`, `l ≤ 4`.
fn n3_induction() -> NullconeCertificate {
    let mut branches = Vec::new();
    for l in 3..=4usize {
        for k in 1..l {
            for i in k + 1..=l {
                let mut b = branch(format!("k={k}, i={i}, l={l}"))
                    .slot(k)
                    .sub(format!("c{i}"), format!("i*a{i}"))
                    .sub(format!("b{i}"), "0");
                if l != i {
                    b = b.sub(format!("c{l}"), format!("i*a{l}")).sub(format!("b{l}"), "0");
                }
                b = b
                    .vanishes(format!("tr(A{k}*A{i})"))
                    .vanishes(format!("sigma2(A{i})"))
                    .vanishes(format!("tr(A{k}*A{l})"))
                    .equals(format!("tr(A{i}*A{l})"), format!("-2*(a{i}*a{l} + c{i}*c{l})"))
                    .vanishes(format!("tr(A{i}*A{l})"));
                branches.push(b);
            }
        }
    }
    cert("N3_INDUCTION", 3, "skew(1+i, 0, -1+i)", &[1, 2, 3, 4], branches)
}

const N4_Q1: &str = "K3;0:1";
const N4_Q2: &str = "K4:mu=0";

fn q1_subs(b: Branch, k: usize) -> Branch {
    b.sub(format!("a{k}"), format!("-i*d{k}"))
        .sub(format!("c{k}"), format!("i*f{k}"))
        .sub(format!("b{k}"), "0")
        .sub(format!("e{k}"), "0")
}

fn q2_subs(b: Branch, k: usize) -> Branch {
    b.sub(format!("a{k}"), format!("-i*(b{k} + e{k}) + f{k}")).sub(format!("d{k}"), format!("c{k}"))
}

fn pair_hyps(b: Branch) -> Branch {
    b.vanishes("tr(A1*A2)").vanishes("tr(A1^2*A2^2)").vanishes("sigma2(A2)").vanishes("det(A2)")
}

fn n4_q1() -> NullconeCertificate {
    let b = pair_hyps(q1_subs(branch("A1 = Q1"), 2))
        .zero("A1^2*A2")
        .zero("A2^2*A1")
        .zero("A1*A2*A1")
        .zero("A2*A1*A2")
        .vanishes("sigma3(A1*A2)");
    cert("N4_Q1", 4, N4_Q1, &[2], vec![b])
}

fn n4_q2() -> NullconeCertificate {
    let b = pair_hyps(q2_subs(branch("A1 = Q2"), 2).reduce("c2^2", "(b2 + i*f2)*(e2 + i*f2)"))
        .zero("A2^2*A1")
        .zero("A1*A2*A1")
        .zero("A2*A1*A2")
        .zero("A1^2")
        .vanishes("sigma3(A1*A2)");
    cert("N4_Q2", 4, N4_Q2, &[2], vec![b])
}

fn n4_abc_q1() -> NullconeCertificate {
    let mut b = q1_subs(q1_subs(branch("A1 = Q1"), 2), 3);
    for k in [2, 3] {
        b = b.vanishes(format!("tr(A1*A{k})")).vanishes(format!("tr(A1^2*A{k}^2)"));
        b = b.vanishes(format!("sigma2(A{k})")).vanishes(format!("det(A{k})"));
    }
    for p in ["A1*A2*A3", "A1*A3*A2", "A2*A1*A3", "A2*A3*A1", "A3*A1*A2", "A3*A2*A1"] {
        b = b.zero(p);
    }
    cert("N4_ABC_Q1", 4, N4_Q1, &[2, 3], vec![b])
}

fn n4_abc_q2() -> NullconeCertificate {
    let b = q2_subs(q2_subs(branch("A1 = Q2"), 2), 3)
        .vanishes("tr(A1*A2)")
        .vanishes("tr(A1*A3)")
        .equals("A1*A2", "A2*A1")
        .equals("A1*A3", "A3*A1")
        .equals(
            "P",
            "[[b11, b12, i*b12, -i*b11], \
              [b12 - q, b22, i*b22, -i*b12 + i*q], \
              [i*b12 - i*q, i*b22, -b22, b12 - q], \
              [-i*b11, -i*b12, b12, -b11]]",
        )
        .equals("P - T(P)", "2*q*A1")
        .equals("T(P)", "-2*A3*A2*A1")
        .equals("P", "q*A1 + A1*(A2*A3 - A3*A2)");
    let mut c = cert("N4_ABC_Q2", 4, N4_Q2, &[2, 3], vec![b]);
    c.definitions = vec![
        ("P".into(), "2*A1*A2*A3".into()),
        ("q".into(), "tr(A2*A3)/2".into()),
        ("b11".into(), "entry(P, 1, 1)".into()),
        ("b12".into(), "entry(P, 1, 2)".into()),
        ("b22".into(), "entry(P, 2, 2)".into()),
    ];
    c
}

fn n5_q1() -> NullconeCertificate {
    let mut branches = Vec::new();
    for delta in [-1i32, 1] {
        let sd = if delta < 0 { "-" } else { "" };
        let common = |label: &str| {
            branch(format!("delta = {delta}, {label}"))
                .sub("a2", "-i*e2")
                .sub("d2", format!("i*i2 + {sd}i*(c2 - i*h2)"))
        };
        let flip = if delta < 0 { "" } else { "-" };
        let mut b = common("f2 = -delta*i*g2")
            .sub("f2", format!("{flip}i*g2"))
            .vanishes("tr(A1*A2)")
            .vanishes("tr(A1^2*A2^2)")
            .vanishes("tr(A1^2*A2^4)")
            .zero("A1^3");
        for j in 1..=4 {
            b = b.zero(format!("A1*A2^{j}*A1"));
        }
        branches.push(b);
        branches.push(
            common("c2 = i*h2")
                .sub("c2", "i*h2")
                .sub("b2", "0")
                .reduce("f2^2", "-g2^2 - j2^2")
                .vanishes("tr(A1*A2)")
                .vanishes("tr(A1^2*A2^2)")
                .vanishes("tr(A1^2*A2^4)")
                .vanishes("sigma2(A2)")
                .vanishes("sigma4(A2)")
                .zero("A1*A2*A1")
                .zero("A2*A1*A2")
                .zero("A1^2*A2^2"),
        );
    }
    cert("N5_Q1", 5, "K3;0:2", &[2], branches)
}

fn n5_q3() -> NullconeCertificate {
    let mut b = branch("A1 = Q3")
        .sub("g2", "i*a2 + c2 + i*j2")
        .sub("b2", "-i*i2")
        .sub("j2", "i*c2 + (1+i)/2*e2 - (1-i)/2*h2")
        .sub("e2", "-i*h2")
        .sub("d2", "0")
        .sub("f2", "0");
    for h in ["tr(A1^3*A2)", "tr(A1^4*A2^2)", "tr(A1*A2)", "tr(A1^2*A2^2)", "sigma2(A2)", "sigma4(A2)"] {
        b = b.vanishes(h);
    }
    b = b.vanishes("tr(A1^3*A2^3)").zero("A1*A2*A1*A2*A1");
    for a in 1..=4 {
        for bb in 1..=4 {
            for c in 1..=4 {
                for d in 1..=4 {
                    if a + bb + c + d > 4 {
                        b = b.zero(format!("A1^{a}*A2^{bb}*A1^{c}*A2^{d}"));
                    }
                }
            }
        }
    }
    cert("N5_Q3", 5, "K5", &[2], vec![b])
}

fn n5_q2() -> NullconeCertificate {
    let b = branch("A1 = Q2")
        .sub("a2", "-i*b2 - i*f2 + h2")
        .vanishes("tr(A1*A2)")
        .zero("A1^2")
        .zero("A1*A2*A1");
    cert("N5_Q2", 5, "K4:mu=0;0:1", &[2], vec![b])
}

/// The full catalog, in a fixed order.
pub fn builtin_certificates() -> Vec<NullconeCertificate> {
    vec![n3_trabc(), n3_induction(), n4_q1(), n4_q2(), n4_abc_q1(), n4_abc_q2(), n5_q1(), n5_q3(), n5_q2()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsp::certificate::check_certificate;

    #[test]
    fn catalog_has_nine_distinct_names() {
        let c = builtin_certificates();
        assert_eq!(c.len(), 9);
        let mut names: Vec<_> = c.iter().map(|c| c.name.clone()).collect();
        names.dedup();
        assert_eq!(names.len(), 9);
    }

    #[test]
    fn every_certificate_passes() {
        for c in builtin_certificates() {
            let r = check_certificate(&c).unwrap();
            assert!(r.passed, "{}: {:?}", c.name, r.failure);
        }
    }

    #[test]
    fn json_roundtrip() {
        for c in builtin_certificates() {
            assert_eq!(NullconeCertificate::from_json(&c.to_json()).unwrap(), c);
        }
    }
}
