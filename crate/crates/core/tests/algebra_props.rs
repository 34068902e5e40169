mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use qvgr::laurent::HalfLaurent;
use qvgr::monomial::Monomial;
use qvgr::screening::apply_screening;
use qvgr::torus::TorusElement;

fn laurent() -> impl Strategy<Value = HalfLaurent> {
    prop::collection::vec((-6i64..=6, -3i64..=3), 1..4).prop_map(HalfLaurent::from_terms)
}

/// Monomials on the parity lattice of G2 or B3 within `p ∈ [0, 9]`.
fn monomial(rank: usize) -> impl Strategy<Value = Monomial> {
    prop::collection::vec((1..=rank, 0i64..5, -2i64..=2), 0..4).prop_map(move |v| {
        Monomial::from_triples(v.into_iter().map(|(i, k, e)| (i, 2 * k + (i as i64 + 1) % 2, e)))
    })
}

fn element(rank: usize) -> impl Strategy<Value = TorusElement> {
    prop::collection::vec((monomial(rank), laurent()), 1..4).prop_map(TorusElement::from_terms)
}

fn eval_product(a: &BTreeMap<Monomial, i64>, b: &BTreeMap<Monomial, i64>) -> BTreeMap<Monomial, i64> {
    let mut out: BTreeMap<Monomial, i64> = BTreeMap::new();
    for (x, c) in a {
        for (y, d) in b {
            *out.entry(x.mul(y)).or_default() += c * d;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn associative_b3(a in element(3), b in element(3), c in element(3)) {
        let t = torus("B3");
        let l = t.mul(&t.mul(&a, &b).unwrap(), &c).unwrap();
        let r = t.mul(&a, &t.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn associative_g2(a in element(2), b in element(2), c in element(2)) {
        let t = torus("G2");
        let l = t.mul(&t.mul(&a, &b).unwrap(), &c).unwrap();
        let r = t.mul(&a, &t.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn bar_is_anti_involution(a in element(3), b in element(3)) {
        let t = torus("B3");
        prop_assert_eq!(a.bar().bar(), a.clone());
        let lhs = t.mul(&a, &b).unwrap().bar();
        let rhs = t.mul(&b.bar(), &a.bar()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn distributive(a in element(2), b in element(2), c in element(2)) {
        let t = torus("G2");
        prop_assert_eq!(t.mul(&a, &b.add(&c)).unwrap(), t.mul(&a, &b).unwrap().add(&t.mul(&a, &c).unwrap()));
    }

    #[test]
    fn eval_is_a_morphism(a in element(3), b in element(3)) {
        let t = torus("B3");
        let lhs = t.mul(&a, &b).unwrap().eval_q1();
        prop_assert_eq!(lhs, eval_product(&a.eval_q1(), &b.eval_q1()));
    }

    #[test]
    fn screening_is_a_derivation(a in element(2), b in element(2), i in 1usize..=2) {
        let t = torus("G2");
        let ab = t.mul(&a, &b).unwrap();
        let s_ab = apply_screening(&t, &ab, i).unwrap();
        let s_a = apply_screening(&t, &a, i).unwrap();
        let s_b = apply_screening(&t, &b, i).unwrap();
        let rhs = s_b.left_mul(&t, &a).unwrap().add(&s_a.right_mul(&t, &b).unwrap());
        let mut anchors: Vec<i64> = s_ab.anchors();
        anchors.extend(rhs.anchors());
        let mut lows: BTreeMap<i64, i64> = BTreeMap::new();
        for r in anchors {
            let e = lows.entry(r.rem_euclid(2)).or_insert(r);
            *e = (*e).min(r);
        }
        let anchors: Vec<i64> = lows.values().copied().collect();
        let l = s_ab.reanchor(&t, &anchors).unwrap();
        let r = rhs.reanchor(&t, &anchors).unwrap();
        prop_assert_eq!(l, r);
    }
}

#[test]
fn generator_relations() {
    for ty in ["G2", "B3", "C3", "F4"] {
        let t = torus(ty);
        let cd = t.cartan().clone();
        for i in cd.nodes() {
            for j in cd.nodes() {
                for p in 0..4 {
                    for s in 0..6 {
                        let x = t.x_tilde_pow(i, p, 1);
                        let y = t.x_tilde_pow(j, s, 1);
                        let n = t.table().pairing(i, p, j, s).unwrap();
                        let l = t.mul(&x, &y).unwrap();
                        let r = t.mul(&y, &x).unwrap().q_shift(2 * n);
                        assert_eq!(l, r, "{ty} ({i},{p}) ({j},{s})");

                        let bi = t.b_tilde_inv(j, s);
                        let l = t.mul(&x, &bi).unwrap();
                        let r = t.mul(&bi, &x).unwrap().q_shift(2 * t.beta(i, p, j, s));
                        assert_eq!(l, r, "beta {ty} ({i},{p}) ({j},{s})");

                        let bp = t.b_tilde_inv(i, p);
                        let l = t.mul(&bp, &bi).unwrap();
                        let r = t.mul(&bi, &bp).unwrap().q_shift(2 * t.alpha(i, p, j, s));
                        assert_eq!(l, r, "alpha {ty} ({i},{p}) ({j},{s})");
                    }
                }
            }
        }
    }
}

#[test]
fn pairing_is_antisymmetric_and_shift_invariant() {
    let t = torus("F4");
    let tb = t.table();
    for i in 1..=4 {
        for j in 1..=4 {
            for p in -3..3 {
                for s in -3..3 {
                    let n = tb.pairing(i, p, j, s).unwrap();
                    assert_eq!(n, -tb.pairing(j, s, i, p).unwrap());
                    assert_eq!(n, tb.pairing(i, p + 2, j, s + 2).unwrap());
                }
            }
        }
    }
}
