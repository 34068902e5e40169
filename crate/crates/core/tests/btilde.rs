use qvgr::cartan::{build_cartan, FiniteType};
use qvgr::tcartan::{compute_btilde, BtildeTable};

fn table(ty: &str, u: i64) -> BtildeTable {
    compute_btilde(&build_cartan(ty.parse().unwrap()), u).unwrap()
}

fn series(t: &BtildeTable, i: usize, j: usize, upto: i64) -> Vec<i64> {
    (1..=upto).map(|u| t.b(i, j, u).unwrap()).collect()
}

/// Coefficients `t^1 … t^n` from a list of `(exponent, coefficient)`.
fn dense(terms: &[(i64, i64)], n: i64) -> Vec<i64> {
    (1..=n).map(|u| terms.iter().find(|t| t.0 == u).map_or(0, |t| t.1)).collect()
}

#[test]
fn range_lemma_all_types() {
    let start = std::time::Instant::now();
    for ty in FiniteType::all_up_to(8) {
        let t = compute_btilde(&build_cartan(ty), 100).unwrap();
        t.verify_range_lemma().unwrap_or_else(|e| panic!("{ty}: {e}"));
    }
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn b3_expansions() {
    let t = table("B3", 40);
    let b11 = [(1, 2), (5, 2), (7, -2), (11, -2), (13, 2), (17, 2), (19, -2)];
    let b12 = [(2, 2), (4, 2), (8, -2), (10, -2), (14, 2), (16, 2), (20, -2)];
    let b13 = [(3, 2), (9, -2), (15, 2), (21, -2), (27, 2), (33, -2), (39, 2)];
    let b22 = [(1, 2), (3, 4), (5, 2), (7, -2), (9, -4), (11, -2), (13, 2), (15, 4), (17, 2)];
    let b33 = [(1, 1), (3, 1), (5, 1), (7, -1), (9, -1), (11, -1), (13, 1), (15, 1), (17, 1)];
    assert_eq!(series(&t, 1, 1, 19), dense(&b11, 19));
    assert_eq!(series(&t, 1, 2, 20), dense(&b12, 20));
    assert_eq!(series(&t, 1, 3, 39), dense(&b13, 39));
    assert_eq!(series(&t, 2, 2, 17), dense(&b22, 17));
    assert_eq!(series(&t, 3, 3, 17), dense(&b33, 17));
    assert_eq!(series(&t, 2, 3, 20), series(&t, 1, 2, 20));
}

#[test]
fn g2_expansions() {
    let t = table("G2", 40);
    let b11 = [(1, 1), (3, 2), (5, 1), (7, -1), (9, -2), (11, -1), (13, 1), (15, 2), (17, 1)];
    let b12 = [(2, 3), (4, 3), (8, -3), (10, -3), (14, 3), (16, 3), (20, -3)];
    assert_eq!(series(&t, 1, 1, 17), dense(&b11, 17));
    assert_eq!(series(&t, 1, 2, 20), dense(&b12, 20));
    let b22: Vec<i64> = series(&t, 1, 1, 30).iter().map(|x| 3 * x).collect();
    assert_eq!(series(&t, 2, 2, 30), b22);
    assert_eq!((t.b(2, 2, 1).unwrap(), t.b(2, 2, 3).unwrap()), (3, 6));
}

/// `B̃(t) · C(t) D^{-1} = Id` coefficientwise, with `C(t) = (t + t^{-1}) Id - 𝕀`.
#[test]
fn inverse_series_remultiplies() {
    for ty in FiniteType::all_up_to(8) {
        let cd = build_cartan(ty);
        let u_max = 60;
        let t = compute_btilde(&cd, u_max).unwrap();
        for i in cd.nodes() {
            for j in cd.nodes() {
                for u in 0..u_max {
                    let mut v = t.b(i, j, u + 1).unwrap() + t.b(i, j, u - 1).unwrap();
                    for k in cd.nodes() {
                        if k != j {
                            v += cd.c(k, j) * t.b(i, k, u).unwrap();
                        }
                    }
                    let want = if i == j && u == 0 { cd.d(j) } else { 0 };
                    assert_eq!(v, want, "{ty} ({i},{j}) u={u}");
                }
            }
        }
    }
}

/// `η̃(u-1) + η̃(u+1) + Σ_{d(k,j)=1} c_{k,j} η̃_{i,k}(u) = 2 d_i δ_{i,j} δ_{u,0}`.
#[test]
fn eta_recurrence() {
    for ty in ["A4", "B3", "C4", "D5", "E6", "F4", "G2"] {
        let cd = build_cartan(ty.parse().unwrap());
        let u_max = 40;
        let t = compute_btilde(&cd, u_max).unwrap();
        for i in cd.nodes() {
            for j in cd.nodes() {
                for u in -(u_max - 2)..=(u_max - 2) {
                    let mut v = t.eta(i, j, u - 1).unwrap() + t.eta(i, j, u + 1).unwrap();
                    for k in cd.neighbors(j) {
                        v += cd.c(k, j) * t.eta(i, k, u).unwrap();
                    }
                    let want = if i == j && u == 0 { 2 * cd.d(i) } else { 0 };
                    assert_eq!(v, want, "{ty} ({i},{j}) u={u}");
                }
            }
        }
    }
}

#[test]
fn tsystem_exponents_examples() {
    use qvgr::tcartan::HalfInt;
    assert_eq!(table("G2", 20).tsystem_exponents(2, 1).unwrap(), (HalfInt(3), HalfInt(9)));
    assert_eq!(table("A1", 20).tsystem_exponents(1, 1).unwrap(), (HalfInt(-2), HalfInt(0)));
    let b3 = table("B3", 20);
    assert_eq!(b3.tsystem_exponents(1, 1).unwrap(), (HalfInt(-2), HalfInt(2)));
    assert_eq!(b3.tsystem_exponents(2, 1).unwrap(), (HalfInt(2), HalfInt(6)));
    assert_eq!(b3.tsystem_exponents(3, 1).unwrap(), (HalfInt(0), HalfInt(2)));
    assert!(b3.tsystem_exponents(1, 10).is_err());
}

#[test]
fn eta_is_even() {
    let t = table("F4", 30);
    for i in 1..=4 {
        for j in 1..=4 {
            for u in -29..=29 {
                assert_eq!(t.eta(i, j, u).unwrap(), t.eta(i, j, -u).unwrap());
            }
        }
    }
}
