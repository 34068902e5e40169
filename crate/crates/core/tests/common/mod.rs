#![allow(dead_code)]

use qvgr::laurent::HalfLaurent;
use qvgr::monomial::{Monomial, Site};
use qvgr::torus::{Torus, TorusElement};

/// One term of a reference polynomial: integer-exponent coefficient and the
/// ordered `X̃` factors `(i, p, e)`.
pub type Term<'a> = (&'a [(i64, i64)], &'a [(usize, i64, i64)]);

pub fn tilde_sum(t: &Torus, terms: &[Term]) -> TorusElement {
    let mut acc = TorusElement::zero();
    for (c, f) in terms {
        let x = t.tilde(f).unwrap().scale(&HalfLaurent::from_int_terms(c));
        acc.add_assign(&x);
    }
    acc
}

pub fn mono(s: &str) -> Monomial {
    s.parse().unwrap()
}

pub fn torus(ty: &str) -> Torus {
    Torus::for_type(ty.parse().unwrap()).unwrap()
}

/// `F_q(X̃_{2,5})` in type G2, with the coefficient of `X̃_{1,8} X̃_{1,10}^{-2}`
/// read as `q^{-3}+q^{-1}+q`.
pub const G2_F25: &[Term] = &[
    (&[(0, 1)], &[(2, 5, 1)]),
    (&[(3, 1)], &[(1, 6, 3), (2, 7, -1)]),
    (&[(-2, 1), (0, 1), (2, 1)], &[(1, 6, 2), (1, 8, -1)]),
    (&[(0, 1), (2, 1), (4, 1)], &[(1, 6, 1), (2, 7, 1), (1, 8, -2)]),
    (&[(9, 1)], &[(2, 7, 2), (1, 8, -3)]),
    (&[(-3, 1), (-1, 1), (1, 1)], &[(1, 6, 1), (1, 8, 1), (2, 9, -1)]),
    (&[(-3, 1), (3, 1)], &[(2, 7, 1), (2, 9, -1)]),
    (&[(-4, 1), (-2, 1), (0, 1)], &[(1, 6, 1), (1, 10, -1)]),
    (&[(6, 1)], &[(1, 8, 3), (2, 9, -2)]),
    (&[(-2, 1), (0, 1), (2, 1)], &[(2, 7, 1), (1, 8, -1), (1, 10, -1)]),
    (&[(-2, 1), (0, 1), (2, 1)], &[(1, 8, 2), (2, 9, -1), (1, 10, -1)]),
    (&[(-3, 1), (-1, 1), (1, 1)], &[(1, 8, 1), (1, 10, -2)]),
    (&[(3, 1)], &[(2, 9, 1), (1, 10, -3)]),
    (&[(-3, 1)], &[(2, 11, -1)]),
];

/// The literal reference coefficient of `X̃_{1,8} X̃_{1,10}^{-2}`.
pub const G2_F25_LITERAL_18_110: &[(i64, i64)] = &[(-3, 1), (-1, 1), (0, 1)];

/// Colored edges of the graph of `F_q(X̃_{2,5})`.
pub const G2_F25_EDGES: &[(&str, &str, (usize, i64))] = &[
    ("X[2,7] X[2,9]^-1", "X[1,8]^3 X[2,9]^-2", (2, 8)),
    ("X[1,6] X[1,10]^-1", "X[2,7] X[1,8]^-1 X[1,10]^-1", (1, 7)),
    ("X[1,6] X[1,8] X[2,9]^-1", "X[1,6] X[1,10]^-1", (1, 9)),
    ("X[1,6] X[2,7] X[1,8]^-2", "X[1,6] X[1,8] X[2,9]^-1", (2, 8)),
    ("X[1,6] X[2,7] X[1,8]^-2", "X[2,7]^2 X[1,8]^-3", (1, 7)),
    ("X[1,6]^2 X[1,8]^-1", "X[1,6] X[2,7] X[1,8]^-2", (1, 7)),
    ("X[1,8] X[1,10]^-2", "X[2,9] X[1,10]^-3", (1, 9)),
    ("X[2,7] X[1,8]^-1 X[1,10]^-1", "X[1,8]^2 X[2,9]^-1 X[1,10]^-1", (2, 8)),
    ("X[1,8]^2 X[2,9]^-1 X[1,10]^-1", "X[1,8] X[1,10]^-2", (1, 9)),
    ("X[2,9] X[1,10]^-3", "X[2,11]^-1", (2, 10)),
    ("X[1,6]^3 X[2,7]^-1", "X[1,6]^2 X[1,8]^-1", (1, 7)),
    ("X[2,7]^2 X[1,8]^-3", "X[2,7] X[2,9]^-1", (2, 8)),
    ("X[1,8]^3 X[2,9]^-2", "X[1,8]^2 X[2,9]^-1 X[1,10]^-1", (1, 9)),
    ("X[2,5]", "X[1,6]^3 X[2,7]^-1", (2, 6)),
];

pub const G2_F110: &[Term] = &[
    (&[(0, 1)], &[(1, 10, 1)]),
    (&[(2, 1)], &[(2, 11, 1), (1, 12, -1)]),
    (&[(2, 1)], &[(1, 12, 2), (2, 13, -1)]),
    (&[(-1, 1), (1, 1)], &[(1, 12, 1), (1, 14, -1)]),
    (&[(3, 1)], &[(2, 13, 1), (1, 14, -2)]),
    (&[(0, 1)], &[(1, 14, 1), (2, 15, -1)]),
    (&[(-1, 1)], &[(1, 16, -1)]),
];

/// `F_q(X̃_{1,0})` in type B3.
pub const B3_F1: &[Term] = &[
    (&[(0, 1)], &[(1, 0, 1)]),
    (&[(0, 1)], &[(2, 1, 1), (1, 2, -1)]),
    (&[(1, 1)], &[(3, 2, 2), (2, 3, -1)]),
    (&[(-2, 1), (0, 1)], &[(3, 2, 1), (3, 4, -1)]),
    (&[(1, 1)], &[(2, 3, 1), (3, 4, -2)]),
    (&[(0, 1)], &[(1, 4, 1), (2, 5, -1)]),
    (&[(-2, 1)], &[(1, 6, -1)]),
];

/// `F_q(X̃_{2,1})` in type B3.
pub const B3_F2: &[Term] = &[
    (&[(0, 1)], &[(2, 1, 1)]),
    (&[(3, 1)], &[(1, 2, 1), (3, 2, 2), (2, 3, -1)]),
    (&[(1, 1)], &[(3, 2, 2), (1, 4, -1)]),
    (&[(0, 1), (2, 1)], &[(1, 2, 1), (3, 2, 1), (3, 4, -1)]),
    (&[(3, 1)], &[(1, 2, 1), (2, 3, 1), (3, 4, -2)]),
    (&[(0, 1), (2, 1)], &[(3, 2, 1), (2, 3, 1), (1, 4, -1), (3, 4, -1)]),
    (&[(5, 1)], &[(2, 3, 2), (1, 4, -1), (3, 4, -2)]),
    (&[(2, 1)], &[(1, 2, 1), (1, 4, 1), (2, 5, -1)]),
    (&[(-1, 1), (1, 1)], &[(3, 2, 1), (3, 4, 1), (2, 5, -1)]),
    (&[(-2, 1), (2, 1)], &[(2, 3, 1), (2, 5, -1)]),
    (&[(5, 1)], &[(1, 4, 1), (3, 4, 2), (2, 5, -2)]),
    (&[(0, 1)], &[(1, 2, 1), (1, 6, -1)]),
    (&[(0, 1)], &[(2, 3, 1), (1, 4, -1), (1, 6, -1)]),
    (&[(-2, 1), (0, 1)], &[(3, 2, 1), (3, 6, -1)]),
    (&[(-1, 1), (1, 1)], &[(2, 3, 1), (3, 4, -1), (3, 6, -1)]),
    (&[(1, 1)], &[(3, 4, 2), (2, 5, -1), (1, 6, -1)]),
    (&[(0, 1), (2, 1)], &[(1, 4, 1), (3, 4, 1), (2, 5, -1), (3, 6, -1)]),
    (&[(1, 1)], &[(1, 4, 1), (3, 6, -2)]),
    (&[(-2, 1), (0, 1)], &[(3, 4, 1), (1, 6, -1), (3, 6, -1)]),
    (&[(1, 1)], &[(2, 5, 1), (1, 6, -1), (3, 6, -2)]),
    (&[(-2, 1)], &[(2, 7, -1)]),
];

/// `F_q(X̃_{3,0})` in type B3.
pub const B3_F3: &[Term] = &[
    (&[(0, 1)], &[(3, 0, 1)]),
    (&[(1, 1)], &[(2, 1, 1), (3, 2, -1)]),
    (&[(2, 1)], &[(1, 2, 1), (3, 2, 1), (2, 3, -1)]),
    (&[(0, 1)], &[(3, 2, 1), (1, 4, -1)]),
    (&[(1, 1)], &[(1, 2, 1), (3, 4, -1)]),
    (&[(1, 1)], &[(2, 3, 1), (1, 4, -1), (3, 4, -1)]),
    (&[(0, 1)], &[(3, 4, 1), (2, 5, -1)]),
    (&[(-1, 1)], &[(3, 6, -1)]),
];

/// `F_q(X̃_{i,p}) = q^{-d_i/2} F_q(𝖷_{i,p})`.
pub fn tilde_fundamental(t: &Torus, f: &TorusElement, i: usize) -> TorusElement {
    f.q_shift(-t.cartan().d(i))
}

pub fn site(i: usize, p: i64) -> Site {
    Site::new(i, p)
}

/// Edges of the graph of `F_q(X̃_{2,1})` in type B3, as indices into [`B3_F2`].
pub const B3_F2_EDGES: &[(usize, usize, (usize, i64))] = &[
    (16, 18, (1, 5)),
    (16, 17, (3, 5)),
    (5, 8, (2, 4)),
    (5, 6, (3, 3)),
    (18, 19, (3, 5)),
    (3, 5, (1, 3)),
    (3, 4, (3, 3)),
    (9, 10, (2, 4)),
    (14, 16, (2, 4)),
    (8, 13, (3, 5)),
    (13, 14, (3, 3)),
    (10, 16, (3, 5)),
    (10, 15, (1, 5)),
    (17, 19, (1, 5)),
    (12, 15, (2, 4)),
    (6, 9, (2, 4)),
    (2, 5, (3, 3)),
    (19, 20, (2, 6)),
    (15, 18, (3, 5)),
    (7, 11, (1, 5)),
    (11, 12, (1, 3)),
    (4, 6, (1, 3)),
    (4, 7, (2, 4)),
    (1, 3, (3, 3)),
    (1, 2, (1, 3)),
    (0, 1, (2, 2)),
];
