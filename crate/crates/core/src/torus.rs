//! The quantum torus in the basis of bar-invariant monomials.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanData, Folding, FiniteType, HeightFunction};
use crate::error::{Error, Result};
use crate::laurent::HalfLaurent;
use crate::monomial::{Monomial, Site};
use crate::tcartan::{default_bound, BtildeTable};

/// `Σ c_m(q) · underline(m)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TorusElement {
    terms: BTreeMap<Monomial, HalfLaurent>,
}

impl TorusElement {
    pub fn zero() -> Self {
        TorusElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one())
    }

    /// `underline(m)`.
    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, HalfLaurent::one())
    }

    pub fn term(m: Monomial, c: HalfLaurent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        TorusElement { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, HalfLaurent)>>(it: I) -> Self {
        let mut a = Self::zero();
        for (m, c) in it {
            a.add_term(m, &c);
        }
        a
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, HalfLaurent> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &HalfLaurent)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> HalfLaurent {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, m: Monomial, c: &HalfLaurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), &c.neg());
        }
        r
    }

    pub fn scale(&self, c: &HalfLaurent) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))))
    }

    /// Multiplication by `q^{h/2}`.
    pub fn q_shift(&self, h: i64) -> Self {
        TorusElement { terms: self.terms.iter().map(|(m, x)| (m.clone(), x.shift(h))).collect() }
    }

    pub fn bar(&self) -> Self {
        TorusElement { terms: self.terms.iter().map(|(m, x)| (m.clone(), x.bar())).collect() }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms.values().all(HalfLaurent::is_bar_invariant)
    }

    pub fn eval_q1(&self) -> BTreeMap<Monomial, i64> {
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), c.eval_at_one()))
            .filter(|t| t.1 != 0)
            .collect()
    }

    pub fn truncate_le_xi(&self, xi: &HeightFunction) -> Self {
        TorusElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.supported_le(xi))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn spectral_shift(&self, r: i64) -> Result<Self> {
        if r % 2 != 0 {
            return Err(Error::OddShift(r));
        }
        Ok(TorusElement { terms: self.terms.iter().map(|(m, c)| (m.shift(r), c.clone())).collect() })
    }

    /// Folds the monomials; coefficients of colliding monomials are added.
    pub fn fold(&self, f: &Folding) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.fold(f), c.clone())))
    }

    pub fn dominant_monomials(&self) -> Vec<Monomial> {
        self.terms.keys().filter(|m| m.is_dominant()).cloned().collect()
    }

    pub fn leading(&self) -> Option<(&Monomial, &HalfLaurent)> {
        self.terms.iter().next_back()
    }

    /// Largest `h` with every coefficient in `q^{h/2} Z[q^{1/2}]`.
    pub fn min_q_halves(&self) -> Option<i64> {
        self.terms.values().filter_map(HalfLaurent::min_exp).min()
    }

    pub fn negative_coefficients(&self) -> Vec<(Monomial, HalfLaurent)> {
        self.terms
            .iter()
            .filter(|(_, c)| !c.is_nonnegative())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "({c}) {m}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    exps: Vec<(usize, i64, i64)>,
    coeff: Vec<(i64, i64)>,
}

#[derive(Serialize, Deserialize)]
struct JsonElement {
    monomials: Vec<JsonTerm>,
}

impl Serialize for TorusElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JsonElement {
            monomials: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| JsonTerm { exps: m.triples(), coeff: c.terms().to_vec() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = JsonElement::deserialize(d)?;
        Ok(Self::from_terms(j.monomials.into_iter().map(|t| {
            (Monomial::from_triples(t.exps), HalfLaurent::from_terms(t.coeff))
        })))
    }
}

/// Multiplication context: the b̃ table, or the commutative `q = 1` specialization.
#[derive(Debug, Clone)]
pub struct Torus {
    tbl: Arc<BtildeTable>,
    classical: bool,
    /// `det(C) · C^{-T} · 1`, a level functional dropping by `det C` per `B`.
    level_weights: Vec<i64>,
}

impl Torus {
    pub fn new(tbl: Arc<BtildeTable>) -> Self {
        let level_weights = level_weights(tbl.cartan());
        Torus { tbl, classical: false, level_weights }
    }

    pub fn classical(tbl: Arc<BtildeTable>) -> Self {
        Torus { classical: true, ..Self::new(tbl) }
    }

    pub fn for_type(ty: FiniteType) -> Result<Self> {
        let cd = Arc::new(CartanData::new(ty));
        let u = default_bound(&cd);
        Ok(Self::new(Arc::new(BtildeTable::new(cd, u)?)))
    }

    pub fn with_bound(ty: FiniteType, bound: i64) -> Result<Self> {
        let cd = Arc::new(CartanData::new(ty));
        Ok(Self::new(Arc::new(BtildeTable::new(cd, bound)?)))
    }

    /// The same table with `q` specialized to 1.
    pub fn to_classical(&self) -> Self {
        Torus { classical: true, ..self.clone() }
    }

    pub fn is_classical(&self) -> bool {
        self.classical
    }

    pub fn cartan(&self) -> &CartanData {
        self.tbl.cartan()
    }

    pub fn table(&self) -> &BtildeTable {
        &self.tbl
    }

    pub fn table_arc(&self) -> &Arc<BtildeTable> {
        &self.tbl
    }

    /// Half-units of `q_i = q^{d_i}`.
    pub fn qi_halves(&self, i: usize) -> i64 {
        if self.classical {
            0
        } else {
            2 * self.cartan().d(i)
        }
    }

    pub fn site_pairing(&self, a: Site, b: Site) -> Result<i64> {
        if self.classical {
            return Ok(0);
        }
        self.tbl.pairing(a.i, a.p, b.i, b.p)
    }

    /// `N(m1, m2) = Σ u_{i,p}(m1) u_{j,s}(m2) N(i,p; j,s)`.
    pub fn pairing(&self, m1: &Monomial, m2: &Monomial) -> Result<i64> {
        if self.classical {
            return Ok(0);
        }
        let mut n = 0i64;
        for &(a, u) in m1.exps() {
            for &(b, v) in m2.exps() {
                if a.p == b.p {
                    continue;
                }
                n += u * v * self.tbl.pairing(a.i, a.p, b.i, b.p)?;
            }
        }
        Ok(n)
    }

    /// `underline(m1) * underline(m2) = q^{h/2} underline(m1 m2)`, returns `(h, m1 m2)`.
    pub fn mono_mul(&self, m1: &Monomial, m2: &Monomial) -> Result<(i64, Monomial)> {
        Ok((self.pairing(m1, m2)?, m1.mul(m2)))
    }

    pub fn mul(&self, a: &TorusElement, b: &TorusElement) -> Result<TorusElement> {
        let mut acc: BTreeMap<Monomial, BTreeMap<i64, i64>> = BTreeMap::new();
        for (m1, c1) in a.iter() {
            for (m2, c2) in b.iter() {
                let (h, m) = self.mono_mul(m1, m2)?;
                let slot = acc.entry(m).or_default();
                for &(e1, x1) in c1.terms() {
                    for &(e2, x2) in c2.terms() {
                        *slot.entry(e1 + e2 + h).or_default() += x1 * x2;
                    }
                }
            }
        }
        Ok(TorusElement {
            terms: acc
                .into_iter()
                .map(|(m, v)| (m, HalfLaurent::from_terms(v)))
                .filter(|t| !t.1.is_zero())
                .collect(),
        })
    }

    pub fn mul_monomial_left(&self, m: &Monomial, a: &TorusElement) -> Result<TorusElement> {
        let mut terms = BTreeMap::new();
        for (m2, c) in a.iter() {
            let (h, p) = self.mono_mul(m, m2)?;
            terms.insert(p, c.shift(h));
        }
        Ok(TorusElement { terms })
    }

    pub fn mul_monomial_right(&self, a: &TorusElement, m: &Monomial) -> Result<TorusElement> {
        let mut terms = BTreeMap::new();
        for (m1, c) in a.iter() {
            let (h, p) = self.mono_mul(m1, m)?;
            terms.insert(p, c.shift(h));
        }
        Ok(TorusElement { terms })
    }

    pub fn pow(&self, a: &TorusElement, k: u32) -> Result<TorusElement> {
        let mut r = TorusElement::one();
        for _ in 0..k {
            r = self.mul(&r, a)?;
        }
        Ok(r)
    }

    pub fn product<'a, I: IntoIterator<Item = &'a TorusElement>>(&self, it: I) -> Result<TorusElement> {
        let mut r = TorusElement::one();
        for a in it {
            r = self.mul(&r, a)?;
        }
        Ok(r)
    }

    /// `X̃_{i,p}^{e}` in the bar-invariant basis: `q^{-e d_i/2} underline(X_{i,p}^e)`.
    pub fn x_tilde_pow(&self, i: usize, p: i64, e: i64) -> TorusElement {
        let h = if self.classical { 0 } else { -e * self.cartan().d(i) };
        TorusElement::term(Monomial::from_triples([(i, p, e)]), HalfLaurent::term(h, 1))
    }

    /// Ordered product `X̃_{i_1,p_1}^{e_1} * X̃_{i_2,p_2}^{e_2} * ⋯` in the listed order.
    pub fn tilde(&self, factors: &[(usize, i64, i64)]) -> Result<TorusElement> {
        let mut r = TorusElement::one();
        for &(i, p, e) in factors {
            r = self.mul(&r, &self.x_tilde_pow(i, p, e))?;
        }
        Ok(r)
    }

    /// `underline(B_{i,p})`.
    pub fn b_tilde(&self, i: usize, p: i64) -> TorusElement {
        TorusElement::monomial(Monomial::b_var(self.cartan(), i, p))
    }

    pub fn b_tilde_inv(&self, i: usize, p: i64) -> TorusElement {
        TorusElement::monomial(Monomial::b_var(self.cartan(), i, p).inv())
    }

    /// Exponent `β` with `X̃_{i,p} * B̃_{j,s}^{-1} = q^β B̃_{j,s}^{-1} * X̃_{i,p}`.
    pub fn beta(&self, i: usize, p: i64, j: usize, s: i64) -> i64 {
        if i != j {
            return 0;
        }
        let aii = 2 * self.cartan().d(i);
        match p - s {
            1 => -aii,
            -1 => aii,
            _ => 0,
        }
    }

    /// Exponent `α` with `B̃_{i,t}^{-1} * B̃_{j,u}^{-1} = q^α B̃_{j,u}^{-1} * B̃_{i,t}^{-1}`.
    pub fn alpha(&self, i: usize, t: i64, j: usize, u: i64) -> i64 {
        let cd = self.cartan();
        let aii = 2 * cd.d(i);
        if i == j {
            match t - u {
                2 => aii,
                -2 => -aii,
                _ => 0,
            }
        } else if cd.dist(i, j) == 1 {
            let aij = cd.d(i) * cd.c(i, j);
            match t - u {
                1 => 2 * aij,
                -1 => -2 * aij,
                _ => 0,
            }
        } else {
            0
        }
    }

    /// Level of `m` relative to `root`: the number of `B^{-1}` factors in `m / root`
    /// when `m ⪯ root`, scaled by `det C`.
    pub fn level(&self, root: &Monomial, m: &Monomial) -> i64 {
        let w = |x: &Monomial| -> i64 { x.exps().iter().map(|(s, e)| e * self.level_weights[s.i - 1]).sum() };
        w(root) - w(m)
    }

    pub fn level_unit(&self) -> i64 {
        let cd = self.cartan();
        (1..=cd.rank()).map(|j| cd.c(j, 1) * self.level_weights[j - 1]).sum()
    }

    /// Decides `m1 ⪯_N m2` by triangular elimination from the top spectral parameter.
    pub fn nakajima_leq(&self, m1: &Monomial, m2: &Monomial) -> bool {
        nakajima_exponents(self.cartan(), m1, m2).is_some_and(|v| v.iter().all(|t| t.1 >= 0))
    }

    pub fn is_in_ring_parity(&self, m: &Monomial) -> bool {
        m.parity_class(self.cartan()).is_some()
    }
}

/// Solves `m1 = m2 · ∏ B_{i,p}^{-v_{i,p}}` for integer `v`, if possible.
pub fn nakajima_exponents(cd: &CartanData, m1: &Monomial, m2: &Monomial) -> Option<Vec<(Site, i64)>> {
    // r = m2 / m1 = ∏ B^{v}; peel the B whose top factor X_{i,p+1} is maximal.
    let mut r = m2.div(m1);
    let floor = match r.min_p() {
        Some(lo) => lo + 1,
        None => return Some(Vec::new()),
    };
    let mut v = Vec::new();
    while let Some(&(top, e)) = r.exps().last() {
        if top.p - 1 < floor {
            return None;
        }
        r = r.div(&Monomial::b_var(cd, top.i, top.p - 1).pow(e));
        v.push((Site::new(top.i, top.p - 1), e));
    }
    Some(v)
}

fn level_weights(cd: &CartanData) -> Vec<i64> {
    // Solve C^T a = det(C) · 1 exactly with rational elimination.
    let n = cd.rank();
    let mut a: Vec<Vec<(i128, i128)>> = (0..n)
        .map(|r| {
            let mut row: Vec<(i128, i128)> = (0..n).map(|c| (cd.c(c + 1, r + 1) as i128, 1)).collect();
            row.push((1, 1));
            row
        })
        .collect();
    fn norm((x, y): (i128, i128)) -> (i128, i128) {
        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let g = gcd(x, y).max(1);
        let s = if y < 0 { -1 } else { 1 };
        (s * x / g, s * y / g)
    }
    let sub = |x: (i128, i128), y: (i128, i128)| norm((x.0 * y.1 - y.0 * x.1, x.1 * y.1));
    let mul = |x: (i128, i128), y: (i128, i128)| norm((x.0 * y.0, x.1 * y.1));
    let div = |x: (i128, i128), y: (i128, i128)| norm((x.0 * y.1, x.1 * y.0));
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col].0 != 0).expect("Cartan matrix is invertible");
        a.swap(col, piv);
        let p = a[col][col];
        for c in col..=n {
            a[col][c] = div(a[col][c], p);
        }
        for r in 0..n {
            if r != col && a[r][col].0 != 0 {
                let f = a[r][col];
                for c in col..=n {
                    a[r][c] = sub(a[r][c], mul(f, a[col][c]));
                }
            }
        }
    }
    let sol: Vec<(i128, i128)> = (0..n).map(|r| a[r][n]).collect();
    let l = sol.iter().fold(1i128, |acc, x| {
        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        acc / gcd(acc, x.1) * x.1
    });
    sol.iter().map(|x| (x.0 * (l / x.1)) as i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g2() -> Torus {
        Torus::for_type("G2".parse().unwrap()).unwrap()
    }

    #[test]
    fn generator_twists() {
        let t = g2();
        let a = TorusElement::monomial(Monomial::x(2, 5));
        let b = TorusElement::monomial(Monomial::x(2, 7));
        let ab = t.mul(&a, &b).unwrap();
        assert_eq!(ab, TorusElement::term(Monomial::from_triples([(2, 5, 1), (2, 7, 1)]), HalfLaurent::term(3, 1)));
        let x = TorusElement::monomial(Monomial::x(1, 10));
        let y = TorusElement::monomial(Monomial::x(2, 10));
        assert_eq!(t.mul(&x, &y).unwrap(), t.mul(&y, &x).unwrap());
    }

    #[test]
    fn level_drops_uniformly() {
        for ty in ["A3", "B3", "C4", "D5", "E6", "F4", "G2"] {
            let t = Torus::for_type(ty.parse().unwrap()).unwrap();
            let unit = t.level_unit();
            assert!(unit > 0);
            let root = Monomial::x(1, 0);
            for i in t.cartan().nodes() {
                let m = root.div(&Monomial::b_var(t.cartan(), i, 3));
                assert_eq!(t.level(&root, &m), unit, "{ty} node {i}");
            }
        }
    }

    #[test]
    fn nakajima_order() {
        let t = g2();
        let top = Monomial::x(2, 5);
        let low = Monomial::from_triples([(1, 6, 3), (2, 7, -1)]);
        assert!(t.nakajima_leq(&low, &top));
        assert!(!t.nakajima_leq(&top, &low));
        assert!(t.nakajima_leq(&top, &top));
        assert!(!t.nakajima_leq(&Monomial::x(1, 6), &top));
    }

    #[test]
    fn json_round_trip() {
        let t = g2();
        let a = t.tilde(&[(1, 6, 3), (2, 7, -1)]).unwrap().add(&TorusElement::one());
        let s = serde_json::to_string(&a).unwrap();
        let b: TorusElement = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert!(s.starts_with("{\"monomials\":[{\"exps\":"));
    }
}
