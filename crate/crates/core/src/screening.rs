//! q-screening operators and kernel membership.

use std::collections::{BTreeMap, HashMap};

use crate::error::Result;
use crate::laurent::HalfLaurent;
use crate::monomial::Monomial;
use crate::torus::{Torus, TorusElement};

/// An element of the quotient module for node `i`, written as
/// `Σ_{r0} Y_{r0} · s̃_{i,r0}` with one anchor `r0` per residue class mod 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScreeningValue {
    pub i: usize,
    pub parts: BTreeMap<i64, TorusElement>,
}

impl ScreeningValue {
    pub fn is_zero(&self) -> bool {
        self.parts.values().all(TorusElement::is_zero)
    }

    /// First anchor with a nonzero coefficient, with that coefficient.
    pub fn first_surviving(&self) -> Option<(i64, &TorusElement)> {
        self.parts.iter().find(|(_, y)| !y.is_zero()).map(|(r, y)| (*r, y))
    }

    /// Rewrites every part on the anchor `r` of its residue class, `r` below the current one.
    pub fn reanchor(&self, t: &Torus, anchors: &[i64]) -> Result<ScreeningValue> {
        let mut parts: BTreeMap<i64, TorusElement> = BTreeMap::new();
        let mut chains = ChainCache::new(self.i);
        for (&r, y) in &self.parts {
            let r0 = anchors
                .iter()
                .copied()
                .find(|a| (a - r).rem_euclid(2) == 0 && *a <= r)
                .unwrap_or(r);
            let moved = chains.move_down(t, y, r, r0)?;
            parts.entry(r0).or_default().add_assign(&moved);
        }
        parts.retain(|_, y| !y.is_zero());
        Ok(ScreeningValue { i: self.i, parts })
    }

    /// Left action of the torus.
    pub fn left_mul(&self, t: &Torus, a: &TorusElement) -> Result<ScreeningValue> {
        let mut parts = BTreeMap::new();
        for (&r, y) in &self.parts {
            parts.insert(r, t.mul(a, y)?);
        }
        Ok(ScreeningValue { i: self.i, parts })
    }

    /// Right action: `s̃_{i,r} · underline(m) = q_i^{-2 u_{i,r}(m)} underline(m) · s̃_{i,r}`.
    pub fn right_mul(&self, t: &Torus, b: &TorusElement) -> Result<ScreeningValue> {
        let mut parts = BTreeMap::new();
        let qi = t.qi_halves(self.i);
        for (&r, y) in &self.parts {
            let mut acc = TorusElement::zero();
            for (m, c) in b.iter() {
                let u = m.get(self.i, r);
                let piece = t.mul_monomial_right(y, m)?.scale(&c.shift(-2 * u * qi));
                acc.add_assign(&piece);
            }
            parts.insert(r, acc);
        }
        Ok(ScreeningValue { i: self.i, parts })
    }

    pub fn add(&self, o: &ScreeningValue) -> ScreeningValue {
        let mut parts = self.parts.clone();
        for (r, y) in &o.parts {
            parts.entry(*r).or_default().add_assign(y);
        }
        parts.retain(|_, y| !y.is_zero());
        ScreeningValue { i: self.i, parts }
    }

    pub fn anchors(&self) -> Vec<i64> {
        self.parts.keys().copied().collect()
    }
}

/// Memoized `underline(B_{i,r-1}) * underline(B_{i,r-3}) * ⋯ * underline(B_{i,r0+1})`.
struct ChainCache {
    i: usize,
    cache: HashMap<(i64, i64), (i64, Monomial)>,
}

impl ChainCache {
    fn new(i: usize) -> Self {
        ChainCache { i, cache: HashMap::new() }
    }

    fn chain(&mut self, t: &Torus, r0: i64, r: i64) -> Result<(i64, Monomial)> {
        if let Some(x) = self.cache.get(&(r0, r)) {
            return Ok(x.clone());
        }
        let mut h = 0;
        let mut m = Monomial::one();
        let mut s = r - 1;
        while s > r0 {
            let (dh, p) = t.mono_mul(&m, &Monomial::b_var(t.cartan(), self.i, s))?;
            h += dh;
            m = p;
            s -= 2;
        }
        self.cache.insert((r0, r), (h, m.clone()));
        Ok((h, m))
    }

    /// `Y · s̃_{i,r} = q_i^{-k} (Y * chain) · s̃_{i,r0}` with `r = r0 + 2k`.
    fn move_down(&mut self, t: &Torus, y: &TorusElement, r: i64, r0: i64) -> Result<TorusElement> {
        if r == r0 {
            return Ok(y.clone());
        }
        let k = (r - r0) / 2;
        let (h, ch) = self.chain(t, r0, r)?;
        Ok(t.mul_monomial_right(y, &ch)?.q_shift(h - k * t.qi_halves(self.i)))
    }
}

/// `S_{i,q}(a)` in reduced form.
pub fn apply_screening(t: &Torus, a: &TorusElement, i: usize) -> Result<ScreeningValue> {
    apply_screening_anchored(t, a, i, &[])
}

/// As [`apply_screening`], with optional extra anchor candidates (the lowest in each class wins).
pub fn apply_screening_anchored(t: &Torus, a: &TorusElement, i: usize, extra: &[i64]) -> Result<ScreeningValue> {
    t.cartan().check_node(i)?;
    let d = if t.is_classical() { 0 } else { t.cartan().d(i) };
    let mut raw: Vec<(i64, &Monomial, HalfLaurent)> = Vec::new();
    for (m, c) in a.iter() {
        for &(s, u) in m.exps() {
            if s.i == i {
                raw.push((s.p, m, c.mul(&HalfLaurent::screening_number(u, d))));
            }
        }
    }
    let mut anchors: BTreeMap<i64, i64> = BTreeMap::new();
    for r in raw.iter().map(|x| x.0).chain(extra.iter().copied()) {
        let e = anchors.entry(r.rem_euclid(2)).or_insert(r);
        *e = (*e).min(r);
    }
    let mut chains = ChainCache::new(i);
    let mut parts: BTreeMap<i64, TorusElement> = BTreeMap::new();
    for (r, m, c) in raw {
        let r0 = anchors[&r.rem_euclid(2)];
        let y = TorusElement::term(m.clone(), c);
        let moved = chains.move_down(t, &y, r, r0)?;
        parts.entry(r0).or_default().add_assign(&moved);
    }
    parts.retain(|_, y| !y.is_zero());
    Ok(ScreeningValue { i, parts })
}

pub fn in_kernel(t: &Torus, a: &TorusElement, i: usize) -> Result<bool> {
    Ok(apply_screening(t, a, i)?.is_zero())
}

pub fn in_ring(t: &Torus, a: &TorusElement) -> Result<bool> {
    for i in t.cartan().nodes() {
        if !in_kernel(t, a, i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-node kernel report: `(i, passed, first surviving coefficient)`.
pub fn kernel_report(t: &Torus, a: &TorusElement) -> Result<Vec<(usize, bool, Option<(i64, TorusElement)>)>> {
    let mut out = Vec::new();
    for i in t.cartan().nodes() {
        let s = apply_screening(t, a, i)?;
        let first = s.first_surviving().map(|(r, y)| (r, y.clone()));
        out.push((i, first.is_none(), first));
    }
    Ok(out)
}
