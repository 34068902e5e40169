//! Commutative Laurent monomials in the variables `X_{i,p}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanData, Folding, HeightFunction};
use crate::error::{Error, Result};

/// A lattice vertex `(i,p)`. Ordered by `p` first, then by `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub p: i64,
    pub i: usize,
}

impl Site {
    pub fn new(i: usize, p: i64) -> Self {
        Site { p, i }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.p)
    }
}

impl Serialize for Site {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.i, self.p).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Site {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (i, p) = <(usize, i64)>::deserialize(d)?;
        Ok(Site { p, i })
    }
}

impl FromStr for Site {
    type Err = Error;

    /// Accepts `(i,p)`, `i,p` or `[i,p]`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let mut it = t.split(',').map(str::trim);
        let bad = || Error::Parse(format!("bad vertex `{s}`"));
        let i = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let p = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        if it.next().is_some() {
            return Err(bad());
        }
        Ok(Site::new(i, p))
    }
}

/// `∏ X_{i,p}^{u_{i,p}}`, stored sorted by site with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<(Site, i64)>,
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Group order: compare exponents at the largest site where they differ.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.exps, &other.exps);
        let (mut x, mut y) = (a.len(), b.len());
        loop {
            match (x, y) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return 0.cmp(&b[y - 1].1),
                (_, 0) => return a[x - 1].1.cmp(&0),
                _ => {}
            }
            let (sa, ea) = a[x - 1];
            let (sb, eb) = b[y - 1];
            match sa.cmp(&sb) {
                Ordering::Greater => return ea.cmp(&0),
                Ordering::Less => return 0.cmp(&eb),
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    x -= 1;
                    y -= 1;
                }
            }
        }
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn x(i: usize, p: i64) -> Self {
        Monomial { exps: vec![(Site::new(i, p), 1)] }
    }

    /// From `(i, p, e)` triples; repeated sites are merged.
    pub fn from_triples<I: IntoIterator<Item = (usize, i64, i64)>>(it: I) -> Self {
        Self::from_sites(it.into_iter().map(|(i, p, e)| (Site::new(i, p), e)))
    }

    pub fn from_sites<I: IntoIterator<Item = (Site, i64)>>(it: I) -> Self {
        let mut v: Vec<(Site, i64)> = it.into_iter().collect();
        v.sort_unstable_by_key(|t| t.0);
        let mut exps: Vec<(Site, i64)> = Vec::with_capacity(v.len());
        for (s, e) in v {
            match exps.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => exps.push((s, e)),
            }
        }
        exps.retain(|t| t.1 != 0);
        Monomial { exps }
    }

    pub fn exps(&self) -> &[(Site, i64)] {
        &self.exps
    }

    pub fn triples(&self) -> Vec<(usize, i64, i64)> {
        self.exps.iter().map(|(s, e)| (s.i, s.p, *e)).collect()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn get(&self, i: usize, p: i64) -> i64 {
        let s = Site::new(i, p);
        self.exps
            .binary_search_by_key(&s, |t| t.0)
            .map(|k| self.exps[k].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (&self.exps, &o.exps);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                Ordering::Less => {
                    out.push(a[x]);
                    x += 1;
                }
                Ordering::Greater => {
                    out.push(b[y]);
                    y += 1;
                }
                Ordering::Equal => {
                    let e = a[x].1 + b[y].1;
                    if e != 0 {
                        out.push((a[x].0, e));
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend_from_slice(&b[y..]);
        Monomial { exps: out }
    }

    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one();
        }
        Monomial { exps: self.exps.iter().map(|&(s, e)| (s, e * k)).collect() }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn is_dominant(&self) -> bool {
        self.exps.iter().all(|t| t.1 > 0)
    }

    pub fn is_antidominant(&self) -> bool {
        self.exps.iter().all(|t| t.1 < 0)
    }

    pub fn is_i_dominant(&self, i: usize) -> bool {
        self.exps.iter().all(|t| t.0.i != i || t.1 > 0)
    }

    /// The factors at the maximal spectral parameter all carry negative powers.
    pub fn is_right_negative(&self) -> bool {
        match self.exps.last() {
            None => false,
            Some(&(top, _)) => self.exps.iter().rev().take_while(|t| t.0.p == top.p).all(|t| t.1 < 0),
        }
    }

    /// Splits into the `X_{i,·}` part and the remaining cofactor.
    pub fn split_node(&self, i: usize) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.exps.iter().partition(|t| t.0.i == i);
        (Monomial { exps: a }, Monomial { exps: b })
    }

    pub fn has_node(&self, i: usize) -> bool {
        self.exps.iter().any(|t| t.0.i == i)
    }

    pub fn shift(&self, r: i64) -> Self {
        Monomial { exps: self.exps.iter().map(|&(s, e)| (Site::new(s.i, s.p + r), e)).collect() }
    }

    pub fn min_p(&self) -> Option<i64> {
        self.exps.first().map(|t| t.0.p)
    }

    pub fn max_p(&self) -> Option<i64> {
        self.exps.last().map(|t| t.0.p)
    }

    /// Total exponent of node `i`.
    pub fn node_degree(&self, i: usize) -> i64 {
        self.exps.iter().filter(|t| t.0.i == i).map(|t| t.1).sum()
    }

    pub fn supported_le(&self, xi: &HeightFunction) -> bool {
        self.exps.iter().all(|t| t.0.p <= xi.get(t.0.i))
    }

    /// `ε` with `p ≡ parity(i) + ε (mod 2)` shared by every factor, if any.
    pub fn parity_class(&self, cd: &CartanData) -> Option<Option<i64>> {
        let mut eps = None;
        for (s, _) in &self.exps {
            let e = (s.p - cd.parity(s.i)).rem_euclid(2);
            match eps {
                None => eps = Some(e),
                Some(x) if x != e => return None,
                _ => {}
            }
        }
        Some(eps)
    }

    /// Pushforward of exponents along the orbit map of a folding.
    pub fn fold(&self, f: &Folding) -> Self {
        Self::from_sites(self.exps.iter().map(|&(s, e)| (Site::new(f.orbit_of(s.i), s.p), e)))
    }

    pub fn check_nodes(&self, cd: &CartanData) -> Result<()> {
        for (s, _) in &self.exps {
            cd.check_node(s.i)?;
        }
        Ok(())
    }

    /// `m^{(i)}[p,s] = X_{i,p} X_{i,p+2} ⋯ X_{i,s}`; empty when `s < p`.
    pub fn kr(i: usize, p: i64, s: i64) -> Self {
        if s < p {
            return Self::one();
        }
        Self::from_triples((0..=(s - p) / 2).map(|k| (i, p + 2 * k, 1)))
    }

    /// `B_{i,p} = X_{i,p-1} X_{i,p+1} ∏_{j~i} X_{j,p}^{c_{j,i}}`.
    pub fn b_var(cd: &CartanData, i: usize, p: i64) -> Self {
        let mut v = vec![(i, p - 1, 1), (i, p + 1, 1)];
        for j in cd.neighbors(i) {
            v.push((j, p, cd.c(j, i)));
        }
        Self::from_triples(v)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (k, (s, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "X[{},{}]", s.i, s.p)?;
            } else {
                write!(f, "X[{},{}]^{}", s.i, s.p, e)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Parses `X[2,5]^-1 * X[1,6]^3`; `*` and whitespace both separate factors.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "1" {
            return Ok(Self::one());
        }
        let bad = |w: &str| Error::Parse(format!("bad factor `{w}` in `{s}`"));
        let mut v = Vec::new();
        let cleaned = t.replace('*', " ");
        let mut rest = cleaned.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('X')
                .or_else(|| rest.strip_prefix('x'))
                .ok_or_else(|| bad(rest))?
                .trim_start();
            let close = body.find(']').ok_or_else(|| bad(rest))?;
            let site: Site = body[..=close].parse()?;
            let mut after = body[close + 1..].trim_start();
            let mut e = 1;
            if let Some(a) = after.strip_prefix('^') {
                let a = a.trim_start();
                let a = a.strip_prefix('{').unwrap_or(a);
                let end = a
                    .char_indices()
                    .find(|&(k, c)| !(c.is_ascii_digit() || (k == 0 && (c == '-' || c == '+'))))
                    .map(|(k, _)| k)
                    .unwrap_or(a.len());
                e = a[..end].parse().map_err(|_| bad(rest))?;
                after = a[end..].trim_start();
                after = after.strip_prefix('}').unwrap_or(after).trim_start();
            }
            v.push((site, e));
            rest = after;
        }
        Ok(Self::from_sites(v))
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.triples().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<(usize, i64, i64)>::deserialize(d)?;
        Ok(Self::from_triples(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let m: Monomial = "X[1,6]^3 * X[2,7]^-1".parse().unwrap();
        assert_eq!(m, Monomial::from_triples([(1, 6, 3), (2, 7, -1)]));
        assert_eq!(m.to_string(), "X[1,6]^3 * X[2,7]^-1");
        assert_eq!("X[2,5]".parse::<Monomial>().unwrap(), Monomial::x(2, 5));
        assert_eq!("1".parse::<Monomial>().unwrap(), Monomial::one());
        assert!("Y[1,2]".parse::<Monomial>().is_err());
        assert_eq!("(2,-3)".parse::<Site>().unwrap(), Site::new(2, -3));
    }

    #[test]
    fn predicates() {
        let m = Monomial::from_triples([(1, 6, 3), (2, 7, -1)]);
        assert!(m.is_i_dominant(1) && !m.is_i_dominant(2));
        assert!(m.is_right_negative());
        assert!(!Monomial::x(2, 5).is_right_negative());
        assert!(Monomial::x(2, 11).inv().is_antidominant());
        assert!(Monomial::x(2, 5).is_dominant());
    }

    #[test]
    fn group_order_is_multiplicative() {
        let a = Monomial::from_triples([(1, 0, 2), (2, 3, -1)]);
        let b = Monomial::from_triples([(1, 0, 1), (2, 3, 1)]);
        let c = Monomial::from_triples([(3, 5, -2)]);
        assert!(a < b);
        assert!(a.mul(&c) < b.mul(&c));
        assert!(Monomial::one() < Monomial::x(1, 0));
        assert!(Monomial::x(1, 0).inv() < Monomial::one());
    }
}
