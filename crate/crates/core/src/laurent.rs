//! Laurent polynomials in `q^{1/2}` with integer coefficients.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::tcartan::HalfInt;

/// Sparse element of `Z[q^{±1/2}]`: `(half-exponent, coefficient)` pairs,
/// strictly increasing in the exponent, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct HalfLaurent {
    terms: Vec<(i64, i64)>,
}

impl HalfLaurent {
    pub fn zero() -> Self {
        HalfLaurent { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::term(0, 1)
    }

    pub fn constant(c: i64) -> Self {
        Self::term(0, c)
    }

    /// `c q^{h/2}`.
    pub fn term(h: i64, c: i64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            HalfLaurent { terms: vec![(h, c)] }
        }
    }

    pub fn q_pow(e: HalfInt) -> Self {
        Self::term(e.halves(), 1)
    }

    /// Builds from arbitrary `(half-exponent, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(it: I) -> Self {
        let mut v: Vec<(i64, i64)> = it.into_iter().collect();
        v.sort_unstable();
        let mut terms: Vec<(i64, i64)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match terms.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|t| t.1 != 0);
        HalfLaurent { terms }
    }

    /// Integer-exponent convenience: `Σ c_k q^{e_k}`.
    pub fn from_int_terms(it: &[(i64, i64)]) -> Self {
        Self::from_terms(it.iter().map(|&(e, c)| (2 * e, c)))
    }

    pub fn terms(&self) -> &[(i64, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms == [(0, 1)]
    }

    /// `Some((h, c))` when the polynomial is a single term `c q^{h/2}`.
    pub fn as_monomial(&self) -> Option<(i64, i64)> {
        if self.terms.len() == 1 {
            Some(self.terms[0])
        } else {
            None
        }
    }

    pub fn coeff(&self, h: i64) -> i64 {
        self.terms
            .binary_search_by_key(&h, |t| t.0)
            .map(|k| self.terms[k].1)
            .unwrap_or(0)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = (&self.terms, &o.terms);
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
                    let c = a[x].1 + b[y].1;
                    if c != 0 {
                        out.push((a[x].0, c));
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend_from_slice(&b[y..]);
        HalfLaurent { terms: out }
    }

    pub fn add_assign(&mut self, o: &Self) {
        if o.is_zero() {
            return;
        }
        *self = self.add(o);
    }

    pub fn neg(&self) -> Self {
        HalfLaurent { terms: self.terms.iter().map(|&(e, c)| (e, -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        HalfLaurent { terms: self.terms.iter().map(|&(e, c)| (e, c * k)).collect() }
    }

    /// Multiplication by `q^{h/2}`.
    pub fn shift(&self, h: i64) -> Self {
        HalfLaurent { terms: self.terms.iter().map(|&(e, c)| (e + h, c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if let Some((h, c)) = o.as_monomial() {
            return self.shift(h).scale(c);
        }
        if let Some((h, c)) = self.as_monomial() {
            return o.shift(h).scale(c);
        }
        let mut v = Vec::with_capacity(self.terms.len() * o.terms.len());
        for &(e1, c1) in &self.terms {
            for &(e2, c2) in &o.terms {
                v.push((e1 + e2, c1 * c2));
            }
        }
        Self::from_terms(v)
    }

    /// `q^{1/2} ↦ q^{-1/2}`.
    pub fn bar(&self) -> Self {
        HalfLaurent { terms: self.terms.iter().rev().map(|&(e, c)| (-e, c)).collect() }
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    pub fn eval_at_one(&self) -> i64 {
        self.terms.iter().map(|t| t.1).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.iter().all(|t| t.1 > 0)
    }

    /// Exact quotient, or `None` when `o` does not divide `self`.
    pub fn div_exact(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        if let Some((h, c)) = o.as_monomial() {
            if self.terms.iter().all(|t| t.1 % c == 0) {
                return Some(HalfLaurent {
                    terms: self.terms.iter().map(|&(e, x)| (e - h, x / c)).collect(),
                });
            }
            return None;
        }
        let (lead_e, lead_c) = *o.terms.last().unwrap();
        let low_o = o.terms[0].0;
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some(&(e, c)) = rem.terms.last() {
            if c % lead_c != 0 || e - lead_e < rem.terms[0].0 - low_o {
                return None;
            }
            let t = HalfLaurent::term(e - lead_e, c / lead_c);
            quot.push((e - lead_e, c / lead_c));
            rem = rem.sub(&o.mul(&t));
        }
        Some(Self::from_terms(quot))
    }

    /// The q-number `(q_i^{-2u} - 1)/(q_i^{-2} - 1)` where `q_i = q^{d}`.
    pub fn screening_number(u: i64, d: i64) -> Self {
        match u.cmp(&0) {
            Ordering::Equal => Self::zero(),
            Ordering::Greater => Self::from_terms((0..u).map(|k| (-4 * d * k, 1))),
            Ordering::Less => Self::from_terms((1..=-u).map(|k| (4 * d * k, -1))),
        }
    }
}

fn fmt_exp(h: i64) -> String {
    if h % 2 == 0 {
        format!("{}", h / 2)
    } else {
        format!("{h}/2")
    }
}

impl fmt::Display for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, &(e, c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if k == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (e, a) {
                (0, a) => write!(f, "{a}")?,
                (2, 1) => write!(f, "q")?,
                (2, a) => write!(f, "{a}q")?,
                (e, 1) => write!(f, "q^{}", fmt_exp(e))?,
                (e, a) => write!(f, "{a}q^{}", fmt_exp(e))?,
            }
        }
        Ok(())
    }
}
