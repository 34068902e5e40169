//! The q-algorithm and the bases `F_q`, `E_q`, `L_q`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cartan::Folding;
use crate::error::{Error, Result};
use crate::laurent::HalfLaurent;
use crate::monomial::{Monomial, Site};
use crate::screening::apply_screening;
use crate::torus::{Torus, TorusElement};

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Budget from `QVGR_BUDGET`, falling back to [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> usize {
    std::env::var("QVGR_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Greedy decomposition of a multiset of spectral parameters into strings with step 2.
/// Longest strings come first; equal lengths are ordered by left endpoint.
pub fn string_decompose(params: &[i64]) -> Vec<(i64, i64)> {
    let mut count: BTreeMap<i64, usize> = BTreeMap::new();
    for &p in params {
        *count.entry(p).or_default() += 1;
    }
    let mut out = Vec::new();
    while !count.is_empty() {
        let mut best: Option<(i64, i64)> = None;
        for &a in count.keys() {
            let mut b = a;
            while count.contains_key(&(b + 2)) {
                b += 2;
            }
            if best.is_none_or(|(x, y)| b - a > y - x) {
                best = Some((a, b));
            }
        }
        let (a, b) = best.unwrap();
        let mut p = a;
        while p <= b {
            let c = count.get_mut(&p).unwrap();
            *c -= 1;
            if *c == 0 {
                count.remove(&p);
            }
            p += 2;
        }
        out.push((a, b));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub color: Site,
}

/// Monomials of `F_q(m)` with coefficients, joined by `B^{-1}_{i,p}` steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterGraph {
    pub root: Monomial,
    pub nodes: Vec<(Monomial, HalfLaurent)>,
    pub edges: Vec<GraphEdge>,
}

impl CharacterGraph {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph F {\n");
        for (k, (m, c)) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{k} [label=\"({c}) {m}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  n{} -> n{} [label=\"{},{}\"];", e.from, e.to, e.color.i, e.color.p);
        }
        s.push_str("}\n");
        s
    }
}

/// Dominant monomials of `E_q(m)` with the transition data of the three bases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlTable {
    /// `m_1, …, m_M = m`, from lowest to highest.
    pub dominant: Vec<Monomial>,
    /// Coefficient of `F_q(m_k)` in `E_q(m)`.
    pub e_in_f: Vec<HalfLaurent>,
    /// Coefficient of `F_q(m_k)` in `L_q(m)`.
    pub l_in_f: Vec<HalfLaurent>,
    /// `P_{m, m_k}(q)`, the coefficient of `L_q(m_k)` in `E_q(m)`.
    pub p: Vec<HalfLaurent>,
}

#[derive(Debug, Clone, Default)]
struct NodeData {
    level: i64,
    s: HalfLaurent,
    s_i: Vec<HalfLaurent>,
}

/// Engine state: the torus and memo tables.
pub struct Characters {
    torus: Torus,
    budget: usize,
    fi_cache: HashMap<(usize, Monomial), TorusElement>,
    fq_cache: HashMap<Monomial, TorusElement>,
    lq_cache: HashMap<Monomial, (TorusElement, KlTable)>,
}

/// Shift bringing the lowest spectral parameter to 0 or 1.
fn normal_shift(m: &Monomial) -> i64 {
    match m.min_p() {
        Some(p) => -(p - p.rem_euclid(2)),
        None => 0,
    }
}

impl Characters {
    pub fn new(torus: Torus) -> Self {
        Self::with_budget(torus, budget_from_env())
    }

    pub fn with_budget(torus: Torus, budget: usize) -> Self {
        Characters {
            torus,
            budget,
            fi_cache: HashMap::new(),
            fq_cache: HashMap::new(),
            lq_cache: HashMap::new(),
        }
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    fn check_lattice(&self, m: &Monomial) -> Result<()> {
        m.check_nodes(self.torus.cartan())?;
        if m.parity_class(self.torus.cartan()).is_none() {
            return Err(Error::Parity(m.to_string()));
        }
        Ok(())
    }

    /// The sl2 string character of `X_{i,a} X_{i,a+2} ⋯ X_{i,b}`.
    fn string_character(&self, i: usize, a: i64, b: i64) -> TorusElement {
        let cd = self.torus.cartan();
        let mut m = Monomial::kr(i, a, b);
        let mut out = TorusElement::monomial(m.clone());
        let mut r = b + 1;
        while r >= a + 1 {
            m = m.div(&Monomial::b_var(cd, i, r));
            out.add_term(m.clone(), &HalfLaurent::one());
            r -= 2;
        }
        out
    }

    /// `F_i(ip)` for a monomial `ip` in the variables `X_{i,·}` only, positive powers.
    fn f_i_pure(&mut self, i: usize, ip: &Monomial) -> Result<TorusElement> {
        let r = normal_shift(ip);
        let key = (i, ip.shift(r));
        if let Some(x) = self.fi_cache.get(&key) {
            return x.spectral_shift(-r);
        }
        let params: Vec<i64> = key
            .1
            .exps()
            .iter()
            .flat_map(|&(s, e)| std::iter::repeat_n(s.p, e as usize))
            .collect();
        let mut acc = TorusElement::one();
        for (a, b) in string_decompose(&params) {
            acc = self.torus.mul(&acc, &self.string_character(i, a, b))?;
        }
        let lead = acc.coeff(&key.1);
        let (h, _) = lead.as_monomial().ok_or_else(|| Error::Kernel { i, detail: format!("leading coefficient {lead}") })?;
        acc = acc.q_shift(-h);
        loop {
            let next = acc
                .iter()
                .filter(|(m, _)| **m != key.1 && m.is_i_dominant(i))
                .max_by_key(|(m, _)| (m.node_degree(i), (*m).clone()))
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m2, c)) = next else { break };
            let f = self.f_iq(&m2, i)?;
            acc = acc.sub(&f.scale(&c));
        }
        let s = apply_screening(&self.torus, &acc, i)?;
        if let Some((r0, y)) = s.first_surviving() {
            return Err(Error::Kernel { i, detail: format!("F_{i}({}) leaves {y} on s[{i},{r0}]", key.1) });
        }
        self.fi_cache.insert(key, acc.clone());
        acc.spectral_shift(-r)
    }

    /// `F_{i,q}(underline(m))` for an `i`-dominant monomial.
    pub fn f_iq(&mut self, m: &Monomial, i: usize) -> Result<TorusElement> {
        self.torus.cartan().check_node(i)?;
        if !m.is_i_dominant(i) {
            return Err(Error::NotIDominant { monomial: m.to_string(), i });
        }
        let (ip, c) = m.split_node(i);
        if ip.is_one() {
            return Ok(TorusElement::monomial(m.clone()));
        }
        let f = self.f_i_pure(i, &ip)?;
        let n = self.torus.pairing(&c, &ip)?;
        Ok(self.torus.mul_monomial_left(&c, &f)?.q_shift(-n))
    }

    /// `F_q(underline(m))` with its colored graph.
    pub fn compute_fq_graph(&mut self, m: &Monomial) -> Result<(TorusElement, CharacterGraph)> {
        let f = self.compute_fq(m)?;
        let g = self.graph_of(m, &f);
        Ok((f, g))
    }

    pub fn compute_fq(&mut self, m: &Monomial) -> Result<TorusElement> {
        if !m.is_dominant() {
            return Err(Error::NotDominant(m.to_string()));
        }
        self.check_lattice(m)?;
        let r = normal_shift(m);
        let key = m.shift(r);
        if let Some(x) = self.fq_cache.get(&key) {
            return x.spectral_shift(-r);
        }
        let f = self.q_algorithm(&key)?;
        self.fq_cache.insert(key, f.clone());
        f.spectral_shift(-r)
    }

    fn q_algorithm(&mut self, root: &Monomial) -> Result<TorusElement> {
        let n = self.torus.cartan().rank();
        let unit = self.torus.level_unit();
        let mut data: HashMap<Monomial, NodeData> = HashMap::new();
        let mut by_level: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
        data.insert(root.clone(), NodeData { level: 0, s: HalfLaurent::zero(), s_i: vec![HalfLaurent::zero(); n] });
        by_level.entry(0).or_default().push(root.clone());
        let mut out = TorusElement::zero();
        while let Some((&lvl, _)) = by_level.iter().next() {
            let mut ms = by_level.remove(&lvl).unwrap();
            ms.sort();
            ms.reverse();
            for m in ms {
                let nd = data.get(&m).cloned().unwrap();
                let s = if m == *root {
                    HalfLaurent::one()
                } else if m.is_dominant() {
                    HalfLaurent::zero()
                } else {
                    let mut val: Option<HalfLaurent> = None;
                    for i in 1..=n {
                        if !m.is_i_dominant(i) {
                            let x = &nd.s_i[i - 1];
                            match &val {
                                None => val = Some(x.clone()),
                                Some(v) if v != x => {
                                    return Err(Error::Inconsistent(format!("{m}: {v} vs {x} (node {i})")));
                                }
                                _ => {}
                            }
                        }
                    }
                    val.unwrap()
                };
                if !s.is_zero() {
                    out.add_term(m.clone(), &s);
                }
                data.get_mut(&m).unwrap().s = s.clone();
                for i in 1..=n {
                    if !m.is_i_dominant(i) || !m.has_node(i) {
                        continue;
                    }
                    let t = s.sub(&nd.s_i[i - 1]);
                    if t.is_zero() {
                        continue;
                    }
                    let f = self.f_iq(&m, i)?;
                    for (m2, c) in f.iter() {
                        if *m2 == m {
                            continue;
                        }
                        let entry = match data.get_mut(m2) {
                            Some(e) => e,
                            None => {
                                if data.len() >= self.budget {
                                    return Err(Error::Budget(self.budget));
                                }
                                let l = self.torus.level(root, m2) / unit;
                                by_level.entry(l).or_default().push(m2.clone());
                                data.entry(m2.clone()).or_insert(NodeData {
                                    level: l,
                                    s: HalfLaurent::zero(),
                                    s_i: vec![HalfLaurent::zero(); n],
                                })
                            }
                        };
                        debug_assert!(entry.level > lvl);
                        entry.s_i[i - 1].add_assign(&t.mul(c));
                    }
                }
            }
        }
        Ok(out)
    }

    fn graph_of(&self, root: &Monomial, f: &TorusElement) -> CharacterGraph {
        let cd = self.torus.cartan();
        let mut nodes: Vec<(Monomial, HalfLaurent)> = f.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        nodes.sort_by_key(|(m, _)| (self.torus.level(root, m), std::cmp::Reverse(m.clone())));
        let index: HashMap<&Monomial, usize> = nodes.iter().enumerate().map(|(k, (m, _))| (m, k)).collect();
        let mut edges = Vec::new();
        for (k, (m, _)) in nodes.iter().enumerate() {
            for i in cd.nodes() {
                let Some(r) = lowering_position(m, i) else { continue };
                let m2 = m.div(&Monomial::b_var(cd, i, r + 1));
                if let Some(&to) = index.get(&m2) {
                    edges.push(GraphEdge { from: k, to, color: Site::new(i, r + 1) });
                }
            }
        }
        CharacterGraph { root: root.clone(), nodes, edges }
    }

    /// `F_q(underline(m^{(i)}[p,s]))`.
    pub fn compute_fq_kr(&mut self, i: usize, p: i64, s: i64) -> Result<TorusElement> {
        self.torus.cartan().check_node(i)?;
        if s < p || (s - p) % 2 != 0 {
            return Err(Error::Parse(format!("invalid KR window [{p},{s}] for node {i}")));
        }
        self.compute_fq(&Monomial::kr(i, p, s))
    }

    /// `E_q(m)`: ordered product of fundamentals over increasing `p`, normalized.
    pub fn compute_eq(&mut self, m: &Monomial) -> Result<TorusElement> {
        if !m.is_dominant() {
            return Err(Error::NotDominant(m.to_string()));
        }
        self.check_lattice(m)?;
        let mut acc = TorusElement::one();
        for &(s, e) in m.exps() {
            let f = self.compute_fq(&Monomial::x(s.i, s.p))?;
            for _ in 0..e {
                acc = self.torus.mul(&acc, &f)?;
            }
        }
        let lead = acc.coeff(m);
        let (h, c) = lead
            .as_monomial()
            .ok_or_else(|| Error::Inconsistent(format!("E_q leading coefficient {lead}")))?;
        if c != 1 {
            return Err(Error::Inconsistent(format!("E_q leading coefficient {lead}")));
        }
        Ok(acc.q_shift(-h))
    }

    /// `L_q(m)` with its table of Kazhdan–Lusztig coefficients.
    pub fn compute_lq(&mut self, m: &Monomial) -> Result<(TorusElement, KlTable)> {
        if let Some(x) = self.lq_cache.get(m) {
            return Ok(x.clone());
        }
        let e = self.compute_eq(m)?;
        let mut x = e.clone();
        let mut done: Vec<Monomial> = Vec::new();
        let mut ps: Vec<(Monomial, HalfLaurent)> = Vec::new();
        loop {
            let next = x
                .iter()
                .filter(|(d, _)| d.is_dominant() && *d != m && !done.contains(d))
                .min_by_key(|(d, _)| (self.torus.level(m, d), std::cmp::Reverse((*d).clone())))
                .map(|(d, c)| (d.clone(), c.clone()));
            let Some((d, xc)) = next else { break };
            if done.len() >= self.budget {
                return Err(Error::Budget(self.budget));
            }
            let mut pk = Vec::new();
            for &(h, c) in xc.terms() {
                if h % 2 != 0 {
                    return Err(Error::NonIntegral(d.to_string()));
                }
                if h > 0 {
                    pk.push((h, c - xc.coeff(-h)));
                }
            }
            let p = HalfLaurent::from_terms(pk);
            if !p.is_zero() {
                let (ld, _) = self.compute_lq(&d)?;
                x = x.sub(&ld.scale(&p));
            }
            done.push(d.clone());
            ps.push((d, p));
        }
        let mut dominant: Vec<Monomial> = ps.iter().map(|t| t.0.clone()).collect();
        dominant.reverse();
        dominant.push(m.clone());
        let mut pcol: Vec<HalfLaurent> = ps.into_iter().map(|t| t.1).collect();
        pcol.reverse();
        pcol.push(HalfLaurent::one());
        let table = KlTable {
            e_in_f: dominant.iter().map(|d| e.coeff(d)).collect(),
            l_in_f: dominant.iter().map(|d| x.coeff(d)).collect(),
            p: pcol,
            dominant,
        };
        self.lq_cache.insert(m.clone(), (x.clone(), table.clone()));
        Ok((x, table))
    }

    /// Expands an element of the ring in the `F_q` basis by peeling dominant monomials.
    pub fn expand_in_f(&mut self, a: &TorusElement) -> Result<Vec<(Monomial, HalfLaurent)>> {
        let mut x = a.clone();
        let mut out = Vec::new();
        while let Some(d) = x.dominant_monomials().into_iter().max() {
            let c = x.coeff(&d);
            let f = self.compute_fq(&d)?;
            x = x.sub(&f.scale(&c));
            out.push((d, c));
            if out.len() > self.budget {
                return Err(Error::Budget(self.budget));
            }
        }
        if !x.is_zero() {
            return Err(Error::Inconsistent(format!("{} terms left without dominant monomial", x.len())));
        }
        Ok(out)
    }
}

/// Rightmost `X_{i,r}` left unmatched after cancelling each negative factor
/// against the next positive factor to its right.
fn lowering_position(m: &Monomial, i: usize) -> Option<i64> {
    let mut pending = 0i64;
    let mut free: Vec<(i64, i64)> = Vec::new();
    for &(s, e) in m.exps().iter().filter(|t| t.0.i == i) {
        if e < 0 {
            pending += -e;
        } else {
            let used = pending.min(e);
            pending -= used;
            if e > used {
                free.push((s.p, e - used));
            }
        }
    }
    free.last().map(|t| t.0)
}

/// Monomials of `F` over the unfolded type, folded with multiplicity at `q = 1`,
/// against the folded type's `F` at `q = 1`.
pub fn fold_check(
    unfolded: &mut Characters,
    folded: &mut Characters,
    folding: &Folding,
    m: &Monomial,
) -> Result<FoldReport> {
    let up = unfolded.compute_fq(m)?;
    let mut pushed: BTreeMap<Monomial, i64> = BTreeMap::new();
    for (x, c) in up.eval_q1() {
        *pushed.entry(x.fold(folding)).or_default() += c;
    }
    pushed.retain(|_, c| *c != 0);
    let down = folded.compute_fq(&m.fold(folding))?.eval_q1();
    Ok(FoldReport { unfolded_terms: up.len(), folded: pushed.clone(), target: down.clone(), equal: pushed == down })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldReport {
    pub unfolded_terms: usize,
    pub folded: BTreeMap<Monomial, i64>,
    pub target: BTreeMap<Monomial, i64>,
    pub equal: bool,
}

/// Monomials whose coefficients are not in `Z_{≥0}[q^{±1/2}]`.
pub fn positivity_probe(a: &TorusElement) -> Vec<(Monomial, HalfLaurent)> {
    a.negative_coefficients()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strings() {
        assert_eq!(string_decompose(&[6, 8]), vec![(6, 8)]);
        assert_eq!(string_decompose(&[6, 6, 6]), vec![(6, 6); 3]);
        assert_eq!(string_decompose(&[0, 2, 2, 4]), vec![(0, 4), (2, 2)]);
        assert_eq!(string_decompose(&[]), vec![]);
    }
}
