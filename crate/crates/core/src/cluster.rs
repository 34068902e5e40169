//! Exchange matrices, valued quivers, compatible pairs and quantum seeds on
//! finite windows of the repetition lattice.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cartan::{CartanData, FiniteType, HeightFunction};
use crate::characters::Characters;
use crate::error::{Error, Result};
use crate::monomial::{Monomial, Site};
use crate::tcartan::default_bound;
use crate::torus::{Torus, TorusElement};

/// A `K × K` integer matrix with a frozen/exchangeable split; columns of
/// frozen vertices are kept at zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix {
    b: Vec<Vec<i64>>,
    frozen: Vec<bool>,
}

impl ExchangeMatrix {
    pub fn new(mut b: Vec<Vec<i64>>, frozen: Vec<bool>) -> Result<Self> {
        let n = frozen.len();
        if b.len() != n || b.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("exchange matrix must be {n} x {n}")));
        }
        for row in b.iter_mut() {
            for (j, x) in row.iter_mut().enumerate() {
                if frozen[j] {
                    *x = 0;
                }
            }
        }
        Ok(ExchangeMatrix { b, frozen })
    }

    /// From a `K × K_ex` matrix whose columns are the vertices `ex` in order.
    pub fn from_columns(rows: &[Vec<i64>], ex: &[usize]) -> Result<Self> {
        let n = rows.len();
        let mut frozen = vec![true; n];
        let mut b = vec![vec![0; n]; n];
        for (c, &k) in ex.iter().enumerate() {
            if k >= n {
                return Err(Error::UnknownVertex(k.to_string()));
            }
            frozen[k] = false;
            for (i, row) in rows.iter().enumerate() {
                b[i][k] = *row.get(c).ok_or_else(|| Error::Parse(format!("row {i} too short")))?;
            }
        }
        Ok(ExchangeMatrix { b, frozen })
    }

    pub fn len(&self) -> usize {
        self.frozen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frozen.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.b[i][j]
    }

    pub fn is_frozen(&self, k: usize) -> bool {
        self.frozen[k]
    }

    pub fn frozen(&self) -> &[bool] {
        &self.frozen
    }

    pub fn exchangeable(&self) -> Vec<usize> {
        (0..self.len()).filter(|&k| !self.frozen[k]).collect()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.b
    }

    /// The `K × K_ex` block.
    pub fn columns(&self) -> Vec<Vec<i64>> {
        let ex = self.exchangeable();
        self.b.iter().map(|r| ex.iter().map(|&j| r[j]).collect()).collect()
    }

    pub fn check_skew_symmetrizer(&self, t: &[i64]) -> bool {
        let ex = self.exchangeable();
        ex.iter().all(|&i| ex.iter().all(|&j| t[i] * self.b[i][j] == -t[j] * self.b[j][i]))
    }

    fn check_mutable(&self, k: usize) -> Result<()> {
        if k >= self.len() {
            return Err(Error::UnknownVertex(k.to_string()));
        }
        if self.frozen[k] {
            return Err(Error::Frozen(k.to_string()));
        }
        Ok(())
    }

    pub fn mutate(&self, k: usize) -> Result<Self> {
        self.check_mutable(k)?;
        let n = self.len();
        let mut b = self.b.clone();
        for i in 0..n {
            for j in 0..n {
                if self.frozen[j] {
                    continue;
                }
                b[i][j] = if i == k || j == k {
                    -self.b[i][j]
                } else {
                    let (x, y) = (self.b[i][k], self.b[k][j]);
                    let t = x.checked_mul(y).ok_or(Error::Overflow("matrix mutation"))?.max(0);
                    self.b[i][j].checked_add(x.signum() * t).ok_or(Error::Overflow("matrix mutation"))?
                };
            }
        }
        Ok(ExchangeMatrix { b, frozen: self.frozen.clone() })
    }
}

/// Arrow values `⌜a,b⌟` keyed by `(tail, head)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedQuiver {
    frozen: Vec<bool>,
    arrows: BTreeMap<(usize, usize), (i64, i64)>,
}

impl ValuedQuiver {
    pub fn from_matrix(m: &ExchangeMatrix) -> Self {
        let n = m.len();
        let mut arrows = BTreeMap::new();
        for k in 0..n {
            for l in 0..n {
                if k == l || (m.frozen[k] && m.frozen[l]) {
                    continue;
                }
                let (a, b) = (m.b[k][l], m.b[l][k]);
                let out = a > 0 || (a == 0 && b < 0);
                if out {
                    arrows.insert((k, l), (a, b));
                }
            }
        }
        ValuedQuiver { frozen: m.frozen.clone(), arrows }
    }

    pub fn to_matrix(&self) -> ExchangeMatrix {
        let n = self.frozen.len();
        let mut b = vec![vec![0; n]; n];
        for (&(k, l), &(a, c)) in &self.arrows {
            if !self.frozen[l] {
                b[k][l] = a;
            }
            if !self.frozen[k] {
                b[l][k] = c;
            }
        }
        ExchangeMatrix { b, frozen: self.frozen.clone() }
    }

    pub fn arrows(&self) -> &BTreeMap<(usize, usize), (i64, i64)> {
        &self.arrows
    }

    pub fn arrow(&self, k: usize, l: usize) -> Option<(i64, i64)> {
        self.arrows.get(&(k, l)).copied()
    }

    /// Applies the rules (NC), (C) and (R) at `k`.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        if k >= self.frozen.len() {
            return Err(Error::UnknownVertex(k.to_string()));
        }
        if self.frozen[k] {
            return Err(Error::Frozen(k.to_string()));
        }
        let ins: Vec<(usize, (i64, i64))> =
            self.arrows.iter().filter(|((_, h), _)| *h == k).map(|(&(t, _), &v)| (t, v)).collect();
        let outs: Vec<(usize, (i64, i64))> =
            self.arrows.iter().filter(|((t, _), _)| *t == k).map(|(&(_, h), &v)| (h, v)).collect();
        let mut arrows = self.arrows.clone();
        for &(i, (a, b)) in &ins {
            for &(j, (c, d)) in &outs {
                if i == j || (self.frozen[i] && self.frozen[j]) || (a * c <= 0 && b * d <= 0) {
                    continue;
                }
                if let Some((e, f)) = arrows.remove(&(j, i)) {
                    let (x, y) = (f + a * c, e - b * d);
                    if x <= 0 && 0 <= y {
                        if (x, y) != (0, 0) {
                            arrows.insert((j, i), (y, x));
                        }
                    } else if x >= 0 && 0 >= y {
                        arrows.insert((i, j), (x, y));
                    } else {
                        return Err(Error::Inconsistent(format!("arrow between {i} and {j}")));
                    }
                } else {
                    let (e, f) = arrows.remove(&(i, j)).unwrap_or((0, 0));
                    arrows.insert((i, j), (e + a * c, f - b * d));
                }
            }
        }
        for &(i, (a, b)) in &ins {
            arrows.remove(&(i, k));
            arrows.insert((k, i), (-b, -a));
        }
        for &(j, (a, b)) in &outs {
            arrows.remove(&(k, j));
            arrows.insert((j, k), (-b, -a));
        }
        Ok(ValuedQuiver { frozen: self.frozen.clone(), arrows })
    }

    /// Graphviz rendering with edge labels `"a,b"`.
    pub fn to_dot(&self, labels: &[String]) -> String {
        let mut s = String::from("digraph Q {\n");
        for (k, l) in labels.iter().enumerate() {
            let shape = if self.frozen[k] { "box" } else { "ellipse" };
            let _ = writeln!(s, "  v{k} [label=\"{l}\", shape={shape}];");
        }
        for (&(k, l), &(a, b)) in &self.arrows {
            let _ = writeln!(s, "  v{k} -> v{l} [label=\"{a},{b}\"];");
        }
        s.push_str("}\n");
        s
    }
}

/// `μ_k(L) = Eᵀ L E`, `μ_k(B̃)` by matrix mutation.
pub fn mutate_pair(lambda: &[Vec<i64>], b: &ExchangeMatrix, k: usize) -> Result<(Vec<Vec<i64>>, ExchangeMatrix)> {
    let b2 = b.mutate(k)?;
    let n = b.len();
    let e: Vec<i64> = (0..n).map(|i| if i == k { -1 } else { (-b.get(i, k)).max(0) }).collect();
    let dot = |f: &dyn Fn(usize) -> (i64, i64)| -> Result<i64> {
        (0..n).try_fold(0i64, |acc, l| {
            let (x, y) = f(l);
            x.checked_mul(y).and_then(|t| acc.checked_add(t)).ok_or(Error::Overflow("Λ mutation"))
        })
    };
    let mut le: Vec<Vec<i64>> = lambda.to_vec();
    for (i, row) in le.iter_mut().enumerate() {
        row[k] = dot(&|l| (lambda[i][l], e[l]))?;
    }
    let mut out = le.clone();
    for j in 0..n {
        out[k][j] = dot(&|l| (e[l], le[l][j]))?;
    }
    Ok((out, b2))
}

/// Entries of `Σ_k b_{k,i} λ_{k,j} - δ_{i,j} d_i` that do not vanish, for exchangeable `i`.
pub fn compatibility_defects(lambda: &[Vec<i64>], b: &ExchangeMatrix, d: &[i64]) -> Vec<(usize, usize, i128)> {
    let n = b.len();
    let mut out = Vec::new();
    for i in b.exchangeable() {
        for j in 0..n {
            let s: i128 = (0..n).map(|k| i128::from(b.get(k, i)) * i128::from(lambda[k][j])).sum();
            let want = if i == j { i128::from(d[i]) } else { 0 };
            if s != want {
                out.push((i, j, s - want));
            }
        }
    }
    out
}

/// How the cluster variables of a lattice seed are materialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariableMode {
    /// KR polynomials `F_q(m)`.
    Kr,
    /// The KR monomials themselves, i.e. the truncations of `F_q(m)` when `m` lies below `ξ`.
    Truncated,
}

/// A quantum seed whose vertices are lattice sites.
#[derive(Debug, Clone)]
pub struct QuantumSeed {
    torus: Torus,
    vertices: Vec<Site>,
    index: HashMap<Site, usize>,
    lambda: Vec<Vec<i64>>,
    exchange: ExchangeMatrix,
    cluster: Vec<TorusElement>,
}

impl QuantumSeed {
    pub fn new(
        torus: Torus,
        vertices: Vec<Site>,
        lambda: Vec<Vec<i64>>,
        exchange: ExchangeMatrix,
        cluster: Vec<TorusElement>,
    ) -> Result<Self> {
        let n = vertices.len();
        if lambda.len() != n || lambda.iter().any(|r| r.len() != n) || exchange.len() != n || cluster.len() != n {
            return Err(Error::Parse("seed components have mismatched sizes".into()));
        }
        for v in &vertices {
            torus.cartan().check_node(v.i)?;
        }
        let index = vertices.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        Ok(QuantumSeed { torus, vertices, index, lambda, exchange, cluster })
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn vertices(&self) -> &[Site] {
        &self.vertices
    }

    pub fn index_of(&self, v: Site) -> Result<usize> {
        self.index.get(&v).copied().ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub fn contains(&self, v: Site) -> bool {
        self.index.contains_key(&v)
    }

    pub fn lambda(&self) -> &[Vec<i64>] {
        &self.lambda
    }

    pub fn exchange(&self) -> &ExchangeMatrix {
        &self.exchange
    }

    pub fn cluster(&self) -> &[TorusElement] {
        &self.cluster
    }

    pub fn variable(&self, v: Site) -> Result<&TorusElement> {
        Ok(&self.cluster[self.index_of(v)?])
    }

    pub fn is_frozen(&self, v: Site) -> Result<bool> {
        Ok(self.exchange.is_frozen(self.index_of(v)?))
    }

    pub fn b(&self, x: Site, y: Site) -> Result<i64> {
        Ok(self.exchange.get(self.index_of(x)?, self.index_of(y)?))
    }

    /// `2d_i` at each vertex.
    pub fn diagonal(&self) -> Vec<i64> {
        self.vertices.iter().map(|v| 2 * self.torus.cartan().d(v.i)).collect()
    }

    pub fn quiver(&self) -> ValuedQuiver {
        ValuedQuiver::from_matrix(&self.exchange)
    }

    pub fn labels(&self) -> Vec<String> {
        self.vertices.iter().map(Site::to_string).collect()
    }

    pub fn compatibility_defects(&self) -> Vec<(Site, Site, i128)> {
        compatibility_defects(&self.lambda, &self.exchange, &self.diagonal())
            .into_iter()
            .map(|(i, j, x)| (self.vertices[i], self.vertices[j], x))
            .collect()
    }

    pub fn is_compatible(&self) -> bool {
        self.compatibility_defects().is_empty()
    }

    /// Pairs `(k,l)` with `z_k * z_l != q^{λ_{k,l}} z_l * z_k`, restricted to `which`.
    pub fn commutation_failures(&self, which: &[Site]) -> Result<Vec<(Site, Site)>> {
        let mut out = Vec::new();
        for (a, &x) in which.iter().enumerate() {
            for &y in &which[a + 1..] {
                let (k, l) = (self.index_of(x)?, self.index_of(y)?);
                let lhs = self.torus.mul(&self.cluster[k], &self.cluster[l])?;
                let rhs = self.torus.mul(&self.cluster[l], &self.cluster[k])?.q_shift(2 * self.lambda[k][l]);
                if lhs != rhs {
                    out.push((x, y));
                }
            }
        }
        Ok(out)
    }

    /// `z_k * Z^a` for an exponent vector with `a_k = -1` and `a_j >= 0` elsewhere.
    fn shifted_monomial(&self, k: usize, a: &[i64]) -> Result<TorusElement> {
        let others: Vec<usize> = (0..a.len()).filter(|&j| j != k && a[j] > 0).collect();
        let mut e = 0;
        for &u in &others {
            e += a[u] * a[k] * self.lambda[u][k];
        }
        for (x, &i) in others.iter().enumerate() {
            for &j in &others[..x] {
                e += a[i] * a[j] * self.lambda[i][j];
            }
        }
        let mut acc = TorusElement::one();
        for &j in &others {
            for _ in 0..a[j] {
                acc = self.torus.mul(&acc, &self.cluster[j])?;
            }
        }
        Ok(acc.q_shift(e))
    }

    /// Whether the variable at `v` is known; pair-only mutations forget it.
    pub fn is_materialized(&self, v: Site) -> Result<bool> {
        Ok(!self.cluster[self.index_of(v)?].is_zero())
    }

    pub fn mutate(&self, k: usize) -> Result<QuantumSeed> {
        let (lambda, exchange) = mutate_pair(&self.lambda, &self.exchange, k)?;
        let n = self.vertices.len();
        for j in (0..n).filter(|&j| j == k || self.exchange.get(j, k) != 0) {
            if self.cluster[j].is_zero() {
                return Err(Error::Missing(self.vertices[j].to_string()));
            }
        }
        let mut rhs = TorusElement::zero();
        for sign in [1, -1] {
            let a: Vec<i64> =
                (0..n).map(|j| if j == k { -1 } else { (sign * self.exchange.get(j, k)).max(0) }).collect();
            rhs.add_assign(&self.shifted_monomial(k, &a)?);
        }
        let new = left_divide(&self.torus, &self.cluster[k], &rhs)
            .map_err(|e| Error::Division(format!("at {}: {e}", self.vertices[k])))?;
        let mut cluster = self.cluster.clone();
        cluster[k] = new;
        Ok(QuantumSeed {
            torus: self.torus.clone(),
            vertices: self.vertices.clone(),
            index: self.index.clone(),
            lambda,
            exchange,
            cluster,
        })
    }

    pub fn mutate_at(&self, v: Site) -> Result<QuantumSeed> {
        self.mutate(self.index_of(v)?)
    }

    pub fn mutate_seq(&self, seq: &[Site]) -> Result<QuantumSeed> {
        let mut s = self.clone();
        for &v in seq {
            s = s.mutate_at(v)?;
        }
        Ok(s)
    }

    /// Mutation of `(Λ, B̃)` only; the variable at `v` becomes unknown.
    pub fn mutate_pair_at(&self, v: Site) -> Result<QuantumSeed> {
        let k = self.index_of(v)?;
        let (lambda, exchange) = mutate_pair(&self.lambda, &self.exchange, k)?;
        let mut cluster = self.cluster.clone();
        cluster[k] = TorusElement::zero();
        Ok(QuantumSeed { lambda, exchange, cluster, ..self.clone() })
    }

    /// Applies `( )_{≤ξ}` to every variable.
    pub fn truncate_cluster(&self, xi: &HeightFunction) -> QuantumSeed {
        let cluster = self.cluster.iter().map(|z| z.truncate_le_xi(xi)).collect();
        QuantumSeed { cluster, ..self.clone() }
    }

    /// Full mutation at `v` when `materialize(v)`, pair-only otherwise.
    pub fn mutate_if(&self, v: Site, materialize: &dyn Fn(Site) -> bool) -> Result<QuantumSeed> {
        if materialize(v) {
            self.mutate_at(v)
        } else {
            self.mutate_pair_at(v)
        }
    }

    pub fn to_json(&self) -> SeedJson {
        let ex = self.exchange.exchangeable();
        SeedJson {
            ty: self.torus.cartan().ty.to_string(),
            bound: self.torus.table().bound(),
            vertices: self.vertices.clone(),
            frozen: (0..self.vertices.len()).filter(|&k| self.exchange.is_frozen(k)).map(|k| self.vertices[k]).collect(),
            lambda: self.lambda.clone(),
            exchange: self.exchange.rows().iter().map(|r| ex.iter().map(|&j| r[j]).collect()).collect(),
            variables: self.cluster.clone(),
        }
    }

    pub fn from_json(j: &SeedJson) -> Result<QuantumSeed> {
        let ty: FiniteType = j.ty.parse()?;
        let torus = Torus::with_bound(ty, j.bound)?;
        let ex: Vec<usize> = (0..j.vertices.len()).filter(|k| !j.frozen.contains(&j.vertices[*k])).collect();
        let exchange = ExchangeMatrix::from_columns(&j.exchange, &ex)?;
        QuantumSeed::new(torus, j.vertices.clone(), j.lambda.clone(), exchange, j.variables.clone())
    }
}

/// Wire format of a seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedJson {
    #[serde(rename = "type")]
    pub ty: String,
    pub bound: i64,
    pub vertices: Vec<Site>,
    pub frozen: Vec<Site>,
    pub lambda: Vec<Vec<i64>>,
    /// Rows indexed by `vertices`, columns by the exchangeable vertices in order.
    pub exchange: Vec<Vec<i64>>,
    pub variables: Vec<TorusElement>,
}

/// Solves `z * y = n` for `y` by eliminating leading terms.
pub fn left_divide(t: &Torus, z: &TorusElement, n: &TorusElement) -> Result<TorusElement> {
    let (m0, d) = match z.leading() {
        Some((m, c)) => (m.clone(), c.clone()),
        None => return Err(Error::Division("division by zero".into())),
    };
    let mut lo: BTreeMap<Site, i64> = BTreeMap::new();
    let mut hi: BTreeMap<Site, i64> = BTreeMap::new();
    {
        let mut nb: BTreeMap<Site, (i64, i64)> = BTreeMap::new();
        let mut zb: BTreeMap<Site, (i64, i64)> = BTreeMap::new();
        exponent_box(n, &mut nb);
        exponent_box(z, &mut zb);
        for (s, &(a, b)) in &nb {
            let (c, e) = zb.get(s).copied().unwrap_or((0, 0));
            lo.insert(*s, a - e);
            hi.insert(*s, b - c);
        }
        for (s, &(c, e)) in &zb {
            if !nb.contains_key(s) {
                lo.insert(*s, -e);
                hi.insert(*s, -c);
            }
        }
    }
    let inside = |u: &Monomial| {
        u.exps().iter().all(|(s, x)| lo.get(s).is_some_and(|&l| l <= *x && *x <= hi[s]))
            && lo.iter().all(|(s, &l)| l <= u.get(s.i, s.p) && u.get(s.i, s.p) <= hi[s])
    };
    let mut rem = n.clone();
    let mut quot = TorusElement::zero();
    while let Some((m, c)) = rem.leading() {
        let u = m.div(&m0);
        if !inside(&u) {
            return Err(Error::Division(format!("residue with leading monomial {m}")));
        }
        let c = c.div_exact(&d).ok_or_else(|| Error::Division(format!("coefficient at {m}")))?;
        let c = c.shift(-t.pairing(&m0, &u)?);
        let piece = t.mul_monomial_right(z, &u)?;
        for (pm, pc) in piece.iter() {
            rem.add_term(pm.clone(), &pc.mul(&c).neg());
        }
        quot.add_term(u, &c);
    }
    Ok(quot)
}

fn exponent_box(a: &TorusElement, out: &mut BTreeMap<Site, (i64, i64)>) {
    let sites: Vec<Site> = {
        let mut v: Vec<Site> = a.monomials().flat_map(|m| m.exps().iter().map(|e| e.0)).collect();
        v.sort();
        v.dedup();
        v
    };
    for s in sites {
        let (mut lo, mut hi) = (i64::MAX, i64::MIN);
        for m in a.monomials() {
            let x = m.get(s.i, s.p);
            lo = lo.min(x);
            hi = hi.max(x);
        }
        out.insert(s, (lo, hi));
    }
}

/// A torus whose pairing table covers every window of the given depth and
/// `extra` further steps of spectral shift.
pub fn window_torus(ty: FiniteType, depth: usize, extra: usize) -> Result<Torus> {
    let cd = CartanData::new(ty);
    let bound = default_bound(&cd) + 4 * (depth + extra) as i64 + 4;
    Torus::with_bound(ty, bound)
}

/// Sites `(i,p)` with `ξ_i - 2(depth-1) <= p <= ξ_i`, ordered by `p` descending then `i`.
pub fn window_sites(cd: &CartanData, xi: &HeightFunction, depth: usize) -> Vec<Site> {
    let mut v = Vec::new();
    for i in cd.nodes() {
        for r in 0..depth as i64 {
            v.push(Site::new(i, xi.get(i) - 2 * r));
        }
    }
    v.sort_by_key(|s| (std::cmp::Reverse(s.p), s.i));
    v
}

fn check_depth(depth: usize) -> Result<()> {
    if depth < 2 {
        return Err(Error::Window(format!("depth {depth} < 2")));
    }
    Ok(())
}

/// Entry of the ξ-matrix between two lattice sites.
pub fn xi_entry(cd: &CartanData, x: Site, y: Site) -> i64 {
    let sign = if y.p > x.p { -1 } else { 1 };
    let g = (x.p - y.p).abs();
    if g == 1 && x.i != y.i {
        sign * cd.c(x.i, y.i)
    } else if g == 2 && x.i == y.i {
        sign
    } else {
        0
    }
}

/// Entry of the sink-source matrix at level `s`.
pub fn sink_source_entry(cd: &CartanData, s: i64, x: Site, y: Site) -> i64 {
    let xi = HeightFunction::standard(cd, s);
    let top = xi.get(x.i) == s;
    let same = (x.p - xi.get(x.i)).rem_euclid(4) == 0;
    let (p, t) = (x.p, y.p);
    if x.i != y.i {
        if cd.c(x.i, y.i) == 0 {
            return 0;
        }
        let c = cd.c(x.i, y.i);
        match (t - p, top, same) {
            (1, false, true) | (-1, true, false) => -c,
            (-1, true, true) | (1, false, false) => c,
            _ => 0,
        }
    } else if (p - t).abs() == 2 {
        if top == same {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

/// `(o, o + 2l)` of the KR window carried by `(i,p)` in the sink-source seed.
pub fn sink_source_window(cd: &CartanData, s: i64, v: Site) -> (i64, i64) {
    let xi = HeightFunction::standard(cd, s).get(v.i);
    let l = (xi - v.p) / 2;
    let top = i64::from(xi == s);
    let o = xi - 2 * ((l + top).div_euclid(2));
    (o, o + 2 * l)
}

/// Whether `(i,p)` is vertically source and horizontally sink in the sink-source quiver.
pub fn is_plus_vertex(cd: &CartanData, s: i64, v: Site) -> bool {
    let xi = HeightFunction::standard(cd, s).get(v.i);
    let same = (v.p - xi).rem_euclid(4) == 0;
    if xi == s {
        !same
    } else {
        same
    }
}

fn lattice_seed(
    ch: &mut Characters,
    torus: Torus,
    sites: Vec<Site>,
    frozen: Vec<bool>,
    entry: impl Fn(Site, Site) -> i64,
    window: impl Fn(Site) -> (i64, i64),
    mode: VariableMode,
) -> Result<QuantumSeed> {
    let n = sites.len();
    let monos: Vec<Monomial> = sites
        .iter()
        .map(|v| {
            let (a, b) = window(*v);
            Monomial::kr(v.i, a, b)
        })
        .collect();
    let mut lambda = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            lambda[x][y] = torus.pairing(&monos[x], &monos[y])?;
        }
    }
    let b: Vec<Vec<i64>> = sites.iter().map(|&x| sites.iter().map(|&y| entry(x, y)).collect()).collect();
    let exchange = ExchangeMatrix::new(b, frozen)?;
    let cluster = match mode {
        VariableMode::Kr => {
            let mut v = Vec::with_capacity(n);
            for m in &monos {
                v.push(ch.compute_fq(m)?);
            }
            v
        }
        VariableMode::Truncated => {
            let mut v = Vec::with_capacity(n);
            for m in &monos {
                v.push(TorusElement::monomial(m.clone()));
            }
            v
        }
    };
    QuantumSeed::new(torus, sites, lambda, exchange, cluster)
}

/// The seed of a height function on a window of `depth` rows per node; the
/// deepest row is frozen.
pub fn build_xi_seed(ch: &mut Characters, xi: &HeightFunction, depth: usize, mode: VariableMode) -> Result<QuantumSeed> {
    check_depth(depth)?;
    let torus = ch.torus().clone();
    let cd = torus.cartan().clone();
    let sites = window_sites(&cd, xi, depth);
    let bottom = |v: &Site| v.p == xi.get(v.i) - 2 * (depth as i64 - 1);
    let frozen = sites.iter().map(bottom).collect();
    lattice_seed(
        ch,
        torus,
        sites,
        frozen,
        |x, y| xi_entry(&cd, x, y),
        |v| (v.p, xi.get(v.i)),
        mode,
    )
}

/// The sink-source seed at level `s` on a window of `depth` rows per node.
pub fn build_sink_source_seed(
    ch: &mut Characters,
    s: i64,
    depth: usize,
    mode: VariableMode,
) -> Result<QuantumSeed> {
    check_depth(depth)?;
    let torus = ch.torus().clone();
    let cd = torus.cartan().clone();
    let xi = HeightFunction::standard(&cd, s);
    let sites = window_sites(&cd, &xi, depth);
    let frozen = sites.iter().map(|v| v.p == xi.get(v.i) - 2 * (depth as i64 - 1)).collect();
    lattice_seed(
        ch,
        torus,
        sites,
        frozen,
        |x, y| sink_source_entry(&cd, s, x, y),
        |v| sink_source_window(&cd, s, v),
        mode,
    )
}

/// Callback deciding which mutations also compute the new variable.
pub type Materialize<'a> = &'a dyn Fn(Site) -> bool;

pub fn everywhere(_: Site) -> bool {
    true
}

pub fn nowhere(_: Site) -> bool {
    false
}

/// `⋯ ∘ μ_{(i,ξ_i-2)} ∘ μ_{(i,ξ_i)}` over the exchangeable vertices of node `i`;
/// returns the seed and `s_i ξ`.
pub fn forward_shift(
    seed: &QuantumSeed,
    i: usize,
    xi: &HeightFunction,
    materialize: Materialize,
) -> Result<(QuantumSeed, HeightFunction)> {
    let cd = seed.torus().cartan().clone();
    let next = xi.reflect(&cd, i)?;
    let mut s = seed.clone();
    let mut p = xi.get(i);
    while let Ok(k) = s.index_of(Site::new(i, p)) {
        if s.exchange.is_frozen(k) {
            break;
        }
        s = s.mutate_if(Site::new(i, p), materialize)?;
        p -= 2;
    }
    Ok((s, next))
}

/// Forward shifts along an adapted Coxeter word.
pub fn coxeter_mutation(
    seed: &QuantumSeed,
    xi: &HeightFunction,
    materialize: Materialize,
) -> Result<(QuantumSeed, HeightFunction)> {
    let cd = seed.torus().cartan().clone();
    let mut s = seed.clone();
    let mut h = xi.clone();
    for i in xi.adapted_coxeter_word(&cd) {
        (s, h) = forward_shift(&s, i, &h, materialize)?;
    }
    Ok((s, h))
}

/// Exchangeable vertices of the sink-source window in the `+` (or `-`) class.
pub fn extension_batch(seed: &QuantumSeed, s: i64, plus: bool) -> Vec<Site> {
    let cd = seed.torus().cartan();
    seed.vertices
        .iter()
        .enumerate()
        .filter(|(k, v)| !seed.exchange.is_frozen(*k) && is_plus_vertex(cd, s, **v) == plus)
        .map(|(_, v)| *v)
        .collect()
}

/// `μ_{⟨-∞,s⟩^±}` on a sink-source window seed at level `s`.
pub fn extension_step(seed: &QuantumSeed, s: i64, plus: bool, materialize: Materialize) -> Result<QuantumSeed> {
    let mut out = seed.clone();
    for v in extension_batch(seed, s, plus) {
        out = out.mutate_if(v, materialize)?;
    }
    Ok(out)
}

/// Vertex relabeling identifying `μ_{⟨-∞,s⟩^±}(𝔖_s)` with `𝔖_{s±1}`.
pub fn extension_relabel(cd: &CartanData, s: i64, plus: bool, v: Site) -> Site {
    let a = HeightFunction::standard(cd, s).get(v.i);
    let b = HeightFunction::standard(cd, if plus { s + 1 } else { s - 1 }).get(v.i);
    Site::new(v.i, v.p + b - a)
}

/// Alternating `+`/`-` batches starting at level `s`; each seed is relabeled
/// onto the window of the next level.
pub fn extension_sequence(
    seed: &QuantumSeed,
    s: i64,
    steps: usize,
    materialize: Materialize,
) -> Result<Vec<(i64, QuantumSeed)>> {
    let cd = seed.torus().cartan().clone();
    let mut out = vec![(s, seed.clone())];
    let mut cur = seed.clone();
    let mut level = s;
    for k in 0..steps {
        let plus = k % 2 == 0;
        let m = extension_step(&cur, level, plus, materialize)?;
        let vertices: Vec<Site> = m.vertices.iter().map(|v| extension_relabel(&cd, level, plus, *v)).collect();
        cur = QuantumSeed::new(m.torus.clone(), vertices, m.lambda.clone(), m.exchange.clone(), m.cluster.clone())?;
        level += if plus { 1 } else { -1 };
        out.push((level, cur.clone()));
    }
    Ok(out)
}

/// Disagreements between `a` (relabeled) and `b` on exchange entries and,
/// optionally, variables, over the sites of `a` kept by `keep`.
pub fn seed_mismatches(
    a: &QuantumSeed,
    b: &QuantumSeed,
    relabel: impl Fn(Site) -> Site,
    keep: impl Fn(Site) -> bool,
    variables: bool,
) -> Vec<String> {
    let kept: Vec<Site> = a.vertices.iter().copied().filter(|v| keep(*v)).collect();
    let mut out = Vec::new();
    for &x in &kept {
        let Ok(bx) = b.index_of(relabel(x)) else {
            out.push(format!("{x} has no image"));
            continue;
        };
        let ax = a.index[&x];
        if variables && a.cluster[ax] != b.cluster[bx] {
            out.push(format!("variable at {x}"));
        }
        for &y in &kept {
            let Ok(by) = b.index_of(relabel(y)) else { continue };
            let ay = a.index[&y];
            let (u, v) = (a.exchange.get(ax, ay), b.exchange.get(bx, by));
            if u != v {
                out.push(format!("b[{x},{y}] = {u} vs {v}"));
            }
        }
    }
    out
}
