//! Finite-type Cartan data, height functions and foldings.
//!
//! Nodes are numbered from 1 as in the usual Bourbaki-style diagrams:
//! `B_n` has its short root at `n`, `C_n` its long root at `n`, `F_4` has
//! long roots at 1 and 2, and `G_2` has its long root at 2.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteType {
    pub family: Family,
    pub rank: usize,
}

impl FiniteType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(FiniteType { family, rank })
        } else {
            Err(Error::InvalidType(format!("{family:?}{rank}")))
        }
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.family, Family::A | Family::D | Family::E)
    }

    /// Every valid type of rank at most `max_rank`.
    pub fn all_up_to(max_rank: usize) -> Vec<FiniteType> {
        let fams = [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G];
        let mut out = Vec::new();
        for f in fams {
            for n in 1..=max_rank {
                if let Ok(t) = FiniteType::new(f, n) {
                    out.push(t);
                }
            }
        }
        out
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for FiniteType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::InvalidType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidType(s.to_string()))?;
        FiniteType::new(fam, rank)
    }
}

fn diagram_edges(ty: FiniteType) -> Vec<(usize, usize)> {
    let n = ty.rank;
    match ty.family {
        Family::A | Family::B | Family::C | Family::F | Family::G => {
            (1..n).map(|i| (i, i + 1)).collect()
        }
        Family::D => {
            let mut e: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
            e.push((n - 2, n));
            e
        }
        Family::E => {
            let mut e = vec![(1, 3), (2, 4)];
            e.extend((3..n).map(|i| (i, i + 1)));
            e
        }
    }
}

fn symmetrizer(ty: FiniteType) -> Vec<i64> {
    let n = ty.rank;
    match ty.family {
        Family::B => (1..=n).map(|i| if i < n { 2 } else { 1 }).collect(),
        Family::C => (1..=n).map(|i| if i < n { 1 } else { 2 }).collect(),
        Family::F => vec![2, 2, 1, 1],
        Family::G => vec![1, 3],
        _ => vec![1; n],
    }
}

type IMat = Vec<Vec<i64>>;

fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn matmul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let mut c = vec![vec![0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0 {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    c
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanData {
    pub ty: FiniteType,
    c: IMat,
    d: Vec<i64>,
    dist: Vec<Vec<usize>>,
    h: usize,
    star: Vec<usize>,
}

impl CartanData {
    pub fn new(ty: FiniteType) -> Self {
        let n = ty.rank;
        let d = symmetrizer(ty);
        let mut c = identity(n);
        for row in c.iter_mut() {
            for x in row.iter_mut() {
                *x *= 2;
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (a, b) in diagram_edges(ty) {
            let (i, j) = (a - 1, b - 1);
            c[i][j] = -(d[j] / d[i]).max(1);
            c[j][i] = -(d[i] / d[j]).max(1);
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut dist = vec![vec![usize::MAX; n]; n];
        for s in 0..n {
            dist[s][s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if dist[s][v] == usize::MAX {
                        dist[s][v] = dist[s][u] + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        let mut cd = CartanData { ty, c, d, dist, h: 0, star: Vec::new() };
        cd.h = cd.coxeter_order();
        cd.star = cd.star_from_longest();
        cd
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn nodes(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.rank()
    }

    pub fn check_node(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank() {
            Err(Error::BadNode { node: i, rank: self.rank() })
        } else {
            Ok(())
        }
    }

    /// Cartan entry `c_{i,j}`.
    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.c[i - 1][j - 1]
    }

    pub fn d(&self, i: usize) -> i64 {
        self.d[i - 1]
    }

    /// Adjacency entry `-δ(i≠j) c_{i,j}`.
    pub fn adjacency(&self, i: usize, j: usize) -> i64 {
        if i == j {
            0
        } else {
            -self.c(i, j)
        }
    }

    pub fn dist(&self, i: usize, j: usize) -> usize {
        self.dist[i - 1][j - 1]
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.nodes().filter(|&j| self.dist(i, j) == 1).collect()
    }

    pub fn coxeter_number(&self) -> usize {
        self.h
    }

    pub fn star(&self, i: usize) -> usize {
        self.star[i - 1]
    }

    pub fn lacing(&self) -> i64 {
        let max = *self.d.iter().max().unwrap();
        let min = *self.d.iter().min().unwrap();
        max / min
    }

    pub fn cartan_matrix(&self) -> &IMat {
        &self.c
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.d
    }

    /// Matrix of the simple reflection `s_i` on the root lattice, columns
    /// indexed by simple roots: `s_i(α_j) = α_j - c_{i,j} α_i`.
    fn reflection(&self, i: usize) -> IMat {
        let n = self.rank();
        let mut s = identity(n);
        for j in 0..n {
            s[i][j] -= self.c[i][j];
        }
        s
    }

    fn coxeter_order(&self) -> usize {
        let n = self.rank();
        let mut w = identity(n);
        for i in 0..n {
            w = matmul(&w, &self.reflection(i));
        }
        let id = identity(n);
        let mut p = w.clone();
        let mut k = 1;
        while p != id {
            p = matmul(&p, &w);
            k += 1;
        }
        k
    }

    fn star_from_longest(&self) -> Vec<usize> {
        let n = self.rank();
        let mut w = identity(n);
        loop {
            let next = (0..n).find(|&i| (0..n).all(|r| w[r][i] >= 0));
            match next {
                Some(i) => w = matmul(&w, &self.reflection(i)),
                None => break,
            }
        }
        (0..n)
            .map(|i| {
                let j = (0..n).find(|&r| w[r][i] == -1).expect("w0 maps simple roots to negatives of simple roots");
                j + 1
            })
            .collect()
    }

    /// `-w0` applied to the simple root `α_i`, as a coordinate vector.
    pub fn minus_w0(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[self.star(i) - 1] = 1;
        v
    }

    /// Parity (0 or 1) of `p` for `(i,p)` in the standard repetition lattice.
    pub fn parity(&self, i: usize) -> i64 {
        (self.dist(1, i) % 2) as i64
    }
}

pub fn build_cartan(ty: FiniteType) -> CartanData {
    CartanData::new(ty)
}

pub fn diagram_distance(cd: &CartanData, i: usize, j: usize) -> Result<usize> {
    cd.check_node(i)?;
    cd.check_node(j)?;
    Ok(cd.dist(i, j))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeightFunction {
    xi: Vec<i64>,
}

impl HeightFunction {
    pub fn new(cd: &CartanData, xi: Vec<i64>) -> Result<Self> {
        if xi.len() != cd.rank() {
            return Err(Error::BadHeight(format!("expected {} values", cd.rank())));
        }
        if xi[0].rem_euclid(2) != 0 {
            return Err(Error::BadHeight("value at node 1 must be even".into()));
        }
        for i in cd.nodes() {
            for j in cd.neighbors(i) {
                if (xi[i - 1] - xi[j - 1]).abs() != 1 {
                    return Err(Error::BadHeight(format!("|ξ_{i} - ξ_{j}| != 1")));
                }
            }
        }
        Ok(HeightFunction { xi })
    }

    /// The height function with values in `{s, s-1}`.
    pub fn standard(cd: &CartanData, s: i64) -> Self {
        let top_even = s.rem_euclid(2) == 0;
        let xi = cd
            .nodes()
            .map(|i| {
                let even_class = cd.dist(1, i) % 2 == 0;
                if even_class == top_even {
                    s
                } else {
                    s - 1
                }
            })
            .collect();
        HeightFunction { xi }
    }

    pub fn get(&self, i: usize) -> i64 {
        self.xi[i - 1]
    }

    pub fn values(&self) -> &[i64] {
        &self.xi
    }

    pub fn is_source(&self, cd: &CartanData, i: usize) -> bool {
        cd.neighbors(i).iter().all(|&j| self.get(i) > self.get(j))
    }

    pub fn is_sink(&self, cd: &CartanData, i: usize) -> bool {
        cd.neighbors(i).iter().all(|&j| self.get(i) < self.get(j))
    }

    pub fn reflect(&self, cd: &CartanData, i: usize) -> Result<Self> {
        cd.check_node(i)?;
        if !self.is_source(cd, i) {
            return Err(Error::NotSource(i));
        }
        let mut xi = self.xi.clone();
        xi[i - 1] -= 2;
        Ok(HeightFunction { xi })
    }

    /// A Coxeter word adapted to the quiver: each letter is a source of
    /// the height function obtained by reflecting the previous letters.
    pub fn adapted_coxeter_word(&self, cd: &CartanData) -> Vec<usize> {
        let mut cur = self.clone();
        let mut word = Vec::new();
        for _ in cd.nodes() {
            let i = cd
                .nodes()
                .filter(|i| !word.contains(i) && cur.is_source(cd, *i))
                .max_by_key(|&i| (cur.get(i), std::cmp::Reverse(i)))
                .expect("a quiver without oriented cycles has a source");
            cur = cur.reflect(cd, i).expect("chosen node is a source");
            word.push(i);
        }
        word
    }
}

pub fn reflect_height(cd: &CartanData, xi: &HeightFunction, i: usize) -> Result<HeightFunction> {
    xi.reflect(cd, i)
}

/// A folding of a simply-laced type onto a non-simply-laced one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Folding {
    pub folded: FiniteType,
    pub unfolded: FiniteType,
    /// Diagram automorphism of the unfolded type, 1-based.
    pub sigma: Vec<usize>,
    /// Orbit map from unfolded nodes to folded nodes, 1-based.
    pub orbit: Vec<usize>,
}

impl Folding {
    pub fn orbit_of(&self, iota: usize) -> usize {
        self.orbit[iota - 1]
    }

    pub fn sigma(&self, iota: usize) -> usize {
        self.sigma[iota - 1]
    }

    pub fn preimage(&self, i: usize) -> Vec<usize> {
        (1..=self.orbit.len()).filter(|&k| self.orbit[k - 1] == i).collect()
    }
}

pub fn folding_pair(ty: FiniteType) -> Result<Folding> {
    let n = ty.rank;
    let (unfolded, sigma, orbit): (FiniteType, Vec<usize>, Vec<usize>) = match ty.family {
        Family::C => {
            let m = 2 * n - 1;
            let sigma = (1..=m).map(|i| 2 * n - i).collect();
            let orbit = (1..=m).map(|i| i.min(2 * n - i)).collect();
            (FiniteType::new(Family::A, m)?, sigma, orbit)
        }
        Family::B if n == 2 => {
            (FiniteType::new(Family::A, 3)?, vec![3, 2, 1], vec![2, 1, 2])
        }
        Family::B => {
            let m = n + 1;
            let sigma = (1..=m)
                .map(|i| match i {
                    i if i == n => n + 1,
                    i if i == n + 1 => n,
                    i => i,
                })
                .collect();
            let orbit = (1..=m).map(|i| i.min(n)).collect();
            (FiniteType::new(Family::D, m)?, sigma, orbit)
        }
        Family::F => (
            FiniteType::new(Family::E, 6)?,
            vec![6, 2, 5, 4, 3, 1],
            vec![4, 1, 3, 2, 3, 4],
        ),
        Family::G => (
            FiniteType::new(Family::D, 4)?,
            vec![3, 2, 4, 1],
            vec![1, 2, 1, 1],
        ),
        _ => return Err(Error::NoFolding(ty.to_string())),
    };
    Ok(Folding { folded: ty, unfolded, sigma, orbit })
}
