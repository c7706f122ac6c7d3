//! Weyl group arithmetic on the root lattice.
//!
//! Elements are identified by their integer matrix on the simple-root basis;
//! the word carried alongside is the lexicographically least reduced word
//! (0-based indices internally, 1-based at the I/O boundary).

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::{LieType, RootSystem};

/// Default enumeration bound; `|W(E_7)| = 2 903 040` is rejected.
pub const DEFAULT_MAX_WEYL: usize = 1_000_000;

/// Enumeration bound, overridable via `FLAGPOISSON_MAX_WEYL`.
pub fn max_weyl_from_env() -> usize {
    std::env::var("FLAGPOISSON_MAX_WEYL")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_WEYL)
}

type IMat = Vec<Vec<i64>>;

fn imat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let mut c = vec![vec![0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn imat_apply(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// An element of the Weyl group of a fixed root system.
#[derive(Clone)]
pub struct WeylElement {
    system: (LieType, usize),
    word: Vec<usize>,
    matrix: IMat,
}

impl WeylElement {
    /// Canonical (lexicographically least) reduced word, 0-based.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Word with 1-based indices, as serialized.
    pub fn word_1based(&self) -> Vec<usize> {
        self.word.iter().map(|i| i + 1).collect()
    }

    /// Comma-separated 1-based word; `"e"` for the identity.
    pub fn word_string(&self) -> String {
        if self.word.is_empty() {
            "e".to_string()
        } else {
            self.word_1based()
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Action on the root lattice; column `j` is the image of `α_j`.
    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        imat_apply(&self.matrix, v)
    }

    pub fn system(&self) -> (LieType, usize) {
        self.system
    }
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.system == other.system && self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl std::hash::Hash for WeylElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.system.hash(state);
        self.matrix.hash(state);
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by length, then canonical word.
impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
            .then_with(|| self.system.cmp(&other.system))
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W[{}]", self.word_string())
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("e");
        }
        let s: Vec<String> = self.word.iter().map(|i| format!("s{}", i + 1)).collect();
        f.write_str(&s.join(""))
    }
}

impl Serialize for WeylElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.word_1based().serialize(s)
    }
}

/// Involutive automorphism of the Dynkin diagram, as a permutation of simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagramAut {
    perm: Vec<usize>,
}

impl DiagramAut {
    pub fn identity(rank: usize) -> Self {
        Self {
            perm: (0..rank).collect(),
        }
    }

    /// Validates `perm` (0-based) against the Cartan matrix of `rs`.
    pub fn new(rs: &RootSystem, perm: Vec<usize>) -> Result<Self> {
        let n = rs.rank();
        if perm.len() != n {
            return Err(Error::InvalidDiagramAut(format!(
                "permutation has length {}, rank is {n}",
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidDiagramAut(format!("{perm:?} is not a permutation")));
            }
        }
        if (0..n).any(|i| perm[perm[i]] != i) {
            return Err(Error::InvalidDiagramAut(format!("{perm:?} is not an involution")));
        }
        let a = rs.cartan_matrix();
        for i in 0..n {
            for j in 0..n {
                if a[perm[i]][perm[j]] != a[i][j] {
                    return Err(Error::InvalidDiagramAut(format!(
                        "{perm:?} does not preserve the Cartan matrix"
                    )));
                }
            }
        }
        Ok(Self { perm })
    }

    /// The nontrivial involution of the diagram (types A, D, E6).
    pub fn flip(rs: &RootSystem) -> Result<Self> {
        let n = rs.rank();
        let perm: Vec<usize> = match rs.lie_type() {
            LieType::A if n >= 2 => (0..n).rev().collect(),
            LieType::D => {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(n - 2, n - 1);
                p
            }
            LieType::E if n == 6 => vec![5, 1, 4, 3, 2, 0],
            t => {
                return Err(Error::InvalidDiagramAut(format!(
                    "{t}{n} has no nontrivial diagram involution"
                )))
            }
        };
        Self::new(rs, perm)
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply_index(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// `d` acting on lattice coordinates.
    pub fn apply_coords(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; v.len()];
        for (i, &c) in v.iter().enumerate() {
            out[self.perm[i]] = c;
        }
        out
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.perm[i] == i
    }
}

/// Weyl group of a root system.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    rs: Arc<RootSystem>,
    reflections: Vec<IMat>,
}

impl WeylGroup {
    pub fn new(rs: &RootSystem) -> Self {
        let reflections = (0..rs.rank()).map(|i| rs.simple_reflection(i)).collect();
        Self {
            rs: Arc::new(rs.clone()),
            reflections,
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    fn tag(&self) -> (LieType, usize) {
        (self.rs.lie_type(), self.rs.rank())
    }

    fn check(&self, w: &WeylElement) -> Result<()> {
        if w.system != self.tag() {
            return Err(Error::MixedRootSystems);
        }
        Ok(())
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement {
            system: self.tag(),
            word: vec![],
            matrix: identity(self.rs.rank()),
        }
    }

    pub fn simple(&self, i: usize) -> Result<WeylElement> {
        self.from_word(&[i])
    }

    fn is_negative(v: &[i64]) -> bool {
        v.iter().any(|&c| c < 0)
    }

    /// Inversion count `|{β > 0 : wβ < 0}|`.
    pub fn inversion_count(&self, m: &IMat) -> usize {
        self.rs
            .positive_roots()
            .iter()
            .filter(|b| Self::is_negative(&imat_apply(m, b)))
            .count()
    }

    /// Builds the element from its lattice matrix, computing the canonical word
    /// by greedy left descent.
    pub fn from_matrix(&self, m: IMat) -> WeylElement {
        let r = self.rs.rank();
        // w⁻¹ via right descents: w(α_j) < 0 ⇔ l(w s_j) < l(w)
        let negative_col = |x: &IMat, j: usize| (0..r).any(|i| x[i][j] < 0);
        let mut cur = m.clone();
        let mut inv = identity(r);
        while let Some(j) = (0..r).find(|&j| negative_col(&cur, j)) {
            cur = imat_mul(&cur, &self.reflections[j]);
            inv = imat_mul(&inv, &self.reflections[j]);
        }
        // lexicographically least word: repeatedly take the smallest left
        // descent i (w⁻¹(α_i) < 0) and pass to s_i w, i.e. w⁻¹ ↦ w⁻¹ s_i
        let mut word = Vec::new();
        while let Some(i) = (0..r).find(|&i| negative_col(&inv, i)) {
            word.push(i);
            inv = imat_mul(&inv, &self.reflections[i]);
        }
        WeylElement {
            system: self.tag(),
            word,
            matrix: m,
        }
    }

    /// Element represented by a (not necessarily reduced) word of 0-based indices.
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElement> {
        let r = self.rs.rank();
        let mut m = identity(r);
        for &i in word {
            if i >= r {
                return Err(Error::InvalidWord(format!(
                    "index {} out of range 1..={r}",
                    i + 1
                )));
            }
            m = imat_mul(&m, &self.reflections[i]);
        }
        Ok(self.from_matrix(m))
    }

    /// Parses `"1,2,1"` (1-based); `"e"` or the empty string is the identity.
    pub fn parse_word(&self, s: &str) -> Result<WeylElement> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(self.identity());
        }
        let word = s
            .split(',')
            .map(|t| {
                let k: usize = t
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidWord(format!("cannot parse {t:?}")))?;
                if k == 0 {
                    return Err(Error::InvalidWord("indices are 1-based".into()));
                }
                Ok(k - 1)
            })
            .collect::<Result<Vec<_>>>()?;
        self.from_word(&word)
    }

    pub fn multiply(&self, a: &WeylElement, b: &WeylElement) -> Result<WeylElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.from_matrix(imat_mul(&a.matrix, &b.matrix)))
    }

    pub fn inverse(&self, w: &WeylElement) -> Result<WeylElement> {
        self.check(w)?;
        let rev: Vec<usize> = w.word.iter().rev().copied().collect();
        self.from_word(&rev)
    }

    pub fn length(&self, w: &WeylElement) -> Result<usize> {
        self.check(w)?;
        Ok(self.inversion_count(&w.matrix))
    }

    /// `w₀`, the unique element sending `Δ⁺` to `−Δ⁺`.
    pub fn longest_element(&self) -> WeylElement {
        // repeatedly append any simple reflection that lengthens the element
        let r = self.rs.rank();
        let mut m = identity(r);
        let mut len = 0;
        'outer: loop {
            for i in 0..r {
                let next = imat_mul(&m, &self.reflections[i]);
                let l = self.inversion_count(&next);
                if l > len {
                    m = next;
                    len = l;
                    continue 'outer;
                }
            }
            break;
        }
        self.from_matrix(m)
    }

    /// `d(w) = γ_d w γ_d`: relabels the word by the permutation.
    pub fn apply_diagram_aut(&self, d: &DiagramAut, w: &WeylElement) -> Result<WeylElement> {
        self.check(w)?;
        if d.perm.len() != self.rs.rank() {
            return Err(Error::InvalidDiagramAut("rank mismatch".into()));
        }
        DiagramAut::new(&self.rs, d.perm.clone())?;
        let word: Vec<usize> = w.word.iter().map(|&i| d.perm[i]).collect();
        self.from_word(&word)
    }

    pub fn is_twisted_involution(&self, d: &DiagramAut, w: &WeylElement) -> Result<bool> {
        Ok(self.apply_diagram_aut(d, w)? == self.inverse(w)?)
    }

    /// `w₁ ∗ w = w₁ w d(w₁⁻¹)`, defined on `I_d`.
    pub fn star_action(
        &self,
        w1: &WeylElement,
        w: &WeylElement,
        d: &DiagramAut,
    ) -> Result<WeylElement> {
        if !self.is_twisted_involution(d, w)? {
            return Err(Error::NotTwistedInvolution(w.word_string()));
        }
        let dinv = self.apply_diagram_aut(d, &self.inverse(w1)?)?;
        self.multiply(&self.multiply(w1, w)?, &dinv)
    }

    /// All elements, ordered by (length, canonical word).
    pub fn enumerate(&self, bound: usize) -> Result<Vec<WeylElement>> {
        let order = self.rs.weyl_order();
        if order > bound as u128 {
            return Err(Error::GroupTooLarge { order, bound });
        }
        let r = self.rs.rank();
        let mut seen: HashMap<IMat, ()> = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert(identity(r), ());
        queue.push_back(identity(r));
        let mut all = Vec::new();
        while let Some(m) = queue.pop_front() {
            for s in &self.reflections {
                let next = imat_mul(&m, s);
                if !seen.contains_key(&next) {
                    seen.insert(next.clone(), ());
                    queue.push_back(next);
                }
            }
            all.push(m);
        }
        if all.len() as u128 != order {
            return Err(Error::Inconsistent(format!(
                "enumerated {} elements, expected {order}",
                all.len()
            )));
        }
        let mut els: Vec<WeylElement> = all.into_iter().map(|m| self.from_matrix(m)).collect();
        els.sort();
        Ok(els)
    }

    /// `I_d = {w : d(w) = w⁻¹}`, ordered by (length, canonical word).
    pub fn twisted_involutions(&self, d: &DiagramAut, bound: usize) -> Result<Vec<WeylElement>> {
        let mut out = Vec::new();
        for w in self.enumerate(bound)? {
            if self.is_twisted_involution(d, &w)? {
                out.push(w);
            }
        }
        Ok(out)
    }

    /// Coefficients of `Σ_w t^{2l(w)}`, indexed by the power of `t`.
    pub fn poincare_polynomial(&self, bound: usize) -> Result<Vec<u64>> {
        let els = self.enumerate(bound)?;
        let top = els.iter().map(WeylElement::length).max().unwrap_or(0);
        let mut coeffs = vec![0u64; 2 * top + 1];
        for w in &els {
            coeffs[2 * w.length()] += 1;
        }
        Ok(coeffs)
    }
}

/// Renders `[1, 0, 2, 0, 1]` as `"1 + 2t^2 + t^4"`.
pub fn format_polynomial(coeffs: &[u64]) -> String {
    let mut terms = Vec::new();
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term = match (k, c) {
            (0, c) => c.to_string(),
            (1, 1) => "t".to_string(),
            (1, c) => format!("{c}t"),
            (k, 1) => format!("t^{k}"),
            (k, c) => format!("{c}t^{k}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// Vogan-style aut spec: `"id"`, `"flip"` or an explicit 1-based permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AutSpec {
    Named(String),
    Perm(Vec<usize>),
}

impl AutSpec {
    pub fn resolve(&self, rs: &RootSystem) -> Result<DiagramAut> {
        match self {
            AutSpec::Named(s) if s == "id" => Ok(DiagramAut::identity(rs.rank())),
            AutSpec::Named(s) if s == "flip" => DiagramAut::flip(rs),
            AutSpec::Named(s) => Err(Error::InvalidDiagramAut(format!("unknown aut {s:?}"))),
            AutSpec::Perm(p) => {
                if p.contains(&0) {
                    return Err(Error::InvalidDiagramAut("indices are 1-based".into()));
                }
                DiagramAut::new(rs, p.iter().map(|i| i - 1).collect())
            }
        }
    }
}
