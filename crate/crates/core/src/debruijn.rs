//! The q-nary (de Bruijn) graph of order `m` and its periodic orbits.
//!
//! Vertices are the `q^m` words of length `m` and edges the `q^(m+1)` words
//! of length `m + 1`. Both are indexed by their base-`q` value with the most
//! significant letter first, so the origin of edge `e` is `e / q` and its
//! terminus is `e mod q^m`.
//!
//! Primitive periodic orbits are identified by their Lyndon representative
//! and primitive pseudo orbits by sets of distinct Lyndon words.

use std::fmt;

use crate::error::{Error, Result};
use crate::words::{
    self, guarded_word_count, has_strict_factorization, is_lyndon_slice, Count, Letter, Word,
    WordOdometer,
};

pub use crate::words::DEFAULT_BUDGET;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QNaryGraph {
    q: u32,
    m: usize,
    vertex_count: usize,
    edge_count: usize,
}

impl QNaryGraph {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn origin(&self, edge: usize) -> usize {
        edge / self.q as usize
    }

    pub fn terminus(&self, edge: usize) -> usize {
        edge % self.vertex_count
    }

    /// Outgoing edges of `v`, ordered by their last letter.
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = usize> {
        let q = self.q as usize;
        (0..q).map(move |c| v * q + c)
    }

    /// Incoming edges of `v`, ordered by their first letter.
    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = usize> {
        let stride = self.vertex_count;
        (0..self.q as usize).map(move |b| b * stride + v)
    }

    /// First letter of an edge label.
    pub fn first_letter(&self, edge: usize) -> Letter {
        (edge / self.vertex_count) as Letter
    }

    /// Last letter of an edge label.
    pub fn last_letter(&self, edge: usize) -> Letter {
        (edge % self.q as usize) as Letter
    }

    pub fn vertex_word(&self, v: usize) -> Word {
        Word::from_trusted(decode(v, self.q, self.m), self.q)
    }

    pub fn edge_word(&self, e: usize) -> Word {
        Word::from_trusted(decode(e, self.q, self.m + 1), self.q)
    }

    /// Edge index of a word of length `m + 1`.
    pub fn edge_index(&self, w: &Word) -> Result<usize> {
        if w.q() != self.q || w.len() != self.m + 1 {
            return Err(Error::arg(format!(
                "edge labels are words of length {} over {} letters",
                self.m + 1,
                self.q
            )));
        }
        Ok(encode(w.letters(), self.q))
    }

    pub fn vertex_index(&self, w: &Word) -> Result<usize> {
        if w.q() != self.q || w.len() != self.m {
            return Err(Error::arg(format!(
                "vertex labels are words of length {} over {} letters",
                self.m, self.q
            )));
        }
        Ok(encode(w.letters(), self.q))
    }
}

fn encode(letters: &[Letter], q: u32) -> usize {
    letters
        .iter()
        .fold(0usize, |acc, &a| acc * q as usize + a as usize)
}

fn decode(mut index: usize, q: u32, len: usize) -> Vec<Letter> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (index % q as usize) as Letter;
        index /= q as usize;
    }
    out
}

/// Builds the order-`m` graph over `q` letters; refuses graphs with more
/// than `budget` edges.
pub fn build_graph(q: u32, m: usize, budget: u64) -> Result<QNaryGraph> {
    if q < 2 {
        return Err(Error::arg("q-nary graphs need q >= 2"));
    }
    if m == 0 {
        return Err(Error::arg("graph order m must be at least 1"));
    }
    let edges = guarded_word_count(q, m + 1, budget, "graph edges")?;
    let edge_count = edges as usize;
    Ok(QNaryGraph {
        q,
        m,
        vertex_count: edge_count / q as usize,
        edge_count,
    })
}

/// A primitive periodic orbit, represented by its Lyndon word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicOrbit {
    word: Word,
}

impl PeriodicOrbit {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn topological_length(&self) -> usize {
        self.word.len()
    }

    /// Edge indices of the closed walk on the order-`m` graph, starting at
    /// the edge that reads the representative from its first letter.
    /// Window `i` is the `m + 1` letters starting at position `i`, read
    /// cyclically.
    pub fn edge_sequence(&self, m: usize) -> Vec<usize> {
        let letters = self.word.letters();
        let l = letters.len();
        let q = self.word.q() as usize;
        (0..l)
            .map(|i| (0..=m).fold(0usize, |acc, j| acc * q + letters[(i + j) % l] as usize))
            .collect()
    }

    /// Vertex indices visited by the closed walk (origins of the edges).
    pub fn vertex_sequence(&self, m: usize) -> Vec<usize> {
        let q = self.word.q() as usize;
        self.edge_sequence(m).into_iter().map(|e| e / q).collect()
    }
}

impl fmt::Display for PeriodicOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// The orbit read off a Lyndon word on the order-`m` graph.
pub fn orbit_from_word(w: &Word, m: usize) -> Result<PeriodicOrbit> {
    if m == 0 {
        return Err(Error::arg("graph order m must be at least 1"));
    }
    if !words::is_lyndon(w)? {
        return Err(Error::arg(format!(
            "{w} is not a Lyndon word; use its least rotation as representative"
        )));
    }
    Ok(PeriodicOrbit { word: w.clone() })
}

/// One orbit per Lyndon word of length `l`, in lexicographic order.
pub fn primitive_periodic_orbits(q: u32, l: usize) -> Result<Vec<PeriodicOrbit>> {
    Ok(words::lyndon_words(q, l)?
        .into_iter()
        .map(|word| PeriodicOrbit { word })
        .collect())
}

/// A set of distinct primitive periodic orbits, kept in strictly
/// decreasing lexicographic order of their representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PseudoOrbit {
    q: u32,
    orbits: Vec<PeriodicOrbit>,
}

impl PseudoOrbit {
    pub fn empty(q: u32) -> Self {
        PseudoOrbit {
            q,
            orbits: Vec::new(),
        }
    }

    /// Collects orbits into a pseudo orbit; repeated orbits are rejected.
    pub fn from_orbits(q: u32, orbits: impl IntoIterator<Item = PeriodicOrbit>) -> Result<Self> {
        let mut orbits: Vec<PeriodicOrbit> = orbits.into_iter().collect();
        if orbits.iter().any(|o| o.word.q() != q) {
            return Err(Error::arg("orbits over different alphabets"));
        }
        orbits.sort_by(|a, b| b.word.letters().cmp(a.word.letters()));
        if orbits.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::arg("a primitive pseudo orbit cannot repeat an orbit"));
        }
        Ok(PseudoOrbit { q, orbits })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn orbits(&self) -> &[PeriodicOrbit] {
        &self.orbits
    }

    /// Number of member orbits.
    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn topological_length(&self) -> usize {
        self.orbits.iter().map(|o| o.topological_length()).sum()
    }

    /// Concatenation of the members in decreasing order; its Lyndon
    /// factorization is exactly the member list.
    pub fn concatenated_word(&self) -> Word {
        let letters = self
            .orbits
            .iter()
            .flat_map(|o| o.word.letters().iter().copied())
            .collect();
        Word::from_trusted(letters, self.q)
    }
}

impl fmt::Display for PseudoOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, o) in self.orbits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{o}")?;
        }
        f.write_str("}")
    }
}

/// All primitive pseudo orbits of total topological length `n`.
///
/// Walks the words of length `n` in lexicographic order and keeps those
/// whose Lyndon factorization has no repeated factor; the factors of such
/// a word are the member orbits. Output order is therefore lexicographic in
/// the concatenated word. Refuses when `q^n` exceeds `budget`.
pub fn enumerate_primitive_pseudo_orbits(q: u32, n: usize, budget: u64) -> Result<Vec<PseudoOrbit>> {
    if q == 0 {
        return Err(Error::arg("alphabet size must be at least 1"));
    }
    if n == 0 {
        return Ok(vec![PseudoOrbit::empty(q)]);
    }
    guarded_word_count(q, n, budget, "pseudo-orbit enumeration")?;
    let expected = words::str_count(q, n)?;
    let mut out = Vec::with_capacity(expected as usize);
    let mut odo = WordOdometer::new(q, n);
    while let Some(s) = odo.next_word() {
        if !has_strict_factorization(s) {
            continue;
        }
        let mut orbits = Vec::new();
        words::duval_for_each(s, |start, len| {
            let letters = s[start..start + len].to_vec();
            debug_assert!(is_lyndon_slice(&letters));
            orbits.push(PeriodicOrbit {
                word: Word::from_trusted(letters, q),
            });
        });
        out.push(PseudoOrbit { q, orbits });
    }
    debug_assert_eq!(out.len() as Count, expected);
    Ok(out)
}

/// Number of times a pseudo orbit traverses each edge of the graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeMultiplicityVector {
    pub counts: Vec<u32>,
}

impl EdgeMultiplicityVector {
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }
}

pub fn edge_multiplicities(po: &PseudoOrbit, g: &QNaryGraph) -> Result<EdgeMultiplicityVector> {
    if po.q != g.q {
        return Err(Error::arg("pseudo orbit and graph use different alphabets"));
    }
    let mut counts = vec![0u32; g.edge_count];
    for o in &po.orbits {
        for e in o.edge_sequence(g.m) {
            counts[e] += 1;
        }
    }
    Ok(EdgeMultiplicityVector { counts })
}
