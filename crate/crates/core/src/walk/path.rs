//! Sample paths stored as a branch of the Cayley tree.
//!
//! The locations `w_0, ..., w_n` of a path are nodes of a trie of reduced
//! words. Common prefixes and distances between any two locations then cost
//! `O(log n)` via binary lifting, without materializing the words.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::space::{q, Q};
use crate::word::{GroupElement, Letter, Word};

use super::step::StepDistribution;
use super::{backward_stream, forward_stream, stream_rng};

const ROOT: u32 = 0;

#[derive(Clone, Debug)]
struct Trie {
    parent: Vec<u32>,
    letter: Vec<Option<Letter>>,
    depth: Vec<u32>,
    children: HashMap<(u32, Letter), u32>,
    up: Vec<Vec<u32>>,
}

impl Trie {
    fn new() -> Trie {
        Trie {
            parent: vec![ROOT],
            letter: vec![None],
            depth: vec![0],
            children: HashMap::new(),
            up: Vec::new(),
        }
    }

    fn step(&mut self, node: u32, l: Letter) -> u32 {
        if self.letter[node as usize] == Some(l.inverse()) {
            return self.parent[node as usize];
        }
        if let Some(&c) = self.children.get(&(node, l)) {
            return c;
        }
        let id = self.parent.len() as u32;
        self.parent.push(node);
        self.letter.push(Some(l));
        self.depth.push(self.depth[node as usize] + 1);
        self.children.insert((node, l), id);
        id
    }

    fn finish(&mut self) {
        let max_depth = self.depth.iter().copied().max().unwrap_or(0);
        let levels = (u32::BITS - max_depth.leading_zeros()).max(1) as usize;
        let mut up = vec![self.parent.clone()];
        for k in 1..levels {
            let prev = &up[k - 1];
            let next: Vec<u32> = prev.iter().map(|&p| prev[p as usize]).collect();
            up.push(next);
        }
        self.up = up;
    }

    fn depth(&self, node: u32) -> usize {
        self.depth[node as usize] as usize
    }

    fn ancestor(&self, mut node: u32, depth: usize) -> u32 {
        let mut lift = self.depth(node) - depth;
        let mut k = 0;
        while lift > 0 {
            if lift & 1 == 1 {
                node = self.up[k][node as usize];
            }
            lift >>= 1;
            k += 1;
        }
        node
    }

    fn lca(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.depth(a), self.depth(b));
        let (mut a, mut b) = if da > db {
            (self.ancestor(a, db), b)
        } else {
            (a, self.ancestor(b, da))
        };
        if a == b {
            return a;
        }
        for k in (0..self.up.len()).rev() {
            let (pa, pb) = (self.up[k][a as usize], self.up[k][b as usize]);
            if pa != pb {
                a = pa;
                b = pb;
            }
        }
        self.parent[a as usize]
    }

    fn word(&self, mut node: u32) -> Word {
        let mut letters = Vec::with_capacity(self.depth(node));
        while node != ROOT {
            letters.push(self.letter[node as usize].unwrap());
            node = self.parent[node as usize];
        }
        letters.reverse();
        Word::from_reduced_unchecked(letters)
    }
}

/// A finite sample path `w_0 = e, w_k = w_{k-1} g_k`.
#[derive(Clone, Debug)]
pub struct SamplePath {
    seed: Option<(u64, u64)>,
    offset: usize,
    increments: Vec<GroupElement>,
    nodes: Vec<u32>,
    central: Vec<bool>,
    trie: Trie,
}

impl PartialEq for SamplePath {
    fn eq(&self, other: &Self) -> bool {
        self.increments == other.increments
    }
}

impl SamplePath {
    pub fn from_increments(increments: Vec<GroupElement>) -> SamplePath {
        let mut trie = Trie::new();
        let mut nodes = Vec::with_capacity(increments.len() + 1);
        let mut central = Vec::with_capacity(increments.len() + 1);
        let (mut node, mut bit) = (ROOT, false);
        nodes.push(node);
        central.push(bit);
        for g in &increments {
            for l in g.word.letters() {
                node = trie.step(node, *l);
            }
            bit ^= g.central;
            nodes.push(node);
            central.push(bit);
        }
        trie.finish();
        SamplePath {
            seed: None,
            offset: 0,
            increments,
            nodes,
            central,
            trie,
        }
    }

    /// `n` steps drawn from stream `stream` of generator `master`.
    pub fn from_stream(mu: &StepDistribution, n: usize, master: u64, stream: u64) -> SamplePath {
        let mut rng = stream_rng(master, stream);
        let increments = (0..n).map(|_| mu.sample(&mut rng).clone()).collect();
        let mut p = SamplePath::from_increments(increments);
        p.seed = Some((master, stream));
        p
    }

    /// `(master seed, stream)` the path was drawn from, if any.
    pub fn seed(&self) -> Option<(u64, u64)> {
        self.seed
    }

    /// Number of shifts applied since sampling.
    pub fn offset(&self) -> usize {
        self.offset
    }

    /// Redraws the increments from the recorded seed.
    pub fn regenerate(&self, mu: &StepDistribution) -> Result<SamplePath> {
        let (master, stream) = self
            .seed
            .ok_or_else(|| Error::Invariant("path was not drawn from a seed".into()))?;
        let full = SamplePath::from_stream(mu, self.len() + self.offset, master, stream);
        full.shift(self.offset)
    }

    /// Number of steps `n`.
    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    pub fn increments(&self) -> &[GroupElement] {
        &self.increments
    }

    pub fn location(&self, k: usize) -> GroupElement {
        GroupElement {
            word: self.trie.word(self.nodes[k]),
            central: self.central[k],
        }
    }

    pub fn locations(&self) -> Vec<GroupElement> {
        (0..=self.len()).map(|k| self.location(k)).collect()
    }

    /// `|w_k|` for the free part.
    pub fn word_len(&self, k: usize) -> usize {
        self.trie.depth(self.nodes[k])
    }

    /// Common-prefix length of the free parts of `w_j` and `w_k`.
    pub fn common_prefix(&self, j: usize, k: usize) -> usize {
        self.trie.depth(self.trie.lca(self.nodes[j], self.nodes[k]))
    }

    /// Word distance between `w_j` and `w_k` (the central letter counts one).
    pub fn dist(&self, j: usize, k: usize) -> usize {
        let (a, b) = (self.nodes[j], self.nodes[k]);
        let c = self.trie.lca(a, b);
        self.trie.depth(a) + self.trie.depth(b) - 2 * self.trie.depth(c)
            + (self.central[j] != self.central[k]) as usize
    }

    /// `(w_j . w_k)` based at `w_i`.
    pub fn gromov_product(&self, i: usize, j: usize, k: usize) -> Q {
        let s = self.dist(i, j) + self.dist(i, k) - self.dist(j, k);
        q(s as i64) / q(2)
    }

    /// The first `d` letters of `w_k`.
    pub fn prefix(&self, k: usize, d: usize) -> Result<Word> {
        let node = self.nodes[k];
        if self.trie.depth(node) < d {
            return Err(Error::Unresolved {
                known: self.trie.depth(node),
                needed: d,
            });
        }
        Ok(self.trie.word(self.trie.ancestor(node, d)))
    }

    /// Whether the length-`d` prefixes of `w_j` and `w_k` exist and agree.
    pub(crate) fn same_prefix(&self, j: usize, k: usize, d: usize) -> bool {
        self.word_len(j) >= d && self.word_len(k) >= d && self.common_prefix(j, k) >= d
    }

    /// Common-prefix length of `w_k` with an arbitrary word.
    pub fn common_prefix_with(&self, k: usize, w: &Word) -> usize {
        let mut node = ROOT;
        let mut cp = 0;
        let target = self.nodes[k];
        let target_depth = self.trie.depth(target);
        for l in w.letters() {
            if cp >= target_depth {
                break;
            }
            match self.trie.children.get(&(node, *l)) {
                Some(&c) if self.trie.ancestor(target, cp + 1) == c => {
                    node = c;
                    cp += 1;
                }
                _ => break,
            }
        }
        cp
    }

    /// The path seen from time `k`: locations `w_k^-1 w_{k+m}`.
    pub fn shift(&self, k: usize) -> Result<SamplePath> {
        if k > self.len() {
            return Err(Error::ShiftTooLong {
                shift: k,
                len: self.len(),
            });
        }
        let mut p = SamplePath::from_increments(self.increments[k..].to_vec());
        p.seed = self.seed;
        p.offset = self.offset + k;
        Ok(p)
    }
}

/// `n` steps of a mu-walk from seed `seed` (stream 0).
pub fn sample_path(mu: &StepDistribution, n: usize, seed: u64) -> SamplePath {
    SamplePath::from_stream(mu, n, seed, 0)
}

/// The forward path of trial `trial` under master seed `master`.
pub fn sample_trial(mu: &StepDistribution, n: usize, master: u64, trial: u64) -> SamplePath {
    SamplePath::from_stream(mu, n, master, forward_stream(trial))
}

/// A forward mu-walk paired with an independent reflected-measure walk.
#[derive(Clone, Debug, PartialEq)]
pub struct BiInfinitePath {
    pub forward: SamplePath,
    /// Locations `w_0, w_{-1}, w_{-2}, ...` as a walk of the reflected measure.
    pub backward: SamplePath,
}

pub fn sample_bi_infinite(
    mu: &StepDistribution,
    n_forward: usize,
    n_backward: usize,
    master: u64,
    trial: u64,
) -> BiInfinitePath {
    BiInfinitePath {
        forward: SamplePath::from_stream(mu, n_forward, master, forward_stream(trial)),
        backward: SamplePath::from_stream(
            &mu.reflected(),
            n_backward,
            master,
            backward_stream(trial),
        ),
    }
}

/// Endpoint `w_n` of a walk, consuming the stream exactly like [`SamplePath`].
pub fn walk_endpoint(mu: &StepDistribution, n: usize, master: u64, stream: u64) -> GroupElement {
    let mut rng = stream_rng(master, stream);
    let mut w = GroupElement::identity();
    for _ in 0..n {
        let g = mu.sample(&mut rng);
        for l in g.word.letters() {
            w.word.push(*l);
        }
        w.central ^= g.central;
    }
    w
}

/// Runs a walk and calls `visit(k, w_k)` for `k = 0..=n`.
pub fn walk_visit<F: FnMut(usize, &GroupElement)>(
    mu: &StepDistribution,
    n: usize,
    master: u64,
    stream: u64,
    mut visit: F,
) {
    let mut rng = stream_rng(master, stream);
    let mut w = GroupElement::identity();
    visit(0, &w);
    for k in 1..=n {
        let g = mu.sample(&mut rng);
        for l in g.word.letters() {
            w.word.push(*l);
        }
        w.central ^= g.central;
        visit(k, &w);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;

    fn g(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    #[test]
    fn locations_are_products() {
        let mu = StepDistribution::uniform_generators(2);
        let p = sample_path(&mu, 200, 7);
        let mut w = GroupElement::identity();
        assert_eq!(p.location(0), w);
        for k in 1..=200 {
            w = w.mul(&p.increments()[k - 1]);
            assert_eq!(p.location(k), w);
        }
    }

    #[test]
    fn deterministic_examples() {
        let f2 = Alphabet::Free(2);
        let mu = StepDistribution::point_mass(f2, g("a")).unwrap();
        assert_eq!(sample_path(&mu, 5, 1).location(5), g("aaaaa"));
        assert_eq!(sample_path(&mu, 0, 1).locations(), vec![GroupElement::identity()]);
        let u = StepDistribution::uniform_generators(2);
        assert_eq!(sample_path(&u, 3, 42), sample_path(&u, 3, 42));
        assert_eq!(walk_endpoint(&u, 300, 9, 4), SamplePath::from_stream(&u, 300, 9, 4).location(300));
    }

    #[test]
    fn distances_match_words() {
        let u = StepDistribution::uniform_generators(2);
        let p = sample_path(&u, 120, 3);
        let locs = p.locations();
        for j in (0..=120).step_by(7) {
            for k in (0..=120).step_by(11) {
                let d = locs[j].word.dist(&locs[k].word);
                assert_eq!(p.dist(j, k), d);
                assert_eq!(p.common_prefix(j, k), locs[j].word.common_prefix_len(&locs[k].word));
                assert_eq!(p.common_prefix_with(j, &locs[k].word), p.common_prefix(j, k));
            }
        }
        assert_eq!(p.prefix(120, 2).unwrap(), locs[120].word.prefix(2));
    }

    #[test]
    fn shift_examples() {
        let p = SamplePath::from_increments(vec![g("a"), g("b"), g("A")]);
        let s = p.shift(1).unwrap();
        assert_eq!(s.locations(), vec![g("1"), g("b"), g("bA")]);
        assert_eq!(p.shift(0).unwrap(), p);
        assert_eq!(p.shift(1).unwrap().shift(1).unwrap(), p.shift(2).unwrap());
        assert!(matches!(p.shift(4), Err(Error::ShiftTooLong { shift: 4, len: 3 })));
    }

    #[test]
    fn regeneration_is_bit_exact() {
        let u = StepDistribution::uniform_generators(3);
        let p = sample_trial(&u, 50, 11, 3);
        assert_eq!(p.regenerate(&u).unwrap(), p);
        let s = p.shift(5).unwrap();
        assert_eq!(s.regenerate(&u).unwrap(), s);
    }

    #[test]
    fn product_group_paths_track_the_central_bit() {
        let alphabet = Alphabet::FreeTimesZ2;
        let mu = StepDistribution::new(
            alphabet,
            vec![(g("a"), 0.5), (GroupElement::parse("c", alphabet).unwrap(), 0.5)],
        )
        .unwrap();
        let p = sample_path(&mu, 40, 5);
        let mut w = GroupElement::identity();
        for k in 1..=40 {
            w = w.mul(&p.increments()[k - 1]);
            assert_eq!(p.location(k), w);
            assert_eq!(p.dist(0, k), w.len());
        }
    }
}
