use crate::error::{Error, Result};
use crate::groups::{invert_word, FreeGroup, FreeWord, GroupModel, Letter};
use rustc_hash::FxHashMap;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PieceReport {
    pub max_piece: usize,
    pub min_len: usize,
    pub lambda: f64,
    /// λ < 1/6.
    pub c6: bool,
    /// A longest piece, when there is one.
    pub witness: Option<Vec<Letter>>,
}

/// A quotient F_k / ⟨⟨R⟩⟩ given by cyclically reduced relators.
#[derive(Clone, Debug)]
pub struct PresentationQuotient {
    pub rank: usize,
    pub relators: Vec<FreeWord>,
    pub pieces: PieceReport,
    /// Every cyclic shift of every relator and its inverse, deduplicated.
    symmetrized: Vec<Vec<Letter>>,
    /// Subwords s of symmetrized relators with |s| > |r|/2, mapped to the
    /// shorter complement that equals s in the quotient.
    halves: FxHashMap<Vec<Letter>, Vec<Letter>>,
    half_lengths: Vec<usize>,
}

fn cyclically_reduce(word: &[Letter]) -> Vec<Letter> {
    let mut w = FreeWord::new(word).letters().to_vec();
    while w.len() >= 2 && w[0] == w[w.len() - 1].inverse() {
        w.pop();
        w.remove(0);
    }
    w
}

fn rotations(w: &[Letter]) -> impl Iterator<Item = Vec<Letter>> + '_ {
    (0..w.len()).map(move |i| w[i..].iter().chain(&w[..i]).copied().collect())
}

impl PresentationQuotient {
    pub fn new(rank: usize, relators: &[Vec<Letter>]) -> Result<Self> {
        if relators.is_empty() {
            return Err(Error::Invalid("a presentation needs at least one relator".into()));
        }
        let mut reduced = Vec::new();
        for r in relators {
            if let Some(l) = r.iter().find(|l| l.generator() >= rank) {
                return Err(Error::Invalid(format!("letter {l:?} outside rank {rank}")));
            }
            let c = cyclically_reduce(r);
            if c.is_empty() {
                return Err(Error::Invalid("relator is trivial after cyclic reduction".into()));
            }
            reduced.push(c);
        }
        let pieces = small_cancellation_check(&reduced);
        let mut symmetrized: Vec<Vec<Letter>> = reduced
            .iter()
            .flat_map(|r| {
                let inv = invert_word(r);
                rotations(r)
                    .chain(rotations(&inv).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            })
            .collect();
        symmetrized.sort();
        symmetrized.dedup();
        let mut halves: FxHashMap<Vec<Letter>, Vec<Letter>> = FxHashMap::default();
        for r in &symmetrized {
            for len in r.len() / 2 + 1..=r.len() {
                let s = r[..len].to_vec();
                // r = s·t, so s = t⁻¹.
                let t_inv = invert_word(&r[len..]);
                halves
                    .entry(s)
                    .and_modify(|old| {
                        if t_inv < *old {
                            *old = t_inv.clone();
                        }
                    })
                    .or_insert(t_inv);
            }
        }
        let mut half_lengths: Vec<usize> = halves.keys().map(|k| k.len()).collect();
        half_lengths.sort_unstable();
        half_lengths.dedup();
        Ok(PresentationQuotient {
            rank,
            relators: reduced.iter().map(|r| FreeWord::new(r)).collect(),
            pieces,
            symmetrized,
            halves,
            half_lengths,
        })
    }

    /// One relator per line, in the group word grammar over free:`rank`.
    pub fn parse(rank: usize, text: &str) -> Result<Self> {
        let model = FreeGroup::new(rank);
        let relators = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| model.parse_word(l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rank, &relators)
    }

    pub fn symmetrized(&self) -> &[Vec<Letter>] {
        &self.symmetrized
    }

    /// Exponent sum of each generator over each relator.
    pub fn exponent_sums(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| {
                let mut v = vec![0i64; self.rank];
                for l in r.letters() {
                    v[l.generator()] += if l.is_inverse() { -1 } else { 1 };
                }
                v
            })
            .collect()
    }

    /// Dehn's algorithm: replaces the leftmost subword longer than half a
    /// relator by the shorter complement until none is left. For a C′(1/6)
    /// presentation the result is empty iff the word is trivial.
    pub fn dehn_reduce(&self, word: &[Letter]) -> Result<Vec<Letter>> {
        if !self.pieces.c6 {
            return Err(Error::NotSmallCancellation {
                max_piece: self.pieces.max_piece,
                min_len: self.pieces.min_len,
            });
        }
        Ok(self.dehn_unchecked(word))
    }

    pub(crate) fn dehn_unchecked(&self, word: &[Letter]) -> Vec<Letter> {
        let mut w = FreeWord::new(word).letters().to_vec();
        'outer: loop {
            for i in 0..w.len() {
                for &len in &self.half_lengths {
                    if i + len > w.len() {
                        break;
                    }
                    if let Some(rep) = self.halves.get(&w[i..i + len]) {
                        let mut next = w[..i].to_vec();
                        next.extend_from_slice(rep);
                        next.extend_from_slice(&w[i + len..]);
                        w = FreeWord::new(&next).letters().to_vec();
                        continue 'outer;
                    }
                }
            }
            return w;
        }
    }

    pub fn is_trivial(&self, word: &[Letter]) -> Result<bool> {
        Ok(self.dehn_reduce(word)?.is_empty())
    }
}

/// Exact piece computation. A piece is a word read from two different
/// starting positions of the cyclic relators and their inverses; within one
/// cyclic word it is cut one letter short of the whole relator.
pub fn small_cancellation_check(relators: &[Vec<Letter>]) -> PieceReport {
    let words: Vec<Vec<Letter>> = relators.iter().flat_map(|r| [r.clone(), invert_word(r)]).collect();
    let mut max_piece = 0;
    let mut witness = None;
    for (a, wa) in words.iter().enumerate() {
        for (b, wb) in words.iter().enumerate().skip(a) {
            let cap = wa.len().min(wb.len()) - 1;
            for i in 0..wa.len() {
                let start = if a == b { i + 1 } else { 0 };
                for j in start..wb.len() {
                    let mut k = 0;
                    while k < cap && wa[(i + k) % wa.len()] == wb[(j + k) % wb.len()] {
                        k += 1;
                    }
                    if k > max_piece {
                        max_piece = k;
                        witness = Some((0..k).map(|t| wa[(i + t) % wa.len()]).collect());
                    }
                }
            }
        }
    }
    let min_len = relators.iter().map(Vec::len).min().unwrap_or(0);
    let lambda = if min_len == 0 {
        f64::INFINITY
    } else {
        max_piece as f64 / min_len as f64
    };
    PieceReport {
        max_piece,
        min_len,
        lambda,
        c6: lambda < 1.0 / 6.0,
        witness,
    }
}
