//! Exact invariants of quotient elements, used to bucket words before the
//! word problem is called. Equal elements always get equal keys.

use super::PresentationQuotient;
use crate::groups::Letter;
use rustc_hash::FxHashSet;

/// Exponent sums reduced modulo the lattice spanned by the relators'
/// exponent vectors: the image in the abelianization, in canonical form.
#[derive(Clone, Debug)]
pub(crate) struct AbelianKey {
    /// Hermite normal form rows with their pivot columns.
    rows: Vec<(usize, Vec<i64>)>,
    rank: usize,
}

impl AbelianKey {
    pub(crate) fn new(rank: usize, vectors: &[Vec<i64>]) -> Self {
        let mut m: Vec<Vec<i64>> = vectors.iter().filter(|v| v.iter().any(|&x| x != 0)).cloned().collect();
        let mut rows = Vec::new();
        let mut col = 0;
        while col < rank && !m.is_empty() {
            // Euclid down column `col` until one row carries its gcd.
            loop {
                m.sort_by_key(|r| if r[col] == 0 { i64::MAX } else { r[col].abs() });
                if m.len() < 2 || m[1][col] == 0 {
                    break;
                }
                let (head, tail) = m.split_at_mut(1);
                for r in tail.iter_mut().filter(|r| r[col] != 0) {
                    let q = r[col].div_euclid(head[0][col]);
                    for (x, y) in r.iter_mut().zip(&head[0]) {
                        *x -= q * y;
                    }
                }
            }
            if m[0][col] != 0 {
                let mut pivot = m.remove(0);
                if pivot[col] < 0 {
                    pivot.iter_mut().for_each(|x| *x = -*x);
                }
                rows.push((col, pivot));
            }
            m.retain(|r| r.iter().any(|&x| x != 0));
            col += 1;
        }
        // Reduce entries above each pivot so the form is canonical.
        for i in 0..rows.len() {
            let (c, pivot) = rows[i].clone();
            for row in rows.iter_mut().take(i) {
                let q = row.1[c].div_euclid(pivot[c]);
                for (x, y) in row.1.iter_mut().zip(&pivot) {
                    *x -= q * y;
                }
            }
        }
        AbelianKey { rows, rank }
    }

    pub(crate) fn key(&self, word: &[Letter]) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for l in word {
            v[l.generator()] += if l.is_inverse() { -1 } else { 1 };
        }
        for (c, row) in &self.rows {
            let q = v[*c].div_euclid(row[*c]);
            for (x, y) in v.iter_mut().zip(row) {
                *x -= q * y;
            }
        }
        v
    }
}

pub(crate) type PermRep = Vec<Vec<u8>>;

pub(crate) fn apply_word(gens: &[Vec<u8>], word: &[Letter]) -> Vec<u8> {
    let degree = gens[0].len();
    let mut cur: Vec<u8> = (0..degree as u8).collect();
    for l in word {
        let g = &gens[l.generator()];
        if l.is_inverse() {
            let mut next = vec![0u8; degree];
            for (i, &x) in cur.iter().enumerate() {
                next[i] = g.iter().position(|&y| y == x).unwrap() as u8;
            }
            cur = next;
        } else {
            cur = cur.iter().map(|&x| g[x as usize]).collect();
        }
    }
    cur
}

fn is_identity(p: &[u8]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x as usize)
}

fn all_permutations(d: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut p: Vec<u8> = (0..d as u8).collect();
    loop {
        out.push(p.clone());
        // Next lexicographic permutation.
        let Some(i) = (1..d).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..d).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// One permutation of each cycle type in S_d.
fn cycle_type_reps(d: usize) -> Vec<Vec<u8>> {
    fn parts(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            parts(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut types = Vec::new();
    parts(d, d, &mut Vec::new(), &mut types);
    types
        .into_iter()
        .map(|t| {
            let mut p = vec![0u8; d];
            let mut start = 0;
            for len in t {
                for i in 0..len {
                    p[start + i] = (start + (i + 1) % len) as u8;
                }
                start += len;
            }
            p
        })
        .collect()
}

fn transitive(gens: &[Vec<u8>]) -> bool {
    let d = gens[0].len();
    let mut seen = vec![false; d];
    let mut stack = vec![0u8];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g[x as usize];
            if !seen[y as usize] {
                seen[y as usize] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Transitive permutation representations killing every relator, found by
/// exhaustive search (first generator up to conjugacy) in degrees 7 down
/// to 3. A representation is kept only if it splits some class of the
/// partition of `probe` induced by the abelian key and the ones already
/// kept.
pub(crate) fn permutation_representations(
    p: &PresentationQuotient,
    abelian: &AbelianKey,
    probe: &[Vec<Letter>],
    want: usize,
) -> Vec<PermRep> {
    const BUDGET: usize = 400_000;
    let mut kept: Vec<PermRep> = Vec::new();
    let key = |reps: &[PermRep], w: &[Letter]| -> (Vec<i64>, Vec<Vec<u8>>) {
        (abelian.key(w), reps.iter().map(|g| apply_word(g, w)).collect())
    };
    let classes = |reps: &[PermRep]| probe.iter().map(|w| key(reps, w)).collect::<FxHashSet<_>>().len();
    let mut current = classes(&kept);
    for d in (3..=7usize).rev() {
        let perms = all_permutations(d);
        let firsts = cycle_type_reps(d);
        let others = p.rank.saturating_sub(1) as u32;
        if firsts.len().saturating_mul(perms.len().saturating_pow(others)) > BUDGET {
            continue;
        }
        let mut odometer = vec![0usize; others as usize];
        for a in &firsts {
            loop {
                let mut gens = vec![a.clone()];
                gens.extend(odometer.iter().map(|&i| perms[i].clone()));
                if transitive(&gens) && p.relators.iter().all(|r| is_identity(&apply_word(&gens, r.letters()))) {
                    kept.push(gens);
                    let n = classes(&kept);
                    if n > current {
                        current = n;
                        if kept.len() >= want {
                            return kept;
                        }
                    } else {
                        kept.pop();
                    }
                }
                // Advance the odometer over the remaining generators.
                let mut i = 0;
                while i < odometer.len() {
                    odometer[i] += 1;
                    if odometer[i] < perms.len() {
                        break;
                    }
                    odometer[i] = 0;
                    i += 1;
                }
                if i == odometer.len() {
                    break;
                }
            }
        }
    }
    kept
}
