use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::fmt;

/// A signed generator. The code is `2 * generator + inverse`, so the derived
/// order is a < a⁻¹ < b < b⁻¹ < …
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(u16);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        Letter((generator as u16) << 1 | inverse as u16)
    }

    pub fn pos(generator: usize) -> Letter {
        Letter::new(generator, false)
    }

    pub fn neg(generator: usize) -> Letter {
        Letter::new(generator, true)
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn code(self) -> u16 {
        self.0
    }

    /// Shift the generator index, keeping the sign.
    pub fn offset(self, by: usize) -> Letter {
        Letter::new(self.generator() + by, self.is_inverse())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "-{}", self.generator())
        } else {
            write!(f, "{}", self.generator())
        }
    }
}

pub type Letters = SmallVec<[Letter; 16]>;

/// A freely reduced word. Ordered shortlex.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FreeWord(Letters);

impl FreeWord {
    pub fn identity() -> FreeWord {
        FreeWord(SmallVec::new())
    }

    /// Freely reduces `letters`.
    pub fn new(letters: &[Letter]) -> FreeWord {
        let mut w = FreeWord::identity();
        for &l in letters {
            w.push(l);
        }
        w
    }

    /// Wraps letters the caller knows to be reduced.
    pub fn from_reduced(letters: Letters) -> FreeWord {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        FreeWord(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Right multiplication by a letter, cancelling if needed.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn times(&self, l: Letter) -> FreeWord {
        let mut w = self.clone();
        w.push(l);
        w
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &l in other.letters() {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) => self.0.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `w = c · core · c⁻¹` with `core` cyclically reduced.
    pub fn cyclic_reduction(&self) -> (FreeWord, FreeWord) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        let conj = FreeWord(self.0[..k].iter().copied().collect());
        let core = FreeWord(self.0[k..n - k].iter().copied().collect());
        (conj, core)
    }

    /// Cyclic permutation starting at position `i`.
    pub fn rotate(&self, i: usize) -> FreeWord {
        let mut v: Letters = self.0[i..].iter().copied().collect();
        v.extend(self.0[..i].iter().copied());
        FreeWord(v)
    }

    pub fn power(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }
}

impl Ord for FreeWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Letter = Letter(0);
    const AI: Letter = Letter(1);
    const B: Letter = Letter(2);
    const BI: Letter = Letter(3);

    #[test]
    fn reduces() {
        assert_eq!(FreeWord::new(&[A, B, BI, A]).letters(), &[A, A]);
        assert!(FreeWord::new(&[]).is_empty());
        assert!(FreeWord::new(&[A, B, BI, AI]).is_empty());
    }

    #[test]
    fn cyclic_reduction_splits() {
        let w = FreeWord::new(&[B, A, A, B, BI, BI]);
        let (c, core) = w.cyclic_reduction();
        assert_eq!(c.letters(), &[B]);
        assert_eq!(core.letters(), &[A, A]);
        assert_eq!(c.mul(&core).mul(&c.inverse()), w);
    }

    #[test]
    fn shortlex() {
        assert!(FreeWord::new(&[B]) < FreeWord::new(&[A, A]));
        assert!(FreeWord::new(&[A, B]) < FreeWord::new(&[AI, B]));
        assert!(FreeWord::new(&[A]) < FreeWord::new(&[AI]));
    }
}
