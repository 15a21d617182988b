//! Brady–Bridson snowflake groups
//! BB(1,r) = ⟨a, b, s, t | [a,b], s⁻¹as = aʳb, t⁻¹at = aʳb⁻¹⟩
//! as a double HNN extension of ℤ² = ⟨a,b⟩. Generators are
//! a (weight 1), u = aʳb and v = aʳb⁻¹ (weight L = 2r), s and t (weight 1).

use super::{format_word_with, word_power, Element, GeneratorSpec, GroupModel, Letter};
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;

pub const A: usize = 0;
pub const U: usize = 1;
pub const V: usize = 2;
pub const S: usize = 3;
pub const T: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum Stable {
    S,
    SInv,
    T,
    TInv,
}

impl Stable {
    pub fn inverse(self) -> Stable {
        match self {
            Stable::S => Stable::SInv,
            Stable::SInv => Stable::S,
            Stable::T => Stable::TInv,
            Stable::TInv => Stable::T,
        }
    }

    pub fn letter(self) -> Letter {
        match self {
            Stable::S => Letter::pos(S),
            Stable::SInv => Letter::neg(S),
            Stable::T => Letter::pos(T),
            Stable::TInv => Letter::neg(T),
        }
    }

    fn from_letter(l: Letter) -> Option<Stable> {
        match (l.generator(), l.is_inverse()) {
            (S, false) => Some(Stable::S),
            (S, true) => Some(Stable::SInv),
            (T, false) => Some(Stable::T),
            (T, true) => Some(Stable::TInv),
            _ => None,
        }
    }
}

/// Britton normal form v₀ e₁ v₁ … eₙ vₙ with vᵢ ∈ ℤ². Every vertex but the
/// last is the chosen coset representative for the edge subgroup that
/// passes through the following stable letter: (0,y) before s or t,
/// (x,0) before s⁻¹ or t⁻¹.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BrittonForm {
    pub vertices: Vec<(i64, i64)>,
    pub stables: Vec<Stable>,
}

/// One entry of an unreduced alternating sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Syllable {
    Vertex(i64, i64),
    Stable(Stable),
}

impl fmt::Debug for BrittonForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " {:?} ", self.stables[i - 1])?;
            }
            write!(f, "({},{})", v.0, v.1)?;
        }
        Ok(())
    }
}

impl BrittonForm {
    pub fn identity() -> Self {
        BrittonForm {
            vertices: vec![(0, 0)],
            stables: Vec::new(),
        }
    }

    pub fn vertex(x: i64, y: i64) -> Self {
        BrittonForm {
            vertices: vec![(x, y)],
            stables: Vec::new(),
        }
    }

    /// Number of stable letters, i.e. the Bass–Serre tree distance from the
    /// base vertex to this element's vertex.
    pub fn stable_len(&self) -> usize {
        self.stables.len()
    }

    pub fn last_vertex(&self) -> (i64, i64) {
        *self.vertices.last().expect("nonempty")
    }

    pub fn mul_vertex(&mut self, x: i64, y: i64) {
        let last = self.vertices.last_mut().expect("nonempty");
        last.0 += x;
        last.1 += y;
    }

    pub fn mul_stable(&mut self, e: Stable, r: i64) {
        let (x, y) = self.last_vertex();
        let (rep, pushed) = match e {
            Stable::S => ((0, y), (r * x, x)),
            Stable::SInv => ((x - r * y, 0), (y, 0)),
            Stable::T => ((0, y), (r * x, -x)),
            Stable::TInv => ((x + r * y, 0), (-y, 0)),
        };
        if rep == (0, 0) && self.stables.last() == Some(&e.inverse()) {
            self.stables.pop();
            self.vertices.pop();
            self.mul_vertex(pushed.0, pushed.1);
        } else {
            *self.vertices.last_mut().unwrap() = rep;
            self.stables.push(e);
            self.vertices.push(pushed);
        }
    }

    pub fn mul(&mut self, other: &BrittonForm, r: i64) {
        for (i, &(x, y)) in other.vertices.iter().enumerate() {
            self.mul_vertex(x, y);
            if let Some(&e) = other.stables.get(i) {
                self.mul_stable(e, r);
            }
        }
    }

    pub fn inverse(&self, r: i64) -> BrittonForm {
        let mut out = BrittonForm::identity();
        for (i, &(x, y)) in self.vertices.iter().enumerate().rev() {
            out.mul_vertex(-x, -y);
            if i > 0 {
                out.mul_stable(self.stables[i - 1].inverse(), r);
            }
        }
        out
    }

    /// Left coset of the vertex group: the same form with the trailing vertex
    /// zeroed. This names a vertex of the Bass–Serre tree.
    pub fn tree_vertex(&self) -> BrittonForm {
        let mut t = self.clone();
        *t.vertices.last_mut().unwrap() = (0, 0);
        t
    }

    /// Tree vertices along the path from the base vertex to this element's
    /// vertex: prefixes v₀e₁…eᵢ (trailing vertex zeroed).
    pub fn tree_path(&self) -> Vec<BrittonForm> {
        (0..=self.stables.len())
            .map(|i| BrittonForm {
                vertices: self.vertices[..=i]
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| if j == i { (0, 0) } else { v })
                    .collect(),
                stables: self.stables[..i].to_vec(),
            })
            .collect()
    }
}

/// Reduces an alternating sequence of vertex elements and stable letters.
pub fn britton_reduce(syllables: &[Syllable], r: i64) -> BrittonForm {
    let mut f = BrittonForm::identity();
    for s in syllables {
        match *s {
            Syllable::Vertex(x, y) => f.mul_vertex(x, y),
            Syllable::Stable(e) => f.mul_stable(e, r),
        }
    }
    f
}

#[derive(Debug, Clone)]
pub struct Snowflake {
    pub r: i64,
    gens: Vec<GeneratorSpec>,
}

impl Snowflake {
    pub fn new(r: i64) -> Result<Self> {
        if r < 2 {
            return Err(Error::Invalid(format!("snowflake parameter r = {r} must be ≥ 2")));
        }
        let l = (2 * r) as f64;
        Ok(Snowflake {
            r,
            gens: vec![
                GeneratorSpec::new("a", 1.0),
                GeneratorSpec::new("u", l),
                GeneratorSpec::new("v", l),
                GeneratorSpec::new("s", 1.0),
                GeneratorSpec::new("t", 1.0),
            ],
        })
    }

    /// Edge weight L = 2r of the u, v generators.
    pub fn big_l(&self) -> i64 {
        2 * self.r
    }

    pub fn form<'a>(&self, g: &'a Element) -> &'a BrittonForm {
        match g {
            Element::Britton(b) => b,
            other => panic!("expected a Britton form, found {other:?}"),
        }
    }

    pub fn element(&self, f: BrittonForm) -> Element {
        Element::Britton(Box::new(f))
    }

    /// The vertex-group element aˣbʸ.
    pub fn vertex(&self, x: i64, y: i64) -> Element {
        self.element(BrittonForm::vertex(x, y))
    }

    pub fn tree_distance(&self, g: &Element, h: &Element) -> usize {
        let mut f = self.form(g).inverse(self.r);
        f.mul(self.form(h), self.r);
        f.stable_len()
    }

    fn vertex_word(&self, x: i64, y: i64) -> Vec<Letter> {
        let mut w = word_power(&[Letter::pos(U)], y);
        w.extend(word_power(&[Letter::pos(A)], x - self.r * y));
        w
    }
}

impl GroupModel for Snowflake {
    fn spec(&self) -> String {
        format!("bb:{}", self.r)
    }

    fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    fn identity(&self) -> Element {
        self.element(BrittonForm::identity())
    }

    fn mul_letter(&self, g: &Element, l: Letter) -> Element {
        let mut f = self.form(g).clone();
        let sign = if l.is_inverse() { -1 } else { 1 };
        match l.generator() {
            A => f.mul_vertex(sign, 0),
            U => f.mul_vertex(sign * self.r, sign),
            V => f.mul_vertex(sign * self.r, -sign),
            _ => f.mul_stable(Stable::from_letter(l).expect("stable letter"), self.r),
        }
        self.element(f)
    }

    fn word_of(&self, g: &Element) -> Vec<Letter> {
        let f = self.form(g);
        let mut w = Vec::new();
        for (i, &(x, y)) in f.vertices.iter().enumerate() {
            w.extend(self.vertex_word(x, y));
            if let Some(e) = f.stables.get(i) {
                w.push(e.letter());
            }
        }
        w
    }

    fn inverse(&self, g: &Element) -> Element {
        self.element(self.form(g).inverse(self.r))
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        let mut f = self.form(g).clone();
        f.mul(self.form(h), self.r);
        self.element(f)
    }

    fn evaluate(&self, word: &[Letter]) -> Element {
        let mut f = BrittonForm::identity();
        for &l in word {
            let sign = if l.is_inverse() { -1 } else { 1 };
            match l.generator() {
                A => f.mul_vertex(sign, 0),
                U => f.mul_vertex(sign * self.r, sign),
                V => f.mul_vertex(sign * self.r, -sign),
                _ => f.mul_stable(Stable::from_letter(l).unwrap(), self.r),
            }
        }
        self.element(f)
    }

    /// `b` is accepted in words as a⁻ʳu.
    fn expand_alias(&self, label: &str) -> Option<Vec<Letter>> {
        (label == "b").then(|| {
            let mut w = word_power(&[Letter::pos(A)], -self.r);
            w.push(Letter::pos(U));
            w
        })
    }

    fn format_word(&self, word: &[Letter]) -> String {
        format_word_with(word, |i| self.gens[i].label.clone())
    }
}

/// Lengths and words of the recursive geodesic family in BB(1,r):
/// a^{mL+p} is reached by s⁻¹aᵐs·t⁻¹aᵐt·aᵖ, costing 4 + 2|aᵐ| + |aᵖ|.
struct Family {
    l: i64,
    memo: HashMap<i64, (i64, Option<i64>)>,
}

impl Family {
    fn new(r: i64) -> Self {
        Family {
            l: 2 * r,
            memo: HashMap::new(),
        }
    }

    /// Family length of aᵖ, with the chosen split m (None = direct).
    fn len_a(&mut self, p: i64) -> (i64, Option<i64>) {
        let p = p.abs();
        if let Some(&v) = self.memo.get(&p) {
            return v;
        }
        let mut best = (p, None);
        if 2 * p > self.l {
            let base = p / self.l;
            for m in (base - 1).max(1)..=base + 2 {
                let rem = (p - m * self.l).abs();
                if m >= p || rem >= p {
                    continue;
                }
                let cost = 4 + 2 * self.len_a(m).0 + self.len_a(rem).0;
                if cost < best.0 {
                    best = (cost, Some(m));
                }
            }
        }
        self.memo.insert(p, best);
        best
    }

    fn word_a(&mut self, p: i64) -> Vec<Letter> {
        if p < 0 {
            return super::invert_word(&self.word_a(-p));
        }
        match self.len_a(p).1 {
            None => word_power(&[Letter::pos(A)], p),
            Some(m) => {
                let wm = self.word_a(m);
                let mut w = vec![Letter::neg(S)];
                w.extend(&wm);
                w.extend([Letter::pos(S), Letter::neg(T)]);
                w.extend(&wm);
                w.push(Letter::pos(T));
                w.extend(self.word_a(p - m * self.l));
                w
            }
        }
    }

    /// Cost of (aʳb)ᵐ (stable = s) or (aʳb⁻¹)ᵐ (stable = t): either the
    /// direct heavy edges or the conjugated a-path.
    fn seg(&mut self, m: i64) -> i64 {
        (self.l * m.abs()).min(2 + self.len_a(m).0)
    }

    fn word_seg(&mut self, m: i64, heavy: usize, stable: usize) -> Vec<Letter> {
        if m == 0 {
            return Vec::new();
        }
        if self.l * m.abs() <= 2 + self.len_a(m).0 {
            return word_power(&[Letter::pos(heavy)], m);
        }
        let mut w = vec![Letter::neg(stable)];
        w.extend(self.word_a(m));
        w.push(Letter::pos(stable));
        w
    }
}

/// A family path from 1 to aˣbʸ: (aʳb)ᵐ(aʳb⁻¹)ⁿaᵠ with m − n = y,
/// r(m+n) + q = x, the split chosen to minimise total family length.
/// The length is an upper bound on the distance; see [`Snowflake`]
/// distance searches for certification.
pub fn snowflake_geodesic(x: i64, y: i64, r: i64) -> (Vec<Letter>, i64) {
    let mut fam = Family::new(r);
    let k0 = x.div_euclid(r);
    let mut candidates: Vec<i64> = (k0 - 2 * fam.l - 2..=k0 + 2 * fam.l + 2).collect();
    for c in [y, -y] {
        candidates.extend(c - 4..=c + 4);
    }
    candidates.sort();
    candidates.dedup();
    let mut best: Option<(i64, i64, i64, i64)> = None;
    for k in candidates {
        if (k - y).rem_euclid(2) != 0 {
            continue;
        }
        let (m, n, q) = ((k + y) / 2, (k - y) / 2, x - r * k);
        let cost = fam.seg(m) + fam.seg(n) + fam.len_a(q).0;
        let key = (cost, q.abs(), m.abs(), k);
        if best.is_none_or(|b| key < b) {
            best = Some(key);
        }
    }
    let (cost, _, _, k) = best.expect("candidate set nonempty");
    let (m, n, q) = ((k + y) / 2, (k - y) / 2, x - r * k);
    let mut w = fam.word_seg(m, U, S);
    w.extend(fam.word_seg(n, V, T));
    w.extend(fam.word_a(q));
    (w, cost)
}
