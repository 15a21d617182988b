//! Group models with canonical element forms and weighted generator oracles.

mod fingerprint;
pub mod free;
pub mod freeprod;
pub mod product;
pub mod raag;
pub mod snowflake;
pub mod spec;
pub mod word;

pub use fingerprint::fingerprint;
pub use free::FreeGroup;
pub use freeprod::FreeProduct;
pub use product::Product;
pub use raag::{raag_normal_form, Raag, RaagNormalForm};
pub use snowflake::{britton_reduce, snowflake_geodesic, BrittonForm, Snowflake, Stable};
pub use spec::{parse_group, product_factors};
pub use word::{FreeWord, Letter};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub label: String,
    pub weight: f64,
    pub inverse_label: String,
}

impl GeneratorSpec {
    pub fn new(label: impl Into<String>, weight: f64) -> Self {
        let label = label.into();
        let inverse_label = format!("-{label}");
        GeneratorSpec {
            label,
            weight,
            inverse_label,
        }
    }
}

/// Canonical group element. Which variant appears depends on the model.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Free groups and RAAG normal forms (blocks flattened).
    Word(FreeWord),
    /// Snowflake groups.
    Britton(Box<BrittonForm>),
    /// Direct products.
    Pair(Box<(Element, Element)>),
    /// Free products: alternating nontrivial syllables tagged by factor.
    Syllables(Vec<(u8, Element)>),
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Word(w) => write!(f, "{w:?}"),
            Element::Britton(b) => write!(f, "{b:?}"),
            Element::Pair(p) => write!(f, "({:?}, {:?})", p.0, p.1),
            Element::Syllables(s) => f.debug_list().entries(s.iter()).finish(),
        }
    }
}

impl Element {
    pub fn as_word(&self) -> &FreeWord {
        match self {
            Element::Word(w) => w,
            other => panic!("expected a word element, found {other:?}"),
        }
    }
}

/// A finitely generated group with a weighted symmetric generating set.
///
/// Implementations are immutable and every method is pure, so models can be
/// shared freely across threads.
pub trait GroupModel: Send + Sync + fmt::Debug {
    /// The spec string this model was built from.
    fn spec(&self) -> String;
    fn generators(&self) -> &[GeneratorSpec];
    fn identity(&self) -> Element;
    fn mul_letter(&self, g: &Element, l: Letter) -> Element;
    /// Some word evaluating to `g` (not necessarily geodesic).
    fn word_of(&self, g: &Element) -> Vec<Letter>;

    /// Exact word-metric norm when the canonical form is geodesic.
    fn exact_norm(&self, _g: &Element) -> Option<f64> {
        None
    }

    /// Extra word labels that expand to several letters.
    fn expand_alias(&self, _label: &str) -> Option<Vec<Letter>> {
        None
    }

    fn weight(&self, l: Letter) -> f64 {
        self.generators()[l.generator()].weight
    }

    fn rank(&self) -> usize {
        self.generators().len()
    }

    fn integral_weights(&self) -> bool {
        self.generators().iter().all(|g| g.weight.fract() == 0.0)
    }

    fn inverse(&self, g: &Element) -> Element {
        let w: Vec<Letter> = self.word_of(g).iter().rev().map(|l| l.inverse()).collect();
        self.evaluate(&w)
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        self.word_of(h)
            .iter()
            .fold(g.clone(), |acc, &l| self.mul_letter(&acc, l))
    }

    fn evaluate(&self, word: &[Letter]) -> Element {
        word.iter().fold(self.identity(), |acc, &l| self.mul_letter(&acc, l))
    }

    fn neighbors(&self, g: &Element, out: &mut Vec<(Element, f64)>) {
        for (i, gen) in self.generators().iter().enumerate() {
            out.push((self.mul_letter(g, Letter::pos(i)), gen.weight));
            out.push((self.mul_letter(g, Letter::neg(i)), gen.weight));
        }
    }

    fn label_index(&self, label: &str) -> Option<usize> {
        self.generators().iter().position(|g| g.label == label)
    }

    /// Parses whitespace-separated signed labels, e.g. `a b -a s^3`.
    fn parse_word(&self, text: &str) -> Result<Vec<Letter>> {
        parse_word_with(text, |label| {
            if let Some(i) = self.label_index(label) {
                Some(vec![Letter::pos(i)])
            } else {
                self.expand_alias(label)
            }
        })
    }

    fn format_word(&self, word: &[Letter]) -> String {
        format_word_with(word, |i| self.generators()[i].label.clone())
    }

    fn format(&self, g: &Element) -> String {
        self.format_word(&self.word_of(g))
    }

    fn word_weight(&self, word: &[Letter]) -> f64 {
        word.iter().map(|&l| self.weight(l)).sum()
    }
}

pub fn invert_word(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|l| l.inverse()).collect()
}

pub fn word_power(word: &[Letter], n: i64) -> Vec<Letter> {
    let base = if n < 0 { invert_word(word) } else { word.to_vec() };
    let mut out = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
    for _ in 0..n.unsigned_abs() {
        out.extend_from_slice(&base);
    }
    out
}

pub(crate) fn parse_word_with(text: &str, lookup: impl Fn(&str) -> Option<Vec<Letter>>) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    let mut column = 1;
    for token in text.split_whitespace() {
        let start = text[column - 1..].find(token).map(|i| i + column).unwrap_or(column);
        column = start + token.len();
        if token == "1" || token == "e" {
            continue;
        }
        let (negated, rest) = match token.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, token),
        };
        let (label, exp) = match rest.split_once('^') {
            Some((l, e)) => {
                let e: i64 = e
                    .parse()
                    .map_err(|_| Error::parse(start, format!("bad exponent in `{token}`")))?;
                (l, e)
            }
            None => (rest, 1),
        };
        let letters = lookup(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let exp = if negated { -exp } else { exp };
        out.extend(word_power(&letters, exp));
    }
    Ok(out)
}

/// Formats a word compressing runs into powers: `a^3 -b`.
pub(crate) fn format_word_with(word: &[Letter], label: impl Fn(usize) -> String) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < word.len() {
        let mut j = i;
        while j < word.len() && word[j] == word[i] {
            j += 1;
        }
        let run = j - i;
        let sign = if word[i].is_inverse() { "-" } else { "" };
        let l = label(word[i].generator());
        if run == 1 {
            parts.push(format!("{sign}{l}"));
        } else {
            parts.push(format!("{sign}{l}^{run}"));
        }
        i = j;
    }
    parts.join(" ")
}

pub(crate) fn alphabet_label(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{i}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        let g = FreeGroup::new(2);
        let w = g.parse_word("a b -a b^2 -b^-1").unwrap();
        assert_eq!(g.format_word(&w), "a b -a b^3");
        assert!(matches!(g.parse_word("a z"), Err(Error::UnknownLabel(_))));
        assert!(g.parse_word("1").unwrap().is_empty());
    }
}
