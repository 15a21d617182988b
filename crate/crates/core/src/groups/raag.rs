use super::{Element, FreeWord, GeneratorSpec, GroupModel, Letter};
use crate::error::{Error, Result};
use serde::Serialize;

/// Right-angled Artin group of a defining graph with unit weights.
#[derive(Debug, Clone)]
pub struct Raag {
    gens: Vec<GeneratorSpec>,
    commute: Vec<Vec<bool>>,
    edges: Vec<(usize, usize)>,
}

/// Cartier–Foata form: blocks of pairwise commuting letters, each block
/// sorted, every letter of block i+1 failing to commute with some letter
/// of block i.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RaagNormalForm {
    pub blocks: Vec<Vec<Letter>>,
}

impl RaagNormalForm {
    pub fn flatten(&self) -> Vec<Letter> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

impl Raag {
    /// Builds from vertex labels and edges between label indices.
    pub fn new(labels: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Invalid("RAAG needs at least one vertex".into()));
        }
        let mut commute = vec![vec![false; n]; n];
        for &(i, j) in &edges {
            if i == j || i >= n || j >= n {
                return Err(Error::Invalid(format!("bad edge ({i},{j})")));
            }
            commute[i][j] = true;
            commute[j][i] = true;
        }
        Ok(Raag {
            gens: labels.into_iter().map(|l| GeneratorSpec::new(l, 1.0)).collect(),
            commute,
            edges,
        })
    }

    /// Parses `a-b,b-c,d`: edges and isolated vertices, labels in order of
    /// first appearance.
    pub fn parse(text: &str) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        let index = |l: &str, labels: &mut Vec<String>| -> Result<usize> {
            let l = l.trim();
            if l.is_empty() || !l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::UnknownGroup(format!("raag:{text}")));
            }
            Ok(match labels.iter().position(|x| x == l) {
                Some(i) => i,
                None => {
                    labels.push(l.to_string());
                    labels.len() - 1
                }
            })
        };
        for item in text.split(',') {
            match item.split_once('-') {
                Some((x, y)) => {
                    let i = index(x, &mut labels)?;
                    let j = index(y, &mut labels)?;
                    edges.push((i, j));
                }
                None => {
                    index(item, &mut labels)?;
                }
            }
        }
        Raag::new(labels, edges)
    }

    /// ℤᵏ as the RAAG of the complete graph.
    pub fn free_abelian(labels: Vec<String>) -> Self {
        let n = labels.len();
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Raag::new(labels, edges).expect("valid complete graph")
    }

    pub fn commutes(&self, x: Letter, y: Letter) -> bool {
        self.commute[x.generator()][y.generator()]
    }

    pub fn normal_form(&self, word: &[Letter]) -> RaagNormalForm {
        raag_normal_form(word, &self.commute)
    }

    fn canonical(&self, word: &[Letter]) -> Element {
        let flat = self.normal_form(word).flatten();
        Element::Word(FreeWord::from_reduced(flat.into_iter().collect()))
    }
}

/// Trace-monoid reduction followed by Cartier–Foata layering. `commute` is the
/// adjacency matrix of the defining graph.
pub fn raag_normal_form(word: &[Letter], commute: &[Vec<bool>]) -> RaagNormalForm {
    let c = |x: Letter, y: Letter| commute[x.generator()][y.generator()];
    let mut reduced: Vec<Letter> = Vec::with_capacity(word.len());
    'letters: for &x in word {
        for i in (0..reduced.len()).rev() {
            let y = reduced[i];
            if y == x.inverse() {
                reduced.remove(i);
                continue 'letters;
            }
            if y != x && !c(x, y) {
                break;
            }
        }
        reduced.push(x);
    }
    let mut depth = vec![0usize; reduced.len()];
    let mut max_depth = 0;
    for k in 0..reduced.len() {
        let mut d = 0;
        for j in 0..k {
            let blocks = reduced[j].generator() == reduced[k].generator() || !c(reduced[j], reduced[k]);
            if blocks {
                d = d.max(depth[j] + 1);
            }
        }
        depth[k] = d;
        max_depth = max_depth.max(d + 1);
    }
    let mut blocks = vec![Vec::new(); max_depth];
    for (k, &x) in reduced.iter().enumerate() {
        blocks[depth[k]].push(x);
    }
    for b in &mut blocks {
        b.sort();
    }
    RaagNormalForm { blocks }
}

impl GroupModel for Raag {
    fn spec(&self) -> String {
        let mut items: Vec<String> = self
            .edges
            .iter()
            .map(|&(i, j)| format!("{}-{}", self.gens[i].label, self.gens[j].label))
            .collect();
        for (i, g) in self.gens.iter().enumerate() {
            if !self.edges.iter().any(|&(x, y)| x == i || y == i) {
                items.push(g.label.clone());
            }
        }
        format!("raag:{}", items.join(","))
    }

    fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    fn identity(&self) -> Element {
        Element::Word(FreeWord::identity())
    }

    fn mul_letter(&self, g: &Element, l: Letter) -> Element {
        let mut w = g.as_word().letters().to_vec();
        w.push(l);
        self.canonical(&w)
    }

    fn word_of(&self, g: &Element) -> Vec<Letter> {
        g.as_word().letters().to_vec()
    }

    fn exact_norm(&self, g: &Element) -> Option<f64> {
        Some(g.as_word().len() as f64)
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        let mut w = g.as_word().letters().to_vec();
        w.extend_from_slice(h.as_word().letters());
        self.canonical(&w)
    }

    fn evaluate(&self, word: &[Letter]) -> Element {
        self.canonical(word)
    }
}
