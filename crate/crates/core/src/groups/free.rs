use super::{alphabet_label, Element, FreeWord, GeneratorSpec, GroupModel, Letter};

/// Free group on `rank` generators labelled a, b, c, … with unit weights.
#[derive(Debug, Clone)]
pub struct FreeGroup {
    gens: Vec<GeneratorSpec>,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        FreeGroup {
            gens: (0..rank).map(|i| GeneratorSpec::new(alphabet_label(i), 1.0)).collect(),
        }
    }

    pub fn element(&self, word: &[Letter]) -> Element {
        Element::Word(FreeWord::new(word))
    }
}

/// Freely reduces a word.
pub fn reduce_free(word: &FreeWord) -> FreeWord {
    FreeWord::new(word.letters())
}

impl GroupModel for FreeGroup {
    fn spec(&self) -> String {
        format!("free:{}", self.gens.len())
    }

    fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    fn identity(&self) -> Element {
        Element::Word(FreeWord::identity())
    }

    fn mul_letter(&self, g: &Element, l: Letter) -> Element {
        Element::Word(g.as_word().times(l))
    }

    fn word_of(&self, g: &Element) -> Vec<Letter> {
        g.as_word().letters().to_vec()
    }

    fn exact_norm(&self, g: &Element) -> Option<f64> {
        Some(g.as_word().len() as f64)
    }

    fn inverse(&self, g: &Element) -> Element {
        Element::Word(g.as_word().inverse())
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        Element::Word(g.as_word().mul(h.as_word()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms() {
        let f = FreeGroup::new(2);
        let w = f.evaluate(&f.parse_word("a b a b").unwrap());
        assert_eq!(f.exact_norm(&w), Some(4.0));
        let e = f.evaluate(&f.parse_word("a b -b -a").unwrap());
        assert_eq!(e, f.identity());
        assert_eq!(f.spec(), "free:2");
    }
}
