use super::{Element, GeneratorSpec, GroupModel, Letter};
use std::sync::Arc;

/// Direct product with the union generating set and the ℓ¹ word metric.
/// Factor labels are suffixed `_1` and `_2`.
#[derive(Debug, Clone)]
pub struct Product {
    pub left: Arc<dyn GroupModel>,
    pub right: Arc<dyn GroupModel>,
    gens: Vec<GeneratorSpec>,
    split: usize,
}

impl Product {
    pub fn new(left: Arc<dyn GroupModel>, right: Arc<dyn GroupModel>) -> Self {
        let gens = suffixed(&*left, &*right);
        let split = left.rank();
        Product {
            left,
            right,
            gens,
            split,
        }
    }

    pub fn pair(&self, a: Element, b: Element) -> Element {
        Element::Pair(Box::new((a, b)))
    }

    pub fn factors(g: &Element) -> (&Element, &Element) {
        match g {
            Element::Pair(p) => (&p.0, &p.1),
            other => panic!("expected a pair, found {other:?}"),
        }
    }

    /// Letters of the left factor embed unchanged; right-factor letters are
    /// offset by the left rank.
    pub fn embed_right(&self, l: Letter) -> Letter {
        l.offset(self.split)
    }
}

pub(crate) fn suffixed(left: &dyn GroupModel, right: &dyn GroupModel) -> Vec<GeneratorSpec> {
    let mut gens = Vec::new();
    for (m, tag) in [(left, "_1"), (right, "_2")] {
        for g in m.generators() {
            gens.push(GeneratorSpec::new(format!("{}{tag}", g.label), g.weight));
        }
    }
    gens
}

impl GroupModel for Product {
    fn spec(&self) -> String {
        format!("product({},{}):l1", self.left.spec(), self.right.spec())
    }

    fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    fn identity(&self) -> Element {
        self.pair(self.left.identity(), self.right.identity())
    }

    fn mul_letter(&self, g: &Element, l: Letter) -> Element {
        let (a, b) = Product::factors(g);
        if l.generator() < self.split {
            self.pair(self.left.mul_letter(a, l), b.clone())
        } else {
            let l = Letter::new(l.generator() - self.split, l.is_inverse());
            self.pair(a.clone(), self.right.mul_letter(b, l))
        }
    }

    fn word_of(&self, g: &Element) -> Vec<Letter> {
        let (a, b) = Product::factors(g);
        let mut w = self.left.word_of(a);
        w.extend(self.right.word_of(b).into_iter().map(|l| self.embed_right(l)));
        w
    }

    fn exact_norm(&self, g: &Element) -> Option<f64> {
        let (a, b) = Product::factors(g);
        Some(self.left.exact_norm(a)? + self.right.exact_norm(b)?)
    }

    fn inverse(&self, g: &Element) -> Element {
        let (a, b) = Product::factors(g);
        self.pair(self.left.inverse(a), self.right.inverse(b))
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        let (a, b) = Product::factors(g);
        let (c, d) = Product::factors(h);
        self.pair(self.left.multiply(a, c), self.right.multiply(b, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FreeGroup;

    #[test]
    fn labels_and_norm() {
        let p = Product::new(Arc::new(FreeGroup::new(2)), Arc::new(FreeGroup::new(2)));
        let labels: Vec<_> = p.generators().iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, ["a_1", "b_1", "a_2", "b_2"]);
        let g = p.evaluate(&p.parse_word("a_1 b_2 a_1 -a_2").unwrap());
        assert_eq!(p.exact_norm(&g), Some(4.0));
        assert_eq!(p.format(&g), "a_1^2 b_2 -a_2");
        assert_eq!(p.spec(), "product(free:2,free:2):l1");
    }
}
