use super::product::suffixed;
use super::{Element, GeneratorSpec, GroupModel, Letter};
use std::sync::Arc;

/// Free product A ∗ B. Elements are alternating nontrivial syllables.
#[derive(Debug, Clone)]
pub struct FreeProduct {
    pub factors: [Arc<dyn GroupModel>; 2],
    gens: Vec<GeneratorSpec>,
    split: usize,
}

impl FreeProduct {
    pub fn new(left: Arc<dyn GroupModel>, right: Arc<dyn GroupModel>) -> Self {
        let gens = suffixed(&*left, &*right);
        let split = left.rank();
        FreeProduct {
            factors: [left, right],
            gens,
            split,
        }
    }

    fn syllables(g: &Element) -> &[(u8, Element)] {
        match g {
            Element::Syllables(s) => s,
            other => panic!("expected syllables, found {other:?}"),
        }
    }

    fn local(&self, l: Letter) -> (u8, Letter) {
        if l.generator() < self.split {
            (0, l)
        } else {
            (1, Letter::new(l.generator() - self.split, l.is_inverse()))
        }
    }
}

impl GroupModel for FreeProduct {
    fn spec(&self) -> String {
        format!("freeprod({},{})", self.factors[0].spec(), self.factors[1].spec())
    }

    fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    fn identity(&self) -> Element {
        Element::Syllables(Vec::new())
    }

    fn mul_letter(&self, g: &Element, l: Letter) -> Element {
        let mut s = FreeProduct::syllables(g).to_vec();
        let (side, l) = self.local(l);
        let factor = &self.factors[side as usize];
        match s.last_mut() {
            Some((last_side, x)) if *last_side == side => {
                let y = factor.mul_letter(x, l);
                if y == factor.identity() {
                    s.pop();
                } else {
                    *x = y;
                }
            }
            _ => s.push((side, factor.mul_letter(&factor.identity(), l))),
        }
        Element::Syllables(s)
    }

    fn word_of(&self, g: &Element) -> Vec<Letter> {
        let mut w = Vec::new();
        for (side, x) in FreeProduct::syllables(g) {
            let off = if *side == 0 { 0 } else { self.split };
            w.extend(
                self.factors[*side as usize]
                    .word_of(x)
                    .into_iter()
                    .map(|l| l.offset(off)),
            );
        }
        w
    }

    fn exact_norm(&self, g: &Element) -> Option<f64> {
        FreeProduct::syllables(g)
            .iter()
            .map(|(side, x)| self.factors[*side as usize].exact_norm(x))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{FreeGroup, Raag};

    #[test]
    fn syllables_merge_and_cancel() {
        let z2 = Arc::new(Raag::parse("a-b").unwrap());
        let fp = FreeProduct::new(z2, Arc::new(FreeGroup::new(1)));
        let w = fp.parse_word("a_1 a_2 -a_2 b_1 -a_1").unwrap();
        let g = fp.evaluate(&w);
        assert_eq!(fp.format(&g), "b_1");
        assert_eq!(fp.exact_norm(&g), Some(1.0));
        let h = fp.evaluate(&fp.parse_word("a_1 a_2 b_1").unwrap());
        assert_eq!(fp.exact_norm(&h), Some(3.0));
        assert_eq!(fp.multiply(&h, &fp.inverse(&h)), fp.identity());
    }
}
