use super::{Element, Stable};

/// 128-bit fingerprint of a canonical element. Two independent 64-bit lanes
/// of a multiply-xorshift mixer over the canonical serialization.
pub fn fingerprint(g: &Element) -> u128 {
    let mut h = Mixer::default();
    feed(&mut h, g);
    h.finish()
}

struct Mixer {
    lo: u64,
    hi: u64,
}

impl Default for Mixer {
    fn default() -> Self {
        Mixer {
            lo: 0x243f_6a88_85a3_08d3,
            hi: 0x1319_8a2e_0370_7344,
        }
    }
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Mixer {
    fn word(&mut self, x: u64) {
        self.lo = mix(self.lo ^ x).wrapping_add(0x9e37_79b9_7f4a_7c15);
        self.hi = mix(self.hi.rotate_left(17) ^ x.wrapping_mul(0xd6e8_feb8_6659_fd93));
    }

    fn finish(&self) -> u128 {
        ((mix(self.hi ^ self.lo) as u128) << 64) | mix(self.lo ^ 0x5851_f42d_4c95_7f2d) as u128
    }
}

fn feed(h: &mut Mixer, g: &Element) {
    match g {
        Element::Word(w) => {
            h.word(1);
            h.word(w.len() as u64);
            for l in w.letters() {
                h.word(l.code() as u64);
            }
        }
        Element::Britton(b) => {
            h.word(2);
            h.word(b.stables.len() as u64);
            for (i, v) in b.vertices.iter().enumerate() {
                h.word(v.0 as u64);
                h.word(v.1 as u64);
                if let Some(e) = b.stables.get(i) {
                    h.word(match e {
                        Stable::S => 11,
                        Stable::SInv => 12,
                        Stable::T => 13,
                        Stable::TInv => 14,
                    });
                }
            }
        }
        Element::Pair(p) => {
            h.word(3);
            feed(h, &p.0);
            h.word(0xfeed);
            feed(h, &p.1);
        }
        Element::Syllables(s) => {
            h.word(4);
            h.word(s.len() as u64);
            for (side, e) in s {
                h.word(*side as u64);
                feed(h, e);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{FreeGroup, GroupModel};
    use std::collections::HashSet;

    #[test]
    fn distinct_on_a_ball() {
        let g = FreeGroup::new(2);
        let mut seen = HashSet::new();
        let mut frontier = vec![g.identity()];
        let mut all = vec![g.identity()];
        for _ in 0..6 {
            let mut next = Vec::new();
            for x in &frontier {
                let mut out = Vec::new();
                g.neighbors(x, &mut out);
                for (y, _) in out {
                    if y.as_word().len() > x.as_word().len() {
                        next.push(y);
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        for x in &all {
            assert!(seen.insert(fingerprint(x)));
        }
    }
}
