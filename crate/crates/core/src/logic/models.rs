/// Set of truth assignments over `n` atoms, one bit per assignment.
/// Assignment `k` gives atom `i` the value of bit `i` of `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelSet {
    words: Vec<u64>,
    bits: usize,
}

impl ModelSet {
    pub fn all(atoms: usize) -> Self {
        let bits = 1usize << atoms;
        let mut words = vec![u64::MAX; bits.div_ceil(64)];
        if bits < 64 {
            words[0] = (1u64 << bits) - 1;
        }
        ModelSet { words, bits }
    }

    pub fn none(atoms: usize) -> Self {
        let bits = 1usize << atoms;
        ModelSet {
            words: vec![0; bits.div_ceil(64)],
            bits,
        }
    }

    /// Assignments in which atom `i` is true.
    pub fn atom(atoms: usize, i: usize) -> Self {
        let mut m = ModelSet::none(atoms);
        for k in 0..m.bits {
            if (k >> i) & 1 == 1 {
                m.words[k / 64] |= 1 << (k % 64);
            }
        }
        m
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        if self.bits < 64 {
            out.words[0] &= (1u64 << self.bits) - 1;
        }
        out
    }

    pub fn and_assign(&mut self, rhs: &ModelSet) {
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a &= *b;
        }
    }

    pub fn or_assign(&mut self, rhs: &ModelSet) {
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a |= *b;
        }
    }

    pub fn and(&self, rhs: &ModelSet) -> ModelSet {
        let mut out = self.clone();
        out.and_assign(rhs);
        out
    }

    pub fn or(&self, rhs: &ModelSet) -> ModelSet {
        let mut out = self.clone();
        out.or_assign(rhs);
        out
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn is_subset(&self, rhs: &ModelSet) -> bool {
        self.words.iter().zip(&rhs.words).all(|(a, b)| a & !b == 0)
    }

    pub fn contains(&self, assignment: usize) -> bool {
        (self.words[assignment / 64] >> (assignment % 64)) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_and_large_vocabularies_mask_correctly() {
        for n in [0, 1, 3, 6, 7, 9] {
            let all = ModelSet::all(n);
            assert_eq!(all.count(), 1 << n);
            assert!(all.complement().is_empty());
            if n > 0 {
                let a = ModelSet::atom(n, n - 1);
                assert_eq!(a.count(), 1 << (n - 1));
                assert_eq!(a.or(&a.complement()), all);
            }
        }
    }
}
