//! Word-packed bitsets used by the sumset dynamic programs.

/// A bitset of fixed length `len`; bits at positions `>= len` are always 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_full(&self) -> bool {
        self.count_ones() == self.len
    }

    pub fn any(&self) -> bool {
        self.words.iter().any(|&w| w != 0)
    }

    pub fn or_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// `self |= src << k`, dropping bits shifted past `len`.
    pub fn or_shifted_up(&mut self, src: &Self, k: usize) {
        debug_assert_eq!(self.len, src.len);
        if k >= self.len {
            return;
        }
        let (ws, bs) = (k / 64, k % 64);
        let n = self.words.len();
        for j in (ws..n).rev() {
            let mut w = src.words[j - ws] << bs;
            if bs > 0 && j > ws {
                w |= src.words[j - ws - 1] >> (64 - bs);
            }
            self.words[j] |= w;
        }
        self.mask_tail();
    }

    /// `self |= src >> k`, dropping bits shifted below 0.
    pub fn or_shifted_down(&mut self, src: &Self, k: usize) {
        debug_assert_eq!(self.len, src.len);
        if k >= self.len {
            return;
        }
        let (ws, bs) = (k / 64, k % 64);
        let n = self.words.len();
        for j in 0..n - ws {
            let mut w = src.words[j + ws] >> bs;
            if bs > 0 && j + ws + 1 < n {
                w |= src.words[j + ws + 1] << (64 - bs);
            }
            self.words[j] |= w;
        }
    }

    /// `self |= rotate(src, k)` on ℤ/len: bit `i` of `src` lands on `(i + k) mod len`.
    pub fn or_rotated(&mut self, src: &Self, k: usize) {
        let k = k % self.len.max(1);
        self.or_shifted_up(src, k);
        if k > 0 {
            self.or_shifted_down(src, self.len - k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_vec(v: &[bool]) -> Bits {
        let mut b = Bits::new(v.len());
        for (i, &x) in v.iter().enumerate() {
            if x {
                b.set(i);
            }
        }
        b
    }

    proptest! {
        #[test]
        fn rotation_matches_naive(bits in prop::collection::vec(any::<bool>(), 1..300), k in 0usize..400) {
            let n = bits.len();
            let src = from_vec(&bits);
            let mut dst = Bits::new(n);
            dst.or_rotated(&src, k);
            for i in 0..n {
                prop_assert_eq!(dst.get((i + k) % n), bits[i]);
            }
            prop_assert_eq!(dst.count_ones(), src.count_ones());
        }

        #[test]
        fn shifts_match_naive(bits in prop::collection::vec(any::<bool>(), 1..300), k in 0usize..300) {
            let n = bits.len();
            let src = from_vec(&bits);
            let mut up = Bits::new(n);
            up.or_shifted_up(&src, k);
            let mut down = Bits::new(n);
            down.or_shifted_down(&src, k);
            for i in 0..n {
                prop_assert_eq!(up.get(i), i >= k && bits[i - k]);
                prop_assert_eq!(down.get(i), i + k < n && bits[i + k]);
            }
        }
    }

    #[test]
    fn iter_ones_lists_set_bits() {
        let b = from_vec(&[true, false, false, true, true]);
        assert_eq!(b.iter_ones().collect::<Vec<_>>(), vec![0, 3, 4]);
        assert!(!b.is_full());
        assert!(from_vec(&[true; 70]).is_full());
    }
}
