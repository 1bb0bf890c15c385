//! Fixed-width bitmaps over transaction indices.
//!
//! Every counting question in the crate reduces to an AND of two or three
//! bitmaps followed by a popcount, so the counting helpers here avoid
//! materializing intermediate bitmaps.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitmap {
    words: Vec<u64>,
    n_bits: usize,
}

/// A set of transaction indices.
pub type RowSet = Bitmap;

#[inline]
fn n_words(n_bits: usize) -> usize {
    n_bits.div_ceil(WORD)
}

impl Bitmap {
    pub fn empty(n_bits: usize) -> Self {
        Self { words: vec![0; n_words(n_bits)], n_bits }
    }

    pub fn full(n_bits: usize) -> Self {
        let mut b = Self { words: vec![!0; n_words(n_bits)], n_bits };
        b.clear_tail();
        b
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n_bits: usize, indices: I) -> Self {
        let mut b = Self::empty(n_bits);
        for i in indices {
            b.insert(i);
        }
        b
    }

    fn clear_tail(&mut self) {
        let rem = self.n_bits % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Width of the bitmap (the universe size, not the cardinality).
    #[inline]
    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.n_bits, "bit {i} out of range {}", self.n_bits);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.n_bits, "bit {i} out of range {}", self.n_bits);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.n_bits && self.words[i / WORD] & (1 << (i % WORD)) != 0
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn and(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n_bits, other.n_bits);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Self { words, n_bits: self.n_bits }
    }

    pub fn and_not(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n_bits, other.n_bits);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect();
        Self { words, n_bits: self.n_bits }
    }

    pub fn or(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n_bits, other.n_bits);
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        Self { words, n_bits: self.n_bits }
    }

    pub fn and_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.n_bits, other.n_bits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn and_not_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.n_bits, other.n_bits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// `|self ∩ other|`
    #[inline]
    pub fn and_count(&self, other: &Self) -> usize {
        debug_assert_eq!(self.n_bits, other.n_bits);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// `|self ∩ a ∩ b|`
    #[inline]
    pub fn and2_count(&self, a: &Self, b: &Self) -> usize {
        self.words
            .iter()
            .zip(&a.words)
            .zip(&b.words)
            .map(|((x, y), z)| (x & y & z).count_ones() as usize)
            .sum()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.and_count(other) == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            })
        })
    }
}

impl fmt::Debug for Bitmap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
