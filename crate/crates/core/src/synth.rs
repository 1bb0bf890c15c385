//! Seeded toy data generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::LabeledDataset;
use crate::dataset::BinaryDataset;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn independent_rows(rng: &mut ChaCha8Rng, n_rows: usize, n_attrs: usize) -> Vec<Vec<bool>> {
    (0..n_rows).map(|_| (0..n_attrs).map(|_| rng.gen_bool(0.5)).collect()).collect()
}

/// Each attribute copies the previous one, flipped with probability `flip`;
/// the first is a fair coin.
fn chain_rows(rng: &mut ChaCha8Rng, n_rows: usize, n_attrs: usize, flip: f64) -> Vec<Vec<bool>> {
    (0..n_rows)
        .map(|_| {
            let mut row = Vec::with_capacity(n_attrs);
            let mut prev = rng.gen_bool(0.5);
            row.push(prev);
            for _ in 1..n_attrs {
                prev ^= rng.gen_bool(flip);
                row.push(prev);
            }
            row
        })
        .collect()
}

/// Every cell an independent fair coin.
pub fn independent(n_rows: usize, n_attrs: usize, seed: u64) -> BinaryDataset {
    let rows = independent_rows(&mut rng(seed), n_rows, n_attrs);
    BinaryDataset::from_rows(&rows, n_attrs).expect("non-empty")
}

/// Markov chain over the attributes: `a_{k+1}` equals `a_k` except with
/// probability `flip`.
pub fn chain(n_rows: usize, n_attrs: usize, flip: f64, seed: u64) -> BinaryDataset {
    let rows = chain_rows(&mut rng(seed), n_rows, n_attrs, flip);
    BinaryDataset::from_rows(&rows, n_attrs).expect("non-empty")
}

/// Class "0" rows from the chain process (flip 0.1), class "1" rows
/// independent, interleaved.
pub fn two_class(rows_per_class: usize, n_attrs: usize, seed: u64) -> LabeledDataset {
    let mut r = rng(seed);
    let chain = chain_rows(&mut r, rows_per_class, n_attrs, 0.1);
    let indep = independent_rows(&mut r, rows_per_class, n_attrs);
    let mut rows = Vec::with_capacity(2 * rows_per_class);
    let mut labels = Vec::with_capacity(2 * rows_per_class);
    for (c, i) in chain.into_iter().zip(indep) {
        rows.push(c);
        labels.push("0".to_string());
        rows.push(i);
        labels.push("1".to_string());
    }
    let ds = BinaryDataset::from_rows(&rows, n_attrs).expect("non-empty");
    LabeledDataset::new(ds, labels).expect("labels match rows")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_seeded() {
        assert_eq!(chain(50, 5, 0.1, 1).to_fimi(), chain(50, 5, 0.1, 1).to_fimi());
        assert_ne!(chain(50, 5, 0.1, 1).to_fimi(), chain(50, 5, 0.1, 2).to_fimi());
    }

    #[test]
    fn chain_neighbours_agree_ninety_percent() {
        let ds = chain(4000, 3, 0.1, 11);
        let same = (0..ds.n_rows()).filter(|&r| ds.column(0).contains(r) == ds.column(1).contains(r)).count();
        let frac = same as f64 / 4000.0;
        assert!((frac - 0.9).abs() < 0.02, "{frac}");
        assert!((ds.density() - 0.5).abs() < 0.05);
    }
}
