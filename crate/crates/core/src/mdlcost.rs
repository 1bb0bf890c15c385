//! Code lengths, in bits.
//!
//! A leaf holding `M` rows with `n1` ones pays its data bits
//! `-n1 log(n1/M) - n0 log(n0/M)`, the NML regret of a Bernoulli coding
//! table over `M` rows, and one bit marking it as a leaf. Each internal node
//! pays one marker bit plus `log K` bits naming its split attribute.

use std::collections::HashMap;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::dtree::{DecisionTree, TreeModel};
use crate::error::{Error, Result};

/// Base-2 code length.
pub type Bits = f64;

/// Data bits for one leaf with the given target-value counts.
pub fn entropy_cost(n0: usize, n1: usize) -> Bits {
    let m = (n0 + n1) as f64;
    let term = |n: usize| {
        if n == 0 {
            0.0
        } else {
            let n = n as f64;
            -n * (n / m).log2()
        }
    };
    term(n0) + term(n1)
}

/// Parametric complexity of a Bernoulli coding table over `m` rows:
/// `log2 Σ_k C(m,k) (k/m)^k ((m-k)/m)^(m-k)`.
///
/// Memoized in a process-wide table.
pub fn leaf_regret(m: usize) -> Bits {
    regret_table().get(m)
}

fn regret_table() -> &'static RegretTable {
    static TABLE: OnceLock<RegretTable> = OnceLock::new();
    TABLE.get_or_init(RegretTable::default)
}

/// Memo of `leaf_regret` values. Lookups take a shared lock; a miss computes
/// outside the lock and inserts under the write lock.
#[derive(Default)]
pub struct RegretTable {
    memo: RwLock<HashMap<usize, Bits>>,
}

impl RegretTable {
    pub fn get(&self, m: usize) -> Bits {
        if let Some(&v) = self.memo.read().expect("regret memo poisoned").get(&m) {
            return v;
        }
        let v = regret_uncached(m);
        self.memo.write().expect("regret memo poisoned").insert(m, v);
        v
    }

    /// Fills the memo for every `M` in `0..=max_m`.
    pub fn precompute(&self, max_m: usize) {
        let missing: Vec<usize> = {
            let memo = self.memo.read().expect("regret memo poisoned");
            (0..=max_m).filter(|m| !memo.contains_key(m)).collect()
        };
        let values: Vec<(usize, Bits)> = missing.into_iter().map(|m| (m, regret_uncached(m))).collect();
        self.memo.write().expect("regret memo poisoned").extend(values);
    }
}

/// Direct summation in log space. Every term is a binomial probability and so
/// at most 1; the terms at `k = 0` and `k = m` are exactly 1.
fn regret_uncached(m: usize) -> Bits {
    if m <= 1 {
        // m = 0: one term, 0^0 = 1. m = 1: two terms, both 1.
        return if m == 0 { 0.0 } else { 1.0 };
    }
    let mf = m as f64;
    let ln_m = mf.ln();
    let ln_fact_m = ln_gamma(mf + 1.0);
    let log_terms = (0..=m).map(|k| {
        if k == 0 || k == m {
            return 0.0;
        }
        let kf = k as f64;
        let rest = mf - kf;
        let ln_binom = ln_fact_m - ln_gamma(kf + 1.0) - ln_gamma(rest + 1.0);
        ln_binom + kf * (kf.ln() - ln_m) + rest * (rest.ln() - ln_m)
    });
    log_sum_exp(log_terms) / std::f64::consts::LN_2
}

/// Natural-log sum of exponentials.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let terms: Vec<f64> = terms.into_iter().collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// Bits to name one internal node: a marker bit plus `log2 K` for the attribute.
pub fn internal_node_cost(n_attrs: usize) -> Bits {
    1.0 + (n_attrs as f64).log2()
}

/// Cost breakdown for a tree or a whole model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub data_bits: Bits,
    pub structure_bits: Bits,
    pub regret_bits: Bits,
    pub total: Bits,
}

impl CostReport {
    /// Cost of a single leaf.
    pub fn leaf(n0: usize, n1: usize) -> Self {
        Self::from_parts(entropy_cost(n0, n1), 1.0, leaf_regret(n0 + n1))
    }

    pub fn internal(n_attrs: usize) -> Self {
        Self::from_parts(0.0, internal_node_cost(n_attrs), 0.0)
    }

    pub fn from_parts(data_bits: Bits, structure_bits: Bits, regret_bits: Bits) -> Self {
        Self { data_bits, structure_bits, regret_bits, total: data_bits + structure_bits + regret_bits }
    }
}

impl Add for CostReport {
    type Output = CostReport;

    fn add(self, rhs: Self) -> Self {
        CostReport {
            data_bits: self.data_bits + rhs.data_bits,
            structure_bits: self.structure_bits + rhs.structure_bits,
            regret_bits: self.regret_bits + rhs.regret_bits,
            total: self.total + rhs.total,
        }
    }
}

impl AddAssign for CostReport {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sum for CostReport {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(CostReport::default(), Add::add)
    }
}

/// Total bits for a leaf: marker + regret + data.
#[inline]
pub fn leaf_cost(n0: usize, n1: usize) -> Bits {
    1.0 + leaf_regret(n0 + n1) + entropy_cost(n0, n1)
}

/// Cost of one tree over a dataset with `n_attrs` attributes.
pub fn tree_cost(tree: &DecisionTree, n_attrs: usize) -> Result<CostReport> {
    if n_attrs == 0 {
        return Err(Error::InvalidArgument("a model needs at least one attribute".into()));
    }
    for info in tree.leaves() {
        if info.leaf.table.rows() != info.leaf.rows.count() {
            return Err(Error::InconsistentCounts(format!(
                "leaf {} counts {:?} but holds {} rows",
                info.index.0,
                info.leaf.table,
                info.leaf.rows.count()
            )));
        }
    }
    Ok(tree.root().cost(n_attrs))
}

/// Sum of [`tree_cost`] over the model's trees.
pub fn model_cost(model: &TreeModel) -> Result<CostReport> {
    let k = model.n_attrs();
    let mut total = CostReport::default();
    for (i, t) in model.trees().iter().enumerate() {
        if t.target() != i {
            return Err(Error::MissingTree(i));
        }
        total += tree_cost(t, k)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy_cost(2, 2), 4.0);
        assert_eq!(entropy_cost(5, 0), 0.0);
        assert_eq!(entropy_cost(0, 0), 0.0);
        // 50 * H(0.3), evaluated at 30 digits.
        assert_abs_diff_eq!(entropy_cost(35, 15), 44.064_544_961_534_63, epsilon = 1e-9);
    }

    #[test]
    fn regret_small_values() {
        assert_eq!(leaf_regret(0), 0.0);
        assert_eq!(leaf_regret(1), 1.0);
        // 1 + 0.5 + 1
        assert_abs_diff_eq!(leaf_regret(2), 2.5f64.log2(), epsilon = 1e-12);
        // 1 + 27/64 + 6/16 + 27/64 + 1
        assert_abs_diff_eq!(leaf_regret(4), 3.21875f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn regret_of_fifty_rows() {
        assert_abs_diff_eq!(leaf_regret(50), 3.25, epsilon = 0.01);
    }

    #[test]
    fn regret_is_monotone() {
        let mut prev = leaf_regret(0);
        for m in 1..600 {
            let r = leaf_regret(m);
            assert!(r >= prev, "regret({m}) = {r} < {prev}");
            prev = r;
        }
    }

    #[test]
    fn precompute_matches_lazy() {
        let t = RegretTable::default();
        t.precompute(30);
        for m in 0..=30 {
            assert_eq!(t.get(m), leaf_regret(m));
        }
    }

    #[test]
    fn entropy_is_m_times_binary_entropy() {
        for n0 in 0..40 {
            for n1 in 0..40 {
                let m = n0 + n1;
                if m == 0 {
                    continue;
                }
                let p = n1 as f64 / m as f64;
                let h = if p == 0.0 || p == 1.0 { 0.0 } else { -p * p.log2() - (1.0 - p) * (1.0 - p).log2() };
                assert_abs_diff_eq!(entropy_cost(n0, n1), m as f64 * h, epsilon = 1e-9);
                assert!(entropy_cost(n0, n1) <= m as f64 + 1e-12);
            }
        }
    }

    #[test]
    fn report_total_is_sum_of_parts() {
        let r = CostReport::leaf(3, 7) + CostReport::internal(5) + CostReport::leaf(0, 0);
        assert_abs_diff_eq!(r.total, r.data_bits + r.structure_bits + r.regret_bits, epsilon = 1e-9);
        assert_eq!(r.structure_bits, 2.0 + internal_node_cost(5));
    }
}
