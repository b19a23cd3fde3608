//! Bernoulli numbers with `B_1 = -1/2`, from the recurrence
//! `Σ_{k=0}^{m} C(m+1, k) B_k = 0`.

use std::sync::{Mutex, OnceLock};

use crate::arith::{binomial, ExactRational};

/// Lazily grown table of `B_0, B_1, ...`.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<ExactRational>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliTable {
    pub fn new() -> Self {
        Self {
            values: vec![ExactRational::one()],
        }
    }

    /// Number of entries computed so far.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&mut self, m: usize) -> ExactRational {
        while self.values.len() <= m {
            let next = self.values.len();
            let value = if next >= 3 && next % 2 == 1 {
                ExactRational::zero()
            } else {
                let acc: ExactRational = self
                    .values
                    .iter()
                    .enumerate()
                    .map(|(k, b)| b * &ExactRational::from(binomial(next as u64 + 1, k as u64)))
                    .sum();
                -(acc
                    .checked_div(&ExactRational::from(next + 1))
                    .expect("nonzero"))
            };
            self.values.push(value);
        }
        self.values[m].clone()
    }
}

fn shared_table() -> &'static Mutex<BernoulliTable> {
    static TABLE: OnceLock<Mutex<BernoulliTable>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(BernoulliTable::new()))
}

/// `B_m`, served from a process-wide table guarded by a mutex.
pub fn bernoulli(m: usize) -> ExactRational {
    shared_table()
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner())
        .get(m)
}
