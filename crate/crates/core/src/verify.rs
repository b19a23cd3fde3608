//! Exact cross-checks between the engine, the tree sums and the oracle.
//!
//! Each check walks its parameter range in lexicographic order and stops at
//! the first mismatch, so a failing report always names the smallest
//! counterexample.

use std::fmt;

use serde::Serialize;

use crate::arith::{binomial, ExactRational};
use crate::engine::{EtaMultiset, WEngine, WKey};
use crate::error::Result;
use crate::hodge::{hodge_integral, HodgeQuery};
use crate::oracle::{bernoulli_rhs, gf_expand, oracle_integral};
use crate::trees::tree_sum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub params: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub range: String,
    pub status: Status,
    /// Instances compared (up to and including a counterexample).
    pub instances: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        write!(
            f,
            "{status} {} [{}] instances={}",
            self.check, self.range, self.instances
        )?;
        if let Some(c) = &self.counterexample {
            write!(
                f,
                " counterexample: {} lhs={} rhs={}",
                c.params, c.lhs, c.rhs
            )?;
        }
        Ok(())
    }
}

/// Accumulates comparisons until the first mismatch.
struct Runner {
    check: &'static str,
    range: String,
    instances: u64,
    counterexample: Option<Counterexample>,
}

impl Runner {
    fn new(check: &'static str, range: String) -> Self {
        Self {
            check,
            range,
            instances: 0,
            counterexample: None,
        }
    }

    /// Compare one instance; returns false once a mismatch has been seen.
    fn compare(
        &mut self,
        params: impl FnOnce() -> String,
        lhs: &ExactRational,
        rhs: &ExactRational,
    ) -> bool {
        self.instances += 1;
        if lhs != rhs {
            self.counterexample = Some(Counterexample {
                params: params(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
            return false;
        }
        true
    }

    fn finish(self) -> CheckReport {
        CheckReport {
            check: self.check.to_string(),
            range: self.range,
            status: if self.counterexample.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            instances: self.instances,
            counterexample: self.counterexample,
        }
    }
}

/// `S_{g,n} = W_g(η_1^n)` for `0 ≤ g ≤ g_max`, `1 ≤ n ≤ n_max`.
///
/// `(g, n) = (0, 1)` is skipped: its W-number has exponent `-1` and is not
/// defined by the recursion (the tree side is the single leaf, weight 1).
pub fn check_tree_identity(engine: &mut WEngine, g_max: u32, n_max: u32) -> Result<CheckReport> {
    let mut r = Runner::new(
        "tree-identity",
        format!("0<=g<={g_max}, 1<=n<={n_max}, excluding (g,n)=(0,1)"),
    );
    'outer: for g in 0..=g_max {
        for n in 1..=n_max {
            if (g, n) == (0, 1) {
                continue;
            }
            let key = WKey::new(g, g as i32, EtaMultiset::ones(n as usize)?);
            let w = engine.w_value(&key)?;
            let s = tree_sum(g, n);
            if !r.compare(|| format!("g={g} n={n}"), &s, &w) {
                break 'outer;
            }
        }
    }
    Ok(r.finish())
}

/// Alternating sum `Σ_j (-1)^j C(g,j) S_{g,n+g-j}` against the Bernoulli
/// closed form, for `1 ≤ g ≤ g_max`, `1 ≤ n ≤ n_max`.
pub fn check_bernoulli_identity(g_max: u32, n_max: u32) -> Result<CheckReport> {
    let mut r = Runner::new("bernoulli", format!("1<=g<={g_max}, 1<=n<={n_max}"));
    'outer: for g in 1..=g_max {
        let rhs = bernoulli_rhs(g)?;
        for n in 1..=n_max {
            let lhs = alternating_tree_sum(g, n);
            if !r.compare(|| format!("g={g} n={n}"), &lhs, &rhs) {
                break 'outer;
            }
        }
    }
    Ok(r.finish())
}

/// `Σ_{j=0}^{g} (-1)^j C(g,j) S_{g, n+g-j}`.
pub fn alternating_tree_sum(g: u32, n: u32) -> ExactRational {
    (0..=g)
        .map(|j| {
            let c = ExactRational::from(binomial(g as u64, j as u64)) * tree_sum(g, n + g - j);
            if j % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .sum()
}

/// `S_{0,n} = 1` for `1 ≤ n ≤ n_max`.
pub fn check_genus0(n_max: u32) -> Result<CheckReport> {
    let mut r = Runner::new("genus0", format!("1<=n<={n_max}"));
    let one = ExactRational::one();
    for n in 1..=n_max {
        if !r.compare(|| format!("n={n}"), &tree_sum(0, n), &one) {
            break;
        }
    }
    Ok(r.finish())
}

/// Binomial-decomposition integrals against the series coefficients for
/// `0 ≤ i ≤ g ≤ g_max`, `g ≥ 1`.
pub fn check_oracle_agreement(engine: &mut WEngine, g_max: u32) -> Result<CheckReport> {
    let mut r = Runner::new("oracle", format!("1<=g<={g_max}, 0<=i<=g"));
    let gf = gf_expand(g_max.max(1))?;
    'outer: for g in 1..=g_max {
        for i in 0..=g {
            let lhs = hodge_integral(engine, &HodgeQuery::new(g as i64, i as i64)?)?;
            let rhs = oracle_integral(g, i, &gf)?;
            if !r.compare(|| format!("g={g} i={i}"), &lhs, &rhs) {
                break 'outer;
            }
        }
    }
    Ok(r.finish())
}

/// The auxiliary weight vectors used by default.
pub fn default_aux_set() -> Vec<Vec<i64>> {
    vec![vec![1], vec![2], vec![3], vec![1, 1], vec![2, 3]]
}

/// The integral is the same for every auxiliary weight vector in `aux_set`.
pub fn check_choice_independence(
    engine: &mut WEngine,
    g_max: u32,
    aux_set: &[Vec<i64>],
) -> Result<CheckReport> {
    let names: Vec<String> = aux_set
        .iter()
        .map(|a| {
            format!(
                "[{}]",
                a.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
            )
        })
        .collect();
    let mut r = Runner::new(
        "independence",
        format!("1<=g<={g_max}, 0<=i<=g, aux in {{{}}}", names.join(", ")),
    );
    let Some((first, rest)) = aux_set.split_first() else {
        return Err(crate::error::Error::InvalidQuery("aux set is empty".into()));
    };
    'outer: for g in 1..=g_max {
        for i in 0..=g {
            let base = hodge_integral(
                engine,
                &HodgeQuery::with_weights(g as i64, i as i64, first)?,
            )?;
            for (k, aux) in rest.iter().enumerate() {
                let v =
                    hodge_integral(engine, &HodgeQuery::with_weights(g as i64, i as i64, aux)?)?;
                let params = || format!("g={g} i={i} aux={} vs {}", names[0], names[k + 1]);
                if !r.compare(params, &base, &v) {
                    break 'outer;
                }
            }
        }
    }
    Ok(r.finish())
}
