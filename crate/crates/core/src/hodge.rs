//! Hodge integrals `∫_{M̄_{g,1}} ψ_1^{3g-2-i} λ_i` from W-numbers.
//!
//! For any auxiliary weights `a`,
//! `(-1)^g g! ∫ ψ_1^{3g-2-i} λ_i = Σ_{j=0}^{g} (-1)^j C(g,j) W^i_g(η_1^j ∏ η_a)`.

use serde::Serialize;

use crate::arith::{binomial, factorial, ExactRational};
use crate::engine::{EtaMultiset, WEngine, WKey};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeQuery {
    pub g: u32,
    pub i: u32,
    pub aux_weights: EtaMultiset,
}

impl HodgeQuery {
    /// Query with the default auxiliary weights `[1]`.
    pub fn new(g: i64, i: i64) -> Result<Self> {
        Self::with_weights(g, i, &[1])
    }

    pub fn with_weights(g: i64, i: i64, aux: &[i64]) -> Result<Self> {
        if g < 1 {
            return Err(Error::InvalidQuery(format!(
                "genus must be at least 1, got {g}"
            )));
        }
        if i < 0 || i > g {
            return Err(Error::InvalidQuery(format!(
                "lambda index must lie in 0..={g}, got {i}"
            )));
        }
        Ok(Self {
            g: g as u32,
            i: i as u32,
            aux_weights: EtaMultiset::new(aux)?,
        })
    }

    /// `3g - 2 - i`.
    pub fn psi_power(&self) -> u32 {
        3 * self.g - 2 - self.i
    }
}

/// One summand `(-1)^j C(g,j) · W(key)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTerm {
    pub sign_coefficient: ExactRational,
    pub key: WKey,
}

pub fn binomial_terms(q: &HodgeQuery) -> Vec<DecompositionTerm> {
    (0..=q.g)
        .map(|j| {
            let c = ExactRational::from(binomial(q.g as u64, j as u64));
            DecompositionTerm {
                sign_coefficient: if j % 2 == 0 { c } else { -c },
                key: WKey::new(q.g, q.i as i32, q.aux_weights.with_ones(j as usize)),
            }
        })
        .collect()
}

/// The integral itself: the signed W-sum divided by `(-1)^g g!`.
pub fn hodge_integral(engine: &mut WEngine, q: &HodgeQuery) -> Result<ExactRational> {
    let mut sum = ExactRational::zero();
    for term in binomial_terms(q) {
        sum += &term.sign_coefficient * &engine.w_value(&term.key)?;
    }
    let mut norm = ExactRational::from(factorial(q.g as u64));
    if q.g % 2 == 1 {
        norm = -norm;
    }
    sum.checked_div(&norm)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeRow {
    pub g: u32,
    pub i: u32,
    pub psi_power: u32,
    pub integral: ExactRational,
}

/// All integrals with `1 ≤ g ≤ g_max`, `0 ≤ i ≤ g`, sorted by `(g, i)`.
pub fn hodge_table(engine: &mut WEngine, g_max: u32) -> Result<Vec<HodgeRow>> {
    if g_max < 1 {
        return Err(Error::InvalidQuery("max genus must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for g in 1..=g_max {
        for i in 0..=g {
            let q = HodgeQuery::new(g as i64, i as i64)?;
            rows.push(HodgeRow {
                g,
                i,
                psi_power: q.psi_power(),
                integral: hodge_integral(engine, &q)?,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::canonicalize;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn terms(g: i64, i: i64, aux: &[i64]) -> Vec<(String, WKey)> {
        binomial_terms(&HodgeQuery::with_weights(g, i, aux).unwrap())
            .into_iter()
            .map(|t| (t.sign_coefficient.to_string(), t.key))
            .collect()
    }

    #[test]
    fn decompositions() {
        let k = |g, i, w: &[i64]| canonicalize(w, g, i).unwrap();
        assert_eq!(
            terms(1, 1, &[2]),
            vec![("1".into(), k(1, 1, &[2])), ("-1".into(), k(1, 1, &[1, 2]))]
        );
        assert_eq!(
            terms(2, 1, &[1]),
            vec![
                ("1".into(), k(2, 1, &[1])),
                ("-2".into(), k(2, 1, &[1, 1])),
                ("1".into(), k(2, 1, &[1, 1, 1])),
            ]
        );
        assert_eq!(
            terms(1, 0, &[1]),
            vec![("1".into(), k(1, 0, &[1])), ("-1".into(), k(1, 0, &[1, 1]))]
        );
    }

    #[test]
    fn integrals() {
        let mut e = WEngine::new();
        let mut at = |g, i| hodge_integral(&mut e, &HodgeQuery::new(g, i).unwrap()).unwrap();
        assert_eq!(at(1, 1), q("1/24"));
        assert_eq!(at(2, 1), q("1/480"));
        assert_eq!(at(2, 2), q("7/5760"));
        assert_eq!(at(1, 0), q("1/24"));
    }

    #[test]
    fn worked_genus_one_with_weight_two() {
        let mut e = WEngine::new();
        let qy = HodgeQuery::with_weights(1, 1, &[2]).unwrap();
        assert_eq!(hodge_integral(&mut e, &qy).unwrap(), q("1/24"));
    }

    #[test]
    fn table() {
        let mut e = WEngine::new();
        let t1 = hodge_table(&mut e, 1).unwrap();
        let rows: Vec<_> = t1
            .iter()
            .map(|r| (r.g, r.i, r.integral.to_string()))
            .collect();
        assert_eq!(rows, vec![(1, 0, "1/24".into()), (1, 1, "1/24".into())]);
        let t2 = hodge_table(&mut e, 2).unwrap();
        assert!(t2
            .iter()
            .any(|r| (r.g, r.i) == (2, 1) && r.integral == q("1/480")));
        assert!(t2
            .iter()
            .any(|r| (r.g, r.i) == (2, 2) && r.integral == q("7/5760")));
        assert_eq!(t2.len(), 5);
        assert!(hodge_table(&mut e, 0).is_err());
    }

    #[test]
    fn invalid_queries() {
        assert!(HodgeQuery::new(0, 0).is_err());
        assert!(HodgeQuery::new(2, 3).is_err());
        assert!(HodgeQuery::new(2, -1).is_err());
        assert!(HodgeQuery::with_weights(2, 1, &[]).is_err());
        assert!(HodgeQuery::with_weights(2, 1, &[0]).is_err());
    }
}
