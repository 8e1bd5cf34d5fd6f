//! Brute-force ground truth at desk scale: exact maximal product norms,
//! semigroup closure, and an independent classification used to validate
//! the polynomial-time classifier.
//!
//! Enumeration works on the breadth-first frontier of *distinct* products of
//! each length. Deduplication preserves the per-length maximum norm while
//! keeping the frontier polynomial in size for every non-exponential family.

use crate::matrix::{Matrix, MatrixSet};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration budget of {budget} products exceeded")]
    BudgetExceeded { budget: usize },
}

/// Outcome of closing the family under multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureResult {
    /// A fixpoint was reached: the product semigroup is finite, hence the
    /// products are bounded by `max_norm`.
    Finite { count: usize, max_norm: BigUint },
    /// More than `cap` distinct products appeared before a fixpoint.
    CapExceeded { cap: usize },
}

/// Verdict of [`degree_bracket`] for one candidate degree.
#[derive(Debug, Clone, PartialEq)]
pub enum DegreeBracket {
    /// Ratios max_t / t^k stay within [c1, c2] without a confirmed trend.
    Accepted { c1: f64, c2: f64 },
    /// Ratios diverge: the tested degree is too low.
    RejectedTooLow,
    /// Ratios vanish toward zero: the tested degree is too high.
    RejectedTooHigh,
}

/// Tuning knobs for the brute-force classification.
#[derive(Debug, Clone)]
pub struct BruteForceConfig {
    /// Table depth: exact max_t is reported for t = 1..=tmax.
    pub tmax: usize,
    /// Closure cap for the boundedness check.
    pub cap: usize,
    /// Total number of products the enumeration may form.
    pub budget: usize,
    /// Worker threads for frontier expansion; 1 means sequential.
    pub workers: usize,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        BruteForceConfig {
            tmax: 10,
            cap: 20_000,
            budget: 1_000_000,
            workers: 1,
        }
    }
}

/// Class assigned by the oracle. Zero and Exponential come from exact
/// finite criteria; Bounded requires a closure fixpoint; Polynomial is the
/// remaining case with a heuristic degree estimate that may stay undecided.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleClass {
    Zero {
        t0: usize,
    },
    Bounded {
        closure_size: usize,
        bound: BigUint,
    },
    Polynomial {
        /// Unique degree surviving the bracket tests, when any.
        degree: Option<usize>,
        /// Ratio bracket for the accepted degree.
        bracket: Option<(f64, f64)>,
    },
    Exponential {
        /// Length of the first enumerated product with a diagonal entry >= 2.
        witness_length: usize,
    },
    /// The enumeration budget ran out before any exact criterion resolved.
    Inconclusive {
        reason: String,
    },
}

impl OracleClass {
    pub fn is_conclusive(&self) -> bool {
        !matches!(self, OracleClass::Inconclusive { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            OracleClass::Zero { .. } => "zero",
            OracleClass::Bounded { .. } => "bounded",
            OracleClass::Polynomial { .. } => "polynomial",
            OracleClass::Exponential { .. } => "exponential",
            OracleClass::Inconclusive { .. } => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleVerdict {
    pub class: OracleClass,
    /// Exact values max_t for t = 1..=len; may stop short of tmax when the
    /// budget ran out mid-table.
    pub max_t_table: Vec<BigUint>,
}

/// Frontier of distinct products of one fixed length.
struct Frontier<'a> {
    set: &'a MatrixSet,
    current: Vec<Matrix>, // sorted, deduplicated
    budget_left: usize,
    budget: usize,
    pool: Option<rayon::ThreadPool>,
}

impl<'a> Frontier<'a> {
    fn new(set: &'a MatrixSet, budget: usize, workers: usize) -> Self {
        let pool = if workers > 1 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .ok()
        } else {
            None
        };
        Frontier {
            set,
            current: vec![Matrix::identity(set.dim())],
            budget_left: budget,
            budget,
            pool,
        }
    }

    /// Advances to the next product length. The result is sorted, so the
    /// outcome is identical regardless of worker count.
    fn advance(&mut self) -> Result<&[Matrix], OracleError> {
        let needed = self.current.len() * self.set.len();
        if needed > self.budget_left {
            return Err(OracleError::BudgetExceeded { budget: self.budget });
        }
        self.budget_left -= needed;
        let set = self.set;
        let mut next: Vec<Matrix> = match &self.pool {
            Some(pool) => pool.install(|| {
                self.current
                    .par_iter()
                    .flat_map_iter(|m| {
                        set.iter()
                            .map(move |a| m.multiply(a).expect("family shares one dimension"))
                    })
                    .collect()
            }),
            None => {
                let mut seen: HashSet<Matrix> = HashSet::with_capacity(needed);
                for m in &self.current {
                    for a in set.iter() {
                        seen.insert(m.multiply(a).expect("family shares one dimension"));
                    }
                }
                seen.into_iter().collect()
            }
        };
        next.sort_unstable();
        next.dedup();
        self.current = next;
        Ok(&self.current)
    }
}

fn level_max_norm(level: &[Matrix]) -> BigUint {
    level
        .iter()
        .map(Matrix::sum_norm)
        .max()
        .unwrap_or_else(BigUint::zero)
}

/// Exact maximum sum-norm over all products of length `t`.
pub fn max_t_exact(set: &MatrixSet, t: usize, budget: usize) -> Result<BigUint, OracleError> {
    assert!(t >= 1, "product length must be at least one");
    Ok(max_t_table(set, t, budget)?
        .pop()
        .expect("table holds t entries"))
}

/// Exact max_t for every t = 1..=tmax.
pub fn max_t_table(set: &MatrixSet, tmax: usize, budget: usize) -> Result<Vec<BigUint>, OracleError> {
    let mut frontier = Frontier::new(set, budget, 1);
    let mut table = Vec::with_capacity(tmax);
    let mut vanished = false;
    for _ in 1..=tmax {
        if vanished {
            table.push(BigUint::zero());
            continue;
        }
        let level = frontier.advance()?;
        let norm = level_max_norm(level);
        vanished = norm.is_zero();
        table.push(norm);
    }
    Ok(table)
}

/// Breadth-first closure of the family under multiplication. Products of
/// every positive length are enumerated with deduplication until either a
/// fixpoint or the cap is reached.
pub fn semigroup_closure(set: &MatrixSet, cap: usize) -> ClosureResult {
    let mut known: HashSet<Matrix> = HashSet::new();
    let mut queue: Vec<Matrix> = Vec::new();
    for m in set.iter() {
        if known.insert(m.clone()) {
            queue.push(m.clone());
        }
    }
    if known.len() > cap {
        return ClosureResult::CapExceeded { cap };
    }
    let mut head = 0;
    while head < queue.len() {
        let current = queue[head].clone();
        head += 1;
        for g in set.iter() {
            let p = current.multiply(g).expect("family shares one dimension");
            if known.insert(p.clone()) {
                if known.len() > cap {
                    return ClosureResult::CapExceeded { cap };
                }
                queue.push(p);
            }
        }
    }
    let max_norm = queue
        .iter()
        .map(Matrix::sum_norm)
        .max()
        .expect("closure contains the generators");
    ClosureResult::Finite {
        count: known.len(),
        max_norm,
    }
}

/// Compares max_t against C * t^k over a window of exact values.
///
/// The trend test looks at the final ceil((t_hi - t_lo)/2) points. A strictly
/// monotone tail alone is not enough to reject: ratios like (t+2)/t decrease
/// while converging to a positive constant. Rejection additionally requires
/// the tail to move faster than the geometric midpoint between staying flat
/// and tracking a full factor of t, checked by exact cross-multiplication.
pub fn degree_bracket(
    set: &MatrixSet,
    k: usize,
    t_lo: usize,
    t_hi: usize,
    budget: usize,
) -> Result<DegreeBracket, OracleError> {
    assert!(1 <= t_lo && t_lo < t_hi, "window must contain two points");
    let table = max_t_table(set, t_hi, budget)?;
    Ok(bracket_on_table(&table, k, t_lo, t_hi))
}

fn ratio_to_f64(m: &BigUint, t: usize, k: usize) -> f64 {
    let denom = BigUint::from(t).pow(k as u32);
    m.to_f64().unwrap_or(f64::INFINITY) / denom.to_f64().unwrap_or(f64::INFINITY)
}

/// Exact comparison max_a / a^k < max_b / b^k by cross-multiplication.
fn ratio_less(table: &[BigUint], k: usize, a: usize, b: usize) -> bool {
    &table[a - 1] * BigUint::from(b).pow(k as u32)
        < &table[b - 1] * BigUint::from(a).pow(k as u32)
}

/// Trend window: the final ceil((t_hi - t_lo)/2) points of the range.
fn tail_start(t_lo: usize, t_hi: usize) -> usize {
    t_hi + 1 - (t_hi - t_lo).div_ceil(2)
}

fn tail_strictly_increasing(table: &[BigUint], k: usize, t_lo: usize, t_hi: usize) -> bool {
    let start = tail_start(t_lo, t_hi);
    start < t_hi && (start..t_hi).all(|t| ratio_less(table, k, t, t + 1))
}

/// Bracket evaluation on a precomputed table (`table[t-1]` = max_t).
fn bracket_on_table(table: &[BigUint], k: usize, t_lo: usize, t_hi: usize) -> DegreeBracket {
    debug_assert!(t_hi <= table.len());
    let value = |t: usize| &table[t - 1];
    let start = tail_start(t_lo, t_hi);

    if start < t_hi && !value(t_hi).is_zero() {
        let increasing = (start..t_hi).all(|t| ratio_less(table, k, t, t + 1));
        let decreasing = (start..t_hi).all(|t| ratio_less(table, k, t + 1, t));
        let a = start;
        let b = t_hi;
        let ma = value(a);
        let mb = value(b);
        if increasing {
            // diverging when r_b^2 / b > r_a^2 / a
            let lhs = mb * mb * BigUint::from(a).pow(2 * k as u32 + 1);
            let rhs = ma * ma * BigUint::from(b).pow(2 * k as u32 + 1);
            if lhs > rhs {
                return DegreeBracket::RejectedTooLow;
            }
        }
        if decreasing {
            // vanishing when r_b^2 * b < r_a^2 * a
            let lhs = mb * mb * BigUint::from(b) * BigUint::from(a).pow(2 * k as u32);
            let rhs = ma * ma * BigUint::from(a) * BigUint::from(b).pow(2 * k as u32);
            if lhs < rhs {
                return DegreeBracket::RejectedTooHigh;
            }
        }
    }
    if value(t_hi).is_zero() {
        return DegreeBracket::RejectedTooHigh;
    }

    let mut c1 = f64::INFINITY;
    let mut c2 = 0f64;
    for t in t_lo..=t_hi {
        let r = ratio_to_f64(value(t), t, k);
        c1 = c1.min(r);
        c2 = c2.max(r);
    }
    DegreeBracket::Accepted { c1, c2 }
}

/// Independent desk-scale classification.
///
/// Zero: some level at t <= n is entirely zero. Exponential: some product of
/// length <= n^2 has a diagonal entry >= 2; enumerating all distinct
/// products that far is exact in both directions. Bounded: the closure
/// reaches a fixpoint. Polynomial: everything else, with a degree estimate
/// that reports `None` rather than guessing from an unstable window.
pub fn classify_bruteforce(set: &MatrixSet, config: &BruteForceConfig) -> OracleVerdict {
    let n = set.dim();
    let n2 = n * n;
    let deep = config.tmax.max(n2);
    let two = BigUint::from(2u32);

    let mut frontier = Frontier::new(set, config.budget, config.workers);
    let mut table: Vec<BigUint> = Vec::new();
    let mut zero_at: Option<usize> = None;
    let mut diag2_at: Option<usize> = None;
    let mut complete_to = 0usize;

    for t in 1..=deep {
        let level = match frontier.advance() {
            Ok(level) => level,
            Err(OracleError::BudgetExceeded { .. }) => break,
        };
        complete_to = t;
        let norm = level_max_norm(level);
        let is_zero = norm.is_zero();
        if t <= config.tmax {
            table.push(norm);
        }
        if is_zero {
            zero_at = Some(t);
            while table.len() < config.tmax {
                table.push(BigUint::zero());
            }
            break;
        }
        if diag2_at.is_none() && t <= n2 {
            let found = level.iter().any(|m| (0..n).any(|i| m.entry(i, i) >= &two));
            if found {
                diag2_at = Some(t);
            }
        }
        if t >= config.tmax && (diag2_at.is_some() || t >= n2) {
            break;
        }
    }

    let class = if let Some(t0) = zero_at {
        OracleClass::Zero { t0 }
    } else if let Some(t) = diag2_at {
        OracleClass::Exponential { witness_length: t }
    } else if complete_to >= n2 {
        match semigroup_closure(set, config.cap) {
            ClosureResult::Finite { count, max_norm } => OracleClass::Bounded {
                closure_size: count,
                bound: max_norm,
            },
            ClosureResult::CapExceeded { .. } => {
                let (degree, bracket) = estimate_degree(&table, n, config.tmax, complete_to);
                OracleClass::Polynomial { degree, bracket }
            }
        }
    } else {
        OracleClass::Inconclusive {
            reason: format!(
                "budget exhausted after enumerating products of length {complete_to} (need {n2})"
            ),
        }
    };

    OracleVerdict {
        class,
        max_t_table: table,
    }
}

/// Degree estimate from the table. The brackets are a finite-window
/// heuristic, so confidence takes priority over coverage: a candidate is
/// reported only when it is the unique accepted degree on the full window
/// and on the window shrunk by one point, every smaller degree rejects as
/// too low and every larger one as too high, and the candidate's own ratio
/// tail is not strictly increasing (an increasing tail is how a higher true
/// degree first shows through). Anything less stays undecided.
fn estimate_degree(
    table: &[BigUint],
    n: usize,
    tmax: usize,
    complete_to: usize,
) -> (Option<usize>, Option<(f64, f64)>) {
    let t_hi = tmax.min(complete_to).min(table.len());
    let t_lo = 4;
    if n < 2 || t_hi < t_lo + 4 {
        return (None, None);
    }
    let unique_accept = |lo: usize, hi: usize| -> Option<(usize, (f64, f64))> {
        let mut found = None;
        for k in 1..=n - 1 {
            if let DegreeBracket::Accepted { c1, c2 } = bracket_on_table(table, k, lo, hi) {
                if found.is_some() {
                    return None;
                }
                found = Some((k, (c1, c2)));
            }
        }
        found
    };
    match (unique_accept(t_lo, t_hi), unique_accept(t_lo, t_hi - 1)) {
        (Some((k, bracket)), Some((k2, _))) if k == k2 => {
            let sandwich = (1..k)
                .all(|low| bracket_on_table(table, low, t_lo, t_hi) == DegreeBracket::RejectedTooLow)
                && (k + 1..n).all(|high| {
                    bracket_on_table(table, high, t_lo, t_hi) == DegreeBracket::RejectedTooHigh
                });
            if sandwich && !tail_strictly_increasing(table, k, t_lo, t_hi) {
                (Some(k), Some(bracket))
            } else {
                (None, None)
            }
        }
        _ => (None, None),
    }
}
