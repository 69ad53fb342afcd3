//! Closed-form bounds and family-size formulas, all in exact checked
//! integer arithmetic. Overflow surfaces as an error, never wraparound.

use crate::error::{EkrError, Result};
use crate::intersection::{IntersectionSpec, Mode};
use crate::objects::{Kind, Params};

/// Outcome of evaluating a closed-form bound: the value when the stated
/// hypothesis holds, plus a description of that hypothesis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub applicable: bool,
    pub value: Option<u64>,
    pub guard: String,
}

impl BoundReport {
    fn applicable(value: u64, guard: impl Into<String>) -> Self {
        BoundReport {
            applicable: true,
            value: Some(value),
            guard: guard.into(),
        }
    }

    fn not_applicable(guard: impl Into<String>) -> Self {
        BoundReport {
            applicable: false,
            value: None,
            guard: guard.into(),
        }
    }
}

pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 1..=k {
        // exact at every step: acc holds C(n-k+i-1, i-1) * something divisible
        acc = acc
            .checked_mul(n - k + i)
            .ok_or(EkrError::Overflow)?
            / i;
    }
    Ok(acc)
}

pub fn factorial(n: u64) -> Result<u64> {
    falling_factorial(n, n)
}

/// n * (n-1) * ... * (n-k+1); equals n!/(n-k)!.
pub fn falling_factorial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i).ok_or(EkrError::Overflow)?;
    }
    Ok(acc)
}

pub fn power(base: u64, exp: u64) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base).ok_or(EkrError::Overflow)?;
    }
    Ok(acc)
}

fn checked_sub(a: u64, b: u64) -> Result<u64> {
    a.checked_sub(b).ok_or(EkrError::Overflow)
}

/// Stirling number of the second kind S(k, i): set partitions of k positions
/// into i nonempty blocks, via the standard recurrence.
pub fn stirling2(k: u32, i: u32) -> Result<u64> {
    if i > k {
        return Err(EkrError::InvalidParams(format!(
            "need 0 <= i <= k, got i={i}, k={k}"
        )));
    }
    let (k, i) = (k as usize, i as usize);
    let mut row = vec![0u64; i + 1];
    row[0] = 1;
    for _ in 1..=k {
        for j in (1..=i).rev() {
            row[j] = (j as u64)
                .checked_mul(row[j])
                .and_then(|x| x.checked_add(row[j - 1]))
                .ok_or(EkrError::Overflow)?;
        }
        row[0] = 0;
    }
    Ok(row[i])
}

/// The printed upper bound for each theorem (t = 1) or conjecture (t > 1).
/// Combinations the source gives no formula for come back non-applicable.
pub fn paper_bound(spec: IntersectionSpec, p: Params) -> Result<BoundReport> {
    let (n, k, t) = (p.n as u64, p.k as u64, spec.t as u64);
    if t == 1 {
        match (spec.kind, spec.mode) {
            (Kind::Set, Mode::Standard) => guarded_2k(n, k, binomial(n - 1, k - 1)?),
            (Kind::Permutation, Mode::Standard) => {
                let v = factorial(k)?
                    .checked_mul(binomial(n - 1, k - 1)?)
                    .ok_or(EkrError::Overflow)?;
                guarded_2k(n, k, v)
            }
            (Kind::Multiset, Mode::Standard) => {
                guarded_2k(n, k, binomial(n + k - 2, k - 1)?)
            }
            (Kind::Word, Mode::Standard) => {
                let v = checked_sub(power(n, k)?, power(n, k - 1)?)?;
                guarded_2k(n, k, v)
            }
            (Kind::Permutation, Mode::Hamming) => {
                if n >= k {
                    Ok(BoundReport::applicable(
                        falling_factorial(n - 1, k - 1)?,
                        "n >= k",
                    ))
                } else {
                    Ok(BoundReport::not_applicable("n >= k"))
                }
            }
            (Kind::Word, Mode::Hamming) => {
                Ok(BoundReport::applicable(power(n, k - 1)?, "none"))
            }
            _ => Ok(BoundReport::not_applicable(
                "Hamming intersection is not defined for this kind",
            )),
        }
    } else {
        let guard = "n >= n0(k,t) (unspecified in paper)";
        match (spec.kind, spec.mode) {
            (Kind::Permutation, Mode::Hamming) if t <= k => {
                if n >= k {
                    Ok(BoundReport::applicable(
                        falling_factorial(n - t, k - t)?,
                        guard,
                    ))
                } else {
                    Ok(BoundReport::not_applicable(guard))
                }
            }
            (Kind::Multiset, Mode::Standard) if t <= k => {
                if n >= k {
                    Ok(BoundReport::applicable(binomial(n + k - t - 1, k - t)?, guard))
                } else {
                    Ok(BoundReport::not_applicable(guard))
                }
            }
            _ => Ok(BoundReport::not_applicable(
                "no formula for this kind/mode at t > 1",
            )),
        }
    }
}

fn guarded_2k(n: u64, k: u64, value: u64) -> Result<BoundReport> {
    if n >= 2 * k {
        Ok(BoundReport::applicable(value, "n >= 2k"))
    } else {
        Ok(BoundReport::not_applicable("n >= 2k"))
    }
}

/// Sum over equality-pattern classes of the per-class bound:
/// sum_i S(k,i) * i! * C(n-1, i-1). Equals n^k - (n-1)^k.
pub fn class_sum_word_bound(p: Params) -> Result<u64> {
    let (n, k) = (p.n as u64, p.k as u64);
    if n < 2 * k {
        return Err(EkrError::GuardViolated(format!(
            "class-sum word bound needs n >= 2k, got n={n}, k={k}"
        )));
    }
    let mut acc: u64 = 0;
    for i in 1..=p.k {
        let classes = stirling2(p.k, i)?;
        let per_class = factorial(i as u64)?
            .checked_mul(binomial(n - 1, i as u64 - 1)?)
            .ok_or(EkrError::Overflow)?;
        let term = classes.checked_mul(per_class).ok_or(EkrError::Overflow)?;
        acc = acc.checked_add(term).ok_or(EkrError::Overflow)?;
    }
    Ok(acc)
}

/// Cardinality of the constructed anchored (trivial) family, with the t-core
/// generalization used by the conjecture sweeps. Must agree with direct
/// construction for every kind and mode.
pub fn trivial_family_size(spec: IntersectionSpec, p: Params) -> Result<u64> {
    let (n, k, t) = (p.n as u64, p.k as u64, spec.t as u64);
    if t > k {
        return Err(EkrError::GuardViolated(format!(
            "anchored family needs t <= k, got t={t}, k={k}"
        )));
    }
    match (spec.kind, spec.mode) {
        (Kind::Set, Mode::Standard) => {
            if t > n {
                return Ok(0);
            }
            binomial(n - t, k - t)
        }
        (Kind::Permutation, Mode::Standard) => {
            if t > n {
                return Ok(0);
            }
            // complete the fixed t-set with k-t of the remaining letters,
            // then order all k
            binomial(n - t, k - t)?
                .checked_mul(factorial(k)?)
                .ok_or(EkrError::Overflow)
        }
        (Kind::Multiset, Mode::Standard) => binomial(n + k - t - 1, k - t),
        (Kind::Word, Mode::Standard) => {
            // core = t copies of one letter; words with >= t occurrences of it
            let mut acc: u64 = 0;
            for j in t..=k {
                let term = binomial(k, j)?
                    .checked_mul(power(n - 1, k - j)?)
                    .ok_or(EkrError::Overflow)?;
                acc = acc.checked_add(term).ok_or(EkrError::Overflow)?;
            }
            Ok(acc)
        }
        (Kind::Permutation, Mode::Hamming) => {
            if k > n {
                return Ok(0);
            }
            falling_factorial(n - t, k - t)
        }
        (Kind::Word, Mode::Hamming) => power(n, k - t),
        (kind, Mode::Hamming) => Err(EkrError::ModeUnsupported(kind)),
    }
}
