//! Counting machinery from the cyclic-permutation proofs: cyclic
//! containment of sets, window heads, cyclic subword containment of
//! k-permutations, and the brute-force counters that check the closed
//! forms k!·n·(n−k)! and n·(n−k)!.
//!
//! The counters exist as oracles; they deliberately iterate all n!
//! permutations and guard n to desk scale.

use crate::error::{EkrError, Result};
use crate::families::Family;
use crate::objects::{CombObject, Kind};

const MAX_BRUTE_FORCE_N: u32 = 8;

/// A permutation of the whole alphabet, read cyclically where required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullPermutation(Vec<u32>);

impl FullPermutation {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        let n = entries.len() as u32;
        let mut seen = vec![false; n as usize + 1];
        for &e in &entries {
            if e < 1 || e > n || seen[e as usize] {
                return Err(EkrError::InvalidParams(format!(
                    "not a permutation of [{n}]"
                )));
            }
            seen[e as usize] = true;
        }
        Ok(FullPermutation(entries))
    }

    pub fn n(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// 0-based positions occupied by the given elements, as a presence mask.
    fn positions_of(&self, elements: &[u32]) -> Vec<bool> {
        let mut mask = vec![false; self.0.len()];
        for (i, e) in self.0.iter().enumerate() {
            if elements.contains(e) {
                mask[i] = true;
            }
        }
        mask
    }
}

/// Starting positions (0-based) of cyclic windows of length k that exactly
/// cover the marked positions.
fn window_starts(mask: &[bool], k: usize) -> Vec<usize> {
    let n = mask.len();
    let mut starts = Vec::new();
    for s in 0..n {
        if (0..k).all(|i| mask[(s + i) % n]) {
            starts.push(s);
        }
    }
    starts
}

/// True iff the elements of `s` occupy k cyclically consecutive positions.
pub fn cyclic_contains(sigma: &FullPermutation, s: &CombObject) -> Result<bool> {
    s.expect_kind(Kind::Set)?;
    if s.len() > sigma.0.len() {
        return Err(EkrError::InvalidParams("set larger than permutation".into()));
    }
    let mask = sigma.positions_of(s.entries());
    if mask.iter().filter(|&&b| b).count() != s.len() {
        return Err(EkrError::InvalidParams(
            "set contains elements outside the permutation's alphabet".into(),
        ));
    }
    Ok(!window_starts(&mask, s.len()).is_empty())
}

/// First element of the unique consecutive cyclic window occupied by `s`.
pub fn head(sigma: &FullPermutation, s: &CombObject) -> Result<u32> {
    s.expect_kind(Kind::Set)?;
    let mask = sigma.positions_of(s.entries());
    let starts = window_starts(&mask, s.len());
    match starts.len() {
        0 => Err(EkrError::InvalidParams(format!(
            "{s} is not contained in the permutation"
        ))),
        1 => Ok(sigma.0[starts[0]]),
        _ => Err(EkrError::InvalidParams(format!(
            "containing window for {s} is ambiguous"
        ))),
    }
}

fn all_permutations(n: u32) -> Vec<FullPermutation> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(n as usize);
    let mut used = vec![false; n as usize + 1];
    fn rec(n: u32, used: &mut [bool], buf: &mut Vec<u32>, out: &mut Vec<FullPermutation>) {
        if buf.len() == n as usize {
            out.push(FullPermutation(buf.clone()));
            return;
        }
        for e in 1..=n {
            if !used[e as usize] {
                used[e as usize] = true;
                buf.push(e);
                rec(n, used, buf, out);
                buf.pop();
                used[e as usize] = false;
            }
        }
    }
    rec(n, &mut used, &mut buf, &mut out);
    out
}

fn brute_force_count(n: u32, pred: impl Fn(&FullPermutation) -> bool + Sync) -> Result<u64> {
    brute_force_sum(n, |sigma| pred(sigma) as u64)
}

fn brute_force_sum(n: u32, weight: impl Fn(&FullPermutation) -> u64 + Sync) -> Result<u64> {
    if n > MAX_BRUTE_FORCE_N {
        return Err(EkrError::Resource(format!(
            "brute force over {n}! permutations refused (n <= {MAX_BRUTE_FORCE_N})"
        )));
    }
    let perms = all_permutations(n);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        Ok(perms.par_iter().map(&weight).sum())
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(perms.iter().map(&weight).sum())
    }
}

/// Number of (permutation, containing window) pairs over all permutations
/// of [n]; the identity says this is k!·n·(n−k)!. Windows are unique for
/// k < n, so this agrees with plain containment counting everywhere except
/// the degenerate k = n case.
pub fn count_cyclic_containers(s: &CombObject, n: u32) -> Result<u64> {
    s.expect_kind(Kind::Set)?;
    if s.len() as u32 > n {
        return Err(EkrError::InvalidParams("set larger than [n]".into()));
    }
    brute_force_sum(n, |sigma| {
        window_starts(&sigma.positions_of(s.entries()), s.len()).len() as u64
    })
}

/// Members of `fam` contained in `sigma`, in family order. For an
/// intersecting family of k-sets this has at most k members.
pub fn contained_members<'f>(
    sigma: &FullPermutation,
    fam: &'f Family,
) -> Result<Vec<&'f CombObject>> {
    let mut out = Vec::new();
    for m in fam.members() {
        if cyclic_contains(sigma, m)? {
            out.push(m);
        }
    }
    Ok(out)
}

/// True iff perm's entries appear in order in k cyclically consecutive
/// positions of sigma.
pub fn cyclic_subword_contains(sigma: &FullPermutation, perm: &CombObject) -> Result<bool> {
    perm.expect_kind(Kind::Permutation)?;
    let n = sigma.0.len();
    if perm.len() > n {
        return Err(EkrError::InvalidParams(
            "permutation longer than the full permutation".into(),
        ));
    }
    for s in 0..n {
        if perm
            .entries()
            .iter()
            .enumerate()
            .all(|(i, &e)| sigma.0[(s + i) % n] == e)
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Number of permutations of [n] containing `perm` as a cyclic subword;
/// the identity says this is n·(n−k)!.
pub fn count_subword_containers(perm: &CombObject, n: u32) -> Result<u64> {
    perm.expect_kind(Kind::Permutation)?;
    if perm.len() as u32 > n {
        return Err(EkrError::InvalidParams(
            "permutation longer than [n]".into(),
        ));
    }
    brute_force_count(n, |sigma| cyclic_subword_contains(sigma, perm).unwrap_or(false))
}
