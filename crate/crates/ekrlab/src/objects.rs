//! The four combinatorial object kinds over the alphabet `[n] = {1..n}`,
//! full-universe enumeration, and the pattern/support reductions used to
//! relate one kind to another.

use serde::{Deserialize, Serialize};

use crate::error::{EkrError, Result};

/// Alphabet size `n` and object length `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub n: u32,
    pub k: u32,
}

impl Params {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n < 1 || k < 1 {
            return Err(EkrError::InvalidParams(format!(
                "need n >= 1 and k >= 1, got n={n}, k={k}"
            )));
        }
        Ok(Params { n, k })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Set,
    Permutation,
    Multiset,
    Word,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::Set, Kind::Permutation, Kind::Multiset, Kind::Word];

    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Set => "set",
            Kind::Permutation => "permutation",
            Kind::Multiset => "multiset",
            Kind::Word => "word",
        }
    }

    /// Order of entries carries meaning (as opposed to being a canonical sort).
    pub fn is_ordered(&self) -> bool {
        matches!(self, Kind::Permutation | Kind::Word)
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "set" => Ok(Kind::Set),
            "permutation" | "perm" => Ok(Kind::Permutation),
            "multiset" => Ok(Kind::Multiset),
            "word" => Ok(Kind::Word),
            other => Err(format!("unknown kind {other:?}")),
        }
    }
}

/// One k-set, k-permutation, k-multiset, or k-word over `[n]`, stored in
/// canonical form (sets strictly increasing, multisets non-decreasing,
/// permutations and words as given).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CombObject {
    kind: Kind,
    entries: Vec<u32>,
}

impl CombObject {
    pub fn new(kind: Kind, mut entries: Vec<u32>, p: Params) -> Result<Self> {
        if entries.len() != p.k as usize {
            return Err(EkrError::InvalidParams(format!(
                "expected {} entries, got {}",
                p.k,
                entries.len()
            )));
        }
        if let Some(&e) = entries.iter().find(|&&e| e < 1 || e > p.n) {
            return Err(EkrError::InvalidParams(format!(
                "entry {e} outside [1, {}]",
                p.n
            )));
        }
        match kind {
            Kind::Set | Kind::Multiset => entries.sort_unstable(),
            Kind::Permutation | Kind::Word => {}
        }
        if matches!(kind, Kind::Set | Kind::Permutation) {
            let mut seen = entries.clone();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(EkrError::InvalidParams(format!(
                    "{kind} entries must be distinct"
                )));
            }
        }
        Ok(CombObject { kind, entries })
    }

    /// Construct without a Params check; used internally where the entries
    /// are produced by enumeration and already canonical.
    pub(crate) fn raw(kind: Kind, entries: Vec<u32>) -> Self {
        CombObject { kind, entries }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn expect_kind(&self, kind: Kind) -> Result<()> {
        if self.kind != kind {
            return Err(EkrError::KindMismatch {
                expected: kind,
                got: self.kind,
            });
        }
        Ok(())
    }

    /// Multiplicity of each letter, indexed by letter value (index 0 unused).
    pub fn multiplicities(&self, n: u32) -> Vec<u32> {
        let mut m = vec![0u32; n as usize + 1];
        for &e in &self.entries {
            m[e as usize] += 1;
        }
        m
    }
}

impl std::fmt::Display for CombObject {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let body = self
            .entries
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",");
        match self.kind {
            Kind::Set => write!(f, "{{{body}}}"),
            Kind::Multiset => write!(f, "{{{body}}}"),
            Kind::Permutation | Kind::Word => write!(f, "({body})"),
        }
    }
}

/// Rank sequence of a permutation: position i holds the rank of entry i
/// among all entries. Two permutations share a pattern exactly when all
/// pairwise order comparisons agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderPattern(pub Vec<u32>);

/// Equality pattern of a word, encoded as block indices in order of first
/// appearance: `113233` becomes `1,1,2,3,2,2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EqualityPattern(pub Vec<u32>);

impl EqualityPattern {
    /// Number of distinct blocks.
    pub fn block_count(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

/// Every object of the kind, exactly once, in lexicographic order of
/// canonical entries.
pub fn enumerate_universe(kind: Kind, p: Params) -> Result<Vec<CombObject>> {
    if matches!(kind, Kind::Set | Kind::Permutation) && p.k > p.n {
        return Err(EkrError::InvalidParams(format!(
            "{kind} requires k <= n, got k={}, n={}",
            p.k, p.n
        )));
    }
    let k = p.k as usize;
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(k);
    match kind {
        Kind::Set => rec_increasing(p.n, k, 1, true, &mut buf, &mut |e| {
            out.push(CombObject::raw(kind, e))
        }),
        Kind::Multiset => rec_increasing(p.n, k, 1, false, &mut buf, &mut |e| {
            out.push(CombObject::raw(kind, e))
        }),
        Kind::Permutation => {
            let mut used = vec![false; p.n as usize + 1];
            rec_permutations(p.n, k, &mut used, &mut buf, &mut |e| {
                out.push(CombObject::raw(kind, e))
            });
        }
        Kind::Word => rec_words(p.n, k, &mut buf, &mut |e| {
            out.push(CombObject::raw(kind, e))
        }),
    }
    Ok(out)
}

fn rec_increasing(
    n: u32,
    k: usize,
    min: u32,
    strict: bool,
    buf: &mut Vec<u32>,
    emit: &mut impl FnMut(Vec<u32>),
) {
    if buf.len() == k {
        emit(buf.clone());
        return;
    }
    for e in min..=n {
        buf.push(e);
        rec_increasing(n, k, if strict { e + 1 } else { e }, strict, buf, emit);
        buf.pop();
    }
}

fn rec_permutations(
    n: u32,
    k: usize,
    used: &mut Vec<bool>,
    buf: &mut Vec<u32>,
    emit: &mut impl FnMut(Vec<u32>),
) {
    if buf.len() == k {
        emit(buf.clone());
        return;
    }
    for e in 1..=n {
        if !used[e as usize] {
            used[e as usize] = true;
            buf.push(e);
            rec_permutations(n, k, used, buf, emit);
            buf.pop();
            used[e as usize] = false;
        }
    }
}

fn rec_words(n: u32, k: usize, buf: &mut Vec<u32>, emit: &mut impl FnMut(Vec<u32>)) {
    if buf.len() == k {
        emit(buf.clone());
        return;
    }
    for e in 1..=n {
        buf.push(e);
        rec_words(n, k, buf, emit);
        buf.pop();
    }
}

/// Closed-form universe cardinality for each kind.
pub fn universe_size(kind: Kind, p: Params) -> Result<u64> {
    use crate::bounds::{binomial, falling_factorial, power};
    match kind {
        Kind::Set => binomial(p.n as u64, p.k as u64),
        Kind::Permutation => falling_factorial(p.n as u64, p.k as u64),
        Kind::Multiset => binomial(p.n as u64 + p.k as u64 - 1, p.k as u64),
        Kind::Word => power(p.n as u64, p.k as u64),
    }
}

pub fn order_pattern(perm: &CombObject) -> Result<OrderPattern> {
    perm.expect_kind(Kind::Permutation)?;
    let e = perm.entries();
    let ranks = e
        .iter()
        .map(|&x| 1 + e.iter().filter(|&&y| y < x).count() as u32)
        .collect();
    Ok(OrderPattern(ranks))
}

pub fn equality_pattern(word: &CombObject) -> Result<EqualityPattern> {
    word.expect_kind(Kind::Word)?;
    let mut blocks: Vec<u32> = Vec::new();
    let mut firsts: Vec<u32> = Vec::new();
    for &e in word.entries() {
        match firsts.iter().position(|&f| f == e) {
            Some(i) => blocks.push(i as u32 + 1),
            None => {
                firsts.push(e);
                blocks.push(firsts.len() as u32);
            }
        }
    }
    Ok(EqualityPattern(blocks))
}

/// Distinct letters in first-occurrence order, as an i-permutation (i <= k).
pub fn word_to_permutation(word: &CombObject) -> Result<CombObject> {
    word.expect_kind(Kind::Word)?;
    let mut firsts: Vec<u32> = Vec::new();
    for &e in word.entries() {
        if !firsts.contains(&e) {
            firsts.push(e);
        }
    }
    Ok(CombObject::raw(Kind::Permutation, firsts))
}

/// The set of distinct elements of a multiset.
pub fn multiset_support(m: &CombObject) -> Result<CombObject> {
    m.expect_kind(Kind::Multiset)?;
    let mut support = m.entries().to_vec();
    support.dedup();
    Ok(CombObject::raw(Kind::Set, support))
}

/// Number of k-multisets reducing to a fixed i-set: C(k-1, i-1).
pub fn count_multisets_with_support(k: u32, i: u32) -> Result<u64> {
    if i < 1 || i > k {
        return Err(EkrError::InvalidParams(format!(
            "need 1 <= i <= k, got i={i}, k={k}"
        )));
    }
    crate::bounds::binomial(k as u64 - 1, i as u64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, k: u32) -> Params {
        Params::new(n, k).unwrap()
    }

    fn obj(kind: Kind, entries: &[u32], n: u32) -> CombObject {
        CombObject::new(kind, entries.to_vec(), p(n, entries.len() as u32)).unwrap()
    }

    #[test]
    fn universe_sizes_match_closed_forms() {
        for n in 1..=8u32 {
            for k in 1..=n {
                for kind in Kind::ALL {
                    if matches!(kind, Kind::Set | Kind::Permutation) && k > n {
                        continue;
                    }
                    let u = enumerate_universe(kind, p(n, k)).unwrap();
                    assert_eq!(
                        u.len() as u64,
                        universe_size(kind, p(n, k)).unwrap(),
                        "{kind} n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn universe_examples() {
        assert_eq!(enumerate_universe(Kind::Set, p(4, 2)).unwrap().len(), 6);
        assert_eq!(
            enumerate_universe(Kind::Permutation, p(4, 2)).unwrap().len(),
            12
        );
        assert_eq!(enumerate_universe(Kind::Word, p(3, 2)).unwrap().len(), 9);
        assert_eq!(
            enumerate_universe(Kind::Multiset, p(4, 2)).unwrap().len(),
            10
        );
    }

    #[test]
    fn universes_sorted_and_distinct() {
        for kind in Kind::ALL {
            let u = enumerate_universe(kind, p(4, 3)).unwrap();
            assert!(u.windows(2).all(|w| w[0] < w[1]), "{kind}");
        }
    }

    #[test]
    fn canonical_form_idempotent() {
        for kind in Kind::ALL {
            for o in enumerate_universe(kind, p(5, 3)).unwrap() {
                let re = CombObject::new(kind, o.entries().to_vec(), p(5, 3)).unwrap();
                assert_eq!(re, o);
            }
        }
    }

    #[test]
    fn guard_violations_are_errors() {
        assert!(enumerate_universe(Kind::Set, p(3, 4)).is_err());
        assert!(enumerate_universe(Kind::Permutation, p(2, 3)).is_err());
        assert!(Params::new(0, 2).is_err());
        // words and multisets allow k > n
        assert!(enumerate_universe(Kind::Word, p(2, 3)).is_ok());
        assert!(enumerate_universe(Kind::Multiset, p(2, 3)).is_ok());
    }

    #[test]
    fn order_pattern_examples() {
        let a = obj(Kind::Permutation, &[2, 7, 5], 7);
        let b = obj(Kind::Permutation, &[1, 9, 4], 9);
        assert_eq!(order_pattern(&a).unwrap().0, vec![1, 3, 2]);
        assert_eq!(order_pattern(&a).unwrap(), order_pattern(&b).unwrap());

        let up = obj(Kind::Permutation, &[1, 2], 2);
        let down = obj(Kind::Permutation, &[2, 1], 2);
        assert_ne!(order_pattern(&up).unwrap(), order_pattern(&down).unwrap());
        assert_eq!(order_pattern(&up).unwrap().0, vec![1, 2]);
        assert_eq!(order_pattern(&down).unwrap().0, vec![2, 1]);

        let single = obj(Kind::Permutation, &[3], 5);
        assert_eq!(order_pattern(&single).unwrap().0, vec![1]);
    }

    #[test]
    fn order_pattern_rejects_wrong_kind() {
        let s = obj(Kind::Set, &[1, 2], 3);
        assert!(order_pattern(&s).is_err());
    }

    #[test]
    fn order_pattern_partitions_universe() {
        // k! classes, each of size C(n,k), for 2 <= 2k <= n <= 7
        use std::collections::HashMap;
        for n in 2..=7u32 {
            for k in 1..=n / 2 {
                let mut classes: HashMap<Vec<u32>, u64> = HashMap::new();
                for perm in enumerate_universe(Kind::Permutation, p(n, k)).unwrap() {
                    *classes.entry(order_pattern(&perm).unwrap().0).or_insert(0) += 1;
                }
                let kfact = crate::bounds::factorial(k as u64).unwrap();
                assert_eq!(classes.len() as u64, kfact, "n={n} k={k}");
                let class_size = crate::bounds::binomial(n as u64, k as u64).unwrap();
                assert!(classes.values().all(|&c| c == class_size), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn equality_pattern_examples() {
        let w1 = obj(Kind::Word, &[1, 1, 3, 2, 3, 3], 4);
        let w2 = obj(Kind::Word, &[2, 2, 3, 4, 3, 3], 4);
        assert_eq!(equality_pattern(&w1).unwrap().0, vec![1, 1, 2, 3, 2, 2]);
        assert_eq!(equality_pattern(&w1).unwrap(), equality_pattern(&w2).unwrap());

        let a = obj(Kind::Word, &[1, 2], 2);
        let b = obj(Kind::Word, &[1, 1], 2);
        assert_ne!(equality_pattern(&a).unwrap(), equality_pattern(&b).unwrap());
    }

    #[test]
    fn equality_pattern_class_sizes() {
        // class with i blocks has size n(n-1)...(n-i+1); sizes sum to n^k
        use std::collections::HashMap;
        for n in 1..=5u32 {
            for k in 1..=4u32 {
                let mut classes: HashMap<Vec<u32>, u64> = HashMap::new();
                for w in enumerate_universe(Kind::Word, p(n, k)).unwrap() {
                    *classes.entry(equality_pattern(&w).unwrap().0).or_insert(0) += 1;
                }
                let total: u64 = classes.values().sum();
                assert_eq!(total, (n as u64).pow(k));
                for (pat, size) in classes {
                    let i = *pat.iter().max().unwrap() as u64;
                    let expect = crate::bounds::falling_factorial(n as u64, i).unwrap_or(0);
                    assert_eq!(size, expect, "n={n} k={k} pattern {pat:?}");
                }
            }
        }
    }

    #[test]
    fn word_to_permutation_examples() {
        let w1 = obj(Kind::Word, &[1, 1, 3, 2, 3, 3], 4);
        let w2 = obj(Kind::Word, &[2, 2, 3, 4, 3, 3], 4);
        assert_eq!(word_to_permutation(&w1).unwrap().entries(), &[1, 3, 2]);
        assert_eq!(word_to_permutation(&w2).unwrap().entries(), &[2, 3, 4]);

        let distinct = obj(Kind::Word, &[3, 1, 2], 3);
        assert_eq!(word_to_permutation(&distinct).unwrap().entries(), &[3, 1, 2]);
    }

    #[test]
    fn word_to_permutation_bijective_on_classes() {
        use std::collections::{HashMap, HashSet};
        for n in 1..=4u32 {
            for k in 1..=3u32 {
                let mut classes: HashMap<Vec<u32>, Vec<CombObject>> = HashMap::new();
                for w in enumerate_universe(Kind::Word, p(n, k)).unwrap() {
                    classes
                        .entry(equality_pattern(&w).unwrap().0)
                        .or_default()
                        .push(w);
                }
                for (pat, members) in classes {
                    let i = *pat.iter().max().unwrap() as u64;
                    let images: HashSet<_> = members
                        .iter()
                        .map(|w| word_to_permutation(w).unwrap())
                        .collect();
                    // injective on the class, onto the i-permutations of [n]
                    assert_eq!(images.len(), members.len());
                    assert_eq!(
                        images.len() as u64,
                        crate::bounds::falling_factorial(n as u64, i).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn multiset_support_examples() {
        let m = obj(Kind::Multiset, &[1, 1, 3], 4);
        assert_eq!(multiset_support(&m).unwrap().entries(), &[1, 3]);
        let m = obj(Kind::Multiset, &[2, 2, 2], 4);
        assert_eq!(multiset_support(&m).unwrap().entries(), &[2]);
        let m = obj(Kind::Multiset, &[1, 2, 3], 4);
        assert_eq!(multiset_support(&m).unwrap().entries(), &[1, 2, 3]);
    }

    #[test]
    fn support_counts_match_enumeration() {
        assert_eq!(count_multisets_with_support(3, 2).unwrap(), 2);
        assert_eq!(count_multisets_with_support(5, 1).unwrap(), 1);
        assert_eq!(count_multisets_with_support(4, 3).unwrap(), 3);
        assert!(count_multisets_with_support(3, 4).is_err());
        assert!(count_multisets_with_support(3, 0).is_err());

        for k in 1..=6u32 {
            for i in 1..=k {
                let support: Vec<u32> = (1..=i).collect();
                let count = enumerate_universe(Kind::Multiset, p(i.max(1), k))
                    .unwrap()
                    .into_iter()
                    .filter(|m| multiset_support(m).unwrap().entries() == &support[..])
                    .count() as u64;
                assert_eq!(
                    count,
                    count_multisets_with_support(k, i).unwrap(),
                    "k={k} i={i}"
                );
            }
        }
    }
}
