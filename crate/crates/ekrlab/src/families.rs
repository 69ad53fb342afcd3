//! Anchored (trivial) family construction and the decision procedure for
//! whether a given family is anchored.

use crate::error::{EkrError, Result};
use crate::intersection::{IntersectionSpec, Mode};
use crate::objects::{enumerate_universe, CombObject, Kind, Params};

/// What every member of a trivial family has in common: a t-multiset core of
/// elements (standard mode) or t fixed position-value pairs (Hamming mode).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Anchor {
    Core(Vec<u32>),
    Positions(Vec<(u32, u32)>),
}

impl std::fmt::Display for Anchor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Anchor::Core(core) => {
                let body = core
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                write!(f, "core{{{body}}}")
            }
            Anchor::Positions(ps) => {
                let body = ps
                    .iter()
                    .map(|(pos, v)| format!("{pos}->{v}"))
                    .collect::<Vec<_>>()
                    .join(",");
                write!(f, "positions{{{body}}}")
            }
        }
    }
}

impl Anchor {
    fn validate(&self, spec: IntersectionSpec, p: Params) -> Result<()> {
        match (self, spec.mode) {
            (Anchor::Core(core), Mode::Standard) => {
                if core.len() != spec.t as usize {
                    return Err(EkrError::BadAnchor(format!(
                        "core size {} != t = {}",
                        core.len(),
                        spec.t
                    )));
                }
                if core.iter().any(|&e| e < 1 || e > p.n) {
                    return Err(EkrError::BadAnchor("core element outside [n]".into()));
                }
                if !core.windows(2).all(|w| w[0] <= w[1]) {
                    return Err(EkrError::BadAnchor("core must be sorted".into()));
                }
                if matches!(spec.kind, Kind::Set | Kind::Permutation)
                    && core.windows(2).any(|w| w[0] == w[1])
                {
                    return Err(EkrError::BadAnchor(
                        "core elements must be distinct for sets and permutations".into(),
                    ));
                }
                Ok(())
            }
            (Anchor::Positions(ps), Mode::Hamming) => {
                if ps.len() != spec.t as usize {
                    return Err(EkrError::BadAnchor(format!(
                        "{} fixed positions != t = {}",
                        ps.len(),
                        spec.t
                    )));
                }
                if ps.iter().any(|&(pos, _)| pos < 1 || pos > p.k) {
                    return Err(EkrError::BadAnchor("position outside [1, k]".into()));
                }
                if ps.iter().any(|&(_, v)| v < 1 || v > p.n) {
                    return Err(EkrError::BadAnchor("value outside [n]".into()));
                }
                let mut seen = ps.iter().map(|&(pos, _)| pos).collect::<Vec<_>>();
                seen.sort_unstable();
                if seen.windows(2).any(|w| w[0] == w[1]) {
                    return Err(EkrError::BadAnchor("positions must be distinct".into()));
                }
                if spec.kind == Kind::Permutation {
                    let mut vals = ps.iter().map(|&(_, v)| v).collect::<Vec<_>>();
                    vals.sort_unstable();
                    if vals.windows(2).any(|w| w[0] == w[1]) {
                        return Err(EkrError::BadAnchor(
                            "values must be distinct for permutations".into(),
                        ));
                    }
                }
                Ok(())
            }
            _ => Err(EkrError::BadAnchor(
                "anchor flavor does not match intersection mode".into(),
            )),
        }
    }

    /// Whether an object is compatible with this anchor.
    pub fn admits(&self, obj: &CombObject, n: u32) -> bool {
        match self {
            Anchor::Core(core) => {
                let mult = obj.multiplicities(n);
                let mut need = vec![0u32; n as usize + 1];
                for &e in core {
                    need[e as usize] += 1;
                }
                need.iter().zip(&mult).all(|(want, have)| have >= want)
            }
            Anchor::Positions(ps) => ps
                .iter()
                .all(|&(pos, v)| obj.entries()[pos as usize - 1] == v),
        }
    }
}

/// Same-kind, same-parameter objects, pairwise distinct, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    kind: Kind,
    params: Params,
    members: Vec<CombObject>,
}

impl Family {
    pub fn new(kind: Kind, params: Params, mut members: Vec<CombObject>) -> Result<Self> {
        for m in &members {
            m.expect_kind(kind)?;
            if m.len() != params.k as usize {
                return Err(EkrError::InvalidParams(format!(
                    "member length {} != k = {}",
                    m.len(),
                    params.k
                )));
            }
        }
        members.sort();
        members.dedup();
        Ok(Family {
            kind,
            params,
            members,
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn members(&self) -> &[CombObject] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// All universe objects compatible with the anchor.
pub fn trivial_family(spec: IntersectionSpec, p: Params, anchor: &Anchor) -> Result<Family> {
    anchor.validate(spec, p)?;
    let members = enumerate_universe(spec.kind, p)?
        .into_iter()
        .filter(|o| anchor.admits(o, p.n))
        .collect();
    Family::new(spec.kind, p, members)
}

/// The lexicographically least anchor every member is compatible with, if
/// any. The empty family maps to the least anchor by convention.
pub fn is_trivial(spec: IntersectionSpec, fam: &Family) -> Result<Option<Anchor>> {
    if fam.kind() != spec.kind {
        return Err(EkrError::KindMismatch {
            expected: spec.kind,
            got: fam.kind(),
        });
    }
    let p = fam.params();
    let mut found = None;
    for_each_anchor(spec, p, &mut |anchor| {
        if fam.members().iter().all(|m| anchor.admits(m, p.n)) {
            found = Some(anchor.clone());
            true // stop
        } else {
            false
        }
    });
    Ok(found)
}

/// Candidate anchors in lexicographic order. The visitor returns true to
/// stop early.
fn for_each_anchor(spec: IntersectionSpec, p: Params, visit: &mut impl FnMut(&Anchor) -> bool) {
    let t = spec.t as usize;
    match spec.mode {
        Mode::Standard => {
            let distinct = matches!(spec.kind, Kind::Set | Kind::Permutation);
            let mut core = Vec::with_capacity(t);
            rec_cores(p.n, t, 1, distinct, &mut core, visit);
        }
        Mode::Hamming => {
            let mut positions = Vec::with_capacity(t);
            rec_positions(p, t, 1, &mut positions, visit);
        }
    }
}

fn rec_cores(
    n: u32,
    t: usize,
    min: u32,
    distinct: bool,
    core: &mut Vec<u32>,
    visit: &mut impl FnMut(&Anchor) -> bool,
) -> bool {
    if core.len() == t {
        return visit(&Anchor::Core(core.clone()));
    }
    for e in min..=n {
        core.push(e);
        let stop = rec_cores(n, t, if distinct { e + 1 } else { e }, distinct, core, visit);
        core.pop();
        if stop {
            return true;
        }
    }
    false
}

fn rec_positions(
    p: Params,
    t: usize,
    min_pos: u32,
    acc: &mut Vec<(u32, u32)>,
    visit: &mut impl FnMut(&Anchor) -> bool,
) -> bool {
    if acc.len() == t {
        return visit(&Anchor::Positions(acc.clone()));
    }
    for pos in min_pos..=p.k {
        for v in 1..=p.n {
            acc.push((pos, v));
            let stop = rec_positions(p, t, pos + 1, acc, visit);
            acc.pop();
            if stop {
                return true;
            }
        }
    }
    false
}
