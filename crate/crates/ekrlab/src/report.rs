//! Sweep records, sweep configuration, report serialization (JSON-lines
//! and CSV), and the family file format.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::bounds::{class_sum_word_bound, paper_bound, trivial_family_size};
use crate::error::{EkrError, Result};
use crate::intersection::{IntersectionSpec, Mode};
use crate::objects::{universe_size, CombObject, Kind, Params};
use crate::solver::{extremal_structure, Caps, Structure};

/// One grid cell's report row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRecord {
    pub kind: Kind,
    pub mode: Mode,
    pub n: u32,
    pub k: u32,
    pub t: u32,
    pub universe_size: u64,
    pub trivial_size: u64,
    pub paper_bound: Option<u64>,
    pub class_sum_bound: Option<u64>,
    pub oracle_max: u64,
    pub bound_tight: Option<bool>,
    pub structure: String,
    pub elapsed_ms: u64,
    pub truncated: bool,
}

pub const CSV_HEADER: &str = "kind,mode,n,k,t,universe_size,trivial_size,paper_bound,class_sum_bound,oracle_max,bound_tight,structure,elapsed_ms,truncated";

impl SweepRecord {
    pub fn to_csv_row(&self) -> String {
        fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map_or_else(|| "n/a".into(), |x| x.to_string())
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.mode,
            self.n,
            self.k,
            self.t,
            self.universe_size,
            self.trivial_size,
            opt(&self.paper_bound),
            opt(&self.class_sum_bound),
            self.oracle_max,
            opt(&self.bound_tight),
            self.structure,
            self.elapsed_ms,
            self.truncated
        )
    }

    pub fn to_jsonl(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Jsonl,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" => Ok(ReportFormat::Jsonl),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown format {other:?} (expected jsonl or csv)")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct Range {
    pub min: u32,
    pub max: u32,
}

impl Range {
    pub fn values(&self) -> impl Iterator<Item = u32> {
        self.min..=self.max
    }

    pub fn is_empty(&self) -> bool {
        self.min > self.max
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct CapsConfig {
    pub vertices: Option<usize>,
    pub nodes: Option<u64>,
    pub seconds: Option<f64>,
    pub enum_cap: Option<usize>,
}

/// Sweep grid: all kind/mode combinations crossed with the n, k, t ranges.
#[derive(Debug, Clone, Deserialize)]
pub struct SweepConfig {
    pub kinds: Vec<Kind>,
    pub modes: Vec<Mode>,
    pub n: Range,
    pub k: Range,
    #[serde(default = "default_t_range")]
    pub t: Range,
    pub format: Option<ReportFormat>,
    pub out: Option<std::path::PathBuf>,
    pub caps: Option<CapsConfig>,
}

fn default_t_range() -> Range {
    Range { min: 1, max: 1 }
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: SweepConfig = toml::from_str(text)
            .map_err(|e| EkrError::InvalidParams(format!("bad sweep config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kinds.is_empty() || self.modes.is_empty() {
            return Err(EkrError::InvalidParams(
                "kinds and modes must be non-empty".into(),
            ));
        }
        if self.n.is_empty() || self.k.is_empty() || self.t.is_empty() {
            return Err(EkrError::InvalidParams("empty parameter range".into()));
        }
        Ok(())
    }

    pub fn apply_caps(&self, base: &Caps) -> Caps {
        let mut caps = base.clone();
        if let Some(c) = &self.caps {
            if let Some(v) = c.vertices {
                caps.max_vertices = v;
            }
            if let Some(v) = c.nodes {
                caps.max_nodes = v;
            }
            if let Some(v) = c.seconds {
                caps.max_seconds = v;
            }
            if let Some(v) = c.enum_cap {
                caps.enum_cap = v;
            }
        }
        caps
    }

    /// Grid cells in deterministic row order: kind, mode, n, k, t, each
    /// lexicographic. Cells whose parameter guards fail (k > n for sets and
    /// permutations, t > k, Hamming on unordered kinds) are skipped.
    pub fn cells(&self) -> Vec<(IntersectionSpec, Params)> {
        let mut out = Vec::new();
        for &kind in &self.kinds {
            for &mode in &self.modes {
                for n in self.n.values() {
                    for k in self.k.values() {
                        for t in self.t.values() {
                            if t > k {
                                continue;
                            }
                            if matches!(kind, Kind::Set | Kind::Permutation) && k > n {
                                continue;
                            }
                            let Ok(spec) = IntersectionSpec::new(kind, mode, t) else {
                                continue;
                            };
                            let Ok(p) = Params::new(n, k) else { continue };
                            out.push((spec, p));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Run the oracle on one grid cell and assemble its report row.
pub fn run_cell(spec: IntersectionSpec, p: Params, caps: &Caps) -> Result<SweepRecord> {
    let result = extremal_structure(spec, p, caps)?;
    let bound = paper_bound(spec, p)?;
    let class_sum = if spec.kind == Kind::Word && spec.mode == Mode::Standard {
        class_sum_word_bound(p).ok()
    } else {
        None
    };
    let oracle_max = result.max_size as u64;
    Ok(SweepRecord {
        kind: spec.kind,
        mode: spec.mode,
        n: p.n,
        k: p.k,
        t: spec.t,
        universe_size: universe_size(spec.kind, p)?,
        trivial_size: trivial_family_size(spec, p)?,
        paper_bound: bound.value,
        class_sum_bound: class_sum,
        oracle_max,
        bound_tight: bound.value.map(|b| oracle_max == b),
        structure: result
            .structure
            .unwrap_or(Structure::Truncated)
            .to_string(),
        elapsed_ms: result.elapsed.as_millis() as u64,
        truncated: result.truncated,
    })
}

/// Run a whole sweep, flushing each row as it completes so interrupted
/// sweeps keep their finished cells.
pub fn run_sweep(
    config: &SweepConfig,
    caps: &Caps,
    format: ReportFormat,
    out: &mut dyn Write,
) -> Result<Vec<SweepRecord>> {
    if format == ReportFormat::Csv {
        writeln!(out, "{CSV_HEADER}")?;
    }
    let mut records = Vec::new();
    for (spec, p) in config.cells() {
        let record = run_cell(spec, p, caps)?;
        match format {
            ReportFormat::Jsonl => writeln!(out, "{}", record.to_jsonl())?,
            ReportFormat::Csv => writeln!(out, "{}", record.to_csv_row())?,
        }
        out.flush()?;
        records.push(record);
    }
    Ok(records)
}

/// Family file: header line `kind,n,k`, then one object per line as
/// comma-separated integers.
pub fn read_family_file(reader: impl BufRead) -> Result<(Kind, Params, Vec<CombObject>)> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines.next().ok_or(EkrError::Parse {
        line: 1,
        msg: "empty file, expected header `kind,n,k`".into(),
    })?;
    let header = header?;
    let parts: Vec<&str> = header.trim().split(',').collect();
    if parts.len() != 3 {
        return Err(EkrError::Parse {
            line: 1,
            msg: format!("expected header `kind,n,k`, got {header:?}"),
        });
    }
    let kind: Kind = parts[0].parse().map_err(|e| EkrError::Parse { line: 1, msg: e })?;
    let n: u32 = parts[1].trim().parse().map_err(|_| EkrError::Parse {
        line: 1,
        msg: format!("bad n {:?}", parts[1]),
    })?;
    let k: u32 = parts[2].trim().parse().map_err(|_| EkrError::Parse {
        line: 1,
        msg: format!("bad k {:?}", parts[2]),
    })?;
    let p = Params::new(n, k).map_err(|e| EkrError::Parse {
        line: 1,
        msg: e.to_string(),
    })?;
    let mut members = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let entries = trimmed
            .split(',')
            .map(|s| {
                s.trim().parse::<u32>().map_err(|_| EkrError::Parse {
                    line: line_no,
                    msg: format!("bad entry {s:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let obj = CombObject::new(kind, entries, p).map_err(|e| EkrError::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        members.push(obj);
    }
    Ok((kind, p, members))
}

pub fn write_family_file(
    out: &mut dyn Write,
    kind: Kind,
    p: Params,
    members: &[CombObject],
) -> Result<()> {
    writeln!(out, "{},{},{}", kind, p.n, p.k)?;
    for m in members {
        let row = m
            .entries()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",");
        writeln!(out, "{row}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    #[test]
    fn family_file_round_trip() {
        let p = Params::new(4, 2).unwrap();
        let members: Vec<_> = [[1u32, 2], [1, 3]]
            .iter()
            .map(|e| CombObject::new(Kind::Set, e.to_vec(), p).unwrap())
            .collect();
        let mut buf = Vec::new();
        write_family_file(&mut buf, Kind::Set, p, &members).unwrap();
        let (kind, rp, rm) = read_family_file(Cursor::new(buf)).unwrap();
        assert_eq!(kind, Kind::Set);
        assert_eq!(rp, p);
        assert_eq!(rm, members);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text = "set,4,2\n1,2\n1,2,\n";
        let err = read_family_file(Cursor::new(text)).unwrap_err();
        match err {
            EkrError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn bad_header_rejected() {
        assert!(read_family_file(Cursor::new("set,4\n")).is_err());
        assert!(read_family_file(Cursor::new("blob,4,2\n")).is_err());
        assert!(read_family_file(Cursor::new("")).is_err());
    }

    #[test]
    fn config_parse_and_cells() {
        let cfg = SweepConfig::parse(
            r#"
kinds = ["set"]
modes = ["standard"]
n = { min = 4, max = 7 }
k = { min = 2, max = 3 }
"#,
        )
        .unwrap();
        assert_eq!(cfg.cells().len(), 8);

        let bad = SweepConfig::parse(
            r#"
kinds = ["set"]
modes = ["standard"]
n = { min = 5, max = 4 }
k = { min = 2, max = 3 }
"#,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn cells_skip_invalid_combinations() {
        let cfg = SweepConfig::parse(
            r#"
kinds = ["set", "word"]
modes = ["standard", "hamming"]
n = { min = 3, max = 3 }
k = { min = 2, max = 2 }
"#,
        )
        .unwrap();
        // set/hamming dropped; set/standard, word/standard, word/hamming stay
        assert_eq!(cfg.cells().len(), 3);
    }

    #[test]
    fn record_serialization() {
        let caps = Caps::default();
        let spec = IntersectionSpec::new(Kind::Word, Mode::Standard, 1).unwrap();
        let record = run_cell(spec, Params::new(4, 2).unwrap(), &caps).unwrap();
        assert_eq!(record.oracle_max, 7);
        assert_eq!(record.paper_bound, Some(12));
        assert_eq!(record.class_sum_bound, Some(7));
        assert_eq!(record.bound_tight, Some(false));
        let json: serde_json::Value = serde_json::from_str(&record.to_jsonl()).unwrap();
        assert_eq!(json["oracle_max"], 7);
        let csv = record.to_csv_row();
        assert!(csv.starts_with("word,standard,4,2,1,16,7,12,7,7,false,"));
    }

    #[test]
    fn csv_uses_na_for_missing_bounds() {
        let caps = Caps::default();
        let spec = IntersectionSpec::new(Kind::Set, Mode::Standard, 1).unwrap();
        // n < 2k: the printed bound's guard fails
        let record = run_cell(spec, Params::new(4, 3).unwrap(), &caps).unwrap();
        assert_eq!(record.paper_bound, None);
        assert!(record.to_csv_row().contains(",n/a,"));
    }
}
