//! Bundled reference tables and K3 data.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use og6_lattice::classify::{ExpectedRow, ReferenceData};
use og6_lattice::genus::GenusTag;
use og6_lattice::{parse_lattice, IntMatrix, SignaturePair};
use serde::Deserialize;

/// Overrides the data directory.
pub const DATA_DIR_ENV: &str = "OG6_DATA_DIR";

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("unknown table `{0}`")]
    UnknownTable(String),
    #[error("{file} row {no}: {msg}")]
    Row { file: String, no: usize, msg: String },
}

pub fn data_dir() -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("data"),
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(dir: &Path, name: &str) -> Result<T, DataError> {
    let path = dir.join(name);
    let text = fs::read_to_string(&path).map_err(|source| DataError::Io { path: path.clone(), source })?;
    serde_json::from_str(&text).map_err(|source| DataError::Json { path, source })
}

#[derive(Debug, Deserialize)]
struct TagFile {
    tags: Vec<TagEntry>,
}

#[derive(Debug, Deserialize)]
struct TagEntry {
    p: i128,
    signature: [usize; 2],
    a: usize,
    #[serde(default)]
    delta: Option<u8>,
}

pub fn load_k3_tags(dir: &Path) -> Result<Vec<GenusTag>, DataError> {
    let f: TagFile = read_json(dir, "k3_realizable.json")?;
    Ok(f.tags
        .into_iter()
        .map(|t| GenusTag { signature: SignaturePair::new(t.signature[0], t.signature[1]), p: t.p, a: t.a, delta: t.delta })
        .collect())
}

/// One row of any table file; each file uses a subset of the fields.
#[derive(Clone, Debug, Deserialize)]
pub struct RawRow {
    pub no: usize,
    #[serde(default)]
    pub coinvariant: Option<String>,
    #[serde(default)]
    pub invariant: Option<String>,
    #[serde(default)]
    pub lambda_g: Option<String>,
    #[serde(default)]
    pub s: Option<String>,
    #[serde(default)]
    pub t: Option<String>,
    #[serde(default)]
    pub signature: Option<[usize; 2]>,
    #[serde(default)]
    pub a: Option<usize>,
    #[serde(default)]
    pub delta: Option<u8>,
    #[serde(default)]
    pub embeds: Option<bool>,
    #[serde(default)]
    pub survivor: Option<bool>,
    #[serde(default)]
    pub excluded: Option<String>,
    #[serde(default)]
    pub rows: Option<Vec<Vec<i128>>>,
}

impl RawRow {
    /// `(first column, second column, marker)` in the file's own terms.
    pub fn columns(&self) -> (Option<&str>, Option<&str>, Option<bool>) {
        if let Some(l) = &self.lambda_g {
            return (Some(l), self.s.as_deref(), self.embeds);
        }
        if self.t.is_some() {
            return (self.s.as_deref(), self.t.as_deref(), self.survivor);
        }
        (self.coinvariant.as_deref(), self.invariant.as_deref(), None)
    }
}

#[derive(Debug, Deserialize)]
pub struct TableFile {
    pub provenance: String,
    pub blocks: BTreeMap<String, Vec<RawRow>>,
    #[serde(default)]
    pub case25_alternate: Option<Case25>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Case25 {
    pub s: String,
    pub t: String,
}

/// `table5#p7` style identifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableId {
    pub table: u8,
    pub block: String,
}

impl TableId {
    pub fn parse(s: &str) -> Result<TableId, DataError> {
        let (name, block) = s.split_once('#').unwrap_or((s, "all"));
        let table = match name {
            "table1" => 1,
            "table2" => 2,
            "table3" => 3,
            "table4" => 4,
            "table5" => 5,
            _ => return Err(DataError::UnknownTable(s.into())),
        };
        let valid: &[&str] = match table {
            1 => &["p2", "p3", "p5", "p7"],
            5 => &["p2t", "p2n", "p3", "p5", "p7"],
            _ => &["all"],
        };
        if !valid.contains(&block) {
            return Err(DataError::UnknownTable(s.into()));
        }
        Ok(TableId { table, block: block.into() })
    }

    pub fn file_name(&self) -> &'static str {
        match self.table {
            1 => "table1.json",
            2 => "table2.json",
            3 => "table3.json",
            4 => "table4_matrices.json",
            _ => "table5.json",
        }
    }
}

impl std::fmt::Display for TableId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.block == "all" {
            write!(f, "table{}", self.table)
        } else {
            write!(f, "table{}#{}", self.table, self.block)
        }
    }
}

pub fn load_table(dir: &Path, id: &TableId) -> Result<(TableFile, Vec<RawRow>), DataError> {
    let file: TableFile = read_json(dir, id.file_name())?;
    let rows = file.blocks.get(&id.block).cloned().ok_or_else(|| DataError::UnknownTable(id.to_string()))?;
    Ok((file, rows))
}

fn row_error(id: &TableId, no: usize, msg: impl std::fmt::Display) -> DataError {
    DataError::Row { file: id.file_name().into(), no, msg: msg.to_string() }
}

/// Rows of a table parsed into lattices, ready for diffing.
pub fn expected_rows(dir: &Path, id: &TableId) -> Result<Vec<ExpectedRow>, DataError> {
    let (_, rows) = load_table(dir, id)?;
    rows.iter()
        .map(|r| {
            let (first, second, marker) = r.columns();
            let first = first.ok_or_else(|| row_error(id, r.no, "missing first column"))?;
            let first_l = parse_lattice(first).map_err(|e| row_error(id, r.no, e))?;
            let second_l = second.map(parse_lattice).transpose().map_err(|e| row_error(id, r.no, e))?;
            let mut label = format!("{}: {first}", r.no);
            if let Some(s) = second {
                label.push_str(&format!(" | {s}"));
            }
            if let Some(x) = &r.excluded {
                label.push_str(&format!(" [excluded: {x}]"));
            }
            if marker == Some(true) {
                label.push_str(" *");
            }
            Ok(ExpectedRow { label, first: first_l, second: second_l, excluded: r.excluded.clone(), marker })
        })
        .collect()
}

/// A bundled certificate matrix, converted to column convention.
#[derive(Clone, Debug)]
pub struct BundledCertificate {
    pub no: usize,
    pub coinvariant: String,
    pub invariant: String,
    pub matrix: IntMatrix,
}

pub fn load_certificates(dir: &Path) -> Result<Vec<BundledCertificate>, DataError> {
    let id = TableId { table: 4, block: "all".into() };
    let (_, rows) = load_table(dir, &id)?;
    rows.iter()
        .map(|r| {
            let m = r.rows.as_ref().ok_or_else(|| row_error(&id, r.no, "missing matrix"))?;
            let images = IntMatrix::from_rows(m).map_err(|e| row_error(&id, r.no, e))?;
            Ok(BundledCertificate {
                no: r.no,
                coinvariant: r.coinvariant.clone().unwrap_or_default(),
                invariant: r.invariant.clone().unwrap_or_default(),
                matrix: images.transpose(),
            })
        })
        .collect()
}

pub fn reference_data(dir: &Path) -> Result<ReferenceData, DataError> {
    Ok(ReferenceData {
        k3_realizable: load_k3_tags(dir)?,
        certificates: load_certificates(dir)?.into_iter().map(|c| c.matrix).collect(),
    })
}
