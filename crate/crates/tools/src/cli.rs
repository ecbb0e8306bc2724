//! Argument parsing and command dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use og6_lattice::classify::{
    classify_l, classify_lambda, diff_rows, nontrivial_pipeline, ClassificationRow, PairRow, ReferenceData, Side,
};
use og6_lattice::embed::{complement_in_fixed, primitive_embeddings};
use og6_lattice::genus::{catalog_p_elementary, CATALOG_MAX_RANK};
use og6_lattice::isometry::{analyze, effectiveness};
use og6_lattice::{discriminant_form, parse_lattice, Int, IntMatrix, SignaturePair};
use serde_json::{json, Value};

use crate::data::{self, DataError, TableId};
use crate::render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Lambda,
    #[value(name = "L")]
    L,
}

#[derive(Debug, Parser)]
#[command(name = "og6", version, about = "Even lattices, discriminant forms and prime-order isometries of U^3+[-2]^2")]
pub struct Cli {
    /// Output format; `disc` and `sig` default to pretty, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Directory holding the bundled tables (overrides OG6_DATA_DIR).
    #[arg(long, global = true)]
    pub data_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discriminant form of a lattice.
    Disc { expr: String },
    /// Signature `(p,m)` of a lattice.
    Sig { expr: String },
    /// Level-(1) classes of primitive embeddings.
    Embed {
        #[arg(long)]
        sub: String,
        #[arg(long)]
        ambient: String,
    },
    /// Orthogonal complement of a span given by basis vectors.
    Complement {
        #[arg(long)]
        ambient: String,
        /// JSON list of vectors in ambient coordinates.
        #[arg(long)]
        basis: String,
    },
    /// Checks an isometry and reports kernels, spinor norm and index.
    VerifyIsometry {
        #[arg(long)]
        lattice: String,
        /// Inline JSON rows, a JSON file, or `table4#N`.
        #[arg(long)]
        matrix: String,
        /// Row i of the matrix is the image of basis vector i.
        #[arg(long)]
        rows_are_images: bool,
    },
    /// Classification rows for order-p actions.
    Classify {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        p: Int,
        /// Order of the action on the discriminant group (target L, p = 2).
        #[arg(long, num_args = 0..=1, default_missing_value = "2")]
        disc_action: Option<u32>,
    },
    /// Compares computed rows against a bundled table.
    Diff {
        /// `table1#p2`, `table2`, `table3`, `table4`, `table5#p3`, ...
        #[arg(long)]
        table: String,
        /// Output of `classify`; read from stdin when piped, computed otherwise.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// One block-sum representative per p-elementary genus.
    Catalog {
        #[arg(long)]
        p: Int,
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
        /// Keep only this signature, written `p,m` or `(p,m)`.
        #[arg(long)]
        signature: Option<String>,
    },
}

/// Exit status and emitted text of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Lattice(#[from] og6_lattice::Error),
    #[error("{0}")]
    Data(#[from] DataError),
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Runs one command. `stdin` yields piped input and is only called by
/// `diff` without `--input`.
pub fn run<I, T>(argv: I, stdin: impl FnOnce() -> Option<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match dispatch(&cli, stdin) {
        Ok(o) => o,
        Err(e) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn data_dir(cli: &Cli) -> PathBuf {
    cli.data_dir.clone().unwrap_or_else(data::data_dir)
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli, stdin: impl FnOnce() -> Option<String>) -> CliResult<Outcome> {
    let fmt = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Disc { expr } => {
            let f = discriminant_form(&parse_lattice(expr)?);
            Ok(Outcome::ok(match fmt(Format::Pretty) {
                Format::Json => json_text(&render::form_json(&f)),
                Format::Csv => {
                    let recs: Vec<Vec<String>> = f
                        .divisors()
                        .iter()
                        .zip(f.q_table())
                        .map(|(d, q)| vec![d.to_string(), og6_lattice::finite::fmt_mod2(*q)])
                        .collect();
                    render::csv_table(&["divisor", "q"], &recs)
                }
                Format::Pretty => format!("{}\n", render::pretty_form(&f)),
            }))
        }
        Command::Sig { expr } => {
            let s = parse_lattice(expr)?.signature();
            Ok(Outcome::ok(match fmt(Format::Pretty) {
                Format::Json => json_text(&json!({"plus": s.plus, "minus": s.minus})),
                Format::Csv => render::csv_table(&["plus", "minus"], &[vec![s.plus.to_string(), s.minus.to_string()]]),
                Format::Pretty => format!("{s}\n"),
            }))
        }
        Command::Embed { sub, ambient } => {
            let records = primitive_embeddings(&parse_lattice(sub)?, &parse_lattice(ambient)?)?;
            let header = ["h_order", "complement", "signature", "det_identity"];
            let recs: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    let c = Side::complement_of(r);
                    vec![r.h_order.to_string(), c.label(), c.signature.to_string(), r.det_identity_holds().to_string()]
                })
                .collect();
            Ok(Outcome::ok(match fmt(Format::Json) {
                Format::Json => json_text(&Value::Array(records.iter().map(render::record_json).collect())),
                Format::Csv => render::csv_table(&header, &recs),
                Format::Pretty => render::pretty_table(&header, &recs),
            }))
        }
        Command::Complement { ambient, basis } => {
            let l = parse_lattice(ambient)?;
            let vectors: Vec<Vec<Int>> =
                serde_json::from_str(basis).map_err(|e| usage(format!("--basis must be a JSON list of vectors: {e}")))?;
            if vectors.is_empty() {
                return Err(usage("--basis is empty"));
            }
            let b = IntMatrix::from_cols(l.rank(), &vectors)?;
            let c = complement_in_fixed(&l, &b)?;
            let side = Side::of_lattice(&c.lattice)?;
            let v = json!({
                "complement": render::side_json(&side),
                "gram": render::matrix_json(c.lattice.gram()),
                "basis": c.basis.to_cols(),
                "was_primitive": c.was_primitive,
                "saturated_basis": c.saturated.to_cols(),
            });
            let header = ["complement", "signature", "was_primitive"];
            let recs = vec![vec![side.label(), side.signature.to_string(), c.was_primitive.to_string()]];
            Ok(Outcome::ok(match fmt(Format::Json) {
                Format::Json => json_text(&v),
                Format::Csv => render::csv_table(&header, &recs),
                Format::Pretty => render::pretty_table(&header, &recs),
            }))
        }
        Command::VerifyIsometry { lattice, matrix, rows_are_images } => {
            let l = parse_lattice(lattice)?;
            let g = load_matrix(&data_dir(cli), matrix, *rows_are_images)?;
            let rec = analyze(&l, &g)?;
            let effective = rec.index_exponent.and_then(|_| effectiveness(&l, &g, rec.order as Int).ok());
            let header = ["order", "disc_order", "invariant", "coinvariant", "spinor", "index_exponent", "effective"];
            let label = |s: &og6_lattice::isometry::Sublattice| Side::of_lattice(&s.lattice).map(|x| x.label());
            let recs = vec![vec![
                rec.order.to_string(),
                rec.disc_order.to_string(),
                label(&rec.invariant)?,
                label(&rec.coinvariant)?,
                rec.spinor.to_string(),
                rec.index_exponent.map(|a| a.to_string()).unwrap_or_default(),
                effective.map(|e| e.to_string()).unwrap_or_default(),
            ]];
            Ok(Outcome::ok(match fmt(Format::Json) {
                Format::Json => json_text(&render::isometry_json(&rec, effective)),
                Format::Csv => render::csv_table(&header, &recs),
                Format::Pretty => render::pretty_table(&header, &recs),
            }))
        }
        Command::Classify { target, p, disc_action } => {
            let refs = data::reference_data(&data_dir(cli))?;
            let doc = classify_doc(*target, *p, disc_action.unwrap_or(1), &refs)?;
            Ok(Outcome::ok(render_classify(&doc, fmt(Format::Json))))
        }
        Command::Diff { table, input } => {
            let id = TableId::parse(table)?;
            let dir = data_dir(cli);
            let text = match input {
                Some(path) => Some(std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?),
                None => stdin().filter(|s| !s.trim().is_empty()),
            };
            let computed = match text {
                Some(t) => rows_from_document(&id, &t)?,
                None => computed_rows(&id, &data::reference_data(&dir)?)?,
            };
            let expected = data::expected_rows(&dir, &id)?;
            let computed = restrict_to_table(computed, &expected);
            let report = diff_rows(&computed, &expected)?;
            let code = if report.is_equal() { EXIT_OK } else { EXIT_MISMATCH };
            let out = match fmt(Format::Json) {
                Format::Json => json_text(&render::diff_json(&id.to_string(), &report)),
                Format::Csv | Format::Pretty => diff_lines(&id, &report),
            };
            Ok(Outcome { code, stdout: out, stderr: String::new() })
        }
        Command::Catalog { p, max_rank, signature } => {
            if *max_rank > CATALOG_MAX_RANK {
                return Err(usage(format!("--max-rank must be at most {CATALOG_MAX_RANK}")));
            }
            if !matches!(p, 2 | 3 | 5 | 7) {
                return Err(usage("--p must be 2, 3, 5 or 7"));
            }
            let want = signature.as_deref().map(parse_signature).transpose()?;
            let entries = catalog_p_elementary(*p, *max_rank, &|s| want.is_none_or(|w| w == s))?;
            let header = ["expression", "signature", "a", "delta"];
            let recs: Vec<Vec<String>> = entries
                .iter()
                .map(|e| {
                    vec![
                        e.expr.to_string(),
                        e.tag.signature.to_string(),
                        e.tag.a.to_string(),
                        e.tag.delta.map(|d| d.to_string()).unwrap_or_default(),
                    ]
                })
                .collect();
            Ok(Outcome::ok(match fmt(Format::Json) {
                Format::Json => json_text(&Value::Array(entries.iter().map(render::catalog_json).collect())),
                Format::Csv => render::csv_table(&header, &recs),
                Format::Pretty => render::pretty_table(&header, &recs),
            }))
        }
    }
}

fn parse_signature(s: &str) -> CliResult<SignaturePair> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    let bad = || usage(format!("signature `{s}` is not of the form p,m"));
    let (a, b) = t.split_once(',').ok_or_else(bad)?;
    Ok(SignaturePair::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn load_matrix(dir: &std::path::Path, arg: &str, rows_are_images: bool) -> CliResult<IntMatrix> {
    if let Some(n) = arg.strip_prefix("table4#") {
        let n: usize = n.parse().map_err(|_| usage(format!("bad certificate number in `{arg}`")))?;
        let certs = data::load_certificates(dir)?;
        let c = certs.into_iter().find(|c| c.no == n).ok_or_else(|| usage(format!("no certificate {n}")))?;
        return Ok(c.matrix);
    }
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| usage(format!("{arg}: {e}")))?
    };
    let rows: Vec<Vec<Int>> = serde_json::from_str(&text).map_err(|e| usage(format!("--matrix must be JSON rows: {e}")))?;
    let m = IntMatrix::from_rows(&rows)?;
    Ok(if rows_are_images { m.transpose() } else { m })
}

/// Output of `classify`.
pub struct ClassifyDoc {
    pub rows: Vec<ClassificationRow>,
    pub square4: Option<Vec<PairRow>>,
    pub gluing_pairs: Option<Vec<PairRow>>,
}

pub fn classify_doc(target: Target, p: Int, disc_action: u32, refs: &ReferenceData) -> Result<ClassifyDoc, og6_lattice::Error> {
    match (target, disc_action) {
        (Target::Lambda, _) => Ok(ClassifyDoc { rows: classify_lambda(p, refs)?, square4: None, gluing_pairs: None }),
        (Target::L, 2) if p == 2 => {
            let r = nontrivial_pipeline(refs)?;
            Ok(ClassifyDoc { rows: r.rows, square4: Some(r.square4), gluing_pairs: Some(r.gluing_pairs) })
        }
        (Target::L, d) => Ok(ClassifyDoc { rows: classify_l(p, d, refs)?, square4: None, gluing_pairs: None }),
    }
}

pub fn classify_json(doc: &ClassifyDoc) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("rows".into(), Value::Array(doc.rows.iter().map(render::row_json).collect()));
    if let Some(s) = &doc.square4 {
        m.insert("square4".into(), Value::Array(s.iter().map(render::pair_json).collect()));
    }
    if let Some(g) = &doc.gluing_pairs {
        m.insert("gluing_pairs".into(), Value::Array(g.iter().map(render::pair_json).collect()));
    }
    Value::Object(m)
}

fn render_classify(doc: &ClassifyDoc, fmt: Format) -> String {
    let rows: Vec<Vec<String>> = doc.rows.iter().map(render::row_record).collect();
    match fmt {
        Format::Json => json_text(&classify_json(doc)),
        Format::Csv => render::csv_table(&render::ROW_COLUMNS, &rows),
        Format::Pretty => {
            let mut out = String::new();
            for (title, pairs) in [("square-4 complements", &doc.square4), ("gluing pairs", &doc.gluing_pairs)] {
                if let Some(pairs) = pairs {
                    let recs: Vec<Vec<String>> = pairs.iter().map(render::pair_record).collect();
                    out.push_str(&format!("{title}\n{}\n", render::pretty_table(&render::PAIR_COLUMNS, &recs)));
                }
            }
            out.push_str(&render::pretty_table(&render::ROW_COLUMNS, &rows));
            out
        }
    }
}

/// Which part of a `classify` document a table is compared against.
fn section(id: &TableId) -> &'static str {
    match id.table {
        2 => "square4",
        3 => "gluing_pairs",
        _ => "rows",
    }
}

fn rows_from_document(id: &TableId, text: &str) -> CliResult<Vec<PairRow>> {
    let v: Value = serde_json::from_str(text).map_err(|e| usage(format!("input is not JSON: {e}")))?;
    let key = section(id);
    let arr = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| usage(format!("input has no `{key}` array; {id} needs the matching classify output")))?;
    arr.iter()
        .enumerate()
        .map(|(i, r)| render::pair_from_json(r).ok_or_else(|| usage(format!("input `{key}` entry {i} is malformed"))))
        .collect()
}

/// Computes the rows a table is compared against.
pub fn computed_rows(id: &TableId, refs: &ReferenceData) -> Result<Vec<PairRow>, og6_lattice::Error> {
    let pairs = |rows: Vec<ClassificationRow>| rows.iter().map(ClassificationRow::as_pair).collect::<Vec<_>>();
    let block_p = || -> Int { id.block.trim_start_matches('p').trim_end_matches(['t', 'n']).parse().unwrap_or(0) };
    match (id.table, id.block.as_str()) {
        (1, _) => Ok(pairs(classify_lambda(block_p(), refs)?)),
        (2, _) => Ok(nontrivial_pipeline(refs)?.square4),
        (3, _) => Ok(nontrivial_pipeline(refs)?.gluing_pairs),
        (4, _) | (5, "p2n") => Ok(pairs(nontrivial_pipeline(refs)?.rows)),
        _ => Ok(pairs(classify_l(block_p(), 1, refs)?)),
    }
}

/// Drops computed exclusions of kinds the table does not list.
pub fn restrict_to_table(computed: Vec<PairRow>, expected: &[og6_lattice::classify::ExpectedRow]) -> Vec<PairRow> {
    computed
        .into_iter()
        .filter(|r| match r.status.reason() {
            None => true,
            Some(reason) => expected.iter().any(|e| e.excluded.as_deref() == Some(reason.name())),
        })
        .collect()
}

fn diff_lines(id: &TableId, d: &og6_lattice::classify::DiffReport) -> String {
    let mut out = format!("{id}: {} matched\n", d.matched);
    for m in &d.missing {
        out.push_str(&format!("- {m}\n"));
    }
    for x in &d.extra {
        out.push_str(&format!("+ {x}\n"));
    }
    for (e, c) in &d.mismatched {
        out.push_str(&format!("~ {e}  =>  {c}\n"));
    }
    out.push_str(if d.is_equal() { "equal\n" } else { "differs\n" });
    out
}
