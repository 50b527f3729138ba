//! File formats: embeddings, relation and LCH lists, power/rank files, tree
//! exports and CSV output.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::embedding::{EmbeddingSet, ROOT_LABEL};
use crate::error::{Error, Result};
use crate::relations::RelationSet;
use crate::tree::{Arborescence, ROOT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmbeddingFormat {
    /// `label v1 ... vd` per line.
    #[default]
    Glove,
    /// As `Glove`, preceded by an `n d` header line.
    Word2vec,
}

impl FromStr for EmbeddingFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "glove" | "glove_text" => Ok(EmbeddingFormat::Glove),
            "word2vec" | "word2vec_text" | "w2v" => Ok(EmbeddingFormat::Word2vec),
            other => Err(Error::InvalidParameter(format!("unknown embedding format `{other}`"))),
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Numbered lines (1-based), with I/O errors mapped.
fn lines(path: &Path) -> Result<impl Iterator<Item = Result<(usize, String)>>> {
    let owned = path.to_path_buf();
    Ok(open(path)?
        .lines()
        .enumerate()
        .map(move |(i, l)| l.map(|l| (i + 1, l)).map_err(|e| Error::io(&owned, e))))
}

fn malformed(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Malformed {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// Loads a text embedding. Row order is the frequency rank.
pub fn load_embedding(path: impl AsRef<Path>, format: EmbeddingFormat) -> Result<EmbeddingSet> {
    let path = path.as_ref();
    let mut declared: Option<(usize, usize)> = None;
    let mut dim: Option<usize> = None;
    let mut labels = Vec::new();
    let mut data = Vec::new();
    for item in lines(path)? {
        let (no, line) = item?;
        let line = line.trim_end_matches('\r');
        if format == EmbeddingFormat::Word2vec && no == 1 {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(n)), Some(Ok(d)), None) => {
                    declared = Some((n, d));
                    dim = Some(d);
                }
                _ => return Err(malformed(path, no, "expected `n d` header")),
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let label = tokens.next().expect("nonblank line has a token");
        let start = data.len();
        for tok in tokens {
            let v: f64 = tok
                .parse()
                .map_err(|_| malformed(path, no, format!("cannot parse `{tok}` as a number")))?;
            if !v.is_finite() {
                return Err(malformed(path, no, format!("non-finite value `{tok}`")));
            }
            data.push(v);
        }
        let found = data.len() - start;
        let expected = *dim.get_or_insert(found);
        if found != expected {
            return Err(Error::InconsistentDimension {
                path: path.to_path_buf(),
                line: no,
                expected,
                found,
            });
        }
        if found == 0 {
            return Err(malformed(path, no, "row has no values"));
        }
        labels.push(label.to_owned());
    }
    if let Some((n, _)) = declared {
        if n != labels.len() {
            return Err(Error::CountMismatch {
                path: path.to_path_buf(),
                declared: n,
                found: labels.len(),
            });
        }
    }
    EmbeddingSet::from_flat(labels, data, dim.unwrap_or(0))
}

/// Splits a TSV line, skipping blanks and `#` comments.
fn tsv_fields(line: &str) -> Option<Vec<&str>> {
    let line = line.trim_end_matches('\r');
    if line.trim().is_empty() || line.starts_with('#') {
        return None;
    }
    Some(line.split('\t').collect())
}

/// Loads `child<TAB>parent` pairs. Duplicates collapse.
pub fn load_relations(path: impl AsRef<Path>, kind: impl Into<String>) -> Result<RelationSet> {
    let path = path.as_ref();
    let mut set = RelationSet::new(kind);
    for item in lines(path)? {
        let (no, line) = item?;
        let Some(fields) = tsv_fields(&line) else { continue };
        match fields.as_slice() {
            [c, p] if !c.is_empty() && !p.is_empty() => {
                set.insert(*c, *p);
            }
            _ => return Err(malformed(path, no, "expected `child<TAB>parent`")),
        }
    }
    Ok(set)
}

/// Ground-truth lowest common hypernyms, keyed by unordered word pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LchTable {
    map: HashMap<(String, String), BTreeSet<String>>,
}

impl LchTable {
    fn key(a: &str, b: &str) -> (String, String) {
        if a <= b {
            (a.to_owned(), b.to_owned())
        } else {
            (b.to_owned(), a.to_owned())
        }
    }

    pub fn insert(&mut self, a: &str, b: &str, labels: BTreeSet<String>) {
        self.map.entry(Self::key(a, b)).or_default().extend(labels);
    }

    /// `None` when the pair is absent; `(a, b)` and `(b, a)` are the same pair.
    pub fn get(&self, a: &str, b: &str) -> Option<&BTreeSet<String>> {
        self.map.get(&Self::key(a, b))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Loads `w1<TAB>w2<TAB>l1,l2,...`; an empty or missing third field is an
/// empty set.
pub fn load_lch(path: impl AsRef<Path>) -> Result<LchTable> {
    let path = path.as_ref();
    let mut table = LchTable::default();
    for item in lines(path)? {
        let (no, line) = item?;
        let Some(fields) = tsv_fields(&line) else { continue };
        let (a, b, rest) = match fields.as_slice() {
            [a, b] => (*a, *b, ""),
            [a, b, rest] => (*a, *b, *rest),
            _ => return Err(malformed(path, no, "expected `w1<TAB>w2<TAB>labels`")),
        };
        if a.is_empty() || b.is_empty() {
            return Err(malformed(path, no, "empty word"));
        }
        let labels = rest
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_owned)
            .collect();
        table.insert(a, b, labels);
    }
    Ok(table)
}

/// Loads `label<TAB>power` lines and aligns them with the embedding rows.
pub fn load_power_file(path: impl AsRef<Path>, e: &EmbeddingSet) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let mut raw: Vec<Option<f64>> = vec![None; e.len()];
    for item in lines(path)? {
        let (no, line) = item?;
        let Some(fields) = tsv_fields(&line) else { continue };
        let [label, value] = fields.as_slice() else {
            return Err(malformed(path, no, "expected `label<TAB>power`"));
        };
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| malformed(path, no, format!("cannot parse `{value}` as a number")))?;
        if let Some(i) = e.index_of(label) {
            raw[i] = Some(v);
        }
    }
    raw.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::UnknownLabel(e.label(i).to_owned())))
        .collect()
}

/// One label per line, most frequent first.
pub fn load_rank_file(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for item in lines(path.as_ref())? {
        let (_, line) = item?;
        let label = line.trim();
        if !label.is_empty() && !label.starts_with('#') {
            out.push(label.to_owned());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TreeFormat {
    #[default]
    Json,
    Dot,
    Tsv,
}

impl TreeFormat {
    /// Guesses the format from a file extension, defaulting to JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("dot" | "gv") => TreeFormat::Dot,
            Some("tsv" | "txt") => TreeFormat::Tsv,
            _ => TreeFormat::Json,
        }
    }
}

impl FromStr for TreeFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(TreeFormat::Json),
            "dot" => Ok(TreeFormat::Dot),
            "tsv" => Ok(TreeFormat::Tsv),
            other => Err(Error::InvalidParameter(format!("unknown tree format `{other}`"))),
        }
    }
}

impl fmt::Display for TreeFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TreeFormat::Json => "json",
            TreeFormat::Dot => "dot",
            TreeFormat::Tsv => "tsv",
        })
    }
}

/// A tree together with the entity labels (and optionally powers) it was
/// built from.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTree {
    pub labels: Vec<String>,
    pub tree: Arborescence,
    pub powers: Option<Vec<f64>>,
    /// Free-form build settings, written verbatim into JSON exports.
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl LabeledTree {
    pub fn new(labels: Vec<String>, tree: Arborescence) -> Result<Self> {
        if labels.len() != tree.n_entities() {
            return Err(Error::SizeMismatch {
                what: "labels",
                expected: tree.n_entities(),
                found: labels.len(),
            });
        }
        Ok(LabeledTree {
            labels,
            tree,
            powers: None,
            metadata: BTreeMap::new(),
        })
    }

    pub fn node_label(&self, node: usize) -> &str {
        if node == ROOT {
            ROOT_LABEL
        } else {
            &self.labels[node - 1]
        }
    }

    /// Child → parent label map over entities (root edges included).
    pub fn parent_labels(&self) -> BTreeMap<&str, &str> {
        (1..self.tree.n_nodes())
            .map(|n| (self.node_label(n), self.node_label(self.tree.parent(n).unwrap())))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct JsonNode {
    label: String,
    parent: Option<String>,
    edge_length: f64,
    insertion_rank: usize,
    level: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    power: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct JsonTree {
    #[serde(default)]
    metadata: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    root_vector: Vec<f64>,
    nodes: Vec<JsonNode>,
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Writes the tree; nodes appear in node-id order, root first.
pub fn write_tree(t: &LabeledTree, mut out: impl Write, format: TreeFormat) -> Result<()> {
    let tree = &t.tree;
    let wrap = |e: std::io::Error| Error::io("<tree output>", e);
    match format {
        TreeFormat::Json => {
            let nodes = (0..tree.n_nodes())
                .map(|n| JsonNode {
                    label: t.node_label(n).to_owned(),
                    parent: tree.parent(n).map(|p| t.node_label(p).to_owned()),
                    edge_length: tree.edge_length(n),
                    insertion_rank: tree.insertion_rank(n),
                    level: tree.level(n),
                    power: match (&t.powers, n) {
                        (Some(p), n) if n > 0 => Some(p[n - 1]),
                        _ => None,
                    },
                })
                .collect();
            let doc = JsonTree {
                metadata: t.metadata.clone(),
                root_vector: tree.root_vector().to_vec(),
                nodes,
            };
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out).map_err(wrap)?;
        }
        TreeFormat::Dot => {
            writeln!(out, "digraph arborescence {{").map_err(wrap)?;
            for n in 1..tree.n_nodes() {
                let p = tree.parent(n).unwrap();
                writeln!(
                    out,
                    "  {} -> {} [length={}];",
                    dot_quote(t.node_label(n)),
                    dot_quote(t.node_label(p)),
                    tree.edge_length(n)
                )
                .map_err(wrap)?;
            }
            writeln!(out, "}}").map_err(wrap)?;
        }
        TreeFormat::Tsv => {
            let mut nodes: Vec<usize> = (1..tree.n_nodes()).collect();
            nodes.sort_by_key(|&n| tree.insertion_rank(n));
            for n in nodes {
                let p = tree.parent(n).unwrap();
                writeln!(out, "{}\t{}\t{}", t.node_label(n), t.node_label(p), tree.edge_length(n))
                    .map_err(wrap)?;
            }
        }
    }
    Ok(())
}

pub fn export_tree(t: &LabeledTree, path: impl AsRef<Path>, format: TreeFormat) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    write_tree(t, &mut w, format)?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reassembles a tree from `(label, parent label, edge length, rank)` rows.
fn assemble(
    path: &Path,
    rows: Vec<(String, String, f64, usize)>,
    root_vector: Vec<f64>,
) -> Result<(Vec<String>, Arborescence)> {
    let mut id: HashMap<&str, usize> = HashMap::new();
    for (i, (label, ..)) in rows.iter().enumerate() {
        if label == ROOT_LABEL {
            return Err(Error::ReservedLabel(label.clone()));
        }
        if id.insert(label, i + 1).is_some() {
            return Err(Error::DuplicateLabel(label.clone()));
        }
    }
    let total = rows.len() + 1;
    let mut parent = vec![None; total];
    let mut edge = vec![0.0; total];
    let mut rank = vec![0; total];
    for (i, (_, p, len, r)) in rows.iter().enumerate() {
        let pid = if p == ROOT_LABEL {
            ROOT
        } else {
            *id.get(p.as_str()).ok_or_else(|| Error::UnknownLabel(p.clone()))?
        };
        parent[i + 1] = Some(pid);
        edge[i + 1] = *len;
        rank[i + 1] = *r;
    }
    let tree = Arborescence::from_parts(parent, edge, rank, root_vector).map_err(|e| Error::Malformed {
        path: path.to_path_buf(),
        line: 0,
        msg: e.to_string(),
    })?;
    Ok((rows.into_iter().map(|r| r.0).collect(), tree))
}

/// Reads a JSON or TSV tree. A TSV file lists nodes in insertion order, so
/// line order becomes the insertion rank.
pub fn load_tree(path: impl AsRef<Path>) -> Result<LabeledTree> {
    let path = path.as_ref();
    match TreeFormat::from_path(path) {
        TreeFormat::Json => {
            let doc: JsonTree = serde_json::from_reader(open(path)?)?;
            let mut rows = Vec::with_capacity(doc.nodes.len());
            let mut powers = Vec::new();
            let mut saw_root = false;
            for node in doc.nodes {
                match node.parent {
                    None if node.label == ROOT_LABEL && !saw_root => saw_root = true,
                    None => return Err(malformed(path, 0, format!("`{}` has no parent", node.label))),
                    Some(p) => {
                        powers.extend(node.power);
                        rows.push((node.label, p, node.edge_length, node.insertion_rank));
                    }
                }
            }
            if !saw_root {
                return Err(malformed(path, 0, "missing root node"));
            }
            let n = rows.len();
            let (labels, tree) = assemble(path, rows, doc.root_vector)?;
            Ok(LabeledTree {
                labels,
                tree,
                powers: (powers.len() == n && n > 0).then_some(powers),
                metadata: doc.metadata,
            })
        }
        TreeFormat::Tsv => {
            let mut rows = Vec::new();
            for item in lines(path)? {
                let (no, line) = item?;
                let Some(fields) = tsv_fields(&line) else { continue };
                let [c, p, len] = fields.as_slice() else {
                    return Err(malformed(path, no, "expected `child<TAB>parent<TAB>length`"));
                };
                let len: f64 = len
                    .parse()
                    .map_err(|_| malformed(path, no, format!("cannot parse `{len}` as a number")))?;
                let rank = rows.len() + 1;
                rows.push((c.to_string(), p.to_string(), len, rank));
            }
            let (labels, tree) = assemble(path, rows, Vec::new())?;
            LabeledTree::new(labels, tree)
        }
        TreeFormat::Dot => Err(Error::InvalidParameter(
            "dot exports are write-only; load a json or tsv tree".into(),
        )),
    }
}

/// Writes serializable rows as CSV with a header line.
pub fn write_csv<T: Serialize>(path: impl AsRef<Path>, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(create(path)?);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Ensures a directory exists.
pub fn ensure_dir(path: impl AsRef<Path>) -> Result<PathBuf> {
    let path = path.as_ref();
    std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))?;
    Ok(path.to_path_buf())
}
