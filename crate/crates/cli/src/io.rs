use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use quietlift_core::harness::{builtin, parse_matrix_text};
use quietlift_core::{GraphJson, LiftedGraph, Multigraph, SimpleGraph};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A graph file as read from disk. Lift files carry the base and fiber map.
#[derive(Debug, Serialize, Deserialize)]
pub struct LiftFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub base: GraphJson,
    pub m: usize,
    pub sigma: Vec<usize>,
}

impl LiftFile {
    pub fn from_lift(l: &LiftedGraph) -> Self {
        LiftFile {
            n: l.n(),
            edges: l.graph.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            base: GraphJson::from(&l.base),
            m: l.m,
            sigma: l.sigma.clone(),
        }
    }

    pub fn into_lift(self) -> Result<LiftedGraph> {
        let e: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let lift = LiftedGraph {
            graph: SimpleGraph::from_edges(self.n, &e)?,
            base: self.base.into_multigraph()?,
            sigma: self.sigma,
            m: self.m,
        };
        if !lift.check_invariants() {
            bail!("lift file violates the fiber invariants");
        }
        Ok(lift)
    }
}

pub enum Loaded {
    Simple(SimpleGraph),
    Multi(Multigraph),
}

impl Loaded {
    pub fn multigraph(&self) -> Multigraph {
        match self {
            Loaded::Simple(g) => Multigraph::from_simple(g),
            Loaded::Multi(h) => h.clone(),
        }
    }

    pub fn simple(&self) -> Result<SimpleGraph> {
        Ok(match self {
            Loaded::Simple(g) => g.clone(),
            Loaded::Multi(h) => SimpleGraph::from_multigraph(h)?,
        })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// JSON graph (edge list or multiplicity matrix) or the matrix text format.
pub fn load_graph(path: &Path) -> Result<Loaded> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        let g: GraphJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(match g {
            GraphJson::Simple { .. } => Loaded::Simple(g.into_simple()?),
            GraphJson::Multi { .. } => Loaded::Multi(g.into_multigraph()?),
        });
    }
    let h = parse_matrix_text(&text)?;
    Ok(match SimpleGraph::from_multigraph(&h) {
        Ok(g) => Loaded::Simple(g),
        Err(_) => Loaded::Multi(h),
    })
}

pub fn load_lift(path: &Path) -> Result<LiftedGraph> {
    let text = read(path)?;
    let f: LiftFile = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a lift file (needs n, edges, base, m, sigma)", path.display()))?;
    f.into_lift()
}

/// `--builtin NAME` or `--graph FILE`.
#[derive(Debug, clap::Args)]
pub struct GraphSource {
    /// Graph file: JSON or matrix text.
    #[arg(long, conflicts_with = "builtin")]
    pub graph: Option<PathBuf>,
    /// Built-in graph name (fig1_d3, complete_3, hkd(3,4), necklace(10), ...).
    #[arg(long)]
    pub builtin: Option<String>,
}

impl GraphSource {
    pub fn load(&self) -> Result<Loaded> {
        match (&self.graph, &self.builtin) {
            (Some(p), _) => load_graph(p),
            (None, Some(name)) => Ok(Loaded::Multi(builtin(name)?)),
            (None, None) => Err(quietlift_core::Error::InvalidParameter("one of --graph or --builtin is required".into()).into()),
        }
    }
}

pub fn edge_csv(g: &SimpleGraph) -> String {
    let mut s = String::from("u,v\n");
    for (u, v) in g.edges() {
        writeln!(s, "{u},{v}").unwrap();
    }
    s
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push((prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join(";")));
        }
        Value::Array(items) => items.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// Arrays of objects become a table; anything else becomes `key,value` rows.
pub fn to_csv(v: &Value) -> String {
    let mut s = String::new();
    if let Value::Array(rows) = v {
        if rows.iter().all(Value::is_object) && !rows.is_empty() {
            let flat: Vec<Vec<(String, String)>> = rows
                .iter()
                .map(|r| {
                    let mut f = Vec::new();
                    flatten("", r, &mut f);
                    f
                })
                .collect();
            let header: Vec<&str> = flat[0].iter().map(|(k, _)| k.as_str()).collect();
            writeln!(s, "{}", header.join(",")).unwrap();
            for row in &flat {
                writeln!(s, "{}", row.iter().map(|(_, x)| quote(x)).collect::<Vec<_>>().join(",")).unwrap();
            }
            return s;
        }
    }
    let mut flat = Vec::new();
    flatten("", v, &mut flat);
    s.push_str("key,value\n");
    for (k, x) in flat {
        writeln!(s, "{},{}", quote(&k), quote(&x)).unwrap();
    }
    s
}

/// What a command produced and whether its checks passed.
pub struct Output {
    pub json: Value,
    /// Preferred CSV rendering; the generic flattening is used otherwise.
    pub csv: Option<String>,
    pub pass: bool,
}

impl Output {
    pub fn new(json: impl Serialize) -> Result<Self> {
        Ok(Output { json: serde_json::to_value(json)?, csv: None, pass: true })
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Json => serde_json::to_string_pretty(&self.json)? + "\n",
            Format::Csv => self.csv.clone().unwrap_or_else(|| to_csv(&self.json)),
        })
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
