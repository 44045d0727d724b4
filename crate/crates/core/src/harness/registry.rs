use crate::error::{Error, Result};
use crate::graph::Multigraph;

const FIGURES: [(&str, &str); 4] = [
    ("fig1_d3", include_str!("../../data/fig1_d3.txt")),
    ("fig2_d4", include_str!("../../data/fig2_d4.txt")),
    ("fig3_d4", include_str!("../../data/fig3_d4.txt")),
    ("fig4_d7", include_str!("../../data/fig4_d7.txt")),
];

pub const MAX_COMPLETE_DEGREE: usize = 16;

/// Names of the committed figure graphs.
pub fn figure_names() -> Vec<&'static str> {
    FIGURES.iter().map(|f| f.0).collect()
}

/// Raw data file of a figure graph, header included.
pub fn figure_source(name: &str) -> Result<&'static str> {
    FIGURES
        .iter()
        .find(|f| f.0 == name)
        .map(|f| f.1)
        .ok_or_else(|| Error::UnknownGraph(name.to_string()))
}

/// The matrix block of a figure file (order line and rows, single spaces,
/// `\n` line ends), which is what the committed checksums cover.
pub fn canonical_block(name: &str) -> Result<String> {
    let src = figure_source(name)?;
    let mut out = String::new();
    for line in src.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        out.push_str(&line.split_whitespace().collect::<Vec<_>>().join(" "));
        out.push('\n');
    }
    Ok(out)
}

/// Parses the figure file format: `#` comment lines, the order `n`, then `n` rows.
pub fn parse_matrix_text(text: &str) -> Result<Multigraph> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::Parse("missing order line".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad order line: {e}")))?;
    let mut rows = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        let row: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| Error::Parse(format!("row {i}: {e}"))))
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Parse(format!("expected {n} rows, found {}", rows.len())));
    }
    Multigraph::new(rows)
}

/// `K_{d+1}`.
pub fn complete_d(d: usize) -> Result<Multigraph> {
    if d == 0 || d > MAX_COMPLETE_DEGREE {
        return Err(Error::InvalidParameter(format!("complete_d needs 1 <= d <= {MAX_COMPLETE_DEGREE}")));
    }
    Ok(Multigraph::complete(d + 1))
}

/// Complete multigraph on `k` vertices with every edge repeated `d/(k-1)` times.
pub fn hkd(k: usize, d: usize) -> Result<Multigraph> {
    if k < 2 || d % (k - 1) != 0 {
        return Err(Error::InvalidParameter(format!("hkd needs k >= 2 and (k-1) | d, got k={k}, d={d}")));
    }
    let b = (d / (k - 1)) as u32;
    Multigraph::new((0..k).map(|i| (0..k).map(|j| if i == j { 0 } else { b }).collect()).collect())
}

/// Ring of `r` diamonds (`K_4` minus an edge), each joined to the next at its
/// two degree-2 tips. Simple, 3-regular, `4r` vertices. For `r >= 4` its
/// second eigenvalue exceeds `2 sqrt 2`.
pub fn necklace(r: usize) -> Result<Multigraph> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("necklace needs r >= 2, got {r}")));
    }
    let n = 4 * r;
    let mut rows = vec![vec![0u32; n]; n];
    let mut join = |a: usize, b: usize| {
        rows[a][b] += 1;
        rows[b][a] += 1;
    };
    for i in 0..r {
        let (a, b, c, e) = (4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3);
        for (x, y) in [(a, b), (a, c), (b, c), (b, e), (c, e)] {
            join(x, y);
        }
        join(e, (4 * (i + 1)) % n);
    }
    Multigraph::new(rows)
}

/// Resolves a built-in name: a figure id, `complete_<d>`, `hkd(k,d)` or `necklace(r)`.
pub fn builtin(name: &str) -> Result<Multigraph> {
    if let Ok(src) = figure_source(name) {
        return parse_matrix_text(src);
    }
    let unknown = || Error::UnknownGraph(name.to_string());
    let args = |inner: &str| -> Result<Vec<usize>> {
        inner.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| unknown())).collect()
    };
    if let Some(d) = name.strip_prefix("complete_") {
        return complete_d(d.parse().map_err(|_| unknown())?);
    }
    if let Some(inner) = name.strip_prefix("hkd(").and_then(|s| s.strip_suffix(')')) {
        let a = args(inner)?;
        if a.len() == 2 {
            return hkd(a[0], a[1]);
        }
    }
    if let Some(inner) = name.strip_prefix("necklace(").and_then(|s| s.strip_suffix(')')) {
        let a = args(inner)?;
        if a.len() == 1 {
            return necklace(a[0]);
        }
    }
    Err(unknown())
}
