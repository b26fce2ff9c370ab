use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use log::warn;

use super::Graph;
use crate::error::GraphError;

fn parse_num(tok: Option<&str>, line: usize, what: &str) -> Result<u64, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| GraphError::Parse {
        line,
        msg: format!("invalid {what} `{tok}`"),
    })
}

fn parse_weight(tok: Option<&str>, line: usize) -> Result<u32, GraphError> {
    let w = parse_num(tok, line, "weight")?;
    u32::try_from(w).map_err(|_| GraphError::Parse {
        line,
        msg: format!("weight {w} exceeds 32 bits"),
    })
}

/// Reads a whitespace-separated edge list (`u v` or `u v w` per line).
///
/// Lines starting with `#` are comments. Vertex ids are arbitrary
/// non-negative integers, renumbered to `0..n` in order of first appearance.
/// Either every edge carries a weight or none does.
pub fn load_edge_list<R: Read>(source: R) -> Result<Graph, GraphError> {
    let reader = BufReader::new(source);
    let mut ids: HashMap<u64, u32> = HashMap::new();
    let mut edges = Vec::new();
    let mut weights: Option<Vec<u32>> = None;
    let intern = |raw: u64, ids: &mut HashMap<u64, u32>| -> Result<u32, GraphError> {
        let next = ids.len() as u64;
        if next >= u32::MAX as u64 {
            return Err(GraphError::TooManyVertices(next + 1));
        }
        Ok(*ids.entry(raw).or_insert(next as u32))
    };
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut toks = text.split_whitespace();
        let u = parse_num(toks.next(), lineno, "source vertex")?;
        let v = parse_num(toks.next(), lineno, "target vertex")?;
        let w = toks.next();
        if let Some(extra) = toks.next() {
            return Err(GraphError::Parse {
                line: lineno,
                msg: format!("unexpected trailing field `{extra}`"),
            });
        }
        match (w, &mut weights) {
            (Some(tok), Some(ws)) => ws.push(parse_weight(Some(tok), lineno)?),
            (Some(tok), None) if edges.is_empty() => {
                weights = Some(vec![parse_weight(Some(tok), lineno)?])
            }
            (None, None) => {}
            _ => {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: "weighted and unweighted edges are mixed".into(),
                })
            }
        }
        let u = intern(u, &mut ids)?;
        let v = intern(v, &mut ids)?;
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(GraphError::EmptyInput);
    }
    Graph::new("edge-list", ids.len(), edges, weights)
}

/// Reads a DIMACS shortest-path graph (`p sp n m` header, `a u v w` arcs,
/// `c` comments, 1-based vertices). Arcs are kept as given.
pub fn load_dimacs<R: Read>(source: R) -> Result<Graph, GraphError> {
    let reader = BufReader::new(source);
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let mut toks = line.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(GraphError::Parse {
                        line: lineno,
                        msg: "duplicate problem line".into(),
                    });
                }
                match toks.next() {
                    Some("sp") => {}
                    other => {
                        return Err(GraphError::Parse {
                            line: lineno,
                            msg: format!("expected problem type `sp`, found {other:?}"),
                        })
                    }
                }
                let n = parse_num(toks.next(), lineno, "vertex count")?;
                let m = parse_num(toks.next(), lineno, "arc count")?;
                if n > u32::MAX as u64 {
                    return Err(GraphError::TooManyVertices(n));
                }
                header = Some((n as usize, m as usize));
                edges.reserve(m as usize);
                weights.reserve(m as usize);
            }
            Some("a") => {
                let (n, _) = header.ok_or(GraphError::MissingHeader)?;
                let mut vertex = |what| -> Result<u32, GraphError> {
                    let x = parse_num(toks.next(), lineno, what)?;
                    if x == 0 || x > n as u64 {
                        return Err(GraphError::VertexOutOfRange {
                            line: lineno,
                            vertex: x,
                            n,
                        });
                    }
                    Ok((x - 1) as u32)
                };
                let u = vertex("arc tail")?;
                let v = vertex("arc head")?;
                let w = parse_weight(toks.next(), lineno)?;
                edges.push((u, v));
                weights.push(w);
            }
            Some(other) => {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: format!("unknown line type `{other}`"),
                })
            }
        }
    }
    let (n, m) = header.ok_or(GraphError::MissingHeader)?;
    if m != edges.len() {
        warn!(
            "DIMACS header declares {m} arcs but {} were read",
            edges.len()
        );
    }
    Graph::new("dimacs", n, edges, Some(weights))
}

fn open_maybe_gz(path: &Path) -> Result<Box<dyn Read>, GraphError> {
    let file = File::open(path)?;
    if path.extension().is_some_and(|e| e == "gz") {
        Ok(Box::new(GzDecoder::new(file)))
    } else {
        Ok(Box::new(file))
    }
}

fn is_dimacs(path: &Path) -> bool {
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("");
    name.ends_with(".gr") || name.ends_with(".gr.gz")
}

/// Loads a graph from disk: `.gr` files as DIMACS, anything else as an edge
/// list; a trailing `.gz` is decompressed on the fly.
pub fn load_path(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    let path = path.as_ref();
    let source = open_maybe_gz(path)?;
    let g = if is_dimacs(path) {
        load_dimacs(source)?
    } else {
        load_edge_list(source)?
    };
    let name = path
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("graph")
        .to_string();
    Ok(g.with_name(name))
}

/// Writes `g` as an edge list readable by [`load_edge_list`].
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# {} n={} m={}", g.name(), g.n(), g.m())?;
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        match g.weight(i) {
            Some(w) => writeln!(out, "{u} {v} {w}")?,
            None => writeln!(out, "{u} {v}")?,
        }
    }
    out.flush()
}

/// Writes an edge list to `path`, gzip-compressed when it ends in `.gz`.
pub fn write_path(g: &Graph, path: impl AsRef<Path>) -> std::io::Result<()> {
    let path = path.as_ref();
    let file = BufWriter::new(File::create(path)?);
    if path.extension().is_some_and(|e| e == "gz") {
        let mut enc = GzEncoder::new(file, flate2::Compression::default());
        write_edge_list(g, &mut enc)?;
        enc.finish()?.flush()
    } else {
        write_edge_list(g, file)
    }
}
