use super::Graph;
use crate::error::ParseError;

/// Parses the plain edge-list format:
///
/// ```text
/// # comment
/// n 4
/// 0 1
/// 1 2   # trailing comments are fine
/// ```
///
/// Duplicate edges (in either orientation) collapse.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let malformed = || ParseError::MalformedLine {
            line: line_no,
            text: raw.to_string(),
        };
        match graph.as_mut() {
            None => {
                if fields.len() != 2 || fields[0] != "n" {
                    return Err(ParseError::MissingHeader { line: line_no });
                }
                let n: usize = fields[1].parse().map_err(|_| malformed())?;
                graph = Some(Graph::empty(n));
            }
            Some(g) => {
                if fields.len() != 2 {
                    return Err(malformed());
                }
                let u: usize = fields[0].parse().map_err(|_| malformed())?;
                let v: usize = fields[1].parse().map_err(|_| malformed())?;
                for vertex in [u, v] {
                    if vertex >= g.n() {
                        return Err(ParseError::VertexOutOfRange {
                            line: line_no,
                            vertex,
                            n: g.n(),
                        });
                    }
                }
                if u == v {
                    return Err(ParseError::SelfLoop {
                        line: line_no,
                        vertex: u,
                    });
                }
                g.add_edge(u, v);
            }
        }
    }
    let mut g = graph.ok_or(ParseError::MissingHeader {
        line: text.lines().count() + 1,
    })?;
    g.finish();
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
