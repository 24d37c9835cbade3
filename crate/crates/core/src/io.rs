//! graph6 and edge-list formats.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Graph6,
    EdgeList,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

fn err(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError { offset, message: message.into() }
}

pub fn parse_graph(bytes: &[u8], format: Format) -> Result<Graph, ParseError> {
    match format {
        Format::Graph6 => parse_graph6(bytes),
        Format::EdgeList => parse_edge_list(bytes),
    }
}

/// Emits the graph after compacting its ids to `0..order`.
pub fn emit_graph(g: &Graph, format: Format) -> Vec<u8> {
    let (g, _) = g.compacted();
    match format {
        Format::Graph6 => emit_graph6(&g).into_bytes(),
        Format::EdgeList => emit_edge_list(&g).into_bytes(),
    }
}

const HEADER: &[u8] = b">>graph6<<";

pub fn parse_graph6(bytes: &[u8]) -> Result<Graph, ParseError> {
    let mut start = if bytes.starts_with(HEADER) { HEADER.len() } else { 0 };
    let mut end = bytes.len();
    while end > start && bytes[end - 1].is_ascii_whitespace() {
        end -= 1;
    }
    let data = |i: usize| -> Result<u32, ParseError> {
        match bytes.get(i) {
            Some(&b) if i < end && (63..=126).contains(&b) => Ok(u32::from(b - 63)),
            Some(_) if i < end => Err(err(i, format!("byte {:#04x} outside the graph6 range", bytes[i]))),
            _ => Err(err(i, "unexpected end of input")),
        }
    };
    let n = if data(start)? < 63 {
        start += 1;
        data(start - 1)? as usize
    } else if data(start + 1)? < 63 {
        let v = (data(start + 1)? << 12) | (data(start + 2)? << 6) | data(start + 3)?;
        start += 4;
        v as usize
    } else {
        let mut v: u64 = 0;
        for k in 2..8 {
            v = (v << 6) | u64::from(data(start + k)?);
        }
        start += 8;
        v as usize
    };
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    if end - start != need {
        return Err(err(start + need.min(end - start), format!("expected {need} data bytes, found {}", end - start)));
    }
    let mut g = Graph::new(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data(start + k / 6)?;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j).expect("ids below n");
            }
            k += 1;
        }
    }
    Ok(g)
}

pub fn emit_graph6(g: &Graph) -> String {
    let n = g.id_bound();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            k += 1;
            if k == 6 {
                out.push(acc + 63);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        out.push((acc << (6 - k)) + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ascii")
}

/// Whitespace-separated pairs, one edge per line. A `# vertices N` line fixes
/// the vertex count; other `#` lines are comments.
pub fn parse_edge_list(bytes: &[u8]) -> Result<Graph, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| err(e.valid_up_to(), "invalid utf-8"))?;
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix('#') {
            let mut words = rest.split_whitespace();
            if words.next() == Some("vertices") {
                let w = words.next().ok_or_else(|| err(offset, "missing vertex count"))?;
                declared = Some(w.parse().map_err(|_| err(offset, format!("bad vertex count {w:?}")))?);
            }
        } else if !trimmed.is_empty() {
            let mut nums = Vec::new();
            let mut col = 0;
            for tok in line.split_whitespace() {
                let at = offset + line[col..].find(tok).map_or(0, |p| p + col);
                col = at - offset + tok.len();
                nums.push(tok.parse::<usize>().map_err(|_| err(at, format!("bad vertex id {tok:?}")))?);
            }
            if nums.len() != 2 {
                return Err(err(offset, format!("expected two ids, found {}", nums.len())));
            }
            if nums[0] == nums[1] {
                return Err(err(offset, format!("self-loop at {}", nums[0])));
            }
            edges.push((nums[0], nums[1], offset));
        }
        offset += line.len();
    }
    let max_id = edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0);
    let n = declared.unwrap_or(max_id);
    let mut g = Graph::new(n);
    for (u, v, at) in edges {
        if u.max(v) >= n {
            return Err(err(at, format!("vertex id {} exceeds declared count {n}", u.max(v))));
        }
        g.add_edge(u, v).expect("checked ids");
    }
    Ok(g)
}

pub fn emit_edge_list(g: &Graph) -> String {
    let mut out = format!("# vertices {}\n", g.id_bound());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph6_examples() {
        assert_eq!(parse_graph6(b"C~").unwrap(), Graph::complete(4));
        assert_eq!(emit_graph6(&Graph::complete(4)), "C~");
        let e3 = parse_graph6(b"B?\n").unwrap();
        assert_eq!((e3.order(), e3.size()), (3, 0));
        assert_eq!(emit_graph6(&Graph::new(3)), "B?");
        assert_eq!(parse_graph6(b">>graph6<<C~").unwrap(), Graph::complete(4));
    }

    #[test]
    fn graph6_errors_carry_offsets() {
        assert_eq!(parse_graph6(b"C~~").unwrap_err().offset, 2);
        assert_eq!(parse_graph6(b"C").unwrap_err().offset, 1);
        assert_eq!(parse_graph6(b"C\x01").unwrap_err().offset, 1);
    }

    #[test]
    fn large_graph6_header() {
        let g = Graph::cycle(70);
        let s = emit_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(s.as_bytes()).unwrap(), g);
    }

    #[test]
    fn edge_list_examples() {
        assert_eq!(parse_edge_list(b"0 1\n1 2").unwrap(), Graph::path(3));
        let e = parse_edge_list(b"0 1\n1 x\n").unwrap_err();
        assert_eq!(e.offset, 6);
        let g = parse_edge_list(b"# vertices 5\n0 1\n").unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(emit_edge_list(&Graph::path(3)), "# vertices 3\n0 1\n1 2\n");
    }
}
