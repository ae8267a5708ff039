//! Text codecs: graph6 (McKay's format) and a human-writable edge list.
//!
//! graph6 packs the upper triangle of the adjacency matrix column by column
//! into 6-bit groups offset by 63. The single-byte size form covers
//! `n <= 62`; larger graphs (up to our 64-vertex cap) use the standard
//! `'~'`-prefixed 3-byte size form.
//!
//! The edge-list format is `"n; u-v u-v ..."` with 0-based indices.

use super::{Graph, MAX_VERTICES};
use crate::error::{Error, Result};

/// Serialises to graph6.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut bytes: Vec<u8> = Vec::new();
    if n <= 62 {
        bytes.push(63 + n as u8);
    } else {
        // 3-byte size form: '~' then n in 18 bits, big-endian 6-bit groups
        bytes.push(126);
        bytes.push(63 + ((n >> 12) & 0x3f) as u8);
        bytes.push(63 + ((n >> 6) & 0x3f) as u8);
        bytes.push(63 + (n & 0x3f) as u8);
    }
    let mut acc = 0u8;
    let mut filled = 0u8;
    for col in 1..n {
        for row in 0..col {
            acc = (acc << 1) | u8::from(g.has_edge(row, col));
            filled += 1;
            if filled == 6 {
                bytes.push(63 + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        acc <<= 6 - filled;
        bytes.push(63 + acc);
    }
    String::from_utf8(bytes).expect("graph6 bytes are printable ASCII")
}

/// Parses graph6 text.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.trim().as_bytes();
    if bytes.is_empty() {
        return Err(Error::Parse { offset: 0, message: "empty graph6 text".into() });
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(Error::Parse {
                offset: 1,
                message: "8-byte graph6 size form exceeds the 64-vertex cap".into(),
            });
        }
        if bytes.len() < 4 {
            return Err(Error::Parse {
                offset: bytes.len(),
                message: "truncated graph6 size field".into(),
            });
        }
        let mut n = 0usize;
        for (i, &b) in bytes[1..4].iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(Error::Parse {
                    offset: 1 + i,
                    message: format!("byte {b} outside the graph6 alphabet"),
                });
            }
            n = (n << 6) | (b - 63) as usize;
        }
        (n, 4)
    } else {
        if !(63..=126).contains(&bytes[0]) {
            return Err(Error::Parse {
                offset: 0,
                message: format!("byte {} outside the graph6 alphabet", bytes[0]),
            });
        }
        ((bytes[0] - 63) as usize, 1)
    };
    if n == 0 {
        return Err(Error::Parse { offset: 0, message: "graph6 text encodes zero vertices".into() });
    }
    if n > MAX_VERTICES {
        return Err(Error::Capacity(format!(
            "graph6 text encodes {n} vertices, cap is {MAX_VERTICES}"
        )));
    }
    let mut g = Graph::empty(n)?;
    let needed_bits = n * (n - 1) / 2;
    let needed_bytes = needed_bits.div_ceil(6);
    if bytes.len() - pos != needed_bytes {
        return Err(Error::Parse {
            offset: bytes.len().min(pos + needed_bytes),
            message: format!(
                "expected {needed_bytes} adjacency bytes for n = {n}, found {}",
                bytes.len() - pos
            ),
        });
    }
    let mut acc = 0u32;
    let mut avail = 0u8;
    for col in 1..n {
        for row in 0..col {
            if avail == 0 {
                let b = bytes[pos];
                if !(63..=126).contains(&b) {
                    return Err(Error::Parse {
                        offset: pos,
                        message: format!("byte {b} outside the graph6 alphabet"),
                    });
                }
                acc = (b - 63) as u32;
                avail = 6;
                pos += 1;
            }
            avail -= 1;
            if acc & (1 << avail) != 0 {
                g.add_edge(row, col)?;
            }
        }
    }
    // padding bits must be zero
    if avail > 0 && acc & ((1 << avail) - 1) != 0 {
        return Err(Error::Parse { offset: pos - 1, message: "nonzero padding bits".into() });
    }
    Ok(g)
}

/// Serialises to the `"n; u-v u-v ..."` edge-list form.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{};", g.vertex_count());
    for (u, v) in g.edges() {
        out.push_str(&format!(" {u}-{v}"));
    }
    out
}

/// Parses the edge-list form. Reports the byte offset of the first
/// malformed character.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let semi = text.find(';').ok_or_else(|| Error::Parse {
        offset: text.len(),
        message: "missing ';' after the vertex count".into(),
    })?;
    let head = &text[..semi];
    let n: usize = head.trim().parse().map_err(|_| Error::Parse {
        offset: 0,
        message: format!("bad vertex count '{}'", head.trim()),
    })?;
    if n > MAX_VERTICES {
        return Err(Error::Capacity(format!("{n} vertices exceeds the {MAX_VERTICES}-vertex cap")));
    }
    let mut g = Graph::empty(n)?;
    let body = &text[semi + 1..];
    let mut chars = body.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        // scan one token up to whitespace
        let mut end = start;
        while let Some(&(i, c)) = chars.peek() {
            if c.is_whitespace() {
                break;
            }
            end = i + c.len_utf8();
            chars.next();
        }
        let token = &body[start..end];
        let offset = semi + 1 + start;
        let (us, vs) = token.split_once('-').ok_or_else(|| Error::Parse {
            offset,
            message: format!("expected 'u-v', got '{token}'"),
        })?;
        let parse_vertex = |s: &str, off: usize| -> Result<usize> {
            s.parse::<usize>().map_err(|_| Error::Parse {
                offset: off,
                message: format!("bad vertex index '{s}'"),
            })
        };
        let u = parse_vertex(us, offset)?;
        let v = parse_vertex(vs, offset + us.len() + 1)?;
        if u >= n || v >= n || u == v {
            return Err(Error::Parse {
                offset,
                message: format!("edge {u}-{v} invalid for {n} vertices"),
            });
        }
        g.add_edge(u, v)?;
    }
    Ok(g)
}

/// Parses either accepted graph text form: edge lists contain `';'`,
/// which is not in the graph6 alphabet.
pub fn parse_graph_text(text: &str) -> Result<Graph> {
    if text.contains(';') {
        parse_edge_list(text)
    } else {
        parse_graph6(text)
    }
}
