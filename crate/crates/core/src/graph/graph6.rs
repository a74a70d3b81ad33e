//! graph6 encoding as published with nauty: a length field followed by the
//! upper triangle of the adjacency matrix, column by column, packed into
//! 6-bit groups offset by 63.

use super::Graph;
use crate::error::ParseError;

const HEADER: &[u8] = b">>graph6<<";
const BIAS: u8 = 63;
const LONG: u8 = 126;

fn sextet(bytes: &[u8], offset: usize) -> Result<u8, ParseError> {
    match bytes.get(offset) {
        Some(&b) if (BIAS..=LONG).contains(&b) => Ok(b - BIAS),
        Some(&b) => Err(ParseError::ByteOutOfRange { offset, byte: b }),
        None => Err(ParseError::MalformedLength { offset }),
    }
}

fn read_length(bytes: &[u8]) -> Result<(usize, usize), ParseError> {
    let first = *bytes.first().ok_or(ParseError::Empty)?;
    if first != LONG {
        return Ok((sextet(bytes, 0)? as usize, 1));
    }
    let (start, groups, min) = if bytes.get(1) == Some(&LONG) {
        (2, 6, 258_048usize)
    } else {
        (1, 3, 63usize)
    };
    let mut n = 0usize;
    for i in 0..groups {
        let v = sextet(bytes, start + i)?;
        n = (n << 6) | v as usize;
    }
    // Only the shortest length form is canonical.
    if n < min {
        return Err(ParseError::MalformedLength { offset: 0 });
    }
    Ok((n, start + groups))
}

/// Parses one graph6 line. A leading `>>graph6<<` header and a single
/// trailing newline are accepted.
pub fn parse_graph6(text: &[u8]) -> Result<Graph, ParseError> {
    let mut bytes = text.strip_prefix(HEADER).unwrap_or(text);
    let base = text.len() - bytes.len();
    if let Some(rest) = bytes.strip_suffix(b"\n") {
        bytes = rest.strip_suffix(b"\r").unwrap_or(rest);
    }
    let (n, mut pos) = read_length(bytes).map_err(|e| shift(e, base))?;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if bytes.len() < pos + expected {
        return Err(ParseError::Truncated {
            offset: base + pos,
            expected,
        });
    }
    let mut g = Graph::empty(n);
    let (mut i, mut j) = (0usize, 1usize);
    let mut seen = 0usize;
    for _ in 0..expected {
        let v = sextet(bytes, pos).map_err(|e| shift(e, base))?;
        for shift_by in (0..6).rev() {
            let bit = (v >> shift_by) & 1 == 1;
            if seen < bits {
                if bit {
                    g.add_edge(i, j);
                }
                i += 1;
                if i == j {
                    i = 0;
                    j += 1;
                }
                seen += 1;
            } else if bit {
                return Err(ParseError::NonZeroPadding { offset: base + pos });
            }
        }
        pos += 1;
    }
    if pos != bytes.len() {
        return Err(ParseError::TrailingGarbage { offset: base + pos });
    }
    g.finish();
    Ok(g)
}

fn shift(e: ParseError, base: usize) -> ParseError {
    match e {
        ParseError::ByteOutOfRange { offset, byte } => ParseError::ByteOutOfRange {
            offset: offset + base,
            byte,
        },
        ParseError::MalformedLength { offset } => ParseError::MalformedLength {
            offset: offset + base,
        },
        other => other,
    }
}

/// Canonical graph6 encoding, without header or newline.
pub fn serialize_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
        out.push(n as u8 + BIAS);
    } else if n < 258_048 {
        out.push(LONG);
        for s in (0..3).rev() {
            out.push(((n >> (6 * s)) & 63) as u8 + BIAS);
        }
    } else {
        out.push(LONG);
        out.push(LONG);
        for s in (0..6).rev() {
            out.push(((n >> (6 * s)) & 63) as u8 + BIAS);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.is_adjacent(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + BIAS);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + BIAS);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{named_graph, random_connected};
    use proptest::prelude::*;

    #[test]
    fn star_decodes() {
        // Hand decode: '?' = 000000 and '{' = 111100, so the bits for
        // (0,4), (1,4), (2,4), (3,4) are set. networkx agrees.
        let g = parse_graph6(b"D?{").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edges(), vec![(0, 4), (1, 4), (2, 4), (3, 4)]);
    }

    #[test]
    fn smallest_encodings() {
        let g = parse_graph6(b"@").unwrap();
        assert_eq!((g.n(), g.edge_count()), (1, 0));
        let k2 = parse_graph6(b"A_").unwrap();
        assert_eq!(k2.edges(), vec![(0, 1)]);
        assert_eq!(parse_graph6(b"?").unwrap().n(), 0);
    }

    #[test]
    fn header_and_newline_accepted() {
        let g = parse_graph6(b">>graph6<<A_\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn known_encodings() {
        // Reference strings produced by networkx.
        assert_eq!(serialize_graph6(&named_graph("cycle:5").unwrap()), "Dhc");
        let petersen = parse_graph6(b"IheA@GUAo").unwrap();
        assert_eq!(petersen.n(), 10);
        assert_eq!(petersen.edge_count(), 15);
        assert!((0..10).all(|v| petersen.degree(v) == 3));
        let k63 = named_graph("complete:63").unwrap();
        assert!(serialize_graph6(&k63).starts_with("~??~~~~~~~"));
        assert_eq!(parse_graph6(serialize_graph6(&k63).as_bytes()).unwrap(), k63);
    }

    #[test]
    fn errors_name_offsets() {
        assert_eq!(parse_graph6(b""), Err(ParseError::Empty));
        assert_eq!(
            parse_graph6(b"A\x20"),
            Err(ParseError::ByteOutOfRange { offset: 1, byte: 0x20 })
        );
        assert_eq!(
            parse_graph6(b"A_?"),
            Err(ParseError::TrailingGarbage { offset: 2 })
        );
        assert_eq!(
            parse_graph6(b"D?"),
            Err(ParseError::Truncated { offset: 1, expected: 2 })
        );
        assert_eq!(
            parse_graph6(b"A`"),
            Err(ParseError::NonZeroPadding { offset: 1 })
        );
        assert_eq!(
            parse_graph6(b"~??"),
            Err(ParseError::MalformedLength { offset: 3 })
        );
        // 126 followed by a short length is not canonical.
        assert_eq!(
            parse_graph6(b"~???"),
            Err(ParseError::MalformedLength { offset: 0 })
        );
    }

    proptest! {
        #[test]
        fn roundtrip_random(n in 0usize..=20, seed in any::<u64>(), p in 0.0f64..1.0) {
            use rand::{RngExt, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let text = serialize_graph6(&g);
            let back = parse_graph6(text.as_bytes()).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(serialize_graph6(&back), text);
        }

        #[test]
        fn roundtrip_connected(n in 1usize..=20, seed in any::<u64>()) {
            let g = random_connected(n, seed);
            prop_assert_eq!(parse_graph6(serialize_graph6(&g).as_bytes()).unwrap(), g);
        }
    }
}
