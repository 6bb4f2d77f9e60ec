//! The on-disk document format for schemes and candidates.
//!
//! A document lists `n`, the order `m`, optional metadata, and the `m + 1`
//! relations as 1-based triples. The text serializer is canonical: relations
//! in partition order with the trivial prefix first, triples sorted
//! lexicographically, one relation per line. Parsing accepts unsorted triple
//! lists (they are normalized when converting to a candidate), so serialize →
//! parse → serialize is byte-identical for every emitted document.

use serde::{Deserialize, Serialize};

use crate::axioms::ValencyVector;
use crate::candidate::AstCandidate;
use crate::error::{Error, Result};
use crate::relations::{trivial_relations, TernaryRelation, Triple};

/// Nonzero intersection-tensor cell: `(i, j, k, l, count)`.
pub type TensorCell = (u32, u32, u32, u32, u32);

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AstDocument {
    pub n: u32,
    pub order: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valencies: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<Vec<TensorCell>>,
    /// Relations `R0..=Rm` as 1-based triples.
    pub relations: Vec<Vec<[u32; 3]>>,
}

impl AstDocument {
    /// Renders a candidate in canonical form, with optional metadata.
    pub fn from_candidate(
        x: &AstCandidate,
        group: Option<String>,
        valencies: Option<&ValencyVector>,
    ) -> Self {
        let relations = x
            .relations()
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|t| {
                        let (a, b, c) = t.labels();
                        [a as u32, b as u32, c as u32]
                    })
                    .collect()
            })
            .collect();
        AstDocument {
            n: x.n() as u32,
            order: x.order() as u32,
            group,
            valencies: valencies.map(|v| v.counts().to_vec()),
            tensor: None,
            relations,
        }
    }

    /// Validates the document and converts it to a candidate partition.
    pub fn to_candidate(&self) -> Result<AstCandidate> {
        let n = self.n as usize;
        if self.relations.len() != self.order as usize + 1 {
            return Err(Error::InvalidPartition(format!(
                "order {} requires {} relations, document has {}",
                self.order,
                self.order + 1,
                self.relations.len()
            )));
        }
        let mut relations = Vec::with_capacity(self.relations.len());
        for body in &self.relations {
            let mut rel = TernaryRelation::empty(n);
            for &[a, b, c] in body {
                rel.insert(Triple::from_labels(a as usize, b as usize, c as usize, n)?);
            }
            if rel.len() != body.len() {
                return Err(Error::InvalidPartition(
                    "a relation lists the same triple twice".to_string(),
                ));
            }
            relations.push(rel);
        }
        let trivial = trivial_relations(n)?;
        for (i, want) in trivial.iter().enumerate() {
            if relations[i] != *want {
                return Err(Error::InvalidPartition(format!(
                    "relation R{i} is not the trivial relation R{i}"
                )));
            }
        }
        let candidate = AstCandidate::new(n, relations.split_off(4))?;
        Ok(candidate)
    }

    /// Canonical text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("n: {}\n", self.n));
        out.push_str(&format!("order: {}\n", self.order));
        if let Some(group) = &self.group {
            out.push_str(&format!("group: {group}\n"));
        }
        if let Some(valencies) = &self.valencies {
            let rendered: Vec<String> = valencies.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("valencies: {}\n", rendered.join(" ")));
        }
        if let Some(tensor) = &self.tensor {
            let rendered: Vec<String> = tensor
                .iter()
                .map(|(i, j, k, l, v)| format!("{i},{j},{k},{l}={v}"))
                .collect();
            out.push_str(&format!("tensor: {}\n", rendered.join(" ")));
        }
        for (i, rel) in self.relations.iter().enumerate() {
            out.push_str(&format!("R{i}:"));
            for [a, b, c] in rel {
                out.push_str(&format!(" ({a},{b},{c})"));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format, reporting the line and column of any error.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut parser = TextParser::new(text);
        parser.parse()
    }

    /// Compact single-line JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string(self).expect("document serialization is total");
        out.push('\n');
        out
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::DocumentParse {
            line: e.line(),
            col: e.column(),
            msg: e.to_string(),
        })
    }

    /// Parses either format, deciding by the leading character.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }
}

struct TextParser<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> TextParser<'a> {
    fn new(text: &'a str) -> Self {
        TextParser {
            lines: text.lines().enumerate(),
        }
    }

    fn parse(&mut self) -> Result<AstDocument> {
        let n = self.key_line("n")?.trim().parse::<u32>().map_err(|_| {
            err(1, 4, "n must be an integer")
        })?;
        let order = self
            .key_line("order")?
            .trim()
            .parse::<u32>()
            .map_err(|_| err(2, 8, "order must be an integer"))?;
        let mut group = None;
        let mut valencies = None;
        let mut tensor = None;
        let mut relations: Vec<Vec<[u32; 3]>> = Vec::new();
        for (idx, raw) in self.lines.by_ref() {
            let line_no = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let (key, rest) = raw.split_once(':').ok_or_else(|| {
                err(line_no, raw.len(), "expected `key: value`")
            })?;
            match key.trim() {
                "group" => group = Some(rest.trim().to_string()),
                "valencies" => {
                    let parsed = rest
                        .split_whitespace()
                        .map(|v| v.parse::<u32>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| err(line_no, key.len() + 2, "valencies must be integers"))?;
                    valencies = Some(parsed);
                }
                "tensor" => {
                    let mut cells = Vec::new();
                    for item in rest.split_whitespace() {
                        let (idxs, count) = item.split_once('=').ok_or_else(|| {
                            err(line_no, key.len() + 2, "tensor cells look like i,j,k,l=v")
                        })?;
                        let parts: Vec<u32> = idxs
                            .split(',')
                            .map(|v| v.parse::<u32>())
                            .collect::<std::result::Result<_, _>>()
                            .map_err(|_| err(line_no, key.len() + 2, "tensor indices must be integers"))?;
                        if parts.len() != 4 {
                            return Err(err(line_no, key.len() + 2, "tensor cells have four indices"));
                        }
                        let v = count
                            .parse::<u32>()
                            .map_err(|_| err(line_no, key.len() + 2, "tensor count must be an integer"))?;
                        cells.push((parts[0], parts[1], parts[2], parts[3], v));
                    }
                    tensor = Some(cells);
                }
                rel if rel.starts_with('R') => {
                    let index: usize = rel[1..]
                        .parse()
                        .map_err(|_| err(line_no, 1, "relation lines look like `R4: (1,2,3) ...`"))?;
                    if index != relations.len() {
                        return Err(err(
                            line_no,
                            1,
                            &format!("expected R{} at this position", relations.len()),
                        ));
                    }
                    relations.push(parse_triples(rest, line_no)?);
                }
                other => {
                    return Err(err(line_no, 1, &format!("unknown key `{other}`")));
                }
            }
        }
        if relations.is_empty() {
            return Err(err(0, 0, "document has no relation lines"));
        }
        Ok(AstDocument {
            n,
            order,
            group,
            valencies,
            tensor,
            relations,
        })
    }

    fn key_line(&mut self, key: &str) -> Result<String> {
        loop {
            let Some((idx, raw)) = self.lines.next() else {
                return Err(err(0, 0, &format!("missing `{key}:` line")));
            };
            if raw.trim().is_empty() {
                continue;
            }
            let line_no = idx + 1;
            let (k, rest) = raw
                .split_once(':')
                .ok_or_else(|| err(line_no, 1, &format!("expected `{key}: ...`")))?;
            if k.trim() != key {
                return Err(err(line_no, 1, &format!("expected `{key}: ...`")));
            }
            return Ok(rest.to_string());
        }
    }
}

fn err(line: usize, col: usize, msg: &str) -> Error {
    Error::DocumentParse {
        line,
        col,
        msg: msg.to_string(),
    }
}

fn parse_triples(rest: &str, line_no: usize) -> Result<Vec<[u32; 3]>> {
    let mut out = Vec::new();
    let mut chars = rest.char_indices().peekable();
    while let Some((col, c)) = chars.next() {
        if c.is_whitespace() {
            continue;
        }
        if c != '(' {
            return Err(err(line_no, col + 1, "expected `(`"));
        }
        let mut body = String::new();
        let mut closed = false;
        for (_, c) in chars.by_ref() {
            if c == ')' {
                closed = true;
                break;
            }
            body.push(c);
        }
        if !closed {
            return Err(err(line_no, col + 1, "unclosed triple"));
        }
        let parts: Vec<u32> = body
            .split(',')
            .map(|v| v.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err(line_no, col + 1, "triple entries must be integers"))?;
        if parts.len() != 3 {
            return Err(err(line_no, col + 1, "triples have three entries"));
        }
        out.push([parts[0], parts[1], parts[2]]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::nontrivial_domain;

    fn sample() -> AstDocument {
        let x = AstCandidate::new(4, vec![nontrivial_domain(4).unwrap()]).unwrap();
        let report = crate::axioms::validate_ast(&x);
        AstDocument::from_candidate(&x, Some("coord-s3".to_string()), report.valencies.as_ref())
    }

    #[test]
    fn text_round_trip_is_byte_identical() {
        let doc = sample();
        let text = doc.to_text();
        let parsed = AstDocument::parse_text(&text).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(parsed.to_text(), text);
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let mut doc = sample();
        doc.tensor = Some(vec![(0, 0, 0, 0, 1)]);
        let json = doc.to_json();
        let parsed = AstDocument::parse_json(&json).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(parsed.to_json(), json);
    }

    #[test]
    fn candidate_round_trip_preserves_key() {
        let doc = sample();
        let x = doc.to_candidate().unwrap();
        let again = AstDocument::from_candidate(&x, doc.group.clone(), None).to_candidate().unwrap();
        assert_eq!(x.canonical_form(), again.canonical_form());
    }

    #[test]
    fn unsorted_triples_are_accepted_and_normalized() {
        let mut doc = sample();
        doc.relations[4].reverse();
        let x = doc.to_candidate().unwrap();
        assert_eq!(x, sample().to_candidate().unwrap());
    }

    #[test]
    fn parse_errors_carry_positions() {
        match AstDocument::parse_text("n: x\norder: 4\nR0: (1,1,1)\n") {
            Err(Error::DocumentParse { line: 1, .. }) => {}
            other => panic!("expected a line-1 parse error, got {other:?}"),
        }
        match AstDocument::parse_text("n: 4\norder: 4\nR0: (1,1,1) (2,2\n") {
            Err(Error::DocumentParse { line: 3, .. }) => {}
            other => panic!("expected a line-3 parse error, got {other:?}"),
        }
    }

    #[test]
    fn semantic_failures_are_rejected() {
        // wrong trivial prefix
        let mut doc = sample();
        doc.relations[1].pop();
        assert!(doc.to_candidate().is_err());

        // coverage failure
        let mut doc = sample();
        doc.relations[4].pop();
        assert!(doc.to_candidate().is_err());

        // relation count inconsistent with the order
        let mut doc = sample();
        doc.order = 5;
        assert!(doc.to_candidate().is_err());

        // out-of-range label
        let mut doc = sample();
        doc.relations[4][0] = [1, 2, 9];
        assert!(doc.to_candidate().is_err());
    }
}
