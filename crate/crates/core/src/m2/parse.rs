use std::collections::BTreeMap;
use std::path::Path;

use super::{Edit, M2Sentence};
use crate::error::{Error, Result};

const FIELD_SEP: &str = "|||";

pub fn parse_m2(path: &Path) -> Result<Vec<M2Sentence>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    parse_m2_with_path(&text, path)
}

pub fn parse_m2_str(text: &str) -> Result<Vec<M2Sentence>> {
    parse_m2_with_path(text, Path::new("<m2>"))
}

struct Block {
    source: Vec<String>,
    annotations: BTreeMap<usize, Vec<Edit>>,
    header_line: usize,
}

fn parse_m2_with_path(text: &str, path: &Path) -> Result<Vec<M2Sentence>> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_owned(),
        line,
        msg,
    };
    let mut sentences = Vec::new();
    let mut current: Option<Block> = None;

    let finish = |block: Block, sentences: &mut Vec<M2Sentence>| -> Result<()> {
        let line = block.header_line;
        let s = M2Sentence::new(block.source, block.annotations).map_err(|e| err(line, e.to_string()))?;
        sentences.push(s);
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if let Some(block) = current.take() {
                finish(block, &mut sentences)?;
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("S ").or_else(|| (line == "S").then_some("")) {
            if let Some(block) = current.take() {
                finish(block, &mut sentences)?;
            }
            current = Some(Block {
                source: rest.split_whitespace().map(str::to_owned).collect(),
                annotations: BTreeMap::new(),
                header_line: line_no,
            });
        } else if let Some(rest) = line.strip_prefix("A ") {
            let block = current
                .as_mut()
                .ok_or_else(|| err(line_no, "annotation before any S line".into()))?;
            let (annotator, edit) = parse_annotation(rest).map_err(|msg| err(line_no, msg))?;
            let edits = block.annotations.entry(annotator).or_default();
            if let Some(edit) = edit {
                if edit.end > block.source.len() {
                    return Err(err(
                        line_no,
                        format!("span {}..{} exceeds sentence length {}", edit.start, edit.end, block.source.len()),
                    ));
                }
                edits.push(edit);
            }
        } else {
            return Err(err(line_no, format!("expected an S or A line, found {line:?}")));
        }
    }
    if let Some(block) = current.take() {
        finish(block, &mut sentences)?;
    }
    Ok(sentences)
}

/// Returns the annotator id and the edit, or `None` for a noop annotation.
fn parse_annotation(rest: &str) -> std::result::Result<(usize, Option<Edit>), String> {
    let fields: Vec<&str> = rest.split(FIELD_SEP).collect();
    if fields.len() < 3 {
        return Err(format!("expected at least 3 '|||' fields, found {}", fields.len()));
    }
    let annotator = match fields.get(5) {
        Some(a) => a.trim().parse::<usize>().map_err(|_| format!("bad annotator id {a:?}"))?,
        None => 0,
    };
    let mut span = fields[0].split_whitespace();
    let (Some(start), Some(end), None) = (span.next(), span.next(), span.next()) else {
        return Err(format!("bad span {:?}", fields[0]));
    };
    let etype = fields[1].trim();
    if etype.eq_ignore_ascii_case("noop") || start == "-1" {
        return Ok((annotator, None));
    }
    let start: usize = start.parse().map_err(|_| format!("bad span start {start:?}"))?;
    let end: usize = end.parse().map_err(|_| format!("bad span end {end:?}"))?;
    let replacement: Vec<String> = match fields[2].trim() {
        "-NONE-" => Vec::new(),
        r => r.split_whitespace().map(str::to_owned).collect(),
    };
    let edit = Edit::new(start, end, replacement).map_err(|e| e.to_string())?.with_type(etype);
    Ok((annotator, Some(edit)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_substitution() {
        let s = parse_m2_str("S a b\nA 1 2|||SUB|||c|||REQUIRED|||-NONE-|||0\n").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].source, ["a", "b"]);
        let edits = &s[0].annotations[&0];
        assert_eq!(edits.len(), 1);
        assert!(edits[0].same_change(&Edit::from_strs(1, 2, &["c"]).unwrap()));
        assert_eq!(edits[0].etype.as_deref(), Some("SUB"));
    }

    #[test]
    fn noop_gives_empty_annotator() {
        let s = parse_m2_str("S a b\nA -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||1\n").unwrap();
        assert_eq!(s[0].annotations.len(), 1);
        assert!(s[0].annotations[&1].is_empty());
    }

    #[test]
    fn sentence_without_annotations_has_annotator_zero() {
        let s = parse_m2_str("S a b\n\nS c\nA 0 1|||R|||d|||REQUIRED|||-NONE-|||0\n").unwrap();
        assert_eq!(s.len(), 2);
        assert!(s[0].annotations[&0].is_empty());
    }

    #[test]
    fn deletion_and_multiple_annotators() {
        let text = "S x y z\nA 0 1|||U||||||REQUIRED|||-NONE-|||0\nA 2 2|||M|||w v|||REQUIRED|||-NONE-|||1\n\n";
        let s = parse_m2_str(text).unwrap();
        assert!(s[0].annotations[&0][0].is_deletion());
        assert_eq!(s[0].annotations[&1][0].replacement, ["w", "v"]);
    }

    #[test]
    fn missing_header_is_error() {
        match parse_m2_str("A 1 2|||SUB|||c|||REQUIRED|||-NONE-|||0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn out_of_range_span_is_error() {
        match parse_m2_str("S a\n\nS a b\nA 1 5|||R|||c|||REQUIRED|||-NONE-|||0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn garbage_line_is_error() {
        assert!(matches!(parse_m2_str("S a\nB what\n"), Err(Error::Parse { line: 2, .. })));
    }
}
