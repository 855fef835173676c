//! Plain-text class files.
//!
//! ```text
//! domain: a b c
//! 001
//! 01*
//! ```
//!
//! The header names the points; each following line is one hypothesis over
//! `{0,1,*}` aligned with the header order. Blank lines and `#` comments are
//! skipped.

use std::path::Path;
use std::sync::Arc;

use super::{ConceptClass, Domain, Hypothesis, Preset, Value};
use crate::error::{Error, Result};

pub fn parse_class_file(text: &str) -> Result<ConceptClass> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing `domain:` header".into(),
    })?;
    let ids = header.strip_prefix("domain:").ok_or_else(|| Error::Parse {
        line: line_no,
        msg: "expected `domain: id1 id2 ...`".into(),
    })?;
    let domain = Domain::new(ids.split_whitespace()).map_err(|e| Error::Parse {
        line: line_no,
        msg: e.to_string(),
    })?;
    let n = domain.len();

    let mut hyps = Vec::new();
    for (line_no, line) in lines {
        let values = line
            .chars()
            .map(|c| match c {
                '0' => Ok(Value::Zero),
                '1' => Ok(Value::One),
                '*' => Ok(Value::Undefined),
                other => Err(Error::Parse {
                    line: line_no,
                    msg: format!("unexpected character {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != n {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected {n} values, found {}", values.len()),
            });
        }
        hyps.push(Hypothesis::from_values(&values)?);
    }
    ConceptClass::new(Arc::new(domain), hyps, Preset::Custom)
}

pub fn read_class_file(path: impl AsRef<Path>) -> Result<ConceptClass> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_class_file(&text)
}

pub fn write_class_file(class: &ConceptClass) -> String {
    let n = class.domain().len();
    let mut out = format!("domain: {}\n", class.domain().ids().join(" "));
    for h in class.hypotheses() {
        out.push_str(&h.render(n));
        out.push('\n');
    }
    out
}
