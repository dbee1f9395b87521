//! JSONL reduction traces: one self-contained row per step, shared by the
//! naive, lazy, and machine engines.

use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub step: u64,
    /// naive | sigma | machine
    pub engine: String,
    /// contraction name or machine rule name
    pub rule: String,
    /// term path of the contracted redex, or the machine rule number
    pub position: String,
    /// the term (or machine-state denotation) after the step
    pub rendering: String,
    /// normalized trail of the nearest enclosing bang, when there is one
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bang_trail: Option<String>,
}

pub fn write_rows<W: Write>(mut w: W, rows: &[TraceRow]) -> std::io::Result<()> {
    for row in rows {
        serde_json::to_writer(&mut w, row)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_rows<R: BufRead>(r: R) -> std::io::Result<Vec<TraceRow>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_roundtrip_through_jsonl() {
        let rows = vec![
            TraceRow {
                step: 0,
                engine: "naive".into(),
                rule: "beta".into(),
                position: "0.1".into(),
                rendering: "\\x1. x1".into(),
                bang_trail: Some("b".into()),
            },
            TraceRow {
                step: 1,
                engine: "machine".into(),
                rule: "lam".into(),
                position: "3".into(),
                rendering: "two".into(),
                bang_trail: None,
            },
        ];
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(!text.lines().nth(1).unwrap().contains("bang_trail"));
        assert_eq!(read_rows(&buf[..]).unwrap(), rows);
    }
}
