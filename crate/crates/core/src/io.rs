//! Reading and writing contexts: Burmeister `.cxt`, CSV and JSON.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::context::FormalContext;
use crate::error::{FcaError, Result};
use crate::many_valued::ManyValuedContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextFormat {
    Cxt,
    Csv,
    Json,
}

impl ContextFormat {
    /// Guesses the format from a file name's extension.
    pub fn from_path(path: &str) -> Option<ContextFormat> {
        let ext = path.rsplit_once('.')?.1.to_ascii_lowercase();
        ext.parse().ok()
    }
}

impl FromStr for ContextFormat {
    type Err = FcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cxt" => Ok(ContextFormat::Cxt),
            "csv" => Ok(ContextFormat::Csv),
            "json" => Ok(ContextFormat::Json),
            other => Err(FcaError::Invalid(format!("unknown context format {other:?}"))),
        }
    }
}

impl fmt::Display for ContextFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContextFormat::Cxt => "cxt",
            ContextFormat::Csv => "csv",
            ContextFormat::Json => "json",
        })
    }
}

pub fn parse_context(bytes: &[u8], format: ContextFormat) -> Result<FormalContext> {
    let text = std::str::from_utf8(bytes).map_err(|e| FcaError::Parse {
        line: line_of_offset(bytes, e.valid_up_to()),
        message: "input is not valid UTF-8".into(),
    })?;
    match format {
        ContextFormat::Cxt => parse_cxt(text),
        ContextFormat::Csv => parse_csv(text),
        ContextFormat::Json => parse_json(text),
    }
}

pub fn serialize_context(ctx: &FormalContext, format: ContextFormat) -> Vec<u8> {
    match format {
        ContextFormat::Cxt => to_cxt(ctx).into_bytes(),
        ContextFormat::Csv => to_csv(ctx).into_bytes(),
        ContextFormat::Json => to_json(ctx).into_bytes(),
    }
}

fn line_of_offset(bytes: &[u8], offset: usize) -> usize {
    bytes[..offset].iter().filter(|&&b| b == b'\n').count() + 1
}

fn parse_err(line: usize, message: impl Into<String>) -> FcaError {
    FcaError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a Burmeister file.
pub fn parse_cxt(text: &str) -> Result<FormalContext> {
    let lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
    match lines.first() {
        Some(l) if l.trim() == "B" => {}
        Some(_) => return Err(parse_err(1, "expected \"B\" on the first line")),
        None => return Err(parse_err(1, "empty file")),
    }
    let mut pos = 1;
    // optional name line
    if let Some(l) = lines.get(pos) {
        if l.trim().is_empty() || l.trim().parse::<usize>().is_err() {
            pos += 1;
        }
    }
    let count = |what: &str, pos: &mut usize| -> Result<usize> {
        while lines.get(*pos).is_some_and(|l| l.trim().is_empty()) {
            *pos += 1;
        }
        let line = lines
            .get(*pos)
            .ok_or_else(|| parse_err(*pos + 1, format!("missing {what} count")))?;
        let n = line
            .trim()
            .parse::<usize>()
            .map_err(|_| parse_err(*pos + 1, format!("{what} count {:?} is not a number", line.trim())))?;
        *pos += 1;
        Ok(n)
    };
    let n_obj = count("object", &mut pos)?;
    let n_att = count("attribute", &mut pos)?;
    if lines.get(pos).is_some_and(|l| l.trim().is_empty()) {
        pos += 1;
    }
    let take = |what: &str, pos: &mut usize| -> Result<(usize, String)> {
        let line = lines
            .get(*pos)
            .ok_or_else(|| parse_err(*pos + 1, format!("unexpected end of file, expected {what}")))?;
        *pos += 1;
        Ok((*pos, line.to_string()))
    };
    let mut objects = Vec::with_capacity(n_obj);
    for _ in 0..n_obj {
        objects.push(take("an object label", &mut pos)?);
    }
    let mut attributes = Vec::with_capacity(n_att);
    for _ in 0..n_att {
        attributes.push(take("an attribute label", &mut pos)?);
    }
    check_labels("object", &objects)?;
    check_labels("attribute", &attributes)?;
    let mut rows = Vec::with_capacity(n_obj);
    for _ in 0..n_obj {
        let (line_no, row) = take("an incidence row", &mut pos)?;
        let row = row.trim_end();
        let chars: Vec<char> = row.chars().collect();
        if chars.len() != n_att {
            return Err(parse_err(
                line_no,
                format!("row has {} cells, expected {}", chars.len(), n_att),
            ));
        }
        let mut set = BitSet::empty(n_att);
        for (m, c) in chars.into_iter().enumerate() {
            match c {
                'X' | 'x' => set.insert(m),
                '.' => {}
                other => return Err(parse_err(line_no, format!("unexpected cell {other:?}"))),
            }
        }
        rows.push(set);
    }
    if let Some(extra) = lines[pos..].iter().position(|l| !l.trim().is_empty()) {
        return Err(parse_err(pos + extra + 1, "trailing content after the incidence rows"));
    }
    FormalContext::from_rows(
        objects.into_iter().map(|(_, l)| l).collect(),
        attributes.into_iter().map(|(_, l)| l).collect(),
        rows,
    )
}

fn check_labels(side: &'static str, labels: &[(usize, String)]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for (line, l) in labels {
        if !seen.insert(l.as_str()) {
            return Err(parse_err(*line, format!("duplicate {side} label {l:?}")));
        }
    }
    Ok(())
}

pub fn to_cxt(ctx: &FormalContext) -> String {
    let mut out = format!("B\n\n{}\n{}\n\n", ctx.n_objects(), ctx.n_attributes());
    for l in ctx.objects().iter().chain(ctx.attributes()) {
        out.push_str(l);
        out.push('\n');
    }
    for g in 0..ctx.n_objects() {
        for m in 0..ctx.n_attributes() {
            out.push(if ctx.has(g, m) { 'X' } else { '.' });
        }
        out.push('\n');
    }
    out
}

fn truthy(cell: &str) -> bool {
    let c = cell.trim();
    !(c.is_empty()
        || c == "0"
        || c == "."
        || c.eq_ignore_ascii_case("false")
        || c.eq_ignore_ascii_case("no"))
}

fn csv_records(text: &str) -> Result<Vec<(usize, Vec<String>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() == 1 && rec[0].trim().is_empty() {
            continue;
        }
        out.push((line, rec.iter().map(|s| s.to_string()).collect()));
    }
    Ok(out)
}

/// CSV: header row of attribute labels after a corner cell, then one row per
/// object with its label first. Empty, `0`, `.`, `false` and `no` are
/// non-incidence; anything else is a cross.
pub fn parse_csv(text: &str) -> Result<FormalContext> {
    let records = csv_records(text)?;
    let Some(((_, header), body)) = records.split_first() else {
        return FormalContext::new(Vec::<String>::new(), Vec::<String>::new(), vec![]);
    };
    let attributes: Vec<(usize, String)> = header.iter().skip(1).map(|a| (1, a.trim().to_string())).collect();
    check_labels("attribute", &attributes)?;
    let n_att = attributes.len();
    let mut objects = Vec::new();
    let mut rows = Vec::new();
    for (line, rec) in body {
        if rec.len() != n_att + 1 {
            return Err(parse_err(
                *line,
                format!("row has {} fields, expected {}", rec.len(), n_att + 1),
            ));
        }
        objects.push((*line, rec[0].trim().to_string()));
        let mut set = BitSet::empty(n_att);
        for (m, cell) in rec[1..].iter().enumerate() {
            if truthy(cell) {
                set.insert(m);
            }
        }
        rows.push(set);
    }
    check_labels("object", &objects)?;
    FormalContext::from_rows(
        objects.into_iter().map(|(_, l)| l).collect(),
        attributes.into_iter().map(|(_, l)| l).collect(),
        rows,
    )
}

fn write_csv(records: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for r in records {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
}

pub fn to_csv(ctx: &FormalContext) -> String {
    let header = std::iter::once(String::new()).chain(ctx.attributes().iter().cloned()).collect();
    let rows = (0..ctx.n_objects()).map(|g| {
        std::iter::once(ctx.objects()[g].clone())
            .chain((0..ctx.n_attributes()).map(|m| if ctx.has(g, m) { "1" } else { "0" }.to_string()))
            .collect()
    });
    write_csv(std::iter::once(header).chain(rows))
}

/// JSON schema of a context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextJson {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    pub incidence: Vec<Vec<usize>>,
}

impl From<&FormalContext> for ContextJson {
    fn from(ctx: &FormalContext) -> Self {
        ContextJson {
            objects: ctx.objects().to_vec(),
            attributes: ctx.attributes().to_vec(),
            incidence: ctx.rows().iter().map(BitSet::to_vec).collect(),
        }
    }
}

impl TryFrom<ContextJson> for FormalContext {
    type Error = FcaError;

    fn try_from(j: ContextJson) -> Result<FormalContext> {
        FormalContext::new(j.objects, j.attributes, j.incidence)
    }
}

pub fn parse_json(text: &str) -> Result<FormalContext> {
    let j: ContextJson = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    j.try_into()
}

pub fn to_json(ctx: &FormalContext) -> String {
    serde_json::to_string_pretty(&ContextJson::from(ctx)).expect("serializable")
}

/// Many-valued CSV: header of attribute names after a corner cell, one row
/// per object. Empty cells are missing values.
pub fn parse_many_valued_csv(text: &str) -> Result<ManyValuedContext> {
    let records = csv_records(text)?;
    let Some(((_, header), body)) = records.split_first() else {
        return Err(parse_err(1, "missing header row"));
    };
    let attributes: Vec<String> = header.iter().skip(1).map(|a| a.trim().to_string()).collect();
    let mut objects = Vec::new();
    let mut values = Vec::new();
    for (line, rec) in body {
        if rec.len() != attributes.len() + 1 {
            return Err(parse_err(
                *line,
                format!("row has {} fields, expected {}", rec.len(), attributes.len() + 1),
            ));
        }
        objects.push(rec[0].trim().to_string());
        values.push(rec[1..].iter().map(|v| Some(v.clone())).collect());
    }
    ManyValuedContext::new(objects, attributes, values)
}

pub fn many_valued_to_csv(mv: &ManyValuedContext) -> String {
    let header = std::iter::once(String::new()).chain(mv.attributes().iter().cloned()).collect();
    let rows = (0..mv.objects().len()).map(|g| {
        std::iter::once(mv.objects()[g].clone())
            .chain((0..mv.attributes().len()).map(|m| mv.value(g, m).unwrap_or("").to_string()))
            .collect()
    });
    write_csv(std::iter::once(header).chain(rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    const GEOMETRIC_CXT: &str = "B\n\n4\n4\n\n1\n2\n3\n4\na\nb\nc\nd\nX..X\nX.X.\n.XX.\n.XXX\n";

    #[test]
    fn burmeister_geometric_figures() {
        let ctx = parse_cxt(GEOMETRIC_CXT).unwrap();
        assert_eq!(ctx, datasets::geometric_figures());
        assert_eq!(to_cxt(&ctx), GEOMETRIC_CXT);
    }

    #[test]
    fn burmeister_variants() {
        let named = "B\ngeometry\n4\n4\n1\n2\n3\n4\na\nb\nc\nd\nx..x\nX.X.\n.XX.\n.XXX\n";
        assert_eq!(parse_cxt(named).unwrap(), datasets::geometric_figures());
        let crlf = GEOMETRIC_CXT.replace('\n', "\r\n");
        assert_eq!(parse_cxt(&crlf).unwrap(), datasets::geometric_figures());
    }

    #[test]
    fn burmeister_errors_carry_lines() {
        let bad_row = GEOMETRIC_CXT.replace(".XX.\n", ".XX\n");
        assert_eq!(parse_cxt(&bad_row).unwrap_err(), FcaError::Parse { line: 16, message: "row has 3 cells, expected 4".into() });
        assert!(matches!(parse_cxt("A\n"), Err(FcaError::Parse { line: 1, .. })));
        let dup = GEOMETRIC_CXT.replace("\nb\n", "\na\n");
        assert!(matches!(parse_cxt(&dup), Err(FcaError::Parse { line: 11, .. })));
        assert!(matches!(parse_cxt("B\n\nx\n4\n"), Err(FcaError::Parse { line: 3, .. })));
        assert!(matches!(parse_cxt("B\n\n1\n1\n\ng\nm\nX\nX\n"), Err(FcaError::Parse { line: 9, .. })));
    }

    #[test]
    fn empty_context_round_trips() {
        let empty = FormalContext::new(Vec::<String>::new(), Vec::<String>::new(), vec![]).unwrap();
        for f in [ContextFormat::Cxt, ContextFormat::Csv, ContextFormat::Json] {
            let bytes = serialize_context(&empty, f);
            assert_eq!(parse_context(&bytes, f).unwrap(), empty, "{f}");
        }
    }

    #[test]
    fn csv_markers_are_equivalent() {
        let base = ",a,b,c,d\n1,X,,,X\n2,X,,X,\n3,,X,X,\n4,,X,X,X\n";
        for marker in ["1", "x", "X"] {
            let text = base.replace('X', marker).replace(",,", ",0,").replace(",,", ",0,");
            assert_eq!(parse_csv(&text).unwrap(), datasets::geometric_figures(), "marker {marker}");
        }
    }

    #[test]
    fn csv_row_length_error() {
        let err = parse_csv(",a,b\n1,1,0\n2,1\n").unwrap_err();
        assert!(matches!(err, FcaError::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn json_round_trip_and_errors() {
        let ctx = datasets::customers();
        assert_eq!(parse_json(&to_json(&ctx)).unwrap(), ctx);
        assert!(matches!(parse_json("{\n\"objects\": [}"), Err(FcaError::Parse { line: 2, .. })));
        let out_of_range = r#"{"objects":["g"],"attributes":["m"],"incidence":[[3]]}"#;
        assert!(matches!(parse_json(out_of_range), Err(FcaError::IndexOutOfRange { .. })));
    }

    #[test]
    fn many_valued_csv_round_trip() {
        let mv = datasets::university_subjects();
        let text = many_valued_to_csv(&mv);
        assert_eq!(parse_many_valued_csv(&text).unwrap(), mv);
    }

    #[test]
    fn format_from_path() {
        assert_eq!(ContextFormat::from_path("data/x.CXT"), Some(ContextFormat::Cxt));
        assert_eq!(ContextFormat::from_path("x"), None);
    }
}
