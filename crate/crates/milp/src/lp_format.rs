//! CPLEX-style LP text for [`MilpModel`].
//!
//! The writer is deterministic: variables, rows and terms keep model order and
//! every number is printed with its shortest round-trip representation, so
//! `write(parse(write(m))) == write(m)`. The parser accepts the dialect the
//! writer produces (explicit coefficients, one row per line, every variable
//! listed under `Bounds`).

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::MilpError;
use crate::model::{MilpModel, Sense, VarId, VarKind};

fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "+inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

fn write_expr(out: &mut String, model: &MilpModel, terms: &[(VarId, f64)]) {
    if terms.is_empty() {
        out.push_str(" 0");
        return;
    }
    for (k, &(v, c)) in terms.iter().enumerate() {
        let name = &model.variable(v).name;
        let sign = if c < 0.0 { "-" } else { "+" };
        if k == 0 && c >= 0.0 {
            let _ = write!(out, " {} {}", num(c), name);
        } else {
            let _ = write!(out, " {} {} {}", sign, num(c.abs()), name);
        }
    }
}

pub fn write_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ Problem: {}", model.name);
    out.push_str("Minimize\n obj:");
    write_expr(&mut out, model, model.objective());
    out.push_str("\nSubject To\n");
    for c in model.constraints() {
        let _ = write!(out, " {}:", c.name);
        write_expr(&mut out, model, &c.terms);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), num(c.rhs));
    }
    out.push_str("Bounds\n");
    for v in model.variables() {
        let _ = writeln!(out, " {} <= {} <= {}", num(v.lower), v.name, num(v.upper));
    }
    for (header, kind) in [("Binary", VarKind::Binary), ("General", VarKind::Integer)] {
        let names: Vec<&str> =
            model.variables().iter().filter(|v| v.kind == kind).map(|v| v.name.as_str()).collect();
        if !names.is_empty() {
            let _ = writeln!(out, "{header}");
            for n in names {
                let _ = writeln!(out, " {n}");
            }
        }
    }
    out.push_str("End\n");
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Preamble,
    Objective,
    Rows,
    Bounds,
    Binary,
    General,
    Done,
}

fn parse_num(tok: &str, line: usize) -> Result<f64, MilpError> {
    tok.parse::<f64>()
        .map_err(|_| MilpError::Parse { line, message: format!("expected a number, got {tok:?}") })
}

fn parse_expr(tokens: &[&str], line: usize) -> Result<Vec<(String, f64)>, MilpError> {
    if tokens == ["0"] {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut sign = 1.0;
        if tokens[i] == "+" || tokens[i] == "-" {
            if tokens[i] == "-" {
                sign = -1.0;
            }
            i += 1;
        } else if i > 0 {
            return Err(MilpError::Parse { line, message: format!("expected '+' or '-', got {:?}", tokens[i]) });
        }
        let (Some(c), Some(name)) = (tokens.get(i), tokens.get(i + 1)) else {
            return Err(MilpError::Parse { line, message: "truncated term".into() });
        };
        terms.push((name.to_string(), sign * parse_num(c, line)?));
        i += 2;
    }
    Ok(terms)
}

struct RawRow {
    name: String,
    terms: Vec<(String, f64)>,
    sense: Sense,
    rhs: f64,
    line: usize,
}

pub fn parse_lp(text: &str) -> Result<MilpModel, MilpError> {
    let mut name = String::new();
    let mut section = Section::Preamble;
    let mut objective: Vec<(String, f64)> = Vec::new();
    let mut rows: Vec<RawRow> = Vec::new();
    let mut bounds: Vec<(String, f64, f64, usize)> = Vec::new();
    let mut kinds: HashMap<String, VarKind> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if let Some(rest) = raw.strip_prefix('\\') {
            if let Some(n) = rest.strip_prefix(" Problem: ") {
                name = n.to_string();
            }
            continue;
        }
        if raw.trim().is_empty() {
            continue;
        }
        if !raw.starts_with(' ') {
            section = match raw.trim() {
                "Minimize" => Section::Objective,
                "Subject To" => Section::Rows,
                "Bounds" => Section::Bounds,
                "Binary" => Section::Binary,
                "General" => Section::General,
                "End" => Section::Done,
                other => return Err(MilpError::Parse { line, message: format!("unknown section {other:?}") }),
            };
            continue;
        }
        let body = raw.trim();
        match section {
            Section::Objective => {
                let rest = body
                    .strip_prefix("obj:")
                    .ok_or_else(|| MilpError::Parse { line, message: "expected 'obj:'".into() })?;
                let toks: Vec<&str> = rest.split_whitespace().collect();
                objective = parse_expr(&toks, line)?;
            }
            Section::Rows => {
                let (rname, rest) = body
                    .split_once(':')
                    .ok_or_else(|| MilpError::Parse { line, message: "row without a name".into() })?;
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() < 3 {
                    return Err(MilpError::Parse { line, message: "truncated row".into() });
                }
                let n = toks.len();
                let sense = match toks[n - 2] {
                    "<=" => Sense::Le,
                    ">=" => Sense::Ge,
                    "=" => Sense::Eq,
                    s => return Err(MilpError::Parse { line, message: format!("unknown sense {s:?}") }),
                };
                rows.push(RawRow {
                    name: rname.to_string(),
                    terms: parse_expr(&toks[..n - 2], line)?,
                    sense,
                    rhs: parse_num(toks[n - 1], line)?,
                    line,
                });
            }
            Section::Bounds => {
                let toks: Vec<&str> = body.split_whitespace().collect();
                if toks.len() != 5 || toks[1] != "<=" || toks[3] != "<=" {
                    return Err(MilpError::Parse { line, message: "expected 'lo <= name <= hi'".into() });
                }
                bounds.push((toks[2].to_string(), parse_num(toks[0], line)?, parse_num(toks[4], line)?, line));
            }
            Section::Binary | Section::General => {
                let kind = if section == Section::Binary { VarKind::Binary } else { VarKind::Integer };
                kinds.insert(body.to_string(), kind);
            }
            Section::Preamble | Section::Done => {
                return Err(MilpError::Parse { line, message: "content outside a section".into() });
            }
        }
    }
    if section != Section::Done {
        return Err(MilpError::Parse { line: text.lines().count(), message: "missing 'End'".into() });
    }

    let mut model = MilpModel::new(name);
    for (vname, lo, hi, line) in bounds {
        let kind = kinds.remove(&vname).unwrap_or(VarKind::Continuous);
        model.add_var(vname, kind, lo, hi).map_err(|e| MilpError::Parse { line, message: e.to_string() })?;
    }
    if let Some(orphan) = kinds.keys().next() {
        return Err(MilpError::UnknownVariable(orphan.clone()));
    }
    let resolve = |terms: &[(String, f64)], model: &MilpModel| -> Result<Vec<(VarId, f64)>, MilpError> {
        terms
            .iter()
            .map(|(n, c)| model.var_by_name(n).map(|v| (v, *c)).ok_or_else(|| MilpError::UnknownVariable(n.clone())))
            .collect()
    };
    let obj = resolve(&objective, &model)?;
    model.set_objective(&obj)?;
    for r in rows {
        let terms = resolve(&r.terms, &model)?;
        model
            .add_row(r.name, &terms, r.sense, r.rhs)
            .map_err(|e| MilpError::Parse { line: r.line, message: e.to_string() })?;
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MilpModel {
        let mut m = MilpModel::new("sample model");
        let x = m.continuous("x", 0.0, f64::INFINITY).unwrap();
        let y = m.integer("k(s0,n1)", -3.0, 7.0).unwrap();
        let b = m.binary("b").unwrap();
        let _free = m.continuous("free", f64::NEG_INFINITY, f64::INFINITY).unwrap();
        m.set_objective(&[(x, 1.5), (y, -2.0), (b, 0.1)]).unwrap();
        m.add_row("c1", &[(x, 1.0), (y, 1.0)], Sense::Ge, 1.0).unwrap();
        m.add_row("c2", &[(x, -1e-7), (b, 3.0)], Sense::Le, -0.25).unwrap();
        m.add_row("c3", &[(y, 2.0)], Sense::Eq, 4.0).unwrap();
        m.add_row("empty", &[], Sense::Le, 0.0).unwrap();
        m
    }

    #[test]
    fn writes_expected_text() {
        let text = write_lp(&sample());
        assert!(text.starts_with("\\ Problem: sample model\nMinimize\n obj: 1.5 x - 2 k(s0,n1) + 0.1 b\n"));
        assert!(text.contains(" c2: - 0.0000001 x + 3 b <= -0.25\n"));
        assert!(text.contains(" empty: 0 <= 0\n"));
        assert!(text.contains(" -inf <= free <= +inf\n"));
        assert!(text.contains("Binary\n b\nGeneral\n k(s0,n1)\nEnd\n"));
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = write_lp(&sample());
        let parsed = parse_lp(&text).unwrap();
        assert_eq!(write_lp(&parsed), text);
        assert_eq!(parsed.variables(), sample().variables());
        assert_eq!(parsed.constraints(), sample().constraints());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "Minimize\n obj: 1 x\nSubject To\n c: 1 x >< 2\nBounds\n 0 <= x <= 1\nEnd\n";
        match parse_lp(text) {
            Err(MilpError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_lp("Minimize\n obj: 1 y\nBounds\n 0 <= x <= 1\nEnd\n").is_err());
        assert!(parse_lp("Minimize\n obj: 0\n").is_err());
    }
}
