//! Line-oriented theory file format.
//!
//! ```text
//! # penguins
//! atoms: a b
//! default d1: true => a
//! default d2: a => b
//! default d3: true => ~b
//! prio d3 < d2
//! query a
//! ```

use std::fmt::Write as _;

use crate::logic::{parse_formula, Formula};
use crate::pdt::{DefaultRule, InvalidTheory, Pdt, PdtDraft};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdtDocument {
    pub draft: PdtDraft,
    pub queries: Vec<Formula>,
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(x) if x.is_ascii_alphabetic() || x == '_') && c.all(|x| x.is_ascii_alphanumeric() || x == '_')
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, offset: usize, message: impl Into<String>) -> FormatError {
        FormatError {
            line: self.number,
            column: offset + 1,
            message: message.into(),
        }
    }

    /// Parse `self.text[start..end]` as a formula, reporting columns within the line.
    fn formula(&self, start: usize, end: usize) -> Result<Formula, FormatError> {
        let src = &self.text[start..end];
        if src.trim().is_empty() {
            return Err(self.err(start, "missing formula"));
        }
        parse_formula(src).map_err(|e| self.err(start + e.column - 1, e.message))
    }

    fn ident(&self, start: usize, end: usize, what: &str) -> Result<String, FormatError> {
        let raw = &self.text[start..end];
        let lead = raw.len() - raw.trim_start().len();
        let id = raw.trim();
        if is_ident(id) {
            Ok(id.to_string())
        } else {
            Err(self.err(start + lead, format!("expected {what}, found '{id}'")))
        }
    }
}

pub fn parse_document(text: &str) -> Result<PdtDocument, FormatError> {
    let mut doc = PdtDocument {
        draft: PdtDraft {
            atoms: Vec::new(),
            facts: Vec::new(),
            defaults: Vec::new(),
            priority: Vec::new(),
        },
        queries: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        let line = Line { number: i + 1, text };
        let body_start = text.len() - text.trim_start().len();
        let body = text.trim();
        if body.is_empty() {
            continue;
        }
        let keyword_end = body.find(|c: char| c.is_whitespace() || c == ':').unwrap_or(body.len());
        let keyword = &body[..keyword_end];
        let rest = body_start + keyword_end;
        match keyword {
            "atoms" => {
                let names = text[rest..].trim_start().strip_prefix(':').unwrap_or(text[rest..].trim_start());
                let names_start = text.len() - names.len();
                for part in names.split(|c: char| c.is_whitespace() || c == ',') {
                    if part.is_empty() {
                        continue;
                    }
                    let at = names_start + (part.as_ptr() as usize - names.as_ptr() as usize);
                    if !is_ident(part) {
                        return Err(line.err(at, format!("invalid atom name '{part}'")));
                    }
                    doc.draft.atoms.push(part.to_string());
                }
            }
            "fact" => doc.draft.facts.push(line.formula(rest, text.len())?),
            "query" => doc.queries.push(line.formula(rest, text.len())?),
            "default" => {
                let colon = text[rest..].find(':').map(|k| rest + k).ok_or_else(|| line.err(rest, "expected ':' after default id"))?;
                let id = line.ident(rest, colon, "default id")?;
                let arrow = text[colon..]
                    .find("=>")
                    .map(|k| colon + k)
                    .ok_or_else(|| line.err(colon, "expected '=>' between antecedent and consequent"))?;
                let ante = line.formula(colon + 1, arrow)?;
                let cons = line.formula(arrow + 2, text.len())?;
                doc.draft.defaults.push(DefaultRule::new(id, ante, cons));
            }
            "prio" => {
                let lt = text[rest..].find('<').map(|k| rest + k).ok_or_else(|| line.err(rest, "expected '<' in priority"))?;
                let lo = line.ident(rest, lt, "default id")?;
                let hi = line.ident(lt + 1, text.len(), "default id")?;
                doc.draft.priority.push((lo, hi));
            }
            other => return Err(line.err(body_start, format!("unknown directive '{other}'"))),
        }
    }
    Ok(doc)
}

pub fn serialise(doc: &PdtDocument) -> String {
    let mut out = String::new();
    let d = &doc.draft;
    let _ = writeln!(out, "atoms: {}", d.atoms.join(" "));
    for f in &d.facts {
        let _ = writeln!(out, "fact {f}");
    }
    for r in &d.defaults {
        let _ = writeln!(out, "default {r}");
    }
    for (lo, hi) in &d.priority {
        let _ = writeln!(out, "prio {lo} < {hi}");
    }
    for q in &doc.queries {
        let _ = writeln!(out, "query {q}");
    }
    out
}

pub fn serialise_pdt(t: &Pdt) -> String {
    serialise(&PdtDocument {
        draft: t.to_draft(),
        queries: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error(transparent)]
    Syntax(#[from] FormatError),
    #[error(transparent)]
    Invalid(#[from] InvalidTheory),
}

/// Parse and validate a theory file; also returns its queries.
pub fn parse_pdt(text: &str) -> Result<(Pdt, Vec<Formula>), InputError> {
    let doc = parse_document(text)?;
    let t = Pdt::new(&doc.draft)?;
    for q in &doc.queries {
        t.oracle()
            .check(q)
            .map_err(|e| InvalidTheory(vec![crate::pdt::Violation::Vocabulary(e)]))?;
    }
    Ok((t, doc.queries))
}
