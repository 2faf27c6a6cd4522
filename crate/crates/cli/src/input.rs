//! Expression input: inline DSL, a file (JSON or DSL) or stdin.

use std::io::Read;
use std::path::Path;

use tropma_core::{dsl, Error, Result, TropicalExpr};

/// Parses JSON when the text starts with `{`, the DSL otherwise.
pub fn parse_text(text: &str, n: Option<usize>) -> Result<TropicalExpr> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::Empty("expression"));
    }
    if trimmed.starts_with('{') {
        let e: TropicalExpr = serde_json::from_str(trimmed)?;
        match n {
            Some(n) if n != e.n() => Err(Error::DimensionMismatch {
                expected: n,
                found: e.n(),
            }),
            _ => Ok(e),
        }
    } else {
        dsl::parse(trimmed, n)
    }
}

pub fn read_expr(inline: Option<&str>, file: Option<&Path>, n: Option<usize>) -> Result<TropicalExpr> {
    let text = match (inline, file) {
        (Some(_), Some(_)) => {
            return Err(Error::Invalid("give either an inline expression or --file, not both".into()));
        }
        (Some(s), None) => s.to_string(),
        (None, Some(p)) => std::fs::read_to_string(p)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", p.display())))?,
        (None, None) => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Invalid(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    parse_text(&text, n)
}
