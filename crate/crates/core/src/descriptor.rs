//! Tokenizer shared by the domain and test-function descriptor grammars:
//! a leading keyword followed by whitespace-separated `key=value` pairs.

use crate::error::{Error, Result};

/// One whitespace-delimited token and its 1-based column.
#[derive(Debug, Clone, Copy)]
pub struct Token<'a> {
    pub column: usize,
    pub text: &'a str,
}

pub fn tokenize(s: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(b)) => {
                out.push(Token { column: s[..b].chars().count() + 1, text: &s[b..i] });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push(Token { column: s[..b].chars().count() + 1, text: &s[b..] });
    }
    out
}

pub fn parse_error(column: usize, message: impl Into<String>) -> Error {
    Error::Parse { column, message: message.into() }
}

/// Splits `key=value`; the value's column is returned for diagnostics.
pub fn key_value<'a>(tok: Token<'a>) -> Result<(&'a str, Token<'a>)> {
    match tok.text.split_once('=') {
        Some((k, v)) if !k.is_empty() && !v.is_empty() => Ok((
            k,
            Token { column: tok.column + k.chars().count() + 1, text: v },
        )),
        _ => Err(parse_error(tok.column, format!("expected key=value, found `{}`", tok.text))),
    }
}

pub fn number(tok: Token<'_>) -> Result<f64> {
    tok.text
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| parse_error(tok.column, format!("expected a number, found `{}`", tok.text)))
}

pub fn integer<T: std::str::FromStr>(tok: Token<'_>) -> Result<T> {
    tok.text
        .parse::<T>()
        .map_err(|_| parse_error(tok.column, format!("expected an integer, found `{}`", tok.text)))
}

pub fn number_list(tok: Token<'_>) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut col = tok.column;
    for part in tok.text.split(',') {
        out.push(number(Token { column: col, text: part })?);
        col += part.chars().count() + 1;
    }
    Ok(out)
}

pub fn integer_list<T: std::str::FromStr>(tok: Token<'_>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    let mut col = tok.column;
    for part in tok.text.split(',') {
        out.push(integer(Token { column: col, text: part })?);
        col += part.chars().count() + 1;
    }
    Ok(out)
}

pub fn boolean(tok: Token<'_>) -> Result<bool> {
    match tok.text {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(parse_error(tok.column, format!("expected true or false, found `{other}`"))),
    }
}

pub fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}
