//! Text formats for programs.
//!
//! `.2tag`: one rule per line, `symbol -> symbol symbol ...`, empty
//! right-hand sides allowed. Symbols are whitespace-delimited tokens; a
//! token starting with `#` begins a comment running to the end of the
//! line, so `#` inside a token (as in compiled stage indices) is plain
//! content. The alphabet is the set of all tokens seen.
//!
//! `.ctag`: line 1 is the comma-separated appendant list with `-` for the
//! empty word; every following line is a comment. The input dataword is
//! supplied separately.

use std::fmt::Write as _;

use crate::codec::DecoratedSymbol;
use crate::cyclic::{format_bits, CyclicTagSystem};
use crate::tag::{TagSymbol, TagSystem};

/// A parse failure with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Strip the comment tail: the first token starting with `#` and
/// everything after it.
fn strip_comment(line: &str) -> &str {
    let mut cut = line.len();
    for (idx, token) in line.split_whitespace().map(|t| (token_offset(line, t), t)) {
        if token.starts_with('#') {
            cut = idx;
            break;
        }
    }
    &line[..cut]
}

fn token_offset(line: &str, token: &str) -> usize {
    // Tokens come from split_whitespace over the same line, so the pointer
    // arithmetic is in-bounds by construction.
    token.as_ptr() as usize - line.as_ptr() as usize
}

/// Parse a `.2tag` file into a tag system over the given symbol type.
pub fn parse_2tag_with<S, F>(input: &str, mut parse_symbol: F) -> Result<TagSystem<S>, ParseError>
where
    S: TagSymbol,
    F: FnMut(usize, &str) -> Result<S, ParseError>,
{
    let mut rules: Vec<(S, Vec<S>)> = Vec::new();
    let mut alphabet: Vec<S> = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        let mut tokens = line.split_whitespace().peekable();
        if tokens.peek().is_none() {
            continue;
        }
        let lhs_tok = tokens.next().expect("peeked non-empty");
        if lhs_tok == "->" {
            return Err(err(line_no, "rule has no left-hand symbol"));
        }
        match tokens.next() {
            Some("->") => {}
            Some(other) => return Err(err(line_no, format!("expected '->', found {other:?}"))),
            None => return Err(err(line_no, "expected '->' after the rule symbol")),
        }
        let lhs = parse_symbol(line_no, lhs_tok)?;
        let mut rhs = Vec::new();
        for tok in tokens {
            if tok == "->" {
                return Err(err(line_no, "unexpected second '->'"));
            }
            rhs.push(parse_symbol(line_no, tok)?);
        }
        if rules.iter().any(|(l, _)| *l == lhs) {
            return Err(err(line_no, format!("duplicate rule for {lhs}")));
        }
        alphabet.push(lhs.clone());
        alphabet.extend(rhs.iter().cloned());
        rules.push((lhs, rhs));
    }
    Ok(TagSystem::new(alphabet, rules, 2))
}

/// Parse a `.2tag` file with plain string tokens as symbols.
pub fn parse_2tag(input: &str) -> Result<TagSystem<String>, ParseError> {
    parse_2tag_with(input, |_, tok| Ok(tok.to_string()))
}

/// Parse a `.2tag` file whose tokens are canonical decorated symbols.
pub fn parse_2tag_decorated(input: &str) -> Result<TagSystem<DecoratedSymbol>, ParseError> {
    parse_2tag_with(input, |line, tok| {
        tok.parse::<DecoratedSymbol>()
            .map_err(|e| err(line, e.to_string()))
    })
}

/// Render a tag system in the `.2tag` format, one sorted rule per line.
pub fn render_2tag<S: TagSymbol>(ts: &TagSystem<S>) -> String {
    let mut out = String::new();
    for (lhs, rhs) in ts.rules() {
        let _ = write!(out, "{lhs} ->");
        for sym in rhs {
            let _ = write!(out, " {sym}");
        }
        out.push('\n');
    }
    out
}

/// Parse a `.ctag` file.
pub fn parse_ctag(input: &str) -> Result<CyclicTagSystem, ParseError> {
    let first = input
        .lines()
        .next()
        .ok_or_else(|| err(1, "empty program file"))?;
    let mut appendants = Vec::new();
    for (i, field) in first.split(',').enumerate() {
        let field = field.trim();
        if field == "-" {
            appendants.push(Vec::new());
            continue;
        }
        if field.is_empty() {
            return Err(err(
                1,
                format!("appendant {i} is blank; use '-' for the empty word"),
            ));
        }
        let word = crate::cyclic::parse_bits(field)
            .map_err(|c| err(1, format!("appendant {i} has non-binary symbol {c:?}")))?;
        appendants.push(word);
    }
    Ok(CyclicTagSystem::new(appendants))
}

/// Render a cyclic program in the `.ctag` format.
pub fn render_ctag(ts: &CyclicTagSystem) -> String {
    let fields: Vec<String> = ts
        .appendants()
        .iter()
        .map(|a| {
            if a.is_empty() {
                "-".to_string()
            } else {
                format_bits(a)
            }
        })
        .collect();
    format!("{}\n", fields.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_2tag_basic() {
        let src = "# halving system\na -> b b   # grows\nb ->\n";
        let ts = parse_2tag(src).unwrap();
        assert_eq!(ts.rules().len(), 2);
        assert_eq!(
            ts.rule(&"a".to_string()).unwrap(),
            ["b".to_string(), "b".to_string()]
        );
        assert_eq!(ts.rule(&"b".to_string()).unwrap(), Vec::<String>::new());
        assert!(ts.validate().is_empty());
    }

    #[test]
    fn parse_2tag_errors_carry_line_numbers() {
        assert_eq!(parse_2tag("a -> b\nc d\n").unwrap_err().line, 2);
        assert_eq!(parse_2tag("a -> b\na -> c\n").unwrap_err().line, 2);
        assert_eq!(parse_2tag("-> b\n").unwrap_err().line, 1);
    }

    #[test]
    fn hash_inside_token_is_not_a_comment() {
        let src = "1~@cp#0 -> 1~@disp#0 1.~@disp#0 # trailing comment\n";
        let ts = parse_2tag(src).unwrap();
        assert_eq!(ts.rules().len(), 1);
        let rhs = ts.rule(&"1~@cp#0".to_string()).unwrap();
        assert_eq!(rhs.len(), 2);
    }

    #[test]
    fn two_tag_round_trip_of_decorated_rules() {
        let ts = crate::compile::gen_parity_tester();
        let text = render_2tag(&ts);
        let back = parse_2tag_decorated(&text).unwrap();
        assert_eq!(back.rules(), ts.rules());
    }

    #[test]
    fn parse_ctag_worked_example() {
        let ts = parse_ctag("00,010,11\nany comment\n").unwrap();
        assert_eq!(ts.len(), 3);
        assert_eq!(render_ctag(&ts), "00,010,11\n");
        let with_empty = parse_ctag("-,1\n").unwrap();
        assert_eq!(with_empty.appendants()[0], Vec::<bool>::new());
    }

    #[test]
    fn parse_ctag_rejects_garbage() {
        assert!(parse_ctag("0,2\n").is_err());
        assert!(parse_ctag("0,,1\n").is_err());
        assert!(parse_ctag("").is_err());
    }
}
