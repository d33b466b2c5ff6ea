//! Tokenizer and s-expression reader.

use std::fmt;

use crate::num::Num;

use super::ParseError;

/// 1-based, inclusive source range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SourceSpan {
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl SourceSpan {
    pub fn point(line: usize, col: usize) -> SourceSpan {
        SourceSpan { start_line: line, start_col: col, end_line: line, end_col: col }
    }

    pub fn to(self, end: SourceSpan) -> SourceSpan {
        SourceSpan { end_line: end.end_line, end_col: end.end_col, ..self }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{}:{}", self.start_line, self.start_col, self.end_line, self.end_col)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Sexpr {
    List { items: Vec<Sexpr>, span: SourceSpan, close: SourceSpan },
    Symbol { text: String, span: SourceSpan },
    Keyword { name: String, span: SourceSpan },
    Number { value: Num, span: SourceSpan },
    Str { text: String, span: SourceSpan },
}

impl Sexpr {
    pub fn span(&self) -> SourceSpan {
        match self {
            Sexpr::List { span, .. }
            | Sexpr::Symbol { span, .. }
            | Sexpr::Keyword { span, .. }
            | Sexpr::Number { span, .. }
            | Sexpr::Str { span, .. } => *span,
        }
    }

    /// Token category name, as used in expected-sets.
    pub fn describe(&self) -> String {
        match self {
            Sexpr::List { items, .. } => match items.first() {
                Some(Sexpr::Symbol { text, .. }) => format!("({text} ...)"),
                _ => "a list".to_string(),
            },
            Sexpr::Symbol { text, .. } => format!("`{text}`"),
            Sexpr::Keyword { name, .. } => format!("`:{name}`"),
            Sexpr::Number { value, .. } => format!("number {value}"),
            Sexpr::Str { text, .. } => format!("string \"{text}\""),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
    /// Position of the most recently consumed character.
    last: (usize, usize),
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';')
}

impl Lexer<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        self.last = (self.line, self.col);
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn here(&self) -> SourceSpan {
        SourceSpan::point(self.line, self.col)
    }

    fn end_span(&self) -> SourceSpan {
        SourceSpan::point(self.last.0, self.last.1)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn atom_text(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if is_delimiter(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn read(&mut self) -> Result<Option<Sexpr>, ParseError> {
        self.skip_trivia();
        let start = self.here();
        let Some(&c) = self.chars.peek() else { return Ok(None) };
        match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => {
                            return Err(ParseError::new(self.end_span(), "unclosed list", &[")"]));
                        }
                        Some(')') => {
                            let close = self.here();
                            self.bump();
                            return Ok(Some(Sexpr::List { items, span: start.to(close), close }));
                        }
                        Some(_) => items.push(self.read()?.expect("input is not exhausted")),
                    }
                }
            }
            ')' => Err(ParseError::new(start, "unexpected `)`", &["(", "value"])),
            '"' => {
                self.bump();
                let mut text = String::new();
                loop {
                    match self.bump() {
                        None => return Err(ParseError::new(start.to(self.end_span()), "unterminated string", &["\""])),
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some(e @ ('"' | '\\')) => text.push(e),
                            _ => return Err(ParseError::new(self.end_span(), "unknown escape in string", &["\\\"", "\\\\"])),
                        },
                        Some(c) => text.push(c),
                    }
                }
                Ok(Some(Sexpr::Str { text, span: start.to(self.end_span()) }))
            }
            _ => {
                let text = self.atom_text();
                let span = start.to(self.end_span());
                if let Some(name) = text.strip_prefix(':') {
                    if name.is_empty() {
                        return Err(ParseError::new(span, "empty keyword", &["keyword"]));
                    }
                    return Ok(Some(Sexpr::Keyword { name: name.to_string(), span }));
                }
                let numeric = text.starts_with(|c: char| c.is_ascii_digit())
                    || (text.starts_with(['-', '.']) && text[1..].starts_with(|c: char| c.is_ascii_digit()));
                if numeric {
                    let value = text
                        .parse::<Num>()
                        .map_err(|e| ParseError::new(span, &e.to_string(), &["number"]))?;
                    return Ok(Some(Sexpr::Number { value, span }));
                }
                Ok(Some(Sexpr::Symbol { text, span }))
            }
        }
    }
}

/// Reads exactly one s-expression from `text`.
pub fn read_sexpr(text: &str) -> Result<Sexpr, ParseError> {
    let mut lexer = Lexer { chars: text.chars().peekable(), line: 1, col: 1, last: (1, 1) };
    let first = lexer
        .read()?
        .ok_or_else(|| ParseError::new(lexer.end_span(), "empty input", &["("]))?;
    if let Some(extra) = lexer.read()? {
        return Err(ParseError::new(extra.span(), "trailing input after the top-level form", &["end of input"]));
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_spans() {
        let s = read_sexpr("(a :k 1.5\n  (\"#FFFFFF\" -2)) ; trailing comment").unwrap();
        let Sexpr::List { items, span, close } = s else { panic!() };
        assert_eq!(span, SourceSpan { start_line: 1, start_col: 1, end_line: 2, end_col: 17 });
        assert_eq!(close, SourceSpan::point(2, 17));
        assert_eq!(items.len(), 4);
        assert!(matches!(&items[1], Sexpr::Keyword { name, .. } if name == "k"));
        assert!(matches!(&items[2], Sexpr::Number { value, .. } if *value == Num::from_f64(1.5)));
        let Sexpr::List { items: inner, .. } = &items[3] else { panic!() };
        assert!(matches!(&inner[0], Sexpr::Str { text, span } if text == "#FFFFFF" && span.start_col == 4));
        assert!(matches!(&inner[1], Sexpr::Number { value, .. } if *value == Num::from_int(-2)));
    }

    #[test]
    fn errors() {
        assert_eq!(read_sexpr("(a (b)").unwrap_err().expected, vec![")"]);
        assert!(read_sexpr(")").is_err());
        assert!(read_sexpr("(a) (b)").is_err());
        assert!(read_sexpr("(a 1x)").is_err());
        assert!(read_sexpr("(a \"open)").is_err());
        assert!(read_sexpr("   ").is_err());
        assert!(read_sexpr("(a :)").is_err());
    }

    #[test]
    fn symbols_may_contain_slashes_and_dashes() {
        let s = read_sexpr("(place-motif user/leaf -x)").unwrap();
        let Sexpr::List { items, .. } = s else { panic!() };
        assert!(matches!(&items[0], Sexpr::Symbol { text, .. } if text == "place-motif"));
        assert!(matches!(&items[1], Sexpr::Symbol { text, .. } if text == "user/leaf"));
        assert!(matches!(&items[2], Sexpr::Symbol { text, .. } if text == "-x"));
    }
}
