use super::{DslError, DslErrorKind, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Prime,
    Ring,
    Map,
    Check,
    Invert,
    In,
    Eq,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Slash,
    Comma,
    Colon,
    Arrow,
    Plus,
    Minus,
    Star,
    Caret,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(v) => format!("integer `{v}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.text()),
        }
    }

    pub fn text(&self) -> &'static str {
        match self {
            Tok::Prime => "prime",
            Tok::Ring => "ring",
            Tok::Map => "map",
            Tok::Check => "check",
            Tok::Invert => "invert",
            Tok::In => "in",
            Tok::Eq => "=",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Slash => "/",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Arrow => "->",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Caret => "^",
            Tok::Ident(_) | Tok::Int(_) | Tok::Eof => "",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, DslError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    let (mut line, mut line_start) = (1usize, 0usize);
    let span = |start: usize, end: usize, line: usize, line_start: usize| Span {
        start,
        end,
        line,
        col: src[line_start..start].chars().count() + 1,
    };
    while let Some(&(i, c)) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            line_start = i + 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                chars.next();
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + 1;
                chars.next();
            }
            let sp = span(i, end, line, line_start);
            let value = src[i..end]
                .parse::<u64>()
                .map_err(|_| DslError::new(DslErrorKind::Syntax("integer literal out of range".into()), sp))?;
            out.push(Token { tok: Tok::Int(value), span: sp });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_' || d == '\'') {
                    break;
                }
                end = j + d.len_utf8();
                chars.next();
            }
            let word = &src[i..end];
            let tok = match word {
                "prime" => Tok::Prime,
                "ring" => Tok::Ring,
                "map" => Tok::Map,
                "check" => Tok::Check,
                "invert" => Tok::Invert,
                "in" => Tok::In,
                _ => Tok::Ident(word.to_string()),
            };
            out.push(Token { tok, span: span(i, end, line, line_start) });
            continue;
        }
        chars.next();
        let tok = match c {
            '=' => Tok::Eq,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '/' => Tok::Slash,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '-' => {
                if chars.peek().is_some_and(|&(_, d)| d == '>') {
                    chars.next();
                    out.push(Token { tok: Tok::Arrow, span: span(i, i + 2, line, line_start) });
                    continue;
                }
                Tok::Minus
            }
            other => {
                return Err(DslError::new(
                    DslErrorKind::Syntax(format!("unexpected character `{other}`")),
                    span(i, i + other.len_utf8(), line, line_start),
                ))
            }
        };
        out.push(Token { tok, span: span(i, i + c.len_utf8(), line, line_start) });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span(src.len(), src.len(), line, line_start),
    });
    Ok(out)
}
