//! Tokenizer shared by the Liffig and triple formats.
//!
//! Anything the grammar does not know becomes [`Tok::Other`] instead of an
//! error, so that prose inside assertions can be lexed and later set aside.

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(String),
    Float(f64),
    Colon,
    Assign,
    Semi,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    DotDot,
    Arrow,
    Bar,
    Amp,
    Bang,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Incr,
    Decr,
    Other(char),
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("`{s}`"),
            Tok::Float(x) => format!("`{x}`"),
            Tok::Other(c) => format!("`{c}`"),
            t => format!("`{}`", t.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Colon => ":",
            Tok::Assign => ":=",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::DotDot => "..",
            Tok::Arrow => "->",
            Tok::Bar => "|",
            Tok::Amp => "&",
            Tok::Bang => "!",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::Incr => "++",
            Tok::Decr => "--",
            _ => "?",
        }
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(self, Tok::Ident(x) if x == s)
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    /// Byte range in the lexed text.
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
    /// First token on its source line.
    pub line_start: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct LexOptions {
    /// Treat `{ ... }` as a comment (Liffig) rather than as tokens (triples).
    pub brace_comments: bool,
    pub first_line: u32,
    pub first_col: u32,
}

impl Default for LexOptions {
    fn default() -> Self {
        LexOptions {
            brace_comments: true,
            first_line: 1,
            first_col: 1,
        }
    }
}

pub fn lex(src: &str, opts: LexOptions) -> Vec<Token> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = opts.first_line;
    let mut line_begin = 0usize;
    let mut col_base = opts.first_col;
    let mut fresh_line = true;

    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            i += 1;
            line += 1;
            line_begin = i;
            col_base = 1;
            fresh_line = true;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'/') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c == b'{' && opts.brace_comments {
            let mut depth = 0;
            while i < bytes.len() {
                match bytes[i] {
                    b'{' => depth += 1,
                    b'}' => {
                        depth -= 1;
                        if depth == 0 {
                            i += 1;
                            break;
                        }
                    }
                    b'\n' => {
                        line += 1;
                        line_begin = i + 1;
                        col_base = 1;
                    }
                    _ => {}
                }
                i += 1;
            }
            continue;
        }

        let start = i;
        let col = col_base + src[line_begin..start].chars().count() as u32;
        let two = |a: u8, b: u8| c == a && bytes.get(i + 1) == Some(&b);
        let (tok, len) = if c.is_ascii_alphabetic() || c == b'_' {
            let mut j = i;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            (Tok::Ident(src[i..j].to_string()), j - i)
        } else if c.is_ascii_digit() {
            lex_number(src, i)
        } else if two(b':', b'=') {
            (Tok::Assign, 2)
        } else if two(b'.', b'.') {
            (Tok::DotDot, 2)
        } else if two(b'-', b'>') {
            (Tok::Arrow, 2)
        } else if two(b'!', b'=') {
            (Tok::Ne, 2)
        } else if two(b'<', b'=') {
            (Tok::Le, 2)
        } else if two(b'>', b'=') {
            (Tok::Ge, 2)
        } else if two(b'+', b'+') {
            (Tok::Incr, 2)
        } else if two(b'-', b'-') {
            (Tok::Decr, 2)
        } else {
            let t = match c {
                b':' => Some(Tok::Colon),
                b';' => Some(Tok::Semi),
                b',' => Some(Tok::Comma),
                b'(' => Some(Tok::LParen),
                b')' => Some(Tok::RParen),
                b'[' => Some(Tok::LBracket),
                b']' => Some(Tok::RBracket),
                b'{' => Some(Tok::LBrace),
                b'}' => Some(Tok::RBrace),
                b'|' => Some(Tok::Bar),
                b'&' => Some(Tok::Amp),
                b'!' => Some(Tok::Bang),
                b'=' => Some(Tok::Eq),
                b'<' => Some(Tok::Lt),
                b'>' => Some(Tok::Gt),
                b'+' => Some(Tok::Plus),
                b'-' => Some(Tok::Minus),
                b'*' => Some(Tok::Star),
                b'/' => Some(Tok::Slash),
                b'^' => Some(Tok::Caret),
                _ => None,
            };
            match t {
                Some(t) => (t, 1),
                None => {
                    let ch = src[i..].chars().next().unwrap();
                    (Tok::Other(ch), ch.len_utf8())
                }
            }
        };
        out.push(Token {
            tok,
            start,
            end: start + len,
            line,
            col,
            line_start: fresh_line,
        });
        fresh_line = false;
        i += len;
    }
    out
}

fn lex_number(src: &str, i: usize) -> (Tok, usize) {
    let bytes = src.as_bytes();
    let mut j = i;
    while j < bytes.len() && bytes[j].is_ascii_digit() {
        j += 1;
    }
    let mut is_float = false;
    // `1.5` is a float, `1..n` is an int followed by `..`
    if j + 1 < bytes.len() && bytes[j] == b'.' && bytes[j + 1].is_ascii_digit() {
        is_float = true;
        j += 1;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
    }
    if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
        let mut k = j + 1;
        if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
            k += 1;
        }
        if k < bytes.len() && bytes[k].is_ascii_digit() {
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            is_float = true;
            j = k;
        }
    }
    let text = &src[i..j];
    if is_float {
        (Tok::Float(text.parse().expect("lexed float")), j - i)
    } else {
        (Tok::Int(text.to_string()), j - i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s, LexOptions::default()).into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_and_ranges() {
        assert_eq!(
            toks("a[m..f-1] := --j"),
            vec![
                Tok::Ident("a".into()),
                Tok::LBracket,
                Tok::Ident("m".into()),
                Tok::DotDot,
                Tok::Ident("f".into()),
                Tok::Minus,
                Tok::Int("1".into()),
                Tok::RBracket,
                Tok::Assign,
                Tok::Decr,
                Tok::Ident("j".into()),
            ]
        );
        assert_eq!(toks("1..2 5.0 1e3"), vec![
            Tok::Int("1".into()),
            Tok::DotDot,
            Tok::Int("2".into()),
            Tok::Float(5.0),
            Tok::Float(1000.0),
        ]);
    }

    #[test]
    fn comments_and_positions() {
        let ts = lex("S: x // note\n  if { prose & stuff } true", LexOptions::default());
        let kinds: Vec<_> = ts.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(kinds, vec![
            Tok::Ident("S".into()),
            Tok::Colon,
            Tok::Ident("x".into()),
            Tok::Ident("if".into()),
            Tok::Ident("true".into()),
        ]);
        assert_eq!((ts[3].line, ts[3].col, ts[3].line_start), (2, 3, true));
        assert!(!ts[4].line_start);
    }

    #[test]
    fn braces_are_tokens_for_triples() {
        let opts = LexOptions {
            brace_comments: false,
            ..LexOptions::default()
        };
        let kinds: Vec<_> = lex("{S} skip {A}", opts).into_iter().map(|t| t.tok).collect();
        assert_eq!(kinds[0], Tok::LBrace);
        assert_eq!(kinds[2], Tok::RBrace);
    }

    #[test]
    fn prose_is_lexed() {
        let kinds = toks("i.e. blocked");
        assert!(kinds.contains(&Tok::Other('.')));
    }
}
