//! Line-oriented lexer for model files and scalar expressions.

use num_bigint::BigInt;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    /// `w3` is `(2, false)`, `~w3` is `(2, true)`.
    Coframe(usize, bool),
    Int(BigInt),
    /// An integer written directly against `i`, as in `2i`.
    Imag(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Lt,
    Gt,
    Ne,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Coframe(k, false) => write!(f, "'w{}'", k + 1),
            Tok::Coframe(k, true) => write!(f, "'~w{}'", k + 1),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Imag(n) => write!(f, "'{n}i'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBracket => f.write_str("'['"),
            Tok::RBracket => f.write_str("']'"),
            Tok::Comma => f.write_str("','"),
            Tok::Eq => f.write_str("'='"),
            Tok::Lt => f.write_str("'<'"),
            Tok::Gt => f.write_str("'>'"),
            Tok::Ne => f.write_str("'!='"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spanned {
    pub tok: Tok,
    /// 1-based column of the first character.
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LexError {
    pub col: usize,
    pub found: char,
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Lexes one line; `#` starts a comment.
pub fn lex_line(line: &str) -> Result<Vec<Spanned>, LexError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, col });
            k += 1;
            continue;
        }
        if c == '!' {
            if chars.get(k + 1) == Some(&'=') {
                out.push(Spanned { tok: Tok::Ne, col });
                k += 2;
                continue;
            }
            return Err(LexError { col, found: c });
        }
        if c == '~' {
            let start = k + 1;
            let mut e = start;
            while e < chars.len() && ident_char(chars[e]) {
                e += 1;
            }
            let word: String = chars[start..e].iter().collect();
            match coframe_index(&word) {
                Some(idx) => out.push(Spanned { tok: Tok::Coframe(idx, true), col }),
                None => return Err(LexError { col, found: c }),
            }
            k = e;
            continue;
        }
        if c.is_ascii_digit() {
            let mut e = k;
            while e < chars.len() && chars[e].is_ascii_digit() {
                e += 1;
            }
            let n: BigInt = chars[k..e].iter().collect::<String>().parse().expect("digits");
            let imag = chars.get(e) == Some(&'i') && !chars.get(e + 1).is_some_and(|&c| ident_char(c));
            if imag {
                out.push(Spanned { tok: Tok::Imag(n), col });
                k = e + 1;
            } else if chars.get(e).is_some_and(|&c| ident_char(c)) {
                return Err(LexError { col: e + 1, found: chars[e] });
            } else {
                out.push(Spanned { tok: Tok::Int(n), col });
                k = e;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut e = k;
            while e < chars.len() && ident_char(chars[e]) {
                e += 1;
            }
            let word: String = chars[k..e].iter().collect();
            let tok = match coframe_index(&word) {
                Some(idx) => Tok::Coframe(idx, false),
                None => Tok::Ident(word),
            };
            out.push(Spanned { tok, col });
            k = e;
            continue;
        }
        return Err(LexError { col, found: c });
    }
    Ok(out)
}

/// `w12` is frame index 11; `w0` and `w` are not coframe names.
fn coframe_index(word: &str) -> Option<usize> {
    let digits = word.strip_prefix('w')?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse::<usize>().ok().map(|k| k - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn imaginary_literals_and_coframes() {
        let toks: Vec<Tok> = lex_line("2i/5 + ~w3^w1 - n1").unwrap().into_iter().map(|s| s.tok).collect();
        assert_eq!(toks[0], Tok::Imag(2.into()));
        assert_eq!(toks[4], Tok::Coframe(2, true));
        assert_eq!(toks[6], Tok::Coframe(0, false));
        assert_eq!(toks[8], Tok::Ident("n1".into()));
    }

    #[test]
    fn bad_characters_carry_columns() {
        assert_eq!(lex_line("d w1 = w2 $ w3"), Err(LexError { col: 11, found: '$' }));
        assert_eq!(lex_line("3x").unwrap_err().col, 2);
        assert!(lex_line("~x").is_err());
    }
}
