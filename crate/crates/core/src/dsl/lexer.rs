//! Tokenizer shared by the problem and tree grammars.

use super::{ParseDiagnostic, Severity};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident,
    Number,
    Sym(char),
    /// Line break outside any `{}` or `[]`.
    Newline,
    Eof,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub text: String,
    pub line: usize,
    pub col: usize,
}

impl Token {
    pub fn is_sym(&self, c: char) -> bool {
        self.tok == Tok::Sym(c)
    }

    pub fn is_word(&self, w: &str) -> bool {
        self.tok == Tok::Ident && self.text == w
    }

    pub fn describe(&self) -> String {
        match self.tok {
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
            _ => format!("`{}`", self.text),
        }
    }
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

/// Splits `text` into tokens. Unknown characters become diagnostics and
/// are skipped.
pub(crate) fn lex(text: &str) -> (Vec<Token>, Vec<ParseDiagnostic>) {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut diags = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut depth = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok: Tok, s: String| tokens.push(Token { tok, text: s, line: start_line, col: start_col });
        if c == '\n' {
            if depth == 0 {
                push(Tok::Newline, "\n".into());
            }
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
                col += 1;
            }
            continue;
        }
        if ident_start(c) {
            let s: String = chars[i..].iter().take_while(|&&ch| ident_char(ch)).collect();
            let n = s.chars().count();
            push(Tok::Ident, s);
            i += n;
            col += n;
            continue;
        }
        let signed_digit = (c == '-' || c == '+') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit());
        if c.is_ascii_digit() || signed_digit {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '/' || chars[j] == '.') {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            push(Tok::Number, s);
            col += j - i;
            i = j;
            continue;
        }
        match c {
            '{' | '[' => depth += 1,
            '}' | ']' => depth = depth.saturating_sub(1),
            _ => {}
        }
        if matches!(c, '{' | '}' | '[' | ']' | ':' | '=' | ',') {
            push(Tok::Sym(c), c.to_string());
        } else {
            diags.push(ParseDiagnostic {
                severity: Severity::Error,
                line,
                column: col,
                message: format!("unexpected character `{}`", c.escape_debug()),
                token: c.to_string(),
            });
        }
        i += 1;
        col += 1;
    }
    tokens.push(Token { tok: Tok::Eof, text: String::new(), line, col });
    (tokens, diags)
}

/// Cursor over tokens with positioned error helpers.
pub(crate) struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
}

pub(crate) type PResult<T> = std::result::Result<T, ParseDiagnostic>;

impl Cursor {
    pub fn new(tokens: Vec<Token>) -> Self {
        Cursor { tokens, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    pub fn next(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    pub fn error_at(t: &Token, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            severity: Severity::Error,
            line: t.line,
            column: t.col,
            message: message.into(),
            token: t.text.clone(),
        }
    }

    pub fn expect_sym(&mut self, c: char) -> PResult<Token> {
        let t = self.next();
        if t.is_sym(c) {
            Ok(t)
        } else {
            Err(Self::error_at(&t, format!("expected `{c}`, found {}", t.describe())))
        }
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().is_sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_ident(&mut self, what: &str) -> PResult<Token> {
        let t = self.next();
        if t.tok == Tok::Ident {
            Ok(t)
        } else {
            Err(Self::error_at(&t, format!("expected {what}, found {}", t.describe())))
        }
    }

    pub fn expect_word(&mut self, w: &str) -> PResult<Token> {
        let t = self.next();
        if t.is_word(w) {
            Ok(t)
        } else {
            Err(Self::error_at(&t, format!("expected `{w}`, found {}", t.describe())))
        }
    }

    pub fn expect_number(&mut self) -> PResult<(Token, crate::rational::Q)> {
        let t = self.next();
        if t.tok != Tok::Number {
            return Err(Self::error_at(&t, format!("expected a number, found {}", t.describe())));
        }
        match crate::rational::parse_q(&t.text) {
            Some(v) => Ok((t, v)),
            None => Err(Self::error_at(&t, format!("malformed number `{}`", t.text))),
        }
    }

    pub fn skip_newlines(&mut self) {
        while self.peek().tok == Tok::Newline {
            self.next();
        }
    }

    /// Skips to just past the next top-level line break.
    pub fn recover(&mut self) {
        while !matches!(self.peek().tok, Tok::Newline | Tok::Eof) {
            self.next();
        }
        self.skip_newlines();
    }

    pub fn end_statement(&mut self) -> PResult<()> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Newline | Tok::Eof => {
                self.skip_newlines();
                Ok(())
            }
            _ => Err(Self::error_at(&t, format!("expected end of line, found {}", t.describe()))),
        }
    }
}
