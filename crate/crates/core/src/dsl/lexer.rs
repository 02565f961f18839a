use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Numeric literal with its source text and optional unit suffix.
    Number { value: f64, text: String },
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Assign,
    Lt,
    Gt,
    Le,
    Ge,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number { text, .. } => format!("number `{text}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Assign => "`=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Ge => "`>=`".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Tokenizes one source line. `#` starts a comment that runs to the end of
/// the line. Columns are 1-based character offsets.
pub fn lex_line(text: &str, line: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Assign),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, line, column });
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '<' || c == '>' {
            let eq = chars.get(i + 1) == Some(&'=');
            let tok = match (c, eq) {
                ('<', false) => Tok::Lt,
                ('<', true) => Tok::Le,
                ('>', false) => Tok::Gt,
                _ => Tok::Ge,
            };
            out.push(Token { tok, line, column });
            i += if eq { 2 } else { 1 };
            continue;
        }
        let starts_number = c.is_ascii_digit()
            || c == '.'
            || (c == '-' && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit() || *n == '.'));
        if starts_number {
            let start = i;
            i += 1;
            while i < chars.len()
                && (chars[i].is_ascii_digit()
                    || chars[i] == '.'
                    || ((chars[i] == 'e' || chars[i] == 'E')
                        && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit() || *n == '-' || *n == '+'))
                    || ((chars[i] == '-' || chars[i] == '+') && matches!(chars[i - 1], 'e' | 'E')))
            {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let value: f64 = digits.parse().map_err(|_| ParseError {
                line,
                column,
                message: format!("malformed number `{digits}`"),
                expected: vec!["number".into()],
            })?;
            // unit suffix glued to the literal
            let suffix_start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let suffix: String = chars[suffix_start..i].iter().collect();
            if !matches!(suffix.as_str(), "" | "deg" | "rad") {
                return Err(ParseError {
                    line,
                    column: suffix_start + 1,
                    message: format!("unknown unit suffix `{suffix}`"),
                    expected: vec!["`deg`".into(), "`rad`".into()],
                });
            }
            out.push(Token {
                tok: Tok::Number { value, text },
                line,
                column,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line,
                column,
            });
            continue;
        }
        return Err(ParseError {
            line,
            column,
            message: format!("unexpected character `{c}`"),
            expected: Vec::new(),
        });
    }
    Ok(out)
}
