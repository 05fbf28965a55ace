use crate::textio::ParseDiagnostic;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    LBrace,
    RBrace,
    Comma,
    Colon,
    ColonDash,
    Eq,
    Neq,
    Gt,
    Ge,
    Lt,
    Le,
    DotDot,
    Newline,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(n) => format!("'{n}'"),
            Tok::LBrace => "'{'".to_string(),
            Tok::RBrace => "'}'".to_string(),
            Tok::Comma => "','".to_string(),
            Tok::Colon => "':'".to_string(),
            Tok::ColonDash => "':-'".to_string(),
            Tok::Eq => "'='".to_string(),
            Tok::Neq => "'!='".to_string(),
            Tok::Gt => "'>'".to_string(),
            Tok::Ge => "'>='".to_string(),
            Tok::Lt => "'<'".to_string(),
            Tok::Le => "'<='".to_string(),
            Tok::DotDot => "'..'".to_string(),
            Tok::Newline => "end of line".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Tokenizes the DSL. `#` starts a comment running to the end of the
/// line; newlines are significant and appear as tokens.
pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseDiagnostic> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! push {
        ($tok:expr, $c:expr) => {
            tokens.push(Token {
                tok: $tok,
                line,
                col: $c,
            })
        };
    }

    while let Some(&c) = chars.peek() {
        let start_col = col;
        match c {
            '\n' => {
                chars.next();
                push!(Tok::Newline, start_col);
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '{' => {
                chars.next();
                col += 1;
                push!(Tok::LBrace, start_col);
            }
            '}' => {
                chars.next();
                col += 1;
                push!(Tok::RBrace, start_col);
            }
            ',' => {
                chars.next();
                col += 1;
                push!(Tok::Comma, start_col);
            }
            '=' => {
                chars.next();
                col += 1;
                push!(Tok::Eq, start_col);
            }
            '!' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    push!(Tok::Neq, start_col);
                } else {
                    return Err(ParseDiagnostic::error(
                        line,
                        start_col,
                        "expected '=' after '!'",
                    ));
                }
            }
            '>' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    push!(Tok::Ge, start_col);
                } else {
                    push!(Tok::Gt, start_col);
                }
            }
            '<' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    push!(Tok::Le, start_col);
                } else {
                    push!(Tok::Lt, start_col);
                }
            }
            ':' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'-') {
                    chars.next();
                    col += 1;
                    push!(Tok::ColonDash, start_col);
                } else {
                    push!(Tok::Colon, start_col);
                }
            }
            '.' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'.') {
                    chars.next();
                    col += 1;
                    push!(Tok::DotDot, start_col);
                } else {
                    return Err(ParseDiagnostic::error(
                        line,
                        start_col,
                        "expected '..'",
                    ));
                }
            }
            c if c.is_ascii_digit() || c == '-' => {
                let mut text = String::new();
                text.push(c);
                chars.next();
                col += 1;
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        text.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                match text.parse::<i64>() {
                    Ok(n) => push!(Tok::Int(n), start_col),
                    Err(_) => {
                        return Err(ParseDiagnostic::error(
                            line,
                            start_col,
                            format!("invalid integer '{text}'"),
                        ))
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut text = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        text.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push!(Tok::Ident(text), start_col);
            }
            other => {
                return Err(ParseDiagnostic::error(
                    line,
                    start_col,
                    format!("unexpected character '{other}'"),
                ));
            }
        }
    }
    Ok(tokens)
}
