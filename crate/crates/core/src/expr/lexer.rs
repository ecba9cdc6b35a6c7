use super::ExprError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Identifier,
    Operator,
    LeftParen,
    RightParen,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// Character offset of the first character of the lexeme.
    pub offset: usize,
}

/// Splits source text into tokens. Whitespace separates tokens and is dropped.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;

    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let kind = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' | '-' | '*' | '/' | '^' => {
                i += 1;
                TokenKind::Operator
            }
            '(' => {
                i += 1;
                TokenKind::LeftParen
            }
            ')' => {
                i += 1;
                TokenKind::RightParen
            }
            ',' => {
                i += 1;
                TokenKind::Comma
            }
            c if c.is_ascii_digit() || (c == '.' && next_is_digit(&chars, i + 1)) => {
                i = scan_number(&chars, i);
                TokenKind::Number
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                TokenKind::Identifier
            }
            ch => return Err(ExprError::Lexical { offset: i, ch }),
        };
        tokens.push(Token {
            kind,
            lexeme: chars[start..i].iter().collect(),
            offset: start,
        });
    }
    Ok(tokens)
}

fn next_is_digit(chars: &[char], i: usize) -> bool {
    chars.get(i).is_some_and(|c| c.is_ascii_digit())
}

fn scan_number(chars: &[char], mut i: usize) -> usize {
    while next_is_digit(chars, i) {
        i += 1;
    }
    if chars.get(i) == Some(&'.') {
        i += 1;
        while next_is_digit(chars, i) {
            i += 1;
        }
    }
    // Exponent only when digits follow, otherwise `e` starts an identifier.
    if matches!(chars.get(i), Some('e' | 'E')) {
        let mut j = i + 1;
        if matches!(chars.get(j), Some('+' | '-')) {
            j += 1;
        }
        if next_is_digit(chars, j) {
            i = j;
            while next_is_digit(chars, i) {
                i += 1;
            }
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.lexeme))
            .collect()
    }

    #[test]
    fn lexes_power() {
        use TokenKind::*;
        assert_eq!(
            kinds("r^2"),
            vec![
                (Identifier, "r".into()),
                (Operator, "^".into()),
                (Number, "2".into())
            ]
        );
    }

    #[test]
    fn lexes_call() {
        use TokenKind::*;
        let got: Vec<_> = kinds("sin(x)+1").into_iter().map(|(k, _)| k).collect();
        assert_eq!(
            got,
            vec![Identifier, LeftParen, Identifier, RightParen, Operator, Number]
        );
    }

    #[test]
    fn rejects_foreign_character_with_offset() {
        assert_eq!(
            tokenize("3 $ 4"),
            Err(ExprError::Lexical { offset: 2, ch: '$' })
        );
    }

    #[test]
    fn scientific_literals() {
        let toks = tokenize("1.5e-3*x_dot + .25").unwrap();
        assert_eq!(toks[0].lexeme, "1.5e-3");
        assert_eq!(toks[2].lexeme, "x_dot");
        assert_eq!(toks[4].lexeme, ".25");
        // offsets strictly increase
        assert!(toks.windows(2).all(|w| w[0].offset < w[1].offset));
    }

    #[test]
    fn dangling_exponent_marker_is_identifier() {
        let toks = tokenize("2e").unwrap();
        assert_eq!(toks.len(), 2);
        assert_eq!(toks[1].kind, TokenKind::Identifier);
    }
}
