//! Recursive-descent parser.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' exponent)?
//! exponent:= ['-' | '+'] INTEGER | '(' ['-' | '+'] INTEGER ')'
//! primary := NUMBER | 'u' | 't' | 'pi' | FUNC '(' expr ')' | '(' expr ')'
//! FUNC    := 'sin' | 'cos' | 'exp' | 'sqrt'
//! ```

use thiserror::Error;

use super::{AnalyticExpr, Func, Node};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("exponent at byte {offset} is not an integer")]
    NonIntegerExponent { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::NonIntegerExponent { offset } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: f64, integral: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (tok, at) = lx.next()?;
            let end = tok == Tok::End;
            out.push((tok, at));
            if end {
                return Ok(out);
            }
        }
    }

    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        let single = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((t, start));
        }
        if b.is_ascii_digit() || b == b'.' {
            return self.number(start);
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self.pos < bytes.len()
                && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
            {
                self.pos += 1;
            }
            return Ok((Tok::Ident(self.src[start..self.pos].to_string()), start));
        }
        let ch = self.src[start..].chars().next().unwrap_or('?');
        Err(ParseError::Syntax {
            offset: start,
            message: format!("unexpected character `{ch}`"),
        })
    }

    fn number(&mut self, start: usize) -> Result<(Tok, usize), ParseError> {
        let bytes = self.src.as_bytes();
        let digits = |pos: &mut usize| {
            let s = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            *pos - s
        };
        let mut integral = true;
        let mut n = digits(&mut self.pos);
        if self.pos < bytes.len() && bytes[self.pos] == b'.' {
            integral = false;
            self.pos += 1;
            n += digits(&mut self.pos);
        }
        if n == 0 {
            return Err(ParseError::Syntax {
                offset: start,
                message: "malformed number".into(),
            });
        }
        if self.pos < bytes.len() && (bytes[self.pos] == b'e' || bytes[self.pos] == b'E') {
            let mut p = self.pos + 1;
            if p < bytes.len() && (bytes[p] == b'+' || bytes[p] == b'-') {
                p += 1;
            }
            if digits(&mut p) == 0 {
                return Err(ParseError::Syntax {
                    offset: self.pos,
                    message: "malformed exponent in number".into(),
                });
            }
            integral = false;
            self.pos = p;
        }
        let text = &self.src[start..self.pos];
        let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })?;
        Ok((Tok::Num { value, integral }, start))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn offset(&self) -> usize {
        self.toks[self.idx].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn unexpected(&self, what: &str) -> ParseError {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            t => format!("{t:?}"),
        };
        ParseError::Syntax {
            offset: self.offset(),
            message: format!("expected {what}, found {found}"),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp = self.exponent()?;
        Ok(Node::Pow(Box::new(base), exp))
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let mut sign = 1i64;
        match self.peek() {
            Tok::Minus => {
                sign = -1;
                self.bump();
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        let at = self.offset();
        let value = match self.peek().clone() {
            Tok::Num { value, integral } => {
                self.bump();
                if !integral || value.fract() != 0.0 || value > i32::MAX as f64 {
                    return Err(ParseError::NonIntegerExponent { offset: at });
                }
                sign * value as i64
            }
            Tok::End
            | Tok::RParen
            | Tok::Star
            | Tok::Slash
            | Tok::Caret
            | Tok::Plus
            | Tok::Minus => return Err(self.unexpected("integer exponent")),
            Tok::Ident(_) | Tok::LParen => {
                return Err(ParseError::NonIntegerExponent { offset: at })
            }
        };
        if paren {
            self.expect(Tok::RParen, "`)` closing the exponent")?;
        }
        Ok(value as i32)
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Num { value, .. } => {
                self.bump();
                Ok(Node::Const(value))
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "u" | "t" => Ok(Node::Var),
                    "pi" => Ok(Node::Const(std::f64::consts::PI)),
                    _ => match Func::from_name(&name) {
                        Some(func) => {
                            self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
                            let arg = self.expr()?;
                            self.expect(Tok::RParen, "`)`")?;
                            Ok(Node::Call(func, Box::new(arg)))
                        }
                        None => Err(ParseError::UnknownIdentifier { name, offset: at }),
                    },
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, variable, function or `(`")),
        }
    }
}

/// Parses an expression in the variable `u` (or `t`).
pub fn parse_expr(text: &str) -> Result<AnalyticExpr, ParseError> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser { toks, idx: 0 };
    let node = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(AnalyticExpr::from_node(node))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: Node) -> Box<Node> {
        Box::new(n)
    }

    #[test]
    fn single_call() {
        let e = parse_expr("sin(u)").unwrap();
        assert_eq!(*e.node(), Node::Call(Func::Sin, b(Node::Var)));
    }

    #[test]
    fn cubic_curve_component() {
        let e = parse_expr("u - u^3/3").unwrap();
        let expect = Node::Sub(
            b(Node::Var),
            b(Node::Div(
                b(Node::Pow(b(Node::Var), 3)),
                b(Node::Const(3.0)),
            )),
        );
        assert_eq!(*e.node(), expect);
    }

    #[test]
    fn incomplete_input_reports_offset() {
        let err = parse_expr("u + ").unwrap_err();
        assert!(
            matches!(err, ParseError::Syntax { offset: 4, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn unknown_identifier() {
        let err = parse_expr("2*tan(u)").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownIdentifier {
                name: "tan".into(),
                offset: 2
            }
        );
    }

    #[test]
    fn non_integer_exponents_rejected() {
        assert_eq!(
            parse_expr("u^1.5").unwrap_err(),
            ParseError::NonIntegerExponent { offset: 2 }
        );
        assert!(matches!(
            parse_expr("u^u").unwrap_err(),
            ParseError::NonIntegerExponent { .. }
        ));
        assert!(matches!(
            parse_expr("u^(1+1)").unwrap_err(),
            ParseError::Syntax { .. }
        ));
    }

    #[test]
    fn precedence_and_signs() {
        let e = parse_expr("-u^2").unwrap();
        assert_eq!(*e.node(), Node::Neg(b(Node::Pow(b(Node::Var), 2))));
        let e = parse_expr("u^-2 + u^(+3)").unwrap();
        assert_eq!(
            *e.node(),
            Node::Add(
                b(Node::Pow(b(Node::Var), -2)),
                b(Node::Pow(b(Node::Var), 3))
            )
        );
        let e = parse_expr("1 - 2 - 3").unwrap();
        assert_eq!(e.eval_real(0.0).unwrap(), -4.0);
        let e = parse_expr("2*t*1.5e1").unwrap();
        assert_eq!(e.eval_real(1.0).unwrap(), 30.0);
    }

    #[test]
    fn trailing_garbage() {
        assert!(matches!(
            parse_expr("u u").unwrap_err(),
            ParseError::Syntax { offset: 2, .. }
        ));
        assert!(matches!(
            parse_expr("sin u").unwrap_err(),
            ParseError::Syntax { offset: 4, .. }
        ));
        assert!(matches!(
            parse_expr("(u").unwrap_err(),
            ParseError::Syntax { offset: 2, .. }
        ));
        assert!(matches!(
            parse_expr("u # 2").unwrap_err(),
            ParseError::Syntax { offset: 2, .. }
        ));
    }
}
