use super::Ltl;
use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    Eventually,
    Globally,
    Until,
    Release,
    WeakUntil,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(n) => format!("atom `{n}`"),
        Tok::End => "end of input".into(),
        Tok::True => "`true`".into(),
        Tok::False => "`false`".into(),
        Tok::Not => "`!`".into(),
        Tok::And => "`&&`".into(),
        Tok::Or => "`||`".into(),
        Tok::Implies => "`->`".into(),
        Tok::Next => "`X`".into(),
        Tok::Eventually => "`F`".into(),
        Tok::Globally => "`G`".into(),
        Tok::Until => "`U`".into(),
        Tok::Release => "`R`".into(),
        Tok::WeakUntil => "`W`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'!' => {
                i += 1;
                Tok::Not
            }
            b'&' if bytes.get(i + 1) == Some(&b'&') => {
                i += 2;
                Tok::And
            }
            b'|' if bytes.get(i + 1) == Some(&b'|') => {
                i += 2;
                Tok::Or
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Tok::Implies
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &text[start..i] {
                    "G" => Tok::Globally,
                    "F" => Tok::Eventually,
                    "X" => Tok::Next,
                    "U" => Tok::Until,
                    "R" => Tok::Release,
                    "W" => Tok::WeakUntil,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    name => Tok::Ident(name.to_string()),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::new(start, format!("unknown token `{ch}`")));
            }
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self) -> ParseError {
        ParseError::new(self.offset(), format!("unexpected {}", describe(self.peek())))
    }

    fn implication(&mut self) -> Result<Ltl, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Ltl::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Ltl, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Ltl::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Ltl, ParseError> {
        let mut lhs = self.binary_temporal()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Ltl::and(lhs, self.binary_temporal()?);
        }
        Ok(lhs)
    }

    fn binary_temporal(&mut self) -> Result<Ltl, ParseError> {
        let lhs = self.unary()?;
        let op = self.peek().clone();
        match op {
            Tok::Until | Tok::Release | Tok::WeakUntil => {
                self.bump();
                let rhs = self.binary_temporal()?;
                Ok(match op {
                    Tok::Until => Ltl::until(lhs, rhs),
                    Tok::Release => Ltl::release(lhs, rhs),
                    _ => Ltl::weak_until(lhs, rhs),
                })
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Ltl, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Ltl::not(self.unary()?))
            }
            Tok::Next => {
                self.bump();
                Ok(Ltl::next(self.unary()?))
            }
            Tok::Eventually => {
                self.bump();
                Ok(Ltl::eventually(self.unary()?))
            }
            Tok::Globally => {
                self.bump();
                Ok(Ltl::globally(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Ltl, ParseError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Ltl::True)
            }
            Tok::False => {
                self.bump();
                Ok(Ltl::False)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Ltl::Atom(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implication()?;
                if *self.peek() != Tok::RParen {
                    return Err(ParseError::new(
                        self.offset(),
                        format!("expected `)`, found {}", describe(self.peek())),
                    ));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses an LTL formula.
///
/// Precedence from loosest to tightest: `->` (right associative), `||`,
/// `&&`, the binary temporal operators `U`, `R`, `W` (right associative),
/// and the prefix operators `!`, `X`, `F`, `G`. `a W b` is rewritten to
/// `(a U b) || G a`.
pub fn parse(text: &str) -> Result<Ltl, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.implication()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected());
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn globally_atom() {
        assert_eq!(parse("G p").unwrap(), Ltl::globally(Ltl::atom("p")));
    }

    #[test]
    fn until_of_next() {
        assert_eq!(
            parse("p U (X q)").unwrap(),
            Ltl::until(Ltl::atom("p"), Ltl::next(Ltl::atom("q")))
        );
    }

    #[test]
    fn until_needs_left_operand() {
        let e = parse("U p").unwrap_err();
        assert_eq!(e.offset, 0);
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("a || b && c U d -> e").unwrap();
        let expected = Ltl::implies(
            Ltl::or(
                Ltl::atom("a"),
                Ltl::and(Ltl::atom("b"), Ltl::until(Ltl::atom("c"), Ltl::atom("d"))),
            ),
            Ltl::atom("e"),
        );
        assert_eq!(f, expected);
        assert_eq!(
            parse("a U b U c").unwrap(),
            Ltl::until(Ltl::atom("a"), Ltl::until(Ltl::atom("b"), Ltl::atom("c")))
        );
        assert_eq!(
            parse("!a U b").unwrap(),
            Ltl::until(Ltl::not(Ltl::atom("a")), Ltl::atom("b"))
        );
    }

    #[test]
    fn weak_until_is_rewritten() {
        assert_eq!(
            parse("a W b").unwrap(),
            Ltl::or(
                Ltl::until(Ltl::atom("a"), Ltl::atom("b")),
                Ltl::globally(Ltl::atom("a"))
            )
        );
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse("p & q").unwrap_err().offset, 2);
        assert_eq!(parse("(p").unwrap_err().offset, 2);
        assert_eq!(parse("p q").unwrap_err().offset, 2);
        assert_eq!(parse("").unwrap_err().offset, 0);
        assert!(parse("p $ q").unwrap_err().message.contains("unknown token"));
    }

    #[test]
    fn identifiers() {
        assert_eq!(parse("_x1").unwrap(), Ltl::atom("_x1"));
        // reserved letters only stand alone
        assert_eq!(parse("GF").unwrap(), Ltl::atom("GF"));
        assert!(parse("G").is_err());
    }
}
