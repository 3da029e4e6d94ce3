use std::collections::HashMap;

use super::{CmpOp, LinearSum, PetriNet, Predicate, PropertyBinding};
use crate::error::{NetError, ParseError};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, message)
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    /// Place and transition names: letters, digits, `_`, `.` and `-`, not
    /// starting with `-` or a digit.
    fn name(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-')))
            .unwrap_or(rest.len());
        let name = &rest[..len];
        if name.is_empty() || name.starts_with(|c: char| c == '-' || c.is_ascii_digit()) {
            return Err(self.err("expected a name"));
        }
        self.pos += len;
        Ok(name)
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest.find(char::is_whitespace).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && c == '-'))
            .count();
        let value = rest[..len].parse().map_err(|_| self.err("expected an integer"))?;
        self.pos += len;
        Ok(value)
    }
}

/// Reads the line-oriented net format:
///
/// ```text
/// place NAME [init N]
/// trans NAME [in P1:w1,P2:w2] [out P3:w3]
/// atom NAME := EXPR
/// ```
///
/// `#` starts a comment. Places may be declared after their first use.
pub fn parse_net(text: &str) -> Result<(PetriNet, PropertyBinding), NetError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let syntax = |line: usize| move |source: ParseError| NetError::Syntax { line, source };

    let mut places = Vec::new();
    let mut m0 = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for &(line, l) in &lines {
        let mut c = Cursor::new(l);
        if c.word() != "place" {
            continue;
        }
        let name = c.name().map_err(syntax(line))?;
        let mut init = 0;
        if c.eat("init") {
            let n = c.integer().map_err(syntax(line))?;
            init = u32::try_from(n).map_err(|_| NetError::NegativeWeight { line, weight: n })?;
        }
        if !c.at_end() {
            return Err(syntax(line)(c.err("unexpected text after place")));
        }
        if index.insert(name.to_string(), places.len()).is_some() {
            return Err(NetError::Duplicate {
                line,
                kind: "place",
                name: name.to_string(),
            });
        }
        places.push(name.to_string());
        m0.push(init);
    }

    let mut net = PetriNet {
        places,
        transitions: Vec::new(),
        w_minus: Vec::new(),
        w_plus: Vec::new(),
        m0,
    };
    let mut binding = PropertyBinding::default();
    for &(line, l) in &lines {
        let mut c = Cursor::new(l);
        let start = c.pos;
        match c.word() {
            "place" => {}
            "trans" => {
                let name = c.name().map_err(syntax(line))?;
                if net.transitions.iter().any(|t| t == name) {
                    return Err(NetError::Duplicate {
                        line,
                        kind: "transition",
                        name: name.to_string(),
                    });
                }
                let mut w = [vec![0; net.num_places()], vec![0; net.num_places()]];
                for (side, keyword) in ["in", "out"].into_iter().enumerate() {
                    if !c.eat(keyword) {
                        continue;
                    }
                    loop {
                        let p = c.name().map_err(syntax(line))?;
                        let weight = if c.eat(":") { c.integer().map_err(syntax(line))? } else { 1 };
                        let &pi = index.get(p).ok_or_else(|| NetError::UndeclaredPlace {
                            line,
                            name: p.to_string(),
                        })?;
                        let weight = u32::try_from(weight).map_err(|_| NetError::NegativeWeight { line, weight })?;
                        w[side][pi] += weight;
                        if !c.eat(",") {
                            break;
                        }
                    }
                }
                if !c.at_end() {
                    return Err(syntax(line)(c.err("expected `in`, `out` or end of line")));
                }
                let [minus, plus] = w;
                net.transitions.push(name.to_string());
                net.w_minus.push(minus);
                net.w_plus.push(plus);
            }
            "atom" => {
                let name_at = {
                    c.skip_ws();
                    c.pos
                };
                let name = c.name().map_err(syntax(line))?;
                let is_atom = name
                    .chars()
                    .all(|ch| ch.is_ascii_alphanumeric() || ch == '_');
                if !is_atom {
                    return Err(syntax(line)(ParseError::new(name_at, format!("invalid atom name `{name}`"))));
                }
                if binding.get(name).is_some() {
                    return Err(NetError::Duplicate {
                        line,
                        kind: "atom",
                        name: name.to_string(),
                    });
                }
                c.expect(":=").map_err(syntax(line))?;
                let pred = predicate(&mut c).map_err(syntax(line))?;
                if !c.at_end() {
                    return Err(syntax(line)(c.err("unexpected text after expression")));
                }
                pred.compile(&net).map_err(|e| match e {
                    NetError::UndeclaredPlace { name, .. } => NetError::UndeclaredPlace { line, name },
                    other => other,
                })?;
                binding.atoms.push((name.to_string(), pred));
            }
            other => {
                return Err(syntax(line)(ParseError::new(
                    start + l[start..].find(other).unwrap_or(0),
                    format!("unknown declaration `{other}`"),
                )))
            }
        }
    }
    Ok((net, binding))
}

fn predicate(c: &mut Cursor) -> Result<Predicate, ParseError> {
    let mut lhs = conjunction(c)?;
    while c.eat("||") {
        lhs = Predicate::Or(Box::new(lhs), Box::new(conjunction(c)?));
    }
    Ok(lhs)
}

fn conjunction(c: &mut Cursor) -> Result<Predicate, ParseError> {
    let mut lhs = unary(c)?;
    while c.eat("&&") {
        lhs = Predicate::And(Box::new(lhs), Box::new(unary(c)?));
    }
    Ok(lhs)
}

fn unary(c: &mut Cursor) -> Result<Predicate, ParseError> {
    if c.eat("!") {
        return Ok(Predicate::Not(Box::new(unary(c)?)));
    }
    if c.eat("(") {
        let p = predicate(c)?;
        c.expect(")")?;
        return Ok(p);
    }
    if c.eat("true") {
        return Ok(Predicate::Const(true));
    }
    if c.eat("false") {
        return Ok(Predicate::Const(false));
    }
    let lhs = sum(c)?;
    let op = [
        ("<=", CmpOp::Le),
        (">=", CmpOp::Ge),
        ("<", CmpOp::Lt),
        (">", CmpOp::Gt),
        ("=", CmpOp::Eq),
    ]
    .into_iter()
    .find(|(s, _)| c.eat(s))
    .map(|(_, op)| op)
    .ok_or_else(|| c.err("expected a comparison operator"))?;
    let rhs = sum(c)?;
    Ok(Predicate::Cmp(lhs, op, rhs))
}

fn sum(c: &mut Cursor) -> Result<LinearSum, ParseError> {
    let mut s = LinearSum::default();
    let mut sign = if c.eat("-") { -1 } else { 1 };
    loop {
        term(c, sign, &mut s)?;
        if c.eat("+") {
            sign = 1;
        } else if c.eat("-") {
            sign = -1;
        } else {
            return Ok(s);
        }
    }
}

fn term(c: &mut Cursor, sign: i64, s: &mut LinearSum) -> Result<(), ParseError> {
    let coeff = if c.peek().is_some_and(|ch| ch.is_ascii_digit()) {
        let k = c.integer()?;
        if !c.eat("*") {
            s.constant += sign * k;
            return Ok(());
        }
        k
    } else {
        1
    };
    c.expect("m")?;
    c.expect("(")?;
    let p = c.name()?;
    c.expect(")")?;
    s.terms.push((sign * coeff, p.to_string()));
    Ok(())
}
