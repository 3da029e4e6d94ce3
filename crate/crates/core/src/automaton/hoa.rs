//! Reading and writing automata in the HOA v1 format.
//!
//! Only transition-based generalized Büchi acceptance with explicit edge
//! labels is supported. State-based marks are moved onto the outgoing
//! edges. Aliases, alternation, multiple initial states, implicit labels
//! and any other acceptance condition are rejected.

use std::fmt::Write as _;

use super::{Edge, Tgba};
use crate::alphabet::{LetterSet, Marks};
use crate::error::HoaError;

/// Writes `a` as an HOA document.
pub fn to_hoa(a: &Tgba) -> String {
    let mut s = String::new();
    let n_ap = a.ap().len();
    let k = a.acceptance_count();
    writeln!(s, "HOA: v1").unwrap();
    writeln!(s, "States: {}", a.num_states()).unwrap();
    writeln!(s, "Start: {}", a.initial()).unwrap();
    write!(s, "AP: {}", n_ap).unwrap();
    for name in a.ap() {
        write!(s, " \"{name}\"").unwrap();
    }
    s.push('\n');
    if k == 0 {
        writeln!(s, "acc-name: all").unwrap();
        writeln!(s, "Acceptance: 0 t").unwrap();
    } else {
        if k == 1 {
            writeln!(s, "acc-name: Buchi").unwrap();
        } else {
            writeln!(s, "acc-name: generalized-Buchi {k}").unwrap();
        }
        let conds: Vec<String> = (0..k).map(|i| format!("Inf({i})")).collect();
        writeln!(s, "Acceptance: {k} {}", conds.join("&")).unwrap();
    }
    writeln!(s, "properties: trans-labels explicit-labels trans-acc").unwrap();
    writeln!(s, "--BODY--").unwrap();
    for q in 0..a.num_states() {
        writeln!(s, "State: {q}").unwrap();
        for e in a.out(q) {
            write!(s, "[{}] {}", guard_text(e.guard, n_ap), e.dst).unwrap();
            if e.marks != Marks::NONE {
                let marks: Vec<String> = e.marks.iter().map(|m| m.to_string()).collect();
                write!(s, " {{{}}}", marks.join(" ")).unwrap();
            }
            s.push('\n');
        }
    }
    writeln!(s, "--END--").unwrap();
    s
}

fn guard_text(g: LetterSet, n_ap: usize) -> String {
    if g == LetterSet::full(n_ap) {
        return "t".into();
    }
    let cubes: Vec<String> = g
        .iter()
        .map(|v| {
            let lits: Vec<String> = (0..n_ap)
                .map(|i| if v.get(i) { format!("{i}") } else { format!("!{i}") })
                .collect();
            lits.join("&")
        })
        .collect();
    cubes.join(" | ")
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Header(String),
    Ident(String),
    Int(u64),
    Str(String),
    Sym(char),
    Body,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, HoaError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            i += 2;
            while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                if chars[i] == '\n' {
                    line += 1;
                }
                i += 1;
            }
            i += 2;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            while i < chars.len() && chars[i] != '"' {
                if chars[i] == '\\' {
                    i += 1;
                }
                if let Some(&ch) = chars.get(i) {
                    s.push(ch);
                }
                i += 1;
            }
            if i >= chars.len() {
                return Err(HoaError::Syntax {
                    line,
                    message: "unterminated string".into(),
                });
            }
            i += 1;
            out.push((line, Tok::Str(s)));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse().map_err(|_| HoaError::Syntax {
                line,
                message: format!("integer `{s}` out of range"),
            })?;
            out.push((line, Tok::Int(v)));
        } else if c == '-' && chars[i..].starts_with(&['-', '-']) {
            let start = i;
            while i < chars.len() && (chars[i] == '-' || chars[i].is_ascii_alphabetic()) {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            match s.as_str() {
                "--BODY--" => out.push((line, Tok::Body)),
                "--END--" => out.push((line, Tok::End)),
                "--ABORT--" => {
                    return Err(HoaError::Unsupported("--ABORT--".into()));
                }
                _ => {
                    return Err(HoaError::Syntax {
                        line,
                        message: format!("unknown marker `{s}`"),
                    })
                }
            }
        } else if c.is_ascii_alphabetic() || c == '_' || c == '@' {
            let start = i;
            i += 1;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '-')
            {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if chars.get(i) == Some(&':') {
                i += 1;
                out.push((line, Tok::Header(s)));
            } else {
                out.push((line, Tok::Ident(s)));
            }
        } else {
            out.push((line, Tok::Sym(c)));
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map(|t| t.0)
            .unwrap_or(1)
    }

    fn err(&self, message: impl Into<String>) -> HoaError {
        HoaError::Syntax {
            line: self.line(),
            message: message.into(),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn int(&mut self) -> Result<u64, HoaError> {
        match self.next() {
            Some(Tok::Int(v)) => Ok(v),
            _ => {
                self.pos -= 1;
                Err(self.err("expected an integer"))
            }
        }
    }

    fn sym(&mut self, c: char) -> Result<(), HoaError> {
        match self.next() {
            Some(Tok::Sym(d)) if d == c => Ok(()),
            _ => {
                self.pos -= 1;
                Err(self.err(format!("expected `{c}`")))
            }
        }
    }

    /// Skips the arguments of an ignored header.
    fn skip_args(&mut self) {
        while let Some(t) = self.peek() {
            if matches!(t, Tok::Header(_) | Tok::Body) {
                break;
            }
            self.pos += 1;
        }
    }

    fn label(&mut self, n_ap: usize) -> Result<LetterSet, HoaError> {
        let mut acc = self.conj(n_ap)?;
        while self.peek() == Some(&Tok::Sym('|')) {
            self.pos += 1;
            acc = acc.union(self.conj(n_ap)?);
        }
        Ok(acc)
    }

    fn conj(&mut self, n_ap: usize) -> Result<LetterSet, HoaError> {
        let mut acc = self.atom(n_ap)?;
        while self.peek() == Some(&Tok::Sym('&')) {
            self.pos += 1;
            acc = acc.intersect(self.atom(n_ap)?);
        }
        Ok(acc)
    }

    fn atom(&mut self, n_ap: usize) -> Result<LetterSet, HoaError> {
        match self.next() {
            Some(Tok::Sym('!')) => Ok(self.atom(n_ap)?.complement(n_ap)),
            Some(Tok::Sym('(')) => {
                let g = self.label(n_ap)?;
                self.sym(')')?;
                Ok(g)
            }
            Some(Tok::Ident(s)) if s == "t" => Ok(LetterSet::full(n_ap)),
            Some(Tok::Ident(s)) if s == "f" => Ok(LetterSet::EMPTY),
            Some(Tok::Ident(s)) if s.starts_with('@') => {
                Err(HoaError::Unsupported(format!("alias {s}")))
            }
            Some(Tok::Int(v)) if (v as usize) < n_ap => {
                Ok(LetterSet::literal(n_ap, v as usize, true))
            }
            Some(Tok::Int(v)) => Err(self.err(format!("proposition {v} out of range"))),
            _ => {
                self.pos -= 1;
                Err(self.err("malformed label"))
            }
        }
    }

    fn marks(&mut self, k: u32) -> Result<Marks, HoaError> {
        let mut m = Marks::NONE;
        if self.peek() != Some(&Tok::Sym('{')) {
            return Ok(m);
        }
        self.pos += 1;
        loop {
            match self.next() {
                Some(Tok::Sym('}')) => return Ok(m),
                Some(Tok::Int(v)) if (v as u32) < k => m = m.union(Marks::single(v as u32)),
                Some(Tok::Int(v)) => {
                    self.pos -= 1;
                    return Err(self.err(format!("mark {v} outside the acceptance set")));
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.err("malformed mark set"));
                }
            }
        }
    }
}

/// Parses the generalized Büchi condition `Inf(0)&...&Inf(k-1)` (or `t`).
fn acceptance(p: &mut Parser) -> Result<u32, HoaError> {
    let k = p.int()? as u32;
    if k > 32 {
        return Err(HoaError::Unsupported(format!("{k} acceptance sets")));
    }
    if k == 0 {
        match p.next() {
            Some(Tok::Ident(s)) if s == "t" => return Ok(0),
            _ => return Err(HoaError::Unsupported("acceptance other than `t` with 0 sets".into())),
        }
    }
    let mut seen = vec![false; k as usize];
    loop {
        match p.next() {
            Some(Tok::Ident(s)) if s == "Inf" => {}
            Some(Tok::Ident(s)) => {
                return Err(HoaError::Unsupported(format!("acceptance primitive {s}")))
            }
            _ => {
                p.pos -= 1;
                return Err(p.err("malformed acceptance condition"));
            }
        }
        p.sym('(')?;
        let i = p.int()? as usize;
        p.sym(')')?;
        if i >= seen.len() {
            return Err(p.err(format!("acceptance set {i} out of range")));
        }
        seen[i] = true;
        if p.peek() == Some(&Tok::Sym('&')) {
            p.pos += 1;
            continue;
        }
        if matches!(p.peek(), Some(Tok::Sym('|'))) {
            return Err(HoaError::Unsupported("disjunctive acceptance".into()));
        }
        break;
    }
    if seen.iter().any(|&s| !s) {
        return Err(HoaError::Unsupported(
            "acceptance sets not all required infinitely often".into(),
        ));
    }
    Ok(k)
}

/// Parses an HOA document with transition-based generalized Büchi
/// acceptance.
pub fn from_hoa(text: &str) -> Result<Tgba, HoaError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    match (p.next(), p.next()) {
        (Some(Tok::Header(h)), Some(Tok::Ident(v))) if h == "HOA" && v == "v1" => {}
        _ => return Err(HoaError::Syntax { line: 1, message: "expected `HOA: v1`".into() }),
    }
    let mut states: Option<usize> = None;
    let mut start: Option<usize> = None;
    let mut ap: Vec<String> = Vec::new();
    let mut k: Option<u32> = None;
    loop {
        match p.next() {
            Some(Tok::Body) => break,
            Some(Tok::Header(h)) => match h.as_str() {
                "States" => states = Some(p.int()? as usize),
                "Start" => {
                    if start.is_some() {
                        return Err(HoaError::Unsupported("multiple initial states".into()));
                    }
                    start = Some(p.int()? as usize);
                    if p.peek() == Some(&Tok::Sym('&')) {
                        return Err(HoaError::Unsupported("alternating initial states".into()));
                    }
                }
                "AP" => {
                    let n = p.int()? as usize;
                    for _ in 0..n {
                        match p.next() {
                            Some(Tok::Str(s)) => ap.push(s),
                            _ => {
                                p.pos -= 1;
                                return Err(p.err("expected a quoted proposition name"));
                            }
                        }
                    }
                }
                "Acceptance" => k = Some(acceptance(&mut p)?),
                "Alias" => return Err(HoaError::Unsupported("Alias".into())),
                "acc-name" | "name" | "tool" | "properties" | "Start-init" => p.skip_args(),
                other if other.chars().next().is_some_and(|c| c.is_lowercase()) => p.skip_args(),
                other => return Err(HoaError::Unsupported(format!("header {other}"))),
            },
            _ => {
                p.pos -= 1;
                return Err(p.err("expected a header or --BODY--"));
            }
        }
    }
    let k = k.ok_or_else(|| p.err("missing Acceptance header"))?;
    let n_ap = ap.len();
    if n_ap > crate::alphabet::MAX_AP {
        return Err(crate::error::AutomatonError::TooManyAps(n_ap).into());
    }
    let mut edges = Vec::new();
    let mut max_state = 0usize;
    loop {
        match p.next() {
            Some(Tok::End) => break,
            Some(Tok::Header(h)) if h == "State" => {
                if p.peek() == Some(&Tok::Sym('[')) {
                    return Err(HoaError::Unsupported("state labels".into()));
                }
                let q = p.int()? as usize;
                max_state = max_state.max(q + 1);
                if let Some(Tok::Str(_)) = p.peek() {
                    p.pos += 1;
                }
                let state_marks = p.marks(k)?;
                while p.peek() == Some(&Tok::Sym('[')) {
                    p.pos += 1;
                    let guard = p.label(n_ap)?;
                    p.sym(']')?;
                    let dst = p.int()? as usize;
                    if p.peek() == Some(&Tok::Sym('&')) {
                        return Err(HoaError::Unsupported("universal branching".into()));
                    }
                    let marks = p.marks(k)?.union(state_marks);
                    max_state = max_state.max(dst + 1);
                    edges.push(Edge { src: q, dst, guard, marks });
                }
                if matches!(p.peek(), Some(Tok::Int(_))) {
                    return Err(HoaError::Unsupported("implicit labels".into()));
                }
            }
            _ => {
                p.pos -= 1;
                return Err(p.err("expected `State:` or --END--"));
            }
        }
    }
    let n = states.unwrap_or(max_state).max(max_state).max(1);
    let start = start.unwrap_or(0);
    Ok(Tgba::new(ap, n, start, k, edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::ltl::parse;
    use crate::translate::translate;

    #[test]
    fn round_trip() {
        for f in ["G F p && G F q", "p U (X q)", "false", "true"] {
            let a = translate(&parse(f).unwrap(), &Limits::default()).unwrap();
            let text = to_hoa(&a);
            assert_eq!(from_hoa(&text).unwrap(), a, "{text}");
        }
    }

    #[test]
    fn state_marks_move_to_edges() {
        let text = "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"p\"\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0 {0}\n[0] 0\n--END--\n";
        let a = from_hoa(text).unwrap();
        assert_eq!(a.out(0)[0].marks, Marks::single(0));
    }

    #[test]
    fn unsupported_features() {
        let parity = "HOA: v1\nStates: 1\nStart: 0\nAP: 0\nAcceptance: 1 Fin(0)\n--BODY--\n--END--\n";
        assert!(matches!(from_hoa(parity), Err(HoaError::Unsupported(_))));
        let implicit = "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"p\"\nAcceptance: 0 t\n--BODY--\nState: 0\n0 0\n--END--\n";
        assert!(matches!(from_hoa(implicit), Err(HoaError::Unsupported(_))));
        let alias = "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"p\"\nAlias: @a 0\nAcceptance: 0 t\n--BODY--\n--END--\n";
        assert!(matches!(from_hoa(alias), Err(HoaError::Unsupported(_))));
    }
}
