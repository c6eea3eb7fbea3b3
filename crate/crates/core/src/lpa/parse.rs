//! Element syntax: sums and products of `P[v]`, `S[e1,e2,…]`, `S*[…]`,
//! integers and `u^k`, with parentheses and nonnegative powers `(…)^n`.
//! Example: `2*u^-1*S[e1,e2]*S*[e3] + P[v0]`.

use std::sync::Arc;

use super::algebra::{Lpa, LpaElement};
use super::laurent::Laurent;
use super::LpaError;

pub fn parse_element(lpa: &Arc<Lpa>, text: &str) -> Result<LpaElement, LpaError> {
    let mut p = Parser { lpa, chars: text.char_indices().collect(), pos: 0, len: text.len() };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    lpa: &'a Arc<Lpa>,
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(o, _)| o)
    }

    fn error(&self, msg: &str) -> LpaError {
        LpaError::Parse { pos: self.offset(), msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    /// Character right after the current one, whitespace skipped.
    fn peek_second(&self) -> Option<char> {
        self.chars[self.pos + 1..].iter().map(|&(_, c)| c).find(|c| !c.is_whitespace())
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), LpaError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<LpaElement, LpaError> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LpaElement, LpaError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LpaElement, LpaError> {
        if self.eat('-') {
            return Ok(-self.factor()?);
        }
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let k = self.integer()?;
        if k < 0 {
            return Err(self.error("negative powers are only allowed on `u`"));
        }
        let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
        Ok(base.pow(k))
    }

    fn atom(&mut self) -> Result<LpaElement, LpaError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(LpaElement::constant(self.lpa, n))
            }
            Some('u') => {
                self.pos += 1;
                let k = if self.eat('^') { self.integer()? } else { 1 };
                Ok(LpaElement::one(self.lpa).scale(&Laurent::u_pow(k)))
            }
            Some('P') => {
                self.pos += 1;
                let ids = self.bracket_ids()?;
                let [id] = ids.as_slice() else {
                    return Err(self.error("`P[...]` takes exactly one vertex"));
                };
                let g = self.lpa.graph();
                let v = g.vertex(id).map_err(|_| LpaError::UndefinedGenerator(format!("P[{id}]")))?;
                Ok(LpaElement::vertex(self.lpa, v))
            }
            Some('S') => {
                self.pos += 1;
                let starred = self.peek() == Some('*') && self.peek_second() == Some('[');
                if starred {
                    self.pos += 1;
                }
                let ids = self.bracket_ids()?;
                if ids.is_empty() {
                    return Err(self.error("empty path"));
                }
                let g = self.lpa.graph();
                let edges = ids
                    .iter()
                    .map(|id| g.find_edge(id).map_err(|_| LpaError::UndefinedGenerator(format!("S[{id}]"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let path = g.path_from_edges(0, edges).map_err(|e| LpaError::Parse {
                    pos: self.offset(),
                    msg: e.to_string(),
                })?;
                let s = LpaElement::path(self.lpa, &path);
                Ok(if starred { s.star() } else { s })
            }
            Some(c) => Err(self.error(&format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<i64, LpaError> {
        let neg = self.eat('-');
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        let n: i64 = s.parse().map_err(|_| self.error("integer out of range"))?;
        Ok(if neg { -n } else { n })
    }

    fn bracket_ids(&mut self) -> Result<Vec<String>, LpaError> {
        self.expect('[')?;
        let mut ids = Vec::new();
        let mut cur = String::new();
        loop {
            let Some(&(_, c)) = self.chars.get(self.pos) else {
                return Err(self.error("unterminated `[`"));
            };
            self.pos += 1;
            match c {
                ',' | ']' => {
                    let id = cur.trim().to_string();
                    if !id.is_empty() {
                        ids.push(id);
                    } else if c == ',' || !ids.is_empty() {
                        return Err(self.error("empty identifier"));
                    }
                    cur.clear();
                    if c == ']' {
                        return Ok(ids);
                    }
                }
                _ => cur.push(c),
            }
        }
    }
}
