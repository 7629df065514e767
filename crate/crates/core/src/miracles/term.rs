//! Pedigree terms and their text form.
//!
//! Grammar, with points as seeds:
//!
//! ```text
//! term := Adam_i | Eve_{i,j} | SonOf(term,term) | DaughterOf(term,term)
//! ```
//!
//! `Eve_{i,j}` abbreviates `DaughterOf(Adam_i,Adam_j)`. `SonOf` builds a point
//! from two lines, `DaughterOf` a line from two points. Births are unordered:
//! a [`Term`] keeps its two parents sorted, so every tree has one text form.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::genealogy::{Ledger, ObjectId, Pedigree};
use crate::geometry::{child, Gender, GeomObject};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// Seed number `i`, counted from 1.
    Adam(u32),
    Birth(Box<Term>, Box<Term>),
}

impl Term {
    pub fn adam(i: u32) -> Term {
        Term::Adam(i)
    }

    pub fn birth(x: Term, y: Term) -> Term {
        if x <= y {
            Term::Birth(Box::new(x), Box::new(y))
        } else {
            Term::Birth(Box::new(y), Box::new(x))
        }
    }

    /// `DaughterOf(Adam_i, Adam_j)`.
    pub fn eve(i: u32, j: u32) -> Term {
        Term::birth(Term::Adam(i), Term::Adam(j))
    }

    /// Generations between this term and the seeds.
    pub fn depth(&self) -> u32 {
        match self {
            Term::Adam(_) => 0,
            Term::Birth(x, y) => 1 + x.depth().max(y.depth()),
        }
    }

    pub fn max_adam(&self) -> u32 {
        match self {
            Term::Adam(i) => *i,
            Term::Birth(x, y) => x.max_adam().max(y.max_adam()),
        }
    }

    /// Gender of the object this term denotes, checking that both parents of
    /// every birth have the same gender.
    pub fn gender(&self, seed_gender: Gender) -> Result<Gender> {
        match self {
            Term::Adam(_) => Ok(seed_gender),
            Term::Birth(x, y) => {
                let gx = x.gender(seed_gender)?;
                if gx != y.gender(seed_gender)? {
                    return Err(Error::PedigreeParse(format!(
                        "parents of different gender in {}",
                        self.render(seed_gender)
                    )));
                }
                Ok(gx.opposite())
            }
        }
    }

    /// Relabels seeds: `Adam_i` becomes `Adam_{perm[i-1]}`.
    pub fn permute(&self, perm: &[u32]) -> Term {
        match self {
            Term::Adam(i) => Term::Adam(perm[*i as usize - 1]),
            Term::Birth(x, y) => Term::birth(x.permute(perm), y.permute(perm)),
        }
    }

    pub fn render(&self, seed_gender: Gender) -> String {
        let mut out = String::new();
        self.render_into(seed_gender, &mut out);
        out
    }

    fn render_into(&self, seed_gender: Gender, out: &mut String) {
        use std::fmt::Write;
        match self {
            Term::Adam(i) => {
                let _ = write!(out, "Adam_{i}");
            }
            Term::Birth(x, y) => {
                if seed_gender == Gender::Point {
                    if let (Term::Adam(i), Term::Adam(j)) = (x.as_ref(), y.as_ref()) {
                        let _ = write!(out, "Eve_{{{i},{j}}}");
                        return;
                    }
                }
                // parents' gender decides the child's
                let parent_gender = match x.gender(seed_gender) {
                    Ok(g) => g,
                    Err(_) => seed_gender,
                };
                out.push_str(match parent_gender {
                    Gender::Point => "DaughterOf(",
                    Gender::Line => "SonOf(",
                });
                x.render_into(seed_gender, out);
                out.push(',');
                y.render_into(seed_gender, out);
                out.push(')');
            }
        }
    }

    /// Parses the text form, checking genders against `seed_gender`.
    pub fn parse(text: &str, seed_gender: Gender) -> Result<Term> {
        let mut parser = Parser {
            text: text.as_bytes(),
            pos: 0,
            seed_gender,
        };
        let (term, _) = parser.term()?;
        parser.skip_ws();
        if parser.pos != parser.text.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(term)
    }

    /// Evaluates the term on concrete seeds (`seeds[i - 1]` is `Adam_i`).
    pub fn evaluate<F: Field>(&self, f: &F, seeds: &[GeomObject<F::Elem>]) -> Result<GeomObject<F::Elem>> {
        let mut memo = HashMap::new();
        self.evaluate_memo(f, seeds, &mut memo)
    }

    fn evaluate_memo<'t, F: Field>(
        &'t self,
        f: &F,
        seeds: &[GeomObject<F::Elem>],
        memo: &mut HashMap<&'t Term, GeomObject<F::Elem>>,
    ) -> Result<GeomObject<F::Elem>> {
        if let Some(v) = memo.get(self) {
            return Ok(v.clone());
        }
        let value = match self {
            Term::Adam(i) => seeds
                .get((*i as usize).wrapping_sub(1))
                .cloned()
                .ok_or_else(|| Error::InvalidConfig(format!("Adam_{i} is not a seed")))?,
            Term::Birth(x, y) => {
                let vx = x.evaluate_memo(f, seeds, memo)?;
                let vy = y.evaluate_memo(f, seeds, memo)?;
                child(f, &vx, &vy)?
            }
        };
        memo.insert(self, value.clone());
        Ok(value)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Gender::Point))
    }
}

/// The first pedigree of `id`, expanded down to the seeds.
pub fn term_of<F: Field>(ledger: &Ledger<F>, id: ObjectId) -> Result<Term> {
    let mut memo = HashMap::new();
    term_memo(ledger, id, &mut memo)
}

fn term_memo<F: Field>(ledger: &Ledger<F>, id: ObjectId, memo: &mut HashMap<ObjectId, Term>) -> Result<Term> {
    if let Some(t) = memo.get(&id) {
        return Ok(t.clone());
    }
    let term = match ledger.object(id)?.first_pedigree {
        Pedigree::Adam(i) => Term::Adam(i),
        Pedigree::Birth(a, b) => Term::birth(term_memo(ledger, a, memo)?, term_memo(ledger, b, memo)?),
    };
    memo.insert(id, term.clone());
    Ok(term)
}

/// Renders the first pedigree of `id`.
pub fn render_pedigree<F: Field>(ledger: &Ledger<F>, id: ObjectId) -> Result<String> {
    Ok(term_of(ledger, id)?.render(ledger.seed_gender()))
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    seed_gender: Gender,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::PedigreeParse(format!(
            "{what} at byte {} of {:?}",
            self.pos,
            String::from_utf8_lossy(self.text)
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {token:?}")))
        }
    }

    fn index(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits");
        match digits.parse::<u32>() {
            Ok(i) if i >= 1 => Ok(i),
            _ => Err(self.error("expected a seed index >= 1")),
        }
    }

    fn term(&mut self) -> Result<(Term, Gender)> {
        if self.eat("Adam_") {
            return Ok((Term::Adam(self.index()?), self.seed_gender));
        }
        if self.eat("Eve_{") {
            if self.seed_gender != Gender::Point {
                return Err(self.error("Eve_{i,j} needs point seeds"));
            }
            let i = self.index()?;
            self.expect(",")?;
            let j = self.index()?;
            self.expect("}")?;
            if i == j {
                return Err(self.error("identical parents"));
            }
            return Ok((Term::eve(i, j), Gender::Line));
        }
        let parent_gender = if self.eat("SonOf(") {
            Gender::Line
        } else if self.eat("DaughterOf(") {
            Gender::Point
        } else {
            return Err(self.error("expected Adam_, Eve_, SonOf( or DaughterOf("));
        };
        let (x, gx) = self.term()?;
        self.expect(",")?;
        let (y, gy) = self.term()?;
        self.expect(")")?;
        if gx != parent_gender || gy != parent_gender {
            return Err(self.error(&format!("parents must be {parent_gender}s")));
        }
        if x == y {
            return Err(self.error("identical parents"));
        }
        Ok((Term::birth(x, y), parent_gender.opposite()))
    }
}
