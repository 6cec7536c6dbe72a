use std::fmt;

use thiserror::Error;

use super::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("presentation syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("duplicate generator {0:?}")]
    DuplicateGenerator(String),
}

/// `<x1, ..., xn | r1, ..., rk>` with freely reduced relators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePresentation {
    names: Vec<String>,
    relations: Vec<Word>,
}

impl FinitePresentation {
    /// Relators mentioning a generator outside `names` are a programming error.
    pub fn new(names: Vec<String>, relations: Vec<Word>) -> Self {
        for r in &relations {
            if let Some(g) = r.max_generator() {
                assert!(g < names.len(), "relator uses generator {g} of {}", names.len());
            }
        }
        FinitePresentation { names, relations }
    }

    /// Generators named `x1, ..., xn`.
    pub fn numbered(n: usize, relations: Vec<Word>) -> Self {
        FinitePresentation::new((1..=n).map(|i| format!("x{i}")).collect(), relations)
    }

    pub fn free(n: usize) -> Self {
        FinitePresentation::numbered(n, vec![])
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn relations(&self) -> &[Word] {
        &self.relations
    }

    pub fn with_relations(&self, relations: Vec<Word>) -> Self {
        FinitePresentation::new(self.names.clone(), relations)
    }

    /// Permutes generators: old generator `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut names = vec![String::new(); self.names.len()];
        for (i, &j) in perm.iter().enumerate() {
            names[j] = self.names[i].clone();
        }
        FinitePresentation::new(names, self.relations.iter().map(|r| r.rename(|g| perm[g])).collect())
    }

    pub fn word_to_string(&self, w: &Word) -> String {
        w.display(&self.names).to_string()
    }

    /// Parses a word over this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word, ParseError> {
        let mut p = Parser { src: text, pos: 0, names: &self.names };
        let w = p.word()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.err("trailing input"));
        }
        Ok(w)
    }

    /// Parses `<x, y | x^2 = y^2, [x, y]>`. Relations may be relators or
    /// equations; words allow `^k`, parentheses and commutators `[u, v]`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut p = Parser { src: text, pos: 0, names: &[] };
        p.expect('<')?;
        let mut names: Vec<String> = Vec::new();
        loop {
            p.skip_ws();
            if p.peek() == Some('|') {
                break;
            }
            let n = p.ident()?;
            if names.contains(&n) {
                return Err(ParseError::DuplicateGenerator(n));
            }
            names.push(n);
            p.skip_ws();
            match p.peek() {
                Some(',') => p.pos += 1,
                Some('|') => break,
                _ => return Err(p.err("expected ',' or '|'")),
            }
        }
        p.expect('|')?;
        p.names = &names;
        let mut relations = Vec::new();
        p.skip_ws();
        if p.peek() != Some('>') {
            loop {
                let lhs = p.word()?;
                p.skip_ws();
                let rel = if p.peek() == Some('=') {
                    p.pos += 1;
                    let rhs = p.word()?;
                    lhs.mul(&rhs.inverse())
                } else {
                    lhs
                };
                relations.push(rel);
                p.skip_ws();
                match p.peek() {
                    Some(',') => p.pos += 1,
                    Some('>') => break,
                    _ => return Err(p.err("expected ',' or '>'")),
                }
            }
        }
        p.expect('>')?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.err("trailing input"));
        }
        Ok(FinitePresentation::new(names, relations))
    }
}

impl fmt::Display for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations.iter().map(|r| self.word_to_string(r)).collect();
        write!(f, "<{} | {}>", self.names.join(", "), rels.join(", "))
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '*' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {c:?}")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        for (i, c) in self.src[start..].char_indices() {
            let ok = c == '_' || c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit());
            if !ok {
                break;
            }
            self.pos = start + i + c.len_utf8();
        }
        if self.pos == start {
            return Err(self.err("expected a generator name"));
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| {
            self.pos = start;
            self.err("expected an integer exponent")
        })
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut w = Word::identity();
        loop {
            self.skip_ws();
            let atom = match self.peek() {
                Some('(') => {
                    self.pos += 1;
                    let inner = self.word()?;
                    self.expect(')')?;
                    inner
                }
                Some('[') => {
                    self.pos += 1;
                    let u = self.word()?;
                    self.expect(',')?;
                    let v = self.word()?;
                    self.expect(']')?;
                    u.commutator(&v)
                }
                Some('1') => {
                    self.pos += 1;
                    Word::identity()
                }
                Some(c) if c == '_' || c.is_ascii_alphabetic() => {
                    let name = self.ident()?;
                    let g = self
                        .names
                        .iter()
                        .position(|n| *n == name)
                        .ok_or(ParseError::UnknownGenerator(name))?;
                    Word::generator(g)
                }
                _ => return Ok(w),
            };
            self.skip_ws();
            let atom = if self.peek() == Some('^') {
                self.pos += 1;
                atom.pow(self.int()?)
            } else {
                atom
            };
            w = w.mul(&atom);
        }
    }
}
