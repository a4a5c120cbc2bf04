//! Text format for special data. Two forms:
//!
//! ```text
//! # explicit sets and weights
//! sets d=3
//! {1}:2 {2}:2 {3}:2 {1,2,3}:1
//!
//! # plane forest with free parameters; `*` is a leaf
//! forest
//! (3: * *) (5: * *)
//! ```

use std::fmt::Write as _;

use super::{from_forest, SpecialDatum, TreeShape, WatanabeForest};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(u64),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s
                    .parse()
                    .map_err(|_| err(ln + 1, column, format!("integer {s} is too large")))?;
                out.push(Spanned {
                    tok: Tok::Int(v),
                    line: ln + 1,
                    column,
                });
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Word(chars[start..i].iter().collect()),
                    line: ln + 1,
                    column,
                });
            } else if "{},:=()*".contains(c) {
                out.push(Spanned {
                    tok: Tok::Sym(c),
                    line: ln + 1,
                    column,
                });
                i += 1;
            } else {
                return Err(err(ln + 1, column, format!("unexpected character '{c}'")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.column))
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(err(l, c, message))
    }

    fn sym(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Spanned { tok: Tok::Sym(x), .. }) if *x == c => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected '{c}'")),
        }
    }

    fn is_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Spanned { tok: Tok::Sym(x), .. }) if *x == c)
    }

    fn int(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Spanned { tok: Tok::Int(v), .. }) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.fail("expected an integer"),
        }
    }

    fn word(&mut self, w: &str) -> Result<()> {
        match self.peek() {
            Some(Spanned { tok: Tok::Word(x), .. }) if x == w => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected '{w}'")),
        }
    }

    fn sets(&mut self) -> Result<SpecialDatum> {
        let (l, c) = self.here();
        self.word("d")?;
        self.sym('=')?;
        let d = self.int()? as usize;
        if d < 2 {
            return Err(err(l, c, format!("d = {d} is below 2")));
        }
        let mut sets = Vec::new();
        while self.peek().is_some() {
            let (l, c) = self.here();
            self.sym('{')?;
            let mut idx = vec![self.int()? as usize];
            while self.is_sym(',') {
                self.sym(',')?;
                idx.push(self.int()? as usize);
            }
            self.sym('}')?;
            self.sym(':')?;
            let w = self.int()?;
            SpecialDatum::new(d, vec![(idx.clone(), w)]).map_err(|e| err(l, c, e.to_string()))?;
            sets.push((idx, w));
        }
        let (l, c) = self.end;
        SpecialDatum::new(d, sets).map_err(|e| err(l, c, e.to_string()))
    }

    fn tree(&mut self) -> Result<TreeShape> {
        if self.is_sym('*') {
            self.sym('*')?;
            return Ok(TreeShape::Leaf);
        }
        self.sym('(')?;
        let k = self.int()?;
        self.sym(':')?;
        let mut kids = Vec::new();
        while !self.is_sym(')') {
            if self.peek().is_none() {
                return self.fail("unclosed '('");
            }
            kids.push(self.tree()?);
        }
        self.sym(')')?;
        if kids.len() < 2 {
            return self.fail("an internal node needs at least two children");
        }
        Ok(TreeShape::Node(k, kids))
    }

    fn forest(&mut self) -> Result<SpecialDatum> {
        let (l, c) = self.here();
        let mut trees = Vec::new();
        while self.peek().is_some() {
            trees.push(self.tree()?);
        }
        let d: usize = trees.iter().map(TreeShape::leaves).sum();
        if d < 2 {
            return Err(err(l, c, format!("d = {d} is below 2")));
        }
        from_forest(&WatanabeForest::from_shapes(&trees)?)
    }
}

/// Parses either text form. Errors carry 1-based line and column.
pub fn parse_datum(text: &str) -> Result<SpecialDatum> {
    let toks = lex(text)?;
    let end = toks.last().map_or((1, 1), |t| (t.line, t.column + 1));
    let mut p = Parser { toks, pos: 0, end };
    match p.peek().map(|t| t.tok.clone()) {
        None => Err(err(1, 1, "empty input")),
        Some(Tok::Word(w)) if w == "sets" => {
            p.pos += 1;
            p.sets()
        }
        Some(Tok::Word(w)) if w == "forest" => {
            p.pos += 1;
            p.forest()
        }
        _ => p.fail("expected 'sets' or 'forest'"),
    }
}

/// The explicit form, one set per line in sorted order.
pub fn write_sets_text(datum: &SpecialDatum) -> String {
    let mut out = format!("sets d={}\n", datum.d());
    for s in datum.sets() {
        let idx: Vec<String> = s.indices.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "{{{}}}:{}", idx.join(","), s.weight);
    }
    out
}

/// The forest form, one tree per line.
pub fn write_forest_text(forest: &WatanabeForest) -> String {
    fn go(s: &TreeShape, out: &mut String) {
        match s {
            TreeShape::Leaf => out.push('*'),
            TreeShape::Node(k, kids) => {
                let _ = write!(out, "({k}:");
                for c in kids {
                    out.push(' ');
                    go(c, out);
                }
                out.push(')');
            }
        }
    }
    let mut out = String::from("forest\n");
    for s in forest.shapes() {
        go(&s, &mut out);
        out.push('\n');
    }
    out
}
