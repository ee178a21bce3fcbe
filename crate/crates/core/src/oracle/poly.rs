//! Sparse integer polynomials in `x0, ..., x{n-1}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exps: Vec<u32>,
    pub coeff: i64,
}

impl Term {
    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }
}

/// Terms are kept in decreasing lexicographic order of exponents, with distinct exponents and
/// nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolyDoc")]
pub struct SparseIntPoly {
    pub n: usize,
    pub terms: Vec<Term>,
}

#[derive(Deserialize)]
struct PolyDoc {
    n: usize,
    terms: Vec<Term>,
}

impl TryFrom<PolyDoc> for SparseIntPoly {
    type Error = Error;

    fn try_from(doc: PolyDoc) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for t in &doc.terms {
            if t.exps.len() != doc.n {
                return Err(Error::Parse(format!(
                    "exponent vector {:?} does not have length {}",
                    t.exps, doc.n
                )));
            }
            if t.coeff == 0 {
                return Err(Error::Parse("zero coefficient".into()));
            }
            if !seen.insert(t.exps.clone()) {
                return Err(Error::Parse(format!("repeated exponent vector {:?}", t.exps)));
            }
        }
        SparseIntPoly::new(doc.n, doc.terms)
    }
}

impl SparseIntPoly {
    /// Merges repeated exponents and drops zero coefficients.
    pub fn new(n: usize, terms: Vec<Term>) -> Result<Self> {
        let mut acc: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
        for t in terms {
            if t.exps.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "exponent vector {:?} does not have length {n}",
                    t.exps
                )));
            }
            let c = acc.entry(t.exps).or_insert(0);
            *c = c
                .checked_add(t.coeff)
                .ok_or_else(|| Error::InvalidParameter("coefficient overflow".into()))?;
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| *c != 0)
            .map(|(exps, coeff)| Term { exps, coeff })
            .collect();
        Ok(SparseIntPoly { n, terms })
    }

    /// `x0^d + ... + x{n-1}^d`.
    pub fn fermat(n: usize, d: u32) -> Self {
        let terms = (0..n)
            .map(|i| {
                let mut exps = vec![0; n];
                exps[i] = d;
                Term { exps, coeff: 1 }
            })
            .collect();
        SparseIntPoly::new(n, terms).expect("well-formed")
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest total degree of a term (the order at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.iter().map(Term::degree).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.iter().map(Term::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.order() == self.max_degree()
    }

    /// The lowest-degree part `h`.
    pub fn initial_form(&self) -> SparseIntPoly {
        let d = self.order();
        SparseIntPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|t| Some(t.degree()) == d)
                .cloned()
                .collect(),
        }
    }

    pub fn partial(&self, var: usize) -> SparseIntPoly {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exps[var] > 0)
            .map(|t| {
                let mut exps = t.exps.clone();
                exps[var] -= 1;
                Term {
                    exps,
                    coeff: t.coeff * t.exps[var] as i64,
                }
            })
            .collect();
        SparseIntPoly::new(self.n, terms).expect("same arity")
    }

    /// Value at a point of `F_p^n`.
    pub fn eval_mod(&self, x: &[u64], p: u64) -> u64 {
        let mut acc = 0u64;
        for t in &self.terms {
            let mut v = coeff_mod(t.coeff, p);
            for (xi, &e) in x.iter().zip(&t.exps) {
                v = v * pow_mod(*xi, e, p) % p;
            }
            acc = (acc + v) % p;
        }
        acc
    }

    /// Parses the inline grammar
    /// `term (("+"|"-") term)*`, `term := [coeff "*"] var ["^" int]`,
    /// `var := "x" index`. Whitespace between tokens is ignored. The number
    /// of variables is `n` when given, otherwise one more than the largest
    /// index used.
    pub fn parse_inline(s: &str, n: Option<usize>) -> Result<Self> {
        let mut lex = Lexer::new(s);
        let mut raw: Vec<(i64, usize, u32)> = Vec::new();
        let mut sign = 1i64;
        loop {
            raw.push(lex.term(sign)?);
            lex.skip_ws();
            match lex.next() {
                None => break,
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                Some(c) => return Err(lex.error(&format!("unexpected '{c}'"))),
            }
        }
        let used = raw.iter().map(|(_, v, _)| v + 1).max().unwrap_or(0);
        let n = match n {
            Some(n) if n < used => {
                return Err(Error::Parse(format!("variable x{} out of range for n = {n}", used - 1)))
            }
            Some(n) => n,
            None => used,
        };
        let terms = raw
            .into_iter()
            .map(|(coeff, var, e)| {
                let mut exps = vec![0; n];
                exps[var] = e;
                Term { exps, coeff }
            })
            .collect();
        SparseIntPoly::new(n, terms)
    }

    /// Accepts either the JSON document `{n, terms: [{exps, coeff}]}` or the
    /// inline grammar.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
        } else {
            Self::parse_inline(s, None)
        }
    }
}

impl std::str::FromStr for SparseIntPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for SparseIntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let c = t.coeff;
            match (k, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = t
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                .collect();
            if c.unsigned_abs() != 1 || factors.is_empty() {
                factors.insert(0, c.unsigned_abs().to_string());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

pub(crate) fn coeff_mod(c: i64, p: u64) -> u64 {
    c.rem_euclid(p as i64) as u64
}

pub(crate) fn pow_mod(mut b: u64, mut e: u32, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

struct Lexer<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            chars: src.char_indices().peekable(),
        }
    }

    fn pos(&mut self) -> usize {
        self.chars.peek().map_or(self.src.len(), |(i, _)| *i)
    }

    fn error(&mut self, msg: &str) -> Error {
        let pos = self.pos();
        Error::Parse(format!("{msg} at offset {pos} in {:?}", self.src))
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn next(&mut self) -> Option<char> {
        self.chars.next().map(|(_, c)| c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|(_, c)| *c)
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos();
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.chars.next();
        }
        let end = self.pos();
        (end > start).then(|| &self.src[start..end])
    }

    fn int<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        match self.digits() {
            Some(s) => s.parse().map_err(|_| self.error(&format!("{what} out of range"))),
            None => Err(self.error(&format!("expected {what}"))),
        }
    }

    fn var(&mut self) -> Result<usize> {
        self.skip_ws();
        if self.next() != Some('x') {
            return Err(self.error("expected variable x<index>"));
        }
        self.int("variable index")
    }

    fn term(&mut self, sign: i64) -> Result<(i64, usize, u32)> {
        self.skip_ws();
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c: i64 = self.int("coefficient")?;
            self.skip_ws();
            if self.next() != Some('*') {
                return Err(self.error("expected '*' after coefficient"));
            }
            c
        } else {
            1
        };
        let var = self.var()?;
        self.skip_ws();
        let exp = if self.peek() == Some('^') {
            self.next();
            self.skip_ws();
            let e: u32 = self.int("exponent")?;
            if e == 0 {
                return Err(self.error("exponent must be ≥ 1"));
            }
            e
        } else {
            1
        };
        Ok((sign * coeff, var, exp))
    }
}
