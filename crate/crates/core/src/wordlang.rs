//! Group words in named generators: parsing, printing and evaluation.
//!
//! Grammar:
//!
//! ```text
//! word     := factor+                    juxtaposition is product
//! factor   := atom ('^' exponent)*       '^' binds tighter than juxtaposition
//! atom     := ident | '(' word ')'
//! exponent := '-'? digits                power (x^-1 is the inverse)
//!           | atom                       conjugation x^w = w⁻¹ x w
//! ```
//!
//! Identifiers are maximal alphanumeric runs. When a set of known names is
//! supplied, a run that is not itself a name is split greedily into the
//! longest known names, so `abab` reads as `a b a b` and `f1` stays whole.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordExpr {
    Gen(String),
    /// Product of at least two factors, left to right.
    Prod(Vec<WordExpr>),
    Inv(Box<WordExpr>),
    /// Power with exponent outside {0, −1}.
    Pow(Box<WordExpr>, i64),
    /// `Conj(x, h)` is h⁻¹ x h.
    Conj(Box<WordExpr>, Box<WordExpr>),
}

impl WordExpr {
    pub fn gen(name: &str) -> Self {
        WordExpr::Gen(name.to_string())
    }

    /// Product that collapses a single factor.
    pub fn prod(mut factors: Vec<WordExpr>) -> Self {
        if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            WordExpr::Prod(factors)
        }
    }

    /// Power, normalizing exponent −1 to an inverse.
    pub fn pow(base: WordExpr, n: i64) -> Result<Self> {
        match n {
            0 => Err(Error::InvalidArgument("zero exponent".into())),
            1 => Ok(base),
            -1 => Ok(WordExpr::Inv(Box::new(base))),
            n => Ok(WordExpr::Pow(Box::new(base), n)),
        }
    }

    pub fn conj(base: WordExpr, by: WordExpr) -> Self {
        WordExpr::Conj(Box::new(base), Box::new(by))
    }

    /// Generator names in first-occurrence order.
    pub fn names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut Vec<String>) {
        match self {
            WordExpr::Gen(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            WordExpr::Prod(fs) => fs.iter().for_each(|f| f.collect_names(out)),
            WordExpr::Inv(x) | WordExpr::Pow(x, _) => x.collect_names(out),
            WordExpr::Conj(x, h) => {
                x.collect_names(out);
                h.collect_names(out);
            }
        }
    }

    fn is_atomic(&self) -> bool {
        matches!(self, WordExpr::Gen(_))
    }
}

struct Wrapped<'a>(&'a WordExpr);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_atomic() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

/// Prints in the parser's own syntax; reparsing gives back an equal tree.
impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordExpr::Gen(n) => f.write_str(n),
            WordExpr::Prod(fs) => {
                for (k, x) in fs.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ")?;
                    }
                    // nested products need their own parentheses to survive a reparse
                    if matches!(x, WordExpr::Prod(_)) {
                        write!(f, "({x})")?;
                    } else {
                        write!(f, "{x}")?;
                    }
                }
                Ok(())
            }
            WordExpr::Inv(x) => write!(f, "{}^-1", Wrapped(x)),
            WordExpr::Pow(x, n) => write!(f, "{}^{}", Wrapped(x), n),
            WordExpr::Conj(x, h) => write!(f, "{}^{}", Wrapped(x), Wrapped(h)),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    names: Option<&'a [&'a str]>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn at_factor_start(&mut self) -> bool {
        self.skip_ws();
        matches!(self.peek(), Some(c) if c == '(' || c.is_alphanumeric())
    }

    fn word(&mut self) -> Result<WordExpr> {
        let mut factors = Vec::new();
        while self.at_factor_start() {
            factors.extend(self.factor()?);
        }
        if factors.is_empty() {
            return self.err("expected a generator or '('");
        }
        Ok(WordExpr::prod(factors))
    }

    /// One factor; an identifier run may expand to several when split against known names.
    fn factor(&mut self) -> Result<Vec<WordExpr>> {
        let mut atoms = self.atom()?;
        let mut last = atoms.pop().expect("atom yields at least one factor");
        loop {
            self.skip_ws();
            if self.peek() != Some('^') {
                break;
            }
            self.pos += 1;
            self.skip_ws();
            match self.peek() {
                Some(c) if c == '-' || c.is_ascii_digit() => {
                    let start = self.pos;
                    if c == '-' {
                        self.pos += 1;
                    }
                    let digits_start = self.pos;
                    while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    if self.pos == digits_start {
                        return self.err("empty exponent");
                    }
                    let n: i64 = self.src[start..self.pos].parse().map_err(|_| Error::Syntax {
                        pos: start,
                        msg: "exponent out of range".into(),
                    })?;
                    if n == 0 {
                        return Err(Error::Syntax {
                            pos: start,
                            msg: "zero exponent".into(),
                        });
                    }
                    last = WordExpr::pow(last, n)?;
                }
                Some(c) if c == '(' || c.is_alphabetic() => {
                    // conjugation by a single atom; a run of several names means their product
                    let by = WordExpr::prod(self.atom()?);
                    last = WordExpr::conj(last, by);
                }
                _ => return self.err("empty exponent"),
            }
        }
        atoms.push(last);
        Ok(atoms)
    }

    fn atom(&mut self) -> Result<Vec<WordExpr>> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.word()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return self.err("unbalanced parentheses: expected ')'");
                }
                self.pos += 1;
                Ok(vec![inner])
            }
            Some(c) if c.is_alphanumeric() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '_' || c == '\'') {
                    self.pos += self.peek().unwrap().len_utf8();
                }
                let run = &self.src[start..self.pos];
                if run.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: format!("identifier `{run}` starts with a digit"),
                    });
                }
                Ok(self.split_run(run).into_iter().map(WordExpr::gen).collect())
            }
            Some(')') => self.err("unbalanced parentheses: unexpected ')'"),
            Some(c) => self.err(format!("unexpected character `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }

    fn split_run(&self, run: &'a str) -> Vec<&'a str> {
        let Some(names) = self.names else {
            return vec![run];
        };
        if names.contains(&run) {
            return vec![run];
        }
        let mut out = Vec::new();
        let mut rest = run;
        while !rest.is_empty() {
            let best = names
                .iter()
                .filter(|n| !n.is_empty() && rest.starts_with(**n))
                .max_by_key(|n| n.len());
            match best {
                Some(n) => {
                    out.push(&rest[..n.len()]);
                    rest = &rest[n.len()..];
                }
                None => return vec![run],
            }
        }
        out
    }
}

fn parse_impl(src: &str, names: Option<&[&str]>) -> Result<WordExpr> {
    let mut p = Parser { src, pos: 0, names };
    let w = p.word()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(w),
        Some(')') => p.err("unbalanced parentheses: unexpected ')'"),
        Some(c) => p.err(format!("unexpected character `{c}`")),
    }
}

/// Parses with identifiers taken as maximal alphanumeric runs.
pub fn parse_word(src: &str) -> Result<WordExpr> {
    parse_impl(src, None)
}

/// Parses, splitting identifier runs into the longest matching known names.
pub fn parse_word_with_names(src: &str, names: &[&str]) -> Result<WordExpr> {
    parse_impl(src, Some(names))
}

/// Generator bindings. All matrices must be square of one size.
#[derive(Clone, Debug, Default)]
pub struct Env<T> {
    bindings: HashMap<String, Matrix<T>>,
}

impl<T: Field> Env<T> {
    pub fn new() -> Self {
        Env {
            bindings: HashMap::new(),
        }
    }

    pub fn bind(&mut self, name: &str, m: Matrix<T>) -> Result<()> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!("binding `{name}` is not square")));
        }
        if let Some(other) = self.bindings.values().next() {
            if other.rows() != m.rows() {
                return Err(Error::DimensionMismatch(format!(
                    "binding `{name}` has size {}, others {}",
                    m.rows(),
                    other.rows()
                )));
            }
        }
        self.bindings.insert(name.to_string(), m);
        Ok(())
    }

    pub fn with(mut self, name: &str, m: Matrix<T>) -> Result<Self> {
        self.bind(name, m)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Matrix<T>> {
        self.bindings.get(name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.bindings.keys().map(String::as_str).collect()
    }
}

pub fn eval_word<T: Field>(w: &WordExpr, env: &Env<T>) -> Result<Matrix<T>> {
    match w {
        WordExpr::Gen(n) => env.get(n).cloned().ok_or_else(|| Error::UnboundName(n.clone())),
        WordExpr::Prod(fs) => {
            let mut acc = eval_word(&fs[0], env)?;
            for f in &fs[1..] {
                acc = acc.mul(&eval_word(f, env)?)?;
            }
            Ok(acc)
        }
        WordExpr::Inv(x) => eval_word(x, env)?.inverse(),
        WordExpr::Pow(x, n) => eval_word(x, env)?.pow(*n),
        WordExpr::Conj(x, h) => {
            let h = eval_word(h, env)?;
            h.inverse()?.mul(&eval_word(x, env)?)?.mul(&h)
        }
    }
}

/// The word definitions used to reach the working generators from the
/// standard generators a, b, in evaluation order.
pub const PAPER_WORDS: [(&str, &str); 7] = [
    ("c", "b^((abab^2)^3)"),
    ("ac", "ac"),
    ("f1", "(a(ac)^6)^2"),
    ("f2", "f1^(ac)"),
    ("d", "(a(ac)^6)^5"),
    ("e", "((ac)^6(ab^2)^-1(ac)^6(ab^2))^4"),
    ("eprime", "e(ac)^8e(ac)^4e"),
];

/// Evaluates [`PAPER_WORDS`] starting from bindings for `a` and `b`.
/// Returns f1, f2, d, ac, e′ in that order.
pub fn derive_generators<T: Field>(a: Matrix<T>, b: Matrix<T>) -> Result<[Matrix<T>; 5]> {
    let mut env = Env::new().with("a", a)?.with("b", b)?;
    let base_names = ["a", "b", "c", "e", "f1"];
    for (name, src) in PAPER_WORDS {
        let w = parse_word_with_names(src, &base_names)?;
        let m = eval_word(&w, &env)?;
        env.bind(name, m)?;
    }
    let get = |n: &str| env.get(n).cloned().ok_or_else(|| Error::UnboundName(n.to_string()));
    Ok([get("f1")?, get("f2")?, get("d")?, get("ac")?, get("eprime")?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf41::Gf41;
    use crate::linalg::GfMatrix;

    fn g(n: &str) -> WordExpr {
        WordExpr::gen(n)
    }

    #[test]
    fn conjugation_word() {
        let w = parse_word_with_names("b^((abab^2)^3)", &["a", "b"]).unwrap();
        let inner = WordExpr::Prod(vec![g("a"), g("b"), g("a"), WordExpr::pow(g("b"), 2).unwrap()]);
        assert_eq!(w, WordExpr::conj(g("b"), WordExpr::pow(inner, 3).unwrap()));
    }

    #[test]
    fn eprime_word() {
        let w = parse_word_with_names("e(ac)^8e(ac)^4e", &["e", "a", "c"]).unwrap();
        let ac = WordExpr::Prod(vec![g("a"), g("c")]);
        let expected = WordExpr::Prod(vec![
            g("e"),
            WordExpr::Pow(Box::new(ac.clone()), 8),
            g("e"),
            WordExpr::Pow(Box::new(ac), 4),
            g("e"),
        ]);
        assert_eq!(w, expected);
    }

    #[test]
    fn inverse_and_maximal_runs() {
        assert_eq!(parse_word("x^-1").unwrap(), WordExpr::Inv(Box::new(g("x"))));
        assert_eq!(parse_word("f1^ac").unwrap(), WordExpr::conj(g("f1"), g("ac")));
        assert_eq!(parse_word("f1 f2").unwrap(), WordExpr::Prod(vec![g("f1"), g("f2")]));
        assert_eq!(parse_word("x^-3").unwrap(), WordExpr::Pow(Box::new(g("x")), -3));
    }

    #[test]
    fn syntax_errors() {
        for bad in ["(ab", "ab)", "a^", "a^-", "a^0", "", "()", "a^)", "a + b", "2a"] {
            assert!(matches!(parse_word(bad), Err(Error::Syntax { .. })), "{bad}");
        }
        match parse_word("a^0") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn paper_words_parse() {
        for (_, src) in PAPER_WORDS {
            parse_word_with_names(src, &["a", "b", "c", "e", "f1"]).unwrap();
            parse_word(src).unwrap();
        }
    }

    #[test]
    fn print_round_trip() {
        for src in [
            "b^((abab^2)^3)",
            "e(ac)^8e(ac)^4e",
            "((ac)^6(ab^2)^-1(ac)^6(ab^2))^4",
            "(x y) z^(p q)^-2",
        ] {
            let w = parse_word_with_names(src, &["a", "b", "c", "e"]).unwrap();
            assert_eq!(parse_word(&w.to_string()).unwrap(), w, "{}", w);
        }
    }

    #[test]
    fn unbound_name() {
        let env: Env<Gf41> = Env::new();
        assert_eq!(eval_word(&g("q"), &env), Err(Error::UnboundName("q".into())));
    }

    #[test]
    fn env_rejects_mixed_sizes() {
        let mut env: Env<Gf41> = Env::new();
        env.bind("a", GfMatrix::identity(2)).unwrap();
        assert!(env.bind("b", GfMatrix::identity(3)).is_err());
        assert!(env.bind("c", GfMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn evaluation_semantics() {
        let x = GfMatrix::from_rows(vec![vec![Gf41::new(2), Gf41::new(1)], vec![Gf41::new(1), Gf41::new(1)]]).unwrap();
        let h = GfMatrix::from_rows(vec![vec![Gf41::new(0), Gf41::new(1)], vec![Gf41::new(1), Gf41::new(3)]]).unwrap();
        let env = Env::new().with("x", x.clone()).unwrap().with("h", h.clone()).unwrap();
        let conj = eval_word(&parse_word("x^h").unwrap(), &env).unwrap();
        assert_eq!(conj, h.inverse().unwrap().mul(&x).unwrap().mul(&h).unwrap());
        let neg = eval_word(&parse_word("x^-4").unwrap(), &env).unwrap();
        assert_eq!(neg, x.pow(4).unwrap().inverse().unwrap());
        let prod = eval_word(&parse_word("x h x").unwrap(), &env).unwrap();
        assert_eq!(prod, x.mul(&h).unwrap().mul(&x).unwrap());
    }
}
