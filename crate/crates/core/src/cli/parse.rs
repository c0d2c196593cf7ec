//! Descriptor grammar: tokenizer, parser and canonical printer.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::is_prime;
use crate::classify::{
    DivisibleDescriptor, Flag, GroupDescriptor, PRank, PrimeSet, Rank, Shape, TailRule,
    TorsionDescriptor,
};
use crate::finabel::FinAbGroup;
use crate::spgroup::{SpElement, SpGroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

impl Token<'_> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }
}

/// Whitespace-separated words; braces are always tokens of their own. `#` starts a comment.
fn tokenize<'a>(text: &'a str) -> Vec<Token<'a>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut start: Option<usize> = None;
        let push = |s: usize, e: usize, out: &mut Vec<Token<'a>>| {
            if s < e {
                out.push(Token {
                    text: &line[s..e],
                    line: ln + 1,
                    col: line[..s].chars().count() + 1,
                });
            }
        };
        for (i, c) in line.char_indices() {
            if c.is_whitespace() || c == '{' || c == '}' {
                if let Some(s) = start.take() {
                    push(s, i, &mut out);
                }
                if c == '{' || c == '}' {
                    push(i, i + 1, &mut out);
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(s) = start {
            push(s, line.len(), &mut out);
        }
    }
    out
}

struct Parser<'a> {
    toks: Vec<Token<'a>>,
    pos: usize,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.toks.get(self.pos)
    }

    fn eof_err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.end.0,
            col: self.end.1,
            msg: msg.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<Token<'a>, ParseError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| self.eof_err(format!("expected {what}, found end of input")))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, word: &str) -> Result<(), ParseError> {
        let t = self.next(&format!("'{word}'"))?;
        if t.text != word {
            return Err(t.err(format!("expected '{word}', found '{}'", t.text)));
        }
        Ok(())
    }

    /// Consumes `key=VALUE`, returning the value and its token.
    fn keyed(&mut self, key: &str) -> Result<(&'a str, Token<'a>), ParseError> {
        let t = self.next(&format!("'{key}='"))?;
        match t.text.split_once('=') {
            Some((k, v)) if k == key => Ok((v, t)),
            _ => Err(t.err(format!("expected '{key}=', found '{}'", t.text))),
        }
    }

    fn at_key(&self, key: &str) -> bool {
        self.peek()
            .and_then(|t| t.text.split_once('='))
            .is_some_and(|(k, _)| k == key)
    }

    fn stanza(&mut self) -> Result<GroupDescriptor, ParseError> {
        let head = self.next("a stanza keyword")?;
        let shape = match head.text {
            "torsion" => Shape::Torsion(self.torsion_spec()?),
            "product-sp" => Shape::ReducedProductSp(self.torsion_spec()?),
            "divisible" => {
                let (r0, t) = self.keyed("r0")?;
                let r0 = parse_rank(r0, &t)?;
                let (rp, t) = self.keyed("rp")?;
                let rp = match (rp, rp.strip_prefix("const:")) {
                    ("unbounded", _) => PRank::Unbounded,
                    (_, Some(k)) => PRank::Const(parse_nat(k, &t)?),
                    _ => return Err(t.err("rp must be const:N or unbounded")),
                };
                Shape::Divisible(DivisibleDescriptor { r0, rp })
            }
            "torsionfree" => {
                let (d, t) = self.keyed("divisible")?;
                let divisible = match d {
                    "true" => true,
                    "false" => false,
                    _ => return Err(t.err(format!("expected true or false, found '{d}'"))),
                };
                let (r, t) = self.keyed("rank")?;
                Shape::TorsionFree {
                    divisible,
                    rank: parse_rank(r, &t)?,
                }
            }
            "spring" => {
                let (p, t) = self.keyed("primes")?;
                let primes = parse_prime_set(p, &t)?;
                let (e, t) = self.keyed("exps")?;
                let spec = match e {
                    "linear" => SpGroupSpec::linear(primes),
                    v => {
                        let c = v
                            .strip_prefix("const:")
                            .ok_or_else(|| t.err("exps must be const:C or linear"))?;
                        let c = u32::try_from(parse_nat(c, &t)?)
                            .map_err(|_| t.err("exponent too large"))?;
                        SpGroupSpec::constant(primes, c).map_err(|e| t.err(e.to_string()))?
                    }
                };
                Shape::ERingSp(spec)
            }
            "sum" => {
                self.expect("{")?;
                let a = self.stanza()?;
                self.expect("}")?;
                self.expect("{")?;
                let b = self.stanza()?;
                self.expect("}")?;
                Shape::Sum(Box::new(a), Box::new(b))
            }
            other => return Err(head.err(format!("unknown stanza '{other}'"))),
        };
        let mut flags = BTreeSet::new();
        if self.at_key("flags") {
            let (list, t) = self.keyed("flags")?;
            for name in list.split(',') {
                let f = Flag::from_keyword(name)
                    .ok_or_else(|| t.err(format!("unknown flag '{name}'")))?;
                flags.insert(f);
            }
        }
        GroupDescriptor::new(shape, flags).map_err(|e| head.err(e.to_string()))
    }

    fn torsion_spec(&mut self) -> Result<TorsionDescriptor, ParseError> {
        let mut explicit = BTreeMap::new();
        while self.at_key("p") {
            let (p, pt) = self.keyed("p")?;
            let p = parse_nat(p, &pt)?;
            if !is_prime(p) {
                return Err(pt.err(format!("{p} is not prime")));
            }
            let (exps, et) = self.keyed("exps")?;
            let mut factors = Vec::new();
            if !exps.is_empty() {
                for e in exps.split(',') {
                    let e = u32::try_from(parse_nat(e, &et)?)
                        .map_err(|_| et.err("exponent too large"))?;
                    if e == 0 {
                        return Err(et.err("exponents must be at least 1"));
                    }
                    factors.push((p, e));
                }
            }
            let g = FinAbGroup::new(&factors).map_err(|e| et.err(e.to_string()))?;
            if explicit.insert(p, g).is_some() {
                return Err(pt.err(format!("prime {p} listed twice")));
            }
        }
        let mut support = PrimeSet::All;
        if self.at_key("primes") {
            let (s, t) = self.keyed("primes")?;
            support = parse_prime_set(s, &t)?;
        }
        let (tail, t) = self.keyed("tail")?;
        let tail = match tail {
            "zero" => TailRule::Zero,
            "linear" => TailRule::LinearExp,
            v => {
                let body = v
                    .strip_prefix("const:")
                    .ok_or_else(|| t.err("tail must be zero, const:CxR or linear"))?;
                let (c, r) = body
                    .split_once('x')
                    .ok_or_else(|| t.err("const tail needs CxR"))?;
                let c =
                    u32::try_from(parse_nat(c, &t)?).map_err(|_| t.err("exponent too large"))?;
                let r = u32::try_from(parse_nat(r, &t)?)
                    .map_err(|_| t.err("multiplicity too large"))?;
                TailRule::const_exp(c, r).map_err(|e| t.err(e.to_string()))?
            }
        };
        TorsionDescriptor::new(explicit, support, tail).map_err(|e| t.err(e.to_string()))
    }
}

fn parse_nat(s: &str, t: &Token<'_>) -> Result<u64, ParseError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(t.err(format!("expected a natural number, found '{s}'")));
    }
    s.parse()
        .map_err(|_| t.err(format!("number too large: {s}")))
}

fn parse_rank(s: &str, t: &Token<'_>) -> Result<Rank, ParseError> {
    if s == "inf" {
        Ok(Rank::Infinite)
    } else {
        Ok(Rank::Finite(parse_nat(s, t)?))
    }
}

fn parse_prime_set(s: &str, t: &Token<'_>) -> Result<PrimeSet, ParseError> {
    [
        PrimeSet::All,
        PrimeSet::OddPositions,
        PrimeSet::EvenPositions,
    ]
    .into_iter()
    .find(|p| p.keyword() == s)
    .ok_or_else(|| t.err(format!("unknown prime set '{s}'")))
}

pub fn parse_descriptor(text: &str) -> Result<GroupDescriptor, ParseError> {
    let toks = tokenize(text);
    let lines = text.lines().count().max(1);
    let last_len = text.lines().last().map_or(0, |l| l.chars().count());
    let mut p = Parser {
        toks,
        pos: 0,
        end: (lines, last_len + 1),
    };
    let d = p.stanza()?;
    if let Some(t) = p.peek() {
        return Err(t.err(format!("unexpected '{}' after the descriptor", t.text)));
    }
    Ok(d)
}

/// Canonical one-line form; [`parse_descriptor`] reads it back to the same value.
pub struct Printed<'a>(pub &'a GroupDescriptor);

pub fn print_descriptor(d: &GroupDescriptor) -> String {
    Printed(d).to_string()
}

fn write_torsion(f: &mut fmt::Formatter<'_>, t: &TorsionDescriptor) -> fmt::Result {
    for (p, g) in t.explicit() {
        let exps: Vec<String> = g.factors().iter().map(|x| x.exp.to_string()).collect();
        write!(f, " p={p} exps={}", exps.join(","))?;
    }
    if t.support() != PrimeSet::All {
        write!(f, " primes={}", t.support().keyword())?;
    }
    match t.tail() {
        TailRule::Zero => write!(f, " tail=zero"),
        TailRule::ConstExp { c, r } => write!(f, " tail=const:{c}x{r}"),
        TailRule::LinearExp => write!(f, " tail=linear"),
    }
}

impl fmt::Display for Printed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.0;
        match d.shape() {
            Shape::Torsion(t) => {
                write!(f, "torsion")?;
                write_torsion(f, t)?;
            }
            Shape::ReducedProductSp(t) => {
                write!(f, "product-sp")?;
                write_torsion(f, t)?;
            }
            Shape::Divisible(dd) => {
                write!(f, "divisible r0={} rp=", dd.r0)?;
                match dd.rp {
                    PRank::Const(k) => write!(f, "const:{k}")?,
                    PRank::Unbounded => write!(f, "unbounded")?,
                }
            }
            Shape::TorsionFree { divisible, rank } => {
                write!(f, "torsionfree divisible={divisible} rank={rank}")?
            }
            Shape::ERingSp(spec) => write!(f, "spring {spec}")?,
            Shape::Sum(a, b) => write!(f, "sum {{ {} }} {{ {} }}", Printed(a), Printed(b))?,
        }
        if !d.flags().is_empty() {
            let names: Vec<&str> = d.flags().iter().map(|x| x.keyword()).collect();
            write!(f, " flags={}", names.join(","))?;
        }
        Ok(())
    }
}

/// Endomorphism matrix written as nested lists, e.g. `[[2,1],[0,0]]`.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<BigInt>>, String> {
    let rows: Vec<Vec<serde_json::Number>> =
        serde_json::from_str(text).map_err(|e| format!("bad matrix {text:?}: {e}"))?;
    rows.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|n| {
                    BigInt::from_str(&n.to_string())
                        .map_err(|_| format!("matrix entry {n} is not an integer"))
                })
                .collect()
        })
        .collect()
}

/// Element written as `q=A/B` followed by `cI=R` explicit components.
pub fn parse_element(text: &str, spec: &SpGroupSpec) -> Result<SpElement, String> {
    let mut q = None;
    let mut corrections = BTreeMap::new();
    for word in text.split_whitespace() {
        let (k, v) = word
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, found {word:?}"))?;
        if k == "q" {
            q = Some(BigRational::from_str(v).map_err(|_| format!("bad rational {v:?}"))?);
        } else if let Some(i) = k.strip_prefix('c') {
            let i: usize = i
                .parse()
                .map_err(|_| format!("bad component index in {word:?}"))?;
            let r = BigInt::from_str(v).map_err(|_| format!("bad residue in {word:?}"))?;
            if corrections.insert(i, r).is_some() {
                return Err(format!("component {i} given twice"));
            }
        } else {
            return Err(format!("unknown key {k:?}"));
        }
    }
    let q = q.ok_or("missing q=")?;
    SpElement::new(q, corrections, spec).map_err(|e| e.to_string())
}
