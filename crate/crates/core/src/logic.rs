//! Formulas and sequents of the basic non-distributive modal language.
//!
//! ```text
//! formula := disj
//! disj    := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := ("box" | "dia" | "rhd" | "lhd") unary | primary
//! primary := "top" | "bot" | ident | "(" formula ")"
//! sequent := formula "|-" formula
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Bot,
    Top,
    Atom(String),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Dia(Box<Formula>),
    Rhd(Box<Formula>),
    Lhd(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn boxed(a: Formula) -> Self {
        Formula::Box(Box::new(a))
    }

    pub fn dia(a: Formula) -> Self {
        Formula::Dia(Box::new(a))
    }

    pub fn rhd(a: Formula) -> Self {
        Formula::Rhd(Box::new(a))
    }

    pub fn lhd(a: Formula) -> Self {
        Formula::Lhd(Box::new(a))
    }

    /// Atom names in sorted order, without duplicates.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Bot | Formula::Top => {}
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Box(a) | Formula::Dia(a) | Formula::Rhd(a) | Formula::Lhd(a) => a.collect_atoms(out),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Bot | Formula::Top | Formula::Atom(_) => 0,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Box(a) | Formula::Dia(a) | Formula::Rhd(a) | Formula::Lhd(a) => 1 + a.depth(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 0,
            Formula::And(..) => 1,
            _ => 2,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, phi: &Formula, min: u8) -> fmt::Result {
    if phi.precedence() < min {
        write!(f, "({phi})")
    } else {
        write!(f, "{phi}")
    }
}

/// Prints with the fewest parentheses that still parse back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Bot => f.write_str("bot"),
            Formula::Top => f.write_str("top"),
            Formula::Atom(p) => f.write_str(p),
            Formula::And(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(" & ")?;
                write_operand(f, b, 2)
            }
            Formula::Or(a, b) => {
                write_operand(f, a, 0)?;
                f.write_str(" | ")?;
                write_operand(f, b, 1)
            }
            Formula::Box(a) | Formula::Dia(a) | Formula::Rhd(a) | Formula::Lhd(a) => {
                let op = match self {
                    Formula::Box(_) => "box",
                    Formula::Dia(_) => "dia",
                    Formula::Rhd(_) => "rhd",
                    _ => "lhd",
                };
                write!(f, "{op} ")?;
                write_operand(f, a, 2)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Sequent {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Sequent { lhs, rhs }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut a = self.lhs.atoms();
        a.extend(self.rhs.atoms());
        a
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.lhs, self.rhs)
    }
}

impl FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_formula(s)
    }
}

impl FromStr for Sequent {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_sequent(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Top,
    Bot,
    And,
    Or,
    Turnstile,
    Box,
    Dia,
    Rhd,
    Lhd,
    LParen,
    RParen,
    Ident(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Top => f.write_str("'top'"),
            Tok::Bot => f.write_str("'bot'"),
            Tok::And => f.write_str("'&'"),
            Tok::Or => f.write_str("'|'"),
            Tok::Turnstile => f.write_str("'|-'"),
            Tok::Box => f.write_str("'box'"),
            Tok::Dia => f.write_str("'dia'"),
            Tok::Rhd => f.write_str("'rhd'"),
            Tok::Lhd => f.write_str("'lhd'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'&' => Tok::And,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'|' if bytes.get(i + 1) == Some(&b'-') => {
                out.push((i, Tok::Turnstile));
                i += 2;
                continue;
            }
            b'|' => Tok::Or,
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "top" => Tok::Top,
                    "bot" => Tok::Bot,
                    "box" => Tok::Box,
                    "dia" => Tok::Dia,
                    "rhd" => Tok::Rhd,
                    "lhd" => Tok::Lhd,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((start, tok));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().expect("index is on a char boundary");
                return Err(ParseError { position: i, message: format!("unexpected character {ch:?}") });
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { position: self.offset(), message: message.into() }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {t}")),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conj()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let wrap: fn(Formula) -> Formula = match self.peek() {
            Some(Tok::Box) => Formula::boxed,
            Some(Tok::Dia) => Formula::dia,
            Some(Tok::Rhd) => Formula::rhd,
            Some(Tok::Lhd) => Formula::lhd,
            _ => return self.primary(),
        };
        self.pos += 1;
        Ok(wrap(self.unary()?))
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let phi = match self.peek() {
            Some(Tok::Top) => Formula::Top,
            Some(Tok::Bot) => Formula::Bot,
            Some(Tok::Ident(name)) => Formula::Atom(name.clone()),
            Some(Tok::LParen) => {
                let open = self.offset();
                self.pos += 1;
                let inner = self.disj()?;
                if self.peek() != Some(&Tok::RParen) {
                    let mut e = self.unexpected("')'");
                    e.message.push_str(&format!(" (to close '(' at {open})"));
                    return Err(e);
                }
                self.pos += 1;
                return Ok(inner);
            }
            _ => return Err(self.unexpected("a formula")),
        };
        self.pos += 1;
        Ok(phi)
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of input")),
        }
    }
}

fn parser(text: &str) -> Result<Parser, ParseError> {
    Ok(Parser { toks: lex(text)?, pos: 0, end: text.len() })
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = parser(text)?;
    let phi = p.disj()?;
    p.finish()?;
    Ok(phi)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = parser(text)?;
    if !p.toks.iter().any(|(_, t)| *t == Tok::Turnstile) {
        return Err(ParseError { position: text.len(), message: "missing turnstile '|-'".into() });
    }
    let lhs = p.disj()?;
    if p.peek() != Some(&Tok::Turnstile) {
        return Err(p.unexpected("'|-'"));
    }
    p.pos += 1;
    let rhs = p.disj()?;
    p.finish()?;
    Ok(Sequent { lhs, rhs })
}

/// The axioms of the basic logic, in the order they are usually displayed.
pub const AXIOMS: [&str; 11] = [
    "p |- p",
    "bot |- p",
    "p |- top",
    "p |- p | q",
    "q |- p | q",
    "p & q |- p",
    "p & q |- q",
    "top |- box top",
    "box p & box q |- box (p & q)",
    "dia bot |- bot",
    "dia (p | q) |- dia p | dia q",
];

pub fn axiom_catalogue() -> Vec<Sequent> {
    AXIOMS.iter().map(|s| parse_sequent(s).expect("catalogue axioms parse")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }
    fn r() -> Formula {
        Formula::atom("r")
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_formula("box p & q").unwrap(), Formula::and(Formula::boxed(p()), q()));
        assert_eq!(parse_formula("p | q & r").unwrap(), Formula::or(p(), Formula::and(q(), r())));
        assert_eq!(parse_formula("dia (p | bot)").unwrap(), Formula::dia(Formula::or(p(), Formula::Bot)));
        assert_eq!(parse_formula("p & q & r").unwrap(), Formula::and(Formula::and(p(), q()), r()));
        assert_eq!(parse_formula("p | q | r").unwrap(), Formula::or(Formula::or(p(), q()), r()));
        assert_eq!(parse_formula("box dia lhd rhd p").unwrap(), Formula::boxed(Formula::dia(Formula::lhd(Formula::rhd(p())))));
    }

    #[test]
    fn sequents() {
        assert_eq!(parse_sequent("p & q |- p").unwrap(), Sequent::new(Formula::and(p(), q()), p()));
        assert_eq!(parse_sequent("top |- box top").unwrap(), Sequent::new(Formula::Top, Formula::boxed(Formula::Top)));
        assert_eq!(
            parse_sequent("dia (p | q) |- dia p | dia q").unwrap(),
            Sequent::new(
                Formula::dia(Formula::or(p(), q())),
                Formula::or(Formula::dia(p()), Formula::dia(q()))
            )
        );
        let e = parse_sequent("p & q").unwrap_err();
        assert!(e.message.contains("turnstile"));
        assert!(parse_sequent("p |- q |- r").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("p & (q | r").unwrap_err();
        assert_eq!(e.position, 10);
        let e = parse_formula("p & & q").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse_formula("p $ q").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(parse_formula("").is_err());
        assert!(parse_formula("p)").is_err());
        assert!(parse_formula("box").is_err());
    }

    #[test]
    fn keywords_need_word_boundaries() {
        assert_eq!(parse_formula("boxer").unwrap(), Formula::atom("boxer"));
        assert_eq!(parse_formula("top_1").unwrap(), Formula::atom("top_1"));
        assert_eq!(parse_formula("_x9").unwrap(), Formula::atom("_x9"));
    }

    #[test]
    fn printer_is_minimal() {
        for s in ["p & q | r", "p & (q | r)", "(p | q) & r", "box (p & q)", "p | (q | r)", "p & (q & r)", "dia bot"] {
            assert_eq!(parse_formula(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn catalogue() {
        let axioms = axiom_catalogue();
        assert_eq!(axioms.len(), 11);
        assert!(axioms.contains(&parse_sequent("bot |- p").unwrap()));
        assert!(axioms.contains(&parse_sequent("box p & box q |- box (p & q)").unwrap()));
        for (ax, text) in axioms.iter().zip(AXIOMS) {
            assert_eq!(ax.to_string(), text);
        }
    }

    #[test]
    fn atoms_are_sorted_and_deduplicated() {
        let s = parse_sequent("q & p |- box (p | r)").unwrap();
        assert_eq!(s.atoms().into_iter().collect::<Vec<_>>(), vec!["p", "q", "r"]);
    }
}
