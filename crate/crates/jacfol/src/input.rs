//! Input documents: a JSON schema describing the two foliations and the
//! analysis options, with polynomials accepted both as expression strings
//! and as coefficient tables.

use num::rational::BigRational;
use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::branch::Branch;
use crate::foliation::FoliationModel;
use crate::form::OneForm;
use crate::poly2::Poly2;
use crate::scalar::Scalar;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Document {
    pub version: u32,
    pub foliation_f: FoliationSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub foliation_g: Option<FoliationSpec>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Options {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramification: Option<u32>,
    /// Index k for the semiroot command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semiroot_index: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FoliationSpec {
    OneForm {
        a: PolySpec,
        b: PolySpec,
        #[serde(default)]
        separatrices: Vec<BranchSpec>,
    },
    Hamiltonian {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        f: Option<PolySpec>,
        #[serde(default)]
        branches: Vec<BranchSpec>,
    },
    Logarithmic {
        branches: Vec<BranchSpec>,
        weights: Vec<String>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolySpec {
    Expression(String),
    Table(Vec<TableTerm>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableTerm {
    pub i: u32,
    pub j: u32,
    pub c: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BranchSpec {
    pub label: String,
    #[serde(default = "one")]
    pub mult: u32,
    /// Pairs [t-exponent, coefficient string].
    pub terms: Vec<(u32, String)>,
    pub trunc: u32,
}

fn one() -> u32 {
    1
}

/// Parse a rational literal like "3", "-7/11".
pub fn parse_rational(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Input(format!("bad rational literal: {s}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Input(format!("bad rational literal: {s}")))?;
    if d == BigInt::from(0) {
        return Err(Error::Input(format!("zero denominator in literal: {s}")));
    }
    Ok(Scalar::Rat(BigRational::new(n, d)))
}

// --- expression parser -------------------------------------------------------

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    X,
    Y,
    Num(Scalar),
    End,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn next(&mut self) -> Result<Tok> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(Tok::End);
        }
        let c = self.src[self.pos];
        self.pos += 1;
        Ok(match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'x' => Tok::X,
            b'y' => Tok::Y,
            b'0'..=b'9' => {
                let start = self.pos - 1;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'/')
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Tok::Num(parse_rational(text)?)
            }
            other => {
                return Err(Error::Input(format!(
                    "unexpected character '{}' at offset {}",
                    other as char,
                    self.pos - 1
                )))
            }
        })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    cur: Tok,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Parser<'a>> {
        let mut lexer = Lexer::new(src);
        let cur = lexer.next()?;
        Ok(Parser { lexer, cur })
    }

    fn bump(&mut self) -> Result<()> {
        self.cur = self.lexer.next()?;
        Ok(())
    }

    fn expr(&mut self) -> Result<Poly2> {
        let mut acc = self.term()?;
        loop {
            match self.cur {
                Tok::Plus => {
                    self.bump()?;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump()?;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly2> {
        let mut acc = self.factor()?;
        while self.cur == Tok::Star {
            self.bump()?;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly2> {
        if self.cur == Tok::Minus {
            self.bump()?;
            return Ok(self.factor()?.neg());
        }
        let base = match self.cur.clone() {
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                if self.cur != Tok::RParen {
                    return Err(Error::Input("missing closing parenthesis".into()));
                }
                self.bump()?;
                inner
            }
            Tok::X => {
                self.bump()?;
                Poly2::x()
            }
            Tok::Y => {
                self.bump()?;
                Poly2::y()
            }
            Tok::Num(c) => {
                self.bump()?;
                Poly2::constant(c)
            }
            other => return Err(Error::Input(format!("unexpected token {:?}", other))),
        };
        if self.cur == Tok::Caret {
            self.bump()?;
            match self.cur.clone() {
                Tok::Num(c) => {
                    self.bump()?;
                    let e = c
                        .as_rat()
                        .filter(|r| num::One::is_one(r.denom()) && !num::Signed::is_negative(r.numer()))
                        .map(|r| r.numer().to_string())
                        .and_then(|s| s.parse::<u32>().ok())
                        .ok_or_else(|| Error::Input("exponent must be a natural number".into()))?;
                    Ok(base.pow(e))
                }
                other => Err(Error::Input(format!("bad exponent token {:?}", other))),
            }
        } else {
            Ok(base)
        }
    }
}

/// Parse a polynomial expression over +, -, *, ^ in x and y with rational
/// literals.
pub fn parse_poly_expression(src: &str) -> Result<Poly2> {
    let mut p = Parser::new(src)?;
    let out = p.expr()?;
    if p.cur != Tok::End {
        return Err(Error::Input(format!("trailing input after expression: {:?}", p.cur)));
    }
    Ok(out)
}

impl PolySpec {
    pub fn to_poly(&self) -> Result<Poly2> {
        match self {
            PolySpec::Expression(s) => parse_poly_expression(s),
            PolySpec::Table(rows) => {
                let mut p = Poly2::zero();
                for r in rows {
                    p.insert(r.i, r.j, parse_rational(&r.c)?);
                }
                Ok(p)
            }
        }
    }

    pub fn canonical(p: &Poly2) -> PolySpec {
        PolySpec::Table(
            p.terms
                .iter()
                .map(|(&(i, j), c)| TableTerm {
                    i,
                    j,
                    c: format!("{}", c),
                })
                .collect(),
        )
    }
}

impl BranchSpec {
    pub fn to_branch(&self, trunc_override: Option<u32>) -> Result<Branch> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            terms.push((*e, parse_rational(c)?));
        }
        let trunc = trunc_override.map_or(self.trunc, |t| t.max(self.trunc));
        let b = Branch::new(self.mult, terms, trunc, &self.label)?;
        if !b.is_primitive() {
            return Err(Error::Input(format!(
                "branch {}: non-primitive parametrization",
                self.label
            )));
        }
        if b.tangent_to_vertical_axis() {
            return Err(Error::Input(format!(
                "branch {}: tangent to x = 0; rotate coordinates",
                self.label
            )));
        }
        Ok(b)
    }

    pub fn canonical(b: &Branch) -> BranchSpec {
        BranchSpec {
            label: b.label.clone(),
            mult: b.mult,
            terms: b
                .terms
                .iter()
                .map(|(e, c)| (*e, format!("{}", c)))
                .collect(),
            trunc: b.trunc,
        }
    }
}

/// A parsed and validated foliation input.
pub enum ParsedFoliation {
    Model(FoliationModel),
    /// Explicit form without separatrices: only first-divisor analysis.
    BareForm(OneForm),
}

impl FoliationSpec {
    pub fn parse(&self, trunc_override: Option<u32>) -> Result<ParsedFoliation> {
        match self {
            FoliationSpec::OneForm { a, b, separatrices } => {
                let form = OneForm::new(a.to_poly()?, b.to_poly()?)
                    .map_err(|_| Error::Input("zero 1-form".into()))?;
                if separatrices.is_empty() {
                    Ok(ParsedFoliation::BareForm(form))
                } else {
                    let branches: Vec<Branch> = separatrices
                        .iter()
                        .map(|s| s.to_branch(trunc_override))
                        .collect::<Result<_>>()?;
                    Ok(ParsedFoliation::Model(FoliationModel::explicit(
                        form, branches,
                    )?))
                }
            }
            FoliationSpec::Hamiltonian { f, branches } => {
                if !branches.is_empty() {
                    let bs: Vec<Branch> = branches
                        .iter()
                        .map(|s| s.to_branch(trunc_override))
                        .collect::<Result<_>>()?;
                    Ok(ParsedFoliation::Model(FoliationModel::hamiltonian(bs)?))
                } else if let Some(fp) = f {
                    let poly = fp.to_poly()?;
                    let form = OneForm::differential(&poly)
                        .map_err(|_| Error::Input("constant hamiltonian".into()))?;
                    Ok(ParsedFoliation::BareForm(form))
                } else {
                    Err(Error::Input(
                        "hamiltonian needs either an equation or branches".into(),
                    ))
                }
            }
            FoliationSpec::Logarithmic { branches, weights } => {
                if branches.is_empty() {
                    return Err(Error::Input("logarithmic model without branches".into()));
                }
                let bs: Vec<Branch> = branches
                    .iter()
                    .map(|s| s.to_branch(trunc_override))
                    .collect::<Result<_>>()?;
                let ws: Vec<Scalar> = weights
                    .iter()
                    .map(|w| parse_rational(w))
                    .collect::<Result<_>>()?;
                Ok(ParsedFoliation::Model(FoliationModel::logarithmic(bs, ws)?))
            }
        }
    }
}

/// Parse a document from JSON with schema validation.
pub fn parse_document(text: &str) -> Result<Document> {
    if text.trim().is_empty() {
        return Err(Error::Input("empty document".into()));
    }
    let doc: Document = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("schema violation at line {}: {}", e.line(), e)))?;
    if doc.version != SCHEMA_VERSION {
        return Err(Error::Input(format!(
            "unsupported schema version {} (expected {})",
            doc.version, SCHEMA_VERSION
        )));
    }
    Ok(doc)
}

/// Canonical re-emission: polynomials as sorted coefficient tables, branch
/// terms normalized, scalars reduced.
pub fn canonical_document(doc: &Document) -> Result<Document> {
    let trunc = doc.options.truncation;
    let canon_spec = |spec: &FoliationSpec| -> Result<FoliationSpec> {
        Ok(match spec {
            FoliationSpec::OneForm { a, b, separatrices } => FoliationSpec::OneForm {
                a: PolySpec::canonical(&a.to_poly()?),
                b: PolySpec::canonical(&b.to_poly()?),
                separatrices: separatrices
                    .iter()
                    .map(|s| Ok(BranchSpec::canonical(&s.to_branch(trunc)?)))
                    .collect::<Result<_>>()?,
            },
            FoliationSpec::Hamiltonian { f, branches } => FoliationSpec::Hamiltonian {
                f: match f {
                    Some(fp) => Some(PolySpec::canonical(&fp.to_poly()?)),
                    None => None,
                },
                branches: branches
                    .iter()
                    .map(|s| Ok(BranchSpec::canonical(&s.to_branch(trunc)?)))
                    .collect::<Result<_>>()?,
            },
            FoliationSpec::Logarithmic { branches, weights } => FoliationSpec::Logarithmic {
                branches: branches
                    .iter()
                    .map(|s| Ok(BranchSpec::canonical(&s.to_branch(trunc)?)))
                    .collect::<Result<_>>()?,
                weights: weights
                    .iter()
                    .map(|w| Ok(format!("{}", parse_rational(w)?)))
                    .collect::<Result<_>>()?,
            },
        })
    };
    Ok(Document {
        version: doc.version,
        foliation_f: canon_spec(&doc.foliation_f)?,
        foliation_g: match &doc.foliation_g {
            Some(g) => Some(canon_spec(g)?),
            None => None,
        },
        options: doc.options.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_parser() {
        let p = parse_poly_expression("y^2 - x^3").unwrap();
        let mut expect = Poly2::zero();
        expect.insert(0, 2, Scalar::from_int(1));
        expect.insert(3, 0, Scalar::from_int(-1));
        assert_eq!(p, expect);
        let q = parse_poly_expression("(y - x) * (y + 2*x) - 1/2 * x^2").unwrap();
        let mut e2 = Poly2::zero();
        e2.insert(0, 2, Scalar::from_int(1));
        e2.insert(1, 1, Scalar::from_int(1));
        e2.insert(2, 0, Scalar::ratio(-5, 2));
        assert_eq!(q, e2);
        assert!(parse_poly_expression("y +").is_err());
        assert!(parse_poly_expression("z").is_err());
    }

    #[test]
    fn document_roundtrip() {
        let text = r#"{
            "version": 1,
            "foliation_f": {
                "kind": "logarithmic",
                "branches": [
                    {"label": "C1", "terms": [[1, "2/2"]], "trunc": 16}
                ],
                "weights": ["2/4"]
            },
            "foliation_g": {
                "kind": "hamiltonian",
                "f": "y^2 - x^3"
            },
            "options": {"seed": 7}
        }"#;
        let doc = parse_document(text).unwrap();
        let canon = canonical_document(&doc).unwrap();
        let emitted = serde_json::to_string_pretty(&canon).unwrap();
        let reparsed = parse_document(&emitted).unwrap();
        let canon2 = canonical_document(&reparsed).unwrap();
        assert_eq!(
            serde_json::to_string(&canon).unwrap(),
            serde_json::to_string(&canon2).unwrap()
        );
        // weights got reduced
        match &canon.foliation_f {
            FoliationSpec::Logarithmic { weights, .. } => {
                assert_eq!(weights, &vec!["1/2".to_string()])
            }
            _ => panic!(),
        }
    }

    #[test]
    fn validation_errors() {
        assert!(parse_document("").is_err());
        assert!(parse_document("{}").is_err());
        // zero weight rejected downstream
        let text = r#"{
            "version": 1,
            "foliation_f": {
                "kind": "logarithmic",
                "branches": [{"label": "C1", "terms": [[1, "1"]], "trunc": 8}],
                "weights": ["0"]
            }
        }"#;
        let doc = parse_document(text).unwrap();
        assert!(doc.foliation_f.parse(None).is_err());
        // non-primitive branch rejected
        let text2 = r#"{
            "version": 1,
            "foliation_f": {
                "kind": "hamiltonian",
                "branches": [{"label": "B", "mult": 4, "terms": [[6, "1"]], "trunc": 12}]
            }
        }"#;
        let doc2 = parse_document(text2).unwrap();
        assert!(doc2.foliation_f.parse(None).is_err());
    }
}
