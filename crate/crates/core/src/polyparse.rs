//! Parsing of polynomial expressions and problem files.
//!
//! Expression grammar (whitespace-insensitive):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' factor) | powered)*      adjacency multiplies
//! factor  := '-' factor | powered
//! powered := primary ('^' integer)?
//! primary := integer | variable | '(' expr ')'
//! ```
//!
//! Identifiers are read by maximal munch and must exactly match a declared
//! variable name: with variables `v` and `z`, the input `v z` is a product
//! while `vz` is an unknown-identifier error, never a silent product.
//!
//! Problem files are flat `key = value` lines (`p`, `vars`, `q`,
//! `algorithm`, and one `poly` per generator), with `#` starting a comment.

use crate::frobenius::{Algorithm, ProblemSpec};
use crate::koszul::cone_dimension;
use crate::polyring::{Homogeneity, Mono, Poly, Ring, MAX_DEGREE, MAX_VARS};
use crate::{Error, Result};

/// One polynomial expression together with the context needed to read it.
#[derive(Debug, Clone)]
pub struct PolySource<'a> {
    pub text: &'a str,
    pub variables: &'a [String],
    pub p: u64,
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic()
}

fn is_ident_continue(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn validate_variables(vars: &[String]) -> Result<()> {
    if vars.is_empty() {
        return Err(Error::Input("at least one variable is required".into()));
    }
    if vars.len() > MAX_VARS {
        return Err(Error::Input(format!(
            "{} variables declared; at most {MAX_VARS} are supported",
            vars.len()
        )));
    }
    for (i, v) in vars.iter().enumerate() {
        let bytes = v.as_bytes();
        let well_formed = !bytes.is_empty()
            && is_ident_start(bytes[0])
            && bytes.iter().all(|&b| is_ident_continue(b));
        if !well_formed {
            return Err(Error::Input(format!("invalid variable name `{v}`")));
        }
        if vars[..i].contains(v) {
            return Err(Error::Input(format!("duplicate variable name `{v}`")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Int(u64),
    Var(usize),
}

fn tok_str(t: Tok) -> String {
    match t {
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Int(v) => format!("`{v}`"),
        Tok::Var(_) => "variable".into(),
    }
}

struct Spanned {
    tok: Tok,
    offset: usize,
}

fn lex(text: &str, variables: &[String]) -> Result<Vec<Spanned>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let tok = match bytes[i] {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let mut v: u64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    v = v
                        .checked_mul(10)
                        .and_then(|x| x.checked_add((bytes[i] - b'0') as u64))
                        .ok_or_else(|| Error::Parse {
                            offset: start,
                            message: "integer literal too large".into(),
                        })?;
                    i += 1;
                }
                out.push(Spanned { tok: Tok::Int(v), offset: start });
                continue;
            }
            b if is_ident_start(b) => {
                while i < bytes.len() && is_ident_continue(bytes[i]) {
                    i += 1;
                }
                let name = &text[start..i];
                let Some(idx) = variables.iter().position(|v| v == name) else {
                    return Err(Error::Parse {
                        offset: start,
                        message: format!("unknown identifier `{name}`"),
                    });
                };
                out.push(Spanned { tok: Tok::Var(idx), offset: start });
                continue;
            }
            b => {
                return Err(Error::Parse {
                    offset: start,
                    message: format!("unexpected character `{}`", b as char),
                });
            }
        };
        i += 1;
        out.push(Spanned { tok, offset: start });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    ring: Ring,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|s| s.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |s| s.offset)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok;
        self.pos += 1;
        t
    }

    fn parse_expr(&mut self) -> Result<Poly> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.parse_term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.parse_term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Poly> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.parse_factor()?);
                }
                // Adjacent factors multiply; a leading '-' never joins a
                // product this way, so `a - b` stays a difference.
                Some(Tok::Int(_) | Tok::Var(_) | Tok::LParen) => {
                    acc = acc.mul(&self.parse_powered()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Poly> {
        if self.peek() == Some(Tok::Minus) {
            self.bump();
            return Ok(self.parse_factor()?.neg());
        }
        self.parse_powered()
    }

    fn parse_powered(&mut self) -> Result<Poly> {
        let base = self.parse_primary()?;
        if self.peek() != Some(Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let off = self.offset();
        let Some(Tok::Int(e)) = self.peek() else {
            return Err(Error::Parse {
                offset: off,
                message: "expected a nonnegative integer exponent".into(),
            });
        };
        self.bump();
        let too_big = e > u32::MAX as u64
            || base
                .max_deg()
                .is_some_and(|d| d as u64 * e > MAX_DEGREE as u64);
        if too_big {
            return Err(Error::Parse {
                offset: off,
                message: format!("exponent {e} overflows the supported degree range"),
            });
        }
        Ok(base.pow(e as u32))
    }

    fn parse_primary(&mut self) -> Result<Poly> {
        let off = self.offset();
        match self.peek() {
            Some(Tok::Int(v)) => {
                self.bump();
                Ok(Poly::constant(self.ring, self.ring.fp().reduce(v)))
            }
            Some(Tok::Var(i)) => {
                self.bump();
                Ok(Poly::monomial(self.ring, Mono::var(i), 1))
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.parse_expr()?;
                if self.peek() != Some(Tok::RParen) {
                    return Err(Error::Parse {
                        offset: self.offset(),
                        message: "unbalanced parentheses: expected `)`".into(),
                    });
                }
                self.bump();
                Ok(inner)
            }
            Some(t) => Err(Error::Parse {
                offset: off,
                message: format!("expected a number, variable, or `(`, found {}", tok_str(t)),
            }),
            None => Err(Error::Parse {
                offset: off,
                message: "unexpected end of expression".into(),
            }),
        }
    }
}

/// Parses one polynomial expression; coefficients land in canonical residues
/// mod `p`.
pub fn parse_poly(src: &PolySource<'_>) -> Result<Poly> {
    validate_variables(src.variables)?;
    let ring = Ring::new(src.p, src.variables.len())?;
    let toks = lex(src.text, src.variables)?;
    let mut parser = Parser { toks, pos: 0, ring, end: src.text.len() };
    if parser.toks.is_empty() {
        return Err(Error::Parse { offset: 0, message: "empty expression".into() });
    }
    let poly = parser.parse_expr()?;
    if parser.pos != parser.toks.len() {
        return Err(Error::Parse {
            offset: parser.offset(),
            message: format!("unexpected {}", tok_str(parser.peek().unwrap())),
        });
    }
    Ok(poly)
}

/// Renders a monomial as `X0^2*Y`-style text; the empty product is `1`.
pub fn mono_to_string(m: &Mono, variables: &[String]) -> String {
    let mut parts = Vec::new();
    for (v, name) in variables.iter().enumerate() {
        match m.0[v] {
            0 => {}
            1 => parts.push(name.clone()),
            e => parts.push(format!("{name}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Renders a polynomial so that [`parse_poly`] reads it back unchanged.
pub fn poly_to_string(f: &Poly, variables: &[String]) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = f
        .terms()
        .iter()
        .map(|(m, c)| {
            if m.is_one() {
                format!("{c}")
            } else if *c == 1 {
                mono_to_string(m, variables)
            } else {
                format!("{c}*{}", mono_to_string(m, variables))
            }
        })
        .collect();
    parts.join(" + ")
}

/// Cohomology degree selection from a problem file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QSetting {
    /// Use the dimension of the variety the generators cut out.
    Auto,
    Explicit(usize),
}

/// A parsed problem file, with the generator expressions kept as text so the
/// same problem can be re-read over a different prime.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub p: u64,
    pub variables: Vec<String>,
    pub q: QSetting,
    pub algorithm: Algorithm,
    pub poly_texts: Vec<String>,
    poly_offsets: Vec<usize>,
}

impl ProblemFile {
    pub fn to_spec(&self) -> Result<ProblemSpec> {
        self.with_prime(self.p)
    }

    /// Re-reads the stored generator expressions over the given prime.
    /// Expression errors carry offsets into the original file text.
    pub fn with_prime(&self, p: u64) -> Result<ProblemSpec> {
        validate_variables(&self.variables)?;
        let mut gens = Vec::with_capacity(self.poly_texts.len());
        for (i, (text, base)) in self.poly_texts.iter().zip(&self.poly_offsets).enumerate() {
            let src = PolySource { text, variables: &self.variables, p };
            let f = parse_poly(&src).map_err(|e| match e {
                Error::Parse { offset, message } => Error::Parse {
                    offset: base + offset,
                    message: format!("generator {}: {message}", i + 1),
                },
                other => other,
            })?;
            if let Homogeneity::Inhomogeneous(a, b) = f.homogeneity() {
                return Err(Error::Input(format!(
                    "generator {} is not homogeneous: terms {} and {} have different degrees",
                    i + 1,
                    mono_to_string(&a, &self.variables),
                    mono_to_string(&b, &self.variables),
                )));
            }
            gens.push(f);
        }
        let q = match self.q {
            QSetting::Explicit(q) => q,
            QSetting::Auto => {
                let dim = cone_dimension(&gens)?;
                if dim == 0 {
                    return Err(Error::Input(
                        "q = auto needs a nonempty variety, but the generators cut out only \
                         the origin"
                            .into(),
                    ));
                }
                dim - 1
            }
        };
        ProblemSpec::new(gens, q, self.algorithm)
    }
}

/// Parses the flat `key = value` problem format. `p`, `vars`, `q`, and at
/// least one `poly` line are required; `algorithm` defaults to `auto`.
pub fn parse_problem_file(text: &str) -> Result<ProblemFile> {
    let mut p: Option<u64> = None;
    let mut variables: Option<Vec<String>> = None;
    let mut q: Option<QSetting> = None;
    let mut algorithm: Option<Algorithm> = None;
    let mut poly_texts = Vec::new();
    let mut poly_offsets = Vec::new();

    let mut line_start = 0;
    for (lineno, raw) in text.split('\n').enumerate() {
        let next_start = line_start + raw.len() + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            line_start = next_start;
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(Error::Input(format!(
                "line {}: expected `key = value`",
                lineno + 1
            )));
        };
        let key = line[..eq].trim();
        let value = line[eq + 1..].trim();
        let dup = |k: &str| Error::Input(format!("line {}: duplicate key `{k}`", lineno + 1));
        match key {
            "p" => {
                if p.is_some() {
                    return Err(dup("p"));
                }
                p = Some(value.parse().map_err(|_| {
                    Error::Input(format!("line {}: invalid value for p: `{value}`", lineno + 1))
                })?);
            }
            "vars" => {
                if variables.is_some() {
                    return Err(dup("vars"));
                }
                variables = Some(value.split_whitespace().map(String::from).collect());
            }
            "q" => {
                if q.is_some() {
                    return Err(dup("q"));
                }
                q = Some(if value == "auto" {
                    QSetting::Auto
                } else {
                    QSetting::Explicit(value.parse().map_err(|_| {
                        Error::Input(format!(
                            "line {}: q must be a nonnegative integer or `auto`, got `{value}`",
                            lineno + 1
                        ))
                    })?)
                });
            }
            "algorithm" => {
                if algorithm.is_some() {
                    return Err(dup("algorithm"));
                }
                algorithm = Some(match value {
                    "auto" => Algorithm::Auto,
                    "general" => Algorithm::General,
                    "ci" | "complete_intersection" => Algorithm::CompleteIntersection,
                    other => {
                        return Err(Error::Input(format!(
                            "line {}: unknown algorithm `{other}` (expected auto, general, \
                             or ci)",
                            lineno + 1
                        )));
                    }
                });
            }
            "poly" => {
                let value_off = line_start + eq + 1 + (line[eq + 1..].len() - line[eq + 1..].trim_start().len());
                poly_texts.push(value.to_string());
                poly_offsets.push(value_off);
            }
            other => {
                return Err(Error::Input(format!(
                    "line {}: unknown key `{other}`",
                    lineno + 1
                )));
            }
        }
        line_start = next_start;
    }

    let missing = |k: &str| Error::Input(format!("missing key `{k}`"));
    let p = p.ok_or_else(|| missing("p"))?;
    let variables = variables.ok_or_else(|| missing("vars"))?;
    let q = q.ok_or_else(|| missing("q"))?;
    if poly_texts.is_empty() {
        return Err(missing("poly"));
    }
    validate_variables(&variables)?;
    Ok(ProblemFile {
        p,
        variables,
        q,
        algorithm: algorithm.unwrap_or(Algorithm::Auto),
        poly_texts,
        poly_offsets,
    })
}

/// Parses a problem file straight to a validated [`ProblemSpec`].
pub fn parse_problem(text: &str) -> Result<ProblemSpec> {
    parse_problem_file(text)?.to_spec()
}
