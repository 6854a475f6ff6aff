//! Ray-set files: one ray per line, whitespace-separated components, `#`
//! starts a comment. A component is an arithmetic expression without spaces
//! over numbers, `sqrt(..)`, `i`, parentheses and `+ - * /`, so `1/sqrt(2)`,
//! `-sqrt(2)` and `0.5+0.5i` are all accepted. An optional leading token
//! ending in `:` labels the ray.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Normalized rays with labels. No two rays coincide.
#[derive(Debug, Clone)]
pub struct RaySet {
    rays: Vec<Vec<Complex64>>,
    labels: Vec<String>,
}

const DUPLICATE_TOL: f64 = 1e-10;

impl RaySet {
    pub fn new(vectors: Vec<Vec<Complex64>>, labels: Vec<String>) -> Result<Self> {
        if vectors.len() != labels.len() {
            return Err(Error::InvalidState("one label per ray required".into()));
        }
        let dim = vectors.first().map_or(0, Vec::len);
        let mut rays = Vec::with_capacity(vectors.len());
        for (i, v) in vectors.into_iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            let n = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
            if !n.is_finite() || n <= 1e-12 {
                return Err(Error::InvalidState(format!("ray {i} has zero norm")));
            }
            rays.push(v.into_iter().map(|z| z / n).collect::<Vec<_>>());
        }
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if inner_abs(&rays[i], &rays[j]) > 1.0 - DUPLICATE_TOL {
                    return Err(Error::DuplicateRay { first: i, second: j });
                }
            }
        }
        Ok(Self { rays, labels })
    }

    pub fn from_real(vectors: &[Vec<f64>]) -> Result<Self> {
        let labels = (0..vectors.len()).map(|i| format!("r{i}")).collect();
        Self::new(
            vectors
                .iter()
                .map(|v| v.iter().map(|x| Complex64::new(*x, 0.0)).collect())
                .collect(),
            labels,
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut vectors = Vec::new();
        let mut labels = Vec::new();
        let mut dim = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut tokens: Vec<&str> = content.split_whitespace().collect();
            let label = match tokens.first() {
                Some(t) if t.ends_with(':') => {
                    let l = t.trim_end_matches(':').to_string();
                    tokens.remove(0);
                    l
                }
                _ => format!("r{}", vectors.len()),
            };
            let v = tokens
                .iter()
                .map(|t| {
                    parse_component(t).map_err(|message| Error::Parse {
                        line,
                        message: format!("component '{t}': {message}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match dim {
                None if v.len() < 2 => {
                    return Err(Error::Parse {
                        line,
                        message: "a ray needs at least two components".into(),
                    })
                }
                None => dim = Some(v.len()),
                Some(d) if d != v.len() => {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected {d} components, found {}", v.len()),
                    })
                }
                _ => {}
            }
            if v.iter().all(|z| z.norm() < 1e-12) {
                return Err(Error::Parse {
                    line,
                    message: "zero vector".into(),
                });
            }
            vectors.push(v);
            labels.push(label);
        }
        Self::new(vectors, labels)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn rays(&self) -> &[Vec<Complex64>] {
        &self.rays
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

pub(crate) fn inner_abs(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm()
}

fn parse_component(token: &str) -> std::result::Result<Complex64, String> {
    let mut p = Parser {
        s: token.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    if p.pos != p.s.len() {
        return Err(format!("unexpected '{}'", &token[p.pos..]));
    }
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err("not a finite number".into());
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> std::result::Result<Complex64, String> {
        let mut v = self.term()?;
        loop {
            if self.eat(b'+') {
                v += self.term()?;
            } else if self.eat(b'-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Complex64, String> {
        let mut v = self.unary()?;
        loop {
            if self.eat(b'*') {
                v *= self.unary()?;
            } else if self.eat(b'/') {
                let d = self.unary()?;
                if d.norm() == 0.0 {
                    return Err("division by zero".into());
                }
                v /= d;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<Complex64, String> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> std::result::Result<Complex64, String> {
        if self.eat(b'(') {
            let v = self.expr()?;
            return if self.eat(b')') {
                Ok(v)
            } else {
                Err("missing ')'".into())
            };
        }
        if self.s[self.pos..].starts_with(b"sqrt(") {
            self.pos += 5;
            let v = self.expr()?;
            if !self.eat(b')') {
                return Err("missing ')'".into());
            }
            return Ok(v.sqrt());
        }
        if self.eat(b'i') {
            return Ok(Complex64::i());
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            let exponent_sign = (c == b'-' || c == b'+')
                && self.pos > start
                && matches!(self.s[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exponent_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(match self.peek() {
                Some(c) => format!("unexpected '{}'", c as char),
                None => "unexpected end".into(),
            });
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).map_err(|e| e.to_string())?;
        let x: f64 = text.parse().map_err(|_| format!("bad number '{text}'"))?;
        let imaginary = self.eat(b'i');
        Ok(if imaginary {
            Complex64::new(0.0, x)
        } else {
            Complex64::new(x, 0.0)
        })
    }
}
