//! Configuration documents: `key = value` lines, `[section]` headers, `#` comments.
//! See `docs/config.md` for the grammar.

use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{ConfigError, ModelError};
use crate::model::{
    BoundaryComponent, BoundaryKind, EndPotential, GramMatrix, ManifoldSpec, Phi0, PiScalar, PotentialSpec, Rational,
};
use crate::topology::gauge::CohomologyPresentation;
use crate::topology::{FieldClass, FieldComponent};

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceSection {
    pub cusps: usize,
    pub orientable: bool,
    pub b_class: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CohomologySection {
    pub presentation: CohomologyPresentation,
    /// Class of `B` on each cusp.
    pub b: Vec<Rational>,
}

/// Numerical knobs; every field has a default and is echoed in reports.
#[derive(Clone, Debug, PartialEq)]
pub struct Numerics {
    pub h: Option<f64>,
    pub r_max: Option<f64>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub samples: usize,
    pub tol: f64,
    pub mu_max: f64,
    pub continuum: bool,
    pub schedule: Vec<f64>,
    pub g_grid: Vec<Rational>,
    pub lambda_star: Option<f64>,
    /// `None` entries stand for `R = ∞`.
    pub mourre_r: Vec<Option<f64>>,
    pub window: Option<(f64, f64)>,
    pub mourre_length: f64,
    pub mourre_h: f64,
    pub s_weight: f64,
    pub z_samples: Vec<f64>,
    pub holder_lengths: Vec<f64>,
    pub zeta_s: Option<f64>,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            h: None,
            r_max: None,
            lambda_min: 1e3,
            lambda_max: 1e4,
            samples: 10,
            tol: 1e-10,
            mu_max: 100.0,
            continuum: false,
            schedule: vec![20.0, 40.0, 80.0],
            g_grid: Vec::new(),
            lambda_star: None,
            mourre_r: vec![Some(2.0), Some(4.0), Some(8.0)],
            window: None,
            mourre_length: 40.0,
            mourre_h: 0.05,
            s_weight: 1.0,
            z_samples: Vec::new(),
            holder_lengths: vec![40.0, 80.0, 160.0],
            zeta_s: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub spec: ManifoldSpec,
    pub potential: PotentialSpec,
    pub surface: Option<SurfaceSection>,
    pub cohomology: Option<CohomologySection>,
    pub field: Option<FieldClass>,
    pub numerics: Numerics,
}

// ---------------------------------------------------------------------------
// values

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Atom(String),
    List(Vec<Spanned>),
    /// `scalar * [[...]]`
    Scaled(String, Box<Spanned>),
}

#[derive(Clone, Debug, PartialEq)]
struct Spanned {
    value: Value,
    line: usize,
    column: usize,
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    offset: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize, offset: usize) -> Self {
        Self { chars: src.chars().collect(), pos: 0, line, offset, _src: src }
    }

    fn column(&self) -> usize {
        self.offset + self.pos + 1
    }

    fn err(&self, message: impl Into<String>) -> ConfigError {
        ConfigError::Syntax { line: self.line, column: self.column(), message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn value(&mut self) -> Result<Spanned, ConfigError> {
        self.skip_ws();
        let (line, column) = (self.line, self.column());
        match self.peek() {
            None => Err(self.err("missing value")),
            Some('[') => {
                self.pos += 1;
                let mut items = Vec::new();
                self.skip_ws();
                if self.peek() == Some(']') {
                    self.pos += 1;
                    return Ok(Spanned { value: Value::List(items), line, column });
                }
                loop {
                    items.push(self.value()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(']') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err("expected ',' or ']'")),
                    }
                }
                Ok(Spanned { value: Value::List(items), line, column })
            }
            Some(_) => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if matches!(c, ',' | ']' | '[' | '*') {
                        break;
                    }
                    self.pos += 1;
                }
                let atom: String = self.chars[start..self.pos].iter().collect::<String>().trim().to_string();
                if atom.is_empty() {
                    return Err(self.err("empty value"));
                }
                self.skip_ws();
                if self.peek() == Some('*') {
                    self.pos += 1;
                    let inner = self.value()?;
                    return Ok(Spanned { value: Value::Scaled(atom, Box::new(inner)), line, column });
                }
                Ok(Spanned { value: Value::Atom(atom), line, column })
            }
        }
    }
}

// ---------------------------------------------------------------------------
// scalar grammar

fn parse_decimal(text: &str) -> Option<Rational> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: i64 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let den = 10i64.checked_pow(frac.len() as u32)?;
    let q = Rational::new(num, den);
    Some(if neg { -q } else { q })
}

/// `a`, `a/b`, or a finite decimal, all exact.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((a, b)) = text.split_once('/') {
        let a = parse_decimal(a.trim())?;
        let b = parse_decimal(b.trim())?;
        if b.is_zero() {
            return None;
        }
        return Some(a / b);
    }
    parse_decimal(text)
}

/// `c`, `c pi`, `c pi^k`, `cpi`, `pi`, with `c` rational.
pub fn parse_pi_scalar(text: &str) -> Option<PiScalar> {
    let text = text.trim();
    let Some(idx) = text.find("pi") else {
        return parse_rational(text).map(PiScalar::rational);
    };
    let (coeff, rest) = text.split_at(idx);
    let rest = &rest[2..];
    let power = if rest.is_empty() {
        1
    } else {
        let k: u32 = rest.strip_prefix('^')?.trim().parse().ok()?;
        if k == 0 {
            return None;
        }
        k
    };
    let coeff = coeff.trim();
    let c = match coeff {
        "" => Rational::one(),
        "-" => -Rational::one(),
        _ => parse_rational(coeff)?,
    };
    Some(PiScalar::new(c, power))
}

/// Rationals, decimals with exponents, `inf`.
pub fn parse_real(text: &str) -> Option<f64> {
    let text = text.trim();
    if let Some(q) = parse_rational(text) {
        return Some(*q.numer() as f64 / *q.denom() as f64);
    }
    let v: f64 = text.parse().ok()?;
    (!v.is_nan()).then_some(v)
}

// ---------------------------------------------------------------------------
// typed access

struct Field<'a> {
    path: String,
    value: &'a Spanned,
}

impl Field<'_> {
    fn semantic(&self, message: impl Into<String>) -> ConfigError {
        ConfigError::semantic(self.path.clone(), message)
    }

    fn atom(&self) -> Result<&str, ConfigError> {
        match &self.value.value {
            Value::Atom(a) => Ok(a),
            _ => Err(self.semantic("expected a scalar")),
        }
    }

    fn list(&self) -> Result<Vec<Field<'_>>, ConfigError> {
        match &self.value.value {
            Value::List(items) => Ok(items
                .iter()
                .enumerate()
                .map(|(i, v)| Field { path: format!("{}[{i}]", self.path), value: v })
                .collect()),
            _ => Err(self.semantic("expected a list")),
        }
    }

    fn rational(&self) -> Result<Rational, ConfigError> {
        parse_rational(self.atom()?).ok_or_else(|| self.semantic("expected a rational p/q"))
    }

    fn pi_scalar(&self) -> Result<PiScalar, ConfigError> {
        parse_pi_scalar(self.atom()?).ok_or_else(|| self.semantic("expected a rational multiple of a power of pi"))
    }

    fn real(&self) -> Result<f64, ConfigError> {
        parse_real(self.atom()?).ok_or_else(|| self.semantic("expected a number"))
    }

    fn integer(&self) -> Result<usize, ConfigError> {
        self.atom()?.parse().map_err(|_| self.semantic("expected a non-negative integer"))
    }

    fn int64(&self) -> Result<i64, ConfigError> {
        self.atom()?.parse().map_err(|_| self.semantic("expected an integer"))
    }

    fn boolean(&self) -> Result<bool, ConfigError> {
        match self.atom()? {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(self.semantic("expected true or false")),
        }
    }

    fn rationals(&self) -> Result<Vec<Rational>, ConfigError> {
        self.list()?.iter().map(|f| f.rational()).collect()
    }

    fn reals(&self) -> Result<Vec<f64>, ConfigError> {
        self.list()?.iter().map(|f| f.real()).collect()
    }

    fn matrix<T>(&self, cell: impl Fn(&Field) -> Result<T, ConfigError>) -> Result<Vec<Vec<T>>, ConfigError> {
        self.list()?.iter().map(|row| row.list()?.iter().map(&cell).collect()).collect()
    }
}

#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<(String, Spanned)>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<Spanned> {
        let idx = self.entries.iter().position(|(k, _)| k == key)?;
        Some(self.entries.remove(idx).1)
    }

    fn path(&self, key: &str) -> String {
        if self.name.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.name)
        }
    }

    fn finish(self) -> Result<(), ConfigError> {
        match self.entries.first() {
            Some((k, _)) => Err(ConfigError::semantic(self.path(k), "unknown key")),
            None => Ok(()),
        }
    }
}

fn split_sections(text: &str) -> Result<Vec<Section>, ConfigError> {
    let mut sections = vec![Section { name: String::new(), line: 0, entries: Vec::new() }];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(ConfigError::Syntax { line: line_no, column: indent + trimmed.len() + 1, message: "expected ']'".into() });
            };
            let name = name.trim();
            let valid = !name.is_empty()
                && name.split('.').all(|part| !part.is_empty() && part.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-'));
            if !valid {
                return Err(ConfigError::Syntax { line: line_no, column: indent + 2, message: format!("invalid section name '{name}'") });
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(ConfigError::Syntax { line: line_no, column: indent + 2, message: format!("duplicate section [{name}]") });
            }
            sections.push(Section { name: name.to_string(), line: line_no, entries: Vec::new() });
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(ConfigError::Syntax { line: line_no, column: indent + 1, message: "expected 'key = value'".into() });
        };
        let key = line[..eq].trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(ConfigError::Syntax { line: line_no, column: indent + 1, message: format!("invalid key '{key}'") });
        }
        let mut cursor = Cursor::new(&line[eq + 1..], line_no, eq + 1);
        let value = cursor.value()?;
        cursor.skip_ws();
        if cursor.peek().is_some() {
            return Err(cursor.err("unexpected trailing characters"));
        }
        let section = sections.last_mut().expect("root section");
        if section.entries.iter().any(|(k, _)| k == key) {
            return Err(ConfigError::Syntax { line: line_no, column: indent + 1, message: format!("duplicate key '{key}'") });
        }
        section.entries.push((key.to_string(), value));
    }
    Ok(sections)
}

fn required<'a>(section: &Section, key: &str, value: &'a Option<Spanned>) -> Result<Field<'a>, ConfigError> {
    match value {
        Some(v) => Ok(Field { path: section.path(key), value: v }),
        None => Err(ConfigError::semantic(section.path(key), "missing")),
    }
}

fn optional<'a>(section: &Section, key: &str, value: &'a Option<Spanned>) -> Option<Field<'a>> {
    value.as_ref().map(|v| Field { path: section.path(key), value: v })
}

fn model_error(path: &str, e: ModelError) -> ConfigError {
    ConfigError::semantic(path, e.to_string())
}

fn parse_end(mut s: Section, label: &str) -> Result<(BoundaryComponent, EndPotential), ConfigError> {
    let kind = s.take("kind");
    let length = s.take("length");
    let gram = s.take("gram");
    let flux = s.take("flux");
    let phi0 = s.take("phi0");
    let closed = s.take("closed");
    let kind_f = required(&s, "kind", &kind)?;
    let component = match kind_f.atom()? {
        "circle" => {
            if gram.is_some() {
                return Err(ConfigError::semantic(s.path("gram"), "circle ends take a length, not a gram matrix"));
            }
            let f = required(&s, "length", &length)?;
            let l = f.pi_scalar()?;
            if !l.is_positive() {
                return Err(f.semantic("length must be positive"));
            }
            BoundaryComponent::circle(label, l)
        }
        "torus" => {
            if length.is_some() {
                return Err(ConfigError::semantic(s.path("length"), "torus ends take a gram matrix"));
            }
            let f = required(&s, "gram", &gram)?;
            let (scale, body) = match &f.value.value {
                Value::Scaled(sc, inner) => {
                    let scale = parse_pi_scalar(sc).ok_or_else(|| f.semantic("invalid gram scale"))?;
                    (scale, Field { path: f.path.clone(), value: inner })
                }
                _ => (PiScalar::integer(1), Field { path: f.path.clone(), value: f.value }),
            };
            let entries = body.matrix(|c| c.rational())?;
            let g = GramMatrix::new(scale, entries).map_err(|e| match e {
                ModelError::NotPositiveDefinite { .. } => f.semantic("not positive definite"),
                other => model_error(&f.path, other),
            })?;
            BoundaryComponent::torus(label, g)
        }
        other => return Err(kind_f.semantic(format!("unknown kind '{other}' (circle or torus)"))),
    };
    let flux_f = required(&s, "flux", &flux)?;
    let flux_v = flux_f.rationals()?;
    if flux_v.len() != component.betti1() {
        return Err(flux_f.semantic(format!("flux length ≠ b₁ (expected {}, found {})", component.betti1(), flux_v.len())));
    }
    let phi = match optional(&s, "phi0", &phi0) {
        None => Phi0::Constant(Rational::zero()),
        Some(f) => match &f.value.value {
            Value::List(_) => Phi0::Sampled(f.rationals()?),
            _ => Phi0::Constant(f.rational()?),
        },
    };
    let closed_v = match optional(&s, "closed", &closed) {
        Some(f) => f.boolean()?,
        None => true,
    };
    s.finish()?;
    Ok((component, EndPotential { phi0: phi, flux: flux_v, closed: closed_v }))
}

fn parse_numerics(mut s: Section) -> Result<Numerics, ConfigError> {
    let mut n = Numerics::default();
    let keys: Vec<String> = s.entries.iter().map(|(k, _)| k.clone()).collect();
    for key in keys {
        let v = s.take(&key);
        let f = required(&s, &key, &v)?;
        match key.as_str() {
            "h" => n.h = Some(positive(&f)?),
            "r_max" => n.r_max = Some(positive(&f)?),
            "lambda_min" => n.lambda_min = positive(&f)?,
            "lambda_max" => n.lambda_max = positive(&f)?,
            "samples" => n.samples = f.integer()?,
            "tol" => n.tol = positive(&f)?,
            "mu_max" => n.mu_max = f.real()?,
            "continuum" => n.continuum = f.boolean()?,
            "schedule" => n.schedule = f.reals()?,
            "g_grid" => n.g_grid = f.rationals()?,
            "lambda_star" => n.lambda_star = Some(f.real()?),
            "mourre_r" => {
                n.mourre_r = f
                    .list()?
                    .iter()
                    .map(|x| if x.atom()? == "inf" { Ok(None) } else { x.real().map(Some) })
                    .collect::<Result<_, _>>()?
            }
            "window" => {
                let w = f.reals()?;
                if w.len() != 2 || !(w[1] > w[0]) {
                    return Err(f.semantic("window is [lo, hi] with lo < hi"));
                }
                n.window = Some((w[0], w[1]));
            }
            "mourre_length" => n.mourre_length = positive(&f)?,
            "mourre_h" => n.mourre_h = positive(&f)?,
            "s_weight" => n.s_weight = f.real()?,
            "z_samples" => n.z_samples = f.reals()?,
            "holder_lengths" => n.holder_lengths = f.reals()?,
            "zeta_s" => n.zeta_s = Some(f.real()?),
            _ => return Err(f.semantic("unknown key")),
        }
    }
    Ok(n)
}

fn positive(f: &Field) -> Result<f64, ConfigError> {
    let v = f.real()?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(f.semantic("must be positive and finite"));
    }
    Ok(v)
}

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let mut sections = split_sections(text)?.into_iter();
    let mut root = sections.next().expect("root section");
    let n_v = root.take("n");
    let p_v = root.take("p");
    let x0_v = root.take("x0");
    let core_v = root.take("core_volume");
    let c0_v = root.take("c0");
    let n = required(&root, "n", &n_v)?.integer()?;
    let p = required(&root, "p", &p_v)?.rational()?;
    let x0 = required(&root, "x0", &x0_v)?.rational()?;
    let core_volume = match optional(&root, "core_volume", &core_v) {
        Some(f) => f.pi_scalar()?,
        None => PiScalar::integer(0),
    };
    let c0_override = optional(&root, "c0", &c0_v).map(|f| f.rational()).transpose()?;
    root.finish()?;

    let mut ends = Vec::new();
    let mut pots = Vec::new();
    let mut surface = None;
    let mut cohomology = None;
    let mut field = None;
    let mut numerics = Numerics::default();
    for mut s in sections {
        if let Some(label) = s.name.strip_prefix("end.") {
            let label = label.to_string();
            if label.contains('.') {
                return Err(ConfigError::Syntax { line: s.line, column: 2, message: "end labels cannot contain '.'".into() });
            }
            let (c, pot) = parse_end(s, &label)?;
            ends.push(c);
            pots.push(pot);
            continue;
        }
        match s.name.as_str() {
            "surface" => {
                let (c, o, b) = (s.take("cusps"), s.take("orientable"), s.take("b_class"));
                surface = Some(SurfaceSection {
                    cusps: required(&s, "cusps", &c)?.integer()?,
                    orientable: optional(&s, "orientable", &o).map(|f| f.boolean()).transpose()?.unwrap_or(true),
                    b_class: required(&s, "b_class", &b)?.rational()?,
                });
                s.finish()?;
            }
            "cohomology" => {
                let (d, o, br, l, b) =
                    (s.take("dimension"), s.take("orientable"), s.take("boundary_rank"), s.take("lagrangian"), s.take("b"));
                let boundary_rank =
                    required(&s, "boundary_rank", &br)?.list()?.iter().map(|f| f.integer()).collect::<Result<_, _>>()?;
                cohomology = Some(CohomologySection {
                    presentation: CohomologyPresentation {
                        boundary_rank,
                        lagrangian: required(&s, "lagrangian", &l)?.matrix(|c| c.int64())?,
                        dimension: optional(&s, "dimension", &d).map(|f| f.integer()).transpose()?.unwrap_or(3),
                        orientable: optional(&s, "orientable", &o).map(|f| f.boolean()).transpose()?.unwrap_or(true),
                    },
                    b: required(&s, "b", &b)?.rationals()?,
                });
                s.finish()?;
            }
            "field" => {
                let (h1, on, cl) = (s.take("h1_vanishes"), s.take("vanishes_on"), s.take("classes"));
                let labels: Vec<String> = required(&s, "vanishes_on", &on)?
                    .list()?
                    .iter()
                    .map(|f| f.atom().map(str::to_string))
                    .collect::<Result<_, _>>()?;
                let cf = required(&s, "classes", &cl)?;
                let classes = cf.matrix(|c| c.rational())?;
                if classes.len() != labels.len() {
                    return Err(cf.semantic("one class vector per entry of vanishes_on"));
                }
                field = Some(FieldClass {
                    components: labels.into_iter().zip(classes).map(|(label, class)| FieldComponent { label, class }).collect(),
                    h1_vanishes: optional(&s, "h1_vanishes", &h1).map(|f| f.boolean()).transpose()?.unwrap_or(true),
                });
                s.finish()?;
            }
            "numerics" => numerics = parse_numerics(s)?,
            other => {
                return Err(ConfigError::Syntax { line: s.line, column: 2, message: format!("unknown section [{other}]") });
            }
        }
    }
    let spec = ManifoldSpec { n, p, x0, core_volume, c0_override, ends };
    spec.validate().map_err(|e| match &e {
        ModelError::DimensionMismatch { label, .. } => model_error(&format!("end.{label}"), e.clone()),
        _ => model_error("manifold", e.clone()),
    })?;
    if let Some(f) = &field {
        for c in &f.components {
            if spec.component(&c.label).is_none() {
                return Err(ConfigError::semantic("field.vanishes_on", format!("no end labelled '{}'", c.label)));
            }
        }
    }
    Ok(Config { spec, potential: PotentialSpec { ends: pots }, surface, cohomology, field, numerics })
}

// ---------------------------------------------------------------------------
// canonical text

fn list<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    format!("[{}]", items.iter().map(f).collect::<Vec<_>>().join(", "))
}

fn real(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:e}")
    }
}

/// Canonical text: fixed key order, every default spelled out. Parsing it back
/// yields the same record, and equal records give identical text.
pub fn to_canonical_string(cfg: &Config) -> String {
    let mut out = String::new();
    let s = &cfg.spec;
    let _ = writeln!(out, "n = {}", s.n);
    let _ = writeln!(out, "p = {}", s.p);
    let _ = writeln!(out, "x0 = {}", s.x0);
    let _ = writeln!(out, "core_volume = {}", s.core_volume);
    if let Some(c) = s.c0_override {
        let _ = writeln!(out, "c0 = {c}");
    }
    for (end, pot) in s.ends.iter().zip(&cfg.potential.ends) {
        let _ = writeln!(out, "\n[end.{}]", end.label);
        match &end.kind {
            BoundaryKind::Circle { length } => {
                let _ = writeln!(out, "kind = circle\nlength = {length}");
            }
            BoundaryKind::FlatTorus { gram } => {
                let rows = list(&gram.entries, |r| list(r, |q| q.to_string()));
                let _ = writeln!(out, "kind = torus\ngram = {} * {rows}", gram.scale);
            }
        }
        let _ = writeln!(out, "flux = {}", list(&pot.flux, |q| q.to_string()));
        match &pot.phi0 {
            Phi0::Constant(c) => {
                let _ = writeln!(out, "phi0 = {c}");
            }
            Phi0::Sampled(v) => {
                let _ = writeln!(out, "phi0 = {}", list(v, |q| q.to_string()));
            }
        }
        let _ = writeln!(out, "closed = {}", pot.closed);
    }
    if let Some(sf) = &cfg.surface {
        let _ = writeln!(out, "\n[surface]\ncusps = {}\norientable = {}\nb_class = {}", sf.cusps, sf.orientable, sf.b_class);
    }
    if let Some(c) = &cfg.cohomology {
        let pr = &c.presentation;
        let _ = writeln!(
            out,
            "\n[cohomology]\ndimension = {}\norientable = {}\nboundary_rank = {}\nlagrangian = {}\nb = {}",
            pr.dimension,
            pr.orientable,
            list(&pr.boundary_rank, |b| b.to_string()),
            list(&pr.lagrangian, |r| list(r, |x| x.to_string())),
            list(&c.b, |q| q.to_string())
        );
    }
    if let Some(f) = &cfg.field {
        let _ = writeln!(
            out,
            "\n[field]\nh1_vanishes = {}\nvanishes_on = {}\nclasses = {}",
            f.h1_vanishes,
            list(&f.components, |c| c.label.clone()),
            list(&f.components, |c| list(&c.class, |q| q.to_string()))
        );
    }
    let n = &cfg.numerics;
    let _ = writeln!(out, "\n[numerics]");
    if let Some(h) = n.h {
        let _ = writeln!(out, "h = {}", real(h));
    }
    if let Some(r) = n.r_max {
        let _ = writeln!(out, "r_max = {}", real(r));
    }
    let _ = writeln!(out, "lambda_min = {}", real(n.lambda_min));
    let _ = writeln!(out, "lambda_max = {}", real(n.lambda_max));
    let _ = writeln!(out, "samples = {}", n.samples);
    let _ = writeln!(out, "tol = {}", real(n.tol));
    let _ = writeln!(out, "mu_max = {}", real(n.mu_max));
    let _ = writeln!(out, "continuum = {}", n.continuum);
    let _ = writeln!(out, "schedule = {}", list(&n.schedule, |v| real(*v)));
    let _ = writeln!(out, "g_grid = {}", list(&n.g_grid, |q| q.to_string()));
    if let Some(l) = n.lambda_star {
        let _ = writeln!(out, "lambda_star = {}", real(l));
    }
    let _ = writeln!(out, "mourre_r = {}", list(&n.mourre_r, |r| r.map_or("inf".to_string(), real)));
    if let Some((a, b)) = n.window {
        let _ = writeln!(out, "window = [{}, {}]", real(a), real(b));
    }
    let _ = writeln!(out, "mourre_length = {}", real(n.mourre_length));
    let _ = writeln!(out, "mourre_h = {}", real(n.mourre_h));
    let _ = writeln!(out, "s_weight = {}", real(n.s_weight));
    let _ = writeln!(out, "z_samples = {}", list(&n.z_samples, |v| real(*v)));
    let _ = writeln!(out, "holder_lengths = {}", list(&n.holder_lengths, |v| real(*v)));
    if let Some(z) = n.zeta_s {
        let _ = writeln!(out, "zeta_s = {}", real(z));
    }
    out
}
