//! A small text format for models and classifying data.
//!
//! ```text
//! dga torus_cp1
//! gen t11 1; gen t12 1; gen b 2; gen y 3
//! d y = b^2
//! symplectic w = b + t11*t12
//! torus 1
//! base S2
//! classify t11 -> u
//! ```
//!
//! Statements end at a newline or `;`, and `#` starts a comment.
//! Expressions use integers, rationals `p/q`, `+`, `-`, `*`, `^` and
//! parentheses. The torus pairs of `torus k` are the first `2k` degree-1
//! generators in declaration order, paired consecutively. `classify x -> e`
//! gives the value on the class of `x ⊗ 1_*`; `classify "name" -> e` names a
//! class verbatim. Values are linear combinations of the `H²(B)` basis:
//! `u` for `base S2`, or the names listed by `basis`.

mod lexer;
mod parser;

use std::collections::HashSet;
use std::fmt;

use num_traits::Zero;

use crate::bs_model::mixed_name;
use crate::gca::{GcaError, GcaPresentation, Generator, Poly};
use crate::linalg::Matrix;
use crate::nilmanifold::{NilError, NilmanifoldModel, PolyGenerators};
use crate::scalar::{self, Scalar};
use crate::sep_symplectic::{ClassifyingData, SepError, SeparableSpec};

pub use parser::{Expr, Stmt, Target, STATEMENT_KEYWORDS};

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

/// A located parse or validation error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub message: String,
    /// Tokens that would have been accepted; empty for semantic errors.
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn new(pos: Pos, message: impl Into<String>, expected: Vec<String>) -> Self {
        Diagnostic {
            pos,
            message: message.into(),
            expected,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.pos.line, self.pos.column, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Debug, thiserror::Error)]
pub enum DslError {
    #[error("{0}")]
    Syntax(#[from] Diagnostic),
    #[error("{0}")]
    Missing(String),
    #[error(transparent)]
    Gca(#[from] GcaError),
    #[error(transparent)]
    Sep(#[from] SepError),
    #[error(transparent)]
    Nil(#[from] NilError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    S2,
    Basis(Vec<String>),
}

impl Base {
    pub fn names(&self) -> Vec<String> {
        match self {
            Base::S2 => vec!["u".to_string()],
            Base::Basis(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub target: Target,
    /// Coordinates over the `H²(B)` basis.
    pub values: Vec<Scalar>,
}

impl Classification {
    /// The class name this entry refers to.
    pub fn class_name(&self) -> String {
        match &self.target {
            Target::Generator(x) => mixed_name(x, "1"),
            Target::Named(s) => s.clone(),
        }
    }
}

/// A parsed and validated model file.
#[derive(Clone, Debug)]
pub struct ModelDocument {
    pub name: Option<String>,
    /// In declaration order.
    pub generators: Vec<Generator>,
    pub presentation: GcaPresentation,
    pub symplectic: Option<(String, Poly)>,
    pub torus: Option<usize>,
    pub base: Option<Base>,
    pub classify: Vec<Classification>,
}

fn eval(e: &Expr, pres: &GcaPresentation) -> Result<Poly, Diagnostic> {
    let gca = |pos: Pos| move |err: GcaError| Diagnostic::new(pos, err.to_string(), Vec::new());
    let p0 = first_pos(e);
    Ok(match e {
        Expr::Num(v, _) => pres.constant(v.clone()),
        Expr::Var(name, pos) => pres.generator(name).map_err(|_| {
            Diagnostic::new(*pos, format!("undeclared generator `{name}`"), Vec::new())
        })?,
        Expr::Neg(a) => pres
            .scale(&eval(a, pres)?, &-scalar::one())
            .map_err(gca(p0))?,
        Expr::Add(a, b) => pres
            .add(&eval(a, pres)?, &eval(b, pres)?)
            .map_err(gca(p0))?,
        Expr::Sub(a, b) => pres
            .sub(&eval(a, pres)?, &eval(b, pres)?)
            .map_err(gca(p0))?,
        Expr::Mul(a, b) => pres
            .multiply(&eval(a, pres)?, &eval(b, pres)?)
            .map_err(gca(p0))?,
        Expr::Pow(a, n) => pres.power(&eval(a, pres)?, *n).map_err(gca(p0))?,
    })
}

fn first_pos(e: &Expr) -> Pos {
    match e {
        Expr::Num(_, p) | Expr::Var(_, p) => *p,
        Expr::Neg(a) | Expr::Pow(a, _) => first_pos(a),
        Expr::Add(a, _) | Expr::Sub(a, _) | Expr::Mul(a, _) => first_pos(a),
    }
}

/// Parses and validates a model file.
pub fn parse(text: &str) -> Result<ModelDocument, Diagnostic> {
    let stmts = parser::parse_statements(lexer::lex(text)?)?;
    let once = |seen: &mut HashSet<String>, key: String, pos: Pos| {
        if seen.insert(key.clone()) {
            Ok(())
        } else {
            Err(Diagnostic::new(pos, format!("duplicate {key}"), Vec::new()))
        }
    };
    let mut seen = HashSet::new();
    let mut generators = Vec::new();
    let mut name = None;
    let mut torus = None;
    let mut base = None;
    for (pos, s) in &stmts {
        match s {
            Stmt::Dga(n) => {
                once(&mut seen, "`dga` declaration".into(), *pos)?;
                name = Some(n.clone());
            }
            Stmt::Gen(n, d) => {
                once(&mut seen, format!("generator `{n}`"), *pos)?;
                if *d <= 0 {
                    return Err(Diagnostic::new(
                        *pos,
                        format!("generator `{n}` must have positive degree"),
                        Vec::new(),
                    ));
                }
                generators.push(Generator::new(n.clone(), *d));
            }
            Stmt::Torus(k) => {
                once(&mut seen, "`torus` declaration".into(), *pos)?;
                torus = Some(*k);
            }
            Stmt::BaseS2 | Stmt::Basis(_) => {
                once(&mut seen, "base declaration".into(), *pos)?;
                base = Some(match s {
                    Stmt::BaseS2 => Base::S2,
                    Stmt::Basis(v) => {
                        let mut names = HashSet::new();
                        if let Some(dup) = v.iter().find(|n| !names.insert(n.as_str())) {
                            return Err(Diagnostic::new(
                                *pos,
                                format!("duplicate basis name `{dup}`"),
                                Vec::new(),
                            ));
                        }
                        Base::Basis(v.clone())
                    }
                    _ => unreachable!(),
                });
            }
            _ => {}
        }
    }
    let mut presentation =
        GcaPresentation::new(generators.clone()).expect("duplicates rejected above");
    let mut symplectic = None;
    let mut classify = Vec::new();
    let base_pres = base.as_ref().map(|b| {
        GcaPresentation::new(b.names().into_iter().map(|n| Generator::new(n, 2)))
            .expect("distinct names")
    });
    for (pos, s) in &stmts {
        match s {
            Stmt::D(n, e) => {
                once(&mut seen, format!("differential of `{n}`"), *pos)?;
                let value = eval(e, &presentation)?;
                presentation
                    .set_differential(n, value)
                    .map_err(|err| Diagnostic::new(first_pos(e), err.to_string(), Vec::new()))?;
            }
            Stmt::Symplectic(n, e) => {
                once(&mut seen, "`symplectic` declaration".into(), *pos)?;
                let value = eval(e, &presentation)?;
                match presentation.degree(&value) {
                    Ok(Some(2)) => {}
                    _ => {
                        return Err(Diagnostic::new(
                            first_pos(e),
                            "the symplectic class must be a nonzero element of degree 2",
                            Vec::new(),
                        ));
                    }
                }
                symplectic = Some((n.clone(), value));
            }
            Stmt::Classify(target, e) => {
                let Some(bp) = &base_pres else {
                    return Err(Diagnostic::new(
                        *pos,
                        "`classify` needs a `base` or `basis` declaration",
                        Vec::new(),
                    ));
                };
                let key = match target {
                    Target::Generator(x) => mixed_name(x, "1"),
                    Target::Named(s) => s.clone(),
                };
                once(&mut seen, format!("classification of `{key}`"), *pos)?;
                let declared = base.as_ref().map(Base::names).unwrap_or_default();
                classify.push(Classification {
                    target: target.clone(),
                    values: linear_values(e, bp, &declared)?,
                });
            }
            _ => {}
        }
    }
    Ok(ModelDocument {
        name,
        generators,
        presentation,
        symplectic,
        torus,
        base,
        classify,
    })
}

/// Coordinates of `e` over the base names; a bare number is allowed when
/// the base is one-dimensional.
fn linear_values(
    e: &Expr,
    bp: &GcaPresentation,
    declared: &[String],
) -> Result<Vec<Scalar>, Diagnostic> {
    let p = eval(e, bp)?;
    let mut values = vec![Scalar::zero(); bp.len()];
    let slot = |g: usize| {
        declared
            .iter()
            .position(|n| *n == bp.generator_at(g).name)
            .expect("same names")
    };
    for (m, c) in p.terms() {
        match m.factors() {
            [] if bp.len() == 1 => values[0] += c,
            [(g, 1)] => values[slot(*g)] += c,
            _ => {
                let names: Vec<String> = bp.generators().iter().map(|g| g.name.clone()).collect();
                return Err(Diagnostic::new(
                    first_pos(e),
                    format!("expected a linear combination of {}", names.join(", ")),
                    Vec::new(),
                ));
            }
        }
    }
    Ok(values)
}

impl ModelDocument {
    fn base_names(&self) -> Vec<String> {
        self.base.as_ref().map(Base::names).unwrap_or_default()
    }

    /// `T^2k`-separable data: the torus pairs, the remaining generators as
    /// the simply-connected part, and `q`, `q_i` read off the symplectic
    /// class (all 1 when none is given).
    pub fn separable_spec(&self) -> Result<SeparableSpec, DslError> {
        let k = self
            .torus
            .ok_or_else(|| DslError::Missing("this command needs a `torus` declaration".into()))?;
        let ones: Vec<&Generator> = self.generators.iter().filter(|g| g.degree == 1).collect();
        if ones.len() < 2 * k {
            return Err(DslError::Missing(format!(
                "`torus {k}` needs {} degree-1 generators, found {}",
                2 * k,
                ones.len()
            )));
        }
        let torus: Vec<[String; 2]> = (0..k)
            .map(|i| [ones[2 * i].name.clone(), ones[2 * i + 1].name.clone()])
            .collect();
        let torus_names: HashSet<&str> = torus.iter().flatten().map(String::as_str).collect();
        for t in &torus_names {
            let i = self.presentation.index_of(t)?;
            if !self.presentation.differential_of(i).is_zero() {
                return Err(
                    SepError::InvalidSpec(format!("torus generator `{t}` must be closed")).into(),
                );
            }
        }
        let zgens: Vec<Generator> = self
            .generators
            .iter()
            .filter(|g| !torus_names.contains(g.name.as_str()))
            .cloned()
            .collect();
        let mut z = GcaPresentation::new(zgens.clone())?;
        for g in &zgens {
            let i = self.presentation.index_of(&g.name)?;
            let d = z
                .transport(self.presentation.differential_of(i), &self.presentation)
                .map_err(|_| {
                    SepError::InvalidSpec(format!("d({}) involves torus generators", g.name))
                })?;
            z.set_differential(&g.name, d)?;
        }
        let (beta, q, q_i) = match &self.symplectic {
            Some((_, w)) => self.read_symplectic(w, &torus, &z)?,
            None => {
                let closed: Vec<&Generator> = zgens
                    .iter()
                    .filter(|g| {
                        g.degree == 2 && z.differential_of(z.index_of(&g.name).unwrap()).is_zero()
                    })
                    .collect();
                let beta = match closed.as_slice() {
                    [] => None,
                    [b] => Some(b.name.clone()),
                    _ => {
                        return Err(DslError::Missing(
                            "several candidates for β; give a `symplectic` line".into(),
                        ))
                    }
                };
                (beta, scalar::one(), vec![scalar::one(); k])
            }
        };
        Ok(SeparableSpec::with_torus(
            torus,
            z,
            beta.as_deref(),
            q,
            q_i,
        )?)
    }

    fn read_symplectic(
        &self,
        w: &Poly,
        torus: &[[String; 2]],
        z: &GcaPresentation,
    ) -> Result<(Option<String>, Scalar, Vec<Scalar>), DslError> {
        let p = &self.presentation;
        let mut q_i = vec![Scalar::zero(); torus.len()];
        let mut beta = None;
        let mut q = scalar::one();
        let bad = |why: String| DslError::Sep(SepError::InvalidSpec(why));
        for (m, c) in w.terms() {
            let names: Vec<&str> = m
                .sequence()
                .iter()
                .map(|&g| p.generator_at(g).name.as_str())
                .collect();
            match names.as_slice() {
                [b] if z.index_of(b).is_ok() => {
                    if beta.is_some() {
                        return Err(bad("ω may involve only one simply-connected class".into()));
                    }
                    beta = Some(b.to_string());
                    q = c.clone();
                }
                [a, b] => {
                    let i = torus
                        .iter()
                        .position(|[x, y]| (x == a && y == b) || (x == b && y == a))
                        .ok_or_else(|| {
                            bad(format!("ω has a term {a}*{b} outside the torus pairs"))
                        })?;
                    q_i[i] = if torus[i][0] == *a {
                        c.clone()
                    } else {
                        -c.clone()
                    };
                }
                _ => return Err(bad("ω must be q·β + Σ q_i·t_i1·t_i2".into())),
            }
        }
        Ok((beta, q, q_i))
    }

    /// The model as a nilmanifold, generators ordered as declared.
    pub fn nilmanifold(&self) -> Result<NilmanifoldModel, DslError> {
        let order = self.generators.iter().map(|g| g.name.clone()).collect();
        let mut nil = NilmanifoldModel::new(self.presentation.clone(), order)?;
        if let Some((_, w)) = &self.symplectic {
            nil = nil.with_symplectic(w.clone())?;
        }
        Ok(nil)
    }

    fn lookup(
        &self,
        basis: &[String],
        wrap: impl Fn(&str) -> String,
    ) -> Result<Vec<Vec<Scalar>>, DslError> {
        let rows = self.base_names().len();
        let mut cols = vec![vec![Scalar::zero(); rows]; basis.len()];
        for c in &self.classify {
            let name = wrap(&c.class_name());
            let j = basis.iter().position(|b| *b == name).ok_or_else(|| {
                DslError::Missing(format!("`{name}` is not in the basis {}", basis.join(", ")))
            })?;
            cols[j] = c.values.clone();
        }
        Ok(cols)
    }

    /// Classifying data on a `W²` basis; classes without a `classify` line
    /// map to zero.
    pub fn classifying_data(&self, w2_basis: &[String]) -> Result<ClassifyingData, DslError> {
        let target = self.base_names();
        let cols = self.lookup(w2_basis, |s| s.to_string())?;
        let matrix = Matrix::from_columns(target.len(), &cols);
        Ok(ClassifyingData::new(w2_basis.to_vec(), target, matrix)?)
    }

    /// Values of `H²(f)` on the polynomial generators of a nilmanifold.
    pub fn nil_values(&self, gens: &PolyGenerators) -> Result<Vec<Vec<Scalar>>, DslError> {
        self.lookup(&gens.names, |s| format!("[{s}]"))
    }
}

fn render_classify_target(t: &Target) -> String {
    match t {
        Target::Generator(x) => x.clone(),
        Target::Named(s) => format!("{s:?}"),
    }
}

/// Canonical form: one statement per line in a fixed order, expressions
/// normalized.
impl fmt::Display for ModelDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.presentation;
        if let Some(n) = &self.name {
            writeln!(f, "dga {n}")?;
        }
        for g in &self.generators {
            writeln!(f, "gen {} {}", g.name, g.degree)?;
        }
        for g in &self.generators {
            let d = p.differential_of(p.index_of(&g.name).expect("declared"));
            if !d.is_zero() {
                writeln!(f, "d {} = {}", g.name, p.render(d))?;
            }
        }
        if let Some((n, w)) = &self.symplectic {
            writeln!(f, "symplectic {n} = {}", p.render(w))?;
        }
        if let Some(k) = self.torus {
            writeln!(f, "torus {k}")?;
        }
        match &self.base {
            Some(Base::S2) => writeln!(f, "base S2")?,
            Some(Base::Basis(v)) => writeln!(f, "basis {}", v.join(" "))?,
            None => {}
        }
        let names = self.base_names();
        for c in &self.classify {
            let mut rhs = String::new();
            for (n, v) in names.iter().zip(&c.values).filter(|(_, v)| !v.is_zero()) {
                let negative = scalar::is_negative(v);
                match (rhs.is_empty(), negative) {
                    (true, true) => rhs.push('-'),
                    (true, false) => {}
                    (false, true) => rhs.push_str(" - "),
                    (false, false) => rhs.push_str(" + "),
                }
                let abs = if negative { -v.clone() } else { v.clone() };
                rhs.push_str(&format!("{}*{n}", scalar::render_short(&abs)));
            }
            if rhs.is_empty() {
                rhs.push('0');
            }
            writeln!(
                f,
                "classify {} -> {}",
                render_classify_target(&c.target),
                rhs
            )?;
        }
        Ok(())
    }
}
