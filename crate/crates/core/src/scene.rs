//! Line-oriented scene files describing a tangent configuration.
//!
//! ```text
//! # unit circle from four tangents
//! line l1 -1 0 1
//! point p1 1 0
//! tangent l1 p1
//! ...
//! weights 2 2 -2
//! form normalized
//! ```
//!
//! Directives: `line NAME a b c`, `point NAME x y`, `tangent LINE POINT`,
//! `secant NAME POINT POINT`, `lambda REAL`, `weights w1 w2 w0`,
//! `form raw|normalized|faithful` and `pair LINE LINE | LINE LINE`.
//! Numbers are decimals or integer ratios `p/q`. `#` starts a comment.
//!
//! A `lambda` selects the two-tangent (Liming) mode, `weights` the
//! four-tangent mode. Coordinates are expected to be of order one; scale
//! larger data toward the unit box.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geom::{GradientVec, LineImplicit, Point2, EPS_ON_CURVE};
use crate::ipatch::{Form, FourTangentSpec, WeightTriple};
use crate::liming::LimingSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SceneErrorKind {
    SyntaxError,
    UnknownName,
    DuplicateName,
    ModeConflict,
    ArityError,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SceneError {
    pub kind: SceneErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SceneError {
    fn new(kind: SceneErrorKind, at: Pos, message: impl Into<String>) -> Self {
        Self {
            kind,
            line: at.line,
            column: at.column,
            message: message.into(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self.kind {
            SceneErrorKind::SyntaxError => "SyntaxError",
            SceneErrorKind::UnknownName => "UnknownName",
            SceneErrorKind::DuplicateName => "DuplicateName",
            SceneErrorKind::ModeConflict => "ModeConflict",
            SceneErrorKind::ArityError => "ArityError",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Liming,
    FourTangent,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Liming => "liming",
            Mode::FourTangent => "four-tangent",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tangency {
    pub line: String,
    pub point: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Secant {
    pub name: String,
    pub from: String,
    pub to: String,
}

/// A parsed and cross-checked scene. Geometry is validated by [`SceneDoc::build`].
#[derive(Debug, Clone, PartialEq)]
pub struct SceneDoc {
    pub lines: Vec<(String, LineImplicit)>,
    pub points: Vec<(String, Point2)>,
    pub tangencies: Vec<Tangency>,
    pub secants: Vec<Secant>,
    pub lambda: Option<f64>,
    pub weights: Option<WeightTriple>,
    pub form: Option<Form>,
    pub pair: Option<[String; 4]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

struct Token<'a> {
    text: &'a str,
    pos: Pos,
}

fn tokenize(line: &str, line_no: usize) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in content
        .char_indices()
        .chain(std::iter::once((content.len(), ' ')))
    {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(idx),
            (true, Some(s)) => {
                out.push(Token {
                    text: &content[s..idx],
                    pos: Pos {
                        line: line_no,
                        column: content[..s].chars().count() + 1,
                    },
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// Parses a decimal or an integer ratio `p/q`.
pub fn parse_number(text: &str) -> std::result::Result<f64, String> {
    const EXACT: i64 = 1 << 53;
    if let Some((p, q)) = text.split_once('/') {
        let p: i64 = p
            .parse()
            .map_err(|_| format!("bad numerator in `{text}`"))?;
        let q: i64 = q
            .parse()
            .map_err(|_| format!("bad denominator in `{text}`"))?;
        if q == 0 {
            return Err(format!("zero denominator in `{text}`"));
        }
        if p.abs() > EXACT || q.abs() > EXACT {
            return Err(format!("ratio `{text}` exceeds 2^53"));
        }
        return Ok(p as f64 / q as f64);
    }
    let starts_numeric = text
        .trim_start_matches(['+', '-'])
        .starts_with(|c: char| c.is_ascii_digit() || c == '.');
    match text.parse::<f64>() {
        Ok(v) if starts_numeric && v.is_finite() => Ok(v),
        _ => Err(format!("`{text}` is not a number")),
    }
}

fn is_name(text: &str) -> bool {
    let mut chars = text.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\''))
}

/// Parses and cross-checks a scene.
pub fn parse_scene(text: &str) -> std::result::Result<SceneDoc, SceneError> {
    use SceneErrorKind::*;

    let mut doc = SceneDoc {
        lines: Vec::new(),
        points: Vec::new(),
        tangencies: Vec::new(),
        secants: Vec::new(),
        lambda: None,
        weights: None,
        form: None,
        pair: None,
    };
    // references are resolved after the whole file is read
    let mut tangent_refs: Vec<(String, Pos, String, Pos)> = Vec::new();
    let mut secant_refs: Vec<(String, Pos, String, Pos, String, Pos)> = Vec::new();
    let mut pair_refs: Option<(Vec<(String, Pos)>, Pos)> = None;
    let mut lambda_pos = None;
    let mut weights_pos = None;
    let mut form_pos = None;
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let toks = tokenize(raw, line_no);
        let Some(head) = toks.first() else { continue };
        let args = &toks[1..];
        let expect = |n: usize| -> std::result::Result<(), SceneError> {
            if args.len() == n {
                Ok(())
            } else {
                Err(SceneError::new(
                    SyntaxError,
                    head.pos,
                    format!("`{}` takes {n} arguments, found {}", head.text, args.len()),
                ))
            }
        };
        let number =
            |t: &Token| parse_number(t.text).map_err(|m| SceneError::new(SyntaxError, t.pos, m));
        let name = |t: &Token| -> std::result::Result<String, SceneError> {
            if is_name(t.text) {
                Ok(t.text.to_string())
            } else {
                Err(SceneError::new(
                    SyntaxError,
                    t.pos,
                    format!("`{}` is not a valid name", t.text),
                ))
            }
        };
        let once = |slot: bool| -> std::result::Result<(), SceneError> {
            if slot {
                Err(SceneError::new(
                    SyntaxError,
                    head.pos,
                    format!("repeated `{}` directive", head.text),
                ))
            } else {
                Ok(())
            }
        };

        match head.text {
            "line" => {
                expect(4)?;
                let n = name(&args[0])?;
                if doc.lines.iter().any(|(m, _)| *m == n) {
                    return Err(SceneError::new(
                        DuplicateName,
                        args[0].pos,
                        format!("line `{n}` declared twice"),
                    ));
                }
                let (a, b, c) = (number(&args[1])?, number(&args[2])?, number(&args[3])?);
                let l = LineImplicit::new(a, b, c).map_err(|_| {
                    SceneError::new(
                        SyntaxError,
                        args[1].pos,
                        format!("line `{n}` has a zero normal"),
                    )
                })?;
                doc.lines.push((n, l));
            }
            "point" => {
                expect(3)?;
                let n = name(&args[0])?;
                if doc.points.iter().any(|(m, _)| *m == n) {
                    return Err(SceneError::new(
                        DuplicateName,
                        args[0].pos,
                        format!("point `{n}` declared twice"),
                    ));
                }
                doc.points
                    .push((n, Point2::new(number(&args[1])?, number(&args[2])?)));
            }
            "tangent" => {
                expect(2)?;
                tangent_refs.push((name(&args[0])?, args[0].pos, name(&args[1])?, args[1].pos));
            }
            "secant" => {
                expect(3)?;
                let n = name(&args[0])?;
                if secant_refs.iter().any(|s| s.0 == n) {
                    return Err(SceneError::new(
                        DuplicateName,
                        args[0].pos,
                        format!("secant `{n}` declared twice"),
                    ));
                }
                secant_refs.push((
                    n,
                    args[0].pos,
                    name(&args[1])?,
                    args[1].pos,
                    name(&args[2])?,
                    args[2].pos,
                ));
            }
            "lambda" => {
                expect(1)?;
                once(lambda_pos.is_some())?;
                doc.lambda = Some(number(&args[0])?);
                lambda_pos = Some(head.pos);
            }
            "weights" => {
                expect(3)?;
                once(weights_pos.is_some())?;
                doc.weights = Some(WeightTriple::new(
                    number(&args[0])?,
                    number(&args[1])?,
                    number(&args[2])?,
                ));
                weights_pos = Some(head.pos);
            }
            "form" => {
                expect(1)?;
                once(form_pos.is_some())?;
                doc.form = Some(
                    args[0]
                        .text
                        .parse()
                        .map_err(|m| SceneError::new(SyntaxError, args[0].pos, m))?,
                );
                form_pos = Some(head.pos);
            }
            "pair" => {
                expect(5)?;
                once(pair_refs.is_some())?;
                if args[2].text != "|" {
                    return Err(SceneError::new(
                        SyntaxError,
                        args[2].pos,
                        "expected `|` between the two pairs",
                    ));
                }
                let names = [&args[0], &args[1], &args[3], &args[4]]
                    .into_iter()
                    .map(|t| Ok((name(t)?, t.pos)))
                    .collect::<std::result::Result<Vec<_>, SceneError>>()?;
                pair_refs = Some((names, head.pos));
            }
            other => {
                return Err(SceneError::new(
                    SyntaxError,
                    head.pos,
                    format!("unknown directive `{other}`"),
                ));
            }
        }
    }

    let line_names: HashSet<&str> = doc.lines.iter().map(|(n, _)| n.as_str()).collect();
    let point_names: HashSet<&str> = doc.points.iter().map(|(n, _)| n.as_str()).collect();
    let known_line = |n: &str, pos: Pos| {
        if line_names.contains(n) {
            Ok(())
        } else {
            Err(SceneError::new(
                UnknownName,
                pos,
                format!("unknown line `{n}`"),
            ))
        }
    };
    let known_point = |n: &str, pos: Pos| {
        if point_names.contains(n) {
            Ok(())
        } else {
            Err(SceneError::new(
                UnknownName,
                pos,
                format!("unknown point `{n}`"),
            ))
        }
    };

    let mut bound_lines = HashSet::new();
    let mut bound_points = HashSet::new();
    for (l, lpos, p, ppos) in &tangent_refs {
        known_line(l, *lpos)?;
        known_point(p, *ppos)?;
        if !bound_lines.insert(l.clone()) {
            return Err(SceneError::new(
                DuplicateName,
                *lpos,
                format!("line `{l}` is bound twice"),
            ));
        }
        if !bound_points.insert(p.clone()) {
            return Err(SceneError::new(
                DuplicateName,
                *ppos,
                format!("point `{p}` is bound twice"),
            ));
        }
        doc.tangencies.push(Tangency {
            line: l.clone(),
            point: p.clone(),
        });
    }
    for (n, _, a, apos, b, bpos) in &secant_refs {
        known_point(a, *apos)?;
        known_point(b, *bpos)?;
        doc.secants.push(Secant {
            name: n.clone(),
            from: a.clone(),
            to: b.clone(),
        });
    }
    if let Some((names, _)) = &pair_refs {
        for (n, pos) in names {
            known_line(n, *pos)?;
        }
    }

    let end = Pos {
        line: last_line,
        column: 1,
    };
    let mode = match (lambda_pos, weights_pos) {
        (Some(_), Some(w)) => {
            return Err(SceneError::new(
                ModeConflict,
                w,
                "both `lambda` and `weights` given",
            ));
        }
        (None, None) => {
            return Err(SceneError::new(
                ModeConflict,
                end,
                "scene needs `lambda` (two tangents) or `weights` (four tangents)",
            ));
        }
        (Some(_), None) => Mode::Liming,
        (None, Some(_)) => Mode::FourTangent,
    };

    let point_of = |line: &str| {
        doc.tangencies
            .iter()
            .find(|t| t.line == line)
            .map(|t| t.point.clone())
    };
    let joins =
        |s: &Secant, a: &str, b: &str| (s.from == a && s.to == b) || (s.from == b && s.to == a);

    match mode {
        Mode::Liming => {
            if let Some(pos) = form_pos {
                return Err(SceneError::new(
                    ModeConflict,
                    pos,
                    "`form` applies to four-tangent scenes only",
                ));
            }
            if let Some((_, pos)) = pair_refs {
                return Err(SceneError::new(
                    ModeConflict,
                    pos,
                    "`pair` applies to four-tangent scenes only",
                ));
            }
            if doc.tangencies.len() != 2 {
                return Err(SceneError::new(
                    ArityError,
                    end,
                    format!(
                        "two-tangent scene needs 2 tangencies, found {}",
                        doc.tangencies.len()
                    ),
                ));
            }
            if doc.secants.len() != 1 {
                return Err(SceneError::new(
                    ArityError,
                    end,
                    format!(
                        "two-tangent scene needs 1 secant, found {}",
                        doc.secants.len()
                    ),
                ));
            }
            let (a, b) = (&doc.tangencies[0].point, &doc.tangencies[1].point);
            if !joins(&doc.secants[0], a, b) {
                return Err(SceneError::new(
                    ArityError,
                    secant_refs[0].1,
                    format!("secant must join the tangency points `{a}` and `{b}`"),
                ));
            }
        }
        Mode::FourTangent => {
            if doc.tangencies.len() != 4 {
                return Err(SceneError::new(
                    ArityError,
                    end,
                    format!(
                        "four-tangent scene needs 4 tangencies, found {}",
                        doc.tangencies.len()
                    ),
                ));
            }
            if let Some((names, pos)) = &pair_refs {
                let listed: HashSet<&str> = names.iter().map(|(n, _)| n.as_str()).collect();
                let bound: HashSet<&str> = bound_lines.iter().map(String::as_str).collect();
                if listed.len() != 4 || listed != bound {
                    return Err(SceneError::new(
                        ArityError,
                        *pos,
                        "`pair` must list each bound tangent line once",
                    ));
                }
                doc.pair = Some([0, 1, 2, 3].map(|k| names[k].0.clone()));
            }
            if !doc.secants.is_empty() {
                if doc.secants.len() != 2 {
                    return Err(SceneError::new(
                        ArityError,
                        end,
                        format!(
                            "four-tangent scene takes 0 or 2 secants, found {}",
                            doc.secants.len()
                        ),
                    ));
                }
                let order = doc.tangent_order();
                let pts: Vec<String> = order
                    .iter()
                    .map(|l| point_of(l).unwrap_or_default())
                    .collect();
                let ok = |s: &Secant| joins(s, &pts[0], &pts[1]) || joins(s, &pts[2], &pts[3]);
                let (s1, s2) = (&doc.secants[0], &doc.secants[1]);
                let distinct = joins(s1, &pts[0], &pts[1]) != joins(s2, &pts[0], &pts[1]);
                if !(ok(s1) && ok(s2) && distinct) {
                    return Err(SceneError::new(
                        ArityError,
                        secant_refs[0].1,
                        "secants must join the tangency points of each pair",
                    ));
                }
            }
        }
    }
    Ok(doc)
}

impl SceneDoc {
    pub fn mode(&self) -> Mode {
        if self.lambda.is_some() {
            Mode::Liming
        } else {
            Mode::FourTangent
        }
    }

    pub fn line(&self, name: &str) -> Option<LineImplicit> {
        self.lines.iter().find(|(n, _)| n == name).map(|(_, l)| *l)
    }

    pub fn point(&self, name: &str) -> Option<Point2> {
        self.points.iter().find(|(n, _)| n == name).map(|(_, p)| *p)
    }

    /// Tangent line names in blending order: the `pair` directive when
    /// present, otherwise the order of the `tangent` bindings.
    pub fn tangent_order(&self) -> Vec<String> {
        match &self.pair {
            Some(p) => p.to_vec(),
            None => self.tangencies.iter().map(|t| t.line.clone()).collect(),
        }
    }

    /// Builds the field, checking that every tangency point is on its line.
    pub fn build(&self) -> Result<Scene> {
        let mut tangencies = Vec::new();
        for (k, name) in self.tangent_order().iter().enumerate() {
            let binding = self
                .tangencies
                .iter()
                .find(|t| &t.line == name)
                .expect("parser checked the bindings");
            let line = self.line(&binding.line).expect("parser resolved names");
            let point = self.point(&binding.point).expect("parser resolved names");
            let residual = line.eval(point).abs() / line.gradient().norm();
            if !(residual <= EPS_ON_CURVE * (1.0 + point.norm())) {
                return Err(Error::TangencyViolation {
                    index: k + 1,
                    residual,
                });
            }
            tangencies.push(BoundTangent {
                line_name: binding.line.clone(),
                point_name: binding.point.clone(),
                line,
                point,
            });
        }

        let field = match self.mode() {
            Mode::Liming => {
                let (p1, p2) = (tangencies[0].point, tangencies[1].point);
                let secant = LineImplicit::chord(p1, p2)
                    .map_err(|_| Error::DegenerateSecant { index: 1 })?;
                let lambda = self.lambda.expect("liming mode has lambda");
                SceneField::Liming(LimingSpec::new(
                    tangencies[0].line,
                    tangencies[1].line,
                    secant,
                    lambda,
                )?)
            }
            Mode::FourTangent => {
                let lines = [0, 1, 2, 3].map(|k| tangencies[k].line);
                let points = [0, 1, 2, 3].map(|k| tangencies[k].point);
                let weights = self.weights.expect("four-tangent mode has weights");
                SceneField::FourTangent(FourTangentSpec::new(
                    lines,
                    points,
                    weights,
                    self.form.unwrap_or_default(),
                )?)
            }
        };
        Ok(Scene { field, tangencies })
    }
}

impl fmt::Display for SceneDoc {
    /// Canonical text that parses back to an equal document.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, l) in &self.lines {
            writeln!(f, "line {n} {} {} {}", l.a(), l.b(), l.c())?;
        }
        for (n, p) in &self.points {
            writeln!(f, "point {n} {} {}", p.x, p.y)?;
        }
        for t in &self.tangencies {
            writeln!(f, "tangent {} {}", t.line, t.point)?;
        }
        for s in &self.secants {
            writeln!(f, "secant {} {} {}", s.name, s.from, s.to)?;
        }
        if let Some(l) = self.lambda {
            writeln!(f, "lambda {l}")?;
        }
        if let Some(w) = self.weights {
            writeln!(f, "weights {} {} {}", w.w1, w.w2, w.w0)?;
        }
        if let Some(form) = self.form {
            writeln!(f, "form {form}")?;
        }
        if let Some(p) = &self.pair {
            writeln!(f, "pair {} {} | {} {}", p[0], p[1], p[2], p[3])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundTangent {
    pub line_name: String,
    pub point_name: String,
    pub line: LineImplicit,
    pub point: Point2,
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum SceneField {
    Liming(LimingSpec),
    FourTangent(FourTangentSpec),
}

impl Field for SceneField {
    fn value(&self, p: Point2) -> Result<f64> {
        match self {
            SceneField::Liming(s) => s.value(p),
            SceneField::FourTangent(s) => s.value(p),
        }
    }

    fn gradient(&self, p: Point2) -> Result<GradientVec> {
        match self {
            SceneField::Liming(s) => Field::gradient(s, p),
            SceneField::FourTangent(s) => Field::gradient(s, p),
        }
    }
}

/// A validated scene ready for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub field: SceneField,
    /// Tangents in blending order with their tangency points.
    pub tangencies: Vec<BoundTangent>,
}

impl Scene {
    pub fn mode(&self) -> Mode {
        match self.field {
            SceneField::Liming(_) => Mode::Liming,
            SceneField::FourTangent(_) => Mode::FourTangent,
        }
    }

    pub fn secants(&self) -> Vec<LineImplicit> {
        match &self.field {
            SceneField::Liming(s) => vec![s.secant()],
            SceneField::FourTangent(s) => s.secants().to_vec(),
        }
    }

    pub fn tangent_lines(&self) -> Vec<LineImplicit> {
        self.tangencies.iter().map(|t| t.line).collect()
    }

    pub fn tangency_points(&self) -> Vec<Point2> {
        self.tangencies.iter().map(|t| t.point).collect()
    }
}
