//! Parser and renderer for the `optimization` block of DOML, plus the
//! generator for the 12-instance benchmark suite.

use crate::catalog::{CatalogProperty, ElementType};
use thiserror::Error;

/// A metric that can be optimized or bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Cost,
    Availability,
    Performance,
}

impl Metric {
    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Cost => "cost",
            Metric::Availability => "availability",
            Metric::Performance => "performance",
        }
    }

    fn from_str(s: &str) -> Option<Metric> {
        match s {
            "cost" => Some(Metric::Cost),
            "availability" => Some(Metric::Availability),
            "performance" => Some(Metric::Performance),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

/// One objective: a metric and its optimization direction.
///
/// Cost may only be minimized; availability and performance only maximized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObjectiveSpec {
    pub metric: Metric,
    pub sense: Sense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RequirementSpec {
    /// Numeric bound on an aggregated metric (non-strict).
    Bound {
        metric: Metric,
        kind: BoundKind,
        value: f64,
    },
    /// Allowed-value filter on a catalog property.
    Categorical {
        property: CatalogProperty,
        allowed: Vec<String>,
    },
    /// The deployment shape: one slot per listed element type.
    Elements { slots: Vec<ElementType> },
}

/// Parsed `optimization` block.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationSpec {
    pub name: String,
    pub objectives: Vec<ObjectiveSpec>,
    pub requirements: Vec<RequirementSpec>,
}

impl OptimizationSpec {
    pub fn slots(&self) -> &[ElementType] {
        self.requirements
            .iter()
            .find_map(|r| match r {
                RequirementSpec::Elements { slots } => Some(slots.as_slice()),
                _ => None,
            })
            .expect("validated spec has an elements requirement")
    }

    pub fn bounds(&self) -> Vec<(Metric, BoundKind, f64)> {
        self.requirements
            .iter()
            .filter_map(|r| match r {
                RequirementSpec::Bound { metric, kind, value } => Some((*metric, *kind, *value)),
                _ => None,
            })
            .collect()
    }

    pub fn categorical_constraints(&self) -> Vec<(CatalogProperty, Vec<String>)> {
        self.requirements
            .iter()
            .filter_map(|r| match r {
                RequirementSpec::Categorical { property, allowed } => {
                    Some((*property, allowed.clone()))
                }
                _ => None,
            })
            .collect()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DomlError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("at least two objectives required")]
    TooFewObjectives,
    #[error("at most three objectives allowed")]
    TooManyObjectives,
    #[error("duplicate objective metric `{0}`")]
    DuplicateObjective(String),
    #[error("unknown objective metric `{0}`")]
    UnknownMetric(String),
    #[error("objective `{metric}` cannot be optimized with sense `{sense}`")]
    ContradictorySense { metric: String, sense: String },
    #[error("unknown requirement target `{0}`")]
    UnknownTarget(String),
    #[error("unknown element type `{0}`")]
    UnknownElementType(String),
    #[error("requirement on `{0}` needs a max/min bound clause")]
    MissingBoundClause(String),
    #[error("requirement on `{0}` needs a values clause")]
    MissingValuesClause(String),
    #[error("requirement on `{0}` has the wrong clause kind")]
    WrongClause(String),
    #[error("missing elements requirement")]
    MissingElements,
    #[error("more than one elements requirement")]
    DuplicateElements,
    #[error("elements list is empty")]
    EmptyElements,
    #[error("values list is empty")]
    EmptyValues,
    #[error("bound value is not finite")]
    NonFiniteBound,
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Number(f64),
    LBrace,
    RBrace,
    Arrow,
    Semi,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Number(n) => write!(f, "{n}"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Arrow => f.write_str("`=>`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, line: 1, column: 1 }
    }

    fn error(&self, message: impl Into<String>) -> DomlError {
        DomlError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn next_token(&mut self) -> Result<Spanned, DomlError> {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump(c);
            } else {
                break;
            }
        }
        let (line, column) = (self.line, self.column);
        let spanned = |tok| Spanned { tok, line, column };
        let Some(c) = self.peek() else {
            return Ok(spanned(Tok::Eof));
        };
        match c {
            '{' => {
                self.bump(c);
                Ok(spanned(Tok::LBrace))
            }
            '}' => {
                self.bump(c);
                Ok(spanned(Tok::RBrace))
            }
            ';' => {
                self.bump(c);
                Ok(spanned(Tok::Semi))
            }
            '=' => {
                self.bump(c);
                match self.peek() {
                    Some('>') => {
                        self.bump('>');
                        Ok(spanned(Tok::Arrow))
                    }
                    _ => Err(self.error("expected `>` after `=`")),
                }
            }
            '"' => {
                self.bump(c);
                let start = self.pos;
                loop {
                    match self.peek() {
                        Some('"') => {
                            let s = self.src[start..self.pos].to_string();
                            self.bump('"');
                            return Ok(spanned(Tok::Str(s)));
                        }
                        Some(ch) => self.bump(ch),
                        None => return Err(self.error("unterminated string")),
                    }
                }
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' => {
                let start = self.pos;
                self.bump(c);
                while let Some(ch) = self.peek() {
                    if ch.is_ascii_digit() || ch == '.' || ch == 'e' || ch == 'E' || ch == '-'
                        || ch == '+'
                    {
                        // sign characters only valid right after an exponent
                        if (ch == '-' || ch == '+')
                            && !matches!(
                                self.src[start..self.pos].chars().last(),
                                Some('e') | Some('E')
                            )
                        {
                            break;
                        }
                        self.bump(ch);
                    } else {
                        break;
                    }
                }
                let text = &self.src[start..self.pos];
                text.parse::<f64>()
                    .map(|n| spanned(Tok::Number(n)))
                    .map_err(|_| DomlError::Syntax {
                        line,
                        column,
                        message: format!("invalid number `{text}`"),
                    })
            }
            c if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.bump(c);
                while let Some(ch) = self.peek() {
                    if ch.is_ascii_alphanumeric() || ch == '_' {
                        self.bump(ch);
                    } else {
                        break;
                    }
                }
                Ok(spanned(Tok::Ident(self.src[start..self.pos].to_string())))
            }
            other => Err(self.error(format!("unexpected character `{other}`"))),
        }
    }
}

// ---------------------------------------------------------------------------
// Parser

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Spanned,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, DomlError> {
        let mut lexer = Lexer::new(src);
        let current = lexer.next_token()?;
        Ok(Parser { lexer, current })
    }

    fn advance(&mut self) -> Result<Spanned, DomlError> {
        let next = self.lexer.next_token()?;
        Ok(std::mem::replace(&mut self.current, next))
    }

    fn unexpected(&self, expected: &str) -> DomlError {
        DomlError::Syntax {
            line: self.current.line,
            column: self.current.column,
            message: format!("expected {expected}, found {}", self.current.tok),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), DomlError> {
        match &self.current.tok {
            Tok::Ident(s) if s == kw => {
                self.advance()?;
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn expect_lbrace(&mut self) -> Result<(), DomlError> {
        match self.current.tok {
            Tok::LBrace => {
                self.advance()?;
                Ok(())
            }
            _ => Err(self.unexpected("`{`")),
        }
    }

    fn expect_rbrace(&mut self) -> Result<(), DomlError> {
        match self.current.tok {
            Tok::RBrace => {
                self.advance()?;
                Ok(())
            }
            _ => Err(self.unexpected("`}`")),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, DomlError> {
        match &self.current.tok {
            Tok::Ident(_) => {
                let sp = self.advance()?;
                match sp.tok {
                    Tok::Ident(s) => Ok(s),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn expect_string(&mut self, what: &str) -> Result<String, DomlError> {
        match &self.current.tok {
            Tok::Str(_) => {
                let sp = self.advance()?;
                match sp.tok {
                    Tok::Str(s) => Ok(s),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn expect_arrow(&mut self) -> Result<(), DomlError> {
        match self.current.tok {
            Tok::Arrow => {
                self.advance()?;
                Ok(())
            }
            _ => Err(self.unexpected("`=>`")),
        }
    }
}

/// Raw requirement clause before target dispatch.
#[derive(Debug, Clone, PartialEq)]
enum Clause {
    Bound(BoundKind, f64),
    Values(String),
}

/// Parse the `optimization` block of a DOML document.
pub fn parse_doml(text: &str) -> Result<OptimizationSpec, DomlError> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("optimization")?;
    let name = p.expect_ident("block name")?;
    p.expect_lbrace()?;

    // objectives
    p.expect_keyword("objectives")?;
    p.expect_lbrace()?;
    let mut objectives = Vec::new();
    while !matches!(p.current.tok, Tok::RBrace) {
        let metric_str = p.expect_string("objective metric string")?;
        p.expect_arrow()?;
        let sense_str = p.expect_ident("`min` or `max`")?;
        let sense = match sense_str.as_str() {
            "min" => Sense::Min,
            "max" => Sense::Max,
            _ => return Err(p.unexpected("`min` or `max`")),
        };
        let metric =
            Metric::from_str(&metric_str).ok_or(DomlError::UnknownMetric(metric_str.clone()))?;
        let valid = matches!(
            (metric, sense),
            (Metric::Cost, Sense::Min)
                | (Metric::Availability, Sense::Max)
                | (Metric::Performance, Sense::Max)
        );
        if !valid {
            return Err(DomlError::ContradictorySense {
                metric: metric_str,
                sense: sense_str,
            });
        }
        if objectives.iter().any(|o: &ObjectiveSpec| o.metric == metric) {
            return Err(DomlError::DuplicateObjective(metric_str));
        }
        objectives.push(ObjectiveSpec { metric, sense });
    }
    p.expect_rbrace()?;
    if objectives.len() < 2 {
        return Err(DomlError::TooFewObjectives);
    }
    if objectives.len() > 3 {
        return Err(DomlError::TooManyObjectives);
    }

    // requirements
    p.expect_keyword("nonfunctional_requirements")?;
    p.expect_lbrace()?;
    let mut requirements = Vec::new();
    while !matches!(p.current.tok, Tok::RBrace) {
        let _req_name = p.expect_ident("requirement name")?;
        let description = p.expect_string("requirement description")?;
        let clause = match &p.current.tok {
            Tok::Ident(kw) if kw == "max" || kw == "min" => {
                let kind = if kw == "max" { BoundKind::Max } else { BoundKind::Min };
                p.advance()?;
                let value = match p.current.tok {
                    Tok::Number(n) => {
                        p.advance()?;
                        n
                    }
                    _ => return Err(p.unexpected("bound value")),
                };
                Some(Clause::Bound(kind, value))
            }
            Tok::Ident(kw) if kw == "values" => {
                p.advance()?;
                let s = p.expect_string("values string")?;
                Some(Clause::Values(s))
            }
            _ => None,
        };
        p.expect_arrow()?;
        let target = p.expect_string("requirement target string")?;
        match p.current.tok {
            Tok::Semi => {
                p.advance()?;
            }
            _ => return Err(p.unexpected("`;`")),
        }
        requirements.push(dispatch_requirement(&description, clause, &target)?);
    }
    p.expect_rbrace()?;
    p.expect_rbrace()?;
    match p.current.tok {
        Tok::Eof => {}
        _ => return Err(p.unexpected("end of input")),
    }

    let elements = requirements
        .iter()
        .filter(|r| matches!(r, RequirementSpec::Elements { .. }))
        .count();
    match elements {
        0 => return Err(DomlError::MissingElements),
        1 => {}
        _ => return Err(DomlError::DuplicateElements),
    }

    Ok(OptimizationSpec { name, objectives, requirements })
}

/// Select the requirement variant from its target string; a requirement whose
/// description is "elements" carries the slot list in its target.
fn dispatch_requirement(
    description: &str,
    clause: Option<Clause>,
    target: &str,
) -> Result<RequirementSpec, DomlError> {
    if description == "elements" {
        if clause.is_some() {
            return Err(DomlError::WrongClause("elements".into()));
        }
        let slots = target
            .split(',')
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .map(|s| match s {
                "Storage" => Ok(ElementType::Storage),
                "DB" => Ok(ElementType::Db),
                "VM" => Ok(ElementType::Vm),
                other => Err(DomlError::UnknownElementType(other.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if slots.is_empty() {
            return Err(DomlError::EmptyElements);
        }
        return Ok(RequirementSpec::Elements { slots });
    }
    if let Some(metric) = Metric::from_str(target) {
        return match clause {
            Some(Clause::Bound(kind, value)) => {
                if !value.is_finite() {
                    return Err(DomlError::NonFiniteBound);
                }
                Ok(RequirementSpec::Bound { metric, kind, value })
            }
            Some(Clause::Values(_)) => Err(DomlError::WrongClause(target.to_string())),
            None => Err(DomlError::MissingBoundClause(target.to_string())),
        };
    }
    let property = match target {
        "region" => CatalogProperty::Region,
        "provider" => CatalogProperty::Provider,
        other => return Err(DomlError::UnknownTarget(other.to_string())),
    };
    match clause {
        Some(Clause::Values(s)) => {
            let allowed: Vec<String> = s
                .split(',')
                .map(|v| v.trim().to_string())
                .filter(|v| !v.is_empty())
                .collect();
            if allowed.is_empty() {
                return Err(DomlError::EmptyValues);
            }
            Ok(RequirementSpec::Categorical { property, allowed })
        }
        Some(Clause::Bound(..)) => Err(DomlError::WrongClause(target.to_string())),
        None => Err(DomlError::MissingValuesClause(target.to_string())),
    }
}

// ---------------------------------------------------------------------------
// Renderer

/// Emit a valid spec back to surface syntax; `parse_doml(render_doml(s)) == s`.
pub fn render_doml(spec: &OptimizationSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("optimization {} {{\n", spec.name));
    out.push_str("  objectives {\n");
    for o in &spec.objectives {
        let sense = match o.sense {
            Sense::Min => "min",
            Sense::Max => "max",
        };
        out.push_str(&format!("    \"{}\" => {}\n", o.metric.as_str(), sense));
    }
    out.push_str("  }\n");
    out.push_str("  nonfunctional_requirements {\n");
    for (i, r) in spec.requirements.iter().enumerate() {
        let name = format!("req{}", i + 1);
        match r {
            RequirementSpec::Bound { metric, kind, value } => {
                let (kw, op) = match kind {
                    BoundKind::Max => ("max", "<="),
                    BoundKind::Min => ("min", ">="),
                };
                out.push_str(&format!(
                    "    {name} \"{m} {op} {value:?}\" {kw} {value:?} => \"{m}\";\n",
                    m = metric.as_str(),
                ));
            }
            RequirementSpec::Categorical { property, allowed } => {
                out.push_str(&format!(
                    "    {name} \"{p}\" values \"{vals}\" => \"{p}\";\n",
                    p = property.as_str(),
                    vals = allowed.join(", "),
                ));
            }
            RequirementSpec::Elements { slots } => {
                let list = slots
                    .iter()
                    .map(|t| match t {
                        ElementType::Storage => "Storage",
                        ElementType::Db => "DB",
                        ElementType::Vm => "VM",
                    })
                    .collect::<Vec<_>>()
                    .join(", ");
                out.push_str(&format!("    {name} \"elements\" => \"{list}\";\n"));
            }
        }
    }
    out.push_str("  }\n}\n");
    out
}

// ---------------------------------------------------------------------------
// Benchmark suite

/// Slot-count triples (VMs, DBs, storage) of the benchmark suite.
pub const SUITE_SHAPES: [(usize, usize, usize); 6] =
    [(0, 4, 4), (1, 1, 1), (2, 2, 2), (4, 3, 3), (5, 5, 5), (6, 0, 0)];

/// A named benchmark instance: the document plus its parsed form.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedInstance {
    pub name: String,
    pub text: String,
}

/// Generate the 12-instance benchmark suite `DOML_{A}_{x}-{y}-{z}`.
///
/// Two-objective instances optimize cost & performance for shapes 0-4-4 and
/// 5-5-5, cost & availability otherwise; three-objective instances optimize
/// all three metrics. All instances bound cost to 200, availability to 96,
/// and restrict the region to 00EU.
pub fn generate_instance_suite() -> Vec<NamedInstance> {
    let mut out = Vec::with_capacity(12);
    for n_objectives in [2usize, 3] {
        for (x, y, z) in SUITE_SHAPES {
            let name = format!("DOML_{n_objectives}_{x}-{y}-{z}");
            let objectives = if n_objectives == 3 {
                vec![
                    ObjectiveSpec { metric: Metric::Cost, sense: Sense::Min },
                    ObjectiveSpec { metric: Metric::Availability, sense: Sense::Max },
                    ObjectiveSpec { metric: Metric::Performance, sense: Sense::Max },
                ]
            } else if matches!((x, y, z), (0, 4, 4) | (5, 5, 5)) {
                vec![
                    ObjectiveSpec { metric: Metric::Cost, sense: Sense::Min },
                    ObjectiveSpec { metric: Metric::Performance, sense: Sense::Max },
                ]
            } else {
                vec![
                    ObjectiveSpec { metric: Metric::Cost, sense: Sense::Min },
                    ObjectiveSpec { metric: Metric::Availability, sense: Sense::Max },
                ]
            };
            let mut slots = Vec::new();
            slots.extend(std::iter::repeat(ElementType::Storage).take(z));
            slots.extend(std::iter::repeat(ElementType::Db).take(y));
            slots.extend(std::iter::repeat(ElementType::Vm).take(x));
            let spec = OptimizationSpec {
                name: name.replace('-', "_"),
                objectives,
                requirements: vec![
                    RequirementSpec::Bound {
                        metric: Metric::Cost,
                        kind: BoundKind::Max,
                        value: 200.0,
                    },
                    RequirementSpec::Bound {
                        metric: Metric::Availability,
                        kind: BoundKind::Min,
                        value: 96.0,
                    },
                    RequirementSpec::Categorical {
                        property: CatalogProperty::Region,
                        allowed: vec!["00EU".to_string()],
                    },
                    RequirementSpec::Elements { slots },
                ],
            };
            out.push(NamedInstance { name, text: render_doml(&spec) });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIGURE_TEXT: &str = r#"
optimization opt {
  objectives {
    "cost" => min
    "availability" => max
    "performance" => max
  }
  nonfunctional_requirements {
    req1 "Cost <= 100.0" max 100.0 => "cost";
    req2 "Availability >= 98.0%" min 98.0 => "availability";
    req3 "Region" values "00EU" => "region";
    req4 "elements" => "Storage, DB, VM, VM, VM";
  }
}
"#;

    #[test]
    fn parses_reference_example() {
        let spec = parse_doml(FIGURE_TEXT).unwrap();
        assert_eq!(spec.name, "opt");
        assert_eq!(
            spec.objectives,
            vec![
                ObjectiveSpec { metric: Metric::Cost, sense: Sense::Min },
                ObjectiveSpec { metric: Metric::Availability, sense: Sense::Max },
                ObjectiveSpec { metric: Metric::Performance, sense: Sense::Max },
            ]
        );
        assert_eq!(
            spec.requirements,
            vec![
                RequirementSpec::Bound {
                    metric: Metric::Cost,
                    kind: BoundKind::Max,
                    value: 100.0
                },
                RequirementSpec::Bound {
                    metric: Metric::Availability,
                    kind: BoundKind::Min,
                    value: 98.0
                },
                RequirementSpec::Categorical {
                    property: CatalogProperty::Region,
                    allowed: vec!["00EU".into()]
                },
                RequirementSpec::Elements {
                    slots: vec![
                        ElementType::Storage,
                        ElementType::Db,
                        ElementType::Vm,
                        ElementType::Vm,
                        ElementType::Vm,
                    ]
                },
            ]
        );
    }

    #[test]
    fn round_trips_through_render() {
        let spec = parse_doml(FIGURE_TEXT).unwrap();
        let rendered = render_doml(&spec);
        assert_eq!(parse_doml(&rendered).unwrap(), spec);
    }

    #[test]
    fn rejects_empty_objectives() {
        let text = r#"optimization o { objectives { } nonfunctional_requirements {
            req1 "elements" => "VM"; } }"#;
        assert_eq!(parse_doml(text).unwrap_err(), DomlError::TooFewObjectives);
    }

    #[test]
    fn rejects_duplicate_metric() {
        let text = r#"optimization o { objectives {
            "cost" => min
            "cost" => min
        } nonfunctional_requirements { req1 "elements" => "VM"; } }"#;
        assert_eq!(
            parse_doml(text).unwrap_err(),
            DomlError::DuplicateObjective("cost".into())
        );
    }

    #[test]
    fn rejects_contradictory_sense() {
        let text = r#"optimization o { objectives {
            "cost" => max
            "availability" => max
        } nonfunctional_requirements { req1 "elements" => "VM"; } }"#;
        assert!(matches!(
            parse_doml(text).unwrap_err(),
            DomlError::ContradictorySense { .. }
        ));
    }

    #[test]
    fn rejects_bound_clause_on_categorical_target() {
        let text = r#"optimization o { objectives {
            "cost" => min
            "availability" => max
        } nonfunctional_requirements {
            req1 "r" max 1.0 => "region";
            req2 "elements" => "VM"; } }"#;
        assert_eq!(
            parse_doml(text).unwrap_err(),
            DomlError::WrongClause("region".into())
        );
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_doml("optimization opt [").unwrap_err();
        match err {
            DomlError::Syntax { line, column, .. } => {
                assert_eq!(line, 1);
                assert_eq!(column, 18);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_elements_requirement_rejected() {
        let text = r#"optimization o { objectives {
            "cost" => min
            "availability" => max
        } nonfunctional_requirements {
            req1 "c" max 10.0 => "cost"; } }"#;
        assert_eq!(parse_doml(text).unwrap_err(), DomlError::MissingElements);
    }

    #[test]
    fn suite_has_twelve_reparsable_instances() {
        let suite = generate_instance_suite();
        assert_eq!(suite.len(), 12);
        for inst in &suite {
            let spec = parse_doml(&inst.text).expect("suite instance parses");
            // slot counts match the x-y-z triple in the name
            let shape: Vec<usize> = inst.name[7..]
                .split('-')
                .map(|s| s.parse().unwrap())
                .collect();
            let (x, y, z) = (shape[0], shape[1], shape[2]);
            let slots = spec.slots();
            assert_eq!(slots.iter().filter(|t| **t == ElementType::Vm).count(), x);
            assert_eq!(slots.iter().filter(|t| **t == ElementType::Db).count(), y);
            assert_eq!(
                slots.iter().filter(|t| **t == ElementType::Storage).count(),
                z
            );
        }
    }

    #[test]
    fn suite_objective_sets_follow_the_shape_rule() {
        let suite = generate_instance_suite();
        let by_name: std::collections::HashMap<_, _> = suite
            .iter()
            .map(|i| (i.name.clone(), parse_doml(&i.text).unwrap()))
            .collect();
        let two_obj = &by_name["DOML_2_1-1-1"];
        assert_eq!(
            two_obj.objectives,
            vec![
                ObjectiveSpec { metric: Metric::Cost, sense: Sense::Min },
                ObjectiveSpec { metric: Metric::Availability, sense: Sense::Max },
            ]
        );
        assert_eq!(
            two_obj.slots(),
            &[ElementType::Storage, ElementType::Db, ElementType::Vm]
        );
        let cp = &by_name["DOML_2_0-4-4"];
        assert_eq!(cp.objectives[1].metric, Metric::Performance);
        let three = &by_name["DOML_3_6-0-0"];
        assert_eq!(three.objectives.len(), 3);
        assert_eq!(three.slots(), &[ElementType::Vm; 6]);
    }
}
