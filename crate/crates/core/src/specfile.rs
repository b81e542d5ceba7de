//! Text format for algebras and oracle configurations.
//!
//! ```text
//! name = so3_twisted
//! dim_h = 2
//! dim_v = 1
//! params {
//!   c = 0
//! }
//! bracket 1 2 = -1 3
//! bracket 1 3 = -c 1; c^2+1 2
//! oracle {
//!   factor g regular integer
//!   cutoff = 40
//! }
//! frame_map {
//!   1 = -1 g3; c g2
//! }
//! ```
//!
//! Each bracket term is `<expression> <index>`; only `i < j` may be listed and
//! the antisymmetric completion is automatic. Frame-map terms end in a factor
//! generator `<label><1|2|3>`. `#` starts a comment.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::algebra::{AlgebraError, SrcAlgebra};
use crate::expr::{self, ExprError};
use crate::spectral::{Factor, FactorKind, OracleConfig, Parity, SpectralError, SpinPolicy, DEFAULT_CUTOFF};
use crate::tensor::Tensor3;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown parameter '{0}'")]
    UnknownParam(String),
    #[error("parameter '{0}' has no value; bind it with {0}=<value>")]
    UnboundParam(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamDecl {
    pub name: String,
    pub default: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
struct Term {
    expr: String,
    target: String,
}

#[derive(Debug, Clone, PartialEq)]
struct Line<T> {
    line: usize,
    value: T,
}

#[derive(Debug, Clone, PartialEq)]
struct OracleDecl {
    line: usize,
    factors: Vec<Factor>,
    parity: Parity,
    cutoff: f64,
}

/// A parsed but not yet instantiated spec file.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecFile {
    pub name: String,
    pub dim_h: usize,
    pub dim_v: usize,
    pub params: Vec<ParamDecl>,
    brackets: Vec<Line<(usize, usize, Vec<Term>)>>,
    oracle: Option<OracleDecl>,
    frame_map: Vec<Line<(usize, Vec<Term>)>>,
}

/// An algebra with all parameters substituted, plus its oracle if declared.
#[derive(Debug, Clone)]
pub struct Instance {
    pub algebra: SrcAlgebra,
    pub oracle: Option<OracleConfig>,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Top,
    Params,
    Oracle,
    FrameMap,
}

fn parse_terms(line: usize, rhs: &str) -> Result<Vec<Term>, ParseError> {
    let mut out = Vec::new();
    for raw in rhs.split(';') {
        let t = raw.trim();
        if t.is_empty() {
            return Err(err(line, "empty term"));
        }
        let (expr, target) = match t.rfind(char::is_whitespace) {
            Some(p) => (t[..p].trim().to_string(), t[p..].trim().to_string()),
            None => ("1".to_string(), t.to_string()),
        };
        expr::free_names(&expr).map_err(|e| err(line, format!("bad coefficient '{expr}': {e}")))?;
        out.push(Term { expr, target });
    }
    Ok(out)
}

fn parse_index(line: usize, s: &str) -> Result<usize, ParseError> {
    match s.parse::<usize>() {
        Ok(i) if i >= 1 => Ok(i),
        _ => Err(err(line, format!("expected a frame index (1-based), got '{s}'"))),
    }
}

fn parse_number(line: usize, s: &str) -> Result<f64, ParseError> {
    expr::eval(s, &|_| None).map_err(|e| err(line, format!("bad number '{s}': {e}")))
}

fn key_value(s: &str) -> Option<(&str, &str)> {
    let (k, v) = s.split_once('=')?;
    Some((k.trim(), v.trim()))
}

impl SpecFile {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let mut name = None;
        let mut dim_h = None;
        let mut dim_v = None;
        let mut params: Vec<ParamDecl> = Vec::new();
        let mut brackets: Vec<Line<(usize, usize, Vec<Term>)>> = Vec::new();
        let mut frame_map = Vec::new();
        let mut oracle: Option<OracleDecl> = None;
        let mut section = Section::Top;
        let mut last_line = 0;

        for (idx, raw) in src.lines().enumerate() {
            let ln = idx + 1;
            last_line = ln;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            if section == Section::Top {
                if let Some(head) = text.strip_suffix('{') {
                    section = match head.trim() {
                        "params" => Section::Params,
                        "oracle" => {
                            if oracle.is_some() {
                                return Err(err(ln, "duplicate oracle section"));
                            }
                            oracle = Some(OracleDecl {
                                line: ln,
                                factors: Vec::new(),
                                parity: Parity::Any,
                                cutoff: DEFAULT_CUTOFF,
                            });
                            Section::Oracle
                        }
                        "frame_map" => Section::FrameMap,
                        other => return Err(err(ln, format!("unknown section '{other}'"))),
                    };
                    continue;
                }
                if let Some(rest) = text.strip_prefix("bracket ") {
                    let (lhs, rhs) = rest
                        .split_once('=')
                        .ok_or_else(|| err(ln, "expected 'bracket i j = coeff k; ...'"))?;
                    let idx: Vec<&str> = lhs.split_whitespace().collect();
                    if idx.len() != 2 {
                        return Err(err(ln, "expected two indices before '='"));
                    }
                    let i = parse_index(ln, idx[0])?;
                    let j = parse_index(ln, idx[1])?;
                    if i >= j {
                        return Err(err(ln, format!("bracket {i} {j}: list only pairs with i < j")));
                    }
                    if brackets.iter().any(|b| b.value.0 == i && b.value.1 == j) {
                        return Err(err(ln, format!("bracket {i} {j} listed twice")));
                    }
                    brackets.push(Line {
                        line: ln,
                        value: (i, j, parse_terms(ln, rhs)?),
                    });
                    continue;
                }
                let (k, v) = key_value(text).ok_or_else(|| err(ln, format!("cannot parse '{text}'")))?;
                match k {
                    "name" => name = Some(v.to_string()),
                    "dim_h" => dim_h = Some(v.parse::<usize>().map_err(|_| err(ln, "dim_h must be an integer"))?),
                    "dim_v" => dim_v = Some(v.parse::<usize>().map_err(|_| err(ln, "dim_v must be an integer"))?),
                    _ => return Err(err(ln, format!("unknown key '{k}'"))),
                }
                continue;
            }
            if text == "}" {
                section = Section::Top;
                continue;
            }
            match section {
                Section::Params => {
                    let (pname, default) = match key_value(text) {
                        Some((k, v)) => (k, Some(parse_number(ln, v)?)),
                        None => (text, None),
                    };
                    if !pname.chars().all(|c| c.is_alphanumeric() || c == '_')
                        || !pname.starts_with(|c: char| c.is_alphabetic() || c == '_')
                    {
                        return Err(err(ln, format!("bad parameter name '{pname}'")));
                    }
                    if params.iter().any(|p| p.name == pname) {
                        return Err(err(ln, format!("parameter '{pname}' declared twice")));
                    }
                    params.push(ParamDecl {
                        name: pname.to_string(),
                        default,
                    });
                }
                Section::Oracle => {
                    let o = oracle.as_mut().expect("oracle section is open");
                    let words: Vec<&str> = text.split_whitespace().collect();
                    match words.first().copied() {
                        Some("factor") => {
                            if words.len() != 4 {
                                return Err(err(ln, "expected 'factor <label> <regular|sphere> <half|integer>'"));
                            }
                            let kind = match words[2] {
                                "regular" => FactorKind::GroupRegular,
                                "sphere" => FactorKind::Sphere,
                                w => return Err(err(ln, format!("unknown factor kind '{w}'"))),
                            };
                            let spins = match words[3] {
                                "half" => SpinPolicy::HalfInteger,
                                "integer" => SpinPolicy::Integer,
                                w => return Err(err(ln, format!("unknown spin policy '{w}'"))),
                            };
                            let label = words[1].to_string();
                            if !label.chars().all(char::is_alphabetic) {
                                return Err(err(ln, format!("factor label '{label}' must be alphabetic")));
                            }
                            if o.factors.iter().any(|f| f.label == label) {
                                return Err(err(ln, format!("factor '{label}' declared twice")));
                            }
                            o.factors.push(Factor { label, kind, spins });
                        }
                        Some("parity") => {
                            o.parity = match words.get(1).copied() {
                                Some("any") => Parity::Any,
                                Some("integer_sum") => Parity::IntegerSum,
                                _ => return Err(err(ln, "expected 'parity any|integer_sum'")),
                            };
                        }
                        _ => match key_value(text) {
                            Some(("cutoff", v)) => o.cutoff = parse_number(ln, v)?,
                            _ => return Err(err(ln, format!("cannot parse oracle line '{text}'"))),
                        },
                    }
                }
                Section::FrameMap => {
                    let (lhs, rhs) = text
                        .split_once('=')
                        .ok_or_else(|| err(ln, "expected '<index> = coeff generator; ...'"))?;
                    let i = parse_index(ln, lhs.trim())?;
                    if frame_map.iter().any(|l: &Line<(usize, Vec<Term>)>| l.value.0 == i) {
                        return Err(err(ln, format!("frame vector {i} mapped twice")));
                    }
                    frame_map.push(Line {
                        line: ln,
                        value: (i, parse_terms(ln, rhs)?),
                    });
                }
                Section::Top => unreachable!(),
            }
        }
        if section != Section::Top {
            return Err(err(last_line, "unterminated section"));
        }
        let dim_h = dim_h.ok_or_else(|| err(last_line, "missing dim_h"))?;
        let dim_v = dim_v.ok_or_else(|| err(last_line, "missing dim_v"))?;
        let n = dim_h + dim_v;
        for b in &brackets {
            let (i, j, terms) = &b.value;
            if *j > n {
                return Err(err(b.line, format!("bracket {i} {j}: index exceeds dimension {n}")));
            }
            for t in terms {
                let k = parse_index(b.line, &t.target)?;
                if k > n {
                    return Err(err(b.line, format!("target index {k} exceeds dimension {n}")));
                }
            }
        }
        if oracle.is_some() != !frame_map.is_empty() {
            return Err(err(last_line, "an oracle section requires a frame_map section and vice versa"));
        }
        Ok(Self {
            name: name.unwrap_or_else(|| "unnamed".to_string()),
            dim_h,
            dim_v,
            params,
            brackets,
            oracle,
            frame_map,
        })
    }

    pub fn has_oracle(&self) -> bool {
        self.oracle.is_some()
    }

    /// Substitutes parameters (defaults overridden by `bindings`) and builds the algebra and oracle.
    pub fn instantiate(&self, bindings: &[(String, f64)]) -> Result<Instance, SpecError> {
        let mut values: Vec<(String, Option<f64>)> =
            self.params.iter().map(|p| (p.name.clone(), p.default)).collect();
        for (k, v) in bindings {
            match values.iter_mut().find(|(n, _)| n == k) {
                Some(slot) => slot.1 = Some(*v),
                None => return Err(SpecError::UnknownParam(k.clone())),
            }
        }
        let mut bound = Vec::with_capacity(values.len());
        for (k, v) in values {
            match v {
                Some(v) => bound.push((k, v)),
                None => return Err(SpecError::UnboundParam(k)),
            }
        }
        let lookup = |name: &str| bound.iter().find(|(k, _)| k == name).map(|(_, v)| *v);
        let eval = |line: usize, e: &str| {
            expr::eval(e, &lookup).map_err(|x: ExprError| SpecError::Parse(err(line, format!("coefficient '{e}': {x}"))))
        };
        let n = self.dim_h + self.dim_v;
        let mut c = Tensor3::zeros(n);
        for b in &self.brackets {
            let (i, j, terms) = &b.value;
            for t in terms {
                let k = parse_index(b.line, &t.target)? - 1;
                let v = eval(b.line, &t.expr)?;
                c[(i - 1, j - 1, k)] += v;
                c[(j - 1, i - 1, k)] -= v;
            }
        }
        let algebra = SrcAlgebra::from_tensor(self.name.clone(), self.dim_h, self.dim_v, c)?.with_params(bound.clone());
        let oracle = match &self.oracle {
            None => None,
            Some(o) => {
                let nf = o.factors.len();
                let mut fm = DMatrix::<f64>::zeros(n, 3 * nf);
                let mut seen = vec![false; n];
                for l in &self.frame_map {
                    let (i, terms) = &l.value;
                    if *i > n {
                        return Err(err(l.line, format!("frame vector {i} exceeds dimension {n}")).into());
                    }
                    seen[i - 1] = true;
                    for t in terms {
                        let (label, digit) = t.target.split_at(t.target.len().saturating_sub(1));
                        let a = match digit {
                            "1" => 0,
                            "2" => 1,
                            "3" => 2,
                            _ => return Err(err(l.line, format!("bad generator '{}'", t.target)).into()),
                        };
                        let f = o
                            .factors
                            .iter()
                            .position(|f| f.label == label)
                            .ok_or_else(|| err(l.line, format!("unknown factor '{label}'")))?;
                        fm[(i - 1, 3 * f + a)] += eval(l.line, &t.expr)?;
                    }
                }
                if let Some(missing) = seen.iter().position(|s| !s) {
                    return Err(err(o.line, format!("frame_map does not map frame vector {}", missing + 1)).into());
                }
                Some(OracleConfig::new(self.dim_h, o.factors.clone(), o.parity, fm, o.cutoff)?)
            }
        };
        Ok(Instance { algebra, oracle })
    }
}

/// Parses `name=value` into a binding.
pub fn parse_binding(s: &str) -> Option<(String, f64)> {
    let (k, v) = key_value(s)?;
    if k.is_empty() {
        return None;
    }
    let v = expr::eval(v, &|_| None).ok()?;
    Some((k.to_string(), v))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SRC: &str = "
name = demo   # comment
dim_h = 2
dim_v = 1
params {
  c = 0
  free
}
bracket 1 2 = -1 3
bracket 1 3 = -c 1; c^2+1 2
bracket 2 3 = -1 1; free 2
";

    #[test]
    fn parses_and_substitutes() {
        let spec = SpecFile::parse(SRC).unwrap();
        assert_eq!(spec.params.len(), 2);
        let inst = spec
            .instantiate(&[("c".into(), 2.0), ("free".into(), 0.5)])
            .unwrap();
        let a = inst.algebra;
        assert_eq!(a.c(0, 2, 1), 5.0);
        assert_eq!(a.c(2, 0, 1), -5.0);
        assert_eq!(a.c(0, 2, 0), -2.0);
        assert_eq!(a.c(1, 2, 1), 0.5);
        assert_eq!(a.params(), &[("c".to_string(), 2.0), ("free".to_string(), 0.5)]);
        assert!(inst.oracle.is_none());
    }

    #[test]
    fn binding_errors() {
        let spec = SpecFile::parse(SRC).unwrap();
        assert_eq!(spec.instantiate(&[]).unwrap_err(), SpecError::UnboundParam("free".into()));
        assert_eq!(
            spec.instantiate(&[("free".into(), 1.0), ("zz".into(), 1.0)]).unwrap_err(),
            SpecError::UnknownParam("zz".into())
        );
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let e = SpecFile::parse("dim_h = 2\ndim_v = 1\nbracket 2 1 = 1 3\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = SpecFile::parse("dim_h = 2\ndim_v = 1\nbracket 1 2 = 1 4\n").unwrap_err();
        assert!(e.message.contains("exceeds"));
        let e = SpecFile::parse("dim_h = 2\nparams {\n").unwrap_err();
        assert!(e.message.contains("unterminated"));
        let e = SpecFile::parse("dim_h = 2\ndim_v = 1\nbracket 1 2 = (1 3\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(SpecFile::parse("wat\n").is_err());
    }

    #[test]
    fn undeclared_names_fail_at_instantiation() {
        let spec = SpecFile::parse("dim_h = 2\ndim_v = 1\nbracket 1 2 = q 3\n").unwrap();
        match spec.instantiate(&[]) {
            Err(SpecError::Parse(p)) => assert!(p.message.contains("unknown parameter 'q'")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bindings() {
        assert_eq!(parse_binding("b=0.25"), Some(("b".into(), 0.25)));
        assert_eq!(parse_binding("b = 1/4"), Some(("b".into(), 0.25)));
        assert_eq!(parse_binding("=1"), None);
        assert_eq!(parse_binding("b"), None);
    }
}
