//! Family specs: `kind:key=value,...`, or `presentation:<path or <..|..>>`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use selfsim_core::checks::{power_filtration, Filtration};
use selfsim_core::field::GaloisField;
use selfsim_core::group::{FiniteGroup, GroupConfig};
use selfsim_core::matrix::{congruence_filtration, kernel_group, MatrixKind, Ring};
use selfsim_core::nottingham::{depth_filtration, fesenko_group, quotient_group};
use selfsim_core::presentation::{
    parse_presentation, regular_group, todd_coxeter, EnumerationLimits, Presentation,
};
use selfsim_core::tree::{full_group, level_stabilizer_filtration};
use serde_json::{json, Value};

use crate::aut::AutContext;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Nottingham { q: u32, m: usize },
    Fesenko { p: u32, q: usize, n: usize },
    Tree { p: u32, d: usize },
    Matrix { kind: MatrixKind, p: u32, k: u32 },
    Presentation { source: String },
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Nottingham { q, m } => write!(f, "nottingham:q={q},m={m}"),
            FamilySpec::Fesenko { p, q, n } => write!(f, "fesenko:p={p},q={q},n={n}"),
            FamilySpec::Tree { p, d } => write!(f, "tree:p={p},d={d}"),
            FamilySpec::Matrix { kind, p, k } => write!(f, "{kind}:p={p},k={k}"),
            FamilySpec::Presentation { source } => write!(f, "presentation:{source}"),
        }
    }
}

fn params(kind: &str, body: &str, keys: &[&str]) -> Result<BTreeMap<String, u64>, CliError> {
    let mut out = BTreeMap::new();
    for part in body.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{kind}: expected key=value, got {part:?}")))?;
        let k = k.trim();
        if !keys.contains(&k) {
            return Err(CliError::Usage(format!("{kind}: unknown parameter {k:?}")));
        }
        let v: u64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{kind}: {k} must be a nonnegative integer")))?;
        if out.insert(k.to_string(), v).is_some() {
            return Err(CliError::Usage(format!("{kind}: {k} given twice")));
        }
    }
    for k in keys {
        if !out.contains_key(*k) {
            return Err(CliError::Usage(format!("{kind}: missing parameter {k}")));
        }
    }
    Ok(out)
}

fn small<T: TryFrom<u64>>(kind: &str, key: &str, v: u64) -> Result<T, CliError> {
    T::try_from(v).map_err(|_| CliError::Usage(format!("{kind}: {key}={v} is out of range")))
}

impl FamilySpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let (kind, body) = text
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("family spec {text:?} has no ':'")))?;
        let kind = kind.trim();
        Ok(match kind {
            "nottingham" => {
                let p = params(kind, body, &["q", "m"])?;
                FamilySpec::Nottingham {
                    q: small(kind, "q", p["q"])?,
                    m: small(kind, "m", p["m"])?,
                }
            }
            "fesenko" => {
                let p = params(kind, body, &["p", "q", "n"])?;
                FamilySpec::Fesenko {
                    p: small(kind, "p", p["p"])?,
                    q: small(kind, "q", p["q"])?,
                    n: small(kind, "n", p["n"])?,
                }
            }
            "tree" => {
                let p = params(kind, body, &["p", "d"])?;
                FamilySpec::Tree {
                    p: small(kind, "p", p["p"])?,
                    d: small(kind, "d", p["d"])?,
                }
            }
            "sl2zp" | "sl2lambda" => {
                let p = params(kind, body, &["p", "k"])?;
                FamilySpec::Matrix {
                    kind: if kind == "sl2zp" {
                        MatrixKind::Zp
                    } else {
                        MatrixKind::Lambda
                    },
                    p: small(kind, "p", p["p"])?,
                    k: small(kind, "k", p["k"])?,
                }
            }
            "presentation" => FamilySpec::Presentation {
                source: body.to_string(),
            },
            other => return Err(CliError::Usage(format!("unknown family {other:?}"))),
        })
    }

    pub fn ring(&self) -> Option<Ring> {
        match *self {
            FamilySpec::Matrix { kind, p, k } => Ring::new(kind, p, k).ok(),
            _ => None,
        }
    }
}

/// Reads a presentation from a file, or inline when the text starts with `<`.
pub fn load_presentation(source: &str) -> Result<Presentation, CliError> {
    let text = if source.trim_start().starts_with('<') {
        source.to_string()
    } else {
        std::fs::read_to_string(source).map_err(|e| CliError::Io {
            path: source.to_string(),
            message: e.to_string(),
        })?
    };
    Ok(parse_presentation(&text)?)
}

/// A constructed group with its standard filtration.
pub struct Built {
    pub spec: FamilySpec,
    pub group: Arc<FiniteGroup>,
    pub filtration: Filtration,
    pub presentation: Option<Presentation>,
    /// Family-specific configuration echoed into reports.
    pub details: Vec<(String, Value)>,
}

impl Built {
    pub fn aut_context(&self) -> AutContext<'_> {
        AutContext {
            ring: self.spec.ring(),
            presentation: self.presentation.as_ref(),
        }
    }
}

pub fn build(spec: &FamilySpec, config: &GroupConfig) -> Result<Built, CliError> {
    let mut details = Vec::new();
    let mut presentation = None;
    let (group, filtration) = match spec {
        &FamilySpec::Nottingham { q, m } => {
            let field = GaloisField::new(q)?;
            details.push(("field_modulus".into(), json!(field.modulus_string())));
            details.push(("truncation".into(), json!(m.to_string())));
            let g = Arc::new(quotient_group(q, m, config)?);
            let f = depth_filtration(&g, q, m)?;
            (g, f)
        }
        &FamilySpec::Fesenko { p, q, n } => {
            details.push(("truncation".into(), json!(n.to_string())));
            let g = Arc::new(fesenko_group(p, q, n, config)?);
            let f = depth_filtration(&g, p, n)?;
            (g, f)
        }
        &FamilySpec::Tree { p, d } => {
            details.push(("depth".into(), json!(d.to_string())));
            let g = Arc::new(full_group(p, d, config)?);
            let f = level_stabilizer_filtration(&g, p, d)?;
            (g, f)
        }
        &FamilySpec::Matrix { kind, p, k } => {
            details.push((
                "ring_size".into(),
                json!(Ring::new(kind, p, k)?.size().to_string()),
            ));
            let g = Arc::new(kernel_group(kind, p, k, config)?);
            let f = congruence_filtration(&g, kind, p, k)?;
            (g, f)
        }
        FamilySpec::Presentation { source } => {
            let pres = load_presentation(source)?;
            details.push(("presentation".into(), json!(pres.to_string())));
            let table = todd_coxeter(&pres, &[], EnumerationLimits::default())?;
            details.push((
                "cosets_defined".into(),
                json!(table.total_defined.to_string()),
            ));
            let g = Arc::new(regular_group(&pres, &table, config)?);
            let f = power_filtration(&g);
            presentation = Some(pres);
            (g, f)
        }
    };
    Ok(Built {
        spec: spec.clone(),
        group,
        filtration,
        presentation,
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_round_trip() {
        for text in [
            "nottingham:q=4,m=3",
            "fesenko:p=3,q=3,n=7",
            "tree:p=2,d=3",
            "sl2zp:p=3,k=2",
            "sl2lambda:p=3,k=3",
            "presentation:<x | x^9>",
        ] {
            assert_eq!(FamilySpec::parse(text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn bad_specs() {
        for text in [
            "tree",
            "tree:p=2",
            "tree:p=2,d=x",
            "tree:p=2,d=2,e=1",
            "cube:p=2",
            "tree:p=2,p=3,d=1",
        ] {
            assert!(
                matches!(FamilySpec::parse(text), Err(CliError::Usage(_))),
                "{text}"
            );
        }
    }
}
