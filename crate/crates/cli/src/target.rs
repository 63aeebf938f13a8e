//! Target weight selectors.
//!
//! ```text
//! psi | lambda | <t>*psi | <t>*lambda
//! section:<d>:[m_1,...,m_n]=<re>[,<im>];...
//! ```
//!
//! `<t>*` multiplies `H` by `t > 0`. A section selector lists the
//! coefficients of `Q ∈ Γ(dL)`; its weight is `(1/d) log|Q|`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use toric_core::{LatticeVector, LogWeight, PolySection, Sample, SectionPolytope, ToricWeights};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Psi { scale: f64 },
    Lambda { scale: f64 },
    Section {
        degree: u32,
        terms: Vec<(Vec<i64>, Complex<f64>)>,
    },
}

fn bad(selector: &str, why: &str) -> CliError {
    CliError::Schema {
        path: "target".into(),
        line: 0,
        column: 0,
        message: format!("{why} in selector {selector:?}"),
    }
}

impl Target {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("section:") {
            let (deg, body) = rest.split_once(':').ok_or_else(|| bad(s, "missing degree"))?;
            let degree: u32 = deg.trim().parse().map_err(|_| bad(s, "bad degree"))?;
            let mut terms = Vec::new();
            for term in body.split(';').filter(|t| !t.trim().is_empty()) {
                let (m, c) = term.split_once('=').ok_or_else(|| bad(s, "term without '='"))?;
                let m = m.trim();
                let inner = m
                    .strip_prefix('[')
                    .and_then(|x| x.strip_suffix(']'))
                    .ok_or_else(|| bad(s, "exponent must be bracketed"))?;
                let exponent = inner
                    .split(',')
                    .map(|x| x.trim().parse::<i64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad(s, "bad exponent"))?;
                let parts = c
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad(s, "bad coefficient"))?;
                let coeff = match parts.as_slice() {
                    [re] => Complex::new(*re, 0.0),
                    [re, im] => Complex::new(*re, *im),
                    _ => return Err(bad(s, "coefficient needs one or two numbers")),
                };
                terms.push((exponent, coeff));
            }
            if terms.is_empty() {
                return Err(bad(s, "no terms"));
            }
            return Ok(Target::Section { degree, terms });
        }
        let (scale, base) = match s.split_once('*') {
            Some((t, b)) => (t.trim().parse::<f64>().map_err(|_| bad(s, "bad scale"))?, b.trim()),
            None => (1.0, s),
        };
        if scale.is_nan() || scale <= 0.0 || !scale.is_finite() {
            return Err(bad(s, "scale must be positive"));
        }
        match base {
            "psi" => Ok(Target::Psi { scale }),
            "lambda" => Ok(Target::Lambda { scale }),
            _ => Err(bad(s, "unknown target")),
        }
    }

    /// `log H` (or `u`) as an evaluator.
    pub fn weight<'a>(
        &self,
        weights: &'a ToricWeights,
        p: &SectionPolytope,
    ) -> Result<Box<dyn LogWeight<f64> + 'a>, CliError> {
        Ok(match self {
            Target::Psi { scale } => {
                let shift = scale.ln();
                Box::new(move |s: &Sample| weights.psi(&s.log) + shift)
            }
            Target::Lambda { scale } => {
                let shift = scale.ln();
                Box::new(move |s: &Sample| weights.lambda(&s.log) + shift)
            }
            Target::Section { degree, terms } => {
                let terms = terms
                    .iter()
                    .map(|(m, c)| (LatticeVector::new(m.iter().map(|&x| BigInt::from(x)).collect()), *c))
                    .collect();
                let q = PolySection::new(p, *degree, terms).map_err(|e| CliError::Analysis {
                    context: "target section",
                    message: e.to_string(),
                })?;
                Box::new(move |s: &Sample| q.log_weight(s))
            }
        })
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scaled = |f: &mut fmt::Formatter<'_>, scale: f64, name: &str| {
            if scale == 1.0 {
                write!(f, "{name}")
            } else {
                write!(f, "{scale}*{name}")
            }
        };
        match self {
            Target::Psi { scale } => scaled(f, *scale, "psi"),
            Target::Lambda { scale } => scaled(f, *scale, "lambda"),
            Target::Section { degree, terms } => {
                write!(f, "section:{degree}:")?;
                for (k, (m, c)) in terms.iter().enumerate() {
                    if k > 0 {
                        write!(f, ";")?;
                    }
                    let m: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                    write!(f, "[{}]={}", m.join(","), c.re)?;
                    if c.im != 0.0 {
                        write!(f, ",{}", c.im)?;
                    }
                }
                Ok(())
            }
        }
    }
}
