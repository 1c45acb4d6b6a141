use serde::{Deserialize, Serialize};

use super::{Chang, FiniteMv, MvError};

/// JSON description of an algebra, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AlgebraSpec {
    Lukasiewicz {
        n: usize,
    },
    Product {
        factors: Vec<AlgebraSpec>,
    },
    Tables {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zero: Option<usize>,
        neg: Vec<usize>,
        oplus: Vec<Vec<usize>>,
    },
    Chang,
}

/// A built algebra: finite tables or the symbolic Chang algebra.
#[derive(Debug, Clone)]
pub enum Algebra {
    Finite(FiniteMv),
    Chang(Chang),
}

impl Algebra {
    pub fn label(&self) -> String {
        match self {
            Algebra::Finite(a) => a.label().to_string(),
            Algebra::Chang(_) => "Chang".to_string(),
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteMv> {
        match self {
            Algebra::Finite(a) => Some(a),
            Algebra::Chang(_) => None,
        }
    }
}

impl AlgebraSpec {
    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn build(&self, cap: usize) -> Result<Algebra, MvError> {
        match self {
            AlgebraSpec::Chang => Ok(Algebra::Chang(Chang)),
            other => other.build_finite(cap).map(Algebra::Finite),
        }
    }

    pub fn build_finite(&self, cap: usize) -> Result<FiniteMv, MvError> {
        let alg = match self {
            AlgebraSpec::Lukasiewicz { n } => FiniteMv::lukasiewicz(*n)?,
            AlgebraSpec::Product { factors } => {
                let built = factors
                    .iter()
                    .map(|f| f.build_finite(cap))
                    .collect::<Result<Vec<_>, _>>()?;
                FiniteMv::product(&built, cap)?
            }
            AlgebraSpec::Tables { zero, neg, oplus } => FiniteMv::from_tables(*zero, neg, oplus)?,
            AlgebraSpec::Chang => return Err(MvError::NotFinite),
        };
        if alg.size() > cap {
            return Err(MvError::CapExceeded {
                size: alg.size(),
                cap,
            });
        }
        Ok(alg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mv::DEFAULT_CARRIER_CAP;

    #[test]
    fn parse_and_build() {
        let spec = AlgebraSpec::parse(r#"{"kind":"lukasiewicz","n":4}"#).unwrap();
        assert_eq!(spec.build(DEFAULT_CARRIER_CAP).unwrap().as_finite().unwrap().size(), 5);
        let spec = AlgebraSpec::parse(
            r#"{"kind":"product","factors":[{"kind":"lukasiewicz","n":2},{"kind":"lukasiewicz","n":3}]}"#,
        )
        .unwrap();
        let a = spec.build_finite(DEFAULT_CARRIER_CAP).unwrap();
        assert_eq!((a.size(), a.label()), (12, "Ł2×Ł3"));
        assert!(matches!(spec.build(8), Err(MvError::CapExceeded { .. })));
        let spec = AlgebraSpec::parse(r#"{"kind":"tables","neg":[1,0],"oplus":[[0,1],[1,1]]}"#).unwrap();
        assert_eq!(spec.build_finite(16).unwrap().size(), 2);
        assert!(matches!(AlgebraSpec::parse(r#"{"kind":"chang"}"#).unwrap().build(16), Ok(Algebra::Chang(_))));
        assert!(AlgebraSpec::parse(r#"{"kind":"chang""#).is_err());
        let nested = AlgebraSpec::Product {
            factors: vec![AlgebraSpec::Chang],
        };
        assert_eq!(nested.build(16).unwrap_err(), MvError::NotFinite);
    }
}
