use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Names a function space together with its parameters.
///
/// `HomSobolev { s, q }` is normed by `‖(−Δ)^{s/2} f‖_{L^q}` (weak `L^q` when
/// `weak` is set). Besov tags use the dyadic blocks of [`super::littlewood_paley`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SpaceTag {
    Lq {
        #[serde(with = "crate::exponent")]
        q: f64,
    },
    WeakLq {
        #[serde(with = "crate::exponent")]
        q: f64,
    },
    Besov {
        s: f64,
        #[serde(with = "crate::exponent")]
        q: f64,
        #[serde(with = "crate::exponent")]
        p: f64,
    },
    HomBesov {
        s: f64,
        #[serde(with = "crate::exponent")]
        q: f64,
        #[serde(with = "crate::exponent")]
        p: f64,
    },
    WeakBesov {
        s: f64,
        #[serde(with = "crate::exponent")]
        q: f64,
        #[serde(with = "crate::exponent")]
        p: f64,
    },
    Hoelder {
        eps: f64,
    },
    Morrey {
        #[serde(with = "crate::exponent")]
        q: f64,
        lambda: f64,
    },
    HomSobolev {
        s: f64,
        #[serde(with = "crate::exponent")]
        q: f64,
        #[serde(default)]
        weak: bool,
    },
}

fn check_q(q: f64) -> Result<()> {
    if q > 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("integrability q must lie in (1, inf], got {q}")))
    }
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("summation index p must lie in [1, inf], got {p}")))
    }
}

impl SpaceTag {
    /// Checks the parameter ranges for a space over `T^n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            SpaceTag::Lq { q } | SpaceTag::WeakLq { q } => check_q(q),
            SpaceTag::Besov { q, p, .. }
            | SpaceTag::HomBesov { q, p, .. }
            | SpaceTag::WeakBesov { q, p, .. } => {
                check_q(q)?;
                check_p(p)
            }
            SpaceTag::Hoelder { eps } => {
                if eps > 0.0 && eps < 1.0 {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("Hölder exponent must lie in (0, 1), got {eps}")))
                }
            }
            SpaceTag::Morrey { q, lambda } => {
                check_q(q)?;
                let top = n as f64 / q;
                if lambda > 0.0 && lambda <= top + 1e-15 {
                    Ok(())
                } else {
                    Err(Error::Domain(format!(
                        "Morrey exponent must lie in (0, {top}], got {lambda}"
                    )))
                }
            }
            SpaceTag::HomSobolev { q, .. } => check_q(q),
        }
    }

    /// Short human-readable name, e.g. `L^6` or `M^{2,0.5}`.
    pub fn label(&self) -> String {
        fn e(x: f64) -> String {
            if x.is_infinite() {
                "inf".into()
            } else {
                format!("{x}")
            }
        }
        match *self {
            SpaceTag::Lq { q } => format!("L^{}", e(q)),
            SpaceTag::WeakLq { q } => format!("L^{{{},inf}}", e(q)),
            SpaceTag::Besov { s, q, p } => format!("B^{s}_{{{},{}}}", e(q), e(p)),
            SpaceTag::HomBesov { s, q, p } => format!("hom B^{s}_{{{},{}}}", e(q), e(p)),
            SpaceTag::WeakBesov { s, q, p } => format!("hom B^{s}_{{({},inf),{}}}", e(q), e(p)),
            SpaceTag::Hoelder { eps } => format!("C^{eps}"),
            SpaceTag::Morrey { q, lambda } => format!("M^{{{},{lambda}}}", e(q)),
            SpaceTag::HomSobolev { s, q, weak } => {
                if weak {
                    format!("hom H^{s}_{{({},inf)}}", e(q))
                } else {
                    format!("hom H^{s}_{}", e(q))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert!(SpaceTag::Lq { q: 1.0 }.validate(2).is_err());
        assert!(SpaceTag::Lq { q: f64::INFINITY }.validate(2).is_ok());
        assert!(SpaceTag::Morrey { q: 2.0, lambda: 1.0 }.validate(2).is_ok());
        assert!(SpaceTag::Morrey { q: 2.0, lambda: 1.5 }.validate(2).is_err());
        assert!(SpaceTag::Morrey { q: 2.0, lambda: 0.0 }.validate(2).is_err());
        assert!(SpaceTag::Besov { s: 0.0, q: 2.0, p: 0.5 }.validate(2).is_err());
    }

    #[test]
    fn json_shape() {
        let t = SpaceTag::Besov { s: -0.5, q: 4.0, p: f64::INFINITY };
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"kind":"Besov","s":-0.5,"q":4.0,"p":"inf"}"#);
        assert_eq!(serde_json::from_str::<SpaceTag>(&s).unwrap(), t);
    }
}
