//! Run configuration: defaults, `key = value` files, overrides and the
//! canonical digest.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_traits::One;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::animal_enum::{check_probability, Mode};
use crate::error::{Error, Result};
use crate::group_core::GroupDescriptor;
use crate::scalar::{parse_rational, render_rational, Rational};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Rational,
    Double,
}

impl FromStr for Arithmetic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "rational" | "exact" => Ok(Arithmetic::Rational),
            "double" | "f64" => Ok(Arithmetic::Double),
            other => Err(Error::Config(format!("unknown arithmetic `{other}` (expected rational or double)"))),
        }
    }
}

impl fmt::Display for Arithmetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arithmetic::Rational => "rational",
            Arithmetic::Double => "double",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub group: GroupDescriptor,
    /// `|H|`; the lamp group is `Z_|H|`.
    pub lamp: Option<u32>,
    /// Explicit percolation parameter, for runs without a lamp group.
    pub p: Option<Rational>,
    pub mode: Mode,
    /// Largest moment index `N`.
    pub n_max: usize,
    pub max_animal: usize,
    pub mc_samples: u64,
    pub seed: u64,
    pub arith: Arithmetic,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: GroupDescriptor::Line,
            lamp: None,
            p: None,
            mode: Mode::Site,
            n_max: 10,
            max_animal: 8,
            mc_samples: 10_000,
            seed: 1,
            arith: Arithmetic::Rational,
            out: PathBuf::from("out"),
        }
    }
}

/// Lamp group order used when neither `lamp` nor `p` is given.
pub const DEFAULT_LAMP: u32 = 2;

impl RunConfig {
    /// Sets one field from its textual form. Keys accept `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim().trim_matches('"');
        let bad = |what: &str| Error::Config(format!("invalid {what} `{value}`"));
        match key.trim().replace('_', "-").as_str() {
            "group" => self.group = value.parse()?,
            "lamp" => {
                let q: u32 = value.parse().map_err(|_| bad("lamp order"))?;
                if q < 2 {
                    return Err(bad("lamp order"));
                }
                self.lamp = Some(q);
            }
            "p" => {
                let p = parse_rational(value).ok_or_else(|| bad("probability"))?;
                check_probability(&p)?;
                self.p = Some(p);
            }
            "mode" => self.mode = value.parse()?,
            "N" | "n" => self.n_max = value.parse().map_err(|_| bad("N"))?,
            "max-animal" => self.max_animal = value.parse().map_err(|_| bad("max animal size"))?,
            "mc-samples" => self.mc_samples = value.parse().map_err(|_| bad("sample count"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "arith" => self.arith = value.parse()?,
            "out" => self.out = PathBuf::from(value),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a `key = value` file: one pair per line, `#` starts a
    /// comment, values may be double-quoted.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    /// `|H|`, inferred from `p = 1/|H|` when only `p` is given.
    pub fn lamp_order(&self) -> Result<u32> {
        match (self.lamp, &self.p) {
            (Some(q), Some(p)) if *p != Rational::new(1.into(), q.into()) => Err(Error::Config(format!(
                "p = {} differs from 1/|H| = 1/{q}",
                render_rational(p)
            ))),
            (Some(q), _) => Ok(q),
            (None, Some(p)) => {
                let inv = p.recip();
                if inv.is_integer() && inv > Rational::one() {
                    inv.to_integer().try_into().map_err(|_| Error::Config("lamp order too large".into()))
                } else {
                    Err(Error::Config(format!(
                        "p = {} is not of the form 1/|H|; the lamplighter identity needs a lamp group",
                        render_rational(p)
                    )))
                }
            }
            (None, None) => Ok(DEFAULT_LAMP),
        }
    }

    /// Percolation parameter: `p` if given, else `1/|H|`.
    pub fn probability(&self) -> Rational {
        match (&self.p, self.lamp) {
            (Some(p), _) => p.clone(),
            (None, Some(q)) => Rational::new(1.into(), q.into()),
            (None, None) => Rational::new(1.into(), DEFAULT_LAMP.into()),
        }
    }

    /// Canonical text form of every field that affects results (the output
    /// directory does not).
    pub fn canonical(&self) -> String {
        let p = self.probability();
        let lamp = self.lamp.map(|q| q.to_string()).unwrap_or_else(|| "-".into());
        format!(
            "group={}\nlamp={lamp}\np={}\nmode={}\nN={}\nmax-animal={}\nmc-samples={}\nseed={}\narith={}\n",
            self.group,
            render_rational(&p),
            self.mode,
            self.n_max,
            self.max_animal,
            self.mc_samples,
            self.seed,
            self.arith,
        )
    }

    /// SHA-256 of [`RunConfig::canonical`], in hex.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn stamp(&self) -> ConfigStamp {
        let p = self.probability();
        ConfigStamp {
            digest: self.digest(),
            group: self.group.to_string(),
            lamp: self.lamp,
            p: render_rational(&p),
            mode: self.mode,
            n_max: self.n_max,
            max_animal: self.max_animal,
            mc_samples: self.mc_samples,
            seed: self.seed,
            arith: self.arith,
        }
    }
}

/// The configuration as recorded in every output file.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfigStamp {
    pub digest: String,
    pub group: String,
    pub lamp: Option<u32>,
    pub p: String,
    pub mode: Mode,
    #[serde(rename = "N")]
    pub n_max: usize,
    pub max_animal: usize,
    pub mc_samples: u64,
    pub seed: u64,
    pub arith: Arithmetic,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn file_and_overrides() {
        let mut c = RunConfig::default();
        c.apply_file("# run\ngroup = \"Z2-square\"\nlamp=3\nmode = bond # edges\nN = 6\nmax_animal = 4\n")
            .unwrap();
        assert_eq!(c.group, GroupDescriptor::SquareLattice);
        assert_eq!(c.lamp_order().unwrap(), 3);
        assert_eq!(c.probability(), ratio(1, 3));
        assert_eq!(c.mode, Mode::Bond);
        assert_eq!((c.n_max, c.max_animal), (6, 4));
        c.set("N", "8").unwrap();
        assert_eq!(c.n_max, 8);
        assert!(c.apply_file("nonsense").is_err());
        assert!(c.set("colour", "red").is_err());
        assert!(c.set("p", "1").is_err());
        assert!(c.set("lamp", "1").is_err());
    }

    #[test]
    fn lamp_and_p_consistency() {
        let mut c = RunConfig::default();
        c.set("p", "0.25").unwrap();
        assert_eq!(c.lamp_order().unwrap(), 4);
        c.set("lamp", "2").unwrap();
        assert!(c.lamp_order().is_err());
        let mut d = RunConfig::default();
        d.set("p", "0.3").unwrap();
        assert!(d.lamp_order().is_err());
        assert_eq!(d.probability(), ratio(3, 10));
        assert_eq!(RunConfig::default().lamp_order().unwrap(), DEFAULT_LAMP);
    }

    #[test]
    fn digest_ignores_output_directory() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.out = PathBuf::from("elsewhere");
        assert_eq!(a.digest(), b.digest());
        b.seed = 2;
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
    }
}
