//! Textual state specifications, e.g. `ghz:d=2,n=3`, `dicke:n=4,k=2`,
//! `fig1:alpha=0.5,beta=0.2,d=4`, `thermal-h1:n=4,h=0.5,kT=0.1`,
//! `maxmixed:dims=2,2,2`, `random-pure:dims=2,2,2,seed=7`, `file:rho.csv`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::states::{self, random, DensityMatrix, PureState};
use crate::{io, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Ghz { d: usize, n: usize },
    W { d: usize },
    Dicke { n: usize, k: usize },
    Fig1 { alpha: f64, beta: f64, d: usize },
    Fig3 { alpha: f64, beta: f64 },
    ThermalH1 { n: usize, h: f64, kt: f64 },
    ThermalH2 { n: usize, h: f64, kt: f64 },
    MaxMixed { dims: Vec<usize> },
    RandomPure { dims: Vec<usize>, seed: Option<u64> },
    RandomMixed { dims: Vec<usize>, seed: Option<u64> },
    File(PathBuf),
}

/// A constructed state; `pure` is set for the pure-state families.
#[derive(Debug, Clone)]
pub struct BuiltState {
    pub density: DensityMatrix,
    pub pure: Option<PureState>,
}

impl From<PureState> for BuiltState {
    fn from(psi: PureState) -> Self {
        Self {
            density: psi.to_density(),
            pure: Some(psi),
        }
    }
}

impl From<DensityMatrix> for BuiltState {
    fn from(density: DensityMatrix) -> Self {
        Self { density, pure: None }
    }
}

impl StateSpec {
    /// Construct the state. `seed` is used by random families that do not
    /// carry their own.
    pub fn build(&self, seed: u64) -> Result<BuiltState> {
        Ok(match self {
            StateSpec::Ghz { d, n } => states::ghz_state(*d, *n)?.into(),
            StateSpec::W { d } => states::w_state(*d)?.into(),
            StateSpec::Dicke { n, k } => states::dicke_state(*n, *k)?.into(),
            StateSpec::Fig1 { alpha, beta, d } => states::figure1_family(*alpha, *beta, *d)?.into(),
            StateSpec::Fig3 { alpha, beta } => states::figure3_family(*alpha, *beta)?.into(),
            StateSpec::ThermalH1 { n, h, kt } => states::thermal_state(&states::hamiltonian_h1(*n, *h)?, *kt)?.into(),
            StateSpec::ThermalH2 { n, h, kt } => states::thermal_state(&states::hamiltonian_h2(*n, *h)?, *kt)?.into(),
            StateSpec::MaxMixed { dims } => states::maximally_mixed(dims)?.into(),
            StateSpec::RandomPure { dims, seed: s } => random::random_pure_state(dims, s.unwrap_or(seed))?.into(),
            StateSpec::RandomMixed { dims, seed: s } => random::random_mixed_state(dims, s.unwrap_or(seed))?.into(),
            StateSpec::File(path) => io::read_density_csv(path)?.into(),
        })
    }
}

/// `key=value` pairs; a bare token continues the previous value, so
/// `dims=2,2,2` survives the comma split.
fn parse_params(body: &str) -> Result<BTreeMap<String, String>> {
    let mut params: BTreeMap<String, String> = BTreeMap::new();
    let mut last: Option<String> = None;
    for token in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match token.split_once('=') {
            Some((k, v)) => {
                let key = k.trim().to_ascii_lowercase();
                if params.insert(key.clone(), v.trim().to_string()).is_some() {
                    return Err(Error::Parse(format!("parameter '{key}' given twice")));
                }
                last = Some(key);
            }
            None => match &last {
                Some(key) => {
                    let entry = params.get_mut(key).expect("last key was inserted");
                    entry.push(',');
                    entry.push_str(token);
                }
                None => return Err(Error::Parse(format!("expected key=value, found '{token}'"))),
            },
        }
    }
    Ok(params)
}

struct Params {
    family: String,
    map: BTreeMap<String, String>,
}

impl Params {
    fn take<T: FromStr>(&mut self, key: &str, default: Option<T>) -> Result<T> {
        match self.map.remove(key) {
            Some(v) => v
                .parse()
                .map_err(|_| Error::Parse(format!("{}: cannot parse {key}='{v}'", self.family))),
            None => default.ok_or_else(|| Error::Parse(format!("{}: missing parameter '{key}'", self.family))),
        }
    }

    fn take_dims(&mut self) -> Result<Vec<usize>> {
        let raw = self
            .map
            .remove("dims")
            .ok_or_else(|| Error::Parse(format!("{}: missing parameter 'dims'", self.family)))?;
        parse_usize_list(&raw)
    }

    fn take_opt_u64(&mut self, key: &str) -> Result<Option<u64>> {
        self.map
            .remove(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::Parse(format!("{}: cannot parse {key}='{v}'", self.family)))
            })
            .transpose()
    }

    fn finish(self) -> Result<()> {
        if let Some(k) = self.map.keys().next() {
            return Err(Error::Parse(format!("{}: unknown parameter '{k}'", self.family)));
        }
        Ok(())
    }
}

pub fn parse_usize_list(raw: &str) -> Result<Vec<usize>> {
    raw.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad integer '{x}' in '{raw}'")))
        })
        .collect()
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, body) = match s.split_once(':') {
            Some((f, b)) => (f.trim().to_ascii_lowercase(), b),
            None => (s.trim().to_ascii_lowercase(), ""),
        };
        if family == "file" {
            if body.is_empty() {
                return Err(Error::Parse("file: missing path".into()));
            }
            return Ok(StateSpec::File(PathBuf::from(body)));
        }
        let mut p = Params {
            map: parse_params(body)?,
            family: family.clone(),
        };
        let spec = match family.as_str() {
            "ghz" => StateSpec::Ghz {
                d: p.take("d", Some(2))?,
                n: p.take("n", Some(3))?,
            },
            "w" => StateSpec::W {
                d: p.take("d", Some(2))?,
            },
            "dicke" => StateSpec::Dicke {
                n: p.take("n", None)?,
                k: p.take("k", None)?,
            },
            "fig1" => StateSpec::Fig1 {
                alpha: p.take("alpha", None)?,
                beta: p.take("beta", None)?,
                d: p.take("d", Some(4))?,
            },
            "fig3" => StateSpec::Fig3 {
                alpha: p.take("alpha", None)?,
                beta: p.take("beta", None)?,
            },
            "thermal-h1" | "thermal-h2" => {
                let n = p.take("n", Some(4))?;
                let h = p.take("h", Some(0.0))?;
                let kt = p.take("kt", None)?;
                if family == "thermal-h1" {
                    StateSpec::ThermalH1 { n, h, kt }
                } else {
                    StateSpec::ThermalH2 { n, h, kt }
                }
            }
            "maxmixed" => StateSpec::MaxMixed { dims: p.take_dims()? },
            "random-pure" => StateSpec::RandomPure {
                dims: p.take_dims()?,
                seed: p.take_opt_u64("seed")?,
            },
            "random-mixed" => StateSpec::RandomMixed {
                dims: p.take_dims()?,
                seed: p.take_opt_u64("seed")?,
            },
            other => return Err(Error::Parse(format!("unknown state family '{other}'"))),
        };
        p.finish()?;
        Ok(spec)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims = |d: &[usize]| d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            StateSpec::Ghz { d, n } => write!(f, "ghz:d={d},n={n}"),
            StateSpec::W { d } => write!(f, "w:d={d}"),
            StateSpec::Dicke { n, k } => write!(f, "dicke:n={n},k={k}"),
            StateSpec::Fig1 { alpha, beta, d } => write!(f, "fig1:alpha={alpha},beta={beta},d={d}"),
            StateSpec::Fig3 { alpha, beta } => write!(f, "fig3:alpha={alpha},beta={beta}"),
            StateSpec::ThermalH1 { n, h, kt } => write!(f, "thermal-h1:n={n},h={h},kT={kt}"),
            StateSpec::ThermalH2 { n, h, kt } => write!(f, "thermal-h2:n={n},h={h},kT={kt}"),
            StateSpec::MaxMixed { dims: d } => write!(f, "maxmixed:dims={}", dims(d)),
            StateSpec::RandomPure { dims: d, seed } => match seed {
                Some(s) => write!(f, "random-pure:dims={},seed={s}", dims(d)),
                None => write!(f, "random-pure:dims={}", dims(d)),
            },
            StateSpec::RandomMixed { dims: d, seed } => match seed {
                Some(s) => write!(f, "random-mixed:dims={},seed={s}", dims(d)),
                None => write!(f, "random-mixed:dims={}", dims(d)),
            },
            StateSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_families() {
        assert_eq!(
            "ghz:d=2,n=3".parse::<StateSpec>().unwrap(),
            StateSpec::Ghz { d: 2, n: 3 }
        );
        assert_eq!("ghz".parse::<StateSpec>().unwrap(), StateSpec::Ghz { d: 2, n: 3 });
        assert_eq!(
            "dicke:n=4,k=2".parse::<StateSpec>().unwrap(),
            StateSpec::Dicke { n: 4, k: 2 }
        );
        assert_eq!(
            "maxmixed:dims=2,2,2".parse::<StateSpec>().unwrap(),
            StateSpec::MaxMixed { dims: vec![2, 2, 2] }
        );
        assert_eq!(
            "random-pure:dims=2,3,seed=5".parse::<StateSpec>().unwrap(),
            StateSpec::RandomPure {
                dims: vec![2, 3],
                seed: Some(5)
            }
        );
        assert_eq!(
            "thermal-h1:n=4,h=0.5,kT=0.1".parse::<StateSpec>().unwrap(),
            StateSpec::ThermalH1 { n: 4, h: 0.5, kt: 0.1 }
        );
        assert_eq!(
            "file:/tmp/a,b.csv".parse::<StateSpec>().unwrap(),
            StateSpec::File("/tmp/a,b.csv".into())
        );
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "nope:d=2",
            "ghz:d=x",
            "ghz:q=2",
            "dicke:n=4",
            "ghz:d=2,d=3",
            "ghz:2",
            "file:",
        ] {
            assert!(matches!(bad.parse::<StateSpec>(), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "ghz:d=3,n=4",
            "w:d=5",
            "dicke:n=4,k=1",
            "fig1:alpha=0.25,beta=0.5,d=4",
            "fig3:alpha=0.1,beta=0.2",
            "thermal-h2:n=4,h=1,kT=0.5",
            "maxmixed:dims=2,3",
            "random-mixed:dims=2,2,seed=9",
        ] {
            let spec: StateSpec = s.parse().unwrap();
            assert_eq!(spec.to_string().parse::<StateSpec>().unwrap(), spec);
        }
    }

    #[test]
    fn builds_pure_and_mixed() {
        let b = "ghz".parse::<StateSpec>().unwrap().build(0).unwrap();
        assert!(b.pure.is_some());
        let b = "fig3:alpha=0.2,beta=0.3"
            .parse::<StateSpec>()
            .unwrap()
            .build(0)
            .unwrap();
        assert!(b.pure.is_none());
        assert_eq!(b.density.dims(), &[2, 2, 2, 2]);
    }
}
