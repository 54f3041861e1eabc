//! Golden files: values derived once by the independent oracle scripts under
//! `scripts/` and pinned for regression checks. The directory defaults to
//! `goldens/` relative to the working directory and can be overridden with
//! the `CURVSYM_GOLDENS` environment variable.

use crate::error::ParseError;
use crate::io::{tensor_from_json, TensorRecord};
use crate::scalar::Rational;
use crate::tensor::DenseTensor;
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const GOLDENS_ENV: &str = "CURVSYM_GOLDENS";

pub fn goldens_dir() -> PathBuf {
    std::env::var_os(GOLDENS_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("goldens"))
}

fn read_json(path: &Path) -> Result<Value, std::io::Error> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, ParseError::from(e)))
}

fn bad(msg: impl Into<String>) -> std::io::Error {
    std::io::Error::new(std::io::ErrorKind::InvalidData, ParseError::BadGolden(msg.into()))
}

/// `symclass_dims.json`: pinned dimension of the symmetry class per n, as
/// computed by both oracle constructions.
#[derive(Debug, Clone, PartialEq)]
pub struct SymclassDims {
    pub constraint_nullspace: BTreeMap<usize, usize>,
    pub projector_image: BTreeMap<usize, usize>,
}

impl SymclassDims {
    pub fn agreed_dim(&self, n: usize) -> Option<usize> {
        match (
            self.constraint_nullspace.get(&n),
            self.projector_image.get(&n),
        ) {
            (Some(&a), Some(&b)) if a == b => Some(a),
            _ => None,
        }
    }
}

fn parse_dim_map(v: &Value, key: &str) -> Result<BTreeMap<usize, usize>, std::io::Error> {
    let obj = v
        .get(key)
        .and_then(Value::as_object)
        .ok_or_else(|| bad(format!("missing object field '{key}'")))?;
    let mut out = BTreeMap::new();
    for (k, val) in obj {
        let n: usize = k.parse().map_err(|_| bad(format!("bad dimension key '{k}'")))?;
        let d = val
            .as_u64()
            .ok_or_else(|| bad(format!("dimension for n={k} must be an integer")))?;
        out.insert(n, d as usize);
    }
    Ok(out)
}

pub fn load_symclass_dims(dir: &Path) -> Result<SymclassDims, std::io::Error> {
    let v = read_json(&dir.join("symclass_dims.json"))?;
    Ok(SymclassDims {
        constraint_nullspace: parse_dim_map(&v, "constraint_nullspace")?,
        projector_image: parse_dim_map(&v, "projector_image")?,
    })
}

/// `polarization_constant.json`: the exact constant relating the trilinear
/// substitution coefficient to the six-term sum, per dimension.
pub fn load_polarization_constant(
    dir: &Path,
) -> Result<BTreeMap<usize, Rational>, std::io::Error> {
    let v = read_json(&dir.join("polarization_constant.json"))?;
    let obj = v
        .get("constant")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("missing object field 'constant'"))?;
    let mut out = BTreeMap::new();
    for (k, val) in obj {
        let n: usize = k.parse().map_err(|_| bad(format!("bad dimension key '{k}'")))?;
        let s = val
            .as_str()
            .ok_or_else(|| bad("constants must be strings"))?;
        out.insert(
            n,
            Rational::parse(s).map_err(|e| bad(format!("bad constant: {e}")))?,
        );
    }
    Ok(out)
}

/// One nonvacuity witness: vectors for which the six-term sum is nonzero on
/// at least one class basis element.
#[derive(Debug, Clone)]
pub struct SixTermWitness {
    pub vectors: [Vec<Rational>; 5], // u, v, x, y, z
}

pub fn load_six_term_witnesses(dir: &Path) -> Result<BTreeMap<usize, SixTermWitness>, std::io::Error> {
    let v = read_json(&dir.join("polarization_witness.json"))?;
    let obj = v
        .get("witnesses")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("missing object field 'witnesses'"))?;
    let mut out = BTreeMap::new();
    for (k, val) in obj {
        let n: usize = k.parse().map_err(|_| bad(format!("bad dimension key '{k}'")))?;
        let parse_vec = |name: &str| -> Result<Vec<Rational>, std::io::Error> {
            val.get(name)
                .and_then(Value::as_array)
                .ok_or_else(|| bad(format!("missing vector '{name}' for n={n}")))?
                .iter()
                .map(|e| {
                    e.as_str()
                        .ok_or_else(|| bad("vector entries must be strings"))
                        .and_then(|s| {
                            Rational::parse(s).map_err(|e| bad(format!("bad entry: {e}")))
                        })
                })
                .collect()
        };
        out.insert(
            n,
            SixTermWitness {
                vectors: [
                    parse_vec("u")?,
                    parse_vec("v")?,
                    parse_vec("x")?,
                    parse_vec("y")?,
                    parse_vec("z")?,
                ],
            },
        );
    }
    Ok(out)
}

/// The exact covariant-derivative tensor of the perturbed flat metric at its
/// documented probe point, with the thresholds derived from it.
#[derive(Debug, Clone)]
pub struct PerturbedFlatGolden {
    pub eps: Rational,
    pub point: Vec<f64>,
    pub nabla_r: DenseTensor<Rational>,
    /// Exact inf-norm of the tensor.
    pub nabla_r_inf_norm: Rational,
    /// Exact inf-norm of its six-term image.
    pub six_term_image_inf_norm: Rational,
    /// Acceptance thresholds are this fraction of the exact norms.
    pub threshold_factor: Rational,
}

impl PerturbedFlatGolden {
    /// Lower bound the numerical rank-5 norm must exceed.
    pub fn tau(&self) -> f64 {
        (&self.threshold_factor * &self.nabla_r_inf_norm).to_f64()
    }

    /// Lower bound the numerical six-term image norm must exceed.
    pub fn tau_prime(&self) -> f64 {
        (&self.threshold_factor * &self.six_term_image_inf_norm).to_f64()
    }
}

pub fn load_perturbed_flat(dir: &Path) -> Result<PerturbedFlatGolden, std::io::Error> {
    let tensor_value = read_json(&dir.join("perturbed_flat_nabla_r.json"))?;
    let record = tensor_from_json(&tensor_value)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
    let TensorRecord::Rational(nabla_r) = record else {
        return Err(bad("perturbed-flat tensor must be rational kind"));
    };
    let v = read_json(&dir.join("curvature_thresholds.json"))?;
    let rational_field = |key: &str| -> Result<Rational, std::io::Error> {
        v.get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| bad(format!("missing string field '{key}'")))
            .and_then(|s| Rational::parse(s).map_err(|e| bad(format!("bad '{key}': {e}"))))
    };
    let point: Vec<f64> = v
        .get("point")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing array field 'point'"))?
        .iter()
        .map(|e| e.as_f64().ok_or_else(|| bad("point entries must be numbers")))
        .collect::<Result<_, _>>()?;
    Ok(PerturbedFlatGolden {
        eps: rational_field("eps")?,
        point,
        nabla_r,
        nabla_r_inf_norm: rational_field("nabla_r_inf_norm")?,
        six_term_image_inf_norm: rational_field("six_term_image_inf_norm")?,
        threshold_factor: rational_field("threshold_factor")?,
    })
}
