//! JSON file formats: polynomials, cones, subspace bases and faces.
//!
//! Exact values are written as `"p/q"` strings and floats as JSON numbers.
//! Readers accept either form in both modes; a JSON number read in exact mode
//! is converted exactly from its binary value.

use std::fs;
use std::path::{Path, PathBuf};

use hypercone_core::scalar::{format_rational, parse_rational};
use hypercone_core::{
    Certification, FaceDescriptor, HyperbolicityCone, Polynomial, Scalar, Subspace,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("cannot parse {0:?} as a number")]
    BadScalar(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] hypercone_core::Error),
}

pub type FormatResult<T> = Result<T, FormatError>;

/// A coefficient or coordinate: `"p/q"` (also integers and decimals) or a
/// JSON number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarValue {
    Text(String),
    Number(f64),
}

impl ScalarValue {
    pub fn from_scalar<S: Scalar>(value: &S) -> Self {
        match value.to_rational() {
            Some(r) if S::EXACT => ScalarValue::Text(format_rational(&r)),
            _ => ScalarValue::Number(value.to_f64()),
        }
    }

    pub fn to_scalar<S: Scalar>(&self) -> FormatResult<S> {
        match self {
            ScalarValue::Text(text) => parse_scalar(text),
            ScalarValue::Number(v) => {
                S::from_f64(*v).ok_or_else(|| FormatError::BadScalar(v.to_string()))
            }
        }
    }
}

pub fn parse_scalar<S: Scalar>(text: &str) -> FormatResult<S> {
    parse_rational(text)
        .map(|r| S::from_rational(&r))
        .ok_or_else(|| FormatError::BadScalar(text.to_string()))
}

pub fn scalars_to_values<S: Scalar>(values: &[S]) -> Vec<ScalarValue> {
    values.iter().map(ScalarValue::from_scalar).collect()
}

pub fn values_to_scalars<S: Scalar>(values: &[ScalarValue]) -> FormatResult<Vec<S>> {
    values.iter().map(ScalarValue::to_scalar).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeTag {
    Rational,
    Float,
}

impl ModeTag {
    pub fn of<S: Scalar>() -> Self {
        if S::EXACT {
            ModeTag::Rational
        } else {
            ModeTag::Float
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exp: Vec<u32>,
    pub coef: ScalarValue,
}

/// `{"vars", "degree", "mode", "terms": [{"exp", "coef"}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialFile {
    pub vars: usize,
    pub degree: u32,
    pub mode: ModeTag,
    pub terms: Vec<TermRecord>,
}

impl PolynomialFile {
    pub fn from_polynomial<S: Scalar>(p: &Polynomial<S>) -> Self {
        PolynomialFile {
            vars: p.num_vars(),
            degree: p.degree() as u32,
            mode: ModeTag::of::<S>(),
            terms: p
                .terms()
                .map(|(exp, coef)| TermRecord {
                    exp: exp.to_vec(),
                    coef: ScalarValue::from_scalar(coef),
                })
                .collect(),
        }
    }

    pub fn to_polynomial<S: Scalar>(&self) -> FormatResult<Polynomial<S>> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.exp.clone(), t.coef.to_scalar::<S>()?)))
            .collect::<FormatResult<Vec<_>>>()?;
        Ok(Polynomial::new(self.vars, self.degree, terms)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificationRecord {
    Unchecked,
    ValidatedExact,
    ValidatedProbabilistic { samples: usize, seed: u64 },
}

impl From<Certification> for CertificationRecord {
    fn from(c: Certification) -> Self {
        match c {
            Certification::Unchecked => CertificationRecord::Unchecked,
            Certification::ValidatedExact => CertificationRecord::ValidatedExact,
            Certification::ValidatedProbabilistic { samples, seed } => {
                CertificationRecord::ValidatedProbabilistic { samples, seed }
            }
        }
    }
}

/// A polynomial with its hyperbolic direction. `fixture` names the catalog
/// entry the cone came from, when there is one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeFile {
    pub polynomial: PolynomialFile,
    pub e: Vec<ScalarValue>,
    #[serde(default = "unchecked")]
    pub certification: CertificationRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
}

fn unchecked() -> CertificationRecord {
    CertificationRecord::Unchecked
}

impl ConeFile {
    pub fn from_cone<S: Scalar>(cone: &HyperbolicityCone<S>, fixture: Option<&str>) -> Self {
        ConeFile {
            polynomial: PolynomialFile::from_polynomial(cone.polynomial()),
            e: scalars_to_values(cone.direction()),
            certification: cone.certification().into(),
            fixture: fixture.map(str::to_string),
        }
    }
}

/// Either a bare polynomial file or a cone file.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum PolynomialSource {
    Cone(ConeFile),
    Polynomial(PolynomialFile),
}

/// `{"ambient_dim", "basis": [[...], ...]}`; a bare array of rows is also
/// accepted on input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisFile {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<ScalarValue>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum BasisSource {
    File(BasisFile),
    Rows(Vec<Vec<ScalarValue>>),
}

impl BasisFile {
    pub fn from_subspace<S: Scalar>(subspace: &Subspace<S>) -> Self {
        BasisFile {
            ambient_dim: subspace.ambient_dim(),
            basis: subspace
                .basis()
                .iter()
                .map(|v| scalars_to_values(v))
                .collect(),
        }
    }

    pub fn to_subspace<S: Scalar>(&self) -> FormatResult<Subspace<S>> {
        let rows = self
            .basis
            .iter()
            .map(|row| values_to_scalars(row))
            .collect::<FormatResult<Vec<_>>>()?;
        Ok(Subspace::new(self.ambient_dim, rows)?)
    }
}

/// A face anchored by a relative-interior point `z` and its span, with the
/// multiplicity `m` and the restricted polynomial `q = D_e^m p` in span
/// coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceFile {
    pub cone: ConeFile,
    pub z: Vec<ScalarValue>,
    pub span: BasisFile,
    pub m: usize,
    pub q: PolynomialFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl FaceFile {
    pub fn from_face<S: Scalar>(
        face: &FaceDescriptor<S>,
        fixture: Option<&str>,
        label: Option<&str>,
    ) -> Self {
        FaceFile {
            cone: ConeFile::from_cone(face.parent(), fixture),
            z: scalars_to_values(face.z()),
            span: BasisFile::from_subspace(face.span()),
            m: face.m(),
            q: PolynomialFile::from_polynomial(face.q()),
            label: label.map(str::to_string),
        }
    }
}

/// A fixture with its face catalog, as written by `fixture emit`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureFile {
    pub name: String,
    pub cone: ConeFile,
    pub faces: Vec<FaceFile>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> FormatResult<T> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| FormatError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON serialisation");
    text.push('\n');
    text
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> FormatResult<()> {
    fs::write(path, to_json_string(value)).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn looks_like_file(arg: &str) -> bool {
    arg.ends_with(".json") || Path::new(arg).is_file()
}

/// A vector given inline (`"1,2/3,-0.5"`) or as a JSON array in a file.
pub fn parse_vector<S: Scalar>(arg: &str) -> FormatResult<Vec<S>> {
    if looks_like_file(arg) {
        let values: Vec<ScalarValue> = read_json(Path::new(arg))?;
        return values_to_scalars(&values);
    }
    let arg = arg.trim();
    if arg.is_empty() {
        return Ok(Vec::new());
    }
    arg.split(',')
        .map(|item| parse_scalar(item.trim()))
        .collect()
}

/// Comma-separated floats, e.g. `0.1,1,10`.
pub fn parse_f64_list(arg: &str) -> FormatResult<Vec<f64>> {
    arg.split(',')
        .map(|item| {
            item.trim()
                .parse::<f64>()
                .map_err(|_| FormatError::BadScalar(item.to_string()))
        })
        .collect()
}

/// A subspace basis from a JSON file or inline rows separated by `;`
/// (`"1,0,0;0,1,1"`).
pub fn parse_basis<S: Scalar>(arg: &str, ambient_dim: usize) -> FormatResult<Subspace<S>> {
    let file = if looks_like_file(arg) {
        match read_json::<BasisSource>(Path::new(arg))? {
            BasisSource::File(file) => file,
            BasisSource::Rows(basis) => BasisFile { ambient_dim, basis },
        }
    } else {
        let rows = arg
            .split(';')
            .filter(|row| !row.trim().is_empty())
            .map(|row| {
                row.split(',')
                    .map(|item| ScalarValue::Text(item.trim().to_string()))
                    .collect()
            })
            .collect();
        BasisFile {
            ambient_dim,
            basis: rows,
        }
    };
    if file.ambient_dim != ambient_dim {
        return Err(hypercone_core::Error::DimensionMismatch {
            expected: ambient_dim,
            actual: file.ambient_dim,
        }
        .into());
    }
    file.to_subspace()
}
