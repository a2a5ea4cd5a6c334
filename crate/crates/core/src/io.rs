//! File formats. All floating-point values are serialized with the
//! shortest round-trip decimal representation, so write→read→write is
//! bit-stable. Experiment outputs carry an embedded run manifest; data
//! payloads (matrices, configurations, polygons) treat it as optional
//! metadata and ignore it on read.

use crate::certificate::{Certificate, MinEntry};
use crate::hopf::RowConfig;
use crate::linalg::validate_ortho;
use crate::polygon::Polygon;
use crate::{Complex, Error, OrthoMatrix, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Version of the on-disk formats; bumped on any schema change.
pub const FORMAT_VERSION: u32 = 1;

/// Reproducibility record embedded in experiment outputs. Contains only
/// run-determined data (no wall-clock), so re-running the same command on
/// the same inputs reproduces output files byte for byte.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub seeds: Vec<u64>,
    pub version: String,
    pub format_version: u32,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
}

/// SHA-256 of an input file at read time.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Matrix payload: `{"n": …, "rows": [[[re,im],[re,im]], …]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub rows: Vec<[[f64; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
}

impl MatrixFile {
    pub fn from_matrix(u: &OrthoMatrix, manifest: Option<RunManifest>) -> Self {
        MatrixFile {
            n: u.n(),
            rows: u
                .rows()
                .iter()
                .map(|r| [[r[0].re, r[0].im], [r[1].re, r[1].im]])
                .collect(),
            manifest,
        }
    }

    /// Validates consistency of `n` and orthonormality at tolerance `tol`.
    pub fn into_matrix(self, tol: f64) -> Result<OrthoMatrix> {
        if self.n != self.rows.len() {
            return Err(Error::ConfigInvalid {
                reason: format!(
                    "declared n = {} but {} rows are present",
                    self.n,
                    self.rows.len()
                ),
            });
        }
        let rows: Vec<[Complex; 2]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    Complex::new(r[0][0], r[0][1]),
                    Complex::new(r[1][0], r[1][1]),
                ]
            })
            .collect();
        validate_ortho(&rows, tol)
    }
}

/// Configuration payload: `{"n": …, "w": [[x,y,z], …]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigFile {
    pub n: usize,
    pub w: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
}

impl ConfigFile {
    pub fn from_config(cfg: &RowConfig, manifest: Option<RunManifest>) -> Self {
        ConfigFile {
            n: cfg.n(),
            w: cfg.vectors().to_vec(),
            manifest,
        }
    }

    pub fn into_config(self) -> Result<RowConfig> {
        if self.n != self.w.len() {
            return Err(Error::ConfigInvalid {
                reason: format!(
                    "declared n = {} but {} vectors are present",
                    self.n,
                    self.w.len()
                ),
            });
        }
        RowConfig::new(self.w)
    }
}

/// Polygon payload: either `{"edges": […]}` or `{"vertices": […]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolygonFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
}

impl PolygonFile {
    /// Builds the polygon, normalizing the perimeter to 2 when asked.
    pub fn into_polygon(self, normalize: bool) -> Result<Polygon> {
        match (self.edges, self.vertices) {
            (Some(edges), None) => {
                if normalize {
                    Polygon::from_edges_normalized(edges)
                } else {
                    Polygon::from_edges(edges)
                }
            }
            (None, Some(vertices)) => Polygon::from_vertices(&vertices, normalize),
            (Some(_), Some(_)) => Err(Error::PolygonInvalid {
                reason: "file has both edges and vertices".into(),
            }),
            (None, None) => Err(Error::PolygonInvalid {
                reason: "file has neither edges nor vertices".into(),
            }),
        }
    }
}

/// Flat summary of a certificate: min entry, F, R₂, and the two F bounds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateDump {
    #[serde(rename = "minEntry")]
    pub min_entry: MinEntry,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    pub bounds: CertificateBounds,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateBounds {
    /// 8R₂/n − 32/(3n²).
    pub lower_raw: f64,
    /// (8α/n)(R₂ − α/n).
    pub upper: f64,
}

impl CertificateDump {
    pub fn from_certificate(cert: &Certificate) -> Self {
        let nf = cert.n as f64;
        let al = crate::alpha();
        CertificateDump {
            min_entry: cert.min_entry,
            f: cert.f,
            r2: cert.r2,
            bounds: CertificateBounds {
                lower_raw: 8.0 * cert.r2 / nf - 32.0 / (3.0 * nf * nf),
                upper: (8.0 * al / nf) * (cert.r2 - al / nf),
            },
        }
    }
}

/// Checks that every float in a JSON document survives
/// serialize→parse→serialize bit-exactly. Returns the number of floats
/// checked.
pub fn roundtrip_bit_check(doc: &serde_json::Value) -> Result<usize> {
    let text = serde_json::to_string(doc).map_err(|e| Error::ConfigInvalid {
        reason: format!("cannot serialize: {e}"),
    })?;
    let reparsed: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::ConfigInvalid {
            reason: format!("cannot reparse: {e}"),
        })?;
    fn walk(a: &serde_json::Value, b: &serde_json::Value, count: &mut usize) -> bool {
        use serde_json::Value::*;
        match (a, b) {
            (Number(x), Number(y)) => {
                if let (Some(xf), Some(yf)) = (x.as_f64(), y.as_f64()) {
                    *count += 1;
                    xf.to_bits() == yf.to_bits()
                } else {
                    x == y
                }
            }
            (Array(xs), Array(ys)) => {
                xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| walk(x, y, count))
            }
            (Object(xs), Object(ys)) => {
                xs.len() == ys.len()
                    && xs
                        .iter()
                        .all(|(k, x)| ys.get(k).is_some_and(|y| walk(x, y, count)))
            }
            _ => a == b,
        }
    }
    let mut count = 0;
    if walk(doc, &reparsed, &mut count) {
        Ok(count)
    } else {
        Err(Error::ConfigInvalid {
            reason: "serialization round-trip altered a value".into(),
        })
    }
}
