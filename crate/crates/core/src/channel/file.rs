//! JSON channel files.
//!
//! ```json
//! {"n_complex":2,"H_complex":[[[re,im],...],...],"sigma_z2":0.25,
//!  "partition":[{"dim":2,"shape":"ball","radius":1.0},...]}
//! ```
//!
//! Either `H_real` (rows of reals) or `H_complex` (rows of `[re, im]`) is
//! given; a complex matrix is realified on load. Floats are written with 17
//! significant digits so files round-trip bit-exactly.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ChannelModel, ConstraintRegion, SubRegion};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, RealMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_complex: Option<usize>,
    #[serde(rename = "H_real", default, skip_serializing_if = "Option::is_none")]
    pub h_real: Option<Vec<Vec<f64>>>,
    #[serde(rename = "H_complex", default, skip_serializing_if = "Option::is_none")]
    pub h_complex: Option<Vec<Vec<[f64; 2]>>>,
    pub sigma_z2: f64,
    pub partition: Vec<SubRegion>,
}

impl ChannelFile {
    pub fn from_model(model: &ChannelModel) -> Self {
        Self {
            n_complex: None,
            h_real: Some(model.h().to_rows()),
            h_complex: None,
            sigma_z2: model.sigma_z2(),
            partition: model.region().subregions().to_vec(),
        }
    }

    pub fn from_complex(hc: &ComplexMatrix, sigma_z2: f64, partition: Vec<SubRegion>) -> Self {
        Self {
            n_complex: Some(hc.nrows()),
            h_real: None,
            h_complex: Some(
                hc.to_rows()
                    .into_iter()
                    .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
            ),
            sigma_z2,
            partition,
        }
    }

    pub fn into_model(self) -> Result<ChannelModel> {
        let h = match (self.h_real, self.h_complex) {
            (Some(rows), None) => {
                if self.n_complex.is_some_and(|n| 2 * n != rows.len()) {
                    return Err(Error::DimensionMismatch {
                        expected: 2 * self.n_complex.unwrap_or(0),
                        found: rows.len(),
                    });
                }
                RealMatrix::from_rows(&rows)?
            }
            (None, Some(rows)) => {
                if let Some(n) = self.n_complex.filter(|&n| n != rows.len()) {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: rows.len(),
                    });
                }
                let rows: Vec<Vec<Complex64>> = rows
                    .into_iter()
                    .map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
                    .collect();
                linalg::realify(&ComplexMatrix::from_rows(&rows)?)?
            }
            (Some(_), Some(_)) => {
                return Err(Error::InvalidArgument(
                    "channel file has both H_real and H_complex".into(),
                ))
            }
            (None, None) => {
                return Err(Error::InvalidArgument(
                    "channel file has neither H_real nor H_complex".into(),
                ))
            }
        };
        let region = ConstraintRegion::new(self.partition)?;
        ChannelModel::new(h, self.sigma_z2, region)
    }

    pub fn to_writer<W: Write>(&self, writer: W) -> Result<()> {
        let mut ser = serde_json::Serializer::with_formatter(writer, FullPrecision);
        self.serialize(&mut ser)?;
        let mut writer = ser.into_inner();
        writer.write_all(b"\n")?;
        Ok(())
    }

    pub fn to_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.to_writer(&mut buf)?;
        Ok(String::from_utf8(buf).expect("JSON output is UTF-8"))
    }
}

/// Compact JSON with every float in `{:.16e}` form.
struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn read_model(json: &str) -> Result<ChannelModel> {
    serde_json::from_str::<ChannelFile>(json)?.into_model()
}

pub fn write_model<W: Write>(model: &ChannelModel, writer: W) -> Result<()> {
    ChannelFile::from_model(model).to_writer(writer)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ChannelModel> {
    read_model(&fs::read_to_string(path)?)
}

pub fn save_model(model: &ChannelModel, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut writer = io::BufWriter::new(file);
    write_model(model, &mut writer)?;
    writer.flush()?;
    Ok(())
}
