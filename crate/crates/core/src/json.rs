//! JSON wire formats shared with the CLI.
//!
//! Complex numbers are `[re, im]` pairs, matrices are nested row arrays.
//! States carry their factor dimensions: `{"dims": [...], "matrix": [...]}`;
//! channels are `{"d_in": n, "d_out": m, "kraus": [matrix, ...]}`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, FactorShape};
use crate::saturation::{SaturationCertificate, SaturationReport};
use crate::states::DensityMatrix;

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;
pub type JsonVector = Vec<JsonComplex>;

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| [m.get(i, j).re, m.get(i, j).im])
                .collect()
        })
        .collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<ComplexMatrix> {
    if rows.is_empty() {
        return Err(Error::Invalid("matrix needs at least one row".into()));
    }
    let cols = rows[0].len();
    if cols == 0 {
        return Err(Error::Invalid("matrix needs at least one column".into()));
    }
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Dim("ragged rows in matrix".into()));
    }
    let data: Vec<C64> = rows
        .iter()
        .flatten()
        .map(|&[re, im]| C64::new(re, im))
        .collect();
    ComplexMatrix::new(rows.len(), cols, data)
}

pub fn vector_to_json(v: &[C64]) -> JsonVector {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// State file format: `{"dims": [...], "matrix": [[[re,im], ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub dims: Vec<usize>,
    pub matrix: JsonMatrix,
}

impl StateJson {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self {
            dims: rho.shape().dims().to_vec(),
            matrix: matrix_to_json(rho.mat()),
        }
    }

    pub fn to_density(&self, tol: f64) -> Result<DensityMatrix> {
        let mat = matrix_from_json(&self.matrix)?;
        let shape = FactorShape::new(self.dims.clone())?;
        DensityMatrix::new(mat, shape, tol)
    }
}

/// Channel file format: `{"d_in": n, "d_out": m, "kraus": [matrix, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub d_in: usize,
    pub d_out: usize,
    pub kraus: Vec<JsonMatrix>,
}

impl ChannelJson {
    pub fn from_channel(phi: &KrausChannel) -> Self {
        Self {
            d_in: phi.d_in(),
            d_out: phi.d_out(),
            kraus: phi.kraus().iter().map(matrix_to_json).collect(),
        }
    }

    pub fn to_channel(&self, tol: f64) -> Result<KrausChannel> {
        let ops = self
            .kraus
            .iter()
            .map(matrix_from_json)
            .collect::<Result<Vec<_>>>()?;
        let ch = KrausChannel::new(ops, tol)?;
        if ch.d_in() != self.d_in || ch.d_out() != self.d_out {
            return Err(Error::Dim(format!(
                "declared {}x{} channel but Kraus operators are {}x{}",
                self.d_out,
                self.d_in,
                ch.d_out(),
                ch.d_in()
            )));
        }
        Ok(ch)
    }
}

/// Serialized saturation certificate.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub d_l: usize,
    pub d_r: usize,
    pub d_c: usize,
    pub support_only: bool,
    pub residual: f64,
    pub w: JsonMatrix,
    pub rho_l: JsonMatrix,
    pub psi: JsonVector,
}

impl CertificateJson {
    pub fn from_certificate(cert: &SaturationCertificate) -> Self {
        Self {
            d_l: cert.d_l,
            d_r: cert.d_r,
            d_c: cert.c_dim(),
            support_only: cert.support_only,
            residual: cert.residual,
            w: matrix_to_json(&cert.w),
            rho_l: matrix_to_json(cert.rho_l.mat()),
            psi: vector_to_json(cert.psi_rc.vec()),
        }
    }
}

/// Serialized outcome of a saturation check.
#[derive(Debug, Clone, Serialize)]
pub struct SaturationReportJson {
    pub gap: f64,
    pub s_rho: f64,
    pub coherent_info: f64,
    pub saturating: bool,
    pub product_output_distance: Option<f64>,
    pub certificate: Option<CertificateJson>,
}

impl SaturationReportJson {
    pub fn from_report(report: &SaturationReport) -> Self {
        Self {
            gap: report.gap,
            s_rho: report.s_rho,
            coherent_info: report.coherent_info,
            saturating: report.certificate.is_some(),
            product_output_distance: report.product_output_distance,
            certificate: report
                .certificate
                .as_ref()
                .map(CertificateJson::from_certificate),
        }
    }
}
