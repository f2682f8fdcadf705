//! Matrix documents: named matrices as row-major [re, im] lists, context
//! generator lists, and a state matrix. Non-finite numbers are rejected.

use num_complex::Complex64;
use serde_json::Value;

use crate::cmatrix::{CMat, Tol};
use crate::context::{context_generate, Context};
use crate::error::MatrixError;
use crate::proj::MatProjection;
use crate::semantics::DensityState;

pub struct MatrixDoc {
    pub dim: usize,
    pub matrices: Vec<(String, CMat)>,
}

impl MatrixDoc {
    pub fn get(&self, name: &str) -> Result<&CMat, MatrixError> {
        self.matrices
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| MatrixError::Document(format!("no matrix named `{name}`")))
    }
}

fn parse_entries(dim: usize, v: &Value) -> Result<CMat, MatrixError> {
    let arr = v
        .as_array()
        .ok_or_else(|| MatrixError::Document("matrix must be a row-major list of [re, im]".into()))?;
    if arr.len() != dim * dim {
        return Err(MatrixError::Document(format!(
            "expected {} entries, got {}",
            dim * dim,
            arr.len()
        )));
    }
    let mut m = CMat::zeros(dim, dim);
    for (idx, pair) in arr.iter().enumerate() {
        let p = pair
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| MatrixError::Document("entries must be [re, im] pairs".into()))?;
        let re = p[0]
            .as_f64()
            .ok_or_else(|| MatrixError::Document("entries must be numbers".into()))?;
        let im = p[1]
            .as_f64()
            .ok_or_else(|| MatrixError::Document("entries must be numbers".into()))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(MatrixError::Document("non-finite entry".into()));
        }
        m[(idx / dim, idx % dim)] = Complex64::new(re, im);
    }
    Ok(m)
}

/// Parse `{ "dim": n, "matrices": { name: [[re,im], …] } }`.
pub fn parse_matrices(text: &str) -> Result<MatrixDoc, MatrixError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| MatrixError::Document(format!("invalid JSON: {e}")))?;
    let dim = v
        .get("dim")
        .and_then(|d| d.as_u64())
        .ok_or_else(|| MatrixError::Document("`dim` must be a positive integer".into()))?
        as usize;
    if dim == 0 || dim > 64 {
        return Err(MatrixError::Document("`dim` must be between 1 and 64".into()));
    }
    let mats = v
        .get("matrices")
        .and_then(|m| m.as_object())
        .ok_or_else(|| MatrixError::Document("`matrices` must be an object".into()))?;
    let mut matrices = Vec::new();
    for (name, entry) in mats {
        matrices.push((name.clone(), parse_entries(dim, entry)?));
    }
    Ok(MatrixDoc { dim, matrices })
}

/// Parse `{ "contexts": [[generator names], …] }` against named matrices.
pub fn parse_contexts(doc: &MatrixDoc, text: &str, tol: &Tol) -> Result<Vec<Context>, MatrixError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| MatrixError::Document(format!("invalid JSON: {e}")))?;
    let arr = v
        .get("contexts")
        .and_then(|c| c.as_array())
        .ok_or_else(|| MatrixError::Document("`contexts` must be a list of name lists".into()))?;
    let mut out = Vec::new();
    for names in arr {
        let names = names
            .as_array()
            .ok_or_else(|| MatrixError::Document("each context is a list of names".into()))?;
        let mut gens = Vec::new();
        for n in names {
            let n = n
                .as_str()
                .ok_or_else(|| MatrixError::Document("generator names must be strings".into()))?;
            gens.push(MatProjection::new(doc.get(n)?.clone(), tol)?);
        }
        out.push(context_generate(doc.dim, &gens, tol)?);
    }
    Ok(out)
}

/// Parse `{ "dim": n, "rho": [[re,im], …] }`.
pub fn parse_state(text: &str, tol: &Tol) -> Result<DensityState, MatrixError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| MatrixError::Document(format!("invalid JSON: {e}")))?;
    let dim = v
        .get("dim")
        .and_then(|d| d.as_u64())
        .ok_or_else(|| MatrixError::Document("`dim` must be a positive integer".into()))?
        as usize;
    let rho = parse_entries(
        dim,
        v.get("rho")
            .ok_or_else(|| MatrixError::Document("`rho` is required".into()))?,
    )?;
    DensityState::new(rho, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_document_with_contexts_and_state() {
        let t = Tol::default();
        let text = r#"{
            "dim": 2,
            "matrices": {
                "pz": [[1,0],[0,0],[0,0],[0,0]],
                "px": [[0.5,0],[0.5,0],[0.5,0],[0.5,0]]
            }
        }"#;
        let doc = parse_matrices(text).unwrap();
        assert_eq!(doc.dim, 2);
        let ctxs = parse_contexts(&doc, r#"{"contexts": [["pz"], ["px"]]}"#, &t).unwrap();
        assert_eq!(ctxs.len(), 2);
        assert_eq!(ctxs[0].k(), 2);
        let state = parse_state(r#"{"dim": 2, "rho": [[1,0],[0,0],[0,0],[0,0]]}"#, &t).unwrap();
        assert_eq!(state.dim(), 2);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(parse_matrices("{").is_err());
        assert!(parse_matrices(r#"{"dim": 2, "matrices": {"p": [[1,0]]}}"#).is_err());
        let nan = r#"{"dim": 1, "matrices": {"p": [[null,0]]}}"#;
        assert!(parse_matrices(nan).is_err());
        let t = Tol::default();
        assert!(parse_state(r#"{"dim": 1, "rho": [[2,0]]}"#, &t).is_err());
    }
}
