//! Document formats: lattices, block carriers, sections and frame members
//! as UTF-8 JSON. Emission is canonical (fixed key order, elements in id
//! order, pair lists sorted), so parse → emit is a bit-exact round trip on
//! emitted documents.

use serde_json::{json, Map, Value};

use crate::blocks::BlockPoset;
use crate::error::LatticeError;
use crate::frames::DownsetFrame;
use crate::heyting::MonotoneSection;
use crate::lattice::{ElemId, FiniteOrtholattice};

/// Parse a lattice document. Required: `elements`; exactly one of `covers`
/// or `leq`; optional `perp` (a label → label map).
pub fn parse_lattice(text: &str) -> Result<FiniteOrtholattice, LatticeError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| LatticeError::Document(format!("invalid JSON: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| LatticeError::Document("top level must be an object".into()))?;
    let labels: Vec<String> = obj
        .get("elements")
        .and_then(|e| e.as_array())
        .ok_or_else(|| LatticeError::Document("`elements` must be a list of labels".into()))?
        .iter()
        .map(|x| {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| LatticeError::Document("labels must be strings".into()))
        })
        .collect::<Result<_, _>>()?;
    let id_of = |l: &str| -> Result<ElemId, LatticeError> {
        labels
            .iter()
            .position(|x| x == l)
            .map(|i| i as ElemId)
            .ok_or_else(|| LatticeError::Document(format!("unknown label `{l}`")))
    };
    let parse_pairs = |key: &str| -> Result<Option<Vec<(ElemId, ElemId)>>, LatticeError> {
        match obj.get(key) {
            None => Ok(None),
            Some(arr) => {
                let arr = arr
                    .as_array()
                    .ok_or_else(|| LatticeError::Document(format!("`{key}` must be a list")))?;
                let mut out = Vec::new();
                for pair in arr {
                    let p = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                        LatticeError::Document(format!("`{key}` entries must be label pairs"))
                    })?;
                    let a = p[0]
                        .as_str()
                        .ok_or_else(|| LatticeError::Document("labels must be strings".into()))?;
                    let b = p[1]
                        .as_str()
                        .ok_or_else(|| LatticeError::Document("labels must be strings".into()))?;
                    out.push((id_of(a)?, id_of(b)?));
                }
                Ok(Some(out))
            }
        }
    };
    let covers = parse_pairs("covers")?;
    let leq = parse_pairs("leq")?;
    let perp: Option<Vec<ElemId>> = match obj.get("perp") {
        None => None,
        Some(m) => {
            let m = m
                .as_object()
                .ok_or_else(|| LatticeError::Document("`perp` must be a label map".into()))?;
            let mut p = vec![ElemId::MAX; labels.len()];
            for (k, val) in m {
                let v = val
                    .as_str()
                    .ok_or_else(|| LatticeError::Document("perp values must be labels".into()))?;
                p[id_of(k)? as usize] = id_of(v)?;
            }
            if p.iter().any(|&x| x == ElemId::MAX) {
                return Err(LatticeError::Document("perp map must cover every element".into()));
            }
            Some(p)
        }
    };
    match (covers, leq) {
        (Some(c), None) => FiniteOrtholattice::from_covers(labels, &c, perp),
        (None, Some(l)) => FiniteOrtholattice::from_leq(labels, &l, perp),
        (Some(_), Some(_)) => Err(LatticeError::Document(
            "give `covers` or `leq`, not both".into(),
        )),
        (None, None) => Err(LatticeError::Document(
            "one of `covers` or `leq` is required".into(),
        )),
    }
}

/// Canonical emission: elements in id order, the cover relation sorted,
/// perp keys in id order.
pub fn emit_lattice(lat: &FiniteOrtholattice) -> String {
    let mut obj = Map::new();
    obj.insert("elements".into(), json!(lat.labels()));
    let covers: Vec<Value> = lat
        .covers()
        .into_iter()
        .map(|(x, y)| json!([lat.label(x), lat.label(y)]))
        .collect();
    obj.insert("covers".into(), Value::Array(covers));
    if lat.has_perp() {
        let mut p = Map::new();
        for x in 0..lat.n() as ElemId {
            p.insert(lat.label(x).into(), json!(lat.label(lat.perp(x).unwrap())));
        }
        obj.insert("perp".into(), Value::Object(p));
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).unwrap();
    s.push('\n');
    s
}

/// Block carriers listed by label, in the poset's deterministic block order.
pub fn emit_blocks(p: &BlockPoset) -> String {
    let blocks: Vec<Value> = (0..p.n_blocks())
        .map(|i| json!(p.carrier_labels(i)))
        .collect();
    let mut obj = Map::new();
    obj.insert("blocks".into(), Value::Array(blocks));
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).unwrap();
    s.push('\n');
    s
}

/// Parse block carriers (label lists) against a host lattice.
pub fn parse_blocks(
    host: &FiniteOrtholattice,
    text: &str,
) -> Result<BlockPoset, LatticeError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| LatticeError::Document(format!("invalid JSON: {e}")))?;
    let arr = v
        .get("blocks")
        .and_then(|b| b.as_array())
        .ok_or_else(|| LatticeError::Document("`blocks` must be a list of label lists".into()))?;
    let mut carriers = Vec::new();
    for b in arr {
        let labels = b
            .as_array()
            .ok_or_else(|| LatticeError::Document("each block must be a label list".into()))?;
        let mut bits = crate::bitset::Bits::empty(host.n());
        for l in labels {
            let l = l
                .as_str()
                .ok_or_else(|| LatticeError::Document("labels must be strings".into()))?;
            let id = host
                .id_of(l)
                .ok_or_else(|| LatticeError::Document(format!("unknown label `{l}`")))?;
            bits.insert(id as usize);
        }
        carriers.push(bits);
    }
    BlockPoset::from_host(host, carriers)
        .map_err(|e| LatticeError::Document(format!("invalid block family: {e}")))
}

/// Sections as {block-label: element-label} maps; block labels are B0, B1, …
/// in the poset's block order.
pub fn section_to_json(p: &BlockPoset, s: &MonotoneSection) -> Value {
    let mut m = Map::new();
    for (i, &v) in s.values().iter().enumerate() {
        m.insert(format!("B{i}"), json!(p.label(v)));
    }
    Value::Object(m)
}

/// Frame members as lists of element labels.
pub fn frame_to_json(f: &DownsetFrame) -> Value {
    let members: Vec<Value> = (0..f.len()).map(|i| json!(f.member_labels(i))).collect();
    json!({ "members": members })
}
