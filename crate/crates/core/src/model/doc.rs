//! JSON document format for networks and predictor models.
//!
//! ```json
//! {
//!   "nodes": ["w1", "w2"],
//!   "modules": [{"from": "w1", "to": "w2", "num": [0, 0.5], "den": [1, -0.3]}],
//!   "noise": {"H_entries": [{"row": "w1", "col": "w2", "num": [0, 0.4], "den": [1]}],
//!             "cov": [1.0, 1.0]},
//!   "excitations": [{"r_index": 1, "node": "w1"}],
//!   "predictor": {"D": ["w1"], "Y": ["w1", "w2"], "target": {"j": "w2", "i": "w1"},
//!                 "param_map": {"mode": "structural", "entries": []}}
//! }
//! ```
//!
//! Coefficients are ascending powers of the unit delay. `cov` is either a
//! list (diagonal) or a square matrix. Noise columns are indexed by node.

use nalgebra::DMatrix;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::model::network::{Excitation, Network};
use crate::model::predictor::{Block, EntryOverride, OverrideStatus, PredictorModel};
use crate::tf::{Orders, Poly, RationalTF};

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub network: Network,
    pub predictor: Option<PredictorModel>,
}

fn schema(pointer: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        pointer: pointer.to_string(),
        message: message.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, ptr: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(&format!("{ptr}/{key}"), "missing field"))
}

fn object<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(ptr, "expected object"))
}

fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(ptr, "expected array"))
}

fn string<'a>(v: &'a Value, ptr: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(ptr, "expected string"))
}

fn number(v: &Value, ptr: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| schema(ptr, "expected finite number"))
}

fn uint(v: &Value, ptr: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(ptr, "expected non-negative integer"))
}

fn boolean(v: &Value, ptr: &str) -> Result<bool> {
    v.as_bool().ok_or_else(|| schema(ptr, "expected boolean"))
}

fn coeffs(v: &Value, ptr: &str) -> Result<Vec<f64>> {
    let a = array(v, ptr)?;
    if a.is_empty() {
        return Err(schema(ptr, "coefficient list must not be empty"));
    }
    a.iter()
        .enumerate()
        .map(|(k, x)| number(x, &format!("{ptr}/{k}")))
        .collect()
}

fn tf_from(obj: &Map<String, Value>, ptr: &str) -> Result<RationalTF> {
    let num = coeffs(field(obj, "num", ptr)?, &format!("{ptr}/num"))?;
    let den = match obj.get("den") {
        Some(d) => coeffs(d, &format!("{ptr}/den"))?,
        None => vec![1.0],
    };
    RationalTF::new(Poly::new(num), Poly::new(den)).map_err(|e| schema(ptr, e.to_string()))
}

fn label_index(labels: &[String], v: &Value, ptr: &str) -> Result<usize> {
    let s = string(v, ptr)?;
    labels
        .iter()
        .position(|l| l == s)
        .ok_or_else(|| Error::UnknownLabel {
            label: s.to_string(),
            pointer: ptr.to_string(),
        })
}

fn orders_from(v: &Value, ptr: &str) -> Result<Orders> {
    let o = object(v, ptr)?;
    Ok(Orders {
        nb: uint(field(o, "nb", ptr)?, &format!("{ptr}/nb"))?,
        nf: match o.get("nf") {
            Some(x) => uint(x, &format!("{ptr}/nf"))?,
            None => 0,
        },
        nk: match o.get("nk") {
            Some(x) => uint(x, &format!("{ptr}/nk"))?,
            None => 1,
        },
    })
}

pub fn parse_str(s: &str) -> Result<Document> {
    let v: Value = serde_json::from_str(s).map_err(|e| schema("", format!("malformed JSON: {e}")))?;
    parse_value(&v)
}

pub fn parse_bytes(b: &[u8]) -> Result<Document> {
    let s = std::str::from_utf8(b).map_err(|_| schema("", "document is not UTF-8"))?;
    parse_str(s)
}

pub fn load(path: &std::path::Path) -> Result<Document> {
    let s = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_str(&s)
}

pub fn parse_value(v: &Value) -> Result<Document> {
    let root = object(v, "")?;
    let nodes = array(field(root, "nodes", "")?, "/nodes")?;
    let mut labels = Vec::with_capacity(nodes.len());
    for (k, n) in nodes.iter().enumerate() {
        let p = format!("/nodes/{k}");
        let s = string(n, &p)?.to_string();
        if labels.contains(&s) {
            return Err(schema(&p, format!("duplicate node label `{s}`")));
        }
        labels.push(s);
    }
    let mut net = Network::empty(labels.clone());

    if let Some(mods) = root.get("modules") {
        for (k, m) in array(mods, "/modules")?.iter().enumerate() {
            let p = format!("/modules/{k}");
            let o = object(m, &p)?;
            let from = label_index(&labels, field(o, "from", &p)?, &format!("{p}/from"))?;
            let to = label_index(&labels, field(o, "to", &p)?, &format!("{p}/to"))?;
            net.set_module(from, to, tf_from(o, &p)?);
        }
    }

    if let Some(noise) = root.get("noise") {
        let no = object(noise, "/noise")?;
        if let Some(he) = no.get("H_entries") {
            for (k, m) in array(he, "/noise/H_entries")?.iter().enumerate() {
                let p = format!("/noise/H_entries/{k}");
                let o = object(m, &p)?;
                let r = label_index(&labels, field(o, "row", &p)?, &format!("{p}/row"))?;
                let c = label_index(&labels, field(o, "col", &p)?, &format!("{p}/col"))?;
                net.h.set(r, c, tf_from(o, &p)?);
            }
        }
        if let Some(cov) = no.get("cov") {
            net.noise_cov = parse_cov(cov, labels.len())?;
        }
    }

    if let Some(ex) = root.get("excitations") {
        for (k, e) in array(ex, "/excitations")?.iter().enumerate() {
            let p = format!("/excitations/{k}");
            let o = object(e, &p)?;
            let r_index = uint(field(o, "r_index", &p)?, &format!("{p}/r_index"))?;
            let node = label_index(&labels, field(o, "node", &p)?, &format!("{p}/node"))?;
            if net.excitations.iter().any(|x| x.r_index == r_index) {
                return Err(schema(&format!("{p}/r_index"), "duplicate r_index"));
            }
            let label = match o.get("label") {
                Some(l) => string(l, &format!("{p}/label"))?.to_string(),
                None => format!("r{r_index}"),
            };
            let variance = match o.get("variance") {
                Some(x) => number(x, &format!("{p}/variance"))?,
                None => 1.0,
            };
            let filter = match o.get("filter") {
                Some(f) => Some(tf_from(object(f, &format!("{p}/filter"))?, &format!("{p}/filter"))?),
                None => None,
            };
            let pe = match o.get("pe") {
                Some(x) => boolean(x, &format!("{p}/pe"))?,
                None => true,
            };
            net.excitations.push(Excitation {
                label,
                r_index,
                node,
                variance,
                filter,
                pe,
            });
        }
    }

    let predictor = match root.get("predictor") {
        Some(p) => Some(parse_predictor(p, &net, "/predictor")?),
        None => None,
    };
    Ok(Document {
        network: net,
        predictor,
    })
}

fn parse_cov(v: &Value, l: usize) -> Result<DMatrix<f64>> {
    let a = array(v, "/noise/cov")?;
    if a.len() != l {
        return Err(schema("/noise/cov", format!("expected {l} entries")));
    }
    let mut m = DMatrix::zeros(l, l);
    if a.iter().all(|x| x.is_number()) {
        for (k, x) in a.iter().enumerate() {
            m[(k, k)] = number(x, &format!("/noise/cov/{k}"))?;
        }
    } else {
        for (r, row) in a.iter().enumerate() {
            let p = format!("/noise/cov/{r}");
            let row = array(row, &p)?;
            if row.len() != l {
                return Err(schema(&p, format!("expected {l} entries")));
            }
            for (c, x) in row.iter().enumerate() {
                m[(r, c)] = number(x, &format!("{p}/{c}"))?;
            }
        }
    }
    Ok(m)
}

/// Parse a predictor object against an existing network. Accepts either the
/// bare predictor object or a document holding it under `predictor`.
pub fn parse_predictor_doc(v: &Value, net: &Network) -> Result<PredictorModel> {
    match v.get("predictor") {
        Some(p) => parse_predictor(p, net, "/predictor"),
        None => parse_predictor(v, net, ""),
    }
}

fn parse_predictor(v: &Value, net: &Network, ptr: &str) -> Result<PredictorModel> {
    let labels = &net.labels;
    let o = object(v, ptr)?;
    let list = |key: &str| -> Result<Vec<usize>> {
        let p = format!("{ptr}/{key}");
        array(field(o, key, ptr)?, &p)?
            .iter()
            .enumerate()
            .map(|(k, x)| label_index(labels, x, &format!("{p}/{k}")))
            .collect()
    };
    let d = list("D")?;
    let y = list("Y")?;
    let tp = format!("{ptr}/target");
    let t = object(field(o, "target", ptr)?, &tp)?;
    let j = label_index(labels, field(t, "j", &tp)?, &format!("{tp}/j"))?;
    let i = label_index(labels, field(t, "i", &tp)?, &format!("{tp}/i"))?;
    let mut pred = PredictorModel::new(d, y, j, i);
    if let Some(no) = o.get("noise_order") {
        pred.noise_order = Some(uint(no, &format!("{ptr}/noise_order"))?);
    }
    if let Some(pm) = o.get("param_map") {
        let pp = format!("{ptr}/param_map");
        let pmo = object(pm, &pp)?;
        if let Some(m) = pmo.get("mode") {
            pred.explicit = match string(m, &format!("{pp}/mode"))? {
                "structural" => false,
                "explicit" => true,
                other => {
                    return Err(schema(
                        &format!("{pp}/mode"),
                        format!("unknown mode `{other}`"),
                    ))
                }
            };
        }
        if let Some(b) = pmo.get("row_independent") {
            pred.row_independent = boolean(b, &format!("{pp}/row_independent"))?;
        }
        if let Some(b) = pmo.get("column_block_independent") {
            pred.column_block_independent = boolean(b, &format!("{pp}/column_block_independent"))?;
        }
        if let Some(es) = pmo.get("entries") {
            for (k, e) in array(es, &format!("{pp}/entries"))?.iter().enumerate() {
                let p = format!("{pp}/entries/{k}");
                pred.overrides.push(parse_entry(e, net, &p)?);
            }
        }
    }
    pred.check(net).map_err(|e| schema(ptr, e.to_string()))?;
    Ok(pred)
}

fn parse_entry(v: &Value, net: &Network, p: &str) -> Result<EntryOverride> {
    let o = object(v, p)?;
    let block = match string(field(o, "block", p)?, &format!("{p}/block"))? {
        "G" => Block::G,
        "H" => Block::H,
        "T" => Block::T,
        other => return Err(schema(&format!("{p}/block"), format!("unknown block `{other}`"))),
    };
    let row = label_index(&net.labels, field(o, "row", p)?, &format!("{p}/row"))?;
    let colv = field(o, "col", p)?;
    let col = match block {
        Block::T => {
            let s = string(colv, &format!("{p}/col"))?;
            net.excitation(s).ok_or_else(|| Error::UnknownLabel {
                label: s.to_string(),
                pointer: format!("{p}/col"),
            })?
        }
        _ => label_index(&net.labels, colv, &format!("{p}/col"))?,
    };
    let status = match string(field(o, "status", p)?, &format!("{p}/status"))? {
        "zero" => OverrideStatus::Zero,
        "known" => OverrideStatus::Known,
        "parametrized" => OverrideStatus::Parametrized,
        other => return Err(schema(&format!("{p}/status"), format!("unknown status `{other}`"))),
    };
    let tf = if o.contains_key("num") {
        Some(tf_from(o, p)?)
    } else {
        None
    };
    let orders = match o.get("orders") {
        Some(x) => Some(orders_from(x, &format!("{p}/orders"))?),
        None => None,
    };
    Ok(EntryOverride {
        block,
        row,
        col,
        status,
        tf,
        orders,
    })
}

fn tf_json(tf: &RationalTF) -> (Value, Value) {
    (json!(tf.num.coeffs()), json!(tf.den.coeffs()))
}

/// Canonical document: modules sorted by (to, from), explicit noise entries
/// for every non-identity entry of `H`, `cov` as a list when diagonal.
pub fn to_value(doc: &Document) -> Value {
    let net = &doc.network;
    let l = net.size();
    let labels = &net.labels;
    let mut modules = vec![];
    for to in 0..l {
        for from in 0..l {
            let t = net.module(from, to);
            if !t.is_zero() {
                let (num, den) = tf_json(t);
                modules.push(json!({"from": labels[from], "to": labels[to], "num": num, "den": den}));
            }
        }
    }
    let mut h_entries = vec![];
    for r in 0..l {
        for c in 0..l {
            let t = net.h.get(r, c);
            let identity = r == c && t.num.coeffs() == [1.0] && t.den.coeffs() == [1.0];
            let default_zero = r != c && t.is_zero();
            if !identity && !default_zero {
                let (num, den) = tf_json(t);
                h_entries.push(json!({"row": labels[r], "col": labels[c], "num": num, "den": den}));
            }
        }
    }
    let diagonal = (0..l).all(|r| (0..l).all(|c| r == c || net.noise_cov[(r, c)] == 0.0));
    let cov = if diagonal {
        json!((0..l).map(|k| net.noise_cov[(k, k)]).collect::<Vec<_>>())
    } else {
        json!((0..l)
            .map(|r| (0..l).map(|c| net.noise_cov[(r, c)]).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    };
    let excitations: Vec<Value> = net
        .excitations
        .iter()
        .map(|e| {
            let mut o = Map::new();
            o.insert("r_index".into(), json!(e.r_index));
            o.insert("node".into(), json!(labels[e.node]));
            o.insert("label".into(), json!(e.label));
            o.insert("variance".into(), json!(e.variance));
            if let Some(f) = &e.filter {
                let (num, den) = tf_json(f);
                o.insert("filter".into(), json!({"num": num, "den": den}));
            }
            o.insert("pe".into(), json!(e.pe));
            Value::Object(o)
        })
        .collect();
    let mut root = Map::new();
    root.insert("nodes".into(), json!(labels));
    root.insert("modules".into(), json!(modules));
    root.insert("noise".into(), json!({"H_entries": h_entries, "cov": cov}));
    root.insert("excitations".into(), json!(excitations));
    if let Some(p) = &doc.predictor {
        root.insert("predictor".into(), predictor_value(p, net));
    }
    Value::Object(root)
}

pub fn predictor_value(p: &PredictorModel, net: &Network) -> Value {
    let labels = &net.labels;
    let entries: Vec<Value> = p
        .overrides
        .iter()
        .map(|o| {
            let mut m = Map::new();
            m.insert(
                "block".into(),
                json!(match o.block {
                    Block::G => "G",
                    Block::H => "H",
                    Block::T => "T",
                }),
            );
            m.insert("row".into(), json!(labels[o.row]));
            let col = match o.block {
                Block::T => net.excitations[o.col].label.clone(),
                _ => labels[o.col].clone(),
            };
            m.insert("col".into(), json!(col));
            m.insert(
                "status".into(),
                json!(match o.status {
                    OverrideStatus::Zero => "zero",
                    OverrideStatus::Known => "known",
                    OverrideStatus::Parametrized => "parametrized",
                }),
            );
            if let Some(tf) = &o.tf {
                let (num, den) = tf_json(tf);
                m.insert("num".into(), num);
                m.insert("den".into(), den);
            }
            if let Some(ord) = &o.orders {
                m.insert("orders".into(), json!({"nb": ord.nb, "nf": ord.nf, "nk": ord.nk}));
            }
            Value::Object(m)
        })
        .collect();
    let mut o = Map::new();
    o.insert("D".into(), json!(p.d.iter().map(|&k| &labels[k]).collect::<Vec<_>>()));
    o.insert("Y".into(), json!(p.y.iter().map(|&k| &labels[k]).collect::<Vec<_>>()));
    o.insert("target".into(), json!({"j": labels[p.j], "i": labels[p.i]}));
    if let Some(n) = p.noise_order {
        o.insert("noise_order".into(), json!(n));
    }
    o.insert(
        "param_map".into(),
        json!({
            "mode": if p.explicit { "explicit" } else { "structural" },
            "entries": entries,
            "row_independent": p.row_independent,
            "column_block_independent": p.column_block_independent,
        }),
    );
    Value::Object(o)
}

pub fn to_string_pretty(doc: &Document) -> String {
    serde_json::to_string_pretty(&to_value(doc)).expect("serializable")
}

pub fn save(doc: &Document, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, to_string_pretty(doc) + "\n")
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
