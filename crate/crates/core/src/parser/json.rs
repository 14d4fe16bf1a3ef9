//! Assignment JSON.
//!
//! An object keyed by var-symbol name. Predicates map to an array of
//! tuples (arrays of element labels); functions map to an object from the
//! comma-joined argument labels to the result label.

use serde_json::{Map, Value as Json};

use super::format::{tuple_labels, value_label};
use crate::model::{Assignment, Mop, Sort, SymbolId, Table};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssignmentError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{0}` is not a var symbol")]
    NotVar(String),
    #[error("missing var symbol `{0}`")]
    MissingSymbol(String),
    #[error("unknown element `{label}` for `{symbol}`")]
    UnknownElement { symbol: String, label: String },
    #[error("partial function table for `{0}`")]
    Partial(String),
    #[error("arity mismatch for `{0}`")]
    Arity(String),
}

pub fn write_assignment(mop: &Mop, a: &Assignment) -> String {
    let mut root = Map::new();
    for sym in mop.var_symbols() {
        let decl = mop.symbol(sym);
        let v = match a.table(sym).expect("var table") {
            Table::Relation(bits) => Json::Array(
                bits.iter()
                    .enumerate()
                    .filter(|(_, b)| **b)
                    .map(|(i, _)| {
                        Json::Array(tuple_labels(mop, sym, i).into_iter().map(Json::String).collect())
                    })
                    .collect(),
            ),
            Table::Function(values) => {
                let mut m = Map::new();
                for (i, v) in values.iter().enumerate() {
                    let key = tuple_labels(mop, sym, i).join(",");
                    let res = value_label(mop, decl.result.expect("function"), *v);
                    m.insert(key, Json::String(res));
                }
                Json::Object(m)
            }
        };
        root.insert(decl.name.clone(), v);
    }
    serde_json::to_string_pretty(&Json::Object(root)).expect("serializable")
}

fn label_of(v: &Json) -> Option<String> {
    match v {
        Json::String(s) => Some(s.clone()),
        Json::Number(n) if n.is_i64() => Some(n.to_string()),
        _ => None,
    }
}

fn code(mop: &Mop, sym: SymbolId, sort: Sort, label: &str) -> Result<u32, AssignmentError> {
    let Sort::Type(t) = sort else {
        return Err(AssignmentError::Schema("integer-valued var symbol".into()));
    };
    mop.domain(t)
        .code_of(label)
        .ok_or_else(|| AssignmentError::UnknownElement {
            symbol: mop.symbol(sym).name.clone(),
            label: label.to_string(),
        })
}

fn tuple_index(
    mop: &Mop,
    sym: SymbolId,
    labels: &[String],
) -> Result<usize, AssignmentError> {
    let decl = mop.symbol(sym);
    if labels.len() != decl.arity() {
        return Err(AssignmentError::Arity(decl.name.clone()));
    }
    let dims = mop.dims(sym);
    let mut idx = 0usize;
    for ((label, sort), d) in labels.iter().zip(&decl.signature).zip(&dims) {
        idx = idx * d + code(mop, sym, *sort, label)? as usize;
    }
    Ok(idx)
}

pub fn read_assignment(mop: &Mop, text: &str) -> Result<Assignment, AssignmentError> {
    let root: Json = serde_json::from_str(text).map_err(|e| AssignmentError::Json(e.to_string()))?;
    let Json::Object(root) = root else {
        return Err(AssignmentError::Schema("top level must be an object".into()));
    };
    for key in root.keys() {
        match mop.vocabulary.symbol_id(key) {
            None => return Err(AssignmentError::UnknownSymbol(key.clone())),
            Some(s) if !mop.symbol(s).is_var() => return Err(AssignmentError::NotVar(key.clone())),
            _ => {}
        }
    }
    let mut a = Assignment::empty(mop);
    for sym in mop.var_symbols() {
        let decl = mop.symbol(sym);
        let Some(v) = root.get(&decl.name) else {
            return Err(AssignmentError::MissingSymbol(decl.name.clone()));
        };
        let n = mop.table_len(sym);
        match (decl.result, v) {
            (None, Json::Array(tuples)) => {
                for t in tuples {
                    let Json::Array(items) = t else {
                        return Err(AssignmentError::Schema(format!(
                            "tuples of `{}` must be arrays",
                            decl.name
                        )));
                    };
                    let labels = items
                        .iter()
                        .map(label_of)
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| AssignmentError::Schema("labels must be strings".into()))?;
                    let idx = tuple_index(mop, sym, &labels)?;
                    a.set_cell(sym, idx, 1);
                }
            }
            (Some(result), Json::Object(m)) => {
                let mut seen = vec![false; n];
                for (key, val) in m {
                    let labels: Vec<String> = if decl.arity() == 0 {
                        if !key.is_empty() {
                            return Err(AssignmentError::Arity(decl.name.clone()));
                        }
                        Vec::new()
                    } else {
                        key.split(',').map(|s| s.trim().to_string()).collect()
                    };
                    let idx = tuple_index(mop, sym, &labels)?;
                    let label = label_of(val)
                        .ok_or_else(|| AssignmentError::Schema("labels must be strings".into()))?;
                    a.set_cell(sym, idx, code(mop, sym, result, &label)? as i64);
                    seen[idx] = true;
                }
                if seen.iter().any(|s| !s) {
                    return Err(AssignmentError::Partial(decl.name.clone()));
                }
            }
            _ => {
                return Err(AssignmentError::Schema(format!(
                    "wrong JSON shape for `{}`",
                    decl.name
                )))
            }
        }
    }
    Ok(a)
}
