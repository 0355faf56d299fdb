//! JSON serialization of field expansions and verifier reports.
//!
//! The layout is stable and sorted so that serializing, parsing and
//! serializing again is byte-identical. Monomials are arrays of
//! [node, orbit, q, t, exp] rows; coefficients keep their factored
//! shape; edge and violation entries refer to monomials by their index
//! in the table.

use std::fmt;

use serde_json::{json, Map, Value};
use wqt_core::cartan::LieType;
use wqt_core::coeff::{CoeffError, Factor, FactoredCoeff};
use wqt_core::engine::{
    CapKind, Defect, Edge, FieldDataError, FieldExpansion, Status, TableEntry,
};
use wqt_core::monomial::{Monomial, Spectral};
use wqt_core::verifier::ResidueReport;

#[derive(Debug)]
pub enum JsonError {
    Syntax(String),
    /// A structurally valid document with an impossible field value.
    Shape(String),
    Coefficient(CoeffError),
    FieldData(FieldDataError),
}

impl fmt::Display for JsonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JsonError::Syntax(msg) => write!(f, "malformed JSON: {}", msg),
            JsonError::Shape(msg) => write!(f, "unexpected JSON shape: {}", msg),
            JsonError::Coefficient(e) => write!(f, "bad coefficient: {}", e),
            JsonError::FieldData(e) => write!(f, "inconsistent field data: {}", e),
        }
    }
}

impl std::error::Error for JsonError {}

fn monomial_value(m: &Monomial) -> Value {
    Value::Array(
        m.entries()
            .map(|(n, a, e)| json!([n, a.orbit, a.qexp, a.texp, e]))
            .collect(),
    )
}

fn factor_value(f: &Factor) -> Value {
    let mut row = vec![f.qexp, f.texp];
    for &(o, e) in &f.kappa {
        row.push(o as i64);
        row.push(e);
    }
    json!(row)
}

fn coeff_value(c: &FactoredCoeff) -> Value {
    json!({
        "sign": c.sign(),
        "q": c.qpref(),
        "t": c.tpref(),
        "orbits": c.orbit_pref().iter().map(|&(o, e)| json!([o, e])).collect::<Vec<_>>(),
        "num": c.num_factors().iter().map(factor_value).collect::<Vec<_>>(),
        "den": c.den_factors().iter().map(factor_value).collect::<Vec<_>>(),
    })
}

fn status_fields(status: Status, top: &mut Map<String, Value>) {
    let text = match status {
        Status::Completed => "completed",
        Status::Failed => "failed",
        Status::Truncated(_) => "truncated",
    };
    top.insert("status".into(), json!(text));
    if let Status::Truncated(cap) = status {
        let cap = match cap {
            CapKind::Height => "height",
            CapKind::Monomials => "monomials",
        };
        top.insert("cap".into(), json!(cap));
    }
}

/// Serializes a run. Keys appear in sorted order; the document ends
/// with a newline.
pub fn to_json(fe: &FieldExpansion) -> String {
    let mut top = Map::new();
    top.insert("lie_type".into(), json!(fe.lie_type().to_string()));
    top.insert("rank".into(), json!(fe.lie_type().rank()));
    status_fields(fe.status(), &mut top);
    top.insert("start".into(), monomial_value(fe.start()));
    top.insert(
        "monomials".into(),
        Value::Array(
            fe.entries()
                .iter()
                .map(|e| {
                    json!({
                        "m": monomial_value(&e.monomial),
                        "height": e.height,
                        "coeff": coeff_value(&e.coeff),
                    })
                })
                .collect(),
        ),
    );
    top.insert(
        "edges".into(),
        Value::Array(
            fe.edges()
                .iter()
                .map(|e| {
                    json!({
                        "from": e.from,
                        "to": e.to,
                        "node": e.node,
                        "orbit": e.color.orbit,
                        "q": e.color.qexp,
                        "t": e.color.texp,
                    })
                })
                .collect(),
        ),
    );
    top.insert(
        "witnesses".into(),
        Value::Array(
            fe.witnesses()
                .iter()
                .map(|(m, d)| {
                    let defect = match d {
                        Defect::NonGeneric => "non-generic",
                        Defect::NonRegular => "non-regular",
                    };
                    json!({"m": monomial_value(m), "defect": defect})
                })
                .collect(),
        ),
    );
    let mut text = serde_json::to_string_pretty(&Value::Object(top)).expect("serializable");
    text.push('\n');
    text
}

/// The verifier report for a run, with violations pointing at table
/// indices of the run they were found in.
pub fn report_to_json(fe: &FieldExpansion, report: &ResidueReport) -> String {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            let idx = fe.position(&v.monomial);
            json!({
                "monomial": idx,
                "node": v.node,
                "spectral": [v.spectral.orbit, v.spectral.qexp, v.spectral.texp],
                "reason": v.reason.to_string(),
            })
        })
        .collect();
    let doc = json!({
        "pairings": report.pairings.len(),
        "violations": violations,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    text
}

fn shape(msg: &str) -> JsonError {
    JsonError::Shape(msg.into())
}

fn as_i64(v: &Value, what: &str) -> Result<i64, JsonError> {
    v.as_i64().ok_or_else(|| shape(what))
}

fn as_u64(v: &Value, what: &str) -> Result<u64, JsonError> {
    v.as_u64().ok_or_else(|| shape(what))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a [Value], JsonError> {
    v.as_array().map(Vec::as_slice).ok_or_else(|| shape(what))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value, JsonError> {
    obj.get(key)
        .ok_or_else(|| shape(&format!("missing key {:?}", key)))
}

fn parse_monomial(v: &Value) -> Result<Monomial, JsonError> {
    let rows = as_array(v, "monomial must be an array")?;
    let mut entries = Vec::with_capacity(rows.len());
    for row in rows {
        let row = as_array(row, "monomial row must be an array")?;
        if row.len() != 5 {
            return Err(shape("monomial row must have 5 entries"));
        }
        let node = as_u64(&row[0], "node must be a non-negative integer")? as usize;
        let orbit = as_u64(&row[1], "orbit must be a non-negative integer")? as u32;
        let q = as_i64(&row[2], "q exponent must be an integer")?;
        let t = as_i64(&row[3], "t exponent must be an integer")?;
        let exp = as_i64(&row[4], "exponent must be an integer")?;
        entries.push((node, Spectral::new(orbit, q, t), exp));
    }
    Ok(Monomial::from_entries(entries))
}

fn parse_factor(v: &Value) -> Result<Factor, JsonError> {
    let row = as_array(v, "factor must be an array")?;
    if row.len() < 2 || row.len() % 2 != 0 {
        return Err(shape("factor must be [q, t, orbit, exp, ...]"));
    }
    let qexp = as_i64(&row[0], "factor q exponent")?;
    let texp = as_i64(&row[1], "factor t exponent")?;
    let mut kappa = Vec::new();
    for pair in row[2..].chunks(2) {
        let o = as_u64(&pair[0], "kappa orbit")? as u32;
        let e = as_i64(&pair[1], "kappa exponent")?;
        kappa.push((o, e));
    }
    Ok(Factor { qexp, texp, kappa })
}

fn parse_coeff(v: &Value) -> Result<FactoredCoeff, JsonError> {
    let sign = as_i64(field(v, "sign")?, "sign must be 1 or -1")?;
    if sign != 1 && sign != -1 {
        return Err(shape("sign must be 1 or -1"));
    }
    let q = as_i64(field(v, "q")?, "q prefactor")?;
    let t = as_i64(field(v, "t")?, "t prefactor")?;
    let mut orbits = Vec::new();
    for pair in as_array(field(v, "orbits")?, "orbits must be an array")? {
        let pair = as_array(pair, "orbit entry must be an array")?;
        if pair.len() != 2 {
            return Err(shape("orbit entry must be [orbit, exp]"));
        }
        let o = as_u64(&pair[0], "orbit id")? as u32;
        let e = as_i64(&pair[1], "orbit exponent")?;
        orbits.push((o, e));
    }
    let num = as_array(field(v, "num")?, "num must be an array")?
        .iter()
        .map(parse_factor)
        .collect::<Result<Vec<_>, _>>()?;
    let den = as_array(field(v, "den")?, "den must be an array")?
        .iter()
        .map(parse_factor)
        .collect::<Result<Vec<_>, _>>()?;
    FactoredCoeff::from_parts(sign as i8, q, t, orbits, num, den).map_err(JsonError::Coefficient)
}

fn parse_status(doc: &Value) -> Result<Status, JsonError> {
    let text = field(doc, "status")?
        .as_str()
        .ok_or_else(|| shape("status must be a string"))?;
    match text {
        "completed" => Ok(Status::Completed),
        "failed" => Ok(Status::Failed),
        "truncated" => {
            let cap = field(doc, "cap")?
                .as_str()
                .ok_or_else(|| shape("cap must be a string"))?;
            match cap {
                "height" => Ok(Status::Truncated(CapKind::Height)),
                "monomials" => Ok(Status::Truncated(CapKind::Monomials)),
                other => Err(shape(&format!("unknown cap {:?}", other))),
            }
        }
        other => Err(shape(&format!("unknown status {:?}", other))),
    }
}

/// Parses a document produced by to_json back into a field expansion.
pub fn from_json(text: &str) -> Result<FieldExpansion, JsonError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))?;
    let lie_type: LieType = field(&doc, "lie_type")?
        .as_str()
        .ok_or_else(|| shape("lie_type must be a string"))?
        .parse()
        .map_err(|e| shape(&format!("bad lie_type: {}", e)))?;
    let rank = as_u64(field(&doc, "rank")?, "rank must be a non-negative integer")? as usize;
    if rank != lie_type.rank() {
        return Err(shape("rank disagrees with lie_type"));
    }
    let status = parse_status(&doc)?;
    let start = parse_monomial(field(&doc, "start")?)?;

    let mut table = Vec::new();
    for row in as_array(field(&doc, "monomials")?, "monomials must be an array")? {
        table.push(TableEntry {
            monomial: parse_monomial(field(row, "m")?)?,
            coeff: parse_coeff(field(row, "coeff")?)?,
            height: as_u64(field(row, "height")?, "height must be a non-negative integer")?
                as u32,
        });
    }

    let mut edges = Vec::new();
    for row in as_array(field(&doc, "edges")?, "edges must be an array")? {
        edges.push(Edge {
            from: as_u64(field(row, "from")?, "edge from index")? as usize,
            to: as_u64(field(row, "to")?, "edge to index")? as usize,
            node: as_u64(field(row, "node")?, "edge node")? as usize,
            color: Spectral::new(
                as_u64(field(row, "orbit")?, "edge orbit")? as u32,
                as_i64(field(row, "q")?, "edge q exponent")?,
                as_i64(field(row, "t")?, "edge t exponent")?,
            ),
        });
    }

    let mut witnesses = Vec::new();
    for row in as_array(field(&doc, "witnesses")?, "witnesses must be an array")? {
        let defect = match field(row, "defect")?.as_str() {
            Some("non-generic") => Defect::NonGeneric,
            Some("non-regular") => Defect::NonRegular,
            _ => return Err(shape("defect must be non-generic or non-regular")),
        };
        witnesses.push((parse_monomial(field(row, "m")?)?, defect));
    }

    FieldExpansion::from_parts(lie_type, start, status, table, edges, witnesses)
        .map_err(JsonError::FieldData)
}
