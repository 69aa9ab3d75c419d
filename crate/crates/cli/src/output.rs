use std::collections::BTreeMap;
use std::io::Write;

use clap::ValueEnum;
use num_bigint::BigUint;
use qfrob::decomposition::{Bundle, DecompositionTable, SupportWindow};
use qfrob::oracle::DimTable;
use qfrob::tilting::TiltingVerdict;
use serde_json::{json, Value};

use crate::verify::Check;
use crate::Failure;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A result rendered either as one JSON document or as a CSV table.
pub struct Report {
    json: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

fn number(v: &BigUint) -> Value {
    Value::Number(v.to_string().parse().expect("decimal integers are valid JSON numbers"))
}

fn entries(map: &BTreeMap<i64, BigUint>) -> Value {
    Value::Array(map.iter().map(|(t, m)| json!({"t": t, "mult": number(m)})).collect())
}

impl Report {
    pub fn decomposition(table: &DecompositionTable, rank: bool, euler: bool) -> Self {
        let json = json!({
            "n": table.n,
            "p": table.p,
            "s": table.s,
            "bundle": table.bundle.to_string(),
            "a": table.a,
            "method": table.method.as_str(),
            "line": entries(&table.line),
            "spinor": entries(&table.spinor),
            "checks": {"rank": rank, "euler": euler},
        });
        let mut rows = Vec::new();
        for (kind, map) in [("line", &table.line), ("spinor", &table.spinor)] {
            for (t, m) in map {
                rows.push(vec![kind.to_string(), t.to_string(), m.to_string()]);
            }
        }
        Report {
            json,
            header: vec!["kind", "t", "mult"],
            rows,
        }
    }

    pub fn dims(table: &DimTable) -> Self {
        let json = serde_json::to_value(table).expect("tables serialize");
        let rows = table.dims.iter().map(|(d, v)| vec![d.to_string(), v.to_string()]).collect();
        Report {
            json,
            header: vec!["degree", "dim"],
            rows,
        }
    }

    pub fn support(n: u32, p: u64, s: u32, windows: &[(Bundle, Bundle, SupportWindow)]) -> Self {
        let list: Vec<Value> = windows
            .iter()
            .map(|(src, tgt, w)| {
                json!({"source": src.to_string(), "target": tgt.to_string(), "lo": w.lo, "hi": w.hi, "empty": w.is_empty()})
            })
            .collect();
        let rows = windows
            .iter()
            .map(|(src, tgt, w)| {
                vec![src.to_string(), tgt.to_string(), w.lo.to_string(), w.hi.to_string(), w.is_empty().to_string()]
            })
            .collect();
        Report {
            json: json!({"n": n, "p": p, "s": s, "windows": list}),
            header: vec!["source", "target", "lo", "hi", "empty"],
            rows,
        }
    }

    pub fn tilting(v: &TiltingVerdict) -> Self {
        let json = serde_json::to_value(v).expect("verdicts serialize");
        let mut rows = vec![vec!["tilting".to_string(), v.classified.to_string()]];
        rows.extend(v.obstructions.iter().map(|o| vec!["obstruction".to_string(), o.to_string()]));
        if v.unexplained {
            rows.push(vec!["obstruction".to_string(), "UNEXPLAINED".to_string()]);
        }
        rows.push(vec!["consistent".to_string(), v.consistent.to_string()]);
        rows.extend(v.summands.line_twists.iter().map(|t| vec!["line".to_string(), t.to_string()]));
        rows.extend(v.summands.spinor_twists.iter().map(|t| vec!["spinor".to_string(), t.to_string()]));
        Report {
            json,
            header: vec!["kind", "value"],
            rows,
        }
    }

    pub fn verify(checks: &[Check]) -> Self {
        let list: Vec<Value> = checks
            .iter()
            .map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail}))
            .collect();
        let rows = checks
            .iter()
            .map(|c| vec![c.name.clone(), c.pass.to_string(), c.detail.clone()])
            .collect();
        Report {
            json: json!({"passed": checks.iter().all(|c| c.pass), "checks": list}),
            header: vec!["check", "pass", "detail"],
            rows,
        }
    }

    pub fn projective(big_n: u32, p: u64, s: u32, a: i64, table: &BTreeMap<i64, BigUint>) -> Self {
        let rows = table.iter().map(|(t, m)| vec![t.to_string(), m.to_string()]).collect();
        Report {
            json: json!({"N": big_n, "p": p, "s": s, "a": a, "alpha": entries(table)}),
            header: vec!["t", "mult"],
            rows,
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
        match format {
            Format::Json => {
                let text = serde_json::to_string_pretty(&self.json).map_err(|e| Failure::Internal(e.to_string()))?;
                writeln!(out, "{text}")?;
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
                let internal = |e: csv::Error| Failure::Internal(e.to_string());
                w.write_record(&self.header).map_err(internal)?;
                for r in &self.rows {
                    w.write_record(r).map_err(internal)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}
