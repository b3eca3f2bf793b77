use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

pub const SCHEMA: u32 = 1;

/// Report envelope: schema version, command, seed and the effective config
/// lead every report so a run can be replayed from its output alone.
pub fn envelope(command: &str, config: &RunConfig, pass: bool, body: Value) -> Value {
    let settings: BTreeMap<String, String> = config
        .render()
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let mut map = Map::new();
    map.insert("schema".into(), json!(SCHEMA));
    map.insert("command".into(), json!(command));
    map.insert("seed".into(), json!(config.seed));
    map.insert("pass".into(), json!(pass));
    map.insert("config".into(), json!(settings));
    if let Value::Object(body) = body {
        map.extend(body);
    }
    Value::Object(map)
}

fn csv_field(v: &Value) -> String {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        other => out.push((prefix.to_string(), other.clone())),
    }
}

/// CSV view of a report. A `rows` array of objects becomes a table; any
/// other report is flattened into `key,value` lines.
pub fn to_csv(report: &Value) -> String {
    let mut s = String::new();
    if let Some(Value::Array(rows)) = report.get("rows") {
        let header: Vec<String> = match rows.first() {
            Some(Value::Object(m)) => m.keys().cloned().collect(),
            _ => Vec::new(),
        };
        s.push_str(&header.join(","));
        s.push('\n');
        for row in rows {
            let cells: Vec<String> = header.iter().map(|k| csv_field(row.get(k).unwrap_or(&Value::Null))).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        return s;
    }
    let mut pairs = Vec::new();
    flatten("", report, &mut pairs);
    s.push_str("key,value\n");
    for (k, v) in pairs {
        s.push_str(&format!("{},{}\n", csv_field(&Value::String(k)), csv_field(&v)));
    }
    s
}

fn write_atomic(dir: &Path, name: &str, content: &str) -> Result<()> {
    let tmp = dir.join(format!(".{name}.tmp"));
    let dest = dir.join(name);
    fs::write(&tmp, content).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, &dest).with_context(|| format!("moving into {}", dest.display()))?;
    Ok(())
}

/// Write the report (in the configured format) and any SVGs to the output
/// directory, then echo the report on stdout.
pub fn emit(config: &RunConfig, stem: &str, report: &Value, svgs: &[(String, String)]) -> Result<()> {
    let text = match config.format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Csv => to_csv(report),
    };
    fs::create_dir_all(&config.out).with_context(|| format!("creating {}", config.out.display()))?;
    write_atomic(&config.out, &format!("{stem}.{}", config.format.name()), &text)?;
    if config.svg {
        for (name, svg) in svgs {
            write_atomic(&config.out, name, svg)?;
        }
    }
    print!("{text}");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_and_flat_csv() {
        let t = json!({"rows": [{"a": 1, "b": "x,y"}, {"a": 2, "b": "z"}]});
        assert_eq!(to_csv(&t), "a,b\n1,\"x,y\"\n2,z\n");
        let f = json!({"pass": true, "inner": {"k": 3}});
        assert_eq!(to_csv(&f), "key,value\ninner.k,3\npass,true\n");
    }
}
