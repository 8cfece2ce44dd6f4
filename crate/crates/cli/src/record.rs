//! Result records and their JSON / CSV serialisation.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Quantity {
    pub value: f64,
    pub unit: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<bool>,
}

impl Quantity {
    pub fn new(value: f64, unit: &str) -> Self {
        Self {
            value,
            unit: unit.to_string(),
            threshold: None,
            passed: None,
            diagnostic: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

/// One row per grid point.
#[derive(Debug, Clone, Serialize, Default)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[(&str, &str)]) -> Self {
        Self {
            columns: columns
                .iter()
                .map(|(n, u)| Column {
                    name: n.to_string(),
                    unit: u.to_string(),
                })
                .collect(),
            rows: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool_version: String,
    pub constants_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rabi_from_intensity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Values quoted with the preset, for comparison.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub reference_values: BTreeMap<String, Quantity>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub flags: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub unix_time: u64,
    pub elapsed_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub command: String,
    pub inputs: BTreeMap<String, Quantity>,
    pub outputs: BTreeMap<String, Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub provenance: Provenance,
    /// Absent under `--no-timestamp` so records are byte-reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl ResultRecord {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            table: None,
            notes: Vec::new(),
            provenance: Provenance {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                constants_version: eit_core::constants::CONSTANTS_VERSION.to_string(),
                rabi_from_intensity: None,
                preset: None,
                seed: None,
                reference_values: BTreeMap::new(),
                flags: BTreeMap::new(),
            },
            timing: None,
        }
    }

    pub fn input(&mut self, name: &str, value: f64, unit: &str) {
        self.inputs.insert(name.to_string(), Quantity::new(value, unit));
    }

    pub fn output(&mut self, name: &str, value: f64, unit: &str) {
        self.outputs.insert(name.to_string(), Quantity::new(value, unit));
    }

    pub fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *w, self)?;
        writeln!(w)
    }

    /// Sweeps write their table; single records write one row per quantity.
    pub fn write_csv(&self, w: &mut dyn Write) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        if let Some(table) = &self.table {
            out.write_record(table.columns.iter().map(|c| format!("{} [{}]", c.name, c.unit)))?;
            for row in &table.rows {
                out.write_record(row.iter().map(|v| format!("{v:?}")))?;
            }
        } else {
            out.write_record(["section", "quantity", "value", "unit", "threshold", "passed"])?;
            for (section, map) in [("input", &self.inputs), ("output", &self.outputs)] {
                for (name, q) in map {
                    let threshold = q.threshold.map(|t| format!("{t:?}")).unwrap_or_default();
                    let passed = q.passed.map(|p| p.to_string()).unwrap_or_default();
                    out.write_record([
                        section,
                        name,
                        &format!("{:?}", q.value),
                        &q.unit,
                        &threshold,
                        &passed,
                    ])?;
                }
            }
        }
        out.flush()?;
        Ok(())
    }
}
