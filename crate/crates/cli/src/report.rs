use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::ExperimentConfig;

pub const SCHEMA: u32 = 1;

/// Keys holding timings; dropped from [`Report::body`].
const TIMING_KEYS: [&str; 2] = ["elapsed_ms", "wall_time_ms"];

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub passes: usize,
    pub failures: usize,
    pub counterexamples: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub statement: String,
    pub config: ExperimentConfig,
    pub records: Vec<Value>,
    pub summary: Summary,
    pub wall_time_ms: f64,
}

impl Report {
    pub fn success(&self) -> bool {
        self.summary.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report without timing fields; identical configs give identical
    /// bodies.
    pub fn body(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        strip_timings(&mut v);
        v
    }

    /// Records of one check.
    pub fn check<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Value> + 'a {
        self.records.iter().filter(move |r| r["check"] == name)
    }

    /// Per-(check, case) pass and failure counts, in first-seen order.
    pub fn tally(&self) -> Vec<(String, String, usize, usize)> {
        let mut order = Vec::new();
        let mut counts: BTreeMap<(String, String), (usize, usize)> = BTreeMap::new();
        for r in &self.records {
            let key = (
                r["check"].as_str().unwrap_or_default().to_string(),
                r["case"].as_str().unwrap_or_default().to_string(),
            );
            let entry = counts.entry(key.clone()).or_insert_with(|| {
                order.push(key.clone());
                (0, 0)
            });
            if r["pass"] == true {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
        }
        order
            .into_iter()
            .map(|k| {
                let (p, f) = counts[&k];
                (k.0, k.1, p, f)
            })
            .collect()
    }

    /// Summary as CSV: one row per check and case, then a total row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["command", "check", "case", "seed", "passes", "failures"]).unwrap();
        let seed = self.config.seed.to_string();
        for (check, case, p, f) in self.tally() {
            w.write_record([&self.command, &check, &case, &seed, &p.to_string(), &f.to_string()]).unwrap();
        }
        w.write_record([
            self.command.as_str(),
            "total",
            "",
            &seed,
            &self.summary.passes.to_string(),
            &self.summary.failures.to_string(),
        ])
        .unwrap();
        String::from_utf8(w.into_inner().unwrap()).expect("csv is utf-8")
    }
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for k in TIMING_KEYS {
                map.remove(k);
            }
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

/// Result of one sample: pass flag, fields for the record, and the full
/// input, kept only for counterexamples.
#[derive(Clone, Debug, Default)]
pub struct Sample {
    pub pass: bool,
    pub fields: Map<String, Value>,
    pub input: Option<Value>,
}

impl Sample {
    pub fn new(pass: bool) -> Self {
        Sample { pass, ..Default::default() }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.fields.insert(key.to_string(), serde_json::to_value(value).expect("field serializes"));
        self
    }

    pub fn input(mut self, value: Value) -> Self {
        self.input = Some(value);
        self
    }
}

/// Accumulates records in a fixed order.
#[derive(Debug, Default)]
pub struct Builder {
    pub records: Vec<Value>,
    pub summary: Summary,
    streams: u64,
}

impl Builder {
    /// Index of the next independent seed stream.
    pub fn next_stream(&mut self) -> u64 {
        self.streams += 1;
        self.streams
    }

    pub fn push(&mut self, check: &str, case: &str, seed: Option<u64>, sample: Result<Sample, plueckerlab::Error>) {
        let mut record = Map::new();
        record.insert("check".into(), check.into());
        record.insert("case".into(), case.into());
        if let Some(s) = seed {
            record.insert("seed".into(), s.into());
        }
        let (pass, input) = match sample {
            Ok(s) => {
                record.insert("pass".into(), s.pass.into());
                record.extend(s.fields);
                (s.pass, s.input)
            }
            Err(e) => {
                record.insert("pass".into(), false.into());
                record.insert("error".into(), e.to_string().into());
                (false, None)
            }
        };
        if pass {
            self.summary.passes += 1;
        } else {
            self.summary.failures += 1;
            let mut ce = record.clone();
            if let Some(i) = input {
                ce.insert("input".into(), i);
            }
            self.summary.counterexamples.push(Value::Object(ce));
        }
        self.records.push(Value::Object(record));
    }

    pub fn finish(self, config: &ExperimentConfig, wall_time_ms: f64) -> Report {
        Report {
            schema: SCHEMA,
            command: config.command.name().to_string(),
            statement: config.command.statement().to_string(),
            config: config.clone(),
            records: self.records,
            summary: self.summary,
            wall_time_ms,
        }
    }
}
