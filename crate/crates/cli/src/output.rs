//! Report records and their CSV / JSON encodings.
//!
//! JSON documents are a single object with keys in this order:
//! `metadata` (`version`, `subcommand`, `rng`, `seed`, `parameters`) then
//! `data`. Inside `data`, keys follow the field order of the record structs
//! below. CSV output is a header row followed by data rows, comma separated,
//! `\n` terminated.

use std::fmt;
use std::io::{self, Read, Write};

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::args::Format;

/// A float rounded to 12 significant digits on output.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Num(pub f64);

impl Num {
    pub fn rounded(self) -> f64 {
        if !self.0.is_finite() || self.0 == 0.0 {
            return self.0;
        }
        format!("{:.11e}", self.0).parse().unwrap_or(self.0)
    }
}

impl From<f64> for Num {
    fn from(v: f64) -> Self {
        Num(v)
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.rounded();
        if v == 0.0 {
            return f.write_str("0");
        }
        if v.is_finite() && (1e-5..1e15).contains(&v.abs()) {
            write!(f, "{v}")
        } else {
            write!(f, "{v:e}")
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = self.rounded();
        if v.is_finite() {
            s.serialize_f64(v)
        } else {
            s.serialize_none()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub version: &'static str,
    pub subcommand: &'static str,
    pub rng: &'static str,
    pub seed: Option<u64>,
    pub parameters: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct FringeRow {
    pub phi: Num,
    pub p_plus: Num,
    pub p_minus: Num,
    pub p_other: Num,
    pub surviving_fraction: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitSummary {
    pub period: Num,
    pub period_std_err: Num,
    pub visibility: Num,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct FringeData {
    pub rows: Vec<FringeRow>,
    pub fit: Option<FitSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub eta: Num,
    pub visibility: Num,
    pub coherence: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountRow {
    pub n_a2: usize,
    pub n_b2: usize,
    pub count: u64,
    pub frequency: Num,
    pub probability: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignRecord {
    pub name: String,
    pub wavelength: Num,
    pub aperture: Num,
    pub photons: u32,
    pub metadata: std::collections::BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolutionPair {
    pub baseline: Num,
    pub miniaturized: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRecord {
    pub baseline: DesignRecord,
    pub miniaturized: DesignRecord,
    pub resolutions: ResolutionPair,
    pub aperture_ratio: Num,
    pub mass_factor: Num,
}

impl From<&noonsim::sizing::SensorDesign> for DesignRecord {
    fn from(d: &noonsim::sizing::SensorDesign) -> Self {
        DesignRecord {
            name: d.name.clone(),
            wavelength: Num(d.wavelength),
            aperture: Num(d.aperture),
            photons: d.photons,
            metadata: d.metadata.clone(),
        }
    }
}

impl From<&noonsim::sizing::DesignComparison> for ComparisonRecord {
    fn from(c: &noonsim::sizing::DesignComparison) -> Self {
        ComparisonRecord {
            baseline: (&c.baseline).into(),
            miniaturized: (&c.miniaturized).into(),
            resolutions: ResolutionPair {
                baseline: Num(c.resolutions.baseline),
                miniaturized: Num(c.resolutions.miniaturized),
            },
            aperture_ratio: Num(c.aperture_ratio),
            mass_factor: Num(c.mass_factor),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LiteData {
    pub comparison: ComparisonRecord,
    pub wavelengths: Vec<ComparisonRecord>,
    pub table: Vec<TableRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub field: String,
    pub baseline: String,
    pub miniaturized: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Data {
    Fringe(FringeData),
    LossSweep(Vec<SweepRow>),
    Mc(Vec<CountRow>),
    Size(ComparisonRecord),
    Lite(LiteData),
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub metadata: Metadata,
    pub data: Data,
}

/// Header plus string cells; the CSV view of a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Table, csv::Error> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let header = rdr.headers()?.iter().map(String::from).collect();
        let rows = rdr
            .records()
            .map(|r| r.map(|rec| rec.iter().map(String::from).collect()))
            .collect::<Result<_, _>>()?;
        Ok(Table { header, rows })
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Parses one column as floats; `None` if absent or non-numeric.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        self.rows.iter().map(|r| r.get(i)?.parse().ok()).collect()
    }

    pub fn write_csv<W: Write>(&self, sink: W) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()
    }
}

fn s(v: impl ToString) -> String {
    v.to_string()
}

impl Data {
    pub fn to_table(&self) -> Table {
        match self {
            Data::Fringe(d) => {
                let mut t = Table::new(&["phi", "p_plus", "p_minus"]);
                for r in &d.rows {
                    t.push(vec![s(r.phi), s(r.p_plus), s(r.p_minus)]);
                }
                t
            }
            Data::LossSweep(rows) => {
                let mut t = Table::new(&["n", "eta", "visibility", "coherence"]);
                for r in rows {
                    t.push(vec![s(r.n), s(r.eta), s(r.visibility), s(r.coherence)]);
                }
                t
            }
            Data::Mc(rows) => {
                let mut t = Table::new(&["n_a2", "n_b2", "count", "frequency", "probability"]);
                for r in rows {
                    t.push(vec![s(r.n_a2), s(r.n_b2), s(r.count), s(r.frequency), s(r.probability)]);
                }
                t
            }
            Data::Size(c) => {
                let mut t = Table::new(&[
                    "name",
                    "wavelength",
                    "aperture",
                    "n",
                    "miniaturized_aperture",
                    "baseline_resolution",
                    "miniaturized_resolution",
                    "aperture_ratio",
                    "mass_factor",
                ]);
                t.push(vec![
                    c.baseline.name.clone(),
                    s(c.baseline.wavelength),
                    s(c.baseline.aperture),
                    s(c.miniaturized.photons),
                    s(c.miniaturized.aperture),
                    s(c.resolutions.baseline),
                    s(c.resolutions.miniaturized),
                    s(c.aperture_ratio),
                    s(c.mass_factor),
                ]);
                t
            }
            Data::Lite(d) => {
                let c = &d.comparison;
                let mut t = Table::new(&["field", c.baseline.name.as_str(), c.miniaturized.name.as_str()]);
                for r in &d.table {
                    t.push(vec![r.field.clone(), r.baseline.clone(), r.miniaturized.clone()]);
                }
                t.push(vec![s("aperture_m"), s(c.baseline.aperture), s(c.miniaturized.aperture)]);
                t.push(vec![s("photons"), s(c.baseline.photons), s(c.miniaturized.photons)]);
                t.push(vec![s("aperture_ratio"), s(Num(1.0)), s(c.aperture_ratio)]);
                t.push(vec![s("mass_factor"), s(Num(1.0)), s(c.mass_factor)]);
                for w in &d.wavelengths {
                    let nm = Num(w.baseline.wavelength.0 * 1e9);
                    t.push(vec![
                        format!("resolution_rad_{nm}nm"),
                        s(w.resolutions.baseline),
                        s(w.resolutions.miniaturized),
                    ]);
                }
                t
            }
        }
    }
}

/// Writes `report` to `sink`; returns the number of bytes written.
pub fn emit<W: Write>(report: &Report, format: Format, sink: &mut W) -> io::Result<usize> {
    let bytes = render(report, format)?;
    sink.write_all(&bytes)?;
    Ok(bytes.len())
}

pub fn render(report: &Report, format: Format) -> io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => report.data.to_table().write_csv(&mut buf)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, report)?;
            buf.push(b'\n');
        }
    }
    Ok(buf)
}
