//! Snapshot, series and Dyson CSV files.
//!
//! Floats are written in shortest round-trip form, so reading a file back
//! reproduces the values bit for bit. Lines starting with `#` are comments.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::diagnostics::TimeSeriesRecord;
use crate::dyson::DysonRun;
use crate::error::{Error, Result};
use crate::kernels::Regularization;
use crate::vortex_method::{Particle, ParticleSystem};

pub const SNAPSHOT_HEADER: &str = "r,z,xi0,volume";

/// `<dir>/snapshots/snap_00012.csv`.
pub fn snapshot_path(out_dir: &Path, index: usize) -> PathBuf {
    out_dir.join("snapshots").join(format!("snap_{index:05}.csv"))
}

pub fn write_snapshot<W: Write>(mut w: W, system: &ParticleSystem) -> Result<()> {
    writeln!(
        w,
        "# t={:?} epsilon={:?} length_scale={:?} reflections={}",
        system.time, system.reg.epsilon, system.length_scale, system.reflections
    )?;
    writeln!(w, "{SNAPSHOT_HEADER}")?;
    for p in &system.particles {
        writeln!(w, "{:?},{:?},{:?},{:?}", p.pos.r, p.pos.z, p.xi0, p.volume)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_snapshot(path: &Path, system: &ParticleSystem) -> Result<()> {
    write_snapshot(BufWriter::new(File::create(path)?), system)
}

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("snapshot line {line}: {msg}"))
}

/// Reads a snapshot. `epsilon` overrides the value recorded in the file.
pub fn read_snapshot<R: BufRead>(reader: R, epsilon: Option<f64>) -> Result<ParticleSystem> {
    let mut meta: Vec<(String, String)> = Vec::new();
    let mut particles = Vec::new();
    let mut header = false;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let n = i + 1;
        if let Some(c) = line.strip_prefix('#') {
            for kv in c.split_whitespace() {
                if let Some((k, v)) = kv.split_once('=') {
                    meta.push((k.to_string(), v.to_string()));
                }
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header {
            if line.trim() != SNAPSHOT_HEADER {
                return Err(bad(n, format!("expected header `{SNAPSHOT_HEADER}`")));
            }
            header = true;
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| bad(n, e))?;
        if vals.len() != 4 {
            return Err(bad(n, format!("expected 4 fields, found {}", vals.len())));
        }
        particles.push(Particle::new(vals[0], vals[1], vals[2], vals[3]));
    }
    if !header {
        return Err(Error::Input("snapshot has no header".into()));
    }
    let get = |key: &str| -> Result<Option<f64>> {
        meta.iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.parse::<f64>().map_err(|e| Error::Input(format!("snapshot {key}: {e}"))))
            .transpose()
    };
    let eps = match epsilon.or(get("epsilon")?) {
        Some(e) => e,
        None => return Err(Error::Input("snapshot records no epsilon; pass one explicitly".into())),
    };
    let scale = match get("length_scale")? {
        Some(s) => s,
        None => ParticleSystem::natural_length_scale(&particles),
    };
    let mut system = ParticleSystem::new(particles, Regularization::new(eps)?, scale)?;
    system.time = get("t")?.unwrap_or(0.0);
    system.reflections = get("reflections")?.unwrap_or(0.0) as u64;
    Ok(system)
}

pub fn load_snapshot(path: &Path, epsilon: Option<f64>) -> Result<ParticleSystem> {
    read_snapshot(BufReader::new(File::open(path)?), epsilon)
}

/// Streaming writer for `series.csv`.
pub struct SeriesWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl SeriesWriter<File> {
    pub fn create(path: &Path) -> Result<Self> {
        Ok(Self::new(File::create(path)?))
    }
}

impl<W: Write> SeriesWriter<W> {
    pub fn new(w: W) -> Self {
        Self {
            inner: csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w),
        }
    }

    /// Appends a row and flushes, so a later failure leaves complete rows.
    pub fn push(&mut self, record: &TimeSeriesRecord) -> Result<()> {
        self.inner.serialize(record)?;
        self.inner.flush()?;
        Ok(())
    }
}

pub fn read_series(path: &Path) -> Result<Vec<TimeSeriesRecord>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// `(t, column)` pairs from any CSV with a header row and a `t` column.
pub fn read_column(path: &Path, column: &str) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Input(format!("no column `{name}` in {}", path.display())))
    };
    let ti = find("t")?;
    let ci = find(column)?;
    let mut out = Vec::new();
    for (n, row) in rdr.records().enumerate() {
        let row = row?;
        let parse = |i: usize| -> Result<f64> {
            row.get(i)
                .unwrap_or("")
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Input(format!("row {}: {e}", n + 2)))
        };
        out.push((parse(ti)?, parse(ci)?));
    }
    Ok(out)
}

/// Dyson samples as `t,R,Z,a,uz_self`, with a `# collision=true` footer when
/// the run ended on the plane.
pub fn write_dyson<W: Write>(mut w: W, run: &DysonRun) -> Result<()> {
    {
        let mut csv = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut w);
        if run.samples.is_empty() {
            csv.write_record(["t", "R", "Z", "a", "uz_self"])?;
        }
        for s in &run.samples {
            csv.serialize(s)?;
        }
        csv.flush()?;
    }
    if run.collision {
        writeln!(w, "# collision=true")?;
    }
    w.flush()?;
    Ok(())
}
