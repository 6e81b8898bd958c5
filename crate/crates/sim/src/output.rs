use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::config::SweepConfig;
use crate::error::{Result, SimError};
use crate::record::{ResultRecord, CSV_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

impl Format {
    /// `.jsonl`/`.json` select JSON lines, anything else CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => Format::JsonLines,
            _ => Format::Csv,
        }
    }
}

fn write_error(path: &Path, e: impl std::fmt::Display) -> SimError {
    SimError::Write { path: path.to_path_buf(), message: e.to_string() }
}

/// Serializes records to any writer. Floats use the shortest round-trip form.
pub fn write_records<W: Write>(records: &[ResultRecord], format: Format, out: W) -> std::result::Result<(), String> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(CSV_HEADER).map_err(|e| e.to_string())?;
            for r in records {
                w.serialize(r).map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())
        }
        Format::JsonLines => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, r).map_err(|e| e.to_string())?;
                out.write_all(b"\n").map_err(|e| e.to_string())?;
            }
            out.flush().map_err(|e| e.to_string())
        }
    }
}

pub fn emit(records: &[ResultRecord], format: Format, path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(SimError::EmptyRecords);
    }
    let file = File::create(path).map_err(|source| SimError::Io { path: path.to_path_buf(), source })?;
    write_records(records, format, BufWriter::new(file)).map_err(|e| write_error(path, e))
}

/// A gnuplot script plotting `data` (a CSV written by [`emit`]).
pub fn gnuplot_script(config: &SweepConfig, data: &Path) -> String {
    let column = |name: &str| CSV_HEADER.iter().position(|h| *h == name).map_or(0, |i| i + 1);
    let file = data.file_name().map_or_else(|| data.display().to_string(), |f| f.to_string_lossy().into_owned());
    let x = config.axes[0].param.as_str();
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset key autotitle columnhead\n");
    s.push_str(&format!("set title '{}'\nset xlabel '{}'\n", config.name, x));
    if config.axes.len() == 1 {
        let forward = column("g2_f");
        let backward = column("g2_b");
        s.push_str("set logscale y\nset ylabel 'g2(0)'\n");
        s.push_str(&format!(
            "plot '{file}' using {}:{forward} with linespoints title 'forward', \\\n     '{file}' using {}:{backward} with linespoints title 'backward'\n",
            column(x),
            column(x)
        ));
    } else {
        let y = config.axes[1].param.as_str();
        let z = if config.direction.directions().len() == 2 { "eta_db" } else { "g2_f" };
        s.push_str(&format!("set ylabel '{y}'\nset view map\nset pm3d map\nset title '{} ({z})'\n", config.name));
        s.push_str(&format!("splot '{file}' using {}:{}:{} with pm3d notitle\n", column(x), column(y), column(z)));
    }
    s
}

pub fn write_gnuplot_sidecar(config: &SweepConfig, data: &Path) -> Result<std::path::PathBuf> {
    let mut path = data.as_os_str().to_owned();
    path.push(".gp");
    let path = std::path::PathBuf::from(path);
    std::fs::write(&path, gnuplot_script(config, data)).map_err(|source| SimError::Io { path: path.clone(), source })?;
    Ok(path)
}
