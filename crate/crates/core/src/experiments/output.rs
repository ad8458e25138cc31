use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use super::ExperimentResult;
use crate::bounds::BoundCurve;
use crate::error::Result;

pub const GRID_HEADER: &str = "d,r,t,n_unitaries,n_sets,mean_risk,sample_std,stderr,learner";
pub const BOUNDS_HEADER: &str = "kind,d,r,t,value,stderr";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// A float with 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty JSON whose floats carry 17 significant digits.
struct SigDigitsFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SigDigitsFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_float(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Canonical JSON text: two-space indentation, 17 significant digits,
/// trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigitsFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn grid_csv(res: &ExperimentResult) -> String {
    let mut out = format!("{GRID_HEADER}\n");
    let learner = res.config_echo.learner.as_str();
    for g in &res.grid {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{learner}",
            g.d,
            g.r,
            g.t,
            g.n_unitaries,
            g.n_sets,
            format_float(g.mean_risk),
            format_float(g.sample_std),
            format_float(g.stderr),
        );
    }
    out
}

/// One row per curve point; `stderr` is empty for closed-form kinds.
pub fn bounds_csv(curves: &[BoundCurve]) -> String {
    let mut out = format!("{BOUNDS_HEADER}\n");
    for c in curves {
        for (i, p) in c.points.iter().enumerate() {
            let stderr = c.mc_stderr.as_ref().map(|s| format_float(s[i])).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{stderr}",
                c.kind,
                c.d,
                c.r,
                p.t,
                format_float(p.value)
            );
        }
    }
    out
}

/// Writes `result.json` or `grid.csv` + `bounds.csv` into the configured
/// output directory, creating it if needed. Returns the written paths.
pub fn write_result(res: &ExperimentResult, format: OutputFormat) -> Result<Vec<PathBuf>> {
    write_result_to(res, format, Path::new(&res.config_echo.output_path))
}

pub fn write_result_to(res: &ExperimentResult, format: OutputFormat, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let files = match format {
        OutputFormat::Json => vec![("result.json", to_json_string(res)?)],
        OutputFormat::Csv => vec![("grid.csv", grid_csv(res)), ("bounds.csv", bounds_csv(&res.curves))],
    };
    files
        .into_iter()
        .map(|(name, text)| {
            let path = dir.join(name);
            fs::write(&path, text)?;
            Ok(path)
        })
        .collect()
}

pub fn read_result(path: &Path) -> Result<ExperimentResult> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
