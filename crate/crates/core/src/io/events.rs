//! Plain-text event files: one `t x y p` record per line, sorted by `t`.
//!
//! Writers prepend a comment header carrying the sensor geometry and the
//! exposure:
//!
//! ```text
//! # ecir-events width=240 height=180 t_start=-0.06 t_end=0.06
//! -0.0591 12 7 1
//! ```
//!
//! Other lines starting with `#` and blank lines are ignored.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::repr::{Event, EventStream, ExposureInterval, Polarity};

const HEADER_TAG: &str = "ecir-events";

/// Sensor size and exposure that an event file refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamGeometry {
    pub width: usize,
    pub height: usize,
    pub interval: ExposureInterval,
}

impl StreamGeometry {
    pub fn of(stream: &EventStream) -> Self {
        Self {
            width: stream.width(),
            height: stream.height(),
            interval: stream.interval(),
        }
    }
}

/// Reads an event file. `geometry` overrides the file header; one of the two
/// must be present.
pub fn read_events(path: &Path, geometry: Option<StreamGeometry>) -> Result<EventStream> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_events(BufReader::new(file), path, geometry)
}

pub fn parse_events(
    reader: impl BufRead,
    path: &Path,
    geometry: Option<StreamGeometry>,
) -> Result<EventStream> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut header = None;
    let mut events = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let comment = comment.trim();
            if comment.starts_with(HEADER_TAG) {
                header = Some(parse_header(comment).map_err(|m| parse_err(lineno, m))?);
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(parse_err(
                lineno,
                format!("expected `t x y p`, found {} fields", fields.len()),
            ));
        }
        let t: f64 = fields[0]
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad timestamp `{}`", fields[0])))?;
        let x: u32 = fields[1]
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad x coordinate `{}`", fields[1])))?;
        let y: u32 = fields[2]
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad y coordinate `{}`", fields[2])))?;
        let p = fields[3]
            .parse::<i64>()
            .ok()
            .and_then(Polarity::from_sign)
            .ok_or_else(|| {
                parse_err(
                    lineno,
                    format!("polarity must be 1 or -1, got `{}`", fields[3]),
                )
            })?;
        if !t.is_finite() {
            return Err(parse_err(
                lineno,
                format!("non-finite timestamp `{}`", fields[0]),
            ));
        }
        events.push(Event::new(x, y, t, p));
    }
    let geometry = geometry.or(header).ok_or_else(|| Error::Format {
        path: path.to_path_buf(),
        message: "no geometry header; sensor size and exposure must be supplied".into(),
    })?;
    EventStream::new(events, geometry.interval, geometry.width, geometry.height)
}

fn parse_header(comment: &str) -> std::result::Result<StreamGeometry, String> {
    let mut width = None;
    let mut height = None;
    let mut start = None;
    let mut end = None;
    for token in comment.split_whitespace().skip(1) {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| format!("malformed header field `{token}`"))?;
        let bad = || format!("bad value for `{key}`: `{value}`");
        match key {
            "width" => width = Some(value.parse::<usize>().map_err(|_| bad())?),
            "height" => height = Some(value.parse::<usize>().map_err(|_| bad())?),
            "t_start" => start = Some(value.parse::<f64>().map_err(|_| bad())?),
            "t_end" => end = Some(value.parse::<f64>().map_err(|_| bad())?),
            _ => {}
        }
    }
    match (width, height, start, end) {
        (Some(width), Some(height), Some(s), Some(e)) => Ok(StreamGeometry {
            width,
            height,
            interval: ExposureInterval::new(s, e).map_err(|e| e.to_string())?,
        }),
        _ => Err("header needs width, height, t_start and t_end".into()),
    }
}

pub fn write_events(path: &Path, stream: &EventStream) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    format_events(&mut out, stream).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn format_events(out: &mut impl Write, stream: &EventStream) -> std::io::Result<()> {
    let iv = stream.interval();
    writeln!(
        out,
        "# {HEADER_TAG} width={} height={} t_start={} t_end={}",
        stream.width(),
        stream.height(),
        iv.start(),
        iv.end()
    )?;
    for e in stream.events() {
        writeln!(out, "{} {} {} {}", e.t, e.x, e.y, e.p.sign())?;
    }
    Ok(())
}
