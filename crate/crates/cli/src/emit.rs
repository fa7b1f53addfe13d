//! CSV, JSON and SVG artifact writers.
//!
//! Floats in CSV use 17 significant digits, which round-trips every `f64`.
//! JSON uses the shortest round-tripping representation. Both carry the
//! effective configuration so an artifact alone reproduces its run.

use std::io::Write;

use eraser_core::analysis::{write_event_log, EventStream, JointTable};
use serde_json::json;

use crate::config::EffectiveConfig;
use crate::error::{CliError, CliResult};
use crate::scenario::{AxisKind, Pattern};
use crate::svg::{self, Chart, Style};

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

fn comment_block(config: &EffectiveConfig) -> String {
    config
        .to_toml()
        .lines()
        .map(|l| if l.is_empty() { "#\n".to_string() } else { format!("# {l}\n") })
        .collect()
}

fn ensure_nonempty(pattern: &Pattern) -> CliResult<()> {
    if pattern.probabilities.is_empty() || pattern.xs.len() != pattern.probabilities.len() {
        return Err(CliError::Validation("pattern is empty".into()));
    }
    Ok(())
}

fn axis_name(axis: AxisKind) -> &'static str {
    match axis {
        AxisKind::Detector => "detector",
        AxisKind::Position => "x",
    }
}

/// Config echo as `#` comments, a header row, then one row per detector or
/// bin: `index_or_x,probability,condition`.
pub fn emit_pattern_csv<W: Write>(mut out: W, pattern: &Pattern, config: &EffectiveConfig) -> CliResult<()> {
    ensure_nonempty(pattern)?;
    out.write_all(comment_block(config).as_bytes())?;
    writeln!(out, "{},probability,condition", axis_name(pattern.axis))?;
    for (&x, &p) in pattern.xs.iter().zip(&pattern.probabilities) {
        let x = match pattern.axis {
            AxisKind::Detector => format!("{}", x as usize),
            AxisKind::Position => sci(x),
        };
        writeln!(out, "{x},{},{}", sci(p), pattern.condition)?;
    }
    Ok(())
}

/// Reads the `(index_or_x, probability)` pairs back from a pattern CSV.
pub fn read_pattern_csv(text: &str) -> CliResult<Vec<(f64, f64)>> {
    let parse = |field: Option<&str>, line: usize| -> CliResult<f64> {
        field
            .and_then(|f| f.trim().parse().ok())
            .ok_or_else(|| CliError::Parse(format!("malformed CSV row at line {line}")))
    };
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty())
        .skip(1)
        .map(|(i, l)| {
            let mut fields = l.split(',');
            Ok((parse(fields.next(), i + 1)?, parse(fields.next(), i + 1)?))
        })
        .collect()
}

pub fn emit_pattern_json<W: Write>(mut out: W, pattern: &Pattern, config: &EffectiveConfig) -> CliResult<()> {
    ensure_nonempty(pattern)?;
    let doc = json!({
        "config": config.to_json(),
        "axis": axis_name(pattern.axis),
        "condition": pattern.condition,
        "index_or_x": pattern.xs,
        "probability": pattern.probabilities,
    });
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// The table as labelled rows, with marginals and mutual information.
pub fn emit_joint_json<W: Write>(mut out: W, table: &JointTable, config: &EffectiveConfig) -> CliResult<()> {
    let rows: Vec<&[f64]> = (0..table.rows()).map(|r| table.row(r)).collect();
    let doc = json!({
        "config": config.to_json(),
        "row_labels": table.row_labels,
        "col_labels": table.col_labels,
        "probabilities": rows,
        "row_marginals": table.row_marginals(),
        "col_marginals": table.col_marginals(),
        "mutual_information_bits": table.mutual_information(),
    });
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

pub fn emit_joint_csv<W: Write>(mut out: W, table: &JointTable, config: &EffectiveConfig) -> CliResult<()> {
    out.write_all(comment_block(config).as_bytes())?;
    writeln!(out, "row,col,probability")?;
    for (r, row_label) in table.row_labels.iter().enumerate() {
        for (c, col_label) in table.col_labels.iter().enumerate() {
            writeln!(out, "{row_label},{col_label},{}", sci(table.get(r, c)))?;
        }
    }
    Ok(())
}

pub fn emit_pattern_svg<W: Write>(mut out: W, pattern: &Pattern) -> CliResult<()> {
    ensure_nonempty(pattern)?;
    let (style, x_label) = match pattern.axis {
        AxisKind::Detector => (Style::Bars, "detector j"),
        AxisKind::Position => (Style::Line, "screen position x"),
    };
    let chart = Chart {
        title: pattern.title.clone(),
        x_label: x_label.into(),
        y_label: "probability".into(),
        style,
        xs: pattern.xs.clone(),
        ys: pattern.probabilities.clone(),
        categories: None,
    };
    out.write_all(svg::render(&chart).as_bytes())?;
    Ok(())
}

pub fn emit_joint_svg<W: Write>(mut out: W, table: &JointTable, title: &str) -> CliResult<()> {
    let mut categories = Vec::new();
    let mut ys = Vec::new();
    for (r, row_label) in table.row_labels.iter().enumerate() {
        for (c, col_label) in table.col_labels.iter().enumerate() {
            categories.push(format!("{row_label} {col_label}"));
            ys.push(table.get(r, c));
        }
    }
    let chart = Chart {
        title: title.into(),
        x_label: "joint outcome".into(),
        y_label: "probability".into(),
        style: Style::Bars,
        xs: (0..ys.len()).map(|i| i as f64).collect(),
        ys,
        categories: Some(categories),
    };
    out.write_all(svg::render(&chart).as_bytes())?;
    Ok(())
}

pub fn emit_event_log<W: Write>(out: W, events: EventStream) -> CliResult<()> {
    write_event_log(out, events)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Format, Kind, Parameters};

    fn config() -> EffectiveConfig {
        EffectiveConfig { kind: Kind::Nchannel, format: Format::Csv, parameters: Parameters { n: Some(4), ..Default::default() } }
    }

    fn pattern(ps: Vec<f64>) -> Pattern {
        Pattern {
            axis: AxisKind::Position,
            xs: (0..ps.len()).map(|i| -1.5 + i as f64 / 3.0).collect(),
            probabilities: ps,
            condition: "plus",
            title: "t".into(),
        }
    }

    #[test]
    fn csv_round_trips_exactly() {
        let ps = vec![0.1, 1.0 / 3.0, 2.0f64.sqrt() / 7.0, 1e-300, 0.0];
        let p = pattern(ps.clone());
        let mut buf = Vec::new();
        emit_pattern_csv(&mut buf, &p, &config()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# kind = \"nchannel\"\n"));
        let back = read_pattern_csv(&text).unwrap();
        for ((x, v), (ex, ev)) in back.iter().zip(p.xs.iter().zip(&ps)) {
            assert_eq!(x.to_bits(), ex.to_bits());
            assert_eq!(v.to_bits(), ev.to_bits());
        }
    }

    #[test]
    fn empty_pattern_is_rejected() {
        let p = pattern(vec![]);
        for result in [
            emit_pattern_csv(Vec::new(), &p, &config()),
            emit_pattern_json(Vec::new(), &p, &config()),
            emit_pattern_svg(Vec::new(), &p),
        ] {
            assert!(matches!(result, Err(CliError::Validation(_))));
        }
    }
}
