//! Gait CSV: header `gc_percent,hip_deg,knee_deg`, one sample per line,
//! `#` comments, degrees on disk and radians in memory.

use std::fmt::Write as _;
use std::path::Path;

use super::{GaitSample, GaitTrajectory, CLOSURE_TOLERANCE_DEG};
use crate::body::JointLimits;
use crate::error::{Error, GaitRowError, Result};

pub const GAIT_CSV_HEADER: &str = "gc_percent,hip_deg,knee_deg";
const SOURCE_TAG: &str = "# source: ";
const SPEED_TAG: &str = "# nominal_speed_mps: ";

/// Formats with 6 significant digits, dropping trailing zeros.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("scientific formatting parses");
    rounded.to_string()
}

pub fn load_trajectory(path: impl AsRef<Path>) -> Result<GaitTrajectory> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut traj = trajectory_from_str(&text, &JointLimits::default())?;
    if traj.source.is_empty() {
        traj.source = path.display().to_string();
    }
    Ok(traj)
}

pub fn save_trajectory(traj: &GaitTrajectory, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, trajectory_to_string(traj)).map_err(|e| Error::io(path, e))
}

pub fn trajectory_to_string(traj: &GaitTrajectory) -> String {
    let mut out = String::new();
    if !traj.source.is_empty() {
        let _ = writeln!(out, "{SOURCE_TAG}{}", traj.source.replace('\n', " "));
    }
    if let Some(v) = traj.nominal_speed {
        let _ = writeln!(out, "{SPEED_TAG}{v}");
    }
    out.push_str(GAIT_CSV_HEADER);
    out.push('\n');
    for s in &traj.samples {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_significant(s.gc_percent, 6),
            format_significant(s.hip.to_degrees(), 6),
            format_significant(s.knee.to_degrees(), 6)
        );
    }
    out
}

/// Parses and validates gait CSV text. Row numbers in errors are file line numbers.
pub fn trajectory_from_str(text: &str, limits: &JointLimits) -> Result<GaitTrajectory> {
    let mut source = String::new();
    let mut nominal_speed = None;
    for line in text.lines().take_while(|l| l.trim_start().starts_with('#') || l.trim().is_empty()) {
        let line = line.trim();
        if let Some(s) = line.strip_prefix(SOURCE_TAG) {
            source = s.to_string();
        } else if let Some(v) = line.strip_prefix(SPEED_TAG) {
            nominal_speed = v.trim().parse().ok();
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    let header_line: Vec<&str> = header.iter().collect();
    if header_line.join(",") != GAIT_CSV_HEADER {
        return Err(Error::Gait(format!(
            "expected header `{GAIT_CSV_HEADER}`, found `{}`",
            header_line.join(",")
        )));
    }

    let columns: [&'static str; 3] = ["gc_percent", "hip_deg", "knee_deg"];
    let mut rows: Vec<(u64, [f64; 3])> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line());
        let mut vals = [0.0; 3];
        for (i, col) in columns.iter().enumerate() {
            let raw = record
                .get(i)
                .filter(|s| !s.is_empty())
                .ok_or(Error::GaitRow {
                    row,
                    kind: GaitRowError::MissingColumn(col),
                })?;
            vals[i] = raw.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::GaitRow {
                row,
                kind: GaitRowError::Parse {
                    column: col,
                    value: raw.to_string(),
                },
            })?;
        }
        rows.push((row, vals));
    }
    if rows.is_empty() {
        return Err(Error::TooFewSamples { min: 1, got: 0 });
    }

    let (first_row, first) = rows[0];
    if first[0] != 0.0 {
        return Err(Error::GaitRow {
            row: first_row,
            kind: GaitRowError::FirstNotZero(first[0]),
        });
    }
    let mut samples = Vec::with_capacity(rows.len());
    let mut previous = f64::NEG_INFINITY;
    let last_index = rows.len() - 1;
    for (idx, &(row, [gc, hip, knee])) in rows.iter().enumerate() {
        let err = |kind| Err(Error::GaitRow { row, kind });
        if !(0.0..=100.0).contains(&gc) {
            return err(GaitRowError::GcOutOfRange(gc));
        }
        if gc <= previous {
            return err(GaitRowError::NonMonotone { previous, value: gc });
        }
        previous = gc;
        for (joint, deg) in [("hip", hip), ("knee", knee)] {
            if !limits.contains_deg(joint, deg) {
                return err(GaitRowError::AngleOutOfLimits { joint, deg });
            }
        }
        if gc == 100.0 {
            // Closing sample: must repeat the 0% pose and is then dropped.
            debug_assert_eq!(idx, last_index);
            for (joint, a, b) in [("hip", hip, first[1]), ("knee", knee, first[2])] {
                let gap = (a - b).abs();
                if gap > CLOSURE_TOLERANCE_DEG {
                    return err(GaitRowError::NotPeriodic { joint, gap_deg: gap });
                }
            }
            continue;
        }
        samples.push(GaitSample {
            gc_percent: gc,
            hip: hip.to_radians(),
            knee: knee.to_radians(),
        });
    }
    Ok(GaitTrajectory {
        samples,
        source,
        nominal_speed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<GaitTrajectory> {
        trajectory_from_str(text, &JointLimits::default())
    }

    #[test]
    fn three_rows_constant() {
        let t = parse("gc_percent,hip_deg,knee_deg\n0,10,20\n50,10,20\n99,10,20\n").unwrap();
        assert_eq!(t.samples.len(), 3);
        assert!(t.samples.iter().all(|s| s.hip == 10f64.to_radians() && s.knee == 20f64.to_radians()));
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let t = parse("# a comment\ngc_percent,hip_deg,knee_deg\n# mid\n0,1,2\n\n40,1,2\n").unwrap();
        assert_eq!(t.samples.len(), 2);
    }

    #[test]
    fn non_monotone_names_row() {
        let e = parse("gc_percent,hip_deg,knee_deg\n0,0,5\n50,0,5\n40,0,5\n").unwrap_err();
        match e {
            Error::GaitRow {
                row: 4,
                kind: GaitRowError::NonMonotone { .. },
            } => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_column_names_row() {
        let e = parse("gc_percent,hip_deg,knee_deg\n0,0,5\n30,2\n").unwrap_err();
        assert!(matches!(
            e,
            Error::GaitRow {
                row: 3,
                kind: GaitRowError::MissingColumn("knee_deg")
            }
        ));
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(matches!(parse("gc,hip,knee\n0,0,0\n"), Err(Error::Gait(_))));
    }

    #[test]
    fn out_of_limit_angle_rejected() {
        let e = parse("gc_percent,hip_deg,knee_deg\n0,0,5\n30,0,-10\n").unwrap_err();
        assert!(matches!(
            e,
            Error::GaitRow {
                row: 3,
                kind: GaitRowError::AngleOutOfLimits { joint: "knee", .. }
            }
        ));
    }

    #[test]
    fn closure_checked_and_dropped() {
        let ok = parse("gc_percent,hip_deg,knee_deg\n0,20,5\n50,0,10\n100,20.4,5.2\n").unwrap();
        assert_eq!(ok.samples.len(), 2);
        let e = parse("gc_percent,hip_deg,knee_deg\n0,20,5\n50,0,10\n100,21,5\n").unwrap_err();
        assert!(matches!(
            e,
            Error::GaitRow {
                row: 4,
                kind: GaitRowError::NotPeriodic { joint: "hip", .. }
            }
        ));
    }

    #[test]
    fn first_sample_must_be_zero() {
        assert!(parse("gc_percent,hip_deg,knee_deg\n1,0,5\n").is_err());
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(12.345678, 6), "12.3457");
        assert_eq!(format_significant(-0.000123456789, 6), "-0.000123457");
        assert_eq!(format_significant(100.0, 6), "100");
        assert_eq!(format_significant(0.0, 6), "0");
    }

    #[test]
    fn source_and_speed_survive_save() {
        let mut t = parse("gc_percent,hip_deg,knee_deg\n0,1,2\n50,3,4\n").unwrap();
        t.source = "lab session".into();
        t.nominal_speed = Some(0.5);
        let back = parse(&trajectory_to_string(&t)).unwrap();
        assert_eq!(back, t);
    }
}
