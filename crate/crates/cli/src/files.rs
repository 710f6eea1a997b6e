//! CSV formats.
//!
//! Both formats are UTF-8 with `#`-prefixed header comments (the full
//! resolved configuration), one header row, and `.`-decimal numbers
//! printed in shortest round-trip form, so parse → re-serialize is
//! byte-identical.
//!
//! ```text
//! fringe: phase_rad,value
//! counts: phase_rad,duration_s,raw_counts,background_counts
//! ```

use std::path::Path;

use triphoton_core::experiment::CountRecord;
use triphoton_core::FringeSeries;

use crate::CliError;

pub const FRINGE_HEADER: &str = "phase_rad,value";
pub const COUNTS_HEADER: &str = "phase_rad,duration_s,raw_counts,background_counts";

/// A parsed (or about-to-be-written) counts file: comment lines plus
/// records.
#[derive(Debug, Clone, PartialEq)]
pub struct CountsFile {
    pub comments: Vec<String>,
    pub records: Vec<CountRecord>,
}

impl CountsFile {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for comment in &self.comments {
            out.push_str("# ");
            out.push_str(comment);
            out.push('\n');
        }
        out.push_str(COUNTS_HEADER);
        out.push('\n');
        for record in &self.records {
            out.push_str(&format!(
                "{},{},{},{}\n",
                record.phase, record.duration, record.raw_counts, record.background_estimate
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Result<CountsFile, CliError> {
        let mut comments = Vec::new();
        let mut records = Vec::new();
        let mut saw_header = false;
        for (index, line) in text.lines().enumerate() {
            let row = index + 1;
            if let Some(comment) = line.strip_prefix('#') {
                comments.push(comment.trim_start().to_string());
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            if !saw_header {
                if line != COUNTS_HEADER {
                    return Err(CliError::validation(format!(
                        "row {row}: expected header '{COUNTS_HEADER}', found '{line}'"
                    )));
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(CliError::validation(format!(
                    "row {row}: expected 4 comma-separated fields, found {}",
                    fields.len()
                )));
            }
            let parse_f64 = |name: &str, value: &str| {
                value.parse::<f64>().map_err(|_| {
                    CliError::validation(format!("row {row}: invalid {name} '{value}'"))
                })
            };
            let raw_counts = fields[2].parse::<u64>().map_err(|_| {
                CliError::validation(format!("row {row}: invalid raw_counts '{}'", fields[2]))
            })?;
            records.push(CountRecord {
                phase: parse_f64("phase_rad", fields[0])?,
                duration: parse_f64("duration_s", fields[1])?,
                raw_counts,
                background_estimate: parse_f64("background_counts", fields[3])?,
            });
        }
        if !saw_header {
            return Err(CliError::validation("no header row found"));
        }
        Ok(CountsFile { comments, records })
    }
}

/// A parsed fringe file.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeFile {
    pub comments: Vec<String>,
    pub phases: Vec<f64>,
    pub values: Vec<f64>,
}

impl FringeFile {
    pub fn from_series(series: &FringeSeries, comments: Vec<String>) -> FringeFile {
        FringeFile {
            comments,
            phases: series.phases().to_vec(),
            values: series.values().to_vec(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for comment in &self.comments {
            out.push_str("# ");
            out.push_str(comment);
            out.push('\n');
        }
        out.push_str(FRINGE_HEADER);
        out.push('\n');
        for (phase, value) in self.phases.iter().zip(&self.values) {
            out.push_str(&format!("{phase},{value}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<FringeFile, CliError> {
        let mut comments = Vec::new();
        let mut phases = Vec::new();
        let mut values = Vec::new();
        let mut saw_header = false;
        for (index, line) in text.lines().enumerate() {
            let row = index + 1;
            if let Some(comment) = line.strip_prefix('#') {
                comments.push(comment.trim_start().to_string());
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            if !saw_header {
                if line != FRINGE_HEADER {
                    return Err(CliError::validation(format!(
                        "row {row}: expected header '{FRINGE_HEADER}', found '{line}'"
                    )));
                }
                saw_header = true;
                continue;
            }
            let (phase, value) = line.split_once(',').ok_or_else(|| {
                CliError::validation(format!("row {row}: expected 2 comma-separated fields"))
            })?;
            let parse = |name: &str, text: &str| {
                text.parse::<f64>().map_err(|_| {
                    CliError::validation(format!("row {row}: invalid {name} '{text}'"))
                })
            };
            phases.push(parse("phase_rad", phase)?);
            values.push(parse("value", value)?);
        }
        if !saw_header {
            return Err(CliError::validation("no header row found"));
        }
        Ok(FringeFile {
            comments,
            phases,
            values,
        })
    }
}

/// Which of the two CSV formats a file contains, judged by its header
/// row.
pub enum ParsedInput {
    Fringe(FringeFile),
    Counts(CountsFile),
}

pub fn parse_input(text: &str) -> Result<ParsedInput, CliError> {
    let header = text
        .lines()
        .find(|line| !line.starts_with('#') && !line.trim().is_empty());
    match header {
        Some(COUNTS_HEADER) => Ok(ParsedInput::Counts(CountsFile::parse(text)?)),
        Some(FRINGE_HEADER) => Ok(ParsedInput::Fringe(FringeFile::parse(text)?)),
        Some(other) => Err(CliError::validation(format!(
            "unrecognized header row '{other}'"
        ))),
        None => Err(CliError::validation("empty input file")),
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|err| {
                CliError::validation(format!("cannot create {}: {err}", parent.display()))
            })?;
        }
    }
    std::fs::write(path, text)
        .map_err(|err| CliError::validation(format!("cannot write {}: {err}", path.display())))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|err| CliError::validation(format!("cannot read {}: {err}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_counts() -> CountsFile {
        CountsFile {
            comments: vec!["scheme=asym".into(), "seed=7".into()],
            records: vec![
                CountRecord {
                    phase: 0.0,
                    duration: 100.0,
                    raw_counts: 307,
                    background_estimate: 120.0,
                },
                CountRecord {
                    phase: 0.25132741228718347,
                    duration: 100.0,
                    raw_counts: 0,
                    background_estimate: 120.0,
                },
            ],
        }
    }

    #[test]
    fn counts_round_trip_is_byte_identical() {
        let file = sample_counts();
        let text = file.to_csv();
        let reparsed = CountsFile::parse(&text).unwrap();
        assert_eq!(reparsed, file);
        assert_eq!(reparsed.to_csv(), text);
    }

    #[test]
    fn fringe_round_trip_is_byte_identical() {
        let file = FringeFile {
            comments: vec!["model=ideal".into()],
            phases: vec![0.0, 0.8975979010256552],
            values: vec![0.7901234567901234, 0.0316049382716049],
        };
        let text = file.to_csv();
        let reparsed = FringeFile::parse(&text).unwrap();
        assert_eq!(reparsed, file);
        assert_eq!(reparsed.to_csv(), text);
    }

    #[test]
    fn malformed_rows_report_their_line_number() {
        let text = "# comment\nphase_rad,duration_s,raw_counts,background_counts\n0,100,xyz,120\n";
        let err = CountsFile::parse(text).unwrap_err();
        let message = format!("{err}");
        assert!(message.contains("row 3"), "{message}");
        assert!(message.contains("raw_counts"), "{message}");
    }

    #[test]
    fn format_detection_reads_the_header() {
        let counts_text = sample_counts().to_csv();
        assert!(matches!(
            parse_input(&counts_text).unwrap(),
            ParsedInput::Counts(_)
        ));
        let fringe_text = "phase_rad,value\n0,1\n";
        assert!(matches!(
            parse_input(fringe_text).unwrap(),
            ParsedInput::Fringe(_)
        ));
        assert!(parse_input("a,b,c\n").is_err());
    }
}
