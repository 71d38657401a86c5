//! Record CSV format: header row, LF line endings, reals with 17 significant
//! digits, neighbour flags as 0/1.

use std::io::{Read, Write};

use crate::ek::EkRecord;
use crate::error::{Error, Result};
use crate::primes::NeighborFlags;

pub const HEADER: &str = "q,kappa,r,delta,gamma_plus,gamma,sg2p,sg2m,sg4p,sg4m";

fn b(x: bool) -> u8 {
    x as u8
}

/// One data line, newline included.
pub fn format_record(r: &EkRecord) -> String {
    let f = &r.flags;
    format!(
        "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{},{}\n",
        r.q,
        r.kappa,
        r.r,
        r.delta,
        r.gamma_plus,
        r.gamma,
        b(f.sg2p),
        b(f.sg2m),
        b(f.sg4p),
        b(f.sg4m)
    )
}

pub fn header_line() -> String {
    format!("{HEADER}\n")
}

pub fn write_records<W: Write>(mut w: W, records: &[EkRecord]) -> std::io::Result<()> {
    w.write_all(header_line().as_bytes())?;
    for r in records {
        w.write_all(format_record(r).as_bytes())?;
    }
    Ok(())
}

fn parse_flag(s: &str, line: u64, name: &str) -> Result<bool> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(Error::MalformedCsv {
            line,
            detail: format!("{name} must be 0 or 1, got {s:?}"),
        }),
    }
}

fn parse_real(s: &str, line: u64, name: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|_| Error::MalformedCsv {
        line,
        detail: format!("{name} is not a number: {s:?}"),
    })
}

/// Parse a record file; an empty input or a bad header is an error.
pub fn read_records<R: Read>(input: R) -> Result<Vec<EkRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rdr.headers().map_err(|e| Error::MalformedCsv {
        line: 1,
        detail: e.to_string(),
    })?;
    if header.is_empty() {
        return Err(Error::MalformedCsv {
            line: 1,
            detail: "empty file".into(),
        });
    }
    let got: Vec<&str> = header.iter().collect();
    let want: Vec<&str> = HEADER.split(',').collect();
    if got != want {
        return Err(Error::MalformedCsv {
            line: 1,
            detail: format!("unexpected header {:?}", got.join(",")),
        });
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| Error::MalformedCsv {
            line: e.position().map_or(0, |p| p.line()),
            detail: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != want.len() {
            return Err(Error::MalformedCsv {
                line,
                detail: format!("expected {} fields, found {}", want.len(), row.len()),
            });
        }
        let q = row[0].parse::<u64>().map_err(|_| Error::MalformedCsv {
            line,
            detail: format!("q is not an integer: {:?}", &row[0]),
        })?;
        out.push(EkRecord {
            q,
            kappa: parse_real(&row[1], line, "kappa")?,
            r: parse_real(&row[2], line, "r")?,
            delta: parse_real(&row[3], line, "delta")?,
            gamma_plus: parse_real(&row[4], line, "gamma_plus")?,
            gamma: parse_real(&row[5], line, "gamma")?,
            flags: NeighborFlags {
                sg2p: parse_flag(&row[6], line, "sg2p")?,
                sg2m: parse_flag(&row[7], line, "sg2m")?,
                sg4p: parse_flag(&row[8], line, "sg4p")?,
                sg4m: parse_flag(&row[9], line, "sg4m")?,
            },
        });
    }
    Ok(out)
}
