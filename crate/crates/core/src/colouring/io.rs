use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use super::{Colour, EdgeColouring};
use crate::error::{Error, Result};

const HEADER: [&str; 3] = ["u", "v", "colour"];

/// Writes `u,v,colour` rows with `u < v` in lexicographic order.
pub fn write_csv<W: Write>(c: &EdgeColouring, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(HEADER).map_err(csv_error)?;
    for (u, v, col) in c.edges() {
        out.write_record(&[u.to_string(), v.to_string(), col.to_string()]).map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv_path(c: &EdgeColouring, path: &Path) -> Result<()> {
    write_csv(c, std::fs::File::create(path)?)
}

/// Reads a colouring written by [`write_csv`]. Rows may come in any order
/// and with either endpoint first; every edge of `K_n` must appear once.
pub fn read_csv<R: Read>(r: R) -> Result<EdgeColouring> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let header = rdr.headers().map_err(csv_error)?.clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header u,v,colour, got {}", header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut entries: HashMap<(usize, usize), Colour> = HashMap::new();
    let mut n = 0;
    let mut last_line = 1;
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        last_line = line;
        let field = |i: usize| -> Result<u64> {
            record[i].parse().map_err(|_| Error::Parse {
                line,
                msg: format!("column {} is not a non-negative integer: {:?}", HEADER[i], &record[i]),
            })
        };
        let (u, v, col) = (field(0)? as usize, field(1)? as usize, field(2)?);
        if u == v {
            return Err(Error::Parse { line, msg: format!("loop at vertex {u}") });
        }
        let key = (u.min(v), u.max(v));
        if entries.insert(key, col).is_some() {
            return Err(Error::Parse { line, msg: format!("edge ({}, {}) listed twice", key.0, key.1) });
        }
        n = n.max(key.1 + 1);
    }
    let mut missing = None;
    let c = EdgeColouring::from_fn(n, |u, v| match entries.get(&(u, v)) {
        Some(&col) => col,
        None => {
            missing.get_or_insert((u, v));
            0
        }
    });
    if let Some((u, v)) = missing {
        return Err(Error::Parse { line: last_line + 1, msg: format!("edge ({u}, {v}) missing") });
    }
    Ok(c)
}

pub fn read_csv_path(path: &Path) -> Result<EdgeColouring> {
    read_csv(std::fs::File::open(path)?)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        kind => Error::Parse { line, msg: format!("{kind:?}") },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        let c = EdgeColouring::round_robin(6);
        let mut buf = Vec::new();
        write_csv(&c, &mut buf).unwrap();
        assert!(buf.starts_with(b"u,v,colour\n0,1,1\n"));
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, c);
        let mut again = Vec::new();
        write_csv(&back, &mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn reversed_endpoints_accepted() {
        let c = read_csv("u,v,colour\n1,0,5\n2,0,6\n2,1,7\n".as_bytes()).unwrap();
        assert_eq!((c.colour(0, 1), c.colour(0, 2), c.colour(1, 2)), (5, 6, 7));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = read_csv("u,v,colour\n0,1,5\n0,x,6\n".as_bytes()).unwrap_err();
        assert!(matches!(bad, Error::Parse { line: 3, .. }), "{bad:?}");
        let dup = read_csv("u,v,colour\n0,1,5\n1,0,6\n".as_bytes()).unwrap_err();
        assert!(matches!(dup, Error::Parse { line: 3, .. }));
        let missing = read_csv("u,v,colour\n0,1,5\n0,2,6\n".as_bytes()).unwrap_err();
        assert!(matches!(missing, Error::Parse { .. }));
        let header = read_csv("a,b,c\n0,1,5\n".as_bytes()).unwrap_err();
        assert!(matches!(header, Error::Parse { line: 1, .. }));
        let short = read_csv("u,v,colour\n0,1\n".as_bytes()).unwrap_err();
        assert!(matches!(short, Error::Parse { line: 2, .. }), "{short:?}");
    }
}
