//! The `GSET1` container: a four-line ASCII header followed by one byte per cell.
//!
//! ```text
//! GSET1
//! h=<decimal>
//! origin=<x> <y>
//! dims=<nx> <ny>
//! <nx*ny bytes, row-major, 0x00 or 0x01>
//! ```

use std::io::{Read, Write};

use super::{GridSet, Point};
use crate::error::{Error, Result};

const MAGIC: &str = "GSET1";

pub fn write_gset<W: Write>(e: &GridSet, mut w: W) -> Result<()> {
    let (nx, ny) = e.dims();
    let o = e.origin();
    write!(w, "{MAGIC}\nh={}\norigin={} {}\ndims={} {}\n", e.h(), o.x, o.y, nx, ny)?;
    let bytes: Vec<u8> = e.cells().iter().map(|&c| c as u8).collect();
    w.write_all(&bytes)?;
    Ok(())
}

pub fn read_gset<R: Read>(mut r: R) -> Result<GridSet> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    parse(&buf)
}

fn parse(buf: &[u8]) -> Result<GridSet> {
    let mut lines = Vec::with_capacity(4);
    let mut pos = 0;
    while lines.len() < 4 {
        let end = buf[pos..]
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::Parse("truncated GSET1 header".into()))?;
        let line = std::str::from_utf8(&buf[pos..pos + end])
            .map_err(|_| Error::Parse("GSET1 header is not ASCII".into()))?;
        lines.push(line);
        pos += end + 1;
    }
    if lines[0] != MAGIC {
        return Err(Error::Parse(format!("bad magic `{}`", lines[0])));
    }
    let h = field(lines[1], "h=")?
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("h: {e}")))?;
    let origin = pair::<f64>(field(lines[2], "origin=")?, "origin")?;
    let (nx, ny) = pair::<usize>(field(lines[3], "dims=")?, "dims")?;
    let n = nx
        .checked_mul(ny)
        .ok_or_else(|| Error::Parse("dims overflow".into()))?;
    let payload = &buf[pos..];
    if payload.len() != n {
        return Err(Error::Parse(format!("payload has {} bytes, expected {n}", payload.len())));
    }
    let mut cells = Vec::with_capacity(n);
    for &b in payload {
        match b {
            0 => cells.push(false),
            1 => cells.push(true),
            _ => return Err(Error::Parse(format!("invalid cell byte 0x{b:02x}"))),
        }
    }
    GridSet::from_raw(h, Point::new(origin.0, origin.1), nx, ny, cells)
        .map_err(|e| Error::Parse(e.to_string()))
}

fn field<'a>(line: &'a str, key: &str) -> Result<&'a str> {
    line.strip_prefix(key)
        .ok_or_else(|| Error::Parse(format!("expected `{key}` line, got `{line}`")))
}

fn pair<T: std::str::FromStr>(s: &str, what: &str) -> Result<(T, T)>
where
    T::Err: std::fmt::Display,
{
    let mut it = s.split(' ');
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(Error::Parse(format!("{what}: expected two values")));
    };
    let a = a.parse::<T>().map_err(|e| Error::Parse(format!("{what}: {e}")))?;
    let b = b.parse::<T>().map_err(|e| Error::Parse(format!("{what}: {e}")))?;
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            nx in 1usize..12, ny in 1usize..12,
            bits in prop::collection::vec(any::<bool>(), 144),
            hk in 1u32..1000, ox in -50i64..50, oy in -50i64..50,
        ) {
            let h = hk as f64 * 1e-3;
            let cells: Vec<bool> = bits[..nx * ny].to_vec();
            let g = GridSet::from_raw(h, Point::new(ox as f64 * h, oy as f64 * h), nx, ny, cells).unwrap();
            let mut bytes = Vec::new();
            write_gset(&g, &mut bytes).unwrap();
            let back = read_gset(&bytes[..]).unwrap();
            prop_assert_eq!(&back, &g);
            let mut again = Vec::new();
            write_gset(&back, &mut again).unwrap();
            prop_assert_eq!(again, bytes);
        }
    }

    #[test]
    fn header_layout() {
        let g = GridSet::from_cells(0.25, &[(0, 0)]).unwrap();
        let mut bytes = Vec::new();
        write_gset(&g, &mut bytes).unwrap();
        let text = String::from_utf8_lossy(&bytes[..bytes.len() - 9]).to_string();
        assert_eq!(text, "GSET1\nh=0.25\norigin=-0.25 -0.25\ndims=3 3\n");
        assert_eq!(&bytes[bytes.len() - 9..], &[0, 0, 0, 0, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        for bad in [
            &b"GSET2\nh=1\norigin=0 0\ndims=1 1\n\x00"[..],
            b"GSET1\nh=abc\norigin=0 0\ndims=1 1\n\x00",
            b"GSET1\nh=1\norigin=0\ndims=1 1\n\x00",
            b"GSET1\nh=1\norigin=0 0\ndims=2 1\n\x00",
            b"GSET1\nh=1\norigin=0 0\ndims=1 1\n\x02",
            b"GSET1\nh=-1\norigin=0 0\ndims=1 1\n\x00",
            b"GSET1\nh=1\n",
        ] {
            assert!(matches!(read_gset(bad), Err(Error::Parse(_))));
        }
    }
}
