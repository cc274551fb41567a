//! `DCRQ1` binary table files.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "DCRQ1"            5 bytes magic
//! version            u8
//! n                  u32
//! x order            n × u32   disk indices (id order) sorted by x
//! y order            n × u32   disk indices sorted by y
//! digest             u64       instance digest
//! S                  n^4 × u32 row-major (l, r, t, b)
//! M                  n^4 × u32 row-major (l, r, t, b)
//! witness            n^4 × u32 0 = slab, 1-4 = shrink left/right/top/bottom
//! ```

use std::io::{Read, Write};

use super::{MTable, RangeTables, STable, UnitInstance, Witness};
use crate::error::{Error, Result};

pub const TABLE_MAGIC: &[u8; 5] = b"DCRQ1";
pub const TABLE_VERSION: u8 = 1;

#[derive(Clone, Debug)]
pub struct TableFile {
    pub n: usize,
    pub by_x: Vec<u32>,
    pub by_y: Vec<u32>,
    pub digest: u64,
    pub s: STable,
    pub m: MTable,
}

impl TableFile {
    /// Checks that the file was built for `inst` (digest and both orders).
    pub fn check_instance(&self, inst: &UnitInstance, digest: u64) -> Result<()> {
        if self.digest != digest {
            return Err(Error::DigestMismatch { table: self.digest, instance: digest });
        }
        let same = |stored: &[u32], actual: &[usize]| {
            stored.len() == actual.len() && stored.iter().zip(actual).all(|(&a, &b)| a as usize == b)
        };
        if self.n != inst.len() || !same(&self.by_x, inst.by_x()) || !same(&self.by_y, inst.by_y()) {
            return Err(Error::Parse("table orders do not match the instance".into()));
        }
        Ok(())
    }
}

fn put_u32s<W: Write>(w: &mut W, values: impl Iterator<Item = u32>) -> Result<()> {
    let mut buf = Vec::with_capacity(1 << 16);
    for v in values {
        buf.extend_from_slice(&v.to_le_bytes());
        if buf.len() >= 1 << 16 {
            w.write_all(&buf)?;
            buf.clear();
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn write_tables<W: Write>(w: &mut W, inst: &UnitInstance, tables: &RangeTables, digest: u64) -> Result<()> {
    let n = inst.len();
    w.write_all(TABLE_MAGIC)?;
    w.write_all(&[TABLE_VERSION])?;
    w.write_all(&(n as u32).to_le_bytes())?;
    put_u32s(w, inst.by_x().iter().map(|&i| i as u32))?;
    put_u32s(w, inst.by_y().iter().map(|&i| i as u32))?;
    w.write_all(&digest.to_le_bytes())?;
    put_u32s(w, tables.s.as_slice().iter().copied())?;
    put_u32s(w, tables.m.as_slice().iter().copied())?;
    put_u32s(w, tables.m.witnesses().iter().map(|w| w.code()))?;
    Ok(())
}

fn take_u32s<R: Read>(r: &mut R, count: usize) -> Result<Vec<u32>> {
    let mut bytes = vec![0u8; count * 4];
    r.read_exact(&mut bytes).map_err(truncated)?;
    Ok(bytes.chunks_exact(4).map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect())
}

fn truncated(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Parse("table file is truncated".into())
    } else {
        Error::Io(e)
    }
}

pub fn read_tables<R: Read>(r: &mut R) -> Result<TableFile> {
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic).map_err(truncated)?;
    if &magic != TABLE_MAGIC {
        return Err(Error::Parse("not a DCRQ1 table file".into()));
    }
    let mut version = [0u8; 1];
    r.read_exact(&mut version).map_err(truncated)?;
    if version[0] != TABLE_VERSION {
        return Err(Error::Parse(format!("unsupported table version {}", version[0])));
    }
    let n = take_u32s(r, 1)?[0] as usize;
    let by_x = take_u32s(r, n)?;
    let by_y = take_u32s(r, n)?;
    let mut digest = [0u8; 8];
    r.read_exact(&mut digest).map_err(truncated)?;
    let cells = n.checked_pow(4).ok_or_else(|| Error::Parse("table dimension overflows".into()))?;
    let s = STable::from_raw(n, take_u32s(r, cells)?)?;
    let m_sizes = take_u32s(r, cells)?;
    let witness = take_u32s(r, cells)?.into_iter().map(Witness::from_code).collect::<Result<Vec<_>>>()?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Parse("trailing bytes after table data".into()));
    }
    Ok(TableFile { n, by_x, by_y, digest: u64::from_le_bytes(digest), s, m: MTable::from_raw(n, m_sizes, witness)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Disk, Point2};
    use crate::range::build_tables;

    fn inst() -> UnitInstance {
        let d = |id: &str, x: i64, y: i64| Disk::new(id, Point2::new(x.into(), y.into()), 1.into()).unwrap();
        UnitInstance::new(vec![d("a", 0, 1), d("b", 1, 0), d("c", 2, 2)]).unwrap()
    }

    #[test]
    fn header_layout_and_round_trip() {
        let inst = inst();
        let tables = build_tables(&inst).unwrap();
        let mut bytes = Vec::new();
        write_tables(&mut bytes, &inst, &tables, 0xfeed_beef).unwrap();
        assert_eq!(&bytes[..5], b"DCRQ1");
        assert_eq!(bytes[5], 1);
        assert_eq!(&bytes[6..10], &3u32.to_le_bytes());
        assert_eq!(bytes.len(), 5 + 1 + 4 + 3 * 4 * 2 + 8 + 3 * 81 * 4);

        let back = read_tables(&mut bytes.as_slice()).unwrap();
        assert_eq!(back.s, tables.s);
        assert_eq!(back.m, tables.m);
        back.check_instance(&inst, 0xfeed_beef).unwrap();
        assert!(matches!(back.check_instance(&inst, 1), Err(Error::DigestMismatch { .. })));
    }

    #[test]
    fn rejects_corrupt_files() {
        let inst = inst();
        let tables = build_tables(&inst).unwrap();
        let mut bytes = Vec::new();
        write_tables(&mut bytes, &inst, &tables, 7).unwrap();
        assert!(read_tables(&mut &bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(read_tables(&mut bad.as_slice()).is_err());
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(read_tables(&mut extra.as_slice()).is_err());
    }
}
