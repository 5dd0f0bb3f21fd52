//! Profile cache files.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "QDPR" | version u16 = 1 | d u8 | feature flags u8 | entry count u64
//! per entry: a u16 | g u16 | closure flag u8 | count u128
//! CRC32 u32 over every preceding byte
//! ```

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use super::{ClosureClass, Features, ProfileKey, ProfileTable};
use crate::cube::Dim;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"QDPR";
pub const VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 1 + 1 + 8;
const ENTRY_LEN: usize = 2 + 2 + 1 + 16;

pub fn to_bytes(table: &ProfileTable) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_LEN + table.len() * ENTRY_LEN + 4);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.push(table.dim().get() as u8);
    buf.push(table.features().bits());
    buf.extend_from_slice(&(table.len() as u64).to_le_bytes());
    for (key, count) in table.entries() {
        buf.extend_from_slice(&key.a.to_le_bytes());
        buf.extend_from_slice(&key.g.to_le_bytes());
        buf.push(key.closure.code());
        buf.extend_from_slice(&count.to_le_bytes());
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    buf
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        let end = self.pos + N;
        let slice = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::Format(format!("truncated while reading {what}")))?;
        self.pos = end;
        Ok(slice.try_into().unwrap())
    }
}

pub fn from_bytes(bytes: &[u8]) -> Result<ProfileTable> {
    if bytes.len() < HEADER_LEN + 4 {
        return Err(Error::Format(format!(
            "file too short ({} bytes)",
            bytes.len()
        )));
    }
    let mut cur = Cursor { bytes, pos: 0 };
    if &cur.take::<4>("magic")? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u16::from_le_bytes(cur.take("version")?);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let [d] = cur.take::<1>("dimension")?;
    let dim = Dim::new(u32::from(d)).map_err(|_| Error::Format(format!("bad dimension {d}")))?;
    let [flags] = cur.take::<1>("feature flags")?;
    let features = Features::from_bits(flags)
        .ok_or_else(|| Error::Format(format!("unknown feature flags {flags}")))?;
    let count = u64::from_le_bytes(cur.take("entry count")?);
    let expected = (count as u128) * ENTRY_LEN as u128 + (HEADER_LEN + 4) as u128;
    if expected != bytes.len() as u128 {
        return Err(Error::Format(format!(
            "length {} does not match {count} entries",
            bytes.len()
        )));
    }
    let body_end = bytes.len() - 4;
    let stored = u32::from_le_bytes(bytes[body_end..].try_into().unwrap());
    let computed = crc32fast::hash(&bytes[..body_end]);
    if stored != computed {
        return Err(Error::ChecksumMismatch { stored, computed });
    }
    let mut entries = Vec::with_capacity(count as usize);
    let mut prev: Option<ProfileKey> = None;
    for _ in 0..count {
        let a = u16::from_le_bytes(cur.take("entry")?);
        let g = u16::from_le_bytes(cur.take("entry")?);
        let [flag] = cur.take::<1>("entry")?;
        let closure = ClosureClass::from_code(flag)
            .ok_or_else(|| Error::Format(format!("bad closure flag {flag}")))?;
        let n = u128::from_le_bytes(cur.take("entry")?);
        let key = ProfileKey { a, g, closure };
        if prev.is_some_and(|p| p >= key) || n == 0 {
            return Err(Error::Format(
                "entries must be nonzero and strictly ascending".into(),
            ));
        }
        prev = Some(key);
        entries.push((key, n));
    }
    ProfileTable::from_entries(dim, features, entries)
}

pub fn write_to(table: &ProfileTable, mut w: impl Write) -> Result<()> {
    w.write_all(&to_bytes(table))?;
    Ok(())
}

pub fn read_from(mut r: impl Read) -> Result<ProfileTable> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    from_bytes(&bytes)
}

pub fn save(table: &ProfileTable, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_bytes(table))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<ProfileTable> {
    from_bytes(&fs::read(path)?)
}

/// Cache file name for a `(d, features, version)` triple.
pub fn cache_file_name(dim: Dim, features: Features) -> String {
    format!(
        "profile-d{}-f{}-v{}.qdpr",
        dim.get(),
        features.bits(),
        VERSION
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::sweep_profiles;

    fn table(d: u32) -> ProfileTable {
        sweep_profiles(Dim::new(d).unwrap(), Features::PLAIN, 1).unwrap()
    }

    #[test]
    fn d2_file_layout() {
        let bytes = to_bytes(&table(2));
        assert_eq!(bytes.len(), HEADER_LEN + 3 * ENTRY_LEN + 4);
        assert_eq!(&bytes[..4], b"QDPR");
        assert_eq!(&bytes[4..8], &[1, 0, 2, 0]);
        assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 3);
        // second entry: a = 1, g = 2, unsplit, count 2
        let e = &bytes[HEADER_LEN + ENTRY_LEN..HEADER_LEN + 2 * ENTRY_LEN];
        assert_eq!(&e[..5], &[1, 0, 2, 0, 0]);
        assert_eq!(u128::from_le_bytes(e[5..].try_into().unwrap()), 2);
        assert_eq!(from_bytes(&bytes).unwrap(), table(2));
    }

    #[test]
    fn truncated_file_is_format_error() {
        let bytes = to_bytes(&table(3));
        for cut in [0, 3, HEADER_LEN, bytes.len() - 1] {
            assert!(
                matches!(from_bytes(&bytes[..cut]), Err(Error::Format(_))),
                "cut {cut}"
            );
        }
    }

    #[test]
    fn corruption_is_detected() {
        let mut bytes = to_bytes(&table(3));
        bytes[HEADER_LEN + 6] ^= 1;
        assert!(matches!(
            from_bytes(&bytes),
            Err(Error::ChecksumMismatch { .. })
        ));

        let mut bytes = to_bytes(&table(3));
        bytes[0] = b'X';
        assert!(matches!(from_bytes(&bytes), Err(Error::Format(_))));

        let mut bytes = to_bytes(&table(3));
        bytes[4] = 2;
        assert!(matches!(from_bytes(&bytes), Err(Error::Format(_))));
    }

    #[test]
    fn file_roundtrip() {
        let dir = std::env::temp_dir().join(format!("qdbis-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join(cache_file_name(Dim::new(4).unwrap(), Features::PLAIN));
        save(&table(4), &path).unwrap();
        let first = fs::read(&path).unwrap();
        save(&load(&path).unwrap(), &path).unwrap();
        assert_eq!(fs::read(&path).unwrap(), first);
        fs::remove_dir_all(dir).unwrap();
    }
}
