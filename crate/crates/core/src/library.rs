//! Libraries of compiled programs with comments (`.ppglib` files).
//!
//! Layout (little-endian): magic `PPGL`, u16 version, u32 entry count, then
//! per entry a u16-length UTF-8 name, a u16-length UTF-8 comment, a u32 code
//! length, the encoded program and the CRC32 of those code bytes.
//!
//! Every change rewrites the whole file through a temporary file in the same
//! directory that is renamed over the old one, so readers see either the old
//! or the new library.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::builtins::Registry;
use crate::bytecode::{CompiledProgram, DecodeError};

pub const LIB_MAGIC: &[u8; 4] = b"PPGL";
pub const LIB_VERSION: u16 = 1;

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("not a library file (bad magic)")]
    BadMagic,
    #[error("unsupported library version {0}")]
    UnsupportedVersion(u16),
    #[error("library file is truncated")]
    Truncated,
    #[error("library file has {0} trailing bytes")]
    TrailingBytes(usize),
    #[error("invalid UTF-8 in entry {0}")]
    BadString(usize),
    #[error("checksum mismatch in entry '{0}'")]
    Checksum(String),
    #[error("entry '{0}' already exists")]
    Duplicate(String),
    #[error("no entry named '{0}'")]
    UnknownName(String),
    #[error("{what} of {len} bytes is too long")]
    TooLong { what: &'static str, len: usize },
    #[error("entry '{name}' does not decode: {source}")]
    Decode {
        name: String,
        #[source]
        source: DecodeError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub name: String,
    pub comment: String,
    pub code: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Library {
    path: PathBuf,
    entries: Vec<Entry>,
}

impl Library {
    /// Opens `path`; a missing file is an empty library.
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, LibraryError> {
        let path = path.into();
        let entries = match fs::read(&path) {
            Ok(bytes) => decode_library(&bytes)?,
            Err(e) if e.kind() == io::ErrorKind::NotFound => Vec::new(),
            Err(e) => return Err(e.into()),
        };
        Ok(Self { path, entries })
    }

    /// Opens an existing library file.
    pub fn open_existing(path: impl Into<PathBuf>) -> Result<Self, LibraryError> {
        let path = path.into();
        let entries = decode_library(&fs::read(&path)?)?;
        Ok(Self { path, entries })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Names and comments in insertion order.
    pub fn list_entries(&self) -> Vec<(String, String)> {
        self.entries
            .iter()
            .map(|e| (e.name.clone(), e.comment.clone()))
            .collect()
    }

    fn find(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.name == name)
    }

    pub fn add_entry(
        &mut self,
        name: &str,
        comment: &str,
        cp: &CompiledProgram,
        registry: &Registry,
    ) -> Result<(), LibraryError> {
        if self.find(name).is_some() {
            return Err(LibraryError::Duplicate(name.to_string()));
        }
        let code = cp.encode();
        CompiledProgram::decode(&code, registry).map_err(|source| LibraryError::Decode {
            name: name.to_string(),
            source,
        })?;
        let mut entries = self.entries.clone();
        entries.push(Entry {
            name: name.to_string(),
            comment: comment.to_string(),
            code,
        });
        write_atomic(&self.path, &encode_library(&entries)?)?;
        self.entries = entries;
        Ok(())
    }

    pub fn load_entry(&self, name: &str, registry: &Registry) -> Result<CompiledProgram, LibraryError> {
        let e = &self.entries[self.find(name).ok_or_else(|| LibraryError::UnknownName(name.to_string()))?];
        CompiledProgram::decode(&e.code, registry).map_err(|source| LibraryError::Decode {
            name: name.to_string(),
            source,
        })
    }

    pub fn remove_entry(&mut self, name: &str) -> Result<(), LibraryError> {
        let i = self
            .find(name)
            .ok_or_else(|| LibraryError::UnknownName(name.to_string()))?;
        let mut entries = self.entries.clone();
        entries.remove(i);
        write_atomic(&self.path, &encode_library(&entries)?)?;
        self.entries = entries;
        Ok(())
    }
}

pub fn encode_library(entries: &[Entry]) -> Result<Vec<u8>, LibraryError> {
    let mut out = Vec::new();
    out.extend_from_slice(LIB_MAGIC);
    out.extend_from_slice(&LIB_VERSION.to_le_bytes());
    out.extend_from_slice(&(entries.len() as u32).to_le_bytes());
    for e in entries {
        for (what, s) in [("name", &e.name), ("comment", &e.comment)] {
            let len = u16::try_from(s.len()).map_err(|_| LibraryError::TooLong { what, len: s.len() })?;
            out.extend_from_slice(&len.to_le_bytes());
            out.extend_from_slice(s.as_bytes());
        }
        let len = u32::try_from(e.code.len()).map_err(|_| LibraryError::TooLong {
            what: "code",
            len: e.code.len(),
        })?;
        out.extend_from_slice(&len.to_le_bytes());
        out.extend_from_slice(&e.code);
        out.extend_from_slice(&crc32fast::hash(&e.code).to_le_bytes());
    }
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], LibraryError> {
        let s = self.bytes.get(self.at..self.at + n).ok_or(LibraryError::Truncated)?;
        self.at += n;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16, LibraryError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, LibraryError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn text(&mut self, entry: usize) -> Result<String, LibraryError> {
        let n = self.u16()? as usize;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|_| LibraryError::BadString(entry))
    }
}

pub fn decode_library(bytes: &[u8]) -> Result<Vec<Entry>, LibraryError> {
    let mut c = Cursor { bytes, at: 0 };
    if c.take(4)? != LIB_MAGIC {
        return Err(LibraryError::BadMagic);
    }
    let version = c.u16()?;
    if version != LIB_VERSION {
        return Err(LibraryError::UnsupportedVersion(version));
    }
    let count = c.u32()?;
    let mut entries: Vec<Entry> = Vec::new();
    for i in 0..count as usize {
        let name = c.text(i)?;
        let comment = c.text(i)?;
        let n = c.u32()? as usize;
        let code = c.take(n)?.to_vec();
        if c.u32()? != crc32fast::hash(&code) {
            return Err(LibraryError::Checksum(name));
        }
        if entries.iter().any(|e| e.name == name) {
            return Err(LibraryError::Duplicate(name));
        }
        entries.push(Entry { name, comment, code });
    }
    if c.at != bytes.len() {
        return Err(LibraryError::TrailingBytes(bytes.len() - c.at));
    }
    Ok(entries)
}

/// Replaces `path` with `bytes` via a temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    write_atomic_with(path, |f| f.write_all(bytes))
}

/// Like [`write_atomic`], with the content produced by `fill`. If `fill`
/// fails the temporary file is discarded and `path` is left as it was.
pub fn write_atomic_with(
    path: &Path,
    fill: impl FnOnce(&mut fs::File) -> io::Result<()>,
) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    fill(tmp.as_file_mut())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
