//! Binary index layout, all integers little-endian:
//!
//! ```text
//! magic "PSIX" | version u32 | dim u32 | count u64
//! count × { chunk_id str | doc_id str | layer u8 | ordinal u32 | text str | dim × f32 }
//! ```
//!
//! where `str` is a u32 byte length followed by UTF-8 bytes. Trailing bytes
//! after the last record are rejected.

use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Chunk, CorpusError, Index, Layer};
use crate::embedding::EmbeddingVector;

pub const MAGIC: &[u8; 4] = b"PSIX";
pub const FORMAT_VERSION: u32 = 1;

pub fn save_index(index: &Index, path: &Path) -> Result<(), CorpusError> {
    let file = std::fs::File::create(path).map_err(|e| CorpusError::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_index(index, &mut w).and_then(|_| w.flush()).map_err(|e| CorpusError::io(path, e))
}

pub fn load_index(path: &Path) -> Result<Index, CorpusError> {
    let file = std::fs::File::open(path).map_err(|e| CorpusError::io(path, e))?;
    read_index(&mut BufReader::new(file)).map_err(|e| match e {
        CorpusError::Io { source, .. } => CorpusError::io(path, source),
        other => other,
    })
}

pub fn write_index(index: &Index, w: &mut impl Write) -> std::io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&(index.dim() as u32).to_le_bytes())?;
    w.write_all(&(index.len() as u64).to_le_bytes())?;
    for c in index.chunks() {
        write_str(w, &c.chunk_id)?;
        write_str(w, &c.doc_id)?;
        w.write_all(&[match c.layer {
            Layer::FullText => 0,
            Layer::Paragraph => 1,
        }])?;
        w.write_all(&c.ordinal.to_le_bytes())?;
        write_str(w, &c.text)?;
        for v in c.vector.values() {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

fn write_str(w: &mut impl Write, s: &str) -> std::io::Result<()> {
    w.write_all(&(s.len() as u32).to_le_bytes())?;
    w.write_all(s.as_bytes())
}

pub fn read_index(r: &mut impl Read) -> Result<Index, CorpusError> {
    let io = |e| CorpusError::io(Path::new("<index>"), e);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(io)?;
    if &magic != MAGIC {
        return Err(CorpusError::BadMagic);
    }
    let version = read_u32(r).map_err(io)?;
    if version != FORMAT_VERSION {
        return Err(CorpusError::FormatVersionMismatch { expected: FORMAT_VERSION, found: version });
    }
    let dim = read_u32(r).map_err(io)? as usize;
    let mut count = [0u8; 8];
    r.read_exact(&mut count).map_err(io)?;
    let count = u64::from_le_bytes(count);
    let mut chunks = Vec::new();
    for _ in 0..count {
        let chunk_id = read_str(r)?;
        let doc_id = read_str(r)?;
        let mut layer = [0u8; 1];
        r.read_exact(&mut layer).map_err(io)?;
        let layer = match layer[0] {
            0 => Layer::FullText,
            1 => Layer::Paragraph,
            other => return Err(CorpusError::Corrupt(format!("unknown layer tag {other}"))),
        };
        let ordinal = read_u32(r).map_err(io)?;
        let text = read_str(r)?;
        let mut raw = vec![0u8; dim * 4];
        r.read_exact(&mut raw).map_err(io)?;
        let values = raw.chunks_exact(4).map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]])).collect();
        chunks.push(Chunk { chunk_id, doc_id, layer, ordinal, text, vector: EmbeddingVector::from_stored(values) });
    }
    let mut extra = [0u8; 1];
    if r.read(&mut extra).map_err(io)? != 0 {
        return Err(CorpusError::Corrupt("trailing bytes after last record".into()));
    }
    Index::new(dim, chunks)
}

fn read_u32(r: &mut impl Read) -> std::io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_str(r: &mut impl Read) -> Result<String, CorpusError> {
    let io = |e| CorpusError::io(Path::new("<index>"), e);
    let len = read_u32(r).map_err(io)? as usize;
    let mut buf = Vec::new();
    r.take(len as u64).read_to_end(&mut buf).map_err(io)?;
    if buf.len() != len {
        return Err(io(std::io::ErrorKind::UnexpectedEof.into()));
    }
    String::from_utf8(buf).map_err(|e| CorpusError::Corrupt(e.to_string()))
}
