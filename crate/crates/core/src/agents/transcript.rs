use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::AgentError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub request_hash: String,
    pub request: Value,
    pub response: Value,
}

/// Recorded exchanges, one JSON object per line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Transcript {
    pub entries: Vec<TranscriptEntry>,
}

/// Hex SHA-256 of the compact JSON text; object keys are emitted sorted, so
/// the text is canonical.
pub fn request_hash(request: &Value) -> String {
    let text = serde_json::to_string(request).expect("json values always serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Transcript {
    /// A missing file is an empty transcript.
    pub fn load(path: &Path) -> Result<Self, AgentError> {
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Transcript::default()),
            Err(e) => return Err(AgentError::Transcript(format!("{}: {e}", path.display()))),
        };
        let mut entries = Vec::new();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| AgentError::Transcript(format!("{}: {e}", path.display())))?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: TranscriptEntry = serde_json::from_str(&line)
                .map_err(|e| AgentError::Transcript(format!("{} line {}: {e}", path.display(), n + 1)))?;
            entries.push(entry);
        }
        Ok(Transcript { entries })
    }

    /// First entry recorded for the hash.
    pub fn find(&self, hash: &str) -> Option<&TranscriptEntry> {
        self.entries.iter().find(|e| e.request_hash == hash)
    }

    /// Appends one line while holding an exclusive lock on the file.
    pub fn append(path: &Path, entry: &TranscriptEntry) -> Result<(), AgentError> {
        let err = |e: std::io::Error| AgentError::Transcript(format!("{}: {e}", path.display()));
        let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(err)?;
        file.lock().map_err(err)?;
        let mut line = serde_json::to_string(entry).expect("json values always serialize");
        line.push('\n');
        let res = file.write_all(line.as_bytes()).and_then(|_| file.flush());
        file.unlock().map_err(err)?;
        res.map_err(err)
    }
}
