use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{export_glb, load_glb, AssetError, Mesh, PlacedAsset};

/// Lowercase with runs of whitespace collapsed to one space.
pub fn normalize_name(name: &str) -> String {
    name.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Directory of `<normalized-name>.glb` files.
///
/// Writes go to a temporary file in the same directory and are renamed into
/// place, so readers never observe a partial file.
#[derive(Debug, Clone)]
pub struct AssetCache {
    root: PathBuf,
}

impl AssetCache {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, AssetError> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(AssetCache { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, name: &str) -> PathBuf {
        self.root.join(format!("{}.glb", normalize_name(name)))
    }

    /// Returns `None` on a miss. A file that exists but does not decode is
    /// logged and treated as a miss.
    pub fn lookup(&self, name: &str) -> Result<Option<Mesh>, AssetError> {
        let path = self.path_for(name);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        match load_glb(&bytes) {
            Ok(mesh) => Ok(Some(mesh)),
            Err(e) => {
                log::warn!("ignoring corrupt cache entry {}: {e}", path.display());
                Ok(None)
            }
        }
    }

    /// Stores `mesh` under `name`; the last writer wins.
    pub fn store(&self, name: &str, mesh: &Mesh) -> Result<(), AssetError> {
        let key = normalize_name(name);
        if key.is_empty() {
            return Err(AssetError::Unsupported("empty asset name".into()));
        }
        let asset = PlacedAsset::new(0, std::sync::Arc::new(mesh.clone()), 1.0);
        let bytes = export_glb(&[asset], None)?;
        let target = self.path_for(name);
        let tmp = self.root.join(format!(
            ".{key}.{}.{:?}.tmp",
            std::process::id(),
            std::thread::current().id()
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&bytes)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target)?;
        Ok(())
    }
}
