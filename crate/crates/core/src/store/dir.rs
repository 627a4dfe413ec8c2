use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use super::{check_integrity, compute_cid, Cid, ContentStore, StoreError};

/// A store backed by a local directory, one file per CID.
///
/// Gives the command-line tool a store that persists between invocations.
/// Reads are re-hashed, so a file edited on disk surfaces as
/// [`StoreError::IntegrityMismatch`].
#[derive(Debug, Clone)]
pub struct DirStore {
    root: PathBuf,
}

impl DirStore {
    pub fn open(root: impl Into<PathBuf>) -> io::Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(DirStore { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, cid: &Cid) -> PathBuf {
        self.root.join(cid.to_string())
    }
}

fn backend(e: io::Error) -> StoreError {
    StoreError::Backend(e.to_string())
}

impl ContentStore for DirStore {
    fn add(&self, content: &[u8]) -> Result<Cid, StoreError> {
        let cid = compute_cid(content);
        let target = self.path_for(&cid);
        if target.exists() {
            return Ok(cid);
        }
        // Write-then-rename so concurrent readers never see a partial file.
        let mut tmp = tempfile_in(&self.root).map_err(backend)?;
        tmp.1.write_all(content).map_err(backend)?;
        tmp.1.sync_all().map_err(backend)?;
        drop(tmp.1);
        fs::rename(&tmp.0, &target).map_err(backend)?;
        Ok(cid)
    }

    fn get(&self, cid: &Cid) -> Result<Vec<u8>, StoreError> {
        let bytes = match fs::read(self.path_for(cid)) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(StoreError::NotFound(*cid)),
            Err(e) => return Err(backend(e)),
        };
        check_integrity(cid, &bytes)?;
        Ok(bytes)
    }

    fn has(&self, cid: &Cid) -> Result<bool, StoreError> {
        Ok(self.path_for(cid).is_file())
    }
}

fn tempfile_in(dir: &Path) -> io::Result<(PathBuf, fs::File)> {
    use rand::Rng;
    loop {
        let name = format!(".tmp-{:016x}", rand::thread_rng().gen::<u64>());
        let path = dir.join(name);
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(f) => return Ok((path, f)),
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(e),
        }
    }
}
