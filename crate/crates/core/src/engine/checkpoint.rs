use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::koszul::{ComplexKind, RemovalPlan};
use crate::linalg::PrimeModulus;
use crate::polygon::{canonical_form, LatticePoint, LatticePolygon};

/// One finished bidegree task.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointRecord {
    pub key: String,
    pub strand: String,
    pub l: usize,
    pub bidegree: [i64; 2],
    pub orbit_size: usize,
    pub cols: u64,
    pub rank: u64,
    pub rank_in: u64,
}

impl CheckpointRecord {
    pub fn value(&self) -> u64 {
        self.cols - self.rank - self.rank_in
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the canonical vertex list; equal for equivalent polygons.
pub fn polygon_hash(poly: &LatticePolygon) -> String {
    let (key, _) = canonical_form(poly);
    let text = serde_json::to_string(&key).expect("points serialize");
    hex(&Sha256::digest(text.as_bytes()))
}

/// Key under which task records are trusted on resume. Besides the
/// polygon class it covers the embedding, because bidegrees depend on it.
pub fn checkpoint_key(poly: &LatticePolygon, prime: PrimeModulus, plan: &RemovalPlan, symmetry: bool) -> String {
    let options = serde_json::json!({
        "vertices": poly.vertices(),
        "removed": plan.removed,
        "symmetry": symmetry,
    });
    let text = format!("{}|{}|{}", polygon_hash(poly), prime.get(), options);
    hex(&Sha256::digest(text.as_bytes()))
}

type TaskId = (String, usize, LatticePoint);

/// Append-only record file with a single serialized writer.
pub struct Checkpoint {
    path: PathBuf,
    done: HashMap<TaskId, CheckpointRecord>,
    writer: Mutex<File>,
}

impl Checkpoint {
    /// Opens (or creates) the file and loads every well-formed record.
    /// A torn last line from an interrupted run is ignored.
    pub fn open(path: &Path) -> Result<Checkpoint> {
        let mut done = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                let line = line?;
                if let Ok(rec) = serde_json::from_str::<CheckpointRecord>(&line) {
                    let id = (
                        format!("{}|{}", rec.key, rec.strand),
                        rec.l,
                        LatticePoint::new(rec.bidegree[0], rec.bidegree[1]),
                    );
                    done.insert(id, rec);
                }
            }
        }
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        // start a fresh line if the previous run stopped mid-record
        if std::fs::metadata(path)?.len() > 0 && !ends_with_newline(path)? {
            file.write_all(b"\n")?;
        }
        Ok(Checkpoint {
            path: path.to_path_buf(),
            done,
            writer: Mutex::new(file),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.done.len()
    }

    pub fn is_empty(&self) -> bool {
        self.done.is_empty()
    }

    pub fn lookup(&self, key: &str, kind: ComplexKind, ab: LatticePoint) -> Option<&CheckpointRecord> {
        self.done
            .get(&(format!("{key}|{}", kind.name()), kind.index(), ab))
    }

    pub fn record(&self, rec: &CheckpointRecord) -> Result<()> {
        let mut line = serde_json::to_string(rec).expect("records serialize");
        line.push('\n');
        let mut w = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        w.write_all(line.as_bytes())?;
        w.flush()?;
        Ok(())
    }
}

fn ends_with_newline(path: &Path) -> Result<bool> {
    let bytes = std::fs::read(path)?;
    Ok(bytes.last() == Some(&b'\n'))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_class_invariant() {
        let a = LatticePolygon::sigma(2);
        let b = LatticePolygon::from_coords(&[(1, 1), (3, 1), (1, 3)]).unwrap();
        assert_eq!(polygon_hash(&a), polygon_hash(&b));
        assert_ne!(polygon_hash(&a), polygon_hash(&LatticePolygon::sigma(3)));
        let p = PrimeModulus::DEFAULT;
        let none = RemovalPlan::none();
        assert_ne!(checkpoint_key(&a, p, &none, true), checkpoint_key(&b, p, &none, true));
        assert_ne!(checkpoint_key(&a, p, &none, true), checkpoint_key(&a, p, &none, false));
    }

    #[test]
    fn records_survive_reopen_and_torn_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.jsonl");
        let rec = CheckpointRecord {
            key: "k".into(),
            strand: "dual_c".into(),
            l: 3,
            bidegree: [2, 5],
            orbit_size: 6,
            cols: 10,
            rank: 7,
            rank_in: 0,
        };
        {
            let ck = Checkpoint::open(&path).unwrap();
            ck.record(&rec).unwrap();
        }
        std::fs::OpenOptions::new()
            .append(true)
            .open(&path)
            .unwrap()
            .write_all(b"{\"key\":\"k\",\"str")
            .unwrap();
        let ck = Checkpoint::open(&path).unwrap();
        assert_eq!(ck.len(), 1);
        let got = ck.lookup("k", ComplexKind::DualC(3), LatticePoint::new(2, 5)).unwrap();
        assert_eq!(got.value(), 3);
        ck.record(&rec).unwrap();
        drop(ck);
        assert_eq!(Checkpoint::open(&path).unwrap().len(), 1);
    }
}
