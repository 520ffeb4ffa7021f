//! Shared caches for a verification run. Module construction, braiding
//! solves, and the per-node shift tables are all pure functions of their
//! keys, so a session memoizes them behind mutexes and hands out Arc
//! references. An optional directory (QFLAG_CACHE_DIR) persists the shift
//! tables between runs.

use crate::modules::{build_irrep, conjugate_module, node_strings, Module, NodeString};
use crate::rmatrix::{universal_r, RAction};
use crate::roots::{RootDatum, Weight};
use crate::Result;
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

type ModKey = (char, usize, u64, Vec<i64>, bool);

/// A single weighted shift on the truncated Fock space: the operator sends
/// e_n to weights[n] e_{n + shift} (indices outside range drop).
#[derive(Clone, Debug)]
pub struct ShiftTable {
    pub shift: i64,
    pub weights: Vec<f64>,
}

pub struct Session {
    modules: Mutex<HashMap<ModKey, Arc<Module>>>,
    ractions: Mutex<HashMap<(u64, u64), Arc<RAction>>>,
    shifts: Mutex<HashMap<(u64, i64, i64, i64, usize), Arc<ShiftTable>>>,
    strings: Mutex<HashMap<(u64, usize), Arc<Vec<NodeString>>>>,
    legs: Mutex<HashMap<(u64, usize, usize), Arc<crate::soibelman::LegTable>>>,
    pub cache_dir: Option<PathBuf>,
}

impl Session {
    pub fn new() -> Self {
        Session {
            modules: Mutex::new(HashMap::new()),
            ractions: Mutex::new(HashMap::new()),
            shifts: Mutex::new(HashMap::new()),
            strings: Mutex::new(HashMap::new()),
            legs: Mutex::new(HashMap::new()),
            cache_dir: std::env::var_os("QFLAG_CACHE_DIR").map(PathBuf::from),
        }
    }

    fn mod_key(datum: &RootDatum, lambda: &Weight, conj: bool) -> ModKey {
        (
            datum.lie_type.letter(),
            datum.rank,
            datum.q.to_bits(),
            lambda.0.clone(),
            conj,
        )
    }

    pub fn irrep(&self, datum: &RootDatum, lambda: &Weight) -> Result<Arc<Module>> {
        let key = Self::mod_key(datum, lambda, false);
        if let Some(m) = self.modules.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let built = Arc::new(build_irrep(datum, lambda)?);
        let mut guard = self.modules.lock().unwrap();
        Ok(guard.entry(key).or_insert(built).clone())
    }

    pub fn conjugate(&self, datum: &RootDatum, lambda: &Weight) -> Result<Arc<Module>> {
        let key = Self::mod_key(datum, lambda, true);
        if let Some(m) = self.modules.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let base = self.irrep(datum, lambda)?;
        let built = Arc::new(conjugate_module(&base));
        let mut guard = self.modules.lock().unwrap();
        Ok(guard.entry(key).or_insert(built).clone())
    }

    /// Braiding for a pair of cached modules, keyed by their ids.
    pub fn raction(&self, a: &Arc<Module>, b: &Arc<Module>) -> Result<Arc<RAction>> {
        let key = (a.id, b.id);
        if let Some(r) = self.ractions.lock().unwrap().get(&key) {
            return Ok(r.clone());
        }
        let built = Arc::new(universal_r(a, b)?);
        let mut guard = self.ractions.lock().unwrap();
        Ok(guard.entry(key).or_insert(built).clone())
    }

    /// Chain decomposition of a cached module at one node.
    pub fn node_strings(&self, v: &Arc<Module>, node: usize) -> Result<Arc<Vec<NodeString>>> {
        let key = (v.id, node);
        if let Some(s) = self.strings.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let built = Arc::new(node_strings(v, node)?);
        let mut guard = self.strings.lock().unwrap();
        Ok(guard.entry(key).or_insert(built).clone())
    }

    /// Per-basis-pair single-leg operators for one module and node.
    pub fn leg_table(
        &self,
        v: &Arc<Module>,
        node: usize,
        nmax: usize,
    ) -> Result<Arc<crate::soibelman::LegTable>> {
        let key = (v.id, node, nmax);
        if let Some(t) = self.legs.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let built = Arc::new(crate::soibelman::build_leg_table(self, v, node, nmax)?);
        let mut guard = self.legs.lock().unwrap();
        Ok(guard.entry(key).or_insert(built).clone())
    }

    /// Memoized lookup for a node shift table; `compute` runs on a miss.
    pub fn shift_table<F>(
        &self,
        q: f64,
        two_j: i64,
        two_m: i64,
        two_mp: i64,
        nmax: usize,
        compute: F,
    ) -> Arc<ShiftTable>
    where
        F: FnOnce() -> ShiftTable,
    {
        let key = (q.to_bits(), two_j, two_m, two_mp, nmax);
        if let Some(t) = self.shifts.lock().unwrap().get(&key) {
            return t.clone();
        }
        if let Some(t) = self.read_disk(&key) {
            let mut guard = self.shifts.lock().unwrap();
            return guard.entry(key).or_insert(Arc::new(t)).clone();
        }
        let table = compute();
        self.write_disk(&key, &table);
        let mut guard = self.shifts.lock().unwrap();
        guard.entry(key).or_insert(Arc::new(table)).clone()
    }

    fn disk_path(&self, key: &(u64, i64, i64, i64, usize)) -> Option<PathBuf> {
        self.cache_dir.as_ref().map(|d| {
            d.join(format!(
                "shift_{:016x}_{}_{}_{}_{}.txt",
                key.0, key.1, key.2, key.3, key.4
            ))
        })
    }

    fn read_disk(&self, key: &(u64, i64, i64, i64, usize)) -> Option<ShiftTable> {
        let path = self.disk_path(key)?;
        let text = std::fs::read_to_string(path).ok()?;
        let mut lines = text.lines();
        let shift: i64 = lines.next()?.trim().parse().ok()?;
        let weights: Option<Vec<f64>> = lines.map(|l| l.trim().parse().ok()).collect();
        let weights = weights?;
        if weights.len() != key.4 {
            return None;
        }
        Some(ShiftTable { shift, weights })
    }

    fn write_disk(&self, key: &(u64, i64, i64, i64, usize), table: &ShiftTable) {
        let Some(path) = self.disk_path(key) else {
            return;
        };
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        let mut text = format!("{}\n", table.shift);
        for w in &table.weights {
            text.push_str(&format!("{:.17e}\n", w));
        }
        let _ = std::fs::write(path, text);
    }
}

impl Default for Session {
    fn default() -> Self {
        Self::new()
    }
}

impl Session {
    pub fn with_cache_dir(dir: Option<PathBuf>) -> Self {
        let mut s = Self::new();
        s.cache_dir = dir;
        s
    }
}
