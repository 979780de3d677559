use super::FiltrationError;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

type Table = HashMap<Vec<i64>, i64>;

/// Filtration generated in degree one by a table of weights on `P_r`.
///
/// The degree-`k` weight of `a` is the best value `Σ table(a_i)` over all
/// decompositions `a = a_1 + … + a_k` with `a_i ∈ P_r`. Tables for each
/// degree are built once by dynamic programming and then shared.
#[derive(Clone)]
pub struct Generated {
    r: u64,
    table: Arc<BTreeMap<Vec<i64>, i64>>,
    memo: Arc<Mutex<Vec<Arc<Table>>>>,
}

impl std::fmt::Debug for Generated {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Generated")
            .field("r", &self.r)
            .field("table", &self.table)
            .finish()
    }
}

impl PartialEq for Generated {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.table == other.table
    }
}

impl Eq for Generated {}

impl Generated {
    pub fn new(r: u64, table: BTreeMap<Vec<i64>, i64>) -> Self {
        let first: Table = table.iter().map(|(a, w)| (a.clone(), *w)).collect();
        Self {
            r,
            table: Arc::new(table),
            memo: Arc::new(Mutex::new(vec![Arc::new(first)])),
        }
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn table(&self) -> &BTreeMap<Vec<i64>, i64> {
        &self.table
    }

    /// Closure table in degree `k ≥ 1`.
    pub(crate) fn degree(&self, k: u64) -> Result<Arc<Table>, FiltrationError> {
        if k == 0 {
            return Err(FiltrationError::InvalidParameter("degree must be positive".into()));
        }
        let mut memo = self.memo.lock().expect("memo lock poisoned");
        while (memo.len() as u64) < k {
            let prev = memo.last().unwrap().clone();
            let mut next: Table = HashMap::with_capacity(prev.len() * 2);
            for (b, wb) in prev.iter() {
                for (c, wc) in self.table.iter() {
                    let a: Vec<i64> = b.iter().zip(c).map(|(x, y)| x + y).collect();
                    let w = wb + wc;
                    next.entry(a)
                        .and_modify(|cur| *cur = (*cur).max(w))
                        .or_insert(w);
                }
            }
            memo.push(Arc::new(next));
        }
        Ok(memo[(k - 1) as usize].clone())
    }
}
