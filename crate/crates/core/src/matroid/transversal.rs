use std::collections::HashMap;

use parking_lot::Mutex;

use super::{ElementId, Matroid};
use crate::error::{Error, Result};

const MEMO_LIMIT: usize = 1 << 16;

/// Transversal matroid of a bipartite graph: elements are workers, and a set
/// of workers is independent when they can be matched to distinct tasks.
///
/// Rank queries run an augmenting-path matching and are memoized per query
/// set. The memo is behind a mutex so shared references answer concurrent
/// queries without caller-side locking.
#[derive(Debug)]
pub struct TransversalMatroid {
    ground: Vec<ElementId>,
    tasks: usize,
    adjacency: Vec<Vec<u32>>,
    memo: Mutex<HashMap<Vec<ElementId>, usize>>,
}

impl Clone for TransversalMatroid {
    fn clone(&self) -> Self {
        Self {
            ground: self.ground.clone(),
            tasks: self.tasks,
            adjacency: self.adjacency.clone(),
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl TransversalMatroid {
    /// `adjacency[w]` lists the tasks worker `w` can take.
    pub fn new(tasks: usize, adjacency: Vec<Vec<usize>>) -> Result<Self> {
        for (w, list) in adjacency.iter().enumerate() {
            if let Some(t) = list.iter().find(|t| **t >= tasks) {
                return Err(Error::validation(format!("worker {w} lists task {t} outside 0..{tasks}")));
            }
        }
        Ok(Self {
            ground: (0..adjacency.len()).map(ElementId::from).collect(),
            tasks,
            adjacency: adjacency.into_iter().map(|l| l.into_iter().map(|t| t as u32).collect()).collect(),
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn tasks(&self) -> usize {
        self.tasks
    }

    pub fn adjacency(&self, worker: ElementId) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[worker.index()].iter().map(|t| *t as usize)
    }

    fn matching_size(&self, workers: &[ElementId]) -> usize {
        let mut task_owner: Vec<Option<usize>> = vec![None; self.tasks];
        let mut matched = 0;
        let mut seen = vec![false; self.tasks];
        for slot in 0..workers.len() {
            seen.iter_mut().for_each(|s| *s = false);
            if self.augment(slot, workers, &mut task_owner, &mut seen) {
                matched += 1;
            }
        }
        matched
    }

    fn augment(&self, slot: usize, workers: &[ElementId], task_owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &t in &self.adjacency[workers[slot].index()] {
            let t = t as usize;
            if seen[t] {
                continue;
            }
            seen[t] = true;
            let free = match task_owner[t] {
                None => true,
                Some(other) => self.augment(other, workers, task_owner, seen),
            };
            if free {
                task_owner[t] = Some(slot);
                return true;
            }
        }
        false
    }
}

impl Matroid for TransversalMatroid {
    fn ground(&self) -> &[ElementId] {
        &self.ground
    }

    fn rank_unchecked(&self, set: &[ElementId]) -> usize {
        let mut key = set.to_vec();
        key.sort_unstable();
        if let Some(r) = self.memo.lock().get(&key) {
            return *r;
        }
        let r = self.matching_size(&key);
        let mut memo = self.memo.lock();
        if memo.len() >= MEMO_LIMIT {
            memo.clear();
        }
        memo.insert(key, r);
        r
    }
}
