//! Backtracking realization of a target concurrence matrix.
//!
//! Blocks are placed in nondecreasing lexicographic order, so each block
//! multiset is visited exactly once. The next block must have the smallest
//! point of positive remaining degree as its minimum: every smaller point is
//! exhausted, and later blocks cannot contain this point otherwise.

use crate::feasibility::FeasibilityCase;
use crate::incidence::{ConcurrenceMatrix, IncidenceStructure};
use crate::iso::{is_isomorphic, IsoBudgetExhausted};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const DEFAULT_SECONDS_BUDGET: f64 = 600.0;
const MAX_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    First,
    All,
    Count,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_seconds: Option<f64>,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_nodes: DEFAULT_NODE_BUDGET, max_seconds: Some(DEFAULT_SECONDS_BUDGET) }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Self { max_nodes, max_seconds: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTask {
    pub target: ConcurrenceMatrix,
    pub k: usize,
    pub b: usize,
    pub allow_repeats: bool,
    pub mode: SearchMode,
    pub budget: Budget,
    /// When set to (α, β), candidate blocks must satisfy the flag-count law of a
    /// PGD with these parameters measured on the target matrix.
    pub flag_sums: Option<(i64, i64)>,
}

impl SearchTask {
    pub fn new(target: ConcurrenceMatrix, k: usize, b: usize) -> Self {
        Self {
            target,
            k,
            b,
            allow_repeats: true,
            mode: SearchMode::First,
            budget: Budget::default(),
            flag_sums: None,
        }
    }

    /// Task for a feasible circulant row, with the flag-count filter enabled.
    ///
    /// Any realization of a matrix with spectrum [kr, n^σ, 0^…] satisfies
    /// NN^TN = nN + αJ, so restricting to blocks with the right flag sums
    /// loses no solutions.
    pub fn from_case(case: &FeasibilityCase) -> Self {
        let mut t = Self::new(case.row.matrix(), case.k as usize, case.params.b as usize);
        t.flag_sums = Some((case.params.alpha as i64, case.params.beta as i64));
        t
    }

    pub fn with_mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_repeats(mut self, allow: bool) -> Self {
        self.allow_repeats = allow;
        self
    }

    pub fn without_flag_filter(mut self) -> Self {
        self.flag_sums = None;
        self
    }

    pub fn v(&self) -> usize {
        self.target.v()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Progress {
    pub nodes: u64,
    pub elapsed_ms: u128,
    pub found: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum SearchOutcome {
    /// In Count mode `witnesses` holds only the first realization.
    Realized { witnesses: Vec<IncidenceStructure>, count: u64 },
    Unrealizable,
    BudgetExhausted(Progress),
}

impl SearchOutcome {
    pub fn is_realized(&self) -> bool {
        matches!(self, SearchOutcome::Realized { .. })
    }

    pub fn witness(&self) -> Option<&IncidenceStructure> {
        match self {
            SearchOutcome::Realized { witnesses, .. } => witnesses.first(),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Realized { .. } => "Realized",
            SearchOutcome::Unrealizable => "Unrealizable",
            SearchOutcome::BudgetExhausted(_) => "BudgetExhausted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed_ms: u128,
    pub candidates: usize,
}

pub fn realize(task: &SearchTask) -> SearchOutcome {
    realize_with_stats(task).0
}

pub fn realize_with_stats(task: &SearchTask) -> (SearchOutcome, SearchStats) {
    let start = Instant::now();
    let Some(problem) = Problem::new(task) else {
        let stats = SearchStats { nodes: 0, elapsed_ms: 0, candidates: 0 };
        return (SearchOutcome::Unrealizable, stats);
    };
    let shared = Shared {
        nodes: AtomicU64::new(0),
        abort: AtomicBool::new(false),
        deadline: task.budget.max_seconds.map(|s| start + Duration::from_secs_f64(s)),
        max_nodes: task.budget.max_nodes,
    };
    let results: Vec<SubtreeResult> = match task.mode {
        SearchMode::First => vec![problem.run_from(None, &shared)],
        SearchMode::All | SearchMode::Count => {
            let firsts: Vec<usize> = problem.start_candidates();
            firsts.into_par_iter().map(|j| problem.run_from(Some(j), &shared)).collect()
        }
    };
    let nodes = shared.nodes.load(Ordering::Relaxed);
    // A subtree total above the budget counts as exhaustion even when the
    // workers happened to finish, so the verdict does not depend on scheduling.
    let aborted = shared.abort.load(Ordering::Relaxed) || nodes > task.budget.max_nodes;
    let mut witnesses = Vec::new();
    let mut count = 0;
    for r in results {
        count += r.count;
        witnesses.extend(r.witnesses);
    }
    if task.mode == SearchMode::Count {
        witnesses.truncate(1);
    }
    let stats = SearchStats {
        nodes,
        elapsed_ms: start.elapsed().as_millis(),
        candidates: problem.blocks.len(),
    };
    let outcome = if task.mode == SearchMode::First && count > 0 {
        SearchOutcome::Realized { witnesses, count }
    } else if aborted {
        SearchOutcome::BudgetExhausted(Progress { nodes, elapsed_ms: stats.elapsed_ms, found: count })
    } else if count > 0 {
        SearchOutcome::Realized { witnesses, count }
    } else {
        SearchOutcome::Unrealizable
    };
    (outcome, stats)
}

struct Shared {
    nodes: AtomicU64,
    abort: AtomicBool,
    deadline: Option<Instant>,
    max_nodes: u64,
}

struct Candidate {
    points: Vec<usize>,
    pairs: Vec<usize>,
}

struct Problem {
    v: usize,
    b: usize,
    allow_repeats: bool,
    mode: SearchMode,
    /// Remaining pair budget at the start, indexed x*v+y with x < y.
    pair_budget: Vec<i32>,
    degree: Vec<i32>,
    blocks: Vec<Candidate>,
    /// Candidates with minimum point p occupy `by_min[p]..by_min[p+1]`.
    by_min: Vec<usize>,
}

struct SubtreeResult {
    witnesses: Vec<IncidenceStructure>,
    count: u64,
}

impl Problem {
    fn new(task: &SearchTask) -> Option<Self> {
        let t = &task.target;
        let v = t.v();
        let k = task.k;
        if v > MAX_POINTS || k == 0 || k > v || !t.is_symmetric() {
            return None;
        }
        let r = t.diagonal();
        if (0..v).any(|i| t.get(i, i) != r) || (task.b * k) as i64 != v as i64 * r {
            return None;
        }
        if (0..v).any(|i| t.row(i).iter().sum::<i64>() != r * k as i64) {
            return None;
        }
        if (0..v).any(|i| t.row(i).iter().any(|&x| x < 0)) {
            return None;
        }
        let mut blocks = Vec::new();
        let mut current = Vec::with_capacity(k);
        enumerate_blocks(t, k, 0, &mut current, &mut blocks);
        if let Some((alpha, beta)) = task.flag_sums {
            blocks.retain(|b: &Vec<usize>| {
                (0..v).all(|x| {
                    let s: i64 = b.iter().map(|&y| t.get(x, y)).sum();
                    s == if b.contains(&x) { beta } else { alpha }
                })
            });
        }
        let mut by_min = vec![0; v + 1];
        for p in 0..v {
            by_min[p + 1] = by_min[p] + blocks.iter().filter(|b| b[0] == p).count();
        }
        let blocks = blocks
            .into_iter()
            .map(|points| {
                let mut pairs = Vec::with_capacity(k * (k - 1) / 2);
                for (i, &x) in points.iter().enumerate() {
                    for &y in &points[i + 1..] {
                        pairs.push(x * v + y);
                    }
                }
                Candidate { points, pairs }
            })
            .collect();
        let mut pair_budget = vec![0i32; v * v];
        for x in 0..v {
            for y in x + 1..v {
                pair_budget[x * v + y] = t.get(x, y) as i32;
            }
        }
        Some(Self {
            v,
            b: task.b,
            allow_repeats: task.allow_repeats,
            mode: task.mode,
            pair_budget,
            degree: vec![r as i32; v],
            blocks,
            by_min,
        })
    }

    fn start_candidates(&self) -> Vec<usize> {
        (self.by_min[0]..self.by_min[1]).collect()
    }

    fn run_from(&self, first: Option<usize>, shared: &Shared) -> SubtreeResult {
        let mut state = State {
            pair: self.pair_budget.clone(),
            degree: self.degree.clone(),
            chosen: Vec::with_capacity(self.b),
            out: SubtreeResult { witnesses: Vec::new(), count: 0 },
            local_nodes: 0,
        };
        if self.b == 0 {
            if state.degree.iter().all(|&d| d == 0) {
                state.out.count = 1;
                state.out.witnesses.push(IncidenceStructure::empty(self.v));
            }
            return state.out;
        }
        match first {
            None => {
                self.dfs(&mut state, 0, shared);
            }
            Some(j) => {
                if self.fits(&state, j) {
                    shared.nodes.fetch_add(1, Ordering::Relaxed);
                    self.apply(&mut state, j, -1);
                    if self.consistent(&state, j) {
                        self.dfs(&mut state, j + usize::from(!self.allow_repeats), shared);
                    }
                }
            }
        }
        shared.nodes.fetch_add(state.local_nodes, Ordering::Relaxed);
        state.out
    }

    fn fits(&self, s: &State, j: usize) -> bool {
        let c = &self.blocks[j];
        c.points.iter().all(|&p| s.degree[p] > 0) && c.pairs.iter().all(|&q| s.pair[q] > 0)
    }

    fn apply(&self, s: &mut State, j: usize, delta: i32) {
        let c = &self.blocks[j];
        for &p in &c.points {
            s.degree[p] += delta;
        }
        for &q in &c.pairs {
            s.pair[q] += delta;
        }
        if delta < 0 {
            s.chosen.push(j);
        } else {
            s.chosen.pop();
        }
    }

    /// Pair budgets touching the block cannot exceed either endpoint's remaining degree.
    fn consistent(&self, s: &State, j: usize) -> bool {
        let v = self.v;
        for &x in &self.blocks[j].points {
            let dx = s.degree[x];
            for y in 0..v {
                if y == x {
                    continue;
                }
                let q = if x < y { x * v + y } else { y * v + x };
                let need = s.pair[q];
                if need > dx || need > s.degree[y] {
                    return false;
                }
            }
        }
        true
    }

    /// Returns false when the search must stop (budget or First-mode success).
    fn dfs(&self, s: &mut State, from: usize, shared: &Shared) -> bool {
        if s.chosen.len() == self.b {
            s.out.count += 1;
            if self.mode != SearchMode::Count || s.out.witnesses.is_empty() {
                let blocks = s.chosen.iter().map(|&j| self.blocks[j].points.clone()).collect();
                s.out.witnesses.push(
                    IncidenceStructure::from_canonical(self.v, blocks)
                        .expect("search emits canonical block lists"),
                );
            }
            return self.mode != SearchMode::First;
        }
        let Some(p) = s.degree.iter().position(|&d| d > 0) else {
            return true;
        };
        let lo = from.max(self.by_min[p]);
        let hi = self.by_min[p + 1];
        for j in lo..hi {
            if !self.fits(s, j) {
                continue;
            }
            s.local_nodes += 1;
            if s.local_nodes & 0xfff == 0 && !self.tick(s, shared) {
                return false;
            }
            self.apply(s, j, -1);
            let keep_going = if self.consistent(s, j) {
                self.dfs(s, j + usize::from(!self.allow_repeats), shared)
            } else {
                true
            };
            self.apply(s, j, 1);
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn tick(&self, s: &mut State, shared: &Shared) -> bool {
        let total = shared.nodes.fetch_add(s.local_nodes, Ordering::Relaxed) + s.local_nodes;
        s.local_nodes = 0;
        if shared.abort.load(Ordering::Relaxed) {
            return false;
        }
        let late = shared.deadline.is_some_and(|d| Instant::now() >= d);
        if total > shared.max_nodes || late {
            shared.abort.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

struct State {
    pair: Vec<i32>,
    degree: Vec<i32>,
    chosen: Vec<usize>,
    out: SubtreeResult,
    local_nodes: u64,
}

/// All k-subsets (in lexicographic order) whose pairs all have positive target concurrence.
fn enumerate_blocks(
    t: &ConcurrenceMatrix,
    k: usize,
    start: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    let v = t.v();
    for p in start..v {
        if v - p < k - current.len() {
            break;
        }
        if current.iter().all(|&x| t.get(x, p) > 0) {
            current.push(p);
            enumerate_blocks(t, k, p + 1, current, out);
            current.pop();
        }
    }
}

pub fn verify_witness(d: &IncidenceStructure, task: &SearchTask) -> bool {
    d.v() == task.v()
        && d.b() == task.b
        && d.blocks().iter().all(|b| b.len() == task.k)
        && d.pair_counts() == task.target
}

/// Isomorphism-class representatives; each is the least member of its class in canonical order.
pub fn count_up_to_iso(
    outcomes: &[IncidenceStructure],
) -> Result<Vec<IncidenceStructure>, IsoBudgetExhausted> {
    let mut sorted = outcomes.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut reps: Vec<IncidenceStructure> = Vec::new();
    for d in sorted {
        let mut found = false;
        for r in &reps {
            if is_isomorphic(r, &d)?.is_some() {
                found = true;
                break;
            }
        }
        if !found {
            reps.push(d);
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::CirculantRow;

    fn task(row: &str, k: usize, b: usize) -> SearchTask {
        let row: CirculantRow = row.parse().unwrap();
        SearchTask::new(row.matrix(), k, b)
    }

    #[test]
    fn td132_is_found() {
        let t = task("6:2,1,1,0", 3, 4);
        let out = realize(&t);
        let w = out.witness().unwrap();
        assert!(verify_witness(w, &t));
        let all = realize(&t.clone().with_mode(SearchMode::All));
        let SearchOutcome::Realized { witnesses, count } = all else { panic!() };
        assert_eq!(count as usize, witnesses.len());
        assert_eq!(count_up_to_iso(&witnesses).unwrap().len(), 1);
    }

    #[test]
    fn impossible_row() {
        let t = task("6:4,3,1,0", 3, 8);
        assert_eq!(realize(&t), SearchOutcome::Unrealizable);
    }

    #[test]
    fn bad_task_is_unrealizable() {
        // b·k != v·r
        assert_eq!(realize(&task("6:2,1,1,0", 3, 5)), SearchOutcome::Unrealizable);
    }

    #[test]
    fn tiny_budget_exhausts() {
        let t = task("8:5,2,3,2,1", 4, 10).with_budget(Budget::nodes(1));
        let t = t.with_mode(SearchMode::All);
        assert!(matches!(realize(&t), SearchOutcome::BudgetExhausted(_)));
    }

    #[test]
    fn count_matches_all() {
        let t = task("6:4,2,2,0", 3, 8);
        let SearchOutcome::Realized { witnesses, count } = realize(&t.clone().with_mode(SearchMode::All)) else {
            panic!()
        };
        let SearchOutcome::Realized { count: c2, witnesses: w2 } = realize(&t.with_mode(SearchMode::Count)) else {
            panic!()
        };
        assert_eq!(count, c2);
        assert_eq!(w2.len(), 1);
        assert_eq!(witnesses.len() as u64, count);
        let mut sorted = witnesses.clone();
        sorted.sort();
        assert_eq!(sorted, witnesses);
    }
}
