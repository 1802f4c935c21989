//! Backtracking over exact level profiles.
//!
//! Every target level owns a candidate pool (all sets of that size, ordered
//! by their actual bit pattern) and, at each search depth, a bitset of the
//! candidates still compatible with everything placed so far. Placing a set
//! narrows the bitsets of all later levels; a later level left with fewer
//! than `r` survivors cuts the branch. Within a level the `r` sets are picked
//! in strictly increasing pool order.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::bounds::binomial;
use crate::colex::ColexSubsets;
use crate::family::{Family, GroundSize};

use super::symmetry;
use super::{Outcome, ProfileInstance, SearchBudget, SearchConfig, SearchOutcome, SearchStats};

/// Upper limit on the precomputed compatibility matrix, in 64-bit words.
const COMPAT_WORD_LIMIT: usize = 1 << 23;
const TICK: u64 = 1024;

struct Level {
    t: usize,
    complement: bool,
    /// Encoded sets, ascending by actual bit pattern.
    pool: Vec<u64>,
    offset: usize,
    words: usize,
    base: usize,
}

impl Level {
    #[inline]
    fn decode(&self, x: u64, full: u64) -> u64 {
        if self.complement {
            !x & full
        } else {
            x
        }
    }
}

struct Prepared {
    full: u64,
    r: usize,
    levels: Vec<Level>,
    total_words: usize,
    /// Row `g` lists the candidates of every later level compatible with
    /// global candidate `g`.
    compat: Option<Vec<u64>>,
    root: Vec<u64>,
}

/// Whether one set contains the other; the two come from different levels.
#[inline]
fn comparable(lx: &Level, x: u64, ly: &Level, y: u64, full: u64) -> bool {
    let (s, ls, b, lb) = if lx.t < ly.t {
        (x, lx, y, ly)
    } else {
        (y, ly, x, lx)
    };
    match (ls.complement, lb.complement) {
        (false, false) => s & !b == 0,
        // S ⊆ [n] \ c  iff  S ∩ c = ∅
        (false, true) => s & b == 0,
        // [n] \ cs ⊆ [n] \ cb  iff  cb ⊆ cs
        (true, true) => b & !s == 0,
        (true, false) => ls.decode(s, full) & !b == 0,
    }
}

impl Prepared {
    fn new(inst: &ProfileInstance, config: &SearchConfig) -> Result<Prepared, String> {
        let n = inst.n.get();
        let full = inst.n.full_mask();
        let total: u128 = inst.levels.iter().map(|&t| binomial(n, t as i64)).sum();
        if total > config.max_pool_total as u128 {
            return Err(format!(
                "candidate pools hold {total} sets, above the limit of {}",
                config.max_pool_total
            ));
        }
        let mut levels: Vec<Level> = inst
            .levels
            .iter()
            .map(|&t| {
                let complement = config.complement_encoding && 2 * t > n as usize;
                let mut pool: Vec<u64> = ColexSubsets::new(n, t as u32).collect();
                if complement {
                    // complementing reverses the order; keep actual-bits order
                    pool.iter_mut().for_each(|x| *x = !*x & full);
                }
                Level {
                    t,
                    complement,
                    pool,
                    offset: 0,
                    words: 0,
                    base: 0,
                }
            })
            .collect();
        levels.sort_by_key(|l| (l.pool.len(), l.t));
        let (mut offset, mut base) = (0, 0);
        for l in &mut levels {
            l.offset = offset;
            l.words = l.pool.len().div_ceil(64);
            l.base = base;
            offset += l.words;
            base += l.pool.len();
        }
        let total_words = offset;
        let mut root = vec![0u64; total_words];
        for l in &levels {
            for i in 0..l.pool.len() {
                root[l.offset + i / 64] |= 1 << (i % 64);
            }
        }

        let compat = (base * total_words <= COMPAT_WORD_LIMIT).then(|| {
            let mut m = vec![0u64; base * total_words];
            for (i, li) in levels.iter().enumerate() {
                for (xi, &x) in li.pool.iter().enumerate() {
                    let row = &mut m[(li.base + xi) * total_words..][..total_words];
                    for lj in &levels[i + 1..] {
                        for (yi, &y) in lj.pool.iter().enumerate() {
                            if !comparable(li, x, lj, y, full) {
                                row[lj.offset + yi / 64] |= 1 << (yi % 64);
                            }
                        }
                    }
                }
            }
            m
        });

        Ok(Prepared {
            full,
            r: inst.r,
            levels,
            total_words,
            compat,
            root,
        })
    }

    fn decode_witness(&self, ground: GroundSize, chosen: &[(usize, usize)]) -> Family {
        let sets = chosen.iter().map(|&(li, i)| {
            let l = &self.levels[li];
            l.decode(l.pool[i], self.full)
        });
        Family::from_bits(ground, sets).expect("placed sets are distinct and inside the ground set")
    }
}

struct Shared {
    stop: AtomicBool,
    budget_hit: AtomicBool,
    nodes: AtomicU64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
}

enum Flow {
    Found,
    Exhausted,
    Stopped,
}

/// `(level index, candidate index)` per placed set.
type Chosen = Vec<(usize, usize)>;

struct Worker<'a> {
    prep: &'a Prepared,
    forward_check: bool,
    shared: &'a Shared,
    frames: Vec<u64>,
    chosen: Chosen,
    pending: u64,
    tick_every: u64,
    stats: SearchStats,
    fc_prunes: u64,
}

impl<'a> Worker<'a> {
    fn new(prep: &'a Prepared, config: &SearchConfig, shared: &'a Shared) -> Self {
        let depth = prep.r * prep.levels.len() + 1;
        Worker {
            prep,
            forward_check: config.forward_check,
            shared,
            frames: vec![0; depth * prep.total_words],
            chosen: Vec::with_capacity(depth),
            pending: 0,
            tick_every: shared.max_nodes.map_or(TICK, |m| m.clamp(1, TICK)),
            stats: SearchStats::default(),
            fc_prunes: 0,
        }
    }

    fn sync_nodes(&mut self) -> u64 {
        let total = self.shared.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
        self.stats.nodes += self.pending;
        self.pending = 0;
        total
    }

    fn flush(&mut self) -> bool {
        let sh = self.shared;
        let total = self.sync_nodes();
        let over_nodes = sh.max_nodes.is_some_and(|m| total >= m);
        let over_time = sh.deadline.is_some_and(|d| Instant::now() >= d);
        if over_nodes || over_time {
            sh.budget_hit.store(true, Ordering::Relaxed);
            sh.stop.store(true, Ordering::Relaxed);
        }
        !sh.stop.load(Ordering::Relaxed)
    }

    /// Counts one node; false when the search must stop.
    #[inline]
    fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending >= self.tick_every {
            return self.flush();
        }
        true
    }

    #[inline]
    fn frame(&self, depth: usize) -> &[u64] {
        let w = self.prep.total_words;
        &self.frames[depth * w..(depth + 1) * w]
    }

    /// Next alive candidate of `level` at or after `from`.
    fn next_alive(&self, depth: usize, li: usize, from: usize) -> Option<usize> {
        let l = &self.prep.levels[li];
        if from >= l.pool.len() {
            return None;
        }
        let bits = &self.frame(depth)[l.offset..l.offset + l.words];
        let mut w = from / 64;
        let mut word = bits[w] & (u64::MAX << (from % 64));
        loop {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
            w += 1;
            if w == l.words {
                return None;
            }
            word = bits[w];
        }
    }

    fn count_from(&self, depth: usize, li: usize, from: usize) -> usize {
        let l = &self.prep.levels[li];
        if from >= l.pool.len() {
            return 0;
        }
        let bits = &self.frame(depth)[l.offset..l.offset + l.words];
        let w = from / 64;
        let mut c = (bits[w] & (u64::MAX << (from % 64))).count_ones() as usize;
        for word in &bits[w + 1..] {
            c += word.count_ones() as usize;
        }
        c
    }

    /// Writes frame `depth + 1` after placing candidate `i` of level `li`.
    /// Returns false when a later level cannot be completed any more.
    fn place(&mut self, depth: usize, li: usize, i: usize) -> bool {
        let prep = self.prep;
        let w = prep.total_words;
        let (head, tail) = self.frames.split_at_mut((depth + 1) * w);
        let src = &head[depth * w..];
        let dst = &mut tail[..w];
        let cur = &prep.levels[li];
        dst[cur.offset..cur.offset + cur.words]
            .copy_from_slice(&src[cur.offset..cur.offset + cur.words]);
        let later = &prep.levels[li + 1..];
        let mut ok = true;
        match &prep.compat {
            Some(m) => {
                let row = &m[(cur.base + i) * w..][..w];
                for l in later {
                    let mut count = 0;
                    for k in l.offset..l.offset + l.words {
                        let v = src[k] & row[k];
                        dst[k] = v;
                        count += v.count_ones() as usize;
                    }
                    ok &= count >= prep.r;
                }
            }
            None => {
                let x = cur.pool[i];
                for l in later {
                    let mut count = 0;
                    for k in 0..l.words {
                        let mut word = src[l.offset + k];
                        let mut rest = word;
                        while rest != 0 {
                            let b = rest.trailing_zeros() as usize;
                            rest &= rest - 1;
                            if comparable(cur, x, l, l.pool[k * 64 + b], prep.full) {
                                word &= !(1u64 << b);
                            }
                        }
                        dst[l.offset + k] = word;
                        count += word.count_ones() as usize;
                    }
                    ok &= count >= prep.r;
                }
            }
        }
        ok || !self.forward_check
    }

    fn dfs(&mut self, depth: usize, li: usize, placed: usize, start: usize) -> Flow {
        let r = self.prep.r;
        let (li, placed, start) = if placed == r {
            (li + 1, 0, 0)
        } else {
            (li, placed, start)
        };
        if li == self.prep.levels.len() {
            return Flow::Found;
        }
        let need = r - placed;
        let mut next = self.next_alive(depth, li, start);
        while let Some(i) = next {
            if self.forward_check && self.count_from(depth, li, i) < need {
                self.fc_prunes += 1;
                break;
            }
            if !self.tick() {
                return Flow::Stopped;
            }
            if self.place(depth, li, i) {
                self.chosen.push((li, i));
                self.stats.max_depth = self.stats.max_depth.max(self.chosen.len());
                match self.dfs(depth + 1, li, placed + 1, i + 1) {
                    Flow::Exhausted => {}
                    other => return other,
                }
                self.chosen.pop();
            } else {
                self.fc_prunes += 1;
            }
            next = self.next_alive(depth, li, i + 1);
        }
        Flow::Exhausted
    }

    /// Searches every completion of a first-level prefix.
    fn run_prefix(&mut self, prefix: &[usize]) -> Flow {
        let w = self.prep.total_words;
        self.frames[..w].copy_from_slice(&self.prep.root);
        self.chosen.clear();
        for (d, &i) in prefix.iter().enumerate() {
            if !self.tick() {
                return Flow::Stopped;
            }
            if !self.place(d, 0, i) {
                self.fc_prunes += 1;
                return Flow::Exhausted;
            }
            self.chosen.push((0, i));
        }
        self.stats.max_depth = self.stats.max_depth.max(self.chosen.len());
        let last = *prefix.last().expect("prefixes are non-empty");
        self.dfs(prefix.len(), 0, prefix.len(), last + 1)
    }
}

/// First-level starting points: orbit representatives, or single first sets.
fn prefixes(
    inst: &ProfileInstance,
    prep: &Prepared,
    config: &SearchConfig,
    stats: &mut SearchStats,
) -> Vec<Vec<usize>> {
    let first = &prep.levels[0];
    let pool_len = first.pool.len();
    if !config.symmetry {
        return (0..pool_len).map(|i| vec![i]).collect();
    }
    let n = inst.n.get();
    let t_enc = first.pool[0].count_ones();
    let all = binomial(pool_len as u32, prep.r as i64);
    if let Some(reps) = symmetry::orbit_representatives(n, t_enc, prep.r, config.symmetry_work_cap)
    {
        let index: std::collections::HashMap<u64, usize> = first
            .pool
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i))
            .collect();
        let mut out: Vec<Vec<usize>> = reps
            .iter()
            .map(|fam| {
                let mut v: Vec<usize> = fam.iter().map(|x| index[x]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        out.sort();
        stats.prunes.insert(
            "symmetry".into(),
            (all - out.len() as u128).min(u64::MAX as u128) as u64,
        );
        out
    } else {
        // every first-level family is isomorphic to one holding the
        // canonically smallest set, which is pool index 0
        let kept = binomial(pool_len as u32 - 1, prep.r as i64 - 1);
        stats
            .prunes
            .insert("symmetry".into(), (all - kept).min(u64::MAX as u128) as u64);
        stats.note = Some("orbit representatives over work cap; first set fixed only".into());
        vec![vec![0]]
    }
}

pub(super) fn run(
    inst: &ProfileInstance,
    budget: &SearchBudget,
    config: &SearchConfig,
) -> SearchOutcome {
    let start = Instant::now();
    let mut stats = SearchStats {
        threads: budget.threads.max(1),
        ..SearchStats::default()
    };
    let done = |outcome, mut stats: SearchStats| {
        stats.elapsed_ms = start.elapsed().as_millis() as u64;
        SearchOutcome { outcome, stats }
    };

    if inst.levels.is_empty() {
        return done(Outcome::Feasible(Family::empty(inst.n)), stats);
    }
    let n = inst.n.get();
    if let Some(&t) = inst
        .levels
        .iter()
        .find(|&&t| binomial(n, t as i64) < inst.r as u128)
    {
        stats.prunes.insert("level_too_small".into(), 1);
        stats.note = Some(format!("level {t} has fewer than r sets"));
        return done(Outcome::Infeasible, stats);
    }
    let prep = match Prepared::new(inst, config) {
        Ok(p) => p,
        Err(msg) => {
            stats.note = Some(msg);
            return done(Outcome::Unknown, stats);
        }
    };
    let items = prefixes(inst, &prep, config, &mut stats);
    stats.first_level_branches = items.len() as u64;

    let shared = Shared {
        stop: AtomicBool::new(false),
        budget_hit: AtomicBool::new(false),
        nodes: AtomicU64::new(0),
        max_nodes: budget.max_nodes,
        deadline: budget.deadline_from(start),
    };
    // earliest prefix with a hit
    let found: Mutex<Option<(usize, Chosen)>> = Mutex::new(None);
    let next_item = AtomicUsize::new(0);
    let threads = budget.threads.max(1).min(items.len().max(1));

    let work = |worker: &mut Worker| loop {
        if shared.stop.load(Ordering::Relaxed) {
            break;
        }
        let k = next_item.fetch_add(1, Ordering::Relaxed);
        let Some(prefix) = items.get(k) else { break };
        match worker.run_prefix(prefix) {
            Flow::Found => {
                let mut slot = found.lock().unwrap();
                if slot.as_ref().is_none_or(|(j, _)| k < *j) {
                    *slot = Some((k, worker.chosen.clone()));
                }
                shared.stop.store(true, Ordering::Relaxed);
                break;
            }
            Flow::Stopped => break,
            Flow::Exhausted => {}
        }
    };

    let collect = |worker: &mut Worker, stats: &mut SearchStats| {
        worker.sync_nodes();
        let mut s = std::mem::take(&mut worker.stats);
        s.prunes.insert("forward_check".into(), worker.fc_prunes);
        s.elapsed_ms = 0;
        s.first_level_branches = 0;
        s.threads = 0;
        stats.absorb(&s);
    };

    if threads == 1 {
        let mut worker = Worker::new(&prep, config, &shared);
        work(&mut worker);
        collect(&mut worker, &mut stats);
    } else {
        let per_thread: Vec<SearchStats> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|_| {
                    scope.spawn(|| {
                        let mut worker = Worker::new(&prep, config, &shared);
                        work(&mut worker);
                        let mut s = SearchStats::default();
                        collect(&mut worker, &mut s);
                        s
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for s in &per_thread {
            stats.absorb(s);
        }
    }

    let outcome = match found.into_inner().unwrap() {
        Some((_, chosen)) => Outcome::Feasible(prep.decode_witness(inst.n, &chosen)),
        None if shared.budget_hit.load(Ordering::Relaxed) => Outcome::Unknown,
        None => Outcome::Infeasible,
    };
    done(outcome, stats)
}
