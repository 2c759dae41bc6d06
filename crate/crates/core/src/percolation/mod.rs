//! Monte Carlo bond percolation on rectangular lattices: deterministic
//! counter-based sampling, union-find crossing verdicts, the exact
//! primal/dual complement law, and thread-count-invariant estimation.

mod rng;
mod union_find;

use serde::{Deserialize, Serialize};

pub use rng::{edge_bits, edge_open, open_threshold, splitmix64, trial_key, OpenThreshold};
pub use union_find::UnionFind;

/// One lattice geometry plus its sampling parameters.
///
/// Sites form a `width x height` grid; bonds live on the edges. The aspect
/// ratio is measured in bond lengths: `r = (width-1)/(height-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub width: u32,
    pub height: u32,
    pub p: f64,
    pub seed: u64,
}

impl LatticeSpec {
    pub fn new(width: u32, height: u32, p: f64, seed: u64) -> Self {
        assert!(width >= 2 && height >= 2, "lattice needs at least 2x2 sites");
        assert!((0.0..=1.0).contains(&p), "p must lie in [0,1]");
        LatticeSpec {
            width,
            height,
            p,
            seed,
        }
    }

    /// Aspect ratio in bond lengths.
    pub fn aspect_ratio(&self) -> f64 {
        (self.width as f64 - 1.0) / (self.height as f64 - 1.0)
    }

    pub fn sites(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Horizontal-edge count `(width-1) * height`.
    pub fn h_edges(&self) -> usize {
        (self.width as usize - 1) * self.height as usize
    }

    /// Vertical-edge count `width * (height-1)`.
    pub fn v_edges(&self) -> usize {
        self.width as usize * (self.height as usize - 1)
    }

    pub fn edges(&self) -> usize {
        self.h_edges() + self.v_edges()
    }

    /// The geometry whose horizontal crossing exactly complements this
    /// one's: the transposed dual lattice, sampled at `1 - p`.
    pub fn dual_pair_spec(&self) -> LatticeSpec {
        LatticeSpec::new(self.height + 1, self.width - 1, 1.0 - self.p, self.seed)
    }
}

/// One bond configuration: occupancy bitsets for horizontal and vertical
/// edges of a `width x height` site grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BondConfig {
    width: u32,
    height: u32,
    h_open: Vec<u64>,
    v_open: Vec<u64>,
}

fn bitset(words: usize) -> Vec<u64> {
    vec![0u64; words]
}

fn bit_get(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

fn bit_set(v: &mut [u64], i: usize) {
    v[i / 64] |= 1 << (i % 64);
}

impl BondConfig {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Build from an explicit edge predicate; edge ids enumerate horizontal
    /// edges row-major first, then vertical edges row-major.
    pub fn from_open_edges(width: u32, height: u32, open: impl Fn(u64) -> bool) -> Self {
        let nh = (width as usize - 1) * height as usize;
        let nv = width as usize * (height as usize - 1);
        let mut h_open = bitset(nh.div_ceil(64));
        let mut v_open = bitset(nv.div_ceil(64));
        for e in 0..nh {
            if open(e as u64) {
                bit_set(&mut h_open, e);
            }
        }
        for e in 0..nv {
            if open((nh + e) as u64) {
                bit_set(&mut v_open, e);
            }
        }
        BondConfig {
            width,
            height,
            h_open,
            v_open,
        }
    }

    /// Occupancy of the horizontal edge `(x,y)-(x+1,y)`.
    pub fn h_edge_open(&self, x: u32, y: u32) -> bool {
        debug_assert!(x + 1 < self.width && y < self.height);
        bit_get(&self.h_open, y as usize * (self.width as usize - 1) + x as usize)
    }

    /// Occupancy of the vertical edge `(x,y)-(x,y+1)`.
    pub fn v_edge_open(&self, x: u32, y: u32) -> bool {
        debug_assert!(x < self.width && y + 1 < self.height);
        bit_get(&self.v_open, y as usize * self.width as usize + x as usize)
    }

    pub fn open_edge_count(&self) -> usize {
        self.h_open.iter().map(|w| w.count_ones() as usize).sum::<usize>()
            + self.v_open.iter().map(|w| w.count_ones() as usize).sum::<usize>()
    }
}

/// Draw the bond configuration of one trial. Each edge is open independently
/// with probability `p`; the stream is a pure function of
/// `(seed, trial, edge index)`, so results do not depend on evaluation order.
pub fn sample_config(spec: &LatticeSpec, trial: u64) -> BondConfig {
    let key = trial_key(spec.seed, trial);
    let threshold = open_threshold(spec.p);
    BondConfig::from_open_edges(spec.width, spec.height, |e| {
        edge_open(edge_bits(key, e), threshold)
    })
}

/// Union all open bonds into cluster sets (no virtual terminals touched).
fn cluster_bonds(config: &BondConfig, uf: &mut UnionFind) {
    let w = config.width;
    let h = config.height;
    let site = |x: u32, y: u32| y as usize * w as usize + x as usize;
    for y in 0..h {
        for x in 0..w - 1 {
            if config.h_edge_open(x, y) {
                uf.union(site(x, y), site(x + 1, y));
            }
        }
    }
    for y in 0..h - 1 {
        for x in 0..w {
            if config.v_edge_open(x, y) {
                uf.union(site(x, y), site(x, y + 1));
            }
        }
    }
}

fn attach_lr_terminals(config: &BondConfig, uf: &mut UnionFind) {
    let w = config.width;
    let left = uf.terminal(UnionFind::LEFT);
    let right = uf.terminal(UnionFind::RIGHT);
    for y in 0..config.height {
        uf.union(left, y as usize * w as usize);
        uf.union(right, y as usize * w as usize + (w as usize - 1));
    }
}

fn attach_tb_terminals(config: &BondConfig, uf: &mut UnionFind) {
    let w = config.width as usize;
    let h = config.height as usize;
    let top = uf.terminal(UnionFind::TOP);
    let bottom = uf.terminal(UnionFind::BOTTOM);
    for x in 0..w {
        uf.union(bottom, x);
        uf.union(top, (h - 1) * w + x);
    }
}

/// Is there an open path from the leftmost to the rightmost column?
pub fn has_horizontal_crossing(config: &BondConfig) -> bool {
    let mut uf = UnionFind::new(config.width as usize * config.height as usize);
    cluster_bonds(config, &mut uf);
    attach_lr_terminals(config, &mut uf);
    let l = uf.terminal(UnionFind::LEFT);
    let r = uf.terminal(UnionFind::RIGHT);
    uf.connected(l, r)
}

/// Is there an open path from the bottom to the top row?
pub fn has_vertical_crossing(config: &BondConfig) -> bool {
    let mut uf = UnionFind::new(config.width as usize * config.height as usize);
    cluster_bonds(config, &mut uf);
    attach_tb_terminals(config, &mut uf);
    let t = uf.terminal(UnionFind::TOP);
    let b = uf.terminal(UnionFind::BOTTOM);
    uf.connected(t, b)
}

const TOUCH_LEFT: u8 = 1;
const TOUCH_RIGHT: u8 = 2;
const TOUCH_TOP: u8 = 4;
const TOUCH_BOTTOM: u8 = 8;
const TOUCH_ALL: u8 = 15;

/// Does a single cluster touch all four boundary sides?
///
/// Boundary masks are collected per cluster root before any virtual
/// terminal is attached; chaining distinct clusters through a shared side
/// must not count.
pub fn has_hv_crossing(config: &BondConfig) -> bool {
    let sites = config.width as usize * config.height as usize;
    let mut uf = UnionFind::new(sites);
    cluster_bonds(config, &mut uf);
    let mut masks = vec![0u8; sites];
    hv_verdict(config.width, config.height, &mut uf, &mut masks)
}

fn hv_verdict(width: u32, height: u32, uf: &mut UnionFind, masks: &mut [u8]) -> bool {
    let w = width as usize;
    let h = height as usize;
    for y in 0..h {
        let row = y * w;
        let root = uf.find(row);
        masks[root] |= TOUCH_LEFT;
        if masks[root] == TOUCH_ALL {
            return true;
        }
        let root = uf.find(row + w - 1);
        masks[root] |= TOUCH_RIGHT;
        if masks[root] == TOUCH_ALL {
            return true;
        }
    }
    for x in 0..w {
        let root = uf.find(x);
        masks[root] |= TOUCH_BOTTOM;
        if masks[root] == TOUCH_ALL {
            return true;
        }
        let root = uf.find((h - 1) * w + x);
        masks[root] |= TOUCH_TOP;
        if masks[root] == TOUCH_ALL {
            return true;
        }
    }
    false
}

/// The dual configuration on the `(width-1) x (height+1)` grid: each dual
/// edge crosses one primal edge and is open exactly when that edge is
/// closed. Dual horizontal edges along the outer top and bottom rows cross
/// nothing (they run through the outer faces) and are always open.
pub fn dual_config(config: &BondConfig) -> BondConfig {
    let w = config.width;
    let h = config.height;
    let dw = w - 1;
    let dh = h + 1;
    let nh_dual = (dw as usize - 1) * dh as usize;
    BondConfig::from_open_edges(dw, dh, |e| {
        let e = e as usize;
        if e < nh_dual {
            // Dual horizontal edge (dx,dy)-(dx+1,dy).
            let dx = (e % (dw as usize - 1)) as u32;
            let dy = (e / (dw as usize - 1)) as u32;
            if dy == 0 || dy == h {
                true
            } else {
                !config.v_edge_open(dx + 1, dy - 1)
            }
        } else {
            // Dual vertical edge (dx,dy)-(dx,dy+1) crosses the primal
            // horizontal edge (dx,dy)-(dx+1,dy).
            let e = e - nh_dual;
            let dx = (e % dw as usize) as u32;
            let dy = (e / dw as usize) as u32;
            !config.h_edge_open(dx, dy)
        }
    })
}

/// The complement law: every configuration has a horizontal primal crossing
/// or a vertical dual crossing, never both. Returns whether the exclusive-or
/// holds (any `false` is a geometry bug).
pub fn dual_complement(config: &BondConfig) -> bool {
    // Degenerate dual (width-1 < 2) cannot happen for specs >= 2x2 sites
    // except width == 2, where the dual has a single column of sites and
    // vertical crossing degenerates to "all dual vertical edges open".
    if config.width == 2 {
        let all_h_closed = (0..config.height).all(|y| !config.h_edge_open(0, y));
        return has_horizontal_crossing(config) ^ all_h_closed;
    }
    has_horizontal_crossing(config) ^ has_vertical_crossing(&dual_config(config))
}

/// Which crossing event to estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Horizontal,
    HorizontalAndVertical,
}

impl Quantity {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "horizontal" | "h" => Quantity::Horizontal,
            "horizontal_and_vertical" | "hv" => Quantity::HorizontalAndVertical,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Horizontal => "horizontal",
            Quantity::HorizontalAndVertical => "horizontal_and_vertical",
        }
    }
}

/// Frequency estimate of one crossing probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingEstimate {
    pub quantity: Quantity,
    #[serde(rename = "L")]
    pub width: u32,
    #[serde(rename = "Lp")]
    pub height: u32,
    pub r: f64,
    pub p: f64,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub stderr: f64,
    pub seed: u64,
}

/// Per-worker scratch buffers, reused across trials.
struct TrialScratch {
    uf: UnionFind,
    masks: Vec<u8>,
}

impl TrialScratch {
    fn new(sites: usize) -> Self {
        TrialScratch {
            uf: UnionFind::new(sites),
            masks: vec![0u8; sites],
        }
    }
}

/// Verdict for one trial, streaming edges straight into the union-find
/// without materializing a bitset. Produces the identical answer to running
/// the verdict functions on [`sample_config`] (same RNG keying).
fn run_trial(spec: &LatticeSpec, trial: u64, quantity: Quantity, scratch: &mut TrialScratch) -> bool {
    let key = trial_key(spec.seed, trial);
    let threshold = open_threshold(spec.p);
    let w = spec.width;
    let h = spec.height;
    let uf = &mut scratch.uf;
    uf.reset();

    // Strength-reduced edge keying: edge_key advances by the multiplier
    // instead of multiplying per edge (same stream as `edge_bits`).
    const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut edge_key: u64 = 0;
    for y in 0..h {
        let row = y as usize * w as usize;
        for x in 0..w as usize - 1 {
            if edge_open(splitmix64(key ^ edge_key), threshold) {
                uf.union(row + x, row + x + 1);
            }
            edge_key = edge_key.wrapping_add(GOLDEN);
        }
    }
    for y in 0..h as usize - 1 {
        let row = y * w as usize;
        for x in 0..w as usize {
            if edge_open(splitmix64(key ^ edge_key), threshold) {
                uf.union(row + x, row + x + w as usize);
            }
            edge_key = edge_key.wrapping_add(GOLDEN);
        }
    }

    match quantity {
        Quantity::Horizontal => {
            let left = uf.terminal(UnionFind::LEFT);
            let right = uf.terminal(UnionFind::RIGHT);
            for y in 0..h as usize {
                uf.union(left, y * w as usize);
                uf.union(right, y * w as usize + w as usize - 1);
            }
            uf.connected(left, right)
        }
        Quantity::HorizontalAndVertical => {
            scratch.masks.fill(0);
            hv_verdict(w, h, uf, &mut scratch.masks)
        }
    }
}

/// Estimate a crossing probability from `trials` independent configurations.
///
/// Trials are split across `threads` workers; per-edge randomness is keyed
/// by `(seed, trial, edge)`, and successes add commutatively, so the result
/// is bitwise identical for any thread count.
pub fn estimate(
    spec: &LatticeSpec,
    quantity: Quantity,
    trials: u64,
    threads: usize,
) -> CrossingEstimate {
    assert!(trials >= 1, "need at least one trial");
    let threads = threads.max(1).min(trials as usize);
    let successes: u64 = if threads == 1 {
        let mut scratch = TrialScratch::new(spec.sites());
        (0..trials)
            .filter(|t| run_trial(spec, *t, quantity, &mut scratch))
            .count() as u64
    } else {
        let chunk = trials.div_ceil(threads as u64);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for t in 0..threads as u64 {
                let lo = t * chunk;
                let hi = ((t + 1) * chunk).min(trials);
                if lo >= hi {
                    break;
                }
                handles.push(scope.spawn(move || {
                    let mut scratch = TrialScratch::new(spec.sites());
                    (lo..hi)
                        .filter(|t| run_trial(spec, *t, quantity, &mut scratch))
                        .count() as u64
                }));
            }
            handles.into_iter().map(|h| h.join().expect("worker")).sum()
        })
    };
    let p_hat = successes as f64 / trials as f64;
    let stderr = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
    CrossingEstimate {
        quantity,
        width: spec.width,
        height: spec.height,
        r: spec.aspect_ratio(),
        p: spec.p,
        trials,
        successes,
        p_hat,
        stderr,
        seed: spec.seed,
    }
}

/// Exact crossing probability by enumerating every bond configuration,
/// with verdicts from an independent breadth-first path search. Reference
/// implementation for small lattices (at most ~20 edges).
pub fn exhaustive_crossing_probability(
    width: u32,
    height: u32,
    p: f64,
    quantity: Quantity,
) -> f64 {
    let nh = (width as usize - 1) * height as usize;
    let nv = width as usize * (height as usize - 1);
    let n = nh + nv;
    assert!(n <= 24, "exhaustive enumeration limited to 24 edges");
    let mut total = 0.0;
    for mask in 0u64..(1u64 << n) {
        let config = BondConfig::from_open_edges(width, height, |e| mask >> e & 1 == 1);
        let hit = match quantity {
            Quantity::Horizontal => bfs_crossing(&config, true),
            Quantity::HorizontalAndVertical => bfs_hv(&config),
        };
        if hit {
            let open = mask.count_ones() as i32;
            total += p.powi(open) * (1.0 - p).powi(n as i32 - open);
        }
    }
    total
}

/// Breadth-first search crossing verdict, independent of the union-find path.
fn bfs_crossing(config: &BondConfig, horizontal: bool) -> bool {
    let w = config.width as usize;
    let h = config.height as usize;
    let mut seen = vec![false; w * h];
    let mut queue = std::collections::VecDeque::new();
    if horizontal {
        for y in 0..h {
            seen[y * w] = true;
            queue.push_back((0usize, y));
        }
    } else {
        for (x, s) in seen.iter_mut().enumerate().take(w) {
            *s = true;
            queue.push_back((x, 0usize));
        }
    }
    while let Some((x, y)) = queue.pop_front() {
        if horizontal && x == w - 1 {
            return true;
        }
        if !horizontal && y == h - 1 {
            return true;
        }
        let mut push = |nx: usize, ny: usize| {
            if !seen[ny * w + nx] {
                seen[ny * w + nx] = true;
                queue.push_back((nx, ny));
            }
        };
        if x + 1 < w && config.h_edge_open(x as u32, y as u32) {
            push(x + 1, y);
        }
        if x > 0 && config.h_edge_open(x as u32 - 1, y as u32) {
            push(x - 1, y);
        }
        if y + 1 < h && config.v_edge_open(x as u32, y as u32) {
            push(x, y + 1);
        }
        if y > 0 && config.v_edge_open(x as u32, y as u32 - 1) {
            push(x, y - 1);
        }
    }
    false
}

/// BFS-based four-side verdict: flood each cluster once and check the sides
/// it touches.
fn bfs_hv(config: &BondConfig) -> bool {
    let w = config.width as usize;
    let h = config.height as usize;
    let mut seen = vec![false; w * h];
    for start in 0..w * h {
        if seen[start] {
            continue;
        }
        let mut queue = std::collections::VecDeque::new();
        seen[start] = true;
        queue.push_back((start % w, start / w));
        let mut mask = 0u8;
        while let Some((x, y)) = queue.pop_front() {
            if x == 0 {
                mask |= TOUCH_LEFT;
            }
            if x == w - 1 {
                mask |= TOUCH_RIGHT;
            }
            if y == 0 {
                mask |= TOUCH_BOTTOM;
            }
            if y == h - 1 {
                mask |= TOUCH_TOP;
            }
            let mut push = |nx: usize, ny: usize| {
                if !seen[ny * w + nx] {
                    seen[ny * w + nx] = true;
                    queue.push_back((nx, ny));
                }
            };
            if x + 1 < w && config.h_edge_open(x as u32, y as u32) {
                push(x + 1, y);
            }
            if x > 0 && config.h_edge_open(x as u32 - 1, y as u32) {
                push(x - 1, y);
            }
            if y + 1 < h && config.v_edge_open(x as u32, y as u32) {
                push(x, y + 1);
            }
            if y > 0 && config.v_edge_open(x as u32, y as u32 - 1) {
                push(x, y - 1);
            }
        }
        if mask == TOUCH_ALL {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(w: u32, h: u32, p: f64) -> LatticeSpec {
        LatticeSpec::new(w, h, p, 0xC0FFEE)
    }

    #[test]
    fn degenerate_occupancies() {
        let empty = sample_config(&spec(5, 4, 0.0), 7);
        assert_eq!(empty.open_edge_count(), 0);
        assert!(!has_horizontal_crossing(&empty));
        assert!(!has_hv_crossing(&empty));
        let full = sample_config(&spec(5, 4, 1.0), 7);
        assert_eq!(full.open_edge_count(), spec(5, 4, 1.0).edges());
        assert!(has_horizontal_crossing(&full));
        assert!(has_vertical_crossing(&full));
        assert!(has_hv_crossing(&full));
    }

    #[test]
    fn verdicts_match_path_search_exhaustively_2x2() {
        for mask in 0u64..16 {
            let config = BondConfig::from_open_edges(2, 2, |e| mask >> e & 1 == 1);
            assert_eq!(
                has_horizontal_crossing(&config),
                bfs_crossing(&config, true),
                "horizontal, mask {mask:04b}"
            );
            assert_eq!(
                has_vertical_crossing(&config),
                bfs_crossing(&config, false),
                "vertical, mask {mask:04b}"
            );
            assert_eq!(
                has_hv_crossing(&config),
                bfs_hv(&config),
                "hv, mask {mask:04b}"
            );
        }
    }

    #[test]
    fn verdicts_match_path_search_exhaustively_3x2_and_2x3() {
        for (w, h) in [(3u32, 2u32), (2, 3), (3, 3)] {
            let n = (w as usize - 1) * h as usize + w as usize * (h as usize - 1);
            for mask in 0u64..(1 << n) {
                let config = BondConfig::from_open_edges(w, h, |e| mask >> e & 1 == 1);
                assert_eq!(
                    has_horizontal_crossing(&config),
                    bfs_crossing(&config, true),
                    "{w}x{h} mask {mask:b}"
                );
                assert_eq!(has_hv_crossing(&config), bfs_hv(&config), "{w}x{h} mask {mask:b}");
            }
        }
    }

    #[test]
    fn hv_rejects_chained_clusters() {
        // Bottom row spans left-right-bottom; the isolated corner site (0,2)
        // touches left and top. Chaining those clusters through the shared
        // left side would cover all four sides, but no single cluster does.
        let config = BondConfig::from_open_edges(3, 3, |e| {
            // Horizontal edge ids row-major: 0 = (0,0)-(1,0), 1 = (1,0)-(2,0).
            e == 0 || e == 1
        });
        assert!(has_horizontal_crossing(&config));
        assert!(!has_hv_crossing(&config));
    }

    #[test]
    fn dual_complement_exhaustive_small_lattices() {
        for (w, h) in [(2u32, 2u32), (3, 2), (2, 3), (3, 3)] {
            let n = (w as usize - 1) * h as usize + w as usize * (h as usize - 1);
            for mask in 0u64..(1 << n) {
                let config = BondConfig::from_open_edges(w, h, |e| mask >> e & 1 == 1);
                assert!(
                    dual_complement(&config),
                    "XOR law fails on {w}x{h}, mask {mask:b}"
                );
            }
        }
    }

    #[test]
    fn dual_complement_on_duality_exact_geometry() {
        let s = spec(16, 17, 0.5);
        for trial in 0..2000 {
            let config = sample_config(&s, trial);
            assert!(dual_complement(&config), "trial {trial}");
        }
    }

    #[test]
    fn open_fraction_within_binomial_noise() {
        let s = spec(8, 8, 0.5);
        let mut open = 0usize;
        let trials = 10_000u64;
        for t in 0..trials {
            open += sample_config(&s, t).open_edge_count();
        }
        let total = trials as f64 * s.edges() as f64;
        let p_hat = open as f64 / total;
        let sigma = (0.25 / total).sqrt();
        assert!(
            (p_hat - 0.5).abs() < 4.0 * sigma,
            "open fraction {p_hat} vs 0.5 +- {sigma}"
        );
    }

    #[test]
    fn estimate_is_thread_count_invariant() {
        let s = spec(48, 32, 0.5);
        let base = estimate(&s, Quantity::Horizontal, 600, 1);
        for threads in [2, 3, 5] {
            let par = estimate(&s, Quantity::Horizontal, 600, threads);
            assert_eq!(base.successes, par.successes, "threads = {threads}");
        }
        let hv1 = estimate(&s, Quantity::HorizontalAndVertical, 400, 1);
        let hv3 = estimate(&s, Quantity::HorizontalAndVertical, 400, 3);
        assert_eq!(hv1.successes, hv3.successes);
    }

    #[test]
    fn estimate_matches_per_config_replay() {
        // The streaming fast path must agree with verdicts computed from
        // materialized configurations.
        let s = spec(9, 7, 0.5);
        let trials = 300u64;
        let est = estimate(&s, Quantity::Horizontal, trials, 2);
        let mut successes = 0u64;
        for t in 0..trials {
            if has_horizontal_crossing(&sample_config(&s, t)) {
                successes += 1;
            }
        }
        assert_eq!(est.successes, successes);
        let est_hv = estimate(&s, Quantity::HorizontalAndVertical, trials, 2);
        let mut hv = 0u64;
        for t in 0..trials {
            if has_hv_crossing(&sample_config(&s, t)) {
                hv += 1;
            }
        }
        assert_eq!(est_hv.successes, hv);
    }

    #[test]
    fn estimate_statistics_fields() {
        let s = spec(8, 8, 0.5);
        let e = estimate(&s, Quantity::Horizontal, 500, 2);
        assert_eq!(e.p_hat, e.successes as f64 / 500.0);
        let expect = (e.p_hat * (1.0 - e.p_hat) / 500.0).sqrt();
        assert_eq!(e.stderr, expect);
        assert_eq!(e.r, 1.0);
    }

    #[test]
    fn sampler_matches_exhaustive_enumeration() {
        // 3x2 lattice (7 edges): exact probability vs sampled frequency.
        let exact = exhaustive_crossing_probability(3, 2, 0.5, Quantity::Horizontal);
        let s = spec(3, 2, 0.5);
        let trials = 20_000u64;
        let est = estimate(&s, Quantity::Horizontal, trials, 2);
        let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
        assert!(
            (est.p_hat - exact).abs() < 4.0 * sigma,
            "sampled {} vs exact {exact} (sigma {sigma})",
            est.p_hat
        );
    }

    #[test]
    fn monotone_in_occupation_probability() {
        let trials = 4_000u64;
        let mut results = Vec::new();
        for p in [0.45, 0.5, 0.55] {
            let e = estimate(&spec(32, 32, p), Quantity::Horizontal, trials, 2);
            results.push(e);
        }
        for pair in results.windows(2) {
            let pooled = (pair[0].stderr.powi(2) + pair[1].stderr.powi(2)).sqrt();
            assert!(
                pair[1].p_hat - pair[0].p_hat > 3.0 * pooled,
                "{} -> {} not separated",
                pair[0].p_hat,
                pair[1].p_hat
            );
        }
    }

    #[test]
    fn estimate_json_shape() {
        let e = estimate(&spec(4, 4, 0.5), Quantity::Horizontal, 10, 1);
        let json = serde_json::to_string(&e).unwrap();
        for key in ["\"quantity\"", "\"L\"", "\"Lp\"", "\"r\"", "\"p\"", "\"trials\"", "\"successes\"", "\"p_hat\"", "\"stderr\"", "\"seed\""] {
            assert!(json.contains(key), "{json} missing {key}");
        }
        let back: CrossingEstimate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn dual_pair_geometry() {
        let s = spec(33, 17, 0.5);
        let d = s.dual_pair_spec();
        assert_eq!((d.width, d.height), (18, 32));
        assert_eq!(d.p, 0.5);
    }
}
