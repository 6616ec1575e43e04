//! Online suffix tree over a byte stream: Ukkonen construction with an
//! auxiliary node above the root, indirect edge labels through `pos`, and
//! the bookkeeping needed for most-recent-match queries.

use std::collections::{HashMap, VecDeque};

use crate::arena::{Arena, Handle};
use crate::bands::{Band, ExtRun};
use crate::counters::CounterSet;
use crate::order::OrderList;
use crate::text::TextStore;
use thiserror::Error;

pub type NodeHandle = Handle<NodeRecord>;
pub type EdgeHandle = Handle<EdgeRecord>;

const MAX_POS: usize = (u32::MAX as usize) << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("position arithmetic capacity exceeded")]
    CapacityOverflow,
    #[error("index poisoned by a prior fatal error")]
    Poisoned,
    #[error("operation undefined for the top edge")]
    TopEdge,
    #[error("window size must be at least 1")]
    ZeroWindow,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NodeKind {
    Internal,
    Leaf,
}

pub struct NodeRecord {
    pub(crate) kind: NodeKind,
    /// String depth; meaningless for leaves (their depth grows with the text).
    pub(crate) depth: usize,
    pub(crate) incoming: EdgeHandle,
    pub(crate) children: HashMap<u8, EdgeHandle>,
    pub(crate) slink: Option<NodeHandle>,
    /// Reverse suffix links: symbol `a` maps to the node whose string is
    /// `a` prepended to this node's string.
    pub(crate) rslink: HashMap<u8, NodeHandle>,
    /// Fiala–Greene percolation bit for label position refreshing.
    pub(crate) credit: bool,
}

pub struct EdgeRecord {
    pub(crate) start: NodeHandle,
    pub(crate) end: NodeHandle,
    /// A position in the stream where the endpoint string occurs.
    pub(crate) pos: usize,
    /// Most-recent-update hint for the link-tree subtree rooted here.
    pub(crate) repr: Option<EdgeHandle>,
    /// Euler-tour tokens in the ancestor order list (internal edges only).
    pub(crate) euler: Option<(crate::order::Token, crate::order::Token)>,
    /// Iteration of the last pos-update (instrumentation); 0 = never.
    pub(crate) last_pos_update: u64,
}

/// Result of descending a pattern from the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Locus {
    pub edge: EdgeHandle,
    pub matched: usize,
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActivePoint {
    pub edge: EdgeHandle,
    pub depth: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct ExtendReport {
    pub leaves_added: u64,
    pub splits: u64,
    pub update_edge: Option<EdgeHandle>,
    pub reprupd_calls: u64,
}

pub(crate) struct WindowState {
    pub size: usize,
    /// First stream position still inside the window.
    pub start: usize,
}

pub(crate) struct DeferredUpdate {
    pub node: NodeHandle,
    pub iter: usize,
}

/// Location of the deepest active suffix.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Point {
    Root,
    AtNode(NodeHandle),
    MidEdge(EdgeHandle, usize),
}

pub struct Index {
    pub(crate) text: TextStore,
    pub(crate) nodes: Arena<NodeRecord>,
    pub(crate) edges: Arena<EdgeRecord>,
    pub(crate) top: NodeHandle,
    pub(crate) root: NodeHandle,
    pub(crate) top_edge: EdgeHandle,
    pub(crate) order: OrderList,
    /// Band stack over internal edges; front = shallowest.
    pub(crate) bands: VecDeque<Band>,
    /// Point runs on external edges (the deep part of the active path).
    pub(crate) ext_runs: Vec<ExtRun>,
    /// Number of active suffixes (depth of the active point).
    pub(crate) active_len: usize,
    pub(crate) clock: i64,
    /// Live leaves by suffix start position.
    pub(crate) leaves: HashMap<usize, NodeHandle>,
    pub(crate) counters: CounterSet,
    pub(crate) window: Option<WindowState>,
    pub(crate) deferred: Option<Vec<DeferredUpdate>>,
    pub(crate) poisoned: bool,
    pending_slink: Option<NodeHandle>,
    pending_euler: Vec<NodeHandle>,
}

impl Default for Index {
    fn default() -> Self {
        Self::new()
    }
}

impl Index {
    pub fn new() -> Self {
        Self::build(TextStore::stream(), None)
    }

    /// Index only the last `window` symbols of the stream.
    pub fn windowed(window: usize) -> Result<Self, IndexError> {
        if window == 0 {
            return Err(IndexError::ZeroWindow);
        }
        Ok(Self::build(
            TextStore::ring(window),
            Some(WindowState {
                size: window,
                start: 0,
            }),
        ))
    }

    fn build(text: TextStore, window: Option<WindowState>) -> Self {
        let mut nodes = Arena::new();
        let mut edges = Arena::new();
        let mut order = OrderList::new();

        let top = nodes.alloc(NodeRecord {
            kind: NodeKind::Internal,
            depth: 0,
            incoming: Handle::new(0, 0),
            children: HashMap::new(),
            slink: None,
            rslink: HashMap::new(),
            credit: false,
        });
        let root = nodes.alloc(NodeRecord {
            kind: NodeKind::Internal,
            depth: 0,
            incoming: Handle::new(0, 0),
            children: HashMap::new(),
            slink: None,
            rslink: HashMap::new(),
            credit: false,
        });
        let (ti, to) = order.init_pair();
        let top_edge = edges.alloc(EdgeRecord {
            start: top,
            end: root,
            pos: 0,
            repr: None,
            euler: Some((ti, to)),
            last_pos_update: 0,
        });
        nodes[root].incoming = top_edge;
        nodes[top].incoming = top_edge;

        Index {
            text,
            nodes,
            edges,
            top,
            root,
            top_edge,
            order,
            bands: VecDeque::new(),
            ext_runs: Vec::new(),
            active_len: 0,
            clock: 0,
            leaves: HashMap::new(),
            counters: CounterSet::new(),
            window,
            deferred: None,
            poisoned: false,
            pending_slink: None,
            pending_euler: Vec::new(),
        }
    }

    // ---- basic accessors -------------------------------------------------

    pub fn n(&self) -> usize {
        self.text.len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.live()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.live()
    }

    pub fn counters(&self) -> &CounterSet {
        &self.counters
    }

    pub fn top_edge(&self) -> EdgeHandle {
        self.top_edge
    }

    pub fn window_size(&self) -> Option<usize> {
        self.window.as_ref().map(|w| w.size)
    }

    /// First stream position currently indexed (0 unless in window mode).
    pub fn indexed_from(&self) -> usize {
        self.window.as_ref().map_or(0, |w| w.start)
    }

    pub(crate) fn node_depth(&self, v: NodeHandle) -> usize {
        let rec = &self.nodes[v];
        match rec.kind {
            NodeKind::Internal => rec.depth,
            NodeKind::Leaf => self.text.len() - self.edges[rec.incoming].pos,
        }
    }

    pub(crate) fn is_external(&self, e: EdgeHandle) -> bool {
        self.nodes[self.edges[e].end].kind == NodeKind::Leaf
    }

    pub(crate) fn start_depth(&self, e: EdgeHandle) -> usize {
        self.node_depth(self.edges[e].start)
    }

    /// String depth of the edge endpoint (`length(e)` in label terms).
    pub(crate) fn end_depth(&self, e: EdgeHandle) -> usize {
        self.node_depth(self.edges[e].end)
    }

    pub(crate) fn label_len(&self, e: EdgeHandle) -> usize {
        self.end_depth(e) - self.start_depth(e)
    }

    /// Label symbol at 1-based offset `off` past the start node, i.e. the
    /// symbol a point at offset `off - 1` would descend over.
    fn label_char(&self, e: EdgeHandle, off: usize) -> u8 {
        let rec = &self.edges[e];
        self.text.get(rec.pos + self.node_depth(rec.start) + off - 1)
    }

    pub fn edge_pos(&self, e: EdgeHandle) -> usize {
        self.edges[e].pos
    }

    /// The string at the endpoint of `e` (for tests and diagnostics).
    pub fn endpoint_string(&self, e: EdgeHandle) -> Vec<u8> {
        let rec = &self.edges[e];
        let d = self.end_depth(e);
        (rec.pos..rec.pos + d).map(|p| self.text.get(p)).collect()
    }

    pub fn edge_endpoints(&self, e: EdgeHandle) -> (NodeHandle, NodeHandle) {
        (self.edges[e].start, self.edges[e].end)
    }

    pub fn root_node(&self) -> NodeHandle {
        self.root
    }

    pub fn child_edge(&self, v: NodeHandle, symbol: u8) -> Option<EdgeHandle> {
        self.nodes[v].children.get(&symbol).copied()
    }

    /// Handles of all live edges, in arena order (test support).
    pub fn all_edges(&self) -> Vec<EdgeHandle> {
        self.edges.iter().map(|(h, _)| h).collect()
    }

    pub fn pred_edge(&self, v: NodeHandle) -> EdgeHandle {
        self.nodes[v].incoming
    }

    // ---- suffix links ----------------------------------------------------

    /// Edge-oriented suffix link: the edge containing the endpoint string of
    /// `e` with its first symbol removed. Undefined for the top edge.
    pub fn suf_of(&self, e: EdgeHandle) -> Result<EdgeHandle, IndexError> {
        if e == self.top_edge {
            return Err(IndexError::TopEdge);
        }
        let end = self.edges[e].end;
        if self.nodes[end].kind == NodeKind::Internal {
            return Ok(self.suf_of_internal(e));
        }
        // External: endpoint is the suffix starting at pos(e).
        let j = self.edges[e].pos;
        let n = self.text.len();
        if n - j == 1 {
            return Ok(self.top_edge);
        }
        if let Some(&leaf) = self.leaves.get(&(j + 1)) {
            return Ok(self.nodes[leaf].incoming);
        }
        // The next shorter suffix is implicit: locate it on the active path.
        let (edge, _off) = self
            .point_at_depth(n - j - 1)
            .expect("implicit suffix missing from active path");
        Ok(edge)
    }

    /// Suffix link for internal non-top edges: the incoming edge of the
    /// endpoint's suffix-link target.
    pub(crate) fn suf_of_internal(&self, e: EdgeHandle) -> EdgeHandle {
        let end = self.edges[e].end;
        debug_assert_eq!(self.nodes[end].kind, NodeKind::Internal);
        if self.node_depth(end) == 1 {
            return self.top_edge;
        }
        let sl = self.nodes[end]
            .slink
            .expect("internal node without suffix link");
        self.nodes[sl].incoming
    }

    /// Inverse suffix link: the edge `x` with `suf_of(x) = f` whose endpoint
    /// string starts with `a`, if one exists.
    pub fn rsuf_of(&self, f: EdgeHandle, a: u8) -> Option<EdgeHandle> {
        // Internal candidate via the reverse node link.
        if f == self.top_edge || !self.is_external(f) {
            let w = self.edges[f].end;
            if let Some(&u) = self.nodes[w].rslink.get(&a) {
                return Some(self.nodes[u].incoming);
            }
        }
        // External candidate: a leaf edge whose endpoint is a·(endpoint of f).
        let n = self.text.len();
        let flen = self.end_depth(f);
        if flen + 1 > n {
            return None;
        }
        let j = n - flen - 1;
        if let Some(&leaf) = self.leaves.get(&j) {
            if self.text.get(j) == a {
                let e = self.nodes[leaf].incoming;
                if self.suf_of(e) == Ok(f) {
                    return Some(e);
                }
            }
        }
        None
    }

    /// Locate the tree point of the active suffix with string depth `depth`.
    pub(crate) fn point_at_depth(&self, depth: usize) -> Option<(EdgeHandle, usize)> {
        if depth == 0 || depth > self.active_len {
            return None;
        }
        for band in &self.bands {
            let off = band.offset(self.clock) as usize;
            let front = *band.edges.front().unwrap();
            let lo = self.start_depth(front) + off;
            let hi = lo + band.edges.len() - 1;
            if (lo..=hi).contains(&depth) {
                let e = band.edges[depth - lo];
                return Some((e, depth - self.start_depth(e)));
            }
        }
        let key = self.clock - depth as i64;
        for run in &self.ext_runs {
            if key >= run.key_deep
                && key <= run.key_shallow
                && (key - run.key_deep) % run.step == 0
            {
                return Some((run.edge, depth - self.start_depth(run.edge)));
            }
        }
        None
    }

    /// The point of the longest suffix that also occurs earlier in the text.
    pub fn active_point(&self) -> ActivePoint {
        match self.deepest_point() {
            Point::Root => ActivePoint {
                edge: self.top_edge,
                depth: 0,
            },
            Point::AtNode(v) => ActivePoint {
                edge: self.nodes[v].incoming,
                depth: self.node_depth(v),
            },
            Point::MidEdge(e, off) => ActivePoint {
                edge: e,
                depth: self.start_depth(e) + off,
            },
        }
    }

    pub fn active_depth(&self) -> usize {
        self.active_len
    }

    fn deepest_ext_depth(&self) -> Option<(usize, usize)> {
        (0..self.ext_runs.len())
            .min_by_key(|&i| self.ext_runs[i].key_deep)
            .map(|i| (i, (self.clock - self.ext_runs[i].key_deep) as usize))
    }

    /// Index and depth of the deepest band-held point. The stack is mostly
    /// depth-ordered but transiently not during leaf cascades, so scan.
    fn deepest_band_depth(&self) -> Option<(usize, usize)> {
        (0..self.bands.len())
            .map(|i| {
                let band = &self.bands[i];
                let off = band.offset(self.clock) as usize;
                (i, self.start_depth(*band.edges.back().unwrap()) + off)
            })
            .max_by_key(|&(_, d)| d)
    }

    pub(crate) fn deepest_point(&self) -> Point {
        let ext = self.deepest_ext_depth();
        let band = self.deepest_band_depth();
        if let Some((i, ed)) = ext {
            if band.map_or(true, |(_, b)| ed > b) {
                let run = &self.ext_runs[i];
                return Point::MidEdge(run.edge, ed - self.start_depth(run.edge));
            }
        }
        if let Some((bi, _)) = band {
            let band = &self.bands[bi];
            let off = band.offset(self.clock) as usize;
            let m = *band.edges.back().unwrap();
            if off == band.label_len {
                return Point::AtNode(self.edges[m].end);
            }
            return Point::MidEdge(m, off);
        }
        Point::Root
    }

    fn pop_deepest_point(&mut self) {
        self.counters.band_ops += 1;
        self.active_len -= 1;
        let ext = self.deepest_ext_depth();
        let band = self.deepest_band_depth();
        if let Some((idx, ed)) = ext {
            if band.map_or(true, |(_, b)| ed > b) {
                let run = &mut self.ext_runs[idx];
                if run.key_deep == run.key_shallow {
                    self.ext_runs.swap_remove(idx);
                } else {
                    run.key_deep += run.step;
                }
                return;
            }
        }
        let (bi, _) = band.expect("popping from empty active path");
        let band = &mut self.bands[bi];
        band.edges.pop_back();
        if band.edges.is_empty() {
            self.bands.remove(bi);
        }
    }

    // ---- structural mutation ---------------------------------------------

    fn add_leaf(&mut self, v: NodeHandle, symbol: u8, suffix_start: usize) -> NodeHandle {
        let leaf = self.nodes.alloc(NodeRecord {
            kind: NodeKind::Leaf,
            depth: 0,
            incoming: self.top_edge,
            children: HashMap::new(),
            slink: None,
            rslink: HashMap::new(),
            credit: false,
        });
        let e = self.edges.alloc(EdgeRecord {
            start: v,
            end: leaf,
            pos: suffix_start,
            repr: None,
            euler: None,
            last_pos_update: 0,
        });
        self.nodes[leaf].incoming = e;
        self.nodes[v].children.insert(symbol, e);
        self.leaves.insert(suffix_start, leaf);
        self.counters.leaves_added += 1;
        self.percolate_refresh(v, suffix_start);
        leaf
    }

    /// Fiala–Greene percolating label refresh: the suffix inserted at
    /// `suffix_start` passes through every ancestor of `v`, so their
    /// incoming labels may be re-anchored there. Credits keep it amortized
    /// constant per insertion.
    fn percolate_refresh(&mut self, v: NodeHandle, suffix_start: usize) {
        let mut u = v;
        while u != self.root && u != self.top {
            let p = self.nodes[u].incoming;
            if suffix_start > self.edges[p].pos {
                self.edges[p].pos = suffix_start;
            }
            if self.nodes[u].credit {
                self.nodes[u].credit = false;
                u = self.edges[p].start;
            } else {
                self.nodes[u].credit = true;
                break;
            }
        }
    }

    /// Split `e` at label offset `off` (0 < off < label_len), creating a new
    /// internal node. The handle keeps the top fragment; the bottom fragment
    /// is a fresh edge that inherits the link-tree identity (euler interval,
    /// repr value) because incoming suffix links target the endpoint.
    fn split_edge(&mut self, e: EdgeHandle, off: usize) -> NodeHandle {
        debug_assert!(off >= 1 && off < self.label_len(e));
        let start = self.edges[e].start;
        let old_end = self.edges[e].end;
        let pos = self.edges[e].pos;
        let w_depth = self.node_depth(start) + off;
        let was_external = self.nodes[old_end].kind == NodeKind::Leaf;

        let w = self.nodes.alloc(NodeRecord {
            kind: NodeKind::Internal,
            depth: w_depth,
            incoming: e,
            children: HashMap::new(),
            slink: None,
            rslink: HashMap::new(),
            credit: false,
        });
        let bottom = self.edges.alloc(EdgeRecord {
            start: w,
            end: old_end,
            pos,
            repr: None,
            euler: None,
            last_pos_update: 0,
        });
        if !was_external {
            // Link-tree identity follows the endpoint.
            let (repr, euler, lpu) = {
                let rec = &mut self.edges[e];
                (rec.repr.take(), rec.euler.take(), rec.last_pos_update)
            };
            self.edges[bottom].repr = repr;
            self.edges[bottom].euler = euler;
            self.edges[bottom].last_pos_update = lpu;
            self.edges[e].last_pos_update = 0;
        }
        self.nodes[old_end].incoming = bottom;
        let c_bottom = self.text.get(pos + w_depth);
        self.nodes[w].children.insert(c_bottom, bottom);
        self.edges[e].end = w;
        self.pending_euler.push(w);
        self.counters.splits += 1;

        // Keep band label uniformity: e's label length changed.
        self.split_bands_around(e);
        if was_external {
            // The handle is internal now; its remaining implicit points move
            // from external runs onto the band stack.
            self.migrate_ext_runs_on(e);
        }
        w
    }

    /// Split multi-edge bands so that `e` sits alone in its band, keeping
    /// the one-label-length-per-band invariant after `e`'s label changed.
    fn split_bands_around(&mut self, e: EdgeHandle) {
        if self.bands.iter().all(|b| {
            b.edges.len() == 1 || !b.edges.contains(&e)
        }) {
            // Only singleton bands (fix their cached length) or no mention.
            let new_len = self.label_len(e);
            for b in self.bands.iter_mut() {
                if b.edges.len() == 1 && b.edges[0] == e {
                    b.label_len = new_len;
                }
            }
            return;
        }
        let old: Vec<Band> = self.bands.drain(..).collect();
        let mut rebuilt: VecDeque<Band> = VecDeque::with_capacity(old.len() + 2);
        for band in old {
            if band.edges.len() == 1 || !band.edges.contains(&e) {
                rebuilt.push_back(band);
                continue;
            }
            let Band {
                edges,
                key,
                label_len,
            } = band;
            let mut cur: VecDeque<EdgeHandle> = VecDeque::new();
            for x in edges {
                if x == e {
                    if !cur.is_empty() {
                        rebuilt.push_back(Band {
                            edges: std::mem::take(&mut cur),
                            key,
                            label_len,
                        });
                        self.counters.band_ops += 1;
                    }
                    let mut solo = VecDeque::new();
                    solo.push_back(e);
                    rebuilt.push_back(Band {
                        edges: solo,
                        key,
                        label_len: self.label_len(e),
                    });
                    self.counters.band_ops += 1;
                } else {
                    cur.push_back(x);
                }
            }
            if !cur.is_empty() {
                rebuilt.push_back(Band {
                    edges: cur,
                    key,
                    label_len,
                });
                self.counters.band_ops += 1;
            }
        }
        self.bands = rebuilt;
    }

    /// Move all implicit points recorded on (now internal) edge `e` from the
    /// external runs onto the band stack as singleton bands.
    fn migrate_ext_runs_on(&mut self, e: EdgeHandle) {
        let mut depths: Vec<usize> = Vec::new();
        let clock = self.clock;
        self.ext_runs.retain(|run| {
            if run.edge == e {
                depths.extend(run.depths(clock));
                false
            } else {
                true
            }
        });
        if depths.is_empty() {
            return;
        }
        depths.sort_unstable();
        let label_len = self.label_len(e);
        let start_depth = self.start_depth(e);
        for d in depths {
            let mut solo = VecDeque::new();
            solo.push_back(e);
            self.bands.push_back(Band {
                edges: solo,
                key: clock - (d - start_depth) as i64,
                label_len,
            });
            self.counters.band_ops += 1;
        }
    }

    fn set_slink(&mut self, w: NodeHandle, target: NodeHandle) {
        debug_assert!(self.nodes[w].slink.is_none());
        self.nodes[w].slink = Some(target);
        let first = self.text.get(self.edges[self.nodes[w].incoming].pos);
        self.nodes[target].rslink.insert(first, w);
    }

    fn resolve_pending_slink(&mut self, target: NodeHandle) {
        if let Some(w) = self.pending_slink.take() {
            self.set_slink(w, target);
        }
    }

    /// Insert euler tokens for the top fragments created this iteration.
    /// Processed in reverse creation order so each parent is tokened first.
    fn resolve_pending_euler(&mut self) {
        while let Some(w) = self.pending_euler.pop() {
            let e_top = self.nodes[w].incoming;
            debug_assert!(self.edges[e_top].euler.is_none());
            let parent = self.suf_of_internal(e_top);
            let (pin, _) = self.edges[parent]
                .euler
                .expect("link-tree parent not yet tokened");
            let pair = self.order.insert_pair_after(pin);
            self.edges[e_top].euler = Some(pair);
        }
    }

    // ---- the update step ---------------------------------------------------

    pub fn extend(&mut self, symbol: u8) -> Result<ExtendReport, IndexError> {
        if self.poisoned {
            return Err(IndexError::Poisoned);
        }
        if self.text.len() >= MAX_POS {
            self.poisoned = true;
            return Err(IndexError::CapacityOverflow);
        }
        let i = self.text.len();
        self.text.push(symbol);
        let leaves_before = self.counters.leaves_added;
        let splits_before = self.counters.splits;
        debug_assert!(self.pending_slink.is_none());

        let mut root_break = false;
        loop {
            match self.deepest_point() {
                Point::Root => {
                    self.counters.extend_comparisons += 1;
                    if self.nodes[self.root].children.contains_key(&symbol) {
                        self.resolve_pending_slink(self.root);
                        break;
                    }
                    self.add_leaf(self.root, symbol, i);
                    self.resolve_pending_slink(self.root);
                    root_break = true;
                    break;
                }
                Point::AtNode(v) => {
                    self.counters.extend_comparisons += 1;
                    if self.nodes[v].children.contains_key(&symbol) {
                        self.resolve_pending_slink(v);
                        break;
                    }
                    let suffix_start = i - self.node_depth(v);
                    self.add_leaf(v, symbol, suffix_start);
                    self.resolve_pending_slink(v);
                    self.pop_deepest_point();
                }
                Point::MidEdge(e, off) => {
                    self.counters.extend_comparisons += 1;
                    if self.label_char(e, off + 1) == symbol {
                        debug_assert!(
                            self.pending_slink.is_none(),
                            "suffix link pending at a mid-edge stop"
                        );
                        break;
                    }
                    let w = self.split_edge(e, off);
                    let suffix_start = i - self.node_depth(w);
                    self.add_leaf(w, symbol, suffix_start);
                    self.resolve_pending_slink(w);
                    self.pending_slink = Some(w);
                    self.pop_deepest_point();
                }
            }
        }
        debug_assert!(self.pending_slink.is_none());

        if !root_break {
            self.descend_all(symbol);
        } else {
            debug_assert!(self.bands.is_empty() && self.ext_runs.is_empty());
        }

        self.resolve_pending_euler();

        let update_edge = self.current_update_edge();
        let mut reprupd_calls = 0;
        if let Some(ue) = update_edge {
            let iter = self.text.len();
            if self.deferred.is_some() {
                let node = self.edges[ue].end;
                self.deferred
                    .as_mut()
                    .unwrap()
                    .push(DeferredUpdate { node, iter });
            } else {
                self.pos_update(ue, iter);
                reprupd_calls = self.repr_update(ue);
            }
        }

        if let Some(w) = self.window.as_ref() {
            if self.text.len() - w.start > w.size {
                self.evict_oldest();
            }
        }

        Ok(ExtendReport {
            leaves_added: self.counters.leaves_added - leaves_before,
            splits: self.counters.splits - splits_before,
            update_edge,
            reprupd_calls,
        })
    }

    /// Shift every active-suffix point one symbol deeper and admit the new
    /// length-1 suffix.
    fn descend_all(&mut self, symbol: u8) {
        self.clock += 1;
        let clock = self.clock;

        let needs_dissolve = self
            .bands
            .iter()
            .any(|b| b.offset(clock) as usize > b.label_len);
        if needs_dissolve {
            let old: Vec<Band> = self.bands.drain(..).collect();
            let mut rebuilt: VecDeque<Band> = VecDeque::with_capacity(old.len());
            for band in old {
                let off = band.offset(clock) as usize;
                if off <= band.label_len {
                    rebuilt.push_back(band);
                    continue;
                }
                debug_assert_eq!(off, band.label_len + 1);
                // All member points were at their endpoints; descend into
                // the children selected by the new symbol.
                let mut shed_external = false;
                let mut frag: Option<Band> = None;
                for &x in band.edges.iter() {
                    let vx = self.edges[x].end;
                    let y = self.nodes[vx]
                        .children
                        .get(&symbol)
                        .copied()
                        .expect("active suffix cannot descend");
                    self.counters.band_ops += 1;
                    if self.is_external(y) {
                        shed_external = true;
                        if let Some(f) = frag.take() {
                            rebuilt.push_back(f);
                        }
                        let depth = self.node_depth(vx) + 1;
                        self.push_ext_point(y, depth);
                    } else {
                        debug_assert!(
                            !shed_external,
                            "internal landing below an external one"
                        );
                        let ylen = self.label_len(y);
                        let extend = match &frag {
                            Some(f) => {
                                let deepest = *f.edges.back().unwrap();
                                f.label_len == ylen
                                    && self.suf_of_internal(y) == deepest
                            }
                            None => false,
                        };
                        if extend {
                            frag.as_mut().unwrap().edges.push_back(y);
                        } else {
                            if let Some(f) = frag.take() {
                                rebuilt.push_back(f);
                            }
                            let mut edges = VecDeque::new();
                            edges.push_back(y);
                            frag = Some(Band {
                                edges,
                                key: clock - 1, // descended points sit at offset 1
                                label_len: ylen,
                            });
                        }
                    }
                }
                if let Some(f) = frag.take() {
                    rebuilt.push_back(f);
                }
            }
            self.bands = rebuilt;
        }

        // Admit the new depth-1 point.
        let y1 = self.nodes[self.root]
            .children
            .get(&symbol)
            .copied()
            .expect("new shallow suffix cannot descend");
        if self.is_external(y1) {
            debug_assert!(self.bands.is_empty());
            self.push_ext_point(y1, 1);
        } else {
            let coalesce = match self.bands.front() {
                Some(front) => {
                    front.key == clock - 1
                        && front.label_len == self.label_len(y1)
                        && self.suf_of_internal(*front.edges.front().unwrap()) == y1
                }
                None => false,
            };
            if coalesce {
                self.bands.front_mut().unwrap().edges.push_front(y1);
            } else {
                let mut edges = VecDeque::new();
                edges.push_back(y1);
                self.bands.push_front(Band {
                    edges,
                    key: clock - 1,
                    label_len: self.label_len(y1),
                });
            }
            self.counters.band_ops += 1;
        }
        self.active_len += 1;
    }

    pub(crate) fn push_ext_point(&mut self, e: EdgeHandle, depth: usize) {
        self.counters.band_ops += 1;
        let key = self.clock - depth as i64;
        for run in self.ext_runs.iter_mut() {
            if run.edge != e {
                continue;
            }
            if run.key_deep == run.key_shallow {
                if key > run.key_shallow {
                    run.step = key - run.key_shallow;
                    run.key_shallow = key;
                    return;
                }
            } else if key - run.key_shallow == run.step {
                run.key_shallow = key;
                return;
            }
        }
        self.ext_runs.push(ExtRun::singleton(e, key));
    }

    /// The update edge after the latest reshape: the incoming edge of the
    /// deepest internal node whose string is an active suffix.
    pub(crate) fn current_update_edge(&self) -> Option<EdgeHandle> {
        self.bands
            .iter()
            .filter(|band| band.offset(self.clock) as usize == band.label_len)
            .map(|band| *band.edges.back().unwrap())
            .max_by_key(|&e| self.end_depth(e))
    }

    // ---- pattern descent ---------------------------------------------------

    /// Walk the tree from the root matching `pattern` symbol by symbol.
    pub fn locate(&self, pattern: &[u8]) -> Locus {
        let mut v = self.root;
        let mut matched = 0usize;
        loop {
            if matched == pattern.len() {
                return Locus {
                    edge: self.nodes[v].incoming,
                    matched,
                    exact: true,
                };
            }
            let Some(&e) = self.nodes[v].children.get(&pattern[matched]) else {
                return Locus {
                    edge: self.nodes[v].incoming,
                    matched,
                    exact: false,
                };
            };
            matched += 1; // the child key consumed one symbol
            let llen = self.label_len(e);
            let mut k = 1;
            while k < llen && matched < pattern.len() {
                if self.label_char(e, k + 1) != pattern[matched] {
                    return Locus {
                        edge: e,
                        matched,
                        exact: false,
                    };
                }
                matched += 1;
                k += 1;
            }
            if k < llen {
                return Locus {
                    edge: e,
                    matched,
                    exact: matched == pattern.len(),
                };
            }
            v = self.edges[e].end;
        }
    }

    /// Smallest active-suffix depth in `[min_depth, end_depth(e))` whose
    /// point lies on `e`.
    pub fn min_active_suffix_on(&self, e: EdgeHandle, min_depth: usize) -> Option<usize> {
        let lo = min_depth.max(self.start_depth(e) + 1);
        let mut best: Option<usize> = None;
        if self.is_external(e) {
            for run in &self.ext_runs {
                if run.edge != e {
                    continue;
                }
                if let Some(k) = run.key_at_or_below(self.clock - lo as i64) {
                    let d = (self.clock - k) as usize;
                    if best.map_or(true, |b| d < b) {
                        best = Some(d);
                    }
                }
            }
            return best;
        }
        let hi = self.end_depth(e); // exclusive: at-endpoint points are not on the edge interior
        for band in &self.bands {
            let off = band.offset(self.clock) as usize;
            for &x in band.edges.iter() {
                if x == e {
                    let d = self.start_depth(e) + off;
                    if d >= lo && d < hi && best.map_or(true, |b| d < b) {
                        best = Some(d);
                    }
                }
            }
        }
        best
    }

    // ---- diagnostics -------------------------------------------------------

    /// Ordered key=value counter snapshot.
    pub fn stats(&self) -> String {
        let c = &self.counters;
        let mut out = String::new();
        out.push_str(&format!("n={}\n", self.text.len()));
        out.push_str(&format!("nodes={}\n", self.nodes.live()));
        out.push_str(&format!("edges={}\n", self.edges.live()));
        out.push_str(&format!("reprupd_calls={}\n", c.reprupd_calls));
        out.push_str(&format!("reprupd_depth_max={}\n", c.reprupd_depth_max()));
        for (d, &count) in c.reprupd_depth_hist.iter().enumerate() {
            if d > 0 && count > 0 {
                out.push_str(&format!("reprupd_depth_hist_{}={}\n", d, count));
            }
        }
        out.push_str(&format!("mrmfind_hops_total={}\n", c.mrmfind_hops_total()));
        out.push_str(&format!("pos_updates={}\n", c.pos_updates));
        out.push_str(&format!("band_ops={}\n", c.band_ops));
        out
    }

    /// All strings represented by the tree, capped at `max_len` (testing).
    pub fn collect_substrings(&self, max_len: usize) -> std::collections::HashSet<Vec<u8>> {
        let mut out = std::collections::HashSet::new();
        out.insert(Vec::new());
        let mut stack = vec![(self.root, Vec::new())];
        while let Some((v, prefix)) = stack.pop() {
            for (_, &e) in self.nodes[v].children.iter() {
                let rec = &self.edges[e];
                let d0 = self.node_depth(rec.start);
                let d1 = self.end_depth(e);
                let mut cur = prefix.clone();
                for p in rec.pos + d0..rec.pos + d1 {
                    if cur.len() >= max_len {
                        break;
                    }
                    cur.push(self.text.get(p));
                    out.insert(cur.clone());
                }
                if self.nodes[rec.end].kind == NodeKind::Internal && cur.len() < max_len {
                    stack.push((rec.end, cur));
                }
            }
        }
        out
    }

    /// Exhaustive structural checks for small inputs (test support).
    pub fn validate(&self) {
        let n = self.text.len();
        // Node-count bound.
        assert!(
            self.nodes.live() <= 2 * self.content_len() + 1,
            "node bound violated: {} nodes for content {}",
            self.nodes.live(),
            self.content_len()
        );
        // Active-path coverage: depths 1..=active_len each represented once.
        let mut seen = vec![false; self.active_len + 1];
        let mut mark = |d: usize| {
            assert!(d >= 1 && d <= self.active_len, "stray point depth {d}");
            assert!(!seen[d], "duplicate point depth {d}");
            seen[d] = true;
        };
        for band in &self.bands {
            let off = band.offset(self.clock);
            assert!(off >= 1 && off as usize <= band.label_len, "band offset out of range");
            let mut prev: Option<EdgeHandle> = None;
            for &x in band.edges.iter() {
                assert!(!self.is_external(x), "external edge in band");
                assert_eq!(self.label_len(x), band.label_len, "band label mismatch");
                mark(self.start_depth(x) + off as usize);
                if let Some(sh) = prev {
                    assert_eq!(self.suf_of_internal(x), sh, "band members not suf-linked");
                }
                prev = Some(x);
            }
        }
        for run in &self.ext_runs {
            assert!(self.is_external(run.edge), "internal edge in ext run");
            for d in run.depths(self.clock) {
                let off = d - self.start_depth(run.edge);
                assert!(off >= 1 && off < self.label_len(run.edge));
                mark(d);
            }
        }
        assert!(
            seen.iter().skip(1).all(|&b| b),
            "active path has depth gaps"
        );
        // Every point is the corresponding suffix of the text.
        for d in 1..=self.active_len {
            let (e, off) = self.point_at_depth(d).expect("missing point");
            let rec = &self.edges[e];
            let p = rec.pos;
            assert!(
                self.text.range_eq(p, n - d, d),
                "point at depth {d} does not match the suffix"
            );
            let _ = off;
        }
        // Internal non-root nodes have >= 2 children; leaf bookkeeping.
        for (h, node) in self.nodes.iter() {
            if h == self.root || h == self.top {
                continue;
            }
            match node.kind {
                NodeKind::Internal => assert!(
                    node.children.len() >= 2,
                    "unary internal node at depth {}",
                    node.depth
                ),
                NodeKind::Leaf => {
                    let j = self.edges[node.incoming].pos;
                    assert_eq!(self.leaves.get(&j), Some(&h), "leaf map out of sync");
                }
            }
        }
    }

    pub(crate) fn content_len(&self) -> usize {
        self.text.len() - self.indexed_from()
    }
}
