//! Sliding-window eviction: after each extend beyond the window size, the
//! oldest suffix leaves the index and the structures shrink back to O(W).

use std::collections::VecDeque;

use crate::bands::Band;
use crate::tree::{EdgeHandle, Index, NodeHandle, NodeKind, NodeRecord, Point};

impl Index {
    /// Remove the oldest suffix from the tree. Called when the content has
    /// just grown to `window + 1` symbols.
    pub(crate) fn evict_oldest(&mut self) {
        let j = self.window.as_ref().expect("evict without window").start;
        debug_assert_eq!(
            self.text.len() - j,
            self.window.as_ref().unwrap().size + 1
        );

        // If the longest active suffix occurs nowhere except at j, it
        // becomes unique once j leaves the window and must turn into a leaf.
        // That is exactly the case where the active point sits on the doomed
        // leaf edge.
        let mut transitioned = false;
        if self.active_len > 0 {
            if let Point::MidEdge(e, _off) = self.deepest_point() {
                if self.is_external(e) && self.edges[e].pos == j {
                    self.evict_via_materialize(e, j);
                    transitioned = true;
                }
            }
        }
        if !transitioned {
            self.evict_standard(j);
        }
        self.window.as_mut().unwrap().start += 1;
    }

    /// The active suffix's only other occurrence starts at the doomed
    /// position, so after eviction it is unique: replace the doomed leaf by
    /// a leaf at the active point and re-anchor the edge label at the
    /// surviving occurrence. No other implicit point is affected (shorter
    /// active suffixes re-occur inside the surviving one).
    fn evict_via_materialize(&mut self, e: EdgeHandle, j: usize) {
        let n = self.text.len();
        let depth = self.active_len;
        let old_leaf = self.edges[e].end;

        // Pop the deepest point; it lives in an external run on `e`.
        let key = self.clock - depth as i64;
        let idx = self
            .ext_runs
            .iter()
            .position(|r| r.edge == e && r.key_deep == key)
            .expect("active point missing from external runs");
        let run = &mut self.ext_runs[idx];
        if run.key_deep == run.key_shallow {
            self.ext_runs.swap_remove(idx);
        } else {
            run.key_deep += run.step;
        }
        self.active_len -= 1;
        self.counters.band_ops += 1;

        let w = self.nodes.alloc(NodeRecord {
            kind: NodeKind::Leaf,
            depth: 0,
            incoming: e,
            children: std::collections::HashMap::new(),
            slink: None,
            rslink: std::collections::HashMap::new(),
            credit: false,
        });
        self.edges[e].end = w;
        self.edges[e].pos = n - depth;
        let removed = self.leaves.remove(&j);
        debug_assert_eq!(removed, Some(old_leaf));
        self.nodes.remove(old_leaf);
        self.leaves.insert(n - depth, w);
    }

    fn evict_standard(&mut self, j: usize) {
        let leaf = self
            .leaves
            .remove(&j)
            .expect("oldest suffix must be an explicit leaf");
        let doomed = self.nodes[leaf].incoming;
        debug_assert!(
            self.ext_runs.iter().all(|r| r.edge != doomed),
            "implicit points left on the doomed edge"
        );
        let u = self.edges[doomed].start;
        let key = self.nodes[u]
            .children
            .iter()
            .find(|(_, &e)| e == doomed)
            .map(|(&k, _)| k)
            .expect("doomed edge missing from child map");
        self.nodes[u].children.remove(&key);
        self.edges.remove(doomed);
        self.nodes.remove(leaf);

        if u != self.root && u != self.top && self.nodes[u].children.len() == 1 {
            self.merge_unary(u);
        }
    }

    /// `u` is internal with a single remaining child: fuse its incoming edge
    /// with the child edge. The child's handle survives (the link-tree
    /// identity follows the endpoint); the incoming edge and `u` die.
    fn merge_unary(&mut self, u: NodeHandle) {
        let p = self.nodes[u].incoming;
        let r = *self.nodes[u].children.values().next().unwrap();
        let pstart = self.edges[p].start;
        let old_start_depth_r = self.node_depth(u);
        let new_start_depth_r = self.node_depth(pstart);
        let delta = (old_start_depth_r - new_start_depth_r) as i64;

        let pkey = self.nodes[pstart]
            .children
            .iter()
            .find(|(_, &e)| e == p)
            .map(|(&k, _)| k)
            .expect("merged edge missing from child map");
        self.edges[r].start = pstart;
        self.nodes[pstart].children.insert(pkey, r);

        if let Some((ti, to)) = self.edges[p].euler.take() {
            self.order.remove(ti);
            self.order.remove(to);
        }
        if let Some(sl) = self.nodes[u].slink {
            let akey = self.nodes[sl]
                .rslink
                .iter()
                .find(|(_, &v)| v == u)
                .map(|(&k, _)| k);
            if let Some(a) = akey {
                self.nodes[sl].rslink.remove(&a);
            }
        }
        debug_assert!(self.nodes[u].rslink.is_empty(), "dying node still linked");

        self.rehome_merged_bands(p, r, delta, new_start_depth_r);

        self.edges.remove(p);
        self.nodes.remove(u);
    }

    /// Re-express band points hosted on the dying edge `p` and on `r` (whose
    /// start depth moved up by `delta`) after the merge. Each such point
    /// becomes a singleton band on `r` with its key adjusted so the implied
    /// depth is unchanged; if `r` is external the points move to the
    /// external runs instead.
    fn rehome_merged_bands(
        &mut self,
        p: EdgeHandle,
        r: EdgeHandle,
        delta: i64,
        merged_start_depth: usize,
    ) {
        if !self
            .bands
            .iter()
            .any(|b| b.edges.contains(&p) || b.edges.contains(&r))
        {
            return;
        }
        let clock = self.clock;
        let r_external = self.is_external(r);
        let r_label = if r_external { 0 } else { self.label_len(r) };
        let old: Vec<Band> = self.bands.drain(..).collect();
        let mut rebuilt: VecDeque<Band> = VecDeque::with_capacity(old.len());
        let mut ext_points: Vec<usize> = Vec::new();
        for band in old {
            if !band.edges.contains(&p) && !band.edges.contains(&r) {
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
                if x != p && x != r {
                    cur.push_back(x);
                    continue;
                }
                if !cur.is_empty() {
                    rebuilt.push_back(Band {
                        edges: std::mem::take(&mut cur),
                        key,
                        label_len,
                    });
                }
                self.counters.band_ops += 1;
                // Point depth before the merge; unchanged by rehoming.
                let depth = if x == p {
                    merged_start_depth + (clock - key) as usize
                } else {
                    merged_start_depth + delta as usize + (clock - key) as usize
                };
                if r_external {
                    ext_points.push(depth);
                } else {
                    let mut solo = VecDeque::new();
                    solo.push_back(r);
                    rebuilt.push_back(Band {
                        edges: solo,
                        key: clock - (depth - merged_start_depth) as i64,
                        label_len: r_label,
                    });
                }
            }
            if !cur.is_empty() {
                rebuilt.push_back(Band {
                    edges: cur,
                    key,
                    label_len,
                });
            }
        }
        self.bands = rebuilt;
        for d in ext_points {
            self.push_ext_point(r, d);
        }
    }
}
