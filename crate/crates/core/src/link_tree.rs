//! Link-tree maintenance: pos-updates, repr hints, ancestor and lowest
//! common ancestor queries over the tree whose nodes are suffix-tree edges
//! and whose parent relation is the edge suffix link.

use crate::tree::{EdgeHandle, Index, IndexError};

impl Index {
    /// String depth of the start node of `e` (0 for the top edge).
    pub fn lt_depth(&self, e: EdgeHandle) -> usize {
        if e == self.top_edge {
            return 0;
        }
        self.start_depth(e)
    }

    /// Endpoint string depth, the quantity the mrmfind/reprupd position
    /// arithmetic runs on (equals the depth of `e` in the link tree).
    pub(crate) fn walk_depth(&self, e: EdgeHandle) -> usize {
        self.end_depth(e)
    }

    /// Record that the endpoint string of `e` occurs ending at `iter`.
    pub fn pos_update(&mut self, e: EdgeHandle, iter: usize) {
        debug_assert!(!self.is_external(e), "pos-update of an external edge");
        let len = self.end_depth(e);
        debug_assert!(iter >= len);
        let new_pos = iter - len;
        let rec = &mut self.edges[e];
        rec.pos = new_pos;
        rec.last_pos_update = iter as u64;
        self.counters.pos_updates += 1;
    }

    /// Is `a` on the suffix-link chain from `b` to the top edge (inclusive)?
    pub fn is_ancestor(&self, a: EdgeHandle, b: EdgeHandle) -> bool {
        if a == b || a == self.top_edge {
            return true;
        }
        if b == self.top_edge {
            return false;
        }
        match (self.edges[a].euler, self.edges[b].euler) {
            (Some((ia, oa)), Some((ib, ob))) => {
                self.order.le(ia, ib) && self.order.le(ob, oa)
            }
            _ => {
                // External edges carry no tokens; walk the chain.
                let mut g = b;
                loop {
                    if g == a {
                        return true;
                    }
                    if g == self.top_edge {
                        return false;
                    }
                    g = self.suf_of(g).expect("chain walk hit the top edge");
                }
            }
        }
    }

    /// Constant-time ancestor test for tokened (internal) edges.
    pub(crate) fn is_ancestor_internal(&self, a: EdgeHandle, b: EdgeHandle) -> bool {
        if a == b || a == self.top_edge {
            return true;
        }
        if b == self.top_edge {
            return false;
        }
        let (ia, oa) = self.edges[a].euler.expect("untokened edge in ancestor test");
        let (ib, ob) = self.edges[b].euler.expect("untokened edge in ancestor test");
        self.order.le(ia, ib) && self.order.le(ob, oa)
    }

    /// Lowest common ancestor in the link tree, by ascending `a`'s chain
    /// until it covers `b`.
    pub fn lca(&self, a: EdgeHandle, b: EdgeHandle) -> EdgeHandle {
        let mut g = a;
        while !self.is_ancestor(g, b) {
            g = self.suf_of(g).expect("lca walk passed the top edge");
        }
        g
    }

    fn lca_internal(&self, a: EdgeHandle, b: EdgeHandle) -> EdgeHandle {
        let mut g = a;
        while !self.is_ancestor_internal(g, b) {
            debug_assert!(g != self.top_edge);
            g = self.suf_of_internal(g);
        }
        g
    }

    fn live_repr(&self, g: EdgeHandle) -> Option<EdgeHandle> {
        self.edges[g].repr.filter(|&f| self.edges.is_live(f))
    }

    /// Reestablish the repr property after `e` was pos-updated, pushing
    /// displaced hints down the link tree. Returns the number of
    /// invocations (1 when the push terminates immediately).
    pub fn repr_update(&mut self, e: EdgeHandle) -> u64 {
        let mut count: u64 = 0;
        let mut cur_e = e;
        let mut cur_r = self.top_edge;
        loop {
            count += 1;
            self.counters.reprupd_calls += 1;
            let old = self.live_repr(cur_r);
            self.edges[cur_r].repr = Some(cur_e);
            let Some(f) = old else { break };
            let g = self.lca_internal(cur_e, f);
            if g == f {
                break;
            }
            let j = self.edges[f].pos + self.walk_depth(f) - self.walk_depth(g) - 1;
            let a = self.text.get(j);
            let gw = self.edges[g].end;
            let hn = *self.nodes[gw]
                .rslink
                .get(&a)
                .expect("reprupd: reverse suffix link missing");
            let h = self.nodes[hn].incoming;
            cur_e = f;
            cur_r = h;
        }
        self.counters.record_reprupd_depth(count as u32);
        count
    }

    /// Public wrapper matching the invocation contract `repr_update(e, top)`.
    pub fn repr_update_from_top(&mut self, e: EdgeHandle) -> Result<u64, IndexError> {
        if e == self.top_edge || self.is_external(e) {
            return Err(IndexError::TopEdge);
        }
        Ok(self.repr_update(e))
    }
}

#[cfg(test)]
mod tests {
    use crate::tree::Index;

    fn indexed(text: &[u8]) -> Index {
        let mut idx = Index::new();
        for &c in text {
            idx.extend(c).unwrap();
        }
        idx
    }

    #[test]
    fn lt_depth_examples() {
        let idx = indexed(b"abcabda");
        assert_eq!(idx.lt_depth(idx.top_edge()), 0);
        // root edge starting 'c' is external (leaf "cabda")
        let c_edge = idx.child_edge(idx.root_node(), b'c').unwrap();
        assert_eq!(idx.lt_depth(c_edge), 0);
        // edge node("ab") -> leaf for suffix 3
        let ab_edge = idx.child_edge(idx.root_node(), b'a').unwrap();
        assert_eq!(idx.endpoint_string(ab_edge), b"ab");
        let (_, ab_node) = idx.edge_endpoints(ab_edge);
        let leaf3 = idx.child_edge(ab_node, b'd').unwrap();
        assert_eq!(idx.lt_depth(leaf3), 2);
    }

    #[test]
    fn ancestor_basics() {
        let idx = indexed(b"abcabda");
        let ab_edge = idx.child_edge(idx.root_node(), b'a').unwrap();
        let b_edge = idx.child_edge(idx.root_node(), b'b').unwrap();
        assert!(idx.is_ancestor(ab_edge, ab_edge));
        assert!(idx.is_ancestor(idx.top_edge(), ab_edge));
        assert!(idx.is_ancestor(b_edge, ab_edge));
        assert!(!idx.is_ancestor(ab_edge, b_edge));
        assert_eq!(idx.lca(ab_edge, ab_edge), ab_edge);
        assert_eq!(idx.lca(ab_edge, idx.top_edge()), idx.top_edge());
    }

    #[test]
    fn pos_update_examples() {
        let mut idx = indexed(b"abcabdab");
        // the iteration consuming the final 'b' pos-updated root->"ab" to 6
        let ab_edge = idx.child_edge(idx.root_node(), b'a').unwrap();
        assert_eq!(idx.edge_pos(ab_edge), 6);
        // repeated pos_update at the same iteration is idempotent
        idx.pos_update(ab_edge, 8);
        assert_eq!(idx.edge_pos(ab_edge), 6);
    }
}
