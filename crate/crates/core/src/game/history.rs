//! The public-history tree of a partially observable game.
//!
//! A node at depth `h >= 1` carries the history `(o_1, a_1, b_1, ..., o_h)`:
//! everything both players have seen up to and including the step-`h`
//! observation, before acting at step `h`. The root is the empty history.
//! Children of a depth-`h` node (`h < H`) are indexed by the joint action
//! and next observation `(a, b, o')` in lexicographic order with `a`
//! outermost; children of the root are indexed by `o_1`.

use crate::error::{CoreError, Result};

/// Default cap on the number of tree nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryNode {
    pub id: usize,
    /// `None` for the root.
    pub parent: Option<usize>,
    /// Number of observations in the history; the root has depth 0.
    pub depth: usize,
    /// Observation carried by this node; `usize::MAX` at the root.
    pub obs: usize,
    /// Actions taken at the parent that led here (`None` for the root and
    /// for depth-1 nodes, which follow no action).
    pub prev_actions: Option<(usize, usize)>,
    /// Children in deterministic order: by `o_1` under the root, by
    /// `(a, b, o')` lex order elsewhere. Empty at depth `H`.
    pub children: Vec<usize>,
}

/// Complete public-history tree for dimensions `(H, O, A, B)` with
/// deterministic preorder node numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryTree {
    pub horizon: usize,
    pub num_obs: usize,
    pub num_actions_max: usize,
    pub num_actions_min: usize,
    pub nodes: Vec<HistoryNode>,
    /// Node ids grouped by depth, in id order; `by_depth[0] == [0]`.
    pub by_depth: Vec<Vec<usize>>,
}

impl HistoryTree {
    /// Child reached from `node` by `(a, b, o')`; `node` must not be at depth `H`.
    #[inline]
    pub fn child(&self, node: usize, a: usize, b: usize, o: usize) -> usize {
        debug_assert!(self.nodes[node].depth >= 1);
        self.nodes[node].children[(a * self.num_actions_min + b) * self.num_obs + o]
    }

    /// Depth-1 node for the first observation `o`.
    #[inline]
    pub fn root_child(&self, o: usize) -> usize {
        self.nodes[0].children[o]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

/// Closed-form node count: `1 + sum_{h=1}^{H} O * (A*B*O)^(h-1)`.
/// Saturates at `u64::MAX` on overflow.
pub fn history_node_count(horizon: usize, o: usize, a: usize, b: usize) -> u64 {
    let branch = (a as u64).saturating_mul(b as u64).saturating_mul(o as u64);
    let mut total: u64 = 1;
    let mut level: u64 = o as u64;
    for _ in 0..horizon {
        total = total.saturating_add(level);
        level = level.saturating_mul(branch);
    }
    total
}

/// Builds the complete public-history tree, refusing if it would exceed
/// `budget` nodes (default [`DEFAULT_NODE_BUDGET`]).
pub fn enumerate_histories(
    horizon: usize,
    num_obs: usize,
    num_actions_max: usize,
    num_actions_min: usize,
    budget: Option<u64>,
) -> Result<HistoryTree> {
    if horizon == 0 || num_obs == 0 || num_actions_max == 0 || num_actions_min == 0 {
        return Err(CoreError::InvalidInput(
            "history tree dimensions must be positive".into(),
        ));
    }
    let budget = budget.unwrap_or(DEFAULT_NODE_BUDGET);
    let required = history_node_count(horizon, num_obs, num_actions_max, num_actions_min);
    if required > budget {
        return Err(CoreError::BudgetExceeded { required, budget });
    }

    let mut nodes: Vec<HistoryNode> = Vec::with_capacity(required as usize);
    nodes.push(HistoryNode {
        id: 0,
        parent: None,
        depth: 0,
        obs: usize::MAX,
        prev_actions: None,
        children: Vec::new(),
    });

    // Iterative preorder: the explicit stack holds (parent, depth, obs,
    // prev_actions) of nodes still to create, pushed in reverse order so
    // ids come out in preorder.
    struct Pending {
        parent: usize,
        obs: usize,
        prev_actions: Option<(usize, usize)>,
    }
    let mut stack: Vec<Pending> = Vec::new();
    for o in (0..num_obs).rev() {
        stack.push(Pending {
            parent: 0,
            obs: o,
            prev_actions: None,
        });
    }
    while let Some(p) = stack.pop() {
        let id = nodes.len();
        let depth = nodes[p.parent].depth + 1;
        nodes[p.parent].children.push(id);
        nodes.push(HistoryNode {
            id,
            parent: Some(p.parent),
            depth,
            obs: p.obs,
            prev_actions: p.prev_actions,
            children: Vec::new(),
        });
        if depth < horizon {
            for a in (0..num_actions_max).rev() {
                for b in (0..num_actions_min).rev() {
                    for o in (0..num_obs).rev() {
                        stack.push(Pending {
                            parent: id,
                            obs: o,
                            prev_actions: Some((a, b)),
                        });
                    }
                }
            }
        }
    }
    debug_assert_eq!(nodes.len() as u64, required);
    // Each sibling is created only after the previous sibling's whole
    // subtree, so every child list is already in (a, b, o') order.

    let mut by_depth = vec![Vec::new(); horizon + 1];
    for n in &nodes {
        by_depth[n.depth].push(n.id);
    }

    Ok(HistoryTree {
        horizon,
        num_obs,
        num_actions_max,
        num_actions_min,
        nodes,
        by_depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_tree_has_two_nodes() {
        let t = enumerate_histories(1, 1, 1, 1, None).unwrap();
        assert_eq!(t.node_count(), 2);
        assert_eq!(t.nodes[1].parent, Some(0));
        assert_eq!(t.nodes[1].obs, 0);
    }

    #[test]
    fn node_count_matches_closed_form() {
        // 1 + O + O*(A*B*O) = 1 + 2 + 2*8 = 19
        let t = enumerate_histories(2, 2, 2, 2, None).unwrap();
        assert_eq!(t.node_count(), 19);
        assert_eq!(history_node_count(2, 2, 2, 2), 19);

        for (h, o, a, b) in [(1, 3, 2, 2), (2, 3, 2, 1), (3, 2, 2, 2), (3, 3, 2, 2)] {
            let t = enumerate_histories(h, o, a, b, None).unwrap();
            assert_eq!(t.node_count() as u64, history_node_count(h, o, a, b));
        }
    }

    #[test]
    fn budget_exceeded_reports_required_count() {
        // 1 + 3 + 3*12 + 36*12 = 472 > 100
        let err = enumerate_histories(3, 3, 2, 2, Some(100)).unwrap_err();
        match err {
            CoreError::BudgetExceeded { required, budget } => {
                assert_eq!(required, 472);
                assert_eq!(budget, 100);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn children_are_in_action_observation_order() {
        let t = enumerate_histories(2, 2, 2, 2, None).unwrap();
        let n1 = t.root_child(0);
        assert_eq!(t.nodes[n1].obs, 0);
        // Children of a depth-1 node enumerate (a, b, o') lexicographically.
        let mut expected = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for o in 0..2 {
                    expected.push((a, b, o));
                }
            }
        }
        for (k, &c) in t.nodes[n1].children.iter().enumerate() {
            let (a, b, o) = expected[k];
            assert_eq!(t.nodes[c].prev_actions, Some((a, b)));
            assert_eq!(t.nodes[c].obs, o);
            assert_eq!(t.child(n1, a, b, o), c);
        }
    }

    #[test]
    fn preorder_ids_are_parent_before_child() {
        let t = enumerate_histories(3, 2, 1, 2, None).unwrap();
        for n in &t.nodes {
            if let Some(p) = n.parent {
                assert!(p < n.id);
            }
        }
    }
}
