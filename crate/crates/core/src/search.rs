//! Breadth-first search over reduction graphs of any calculus.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

/// Outcome of a bounded reachability query.
#[derive(Clone, Debug)]
pub struct Found<T> {
    pub found: bool,
    /// Start to goal inclusive when `found`.
    pub path: Vec<T>,
    pub nodes_explored: usize,
    /// The whole reachable graph was enumerated without hitting a cap.
    pub exhausted: bool,
}

impl<T> Found<T> {
    pub fn steps(&self) -> usize {
        self.path.len().saturating_sub(1)
    }

    /// Neither found nor ruled out.
    pub fn inconclusive(&self) -> bool {
        !self.found && !self.exhausted
    }
}

/// Search from `from` for a node satisfying `goal`.
///
/// With `plus`, the start node only counts as a goal if it is reached
/// again through at least one step.
pub fn bfs<T, K>(
    from: &T,
    key: impl Fn(&T) -> K,
    succ: impl Fn(&T) -> Vec<T>,
    goal: impl Fn(&T) -> bool,
    plus: bool,
    max_nodes: usize,
    max_depth: usize,
) -> Found<T>
where
    T: Clone,
    K: Eq + Hash,
{
    let mut nodes: Vec<(T, Option<usize>, usize)> = vec![(from.clone(), None, 0)];
    let mut seen: HashMap<K, usize> = HashMap::new();
    seen.insert(key(from), 0);
    let rebuild = |nodes: &Vec<(T, Option<usize>, usize)>, mut i: usize, extra: Option<T>| {
        let mut path = Vec::new();
        if let Some(e) = extra {
            path.push(e);
        }
        loop {
            path.push(nodes[i].0.clone());
            match nodes[i].1 {
                Some(p) => i = p,
                None => break,
            }
        }
        path.reverse();
        path
    };
    if !plus && goal(from) {
        return Found {
            found: true,
            path: vec![from.clone()],
            nodes_explored: 1,
            exhausted: false,
        };
    }
    let mut queue = VecDeque::from([0usize]);
    let mut capped = false;
    while let Some(i) = queue.pop_front() {
        let depth = nodes[i].2;
        if depth >= max_depth {
            capped = true;
            continue;
        }
        let here = nodes[i].0.clone();
        for n in succ(&here) {
            if goal(&n) {
                let explored = nodes.len();
                return Found {
                    found: true,
                    path: rebuild(&nodes, i, Some(n)),
                    nodes_explored: explored,
                    exhausted: false,
                };
            }
            let k = key(&n);
            if seen.contains_key(&k) {
                continue;
            }
            if nodes.len() >= max_nodes {
                capped = true;
                continue;
            }
            seen.insert(k, nodes.len());
            queue.push_back(nodes.len());
            nodes.push((n, Some(i), depth + 1));
        }
    }
    Found {
        found: false,
        path: Vec::new(),
        nodes_explored: nodes.len(),
        exhausted: !capped,
    }
}

/// Do `a` and `b` have a common reduct within `depth` steps of each?
pub fn joinable<T, K>(a: &T, b: &T, key: impl Fn(&T) -> K, succ: impl Fn(&T) -> Vec<T>, depth: usize, max_nodes: usize) -> bool
where
    T: Clone,
    K: Eq + Hash,
{
    let ball = |from: &T| {
        let mut seen: HashMap<K, ()> = HashMap::new();
        seen.insert(key(from), ());
        let mut frontier = vec![from.clone()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for t in &frontier {
                for n in succ(t) {
                    if seen.len() >= max_nodes {
                        break;
                    }
                    if seen.insert(key(&n), ()).is_none() {
                        next.push(n);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        seen
    };
    let left = ball(a);
    let right = ball(b);
    left.keys().any(|k| right.contains_key(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn succ(n: &u32) -> Vec<u32> {
        if *n == 0 {
            vec![]
        } else {
            vec![n - 1, n / 2]
        }
    }

    #[test]
    fn finds_shortest_path() {
        let r = bfs(&8u32, |n| *n, succ, |n| *n == 1, true, 100, 100);
        assert!(r.found);
        assert_eq!(r.steps(), 3);
        assert_eq!(r.path.last(), Some(&1));
    }

    #[test]
    fn plus_mode_needs_a_step() {
        let r = bfs(&0u32, |n| *n, succ, |n| *n == 0, true, 100, 100);
        assert!(!r.found && r.exhausted);
        let r = bfs(&0u32, |n| *n, succ, |n| *n == 0, false, 100, 100);
        assert!(r.found && r.steps() == 0);
    }

    #[test]
    fn caps_make_results_inconclusive() {
        let r = bfs(&1000u32, |n| *n, succ, |n| *n == 2000, true, 10, 100);
        assert!(r.inconclusive());
    }

    #[test]
    fn joins_diamonds() {
        assert!(joinable(&6u32, &5u32, |n| *n, succ, 3, 100));
        assert!(!joinable(&6u32, &5u32, |n| *n, |_| vec![], 3, 100));
    }
}
