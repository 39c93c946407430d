//! Exhaustive path enumeration, used as an independent check of the DP.

use crate::error::{Error, Result};
use crate::graph_model::KDag;

/// Default cap on the number of root paths explored.
pub const DEFAULT_PATH_BUDGET: u64 = 1 << 22;

/// `(shortest, longest)` root-path length from `node`, by walking every
/// parent path depth-first. Fails once more than `budget` complete paths
/// have been enumerated.
pub fn brute_force_extremes(dag: &KDag, node: u64, budget: u64) -> Result<(u32, u32)> {
    if node > dag.n() {
        return Err(Error::Usage(format!("node {node} is not in a dag of size {}", dag.n())));
    }
    if node == 0 {
        return Ok((0, 0));
    }
    let k = dag.k() as usize;
    let mut shortest = u32::MAX;
    let mut longest = 0u32;
    let mut paths = 0u64;
    // Explicit stack of (node, depth); depth counts edges already walked.
    let mut stack = vec![(node, 0u32)];
    let mut buf = vec![0u64; k];
    while let Some((v, depth)) = stack.pop() {
        if v == 0 {
            paths += 1;
            if paths > budget {
                return Err(Error::Resource(format!(
                    "path enumeration from node {node} exceeded the budget of {budget} paths"
                )));
            }
            shortest = shortest.min(depth);
            longest = longest.max(depth);
            continue;
        }
        dag.parents_into(v, &mut buf);
        for &p in &buf {
            stack.push((p, depth + 1));
        }
    }
    Ok((shortest, longest))
}
