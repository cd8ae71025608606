//! Hash-tree workload: perfect binary trees whose leaves all carry the value
//! 1 and whose internal nodes hash to the sum of their children. Every hash
//! therefore has a closed form — the root of a depth-d tree hashes to 2^d —
//! which keeps the expected output analytic while the work (allocation,
//! traversal, summation) stays representative.

/// Smallest depth the CLI driver accepts.
pub const MIN_DEPTH: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashTreeNode {
    /// Present iff the node is a leaf.
    pub value: Option<u64>,
    /// Absent until `compute_hash` has visited the node.
    pub hash: Option<u64>,
    pub left: Option<Box<HashTreeNode>>,
    pub right: Option<Box<HashTreeNode>>,
}

impl HashTreeNode {
    pub fn leaf(value: u64) -> Self {
        HashTreeNode {
            value: Some(value),
            hash: None,
            left: None,
            right: None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.left.is_none() && self.right.is_none()
    }
}

/// Builds a perfect binary tree of the given depth. Every leaf carries the
/// value 1; no hashes are computed yet. Node count is 2^(depth+1) - 1, which
/// makes memory the caller's responsibility for large depths.
pub fn build_tree(depth: u32) -> HashTreeNode {
    if depth == 0 {
        return HashTreeNode::leaf(1);
    }
    HashTreeNode {
        value: None,
        hash: None,
        left: Some(Box::new(build_tree(depth - 1))),
        right: Some(Box::new(build_tree(depth - 1))),
    }
}

/// Assigns hashes bottom-up — a leaf hashes to its value, an internal node to
/// the sum of its children's hashes — and returns the root hash.
pub fn compute_hash(node: &mut HashTreeNode) -> u64 {
    let hash = if node.is_leaf() {
        node.value.unwrap_or(0)
    } else {
        node.left.as_mut().map_or(0, |child| compute_hash(child))
            + node.right.as_mut().map_or(0, |child| compute_hash(child))
    };
    node.hash = Some(hash);
    hash
}

/// True iff every node carries a hash and every internal node's hash equals
/// the sum of its children's hashes.
pub fn check(node: &HashTreeNode) -> bool {
    let Some(hash) = node.hash else { return false };
    match (node.left.as_deref(), node.right.as_deref()) {
        (None, None) => true,
        (Some(left), Some(right)) => {
            check(left)
                && check(right)
                && Some(hash) == left.hash.zip(right.hash).map(|(l, r)| l + r)
        }
        // a node with exactly one child is malformed
        _ => false,
    }
}

/// Depth-scheduled driver: builds and checks a stretch tree of depth n+1,
/// then 2^(n-d+4) trees for each depth d = 4, 6, ..., n, with a long-lived
/// tree of depth n kept alive throughout. Prints one line per phase.
///
/// Exit codes: 0 all checks passed, 1 usage error, 2 hash check failure.
pub fn mtree_main(args: &[String]) -> i32 {
    let n = match parse_depth(args) {
        Ok(n) => n,
        Err(message) => {
            eprintln!("{message}");
            eprintln!("usage: mtree <depth>  (depth >= {MIN_DEPTH})");
            return 1;
        }
    };

    let stretch_depth = n + 1;
    let mut stretch = build_tree(stretch_depth);
    let hash = compute_hash(&mut stretch);
    if !check(&stretch) {
        eprintln!("hash check failed for stretch tree of depth {stretch_depth}");
        return 2;
    }
    println!("stretch tree of depth {stretch_depth}\t root hash: {hash}");
    drop(stretch);

    let mut long_lived = build_tree(n);

    let mut depth = MIN_DEPTH;
    while depth <= n {
        let iterations = 1u64 << (n - depth + 4);
        let mut sum = 0u64;
        for _ in 0..iterations {
            let mut tree = build_tree(depth);
            sum += compute_hash(&mut tree);
            if !check(&tree) {
                eprintln!("hash check failed for tree of depth {depth}");
                return 2;
            }
        }
        println!("{iterations}\t trees of depth {depth}\t hash sum: {sum}");
        depth += 2;
    }

    let hash = compute_hash(&mut long_lived);
    if !check(&long_lived) {
        eprintln!("hash check failed for long lived tree of depth {n}");
        return 2;
    }
    println!("long lived tree of depth {n}\t root hash: {hash}");
    0
}

fn parse_depth(args: &[String]) -> Result<u32, String> {
    let [arg] = args else {
        return Err(format!("expected exactly one argument, got {}", args.len()));
    };
    let n: u32 = arg
        .parse()
        .map_err(|_| format!("invalid depth '{arg}': not a nonnegative integer"))?;
    if n < MIN_DEPTH {
        return Err(format!("depth must be at least {MIN_DEPTH}, got {n}"));
    }
    Ok(n)
}
