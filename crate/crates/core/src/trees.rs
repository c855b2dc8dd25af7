//! Binary trees, their canonical enumeration, and the node-insertion step.
//!
//! A tree is either an external node or an internal node with two subtrees.
//! Subtrees are reference counted so enumeration and the insertion step share
//! structure instead of copying it.
//!
//! The right branch (spine) of a tree is the path from the root that always
//! takes the right child. Its segment count is the number of edges on that
//! path, so a tree whose root is internal has at least one segment.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};

/// Largest size [`enumerate`] accepts unless a different cap is supplied.
pub const DEFAULT_CAP: usize = 14;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum BinaryTree {
    External,
    Internal(Arc<Node>),
}

#[derive(PartialEq, Eq, Hash)]
pub struct Node {
    left: BinaryTree,
    right: BinaryTree,
    size: usize,
}

impl BinaryTree {
    pub fn internal(left: BinaryTree, right: BinaryTree) -> Self {
        let size = 1 + left.size() + right.size();
        BinaryTree::Internal(Arc::new(Node { left, right, size }))
    }

    /// The unique tree of size 1.
    pub fn leaf_pair() -> Self {
        Self::internal(BinaryTree::External, BinaryTree::External)
    }

    /// A right comb: `n` internal nodes chained through right children.
    pub fn right_comb(n: usize) -> Self {
        (0..n).fold(BinaryTree::External, |acc, _| {
            BinaryTree::internal(BinaryTree::External, acc)
        })
    }

    pub fn is_external(&self) -> bool {
        matches!(self, BinaryTree::External)
    }

    /// Number of internal nodes.
    pub fn size(&self) -> usize {
        match self {
            BinaryTree::External => 0,
            BinaryTree::Internal(node) => node.size,
        }
    }

    /// Internal plus external nodes; always `2 * size + 1`.
    pub fn node_count(&self) -> usize {
        2 * self.size() + 1
    }

    pub fn children(&self) -> Option<(&BinaryTree, &BinaryTree)> {
        match self {
            BinaryTree::External => None,
            BinaryTree::Internal(node) => Some((&node.left, &node.right)),
        }
    }

    pub fn left(&self) -> Option<&BinaryTree> {
        self.children().map(|(l, _)| l)
    }

    pub fn right(&self) -> Option<&BinaryTree> {
        self.children().map(|(_, r)| r)
    }

    /// Number of edges on the right branch.
    pub fn spine_segments(&self) -> usize {
        let mut segments = 0;
        let mut cursor = self;
        while let Some(right) = cursor.right() {
            segments += 1;
            cursor = right;
        }
        segments
    }

    /// The left subtrees hanging off the right branch, root first.
    fn spine_lefts(&self) -> Vec<&BinaryTree> {
        let mut lefts = Vec::new();
        let mut cursor = self;
        while let Some((left, right)) = cursor.children() {
            lefts.push(left);
            cursor = right;
        }
        lefts
    }

    /// Applies the insertion step at every node of the right branch.
    ///
    /// The tree at position `d` replaces the subtree at spine depth `d` by an
    /// internal node whose left child is that subtree and whose right child
    /// is a fresh external node. Depth `spine_segments()` is the terminal
    /// external node, so the result has `1 + spine_segments()` entries and
    /// entry `d` has `d + 1` segments.
    pub fn successors(&self) -> Vec<BinaryTree> {
        let lefts = self.spine_lefts();
        let mut subtrees = Vec::with_capacity(lefts.len() + 1);
        let mut cursor = self;
        subtrees.push(cursor.clone());
        while let Some(right) = cursor.right() {
            subtrees.push(right.clone());
            cursor = right;
        }

        subtrees
            .into_iter()
            .enumerate()
            .map(|(depth, subtree)| {
                let grafted = BinaryTree::internal(subtree, BinaryTree::External);
                rebuild_spine(&lefts[..depth], grafted)
            })
            .collect()
    }

    /// Undoes the insertion step.
    ///
    /// The last internal node on the right branch has an external right child;
    /// it is replaced by its left subtree. Returns the smaller tree together
    /// with the depth at which [`successors`](Self::successors) regrows `self`.
    pub fn predecessor(&self) -> Result<(BinaryTree, usize)> {
        let lefts = self.spine_lefts();
        let Some((last, upper)) = lefts.split_last() else {
            return Err(Error::EmptyTree);
        };
        let depth = upper.len();
        Ok((rebuild_spine(upper, (*last).clone()), depth))
    }

    pub fn encode(&self) -> TreeCode {
        let mut bits = Vec::with_capacity(self.node_count());
        let mut stack = vec![self];
        while let Some(tree) = stack.pop() {
            match tree.children() {
                None => bits.push(false),
                Some((left, right)) => {
                    bits.push(true);
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        TreeCode { bits }
    }
}

/// Hangs `lefts` (root first) off a right branch that ends in `tail`.
fn rebuild_spine(lefts: &[&BinaryTree], tail: BinaryTree) -> BinaryTree {
    lefts
        .iter()
        .rev()
        .fold(tail, |acc, left| BinaryTree::internal((*left).clone(), acc))
}

impl fmt::Debug for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryTree({})", self.encode())
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.encode(), f)
    }
}

/// Preorder bit encoding: internal nodes are `1`, external nodes `0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeCode {
    bits: Vec<bool>,
}

impl TreeCode {
    /// Validates a raw bit sequence.
    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        let mut balance: isize = 0;
        for (i, &bit) in bits.iter().enumerate() {
            balance += if bit { 1 } else { -1 };
            if balance < 0 && i + 1 != bits.len() {
                return Err(Error::MalformedCode(format!(
                    "prefix of length {} has more zeros than ones",
                    i + 1
                )));
            }
        }
        if balance != -1 {
            let ones = bits.iter().filter(|&&b| b).count();
            return Err(Error::MalformedCode(format!(
                "expected exactly one more zero than ones, found {} zeros and {ones} ones",
                bits.len() - ones
            )));
        }
        Ok(TreeCode { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// The bits as an integer, root first, when the code fits in 128 bits.
    pub fn packed(&self) -> Option<u128> {
        (self.bits.len() <= 128).then(|| {
            self.bits
                .iter()
                .fold(0u128, |acc, &b| (acc << 1) | u128::from(b))
        })
    }

    pub fn decode(&self) -> BinaryTree {
        // Postorder reconstruction: scan the preorder code backwards.
        let mut stack: Vec<BinaryTree> = Vec::new();
        for &bit in self.bits.iter().rev() {
            if bit {
                let left = stack.pop().expect("validated code");
                let right = stack.pop().expect("validated code");
                stack.push(BinaryTree::internal(left, right));
            } else {
                stack.push(BinaryTree::External);
            }
        }
        debug_assert_eq!(stack.len(), 1);
        stack.pop().expect("validated code")
    }
}

impl fmt::Display for TreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: String = self
            .bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        f.write_str(&text)
    }
}

impl FromStr for TreeCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(Error::MalformedCode(format!(
                    "unexpected character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        TreeCode::from_bits(bits)
    }
}

/// Every tree of size `n`, in canonical order, with the default cap.
pub fn enumerate(n: usize) -> Result<Vec<BinaryTree>> {
    enumerate_with_cap(n, DEFAULT_CAP)
}

/// Every tree of size `n` in canonical order.
///
/// Trees are ordered by left-subtree size ascending; within one split the
/// left subtrees vary slowest, and both sides follow the same order
/// recursively.
pub fn enumerate_with_cap(n: usize, cap: usize) -> Result<Vec<BinaryTree>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(enumerate_levels(n).pop().expect("level 0 always exists"))
}

/// Levels `0..=n` of the canonical enumeration. No cap is applied.
fn enumerate_levels(n: usize) -> Vec<Vec<BinaryTree>> {
    let mut levels: Vec<Vec<BinaryTree>> = vec![vec![BinaryTree::External]];
    for size in 1..=n {
        let mut level = Vec::new();
        for left_size in 0..size {
            let right_size = size - 1 - left_size;
            for left in &levels[left_size] {
                for right in &levels[right_size] {
                    level.push(BinaryTree::internal(left.clone(), right.clone()));
                }
            }
        }
        levels.push(level);
    }
    levels
}

/// Outcome of checking the insertion step from size `n` to size `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepCheck {
    pub n: usize,
    /// Trees produced by applying the step to every size-`n` tree.
    pub images: usize,
    /// Number of size-`n + 1` trees.
    pub targets: usize,
    /// Images that repeat an earlier image.
    pub duplicates: usize,
    /// Size-`n + 1` trees never produced.
    pub missing: usize,
    /// Size-`n + 1` trees whose predecessor does not regrow them.
    pub inverse_failures: usize,
}

impl StepCheck {
    pub fn passed(&self) -> bool {
        self.images == self.targets
            && self.duplicates == 0
            && self.missing == 0
            && self.inverse_failures == 0
    }
}

/// Checks that the insertion step hits every size-`n + 1` tree exactly once
/// and that [`BinaryTree::predecessor`] inverts it.
pub fn check_construction_step(n: usize, cap: usize) -> Result<StepCheck> {
    const PACKABLE: usize = 63;
    if n + 1 > cap.min(PACKABLE) {
        return Err(Error::CapExceeded {
            n: n + 1,
            cap: cap.min(PACKABLE),
        });
    }
    let mut levels = enumerate_levels(n + 1);
    let targets = levels.pop().expect("level n + 1");
    let sources = levels.pop().expect("level n");
    let pack = |t: &BinaryTree| t.encode().packed().expect("size below packing limit");

    let mut images: Vec<u128> = sources
        .iter()
        .flat_map(|t| t.successors())
        .map(|t| pack(&t))
        .collect();
    images.sort_unstable();
    let image_count = images.len();
    let mut duplicates = 0;
    images.dedup_by(|a, b| {
        let same = a == b;
        duplicates += usize::from(same);
        same
    });

    let mut missing = 0;
    let mut inverse_failures = 0;
    for t in &targets {
        if images.binary_search(&pack(t)).is_err() {
            missing += 1;
        }
        let regrown = t
            .predecessor()
            .ok()
            .and_then(|(p, depth)| p.successors().into_iter().nth(depth));
        if regrown.as_ref() != Some(t) {
            inverse_failures += 1;
        }
    }

    Ok(StepCheck {
        n,
        images: image_count,
        targets: targets.len(),
        duplicates,
        missing,
        inverse_failures,
    })
}

/// Uniform random binary trees by leaf insertion.
///
/// Each growth step picks one of the `2i + 1` current nodes uniformly, pushes
/// it down one level, and hangs a new external node on a uniformly chosen side.
/// After `n` steps every shape of size `n` is equally likely.
///
/// The generator is xoshiro256++ seeded through SplitMix64, so a fixed seed
/// gives bit-for-bit identical sequences on every platform.
pub struct Sampler {
    rng: Xoshiro256PlusPlus,
}

const NONE: usize = usize::MAX;

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// An independent stream: advances a copy of this generator by 2^128 steps.
    pub fn split(&mut self) -> Sampler {
        let child = self.rng.clone();
        self.rng.long_jump();
        Sampler { rng: child }
    }

    pub fn sample(&mut self, n: usize) -> BinaryTree {
        let total = 2 * n + 1;
        let mut left = vec![NONE; total];
        let mut right = vec![NONE; total];
        let mut parent = vec![NONE; total];
        let mut root = 0;

        for step in 0..n {
            let target = self.rng.gen_range(0..2 * step + 1);
            let new_leaf_on_left: bool = self.rng.gen();
            let internal = 2 * step + 1;
            let leaf = 2 * step + 2;

            let up = parent[target];
            if up == NONE {
                root = internal;
            } else if left[up] == target {
                left[up] = internal;
            } else {
                right[up] = internal;
            }
            parent[internal] = up;

            if new_leaf_on_left {
                left[internal] = leaf;
                right[internal] = target;
            } else {
                left[internal] = target;
                right[internal] = leaf;
            }
            parent[target] = internal;
            parent[leaf] = internal;
        }

        build_from_links(root, &left, &right)
    }

    /// Samples a size-`n` tree and returns only its right-branch segment count.
    pub fn sample_spine(&mut self, n: usize) -> usize {
        self.sample(n).spine_segments()
    }
}

fn build_from_links(root: usize, left: &[usize], right: &[usize]) -> BinaryTree {
    enum Visit {
        Enter(usize),
        Join,
    }
    let mut work = vec![Visit::Enter(root)];
    let mut built: Vec<BinaryTree> = Vec::new();
    while let Some(visit) = work.pop() {
        match visit {
            Visit::Enter(id) if left[id] == NONE => built.push(BinaryTree::External),
            Visit::Enter(id) => {
                work.push(Visit::Join);
                work.push(Visit::Enter(right[id]));
                work.push(Visit::Enter(left[id]));
            }
            Visit::Join => {
                let r = built.pop().expect("right subtree built");
                let l = built.pop().expect("left subtree built");
                built.push(BinaryTree::internal(l, r));
            }
        }
    }
    built.pop().expect("root built")
}

/// One uniformly random tree of size `n`, determined by `seed`.
pub fn sample_uniform(n: usize, seed: u64) -> BinaryTree {
    Sampler::new(seed).sample(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::catalan;
    use std::collections::{HashMap, HashSet};

    fn code(s: &str) -> BinaryTree {
        s.parse::<TreeCode>().unwrap().decode()
    }

    #[test]
    fn sizes_and_spines() {
        assert_eq!(BinaryTree::External.size(), 0);
        assert_eq!(BinaryTree::External.spine_segments(), 0);
        assert_eq!(BinaryTree::leaf_pair().size(), 1);
        assert_eq!(BinaryTree::leaf_pair().spine_segments(), 1);
        assert_eq!(BinaryTree::right_comb(4).size(), 4);
        assert_eq!(BinaryTree::right_comb(4).spine_segments(), 4);
        assert_eq!(BinaryTree::right_comb(4).node_count(), 9);
    }

    #[test]
    fn codes_for_small_trees() {
        assert_eq!(BinaryTree::External.encode().to_string(), "0");
        assert_eq!(BinaryTree::leaf_pair().encode().to_string(), "100");
        assert_eq!(BinaryTree::right_comb(3).encode().to_string(), "1010100");
        assert_eq!(code("1010100"), BinaryTree::right_comb(3));
    }

    #[test]
    fn malformed_codes_are_rejected() {
        for bad in ["", "1", "00", "10", "1000", "0100", "110", "10a"] {
            assert!(
                matches!(bad.parse::<TreeCode>(), Err(Error::MalformedCode(_))),
                "{bad:?} accepted"
            );
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate(0).unwrap(), vec![BinaryTree::External]);
        let three: Vec<String> = enumerate(3)
            .unwrap()
            .iter()
            .map(|t| t.to_string())
            .collect();
        // left size 0 (two right shapes), then 1/1, then 2/0 (two left shapes)
        assert_eq!(
            three,
            ["1010100", "1011000", "1100100", "1101000", "1110000"]
        );
        assert_eq!(enumerate(11).unwrap().len(), 58786);
    }

    #[test]
    fn enumeration_cap() {
        assert_eq!(
            enumerate(15).unwrap_err(),
            Error::CapExceeded { n: 15, cap: 14 }
        );
        assert_eq!(
            enumerate_with_cap(3, 2).unwrap_err(),
            Error::CapExceeded { n: 3, cap: 2 }
        );
        assert_eq!(enumerate_with_cap(7, 7).unwrap().len(), 429);
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        for n in 0..=11 {
            let trees = enumerate(n).unwrap();
            let codes: HashSet<TreeCode> = trees.iter().map(BinaryTree::encode).collect();
            assert_eq!(codes.len(), trees.len());
            assert_eq!(crate::Count::from(trees.len()), catalan(n));
            assert!(trees.iter().all(|t| t.size() == n));
        }
    }

    #[test]
    fn successors_of_small_trees() {
        let from_external = BinaryTree::External.successors();
        assert_eq!(from_external, vec![BinaryTree::leaf_pair()]);

        let from_one = BinaryTree::leaf_pair().successors();
        let spines: Vec<usize> = from_one.iter().map(BinaryTree::spine_segments).collect();
        assert_eq!(spines, [1, 2]);

        let comb = BinaryTree::right_comb(3).successors();
        let spines: Vec<usize> = comb.iter().map(BinaryTree::spine_segments).collect();
        assert_eq!(spines, [1, 2, 3, 4]);
        let four: HashSet<BinaryTree> = enumerate(4).unwrap().into_iter().collect();
        assert!(comb.iter().all(|t| four.contains(t)));
    }

    #[test]
    fn predecessor_matches_figure() {
        // A, B, C, D are distinct size-1..4 combs hung off a four-segment spine.
        let [a, b, c, d] = [1, 2, 3, 4].map(BinaryTree::right_comb);
        let tall = BinaryTree::internal(
            a.clone(),
            BinaryTree::internal(
                b.clone(),
                BinaryTree::internal(
                    c.clone(),
                    BinaryTree::internal(d.clone(), BinaryTree::External),
                ),
            ),
        );
        let expected = BinaryTree::internal(a, BinaryTree::internal(b, BinaryTree::internal(c, d)));
        let (pred, depth) = tall.predecessor().unwrap();
        assert_eq!(pred, expected);
        assert_eq!(depth, 3);
        assert_eq!(pred.successors()[depth], tall);
    }

    #[test]
    fn predecessor_edge_cases() {
        assert_eq!(BinaryTree::External.predecessor(), Err(Error::EmptyTree));
        assert_eq!(
            BinaryTree::leaf_pair().predecessor().unwrap(),
            (BinaryTree::External, 0)
        );
    }

    #[test]
    fn predecessor_round_trip_for_size_six() {
        let trees = enumerate(6).unwrap();
        assert_eq!(trees.len(), 132);
        for t in trees {
            let (p, d) = t.predecessor().unwrap();
            assert_eq!(p.successors()[d], t);
        }
    }

    #[test]
    fn construction_step_is_a_partition() {
        for n in 0..=9 {
            let mut seen: HashMap<TreeCode, usize> = HashMap::new();
            for t in enumerate(n).unwrap() {
                let next = t.successors();
                assert_eq!(next.len(), 1 + t.spine_segments());
                for s in next {
                    *seen.entry(s.encode()).or_default() += 1;
                }
            }
            let target = enumerate(n + 1).unwrap();
            assert_eq!(seen.len(), target.len());
            for t in target {
                assert_eq!(seen.get(&t.encode()), Some(&1));
            }
        }
    }

    #[test]
    fn construction_check_report() {
        let check = check_construction_step(5, DEFAULT_CAP).unwrap();
        assert!(check.passed());
        assert_eq!(check.images, 132);
        assert_eq!(
            check_construction_step(14, DEFAULT_CAP).unwrap_err(),
            Error::CapExceeded { n: 15, cap: 14 }
        );
    }

    #[test]
    fn packed_codes() {
        assert_eq!(BinaryTree::External.encode().packed(), Some(0));
        assert_eq!(BinaryTree::right_comb(3).encode().packed(), Some(0b1010100));
    }

    #[test]
    fn sampler_trivial_sizes() {
        for seed in [0, 1, 42, u64::MAX] {
            assert_eq!(sample_uniform(0, seed), BinaryTree::External);
            assert_eq!(sample_uniform(1, seed), BinaryTree::leaf_pair());
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let a: Vec<TreeCode> = {
            let mut s = Sampler::new(9);
            (0..50).map(|_| s.sample(20).encode()).collect()
        };
        let b: Vec<TreeCode> = {
            let mut s = Sampler::new(9);
            (0..50).map(|_| s.sample(20).encode()).collect()
        };
        assert_eq!(a, b);
        assert!(a.iter().all(|c| c.len() == 41));
    }

    #[test]
    fn split_streams_differ() {
        let mut parent = Sampler::new(5);
        let mut child = parent.split();
        let x: Vec<TreeCode> = (0..10).map(|_| parent.sample(12).encode()).collect();
        let y: Vec<TreeCode> = (0..10).map(|_| child.sample(12).encode()).collect();
        assert_ne!(x, y);
    }

    #[test]
    fn sampler_is_uniform_at_size_four() {
        let trees = enumerate(4).unwrap();
        let mut hits: HashMap<TreeCode, usize> = HashMap::new();
        let mut sampler = Sampler::new(42);
        let draws = 14_000;
        for _ in 0..draws {
            *hits.entry(sampler.sample(4).encode()).or_default() += 1;
        }
        assert_eq!(hits.len(), 14);
        for t in &trees {
            let freq = hits[&t.encode()] as f64 / draws as f64;
            assert!((freq - 1.0 / 14.0).abs() <= 0.02, "{t}: {freq}");
        }
    }
}
