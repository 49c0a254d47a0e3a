use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{PointCloud, Vec3};
use crate::error::{Error, Result};

/// K neighbor indices per query point, nearest first, query point excluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborIndex {
    k: usize,
    indices: Vec<usize>,
}

impl NeighborIndex {
    pub(crate) fn from_flat(k: usize, indices: Vec<usize>) -> Self {
        debug_assert!(k == 0 || indices.len().is_multiple_of(k));
        Self { k, indices }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> usize {
        self.indices.len().checked_div(self.k).unwrap_or(0)
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.indices[i * self.k..(i + 1) * self.k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.indices.chunks(self.k.max(1))
    }
}

/// Squared Euclidean distance with a fixed summation order, shared by every
/// neighbor query so that different search strategies agree bit for bit.
#[inline]
pub(crate) fn dist2(a: &Vec3, b: &Vec3) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    dx * dx + dy * dy + dz * dz
}

fn check_k(cloud: &PointCloud, k: usize) -> Result<()> {
    if k == 0 || k >= cloud.len() {
        return Err(Error::InvalidArgument(format!(
            "k must be in [1, N-1], got k={k} for N={}",
            cloud.len()
        )));
    }
    Ok(())
}

fn by_dist_then_index(a: &(f64, usize), b: &(f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))
}

/// Exhaustive O(N^2) k-nearest-neighbor search. Distance ties go to the smaller index.
pub fn knn_bruteforce(cloud: &PointCloud, k: usize) -> Result<NeighborIndex> {
    check_k(cloud, k)?;
    let pts = cloud.points();
    let n = pts.len();
    let mut out = Vec::with_capacity(n * k);
    let mut scratch: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
    for (i, q) in pts.iter().enumerate() {
        scratch.clear();
        scratch.extend(
            pts.iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, p)| (dist2(q, p), j)),
        );
        if k < scratch.len() {
            scratch.select_nth_unstable_by(k - 1, by_dist_then_index);
            scratch.truncate(k);
        }
        scratch.sort_unstable_by(by_dist_then_index);
        out.extend(scratch.iter().map(|&(_, j)| j));
    }
    Ok(NeighborIndex::from_flat(k, out))
}

/// k-nearest-neighbor search through a kd-tree. Returns exactly what
/// [`knn_bruteforce`] returns, including tie order.
pub fn knn_indexed(cloud: &PointCloud, k: usize) -> Result<NeighborIndex> {
    check_k(cloud, k)?;
    let tree = KdTree::build(cloud.points());
    let mut out = Vec::with_capacity(cloud.len() * k);
    for (i, q) in cloud.points().iter().enumerate() {
        out.extend(tree.nearest(q, k, Some(i)));
    }
    Ok(NeighborIndex::from_flat(k, out))
}

const LEAF_SIZE: usize = 8;

#[derive(Debug)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

/// Static kd-tree over a borrowed point slice.
///
/// Points with a coordinate equal to a split value may land on either side;
/// the search only prunes a subtree whose slab distance strictly exceeds the
/// current k-th best, so equal-distance candidates are never skipped.
#[derive(Debug)]
pub struct KdTree<'a> {
    points: &'a [Vec3],
    order: Vec<usize>,
    root: Node,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    d2: f64,
    index: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d2
            .total_cmp(&other.d2)
            .then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> KdTree<'a> {
    pub fn build(points: &'a [Vec3]) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        let root = Self::build_node(points, &mut order, 0);
        Self {
            points,
            order,
            root,
        }
    }

    fn build_node(points: &[Vec3], order: &mut [usize], offset: usize) -> Node {
        let len = order.len();
        if len <= LEAF_SIZE {
            return Node::Leaf {
                start: offset,
                end: offset + len,
            };
        }
        // split along the axis of widest spread
        let mut lo = points[order[0]];
        let mut hi = lo;
        for &i in order.iter() {
            lo = lo.inf(&points[i]);
            hi = hi.sup(&points[i]);
        }
        let extent = hi - lo;
        let axis = if extent.x >= extent.y && extent.x >= extent.z {
            0
        } else if extent.y >= extent.z {
            1
        } else {
            2
        };
        let mid = len / 2;
        order.select_nth_unstable_by(mid, |&a, &b| {
            points[a][axis].total_cmp(&points[b][axis]).then(a.cmp(&b))
        });
        let value = points[order[mid]][axis];
        let (left, right) = order.split_at_mut(mid);
        Node::Split {
            axis,
            value,
            left: Box::new(Self::build_node(points, left, offset)),
            right: Box::new(Self::build_node(points, right, offset + mid)),
        }
    }

    /// The `k` nearest indices to `query`, ascending by (distance, index),
    /// skipping `exclude` when given.
    pub fn nearest(&self, query: &Vec3, k: usize, exclude: Option<usize>) -> Vec<usize> {
        let mut heap = BinaryHeap::with_capacity(k + 1);
        self.search(&self.root, query, k, exclude, &mut heap);
        let mut found = heap.into_vec();
        found.sort_unstable();
        found.into_iter().map(|c| c.index).collect()
    }

    fn search(
        &self,
        node: &Node,
        query: &Vec3,
        k: usize,
        exclude: Option<usize>,
        heap: &mut BinaryHeap<Candidate>,
    ) {
        match node {
            Node::Leaf { start, end } => {
                for &index in &self.order[*start..*end] {
                    if Some(index) == exclude {
                        continue;
                    }
                    let cand = Candidate {
                        d2: dist2(query, &self.points[index]),
                        index,
                    };
                    if heap.len() < k {
                        heap.push(cand);
                    } else if heap.peek().is_some_and(|worst| cand < *worst) {
                        heap.pop();
                        heap.push(cand);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = query[*axis] - value;
                let (near, far) = if diff < 0.0 {
                    (left, right)
                } else {
                    (right, left)
                };
                self.search(near, query, k, exclude, heap);
                let slab = diff * diff;
                let visit_far = heap.len() < k || heap.peek().is_some_and(|w| slab <= w.d2);
                if visit_far {
                    self.search(far, query, k, exclude, heap);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RngStream;

    fn line(xs: &[f64]) -> PointCloud {
        PointCloud::new(xs.iter().map(|&x| Vec3::new(x, 0.0, 0.0)).collect()).unwrap()
    }

    fn random_cloud(n: usize, seed: u64) -> PointCloud {
        let mut rng = RngStream::new(seed);
        PointCloud::new(
            (0..n)
                .map(|_| {
                    Vec3::new(
                        rng.uniform(0.0, 1.0),
                        rng.uniform(0.0, 1.0),
                        rng.uniform(0.0, 1.0),
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn line_k1() {
        let nn = knn_bruteforce(&line(&[0.0, 1.0, 3.0]), 1).unwrap();
        assert_eq!(nn.row(0), &[1]);
        assert_eq!(nn.row(1), &[0]);
        assert_eq!(nn.row(2), &[1]);
    }

    #[test]
    fn line_k2() {
        let c = line(&[0.0, 1.0, 3.0]);
        for nn in [knn_bruteforce(&c, 2).unwrap(), knn_indexed(&c, 2).unwrap()] {
            assert_eq!(nn.row(0), &[1, 2]);
            assert_eq!(nn.row(1), &[0, 2]);
            assert_eq!(nn.row(2), &[1, 0]);
        }
    }

    #[test]
    fn k_out_of_range() {
        let c = line(&[0.0, 1.0, 3.0]);
        assert!(matches!(knn_bruteforce(&c, 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(knn_indexed(&c, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn matches_direct_scan_1000() {
        let c = random_cloud(1000, 3);
        let nn = knn_bruteforce(&c, 16).unwrap();
        // independent direct scan with a full sort
        for i in (0..1000).step_by(37) {
            let mut all: Vec<(f64, usize)> = (0..1000)
                .filter(|&j| j != i)
                .map(|j| ((c.point(i) - c.point(j)).norm_squared(), j))
                .collect();
            all.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let expect: Vec<usize> = all[..16].iter().map(|x| x.1).collect();
            assert_eq!(nn.row(i), expect.as_slice());
        }
        assert_eq!(knn_indexed(&c, 16).unwrap(), nn);
    }

    #[test]
    fn duplicates_are_zero_distance_neighbors() {
        let c = PointCloud::from_slice(&[
            [0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
        ])
        .unwrap();
        let nn = knn_indexed(&c, 2).unwrap();
        assert_eq!(nn.row(0), &[1, 2]);
        assert_eq!(nn.row(1), &[0, 2]);
        assert_eq!(nn.row(2), &[0, 1]);
        assert_eq!(nn, knn_bruteforce(&c, 2).unwrap());
    }

    #[test]
    fn full_k_is_permutation() {
        let c = random_cloud(40, 11);
        let nn = knn_indexed(&c, 39).unwrap();
        for (i, row) in nn.iter().enumerate() {
            let mut r = row.to_vec();
            r.sort_unstable();
            let expect: Vec<usize> = (0..40).filter(|&j| j != i).collect();
            assert_eq!(r, expect);
        }
    }

    #[test]
    fn grid_ties_match() {
        // lattice points produce many exact distance ties
        let mut pts = Vec::new();
        for x in 0..6 {
            for y in 0..6 {
                for z in 0..3 {
                    pts.push(Vec3::new(x as f64, y as f64, z as f64));
                }
            }
        }
        let c = PointCloud::new(pts).unwrap();
        for k in [1, 4, 6, 13, 26] {
            assert_eq!(knn_indexed(&c, k).unwrap(), knn_bruteforce(&c, k).unwrap());
        }
    }
}
