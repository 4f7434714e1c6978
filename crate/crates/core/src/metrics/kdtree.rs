//! Exact nearest-neighbor queries over 3D point sets.
//!
//! A static kd-tree built once per surface. Queries return exact squared
//! distances (same f64 arithmetic as a brute-force scan), so Hausdorff
//! values computed through the tree match an all-pairs oracle bit for bit.

/// Static 3D kd-tree over `[f64; 3]` points.
pub struct KdTree {
    points: Vec<[f64; 3]>,
    // nodes[i] splits on axis (depth % 3); layout is an implicit balanced
    // tree over `points` reordered in place during construction.
}

impl KdTree {
    /// Builds a tree from `points`. Panics on an empty slice.
    pub fn build(mut points: Vec<[f64; 3]>) -> Self {
        assert!(!points.is_empty(), "kd-tree requires at least one point");
        build_recursive(&mut points, 0);
        KdTree { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Exact squared Euclidean distance from `query` to its nearest point.
    pub fn nearest_sq(&self, query: [f64; 3]) -> f64 {
        let mut best = f64::INFINITY;
        nearest_recursive(&self.points, query, 0, &mut best);
        best
    }
}

fn build_recursive(points: &mut [[f64; 3]], depth: usize) {
    if points.len() <= 1 {
        return;
    }
    let axis = depth % 3;
    let mid = points.len() / 2;
    points.select_nth_unstable_by(mid, |a, b| a[axis].total_cmp(&b[axis]));
    let (left, rest) = points.split_at_mut(mid);
    build_recursive(left, depth + 1);
    build_recursive(&mut rest[1..], depth + 1);
}

fn nearest_recursive(points: &[[f64; 3]], query: [f64; 3], depth: usize, best: &mut f64) {
    if points.is_empty() {
        return;
    }
    if points.len() == 1 {
        *best = best.min(dist_sq(points[0], query));
        return;
    }
    let axis = depth % 3;
    let mid = points.len() / 2;
    let pivot = points[mid];
    *best = best.min(dist_sq(pivot, query));

    let delta = query[axis] - pivot[axis];
    let (near, far) = if delta < 0.0 {
        (&points[..mid], &points[mid + 1..])
    } else {
        (&points[mid + 1..], &points[..mid])
    };
    nearest_recursive(near, query, depth + 1, best);
    if delta * delta < *best {
        nearest_recursive(far, query, depth + 1, best);
    }
}

#[inline]
fn dist_sq(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    dx * dx + dy * dy + dz * dz
}

/// Directed sup-inf distance (squared) from each point of `from` to the set
/// `to`; used by the Hausdorff computation.
pub fn directed_max_min_sq(from: &[[f64; 3]], to: &KdTree) -> f64 {
    from.iter().map(|&p| to.nearest_sq(p)).fold(0.0, f64::max)
}
