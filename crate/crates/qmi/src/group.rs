//! Classical isometry groups of finite metric spaces and the largest
//! isometric subgroup of a generated permutation group.
//!
//! Groups are stored extensionally as sorted element lists; the target scale
//! is small (n ≤ 10). Permutations use 0-based images internally and are
//! serialized as 1-based one-line images.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::metric::FiniteMetricSpace;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GroupError {
    #[error("not a bijection: {0}")]
    NotBijection(String),
    #[error("permutation acts on {got} points, expected {expected}")]
    SizeMismatch { expected: usize, got: usize },
}

/// A permutation of `{0, ..., n-1}` stored by its image vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn new(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        if n == 0 {
            return Err(GroupError::NotBijection("empty permutation".into()));
        }
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n {
                return Err(GroupError::NotBijection(format!(
                    "image {} out of range 1..={}",
                    img + 1,
                    n
                )));
            }
            if seen[img] {
                return Err(GroupError::NotBijection(format!(
                    "image {} repeated",
                    img + 1
                )));
            }
            seen[img] = true;
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Composition applying `self` first: `(self.then(g))(i) = g(self(i))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Permutation { images }
    }

    /// Exact distance preservation: `d(σi, σj) = d(i, j)` for all pairs.
    pub fn is_isometry(&self, metric: &FiniteMetricSpace) -> bool {
        let n = self.n();
        if n != metric.n() {
            return false;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if metric.distance(self.images[i], self.images[j]) != metric.distance(i, j) {
                    return false;
                }
            }
        }
        true
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let one_based: Vec<usize> = self.images.iter().map(|&i| i + 1).collect();
        one_based.serialize(serializer)
    }
}

/// A set of permutations closed under composition and inverse, sorted
/// lexicographically by image vector (the identity always sorts first).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermutationGroup {
    n: usize,
    elements: Vec<Permutation>,
}

impl PermutationGroup {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Closure and inverse checks; groups built by this module always pass,
    /// and the test suites assert it.
    pub fn is_group(&self) -> bool {
        if !self.contains(&Permutation::identity(self.n)) {
            return false;
        }
        self.elements.iter().all(|a| {
            self.contains(&a.inverse()) && self.elements.iter().all(|b| self.contains(&a.then(b)))
        })
    }
}

/// All exact isometries of the space, found by backtracking. Candidates for
/// each point are pruned to points with the same sorted distance profile,
/// and partial assignments must preserve every distance to the points
/// already placed.
pub fn isometry_group(metric: &FiniteMetricSpace) -> PermutationGroup {
    let n = metric.n();
    let profiles: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).map(|j| metric.distance(i, j)).collect();
            row.sort_by(f64::total_cmp);
            row
        })
        .collect();

    let mut elements = Vec::new();
    let mut images = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search(metric, &profiles, 0, &mut images, &mut used, &mut elements);
    PermutationGroup { n, elements }
}

fn search(
    metric: &FiniteMetricSpace,
    profiles: &[Vec<f64>],
    pos: usize,
    images: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
) {
    let n = metric.n();
    if pos == n {
        out.push(Permutation {
            images: images.clone(),
        });
        return;
    }
    // ascending candidates keep the output lexicographically sorted
    for candidate in 0..n {
        if used[candidate] || profiles[pos] != profiles[candidate] {
            continue;
        }
        let consistent = (0..pos)
            .all(|prev| metric.distance(pos, prev) == metric.distance(candidate, images[prev]));
        if !consistent {
            continue;
        }
        images[pos] = candidate;
        used[candidate] = true;
        search(metric, profiles, pos + 1, images, used, out);
        images[pos] = usize::MAX;
        used[candidate] = false;
    }
}

/// Closure of the generators under composition; the empty list generates
/// the trivial group.
pub fn generated_group(n: usize, gens: &[Permutation]) -> Result<PermutationGroup, GroupError> {
    for g in gens {
        if g.n() != n {
            return Err(GroupError::SizeMismatch {
                expected: n,
                got: g.n(),
            });
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut queue = std::collections::VecDeque::new();
    let identity = Permutation::identity(n);
    seen.insert(identity.clone());
    queue.push_back(identity);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let next = p.then(g);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(PermutationGroup {
        n,
        elements: seen.into_iter().collect(),
    })
}

/// The elements of `<gens>` that preserve the metric. Distance preservation
/// is closed under composition and inverse, so the result is again a group;
/// this is asserted before returning.
pub fn largest_isometric_subgroup(
    n: usize,
    gens: &[Permutation],
    metric: &FiniteMetricSpace,
) -> Result<PermutationGroup, GroupError> {
    let full = generated_group(n, gens)?;
    let elements: Vec<Permutation> = full
        .elements
        .iter()
        .filter(|p| p.is_isometry(metric))
        .cloned()
        .collect();
    let subgroup = PermutationGroup { n, elements };
    assert!(
        subgroup.is_group(),
        "isometric elements of a group must form a group"
    );
    Ok(subgroup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::magic::MagicUnitary;
    use crate::DEFAULT_TOL;
    use itertools::Itertools;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::new(images.to_vec()).unwrap()
    }

    /// Brute-force oracle: filter all n! permutations by distance preservation.
    fn brute_force_isometries(m: &crate::metric::FiniteMetricSpace) -> Vec<Permutation> {
        (0..m.n())
            .permutations(m.n())
            .map(|images| Permutation { images })
            .filter(|p| p.is_isometry(m))
            .collect()
    }

    #[test]
    fn equilateral_triangle_has_full_symmetric_group() {
        let g = isometry_group(&instances::equilateral3());
        assert_eq!(g.order(), 6);
        assert!(g.is_group());
    }

    #[test]
    fn path3_isometries_are_identity_and_reversal() {
        let g = isometry_group(&instances::path3());
        let expected = [perm(&[0, 1, 2]), perm(&[2, 1, 0])];
        assert_eq!(g.elements(), &expected[..]);
        // oracle: brute force over all 6 permutations
        let brute = brute_force_isometries(&instances::path3());
        assert_eq!(g.elements(), &brute[..]);
    }

    #[test]
    fn two_cluster_group_has_order_eight_with_expected_generators() {
        let g = isometry_group(&instances::two_cluster4());
        assert_eq!(g.order(), 8);
        let gens = [
            perm(&[1, 0, 2, 3]),
            perm(&[0, 1, 3, 2]),
            perm(&[2, 3, 0, 1]),
        ];
        let generated = generated_group(4, &gens).unwrap();
        assert_eq!(g, generated);
        // oracle: brute force over all 24 permutations
        let brute = brute_force_isometries(&instances::two_cluster4());
        assert_eq!(g.elements(), &brute[..]);
    }

    #[test]
    fn generated_group_examples() {
        assert_eq!(generated_group(3, &[]).unwrap().order(), 1);
        assert_eq!(generated_group(3, &[perm(&[1, 2, 0])]).unwrap().order(), 3);
        assert_eq!(
            generated_group(3, &[perm(&[1, 0, 2]), perm(&[1, 2, 0])])
                .unwrap()
                .order(),
            6
        );
        assert!(matches!(
            generated_group(3, &[perm(&[1, 0])]),
            Err(GroupError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn largest_isometric_subgroup_examples() {
        let path = instances::path3();
        let s3_gens = [perm(&[1, 0, 2]), perm(&[1, 2, 0])];
        let h = largest_isometric_subgroup(3, &s3_gens, &path).unwrap();
        assert_eq!(h.elements(), &[perm(&[0, 1, 2]), perm(&[2, 1, 0])][..]);

        let cyclic = [perm(&[1, 2, 0])];
        let trivial = largest_isometric_subgroup(3, &cyclic, &path).unwrap();
        assert_eq!(trivial.order(), 1);

        let iso_gens = [perm(&[2, 1, 0])];
        let whole = largest_isometric_subgroup(3, &iso_gens, &path).unwrap();
        assert_eq!(whole, generated_group(3, &iso_gens).unwrap());
    }

    #[test]
    fn largest_subgroup_is_intersection_with_isometry_group() {
        let m = instances::two_cluster4();
        let gens = [perm(&[1, 2, 3, 0]), perm(&[1, 0, 2, 3])];
        let h = largest_isometric_subgroup(4, &gens, &m).unwrap();
        let full = generated_group(4, &gens).unwrap();
        let iso = isometry_group(&m);
        let expected: Vec<Permutation> = full
            .elements()
            .iter()
            .filter(|p| iso.contains(p))
            .cloned()
            .collect();
        assert_eq!(h.elements(), &expected[..]);
    }

    #[test]
    fn isometry_group_outputs_are_groups_on_whole_corpus() {
        for m in instances::metric_corpus() {
            let g = isometry_group(&m);
            assert!(g.is_group(), "not a group on a {}-point space", m.n());
        }
    }

    #[test]
    fn commutation_agrees_with_classical_isometry() {
        for m in instances::metric_corpus_up_to(4) {
            let iso = isometry_group(&m);
            for images in (0..m.n()).permutations(m.n()) {
                let p = Permutation::new(images.clone()).unwrap();
                let grid = MagicUnitary::from_permutation(&images).unwrap();
                let commutes = grid.check_commutation(&m, DEFAULT_TOL).unwrap().commutes;
                assert_eq!(commutes, iso.contains(&p), "mismatch for {images:?}");
            }
        }
    }

    #[test]
    fn permutation_serializes_one_based() {
        let p = perm(&[2, 0, 1]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[3,1,2]");
    }
}
