//! Shared instance generation for the integration suites.

use qmi::group::Permutation;
use qmi::instances;
use qmi::magic::MagicUnitary;
use qmi::matrix::sample_projection;
use qmi::metric::FiniteMetricSpace;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Instance {
    pub name: String,
    pub magic: MagicUnitary,
    pub metric: FiniteMetricSpace,
}

pub fn named_corpus() -> Vec<(&'static str, FiniteMetricSpace)> {
    vec![
        ("point1", instances::point1()),
        ("pair1", instances::pair1()),
        ("pair2", instances::pair2()),
        ("equilateral3", instances::equilateral3()),
        ("path3", instances::path3()),
        ("scalene3", instances::scalene3()),
        ("two_cluster4", instances::two_cluster4()),
        ("skew4", instances::skew4()),
        ("cycle4", instances::cycle4()),
        ("path5", instances::path5()),
        ("cycle5", instances::cycle5()),
        ("two_triangles6", instances::two_triangles6()),
    ]
}

/// Every permutation for n ≤ 4, a seeded sample for larger spaces.
pub fn permutations_for(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    if n <= 4 {
        all_permutations(n)
    } else {
        let mut out = Vec::new();
        for _ in 0..20 {
            let mut images: Vec<usize> = (0..n).collect();
            images.shuffle(rng);
            out.push(images);
        }
        out
    }
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut images: Vec<usize> = (0..n).collect();
    heap_permute(&mut images, n, &mut out);
    out.sort();
    out
}

fn heap_permute(images: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(images.clone());
        return;
    }
    for i in 0..k {
        heap_permute(images, k - 1, out);
        if k.is_multiple_of(2) {
            images.swap(i, k - 1);
        } else {
            images.swap(0, k - 1);
        }
    }
}

/// The generated instance corpus for the acceptance runs: permutation grids
/// on every corpus metric, two-block grids with random projections of
/// representation dimension ≤ 4 on the 4-point metrics, and star products
/// of compatible pairs.
pub fn instance_corpus(seed: u64, eps: f64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    for (name, metric) in named_corpus() {
        for images in permutations_for(metric.n(), &mut rng) {
            out.push(Instance {
                name: format!("perm{images:?}@{name}"),
                magic: MagicUnitary::from_permutation(&images).expect("valid permutation"),
                metric: metric.clone(),
            });
        }
    }

    let four_point: Vec<(&str, FiniteMetricSpace)> = vec![
        ("two_cluster4", instances::two_cluster4()),
        ("skew4", instances::skew4()),
        ("cycle4", instances::cycle4()),
    ];
    let mut two_blocks: Vec<(String, MagicUnitary)> = Vec::new();
    for k in 0..15 {
        let dim = rng.gen_range(1..=4);
        let rank_p = rng.gen_range(0..=dim);
        let rank_q = rng.gen_range(0..=dim);
        let p = sample_projection(&mut rng, dim, rank_p);
        let q = sample_projection(&mut rng, dim, rank_q);
        let magic = MagicUnitary::two_block_quantum(&p, &q, eps).expect("sampled projections");
        two_blocks.push((format!("two_block{k}(d{dim})"), magic));
    }
    // equal blocks commute with the skewed metric as well
    for k in 0..5 {
        let dim = rng.gen_range(1..=4);
        let rank = rng.gen_range(0..=dim);
        let p = sample_projection(&mut rng, dim, rank);
        let magic = MagicUnitary::two_block_quantum(&p, &p, eps).expect("sampled projection");
        two_blocks.push((format!("two_block_eq{k}(d{dim})"), magic));
    }
    for (bname, magic) in &two_blocks {
        for (mname, metric) in &four_point {
            out.push(Instance {
                name: format!("{bname}@{mname}"),
                magic: magic.clone(),
                metric: metric.clone(),
            });
        }
    }

    // star products: quantum x quantum and quantum x classical on 4 points
    let iso4 = [
        vec![1usize, 0, 2, 3],
        vec![0usize, 1, 3, 2],
        vec![2usize, 3, 0, 1],
        vec![1usize, 2, 3, 0],
    ];
    for k in 0..10 {
        let (na, a) = &two_blocks[k % two_blocks.len()];
        let (nb, b) = &two_blocks[(k * 7 + 3) % two_blocks.len()];
        if a.dim() * b.dim() > 8 {
            continue;
        }
        let star = a.star_product(b, eps).expect("star of valid grids");
        for (mname, metric) in &four_point {
            out.push(Instance {
                name: format!("star({na},{nb})@{mname}"),
                magic: star.clone(),
                metric: metric.clone(),
            });
        }
    }
    for (k, images) in iso4.iter().enumerate() {
        let perm = MagicUnitary::from_permutation(images).expect("valid permutation");
        let (na, a) = &two_blocks[(k * 5 + 1) % two_blocks.len()];
        let star = a.star_product(&perm, eps).expect("star with permutation");
        let rev = perm.star_product(a, eps).expect("star with permutation");
        for (mname, metric) in &four_point {
            out.push(Instance {
                name: format!("star({na},perm{images:?})@{mname}"),
                magic: star.clone(),
                metric: metric.clone(),
            });
            out.push(Instance {
                name: format!("star(perm{images:?},{na})@{mname}"),
                magic: rev.clone(),
                metric: metric.clone(),
            });
        }
    }

    out
}

pub fn is_isometry(metric: &FiniteMetricSpace, images: &[usize]) -> bool {
    Permutation::new(images.to_vec())
        .map(|p| p.is_isometry(metric))
        .unwrap_or(false)
}
