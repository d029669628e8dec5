#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use radhom_core::algebra::BoundQuiverAlgebra;
use radhom_core::linalg::{Field, Mat};
use radhom_core::rep::{ModMap, Rep, Side};
use radhom_core::resolve::Homology;

pub fn algebra(text: &str) -> Arc<BoundQuiverAlgebra> {
    Arc::new(BoundQuiverAlgebra::parse(text).unwrap_or_else(|e| panic!("{e}\n{text}")))
}

pub fn random_mat<R: Rng>(rng: &mut R, field: Field, rows: usize, cols: usize) -> Mat {
    let entries: Vec<i64> = (0..rows * cols).map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(-4..=4) }).collect();
    Mat::from_i64(field, rows, cols, &entries)
}

/// A random module: a quotient of a sum of one or two projectives by a few
/// random elements, or dually a submodule of a sum of injectives. Falls
/// back to a simple when every indecomposable projective and injective is
/// larger than `max_dim`.
pub fn random_module<R: Rng>(rng: &mut R, a: &Arc<BoundQuiverAlgebra>, side: Side, max_dim: usize) -> Rep {
    let n = a.vertex_count();
    let small = |quotient: bool| -> Vec<Rep> {
        (0..n)
            .map(|v| if quotient { Rep::projective(a.clone(), v, side) } else { Rep::injective(a.clone(), v, side) })
            .filter(|p| p.dim() <= max_dim)
            .collect()
    };
    let (proj, inj) = (small(true), small(false));
    if proj.is_empty() && inj.is_empty() {
        return Rep::simple(a.clone(), rng.gen_range(0..n), side);
    }
    loop {
        let quotient = if proj.is_empty() || inj.is_empty() { inj.is_empty() } else { rng.gen_bool(0.5) };
        let pool = if quotient { &proj } else { &inj };
        let mut parts = vec![pool[rng.gen_range(0..pool.len())].clone()];
        let extra = pool[rng.gen_range(0..pool.len())].clone();
        if rng.gen_bool(0.5) && parts[0].dim() + extra.dim() <= max_dim {
            parts.push(extra);
        }
        let big = Rep::direct_sum_of(a.clone(), side, &parts);
        let gens: Vec<(usize, Mat)> = (0..rng.gen_range(1..=2))
            .filter_map(|_| {
                let v = rng.gen_range(0..n);
                (big.dims()[v] > 0).then(|| (v, random_mat(rng, a.field(), big.dims()[v], 1)))
            })
            .collect();
        let m = if quotient { big.quotient_generated(&gens).0 } else { big.submodule_generated(&gens).0 };
        if !m.is_zero() {
            return m;
        }
    }
}

/// Ranks of a list of module maps, viewed as vectors.
pub fn span_rank(maps: &[ModMap], field: Field) -> usize {
    if maps.is_empty() {
        return 0;
    }
    let cols: Vec<Mat> = maps
        .iter()
        .map(|m| {
            let entries = m.blocks.iter().flat_map(|b| (0..b.rows()).flat_map(move |r| (0..b.cols()).map(move |c| b.get(r, c)))).collect::<Vec<_>>();
            Mat::from_scalars(field, entries.len(), 1, entries)
        })
        .collect();
    let refs: Vec<&Mat> = cols.iter().collect();
    Mat::hstack(field, cols[0].rows(), &refs).rank()
}

/// `dim Ext^i(M, N)` by dimension shifting: `Hom(Ω^i M, N)` modulo maps
/// that extend to `P_{i-1}`. Kernels and Hom spaces are computed from
/// scratch with generic linear algebra.
pub fn ext_by_shifting(h: &Homology, m: &Rep, n: &Rep, i: usize) -> Option<usize> {
    if i == 0 {
        return Some(m.hom_space(n).unwrap().len());
    }
    let r = h.resolution(m, i).ok()?;
    if r.projectives.len() < i {
        return Some(0);
    }
    let p = &r.projectives[i - 1];
    let (k, incl) = r.differentials[i - 1].kernel(p);
    let hom_k = k.hom_space(n).unwrap().len();
    let restricted: Vec<ModMap> = p.hom_space(n).unwrap().iter().map(|g| g.after(&incl)).collect();
    Some(hom_k - span_rank(&restricted, m.field()))
}
