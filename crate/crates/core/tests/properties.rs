mod common;

use std::sync::Arc;

use common::random_module;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use radhom_core::algebra::BoundQuiverAlgebra;
use radhom_core::linalg::{Field, Mat};
use radhom_core::rep::{Rep, Side};
use radhom_core::resolve::{Comparison, DimValue, Homology, Limits};
use radhom_core::verify::{Family, GeneratorSpec};

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::prime(2).unwrap()), Just(Field::prime(1009).unwrap())]
}

fn matrix() -> impl Strategy<Value = Mat> {
    (field(), 1usize..7, 1usize..7)
        .prop_flat_map(|(f, r, c)| (Just(f), Just(r), Just(c), proptest::collection::vec(-3i64..=3, r * c)))
        .prop_map(|(f, r, c, e)| Mat::from_i64(f, r, c, &e))
}

fn small_algebra(seed: u64) -> Arc<BoundQuiverAlgebra> {
    let family = [Family::Nakayama, Family::Monomial, Family::Truncated, Family::Local][(seed % 4) as usize];
    let mut spec = GeneratorSpec::new(family, 1, seed);
    spec.max_dim = 16;
    spec.vertices = spec.vertices.min(4);
    Arc::new(spec.generate().next().expect("one algebra"))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn rank_nullity(m in matrix()) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.cols(), m.cols());
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn rref_is_idempotent(m in matrix()) {
        let (r, pivots) = m.rref();
        prop_assert_eq!(pivots.len(), m.rank());
        let (rr, pivots2) = r.rref();
        prop_assert_eq!(&rr, &r);
        prop_assert_eq!(pivots, pivots2);
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn solve_finds_preimages(m in matrix(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = common::random_mat(&mut rng, m.field(), m.cols(), 2);
        let b = m.mul(&x);
        let y = m.solve(&b).expect("consistent system");
        prop_assert_eq!(m.mul(&y), b);
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let a = small_algebra(seed);
        let b = BoundQuiverAlgebra::parse(&a.to_text()).unwrap();
        prop_assert_eq!(a.fingerprint(), b.fingerprint());
        prop_assert_eq!(a.opposite().opposite().fingerprint(), a.fingerprint());
        prop_assert_eq!(a.opposite().dim(), a.dim());
    }

    #[test]
    fn duality_and_yoneda(seed in any::<u64>()) {
        let a = small_algebra(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for side in [Side::Left, Side::Right] {
            let m = random_module(&mut rng, &a, side, 24);
            m.validate().unwrap();
            prop_assert_eq!(m.dual().side(), side.flip());
            prop_assert_eq!(&m.dual().dual(), &m);
            prop_assert_eq!(Rep::parse_literal(a.clone(), &m.to_literal()).unwrap(), m.clone());
            for v in 0..a.vertex_count() {
                let p = Rep::projective(a.clone(), v, side);
                prop_assert_eq!(p.hom_space(&m).unwrap().len(), m.dims()[v]);
                // Hom(M, I_v) = D(e_v M)
                let i = Rep::injective(a.clone(), v, side);
                prop_assert_eq!(m.hom_space(&i).unwrap().len(), m.dims()[v]);
            }
        }
    }

    #[test]
    fn betti_numbers_are_ext_against_simples(seed in any::<u64>()) {
        let a = small_algebra(seed);
        let h = Homology::new(a.clone(), Limits { bound: 6, max_dim: 120 });
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let m = random_module(&mut rng, &a, Side::Left, 20);
        for i in 0..=6 {
            let Ok(b) = h.betti(&m, i) else { break };
            for j in 0..a.vertex_count() {
                let Ok(e) = h.ext_dim(&m, &h.simple(j, Side::Left), i) else { break };
                prop_assert_eq!(b[j], e);
            }
        }
    }

    #[test]
    fn resolutions_are_exact(seed in any::<u64>()) {
        let a = small_algebra(seed);
        let h = Homology::new(a.clone(), Limits { bound: 5, max_dim: 120 });
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let m = random_module(&mut rng, &a, Side::Left, 20);
        if let Ok(r) = h.resolution(&m, 4) {
            for (i, p) in r.projectives.iter().enumerate() {
                let next = r.syzygies.get(i + 1).map_or(0, Rep::dim);
                prop_assert_eq!(p.dim(), r.syzygies[i].dim() + next);
                prop_assert_eq!(&r.syzygies[i].top_dims(), &r.multiplicities(i, a.vertex_count()));
            }
            for w in r.differentials.windows(2) {
                prop_assert!(w[0].after(&w[1]).is_zero());
            }
        }
    }

    #[test]
    fn projective_dimension_two_ways(seed in any::<u64>()) {
        let a = small_algebra(seed);
        let h = Homology::new(a.clone(), Limits { bound: 6, max_dim: 120 });
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let m = random_module(&mut rng, &a, Side::Left, 20);
        let pd = h.proj_dim(&m);
        let via = h.pd_via_ext_vanishing(&m);
        if let (DimValue::Exact(_), Some(v)) = (pd, via.agreed()) {
            prop_assert_eq!(v, pd);
        }
        prop_assert_eq!(h.inj_dim(&m.dual()), pd);
        // a finite pd is bounded by the global dimension
        if pd.exact().is_some() {
            prop_assert_ne!(pd.compare(h.gl_dim()), Comparison::Greater);
        }
    }

    #[test]
    fn zaks_symmetry(seed in any::<u64>()) {
        let a = small_algebra(seed);
        let h = Homology::new(a, Limits { bound: 8, max_dim: 120 });
        if let (Some(l), Some(r)) = (h.self_injective_dim(Side::Left).exact(), h.self_injective_dim(Side::Right).exact()) {
            prop_assert_eq!(l, r);
        }
        let gl = h.gl_dim();
        if gl.exact().is_some() {
            prop_assert_eq!(h.inj_dim_radical(Side::Left).compare(gl), Comparison::Equal);
        }
    }
}
