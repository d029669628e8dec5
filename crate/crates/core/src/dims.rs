//! Algebra-level invariants and the [`AlgebraProfile`] summary.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::{BoundQuiverAlgebra, Quiver, Relation};
use crate::linalg::Mat;
use crate::rep::{ModMap, Rep, Side};
use crate::resolve::{Comparison, Complex, DimValue, Homology, Truncated};

/// Outcome of the Gorenstein test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gorenstein {
    /// Both self-injective dimensions are finite and equal to `d`.
    Yes(usize),
    /// A certificate shows one self-injective dimension is infinite.
    NoWithinBound,
    Inconclusive,
}

impl fmt::Display for Gorenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gorenstein::Yes(d) => write!(f, "yes({d})"),
            Gorenstein::NoWithinBound => f.write_str("no_within_bound"),
            Gorenstein::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

impl Serialize for Gorenstein {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A yes/no answer that the bound may leave open.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
    Inconclusive,
}

impl Decision {
    pub fn from_bool(b: bool) -> Decision {
        if b {
            Decision::Yes
        } else {
            Decision::No
        }
    }

    pub fn from_option(b: Option<bool>) -> Decision {
        b.map_or(Decision::Inconclusive, Decision::from_bool)
    }
}

impl Serialize for Decision {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Decision::Yes => s.serialize_bool(true),
            Decision::No => s.serialize_bool(false),
            Decision::Inconclusive => s.serialize_str("inconclusive"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraProfile {
    pub field: String,
    pub bound: usize,
    pub fingerprint: String,
    pub dim: usize,
    pub vertices: usize,
    pub arrows: usize,
    pub gl_dim: DimValue,
    #[serde(rename = "inj_dim_A_left")]
    pub inj_dim_a_left: DimValue,
    #[serde(rename = "inj_dim_A_right")]
    pub inj_dim_a_right: DimValue,
    #[serde(rename = "inj_dim_J_left")]
    pub inj_dim_j_left: DimValue,
    #[serde(rename = "inj_dim_J_right")]
    pub inj_dim_j_right: DimValue,
    pub dom_dim: DimValue,
    pub gorenstein: Gorenstein,
    #[serde(rename = "minimal_AG")]
    pub minimal_ag: Decision,
    pub fp_dim_lower: usize,
    pub fi_dim_lower: usize,
}

/// Lower and, under a Gorenstein witness, exact Gorenstein-injective
/// dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GinjBounds {
    pub lower: usize,
    pub exact: Option<DimValue>,
}

/// Result of the Koszul test on a commutative local algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KoszulOutcome {
    /// `H_n(K ⊗ E) ≠ 0`, `n` the number of generators.
    pub top_homology_nonzero: bool,
    /// Whether `K ⊗ E` has finite projective dimension.
    pub finite_pd: Option<bool>,
}

/// Sum of two dimensions, for inequalities like `pd M + dom dim M`.
pub fn dim_sum(a: DimValue, b: DimValue) -> DimValue {
    use DimValue::*;
    match (a.or_zero(), b.or_zero()) {
        (Exact(x), Exact(y)) => Exact(x + y),
        (AtLeast { infinite: true, bound }, _) | (_, AtLeast { infinite: true, bound }) => DimValue::infinite(bound),
        (AtLeast { bound, .. }, Exact(y)) | (Exact(y), AtLeast { bound, .. }) => DimValue::truncated(bound + y),
        (AtLeast { bound: x, .. }, AtLeast { bound: y, .. }) => DimValue::truncated(x + y + 1),
        _ => unreachable!("or_zero removes ZeroModule"),
    }
}

impl Homology {
    /// `gl dim A = proj dim A_0`.
    pub fn gl_dim(&self) -> DimValue {
        self.proj_dim(&self.semisimple_top(Side::Left)).or_zero()
    }

    /// Injective dimension of the radical; `ZeroModule` when `A` is
    /// semisimple.
    pub fn inj_dim_radical(&self, side: Side) -> DimValue {
        self.inj_dim(&self.radical(side))
    }

    /// `inj dim A` for the regular module on `side`.
    pub fn self_injective_dim(&self, side: Side) -> DimValue {
        self.inj_dim(&self.regular(side))
    }

    pub fn detect_gorenstein(&self) -> Gorenstein {
        let l = self.self_injective_dim(Side::Left);
        let r = self.self_injective_dim(Side::Right);
        match (l.exact(), r.exact()) {
            (Some(a), Some(b)) if a == b => Gorenstein::Yes(a),
            (Some(a), Some(b)) => {
                log::warn!("self-injective dimensions differ: left {a}, right {b}");
                Gorenstein::Inconclusive
            }
            _ if l.is_finite() == Some(false) || r.is_finite() == Some(false) => Gorenstein::NoWithinBound,
            _ => Gorenstein::Inconclusive,
        }
    }

    /// `Gproj dim M = max{0, i | Ext^i(M, A) ≠ 0}`, valid when `A` is
    /// `d`-Gorenstein, so only degrees up to `d` are examined.
    pub fn gproj_dim_gorenstein(&self, m: &Rep, witness: Gorenstein) -> Result<DimValue, Truncated> {
        let Gorenstein::Yes(d) = witness else {
            panic!("Gorenstein-projective dimension needs a Gorenstein witness");
        };
        if m.is_zero() {
            return Ok(DimValue::ZeroModule);
        }
        let a = self.regular(m.side());
        let mut top = 0;
        for i in 1..=d {
            if self.ext_dim(m, &a, i)? != 0 {
                top = i;
            }
        }
        Ok(DimValue::Exact(top))
    }

    /// `sup{0, i ≤ B | Ext^i(DA, M) ≠ 0}` as a lower bound; exact when a
    /// Gorenstein witness is supplied.
    pub fn ginj_dim_bounds(&self, m: &Rep, witness: Gorenstein) -> GinjBounds {
        if m.is_zero() {
            let exact = matches!(witness, Gorenstein::Yes(_)).then_some(DimValue::ZeroModule);
            return GinjBounds { lower: 0, exact };
        }
        let da = Rep::dual_regular(self.algebra().clone(), m.side());
        let mut lower = 0;
        let mut complete = true;
        let top = match witness {
            Gorenstein::Yes(d) => d.min(self.bound()),
            _ => self.bound(),
        };
        for i in 1..=top {
            match self.ext_dim(&da, m, i) {
                Ok(0) => {}
                Ok(_) => lower = i,
                Err(_) => {
                    complete = false;
                    break;
                }
            }
        }
        let exact = match witness {
            Gorenstein::Yes(_) if complete => Some(DimValue::Exact(lower)),
            _ => None,
        };
        GinjBounds { lower, exact }
    }

    /// Dominant dimension of the algebra, from the left regular module.
    pub fn dom_dim(&self) -> DimValue {
        self.dominant_dimension(&self.regular(Side::Left))
    }

    /// Gorenstein with `inj dim A ≤ dom dim A`.
    pub fn detect_minimal_ag(&self, witness: Gorenstein) -> Decision {
        match witness {
            Gorenstein::Yes(d) => match DimValue::Exact(d).compare(self.dom_dim()) {
                Comparison::Less | Comparison::Equal => Decision::Yes,
                Comparison::Greater => Decision::No,
                Comparison::Unknown => Decision::Inconclusive,
            },
            Gorenstein::NoWithinBound => Decision::No,
            Gorenstein::Inconclusive => Decision::Inconclusive,
        }
    }

    /// Default sampled modules on one side: simples, `J`, syzygies and
    /// cosyzygies of both up to `min(B, 10)`, and radical powers `J^i`.
    /// Zero modules and duplicates are dropped; terms the size cap makes
    /// unavailable are skipped.
    pub fn sample_family(&self, side: Side) -> Vec<Rep> {
        let mut out: Vec<Rep> = Vec::new();
        let push = |m: Rep, out: &mut Vec<Rep>| {
            if !m.is_zero() && !out.contains(&m) {
                out.push(m);
            }
        };
        let depth = self.bound().min(10);
        let j = self.radical(side);
        let mut seeds: Vec<Rep> = (0..self.algebra().vertex_count()).map(|v| self.simple(v, side)).collect();
        seeds.push(j.clone());
        for s in &seeds {
            push(s.clone(), &mut out);
            for n in 1..=depth {
                match self.syzygy(s, n) {
                    Ok(z) if !z.is_zero() => push(z, &mut out),
                    _ => break,
                }
            }
            for n in 1..=depth {
                match self.cosyzygy(s, n) {
                    Ok(z) if !z.is_zero() => push(z, &mut out),
                    _ => break,
                }
            }
        }
        for i in 2..self.algebra().nilbound() {
            push(j.radical_power(i - 1), &mut out);
        }
        out
    }

    /// Largest exact projective and injective dimensions over `family`;
    /// lower bounds for the finitistic dimensions.
    pub fn findim_lower_bounds(&self, family: &[Rep]) -> (usize, usize) {
        let fp = family.iter().filter_map(|m| self.proj_dim(m).exact()).max().unwrap_or(0);
        let fi = family.iter().filter_map(|m| self.inj_dim(m).exact()).max().unwrap_or(0);
        (fp, fi)
    }

    /// The Koszul complex on the arrows of a commutative local algebra,
    /// tensored with `E = D(A)`.
    pub fn koszul_tensor_injective(&self) -> Complex {
        let a = self.algebra();
        assert!(a.vertex_count() == 1 && a.is_commutative(), "Koszul test needs a commutative local algebra");
        let e = Rep::dual_regular(a.clone(), Side::Left);
        let n = a.arrow_count();
        let f = a.field();
        let subsets: Vec<Vec<Vec<usize>>> = (0..=n).map(|p| combinations(n, p)).collect();
        let terms: Vec<Rep> = subsets
            .iter()
            .map(|s| Rep::direct_sum_of(a.clone(), Side::Left, &vec![e.clone(); s.len()]))
            .collect();
        let d = e.dim();
        let differentials = (1..=n)
            .map(|p| {
                let mut m = Mat::zeros(f, d * subsets[p - 1].len(), d * subsets[p].len());
                for (col, set) in subsets[p].iter().enumerate() {
                    for (j, &x) in set.iter().enumerate() {
                        let mut rest = set.clone();
                        rest.remove(j);
                        let row = subsets[p - 1].iter().position(|s| *s == rest).expect("face of a subset");
                        let act = if j % 2 == 0 { e.map(x).clone() } else { e.map(x).neg() };
                        m.paste(row * d, col * d, &act);
                    }
                }
                ModMap { blocks: vec![m] }
            })
            .collect();
        Complex { lowest: 0, terms, differentials }
    }

    /// Builds `K ⊗ E`, checks its top homology and whether it has finite
    /// projective dimension, which happens exactly when `A` is Gorenstein.
    pub fn koszul_gorenstein_test(&self) -> KoszulOutcome {
        let c = self.koszul_tensor_injective();
        let top = c.homology_dims().last().copied().unwrap_or(0);
        KoszulOutcome { top_homology_nonzero: top != 0, finite_pd: self.complex_has_finite_pd(&c) }
    }

    pub fn profile(&self) -> AlgebraProfile {
        let a = self.algebra();
        let gorenstein = self.detect_gorenstein();
        let family = self.sample_family(Side::Left);
        let (fp, fi) = self.findim_lower_bounds(&family);
        AlgebraProfile {
            field: a.field().to_string(),
            bound: self.bound(),
            fingerprint: a.fingerprint(),
            dim: a.dim(),
            vertices: a.vertex_count(),
            arrows: a.arrow_count(),
            gl_dim: self.gl_dim(),
            inj_dim_a_left: self.self_injective_dim(Side::Left),
            inj_dim_a_right: self.self_injective_dim(Side::Right),
            inj_dim_j_left: self.inj_dim_radical(Side::Left),
            inj_dim_j_right: self.inj_dim_radical(Side::Right),
            dom_dim: self.dom_dim(),
            gorenstein,
            minimal_ag: self.detect_minimal_ag(gorenstein),
            fp_dim_lower: fp,
            fi_dim_lower: fi,
        }
    }
}

fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// `k[x_1..x_n]` modulo the commutators, the given extra relations and
/// all monomials of degree `nilbound`.
pub fn commutative_local(
    vars: usize,
    extra: Vec<Relation>,
    nilbound: usize,
    field: crate::linalg::Field,
) -> Result<BoundQuiverAlgebra, crate::algebra::PresentationError> {
    let mut q = Quiver::new(1);
    for i in 0..vars {
        q.arrow(&format!("x{}", i + 1), 0, 0);
    }
    let mut rels = Vec::new();
    if nilbound > 2 {
        for i in 0..vars {
            for j in i + 1..vars {
                rels.push(Relation { terms: vec![(field.one(), vec![i, j]), (field.from_i64(-1), vec![j, i])] });
            }
        }
    }
    rels.extend(extra);
    BoundQuiverAlgebra::build(q, rels, nilbound, field)
}
