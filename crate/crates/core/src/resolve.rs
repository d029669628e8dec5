//! Minimal projective resolutions, Ext and projective dimension.
//!
//! A [`Homology`] context owns every resolution computed over one algebra.
//! Resolutions are stored as chains `Ω^0 → Ω^1 → …` and indexed by each
//! syzygy, so asking about `Ω^n(M)` after `M` reuses the tail of `M`'s
//! chain. Chains grow on demand up to the configured bound, or stop early
//! at a size cap or once an infinite-dimension certificate is found.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::BoundQuiverAlgebra;
use crate::linalg::Mat;
use crate::rep::{radical_module, ModMap, Rep, Side, Subspace};

pub const DEFAULT_BOUND: usize = 30;
pub const DEFAULT_MAX_DIM: usize = 400;

/// Resolution bound `B` and a cap on the dimension of a single projective
/// term. A chain whose next term would exceed the cap stops there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub bound: usize,
    pub max_dim: usize,
}

impl Limits {
    pub fn with_bound(bound: usize) -> Limits {
        Limits { bound, max_dim: DEFAULT_MAX_DIM }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::with_bound(DEFAULT_BOUND)
    }
}

/// A homological dimension as far as it could be determined.
///
/// `AtLeast { bound, .. }` means the value is strictly greater than
/// `bound`; with `infinite` set the value is known to be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DimValue {
    ZeroModule,
    Exact(usize),
    AtLeast { bound: usize, infinite: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Unknown,
}

impl DimValue {
    pub fn infinite(bound: usize) -> DimValue {
        DimValue::AtLeast { bound, infinite: true }
    }

    pub fn truncated(bound: usize) -> DimValue {
        DimValue::AtLeast { bound, infinite: false }
    }

    pub fn exact(self) -> Option<usize> {
        match self {
            DimValue::Exact(n) => Some(n),
            _ => None,
        }
    }

    /// `ZeroModule` read as `Exact(0)`.
    pub fn or_zero(self) -> DimValue {
        match self {
            DimValue::ZeroModule => DimValue::Exact(0),
            v => v,
        }
    }

    pub fn is_at_least(self) -> bool {
        matches!(self, DimValue::AtLeast { .. })
    }

    /// `Some(true)` for finite values, `Some(false)` when known infinite.
    pub fn is_finite(self) -> Option<bool> {
        match self {
            DimValue::ZeroModule | DimValue::Exact(_) => Some(true),
            DimValue::AtLeast { infinite: true, .. } => Some(false),
            DimValue::AtLeast { .. } => None,
        }
    }

    /// Order where decidable, with `ZeroModule` read as 0. Two `AtLeast`
    /// values are equal only when both are known infinite.
    pub fn compare(self, other: DimValue) -> Comparison {
        use DimValue::*;
        match (self.or_zero(), other.or_zero()) {
            (Exact(a), Exact(b)) => match a.cmp(&b) {
                std::cmp::Ordering::Less => Comparison::Less,
                std::cmp::Ordering::Equal => Comparison::Equal,
                std::cmp::Ordering::Greater => Comparison::Greater,
            },
            (Exact(a), AtLeast { bound, infinite }) => {
                if infinite || a <= bound {
                    Comparison::Less
                } else {
                    Comparison::Unknown
                }
            }
            (AtLeast { .. }, Exact(_)) => match other.compare(self) {
                Comparison::Less => Comparison::Greater,
                c => c,
            },
            (AtLeast { infinite: true, .. }, AtLeast { infinite: true, .. }) => Comparison::Equal,
            _ => Comparison::Unknown,
        }
    }
}

impl fmt::Display for DimValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimValue::ZeroModule => f.write_str("zero"),
            DimValue::Exact(n) => write!(f, "{n}"),
            DimValue::AtLeast { infinite: true, .. } => f.write_str("inf"),
            DimValue::AtLeast { bound, .. } => write!(f, ">{bound}"),
        }
    }
}

impl Serialize for DimValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A resolution term needed for an answer was not computed, because the
/// chain hit the size cap.
#[derive(Debug, Clone, Copy, Error, PartialEq, Eq)]
#[error("resolution unavailable at degree {0}")]
pub struct Truncated(pub usize);

/// Snapshot of a minimal projective resolution.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// Vertices of the indecomposable summands of `P_i`, one per summand.
    pub tops: Vec<Vec<usize>>,
    pub projectives: Vec<Rep>,
    /// `differentials[0]` is the cover `P_0 → M`; `differentials[i]` maps
    /// `P_i → P_{i-1}`.
    pub differentials: Vec<ModMap>,
    /// `syzygies[i] = Ω^i(M)`.
    pub syzygies: Vec<Rep>,
    pub terminated: bool,
}

impl Resolution {
    /// Multiplicity of each vertex among the summands of `P_i`.
    pub fn multiplicities(&self, i: usize, vertices: usize) -> Vec<usize> {
        let mut m = vec![0; vertices];
        for &v in &self.tops[i] {
            m[v] += 1;
        }
        m
    }
}

struct Chain {
    syz: Vec<Rep>,
    incl: Vec<Option<ModMap>>,
    proj: Vec<Rep>,
    tops: Vec<Vec<usize>>,
    epi: Vec<ModMap>,
    diff: Vec<Option<ModMap>>,
    seen: HashMap<Rep, usize>,
    blocked: bool,
    infinite: bool,
}

impl Chain {
    fn new(m: Rep) -> Chain {
        let mut seen = HashMap::new();
        seen.insert(m.clone(), 0);
        Chain {
            syz: vec![m],
            incl: vec![None],
            proj: Vec::new(),
            tops: Vec::new(),
            epi: Vec::new(),
            diff: Vec::new(),
            seen,
            blocked: false,
            infinite: false,
        }
    }

    fn terminated(&self) -> bool {
        self.syz.last().is_some_and(Rep::is_zero)
    }

    /// Whether `P_k` is known: `Some(true)` if computed, `Some(false)` if
    /// it is zero because the chain ended before `k`.
    fn term(&self, k: usize) -> Option<bool> {
        if k < self.proj.len() {
            Some(true)
        } else if self.terminated() && k + 1 >= self.syz.len() {
            Some(false)
        } else {
            None
        }
    }
}

/// Marks as infinite every vertex on a cycle of `edges` or with a path to
/// an infinite vertex.
fn propagate_infinite(edges: &[Vec<bool>], inf: &mut [bool]) {
    let nv = inf.len();
    let mut reach = edges.to_vec();
    for k in 0..nv {
        for i in 0..nv {
            if reach[i][k] {
                for j in 0..nv {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let snapshot: Vec<bool> = (0..nv).map(|i| inf[i] || reach[i][i]).collect();
    for i in 0..nv {
        inf[i] = snapshot[i] || (0..nv).any(|j| reach[i][j] && snapshot[j]);
    }
}

/// Generators of `m`'s top: for each vertex, the standard vectors at
/// positions complementary to the radical's leading coordinates.
pub(crate) fn top_generators(m: &Rep) -> Vec<(usize, Mat)> {
    let f = m.field();
    let mut gens = Vec::new();
    for (v, rad) in m.radical_spaces().iter().enumerate() {
        let (_, comp) = rad.quotient_projection();
        for c in comp {
            let mut x = Mat::zeros(f, m.dims()[v], 1);
            x.set(c, 0, f.one());
            gens.push((v, x));
        }
    }
    gens
}

/// Column offsets of each summand of `⊕ P_{tops[s]}` inside the space at
/// `vertex`.
fn summand_offsets(b: &BoundQuiverAlgebra, tops: &[usize], vertex: usize) -> Vec<usize> {
    let mut off = Vec::with_capacity(tops.len());
    let mut acc = 0;
    for &v in tops {
        off.push(acc);
        acc += b.paths_between(v, vertex).len();
    }
    off
}

/// The map `⊕ P_{v_s} → m` sending the idempotent generator of summand `s`
/// to the given vector.
pub(crate) fn map_from_projective(m: &Rep, proj: &Rep, gens: &[(usize, Mat)]) -> ModMap {
    let b = m.acting();
    let f = m.field();
    let tops: Vec<usize> = gens.iter().map(|(v, _)| *v).collect();
    let mut blocks: Vec<Mat> = (0..b.vertex_count()).map(|j| Mat::zeros(f, m.dims()[j], proj.dims()[j])).collect();
    let offsets: Vec<Vec<usize>> = (0..b.vertex_count()).map(|j| summand_offsets(b, &tops, j)).collect();
    for (s, (v, x)) in gens.iter().enumerate() {
        for (bi, y) in m.orbit(*v, x) {
            let j = b.basis()[bi].target;
            blocks[j].paste(0, offsets[j][s] + b.position(bi), &y);
        }
    }
    ModMap { blocks }
}

/// Dimension vector test for simple direct summands: `S_k` splits off `m`
/// exactly when some socle vector at `k` lies outside the radical.
pub fn simple_summands(m: &Rep) -> Vec<bool> {
    let f = m.field();
    m.radical_spaces()
        .iter()
        .zip(m.socle_spaces())
        .map(|(rad, soc)| soc.dim() > 0 && Mat::hstack(f, rad.basis.rows(), &[&rad.basis, &soc.basis]).rank() > rad.dim())
        .collect()
}

/// The projective cover `P → m` with `P = ⊕ P_i^{m_i}`, `(m_i)` the top's
/// dimension vector.
pub fn projective_cover(m: &Rep) -> (Rep, ModMap) {
    let gens = top_generators(m);
    let p = projective_sum(m.algebra(), m.side(), gens.iter().map(|(v, _)| *v));
    let epi = map_from_projective(m, &p, &gens);
    (p, epi)
}

fn projective_sum(a: &Arc<BoundQuiverAlgebra>, side: Side, tops: impl Iterator<Item = usize>) -> Rep {
    let parts: Vec<Rep> = tops.map(|v| Rep::projective(a.clone(), v, side)).collect();
    Rep::direct_sum_of(a.clone(), side, &parts)
}

/// `Ω^n(m)` without a context or bounds.
pub fn syzygy(m: &Rep, n: usize) -> Rep {
    let mut x = m.clone();
    for _ in 0..n {
        if x.is_zero() {
            break;
        }
        let (p, epi) = projective_cover(&x);
        x = epi.kernel(&p).0;
    }
    x
}

/// The two Ext-vanishing formulas for projective dimension, measured
/// against the radical `J`. `None` marks a formula the computed range
/// could not decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtVanishing {
    /// `inf{i ≥ 0 | Ext^{i+1}(M, J) = 0}`.
    pub first_vanishing: Option<DimValue>,
    /// `sup{0, i | Ext^i(M, J) ≠ 0}`.
    pub sup_nonvanishing: Option<DimValue>,
}

impl ExtVanishing {
    /// The common value when both formulas are decided and agree.
    pub fn agreed(&self) -> Option<DimValue> {
        match (self.first_vanishing, self.sup_nonvanishing) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }
}

/// A bounded chain complex `… → C_{n+1} → C_n → …` of modules on one side.
#[derive(Clone, Debug)]
pub struct Complex {
    /// Homological degree of `terms[0]`.
    pub lowest: i64,
    pub terms: Vec<Rep>,
    /// `differentials[k]` maps `terms[k + 1] → terms[k]`.
    pub differentials: Vec<ModMap>,
}

impl Complex {
    pub fn concentrated(m: Rep, degree: i64) -> Complex {
        Complex { lowest: degree, terms: vec![m], differentials: Vec::new() }
    }

    /// Checks that differentials are homomorphisms squaring to zero.
    pub fn is_valid(&self) -> bool {
        self.differentials.len() + 1 == self.terms.len()
            && self.differentials.iter().enumerate().all(|(k, d)| d.is_homomorphism(&self.terms[k + 1], &self.terms[k]))
            && self.differentials.windows(2).all(|w| w[0].after(&w[1]).is_zero())
    }

    /// Total dimension of the homology at each term, in term order.
    pub fn homology_dims(&self) -> Vec<usize> {
        (0..self.terms.len())
            .map(|k| {
                let out = if k == 0 { 0 } else { self.differentials[k - 1].rank() };
                let inc = self.differentials.get(k).map_or(0, ModMap::rank);
                self.terms[k].dim() - out - inc
            })
            .collect()
    }

    fn term(&self, n: i64) -> Option<&Rep> {
        let k = n - self.lowest;
        if k < 0 {
            None
        } else {
            self.terms.get(k as usize)
        }
    }

    /// Differential leaving degree `n`, or `None` when either end is zero
    /// by boundedness.
    fn differential(&self, n: i64) -> Option<&ModMap> {
        let k = n - self.lowest - 1;
        if k < 0 {
            None
        } else {
            self.differentials.get(k as usize)
        }
    }
}

/// Cache of resolutions over one algebra. Not shared across threads: each
/// sweep worker builds its own.
pub struct Homology {
    algebra: Arc<BoundQuiverAlgebra>,
    limits: Limits,
    chains: RefCell<Vec<Chain>>,
    index: RefCell<HashMap<Rep, (usize, usize)>>,
    infinite: RefCell<HashMap<Side, Rc<Vec<bool>>>>,
    actions: RefCell<HashMap<Rep, Rc<Vec<Mat>>>>,
    ranks: RefCell<HashMap<(usize, usize, Rep), usize>>,
    pub(crate) inj_proj: RefCell<HashMap<Side, Rc<Vec<bool>>>>,
}

impl Homology {
    pub fn new(algebra: Arc<BoundQuiverAlgebra>, limits: Limits) -> Homology {
        assert!(limits.bound >= 1, "resolution bound must be at least 1");
        Homology {
            algebra,
            limits,
            chains: RefCell::new(Vec::new()),
            index: RefCell::new(HashMap::new()),
            infinite: RefCell::new(HashMap::new()),
            actions: RefCell::new(HashMap::new()),
            ranks: RefCell::new(HashMap::new()),
            inj_proj: RefCell::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &Arc<BoundQuiverAlgebra> {
        &self.algebra
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn bound(&self) -> usize {
        self.limits.bound
    }

    pub fn simple(&self, v: usize, side: Side) -> Rep {
        Rep::simple(self.algebra.clone(), v, side)
    }

    pub fn regular(&self, side: Side) -> Rep {
        Rep::regular(self.algebra.clone(), side)
    }

    /// `A_0 = A/J`.
    pub fn semisimple_top(&self, side: Side) -> Rep {
        Rep::top_of_algebra(self.algebra.clone(), side)
    }

    pub fn radical(&self, side: Side) -> Rep {
        radical_module(&self.algebra, side)
    }

    fn locate(&self, m: &Rep) -> (usize, usize) {
        assert!(Arc::ptr_eq(m.algebra(), &self.algebra), "module over a different algebra");
        if let Some(&hit) = self.index.borrow().get(m) {
            return hit;
        }
        let mut chains = self.chains.borrow_mut();
        chains.push(Chain::new(m.clone()));
        let id = chains.len() - 1;
        self.index.borrow_mut().insert(m.clone(), (id, 0));
        (id, 0)
    }

    /// Extends chain `cid` until `P_upto` exists, the chain ends, or it
    /// stops at the size cap. The cap is waived for the cover of the
    /// module at `free` when that module is projective. With `stop_infinite`
    /// the chain also stops once known to have infinite dimension.
    fn extend(&self, cid: usize, upto: usize, free: usize, stop_infinite: bool) {
        let side = self.chains.borrow()[cid].syz[0].side();
        let summands = self.infinite.borrow().get(&side).cloned();
        loop {
            let x = {
                let chains = self.chains.borrow();
                let c = &chains[cid];
                if c.proj.len() > upto || c.terminated() || c.blocked || (stop_infinite && c.infinite) {
                    return;
                }
                c.syz[c.proj.len()].clone()
            };
            let i = self.chains.borrow()[cid].proj.len();
            let gens = top_generators(&x);
            let tops: Vec<usize> = gens.iter().map(|(v, _)| *v).collect();
            let b = x.acting();
            let pdim: usize = tops.iter().map(|&v| (0..b.vertex_count()).map(|j| b.paths_between(v, j).len()).sum::<usize>()).sum();
            if pdim > self.limits.max_dim && (i > free || pdim != x.dim()) {
                self.chains.borrow_mut()[cid].blocked = true;
                log::debug!("resolution stopped at degree {i}: projective of dimension {pdim}");
                return;
            }
            let p = projective_sum(&self.algebra, x.side(), tops.iter().copied());
            let epi = map_from_projective(&x, &p, &gens);
            let (k, incl) = epi.kernel(&p);
            let mut chains = self.chains.borrow_mut();
            let c = &mut chains[cid];
            let diff = c.incl[i].as_ref().map(|inc| inc.after(&epi));
            c.proj.push(p);
            c.tops.push(tops);
            c.epi.push(epi);
            c.diff.push(diff);
            if !k.is_zero() {
                // over a local algebra every module of finite projective
                // dimension is projective
                if self.algebra.vertex_count() == 1 || c.seen.contains_key(&k) {
                    c.infinite = true;
                } else {
                    c.seen.insert(k.clone(), i + 1);
                }
                if let Some(inf) = &summands {
                    if simple_summands(&k).iter().zip(inf.iter()).any(|(s, i)| *s && *i) {
                        c.infinite = true;
                    }
                }
            }
            self.index.borrow_mut().entry(k.clone()).or_insert((cid, i + 1));
            c.syz.push(k);
            c.incl.push(Some(incl));
        }
    }

    /// Simples of infinite projective dimension that a certificate proves:
    /// `S_j` is infinite if its chain repeats a syzygy, if the algebra is
    /// local and `S_j` is not projective, or if some
    /// `Ω^n(S_j)`, `n ≥ 1`, has a simple summand `S_k` where `S_k` lies on
    /// a cycle of this relation or is itself infinite.
    pub fn infinite_simples(&self, side: Side) -> Rc<Vec<bool>> {
        if let Some(v) = self.infinite.borrow().get(&side) {
            return v.clone();
        }
        let nv = self.algebra.vertex_count();
        let mut inf = vec![false; nv];
        let mut edges = vec![vec![false; nv]; nv];
        let ids: Vec<(usize, usize)> = (0..nv).map(|v| self.locate(&self.simple(v, side))).collect();
        let mut scanned = vec![0; nv];
        let mut open: Vec<bool> = vec![true; nv];
        // extend all chains one step per round so a certificate found for
        // one simple can stop the others early
        for depth in 0..=self.limits.bound {
            for v in 0..nv {
                if !open[v] {
                    continue;
                }
                let (cid, o) = ids[v];
                self.extend(cid, o + depth, o, true);
                let chains = self.chains.borrow();
                let c = &chains[cid];
                inf[v] |= c.infinite;
                for z in &c.syz[(o + 1).max(scanned[v])..] {
                    for (k, yes) in simple_summands(z).into_iter().enumerate() {
                        edges[v][k] |= yes;
                    }
                }
                scanned[v] = c.syz.len();
                if c.terminated() || c.blocked || c.proj.len() <= o + depth {
                    open[v] = false;
                }
            }
            propagate_infinite(&edges, &mut inf);
            for v in 0..nv {
                open[v] &= !inf[v];
            }
            if !open.iter().any(|&x| x) {
                break;
            }
        }
        {
            let mut chains = self.chains.borrow_mut();
            for (v, &(cid, _)) in ids.iter().enumerate() {
                if inf[v] {
                    chains[cid].infinite = true;
                }
            }
        }
        let rc = Rc::new(inf);
        self.infinite.borrow_mut().insert(side, rc.clone());
        rc
    }

    /// Projective dimension with the three-valued contract.
    pub fn proj_dim(&self, m: &Rep) -> DimValue {
        if m.is_zero() {
            return DimValue::ZeroModule;
        }
        let bound = self.limits.bound;
        let inf = self.infinite_simples(m.side());
        let (cid, o) = self.locate(m);
        self.extend(cid, o + bound, o, true);
        let chains = self.chains.borrow();
        let c = &chains[cid];
        if let Some(k) = (o + 1..c.syz.len().min(o + bound + 2)).find(|&k| c.syz[k].is_zero()) {
            return DimValue::Exact(k - o - 1);
        }
        if c.infinite || simple_summands(m).iter().zip(inf.iter()).any(|(s, i)| *s && *i) {
            return DimValue::infinite(bound);
        }
        if c.syz.len() > o + bound + 1 {
            return DimValue::truncated(bound);
        }
        DimValue::truncated((c.syz.len() - o).saturating_sub(2))
    }

    /// Minimal resolution of `m` to `P_depth` (or until it ends).
    pub fn resolution(&self, m: &Rep, depth: usize) -> Result<Resolution, Truncated> {
        let (cid, o) = self.locate(m);
        self.extend(cid, o + depth, o, false);
        let chains = self.chains.borrow();
        let c = &chains[cid];
        let have = c.proj.len().saturating_sub(o);
        if have <= depth && !c.terminated() {
            return Err(Truncated(o + have));
        }
        let n = have.min(depth + 1);
        let mut differentials = Vec::with_capacity(n);
        for i in 0..n {
            differentials.push(if i == 0 { c.epi[o].clone() } else { c.diff[o + i].clone().expect("interior differential") });
        }
        Ok(Resolution {
            tops: c.tops[o..o + n].to_vec(),
            projectives: c.proj[o..o + n].to_vec(),
            differentials,
            syzygies: c.syz[o..(o + n + 1).min(c.syz.len())].to_vec(),
            terminated: c.terminated() && c.syz.len() <= o + n + 1,
        })
    }

    /// `Ω^n(m)`; zero past the end of a finite resolution.
    pub fn syzygy(&self, m: &Rep, n: usize) -> Result<Rep, Truncated> {
        if n == 0 {
            return Ok(m.clone());
        }
        let (cid, o) = self.locate(m);
        self.extend(cid, o + n - 1, o, false);
        let chains = self.chains.borrow();
        let c = &chains[cid];
        if let Some(z) = c.syz.get(o + n) {
            return Ok(z.clone());
        }
        if c.terminated() {
            return Ok(Rep::zero(self.algebra.clone(), m.side()));
        }
        Err(Truncated(c.syz.len() - o))
    }

    fn actions(&self, n: &Rep) -> Rc<Vec<Mat>> {
        if let Some(a) = self.actions.borrow().get(n) {
            return a.clone();
        }
        let a = Rc::new(n.basis_actions());
        self.actions.borrow_mut().insert(n.clone(), a.clone());
        a
    }

    /// Dimension of `Hom(P_j, n)` for chain term `j`.
    fn hom_term_dim(&self, cid: usize, j: usize, n: &Rep) -> Result<usize, Truncated> {
        let chains = self.chains.borrow();
        let c = &chains[cid];
        match c.term(j) {
            Some(true) => Ok(c.tops[j].iter().map(|&v| n.dims()[v]).sum()),
            Some(false) => Ok(0),
            None => Err(Truncated(j)),
        }
    }

    /// The induced map `Hom(P_j, n) → Hom(P_{j+1}, n)`.
    fn delta(&self, cid: usize, j: usize, n: &Rep) -> Result<Mat, Truncated> {
        let cols = self.hom_term_dim(cid, j, n)?;
        let rows = self.hom_term_dim(cid, j + 1, n)?;
        let f = n.field();
        let mut out = Mat::zeros(f, rows, cols);
        if rows == 0 || cols == 0 {
            return Ok(out);
        }
        let acts = self.actions(n);
        let chains = self.chains.borrow();
        let c = &chains[cid];
        let b = n.acting();
        let (src, dst) = (&c.tops[j], &c.tops[j + 1]);
        let d = c.diff[j + 1].as_ref().expect("interior differential");
        let col_off: Vec<usize> = src.iter().scan(0, |a, &v| { let o = *a; *a += n.dims()[v]; Some(o) }).collect();
        let row_off: Vec<usize> = dst.iter().scan(0, |a, &v| { let o = *a; *a += n.dims()[v]; Some(o) }).collect();
        for (t, &w) in dst.iter().enumerate() {
            let gen_col = summand_offsets(b, dst, w)[t] + b.position(b.idempotent(w));
            let offs = summand_offsets(b, src, w);
            let blk = &d.blocks[w];
            for (s, &v) in src.iter().enumerate() {
                let mut acc = Mat::zeros(f, n.dims()[w], n.dims()[v]);
                for &p in b.paths_between(v, w) {
                    let r = offs[s] + b.position(p);
                    if !blk.is_entry_zero(r, gen_col) {
                        acc.add_scaled(&acts[p], &blk.get(r, gen_col));
                    }
                }
                out.paste(row_off[t], col_off[s], &acc);
            }
        }
        Ok(out)
    }

    fn delta_rank(&self, cid: usize, j: usize, n: &Rep) -> Result<usize, Truncated> {
        let key = (cid, j, n.clone());
        if let Some(&r) = self.ranks.borrow().get(&key) {
            return Ok(r);
        }
        let r = self.delta(cid, j, n)?.rank();
        self.ranks.borrow_mut().insert(key, r);
        Ok(r)
    }

    /// `dim Ext^i(m, n)` as cohomology of `Hom(P_•, n)`.
    pub fn ext_dim(&self, m: &Rep, n: &Rep, i: usize) -> Result<usize, Truncated> {
        assert!(m.side() == n.side(), "Ext between modules on different sides");
        let (cid, o) = self.locate(m);
        self.extend(cid, o + i + 1, o, false);
        let k = o + i;
        let dim = self.hom_term_dim(cid, k, n)?;
        let out = self.delta_rank(cid, k, n)?;
        let inc = if i == 0 { 0 } else { self.delta_rank(cid, k - 1, n)? };
        Ok(dim - out - inc)
    }

    /// Multiplicities of the summands of `P_i` in the minimal resolution.
    pub fn betti(&self, m: &Rep, i: usize) -> Result<Vec<usize>, Truncated> {
        let (cid, o) = self.locate(m);
        self.extend(cid, o + i, o, false);
        let chains = self.chains.borrow();
        let c = &chains[cid];
        let mut out = vec![0; self.algebra.vertex_count()];
        match c.term(o + i) {
            Some(true) => c.tops[o + i].iter().for_each(|&v| out[v] += 1),
            Some(false) => {}
            None => return Err(Truncated(o + i)),
        }
        Ok(out)
    }

    /// Both Ext-against-`J` formulas for the projective dimension.
    pub fn pd_via_ext_vanishing(&self, m: &Rep) -> ExtVanishing {
        if m.is_zero() {
            return ExtVanishing { first_vanishing: Some(DimValue::ZeroModule), sup_nonvanishing: Some(DimValue::ZeroModule) };
        }
        let bound = self.limits.bound;
        let j = self.radical(m.side());
        let mut nonzero = Vec::new();
        let mut first = None;
        for i in 1..=bound + 1 {
            match self.ext_dim(m, &j, i) {
                Ok(0) => {
                    first.get_or_insert(DimValue::Exact(i - 1));
                    nonzero.push(false);
                }
                Ok(_) => nonzero.push(true),
                Err(_) => break,
            }
        }
        let decided = nonzero.len() == bound + 1;
        let first_vanishing = first.or(if decided { Some(DimValue::AtLeast { bound, infinite: self.known_infinite(m) }) } else { None });
        let (cid, o) = self.locate(m);
        let ends = {
            let chains = self.chains.borrow();
            let c = &chains[cid];
            c.terminated() && c.syz.len() <= o + nonzero.len() + 2
        };
        let sup_nonvanishing = if ends {
            Some(DimValue::Exact(nonzero.iter().rposition(|&z| z).map_or(0, |p| p + 1)))
        } else if decided && nonzero.iter().all(|&z| z) {
            Some(DimValue::AtLeast { bound, infinite: self.known_infinite(m) })
        } else {
            None
        };
        ExtVanishing { first_vanishing, sup_nonvanishing }
    }

    fn known_infinite(&self, m: &Rep) -> bool {
        self.proj_dim(m).is_finite() == Some(false)
    }

    /// Whether `Ext^d(m, π): Ext^d(m, A) → Ext^d(m, A_0)` is onto.
    pub fn ext_map_surjective(&self, m: &Rep, d: usize) -> Result<bool, Truncated> {
        let side = m.side();
        let a = self.regular(side);
        let (a0, pi) = a.top();
        let (cid, o) = self.locate(m);
        self.extend(cid, o + d + 1, o, false);
        let k = o + d;
        if self.hom_term_dim(cid, k, &a0)? == 0 {
            return Ok(true);
        }
        let za = self.delta(cid, k, &a)?.kernel_basis();
        let za0 = self.delta(cid, k, &a0)?.kernel_basis();
        let f = a.field();
        let tops = self.chains.borrow()[cid].tops[k].clone();
        let blocks: Vec<&Mat> = tops.iter().map(|&v| &pi.blocks[v]).collect();
        let push = Mat::block_diag(f, &blocks).mul(&za);
        let rows = push.rows();
        let span = if d == 0 {
            push
        } else {
            let b0 = self.delta(cid, k - 1, &a0)?;
            Mat::hstack(f, rows, &[&push, &b0])
        };
        Ok(span.rank() == za0.cols())
    }

    /// Reduces a bounded complex to a module with the same finiteness of
    /// projective dimension: builds a projective complex `P → C` whose cone
    /// is exact, degree by degree from the bottom, and returns the kernel
    /// of `P_{h+1} → P_h` past the top degree `h` of `C`. Beyond that point
    /// `P` is the minimal resolution of this module.
    /// `None` when a projective term would exceed the size cap.
    pub fn complex_tail(&self, c: &Complex) -> Option<Rep> {
        assert!(c.is_valid(), "not a complex");
        let side = c.terms[0].side();
        let zero = || Rep::zero(self.algebra.clone(), side);
        let f = self.algebra.field();
        let nv = self.algebra.vertex_count();
        let top = c.lowest + c.terms.len() as i64 - 1;
        // P_{n-1}, P_{n-2}, d_{n-1}: P_{n-1} → P_{n-2}, φ_{n-1}: P_{n-1} → C_{n-1}
        let mut p1 = zero();
        let mut p2 = zero();
        let mut d1: Option<ModMap> = None;
        let mut phi1: Option<ModMap> = None;
        for n in c.lowest..=top + 2 {
            let cn = c.term(n).cloned().unwrap_or_else(zero);
            let cn1 = c.term(n - 1).cloned().unwrap_or_else(zero);
            let x = Rep::direct_sum_of(self.algebra.clone(), side, &[p1.clone(), cn.clone()]);
            let spaces: Vec<Subspace> = (0..nv)
                .map(|v| {
                    let (a, bb) = (p1.dims()[v], cn.dims()[v]);
                    let (ra, rb) = (p2.dims()[v], cn1.dims()[v]);
                    let mut fm = Mat::zeros(f, ra + rb, a + bb);
                    if let Some(d) = &d1 {
                        fm.paste(0, 0, &d.blocks[v].neg());
                    }
                    if let Some(ph) = &phi1 {
                        fm.paste(ra, 0, &ph.blocks[v]);
                    }
                    if let Some(dc) = c.differential(n) {
                        fm.paste(ra, a, &dc.blocks[v]);
                    }
                    Subspace::kernel(&fm)
                })
                .collect();
            let (z, zincl) = x.subrep(&spaces);
            if n == top + 2 {
                return Some(z);
            }
            let boundaries: Vec<Subspace> = (0..nv)
                .map(|v| {
                    let cn_up = c.term(n + 1).map_or(0, |t| t.dims()[v]);
                    let mut g = Mat::zeros(f, p1.dims()[v] + cn.dims()[v], cn_up);
                    if let Some(dc) = c.differential(n + 1) {
                        g.paste(p1.dims()[v], 0, &dc.blocks[v]);
                    }
                    Subspace::span(&g.select_rows(&spaces[v].coords))
                })
                .collect();
            let (q, _) = z.quotient(&boundaries);
            let comps: Vec<Vec<usize>> = boundaries.iter().map(|s| s.quotient_projection().1).collect();
            let gens: Vec<(usize, Mat)> = top_generators(&q)
                .into_iter()
                .map(|(v, y)| {
                    let mut lifted = Mat::zeros(f, z.dims()[v], 1);
                    for (i, &cpos) in comps[v].iter().enumerate() {
                        lifted.set(cpos, 0, y.get(i, 0));
                    }
                    (v, lifted)
                })
                .collect();
            let b = crate::rep::acting_of(&self.algebra, side);
            let pdim: usize = gens.iter().map(|(v, _)| (0..nv).map(|j| b.paths_between(*v, j).len()).sum::<usize>()).sum();
            if pdim > self.limits.max_dim {
                log::debug!("complex tail stopped at degree {n}: projective of dimension {pdim}");
                return None;
            }
            let pn = projective_sum(&self.algebra, side, gens.iter().map(|(v, _)| *v));
            let psi = zincl.after(&map_from_projective(&z, &pn, &gens));
            let dn = ModMap {
                blocks: (0..nv)
                    .map(|v| {
                        let a = p1.dims()[v];
                        let all: Vec<usize> = (0..a).collect();
                        psi.blocks[v].select_rows(&all).neg()
                    })
                    .collect(),
            };
            let phin = ModMap {
                blocks: (0..nv)
                    .map(|v| {
                        let a = p1.dims()[v];
                        let rest: Vec<usize> = (a..a + cn.dims()[v]).collect();
                        psi.blocks[v].select_rows(&rest)
                    })
                    .collect(),
            };
            p2 = std::mem::replace(&mut p1, pn);
            d1 = Some(dn);
            phi1 = Some(phin);
        }
        unreachable!("loop returns at the top degree")
    }

    /// `Some(true)` when the complex is quasi-isomorphic to a bounded
    /// complex of projectives, `Some(false)` when provably not, `None` when
    /// the bound leaves it open.
    pub fn complex_has_finite_pd(&self, c: &Complex) -> Option<bool> {
        self.proj_dim(&self.complex_tail(c)?).is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quiver;
    use crate::linalg::Field;

    fn alg(v: usize, arrows: &[(usize, usize)], n: usize) -> Arc<BoundQuiverAlgebra> {
        let mut q = Quiver::new(v);
        for (i, &(s, t)) in arrows.iter().enumerate() {
            q.arrow(&format!("a{i}"), s, t);
        }
        Arc::new(BoundQuiverAlgebra::build(q, vec![], n, Field::Rational).unwrap())
    }

    #[test]
    fn dim_value_order() {
        use Comparison::*;
        assert_eq!(DimValue::Exact(1).compare(DimValue::Exact(1)), Equal);
        assert_eq!(DimValue::Exact(3).compare(DimValue::truncated(5)), Less);
        assert_eq!(DimValue::Exact(7).compare(DimValue::truncated(5)), Unknown);
        assert_eq!(DimValue::truncated(5).compare(DimValue::Exact(2)), Greater);
        assert_eq!(DimValue::truncated(5).compare(DimValue::truncated(5)), Unknown);
        assert_eq!(DimValue::infinite(5).compare(DimValue::infinite(5)), Equal);
        assert_eq!(DimValue::ZeroModule.compare(DimValue::Exact(0)), Equal);
        assert_eq!(DimValue::infinite(3).to_string(), "inf");
        assert_eq!(DimValue::truncated(3).to_string(), ">3");
    }

    #[test]
    fn covers_and_syzygies() {
        let d = alg(1, &[(0, 0)], 2);
        let s = Rep::simple(d.clone(), 0, Side::Left);
        let (p, epi) = projective_cover(&s);
        assert_eq!(p.dims(), &[2]);
        assert!(epi.is_homomorphism(&p, &s));
        assert_eq!(syzygy(&s, 1), s);
        assert_eq!(syzygy(&s, 5), s);

        let a2 = alg(2, &[(0, 1)], 2);
        let a0 = Rep::top_of_algebra(a2.clone(), Side::Left);
        assert_eq!(syzygy(&a0, 1).dims(), &[0, 1]);
        assert!(syzygy(&Rep::regular(a2, Side::Left), 1).is_zero());
    }

    #[test]
    fn projective_dimensions() {
        let a2 = alg(2, &[(0, 1)], 2);
        let h = Homology::new(a2.clone(), Limits::with_bound(30));
        assert_eq!(h.proj_dim(&h.simple(0, Side::Left)), DimValue::Exact(1));
        assert_eq!(h.proj_dim(&h.simple(1, Side::Left)), DimValue::Exact(0));
        assert_eq!(h.proj_dim(&Rep::zero(a2, Side::Left)), DimValue::ZeroModule);

        let d = alg(1, &[(0, 0)], 2);
        let h = Homology::new(d, Limits::with_bound(30));
        assert_eq!(h.proj_dim(&h.simple(0, Side::Left)), DimValue::infinite(30));
        assert_eq!(h.proj_dim(&h.regular(Side::Left)), DimValue::Exact(0));
    }

    #[test]
    fn ext_examples() {
        let a2 = alg(2, &[(0, 1)], 2);
        let h = Homology::new(a2, Limits::with_bound(10));
        let (s1, s2) = (h.simple(0, Side::Left), h.simple(1, Side::Left));
        assert_eq!(h.ext_dim(&s1, &s2, 1), Ok(1));
        assert_eq!(h.ext_dim(&s2, &s1, 1), Ok(0));
        assert_eq!(h.ext_dim(&s1, &s1, 0), Ok(1));
        assert!(h.ext_map_surjective(&s1, 1).unwrap());
        assert!(!h.ext_map_surjective(&s1, 0).unwrap());

        let d = alg(1, &[(0, 0)], 2);
        let h = Homology::new(d, Limits::with_bound(10));
        let s = h.simple(0, Side::Left);
        for i in 0..=10 {
            assert_eq!(h.ext_dim(&s, &s, i), Ok(1));
            assert!(!h.ext_map_surjective(&s, i).unwrap());
        }
        let ev = h.pd_via_ext_vanishing(&s);
        assert_eq!(ev.agreed(), Some(DimValue::infinite(10)));
    }

    #[test]
    fn complexes() {
        let d = alg(1, &[(0, 0)], 2);
        let h = Homology::new(d.clone(), Limits::with_bound(10));
        let s = h.simple(0, Side::Left);
        assert_eq!(h.complex_has_finite_pd(&Complex::concentrated(s.clone(), 0)), Some(false));
        assert_eq!(h.complex_has_finite_pd(&Complex::concentrated(h.regular(Side::Left), 3)), Some(true));
        // the cover P → S as a two-term complex has homology S in degree 0
        let (p, epi) = projective_cover(&s);
        let c = Complex { lowest: 0, terms: vec![s, p], differentials: vec![epi] };
        assert_eq!(c.homology_dims(), vec![0, 1]);
        assert_eq!(h.complex_has_finite_pd(&c), Some(false));

        let a2 = alg(2, &[(0, 1)], 2);
        let h = Homology::new(a2, Limits::with_bound(10));
        assert_eq!(h.complex_has_finite_pd(&Complex::concentrated(h.simple(0, Side::Left), 0)), Some(true));
    }
}
