//! Finite-dimensional modules as quiver representations.
//!
//! A [`Rep`] keeps a handle on the algebra it lives over and an explicit
//! [`Side`]. A left module assigns to an arrow `a: i → j` a `d_j × d_i`
//! matrix; a right module assigns it a `d_i × d_j` matrix, i.e. it is a left
//! module over the opposite algebra, whose arrows are reversed. Every
//! computation acts through [`Rep::acting`], the algebra whose left modules
//! the representation literally is.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::BoundQuiverAlgebra;
use crate::linalg::{Field, FieldError, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("expected {expected} entries in the dimension vector, got {got}")]
    DimensionCount { expected: usize, got: usize },
    #[error("arrow {arrow} matrix has shape {got:?}, expected {expected:?}")]
    Shape { arrow: usize, expected: (usize, usize), got: (usize, usize) },
    #[error("matrix entries are over the wrong field")]
    FieldMismatch,
    #[error("relation {0} does not act as zero")]
    RelationViolated(usize),
    #[error("a path of length {0} (the nilbound) acts nonzero")]
    NotNilpotent(usize),
    #[error("modules live on different sides or algebras")]
    Mismatch,
    #[error("module literal: {0}")]
    Literal(String),
    #[error(transparent)]
    Scalar(#[from] FieldError),
}

#[derive(Clone)]
pub struct Rep {
    algebra: Arc<BoundQuiverAlgebra>,
    side: Side,
    dims: Vec<usize>,
    maps: Vec<Mat>,
}

impl fmt::Debug for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rep({} {:?})", self.side, self.dims)
    }
}

/// Equality and hashing compare side, dimension vector and matrices; both
/// operands are assumed to live over the same algebra.
impl PartialEq for Rep {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && self.dims == other.dims && self.maps == other.maps
    }
}
impl Eq for Rep {}
impl Hash for Rep {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.side.hash(state);
        self.dims.hash(state);
        self.maps.hash(state);
    }
}

/// A morphism of representations: one matrix per vertex, mapping the
/// source's vertex space to the target's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMap {
    pub blocks: Vec<Mat>,
}

/// A subspace given by a basis whose rows at `coords` form an identity, so
/// the coordinates of a member vector are its entries at `coords`.
#[derive(Clone, Debug)]
pub(crate) struct Subspace {
    pub basis: Mat,
    pub coords: Vec<usize>,
}

impl Subspace {
    pub fn span(m: &Mat) -> Subspace {
        let (basis, coords) = m.column_space();
        Subspace { basis, coords }
    }

    pub fn kernel(m: &Mat) -> Subspace {
        let (basis, coords) = m.kernel_with_free();
        Subspace { basis, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Projection onto the quotient by this subspace, in coordinates given
    /// by the complementary standard positions (returned alongside).
    pub fn quotient_projection(&self) -> (Mat, Vec<usize>) {
        let n = self.basis.rows();
        let f = self.basis.field();
        let mut is_coord = vec![false; n];
        for &c in &self.coords {
            is_coord[c] = true;
        }
        let comp: Vec<usize> = (0..n).filter(|&i| !is_coord[i]).collect();
        let mut q = Mat::zeros(f, comp.len(), n);
        for (i, &c) in comp.iter().enumerate() {
            q.set(i, c, f.one());
        }
        for (j, &p) in self.coords.iter().enumerate() {
            for (i, &c) in comp.iter().enumerate() {
                if !self.basis.is_entry_zero(c, j) {
                    q.set(i, p, f.neg(&self.basis.get(c, j)));
                }
            }
        }
        (q, comp)
    }
}

impl Rep {
    /// Checked constructor: shapes, field, relations and nilpotency.
    pub fn new(
        algebra: Arc<BoundQuiverAlgebra>,
        side: Side,
        dims: Vec<usize>,
        maps: Vec<Mat>,
    ) -> Result<Rep, RepError> {
        let rep = Rep { algebra, side, dims, maps };
        rep.validate()?;
        Ok(rep)
    }

    /// Checks every module axiom; used by the checked constructor and tests.
    pub fn validate(&self) -> Result<(), RepError> {
        let b = self.acting();
        if self.dims.len() != b.vertex_count() {
            return Err(RepError::DimensionCount { expected: b.vertex_count(), got: self.dims.len() });
        }
        if self.maps.len() != b.arrow_count() {
            return Err(RepError::Literal(format!("expected {} arrow matrices", b.arrow_count())));
        }
        for (i, (arr, m)) in b.quiver().arrows.iter().zip(&self.maps).enumerate() {
            if m.field() != b.field() {
                return Err(RepError::FieldMismatch);
            }
            let expected = (self.dims[arr.target], self.dims[arr.source]);
            if (m.rows(), m.cols()) != expected {
                return Err(RepError::Shape { arrow: i, expected, got: (m.rows(), m.cols()) });
            }
        }
        for (ri, r) in b.relations().iter().enumerate() {
            let (_, first) = &r.terms[0];
            let s = b.quiver().arrows[first[0]].source;
            let t = b.quiver().arrows[*first.last().expect("nonempty")].target;
            let mut acc = Mat::zeros(b.field(), self.dims[t], self.dims[s]);
            for (c, p) in &r.terms {
                acc.add_scaled(&self.path_action(s, p), c);
            }
            if !acc.is_zero() {
                return Err(RepError::RelationViolated(ri));
            }
        }
        // every path of length N must act as zero; products are pruned once zero
        let n = b.nilbound();
        for v in 0..b.vertex_count() {
            let mut stack = vec![(v, Mat::identity(b.field(), self.dims[v]), 0usize)];
            while let Some((at, m, len)) = stack.pop() {
                if m.is_zero() {
                    continue;
                }
                if len == n {
                    return Err(RepError::NotNilpotent(n));
                }
                for (ai, arr) in b.quiver().arrows.iter().enumerate() {
                    if arr.source == at {
                        stack.push((arr.target, self.maps[ai].mul(&m), len + 1));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn zero(algebra: Arc<BoundQuiverAlgebra>, side: Side) -> Rep {
        let dims = vec![0; algebra.vertex_count()];
        Rep::with_zero_maps(algebra, side, dims)
    }

    fn with_zero_maps(algebra: Arc<BoundQuiverAlgebra>, side: Side, dims: Vec<usize>) -> Rep {
        let f = algebra.field();
        let maps = {
            let b = acting_of(&algebra, side);
            b.quiver().arrows.iter().map(|a| Mat::zeros(f, dims[a.target], dims[a.source])).collect()
        };
        Rep { algebra, side, dims, maps }
    }

    /// The simple module at `vertex`.
    pub fn simple(algebra: Arc<BoundQuiverAlgebra>, vertex: usize, side: Side) -> Rep {
        assert!(vertex < algebra.vertex_count(), "vertex out of range");
        let mut dims = vec![0; algebra.vertex_count()];
        dims[vertex] = 1;
        Rep::with_zero_maps(algebra, side, dims)
    }

    /// The semisimple module `A/J`, the sum of all simples.
    pub fn top_of_algebra(algebra: Arc<BoundQuiverAlgebra>, side: Side) -> Rep {
        let dims = vec![1; algebra.vertex_count()];
        Rep::with_zero_maps(algebra, side, dims)
    }

    /// The indecomposable projective at `vertex`: spanned by the basis paths
    /// leaving `vertex` in the acting algebra (`A e_v` on the left, `e_v A`
    /// on the right).
    pub fn projective(algebra: Arc<BoundQuiverAlgebra>, vertex: usize, side: Side) -> Rep {
        let (dims, maps) = {
            let b = acting_of(&algebra, side);
            let f = b.field();
            let v = b.vertex_count();
            let dims: Vec<usize> = (0..v).map(|j| b.paths_between(vertex, j).len()).collect();
            let maps = b
                .quiver()
                .arrows
                .iter()
                .enumerate()
                .map(|(ai, arr)| {
                    let ae = b.arrow_element(ai);
                    let src = b.paths_between(vertex, arr.source);
                    let mut m = Mat::zeros(f, dims[arr.target], src.len());
                    for (col, &p) in src.iter().enumerate() {
                        for (z, c) in b.product(ae, p) {
                            m.set(b.position(*z), col, c.clone());
                        }
                    }
                    m
                })
                .collect();
            (dims, maps)
        };
        Rep { algebra, side, dims, maps }
    }

    /// The indecomposable injective at `vertex`: the dual of the projective
    /// on the other side.
    pub fn injective(algebra: Arc<BoundQuiverAlgebra>, vertex: usize, side: Side) -> Rep {
        Rep::projective(algebra, vertex, side.flip()).dual()
    }

    /// The regular module `A` (left or right).
    pub fn regular(algebra: Arc<BoundQuiverAlgebra>, side: Side) -> Rep {
        let parts: Vec<Rep> =
            (0..algebra.vertex_count()).map(|v| Rep::projective(algebra.clone(), v, side)).collect();
        Rep::direct_sum_of(algebra, side, &parts)
    }

    /// `DA`, the dual of the regular module on the other side.
    pub fn dual_regular(algebra: Arc<BoundQuiverAlgebra>, side: Side) -> Rep {
        Rep::regular(algebra, side.flip()).dual()
    }

    pub fn algebra(&self) -> &Arc<BoundQuiverAlgebra> {
        &self.algebra
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    /// The algebra this representation is a left module over.
    pub fn acting(&self) -> &BoundQuiverAlgebra {
        acting_of(&self.algebra, self.side)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn map(&self, arrow: usize) -> &Mat {
        &self.maps[arrow]
    }

    pub fn maps(&self) -> &[Mat] {
        &self.maps
    }

    /// Action of a path (arrows in application order) starting at `source`.
    pub fn path_action(&self, source: usize, arrows: &[usize]) -> Mat {
        let mut m = Mat::identity(self.field(), self.dims[source]);
        for &a in arrows {
            m = self.maps[a].mul(&m);
        }
        m
    }

    /// Action of every basis element of the acting algebra.
    pub fn basis_actions(&self) -> Vec<Mat> {
        let b = self.acting();
        let mut out: Vec<Option<Mat>> = vec![None; b.dim()];
        // share prefixes through a walk over the path tree
        for v in 0..b.vertex_count() {
            let mut stack = vec![(v, Vec::<usize>::new(), Mat::identity(self.field(), self.dims[v]))];
            while let Some((at, path, m)) = stack.pop() {
                if m.is_zero() {
                    continue;
                }
                if let Some(i) = b.basis_index(v, &path) {
                    out[i] = Some(m.clone());
                }
                if path.len() + 1 >= b.nilbound() {
                    continue;
                }
                for (ai, arr) in b.quiver().arrows.iter().enumerate() {
                    if arr.source == at {
                        let mut p = path.clone();
                        p.push(ai);
                        stack.push((arr.target, p, self.maps[ai].mul(&m)));
                    }
                }
            }
        }
        out.into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.unwrap_or_else(|| {
                    let p = &b.basis()[i];
                    self.path_action(p.source, &p.arrows)
                })
            })
            .collect()
    }

    /// Images `p · x` of a vector `x ∈ M_v` under every basis path `p`
    /// leaving `v`, keyed by basis index. Zero images are omitted.
    pub(crate) fn orbit(&self, v: usize, x: &Mat) -> HashMap<usize, Mat> {
        let b = self.acting();
        let mut out = HashMap::new();
        let mut stack = vec![(v, Vec::<usize>::new(), x.clone())];
        while let Some((at, path, y)) = stack.pop() {
            if y.is_zero() {
                continue;
            }
            if let Some(i) = b.basis_index(v, &path) {
                out.insert(i, y.clone());
            }
            if path.len() + 1 >= b.nilbound() {
                continue;
            }
            for (ai, arr) in b.quiver().arrows.iter().enumerate() {
                if arr.source == at {
                    let mut p = path.clone();
                    p.push(ai);
                    stack.push((arr.target, p, self.maps[ai].mul(&y)));
                }
            }
        }
        out
    }

    /// Per-vertex spans of the submodule generated by vectors `x ∈ M_v`.
    fn generated_spaces(&self, gens: &[(usize, Mat)]) -> Vec<Subspace> {
        let b = self.acting();
        let f = self.field();
        let mut cols: Vec<Vec<Mat>> = vec![Vec::new(); b.vertex_count()];
        for (v, x) in gens {
            for (i, y) in self.orbit(*v, x) {
                cols[b.basis()[i].target].push(y);
            }
        }
        cols.iter()
            .enumerate()
            .map(|(w, c)| {
                let refs: Vec<&Mat> = c.iter().collect();
                Subspace::span(&Mat::hstack(f, self.dims[w], &refs))
            })
            .collect()
    }

    /// The submodule generated by column vectors `x ∈ M_v`, with its
    /// inclusion.
    pub fn submodule_generated(&self, gens: &[(usize, Mat)]) -> (Rep, ModMap) {
        self.subrep(&self.generated_spaces(gens))
    }

    /// The quotient by the submodule generated by `gens`, with the
    /// projection.
    pub fn quotient_generated(&self, gens: &[(usize, Mat)]) -> (Rep, ModMap) {
        self.quotient(&self.generated_spaces(gens))
    }

    /// The dual `D M = Hom_k(M, k)`, a module on the other side.
    pub fn dual(&self) -> Rep {
        Rep {
            algebra: self.algebra.clone(),
            side: self.side.flip(),
            dims: self.dims.clone(),
            maps: self.maps.iter().map(Mat::transpose).collect(),
        }
    }

    /// Reinterprets a right module as a left module over `op` (or a left
    /// module as a right one), where `op` is the opposite of this module's
    /// algebra. Matrices are unchanged.
    pub fn over_opposite(&self, op: Arc<BoundQuiverAlgebra>) -> Result<Rep, RepError> {
        if op.quiver() != &self.algebra.quiver().reversed() || op.dim() != self.algebra.dim() {
            return Err(RepError::Mismatch);
        }
        Ok(Rep { algebra: op, side: self.side.flip(), dims: self.dims.clone(), maps: self.maps.clone() })
    }

    pub fn direct_sum(parts: &[Rep]) -> Result<Rep, RepError> {
        let first = parts.first().ok_or(RepError::Mismatch)?;
        if parts.iter().any(|p| p.side != first.side || !Arc::ptr_eq(&p.algebra, &first.algebra)) {
            return Err(RepError::Mismatch);
        }
        Ok(Rep::direct_sum_of(first.algebra.clone(), first.side, parts))
    }

    /// Direct sum, allowing an empty list (the zero module).
    pub fn direct_sum_of(algebra: Arc<BoundQuiverAlgebra>, side: Side, parts: &[Rep]) -> Rep {
        let v = algebra.vertex_count();
        let f = algebra.field();
        let dims: Vec<usize> = (0..v).map(|i| parts.iter().map(|p| p.dims[i]).sum()).collect();
        let narrows = acting_of(&algebra, side).arrow_count();
        let maps = (0..narrows)
            .map(|a| {
                let blocks: Vec<&Mat> = parts.iter().map(|p| &p.maps[a]).collect();
                Mat::block_diag(f, &blocks)
            })
            .collect();
        Rep { algebra, side, dims, maps }
    }

    /// The sub-representation spanned by per-vertex subspaces, assumed
    /// closed under the arrows, with its inclusion.
    pub(crate) fn subrep(&self, spaces: &[Subspace]) -> (Rep, ModMap) {
        let b = self.acting();
        let maps = b
            .quiver()
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, arr)| {
                let img = self.maps[ai].mul(&spaces[arr.source].basis);
                img.select_rows(&spaces[arr.target].coords)
            })
            .collect();
        let dims = spaces.iter().map(Subspace::dim).collect();
        let incl = ModMap { blocks: spaces.iter().map(|s| s.basis.clone()).collect() };
        (Rep { algebra: self.algebra.clone(), side: self.side, dims, maps }, incl)
    }

    /// Quotient by per-vertex subspaces closed under the arrows, with the
    /// projection.
    pub(crate) fn quotient(&self, spaces: &[Subspace]) -> (Rep, ModMap) {
        let b = self.acting();
        let proj: Vec<(Mat, Vec<usize>)> = spaces.iter().map(Subspace::quotient_projection).collect();
        let maps = b
            .quiver()
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, arr)| {
                let (q, _) = &proj[arr.target];
                let (_, comp) = &proj[arr.source];
                q.mul(&self.maps[ai].select_cols(comp))
            })
            .collect();
        let dims = proj.iter().map(|(_, c)| c.len()).collect();
        let p = ModMap { blocks: proj.into_iter().map(|(q, _)| q).collect() };
        (Rep { algebra: self.algebra.clone(), side: self.side, dims, maps }, p)
    }

    /// Per-vertex radical `Σ_a im M(a)`.
    pub(crate) fn radical_spaces(&self) -> Vec<Subspace> {
        let b = self.acting();
        let f = self.field();
        (0..b.vertex_count())
            .map(|v| {
                let incoming: Vec<&Mat> = b
                    .quiver()
                    .arrows
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.target == v)
                    .map(|(i, _)| &self.maps[i])
                    .collect();
                Subspace::span(&Mat::hstack(f, self.dims[v], &incoming))
            })
            .collect()
    }

    /// Per-vertex socle: vectors killed by every arrow.
    pub(crate) fn socle_spaces(&self) -> Vec<Subspace> {
        let b = self.acting();
        let f = self.field();
        (0..b.vertex_count())
            .map(|v| {
                let outgoing: Vec<&Mat> = b
                    .quiver()
                    .arrows
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.source == v)
                    .map(|(i, _)| &self.maps[i])
                    .collect();
                Subspace::kernel(&Mat::vstack(f, self.dims[v], &outgoing))
            })
            .collect()
    }

    pub fn radical(&self) -> (Rep, ModMap) {
        self.subrep(&self.radical_spaces())
    }

    pub fn top(&self) -> (Rep, ModMap) {
        self.quotient(&self.radical_spaces())
    }

    pub fn socle(&self) -> (Rep, ModMap) {
        self.subrep(&self.socle_spaces())
    }

    pub fn radical_top_socle(&self) -> RadicalTopSocle {
        RadicalTopSocle { radical: self.radical(), top: self.top(), socle: self.socle() }
    }

    /// Dimension vector of the top `M / JM`.
    pub fn top_dims(&self) -> Vec<usize> {
        self.radical_spaces().iter().zip(&self.dims).map(|(r, d)| d - r.dim()).collect()
    }

    /// `J^i M`, obtained by taking radicals `i` times.
    pub fn radical_power(&self, i: usize) -> Rep {
        let mut m = self.clone();
        for _ in 0..i {
            m = m.radical().0;
        }
        m
    }

    /// A basis of `Hom(self, other)` from the intertwiner equations.
    pub fn hom_space(&self, other: &Rep) -> Result<Vec<ModMap>, RepError> {
        if self.side != other.side || !Arc::ptr_eq(&self.algebra, &other.algebra) {
            return Err(RepError::Mismatch);
        }
        let b = self.acting();
        let f = self.field();
        let nv = b.vertex_count();
        let mut offset = vec![0; nv + 1];
        for v in 0..nv {
            offset[v + 1] = offset[v] + other.dims[v] * self.dims[v];
        }
        let unknowns = offset[nv];
        let var = |v: usize, i: usize, j: usize| offset[v] + i * self.dims[v] + j;
        let eq_count: usize =
            b.quiver().arrows.iter().map(|a| other.dims[a.target] * self.dims[a.source]).sum();
        let mut sys = Mat::zeros(f, eq_count, unknowns);
        let mut row = 0;
        for (ai, arr) in b.quiver().arrows.iter().enumerate() {
            let (s, t) = (arr.source, arr.target);
            let (nm, mm) = (&other.maps[ai], &self.maps[ai]);
            for i in 0..other.dims[t] {
                for j in 0..self.dims[s] {
                    // (N(a) f_s)[i][j] - (f_t M(a))[i][j] = 0
                    for k in 0..other.dims[s] {
                        if !nm.is_entry_zero(i, k) {
                            let c = var(s, k, j);
                            let cur = sys.get(row, c);
                            sys.set(row, c, f.add(&cur, &nm.get(i, k)));
                        }
                    }
                    for k in 0..self.dims[t] {
                        if !mm.is_entry_zero(k, j) {
                            let c = var(t, i, k);
                            let cur = sys.get(row, c);
                            sys.set(row, c, f.sub(&cur, &mm.get(k, j)));
                        }
                    }
                    row += 1;
                }
            }
        }
        let ker = sys.kernel_basis();
        Ok((0..ker.cols())
            .map(|col| ModMap {
                blocks: (0..nv)
                    .map(|v| {
                        let mut blk = Mat::zeros(f, other.dims[v], self.dims[v]);
                        for i in 0..other.dims[v] {
                            for j in 0..self.dims[v] {
                                blk.set(i, j, ker.get(var(v, i, j), col));
                            }
                        }
                        blk
                    })
                    .collect(),
            })
            .collect())
    }

    /// Serialises to the module literal format:
    /// `MODULE side d1 d2 ... ; ARROWMAT name = [[..],[..]] ; ...`.
    pub fn to_literal(&self) -> String {
        let b = self.acting();
        let mut s = format!("MODULE {}", self.side);
        for d in &self.dims {
            s.push_str(&format!(" {d}"));
        }
        for (ai, arr) in b.quiver().arrows.iter().enumerate() {
            if !self.maps[ai].is_zero() {
                s.push_str(&format!(" ; ARROWMAT {} = {}", arr.name, self.maps[ai]));
            }
        }
        s
    }

    /// Parses the module literal format; arrows without an `ARROWMAT`
    /// clause act as zero.
    pub fn parse_literal(algebra: Arc<BoundQuiverAlgebra>, text: &str) -> Result<Rep, RepError> {
        let lit = |m: &str| RepError::Literal(m.to_string());
        let mut clauses = text.split(';').map(str::trim);
        let head = clauses.next().ok_or_else(|| lit("empty literal"))?;
        let mut words = head.split_whitespace();
        if words.next() != Some("MODULE") {
            return Err(lit("expected MODULE"));
        }
        let side = match words.next() {
            Some("left") => Side::Left,
            Some("right") => Side::Right,
            _ => return Err(lit("expected side left|right")),
        };
        let dims: Vec<usize> = words
            .map(|w| w.parse::<usize>().map_err(|_| lit("bad dimension")))
            .collect::<Result<_, _>>()?;
        if dims.len() != algebra.vertex_count() {
            return Err(RepError::DimensionCount { expected: algebra.vertex_count(), got: dims.len() });
        }
        let mut rep = Rep::with_zero_maps(algebra, side, dims);
        let f = rep.field();
        for clause in clauses.filter(|c| !c.is_empty()) {
            let body = clause.strip_prefix("ARROWMAT").ok_or_else(|| lit("expected ARROWMAT"))?;
            let (name, mat) = body.split_once('=').ok_or_else(|| lit("expected '='"))?;
            let name = name.trim();
            let ai = rep
                .acting()
                .quiver()
                .arrows
                .iter()
                .position(|a| a.name == name)
                .ok_or_else(|| RepError::Literal(format!("unknown arrow {name}")))?;
            let rows = parse_matrix(mat.trim(), f)?;
            let expected = (rep.maps[ai].rows(), rep.maps[ai].cols());
            let ncols = rows.first().map_or(expected.1, Vec::len);
            if rows.len() != expected.0 || ncols != expected.1 || rows.iter().any(|r| r.len() != ncols) {
                return Err(RepError::Shape { arrow: ai, expected, got: (rows.len(), ncols) });
            }
            let flat = rows.into_iter().flatten().collect();
            rep.maps[ai] = Mat::from_scalars(f, expected.0, expected.1, flat);
        }
        rep.validate()?;
        Ok(rep)
    }
}

fn parse_matrix(s: &str, f: Field) -> Result<Vec<Vec<crate::linalg::Scalar>>, RepError> {
    let bad = || RepError::Literal(format!("bad matrix {s:?}"));
    let inner = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let mut rows = Vec::new();
    let mut rest = inner;
    loop {
        let open = rest.find('[').ok_or_else(bad)?;
        let close = rest.find(']').ok_or_else(bad)?;
        let body = rest[open + 1..close].trim();
        let row = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',').map(|x| f.parse_scalar(x)).collect::<Result<Vec<_>, _>>()?
        };
        rows.push(row);
        rest = rest[close + 1..].trim_start();
        match rest.strip_prefix(',') {
            Some(r) => rest = r,
            None if rest.is_empty() => break,
            None => return Err(bad()),
        }
    }
    Ok(rows)
}

pub(crate) fn acting_of(algebra: &BoundQuiverAlgebra, side: Side) -> &BoundQuiverAlgebra {
    match side {
        Side::Left => algebra,
        Side::Right => algebra.op(),
    }
}

pub struct RadicalTopSocle {
    pub radical: (Rep, ModMap),
    pub top: (Rep, ModMap),
    pub socle: (Rep, ModMap),
}

/// The Jacobson radical `J` as a left or right module: the kernel of
/// `A → A/J`.
pub fn radical_module(algebra: &Arc<BoundQuiverAlgebra>, side: Side) -> Rep {
    Rep::regular(algebra.clone(), side).radical().0
}

impl ModMap {
    pub fn identity(m: &Rep) -> ModMap {
        ModMap { blocks: m.dims.iter().map(|&d| Mat::identity(m.field(), d)).collect() }
    }

    pub fn zero(source: &Rep, target: &Rep) -> ModMap {
        let f = source.field();
        ModMap { blocks: source.dims.iter().zip(&target.dims).map(|(&s, &t)| Mat::zeros(f, t, s)).collect() }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ModMap) -> ModMap {
        ModMap { blocks: self.blocks.iter().zip(&first.blocks).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Mat::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(Mat::rank).sum()
    }

    /// Checks the intertwiner equations `f_t M(a) = N(a) f_s`.
    pub fn is_homomorphism(&self, source: &Rep, target: &Rep) -> bool {
        let b = source.acting();
        b.quiver().arrows.iter().enumerate().all(|(ai, arr)| {
            self.blocks[arr.target].mul(&source.maps[ai]) == target.maps[ai].mul(&self.blocks[arr.source])
        })
    }

    pub fn is_surjective(&self, target: &Rep) -> bool {
        self.rank() == target.dim()
    }

    /// Kernel as a sub-representation of `source`, with its inclusion.
    pub fn kernel(&self, source: &Rep) -> (Rep, ModMap) {
        let spaces: Vec<Subspace> = self.blocks.iter().map(Subspace::kernel).collect();
        source.subrep(&spaces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quiver;

    const Q: Field = Field::Rational;

    fn a2() -> Arc<BoundQuiverAlgebra> {
        let mut q = Quiver::new(2);
        q.arrow("a", 0, 1);
        Arc::new(BoundQuiverAlgebra::build(q, vec![], 2, Q).unwrap())
    }

    fn dual_numbers() -> Arc<BoundQuiverAlgebra> {
        let mut q = Quiver::new(1);
        q.arrow("x", 0, 0);
        Arc::new(BoundQuiverAlgebra::build(q, vec![], 2, Q).unwrap())
    }

    #[test]
    fn simples_and_projectives() {
        let a = a2();
        assert_eq!(Rep::simple(a.clone(), 1, Side::Left).dims(), &[0, 1]);
        let p1 = Rep::projective(a.clone(), 0, Side::Left);
        assert_eq!(p1.dims(), &[1, 1]);
        p1.validate().unwrap();
        assert_eq!(p1.top_dims(), vec![1, 0]);
        let reg = Rep::regular(a.clone(), Side::Left);
        assert_eq!(reg.dim(), a.dim());
        let k = Arc::new(BoundQuiverAlgebra::build(Quiver::new(1), vec![], 2, Q).unwrap());
        assert_eq!(Rep::projective(k.clone(), 0, Side::Left), Rep::simple(k, 0, Side::Left));
        let d = dual_numbers();
        assert_eq!(Rep::projective(d, 0, Side::Left).dims(), &[2]);
    }

    #[test]
    fn right_projectives_reverse_arrows() {
        let a = a2();
        // e_1 A = span{e_1} on the right, e_2 A = span{e_2, a}
        assert_eq!(Rep::projective(a.clone(), 0, Side::Right).dims(), &[1, 0]);
        assert_eq!(Rep::projective(a.clone(), 1, Side::Right).dims(), &[1, 1]);
        let inj = Rep::injective(a, 1, Side::Left);
        assert_eq!(inj.dims(), &[1, 1]);
        inj.validate().unwrap();
    }

    #[test]
    fn radical_top_socle_examples() {
        let d = dual_numbers();
        let reg = Rep::regular(d.clone(), Side::Left);
        let rts = reg.radical_top_socle();
        assert_eq!(rts.radical.0.dims(), &[1]);
        assert_eq!(rts.top.0.dims(), &[1]);
        assert_eq!(rts.socle.0.dims(), &[1]);
        assert!(rts.radical.1.is_homomorphism(&rts.radical.0, &reg));
        assert!(rts.top.1.is_homomorphism(&reg, &rts.top.0));

        let a = a2();
        let p1 = Rep::projective(a.clone(), 0, Side::Left);
        let rts = p1.radical_top_socle();
        assert_eq!(rts.top.0.dims(), &[1, 0]);
        assert_eq!(rts.radical.0.dims(), &[0, 1]);

        let ss = Rep::top_of_algebra(a, Side::Left);
        let rts = ss.radical_top_socle();
        assert_eq!(rts.radical.0.dim(), 0);
        assert_eq!(rts.top.0, ss);
        assert_eq!(rts.socle.0, ss);
    }

    #[test]
    fn radical_modules() {
        let k = Arc::new(BoundQuiverAlgebra::build(Quiver::new(1), vec![], 2, Q).unwrap());
        assert!(radical_module(&k, Side::Left).is_zero());
        assert_eq!(radical_module(&dual_numbers(), Side::Left).dims(), &[1]);
        assert_eq!(radical_module(&a2(), Side::Left).dims(), &[0, 1]);
        assert_eq!(radical_module(&a2(), Side::Right).dims(), &[1, 0]);
    }

    #[test]
    fn hom_examples() {
        let a = a2();
        let s1 = Rep::simple(a.clone(), 0, Side::Left);
        let s2 = Rep::simple(a.clone(), 1, Side::Left);
        assert_eq!(s1.hom_space(&s1).unwrap().len(), 1);
        assert_eq!(s1.hom_space(&s2).unwrap().len(), 0);
        let p1 = Rep::projective(a.clone(), 0, Side::Left);
        assert_eq!(p1.hom_space(&p1).unwrap().len(), 1);
        let z = Rep::zero(a.clone(), Side::Left);
        assert!(p1.hom_space(&z).unwrap().is_empty());
        let r = Rep::simple(a, 0, Side::Right);
        assert_eq!(s1.hom_space(&r).unwrap_err(), RepError::Mismatch);
    }

    #[test]
    fn direct_sums() {
        let a = a2();
        assert!(Rep::direct_sum_of(a.clone(), Side::Left, &[]).is_zero());
        let s = Rep::direct_sum(&[Rep::simple(a.clone(), 0, Side::Left), Rep::simple(a.clone(), 1, Side::Left)])
            .unwrap();
        assert_eq!(s, Rep::top_of_algebra(a.clone(), Side::Left));
        let p = Rep::direct_sum(&[Rep::projective(a.clone(), 0, Side::Left), Rep::projective(a.clone(), 1, Side::Left)])
            .unwrap();
        assert_eq!(p.dims(), &[1, 2]);
        assert_eq!(p, Rep::regular(a, Side::Left));
    }

    #[test]
    fn duality() {
        let a = a2();
        let s = Rep::simple(a.clone(), 0, Side::Left);
        assert_eq!(s.dual(), Rep::simple(a.clone(), 0, Side::Right));
        let p1 = Rep::projective(a.clone(), 0, Side::Left);
        let d = p1.dual();
        assert_eq!(d.side(), Side::Right);
        assert_eq!(d.dims(), p1.dims());
        d.validate().unwrap();
        assert_eq!(d.dual(), p1);
        assert!(Rep::zero(a, Side::Left).dual().is_zero());
    }

    #[test]
    fn literal_round_trip() {
        let d = dual_numbers();
        let reg = Rep::regular(d.clone(), Side::Left);
        let text = reg.to_literal();
        assert_eq!(Rep::parse_literal(d.clone(), &text).unwrap(), reg);
        // x acting by an invertible matrix violates nilpotency
        let err = Rep::parse_literal(d, "MODULE left 1 ; ARROWMAT x = [[1]]").unwrap_err();
        assert_eq!(err, RepError::NotNilpotent(2));
    }

    #[test]
    fn converter_to_opposite() {
        let a = a2();
        let op = Arc::new(a.opposite());
        let r = Rep::projective(a.clone(), 1, Side::Right);
        let l = r.over_opposite(op.clone()).unwrap();
        assert_eq!(l.side(), Side::Left);
        assert_eq!(l, Rep::projective(op, 1, Side::Left));
    }
}
