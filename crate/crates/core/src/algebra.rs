//! Bound quiver algebras `kQ / I` with `R^N ⊆ I ⊆ R^2`.
//!
//! Paths are stored as arrow sequences in application order: the path
//! `b*a` of the text format (first `a`, then `b`) is `[a, b]`. Products
//! follow the same convention, so `x·y` means "first `y`, then `x`" and is
//! nonzero only when `target(y) = source(x)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::linalg::{Field, FieldError, Mat, Scalar};

/// Upper bound on the number of paths of length below the nilbound.
pub const MAX_PATHS: usize = 20_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("nilbound must be at least 2, got {0}")]
    NilboundTooSmall(usize),
    #[error("arrow {name} has an endpoint outside 0..{vertices}")]
    BadArrow { name: String, vertices: usize },
    #[error("relation {index} is empty")]
    EmptyRelation { index: usize },
    #[error("relation {index} contains a zero coefficient")]
    ZeroCoefficient { index: usize },
    #[error("relation {index} contains a non-composable arrow sequence")]
    NotAPath { index: usize },
    #[error("relation {index} mixes non-parallel paths")]
    NotParallel { index: usize },
    #[error("relation {index} has a path of length {len}, outside [2, {nilbound})")]
    BadLength { index: usize, len: usize, nilbound: usize },
    #[error("more than {MAX_PATHS} paths below the nilbound")]
    TooLarge,
    #[error("multiplication is not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {source}")]
    Scalar { line: usize, source: FieldError },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Quiver {
    pub vertices: usize,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: usize) -> Quiver {
        Quiver { vertices, arrows: Vec::new() }
    }

    /// Adds an arrow and returns its index.
    pub fn arrow(&mut self, name: &str, source: usize, target: usize) -> usize {
        self.arrows.push(Arrow { name: name.to_string(), source, target });
        self.arrows.len() - 1
    }

    pub fn reversed(&self) -> Quiver {
        Quiver {
            vertices: self.vertices,
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source })
                .collect(),
        }
    }

    /// Connectedness of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        if self.vertices <= 1 {
            return true;
        }
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for a in &self.arrows {
            let (x, y) = (find(&mut parent, a.source), find(&mut parent, a.target));
            parent[x] = y;
        }
        let root = find(&mut parent, 0);
        (0..self.vertices).all(|v| find(&mut parent, v) == root)
    }
}

/// A path: arrows in application order, with explicit endpoints so that
/// trivial paths carry their vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    fn reversed(&self) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.reverse();
        Path { source: self.target, target: self.source, arrows }
    }
}

/// A linear combination of parallel paths, each given as an arrow sequence
/// in application order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Scalar, Vec<usize>)>,
}

impl Relation {
    pub fn monomial(field: Field, arrows: Vec<usize>) -> Relation {
        Relation { terms: vec![(field.one(), arrows)] }
    }
}

/// Sparse algebra element: `(basis index, coefficient)` pairs.
pub type Element = Vec<(usize, Scalar)>;

#[derive(Clone)]
pub struct BoundQuiverAlgebra {
    field: Field,
    quiver: Quiver,
    relations: Vec<Relation>,
    nilbound: usize,
    basis: Vec<Path>,
    index: HashMap<(usize, Vec<usize>), usize>,
    table: Vec<Element>,
    between: Vec<Vec<Vec<usize>>>,
    position: Vec<usize>,
    opposite: OnceLock<Box<BoundQuiverAlgebra>>,
}

impl fmt::Debug for BoundQuiverAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundQuiverAlgebra")
            .field("field", &self.field)
            .field("vertices", &self.quiver.vertices)
            .field("arrows", &self.quiver.arrows.len())
            .field("nilbound", &self.nilbound)
            .field("dim", &self.basis.len())
            .finish()
    }
}

impl PartialEq for BoundQuiverAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.quiver == other.quiver
            && self.nilbound == other.nilbound
            && self.basis == other.basis
            && self.table == other.table
    }
}

fn path_valid(q: &Quiver, arrows: &[usize]) -> Option<(usize, usize)> {
    let first = q.arrows.get(*arrows.first()?)?;
    let mut cur = first.target;
    for &a in &arrows[1..] {
        let arr = q.arrows.get(a)?;
        if arr.source != cur {
            return None;
        }
        cur = arr.target;
    }
    Some((first.source, cur))
}

impl BoundQuiverAlgebra {
    /// Builds `kQ / (⟨relations⟩ + R^nilbound)` with an exact normal-form
    /// basis and structure constants.
    pub fn build(
        quiver: Quiver,
        relations: Vec<Relation>,
        nilbound: usize,
        field: Field,
    ) -> Result<BoundQuiverAlgebra, PresentationError> {
        if nilbound < 2 {
            return Err(PresentationError::NilboundTooSmall(nilbound));
        }
        for a in &quiver.arrows {
            if a.source >= quiver.vertices || a.target >= quiver.vertices {
                return Err(PresentationError::BadArrow { name: a.name.clone(), vertices: quiver.vertices });
            }
        }
        let mut rel_ends = Vec::with_capacity(relations.len());
        for (index, r) in relations.iter().enumerate() {
            if r.terms.is_empty() {
                return Err(PresentationError::EmptyRelation { index });
            }
            let mut ends = None;
            for (c, p) in &r.terms {
                if field.is_zero(c) {
                    return Err(PresentationError::ZeroCoefficient { index });
                }
                let e = path_valid(&quiver, p).ok_or(PresentationError::NotAPath { index })?;
                if p.len() < 2 || p.len() >= nilbound {
                    return Err(PresentationError::BadLength { index, len: p.len(), nilbound });
                }
                match ends {
                    None => ends = Some(e),
                    Some(prev) if prev != e => return Err(PresentationError::NotParallel { index }),
                    _ => {}
                }
            }
            rel_ends.push(ends.expect("nonempty"));
        }

        // All paths of length < nilbound, by length then lexicographically.
        let mut paths: Vec<Path> = (0..quiver.vertices).map(Path::trivial).collect();
        let mut frontier: Vec<Path> = paths.clone();
        for _ in 1..nilbound {
            let mut next = Vec::new();
            for p in &frontier {
                for (ai, a) in quiver.arrows.iter().enumerate() {
                    if a.source == p.target {
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        next.push(Path { source: p.source, target: a.target, arrows });
                    }
                }
            }
            next.sort_by(|x, y| x.arrows.cmp(&y.arrows));
            if paths.len() + next.len() > MAX_PATHS {
                return Err(PresentationError::TooLarge);
            }
            paths.extend(next.iter().cloned());
            frontier = next;
        }
        let n = paths.len();
        // Column c holds path n-1-c, so longer paths are eliminated first.
        let col_of = |i: usize| n - 1 - i;
        let path_pos: HashMap<(usize, Vec<usize>), usize> =
            paths.iter().enumerate().map(|(i, p)| ((p.source, p.arrows.clone()), i)).collect();

        // Spanning set of the ideal modulo R^N: p · r · q.
        let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
        for (ri, r) in relations.iter().enumerate() {
            let (rs, rt) = rel_ends[ri];
            let min_len = r.terms.iter().map(|(_, p)| p.len()).min().unwrap_or(0);
            for q in paths.iter().filter(|q| q.target == rs && q.len() + min_len < nilbound) {
                for p in paths.iter().filter(|p| p.source == rt && p.len() + q.len() + min_len < nilbound) {
                    let mut row = Vec::new();
                    for (c, t) in &r.terms {
                        let len = q.len() + t.len() + p.len();
                        if len >= nilbound {
                            continue;
                        }
                        let mut arrows = q.arrows.clone();
                        arrows.extend_from_slice(t);
                        arrows.extend_from_slice(&p.arrows);
                        let i = path_pos[&(q.source, arrows)];
                        row.push((col_of(i), c.clone()));
                    }
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
        let mut ideal = Mat::zeros(field, rows.len(), n);
        for (ri, row) in rows.iter().enumerate() {
            for (c, s) in row {
                let cur = ideal.get(ri, *c);
                ideal.set(ri, *c, field.add(&cur, s));
            }
        }
        let (rref, pivots) = ideal.rref();
        let mut pivot_row = vec![None; n];
        for (r, &c) in pivots.iter().enumerate() {
            pivot_row[c] = Some(r);
        }

        let basis_paths: Vec<usize> = (0..n).filter(|&i| pivot_row[col_of(i)].is_none()).collect();
        let basis: Vec<Path> = basis_paths.iter().map(|&i| paths[i].clone()).collect();
        let mut basis_of_path = vec![usize::MAX; n];
        for (b, &i) in basis_paths.iter().enumerate() {
            basis_of_path[i] = b;
        }

        let reduce = |source: usize, arrows: Vec<usize>| -> Element {
            if arrows.len() >= nilbound {
                return Vec::new();
            }
            let i = path_pos[&(source, arrows)];
            match pivot_row[col_of(i)] {
                None => vec![(basis_of_path[i], field.one())],
                Some(r) => {
                    let mut out: Element = basis_paths
                        .iter()
                        .enumerate()
                        .filter(|(_, &j)| !rref.is_entry_zero(r, col_of(j)))
                        .map(|(b, &j)| (b, field.neg(&rref.get(r, col_of(j)))))
                        .collect();
                    out.sort_by_key(|(b, _)| *b);
                    out
                }
            }
        };

        let d = basis.len();
        let mut table = vec![Vec::new(); d * d];
        for (x, px) in basis.iter().enumerate() {
            for (y, py) in basis.iter().enumerate() {
                if py.target != px.source {
                    continue;
                }
                let mut arrows = py.arrows.clone();
                arrows.extend_from_slice(&px.arrows);
                table[x * d + y] = reduce(py.source, arrows);
            }
        }

        let alg = BoundQuiverAlgebra::assemble(field, quiver, relations, nilbound, basis, table);
        alg.check_associative()?;
        Ok(alg)
    }

    fn assemble(
        field: Field,
        quiver: Quiver,
        relations: Vec<Relation>,
        nilbound: usize,
        basis: Vec<Path>,
        table: Vec<Element>,
    ) -> BoundQuiverAlgebra {
        let v = quiver.vertices;
        let mut between = vec![vec![Vec::new(); v]; v];
        let mut position = vec![0; basis.len()];
        for (b, p) in basis.iter().enumerate() {
            let list: &mut Vec<usize> = &mut between[p.source][p.target];
            position[b] = list.len();
            list.push(b);
        }
        let index = basis.iter().enumerate().map(|(b, p)| ((p.source, p.arrows.clone()), b)).collect();
        BoundQuiverAlgebra {
            field,
            quiver,
            relations,
            nilbound,
            basis,
            index,
            table,
            between,
            position,
            opposite: OnceLock::new(),
        }
    }

    fn check_associative(&self) -> Result<(), PresentationError> {
        let d = self.dim();
        for x in 0..d {
            for y in 0..d {
                if self.table[x * d + y].is_empty() {
                    // (xy)z = 0; x(yz) vanishes too unless the table is broken
                    for z in 0..d {
                        if self.basis[z].target == self.basis[y].source
                            && !self.mul_elements(&[(x, self.field.one())], self.product(y, z)).is_empty()
                        {
                            return Err(PresentationError::NotAssociative(x, y, z));
                        }
                    }
                    continue;
                }
                for z in 0..d {
                    if self.basis[z].target != self.basis[y].source {
                        continue;
                    }
                    let left = self.mul_elements(self.product(x, y), &[(z, self.field.one())]);
                    let right = self.mul_elements(&[(x, self.field.one())], self.product(y, z));
                    if left != right {
                        return Err(PresentationError::NotAssociative(x, y, z));
                    }
                }
            }
        }
        Ok(())
    }

    /// Product of two sparse elements, normalised (sorted, no zeros).
    pub fn mul_elements(&self, a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> Element {
        let f = self.field;
        let mut acc: Vec<Scalar> = vec![f.zero(); self.dim()];
        let mut touched = vec![false; self.dim()];
        for (x, cx) in a {
            for (y, cy) in b {
                let c = f.mul(cx, cy);
                for (z, cz) in self.product(*x, *y) {
                    acc[*z] = f.add(&acc[*z], &f.mul(&c, cz));
                    touched[*z] = true;
                }
            }
        }
        (0..self.dim())
            .filter(|&z| touched[z] && !f.is_zero(&acc[z]))
            .map(|z| (z, acc[z].clone()))
            .collect()
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }
    pub fn nilbound(&self) -> usize {
        self.nilbound
    }
    pub fn vertex_count(&self) -> usize {
        self.quiver.vertices
    }
    pub fn arrow_count(&self) -> usize {
        self.quiver.arrows.len()
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    /// Dimension of the Jacobson radical (span of nontrivial paths).
    pub fn radical_dim(&self) -> usize {
        self.dim() - self.vertex_count()
    }

    pub fn is_semisimple(&self) -> bool {
        self.quiver.arrows.is_empty()
    }

    /// Structure constants of `basis[x] · basis[y]`.
    pub fn product(&self, x: usize, y: usize) -> &[(usize, Scalar)] {
        &self.table[x * self.dim() + y]
    }

    /// Basis index of the vertex idempotent `e_v`.
    pub fn idempotent(&self, v: usize) -> usize {
        self.index[&(v, Vec::new())]
    }

    /// Basis index of an arrow (arrows are never reduced away).
    pub fn arrow_element(&self, a: usize) -> usize {
        self.index[&(self.quiver.arrows[a].source, vec![a])]
    }

    /// Basis index of a path if it is one of the normal-form basis paths.
    pub fn basis_index(&self, source: usize, arrows: &[usize]) -> Option<usize> {
        self.index.get(&(source, arrows.to_vec())).copied()
    }

    /// Basis paths from `source` to `target`, in basis order.
    pub fn paths_between(&self, source: usize, target: usize) -> &[usize] {
        &self.between[source][target]
    }

    /// Position of basis element `b` within its `paths_between` list.
    pub fn position(&self, b: usize) -> usize {
        self.position[b]
    }

    pub fn is_connected(&self) -> bool {
        self.quiver.is_connected()
    }

    pub fn is_commutative(&self) -> bool {
        let d = self.dim();
        (0..d).all(|x| (0..x).all(|y| self.product(x, y) == self.product(y, x)))
    }

    /// The opposite algebra, built once and cached.
    pub fn op(&self) -> &BoundQuiverAlgebra {
        self.opposite.get_or_init(|| Box::new(self.build_opposite()))
    }

    /// An owned copy of the opposite algebra.
    pub fn opposite(&self) -> BoundQuiverAlgebra {
        let mut op = self.op().clone();
        op.opposite = OnceLock::new();
        op
    }

    fn build_opposite(&self) -> BoundQuiverAlgebra {
        let d = self.dim();
        let basis = self.basis.iter().map(Path::reversed).collect();
        let relations = self
            .relations
            .iter()
            .map(|r| Relation {
                terms: r
                    .terms
                    .iter()
                    .map(|(c, p)| {
                        let mut p = p.clone();
                        p.reverse();
                        (c.clone(), p)
                    })
                    .collect(),
            })
            .collect();
        let mut table = vec![Vec::new(); d * d];
        for x in 0..d {
            for y in 0..d {
                table[x * d + y] = self.table[y * d + x].clone();
            }
        }
        BoundQuiverAlgebra::assemble(self.field, self.quiver.reversed(), relations, self.nilbound, basis, table)
    }

    /// Definition text in the algebra file format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("FIELD {}\n", self.field));
        s.push_str(&format!("NILBOUND {}\n", self.nilbound));
        s.push_str(&format!("VERTICES {}\n", self.quiver.vertices));
        for a in &self.quiver.arrows {
            s.push_str(&format!("ARROW {} {} {}\n", a.name, a.source + 1, a.target + 1));
        }
        for r in &self.relations {
            let terms: Vec<String> = r
                .terms
                .iter()
                .map(|(c, p)| {
                    let names: Vec<&str> = p.iter().rev().map(|&a| self.quiver.arrows[a].name.as_str()).collect();
                    format!("{}*{}", c, names.join("*"))
                })
                .collect();
            s.push_str(&format!("REL {}\n", terms.join(" + ")));
        }
        s
    }

    /// SHA-256 of the definition text, hex encoded.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }

    /// Parses the algebra file format.
    pub fn parse(text: &str) -> Result<BoundQuiverAlgebra, ParseError> {
        let syntax = |line: usize, column: usize, message: &str| ParseError::Syntax {
            line,
            column,
            message: message.to_string(),
        };
        let mut field = None;
        let mut nilbound = None;
        let mut quiver: Option<Quiver> = None;
        let mut names: HashMap<String, usize> = HashMap::new();
        let mut rel_lines: Vec<(usize, String)> = Vec::new();

        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let col = line.len() - line.trim_start().len() + 1;
            let (kw, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
            let rest = rest.trim();
            let arg_col = col + kw.len() + 1;
            match kw {
                "FIELD" => {
                    field = Some(if rest == "Q" {
                        Field::Rational
                    } else {
                        let p: u64 = rest.parse().map_err(|_| syntax(line_no, arg_col, "expected a prime or Q"))?;
                        Field::prime(p).map_err(|e| ParseError::Scalar { line: line_no, source: e })?
                    });
                }
                "NILBOUND" => {
                    nilbound =
                        Some(rest.parse::<usize>().map_err(|_| syntax(line_no, arg_col, "expected an integer"))?);
                }
                "VERTICES" => {
                    let v = rest.parse::<usize>().map_err(|_| syntax(line_no, arg_col, "expected an integer"))?;
                    quiver = Some(Quiver::new(v));
                }
                "ARROW" => {
                    let q = quiver.as_mut().ok_or_else(|| syntax(line_no, col, "ARROW before VERTICES"))?;
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    if parts.len() != 3 {
                        return Err(syntax(line_no, arg_col, "expected: ARROW name source target"));
                    }
                    let name = parts[0];
                    if !name.starts_with(|c: char| c.is_ascii_alphabetic())
                        || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    {
                        return Err(syntax(line_no, arg_col, "arrow names are alphanumeric and start with a letter"));
                    }
                    if names.contains_key(name) {
                        return Err(syntax(line_no, arg_col, "duplicate arrow name"));
                    }
                    let endpoint = |s: &str| -> Result<usize, ParseError> {
                        let v: usize = s.parse().map_err(|_| syntax(line_no, arg_col, "bad vertex"))?;
                        if v == 0 || v > q.vertices {
                            return Err(syntax(line_no, arg_col, "vertex out of range"));
                        }
                        Ok(v - 1)
                    };
                    let (s, t) = (endpoint(parts[1])?, endpoint(parts[2])?);
                    names.insert(name.to_string(), q.arrows.len());
                    q.arrow(name, s, t);
                }
                "REL" => rel_lines.push((line_no, rest.to_string())),
                _ => return Err(syntax(line_no, col, &format!("unknown keyword {kw}"))),
            }
        }
        let field = field.ok_or_else(|| syntax(1, 1, "missing FIELD"))?;
        let nilbound = nilbound.ok_or_else(|| syntax(1, 1, "missing NILBOUND"))?;
        let quiver = quiver.ok_or_else(|| syntax(1, 1, "missing VERTICES"))?;

        let mut relations = Vec::new();
        for (line_no, body) in rel_lines {
            relations.push(parse_relation(&body, line_no, field, &names)?);
        }
        Ok(BoundQuiverAlgebra::build(quiver, relations, nilbound, field)?)
    }
}

fn parse_relation(
    body: &str,
    line: usize,
    field: Field,
    names: &HashMap<String, usize>,
) -> Result<Relation, ParseError> {
    let normalized = body.replace(" - ", " + -");
    let mut terms = Vec::new();
    for term in normalized.split('+') {
        let term = term.trim();
        let column = body.find(term.trim_start_matches('-')).unwrap_or(0) + 5;
        if term.is_empty() {
            return Err(ParseError::Syntax { line, column, message: "empty term".into() });
        }
        let (neg, term) = match term.strip_prefix('-') {
            Some(t) => (true, t.trim()),
            None => (false, term),
        };
        let mut factors: Vec<&str> = term.split('*').map(str::trim).collect();
        let mut coef = field.one();
        if factors.first().is_some_and(|f| f.starts_with(|c: char| c.is_ascii_digit())) {
            coef = field.parse_scalar(factors[0]).map_err(|e| ParseError::Scalar { line, source: e })?;
            factors.remove(0);
        }
        if neg {
            coef = field.neg(&coef);
        }
        let mut arrows = Vec::with_capacity(factors.len());
        // written right-to-left; stored in application order
        for f in factors.iter().rev() {
            let a = names.get(*f).ok_or_else(|| ParseError::Syntax {
                line,
                column,
                message: format!("unknown arrow {f:?}"),
            })?;
            arrows.push(*a);
        }
        terms.push((coef, arrows));
    }
    Ok(Relation { terms })
}
