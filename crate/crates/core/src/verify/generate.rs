//! Seeded algebra generators.
//!
//! A draw that fails admissibility or exceeds the dimension cap is logged
//! and skipped, never repaired. Draws repeating an earlier algebra of the
//! same stream are dropped. The stream gives up after ten times the
//! requested count of attempts.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{BoundQuiverAlgebra, PresentationError, Quiver, Relation};
use crate::dims::commutative_local;
use crate::linalg::{Field, DEFAULT_PRIME};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Linear or cyclic Nakayama algebras from random Kupisch series.
    Nakayama,
    /// Random quiver modulo all paths of length `N`.
    Truncated,
    /// Random quiver modulo random paths and `R^N`.
    Monomial,
    /// One vertex, commuting loops.
    Local,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Nakayama => "nakayama",
            Family::Truncated => "truncated",
            Family::Monomial => "monomial",
            Family::Local => "local",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Family, String> {
        match s {
            "nakayama" => Ok(Family::Nakayama),
            "truncated" => Ok(Family::Truncated),
            "monomial" => Ok(Family::Monomial),
            "local" => Ok(Family::Local),
            _ => Err(format!("unknown family {s:?}")),
        }
    }
}

/// Parameters of one generated family. Sizes are upper limits for the
/// random draws; `max_dim` caps the algebra dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub count: usize,
    pub vertices: usize,
    pub arrows: usize,
    /// For Nakayama algebras the largest Kupisch value.
    pub nilbound: usize,
    /// Probability of including each candidate relation.
    pub density: f64,
    pub seed: u64,
    pub field: Field,
    pub max_dim: usize,
}

impl GeneratorSpec {
    pub fn new(family: Family, count: usize, seed: u64) -> GeneratorSpec {
        let (vertices, arrows, nilbound) = match family {
            Family::Nakayama => (8, 0, 8),
            Family::Truncated => (3, 4, 3),
            Family::Monomial => (4, 5, 4),
            Family::Local => (1, 3, 4),
        };
        GeneratorSpec {
            family,
            count,
            vertices,
            arrows,
            nilbound,
            density: 0.3,
            seed,
            field: Field::Prime(DEFAULT_PRIME),
            max_dim: 60,
        }
    }

    pub fn generate(&self) -> Generator {
        Generator {
            spec: self.clone(),
            rng: ChaCha8Rng::seed_from_u64(self.seed),
            emitted: 0,
            attempts: 0,
            skipped: 0,
            seen: HashSet::new(),
            duplicates: 0,
        }
    }
}

#[derive(Debug, Error)]
pub enum DrawError {
    #[error("not a Kupisch series: {0:?}")]
    Kupisch(Vec<usize>),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("dimension {0} over the cap")]
    TooLarge(usize),
    #[error("too many candidate relations")]
    TooManyPaths,
}

/// Deterministic stream of algebras for one spec.
pub struct Generator {
    spec: GeneratorSpec,
    rng: ChaCha8Rng,
    emitted: usize,
    attempts: usize,
    skipped: usize,
    seen: HashSet<String>,
    duplicates: usize,
}

impl Generator {
    /// Draws skipped so far.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    /// Draws identical to an earlier one, dropped so far.
    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    fn draw(&mut self) -> Result<BoundQuiverAlgebra, DrawError> {
        let s = &self.spec;
        let (field, cap) = (s.field, s.max_dim);
        let a = match s.family {
            Family::Nakayama => {
                let n = self.rng.gen_range(1..=s.vertices.max(1));
                let cyclic = self.rng.gen_bool(0.5);
                let top = s.nilbound.max(2);
                let c = if cyclic { cyclic_kupisch(&mut self.rng, n, top) } else { linear_kupisch(&mut self.rng, n, top) };
                let total: usize = c.iter().sum();
                if total > cap {
                    return Err(DrawError::TooLarge(total));
                }
                kupisch_algebra(&c, cyclic, field)?
            }
            Family::Truncated => {
                let q = random_quiver(&mut self.rng, s.vertices, s.arrows);
                let n = self.rng.gen_range(2..=s.nilbound.max(2));
                truncated_algebra(q, n, field)?
            }
            Family::Monomial => {
                let q = random_quiver(&mut self.rng, s.vertices, s.arrows);
                let n = self.rng.gen_range(2..=s.nilbound.max(2));
                let paths = paths_up_to(&q, n - 1, 5000).ok_or(DrawError::TooManyPaths)?;
                let rels = paths
                    .into_iter()
                    .filter(|p| p.len() >= 2)
                    .filter(|_| self.rng.gen_bool(s.density))
                    .map(|p| Relation::monomial(field, p))
                    .collect();
                BoundQuiverAlgebra::build(q, rels, n, field)?
            }
            Family::Local => self.draw_local()?,
        };
        if a.dim() > cap {
            return Err(DrawError::TooLarge(a.dim()));
        }
        Ok(a)
    }

    fn draw_local(&mut self) -> Result<BoundQuiverAlgebra, DrawError> {
        let s = &self.spec;
        let field = s.field;
        let vars = self.rng.gen_range(1..=s.arrows.max(1));
        let top = s.nilbound.max(2);
        let rng = &mut self.rng;
        let a = match rng.gen_range(0..4) {
            // monomial complete intersection x_i^{a_i}
            0 => {
                let exps: Vec<usize> = (0..vars).map(|_| rng.gen_range(2..=3)).collect();
                let n = exps.iter().map(|e| e - 1).sum::<usize>() + 1;
                let rels = exps
                    .iter()
                    .enumerate()
                    .filter(|&(_, &e)| e < n)
                    .map(|(i, &e)| Relation::monomial(field, vec![i; e]))
                    .collect();
                commutative_local(vars, rels, n.max(2), field)?
            }
            1 => commutative_local(vars, vec![], rng.gen_range(2..=top), field)?,
            // x^2 - c y^2, xy
            2 if vars >= 2 => {
                let c = field.from_i64(rng.gen_range(1..50));
                let rels = vec![
                    Relation { terms: vec![(field.one(), vec![0, 0]), (field.neg(&c), vec![1, 1])] },
                    Relation::monomial(field, vec![0, 1]),
                ];
                commutative_local(2, rels, 3, field)?
            }
            _ => {
                let n = rng.gen_range(2..=top);
                let mut rels = Vec::new();
                for deg in 2..n {
                    for word in monomials(vars, deg) {
                        if rng.gen_bool(s.density) {
                            rels.push(Relation::monomial(field, word));
                        }
                    }
                }
                commutative_local(vars, rels, n, field)?
            }
        };
        Ok(a)
    }
}

impl Iterator for Generator {
    type Item = BoundQuiverAlgebra;

    fn next(&mut self) -> Option<BoundQuiverAlgebra> {
        while self.emitted < self.spec.count && self.attempts < 10 * self.spec.count {
            self.attempts += 1;
            match self.draw() {
                Ok(a) if !self.seen.insert(a.fingerprint()) => self.duplicates += 1,
                Ok(a) => {
                    self.emitted += 1;
                    return Some(a);
                }
                Err(e) => {
                    self.skipped += 1;
                    log::debug!("{} draw {} skipped: {e}", self.spec.family, self.attempts);
                }
            }
        }
        None
    }
}

/// The Nakayama algebra whose indecomposable projective at `i` has
/// length `c[i]`. Vertex `i` has one arrow to `i + 1` (mod `n` when
/// `cyclic`).
pub fn kupisch_algebra(c: &[usize], cyclic: bool, field: Field) -> Result<BoundQuiverAlgebra, DrawError> {
    let n = c.len();
    if !is_kupisch(c, cyclic) {
        return Err(DrawError::Kupisch(c.to_vec()));
    }
    let mut q = Quiver::new(n);
    let arrows = if cyclic { n } else { n - 1 };
    for i in 0..arrows {
        q.arrow(&format!("a{}", i + 1), i, (i + 1) % n);
    }
    let nb = c.iter().copied().max().unwrap_or(1).max(2);
    let mut rels = Vec::new();
    for i in 0..n {
        let next = if cyclic { Some(c[(i + 1) % n]) } else { c.get(i + 1).copied() };
        let exists = cyclic || i + c[i] < n;
        // implied by the relation at the next vertex, or by R^N
        if !exists || next == Some(c[i] - 1) || c[i] >= nb {
            continue;
        }
        rels.push(Relation::monomial(field, (i..i + c[i]).map(|j| j % n).collect()));
    }
    Ok(BoundQuiverAlgebra::build(q, rels, nb, field)?)
}

fn is_kupisch(c: &[usize], cyclic: bool) -> bool {
    let n = c.len();
    if n == 0 {
        return false;
    }
    if cyclic {
        (0..n).all(|i| c[i] >= 2 && c[(i + 1) % n] + 1 >= c[i])
    } else {
        c[n - 1] == 1 && (0..n - 1).all(|i| c[i] >= 2 && c[i + 1] + 1 >= c[i])
    }
}

fn linear_kupisch(rng: &mut ChaCha8Rng, n: usize, top: usize) -> Vec<usize> {
    let mut c = vec![1; n];
    for i in (0..n.saturating_sub(1)).rev() {
        c[i] = rng.gen_range(2..=(c[i + 1] + 1).min(top));
    }
    c
}

/// May violate the wrap-around condition; such draws are rejected.
fn cyclic_kupisch(rng: &mut ChaCha8Rng, n: usize, top: usize) -> Vec<usize> {
    let mut c = vec![rng.gen_range(2..=top)];
    for i in 1..n {
        let lo = (c[i - 1] - 1).max(2);
        c.push(rng.gen_range(lo..=top.max(lo)));
    }
    c
}

/// `kQ / R^n`.
pub fn truncated_algebra(q: Quiver, n: usize, field: Field) -> Result<BoundQuiverAlgebra, PresentationError> {
    BoundQuiverAlgebra::build(q, vec![], n, field)
}

fn random_quiver(rng: &mut ChaCha8Rng, vertices: usize, arrows: usize) -> Quiver {
    let v = rng.gen_range(1..=vertices.max(1));
    let m = rng.gen_range(1..=arrows.max(1));
    let mut q = Quiver::new(v);
    for i in 0..m {
        let (s, t) = (rng.gen_range(0..v), rng.gen_range(0..v));
        q.arrow(&format!("a{}", i + 1), s, t);
    }
    q
}

/// All paths of length 1 to `len`, in a fixed order; `None` past `limit`.
fn paths_up_to(q: &Quiver, len: usize, limit: usize) -> Option<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = (0..q.arrows.len()).map(|a| vec![a]).collect();
    for _ in 1..=len {
        out.extend(layer.iter().cloned());
        if out.len() > limit {
            return None;
        }
        let mut next = Vec::new();
        for p in &layer {
            let end = q.arrows[*p.last().expect("nonempty")].target;
            for (a, arr) in q.arrows.iter().enumerate() {
                if arr.source == end {
                    let mut e = p.clone();
                    e.push(a);
                    next.push(e);
                }
            }
        }
        layer = next;
    }
    Some(out)
}

/// Nondecreasing words of length `deg` in `vars` letters.
fn monomials(vars: usize, deg: usize) -> Vec<Vec<usize>> {
    if deg == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for w in monomials(vars, deg - 1) {
        let start = w.last().copied().unwrap_or(0);
        for x in start..vars {
            let mut e = w.clone();
            e.push(x);
            out.push(e);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_nakayama_is_dual_numbers() {
        let a = kupisch_algebra(&[2], true, Field::Rational).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.arrow_count(), 1);
        assert!(kupisch_algebra(&[3, 1], false, Field::Rational).is_err());
    }

    #[test]
    fn kupisch_dimensions() {
        for (c, cyclic) in [(vec![3, 2, 1], false), (vec![2, 2, 1], false), (vec![3, 3], true), (vec![2, 3, 3], true)] {
            let a = kupisch_algebra(&c, cyclic, Field::Prime(7)).unwrap();
            assert_eq!(a.dim(), c.iter().sum::<usize>(), "{c:?}");
        }
    }

    #[test]
    fn truncated_a2() {
        let mut q = Quiver::new(2);
        q.arrow("a", 0, 1);
        assert_eq!(truncated_algebra(q, 2, Field::Rational).unwrap().dim(), 3);
    }

    #[test]
    fn streams_are_deterministic() {
        for family in [Family::Nakayama, Family::Truncated, Family::Monomial, Family::Local] {
            let spec = GeneratorSpec::new(family, 20, 9);
            let a: Vec<String> = spec.generate().map(|a| a.fingerprint()).collect();
            let b: Vec<String> = spec.generate().map(|a| a.fingerprint()).collect();
            assert_eq!(a, b);
            assert!(!a.is_empty());
        }
    }

    #[test]
    fn monomial_words() {
        assert_eq!(monomials(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }
}
