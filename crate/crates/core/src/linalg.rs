//! Exact dense linear algebra over prime fields and the rationals.
//!
//! A [`Mat`] carries its [`Field`] and stores entries in a representation
//! specialised to that field; the algorithms themselves are written once,
//! generically over the internal [`Arith`] trait, and dispatched per call.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

macro_rules! arith {
    ($field:expr, $k:ident => $body:expr) => {
        match $field {
            Field::Prime(p) => {
                let $k = &ModP(p as u64);
                $body
            }
            Field::Rational => {
                let $k = &Rat;
                $body
            }
        }
    };
}

/// Default prime used by generated algebras.
pub const DEFAULT_PRIME: u32 = 1009;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
    #[error("unknown field {0:?}; expected Q or a prime")]
    BadField(String),
    #[error("division by zero in scalar {0:?}")]
    ZeroDenominator(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Field {
    /// The prime field F_p.
    Prime(u32),
    /// The rationals, with arbitrary precision.
    Rational,
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if p < 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Field::Prime(_) => Scalar::Fp(0),
            Field::Rational => Scalar::Q(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, x: i64) -> Scalar {
        match *self {
            Field::Prime(p) => Scalar::Fp(x.rem_euclid(p as i64) as u32),
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(x))),
        }
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Fp(v) => *v == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        arith!(*self, k => k.wrap_scalar(k.add(k.unwrap_scalar(a), k.unwrap_scalar(b))))
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        arith!(*self, k => k.wrap_scalar(k.sub(k.unwrap_scalar(a), k.unwrap_scalar(b))))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        arith!(*self, k => k.wrap_scalar(k.mul(k.unwrap_scalar(a), k.unwrap_scalar(b))))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        arith!(*self, k => k.wrap_scalar(k.neg(k.unwrap_scalar(a))))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        Some(arith!(*self, k => k.wrap_scalar(k.inv(k.unwrap_scalar(a)))))
    }

    /// Parses `n`, `-n` or `n/m`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, FieldError> {
        let s = s.trim();
        let bad = || FieldError::BadScalar(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        match *self {
            Field::Prime(p) => {
                let p_big = BigInt::from(p);
                let reduce = |x: &BigInt| -> u32 {
                    let r = ((x % &p_big) + &p_big) % &p_big;
                    u32::try_from(r).expect("residue fits")
                };
                let d = reduce(&den);
                if d == 0 {
                    return Err(FieldError::ZeroDenominator(s.to_string()));
                }
                let f = Field::Prime(p);
                let inv = f.inv(&Scalar::Fp(d)).expect("nonzero");
                Ok(f.mul(&Scalar::Fp(reduce(&num)), &inv))
            }
            Field::Rational => {
                if den.is_zero() {
                    return Err(FieldError::ZeroDenominator(s.to_string()));
                }
                Ok(Scalar::Q(BigRational::new(num, den)))
            }
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;

    /// `Q` or a prime.
    fn from_str(s: &str) -> Result<Field, FieldError> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        let p: u64 = s.parse().map_err(|_| FieldError::BadField(s.to_string()))?;
        Field::prime(p)
    }
}

impl TryFrom<String> for Field {
    type Error = FieldError;

    fn try_from(s: String) -> Result<Field, FieldError> {
        s.parse()
    }
}

impl From<Field> for String {
    fn from(f: Field) -> String {
        f.to_string()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "{p}"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

/// A field element. Prime-field values are reduced; rationals are in lowest
/// terms with positive denominator (maintained by `BigRational`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp(u32),
    Q(BigRational),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp(v) => write!(f, "{v}"),
            Scalar::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// Field kernels

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Data {
    Fp(Vec<u32>),
    Q(Vec<BigRational>),
}

trait Arith {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    /// `acc -= a * b`
    fn sub_mul_assign(&self, acc: &mut Self::E, a: &Self::E, b: &Self::E);
    /// `acc += a * b`
    fn add_mul_assign(&self, acc: &mut Self::E, a: &Self::E, b: &Self::E);
    fn data<'a>(&self, d: &'a Data) -> &'a [Self::E];
    fn data_mut<'a>(&self, d: &'a mut Data) -> &'a mut Vec<Self::E>;
    fn wrap(&self, v: Vec<Self::E>) -> Data;
    fn wrap_scalar(&self, e: Self::E) -> Scalar;
    fn unwrap_scalar<'a>(&self, s: &'a Scalar) -> &'a Self::E;
}

struct ModP(pub u64);
struct Rat;

impl Arith for ModP {
    type E = u32;
    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.0) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.0 - *b as u64) % self.0) as u32
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.0) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        ((self.0 - *a as u64) % self.0) as u32
    }
    fn inv(&self, a: &u32) -> u32 {
        // Fermat: a^(p-2)
        let mut base = *a as u64 % self.0;
        let mut exp = self.0 - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            exp >>= 1;
        }
        acc as u32
    }
    #[inline]
    fn sub_mul_assign(&self, acc: &mut u32, a: &u32, b: &u32) {
        let prod = (*a as u64 * *b as u64) % self.0;
        *acc = ((*acc as u64 + self.0 - prod) % self.0) as u32;
    }
    #[inline]
    fn add_mul_assign(&self, acc: &mut u32, a: &u32, b: &u32) {
        *acc = ((*acc as u64 + *a as u64 * *b as u64) % self.0) as u32;
    }
    fn data<'a>(&self, d: &'a Data) -> &'a [u32] {
        match d {
            Data::Fp(v) => v,
            Data::Q(_) => unreachable!("field mismatch"),
        }
    }
    fn data_mut<'a>(&self, d: &'a mut Data) -> &'a mut Vec<u32> {
        match d {
            Data::Fp(v) => v,
            Data::Q(_) => unreachable!("field mismatch"),
        }
    }
    fn wrap(&self, v: Vec<u32>) -> Data {
        Data::Fp(v)
    }
    fn wrap_scalar(&self, e: u32) -> Scalar {
        Scalar::Fp(e)
    }
    fn unwrap_scalar<'a>(&self, s: &'a Scalar) -> &'a u32 {
        match s {
            Scalar::Fp(v) => v,
            Scalar::Q(_) => panic!("rational scalar used in a prime field"),
        }
    }
}

impl Arith for Rat {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn sub_mul_assign(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        if !a.is_zero() && !b.is_zero() {
            *acc -= a * b;
        }
    }
    fn add_mul_assign(&self, acc: &mut BigRational, a: &BigRational, b: &BigRational) {
        if !a.is_zero() && !b.is_zero() {
            *acc += a * b;
        }
    }
    fn data<'a>(&self, d: &'a Data) -> &'a [BigRational] {
        match d {
            Data::Q(v) => v,
            Data::Fp(_) => unreachable!("field mismatch"),
        }
    }
    fn data_mut<'a>(&self, d: &'a mut Data) -> &'a mut Vec<BigRational> {
        match d {
            Data::Q(v) => v,
            Data::Fp(_) => unreachable!("field mismatch"),
        }
    }
    fn wrap(&self, v: Vec<BigRational>) -> Data {
        Data::Q(v)
    }
    fn wrap_scalar(&self, e: BigRational) -> Scalar {
        Scalar::Q(e)
    }
    fn unwrap_scalar<'a>(&self, s: &'a Scalar) -> &'a BigRational {
        match s {
            Scalar::Q(q) => q,
            Scalar::Fp(_) => panic!("prime-field scalar used over Q"),
        }
    }
}

// ---------------------------------------------------------------------------
// Matrices

/// Dense row-major matrix over a [`Field`]. Zero-row or zero-column shapes
/// are legal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Data,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat<{}>{}x{}{}", self.field, self.rows, self.cols, self)
    }
}

impl fmt::Display for Mat {
    /// `[[a,b],[c,d]]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

fn zero_data(field: Field, len: usize) -> Data {
    match field {
        Field::Prime(_) => Data::Fp(vec![0; len]),
        Field::Rational => Data::Q(vec![BigRational::zero(); len]),
    }
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: zero_data(field, rows * cols) }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_i64(field: Field, rows: usize, cols: usize, entries: &[i64]) -> Mat {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        let mut m = Mat::zeros(field, rows, cols);
        for (i, &x) in entries.iter().enumerate() {
            m.set(i / cols.max(1), i % cols.max(1), field.from_i64(x));
        }
        m
    }

    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let flat: Vec<i64> = rows.iter().flat_map(|row| {
            assert_eq!(row.len(), c, "ragged rows");
            row.iter().copied()
        }).collect();
        Mat::from_i64(field, r, c, &flat)
    }

    pub fn from_scalars(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Mat {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        let data = arith!(field, k => k.wrap(entries.iter().map(|s| k.unwrap_scalar(s).clone()).collect()));
        Mat { field, rows, cols, data }
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        let i = r * self.cols + c;
        match &self.data {
            Data::Fp(v) => Scalar::Fp(v[i]),
            Data::Q(v) => Scalar::Q(v[i].clone()),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, s: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        let i = r * self.cols + c;
        arith!(self.field, k => { k.data_mut(&mut self.data)[i] = k.unwrap_scalar(&s).clone(); })
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Data::Fp(v) => v.iter().all(|x| *x == 0),
            Data::Q(v) => v.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_entry_zero(&self, r: usize, c: usize) -> bool {
        let i = r * self.cols + c;
        match &self.data {
            Data::Fp(v) => v[i] == 0,
            Data::Q(v) => v[i].is_zero(),
        }
    }

    pub fn transpose(&self) -> Mat {
        arith!(self.field, k => {
            let d = k.data(&self.data);
            let mut out = Vec::with_capacity(d.len());
            for c in 0..self.cols {
                for r in 0..self.rows {
                    out.push(d[r * self.cols + c].clone());
                }
            }
            Mat { field: self.field, rows: self.cols, cols: self.rows, data: k.wrap(out) }
        })
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        arith!(self.field, k => mul_impl(k, self, other))
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.zip(other, |k, a, b| k.add(a, b))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.zip(other, |k, a, b| k.sub(a, b))
    }

    pub fn neg(&self) -> Mat {
        arith!(self.field, k => {
            let d = k.data(&self.data).iter().map(|x| k.neg(x)).collect();
            Mat { field: self.field, rows: self.rows, cols: self.cols, data: k.wrap(d) }
        })
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        arith!(self.field, k => {
            let s = k.unwrap_scalar(s);
            let d = k.data(&self.data).iter().map(|x| k.mul(x, s)).collect();
            Mat { field: self.field, rows: self.rows, cols: self.cols, data: k.wrap(d) }
        })
    }

    fn zip(&self, other: &Mat, op: impl Fn(&dyn DynArith, &Scalar, &Scalar) -> Scalar) -> Mat {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let f = self.field;
        let entries = (0..self.rows * self.cols)
            .map(|i| op(&f, &self.get(i / self.cols, i % self.cols), &other.get(i / self.cols, i % self.cols)))
            .collect();
        Mat::from_scalars(f, self.rows, self.cols, entries)
    }

    /// Adds `s * other` into `self` in place.
    pub fn add_scaled(&mut self, other: &Mat, s: &Scalar) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        arith!(self.field, k => {
            let s = k.unwrap_scalar(s);
            if k.is_zero(s) {
                return;
            }
            let src = k.data(&other.data);
            let dst = k.data_mut(&mut self.data);
            for (d, x) in dst.iter_mut().zip(src) {
                if !k.is_zero(x) {
                    k.add_mul_assign(d, x, s);
                }
            }
        })
    }

    /// Horizontal concatenation; all parts must share the row count.
    pub fn hstack(field: Field, rows: usize, parts: &[&Mat]) -> Mat {
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "row mismatch in hstack");
            out.paste(0, off, m);
            off += m.cols;
        }
        out
    }

    /// Vertical concatenation; all parts must share the column count.
    pub fn vstack(field: Field, cols: usize, parts: &[&Mat]) -> Mat {
        let rows: usize = parts.iter().map(|m| m.rows).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "column mismatch in vstack");
            out.paste(off, 0, m);
            off += m.rows;
        }
        out
    }

    pub fn block_diag(field: Field, parts: &[&Mat]) -> Mat {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for m in parts {
            out.paste(r, c, m);
            r += m.rows;
            c += m.cols;
        }
        out
    }

    /// Copies `m` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, m: &Mat) {
        assert!(r0 + m.rows <= self.rows && c0 + m.cols <= self.cols, "paste out of bounds");
        arith!(self.field, k => {
            let src = k.data(&m.data);
            let cols = self.cols;
            let dst = k.data_mut(&mut self.data);
            for r in 0..m.rows {
                let s = &src[r * m.cols..(r + 1) * m.cols];
                dst[(r0 + r) * cols + c0..(r0 + r) * cols + c0 + m.cols].clone_from_slice(s);
            }
        })
    }

    pub fn submatrix(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Mat {
        let rs: Vec<usize> = (r0..r0 + rows).collect();
        let cs: Vec<usize> = (c0..c0 + cols).collect();
        self.select(&rs, &cs)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let cs: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cs)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let rs: Vec<usize> = (0..self.rows).collect();
        self.select(&rs, cols)
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        arith!(self.field, k => {
            let d = k.data(&self.data);
            let mut out = Vec::with_capacity(rows.len() * cols.len());
            for &r in rows {
                for &c in cols {
                    out.push(d[r * self.cols + c].clone());
                }
            }
            Mat { field: self.field, rows: rows.len(), cols: cols.len(), data: k.wrap(out) }
        })
    }

    /// Reduced row echelon form and its strictly increasing pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let piv = arith!(self.field, k => rref_impl(k, &mut m));
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // rank(A) = rank(A^T); eliminate along the shorter side
        let mut m = if self.rows > self.cols { self.transpose() } else { self.clone() };
        arith!(self.field, k => echelon_rank_impl(k, &mut m))
    }

    /// Basis of the right null space, one vector per column.
    pub fn kernel_basis(&self) -> Mat {
        self.kernel_with_free().0
    }

    /// Kernel basis together with the free columns: basis vector `j` has a
    /// one at `free[j]` and zeros at every other free position, so the
    /// coordinates of a kernel element are its entries at `free`.
    pub fn kernel_with_free(&self) -> (Mat, Vec<usize>) {
        let (r, piv) = self.rref();
        let mut is_piv = vec![false; self.cols];
        for &p in &piv {
            is_piv[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_piv[c]).collect();
        let mut out = Mat::zeros(self.field, self.cols, free.len());
        let f = self.field;
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, f.one());
            for (i, &pc) in piv.iter().enumerate() {
                if !r.is_entry_zero(i, fc) {
                    out.set(pc, j, f.neg(&r.get(i, fc)));
                }
            }
        }
        (out, free)
    }

    /// Basis of the column space in reduced column echelon form, with the
    /// rows at which each basis column carries its leading one.
    pub fn column_space(&self) -> (Mat, Vec<usize>) {
        let (r, piv) = self.transpose().rref();
        let rows: Vec<usize> = (0..piv.len()).collect();
        (r.select_rows(&rows).transpose(), piv)
    }

    /// Some `x` with `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows, "right-hand side has the wrong row count");
        let aug = Mat::hstack(self.field, self.rows, &[self, b]);
        let (r, piv) = aug.rref();
        if piv.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.field, self.cols, b.cols);
        for (i, &pc) in piv.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(i, self.cols + j));
            }
        }
        Some(x)
    }
}

/// Object-safe view of field arithmetic on [`Scalar`], used by the
/// entrywise helpers where speed is irrelevant.
trait DynArith {
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar;
    fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar;
}

impl DynArith for Field {
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Field::add(self, a, b)
    }
    fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Field::sub(self, a, b)
    }
}

fn mul_impl<K: Arith>(k: &K, a: &Mat, b: &Mat) -> Mat {
    let ad = k.data(&a.data);
    let bd = k.data(&b.data);
    let (n, m, p) = (a.rows, a.cols, b.cols);
    let mut out = vec![k.zero(); n * p];
    for i in 0..n {
        let orow = &mut out[i * p..(i + 1) * p];
        for t in 0..m {
            let x = &ad[i * m + t];
            if k.is_zero(x) {
                continue;
            }
            let brow = &bd[t * p..(t + 1) * p];
            for (o, y) in orow.iter_mut().zip(brow) {
                if !k.is_zero(y) {
                    k.add_mul_assign(o, x, y);
                }
            }
        }
    }
    Mat { field: a.field, rows: n, cols: p, data: k.wrap(out) }
}

fn rref_impl<K: Arith>(k: &K, m: &mut Mat) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let d = k.data_mut(&mut m.data);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !k.is_zero(&d[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                d.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = k.inv(&d[r * cols + c]);
        for j in c..cols {
            d[r * cols + j] = k.mul(&d[r * cols + j], &inv);
        }
        let pivot_row: Vec<K::E> = d[r * cols..(r + 1) * cols].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = d[i * cols + c].clone();
            if k.is_zero(&f) {
                continue;
            }
            let row = &mut d[i * cols..(i + 1) * cols];
            for j in c..cols {
                if !k.is_zero(&pivot_row[j]) {
                    k.sub_mul_assign(&mut row[j], &f, &pivot_row[j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Forward elimination only; returns the rank.
fn echelon_rank_impl<K: Arith>(k: &K, m: &mut Mat) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let d = k.data_mut(&mut m.data);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !k.is_zero(&d[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                d.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = k.inv(&d[r * cols + c]);
        let pivot_row: Vec<K::E> = d[r * cols..(r + 1) * cols].iter().map(|x| k.mul(x, &inv)).collect();
        for i in r + 1..rows {
            let f = d[i * cols + c].clone();
            if k.is_zero(&f) {
                continue;
            }
            let row = &mut d[i * cols..(i + 1) * cols];
            for j in c..cols {
                if !k.is_zero(&pivot_row[j]) {
                    k.sub_mul_assign(&mut row[j], &f, &pivot_row[j]);
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    const F2: Field = Field::Prime(2);
    const F5: Field = Field::Prime(5);
    const Q: Field = Field::Rational;

    #[test]
    fn rref_identity_and_zero() {
        let id = Mat::identity(Q, 2);
        let (r, p) = id.rref();
        assert_eq!(r, id);
        assert_eq!(p, vec![0, 1]);

        let z = Mat::zeros(F5, 3, 2);
        let (r, p) = z.rref();
        assert_eq!(r, z);
        assert!(p.is_empty());
    }

    #[test]
    fn rref_over_f2() {
        let m = Mat::from_rows(F2, &[vec![1, 1], vec![1, 1]]);
        let (r, p) = m.rref();
        assert_eq!(r, Mat::from_rows(F2, &[vec![1, 1], vec![0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Mat::identity(F5, 4).kernel_basis().cols(), 0);
        let k = Mat::zeros(Q, 2, 3).kernel_basis();
        assert_eq!(k.cols(), 3);
        assert_eq!(k.rank(), 3);

        let m = Mat::from_rows(Q, &[vec![1, 2]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        // proportional to (-2, 1)
        assert_eq!(k, Mat::from_rows(Q, &[vec![-2], vec![1]]));
    }

    #[test]
    fn solve_examples() {
        let b = Mat::from_rows(F5, &[vec![3], vec![4]]);
        assert_eq!(Mat::identity(F5, 2).solve(&b), Some(b.clone()));
        assert_eq!(Mat::zeros(F5, 2, 2).solve(&b), None);

        let m = Mat::from_rows(F5, &[vec![1, 1], vec![0, 1]]);
        let rhs = Mat::from_rows(F5, &[vec![2], vec![3]]);
        let x = m.solve(&rhs).unwrap();
        assert_eq!(x, Mat::from_rows(F5, &[vec![4], vec![3]]));
        assert_eq!(m.mul(&x), rhs);
    }

    #[test]
    fn empty_shapes() {
        let m = Mat::zeros(Q, 0, 4);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel_basis().cols(), 4);
        let n = Mat::zeros(Q, 4, 0);
        assert_eq!(n.rank(), 0);
        assert_eq!(n.kernel_basis().cols(), 0);
        assert_eq!(m.mul(&Mat::zeros(Q, 4, 2)), Mat::zeros(Q, 0, 2));
    }

    #[test]
    fn scalar_parsing() {
        let f7 = Field::Prime(7);
        assert_eq!(f7.parse_scalar("-1").unwrap(), Scalar::Fp(6));
        assert_eq!(f7.parse_scalar("1/2").unwrap(), Scalar::Fp(4));
        assert!(f7.parse_scalar("1/7").is_err());
        let q = Q.parse_scalar("4/-6").unwrap();
        assert_eq!(q.to_string(), "-2/3");
        assert!(Field::prime(1008).is_err());
        assert_eq!(Field::prime(1009).unwrap(), Field::Prime(1009));
    }

    #[test]
    fn column_space_coordinates() {
        let m = Mat::from_rows(Q, &[vec![1, 2], vec![2, 4], vec![0, 1]]);
        let (b, piv) = m.column_space();
        assert_eq!(b.cols(), 2);
        for (j, &p) in piv.iter().enumerate() {
            for i in 0..piv.len() {
                let want = if i == j { Q.one() } else { Q.zero() };
                assert_eq!(b.get(piv[i], j), want);
            }
            assert_eq!(b.get(p, j), Q.one());
        }
    }
}
