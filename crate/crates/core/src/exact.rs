//! Exact scalars and truncated formal power series in one and two variables.
//!
//! Every series carries an explicit truncation order. Binary operations
//! truncate to the smaller order of their operands, and operations that lose
//! information at the top (derivatives) lower the order instead of padding,
//! so a coefficient is only ever present if it is known exactly.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision signed integer.
pub type Integer = BigInt;
/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("division by a series with zero constant term")]
    ZeroConstantTerm,
    #[error("cannot differentiate a series of order 0: no coefficient survives")]
    InsufficientOrder,
    #[error("shape mismatch: ({0}, {1}) vs ({2}, {3})")]
    ShapeMismatch(usize, usize, usize, usize),
}

pub fn int(v: i64) -> Integer {
    Integer::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(int(num), int(den))
}

pub fn rat_int(v: Integer) -> Rational {
    Rational::from_integer(v)
}

pub fn factorial(n: u64) -> Integer {
    (1..=n).fold(Integer::one(), |acc, k| acc * k)
}

/// `n (n-1) ... (n-k+1)`, zero once a factor hits zero.
pub fn falling_factorial(n: i64, k: u64) -> Integer {
    (0..k as i64).fold(Integer::one(), |acc, i| acc * (n - i))
}

/// Returns the integer value of `r` if its denominator is one.
pub fn as_integer(r: &Rational) -> Option<Integer> {
    r.is_integer().then(|| r.to_integer())
}

/// Exact quotient `a / b`, or `None` when `b` does not divide `a`.
pub fn exact_div(a: &Integer, b: &Integer) -> Option<Integer> {
    if b.is_zero() {
        return None;
    }
    let (q, r) = a.div_rem(b);
    r.is_zero().then_some(q)
}

/// Univariate series `sum c_k t^k + O(t^{order+1})`.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "; O(t^{})]", self.coeffs.len())
    }
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// Builds a series from explicit coefficients; the order is `coeffs.len() - 1`.
    ///
    /// Panics on an empty coefficient list.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least a constant term");
        Series { coeffs }
    }

    /// Exponential generating function: coefficient `k` is `values[k] / k!`.
    pub fn from_egf(values: &[Integer]) -> Self {
        let coeffs = values
            .iter()
            .enumerate()
            .map(|(k, v)| Rational::new(v.clone(), factorial(k as u64)))
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^k`; panics past the truncation order.
    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    /// `k! * [t^k]`, the sequence an exponential generating function encodes.
    pub fn egf_term(&self, k: usize) -> Rational {
        &self.coeffs[k] * rat_int(factorial(k as u64))
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "truncate cannot raise the order");
        Series { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Series { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn checked_div(&self, rhs: &Series) -> Result<Series, SeriesError> {
        let order = self.order().min(rhs.order());
        let b0 = &rhs.coeffs[0];
        if b0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let mut q: Vec<Rational> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.coeffs[k].clone();
            for j in 0..k {
                acc -= &q[j] * &rhs.coeffs[k - j];
            }
            q.push(acc / b0);
        }
        Ok(Series { coeffs: q })
    }

    /// Multiplicative inverse, for a unit constant term.
    pub fn recip(&self) -> Result<Series, SeriesError> {
        Series::one(self.order()).checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Series {
        (0..e).fold(Series::one(self.order()), |acc, _| &acc * self)
    }

    /// Formal derivative. The top coefficient is unknown afterwards, so the
    /// result has order one less than the input.
    pub fn derive(&self) -> Result<Series, SeriesError> {
        if self.order() == 0 {
            return Err(SeriesError::InsufficientOrder);
        }
        let coeffs = (1..self.coeffs.len())
            .map(|k| &self.coeffs[k] * rat(k as i64, 1))
            .collect();
        Ok(Series { coeffs })
    }

    pub fn derive_n(&self, times: usize) -> Result<Series, SeriesError> {
        (0..times).try_fold(self.clone(), |acc, _| acc.derive())
    }

    /// Antiderivative with zero constant term, same order as the input.
    pub fn integrate(&self) -> Series {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(Rational::zero());
        for k in 1..self.coeffs.len() {
            coeffs.push(&self.coeffs[k - 1] / rat(k as i64, 1));
        }
        Series { coeffs }
    }

    /// Multiplication by `t`, same order as the input.
    pub fn mul_by_t(&self) -> Series {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs[..self.order()].iter().cloned());
        Series { coeffs }
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series { coeffs: (0..=order).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series { coeffs: (0..=order).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| {
                (0..=k).fold(Rational::zero(), |acc, j| acc + &self.coeffs[j] * &rhs.coeffs[k - j])
            })
            .collect();
        Series { coeffs }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigKind {
    Sin,
    Cos,
    /// `sec t + tan t`, built as `(1 + sin t) / cos t`.
    SecPlusTan,
    /// `1 / (1 - sin t)`.
    InvOneMinusSin,
}

/// Exact Taylor expansion at 0 of the requested trigonometric expression.
pub fn trig_series(kind: TrigKind, order: usize) -> Series {
    match kind {
        TrigKind::Sin | TrigKind::Cos => {
            let parity = if kind == TrigKind::Sin { 1 } else { 0 };
            let coeffs = (0..=order)
                .map(|k| {
                    if k % 2 != parity {
                        return Rational::zero();
                    }
                    let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
                    Rational::new(int(sign), factorial(k as u64))
                })
                .collect();
            Series { coeffs }
        }
        TrigKind::SecPlusTan => {
            let num = &Series::one(order) + &trig_series(TrigKind::Sin, order);
            num.checked_div(&trig_series(TrigKind::Cos, order))
                .expect("cos has constant term 1")
        }
        TrigKind::InvOneMinusSin => (&Series::one(order) - &trig_series(TrigKind::Sin, order))
            .recip()
            .expect("1 - sin has constant term 1"),
    }
}

/// Bivariate series: entry `(a, b)` is the coefficient of `x^a y^b`,
/// truncated at `x^{order_x}` and `y^{order_y}` independently.
#[derive(Clone, PartialEq, Eq)]
pub struct BiSeries {
    order_x: usize,
    order_y: usize,
    grid: Vec<Rational>,
}

impl fmt::Debug for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BiSeries({} x {})", self.order_x, self.order_y)?;
        for a in 0..=self.order_x {
            let row: Vec<String> = (0..=self.order_y).map(|b| self.get(a, b).to_string()).collect();
            writeln!(f, "  x^{a}: [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl BiSeries {
    pub fn zero(order_x: usize, order_y: usize) -> Self {
        BiSeries { order_x, order_y, grid: vec![Rational::zero(); (order_x + 1) * (order_y + 1)] }
    }

    pub fn from_fn(order_x: usize, order_y: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut s = Self::zero(order_x, order_y);
        for a in 0..=order_x {
            for b in 0..=order_y {
                s.set(a, b, f(a, b));
            }
        }
        s
    }

    /// Finite polynomial given by `(x power, y power, coefficient)` terms.
    pub fn from_terms(order_x: usize, order_y: usize, terms: &[(usize, usize, Rational)]) -> Self {
        let mut s = Self::zero(order_x, order_y);
        for (a, b, c) in terms {
            if *a <= order_x && *b <= order_y {
                let v = s.get(*a, *b) + c;
                s.set(*a, *b, v);
            }
        }
        s
    }

    pub fn order_x(&self) -> usize {
        self.order_x
    }

    pub fn order_y(&self) -> usize {
        self.order_y
    }

    fn idx(&self, a: usize, b: usize) -> usize {
        a * (self.order_y + 1) + b
    }

    pub fn get(&self, a: usize, b: usize) -> &Rational {
        &self.grid[self.idx(a, b)]
    }

    pub fn set(&mut self, a: usize, b: usize, v: Rational) {
        let i = self.idx(a, b);
        self.grid[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.grid.iter().all(Zero::is_zero)
    }

    /// Entries that are not zero, in row-major order.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, Rational)> {
        let mut out = Vec::new();
        for a in 0..=self.order_x {
            for b in 0..=self.order_y {
                if !self.get(a, b).is_zero() {
                    out.push((a, b, self.get(a, b).clone()));
                }
            }
        }
        out
    }

    pub fn truncate(&self, order_x: usize, order_y: usize) -> Self {
        assert!(order_x <= self.order_x && order_y <= self.order_y, "truncate cannot raise orders");
        Self::from_fn(order_x, order_y, |a, b| self.get(a, b).clone())
    }

    /// `d/dx`; loses the top row.
    pub fn dx(&self) -> Result<Self, SeriesError> {
        if self.order_x == 0 {
            return Err(SeriesError::InsufficientOrder);
        }
        Ok(Self::from_fn(self.order_x - 1, self.order_y, |a, b| {
            self.get(a + 1, b) * rat(a as i64 + 1, 1)
        }))
    }

    /// `d/dy`; loses the top column.
    pub fn dy(&self) -> Result<Self, SeriesError> {
        if self.order_y == 0 {
            return Err(SeriesError::InsufficientOrder);
        }
        Ok(Self::from_fn(self.order_x, self.order_y - 1, |a, b| {
            self.get(a, b + 1) * rat(b as i64 + 1, 1)
        }))
    }

    pub fn mul_by_x(&self) -> Self {
        Self::from_fn(self.order_x, self.order_y, |a, b| {
            if a == 0 { Rational::zero() } else { self.get(a - 1, b).clone() }
        })
    }

    pub fn mul_by_y(&self) -> Self {
        Self::from_fn(self.order_x, self.order_y, |a, b| {
            if b == 0 { Rational::zero() } else { self.get(a, b - 1).clone() }
        })
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.same_shape(rhs)?;
        Ok(Self::from_fn(self.order_x, self.order_y, |a, b| self.get(a, b) + rhs.get(a, b)))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.same_shape(rhs)?;
        Ok(Self::from_fn(self.order_x, self.order_y, |a, b| self.get(a, b) - rhs.get(a, b)))
    }

    /// Product with a polynomial `sum c x^i y^j`, truncated to this shape.
    pub fn scale_poly(&self, terms: &[(usize, usize, Rational)]) -> Self {
        let mut out = Self::zero(self.order_x, self.order_y);
        for (i, j, c) in terms {
            for a in *i..=self.order_x {
                for b in *j..=self.order_y {
                    let v = out.get(a, b) + self.get(a - i, b - j) * c;
                    out.set(a, b, v);
                }
            }
        }
        out
    }

    fn same_shape(&self, rhs: &Self) -> Result<(), SeriesError> {
        if self.order_x != rhs.order_x || self.order_y != rhs.order_y {
            return Err(SeriesError::ShapeMismatch(self.order_x, self.order_y, rhs.order_x, rhs.order_y));
        }
        Ok(())
    }
}

/// Solves `rows * u = rhs` exactly. Overdetermined systems are accepted as
/// long as they are consistent and of full column rank; returns `None` otherwise.
///
/// Rows are cleared of denominators and reduced with fraction-free (Bareiss)
/// elimination, which keeps every intermediate an integer.
pub fn solve_linear(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Integer>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let lcm = r.iter().chain(std::iter::once(b)).fold(Integer::one(), |acc, v| acc.lcm(v.denom()));
            r.iter()
                .chain(std::iter::once(b))
                .map(|v| (v * rat_int(lcm.clone())).to_integer())
                .collect()
        })
        .collect();
    let mut prev = Integer::one();
    for k in 0..cols {
        let p = (k..m.len()).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, p);
        for i in k + 1..m.len() {
            for j in k + 1..=cols {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
            m[i][k] = Integer::zero();
        }
        prev = m[k][k].clone();
    }
    if m[cols..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); cols];
    for k in (0..cols).rev() {
        let mut acc = rat_int(m[k][cols].clone());
        for j in k + 1..cols {
            acc -= rat_int(m[k][j].clone()) * &sol[j];
        }
        sol[k] = acc / rat_int(m[k][k].clone());
    }
    Some(sol)
}

/// Lossy conversion for display and numeric work.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
