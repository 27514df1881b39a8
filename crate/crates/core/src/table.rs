//! The numbers `K_n^l`: recurrence, closed forms, the general expansion in
//! Bernoulli-Euler numbers, and the identities that follow from it.
//!
//! The table is defined on
//!
//! ```text
//! l = 0: n >= 1      (K_n^0 = K_{n-1})
//! l = 1: n >= -1     (K_n^1 = K_{n+1})
//! l >= 2: n >= -l    (K_n^l = K_{n+2}^{l-1} - (n+2)(l-1) K_{n+2}^{l-2})
//! ```
//!
//! A term whose integer multiplier vanishes contributes nothing even when its
//! `K` factor lies outside the domain. This is what makes `K_{-l}^l` and
//! `K_{-2}^2` well defined. Cells with `l < -n` have no value and are reported
//! as domain errors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::euler::{boustrophedon, EulerList};
use crate::exact::{
    as_integer, exact_div, factorial, falling_factorial, int, rat, rat_int, solve_linear, Integer,
    Rational,
};
use crate::report::{Check, Report};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("K_{n}^{l} is outside the domain (no value is assigned to l < -n)")]
    OutOfDomain { n: i64, l: u32 },
    #[error("negative Bernoulli-Euler index {index} with nonzero multiplier")]
    NegativeEulerIndex { index: i64 },
    #[error("no closed form for l = {0} (available: 2..=5)")]
    NoClosedForm(u32),
    #[error("missing polynomial p_{{{k},{d}}}")]
    MissingPoly { k: u32, d: u32 },
    #[error("p_{{{k},{d}}} has no closed family (only d = k-1, k-2, k-3); fit it instead")]
    NoFamily { k: u32, d: u32 },
    #[error("general formula produced the non-integer {0}")]
    NonIntegral(String),
    #[error("{l}! does not divide K_{n}^{l} = {value}")]
    Divisibility { n: i64, l: u32, value: Integer },
    #[error("singular system fitting p_{{{k},.}} at l = {l}; samples {samples:?}")]
    SingularFit { k: u32, l: u32, samples: Vec<(i64, u32)> },
    #[error("fitted p_{{{k},{d}}} is inconsistent with the sample at l = {l}")]
    InconsistentFit { k: u32, d: u32, l: u32 },
    #[error("fitted p_{{{k},{d}}} has degree below {expected}")]
    DegreeDeficient { k: u32, d: u32, expected: usize },
}

/// Whether `K_n^l` is assigned a value.
pub fn in_domain(n: i64, l: u32) -> bool {
    match l {
        0 => n >= 1,
        1 => n >= -1,
        _ => n >= -(l as i64),
    }
}

/// Memoized `K_n^l` together with the Bernoulli-Euler numbers it is built from.
#[derive(Debug, Clone)]
pub struct KTable {
    memo: HashMap<(i64, u32), Integer>,
    euler: EulerList,
}

impl Default for KTable {
    fn default() -> Self {
        Self::new()
    }
}

impl KTable {
    pub fn new() -> Self {
        KTable { memo: HashMap::new(), euler: boustrophedon(64) }
    }

    /// Seeds the memo with previously computed cells (e.g. from a cache file).
    /// Cells outside the domain are ignored.
    pub fn with_entries(entries: impl IntoIterator<Item = (i64, u32, Integer)>) -> Self {
        let mut t = Self::new();
        for (n, l, v) in entries {
            if in_domain(n, l) {
                t.memo.insert((n, l), v);
            }
        }
        t
    }

    /// `K_index`, growing the Bernoulli-Euler list on demand.
    pub fn euler(&mut self, index: usize) -> &Integer {
        if index > self.euler.max_index() {
            self.euler = boustrophedon((index + 1).max(2 * self.euler.max_index()));
        }
        &self.euler.values()[index]
    }

    fn euler_signed(&mut self, index: i64) -> Result<Integer, TableError> {
        if index < 0 {
            return Err(TableError::NegativeEulerIndex { index });
        }
        Ok(self.euler(index as usize).clone())
    }

    pub fn knl(&mut self, n: i64, l: u32) -> Result<Integer, TableError> {
        if !in_domain(n, l) {
            return Err(TableError::OutOfDomain { n, l });
        }
        if let Some(v) = self.memo.get(&(n, l)) {
            return Ok(v.clone());
        }
        let v = match l {
            0 => self.euler((n - 1) as usize).clone(),
            1 => self.euler((n + 1) as usize).clone(),
            _ => {
                let head = self.knl(n + 2, l - 1)?;
                let mult = (n + 2) * (l as i64 - 1);
                if mult == 0 {
                    head
                } else {
                    head - self.knl(n + 2, l - 2)? * mult
                }
            }
        };
        self.memo.insert((n, l), v.clone());
        Ok(v)
    }

    /// Already-computed value, without touching the memo.
    pub fn get(&self, n: i64, l: u32) -> Option<&Integer> {
        self.memo.get(&(n, l))
    }

    /// Memoized cells sorted by `(l, n)`.
    pub fn entries(&self) -> Vec<(i64, u32, Integer)> {
        let mut out: Vec<_> = self.memo.iter().map(|(&(n, l), v)| (n, l, v.clone())).collect();
        out.sort_by_key(|&(n, l, _)| (l, n));
        out
    }

    /// Fills every in-domain cell with `n_min <= n <= n_max`, `l <= l_max`,
    /// in `(l, n)` order.
    pub fn fill(&mut self, n_min: i64, n_max: i64, l_max: u32) -> Result<(), TableError> {
        for l in 0..=l_max {
            for n in n_min..=n_max {
                if in_domain(n, l) {
                    self.knl(n, l)?;
                }
            }
        }
        Ok(())
    }

    /// `sum multiplier * K_index`, skipping zero multipliers.
    fn combine(&mut self, terms: &[(Integer, i64)]) -> Result<Integer, TableError> {
        let mut acc = Integer::zero();
        for (m, idx) in terms {
            if !m.is_zero() {
                acc += m * self.euler_signed(*idx)?;
            }
        }
        Ok(acc)
    }

    fn combine_rational(&mut self, terms: &[(Rational, i64)]) -> Result<Rational, TableError> {
        let mut acc = Rational::zero();
        for (m, idx) in terms {
            if !m.is_zero() {
                acc += m * rat_int(self.euler_signed(*idx)?);
            }
        }
        Ok(acc)
    }
}

/// Explicit expressions for `l = 2..=5` in terms of Bernoulli-Euler numbers.
///
/// The `l = 5` expression has three terms; the expansion in
/// [`general_formula`] stops at `k = floor(l/2) + 1 = 3`, so nothing is
/// missing.
pub fn closed_form(table: &mut KTable, n: i64, l: u32) -> Result<Integer, TableError> {
    let terms: Vec<(Integer, i64)> = match l {
        2 => vec![(int(1), n + 3), (int(-(n + 2)), n + 1)],
        3 => vec![(int(1), n + 5), (int(-(3 * n + 8)), n + 3)],
        4 => vec![
            (int(1), n + 7),
            (int(-(6 * n + 20)), n + 5),
            (int(3 * (n + 2) * (n + 4)), n + 3),
        ],
        5 => vec![
            (int(1), n + 9),
            (int(-(10 * n + 40)), n + 7),
            (int(15 * n * n + 110 * n + 184), n + 5),
        ],
        _ => return Err(TableError::NoClosedForm(l)),
    };
    table.combine(&terms)
}

/// A polynomial `p_{k,d}(x)` with ascending rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPoly {
    pub k: u32,
    pub d: u32,
    pub coeffs: Vec<Rational>,
}

impl PPoly {
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&rat(x, 1))
    }

    /// Index of the highest nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }
}

impl fmt::Display for PPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "p_{{{},{}}}(x) = {}", self.k, self.d, parts.join(" + "))
    }
}

/// The closed families `d = k-1, k-2, k-3`.
pub fn p_families(k: u32, d: u32) -> Result<PPoly, TableError> {
    if k < 2 || d >= k {
        return Err(TableError::NoFamily { k, d });
    }
    let kk = k as i64;
    let coeffs = match k - d {
        1 => vec![rat(1, 1)],
        // (k-1)/3 (2x + 4 - k)
        2 => vec![rat((kk - 1) * (4 - kk), 3), rat(2 * (kk - 1), 3)],
        // (k-1)(k-2)/90 (20x^2 + (72 - 20k)x + (5k^2 - 39k + 64))
        3 => {
            let s = rat((kk - 1) * (kk - 2), 90);
            vec![
                &s * rat(5 * kk * kk - 39 * kk + 64, 1),
                &s * rat(72 - 20 * kk, 1),
                &s * rat(20, 1),
            ]
        }
        _ => return Err(TableError::NoFamily { k, d }),
    };
    Ok(PPoly { k, d, coeffs })
}

/// `(-1)^{k-1} / (2^{k-1} (k-1)!) * l! / (l-2k+2)!`.
pub fn term_weight(k: u32, l: u32) -> Rational {
    let sign = if k % 2 == 1 { 1 } else { -1 };
    let den = Integer::from(2u32).pow(k - 1) * factorial(k as u64 - 1);
    Rational::new(int(sign) * falling_factorial(l as i64, 2 * k as u64 - 2), den)
}

/// A collection of `p_{k,d}` keyed by `(k, d)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PSet {
    polys: BTreeMap<(u32, u32), PPoly>,
}

impl PSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: PPoly) {
        self.polys.insert((p.k, p.d), p);
    }

    pub fn get(&self, k: u32, d: u32) -> Option<&PPoly> {
        self.polys.get(&(k, d))
    }

    pub fn iter(&self) -> impl Iterator<Item = &PPoly> {
        self.polys.values()
    }

    /// Every closed-family polynomial with `k <= k_max`.
    pub fn families(k_max: u32) -> Self {
        let mut s = Self::new();
        for k in 2..=k_max {
            for d in k.saturating_sub(3)..k {
                s.insert(p_families(k, d).expect("d within the closed families"));
            }
        }
        s
    }

    /// Closed families where they exist, fitted polynomials for the rest.
    pub fn complete(table: &mut KTable, k_max: u32) -> Result<Self, TableError> {
        let mut s = Self::families(k_max);
        for k in 4..=k_max {
            for p in fit_p(table, k)? {
                if s.get(p.k, p.d).is_none() {
                    s.insert(p);
                }
            }
        }
        Ok(s)
    }
}

/// Terms `(multiplier, index)` of the sum over `k` in the expansion of
/// `K_n^l`, excluding the leading `K_{n+2l-1}`.
fn k_sum_terms(n: i64, l: u32, pset: &PSet) -> Result<Vec<(Rational, i64)>, TableError> {
    let mut terms = Vec::new();
    let nn = rat(n, 1);
    for k in 2..=(l / 2 + 1) {
        let mut inner = Rational::zero();
        let mut n_pow = Rational::one();
        for d in 0..k {
            let p = pset.get(k, d).ok_or(TableError::MissingPoly { k, d })?;
            inner += p.eval_int(l as i64) * &n_pow;
            n_pow *= &nn;
        }
        let index = n + 2 * (l as i64 - k as i64) + 1;
        terms.push((term_weight(k, l) * inner, index));
    }
    Ok(terms)
}

/// `K_n^l = K_{n+2l-1} + sum_{k=2}^{floor(l/2)+1} w_k(l) (sum_d p_{k,d}(l) n^d) K_{n+2(l-k)+1}`.
pub fn general_formula(table: &mut KTable, n: i64, l: u32, pset: &PSet) -> Result<Integer, TableError> {
    let mut terms = k_sum_terms(n, l, pset)?;
    terms.push((Rational::one(), n + 2 * l as i64 - 1));
    let v = table.combine_rational(&terms)?;
    as_integer(&v).ok_or_else(|| TableError::NonIntegral(v.to_string()))
}

/// Unknown values `p_{j,d}(l)` at one fixed `l`, for every active `j`.
fn solve_at_l(table: &mut KTable, l: u32, k: u32) -> Result<HashMap<(u32, u32), Rational>, TableError> {
    let unknowns: Vec<(u32, u32)> =
        (2..=(l / 2 + 1)).flat_map(|j| (0..j).map(move |d| (j, d))).collect();
    let samples: Vec<(i64, u32)> = (0..(unknowns.len() as i64 + 3)).map(|n| (n, l)).collect();
    let mut rows = Vec::with_capacity(samples.len());
    let mut rhs = Vec::with_capacity(samples.len());
    for &(n, _) in &samples {
        let lead = table.euler((n + 2 * l as i64 - 1) as usize).clone();
        rhs.push(rat_int(table.knl(n, l)? - lead));
        let row = unknowns
            .iter()
            .map(|&(j, d)| {
                let e = table.euler((n + 2 * (l as i64 - j as i64) + 1) as usize).clone();
                term_weight(j, l) * rat_int(e * int(n).pow(d))
            })
            .collect();
        rows.push(row);
    }
    let sol = solve_linear(&rows, &rhs).ok_or(TableError::SingularFit { k, l, samples })?;
    Ok(unknowns.into_iter().zip(sol).collect())
}

/// Recovers `p_{k,0}, ..., p_{k,k-1}` from table values.
///
/// At each fixed `l` the expansion is linear in the numbers `p_{j,d}(l)`, and
/// the sequences `n^d K_{n+c}` are linearly independent, so sampling enough
/// `n` pins every `p_{j,d}(l)` down exactly. Doing this for
/// `l = 2k-2, ..., 3k-3` gives `k - d` points on `p_{k,d}`, which fixes a
/// polynomial of degree `k-d-1`; one further `l` is used as a consistency check.
pub fn fit_p(table: &mut KTable, k: u32) -> Result<Vec<PPoly>, TableError> {
    assert!(k >= 2, "p_{{k,d}} starts at k = 2");
    let l_first = 2 * k - 2;
    let l_last = 3 * k - 2;
    let mut values: BTreeMap<u32, HashMap<(u32, u32), Rational>> = BTreeMap::new();
    for l in l_first..=l_last {
        values.insert(l, solve_at_l(table, l, k)?);
    }
    let mut out = Vec::with_capacity(k as usize);
    for d in 0..k {
        let points = (k - d) as usize;
        let ls: Vec<u32> = (l_first..l_first + points as u32).collect();
        let rows: Vec<Vec<Rational>> = ls
            .iter()
            .map(|&l| (0..points as u32).map(|e| rat_int(int(l as i64).pow(e))).collect())
            .collect();
        let rhs: Vec<Rational> = ls.iter().map(|l| values[l][&(k, d)].clone()).collect();
        let coeffs = solve_linear(&rows, &rhs).ok_or_else(|| TableError::SingularFit {
            k,
            l: l_first,
            samples: ls.iter().map(|&l| (0, l)).collect(),
        })?;
        let p = PPoly { k, d, coeffs };
        for (&l, vals) in values.range(l_first + points as u32..) {
            if p.eval_int(l as i64) != vals[&(k, d)] {
                return Err(TableError::InconsistentFit { k, d, l });
            }
        }
        if p.degree() != Some(points - 1) {
            return Err(TableError::DegreeDeficient { k, d, expected: points - 1 });
        }
        out.push(p);
    }
    Ok(out)
}

/// Number of components of the caustic strata counted by `K_n^l / l!`.
pub fn strata_count(table: &mut KTable, n: i64, l: u32) -> Result<Integer, TableError> {
    if n < 1 {
        return Err(TableError::OutOfDomain { n, l });
    }
    let value = table.knl(n, l)?;
    exact_div(&value, &factorial(l as u64)).ok_or(TableError::Divisibility { n, l, value })
}

fn check_result(id: String, got: Result<Integer, TableError>, want: &Integer) -> Check {
    match got {
        Ok(v) => Check::equal(id, &v, want),
        Err(e) => Check::new(id, false, format!("error: {e}")),
    }
}

/// Checks the identities implied by the expansion and the recurrence for
/// every `l <= l_max`:
///
/// * `K_1^l = l!` and `K_2^l = 2^l l!`;
/// * the two Bernoulli-Euler identities obtained at `n = 1` and `n = 2`,
///   evaluated directly from Euler numbers and `p_{k,d}`;
/// * zeros for `l > -n`, `K_{-m}^m = (m-1)!` and `K_0^l = 0` (`l > 1`);
/// * the expansion reproducing those zeros and factorials at `n <= 0`;
/// * fitted `p_{k,d}` agreeing with the closed families where both exist.
pub fn verify_identities(table: &mut KTable, l_max: u32) -> Report {
    let mut report = Report::new("identities");
    let k_max = l_max / 2 + 1;

    let pset = match PSet::complete(table, k_max) {
        Ok(p) => p,
        Err(e) => {
            report.push(Check::new("p-fit", false, format!("error: {e}")));
            return report;
        }
    };

    for k in 4..=k_max {
        match fit_p(table, k) {
            Ok(fitted) => {
                for p in fitted.iter().filter(|p| p.d + 3 >= k) {
                    let closed = p_families(k, p.d).expect("closed family");
                    report.push(Check::new(
                        format!("p-family k={k} d={}", p.d),
                        *p == closed,
                        format!("fitted: {p}"),
                    ));
                }
            }
            Err(e) => report.push(Check::new(format!("p-fit k={k}"), false, format!("error: {e}"))),
        }
    }

    for l in 0..=l_max {
        let lf = factorial(l as u64);
        check_result_into(&mut report, format!("K_1^{l}=l!"), table.knl(1, l), &lf);
        let want = Integer::from(2u32).pow(l) * &lf;
        check_result_into(&mut report, format!("K_2^{l}=2^l*l!"), table.knl(2, l), &want);
    }

    for l in 1..=l_max {
        for (n, name) in [(1i64, "expansion-n1"), (2i64, "expansion-n2")] {
            let id = format!("{name} l={l}");
            let lhs = table.euler((n + 2 * l as i64 - 1) as usize).clone()
                - if n == 1 { factorial(l as u64) } else { Integer::from(2u32).pow(l) * factorial(l as u64) };
            let rhs = k_sum_terms(n, l, &pset).and_then(|terms| {
                let negated: Vec<_> = terms.into_iter().map(|(m, i)| (-m, i)).collect();
                table.combine_rational(&negated)
            });
            match rhs {
                Ok(r) => report.push(Check::equal(id, &rat_int(lhs), &r)),
                Err(e) => report.push(Check::new(id, false, format!("error: {e}"))),
            }
        }
    }

    for l in 2..=l_max {
        check_result_into(&mut report, format!("K_0^{l}=0"), table.knl(0, l), &Integer::zero());
    }
    for m in 1..=l_max as i64 {
        for l in (m as u32 + 1)..=l_max {
            check_result_into(&mut report, format!("K_-{m}^{l}=0"), table.knl(-m, l), &Integer::zero());
        }
        let want = factorial(m as u64 - 1);
        check_result_into(&mut report, format!("K_-{m}^{m}=(m-1)!"), table.knl(-m, m as u32), &want);
    }

    for l in 1..=l_max {
        for n in -(l as i64)..=0 {
            if l as i64 > 1.max(-n) {
                let got = general_formula(table, n, l, &pset);
                report.push(check_result(format!("expansion-zero n={n} l={l}"), got, &Integer::zero()));
            } else if l as i64 == -n {
                let got = general_formula(table, n, l, &pset);
                let want = factorial(l as u64 - 1);
                report.push(check_result(format!("expansion-diagonal n={n} l={l}"), got, &want));
            }
        }
    }
    report
}

fn check_result_into(report: &mut Report, id: String, got: Result<Integer, TableError>, want: &Integer) {
    report.push(check_result(id, got, want));
}

/// `l!` divides `K_n^l` on the given window.
pub fn divisibility_report(table: &mut KTable, n_max: i64, l_max: u32) -> Report {
    let mut report = Report::new("divisibility");
    for l in 0..=l_max {
        for n in 1..=n_max {
            let id = format!("{l}! | K_{n}^{l}");
            match strata_count(table, n, l) {
                Ok(q) => report.push(Check::new(id, !q.is_negative(), format!("quotient={q}"))),
                Err(e) => report.push(Check::new(id, false, format!("error: {e}"))),
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(table: &mut KTable, n: i64, l: u32) -> i64 {
        i64::try_from(table.knl(n, l).unwrap()).unwrap()
    }

    #[test]
    fn worked_examples() {
        let mut t = KTable::new();
        assert_eq!(k(&mut t, 3, 2), 36);
        assert_eq!(k(&mut t, 1, 3), 6);
        assert_eq!(k(&mut t, -4, 4), 6);
        assert_eq!(k(&mut t, 2, 2), 8);
        assert_eq!(k(&mut t, 0, 3), 0);
        // K_3^2 also equals K_1^3 + 2*3*K_3^1
        assert_eq!(k(&mut t, 1, 3) + 6 * k(&mut t, 3, 1), 36);
    }

    #[test]
    fn negative_region_table() {
        // rows n = 0..=-5, columns l = 1..=5; None marks cells without a value
        let expected: [[Option<i64>; 5]; 6] = [
            [Some(1), Some(0), Some(0), Some(0), Some(0)],
            [Some(1), Some(0), Some(0), Some(0), Some(0)],
            [None, Some(1), Some(0), Some(0), Some(0)],
            [None, None, Some(2), Some(0), Some(0)],
            [None, None, None, Some(6), Some(0)],
            [None, None, None, None, Some(24)],
        ];
        let mut t = KTable::new();
        for (row, cells) in expected.iter().enumerate() {
            let n = -(row as i64);
            for (col, want) in cells.iter().enumerate() {
                let l = col as u32 + 1;
                match want {
                    Some(v) => assert_eq!(k(&mut t, n, l), *v, "K_{n}^{l}"),
                    None => assert_eq!(t.knl(n, l), Err(TableError::OutOfDomain { n, l })),
                }
            }
        }
    }

    #[test]
    fn out_of_domain_l0() {
        let mut t = KTable::new();
        assert!(matches!(t.knl(0, 0), Err(TableError::OutOfDomain { .. })));
    }

    #[test]
    fn closed_form_examples() {
        let mut t = KTable::new();
        assert_eq!(closed_form(&mut t, 3, 2).unwrap(), int(36));
        assert_eq!(closed_form(&mut t, 1, 3).unwrap(), int(6));
        assert_eq!(closed_form(&mut t, 0, 4).unwrap(), int(0));
        assert_eq!(closed_form(&mut t, 2, 6), Err(TableError::NoClosedForm(6)));
        assert_eq!(closed_form(&mut t, -3, 3).unwrap(), int(2));
        assert_eq!(closed_form(&mut t, -4, 2), Err(TableError::NegativeEulerIndex { index: -1 }));
    }

    #[test]
    fn closed_forms_match_recurrence() {
        let mut t = KTable::new();
        for l in 2..=5u32 {
            for n in (-(l as i64)).max(-2)..=20 {
                assert_eq!(closed_form(&mut t, n, l).unwrap(), t.knl(n, l).unwrap(), "n={n} l={l}");
            }
        }
    }

    #[test]
    fn p_family_values() {
        assert_eq!(p_families(2, 1).unwrap().coeffs, vec![rat(1, 1)]);
        let p20 = p_families(2, 0).unwrap();
        for l in 0..6 {
            assert_eq!(p20.eval_int(l), rat(2 * (l + 1), 3));
        }
        assert_eq!(p_families(3, 0).unwrap().eval_int(4), rat(8, 1));
        assert_eq!(p_families(5, 1), Err(TableError::NoFamily { k: 5, d: 1 }));
        assert_eq!(p_families(3, 3), Err(TableError::NoFamily { k: 3, d: 3 }));
    }

    #[test]
    fn general_formula_examples() {
        let mut t = KTable::new();
        let p = PSet::families(3);
        // K_7 - 14 K_5 = 272 - 224
        assert_eq!(general_formula(&mut t, 2, 3, &p).unwrap(), int(48));
        assert_eq!(t.knl(2, 3).unwrap(), int(48));
        assert_eq!(general_formula(&mut t, 4, 3, &p).unwrap(), int(7936 - 20 * 272));
        assert_eq!(general_formula(&mut t, 1, 1, &p).unwrap(), int(1));
        assert_eq!(general_formula(&mut t, 0, 2, &p).unwrap(), int(0));
        assert_eq!(
            general_formula(&mut t, 0, 6, &p),
            Err(TableError::MissingPoly { k: 4, d: 0 })
        );
    }

    #[test]
    fn general_formula_with_families_matches_recurrence() {
        let mut t = KTable::new();
        let p = PSet::families(3);
        for l in 1..=5u32 {
            for n in 1..=15 {
                assert_eq!(general_formula(&mut t, n, l, &p).unwrap(), t.knl(n, l).unwrap());
            }
        }
    }

    #[test]
    fn fit_reproduces_closed_families() {
        let mut t = KTable::new();
        assert_eq!(fit_p(&mut t, 2).unwrap(), vec![p_families(2, 0).unwrap(), p_families(2, 1).unwrap()]);
        let f3 = fit_p(&mut t, 3).unwrap();
        for p in &f3 {
            assert_eq!(*p, p_families(3, p.d).unwrap());
        }
        let f4 = fit_p(&mut t, 4).unwrap();
        assert_eq!(f4[3].coeffs, vec![rat(1, 1)]);
        assert_eq!(f4[0].degree(), Some(3));
    }

    #[test]
    fn fitted_expansion_matches_recurrence_to_l9() {
        let mut t = KTable::new();
        let p = PSet::complete(&mut t, 5).unwrap();
        for l in 1..=9u32 {
            for n in -(l as i64)..=12 {
                if !in_domain(n, l) {
                    continue;
                }
                assert_eq!(general_formula(&mut t, n, l, &p).unwrap(), t.knl(n, l).unwrap(), "n={n} l={l}");
            }
        }
    }

    #[test]
    fn strata_examples() {
        let mut t = KTable::new();
        assert_eq!(strata_count(&mut t, 3, 2).unwrap(), int(18));
        assert_eq!(strata_count(&mut t, 2, 3).unwrap(), int(8));
        for l in 0..8 {
            assert_eq!(strata_count(&mut t, 1, l).unwrap(), int(1));
        }
    }

    #[test]
    fn identities_hold() {
        let mut t = KTable::new();
        let r = verify_identities(&mut t, 6);
        assert!(r.passed(), "{r}");
        assert!(r.checks.iter().any(|c| c.id == "K_-5^5=(m-1)!" && c.witness == "lhs=24 rhs=24"));
    }

    #[test]
    fn divisibility_window() {
        let mut t = KTable::new();
        assert!(divisibility_report(&mut t, 20, 8).passed());
    }

    #[test]
    fn cache_seeding_ignores_out_of_domain() {
        let t = KTable::with_entries(vec![(3, 2, int(36)), (-3, 1, int(5))]);
        assert_eq!(t.get(3, 2), Some(&int(36)));
        assert_eq!(t.get(-3, 1), None);
    }

    proptest! {
        #[test]
        fn recurrence_holds(n in 2i64..30, l in 1u32..10) {
            let mut t = KTable::new();
            prop_assume!(in_domain(n - 2, l + 1));
            let lhs = t.knl(n - 2, l + 1).unwrap();
            let rhs = t.knl(n, l).unwrap() - t.knl(n, l - 1).unwrap() * (n * l as i64);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn boundary_rows(n in 1i64..40) {
            let mut t = KTable::new();
            let e = boustrophedon(45);
            prop_assert_eq!(&t.knl(n, 0).unwrap(), e.get(n as usize - 1).unwrap());
            prop_assert_eq!(&t.knl(n, 1).unwrap(), e.get(n as usize + 1).unwrap());
        }
    }
}
