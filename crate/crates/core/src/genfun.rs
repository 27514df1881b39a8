//! Exponential generating functions `K_l(t) = sum_n K_n^l t^n / n!` and the
//! bivariate function `K(x, y) = sum K_n^l x^l y^n / (l! n!)`, checked
//! coefficientwise against the table. Everything here is exact.

use num_traits::Zero;
use thiserror::Error;

use crate::exact::{factorial, rat, trig_series, BiSeries, Integer, Rational, Series, SeriesError, TrigKind};
use crate::report::{Check, Report};
use crate::table::{in_domain, KTable, TableError};

/// Default truncation order for univariate checks.
pub const DEFAULT_ORDER: usize = 20;
/// Default bivariate window `(L, N)`.
pub const DEFAULT_WINDOW: (usize, usize) = (6, 14);
/// Window for the even/odd split equations.
pub const PARITY_WINDOW: (usize, usize) = (6, 7);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenfunError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("no generating function of this kind for l = {0}")]
    UnsupportedL(u32),
}

/// Number of orders the operator form for `l` consumes.
pub fn operator_order_loss(l: u32) -> usize {
    match l {
        0 => 0,
        l => 2 * l as usize - 1,
    }
}

/// `sum_n K_n^l t^n / n!`; the `n = 0` coefficient is 0 for `l = 0`.
pub fn egf_from_table(table: &mut KTable, l: u32, order: usize) -> Result<Series, GenfunError> {
    let coeffs = (0..=order)
        .map(|n| {
            if l == 0 && n == 0 {
                return Ok(Rational::zero());
            }
            Ok(Rational::new(table.knl(n as i64, l)?, factorial(n as u64)))
        })
        .collect::<Result<Vec<_>, TableError>>()?;
    Ok(Series::from_coeffs(coeffs))
}

/// Trigonometric closed forms for `l = 1..=4`.
///
/// ```text
/// l = 1: 1 / (1 - sin t)
/// l = 2: (3 sin t - t cos t) / (1 - sin t)^2
/// l = 3: 3 (sin t (3 sin t + 7) - t cos t (5 + sin t)) / (1 - sin t)^3
/// l = 4: (3t^2/(1 - sin t) - 3t cos t (3 - sin t)/(1 - sin t)^2 + 3(2 - sin t)/(1 - sin t)^2)''''
/// ```
pub fn closed_form_egf(l: u32, order: usize) -> Result<Series, GenfunError> {
    let o = if l == 4 { order + 4 } else { order };
    let one = Series::one(o);
    let t = Series::t(o);
    let s = trig_series(TrigKind::Sin, o);
    let c = trig_series(TrigKind::Cos, o);
    let u = &one - &s;
    let c3 = |v: i64| Series::one(o).scale(&rat(v, 1));
    let out = match l {
        1 => u.recip()?,
        2 => (&s.scale(&rat(3, 1)) - &(&t * &c)).checked_div(&u.pow(2))?,
        3 => {
            let a = &s * &(&s.scale(&rat(3, 1)) + &c3(7));
            let b = &(&t * &c) * &(&c3(5) + &s);
            (&a - &b).scale(&rat(3, 1)).checked_div(&u.pow(3))?
        }
        4 => {
            let tt = &t * &t;
            let first = tt.scale(&rat(3, 1)).checked_div(&u)?;
            let second = (&(&t * &c) * &(&c3(3) - &s)).scale(&rat(3, 1)).checked_div(&u.pow(2))?;
            let third = (&c3(2) - &s).scale(&rat(3, 1)).checked_div(&u.pow(2))?;
            (&(&first - &second) + &third).derive_n(4)?
        }
        _ => return Err(GenfunError::UnsupportedL(l)),
    };
    Ok(out)
}

/// The `l = 3` closed form in a commonly quoted variant, with a spurious factor 3
/// on the `t cos t` term. It disagrees with the table from `t^1` on; kept so
/// the verification report can show the discrepancy.
pub fn variant_l3_egf(order: usize) -> Result<Series, GenfunError> {
    let s = trig_series(TrigKind::Sin, order);
    let c = trig_series(TrigKind::Cos, order);
    let t = Series::t(order);
    let k = |v: i64| Series::one(order).scale(&rat(v, 1));
    let a = &s * &(&s.scale(&rat(3, 1)) + &k(7));
    let b = (&(&t * &c) * &(&k(5) + &s)).scale(&rat(3, 1));
    let u = &k(1) - &s;
    Ok((&a - &b).scale(&rat(3, 1)).checked_div(&u.pow(3))?)
}

/// Applies the differential operator for `l` to a given `K(t) = sec t + tan t`.
///
/// ```text
/// l = 0: int K dt
/// l = 1: K'
/// l = 2: K''' - (tK)''
/// l = 3: (K'' - 3tK' + K)'''
/// l = 4: (K''' - 6tK'' + (3t^2 + 4)K' - 3tK)''''
/// ```
///
/// The result has order `k.order() - operator_order_loss(l)`; an input too
/// short to survive the derivatives is an error.
pub fn operator_form_egf(l: u32, k: &Series) -> Result<Series, GenfunError> {
    if l > 4 {
        return Err(GenfunError::UnsupportedL(l));
    }
    if k.order() < operator_order_loss(l) {
        return Err(SeriesError::InsufficientOrder.into());
    }
    let d = |s: &Series, times| s.derive_n(times);
    let out = match l {
        0 => k.integrate(),
        1 => k.derive()?,
        2 => &d(k, 3)? - &d(&k.mul_by_t(), 2)?,
        3 => {
            let inner = &(&d(k, 2)? - &d(k, 1)?.mul_by_t().scale(&rat(3, 1))) + k;
            d(&inner, 3)?
        }
        4 => {
            let k1 = d(k, 1)?;
            let tt = Series::t(k.order()).mul_by_t();
            let poly = &tt.scale(&rat(3, 1)) + &Series::one(k.order()).scale(&rat(4, 1));
            let inner = &(&(&d(k, 3)? - &d(k, 2)?.mul_by_t().scale(&rat(6, 1))) + &(&poly * &k1))
                - &k.mul_by_t().scale(&rat(3, 1));
            d(&inner, 4)?
        }
        _ => unreachable!(),
    };
    Ok(out)
}

/// `sum K_{index(n)}^l x^l y^n / (l! n!)` over `l <= order_x`, `n <= order_y`;
/// cells without a value contribute 0.
fn bivariate_egf(
    table: &mut KTable,
    order_x: usize,
    order_y: usize,
    index: impl Fn(i64) -> i64,
) -> Result<BiSeries, GenfunError> {
    let mut out = BiSeries::zero(order_x, order_y);
    for a in 0..=order_x {
        for b in 0..=order_y {
            let n = index(b as i64);
            if !in_domain(n, a as u32) {
                continue;
            }
            let v = table.knl(n, a as u32)?;
            out.set(a, b, Rational::new(v, factorial(a as u64) * factorial(b as u64)));
        }
    }
    Ok(out)
}

/// `K(x, y)` on the given window.
pub fn knl_bivariate(table: &mut KTable, order_x: usize, order_y: usize) -> Result<BiSeries, GenfunError> {
    bivariate_egf(table, order_x, order_y, |n| n)
}

/// `K_x - (1 - 2x) K_yy + x y K_yyy` truncated to `(l_max, n_max)`.
pub fn pde_residual(table: &mut KTable, l_max: usize, n_max: usize) -> Result<BiSeries, GenfunError> {
    let k = knl_bivariate(table, l_max + 1, n_max + 3)?;
    let kx = k.dx()?.truncate(l_max, n_max);
    let kyy = k.dy()?.dy()?.truncate(l_max, n_max);
    let kyyy = k.dy()?.dy()?.dy()?.truncate(l_max, n_max);
    let one_minus_2x = [(0, 0, rat(1, 1)), (1, 0, rat(-2, 1))];
    let xy = [(1, 1, rat(1, 1))];
    let r = kx
        .checked_sub(&kyy.scale_poly(&one_minus_2x))?
        .checked_add(&kyyy.scale_poly(&xy))?;
    Ok(r)
}

/// The split functions `R_n^l = K_{2n}^l` and `S_n^l = K_{2n-1}^l`, with the
/// equation each is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityPde {
    /// `R_x = (1 - 2x) R_y - 2xy R_yy`.
    R,
    /// `S_x = (1 - 2x) S_y - x(2y - 1) S_yy`, a commonly quoted variant. Not satisfied.
    SVariant,
    /// `S_x = (1 - x) S_y - 2xy S_yy`, which is what the recurrence gives at odd `n`.
    SDerived,
}

pub fn pde_residual_parity(
    table: &mut KTable,
    which: ParityPde,
    l_max: usize,
    n_max: usize,
) -> Result<BiSeries, GenfunError> {
    let f = match which {
        ParityPde::R => bivariate_egf(table, l_max + 1, n_max + 2, |n| 2 * n)?,
        ParityPde::SVariant | ParityPde::SDerived => {
            bivariate_egf(table, l_max + 1, n_max + 2, |n| 2 * n - 1)?
        }
    };
    let fx = f.dx()?.truncate(l_max, n_max);
    let fy = f.dy()?.truncate(l_max, n_max);
    let fyy = f.dy()?.dy()?.truncate(l_max, n_max);
    let (y_terms, yy_terms) = match which {
        ParityPde::R => (vec![(0, 0, rat(1, 1)), (1, 0, rat(-2, 1))], vec![(1, 1, rat(-2, 1))]),
        ParityPde::SVariant => (
            vec![(0, 0, rat(1, 1)), (1, 0, rat(-2, 1))],
            vec![(1, 1, rat(-2, 1)), (1, 0, rat(1, 1))],
        ),
        ParityPde::SDerived => (vec![(0, 0, rat(1, 1)), (1, 0, rat(-1, 1))], vec![(1, 1, rat(-2, 1))]),
    };
    let r = fx
        .checked_sub(&fy.scale_poly(&y_terms))?
        .checked_sub(&fyy.scale_poly(&yy_terms))?;
    Ok(r)
}

fn first_nonzero(r: &BiSeries) -> String {
    match r.nonzero_entries().first() {
        Some((a, b, v)) => format!("first nonzero at (l={a}, n={b}): {v}"),
        None => "all zero".to_string(),
    }
}

fn first_mismatch(a: &Series, b: &Series) -> String {
    let order = a.order().min(b.order());
    match (0..=order).find(|&k| a.coeff(k) != b.coeff(k)) {
        Some(k) => format!("t^{k}: {} vs {}", a.egf_term(k), b.egf_term(k)),
        None => format!("equal to order {order}"),
    }
}

/// Univariate checks: table, closed form and operator form agree for
/// `l = 1..=4`; `l = 0` operator form agrees with the table.
pub fn egf_report(table: &mut KTable, order: usize) -> Report {
    let mut report = Report::new("genfun");
    let k = trig_series(TrigKind::SecPlusTan, order + operator_order_loss(4));
    for l in 0..=4u32 {
        let mut run = || -> Result<Vec<Check>, GenfunError> {
            let from_table = egf_from_table(table, l, order)?;
            let op = operator_form_egf(l, &k)?.truncate(order);
            let mut checks = vec![Check::new(
                format!("egf l={l} operator=table"),
                op == from_table,
                first_mismatch(&op, &from_table),
            )];
            if l >= 1 {
                let closed = closed_form_egf(l, order)?;
                checks.push(Check::new(
                    format!("egf l={l} closed=table"),
                    closed == from_table,
                    first_mismatch(&closed, &from_table),
                ));
            }
            if l == 3 {
                let variant = variant_l3_egf(order)?;
                checks.push(Check::new(
                    "egf l=3 variant form (3 t cos t (5 + sin t)) disagrees with table",
                    variant != from_table,
                    first_mismatch(&variant, &from_table),
                ));
            }
            Ok(checks)
        };
        match run() {
            Ok(checks) => checks.into_iter().for_each(|c| report.push(c)),
            Err(e) => report.push(Check::new(format!("egf l={l}"), false, format!("error: {e}"))),
        }
    }
    report
}

/// Bivariate checks: the `K(x, y)` equation and the split `R`/`S` equations.
pub fn pde_report(table: &mut KTable, window: (usize, usize), parity_window: (usize, usize)) -> Report {
    let mut report = Report::new("pde");
    let (l, n) = window;
    match pde_residual(table, l, n) {
        Ok(r) => report.push(Check::new(format!("K_x=(1-2x)K_yy-xyK_yyy on ({l},{n})"), r.is_zero(), first_nonzero(&r))),
        Err(e) => report.push(Check::new("K pde", false, format!("error: {e}"))),
    }
    let (pl, pn) = parity_window;
    for (which, id, expect_zero) in [
        (ParityPde::R, "R_x=(1-2x)R_y-2xyR_yy", true),
        (ParityPde::SDerived, "S_x=(1-x)S_y-2xyS_yy", true),
        (ParityPde::SVariant, "S_x=(1-2x)S_y-x(2y-1)S_yy is not satisfied", false),
    ] {
        let id = format!("{id} on ({pl},{pn})");
        match pde_residual_parity(table, which, pl, pn) {
            Ok(r) => report.push(Check::new(id, r.is_zero() == expect_zero, first_nonzero(&r))),
            Err(e) => report.push(Check::new(id, false, format!("error: {e}"))),
        }
    }
    report
}

/// The coefficient of `x^l y^n` in `K(x, y)` for a given `K_n^l`.
pub fn bivariate_coefficient(value: Integer, l: u32, n: u32) -> Rational {
    Rational::new(value, factorial(l as u64) * factorial(n as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat_int};

    #[test]
    fn table_egf_examples() {
        let mut t = KTable::new();
        let l1 = egf_from_table(&mut t, 1, 12).unwrap();
        assert_eq!(l1, trig_series(TrigKind::InvOneMinusSin, 12));
        let l2 = egf_from_table(&mut t, 2, 6).unwrap();
        assert!(l2.coeff(0).is_zero());
        assert_eq!(l2.egf_term(3), rat(36, 1));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_egf(1, 6).unwrap().egf_term(5), rat(61, 1));
        assert!(closed_form_egf(2, 4).unwrap().coeff(0).is_zero());
        assert_eq!(closed_form_egf(3, 4).unwrap().egf_term(1), rat(6, 1));
        assert_eq!(closed_form_egf(5, 4), Err(GenfunError::UnsupportedL(5)));
        // the l = 3 variant gives -24 here
        assert_eq!(variant_l3_egf(4).unwrap().egf_term(1), rat(-24, 1));
    }

    #[test]
    fn operator_form_examples() {
        let k = trig_series(TrigKind::SecPlusTan, 20);
        let e = crate::euler::boustrophedon(21);
        let k1 = operator_form_egf(1, &k).unwrap();
        let k0 = operator_form_egf(0, &k).unwrap();
        for n in 1..=18 {
            assert_eq!(k1.egf_term(n), rat_int(e.values()[n + 1].clone()));
            assert_eq!(k0.egf_term(n), rat_int(e.values()[n - 1].clone()));
        }
        assert_eq!(operator_form_egf(2, &k).unwrap().egf_term(3), rat(36, 1));
        let short = trig_series(TrigKind::SecPlusTan, 5);
        assert_eq!(operator_form_egf(4, &short), Err(GenfunError::Series(SeriesError::InsufficientOrder)));
    }

    #[test]
    fn second_y_derivative_times_x() {
        // x * K_yy at (l, n) is l K_{n+2}^{l-1} / (l! n!)
        let mut t = KTable::new();
        let k = knl_bivariate(&mut t, 5, 9).unwrap();
        let g = k.dy().unwrap().dy().unwrap().mul_by_x();
        for l in 1..=5u32 {
            for n in 0..=7u32 {
                let want = bivariate_coefficient(t.knl(n as i64 + 2, l - 1).unwrap() * int(l as i64), l, n);
                assert_eq!(*g.get(l as usize, n as usize), want);
            }
        }
    }

    #[test]
    fn pde_residual_entries() {
        let mut t = KTable::new();
        let r = pde_residual(&mut t, 6, 14).unwrap();
        assert!(r.get(0, 0).is_zero());
        assert!(r.get(1, 1).is_zero());
        assert!(r.is_zero(), "{r:?}");
    }

    #[test]
    fn parity_residuals() {
        let mut t = KTable::new();
        let r = pde_residual_parity(&mut t, ParityPde::R, 6, 7).unwrap();
        assert!(r.is_zero());
        let s = pde_residual_parity(&mut t, ParityPde::SDerived, 6, 7).unwrap();
        assert!(s.is_zero());
        let p = pde_residual_parity(&mut t, ParityPde::SVariant, 6, 7).unwrap();
        assert_eq!(p.nonzero_entries()[0], (1, 1, rat(-4, 1)));
    }

    #[test]
    fn reports_pass() {
        let mut t = KTable::new();
        let r = egf_report(&mut t, 20);
        assert!(r.passed(), "{r}");
        let p = pde_report(&mut t, DEFAULT_WINDOW, PARITY_WINDOW);
        assert!(p.passed(), "{p}");
    }
}
