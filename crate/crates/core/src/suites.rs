//! Named verification suites, shared by the command line and the acceptance
//! tests. Each suite returns a [`Report`] with exact witnesses.

use std::fmt;
use std::str::FromStr;

use crate::euler::{boustrophedon, via_series};
use crate::exact::{int, Integer};
use crate::genfun::{egf_report, pde_report, DEFAULT_WINDOW, PARITY_WINDOW};
use crate::oracle::{
    count_boundary_caustic_types, count_extreme_boundary_types, count_types, DEFAULT_BUDGET,
};
use crate::report::{Check, Report};
use crate::table::{closed_form, divisibility_report, in_domain, verify_identities, KTable, TableError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Recurrence,
    ClosedForms,
    Genfun,
    Pde,
    Identities,
    Negative,
    Oracle,
    Divisibility,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Recurrence,
        Suite::ClosedForms,
        Suite::Genfun,
        Suite::Pde,
        Suite::Identities,
        Suite::Negative,
        Suite::Oracle,
        Suite::Divisibility,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Recurrence => "recurrence",
            Suite::ClosedForms => "closed-forms",
            Suite::Genfun => "genfun",
            Suite::Pde => "pde",
            Suite::Identities => "identities",
            Suite::Negative => "negative",
            Suite::Oracle => "oracle",
            Suite::Divisibility => "divisibility",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    /// Series order for the generating function checks.
    pub order: usize,
    /// Largest `n - 1 + l` handed to the brute-force oracle.
    pub oracle_budget: usize,
    /// Largest `n - 1 + l` for the caustic and extreme-boundary tallies.
    pub tally_budget: usize,
    pub identities_l_max: u32,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { order: 20, oracle_budget: DEFAULT_BUDGET, tally_budget: 6, identities_l_max: 8 }
    }
}

/// Values for `n = 0, -1, ..., -5` and `l = 1..=5`; `None` has no value.
pub const NEGATIVE_TABLE: [[Option<u64>; 5]; 6] = [
    [Some(1), Some(0), Some(0), Some(0), Some(0)],
    [Some(1), Some(0), Some(0), Some(0), Some(0)],
    [None, Some(1), Some(0), Some(0), Some(0)],
    [None, None, Some(2), Some(0), Some(0)],
    [None, None, None, Some(6), Some(0)],
    [None, None, None, None, Some(24)],
];

fn value_check(id: String, got: Result<Integer, TableError>, want: &Integer) -> Check {
    match got {
        Ok(v) => Check::equal(id, &v, want),
        Err(e) => Check::new(id, false, format!("error: {e}")),
    }
}

pub fn recurrence(table: &mut KTable) -> Report {
    let mut r = Report::new("recurrence");
    r.push(value_check("K_3^2".into(), table.knl(3, 2), &int(36)));
    r.push(value_check("K_1^3".into(), table.knl(1, 3), &int(6)));

    let a = boustrophedon(51);
    let b = via_series(51);
    let first_diff = a.values().iter().zip(b.values()).position(|(x, y)| x != y);
    r.push(Check::new(
        "euler boustrophedon=series up to K_50",
        first_diff.is_none() && a.max_index() >= 50 && b.max_index() >= 50,
        match first_diff {
            Some(i) => format!("differ at {i}"),
            None => format!("K_50={}", a.values()[50]),
        },
    ));
    for n in 1..=30i64 {
        let (prev, next) = ((n - 1) as usize, (n + 1) as usize);
        for (name, list) in [("boustrophedon", &a), ("series", &b)] {
            r.push(value_check(format!("K_{n}^0=K_{} ({name})", n - 1), table.knl(n, 0), &list.values()[prev]));
            r.push(value_check(format!("K_{n}^1=K_{} ({name})", n + 1), table.knl(n, 1), &list.values()[next]));
        }
    }
    // the defining relation, read back from the memo
    for l in 1..=8u32 {
        for n in -(l as i64) + 2..=20 {
            if !(in_domain(n, l) && in_domain(n, l - 1) && in_domain(n - 2, l + 1)) {
                continue;
            }
            let id = format!("K_{}^{}=K_{n}^{l}-{n}*{l}*K_{n}^{}", n - 2, l + 1, l - 1);
            let rhs = table.knl(n, l).and_then(|x| table.knl(n, l - 1).map(|y| x - int(n * l as i64) * y));
            match rhs {
                Ok(rhs) => r.push(value_check(id, table.knl(n - 2, l + 1), &rhs)),
                Err(e) => r.push(Check::new(id, false, format!("error: {e}"))),
            }
        }
    }
    r
}

pub fn closed_forms(table: &mut KTable) -> Report {
    let mut r = Report::new("closed-forms");
    for l in 2..=5u32 {
        for n in (-(l as i64)).max(-2)..=20 {
            let id = format!("closed l={l} n={n}");
            match table.knl(n, l) {
                Ok(want) => r.push(value_check(id, closed_form(table, n, l), &want)),
                Err(e) => r.push(Check::new(id, false, format!("error: {e}"))),
            }
        }
    }
    r
}

pub fn negative(table: &mut KTable) -> Report {
    let mut r = Report::new("negative");
    for (row, cells) in NEGATIVE_TABLE.iter().enumerate() {
        let n = -(row as i64);
        for (col, want) in cells.iter().enumerate() {
            let l = col as u32 + 1;
            let id = format!("K_{n}^{l}");
            match (want, table.knl(n, l)) {
                (Some(w), got) => r.push(value_check(id, got, &Integer::from(*w))),
                (None, Err(TableError::OutOfDomain { .. })) => r.push(Check::new(id, true, "?")),
                (None, other) => r.push(Check::new(id, false, format!("expected no value, got {other:?}"))),
            }
        }
    }
    r
}

/// Brute-force component counts against the table, plus the two tallies of
/// types touching a stratum.
pub fn oracle(table: &mut KTable, budget: usize, tally_budget: usize) -> Report {
    let mut r = oracle_counts(table, budget);
    r.extend(tally_counts(table, tally_budget.min(budget)));
    r
}

/// `count_types(n, l) = K_n^l` for every `n - 1 + l <= budget`.
pub fn oracle_counts(table: &mut KTable, budget: usize) -> Report {
    let mut r = Report::new("oracle");
    for n in 1..=budget + 1 {
        for l in 0..=budget + 1 - n {
            let id = format!("types({n},{l})=K_{n}^{l}");
            let got = count_types(n, l, budget);
            match (got, table.knl(n as i64, l as u32)) {
                (Ok(c), Ok(k)) => r.push(Check::equal(id, &Integer::from(c), &k)),
                (g, k) => r.push(Check::new(id, false, format!("oracle={g:?} table={k:?}"))),
            }
        }
    }
    r
}

/// Caustic and extreme-boundary tallies for every `n - 1 + l <= budget`.
pub fn tally_counts(table: &mut KTable, budget: usize) -> Report {
    let mut r = Report::new("oracle-tallies");
    for n in 2..=budget + 1 {
        for l in 1..=budget + 1 - n {
            let Ok(prev) = table.knl(n as i64, l as u32 - 1) else { continue };
            let caustic_want = int((l * (n - 1)) as i64) * &prev;
            let extreme_want = int(2 * l as i64) * &prev;
            for (id, got, want) in [
                (format!("caustic({n},{l})=l(n-1)K_{n}^{}", l - 1), count_boundary_caustic_types(n, l, budget), caustic_want),
                (format!("extreme({n},{l})=2lK_{n}^{}", l - 1), count_extreme_boundary_types(n, l, budget), extreme_want),
            ] {
                match got {
                    Ok(c) => r.push(Check::equal(id, &Integer::from(c), &want)),
                    Err(e) => r.push(Check::new(id, false, format!("error: {e}"))),
                }
            }
        }
    }
    r
}

pub fn run(suite: Suite, table: &mut KTable, opts: &SuiteOptions) -> Vec<Report> {
    match suite {
        Suite::Recurrence => vec![recurrence(table)],
        Suite::ClosedForms => vec![closed_forms(table)],
        Suite::Genfun => vec![egf_report(table, opts.order)],
        Suite::Pde => vec![pde_report(table, DEFAULT_WINDOW, PARITY_WINDOW)],
        Suite::Identities => vec![verify_identities(table, opts.identities_l_max)],
        Suite::Negative => vec![negative(table)],
        Suite::Oracle => vec![oracle(table, opts.oracle_budget, opts.tally_budget)],
        Suite::Divisibility => vec![divisibility_report(table, 20, 8)],
        Suite::All => Suite::EACH.iter().flat_map(|&s| run(s, table, opts)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn cheap_suites_pass() {
        let mut t = KTable::new();
        for rep in [recurrence(&mut t), closed_forms(&mut t), negative(&mut t), oracle(&mut t, 5, 4)] {
            assert!(rep.passed(), "{rep}");
            assert!(!rep.checks.is_empty());
        }
    }

    #[test]
    fn negative_suite_reports_unknown_cells() {
        let rep = negative(&mut KTable::new());
        assert_eq!(rep.checks.iter().filter(|c| c.witness == "?").count(), 10);
    }
}
