//! Brute-force count of components of very nice M-morsifications of `B_n^l`.
//!
//! A component is identified with a discrete type: the snake (relative order
//! of the `n-1` critical values), the placement of the labeled boundary points
//! among the `n` monotone intervals, and the total order of all `n-1+l`
//! values. Which orders are possible is fixed by monotonicity: the polynomial
//! is monic, so the rightmost interval rises and directions alternate to the
//! left of it.

use std::fmt;

use thiserror::Error;

/// Largest `n - 1 + l` accepted by default.
pub const DEFAULT_BUDGET: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("n - 1 + l = {symbols} exceeds the budget {budget} (about {estimate:.3e} candidate orders)")]
    BudgetExceeded { symbols: usize, budget: usize, estimate: f64 },
    #[error("invalid snake for n = {n}: {ranks:?}")]
    InvalidSnake { n: usize, ranks: Vec<usize> },
    #[error("{0} requires n >= {1}")]
    DegreeTooSmall(&'static str, usize),
    #[error("{0} requires l >= 1")]
    NoBoundary(&'static str),
}

/// Whether `f` increases on interval `j` (interval `0` is `(-inf, x_1)`).
pub fn is_rising(n: usize, interval: usize) -> bool {
    (n - 1 - interval) % 2 == 0
}

/// Whether critical point `i` (0-based, left to right) is a local minimum.
pub fn is_local_min(n: usize, crit: usize) -> bool {
    is_rising(n, crit + 1)
}

/// Relative order of the critical values, left to right; rank 1 is the lowest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Snake {
    n: usize,
    ranks: Vec<usize>,
}

impl Snake {
    pub fn new(n: usize, ranks: Vec<usize>) -> Result<Self, OracleError> {
        let s = Snake { n, ranks };
        if s.is_valid() {
            Ok(s)
        } else {
            Err(OracleError::InvalidSnake { n: s.n, ranks: s.ranks })
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    fn is_valid(&self) -> bool {
        let m = self.n.saturating_sub(1);
        if self.n == 0 || self.ranks.len() != m {
            return false;
        }
        let mut seen = vec![false; m + 1];
        for &r in &self.ranks {
            if r == 0 || r > m || seen[r] {
                return false;
            }
            seen[r] = true;
        }
        (0..m.saturating_sub(1)).all(|i| {
            (self.ranks[i] < self.ranks[i + 1]) == is_local_min(self.n, i)
        })
    }
}

impl fmt::Display for Snake {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<String> = self.ranks.iter().map(ToString::to_string).collect();
        write!(f, "({})", r.join(","))
    }
}

/// All snakes of degree `n`, in lexicographic order of their ranks.
pub fn enumerate_snakes(n: usize) -> Vec<Snake> {
    assert!(n >= 1, "degree must be positive");
    let m = n - 1;
    let mut out = Vec::new();
    let mut ranks = Vec::with_capacity(m);
    let mut used = vec![false; m + 1];
    fn go(n: usize, m: usize, ranks: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Snake>) {
        if ranks.len() == m {
            out.push(Snake { n, ranks: ranks.clone() });
            return;
        }
        for r in 1..=m {
            if used[r] {
                continue;
            }
            if let Some(&prev) = ranks.last() {
                let i = ranks.len() - 1;
                if (prev < r) != is_local_min(n, i) {
                    continue;
                }
            }
            used[r] = true;
            ranks.push(r);
            go(n, m, ranks, used, out);
            ranks.pop();
            used[r] = false;
        }
    }
    go(n, m, &mut ranks, &mut used, &mut out);
    out
}

/// Labeled boundary points per interval, each list in left-to-right order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Placement {
    pub intervals: Vec<Vec<usize>>,
}

impl Placement {
    pub fn interval_of(&self, label: usize) -> Option<usize> {
        self.intervals.iter().position(|v| v.contains(&label))
    }

    /// Labels read left to right across all intervals.
    pub fn reading_order(&self) -> Vec<usize> {
        self.intervals.iter().flatten().copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// Value at critical point `i`.
    Crit(usize),
    /// Value at boundary point `b_j`.
    Boundary(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MorsificationType {
    pub n: usize,
    pub snake: Snake,
    pub placement: Placement,
    /// All values in increasing order.
    pub value_order: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("value order is not a permutation of the symbols")]
    NotAPermutation,
    #[error("critical values are not ordered as the snake")]
    SnakeMismatch,
    #[error("snake does not alternate")]
    BadSnake,
    #[error("b_{0} is not between the values at its interval ends")]
    OutsideInterval(usize),
    #[error("b_{0} and b_{1} share an interval but their values contradict monotonicity")]
    MonotonicityBroken(usize, usize),
    #[error("placement does not hold every label exactly once")]
    BadPlacement,
}

impl MorsificationType {
    pub fn boundary_count(&self) -> usize {
        self.placement.intervals.iter().map(Vec::len).sum()
    }

    /// Checks every realizability condition directly from the definitions.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.n;
        let m = n - 1;
        let l = self.boundary_count();
        if self.placement.intervals.len() != n {
            return Err(Violation::BadPlacement);
        }
        let mut labels = self.placement.reading_order();
        labels.sort_unstable();
        if labels != (0..l).collect::<Vec<_>>() {
            return Err(Violation::BadPlacement);
        }
        let mut pos = std::collections::HashMap::new();
        for (i, s) in self.value_order.iter().enumerate() {
            let ok = match s {
                Symbol::Crit(c) => *c < m,
                Symbol::Boundary(b) => *b < l,
            };
            if !ok || pos.insert(*s, i).is_some() {
                return Err(Violation::NotAPermutation);
            }
        }
        if pos.len() != m + l {
            return Err(Violation::NotAPermutation);
        }
        if !self.snake.is_valid() || self.snake.n != n {
            return Err(Violation::BadSnake);
        }
        let crit_seq: Vec<usize> = self
            .value_order
            .iter()
            .filter_map(|s| if let Symbol::Crit(c) = s { Some(*c) } else { None })
            .collect();
        for (rank0, c) in crit_seq.iter().enumerate() {
            if self.snake.ranks[*c] != rank0 + 1 {
                return Err(Violation::SnakeMismatch);
            }
        }
        let v = |c: usize| pos[&Symbol::Crit(c)];
        for (iv, labels) in self.placement.intervals.iter().enumerate() {
            let rising = is_rising(n, iv);
            for &b in labels {
                let w = pos[&Symbol::Boundary(b)];
                // the value at the left end is below w iff the interval rises
                if iv > 0 && (v(iv - 1) < w) != rising {
                    return Err(Violation::OutsideInterval(b));
                }
                if iv < m && (w < v(iv)) != rising {
                    return Err(Violation::OutsideInterval(b));
                }
            }
            for pair in labels.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                let (wa, wb) = (pos[&Symbol::Boundary(a)], pos[&Symbol::Boundary(b)]);
                if (wa < wb) != rising {
                    return Err(Violation::MonotonicityBroken(a, b));
                }
            }
        }
        Ok(())
    }

    /// Image under `x -> -x` (followed by `f -> -f` for odd `n`, to stay monic).
    pub fn mirror(&self) -> MorsificationType {
        let n = self.n;
        let m = n - 1;
        let intervals = self
            .placement
            .intervals
            .iter()
            .rev()
            .map(|v| v.iter().rev().copied().collect())
            .collect();
        let flip = |s: &Symbol| match s {
            Symbol::Crit(c) => Symbol::Crit(m - 1 - c),
            b => *b,
        };
        let mut value_order: Vec<Symbol> = self.value_order.iter().map(flip).collect();
        if n % 2 == 1 {
            value_order.reverse();
        }
        let mut ranks = vec![0; m];
        let mut r = 0;
        for s in &value_order {
            if let Symbol::Crit(c) = s {
                r += 1;
                ranks[*c] = r;
            }
        }
        MorsificationType { n, snake: Snake { n, ranks }, placement: Placement { intervals }, value_order }
    }

    /// Relabels boundary points by `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> MorsificationType {
        let intervals = self
            .placement
            .intervals
            .iter()
            .map(|v| v.iter().map(|&b| perm[b]).collect())
            .collect();
        let value_order = self
            .value_order
            .iter()
            .map(|s| match s {
                Symbol::Boundary(b) => Symbol::Boundary(perm[*b]),
                c => *c,
            })
            .collect();
        MorsificationType {
            n: self.n,
            snake: self.snake.clone(),
            placement: Placement { intervals },
            value_order,
        }
    }
}

fn check_budget(n: usize, l: usize, budget: usize) -> Result<(), OracleError> {
    let symbols = n - 1 + l;
    if symbols > budget {
        let placements: f64 = (0..l).map(|j| (n + j) as f64).product();
        let orders: f64 = (1..=symbols).map(|k| k as f64).product();
        return Err(OracleError::BudgetExceeded { symbols, budget, estimate: placements * orders });
    }
    Ok(())
}

/// Calls `visit` for every placement of labels `0..l` into `n` intervals.
fn for_each_placement(n: usize, l: usize, mut visit: impl FnMut(&Placement)) {
    fn go(p: &mut Placement, next: usize, l: usize, visit: &mut dyn FnMut(&Placement)) {
        if next == l {
            visit(p);
            return;
        }
        for iv in 0..p.intervals.len() {
            for at in 0..=p.intervals[iv].len() {
                p.intervals[iv].insert(at, next);
                go(p, next + 1, l, visit);
                p.intervals[iv].remove(at);
            }
        }
    }
    let mut p = Placement { intervals: vec![Vec::new(); n] };
    go(&mut p, 0, l, &mut visit);
}

/// Strict order relations forced by the snake alternation and the placement,
/// as predecessor bitmasks over symbols `0..m` (critical) and `m..m+l` (boundary).
fn constraints(n: usize, l: usize, p: &Placement) -> Vec<u32> {
    let m = n - 1;
    let mut below = vec![0u32; m + l];
    let mut less = |a: usize, b: usize| below[b] |= 1 << a;
    for i in 0..m.saturating_sub(1) {
        if is_local_min(n, i) { less(i, i + 1) } else { less(i + 1, i) }
    }
    for (iv, labels) in p.intervals.iter().enumerate() {
        let rising = is_rising(n, iv);
        for &b in labels {
            let w = m + b;
            if iv > 0 {
                if rising { less(iv - 1, w) } else { less(w, iv - 1) }
            }
            if iv < m {
                if rising { less(w, iv) } else { less(iv, w) }
            }
        }
        for pair in labels.windows(2) {
            let (a, b) = (m + pair[0], m + pair[1]);
            if rising { less(a, b) } else { less(b, a) }
        }
    }
    below
}

/// Walks every total order compatible with `below`, lowest value first.
fn for_each_order(below: &[u32], mut visit: impl FnMut(&[usize])) {
    fn go(below: &[u32], placed: u32, order: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if order.len() == below.len() {
            visit(order);
            return;
        }
        for (s, &pre) in below.iter().enumerate() {
            if placed & (1 << s) == 0 && pre & !placed == 0 {
                order.push(s);
                go(below, placed | (1 << s), order, visit);
                order.pop();
            }
        }
    }
    let mut order = Vec::with_capacity(below.len());
    go(below, 0, &mut order, &mut visit);
}

/// Visits every type of `B_n^l`.
pub fn for_each_type(
    n: usize,
    l: usize,
    budget: usize,
    mut visit: impl FnMut(&MorsificationType),
) -> Result<(), OracleError> {
    assert!(n >= 1, "degree must be positive");
    check_budget(n, l, budget)?;
    let m = n - 1;
    for_each_placement(n, l, |p| {
        let below = constraints(n, l, p);
        for_each_order(&below, |order| {
            let value_order: Vec<Symbol> = order
                .iter()
                .map(|&s| if s < m { Symbol::Crit(s) } else { Symbol::Boundary(s - m) })
                .collect();
            let mut ranks = vec![0; m];
            let mut r = 0;
            for &s in order.iter().filter(|&&s| s < m) {
                r += 1;
                ranks[s] = r;
            }
            visit(&MorsificationType {
                n,
                snake: Snake { n, ranks },
                placement: p.clone(),
                value_order,
            });
        });
    });
    Ok(())
}

/// Tallies over all types: total, and how many have their overall maximum
/// (respectively minimum) at a boundary point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TypeCensus {
    pub total: u64,
    pub boundary_max: u64,
    pub boundary_min: u64,
}

/// Counting version of [`for_each_type`]; walks the same orders without
/// materializing them.
pub fn census(n: usize, l: usize, budget: usize) -> Result<TypeCensus, OracleError> {
    assert!(n >= 1, "degree must be positive");
    check_budget(n, l, budget)?;
    let m = n - 1;
    let mut c = TypeCensus::default();
    for_each_placement(n, l, |p| {
        let below = constraints(n, l, p);
        for_each_order(&below, |order| {
            c.total += 1;
            if l > 0 {
                c.boundary_min += (order[0] >= m) as u64;
                c.boundary_max += (order[order.len() - 1] >= m) as u64;
            }
        });
    });
    Ok(c)
}

pub fn count_types(n: usize, l: usize, budget: usize) -> Result<u64, OracleError> {
    census(n, l, budget).map(|c| c.total)
}

/// Components of the boundary caustic: one labeled point sits on a critical
/// point (carrying its value), everything else generic.
pub fn count_boundary_caustic_types(n: usize, l: usize, budget: usize) -> Result<u64, OracleError> {
    if n < 2 {
        return Err(OracleError::DegreeTooSmall("boundary caustic", 2));
    }
    if l == 0 {
        return Err(OracleError::NoBoundary("boundary caustic"));
    }
    check_budget(n, l, budget)?;
    let mut total = 0;
    for _label in 0..l {
        for _crit in 0..n - 1 {
            // the coincident point adds no value of its own and does not
            // constrain the others, which lie in open intervals
            total += count_types(n, l - 1, budget)?;
        }
    }
    Ok(total)
}

/// Types with a boundary value above all critical values plus types with one
/// below all of them; a type qualifying on both sides is counted twice.
pub fn count_extreme_boundary_types(n: usize, l: usize, budget: usize) -> Result<u64, OracleError> {
    if n < 2 {
        return Err(OracleError::DegreeTooSmall("extreme boundary", 2));
    }
    if l == 0 {
        return Err(OracleError::NoBoundary("extreme boundary"));
    }
    let c = census(n, l, budget)?;
    Ok(c.boundary_max + c.boundary_min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn snake_counts() {
        let counts: Vec<usize> = (1..=9).map(|n| enumerate_snakes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 5, 16, 61, 272, 1385]);
        assert_eq!(enumerate_snakes(3)[0].ranks(), &[2, 1]);
    }

    #[test]
    fn snake_validation() {
        assert!(Snake::new(3, vec![2, 1]).is_ok());
        assert!(Snake::new(3, vec![1, 2]).is_err());
        assert!(Snake::new(4, vec![1, 3, 2]).is_ok());
        assert!(Snake::new(4, vec![1, 1, 2]).is_err());
    }

    #[test]
    fn hand_counted_types() {
        assert_eq!(count_types(2, 1, 8).unwrap(), 2);
        assert_eq!(count_types(3, 1, 8).unwrap(), 5);
        assert_eq!(count_types(2, 2, 8).unwrap(), 8);
        assert_eq!(count_types(4, 0, 8).unwrap(), 2);
        assert_eq!(count_types(3, 2, 8).unwrap(), 36);
    }

    #[test]
    fn tally_counts_small() {
        assert_eq!(count_boundary_caustic_types(2, 1, 8).unwrap(), 1);
        assert_eq!(count_boundary_caustic_types(3, 1, 8).unwrap(), 2);
        assert_eq!(count_boundary_caustic_types(3, 2, 8).unwrap(), 20);
        assert_eq!(count_extreme_boundary_types(2, 1, 8).unwrap(), 2);
        assert_eq!(count_extreme_boundary_types(3, 1, 8).unwrap(), 2);
        assert_eq!(count_extreme_boundary_types(3, 2, 8).unwrap(), 20);
    }

    #[test]
    fn budget_is_enforced() {
        let e = count_types(5, 5, 8).unwrap_err();
        assert!(matches!(e, OracleError::BudgetExceeded { symbols: 9, budget: 8, .. }), "{e}");
    }

    #[test]
    fn monotone_line_forces_order() {
        let mut f = 1;
        for l in 0..=6 {
            if l > 0 {
                f *= l as u64;
            }
            assert_eq!(count_types(1, l, 8).unwrap(), f);
        }
    }

    /// Literal oracle: every placement times every permutation of the values,
    /// filtered by `validate`.
    fn brute_force(n: usize, l: usize) -> u64 {
        let m = n - 1;
        let symbols: Vec<Symbol> =
            (0..m).map(Symbol::Crit).chain((0..l).map(Symbol::Boundary)).collect();
        let mut count = 0;
        for_each_placement(n, l, |p| {
            let mut perm = symbols.clone();
            permute(&mut perm, 0, &mut |order| {
                let mut ranks = vec![0; m];
                let mut r = 0;
                for s in order {
                    if let Symbol::Crit(c) = s {
                        r += 1;
                        ranks[*c] = r;
                    }
                }
                let t = MorsificationType {
                    n,
                    snake: Snake { n, ranks },
                    placement: p.clone(),
                    value_order: order.to_vec(),
                };
                if t.validate().is_ok() {
                    count += 1;
                }
            });
        });
        count
    }

    fn permute(v: &mut Vec<Symbol>, k: usize, f: &mut dyn FnMut(&[Symbol])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn pruned_enumeration_matches_literal_filter() {
        for n in 1..=5 {
            for l in 0..=(5 - (n - 1)) {
                assert_eq!(count_types(n, l, 8).unwrap(), brute_force(n, l), "n={n} l={l}");
            }
        }
    }

    #[test]
    fn enumerated_types_are_valid_and_distinct() {
        for (n, l) in [(2, 2), (3, 2), (4, 2), (3, 3), (5, 1)] {
            let mut seen = HashSet::new();
            for_each_type(n, l, 8, |t| {
                assert_eq!(t.validate(), Ok(()));
                assert!(seen.insert(t.clone()));
            })
            .unwrap();
            assert_eq!(seen.len() as u64, count_types(n, l, 8).unwrap());
        }
    }

    #[test]
    fn mirror_is_an_involution_on_valid_types() {
        for (n, l) in [(2, 3), (3, 2), (4, 2), (5, 1), (6, 1)] {
            let mut all = HashSet::new();
            for_each_type(n, l, 8, |t| {
                all.insert(t.clone());
            })
            .unwrap();
            for t in &all {
                let m = t.mirror();
                assert_eq!(m.validate(), Ok(()), "n={n} l={l}");
                assert!(all.contains(&m));
                assert_eq!(m.mirror(), *t);
            }
        }
        for n in 2..=7 {
            let snakes: HashSet<Snake> = enumerate_snakes(n).into_iter().collect();
            for_each_type(n, 0, 8, |t| {
                assert!(snakes.contains(&t.mirror().snake));
            })
            .unwrap();
        }
    }

    #[test]
    fn label_symmetry() {
        for (n, l) in [(2, 3), (3, 3), (4, 2)] {
            let total = count_types(n, l, 8).unwrap();
            let fact: u64 = (1..=l as u64).product();
            assert_eq!(total % fact, 0);
            let mut identity_reading = 0;
            let perm: Vec<usize> = (0..l).rev().collect();
            for_each_type(n, l, 8, |t| {
                assert_eq!(t.relabel(&perm).validate(), Ok(()));
                if t.placement.reading_order() == (0..l).collect::<Vec<_>>() {
                    identity_reading += 1;
                }
            })
            .unwrap();
            assert_eq!(identity_reading * fact, total);
        }
    }

    #[test]
    fn validate_rejects_broken_types() {
        let mut bad = None;
        for_each_type(3, 1, 8, |t| {
            if bad.is_none() {
                bad = Some(t.clone());
            }
        })
        .unwrap();
        let mut t = bad.unwrap();
        t.value_order.reverse();
        assert!(t.validate().is_err());
    }
}
