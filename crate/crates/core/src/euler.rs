//! Classical Bernoulli-Euler (zigzag) numbers `K_n`, by two independent routes.

use num_traits::{One, Zero};

use crate::exact::{as_integer, trig_series, Integer, TrigKind};

/// `K_0 ..= K_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerList {
    values: Vec<Integer>,
}

impl EulerList {
    pub fn values(&self) -> &[Integer] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<&Integer> {
        self.values.get(n)
    }

    /// Highest index held.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }
}

/// Seidel's boustrophedon triangle.
///
/// Row `0` is `(1)`. Row `m` starts with `0` and then accumulates the entries
/// of row `m - 1` read right to left:
///
/// ```text
/// T(m, 0) = 0,   T(m, j) = T(m, j - 1) + T(m - 1, m - j)
/// ```
///
/// The last entry of row `m` is `K_m`. Read without the reversal each row is
/// the previous one summed back and forth, which is where the name comes from.
pub fn boustrophedon(count: usize) -> EulerList {
    let mut values = vec![Integer::one()];
    let mut row = vec![Integer::one()];
    for m in 1..=count {
        let mut next = Vec::with_capacity(m + 1);
        next.push(Integer::zero());
        for j in 1..=m {
            let v = &next[j - 1] + &row[m - j];
            next.push(v);
        }
        values.push(next[m].clone());
        row = next;
    }
    EulerList { values }
}

/// `K_n = n! [t^n] (sec t + tan t)`.
pub fn via_series(count: usize) -> EulerList {
    let k = trig_series(TrigKind::SecPlusTan, count);
    let values = (0..=count)
        .map(|n| as_integer(&k.egf_term(n)).expect("Bernoulli-Euler numbers are integers"))
        .collect();
    EulerList { values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn small(list: &EulerList) -> Vec<i64> {
        list.values().iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn first_terms() {
        assert_eq!(small(&boustrophedon(6)), vec![1, 1, 1, 2, 5, 16, 61]);
        assert_eq!(small(&via_series(6)), vec![1, 1, 1, 2, 5, 16, 61]);
        assert_eq!(small(&boustrophedon(0)), vec![1]);
    }

    #[test]
    fn cross_checked_values() {
        assert_eq!(*boustrophedon(9).get(9).unwrap(), int(7936));
        assert_eq!(*via_series(9).get(9).unwrap(), int(7936));
        assert_eq!(*via_series(7).get(7).unwrap(), int(272));
        assert_eq!(*boustrophedon(7).get(7).unwrap(), int(272));
        assert_eq!(*via_series(2).get(2).unwrap(), int(1));
    }

    #[test]
    fn both_methods_agree_to_fifty() {
        let a = boustrophedon(50);
        let b = via_series(50);
        assert_eq!(a, b);
        let v = a.values();
        assert!(v.iter().all(|x| *x > Integer::zero()));
        assert!(v[3..].windows(2).all(|w| w[0] < w[1]));
    }
}
