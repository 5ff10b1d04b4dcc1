//! Partitions, their two partial orders, and enumeration of `Λ_m^k`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A non-increasing sequence of positive integers.
///
/// The total order is graded-lexicographic: by weight, then lexicographic on
/// the parts, so `() < (1) < (1,1) < (2) < (1,1,1) < (2,1) < (3)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

/// The five basic statistics of a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stats {
    pub conjugate: Partition,
    pub weight: usize,
    /// `n(λ) = Σ (i-1) λ_i`.
    pub nstat: usize,
    /// Number of non-zero parts.
    pub rank: usize,
    /// Largest part.
    pub height: usize,
}

impl Partition {
    /// Validates and strips trailing zeros.
    pub fn new(parts: &[usize]) -> Result<Partition> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidRange(format!("parts {parts:?} are not non-increasing")));
        }
        let mut parts = parts.to_vec();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary non-negative integers into a partition.
    pub fn from_unsorted(parts: &[usize]) -> Partition {
        let mut p: Vec<usize> = parts.iter().copied().filter(|&x| x > 0).collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts: p }
    }

    pub fn empty() -> Partition {
        Partition::default()
    }

    /// The rectangle `k^m`.
    pub fn rectangle(k: usize, m: usize) -> Partition {
        if k == 0 {
            return Partition::empty();
        }
        Partition { parts: vec![k; m] }
    }

    /// Partition whose conjugate is `cols`.
    pub fn from_conjugate(cols: &[usize]) -> Result<Partition> {
        Ok(Partition::new(cols)?.conjugate())
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `λ_i` with 1-based `i`, zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to length `m`.
    pub fn padded(&self, m: usize) -> Vec<usize> {
        let mut v = self.parts.clone();
        v.resize(m.max(v.len()), 0);
        v
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of non-zero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn height(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let h = self.height();
        let parts = (1..=h).map(|j| self.parts.iter().filter(|&&x| x >= j).count()).collect();
        Partition { parts }
    }

    pub fn nstat(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, &x)| i * x).sum()
    }

    pub fn stats(&self) -> Stats {
        Stats {
            conjugate: self.conjugate(),
            weight: self.weight(),
            nstat: self.nstat(),
            rank: self.len(),
            height: self.height(),
        }
    }

    /// Cells `(i, j)`, 1-based, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &r)| (1..=r).map(move |j| (i + 1, j)))
    }

    /// Componentwise minimum with `cap`.
    pub fn cap(&self, cap: usize) -> Partition {
        Partition::from_unsorted(&self.parts.iter().map(|&x| x.min(cap)).collect::<Vec<_>>())
    }

    /// Sum of squares of the conjugate, `Σ (λ'_i)^2`.
    pub fn conjugate_square_sum(&self) -> usize {
        self.conjugate().parts.iter().map(|&c| c * c).sum()
    }
}

/// Containment of Young diagrams: `λ_i <= μ_i` for all `i`.
pub fn leq_contain(lambda: &Partition, mu: &Partition) -> bool {
    lambda.len() <= mu.len() && lambda.parts.iter().zip(&mu.parts).all(|(a, b)| a <= b)
}

/// Dominance: equal weights and every partial sum of `λ` bounded by that of `μ`.
pub fn leq_dominance(lambda: &Partition, mu: &Partition) -> bool {
    if lambda.weight() != mu.weight() {
        return false;
    }
    let n = lambda.len().max(mu.len());
    let (mut sa, mut sb) = (0, 0);
    for i in 1..=n {
        sa += lambda.part(i);
        sb += mu.part(i);
        if sa > sb {
            return false;
        }
    }
    true
}

/// All partitions with at most `m` parts, each at most `k`, in graded-lex order.
pub fn enumerate(m: usize, k: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill_bounded(m, k, &mut cur, &mut out);
    out.sort();
    out
}

fn fill_bounded(m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    out.push(Partition { parts: cur.clone() });
    if cur.len() == m {
        return;
    }
    let top = cur.last().copied().unwrap_or(k).min(k);
    for x in 1..=top {
        cur.push(x);
        fill_bounded(m, k, cur, out);
        cur.pop();
    }
}

/// Partitions of exactly `w` with at most `m` parts, in graded-lex order.
pub fn of_weight(w: usize, m: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill_weight(w, m, w, &mut cur, &mut out);
    out.sort();
    out
}

fn fill_weight(rest: usize, m: usize, top: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    if cur.len() == m {
        return;
    }
    for x in (1..=top.min(rest)).rev() {
        cur.push(x);
        fill_weight(rest - x, m, x, cur, out);
        cur.pop();
    }
}

/// Partitions of weight at most `n` with at most `m` parts, in graded-lex order.
pub fn up_to_weight(n: usize, m: usize) -> Vec<Partition> {
    (0..=n).flat_map(|w| of_weight(w, m)).collect()
}

/// Level truncation `Λ_m^k -> Λ_m^{k-1}`: componentwise `min(λ_i, k-1)`.
pub fn bar(lambda: &Partition, k: usize) -> Partition {
    lambda.cap(k.saturating_sub(1))
}

impl Ord for Partition {
    fn cmp(&self, other: &Partition) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Partition) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `(3,1)`, `3,1`, `[3, 1]`, `()` and `0`.
    fn from_str(s: &str) -> Result<Partition> {
        let inner = s.trim().trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']');
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts: std::result::Result<Vec<usize>, _> =
            inner.split(',').map(|x| x.trim().parse::<usize>()).collect();
        let parts = parts.map_err(|e| Error::Config(format!("bad partition {s:?}: {e}")))?;
        Partition::new(&parts)
    }
}

impl serde::Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Partition, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Partition::new(&v).map_err(serde::de::Error::custom)
    }
}

/// Shorthand used throughout tests and examples; panics on invalid input.
pub fn part(parts: &[usize]) -> Partition {
    Partition::new(parts).expect("valid partition")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn statistics() {
        let s = part(&[3, 1]).stats();
        assert_eq!(s.conjugate, part(&[2, 1, 1]));
        assert_eq!((s.weight, s.nstat, s.rank, s.height), (4, 1, 2, 3));
        let e = Partition::empty().stats();
        assert_eq!((e.conjugate, e.weight, e.nstat, e.rank, e.height), (Partition::empty(), 0, 0, 0, 0));
        let c = part(&[1, 1, 1]).stats();
        assert_eq!((c.conjugate, c.nstat), (part(&[3]), 3));
    }

    #[test]
    fn orders() {
        assert!(leq_contain(&part(&[1]), &part(&[2, 1])));
        assert!(leq_dominance(&part(&[1, 1]), &part(&[2])));
        let a = part(&[2, 2, 2]);
        let b = part(&[3, 1, 1, 1]);
        assert!(!leq_dominance(&a, &b) && !leq_dominance(&b, &a));
    }

    #[test]
    fn enumeration_and_truncation() {
        let e = enumerate(2, 2);
        let set: std::collections::BTreeSet<_> = e.iter().cloned().collect();
        let want: std::collections::BTreeSet<_> =
            [part(&[]), part(&[1]), part(&[2]), part(&[1, 1]), part(&[2, 1]), part(&[2, 2])].into();
        assert_eq!(set, want);
        assert_eq!(e.len(), 6);
        assert_eq!(bar(&part(&[3, 1]), 3), part(&[2, 1]));
        assert_eq!(bar(&part(&[3, 1]), 1), Partition::empty());
    }

    fn binomial(n: usize, k: usize) -> usize {
        (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
    }

    #[test]
    fn enumeration_counts() {
        for m in 0..=6 {
            for k in 0..=6 {
                // brute force: all vectors in [0,k]^m that are non-increasing
                let mut count = 0;
                let total = (k + 1usize).pow(m as u32);
                for code in 0..total {
                    let mut v = Vec::new();
                    let mut c = code;
                    for _ in 0..m {
                        v.push(c % (k + 1));
                        c /= k + 1;
                    }
                    if v.windows(2).all(|w| w[0] >= w[1]) {
                        count += 1;
                    }
                }
                assert_eq!(enumerate(m, k).len(), count);
                assert_eq!(count, binomial(m + k, m));
            }
        }
    }

    #[test]
    fn graded_lex_refines_both_orders() {
        for m in 0..=4 {
            for k in 0..=4 {
                let e = enumerate(m, k);
                for (i, a) in e.iter().enumerate() {
                    for (j, b) in e.iter().enumerate() {
                        if a != b && (leq_contain(a, b) || leq_dominance(a, b)) {
                            assert!(i < j, "{a} should precede {b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn weight_shells() {
        assert_eq!(of_weight(4, 2), vec![part(&[2, 2]), part(&[3, 1]), part(&[4])]);
        assert_eq!(up_to_weight(3, 3).len(), 7);
        assert_eq!(of_weight(0, 0), vec![Partition::empty()]);
    }

    #[test]
    fn parsing() {
        assert_eq!("(3,1)".parse::<Partition>().unwrap(), part(&[3, 1]));
        assert_eq!("()".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1,2".parse::<Partition>().is_err());
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        proptest::collection::vec(0usize..7, 0..6).prop_map(|v| Partition::from_unsorted(&v))
    }

    proptest! {
        #[test]
        fn conjugation_is_an_involution(l in arb_partition()) {
            prop_assert_eq!(l.conjugate().conjugate(), l.clone());
            prop_assert_eq!(l.conjugate().weight(), l.weight());
        }

        #[test]
        fn truncation_composes(l in arb_partition(), k in 1usize..6) {
            prop_assert_eq!(bar(&bar(&l, k), k - 1), bar(&l, k - 1));
        }

        #[test]
        fn conjugate_square_identity(l in arb_partition()) {
            let lhs: usize = l.parts().iter().enumerate().map(|(j, &x)| x * (2 * j + 1)).sum();
            prop_assert_eq!(lhs, l.conjugate_square_sum());
        }
    }
}
