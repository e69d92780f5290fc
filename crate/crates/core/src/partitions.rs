//! Integer partitions, the degree-admissible subset and labeled groupings.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// A partition of `n`: a weakly decreasing list of positive parts.
///
/// Ordering is lexicographic on the parts, so sorting a list of partitions in
/// *descending* order yields the reverse-lexicographic order used everywhere
/// in this crate (`{4} > {3,1} > {2,2} > {2,1,1} > {1,1,1,1}`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
    n: u32,
    // alpha[i] = number of parts equal to i; alpha[0] is always 0
    alpha: Vec<u32>,
}

impl Partition {
    /// Builds a partition from parts given in any order.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("a partition needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let n = parts.iter().try_fold(0u32, |acc, &p| acc.checked_add(p)).ok_or_else(|| {
            Error::InvalidArgument("partition sum overflows".into())
        })?;
        let mut alpha = vec![0u32; parts[0] as usize + 1];
        for &p in &parts {
            alpha[p as usize] += 1;
        }
        Ok(Partition { parts, n, alpha })
    }

    /// The one-part partition `{n}`.
    pub fn trivial(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Multiplicity of the part `i`.
    pub fn alpha(&self, i: u32) -> u32 {
        self.alpha.get(i as usize).copied().unwrap_or(0)
    }

    /// `(part, multiplicity)` pairs in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        (1..self.alpha.len())
            .rev()
            .filter(|&i| self.alpha[i] > 0)
            .map(|i| (i as u32, self.alpha[i]))
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.len() == 1
    }

    /// Brace notation, e.g. `{2,1,1}`.
    pub fn braced(&self) -> String {
        format!("{{{self}}}")
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts.cmp(&other.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses comma-separated parts, e.g. `"2,1,1"`. Surrounding braces are accepted.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}');
        let parts = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidArgument(format!("bad partition part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

pub fn gcd(a: i64, b: i64) -> u64 {
    num_integer::gcd(a.unsigned_abs(), b.unsigned_abs())
}

pub fn factorial(k: u64) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// All partitions of `n` in reverse-lexicographic order.
pub fn partitions_of(n: u32) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(Error::InvalidArgument("partitions_of requires n >= 1".into()));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fill_partitions(n, n, &mut prefix, &mut out);
    Ok(out)
}

fn fill_partitions(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition::new(prefix.clone()).expect("generated parts are valid"));
        return;
    }
    for first in (1..=rest.min(max)).rev() {
        prefix.push(first);
        fill_partitions(rest - first, first, prefix, out);
        prefix.pop();
    }
}

/// Partitions of `n` whose parts `n_i` satisfy `n_i * d / n ∈ Z`.
///
/// The result depends on `d` only through `gcd(n, d)` and has as many elements
/// as there are partitions of that gcd.
pub fn admissible_partitions(n: u32, d: i64) -> Result<Vec<Partition>> {
    if n < 2 {
        return Err(Error::InvalidArgument("admissible_partitions requires n >= 2".into()));
    }
    Ok(partitions_of(n)?
        .into_iter()
        .filter(|p| p.parts().iter().all(|&ni| is_admissible_part(ni, n, d)))
        .collect())
}

pub(crate) fn is_admissible_part(part: u32, n: u32, d: i64) -> bool {
    (part as i128 * d as i128) % n as i128 == 0
}

/// Number of ways to group the (labeled) parts of `fine` into unordered
/// blocks whose block sums form the multiset `coarse`.
pub fn grouping_count(fine: &Partition, coarse: &Partition) -> Result<BigUint> {
    check_same_total(fine, coarse)?;
    let mut count = BigUint::from(0u32);
    let mut state = GroupingSearch::new(fine, coarse);
    state.run(&mut |_| count += 1u32);
    Ok(count)
}

/// The groupings counted by [`grouping_count`], each as a descending list of
/// blocks, every block canonicalised as a [`Partition`].
pub fn grouping_enumerate(fine: &Partition, coarse: &Partition) -> Result<Vec<Vec<Partition>>> {
    check_same_total(fine, coarse)?;
    let mut out = Vec::new();
    let mut state = GroupingSearch::new(fine, coarse);
    state.run(&mut |blocks: &[Vec<u32>]| {
        let mut grouping: Vec<Partition> = blocks
            .iter()
            .map(|b| Partition::new(b.clone()).expect("blocks are nonempty"))
            .collect();
        grouping.sort_by(|a, b| b.n().cmp(&a.n()).then_with(|| b.cmp(a)));
        out.push(grouping);
    });
    Ok(out)
}

fn check_same_total(fine: &Partition, coarse: &Partition) -> Result<()> {
    if fine.n() != coarse.n() {
        return Err(Error::InvalidArgument(format!(
            "grouping needs equal sums, got {} and {}",
            fine.braced(),
            coarse.braced()
        )));
    }
    Ok(())
}

/// Set-partition search over labeled parts. Each block is generated exactly
/// once by always extending the lowest-index unassigned part.
struct GroupingSearch<'a> {
    items: &'a [u32],
    used: Vec<bool>,
    // remaining block sums still to be produced
    targets: BTreeMap<u32, u32>,
    blocks: Vec<Vec<u32>>,
}

impl<'a> GroupingSearch<'a> {
    fn new(fine: &'a Partition, coarse: &Partition) -> Self {
        let mut targets = BTreeMap::new();
        for &c in coarse.parts() {
            *targets.entry(c).or_insert(0) += 1;
        }
        GroupingSearch { items: fine.parts(), used: vec![false; fine.len()], targets, blocks: Vec::new() }
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[Vec<u32>])) {
        let Some(first) = self.used.iter().position(|u| !u) else {
            visit(&self.blocks);
            return;
        };
        self.used[first] = true;
        let rest: Vec<usize> = (first + 1..self.items.len()).filter(|&i| !self.used[i]).collect();
        let mut chosen = Vec::new();
        self.extend_block(first, &rest, 0, self.items[first], &mut chosen, visit);
        self.used[first] = false;
    }

    fn extend_block(
        &mut self,
        first: usize,
        rest: &[usize],
        from: usize,
        sum: u32,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[Vec<u32>]),
    ) {
        if self.targets.get(&sum).copied().unwrap_or(0) > 0 {
            *self.targets.get_mut(&sum).unwrap() -= 1;
            let mut block = vec![self.items[first]];
            block.extend(chosen.iter().map(|&i| self.items[i]));
            self.blocks.push(block);
            self.run(visit);
            self.blocks.pop();
            *self.targets.get_mut(&sum).unwrap() += 1;
        }
        let max_target = self
            .targets
            .iter()
            .rev()
            .find(|(_, &c)| c > 0)
            .map(|(&t, _)| t)
            .unwrap_or(0);
        for k in from..rest.len() {
            let idx = rest[k];
            let next = sum + self.items[idx];
            if next > max_target {
                continue;
            }
            self.used[idx] = true;
            chosen.push(idx);
            self.extend_block(first, rest, k + 1, next, chosen, visit);
            chosen.pop();
            self.used[idx] = false;
        }
    }
}

/// Rank of the local system attached to a partition with `r` parts: `(r-1)!`.
pub fn local_system_rank(p: &Partition) -> BigUint {
    factorial(p.len() as u64 - 1)
}

/// Order of the stabilizer of the partition in the symmetric group on its parts:
/// the product of the factorials of the part multiplicities.
pub fn stabilizer_order(p: &Partition) -> BigUint {
    p.multiplicities().iter().fold(BigUint::one(), |acc, &(_, m)| acc * factorial(m as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn enumerates_four() {
        let got: Vec<String> = partitions_of(4).unwrap().iter().map(|q| q.to_string()).collect();
        assert_eq!(got, ["4", "3,1", "2,2", "2,1,1", "1,1,1,1"]);
        assert_eq!(partitions_of(1).unwrap(), vec![p("1")]);
        assert!(partitions_of(0).is_err());
    }

    #[test]
    fn order_is_reverse_lex() {
        let all = partitions_of(7).unwrap();
        let mut sorted = all.clone();
        sorted.sort_by(|a, b| b.cmp(a));
        assert_eq!(all, sorted);
    }

    #[test]
    fn admissible_examples() {
        assert_eq!(admissible_partitions(4, 2).unwrap(), vec![p("4"), p("2,2")]);
        assert_eq!(admissible_partitions(4, 0).unwrap().len(), 5);
        assert_eq!(admissible_partitions(6, 4).unwrap(), vec![p("6"), p("3,3")]);
        assert_eq!(admissible_partitions(7, 3).unwrap(), vec![p("7")]);
        assert_eq!(admissible_partitions(4, -2).unwrap(), vec![p("4"), p("2,2")]);
        assert!(admissible_partitions(1, 0).is_err());
    }

    #[test]
    fn grouping_counts_from_n4_example() {
        let c = p("2,2");
        assert_eq!(grouping_count(&p("1,1,1,1"), &c).unwrap(), 3u32.into());
        assert_eq!(grouping_count(&p("2,1,1"), &c).unwrap(), 1u32.into());
        assert_eq!(grouping_count(&p("2,2"), &c).unwrap(), 1u32.into());
        assert_eq!(grouping_count(&p("3,1"), &c).unwrap(), 0u32.into());
        assert!(grouping_count(&p("3,1"), &p("3")).is_err());
    }

    #[test]
    fn grouping_enumeration_shapes() {
        let g = grouping_enumerate(&p("1,1,1,1"), &p("2,2")).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.iter().all(|blocks| blocks == &vec![p("1,1"), p("1,1")]));
        assert_eq!(grouping_enumerate(&p("2,1,1"), &p("2,2")).unwrap(), vec![vec![p("2"), p("1,1")]]);
        assert_eq!(grouping_enumerate(&p("4"), &p("4")).unwrap(), vec![vec![p("4")]]);
    }

    #[test]
    fn rank_constants() {
        assert_eq!(local_system_rank(&p("5")), 1u32.into());
        assert_eq!(local_system_rank(&p("2,1,1")), 2u32.into());
        assert_eq!(local_system_rank(&p("1,1,1,1")), 6u32.into());
        assert_eq!(stabilizer_order(&p("2,2")), 2u32.into());
        assert_eq!(stabilizer_order(&p("3,1")), 1u32.into());
        assert_eq!(stabilizer_order(&p("1,1,1,1")), 24u32.into());
    }

    #[test]
    fn parse_and_display() {
        let q: Partition = "1, 2,1".parse().unwrap();
        assert_eq!(q.to_string(), "2,1,1");
        assert_eq!(q.braced(), "{2,1,1}");
        assert_eq!(q.alpha(1), 2);
        assert_eq!(q.alpha(3), 0);
        assert!("2,0".parse::<Partition>().is_err());
        assert!("".parse::<Partition>().is_err());
    }
}
