use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{GroupSpec, ModuleError};

/// Multiset of cyclic summand lengths, stored in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct JordanType(Vec<usize>);

impl JordanType {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, ModuleError> {
        if parts.contains(&0) {
            return Err(ModuleError::InvalidJordanType("block sizes must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(JordanType(parts))
    }

    /// `{1^dim}`.
    pub fn trivial(dim: usize) -> Self {
        JordanType(vec![1; dim])
    }

    /// Reads block multiplicities off a rank sequence `r_0 = dim, r_1, …`
    /// of the powers of a nilpotent map: `m_i = r_{i-1} - 2 r_i + r_{i+1}`.
    pub fn from_rank_sequence(ranks: &[usize]) -> Self {
        let r = |i: usize| ranks.get(i).copied().unwrap_or(0) as i64;
        let mut parts = Vec::new();
        for size in (1..ranks.len()).rev() {
            let m = r(size - 1) - 2 * r(size) + r(size + 1);
            assert!(m >= 0, "rank sequence {ranks:?} is not that of a nilpotent map");
            parts.extend(std::iter::repeat_n(size, m as usize));
        }
        JordanType(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn num_blocks(&self) -> usize {
        self.0.len()
    }

    pub fn largest_block(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn multiplicity(&self, size: usize) -> usize {
        self.0.iter().filter(|&&s| s == size).count()
    }

    /// Multiset union.
    pub fn union(&self, other: &JordanType) -> JordanType {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        JordanType(parts)
    }

    /// Every Jordan type of dimension `dim` whose blocks have size at most `max_block`,
    /// in reverse lexicographic order.
    pub fn all_of_dim(dim: usize, max_block: usize) -> Vec<JordanType> {
        fn rec(rest: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<JordanType>) {
            if rest == 0 {
                out.push(JordanType(cur.clone()));
                return;
            }
            for part in (1..=cap.min(rest)).rev() {
                cur.push(part);
                rec(rest - part, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(dim, max_block, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for JordanType {
    type Err = ModuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(JordanType(Vec::new()));
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| ModuleError::InvalidJordanType(format!("bad block size `{}`", t.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        JordanType::new(parts)
    }
}

/// Jordan type of a cyclic module of length `l` restricted to the subgroup
/// generated by `σ^{p^k}`.
///
/// Writing `l = (l_H - 1)·p^k + r` with `1 ≤ r ≤ p^k`, the restriction splits
/// into `r` blocks of size `l_H` and `p^k - r` blocks of size `l_H - 1`.
pub fn restrict_cyclic_type(l: usize, group: &GroupSpec, k: u32) -> Result<JordanType, ModuleError> {
    if l < 1 || l > group.order() {
        return Err(ModuleError::LengthOutOfRange {
            length: l,
            order: group.order(),
        });
    }
    if k > group.n() {
        return Err(ModuleError::LevelOutOfRange { level: k, n: group.n() });
    }
    let q = group.power(k);
    let restricted_len = (l - 1) / q + 1;
    let r = l - (restricted_len - 1) * q;
    let mut parts = vec![restricted_len; r];
    if restricted_len > 1 {
        parts.extend(std::iter::repeat_n(restricted_len - 1, q - r));
    }
    Ok(JordanType(parts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        let t = JordanType::new(vec![1, 2, 4, 2]).unwrap();
        assert_eq!(t.to_string(), "4,2,2,1");
        assert_eq!("4, 2,2,1".parse::<JordanType>().unwrap(), t);
        assert!("4,0".parse::<JordanType>().is_err());
        assert!("4,x".parse::<JordanType>().is_err());
        assert_eq!("".parse::<JordanType>().unwrap().dim(), 0);
    }

    #[test]
    fn rank_sequence_inversion() {
        // {3,1}: ranks of N^i are 4, 2, 1, 0
        assert_eq!(JordanType::from_rank_sequence(&[4, 2, 1, 0]).parts(), &[3, 1]);
        assert_eq!(JordanType::from_rank_sequence(&[3, 0]).parts(), &[1, 1, 1]);
        assert_eq!(JordanType::from_rank_sequence(&[0]).parts(), &[] as &[usize]);
    }

    #[test]
    fn partition_counts() {
        // p(1..=8) = 1, 2, 3, 5, 7, 11, 15, 22
        let counts: Vec<usize> = (1..=8).map(|d| JordanType::all_of_dim(d, d).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(JordanType::all_of_dim(4, 2).len(), 3);
    }

    #[test]
    fn branching_rule_examples() {
        let g = GroupSpec::new(2, 2).unwrap();
        assert_eq!(restrict_cyclic_type(1, &g, 2).unwrap().parts(), &[1]);
        assert_eq!(restrict_cyclic_type(3, &g, 1).unwrap().parts(), &[2, 1]);
        assert_eq!(restrict_cyclic_type(4, &g, 1).unwrap().parts(), &[2, 2]);
        assert_eq!(restrict_cyclic_type(3, &g, 0).unwrap().parts(), &[3]);
        assert_eq!(restrict_cyclic_type(3, &g, 2).unwrap().parts(), &[1, 1, 1]);
        assert!(matches!(
            restrict_cyclic_type(5, &g, 1),
            Err(ModuleError::LengthOutOfRange { length: 5, order: 4 })
        ));
        assert!(matches!(
            restrict_cyclic_type(0, &g, 1),
            Err(ModuleError::LengthOutOfRange { .. })
        ));
        assert!(matches!(
            restrict_cyclic_type(2, &g, 3),
            Err(ModuleError::LevelOutOfRange { level: 3, n: 2 })
        ));
    }
}
