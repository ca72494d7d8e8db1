use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{max_order, FiniteGroup};
use crate::error::{Error, Result};

/// Declarative description of a group, mirrored one-to-one by the JSON
/// group-spec format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Symmetric { n: usize },
    Dihedral { order: usize },
    ElemAbelian { p: usize, k: usize },
    Product { a: Box<GroupSpec>, b: Box<GroupSpec> },
    Cayley { table: Vec<Vec<usize>> },
    PermGens { degree: usize, gens: Vec<Vec<usize>> },
}

fn bound_check(order: usize) -> Result<()> {
    let bound = max_order();
    if order > bound {
        Err(Error::OrderBound { order, bound })
    } else {
        Ok(())
    }
}

impl GroupSpec {
    pub fn cyclic(n: usize) -> Self {
        GroupSpec::Cyclic { n }
    }

    pub fn product(a: GroupSpec, b: GroupSpec) -> Self {
        GroupSpec::Product { a: Box::new(a), b: Box::new(b) }
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Cyclic { n } => cyclic(*n),
            GroupSpec::Symmetric { n } => symmetric(*n),
            GroupSpec::Dihedral { order } => dihedral(*order),
            GroupSpec::ElemAbelian { p, k } => elem_abelian(*p, *k),
            GroupSpec::Product { a, b } => {
                let ga = a.build()?;
                let gb = b.build()?;
                direct_product(&ga, &gb)
            }
            GroupSpec::Cayley { table } => FiniteGroup::from_table(table.clone(), "cayley"),
            GroupSpec::PermGens { degree, gens } => perm_gens(*degree, gens),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic { n } => write!(f, "cyclic:{n}"),
            GroupSpec::Symmetric { n } => write!(f, "symmetric:{n}"),
            GroupSpec::Dihedral { order } => write!(f, "dihedral:{order}"),
            GroupSpec::ElemAbelian { p, k } => write!(f, "elem_abelian:{p},{k}"),
            GroupSpec::Product { a, b } => write!(f, "{a}*{b}"),
            GroupSpec::Cayley { table } => write!(f, "cayley[{}]", table.len()),
            GroupSpec::PermGens { degree, gens } => write!(f, "perm_gens[{degree};{}]", gens.len()),
        }
    }
}

/// Accepts JSON (`{"kind":...}`) or the compact forms `cyclic:4`,
/// `symmetric:3`, `dihedral:8`, `elem_abelian:2,2` and products `a*b`.
impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return Ok(serde_json::from_str(s)?);
        }
        if let Some((a, b)) = s.split_once('*') {
            return Ok(GroupSpec::product(a.parse()?, b.parse()?));
        }
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("group spec '{s}' needs the form kind:args")))?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("'{t}': {e}"))))
            .collect::<Result<_>>()?;
        let one = |name: &str| -> Result<usize> {
            match nums.as_slice() {
                [x] => Ok(*x),
                _ => Err(Error::Parse(format!("{name} takes one argument"))),
            }
        };
        match kind.trim() {
            "cyclic" | "C" => Ok(GroupSpec::Cyclic { n: one("cyclic")? }),
            "symmetric" | "S" => Ok(GroupSpec::Symmetric { n: one("symmetric")? }),
            "dihedral" | "D" => Ok(GroupSpec::Dihedral { order: one("dihedral")? }),
            "elem_abelian" | "E" => match nums.as_slice() {
                [p, k] => Ok(GroupSpec::ElemAbelian { p: *p, k: *k }),
                _ => Err(Error::Parse("elem_abelian takes p,k".into())),
            },
            other => Err(Error::Parse(format!("unknown group kind '{other}'"))),
        }
    }
}

fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::Parse("cyclic group needs n >= 1".into()));
    }
    bound_check(n)?;
    let table = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
    FiniteGroup::from_trusted(n, table, format!("C{n}"))
}

fn elem_abelian(p: usize, k: usize) -> Result<FiniteGroup> {
    if p < 2 || (2..p).any(|d| p.is_multiple_of(d)) {
        return Err(Error::Parse(format!("{p} is not prime")));
    }
    let order = p
        .checked_pow(k as u32)
        .ok_or(Error::OrderBound { order: usize::MAX, bound: max_order() })?;
    bound_check(order)?;
    // index = sum v_i p^i, addition digit-wise mod p
    let add = |mut a: usize, mut b: usize| {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..k {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    };
    let mut table = vec![0u32; order * order];
    for a in 0..order {
        for b in 0..order {
            table[a * order + b] = add(a, b) as u32;
        }
    }
    FiniteGroup::from_trusted(order, table, format!("E{order}"))
}

fn dihedral(order: usize) -> Result<FiniteGroup> {
    if order < 2 || !order.is_multiple_of(2) {
        return Err(Error::Parse(format!("dihedral order {order} must be even and >= 2")));
    }
    bound_check(order)?;
    let n = order / 2;
    // element r^i s^j has index i + n j; s r s = r^-1
    let mut table = vec![0u32; order * order];
    for x in 0..order {
        let (a, b) = (x % n, x / n);
        for y in 0..order {
            let (c, d) = (y % n, y / n);
            let i = if b == 0 { (a + c) % n } else { (a + n - c) % n };
            let j = (b + d) % 2;
            table[x * order + y] = (i + n * j) as u32;
        }
    }
    FiniteGroup::from_trusted(order, table, format!("D{order}"))
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // (p q)(i) = p(q(i))
    q.iter().map(|&i| p[i]).collect()
}

fn group_from_perms(mut perms: Vec<Vec<usize>>, label: String) -> Result<FiniteGroup> {
    perms.sort();
    let order = perms.len();
    bound_check(order)?;
    let index: HashMap<Vec<usize>, usize> =
        perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let mut table = vec![0u32; order * order];
    for a in 0..order {
        for b in 0..order {
            let c = compose(&perms[a], &perms[b]);
            table[a * order + b] = index[&c] as u32;
        }
    }
    FiniteGroup::from_trusted(order, table, label)
}

fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 6 {
        return Err(Error::Parse(format!("symmetric group degree {n} must be in 1..=6")));
    }
    let mut perms = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        perms.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    group_from_perms(perms, format!("S{n}"))
}

fn perm_gens(degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup> {
    if degree == 0 || degree > 16 {
        return Err(Error::Parse(format!("permutation degree {degree} must be in 1..=16")));
    }
    for g in gens {
        let mut sorted = g.clone();
        sorted.sort_unstable();
        if g.len() != degree || sorted != (0..degree).collect::<Vec<_>>() {
            return Err(Error::Parse(format!("{g:?} is not a permutation of 0..{degree}")));
        }
    }
    let identity: Vec<usize> = (0..degree).collect();
    let mut seen = std::collections::HashSet::from([identity.clone()]);
    let mut frontier = vec![identity];
    let bound = max_order();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = compose(&x, g);
            if seen.insert(y.clone()) {
                if seen.len() > bound {
                    return Err(Error::OrderBound { order: seen.len(), bound });
                }
                frontier.push(y);
            }
        }
    }
    let perms: Vec<Vec<usize>> = seen.into_iter().collect();
    let order = perms.len();
    group_from_perms(perms, format!("P{order}"))
}

/// Direct product; element `(a, b)` has index `a * |B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
    let (na, nb) = (a.order(), b.order());
    let order = na * nb;
    bound_check(order)?;
    let mut table = vec![0u32; order * order];
    for x in 0..order {
        let (xa, xb) = (x / nb, x % nb);
        for y in 0..order {
            let (ya, yb) = (y / nb, y % nb);
            table[x * order + y] = (a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32;
        }
    }
    FiniteGroup::from_trusted(order, table, format!("{}x{}", a.label(), b.label()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_compact_and_json() {
        let a: GroupSpec = "dihedral:8".parse().unwrap();
        assert_eq!(a, GroupSpec::Dihedral { order: 8 });
        let b: GroupSpec = r#"{"kind":"elem_abelian","p":2,"k":2}"#.parse().unwrap();
        assert_eq!(b, GroupSpec::ElemAbelian { p: 2, k: 2 });
        let c: GroupSpec = "cyclic:2*symmetric:3".parse().unwrap();
        assert_eq!(c.build().unwrap().order(), 12);
        let d: GroupSpec =
            r#"{"kind":"product","a":{"kind":"cyclic","n":2},"b":{"kind":"cyclic","n":3}}"#
                .parse()
                .unwrap();
        assert_eq!(d.build().unwrap().order(), 6);
        assert!("nonsense".parse::<GroupSpec>().is_err());
        assert!("cyclic:x".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn perm_gens_matches_symmetric() {
        let spec = GroupSpec::PermGens {
            degree: 4,
            gens: vec![vec![1, 2, 3, 0], vec![1, 0, 2, 3]],
        };
        let g = spec.build().unwrap();
        let s4 = symmetric(4).unwrap();
        assert_eq!(g.order(), 24);
        // both number elements by lexicographic permutation image
        assert_eq!(g.cayley_rows(), s4.cayley_rows());
    }

    #[test]
    fn cayley_round_trip() {
        let d6 = dihedral(6).unwrap();
        let spec = GroupSpec::Cayley { table: d6.cayley_rows() };
        assert_eq!(spec.build().unwrap(), d6);
    }

    #[test]
    fn dihedral_relation() {
        let d = dihedral(10).unwrap();
        let (r, s) = (1, 5);
        assert_eq!(d.element_order(r), 5);
        assert_eq!(d.element_order(s), 2);
        assert_eq!(d.mul(d.mul(s, r), s), d.inv(r));
    }
}
