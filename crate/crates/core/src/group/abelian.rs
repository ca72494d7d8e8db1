use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::GroupRef;
use crate::arith::snf::smith_normal_form;

/// `G / [G, G]` as invariant factors `d_1 | d_2 | ...` (factors equal to 1
/// are dropped) and the projection of every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abelianization {
    pub invariant_factors: Vec<u64>,
    /// `projection[g][i]` is in `0..invariant_factors[i]`.
    pub projection: Vec<Vec<u64>>,
}

impl Abelianization {
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }
}

pub fn abelianization(group: &GroupRef) -> Abelianization {
    let n = group.order();
    let commutators: Vec<usize> = {
        let mut seen = vec![false; n];
        for a in 0..n {
            for b in 0..n {
                seen[group.commutator(a, b)] = true;
            }
        }
        (0..n).filter(|&x| seen[x]).collect()
    };
    let derived = group.generate(&commutators);
    // quotient: coset index of every element
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for g in 0..n {
        if coset[g] != usize::MAX {
            continue;
        }
        for &k in &derived {
            coset[group.mul(g, k)] = reps.len();
        }
        reps.push(g);
    }
    let q = reps.len();
    let qmul = |a: usize, b: usize| coset[group.mul(reps[a], reps[b])];

    // greedy generators of the quotient
    let mut gens: Vec<usize> = Vec::new();
    let mut span = vec![false; q];
    span[0] = true;
    let closure = |gens: &[usize]| {
        let mut seen = vec![false; q];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &s in gens {
                let y = qmul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    for x in 1..q {
        if !span[x] {
            gens.push(x);
            span = closure(&gens);
        }
    }
    let r = gens.len();
    if r == 0 {
        return Abelianization { invariant_factors: vec![], projection: vec![vec![]; n] };
    }

    // coordinates along a spanning tree, Schreier relations from every edge
    let mut coord: Vec<Option<Vec<i64>>> = vec![None; q];
    coord[0] = Some(vec![0; r]);
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut relations: Vec<Vec<BigInt>> = Vec::new();
    let mut edges = Vec::new();
    while let Some(x) = queue.pop_front() {
        for (i, &s) in gens.iter().enumerate() {
            let y = qmul(x, s);
            let mut c = coord[x].clone().unwrap();
            c[i] += 1;
            if coord[y].is_none() {
                coord[y] = Some(c);
                queue.push_back(y);
            } else {
                edges.push((c, y));
            }
        }
    }
    for (c, y) in edges {
        let cy = coord[y].as_ref().unwrap();
        let rel: Vec<BigInt> = c.iter().zip(cy).map(|(a, b)| BigInt::from(a - b)).collect();
        if rel.iter().any(|x| x != &BigInt::from(0)) {
            relations.push(rel);
        }
    }
    let snf = smith_normal_form(&relations).expect("abelianization relations are small");
    let diag: Vec<u64> = snf.diagonal.iter().map(|d| d.to_u64().expect("finite quotient")).collect();
    let keep: Vec<usize> = (0..r).filter(|&i| diag[i] != 1).collect();
    let invariant_factors: Vec<u64> = keep.iter().map(|&i| diag[i]).collect();
    debug_assert_eq!(invariant_factors.iter().product::<u64>(), q as u64);

    let project = |c: &[i64]| -> Vec<u64> {
        keep.iter()
            .map(|&j| {
                let y: BigInt = c
                    .iter()
                    .enumerate()
                    .map(|(k, &ck)| BigInt::from(ck) * &snf.v[k][j])
                    .sum();
                let d = BigInt::from(diag[j]);
                (((y % &d) + &d) % &d).to_u64().unwrap()
            })
            .collect()
    };
    let per_coset: Vec<Vec<u64>> = coord.iter().map(|c| project(c.as_ref().unwrap())).collect();
    let projection = (0..n).map(|g| per_coset[coset[g]].clone()).collect();
    Abelianization { invariant_factors, projection }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use std::sync::Arc;

    fn ab(spec: &str) -> (GroupRef, Abelianization) {
        let g = Arc::new(spec.parse::<GroupSpec>().unwrap().build().unwrap());
        let a = abelianization(&g);
        (g, a)
    }

    fn check_hom(g: &GroupRef, a: &Abelianization) {
        let n = g.order();
        for x in 0..n {
            for y in 0..n {
                let sum: Vec<u64> = a.projection[x]
                    .iter()
                    .zip(&a.projection[y])
                    .zip(&a.invariant_factors)
                    .map(|((p, q), d)| (p + q) % d)
                    .collect();
                assert_eq!(sum, a.projection[g.mul(x, y)]);
                if n <= 64 {
                    assert!(a.projection[g.commutator(x, y)].iter().all(|&v| v == 0));
                }
            }
        }
        // surjective
        let mut images = a.projection.clone();
        images.sort();
        images.dedup();
        assert_eq!(images.len() as u64, a.order());
    }

    #[test]
    fn known_abelianizations() {
        for (spec, expect) in [
            ("symmetric:3", vec![2]),
            ("elem_abelian:2,2", vec![2, 2]),
            ("cyclic:12", vec![12]),
            ("dihedral:8", vec![2, 2]),
            ("cyclic:2*cyclic:6", vec![2, 6]),
            ("symmetric:4", vec![2]),
            ("cyclic:1", vec![]),
        ] {
            let (g, a) = ab(spec);
            assert_eq!(a.invariant_factors, expect, "{spec}");
            check_hom(&g, &a);
        }
    }

    #[test]
    fn perfect_group() {
        // A5 as even permutations of 5 points
        let spec = GroupSpec::PermGens { degree: 5, gens: vec![vec![1, 2, 0, 3, 4], vec![0, 1, 3, 4, 2], vec![1, 2, 3, 4, 0]] };
        let g = Arc::new(spec.build().unwrap());
        assert_eq!(g.order(), 60);
        assert!(abelianization(&g).invariant_factors.is_empty());
    }
}
