use super::*;
use crate::group::{abelianization, GroupSpec};
use proptest::prelude::*;

fn group(s: &str) -> GroupRef {
    Arc::new(s.parse::<GroupSpec>().unwrap().build().unwrap())
}

fn table(s: &str) -> Arc<CharacterTable> {
    character_table(&group(s)).unwrap()
}

const BATTERY: &[&str] = &[
    "cyclic:2",
    "cyclic:3",
    "cyclic:5",
    "cyclic:7",
    "cyclic:12",
    "symmetric:3",
    "symmetric:4",
    "dihedral:6",
    "dihedral:8",
    "dihedral:12",
    "elem_abelian:2,2",
    "elem_abelian:2,3",
    "elem_abelian:3,2",
    "cyclic:2*cyclic:2*symmetric:3",
    "cyclic:3*symmetric:3",
    "cyclic:2*dihedral:8",
];

#[test]
fn cyclic_three() {
    let t = table("cyclic:3");
    let z = Cyclotomic::root(3, 1);
    let z2 = Cyclotomic::root(3, 2);
    let one = Cyclotomic::one(3);
    let mut rows: Vec<Vec<Cyclotomic>> = t.values().to_vec();
    assert_eq!(rows[0], vec![one.clone(), one.clone(), one.clone()]);
    rows.remove(0);
    assert!(rows.contains(&vec![one.clone(), z.clone(), z2.clone()]));
    assert!(rows.contains(&vec![one, z2, z]));
}

#[test]
fn degrees_of_small_groups() {
    assert_eq!(table("symmetric:3").degrees(), &[1, 1, 2]);
    assert_eq!(table("dihedral:8").degrees(), &[1, 1, 1, 1, 2]);
    assert_eq!(table("symmetric:4").degrees(), &[1, 1, 2, 3, 3]);
}

#[test]
fn battery_is_exactly_orthogonal() {
    for spec in BATTERY {
        let g = group(spec);
        let t = character_table(&g).unwrap();
        t.verify_exact().unwrap_or_else(|e| panic!("{spec}: {e}"));
        assert_eq!(t.len(), g.class_count());
        // linear characters correspond to the abelianization
        let linear = t.degrees().iter().filter(|&&d| d == 1).count() as u64;
        assert_eq!(linear, abelianization(&g).order(), "{spec}");
    }
}

#[test]
fn seed_does_not_leak() {
    for spec in ["symmetric:4", "dihedral:12", "cyclic:2*dihedral:8"] {
        let g = group(spec);
        let a = character_table_seeded(&g, 0).unwrap();
        let b = character_table_seeded(&g, 12345).unwrap();
        assert_eq!(a.values(), b.values(), "{spec}");
    }
}

#[test]
fn a5_table() {
    let spec = GroupSpec::PermGens { degree: 5, gens: vec![vec![1, 2, 0, 3, 4], vec![1, 2, 3, 4, 0]] };
    let g = Arc::new(spec.build().unwrap());
    let t = character_table(&g).unwrap();
    assert_eq!(t.degrees(), &[1, 3, 3, 4, 5]);
    t.verify_exact().unwrap();
}

fn find_linear(t: &Arc<CharacterTable>, g: &GroupRef, gen: usize, value: &Cyclotomic) -> usize {
    let c = g.class_index(gen);
    (0..t.len()).find(|&i| t.degrees()[i] == 1 && t.value(i, c) == value).unwrap()
}

#[test]
fn representation_ring_of_cyclic_groups() {
    for n in 2..=12usize {
        let g = group(&format!("cyclic:{n}"));
        let t = character_table(&g).unwrap();
        let chi = VirtualCharacter::irreducible(t.clone(), find_linear(&t, &g, 1, &Cyclotomic::root(n as u64, 1)));
        let one = VirtualCharacter::trivial(t.clone());
        assert_eq!(chi.pow(n as u32).unwrap(), one);
        // powers 0..n-1 are distinct irreducibles, hence a Z-basis
        let mut seen = std::collections::BTreeSet::new();
        for k in 0..n as u32 {
            let p = chi.pow(k).unwrap();
            let idx: Vec<usize> = (0..t.len()).filter(|&i| !p.coeffs()[i].is_zero()).collect();
            assert_eq!(idx.len(), 1);
            assert!(p.coeffs()[idx[0]].is_one());
            seen.insert(idx[0]);
        }
        assert_eq!(seen.len(), n);
    }
}

#[test]
fn representation_ring_of_s3() {
    let t = table("symmetric:3");
    let one = VirtualCharacter::trivial(t.clone());
    let chi = VirtualCharacter::irreducible(t.clone(), 1);
    let psi = VirtualCharacter::irreducible(t.clone(), 2);
    assert_eq!(chi.mul(&chi).unwrap(), one);
    assert_eq!(chi.mul(&psi).unwrap(), psi.mul(&chi).unwrap());
    assert_eq!(chi.mul(&psi).unwrap(), psi);
    let expect = one.add(&chi).unwrap().add(&psi).unwrap();
    assert_eq!(psi.mul(&psi).unwrap(), expect);
}

#[test]
fn idempotents_and_units() {
    for spec in BATTERY {
        let t = table(spec);
        let e = idempotents(&t).unwrap();
        assert!(e.e_plus.rank().is_one());
        assert!(e.e_minus.rank().is_zero());
    }
    let t = table("cyclic:2");
    let e = idempotents(&t).unwrap();
    let half = BigRational::new(1.into(), 2.into());
    assert_eq!(e.e_plus.coeffs(), &[half.clone(), half]);
    let t = table("symmetric:3");
    let e = idempotents(&t).unwrap();
    let sixth = |k: i64| BigRational::new(k.into(), 6.into());
    assert_eq!(e.e_plus.coeffs(), &[sixth(1), sixth(1), sixth(2)]);

    let one = VirtualCharacter::trivial(t.clone());
    assert!(is_unit_at_i(&one));
    assert!(is_unit_at_i(&VirtualCharacter::regular(t.clone())));
    let chi = VirtualCharacter::irreducible(t.clone(), 1);
    assert!(!is_unit_at_i(&one.sub(&chi).unwrap()));
    assert_eq!(rank(&VirtualCharacter::regular(t)), rat(6));
}

#[test]
fn permutation_characters() {
    let s3 = group("symmetric:3");
    let t = character_table(&s3).unwrap();
    let whole = permutation_character(&s3, &Subgroup::whole(s3.clone())).unwrap();
    assert_eq!(whole, VirtualCharacter::trivial(t.clone()));
    let triv = permutation_character(&s3, &Subgroup::trivial(s3.clone())).unwrap();
    assert_eq!(triv, VirtualCharacter::regular(t.clone()));
    let h = Subgroup::generated_by(s3.clone(), &[1]);
    let p = permutation_character(&s3, &h).unwrap();
    assert_eq!(p.int_coeffs().unwrap(), vec![1, 0, 1]);
    assert_eq!(p.rank(), rat(3));
}

#[test]
fn restrictions() {
    let s3 = group("symmetric:3");
    let t = character_table(&s3).unwrap();
    let c3 = Subgroup::new(s3.clone(), (0..6).filter(|&x| s3.element_order(x) != 2)).unwrap();
    assert_eq!(c3.order(), 3);
    let psi = VirtualCharacter::irreducible(t.clone(), 2);
    let r = restrict(&psi, &c3).unwrap();
    assert_eq!(r.int_coeffs().unwrap(), vec![0, 1, 1]);
    let one = restrict(&VirtualCharacter::trivial(t.clone()), &c3).unwrap();
    assert_eq!(one.int_coeffs().unwrap(), vec![1, 0, 0]);
    let d8 = group("dihedral:8");
    let td = character_table(&d8).unwrap();
    for gens in [vec![1usize], vec![4], vec![2, 4]] {
        let h = Subgroup::generated_by(d8.clone(), &gens);
        let r = restrict(&VirtualCharacter::regular(td.clone()), &h).unwrap();
        let (hg, _) = h.as_group();
        let th = character_table(&Arc::new(hg)).unwrap();
        let want = VirtualCharacter::regular(th).scale(&rat(h.index() as i64));
        assert_eq!(r.coeffs(), want.coeffs());
    }
}

fn small_coeffs(len: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-2i64..3, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn ring_axioms_on_d8(a in small_coeffs(5), b in small_coeffs(5), c in small_coeffs(5)) {
        let t = table("dihedral:8");
        let a = VirtualCharacter::from_ints(t.clone(), &a).unwrap();
        let b = VirtualCharacter::from_ints(t.clone(), &b).unwrap();
        let c = VirtualCharacter::from_ints(t.clone(), &c).unwrap();
        let one = VirtualCharacter::trivial(t.clone());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
        prop_assert_eq!(a.mul(&b).unwrap().rank(), a.rank() * b.rank());
        prop_assert_eq!(a.add(&b).unwrap().rank(), a.rank() + b.rank());
        prop_assert!(a.mul(&b).unwrap().is_integral());
    }
}
