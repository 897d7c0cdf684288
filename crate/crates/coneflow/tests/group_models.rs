use std::collections::{BTreeMap, BTreeSet, VecDeque};

use coneflow::group_models::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn elements_within(model: &GroupModel, radius: usize) -> Vec<GroupElement> {
    let mut seen = BTreeSet::from([model.identity()]);
    let mut order = vec![model.identity()];
    let mut queue = VecDeque::from([(model.identity(), 0)]);
    while let Some((g, d)) = queue.pop_front() {
        if d == radius {
            continue;
        }
        for l in model.letters() {
            let h = model.mul_letter(&g, l);
            if seen.insert(h.clone()) {
                order.push(h.clone());
                queue.push_back((h, d + 1));
            }
        }
    }
    order
}

fn random_element(model: &GroupModel, rng: &mut ChaCha8Rng, max_len: usize) -> GroupElement {
    let letters = model.letters();
    let len = rng.gen_range(0..=max_len);
    let word: Vec<Letter> = (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
    model.canonicalize(&word)
}

fn models() -> Vec<(&'static str, GroupModel)> {
    vec![
        ("z3", GroupModel::new(&GroupSpec::cyclic(3, "t")).unwrap()),
        ("free2", GroupModel::new(&GroupSpec::free(&["a", "b"])).unwrap()),
        ("z2", GroupModel::new(&GroupSpec::free_abelian(&["a", "b"])).unwrap()),
        ("modular", modular_rel_factors().0),
        (
            "z_free_z4",
            GroupModel::new(&GroupSpec::FreeProduct(vec![
                GroupSpec::free_abelian(&["x"]),
                GroupSpec::free(&["y"]),
                GroupSpec::cyclic(4, "z"),
            ]))
            .unwrap(),
        ),
    ]
}

#[test]
fn cyclic_three_cubes_to_identity() {
    let m = GroupModel::new(&GroupSpec::cyclic(3, "t")).unwrap();
    let g = m.parse("t").unwrap();
    assert_eq!(m.order(), Some(3));
    assert!(!g.is_identity());
    assert!(m.multiply(&m.multiply(&g, &g), &g).is_identity());
}

#[test]
fn free_reduction_cancels() {
    let m = GroupModel::new(&GroupSpec::free(&["a", "b"])).unwrap();
    let p = m.multiply(&m.parse("ab").unwrap(), &m.parse("b⁻¹a").unwrap());
    assert_eq!(p, m.parse("aa").unwrap());
    assert_eq!(m.format(&p), "a^2");
}

#[test]
fn free_product_product_collapses() {
    let (m, _) = modular_rel_factors();
    let p = m.multiply(&m.parse("st").unwrap(), &m.parse("t²s").unwrap());
    assert!(p.is_identity());
}

/// Normal form of a word in `Z/2 * Z/3` computed by syllable merging.
fn syllable_form(word: &[Letter]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for l in word {
        let n = if l.gen == 0 { 2 } else { 3 };
        let e = if l.inv { n - 1 } else { 1 };
        match out.last_mut() {
            Some(last) if last.0 == l.gen => {
                last.1 = (last.1 + e) % n;
                if last.1 == 0 {
                    out.pop();
                }
            }
            _ => out.push((l.gen, e)),
        }
    }
    out
}

/// Distinct elements spelled by words of length 1 to 6, counted by a
/// separate syllable-merging script.
const EXPECTED_FORMS: usize = 50;

#[test]
fn free_product_normal_forms_match_syllable_oracle() {
    let (m, _) = modular_rel_factors();
    let letters = m.letters();
    let mut by_form: BTreeMap<Vec<(u32, u32)>, GroupElement> = BTreeMap::new();
    let mut by_element: BTreeMap<Vec<Letter>, Vec<(u32, u32)>> = BTreeMap::new();
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..6 {
        let mut next = Vec::new();
        for w in &words {
            for &l in &letters {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        for w in &next {
            let form = syllable_form(w);
            let g = m.canonicalize(w);
            if let Some(prev) = by_form.get(&form) {
                assert_eq!(*prev, g, "word {w:?}");
            } else {
                by_form.insert(form.clone(), g.clone());
            }
            if let Some(prev) = by_element.get(g.word()) {
                assert_eq!(*prev, form, "word {w:?}");
            } else {
                by_element.insert(g.word().to_vec(), form);
            }
        }
        words = next;
    }
    assert_eq!(by_form.len(), EXPECTED_FORMS);
}

#[test]
fn word_length_examples() {
    let f2 = GroupModel::new(&GroupSpec::free(&["a", "b"])).unwrap();
    assert_eq!(f2.word_length(&f2.identity()), 0);
    assert_eq!(f2.word_length(&f2.parse("abab").unwrap()), 4);
    let z2 = GroupModel::new(&GroupSpec::free_abelian(&["a", "b"])).unwrap();
    assert_eq!(z2.word_length(&z2.parse("a^3b^-2").unwrap()), 5);
    assert_eq!(z2.parse("ba^3b^-3").unwrap(), z2.parse("a^3b^-2").unwrap());
    let z3 = GroupModel::new(&GroupSpec::cyclic(3, "t")).unwrap();
    assert_eq!(z3.word_length(&z3.parse("t^2").unwrap()), 1);
}

#[test]
fn group_axioms_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, m) in models() {
        for _ in 0..10_000 {
            let g = random_element(&m, &mut rng, 8);
            let h = random_element(&m, &mut rng, 8);
            let k = random_element(&m, &mut rng, 8);
            let left = m.multiply(&m.multiply(&g, &h), &k);
            let right = m.multiply(&g, &m.multiply(&h, &k));
            assert_eq!(left, right, "{name}: associativity");
            assert!(m.multiply(&g, &m.inverse(&g)).is_identity(), "{name}: right inverse");
            assert!(m.multiply(&m.inverse(&g), &g).is_identity(), "{name}: left inverse");
            assert_eq!(m.multiply(&g, &m.identity()), g, "{name}: identity");
            assert_eq!(m.word_length(&g), m.word_length(&m.inverse(&g)), "{name}: length of inverse");
            assert_eq!(m.canonicalize(g.word()), g, "{name}: canonical words are fixed");
        }
    }
}

proptest! {
    #[test]
    fn parse_format_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (_, m) in models() {
            let g = random_element(&m, &mut rng, 12);
            prop_assert_eq!(m.parse(&m.format(&g)).unwrap(), g);
        }
    }

    #[test]
    fn length_is_subadditive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (_, m) in models() {
            let g = random_element(&m, &mut rng, 10);
            let h = random_element(&m, &mut rng, 10);
            prop_assert!(m.word_length(&m.multiply(&g, &h)) <= m.word_length(&g) + m.word_length(&h));
        }
    }
}

#[test]
fn malformed_tables_are_rejected() {
    let not_assoc = FiniteSpec {
        elements: vec!["e".into(), "x".into(), "y".into()],
        table: vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]],
        generators: vec![("x".into(), 1)],
    };
    assert!(matches!(GroupModel::new(&GroupSpec::Finite(not_assoc)), Err(GroupError::MalformedTable(_))));
    let ragged = FiniteSpec {
        elements: vec!["e".into(), "x".into()],
        table: vec![vec![0, 1], vec![1]],
        generators: vec![("x".into(), 1)],
    };
    assert!(matches!(GroupModel::new(&GroupSpec::Finite(ragged)), Err(GroupError::MalformedTable(_))));
}

#[test]
fn coset_key_examples() {
    let (m, pe) = modular_rel_factors();
    let t = m.parse("t").unwrap();
    assert!(pe.coset_key(&m, 1, &t).rep.is_identity());
    assert!(pe.coset_key(&m, 1, &m.identity()).rep.is_identity());
    let g = m.parse("stst").unwrap();
    let key = pe.coset_key(&m, 1, &g);
    assert_eq!(key.rep, m.parse("sts").unwrap());
    assert_eq!(pe.canonical_rep(&key), m.parse("sts").unwrap());
    let gh = m.multiply(&g, &m.parse("t^2").unwrap());
    assert_eq!(pe.coset_key(&m, 1, &gh), key);

    let (f, pf) = free_rel_cyclic();
    let g = f.parse("ba^3").unwrap();
    assert_eq!(pf.coset_key(&f, 0, &g).rep, f.parse("b").unwrap());
    assert_eq!(pf.coset_key(&f, 0, &f.parse("a^-7").unwrap()).rep, f.identity());
}

fn check_cosets_exhaustively(m: &GroupModel, pe: &PeripheralStructure, radius: usize) {
    let elems = elements_within(m, radius);
    for i in 0..pe.len() {
        let keys: Vec<CosetKey> = elems.iter().map(|g| pe.coset_key(m, i, g)).collect();
        for (g, key) in elems.iter().zip(&keys) {
            let rep = pe.canonical_rep(key);
            assert_eq!(pe.coset_key(m, i, &rep), *key, "section property");
            assert!(pe.contains(m, i, &m.multiply(&m.inverse(g), &rep)));
        }
        for (a, ka) in elems.iter().zip(&keys) {
            let a_inv = m.inverse(a);
            for (b, kb) in elems.iter().zip(&keys) {
                let same = pe.contains(m, i, &m.multiply(&a_inv, b));
                assert_eq!(ka == kb, same, "{} vs {}", m.format(a), m.format(b));
            }
        }
    }
}

#[test]
fn coset_keys_separate_cosets_free_group() {
    let (m, pe) = free_rel_cyclic();
    check_cosets_exhaustively(&m, &pe, 5);
}

#[test]
fn coset_keys_separate_cosets_free_product() {
    let (m, pe) = modular_rel_factors();
    check_cosets_exhaustively(&m, &pe, 5);
}

#[test]
fn canonical_rep_is_the_normal_form_prefix() {
    let (m, pe) = modular_rel_factors();
    for i in 0..2usize {
        let h_elems = pe.ball(&m, i, u32::MAX);
        for g in elements_within(&m, 5) {
            let tilde = pe.canonical_rep(&pe.coset_key(&m, i, &g));
            if let Some(&(f, _, _)) = m.syllables(&tilde).last() {
                assert_ne!(f, i, "{} ends in the subgroup", m.format(&tilde));
            }
            let prefix_len = match m.syllables(&g).last() {
                Some(&(f, start, _)) if f == i => start,
                _ => g.len(),
            };
            assert_eq!(tilde.word(), &g.word()[..prefix_len]);
            for h in &h_elems {
                let moved = m.multiply(&tilde, h);
                assert_eq!(pe.canonical_rep(&pe.coset_key(&m, i, &moved)), tilde);
            }
        }
    }
}

#[test]
fn peripheral_word_length() {
    let (m, pe) = free_rel_cyclic();
    assert_eq!(pe.d_h(0, &m.parse("a^-4").unwrap()), Some(4));
    assert_eq!(pe.ball(&m, 0, 3).len(), 7);
}
