use lightcone::fraction_algebra::*;
use lightcone::Error;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn t(n: i32, p: u8) -> Factor {
    Factor::t(n, p)
}
fn tb(n: i32, p: u8) -> Factor {
    Factor::tbar(n, p)
}
fn mono(num: Vec<Factor>, den: Vec<Factor>) -> SimpleFraction {
    SimpleFraction::monomial(num, den)
}

#[test]
fn degree_examples() {
    assert_eq!(mono(vec![t(0, 0)], vec![]).degree(), 1);
    assert_eq!(mono(vec![t(1, 0)], vec![t(1, 0)]).degree(), 0);
    for c in encode_basic_fractions() {
        assert_eq!(c.degree().unwrap(), Some(4));
    }
    assert_eq!(basic_fraction_c0(C0Weight::Printed).degree().unwrap(), Some(4));
}

#[test]
fn nabla_examples() {
    let d = nabla(&mono(vec![t(1, 0)], vec![]));
    assert_eq!(d, FractionSum::single(mono(vec![t(0, 0)], vec![])));

    let d = nabla(&mono(vec![t(0, 0), tb(0, 0)], vec![]));
    let want = FractionSum::from_terms(vec![
        mono(vec![t(-1, 0), tb(0, 0)], vec![]),
        mono(vec![t(0, 0), tb(-1, 0)], vec![]),
    ]);
    assert_eq!(d, want);

    let d = nabla(&mono(vec![t(1, 0)], vec![t(1, 0)]));
    assert_eq!(d.terms.len(), 2);
    assert!(d.normalized().is_zero());
}

#[test]
fn nabla_raises_degree_by_one() {
    // deg T^(n) = 1 − n and ∇ lowers n, so every term gains one degree
    for c in encode_basic_fractions() {
        for term in &c.terms {
            for img in nabla(term).terms {
                assert_eq!(img.degree(), term.degree() + 1);
            }
        }
    }
}

#[test]
fn contraction_examples() {
    assert_eq!(
        contract_z(0, 0),
        FractionSum::single(SimpleFraction::new(Coef::int(-4), vec![Factor::brace(2, 0)], vec![]))
    );
    assert_eq!(
        contract_z(-1, 0),
        FractionSum::from_terms(vec![
            SimpleFraction::new(Coef::int(4), vec![t(0, 0)], vec![]),
            SimpleFraction::new(Coef::int(-4), vec![Factor::brace(1, 0)], vec![]),
        ])
    );
    assert_eq!(
        contract_z(1, 2),
        FractionSum::from_terms(vec![
            SimpleFraction::new(Coef::int(-4), vec![t(2, 2)], vec![]),
            SimpleFraction::new(Coef::int(-4), vec![Factor::brace(3, 2)], vec![]),
        ])
    );
}

#[test]
fn contraction_degrees() {
    // z carries degree −1 on the bracket term; the curly-brace term is one
    // degree lower still
    for n in -1..4 {
        let d_in = Factor::t(n, 0).degree();
        for term in contract_z(n, 0).terms {
            let f = term.numerator()[0];
            if f.is_brace() {
                assert_eq!(term.degree(), d_in - 2);
            } else {
                assert_eq!(term.degree(), d_in - 1);
            }
        }
    }
}

#[test]
fn rendering_is_stable() {
    let c1 = basic_fraction_c1();
    assert_eq!(
        c1.to_string(),
        "-9*T(-1,0)*T(0,0)*T(-1,0,bar)/T(0,0,bar) + 9*T(-1,0)*T(-1,0,bar)*T(0,0,bar)/T(0,0,bar)"
    );
}

#[test]
fn c1_encoding() {
    let c1 = basic_fraction_c1();
    let lead = &c1.terms[0];
    assert_eq!(lead.coef, Coef::int(-9));
    let mut want = vec![t(-1, 0), tb(-1, 0), t(0, 0)];
    want.sort();
    assert_eq!(lead.numerator(), &want[..]);
    assert_eq!(lead.denominator(), &[tb(0, 0)]);
}

#[test]
fn n3_coefficient() {
    let ns = encode_n_fractions();
    let n3 = ns.iter().find(|n| n.name == "N3").unwrap();
    let c = n3.parts[0].1.terms[0].coef;
    assert_eq!(c.q, Ratio::new(9, 8));
    assert_eq!(c.pi_power, -1);
}

#[test]
fn n_fractions_are_homogeneous() {
    for n in encode_n_fractions() {
        for (_, part) in &n.parts {
            assert!(part.degree().is_ok(), "{}", n.name);
        }
    }
}

#[test]
fn ibp_examples() {
    let f = mono(vec![t(0, 0), tb(0, 0)], vec![]);
    assert!(ibp_equivalent(&nabla(&f), &FractionSum::zero()).unwrap());
    let [c0, c1, c2, c3] = encode_basic_fractions();
    assert!(!ibp_equivalent(&c0, &c1).unwrap());
    assert!(!ibp_equivalent(&c2, &c3).unwrap());
    assert!(ibp_equivalent(&c2, &c2).unwrap());
}

#[test]
fn ibp_rejects_degree_mismatch() {
    let a = FractionSum::single(mono(vec![t(0, 0)], vec![]));
    let b = FractionSum::single(mono(vec![t(0, 0), t(0, 0)], vec![]));
    assert!(matches!(ibp_equivalent(&a, &b), Err(Error::DegreeMismatch(1, 2))));
}

fn random_monomial(rng: &mut ChaCha8Rng, degree: i32) -> SimpleFraction {
    // three numerator factors and one denominator factor, last one adjusted
    loop {
        let mut num: Vec<Factor> = (0..3)
            .map(|_| Factor {
                conjugated: rng.gen(),
                n: rng.gen_range(-1..=1),
                p: Decoration::Bracket(0),
            })
            .collect();
        let den = vec![Factor {
            conjugated: rng.gen(),
            n: rng.gen_range(-1..=1),
            p: Decoration::Bracket(0),
        }];
        let cur = mono(num.clone(), den.clone()).degree();
        num[0].n += cur - degree;
        let f = mono(num, den);
        if f.degree() == degree && f.numerator().iter().all(|x| x.n >= -2) {
            return f;
        }
    }
}

fn random_sum(rng: &mut ChaCha8Rng, degree: i32) -> FractionSum {
    FractionSum::from_terms(
        (0..3)
            .map(|_| random_monomial(rng, degree).scaled(Coef::int(rng.gen_range(1..5))))
            .collect(),
    )
}

#[test]
fn ibp_is_an_equivalence_on_a_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let base = random_sum(&mut rng, 4);
        let x = random_monomial(&mut rng, 3);
        let y = random_monomial(&mut rng, 3);
        let a = base.add(&nabla(&x));
        let b = base.add(&nabla(&y).scaled(Coef::int(2)));
        let c = base.sub(&nabla(&x));
        assert!(ibp_equivalent(&a, &a).unwrap());
        let ab = ibp_equivalent(&a, &b).unwrap();
        let ba = ibp_equivalent(&b, &a).unwrap();
        assert_eq!(ab, ba);
        assert!(ab);
        assert!(ibp_equivalent(&b, &c).unwrap());
        assert!(ibp_equivalent(&a, &c).unwrap());
    }
}

proptest! {
    #[test]
    fn conjugation_is_an_involution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_sum(&mut rng, 4);
        prop_assert_eq!(s.conj().conj(), s.clone());
        prop_assert_eq!(s.conj().degree().unwrap(), s.degree().unwrap());
    }

    #[test]
    fn nabla_is_additive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_sum(&mut rng, 4);
        let b = random_sum(&mut rng, 4);
        prop_assert_eq!(
            nabla_sum(&a.add(&b)).normalized(),
            nabla_sum(&a).add(&nabla_sum(&b)).normalized()
        );
    }
}
