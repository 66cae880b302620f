use proptest::collection::vec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hpomega::exact::{from_integer_code, integer_code, BitString, ExactRational};
use hpomega::measures::{make_length_measure, set_probability, LengthMeasureSpec};
use hpomega::minilang::{decode, encode, Instr, Program};
use hpomega::prefixfree::{check_prefix_free, omega, random_prefix_free_set, PrefixFreeness, StringSet};
use hpomega::proplogic::corpus::{random_formula, random_theory};
use hpomega::proplogic::{entails, equivalent, parse_canonical, parse_formula, SentenceEnumeration, Theory};
use hpomega::weights::{u_construction, v_weight, w_five, w_four, w_three};

fn rational() -> impl Strategy<Value = ExactRational> {
    (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| ExactRational::new(n, d).unwrap())
}

fn bit_string() -> impl Strategy<Value = BitString> {
    vec(any::<bool>(), 1..40).prop_map(|b| BitString::new(b).unwrap())
}

fn theory(seed: u64) -> Theory {
    random_theory(&mut ChaCha8Rng::seed_from_u64(seed), 4, 3)
}

proptest! {
    #[test]
    fn rationals_round_trip_and_form_a_field(a in rational(), b in rational()) {
        prop_assert_eq!(a.to_string().parse::<ExactRational>().unwrap(), a.clone());
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(a.checked_div(&b).unwrap() * b.clone(), a.clone());
        }
    }

    #[test]
    fn integer_code_is_a_bijection(s in bit_string()) {
        let code = integer_code(&s);
        prop_assert_eq!(from_integer_code(&code).unwrap(), s);
    }

    #[test]
    fn kraft_holds_for_random_prefix_free_sets(seed in any::<u64>(), depth in 1usize..14) {
        let s = random_prefix_free_set(&mut ChaCha8Rng::seed_from_u64(seed), depth);
        prop_assert_eq!(check_prefix_free(&s), PrefixFreeness::PrefixFree);
        prop_assert!(omega(s.iter()) <= ExactRational::one());
    }

    #[test]
    fn omega_is_additive_on_disjoint_sets(a in vec(bit_string(), 0..12), b in vec(bit_string(), 0..12)) {
        let sa: StringSet = a.into_iter().collect();
        let sb: StringSet = b.into_iter().filter(|s| !sa.contains(s)).collect();
        let sum = &omega(sa.iter()) + &omega(sb.iter());
        prop_assert_eq!(omega(sa.union(&sb).iter()), sum);
    }

    #[test]
    fn canonical_forms_parse_back(seed in any::<u64>()) {
        let f = random_formula(&mut ChaCha8Rng::seed_from_u64(seed), 5, 4);
        prop_assert_eq!(parse_canonical(&f.canonical()), Some(f.clone()));
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn v_respects_entailment(s in any::<u64>(), t in any::<u64>()) {
        let (a, b) = (theory(s), theory(t));
        let (va, vb) = (v_weight(&a, 48).unwrap(), v_weight(&b, 48).unwrap());
        if entails(&a, &b) {
            prop_assert!(va.lower >= vb.lower && va.upper >= vb.upper);
        }
        if equivalent(&a, &b) {
            prop_assert_eq!(va, vb);
        }
    }

    #[test]
    fn finite_valued_weights_respect_entailment(s in any::<u64>(), t in any::<u64>()) {
        let (a, b) = (theory(s), theory(t));
        let v = Theory::parse_inline("p0 | p1").unwrap();
        if entails(&a, &b) {
            prop_assert!(w_three(&a) >= w_three(&b));
            prop_assert!(w_four(&v, &a).unwrap() >= w_four(&v, &b).unwrap());
            prop_assert!(w_five(&v, &a).unwrap() >= w_five(&v, &b).unwrap());
        }
    }

    #[test]
    fn u_construction_satisfies_both_principles(seeds in vec(any::<u64>(), 1..12)) {
        let list: Vec<Theory> = seeds.iter().map(|&s| theory(s)).collect();
        let u = u_construction(&list, ExactRational::zero());
        for i in 0..list.len() {
            for j in 0..list.len() {
                if entails(&list[i], &list[j]) {
                    prop_assert!(u.weight(i) >= u.weight(j));
                }
                if u.weight(i) == u.weight(j) {
                    prop_assert!(equivalent(&list[i], &list[j]));
                }
            }
        }
    }

    #[test]
    fn programs_decode_their_codes(body in vec(0usize..4, 0..10)) {
        let p = Program::new(body.into_iter().map(|i| Instr::IN_CODE_ORDER[i]).collect());
        prop_assert_eq!(decode(&encode(&p)).unwrap(), p);
    }

    #[test]
    fn length_measures_never_beat_omega(seed in any::<u64>(), k in 1u64..100) {
        let pi = make_length_measure(&LengthMeasureSpec::StopProbability {
            q: ExactRational::new(k, 100).unwrap(),
            support: 13,
        }).unwrap();
        prop_assert_eq!(pi.total_mass(), ExactRational::one());
        let s = random_prefix_free_set(&mut ChaCha8Rng::seed_from_u64(seed), 13);
        prop_assert!(set_probability(&s, &pi).unwrap() <= omega(s.iter()));
    }
}

#[test]
fn first_two_hundred_sentences_match_the_golden_file() {
    let golden = include_str!("data/sentences_200.txt");
    let got: Vec<String> = SentenceEnumeration::global().prefix(200).iter().map(|f| f.canonical()).collect();
    let want: Vec<&str> = golden.lines().collect();
    assert_eq!(got, want);
}
