//! Invariants over randomly drawn parameters.

use std::collections::HashMap;

use proptest::prelude::*;
use subshift::blockmap::{apply_to_sequence, apply_to_word, compose, BlockMap};
use subshift::complexity::{bound_report, check_counting, morse_hedlund_classify, profile, special_census, BoundMode, BoundSpec, MhOutcome};
use subshift::generators::{staircase, staircase_counts, sturmian, GrowthFunction, Real, SturmianParams};
use subshift::language::{build_language, SaturationPolicy};
use subshift::measures::{weak_distance, EmpiricalMeasure, WeakMetricSpec};
use subshift::seqfile::{format_sequence, parse_sequence};
use subshift::sequence::periodic;
use subshift::{Alphabet, Symbol, Word};

fn word(k: u8, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Symbol>> {
    prop::collection::vec((0..k).prop_map(Symbol), len)
}

fn minimal_period(c: &[Symbol]) -> usize {
    (1..=c.len()).find(|&p| c.len() % p == 0 && (0..c.len()).all(|i| c[i] == c[(i + p) % c.len()])).unwrap()
}

/// Memory, anticipation and a full rule table over `k_src` symbols into `k_tgt`.
fn block_map(k_src: u8, k_tgt: u8) -> impl Strategy<Value = BlockMap> {
    (0..=2usize, 0..=2usize).prop_flat_map(move |(m, a)| {
        let width = (m + a + 1) as u32;
        prop::collection::vec(0..k_tgt, (k_src as usize).pow(width)).prop_map(move |images| {
            let k = k_src as usize;
            let table: HashMap<Vec<Symbol>, Symbol> = images
                .iter()
                .enumerate()
                .map(|(code, &img)| {
                    let w = (0..width).map(|p| Symbol((code / k.pow(p) % k) as u8)).collect();
                    (w, Symbol(img))
                })
                .collect();
            BlockMap::from_table(m, a, Alphabet::digits(k), Alphabet::digits(k_tgt as usize), table, false).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sturmian_complexity_is_n_plus_one(gap in 2i64..30, silver in any::<bool>(), x0 in 1u32..999) {
        let beta = if silver { Real::silver_in_gap(gap) } else { Real::golden_in_gap(gap) };
        let p = SturmianParams::new(beta).with_x0(Real::parse(&format!("0.{x0:03}")).unwrap());
        let prof = profile(&build_language(&sturmian(p).unwrap(), 48, &SaturationPolicy::default()).unwrap());
        for n in prof.saturated_levels() {
            prop_assert_eq!(prof.c(n), n as u64 + 1);
        }
        prop_assert_eq!(prof.saturated_prefix(), 48);
    }

    #[test]
    fn periodic_profile_and_detector(cycle in word(3, 1..=12)) {
        let p = minimal_period(&cycle);
        let x = periodic(Alphabet::digits(3), Word(cycle)).unwrap();
        let table = build_language(&x, 24, &SaturationPolicy::default()).unwrap();
        let prof = profile(&table);
        for n in prof.saturated_levels() {
            prop_assert!(prof.c(n) <= p as u64);
            if n >= p {
                prop_assert_eq!(prof.c(n), p as u64);
            }
        }
        let census = special_census(&table);
        prop_assert!(check_counting(&prof, &census).unwrap().iter().all(|r| r.holds));
        let mh = morse_hedlund_classify(&prof, &x, 128).unwrap();
        prop_assert_eq!(mh.outcome, MhOutcome::Periodic { period: p });
    }

    #[test]
    fn bound_traces_reproduce(cycle in word(2, 1..=10), alpha in 0u64..4) {
        let x = periodic(Alphabet::digits(2), Word(cycle)).unwrap();
        let prof = profile(&build_language(&x, 32, &SaturationPolicy::default()).unwrap());
        for mode in [BoundMode::Ceiling, BoundMode::LiminfFloor, BoundMode::LimsupFloor] {
            let r = bound_report(&prof, &BoundSpec::new(alpha, GrowthFunction::sqrt(), mode));
            prop_assert!(r.recompute_matches(&prof));
            prop_assert_eq!(r.trace.len(), prof.saturated_levels().count());
        }
    }

    #[test]
    fn block_map_length_and_coherence(f in block_map(2, 3), w in word(2, 0..=30), cycle in word(2, 1..=9), lo in -40i64..40, len in 0i64..25) {
        match apply_to_word(&f, &w) {
            Ok(img) => prop_assert_eq!(img.len() + f.width() - 1, w.len()),
            Err(_) => prop_assert!(w.len() < f.width()),
        }
        let x = periodic(Alphabet::digits(2), Word(cycle)).unwrap();
        let hi = lo + len;
        let direct = apply_to_word(&f, &x.window(lo - f.memory() as i64, hi + f.anticipation() as i64).unwrap()).unwrap();
        prop_assert_eq!(direct, apply_to_sequence(&f, &x).unwrap().window(lo, hi).unwrap());
    }

    #[test]
    fn composition_is_sequential(f in block_map(2, 2), g in block_map(2, 3), lo in -500i64..500) {
        let x = sturmian(SturmianParams::golden()).unwrap();
        let gf = compose(&g, &f).unwrap();
        prop_assert_eq!(gf.memory(), f.memory() + g.memory());
        prop_assert_eq!(gf.anticipation(), f.anticipation() + g.anticipation());
        let one = apply_to_sequence(&gf, &x).unwrap().window(lo, lo + 200).unwrap();
        let two = apply_to_sequence(&g, &apply_to_sequence(&f, &x).unwrap()).unwrap().window(lo, lo + 200).unwrap();
        prop_assert_eq!(one, two);
    }

    #[test]
    fn empirical_counts_are_consistent(text in word(3, 8..=200), depth in 1usize..4) {
        let a = Alphabet::digits(3);
        let n = (text.len() + 1 - depth) as u64;
        let m = EmpiricalMeasure::from_symbols(&a, &text, n, depth).unwrap();
        for d in 1..=depth {
            prop_assert_eq!(m.support(d).map(|(_, c)| *c).sum::<u64>(), n);
        }
        // extending on the right refines the cylinder exactly
        for d in 1..depth {
            for (w, c) in m.support(d) {
                let ext: u64 = (0..3).map(|s| {
                    let mut v = w.0.clone();
                    v.push(Symbol(s));
                    m.count(&v)
                }).sum();
                prop_assert_eq!(ext, *c);
            }
        }
    }

    #[test]
    fn weak_distance_is_a_pseudometric(a in word(2, 6..=60), b in word(2, 6..=60), c in word(2, 6..=60)) {
        let al = Alphabet::digits(2);
        let spec = WeakMetricSpec::default();
        let depth = spec.required_depth(&al);
        let meas = |w: &[Symbol]| EmpiricalMeasure::periodic(&al, w, depth).unwrap();
        let (ma, mb, mc) = (meas(&a), meas(&b), meas(&c));
        let d = |x: &EmpiricalMeasure, y: &EmpiricalMeasure| weak_distance(x, y, &spec).unwrap().value;
        prop_assert!(d(&ma, &ma).abs() < 1e-12);
        prop_assert!((d(&ma, &mb) - d(&mb, &ma)).abs() < 1e-12);
        prop_assert!(d(&ma, &mc) <= d(&ma, &mb) + d(&mb, &mc) + 1e-12);
    }

    #[test]
    fn staircase_counts_match_the_scan(start in 0u64..5000, n in 2u64..3000) {
        let m = EmpiricalMeasure::empirical(&staircase(), start as i64, n, 2).unwrap();
        let (single, pair) = staircase_counts(start, n);
        for a in 0..2u8 {
            prop_assert_eq!(m.count(&[Symbol(a)]), single[a as usize]);
            for b in 0..2u8 {
                prop_assert_eq!(m.count(&[Symbol(a), Symbol(b)]), pair[a as usize][b as usize]);
            }
        }
    }

    #[test]
    fn sequence_files_round_trip(cycle in word(3, 1..=7), lo in -20i64..=0, extra in 0i64..60) {
        let len = 1 - lo + extra;
        let x = periodic(Alphabet::digits(3), Word(cycle)).unwrap();
        let text = format_sequence(&x, lo, lo + len - 1).unwrap();
        let y = parse_sequence(&text, "roundtrip").unwrap();
        prop_assert_eq!(y.window(lo, lo + len - 1).unwrap(), x.window(lo, lo + len - 1).unwrap());
        prop_assert_eq!(format_sequence(&y, lo, lo + len - 1).unwrap(), text);
        prop_assert!(format_sequence(&x, 1, len).is_err());
    }
}
