//! Randomized checks against brute-force oracles.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigUint;
use proptest::prelude::*;
use unilearn::concepts::{
    is_realizable, restrict, weight, ConceptClass, Domain, Hypothesis, HypothesisSpace, LabeledPrefix, Label, Point,
    Preset,
};
use unilearn::learners::experts::{index_of_set, order_key, set_of_index, set_of_index_u64};
use unilearn::learners::{wm_bound, wm_step, WeightVector};
use unilearn::trees::{littlestone_dimension, vc_dimension, Depth};

/// A partial class over `n <= 6` points with up to 10 distinct hypotheses.
fn partial_class() -> impl Strategy<Value = ConceptClass> {
    (1usize..=6).prop_flat_map(|n| {
        let full = (1u64 << n) - 1;
        prop::collection::vec((0..=full, 0..=full), 0..10).prop_map(move |raw| {
            let mut seen = HashSet::new();
            let hyps: Vec<Hypothesis> = raw
                .into_iter()
                .map(|(d, o)| Hypothesis::partial(d, o & d))
                .filter(|h| seen.insert(*h))
                .collect();
            ConceptClass::new(Arc::new(Domain::numbered(n).unwrap()), hyps, Preset::Custom).unwrap()
        })
    })
}

fn pairs_for(n: usize) -> impl Strategy<Value = Vec<(Point, Label)>> {
    prop::collection::vec((0..n, any::<bool>()), 0..8)
        .prop_map(|v| v.into_iter().map(|(x, b)| (Point(x), Label::from_bit(b))).collect())
}

fn class_and_pairs() -> impl Strategy<Value = (ConceptClass, Vec<(Point, Label)>)> {
    partial_class().prop_flat_map(|c| {
        let n = c.domain().len();
        (Just(c), pairs_for(n))
    })
}

fn agrees(h: &Hypothesis, x: Point, y: Label) -> bool {
    let bit = 1u64 << x.0;
    h.defined_mask() & bit != 0 && (h.ones_mask() & bit != 0) == (y == Label::One)
}

fn consistent(class: &ConceptClass, pairs: &[(Point, Label)]) -> Vec<Hypothesis> {
    class
        .hypotheses()
        .iter()
        .filter(|h| pairs.iter().all(|&(x, y)| agrees(h, x, y)))
        .copied()
        .collect()
}

fn shattered(hyps: &[Hypothesis], set: u64) -> bool {
    let patterns: HashSet<u64> = hyps
        .iter()
        .filter(|h| h.defined_mask() & set == set)
        .map(|h| h.ones_mask() & set)
        .collect();
    patterns.len() as u64 == 1u64 << set.count_ones()
}

fn shattered_subsets(hyps: &[Hypothesis], support: u64) -> u64 {
    let mut count = 0;
    let mut sub = support;
    loop {
        count += u64::from(shattered(hyps, sub));
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & support;
    }
    count
}

fn ldim_oracle(hyps: &[Hypothesis], n: usize, memo: &mut HashMap<Vec<Hypothesis>, i64>) -> i64 {
    if hyps.is_empty() {
        return -1;
    }
    if let Some(&d) = memo.get(hyps) {
        return d;
    }
    let mut best = 0;
    for x in 0..n {
        let side = |y| -> Vec<Hypothesis> { hyps.iter().filter(|h| agrees(h, Point(x), y)).copied().collect() };
        let (zero, one) = (side(Label::Zero), side(Label::One));
        if !zero.is_empty() && !one.is_empty() {
            best = best.max(1 + ldim_oracle(&zero, n, memo).min(ldim_oracle(&one, n, memo)));
        }
    }
    memo.insert(hyps.to_vec(), best);
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn restriction_matches_oracle((class, pairs) in class_and_pairs()) {
        let prefix = LabeledPrefix::from(pairs.clone());
        let got: Vec<Hypothesis> = restrict(&class, &prefix).unwrap().hypotheses().to_vec();
        prop_assert_eq!(got, consistent(&class, &pairs));
    }

    #[test]
    fn restriction_is_monotone((class, pairs) in class_and_pairs()) {
        let mut last = class.len();
        for k in 0..=pairs.len() {
            let now = restrict(&class, &LabeledPrefix::from(pairs[..k].to_vec())).unwrap().len();
            prop_assert!(now <= last);
            last = now;
        }
    }

    #[test]
    fn realizable_iff_nonempty((class, pairs) in class_and_pairs()) {
        let prefix = LabeledPrefix::from(pairs.clone());
        let nonempty = !consistent(&class, &pairs).is_empty();
        prop_assert_eq!(is_realizable(&class, &prefix).unwrap(), nonempty);
        prop_assert_eq!(HypothesisSpace::from(class).is_realizable(&pairs).unwrap(), nonempty);
    }

    #[test]
    fn weight_matches_oracle_and_bounds((class, pairs) in class_and_pairs()) {
        let window: Vec<Point> = pairs.iter().map(|p| p.0).collect();
        let support = window.iter().fold(0u64, |m, x| m | 1 << x.0);
        let w = weight(&class, &window, 20).unwrap();
        prop_assert_eq!(w, shattered_subsets(class.hypotheses(), support));
        prop_assert!(w <= 1 << support.count_ones());
        prop_assert_eq!(w >= 1, !class.is_empty());
        // a subclass never shatters more
        let sub = restrict(&class, &LabeledPrefix::from(pairs.clone())).unwrap();
        prop_assert!(weight(&sub, &window, 20).unwrap() <= w);
    }

    #[test]
    fn dimensions_match_oracles(class in partial_class()) {
        let n = class.domain().len();
        let vc = (0u64..1 << n)
            .filter(|&s| shattered(class.hypotheses(), s))
            .map(|s| s.count_ones() as usize)
            .max();
        prop_assert_eq!(vc_dimension(&class), vc);
        let ldim = ldim_oracle(class.hypotheses(), n, &mut HashMap::new());
        let expected = (ldim >= 0).then_some(Depth::Exact(ldim.max(0) as usize));
        prop_assert_eq!(littlestone_dimension(&class, 10), expected);
    }

    #[test]
    fn index_inverse_on_random_sets(raw in prop::collection::btree_set(1u64..200, 0..6)) {
        let index = index_of_set(&raw).unwrap();
        prop_assert_eq!(set_of_index(&index).unwrap(), raw);
    }

    #[test]
    fn wm_stays_within_bound(
        n in 1usize..12,
        rounds in prop::collection::vec((any::<u16>(), any::<bool>()), 0..60),
    ) {
        let mut weights = WeightVector::harmonic(n);
        let mut mistakes = 0u64;
        for (bits, y) in rounds {
            let advice: Vec<Label> = (0..n).map(|i| Label::from_bit(bits >> (i % 16) & 1 == 1)).collect();
            let y = Label::from_bit(y);
            if wm_step(&mut weights, &advice, y).unwrap() != y {
                mistakes += 1;
            }
            let (bound, _) = wm_bound(&weights);
            prop_assert!(mistakes as f64 <= bound + 1e-9);
        }
    }
}

#[test]
fn first_hundred_thousand_indices() {
    let mut prev_key = 0;
    for i in 1..=100_000u64 {
        let set = set_of_index_u64(i).unwrap();
        let key = order_key(&set);
        assert!(key >= prev_key, "key order breaks at index {i}");
        prev_key = key;
        assert_eq!(index_of_set(&set).unwrap(), BigUint::from(i));
    }
}

#[test]
fn empty_set_is_first() {
    assert_eq!(index_of_set(&BTreeSet::new()).unwrap(), BigUint::from(1u32));
    assert_eq!(set_of_index_u64(2).unwrap(), BTreeSet::from([1]));
}
