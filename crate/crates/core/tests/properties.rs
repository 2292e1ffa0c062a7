mod common;

use multibin::classic::{self, FitPolicy, ItemOrder, PackInstance};
use multibin::coloring::{self, Graph};
use multibin::estimate::{self, Dominance, MsEstimate};
use multibin::limits::ExactLimits;
use multibin::pipelines::{self, Message};
use multibin::{oracle, PackInstanceF64, Rational};
use proptest::prelude::*;

fn shaped(l: usize, eta: usize) -> impl Strategy<Value = MsEstimate> {
    proptest::collection::vec(1..=l, eta).prop_map(move |levels| MsEstimate::from_levels(l, &levels).unwrap())
}

/// Members of the scale only: the generalized median searches intervals.
fn interval(l: usize, eta: usize) -> impl Strategy<Value = MsEstimate> {
    proptest::sample::select(estimate::enumerate_scale(l, eta).unwrap())
}

fn pair() -> impl Strategy<Value = (MsEstimate, MsEstimate)> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(l, eta)| (shaped(l, eta), shaped(l, eta)))
}

fn tenths() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(1i64..=10, 0..=9)
}

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..=7).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            let edges: Vec<(usize, usize)> = pairs
                .into_iter()
                .zip(bits)
                .filter(|(_, on)| *on)
                .map(|(e, _)| e)
                .collect();
            Graph::unlabeled(n, &edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn display_parses_back(e in (1usize..=5, 0usize..=5).prop_flat_map(|(l, eta)| shaped(l, eta))) {
        prop_assert_eq!(e.to_string().parse::<MsEstimate>().unwrap(), e);
    }

    #[test]
    fn proximity_is_antisymmetric((a, b) in pair()) {
        let ab = estimate::proximity(&a, &b).unwrap();
        let ba = estimate::proximity(&b, &a).unwrap();
        prop_assert_eq!(ab.swapped(), ba);
        prop_assert_eq!(ab.magnitude() == 0, a == b);
        prop_assert_eq!(ab.magnitude(), oracle::step_distance(&a, &b).unwrap());
    }

    #[test]
    fn proximity_obeys_triangle_inequality(
        (a, b, c) in (1usize..=4, 1usize..=4).prop_flat_map(|(l, eta)| (shaped(l, eta), shaped(l, eta), shaped(l, eta)))
    ) {
        let d = |x: &MsEstimate, y: &MsEstimate| estimate::proximity(x, y).unwrap().magnitude();
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
    }

    #[test]
    fn dominance_reverses((a, b) in pair()) {
        let ab = estimate::dominates(&a, &b).unwrap();
        prop_assert_eq!(ab.reversed(), estimate::dominates(&b, &a).unwrap());
        prop_assert_eq!(ab == Dominance::Equal, a == b);
        // A strictly better estimate needs only improvement moves.
        let p = estimate::proximity(&b, &a).unwrap();
        if ab == Dominance::Better {
            prop_assert_eq!(p.delta_plus, 0);
        }
    }

    #[test]
    fn integration_adds_counts((a, b) in pair()) {
        let sum = estimate::integrate(&[a.clone(), b.clone()]).unwrap();
        prop_assert_eq!(sum.eta(), a.eta() + b.eta());
        prop_assert_eq!(sum.level_sum(), a.level_sum() + b.level_sum());
        prop_assert_ne!(estimate::dominates_accumulated(&sum, &a).unwrap(), Dominance::Worse);
    }

    #[test]
    fn generalized_median_never_loses_to_set_median(
        set in (1usize..=4, 1usize..=3).prop_flat_map(|(l, eta)| proptest::collection::vec(interval(l, eta), 1..=6))
    ) {
        let (g, gc) = estimate::generalized_median_with_cost(&set).unwrap();
        let (_, sc) = estimate::set_median_with_cost(&set).unwrap();
        prop_assert!(gc <= sc);
        prop_assert!(g.is_interval());
        prop_assert_eq!(estimate::total_distance(&g, &set).unwrap(), gc);
    }

    #[test]
    fn fit_policies_are_feasible_and_bounded(w in tenths()) {
        let weights: Vec<Rational> = w.iter().map(|&x| Rational::new(x, 10)).collect();
        let instance = PackInstance::from_weights(&weights, Rational::from_integer(1)).unwrap();
        let exact = classic::exact_min_bins(&instance, &ExactLimits::default()).unwrap();
        prop_assert!(classic::validate(&instance, &exact).unwrap().is_ok());
        prop_assert!(exact.bin_count() >= classic::lower_bound(&instance));
        for policy in [FitPolicy::NextFit, FitPolicy::FirstFit, FitPolicy::BestFit, FitPolicy::WorstFit] {
            for order in [ItemOrder::AsGiven, ItemOrder::Decreasing] {
                let s = classic::fit_pack(&instance, policy, order);
                prop_assert!(classic::validate(&instance, &s).unwrap().is_ok());
                prop_assert!(s.bin_count() >= exact.bin_count());
                prop_assert_eq!(s.assigned_count(), instance.len());
            }
        }
        // Next fit never needs more than twice the optimum.
        let nf = classic::fit_pack(&instance, FitPolicy::NextFit, ItemOrder::AsGiven).bin_count();
        prop_assert!(nf <= 2 * exact.bin_count().max(1));
    }

    #[test]
    fn float_and_rational_agree_on_binary_fractions(w in proptest::collection::vec(1i64..=8, 0..=9)) {
        // Eighths are exact in binary, so both scalars see the same instance.
        let exact: Vec<Rational> = w.iter().map(|&x| Rational::new(x, 8)).collect();
        let float: Vec<f64> = w.iter().map(|&x| x as f64 / 8.0).collect();
        let a = PackInstance::from_weights(&exact, Rational::from_integer(1)).unwrap();
        let b = PackInstanceF64::from_weights(&float, 1.0).unwrap();
        for policy in [FitPolicy::FirstFit, FitPolicy::BestFit] {
            prop_assert_eq!(
                classic::fit_pack(&a, policy, ItemOrder::Decreasing),
                classic::fit_pack(&b, policy, ItemOrder::Decreasing)
            );
        }
    }

    #[test]
    fn chromatic_number_is_tight(g in graph()) {
        let limits = ExactLimits::default();
        let (chi, coloring) = coloring::chromatic_coloring(&g, None, &limits).unwrap();
        prop_assert!(g.is_proper(&coloring));
        prop_assert!(coloring.iter().all(|&c| c < chi));
        prop_assert!(coloring::count_proper_colorings(&g, chi, &limits).unwrap() > 0);
        prop_assert_eq!(coloring::count_proper_colorings(&g, chi - 1, &limits).unwrap(), 0);
        prop_assert_eq!(
            coloring::count_proper_colorings(&g, 3, &limits).unwrap(),
            oracle::count_colorings(&g, 3).unwrap()
        );
    }

    #[test]
    fn shortest_first_minimizes_mean_completion(w in proptest::collection::vec(1i64..=20, 1..=7)) {
        let msgs: Vec<Message> = w.iter().enumerate().map(|(i, &x)| Message::new(i as u32 + 1, common::q(x))).collect();
        let swf = pipelines::swf_order(&msgs).mean_completion().unwrap();
        let weights: Vec<Rational> = msgs.iter().map(|m| m.weight).collect();
        prop_assert_eq!(swf, oracle::min_mean_completion(&weights).unwrap());
        prop_assert!(swf <= pipelines::mean_completion(&weights).unwrap());
    }
}
