//! Seeded instance generators shared by the integration tests.

#![allow(dead_code)]

use multibin::classic::{ItemId, PackInstance};
use multibin::estimate::{enumerate_scale, MsEstimate};
use multibin::mse_packing::{ModelKind, MseItem, Relaxation};
use multibin::relational::ConflictGraph;
use multibin::Rational;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn est(text: &str) -> MsEstimate {
    text.parse().expect("valid estimate literal")
}

/// `n` items with weights in tenths from 0.1 to 1.0, capacity 1.
pub fn pack_instance<R: Rng>(rng: &mut R, n: usize) -> PackInstance {
    let weights: Vec<Rational> = (0..n).map(|_| Rational::new(rng.gen_range(1..=10), 10)).collect();
    PackInstance::from_weights(&weights, q(1)).expect("weights within capacity")
}

/// Each pair of ids `1..=n` conflicts with probability `p`.
pub fn conflicts<R: Rng>(rng: &mut R, n: usize, p: f64) -> ConflictGraph {
    let mut edges = Vec::new();
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            if rng.gen_bool(p) {
                edges.push((ItemId(a), ItemId(b)));
            }
        }
    }
    ConflictGraph::new(edges).expect("distinct endpoints")
}

pub fn random_estimate<R: Rng>(rng: &mut R, l: usize, eta: usize) -> MsEstimate {
    enumerate_scale(l, eta)
        .expect("valid scale")
        .choose(rng)
        .expect("non-empty scale")
        .clone()
}

/// Items with integer weights `1..=6`, profits `1..=9` and estimates on
/// `(3, eta)`. `bins` > 0 adds per-bin estimates and profits on a random
/// non-empty subset of the bins.
pub fn mse_items<R: Rng>(rng: &mut R, n: usize, eta: usize, bins: usize, groups: u32) -> Vec<MseItem> {
    (0..n)
        .map(|i| {
            let mut item = MseItem::new(i as u32 + 1, q(rng.gen_range(1..=6)))
                .with_estimate(random_estimate(rng, 3, eta))
                .with_profit(q(rng.gen_range(1..=9)));
            if groups > 0 {
                item = item.with_group(rng.gen_range(1..=groups));
            }
            if bins > 0 {
                let mut allowed: Vec<usize> = (0..bins).filter(|_| rng.gen_bool(0.7)).collect();
                if allowed.is_empty() {
                    allowed.push(rng.gen_range(0..bins));
                }
                for b in allowed {
                    item = item
                        .with_position_estimate(b, random_estimate(rng, 3, eta))
                        .with_position_profit(b, q(rng.gen_range(1..=9)));
                }
            }
            item
        })
        .collect()
}

pub fn capacities<R: Rng>(rng: &mut R, k: usize) -> Vec<Rational> {
    (0..k).map(|_| q(rng.gen_range(4..=12))).collect()
}

/// One of the six packing models with up to `max_k` containers.
pub fn model<R: Rng>(rng: &mut R, which: usize, n: usize, max_k: usize) -> ModelKind {
    let k = rng.gen_range(1..=max_k);
    let cap = q(rng.gen_range(4..=12));
    match which {
        0 => ModelKind::Knapsack { capacity: cap },
        1 => ModelKind::MultipleChoice { capacity: cap },
        2 => ModelKind::MultipleKnapsack {
            capacities: capacities(rng, k),
        },
        3 => ModelKind::GeneralizedAssignment {
            capacities: capacities(rng, k),
            relaxation: if rng.gen_bool(0.5) {
                Relaxation::MustAssignAll
            } else {
                Relaxation::AllowPartial
            },
        },
        4 => ModelKind::InverseBpp { bins: k, capacity: cap },
        _ => ModelKind::ConflictInverse {
            bins: k,
            capacity: cap,
            conflicts: conflicts(rng, n, 0.3),
        },
    }
}
