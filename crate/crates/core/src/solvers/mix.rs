//! Interleaving RUs so that every prefix reflects operator ownership.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scenario::{MnoId, RuNode};

const FRACTION_TOL: f64 = 1e-9;

/// Processing order of RUs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwnershipMix {
    pub order: Vec<usize>,
}

impl OwnershipMix {
    /// Largest `|count_m(t) - t * f_m|` over all prefixes `t` and operators `m`.
    pub fn max_prefix_deviation(&self, rus: &[RuNode], fractions: &BTreeMap<MnoId, f64>) -> f64 {
        let mut taken: BTreeMap<MnoId, usize> = fractions.keys().map(|&m| (m, 0)).collect();
        let mut worst: f64 = 0.0;
        for (t, &r) in self.order.iter().enumerate() {
            *taken.entry(rus[r].mno).or_insert(0) += 1;
            let t = (t + 1) as f64;
            for (m, &n) in &taken {
                let f = fractions.get(m).copied().unwrap_or(0.0);
                worst = worst.max((n as f64 - t * f).abs());
            }
        }
        worst
    }

    /// Position of every RU in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.order.len()];
        for (i, &r) in self.order.iter().enumerate() {
            pos[r] = i;
        }
        pos
    }
}

/// Fractions equal to each operator's share of the RUs.
pub fn ownership_fractions(rus: &[RuNode]) -> BTreeMap<MnoId, f64> {
    let mut counts: BTreeMap<MnoId, usize> = BTreeMap::new();
    for ru in rus {
        *counts.entry(ru.mno).or_insert(0) += 1;
    }
    let n = rus.len() as f64;
    counts.into_iter().map(|(m, c)| (m, c as f64 / n)).collect()
}

/// Orders RUs so that at every step the operator furthest behind its
/// ownership fraction goes next.
///
/// Ties go to the lowest operator id. Within an operator, RUs are taken in a
/// seeded shuffle. When an operator runs out of RUs it is skipped.
pub fn mix_by_ownership(
    rus: &[RuNode],
    fractions: &BTreeMap<MnoId, f64>,
    seed: u64,
) -> Result<OwnershipMix> {
    let sum: f64 = fractions.values().sum();
    if !rus.is_empty() && (sum - 1.0).abs() > FRACTION_TOL {
        return Err(Error::Config(format!("ownership fractions sum to {sum}, not 1")));
    }
    if let Some((m, f)) = fractions.iter().find(|(_, f)| !(0.0..=1.0).contains(*f)) {
        return Err(Error::Config(format!("ownership fraction {f} of MNO-{m} is outside [0, 1]")));
    }
    let mut queues: BTreeMap<MnoId, Vec<usize>> = BTreeMap::new();
    for (r, ru) in rus.iter().enumerate() {
        if !fractions.contains_key(&ru.mno) {
            return Err(Error::Config(format!("no ownership fraction for MNO-{}", ru.mno)));
        }
        queues.entry(ru.mno).or_default().push(r);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for q in queues.values_mut() {
        q.shuffle(&mut rng);
        // popped from the back
        q.reverse();
    }

    let mut taken: BTreeMap<MnoId, usize> = BTreeMap::new();
    let mut order = Vec::with_capacity(rus.len());
    for t in 1..=rus.len() {
        let mut best: Option<(MnoId, f64)> = None;
        for (&m, q) in &queues {
            if q.is_empty() {
                continue;
            }
            let deficit = t as f64 * fractions[&m] - taken.get(&m).copied().unwrap_or(0) as f64;
            if best.is_none_or(|(_, d)| deficit > d + FRACTION_TOL) {
                best = Some((m, deficit));
            }
        }
        let (m, _) = best.expect("a non-empty queue remains");
        order.push(queues.get_mut(&m).and_then(Vec::pop).expect("non-empty"));
        *taken.entry(m).or_insert(0) += 1;
    }
    Ok(OwnershipMix { order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::simple_ru;
    use crate::topology::Point2D;

    fn rus(counts: &[(MnoId, usize)]) -> Vec<RuNode> {
        counts
            .iter()
            .flat_map(|&(m, n)| (0..n).map(move |_| m))
            .enumerate()
            .map(|(i, m)| simple_ru(format!("ru-{i}"), m, Point2D::new(0.0, 0.0), (1e9, 1e8), (10.0, 10.0)))
            .collect()
    }

    #[test]
    fn two_to_one_interleaves() {
        let rus = rus(&[(1, 2), (2, 1)]);
        let f = ownership_fractions(&rus);
        let mix = mix_by_ownership(&rus, &f, 7).unwrap();
        let mnos: Vec<_> = mix.order.iter().map(|&r| rus[r].mno).collect();
        assert_eq!(mnos, [1, 2, 1]);
        assert!(mix.max_prefix_deviation(&rus, &f) <= 1.0);
    }

    #[test]
    fn twenty_five_thirty_five_forty() {
        let rus = rus(&[(1, 5), (2, 7), (3, 8)]);
        let f = ownership_fractions(&rus);
        let mix = mix_by_ownership(&rus, &f, 0).unwrap();
        assert_eq!(mix.order.len(), 20);
        assert!(mix.max_prefix_deviation(&rus, &f) <= 1.0);
    }

    #[test]
    fn seed_only_permutes_within_operator() {
        let rus = rus(&[(1, 4), (2, 6)]);
        let f = ownership_fractions(&rus);
        let a = mix_by_ownership(&rus, &f, 1).unwrap();
        let b = mix_by_ownership(&rus, &f, 2).unwrap();
        let mnos = |m: &OwnershipMix| m.order.iter().map(|&r| rus[r].mno).collect::<Vec<_>>();
        assert_eq!(mnos(&a), mnos(&b));
        assert_eq!(a, mix_by_ownership(&rus, &f, 1).unwrap());
    }

    #[test]
    fn rejects_bad_fractions() {
        let rus = rus(&[(1, 1), (2, 1)]);
        let mut f = BTreeMap::from([(1, 0.5), (2, 0.4)]);
        assert!(mix_by_ownership(&rus, &f, 0).is_err());
        f.remove(&2);
        f.insert(1, 1.0);
        assert!(mix_by_ownership(&rus, &f, 0).is_err());
    }
}
