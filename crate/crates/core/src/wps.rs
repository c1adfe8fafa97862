//! Weighted projective stacks `ℙ(a₀, …, aₙ)`.
//!
//! The inertia of `[(𝔸^{n+1} ∖ 0)/𝔾_m]` has one component per root of unity
//! `ζ` with `ζ^{a_i} = 1` for some `i`: the locus where only those
//! coordinates may be nonzero, itself a weighted projective stack of
//! dimension `|S(ζ)| − 1`.

use std::collections::BTreeMap;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WpsError {
    #[error("weight vector is empty")]
    Empty,
    #[error("weight {0} at position {1} is not positive")]
    NonPositive(u64, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedStack {
    weights: Vec<u64>,
}

impl WeightedStack {
    pub fn new(weights: Vec<u64>) -> Result<Self, WpsError> {
        if weights.is_empty() {
            return Err(WpsError::Empty);
        }
        if let Some((i, &w)) = weights.iter().enumerate().find(|(_, &w)| w == 0) {
            return Err(WpsError::NonPositive(w, i));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn dimension(&self) -> usize {
        self.weights.len() - 1
    }

    /// `N = lcm(a_i)`; every relevant root is a power of `exp(2πi/N)`.
    pub fn root_order(&self) -> u64 {
        self.weights.iter().fold(1, |acc, w| acc.lcm(w))
    }
}

/// Root `ζ = exp(2πi·k/N)`, stored exactly as `(N, k)` with `0 ≤ k < N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Root {
    pub order: u64,
    pub k: u64,
}

impl Root {
    /// Multiplicative order of `ζ`.
    pub fn primitive_order(&self) -> u64 {
        self.order / self.order.gcd(&self.k)
    }

    /// `ζ^a = 1`
    pub fn kills(&self, a: u64) -> bool {
        a.is_multiple_of(self.primitive_order())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InertiaComponent {
    pub root: Root,
    pub support: Vec<usize>,
    pub component_weights: Vec<u64>,
}

impl InertiaComponent {
    pub fn dimension(&self) -> usize {
        self.support.len() - 1
    }

    pub fn is_untwisted(&self) -> bool {
        self.root.k == 0
    }

    /// `h^{p,q}`: the diagonal diamond of a weighted projective stack.
    pub fn hodge_number(&self, p: usize, q: usize) -> u64 {
        u64::from(p == q && p <= self.dimension())
    }
}

/// Components ordered by root index `k` ascending; `k = 0` is the stack itself.
pub fn inertia_components(stack: &WeightedStack) -> Vec<InertiaComponent> {
    let order = stack.root_order();
    (0..order)
        .filter_map(|k| {
            let root = Root { order, k };
            let support: Vec<usize> = (0..stack.weights.len()).filter(|&i| root.kills(stack.weights[i])).collect();
            if support.is_empty() {
                return None;
            }
            let component_weights = support.iter().map(|&i| stack.weights[i]).collect();
            Some(InertiaComponent { root, support, component_weights })
        })
        .collect()
}

/// `HH_i = Σ_components Σ_{q−p=−i} h^{p,q}`, only nonzero degrees listed.
pub fn hh_vector(stack: &WeightedStack) -> BTreeMap<i64, u64> {
    let mut hh = BTreeMap::new();
    for comp in inertia_components(stack) {
        let dim = comp.dimension();
        for p in 0..=dim {
            for q in 0..=dim {
                let h = comp.hodge_number(p, q);
                if h > 0 {
                    *hh.entry(p as i64 - q as i64).or_insert(0) += h;
                }
            }
        }
    }
    hh
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn stack(w: &[u64]) -> WeightedStack {
        WeightedStack::new(w.to_vec()).unwrap()
    }

    #[test]
    fn football_two_three() {
        let comps = inertia_components(&stack(&[2, 3]));
        let view: Vec<(u64, Vec<usize>)> = comps.iter().map(|c| (c.root.k, c.support.clone())).collect();
        // N = 6: ζ = 1, ζ₃ (k=2), −1 (k=3), ζ₃² (k=4)
        assert_eq!(view, vec![(0, vec![0, 1]), (2, vec![1]), (3, vec![0]), (4, vec![1])]);
        assert_eq!(comps.iter().filter(|c| !c.is_untwisted()).count(), (2 - 1) + (3 - 1));
        assert_eq!(hh_vector(&stack(&[2, 3])), BTreeMap::from([(0, 5)]));
    }

    #[test]
    fn projective_line_and_plane() {
        assert_eq!(inertia_components(&stack(&[1, 1])).len(), 1);
        assert_eq!(hh_vector(&stack(&[1])), BTreeMap::from([(0, 1)]));
        assert_eq!(hh_vector(&stack(&[1, 1, 1])), BTreeMap::from([(0, 3)]));
    }

    #[test]
    fn gerbe_over_the_line() {
        let comps = inertia_components(&stack(&[2, 2]));
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.dimension() == 1 && c.support == vec![0, 1]));
    }

    #[test]
    fn rejects_bad_weights() {
        assert_eq!(WeightedStack::new(vec![]), Err(WpsError::Empty));
        assert_eq!(WeightedStack::new(vec![2, 0]), Err(WpsError::NonPositive(0, 1)));
    }

    proptest! {
        #[test]
        fn counting_identity(w in proptest::collection::vec(1u64..10, 1..6)) {
            let s = stack(&w);
            let comps = inertia_components(&s);
            let total: u64 = comps.iter().map(|c| c.dimension() as u64 + 1).sum();
            prop_assert_eq!(total, w.iter().sum::<u64>());
            let hh = hh_vector(&s);
            prop_assert_eq!(hh.keys().copied().collect::<Vec<_>>(), vec![0]);
            prop_assert_eq!(hh[&0], total);
            let untwisted = &comps[0];
            prop_assert!(untwisted.is_untwisted());
            prop_assert_eq!(untwisted.dimension(), s.dimension());
        }

        #[test]
        fn coprime_weights_give_point_sectors(a in 1u64..12, b in 1u64..12, c in 1u64..12) {
            prop_assume!(a.gcd(&b) == 1 && b.gcd(&c) == 1 && a.gcd(&c) == 1);
            for comp in inertia_components(&stack(&[a, b, c])).iter().skip(1) {
                prop_assert_eq!(comp.dimension(), 0);
            }
        }
    }
}
