//! Finite matrix groups over ℚ.
//!
//! Elements are enumerated once by breadth-first closure; everything else
//! (classes, centralizers, inverses) refers to elements by their position in
//! that enumeration.

use std::collections::HashMap;

use num_integer::Integer;
use thiserror::Error;

use crate::exact::{ExactError, Field, Matrix, Rational};

pub const DEFAULT_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("no generators given")]
    NoGenerators,
    #[error("generator {index} is {rows}x{cols}, expected {expected}x{expected}")]
    BadShape { index: usize, rows: usize, cols: usize, expected: usize },
    #[error("generator {0} is not invertible")]
    NotInvertible(usize),
    #[error("group closure exceeded {0} elements")]
    CapExceeded(usize),
    #[error("an element has multiplicative order above {0} (infinite order?)")]
    OrderCapExceeded(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A finite group of invertible rational `n×n` matrices with its full element list.
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    ambient_dim: usize,
    generators: Vec<Matrix<Rational>>,
    elements: Vec<Matrix<Rational>>,
    lookup: HashMap<Matrix<Rational>, usize>,
    inverses: Vec<usize>,
    orders: Vec<u64>,
    exponent: u64,
}

/// One conjugacy class, by element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub centralizer: Vec<usize>,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn centralizer_order(&self) -> usize {
        self.centralizer.len()
    }
}

fn element_order(g: &Matrix<Rational>, cap: usize) -> Result<u64, GroupError> {
    let id = Matrix::identity(g.rows());
    let mut power = g.clone();
    for k in 1..=cap as u64 {
        if power == id {
            return Ok(k);
        }
        power = &power * g;
    }
    Err(GroupError::OrderCapExceeded(cap))
}

impl MatrixGroup {
    /// Closes the generators under multiplication.
    ///
    /// Enumeration order: the identity, then breadth-first over left
    /// multiplication by the generators in the given order.
    pub fn generate(generators: Vec<Matrix<Rational>>, cap: usize) -> Result<Self, GroupError> {
        let n = generators.first().ok_or(GroupError::NoGenerators)?.rows();
        for (index, g) in generators.iter().enumerate() {
            if g.rows() != n || g.cols() != n {
                return Err(GroupError::BadShape { index, rows: g.rows(), cols: g.cols(), expected: n });
            }
            if g.det()?.is_zero() {
                return Err(GroupError::NotInvertible(index));
            }
        }
        for g in &generators {
            element_order(g, cap)?;
        }

        let id = Matrix::identity(n);
        let mut elements = vec![id.clone()];
        let mut lookup = HashMap::from([(id, 0usize)]);
        let mut head = 0;
        while head < elements.len() {
            for g in &generators {
                let next = g * &elements[head];
                if !lookup.contains_key(&next) {
                    if elements.len() == cap {
                        return Err(GroupError::CapExceeded(cap));
                    }
                    lookup.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
            head += 1;
        }

        let mut inverses = Vec::with_capacity(elements.len());
        for e in &elements {
            let inv = e.inverse()?;
            inverses.push(*lookup.get(&inv).expect("finite monoid is a group"));
        }
        let orders = elements.iter().map(|e| element_order(e, elements.len())).collect::<Result<Vec<_>, _>>()?;
        let exponent = orders.iter().fold(1u64, |acc, o| acc.lcm(o));
        Ok(Self { ambient_dim: n, generators, elements, lookup, inverses, orders, exponent })
    }

    pub fn trivial(n: usize) -> Self {
        Self::generate(vec![Matrix::identity(n)], 1).expect("trivial group")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Matrix<Rational>] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix<Rational>] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Matrix<Rational> {
        &self.elements[i]
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, m: &Matrix<Rational>) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.lookup[&(&self.elements[a] * &self.elements[b])]
    }

    pub fn element_order(&self, i: usize) -> u64 {
        self.orders[i]
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| self.generators[i + 1..].iter().all(|b| a * b == b * a))
    }

    /// Conjugacy classes in order of first appearance; each representative is
    /// the earliest member in enumeration order.
    pub fn conjugacy_classes(&self) -> Vec<ConjClass> {
        let mut assigned = vec![false; self.order()];
        let mut classes = Vec::new();
        for x in 0..self.order() {
            if assigned[x] {
                continue;
            }
            let gx = &self.elements[x];
            let mut members = Vec::new();
            let mut centralizer = Vec::new();
            for (h, gh) in self.elements.iter().enumerate() {
                let hx = gh * gx;
                let conj = &hx * &self.elements[self.inverses[h]];
                let c = self.lookup[&conj];
                if !assigned[c] {
                    assigned[c] = true;
                    members.push(c);
                }
                if hx == gx * gh {
                    centralizer.push(h);
                }
            }
            members.sort_unstable();
            classes.push(ConjClass { representative: x, members, centralizer });
        }
        classes
    }
}
