//! Cell-level checks of the topological inputs.
//!
//! * `Γ_r`, the cofiber of the degree-`r` map of the circle, and its
//!   `C_r`-cover `B_r` (r discs glued along a common boundary circle).
//! * The algebras `A_n = k[x₁..x_n]/(x_i x_j)` over `k[t]`, `t ↦ Σ x_i`,
//!   their fibers, the two-term complex computing the affinization of the
//!   central fiber, and the homotopy colimit computing the generic fiber.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::exact::{smith_normal_form, Field, IntMatrix, Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircleError {
    #[error("{what} must be at least {min}, got {got}")]
    TooSmall { what: &'static str, min: usize, got: usize },
    #[error("boundary maps do not compose to zero at degree {0}")]
    NotAComplex(usize),
    #[error("differential d_{degree} has shape {rows}x{cols}, expected {exp_rows}x{exp_cols}")]
    Shape { degree: usize, rows: usize, cols: usize, exp_rows: usize, exp_cols: usize },
    #[error("map does not send points of one fiber to points of the other")]
    NotAFiberMap,
    #[error("map does not preserve the subspace")]
    NotInvariant,
}

fn at_least(what: &'static str, min: usize, got: usize) -> Result<(), CircleError> {
    if got < min {
        Err(CircleError::TooSmall { what, min, got })
    } else {
        Ok(())
    }
}

/// Finite chain complex of free abelian groups `C_top → … → C_0`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    /// `differentials[k]` is `d_{k+1}: C_{k+1} → C_k`.
    differentials: Vec<IntMatrix>,
    /// Invariant factors of each differential.
    factors: Vec<Vec<BigInt>>,
}

impl ChainComplex {
    pub fn new(ranks: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self, CircleError> {
        assert_eq!(differentials.len() + 1, ranks.len().max(1), "one differential per positive degree");
        for (k, d) in differentials.iter().enumerate() {
            if d.rows() != ranks[k] || d.cols() != ranks[k + 1] {
                return Err(CircleError::Shape {
                    degree: k + 1,
                    rows: d.rows(),
                    cols: d.cols(),
                    exp_rows: ranks[k],
                    exp_cols: ranks[k + 1],
                });
            }
        }
        for k in 1..differentials.len() {
            if !differentials[k - 1].mul(&differentials[k]).is_zero() {
                return Err(CircleError::NotAComplex(k + 1));
            }
        }
        let factors = differentials.iter().map(smith_normal_form).collect();
        Ok(Self { ranks, differentials, factors })
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Invariant factors of `d_k`; empty for `k = 0` and above the top.
    fn factors(&self, k: usize) -> &[BigInt] {
        k.checked_sub(1).and_then(|i| self.factors.get(i)).map_or(&[], Vec::as_slice)
    }

    pub fn differential(&self, k: usize) -> Option<&IntMatrix> {
        k.checked_sub(1).and_then(|i| self.differentials.get(i))
    }

    pub fn homology(&self, k: usize) -> HomologyGroup {
        let rank_out = self.factors(k).len();
        let incoming = self.factors(k + 1);
        let chains = self.ranks.get(k).copied().unwrap_or(0);
        HomologyGroup {
            free_rank: chains - rank_out - incoming.len(),
            torsion: incoming.iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }

    /// Dimension of `H_k(−; ℚ)`.
    pub fn betti(&self, k: usize) -> usize {
        self.homology(k).free_rank
    }

    pub fn euler_from_cells(&self) -> i64 {
        self.ranks.iter().enumerate().map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) }).sum()
    }

    pub fn euler_from_homology(&self) -> i64 {
        (0..=self.top_degree()).map(|k| if k % 2 == 0 { self.betti(k) as i64 } else { -(self.betti(k) as i64) }).sum()
    }
}

/// `ℤ^{free_rank} ⊕ ⊕ ℤ/d_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(order: u64) -> Self {
        Self { free_rank: 0, torsion: vec![BigInt::from(order)] }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// One 0-cell, one 1-cell (a loop), one 2-cell attached by degree `r`.
pub fn gamma_complex(r: usize) -> Result<ChainComplex, CircleError> {
    at_least("r", 2, r)?;
    ChainComplex::new(vec![1, 1, 1], vec![IntMatrix::from_rows(&[vec![0]]), IntMatrix::from_rows(&[vec![r as i64]])])
}

/// One 0-cell, the shared circle, and `r` discs each attached once along it.
pub fn cover_complex(r: usize) -> Result<ChainComplex, CircleError> {
    at_least("r", 2, r)?;
    ChainComplex::new(vec![1, 1, r], vec![IntMatrix::from_rows(&[vec![0]]), IntMatrix::from_rows(&[vec![1; r]])])
}

pub fn gamma_homology(r: usize) -> Result<[HomologyGroup; 3], CircleError> {
    let c = gamma_complex(r)?;
    Ok([c.homology(0), c.homology(1), c.homology(2)])
}

pub fn cover_homology(r: usize) -> Result<[HomologyGroup; 3], CircleError> {
    let c = cover_complex(r)?;
    Ok([c.homology(0), c.homology(1), c.homology(2)])
}

/// Homogeneous basis element of `A_n`: `1` or `x_var^exp` with `exp ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnBasis {
    One,
    Power { var: usize, exp: usize },
}

/// `A_n = k[x₁, …, x_n] / (x_i x_j : i < j)`, graded by degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradedAlgebraAn {
    pub n: usize,
}

impl GradedAlgebraAn {
    pub fn new(n: usize) -> Result<Self, CircleError> {
        at_least("n", 1, n)?;
        Ok(Self { n })
    }

    pub fn weight_basis(&self, d: usize) -> Vec<AnBasis> {
        if d == 0 {
            vec![AnBasis::One]
        } else {
            (0..self.n).map(|var| AnBasis::Power { var, exp: d }).collect()
        }
    }

    /// Basis of weights `0..=max_weight`, in weight order.
    pub fn basis_up_to(&self, max_weight: usize) -> Vec<AnBasis> {
        (0..=max_weight).flat_map(|d| self.weight_basis(d)).collect()
    }

    pub fn index_of(&self, b: AnBasis) -> usize {
        match b {
            AnBasis::One => 0,
            AnBasis::Power { var, exp } => 1 + (exp - 1) * self.n + var,
        }
    }

    /// Product of basis elements; `None` is zero.
    pub fn multiply(&self, a: AnBasis, b: AnBasis) -> Option<AnBasis> {
        match (a, b) {
            (AnBasis::One, x) | (x, AnBasis::One) => Some(x),
            (AnBasis::Power { var: i, exp: a }, AnBasis::Power { var: j, exp: b }) => {
                (i == j).then_some(AnBasis::Power { var: i, exp: a + b })
            }
        }
    }

    /// `x_i x_j = 0` for `i < j`, and every weight piece has the expected size.
    pub fn relations_hold(&self, max_weight: usize) -> bool {
        let x = |var| AnBasis::Power { var, exp: 1 };
        let products_vanish = (0..self.n).all(|i| (i + 1..self.n).all(|j| self.multiply(x(i), x(j)).is_none()));
        let dims_ok = (0..=max_weight).all(|d| self.weight_basis(d).len() == if d == 0 { 1 } else { self.n });
        products_vanish && dims_ok
    }

    /// Matrix of multiplication by `Σ x_i − c` from weights `≤ w−1` into weights `≤ w`.
    fn shifted_sum_map(&self, c: &Rational, w: usize) -> Matrix<Rational> {
        let src = self.basis_up_to(w - 1);
        let dst_len = self.basis_up_to(w).len();
        let mut m = Matrix::zeros(dst_len, src.len());
        for (col, &b) in src.iter().enumerate() {
            m[(self.index_of(b), col)] = -c.clone();
            for var in 0..self.n {
                if let Some(p) = self.multiply(AnBasis::Power { var, exp: 1 }, b) {
                    let row = self.index_of(p);
                    m[(row, col)] = m[(row, col)].clone() + Rational::from_int(1);
                }
            }
        }
        m
    }

    /// `dim A_{≤w} / (Σx_i − c)·A_{≤w−1}`.
    fn truncated_fiber(&self, c: &Rational, w: usize) -> usize {
        let m = self.shifted_sum_map(c, w);
        m.rows() - m.rank()
    }
}

/// Length of the fiber of `Spec A_n → 𝔸¹` over `t = 0` or over `t = 1`.
///
/// Computed from the truncations `A_{≤w}` for two consecutive `w`; multiplication
/// by `Σx_i − c` is injective, so the quotient size is independent of `w ≥ 1`.
pub fn fiber_dimension(n: usize, at_zero: bool) -> Result<usize, CircleError> {
    let alg = GradedAlgebraAn::new(n)?;
    let c = Rational::from_int(i64::from(!at_zero));
    let a = alg.truncated_fiber(&c, 2);
    let b = alg.truncated_fiber(&c, 3);
    assert_eq!(a, b, "fiber length must stabilize");
    Ok(a)
}

/// The subquotient `span(ambient) / span(sub)` with a fixed frame, so that
/// induced maps cost one small solve per basis vector.
struct Subquotient {
    /// Columns: a basis of `span(sub)`, then a complement taken greedily from `ambient`.
    frame: Matrix<Rational>,
    offset: usize,
    /// Rows of `frame` forming an invertible square block, and that block's inverse.
    rows: Vec<usize>,
    solver: Matrix<Rational>,
}

impl Subquotient {
    fn new(dim: usize, sub: &[Vec<Rational>], ambient: &[Vec<Rational>]) -> Self {
        let all: Vec<Vec<Rational>> = sub.iter().chain(ambient).cloned().collect();
        let (_, pivots) = Matrix::from_columns(dim, &all).rref();
        let offset = pivots.iter().filter(|&&p| p < sub.len()).count();
        let frame = Matrix::from_columns(dim, &pivots.iter().map(|&p| all[p].clone()).collect::<Vec<_>>());
        let (_, rows) = frame.transpose().rref();
        let cols: Vec<usize> = (0..frame.cols()).collect();
        let solver = frame.submatrix(&rows, &cols).inverse().expect("independent rows of a full-rank frame");
        Self { frame, offset, rows, solver }
    }

    fn dim(&self) -> usize {
        self.frame.cols() - self.offset
    }

    /// Matrix of `map` on the subquotient in the complement basis.
    fn induced(&self, map: &Matrix<Rational>) -> Result<Matrix<Rational>, CircleError> {
        let k = self.dim();
        let mut out = Matrix::zeros(k, k);
        for j in 0..k {
            let image = map.mul_vec(&self.frame.column(self.offset + j));
            let picked: Vec<Rational> = self.rows.iter().map(|&r| image[r].clone()).collect();
            let coords = self.solver.mul_vec(&picked);
            if self.frame.mul_vec(&coords) != image {
                return Err(CircleError::NotInvariant);
            }
            for i in 0..k {
                out[(i, j)] = coords[self.offset + i].clone();
            }
        }
        Ok(out)
    }
}

fn cyclic_shift(n: usize, power: usize) -> Matrix<Rational> {
    // (σv)_i = v_{i−1}
    Matrix::from_fn(n, n, |i, j| Rational::from_int(i64::from((j + power) % n == i)))
}

/// Cohomology of `L = [k^{n+1}/k·(0,1,…,1) → k^n]` and the `C_n`-action on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralComplexReport {
    /// Dimensions of the two terms, after the quotient on the source.
    pub source_dim: usize,
    pub target_dim: usize,
    pub h0: usize,
    pub h1: usize,
    /// Matrices of `σ^j` on `H⁰` and `H¹`, for `j = 0..n`.
    pub action_h0: Vec<Matrix<Rational>>,
    pub action_h1: Vec<Matrix<Rational>>,
}

impl CentralComplexReport {
    pub fn trivial_action(&self) -> bool {
        let is_id = |m: &Matrix<Rational>| *m == Matrix::identity(m.rows());
        self.action_h0.iter().all(is_id) && self.action_h1.iter().all(is_id)
    }
}

/// `(a₀, a₁, …, a_n) ↦ (a₁ − a₂, a₂ − a₃, …, a_n − a₁)`
fn difference_map(n: usize) -> Matrix<Rational> {
    let mut m = Matrix::zeros(n, n + 1);
    for i in 0..n {
        m[(i, 1 + i)] = Rational::from_int(1);
        let next = 1 + (i + 1) % n;
        m[(i, next)] = m[(i, next)].clone() - Rational::from_int(1);
    }
    m
}

pub fn central_complex(n: usize) -> Result<CentralComplexReport, CircleError> {
    at_least("n", 2, n)?;
    let delta = difference_map(n);
    let mut collapsed = vec![Rational::from_int(1); n + 1];
    collapsed[0] = Rational::from_int(0);
    if !delta.mul_vec(&collapsed).iter().all(Field::is_zero) {
        return Err(CircleError::NotAComplex(0));
    }
    let cycles = delta.kernel();
    let h0 = cycles.len() - 1;
    let h1 = n - delta.rank();

    let image: Vec<Vec<Rational>> = (0..=n).map(|j| delta.column(j)).collect();
    let target_basis: Vec<Vec<Rational>> = Matrix::<Rational>::identity(n).to_rows();
    let h0_space = Subquotient::new(n + 1, std::slice::from_ref(&collapsed), &cycles);
    let h1_space = Subquotient::new(n, &image, &target_basis);
    debug_assert_eq!((h0_space.dim(), h1_space.dim()), (h0, h1));
    let mut action_h0 = Vec::with_capacity(n);
    let mut action_h1 = Vec::with_capacity(n);
    for j in 0..n {
        let on_target = cyclic_shift(n, j);
        // the source action fixes a₀ and rotates a₁..a_n the same way
        let mut on_source = Matrix::identity(n + 1);
        for r in 0..n {
            for c in 0..n {
                on_source[(1 + r, 1 + c)] = on_target[(r, c)].clone();
            }
        }
        if &delta * &on_source != &on_target * &delta {
            return Err(CircleError::NotInvariant);
        }
        action_h0.push(h0_space.induced(&on_source)?);
        action_h1.push(h1_space.induced(&on_target)?);
    }
    Ok(CentralComplexReport { source_dim: delta.cols() - 1, target_dim: delta.rows(), h0, h1, action_h0, action_h1 })
}

/// The homotopy colimit of `n pts ⇉ n × (n−1 pts)` as a mapping-cylinder graph.
#[derive(Debug, Clone)]
pub struct GenericFiber {
    pub n: usize,
    /// `f_s(P_j)` as an index into the points of the `s`-th target.
    pub maps: Vec<Vec<usize>>,
    pub complex: ChainComplex,
    /// Scalar by which the cyclic generator acts on `H₁`.
    pub rotation_on_h1: Rational,
}

impl GenericFiber {
    pub fn homology(&self) -> (usize, usize) {
        (self.complex.betti(0), self.complex.betti(1))
    }
}

/// Linear forms `f_s(y_i)` on `A_n`: `y₁ ↦ x_s + x_{s+1}`, `y_i ↦ x_{s+i}`, indices mod `n`.
fn pullback_forms(n: usize, s: usize) -> Vec<Vec<Rational>> {
    (1..n)
        .map(|i| {
            let mut form = vec![Rational::from_int(0); n];
            if i == 1 {
                form[(s - 1) % n] = Rational::from_int(1);
                form[s % n] = form[s % n].clone() + Rational::from_int(1);
            } else {
                form[(s + i - 1) % n] = Rational::from_int(1);
            }
            form
        })
        .collect()
}

fn point(dim: usize, axis: usize, t: &Rational) -> Vec<Rational> {
    (0..dim).map(|k| if k == axis { t.clone() } else { Rational::from_int(0) }).collect()
}

pub fn generic_fiber(n: usize) -> Result<GenericFiber, CircleError> {
    at_least("n", 2, n)?;
    let t = Rational::from_int(1);
    let targets: Vec<Vec<Rational>> = (0..n - 1).map(|i| point(n - 1, i, &t)).collect();
    let mut maps = Vec::with_capacity(n);
    for s in 1..=n {
        let forms = pullback_forms(n, s);
        let row = (0..n)
            .map(|j| {
                let p = point(n, j, &t);
                let image: Vec<Rational> = forms
                    .iter()
                    .map(|f| f.iter().zip(&p).fold(Rational::from_int(0), |acc, (a, b)| acc + a * b))
                    .collect();
                targets.iter().position(|q| *q == image).ok_or(CircleError::NotAFiberMap)
            })
            .collect::<Result<Vec<_>, _>>()?;
        maps.push(row);
    }

    // vertices: P_0..P_{n−1}, then target copy s point i at n + s(n−1) + i
    let vertices = n + n * (n - 1);
    let edge_list: Vec<(usize, usize)> =
        (0..n).flat_map(|s| (0..n).map(move |j| (s, j))).map(|(s, j)| (j, n + s * (n - 1) + maps[s][j])).collect();
    let mut d1 = IntMatrix::zeros(vertices, edge_list.len());
    for (e, &(src, dst)) in edge_list.iter().enumerate() {
        d1.set(dst, e, d1.get(dst, e) + 1);
        d1.set(src, e, d1.get(src, e) - 1);
    }
    let complex = ChainComplex::new(vec![vertices, edge_list.len()], vec![d1.clone()])?;

    // C_n rotates source points and target copies together.
    let rotate_vertex = |v: usize| if v < n { (v + 1) % n } else { n + ((v - n) + (n - 1)) % (n * (n - 1)) };
    let mut on_edges = Matrix::<Rational>::zeros(edge_list.len(), edge_list.len());
    for (e, &(src, dst)) in edge_list.iter().enumerate() {
        let image = (rotate_vertex(src), rotate_vertex(dst));
        let e2 = edge_list.iter().position(|&x| x == image).ok_or(CircleError::NotInvariant)?;
        on_edges[(e2, e)] = Rational::from_int(1);
    }
    let boundary = Matrix::from_fn(vertices, edge_list.len(), |i, j| {
        Rational::from_int(i64::try_from(d1.get(i, j).clone()).unwrap())
    });
    let cycles = boundary.kernel();
    let action = Subquotient::new(edge_list.len(), &[], &cycles).induced(&on_edges)?;
    let rotation_on_h1 = if action.rows() == 1 { action[(0, 0)].clone() } else { Rational::from_int(0) };
    Ok(GenericFiber { n, maps, complex, rotation_on_h1 })
}

pub fn generic_fiber_homology(n: usize) -> Result<(usize, usize), CircleError> {
    Ok(generic_fiber(n)?.homology())
}
