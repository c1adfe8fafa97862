//! Per-sector geometry of a linear action on affine space.
//!
//! For a class `[g]` the sector records the fixed subspace `V^g = ker(g − I)`,
//! the action of the centralizer `Z(g)` restricted to it, and the determinant
//! of that action on the normal space `V / V^g`. The derived fixed locus is
//! probed through the Koszul complex of the linear forms `x ↦ (g − I)x`.

use std::collections::{BTreeMap, HashMap};

use num_integer::binomial;
use thiserror::Error;

use crate::exact::{monomials, subsets, Cyclotomic, ExactError, Field, Matrix, Rational};
use crate::group::{ConjClass, MatrixGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("centralizer element {0} does not preserve the fixed subspace")]
    RestrictionNotClosed(usize),
    #[error("complement does not span a complement of the fixed subspace")]
    BadComplement,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Twisted sector of one conjugacy class `[g]`.
#[derive(Debug, Clone)]
pub struct Sector {
    pub class: ConjClass,
    pub ambient_dim: usize,
    pub element: Matrix<Rational>,
    /// `n × f` matrix whose columns span `V^g`.
    pub fixed_basis: Matrix<Rational>,
    pub normal_codim: usize,
    /// Conductor of the cyclotomic field holding character values (the group exponent).
    pub conductor: u64,
    /// Full matrices of the centralizer elements, keyed by group index.
    pub centralizer_elements: BTreeMap<usize, Matrix<Rational>>,
    /// `h|_{V^g}` in the coordinates of `fixed_basis`.
    pub restricted_action: BTreeMap<usize, Matrix<Rational>>,
    /// `h ↦ det(h on V / V^g)`.
    pub det_normal_char: BTreeMap<usize, Cyclotomic>,
}

impl Sector {
    pub fn fixed_dim(&self) -> usize {
        self.fixed_basis.cols()
    }

    pub fn centralizer_order(&self) -> usize {
        self.class.centralizer.len()
    }
}

/// Columns `e_j` extending `basis` to a basis of the ambient space, chosen
/// greedily in the given column order.
pub fn greedy_complement(basis: &Matrix<Rational>, order: impl IntoIterator<Item = usize>) -> Matrix<Rational> {
    let n = basis.rows();
    let mut current = basis.clone();
    let mut chosen = Vec::new();
    for j in order {
        if current.cols() == n {
            break;
        }
        let e = Matrix::from_fn(n, 1, |i, _| Rational::from_int(i64::from(i == j)));
        let extended = current.hstack(&e);
        if extended.rank() > current.cols() {
            current = extended;
            chosen.push(j);
        }
    }
    Matrix::from_fn(n, chosen.len(), |i, k| Rational::from_int(i64::from(i == chosen[k])))
}

/// Determinant of the map induced by `h` on `V / span(fixed)`, computed in the
/// basis `[fixed | complement]`.
pub fn normal_determinant(
    h: &Matrix<Rational>,
    fixed: &Matrix<Rational>,
    complement: &Matrix<Rational>,
) -> Result<Rational, GeometryError> {
    let f = fixed.cols();
    let frame = fixed.hstack(complement);
    if !frame.is_square() {
        return Err(GeometryError::BadComplement);
    }
    let frame_inv = frame.inverse().map_err(|_| GeometryError::BadComplement)?;
    let conj = &(&frame_inv * h) * &frame;
    let n = conj.rows();
    let lower: Vec<usize> = (f..n).collect();
    let upper: Vec<usize> = (0..f).collect();
    if !conj.submatrix(&lower, &upper).is_zero() {
        return Err(GeometryError::BadComplement);
    }
    Ok(conj.submatrix(&lower, &lower).det()?)
}

/// Solves `h · B = B · R` for `R`, failing if `h` does not preserve `span(B)`.
fn restrict(h: &Matrix<Rational>, basis: &Matrix<Rational>, index: usize) -> Result<Matrix<Rational>, GeometryError> {
    let f = basis.cols();
    let image = h * basis;
    if f == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let (_, pivot_rows) = basis.transpose().rref();
    let all: Vec<usize> = (0..f).collect();
    let square = basis.submatrix(&pivot_rows, &all);
    let r = &square.inverse()? * &image.submatrix(&pivot_rows, &all);
    if basis * &r != image {
        return Err(GeometryError::RestrictionNotClosed(index));
    }
    Ok(r)
}

pub fn build_sector(group: &MatrixGroup, class: &ConjClass) -> Result<Sector, GeometryError> {
    let n = group.ambient_dim();
    let g = group.element(class.representative).clone();
    let shifted = &g - &Matrix::identity(n);
    let fixed_basis = Matrix::from_columns(n, &shifted.kernel());
    let complement = greedy_complement(&fixed_basis, 0..n);
    let conductor = group.exponent();

    let mut centralizer_elements = BTreeMap::new();
    let mut restricted_action = BTreeMap::new();
    let mut det_normal_char = BTreeMap::new();
    for &h in &class.centralizer {
        let hm = group.element(h);
        restricted_action.insert(h, restrict(hm, &fixed_basis, h)?);
        let det = normal_determinant(hm, &fixed_basis, &complement)?;
        det_normal_char.insert(h, Cyclotomic::rational_in(det, conductor));
        centralizer_elements.insert(h, hm.clone());
    }
    Ok(Sector {
        class: class.clone(),
        ambient_dim: n,
        element: g,
        normal_codim: n - fixed_basis.cols(),
        fixed_basis,
        conductor,
        centralizer_elements,
        restricted_action,
        det_normal_char,
    })
}

/// One sector per conjugacy class, in class order.
pub fn all_sectors(group: &MatrixGroup) -> Result<Vec<Sector>, GeometryError> {
    group.conjugacy_classes().iter().map(|c| build_sector(group, c)).collect()
}

/// Weight-graded dimensions per homological degree `p = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulReport {
    pub t_max: usize,
    /// `rows[p][d]`
    pub rows: Vec<Vec<u64>>,
}

impl KoszulReport {
    pub fn get(&self, p: usize, d: usize) -> u64 {
        self.rows.get(p).and_then(|r| r.get(d)).copied().unwrap_or(0)
    }
}

struct KoszulDegree {
    basis: Vec<(Vec<usize>, Vec<u32>)>,
    index: HashMap<(Vec<usize>, Vec<u32>), usize>,
}

fn koszul_basis(n: usize, p: usize, d: usize) -> KoszulDegree {
    let mut basis = Vec::new();
    if d >= p {
        let mons = monomials(n, d - p);
        for s in subsets(n, p) {
            for m in &mons {
                basis.push((s.clone(), m.clone()));
            }
        }
    }
    let index = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    KoszulDegree { basis, index }
}

/// Rank of `∂: K_{p,d} → K_{p−1,d}`, `e_S·m ↦ Σ_k (−1)^k ℓ_{s_k} m e_{S∖s_k}`.
fn koszul_boundary_rank(forms: &Matrix<Rational>, src: &KoszulDegree, dst: &KoszulDegree) -> usize {
    if src.basis.is_empty() || dst.basis.is_empty() {
        return 0;
    }
    let n = forms.cols();
    let mut m = Matrix::<Rational>::zeros(dst.basis.len(), src.basis.len());
    for (col, (subset, mono)) in src.basis.iter().enumerate() {
        for (k, &s) in subset.iter().enumerate() {
            let mut rest = subset.clone();
            rest.remove(k);
            let sign = if k % 2 == 0 { Rational::from_int(1) } else { Rational::from_int(-1) };
            for j in 0..n {
                let c = &forms[(s, j)];
                if c.is_zero() {
                    continue;
                }
                let mut target = mono.clone();
                target[j] += 1;
                let row = dst.index[&(rest.clone(), target)];
                m[(row, col)] = m[(row, col)].clone() + sign.clone() * c.clone();
            }
        }
    }
    m.rank()
}

/// Koszul homology of `k[x₁..x_n]` on the `n` linear forms given by the rows
/// of `g − I`. Exterior generators carry weight 1, like the coordinates.
#[allow(clippy::needless_range_loop)] // rows are indexed by (p, d) together
pub fn derived_fixed_hilbert(g: &Matrix<Rational>, t_max: usize) -> KoszulReport {
    let n = g.rows();
    let forms = g - &Matrix::identity(n);
    let mut rows = vec![vec![0u64; t_max + 1]; n + 1];
    for d in 0..=t_max {
        let degrees: Vec<KoszulDegree> = (0..=n).map(|p| koszul_basis(n, p, d)).collect();
        // ranks[p] = rank of ∂ out of degree p; ranks[0] = 0, ranks[n+1] = 0
        let mut ranks = vec![0usize; n + 2];
        for p in 1..=n {
            ranks[p] = koszul_boundary_rank(&forms, &degrees[p], &degrees[p - 1]);
        }
        for p in 0..=n {
            rows[p][d] = (degrees[p].basis.len() - ranks[p] - ranks[p + 1]) as u64;
        }
    }
    KoszulReport { t_max, rows }
}

/// Dimensions of `Sym^{d−p}(V^{g∨}) ⊗ Λ^p(V^{g∨})`, the shifted tangent bundle
/// of the fixed locus, with the 1-forms in weight 1.
pub fn shifted_tangent_hilbert(sector: &Sector, t_max: usize) -> KoszulReport {
    let n = sector.ambient_dim;
    let f = sector.fixed_dim() as u64;
    let sym = |k: u64| if f == 0 { u64::from(k == 0) } else { binomial(k + f - 1, f - 1) };
    let rows = (0..=n as u64)
        .map(|p| (0..=t_max as u64).map(|d| if d < p || p > f { 0 } else { binomial(f, p) * sym(d - p) }).collect())
        .collect();
    KoszulReport { t_max, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_CAP;

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect()).unwrap()
    }

    fn group(gens: Vec<Matrix<Rational>>) -> MatrixGroup {
        MatrixGroup::generate(gens, DEFAULT_CAP).unwrap()
    }

    fn sweep() -> Vec<MatrixGroup> {
        vec![
            group(vec![qm(&[&[-1]])]),
            group(vec![qm(&[&[-1, 0], &[0, -1]])]),
            group(vec![qm(&[&[0, -1], &[1, 0]])]),
            group(vec![qm(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]), qm(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]])]),
            group(vec![qm(&[&[1, -1], &[1, 0]]), qm(&[&[0, 1], &[1, 0]])]),
        ]
    }

    fn char_value(s: &Sector, h: usize) -> Rational {
        s.det_normal_char[&h].to_rational().unwrap()
    }

    #[test]
    fn sign_group_sectors() {
        let g = group(vec![qm(&[&[-1]])]);
        let sectors = all_sectors(&g).unwrap();
        let (e, m) = (&sectors[0], &sectors[1]);
        assert_eq!((e.fixed_dim(), e.normal_codim), (1, 0));
        assert!(e.det_normal_char.values().all(Field::is_one));
        assert_eq!((m.fixed_dim(), m.normal_codim), (0, 1));
        assert_eq!(char_value(m, 0), Rational::from_int(1));
        assert_eq!(char_value(m, 1), Rational::from_int(-1));
    }

    #[test]
    fn rotation_sector_is_a_point() {
        let g = group(vec![qm(&[&[0, -1], &[1, 0]])]);
        let rot = g.index_of(&qm(&[&[0, -1], &[1, 0]])).unwrap();
        let class = g.conjugacy_classes().into_iter().find(|c| c.representative == rot).unwrap();
        let s = build_sector(&g, &class).unwrap();
        assert_eq!((s.fixed_dim(), s.normal_codim), (0, 2));
        // oracle: 2×2 determinant of the rotation
        assert_eq!(char_value(&s, rot), qm(&[&[0, -1], &[1, 0]]).det().unwrap());
        assert_eq!(char_value(&s, rot), Rational::from_int(1));
    }

    #[test]
    fn sector_invariants_across_sweep() {
        for g in sweep() {
            let n = g.ambient_dim();
            for s in all_sectors(&g).unwrap() {
                assert_eq!(s.fixed_dim() + s.normal_codim, n);
                let shifted = &s.element - &Matrix::identity(n);
                assert!((&shifted * &s.fixed_basis).is_zero());
                assert_eq!(shifted.rank(), s.normal_codim);
                assert_eq!(s.normal_codim == 0, s.element == Matrix::identity(n));
                let own = &s.restricted_action[&s.class.representative];
                assert_eq!(own, &Matrix::identity(s.fixed_dim()));
                // multiplicativity of the normal determinant on all pairs
                for &a in &s.class.centralizer {
                    for &b in &s.class.centralizer {
                        let ab = g.mul(a, b);
                        assert_eq!(
                            s.det_normal_char[&ab].clone(),
                            s.det_normal_char[&a].clone() * s.det_normal_char[&b].clone()
                        );
                    }
                    assert_eq!(s.det_normal_char[&a].pow(g.exponent()), Cyclotomic::one());
                }
            }
        }
    }

    #[test]
    fn normal_determinant_ignores_complement_choice() {
        for g in sweep() {
            let n = g.ambient_dim();
            for s in all_sectors(&g).unwrap() {
                let forward = greedy_complement(&s.fixed_basis, 0..n);
                let backward = greedy_complement(&s.fixed_basis, (0..n).rev());
                // shear the complement by the fixed basis as well
                let sheared = if s.fixed_dim() > 0 && forward.cols() > 0 {
                    let shift = Matrix::from_fn(s.fixed_dim(), forward.cols(), |i, j| {
                        Rational::from_int((i + 2 * j + 1) as i64)
                    });
                    &forward + &(&s.fixed_basis * &shift)
                } else {
                    forward.clone()
                };
                for &h in &s.class.centralizer {
                    let hm = g.element(h);
                    let a = normal_determinant(hm, &s.fixed_basis, &forward).unwrap();
                    let b = normal_determinant(hm, &s.fixed_basis, &backward).unwrap();
                    let c = normal_determinant(hm, &s.fixed_basis, &sheared).unwrap();
                    assert_eq!(a, b);
                    assert_eq!(a, c);
                }
            }
        }
    }

    #[test]
    fn koszul_identity_on_line() {
        let r = derived_fixed_hilbert(&qm(&[&[1]]), 4);
        assert_eq!(r.rows[0], vec![1, 1, 1, 1, 1]);
        assert_eq!(r.rows[1], vec![0, 1, 1, 1, 1]);
    }

    #[test]
    fn koszul_regular_sequences() {
        let r = derived_fixed_hilbert(&qm(&[&[-1]]), 4);
        assert_eq!(r.rows, vec![vec![1, 0, 0, 0, 0], vec![0; 5]]);
        let r = derived_fixed_hilbert(&qm(&[&[-1, 0], &[0, -1]]), 4);
        assert_eq!(r.rows, vec![vec![1, 0, 0, 0, 0], vec![0; 5], vec![0; 5]]);
    }

    #[test]
    fn shifted_tangent_small_cases() {
        let g = group(vec![qm(&[&[-1, 0], &[0, -1]])]);
        let sectors = all_sectors(&g).unwrap();
        let point = shifted_tangent_hilbert(&sectors[1], 3);
        assert_eq!(point.rows, vec![vec![1, 0, 0, 0], vec![0; 4], vec![0; 4]]);
        let plane = shifted_tangent_hilbert(&sectors[0], 3);
        // p = 1, d = 3: x^a y^b dx, x^a y^b dy with a + b = 2
        assert_eq!(plane.get(1, 3), 2 * monomials(2, 2).len() as u64);
        assert_eq!(plane.get(1, 3), 6);
        let line = shifted_tangent_hilbert(&all_sectors(&group(vec![qm(&[&[1]])])).unwrap()[0], 3);
        assert_eq!(line.rows, vec![vec![1, 1, 1, 1], vec![0, 1, 1, 1]]);
    }

    #[test]
    fn derived_and_shifted_tangent_agree() {
        for g in sweep() {
            let sectors = all_sectors(&g).unwrap();
            for s in &sectors {
                for &x in &s.class.members {
                    let lhs = derived_fixed_hilbert(g.element(x), 6);
                    assert_eq!(lhs, shifted_tangent_hilbert(s, 6));
                }
            }
        }
    }
}
