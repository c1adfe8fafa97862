//! Sector-by-sector Hochschild series of `[𝔸ⁿ/G]`.
//!
//! Homology: the `[g]`-sector contributes the `Z(g)`-invariants of
//! `Sym(V^{g∨}) ⊗ Λ^p(V^{g∨})`, row `p`, weight = polynomial degree + `p`.
//!
//! Cohomology: the `[g]`-sector contributes the `Z(g)`-invariants of
//! `Sym(V^{g∨}) ⊗ Λ^p(V^g) ⊗ det N_g` in row `p + c_g`. The stored weight index
//! is the polynomial degree; the actual weight is that index minus the row,
//! since each polyvector and each normal direction carries weight −1.
//!
//! Both series are Molien averages over the centralizer. The oracle in
//! [`brute_force_invariants`] builds the explicit representation on monomial
//! bases and takes the rank of the averaging projector instead.

use std::collections::HashMap;

use num_traits::Signed;
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{
    det_series_factor, monomials, subsets, BiSeries, ExactError, FactorKind, Field, Marker, Matrix, Rational, Sign,
};
use crate::geometry::{all_sectors, GeometryError, Sector};
use crate::group::MatrixGroup;

pub const MAX_ORACLE_BASIS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HkrError {
    #[error("oracle basis of size {0} exceeds the limit {MAX_ORACLE_BASIS}")]
    BasisTooLarge(usize),
    #[error("coefficient {value} at row {row}, weight {weight} is not a dimension")]
    NotADimension { row: usize, weight: usize, value: String },
    #[error("normal determinant of centralizer element {0} is not rational")]
    IrrationalCharacter(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Homology,
    Cohomology,
}

/// Which explicit representation the oracle builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// `Sym^{d−p}(V^{g∨}) ⊗ Λ^p(V^{g∨})`; `d` is the total weight.
    Forms,
    /// `Sym^d(V^{g∨}) ⊗ Λ^p(V^g) ⊗ det N_g`; `d` is the polynomial degree.
    PolyvectorsTwisted,
}

/// Grading conventions attached to a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conventions {
    pub u_marker: &'static str,
    pub t_marker: &'static str,
    pub rows: &'static str,
    pub weights: &'static str,
}

impl Conventions {
    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Homology => Self {
                u_marker: "form degree p",
                t_marker: "weight: coordinates and 1-forms dx_i weigh 1",
                rows: "row p is HH_p (q = 0 on affine sectors)",
                weights: "reported weight = stored index",
            },
            Mode::Cohomology => Self {
                u_marker: "polyvector degree p, shifted by c_g",
                t_marker: "polynomial degree; polyvectors and det N_g weigh -1 per direction",
                rows: "row p + c_g is HH^{p+c_g}",
                weights: "reported weight = stored index - row, always >= -n",
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct HHReport {
    pub mode: Mode,
    pub sectors: Vec<(Sector, BiSeries)>,
    pub total: BiSeries,
    pub conventions: Conventions,
}

fn normal_char(sector: &Sector, h: usize) -> Result<Rational, HkrError> {
    sector.det_normal_char[&h].to_rational().ok_or(HkrError::IrrationalCharacter(h))
}

/// Checks every coefficient is a nonnegative integer.
fn check_dimensions(series: &BiSeries) -> Result<(), HkrError> {
    for (row, coeffs) in series.rows().iter().enumerate() {
        for (weight, c) in coeffs.iter().enumerate() {
            if !c.is_integer() || c.is_negative() {
                return Err(HkrError::NotADimension { row, weight, value: c.to_string() });
            }
        }
    }
    Ok(())
}

/// `(1/|Z(g)|) Σ_h det(I + u·t·D_h) / det(I − t·D_h)`, `D_h = (h|_{V^g})^{−1}`.
pub fn sector_hh_series(sector: &Sector, t_max: usize) -> Result<BiSeries, HkrError> {
    let n = sector.ambient_dim;
    let mut sum = BiSeries::zero(n, t_max);
    for r in sector.restricted_action.values() {
        let dual = r.inverse()?;
        let num = det_series_factor(&dual, Sign::Plus, Marker::UT, FactorKind::Numerator, t_max)?;
        let rec = det_series_factor(&dual, Sign::Minus, Marker::T, FactorKind::Reciprocal, t_max)?;
        sum = &sum + &(&num * &rec);
    }
    let avg = sum.scale(&Rational::new(1.into(), sector.centralizer_order().into()));
    check_dimensions(&avg)?;
    Ok(avg)
}

/// `u^{c_g} (1/|Z(g)|) Σ_h χ(h) det(I + u·R_h) / det(I − t·R_h^{−1})`, with
/// `χ(h) = det(h on N_g)`.
pub fn sector_hhcoh_series(sector: &Sector, t_max: usize) -> Result<BiSeries, HkrError> {
    let n = sector.ambient_dim;
    let mut sum = BiSeries::zero(n, t_max);
    for (&h, r) in &sector.restricted_action {
        let chi = normal_char(sector, h)?;
        let num = det_series_factor(r, Sign::Plus, Marker::U, FactorKind::Numerator, t_max)?;
        let rec = det_series_factor(&r.inverse()?, Sign::Minus, Marker::T, FactorKind::Reciprocal, t_max)?;
        sum = &sum + &(&num * &rec).scale(&chi);
    }
    let avg = sum.scale(&Rational::new(1.into(), sector.centralizer_order().into()));
    let shifted = avg.shift_u(sector.normal_codim, n);
    check_dimensions(&shifted)?;
    Ok(shifted)
}

pub fn sector_series(sector: &Sector, t_max: usize, mode: Mode) -> Result<BiSeries, HkrError> {
    match mode {
        Mode::Homology => sector_hh_series(sector, t_max),
        Mode::Cohomology => sector_hhcoh_series(sector, t_max),
    }
}

type SparsePoly = HashMap<Vec<u32>, Rational>;

/// `Π_i (Σ_j subst[i][j] y_j)^{mono[i]}` expanded in the monomial basis.
fn substitute(mono: &[u32], subst: &Matrix<Rational>) -> SparsePoly {
    let nvars = subst.cols();
    let mut acc: SparsePoly = HashMap::from([(vec![0u32; nvars], Rational::from_int(1))]);
    for (i, &e) in mono.iter().enumerate() {
        for _ in 0..e {
            let mut next = SparsePoly::new();
            for (m, c) in &acc {
                for j in 0..nvars {
                    let a = &subst[(i, j)];
                    if a.is_zero() {
                        continue;
                    }
                    let mut m2 = m.clone();
                    m2[j] += 1;
                    let entry = next.entry(m2).or_insert_with(|| Rational::from_int(0));
                    *entry = entry.clone() + c.clone() * a.clone();
                }
            }
            acc = next;
        }
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

/// Image of `e_{s₁} ∧ … ∧ e_{s_p}` when `e_i ↦ Σ_j images[i][j] e_j`: the
/// coefficient on `e_T` is the minor `det(images[S, T])`.
fn wedge_image(
    subset: &[usize],
    images: &Matrix<Rational>,
    targets: &[Vec<usize>],
) -> Result<Vec<Rational>, ExactError> {
    targets.iter().map(|t| images.submatrix(subset, t).det()).collect()
}

/// Dimension of the `Z(g)`-invariants at `(p, d)`, from the rank of
/// `Σ_h χ(h) ρ(h)` on an explicit basis.
pub fn brute_force_invariants(sector: &Sector, p: usize, d: usize, mode: OracleMode) -> Result<u64, HkrError> {
    let f = sector.fixed_dim();
    let sym_degree = match mode {
        OracleMode::Forms if d < p => return Ok(0),
        OracleMode::Forms => d - p,
        OracleMode::PolyvectorsTwisted => d,
    };
    if p > f {
        return Ok(0);
    }
    let mons = monomials(f, sym_degree);
    let wedges = subsets(f, p);
    let size = mons.len() * wedges.len();
    if size > MAX_ORACLE_BASIS {
        return Err(HkrError::BasisTooLarge(size));
    }
    let mon_index: HashMap<&Vec<u32>, usize> = mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut projector = Matrix::<Rational>::zeros(size, size);
    for (&h, full) in &sector.centralizer_elements {
        let r = &sector.restricted_action[&h];
        // pullback on coordinate functions: y ↦ R_h^{-1} y
        let functions = r.inverse()?;
        let (wedge_gens, weight) = match mode {
            OracleMode::Forms => (functions.clone(), Rational::from_int(1)),
            OracleMode::PolyvectorsTwisted => {
                // vector fields transform contragrediently to 1-forms
                let vectors = functions.inverse()?.transpose();
                let normal = full.det()? / r.det()?;
                (vectors, normal)
            }
        };
        let mono_images: Vec<SparsePoly> = mons.iter().map(|m| substitute(m, &functions)).collect();
        for (si, s) in wedges.iter().enumerate() {
            let w = wedge_image(s, &wedge_gens, &wedges)?;
            for (mi, img) in mono_images.iter().enumerate() {
                let col = si * mons.len() + mi;
                for (ti, wc) in w.iter().enumerate() {
                    if wc.is_zero() {
                        continue;
                    }
                    for (m2, c) in img {
                        let row = ti * mons.len() + mon_index[m2];
                        projector[(row, col)] = projector[(row, col)].clone() + weight.clone() * wc.clone() * c.clone();
                    }
                }
            }
        }
    }
    Ok(projector.rank() as u64)
}

/// One series per conjugacy class plus their sum.
pub fn full_report(group: &MatrixGroup, t_max: usize, mode: Mode) -> Result<HHReport, HkrError> {
    let sectors = all_sectors(group)?;
    let series = sectors.par_iter().map(|s| sector_series(s, t_max, mode)).collect::<Result<Vec<_>, _>>()?;
    let n = group.ambient_dim();
    let total = series.iter().fold(BiSeries::zero(n, t_max), |acc, s| &acc + s);
    Ok(HHReport {
        mode,
        sectors: sectors.into_iter().zip(series).collect(),
        total,
        conventions: Conventions::for_mode(mode),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub sector: usize,
    pub row: usize,
    pub weight: usize,
    pub molien: Rational,
    pub oracle: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub checked: bool,
    pub agreement: bool,
    pub cells: usize,
    pub first_disagreement: Option<Disagreement>,
}

impl OracleVerdict {
    pub fn unchecked() -> Self {
        Self { checked: false, agreement: true, cells: 0, first_disagreement: None }
    }
}

/// Oracle value for one cell of a sector series, in the report's own indexing.
pub fn oracle_cell(sector: &Sector, mode: Mode, row: usize, weight: usize) -> Result<u64, HkrError> {
    match mode {
        Mode::Homology => brute_force_invariants(sector, row, weight, OracleMode::Forms),
        Mode::Cohomology => match row.checked_sub(sector.normal_codim) {
            None => Ok(0),
            Some(p) => brute_force_invariants(sector, p, weight, OracleMode::PolyvectorsTwisted),
        },
    }
}

/// Compares every cell with weight index `≤ max_weight` against the oracle.
pub fn oracle_check(report: &HHReport, max_weight: usize) -> Result<OracleVerdict, HkrError> {
    let max_weight = max_weight.min(report.total.t_max());
    let per_sector = report
        .sectors
        .par_iter()
        .enumerate()
        .map(|(si, (sector, series))| {
            let mut cells = 0;
            for row in 0..=series.u_max() {
                for weight in 0..=max_weight {
                    let oracle = oracle_cell(sector, report.mode, row, weight)?;
                    let molien = series.coeff(row, weight);
                    cells += 1;
                    if molien != Rational::from_int(oracle as i64) {
                        return Ok((cells, Some(Disagreement { sector: si, row, weight, molien, oracle })));
                    }
                }
            }
            Ok((cells, None))
        })
        .collect::<Result<Vec<_>, HkrError>>()?;
    let cells = per_sector.iter().map(|(c, _)| c).sum();
    let first_disagreement = per_sector.into_iter().find_map(|(_, d)| d);
    Ok(OracleVerdict { checked: true, agreement: first_disagreement.is_none(), cells, first_disagreement })
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

    fn ints(row: &[Rational]) -> Vec<i64> {
        row.iter().map(|c| c.to_integer().try_into().unwrap()).collect()
    }

    fn s3() -> MatrixGroup {
        group(vec![qm(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]), qm(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]])])
    }

    #[test]
    fn trivial_group_on_line() {
        let rep = full_report(&group(vec![qm(&[&[1]])]), 5, Mode::Homology).unwrap();
        assert_eq!(rep.sectors.len(), 1);
        assert_eq!(ints(rep.total.row(0)), vec![1; 6]);
        assert_eq!(ints(rep.total.row(1)), vec![0, 1, 1, 1, 1, 1]);
        let coh = full_report(&group(vec![qm(&[&[1]])]), 5, Mode::Cohomology).unwrap();
        assert_eq!(ints(coh.total.row(0)), vec![1; 6]);
        assert_eq!(ints(coh.total.row(1)), vec![1; 6]);
    }

    #[test]
    fn sign_action_on_line() {
        let rep = full_report(&group(vec![qm(&[&[-1]])]), 6, Mode::Homology).unwrap();
        let (untwisted, twisted) = (&rep.sectors[0].1, &rep.sectors[1].1);
        // Oracle: x^a is invariant iff a is even; x^a dx (weight a+1) iff a is odd.
        let even: Vec<i64> = (0..=6).map(|d| i64::from(d % 2 == 0)).collect();
        let forms: Vec<i64> = (0..=6).map(|d| i64::from(d >= 1 && (d - 1) % 2 == 1)).collect();
        assert_eq!(ints(untwisted.row(0)), even);
        assert_eq!(ints(untwisted.row(1)), forms);
        assert_eq!(twisted, &BiSeries::one(1, 6));
        assert_eq!(rep.total.coeff(0, 0), Rational::from_int(2));
    }

    #[test]
    fn sign_twisted_cohomology_vanishes_at_weight_zero() {
        let rep = full_report(&group(vec![qm(&[&[-1]])]), 4, Mode::Cohomology).unwrap();
        let twisted = &rep.sectors[1].1;
        assert_eq!(twisted.coeff(1, 0), Rational::from_int(0));
        // ½(1·1 + 1·(−1)) = 0
        assert_eq!(oracle_cell(&rep.sectors[1].0, Mode::Cohomology, 1, 0).unwrap(), 0);
    }

    #[test]
    fn minus_identity_on_plane_cohomology() {
        let rep = full_report(&group(vec![qm(&[&[-1, 0], &[0, -1]])]), 4, Mode::Cohomology).unwrap();
        let (sector, series) = &rep.sectors[1];
        assert_eq!(sector.normal_codim, 2);
        assert_eq!(series.coeff(2, 0), Rational::from_int(1));
        assert_eq!(oracle_cell(sector, Mode::Cohomology, 2, 0).unwrap(), 1);
    }

    #[test]
    fn rotation_group_point_sectors() {
        let rep = full_report(&group(vec![qm(&[&[0, -1], &[1, 0]])]), 4, Mode::Homology).unwrap();
        let fixed: Vec<usize> = rep.sectors.iter().map(|(s, _)| s.fixed_dim()).collect();
        assert_eq!(fixed, vec![2, 0, 0, 0]);
        assert_eq!(rep.total.coeff(0, 0), Rational::from_int(4));
    }

    #[test]
    fn oracle_spot_values() {
        let triv = full_report(&group(vec![qm(&[&[1]])]), 1, Mode::Homology).unwrap();
        assert_eq!(brute_force_invariants(&triv.sectors[0].0, 0, 5, OracleMode::Forms).unwrap(), 1);
        let sign = full_report(&group(vec![qm(&[&[-1]])]), 1, Mode::Homology).unwrap();
        let e = &sign.sectors[0].0;
        let molien = sector_hh_series(e, 2).unwrap().coeff(1, 2);
        assert_eq!(Rational::from_int(brute_force_invariants(e, 1, 2, OracleMode::Forms).unwrap() as i64), molien);
        let s3 = full_report(&s3(), 1, Mode::Homology).unwrap();
        assert_eq!(brute_force_invariants(&s3.sectors[0].0, 0, 2, OracleMode::Forms).unwrap(), 2);
    }

    #[test]
    fn symmetric_invariants_are_partitions() {
        let rep = full_report(&s3(), 5, Mode::Homology).unwrap();
        let molien = ints(&rep.sectors[0].1.at_u_zero());
        let oracle: Vec<i64> = (0..=5)
            .map(|d| brute_force_invariants(&rep.sectors[0].0, 0, d, OracleMode::Forms).unwrap() as i64)
            .collect();
        assert_eq!(oracle, vec![1, 1, 2, 3, 4, 5]);
        assert_eq!(molien, oracle);
    }

    #[test]
    fn basis_guard() {
        let g = group(vec![qm(&[
            &[1, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0],
            &[0, 0, 1, 0, 0],
            &[0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 1],
        ])]);
        let rep = full_report(&g, 1, Mode::Homology).unwrap();
        let err = brute_force_invariants(&rep.sectors[0].0, 2, 60, OracleMode::Forms).unwrap_err();
        assert!(matches!(err, HkrError::BasisTooLarge(_)));
    }

    #[test]
    fn abelian_total_is_class_symmetric() {
        // For abelian G every class is a singleton and every centralizer is G.
        let g = group(vec![qm(&[&[0, -1], &[1, 0]])]);
        let rep = full_report(&g, 5, Mode::Homology).unwrap();
        for (s, _) in &rep.sectors {
            assert_eq!(s.class.members.len(), 1);
            assert_eq!(s.centralizer_order(), g.order());
        }
        let reversed = rep.sectors.iter().rev().fold(BiSeries::zero(2, 5), |acc, (_, s)| &acc + s);
        assert_eq!(reversed, rep.total);
    }

    #[test]
    fn oracle_agrees_on_small_sweep() {
        let groups = [group(vec![qm(&[&[-1]])]), group(vec![qm(&[&[0, -1], &[1, 0]])])];
        for g in &groups {
            for mode in [Mode::Homology, Mode::Cohomology] {
                let rep = full_report(g, 5, mode).unwrap();
                let verdict = oracle_check(&rep, 5).unwrap();
                assert!(verdict.agreement, "{mode:?}: {:?}", verdict.first_disagreement);
                assert_eq!(rep.sectors.len(), g.conjugacy_classes().len());
            }
        }
    }
}
