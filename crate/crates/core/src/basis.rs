//! Symmetrized spin basis `|j, m, α⟩` for `n` spin-1/2 qubits.
//!
//! Construction follows the sector-by-sector route: computational states are
//! grouped by their total `m`, `Ĵ²` is assembled inside each group from the
//! collective ladder operators, and each block is diagonalized. Eigenvalues
//! are snapped to the admissible `j(j+1)` values and the eigenvectors become
//! the Clebsch-Gordan columns of the basis. Since `Ĵ²` is real symmetric the
//! coefficients are real.
//!
//! Within a degenerate `(j, m)` block the `α` label carries no physics. The
//! convention used here: each vector's first significant coefficient is made
//! positive, then the block is sorted lexicographically by coefficient array.
//! Every metric computed from the basis sums over `α` and does not depend on
//! that choice.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::half::Half;
use crate::statevector::StateVector;

/// Largest `n` for which the full basis is built.
pub const MAX_BASIS_QUBITS: usize = 14;

/// Eigenvalue-to-`j(j+1)` snapping tolerance.
pub const CLUSTER_TOLERANCE: f64 = 1e-6;

/// Direction of a collective ladder transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Up,
    Down,
}

/// `|⟨j, m±1, α|Ĵ^±|j, m, α⟩|²`: `(j-m)(j+m+1)` going up and `(j+m)(j-m+1)`
/// going down.
pub fn transition_factor(j: Half, m: Half, direction: Ladder) -> Result<f64> {
    if j.twice() < 0 || m.twice().abs() > j.twice() || (j.twice() - m.twice()) % 2 != 0 {
        return domain(format!("no state with j = {j}, m = {m}"));
    }
    let (j, m) = (j.value(), m.value());
    Ok(match direction {
        Ladder::Up => (j - m) * (j + m + 1.0),
        Ladder::Down => (j + m) * (j - m + 1.0),
    })
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Admissible total angular momenta for `n` spins, largest first.
pub fn j_values(n: usize) -> Vec<Half> {
    let top = n as i32;
    (0..=top / 2).map(|k| Half(top - 2 * k)).collect()
}

/// Number of independent `|j, m, α⟩` for fixed `(j, m)`:
/// `n!(2j+1) / ((n/2+j+1)!(n/2-j)!)`, evaluated as
/// `(2j+1)·C(n+1, n/2-j)/(n+1)` to stay in integer range.
pub fn degeneracy(n: usize, j: Half) -> u64 {
    let twice_n = n as i32;
    if j.twice() < 0 || j.twice() > twice_n || (twice_n - j.twice()) % 2 != 0 {
        return 0;
    }
    let lower = ((twice_n - j.twice()) / 2) as u64; // n/2 - j
    let mult = (j.twice() + 1) as u128; // 2j + 1
    let d = mult * binomial(n as u64 + 1, lower) / (n as u128 + 1);
    d as u64
}

/// Computational states with `popcount(x) = ones`, ascending.
fn sector_states(n: usize, ones: usize) -> Vec<usize> {
    (0..1usize << n).filter(|x| x.count_ones() as usize == ones).collect()
}

fn check_sector(n: usize, m: Half) -> Result<usize> {
    let twice_n = n as i32;
    if n == 0 || m.twice().abs() > twice_n || (twice_n + m.twice()) % 2 != 0 {
        return domain(format!("m = {m} is not a valid total projection for {n} spins"));
    }
    Ok(((twice_n + m.twice()) / 2) as usize)
}

/// `Ĵ² = (Ĵ⁺Ĵ⁻ + Ĵ⁻Ĵ⁺)/2 + (Ĵᶻ)²` restricted to the `m` sector, rows and
/// columns ordered by ascending computational index.
pub fn j_squared_matrix(n: usize, m: Half) -> Result<DMatrix<f64>> {
    let ones = check_sector(n, m)?;
    let states = sector_states(n, ones);
    Ok(j_squared_block(n, m, &states))
}

fn j_squared_block(n: usize, m: Half, states: &[usize]) -> DMatrix<f64> {
    let dim = states.len();
    let index: BTreeMap<usize, usize> = states.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut mat = DMatrix::<f64>::zeros(dim, dim);
    let mz = m.value();
    for (col, &x) in states.iter().enumerate() {
        mat[(col, col)] += mz * mz;
        // Ĵ⁺Ĵ⁻: lower spin `b`, then raise spin `a`.
        for b in (0..n).filter(|b| x >> b & 1 == 1) {
            let lowered = x & !(1 << b);
            for a in (0..n).filter(|a| lowered >> a & 1 == 0) {
                let y = lowered | (1 << a);
                mat[(index[&y], col)] += 0.5;
            }
        }
        // Ĵ⁻Ĵ⁺: raise spin `b`, then lower spin `a`.
        for b in (0..n).filter(|b| x >> b & 1 == 0) {
            let raised = x | (1 << b);
            for a in (0..n).filter(|a| raised >> a & 1 == 1) {
                let y = raised & !(1 << a);
                mat[(index[&y], col)] += 0.5;
            }
        }
    }
    mat
}

/// Orthonormal vectors sharing one `(j, m)` label.
#[derive(Clone, Debug)]
pub struct Block {
    j: Half,
    /// Coefficients over the owning sector's `states`, one entry per `α`.
    vectors: Vec<Vec<f64>>,
}

impl Block {
    pub fn j(&self) -> Half {
        self.j
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }
}

/// All symmetrized vectors with one total `m`.
#[derive(Clone, Debug)]
pub struct Sector {
    m: Half,
    states: Vec<usize>,
    /// Ordered by descending `j`.
    blocks: Vec<Block>,
}

impl Sector {
    pub fn m(&self) -> Half {
        self.m
    }

    /// Computational indices spanned by this sector, ascending.
    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, j: Half) -> Option<&Block> {
        self.blocks.iter().find(|b| b.j == j)
    }
}

/// One row of the Clebsch-Gordan table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CgEntry {
    pub j: Half,
    pub m: Half,
    /// 1-based.
    pub alpha: usize,
    pub x: usize,
    pub coefficient: f64,
}

#[derive(Clone, Debug)]
pub struct SymmetrizedBasis {
    n: usize,
    /// Indexed by `popcount = m + n/2`.
    sectors: Vec<Sector>,
    degeneracy: BTreeMap<Half, u64>,
}

impl SymmetrizedBasis {
    pub fn build(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_BASIS_QUBITS {
            return domain(format!(
                "symmetrized basis supports 1..={MAX_BASIS_QUBITS} qubits, got {n}"
            ));
        }
        let sectors = (0..=n)
            .into_par_iter()
            .map(|ones| build_sector(n, ones))
            .collect::<Result<Vec<_>>>()?;
        let degeneracy: BTreeMap<Half, u64> =
            j_values(n).into_iter().map(|j| (j, degeneracy(n, j))).collect();

        for sector in &sectors {
            for block in &sector.blocks {
                let expected = degeneracy[&block.j];
                if block.vectors.len() as u64 != expected {
                    return Err(Error::Internal(format!(
                        "(j, m) = ({}, {}) has {} vectors, expected {expected}",
                        block.j,
                        sector.m,
                        block.vectors.len()
                    )));
                }
            }
        }
        Ok(Self { n, sectors, degeneracy })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Sectors in ascending `m`.
    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn sector(&self, m: Half) -> Option<&Sector> {
        let ones = check_sector(self.n, m).ok()?;
        self.sectors.get(ones)
    }

    /// `d(j)` for every admissible `j`.
    pub fn degeneracies(&self) -> &BTreeMap<Half, u64> {
        &self.degeneracy
    }

    pub fn vectors(&self, j: Half, m: Half) -> Option<&[Vec<f64>]> {
        self.sector(m)?.block(j).map(|b| b.vectors())
    }

    /// `|j, m, α⟩` expanded over all `2^n` computational states.
    pub fn full_vector(&self, j: Half, m: Half, alpha: usize) -> Result<Vec<f64>> {
        let sector = self
            .sector(m)
            .ok_or_else(|| Error::Domain(format!("no sector m = {m}")))?;
        let local = sector
            .block(j)
            .and_then(|b| alpha.checked_sub(1).and_then(|a| b.vectors.get(a)))
            .ok_or_else(|| Error::Domain(format!("no vector (j, m, α) = ({j}, {m}, {alpha})")))?;
        let mut full = vec![0.0; self.dim()];
        for (&x, &c) in sector.states.iter().zip(local) {
            full[x] = c;
        }
        Ok(full)
    }

    pub fn state(&self, j: Half, m: Half, alpha: usize) -> Result<StateVector> {
        let full = self.full_vector(j, m, alpha)?;
        StateVector::from_amplitudes(full.into_iter().map(|c| c.into()).collect())
    }

    /// `Σ_α |⟨j, m, α|ψ⟩|²` for every `(j, m)` block, sector by sector.
    pub(crate) fn block_weights(&self, s: &StateVector) -> Vec<(Half, Half, f64)> {
        let amps = s.amplitudes();
        let mut out = Vec::new();
        for sector in &self.sectors {
            for block in &sector.blocks {
                let p: f64 = block
                    .vectors
                    .iter()
                    .map(|v| {
                        v.iter()
                            .zip(&sector.states)
                            .map(|(&c, &x)| amps[x] * c)
                            .sum::<num_complex::Complex64>()
                            .norm_sqr()
                    })
                    .sum();
                out.push((block.j, sector.m, p));
            }
        }
        out
    }

    /// Rotates the `α` vectors of one block by an orthogonal matrix:
    /// `v'_β = Σ_α mixing[α, β] v_α`.
    pub fn remix_block(&mut self, j: Half, m: Half, mixing: &DMatrix<f64>) -> Result<()> {
        let ones = check_sector(self.n, m)?;
        let block = self.sectors[ones]
            .blocks
            .iter_mut()
            .find(|b| b.j == j)
            .ok_or_else(|| Error::Domain(format!("no block (j, m) = ({j}, {m})")))?;
        let d = block.vectors.len();
        if mixing.nrows() != d || mixing.ncols() != d {
            return domain(format!("mixing matrix must be {d}x{d}"));
        }
        let gram = mixing.transpose() * mixing;
        if (gram - DMatrix::<f64>::identity(d, d)).amax() > 1e-10 {
            return domain("mixing matrix is not orthogonal");
        }
        let len = block.vectors[0].len();
        let mixed: Vec<Vec<f64>> = (0..d)
            .map(|beta| {
                (0..len)
                    .map(|i| (0..d).map(|a| mixing[(a, beta)] * block.vectors[a][i]).sum())
                    .collect()
            })
            .collect();
        block.vectors = mixed;
        Ok(())
    }

    /// The full Clebsch-Gordan table: descending `j`, then descending `m`,
    /// then `α`, then ascending `x` within the sector.
    pub fn cg_table(&self) -> Vec<CgEntry> {
        let mut rows = Vec::with_capacity(self.dim() * 2);
        for j in j_values(self.n) {
            for sector in self.sectors.iter().rev() {
                let Some(block) = sector.block(j) else { continue };
                for (a, v) in block.vectors.iter().enumerate() {
                    for (&x, &c) in sector.states.iter().zip(v) {
                        rows.push(CgEntry { j, m: sector.m, alpha: a + 1, x, coefficient: c });
                    }
                }
            }
        }
        rows
    }
}

fn build_sector(n: usize, ones: usize) -> Result<Sector> {
    let m = Half(2 * ones as i32 - n as i32);
    let states = sector_states(n, ones);
    let mat = j_squared_block(n, m, &states);
    let eig = SymmetricEigen::new(mat);

    let admissible: Vec<Half> = j_values(n)
        .into_iter()
        .filter(|j| j.twice() >= m.twice().abs())
        .collect();

    let mut grouped: BTreeMap<Half, Vec<Vec<f64>>> = BTreeMap::new();
    for (col, &lambda) in eig.eigenvalues.iter().enumerate() {
        let j = admissible
            .iter()
            .copied()
            .find(|j| (lambda - j.casimir()).abs() < CLUSTER_TOLERANCE)
            .ok_or_else(|| {
                Error::Internal(format!("eigenvalue {lambda} of Ĵ² (m = {m}) matches no j(j+1)"))
            })?;
        grouped
            .entry(j)
            .or_default()
            .push(eig.eigenvectors.column(col).iter().copied().collect());
    }

    let blocks = grouped
        .into_iter()
        .rev()
        .map(|(j, vectors)| Block { j, vectors: canonicalize(vectors) })
        .collect();
    Ok(Sector { m, states, blocks })
}

/// Re-orthonormalizes a degenerate block and fixes the `α` order.
fn canonicalize(mut vectors: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    for i in 0..vectors.len() {
        for _ in 0..2 {
            for k in 0..i {
                let dot: f64 = vectors[i].iter().zip(&vectors[k]).map(|(a, b)| a * b).sum();
                let (head, tail) = vectors.split_at_mut(i);
                for (a, b) in tail[0].iter_mut().zip(&head[k]) {
                    *a -= dot * b;
                }
            }
        }
        let norm = vectors[i].iter().map(|a| a * a).sum::<f64>().sqrt();
        let v = &mut vectors[i];
        for a in v.iter_mut() {
            *a /= norm;
        }
        if let Some(&lead) = v.iter().find(|c| c.abs() > 1e-10) {
            if lead < 0.0 {
                for a in v.iter_mut() {
                    *a = -*a;
                }
            }
        }
        for a in v.iter_mut() {
            if *a == 0.0 {
                *a = 0.0; // drop negative zeros
            }
        }
    }
    vectors.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    vectors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u128) -> u128 {
        (1..=n).product()
    }

    #[test]
    fn degeneracy_matches_factorial_formula() {
        for n in 1..=20usize {
            for j in j_values(n) {
                let (twice_n, twice_j) = (n as u128, j.twice() as u128);
                let num = factorial(n as u128) * (twice_j + 1);
                let den = factorial((twice_n + twice_j) / 2 + 1) * factorial((twice_n - twice_j) / 2);
                assert_eq!(num % den, 0);
                assert_eq!(degeneracy(n, j) as u128, num / den, "n = {n}, j = {j}");
            }
        }
    }

    #[test]
    fn degeneracy_n8() {
        let d: Vec<u64> = j_values(8).into_iter().map(|j| degeneracy(8, j)).collect();
        assert_eq!(d, vec![1, 7, 20, 28, 14]);
        let total: u64 = j_values(8)
            .into_iter()
            .map(|j| degeneracy(8, j) * (j.twice() as u64 + 1))
            .sum();
        assert_eq!(total, 256);
    }

    #[test]
    fn dimension_count_for_all_n() {
        for n in 1..=20usize {
            let total: u64 = j_values(n)
                .into_iter()
                .map(|j| degeneracy(n, j) * (j.twice() as u64 + 1))
                .sum();
            assert_eq!(total, 1u64 << n);
        }
    }

    #[test]
    fn j_squared_two_spins() {
        let mat = j_squared_matrix(2, Half::ZERO).unwrap();
        assert_eq!(mat, DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]));
        let mut ev: Vec<f64> = SymmetricEigen::new(mat).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - 0.0).abs() < 1e-14 && (ev[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn j_squared_top_sector_is_scalar() {
        for n in 1..=8usize {
            let mat = j_squared_matrix(n, Half(n as i32)).unwrap();
            let j = n as f64 / 2.0;
            assert_eq!(mat.shape(), (1, 1));
            assert!((mat[(0, 0)] - j * (j + 1.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn j_squared_three_spins_m_half() {
        // Hand-evaluated: diagonal 7/4, off-diagonal 1. Spectrum {15/4, 3/4, 3/4}.
        let mat = j_squared_matrix(3, Half(1)).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c { 1.75 } else { 1.0 };
                assert!((mat[(r, c)] - expect).abs() < 1e-14);
            }
        }
        let mut ev: Vec<f64> = SymmetricEigen::new(mat.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - 0.75).abs() < 1e-12);
        assert!((ev[1] - 0.75).abs() < 1e-12);
        assert!((ev[2] - 3.75).abs() < 1e-12);
        assert!((mat.trace() - (3.75 + 0.75 + 0.75)).abs() < 1e-12);
    }

    #[test]
    fn j_squared_invalid_m() {
        assert!(j_squared_matrix(3, Half(0)).is_err());
        assert!(j_squared_matrix(3, Half(5)).is_err());
    }

    #[test]
    fn transition_factor_examples() {
        let four = Half::from_int(4);
        assert_eq!(transition_factor(four, Half::ZERO, Ladder::Down).unwrap(), 20.0);
        assert_eq!(transition_factor(four, four, Ladder::Up).unwrap(), 0.0);
        for tj in 0..12 {
            let j = Half(tj);
            assert_eq!(transition_factor(j, Half(-tj), Ladder::Down).unwrap(), 0.0);
        }
        assert!(transition_factor(Half(2), Half(4), Ladder::Down).is_err());
        assert!(transition_factor(Half(2), Half(1), Ladder::Down).is_err());
    }

    #[test]
    fn two_spins_triplet_and_singlet() {
        let b = SymmetrizedBasis::build(2).unwrap();
        let singlet = b.full_vector(Half::ZERO, Half::ZERO, 1).unwrap();
        let h = 0.5f64.sqrt();
        // sign fixed by the leading-positive convention
        assert!((singlet[1] - h).abs() < 1e-12);
        assert!((singlet[2] + h).abs() < 1e-12);
        assert_eq!(singlet[0], 0.0);
        assert_eq!(singlet[3], 0.0);
        let t0 = b.full_vector(Half(2), Half::ZERO, 1).unwrap();
        assert!((t0[1] - h).abs() < 1e-12 && (t0[2] - h).abs() < 1e-12);
        assert_eq!(b.full_vector(Half(2), Half(-2), 1).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn three_spins_matches_table_subspace() {
        let b = SymmetrizedBasis::build(3).unwrap();
        assert_eq!(b.degeneracies()[&Half(3)], 1);
        assert_eq!(b.degeneracies()[&Half(1)], 2);

        // Sector m = -1/2 over |001⟩, |010⟩, |100⟩. The j = 1/2 block must
        // span the complement of the symmetric vector (1,1,1)/√3; we compare
        // projectors since α-ordering is a free choice.
        let m = Half(-1);
        let sector = b.sector(m).unwrap();
        assert_eq!(sector.states(), &[1, 2, 4]);
        let sym = &b.vectors(Half(3), m).unwrap()[0];
        for c in sym {
            assert!((c - 3f64.sqrt().recip()).abs() < 1e-12);
        }
        let sub = b.vectors(Half(1), m).unwrap();
        assert_eq!(sub.len(), 2);
        for r in 0..3 {
            for c in 0..3 {
                let proj: f64 = sub.iter().map(|v| v[r] * v[c]).sum();
                let expect = if r == c { 2.0 / 3.0 } else { -1.0 / 3.0 };
                assert!((proj - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eight_spins_degeneracies_observed() {
        let b = SymmetrizedBasis::build(8).unwrap();
        let dfs = b.vectors(Half::ZERO, Half::ZERO).unwrap();
        assert_eq!(dfs.len(), 14);
        let count: usize = b
            .sectors()
            .iter()
            .flat_map(|s| s.blocks())
            .map(|bl| bl.vectors().len())
            .sum();
        assert_eq!(count, 256);
    }

    #[test]
    fn cg_table_shape() {
        let b = SymmetrizedBasis::build(3).unwrap();
        let rows = b.cg_table();
        // Σ_m C(3,k)^2 = 1 + 9 + 9 + 1
        assert_eq!(rows.len(), 20);
        assert_eq!(rows[0].j, Half(3));
        assert_eq!(rows[0].m, Half(3));
        assert_eq!(rows[0].x, 7);
    }

    #[test]
    fn build_rejects_bad_sizes() {
        assert!(SymmetrizedBasis::build(0).is_err());
        assert!(SymmetrizedBasis::build(MAX_BASIS_QUBITS + 1).is_err());
    }

    #[test]
    fn lowering_maps_within_blocks() {
        // Ĵ⁻|j,m,α⟩ = √((j+m)(j-m+1)) · (unit vector in span of the (j, m-1) block)
        for n in 1..=8usize {
            let b = SymmetrizedBasis::build(n).unwrap();
            for sector in b.sectors() {
                let m = sector.m();
                for block in sector.blocks() {
                    let j = block.j();
                    for alpha in 1..=block.vectors().len() {
                        let v = b.full_vector(j, m, alpha).unwrap();
                        let lowered = lower_full(&v, n);
                        let factor = transition_factor(j, m, Ladder::Down).unwrap();
                        let norm2: f64 = lowered.iter().map(|a| a * a).sum();
                        assert!((norm2 - factor).abs() < 1e-9, "n={n} j={j} m={m}");
                        if factor == 0.0 {
                            continue;
                        }
                        let target = b.vectors(j, Half(m.twice() - 2)).unwrap();
                        let tsec = b.sector(Half(m.twice() - 2)).unwrap();
                        let captured: f64 = target
                            .iter()
                            .map(|t| {
                                t.iter()
                                    .zip(tsec.states())
                                    .map(|(c, &x)| c * lowered[x])
                                    .sum::<f64>()
                                    .powi(2)
                            })
                            .sum();
                        assert!((captured - factor).abs() < 1e-9, "n={n} j={j} m={m}");
                    }
                }
            }
        }
    }

    fn lower_full(v: &[f64], n: usize) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for (x, &c) in v.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for b in 0..n {
                if x >> b & 1 == 1 {
                    out[x & !(1 << b)] += c;
                }
            }
        }
        out
    }
}
