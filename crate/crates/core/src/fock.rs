//! Fermionic Fock spaces for `L` modes.
//!
//! Basis state `k` (0-based) has mode `j` (1-based) occupied iff bit `j - 1`
//! of `k` is set. For two modes this yields the ordering
//! `|Ω⟩, c₁†|Ω⟩, c₂†|Ω⟩, c₁†c₂†|Ω⟩`.
//!
//! Operators use the Jordan–Wigner sign convention: `c_j` picks up a factor
//! `(-1)` for every occupied mode `k < j`, so that
//! `c₁†c₂†|Ω⟩ = +|11⟩`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{c, OperatorMatrix, C64};

pub const MAX_MODES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockBasis {
    mode_count: usize,
}

/// Basis for `mode_count` fermionic modes, `1 <= mode_count <= 12`.
pub fn build_basis(mode_count: usize) -> Result<FockBasis> {
    FockBasis::new(mode_count)
}

impl FockBasis {
    pub fn new(mode_count: usize) -> Result<Self> {
        if !(1..=MAX_MODES).contains(&mode_count) {
            return Err(Error::Size {
                what: "mode count",
                value: mode_count,
                min: 1,
                max: MAX_MODES,
            });
        }
        Ok(Self { mode_count })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn dimension(&self) -> usize {
        1 << self.mode_count
    }

    /// Occupation of 1-based `mode` in basis state `index`.
    pub fn is_occupied(&self, index: usize, mode: usize) -> bool {
        (index >> (mode - 1)) & 1 == 1
    }

    /// Occupation pattern of a basis state, listed by mode `1..=L`.
    pub fn occupations(&self, index: usize) -> Vec<bool> {
        (1..=self.mode_count)
            .map(|j| self.is_occupied(index, j))
            .collect()
    }

    /// Inverse of [`FockBasis::occupations`].
    pub fn index_of(&self, occupations: &[bool]) -> Result<usize> {
        if occupations.len() != self.mode_count {
            return Err(Error::Shape(format!(
                "expected {} occupations, got {}",
                self.mode_count,
                occupations.len()
            )));
        }
        Ok(occupations
            .iter()
            .enumerate()
            .filter(|(_, &n)| n)
            .fold(0, |acc, (j, _)| acc | (1 << j)))
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode == 0 || mode > self.mode_count {
            return Err(Error::Index {
                what: "mode (1-based)",
                index: mode,
                len: self.mode_count,
            });
        }
        Ok(())
    }

    /// Matrix of the annihilation operator `c_mode`.
    pub fn annihilation(&self, mode: usize) -> Result<OperatorMatrix> {
        self.check_mode(mode)?;
        let dim = self.dimension();
        let bit = 1usize << (mode - 1);
        let mut m = OperatorMatrix::zeros(dim, dim);
        for state in (0..dim).filter(|s| s & bit != 0) {
            let parity = (state & (bit - 1)).count_ones();
            let sign = if parity.is_multiple_of(2) { 1.0 } else { -1.0 };
            m[(state ^ bit, state)] = c(sign);
        }
        Ok(m)
    }

    /// Matrix of `c_mode†`.
    pub fn creation(&self, mode: usize) -> Result<OperatorMatrix> {
        Ok(self.annihilation(mode)?.adjoint())
    }

    /// Matrix of `n_mode = c_mode† c_mode`.
    pub fn number_operator(&self, mode: usize) -> Result<OperatorMatrix> {
        Ok(self.creation(mode)? * self.annihilation(mode)?)
    }

    /// The all-empty state.
    pub fn vacuum(&self) -> DVector<C64> {
        let mut v = DVector::zeros(self.dimension());
        v[0] = c(1.0);
        v
    }

    pub fn identity(&self) -> OperatorMatrix {
        OperatorMatrix::identity(self.dimension(), self.dimension())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anticommutator(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
        a * b + b * a
    }

    fn is_zero(m: &OperatorMatrix) -> bool {
        m.iter().all(|z| *z == C64::new(0.0, 0.0))
    }

    #[test]
    fn dimensions() {
        assert_eq!(build_basis(1).unwrap().dimension(), 2);
        assert_eq!(build_basis(2).unwrap().dimension(), 4);
        assert_eq!(build_basis(5).unwrap().dimension(), 32);
    }

    #[test]
    fn mode_count_out_of_range() {
        assert!(matches!(build_basis(0), Err(Error::Size { .. })));
        assert!(matches!(build_basis(13), Err(Error::Size { .. })));
        assert!(build_basis(12).is_ok());
    }

    #[test]
    fn two_mode_ordering() {
        let b = build_basis(2).unwrap();
        assert_eq!(b.occupations(0), vec![false, false]);
        assert_eq!(b.occupations(1), vec![true, false]);
        assert_eq!(b.occupations(2), vec![false, true]);
        assert_eq!(b.occupations(3), vec![true, true]);
        for k in 0..4 {
            assert_eq!(b.index_of(&b.occupations(k)).unwrap(), k);
        }
    }

    #[test]
    fn single_mode_lowering_operator() {
        let b = build_basis(1).unwrap();
        let a = b.annihilation(1).unwrap();
        assert_eq!(a[(0, 1)], c(1.0));
        assert_eq!(a.iter().filter(|z| z.norm() != 0.0).count(), 1);
        assert_eq!(b.creation(1).unwrap(), a.adjoint());
    }

    #[test]
    fn mode_index_out_of_range() {
        let b = build_basis(2).unwrap();
        assert!(matches!(b.annihilation(0), Err(Error::Index { .. })));
        assert!(matches!(b.creation(3), Err(Error::Index { .. })));
        assert!(matches!(b.number_operator(3), Err(Error::Index { .. })));
    }

    #[test]
    fn two_mode_relations() {
        let b = build_basis(2).unwrap();
        let c1 = b.annihilation(1).unwrap();
        assert_eq!(anticommutator(&c1, &c1.adjoint()), b.identity());
        let c1d = b.creation(1).unwrap();
        assert!(is_zero(&(&c1d * &c1d)));
    }

    #[test]
    fn pair_creation_reaches_last_state() {
        let b = build_basis(2).unwrap();
        let v = b.creation(1).unwrap() * b.creation(2).unwrap() * b.vacuum();
        let mut expected = DVector::zeros(4);
        expected[3] = c(1.0);
        assert_eq!(v, expected);
    }

    #[test]
    fn three_mode_annihilators_anticommute() {
        let b = build_basis(3).unwrap();
        for j in 1..=3 {
            for k in 1..=3 {
                let cj = b.annihilation(j).unwrap();
                let ck = b.annihilation(k).unwrap();
                assert!(is_zero(&anticommutator(&cj, &ck)), "j={j} k={k}");
            }
        }
    }

    #[test]
    fn number_operators() {
        let b2 = build_basis(2).unwrap();
        let n1 = b2.number_operator(1).unwrap();
        let diag: Vec<f64> = n1.diagonal().iter().map(|z| z.re).collect();
        assert_eq!(diag, vec![0.0, 1.0, 0.0, 1.0]);
        assert!(is_zero(
            &(n1.clone() - OperatorMatrix::from_diagonal(&n1.diagonal()))
        ));

        let b1 = build_basis(1).unwrap();
        let diag: Vec<f64> = b1
            .number_operator(1)
            .unwrap()
            .diagonal()
            .iter()
            .map(|z| z.re)
            .collect();
        assert_eq!(diag, vec![0.0, 1.0]);

        for l in 1..=4 {
            let b = build_basis(l).unwrap();
            for j in 1..=l {
                let n = b.number_operator(j).unwrap();
                assert_eq!(&n * &n, n);
                assert_eq!((&n * b.vacuum()).norm(), 0.0);
            }
        }
    }

    #[test]
    fn vacuum_is_first_unit_vector() {
        for l in [1, 2, 4] {
            let b = build_basis(l).unwrap();
            let v = b.vacuum();
            assert_eq!(v[0], c(1.0));
            assert_eq!(v.norm(), 1.0);
            for j in 1..=l {
                assert_eq!((b.annihilation(j).unwrap() * &v).norm(), 0.0);
            }
        }
    }
}
