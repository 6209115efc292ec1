//! Kets, Hermitian operators and their deterministic eigensystems.
//!
//! Every [`Ket`] carries the same phase convention: the first amplitude whose
//! modulus exceeds [`PHASE_THRESHOLD`] is real and positive. Two kets that
//! differ only by a global phase therefore compare equal entrywise.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serial;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const KET_NORM_TOL: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PHASE_THRESHOLD: f64 = 1e-12;
/// Eigenvalues closer than this are treated as one degenerate level.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `|v⟩⟨v|`
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Largest deviation of the Gram matrix of `vectors` from the identity.
pub fn gram_residual(vectors: &[CVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.dotc(b) - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Rotates `v` so its first non-negligible amplitude is real positive.
pub fn fix_phase(v: &mut CVector) {
    if let Some(lead) = v.iter().copied().find(|z| z.norm() > PHASE_THRESHOLD) {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// A normalized state vector in canonical phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ket {
    #[serde(with = "serial::cvec")]
    amplitudes: CVector,
}

impl Ket {
    /// Accepts a vector already normalized within [`KET_NORM_TOL`] and puts
    /// it in canonical phase.
    pub fn new(mut amplitudes: CVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidKet("empty amplitude vector".into()));
        }
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > KET_NORM_TOL {
            return Err(Error::InvalidKet(format!("squared norm {norm_sq} is not 1")));
        }
        fix_phase(&mut amplitudes);
        Ok(Self { amplitudes })
    }

    /// Normalizes any nonzero vector.
    pub fn normalize(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidKet(format!("cannot normalize vector of norm {norm}")));
        }
        Self::new(amplitudes.unscale(norm))
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::normalize(CVector::from_iterator(
            values.len(),
            values.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    /// The `index`-th standard basis vector of a `dim`-dimensional space.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `⟨self|other⟩`
    pub fn overlap(&self, other: &Ket) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|self⟩⟨self|`
    pub fn projector(&self) -> CMatrix {
        outer(&self.amplitudes)
    }
}

/// A square complex matrix equal to its adjoint within [`HERMITIAN_TOL`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HermitianOperator {
    #[serde(with = "serial::cmat")]
    entries: CMatrix,
}

impl HermitianOperator {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "operator must be square and nonempty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let dev = hermitian_deviation(&entries);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn apply(&self, ket: &Ket) -> CVector {
        &self.entries * ket.amplitudes()
    }

    pub fn eigensystem(&self) -> Eigensystem {
        eigensystem(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Ket,
}

#[derive(Debug, Clone)]
pub struct Eigensystem {
    /// Ascending by eigenvalue.
    pub pairs: Vec<EigenPair>,
    /// First pair of adjacent eigenvalues within [`DEGENERACY_TOL`], if any.
    pub degenerate: Option<(f64, f64)>,
}

impl Eigensystem {
    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate.is_some()
    }

    /// Errors out when the spectrum is degenerate.
    pub fn require_simple(self) -> Result<Self> {
        match self.degenerate {
            Some((a, b)) => Err(Error::Degenerate(a, b)),
            None => Ok(self),
        }
    }
}

/// Eigen-decomposition of a Hermitian operator, ascending eigenvalues,
/// eigenvectors in canonical phase.
pub fn eigensystem(op: &HermitianOperator) -> Eigensystem {
    // The solver reads one triangle only; symmetrize so both agree exactly.
    let m = op.entries();
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let pairs: Vec<EigenPair> = order
        .into_iter()
        .map(|i| {
            let mut v: CVector = eig.eigenvectors.column(i).into_owned();
            v.unscale_mut(v.norm());
            fix_phase(&mut v);
            EigenPair {
                value: eig.eigenvalues[i],
                vector: Ket { amplitudes: v },
            }
        })
        .collect();

    let degenerate = pairs
        .windows(2)
        .find(|w| (w[1].value - w[0].value).abs() < DEGENERACY_TOL)
        .map(|w| (w[0].value, w[1].value));

    Eigensystem { pairs, degenerate }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phase_convention_makes_lead_real_positive() {
        let v = CVector::from_vec(vec![c(0.0, 0.0), c(0.0, -0.6), c(0.8, 0.0)]);
        let k = Ket::new(v).unwrap();
        assert_eq!(k.amplitudes()[0], c(0.0, 0.0));
        assert_abs_diff_eq!(k.amplitudes()[1].re, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(k.amplitudes()[1].im, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(k.amplitudes()[2].im, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn unnormalized_ket_rejected() {
        let v = CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(Ket::new(v), Err(Error::InvalidKet(_))));
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn identity_flags_degeneracy() {
        let op = HermitianOperator::new(CMatrix::identity(3, 3)).unwrap();
        let es = op.eigensystem();
        assert!(es.is_degenerate());
        assert!(matches!(es.require_simple(), Err(Error::Degenerate(..))));
    }

    #[test]
    fn diagonal_eigensystem_is_ascending() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.5, 0.0), c(-0.5, 0.0)]));
        let es = HermitianOperator::new(m).unwrap().eigensystem();
        assert_eq!(es.values(), vec![-0.5, 0.5]);
        assert_eq!(es.pairs[0].vector, Ket::basis(2, 1));
        assert_eq!(es.pairs[1].vector, Ket::basis(2, 0));
        assert!(!es.is_degenerate());
    }

    #[test]
    fn gram_residual_detects_overlap() {
        let a = Ket::basis(2, 0).amplitudes().clone();
        let b = Ket::from_real(&[1.0, 1.0]).unwrap().amplitudes().clone();
        assert!(gram_residual(&[a.clone(), b]) > 0.7);
        assert_eq!(gram_residual(&[a, Ket::basis(2, 1).amplitudes().clone()]), 0.0);
    }
}
