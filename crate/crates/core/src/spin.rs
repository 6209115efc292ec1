//! Spin-j Hilbert spaces and the question-answer states |a;k⟩.
//!
//! The standard basis is ordered by descending magnetic quantum number,
//! `m = j, j-1, ..., -j`, so `Jz` is `diag(j, ..., -j)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{CMatrix, HermitianOperator, Ket};

pub const DIRECTION_TOL: f64 = 1e-12;

/// An integer or half-integer, stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_doubled(twice: i32) -> Self {
        Self(twice)
    }

    pub const fn doubled(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 > 0 { "+" } else { "" };
        if self.0 % 2 == 0 {
            write!(f, "{sign}{}", self.0 / 2)
        } else {
            write!(f, "{sign}{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"1"`, `"-1"`, `"+3/2"`, `"0.5"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidSpin(format!("{s:?} is not an integer or half-integer"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().trim_start_matches('+').parse().map_err(|_| bad())?;
            return match den.trim() {
                "2" => Ok(Self(num)),
                "1" => Ok(Self(2 * num)),
                _ => Err(bad()),
            };
        }
        let x: f64 = s.trim_start_matches('+').parse().map_err(|_| bad())?;
        let twice = 2.0 * x;
        if (twice - twice.round()).abs() > 1e-12 || twice.abs() > f64::from(i32::MAX) {
            return Err(bad());
        }
        Ok(Self(twice.round() as i32))
    }
}

/// A unit vector in R³ naming the component θ^a = a·φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm_sq = x * x + y * y + z * z;
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > DIRECTION_TOL {
            return Err(Error::NonUnitDirection { norm_sq });
        }
        Ok(Self { x, y, z })
    }

    /// Scales any nonzero vector to unit length.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NonUnitDirection { norm_sq: n * n });
        }
        Self::new(x / n, y / n, z / n)
    }

    pub const fn x_axis() -> Self {
        Self { x: 1.0, y: 0.0, z: 0.0 }
    }

    pub const fn y_axis() -> Self {
        Self { x: 0.0, y: 1.0, z: 0.0 }
    }

    pub const fn z_axis() -> Self {
        Self { x: 0.0, y: 0.0, z: 1.0 }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// a and −a pose the same question with answers negated.
    pub fn same_question(&self, other: &Direction, tol: f64) -> bool {
        (self.dot(other).abs() - 1.0).abs() <= tol
    }
}

impl TryFrom<[f64; 3]> for Direction {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<Direction> for [f64; 3] {
    fn from(d: Direction) -> Self {
        d.components()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinSystem {
    twice_j: u32,
}

impl SpinSystem {
    /// `twice_j = 2j ≥ 1`.
    pub fn new(twice_j: u32) -> Result<Self> {
        if twice_j == 0 {
            return Err(Error::InvalidSpin("j must be positive".into()));
        }
        Ok(Self { twice_j })
    }

    pub fn from_j(j: HalfInt) -> Result<Self> {
        let twice = u32::try_from(j.doubled()).map_err(|_| Error::InvalidSpin(format!("negative j = {j}")))?;
        Self::new(twice)
    }

    pub fn twice_j(&self) -> u32 {
        self.twice_j
    }

    pub fn j(&self) -> f64 {
        f64::from(self.twice_j) / 2.0
    }

    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    /// m = j, j-1, ..., -j (basis order).
    pub fn answers(&self) -> Vec<HalfInt> {
        let tj = self.twice_j as i32;
        (0..=self.twice_j as i32).map(|i| HalfInt(tj - 2 * i)).collect()
    }

    fn check_answer(&self, k: HalfInt) -> Result<()> {
        let tj = self.twice_j as i32;
        if k.doubled().abs() > tj || (k.doubled() - tj) % 2 != 0 {
            return Err(Error::InvalidAnswer {
                twice_k: k.doubled(),
                twice_j: self.twice_j,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub jx: HermitianOperator,
    pub jy: HermitianOperator,
    pub jz: HermitianOperator,
}

/// Jx, Jy, Jz from the ladder operators
/// `J± |m⟩ = √(j(j+1) − m(m±1)) |m±1⟩`.
pub fn spin_operators(system: &SpinSystem) -> SpinOperators {
    let n = system.dim();
    let j = system.j();
    let m_of = |i: usize| j - i as f64;

    let mut raise = CMatrix::zeros(n, n);
    for col in 1..n {
        let m = m_of(col);
        raise[(col - 1, col)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();

    let jx = (&raise + &lower).scale(0.5);
    let jy = (&raise - &lower) * Complex64::new(0.0, -0.5);
    let jz = CMatrix::from_fn(n, n, |r, c| {
        if r == c {
            Complex64::new(m_of(r), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });

    SpinOperators {
        jx: HermitianOperator::new(jx).expect("Jx is Hermitian"),
        jy: HermitianOperator::new(jy).expect("Jy is Hermitian"),
        jz: HermitianOperator::new(jz).expect("Jz is Hermitian"),
    }
}

/// `J^a = a_x Jx + a_y Jy + a_z Jz`.
pub fn component_operator(system: &SpinSystem, a: &Direction) -> HermitianOperator {
    let ops = spin_operators(system);
    let [x, y, z] = a.components();
    let m = ops.jx.entries().scale(x) + ops.jy.entries().scale(y) + ops.jz.entries().scale(z);
    HermitianOperator::new(m).expect("real combination of Hermitian operators")
}

/// The eigenvector of J^a with eigenvalue k, in canonical phase.
pub fn question_answer_state(system: &SpinSystem, a: &Direction, k: HalfInt) -> Result<Ket> {
    system.check_answer(k)?;
    let es = component_operator(system, a).eigensystem().require_simple()?;
    // Ascending spectrum -j..j, so k sits at index k + j.
    let index = ((k.doubled() + system.twice_j as i32) / 2) as usize;
    Ok(es.pairs[index].vector.clone())
}

/// All |a;k⟩ for k = j..−j (basis order).
pub fn question_answer_basis(system: &SpinSystem, a: &Direction) -> Result<Vec<(HalfInt, Ket)>> {
    let es = component_operator(system, a).eigensystem().require_simple()?;
    let answers = system.answers();
    Ok(answers
        .into_iter()
        .zip(es.pairs.into_iter().rev())
        .map(|(k, p)| (k, p.vector))
        .collect())
}

/// The direction a with |v⟩ = |a;+1/2⟩ up to phase: a = ⟨v|σ|v⟩.
pub fn bloch_from_qubit(v: &Ket) -> Result<(Direction, HalfInt)> {
    if v.dim() != 2 {
        return Err(Error::InvalidKet(format!("expected a qubit, got dimension {}", v.dim())));
    }
    let c0 = v.amplitudes()[0];
    let c1 = v.amplitudes()[1];
    let cross = c0.conj() * c1;
    let dir = Direction::normalized(2.0 * cross.re, 2.0 * cross.im, c0.norm_sqr() - c1.norm_sqr())?;
    Ok((dir, HalfInt::from_doubled(1)))
}
