//! Test-side oracles written without the library's linear algebra or group
//! code: a cyclic Jacobi eigensolver on the real embedding of a Hermitian
//! matrix, and brute-force enumerations over finite actions.

#![allow(dead_code)]

use std::collections::BTreeSet;

use eqm_core::conceptual::{EVariableMap, FiniteGroupAction};
use eqm_core::operator::CMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// `A = B + iC` is embedded as the real symmetric `[[B, −C], [C, B]]`, whose
/// spectrum is that of `A` with every eigenvalue doubled.
pub fn jacobi_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.nrows();
    let mut a = vec![vec![0.0; 2 * n]; 2 * n];
    for r in 0..n {
        for c in 0..n {
            let z = m[(r, c)];
            a[r][c] = z.re;
            a[r + n][c + n] = z.re;
            a[r][c + n] = -z.im;
            a[r + n][c] = z.im;
        }
    }
    let size = 2 * n;
    for _sweep in 0..100 {
        let off: f64 = (0..size)
            .flat_map(|i| (0..size).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..size {
            for q in (p + 1)..size {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..size {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..size {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut diag: Vec<f64> = (0..size).map(|i| a[i][i]).collect();
    diag.sort_by(f64::total_cmp);
    diag.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// Uniform direction on the sphere via a normalized Gaussian triple.
pub fn random_direction(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [gauss(rng), gauss(rng), gauss(rng)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

pub fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// `θ(φ1) = θ(φ2) ⇒ θ(kφ1) = θ(kφ2)` for every k and every pair.
pub fn brute_permissible(theta: &EVariableMap, action: &FiniteGroupAction) -> bool {
    let n = action.n_points();
    let t = theta.assignment();
    let table = action.act_table();
    table.iter().all(|row| {
        (0..n).all(|a| (0..n).all(|b| t[a] != t[b] || t[row[a]] == t[row[b]]))
    })
}

/// Value permutation induced by each element: `u = θ(φ) ↦ θ(kφ)`.
pub fn brute_induced(theta: &EVariableMap, action: &FiniteGroupAction) -> Vec<Vec<usize>> {
    let t = theta.assignment();
    action
        .act_table()
        .iter()
        .map(|row| {
            (0..theta.n_values())
                .map(|u| {
                    let phi = (0..t.len()).find(|&p| t[p] == u).unwrap();
                    t[row[phi]]
                })
                .collect()
        })
        .collect()
}

/// Orbits by repeated relaxation of a component label, as sorted sets.
pub fn brute_orbits(action: &FiniteGroupAction) -> BTreeSet<BTreeSet<usize>> {
    let n = action.n_points();
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for row in action.act_table() {
            for p in 0..n {
                let m = label[p].min(label[row[p]]);
                if label[p] != m || label[row[p]] != m {
                    label[p] = m;
                    label[row[p]] = m;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut out = BTreeSet::new();
    for l in label.iter().copied().collect::<BTreeSet<_>>() {
        out.insert((0..n).filter(|&p| label[p] == l).collect());
    }
    out
}

/// Columns of the Q factor of a complex Gaussian matrix.
pub fn random_unitary_columns(rng: &mut ChaCha8Rng, dim: usize) -> Vec<eqm_core::operator::CVector> {
    let g = CMatrix::from_fn(dim, dim, |_, _| num_complex::Complex64::new(gauss(rng), gauss(rng)));
    let q = g.qr().q();
    (0..dim).map(|c| q.column(c).into_owned()).collect()
}

/// A random projective resolution on `dim ≤ 5` with `m` outcomes, built from
/// a random orthonormal basis split into `m` nonempty blocks.
pub fn random_resolution(rng: &mut ChaCha8Rng, dim: usize, m: usize) -> eqm_core::measure::ProjectiveResolution {
    use eqm_core::measure::{Projector, ProjectiveResolution};
    use eqm_core::operator::Ket;
    let cols = random_unitary_columns(rng, dim);
    let kets: Vec<Ket> = cols.into_iter().map(|c| Ket::normalize(c).unwrap()).collect();
    let mut owner: Vec<usize> = (0..dim).map(|i| if i < m { i } else { rng.gen_range(0..m) }).collect();
    for i in (1..dim).rev() {
        owner.swap(i, rng.gen_range(0..=i));
    }
    let projectors = (0..m)
        .map(|b| {
            let members: Vec<&Ket> = (0..dim).filter(|&i| owner[i] == b).map(|i| &kets[i]).collect();
            Projector::onto(&members).unwrap()
        })
        .collect();
    ProjectiveResolution::new((0..m).map(|b| format!("v{b}")).collect(), projectors).unwrap()
}

/// A random probability vector with every entry at least `floor`.
pub fn random_distribution(rng: &mut ChaCha8Rng, m: usize, floor: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| rng.gen::<f64>() + floor).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// A random row-stochastic table `answers × alphabet`.
pub fn random_model(rng: &mut ChaCha8Rng, answers: &[String], n_data: usize) -> eqm_core::measure::StatisticalModel {
    let alphabet: Vec<String> = (0..n_data).map(|x| format!("x{x}")).collect();
    let table = answers.iter().map(|_| random_distribution(rng, n_data, 0.0)).collect();
    eqm_core::measure::StatisticalModel::new(answers.to_vec(), alphabet, table).unwrap()
}

/// `GG† / tr(GG†)` for a complex Gaussian `G` of the given rank.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> eqm_core::measure::DensityOperator {
    let g = CMatrix::from_fn(dim, rank, |_, _| num_complex::Complex64::new(gauss(rng), gauss(rng)));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = m.unscale(tr);
    eqm_core::measure::DensityOperator::new((&m + m.adjoint()).scale(0.5)).unwrap()
}
