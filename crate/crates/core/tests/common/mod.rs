#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use sdof::numerics::{ComplexMatrix, LinearModel, Role, SignalComponent};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(rows, cols, data).unwrap()
}

/// Power drawn log-uniformly from [0.1, 1e4].
pub fn random_power(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.random_range(-1.0..4.0))
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let entries: Vec<Vec<Complex64>> = (0..n).map(|i| m.row_slice(i).to_vec()).collect();
    laplace(&entries)
}

fn laplace(a: &[Vec<Complex64>]) -> Complex64 {
    match a.len() {
        0 => Complex64::new(1.0, 0.0),
        1 => a[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<Complex64>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                a[0][j] * laplace(&minor) * sign
            })
            .sum(),
    }
}

pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let dm = DMatrix::from_row_slice(m.rows(), m.cols(), m.entries());
    let mut sv: Vec<f64> = dm.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values above `rel_tol` times the largest.
pub fn numerical_rank(m: &ComplexMatrix, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Random model with useful blocks `v1`, `v2` and a nuisance block `n`.
pub fn random_model(rng: &mut ChaCha8Rng) -> LinearModel {
    let rows = rng.random_range(1..=4);
    let comp = |label, role, rng: &mut ChaCha8Rng| {
        let dim = rng.random_range(1..=3);
        let a = random_matrix(rng, rows, dim);
        SignalComponent::new(label, a, random_power(rng), role).unwrap()
    };
    let v1 = comp("v1", Role::Useful, rng);
    let v2 = comp("v2", Role::Useful, rng);
    let n = comp("n", Role::Nuisance, rng);
    LinearModel::new(vec![v1, v2, n], rng.random_range(0.5..2.0)).unwrap()
}
