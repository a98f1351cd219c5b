//! Small dense complex matrices and exact Gaussian mutual information.
//!
//! Everything here works in bits: `log_det_hermitian_psd` returns
//! `log2 det(M)` and `gaussian_mi` returns `I(useful; y | conditioned)` for a
//! linear model `y = sum_k A_k s_k + n` with circularly-symmetric Gaussian
//! inputs and white Gaussian noise.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used by `log_det_hermitian_psd` for the Hermitian check, the
/// indefiniteness check and the singularity floor, relative to the largest
/// diagonal entry.
pub const PSD_TOL: f64 = 1e-10;

/// Negative mutual-information values in `[-MI_CLAMP_BAND, 0)` are rounding
/// noise and clamp to zero. Anything lower is reported as an error.
pub const MI_CLAMP_BAND: f64 = 1e-9;

/// Dense row-major complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Convenience constructor for real-valued matrices.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// A single row vector.
    pub fn row(entries: &[Complex64]) -> Result<Self> {
        Self::new(1, entries.len(), entries.to_vec())
    }

    /// A single column vector.
    pub fn column(entries: &[Complex64]) -> Result<Self> {
        Self::new(entries.len(), 1, entries.to_vec())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.data[i * self.cols + j]
    }

    pub fn row_slice(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `A A^H`, with the lower triangle mirrored from the upper so the result
    /// is exactly Hermitian.
    pub fn gram(&self) -> Self {
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let s: Complex64 = self
                    .row_slice(i)
                    .iter()
                    .zip(self.row_slice(j))
                    .map(|(a, b)| a * b.conj())
                    .sum();
                if i == j {
                    out.data[i * n + i] = Complex64::new(s.re, 0.0);
                } else {
                    out.data[i * n + j] = s;
                    out.data[j * n + i] = s.conj();
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot hstack {} rows with {} rows",
                self.rows, rhs.rows
            )));
        }
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row_slice(i));
            data.extend_from_slice(rhs.row_slice(i));
        }
        Ok(Self {
            rows: self.rows,
            cols,
            data,
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot vstack {} cols with {} cols",
                self.cols, rhs.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(Self {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        })
    }

    /// Squared Frobenius norm.
    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation `|m_ij - conj(m_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.is_square() && self.hermitian_deviation() <= rel_tol * self.max_abs().max(1.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row_slice(i)
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `log2 det(m)` for a Hermitian positive semidefinite matrix.
///
/// Uses a diagonally pivoted Cholesky factorisation. When the remaining
/// pivots fall inside `[-PSD_TOL, PSD_TOL]` relative to the largest diagonal
/// entry the matrix is singular and the result is `f64::NEG_INFINITY`; a
/// pivot below that band means the input was indefinite and is an error.
pub fn log_det_hermitian_psd(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.entries().iter().any(|z| z.re.is_nan() || z.im.is_nan()) {
        return Err(Error::NonFinite);
    }
    let n = m.rows();
    if n == 0 {
        return Ok(0.0);
    }
    let dev = m.hermitian_deviation();
    if dev > PSD_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }

    let mut a = m.data.clone();
    let scale = (0..n).map(|i| a[i * n + i].re).fold(0.0, f64::max);
    if scale <= 0.0 {
        let most_negative = (0..n).map(|i| a[i * n + i].re).fold(0.0, f64::min);
        if most_negative < 0.0 {
            return Err(Error::NotPositiveSemidefinite {
                pivot: most_negative,
            });
        }
        return Ok(f64::NEG_INFINITY);
    }
    let floor = PSD_TOL * scale;

    let mut log_det = 0.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re))
            .expect("non-empty pivot range");
        if p != k {
            for c in 0..n {
                a.swap(k * n + c, p * n + c);
            }
            for r in 0..n {
                a.swap(r * n + k, r * n + p);
            }
        }
        let pivot = a[k * n + k].re;
        if pivot < -floor {
            return Err(Error::NotPositiveSemidefinite { pivot });
        }
        if pivot <= floor {
            // Largest remaining diagonal is numerically zero: the trailing
            // block vanishes.
            return Ok(f64::NEG_INFINITY);
        }
        log_det += pivot.log2();
        let l_kk = pivot.sqrt();
        for i in k + 1..n {
            a[i * n + k] /= l_kk;
        }
        for j in k + 1..n {
            let l_jk = a[j * n + k];
            for i in j..n {
                let update = a[i * n + k] * l_jk.conj();
                a[i * n + j] -= update;
                if i != j {
                    a[j * n + i] = a[i * n + j].conj();
                }
            }
            a[j * n + j].im = 0.0;
        }
    }
    Ok(log_det)
}

/// How a signal enters the mutual information being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// The message whose information content is measured.
    Useful,
    /// Unknown interference: artificial noise or another user's message.
    Nuisance,
    /// Known at the receiver and removed; contributes nothing.
    Conditioned,
}

/// One Gaussian symbol block `s_k` entering the observations as `A_k s_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalComponent {
    label: &'static str,
    matrix: ComplexMatrix,
    power: f64,
    role: Role,
}

impl SignalComponent {
    /// `power` is the variance of each scalar symbol in the block.
    pub fn new(label: &'static str, matrix: ComplexMatrix, power: f64, role: Role) -> Result<Self> {
        if !power.is_finite() || power < 0.0 {
            return Err(Error::InvalidModel(format!(
                "component {label} has invalid power {power}"
            )));
        }
        Ok(Self {
            label,
            matrix,
            power,
            role,
        })
    }

    pub fn label(&self) -> &'static str {
        self.label
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn role(&self) -> Role {
        self.role
    }

    /// Symbol-vector length.
    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }

    /// `P_k A_k A_k^H`.
    pub fn covariance(&self) -> ComplexMatrix {
        self.matrix.gram().scale(self.power)
    }
}

/// Receive model `y = sum_k A_k s_k + n` with `n ~ CN(0, noise_variance I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    components: Vec<SignalComponent>,
    noise_variance: f64,
}

impl LinearModel {
    pub fn new(components: Vec<SignalComponent>, noise_variance: f64) -> Result<Self> {
        if !(noise_variance.is_finite() && noise_variance > 0.0) {
            return Err(Error::InvalidModel(format!(
                "noise variance must be positive, got {noise_variance}"
            )));
        }
        let Some(first) = components.first() else {
            return Err(Error::InvalidModel("no components".into()));
        };
        let rows = first.matrix.rows();
        if let Some(c) = components.iter().find(|c| c.matrix.rows() != rows) {
            return Err(Error::InvalidModel(format!(
                "component {} has {} rows, expected {rows}",
                c.label,
                c.matrix.rows()
            )));
        }
        if !components.iter().any(|c| c.role == Role::Useful) {
            return Err(Error::InvalidModel("no useful component".into()));
        }
        Ok(Self {
            components,
            noise_variance,
        })
    }

    pub fn components(&self) -> &[SignalComponent] {
        &self.components
    }

    pub fn component(&self, label: &str) -> Option<&SignalComponent> {
        self.components.iter().find(|c| c.label == label)
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    /// Number of scalar observations.
    pub fn observations(&self) -> usize {
        self.components[0].matrix.rows()
    }

    /// Copy of the model with the listed components re-tagged. Unlisted
    /// components keep their role.
    pub fn with_roles(&self, roles: &[(&str, Role)]) -> Result<Self> {
        for (label, _) in roles {
            if self.component(label).is_none() {
                return Err(Error::InvalidModel(format!("no component labelled {label}")));
            }
        }
        let components = self
            .components
            .iter()
            .map(|c| {
                let role = roles
                    .iter()
                    .find(|(l, _)| *l == c.label)
                    .map_or(c.role, |&(_, r)| r);
                SignalComponent { role, ..c.clone() }
            })
            .collect();
        Self::new(components, self.noise_variance)
    }

    /// `noise_variance I + sum of P_k A_k A_k^H` over components whose role
    /// passes `include`.
    fn covariance(&self, include: impl Fn(Role) -> bool) -> Result<ComplexMatrix> {
        let n = self.observations();
        self.components
            .iter()
            .filter(|c| include(c.role))
            .try_fold(
                ComplexMatrix::identity(n).scale(self.noise_variance),
                |acc, c| acc.add(&c.covariance()),
            )
    }
}

/// `I(useful; y | conditioned)` in bits for jointly Gaussian inputs.
pub fn gaussian_mi(model: &LinearModel) -> Result<f64> {
    let full = model.covariance(|r| r != Role::Conditioned)?;
    let cond = model.covariance(|r| r == Role::Nuisance)?;
    let mi = log_det_hermitian_psd(&full)? - log_det_hermitian_psd(&cond)?;
    if mi.is_nan() {
        return Err(Error::NonFinite);
    }
    if mi < -MI_CLAMP_BAND {
        return Err(Error::NegativeMutualInformation { value: mi });
    }
    Ok(mi.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_det_identity_and_diagonal() {
        assert_eq!(log_det_hermitian_psd(&ComplexMatrix::identity(3)).unwrap(), 0.0);
        let d = ComplexMatrix::from_real_rows(&[vec![2.0, 0.0], vec![0.0, 2.0]]).unwrap();
        assert!((log_det_hermitian_psd(&d).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn log_det_singular_is_neg_infinity() {
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(log_det_hermitian_psd(&m).unwrap(), f64::NEG_INFINITY);
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0)], vec![c(-0.5, 0.3)], vec![c(0.7, 0.0)]])
            .unwrap();
        assert_eq!(log_det_hermitian_psd(&a.gram()).unwrap(), f64::NEG_INFINITY);
        assert_eq!(
            log_det_hermitian_psd(&ComplexMatrix::zeros(2, 2)).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn log_det_rejects_bad_input() {
        assert!(matches!(
            log_det_hermitian_psd(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.5, 0.5)], vec![c(0.5, 0.5), c(1.0, 0.0)]])
            .unwrap();
        assert!(matches!(
            log_det_hermitian_psd(&m),
            Err(Error::NotHermitian { .. })
        ));
        let indefinite = ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(
            log_det_hermitian_psd(&indefinite),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
        let negative = ComplexMatrix::from_real_rows(&[vec![-1.0]]).unwrap();
        assert!(log_det_hermitian_psd(&negative).is_err());
    }

    #[test]
    fn matrix_construction_rejects_nan() {
        assert_eq!(
            ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
        assert_eq!(
            ComplexMatrix::new(1, 1, vec![c(0.0, f64::INFINITY)]),
            Err(Error::NonFinite)
        );
        assert!(ComplexMatrix::new(2, 2, vec![c(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn gram_is_exactly_hermitian() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.3, -1.2), c(2.0, 0.1)],
            vec![c(-0.7, 0.4), c(0.0, 1.0)],
            vec![c(1.1, 1.1), c(-0.2, -0.9)],
        ])
        .unwrap();
        assert_eq!(a.gram().hermitian_deviation(), 0.0);
        let direct = a.matmul(&a.adjoint()).unwrap();
        assert!(direct.add(&a.gram().scale(-1.0)).unwrap().max_abs() < 1e-14);
    }

    fn scalar_model(power: f64) -> LinearModel {
        let a = ComplexMatrix::from_real_rows(&[vec![1.0]]).unwrap();
        LinearModel::new(
            vec![SignalComponent::new("v", a, power, Role::Useful).unwrap()],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn scalar_mi_is_log_one_plus_snr() {
        assert!((gaussian_mi(&scalar_model(15.0)).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(gaussian_mi(&scalar_model(0.0)).unwrap(), 0.0);
    }

    #[test]
    fn zero_mixing_matrix_carries_nothing() {
        let v = SignalComponent::new("v", ComplexMatrix::zeros(2, 1), 1e6, Role::Useful).unwrap();
        let u = SignalComponent::new(
            "u",
            ComplexMatrix::from_rows(&[vec![c(1.0, 0.5)], vec![c(-2.0, 0.0)]]).unwrap(),
            100.0,
            Role::Nuisance,
        )
        .unwrap();
        let model = LinearModel::new(vec![v, u], 1.0).unwrap();
        assert_eq!(gaussian_mi(&model).unwrap(), 0.0);
    }

    #[test]
    fn conditioned_component_is_removed() {
        // y = v + w + n; knowing w leaves a clean scalar channel.
        let one = ComplexMatrix::from_real_rows(&[vec![1.0]]).unwrap();
        let model = LinearModel::new(
            vec![
                SignalComponent::new("v", one.clone(), 15.0, Role::Useful).unwrap(),
                SignalComponent::new("w", one, 1000.0, Role::Conditioned).unwrap(),
            ],
            1.0,
        )
        .unwrap();
        assert!((gaussian_mi(&model).unwrap() - 4.0).abs() < 1e-12);
        let as_noise = model.with_roles(&[("w", Role::Nuisance)]).unwrap();
        let expected = (1.0 + 15.0 / 1001.0_f64).log2();
        assert!((gaussian_mi(&as_noise).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn model_invariants_are_enforced() {
        let one = ComplexMatrix::from_real_rows(&[vec![1.0]]).unwrap();
        let two = ComplexMatrix::from_real_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let u = SignalComponent::new("u", one.clone(), 1.0, Role::Nuisance).unwrap();
        assert!(LinearModel::new(vec![u.clone()], 1.0).is_err());
        let v = SignalComponent::new("v", two, 1.0, Role::Useful).unwrap();
        assert!(LinearModel::new(vec![v.clone(), u], 1.0).is_err());
        assert!(LinearModel::new(vec![v.clone()], 0.0).is_err());
        assert!(SignalComponent::new("v", one, -1.0, Role::Useful).is_err());
        let m = LinearModel::new(vec![v], 1.0).unwrap();
        assert!(m.with_roles(&[("missing", Role::Nuisance)]).is_err());
        assert!(m.with_roles(&[("v", Role::Nuisance)]).is_err());
    }
}
