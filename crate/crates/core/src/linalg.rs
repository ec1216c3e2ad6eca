//! Dense complex linear algebra used by the propagators: matrix exponential by
//! eigendecomposition with a scaling-and-squaring Padé fallback.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use crate::error::{CouplerError, Result};

pub type CMat = DMatrix<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Eigenvector matrices with a condition number at or above this are not
/// trusted for exponentiation.
pub const EIGEN_COND_LIMIT: f64 = 1e8;

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

pub fn norm1(m: &CMat) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Which route a [`MatrixExponential`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpmRoute {
    Eigen,
    Pade,
}

/// `exp(A t)` for a fixed generator `A` and arbitrary real `t`.
///
/// The generator is diagonalised once (complex Schur form followed by
/// triangular back-substitution for the eigenvectors). When the eigenvector
/// matrix is ill-conditioned (defective or nearly defective generators) every
/// evaluation falls back to scaling-and-squaring with a degree-13 Padé
/// approximant.
#[derive(Debug, Clone)]
pub struct MatrixExponential {
    generator: CMat,
    eigen: Option<EigenSystem>,
    cond: f64,
}

#[derive(Debug, Clone)]
struct EigenSystem {
    values: DVector<Complex64>,
    vectors: CMat,
    inverse: CMat,
}

impl MatrixExponential {
    pub fn new(generator: CMat) -> Result<Self> {
        if !generator.is_square() {
            return Err(CouplerError::Numerical("generator must be square".into()));
        }
        if generator.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(CouplerError::Numerical("generator has non-finite entries".into()));
        }
        let (eigen, cond) = match eigensystem(&generator) {
            Some(es) => {
                let cond = norm1(&es.vectors) * norm1(&es.inverse);
                if cond.is_finite() && cond < EIGEN_COND_LIMIT {
                    (Some(es), cond)
                } else {
                    (None, cond)
                }
            }
            None => (None, f64::INFINITY),
        };
        Ok(MatrixExponential { generator, eigen, cond })
    }

    pub fn route(&self) -> ExpmRoute {
        if self.eigen.is_some() {
            ExpmRoute::Eigen
        } else {
            ExpmRoute::Pade
        }
    }

    /// 1-norm condition number of the eigenvector matrix (infinite if the
    /// decomposition failed).
    pub fn eigen_condition(&self) -> f64 {
        self.cond
    }

    pub fn generator(&self) -> &CMat {
        &self.generator
    }

    pub fn eval(&self, t: f64) -> Result<CMat> {
        if !t.is_finite() {
            return Err(CouplerError::Numerical(format!("non-finite propagation length {t}")));
        }
        let out = match &self.eigen {
            Some(es) => {
                let n = es.values.len();
                let mut scaled = es.vectors.clone();
                for j in 0..n {
                    let f = (es.values[j] * t).exp();
                    for i in 0..n {
                        scaled[(i, j)] *= f;
                    }
                }
                scaled * &es.inverse
            }
            None => expm_pade(&(&self.generator * Complex64::new(t, 0.0)))?,
        };
        if out.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(CouplerError::Numerical(format!(
                "matrix exponential overflowed at t = {t} (route {:?}, eigenvector condition {:.3e})",
                self.route(),
                self.cond
            )));
        }
        Ok(out)
    }
}

fn eigensystem(a: &CMat) -> Option<EigenSystem> {
    let n = a.nrows();
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 10_000)?;
    let (q, t) = schur.unpack();
    let scale = max_abs(&t).max(f64::MIN_POSITIVE);
    let small = f64::EPSILON * scale;

    // Eigenvectors of the upper-triangular factor by back-substitution.
    let mut y = CMat::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = ONE;
        for i in (0..k).rev() {
            let mut acc = ZERO;
            for m in (i + 1)..=k {
                acc += t[(i, m)] * y[(m, k)];
            }
            let mut d = t[(i, i)] - lambda;
            if d.norm() < small {
                d = Complex64::new(small, 0.0);
            }
            y[(i, k)] = -acc / d;
        }
    }
    let mut vectors = q * y;
    for j in 0..n {
        let nrm = vectors.column(j).norm();
        if nrm == 0.0 || !nrm.is_finite() {
            return None;
        }
        vectors.column_mut(j).unscale_mut(nrm);
    }
    let inverse = vectors.clone().try_inverse()?;
    let values = DVector::from_iterator(n, (0..n).map(|k| t[(k, k)]));
    Some(EigenSystem {
        values,
        vectors,
        inverse,
    })
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Scaling-and-squaring matrix exponential with the degree-13 Padé approximant.
pub fn expm_pade(a: &CMat) -> Result<CMat> {
    const THETA13: f64 = 5.371920351148152;
    let n = a.nrows();
    let id = CMat::identity(n, n);
    let nrm = norm1(a);
    let s = if nrm > THETA13 {
        (nrm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = a * Complex64::new(2f64.powi(-s), 0.0);
    let b = |k: usize| Complex64::new(PADE13[k], 0.0);

    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * b(13) + &a4 * b(11) + &a2 * b(9);
    let u = &a * (&a6 * u_inner + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1));
    let v_inner = &a6 * b(12) + &a4 * b(10) + &a2 * b(8);
    let v = &a6 * v_inner + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or_else(|| CouplerError::Numerical("singular Padé denominator".into()))?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}
