//! Truncated power series ("jets") with complex coefficients.
//!
//! A `Jet` of order `n` stores the Taylor coefficients `c[0..n]` of a function
//! about some expansion point; all arithmetic is truncated at `t^(n-1)`.
//! Used to extract high-order derivatives of the photon-counting generating
//! function exactly up to truncation.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    c: Vec<Complex64>,
}

impl Jet {
    pub fn zero(order: usize) -> Jet {
        assert!(order > 0, "jet order must be positive");
        Jet {
            c: vec![Complex64::new(0.0, 0.0); order],
        }
    }

    pub fn constant(value: Complex64, order: usize) -> Jet {
        let mut j = Jet::zero(order);
        j.c[0] = value;
        j
    }

    /// `value + t`: the independent variable expanded about `value`.
    pub fn variable(value: Complex64, order: usize) -> Jet {
        let mut j = Jet::constant(value, order);
        if order > 1 {
            j.c[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    /// Build from explicit coefficients, truncated or zero-padded to `order`.
    pub fn from_coeffs(coeffs: &[Complex64], order: usize) -> Jet {
        let mut j = Jet::zero(order);
        for (dst, src) in j.c.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.c.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.c.get(k).copied().unwrap_or_default()
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    pub fn scale(&self, s: Complex64) -> Jet {
        Jet {
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }

    /// Coefficient-wise conjugate. This is the series of the conjugate
    /// function when the expansion variable is real.
    pub fn conj(&self) -> Jet {
        Jet {
            c: self.c.iter().map(|x| x.conj()).collect(),
        }
    }

    /// Evaluate the truncated polynomial at `t`.
    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.c
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &x| acc * t + x)
    }

    /// Multiplicative inverse. Panics if the constant term is zero.
    pub fn recip(&self) -> Jet {
        let a0 = self.c[0];
        assert!(a0.norm() > 0.0, "reciprocal of a jet with zero constant term");
        let inv0 = a0.inv();
        let n = self.order();
        let mut r = vec![Complex64::new(0.0, 0.0); n];
        r[0] = inv0;
        for k in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.c[j] * r[k - j];
            }
            r[k] = -acc * inv0;
        }
        Jet { c: r }
    }

    pub fn div(&self, other: &Jet) -> Jet {
        self * &other.recip()
    }

    /// `exp(self)` via the recurrence `k f_k = sum_j j a_j f_{k-j}`.
    pub fn exp(&self) -> Jet {
        let n = self.order();
        let mut f = vec![Complex64::new(0.0, 0.0); n];
        f[0] = self.c[0].exp();
        for k in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.c[j] * f[k - j] * j as f64;
            }
            f[k] = acc / k as f64;
        }
        Jet { c: f }
    }

    /// Principal logarithm. Panics if the constant term is zero.
    pub fn ln(&self) -> Jet {
        let n = self.order();
        let a0 = self.c[0];
        assert!(a0.norm() > 0.0, "logarithm of a jet with zero constant term");
        let mut l = vec![Complex64::new(0.0, 0.0); n];
        l[0] = a0.ln();
        // a * l' = a'  =>  k a0 l_k = k a_k - sum_{j=1}^{k-1} j l_j a_{k-j}
        for k in 1..n {
            let mut acc = self.c[k] * k as f64;
            for j in 1..k {
                acc -= l[j] * self.c[k - j] * j as f64;
            }
            l[k] = acc / (a0 * k as f64);
        }
        Jet { c: l }
    }

    pub fn powf(&self, p: f64) -> Jet {
        self.ln().scale(Complex64::new(p, 0.0)).exp()
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.order(), rhs.order());
        Jet {
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        debug_assert_eq!(self.order(), rhs.order());
        Jet {
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.order();
        debug_assert_eq!(n, rhs.order());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, a) in self.c.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for (o, b) in out[i..].iter_mut().zip(&rhs.c) {
                *o += a * b;
            }
        }
        Jet { c: out }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        &self + &rhs
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        &self - &rhs
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        &self * &rhs
    }
}

/// Solve `A x = b` for a small dense matrix of jets by Gaussian elimination
/// with partial pivoting on the constant terms. Returns the solution and
/// `det(A)` as a jet, or `None` if a pivot's constant term vanishes.
pub fn solve_with_det(a: &[Vec<Jet>], b: &[Jet]) -> Option<(Vec<Jet>, Jet)> {
    let n = a.len();
    let order = b.first().map(Jet::order)?;
    let mut m: Vec<Vec<Jet>> = a.to_vec();
    let mut rhs: Vec<Jet> = b.to_vec();
    let mut det = Jet::constant(Complex64::new(1.0, 0.0), order);

    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| m[i][k].value().norm().total_cmp(&m[j][k].value().norm()))?;
        if m[piv][k].value().norm() == 0.0 {
            return None;
        }
        if piv != k {
            m.swap(piv, k);
            rhs.swap(piv, k);
            det = -&det;
        }
        det = &det * &m[k][k];
        let inv = m[k][k].recip();
        for i in (k + 1)..n {
            let l = &m[i][k] * &inv;
            for j in (k + 1)..n {
                let upd = &l * &m[k][j];
                m[i][j] = &m[i][j] - &upd;
            }
            let upd = &l * &rhs[k];
            rhs[i] = &rhs[i] - &upd;
        }
    }

    let mut x = vec![Jet::zero(order); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k].clone();
        for j in (k + 1)..n {
            let t = &m[k][j] * &x[j];
            acc = &acc - &t;
        }
        x[k] = acc.div(&m[k][k]);
    }
    Some((x, det))
}
