//! Brute-force truncated Fock-space evolution of small closed subsystems.
//!
//! The interaction-picture momentum operator with classical pumps is
//! `H = gS aV^+ aS^+ + gA aV aA^+ + kS aS1 aS2^+ + kA aA1 aA2^+ + h.c.`,
//! and states advance as `psi(z) = exp(i H z) psi(0)`. This is used only as
//! ground truth for the Gaussian pipeline.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{CouplerError, Result};
use crate::linalg::ZERO;
use crate::mode::{ModeId, ModeSelection};
use crate::model::CouplerParams;

pub const MAX_CUTOFF: usize = 16;
pub const MAX_DIM: usize = 200_000;
/// Boundary population above which a run is rejected.
pub const LEAK_LIMIT: f64 = 1e-4;
/// Thermal mixtures are truncated once the remaining mass drops below this.
pub const THERMAL_TAIL: f64 = 1e-8;

const KRYLOV_DIM: usize = 40;
const KRYLOV_STEP_NORM: f64 = 8.0;

const SUPPORTED: [&[ModeId]; 5] = [
    &[ModeId::S1, ModeId::V1],
    &[ModeId::A1, ModeId::V1],
    &[ModeId::S1, ModeId::A1, ModeId::V1],
    &[ModeId::S1, ModeId::V1, ModeId::S2, ModeId::V2],
    &[ModeId::A1, ModeId::V1, ModeId::A2, ModeId::V2],
];

/// A truncated subsystem: modes, per-mode maximum occupation and couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct FockConfig {
    modes: Vec<ModeId>,
    cutoff: usize,
    params: CouplerParams,
}

/// Two-mode coupling term `coef * op_i * op_j` with `true` meaning creator.
#[derive(Debug, Clone, Copy)]
struct Term {
    coef: Complex64,
    a: (ModeId, bool),
    b: (ModeId, bool),
}

fn terms(p: &CouplerParams) -> Vec<Term> {
    use ModeId::*;
    let t = |coef, a, b| Term { coef, a, b };
    vec![
        t(p.g_s1, (V1, true), (S1, true)),
        t(p.g_a1, (V1, false), (A1, true)),
        t(p.g_s2, (V2, true), (S2, true)),
        t(p.g_a2, (V2, false), (A2, true)),
        t(p.kappa_s, (S1, false), (S2, true)),
        t(p.kappa_a, (A1, false), (A2, true)),
    ]
}

impl FockConfig {
    pub fn new(modes: &[ModeId], cutoff: usize, params: &CouplerParams) -> Result<Self> {
        let mut sorted = modes.to_vec();
        sorted.sort();
        sorted.dedup();
        if !SUPPORTED.contains(&sorted.as_slice()) {
            return Err(CouplerError::Unsupported(format!(
                "Fock oracle subsystem {sorted:?} is not one of the supported closed subsystems"
            )));
        }
        if cutoff == 0 || cutoff > MAX_CUTOFF {
            return Err(CouplerError::Validation(format!(
                "cutoff {cutoff} outside 1..={MAX_CUTOFF}"
            )));
        }
        let dim = (cutoff + 1).checked_pow(sorted.len() as u32).unwrap_or(usize::MAX);
        if dim > MAX_DIM {
            return Err(CouplerError::Validation(format!(
                "Hilbert dimension {dim} exceeds {MAX_DIM}"
            )));
        }
        for t in terms(params) {
            if t.coef.norm() == 0.0 {
                continue;
            }
            let (ina, inb) = (sorted.contains(&t.a.0), sorted.contains(&t.b.0));
            if ina != inb {
                return Err(CouplerError::Validation(format!(
                    "coupling between {} and {} leaves the subsystem {sorted:?}",
                    t.a.0, t.b.0
                )));
            }
        }
        Ok(FockConfig {
            modes: sorted,
            cutoff,
            params: *params,
        })
    }

    pub fn modes(&self) -> &[ModeId] {
        &self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        (self.cutoff + 1).pow(self.modes.len() as u32)
    }

    fn position(&self, m: ModeId) -> Option<usize> {
        self.modes.iter().position(|&x| x == m)
    }

    /// Occupation numbers of a basis index (first mode most significant).
    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let base = self.cutoff + 1;
        let mut occ = vec![0; self.modes.len()];
        for o in occ.iter_mut().rev() {
            *o = index % base;
            index /= base;
        }
        occ
    }

    pub fn index(&self, occ: &[usize]) -> usize {
        occ.iter().fold(0, |acc, &n| acc * (self.cutoff + 1) + n)
    }
}

/// Hermitian operator in compressed-row form.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl SparseHamiltonian {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        let r = self.row_ptr[row]..self.row_ptr[row + 1];
        self.cols[r.clone()]
            .iter()
            .zip(&self.vals[r])
            .filter(|(c, _)| **c == col)
            .map(|(_, v)| *v)
            .sum()
    }

    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        for (row, out) in y.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *out = acc;
        }
    }

    /// Largest absolute row sum, an upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim)
            .map(|r| {
                self.vals[self.row_ptr[r]..self.row_ptr[r + 1]]
                    .iter()
                    .map(|v| v.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// `max |H_rc - conj(H_cr)|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[k];
                worst = worst.max((self.vals[k] - self.entry(c, r).conj()).norm());
            }
        }
        worst
    }
}

/// Position in the subsystem and whether the factor is a creator.
type Factor = (usize, bool);

pub fn build_hamiltonian(cfg: &FockConfig) -> SparseHamiltonian {
    let dim = cfg.dim();
    let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
    let active: Vec<(Complex64, Factor, Factor)> = terms(&cfg.params)
        .into_iter()
        .filter(|t| t.coef.norm() > 0.0)
        .filter_map(|t| {
            let pa = cfg.position(t.a.0)?;
            let pb = cfg.position(t.b.0)?;
            Some((t.coef, (pa, t.a.1), (pb, t.b.1)))
        })
        .flat_map(|(c, a, b)| [(c, a, b), (c.conj(), (a.0, !a.1), (b.0, !b.1))])
        .collect();
    for col in 0..dim {
        let occ = cfg.occupations(col);
        for &(coef, a, b) in &active {
            let mut out = occ.clone();
            let mut amp = 1.0;
            let mut ok = true;
            for (pos, create) in [a, b] {
                let n = out[pos];
                if create {
                    if n == cfg.cutoff {
                        ok = false;
                        break;
                    }
                    amp *= ((n + 1) as f64).sqrt();
                    out[pos] = n + 1;
                } else {
                    if n == 0 {
                        ok = false;
                        break;
                    }
                    amp *= (n as f64).sqrt();
                    out[pos] = n - 1;
                }
            }
            if ok {
                rows[cfg.index(&out)].push((col, coef * amp));
            }
        }
    }
    let mut row_ptr = Vec::with_capacity(dim + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    row_ptr.push(0);
    for mut r in rows {
        r.sort_by_key(|e| e.0);
        let mut last: Option<usize> = None;
        for (c, v) in r {
            if last == Some(c) {
                *vals.last_mut().expect("entry exists") += v;
            } else {
                cols.push(c);
                vals.push(v);
                last = Some(c);
            }
        }
        row_ptr.push(cols.len());
    }
    SparseHamiltonian {
        dim,
        row_ptr,
        cols,
        vals,
    }
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `exp(i H t) psi` by Lanczos with full reorthogonalisation and sub-stepping.
pub fn expm_action(h: &SparseHamiltonian, psi: &[Complex64], t: f64) -> Vec<Complex64> {
    let hn = h.norm_bound();
    let steps = ((hn * t.abs()) / KRYLOV_STEP_NORM).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let mut cur = psi.to_vec();
    for _ in 0..steps {
        cur = lanczos_step(h, &cur, dt, hn);
    }
    cur
}

fn lanczos_step(h: &SparseHamiltonian, psi: &[Complex64], dt: f64, hn: f64) -> Vec<Complex64> {
    let beta0 = norm(psi);
    if beta0 == 0.0 {
        return psi.to_vec();
    }
    let dim = psi.len();
    let mut basis: Vec<Vec<Complex64>> = vec![psi.iter().map(|x| x / beta0).collect()];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![ZERO; dim];
    let breakdown = 1e-13 * hn.max(1.0);
    for j in 0..KRYLOV_DIM.min(dim) {
        h.apply(&basis[j], &mut w);
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        for v in &basis {
            let proj = dot(v, &w);
            for (wi, vi) in w.iter_mut().zip(v) {
                *wi -= proj * vi;
            }
        }
        let b = norm(&w);
        if j + 1 == KRYLOV_DIM.min(dim) || b < breakdown {
            break;
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    // y = Q exp(i L dt) Q^T e1
    let mut y = vec![ZERO; m];
    for k in 0..m {
        let phase = Complex64::from_polar(eig.eigenvectors[(0, k)], eig.eigenvalues[k] * dt);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += phase * eig.eigenvectors[(i, k)];
        }
    }
    let mut out = vec![ZERO; dim];
    for (v, yi) in basis.iter().zip(&y) {
        let c = yi * beta0;
        for (o, vi) in out.iter_mut().zip(v) {
            *o += c * vi;
        }
    }
    out
}

/// Incident state of one mode of the subsystem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FockInput {
    Vacuum,
    Coherent(Complex64),
    /// Chaotic (thermal) state with the given mean occupation.
    Thermal(f64),
    Number(usize),
}

/// Weighted mixture of pure states.
#[derive(Debug, Clone)]
pub struct FockState {
    cfg: FockConfig,
    members: Vec<(f64, Vec<Complex64>)>,
}

/// Per-mode amplitude components of a product input: a list of
/// `(weight, amplitudes over 0..=cutoff)` alternatives.
fn mode_components(input: FockInput, cutoff: usize) -> Result<Vec<(f64, Vec<Complex64>)>> {
    let fock = |k: usize| {
        let mut v = vec![ZERO; cutoff + 1];
        v[k] = Complex64::new(1.0, 0.0);
        v
    };
    match input {
        FockInput::Vacuum => Ok(vec![(1.0, fock(0))]),
        FockInput::Number(k) if k <= cutoff => Ok(vec![(1.0, fock(k))]),
        FockInput::Number(k) => Err(CouplerError::Truncation(format!(
            "Fock input {k} above cutoff {cutoff}"
        ))),
        FockInput::Coherent(xi) => {
            let mut v = vec![ZERO; cutoff + 1];
            let mut amp = Complex64::new((-0.5 * xi.norm_sqr()).exp(), 0.0);
            for (n, vn) in v.iter_mut().enumerate() {
                if n > 0 {
                    amp *= xi / (n as f64).sqrt();
                }
                *vn = amp;
            }
            Ok(vec![(1.0, v)])
        }
        FockInput::Thermal(nbar) => {
            if !(nbar.is_finite() && nbar >= 0.0) {
                return Err(CouplerError::Validation(format!("thermal occupation {nbar}")));
            }
            let q = nbar / (nbar + 1.0);
            let mut out = Vec::new();
            let mut w = 1.0 / (nbar + 1.0);
            let mut mass = 0.0;
            let mut k = 0;
            while 1.0 - mass > THERMAL_TAIL && w > 0.0 {
                if k > cutoff {
                    return Err(CouplerError::Truncation(format!(
                        "thermal mass {:.2e} above cutoff {cutoff}",
                        1.0 - mass
                    )));
                }
                out.push((w, fock(k)));
                mass += w;
                w *= q;
                k += 1;
            }
            Ok(out)
        }
    }
}

pub fn initial_state(cfg: &FockConfig, inputs: &[FockInput]) -> Result<FockState> {
    if inputs.len() != cfg.modes.len() {
        return Err(CouplerError::Validation(format!(
            "{} inputs for {} modes",
            inputs.len(),
            cfg.modes.len()
        )));
    }
    let mut members: Vec<(f64, Vec<Complex64>)> = vec![(1.0, vec![Complex64::new(1.0, 0.0)])];
    for &inp in inputs {
        let comps = mode_components(inp, cfg.cutoff)?;
        let mut next = Vec::with_capacity(members.len() * comps.len());
        for (w, v) in &members {
            for (wc, vc) in &comps {
                let mut kron = Vec::with_capacity(v.len() * vc.len());
                for a in v {
                    kron.extend(vc.iter().map(|b| a * b));
                }
                next.push((w * wc, kron));
            }
        }
        members = next;
    }
    Ok(FockState {
        cfg: cfg.clone(),
        members,
    })
}

/// Evolve a product input over length `z`; rejects runs whose boundary
/// population exceeds [`LEAK_LIMIT`].
pub fn evolve_fock(cfg: &FockConfig, inputs: &[FockInput], z: f64) -> Result<FockState> {
    if !z.is_finite() {
        return Err(CouplerError::Numerical(format!("non-finite propagation length {z}")));
    }
    let init = initial_state(cfg, inputs)?;
    let h = build_hamiltonian(cfg);
    let members = init
        .members
        .par_iter()
        .map(|(w, psi)| (*w, expm_action(&h, psi, z)))
        .collect();
    let state = FockState {
        cfg: cfg.clone(),
        members,
    };
    let leak = state.leak();
    if leak > LEAK_LIMIT {
        return Err(CouplerError::Truncation(format!(
            "population {leak:.3e} at the cutoff {} (limit {LEAK_LIMIT:e}); raise the cutoff",
            cfg.cutoff
        )));
    }
    Ok(state)
}

/// Observables of a Fock-space state for one selection.
#[derive(Debug, Clone, PartialEq)]
pub struct FockStats {
    /// Distribution of the total occupation of the selected modes, over
    /// every occupation representable in the truncated space.
    pub p_n: Vec<f64>,
    /// Factorial moments `<W^k>` for `k = 0..=k_max`.
    pub moments: Vec<f64>,
    pub mean_w: f64,
    pub lambda: f64,
    pub var_p: f64,
    pub var_q: f64,
}

impl FockStats {
    /// `<:exp(-s W):> = sum_n p(n) (1 - s)^n`.
    pub fn generating_function(&self, s: f64) -> f64 {
        self.p_n.iter().rev().fold(0.0, |acc, p| acc * (1.0 - s) + p)
    }

    pub fn reduced_moment(&self, k: usize) -> f64 {
        self.moments[k] / self.mean_w.powi(k as i32) - 1.0
    }
}

impl FockState {
    pub fn config(&self) -> &FockConfig {
        &self.cfg
    }

    /// Total weight times squared norm.
    pub fn norm_sqr(&self) -> f64 {
        self.members.iter().map(|(w, v)| w * norm(v).powi(2)).sum()
    }

    /// Largest marginal population at the cutoff level of any mode.
    pub fn leak(&self) -> f64 {
        let c = &self.cfg;
        let mut per_mode = vec![0.0; c.modes.len()];
        for (w, v) in &self.members {
            for (i, a) in v.iter().enumerate() {
                let p = w * a.norm_sqr();
                if p == 0.0 {
                    continue;
                }
                for (m, n) in c.occupations(i).into_iter().enumerate() {
                    if n == c.cutoff {
                        per_mode[m] += p;
                    }
                }
            }
        }
        per_mode.into_iter().fold(0.0, f64::max)
    }

    pub fn mean_number(&self, m: ModeId) -> Result<f64> {
        let pos = self
            .cfg
            .position(m)
            .ok_or_else(|| CouplerError::Validation(format!("mode {m} not in the subsystem")))?;
        Ok(self
            .members
            .iter()
            .map(|(w, v)| {
                w * v
                    .iter()
                    .enumerate()
                    .map(|(i, a)| a.norm_sqr() * self.cfg.occupations(i)[pos] as f64)
                    .sum::<f64>()
            })
            .sum())
    }

    /// Apply the summed annihilator of the given mode positions.
    fn lower(&self, v: &[Complex64], positions: &[usize]) -> Vec<Complex64> {
        let mut out = vec![ZERO; v.len()];
        for (i, a) in v.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let occ = self.cfg.occupations(i);
            for &p in positions {
                if occ[p] > 0 {
                    let mut o = occ.clone();
                    o[p] -= 1;
                    out[self.cfg.index(&o)] += a * (occ[p] as f64).sqrt();
                }
            }
        }
        out
    }
}

pub fn fock_statistics(state: &FockState, sel: ModeSelection, k_max: usize) -> Result<FockStats> {
    let positions: Vec<usize> = sel
        .modes()
        .iter()
        .map(|&m| {
            state
                .cfg
                .position(m)
                .ok_or_else(|| CouplerError::Validation(format!("mode {m} not in the subsystem")))
        })
        .collect::<Result<_>>()?;
    let max_n = state.cfg.cutoff * positions.len();
    let mut p_n = vec![0.0; max_n + 1];
    let (mut a1, mut a2, mut ada) = (ZERO, ZERO, 0.0);
    for (w, v) in &state.members {
        for (i, a) in v.iter().enumerate() {
            let occ = state.cfg.occupations(i);
            let n: usize = positions.iter().map(|&p| occ[p]).sum();
            p_n[n] += w * a.norm_sqr();
        }
        let av = state.lower(v, &positions);
        let aav = state.lower(&av, &positions);
        a1 += dot(v, &av) * *w;
        a2 += dot(v, &aav) * *w;
        ada += w * norm(&av).powi(2);
    }
    let moments: Vec<f64> = (0..=k_max)
        .map(|k| {
            p_n.iter()
                .enumerate()
                .map(|(n, p)| p * (0..k).map(|j| n as f64 - j as f64).product::<f64>())
                .sum()
        })
        .collect();
    let dn = ada - a1.norm_sqr();
    let dm = a2 - a1 * a1;
    let vac = sel.vacuum_level();
    Ok(FockStats {
        mean_w: moments.get(1).copied().unwrap_or(0.0),
        p_n,
        moments,
        lambda: vac + 2.0 * dn - 2.0 * dm.norm(),
        var_p: vac + 2.0 * dn + 2.0 * dm.re,
        var_q: vac + 2.0 * dn - 2.0 * dm.re,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ModeId::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn stokes(g: f64) -> CouplerParams {
        CouplerParams {
            g_s1: c(g, 0.0),
            ..Default::default()
        }
    }

    #[test]
    fn unsupported_subsystems_rejected() {
        assert!(FockConfig::new(&[S1, A1], 4, &CouplerParams::default()).is_err());
        assert!(FockConfig::new(&[S1, V1], 17, &CouplerParams::default()).is_err());
        // kappa_S couples S1 to S2, which is outside {S1, V1}
        let p = CouplerParams {
            kappa_s: c(1.0, 0.0),
            ..Default::default()
        };
        assert!(FockConfig::new(&[S1, V1], 4, &p).is_err());
        assert!(FockConfig::new(&[S1, V1, S2, V2], 4, &p).is_ok());
    }

    #[test]
    fn no_couplings_give_zero_operator() {
        let cfg = FockConfig::new(&[S1, A1, V1], 3, &CouplerParams::default()).unwrap();
        assert_eq!(build_hamiltonian(&cfg).nnz(), 0);
    }

    #[test]
    fn two_mode_squeezing_element() {
        let cfg = FockConfig::new(&[S1, V1], 1, &stokes(1.0)).unwrap();
        let h = build_hamiltonian(&cfg);
        assert_eq!(h.entry(cfg.index(&[1, 1]), cfg.index(&[0, 0])), c(1.0, 0.0));
        assert_eq!(h.hermiticity_residual(), 0.0);
    }

    #[test]
    fn hermitian_with_complex_couplings() {
        let p = CouplerParams {
            g_s1: c(0.3, 0.2),
            g_s2: c(-0.1, 0.5),
            kappa_s: c(0.7, -0.4),
            ..Default::default()
        };
        let cfg = FockConfig::new(&[S1, V1, S2, V2], 3, &p).unwrap();
        assert_eq!(build_hamiltonian(&cfg).hermiticity_residual(), 0.0);
    }

    #[test]
    fn zero_length_leaves_state() {
        let cfg = FockConfig::new(&[S1, V1], 8, &stokes(0.3)).unwrap();
        let inputs = [FockInput::Coherent(c(0.5, 0.0)), FockInput::Vacuum];
        let a = initial_state(&cfg, &inputs).unwrap();
        let b = evolve_fock(&cfg, &inputs, 0.0).unwrap();
        for ((_, x), (_, y)) in a.members.iter().zip(&b.members) {
            assert!(x.iter().zip(y).all(|(p, q)| (p - q).norm() < 1e-15));
        }
    }

    #[test]
    fn stokes_vacuum_mean_number() {
        let cfg = FockConfig::new(&[S1, V1], 12, &stokes(0.3)).unwrap();
        let s = evolve_fock(&cfg, &[FockInput::Vacuum, FockInput::Vacuum], 0.5).unwrap();
        assert!((s.mean_number(S1).unwrap() - 0.15f64.sinh().powi(2)).abs() < 1e-5);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        let st = fock_statistics(&s, "S1V1".parse().unwrap(), 2).unwrap();
        assert!((st.lambda - 2.0 * (-0.3f64).exp()).abs() < 2e-4);
        assert!((st.lambda - 1.48164).abs() < 2e-4);
    }

    #[test]
    fn anti_stokes_beam_splitter() {
        let p = CouplerParams {
            g_a1: c(0.6, 0.0),
            ..Default::default()
        };
        let cfg = FockConfig::new(&[A1, V1], 6, &p).unwrap();
        let s = evolve_fock(&cfg, &[FockInput::Vacuum, FockInput::Number(1)], 0.5).unwrap();
        assert!((s.mean_number(A1).unwrap() - 0.3f64.sin().powi(2)).abs() < 1e-12);
        assert!((s.mean_number(A1).unwrap() - 0.087332).abs() < 1e-6);
    }

    #[test]
    fn vacuum_and_coherent_statistics() {
        let cfg = FockConfig::new(&[S1, V1], 12, &CouplerParams::default()).unwrap();
        let s = initial_state(&cfg, &[FockInput::Vacuum, FockInput::Vacuum]).unwrap();
        let st = fock_statistics(&s, "S1".parse().unwrap(), 2).unwrap();
        assert_eq!(st.p_n[0], 1.0);
        assert_eq!(st.lambda, 1.0);

        let s = initial_state(&cfg, &[FockInput::Coherent(c(0.5, 0.0)), FockInput::Vacuum]).unwrap();
        let st = fock_statistics(&s, "S1".parse().unwrap(), 2).unwrap();
        let mut poisson = (-0.25f64).exp();
        for n in 0..=12 {
            if n > 0 {
                poisson *= 0.25 / n as f64;
            }
            assert!((st.p_n[n] - poisson).abs() < 1e-10);
        }
    }

    #[test]
    fn thermal_mixture() {
        let cfg = FockConfig::new(&[A1, V1], 16, &CouplerParams::default()).unwrap();
        let s = initial_state(&cfg, &[FockInput::Vacuum, FockInput::Thermal(0.1)]).unwrap();
        assert!((s.mean_number(V1).unwrap() - 0.1).abs() < 1e-6);
        assert!(initial_state(&cfg, &[FockInput::Vacuum, FockInput::Thermal(5.0)]).is_err());
    }

    #[test]
    fn conservation_in_oracle() {
        let p = CouplerParams {
            g_s1: c(0.3, 0.1),
            g_a1: c(0.6, -0.2),
            ..Default::default()
        };
        let cfg = FockConfig::new(&[S1, A1, V1], 10, &p).unwrap();
        let inputs = [
            FockInput::Coherent(c(0.3, 0.2)),
            FockInput::Coherent(c(-0.2, 0.4)),
            FockInput::Thermal(0.1),
        ];
        let q = |s: &FockState| s.mean_number(V1).unwrap() + s.mean_number(A1).unwrap() - s.mean_number(S1).unwrap();
        let q0 = q(&initial_state(&cfg, &inputs).unwrap());
        for &z in &[0.25, 0.5, 1.0] {
            let s = evolve_fock(&cfg, &inputs, z).unwrap();
            assert!((q(&s) - q0).abs() < 1e-8);
            assert!((s.norm_sqr() - initial_state(&cfg, &inputs).unwrap().norm_sqr()).abs() < 1e-10);
        }
    }

    #[test]
    fn truncation_detected() {
        let cfg = FockConfig::new(&[S1, V1], 2, &stokes(1.0)).unwrap();
        assert!(matches!(
            evolve_fock(&cfg, &[FockInput::Vacuum, FockInput::Vacuum], 2.0),
            Err(CouplerError::Truncation(_))
        ));
    }
}
