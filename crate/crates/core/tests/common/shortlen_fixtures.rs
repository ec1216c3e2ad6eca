//! Hand-written short-length closed forms, compared coefficient by coefficient
//! against statistics composed from the generic machinery.
//!
//! Every closed form lives here and nowhere in the library. Each line is a
//! polynomial in `z` truncated after `z^2`; the composed statistic is an
//! exact polynomial (variances) or exact for `z > 0` (principal squeeze
//! variances), so its low-order coefficients can be recovered by
//! interpolation and compared directly.

use coupler::gaussian_stats::{intensity_variance, principal_squeeze};
use coupler::model::CMat6;
use coupler::shortlen::{shortlen_mean_amplitudes, shortlen_series, ShortlenCoefficients, ShortlenSeries};
use coupler::{validate_params, CouplerParams, GaussianState, ModeId, ModeSelection, ValidatedParams};
use num_complex::Complex64;

use super::{c, coefficient_mismatch, poly_coefficients};
use ModeId::*;

pub const COEFF_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub params: CouplerParams,
    pub xi: [Complex64; 6],
    pub n_v1: f64,
    pub n_v2: f64,
}

fn general_params() -> CouplerParams {
    CouplerParams {
        g_s1: c(1.0, 0.3),
        g_a1: c(2.0, -0.4),
        g_s2: c(0.7, 0.2),
        g_a2: c(-1.1, 0.9),
        kappa_s: c(0.5, 1.5),
        kappa_a: c(-0.8, 0.3),
        ..Default::default()
    }
}

/// All modes coherent.
pub fn brillouin() -> Fixture {
    Fixture {
        params: general_params(),
        xi: [
            c(1.2, -0.5),
            c(-0.3, 0.9),
            c(0.6, 0.4),
            c(-0.7, -1.1),
            c(0.5, 0.2),
            c(0.9, -0.6),
        ],
        n_v1: 0.0,
        n_v2: 0.0,
    }
}

/// Coherent light, chaotic phonons.
pub fn raman() -> Fixture {
    Fixture {
        params: general_params(),
        xi: [
            c(1.2, -0.5),
            c(-0.3, 0.9),
            c(0.0, 0.0),
            c(-0.7, -1.1),
            c(0.5, 0.2),
            c(0.0, 0.0),
        ],
        n_v1: 0.3,
        n_v2: 0.7,
    }
}

impl Fixture {
    pub fn validated(&self) -> ValidatedParams {
        validate_params(&self.params).expect("fixture parameters are valid")
    }

    pub fn series(&self) -> ShortlenSeries {
        shortlen_series(&self.validated(), self.n_v1, self.n_v2).expect("non-negative noise")
    }

    pub fn state(&self, z: f64) -> GaussianState {
        let p = self.validated();
        self.series()
            .at(z)
            .with_means(shortlen_mean_amplitudes(&p, &self.xi, z))
    }

    /// `z^0..z^2` coefficients of the composed integrated-intensity variance.
    pub fn variance_coefficients(&self, sel: ModeSelection) -> Vec<f64> {
        let series = self.series();
        let p = self.validated();
        let f = |z: f64| intensity_variance(&series.at(z).with_means(shortlen_mean_amplitudes(&p, &self.xi, z)), sel);
        poly_coefficients(f, 8, -0.1, 0.1)
    }

    /// `z^0..z^4` coefficients of the composed principal squeeze variance on `z > 0`.
    pub fn lambda_coefficients(&self, sel: ModeSelection) -> Vec<f64> {
        let series = self.series();
        let f = |z: f64| principal_squeeze(&series.at(z).with_means(self.xi), sel);
        poly_coefficients(f, 4, 0.0, 0.1)
    }

    /// Composed noise coefficients of `z^k` alone.
    pub fn coefficient_term(&self, k: usize) -> ShortlenCoefficients {
        let s = self.series();
        let zero = [CMat6::zeros(); 3];
        let mut only = ShortlenSeries {
            normal: zero,
            anomalous: zero,
        };
        only.normal[k] = s.normal[k];
        only.anomalous[k] = s.anomalous[k];
        only.at(1.0)
    }
}

/// One closed-form line with its composed counterpart.
#[derive(Debug, Clone)]
pub struct Line {
    pub label: String,
    pub got: Vec<f64>,
    pub want: Vec<f64>,
}

impl Line {
    /// Mismatch of the `z^0..z^2` coefficients.
    pub fn mismatch(&self) -> f64 {
        coefficient_mismatch(&self.got[..3], &self.want)
    }

    /// Size of the composed coefficients beyond `z^2` where they must vanish.
    pub fn residual_higher_order(&self) -> f64 {
        self.got[3..].iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn passed(&self) -> bool {
        self.mismatch() < COEFF_TOL
    }
}

fn pair(a: ModeId, b: ModeId) -> ModeSelection {
    ModeSelection::compound(a, b).unwrap()
}

fn var_line(f: &Fixture, label: &str, sel: ModeSelection, want: [f64; 3]) -> Line {
    Line {
        label: label.to_string(),
        got: f.variance_coefficients(sel),
        want: want.to_vec(),
    }
}

fn lambda_line(f: &Fixture, label: &str, sel: ModeSelection, want: [f64; 3]) -> Line {
    Line {
        label: label.to_string(),
        got: f.lambda_coefficients(sel),
        want: want.to_vec(),
    }
}

struct Sym {
    gs: Complex64,
    ga: Complex64,
    gs2: Complex64,
    ga2: Complex64,
    ks: Complex64,
    ka: Complex64,
    xs: Complex64,
    xa: Complex64,
    xv: Complex64,
    xs2: Complex64,
    xv2: Complex64,
    n: f64,
    n2: f64,
}

fn sym(f: &Fixture) -> Sym {
    let p = &f.params;
    Sym {
        gs: p.g_s1,
        ga: p.g_a1,
        gs2: p.g_s2,
        ga2: p.g_a2,
        ks: p.kappa_s,
        ka: p.kappa_a,
        xs: f.xi[0],
        xa: f.xi[1],
        xv: f.xi[2],
        xs2: f.xi[3],
        xv2: f.xi[5],
        n: f.n_v1,
        n2: f.n_v2,
    }
}

/// `x + c.c.`
fn cc(x: Complex64) -> f64 {
    2.0 * x.re
}

/// Variance lines for all-coherent inputs.
pub fn brillouin_variance_lines() -> Vec<Line> {
    let f = brillouin();
    let s = sym(&f);
    let a = s.gs.norm_sqr();
    vec![
        var_line(
            &f,
            "Brillouin var W(S1)",
            ModeSelection::Single(S1),
            [0.0, 0.0, 2.0 * a * s.xs.norm_sqr()],
        ),
        var_line(&f, "Brillouin var W(A1)", ModeSelection::Single(A1), [0.0, 0.0, 0.0]),
        var_line(
            &f,
            "Brillouin var W(V1)",
            ModeSelection::Single(V1),
            [0.0, 0.0, 2.0 * a * s.xv.norm_sqr()],
        ),
        var_line(
            &f,
            "Brillouin var W(S1,A1)",
            pair(S1, A1),
            [
                0.0,
                0.0,
                2.0 * a * s.xs.norm_sqr() - cc(s.ga * s.gs * s.xs.conj() * s.xa.conj()),
            ],
        ),
        var_line(
            &f,
            "Brillouin var W(S1,V1)",
            pair(S1, V1),
            [
                0.0,
                2.0 * cc(Complex64::i() * s.gs * s.xs.conj() * s.xv.conj()),
                2.0 * (a * (1.0 + 3.0 * s.xs.norm_sqr() + 3.0 * s.xv.norm_sqr())
                    + cc(s.gs * s.ga * s.xa.conj() * s.xs.conj())
                    + cc(s.gs * s.ks * s.xs2.conj() * s.xv.conj())),
            ],
        ),
        var_line(
            &f,
            "Brillouin var W(S1,V2)",
            pair(S1, V2),
            [
                0.0,
                0.0,
                2.0 * a * s.xs.norm_sqr() + 2.0 * s.gs2.norm_sqr() * s.xv2.norm_sqr()
                    - cc(s.gs2 * s.ks.conj() * s.xs.conj() * s.xv2.conj()),
            ],
        ),
    ]
}

/// Principal squeeze variance lines for all-coherent inputs. The `(S1,V1)`
/// line carries the composed `z^2` coefficient `2 * 2|gS1|^2`; see
/// [`brillouin_lambda_s1v1_as_printed`] for the printed closed form.
pub fn brillouin_lambda_lines() -> Vec<Line> {
    let f = brillouin();
    let s = sym(&f);
    let (gs, ga, gs2, ks) = (s.gs.norm(), s.ga.norm(), s.gs2.norm(), s.ks.norm());
    vec![
        lambda_line(
            &f,
            "Brillouin lambda(S1,A1)",
            pair(S1, A1),
            [2.0, 0.0, 2.0 * gs * (gs - ga)],
        ),
        lambda_line(
            &f,
            "Brillouin lambda(S1,V1), composed form",
            pair(S1, V1),
            [2.0, -4.0 * gs, 4.0 * gs * gs],
        ),
        lambda_line(
            &f,
            "Brillouin lambda(S1,V2)",
            pair(S1, V2),
            [2.0, 0.0, 2.0 * (gs * gs + gs2 * gs2) - 2.0 * gs2 * ks],
        ),
    ]
}

/// The `(S1,V1)` squeeze line as printed, with `z^2` coefficient `2|gS1|^2`.
/// Disagrees with the composition and with the exact `2 exp(-2|gS1| z)`.
pub fn brillouin_lambda_s1v1_as_printed() -> Line {
    let f = brillouin();
    let gs = f.params.g_s1.norm();
    lambda_line(
        &f,
        "Brillouin lambda(S1,V1), as printed",
        pair(S1, V1),
        [2.0, -4.0 * gs, 2.0 * gs * gs],
    )
}

/// `z^2` coefficient of the single-mode `V1` variance with chaotic phonons,
/// all terms carrying `z^2`.
fn raman_v1_z2(s: &Sym) -> f64 {
    let (a, b, n) = (s.gs.norm_sqr(), s.ga.norm_sqr(), s.n);
    2.0 * a * n * (s.xs.norm_sqr() + n + 1.0)
        + 2.0 * b * n * (s.xa.norm_sqr() - n)
        + cc(2.0 * s.ga.conj() * s.gs.conj() * s.xs * s.xa * n)
}

/// Variance lines with chaotic phonons, transcribed as printed.
pub fn raman_variance_lines_as_printed() -> Vec<Line> {
    let f = raman();
    let s = sym(&f);
    let (a, b, n) = (s.gs.norm_sqr(), s.ga.norm_sqr(), s.n);
    let cross = s.ga * s.gs * s.xs.conj() * s.xa.conj();
    vec![
        var_line(
            &f,
            "Raman var W(S1)",
            ModeSelection::Single(S1),
            [0.0, 0.0, 2.0 * a * (n + 1.0) * s.xs.norm_sqr()],
        ),
        var_line(
            &f,
            "Raman var W(A1)",
            ModeSelection::Single(A1),
            [0.0, 0.0, 2.0 * b * n * s.xa.norm_sqr()],
        ),
        // the conjugate pair is printed without a factor z^2
        var_line(
            &f,
            "Raman var W(V1), as printed",
            ModeSelection::Single(V1),
            [
                n * n + cc(2.0 * s.ga.conj() * s.gs.conj() * s.xs * s.xa * n),
                0.0,
                2.0 * a * n * (s.xs.norm_sqr() + n + 1.0) + 2.0 * b * n * (s.xa.norm_sqr() - n),
            ],
        ),
        var_line(
            &f,
            "Raman var W(S1,A1)",
            pair(S1, A1),
            [
                0.0,
                0.0,
                2.0 * a * (n + 1.0) * s.xs.norm_sqr() + 2.0 * b * n * s.xa.norm_sqr() - cc((2.0 * n + 1.0) * cross),
            ],
        ),
        var_line(
            &f,
            "Raman var W(S1,V1), as printed",
            pair(S1, V1),
            [
                n * n,
                0.0,
                2.0 * a * (3.0 * s.xs.norm_sqr() + n + 1.0) * (n + 1.0) + cc(2.0 * (n + 1.0) * cross),
            ],
        ),
        var_line(
            &f,
            "Raman var W(A1,V1), as printed",
            pair(A1, V1),
            [n * n, 0.0, 2.0 * b * n * (n - s.xa.norm_sqr()) - cc(2.0 * n * cross)],
        ),
    ]
}

/// The three `V1`-bearing lines with the single-mode `V1` contribution
/// completed to order `z^2`.
pub fn raman_variance_lines_corrected() -> Vec<Line> {
    let f = raman();
    let s = sym(&f);
    let (a, b, n) = (s.gs.norm_sqr(), s.ga.norm_sqr(), s.n);
    let cross = s.ga * s.gs * s.xs.conj() * s.xa.conj();
    let v1 = raman_v1_z2(&s);
    vec![
        var_line(
            &f,
            "Raman var W(V1), completed",
            ModeSelection::Single(V1),
            [n * n, 0.0, v1],
        ),
        var_line(
            &f,
            "Raman var W(S1,V1), completed",
            pair(S1, V1),
            [
                n * n,
                0.0,
                2.0 * a * (3.0 * s.xs.norm_sqr() + n + 1.0) * (n + 1.0) + cc(2.0 * (n + 1.0) * cross) + v1,
            ],
        ),
        var_line(
            &f,
            "Raman var W(A1,V1), completed",
            pair(A1, V1),
            [
                n * n,
                0.0,
                2.0 * b * n * (n - s.xa.norm_sqr()) - cc(2.0 * n * cross) + v1,
            ],
        ),
    ]
}

fn raman_lambda_a1v2(f: &Fixture, label: &str, kappa_weight: f64) -> Line {
    let s = sym(f);
    let (n, n2) = (s.n, s.n2);
    lambda_line(
        f,
        label,
        pair(A1, V2),
        [
            2.0 * (1.0 + n2),
            0.0,
            2.0 * (s.gs2.norm_sqr() * (n2 + 1.0) + s.ga.norm_sqr() * n
                - s.ga2.norm_sqr() * n2
                - kappa_weight * cc(s.ga2.conj() * s.ka * n2)),
        ],
    )
}

/// Principal squeeze variance lines with chaotic phonons, as printed.
pub fn raman_lambda_lines_as_printed() -> Vec<Line> {
    let f = raman();
    let s = sym(&f);
    let (a, b, n, n2) = (s.gs.norm_sqr(), s.ga.norm_sqr(), s.n, s.n2);
    let (gs, ga) = (s.gs.norm(), s.ga.norm());
    vec![
        lambda_line(
            &f,
            "Raman lambda(S1,A1)",
            pair(S1, A1),
            [2.0, 0.0, 2.0 * (a * (n + 1.0) + b * n - ga * gs * (1.0 + 2.0 * n))],
        ),
        lambda_line(
            &f,
            "Raman lambda(S1,V1)",
            pair(S1, V1),
            [
                2.0 * (1.0 + n),
                -4.0 * gs * (n + 1.0),
                2.0 * (2.0 * a * (n + 1.0) - b * n),
            ],
        ),
        lambda_line(
            &f,
            "Raman lambda(A1,V1)",
            pair(A1, V1),
            [
                2.0 * (1.0 + n),
                -2.0 * cc(Complex64::i() * s.ga.conj() * n),
                2.0 * a * (n + 1.0),
            ],
        ),
        lambda_line(
            &f,
            "Raman lambda(S1,V2)",
            pair(S1, V2),
            [
                2.0 * (1.0 + n2),
                0.0,
                2.0 * (a * (n + 1.0) + s.gs2.norm_sqr() * (n2 + 1.0)
                    - s.ga2.norm_sqr() * n2
                    - s.gs2.norm() * s.ks.norm() * (n2 + 1.0)),
            ],
        ),
        raman_lambda_a1v2(&f, "Raman lambda(A1,V2), as printed", 1.0),
    ]
}

/// The `(A1,V2)` line with the anti-Stokes coupling term halved, matching
/// the noise coefficient `Dbar_A1V2 = gA2^* kappaA nV2 z^2 / 2`.
pub fn raman_lambda_a1v2_corrected() -> Line {
    raman_lambda_a1v2(&raman(), "Raman lambda(A1,V2), halved coupling term", 0.5)
}

/// Expected noise coefficients as `z^0..z^2` polynomials.
pub struct CoefficientSet {
    pub b: [[f64; 6]; 3],
    pub d: [CMat6; 3],
    pub dbar: [CMat6; 3],
}

enum Kind {
    B,
    D,
    Dbar,
}

type Entry = (Kind, ModeId, ModeId, [Complex64; 3]);

/// Waveguide-1 entries listed for chaotic phonons; with zero occupations
/// they reduce to the all-coherent list.
fn raman_entries(p: &CouplerParams, n: f64, n2: f64) -> Vec<Entry> {
    let z = c(0.0, 0.0);
    let r = |x: f64| c(x, 0.0);
    let (a, b) = (p.g_s1.norm_sqr(), p.g_a1.norm_sqr());
    let i = Complex64::i();
    vec![
        (Kind::B, S1, S1, [z, z, r(a * (n + 1.0))]),
        (Kind::B, A1, A1, [z, z, r(b * n)]),
        (Kind::B, V1, V1, [r(n), z, r(a * (n + 1.0) - b * n)]),
        (Kind::D, S1, A1, [z, z, -p.g_s1 * p.g_a1 * (n + 0.5)]),
        (Kind::D, S1, V1, [z, i * p.g_s1 * (n + 1.0), z]),
        (Kind::D, S1, V2, [z, z, -p.g_s2 * p.kappa_s.conj() * (n2 + 1.0) / 2.0]),
        (Kind::Dbar, A1, V1, [z, i * p.g_a1.conj() * n, z]),
        (Kind::Dbar, A1, V2, [z, z, p.g_a2.conj() * p.kappa_a * n2 / 2.0]),
    ]
}

/// Waveguide-1 entries listed for all-coherent inputs.
fn brillouin_entries(p: &CouplerParams) -> Vec<Entry> {
    let z = c(0.0, 0.0);
    let r = |x: f64| c(x, 0.0);
    let a = p.g_s1.norm_sqr();
    vec![
        (Kind::B, S1, S1, [z, z, r(a)]),
        (Kind::B, V1, V1, [z, z, r(a)]),
        (Kind::D, S1, A1, [z, z, -p.g_a1 * p.g_s1 / 2.0]),
        (Kind::D, S1, V1, [z, Complex64::i() * p.g_s1, z]),
        (Kind::D, S1, V2, [z, z, -p.g_s2 * p.kappa_s.conj() / 2.0]),
    ]
}

fn assemble(entries: impl IntoIterator<Item = Entry>) -> CoefficientSet {
    let mut set = CoefficientSet {
        b: [[0.0; 6]; 3],
        d: [CMat6::zeros(); 3],
        dbar: [CMat6::zeros(); 3],
    };
    for (kind, j, k, poly) in entries {
        let (j, k) = (j.index(), k.index());
        for (deg, v) in poly.into_iter().enumerate() {
            match kind {
                Kind::B => set.b[deg][j] = v.re,
                Kind::D => {
                    set.d[deg][(j, k)] = v;
                    set.d[deg][(k, j)] = v;
                }
                Kind::Dbar => {
                    set.dbar[deg][(j, k)] = v;
                    set.dbar[deg][(k, j)] = v.conj();
                }
            }
        }
    }
    set
}

/// Listed entries plus their images under the waveguide exchange.
fn with_images(list: impl Fn(&CouplerParams, f64, f64) -> Vec<Entry>, f: &Fixture) -> CoefficientSet {
    let own = list(&f.params, f.n_v1, f.n_v2);
    let images = list(&f.params.swapped(), f.n_v2, f.n_v1)
        .into_iter()
        .map(|(kind, j, k, poly)| (kind, j.swapped(), k.swapped(), poly));
    assemble(own.into_iter().chain(images))
}

pub fn expected_brillouin_coefficients(f: &Fixture) -> CoefficientSet {
    with_images(|p, _, _| brillouin_entries(p), f)
}

pub fn expected_raman_coefficients(f: &Fixture) -> CoefficientSet {
    with_images(raman_entries, f)
}

/// Largest entrywise deviation between composed and expected coefficients,
/// over every `B`, `C`, `D` and `Dbar` entry and every power of `z`.
pub fn coefficient_set_mismatch(f: &Fixture, want: &CoefficientSet) -> f64 {
    let mut worst = 0.0f64;
    for deg in 0..3 {
        let got = f.coefficient_term(deg);
        for j in 0..6 {
            worst = worst.max((got.b[j] - want.b[deg][j]).abs());
            worst = worst.max(got.c[j].norm());
            for k in 0..6 {
                if j != k {
                    worst = worst.max((got.d[(j, k)] - want.d[deg][(j, k)]).norm());
                    worst = worst.max((got.dbar[(j, k)] - want.dbar[deg][(j, k)]).norm());
                }
            }
        }
    }
    worst
}
