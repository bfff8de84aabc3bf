//! Closed-form 2×2 complex linear algebra for spin-1/2 problems.
//!
//! Everything here is `Copy` and allocation free: Hermitian eigensystems,
//! exact SU(2) steps `exp(-i (d·σ) dt)`, density matrices and the von Neumann
//! entropy. Sweeps multiply millions of these matrices, so nothing is boxed.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// `E1 - E0` below this is treated as a degenerate spectrum.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Budget on `max |U†U - I|` for matrices produced by exact (non-Taylor) paths.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Hermiticity / trace / positivity tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// A 2×2 complex matrix stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub m: [[C64; 2]; 2],
}

impl fmt::Debug for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl Matrix2 {
    pub const fn new(a11: C64, a12: C64, a21: C64, a22: C64) -> Self {
        Self { m: [[a11, a12], [a21, a22]] }
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn diag(a: C64, b: C64) -> Self {
        Self::new(a, ZERO, ZERO, b)
    }

    pub const fn sigma_x() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub const fn sigma_y() -> Self {
        Self::new(ZERO, C64::new(0.0, -1.0), I, ZERO)
    }

    pub const fn sigma_z() -> Self {
        Self::new(ONE, ZERO, ZERO, C64::new(-1.0, 0.0))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.m[0][0] * s, self.m[0][1] * s, self.m[1][0] * s, self.m[1][1] * s)
    }

    pub fn dagger(&self) -> Self {
        Self::new(
            self.m[0][0].conj(),
            self.m[1][0].conj(),
            self.m[0][1].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// `max |U†U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.dagger() * *self - Self::identity()).max_abs()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.dagger()) <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn apply(&self, v: &State2) -> State2 {
        State2 {
            c0: self.m[0][0] * v.c0 + self.m[0][1] * v.c1,
            c1: self.m[1][0] * v.c0 + self.m[1][1] * v.c1,
        }
    }

    /// `self^n` by binary exponentiation.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// Bloch decomposition `h0·I + d·σ` of a Hermitian matrix.
    pub fn hermitian_parts(&self) -> (f64, BlochVector) {
        let h0 = 0.5 * (self.m[0][0].re + self.m[1][1].re);
        let d3 = 0.5 * (self.m[0][0].re - self.m[1][1].re);
        let off = 0.5 * (self.m[0][1] + self.m[1][0].conj());
        (h0, BlochVector::new(off.re, -off.im, d3))
    }
}

impl Add for Matrix2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.m[0][0] + o.m[0][0],
            self.m[0][1] + o.m[0][1],
            self.m[1][0] + o.m[1][0],
            self.m[1][1] + o.m[1][1],
        )
    }
}

impl Sub for Matrix2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(
            self.m[0][0] - o.m[0][0],
            self.m[0][1] - o.m[0][1],
            self.m[1][0] - o.m[1][0],
            self.m[1][1] - o.m[1][1],
        )
    }
}

impl Mul for Matrix2 {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// Two-component state `c0|0⟩ + c1|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct State2 {
    pub c0: C64,
    pub c1: C64,
}

impl State2 {
    pub const fn new(c0: C64, c1: C64) -> Self {
        Self { c0, c1 }
    }

    /// `|0⟩`, the lower level in the diagonal basis.
    pub const fn up() -> Self {
        Self::new(ONE, ZERO)
    }

    /// `|1⟩`.
    pub const fn down() -> Self {
        Self::new(ZERO, ONE)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c0.norm_sqr() + self.c1.norm_sqr()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidParameter("cannot normalize a zero state".into()));
        }
        Ok(Self::new(self.c0 / n, self.c1 / n))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> Matrix2 {
        Matrix2::new(
            self.c0 * self.c0.conj(),
            self.c0 * self.c1.conj(),
            self.c1 * self.c0.conj(),
            self.c1 * self.c1.conj(),
        )
    }

    /// Bloch vector `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`.
    pub fn bloch(&self) -> [f64; 3] {
        let x = self.c0.conj() * self.c1;
        [2.0 * x.re, 2.0 * x.im, self.c0.norm_sqr() - self.c1.norm_sqr()]
    }
}

/// Real field `d` of a traceless Hamiltonian `H = d·σ`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct BlochVector {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl BlochVector {
    pub const fn new(d1: f64, d2: f64, d3: f64) -> Self {
        Self { d1, d2, d3 }
    }

    pub fn norm(&self) -> f64 {
        (self.d1 * self.d1 + self.d2 * self.d2 + self.d3 * self.d3).sqrt()
    }

    /// Instantaneous gap `E1 - E0 = 2|d|`.
    pub fn gap(&self) -> f64 {
        2.0 * self.norm()
    }

    /// `d·σ`.
    pub fn hamiltonian(&self) -> Matrix2 {
        Matrix2::new(
            C64::new(self.d3, 0.0),
            C64::new(self.d1, -self.d2),
            C64::new(self.d1, self.d2),
            C64::new(-self.d3, 0.0),
        )
    }
}

/// Eigen-decomposition of a Hermitian 2×2 matrix.
#[derive(Clone, Copy, Debug)]
pub struct Eigensystem2 {
    pub e0: f64,
    pub e1: f64,
    pub n0: State2,
    pub n1: State2,
}

impl Eigensystem2 {
    pub fn gap(&self) -> f64 {
        self.e1 - self.e0
    }
}

/// Eigenvalues in ascending order with normalized eigenvectors.
///
/// Each eigenvector is taken from the larger column of the spectral projector
/// `(H - E_other)/(E - E_other)`, then its largest-modulus component is made
/// real and positive so the output is deterministic.
pub fn eigensystem2(h: &Matrix2) -> Result<Eigensystem2> {
    if !h.is_hermitian(1e-10 * (1.0 + h.max_abs())) {
        return Err(Error::InvalidParameter("eigensystem2 requires a Hermitian matrix".into()));
    }
    let (h0, d) = h.hermitian_parts();
    let r = d.norm();
    let gap = 2.0 * r;
    if gap < DEGENERACY_TOL {
        return Err(Error::DegenerateSpectrum { gap });
    }
    let e0 = h0 - r;
    let e1 = h0 + r;
    let hs = d.hamiltonian();
    let n0 = projector_column(&hs, -r, r);
    let n1 = projector_column(&hs, r, -r);
    Ok(Eigensystem2 { e0, e1, n0, n1 })
}

fn projector_column(h: &Matrix2, e: f64, e_other: f64) -> State2 {
    let p = (*h - Matrix2::identity().scale(C64::new(e_other, 0.0)))
        .scale(C64::new(1.0 / (e - e_other), 0.0));
    let col0 = State2::new(p.m[0][0], p.m[1][0]);
    let col1 = State2::new(p.m[0][1], p.m[1][1]);
    let v = if col0.norm_sqr() >= col1.norm_sqr() { col0 } else { col1 };
    fix_phase(v.normalized().expect("projector column of a nondegenerate matrix is nonzero"))
}

fn fix_phase(v: State2) -> State2 {
    let lead = if v.c0.norm() >= v.c1.norm() { v.c0 } else { v.c1 };
    let phase = lead.conj() / lead.norm();
    State2::new(v.c0 * phase, v.c1 * phase)
}

/// Exact propagator `exp(-i (d·σ) dt) = cos(|d|dt) I - i sin(|d|dt) d̂·σ`.
#[inline]
pub fn exact_step(d: &BlochVector, dt: f64) -> Matrix2 {
    let r = d.norm();
    if r == 0.0 {
        return Matrix2::identity();
    }
    let (s, c) = (r * dt).sin_cos();
    let f = s / r;
    Matrix2::new(
        C64::new(c, -f * d.d3),
        C64::new(-f * d.d2, -f * d.d1),
        C64::new(f * d.d2, -f * d.d1),
        C64::new(c, f * d.d3),
    )
}

/// A validated density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix2(Matrix2);

impl DensityMatrix2 {
    pub fn new(rho: Matrix2) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::InvalidDensityMatrix("non-finite entries".into()));
        }
        if !rho.is_hermitian(DENSITY_TOL) {
            return Err(Error::InvalidDensityMatrix("not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let rho = Self(rho);
        let (lo, _) = rho.eigenvalues();
        if lo < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {lo:e}")));
        }
        Ok(rho)
    }

    pub fn pure(state: &State2) -> Result<Self> {
        Self::new(state.normalized()?.projector())
    }

    /// Equal-weight mixture of pure states.
    pub fn uniform_mixture(states: &[State2]) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidDensityMatrix("empty mixture".into()));
        }
        let w = C64::new(1.0 / states.len() as f64, 0.0);
        let sum = states.iter().fold(Matrix2::zero(), |acc, s| acc + s.projector());
        Self::new(sum.scale(w))
    }

    pub fn maximally_mixed() -> Self {
        Self(Matrix2::identity().scale(C64::new(0.5, 0.0)))
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }

    /// Eigenvalues `(λ_min, λ_max)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let (h0, d) = self.0.hermitian_parts();
        let r = d.norm();
        (h0 - r, h0 + r)
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        let (a, b) = self.eigenvalues();
        a * a + b * b
    }
}

/// `S(ρ) = -tr(ρ ln ρ)` with `0·ln 0 = 0`; lies in `[0, ln 2]`.
pub fn von_neumann_entropy(rho: &DensityMatrix2) -> f64 {
    let (a, b) = rho.eigenvalues();
    let term = |x: f64| {
        let x = x.clamp(0.0, 1.0);
        if x == 0.0 {
            0.0
        } else {
            -x * x.ln()
        }
    };
    (term(a) + term(b)).clamp(0.0, std::f64::consts::LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigensystem_of_minus_sigma_z() {
        let h = Matrix2::sigma_z().scale(c(-1.0, 0.0));
        let es = eigensystem2(&h).unwrap();
        assert_eq!(es.e0, -1.0);
        assert_eq!(es.e1, 1.0);
        assert!((es.n0.c0 - c(1.0, 0.0)).norm() < 1e-15);
        assert!(es.n0.c1.norm() < 1e-15);
    }

    #[test]
    fn eigensystem_gap_for_band_point() {
        // d = (0, 1, 0.9): gap 2·sqrt(1.81)
        let h = BlochVector::new(0.0, 1.0, 0.9).hamiltonian();
        let es = eigensystem2(&h).unwrap();
        assert!((es.gap() - 2.0 * 1.81f64.sqrt()).abs() < 1e-14);
        assert!((es.gap() - 2.690_724_8).abs() < 1e-7);
        for (e, n) in [(es.e0, es.n0), (es.e1, es.n1)] {
            let hn = h.apply(&n);
            assert!((hn.c0 - n.c0 * e).norm() < 1e-10);
            assert!((hn.c1 - n.c1 * e).norm() < 1e-10);
        }
    }

    #[test]
    fn eigensystem_zero_is_degenerate() {
        assert!(matches!(
            eigensystem2(&Matrix2::zero()),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn eigensystem_phase_convention() {
        let h = BlochVector::new(0.3, -0.7, 0.2).hamiltonian();
        let es = eigensystem2(&h).unwrap();
        for n in [es.n0, es.n1] {
            let lead = if n.c0.norm() >= n.c1.norm() { n.c0 } else { n.c1 };
            assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
        }
    }

    #[test]
    fn exact_step_cases() {
        let d0 = BlochVector::default();
        assert_eq!(exact_step(&d0, 3.7), Matrix2::identity());

        let half_gap = 0.4;
        let dt = 1.3;
        let u = exact_step(&BlochVector::new(0.0, 0.0, half_gap), dt);
        let expect = Matrix2::diag(c(0.0, -half_gap * dt).exp(), c(0.0, half_gap * dt).exp());
        assert!(u.max_abs_diff(&expect) < 1e-15);

        let u = exact_step(&BlochVector::new(0.6, 0.0, 0.8), PI);
        assert!(u.max_abs_diff(&Matrix2::identity().scale(c(-1.0, 0.0))) < 1e-15);
    }

    #[test]
    fn entropy_values() {
        let pure = DensityMatrix2::pure(&State2::new(c(0.6, 0.0), c(0.0, 0.8))).unwrap();
        assert!(von_neumann_entropy(&pure).abs() < 1e-12);
        let mixed = DensityMatrix2::maximally_mixed();
        assert!((von_neumann_entropy(&mixed) - LN_2).abs() < 1e-15);
        let rho = DensityMatrix2::new(Matrix2::diag(c(0.9, 0.0), c(0.1, 0.0))).unwrap();
        let expect = -0.9 * 0.9f64.ln() - 0.1 * 0.1f64.ln();
        assert!((von_neumann_entropy(&rho) - expect).abs() < 1e-15);
        assert!((expect - 0.325_082_9).abs() < 1e-7);
    }

    #[test]
    fn density_validation() {
        let bad_trace = Matrix2::diag(c(1.0, 0.0), c(0.5, 0.0));
        assert!(matches!(DensityMatrix2::new(bad_trace), Err(Error::InvalidDensityMatrix(_))));
        let negative = Matrix2::diag(c(1.2, 0.0), c(-0.2, 0.0));
        assert!(DensityMatrix2::new(negative).is_err());
        let non_herm = Matrix2::new(c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0));
        assert!(DensityMatrix2::new(non_herm).is_err());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let u = exact_step(&BlochVector::new(0.2, 0.5, -0.1), 0.7);
        let mut acc = Matrix2::identity();
        for _ in 0..13 {
            acc = u * acc;
        }
        assert!(u.pow(13).max_abs_diff(&acc) < 1e-13);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn bloch() -> impl Strategy<Value = BlochVector> {
            (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b, c)| BlochVector::new(a, b, c))
        }

        fn state() -> impl Strategy<Value = State2> {
            (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
                .prop_filter("nonzero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-3)
                .prop_map(|(a, b, c, d)| State2::new(C64::new(a, b), C64::new(c, d)).normalized().unwrap())
        }

        proptest! {
            #[test]
            fn exact_step_composes(d in bloch(), t1 in -3.0..3.0f64, t2 in -3.0..3.0f64) {
                let lhs = exact_step(&d, t1) * exact_step(&d, t2);
                let rhs = exact_step(&d, t1 + t2);
                prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            }

            #[test]
            fn exact_step_is_special_unitary(d in bloch(), t in -10.0..10.0f64) {
                let u = exact_step(&d, t);
                prop_assert!((u.det() - C64::new(1.0, 0.0)).norm() < 1e-12);
                prop_assert!(u.unitarity_defect() < UNITARITY_TOL);
            }

            #[test]
            fn eigensystem_reconstructs(d in bloch(), h0 in -1.0..1.0f64) {
                prop_assume!(d.norm() > 1e-3);
                let h = d.hamiltonian() + Matrix2::identity().scale(C64::new(h0, 0.0));
                let es = eigensystem2(&h).unwrap();
                prop_assert!(es.e0 <= es.e1);
                let rebuilt = es.n0.projector().scale(C64::new(es.e0, 0.0))
                    + es.n1.projector().scale(C64::new(es.e1, 0.0));
                prop_assert!(rebuilt.max_abs_diff(&h) < 1e-10);
            }

            #[test]
            fn entropy_is_concave(r1 in bloch(), r2 in bloch(), lam in 0.0..1.0f64) {
                let rho = |r: BlochVector| {
                    let s = r.norm().max(1.0);
                    let half = BlochVector::new(0.5 * r.d1 / s, 0.5 * r.d2 / s, 0.5 * r.d3 / s);
                    half.hamiltonian() + Matrix2::identity().scale(C64::new(0.5, 0.0))
                };
                let (m1, m2) = (rho(r1), rho(r2));
                let mix = m1.scale(C64::new(lam, 0.0)) + m2.scale(C64::new(1.0 - lam, 0.0));
                let s = |m: Matrix2| von_neumann_entropy(&DensityMatrix2::new(m).unwrap());
                let s_mix = s(mix);
                prop_assert!((0.0..=LN_2 + 1e-12).contains(&s_mix));
                prop_assert!(s_mix + 1e-12 >= lam * s(m1) + (1.0 - lam) * s(m2));
            }

            #[test]
            fn mixture_of_pure_states_has_entropy(a in state(), b in state()) {
                let rho = DensityMatrix2::uniform_mixture(&[a, b]).unwrap();
                prop_assert!(von_neumann_entropy(&rho) >= 0.0);
                prop_assert!(von_neumann_entropy(&DensityMatrix2::pure(&a).unwrap()) < 1e-7);
            }
        }
    }
}
