//! Extending a bounded sesquilinear form prescribed on a one-dimensional
//! subspace U of V to all of V x V, either preserving accretivity or
//! producing a self-adjoint non-negative extension, with explicit norm
//! certificates. Every extension is a rank-two operator on the span of
//! {u0, Tu0} plus a real multiple of the identity.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues_2x2, sigma_max_2x2};
use crate::spaces::{random_grid_function, GramSet, GridFunction};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// A bounded sesquilinear form b: U x V -> C with one-dimensional domain,
/// given by the spanning vector u0 and the Riesz representative of b(u0, .)
/// in V, so that b(u0, v) = (riesz | v)_V.
#[derive(Debug, Clone)]
pub struct PartialForm {
    grams: Arc<GramSet>,
    u0: GridFunction,
    riesz: GridFunction,
    u0_norm_v: f64,
}

impl PartialForm {
    pub fn new(grams: Arc<GramSet>, u0: GridFunction, riesz: GridFunction) -> Result<Self> {
        crate::spaces::check_same_mesh(&u0, &riesz)?;
        let u0_norm_v = grams.norm_v(&u0);
        if !(u0_norm_v > 0.0) {
            return Err(Error::InvalidParameter {
                field: "u0",
                message: "spanning vector must have positive V-norm".into(),
            });
        }
        Ok(PartialForm { grams, u0, riesz, u0_norm_v })
    }

    pub fn grams(&self) -> &Arc<GramSet> {
        &self.grams
    }

    pub fn u0(&self) -> &GridFunction {
        &self.u0
    }

    pub fn riesz(&self) -> &GridFunction {
        &self.riesz
    }

    pub fn u0_norm_v(&self) -> f64 {
        self.u0_norm_v
    }

    /// b(scale * u0, v)
    pub fn evaluate(&self, scale: Complex64, v: &GridFunction) -> Result<Complex64> {
        Ok(scale * self.grams.inner_v(&self.riesz, v)?)
    }

    /// ||T|| = ||b|| on the one-dimensional domain, exactly ||Tu0||_V / ||u0||_V.
    pub fn operator_norm(&self) -> f64 {
        self.grams.norm_v(&self.riesz) / self.u0_norm_v
    }

    /// Partial form for b(., .) - shift (.|.)_V on the same domain.
    pub fn shifted(&self, shift: f64) -> PartialForm {
        let riesz = self
            .riesz
            .add_scaled(Complex64::new(-shift, 0.0), &self.u0)
            .expect("same mesh");
        PartialForm {
            grams: self.grams.clone(),
            u0: self.u0.clone(),
            riesz,
            u0_norm_v: self.u0_norm_v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionMode {
    Accretive,
    Selfadjoint,
}

/// Configuration of the self-adjoint extension. `k_term` is the coefficient
/// of the pure-e2 term; left unset it takes the minimal certified value
/// ||T||^2 / eps_lower.
#[derive(Debug, Clone, Copy)]
pub struct ExtensionConfig {
    pub mode: ExtensionMode,
    pub eps_lower: f64,
    pub k_term: Option<f64>,
}

/// Certified bounds carried by every extension.
#[derive(Debug, Clone, Copy)]
pub struct BoundCertificate {
    pub norm_bound: f64,
    pub coercivity_bound: f64,
}

/// Sampled numerical-range points (Sw|w)_V / (w|w)_V.
#[derive(Debug, Clone)]
pub struct RangeSample {
    pub points: Vec<Complex64>,
}

/// Exact numerical-range enclosure of the reduced block.
#[derive(Debug, Clone, Copy)]
pub struct RangeBounds {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

/// The assembled time-slice operator: a rank-two correction acting on the
/// span of (basis_u, basis_z) plus alpha_shift times the V-identity.
///
/// a(v1, v2) = (S P v1 | P v2)_V + alpha_shift (v1 | v2)_V
#[derive(Debug, Clone)]
pub struct FormOperator {
    grams: Arc<GramSet>,
    alpha_shift: f64,
    basis_u: GridFunction,
    basis_z: GridFunction,
    /// Gram_V images of the basis vectors; coordinates are two dot products.
    dual_u: Vec<Complex64>,
    dual_z: Vec<Complex64>,
    /// s[k][l] = (S e_l | e_k)_V in the basis (e1, e2).
    s_matrix: [[Complex64; 2]; 2],
    bound_cert: BoundCertificate,
}

impl FormOperator {
    fn from_parts(
        grams: Arc<GramSet>,
        alpha_shift: f64,
        basis_u: GridFunction,
        basis_z: GridFunction,
        s_matrix: [[Complex64; 2]; 2],
        bound_cert: BoundCertificate,
    ) -> Self {
        let mut dual_u = Vec::new();
        grams.gram_v.matvec(basis_u.coeffs(), &mut dual_u);
        let mut dual_z = Vec::new();
        grams.gram_v.matvec(basis_z.coeffs(), &mut dual_z);
        FormOperator { grams, alpha_shift, basis_u, basis_z, dual_u, dual_z, s_matrix, bound_cert }
    }

    /// Pure multiple of the V-identity (empty rank-two part).
    pub fn scalar(grams: Arc<GramSet>, shift: f64) -> Result<Self> {
        let e1 = coordinate_unit(&grams, 0, &[])?;
        let e2 = coordinate_unit(&grams, 1, &[&e1])?;
        Ok(FormOperator::from_parts(
            grams,
            shift,
            e1,
            e2,
            [[Complex64::ZERO; 2]; 2],
            BoundCertificate { norm_bound: shift.abs(), coercivity_bound: shift },
        ))
    }

    pub fn grams(&self) -> &Arc<GramSet> {
        &self.grams
    }

    pub fn alpha_shift(&self) -> f64 {
        self.alpha_shift
    }

    pub fn basis_u(&self) -> &GridFunction {
        &self.basis_u
    }

    pub fn basis_z(&self) -> &GridFunction {
        &self.basis_z
    }

    pub fn s_matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.s_matrix
    }

    pub fn bound_cert(&self) -> BoundCertificate {
        self.bound_cert
    }

    pub(crate) fn with_certificate(mut self, cert: BoundCertificate, shift: f64) -> Self {
        self.bound_cert = cert;
        self.alpha_shift = shift;
        self
    }

    /// V-coordinates of v against (e1, e2).
    pub fn coords(&self, v: &GridFunction) -> [Complex64; 2] {
        let c = v.coeffs();
        let mut l1 = Complex64::ZERO;
        let mut l2 = Complex64::ZERO;
        for i in 0..c.len() {
            l1 += self.dual_u[i].conj() * c[i];
            l2 += self.dual_z[i].conj() * c[i];
        }
        [l1, l2]
    }

    /// a(v1, v2)
    pub fn evaluate(&self, v1: &GridFunction, v2: &GridFunction) -> Result<Complex64> {
        let l = self.coords(v1);
        let m = self.coords(v2);
        let s = &self.s_matrix;
        let mut acc = Complex64::ZERO;
        for k in 0..2 {
            let img = s[k][0] * l[0] + s[k][1] * l[1];
            acc += img * m[k].conj();
        }
        Ok(acc + self.alpha_shift * self.grams.inner_v(v1, v2)?)
    }

    /// Operator image Av with a(v, w) = (Av | w)_V for all w.
    pub fn apply(&self, v: &GridFunction) -> Result<GridFunction> {
        let l = self.coords(v);
        let s = &self.s_matrix;
        let c1 = s[0][0] * l[0] + s[0][1] * l[1];
        let c2 = s[1][0] * l[0] + s[1][1] * l[1];
        let mut out = v.scaled(Complex64::new(self.alpha_shift, 0.0));
        out = out.add_scaled(c1, &self.basis_u)?;
        out = out.add_scaled(c2, &self.basis_z)?;
        Ok(out)
    }

    /// Coefficients of the anti-linear functional w -> a(v, w), i.e. the
    /// Gram_V image of `apply(v)`. This is the matrix action used by the
    /// time stepper; it never forms a dense matrix.
    pub fn apply_functional(&self, v: &GridFunction) -> Vec<Complex64> {
        let l = self.coords(v);
        let s = &self.s_matrix;
        let c1 = s[0][0] * l[0] + s[0][1] * l[1];
        let c2 = s[1][0] * l[0] + s[1][1] * l[1];
        let mut out = Vec::new();
        self.grams.gram_v.matvec(v.coeffs(), &mut out);
        for i in 0..out.len() {
            out[i] = self.alpha_shift * out[i] + c1 * self.dual_u[i] + c2 * self.dual_z[i];
        }
        out
    }

    /// Rayleigh quotient a(v, v) / (v|v)_V.
    pub fn rayleigh(&self, v: &GridFunction) -> Result<Complex64> {
        let num = self.evaluate(v, v)?;
        let den = self.grams.inner_v(v, v)?.re;
        Ok(num / den)
    }

    /// Exact operator norm: the rank-two-plus-shift structure reduces it to
    /// the larger of the shifted 2x2 block and the bare shift.
    pub fn operator_norm(&self) -> f64 {
        let s = self.shifted_block();
        sigma_max_2x2(&s).max(self.alpha_shift.abs())
    }

    /// Norm of the extension without the identity shift.
    pub fn extension_norm(&self) -> f64 {
        sigma_max_2x2(&self.s_matrix)
    }

    /// Exact numerical-range enclosure from the (2+1)-block: real part from
    /// the Hermitian part, imaginary part from the skew part.
    pub fn range_bounds(&self) -> RangeBounds {
        let b = self.shifted_block();
        let h01 = 0.5 * (b[0][1] + b[1][0].conj());
        let [h_lo, h_hi] = hermitian_eigenvalues_2x2(b[0][0].re, h01, b[1][1].re);
        let k00 = b[0][0].im;
        let k11 = b[1][1].im;
        let k01 = (b[0][1] - b[1][0].conj()) / Complex64::new(0.0, 2.0);
        let [k_lo, k_hi] = hermitian_eigenvalues_2x2(k00, k01, k11);
        RangeBounds {
            re_min: h_lo.min(self.alpha_shift),
            re_max: h_hi.max(self.alpha_shift),
            im_min: k_lo.min(0.0),
            im_max: k_hi.max(0.0),
        }
    }

    /// Relative asymmetry ||A - A*||_V / ||A||_V; the shift is always
    /// symmetric, so only the rank-two block contributes.
    pub fn asymmetry(&self) -> f64 {
        let s = &self.s_matrix;
        let d = [
            [s[0][0] - s[0][0].conj(), s[0][1] - s[1][0].conj()],
            [s[1][0] - s[0][1].conj(), s[1][1] - s[1][1].conj()],
        ];
        sigma_max_2x2(&d) / self.operator_norm().max(f64::MIN_POSITIVE)
    }

    /// Seeded random numerical-range sample over the full space.
    pub fn numerical_range_sample(&self, k: usize, seed: u64) -> RangeSample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mesh = self.grams.mesh().clone();
        let mut points = Vec::with_capacity(k);
        for _ in 0..k {
            let w = random_grid_function(&mesh, &mut rng);
            let den = self.grams.inner_v(&w, &w).expect("same mesh").re;
            let l = self.coords(&w);
            let s = &self.s_matrix;
            let mut num = Complex64::ZERO;
            for kk in 0..2 {
                let img = s[kk][0] * l[0] + s[kk][1] * l[1];
                num += img * l[kk].conj();
            }
            num += self.alpha_shift * den;
            points.push(num / den);
        }
        RangeSample { points }
    }

    /// Dense matrix of the operator in the nodal basis (diagnostic; meant for
    /// small meshes in tests).
    pub fn materialize_operator(&self) -> Vec<Vec<Complex64>> {
        let n = self.grams.dim();
        let mut out = vec![vec![Complex64::ZERO; n]; n];
        let s = &self.s_matrix;
        for j in 0..n {
            let l = [self.dual_u[j].conj(), self.dual_z[j].conj()];
            let c1 = s[0][0] * l[0] + s[0][1] * l[1];
            let c2 = s[1][0] * l[0] + s[1][1] * l[1];
            for i in 0..n {
                out[i][j] = c1 * self.basis_u.coeffs()[i] + c2 * self.basis_z.coeffs()[i];
            }
            out[j][j] += self.alpha_shift;
        }
        out
    }

    /// Dense matrix of the form, F[i][j] = a(phi_j, phi_i); Hermitian exactly
    /// when the form is symmetric (diagnostic, small meshes).
    pub fn materialize_form(&self) -> Vec<Vec<Complex64>> {
        let n = self.grams.dim();
        let mut out = vec![vec![Complex64::ZERO; n]; n];
        let s = &self.s_matrix;
        let g = &self.grams.gram_v;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::ZERO;
                let duals = [&self.dual_u, &self.dual_z];
                for k in 0..2 {
                    for l in 0..2 {
                        acc += s[k][l] * duals[k][i] * duals[l][j].conj();
                    }
                }
                out[i][j] = acc;
            }
            out[i][i] += self.alpha_shift * g.diag[i];
            if i > 0 {
                out[i][i - 1] += self.alpha_shift * g.off[i - 1];
            }
            if i + 1 < n {
                out[i][i + 1] += self.alpha_shift * g.off[i];
            }
        }
        out
    }

    fn shifted_block(&self) -> [[Complex64; 2]; 2] {
        let s = &self.s_matrix;
        [
            [s[0][0] + self.alpha_shift, s[0][1]],
            [s[1][0], s[1][1] + self.alpha_shift],
        ]
    }
}

/// Riesz solve: the vector g with (g|v)_V = functional(v) for the anti-linear
/// functional whose coefficient vector is `functional`.
pub fn riesz_map(grams: &GramSet, functional: &[Complex64]) -> Result<GridFunction> {
    if functional.len() != grams.dim() {
        return Err(Error::MeshMismatch);
    }
    let coeffs = grams.riesz_v(functional);
    GridFunction::new(grams.mesh().clone(), coeffs)
}

/// Extension that vanishes on the orthogonal complement of an invariant
/// subspace (dimension one or two): the numerical range becomes the convex
/// hull of the restricted range and {0}, and the norm is preserved.
pub fn trivial_extension(
    grams: Arc<GramSet>,
    basis: &[GridFunction],
    images: &[GridFunction],
) -> Result<FormOperator> {
    if basis.is_empty() || basis.len() > 2 || basis.len() != images.len() {
        return Err(Error::InvalidParameter {
            field: "basis",
            message: "invariant subspace must come with 1 or 2 basis vectors and their images"
                .into(),
        });
    }
    // V-orthonormalize the subspace basis
    let n0 = grams.norm_v(&basis[0]);
    if !(n0 > 0.0) {
        return Err(Error::InvalidParameter {
            field: "basis",
            message: "basis vector has zero V-norm".into(),
        });
    }
    let e1 = basis[0].scaled(Complex64::new(1.0 / n0, 0.0));
    let t_e1 = images[0].scaled(Complex64::new(1.0 / n0, 0.0));
    let (e2, t_e2) = if basis.len() == 2 {
        let overlap = grams.inner_v(&basis[1], &e1)?;
        let ortho = basis[1].add_scaled(-overlap, &e1)?;
        let n2 = grams.norm_v(&ortho);
        if n2 <= 1e-12 * grams.norm_v(&basis[1]) {
            return Err(Error::InvalidParameter {
                field: "basis",
                message: "basis vectors are linearly dependent".into(),
            });
        }
        let e2 = ortho.scaled(Complex64::new(1.0 / n2, 0.0));
        // T e2 = (T b2 - overlap T e1) / n2
        let t_e2 = images[1]
            .add_scaled(-overlap, &t_e1)?
            .scaled(Complex64::new(1.0 / n2, 0.0));
        (e2, t_e2)
    } else {
        let e2 = coordinate_unit(&grams, 0, &[&e1])?;
        (e2, GridFunction::zeros(grams.mesh().clone()))
    };

    let mut s = [[Complex64::ZERO; 2]; 2];
    let cols: [&GridFunction; 2] = [&t_e1, &t_e2];
    for (l, t_el) in cols.iter().enumerate() {
        if basis.len() == 1 && l == 1 {
            break;
        }
        s[0][l] = grams.inner_v(t_el, &e1)?;
        s[1][l] = grams.inner_v(t_el, &e2)?;
        // invariance: the image must stay inside the span
        let residual = t_el
            .add_scaled(-s[0][l], &e1)?
            .add_scaled(-s[1][l], &e2)?;
        let scale = grams.norm_v(t_el);
        let defect = grams.norm_v(&residual);
        if defect > 1e-10 * scale.max(1e-300) {
            return Err(Error::NotInvariant { defect: defect / scale.max(1e-300) });
        }
        if basis.len() == 1 {
            // one-dimensional domain: the image may only point along e1
            if s[1][l].norm() > 1e-10 * scale.max(1e-300) {
                return Err(Error::NotInvariant { defect: s[1][l].norm() / scale.max(1e-300) });
            }
            s[1][l] = Complex64::ZERO;
        }
    }
    let norm_bound = sigma_max_2x2(&s);
    Ok(FormOperator::from_parts(
        grams,
        0.0,
        e1,
        e2,
        s,
        BoundCertificate { norm_bound, coercivity_bound: 0.0 },
    ))
}

/// Accretivity-preserving extension of a one-dimensional partial form with
/// certified norm bound sqrt(2) ||T||.
pub fn extend_accretive(pf: &PartialForm) -> Result<FormOperator> {
    let grams = pf.grams().clone();
    let n1 = pf.u0_norm_v();
    let e1 = pf.u0().scaled(Complex64::new(1.0 / n1, 0.0));
    let y = pf.riesz();
    let y_norm = grams.norm_v(y);
    let pairing = grams.inner_v(y, pf.u0())?;
    if pairing.re < -1e-12 * y_norm * n1 {
        return Err(Error::NotAccretive { value: pairing.re / (n1 * n1) });
    }
    let t11 = pairing / (n1 * n1);
    let proj = pairing / n1; // (y | e1)_V
    let ortho = y.add_scaled(-proj, &e1)?;
    let n_perp = grams.norm_v(&ortho);
    if n_perp <= 1e-12 * y_norm {
        // TU inside U: the trivial extension of the invariant case
        let e2 = coordinate_unit(&grams, 0, &[&e1])?;
        let s = [[t11, Complex64::ZERO], [Complex64::ZERO, Complex64::ZERO]];
        let norm_t = y_norm / n1;
        return Ok(FormOperator::from_parts(
            grams,
            0.0,
            e1,
            e2,
            s,
            BoundCertificate { norm_bound: norm_t, coercivity_bound: 0.0 },
        ));
    }
    let e2 = ortho.scaled(Complex64::new(1.0 / n_perp, 0.0));
    let t21 = Complex64::new(n_perp / n1, 0.0);
    let s = [[t11, -t21.conj()], [t21, Complex64::ZERO]];
    let norm_t = y_norm / n1;
    Ok(FormOperator::from_parts(
        grams,
        0.0,
        e1,
        e2,
        s,
        BoundCertificate { norm_bound: SQRT2 * norm_t, coercivity_bound: 0.0 },
    ))
}

/// Self-adjoint non-negative extension of a real one-dimensional partial form
/// whose restricted range sits above eps_lower, with certified norm bound
/// sqrt(2)(||T|| + k_term).
pub fn extend_selfadjoint(pf: &PartialForm, cfg: &ExtensionConfig) -> Result<FormOperator> {
    if !(cfg.eps_lower > 0.0) {
        return Err(Error::InvalidParameter {
            field: "eps_lower",
            message: format!("must be positive, got {}", cfg.eps_lower),
        });
    }
    let grams = pf.grams().clone();
    let n1 = pf.u0_norm_v();
    let y = pf.riesz();
    let y_norm = grams.norm_v(y);
    let u0_imag = imag_norm_v(&grams, pf.u0());
    if u0_imag > 1e-10 * n1 {
        return Err(Error::NotReal { vector: "u0", imag_norm: u0_imag / n1 });
    }
    let y_imag = imag_norm_v(&grams, y);
    if y_imag > 1e-10 * y_norm.max(1e-300) {
        return Err(Error::NotReal { vector: "Tu0", imag_norm: y_imag / y_norm.max(1e-300) });
    }
    let pairing = grams.inner_v(y, pf.u0())?.re;
    let required = cfg.eps_lower * n1 * n1;
    if pairing < required * (1.0 - 1e-12) - 1e-14 * y_norm * n1 {
        return Err(Error::RangeBoundViolated { value: pairing, required });
    }
    let e1 = pf.u0().scaled(Complex64::new(1.0 / n1, 0.0));
    let t11 = pairing / (n1 * n1);
    let ortho = y.add_scaled(Complex64::new(-pairing / n1, 0.0), &e1)?;
    let n_perp = grams.norm_v(&ortho);
    let norm_t = y_norm / n1;
    if n_perp <= 1e-12 * y_norm {
        let e2 = coordinate_unit(&grams, 0, &[&e1])?;
        let s = [
            [Complex64::new(t11, 0.0), Complex64::ZERO],
            [Complex64::ZERO, Complex64::ZERO],
        ];
        return Ok(FormOperator::from_parts(
            grams,
            0.0,
            e1,
            e2,
            s,
            BoundCertificate { norm_bound: norm_t, coercivity_bound: 0.0 },
        ));
    }
    let e2 = ortho.scaled(Complex64::new(1.0 / n_perp, 0.0));
    let t21 = n_perp / n1;
    let k_term = cfg.k_term.unwrap_or(norm_t * norm_t / cfg.eps_lower);
    let k_min = t21 * t21 / t11;
    if k_term < k_min * (1.0 - 1e-12) {
        return Err(Error::KTermTooSmall { k_term, required: k_min });
    }
    let s = [
        [Complex64::new(t11, 0.0), Complex64::new(t21, 0.0)],
        [Complex64::new(t21, 0.0), Complex64::new(k_term, 0.0)],
    ];
    Ok(FormOperator::from_parts(
        grams,
        0.0,
        e1,
        e2,
        s,
        BoundCertificate { norm_bound: SQRT2 * (norm_t + k_term), coercivity_bound: 0.0 },
    ))
}

/// Composite norm bound of the extension of a partial form with bound M and
/// coercivity alpha on its domain.
pub fn composite_norm_bound(m_bound: f64, alpha: f64) -> f64 {
    let half = 0.5 * alpha;
    SQRT2 * (m_bound + half + 2.0 / alpha * (m_bound + half) * (m_bound + half)) + half
}

/// Extend a coercive bounded partial form to all of V x V: shift by
/// (alpha/2) (.|.)_V, extend the shifted operator, and add the shift back.
/// The result is coercive with constant alpha/2 and bounded by the composite
/// certificate.
pub fn extend_form(
    pf: &PartialForm,
    alpha: f64,
    m_bound: f64,
    mode: ExtensionMode,
) -> Result<FormOperator> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter {
            field: "alpha",
            message: format!("coercivity constant must be positive, got {alpha}"),
        });
    }
    let n1 = pf.u0_norm_v();
    let measured_bound = pf.operator_norm();
    if measured_bound > m_bound * (1.0 + 1e-9) {
        return Err(Error::InvalidParameter {
            field: "m_bound",
            message: format!(
                "claimed bound {m_bound:.6e} below the measured norm {measured_bound:.6e}"
            ),
        });
    }
    let pairing = pf.grams().inner_v(pf.riesz(), pf.u0())?.re;
    let scale = (m_bound + alpha) * n1 * n1;
    if pairing < alpha * n1 * n1 - 1e-9 * scale {
        return Err(Error::RangeBoundViolated { value: pairing, required: alpha * n1 * n1 });
    }
    let shifted = pf.shifted(0.5 * alpha);
    let inner_op = match mode {
        ExtensionMode::Accretive => extend_accretive(&shifted)?,
        ExtensionMode::Selfadjoint => extend_selfadjoint(
            &shifted,
            &ExtensionConfig {
                mode: ExtensionMode::Selfadjoint,
                eps_lower: 0.5 * alpha,
                k_term: None,
            },
        )?,
    };
    let cert = BoundCertificate {
        norm_bound: composite_norm_bound(m_bound, alpha),
        coercivity_bound: 0.5 * alpha,
    };
    Ok(inner_op.with_certificate(cert, 0.5 * alpha))
}

fn imag_norm_v(grams: &GramSet, f: &GridFunction) -> f64 {
    let imag = GridFunction::new(
        f.mesh().clone(),
        f.coeffs().iter().map(|c| Complex64::new(c.im, 0.0)).collect(),
    )
    .expect("same length");
    grams.norm_v(&imag)
}

/// Deterministic V-normalized vector orthogonal to the given directions,
/// built from coordinate basis vectors.
fn coordinate_unit(
    grams: &GramSet,
    start: usize,
    orthogonal_to: &[&GridFunction],
) -> Result<GridFunction> {
    let mesh = grams.mesh().clone();
    let n = mesh.dim();
    for j in start..n {
        let mut coeffs = vec![Complex64::ZERO; n];
        coeffs[j] = Complex64::new(1.0, 0.0);
        let mut cand = GridFunction::new(mesh.clone(), coeffs)?;
        let cand_norm = grams.norm_v(&cand);
        for dir in orthogonal_to {
            let overlap = grams.inner_v(&cand, dir)?;
            cand = cand.add_scaled(-overlap, dir)?;
        }
        let n2 = grams.norm_v(&cand);
        if n2 > 1e-8 * cand_norm {
            return Ok(cand.scaled(Complex64::new(1.0 / n2, 0.0)));
        }
    }
    Err(Error::LinearSolve("no coordinate direction complements the subspace".into()))
}
