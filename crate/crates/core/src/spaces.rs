//! The discrete Gelfand triple: weighted L^2 Gram matrices over the nodal
//! piecewise-linear basis, grid functions, inner products and dual pairings.
//!
//! H is the unweighted space, V carries the weight x^(-a), and the dual side
//! carries x^a, so "a" alone fixes the whole triple.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{Tridiag, TridiagFactor};
use crate::mesh::Mesh;
use crate::quadrature::cell_hat_integrals;

/// Power weight x^(-exponent). H uses exponent 0, V uses a, V' uses -a.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    pub exponent: f64,
}

impl WeightSpec {
    pub fn pivot() -> Self {
        WeightSpec { exponent: 0.0 }
    }

    pub fn primal(a: f64) -> Self {
        WeightSpec { exponent: a }
    }

    pub fn dual(a: f64) -> Self {
        WeightSpec { exponent: -a }
    }
}

/// Assemble the Gram matrix of the nodal basis under the given power weight.
pub fn assemble_gram(mesh: &Mesh, weight: WeightSpec) -> Tridiag {
    let n = mesh.dim();
    let mut gram = Tridiag::zeros(n);
    for (idx, (xl, xr)) in mesh.cells().enumerate() {
        let [ll, lr, rr] = cell_hat_integrals(-weight.exponent, xl, xr);
        gram.diag[idx] += ll;
        gram.diag[idx + 1] += rr;
        gram.off[idx] += lr;
    }
    gram
}

/// The three Gram matrices of the triple, with the V factorization cached for
/// Riesz solves. Immutable after construction and shared via `Arc`.
#[derive(Debug)]
pub struct GramSet {
    mesh: Arc<Mesh>,
    weight_exp: f64,
    pub gram_h: Tridiag,
    pub gram_v: Tridiag,
    pub gram_vdual: Tridiag,
    v_factor: TridiagFactor,
}

impl GramSet {
    pub fn new(mesh: Arc<Mesh>, weight_exp: f64) -> Result<Self> {
        if !(weight_exp >= 0.0) || !weight_exp.is_finite() {
            return Err(Error::InvalidParameter {
                field: "weight_exp",
                message: format!("must be a finite non-negative real, got {weight_exp}"),
            });
        }
        let gram_h = assemble_gram(&mesh, WeightSpec::pivot());
        let gram_v = assemble_gram(&mesh, WeightSpec::primal(weight_exp));
        let gram_vdual = assemble_gram(&mesh, WeightSpec::dual(weight_exp));
        let v_factor = gram_v.factor()?;
        Ok(GramSet { mesh, weight_exp, gram_h, gram_v, gram_vdual, v_factor })
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn weight_exp(&self) -> f64 {
        self.weight_exp
    }

    pub fn dim(&self) -> usize {
        self.mesh.dim()
    }

    pub fn inner_h(&self, f: &GridFunction, g: &GridFunction) -> Result<Complex64> {
        inner(&self.gram_h, f, g)
    }

    pub fn inner_v(&self, f: &GridFunction, g: &GridFunction) -> Result<Complex64> {
        inner(&self.gram_v, f, g)
    }

    pub fn inner_vdual(&self, f: &GridFunction, g: &GridFunction) -> Result<Complex64> {
        inner(&self.gram_vdual, f, g)
    }

    pub fn norm_h(&self, f: &GridFunction) -> f64 {
        norm(&self.gram_h, f).expect("matching mesh by construction")
    }

    pub fn norm_v(&self, f: &GridFunction) -> f64 {
        norm(&self.gram_v, f).expect("matching mesh by construction")
    }

    pub fn norm_vdual(&self, f: &GridFunction) -> f64 {
        norm(&self.gram_vdual, f).expect("matching mesh by construction")
    }

    /// Solve Gram_V g = rhs (coefficients of an anti-linear functional).
    pub fn riesz_v(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        self.v_factor.solve(rhs)
    }

    /// Exact discrete dual norm sup |(f|v)_H| / ||v||_V over the mesh space,
    /// computed through the V Riesz solve.
    pub fn dual_norm_h_functional(&self, f: &GridFunction) -> f64 {
        let mut rhs = Vec::new();
        self.gram_h.matvec(f.coeffs(), &mut rhs);
        let riesz = self.riesz_v(&rhs);
        let val: Complex64 =
            riesz.iter().zip(rhs.iter()).map(|(r, b)| b.conj() * r).sum();
        val.re.max(0.0).sqrt()
    }
}

/// Complex coefficient vector over the nodal basis of a mesh.
#[derive(Debug, Clone)]
pub struct GridFunction {
    mesh: Arc<Mesh>,
    coeffs: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(mesh: Arc<Mesh>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != mesh.dim() {
            return Err(Error::InvalidParameter {
                field: "coeffs",
                message: format!("expected {} coefficients, got {}", mesh.dim(), coeffs.len()),
            });
        }
        Ok(GridFunction { mesh, coeffs })
    }

    pub fn zeros(mesh: Arc<Mesh>) -> Self {
        let n = mesh.dim();
        GridFunction { mesh, coeffs: vec![Complex64::ZERO; n] }
    }

    /// Nodal interpolant of a pointwise function on [eps, 1].
    pub fn interpolate(
        mesh: Arc<Mesh>,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(mesh.dim());
        for &x in mesh.nodes() {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { x });
            }
            coeffs.push(v);
        }
        Ok(GridFunction { mesh, coeffs })
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn scaled(&self, c: Complex64) -> GridFunction {
        GridFunction {
            mesh: self.mesh.clone(),
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
        }
    }

    /// self + c * other
    pub fn add_scaled(&self, c: Complex64, other: &GridFunction) -> Result<GridFunction> {
        check_same_mesh(self, other)?;
        Ok(GridFunction {
            mesh: self.mesh.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(other.coeffs.iter())
                .map(|(a, b)| a + c * b)
                .collect(),
        })
    }

    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }
}

pub(crate) fn check_same_mesh(f: &GridFunction, g: &GridFunction) -> Result<()> {
    if Arc::ptr_eq(&f.mesh, &g.mesh) || f.mesh.as_ref() == g.mesh.as_ref() {
        Ok(())
    } else {
        Err(Error::MeshMismatch)
    }
}

/// Weighted inner product g^H Gram f: linear in the first argument,
/// conjugate-linear in the second.
pub fn inner(gram: &Tridiag, f: &GridFunction, g: &GridFunction) -> Result<Complex64> {
    check_same_mesh(f, g)?;
    if gram.dim() != f.coeffs.len() {
        return Err(Error::MeshMismatch);
    }
    Ok(gram.form(f.coeffs(), g.coeffs()))
}

pub fn norm(gram: &Tridiag, f: &GridFunction) -> Result<f64> {
    let v = inner(gram, f, f)?;
    Ok(v.re.max(0.0).sqrt())
}

/// H-pairing extending to the duality between V' and V.
pub fn dual_pairing(
    gram_h: &Tridiag,
    f: &GridFunction,
    v: &GridFunction,
) -> Result<Complex64> {
    inner(gram_h, f, v)
}

/// Deterministic complex sample with coefficients uniform in the unit box.
pub fn random_grid_function(mesh: &Arc<Mesh>, rng: &mut impl Rng) -> GridFunction {
    let coeffs = (0..mesh.dim())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    GridFunction { mesh: mesh.clone(), coeffs }
}

/// Random sample normalized to unit norm in the given Gram metric.
pub fn random_unit(gram: &Tridiag, mesh: &Arc<Mesh>, rng: &mut impl Rng) -> GridFunction {
    loop {
        let f = random_grid_function(mesh, rng);
        let n = norm(gram, &f).expect("fresh sample lives on the same mesh");
        if n > 1e-8 {
            return f.scaled(Complex64::new(1.0 / n, 0.0));
        }
    }
}
