//! Stress response of the incompressible neo-Hookean solid with optional
//! viscous regularization, and the inversion that turns a prescribed
//! attachment stress into an attachment elastic deformation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{Tensor2, Vec2};

/// Uniform material constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaterialParams {
    /// Shear modulus G (Pa).
    pub shear_modulus: f64,
    /// Viscous coefficient μ (Pa·s).
    pub viscosity: f64,
    /// Mass density ρ (kg/m³).
    pub density: f64,
}

impl MaterialParams {
    pub fn new(shear_modulus: f64, viscosity: f64, density: f64) -> Result<Self> {
        if !(shear_modulus > 0.0) || !shear_modulus.is_finite() {
            return Err(Error::validation("G", "shear modulus must be positive and finite"));
        }
        if !(viscosity >= 0.0) || !viscosity.is_finite() {
            return Err(Error::validation("mu", "viscosity must be non-negative and finite"));
        }
        if !(density > 0.0) || !density.is_finite() {
            return Err(Error::validation("rho", "density must be positive and finite"));
        }
        Ok(Self {
            shear_modulus,
            viscosity,
            density,
        })
    }
}

/// Stress state prescribed for material at the instant it attaches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttachmentSpec {
    pub target_stress: Tensor2,
    /// Enforce `F_e · l = l` for every `l` tangent to the growth surface.
    pub tangential_identity: bool,
}

impl AttachmentSpec {
    /// Attachment stress whose traction on the surface ê2 equals `traction`.
    ///
    /// Only the traction column is meaningful to the inversion; σ11 is set
    /// to zero.
    pub fn from_traction(traction: Vec2, tangential_identity: bool) -> Self {
        Self {
            target_stress: Tensor2::new(0.0, traction.x1, traction.x1, traction.x2),
            tangential_identity,
        }
    }
}

/// `σ̂ = −p I + G F_e F_eᵀ`
pub fn neo_hookean_stress(f_e: &Tensor2, pressure: f64, params: &MaterialParams) -> Tensor2 {
    let b = f_e.mul_transpose_self();
    let g = params.shear_modulus;
    Tensor2::new(g * b.t11() - pressure, g * b.t12(), g * b.t21(), g * b.t22() - pressure)
}

/// Neo-Hookean stress plus the viscous part `2 μ sym(∇v)`.
pub fn total_stress(f_e: &Tensor2, grad_v: &Tensor2, pressure: f64, params: &MaterialParams) -> Tensor2 {
    let elastic = neo_hookean_stress(f_e, pressure, params);
    if params.viscosity == 0.0 {
        return elastic;
    }
    elastic + grad_v.sym() * (2.0 * params.viscosity)
}

/// Invert the stress response for the traction of `spec.target_stress` on a
/// surface with normal ê2.
///
/// With `tangential_identity` the search family is `[[1, γ], [0, 1]]` plus
/// pressure, which matches any traction: `γ = σ12 / G`, `p = G − σ22`.
/// Without it the family is pure pressure on `F_e = I`, which can only
/// carry a normal traction.
pub fn attach_elastic_deformation(spec: &AttachmentSpec, params: &MaterialParams) -> Result<(Tensor2, f64)> {
    let s = spec.target_stress;
    if !s.is_finite() {
        return Err(Error::NoInverse("attachment stress is not finite".into()));
    }
    let asym = (s.t12() - s.t21()).abs();
    if asym > 1e-12 * s.max_abs().max(1.0) {
        return Err(Error::NoInverse(format!(
            "attachment stress is not symmetric (|σ12 − σ21| = {asym:e})"
        )));
    }
    let g = params.shear_modulus;
    let shear_traction = s.t12();
    let normal_traction = s.t22();
    if spec.tangential_identity {
        Ok((Tensor2::shear(shear_traction / g), g - normal_traction))
    } else if shear_traction == 0.0 {
        Ok((Tensor2::IDENTITY, g - normal_traction))
    } else {
        Err(Error::NoInverse(format!(
            "shear traction {shear_traction} requires the tangential-identity shear family"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit() -> MaterialParams {
        MaterialParams::new(1.0, 0.1, 1.0).unwrap()
    }

    #[test]
    fn stress_free_at_identity_with_pressure_g() {
        let p = unit();
        assert_eq!(neo_hookean_stress(&Tensor2::IDENTITY, 1.0, &p), Tensor2::ZERO);
        assert_eq!(neo_hookean_stress(&Tensor2::IDENTITY, 0.0, &p), Tensor2::IDENTITY);
    }

    #[test]
    fn uniform_shear_stress_matches_closed_form() {
        let (m, v0, g) = (0.1, 1.0, 2.0);
        let params = MaterialParams::new(g, 0.0, 1.0).unwrap();
        let gamma = m * v0 / g;
        let s = neo_hookean_stress(&Tensor2::shear(gamma), g, &params);
        let want = Tensor2::new((m * v0) * (m * v0) / g, m * v0, m * v0, 0.0);
        assert!((s - want).max_abs() < 1e-15);
    }

    #[test]
    fn viscous_part() {
        let p = unit();
        let f = Tensor2::shear(0.3);
        assert_eq!(
            total_stress(&f, &Tensor2::ZERO, 0.7, &p),
            neo_hookean_stress(&f, 0.7, &p)
        );
        let a = 2.5;
        let s = total_stress(&Tensor2::IDENTITY, &Tensor2::new(0.0, a, 0.0, 0.0), 1.0, &p);
        let mu = p.viscosity;
        assert!((s - Tensor2::new(0.0, mu * a, mu * a, 0.0)).max_abs() < 1e-15);

        let inviscid = MaterialParams::new(1.0, 0.0, 1.0).unwrap();
        let grad = Tensor2::new(3.0, -1.0, 4.0, 2.0);
        assert_eq!(
            total_stress(&f, &grad, 0.2, &inviscid),
            neo_hookean_stress(&f, 0.2, &inviscid)
        );
    }

    #[test]
    fn attachment_examples() {
        let p = unit();
        let free = AttachmentSpec::from_traction(Vec2::ZERO, true);
        assert_eq!(attach_elastic_deformation(&free, &p).unwrap(), (Tensor2::IDENTITY, 1.0));

        let (m, v0) = (0.1, 1.0);
        let spec = AttachmentSpec::from_traction(Vec2::new(m * v0, 0.0), true);
        let (f, pressure) = attach_elastic_deformation(&spec, &p).unwrap();
        assert_eq!(f, Tensor2::shear(0.1));
        assert_eq!(pressure, 1.0);
        // independent check through the forward response
        let s = neo_hookean_stress(&f, pressure, &p);
        assert!((s.t12() - 0.1).abs() < 1e-15);
        assert!(s.t22().abs() < 1e-15);
        assert_eq!(f.det(), 1.0);
    }

    #[test]
    fn attachment_rejects_inconsistent_specs() {
        let p = unit();
        let shear_without_family = AttachmentSpec::from_traction(Vec2::new(0.2, 0.0), false);
        assert!(matches!(
            attach_elastic_deformation(&shear_without_family, &p),
            Err(Error::NoInverse(_))
        ));
        let asym = AttachmentSpec {
            target_stress: Tensor2::new(0.0, 1.0, 0.5, 0.0),
            tangential_identity: true,
        };
        assert!(matches!(
            attach_elastic_deformation(&asym, &p),
            Err(Error::NoInverse(_))
        ));
        let normal_only = AttachmentSpec::from_traction(Vec2::new(0.0, -0.3), false);
        let (f, pressure) = attach_elastic_deformation(&normal_only, &p).unwrap();
        assert_eq!(f, Tensor2::IDENTITY);
        assert!((neo_hookean_stress(&f, pressure, &p).t22() + 0.3).abs() < 1e-15);
    }

    #[test]
    fn params_validation_names_field() {
        match MaterialParams::new(-1.0, 0.1, 1.0) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "G"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(MaterialParams::new(1.0, -0.1, 1.0).is_err());
        assert!(MaterialParams::new(1.0, 0.1, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn attachment_round_trip(gamma in -2.0..2.0f64, g in 0.1..10.0f64) {
            let params = MaterialParams::new(g, 0.0, 1.0).unwrap();
            let sigma = neo_hookean_stress(&Tensor2::shear(gamma), g, &params);
            let spec = AttachmentSpec { target_stress: sigma, tangential_identity: true };
            let (f, p) = attach_elastic_deformation(&spec, &params).unwrap();
            prop_assert!((f.t12() - gamma).abs() <= 1e-10);
            prop_assert_eq!(f.det(), 1.0);
            prop_assert!((p - g).abs() <= 1e-12 * g);
        }

        #[test]
        fn stress_is_bitwise_symmetric(a in -3.0..3.0f64, b in -3.0..3.0f64,
                                       c in -3.0..3.0f64, d in -3.0..3.0f64,
                                       p in -5.0..5.0f64) {
            let s = neo_hookean_stress(&Tensor2::new(a, b, c, d), p, &unit());
            prop_assert_eq!(s.t12().to_bits(), s.t21().to_bits());
        }
    }
}
