//! Unconstrained coordinates for the optimizer: `(a0, μ, log ℓ11, ℓ21, log ℓ22)`
//! with `Σ = LLᵀ`.

use crate::error::Result;
use crate::model::ThetaParams;

/// Box bound on every unconstrained coordinate.
pub const U_BOUND: f64 = 30.0;

/// Maps a parameter with strictly positive definite `Σ` to `u`-space.
pub fn to_unconstrained(theta: &ThetaParams) -> Result<[f64; 5]> {
    theta.validate()?;
    let l11 = theta.s11.sqrt();
    let l21 = theta.s12 / l11;
    let rest = theta.s22 - l21 * l21;
    if !(rest > 0.0) {
        return Err(crate::error::Error::InvalidCovariance(
            "Σ must be strictly positive definite".into(),
        ));
    }
    Ok([theta.a0, theta.mu, l11.ln(), l21, 0.5 * rest.ln()])
}

/// Inverse of [`to_unconstrained`]; defined for every finite `u`.
pub fn to_theta(u: &[f64; 5]) -> ThetaParams {
    let l11 = u[2].exp();
    let l21 = u[3];
    let l22 = u[4].exp();
    ThetaParams::from_array([u[0], u[1], l11 * l11, l11 * l21, l21 * l21 + l22 * l22])
}

pub fn in_bounds(u: &[f64; 5]) -> bool {
    u.iter().all(|x| x.abs() <= U_BOUND)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn design_point_round_trip() {
        let t = ThetaParams::simulation_design();
        let u = to_unconstrained(&t).unwrap();
        let back = to_theta(&u).to_array();
        for (x, y) in back.iter().zip(t.to_array()) {
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
        assert!(in_bounds(&u));
    }

    #[test]
    fn singular_sigma_rejected() {
        let t = ThetaParams::new(1.0, 20.0, 4.0, 6.0, 9.0).unwrap();
        assert!(to_unconstrained(&t).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(
            a0 in -5.0..5.0f64,
            mu in -50.0..50.0f64,
            s11 in 0.01..100.0f64,
            rho in -0.99..0.99f64,
            s22 in 0.01..100.0f64,
        ) {
            let t = ThetaParams::new(a0, mu, s11, rho * (s11 * s22).sqrt(), s22).unwrap();
            let back = to_theta(&to_unconstrained(&t).unwrap()).to_array();
            for (x, y) in back.iter().zip(t.to_array()) {
                prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
            }
        }

        #[test]
        fn every_u_gives_valid_theta(u in proptest::array::uniform5(-U_BOUND..U_BOUND)) {
            prop_assume!(u[2] > -15.0 && u[4] > -15.0);
            prop_assert!(to_theta(&u).is_valid());
        }
    }
}
