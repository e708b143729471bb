use crate::error::{LabError, Result};
use crate::field::{Field, Grid};
use crate::scalar::Real;

/// The logarithmic bump of parameter `m` and outer radius `rho`:
/// `sqrt(m/2π)` on `|x| <= ρe^{-m}`, `log(ρ/|x|)/sqrt(2πm)` on the annulus,
/// zero outside, so that `‖∇·‖^2 = 1` on the plane.
///
/// The sampled profile is the average of the radial profile over
/// `[r - h/2, r + h/2]`, which smooths both corners over one cell.
pub fn moser_bump<T: Real>(m: T, rho: T, grid: Grid<T>) -> Result<Field<T>> {
    if !(m >= T::one()) {
        return Err(LabError::InvalidParameter(format!("bump parameter m = {m} must be at least 1")));
    }
    if !(rho > T::zero() && rho < grid.length() / T::lit(4.0)) {
        return Err(LabError::InvalidParameter(format!(
            "bump radius {rho} must lie in (0, L/4)"
        )));
    }
    let core = rho * (-m).exp();
    let h = grid.spacing();
    if core < h {
        return Err(LabError::UnderResolved(format!(
            "core radius ρe^(-m) = {core} is below the grid spacing {h}"
        )));
    }
    let tau = T::TAU();
    let height = (m / tau).sqrt();
    let slope = T::one() / (tau * m).sqrt();
    // antiderivative of the radial profile
    let primitive = |s: T| -> T {
        if s <= core {
            height * s
        } else if s <= rho {
            height * core + slope * (s * (rho / s).ln() + s - core * (rho / core).ln() - core)
        } else {
            height * core + slope * (rho - core * m - core)
        }
    };
    let half = h / T::lit(2.0);
    Ok(Field::from_real_fn(grid, |x, y| {
        let r = (x * x + y * y).sqrt();
        let lo = (r - half).max(T::zero());
        let hi = r + half;
        (primitive(hi) - primitive(lo)) / (hi - lo)
    }))
}

/// `‖·‖^2` of the exact bump: `ρ^2 ((1 - e^{-2m}) / (4m) - e^{-2m} / 2)`.
pub fn moser_l2_sq_exact(m: f64, rho: f64) -> f64 {
    let decay = (-2.0 * m).exp();
    rho * rho * ((1.0 - decay) / (4.0 * m) - decay / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::norms::{gradient_norm_sq, l2_norm_sq};

    #[test]
    fn gradient_is_near_one() {
        let grid = Grid::<f64>::new(1024, 16.0).unwrap();
        let bump = moser_bump(3.0, 2.0, grid).unwrap();
        let g = gradient_norm_sq(&bump);
        assert!((g - 1.0).abs() < 2e-2, "‖∇φ‖² = {g}");
        let l2 = l2_norm_sq(&bump);
        assert!((l2 - moser_l2_sq_exact(3.0, 2.0)).abs() < 1e-3);
    }

    #[test]
    fn l2_norm_decreases_with_m() {
        let mut prev = f64::INFINITY;
        for m in 1..=8 {
            let v = moser_l2_sq_exact(m as f64, 2.0);
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 0.2);
    }

    #[test]
    fn rejects_bad_parameters() {
        let grid = Grid::<f64>::new(64, 16.0).unwrap();
        assert!(moser_bump(0.5, 2.0, grid).is_err());
        assert!(moser_bump(2.0, 5.0, grid).is_err());
        assert!(matches!(moser_bump(6.0, 2.0, grid), Err(LabError::UnderResolved(_))));
    }
}
