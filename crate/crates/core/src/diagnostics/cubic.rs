//! The `C^{1,1}` radial cutoff and the cubic decomposition built from it.
//!
//! ```text
//! χ(r) = 1                   r <= 2
//!      = 1 - (r - 2)^2 / 8   2 < r <= 4
//!      = (r - 6)^2 / 8       4 < r <= 6
//!      = 0                   r > 6
//! ```
//!
//! Pieces are `φ^{j,k}(x) = χ(x - 2√2 (j, k)) φ(x)`. The box is treated as a
//! subset of the plane: distances do not wrap around the torus.

use num_complex::Complex;

use crate::error::Result;
use crate::field::{Field, Grid};
use crate::quadrature::gauss_legendre_on;
use crate::scalar::Real;

/// Spacing of the lattice of cutoff centres.
pub const LATTICE_SPACING: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Radius of the support of `χ`.
pub const CUTOFF_SUPPORT: f64 = 6.0;

pub fn chi<T: Real>(r: T) -> T {
    let two = T::lit(2.0);
    let eight = T::lit(8.0);
    if r <= two {
        T::one()
    } else if r <= T::lit(4.0) {
        T::one() - (r - two) * (r - two) / eight
    } else if r <= T::lit(6.0) {
        (r - T::lit(6.0)) * (r - T::lit(6.0)) / eight
    } else {
        T::zero()
    }
}

/// `χ'(r)`.
pub fn chi_prime<T: Real>(r: T) -> T {
    if r <= T::lit(2.0) || r > T::lit(6.0) {
        T::zero()
    } else if r <= T::lit(4.0) {
        -(r - T::lit(2.0)) / T::lit(4.0)
    } else {
        (r - T::lit(6.0)) / T::lit(4.0)
    }
}

/// `Δχ = χ''(r) + χ'(r) / r`.
pub fn chi_laplacian<T: Real>(r: T) -> T {
    let second = if r <= T::lit(2.0) || r > T::lit(6.0) {
        T::zero()
    } else if r <= T::lit(4.0) {
        -T::lit(0.25)
    } else {
        T::lit(0.25)
    };
    if r <= T::lit(2.0) {
        second
    } else {
        second + chi_prime(r) / r
    }
}

/// `χ(x - c)` for a point and a centre.
pub fn cubic_chi<T: Real>(x: (T, T), center: (T, T)) -> T {
    let dx = x.0 - center.0;
    let dy = x.1 - center.1;
    chi((dx * dx + dy * dy).sqrt())
}

/// Physical position of lattice site `(j, k)`.
pub fn lattice_center<T: Real>(j: i64, k: i64) -> (T, T) {
    let s = T::lit(LATTICE_SPACING);
    (s * T::lit(j as f64), s * T::lit(k as f64))
}

/// Lattice indices whose cutoff can be nonzero within `[lo, hi]`.
fn index_range(lo: f64, hi: f64) -> std::ops::RangeInclusive<i64> {
    let a = ((lo - CUTOFF_SUPPORT) / LATTICE_SPACING).floor() as i64;
    let b = ((hi + CUTOFF_SUPPORT) / LATTICE_SPACING).ceil() as i64;
    a..=b
}

/// Lattice sites whose cutoff meets the box.
pub fn lattice_sites<T: Real>(grid: Grid<T>) -> Vec<(i64, i64)> {
    let half = grid.length().as_f64() / 2.0;
    let range = index_range(-half, half);
    let mut sites = Vec::new();
    for j in range.clone() {
        for k in range.clone() {
            sites.push((j, k));
        }
    }
    sites
}

/// Lazily evaluated cubic pieces of a field.
pub struct CubicDecomposition<'a, T: Real> {
    field: &'a Field<T>,
    sites: Vec<(i64, i64)>,
}

impl<'a, T: Real> CubicDecomposition<'a, T> {
    pub fn new(field: &'a Field<T>) -> Self {
        Self {
            field,
            sites: lattice_sites(field.grid()),
        }
    }

    pub fn sites(&self) -> &[(i64, i64)] {
        &self.sites
    }

    pub fn piece(&self, site: (i64, i64)) -> Field<T> {
        let grid = self.field.grid();
        let c = lattice_center::<T>(site.0, site.1);
        let values = self
            .field
            .values()
            .iter()
            .enumerate()
            .map(|(idx, &v)| v * cubic_chi(grid.point(idx), c))
            .collect();
        let piece = Field::complex(grid, values).expect("piece lives on the field's grid");
        if self.field.is_real() {
            piece.into_real_part()
        } else {
            piece
        }
    }

    pub fn pieces(&self) -> impl Iterator<Item = ((i64, i64), Field<T>)> + '_ {
        self.sites.iter().map(move |&s| (s, self.piece(s)))
    }
}

/// Calls `visit(site, χ(x - c_site))` for every site near `x`.
fn for_nearby_sites<T: Real>(x: (T, T), mut visit: impl FnMut(T)) {
    let (xf, yf) = (x.0.as_f64(), x.1.as_f64());
    for j in index_range(xf, xf) {
        for k in index_range(yf, yf) {
            visit(cubic_chi(x, lattice_center(j, k)));
        }
    }
}

/// `sum_{j,k} ‖φ^{j,k}‖^2 / ‖φ‖^2`.
pub fn cubic_l2_ratio<T: Real>(field: &Field<T>) -> T {
    let grid = field.grid();
    let mut weighted = T::zero();
    let mut total = T::zero();
    for (idx, v) in field.values().iter().enumerate() {
        let m = v.norm_sqr();
        if m == T::zero() {
            continue;
        }
        let mut w = T::zero();
        for_nearby_sites(grid.point(idx), |c| w = w + c * c);
        weighted = weighted + w * m;
        total = total + m;
    }
    if total == T::zero() {
        T::one()
    } else {
        weighted / total
    }
}

/// `min_x max_{j,k} χ(x - c_{j,k})` over grid points.
pub fn covering_min_max<T: Real>(grid: Grid<T>) -> T {
    let mut worst = T::one();
    for idx in 0..grid.len() {
        let mut best = T::zero();
        for_nearby_sites(grid.point(idx), |c| best = best.max(c));
        worst = worst.min(best);
    }
    worst
}

/// Residual of `‖∇(ψφ)‖^2 = ∫ ψ^2 |∇φ|^2 - ψ Δψ |φ|^2` with `ψ = χ(· - c)`,
/// relative to `‖φ‖_{H^1}^2`.
///
/// Both sides are integrated on a polar Gauss-Legendre rule centred at `c`,
/// with `φ` and `∇φ` taken from the trigonometric interpolant and `ψ`, `∇ψ`,
/// `Δψ` in closed form, so the check does not inherit the grid's resolution
/// of the kinks of `χ''`.
pub fn h1_cutoff_identity_check<T: Real>(field: &Field<T>, center: (T, T)) -> Result<T> {
    const RADIAL_ORDER: usize = 40;
    const ANGLES: usize = 160;
    let spec = field.transform();
    let h1 = spec.weighted_l2_sq(|a, b| T::one() + a * a + b * b);
    if h1 == T::zero() {
        return Ok(T::zero());
    }
    let interp = spec.interpolant(T::lit(1e-15));
    let mut lhs = T::zero();
    let mut rhs = T::zero();
    let dtheta = T::TAU() / T::from_count(ANGLES);
    for (a, b) in [(0.0, 2.0), (2.0, 4.0), (4.0, 6.0)] {
        for (r, w) in gauss_legendre_on::<T>(T::lit(a), T::lit(b), RADIAL_ORDER) {
            let psi = chi(r);
            let dpsi = chi_prime(r);
            let lap = chi_laplacian(r);
            for m in 0..ANGLES {
                let theta = dtheta * T::from_count(m);
                let (s, c) = theta.sin_cos();
                let (u, ux, uy) = interp.value_and_gradient(center.0 + r * c, center.1 + r * s);
                let gx: Complex<T> = ux * psi + u * (dpsi * c);
                let gy: Complex<T> = uy * psi + u * (dpsi * s);
                let weight = w * r * dtheta;
                lhs = lhs + weight * (gx.norm_sqr() + gy.norm_sqr());
                rhs = rhs + weight * (psi * psi * (ux.norm_sqr() + uy.norm_sqr()) - psi * lap * u.norm_sqr());
            }
        }
    }
    Ok(num_traits::Float::abs(lhs - rhs) / h1)
}
