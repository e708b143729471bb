//! Littlewood-Paley decomposition on the periodic grid.
//!
//! The cutoffs are built from the smooth transition
//!
//! ```text
//! s(t)    = exp(-1/t) for t > 0, 0 otherwise
//! step(t) = s(t) / (s(t) + s(1 - t))
//! rho(r)  = 1 - step(2r - 1)                   (1 on r <= 1/2, 0 on r >= 1)
//! phi(r)  = rho(r/2) - rho(r)                  (supported on 1/2 < r < 2)
//! ```
//!
//! Block `-1` is `rho(|xi|)` and block `j >= 0` is `phi(|xi| / 2^j)`. The sum
//! over `j = -1..=J` telescopes to `rho(|xi| / 2^(J+1))`, which is identically
//! one once `2^J` exceeds the largest grid frequency.

use num_complex::Complex;

use super::field::{Field, Spectrum};
use super::grid::Grid;
use crate::scalar::Real;

/// Index of the low-frequency block.
pub const LOW_BLOCK: i32 = -1;

/// The smooth radial profiles behind the decomposition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MotherBump;

impl MotherBump {
    fn smooth_zero<T: Real>(t: T) -> T {
        if t > T::zero() {
            (-T::one() / t).exp()
        } else {
            T::zero()
        }
    }

    /// Smooth monotone transition from 0 (t <= 0) to 1 (t >= 1).
    pub fn step<T: Real>(t: T) -> T {
        let a = Self::smooth_zero(t);
        let b = Self::smooth_zero(T::one() - t);
        a / (a + b)
    }

    /// Low-pass profile `rho`.
    pub fn low<T: Real>(r: T) -> T {
        T::one() - Self::step(T::lit(2.0) * r - T::one())
    }

    /// Annular profile `phi`, supported on `1/2 < r < 2`.
    pub fn annulus<T: Real>(r: T) -> T {
        Self::low(r / T::lit(2.0)) - Self::low(r)
    }

    /// Cutoff of block `j` evaluated at frequency magnitude `r`.
    pub fn cutoff<T: Real>(j: i32, r: T) -> T {
        if j == LOW_BLOCK {
            Self::low(r)
        } else {
            Self::annulus(r / T::lit(2f64.powi(j)))
        }
    }
}

/// Largest block index needed to cover every frequency of `grid`.
pub fn top_block<T: Real>(grid: Grid<T>) -> i32 {
    let max = grid.max_frequency() * T::SQRT_2();
    let mut j = 0;
    while T::lit(2f64.powi(j)) < max {
        j += 1;
    }
    j
}

/// Frequency blocks of a field, indexed from [`LOW_BLOCK`] to `j_max`.
#[derive(Clone, Debug)]
pub struct DyadicLadder<T: Real> {
    pub j_max: i32,
    pub blocks: Vec<(i32, Field<T>)>,
}

impl<T: Real> DyadicLadder<T> {
    pub fn decompose(field: &Field<T>) -> Self {
        let mut blocks = Vec::new();
        let j_max = for_each_block(field, |j, block| blocks.push((j, block)));
        Self { j_max, blocks }
    }

    pub fn reconstruct(&self) -> Option<Field<T>> {
        let mut iter = self.blocks.iter();
        let (_, first) = iter.next()?;
        let mut sum = first.clone();
        for (_, b) in iter {
            sum = sum.add(b).ok()?;
        }
        Some(sum)
    }
}

/// Streams the blocks of `field` to `visit` without keeping them all alive.
/// Returns the top block index.
pub fn for_each_block<T: Real>(field: &Field<T>, mut visit: impl FnMut(i32, Field<T>)) -> i32 {
    let grid = field.grid();
    let spec = field.transform();
    let j_max = top_block(grid);
    for j in LOW_BLOCK..=j_max {
        let block = filter(&spec, j);
        let block = if field.is_real() {
            block.into_real_part()
        } else {
            block
        };
        visit(j, block);
    }
    j_max
}

fn filter<T: Real>(spec: &Spectrum<T>, j: i32) -> Field<T> {
    let mut s = spec.clone();
    s.apply(|a, b| Complex::new(MotherBump::cutoff(j, (a * a + b * b).sqrt()), T::zero()));
    s.into_field()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::norms::relative_l2_error;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn profiles_have_stated_supports() {
        assert_eq!(MotherBump::low(0.5_f64), 1.0);
        assert_eq!(MotherBump::low(1.0_f64), 0.0);
        assert_eq!(MotherBump::annulus(0.5_f64), 0.0);
        assert_eq!(MotherBump::annulus(2.0_f64), 0.0);
        assert!(MotherBump::annulus(1.0_f64) > 0.99);
        assert!((MotherBump::step(0.5_f64) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partition_of_unity_on_grid_frequencies() {
        for n in [64usize, 128, 256] {
            let grid = Grid::<f64>::new(n, 17.0).unwrap();
            let j_max = top_block(grid);
            let freqs = grid.frequencies();
            let mut worst = 0.0_f64;
            for &a in &freqs {
                for &b in &freqs {
                    let r: f64 = (a * a + b * b).sqrt();
                    let total: f64 = (LOW_BLOCK..=j_max).map(|j| MotherBump::cutoff(j, r)).sum();
                    worst = worst.max((total - 1.0).abs());
                }
            }
            assert!(worst <= 1e-12, "n = {n}: worst partition error {worst:e}");
        }
    }

    #[test]
    fn blocks_reconstruct_the_field() {
        for n in [64usize, 128, 256] {
            let grid = Grid::new(n, 9.0).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let values = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = Field::real(grid, values).unwrap();
            let ladder = DyadicLadder::decompose(&f);
            assert_eq!(ladder.blocks.first().unwrap().0, LOW_BLOCK);
            let back = ladder.reconstruct().unwrap();
            assert!(relative_l2_error(&back, &f) <= 1e-10);
        }
    }
}
