//! Persistence images: fixed-grid vectorizations of persistence diagrams.
//!
//! Each diagram point `(b, d)` is first mapped to birth–persistence
//! coordinates `(b, d - b)`, then contributes an isotropic Gaussian weighted
//! by its persistence. A pixel's value is the exact integral of that weighted
//! sum over the pixel rectangle, computed as a product of per-axis normal CDF
//! differences. Mass falling outside the configured range is truncated, never
//! renormalized, so images from different diagrams stay comparable as long as
//! they share one [`ImageConfig`].

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::homology::{PersistenceDiagram, PersistencePair};

/// Point weighting applied on birth–persistence coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    /// Weight equals the persistence `d - b` (zero on the diagonal).
    LinearPersistence,
}

/// Geometry and kernel parameters of a persistence image.
///
/// A grid ensemble must share a single config — distances between image
/// vectors are meaningless otherwise, and [`concat_images`] enforces it.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageConfig {
    /// Pixel rows (persistence axis) and columns (birth axis).
    pub rows: usize,
    pub cols: usize,
    /// Standard deviation of the Gaussian placed on each point.
    pub sigma: f64,
    pub weighting: Weighting,
    /// Birth-axis range `[lo, hi]`.
    pub birth_range: (f64, f64),
    /// Persistence-axis range `[lo, hi]`.
    pub persistence_range: (f64, f64),
    /// Norm order for downstream image distances.
    pub p_norm: f64,
}

impl Default for ImageConfig {
    fn default() -> Self {
        Self {
            rows: 20,
            cols: 20,
            sigma: 0.1,
            weighting: Weighting::LinearPersistence,
            birth_range: (0.0, 1.0),
            persistence_range: (0.0, 1.0),
            p_norm: 2.0,
        }
    }
}

impl ImageConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidImageConfig {
                reason: "zero resolution".into(),
            });
        }
        if self.sigma <= 0.0 || !self.sigma.is_finite() {
            return Err(Error::InvalidImageConfig {
                reason: alloc::format!("sigma must be positive and finite, got {}", self.sigma),
            });
        }
        for (lo, hi) in [self.birth_range, self.persistence_range] {
            if lo >= hi || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidImageConfig {
                    reason: alloc::format!("degenerate range [{lo}, {hi}]"),
                });
            }
        }
        if self.p_norm < 1.0 || !self.p_norm.is_finite() {
            return Err(Error::InvalidNorm { p: self.p_norm });
        }
        Ok(())
    }

    /// Pixels per image.
    pub fn pixel_count(&self) -> usize {
        self.rows * self.cols
    }
}

/// A vectorized diagram: `rows * cols` non-negative pixel values, row-major
/// with the persistence axis ascending over rows.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceImage {
    pub dim: usize,
    pub values: Vec<f64>,
    pub config: ImageConfig,
}

/// Maps intervals `(b, d)` to birth–persistence coordinates `(b, d - b)`.
pub fn birth_persistence_transform(pairs: &[PersistencePair]) -> Vec<(f64, f64)> {
    pairs.iter().map(|p| (p.birth, p.death - p.birth)).collect()
}

/// Standard normal CDF.
fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + libm::erf(z / core::f64::consts::SQRT_2))
}

/// Integral of a 1-D Gaussian with mean `mu`, std `sigma` over `[lo, hi]`.
fn gaussian_mass(mu: f64, sigma: f64, lo: f64, hi: f64) -> f64 {
    normal_cdf((hi - mu) / sigma) - normal_cdf((lo - mu) / sigma)
}

/// Rasterizes one diagram into a persistence image.
///
/// An empty diagram produces the zero vector.
pub fn persistence_image(
    diagram: &PersistenceDiagram,
    config: &ImageConfig,
) -> Result<PersistenceImage> {
    config.validate()?;
    let points = birth_persistence_transform(&diagram.pairs);
    let mut values = alloc::vec![0.0f64; config.pixel_count()];

    let (b_lo, b_hi) = config.birth_range;
    let (p_lo, p_hi) = config.persistence_range;
    let col_width = (b_hi - b_lo) / config.cols as f64;
    let row_height = (p_hi - p_lo) / config.rows as f64;

    for (birth, persistence) in points {
        let weight = match config.weighting {
            Weighting::LinearPersistence => persistence,
        };
        if weight == 0.0 {
            continue;
        }
        // Separable kernel: precompute the per-axis masses once.
        let col_mass: Vec<f64> = (0..config.cols)
            .map(|c| {
                let lo = b_lo + c as f64 * col_width;
                gaussian_mass(birth, config.sigma, lo, lo + col_width)
            })
            .collect();
        for r in 0..config.rows {
            let lo = p_lo + r as f64 * row_height;
            let row_mass = gaussian_mass(persistence, config.sigma, lo, lo + row_height);
            if row_mass == 0.0 {
                continue;
            }
            let row = &mut values[r * config.cols..(r + 1) * config.cols];
            for (pixel, cm) in row.iter_mut().zip(&col_mass) {
                *pixel += weight * row_mass * cm;
            }
        }
    }
    Ok(PersistenceImage {
        dim: diagram.dim,
        values,
        config: config.clone(),
    })
}

/// Concatenates per-dimension images (ascending dimension) into one vector.
pub fn concat_images(images: &[PersistenceImage]) -> Result<Vec<f64>> {
    if let Some(first) = images.first() {
        if images.iter().any(|im| im.config != first.config) {
            return Err(Error::ConfigMismatch);
        }
    }
    for pair in images.windows(2) {
        if pair[0].dim >= pair[1].dim {
            return Err(Error::InvalidImageConfig {
                reason: "images must be ordered by strictly ascending dimension".into(),
            });
        }
    }
    let mut out = Vec::with_capacity(images.iter().map(|im| im.values.len()).sum());
    for image in images {
        out.extend_from_slice(&image.values);
    }
    Ok(out)
}

/// `p`-norm of a vector.
pub(crate) fn lp_norm(values: impl Iterator<Item = f64>, p: f64) -> Result<f64> {
    if p < 1.0 || !p.is_finite() {
        return Err(Error::InvalidNorm { p });
    }
    if p == 1.0 {
        return Ok(values.map(f64::abs).sum());
    }
    if p == 2.0 {
        return Ok(libm::sqrt(values.map(|v| v * v).sum()));
    }
    let total: f64 = values.map(|v| libm::pow(v.abs(), p)).sum();
    Ok(libm::pow(total, 1.0 / p))
}

/// Lebesgue `p`-distance between two image vectors of equal length.
pub fn image_distance(a: &[f64], b: &[f64], p: f64) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    lp_norm(a.iter().zip(b.iter()).map(|(x, y)| x - y), p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn diagram(dim: usize, pairs: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram {
            dim,
            pairs: pairs
                .iter()
                .map(|(b, d)| PersistencePair {
                    birth: *b,
                    death: *d,
                    essential: false,
                })
                .collect(),
            essential_count: 0,
        }
    }

    #[test]
    fn transform_shifts_death_to_persistence() {
        let pairs = diagram(1, &[(0.2, 0.6), (0.0, 1.0)]).pairs;
        let transformed = birth_persistence_transform(&pairs);
        assert_eq!(transformed.len(), 2);
        assert_eq!(transformed[0].0, 0.2);
        assert!((transformed[0].1 - 0.4).abs() < 1e-15);
        assert_eq!(transformed[1], (0.0, 1.0));
        assert!(birth_persistence_transform(&[]).is_empty());
    }

    #[test]
    fn empty_diagram_is_the_zero_vector() {
        let image = persistence_image(&diagram(1, &[]), &ImageConfig::default()).unwrap();
        assert_eq!(image.values.len(), 400);
        assert!(image.values.iter().all(|v| *v == 0.0));
    }

    /// Total mass of a single-point image equals the weight times the
    /// Gaussian mass inside the range, checked against composite Simpson
    /// quadrature of the density (an independent integration route).
    #[test]
    fn single_point_mass_matches_quadrature() {
        let config = ImageConfig::default();
        let image = persistence_image(&diagram(1, &[(0.2, 0.6)]), &config).unwrap();
        let total: f64 = image.values.iter().sum();

        let simpson = |mu: f64, lo: f64, hi: f64| -> f64 {
            let n = 10_000usize; // even
            let h = (hi - lo) / n as f64;
            let density = |x: f64| {
                libm::exp(-(x - mu) * (x - mu) / (2.0 * 0.1 * 0.1))
                    / (0.1 * libm::sqrt(2.0 * core::f64::consts::PI))
            };
            let mut acc = density(lo) + density(hi);
            for i in 1..n {
                let factor = if i % 2 == 1 { 4.0 } else { 2.0 };
                acc += factor * density(lo + i as f64 * h);
            }
            acc * h / 3.0
        };
        // Transformed point is (0.2, 0.4) with weight 0.4.
        let expected = 0.4 * simpson(0.2, 0.0, 1.0) * simpson(0.4, 0.0, 1.0);
        assert!(
            (total - expected).abs() < 1e-6,
            "total {total} vs quadrature {expected}"
        );
    }

    #[test]
    fn duplicated_point_doubles_the_image() {
        let config = ImageConfig::default();
        let single = persistence_image(&diagram(1, &[(0.2, 0.6)]), &config).unwrap();
        let double = persistence_image(&diagram(1, &[(0.2, 0.6), (0.2, 0.6)]), &config).unwrap();
        for (s, d) in single.values.iter().zip(double.values.iter()) {
            assert_eq!(*d, 2.0 * *s);
        }
    }

    #[test]
    fn image_of_union_is_sum_of_images() {
        let config = ImageConfig::default();
        let a = persistence_image(&diagram(1, &[(0.1, 0.5)]), &config).unwrap();
        let b = persistence_image(&diagram(1, &[(0.3, 0.9), (0.0, 0.2)]), &config).unwrap();
        let union =
            persistence_image(&diagram(1, &[(0.1, 0.5), (0.3, 0.9), (0.0, 0.2)]), &config).unwrap();
        for ((x, y), u) in a.values.iter().zip(&b.values).zip(&union.values) {
            assert!((x + y - u).abs() < 1e-15);
        }
    }

    #[test]
    fn pixels_are_finite_and_non_negative() {
        let config = ImageConfig::default();
        let image = persistence_image(&diagram(2, &[(0.0, 1.0), (0.45, 0.55)]), &config).unwrap();
        assert!(image.values.iter().all(|v| v.is_finite() && *v >= 0.0));
    }

    #[test]
    fn concat_orders_blocks_by_dimension() {
        let config = ImageConfig::default();
        let one = persistence_image(&diagram(1, &[(0.2, 0.6)]), &config).unwrap();
        let two = persistence_image(&diagram(2, &[]), &config).unwrap();
        let vector = concat_images(&[one.clone(), two.clone()]).unwrap();
        assert_eq!(vector.len(), 800);
        assert_eq!(&vector[..400], one.values.as_slice());
        assert!(vector[400..].iter().all(|v| *v == 0.0));

        // Single image passes through unchanged.
        assert_eq!(
            concat_images(core::slice::from_ref(&one)).unwrap(),
            one.values
        );

        // Mismatched configs are rejected.
        let other = ImageConfig {
            sigma: 0.2,
            ..ImageConfig::default()
        };
        let odd = persistence_image(&diagram(2, &[]), &other).unwrap();
        assert_eq!(concat_images(&[one, odd]), Err(Error::ConfigMismatch));
    }

    #[test]
    fn distance_basics() {
        assert_eq!(image_distance(&[1.0, 2.0], &[1.0, 2.0], 2.0).unwrap(), 0.0);
        let a = vec![0.0, 0.0, 0.0];
        let b = vec![0.3, 0.4, 0.0];
        assert!((image_distance(&a, &b, 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            image_distance(&[0.0], &[0.0, 1.0], 2.0),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            image_distance(&[0.0], &[1.0], 0.5),
            Err(Error::InvalidNorm { .. })
        ));
    }

    #[test]
    fn one_norm_matches_direct_summation() {
        // Fixed pseudo-random data; the oracle is a plain loop.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let a: Vec<f64> = (0..257).map(|_| next()).collect();
        let b: Vec<f64> = (0..257).map(|_| next()).collect();
        let mut direct = 0.0;
        for i in 0..a.len() {
            direct += (a[i] - b[i]).abs();
        }
        assert!((image_distance(&a, &b, 1.0).unwrap() - direct).abs() < 1e-12);
    }
}
