use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use rand::Rng;

/// Add to each simulated residual row a whole tidal row drawn uniformly with
/// replacement, so every draw keeps the vertical coherence of the tide.
pub fn recombine(residual_rows: &[Vec<f64>], tidal_pool: &[Vec<f64>], seed: u64) -> Result<Vec<Vec<f64>>> {
    let width = tidal_pool.first().map(Vec::len).ok_or_else(|| Error::invalid("empty tidal pool"))?;
    if tidal_pool.iter().any(|r| r.len() != width) {
        return Err(Error::invalid("ragged tidal pool"));
    }
    if let Some(i) = residual_rows.iter().position(|r| r.len() != width) {
        return Err(Error::invalid(format!(
            "residual row {i} has {} columns, tidal pool has {width}",
            residual_rows[i].len()
        )));
    }
    let mut rng = rng_from_seed(seed);
    Ok(residual_rows
        .iter()
        .map(|r| {
            let t = &tidal_pool[rng.random_range(0..tidal_pool.len())];
            r.iter().zip(t).map(|(a, b)| a + b).collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_pool_is_identity() {
        let r = vec![vec![1.0, 2.0], vec![-3.0, 0.5]];
        assert_eq!(recombine(&r, &[vec![0.0, 0.0]], 9).unwrap(), r);
    }

    #[test]
    fn zero_residuals_return_pool_rows() {
        let pool = vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]];
        let out = recombine(&vec![vec![0.0, 0.0]; 50], &pool, 1).unwrap();
        assert!(out.iter().all(|r| pool.contains(r)));
    }

    #[test]
    fn layout_mismatch() {
        assert!(recombine(&[vec![1.0]], &[vec![0.0, 0.0]], 0).is_err());
        assert!(recombine(&[vec![1.0]], &[], 0).is_err());
    }
}
