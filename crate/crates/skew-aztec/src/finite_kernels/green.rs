use crate::error::{Error, Result};
use crate::geometry::DomainSpec;
use crate::linalg::{DenseLu, DenseMatrix};

use super::symbols::{phi_hat, SymbolParams};

/// The inlier (green) kernel from non-intersecting paths and the LGV theorem.
#[derive(Debug, Clone)]
pub struct GreenKernel {
    spec: DomainSpec,
    lu: DenseLu,
}

impl GreenKernel {
    pub fn new(spec: &DomainSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.n;
        let delta = n - spec.m;
        let big_m = spec.big_m as usize;
        let full = SymbolParams { a: spec.a, s1: 0, s2: 2 * n + 1 };
        let a = DenseMatrix::from_fn(big_m, big_m, |i, j| {
            phi_hat(&full, 0, i as i64 - j as i64 + delta).into()
        });
        let lu = DenseLu::new(a).map_err(|e| Error::Singular(format!("LGV matrix: {e}")))?;
        let d = lu.det().norm();
        if d < 1e-300 {
            return Err(Error::Singular("LGV matrix has vanishing determinant".into()));
        }
        Ok(GreenKernel { spec: *spec, lu })
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    /// `K^green(s1, u1; s2, u2)` for `0 < s1, s2 < 2n + 1`.
    pub fn eval(&self, s1: i64, u1: i64, s2: i64, u2: i64) -> f64 {
        let n = self.spec.n;
        let a = self.spec.a;
        let delta = n - self.spec.m;
        let big_m = self.spec.big_m;
        let to_end = SymbolParams { a, s1, s2: 2 * n + 1 };
        let from_start = SymbolParams { a, s1: 0, s2 };
        let v2: Vec<_> = (1..=big_m)
            .map(|j| phi_hat(&from_start, 1 - j, u2).into())
            .collect();
        let x = self.lu.solve(&v2);
        let mut total: f64 = (1..=big_m)
            .map(|i| phi_hat(&to_end, u1, 1 - i + delta) * x[(i - 1) as usize].re)
            .sum();
        if s1 < s2 {
            total -= phi_hat(&SymbolParams { a, s1, s2 }, u1, u2);
        }
        total
    }
}

/// One-shot evaluation of the green kernel.
pub fn kgreen(spec: &DomainSpec, s1: i64, u1: i64, s2: i64, u2: i64) -> Result<f64> {
    let n = spec.n;
    if !(0 < s1 && s1 < 2 * n + 1 && 0 < s2 && s2 < 2 * n + 1) {
        return Err(Error::OutOfRange(format!("lines ({s1}, {s2}) must lie strictly inside (0, {})", 2 * n + 1)));
    }
    Ok(GreenKernel::new(spec)?.eval(s1, u1, s2, u2))
}
