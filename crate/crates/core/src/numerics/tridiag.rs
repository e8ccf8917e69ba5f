//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection.
//!
//! The count of negative LDL^T pivots of T - x I equals the number of
//! eigenvalues below x, which indexes eigenvalues directly: the k-th
//! eigenvalue (from 0) is where the count steps from k to k + 1.

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    pivot_min: f64,
}

impl SymTridiagonal {
    /// `off[i]` couples rows i and i + 1.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty(), "empty matrix");
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length mismatch");
        let max_off_sq = off.iter().fold(0.0f64, |m, e| m.max(e * e));
        let pivot_min = f64::MIN_POSITIVE * max_off_sq.max(1.0);
        Self { diag, off, pivot_min }
    }

    /// Symmetric standard form W^{-1/2} A W^{-1/2} of the generalized problem
    /// A v = lambda W v with tridiagonal A and positive diagonal W.
    pub fn from_generalized(a_diag: &[f64], a_off: &[f64], weights: &[f64]) -> Self {
        assert_eq!(a_diag.len(), weights.len());
        let diag = a_diag.iter().zip(weights).map(|(d, w)| d / w).collect();
        let off = a_off
            .iter()
            .enumerate()
            .map(|(i, e)| e / (weights[i] * weights[i + 1]).sqrt())
            .collect();
        Self::new(diag, off)
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < self.pivot_min {
            q = -self.pivot_min;
        }
        if q < 0.0 {
            count += 1;
        }
        for (d, e) in self.diag[1..].iter().zip(&self.off) {
            q = (d - x) - e * e / q;
            if q.abs() < self.pivot_min {
                q = -self.pivot_min;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        let pad = f64::EPSILON * lo.abs().max(hi.abs()) + self.pivot_min;
        (lo - pad, hi + pad)
    }

    fn bisect_index(&self, k: usize, mut lo: f64, mut hi: f64) -> f64 {
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return mid;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// The k-th smallest eigenvalue, counting from 0, to full working precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len(), "eigenvalue index {k} out of range");
        let (lo, hi) = self.gershgorin();
        self.bisect_index(k, lo, hi)
    }

    /// The k-th eigenvalue, searched only inside [lo, hi]; falls back to the
    /// full spectrum bounds when the bracket does not hold it.
    pub fn eigenvalue_in(&self, k: usize, lo: f64, hi: f64) -> f64 {
        if self.sturm_count(lo) <= k && self.sturm_count(hi) > k {
            self.bisect_index(k, lo, hi)
        } else {
            self.eigenvalue(k)
        }
    }

    /// The `count` smallest eigenvalues in ascending order.
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        assert!(count <= self.len());
        let (lo, hi) = self.gershgorin();
        let mut out = Vec::with_capacity(count);
        let mut floor = lo;
        for k in 0..count {
            let value = self.bisect_index(k, floor, hi);
            out.push(value);
            floor = value - f64::EPSILON * value.abs().max(1.0);
            floor = floor.max(lo);
        }
        out
    }

    /// Solves (T - shift I) x = rhs by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        // rows carry (sub, diag, sup1, sup2) after elimination
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - shift).collect();
        let mut du: Vec<f64> = self.off.clone();
        let mut dl: Vec<f64> = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut b = rhs.to_vec();
        let tiny = self.pivot_min.max(f64::EPSILON * self.gershgorin().1.abs());
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                let piv = if d[i].abs() < tiny { tiny } else { d[i] };
                d[i] = piv;
                let factor = dl[i] / piv;
                d[i + 1] -= factor * du[i];
                b[i + 1] -= factor * b[i];
                dl[i] = 0.0;
            } else {
                let factor = d[i] / dl[i];
                d[i] = dl[i];
                let tmp = d[i + 1];
                d[i + 1] = du[i] - factor * tmp;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -factor * du2[i];
                }
                du[i] = tmp;
                b.swap(i, i + 1);
                b[i + 1] -= factor * b[i];
            }
        }
        if d[n - 1].abs() < tiny {
            d[n - 1] = tiny;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = b[n - 1] / d[n - 1];
        if n >= 2 {
            x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        }
        x
    }

    /// Unit eigenvector for a converged eigenvalue, by inverse iteration.
    pub fn eigenvector(&self, eigenvalue: f64) -> Vec<f64> {
        let n = self.len();
        // deterministic start with components of both signs
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_75).fract())
            .collect();
        for _ in 0..3 {
            let mut x = self.solve_shifted(eigenvalue, &v);
            let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            x.iter_mut().for_each(|c| *c /= norm);
            v = x;
        }
        v
    }
}
