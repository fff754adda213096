//! Dense real-symmetric linear algebra: cyclic Jacobi eigendecomposition,
//! eigenbasis linear solves and exact matrix squares.
//!
//! This is the numeric kernel the rest of the crate sits on. It is written
//! for the small dense matrices this crate works with (a few hundred rows at
//! most); no attempt is made to be competitive beyond that.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A dense real symmetric matrix, stored row-major.
///
/// Symmetry is exact by construction: every constructor either mirrors the
/// upper triangle or rejects input whose halves differ bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealSymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Build from explicit rows. The input must be square, finite and
    /// exactly symmetric; use [`Hamiltonian::from_dense`] for input that
    /// carries round-off asymmetry.
    ///
    /// [`Hamiltonian::from_dense`]: crate::models::Hamiltonian::from_dense
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare);
            }
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            data.extend_from_slice(row);
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                if a != b {
                    return Err(Error::Asymmetric {
                        i,
                        j,
                        diff: (a - b).abs(),
                    });
                }
            }
        }
        Ok(Self { n, data })
    }

    /// Build by evaluating `f(i, j)` on the upper triangle (`i <= j`) and
    /// mirroring, so symmetry holds exactly whatever `f` does.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Set entry (i, j) and its mirror (j, i).
    pub fn set_sym(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Largest entry magnitude; zero for an empty matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let row = self.row(i);
            let mut acc = 0.0;
            for j in 0..self.n {
                acc += row[j] * x[j];
            }
            y[i] = acc;
        }
    }

    pub fn matvec_complex(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::ZERO; self.n];
        self.matvec_complex_into(x, &mut y);
        y
    }

    pub fn matvec_complex_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        for i in 0..self.n {
            let row = self.row(i);
            let mut re = 0.0;
            let mut im = 0.0;
            for j in 0..self.n {
                re += row[j] * x[j].re;
                im += row[j] * x[j].im;
            }
            y[i] = Complex64::new(re, im);
        }
    }

    /// Quadratic form xᵀ M x.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            let row = self.row(i);
            let mut ri = 0.0;
            for j in 0..self.n {
                ri += row[j] * x[j];
            }
            acc += x[i] * ri;
        }
        acc
    }
}

/// Eigenvalues and eigenvectors of a real symmetric matrix.
///
/// Row `k` of the eigenvector block is the k-th eigenvector; eigenvalues are
/// sorted ascending. The sign of every eigenvector is fixed so that its
/// largest-magnitude component is positive (lowest index wins on ties),
/// which keeps downstream trajectories reproducible run to run.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    n: usize,
    eigenvalues: Vec<f64>,
    // row-major, row k = eigenvector k
    vectors: Vec<f64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }

    /// Expand a real vector in the eigenbasis: `a_k = Σ_n B_kn x_n`.
    pub fn mode_coefficients(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|k| {
                let b = self.eigenvector(k);
                b.iter().zip(x).map(|(bn, xn)| bn * xn).sum()
            })
            .collect()
    }

    /// Expand a complex vector in the (real) eigenbasis.
    pub fn mode_coefficients_complex(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|k| {
                let b = self.eigenvector(k);
                b.iter().zip(x).map(|(bn, xn)| xn * *bn).sum()
            })
            .collect()
    }

    /// Recombine mode coefficients into the site basis: `x_n = Σ_k a_k B_kn`.
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for k in 0..self.n {
            let b = self.eigenvector(k);
            for n in 0..self.n {
                x[n] += coeffs[k] * b[n];
            }
        }
        x
    }

    /// Σ_k E_k B_k B_kᵀ, which should recover the matrix that was decomposed.
    pub fn reconstruct(&self) -> RealSymmetricMatrix {
        RealSymmetricMatrix::from_fn(self.n, |i, j| {
            (0..self.n)
                .map(|k| {
                    let b = self.eigenvector(k);
                    self.eigenvalues[k] * b[i] * b[j]
                })
                .sum()
        })
    }
}

const MAX_JACOBI_SWEEPS: usize = 100;

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Deterministic for a given input: eigenvalues come out ascending and each
/// eigenvector's sign follows the convention documented on
/// [`SpectralDecomposition`]. Convergence is quadratic; for finite symmetric
/// input the off-diagonal mass underflows to zero well inside the sweep
/// bound, so a convergence failure signals a corrupted matrix.
pub fn eig_sym(m: &RealSymmetricMatrix) -> Result<SpectralDecomposition> {
    let n = m.dim();
    if n == 0 {
        return Ok(SpectralDecomposition {
            n,
            eigenvalues: vec![],
            vectors: vec![],
        });
    }

    let mut a = m.data.clone();
    // Accumulated rotations; column j converges to eigenvector j.
    let mut v = RealSymmetricMatrix::identity(n).data;
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    let mut converged = false;
    for sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].abs();
            }
        }
        if off == 0.0 {
            converged = true;
            break;
        }
        // First sweeps: only rotate elements above a shrinking threshold.
        let tresh = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };

        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = 100.0 * apq.abs();
                // Skip rotations that can no longer change the diagonal.
                if sweep > 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a[p * n + q] = 0.0;
                    continue;
                }
                if apq.abs() <= tresh {
                    continue;
                }

                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;

                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a[p * n + q] = 0.0;

                let rotate = |a: &mut [f64], i: usize, j: usize, k: usize, l: usize| {
                    let g = a[i * n + j];
                    let h = a[k * n + l];
                    a[i * n + j] = g - s * (h + g * tau);
                    a[k * n + l] = h + s * (g - h * tau);
                };
                for j in 0..p {
                    rotate(&mut a, j, p, j, q);
                }
                for j in (p + 1)..q {
                    rotate(&mut a, p, j, j, q);
                }
                for j in (q + 1)..n {
                    rotate(&mut a, p, j, q, j);
                }
                for j in 0..n {
                    rotate(&mut v, j, p, j, q);
                }
            }
        }

        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            sweeps: MAX_JACOBI_SWEEPS,
        });
    }

    // Ascending eigenvalue order; stable sort keeps degenerate pairs in
    // rotation order so repeated runs agree bit for bit.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("finite eigenvalues"));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut vectors = vec![0.0; n * n];
    for (k, &src) in order.iter().enumerate() {
        eigenvalues.push(d[src]);
        let row = &mut vectors[k * n..(k + 1) * n];
        for i in 0..n {
            row[i] = v[i * n + src];
        }
        // Sign convention: largest-magnitude component positive, earliest
        // such component deciding ties.
        let mut lead = 0;
        for i in 1..n {
            if row[i].abs() > row[lead].abs() {
                lead = i;
            }
        }
        if row[lead] < 0.0 {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
    }

    Ok(SpectralDecomposition {
        n,
        eigenvalues,
        vectors,
    })
}

/// Relative eigenvalue cutoff below which a matrix is treated as singular.
pub const SINGULARITY_CUTOFF: f64 = 1e-12;

/// Solve `M x = b` for symmetric `M` through its eigenbasis.
///
/// Returns [`Error::Singular`] when the smallest eigenvalue magnitude drops
/// below [`SINGULARITY_CUTOFF`] relative to the largest.
pub fn solve_sym(m: &RealSymmetricMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            got: rhs.len(),
        });
    }
    let dec = eig_sym(m)?;
    solve_with_decomposition(&dec, rhs)
}

/// Same as [`solve_sym`] but reusing an existing decomposition, for callers
/// that solve against the same matrix repeatedly.
pub fn solve_with_decomposition(dec: &SpectralDecomposition, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != dec.dim() {
        return Err(Error::DimensionMismatch {
            expected: dec.dim(),
            got: rhs.len(),
        });
    }
    let max = dec.eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let min = dec
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |m, e| m.min(e.abs()));
    if max == 0.0 || min <= SINGULARITY_CUTOFF * max {
        return Err(Error::Singular);
    }
    let mut coeffs = dec.mode_coefficients(rhs);
    for (c, e) in coeffs.iter_mut().zip(&dec.eigenvalues) {
        *c /= e;
    }
    Ok(dec.synthesize(&coeffs))
}

/// Exact matrix product M·M. Symmetry of the result is bit-exact because
/// entry (i,j) and entry (j,i) reduce to the same sum of products.
pub fn mat_square(m: &RealSymmetricMatrix) -> RealSymmetricMatrix {
    let n = m.dim();
    RealSymmetricMatrix::from_fn(n, |i, j| {
        let (ri, rj) = (m.row(i), m.row(j));
        let mut acc = 0.0;
        for k in 0..n {
            acc += ri[k] * rj[k];
        }
        acc
    })
}
