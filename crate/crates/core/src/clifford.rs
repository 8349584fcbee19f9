//! Complex Clifford modules with the convention `c(v)c(w) + c(w)c(v) =
//! −2⟨v,w⟩` and skew-Hermitian generators.

use num_complex::Complex64;

use crate::{max_abs, CMatrix, CVector, Error, Result, I};

/// Tolerance for the algebraic identities checked by [`CliffordModule::new`].
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Generators `c_1..c_q` of a complex `Cl(q)`-module.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordModule {
    fiber_dim: usize,
    generators: Vec<CMatrix>,
}

impl CliffordModule {
    /// Validates the anticommutation and skew-adjointness relations.
    pub fn new(generators: Vec<CMatrix>) -> Result<Self> {
        let fiber_dim = generators.first().map_or(1, |g| g.nrows());
        for g in &generators {
            if g.nrows() != fiber_dim || g.ncols() != fiber_dim {
                return Err(Error::DimensionMismatch {
                    what: "Clifford generator",
                    expected: fiber_dim,
                    found: g.nrows().max(g.ncols()),
                });
            }
        }
        let module = Self { fiber_dim, generators };
        let (anti, skew) = module.defects();
        if anti > ALGEBRA_TOL || skew > ALGEBRA_TOL {
            return Err(Error::InvalidInput(format!(
                "generators violate Clifford relations (anticommutator {anti:.2e}, skew {skew:.2e})"
            )));
        }
        Ok(module)
    }

    /// Jordan–Wigner ladder on `⌊q/2⌋` qubits.
    ///
    /// With `γ_{2j−1} = σ_z^{⊗(j−1)} ⊗ (−σ_y) ⊗ 1`, `γ_{2j} = σ_z^{⊗(j−1)} ⊗ σ_x ⊗ 1`
    /// and, for odd `q`, `γ_q = σ_z^{⊗⌊q/2⌋}`, the generators are `c_j = iγ_j`.
    /// For `q = 2` this gives `[[0,−1],[1,0]]` and `[[0,i],[i,0]]`; for `q = 1`
    /// the single generator `[i]`.
    pub fn standard(q: usize) -> Self {
        assert!(q >= 1, "Clifford rank must be positive");
        let qubits = q / 2;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let id2 = CMatrix::identity(2, 2);
        let sz = CMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]);
        let sx = CMatrix::from_row_slice(2, 2, &[zero, one, one, zero]);
        let neg_sy = CMatrix::from_row_slice(2, 2, &[zero, I, -I, zero]);

        let string = |slot: usize, op: &CMatrix| {
            let mut acc = CMatrix::identity(1, 1);
            for k in 0..qubits {
                let factor = match k.cmp(&slot) {
                    std::cmp::Ordering::Less => &sz,
                    std::cmp::Ordering::Equal => op,
                    std::cmp::Ordering::Greater => &id2,
                };
                acc = acc.kronecker(factor);
            }
            acc
        };
        let mut gammas = Vec::with_capacity(q);
        for j in 0..qubits {
            gammas.push(string(j, &neg_sy));
            gammas.push(string(j, &sx));
        }
        if q % 2 == 1 {
            let mut acc = CMatrix::identity(1, 1);
            for _ in 0..qubits {
                acc = acc.kronecker(&sz);
            }
            gammas.push(acc);
        }
        Self { fiber_dim: 1 << qubits, generators: gammas.into_iter().map(|g| g * I).collect() }
    }

    /// Rank `q` of the underlying Euclidean space.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn generator(&self, j: usize) -> &CMatrix {
        &self.generators[j]
    }

    /// `c(v) = Σ v_j c_j` for frame coordinates `v` (real or complex).
    pub fn action<T>(&self, v: &[T]) -> Result<CMatrix>
    where
        T: Copy + Into<Complex64>,
    {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                what: "Clifford coordinates",
                expected: self.rank(),
                found: v.len(),
            });
        }
        let mut out = CMatrix::zeros(self.fiber_dim, self.fiber_dim);
        for (c, &x) in self.generators.iter().zip(v) {
            let x: Complex64 = x.into();
            if x != Complex64::new(0.0, 0.0) {
                out += c * x;
            }
        }
        Ok(out)
    }

    /// `(Σ v_j c_j) s`.
    pub fn multiply<T>(&self, v: &[T], s: &CVector) -> Result<CVector>
    where
        T: Copy + Into<Complex64>,
    {
        if s.len() != self.fiber_dim {
            return Err(Error::DimensionMismatch { what: "fiber vector", expected: self.fiber_dim, found: s.len() });
        }
        Ok(self.action(v)? * s)
    }

    /// Largest defects of `c_i c_j + c_j c_i + 2δ_ij` and `c_i† + c_i`.
    pub fn defects(&self) -> (f64, f64) {
        let n = self.fiber_dim;
        let id = CMatrix::identity(n, n);
        let mut anti: f64 = 0.0;
        let mut skew: f64 = 0.0;
        for (i, ci) in self.generators.iter().enumerate() {
            skew = skew.max(max_abs(&(ci.adjoint() + ci)));
            for (j, cj) in self.generators.iter().enumerate().skip(i) {
                let mut ac = ci * cj + cj * ci;
                if i == j {
                    ac += &id * Complex64::new(2.0, 0.0);
                }
                anti = anti.max(max_abs(&ac));
            }
        }
        (anti, skew)
    }

    /// Module for the rotated orthonormal frame `u'_b = Σ_d R_bd u_d`.
    pub fn rotated(&self, rotation: &nalgebra::DMatrix<f64>) -> Result<Self> {
        let q = self.rank();
        if rotation.nrows() != q || rotation.ncols() != q {
            return Err(Error::DimensionMismatch { what: "frame rotation", expected: q, found: rotation.nrows() });
        }
        let generators = (0..q)
            .map(|b| {
                let row: Vec<f64> = (0..q).map(|d| rotation[(b, d)]).collect();
                self.action(&row)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(generators)
    }
}
