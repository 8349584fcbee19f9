//! Pointwise frame/connection samples for an orthogonal splitting
//! `TM = Q ⊕ L`.
//!
//! A sample stores the combined orthonormal frame `u = (f_1..f_q, e_1..e_p)`
//! implicitly through its connection coefficients
//! `∇_{u_a} u_b = Σ_c Γ_a[b][c] u_c`. The projection `π` onto `Q` is the
//! coordinate split that keeps the first `q` slots.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::clifford::CliffordModule;
use crate::{max_abs, CMatrix, Error, Result};

/// Skew-symmetry tolerance for metric connections.
pub const METRIC_TOL: f64 = 1e-12;

/// `π` (keep the `Q` block) and `1 − π` (keep the `L` block) on frame
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionSplit {
    pub q: usize,
    pub p: usize,
}

impl ProjectionSplit {
    pub fn dim(&self) -> usize {
        self.q + self.p
    }

    pub fn onto_q(&self, v: &[f64]) -> Vec<f64> {
        v.iter().enumerate().map(|(i, &x)| if i < self.q { x } else { 0.0 }).collect()
    }

    pub fn onto_l(&self, v: &[f64]) -> Vec<f64> {
        v.iter().enumerate().map(|(i, &x)| if i < self.q { 0.0 } else { x }).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalFrameData {
    q: usize,
    p: usize,
    /// `conn[a][(b, c)] = Γ_a[b][c]`.
    conn: Vec<DMatrix<f64>>,
}

impl LocalFrameData {
    /// Rejects coefficient tables that are not skew in the last two slots.
    pub fn new(q: usize, p: usize, conn: Vec<DMatrix<f64>>) -> Result<Self> {
        let n = p + q;
        if conn.len() != n {
            return Err(Error::DimensionMismatch { what: "connection directions", expected: n, found: conn.len() });
        }
        let mut defect: f64 = 0.0;
        for g in &conn {
            if g.nrows() != n || g.ncols() != n {
                return Err(Error::DimensionMismatch { what: "connection matrix", expected: n, found: g.nrows() });
            }
            defect = defect.max((g + g.transpose()).abs().max());
        }
        if defect > METRIC_TOL {
            return Err(Error::NonMetricConnection { defect });
        }
        Ok(Self { q, p, conn })
    }

    /// Random metric connection: each `Γ_a` skew with entries in `[−1, 1]`.
    pub fn random(q: usize, p: usize, rng: &mut impl Rng) -> Self {
        let n = p + q;
        let conn = (0..n)
            .map(|_| {
                let mut g = DMatrix::zeros(n, n);
                for b in 0..n {
                    for c in (b + 1)..n {
                        let x = rng.random_range(-1.0..=1.0);
                        g[(b, c)] = x;
                        g[(c, b)] = -x;
                    }
                }
                g
            })
            .collect();
        Self { q, p, conn }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn split(&self) -> ProjectionSplit {
        ProjectionSplit { q: self.q, p: self.p }
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn gamma(&self, a: usize, b: usize, c: usize) -> f64 {
        self.conn[a][(b, c)]
    }

    pub fn connection(&self) -> &[DMatrix<f64>] {
        &self.conn
    }

    /// Frame coordinates of `∇_X u_b` for `X` in frame coordinates.
    pub fn covariant_derivative(&self, x: &[f64], b: usize) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|c| x.iter().enumerate().map(|(a, xa)| xa * self.conn[a][(b, c)]).sum()).collect()
    }

    /// The same geometry described with the roles of `Q` and `L` exchanged:
    /// the new frame is `(e_1..e_p, f_1..f_q)`.
    pub fn swapped(&self) -> Self {
        let n = self.dim();
        let perm: Vec<usize> = (self.q..n).chain(0..self.q).collect();
        let conn = perm.iter().map(|&a| DMatrix::from_fn(n, n, |b, c| self.conn[a][(perm[b], perm[c])])).collect();
        Self { q: self.p, p: self.q, conn }
    }

    /// Re-express the data in the frame `u'_b = Σ_d R_bd u_d`, where
    /// `R = blockdiag(R_Q, R_L)` preserves the splitting.
    ///
    /// `rotation_derivatives[a']` is the derivative of `R` along `u_{a'}`;
    /// it must satisfy `dR·Rᵀ` skew, as for any smooth family of orthogonal
    /// frames.
    pub fn rotated(&self, rotation: &DMatrix<f64>, rotation_derivatives: &[DMatrix<f64>]) -> Result<Self> {
        let n = self.dim();
        if rotation.shape() != (n, n) || rotation_derivatives.len() != n {
            return Err(Error::DimensionMismatch { what: "frame rotation", expected: n, found: rotation.nrows() });
        }
        let rt = rotation.transpose();
        let transformed: Vec<DMatrix<f64>> =
            (0..n).map(|a| &rotation_derivatives[a] * &rt + rotation * &self.conn[a] * &rt).collect();
        let conn = (0..n)
            .map(|a| {
                let mut acc = DMatrix::zeros(n, n);
                for (a2, t) in transformed.iter().enumerate() {
                    acc += t * rotation[(a, a2)];
                }
                acc
            })
            .collect();
        Self::new(self.q, self.p, conn)
    }
}

/// Which block of the splitting a random frame change acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameBlock {
    Q,
    L,
}

/// A random frame change `R = blockdiag(O, I)` or `blockdiag(I, O)` with
/// `O` orthogonal, together with derivatives `dR_a = S_a R` (`S_a` skew and
/// supported on the same block) along each of the `p + q` directions.
pub fn random_block_rotation(
    q: usize,
    p: usize,
    block: FrameBlock,
    rng: &mut impl Rng,
) -> (DMatrix<f64>, Vec<DMatrix<f64>>) {
    let n = p + q;
    let (offset, size) = match block {
        FrameBlock::Q => (0, q),
        FrameBlock::L => (q, p),
    };
    let mut r = DMatrix::identity(n, n);
    if size > 0 {
        let a = DMatrix::from_fn(size, size, |_, _| rng.random_range(-1.0..1.0));
        r.view_mut((offset, offset), (size, size)).copy_from(&a.qr().q());
    }
    let dr = (0..n)
        .map(|_| {
            let mut s = DMatrix::zeros(n, n);
            for i in 0..size {
                for j in (i + 1)..size {
                    let x = rng.random_range(-1.0..1.0);
                    s[(offset + i, offset + j)] = x;
                    s[(offset + j, offset + i)] = -x;
                }
            }
            s * &r
        })
        .collect();
    (r, dr)
}

/// Frame coordinates of a fixed vector after the frame change `u' = R u`:
/// `x' = R x`.
pub fn rotate_coordinates(rotation: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (0..rotation.nrows()).map(|b| x.iter().enumerate().map(|(d, xd)| rotation[(b, d)] * xd).sum()).collect()
}

fn check_module(data: &LocalFrameData, module: &CliffordModule) -> Result<()> {
    if module.rank() != data.dim() {
        return Err(Error::DimensionMismatch {
            what: "Clifford module rank (must cover Q ⊕ L)",
            expected: data.dim(),
            found: module.rank(),
        });
    }
    Ok(())
}

fn check_direction(data: &LocalFrameData, x: &[f64]) -> Result<()> {
    if x.len() != data.dim() {
        return Err(Error::DimensionMismatch { what: "direction X", expected: data.dim(), found: x.len() });
    }
    Ok(())
}

/// `B_X = ½ Σ_m c(π∇_X e_m) c(e_m)`.
pub fn bx_from_l_frame(data: &LocalFrameData, module: &CliffordModule, x: &[f64]) -> Result<CMatrix> {
    check_module(data, module)?;
    check_direction(data, x)?;
    let split = data.split();
    let n = module.fiber_dim();
    let mut out = CMatrix::zeros(n, n);
    for m in 0..data.p {
        let em = data.q + m;
        let proj = split.onto_q(&data.covariant_derivative(x, em));
        let mut unit = vec![0.0; data.dim()];
        unit[em] = 1.0;
        out += module.action(&proj)? * module.action(&unit)?;
    }
    Ok(out * Complex64::new(0.5, 0.0))
}

/// `B_X = ½ Σ_j c((1−π)∇_X f_j) c(f_j)`.
pub fn bx_from_q_frame(data: &LocalFrameData, module: &CliffordModule, x: &[f64]) -> Result<CMatrix> {
    check_module(data, module)?;
    check_direction(data, x)?;
    let split = data.split();
    let n = module.fiber_dim();
    let mut out = CMatrix::zeros(n, n);
    for j in 0..data.q {
        let proj = split.onto_l(&data.covariant_derivative(x, j));
        let mut unit = vec![0.0; data.dim()];
        unit[j] = 1.0;
        out += module.action(&proj)? * module.action(&unit)?;
    }
    Ok(out * Complex64::new(0.5, 0.0))
}

/// Max-norm of `c((1−π)∇_X Y) − [c(Y), B_X]` for `Y = Σ_j y_j f_j`.
///
/// Only the pointwise value of `Y` matters: derivatives of the coefficients
/// `y_j` produce a `Q`-component that `1 − π` discards.
pub fn compatibility_residual(data: &LocalFrameData, module: &CliffordModule, x: &[f64], y_q: &[f64]) -> Result<f64> {
    if y_q.len() != data.q {
        return Err(Error::DimensionMismatch { what: "Q-frame vector Y", expected: data.q, found: y_q.len() });
    }
    let b = bx_from_l_frame(data, module, x)?;
    let split = data.split();
    let mut nabla = vec![0.0; data.dim()];
    for (j, &yj) in y_q.iter().enumerate() {
        for (acc, v) in nabla.iter_mut().zip(data.covariant_derivative(x, j)) {
            *acc += yj * v;
        }
    }
    let lhs = module.action(&split.onto_l(&nabla))?;
    let mut y_full = y_q.to_vec();
    y_full.resize(data.dim(), 0.0);
    let cy = module.action(&y_full)?;
    let rhs = &cy * &b - &b * &cy;
    Ok(max_abs(&(lhs - rhs)))
}

/// `H^L = π Σ_m ∇_{e_m} e_m`, in `f`-frame coordinates.
pub fn mean_curvature_l(data: &LocalFrameData) -> Vec<f64> {
    (0..data.q).map(|j| (0..data.p).map(|m| data.gamma(data.q + m, data.q + m, j)).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Warped torus `e^{2g(y)}dx² + dy²` with `Q = span(e^{−g}∂_x)`,
    /// `L = span(∂_y)`, from hand-derived Christoffel symbols.
    fn torus_sample(gp: f64) -> LocalFrameData {
        let mut gf = DMatrix::zeros(2, 2);
        gf[(0, 1)] = -gp;
        gf[(1, 0)] = gp;
        LocalFrameData::new(1, 1, vec![gf, DMatrix::zeros(2, 2)]).unwrap()
    }

    /// Oracle: Christoffel symbols of the warped metric by finite differences
    /// of the metric, then projected onto the orthonormal frame.
    #[allow(clippy::needless_range_loop)]
    fn torus_sample_from_metric(g: impl Fn(f64) -> f64, y: f64) -> LocalFrameData {
        let h = 1e-5;
        let metric = |y: f64| [(2.0 * g(y)).exp(), 1.0];
        let dmetric_y = |k: usize| (metric(y + h)[k] - metric(y - h)[k]) / (2.0 * h);
        let gm = metric(y);
        // Γ^i_{jk} for coordinates (x, y); metric depends only on y.
        let mut chris = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let d = |a: usize, b: usize, c: usize| -> f64 {
                        // ∂_c g_ab, nonzero only for a == b, c == y.
                        if a == b && c == 1 {
                            dmetric_y(a)
                        } else {
                            0.0
                        }
                    };
                    chris[i][j][k] = 0.5 / gm[i] * (d(i, j, k) + d(i, k, j) - d(j, k, i));
                }
            }
        }
        // Frame u_0 = e^{−g}∂_x, u_1 = ∂_y; components in coordinates.
        let eg = (-g(y)).exp();
        let dg = (g(y + h) - g(y - h)) / (2.0 * h);
        let comps = [[eg, 0.0], [0.0, 1.0]];
        let dcomps_y = [[-dg * eg, 0.0], [0.0, 0.0]];
        let mut conn = vec![DMatrix::zeros(2, 2); 2];
        for a in 0..2 {
            for b in 0..2 {
                // ∇_{u_a} u_b in coordinates.
                let mut v = [0.0; 2];
                for i in 0..2 {
                    v[i] += comps[a][1] * dcomps_y[b][i];
                    for j in 0..2 {
                        for k in 0..2 {
                            v[i] += comps[a][j] * comps[b][k] * chris[i][j][k];
                        }
                    }
                }
                for c in 0..2 {
                    // ⟨v, u_c⟩ in the metric.
                    conn[a][(b, c)] = (0..2).map(|i| gm[i] * v[i] * comps[c][i]).sum();
                }
            }
        }
        // Finite differences leave a tiny non-skew remainder.
        for g in &mut conn {
            let s = (&*g - g.transpose()) * 0.5;
            *g = s;
        }
        LocalFrameData::new(1, 1, conn).unwrap()
    }

    #[test]
    fn christoffel_oracle_matches_hand_derivation() {
        let g = |y: f64| 0.3 * y.sin();
        for &y in &[0.0, 0.7, 2.1, 4.0] {
            let oracle = torus_sample_from_metric(g, y);
            let hand = torus_sample(0.3 * y.cos());
            for a in 0..2 {
                assert!((&oracle.connection()[a] - &hand.connection()[a]).abs().max() < 1e-8);
            }
        }
    }

    #[test]
    fn bx_vanishes_without_l() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let data = LocalFrameData::random(3, 0, &mut rng);
        let module = CliffordModule::standard(3);
        let b = bx_from_l_frame(&data, &module, &[1.0, 0.5, -0.2]).unwrap();
        assert_eq!(max_abs(&b), 0.0);
        assert_eq!(compatibility_residual(&data, &module, &[1.0, 0.0, 0.0], &[0.3, 0.1, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn bx_vanishes_without_q() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let data = LocalFrameData::random(0, 2, &mut rng);
        let module = CliffordModule::standard(2);
        let b = bx_from_q_frame(&data, &module, &[1.0, 0.5]).unwrap();
        assert_eq!(max_abs(&b), 0.0);
    }

    #[test]
    fn torus_bx_along_y_is_zero_and_formulas_agree_along_x() {
        let module = CliffordModule::standard(2);
        let g = |y: f64| 0.3 * y.sin();
        for &y in &[0.3, 1.9, 5.0] {
            let data = torus_sample_from_metric(g, y);
            let by = bx_from_l_frame(&data, &module, &[0.0, 1.0]).unwrap();
            assert!(max_abs(&by) < 1e-9);
            let bl = bx_from_l_frame(&data, &module, &[1.0, 0.0]).unwrap();
            let bq = bx_from_q_frame(&data, &module, &[1.0, 0.0]).unwrap();
            assert!(max_abs(&(&bl - &bq)) < 1e-12);
            // ½ g′ c(f) c(e)
            let expected = module.generator(0) * module.generator(1) * Complex64::new(0.5 * 0.3 * y.cos(), 0.0);
            assert!(max_abs(&(bl - expected)) < 1e-8);
        }
    }

    #[test]
    fn torus_mean_curvatures() {
        let g = |y: f64| 0.3 * y.sin();
        for &y in &[0.0, 1.0, 2.5] {
            let data = torus_sample_from_metric(g, y);
            assert!(mean_curvature_l(&data)[0].abs() < 1e-9);
            let hq = mean_curvature_l(&data.swapped());
            assert!((hq[0] + 0.3 * y.cos()).abs() < 1e-8, "H^Q = −g′ ∂_y");
        }
        let flat = LocalFrameData::new(2, 2, vec![DMatrix::zeros(4, 4); 4]).unwrap();
        assert_eq!(mean_curvature_l(&flat), vec![0.0, 0.0]);
    }

    #[test]
    fn block_rotations_preserve_the_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (r, dr) = random_block_rotation(2, 3, FrameBlock::L, &mut rng);
        assert!((&r * r.transpose() - DMatrix::identity(5, 5)).abs().max() < 1e-14);
        assert_eq!(r.view((0, 0), (2, 2)), DMatrix::identity(2, 2));
        assert_eq!(r.view((0, 2), (2, 3)).abs().max(), 0.0);
        for d in &dr {
            let s = d * r.transpose();
            assert!((&s + s.transpose()).abs().max() < 1e-14);
        }
        let data = LocalFrameData::random(2, 3, &mut rng);
        assert!(data.rotated(&r, &dr).is_ok());
    }

    #[test]
    fn non_metric_connection_rejected() {
        let mut g = DMatrix::zeros(2, 2);
        g[(0, 1)] = 1.0;
        assert!(matches!(LocalFrameData::new(1, 1, vec![g.clone(), g]), Err(Error::NonMetricConnection { .. })));
    }

    #[test]
    fn module_rank_and_direction_checked() {
        let data = torus_sample(0.1);
        assert!(bx_from_l_frame(&data, &CliffordModule::standard(3), &[1.0, 0.0]).is_err());
        assert!(bx_from_l_frame(&data, &CliffordModule::standard(2), &[1.0]).is_err());
        assert!(compatibility_residual(&data, &CliffordModule::standard(2), &[1.0, 0.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn compatibility_is_linear_in_y() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let data = LocalFrameData::random(2, 2, &mut rng);
        let module = CliffordModule::standard(4);
        let x = [0.2, -0.4, 0.9, 0.1];
        let y = [0.7, -1.3];
        let b = bx_from_l_frame(&data, &module, &x).unwrap();
        let split = data.split();
        // Both sides of the identity, separately, for Y and for 2Y.
        let sides = |scale: f64| {
            let ys: Vec<f64> = y.iter().map(|v| v * scale).collect();
            let mut nabla = vec![0.0; 4];
            for (j, &yj) in ys.iter().enumerate() {
                for (acc, v) in nabla.iter_mut().zip(data.covariant_derivative(&x, j)) {
                    *acc += yj * v;
                }
            }
            let lhs = module.action(&split.onto_l(&nabla)).unwrap();
            let cy = module.action(&[ys[0], ys[1], 0.0, 0.0]).unwrap();
            (lhs, &cy * &b - &b * &cy)
        };
        let (l1, r1) = sides(1.0);
        let (l2, r2) = sides(2.0);
        assert!(max_abs(&(&l2 - &l1 * Complex64::new(2.0, 0.0))) < 1e-12);
        assert!(max_abs(&(&r2 - &r1 * Complex64::new(2.0, 0.0))) < 1e-12);
        assert!(compatibility_residual(&data, &module, &x, &y).unwrap() < 1e-10);
    }
}
