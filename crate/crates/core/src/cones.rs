//! Hyperbolicity cones built from linear factors, quadratic factors and PSD
//! blocks, combined by intersection (product of polynomials) and Cartesian
//! product.
//!
//! Eigenvalues of `x` are the roots of `λ ↦ p(x − λe)`. For every distinct
//! eigenvalue `λ_j` of a factor, with multiplicity `m_j`, the factor also
//! provides the direction
//!
//! ```text
//! g_j = ∇p^(m_j − 1)(x − λ_j e) / p^(m_j)(x − λ_j e)
//! ```
//!
//! where `p^(m)` is the `m`-th derivative of `p` along `e`. These directions
//! are independent of any smoothing parameter and satisfy `⟨g_j, e⟩ = 1`.

use crate::error::{Error, Result};
use crate::linalg::{self, dot, jacobi_eigen, Matrix};

/// Default relative tolerance for merging near-equal roots.
pub const DEFAULT_MULT_TOL: f64 = 1e-7;
/// Negative discriminants above `-DISC_TOL * scale` are rounded to zero.
pub const DISC_TOL: f64 = 1e-10;
const DENOM_TOL: f64 = 1e-14;
const NSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ProductBlock {
    pub start: usize,
    pub len: usize,
    pub cone: ConeSpec,
}

/// Recursive description of a hyperbolicity cone. The distinguished
/// direction is supplied separately when the cone is prepared.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeSpec {
    /// Nonnegative orthant of the given dimension.
    Orthant { dim: usize },
    /// `{x : a·x ≥ 0}`.
    Halfspace { a: Vec<f64> },
    /// Factor `p(y) = ½ yᵀBy`.
    Quadratic { b: Matrix },
    /// Order-`m` PSD cone in svec coordinates, `p = det`.
    Psd { order: usize },
    /// Intersection of cones on the same space (`p = p₁⋯p_ℓ`).
    Intersection { parts: Vec<ConeSpec> },
    /// Cartesian product over a partition of the coordinates.
    Product { blocks: Vec<ProductBlock> },
}

impl ConeSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ConeSpec::Orthant { .. } => "orthant",
            ConeSpec::Halfspace { .. } => "halfspace",
            ConeSpec::Quadratic { .. } => "quadratic",
            ConeSpec::Psd { .. } => "psd",
            ConeSpec::Intersection { .. } => "intersection",
            ConeSpec::Product { .. } => "product",
        }
    }

    /// Ambient dimension, after checking structural consistency.
    pub fn dim(&self) -> Result<usize> {
        match self {
            ConeSpec::Orthant { dim } => Ok(*dim),
            ConeSpec::Halfspace { a } => Ok(a.len()),
            ConeSpec::Quadratic { b } => {
                if b.nrows() != b.ncols() {
                    return Err(Error::InvalidCone("quadratic matrix is not square".into()));
                }
                if !b.is_symmetric(1e-12) {
                    return Err(Error::InvalidCone("quadratic matrix is not symmetric".into()));
                }
                Ok(b.nrows())
            }
            ConeSpec::Psd { order } => Ok(linalg::svec_len(*order)),
            ConeSpec::Intersection { parts } => {
                let first = parts
                    .first()
                    .ok_or_else(|| Error::InvalidCone("empty intersection".into()))?
                    .dim()?;
                for p in &parts[1..] {
                    if p.dim()? != first {
                        return Err(Error::InvalidCone("intersection parts live on different spaces".into()));
                    }
                }
                Ok(first)
            }
            ConeSpec::Product { blocks } => {
                if blocks.is_empty() {
                    return Err(Error::InvalidCone("empty product".into()));
                }
                let mut ranges: Vec<(usize, usize)> = blocks.iter().map(|b| (b.start, b.len)).collect();
                ranges.sort_unstable();
                let mut next = 0;
                for (start, len) in ranges {
                    if start != next {
                        return Err(Error::InvalidCone("product blocks do not partition the coordinates".into()));
                    }
                    next += len;
                }
                for b in blocks {
                    if b.cone.dim()? != b.len {
                        return Err(Error::InvalidCone(format!(
                            "product block at {} has length {} but its cone has dimension {}",
                            b.start,
                            b.len,
                            b.cone.dim()?
                        )));
                    }
                }
                Ok(next)
            }
        }
    }

    /// Degree of the hyperbolic polynomial.
    pub fn degree(&self) -> usize {
        match self {
            ConeSpec::Orthant { dim } => *dim,
            ConeSpec::Halfspace { .. } => 1,
            ConeSpec::Quadratic { .. } => 2,
            ConeSpec::Psd { order } => *order,
            ConeSpec::Intersection { parts } => parts.iter().map(ConeSpec::degree).sum(),
            ConeSpec::Product { blocks } => blocks.iter().map(|b| b.cone.degree()).sum(),
        }
    }
}

/// Distinct eigenvalues in ascending order with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub multiplicities: Vec<usize>,
}

impl Spectrum {
    pub fn degree(&self) -> usize {
        self.multiplicities.iter().sum()
    }
}

/// One distinct eigenvalue of one factor with its derivative-polynomial
/// direction.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenGradient {
    pub value: f64,
    pub multiplicity: usize,
    pub direction: Vec<f64>,
}

#[derive(Debug, Clone)]
enum LeafKind {
    Orthant { len: usize },
    Halfspace { a: Vec<f64>, ae: f64 },
    Quadratic { b: Matrix, be: Vec<f64>, ebe: f64 },
    Psd { order: usize, l_inv: Matrix },
}

#[derive(Debug, Clone)]
struct Leaf {
    offset: usize,
    kind: LeafKind,
}

impl Leaf {
    fn len(&self) -> usize {
        match &self.kind {
            LeafKind::Orthant { len } => *len,
            LeafKind::Halfspace { a, .. } => a.len(),
            LeafKind::Quadratic { be, .. } => be.len(),
            LeafKind::Psd { order, .. } => linalg::svec_len(*order),
        }
    }
}

/// A cone together with its distinguished direction `e`, validated and with
/// per-factor data (`Be`, `eᵀBe`, Cholesky factors) precomputed.
#[derive(Debug, Clone)]
pub struct Cone {
    spec: ConeSpec,
    e: Vec<f64>,
    leaves: Vec<Leaf>,
    degree: usize,
    mult_tol: f64,
}

/// Checks that `e` lies in the interior of the cone, i.e. that every factor
/// is hyperbolic with respect to `e`.
pub fn validate_interior(spec: &ConeSpec, e: &[f64]) -> Result<()> {
    Cone::new(spec.clone(), e).map(|_| ())
}

fn not_hyperbolic(path: &str, reason: impl Into<String>) -> Error {
    Error::NotHyperbolicWrtE { leaf: path.to_string(), reason: reason.into() }
}

fn flatten(spec: &ConeSpec, offset: usize, e: &[f64], path: &str, out: &mut Vec<Leaf>) -> Result<()> {
    match spec {
        ConeSpec::Orthant { dim } => {
            let block = &e[offset..offset + dim];
            if let Some(j) = block.iter().position(|v| !(*v > 0.0)) {
                return Err(not_hyperbolic(path, format!("e[{}] = {} is not positive", offset + j, block[j])));
            }
            out.push(Leaf { offset, kind: LeafKind::Orthant { len: *dim } });
        }
        ConeSpec::Halfspace { a } => {
            let ae = dot(a, &e[offset..offset + a.len()]);
            if !(ae > 0.0) {
                return Err(not_hyperbolic(path, format!("a·e = {ae} is not positive")));
            }
            out.push(Leaf { offset, kind: LeafKind::Halfspace { a: a.clone(), ae } });
        }
        ConeSpec::Quadratic { b } => {
            let eb = &e[offset..offset + b.nrows()];
            let be = b.mul_vec(eb);
            let ebe = dot(eb, &be);
            if !(ebe > 0.0) {
                return Err(not_hyperbolic(path, format!("eᵀBe = {ebe} is not positive")));
            }
            // Real-rootedness for every y: B − (Be)(Be)ᵀ/(eᵀBe) ⪯ 0.
            let n = b.nrows();
            let mut m = b.clone();
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] -= be[i] * be[j] / ebe;
                }
            }
            let eig = jacobi_eigen(&m)?;
            let top = eig.values.last().copied().unwrap_or(0.0);
            if top > NSD_TOL * (1.0 + b.frobenius()) {
                return Err(not_hyperbolic(
                    path,
                    format!("B − BeeᵀB/(eᵀBe) has positive eigenvalue {top:.3e}"),
                ));
            }
            out.push(Leaf { offset, kind: LeafKind::Quadratic { b: b.clone(), be, ebe } });
        }
        ConeSpec::Psd { order } => {
            let em = linalg::smat(&e[offset..offset + linalg::svec_len(*order)], *order);
            let eig = jacobi_eigen(&em)?;
            if let Some(&lo) = eig.values.first() {
                if !(lo > 0.0) {
                    return Err(not_hyperbolic(path, format!("E has eigenvalue {lo} ≤ 0")));
                }
            }
            let l = linalg::cholesky(&em).ok_or_else(|| not_hyperbolic(path, "E is not positive definite"))?;
            out.push(Leaf { offset, kind: LeafKind::Psd { order: *order, l_inv: linalg::lower_inverse(&l) } });
        }
        ConeSpec::Intersection { parts } => {
            for (i, p) in parts.iter().enumerate() {
                flatten(p, offset, e, &format!("{path}.intersection[{i}]"), out)?;
            }
        }
        ConeSpec::Product { blocks } => {
            for (i, b) in blocks.iter().enumerate() {
                flatten(&b.cone, offset + b.start, e, &format!("{path}.product[{i}]"), out)?;
            }
        }
    }
    Ok(())
}

/// Roots of `λ ↦ ½(x − λe)ᵀB(x − λe)` as `(low, high, √disc)`, computed
/// without cancellation.
fn quadratic_roots(xbx: f64, h: f64, ebe: f64) -> Result<(f64, f64, f64)> {
    let disc = h * h - ebe * xbx;
    let scale = h * h + (ebe * xbx).abs();
    if disc < -DISC_TOL * scale {
        return Err(Error::ComplexRoots(disc));
    }
    let sq = disc.max(0.0).sqrt();
    let q = h + if h >= 0.0 { sq } else { -sq };
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / ebe, xbx / q) };
    Ok((r1.min(r2), r1.max(r2), sq))
}

fn cluster_tol(rel: f64, lo: f64, hi: f64) -> f64 {
    rel * (1.0 + lo.abs() + hi.abs())
}

impl Cone {
    pub fn new(spec: ConeSpec, e: &[f64]) -> Result<Self> {
        let d = spec.dim()?;
        if e.len() != d {
            return Err(Error::DimensionMismatch(format!("cone has dimension {d}, e has length {}", e.len())));
        }
        if !e.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("interior point"));
        }
        let mut leaves = Vec::new();
        flatten(&spec, 0, e, spec.kind(), &mut leaves)?;
        let degree = spec.degree();
        Ok(Self { spec, e: e.to_vec(), leaves, degree, mult_tol: DEFAULT_MULT_TOL })
    }

    /// Overrides the relative root-merging tolerance.
    pub fn with_mult_tol(mut self, mult_tol: f64) -> Self {
        self.mult_tol = mult_tol;
        self
    }

    pub fn spec(&self) -> &ConeSpec {
        &self.spec
    }

    pub fn e(&self) -> &[f64] {
        &self.e
    }

    pub fn dim(&self) -> usize {
        self.e.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mult_tol(&self) -> f64 {
        self.mult_tol
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.e.len() {
            return Err(Error::DimensionMismatch(format!("point has length {}, expected {}", x.len(), self.e.len())));
        }
        Ok(())
    }

    /// All `n` eigenvalues, unsorted and unmerged.
    pub fn eigenvalues(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        let mut out = Vec::with_capacity(self.degree);
        for leaf in &self.leaves {
            let xb = &x[leaf.offset..leaf.offset + leaf.len()];
            match &leaf.kind {
                LeafKind::Orthant { len } => {
                    let eb = &self.e[leaf.offset..leaf.offset + len];
                    out.extend(xb.iter().zip(eb).map(|(xi, ei)| xi / ei));
                }
                LeafKind::Halfspace { a, ae } => out.push(dot(a, xb) / ae),
                LeafKind::Quadratic { b, be, ebe } => {
                    let (lo, hi, _) = quadratic_roots(b.bilinear(xb, xb), dot(be, xb), *ebe)?;
                    out.push(lo);
                    out.push(hi);
                }
                LeafKind::Psd { order, l_inv } => {
                    let y = l_inv.matmul(&linalg::smat(xb, *order)).matmul(&l_inv.transpose());
                    out.extend(jacobi_eigen(&y)?.values);
                }
            }
        }
        Ok(out)
    }

    /// Distinct eigenvalues with multiplicities; roots closer than the
    /// merging tolerance are reported as one value.
    pub fn spectrum(&self, x: &[f64]) -> Result<Spectrum> {
        let mut roots = self.eigenvalues(x)?;
        roots.sort_by(f64::total_cmp);
        let (lo, hi) = (roots[0], roots[roots.len() - 1]);
        let tol = cluster_tol(self.mult_tol, lo, hi);
        let mut values = Vec::new();
        let mut multiplicities = Vec::new();
        let mut i = 0;
        while i < roots.len() {
            let mut j = i + 1;
            while j < roots.len() && roots[j] - roots[j - 1] <= tol {
                j += 1;
            }
            let mean = roots[i..j].iter().sum::<f64>() / (j - i) as f64;
            values.push(mean);
            multiplicities.push(j - i);
            i = j;
        }
        Ok(Spectrum { values, multiplicities })
    }

    pub fn lambda_min(&self, x: &[f64]) -> Result<f64> {
        Ok(self.eigenvalues(x)?.into_iter().fold(f64::INFINITY, f64::min))
    }

    pub fn lambda_max(&self, x: &[f64]) -> Result<f64> {
        Ok(self.eigenvalues(x)?.into_iter().fold(f64::NEG_INFINITY, f64::max))
    }

    /// `max_j |λ_j(u)|`.
    pub fn seminorm_inf(&self, u: &[f64]) -> Result<f64> {
        Ok(self.eigenvalues(u)?.into_iter().fold(0.0, |m, v| m.max(v.abs())))
    }

    pub fn membership(&self, x: &[f64], tol: f64) -> Result<bool> {
        Ok(self.lambda_min(x)? >= -tol)
    }

    /// Per-factor eigenvalue directions. Linear factors never merge; roots
    /// of a quadratic or PSD factor closer than the merging tolerance are
    /// treated as one multiple root.
    pub fn eigen_gradients(&self, x: &[f64]) -> Result<Vec<EigenGradient>> {
        self.check_len(x)?;
        let d = self.e.len();
        let mut out = Vec::with_capacity(self.degree);
        for leaf in &self.leaves {
            let off = leaf.offset;
            let xb = &x[off..off + leaf.len()];
            match &leaf.kind {
                LeafKind::Orthant { len } => {
                    for j in 0..*len {
                        let ej = self.e[off + j];
                        let mut dir = vec![0.0; d];
                        dir[off + j] = 1.0 / ej;
                        out.push(EigenGradient { value: xb[j] / ej, multiplicity: 1, direction: dir });
                    }
                }
                LeafKind::Halfspace { a, ae } => {
                    let mut dir = vec![0.0; d];
                    for (k, ak) in a.iter().enumerate() {
                        dir[off + k] = ak / ae;
                    }
                    out.push(EigenGradient { value: dot(a, xb) / ae, multiplicity: 1, direction: dir });
                }
                LeafKind::Quadratic { b, be, ebe } => {
                    let bx = b.mul_vec(xb);
                    let h = dot(be, xb);
                    let (lo, hi, sq) = quadratic_roots(dot(xb, &bx), h, *ebe)?;
                    if hi - lo <= cluster_tol(self.mult_tol, lo, hi) {
                        // ∇p^(1) = Be, p^(2) = eᵀBe.
                        let mut dir = vec![0.0; d];
                        for (k, v) in be.iter().enumerate() {
                            dir[off + k] = v / ebe;
                        }
                        out.push(EigenGradient { value: 0.5 * (lo + hi), multiplicity: 2, direction: dir });
                    } else {
                        // ∇p(y) = By, p^(1)(y) = eᵀBy with y = x − λe, and
                        // eᵀB(x − λ±e) = ∓√disc.
                        let scale = h.abs() + ebe * lo.abs().max(hi.abs());
                        if sq <= DENOM_TOL * scale {
                            return Err(Error::NearSingularDenominator(sq));
                        }
                        for (lam, den) in [(lo, sq), (hi, -sq)] {
                            let mut dir = vec![0.0; d];
                            for k in 0..be.len() {
                                dir[off + k] = (bx[k] - lam * be[k]) / den;
                            }
                            out.push(EigenGradient { value: lam, multiplicity: 1, direction: dir });
                        }
                    }
                }
                LeafKind::Psd { order, l_inv } => {
                    let n = *order;
                    let y = l_inv.matmul(&linalg::smat(xb, n)).matmul(&l_inv.transpose());
                    let eig = jacobi_eigen(&y)?;
                    let vals = &eig.values;
                    let tol = cluster_tol(self.mult_tol, vals[0], vals[n - 1]);
                    let mut i = 0;
                    while i < n {
                        let mut j = i + 1;
                        while j < n && vals[j] - vals[j - 1] <= tol {
                            j += 1;
                        }
                        let m = j - i;
                        // Projector onto the eigenspace, mapped back through
                        // the congruence: L⁻ᵀ (Σ q qᵀ) L⁻¹ / m.
                        let mut w = Matrix::zeros(n, m);
                        for r in 0..n {
                            for (cidx, col) in (i..j).enumerate() {
                                w[(r, cidx)] = eig.vectors[(r, col)];
                            }
                        }
                        let u = l_inv.transpose().matmul(&w);
                        let mut g = u.matmul(&u.transpose());
                        for r in 0..n {
                            for c in 0..n {
                                g[(r, c)] /= m as f64;
                            }
                        }
                        let packed = linalg::svec(&g);
                        let mut dir = vec![0.0; d];
                        dir[off..off + packed.len()].copy_from_slice(&packed);
                        let mean = vals[i..j].iter().sum::<f64>() / m as f64;
                        out.push(EigenGradient { value: mean, multiplicity: m, direction: dir });
                        i = j;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Normals `a` (embedded in the full space) of the halfspace factors of
    /// a polyhedral cone.
    pub fn linear_factors(&self) -> Result<Vec<Vec<f64>>> {
        let d = self.e.len();
        let mut out = Vec::new();
        for leaf in &self.leaves {
            match &leaf.kind {
                LeafKind::Orthant { len } => {
                    for j in 0..*len {
                        let mut a = vec![0.0; d];
                        a[leaf.offset + j] = 1.0;
                        out.push(a);
                    }
                }
                LeafKind::Halfspace { a, .. } => {
                    let mut full = vec![0.0; d];
                    full[leaf.offset..leaf.offset + a.len()].copy_from_slice(a);
                    out.push(full);
                }
                LeafKind::Quadratic { .. } => return Err(Error::UnsupportedConeForExactRe("quadratic")),
                LeafKind::Psd { .. } => return Err(Error::UnsupportedConeForExactRe("psd")),
            }
        }
        Ok(out)
    }

    pub fn is_polyhedral(&self) -> bool {
        self.leaves.iter().all(|l| matches!(l.kind, LeafKind::Orthant { .. } | LeafKind::Halfspace { .. }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lorentz() -> Cone {
        Cone::new(ConeSpec::Quadratic { b: Matrix::from_diag(&[-1.0, 1.0]) }, &[0.0, 1.0]).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn degrees() {
        assert_eq!(ConeSpec::Orthant { dim: 5 }.degree(), 5);
        assert_eq!(ConeSpec::Quadratic { b: Matrix::identity(3) }.degree(), 2);
        let inter = ConeSpec::Intersection {
            parts: vec![ConeSpec::Orthant { dim: 3 }, ConeSpec::Halfspace { a: vec![1.0, 1.0, 1.0] }],
        };
        assert_eq!(inter.degree(), 4);
    }

    #[test]
    fn spectrum_at_e_is_single_value() {
        let specs = vec![
            (ConeSpec::Orthant { dim: 3 }, vec![1.0, 2.0, 0.5]),
            (ConeSpec::Quadratic { b: Matrix::from_diag(&[-1.0, 1.0]) }, vec![0.0, 1.0]),
            (ConeSpec::Psd { order: 2 }, linalg::svec(&Matrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap())),
        ];
        for (spec, e) in specs {
            let n = spec.degree();
            let cone = Cone::new(spec, &e).unwrap();
            let s = cone.spectrum(&e).unwrap();
            assert_eq!(s.multiplicities, vec![n]);
            assert!((s.values[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthant_spectrum() {
        let cone = Cone::new(ConeSpec::Orthant { dim: 2 }, &[1.0, 2.0]).unwrap();
        let s = cone.spectrum(&[2.0, 2.0]).unwrap();
        assert_eq!(s.values, vec![1.0, 2.0]);
        assert_eq!(s.multiplicities, vec![1, 1]);

        let cone = Cone::new(ConeSpec::Orthant { dim: 2 }, &[1.0, 1.0]).unwrap();
        assert_eq!(cone.lambda_min(&[3.0, -1.0]).unwrap(), -1.0);
        assert_eq!(cone.lambda_max(&[3.0, -1.0]).unwrap(), 3.0);
        assert_eq!(cone.lambda_min(&[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(cone.seminorm_inf(&[3.0, -2.0]).unwrap(), 3.0);
        assert_eq!(cone.seminorm_inf(&[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(cone.seminorm_inf(&[0.0, 0.0]).unwrap(), 0.0);
        assert!(cone.membership(&[1.0, 1.0], 1e-9).unwrap());
        assert!(!cone.membership(&[1.0, -1.0], 1e-9).unwrap());
        assert!(cone.membership(&[0.0, 1.0], 1e-9).unwrap());
    }

    #[test]
    fn lorentz_spectrum() {
        let s = lorentz().spectrum(&[1.0, 2.0]).unwrap();
        assert!(close(&s.values, &[1.0, 3.0], 1e-14));
        assert_eq!(s.multiplicities, vec![1, 1]);
    }

    #[test]
    fn psd_double_eigenvalue() {
        let cone = Cone::new(ConeSpec::Psd { order: 2 }, &linalg::svec(&Matrix::identity(2))).unwrap();
        let s = cone.spectrum(&linalg::svec(&Matrix::from_diag(&[3.0, 3.0]))).unwrap();
        assert_eq!(s.values, vec![3.0]);
        assert_eq!(s.multiplicities, vec![2]);
    }

    #[test]
    fn lorentz_eigen_gradients() {
        let g = lorentz().eigen_gradients(&[1.0, 2.0]).unwrap();
        assert_eq!(g.len(), 2);
        let hi = g.iter().find(|x| (x.value - 3.0).abs() < 1e-12).unwrap();
        let lo = g.iter().find(|x| (x.value - 1.0).abs() < 1e-12).unwrap();
        assert!(close(&hi.direction, &[1.0, 1.0], 1e-12));
        assert!(close(&lo.direction, &[-1.0, 1.0], 1e-12));

        let g = lorentz().eigen_gradients(&[0.0, 2.0]).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].multiplicity, 2);
        assert!((g[0].value - 2.0).abs() < 1e-14);
        assert!(close(&g[0].direction, &[0.0, 1.0], 1e-14));
    }

    #[test]
    fn orthant_eigen_gradients() {
        let cone = Cone::new(ConeSpec::Orthant { dim: 2 }, &[1.0, 1.0]).unwrap();
        let g = cone.eigen_gradients(&[2.0, 5.0]).unwrap();
        assert_eq!(g[0], EigenGradient { value: 2.0, multiplicity: 1, direction: vec![1.0, 0.0] });
        assert_eq!(g[1], EigenGradient { value: 5.0, multiplicity: 1, direction: vec![0.0, 1.0] });
    }

    #[test]
    fn validate_interior_cases() {
        let b = Matrix::from_diag(&[-1.0, 1.0]);
        assert!(validate_interior(&ConeSpec::Quadratic { b: b.clone() }, &[0.0, 1.0]).is_ok());
        assert!(matches!(
            validate_interior(&ConeSpec::Quadratic { b }, &[1.0, 0.0]),
            Err(Error::NotHyperbolicWrtE { .. })
        ));
        let bad_e = linalg::svec(&Matrix::from_diag(&[1.0, -1.0]));
        assert!(matches!(validate_interior(&ConeSpec::Psd { order: 2 }, &bad_e), Err(Error::NotHyperbolicWrtE { .. })));
        // B = diag(1, 1) has complex roots along some lines.
        assert!(validate_interior(&ConeSpec::Quadratic { b: Matrix::identity(2) }, &[0.0, 1.0]).is_err());
        assert!(validate_interior(&ConeSpec::Halfspace { a: vec![1.0, -1.0] }, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn structural_errors() {
        let bad = ConeSpec::Product {
            blocks: vec![
                ProductBlock { start: 0, len: 2, cone: ConeSpec::Orthant { dim: 2 } },
                ProductBlock { start: 1, len: 2, cone: ConeSpec::Orthant { dim: 2 } },
            ],
        };
        assert!(bad.dim().is_err());
        let asym = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(ConeSpec::Quadratic { b: asym }.dim().is_err());
        assert!(Cone::new(ConeSpec::Orthant { dim: 2 }, &[1.0]).is_err());
    }

    #[test]
    fn complex_roots_are_reported() {
        let cone = lorentz();
        // Valid cone, but feed the raw root solver a negative discriminant.
        assert!(matches!(quadratic_roots(1.0, 0.0, 1.0), Err(Error::ComplexRoots(_))));
        assert!(cone.eigenvalues(&[5.0, -1.0]).is_ok());
    }

    #[test]
    fn polyhedral_factors() {
        let spec = ConeSpec::Product {
            blocks: vec![
                ProductBlock { start: 0, len: 2, cone: ConeSpec::Orthant { dim: 2 } },
                ProductBlock { start: 2, len: 1, cone: ConeSpec::Halfspace { a: vec![2.0] } },
            ],
        };
        let cone = Cone::new(spec, &[1.0, 1.0, 1.0]).unwrap();
        let f = cone.linear_factors().unwrap();
        assert_eq!(f, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 2.0]]);
        assert!(lorentz().linear_factors().is_err());
    }
}
