//! Adjoint involutions and the Morita star product.
//!
//! Matrix algebras End_B(W) never appear as standalone objects: a hermitian
//! form over End_B(W) with the adjoint involution of a reference form f is
//! stored as its block Gram matrix together with f. The star product
//! transports such a form back to (B, gamma); on Gram matrices it is simply
//! blockwise left multiplication by the Gram of f.

use crate::algebras::AlgMat;
use crate::cohomology::CohClass;
use crate::error::{Error, Result};
use crate::hermitian::{HermForm, WittClassH};

/// The adjoint involution ad_f on End_B(W): alpha maps to
/// G_f^{-1} gamma(alpha)^T G_f.
#[derive(Clone, Debug)]
pub struct AdjointData {
    reference: HermForm,
    inverse_gram: AlgMat,
}

/// The involution on matrices over B induced by a nondegenerate reference
/// form.
pub fn adjoint_involution(f: &HermForm) -> Result<AdjointData> {
    let alg = f.algebra();
    let inverse_gram = alg
        .mat_inv(f.gram())?
        .ok_or(Error::Degenerate)?;
    Ok(AdjointData { reference: f.clone(), inverse_gram })
}

impl AdjointData {
    pub fn reference(&self) -> &HermForm {
        &self.reference
    }

    pub fn apply(&self, alpha: &AlgMat) -> Result<AlgMat> {
        let alg = self.reference.algebra();
        let conj = alg.mat_invol_transpose(alpha)?;
        alg.mat_mul(&self.inverse_gram, &alg.mat_mul(&conj, self.reference.gram())?)
    }

    /// The defining identity f(x, alpha(y)) = f(ad(alpha)(x), y), checked on
    /// the standard basis.
    pub fn verify_defining_identity(&self, alpha: &AlgMat) -> Result<bool> {
        let alg = self.reference.algebra();
        let g = self.reference.gram();
        // f(x, alpha y) has Gram G * alpha; f(ad(alpha) x, y) has Gram
        // invol(ad(alpha))^T * G
        let lhs = alg.mat_mul(g, alpha)?;
        let ad = self.apply(alpha)?;
        let rhs = alg.mat_mul(&alg.mat_invol_transpose(&ad)?, g)?;
        Ok(alg.mat_eq(&lhs, &rhs))
    }
}

/// A hermitian form over the matrix model (End_B(W), ad_f), stored as an
/// s x s array of m x m blocks over B together with the reference form.
#[derive(Clone, Debug)]
pub struct MatrixHermForm {
    reference: HermForm,
    eps: i8,
    blocks: Vec<Vec<AlgMat>>,
}

impl MatrixHermForm {
    pub fn new(reference: HermForm, eps: i8, blocks: Vec<Vec<AlgMat>>) -> Result<MatrixHermForm> {
        if eps != 1 && eps != -1 {
            return Err(Error::InvariantViolation("epsilon must be +1 or -1".into()));
        }
        let s = blocks.len();
        let m = reference.rank();
        let alg = reference.algebra().clone();
        for row in &blocks {
            if row.len() != s {
                return Err(Error::DimensionMismatch);
            }
            for blk in row {
                if blk.len() != m || blk.iter().any(|r| r.len() != m) {
                    return Err(Error::DimensionMismatch);
                }
            }
        }
        let ad = adjoint_involution(&reference)?;
        for i in 0..s {
            for j in 0..s {
                let mut expect = ad.apply(&blocks[i][j])?;
                if eps == -1 {
                    expect = alg.mat_neg(&expect)?;
                }
                if !alg.mat_eq(&blocks[j][i], &expect) {
                    return Err(Error::InvolutionMismatch);
                }
            }
        }
        let form = MatrixHermForm { reference, eps, blocks };
        if s > 0 && alg.regular_det(&form.flatten())?.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(form)
    }

    pub fn reference(&self) -> &HermForm {
        &self.reference
    }
    pub fn eps(&self) -> i8 {
        self.eps
    }
    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    /// Semisimple rank over End_B(W): s * m * deg(B) / ind(B).
    pub fn rank(&self) -> Result<u64> {
        let b = self.reference.algebra();
        let m = self.reference.rank() as u64;
        Ok(self.size() as u64 * m * b.degree() / b.index()?)
    }

    /// The underlying (s m) x (s m) matrix over B.
    pub fn flatten(&self) -> AlgMat {
        let s = self.size();
        let m = self.reference.rank();
        let alg = self.reference.algebra();
        let mut out = alg.mat_zero(s * m, s * m);
        for i in 0..s {
            for j in 0..s {
                for u in 0..m {
                    for v in 0..m {
                        out[i * m + u][j * m + v] = self.blocks[i][j][u][v].clone();
                    }
                }
            }
        }
        out
    }

    /// Invariants of a matrix-model form are computed through the Morita
    /// reduction to (B, gamma).
    pub fn e_n(&self, n: u32) -> Result<CohClass> {
        morita_reduce(self)?.e_n(n)
    }

    pub fn is_hyperbolic(&self) -> Result<bool> {
        morita_reduce(self)?.is_hyperbolic()
    }

    pub fn witt_class(&self) -> Result<WittClassH> {
        morita_reduce(self)?.witt_class()
    }
}

/// The Morita star product f * h: on Gram matrices, blockwise left
/// multiplication by the Gram of f. The result is (eps_f eps_h)-hermitian
/// over (B, gamma).
pub fn star_product(f: &HermForm, h: &MatrixHermForm) -> Result<HermForm> {
    let alg = f.algebra().clone();
    if h.reference.algebra() != &alg {
        return Err(Error::AlgebraMismatch);
    }
    if f.rank() != h.reference.rank() {
        return Err(Error::DimensionMismatch);
    }
    // h must be hermitian for ad_f (not merely for its recorded reference)
    let ad = adjoint_involution(f)?;
    for i in 0..h.size() {
        for j in 0..h.size() {
            let mut expect = ad.apply(&h.blocks[i][j])?;
            if h.eps == -1 {
                expect = alg.mat_neg(&expect)?;
            }
            if !alg.mat_eq(&h.blocks[j][i], &expect) {
                return Err(Error::InvolutionMismatch);
            }
        }
    }
    let s = h.size();
    let m = f.rank();
    let gf = f.gram();
    let mut out = alg.mat_zero(s * m, s * m);
    for i in 0..s {
        for j in 0..s {
            let blk = alg.mat_mul(gf, &h.blocks[i][j])?;
            for u in 0..m {
                for v in 0..m {
                    out[i * m + u][j * m + v] = blk[u][v].clone();
                }
            }
        }
    }
    HermForm::new(alg, f.eps() * h.eps, out)
}

/// Reduction along the recorded reference form.
pub fn morita_reduce(h: &MatrixHermForm) -> Result<HermForm> {
    star_product(&h.reference, h)
}

/// Quasi-inverse of the reduction with reference f: cut a form over
/// (B, gamma) into m x m blocks and multiply by the inverse Gram.
pub fn morita_lift(f: &HermForm, phi: &HermForm) -> Result<MatrixHermForm> {
    let alg = f.algebra().clone();
    if phi.algebra() != &alg {
        return Err(Error::AlgebraMismatch);
    }
    let m = f.rank();
    if m == 0 || phi.rank() % m != 0 {
        return Err(Error::DimensionMismatch);
    }
    let s = phi.rank() / m;
    let ginv = alg.mat_inv(f.gram())?.ok_or(Error::MissingReferenceForm)?;
    let big = phi.gram();
    let mut blocks = vec![vec![alg.mat_zero(m, m); s]; s];
    for i in 0..s {
        for j in 0..s {
            let mut blk = alg.mat_zero(m, m);
            for u in 0..m {
                for v in 0..m {
                    blk[u][v] = big[i * m + u][j * m + v].clone();
                }
            }
            blocks[i][j] = alg.mat_mul(&ginv, &blk)?;
        }
    }
    MatrixHermForm::new(f.clone(), phi.eps() * f.eps(), blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::InvAlgebra;
    use crate::scalars::BaseField;

    fn q() -> BaseField {
        BaseField::rationals()
    }

    fn quat(a: i64, b: i64) -> InvAlgebra {
        InvAlgebra::quaternion(q().from_int(a), q().from_int(b)).unwrap()
    }

    fn diag_h(alg: &InvAlgebra, eps: i8, entries: &[i64]) -> HermForm {
        let elems: Vec<_> = entries.iter().map(|&n| q().from_int(n)).collect();
        HermForm::diagonal(alg, eps, &elems).unwrap()
    }

    #[test]
    fn adjoint_of_the_identity_gram_is_transpose() {
        let alg = InvAlgebra::split(q());
        let f = diag_h(&alg, 1, &[1, 1]);
        let ad = adjoint_involution(&f).unwrap();
        let m = vec![
            vec![alg.from_base(q().from_int(1)), alg.from_base(q().from_int(2))],
            vec![alg.from_base(q().from_int(3)), alg.from_base(q().from_int(4))],
        ];
        let adm = ad.apply(&m).unwrap();
        let expected = alg.mat_invol_transpose(&m).unwrap();
        assert!(alg.mat_eq(&adm, &expected));
        assert!(ad.verify_defining_identity(&m).unwrap());
    }

    #[test]
    fn adjoint_of_a_rank_one_unit_form_is_the_involution() {
        let alg = quat(-1, -1);
        let f = diag_h(&alg, 1, &[1]);
        let ad = adjoint_involution(&f).unwrap();
        let x = alg
            .from_coords(&[q().from_int(2), q().from_int(1), q().from_int(-3), q().from_int(5)])
            .unwrap();
        let m = vec![vec![x.clone()]];
        let adm = ad.apply(&m).unwrap();
        assert_eq!(adm[0][0], alg.invol(&x).unwrap());
        assert!(ad.verify_defining_identity(&m).unwrap());
    }

    #[test]
    fn adjoint_with_signature_gram() {
        let alg = InvAlgebra::split(q());
        let f = diag_h(&alg, 1, &[1, -1]);
        let ad = adjoint_involution(&f).unwrap();
        // ad(alpha) = J alpha^T J with J = diag(1, -1)
        let e = |n: i64| alg.from_base(q().from_int(n));
        let m = vec![vec![e(1), e(2)], vec![e(3), e(4)]];
        let adm = ad.apply(&m).unwrap();
        let expected = vec![vec![e(1), e(-3)], vec![e(-2), e(4)]];
        assert!(alg.mat_eq(&adm, &expected));
        // involutive
        let back = ad.apply(&adm).unwrap();
        assert!(alg.mat_eq(&back, &m));
    }

    #[test]
    fn star_with_rank_one_reference_reads_off_the_gram() {
        let alg = quat(-1, -3);
        let f = diag_h(&alg, 1, &[1]);
        let g = diag_h(&alg, 1, &[2, -5]);
        let lifted = morita_lift(&f, &g).unwrap();
        let back = star_product(&f, &lifted).unwrap();
        assert_eq!(back.gram(), g.gram());
    }

    #[test]
    fn star_of_scalar_block_matches_the_reference_scaled() {
        // B = F, f = <1,1>, h = <lambda> over M_2(F): f * h = <lambda, lambda>
        let alg = InvAlgebra::split(q());
        let f = diag_h(&alg, 1, &[1, 1]);
        let lambda = q().from_int(7);
        let block = alg.mat_scalar_mul(&lambda, &alg.mat_identity(2)).unwrap();
        let h = MatrixHermForm::new(f.clone(), 1, vec![vec![block]]).unwrap();
        assert_eq!(h.rank().unwrap(), 2);
        let prod = star_product(&f, &h).unwrap();
        let expected = diag_h(&alg, 1, &[7, 7]);
        assert_eq!(prod.gram(), expected.gram());
    }

    #[test]
    fn star_preserves_hyperbolicity_and_witt_classes() {
        let alg = quat(-1, -1);
        let f = diag_h(&alg, 1, &[1, 3]);
        // h = <1> perp <-1> over the matrix model: hyperbolic after reduction
        let one = morita_lift(&f, &f).unwrap();
        let neg = morita_lift(&f, &f.negate()).unwrap();
        let blocks = vec![
            vec![one.blocks[0][0].clone(), alg.mat_zero(2, 2)],
            vec![alg.mat_zero(2, 2), neg.blocks[0][0].clone()],
        ];
        let h = MatrixHermForm::new(f.clone(), 1, blocks).unwrap();
        assert!(h.is_hyperbolic().unwrap());
        let reduced = morita_reduce(&h).unwrap();
        assert!(reduced.is_hyperbolic().unwrap());
    }

    #[test]
    fn reduction_is_stable_under_scaling_the_reference() {
        // e_n computed with reference f and with lambda f agree
        let alg = quat(-1, -1);
        let f = diag_h(&alg, 1, &[1, 3]);
        let g = diag_h(&alg, 1, &[2, 7, -1, 5]);
        let h = morita_lift(&f, &g).unwrap();
        let lf = f.scale(&q().from_int(-6)).unwrap();
        let h2 = MatrixHermForm::new(lf.clone(), h.eps(), h.blocks.clone()).unwrap();
        for n in 1..=3 {
            let a = h.e_n(n);
            let b = h2.e_n(n);
            match (a, b) {
                (Ok(x), Ok(y)) => assert_eq!(x, y),
                (Err(_), Err(_)) => break,
                _ => panic!("definedness differs"),
            }
        }
    }

    #[test]
    fn mismatched_reference_is_rejected() {
        let alg = quat(-1, -1);
        let f = diag_h(&alg, 1, &[1, 3]);
        let e = |n: i64| alg.from_base(q().from_int(n));
        // an off-diagonal hermitian Gram over (D, gamma), lifted along f
        let g = HermForm::new(
            alg.clone(),
            1,
            vec![vec![e(1), e(1)], vec![e(1), e(3)]],
        )
        .unwrap();
        let h = morita_lift(&f, &g).unwrap();
        // h is ad_f-hermitian but not hermitian for the adjoint of a
        // reference with a different off-diagonal action
        let other = diag_h(&alg, 1, &[1, 5]);
        assert!(matches!(
            star_product(&other, &h),
            Err(Error::InvolutionMismatch)
        ));
        // while scaling the reference leaves the involution unchanged
        let scaled = f.scale(&q().from_int(4)).unwrap();
        assert!(star_product(&scaled, &h).is_ok());
    }
}
