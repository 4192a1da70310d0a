//! Epsilon-hermitian forms over the supported involutorial algebras, their
//! Jacobson trace forms, the e_n invariant chain in the symplectic
//! (quaternion) and unitary (quadratic etale) cases, hyperbolicity deciders,
//! and the relative e_3 invariant.
//!
//! For a quaternion algebra with its canonical involution the trace form
//! q_h(x) = h(x, x) of a rank r form has dimension 4r; over a quadratic
//! etale algebra it has dimension 2r. When the algebra splits, every
//! nondegenerate even hermitian form is hyperbolic and the trace form is
//! the hyperbolic form of the right dimension.

use crate::algebras::{AlgElem, AlgKind, AlgMat, InvAlgebra};
use crate::cohomology::{symbol_cup, CohClass};
use crate::error::{Error, Result};
use crate::quadforms::{diagonalize_symmetric, e_chain_bound, QuadForm, WittClassQ};
use crate::scalars::FieldElem;

/// A nondegenerate epsilon-hermitian form, given by its Gram matrix over the
/// algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermForm {
    alg: InvAlgebra,
    eps: i8,
    gram: AlgMat,
}

impl HermForm {
    pub fn new(alg: InvAlgebra, eps: i8, gram: AlgMat) -> Result<HermForm> {
        if eps != 1 && eps != -1 {
            return Err(Error::InvariantViolation("epsilon must be +1 or -1".into()));
        }
        let r = gram.len();
        for row in &gram {
            if row.len() != r {
                return Err(Error::DimensionMismatch);
            }
            for e in row {
                // shape/field check
                alg.coords(e)?;
            }
        }
        // hermitian symmetry: G_ji = eps * invol(G_ij)
        let sign = |x: &AlgElem| -> Result<AlgElem> {
            if eps == 1 {
                Ok(x.clone())
            } else {
                alg.neg(x)
            }
        };
        for i in 0..r {
            for j in 0..r {
                let expect = sign(&alg.invol(&gram[i][j])?)?;
                if gram[j][i] != expect {
                    return Err(if eps == -1 {
                        Error::NotSkewHermitian
                    } else {
                        Error::InvariantViolation(
                            "Gram matrix is not hermitian for the involution".into(),
                        )
                    });
                }
            }
        }
        if r > 0 && alg.regular_det(&gram)?.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(HermForm { alg, eps, gram })
    }

    /// Diagonal form <d_1, ..., d_r> with base-field entries.
    pub fn diagonal(alg: &InvAlgebra, eps: i8, entries: &[FieldElem]) -> Result<HermForm> {
        let r = entries.len();
        let mut gram = alg.mat_zero(r, r);
        for (i, e) in entries.iter().enumerate() {
            gram[i][i] = alg.from_base(e.clone());
        }
        HermForm::new(alg.clone(), eps, gram)
    }

    pub fn algebra(&self) -> &InvAlgebra {
        &self.alg
    }
    pub fn eps(&self) -> i8 {
        self.eps
    }
    pub fn gram(&self) -> &AlgMat {
        &self.gram
    }
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn orthogonal_sum(&self, other: &HermForm) -> Result<HermForm> {
        if self.alg != other.alg || self.eps != other.eps {
            return Err(Error::AlgebraMismatch);
        }
        Ok(HermForm {
            alg: self.alg.clone(),
            eps: self.eps,
            gram: self.alg.mat_block_diag(&self.gram, &other.gram),
        })
    }

    pub fn negate(&self) -> HermForm {
        HermForm {
            alg: self.alg.clone(),
            eps: self.eps,
            gram: self.alg.mat_neg(&self.gram).unwrap(),
        }
    }

    /// Scale by a nonzero base-field element.
    pub fn scale(&self, lambda: &FieldElem) -> Result<HermForm> {
        if lambda.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(HermForm {
            alg: self.alg.clone(),
            eps: self.eps,
            gram: self.alg.mat_scalar_mul(lambda, &self.gram)?,
        })
    }

    /// h(x, y) for coordinate vectors over the algebra.
    pub fn evaluate(&self, x: &[AlgElem], y: &[AlgElem]) -> Result<AlgElem> {
        let r = self.rank();
        if x.len() != r || y.len() != r {
            return Err(Error::DimensionMismatch);
        }
        let mut acc = self.alg.zero();
        for s in 0..r {
            let xs = self.alg.invol(&x[s])?;
            for t in 0..r {
                let term = self.alg.mul(&self.alg.mul(&xs, &self.gram[s][t])?, &y[t])?;
                acc = self.alg.add(&acc, &term)?;
            }
        }
        Ok(acc)
    }

    /// Put an even hermitian form over a division algebra or etale field into
    /// diagonal shape; returns the base-field diagonal entries.
    pub fn diagonalize(&self) -> Result<Vec<FieldElem>> {
        if self.eps != 1 {
            return Err(Error::NotEven);
        }
        match self.alg.kind() {
            AlgKind::Split => {}
            _ => {
                if self.alg.is_split()? {
                    return Err(Error::NotDivision);
                }
            }
        }
        let alg = self.alg.clone();
        let mut gram = self.gram.clone();
        let mut out = Vec::with_capacity(self.rank());
        while !gram.is_empty() {
            let r = gram.len();
            // pivot: a basis vector with h(v, v) != 0, else e_i + e_j u over
            // the algebra basis
            let mut pivot_basis_change: Option<AlgMat> = None;
            if let Some(i) = (0..r).find(|&i| !alg.is_zero_elem(&gram[i][i])) {
                if i != 0 {
                    let mut p = alg.mat_identity(r);
                    // swap columns 0 and i
                    for row in p.iter_mut() {
                        row.swap(0, i);
                    }
                    pivot_basis_change = Some(p);
                }
            } else {
                'search: for i in 0..r {
                    for j in 0..r {
                        if i == j {
                            continue;
                        }
                        for b in 0..alg.dim_over_base() {
                            let u = alg.basis_elem(b);
                            // h(e_i + e_j u, e_i + e_j u)
                            //   = G_ii + invol(u) G_ji + G_ij u + invol(u) G_jj u
                            let gu = alg.mul(&gram[i][j], &u)?;
                            let ug = alg.mul(&alg.invol(&u)?, &gram[j][i])?;
                            let ugu =
                                alg.mul(&alg.mul(&alg.invol(&u)?, &gram[j][j])?, &u)?;
                            let val = alg
                                .add(&gram[i][i], &alg.add(&ug, &alg.add(&gu, &ugu)?)?)?;
                            if !alg.is_zero_elem(&val) {
                                let mut p = alg.mat_identity(r);
                                p[j][i] = u; // new e_i' = e_i + e_j * u
                                if i != 0 {
                                    for row in p.iter_mut() {
                                        row.swap(0, i);
                                    }
                                }
                                pivot_basis_change = Some(p);
                                break 'search;
                            }
                        }
                    }
                }
                if pivot_basis_change.is_none() {
                    // h(x, x) = 0 on a spanning family; by nondegeneracy of
                    // the trace pairing the form is zero, contradicting
                    // nondegeneracy unless the rank is 0
                    return Err(Error::Degenerate);
                }
            }
            if let Some(p) = pivot_basis_change {
                let pt = alg.mat_invol_transpose(&p)?;
                gram = alg.mat_mul(&pt, &alg.mat_mul(&gram, &p)?)?;
            }
            let d = gram[0][0].clone();
            let d_base = alg.base_part(&d).ok_or(Error::NotEven)?;
            if d_base.is_zero() {
                return Err(Error::Degenerate);
            }
            out.push(d_base);
            let d_inv = alg.inv(&d)?;
            // clear the first row/column: e_t' = e_t - e_0 d^{-1} G_{0t}
            let mut p = alg.mat_identity(r);
            for t in 1..r {
                p[0][t] = alg.neg(&alg.mul(&d_inv, &gram[0][t])?)?;
            }
            let pt = alg.mat_invol_transpose(&p)?;
            gram = alg.mat_mul(&pt, &alg.mat_mul(&gram, &p)?)?;
            // drop the pivot
            gram = gram
                .into_iter()
                .skip(1)
                .map(|row| row.into_iter().skip(1).collect())
                .collect();
        }
        Ok(out)
    }

    /// The Jacobson trace form q_h(x) = h(x, x) as a quadratic form over the
    /// base field. When the algebra splits every even hermitian form is
    /// hyperbolic and the hyperbolic form of dimension 2 * ind * rank is
    /// returned directly.
    pub fn trace_form(&self) -> Result<QuadForm> {
        if self.eps != 1 {
            return Err(Error::NotEven);
        }
        let field = self.alg.field().clone();
        let r = self.rank();
        match self.alg.kind() {
            AlgKind::Split => Err(Error::UnsupportedAlgebra),
            AlgKind::QuadEtale { .. } | AlgKind::Quaternion { .. } => {
                if self.alg.is_split()? {
                    return QuadForm::hyperbolic_of_dim(&field, 2 * r);
                }
                let m = self.alg.dim_over_base();
                let n = r * m;
                // F-basis e_s * beta; h(e_s b, e_t b') = invol(b) G_st b'
                let pair = |s: usize, bi: usize, t: usize, bj: usize| -> Result<AlgElem> {
                    let b1 = self.alg.invol(&self.alg.basis_elem(bi))?;
                    let b2 = self.alg.basis_elem(bj);
                    self.alg
                        .mul(&self.alg.mul(&b1, &self.gram[s][t])?, &b2)
                };
                if field.is_char2() {
                    let mut coeffs = vec![vec![field.zero(); n]; n];
                    for s in 0..r {
                        for bi in 0..m {
                            let k = s * m + bi;
                            let diag = pair(s, bi, s, bi)?;
                            coeffs[k][k] = self
                                .alg
                                .base_part(&diag)
                                .ok_or(Error::NotEven)?;
                            for t in 0..r {
                                for bj in 0..m {
                                    let l = t * m + bj;
                                    if l <= k {
                                        continue;
                                    }
                                    // polar coefficient: Trd of h on the pair
                                    let v = pair(s, bi, t, bj)?;
                                    let tr = self.alg.trd(&v)?;
                                    coeffs[k][l] = tr;
                                }
                            }
                        }
                    }
                    QuadForm::char2(field, coeffs)
                } else {
                    let mut gram_f = vec![vec![field.zero(); n]; n];
                    for s in 0..r {
                        for bi in 0..m {
                            let k = s * m + bi;
                            for t in 0..r {
                                for bj in 0..m {
                                    let l = t * m + bj;
                                    let v = pair(s, bi, t, bj)?;
                                    // q-Gram = polar/2 = Trd(h)/2
                                    gram_f[k][l] = self.alg.trd(&v)?.halve()?;
                                }
                            }
                        }
                    }
                    let entries = diagonalize_symmetric(&field, &gram_f)?;
                    QuadForm::diagonal(field, entries)
                }
            }
        }
    }

    /// The invariant e_n(h) = e_n(q_h); for n >= 2 defined only once
    /// e_{n-1}(h) vanishes.
    pub fn e_n(&self, n: u32) -> Result<CohClass> {
        self.trace_form()?.e_n(n)
    }

    /// e_n computed through the trace form and, where the closed diagonal
    /// formulas apply, recomputed from them; the routes are asserted equal.
    pub fn e_n_checked(&self, n: u32) -> Result<CohClass> {
        let via_trace = self.e_n(n)?;
        if let Some(via_formula) = self.e_n_closed_form(n)? {
            if via_formula != via_trace {
                return Err(Error::InvariantViolation(format!(
                    "closed formula route disagrees with the trace form route for e_{n}"
                )));
            }
        }
        Ok(via_trace)
    }

    /// Closed diagonal formulas: for a non-split quaternion algebra e_1 = 0,
    /// e_2 = r (D), and for even r, e_3 = ((-1)^{r/2} prod lambda_i) cup (D);
    /// for a quadratic etale field e_1 = r (c] and, once e_1 vanishes,
    /// e_2 = ((-1)^{r/2} prod lambda_i) cup (c]. None when no formula applies.
    fn e_n_closed_form(&self, n: u32) -> Result<Option<CohClass>> {
        if self.eps != 1 {
            return Ok(None);
        }
        let field = self.alg.field().clone();
        let r = self.rank();
        match self.alg.kind() {
            AlgKind::Quaternion { .. } if !self.alg.is_split()? => {
                match n {
                    1 => Ok(Some(CohClass::zero(field, 1))),
                    2 => {
                        if r % 2 == 0 {
                            Ok(Some(CohClass::zero(field, 2)))
                        } else {
                            Ok(Some(self.alg.brauer_class()?.class))
                        }
                    }
                    3 if r % 2 == 0 => {
                        let lambdas = self.diagonalize()?;
                        let mut prod = field.from_int(if (r / 2) % 2 == 1 { -1 } else { 1 });
                        for l in &lambdas {
                            prod = prod.mul(l)?;
                        }
                        let cls = symbol_cup(&[&prod], &self.alg.brauer_class()?.class)?;
                        Ok(Some(cls))
                    }
                    _ => Ok(None),
                }
            }
            AlgKind::QuadEtale { c } if !self.alg.is_split()? => match n {
                1 => {
                    let base = etale_parameter_class(&self.alg, c)?;
                    if r % 2 == 0 {
                        Ok(Some(CohClass::zero(field, 1)))
                    } else {
                        Ok(Some(base))
                    }
                }
                2 if r % 2 == 0 => {
                    if field.is_char2() {
                        // H^2 of a finite field vanishes
                        return Ok(Some(CohClass::zero(field, 2)));
                    }
                    let lambdas = self.diagonalize()?;
                    let mut prod = field.from_int(if (r / 2) % 2 == 1 { -1 } else { 1 });
                    for l in &lambdas {
                        prod = prod.mul(l)?;
                    }
                    let base = etale_parameter_class(&self.alg, c)?;
                    Ok(Some(symbol_cup(&[&prod], &base)?))
                }
                _ => Ok(None),
            },
            _ => {
                // split algebras: every even form is hyperbolic
                if self.alg.kind() != &AlgKind::Split {
                    Ok(Some(CohClass::zero(field, n)))
                } else {
                    Ok(None)
                }
            }
        }
    }

    /// Hyperbolicity via the trace form, asserted against the e_n route.
    pub fn is_hyperbolic(&self) -> Result<bool> {
        let q = self.trace_form()?;
        let via_form = q.is_hyperbolic()?;
        let via_chain = q.e_chain_vanishes()?;
        if via_form != via_chain {
            return Err(Error::InvariantViolation(
                "hyperbolicity routes disagree".into(),
            ));
        }
        Ok(via_form)
    }

    /// Whether every defined e_n vanishes up to the dimension bound of the
    /// trace form.
    pub fn e_chain_vanishes(&self) -> Result<bool> {
        let q = self.trace_form()?;
        let bound = e_chain_bound(q.dim());
        for n in 1..=bound {
            if !q.e_n(n)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn witt_class(&self) -> Result<WittClassH> {
        let (_, trace_class) = self.trace_form()?.witt_decompose()?;
        Ok(WittClassH {
            alg: self.alg.clone(),
            eps: self.eps,
            rank_parity: self.rank() % 2 == 1,
            trace_class,
        })
    }

    /// Two forms over the same algebra are isomorphic iff they have equal
    /// rank and Witt-equivalent trace forms.
    pub fn equivalent_to(&self, other: &HermForm) -> Result<bool> {
        if self.alg != other.alg || self.eps != other.eps {
            return Err(Error::AlgebraMismatch);
        }
        if self.rank() != other.rank() {
            return Ok(false);
        }
        Ok(self.witt_class()? == other.witt_class()?)
    }

    /// Relative invariant e_3(h/g) = e_3(-g perp h); requires the lower
    /// invariants of the difference to vanish.
    pub fn relative_e3(&self, g: &HermForm) -> Result<CohClass> {
        if self.alg != g.alg || self.eps != g.eps {
            return Err(Error::AlgebraMismatch);
        }
        let diff = g.negate().orthogonal_sum(self)?;
        let q = diff.trace_form()?;
        for n in 1..=2 {
            if !q.e_n(n).map_err(|_| Error::ClassMismatch)?.is_zero() {
                return Err(Error::ClassMismatch);
            }
        }
        q.e_n(3)
    }
}

/// The H^1 class of the etale parameter: the square class of c away from
/// characteristic 2, the Artin-Schreier class in characteristic 2.
pub(crate) fn etale_parameter_class(alg: &InvAlgebra, c: &FieldElem) -> Result<CohClass> {
    let field = alg.field().clone();
    if field.is_char2() {
        Ok(CohClass::from_arf_bit(
            field,
            crate::scalars::artin_schreier_class(c)?,
        ))
    } else {
        Ok(CohClass::from_square_class(
            field.clone(),
            crate::scalars::square_class(c)?,
        ))
    }
}

/// Canonical Witt-class data of a hermitian form: the algebra, the rank
/// parity, and the Witt class of the Jacobson trace form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittClassH {
    alg: InvAlgebra,
    eps: i8,
    rank_parity: bool,
    trace_class: WittClassQ,
}

impl WittClassH {
    pub fn is_zero(&self) -> bool {
        !self.rank_parity && self.trace_class.is_zero()
    }

    pub fn trace_class(&self) -> &WittClassQ {
        &self.trace_class
    }
}
