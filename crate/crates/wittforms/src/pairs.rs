//! Hermitian pairs: a nondegenerate even hermitian form over an algebra of
//! the first kind together with a semi-trace, represented by an element l
//! with l + sigma(l) = 1 for the adjoint involution sigma of the form.
//!
//! Away from characteristic 2 the semi-trace is forced (l = 1/2) and pairs
//! over the split base field are symmetric bilinear forms, while pairs over
//! a quaternion algebra with its canonical involution are skew-hermitian
//! forms. In characteristic 2 (finite fields, split base) the bilinear form
//! is alternating and the semi-trace carries real information.

use num_traits::Signed;

use crate::algebras::{AlgElem, AlgKind, AlgMat, InvAlgebra};
use crate::cohomology::CohClass;
use crate::error::{Error, Result};
use crate::hermitian::HermForm;
use crate::quadforms::{diagonalize_symmetric, det_field, e_chain_bound, QuadForm};
use crate::scalars::{square_class, BaseField, FieldElem};

#[derive(Clone, Debug, PartialEq)]
pub struct HermPair {
    h: HermForm,
    l: AlgMat,
}

impl HermPair {
    /// Build a pair, validating the semi-trace condition. Away from
    /// characteristic 2 the semi-trace is unique and `l` is normalized to
    /// (1/2) * identity (a provided `l` is still checked first).
    pub fn new(h: HermForm, l: Option<AlgMat>) -> Result<HermPair> {
        let alg = h.algebra().clone();
        let r = h.rank();
        match alg.kind() {
            AlgKind::QuadEtale { .. } => Err(Error::UnsupportedAlgebra),
            AlgKind::Split => {
                if alg.field().is_char2() {
                    if h.eps() != 1 {
                        return Err(Error::InvariantViolation(
                            "characteristic-2 pairs use epsilon = +1".into(),
                        ));
                    }
                    for i in 0..r {
                        if !alg.is_zero_elem(&h.gram()[i][i]) {
                            return Err(Error::NotAlternatingChar2);
                        }
                    }
                    let l = l.ok_or_else(|| {
                        Error::InvariantViolation(
                            "characteristic-2 pairs need an explicit semi-trace".into(),
                        )
                    })?;
                    verify_semitrace(&h, &l)?;
                    Ok(HermPair { h, l })
                } else {
                    if h.eps() != 1 {
                        return Err(Error::InvariantViolation(
                            "split pairs away from characteristic 2 use symmetric forms".into(),
                        ));
                    }
                    if let Some(l) = &l {
                        verify_semitrace(&h, l)?;
                    }
                    let l = half_identity(&alg, r)?;
                    Ok(HermPair { h, l })
                }
            }
            AlgKind::Quaternion { .. } => {
                if h.eps() != -1 {
                    return Err(Error::NotSkewHermitian);
                }
                if let Some(l) = &l {
                    verify_semitrace(&h, l)?;
                }
                let l = half_identity(&alg, r)?;
                Ok(HermPair { h, l })
            }
        }
    }

    pub fn form(&self) -> &HermForm {
        &self.h
    }

    pub fn semi_trace(&self) -> &AlgMat {
        &self.l
    }

    pub fn algebra(&self) -> &InvAlgebra {
        self.h.algebra()
    }

    /// Semisimple rank of the pair: the rank of the underlying module over
    /// the algebra (for the split quaternion model this is twice the Gram
    /// size).
    pub fn rank(&self) -> Result<u64> {
        let alg = self.algebra();
        alg.ssrk((self.h.rank() * alg.dim_over_base()) as u64)
    }

    fn rank_index_even(&self) -> Result<bool> {
        let alg = self.algebra();
        Ok((self.rank()? * alg.index()?) % 2 == 0)
    }

    /// Orthogonal sum: block Gram and block-diagonal semi-trace.
    pub fn orthogonal_sum(&self, other: &HermPair) -> Result<HermPair> {
        if self.algebra() != other.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        let h = self.h.orthogonal_sum(&other.h)?;
        let alg = self.algebra();
        let l = alg.mat_block_diag(&self.l, &other.l);
        verify_semitrace(&h, &l)?;
        Ok(HermPair { h, l })
    }

    pub fn negate(&self) -> Result<HermPair> {
        // the semi-trace of -h is the same l: sigma is unchanged under
        // scaling the form
        let h = self.h.negate();
        verify_semitrace(&h, &self.l)?;
        Ok(HermPair { h, l: self.l.clone() })
    }

    /// The quadratic form q(v) = f(phi_b(v (x) v)) of a pair over the split
    /// base field, via q(v) = v^T (B l) v.
    pub fn associated_quadratic_form(&self) -> Result<QuadForm> {
        match self.algebra().kind() {
            AlgKind::Split => self.associated_form_split(),
            _ => Err(Error::NotSplit),
        }
    }

    fn associated_form_split(&self) -> Result<QuadForm> {
        let alg = self.algebra().clone();
        let field = alg.field().clone();
        let r = self.h.rank();
        // base-field matrices
        let b: Vec<Vec<FieldElem>> = self
            .h
            .gram()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| alg.base_part(e).ok_or(Error::AlgebraMismatch))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let l: Vec<Vec<FieldElem>> = self
            .l
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| alg.base_part(e).ok_or(Error::AlgebraMismatch))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut m = vec![vec![field.zero(); r]; r];
        for i in 0..r {
            for j in 0..r {
                let mut acc = field.zero();
                for k in 0..r {
                    acc = acc.add(&b[i][k].mul(&l[k][j])?)?;
                }
                m[i][j] = acc;
            }
        }
        if field.is_char2() {
            let q = QuadForm::char2(field, m)?;
            // the polar form of q is exactly b
            if q.polar_matrix() != b {
                return Err(Error::InvariantViolation(
                    "polar form of the associated form differs from the pair".into(),
                ));
            }
            Ok(q)
        } else {
            // m = B/2 is symmetric
            let entries = diagonalize_symmetric(&field, &m)?;
            QuadForm::diagonal(field, entries)
        }
    }

    /// The associated quadratic form for every supported split situation:
    /// directly over the split base field, or through an explicit splitting
    /// of a split quaternion model.
    pub(crate) fn associated_form_any(&self) -> Result<QuadForm> {
        match self.algebra().kind() {
            AlgKind::Split => self.associated_form_split(),
            AlgKind::Quaternion { .. } => {
                if self.algebra().is_split()? {
                    self.split_quaternion_transport()
                } else {
                    Err(Error::NotSplit)
                }
            }
            AlgKind::QuadEtale { .. } => Err(Error::UnsupportedAlgebra),
        }
    }

    /// e_n of the pair. Defined when rank times index is even; computed on
    /// the associated quadratic form where the algebra is split (or splits,
    /// over a finite field). For a non-split quaternion algebra over Q only
    /// e_1 is computable here, by the reduced-norm formula.
    pub fn e_n(&self, n: u32) -> Result<CohClass> {
        if !self.rank_index_even()? {
            return Err(Error::OddRankTimesIndex);
        }
        match self.algebra().kind() {
            AlgKind::Split => self.associated_form_split()?.e_n(n),
            AlgKind::Quaternion { .. } => {
                if self.algebra().is_split()? {
                    let q = self.associated_form_any()?;
                    let out = q.e_n(n)?;
                    if n == 1 {
                        // the reduced-norm discriminant formula must agree
                        // with the explicit splitting
                        let formula = self.skew_nrd_class()?;
                        if formula != out {
                            return Err(Error::InvariantViolation(
                                "skew discriminant routes disagree".into(),
                            ));
                        }
                    }
                    Ok(out)
                } else if n == 1 {
                    self.skew_nrd_class()
                } else {
                    Err(Error::UnsupportedAlgebra)
                }
            }
            AlgKind::QuadEtale { .. } => Err(Error::UnsupportedAlgebra),
        }
    }

    /// e_1 of a pair over a non-split quaternion algebra: the square class
    /// (-1)^m Nrd(G) of the skew-hermitian Gram, m = rank(G).
    pub fn quaternionic_e1(&self) -> Result<CohClass> {
        match self.algebra().kind() {
            AlgKind::Quaternion { .. } => {
                if self.algebra().is_split()? {
                    return Err(Error::SplitAlgebra);
                }
                self.skew_nrd_class()
            }
            _ => Err(Error::UnsupportedAlgebra),
        }
    }

    fn skew_nrd_class(&self) -> Result<CohClass> {
        let alg = self.algebra();
        let field = alg.field().clone();
        let nrd = quaternion_matrix_reduced_norm(alg, self.h.gram())?;
        let m = self.h.rank();
        let sign = field.from_int(if m % 2 == 1 { -1 } else { 1 });
        let val = sign.mul(&nrd)?;
        Ok(CohClass::from_square_class(field, square_class(&val)?))
    }

    /// Hyperbolicity in the split and finite-field cases, via the associated
    /// quadratic form; the e_n-chain route is asserted to agree.
    pub fn is_hyperbolic(&self) -> Result<bool> {
        if !self.rank_index_even()? {
            return Err(Error::OddRankTimesIndex);
        }
        let q = self.associated_form_any()?;
        let via_form = q.is_hyperbolic()?;
        let mut via_chain = true;
        for n in 1..=e_chain_bound(q.dim()) {
            if !q.e_n(n)?.is_zero() {
                via_chain = false;
                break;
            }
        }
        if via_form != via_chain {
            return Err(Error::InvariantViolation(
                "pair hyperbolicity routes disagree".into(),
            ));
        }
        Ok(via_form)
    }

    /// Isotropy via the associated quadratic form (split cases).
    pub fn is_isotropic(&self) -> Result<bool> {
        self.associated_form_any()?.is_isotropic()
    }

    // -- explicit splitting of a split quaternion model ----------------------

    /// Transport a pair over a split quaternion algebra to the associated
    /// quadratic form over the base field: find a pure unit u with u^2 = 1,
    /// represent the algebra on the left ideal D(1+u)/2, and read the
    /// symmetric Gram off the standard alternating pairing.
    fn split_quaternion_transport(&self) -> Result<QuadForm> {
        let alg = self.algebra().clone();
        let field = alg.field().clone();
        let r = self.h.rank();
        let u = pure_square_one(&alg)?;
        let half = field.from_int(2).inv()?;
        let e = alg.scalar_mul(&half, &alg.add(&alg.one(), &u)?)?;
        // basis of the left ideal D e: two independent vectors among
        // {e, i e, j e, k e}
        let cands: Vec<AlgElem> = (0..4)
            .map(|k| alg.mul(&alg.basis_elem(k), &e))
            .collect::<Result<Vec<_>>>()?;
        let coords: Vec<Vec<FieldElem>> = cands
            .iter()
            .map(|v| alg.coords(v))
            .collect::<Result<Vec<_>>>()?;
        let mut picked: Vec<usize> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        let mut reduced: Vec<Vec<FieldElem>> = Vec::new();
        for (idx, row) in coords.iter().enumerate() {
            let mut row = row.clone();
            for (p, rr) in pivots.iter().zip(&reduced) {
                if !row[*p].is_zero() {
                    let f = row[*p].clone();
                    for c in 0..4 {
                        row[c] = row[c].sub(&rr[c].mul(&f)?)?;
                    }
                }
            }
            if let Some(p) = (0..4).find(|&c| !row[c].is_zero()) {
                let inv = row[p].inv()?;
                for c in 0..4 {
                    row[c] = row[c].mul(&inv)?;
                }
                pivots.push(p);
                reduced.push(row);
                picked.push(idx);
                if picked.len() == 2 {
                    break;
                }
            }
        }
        if picked.len() != 2 {
            return Err(Error::InvariantViolation(
                "left ideal basis extraction failed".into(),
            ));
        }
        let v0 = cands[picked[0]].clone();
        let v1 = cands[picked[1]].clone();
        // representation psi: D -> M_2(F): d * v_k = v_0 psi_0k + v_1 psi_1k
        let v0c = alg.coords(&v0)?;
        let v1c = alg.coords(&v1)?;
        // choose two coordinate rows where (v0, v1) is invertible
        let mut solver: Option<([usize; 2], [[FieldElem; 2]; 2])> = None;
        'rows: for r0 in 0..4 {
            for r1 in (r0 + 1)..4 {
                let det = v0c[r0]
                    .mul(&v1c[r1])?
                    .sub(&v0c[r1].mul(&v1c[r0])?)?;
                if !det.is_zero() {
                    let det_inv = det.inv()?;
                    // inverse of [[v0c[r0], v1c[r0]], [v0c[r1], v1c[r1]]]
                    let inv = [
                        [v1c[r1].mul(&det_inv)?, v1c[r0].neg().mul(&det_inv)?],
                        [v0c[r1].neg().mul(&det_inv)?, v0c[r0].mul(&det_inv)?],
                    ];
                    solver = Some(([r0, r1], inv));
                    break 'rows;
                }
            }
        }
        let (rows, inv) = solver.ok_or_else(|| {
            Error::InvariantViolation("left ideal basis is degenerate".into())
        })?;
        let psi = |d: &AlgElem| -> Result<[[FieldElem; 2]; 2]> {
            let mut out = [
                [field.zero(), field.zero()],
                [field.zero(), field.zero()],
            ];
            for (k, v) in [&v0, &v1].into_iter().enumerate() {
                let dv = alg.mul(d, v)?;
                let dvc = alg.coords(&dv)?;
                let c0 = inv[0][0]
                    .mul(&dvc[rows[0]])?
                    .add(&inv[0][1].mul(&dvc[rows[1]])?)?;
                let c1 = inv[1][0]
                    .mul(&dvc[rows[0]])?
                    .add(&inv[1][1].mul(&dvc[rows[1]])?)?;
                // consistency on the remaining coordinates
                for c in 0..4 {
                    let recon = v0c[c].mul(&c0)?.add(&v1c[c].mul(&c1)?)?;
                    if recon != dvc[c] {
                        return Err(Error::InvariantViolation(
                            "splitting representation is inconsistent".into(),
                        ));
                    }
                }
                out[0][k] = c0;
                out[1][k] = c1;
            }
            Ok(out)
        };
        // transported Gram K (2r x 2r) and its symmetric companion Omega K
        let n = 2 * r;
        let mut sym = vec![vec![field.zero(); n]; n];
        for s in 0..r {
            for t in 0..r {
                let blk = psi(&self.h.gram()[s][t])?;
                // Omega * blk with Omega = [[0, 1], [-1, 0]]
                sym[2 * s][2 * t] = blk[1][0].clone();
                sym[2 * s][2 * t + 1] = blk[1][1].clone();
                sym[2 * s + 1][2 * t] = blk[0][0].neg();
                sym[2 * s + 1][2 * t + 1] = blk[0][1].neg();
            }
        }
        for i in 0..n {
            for j in 0..n {
                if sym[i][j] != sym[j][i] {
                    return Err(Error::InvariantViolation(
                        "transported Gram is not symmetric".into(),
                    ));
                }
            }
        }
        // q(v) = (1/2) sym(v, v)
        let mut gram_q = sym;
        for row in gram_q.iter_mut() {
            for e in row.iter_mut() {
                *e = e.halve()?;
            }
        }
        let entries = diagonalize_symmetric(&field, &gram_q)?;
        QuadForm::diagonal(field, entries)
    }
}

fn half_identity(alg: &InvAlgebra, r: usize) -> Result<AlgMat> {
    let half = alg.field().from_int(2).inv()?;
    alg.mat_scalar_mul(&half, &alg.mat_identity(r))
}

/// l + sigma(l) = 1 for sigma = ad_h: sigma(l) = G^{-1} theta(l)^T G.
fn verify_semitrace(h: &HermForm, l: &AlgMat) -> Result<()> {
    let alg = h.algebra();
    let r = h.rank();
    if l.len() != r || l.iter().any(|row| row.len() != r) {
        return Err(Error::DimensionMismatch);
    }
    let ginv = alg.mat_inv(h.gram())?.ok_or(Error::Degenerate)?;
    let sigma_l = alg.mat_mul(
        &ginv,
        &alg.mat_mul(&alg.mat_invol_transpose(l)?, h.gram())?,
    )?;
    let sum = alg.mat_add(l, &sigma_l)?;
    if !alg.mat_eq(&sum, &alg.mat_identity(r)) {
        return Err(Error::InvariantViolation(
            "semi-trace condition l + sigma(l) = 1 fails".into(),
        ));
    }
    Ok(())
}

/// A pure quaternion u with u^2 = 1 in a split quaternion algebra: a zero of
/// a x^2 + b y^2 - a b z^2 = w^2 with w != 0, scaled by w.
fn pure_square_one(alg: &InvAlgebra) -> Result<AlgElem> {
    let field = alg.field().clone();
    let (a, b) = match alg.kind() {
        AlgKind::Quaternion { a, b } => (a.clone(), b.clone()),
        _ => return Err(Error::UnsupportedAlgebra),
    };
    if field.is_rational() {
        let to_i = |v: i64| field.from_int(v);
        for h in 1..=128i64 {
            for x in -h..=h {
                for y in -h..=h {
                    for z in -h..=h {
                        if x.abs().max(y.abs()).max(z.abs()) < h {
                            continue; // already scanned at smaller height
                        }
                        let val = a
                            .mul(&to_i(x * x))?
                            .add(&b.mul(&to_i(y * y))?)?
                            .sub(&a.mul(&b)?.mul(&to_i(z * z))?)?;
                        if val.is_zero() {
                            continue;
                        }
                        if let Some(w) = rational_sqrt(&val) {
                            let w_inv = w.inv()?;
                            return alg.from_coords(&[
                                field.zero(),
                                to_i(x).mul(&w_inv)?,
                                to_i(y).mul(&w_inv)?,
                                to_i(z).mul(&w_inv)?,
                            ]);
                        }
                    }
                }
            }
        }
        Err(Error::InvariantViolation(
            "no small splitting element found".into(),
        ))
    } else {
        // finite field, odd characteristic: a x^2 + b y^2 = 1 is solvable
        let ctx = field.fq().unwrap().clone();
        for xi in 0..ctx.order() {
            let x = crate::scalars::BaseField::Finite(ctx.clone())
                .from_coeffs(&ctx.from_index(xi).iter().map(|&c| c as i64).collect::<Vec<_>>())?;
            let rhs = field.one().sub(&a.mul(&x)?.mul(&x)?)?.div(&b)?;
            if let Some(yv) = ctx.sqrt(rhs.as_fq().unwrap()) {
                let y = field.from_coeffs(&yv.iter().map(|&c| c as i64).collect::<Vec<_>>())?;
                return alg.from_coords(&[field.zero(), x, y, field.zero()]);
            }
        }
        Err(Error::InvariantViolation(
            "splitting element search failed".into(),
        ))
    }
}

/// Exact square root of a nonnegative rational, when it exists.
fn rational_sqrt(v: &FieldElem) -> Option<FieldElem> {
    let r = v.as_rational()?;
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        let field = v.field().clone();
        let q = num_rational::BigRational::new(num, den);
        field.from_rational(q).ok()
    } else {
        None
    }
}

/// Reduced norm of a matrix over a quaternion algebra (a, b), through the
/// embedding into 2x2 matrices over F[T]/(T^2 - a).
pub(crate) fn quaternion_matrix_reduced_norm(
    alg: &InvAlgebra,
    gram: &AlgMat,
) -> Result<FieldElem> {
    let field = alg.field().clone();
    let (a, b) = match alg.kind() {
        AlgKind::Quaternion { a, b } => (a.clone(), b.clone()),
        _ => return Err(Error::UnsupportedAlgebra),
    };
    let r = gram.len();
    let nrd = if let Some(s) = field_sqrt(&a) {
        // split etale: evaluate T at +s and -s, two determinants over F
        let mut dets = Vec::new();
        for sign in [1i64, -1] {
            let sv = s.mul(&field.from_int(sign))?;
            let mut m = vec![vec![field.zero(); 2 * r]; 2 * r];
            for i in 0..r {
                for j in 0..r {
                    let (t, x, y, z) = match &gram[i][j] {
                        AlgElem::Quat { t, x, y, z } => (t, x, y, z),
                        _ => return Err(Error::AlgebraMismatch),
                    };
                    m[2 * i][2 * j] = t.add(&x.mul(&sv)?)?;
                    m[2 * i][2 * j + 1] = y.add(&z.mul(&sv)?)?;
                    m[2 * i + 1][2 * j] = b.mul(&y.sub(&z.mul(&sv)?)?)?;
                    m[2 * i + 1][2 * j + 1] = t.sub(&x.mul(&sv)?)?;
                }
            }
            dets.push(det_field(&field, &m)?);
        }
        if dets[0] != dets[1] {
            return Err(Error::InvariantViolation(
                "reduced norm projections disagree".into(),
            ));
        }
        dets[0].clone()
    } else {
        // F[T]/(T^2 - a) is a field: Gaussian elimination there
        let etale = InvAlgebra::quad_etale(a.clone())?;
        let mk = |x: &FieldElem, y: &FieldElem| -> Result<AlgElem> {
            etale.from_coords(&[x.clone(), y.clone()])
        };
        let mut m = etale.mat_zero(2 * r, 2 * r);
        for i in 0..r {
            for j in 0..r {
                let (t, x, y, z) = match &gram[i][j] {
                    AlgElem::Quat { t, x, y, z } => (t, x, y, z),
                    _ => return Err(Error::AlgebraMismatch),
                };
                m[2 * i][2 * j] = mk(t, x)?;
                m[2 * i][2 * j + 1] = mk(y, z)?;
                m[2 * i + 1][2 * j] = mk(&b.mul(y)?, &b.mul(&z.neg())?)?;
                m[2 * i + 1][2 * j + 1] = mk(t, &x.neg())?;
            }
        }
        let det = etale_field_det(&etale, m)?;
        etale.base_part(&det).ok_or_else(|| {
            Error::InvariantViolation("reduced norm did not land in the base field".into())
        })?
    };
    // Nrd^2 equals the determinant of the regular representation
    debug_assert_eq!(
        nrd.mul(&nrd).ok(),
        alg.regular_det(gram).ok(),
        "reduced norm square check"
    );
    Ok(nrd)
}

/// Square root in the base field, when one exists.
fn field_sqrt(a: &FieldElem) -> Option<FieldElem> {
    match a.field() {
        BaseField::Rationals => rational_sqrt(a),
        BaseField::Finite(ctx) => {
            if ctx.characteristic() == 2 {
                None
            } else {
                ctx.sqrt(a.as_fq().unwrap()).map(|v| {
                    a.field()
                        .from_coeffs(&v.iter().map(|&c| c as i64).collect::<Vec<_>>())
                        .unwrap()
                })
            }
        }
    }
}

/// Determinant over a quadratic etale algebra that is a field.
fn etale_field_det(alg: &InvAlgebra, mut m: AlgMat) -> Result<AlgElem> {
    let n = m.len();
    let mut det = alg.one();
    for c in 0..n {
        let pivot = (c..n).find(|&i| !alg.is_zero_elem(&m[i][c]));
        let Some(p) = pivot else {
            return Ok(alg.zero());
        };
        if p != c {
            m.swap(c, p);
            det = alg.neg(&det)?;
        }
        det = alg.mul(&det, &m[c][c])?;
        let inv = alg.inv(&m[c][c])?;
        for i in (c + 1)..n {
            if alg.is_zero_elem(&m[i][c]) {
                continue;
            }
            let f = alg.mul(&m[i][c], &inv)?;
            for j in c..n {
                let t = alg.mul(&f, &m[c][j])?;
                m[i][j] = alg.sub(&m[i][j], &t)?;
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::Payload;
    use num_bigint::BigInt;

    fn q() -> BaseField {
        BaseField::rationals()
    }

    fn quat(a: i64, b: i64) -> InvAlgebra {
        InvAlgebra::quaternion(q().from_int(a), q().from_int(b)).unwrap()
    }

    fn split_pair(entries: &[i64]) -> HermPair {
        let alg = InvAlgebra::split(q());
        let elems: Vec<FieldElem> = entries.iter().map(|&n| q().from_int(n)).collect();
        let h = HermForm::diagonal(&alg, 1, &elems).unwrap();
        HermPair::new(h, None).unwrap()
    }

    fn skew_pair(alg: &InvAlgebra, gram: AlgMat) -> HermPair {
        let h = HermForm::new(alg.clone(), -1, gram).unwrap();
        HermPair::new(h, None).unwrap()
    }

    fn pure(alg: &InvAlgebra, x: i64, y: i64, z: i64) -> AlgElem {
        alg.from_coords(&[
            q().zero(),
            q().from_int(x),
            q().from_int(y),
            q().from_int(z),
        ])
        .unwrap()
    }

    #[test]
    fn split_pair_associated_form_is_half_the_bilinear_form() {
        let p = split_pair(&[2, -3, 5, 1]);
        let form = p.associated_quadratic_form().unwrap();
        // q(v) = (1/2) b(v, v) exactly
        let half = QuadForm::diagonal_ints(&q(), &[2, -3, 5, 1])
            .unwrap()
            .scale(&q().from_ratio(1, 2).unwrap())
            .unwrap();
        assert!(form.equivalent_to(&half).unwrap());
        // the e_n chain does not see the scaling: it matches the diagonal
        let diag = QuadForm::diagonal_ints(&q(), &[2, -3, 5, 1]).unwrap();
        assert_eq!(p.e_n(1).unwrap(), diag.e_n(1).unwrap());
    }

    #[test]
    fn split_pair_rank_gate() {
        let p = split_pair(&[1, 2, 3]);
        assert!(matches!(p.e_n(1), Err(Error::OddRankTimesIndex)));
    }

    #[test]
    fn char2_pair_semitrace_carries_information() {
        let f2 = BaseField::finite(2, 1, None).unwrap();
        let alg = InvAlgebra::split(f2.clone());
        let e = |n: i64| alg.from_base(f2.from_int(n));
        let gram = vec![vec![e(0), e(1)], vec![e(1), e(0)]];
        let h = HermForm::new(alg.clone(), 1, gram.clone()).unwrap();
        // l = [[1,0],[0,0]]: associated form is xy, Arf 0
        let l0 = vec![vec![e(1), e(0)], vec![e(0), e(0)]];
        let p0 = HermPair::new(h.clone(), Some(l0)).unwrap();
        let q0 = p0.associated_quadratic_form().unwrap();
        assert!(q0.is_hyperbolic().unwrap());
        assert!(p0.e_n(1).unwrap().is_zero());
        // l = [[1,1],[1,0]] also satisfies the semi-trace law but gives
        // x^2 + xy + y^2, Arf 1
        let l1 = vec![vec![e(1), e(1)], vec![e(1), e(0)]];
        let p1 = HermPair::new(h.clone(), Some(l1)).unwrap();
        assert_eq!(*p1.e_n(1).unwrap().payload(), Payload::Bit(true));
        assert!(!p1.is_isotropic().unwrap());
        assert!(p0.is_isotropic().unwrap());
        // an invalid semi-trace is rejected
        let bad = vec![vec![e(0), e(1)], vec![e(0), e(0)]];
        assert!(HermPair::new(h, Some(bad)).is_err());
    }

    #[test]
    fn char2_alternating_is_required() {
        let f2 = BaseField::finite(2, 1, None).unwrap();
        let alg = InvAlgebra::split(f2.clone());
        let e = |n: i64| alg.from_base(f2.from_int(n));
        let gram = vec![vec![e(1), e(1)], vec![e(1), e(0)]];
        let h = HermForm::new(alg.clone(), 1, gram).unwrap();
        assert!(matches!(
            HermPair::new(h, None),
            Err(Error::NotAlternatingChar2)
        ));
    }

    #[test]
    fn pair_sum_is_blockwise() {
        let p1 = split_pair(&[1, -1]);
        let p2 = split_pair(&[2, 3]);
        let sum = p1.orthogonal_sum(&p2).unwrap();
        assert_eq!(sum.rank().unwrap(), 4);
        let fs = sum.associated_quadratic_form().unwrap();
        let expected = QuadForm::diagonal_ints(&q(), &[1, -1, 2, 3])
            .unwrap()
            .scale(&q().from_ratio(1, 2).unwrap())
            .unwrap();
        assert!(fs.equivalent_to(&expected).unwrap());
        // e_1 adds
        let lhs = sum.e_n(1).unwrap();
        let rhs = p1.e_n(1).unwrap().add(&p2.e_n(1).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pair_sums_commute_and_associate_on_classes() {
        let a = split_pair(&[1, -2]);
        let b = split_pair(&[3, 5]);
        let c = split_pair(&[-1, 7]);
        let ab = a.orthogonal_sum(&b).unwrap();
        let ba = b.orthogonal_sum(&a).unwrap();
        assert!(ab
            .associated_quadratic_form()
            .unwrap()
            .equivalent_to(&ba.associated_quadratic_form().unwrap())
            .unwrap());
        let ab_c = ab.orthogonal_sum(&c).unwrap();
        let a_bc = a.orthogonal_sum(&b.orthogonal_sum(&c).unwrap()).unwrap();
        assert!(ab_c
            .associated_quadratic_form()
            .unwrap()
            .equivalent_to(&a_bc.associated_quadratic_form().unwrap())
            .unwrap());
    }

    #[test]
    fn quaternionic_e1_known_values() {
        let alg = quat(-1, -1);
        // <i>: Nrd(i) = 1, class (-1)
        let p = skew_pair(&alg, vec![vec![pure(&alg, 1, 0, 0)]]);
        let e1 = p.quaternionic_e1().unwrap();
        assert_eq!(*e1.payload(), Payload::SquareClass(BigInt::from(-1)));
        // <j + ij>: Nrd = 2, class (-2)
        let p = skew_pair(&alg, vec![vec![pure(&alg, 0, 1, 1)]]);
        let e1 = p.quaternionic_e1().unwrap();
        assert_eq!(*e1.payload(), Payload::SquareClass(BigInt::from(-2)));
    }

    #[test]
    fn quaternionic_e1_vanishes_on_hyperbolic_pairs() {
        let alg = quat(-1, -1);
        for gram1 in [
            vec![vec![pure(&alg, 1, 0, 0)]],
            vec![vec![pure(&alg, 0, 2, 1)]],
            vec![vec![pure(&alg, 1, 1, 1)]],
        ] {
            let p = skew_pair(&alg, gram1);
            let minus = p.negate().unwrap();
            let sum = p.orthogonal_sum(&minus).unwrap();
            assert!(sum.quaternionic_e1().unwrap().is_zero());
        }
    }

    #[test]
    fn split_specialization_cross_checks_the_nrd_formula() {
        // same skew coordinates over split symbols: the explicit splitting
        // and the reduced-norm formula must produce the same discriminant
        for (a, b) in [(1i64, 5i64), (4, 7), (2, -1), (9, -2)] {
            let alg = quat(a, b);
            assert!(alg.is_split().unwrap());
            for gram in [
                vec![vec![pure(&alg, 1, 0, 0)]],
                vec![vec![pure(&alg, 0, 1, 1)]],
                vec![
                    vec![pure(&alg, 1, 0, 0), alg.zero()],
                    vec![alg.zero(), pure(&alg, 0, 1, 0)],
                ],
            ] {
                // skip degenerate specializations
                let h = match HermForm::new(alg.clone(), -1, gram) {
                    Ok(h) => h,
                    Err(_) => continue,
                };
                let p = HermPair::new(h, None).unwrap();
                // e_n with n = 1 runs both routes and asserts agreement
                let e1 = p.e_n(1).unwrap();
                assert!(matches!(*e1.payload(), Payload::SquareClass(_)));
                assert!(matches!(p.quaternionic_e1(), Err(Error::SplitAlgebra)));
            }
        }
    }

    #[test]
    fn split_quaternion_pairs_over_finite_fields() {
        let f7 = BaseField::finite(7, 1, None).unwrap();
        let alg = InvAlgebra::quaternion(f7.from_int(3), f7.from_int(5)).unwrap();
        let i = alg
            .from_coords(&[f7.zero(), f7.one(), f7.zero(), f7.zero()])
            .unwrap();
        let h = HermForm::new(alg.clone(), -1, vec![vec![i]]).unwrap();
        let p = HermPair::new(h, None).unwrap();
        // rank of the pair over the split model is 2, so e_1 is defined
        assert_eq!(p.rank().unwrap(), 2);
        let e1 = p.e_n(1).unwrap();
        assert!(matches!(*e1.payload(), Payload::Bit(_)));
        // e_2 over a finite field always vanishes once defined
        if e1.is_zero() {
            assert!(p.e_n(2).unwrap().is_zero());
        }
    }

    #[test]
    fn finite_field_pair_transport_matches_oracle() {
        use crate::oracle;
        // sweep pure diagonal skew pairs over several odd fields: the
        // reduced-norm discriminant is asserted against the explicit
        // splitting inside e_n, and isotropy against the exhaustive scan
        for (pch, a0, b0) in [(5u64, 2i64, 3i64), (7, 3, 5), (13, 2, 6)] {
            let field = BaseField::finite(pch, 1, None).unwrap();
            let alg = InvAlgebra::quaternion(field.from_int(a0), field.from_int(b0)).unwrap();
            let mut checked = 0;
            for xi in 1..pch.min(4) {
                for yi in 0..pch.min(4) {
                    let u = alg
                        .from_coords(&[
                            field.zero(),
                            field.from_int(xi as i64),
                            field.from_int(yi as i64),
                            field.one(),
                        ])
                        .unwrap();
                    let h = match HermForm::new(alg.clone(), -1, vec![vec![u]]) {
                        Ok(h) => h,
                        Err(_) => continue,
                    };
                    let p = HermPair::new(h, None).unwrap();
                    let _e1 = p.e_n(1).unwrap();
                    let via_class = p.is_isotropic().unwrap();
                    let via_scan =
                        oracle::exhaustive_pair_isotropy(&p, 1 << 22).unwrap();
                    assert_eq!(via_class, via_scan);
                    checked += 1;
                }
            }
            assert!(checked > 0);
        }
    }

    #[test]
    fn hyperbolic_pairs_are_detected() {
        let p = split_pair(&[1, -1]);
        assert!(p.is_hyperbolic().unwrap());
        let p = split_pair(&[1, 1]);
        assert!(!p.is_hyperbolic().unwrap());
        let sum = p.orthogonal_sum(&p.negate().unwrap()).unwrap();
        assert!(sum.is_hyperbolic().unwrap());
        // non-split quaternion pairs are out of range for the decider
        let alg = quat(-1, -1);
        let pq = skew_pair(&alg, vec![vec![pure(&alg, 1, 0, 0)]]);
        assert!(pq.is_hyperbolic().is_err());
    }

    #[test]
    fn etale_algebras_do_not_carry_pairs() {
        let alg = InvAlgebra::quad_etale(q().from_int(-1)).unwrap();
        let h = HermForm::diagonal(&alg, 1, &[q().one()]).unwrap();
        assert!(matches!(
            HermPair::new(h, None),
            Err(Error::UnsupportedAlgebra)
        ));
    }
}
