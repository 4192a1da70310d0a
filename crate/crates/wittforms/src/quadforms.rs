//! Quadratic forms over the supported fields with the full invariant chain
//! e_1, e_2, e_3, ..., Witt decomposition, and isotropy/hyperbolicity
//! deciders.
//!
//! In characteristic != 2 a form is a diagonal Gram; over finite fields of
//! characteristic 2 it is an upper-triangular coefficient matrix with its
//! derived polar form. Over Q the invariants are the signed discriminant,
//! the Clifford/Witt ramification set and the signature; over F_q they are
//! the discriminant or Arf bit.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::cohomology::CohClass;
use crate::error::{Error, Result};
use crate::scalars::{
    self, artin_schreier_class, candidate_places, hilbert_symbol_rat, is_local_square,
    square_class, squarefree_signed, squarefree_signed_int, BaseField, FieldElem, Place,
    SquareClass,
};

/// A nondegenerate quadratic form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadForm {
    /// Diagonal form in characteristic != 2; all entries nonzero.
    Diagonal { field: BaseField, entries: Vec<FieldElem> },
    /// Characteristic 2 (finite fields): q(x) = x^T C x with C upper
    /// triangular.
    Char2 { field: BaseField, upper: Vec<Vec<FieldElem>> },
}

impl QuadForm {
    pub fn diagonal(field: BaseField, entries: Vec<FieldElem>) -> Result<QuadForm> {
        if field.is_char2() {
            return Err(Error::WrongCharacteristic);
        }
        for e in &entries {
            if e.field() != &field {
                return Err(Error::FieldMismatch);
            }
            if e.is_zero() {
                return Err(Error::Degenerate);
            }
        }
        Ok(QuadForm::Diagonal { field, entries })
    }

    pub fn diagonal_ints(field: &BaseField, entries: &[i64]) -> Result<QuadForm> {
        QuadForm::diagonal(
            field.clone(),
            entries.iter().map(|&n| field.from_int(n)).collect(),
        )
    }

    /// Characteristic-2 form from any square coefficient matrix; coefficients
    /// below the diagonal are folded onto the upper triangle.
    pub fn char2(field: BaseField, coeffs: Vec<Vec<FieldElem>>) -> Result<QuadForm> {
        if !field.is_char2() {
            return Err(Error::WrongCharacteristic);
        }
        let d = coeffs.len();
        for row in &coeffs {
            if row.len() != d {
                return Err(Error::DimensionMismatch);
            }
            for e in row {
                if e.field() != &field {
                    return Err(Error::FieldMismatch);
                }
            }
        }
        let mut upper = vec![vec![field.zero(); d]; d];
        for i in 0..d {
            for j in 0..d {
                match i.cmp(&j) {
                    std::cmp::Ordering::Less => {
                        upper[i][j] = coeffs[i][j].add(&coeffs[j][i])?
                    }
                    std::cmp::Ordering::Equal => upper[i][j] = coeffs[i][j].clone(),
                    std::cmp::Ordering::Greater => {}
                }
            }
        }
        let form = QuadForm::Char2 { field, upper };
        form.check_char2_nondegenerate()?;
        Ok(form)
    }

    /// Polar radical condition: rad(b_q) = 0, or in odd dimension a line on
    /// which q does not vanish.
    fn check_char2_nondegenerate(&self) -> Result<()> {
        let (field, _upper) = match self {
            QuadForm::Char2 { field, upper } => (field, upper),
            _ => unreachable!(),
        };
        let d = self.dim();
        if d == 0 {
            return Ok(());
        }
        let b = self.polar_matrix();
        let rad = kernel_basis(field, &b);
        if d % 2 == 0 {
            if !rad.is_empty() {
                return Err(Error::Degenerate);
            }
        } else {
            if rad.len() != 1 {
                return Err(Error::Degenerate);
            }
            if self.evaluate(&rad[0])?.is_zero() {
                return Err(Error::Degenerate);
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &BaseField {
        match self {
            QuadForm::Diagonal { field, .. } => field,
            QuadForm::Char2 { field, .. } => field,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            QuadForm::Diagonal { entries, .. } => entries.len(),
            QuadForm::Char2 { upper, .. } => upper.len(),
        }
    }

    pub fn diagonal_entries(&self) -> Option<&[FieldElem]> {
        match self {
            QuadForm::Diagonal { entries, .. } => Some(entries),
            QuadForm::Char2 { .. } => None,
        }
    }

    pub fn upper_matrix(&self) -> Option<&Vec<Vec<FieldElem>>> {
        match self {
            QuadForm::Char2 { upper, .. } => Some(upper),
            QuadForm::Diagonal { .. } => None,
        }
    }

    pub fn evaluate(&self, x: &[FieldElem]) -> Result<FieldElem> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch);
        }
        let field = self.field();
        let mut acc = field.zero();
        match self {
            QuadForm::Diagonal { entries, .. } => {
                for (a, xi) in entries.iter().zip(x) {
                    acc = acc.add(&a.mul(xi)?.mul(xi)?)?;
                }
            }
            QuadForm::Char2 { upper, .. } => {
                for (i, row) in upper.iter().enumerate() {
                    for (j, c) in row.iter().enumerate().skip(i) {
                        acc = acc.add(&c.mul(&x[i])?.mul(&x[j])?)?;
                    }
                }
            }
        }
        Ok(acc)
    }

    /// Gram matrix of the polar form b_q(u, v) = q(u+v) - q(u) - q(v).
    pub fn polar_matrix(&self) -> Vec<Vec<FieldElem>> {
        let field = self.field();
        let d = self.dim();
        let mut b = vec![vec![field.zero(); d]; d];
        match self {
            QuadForm::Diagonal { entries, .. } => {
                for (i, a) in entries.iter().enumerate() {
                    b[i][i] = a.double();
                }
            }
            QuadForm::Char2 { upper, .. } => {
                for i in 0..d {
                    for j in (i + 1)..d {
                        b[i][j] = upper[i][j].clone();
                        b[j][i] = upper[i][j].clone();
                    }
                }
            }
        }
        b
    }

    pub fn orthogonal_sum(&self, other: &QuadForm) -> Result<QuadForm> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        match (self, other) {
            (
                QuadForm::Diagonal { field, entries: a },
                QuadForm::Diagonal { entries: b, .. },
            ) => Ok(QuadForm::Diagonal {
                field: field.clone(),
                entries: a.iter().chain(b).cloned().collect(),
            }),
            (
                QuadForm::Char2 { field, upper: a },
                QuadForm::Char2 { upper: b, .. },
            ) => {
                let da = a.len();
                let db = b.len();
                let mut upper = vec![vec![field.zero(); da + db]; da + db];
                for i in 0..da {
                    for j in 0..da {
                        upper[i][j] = a[i][j].clone();
                    }
                }
                for i in 0..db {
                    for j in 0..db {
                        upper[da + i][da + j] = b[i][j].clone();
                    }
                }
                Ok(QuadForm::Char2 { field: field.clone(), upper })
            }
            _ => Err(Error::FieldMismatch),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Result<QuadForm> {
        if c.is_zero() {
            return Err(Error::ZeroElement);
        }
        if c.field() != self.field() {
            return Err(Error::FieldMismatch);
        }
        match self {
            QuadForm::Diagonal { field, entries } => Ok(QuadForm::Diagonal {
                field: field.clone(),
                entries: entries
                    .iter()
                    .map(|a| a.mul(c))
                    .collect::<Result<Vec<_>>>()?,
            }),
            QuadForm::Char2 { field, upper } => Ok(QuadForm::Char2 {
                field: field.clone(),
                upper: upper
                    .iter()
                    .map(|row| row.iter().map(|a| a.mul(c)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?,
            }),
        }
    }

    pub fn negate(&self) -> QuadForm {
        let minus_one = self.field().from_int(-1);
        self.scale(&minus_one).unwrap()
    }

    /// The hyperbolic plane over the given field.
    pub fn hyperbolic_plane(field: &BaseField) -> QuadForm {
        if field.is_char2() {
            // q(x, y) = xy
            let one = field.one();
            let zero = field.zero();
            QuadForm::Char2 {
                field: field.clone(),
                upper: vec![vec![zero.clone(), one], vec![zero.clone(), zero]],
            }
        } else {
            QuadForm::Diagonal {
                field: field.clone(),
                entries: vec![field.one(), field.from_int(-1)],
            }
        }
    }

    pub fn hyperbolic_of_dim(field: &BaseField, dim: usize) -> Result<QuadForm> {
        if dim % 2 != 0 {
            return Err(Error::OddDimension);
        }
        let plane = QuadForm::hyperbolic_plane(field);
        let mut acc = plane.clone();
        if dim == 0 {
            return empty_form(field);
        }
        for _ in 1..(dim / 2) {
            acc = acc.orthogonal_sum(&plane)?;
        }
        Ok(acc)
    }

    // -- invariants over Q ---------------------------------------------------

    fn rat_entries(&self) -> Vec<BigRational> {
        match self {
            QuadForm::Diagonal { entries, .. } => entries
                .iter()
                .map(|e| e.as_rational().unwrap().clone())
                .collect(),
            QuadForm::Char2 { .. } => unreachable!("rational forms are diagonal"),
        }
    }

    pub(crate) fn relevant_places(&self) -> BTreeSet<Place> {
        let entries = self.rat_entries();
        let refs: Vec<&BigRational> = entries.iter().collect();
        candidate_places(&refs)
    }

    /// Signature over Q: (#positive entries) - (#negative entries).
    pub fn signature(&self) -> Result<i64> {
        if !self.field().is_rational() {
            return Err(Error::FieldMismatch);
        }
        let mut sig = 0i64;
        for e in self.rat_entries() {
            sig += if e.is_positive() { 1 } else { -1 };
        }
        Ok(sig)
    }

    /// Signed discriminant (-1)^{d(d-1)/2} * prod(a_i) as a squarefree integer.
    fn signed_disc_rat(&self) -> BigInt {
        let entries = self.rat_entries();
        let d = entries.len();
        let mut prod = BigRational::one();
        for e in &entries {
            prod *= e;
        }
        let sign_exp = (d * d.saturating_sub(1) / 2) % 2;
        if sign_exp == 1 {
            prod = -prod;
        }
        squarefree_signed(&prod)
    }

    /// Raw Hasse product s_v(q) = prod_{i<j} (a_i, a_j)_v.
    fn hasse_at(&self, v: &Place) -> Result<i8> {
        let entries = self.rat_entries();
        let mut s: i8 = 1;
        for i in 0..entries.len() {
            for j in (i + 1)..entries.len() {
                s *= hilbert_symbol_rat(&entries[i], &entries[j], v)?;
            }
        }
        Ok(s)
    }

    /// Witt-class-stable invariant at v:
    /// s_v(q) * (det, -1)_v^{floor(d/2)} * (-1,-1)_v^{m(m+1)/2}.
    fn witt_invariant_at(&self, v: &Place) -> Result<i8> {
        let entries = self.rat_entries();
        let m = entries.len() / 2;
        let mut s = self.hasse_at(v)?;
        let minus_one = BigRational::from_integer(BigInt::from(-1));
        if m % 2 == 1 {
            let mut det = BigRational::one();
            for e in &entries {
                det *= e;
            }
            s *= hilbert_symbol_rat(&det, &minus_one, v)?;
        }
        if (m * (m + 1) / 2) % 2 == 1 {
            s *= hilbert_symbol_rat(&minus_one, &minus_one, v)?;
        }
        Ok(s)
    }

    fn witt_set(&self) -> Result<BTreeSet<Place>> {
        let mut out = BTreeSet::new();
        for v in self.relevant_places() {
            if self.witt_invariant_at(&v)? == -1 {
                out.insert(v);
            }
        }
        Ok(out)
    }

    /// e_2 ramification set for forms with trivial e_1:
    /// s_v(q) * (-1,-1)_v^{m(m-1)/2}.
    fn e2_set(&self) -> Result<BTreeSet<Place>> {
        let m = self.dim() / 2;
        let minus_one = BigRational::from_integer(BigInt::from(-1));
        let mut out = BTreeSet::new();
        for v in self.relevant_places() {
            let mut s = self.hasse_at(&v)?;
            if (m * (m - 1) / 2) % 2 == 1 {
                s *= hilbert_symbol_rat(&minus_one, &minus_one, &v)?;
            }
            if s == -1 {
                out.insert(v);
            }
        }
        Ok(out)
    }

    /// Anisotropic dimension of the completion at v.
    fn local_aniso_dim(&self, v: &Place) -> Result<u32> {
        let d = self.dim();
        if let Place::Infinity = v {
            return Ok(self.signature()?.unsigned_abs() as u32);
        }
        let delta = BigRational::from_integer(self.signed_disc_rat());
        if d % 2 == 0 {
            if is_local_square(&delta, v) {
                Ok(if self.witt_invariant_at(v)? == 1 { 0 } else { 4 })
            } else {
                Ok(2)
            }
        } else {
            // q is Witt equivalent to <delta> plus an even-dimensional class
            let extended = self.orthogonal_sum(&QuadForm::diagonal(
                self.field().clone(),
                vec![self
                    .field()
                    .from_rational(-delta.clone())
                    .expect("rational")],
            )?)?;
            Ok(if extended.witt_invariant_at(v)? == 1 { 1 } else { 3 })
        }
    }

    fn aniso_dim_q(&self) -> Result<u32> {
        let mut places = self.relevant_places();
        places.insert(Place::Infinity);
        let mut best = 0u32;
        for v in places {
            best = best.max(self.local_aniso_dim(&v)?);
        }
        Ok(best)
    }

    // -- invariants over finite fields ----------------------------------------

    /// Discriminant square-class bit over odd finite fields (true = nonsquare).
    fn disc_bit_fq(&self) -> Result<bool> {
        let entries = match self {
            QuadForm::Diagonal { entries, .. } => entries,
            _ => unreachable!(),
        };
        let d = entries.len();
        let mut prod = self.field().one();
        for e in entries {
            prod = prod.mul(e)?;
        }
        if (d * d.saturating_sub(1) / 2) % 2 == 1 {
            prod = prod.neg();
        }
        match square_class(&prod)? {
            SquareClass::FiniteBit(b) => Ok(b),
            _ => unreachable!(),
        }
    }

    /// Arf invariant over even finite fields (even dimension): reduce the
    /// polar form to hyperbolic pairs and sum q(u_i) q(v_i).
    fn arf_element(&self) -> Result<FieldElem> {
        let field = self.field().clone();
        let d = self.dim();
        if d % 2 != 0 {
            return Err(Error::OddDimension);
        }
        let b = self.polar_matrix();
        let pair_b = |x: &[FieldElem], y: &[FieldElem]| -> Result<FieldElem> {
            let mut acc = field.zero();
            for i in 0..d {
                for j in 0..d {
                    acc = acc.add(&x[i].mul(&b[i][j])?.mul(&y[j])?)?;
                }
            }
            Ok(acc)
        };
        let mut basis: Vec<Vec<FieldElem>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        let mut arf = field.zero();
        while !basis.is_empty() {
            let u = basis[0].clone();
            // lowest-index partner with nonzero polar pairing
            let j = (1..basis.len())
                .find(|&j| !pair_b(&u, &basis[j]).unwrap().is_zero())
                .ok_or(Error::Degenerate)?;
            let scale = pair_b(&u, &basis[j])?.inv()?;
            let w: Vec<FieldElem> = basis[j]
                .iter()
                .map(|c| c.mul(&scale))
                .collect::<Result<Vec<_>>>()?;
            arf = arf.add(&self.evaluate(&u)?.mul(&self.evaluate(&w)?)?)?;
            let mut next: Vec<Vec<FieldElem>> = Vec::new();
            for (t, vvec) in basis.iter().enumerate() {
                if t == 0 || t == j {
                    continue;
                }
                // v' = v + u * b(w,v) + w * b(u,v)  (b(u,w) = 1)
                let cu = pair_b(&w, vvec)?;
                let cw = pair_b(&u, vvec)?;
                let mut vnew = Vec::with_capacity(d);
                for i in 0..d {
                    let term = vvec[i]
                        .add(&u[i].mul(&cu)?)?
                        .add(&w[i].mul(&cw)?)?;
                    vnew.push(term);
                }
                next.push(vnew);
            }
            basis = next;
        }
        Ok(arf)
    }

    fn arf_bit(&self) -> Result<bool> {
        artin_schreier_class(&self.arf_element()?)
    }

    // -- the invariant chain ---------------------------------------------------

    /// The invariant e_n. Requires an even-dimensional nondegenerate form;
    /// for n >= 2, e_{n-1} must vanish.
    pub fn e_n(&self, n: u32) -> Result<CohClass> {
        if n == 0 {
            return Err(Error::UnsupportedDegreeCombination);
        }
        if self.dim() % 2 != 0 {
            return Err(Error::OddDimension);
        }
        if n >= 2 && !self.e_n(n - 1)?.is_zero() {
            return Err(Error::PreviousInvariantNonzero(n));
        }
        let field = self.field().clone();
        match self {
            QuadForm::Diagonal { .. } if field.is_rational() => match n {
                1 => Ok(CohClass::from_square_class(
                    field,
                    SquareClass::Rational(self.signed_disc_rat()),
                )),
                2 => CohClass::from_places(self.e2_set()?),
                _ => {
                    let sig = self.signature()?;
                    debug_assert_eq!(sig % (1 << n), 0, "precondition chain");
                    Ok(CohClass::from_real_bit(n, (sig >> n) % 2 != 0))
                }
            },
            QuadForm::Diagonal { .. } => {
                if n == 1 {
                    Ok(CohClass::from_square_class(
                        field,
                        SquareClass::FiniteBit(self.disc_bit_fq()?),
                    ))
                } else {
                    Ok(CohClass::zero(field, n))
                }
            }
            QuadForm::Char2 { .. } => {
                if n == 1 {
                    Ok(CohClass::from_arf_bit(field, self.arf_bit()?))
                } else {
                    Ok(CohClass::zero(field, n))
                }
            }
        }
    }

    // -- isotropy and Witt decomposition ---------------------------------------

    pub fn is_isotropic(&self) -> Result<bool> {
        let d = self.dim();
        if d == 0 {
            return Ok(false);
        }
        match self {
            QuadForm::Diagonal { field, entries } if field.is_rational() => {
                match d {
                    1 => Ok(false),
                    2 => {
                        let prod = entries[0].mul(&entries[1])?.neg();
                        Ok(square_class(&prod)?.is_trivial())
                    }
                    3 | 4 => {
                        let mut places = self.relevant_places();
                        places.insert(Place::Infinity);
                        for v in places {
                            if self.local_aniso_dim(&v)? as usize == d {
                                return Ok(false);
                            }
                        }
                        Ok(true)
                    }
                    _ => {
                        let sig = self.signature()?;
                        Ok(sig.unsigned_abs() as usize != d)
                    }
                }
            }
            QuadForm::Diagonal { entries, .. } => match d {
                1 => Ok(false),
                2 => {
                    let prod = entries[0].mul(&entries[1])?.neg();
                    Ok(square_class(&prod)?.is_trivial())
                }
                _ => Ok(true),
            },
            QuadForm::Char2 { .. } => match d {
                1 => Ok(false),
                2 => Ok(!self.arf_bit()?),
                _ => Ok(true),
            },
        }
    }

    /// Canonical Witt-class data without an explicit representative.
    fn class_shallow(&self) -> Result<WittClassQ> {
        let d = self.dim() as u32;
        let field = self.field().clone();
        match self {
            QuadForm::Diagonal { .. } if field.is_rational() => {
                let aniso = self.aniso_dim_q()?;
                Ok(WittClassQ {
                    field,
                    dim_odd: d % 2 == 1,
                    data: WittData::Q {
                        delta: self.signed_disc_rat(),
                        witt_set: self.witt_set()?,
                        signature: self.signature()?,
                    },
                    aniso_dim: aniso,
                    representative: None,
                })
            }
            QuadForm::Diagonal { .. } => {
                let bit = self.disc_bit_fq()?;
                let aniso = if d % 2 == 1 {
                    1
                } else if bit {
                    2
                } else {
                    0
                };
                Ok(WittClassQ {
                    field,
                    dim_odd: d % 2 == 1,
                    data: WittData::FqOdd { disc_nonsquare: bit },
                    aniso_dim: aniso,
                    representative: None,
                })
            }
            QuadForm::Char2 { .. } => {
                if d % 2 == 1 {
                    return Err(Error::OddDimension);
                }
                let arf = self.arf_bit()?;
                let aniso = if arf { 2 } else { 0 };
                Ok(WittClassQ {
                    field,
                    dim_odd: false,
                    data: WittData::FqEven { arf: Some(arf) },
                    aniso_dim: aniso,
                    representative: None,
                })
            }
        }
    }

    /// Witt index and the canonical anisotropic class data, with an explicit
    /// anisotropic representative whenever its dimension is at most 4.
    pub fn witt_decompose(&self) -> Result<(u32, WittClassQ)> {
        let d = self.dim() as u32;
        let mut class = self.class_shallow()?;
        let aniso = class.aniso_dim;
        if aniso <= 4 {
            class.representative = Some(class.build_representative(self)?);
        }
        Ok(((d - aniso) / 2, class))
    }

    /// Hyperbolicity, computed through the Witt index and through the e_n
    /// chain; the two routes are asserted to agree.
    pub fn is_hyperbolic(&self) -> Result<bool> {
        let d = self.dim();
        if d % 2 != 0 {
            return Ok(false);
        }
        if d == 0 {
            return Ok(true);
        }
        let (w, _) = self.witt_decompose()?;
        let via_index = w as usize == d / 2;
        let via_chain = self.e_chain_vanishes()?;
        debug_assert_eq!(via_index, via_chain, "hyperbolicity routes disagree");
        if via_index != via_chain {
            return Err(Error::InvariantViolation(
                "hyperbolicity routes disagree".into(),
            ));
        }
        Ok(via_index)
    }

    /// Whether e_n(q) = 0 for n = 1, ..., max(3, ceil(log2 dim) + 1).
    pub fn e_chain_vanishes(&self) -> Result<bool> {
        let d = self.dim();
        if d % 2 != 0 {
            return Err(Error::OddDimension);
        }
        let bound = e_chain_bound(d);
        for n in 1..=bound {
            if !self.e_n(n)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Isometry test: forms of equal dimension are isomorphic iff they are
    /// Witt equivalent.
    pub fn equivalent_to(&self, other: &QuadForm) -> Result<bool> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch);
        }
        match (self, other) {
            (QuadForm::Char2 { .. }, QuadForm::Char2 { .. }) if self.dim() % 2 == 1 => {
                // odd-dimensional nondegenerate forms over a perfect field of
                // characteristic 2 of equal dimension are isomorphic
                Ok(true)
            }
            _ => {
                let (_, c1) = self.witt_decompose()?;
                let (_, c2) = other.witt_decompose()?;
                Ok(c1 == c2)
            }
        }
    }
}

/// Bound through which the e_n chain determines hyperbolicity over Q.
pub fn e_chain_bound(dim: usize) -> u32 {
    let mut log = 0u32;
    while (1usize << log) < dim {
        log += 1;
    }
    (log + 1).max(3)
}

fn empty_form(field: &BaseField) -> Result<QuadForm> {
    if field.is_char2() {
        Ok(QuadForm::Char2 { field: field.clone(), upper: vec![] })
    } else {
        Ok(QuadForm::Diagonal { field: field.clone(), entries: vec![] })
    }
}

// ---------------------------------------------------------------------------
// Pfister forms
// ---------------------------------------------------------------------------

/// The quadratic n-fold Pfister form with bilinear slots `slots` and final
/// slot `last`. In characteristic != 2 the final slot c contributes the norm
/// form <1, -c>; in characteristic 2 it contributes x^2 + xy + c y^2.
pub fn pfister(slots: &[FieldElem], last: &FieldElem) -> Result<QuadForm> {
    let field = last.field().clone();
    for a in slots {
        if a.field() != &field {
            return Err(Error::FieldMismatch);
        }
        if a.is_zero() {
            return Err(Error::ZeroSlot);
        }
    }
    if field.is_char2() {
        // bilinear Pfister <1, a_1> x ... tensored with the binary norm form
        let mut scalars = vec![field.one()];
        for a in slots {
            let mut next = scalars.clone();
            for s in &scalars {
                next.push(s.mul(a)?);
            }
            scalars = next;
        }
        let mut acc = empty_form(&field)?;
        for u in scalars {
            // u * (x^2 + xy + c y^2)
            let block = QuadForm::Char2 {
                field: field.clone(),
                upper: vec![
                    vec![u.clone(), u.clone()],
                    vec![field.zero(), u.mul(last)?],
                ],
            };
            acc = acc.orthogonal_sum(&block)?;
        }
        acc.check_char2_nondegenerate()?;
        Ok(acc)
    } else {
        if last.is_zero() {
            return Err(Error::ZeroSlot);
        }
        let mut entries = vec![field.one(), last.neg()];
        for a in slots {
            let mut next = entries.clone();
            for e in &entries {
                next.push(e.mul(&a.neg())?);
            }
            entries = next;
        }
        QuadForm::diagonal(field, entries)
    }
}

// ---------------------------------------------------------------------------
// Witt classes
// ---------------------------------------------------------------------------

/// Canonical Witt-class data; two classes are equal iff the tuples agree.
/// Carries an explicit anisotropic representative when its dimension is at
/// most 4.
#[derive(Clone, Debug)]
pub struct WittClassQ {
    field: BaseField,
    dim_odd: bool,
    data: WittData,
    aniso_dim: u32,
    representative: Option<QuadForm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WittData {
    Q {
        delta: BigInt,
        witt_set: BTreeSet<Place>,
        signature: i64,
    },
    FqOdd {
        disc_nonsquare: bool,
    },
    FqEven {
        arf: Option<bool>,
    },
}

impl PartialEq for WittClassQ {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.dim_odd == other.dim_odd && self.data == other.data
    }
}
impl Eq for WittClassQ {}

impl WittClassQ {
    pub fn is_zero(&self) -> bool {
        !self.dim_odd
            && match &self.data {
                WittData::Q { delta, witt_set, signature } => {
                    delta.is_one() && witt_set.is_empty() && *signature == 0
                }
                WittData::FqOdd { disc_nonsquare } => !disc_nonsquare,
                WittData::FqEven { arf } => *arf == Some(false),
            }
    }

    pub fn aniso_dim(&self) -> u32 {
        self.aniso_dim
    }

    pub fn representative(&self) -> Option<&QuadForm> {
        self.representative.as_ref()
    }

    pub fn data(&self) -> &WittData {
        &self.data
    }

    pub fn signature(&self) -> Option<i64> {
        match &self.data {
            WittData::Q { signature, .. } => Some(*signature),
            _ => None,
        }
    }

    /// Build an explicit anisotropic representative (dimension <= 4) of this
    /// class. `carrier` is any form in the class; it anchors the residual
    /// computations in the rational case.
    fn build_representative(&self, carrier: &QuadForm) -> Result<QuadForm> {
        let field = &self.field;
        match &self.data {
            WittData::FqOdd { disc_nonsquare } => {
                let ctx = field.fq().unwrap();
                match self.aniso_dim {
                    0 => empty_form(field),
                    1 => {
                        let u = if *disc_nonsquare {
                            elem(field, ctx.a_nonsquare()?)
                        } else {
                            field.one()
                        };
                        QuadForm::diagonal(field.clone(), vec![u])
                    }
                    2 => {
                        // <1, -n> has signed disc n (nonsquare), no isotropy
                        let n = elem(field, ctx.a_nonsquare()?);
                        QuadForm::diagonal(field.clone(), vec![field.one(), n.neg()])
                    }
                    _ => unreachable!("finite fields have anisotropic dimension <= 2"),
                }
            }
            WittData::FqEven { arf } => {
                let ctx = field.fq().unwrap();
                match self.aniso_dim {
                    0 => empty_form(field),
                    2 => {
                        let c = elem(field, ctx.a_trace_one()?);
                        debug_assert_eq!(*arf, Some(true));
                        QuadForm::char2(
                            field.clone(),
                            vec![
                                vec![field.one(), field.one()],
                                vec![field.zero(), c],
                            ],
                        )
                    }
                    _ => unreachable!("even characteristic classes here are 0 or 2 dimensional"),
                }
            }
            WittData::Q { delta, .. } => {
                self.build_representative_q(delta.clone(), carrier)
            }
        }
    }

    /// Constructive search for a small anisotropic form with the given
    /// invariants; every candidate is verified exactly before returning.
    fn build_representative_q(&self, delta: BigInt, carrier: &QuadForm) -> Result<QuadForm> {
        let field = &self.field;
        let int_elem = |n: &BigInt| field.from_rational(BigRational::from_integer(n.clone()));
        match self.aniso_dim {
            0 => empty_form(field),
            1 => QuadForm::diagonal(field.clone(), vec![int_elem(&delta)?]),
            2 => {
                for a in squarefree_candidates(2000) {
                    let second = squarefree_signed_int(&(-&a * &delta));
                    let cand = QuadForm::diagonal(
                        field.clone(),
                        vec![int_elem(&a)?, int_elem(&second)?],
                    )?;
                    if self.matches(&cand)? && !cand.is_isotropic()? {
                        return Ok(cand);
                    }
                }
                Err(Error::InvariantViolation(
                    "no small binary representative found".into(),
                ))
            }
            3 | 4 => {
                for t in squarefree_candidates(500) {
                    // residual class: (this class) - <t>, carried by an
                    // explicit form
                    let residual = carrier.orthogonal_sum(&QuadForm::diagonal(
                        field.clone(),
                        vec![int_elem(&(-&t))?],
                    )?)?;
                    let rcls = residual.class_shallow()?;
                    if rcls.aniso_dim != self.aniso_dim - 1 {
                        continue;
                    }
                    let rep_rest = rcls.build_representative(&residual)?;
                    let cand = QuadForm::diagonal(field.clone(), vec![int_elem(&t)?])?
                        .orthogonal_sum(&rep_rest)?;
                    if self.matches(&cand)? && !cand.is_isotropic()? {
                        return Ok(cand);
                    }
                }
                Err(Error::InvariantViolation(
                    "no small anisotropic representative found".into(),
                ))
            }
            _ => unreachable!("representatives are only built in dimension <= 4"),
        }
    }

    fn matches(&self, cand: &QuadForm) -> Result<bool> {
        Ok(cand.class_shallow()? == *self)
    }
}

fn elem(field: &BaseField, x: scalars::FqElem) -> FieldElem {
    let coeffs: Vec<i64> = x.iter().map(|&c| c as i64).collect();
    field.from_coeffs(&coeffs).unwrap()
}

/// Basis of the kernel of a square matrix over a field, by Gaussian
/// elimination.
pub(crate) fn kernel_basis(field: &BaseField, mat: &[Vec<FieldElem>]) -> Vec<Vec<FieldElem>> {
    let rows = mat.len();
    if rows == 0 {
        return vec![];
    }
    let cols = mat[0].len();
    let mut m: Vec<Vec<FieldElem>> = mat.to_vec();
    let mut pivot_col_of_row: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let pivot = (r..rows).find(|&i| !m[i][c].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for j in 0..cols {
            m[r][j] = m[r][j].mul(&inv).unwrap();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let t = m[r][j].mul(&factor).unwrap();
                    m[i][j] = m[i][j].sub(&t).unwrap();
                }
            }
        }
        pivot_col_of_row.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let pivot_cols: BTreeSet<usize> = pivot_col_of_row.iter().cloned().collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![field.zero(); cols];
        v[free] = field.one();
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = m[row][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Exact determinant of a square matrix over a field, by Gaussian elimination.
pub(crate) fn det_field(field: &BaseField, mat: &[Vec<FieldElem>]) -> Result<FieldElem> {
    let n = mat.len();
    let mut m: Vec<Vec<FieldElem>> = mat.to_vec();
    let mut det = field.one();
    for c in 0..n {
        let pivot = (c..n).find(|&i| !m[i][c].is_zero());
        let Some(p) = pivot else {
            return Ok(field.zero());
        };
        if p != c {
            m.swap(c, p);
            det = det.neg();
        }
        det = det.mul(&m[c][c])?;
        let inv = m[c][c].inv()?;
        for i in (c + 1)..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].mul(&inv)?;
            for j in c..n {
                let t = m[c][j].mul(&factor)?;
                m[i][j] = m[i][j].sub(&t)?;
            }
        }
    }
    Ok(det)
}

/// Congruence-diagonalize a symmetric Gram matrix over a field of
/// characteristic != 2, returning the diagonal entries of a congruent
/// diagonal matrix (zeros dropped would mean degeneracy; an error instead).
pub(crate) fn diagonalize_symmetric(
    field: &BaseField,
    gram: &[Vec<FieldElem>],
) -> Result<Vec<FieldElem>> {
    if field.is_char2() {
        return Err(Error::WrongCharacteristic);
    }
    let n = gram.len();
    let mut m: Vec<Vec<FieldElem>> = gram.to_vec();
    let mut out = Vec::with_capacity(n);
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(&first) = active.first() {
        // choose a pivot with nonzero diagonal, correcting with a row/column
        // addition when the diagonal vanishes
        let pos = active.iter().position(|&i| !m[i][i].is_zero());
        let pivot = match pos {
            Some(p) => active[p],
            None => {
                let mut found = None;
                'outer: for &i in &active {
                    for &j in &active {
                        if i != j && !m[i][j].is_zero() {
                            found = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                let (i, j) = found.ok_or(Error::Degenerate)?;
                // row/col i += row/col j makes m[i][i] = 2 m[i][j] != 0
                for k in 0..n {
                    let t = m[j][k].clone();
                    m[i][k] = m[i][k].add(&t)?;
                }
                for k in 0..n {
                    let t = m[k][j].clone();
                    m[k][i] = m[k][i].add(&t)?;
                }
                i
            }
        };
        let _ = first;
        let d = m[pivot][pivot].clone();
        out.push(d.clone());
        let d_inv = d.inv()?;
        active.retain(|&i| i != pivot);
        // clear the pivot row/column on the remaining block
        let others: Vec<usize> = active.clone();
        for &i in &others {
            if m[pivot][i].is_zero() {
                continue;
            }
            let factor = m[pivot][i].mul(&d_inv)?;
            for k in 0..n {
                let t = m[pivot][k].mul(&factor)?;
                m[i][k] = m[i][k].sub(&t)?;
            }
            for k in 0..n {
                let t = m[k][pivot].mul(&factor)?;
                m[k][i] = m[k][i].sub(&t)?;
            }
        }
    }
    if out.iter().any(|e| e.is_zero()) {
        return Err(Error::Degenerate);
    }
    Ok(out)
}

/// Signed squarefree integers ordered by magnitude: 1, -1, 2, -2, 3, -3, 5, ...
fn squarefree_candidates(bound: u64) -> impl Iterator<Item = BigInt> {
    (1..=bound)
        .filter(|&n| {
            let mut n = n;
            let mut d = 2;
            while d * d <= n {
                if n % (d * d) == 0 {
                    return false;
                }
                while n % d == 0 {
                    n /= d;
                }
                d += 1;
            }
            true
        })
        .flat_map(|n| [BigInt::from(n), BigInt::from(-(n as i64))])
}
