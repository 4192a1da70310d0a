//! Ground-truth exhaustive computations over small finite fields and bounded
//! height searches over Q. Every invariant-based decision in the crate can be
//! checked against these oracles; they decide nothing by classification,
//! only by search.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadforms::{diagonalize_symmetric, kernel_basis, QuadForm};
use crate::scalars::{BaseField, FieldElem};

/// Default cap on the number of vectors an exhaustive scan may visit.
pub const DEFAULT_SEARCH_BOUND: u64 = 1 << 22;

fn search_space(q: &QuadForm, bound: u64) -> Result<(u64, u64)> {
    let ctx = q.field().fq().ok_or(Error::SearchSpaceTooLarge)?;
    let order = ctx.order();
    let dim = q.dim() as u32;
    let mut total: u64 = 1;
    for _ in 0..dim {
        total = total
            .checked_mul(order)
            .filter(|&t| t <= bound)
            .ok_or(Error::SearchSpaceTooLarge)?;
    }
    Ok((order, total))
}

fn vector_for_index(
    field: &BaseField,
    table: &[FieldElem],
    order: u64,
    dim: usize,
    idx: u64,
) -> Vec<FieldElem> {
    // first coordinate is the most significant digit: increasing index is
    // lexicographic order on vectors
    let mut v = vec![field.zero(); dim];
    let mut n = idx;
    for i in (0..dim).rev() {
        v[i] = table[(n % order) as usize].clone();
        n /= order;
    }
    v
}

/// Index-arithmetic multiplication and addition tables for a small finite
/// field; they keep the hot scan loop allocation-free and can be shared
/// across many scans of the same field.
pub(crate) struct FqScan {
    order: u64,
    sq: usize,
    mul: Vec<u32>,
    add: Vec<u32>,
}

impl FqScan {
    pub(crate) fn new(ctx: &crate::scalars::FqCtx) -> Option<FqScan> {
        let order = ctx.order();
        if order > 1024 {
            return None;
        }
        let sq = order as usize;
        let mut mul = vec![0u32; sq * sq];
        let mut add = vec![0u32; sq * sq];
        for i in 0..order {
            let xi = ctx.from_index(i);
            for j in 0..order {
                let xj = ctx.from_index(j);
                mul[(i * order + j) as usize] = ctx.to_index(&ctx.mul(&xi, &xj)) as u32;
                add[(i * order + j) as usize] = ctx.to_index(&ctx.add(&xi, &xj)) as u32;
            }
        }
        Some(FqScan { order, sq, mul, add })
    }

    /// q(x) as a list of (i, j, coefficient-index) terms.
    pub(crate) fn terms_of(&self, ctx: &crate::scalars::FqCtx, q: &QuadForm) -> Vec<(usize, usize, u32)> {
        let mut terms = Vec::new();
        match q {
            QuadForm::Diagonal { entries, .. } => {
                for (i, e) in entries.iter().enumerate() {
                    terms.push((i, i, ctx.to_index(e.as_fq().unwrap()) as u32));
                }
            }
            QuadForm::Char2 { upper, .. } => {
                for (i, row) in upper.iter().enumerate() {
                    for (j, e) in row.iter().enumerate().skip(i) {
                        let c = ctx.to_index(e.as_fq().unwrap()) as u32;
                        if c != 0 {
                            terms.push((i, j, c));
                        }
                    }
                }
            }
        }
        terms
    }

    /// Index of the lexicographically first isotropic vector.
    pub(crate) fn find_isotropic(
        &self,
        terms: &[(usize, usize, u32)],
        dim: usize,
        total: u64,
    ) -> Option<u64> {
        let order = self.order;
        let sq = self.sq;
        (1..total).into_par_iter().find_first(|&idx| {
            let mut digits = [0u32; 32];
            let mut n = idx;
            for d in (0..dim).rev() {
                digits[d] = (n % order) as u32;
                n /= order;
            }
            let mut acc = 0u32;
            for &(i, j, c) in terms {
                let xx = self.mul[(digits[i] as usize) * sq + digits[j] as usize];
                let term = self.mul[(c as usize) * sq + xx as usize];
                acc = self.add[(acc as usize) * sq + term as usize];
            }
            acc == 0
        })
    }
}

/// First isotropic vector of a form over a finite field in lexicographic
/// order, or None if the form is anisotropic. The scan is deterministic and
/// independent of the parallel schedule.
pub fn exhaustive_isotropy(q: &QuadForm, bound: u64) -> Result<Option<Vec<FieldElem>>> {
    let (order, total) = search_space(q, bound)?;
    let field = q.field().clone();
    let ctx = field.fq().unwrap().clone();
    let dim = q.dim();
    if dim == 0 {
        return Ok(None);
    }
    let table: Vec<FieldElem> = (0..order)
        .map(|i| {
            let coeffs: Vec<i64> = ctx.from_index(i).iter().map(|&c| c as i64).collect();
            field.from_coeffs(&coeffs).unwrap()
        })
        .collect();
    let witness = if let Some(scan) = FqScan::new(&ctx) {
        let terms = scan.terms_of(&ctx, q);
        scan.find_isotropic(&terms, dim, total)
    } else {
        (1..total).into_par_iter().find_first(|&idx| {
            let v = vector_for_index(&field, &table, order, dim, idx);
            q.evaluate(&v).map(|val| val.is_zero()).unwrap_or(false)
        })
    };
    Ok(witness.map(|idx| vector_for_index(&field, &table, order, dim, idx)))
}

/// Ground-truth Witt index over a finite field: split hyperbolic planes off
/// explicitly as long as the exhaustive scan finds isotropic vectors.
pub fn exhaustive_witt_index(q: &QuadForm, bound: u64) -> Result<u32> {
    let mut current = q.clone();
    let mut index = 0u32;
    loop {
        let witness = match exhaustive_isotropy(&current, bound)? {
            Some(w) => w,
            None => return Ok(index),
        };
        current = split_hyperbolic_plane(&current, &witness)?;
        index += 1;
    }
}

/// Restrict a form to the orthogonal complement of the hyperbolic plane
/// spanned by an isotropic vector and a polar partner.
fn split_hyperbolic_plane(q: &QuadForm, v: &[FieldElem]) -> Result<QuadForm> {
    let field = q.field().clone();
    let d = q.dim();
    let b = q.polar_matrix();
    let pair = |x: &[FieldElem], y: &[FieldElem]| -> Result<FieldElem> {
        let mut acc = field.zero();
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                acc = acc.add(&x[i].mul(&b[i][j])?.mul(&y[j])?)?;
            }
        }
        Ok(acc)
    };
    let basis: Vec<Vec<FieldElem>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect();
    let w = basis
        .iter()
        .find(|e| !pair(v, e).map(|x| x.is_zero()).unwrap_or(true))
        .ok_or(Error::Degenerate)?
        .clone();
    // complement = joint kernel of b(v, .) and b(w, .)
    let mut rows = Vec::new();
    for probe in [v, w.as_slice()] {
        let mut row = Vec::with_capacity(d);
        for e in &basis {
            row.push(pair(probe, e)?);
        }
        rows.push(row);
    }
    let complement = kernel_basis(&field, &rows);
    if complement.len() != d - 2 {
        return Err(Error::Degenerate);
    }
    if field.is_char2() {
        let mut coeffs = vec![vec![field.zero(); d - 2]; d - 2];
        for i in 0..(d - 2) {
            for j in 0..(d - 2) {
                if i == j {
                    coeffs[i][j] = q.evaluate(&complement[i])?;
                } else if i < j {
                    coeffs[i][j] = pair(&complement[i], &complement[j])?;
                }
            }
        }
        QuadForm::char2(field, coeffs)
    } else {
        // Gram of the restricted quadratic form: A(x, y) = b(x, y)/2
        let mut gram = vec![vec![field.zero(); d - 2]; d - 2];
        for i in 0..(d - 2) {
            for j in 0..(d - 2) {
                gram[i][j] = pair(&complement[i], &complement[j])?.halve()?;
            }
        }
        let entries = diagonalize_symmetric(&field, &gram)?;
        QuadForm::diagonal(field, entries)
    }
}

/// Scan primitive integer vectors of sup-norm at most `height` for a zero of
/// a rational form, in lexicographic order by (height, coordinates). A None
/// result is not a proof of anisotropy.
pub fn bounded_height_isotropy(q: &QuadForm, height: u64) -> Result<Option<Vec<BigInt>>> {
    if !q.field().is_rational() {
        return Err(Error::FieldMismatch);
    }
    let entries = q
        .diagonal_entries()
        .ok_or(Error::WrongCharacteristic)?;
    let rats: Vec<BigRational> = entries
        .iter()
        .map(|e| e.as_rational().unwrap().clone())
        .collect();
    let mut denom_lcm = BigInt::from(1);
    for r in &rats {
        denom_lcm = denom_lcm.lcm(r.denom());
    }
    let weights: Vec<BigInt> = rats
        .iter()
        .map(|r| (r * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let d = weights.len();
    if d == 0 {
        return Ok(None);
    }
    // digit order 0, 1, -1, 2, -2, ... so small positive witnesses come first
    let radix = 2 * height + 1;
    let digit_value = |digit: u64| -> i64 {
        if digit == 0 {
            0
        } else if digit % 2 == 1 {
            ((digit + 1) / 2) as i64
        } else {
            -((digit / 2) as i64)
        }
    };
    let mut digits = vec![0u64; d];
    loop {
        // next tuple in the fixed enumeration order
        let mut i = d;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if digits[i] + 1 < radix {
                digits[i] += 1;
                for dd in digits.iter_mut().skip(i + 1) {
                    *dd = 0;
                }
                break;
            }
        }
        let coords: Vec<i64> = digits.iter().map(|&dg| digit_value(dg)).collect();
        let mut g = BigUint::zero();
        for c in &coords {
            g = g.gcd(BigInt::from(*c).magnitude());
        }
        if g.to_u64() != Some(1) {
            continue;
        }
        let mut acc = BigInt::zero();
        for (wgt, c) in weights.iter().zip(&coords) {
            acc += wgt * BigInt::from(*c) * BigInt::from(*c);
        }
        if acc.is_zero() {
            return Ok(Some(coords.iter().map(|&c| BigInt::from(c)).collect()));
        }
    }
}

/// Ground-truth isotropy of a hermitian pair over a finite field: the scan
/// runs on the associated quadratic form, which is isotropic iff the pair is.
pub fn exhaustive_pair_isotropy(p: &crate::pairs::HermPair, bound: u64) -> Result<bool> {
    let q = p.associated_form_any()?;
    Ok(exhaustive_isotropy(&q, bound)?.is_some())
}

/// Brute-force two-adic Hilbert symbol: z^2 = a x^2 + b y^2 has a primitive
/// solution mod 32 iff it has a nontrivial solution over Q_2 (coefficients
/// reduced to square-class representatives of valuation at most 1, where the
/// mod-32 lift criterion is exact).
pub fn hilbert_two_adic_oracle(a: &BigRational, b: &BigRational) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroElement);
    }
    let rep = |r: &BigRational| -> i64 {
        let two = BigUint::from(2u32);
        let v = crate::scalars::val_p(r, &two).rem_euclid(2);
        let mut u = r.clone();
        let twob = BigRational::from_integer(BigInt::from(2));
        while (u.numer() % BigInt::from(2)).is_zero() {
            u /= &twob;
        }
        while (u.denom() % BigInt::from(2)).is_zero() {
            u *= &twob;
        }
        let eight = BigInt::from(8);
        let n = u.numer().mod_floor(&eight).to_i64().unwrap();
        let dd = u.denom().mod_floor(&eight).to_i64().unwrap();
        let unit_mod8 = (n * dd).rem_euclid(8);
        (1 << v) * unit_mod8
    };
    let (aa, bb) = (rep(a), rep(b));
    for x in 0i64..32 {
        for y in 0i64..32 {
            for z in 0i64..32 {
                if x % 2 == 0 && y % 2 == 0 && z % 2 == 0 {
                    continue;
                }
                if (aa * x * x + bb * y * y - z * z).rem_euclid(32) == 0 {
                    return Ok(1);
                }
            }
        }
    }
    Ok(-1)
}

/// Strict mod-8 variant of the brute-force symbol; exact when both entries
/// are two-adic units.
pub fn hilbert_two_adic_oracle_units_mod8(a_unit_mod8: i64, b_unit_mod8: i64) -> i8 {
    for x in 0i64..8 {
        for y in 0i64..8 {
            for z in 0i64..8 {
                if x % 2 == 0 && y % 2 == 0 && z % 2 == 0 {
                    continue;
                }
                if (a_unit_mod8 * x * x + b_unit_mod8 * y * y - z * z).rem_euclid(8) == 0 {
                    return 1;
                }
            }
        }
    }
    -1
}
