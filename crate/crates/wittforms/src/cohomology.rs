//! Canonical representations of the 2-torsion cohomology groups H^n(F) that
//! receive the e_n invariants, with cup products.
//!
//! Over Q: H^1 is the group of square classes, H^2 is identified with finite
//! even sets of places (ramification sets), and for n >= 3 the 2-torsion of
//! H^n is supported at the single real place, so a class is one bit. Over a
//! finite field H^1 is the square-class or Artin-Schreier group and all
//! higher groups vanish.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalars::{
    ramification_set, square_class, BaseField, FieldElem, Place, SquareClass,
};

/// An element of H^n(F, Z/2(n-1)) in canonical, equality-decidable form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    field: BaseField,
    degree: u32,
    payload: Payload,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    /// Degree 1 over Q: signed squarefree representative of a square class.
    SquareClass(BigInt),
    /// Degree 1 over a finite field: square-class bit (odd characteristic)
    /// or Artin-Schreier class bit (characteristic 2).
    Bit(bool),
    /// Degree 2 over Q: the ramification set, always of even cardinality.
    Places(BTreeSet<Place>),
    /// Degree >= 3 over Q: the component at the real place.
    RealBit(bool),
    /// A vanishing group (degree >= 2 over finite fields).
    Zero,
}

impl CohClass {
    pub fn zero(field: BaseField, degree: u32) -> CohClass {
        assert!(degree >= 1);
        let payload = if field.is_rational() {
            match degree {
                1 => Payload::SquareClass(BigInt::one()),
                2 => Payload::Places(BTreeSet::new()),
                _ => Payload::RealBit(false),
            }
        } else if degree == 1 {
            Payload::Bit(false)
        } else {
            Payload::Zero
        };
        CohClass { field, degree, payload }
    }

    /// Degree-1 class of a square class (characteristic != 2).
    pub fn from_square_class(field: BaseField, class: SquareClass) -> CohClass {
        let payload = match class {
            SquareClass::Rational(n) => Payload::SquareClass(n),
            SquareClass::FiniteBit(b) => Payload::Bit(b),
        };
        CohClass { field, degree: 1, payload }
    }

    /// Degree-1 Artin-Schreier class (characteristic 2).
    pub fn from_arf_bit(field: BaseField, bit: bool) -> CohClass {
        CohClass { field, degree: 1, payload: Payload::Bit(bit) }
    }

    /// Degree-2 class over Q given its ramification set.
    pub fn from_places(places: BTreeSet<Place>) -> Result<CohClass> {
        if places.len() % 2 != 0 {
            return Err(Error::InvariantViolation(
                "ramification sets have even cardinality".into(),
            ));
        }
        Ok(CohClass {
            field: BaseField::rationals(),
            degree: 2,
            payload: Payload::Places(places),
        })
    }

    /// Class of degree n >= 3 over Q given its real-place component.
    pub fn from_real_bit(degree: u32, bit: bool) -> CohClass {
        assert!(degree >= 3);
        CohClass {
            field: BaseField::rationals(),
            degree,
            payload: Payload::RealBit(bit),
        }
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn is_zero(&self) -> bool {
        match &self.payload {
            Payload::SquareClass(n) => n.is_one(),
            Payload::Bit(b) => !b,
            Payload::Places(s) => s.is_empty(),
            Payload::RealBit(b) => !b,
            Payload::Zero => true,
        }
    }

    /// Group law; payload-wise. Every class is 2-torsion.
    pub fn add(&self, other: &CohClass) -> Result<CohClass> {
        if self.field != other.field || self.degree != other.degree {
            return Err(Error::UnsupportedDegreeCombination);
        }
        let payload = match (&self.payload, &other.payload) {
            (Payload::SquareClass(a), Payload::SquareClass(b)) => {
                Payload::SquareClass(crate::scalars::squarefree_signed_int(&(a * b)))
            }
            (Payload::Bit(a), Payload::Bit(b)) => Payload::Bit(a ^ b),
            (Payload::Places(a), Payload::Places(b)) => {
                Payload::Places(a.symmetric_difference(b).cloned().collect())
            }
            (Payload::RealBit(a), Payload::RealBit(b)) => Payload::RealBit(a ^ b),
            (Payload::Zero, Payload::Zero) => Payload::Zero,
            _ => return Err(Error::UnsupportedDegreeCombination),
        };
        Ok(CohClass {
            field: self.field.clone(),
            degree: self.degree,
            payload,
        })
    }

    /// The restriction of the class to the real place of Q, as a bit.
    pub fn real_component(&self) -> bool {
        match &self.payload {
            Payload::SquareClass(n) => n < &BigInt::from(0),
            Payload::Places(s) => s.contains(&Place::Infinity),
            Payload::RealBit(b) => *b,
            Payload::Bit(_) | Payload::Zero => false,
        }
    }

    /// Cup product. Over Q a product of two degree-1 classes is the symbol
    /// with its ramification set; any product landing in degree >= 3 is
    /// detected at the real place. Over finite fields every product lands
    /// in a vanishing group.
    pub fn cup(&self, other: &CohClass) -> Result<CohClass> {
        if self.field != other.field {
            return Err(Error::UnsupportedDegreeCombination);
        }
        let degree = self.degree + other.degree;
        if !self.field.is_rational() {
            return Ok(CohClass::zero(self.field.clone(), degree));
        }
        if degree == 2 {
            let (a, b) = match (&self.payload, &other.payload) {
                (Payload::SquareClass(a), Payload::SquareClass(b)) => (a, b),
                _ => return Err(Error::UnsupportedDegreeCombination),
            };
            let set = ramification_set(
                &BigRational::from_integer(a.clone()),
                &BigRational::from_integer(b.clone()),
            )?;
            CohClass::from_places(set)
        } else {
            Ok(CohClass::from_real_bit(
                degree,
                self.real_component() && other.real_component(),
            ))
        }
    }
}

/// A 2-torsion Brauer class, optionally tagged with a defining quaternion
/// symbol for provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerClass2 {
    pub class: CohClass,
    pub symbol: Option<(FieldElem, FieldElem)>,
}

impl BrauerClass2 {
    pub fn is_zero(&self) -> bool {
        self.class.is_zero()
    }
}

/// The Brauer class of the quaternion algebra (a, b)_F. Over a finite field
/// the Brauer group is trivial, so the class is always zero there.
pub fn brauer_class_of_quaternion(a: &FieldElem, b: &FieldElem) -> Result<BrauerClass2> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroElement);
    }
    let field = a.field().clone();
    let class = match (a.as_rational(), b.as_rational()) {
        (Some(ar), Some(br)) => {
            CohClass::from_places(ramification_set(ar, br)?)?
        }
        _ => CohClass::zero(field, 2),
    };
    Ok(BrauerClass2 {
        class,
        symbol: Some((a.clone(), b.clone())),
    })
}

/// Cup product of a list of degree-1 square classes over Q, with the last
/// factor allowed to be any lower-degree class: realizes symbols
/// (a_1) cup ... cup (a_{n-1}) cup x.
pub fn symbol_cup(leading: &[&FieldElem], last: &CohClass) -> Result<CohClass> {
    let mut acc = last.clone();
    for a in leading.iter().rev() {
        let cls = CohClass::from_square_class(a.field().clone(), square_class(a)?);
        acc = cls.cup(&acc)?;
    }
    Ok(acc)
}
