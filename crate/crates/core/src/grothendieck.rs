//! Virtual `r`-modules: finitely supported signed multisets of weights.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::weight::Weight;

/// Element of the Grothendieck group of semisimple `span(h)`-modules.
///
/// Stored as `weight -> multiplicity`; zero coefficients are never stored, so
/// derived equality is equality in the group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VirtualRModule {
    coefficients: BTreeMap<Weight, i64>,
}

impl VirtualRModule {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `coefficient * [weight]`.
    pub fn single(weight: Weight, coefficient: i64) -> Self {
        let mut m = Self::zero();
        m.add_term(weight, coefficient);
        m
    }

    pub fn add_term(&mut self, weight: Weight, coefficient: i64) {
        if coefficient == 0 {
            return;
        }
        let entry = self.coefficients.entry(weight).or_insert(0);
        *entry += coefficient;
        if *entry == 0 {
            self.coefficients.remove(&weight);
        }
    }

    pub fn coefficient(&self, weight: Weight) -> i64 {
        self.coefficients.get(&weight).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Weight, i64)> + '_ {
        self.coefficients.iter().map(|(w, c)| (*w, *c))
    }

    pub fn coefficients(&self) -> &BTreeMap<Weight, i64> {
        &self.coefficients
    }
}

impl FromIterator<(Weight, i64)> for VirtualRModule {
    fn from_iter<T: IntoIterator<Item = (Weight, i64)>>(iter: T) -> Self {
        let mut m = Self::zero();
        for (w, c) in iter {
            m.add_term(w, c);
        }
        m
    }
}

impl AddAssign<&VirtualRModule> for VirtualRModule {
    fn add_assign(&mut self, rhs: &VirtualRModule) {
        for (w, c) in rhs.iter() {
            self.add_term(w, c);
        }
    }
}

impl Add<&VirtualRModule> for &VirtualRModule {
    type Output = VirtualRModule;

    fn add(self, rhs: &VirtualRModule) -> VirtualRModule {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &VirtualRModule {
    type Output = VirtualRModule;

    fn neg(self) -> VirtualRModule {
        self.iter().map(|(w, c)| (w, -c)).collect()
    }
}

impl Sub<&VirtualRModule> for &VirtualRModule {
    type Output = VirtualRModule;

    fn sub(self, rhs: &VirtualRModule) -> VirtualRModule {
        self + &(-rhs)
    }
}

impl fmt::Display for VirtualRModule {
    /// Writes e.g. `-[+1] - [-1]`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // highest weight first
        for (i, (w, c)) in self.coefficients.iter().rev().enumerate() {
            let sign = if *c < 0 { "-" } else { "+" };
            match (i, sign) {
                (0, "+") => {}
                (0, _) => f.write_str("-")?,
                _ => write!(f, " {sign} ")?,
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "[{w}]")?;
        }
        Ok(())
    }
}

/// Serialized as `{ "<weight>": coefficient }`.
impl Serialize for VirtualRModule {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.coefficients.len()))?;
        for (w, c) in &self.coefficients {
            map.serialize_entry(&w.0.to_string(), c)?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut m = VirtualRModule::single(Weight(1), 2);
        m.add_term(Weight(1), -2);
        assert!(m.is_zero());
        assert_eq!(m, VirtualRModule::zero());
    }

    #[test]
    fn display() {
        let m: VirtualRModule = [(Weight(1), -1), (Weight(-1), -1)].into_iter().collect();
        assert_eq!(m.to_string(), "-[+1] - [-1]");
        let m: VirtualRModule = [(Weight(-1), 1), (Weight(1), -1)].into_iter().collect();
        assert_eq!(m.to_string(), "-[+1] + [-1]");
        assert_eq!(VirtualRModule::zero().to_string(), "0");
    }

    fn arb_virtual() -> impl Strategy<Value = VirtualRModule> {
        proptest::collection::vec((-4i64..4, -3i64..3), 0..6)
            .prop_map(|terms| terms.into_iter().map(|(w, c)| (Weight(w), c)).collect())
    }

    proptest! {
        #[test]
        fn abelian_group_laws(a in arb_virtual(), b in arb_virtual(), c in arb_virtual()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&a + &VirtualRModule::zero(), a.clone());
        }
    }
}
