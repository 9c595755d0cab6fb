//! Multiplicative characters χ = χ̃·χ_λ of K^×: a finite-order unit part
//! χ̃ (a value table on (𝔬/π^n)^×) and the value λ = χ(π).

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::arith::{int, rat_pow, v_rat, Rational};
use crate::error::{Error, Result};
use crate::group::CayleyGroup;
use crate::localfield::{Coset, KElement, LocalField};
use crate::scalars::{CycScalar, LaurentPoly};

/// (𝔬/π^n)^× on its canonical unit representatives.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    pub level: i64,
    elements: Vec<Coset>,
    index: BTreeMap<Coset, usize>,
    group: CayleyGroup,
}

impl UnitGroup {
    pub fn new(field: &LocalField, level: i64) -> Result<UnitGroup> {
        if level < 0 {
            return Err(Error::BadParameter(format!("negative level {level}")));
        }
        let elements: Vec<Coset> = if level == 0 {
            vec![Coset::zero(0)]
        } else {
            Coset::zero(0)
                .subcosets(field, level)?
                .into_iter()
                .filter(|c| c.digit(0) != 0)
                .collect()
        };
        let n = elements.len();
        field.check_size((n * n) as u128)?;
        let index: BTreeMap<Coset, usize> = elements.iter().cloned().zip(0..).collect();
        let reps: Vec<KElement> = elements.iter().map(|c| c.rep(field)).collect();
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in i..n {
                let k = index[&(&reps[i] * &reps[j]).reduce(level)];
                table[i][j] = k;
                table[j][i] = k;
            }
        }
        let one = index[&field.one().reduce(level)];
        Ok(UnitGroup {
            level,
            elements,
            index,
            group: CayleyGroup::new(table, one),
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Coset] {
        &self.elements
    }

    pub fn generators(&self) -> Vec<Coset> {
        self.group
            .generators()
            .iter()
            .map(|&g| self.elements[g].clone())
            .collect()
    }

    pub fn relative_orders(&self) -> &[u64] {
        self.group.relative_orders()
    }

    pub fn index_of(&self, c: &Coset) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// All homomorphisms to μ_M, as generator image exponents.
    pub fn all_images(&self, m: i64) -> Vec<Vec<i64>> {
        self.group.all_images(m)
    }
}

/// χ(π): a formal monomial scale·λ^power, or a concrete scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaParam {
    Formal { scale: Rational, power: i64 },
    Concrete(CycScalar),
}

impl LambdaParam {
    pub fn formal() -> Self {
        LambdaParam::Formal {
            scale: int(1),
            power: 1,
        }
    }

    pub fn rational(r: Rational, field: &LocalField) -> Self {
        LambdaParam::Concrete(CycScalar::from_rational(field.cyc(), r))
    }

    /// χ(π)^m as a Laurent monomial in λ (a constant when concrete).
    pub fn power(&self, field: &LocalField, m: i64) -> Result<LaurentPoly> {
        Ok(match self {
            LambdaParam::Formal { scale, power } => {
                LaurentPoly::monomial(CycScalar::from_rational(field.cyc(), rat_pow(scale, m)), power * m)
            }
            LambdaParam::Concrete(c) => LaurentPoly::constant(c.pow(m)?),
        })
    }

    /// λ ↦ q/λ.
    pub fn dual(&self, field: &LocalField) -> Result<Self> {
        let q = int(field.q() as i64);
        Ok(match self {
            LambdaParam::Formal { scale, power } => LambdaParam::Formal {
                scale: q / scale,
                power: -power,
            },
            LambdaParam::Concrete(c) => LambdaParam::Concrete(c.inv()?.scale(&q)),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Character {
    field: Arc<LocalField>,
    level: i64,
    /// Exponents k (value ζ_M^k) on the unit representatives mod π^level.
    table: BTreeMap<Coset, i64>,
    pub lambda: LambdaParam,
}

impl PartialEq for Character {
    fn eq(&self, o: &Self) -> bool {
        self.level == o.level && self.table == o.table && self.lambda == o.lambda
    }
}

impl Character {
    /// The unramified character χ_λ with formal λ.
    pub fn unramified(field: &Arc<LocalField>) -> Self {
        Character {
            field: field.clone(),
            level: 0,
            table: BTreeMap::from([(Coset::zero(0), 0)]),
            lambda: LambdaParam::formal(),
        }
    }

    /// χ_Harr = χ_{1/q}.
    pub fn harr(field: &Arc<LocalField>) -> Self {
        let q = int(field.q() as i64);
        Character {
            lambda: LambdaParam::rational(int(1) / q, field),
            ..Self::unramified(field)
        }
    }

    /// The character of (𝔬/π^level)^× sending the group's generators
    /// ([`UnitGroup::generators`]) to ζ_M^{images[i]}; level is re-minimized.
    pub fn from_generator_images(field: &Arc<LocalField>, level: i64, images: &[i64]) -> Result<Self> {
        let group = UnitGroup::new(field, level)?;
        Self::from_group_images(field, &group, images)
    }

    pub fn from_group_images(field: &Arc<LocalField>, group: &UnitGroup, images: &[i64]) -> Result<Self> {
        let m = field.params().conductor as i64;
        if images.len() != group.group.generators().len() {
            return Err(Error::BadParameter(format!(
                "expected {} generator images, got {}",
                group.group.generators().len(),
                images.len()
            )));
        }
        let values = group.group.values_from_images(images, m);
        if !group.group.is_homomorphism(&values, m) {
            return Err(Error::NotMultiplicative);
        }
        let table = group.elements.iter().cloned().zip(values).collect();
        Ok(Self::minimized(field, group.level, table))
    }

    /// A character given by its exponent table on (𝔬/π^level)^×.
    pub fn from_table(field: &Arc<LocalField>, level: i64, table: &BTreeMap<Coset, i64>) -> Result<Self> {
        let group = UnitGroup::new(field, level)?;
        let m = field.params().conductor as i64;
        let values = group
            .elements
            .iter()
            .map(|c| {
                table
                    .get(c)
                    .map(|k| k.rem_euclid(m))
                    .ok_or_else(|| Error::BadParameter(format!("missing unit value at level {level}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if table.len() != values.len() {
            return Err(Error::BadParameter("unit table has extra entries".into()));
        }
        if !group.group.is_homomorphism(&values, m) {
            return Err(Error::NotMultiplicative);
        }
        let table = group.elements.iter().cloned().zip(values).collect();
        Ok(Self::minimized(field, level, table))
    }

    /// Generator images given as roots of unity ζ_order^k.
    pub fn from_roots(field: &Arc<LocalField>, level: i64, roots: &[(i64, u64)]) -> Result<Self> {
        let m = field.params().conductor;
        let images = roots
            .iter()
            .map(|&(k, order)| {
                if order == 0 || !m.is_multiple_of(order) {
                    Err(Error::BadOrder { order, conductor: m })
                } else {
                    Ok((k * (m / order) as i64).rem_euclid(m as i64))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_generator_images(field, level, &images)
    }

    /// Drops levels while the table is trivial on 1 + π^{n−1}𝔬.
    fn minimized(field: &Arc<LocalField>, mut level: i64, mut table: BTreeMap<Coset, i64>) -> Self {
        while level >= 1 {
            let trivial_on_kernel = table
                .iter()
                .filter(|(c, _)| c.parent(level - 1) == field.one().reduce(level - 1))
                .all(|(_, &k)| k == 0);
            if !trivial_on_kernel {
                break;
            }
            level -= 1;
            table = if level == 0 {
                BTreeMap::from([(Coset::zero(0), 0)])
            } else {
                table.into_iter().map(|(c, k)| (c.parent(level), k)).collect()
            };
        }
        Character {
            field: field.clone(),
            level,
            table,
            lambda: LambdaParam::formal(),
        }
    }

    /// Every character of (𝔬/π^level)^× (each with its minimal level), in a fixed order.
    pub fn all_up_to_level(field: &Arc<LocalField>, level: i64) -> Result<Vec<Self>> {
        let group = UnitGroup::new(field, level)?;
        let m = field.params().conductor as i64;
        group
            .all_images(m)
            .iter()
            .map(|im| Self::from_group_images(field, &group, im))
            .collect()
    }

    /// Characters whose minimal level is exactly `level`.
    pub fn all_of_level(field: &Arc<LocalField>, level: i64) -> Result<Vec<Self>> {
        Ok(Self::all_up_to_level(field, level)?
            .into_iter()
            .filter(|c| c.level == level)
            .collect())
    }

    pub fn field(&self) -> &Arc<LocalField> {
        &self.field
    }

    /// The same character data over another field with equal ℓ, e and M
    /// (e.g. one using a different generative ζ).
    pub fn with_field(&self, field: &Arc<LocalField>) -> Result<Self> {
        let (a, b) = (self.field.params(), field.params());
        if (a.ell, a.e, a.conductor) != (b.ell, b.e, b.conductor) {
            return Err(Error::BadParameter("incompatible field for character".into()));
        }
        Ok(Character {
            field: field.clone(),
            ..self.clone()
        })
    }

    pub fn with_lambda(&self, lambda: LambdaParam) -> Self {
        Character { lambda, ..self.clone() }
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    /// The level convention that also calls a trivial χ̃ "level 1" when 𝔬^× = 1 + π𝔬.
    pub fn has_level(&self, n: i64) -> bool {
        self.level == n || (n == 1 && self.level == 0 && self.field.ell() == 2)
    }

    pub fn is_unramified(&self) -> bool {
        self.level == 0
    }

    pub fn table(&self) -> &BTreeMap<Coset, i64> {
        &self.table
    }

    /// Exponent k with χ̃(u) = ζ_M^k for a unit u.
    pub fn unit_exp(&self, u: &KElement) -> Result<i64> {
        match u.valuation() {
            Some(0) => {}
            Some(_) => return Err(Error::BadParameter("not a unit".into())),
            None => return Err(Error::ZeroArgument),
        }
        if self.level == 0 {
            return Ok(0);
        }
        Ok(self.table[&u.reduce(self.level)])
    }

    /// χ̃(u) for a unit u.
    pub fn unit_value(&self, u: &KElement) -> Result<CycScalar> {
        Ok(CycScalar::root(self.field.cyc(), self.unit_exp(u)?))
    }

    /// χ̃(x) where χ̃(π) = 1.
    pub fn tilde_value(&self, x: &KElement) -> Result<CycScalar> {
        let (_, u) = x.split_unit().ok_or(Error::ZeroArgument)?;
        self.unit_value(&u)
    }

    /// χ(x) = λ^m·χ̃(u) for x = π^m·u.
    pub fn eval(&self, x: &KElement) -> Result<LaurentPoly> {
        let (m, u) = x.split_unit().ok_or(Error::ZeroArgument)?;
        Ok(self.lambda.power(&self.field, m)?.scale(&self.unit_value(&u)?))
    }

    /// χ̃^{−1} with the same λ data.
    pub fn unit_inverse(&self) -> Self {
        let m = self.field.params().conductor as i64;
        Character {
            table: self
                .table
                .iter()
                .map(|(c, &k)| (c.clone(), (-k).rem_euclid(m)))
                .collect(),
            ..self.clone()
        }
    }

    /// χ* = (χ·χ_Harr)^{−1} = χ̃^{−1}χ_{q/λ}.
    pub fn dual(&self) -> Result<Self> {
        let inv = self.unit_inverse();
        Ok(Character {
            lambda: self.lambda.dual(&self.field)?,
            ..inv
        })
    }

    /// The exponent v_p(λ); the modulus is p^{−v_p(λ)}.
    pub fn modulus_exponent(&self) -> Result<i64> {
        match &self.lambda {
            LambdaParam::Formal { .. } => Err(Error::FormalLambda),
            LambdaParam::Concrete(c) => {
                let r = c
                    .as_rational()
                    .ok_or_else(|| Error::BadParameter("modulus needs a rational λ".into()))?;
                v_rat(&r, self.field.params().p).ok_or(Error::ZeroArgument)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::localfield::LocalFieldParams;

    fn field(ell: u64, e: u32) -> Arc<LocalField> {
        LocalField::new(LocalFieldParams::new(ell, e, 5, 4).unwrap()).unwrap()
    }

    #[test]
    fn unit_groups() {
        let k = field(3, 1);
        let g = UnitGroup::new(&k, 2).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.relative_orders(), &[6]);
        let k2 = field(2, 3);
        let g2 = UnitGroup::new(&k2, 3).unwrap();
        assert_eq!(g2.order(), 4);
        assert_eq!(g2.all_images(16).len(), 4);
        for (ell, e) in [(3, 1), (3, 2), (2, 3)] {
            let k = field(ell, e);
            for n in 0..4 {
                let g = UnitGroup::new(&k, n).unwrap();
                assert_eq!(g.all_images(k.params().conductor as i64).len(), g.order());
            }
        }
    }

    #[test]
    fn quadratic_mod_3() {
        let k = field(3, 1);
        let chi = Character::from_roots(&k, 1, &[(1, 2)]).unwrap();
        assert_eq!(chi.level(), 1);
        let minus = CycScalar::from_int(k.cyc(), -1);
        assert_eq!(chi.unit_value(&k.from_int(2)).unwrap(), minus);
        assert!(chi.unit_value(&k.from_int(1)).unwrap().is_one());
        let x = k.from_int(18);
        let v = chi.eval(&x).unwrap();
        assert_eq!(v, LaurentPoly::monomial(minus, 2));
        let d = chi.dual().unwrap();
        assert_eq!(d.table(), chi.table());
        assert_eq!(d.dual().unwrap(), chi);
    }

    #[test]
    fn level_minimization() {
        let k = field(3, 1);
        let triv = Character::from_roots(&k, 1, &[(0, 1)]).unwrap();
        assert_eq!(triv.level(), 0);
        let k2 = field(2, 1);
        let t2 = Character::from_generator_images(&k2, 1, &[]).unwrap();
        assert!(t2.has_level(0) && t2.has_level(1));
        assert!(matches!(
            Character::from_roots(&k, 1, &[(1, 7)]),
            Err(Error::BadOrder { .. })
        ));
        assert_eq!(
            Character::from_generator_images(&k, 1, &[1]).err(),
            Some(Error::NotMultiplicative)
        );
    }

    #[test]
    fn harr_and_modulus() {
        let k = field(3, 2);
        let h = Character::harr(&k);
        let v = h.eval(&k.pi_pow(1)).unwrap();
        assert_eq!(v, LaurentPoly::constant(CycScalar::from_rational(k.cyc(), rat(1, 3))));
        assert_eq!(h.modulus_exponent().unwrap(), 0);
        let c = Character::unramified(&k).with_lambda(LambdaParam::rational(int(5), &k));
        assert_eq!(c.modulus_exponent().unwrap(), 1);
        assert_eq!(
            Character::unramified(&k).modulus_exponent().err(),
            Some(Error::FormalLambda)
        );
    }

    #[test]
    fn counts_by_level() {
        let k = field(3, 1);
        assert_eq!(Character::all_of_level(&k, 1).unwrap().len(), 1);
        assert_eq!(Character::all_of_level(&k, 2).unwrap().len(), 4);
        let k = field(2, 3);
        assert_eq!(Character::all_of_level(&k, 1).unwrap().len(), 0);
        assert_eq!(Character::all_of_level(&k, 2).unwrap().len(), 1);
    }
}
