//! Cartier duality for the constant group G = 𝔩^{−r}/𝔩^N: its group algebra
//! over the scalars with idempotent basis δ_a, the grouplike elements
//! x_b = Σ_a ζ^{tr(ab)}δ_a, and the trace pairing against 𝔩^{−N}𝔡^{−1}/𝔩^r𝔡^{−1}.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::CayleyGroup;
use crate::localfield::{Coset, KElement, LocalField};
use crate::scalars::CycScalar;

/// Exhaustive grouplike classification is run up to this group order.
pub const CLASSIFY_CAP: usize = 81;

/// A quotient of lattices 𝔩^bottom / 𝔩^top with its coset representatives.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    pub bottom: i64,
    pub top: i64,
    elements: Vec<Coset>,
    reps: Vec<KElement>,
    index: BTreeMap<Coset, usize>,
}

impl LatticeQuotient {
    pub fn new(field: &LocalField, bottom: i64, top: i64) -> Result<Self> {
        let elements = if top < bottom {
            vec![Coset::zero(top)]
        } else {
            Coset::zero(bottom).subcosets(field, top)?
        };
        let reps = elements.iter().map(|c| c.rep(field)).collect();
        let index = elements.iter().cloned().zip(0..).collect();
        Ok(LatticeQuotient {
            bottom,
            top,
            elements,
            reps,
            index,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Coset] {
        &self.elements
    }

    pub fn reps(&self) -> &[KElement] {
        &self.reps
    }

    pub fn index_of(&self, x: &KElement) -> Option<usize> {
        self.index.get(&x.reduce(self.top)).copied()
    }

    pub fn add_table(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut t = vec![vec![0; n]; n];
        for i in 0..n {
            for j in i..n {
                let k = self
                    .index_of(&(&self.reps[i] + &self.reps[j]))
                    .expect("closed under addition");
                t[i][j] = k;
                t[j][i] = k;
            }
        }
        t
    }

    fn zero_index(&self) -> usize {
        self.index[&Coset::zero(self.top)]
    }
}

/// G = 𝔩^{−r}/𝔩^N together with its dual Ĝ = 𝔩^{−N−δ}/𝔩^{r−δ}.
#[derive(Clone, Debug)]
pub struct DualityLab {
    field: Arc<LocalField>,
    pub r: i64,
    pub n: i64,
    pub group: LatticeQuotient,
    pub dual: LatticeQuotient,
}

impl DualityLab {
    pub fn new(field: &Arc<LocalField>, r: i64, n: i64) -> Result<Self> {
        let d = field.delta();
        Ok(DualityLab {
            field: field.clone(),
            r,
            n,
            group: LatticeQuotient::new(field, -r, n)?,
            dual: LatticeQuotient::new(field, -n - d, r - d)?,
        })
    }

    pub fn field(&self) -> &Arc<LocalField> {
        &self.field
    }

    /// Exponent of ζ^{tr(ab)} for group index a and dual index b.
    pub fn pair_exp(&self, a: usize, b: usize) -> Result<i64> {
        self.field.add_char_exp(&(&self.group.reps[a] * &self.dual.reps[b]))
    }

    /// P[a][b] = ζ^{tr(ab)} as exponents mod M.
    pub fn pairing_exponents(&self) -> Result<Vec<Vec<i64>>> {
        let (ng, nd) = (self.group.order(), self.dual.order());
        self.field.check_size((ng * nd) as u128)?;
        (0..ng)
            .map(|a| (0..nd).map(|b| self.pair_exp(a, b)).collect())
            .collect()
    }

    pub fn pairing_matrix(&self) -> Result<Vec<Vec<CycScalar>>> {
        let cyc = self.field.cyc();
        Ok(self
            .pairing_exponents()?
            .into_iter()
            .map(|row| row.into_iter().map(|k| CycScalar::root(cyc, k)).collect())
            .collect())
    }

    /// Both kernels trivial and b ↦ column injective.
    pub fn verify_perfect(&self) -> Result<bool> {
        let p = self.pairing_exponents()?;
        let (ng, nd) = (self.group.order(), self.dual.order());
        if ng != nd {
            return Ok(false);
        }
        let (z, zd) = (self.group.zero_index(), self.dual.zero_index());
        let left = (0..ng).filter(|&a| a != z).all(|a| (0..nd).any(|b| p[a][b] != 0));
        let right = (0..nd).filter(|&b| b != zd).all(|b| (0..ng).any(|a| p[a][b] != 0));
        let mut cols: Vec<Vec<i64>> = (0..nd).map(|b| (0..ng).map(|a| p[a][b]).collect()).collect();
        cols.sort();
        cols.dedup();
        Ok(left && right && cols.len() == nd)
    }

    pub fn identity(&self) -> GroupAlgebraElement {
        let one = CycScalar::one(self.field.cyc());
        GroupAlgebraElement {
            coeffs: vec![one; self.group.order()],
        }
    }

    pub fn delta(&self, a: usize) -> GroupAlgebraElement {
        let cyc = self.field.cyc();
        GroupAlgebraElement {
            coeffs: (0..self.group.order())
                .map(|i| {
                    if i == a {
                        CycScalar::one(cyc)
                    } else {
                        CycScalar::zero(cyc)
                    }
                })
                .collect(),
        }
    }

    pub fn zero(&self) -> GroupAlgebraElement {
        GroupAlgebraElement {
            coeffs: vec![CycScalar::zero(self.field.cyc()); self.group.order()],
        }
    }

    /// x_b = Σ_a ζ^{tr(ab)}δ_a.
    pub fn make_xb(&self, b: &KElement) -> Result<GroupAlgebraElement> {
        let cyc = self.field.cyc();
        let coeffs = self
            .group
            .reps
            .iter()
            .map(|a| Ok(CycScalar::root(cyc, self.field.add_char_exp(&(a * b))?)))
            .collect::<Result<_>>()?;
        Ok(GroupAlgebraElement { coeffs })
    }

    /// s(x)(u, v) = x(u + v): the coefficient of δ_u ⊗ δ_v.
    pub fn comult(&self, x: &GroupAlgebraElement) -> Result<Vec<Vec<CycScalar>>> {
        let n = self.group.order();
        self.field.check_size((n * n) as u128)?;
        let add = self.group.add_table();
        Ok((0..n)
            .map(|u| (0..n).map(|v| x.coeffs[add[u][v]].clone()).collect())
            .collect())
    }

    /// s(x) = x ⊗ x, checked coefficientwise.
    pub fn is_grouplike(&self, x: &GroupAlgebraElement) -> Result<bool> {
        let s = self.comult(x)?;
        let n = self.group.order();
        Ok((0..n).all(|u| (0..n).all(|v| s[u][v] == &x.coeffs[u] * &x.coeffs[v])))
    }

    /// Every character G → μ_M (a grouplike with unit coefficients in
    /// Q(ζ_M)) is x_b for exactly one b; also #grouplikes = #G.
    pub fn classify_grouplikes(&self) -> Result<Classification> {
        let n = self.group.order();
        if n > CLASSIFY_CAP {
            return Err(Error::SizeOverflow {
                size: n as u128,
                cap: CLASSIFY_CAP as u64,
            });
        }
        let m = self.field.params().conductor as i64;
        let cg = CayleyGroup::new(self.group.add_table(), self.group.zero_index());
        let p = self.pairing_exponents()?;
        let mut by_column: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for b in 0..self.dual.order() {
            by_column.entry((0..n).map(|a| p[a][b]).collect()).or_default().push(b);
        }
        let homs = cg.all_images(m);
        let mut matched = 0;
        let mut unique = true;
        for im in &homs {
            let values = cg.values_from_images(im, m);
            if !cg.is_homomorphism(&values, m) {
                unique = false;
                continue;
            }
            match by_column.get(&values) {
                Some(bs) if bs.len() == 1 => matched += 1,
                _ => unique = false,
            }
        }
        Ok(Classification {
            group_order: n,
            grouplikes: homs.len(),
            matched,
            unique,
        })
    }

    /// The pairing is independent of the level it is computed at, in both
    /// directions: enlarging r (restricting the dual) and enlarging N.
    pub fn verify_level_compat(&self) -> Result<bool> {
        let up_r = DualityLab::new(&self.field, self.r + 1, self.n)?;
        let up_n = DualityLab::new(&self.field, self.r, self.n + 1)?;
        // G_{r,N} ⊂ G_{r+1,N}, dual restricted Ĝ_{r+1,N} → Ĝ_{r,N}
        for (a, ar) in self.group.reps.iter().enumerate() {
            let ia = up_r.group.index_of(ar).expect("inclusion");
            for (b, br) in up_r.dual.reps.iter().enumerate() {
                let jb = self.dual.index_of(br).expect("restriction");
                if up_r.pair_exp(ia, b)? != self.pair_exp(a, jb)? {
                    return Ok(false);
                }
            }
        }
        // G_{r,N+1} → G_{r,N}, dual inclusion Ĝ_{r,N} ⊂ Ĝ_{r,N+1}
        for (a, ar) in up_n.group.reps.iter().enumerate() {
            let ia = self.group.index_of(ar).expect("projection");
            for (b, br) in self.dual.reps.iter().enumerate() {
                let jb = up_n.dual.index_of(br).expect("inclusion");
                if up_n.pair_exp(a, jb)? != self.pair_exp(ia, b)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub group_order: usize,
    pub grouplikes: usize,
    pub matched: usize,
    pub unique: bool,
}

impl Classification {
    pub fn holds(&self) -> bool {
        self.unique && self.matched == self.grouplikes && self.grouplikes == self.group_order
    }
}

/// Σ_a c_a δ_a with pointwise (idempotent-basis) multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    pub coeffs: Vec<CycScalar>,
}

impl GroupAlgebraElement {
    pub fn mul(&self, o: &Self) -> Self {
        GroupAlgebraElement {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        GroupAlgebraElement {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::LocalFieldParams;

    fn field(ell: u64, e: u32) -> Arc<LocalField> {
        LocalField::new(LocalFieldParams::new(ell, e, 5, 4).unwrap()).unwrap()
    }

    #[test]
    fn character_table_of_z3() {
        let k = field(3, 1);
        let lab = DualityLab::new(&k, 0, 1).unwrap();
        let p = lab.pairing_matrix().unwrap();
        assert_eq!(p.len(), 3);
        let z = CycScalar::zeta_root(k.cyc(), 1, 3).unwrap();
        // a = 1, b = 1/3
        let a = lab.group.index_of(&k.one()).unwrap();
        let b = lab.dual.index_of(&k.from_rational(crate::arith::rat(1, 3))).unwrap();
        assert_eq!(p[a][b], z);
        assert!(lab.verify_perfect().unwrap());
        assert!(lab.classify_grouplikes().unwrap().holds());
        assert!(lab.verify_level_compat().unwrap());
    }

    #[test]
    fn trivial_group() {
        let k = field(2, 3);
        let lab = DualityLab::new(&k, 0, 0).unwrap();
        assert_eq!(lab.group.order(), 1);
        assert!(lab.verify_perfect().unwrap());
        assert!(lab.classify_grouplikes().unwrap().holds());
        assert!(lab.verify_level_compat().unwrap());
    }

    #[test]
    fn grouplikes_and_idempotents() {
        let k = field(3, 2);
        let lab = DualityLab::new(&k, 1, 1).unwrap();
        let b = k.pi_pow(-2);
        let c = k.pi_pow(-1);
        let xb = lab.make_xb(&b).unwrap();
        assert!(lab.is_grouplike(&xb).unwrap());
        assert_eq!(xb.mul(&lab.make_xb(&c).unwrap()), lab.make_xb(&(&b + &c)).unwrap());
        assert_eq!(lab.make_xb(&k.zero()).unwrap(), lab.identity());
        let s = lab.comult(&lab.identity()).unwrap();
        assert!(s.iter().flatten().all(|c| c.is_one()));
        assert!(lab.comult(&lab.zero()).unwrap().iter().flatten().all(|c| c.is_zero()));
        let (d0, d1) = (lab.delta(0), lab.delta(1));
        assert!(d0.mul(&d1).is_zero());
        assert_eq!(d0.mul(&d0), d0);
    }
}
