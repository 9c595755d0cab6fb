//! Finite abelian groups given by a Cayley table, and their homomorphisms
//! into μ_M (written additively as exponents mod M).

use num_integer::Integer;

/// A finite abelian group on 0..n with a generator sequence g_1, g_2, … such
/// that every element is uniquely Σ a_i·g_i with 0 ≤ a_i < r_i.
#[derive(Clone, Debug)]
pub struct CayleyGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    gens: Vec<usize>,
    rel_orders: Vec<u64>,
    /// r_i·g_i written in the earlier generators.
    relations: Vec<Vec<u64>>,
    normal_forms: Vec<Vec<u64>>,
}

impl CayleyGroup {
    /// `table[i][j]` is the product of elements i and j.
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Self {
        let n = table.len();
        // greedy filtration by elements of maximal order modulo what is spanned
        let mut forms: Vec<Option<Vec<u64>>> = vec![None; n];
        forms[identity] = Some(vec![]);
        let mut spanned = vec![identity];
        let (mut gens, mut rel_orders, mut relations) = (vec![], vec![], vec![]);
        while spanned.len() < n {
            let mut best: Option<(u64, usize)> = None;
            for g in 0..n {
                if forms[g].is_some() {
                    continue;
                }
                let (mut x, mut r) = (g, 1u64);
                while forms[x].is_none() {
                    x = table[x][g];
                    r += 1;
                }
                if best.is_none_or(|(br, _)| r > br) {
                    best = Some((r, g));
                }
            }
            let (r, g) = best.expect("unspanned element");
            let mut x = identity;
            for _ in 0..r {
                x = table[x][g];
            }
            let mut rel = forms[x].clone().unwrap();
            rel.resize(gens.len(), 0);
            relations.push(rel);
            let k = gens.len();
            let mut next = Vec::with_capacity(spanned.len() * r as usize);
            for &h in &spanned {
                let mut y = h;
                for a in 0..r {
                    if a > 0 {
                        y = table[y][g];
                    }
                    let mut f = forms[h].clone().unwrap();
                    f.resize(k + 1, 0);
                    f[k] = a;
                    forms[y] = Some(f);
                    next.push(y);
                }
            }
            spanned = next;
            gens.push(g);
            rel_orders.push(r);
        }
        let k = gens.len();
        let normal_forms = forms
            .into_iter()
            .map(|f| {
                let mut f = f.unwrap();
                f.resize(k, 0);
                f
            })
            .collect();
        CayleyGroup {
            table,
            identity,
            gens,
            rel_orders,
            relations,
            normal_forms,
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn op(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn relative_orders(&self) -> &[u64] {
        &self.rel_orders
    }

    /// Exponents mod m of every element, from the generator images.
    pub fn values_from_images(&self, images: &[i64], m: i64) -> Vec<i64> {
        self.normal_forms
            .iter()
            .map(|f| {
                f.iter()
                    .zip(images)
                    .fold(0i64, |acc, (&a, &x)| (acc + a as i64 * x).rem_euclid(m))
            })
            .collect()
    }

    /// v(i·j) = v(i) + v(j) mod m for all pairs.
    pub fn is_homomorphism(&self, values: &[i64], m: i64) -> bool {
        let n = self.order();
        (0..n).all(|i| (i..n).all(|j| (values[i] + values[j] - values[self.table[i][j]]).rem_euclid(m) == 0))
    }

    /// All homomorphisms into Z/m, as generator images.
    pub fn all_images(&self, m: i64) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for (i, &r) in self.rel_orders.iter().enumerate() {
            let mut next = Vec::new();
            for partial in &out {
                let t = self.relations[i]
                    .iter()
                    .zip(partial.iter())
                    .fold(0i64, |acc, (&c, &x): (&u64, &i64)| (acc + c as i64 * x).rem_euclid(m));
                for x in solve_linear(r as i64, t, m) {
                    let mut v = partial.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }
}

/// All x mod m with r·x ≡ t.
fn solve_linear(r: i64, t: i64, m: i64) -> Vec<i64> {
    let g = r.gcd(&m);
    if t.rem_euclid(g) != 0 {
        return vec![];
    }
    let (r1, t1, m1) = (r / g, t / g, m / g);
    let inv = if m1 == 1 {
        0
    } else {
        Integer::extended_gcd(&r1, &m1).x.rem_euclid(m1)
    };
    let x0 = (t1 * inv).rem_euclid(m1);
    (0..g).map(|k| x0 + k * m1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> CayleyGroup {
        CayleyGroup::new((0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect(), 0)
    }

    #[test]
    fn cyclic_groups() {
        let g = cyclic(12);
        assert_eq!(g.relative_orders(), &[12]);
        assert_eq!(g.all_images(24).len(), 12);
        assert_eq!(g.all_images(8).len(), 4);
        for im in g.all_images(24) {
            assert!(g.is_homomorphism(&g.values_from_images(&im, 24), 24));
        }
    }

    #[test]
    fn linear_congruences() {
        assert_eq!(solve_linear(4, 2, 6), vec![2, 5]);
        assert!(solve_linear(4, 1, 6).is_empty());
        assert_eq!(solve_linear(1, 0, 1), vec![0]);
    }
}
