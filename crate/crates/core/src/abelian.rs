//! Structure of a finite abelian group given only by its multiplication.
//!
//! The group generated by a list of candidates is closed one generator at a
//! time: each new generator `g` has a relative order `r` with `g^r` already
//! in the subgroup, which yields a lower-triangular relation matrix. A Smith
//! normal form of that matrix gives the invariant factors and a basis.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub trait GroupOps {
    type Elem: Clone + Ord;

    fn identity(&self) -> Self::Elem;

    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

#[derive(Clone, Debug)]
pub struct FiniteAbelian<E> {
    coords: BTreeMap<E, Vec<i64>>,
    by_coords: BTreeMap<Vec<i64>, E>,
    gens: Vec<E>,
    /// `rel[i]` expresses `gens[i]^{r_i}` as `∏_{j<i} gens[j]^{rel[i][j]}`, with `r_i` on the diagonal.
    rel: Vec<Vec<i64>>,
    divisors: Vec<u64>,
    basis: Vec<E>,
}

impl<E: Clone + Ord> FiniteAbelian<E> {
    /// Closes the candidates under the group law. Fails once more than
    /// `budget` elements have been produced.
    pub fn generate<G, I>(ops: &G, candidates: I, budget: usize) -> Result<Self>
    where
        G: GroupOps<Elem = E>,
        I: IntoIterator<Item = E>,
    {
        let id = ops.identity();
        let mut coords: BTreeMap<E, Vec<i64>> = BTreeMap::new();
        coords.insert(id, Vec::new());
        let mut gens: Vec<E> = Vec::new();
        let mut rel: Vec<Vec<i64>> = Vec::new();

        for g in candidates {
            if coords.contains_key(&g) {
                continue;
            }
            let mut powers = alloc::vec![g.clone()];
            loop {
                let next = ops.op(powers.last().expect("nonempty"), &g);
                if coords.contains_key(&next) {
                    let k = gens.len();
                    let r = powers.len() as i64 + 1;
                    let mut row = coords[&next].clone();
                    row.resize(k, 0);
                    row.push(r);
                    rel.push(row);
                    break;
                }
                powers.push(next);
            }
            let new_size = coords.len() * (powers.len() + 1);
            if new_size > budget {
                return Err(Error::ClosureBudgetExceeded(budget));
            }
            let old: Vec<(E, Vec<i64>)> = coords.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
            let k = gens.len();
            for (e, mut c) in old {
                c.resize(k, 0);
                for (j, pw) in powers.iter().enumerate() {
                    let mut cj = c.clone();
                    cj.push(j as i64 + 1);
                    coords.insert(ops.op(&e, pw), cj);
                }
            }
            gens.push(g);
        }

        let k = gens.len();
        for c in coords.values_mut() {
            c.resize(k, 0);
        }
        let by_coords = coords.iter().map(|(e, c)| (c.clone(), e.clone())).collect();
        let mut out = Self {
            coords,
            by_coords,
            gens,
            rel,
            divisors: Vec::new(),
            basis: Vec::new(),
        };
        out.compute_basis();
        Ok(out)
    }

    fn relation_matrix(&self) -> Vec<Vec<i128>> {
        let k = self.gens.len();
        self.rel
            .iter()
            .map(|row| {
                let mut r: Vec<i128> = row.iter().map(|&x| -(x as i128)).collect();
                r[row.len() - 1] = row[row.len() - 1] as i128;
                r.resize(k, 0);
                r
            })
            .collect()
    }

    fn compute_basis(&mut self) {
        let (diag, v_inv) = smith_normal_form(self.relation_matrix());
        let k = self.gens.len();
        for (t, &d) in diag.iter().enumerate() {
            if d == 1 {
                continue;
            }
            self.divisors.push(d as u64);
            self.basis.push(self.element_of_wide(&v_inv[t][..k]));
        }
    }

    fn element_of_wide(&self, x: &[i128]) -> E {
        let mut x: Vec<i128> = x.to_vec();
        for i in (0..self.gens.len()).rev() {
            let r = self.rel[i][i] as i128;
            let q = x[i].div_euclid(r);
            x[i] -= q * r;
            for (xj, &rj) in x.iter_mut().zip(&self.rel[i][..i]) {
                *xj += q * rj as i128;
            }
        }
        let key: Vec<i64> = x.iter().map(|&v| v as i64).collect();
        self.by_coords[&key].clone()
    }

    /// The element `∏ gens[i]^{x[i]}` for the sequential generators.
    pub fn element_of(&self, x: &[i64]) -> E {
        let wide: Vec<i128> = x.iter().map(|&v| v as i128).collect();
        self.element_of_wide(&wide)
    }

    pub fn order(&self) -> usize {
        self.coords.len()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.coords.contains_key(e)
    }

    pub fn elements(&self) -> impl Iterator<Item = &E> {
        self.coords.keys()
    }

    /// Invariant factors `d₁ | d₂ | …`, all greater than one.
    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    /// Basis elements; `basis()[i]` has order `divisors()[i]`.
    pub fn basis(&self) -> &[E] {
        &self.basis
    }

    /// Number of even invariant factors, i.e. `dim_{𝔽₂} G/G²`.
    pub fn two_rank(&self) -> usize {
        self.divisors.iter().filter(|&&d| d % 2 == 0).count()
    }
}

/// Order of `g` by repeated multiplication.
pub fn element_order<G: GroupOps>(ops: &G, g: &G::Elem) -> usize {
    let id = ops.identity();
    let mut x = g.clone();
    let mut n = 1;
    while x != id {
        x = ops.op(&x, g);
        n += 1;
    }
    n
}

/// Smith normal form of a square nonsingular integer matrix. Returns the
/// diagonal (positive, each dividing the next) and `V⁻¹`, where `U·M·V = diag`.
/// Row `t` of `V⁻¹` is the exponent vector of a generator of the `t`-th factor.
pub fn smith_normal_form(mut m: Vec<Vec<i128>>) -> (Vec<i128>, Vec<Vec<i128>>) {
    let n = m.len();
    let mut v: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    for t in 0..n {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if m[i][j] != 0 && pivot.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            v.swap(t, pj);
            let p = m[t][t];
            let mut clean = true;
            let (top, rest) = m.split_at_mut(t + 1);
            let pivot_row = &top[t];
            for row in rest.iter_mut() {
                let q = row[t] / p;
                if q != 0 {
                    for (x, y) in row[t..].iter_mut().zip(&pivot_row[t..]) {
                        *x -= q * y;
                    }
                }
                clean &= row[t] == 0;
            }
            for j in t + 1..n {
                let q = m[t][j] / p;
                if q != 0 {
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    let vj = v[j].clone();
                    for (x, y) in v[t].iter_mut().zip(&vj) {
                        *x += q * y;
                    }
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..n).find(|&i| (t + 1..n).any(|j| m[i][j] % p != 0));
            match bad_row {
                Some(i) => {
                    let row_i = m[i].clone();
                    for (x, y) in m[t][t..].iter_mut().zip(&row_i[t..]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for x in m[t][t..].iter_mut() {
                *x = -*x;
            }
        }
    }
    ((0..n).map(|i| m[i][i]).collect(), v)
}
