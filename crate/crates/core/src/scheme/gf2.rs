// Copyright 2026 The qcsi-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Linear systems over GF(2) with bit-packed rows.
//!
//! Rows are inserted one at a time and reduced against the current pivots.
//! Each stored row remembers which input equations it is a combination of, so
//! a row that reduces to `0 = 1` directly yields an infeasible subset.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }
}

/// One equation `Σ_{v ∈ vars} s_v = rhs`. Repeated variables cancel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub vars: Vec<usize>,
    pub rhs: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// Assignment with every free variable fixed to 0.
    Solved(Vec<bool>),
    /// Indices of an irreducible set of equations whose sum is `0 = 1`.
    Infeasible(Vec<usize>),
}

struct PivotRow {
    pivot: usize,
    coeffs: BitRow,
    rhs: bool,
    origin: BitRow,
}

pub struct System {
    num_vars: usize,
    equations: Vec<Equation>,
}

impl System {
    pub fn new(num_vars: usize) -> Self {
        System {
            num_vars,
            equations: Vec::new(),
        }
    }

    pub fn push(&mut self, vars: Vec<usize>, rhs: bool) -> usize {
        debug_assert!(vars.iter().all(|&v| v < self.num_vars));
        self.equations.push(Equation { vars, rhs });
        self.equations.len() - 1
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn row(&self, eq: &Equation) -> BitRow {
        let mut r = BitRow::zeros(self.num_vars);
        for &v in &eq.vars {
            r.flip(v);
        }
        r
    }

    pub fn solve(&self) -> Solution {
        match self.eliminate(0..self.equations.len()) {
            Ok(rows) => Solution::Solved(self.back_substitute(&rows)),
            Err(origin) => {
                let subset: Vec<usize> = origin.ones().collect();
                Solution::Infeasible(self.minimize(subset))
            }
        }
    }

    /// Returns the pivot rows, or the origin set of a row reducing to `0 = 1`.
    fn eliminate(&self, subset: impl IntoIterator<Item = usize>) -> Result<Vec<PivotRow>, BitRow> {
        let mut rows: Vec<PivotRow> = Vec::new();
        let mut pivot_of = vec![usize::MAX; self.num_vars];
        for idx in subset {
            let eq = &self.equations[idx];
            let mut coeffs = self.row(eq);
            let mut rhs = eq.rhs;
            let mut origin = BitRow::zeros(self.equations.len());
            origin.flip(idx);
            while let Some(col) = coeffs.first_one() {
                let r = pivot_of[col];
                if r == usize::MAX {
                    break;
                }
                coeffs.xor_assign(&rows[r].coeffs);
                rhs ^= rows[r].rhs;
                origin.xor_assign(&rows[r].origin);
            }
            match coeffs.first_one() {
                Some(pivot) => {
                    pivot_of[pivot] = rows.len();
                    rows.push(PivotRow {
                        pivot,
                        coeffs,
                        rhs,
                        origin,
                    });
                }
                None if rhs => return Err(origin),
                None => {}
            }
        }
        Ok(rows)
    }

    fn back_substitute(&self, rows: &[PivotRow]) -> Vec<bool> {
        // Every non-pivot column of a row lies above its pivot, so rows are
        // resolved from the highest pivot down.
        let mut order: Vec<&PivotRow> = rows.iter().collect();
        order.sort_by_key(|r| std::cmp::Reverse(r.pivot));
        let mut value = vec![false; self.num_vars];
        for row in order {
            let mut v = row.rhs;
            for col in row.coeffs.ones() {
                if col != row.pivot {
                    v ^= value[col];
                }
            }
            value[row.pivot] = v;
        }
        value
    }

    /// Deletion filter: drops equations while the rest stays infeasible.
    fn minimize(&self, mut subset: Vec<usize>) -> Vec<usize> {
        let mut i = 0;
        while i < subset.len() {
            let trial: Vec<usize> = subset
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &e)| e)
                .collect();
            if self.eliminate(trial.iter().copied()).is_err() {
                subset = trial;
            } else {
                i += 1;
            }
        }
        subset
    }

    /// Whether the given equations sum to `0 = 1`.
    pub fn sums_to_contradiction(&self, subset: &[usize]) -> bool {
        let mut acc = BitRow::zeros(self.num_vars);
        let mut rhs = false;
        for &i in subset {
            acc.xor_assign(&self.row(&self.equations[i]));
            rhs ^= self.equations[i].rhs;
        }
        acc.first_one().is_none() && rhs
    }

    pub fn satisfied_by(&self, value: &[bool]) -> bool {
        self.equations
            .iter()
            .all(|eq| eq.vars.iter().fold(false, |acc, &v| acc ^ value[v]) == eq.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn simple_solve_fixes_free_variables_to_zero() {
        let mut s = System::new(4);
        s.push(vec![0, 1], true);
        s.push(vec![1, 2], false);
        match s.solve() {
            Solution::Solved(v) => {
                assert!(s.satisfied_by(&v));
                assert!(!v[3]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn odd_cycle_is_infeasible_and_certificate_is_minimal() {
        let mut s = System::new(3);
        s.push(vec![2], false); // irrelevant
        s.push(vec![0, 1], false);
        s.push(vec![1, 2], false);
        s.push(vec![0, 2], true);
        match s.solve() {
            Solution::Infeasible(c) => {
                assert_eq!(c, vec![1, 2, 3]);
                assert!(s.sums_to_contradiction(&c));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn wide_rows() {
        let n = 200;
        let mut s = System::new(n);
        for i in 0..n - 1 {
            s.push(vec![i, i + 1], i % 7 == 0);
        }
        s.push(vec![n - 1], true);
        let Solution::Solved(v) = s.solve() else { panic!() };
        assert!(s.satisfied_by(&v));
    }

    fn brute_force_feasible(s: &System) -> bool {
        (0..1u32 << s.num_vars()).any(|m| {
            let v: Vec<bool> = (0..s.num_vars()).map(|i| m >> i & 1 == 1).collect();
            s.satisfied_by(&v)
        })
    }

    proptest! {
        #[test]
        fn agrees_with_enumeration(
            eqs in prop::collection::vec((prop::collection::vec(0usize..6, 1..4), any::<bool>()), 0..12)
        ) {
            let mut s = System::new(6);
            for (vars, rhs) in eqs {
                s.push(vars, rhs);
            }
            match s.solve() {
                Solution::Solved(v) => prop_assert!(s.satisfied_by(&v)),
                Solution::Infeasible(c) => {
                    prop_assert!(!brute_force_feasible(&s));
                    prop_assert!(s.sums_to_contradiction(&c));
                    for skip in 0..c.len() {
                        let rest: Vec<usize> = c.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &e)| e).collect();
                        prop_assert!(s.eliminate(rest).is_ok());
                    }
                }
            }
        }
    }
}
