//! Exact phase-one simplex (Bland's rule) deciding feasibility of small
//! linear systems over nonnegative rational variables.

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub(crate) struct Constraint {
    pub coeffs: Vec<Q>,
    pub rel: Rel,
    pub rhs: Q,
}

/// Is `{ x ≥ 0 : every constraint holds }` nonempty?
pub(crate) fn is_feasible(num_vars: usize, constraints: &[Constraint]) -> bool {
    let rows: Vec<Constraint> = constraints
        .iter()
        .map(|c| {
            if c.rhs.is_negative() {
                let rel = match c.rel {
                    Rel::Le => Rel::Ge,
                    Rel::Ge => Rel::Le,
                    Rel::Eq => Rel::Eq,
                };
                Constraint { coeffs: c.coeffs.iter().map(|a| -a).collect(), rel, rhs: -&c.rhs }
            } else {
                c.clone()
            }
        })
        .collect();
    let m = rows.len();
    if m == 0 {
        return true;
    }

    // Columns: structural | slack/surplus | artificial | rhs
    let aux = rows.iter().filter(|r| r.rel != Rel::Eq).count();
    let arts = rows.iter().filter(|r| r.rel != Rel::Le).count();
    let width = num_vars + aux + arts;
    let mut table = vec![vec![Q::zero(); width + 1]; m];
    let mut basis = vec![0usize; m];
    let mut is_art = vec![false; width];
    let (mut next_aux, mut next_art) = (num_vars, num_vars + aux);
    for (i, row) in rows.iter().enumerate() {
        table[i][..num_vars].clone_from_slice(&row.coeffs);
        table[i][width] = row.rhs.clone();
        match row.rel {
            Rel::Le => {
                table[i][next_aux] = Q::one();
                basis[i] = next_aux;
                next_aux += 1;
            }
            Rel::Ge => {
                table[i][next_aux] = -Q::one();
                next_aux += 1;
                table[i][next_art] = Q::one();
                is_art[next_art] = true;
                basis[i] = next_art;
                next_art += 1;
            }
            Rel::Eq => {
                table[i][next_art] = Q::one();
                is_art[next_art] = true;
                basis[i] = next_art;
                next_art += 1;
            }
        }
    }
    if arts == 0 {
        return true;
    }

    loop {
        // reduced cost d_j = c_j - sum_i c_{basis i} T[i][j]
        let entering = (0..width).find(|&j| {
            let mut d = if is_art[j] { Q::one() } else { Q::zero() };
            for i in 0..m {
                if is_art[basis[i]] {
                    d -= &table[i][j];
                }
            }
            d.is_negative()
        });
        let Some(col) = entering else { break };
        let mut pivot: Option<(usize, Q)> = None;
        for i in 0..m {
            if !table[i][col].is_positive() {
                continue;
            }
            let ratio = &table[i][width] / &table[i][col];
            let better = match &pivot {
                None => true,
                Some((r, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*r]),
            };
            if better {
                pivot = Some((i, ratio));
            }
        }
        let Some((row, _)) = pivot else { break };
        let p = table[row][col].clone();
        for v in table[row].iter_mut() {
            *v /= &p;
        }
        let pivot_row = table[row].clone();
        for (i, r) in table.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= &factor * pv;
            }
        }
        basis[row] = col;
    }

    (0..m).filter(|&i| is_art[basis[i]]).all(|i| table[i][width].is_zero())
}
