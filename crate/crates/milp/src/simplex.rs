//! Dense two-phase primal simplex with Bland's rule.
//!
//! Intended for the small LPs that appear inside the brute-force oracle; it is
//! exact enough there and shares no code with the production backend.

use crate::model::Sense;

#[derive(Clone, Debug, Default)]
pub struct LpProblem {
    pub cost: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<(Vec<(usize, f64)>, Sense, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

const PIVOT_TOL: f64 = 1e-10;
const COST_TOL: f64 = 1e-10;
const MAX_ITER: usize = 200_000;

/// Each original variable is `offset + sum(sign * column)`.
struct VarMap {
    offset: f64,
    cols: Vec<(usize, f64)>,
}

struct Tableau {
    m: usize,
    n: usize,
    a: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * (self.n + 1) + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.a[i * (self.n + 1) + self.n]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.n + 1;
        let p = self.a[r * w + c];
        for j in 0..w {
            self.a[r * w + j] /= p;
        }
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.a[i * w + c];
            if f != 0.0 {
                for j in 0..w {
                    let v = self.a[i * w + j] - f * self.a[r * w + j];
                    self.a[i * w + j] = if v.abs() < 1e-13 { 0.0 } else { v };
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimise `cost` over the columns flagged in `allowed`. Returns false when unbounded.
    fn optimise(&mut self, cost: &[f64], allowed: &[bool]) -> bool {
        for _ in 0..MAX_ITER {
            let mut entering = None;
            for j in 0..self.n {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let d = cost[j] - (0..self.m).map(|i| cost[self.basis[i]] * self.at(i, j)).sum::<f64>();
                if d < -COST_TOL {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let aij = self.at(i, c);
                if aij > PIVOT_TOL {
                    let ratio = self.rhs(i) / aij;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((r, best)) => {
                            if ratio < best - 1e-12 || (ratio <= best + 1e-12 && self.basis[i] < self.basis[r]) {
                                Some((i, ratio))
                            } else {
                                Some((r, best))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
        true
    }
}

pub fn solve_lp(p: &LpProblem) -> LpOutcome {
    let nvar = p.cost.len();
    let mut ncols = 0;
    let mut maps = Vec::with_capacity(nvar);
    let mut bound_rows: Vec<(Vec<(usize, f64)>, Sense, f64)> = Vec::new();
    for j in 0..nvar {
        let (l, u) = (p.lower[j], p.upper[j]);
        if l > u {
            return LpOutcome::Infeasible;
        }
        if l.is_finite() && l == u {
            maps.push(VarMap { offset: l, cols: vec![] });
        } else if l.is_finite() {
            let c = ncols;
            ncols += 1;
            if u.is_finite() {
                bound_rows.push((vec![(c, 1.0)], Sense::Le, u - l));
            }
            maps.push(VarMap { offset: l, cols: vec![(c, 1.0)] });
        } else if u.is_finite() {
            let c = ncols;
            ncols += 1;
            maps.push(VarMap { offset: u, cols: vec![(c, -1.0)] });
        } else {
            let c = ncols;
            ncols += 2;
            maps.push(VarMap { offset: 0.0, cols: vec![(c, 1.0), (c + 1, -1.0)] });
        }
    }

    let mut rows: Vec<(Vec<f64>, Sense, f64)> = Vec::new();
    for (terms, sense, rhs) in &p.rows {
        let mut dense = vec![0.0; ncols];
        let mut b = *rhs;
        for &(j, a) in terms {
            b -= a * maps[j].offset;
            for &(c, s) in &maps[j].cols {
                dense[c] += a * s;
            }
        }
        if dense.iter().all(|&v| v == 0.0) {
            let ok = match sense {
                Sense::Le => b >= -1e-9,
                Sense::Ge => b <= 1e-9,
                Sense::Eq => b.abs() <= 1e-9,
            };
            if !ok {
                return LpOutcome::Infeasible;
            }
            continue;
        }
        rows.push((dense, *sense, b));
    }
    for (terms, sense, rhs) in bound_rows {
        let mut dense = vec![0.0; ncols];
        for (c, a) in terms {
            dense[c] = a;
        }
        rows.push((dense, sense, rhs));
    }
    for row in rows.iter_mut() {
        if row.2 < 0.0 {
            row.0.iter_mut().for_each(|v| *v = -*v);
            row.2 = -row.2;
            row.1 = match row.1 {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Sense::Le).count();
    let n = ncols + n_slack + n_art;
    let w = n + 1;
    let mut t = Tableau { m, n, a: vec![0.0; m * w], basis: vec![0; m] };
    let (mut s_next, mut a_next) = (ncols, ncols + n_slack);
    for (i, (dense, sense, b)) in rows.iter().enumerate() {
        t.a[i * w..i * w + ncols].copy_from_slice(dense);
        t.a[i * w + n] = *b;
        match sense {
            Sense::Le => {
                t.a[i * w + s_next] = 1.0;
                t.basis[i] = s_next;
                s_next += 1;
            }
            Sense::Ge => {
                t.a[i * w + s_next] = -1.0;
                s_next += 1;
                t.a[i * w + a_next] = 1.0;
                t.basis[i] = a_next;
                a_next += 1;
            }
            Sense::Eq => {
                t.a[i * w + a_next] = 1.0;
                t.basis[i] = a_next;
                a_next += 1;
            }
        }
    }
    let is_art = |j: usize| j >= ncols + n_slack;

    if n_art > 0 {
        let cost1: Vec<f64> = (0..n).map(|j| if is_art(j) { 1.0 } else { 0.0 }).collect();
        t.optimise(&cost1, &vec![true; n]);
        let infeas: f64 = (0..m).filter(|&i| is_art(t.basis[i])).map(|i| t.rhs(i)).sum();
        let scale = 1.0 + rows.iter().map(|r| r.2.abs()).fold(0.0, f64::max);
        if infeas > 1e-9 * scale {
            return LpOutcome::Infeasible;
        }
        for i in 0..m {
            if is_art(t.basis[i]) {
                if let Some(j) = (0..ncols + n_slack).find(|&j| t.at(i, j).abs() > 1e-9) {
                    t.pivot(i, j);
                }
            }
        }
    }

    let mut cost2 = vec![0.0; n];
    let mut obj_const = 0.0;
    for j in 0..nvar {
        obj_const += p.cost[j] * maps[j].offset;
        for &(c, s) in &maps[j].cols {
            cost2[c] += p.cost[j] * s;
        }
    }
    let allowed: Vec<bool> = (0..n).map(|j| !is_art(j)).collect();
    if !t.optimise(&cost2, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut colval = vec![0.0; n];
    for i in 0..m {
        colval[t.basis[i]] = t.rhs(i);
    }
    let x: Vec<f64> = maps
        .iter()
        .map(|mp| mp.offset + mp.cols.iter().map(|&(c, s)| s * colval[c]).sum::<f64>())
        .collect();
    let objective = obj_const + (0..ncols).map(|c| cost2[c] * colval[c]).sum::<f64>();
    LpOutcome::Optimal { x, objective }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(cost: &[f64], lower: &[f64], upper: &[f64], rows: Vec<(Vec<(usize, f64)>, Sense, f64)>) -> LpProblem {
        LpProblem { cost: cost.to_vec(), lower: lower.to_vec(), upper: upper.to_vec(), rows }
    }

    #[test]
    fn textbook_lp() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let p = lp(
            &[-3.0, -5.0],
            &[0.0, 0.0],
            &[f64::INFINITY, f64::INFINITY],
            vec![
                (vec![(0, 1.0)], Sense::Le, 4.0),
                (vec![(1, 2.0)], Sense::Le, 12.0),
                (vec![(0, 3.0), (1, 2.0)], Sense::Le, 18.0),
            ],
        );
        match solve_lp(&p) {
            LpOutcome::Optimal { x, objective } => {
                assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 6.0).abs() < 1e-9);
                assert!((objective + 36.0).abs() < 1e-9);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn equality_ge_and_free_variables() {
        // min x - y, x + y = 2, x - y >= -4, y free, x in [-1, 5] -> x=-1, y=3, obj -4
        let p = lp(
            &[1.0, -1.0],
            &[-1.0, f64::NEG_INFINITY],
            &[5.0, f64::INFINITY],
            vec![(vec![(0, 1.0), (1, 1.0)], Sense::Eq, 2.0), (vec![(0, 1.0), (1, -1.0)], Sense::Ge, -4.0)],
        );
        match solve_lp(&p) {
            LpOutcome::Optimal { x, objective } => {
                assert!((objective + 4.0).abs() < 1e-9, "{x:?}");
                assert!((x[0] + x[1] - 2.0).abs() < 1e-9);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let inf = lp(&[1.0], &[0.0], &[1.0], vec![(vec![(0, 1.0)], Sense::Ge, 2.0)]);
        assert_eq!(solve_lp(&inf), LpOutcome::Infeasible);
        let unb = lp(&[-1.0], &[0.0], &[f64::INFINITY], vec![(vec![(0, 1.0)], Sense::Ge, 1.0)]);
        assert_eq!(solve_lp(&unb), LpOutcome::Unbounded);
    }

    #[test]
    fn upper_bounded_only_variable() {
        // min -x with x <= 3 and x >= -inf, plus x >= 1 -> x = 3
        let p = lp(&[-1.0], &[f64::NEG_INFINITY], &[3.0], vec![(vec![(0, 1.0)], Sense::Ge, 1.0)]);
        match solve_lp(&p) {
            LpOutcome::Optimal { x, .. } => assert!((x[0] - 3.0).abs() < 1e-12),
            o => panic!("{o:?}"),
        }
    }
}
