//! Dense two-phase simplex over exact rationals.
//!
//! The tableau is kept in integer-preserving (fraction-free) form. Pivoting
//! follows Bland's least-index rule for both the entering and the leaving
//! variable, so the method terminates on degenerate problems and every run
//! is reproducible. Witnesses are re-checked by substitution before
//! they are returned.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::Vector;
use crate::rational::{serde_rat_opt, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rat>, rel: Relation, rhs: Rat) -> Self {
        Constraint { coeffs, rel, rhs }
    }

    pub fn holds(&self, x: &[Rat]) -> bool {
        let lhs = self
            .coeffs
            .iter()
            .zip(x)
            .fold(Rat::zero(), |acc, (a, b)| acc + a * b);
        match self.rel {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LpOutcome {
    Feasible {
        witness: Vector,
        #[serde(with = "serde_rat_opt", default)]
        value: Option<Rat>,
    },
    Infeasible,
    Unbounded {
        witness: Vector,
        direction: Vector,
    },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }

    pub fn witness(&self) -> Option<&Vector> {
        match self {
            LpOutcome::Feasible { witness, .. } | LpOutcome::Unbounded { witness, .. } => {
                Some(witness)
            }
            LpOutcome::Infeasible => None,
        }
    }

    pub fn value(&self) -> Option<&Rat> {
        match self {
            LpOutcome::Feasible { value, .. } => value.as_ref(),
            _ => None,
        }
    }
}

/// Maximize `objective · x` subject to the constraints; variables flagged in
/// `nonneg` are bounded below by zero, the rest are free.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    num_vars: usize,
    nonneg: Vec<bool>,
    constraints: Vec<Constraint>,
    objective: Option<Vec<Rat>>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            nonneg: vec![false; num_vars],
            constraints: Vec::new(),
            objective: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_nonneg(&mut self, var: usize) -> &mut Self {
        self.nonneg[var] = true;
        self
    }

    pub fn set_all_nonneg(&mut self) -> &mut Self {
        self.nonneg.iter_mut().for_each(|b| *b = true);
        self
    }

    pub fn add(&mut self, coeffs: Vec<Rat>, rel: Relation, rhs: Rat) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint::new(coeffs, rel, rhs));
        self
    }

    pub fn maximize(&mut self, objective: Vec<Rat>) -> &mut Self {
        assert_eq!(objective.len(), self.num_vars, "objective width");
        self.objective = Some(objective);
        self
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn is_feasible_point(&self, x: &[Rat]) -> bool {
        x.len() == self.num_vars
            && self
                .nonneg
                .iter()
                .zip(x)
                .all(|(&nn, v)| !nn || !v.is_negative())
            && self.constraints.iter().all(|c| c.holds(x))
    }

    /// Whether `d` is a recession direction that strictly improves the objective.
    pub fn is_improving_ray(&self, d: &[Rat]) -> bool {
        let Some(obj) = &self.objective else {
            return false;
        };
        let dot = |a: &[Rat]| a.iter().zip(d).fold(Rat::zero(), |acc, (x, y)| acc + x * y);
        let rays_ok = self.constraints.iter().all(|c| {
            let v = dot(&c.coeffs);
            match c.rel {
                Relation::Le => !v.is_positive(),
                Relation::Eq => v.is_zero(),
                Relation::Ge => !v.is_negative(),
            }
        });
        let nonneg_ok = self
            .nonneg
            .iter()
            .zip(d)
            .all(|(&nn, v)| !nn || !v.is_negative());
        rays_ok && nonneg_ok && dot(obj).is_positive()
    }

    pub fn solve(&self) -> LpOutcome {
        let out = Tableau::build(self).run(self);
        match &out {
            LpOutcome::Feasible { witness, .. } => {
                assert!(self.is_feasible_point(&witness.0), "simplex witness failed substitution")
            }
            LpOutcome::Unbounded { witness, direction } => {
                assert!(self.is_feasible_point(&witness.0), "simplex witness failed substitution");
                assert!(self.is_improving_ray(&direction.0), "simplex ray failed substitution");
            }
            LpOutcome::Infeasible => {}
        }
        out
    }
}

/// Feasibility (and optional maximization) for `{y : A_i·y ≤ b_i, or = b_i
/// where eq_mask[i]}` over free variables.
pub fn lp_feasible(a: &[Vec<Rat>], b: &[Rat], eq_mask: &[bool], objective: Option<&[Rat]>) -> LpOutcome {
    let d = a.first().map_or_else(|| objective.map_or(0, <[Rat]>::len), Vec::len);
    let mut lp = LinearProgram::new(d);
    for ((row, rhs), &eq) in a.iter().zip(b).zip(eq_mask) {
        let rel = if eq { Relation::Eq } else { Relation::Le };
        lp.add(row.clone(), rel, rhs.clone());
    }
    if let Some(c) = objective {
        lp.maximize(c.to_vec());
    }
    lp.solve()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ColKind {
    /// `x_j = +col` or the positive half of a split free variable.
    Pos(usize),
    Neg(usize),
    Slack,
    Artificial,
}

/// Integer-preserving tableau: the rational tableau is `rows / d`, and the
/// reduced-cost row is `obj / (obj_scale · d)`. Every entry is a minor of the
/// integer constraint matrix, so pivots need exact divisions but no gcds.
struct Tableau {
    rows: Vec<Vec<BigInt>>,
    obj: Vec<BigInt>,
    obj_scale: BigInt,
    d: BigInt,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
}

fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

/// `x · l` for `l` a multiple of the denominator of `x`.
fn scaled(x: &Rat, l: &BigInt) -> BigInt {
    x.numer() * (l / x.denom())
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut kinds = Vec::new();
        let mut var_cols = Vec::with_capacity(lp.num_vars);
        for j in 0..lp.num_vars {
            let pos = kinds.len();
            kinds.push(ColKind::Pos(j));
            let neg = if lp.nonneg[j] {
                None
            } else {
                kinds.push(ColKind::Neg(j));
                Some(pos + 1)
            };
            var_cols.push((pos, neg));
        }
        let slack_of: Vec<Option<usize>> = lp
            .constraints
            .iter()
            .map(|c| {
                (c.rel != Relation::Eq).then(|| {
                    kinds.push(ColKind::Slack);
                    kinds.len() - 1
                })
            })
            .collect();

        let m = lp.constraints.len();
        let mut dense: Vec<Vec<BigInt>> = Vec::with_capacity(m);
        let mut needs_art = Vec::with_capacity(m);
        let mut basis = vec![usize::MAX; m];
        for (i, c) in lp.constraints.iter().enumerate() {
            // clearing denominators rescales the row; the slack keeps
            // coefficient ±1, which only rescales that slack variable
            let l = lcm_of_denominators(c.coeffs.iter().chain(std::iter::once(&c.rhs)));
            let mut row = vec![BigInt::zero(); kinds.len()];
            for (j, a) in c.coeffs.iter().enumerate() {
                let (p, n) = var_cols[j];
                let a = scaled(a, &l);
                if let Some(n) = n {
                    row[n] = -&a;
                }
                row[p] = a;
            }
            if let Some(s) = slack_of[i] {
                row[s] = if c.rel == Relation::Le { BigInt::one() } else { -BigInt::one() };
            }
            let mut rhs = scaled(&c.rhs, &l);
            if rhs.is_negative() {
                row.iter_mut().for_each(|x| *x = -&*x);
                rhs = -rhs;
            }
            match slack_of[i] {
                Some(s) if row[s].is_one() => {
                    basis[i] = s;
                    needs_art.push(false);
                }
                _ => needs_art.push(true),
            }
            row.push(rhs);
            dense.push(row);
        }
        let n_struct = kinds.len();
        let n_art = needs_art.iter().filter(|&&b| b).count();
        let total = n_struct + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut next_art = n_struct;
        for (i, mut row) in dense.into_iter().enumerate() {
            let rhs = row.pop().expect("rhs");
            row.resize(total, BigInt::zero());
            if needs_art[i] {
                row[next_art] = BigInt::one();
                basis[i] = next_art;
                next_art += 1;
            }
            row.push(rhs);
            rows.push(row);
        }
        kinds.extend(std::iter::repeat_n(ColKind::Artificial, n_art));
        Tableau {
            rows,
            obj: vec![BigInt::zero(); total + 1],
            obj_scale: BigInt::one(),
            d: BigInt::one(),
            basis,
            kinds,
        }
    }

    fn ncols(&self) -> usize {
        self.kinds.len()
    }

    /// Installs the reduced-cost row `c_B B^{-1} A - c` for maximizing `cost`.
    fn set_objective(&mut self, cost: &[Rat]) {
        let n = self.ncols();
        let l = lcm_of_denominators(cost);
        let c: Vec<BigInt> = cost.iter().map(|x| scaled(x, &l)).collect();
        let mut obj: Vec<BigInt> = (0..=n)
            .map(|j| if j < n { -(&c[j] * &self.d) } else { BigInt::zero() })
            .collect();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &c[b];
            if cb.is_zero() {
                continue;
            }
            for (o, x) in obj.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o += cb * x;
                }
            }
        }
        self.obj = obj;
        self.obj_scale = l;
    }

    /// Objective value `obj[rhs] / (obj_scale · d)`.
    fn objective_value(&self) -> Rat {
        Rat::new(self.obj[self.ncols()].clone(), &self.obj_scale * &self.d)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        let prow = self.rows[r].clone();
        let d_is_one = self.d.is_one();
        let update = |row: &mut Vec<BigInt>, d: &BigInt| {
            let f = row[c].clone();
            for (x, q) in row.iter_mut().zip(&prow) {
                let mut v = &*x * &p;
                if !f.is_zero() && !q.is_zero() {
                    v -= &f * q;
                }
                if !d_is_one && !v.is_zero() {
                    debug_assert!((&v % d).is_zero(), "inexact integer pivot");
                    v /= d;
                }
                *x = v;
            }
        };
        let d = self.d.clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                update(row, &d);
            }
        }
        update(&mut self.obj, &d);
        self.d = p;
        if self.d.is_negative() {
            for row in self.rows.iter_mut().chain(std::iter::once(&mut self.obj)) {
                row.iter_mut().for_each(|x| *x = -&*x);
            }
            self.d = -&self.d;
        }
        self.basis[r] = c;
    }

    /// Runs Bland-rule pivots to optimality. Returns the entering column of an
    /// unbounded ray if one is found.
    fn optimize(&mut self, allowed: impl Fn(usize) -> bool) -> Option<usize> {
        let rhs = self.ncols();
        loop {
            let c = (0..self.ncols()).find(|&j| allowed(j) && self.obj[j].is_negative())?;
            // smallest rhs/row[c] over rows with row[c] > 0, ties to the
            // smallest basic index; compared by cross-multiplication
            let mut best: Option<usize> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(bi) => {
                        let (a, b) = (&row[rhs] * &self.rows[bi][c], &self.rows[bi][rhs] * &row[c]);
                        a < b || (a == b && self.basis[i] < self.basis[bi])
                    }
                };
                if better {
                    best = Some(i);
                }
            }
            match best {
                Some(r) => self.pivot(r, c),
                None => return Some(c),
            }
        }
    }

    fn value(&self, x: &BigInt) -> Rat {
        Rat::new(x.clone(), self.d.clone())
    }

    fn column_values(&self) -> Vec<Rat> {
        let rhs = self.ncols();
        let mut vals = vec![Rat::zero(); self.ncols()];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            vals[b] = self.value(&row[rhs]);
        }
        vals
    }

    fn to_vars(&self, cols: &[Rat], n: usize) -> Vector {
        let mut x = Vector::zeros(n);
        for (c, k) in self.kinds.iter().enumerate() {
            match *k {
                ColKind::Pos(j) => x.0[j] += &cols[c],
                ColKind::Neg(j) => x.0[j] -= &cols[c],
                _ => {}
            }
        }
        x
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let n = self.ncols();
        let is_art = |k: &ColKind| *k == ColKind::Artificial;
        if self.kinds.iter().any(is_art) {
            let cost: Vec<Rat> = self
                .kinds
                .iter()
                .map(|k| if is_art(k) { -Rat::one() } else { Rat::zero() })
                .collect();
            self.set_objective(&cost);
            self.optimize(|_| true);
            if self.objective_value().is_negative() {
                return LpOutcome::Infeasible;
            }
            // Drive zero-level artificials out of the basis. Rows where that
            // is impossible are redundant; their artificial stays basic at
            // zero and no later pivot touches them.
            for i in 0..self.rows.len() {
                if self.kinds[self.basis[i]] == ColKind::Artificial {
                    let col = (0..n).find(|&j| !is_art(&self.kinds[j]) && !self.rows[i][j].is_zero());
                    if let Some(j) = col {
                        self.pivot(i, j);
                    }
                }
            }
        }
        let kinds = self.kinds.clone();
        let allowed = |j: usize| kinds[j] != ColKind::Artificial;
        let Some(objective) = &lp.objective else {
            let witness = self.to_vars(&self.column_values(), lp.num_vars);
            return LpOutcome::Feasible { witness, value: None };
        };
        let cost: Vec<Rat> = self
            .kinds
            .iter()
            .map(|k| match *k {
                ColKind::Pos(j) => objective[j].clone(),
                ColKind::Neg(j) => -objective[j].clone(),
                _ => Rat::zero(),
            })
            .collect();
        self.set_objective(&cost);
        let unbounded = self.optimize(allowed);
        let cols = self.column_values();
        let witness = self.to_vars(&cols, lp.num_vars);
        match unbounded {
            None => {
                let value = objective
                    .iter()
                    .zip(&witness.0)
                    .fold(Rat::zero(), |acc, (c, x)| acc + c * x);
                LpOutcome::Feasible { witness, value: Some(value) }
            }
            Some(c) => {
                let mut dir = vec![Rat::zero(); n];
                dir[c] = Rat::one();
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    dir[b] = -self.value(&row[c]);
                }
                let direction = self.to_vars(&dir, lp.num_vars);
                LpOutcome::Unbounded { witness, direction }
            }
        }
    }
}
