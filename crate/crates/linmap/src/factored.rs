//! Staged operators on tensor-factored spaces.
//!
//! A [`FactoredOp`] is a product of maps, each acting on a contiguous block of
//! legs with identities elsewhere. It is applied without forming the
//! Kronecker products.

use crate::map::LinMap;
use crate::shape::SpaceShape;
use crate::LinError;

#[derive(Clone, Debug)]
pub struct Stage {
    pub map: LinMap,
    /// Index of the first leg the map acts on.
    pub leg: usize,
}

#[derive(Clone, Debug)]
pub struct FactoredOp {
    pub input: SpaceShape,
    pub stages: Vec<Stage>,
}

/// How a plan applies a stage.
#[derive(Clone, Debug)]
pub struct PlannedStage {
    pub map: LinMap,
    pub a: usize,
    pub b: usize,
    pub cost: usize,
}

impl FactoredOp {
    pub fn new(input: SpaceShape) -> FactoredOp {
        FactoredOp { input, stages: Vec::new() }
    }

    /// Appends a stage (applied after the existing ones).
    pub fn then(mut self, leg: usize, map: LinMap) -> Result<FactoredOp, LinError> {
        let shape = self.output()?;
        let k = map.dom().len();
        if leg + k > shape.len() || shape.legs()[leg..leg + k] != *map.dom().legs() {
            return Err(LinError::ShapeMismatch(format!(
                "stage with domain {} does not fit legs {leg}.. of {shape}",
                map.dom()
            )));
        }
        self.stages.push(Stage { map, leg });
        Ok(self)
    }

    fn shapes(&self) -> Result<Vec<SpaceShape>, LinError> {
        let mut cur = self.input.clone();
        let mut out = vec![cur.clone()];
        for st in &self.stages {
            let k = st.map.dom().len();
            let legs = cur.legs();
            if st.leg + k > legs.len() || legs[st.leg..st.leg + k] != *st.map.dom().legs() {
                return Err(LinError::ShapeMismatch(format!("stage domain {} vs {cur}", st.map.dom())));
            }
            let mut v = legs[..st.leg].to_vec();
            v.extend_from_slice(st.map.cod().legs());
            v.extend_from_slice(&legs[st.leg + k..]);
            cur = SpaceShape(v);
            out.push(cur.clone());
        }
        Ok(out)
    }

    pub fn output(&self) -> Result<SpaceShape, LinError> {
        Ok(self.shapes()?.pop().unwrap())
    }

    /// Stages in the given order, with bypass dimensions and costs.
    pub fn naive_plan(&self) -> Result<Vec<PlannedStage>, LinError> {
        let shapes = self.shapes()?;
        Ok(self
            .stages
            .iter()
            .zip(&shapes)
            .map(|(st, sh)| {
                let k = st.map.dom().len();
                let a = sh.span(0, st.leg);
                let b = sh.span(st.leg + k, sh.len());
                PlannedStage { map: st.map.clone(), a, b, cost: st.map.nnz() * a * b }
            })
            .collect())
    }

    /// Greedy plan.
    ///
    /// Maximal runs of pairwise commuting stages (shape preserving, disjoint
    /// legs) are reordered by ascending cost, and two adjacent-leg stages in a
    /// run are fused into one Kronecker stage when that lowers the flop count.
    pub fn plan(&self) -> Result<Vec<PlannedStage>, LinError> {
        self.shapes()?;
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.stages.len() {
            let mut j = i + 1;
            while j < self.stages.len()
                && self.stages[i..j].iter().all(|s| commutes(s, &self.stages[j]))
                && square(&self.stages[j])
                && square(&self.stages[i])
            {
                j += 1;
            }
            let mut run: Vec<Stage> = self.stages[i..j].to_vec();
            if run.len() > 1 {
                run.sort_by_key(|s| s.leg);
                run = fuse_run(run, &shape_at(self, i)?);
                let sh = shape_at(self, i)?;
                run.sort_by_key(|s| stage_cost(s, &sh));
            }
            let sh_before = shape_at(self, i)?;
            let mut sh = sh_before;
            for st in run {
                let k = st.map.dom().len();
                let a = sh.span(0, st.leg);
                let b = sh.span(st.leg + k, sh.len());
                out.push(PlannedStage { cost: st.map.nnz() * a * b, map: st.map.clone(), a, b });
                let mut v = sh.legs()[..st.leg].to_vec();
                v.extend_from_slice(st.map.cod().legs());
                v.extend_from_slice(&sh.legs()[st.leg + k..]);
                sh = SpaceShape(v);
            }
            i = j;
        }
        Ok(out)
    }

    /// `op ∘ x` using the greedy plan.
    pub fn apply(&self, x: &LinMap) -> Result<LinMap, LinError> {
        run_post(&self.plan()?, x, &self.input, &self.output()?)
    }

    /// `op ∘ x` with stages in their given order.
    pub fn apply_naive(&self, x: &LinMap) -> Result<LinMap, LinError> {
        run_post(&self.naive_plan()?, x, &self.input, &self.output()?)
    }

    /// `x ∘ op`.
    pub fn precompose(&self, x: &LinMap) -> Result<LinMap, LinError> {
        let plan = self.plan()?;
        let out_shape = self.output()?;
        if x.cols() != out_shape.dim() {
            return Err(LinError::ShapeMismatch(format!("precompose: {} columns vs {out_shape}", x.cols())));
        }
        let mut cur = x.clone();
        for st in plan.iter().rev() {
            cur = cur.precompose_block(st.a, &st.map, st.b)?;
        }
        cur.reshape(x.cod().clone(), self.input.clone())
    }

    /// The fully materialized operator, for oracle comparisons.
    pub fn materialize(&self) -> Result<LinMap, LinError> {
        let shapes = self.shapes()?;
        let mut acc = LinMap::identity(self.input.clone());
        for (st, sh) in self.stages.iter().zip(&shapes) {
            let k = st.map.dom().len();
            let left = LinMap::identity(SpaceShape(sh.legs()[..st.leg].to_vec()));
            let right = LinMap::identity(SpaceShape(sh.legs()[st.leg + k..].to_vec()));
            let full = left.kron(&st.map).kron(&right);
            acc = full.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn total_cost(plan: &[PlannedStage]) -> usize {
        plan.iter().map(|p| p.cost).sum()
    }
}

fn run_post(plan: &[PlannedStage], x: &LinMap, input: &SpaceShape, output: &SpaceShape) -> Result<LinMap, LinError> {
    if x.rows() != input.dim() {
        return Err(LinError::ShapeMismatch(format!("apply: {} rows vs {input}", x.rows())));
    }
    let mut cur = x.clone();
    for st in plan {
        cur = cur.apply_block(st.a, &st.map, st.b)?;
    }
    cur.reshape(output.clone(), x.dom().clone())
}

fn square(s: &Stage) -> bool {
    s.map.dom() == s.map.cod()
}

fn commutes(s: &Stage, t: &Stage) -> bool {
    let (a0, a1) = (s.leg, s.leg + s.map.dom().len());
    let (b0, b1) = (t.leg, t.leg + t.map.dom().len());
    a1 <= b0 || b1 <= a0
}

fn shape_at(op: &FactoredOp, i: usize) -> Result<SpaceShape, LinError> {
    Ok(op.shapes()?.swap_remove(i))
}

fn stage_cost(s: &Stage, sh: &SpaceShape) -> usize {
    let k = s.map.dom().len();
    s.map.nnz() * sh.span(0, s.leg) * sh.span(s.leg + k, sh.len())
}

/// Fuses neighbouring stages `s`, `t` (sorted by leg, `t` starting where `s`
/// ends) into `s ⊗ t` whenever the fused stage is cheaper than the pair.
fn fuse_run(run: Vec<Stage>, sh: &SpaceShape) -> Vec<Stage> {
    let mut out: Vec<Stage> = Vec::new();
    for st in run {
        if let Some(last) = out.last() {
            let end = last.leg + last.map.dom().len();
            if end == st.leg {
                let fused_nnz = last.map.nnz() * st.map.nnz();
                let span = |s: &Stage| sh.span(s.leg, s.leg + s.map.dom().len());
                let outer = sh.span(0, last.leg) * sh.span(st.leg + st.map.dom().len(), sh.len());
                let pair = (last.map.nnz() * span(&st) + st.map.nnz() * span(last)) * outer;
                if fused_nnz * outer < pair {
                    let last = out.pop().unwrap();
                    out.push(Stage { map: last.map.kron(&st.map), leg: last.leg });
                    continue;
                }
            }
        }
        out.push(st);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use cyclo::CycScalar;

    fn mat(r: usize, c: usize, seed: i64) -> LinMap {
        LinMap::from_fn(SpaceShape::flat(r), SpaceShape::flat(c), |i, j| {
            CycScalar::int((seed * 31 + (i * 7 + j * 13) as i64) % 5 - 2)
        })
    }

    #[test]
    fn single_stage_equals_compose() {
        let m = mat(3, 3, 1);
        let op = FactoredOp::new(SpaceShape::flat(3)).then(0, m.clone()).unwrap();
        let x = mat(3, 2, 4);
        assert_eq!(op.apply(&x).unwrap(), &m * &x);
    }

    #[test]
    fn disjoint_stages_commute() {
        let f = mat(2, 2, 2);
        let g = mat(3, 3, 3);
        let sh = SpaceShape::new(&[2, 3]);
        let x = mat(6, 4, 5).reshape(sh.clone(), SpaceShape::flat(4)).unwrap();
        let a = FactoredOp::new(sh.clone()).then(0, f.clone()).unwrap().then(1, g.clone()).unwrap();
        let b = FactoredOp::new(sh).then(1, g).unwrap().then(0, f).unwrap();
        assert_eq!(a.apply(&x).unwrap(), b.apply(&x).unwrap());
        assert_eq!(a.apply(&x).unwrap(), a.apply_naive(&x).unwrap());
    }

    #[test]
    fn permutation_stages_fuse() {
        let p = LinMap::flip(2, 2).reshape(SpaceShape::flat(4), SpaceShape::flat(4)).unwrap();
        let sh = SpaceShape::new(&[4, 4, 3]);
        let op = FactoredOp::new(sh.clone()).then(0, p.clone()).unwrap().then(1, p).unwrap();
        let plan = op.plan().unwrap();
        assert_eq!(plan.len(), 1);
        assert!(FactoredOp::total_cost(&plan) < FactoredOp::total_cost(&op.naive_plan().unwrap()));
        let x = mat(48, 2, 7).reshape(sh, SpaceShape::flat(2)).unwrap();
        assert_eq!(op.apply(&x).unwrap(), op.materialize().unwrap().compose(&x).unwrap());
    }
}
