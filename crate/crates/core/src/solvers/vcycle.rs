use crate::exec::Execution;
use crate::hierarchy::Hierarchy;

/// One V-cycle on `h` for `A x = b` starting from `x`.
pub fn v_cycle(h: &Hierarchy, b: &[f64], x: &[f64]) -> Vec<f64> {
    let mut x = x.to_vec();
    cycle(h, 0, b, &mut x, Execution::default());
    x
}

fn cycle(h: &Hierarchy, level: usize, b: &[f64], x: &mut [f64], exec: Execution) {
    let lv = &h.levels[level];
    let (Some(p), Some(r)) = (&lv.p, &lv.r) else {
        let sol = h.coarse_lu.solve(b).expect("coarse factor matches the coarsest operator");
        x.copy_from_slice(&sol);
        return;
    };
    lv.smoother.apply(exec, &lv.a, b, x);
    let res = lv.a.residual(exec, b, x).expect("level dimensions are consistent");
    let bc = r.spmv_with(exec, &res).expect("restriction matches level size");
    let mut xc = vec![0.0; bc.len()];
    cycle(h, level + 1, &bc, &mut xc, exec);
    let corr = p.spmv_with(exec, &xc).expect("prolongator matches coarse size");
    for (xi, ci) in x.iter_mut().zip(&corr) {
        *xi += ci;
    }
    lv.smoother.apply(exec, &lv.a, b, x);
}

/// The V-cycle from a zero initial guess as a linear operator `r -> M^-1 r`.
#[derive(Debug, Clone, Copy)]
pub struct AmgPreconditioner<'a> {
    pub hierarchy: &'a Hierarchy,
}

impl<'a> AmgPreconditioner<'a> {
    pub fn new(hierarchy: &'a Hierarchy) -> Self {
        Self { hierarchy }
    }

    pub fn apply(&self, r: &[f64]) -> Vec<f64> {
        v_cycle(self.hierarchy, r, &vec![0.0; r.len()])
    }
}
