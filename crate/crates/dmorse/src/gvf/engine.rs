//! Level digraphs: the per-dimension directed graphs whose paths are the
//! (co-)trajectories of a discrete vector field.
//!
//! Node convention: `0..n_upper` are the q-simplices in canonical order,
//! `n_upper..n_upper+n_lower` the (q-1)-simplices. Edge weights are the
//! incidence signs described in the parent module.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::complex::{incidence, Simplex, SimplicialComplex};
use crate::gvf::DiscreteVectorField;

pub(crate) struct LevelDigraph {
    q: usize,
    n_upper: usize,
    succ: Vec<Vec<(usize, i32)>>,
    topo: Option<Vec<usize>>,
}

impl LevelDigraph {
    /// Digraph of V-trajectories at level `q` (uppers `S_q`, lowers `S_{q-1}`).
    pub fn forward(complex: &SimplicialComplex, field: &DiscreteVectorField, q: usize) -> Self {
        assert!(q >= 1, "level digraphs live between q and q-1");
        let uppers = complex.simplices(q as isize);
        let lowers = complex.simplices(q as isize - 1);
        let n_upper = uppers.len();
        let mut succ = vec![Vec::new(); n_upper + lowers.len()];
        for (b, beta) in uppers.iter().enumerate() {
            let partner = field.partner_down(beta);
            for (i, alpha) in beta.facets().enumerate() {
                if partner == Some(&alpha) {
                    continue;
                }
                let a = complex.position(&alpha).expect("complex is downward closed");
                let sign = if i % 2 == 0 { 1 } else { -1 };
                succ[b].push((n_upper + a, sign));
            }
        }
        for (alpha, beta) in field.pairs() {
            if beta.dim() != q {
                continue;
            }
            let a = complex.position(alpha).expect("validated field");
            let b = complex.position(beta).expect("validated field");
            succ[n_upper + a].push((b, -incidence(beta, alpha)));
        }
        let topo = kahn(&succ);
        Self {
            q,
            n_upper,
            succ,
            topo,
        }
    }

    /// Digraph of co-V-trajectories at level `q` (sources among `S_{q-1}`).
    /// Built from the co-trajectory step rules directly: a coface edge
    /// `gamma -> rho` with weight `<rho, gamma>` for every cofacet except
    /// the matched partner, and a matched descent `rho -> gamma` with weight
    /// `-<rho, gamma>` for every pair `(gamma, rho)` of the field.
    pub fn co(complex: &SimplicialComplex, field: &DiscreteVectorField, q: usize) -> Self {
        assert!(q >= 1, "level digraphs live between q and q-1");
        let uppers = complex.simplices(q as isize);
        let lowers = complex.simplices(q as isize - 1);
        let n_upper = uppers.len();
        let mut succ = vec![Vec::new(); n_upper + lowers.len()];
        for (r, rho) in uppers.iter().enumerate() {
            for gamma in rho.facets() {
                let g = complex.position(&gamma).expect("complex is downward closed");
                if field.partner_up(&gamma) == Some(rho) {
                    succ[r].push((n_upper + g, -incidence(rho, &gamma)));
                } else {
                    succ[n_upper + g].push((r, incidence(rho, &gamma)));
                }
            }
        }
        let topo = kahn(&succ);
        Self {
            q,
            n_upper,
            succ,
            topo,
        }
    }

    pub fn upper_node(&self, position: usize) -> usize {
        position
    }

    pub fn lower_node(&self, position: usize) -> usize {
        self.n_upper + position
    }

    pub fn topo(&self) -> Option<&[usize]> {
        self.topo.as_deref()
    }


    /// Maps node ids back to simplices of the complex.
    pub fn nodes_to_simplices(
        &self,
        complex: &SimplicialComplex,
        nodes: &[usize],
    ) -> Vec<Simplex> {
        nodes
            .iter()
            .map(|&n| {
                if n < self.n_upper {
                    complex.simplices(self.q as isize)[n].clone()
                } else {
                    complex.simplices(self.q as isize - 1)[n - self.n_upper].clone()
                }
            })
            .collect()
    }

    /// Weighted path sum and path count from `source` to every node, in one
    /// pass over the topological order. `None` when the digraph has a cycle.
    pub fn path_sums(&self, source: usize) -> Option<Vec<(BigInt, BigUint)>> {
        let order = self.topo.as_ref()?;
        let mut acc: Vec<(BigInt, BigUint)> =
            vec![(BigInt::zero(), BigUint::zero()); self.succ.len()];
        acc[source] = (BigInt::one(), BigUint::one());
        for &u in order {
            if acc[u].1.is_zero() {
                continue;
            }
            let (w, c) = acc[u].clone();
            for &(v, sign) in &self.succ[u] {
                acc[v].0 += &w * sign;
                acc[v].1 += &c;
            }
        }
        Some(acc)
    }

    /// Finds one directed cycle, returned as a node sequence without the
    /// repeated endpoint. Iterative DFS with an explicit stack.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let n = self.succ.len();
        let mut color = vec![WHITE; n];
        for start in 0..n {
            if color[start] != WHITE {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            color[start] = GRAY;
            while let Some(&mut (u, ref mut idx)) = stack.last_mut() {
                if *idx < self.succ[u].len() {
                    let (v, _) = self.succ[u][*idx];
                    *idx += 1;
                    match color[v] {
                        WHITE => {
                            color[v] = GRAY;
                            stack.push((v, 0));
                        }
                        GRAY => {
                            // Cycle: slice of the stack from v to u.
                            let from = stack.iter().position(|&(n, _)| n == v)
                                .expect("gray node is on the stack");
                            return Some(stack[from..].iter().map(|&(n, _)| n).collect());
                        }
                        _ => {}
                    }
                } else {
                    color[u] = BLACK;
                    stack.pop();
                }
            }
        }
        None
    }

    /// All directed paths from `source` to `target`, as node sequences.
    /// Errs (with the partial count) once more than `limit` paths exist.
    /// Requires an acyclic digraph; nodes that cannot reach the target are
    /// pruned up front.
    pub fn enumerate_paths(
        &self,
        source: usize,
        target: usize,
        limit: usize,
    ) -> Result<Vec<Vec<usize>>, usize> {
        let n = self.succ.len();
        // Reverse reachability from the target.
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (u, outs) in self.succ.iter().enumerate() {
            for &(v, _) in outs {
                pred[v].push(u);
            }
        }
        let mut reaches = vec![false; n];
        let mut queue = vec![target];
        reaches[target] = true;
        while let Some(v) = queue.pop() {
            for &u in &pred[v] {
                if !reaches[u] {
                    reaches[u] = true;
                    queue.push(u);
                }
            }
        }
        if !reaches[source] {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut path = vec![source];
        let mut cursor = vec![0usize];
        loop {
            let u = *path.last().expect("path never empties before return");
            if u == target && cursor.last() == Some(&0) {
                if out.len() == limit {
                    return Err(out.len() + 1);
                }
                out.push(path.clone());
                // A DAG path cannot revisit the target; backtrack.
                path.pop();
                cursor.pop();
                if path.is_empty() {
                    return Ok(out);
                }
                continue;
            }
            let mut advanced = None;
            {
                let idx = cursor.last_mut().expect("cursor tracks path");
                while *idx < self.succ[u].len() {
                    let (v, _) = self.succ[u][*idx];
                    *idx += 1;
                    if reaches[v] {
                        advanced = Some(v);
                        break;
                    }
                }
            }
            match advanced {
                Some(v) => {
                    path.push(v);
                    cursor.push(0);
                }
                None => {
                    path.pop();
                    cursor.pop();
                    if path.is_empty() {
                        return Ok(out);
                    }
                }
            }
        }
    }
}

/// Kahn topological sort; `None` when a cycle exists.
fn kahn(succ: &[Vec<(usize, i32)>]) -> Option<Vec<usize>> {
    let n = succ.len();
    let mut indegree = vec![0usize; n];
    for outs in succ {
        for &(v, _) in outs {
            indegree[v] += 1;
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut ready: Vec<usize> = (0..n).filter(|&u| indegree[u] == 0).collect();
    while let Some(u) = ready.pop() {
        order.push(u);
        for &(v, _) in &succ[u] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                ready.push(v);
            }
        }
    }
    (order.len() == n).then_some(order)
}
