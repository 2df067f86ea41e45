//! Rough timing probe for the heavy LP shapes.
use std::time::Instant;

use permutope_core::lp::{solve_feasibility, LpOutcome};
use permutope_core::polytope::{build_phi, ConstraintSystem, Relation, RowLabel, VarIndex};
use permutope_core::ratmat::{enumerate_permutations, rat, Permutation, Rat, RatMatrix};
use num::traits::Zero;

fn adjacency(n: usize, edges: &[(usize, usize)]) -> RatMatrix {
    let mut a = RatMatrix::zeros(n, n);
    for &(u, v) in edges {
        a.set(u, v, rat(1));
        a.set(v, u, rat(1));
    }
    a
}

fn similarity_system(a: &RatMatrix, b: &RatMatrix, t: i64) -> ConstraintSystem {
    let n = a.rows();
    let ash = a.add_scaled_identity(&rat(t)).unwrap();
    let bsh = b.add_scaled_identity(&rat(t)).unwrap();
    let mut sys = build_phi(n, n);
    for i in 0..n {
        for k in 0..n {
            let mut coeffs = Vec::new();
            for j in 0..n {
                for l in 0..n {
                    let c = ash.get(l, j);
                    if !c.is_zero() {
                        coeffs.push((VarIndex::new(i, k, j, l).flatten(n, n), c.clone()));
                    }
                }
            }
            sys.push_row(RowLabel::Sim, coeffs, Relation::Eq, bsh.get(k, i).clone());
        }
    }
    sys
}

fn run(label: &str, sys: &ConstraintSystem) {
    let t0 = Instant::now();
    let out = solve_feasibility(sys).unwrap();
    let status = match out {
        LpOutcome::Feasible { .. } => "feasible",
        LpOutcome::Infeasible { .. } => "INFEASIBLE",
    };
    println!("{label}: {status} in {:?} ({} rows x {} vars)", t0.elapsed(), sys.rows.len(), sys.num_vars);
}

fn main() {
    // C5 vs relabeled C5 (feasible)
    let c5 = adjacency(5, &[(0,1),(1,2),(2,3),(3,4),(4,0)]);
    let p = Permutation::from_image(vec![2,0,3,1,4]).unwrap();
    let c5r = permutope_core::ratmat::apply_similarity(&p, &c5).unwrap();
    run("phi5 sim feasible (C5 ~ C5)", &similarity_system(&c5, &c5r, 2));

    // C5 vs bull graph (both 5 edges, not isomorphic)
    let bull = adjacency(5, &[(0,1),(0,2),(1,2),(1,3),(2,4)]);
    run("phi5 sim C5 vs bull", &similarity_system(&c5, &bull, 2));

    // C6 vs two triangles at n=6
    let c6 = adjacency(6, &[(0,1),(1,2),(2,3),(3,4),(4,5),(5,0)]);
    let tt = adjacency(6, &[(0,1),(1,2),(2,0),(3,4),(4,5),(5,3)]);
    run("phi6 sim C6 vs 2K3", &similarity_system(&c6, &tt, 2));

    // psi membership of rosenberg(P,Q,4): 257 rows x 576 weight vars
    let p = Permutation::from_cycle_visits(&[0, 2, 1, 3]).unwrap();
    let q = Permutation::from_cycle_visits(&[0, 1, 2, 3]).unwrap();
    let d = permutope_core::polytope::rosenberg(&p, &q, 4).unwrap().to_flat();
    let perms: Vec<Permutation> = enumerate_permutations(4).unwrap().collect();
    let nv = perms.len() * perms.len();
    let mut sys = ConstraintSystem::new(nv);
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); 16 * 16]; // row index -> vars with coeff 1
    for (pi, pp) in perms.iter().enumerate() {
        for (qi, qq) in perms.iter().enumerate() {
            let var = pi * perms.len() + qi;
            let kr = pp.kron(qq);
            for col in 0..16 {
                let row = kr.apply(col);
                cols[row * 16 + col].push(var);
            }
        }
    }
    for (cell, vars) in cols.iter().enumerate() {
        let coeffs: Vec<(usize, Rat)> = vars.iter().map(|&v| (v, rat(1))).collect();
        let rhs = d.entries()[cell].clone();
        sys.push_row(RowLabel::PsiMatch, coeffs, Relation::Eq, rhs);
    }
    sys.push_row(RowLabel::PsiConvex, (0..nv).map(|v| (v, rat(1))).collect(), Relation::Eq, rat(1));
    run("psi membership rosenberg n=4", &sys);
}
