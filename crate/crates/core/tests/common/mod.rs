#![allow(dead_code)]

use ec_designs::arith::Subsets;
use ec_designs::{Design, EcFailure, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// n-e.c. straight from the definition: every n-subset in lexicographic
/// order, every split in mask order (bit i set puts the i-th vertex in A),
/// every outside vertex tried as a witness. Returns the first failure and
/// the number of splits examined.
pub fn naive_ec(g: &Graph, n: usize) -> (Option<EcFailure>, u64) {
    let mut checked = 0;
    let mut subsets = Subsets::new(g.n(), n);
    while let Some(t) = subsets.next_subset() {
        for mask in 0..1usize << n {
            checked += 1;
            let a: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| t[i]).collect();
            let b: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| t[i]).collect();
            let witnessed = (0..g.n()).any(|z| {
                !t.contains(&z)
                    && a.iter().all(|&x| g.has_edge(z, x))
                    && b.iter().all(|&y| !g.has_edge(z, y))
            });
            if !witnessed {
                return (Some(EcFailure { a, b }), checked);
            }
        }
    }
    (None, checked)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// First SQS(v) found by covering the lexicographically first uncovered
/// triple with each possible fourth point in turn.
pub fn sqs_by_search(v: usize) -> Design {
    let triples: Vec<[usize; 3]> = {
        let mut out = Vec::new();
        for a in 0..v {
            for b in a + 1..v {
                for c in b + 1..v {
                    out.push([a, b, c]);
                }
            }
        }
        out
    };
    let index = |t: [usize; 3]| triples.binary_search(&t).unwrap();
    let mut covered = vec![false; triples.len()];
    let mut blocks: Vec<Vec<usize>> = Vec::new();

    fn quad_triples(q: &[usize; 4]) -> [[usize; 3]; 4] {
        [[q[0], q[1], q[2]], [q[0], q[1], q[3]], [q[0], q[2], q[3]], [q[1], q[2], q[3]]]
    }

    fn rec(
        v: usize,
        triples: &[[usize; 3]],
        index: &dyn Fn([usize; 3]) -> usize,
        covered: &mut Vec<bool>,
        blocks: &mut Vec<Vec<usize>>,
    ) -> bool {
        let Some(i) = covered.iter().position(|c| !c) else {
            return true;
        };
        let t = triples[i];
        for x in 0..v {
            if t.contains(&x) {
                continue;
            }
            let mut q = [t[0], t[1], t[2], x];
            q.sort_unstable();
            let ids: Vec<usize> = quad_triples(&q).iter().map(|&s| index(s)).collect();
            if ids.iter().any(|&j| covered[j]) {
                continue;
            }
            for &j in &ids {
                covered[j] = true;
            }
            blocks.push(q.to_vec());
            if rec(v, triples, index, covered, blocks) {
                return true;
            }
            blocks.pop();
            for &j in &ids {
                covered[j] = false;
            }
        }
        false
    }

    assert!(rec(v, &triples, &index, &mut covered, &mut blocks), "no SQS({v})");
    Design::new(v, blocks).unwrap()
}

/// Position of `B \ {x}` in the normalized derived design.
pub fn derived_index(d: &Design, derived: &Design, block: usize, x: usize) -> usize {
    let stripped: Vec<usize> = d
        .block(block)
        .iter()
        .filter(|&&p| p != x)
        .map(|&p| if p > x { p - 1 } else { p })
        .collect();
    derived.blocks().binary_search(&stripped).unwrap()
}
