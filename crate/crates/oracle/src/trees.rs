//! Decorated trees indexing the torus-fixed loci of genus-zero stable maps.

use std::collections::HashSet;

use wallx_target::ToricTarget;

/// One fixed locus: vertices at fixed points, edges covering orbits, markings on vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedTree {
    /// Fixed point of each vertex.
    pub fixed: Vec<usize>,
    /// `(a, b, n)`: vertices `a < b` joined by an `n`-fold cover.
    pub edges: Vec<(usize, usize, u32)>,
    /// Vertex carrying each marking.
    pub marks: Vec<usize>,
    /// Order of the automorphism group of the decorated tree.
    pub automorphisms: u64,
}

impl DecoratedTree {
    /// Incident `(other vertex, degree)` pairs at vertex `v`.
    pub fn flags(&self, v: usize) -> Vec<(usize, u32)> {
        self.edges
            .iter()
            .filter_map(|&(a, b, n)| {
                if a == v {
                    Some((b, n))
                } else if b == v {
                    Some((a, n))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn marks_at(&self, v: usize) -> Vec<usize> {
        (0..self.marks.len()).filter(|&m| self.marks[m] == v).collect()
    }
}

type Encoding = (Vec<usize>, Vec<(usize, usize, u32)>);

fn encode(fixed: &[usize], edges: &[(usize, usize, u32)], perm: &[usize]) -> Encoding {
    let mut f = vec![0; fixed.len()];
    for (v, &p) in perm.iter().enumerate() {
        f[p] = fixed[v];
    }
    let mut e: Vec<(usize, usize, u32)> = edges
        .iter()
        .map(|&(a, b, n)| {
            let (x, y) = (perm[a], perm[b]);
            (x.min(y), x.max(y), n)
        })
        .collect();
    e.sort_unstable();
    (f, e)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Vertex labels, edges `(from, to, degree)` and automorphisms.
type UnmarkedTree = (Vec<usize>, Vec<(usize, usize, u32)>, Vec<Vec<usize>>);

/// Unmarked trees of class `beta` together with their automorphism groups.
fn unmarked(t: &ToricTarget, beta: &[i64]) -> Vec<UnmarkedTree> {
    let n_fixed = t.fixed_points_unchecked().len();
    let max_edges = t.ltheta(beta).max(0) as usize;
    let mut seen: HashSet<Encoding> = HashSet::new();
    let mut out = Vec::new();
    for e in 1..=max_edges {
        let perms = permutations(e + 1);
        for parents in parent_arrays(e) {
            let mut fixed = vec![0usize; e + 1];
            let mut degs = vec![0u32; e];
            label(t, beta, &parents, 0, n_fixed, &mut fixed, &mut degs, &vec![0i64; beta.len()], &mut |fixed, degs| {
                let edges: Vec<(usize, usize, u32)> = (0..e).map(|i| (parents[i], i + 1, degs[i])).collect();
                let canon = perms.iter().map(|p| encode(fixed, &edges, p)).min().expect("nonempty");
                if seen.insert(canon.clone()) {
                    let group: Vec<Vec<usize>> =
                        perms.iter().filter(|p| encode(&canon.0, &canon.1, p) == canon).cloned().collect();
                    out.push((canon.0, canon.1, group));
                }
            });
        }
    }
    out.sort();
    out
}

/// Parent arrays of rooted trees on `e + 1` vertices: vertex `i + 1` hangs below `parents[i] <= i`.
fn parent_arrays(e: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for i in 0..e {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=i).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn label(
    t: &ToricTarget,
    beta: &[i64],
    parents: &[usize],
    i: usize,
    n_fixed: usize,
    fixed: &mut Vec<usize>,
    degs: &mut Vec<u32>,
    sum: &[i64],
    f: &mut impl FnMut(&[usize], &[u32]),
) {
    if i == 0 {
        for r in 0..n_fixed {
            fixed[0] = r;
            if parents.is_empty() {
                if sum == beta {
                    f(fixed, degs);
                }
            } else {
                label(t, beta, parents, 1, n_fixed, fixed, degs, sum, f);
            }
        }
        return;
    }
    // place vertex i with parent parents[i-1]
    let parent = fixed[parents[i - 1]];
    let budget = t.ltheta(beta) - t.ltheta(sum);
    let remaining_edges = (parents.len() - i) as i64;
    for o in t.neighbors(parent) {
        let step = t.ltheta(&o.beta);
        let mut n = 1u32;
        while step * n as i64 + remaining_edges <= budget {
            fixed[i] = o.to;
            degs[i - 1] = n;
            let next: Vec<i64> = sum.iter().zip(&o.beta).map(|(s, b)| s + b * n as i64).collect();
            if i == parents.len() {
                if next == beta {
                    f(fixed, degs);
                }
            } else {
                label(t, beta, parents, i + 1, n_fixed, fixed, degs, &next, f);
            }
            n += 1;
        }
    }
}

/// All decorated trees of class `beta` with `n_marks` markings, one per isomorphism class.
pub fn enumerate_trees(t: &ToricTarget, beta: &[i64], n_marks: usize) -> Vec<DecoratedTree> {
    if beta.iter().all(|&b| b == 0) {
        if n_marks < 3 {
            return Vec::new();
        }
        return (0..t.fixed_points_unchecked().len())
            .map(|r| DecoratedTree { fixed: vec![r], edges: Vec::new(), marks: vec![0; n_marks], automorphisms: 1 })
            .collect();
    }
    let mut out = Vec::new();
    for (fixed, edges, group) in unmarked(t, beta) {
        let v = fixed.len();
        let mut marks = vec![0usize; n_marks];
        loop {
            let image = |g: &Vec<usize>| -> Vec<usize> { marks.iter().map(|&m| g[m]).collect() };
            let minimal = group.iter().all(|g| image(g) >= marks);
            if minimal {
                let stab = group.iter().filter(|g| image(g) == marks).count() as u64;
                out.push(DecoratedTree {
                    fixed: fixed.clone(),
                    edges: edges.clone(),
                    marks: marks.clone(),
                    automorphisms: stab,
                });
            }
            // next assignment
            let mut i = 0;
            while i < n_marks {
                marks[i] += 1;
                if marks[i] < v {
                    break;
                }
                marks[i] = 0;
                i += 1;
            }
            if i == n_marks {
                break;
            }
        }
    }
    out
}
