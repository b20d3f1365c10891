use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Fine node → aggregate map (the `part` array).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregateMap {
    part: Vec<usize>,
    n_coarse: usize,
}

impl AggregateMap {
    /// Validates that ids are dense: every aggregate in `0..n_coarse` is hit.
    pub fn from_part(part: Vec<usize>) -> Result<Self> {
        let n = part.len();
        if n == 0 {
            return Err(Error::Invalid("empty partition".into()));
        }
        if let Some(&bad) = part.iter().find(|&&g| g >= n) {
            return Err(Error::Invalid(format!(
                "aggregate id {bad} exceeds node count {n}"
            )));
        }
        let n_coarse = part.iter().max().unwrap() + 1;
        let mut seen = vec![false; n_coarse];
        part.iter().for_each(|&g| seen[g] = true);
        if let Some(g) = seen.iter().position(|s| !s) {
            return Err(Error::Invalid(format!("aggregate {g} is empty")));
        }
        Ok(Self { part, n_coarse })
    }

    pub fn part(&self) -> &[usize] {
        &self.part
    }
    pub fn n_fine(&self) -> usize {
        self.part.len()
    }
    pub fn n_coarse(&self) -> usize {
        self.n_coarse
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.n_coarse];
        self.part.iter().for_each(|&g| s[g] += 1);
        s
    }

    /// Fine nodes of each aggregate, in increasing order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); self.n_coarse];
        for (i, &g) in self.part.iter().enumerate() {
            m[g].push(i);
        }
        m
    }

    /// True when every aggregate induces a connected subgraph of `a`.
    pub fn is_connected_in(&self, a: &CsrMatrix) -> bool {
        let mut visited = vec![false; self.n_fine()];
        for group in self.members() {
            let mut stack = vec![group[0]];
            visited[group[0]] = true;
            let mut reached = 1;
            while let Some(u) = stack.pop() {
                for &v in a.row(u).0 {
                    if v != u && !visited[v] && self.part[v] == self.part[u] {
                        visited[v] = true;
                        reached += 1;
                        stack.push(v);
                    }
                }
            }
            if reached != group.len() {
                return false;
            }
        }
        true
    }
}

/// Weighted adjacency of the current (coarsened) graph.
struct Graph {
    adj: Vec<Vec<(usize, f64)>>,
    size: Vec<usize>,
}

impl Graph {
    fn from_matrix(a: &CsrMatrix) -> Self {
        let adj = (0..a.nrows())
            .map(|i| {
                let (c, v) = a.row(i);
                c.iter()
                    .zip(v)
                    .filter(|(&j, _)| j != i)
                    .map(|(&j, &x)| (j, x.abs()))
                    .collect()
            })
            .collect();
        Self {
            adj,
            size: vec![1; a.nrows()],
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// One heavy-edge matching pass merging at most `budget` pairs.
    /// Returns the new label of every node and the number of merges.
    fn match_pass(&self, budget: usize) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&u| (self.size[u], u));
        let mut mate = vec![usize::MAX; n];
        let mut merges = 0;
        for &u in &order {
            if merges == budget {
                break;
            }
            if mate[u] != usize::MAX {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for &(v, w) in &self.adj[u] {
                if mate[v] != usize::MAX || v == u {
                    continue;
                }
                best = match best {
                    Some((bv, bw)) if bw > w || (bw == w && bv < v) => Some((bv, bw)),
                    _ => Some((v, w)),
                };
            }
            if let Some((v, _)) = best {
                mate[u] = v;
                mate[v] = u;
                merges += 1;
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for u in 0..n {
            if label[u] != usize::MAX {
                continue;
            }
            label[u] = next;
            if mate[u] != usize::MAX {
                label[mate[u]] = next;
            }
            next += 1;
        }
        (label, merges)
    }

    fn contract(&self, label: &[usize]) -> Graph {
        let nc = label.iter().max().map_or(0, |m| m + 1);
        let mut size = vec![0; nc];
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nc];
        for u in 0..self.len() {
            size[label[u]] += self.size[u];
            for &(v, w) in &self.adj[u] {
                if label[v] != label[u] {
                    adj[label[u]].push((label[v], w));
                }
            }
        }
        for list in &mut adj {
            list.sort_by_key(|&(v, _)| v);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(list.len());
            for &(v, w) in list.iter() {
                match merged.last_mut() {
                    Some((lv, lw)) if *lv == v => *lw += w,
                    _ => merged.push((v, w)),
                }
            }
            *list = merged;
        }
        Graph { adj, size }
    }
}

/// Coarsens the graph of `a` by rounds of heavy-edge matching until
/// `round(N / cf^dim)` aggregates remain.
///
/// Each round visits nodes by (aggregate size, index) and pairs each with its
/// unmatched neighbor of largest summed `|a_ij|`, ties going to the smaller
/// index. The last round stops as soon as the target count is reached.
/// Aggregates are numbered by their smallest fine node.
pub fn aggregate_matching(a: &CsrMatrix, cf: f64, dim: usize) -> Result<AggregateMap> {
    if a.nrows() != a.ncols() {
        return Err(Error::Invalid("aggregation needs a square matrix".into()));
    }
    if !(cf > 1.0) || !cf.is_finite() {
        return Err(Error::Invalid(format!(
            "coarsening factor must exceed 1, got {cf}"
        )));
    }
    let n = a.nrows();
    let ratio = cf.powi(dim as i32);
    if ratio >= n as f64 {
        return Err(Error::EmptyCoarse { ratio, n });
    }
    let target = ((n as f64 / ratio).round() as usize).max(1);
    let mut graph = Graph::from_matrix(a);
    let mut part: Vec<usize> = (0..n).collect();
    while graph.len() > target {
        let (label, merges) = graph.match_pass(graph.len() - target);
        if merges == 0 {
            break;
        }
        part.iter_mut().for_each(|g| *g = label[*g]);
        graph = graph.contract(&label);
    }
    let mut relabel = vec![usize::MAX; graph.len()];
    let mut next = 0;
    for g in part.iter_mut() {
        if relabel[*g] == usize::MAX {
            relabel[*g] = next;
            next += 1;
        }
        *g = relabel[*g];
    }
    AggregateMap::from_part(part)
}

/// Piecewise-constant interpolation: `P_ij = 1` iff node `i` is in aggregate `j`.
pub fn build_interpolation(agg: &AggregateMap) -> CsrMatrix {
    let n = agg.n_fine();
    CsrMatrix::from_raw(
        n,
        agg.n_coarse(),
        (0..=n).collect(),
        agg.part().to_vec(),
        vec![1.0; n],
    )
    .expect("one entry per row is canonical")
}

/// `A_c = PᵀAP` by summing `a_kl` over `k ∈ G_i`, `l ∈ G_j`.
pub fn galerkin_coarse(a: &CsrMatrix, agg: &AggregateMap) -> Result<CsrMatrix> {
    if a.nrows() != agg.n_fine() || a.ncols() != agg.n_fine() {
        return Err(Error::DimensionMismatch {
            expected: agg.n_fine(),
            got: a.nrows(),
        });
    }
    let part = agg.part();
    let mut t = Vec::with_capacity(a.nnz());
    for k in 0..a.nrows() {
        let (c, v) = a.row(k);
        for (&l, &x) in c.iter().zip(v) {
            t.push((part[k], part[l], x));
        }
    }
    CsrMatrix::from_triplets(agg.n_coarse(), agg.n_coarse(), &t)
}

/// Reads a partition file: one 0-based aggregate id per line.
pub fn parse_partition(text: &str) -> Result<Vec<usize>> {
    let mut part = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let g = t.parse::<usize>().map_err(|_| Error::Parse {
            line: ln + 1,
            msg: format!("expected an aggregate id, got '{t}'"),
        })?;
        part.push(g);
    }
    if part.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "partition file is empty".into(),
        });
    }
    Ok(part)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_graph_pairs() {
        let a = CsrMatrix::tridiagonal(4, -1.0, 2.0, -1.0);
        let agg = aggregate_matching(&a, 2.0, 1).unwrap();
        assert_eq!(agg.part(), &[0, 0, 1, 1]);
    }

    #[test]
    fn interpolation_rows() {
        let agg = AggregateMap::from_part(vec![0, 0, 1, 1]).unwrap();
        let p = build_interpolation(&agg).to_dense();
        assert_eq!(p.as_slice(), &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn galerkin_1d() {
        let a = CsrMatrix::tridiagonal(4, -1.0, 2.0, -1.0);
        let agg = AggregateMap::from_part(vec![0, 0, 1, 1]).unwrap();
        let ac = galerkin_coarse(&a, &agg).unwrap().to_dense();
        assert_eq!(ac.as_slice(), &[2.0, -1.0, -1.0, 2.0]);
    }

    #[test]
    fn singletons_reproduce_matrix() {
        let a = CsrMatrix::tridiagonal(5, -1.0, 2.0, -1.0);
        let agg = AggregateMap::from_part((0..5).collect()).unwrap();
        assert_eq!(galerkin_coarse(&a, &agg).unwrap(), a);
    }

    #[test]
    fn invalid_partitions() {
        assert!(AggregateMap::from_part(vec![0, 2, 2]).is_err());
        assert!(AggregateMap::from_part(vec![0, 7]).is_err());
        assert!(AggregateMap::from_part(vec![]).is_err());
    }

    #[test]
    fn too_coarse_is_an_error() {
        let a = CsrMatrix::tridiagonal(8, -1.0, 2.0, -1.0);
        assert!(matches!(
            aggregate_matching(&a, 8.0, 1),
            Err(Error::EmptyCoarse { .. })
        ));
        assert!(aggregate_matching(&a, 1.0, 1).is_err());
    }

    #[test]
    fn partition_file() {
        assert_eq!(
            parse_partition("0\n1\n  1 \n0\n\n").unwrap(),
            vec![0, 1, 1, 0]
        );
        assert!(matches!(
            parse_partition("0\nx\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_partition("\n").is_err());
    }
}
