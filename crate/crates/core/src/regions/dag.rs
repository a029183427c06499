//! Path polytopes of directed acyclic graphs.
//!
//! Text format: a header line `nodes m arcs a source s sink t`, then one `u v` line
//! per arc. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use rand::Rng;

use crate::atom::{Atom, AtomKey};
use crate::error::{check_dim, Error, Result};
use crate::Point;

/// Convex hull of the arc-incidence vectors of all source-sink paths of a DAG.
#[derive(Clone, Debug)]
pub struct DagPath {
    nodes: usize,
    arcs: Vec<(usize, usize)>,
    source: usize,
    sink: usize,
    topo: Vec<usize>,
    out_arcs: Vec<Vec<usize>>,
    longest: usize,
}

impl DagPath {
    pub fn new(nodes: usize, arcs: Vec<(usize, usize)>, source: usize, sink: usize) -> Result<Self> {
        if source >= nodes || sink >= nodes {
            return Err(Error::InvalidInput("source or sink out of range".into()));
        }
        if source == sink {
            return Err(Error::InvalidInput("source and sink must differ".into()));
        }
        let mut out_arcs = vec![Vec::new(); nodes];
        let mut indegree = vec![0usize; nodes];
        for (idx, &(u, v)) in arcs.iter().enumerate() {
            if u >= nodes || v >= nodes {
                return Err(Error::InvalidInput(format!("arc {idx} ({u}, {v}) out of range")));
            }
            out_arcs[u].push(idx);
            indegree[v] += 1;
        }
        // Kahn's algorithm; the queue is processed in index order for determinism.
        let mut topo = Vec::with_capacity(nodes);
        let mut ready: std::collections::BTreeSet<usize> = (0..nodes).filter(|&v| indegree[v] == 0).collect();
        while let Some(u) = ready.pop_first() {
            topo.push(u);
            for &a in &out_arcs[u] {
                let v = arcs[a].1;
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    ready.insert(v);
                }
            }
        }
        if topo.len() != nodes {
            return Err(Error::Cyclic);
        }
        let mut dag = DagPath {
            nodes,
            arcs,
            source,
            sink,
            topo,
            out_arcs,
            longest: 0,
        };
        let lengths = Point::from_element(dag.arcs.len(), -1.0);
        let (_, longest) = dag.shortest_path(&lengths)?;
        dag.longest = longest.len();
        Ok(dag)
    }

    /// Layered random DAG: `source → layer 0 → … → layer L-1 → sink`, with arcs
    /// between consecutive layers drawn with probability `arc_prob`. Every layer node
    /// keeps at least one incoming and one outgoing arc.
    pub fn layered<R: Rng>(layers: usize, width: usize, arc_prob: f64, rng: &mut R) -> Result<Self> {
        if layers == 0 || width == 0 {
            return Err(Error::InvalidInput("layered DAG needs layers, width >= 1".into()));
        }
        let node = |l: usize, i: usize| 1 + l * width + i;
        let source = 0;
        let sink = 1 + layers * width;
        let mut arcs = Vec::new();
        for i in 0..width {
            arcs.push((source, node(0, i)));
        }
        for l in 0..layers.saturating_sub(1) {
            let mut has_out = vec![false; width];
            let mut has_in = vec![false; width];
            for (i, out) in has_out.iter_mut().enumerate() {
                for (j, inc) in has_in.iter_mut().enumerate() {
                    if rng.random_bool(arc_prob.clamp(0.0, 1.0)) {
                        arcs.push((node(l, i), node(l + 1, j)));
                        *out = true;
                        *inc = true;
                    }
                }
            }
            for (i, &out) in has_out.iter().enumerate() {
                if !out {
                    let j = rng.random_range(0..width);
                    arcs.push((node(l, i), node(l + 1, j)));
                    has_in[j] = true;
                }
            }
            for (j, &inc) in has_in.iter().enumerate() {
                if !inc {
                    let i = rng.random_range(0..width);
                    arcs.push((node(l, i), node(l + 1, j)));
                }
            }
        }
        for i in 0..width {
            arcs.push((node(layers - 1, i), sink));
        }
        DagPath::new(sink + 1, arcs, source, sink)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// Arc count of the longest source-sink path.
    pub fn longest_path(&self) -> usize {
        self.longest
    }

    /// Shortest source-sink path under arc costs `c` (negative costs allowed),
    /// by dynamic programming in topological order. Returns `(cost, arcs)`.
    pub fn shortest_path(&self, c: &Point) -> Result<(f64, Vec<usize>)> {
        check_dim(self.arcs.len(), c.len())?;
        let mut dist = vec![f64::INFINITY; self.nodes];
        let mut pred: Vec<Option<usize>> = vec![None; self.nodes];
        dist[self.source] = 0.0;
        for &u in &self.topo {
            if dist[u].is_infinite() {
                continue;
            }
            for &a in &self.out_arcs[u] {
                let v = self.arcs[a].1;
                let cand = dist[u] + c[a];
                if cand < dist[v] {
                    dist[v] = cand;
                    pred[v] = Some(a);
                }
            }
        }
        if dist[self.sink].is_infinite() {
            return Err(Error::Unreachable {
                from: self.source,
                to: self.sink,
            });
        }
        let mut path = Vec::new();
        let mut v = self.sink;
        while v != self.source {
            let a = pred[v].expect("reachable node has a predecessor");
            path.push(a);
            v = self.arcs[a].0;
        }
        path.reverse();
        Ok((dist[self.sink], path))
    }

    pub fn path_atom(&self, path: Vec<usize>) -> Atom {
        let entries = path.iter().map(|&a| (a, 1.0)).collect();
        Atom::new(AtomKey::Path(path), self.arcs.len(), entries)
    }

    pub fn lmo(&self, c: &Point) -> Result<Atom> {
        let (_, path) = self.shortest_path(c)?;
        Ok(self.path_atom(path))
    }

    /// Unit source-sink flow: `0 <= x <= 1` and conservation at every node.
    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        if x.iter().any(|&v| v < -tol || v > 1.0 + tol) {
            return false;
        }
        let mut net = vec![0.0; self.nodes];
        for (a, &(u, v)) in self.arcs.iter().enumerate() {
            net[u] += x[a];
            net[v] -= x[a];
        }
        net.iter().enumerate().all(|(node, &flow)| {
            let expected = if node == self.source {
                1.0
            } else if node == self.sink {
                -1.0
            } else {
                0.0
            };
            (flow - expected).abs() <= tol
        })
    }

    /// `√(2·longest path)`; two paths differ in at most that many arcs, so this
    /// bounds the true diameter from above.
    pub fn diameter_bound(&self) -> f64 {
        (2.0 * self.longest as f64).sqrt()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "nodes {} arcs {} source {} sink {}\n",
            self.nodes,
            self.arcs.len(),
            self.source,
            self.sink
        );
        for &(u, v) in &self.arcs {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let tok: Vec<&str> = header.split_whitespace().collect();
        let field = |name: &str, pos: usize| -> Result<usize> {
            if tok.get(pos) != Some(&name) {
                return Err(Error::Parse {
                    line: hline,
                    msg: format!("expected `{name}` in header"),
                });
            }
            tok.get(pos + 1).and_then(|t| t.parse().ok()).ok_or(Error::Parse {
                line: hline,
                msg: format!("bad value for `{name}`"),
            })
        };
        if tok.len() != 8 {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `nodes m arcs a source s sink t`".into(),
            });
        }
        let nodes = field("nodes", 0)?;
        let count = field("arcs", 2)?;
        let source = field("source", 4)?;
        let sink = field("sink", 6)?;
        let mut arcs = Vec::with_capacity(count);
        for (line, l) in lines {
            let parts: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse {
                    line,
                    msg: "arc line must be `u v`".into(),
                })?;
            if parts.len() != 2 {
                return Err(Error::Parse {
                    line,
                    msg: "arc line must be `u v`".into(),
                });
            }
            arcs.push((parts[0], parts[1]));
        }
        if arcs.len() != count {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header announces {count} arcs, found {}", arcs.len()),
            });
        }
        DagPath::new(nodes, arcs, source, sink)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diamond() -> DagPath {
        // 0 -> 1 -> 3, 0 -> 2 -> 3, 1 -> 2
        DagPath::new(4, vec![(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)], 0, 3).unwrap()
    }

    fn all_paths(d: &DagPath) -> Vec<Vec<usize>> {
        fn walk(d: &DagPath, u: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if u == d.sink() {
                out.push(cur.clone());
                return;
            }
            for (a, &(x, y)) in d.arcs().iter().enumerate() {
                if x == u {
                    cur.push(a);
                    walk(d, y, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(d, d.source(), &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn negative_costs_take_long_path() {
        let d = diamond();
        let c = Point::from_vec(vec![1.0, 1.0, 1.0, 1.0, -5.0]);
        let (cost, path) = d.shortest_path(&c).unwrap();
        assert_eq!(path, vec![0, 4, 3]);
        assert_eq!(cost, -3.0);
        assert_eq!(d.longest_path(), 3);
    }

    #[test]
    fn rejects_cycles_and_unreachable_sinks() {
        assert!(matches!(
            DagPath::new(3, vec![(0, 1), (1, 0), (1, 2)], 0, 2),
            Err(Error::Cyclic)
        ));
        assert!(matches!(
            DagPath::new(3, vec![(0, 1)], 0, 2),
            Err(Error::Unreachable { .. })
        ));
    }

    #[test]
    fn lmo_matches_path_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let d = DagPath::layered(4, 3, 0.5, &mut rng).unwrap();
            let paths = all_paths(&d);
            for _ in 0..20 {
                let c = Point::from_fn(d.arcs().len(), |_, _| rng.random_range(-1.0..1.0));
                let (cost, path) = d.shortest_path(&c).unwrap();
                let best = paths
                    .iter()
                    .map(|p| p.iter().map(|&a| c[a]).sum::<f64>())
                    .fold(f64::INFINITY, f64::min);
                assert!((cost - best).abs() < 1e-12);
                assert!(d.contains(&d.path_atom(path).to_dense(), 1e-9));
            }
            let longest = paths.iter().map(Vec::len).max().unwrap();
            assert_eq!(d.longest_path(), longest);
        }
    }

    #[test]
    fn membership_of_flows() {
        let d = diamond();
        let half = Point::from_vec(vec![0.5, 0.5, 0.5, 0.5, 0.0]);
        assert!(d.contains(&half, 1e-12));
        let leak = Point::from_vec(vec![0.5, 0.5, 0.5, 0.4, 0.0]);
        assert!(!d.contains(&leak, 1e-9));
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let d = DagPath::layered(3, 4, 0.4, &mut rng).unwrap();
        let back = DagPath::from_text(&d.to_text()).unwrap();
        assert_eq!(back.arcs(), d.arcs());
        assert_eq!(
            (back.source(), back.sink(), back.nodes()),
            (d.source(), d.sink(), d.nodes())
        );
    }

    #[test]
    fn parse_errors() {
        assert!(DagPath::from_text("").is_err());
        assert!(DagPath::from_text("nodes 2 arcs 1 source 0\n0 1\n").is_err());
        assert!(DagPath::from_text("nodes 2 arcs 2 source 0 sink 1\n0 1\n").is_err());
        assert!(DagPath::from_text("nodes 2 arcs 1 source 0 sink 1\n0 x\n").is_err());
        let ok = DagPath::from_text("# comment\nnodes 2 arcs 1 source 0 sink 1\n\n0 1\n").unwrap();
        assert_eq!(ok.arcs(), &[(0, 1)]);
    }
}
