//! Co-authorship graph and breadth-first collaboration distances.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::ingest::PaperRecord;
use crate::registry::AuthorKey;

/// Unweighted co-authorship distance. [`Distance::UNREACHABLE`] stands for
/// "no path".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distance(u32);

impl Distance {
    pub const ZERO: Distance = Distance(0);
    pub const UNREACHABLE: Distance = Distance(u32::MAX);

    pub fn new(d: u32) -> Self {
        assert!(d != u32::MAX, "distance overflow");
        Distance(d)
    }

    pub fn finite(self) -> Option<u32> {
        (self != Self::UNREACHABLE).then_some(self.0)
    }

    pub fn is_reachable(self) -> bool {
        self != Self::UNREACHABLE
    }

    /// One more hop; unreachable stays unreachable.
    pub fn step(self) -> Self {
        match self.finite() {
            Some(d) => Distance::new(d + 1),
            None => self,
        }
    }

    /// Treats distances beyond `cap` as unreachable.
    pub fn capped(self, cap: Option<u32>) -> Self {
        match (self.finite(), cap) {
            (Some(d), Some(c)) if d > c => Self::UNREACHABLE,
            _ => self,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.finite() {
            Some(d) => write!(f, "{d}"),
            None => f.write_str("inf"),
        }
    }
}

/// Paper as a list of dense node indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphPaper {
    pub record_id: String,
    pub authors: Vec<u32>,
}

/// Undirected co-authorship graph. Nodes are indexed densely in key order;
/// papers are held in record-id order so that the graph does not depend on
/// input order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoauthorGraph {
    keys: Vec<AuthorKey>,
    index: HashMap<AuthorKey, u32>,
    adjacency: Vec<Vec<u32>>,
    papers: Vec<GraphPaper>,
    author_papers: Vec<Vec<u32>>,
}

impl CoauthorGraph {
    /// Builds the graph from keyed records. An edge joins every pair of
    /// authors that share a paper; single-author papers contribute an
    /// isolated node.
    pub fn build(records: &[PaperRecord]) -> Self {
        // Records sharing an id are duplicates; the first one wins.
        let mut ordered: BTreeMap<(&str, bool), &PaperRecord> = BTreeMap::new();
        for r in records {
            ordered.entry((r.record_id.as_str(), r.synthetic_id)).or_insert(r);
        }
        let mut keys: Vec<AuthorKey> = ordered.values().flat_map(|r| r.author_keys.iter().cloned()).collect();
        keys.sort_unstable();
        keys.dedup();
        let index: HashMap<AuthorKey, u32> = keys.iter().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect();

        let mut adjacency = vec![Vec::new(); keys.len()];
        let mut author_papers = vec![Vec::new(); keys.len()];
        let mut papers = Vec::with_capacity(ordered.len());
        for (p, record) in ordered.values().enumerate() {
            let mut authors: Vec<u32> = Vec::with_capacity(record.author_keys.len());
            for key in &record.author_keys {
                let node = index[key];
                if !authors.contains(&node) {
                    authors.push(node);
                }
            }
            for (i, &a) in authors.iter().enumerate() {
                author_papers[a as usize].push(p as u32);
                for &b in &authors[i + 1..] {
                    adjacency[a as usize].push(b);
                    adjacency[b as usize].push(a);
                }
            }
            papers.push(GraphPaper {
                record_id: record.record_id.clone(),
                authors,
            });
        }
        for neighbors in &mut adjacency {
            neighbors.sort_unstable();
            neighbors.dedup();
        }
        Self {
            keys,
            index,
            adjacency,
            papers,
            author_papers,
        }
    }

    pub fn node_count(&self) -> usize {
        self.keys.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn node(&self, key: &AuthorKey) -> Option<u32> {
        self.index.get(key).copied()
    }

    pub fn key(&self, node: u32) -> &AuthorKey {
        &self.keys[node as usize]
    }

    pub fn keys(&self) -> &[AuthorKey] {
        &self.keys
    }

    pub fn neighbors(&self, node: u32) -> &[u32] {
        &self.adjacency[node as usize]
    }

    pub fn papers(&self) -> &[GraphPaper] {
        &self.papers
    }

    /// Indices into [`Self::papers`] for one author.
    pub fn papers_of(&self, node: u32) -> &[u32] {
        &self.author_papers[node as usize]
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.adjacency[a as usize].binary_search(&b).is_ok()
    }

    /// `(author_a, author_b)` pairs with `a < b` in key order.
    pub fn edges(&self) -> impl Iterator<Item = (&AuthorKey, &AuthorKey)> + '_ {
        self.adjacency.iter().enumerate().flat_map(move |(a, ns)| {
            ns.iter()
                .filter(move |&&b| b as usize > a)
                .map(move |&b| (&self.keys[a], &self.keys[b as usize]))
        })
    }

    /// Writes the edge list as CSV with header `author_a,author_b`.
    pub fn write_edge_list<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["author_a", "author_b"])?;
        for (a, b) in self.edges() {
            wtr.write_record([a.as_str(), b.as_str()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Build the co-authorship graph; see [`CoauthorGraph::build`].
pub fn build_graph(records: &[PaperRecord]) -> CoauthorGraph {
    CoauthorGraph::build(records)
}

/// Shortest co-authorship distance from every node to one laureate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    pub laureate: AuthorKey,
    /// Whether the laureate is a node of the graph at all.
    pub present: bool,
    pub distances: Vec<Distance>,
}

impl DistanceTable {
    pub fn get(&self, node: u32) -> Distance {
        self.distances[node as usize]
    }
}

/// Breadth-first distances to `laureate`. A laureate who never published in
/// the dataset yields an all-unreachable table with `present == false`.
pub fn distances_from(graph: &CoauthorGraph, laureate: &AuthorKey) -> DistanceTable {
    let mut distances = vec![Distance::UNREACHABLE; graph.node_count()];
    let Some(source) = graph.node(laureate) else {
        return DistanceTable {
            laureate: laureate.clone(),
            present: false,
            distances,
        };
    };
    let mut queue = VecDeque::new();
    distances[source as usize] = Distance::ZERO;
    queue.push_back(source);
    while let Some(node) = queue.pop_front() {
        let next = distances[node as usize].step();
        for &n in graph.neighbors(node) {
            if distances[n as usize] == Distance::UNREACHABLE {
                distances[n as usize] = next;
                queue.push_back(n);
            }
        }
    }
    DistanceTable {
        laureate: laureate.clone(),
        present: true,
        distances,
    }
}

/// Number of distinct collaborators of `author`.
pub fn count_coauthors(graph: &CoauthorGraph, author: &AuthorKey) -> Result<usize> {
    graph
        .node(author)
        .map(|n| graph.neighbors(n).len())
        .ok_or_else(|| Error::UnknownAuthor(author.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::{assign_keys, MergeMap};
    use proptest::prelude::*;

    fn records(papers: &[&[&str]]) -> Vec<PaperRecord> {
        let mut recs: Vec<PaperRecord> = papers
            .iter()
            .enumerate()
            .map(|(i, names)| PaperRecord::new(format!("P{i}"), names.iter().map(|s| s.to_string()).collect()))
            .collect();
        assign_keys(&mut recs, &MergeMap::default());
        recs
    }

    fn k(s: &str) -> AuthorKey {
        AuthorKey::parse(s).unwrap()
    }

    fn table_one() -> CoauthorGraph {
        build_graph(&records(&[
            &["Mahlck, P"],
            &["Boekhout, H", "van der Weijden, I", "Waltman, L"],
        ]))
    }

    #[test]
    fn table_one_graph() {
        let g = table_one();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 3);
        let n = |s: &str| g.node(&k(s)).unwrap();
        assert!(g.has_edge(n("WALTMAN L"), n("BOEKHOUT H")));
        assert!(g.has_edge(n("WALTMAN L"), n("VAN DER WEIJDEN I")));
        assert!(g.has_edge(n("BOEKHOUT H"), n("VAN DER WEIJDEN I")));
        assert!(g.neighbors(n("MAHLCK P")).is_empty());
    }

    #[test]
    fn empty_graph() {
        let g = build_graph(&[]);
        assert_eq!((g.node_count(), g.edge_count()), (0, 0));
    }

    #[test]
    fn chain_has_no_shortcut() {
        let g = build_graph(&records(&[&["A, A", "B, B"], &["B, B", "C, C"]]));
        let n = |s: &str| g.node(&k(s)).unwrap();
        assert!(g.has_edge(n("A A"), n("B B")));
        assert!(g.has_edge(n("B B"), n("C C")));
        assert!(!g.has_edge(n("A A"), n("C C")));
    }

    #[test]
    fn table_one_distances() {
        let g = table_one();
        let t = distances_from(&g, &k("WALTMAN L"));
        let d = |s: &str| t.get(g.node(&k(s)).unwrap());
        assert_eq!(d("WALTMAN L"), Distance::ZERO);
        assert_eq!(d("BOEKHOUT H"), Distance::new(1));
        assert_eq!(d("VAN DER WEIJDEN I"), Distance::new(1));
        assert_eq!(d("MAHLCK P"), Distance::UNREACHABLE);
    }

    #[test]
    fn single_node_laureate() {
        let g = build_graph(&records(&[&["Vinkler, P"]]));
        let t = distances_from(&g, &k("VINKLER P"));
        assert_eq!(t.distances, vec![Distance::ZERO]);
    }

    #[test]
    fn chain_distance_two() {
        let g = build_graph(&records(&[&["W, W", "A, A"], &["A, A", "B, B"]]));
        let t = distances_from(&g, &k("W W"));
        assert_eq!(t.get(g.node(&k("B B")).unwrap()), Distance::new(2));
    }

    #[test]
    fn absent_laureate() {
        let t = distances_from(&table_one(), &k("GARFIELD E"));
        assert!(!t.present);
        assert!(t.distances.iter().all(|d| !d.is_reachable()));
    }

    #[test]
    fn coauthor_counts() {
        let g = table_one();
        assert_eq!(count_coauthors(&g, &k("WALTMAN L")).unwrap(), 2);
        assert_eq!(count_coauthors(&g, &k("MAHLCK P")).unwrap(), 0);
        assert!(matches!(
            count_coauthors(&g, &k("NOBODY X")),
            Err(Error::UnknownAuthor(_))
        ));
        let chain = build_graph(&records(&[&["A, A", "B, B"], &["B, B", "C, C"]]));
        assert_eq!(count_coauthors(&chain, &k("B B")).unwrap(), 2);
    }

    #[test]
    fn distance_cap() {
        assert_eq!(Distance::new(3).capped(Some(2)), Distance::UNREACHABLE);
        assert_eq!(Distance::new(2).capped(Some(2)), Distance::new(2));
        assert_eq!(Distance::new(9).capped(None), Distance::new(9));
        assert_eq!(Distance::UNREACHABLE.step(), Distance::UNREACHABLE);
    }

    #[test]
    fn edge_list_csv() {
        let mut out = Vec::new();
        table_one().write_edge_list(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "author_a,author_b\nBOEKHOUT H,VAN DER WEIJDEN I\nBOEKHOUT H,WALTMAN L\nVAN DER WEIJDEN I,WALTMAN L\n"
        );
    }

    fn random_records(papers: Vec<Vec<u8>>) -> Vec<PaperRecord> {
        let mut recs: Vec<PaperRecord> = papers
            .into_iter()
            .enumerate()
            .map(|(i, authors)| {
                PaperRecord::new(
                    format!("P{i:03}"),
                    authors.into_iter().map(|a| format!("N{a}, X")).collect(),
                )
            })
            .collect();
        assign_keys(&mut recs, &MergeMap::default());
        recs
    }

    proptest! {
        #[test]
        fn graph_invariants(papers in prop::collection::vec(prop::collection::vec(0u8..20, 1..5), 0..25)) {
            let recs = random_records(papers);
            let g = build_graph(&recs);
            for a in 0..g.node_count() as u32 {
                prop_assert!(!g.neighbors(a).contains(&a));
                prop_assert!(!g.papers_of(a).is_empty());
                for &b in g.neighbors(a) {
                    prop_assert!(g.has_edge(b, a));
                }
            }
            for w in 0..g.node_count() as u32 {
                let t = distances_from(&g, g.key(w));
                prop_assert_eq!(t.get(w), Distance::ZERO);
                for a in 0..g.node_count() as u32 {
                    for &b in g.neighbors(a) {
                        match (t.get(a).finite(), t.get(b).finite()) {
                            (Some(x), Some(y)) => prop_assert!(x.abs_diff(y) <= 1),
                            (None, None) => {}
                            _ => prop_assert!(false, "edge crosses component boundary"),
                        }
                    }
                }
            }
        }

        #[test]
        fn build_is_order_independent(
            papers in prop::collection::vec(prop::collection::vec(0u8..15, 1..4), 1..15),
            seed in any::<u64>(),
        ) {
            let recs = random_records(papers);
            let mut shuffled = recs.clone();
            // Deterministic Fisher-Yates driven by the seed.
            let mut s = seed;
            for i in (1..shuffled.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert_eq!(build_graph(&recs), build_graph(&shuffled));
        }
    }
}
