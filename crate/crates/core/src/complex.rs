//! Flag (clique) filtrations of weighted networks.
//!
//! Scanning the scale parameter from 0 to 1 adds an edge as soon as its
//! weight is reached, and fills in every clique the moment its last edge
//! arrives. Concretely: vertices enter at 0, an edge at its weight, and a
//! higher simplex at the maximum weight among its edges. The resulting
//! simplex list is sorted by `(value, dimension, vertices)`, which guarantees
//! that every face precedes its cofaces — the order the boundary-matrix
//! reduction in [`crate::homology`] relies on.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::corpus::ConceptNetwork;
use crate::error::{Error, Result};

/// A single simplex: strictly increasing vertex indices plus the filtration
/// value at which it enters.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<usize>,
    value: f64,
}

impl Simplex {
    pub fn new(vertices: Vec<usize>, value: f64) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidFiltration {
                reason: "simplex with no vertices".into(),
            });
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFiltration {
                reason: "simplex vertices must be strictly increasing".into(),
            });
        }
        if !value.is_finite() {
            return Err(Error::InvalidFiltration {
                reason: "non-finite filtration value".into(),
            });
        }
        Ok(Self { vertices, value })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Dimension k of a k-simplex (vertex count minus one).
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// The codimension-1 faces, each obtained by dropping one vertex.
    pub fn faces(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.vertices.len()).map(move |skip| {
            self.vertices
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, v)| *v)
                .collect()
        })
    }

    fn sort_key(&self) -> (f64, usize, &[usize]) {
        (self.value, self.dim(), &self.vertices)
    }
}

fn simplex_order(a: &Simplex, b: &Simplex) -> core::cmp::Ordering {
    let (va, da, wa) = a.sort_key();
    let (vb, db, wb) = b.sort_key();
    va.total_cmp(&vb)
        .then_with(|| da.cmp(&db))
        .then_with(|| wa.cmp(wb))
}

/// An ordered list of simplices forming a filtration: faces appear before
/// cofaces and values never decrease along the order.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    simplices: Vec<Simplex>,
    max_dim: usize,
    vertex_count: usize,
}

impl Filtration {
    /// Sorts the given simplices into filtration order and checks the face
    /// closure invariant: every codimension-1 face must be present with a
    /// value no larger than its coface's.
    pub fn from_simplices(simplices: Vec<Simplex>, max_dim: usize) -> Result<Self> {
        if max_dim < 1 {
            return Err(Error::InvalidMaxDim { max_dim });
        }
        let mut simplices = simplices;
        simplices.sort_by(simplex_order);
        for pair in simplices.windows(2) {
            if pair[0].vertices == pair[1].vertices {
                return Err(Error::InvalidFiltration {
                    reason: alloc::format!("duplicate simplex {:?}", pair[0].vertices),
                });
            }
        }

        let mut value_of: BTreeMap<&[usize], f64> = BTreeMap::new();
        for s in &simplices {
            value_of.insert(&s.vertices, s.value);
        }
        let mut vertex_count = 0usize;
        for s in &simplices {
            if s.dim() > max_dim {
                return Err(Error::InvalidFiltration {
                    reason: alloc::format!(
                        "simplex {:?} exceeds max dimension {max_dim}",
                        s.vertices
                    ),
                });
            }
            if s.dim() == 0 {
                vertex_count += 1;
                continue;
            }
            for face in s.faces() {
                match value_of.get(face.as_slice()) {
                    Some(fv) if *fv <= s.value => {}
                    Some(_) => {
                        return Err(Error::InvalidFiltration {
                            reason: alloc::format!(
                                "face {face:?} enters after its coface {:?}",
                                s.vertices
                            ),
                        })
                    }
                    None => {
                        return Err(Error::InvalidFiltration {
                            reason: alloc::format!("face {face:?} of {:?} missing", s.vertices),
                        })
                    }
                }
            }
        }
        Ok(Self {
            simplices,
            max_dim,
            vertex_count,
        })
    }

    /// Builds the flag filtration of a weighted network, including every
    /// clique on at most `max_dim + 1` vertices.
    ///
    /// To read off homology through dimension `k`, build with
    /// `max_dim = k + 1`.
    pub fn flag(network: &ConceptNetwork, max_dim: usize) -> Result<Self> {
        if max_dim < 1 {
            return Err(Error::InvalidMaxDim { max_dim });
        }
        let n = network.node_count();
        // Neighbor lists sorted by vertex id; weights looked up by binary search.
        let mut adjacency: Vec<Vec<(usize, f64)>> = alloc::vec![Vec::new(); n];
        for edge in network.edges() {
            adjacency[edge.source].push((edge.target, edge.weight));
            adjacency[edge.target].push((edge.source, edge.weight));
        }
        for list in &mut adjacency {
            list.sort_unstable_by_key(|(v, _)| *v);
        }
        let weight = |a: usize, b: usize| -> f64 {
            let list = &adjacency[a];
            let at = list
                .binary_search_by_key(&b, |(v, _)| *v)
                .expect("edge exists");
            list[at].1
        };

        let mut simplices: Vec<Simplex> = Vec::new();
        for v in 0..n {
            simplices.push(Simplex {
                vertices: alloc::vec![v],
                value: 0.0,
            });
        }

        // Depth-first clique expansion over increasing vertex ids: `clique`
        // holds the current members, `candidates` the common neighbors larger
        // than every member. Each extension updates the running value with
        // the new edges' weights.
        let mut clique: Vec<usize> = Vec::with_capacity(max_dim + 1);
        for v in 0..n {
            clique.push(v);
            let candidates: Vec<usize> = adjacency[v]
                .iter()
                .map(|(u, _)| *u)
                .filter(|u| *u > v)
                .collect();
            expand_cliques(
                &adjacency,
                &weight,
                &mut clique,
                &candidates,
                0.0,
                max_dim,
                &mut simplices,
            );
            clique.pop();
        }

        simplices.sort_by(simplex_order);
        Ok(Self {
            simplices,
            max_dim,
            vertex_count: n,
        })
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Largest filtration value present, or 0 for an empty filtration.
    pub fn max_value(&self) -> f64 {
        self.simplices.last().map_or(0.0, |s| s.value)
    }
}

fn expand_cliques<W: Fn(usize, usize) -> f64>(
    adjacency: &[Vec<(usize, f64)>],
    weight: &W,
    clique: &mut Vec<usize>,
    candidates: &[usize],
    value: f64,
    max_dim: usize,
    out: &mut Vec<Simplex>,
) {
    for (i, &u) in candidates.iter().enumerate() {
        let mut new_value = value;
        for &member in clique.iter() {
            let w = weight(member, u);
            if w > new_value {
                new_value = w;
            }
        }
        clique.push(u);
        out.push(Simplex {
            vertices: clique.clone(),
            value: new_value,
        });
        if clique.len() <= max_dim {
            // Narrow the candidate pool to neighbors of u beyond u itself.
            let next: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|c| adjacency[u].binary_search_by_key(c, |(v, _)| *v).is_ok())
                .collect();
            if !next.is_empty() {
                expand_cliques(adjacency, weight, clique, &next, new_value, max_dim, out);
            }
        }
        clique.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ConceptNetwork, NetworkEdge, NetworkNode};
    use alloc::format;
    use alloc::vec;

    pub(crate) fn network_from_edges(n: usize, edges: &[(usize, usize, f64)]) -> ConceptNetwork {
        let nodes = (0..n)
            .map(|i| NetworkNode {
                concept: format!("v{i:04}"),
                frequency: 1,
            })
            .collect();
        let edges = edges
            .iter()
            .map(|(a, b, w)| NetworkEdge {
                source: (*a).min(*b),
                target: (*a).max(*b),
                weight: *w,
            })
            .collect();
        ConceptNetwork::new(nodes, edges, (2000, 2010)).unwrap()
    }

    #[test]
    fn triangle_enters_at_max_edge_weight() {
        let net = network_from_edges(3, &[(0, 1, 0.2), (1, 2, 0.4), (0, 2, 0.6)]);
        let f = Filtration::flag(&net, 2).unwrap();
        let tri: Vec<&Simplex> = f.simplices().iter().filter(|s| s.dim() == 2).collect();
        assert_eq!(tri.len(), 1);
        assert_eq!(tri[0].vertices(), &[0, 1, 2]);
        assert_eq!(tri[0].value(), 0.6);
    }

    #[test]
    fn four_cycle_has_no_triangles() {
        let net = network_from_edges(4, &[(0, 1, 0.5), (1, 2, 0.5), (2, 3, 0.5), (0, 3, 0.5)]);
        let f = Filtration::flag(&net, 2).unwrap();
        assert!(f.simplices().iter().all(|s| s.dim() <= 1));
        assert_eq!(f.len(), 4 + 4);
    }

    /// Brute-force clique census: every vertex subset of size <= max_dim + 1
    /// that is pairwise connected must appear exactly once, at the max of its
    /// edge weights.
    #[test]
    fn complete_graph_matches_brute_force_enumeration() {
        let edges: Vec<(usize, usize, f64)> = (0..4)
            .flat_map(|a| ((a + 1)..4).map(move |b| (a, b, 0.3)))
            .collect();
        let net = network_from_edges(4, &edges);
        let f = Filtration::flag(&net, 3).unwrap();

        let mut expected: Vec<(Vec<usize>, f64)> = Vec::new();
        for mask in 1u32..16 {
            let subset: Vec<usize> = (0..4).filter(|v| mask & (1 << v) != 0).collect();
            // K4 is complete, so every subset is a clique at value 0.3
            // (vertices at 0).
            let value = if subset.len() >= 2 { 0.3 } else { 0.0 };
            expected.push((subset, value));
        }
        assert_eq!(f.len(), expected.len());
        for (vertices, value) in expected {
            assert!(f
                .simplices()
                .iter()
                .any(|s| s.vertices() == vertices.as_slice() && s.value() == value));
        }
        // Four triangles and one tetrahedron, all at 0.3.
        assert_eq!(f.simplices().iter().filter(|s| s.dim() == 2).count(), 4);
        assert_eq!(f.simplices().iter().filter(|s| s.dim() == 3).count(), 1);
    }

    #[test]
    fn complete_graph_simplex_counts() {
        // K_v at max_dim = 3 holds v + C(v,2) + C(v,3) + C(v,4) simplices.
        for v in 1..=7usize {
            let edges: Vec<(usize, usize, f64)> = (0..v)
                .flat_map(|a| ((a + 1)..v).map(move |b| (a, b, 0.5)))
                .collect();
            let net = network_from_edges(v, &edges);
            let f = Filtration::flag(&net, 3).unwrap();
            let choose = |n: usize, k: usize| -> usize {
                if k > n {
                    return 0;
                }
                (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
            };
            assert_eq!(f.len(), v + choose(v, 2) + choose(v, 3) + choose(v, 4));
        }
    }

    #[test]
    fn faces_precede_cofaces_and_values_non_decreasing() {
        let net = network_from_edges(
            5,
            &[
                (0, 1, 0.9),
                (1, 2, 0.1),
                (0, 2, 0.5),
                (2, 3, 0.3),
                (3, 4, 0.2),
                (2, 4, 0.8),
            ],
        );
        let f = Filtration::flag(&net, 3).unwrap();
        let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut last = 0.0f64;
        for (at, s) in f.simplices().iter().enumerate() {
            assert!(s.value() >= last);
            last = s.value();
            if s.dim() > 0 {
                for face in s.faces() {
                    assert!(
                        seen.contains_key(&face),
                        "face {face:?} after {:?}",
                        s.vertices()
                    );
                }
            }
            seen.insert(s.vertices().to_vec(), at);
        }
    }

    #[test]
    fn empty_network_gives_empty_filtration() {
        let net = ConceptNetwork::new(Vec::<NetworkNode>::new(), vec![], (2000, 2010)).unwrap();
        let f = Filtration::flag(&net, 2).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn from_simplices_rejects_missing_face() {
        let simplices = vec![
            Simplex::new(vec![0], 0.0).unwrap(),
            Simplex::new(vec![1], 0.0).unwrap(),
            // Edge (0, 2) without vertex 2.
            Simplex::new(vec![0, 2], 0.5).unwrap(),
        ];
        assert!(matches!(
            Filtration::from_simplices(simplices, 1),
            Err(Error::InvalidFiltration { .. })
        ));
    }

    #[test]
    fn from_simplices_rejects_face_after_coface() {
        let simplices = vec![
            Simplex::new(vec![0], 0.0).unwrap(),
            Simplex::new(vec![1], 0.0).unwrap(),
            Simplex::new(vec![2], 0.0).unwrap(),
            Simplex::new(vec![0, 1], 0.9).unwrap(),
            Simplex::new(vec![0, 2], 0.2).unwrap(),
            Simplex::new(vec![1, 2], 0.2).unwrap(),
            Simplex::new(vec![0, 1, 2], 0.5).unwrap(),
        ];
        assert!(matches!(
            Filtration::from_simplices(simplices, 2),
            Err(Error::InvalidFiltration { .. })
        ));
    }

    #[test]
    fn determinism() {
        let net = network_from_edges(
            6,
            &[
                (0, 1, 0.4),
                (1, 2, 0.4),
                (0, 2, 0.4),
                (3, 4, 0.7),
                (4, 5, 0.2),
                (3, 5, 0.9),
            ],
        );
        let a = Filtration::flag(&net, 3).unwrap();
        let b = Filtration::flag(&net, 3).unwrap();
        assert_eq!(a, b);
    }
}
