//! Bundled example spaces.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::graph::{EdgeDescription, GraphDescription, LengthRepr};
use crate::space::{Cover, GroupDescription, SpaceDescription};

/// Growth rule for the number of unit segments glued at `n` in a tufted line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TuftRule {
    /// `d_n = n`
    Linear,
    /// `d_n = 2^n`
    Exp2,
}

impl TuftRule {
    pub fn count(self, n: usize) -> usize {
        match self {
            TuftRule::Linear => n,
            TuftRule::Exp2 => 1usize << n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExampleName {
    /// Rose with ℓ loops and voltages `a_1..a_ℓ`; the cover is the 2ℓ-regular tree.
    Tree(usize),
    /// Rose with every loop doubled; both copies carry the same voltage.
    Doubled(usize),
    /// Rose with ℓ free loops plus one loop with trivial voltage (a circle at every tree vertex).
    CircleRose(usize),
    /// Two-loop rose whose group is extended by the symbol permutation a1 ↦ a2, a2 ↦ a1.
    RotationT4,
    /// The real line with `d_n` unit segments glued at each `n ≥ 1`, truncated at `horizon`.
    TuftedRay { rule: TuftRule, horizon: usize },
}

pub const EXAMPLE_NAMES: &[&str] = &[
    "tree:L",
    "doubled:L",
    "circle-rose:L",
    "rotation-t4",
    "tufted-ray:linear|exp2:H",
];

impl fmt::Display for ExampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExampleName::Tree(l) => write!(f, "tree:{l}"),
            ExampleName::Doubled(l) => write!(f, "doubled:{l}"),
            ExampleName::CircleRose(l) => write!(f, "circle-rose:{l}"),
            ExampleName::RotationT4 => write!(f, "rotation-t4"),
            ExampleName::TuftedRay { rule, horizon } => {
                let r = match rule {
                    TuftRule::Linear => "linear",
                    TuftRule::Exp2 => "exp2",
                };
                write!(f, "tufted-ray:{r}:{horizon}")
            }
        }
    }
}

impl FromStr for ExampleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let unknown = || Error::UnknownExample(s.to_string());
        let rank = |i: usize| -> Result<usize> {
            match parts.get(i) {
                None => Ok(2),
                Some(p) => {
                    let l: usize = p.parse().map_err(|_| unknown())?;
                    if l == 0 || l > 60 {
                        return Err(Error::InvalidRank(l));
                    }
                    Ok(l)
                }
            }
        };
        let name = match parts[0] {
            "tree" if parts.len() <= 2 => ExampleName::Tree(rank(1)?),
            "doubled" if parts.len() <= 2 => ExampleName::Doubled(rank(1)?),
            "circle-rose" if parts.len() <= 2 => ExampleName::CircleRose(rank(1)?),
            "rotation-t4" if parts.len() == 1 => ExampleName::RotationT4,
            "tufted-ray" if parts.len() <= 3 => {
                let rule = match parts.get(1).copied().unwrap_or("exp2") {
                    "linear" => TuftRule::Linear,
                    "exp2" => TuftRule::Exp2,
                    _ => return Err(unknown()),
                };
                let horizon = match parts.get(2) {
                    None => 14,
                    Some(h) => h.parse().map_err(|_| unknown())?,
                };
                if horizon == 0 || (rule == TuftRule::Exp2 && horizon > 20) {
                    return Err(Error::InvalidParameter(format!("tufted-ray horizon {horizon}")));
                }
                ExampleName::TuftedRay { rule, horizon }
            }
            _ => return Err(unknown()),
        };
        Ok(name)
    }
}

/// A reference value that the example is known to realize.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectedValue {
    pub quantity: String,
    pub value: f64,
    pub basis: String,
}

#[derive(Clone, Debug)]
pub struct ExampleSpec {
    pub name: ExampleName,
    pub description: SpaceDescription,
    pub cover: Cover,
    /// Side-label classes for a symbol quotient, when the example ships one.
    pub partition: Option<Vec<Vec<String>>>,
    /// False for spaces without a cocompact deck action.
    pub has_group: bool,
    pub expected: Vec<ExpectedValue>,
}

fn unit_loop(id: &str) -> EdgeDescription {
    EdgeDescription {
        id: id.to_string(),
        from: 0,
        to: 0,
        length: LengthRepr::Int(1),
        label: id.to_string(),
    }
}

fn rose(loops: &[(String, String)], rank: usize, extension: Option<Vec<Vec<usize>>>) -> SpaceDescription {
    SpaceDescription {
        base_graph: GraphDescription {
            vertices: 1,
            edges: loops.iter().map(|(id, _)| unit_loop(id)).collect(),
        },
        group: GroupDescription { rank, extension },
        voltages: loops
            .iter()
            .map(|(id, w)| (id.clone(), w.clone()))
            .collect::<BTreeMap<_, _>>(),
    }
}

fn free_loops(l: usize) -> Vec<(String, String)> {
    (1..=l).map(|i| (format!("a{i}"), format!("a{i}"))).collect()
}

fn tufted_ray(rule: TuftRule, horizon: usize) -> SpaceDescription {
    // One extra line segment on each side keeps the truncation outside every ball of radius `horizon`.
    let reach = horizon as i64 + 1;
    let line_vertex = |x: i64| (x + reach) as usize;
    let mut edges = Vec::new();
    for x in -reach..reach {
        let id = if x >= 0 { format!("r{x}") } else { format!("n{}", -x) };
        edges.push(EdgeDescription {
            id: id.clone(),
            from: line_vertex(x),
            to: line_vertex(x + 1),
            length: LengthRepr::Int(1),
            label: id,
        });
    }
    let mut next = (2 * reach + 1) as usize;
    for n in 1..=horizon {
        for k in 0..rule.count(n) {
            let id = format!("h{n}x{k}");
            edges.push(EdgeDescription {
                id: id.clone(),
                from: line_vertex(n as i64),
                to: next,
                length: LengthRepr::Int(1),
                label: id,
            });
            next += 1;
        }
    }
    SpaceDescription {
        base_graph: GraphDescription {
            vertices: next,
            edges,
        },
        group: GroupDescription {
            rank: 1,
            extension: None,
        },
        voltages: BTreeMap::new(),
    }
}

pub fn build_example(name: &ExampleName) -> Result<ExampleSpec> {
    let ln = |k: usize| (k as f64).ln();
    let mut partition = None;
    let mut has_group = true;
    let (description, expected) = match *name {
        ExampleName::Tree(l) => (
            rose(&free_loops(l), l, None),
            vec![
                expected("hcrit", ln(2 * l - 1), "ball growth 2ℓ(2ℓ−1)^(k−1) of the Cayley tree"),
                expected("sft", ln(2 * l - 1), "non-backtracking shift with out-degree 2ℓ−1"),
                expected("md", ln(2 * l - 1), "prefix counts 2ℓ(2ℓ−1)^(n−1)"),
                expected("bowen", ln(2 * l - 1), "quotient flow entropy of the tree"),
                expected("delta", 0.0, "trees satisfy the four-point condition with defect 0"),
            ],
        ),
        ExampleName::Doubled(l) => {
            let loops: Vec<_> = (1..=l)
                .flat_map(|i| [(format!("a{i}"), format!("a{i}")), (format!("b{i}"), format!("a{i}"))])
                .collect();
            (
                rose(&loops, l, None),
                vec![
                    expected("hcrit", ln(2 * l - 1), "orbit is the vertex set of the underlying tree"),
                    expected("sft", ln(4 * l - 2), "each symbol forbids its inverse and its twin's inverse"),
                ],
            )
        }
        ExampleName::CircleRose(l) => {
            let mut loops = free_loops(l);
            loops.push(("c1".to_string(), String::new()));
            (
                rose(&loops, l, None),
                vec![
                    expected("hcrit", ln(2 * l - 1), "circles do not change the orbit"),
                    expected("sft", ln(2 * l + 1), "local geodesics of the base wedge of ℓ+1 circles"),
                    expected("hgeod", ln(2 * l - 1), "geodesic lines stay in the tree"),
                ],
            )
        }
        ExampleName::RotationT4 => {
            partition = Some(vec![vec!["a1".into(), "A1".into(), "a2".into(), "A2".into()]]);
            (
                rose(&free_loops(2), 2, Some(vec![vec![2, 3, 0, 1]])),
                vec![
                    expected("hcrit", 3f64.ln(), "finite extension of F_2 acting on the 4-regular tree"),
                    expected("sft", 0.0, "all local geodesic segments identified to one symbol"),
                ],
            )
        }
        ExampleName::TuftedRay { rule, horizon } => {
            has_group = false;
            let hcov = match rule {
                TuftRule::Linear => 0.0,
                TuftRule::Exp2 => 2f64.ln(),
            };
            (
                tufted_ray(rule, horizon),
                vec![
                    expected("hgeod", 0.0, "geodesic lines stay on the line"),
                    expected("hcov", hcov, "ball content n + Σ d_j"),
                ],
            )
        }
    };
    let cover = Cover::from_description(&description)?;
    let cover = match name {
        ExampleName::TuftedRay { horizon, .. } => cover
            .with_basepoint(*horizon + 1)
            .with_open_ends(vec![0, 2 * *horizon + 2]),
        _ => cover,
    };
    Ok(ExampleSpec {
        name: name.clone(),
        description,
        cover,
        partition,
        has_group,
        expected,
    })
}

fn expected(quantity: &str, value: f64, basis: &str) -> ExpectedValue {
    ExpectedValue {
        quantity: quantity.into(),
        value,
        basis: basis.into(),
    }
}

pub fn list_examples() -> Vec<(String, String)> {
    vec![
        ("tree:L".into(), "rose with L loops; cover is the 2L-regular tree".into()),
        ("doubled:L".into(), "rose with each loop doubled; parallel edges in the cover".into()),
        ("circle-rose:L".into(), "tree plus a unit circle at every vertex".into()),
        ("rotation-t4".into(), "4-regular tree with the swap a1 <-> a2 in the group".into()),
        ("tufted-ray:RULE:H".into(), "line with d_n unit hairs at n (RULE linear or exp2), up to H".into()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::graph::Length;

    #[test]
    fn names_round_trip() {
        for s in ["tree:2", "doubled:3", "circle-rose:2", "rotation-t4", "tufted-ray:exp2:14"] {
            let n: ExampleName = s.parse().unwrap();
            assert_eq!(n.to_string(), s);
        }
        assert_eq!("tree".parse::<ExampleName>().unwrap(), ExampleName::Tree(2));
        assert!("tree:0".parse::<ExampleName>().is_err());
        assert!("torus".parse::<ExampleName>().is_err());
    }

    #[test]
    fn tree_two_is_a_two_loop_rose() {
        let ex = build_example(&ExampleName::Tree(2)).unwrap();
        assert_eq!(ex.cover.base().vertex_count(), 1);
        assert_eq!(ex.cover.base().edge_count(), 2);
        assert_eq!(ex.description.voltages["a1"], "a1");
        assert_eq!(ex.description.voltages["a2"], "a2");
    }

    #[test]
    fn doubled_voltages() {
        let ex = build_example(&ExampleName::Doubled(2)).unwrap();
        let v: Vec<_> = ex.description.voltages.values().cloned().collect();
        assert_eq!(v, ["a1", "a2", "a1", "a2"]);
        assert_eq!(ex.cover.base().edge_count(), 4);
    }

    #[test]
    fn circle_rose_has_trivial_loop() {
        let ex = build_example(&ExampleName::CircleRose(2)).unwrap();
        assert_eq!(ex.description.voltages["c1"], "");
        assert_eq!(ex.cover.base().edge_count(), 3);
    }

    #[test]
    fn rotation_ships_extension_and_partition() {
        let ex = build_example(&ExampleName::RotationT4).unwrap();
        assert_eq!(ex.cover.spec().finite_order(), 2);
        assert_eq!(ex.partition.as_ref().unwrap().len(), 1);
    }

    #[test]
    fn tufted_ray_sizes() {
        let ex = build_example(&ExampleName::TuftedRay {
            rule: TuftRule::Exp2,
            horizon: 4,
        })
        .unwrap();
        let g = ex.cover.base();
        assert_eq!(g.edge_count(), 10 + 2 + 4 + 8 + 16);
        assert!(!ex.has_group);
        let patch = ex.cover.expand(Length::from_integer(2)).unwrap();
        // line [-2, 2] plus two hair tips at 1
        assert_eq!(patch.len(), 5 + 2);
    }

    /// Hand-built radius-2 adjacency of every rose example agrees with the cover expansion.
    #[test]
    fn radius_two_adjacency_matches_hand_construction() {
        for (name, degree, ball) in [
            (ExampleName::Tree(2), 4, 17),
            (ExampleName::Doubled(2), 8, 17),
            (ExampleName::CircleRose(2), 6, 17),
            (ExampleName::Tree(3), 6, 1 + 6 + 30),
        ] {
            let ex = build_example(&name).unwrap();
            let patch = ex.cover.expand(Length::from_integer(2)).unwrap();
            assert_eq!(patch.len(), ball, "{name}");
            for i in 0..patch.len() {
                assert_eq!(patch.neighbors(i).count(), degree);
                for (s, j) in patch.neighbors(i) {
                    if let Some(j) = j {
                        let back = patch.neighbor(j, s.reverse());
                        assert!(back.is_some());
                        // the hand rule: (v, g) --s--> (v, g·voltage(s))
                        let g = &patch.vertex(i).elem;
                        let h = &patch.vertex(j).elem;
                        let expect = ex.cover.spec().multiply(g, ex.cover.voltages().get(s)).unwrap();
                        assert_eq!(*h, expect);
                    }
                }
            }
        }
    }
}
