use crate::error::{Error, Result};
use crate::generators::{gen_lower_bound_graph, gen_nested_triangles};
use crate::geometry::Point;
use crate::io::fnv1a;
use crate::model::{Drawing, Graph, Plane3Tree, QuadBuilder, SplitStep, TwoTree};

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Graph file: family tag, derived structure (edges, and for embedded
/// families the rotation system and outer face), and the construction
/// witness the drawers replay. Parsing rebuilds the model from the witness
/// and verifies the recorded structure matches.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GraphFile {
    pub schema: u32,
    pub family: String,
    pub n: u32,
    pub edges: Vec<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer_face: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parents: Option<Vec<(u32, u32)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub insertions: Option<Vec<(u32, u32, u32)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splits: Option<Vec<SplitStep>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
}

/// The parsed, validated in-memory model.
#[derive(Clone, Debug)]
pub enum GraphModel {
    TwoTree(TwoTree),
    Plane3Tree(Plane3Tree),
    NestedTriangles { k: u32, tree: Plane3Tree },
    Bipartite { builder: QuadBuilder, witness: Vec<SplitStep> },
    LowerBound { k: u32, graph: Graph },
    Plain(Graph),
}

impl GraphModel {
    pub fn family(&self) -> &'static str {
        match self {
            GraphModel::TwoTree(_) => "two-tree",
            GraphModel::Plane3Tree(_) => "plane-3-tree",
            GraphModel::NestedTriangles { .. } => "nested-triangles",
            GraphModel::Bipartite { .. } => "bipartite-maximal",
            GraphModel::LowerBound { .. } => "lower-bound",
            GraphModel::Plain(_) => "graph",
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            GraphModel::TwoTree(t) => t.n(),
            GraphModel::Plane3Tree(t) => t.n(),
            GraphModel::NestedTriangles { tree, .. } => tree.n(),
            GraphModel::Bipartite { builder, .. } => builder.n,
            GraphModel::LowerBound { graph, .. } => graph.n,
            GraphModel::Plain(g) => g.n,
        }
    }

    pub fn edges(&self) -> Vec<(u32, u32)> {
        match self {
            GraphModel::TwoTree(t) => t.edges().to_vec(),
            GraphModel::Plane3Tree(t) => t.graph.edges.clone(),
            GraphModel::NestedTriangles { tree, .. } => tree.graph.edges.clone(),
            GraphModel::Bipartite { builder, .. } => builder.edges(),
            GraphModel::LowerBound { graph, .. } => graph.edges.clone(),
            GraphModel::Plain(g) => g.edges.clone(),
        }
    }
}

/// Canonical serialization of a model.
pub fn serialize_graph(model: &GraphModel) -> String {
    let mut file = GraphFile {
        schema: SCHEMA_VERSION,
        family: model.family().to_string(),
        n: model.n(),
        edges: model.edges(),
        rotation: None,
        outer_face: None,
        parents: None,
        insertions: None,
        splits: None,
        k: None,
    };
    match model {
        GraphModel::TwoTree(t) => file.parents = Some(t.parent_pairs().to_vec()),
        GraphModel::Plane3Tree(t) => {
            file.insertions = Some(t.insertions.clone());
            file.rotation = Some(t.graph.rotation.clone());
            file.outer_face = Some(t.graph.outer_face.clone());
        }
        GraphModel::NestedTriangles { k, tree } => {
            file.k = Some(*k);
            file.rotation = Some(tree.graph.rotation.clone());
            file.outer_face = Some(tree.graph.outer_face.clone());
        }
        GraphModel::Bipartite { builder, witness } => {
            file.splits = Some(witness.clone());
            file.rotation = Some(builder.rotation.clone());
            file.outer_face = Some(builder.outer_face.clone());
        }
        GraphModel::LowerBound { k, .. } => file.k = Some(*k),
        GraphModel::Plain(_) => {}
    }
    let mut out = serde_json::to_string_pretty(&file).expect("graph file serializes");
    out.push('\n');
    out
}

/// Parse and validate a graph file: the model is rebuilt from its witness
/// and every recorded derived field must match.
pub fn parse_graph(text: &str) -> Result<GraphModel> {
    let file: GraphFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph file: {e}")))?;
    if file.schema != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "unsupported schema version {}",
            file.schema
        )));
    }
    let model = match file.family.as_str() {
        "two-tree" => {
            let parents = file
                .parents
                .as_ref()
                .ok_or_else(|| Error::Parse("two-tree file missing parents".into()))?;
            GraphModel::TwoTree(TwoTree::from_parent_pairs(parents)?)
        }
        "plane-3-tree" => {
            let ins = file
                .insertions
                .as_ref()
                .ok_or_else(|| Error::Parse("plane-3-tree file missing insertions".into()))?;
            GraphModel::Plane3Tree(Plane3Tree::from_insertions(ins)?)
        }
        "nested-triangles" => {
            let k = file
                .k
                .ok_or_else(|| Error::Parse("nested-triangles file missing k".into()))?;
            GraphModel::NestedTriangles {
                k,
                tree: gen_nested_triangles(k)?,
            }
        }
        "bipartite-maximal" => {
            let splits = file
                .splits
                .clone()
                .ok_or_else(|| Error::Parse("bipartite file missing splits".into()))?;
            let mut builder = QuadBuilder::new();
            for &s in &splits {
                builder.split(s)?;
            }
            GraphModel::Bipartite {
                builder,
                witness: splits,
            }
        }
        "lower-bound" => {
            let k = file
                .k
                .ok_or_else(|| Error::Parse("lower-bound file missing k".into()))?;
            GraphModel::LowerBound {
                k,
                graph: gen_lower_bound_graph(k)?,
            }
        }
        "graph" => GraphModel::Plain(Graph::new(file.n, file.edges.clone())?),
        other => return Err(Error::Parse(format!("unknown family {other:?}"))),
    };

    // Recorded derived structure must agree with the witness.
    if file.n != model.n() {
        return Err(Error::InvariantViolation(format!(
            "file says n = {}, witness gives {}",
            file.n,
            model.n()
        )));
    }
    if file.family != "graph" && file.edges != model.edges() {
        return Err(Error::InvariantViolation(
            "recorded edge list does not match the construction witness".into(),
        ));
    }
    let (rot, outer) = match &model {
        GraphModel::Plane3Tree(t) => (
            Some(&t.graph.rotation),
            Some(&t.graph.outer_face),
        ),
        GraphModel::NestedTriangles { tree, .. } => (
            Some(&tree.graph.rotation),
            Some(&tree.graph.outer_face),
        ),
        GraphModel::Bipartite { builder, .. } => {
            (Some(&builder.rotation), Some(&builder.outer_face))
        }
        _ => (None, None),
    };
    if let (Some(rec), Some(act)) = (file.rotation.as_ref(), rot) {
        if rec != act {
            return Err(Error::InvariantViolation(
                "recorded rotation system does not match the witness".into(),
            ));
        }
    }
    if let (Some(rec), Some(act)) = (file.outer_face.as_ref(), outer) {
        if rec != act {
            return Err(Error::InvariantViolation(
                "recorded outer face does not match the witness".into(),
            ));
        }
    }
    Ok(model)
}

/// Drawing file: coordinates as 17-significant-digit decimal strings (a
/// lossless f64 round trip), tied to its graph by a content hash.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DrawingFile {
    pub schema: u32,
    pub graph_hash: String,
    pub coords: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

pub fn serialize_drawing(
    gamma: &Drawing,
    graph_text: &str,
    epsilon: Option<f64>,
    bound: Option<f64>,
    ratio: Option<f64>,
) -> String {
    let file = DrawingFile {
        schema: SCHEMA_VERSION,
        graph_hash: format!("{:016x}", fnv1a(graph_text.as_bytes())),
        coords: gamma
            .points
            .iter()
            .map(|p| (format!("{:.17e}", p.x), format!("{:.17e}", p.y)))
            .collect(),
        epsilon,
        bound,
        ratio,
    };
    let mut out = serde_json::to_string_pretty(&file).expect("drawing file serializes");
    out.push('\n');
    out
}

/// Parse a drawing file; when the graph file's text is supplied, the hash
/// must match.
pub fn parse_drawing(text: &str, graph_text: Option<&str>) -> Result<Drawing> {
    let file: DrawingFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("drawing file: {e}")))?;
    if file.schema != SCHEMA_VERSION {
        return Err(Error::Parse(format!(
            "unsupported schema version {}",
            file.schema
        )));
    }
    if let Some(gt) = graph_text {
        let expect = format!("{:016x}", fnv1a(gt.as_bytes()));
        if expect != file.graph_hash {
            return Err(Error::InvariantViolation(format!(
                "drawing hash {} does not match graph hash {expect}",
                file.graph_hash
            )));
        }
    }
    let mut pts = Vec::with_capacity(file.coords.len());
    for (i, (xs, ys)) in file.coords.iter().enumerate() {
        let x: f64 = xs
            .parse()
            .map_err(|_| Error::Parse(format!("vertex {i}: bad x coordinate {xs:?}")))?;
        let y: f64 = ys
            .parse()
            .map_err(|_| Error::Parse(format!("vertex {i}: bad y coordinate {ys:?}")))?;
        pts.push(Point::new(x, y));
    }
    Drawing::new(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_bipartite_random, gen_random_2tree};

    #[test]
    fn two_tree_round_trip() {
        let t = gen_random_2tree(20, 3).unwrap();
        let text = serialize_graph(&GraphModel::TwoTree(t.clone()));
        let model = parse_graph(&text).unwrap();
        match model {
            GraphModel::TwoTree(t2) => assert_eq!(t, t2),
            _ => panic!("wrong family"),
        }
        // Canonical form: serialize(parse(x)) == x.
        let model2 = parse_graph(&text).unwrap();
        assert_eq!(serialize_graph(&model2), text);
    }

    #[test]
    fn plane3tree_round_trip() {
        let t = Plane3Tree::from_insertions(&[(0, 1, 2), (0, 1, 3)]).unwrap();
        let text = serialize_graph(&GraphModel::Plane3Tree(t));
        let model = parse_graph(&text).unwrap();
        assert_eq!(serialize_graph(&model), text);
    }

    #[test]
    fn bipartite_round_trip() {
        let (builder, witness) = gen_bipartite_random(15, 9).unwrap();
        let text = serialize_graph(&GraphModel::Bipartite { builder, witness });
        let model = parse_graph(&text).unwrap();
        assert_eq!(serialize_graph(&model), text);
    }

    #[test]
    fn bad_witness_rejected() {
        // Non-adjacent parents in a two-tree file.
        let text = r#"{"schema":1,"family":"two-tree","n":5,"edges":[],
            "parents":[[0,1],[0,1],[2,3]]}"#;
        assert!(matches!(parse_graph(text), Err(Error::InvalidParents { .. })));
        // Tampered edge list.
        let t = gen_random_2tree(6, 1).unwrap();
        let mut file: GraphFile =
            serde_json::from_str(&serialize_graph(&GraphModel::TwoTree(t))).unwrap();
        file.edges[0] = (0, 5);
        let tampered = serde_json::to_string(&file).unwrap();
        assert!(matches!(
            parse_graph(&tampered),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn drawing_round_trip_preserves_bits() {
        let d = Drawing::new(vec![
            Point::new(0.1 + 0.2, -1.0 / 3.0),
            Point::new(f64::MIN_POSITIVE * 1e10, 12345.6789012345678),
        ])
        .unwrap();
        let text = serialize_drawing(&d, "graphtext", Some(0.1), None, None);
        let d2 = parse_drawing(&text, Some("graphtext")).unwrap();
        assert_eq!(d.points, d2.points);
        assert!(parse_drawing(&text, Some("other")).is_err());
    }
}
