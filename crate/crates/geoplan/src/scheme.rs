//! Storage schemes: uncoded file assignments and scalar linear codes.
//!
//! File indices are 0-based internally and 1-based in JSON and in
//! rendered formulas, matching the W₁…W_k naming convention.

use serde_json::{json, Value};

use crate::field::{unit_vector, FieldMatrix, FieldSpec};
use crate::network::Network;
use crate::Error;

/// Uncoded placement: node `i` stores file `assignment[i]` (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncodedScheme {
    pub assignment: Vec<usize>,
    pub file_count: usize,
}

impl UncodedScheme {
    pub fn new(assignment: Vec<usize>, file_count: usize) -> Result<Self, Error> {
        if assignment.iter().any(|&f| f >= file_count) {
            return Err(Error::Parse("file index out of range".into()));
        }
        Ok(UncodedScheme {
            assignment,
            file_count,
        })
    }

    /// True when every file is stored on at least one node.
    pub fn covers_all_files(&self) -> bool {
        (0..self.file_count).all(|f| self.assignment.contains(&f))
    }

    /// Embeds the placement as a linear scheme with unit columns.
    pub fn as_linear(&self, field: FieldSpec) -> Result<LinearScheme, Error> {
        if !self.covers_all_files() {
            return Err(Error::RankDeficient);
        }
        LinearScheme::new(field, self.generator_matrix(field))
    }

    /// Unit-column generator without the rank requirement; used for
    /// evaluating placements that may not cover every file.
    pub fn generator_matrix(&self, field: FieldSpec) -> FieldMatrix {
        let mut g = FieldMatrix::zero(field, self.file_count, self.assignment.len());
        for (node, &file) in self.assignment.iter().enumerate() {
            g.set(file, node, 1);
        }
        g
    }
}

/// Scalar linear code: node `i` stores the combination given by column
/// `i` of a full-rank k×n generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearScheme {
    pub field: FieldSpec,
    pub generator: FieldMatrix,
}

impl LinearScheme {
    pub fn new(field: FieldSpec, generator: FieldMatrix) -> Result<Self, Error> {
        if generator.rank() != generator.rows {
            return Err(Error::RankDeficient);
        }
        Ok(LinearScheme { field, generator })
    }

    pub fn file_count(&self) -> usize {
        self.generator.rows
    }

    pub fn node_count(&self) -> usize {
        self.generator.cols
    }

    /// Human-readable stored formula for a node, e.g. `W1+W2+W4` over
    /// GF(2) or `W1+2*W2` over larger fields.
    pub fn node_formula(&self, node: usize) -> String {
        let col = self.generator.column(node);
        let mut terms = Vec::new();
        for (file, &coeff) in col.iter().enumerate() {
            match coeff {
                0 => {}
                1 => terms.push(format!("W{}", file + 1)),
                c => terms.push(format!("{c}*W{}", file + 1)),
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

/// Either kind of scheme; the unit of JSON interchange and evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeKind {
    Uncoded(UncodedScheme),
    Linear(LinearScheme),
}

impl SchemeKind {
    pub fn file_count(&self) -> usize {
        match self {
            SchemeKind::Uncoded(u) => u.file_count,
            SchemeKind::Linear(l) => l.file_count(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            SchemeKind::Uncoded(u) => u.assignment.len(),
            SchemeKind::Linear(l) => l.node_count(),
        }
    }

    /// Generator-matrix view; unit columns for uncoded placements.
    pub fn generator_matrix(&self, default_field: FieldSpec) -> FieldMatrix {
        match self {
            SchemeKind::Uncoded(u) => u.generator_matrix(default_field),
            SchemeKind::Linear(l) => l.generator.clone(),
        }
    }

    pub fn from_json(text: &str, net: &Network) -> Result<Self, Error> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("expected JSON object".into()))?;
        match obj.get("type").and_then(Value::as_str) {
            Some("uncoded") => {
                let map = obj
                    .get("assignment")
                    .and_then(Value::as_object)
                    .ok_or_else(|| Error::Parse("missing \"assignment\" object".into()))?;
                let mut assignment = vec![usize::MAX; net.len()];
                let mut file_count = 0;
                for (name, file) in map {
                    let i = net.node_index(name)?;
                    let f = file
                        .as_u64()
                        .filter(|&f| f >= 1)
                        .ok_or_else(|| Error::Parse(format!("bad file index for {name}")))?
                        as usize;
                    assignment[i] = f - 1;
                    file_count = file_count.max(f);
                }
                if assignment.contains(&usize::MAX) {
                    return Err(Error::Parse("assignment must cover every node".into()));
                }
                // optional explicit k, for placements that skip a file
                if let Some(k) = obj.get("k").and_then(Value::as_u64) {
                    if (k as usize) < file_count {
                        return Err(Error::Parse("\"k\" below highest assigned file".into()));
                    }
                    file_count = k as usize;
                }
                Ok(SchemeKind::Uncoded(UncodedScheme::new(
                    assignment, file_count,
                )?))
            }
            Some("linear") => {
                let p = obj
                    .get("field")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("missing \"field\"".into()))?;
                let field = FieldSpec::new(p)?;
                let rows: Vec<Vec<u64>> = obj
                    .get("generator")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("missing \"generator\"".into()))?
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| Error::Parse("generator rows must be arrays".into()))?
                            .iter()
                            .map(|x| {
                                x.as_u64()
                                    .ok_or_else(|| Error::Parse("generator entries must be non-negative integers".into()))
                            })
                            .collect()
                    })
                    .collect::<Result<_, _>>()?;
                let g = FieldMatrix::from_rows(field, rows)?;
                if g.cols != net.len() {
                    return Err(Error::DimensionMismatch(format!(
                        "generator has {} columns for {} nodes",
                        g.cols,
                        net.len()
                    )));
                }
                Ok(SchemeKind::Linear(LinearScheme::new(field, g)?))
            }
            _ => Err(Error::Parse("scheme \"type\" must be \"uncoded\" or \"linear\"".into())),
        }
    }

    pub fn to_json(&self, net: &Network) -> Value {
        match self {
            SchemeKind::Uncoded(u) => {
                let map: serde_json::Map<String, Value> = net
                    .names()
                    .iter()
                    .zip(&u.assignment)
                    .map(|(name, &f)| (name.clone(), Value::from(f as u64 + 1)))
                    .collect();
                json!({"format": 1, "type": "uncoded", "assignment": map})
            }
            SchemeKind::Linear(l) => json!({
                "format": 1,
                "type": "linear",
                "field": l.field.characteristic(),
                "generator": l.generator.row_vecs(),
                "formulas": net.names().iter().enumerate()
                    .map(|(i, name)| format!("{name}: X = {}", l.node_formula(i)))
                    .collect::<Vec<_>>(),
            }),
        }
    }
}

/// Finds coefficients `v` with `G_S · v = e_j`: the stored symbols of
/// the selected nodes combine to file `j`. `None` when file `j` is
/// outside the selected columns' span.
pub fn solve_decode(columns: &FieldMatrix, j: usize) -> Option<Vec<u64>> {
    columns.solve(&unit_vector(columns.rows, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aws6() -> Network {
        Network::from_json(include_str!("../../../fixtures/aws6.json")).unwrap()
    }

    #[test]
    fn identity_embedding() {
        let s = UncodedScheme::new(vec![0, 1, 2], 3).unwrap();
        let lin = s.as_linear(FieldSpec::GF2).unwrap();
        for i in 0..3 {
            assert_eq!(lin.generator.column(i), unit_vector(3, i));
        }
    }

    #[test]
    fn repeated_file_embedding_keeps_rank() {
        // Table-I-shaped placement: A(W1) B(W2) C(W3) D(W2)
        let s = UncodedScheme::new(vec![0, 1, 2, 1], 3).unwrap();
        let lin = s.as_linear(FieldSpec::GF2).unwrap();
        assert_eq!(lin.generator.column(3), unit_vector(3, 1));
        assert_eq!(lin.generator.rank(), 3);
    }

    #[test]
    fn missing_file_is_rank_deficient() {
        let s = UncodedScheme::new(vec![0, 0, 0, 0], 3).unwrap();
        assert!(matches!(
            s.as_linear(FieldSpec::GF2),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn solve_decode_trivial_and_unreachable() {
        let s = UncodedScheme::new(vec![0, 1, 2], 3).unwrap();
        let g = s.generator_matrix(FieldSpec::GF2);
        let v = solve_decode(&g.select_columns(&[1]), 1).unwrap();
        assert_eq!(v, vec![1]);

        let cols = FieldMatrix::from_rows(
            FieldSpec::GF2,
            vec![
                vec![1, 0, 0, 1],
                vec![0, 1, 0, 1],
                vec![0, 0, 0, 0],
                vec![0, 0, 1, 1],
            ],
        )
        .unwrap();
        assert!(solve_decode(&cols, 2).is_none());
    }

    #[test]
    fn aws_seoul_decode_w2() {
        // Columns of {Seoul, Mumbai, Oregon} in the Table-II binary code:
        // W1+W2+W4, W1, W4 -> W2 = X_S + X_M + X_O.
        let cols = FieldMatrix::from_rows(
            FieldSpec::GF2,
            vec![vec![1, 1, 0], vec![1, 0, 0], vec![0, 0, 0], vec![1, 0, 1]],
        )
        .unwrap();
        let v = solve_decode(&cols, 1).unwrap();
        assert_eq!(v, vec![1, 1, 1]);
    }

    #[test]
    fn json_roundtrip_both_kinds() {
        let net = aws6();
        let uncoded = SchemeKind::Uncoded(UncodedScheme::new(vec![0, 1, 2, 3, 2, 1], 4).unwrap());
        let text = serde_json::to_string(&uncoded.to_json(&net)).unwrap();
        assert_eq!(SchemeKind::from_json(&text, &net).unwrap(), uncoded);

        let g = FieldMatrix::from_rows(
            FieldSpec::GF2,
            vec![
                vec![1, 1, 0, 0, 0, 0],
                vec![1, 0, 1, 0, 0, 0],
                vec![0, 0, 0, 1, 1, 0],
                vec![1, 0, 0, 0, 0, 1],
            ],
        )
        .unwrap();
        let linear = SchemeKind::Linear(LinearScheme::new(FieldSpec::GF2, g).unwrap());
        let text = serde_json::to_string(&linear.to_json(&net)).unwrap();
        assert_eq!(SchemeKind::from_json(&text, &net).unwrap(), linear);
    }

    #[test]
    fn formulas_render() {
        let f = FieldSpec::new(3).unwrap();
        let g = FieldMatrix::from_rows(f, vec![vec![1, 0], vec![2, 1]]).unwrap();
        let lin = LinearScheme::new(f, g).unwrap();
        assert_eq!(lin.node_formula(0), "W1+2*W2");
        assert_eq!(lin.node_formula(1), "W2");
    }
}
