//! Scheme synthesis: optimal uncoded placements from k-colorings, binary
//! XOR codes from (k+1)-colorings, and the Vandermonde MDS baseline.

use std::collections::BTreeSet;

use crate::coloring::Coloring;
use crate::eval::evaluate;
use crate::field::{FieldMatrix, FieldSpec};
use crate::network::Network;
use crate::nngraph::NearestNeighborGraph;
use crate::rational::Rat;
use crate::scheme::{LinearScheme, SchemeKind, UncodedScheme};
use crate::Error;

/// Turns a proper k-coloring of the extended graph into an optimal
/// uncoded placement: color c stores file c.
pub fn uncoded_from_coloring(
    g: &NearestNeighborGraph,
    c: &Coloring,
) -> Result<UncodedScheme, Error> {
    let k = g.k();
    if c.color_count != k {
        return Err(Error::WrongColorCount {
            got: c.color_count,
            want: k,
        });
    }
    if !c.is_proper(&g.extend()) {
        return Err(Error::NotAProperColoring);
    }
    UncodedScheme::new(c.colors.clone(), k)
}

/// Per-coded-node bookkeeping behind a binary code: the receive set and
/// the missing-file map over `{i} ∪ ℛ(i)`.
#[derive(Debug, Clone)]
pub struct CodedNodePlan {
    pub node: usize,
    pub receive_set: Vec<usize>,
    /// (member of {i} ∪ ℛ(i), its missing file index)
    pub missing: Vec<(usize, usize)>,
    /// XOR support of the stored symbol (set semantics).
    pub xor_files: Vec<usize>,
}

/// The unique file unavailable to `r` among itself and its uncoded
/// in-neighbors, given the color-to-file map (`None` marks the coded
/// color).
fn missing_file(
    g: &NearestNeighborGraph,
    color_file: &[Option<usize>],
    colors: &[usize],
    r: usize,
) -> Result<usize, Error> {
    let k = g.k();
    let mut present = vec![false; k];
    for &t in std::iter::once(&r).chain(g.in_neighbors(r)) {
        if let Some(f) = color_file[colors[t]] {
            present[f] = true;
        }
    }
    let absent: Vec<usize> = (0..k).filter(|&f| !present[f]).collect();
    match absent.as_slice() {
        [f] => Ok(*f),
        _ => Err(Error::MissingFileUndefined { node: r }),
    }
}

/// Builds a binary XOR code from a proper (k+1)-coloring: nodes of the
/// coded color store the XOR of the missing files of themselves and
/// their receive sets; all other nodes store the file of their color.
pub fn binary_code_from_coloring(
    g: &NearestNeighborGraph,
    c: &Coloring,
    coded_color: usize,
    color_to_file: &[Option<usize>],
) -> Result<(LinearScheme, Vec<CodedNodePlan>), Error> {
    let k = g.k();
    let n = g.node_count();
    if c.color_count != k + 1 {
        return Err(Error::WrongColorCount {
            got: c.color_count,
            want: k + 1,
        });
    }
    if !c.is_proper(&g.extend()) {
        return Err(Error::NotAProperColoring);
    }
    assert!(coded_color < c.color_count);
    assert_eq!(color_to_file.len(), c.color_count);
    assert!(color_to_file[coded_color].is_none());

    let mut generator = FieldMatrix::zero(FieldSpec::GF2, k, n);
    let mut coded_plans = Vec::new();
    for i in 0..n {
        if let Some(file) = color_to_file[c.colors[i]] {
            generator.set(file, i, 1);
            continue;
        }
        let receive_set = g.receive_set(i)?;
        let mut missing = Vec::new();
        let mut xor_files = BTreeSet::new();
        for &r in std::iter::once(&i).chain(&receive_set) {
            let f = missing_file(g, color_to_file, &c.colors, r)?;
            missing.push((r, f));
            xor_files.insert(f);
        }
        for &f in &xor_files {
            generator.set(f, i, 1);
        }
        coded_plans.push(CodedNodePlan {
            node: i,
            receive_set,
            missing,
            xor_files: xor_files.into_iter().collect(),
        });
    }
    let scheme = LinearScheme::new(FieldSpec::GF2, generator)?;
    Ok((scheme, coded_plans))
}

/// Canonical color→file map: uncoded colors take files 1..k in order of
/// the smallest node index wearing each color. File labels are
/// interchangeable, so this fixes one representative per coded-color
/// choice.
pub fn canonical_color_map(c: &Coloring, coded_color: usize) -> Vec<Option<usize>> {
    let mut map = vec![None; c.color_count];
    let mut next_file = 0;
    for &color in &c.colors {
        if color != coded_color && map[color].is_none() {
            map[color] = Some(next_file);
            next_file += 1;
        }
    }
    map
}

/// One binary code per coded-color choice, sorted by evaluated average
/// latency ascending (ties by coded color index).
pub fn enumerate_binary_codes(
    net: &Network,
    g: &NearestNeighborGraph,
    c: &Coloring,
) -> Result<Vec<(LinearScheme, Vec<CodedNodePlan>, Rat)>, Error> {
    if g.k() < 2 {
        return Err(Error::KOutOfRange {
            k: g.k(),
            n: g.node_count(),
        });
    }
    let mut out = Vec::new();
    for coded_color in c.used_colors() {
        let map = canonical_color_map(c, coded_color);
        let (scheme, plans) = binary_code_from_coloring(g, c, coded_color, &map)?;
        let report = evaluate(net, &SchemeKind::Linear(scheme.clone()))?;
        out.push((scheme, plans, report.average));
    }
    out.sort_by_key(|a| a.2);
    Ok(out)
}

/// k×n Vandermonde generator over GF(p) on evaluation points 1..n;
/// needs p > n so the points are distinct and every k columns are
/// independent.
pub fn scalar_mds_scheme(
    net: &Network,
    k: usize,
    field: FieldSpec,
) -> Result<LinearScheme, Error> {
    let n = net.len();
    if k < 1 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if field.characteristic() <= n as u64 {
        return Err(Error::FieldTooSmall {
            p: field.characteristic(),
            n,
        });
    }
    let mut g = FieldMatrix::zero(field, k, n);
    for col in 0..n {
        let point = (col + 1) as u64;
        for row in 0..k {
            g.set(row, col, field.pow(point, row as u64));
        }
    }
    LinearScheme::new(field, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{k_colorable, DEFAULT_EXPANSION_BUDGET};
    use crate::eval::is_admissible_on;
    use crate::nngraph::build_nn_graphs;
    use crate::rational::rat;
    use itertools::Itertools;

    fn aws6() -> Network {
        Network::from_json(include_str!("../../../fixtures/aws6.json")).unwrap()
    }

    fn example2() -> Network {
        Network::from_json(include_str!("../../../fixtures/example2-like.json")).unwrap()
    }

    #[test]
    fn uncoded_from_3_coloring_meets_both_bounds() {
        let net = example2();
        let g = build_nn_graphs(&net, 3, 64).unwrap().graphs.remove(0);
        let h = g.extend();
        // A and C are the only non-adjacent pair
        assert!(!h.has_edge(0, 2));
        let c = k_colorable(&h, 3, DEFAULT_EXPANSION_BUDGET)
            .unwrap()
            .expect("example2 extended graph must be 3-colorable");
        assert_eq!(c.colors[0], c.colors[2]);
        let scheme = uncoded_from_coloring(&g, &c).unwrap();
        let report = evaluate(&net, &SchemeKind::Uncoded(scheme.clone())).unwrap();
        assert!(report.average_optimal);
        assert!(report.per_node_worstcase_optimal.iter().all(|&b| b));
        assert!(is_admissible_on(&SchemeKind::Uncoded(scheme), &g).0);
    }

    #[test]
    fn rainbow_identity_when_n_equals_k() {
        let names = (0..3).map(|i| format!("n{i}")).collect();
        let rtt = (0..3)
            .map(|i| (0..3).map(|j| if i == j { rat(0) } else { rat(4) }).collect())
            .collect();
        let net = Network::new(names, rtt).unwrap();
        let g = build_nn_graphs(&net, 3, 64).unwrap().graphs.remove(0);
        let c = Coloring {
            colors: vec![0, 1, 2],
            color_count: 3,
        };
        let scheme = uncoded_from_coloring(&g, &c).unwrap();
        assert_eq!(scheme.assignment, vec![0, 1, 2]);
        assert!(is_admissible_on(&SchemeKind::Uncoded(scheme), &g).0);
    }

    #[test]
    fn improper_coloring_rejected() {
        let net = example2();
        let g = build_nn_graphs(&net, 3, 64).unwrap().graphs.remove(0);
        let c = Coloring {
            colors: vec![0, 0, 1, 2], // A,B adjacent and same color
            color_count: 3,
        };
        assert!(matches!(
            uncoded_from_coloring(&g, &c),
            Err(Error::NotAProperColoring)
        ));
        let c2 = Coloring {
            colors: vec![0, 1, 0, 2],
            color_count: 4,
        };
        assert!(matches!(
            uncoded_from_coloring(&g, &c2),
            Err(Error::WrongColorCount { .. })
        ));
    }

    #[test]
    fn aws_binary_code_seoul_column() {
        let net = aws6();
        let g = build_nn_graphs(&net, 4, 64).unwrap().graphs.remove(0);
        let h = g.extend();
        let c = k_colorable(&h, 5, DEFAULT_EXPANSION_BUDGET).unwrap().unwrap();
        let seoul = net.node_index("Seoul").unwrap();
        let coded_color = c.colors[seoul];
        let map = canonical_color_map(&c, coded_color);
        let (scheme, plans) = binary_code_from_coloring(&g, &c, coded_color, &map).unwrap();
        // X_Seoul = W1 xor W2 xor W4 under first-occurrence file labels
        assert_eq!(scheme.generator.column(seoul), vec![1, 1, 0, 1]);
        assert_eq!(scheme.node_formula(seoul), "W1+W2+W4");
        let plan = plans.iter().find(|p| p.node == seoul).unwrap();
        let mumbai = net.node_index("Mumbai").unwrap();
        let cal = net.node_index("California").unwrap();
        let oregon = net.node_index("Oregon").unwrap();
        assert_eq!(
            plan.receive_set,
            [mumbai, cal, oregon].iter().copied().sorted().collect::<Vec<_>>()
        );
        assert!(is_admissible_on(&SchemeKind::Linear(scheme), &g).0);
    }

    #[test]
    fn aws_enumeration_best_average_is_1960_over_24() {
        let net = aws6();
        let g = build_nn_graphs(&net, 4, 64).unwrap().graphs.remove(0);
        let c = k_colorable(&g.extend(), 5, DEFAULT_EXPANSION_BUDGET)
            .unwrap()
            .unwrap();
        let codes = enumerate_binary_codes(&net, &g, &c).unwrap();
        assert_eq!(codes.len(), 5);
        assert_eq!(codes[0].2, Rat::new(1960, 24));
        // ascending order
        for w in codes.windows(2) {
            assert!(w[0].2 <= w[1].2);
        }
    }

    #[test]
    fn symmetric_triangle_codes_all_equal_average() {
        let names = (0..3).map(|i| format!("n{i}")).collect();
        let rtt = (0..3)
            .map(|i| (0..3).map(|j| if i == j { rat(0) } else { rat(6) }).collect())
            .collect();
        let net = Network::new(names, rtt).unwrap();
        // use the cyclically symmetric tie variant so the three coded
        // choices are interchangeable
        let g = build_nn_graphs(&net, 2, 64)
            .unwrap()
            .graphs
            .into_iter()
            .find(|g| (0..3).all(|i| g.in_neighbors(i) == [(i + 1) % 3]))
            .expect("cyclic variant is among the tie enumeration");
        let c = Coloring {
            colors: vec![0, 1, 2],
            color_count: 3,
        };
        assert!(c.is_proper(&g.extend()));
        let codes = enumerate_binary_codes(&net, &g, &c).unwrap();
        assert_eq!(codes.len(), 3);
        let avgs: Vec<Rat> = codes.iter().map(|c| c.2).collect();
        assert!(avgs.iter().all(|a| *a == avgs[0]));
    }

    #[test]
    fn k2_path_middle_coded() {
        // 3-node path: middle node B is nearest to both ends.
        let net = Network::new(
            vec!["A".into(), "B".into(), "C".into()],
            vec![
                vec![rat(0), rat(1), rat(5)],
                vec![rat(1), rat(0), rat(2)],
                vec![rat(5), rat(2), rat(0)],
            ],
        )
        .unwrap();
        let g = build_nn_graphs(&net, 2, 64).unwrap().graphs.remove(0);
        // in-neighbors: A<-B, B<-A, C<-B; H is the path A-B-C
        let c = Coloring {
            colors: vec![0, 2, 1],
            color_count: 3,
        };
        assert!(c.is_proper(&g.extend()));
        let map = canonical_color_map(&c, 2);
        let (scheme, plans) = binary_code_from_coloring(&g, &c, 2, &map).unwrap();
        // B's receivers are A and C; A misses W2 (holds W1), C misses W1,
        // B itself misses W2 (its only in-neighbor A holds W1).
        let plan = &plans[0];
        assert_eq!(plan.node, 1);
        assert_eq!(plan.xor_files, vec![0, 1]);
        assert_eq!(scheme.node_formula(1), "W1+W2");
        assert!(is_admissible_on(&SchemeKind::Linear(scheme), &g).0);
    }

    #[test]
    fn degenerate_singleton_xor() {
        // all receivers and the coded node miss the same file
        // 2-node network, k = 2: node 1 coded, receiver 0 holds W1,
        // both miss W2 -> X_1 = W2 alone.
        let net = Network::new(
            vec!["A".into(), "B".into()],
            vec![vec![rat(0), rat(3)], vec![rat(3), rat(0)]],
        )
        .unwrap();
        let g = build_nn_graphs(&net, 2, 64).unwrap().graphs.remove(0);
        let c = Coloring {
            colors: vec![0, 1],
            color_count: 3,
        };
        // color 2 unused; treat color 1 as coded, color 0 -> file 1
        let mut map = vec![None; 3];
        map[0] = Some(0);
        map[2] = Some(1);
        let (scheme, plans) = binary_code_from_coloring(&g, &c, 1, &map).unwrap();
        assert_eq!(plans[0].xor_files, vec![1]);
        assert_eq!(scheme.node_formula(1), "W2");
    }

    #[test]
    fn mds_vandermonde_minors_all_invertible() {
        let net = aws6();
        let f = FieldSpec::new(7).unwrap();
        let scheme = scalar_mds_scheme(&net, 4, f).unwrap();
        for cols in (0..6).combinations(4) {
            let minor = scheme.generator.select_columns(&cols);
            assert_ne!(minor.determinant(), 0, "singular minor {cols:?}");
        }
    }

    #[test]
    fn mds_square_case_and_field_too_small() {
        let net = aws6();
        let f7 = FieldSpec::new(7).unwrap();
        let square = scalar_mds_scheme(&net, 6, f7).unwrap();
        assert_eq!(square.generator.rank(), 6);
        let f5 = FieldSpec::new(5).unwrap();
        assert!(matches!(
            scalar_mds_scheme(&net, 4, f5),
            Err(Error::FieldTooSmall { .. })
        ));
    }

    #[test]
    fn mds_admissible_on_every_nn_graph() {
        let net = aws6();
        let f = FieldSpec::new(7).unwrap();
        for k in 1..=6 {
            let scheme = SchemeKind::Linear(scalar_mds_scheme(&net, k, f).unwrap());
            for g in build_nn_graphs(&net, k, 64).unwrap().graphs {
                assert!(is_admissible_on(&scheme, &g).0);
            }
        }
    }
}
