//! Evaluation of dataset checks: each expected-value entry in a
//! dataset is computed from first principles against the lattice and
//! candidates, producing one or more report records. Nothing here
//! hard-codes expected values; they all come from the dataset.

use crate::combin::{
    automorphism_order, build_graph, clique_stats, contract, exceptional_classes,
    maximal_cliques, orbits, srg_params, CliqueStats, CombinError, CompatibilityGraph,
    Permutation, PermutationGroup,
};
use crate::dataset::{parse_rat, CheckSpec, LatticeDataset, WeightPart};
use crate::exact::{rat, Int, Rat};
use crate::lattice::{pm_classes, Coset, LatticeError};
use crate::product::{
    reflective_divisor, singular_weight, table1_check, validate, ProductCandidate, ProductError,
    Table1Row,
};
use crate::reflect::{
    apply_isometry, induced_reflection, reflective_parameters, ReflectError,
};
use crate::report::{CheckRecord, VerificationReport};
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("no candidate matches label or prefix '{0}'")]
    MissingCandidate(String),
    #[error("no isometry named '{0}'")]
    MissingIsometry(String),
    #[error("check '{id}' is misconfigured: {detail}")]
    BadCheck { id: String, detail: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Reflect(#[from] ReflectError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Combin(#[from] CombinError),
}

/// Evaluate every check of the dataset, in dataset order.
pub fn verify_dataset(ds: &LatticeDataset) -> Result<VerificationReport, VerifyError> {
    let mut evaluator = Evaluator::new(ds);
    let mut records = Vec::new();
    for check in &ds.checks {
        records.extend(evaluator.evaluate(check)?);
    }
    Ok(VerificationReport::new(ds.name.clone(), records))
}

/// Evaluate only the graph-related checks (star graph, exceptional
/// classes, clique membership).
pub fn starsets_report(ds: &LatticeDataset) -> Result<VerificationReport, VerifyError> {
    let mut evaluator = Evaluator::new(ds);
    let mut records = Vec::new();
    for check in &ds.checks {
        if matches!(
            check,
            CheckSpec::StarGraph { .. }
                | CheckSpec::ExceptionalClasses { .. }
                | CheckSpec::CliqueContains { .. }
        ) {
            records.extend(evaluator.evaluate(check)?);
        }
    }
    Ok(VerificationReport::new(ds.name.clone(), records))
}

/// Check every row of the weight table.
pub fn table1_report(rows: &[Table1Row]) -> VerificationReport {
    let mut records = Vec::new();
    for row in rows {
        let start = Instant::now();
        let outcome = table1_check(row);
        let expected = json!({
            "jacobian_weight": row.jacobian_weight.to_string(),
            "square_total": (rat(2, 1) * &row.jacobian_weight).to_string(),
        });
        let computed: Rat = row
            .square_decomposition
            .iter()
            .fold(Rat::from(Int::from(0)), |acc, (w, c)| acc + w * Rat::from(Int::from(*c)));
        let actual = json!({
            "jacobian_weight": crate::product::jacobian_weight(row.n, &row.generator_weights)
                .to_string(),
            "square_total": computed.to_string(),
            "issues": outcome.issues,
        });
        let mut record = CheckRecord::new(
            format!("row.{}", row.group_name),
            outcome.is_valid(),
            expected,
            actual,
        );
        record.runtime_ms = start.elapsed().as_millis() as u64;
        records.push(record);
    }
    VerificationReport::new("table1", records)
}

/// Summary payload for the `lattice-info` command.
pub fn lattice_info_json(ds: &LatticeDataset) -> Value {
    let (p, q) = ds.group.lattice().signature();
    json!({
        "schema": "1",
        "dataset": ds.name,
        "lattice": ds.lattice_name,
        "rank": ds.group.lattice().rank(),
        "signature": [p, q],
        "invariant_factors": ds.group.invariant_factors().iter().map(int_json).collect::<Vec<_>>(),
        "disc_order": int_json(ds.group.order()),
        "candidates": ds.candidates.len(),
    })
}

/// Payload for the `enumerate` command: coset or ± class listing.
pub fn enumerate_json(
    ds: &LatticeDataset,
    order: Option<&Int>,
    norm: Option<&Rat>,
    pm: bool,
) -> Result<Value, VerifyError> {
    let cosets = ds.group.enumerate_cosets(order, norm)?;
    let body = if pm {
        let classes = pm_classes(&cosets)?;
        json!({
            "count": classes.len(),
            "classes": classes.iter().map(|c| json!({
                "rep": coset_strings(&c.rep),
                "partner": c.partner.as_ref().map(coset_strings),
            })).collect::<Vec<_>>(),
        })
    } else {
        json!({
            "count": cosets.len(),
            "cosets": cosets.iter().map(coset_strings).collect::<Vec<_>>(),
        })
    };
    let mut payload = json!({
        "schema": "1",
        "dataset": ds.name,
        "order": order.map(int_json),
        "norm": norm.map(|n| n.to_string()),
        "pm": pm,
    });
    payload
        .as_object_mut()
        .expect("payload is an object")
        .extend(body.as_object().expect("body is an object").clone());
    Ok(payload)
}

fn int_json(n: &Int) -> Value {
    match n.to_u64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn coset_strings(c: &Coset) -> Vec<String> {
    c.coords().iter().map(|x| x.to_string()).collect()
}

struct StarData {
    graph: CompatibilityGraph,
    cliques: Vec<Vec<u32>>,
    stats: CliqueStats,
}

struct Evaluator<'a> {
    ds: &'a LatticeDataset,
    star: HashMap<String, StarData>,
}

impl<'a> Evaluator<'a> {
    fn new(ds: &'a LatticeDataset) -> Self {
        Evaluator { ds, star: HashMap::new() }
    }

    fn evaluate(&mut self, check: &CheckSpec) -> Result<Vec<CheckRecord>, VerifyError> {
        let start = Instant::now();
        let mut records = self.dispatch(check)?;
        let elapsed = start.elapsed().as_millis() as u64;
        for record in &mut records {
            record.runtime_ms = elapsed;
        }
        Ok(records)
    }

    fn dispatch(&mut self, check: &CheckSpec) -> Result<Vec<CheckRecord>, VerifyError> {
        match check {
            CheckSpec::InvariantFactors { id, value } => {
                let actual: Vec<Value> =
                    self.ds.group.invariant_factors().iter().map(int_json).collect();
                let expected: Vec<Value> = value.iter().map(|v| json!(v)).collect();
                let pass = self.ds.group.invariant_factors()
                    == value.iter().map(|&v| Int::from(v)).collect::<Vec<_>>();
                Ok(vec![CheckRecord::new(id, pass, json!(expected), json!(actual))])
            }
            CheckSpec::DiscOrder { id, value } => {
                let pass = self.ds.group.order() == &Int::from(*value);
                Ok(vec![CheckRecord::new(
                    id,
                    pass,
                    json!(value),
                    int_json(self.ds.group.order()),
                )])
            }
            CheckSpec::Signature { id, value } => {
                let (p, q) = self.ds.group.lattice().signature();
                Ok(vec![CheckRecord::new(
                    id,
                    [p, q] == *value,
                    json!(value),
                    json!([p, q]),
                )])
            }
            CheckSpec::CosetCount { id, order, norm, pm, value, note } => {
                let cosets = self.enumerate(id, *order, norm)?;
                let count = if *pm { pm_classes(&cosets)?.len() } else { cosets.len() };
                Ok(vec![CheckRecord::new(id, count == *value, json!(value), json!(count))
                    .with_note(note.clone())])
            }
            CheckSpec::CosetList { id, order, norm, pm, cosets, note } => {
                let enumerated = self.enumerate(id, *order, norm)?;
                let actual_set: BTreeSet<Vec<String>> = if *pm {
                    // recorded lists name one coset per ± class
                    pm_classes(&enumerated)?
                        .iter()
                        .map(|c| coset_strings(&c.rep))
                        .collect()
                } else {
                    enumerated.iter().map(coset_strings).collect()
                };
                let mut expected_set: BTreeSet<Vec<String>> = BTreeSet::new();
                for coords in cosets {
                    let parsed = self.coset_from_strings(id, coords)?;
                    let key = if *pm {
                        coset_strings(std::cmp::min(&parsed.clone(), &parsed.neg()))
                    } else {
                        coset_strings(&parsed)
                    };
                    expected_set.insert(key);
                }
                let surplus: Vec<&Vec<String>> = actual_set.difference(&expected_set).collect();
                let missing: Vec<&Vec<String>> = expected_set.difference(&actual_set).collect();
                let pass = surplus.is_empty() && missing.is_empty();
                Ok(vec![CheckRecord::new(
                    id,
                    pass,
                    json!({ "count": expected_set.len(), "cosets": expected_set }),
                    json!({
                        "count": actual_set.len(),
                        "cosets": actual_set,
                        "surplus": surplus,
                        "missing": missing,
                    }),
                )
                .with_note(note.clone())])
            }
            CheckSpec::CandidatesMatchEnumeration { id, labels_prefix, order, norm, pm } => {
                let candidates = self.select(id, None, Some(labels_prefix))?;
                let enumerated = self.enumerate(id, *order, norm)?;
                let expected_set: BTreeSet<Vec<String>> = if *pm {
                    pm_classes(&enumerated)?
                        .iter()
                        .map(|c| coset_strings(&c.rep))
                        .collect()
                } else {
                    enumerated.iter().map(coset_strings).collect()
                };
                let mut candidate_set: BTreeSet<Vec<String>> = BTreeSet::new();
                for pc in &candidates {
                    for coset in pc.all_cosets() {
                        let key = if *pm {
                            coset_strings(std::cmp::min(&coset.clone(), &coset.neg()))
                        } else {
                            coset_strings(coset)
                        };
                        candidate_set.insert(key);
                    }
                }
                let surplus: Vec<&Vec<String>> =
                    candidate_set.difference(&expected_set).collect();
                let missing: Vec<&Vec<String>> =
                    expected_set.difference(&candidate_set).collect();
                let pass = surplus.is_empty() && missing.is_empty();
                Ok(vec![CheckRecord::new(
                    id,
                    pass,
                    json!({ "count": expected_set.len() }),
                    json!({
                        "candidates": candidates.len(),
                        "count": candidate_set.len(),
                        "surplus": surplus,
                        "missing": missing,
                    }),
                )])
            }
            CheckSpec::CandidatesValidate { id } => {
                let mut issues = Vec::new();
                for pc in &self.ds.candidates {
                    let report = validate(pc);
                    for issue in report.issues {
                        issues.push(format!("{}: {}", pc.label(), issue));
                    }
                }
                Ok(vec![CheckRecord::new(
                    id,
                    issues.is_empty(),
                    json!([]),
                    json!(issues),
                )])
            }
            CheckSpec::SingularWeight { id, labels_prefix, value } => {
                let expected_weight = self.rat(id, value)?;
                let candidates = self.select(id, None, Some(labels_prefix))?;
                let lattice_weight = singular_weight(&self.ds.group);
                let mut mismatched = Vec::new();
                for pc in &candidates {
                    let ok = pc.has_tag("singular") && pc.weight() == Some(&expected_weight);
                    if !ok {
                        mismatched.push(pc.label().to_string());
                    }
                }
                let pass =
                    lattice_weight.as_ref() == Some(&expected_weight) && mismatched.is_empty();
                Ok(vec![CheckRecord::new(
                    id,
                    pass,
                    json!(value),
                    json!({
                        "lattice_singular_weight": lattice_weight.map(|w| w.to_string()),
                        "candidates": candidates.len(),
                        "mismatched": mismatched,
                    }),
                )])
            }
            CheckSpec::Divisors { id, labels_prefix, label, value } => {
                let candidates = self.select(id, label.as_deref(), labels_prefix.as_deref())?;
                let expected_d = Int::from(*value);
                let mut ds_seen: BTreeSet<String> = BTreeSet::new();
                let mut class_count = 0usize;
                let mut non_reflective = 0usize;
                for pc in &candidates {
                    let divisor = reflective_divisor(pc)?;
                    class_count += divisor.classes.len();
                    non_reflective += divisor.non_reflective.len();
                    for rc in &divisor.classes {
                        ds_seen.insert(rc.d().to_string());
                    }
                }
                let pass = non_reflective == 0
                    && ds_seen.len() == 1
                    && ds_seen.contains(&expected_d.to_string());
                Ok(vec![CheckRecord::new(
                    id,
                    pass,
                    json!(value),
                    json!({
                        "classes": class_count,
                        "d": ds_seen,
                        "non_reflective": non_reflective,
                    }),
                )])
            }
            CheckSpec::TermDivisors { id, label, values } => {
                let pc = self.one(id, label)?;
                let mut actual: BTreeMap<String, Value> = BTreeMap::new();
                let mut pass = true;
                for term in &pc.principal_part().terms {
                    let key = term.exponent.to_string();
                    let t = rat(-2, 1) * &term.exponent;
                    let mut term_ds: BTreeSet<String> = BTreeSet::new();
                    let mut bad = false;
                    for coset in &term.cosets {
                        match crate::reflect::classify_reflective(coset, &t)? {
                            Some(rc) => {
                                term_ds.insert(rc.d().to_string());
                            }
                            None => bad = true,
                        }
                    }
                    let summary = if bad {
                        json!("non-reflective")
                    } else {
                        json!(term_ds.iter().cloned().collect::<Vec<_>>())
                    };
                    match values.get(&key) {
                        Some(&d) if !bad && term_ds.len() == 1 && term_ds.contains(&d.to_string()) => {}
                        _ => pass = false,
                    }
                    actual.insert(key, summary);
                }
                if actual.len() != values.len() {
                    pass = false;
                }
                Ok(vec![CheckRecord::new(id, pass, json!(values), json!(actual))])
            }
            CheckSpec::CandidateExponents { id, label, value } => {
                let pc = self.one(id, label)?;
                let actual: Vec<String> = pc
                    .principal_part()
                    .terms
                    .iter()
                    .map(|t| t.exponent.to_string())
                    .collect();
                let expected: Result<Vec<Rat>, _> =
                    value.iter().map(|v| self.rat(id, v)).collect();
                let expected = expected?;
                let got: Vec<&Rat> =
                    pc.principal_part().terms.iter().map(|t| &t.exponent).collect();
                let pass = got.len() == expected.len()
                    && got.iter().zip(&expected).all(|(a, b)| *a == b);
                Ok(vec![CheckRecord::new(id, pass, json!(value), json!(actual))])
            }
            CheckSpec::CandidateCosetsIn { id, label, labels_prefix, order, norm } => {
                let candidates = self.select(id, label.as_deref(), labels_prefix.as_deref())?;
                let expected_order = Int::from(*order);
                let expected_norm = self.rat(id, norm)?;
                let mut total = 0usize;
                let mut mismatched = Vec::new();
                for pc in &candidates {
                    for coset in pc.all_cosets() {
                        total += 1;
                        if coset.order() != &expected_order || coset.norm() != &expected_norm {
                            mismatched.push(format!("{}: {}", pc.label(), coset));
                        }
                    }
                }
                Ok(vec![CheckRecord::new(
                    id,
                    mismatched.is_empty(),
                    json!({ "order": order, "norm": norm }),
                    json!({ "cosets": total, "mismatched": mismatched }),
                )])
            }
            CheckSpec::IsometryOrbitCount { id, isometry, order, norm, value } => {
                let (_, image) = self.isometry_action(id, isometry, *order, norm)?;
                let n = image.len();
                let mut seen = vec![false; n];
                let mut orbit_count = 0usize;
                for start in 0..n {
                    if seen[start] {
                        continue;
                    }
                    orbit_count += 1;
                    let mut cursor = start;
                    while !seen[cursor] {
                        seen[cursor] = true;
                        cursor = image[cursor];
                    }
                }
                Ok(vec![CheckRecord::new(
                    id,
                    orbit_count == *value,
                    json!(value),
                    json!(orbit_count),
                )])
            }
            CheckSpec::IsometryInvariantCount { id, isometry, order, norm, value } => {
                let (_, image) = self.isometry_action(id, isometry, *order, norm)?;
                let fixed = image.iter().enumerate().filter(|(i, im)| i == *im).count();
                Ok(vec![CheckRecord::new(
                    id,
                    fixed == *value,
                    json!(value),
                    json!(fixed),
                )])
            }
            CheckSpec::SwapPairs { id, labels_prefix, isometry } => {
                let candidates = self.select(id, None, Some(labels_prefix))?;
                let matrix = self
                    .ds
                    .isometry(isometry)
                    .ok_or_else(|| VerifyError::MissingIsometry(isometry.clone()))?;
                let mut unpaired = Vec::new();
                for pc in &candidates {
                    let cosets: Vec<&Coset> = pc.all_cosets().collect();
                    let ok = cosets.len() == 2
                        && cosets[0] != cosets[1]
                        && apply_isometry(&self.ds.group, matrix, cosets[0])? == *cosets[1]
                        && apply_isometry(&self.ds.group, matrix, cosets[1])? == *cosets[0];
                    if !ok {
                        unpaired.push(pc.label().to_string());
                    }
                }
                Ok(vec![CheckRecord::new(
                    id,
                    unpaired.is_empty(),
                    json!([]),
                    json!(unpaired),
                )])
            }
            CheckSpec::StarGraph {
                id,
                vertex_prefix,
                regular,
                edges,
                clique_size,
                clique_count,
                per_vertex,
                pair_histogram,
                srg,
                automorphism_order: aut_expected,
                cliques: expected_cliques,
            } => {
                let expected_aut = self.int(id, aut_expected)?;
                let star = self.star_data(vertex_prefix)?;
                let mut records = Vec::new();

                let degree = star.graph.regular_degree();
                records.push(CheckRecord::new(
                    format!("{id}.regular"),
                    degree == Some(*regular),
                    json!(regular),
                    json!(degree),
                ));
                records.push(CheckRecord::new(
                    format!("{id}.edges"),
                    star.graph.edge_count() == *edges,
                    json!(edges),
                    json!(star.graph.edge_count()),
                ));

                let mut sizes: Vec<usize> = star.cliques.iter().map(Vec::len).collect();
                sizes.sort_unstable();
                sizes.dedup();
                records.push(CheckRecord::new(
                    format!("{id}.clique_size"),
                    sizes == vec![*clique_size],
                    json!([clique_size]),
                    json!(sizes),
                ));
                records.push(CheckRecord::new(
                    format!("{id}.clique_count"),
                    star.cliques.len() == *clique_count,
                    json!(clique_count),
                    json!(star.cliques.len()),
                ));

                let actual_cliques = clique_label_sets(&star.graph, &star.cliques);
                let expected_clique_set: BTreeSet<Vec<String>> = expected_cliques
                    .iter()
                    .map(|c| {
                        let mut labels = c.clone();
                        labels.sort();
                        labels
                    })
                    .collect();
                let surplus: Vec<&Vec<String>> =
                    actual_cliques.difference(&expected_clique_set).collect();
                let missing: Vec<&Vec<String>> =
                    expected_clique_set.difference(&actual_cliques).collect();
                records.push(CheckRecord::new(
                    format!("{id}.cliques"),
                    surplus.is_empty() && missing.is_empty(),
                    json!({ "count": expected_clique_set.len() }),
                    json!({
                        "count": actual_cliques.len(),
                        "surplus": surplus,
                        "missing": missing,
                    }),
                ));

                let mut per_vertex_values: Vec<usize> = star.stats.per_vertex.clone();
                per_vertex_values.sort_unstable();
                per_vertex_values.dedup();
                records.push(CheckRecord::new(
                    format!("{id}.per_vertex"),
                    per_vertex_values == vec![*per_vertex],
                    json!([per_vertex]),
                    json!(per_vertex_values),
                ));

                let actual_histogram: BTreeMap<String, usize> = star
                    .stats
                    .pair_histogram
                    .iter()
                    .map(|(k, v)| (k.to_string(), *v))
                    .collect();
                records.push(CheckRecord::new(
                    format!("{id}.pair_histogram"),
                    &actual_histogram == pair_histogram,
                    json!(pair_histogram),
                    json!(actual_histogram),
                ));

                let actual_srg = srg_params(&star.graph);
                let srg_json = |p: Option<(usize, usize, usize, usize)>| match p {
                    Some((n, k, l, m)) => json!([n, k, l, m]),
                    None => Value::Null,
                };
                let expected_srg = srg.map(|[n, k, l, m]| (n, k, l, m));
                records.push(CheckRecord::new(
                    format!("{id}.srg"),
                    actual_srg == expected_srg,
                    srg_json(expected_srg),
                    srg_json(actual_srg),
                ));

                let actual_aut = automorphism_order(&star.graph)?;
                records.push(CheckRecord::new(
                    format!("{id}.automorphism_order"),
                    actual_aut == expected_aut,
                    json!(aut_expected),
                    json!(actual_aut.to_string()),
                ));
                Ok(records)
            }
            CheckSpec::ExceptionalClasses { id, classes, contracted_srg } => {
                let prefix = self.star_prefix()?;
                let star = self.star_data(&prefix)?;
                let computed = exceptional_classes(&star.stats, star.graph.vertex_count());
                let actual_classes: BTreeSet<Vec<String>> = computed
                    .iter()
                    .map(|class| {
                        let mut labels: Vec<String> = class
                            .iter()
                            .map(|&v| star.graph.labels()[v as usize].clone())
                            .collect();
                        labels.sort();
                        labels
                    })
                    .collect();
                let expected_classes: BTreeSet<Vec<String>> = classes
                    .iter()
                    .map(|c| {
                        let mut labels = c.clone();
                        labels.sort();
                        labels
                    })
                    .collect();
                let mut records = vec![CheckRecord::new(
                    format!("{id}.classes"),
                    actual_classes == expected_classes,
                    json!({ "count": expected_classes.len() }),
                    json!({
                        "count": actual_classes.len(),
                        "surplus": actual_classes.difference(&expected_classes).collect::<Vec<_>>(),
                        "missing": expected_classes.difference(&actual_classes).collect::<Vec<_>>(),
                    }),
                )];

                let contracted = contract(&star.graph, &computed)?;
                let params = srg_params(&contracted);
                let expected_params =
                    (contracted_srg[0], contracted_srg[1], contracted_srg[2], contracted_srg[3]);
                records.push(CheckRecord::new(
                    format!("{id}.contracted_srg"),
                    params == Some(expected_params),
                    json!(contracted_srg),
                    match params {
                        Some((n, k, l, m)) => json!([n, k, l, m]),
                        None => Value::Null,
                    },
                ));
                Ok(records)
            }
            CheckSpec::CliqueContains { id, labels } => {
                let prefix = self.star_prefix()?;
                let star = self.star_data(&prefix)?;
                let clique_sets = clique_label_sets(&star.graph, &star.cliques);
                let mut target = labels.clone();
                target.sort();
                let found = clique_sets.contains(&target);
                Ok(vec![CheckRecord::new(
                    id,
                    found,
                    json!(labels),
                    json!({ "found": found }),
                )])
            }
            CheckSpec::ReflectionOrbitSplit { id, order, norm, sizes, note } => {
                let group = self.all_reflections_group()?;
                let cosets = self.enumerate(id, *order, norm)?;
                let points: Vec<u32> = cosets
                    .iter()
                    .map(|c| self.ds.group.index_of(c).map(|i| i as u32))
                    .collect::<Result<_, _>>()?;
                let classes = orbits(&group, &points);
                let mut actual: Vec<usize> = classes.iter().map(Vec::len).collect();
                actual.sort_unstable();
                let mut expected = sizes.clone();
                expected.sort_unstable();
                Ok(vec![CheckRecord::new(
                    id,
                    actual == expected,
                    json!(expected),
                    json!(actual),
                )
                .with_note(note.clone())])
            }
            CheckSpec::ReflectionGroupOrder { id, generators, value } => {
                let expected = self.int(id, value)?;
                let mut group = PermutationGroup::trivial(self.ds.group.all_cosets()?.len());
                for label in generators {
                    let pc = self.one(id, label)?;
                    for rc in reflective_divisor(pc)?.classes {
                        let sigma = induced_reflection(&self.ds.group, &rc)?;
                        group.add_generator(Permutation::from_images(
                            sigma.image_table().to_vec(),
                        ));
                    }
                }
                let actual = group.order();
                Ok(vec![CheckRecord::new(
                    id,
                    actual == expected,
                    json!(value),
                    json!(actual.to_string()),
                )])
            }
            CheckSpec::WeightSum { id, name, total, parts } => {
                let expected_total = self.rat(id, total)?;
                let mut sum = Rat::from(Int::from(0));
                for WeightPart { weight, count } in parts {
                    sum += self.rat(id, weight)? * Rat::from(Int::from(*count));
                }
                Ok(vec![CheckRecord::new(
                    id,
                    sum == expected_total,
                    json!({ "name": name, "total": total }),
                    json!({ "sum": sum.to_string() }),
                )])
            }
            CheckSpec::NonReflectiveCount { id, order, norm, pm, value } => {
                let cosets = self.enumerate(id, *order, norm)?;
                let reps: Vec<Coset> = if *pm {
                    pm_classes(&cosets)?.into_iter().map(|c| c.rep).collect()
                } else {
                    cosets
                };
                let mut count = 0usize;
                for rep in &reps {
                    if reflective_parameters(&self.ds.group, rep)?.is_empty() {
                        count += 1;
                    }
                }
                Ok(vec![CheckRecord::new(
                    id,
                    count == *value,
                    json!(value),
                    json!(count),
                )])
            }
        }
    }

    fn enumerate(&self, id: &str, order: u64, norm: &str) -> Result<Vec<Coset>, VerifyError> {
        let order = Int::from(order);
        let norm = self.rat(id, norm)?;
        Ok(self.ds.group.enumerate_cosets(Some(&order), Some(&norm))?)
    }

    fn rat(&self, id: &str, text: &str) -> Result<Rat, VerifyError> {
        parse_rat(text).map_err(|detail| VerifyError::BadCheck { id: id.into(), detail })
    }

    fn int(&self, id: &str, text: &str) -> Result<Int, VerifyError> {
        crate::dataset::parse_int(text)
            .map_err(|detail| VerifyError::BadCheck { id: id.into(), detail })
    }

    fn coset_from_strings(&self, id: &str, coords: &[String]) -> Result<Coset, VerifyError> {
        let parsed: Result<Vec<Rat>, VerifyError> =
            coords.iter().map(|c| self.rat(id, c)).collect();
        Ok(self.ds.group.coset(&parsed?)?)
    }

    fn select(
        &self,
        id: &str,
        label: Option<&str>,
        prefix: Option<&str>,
    ) -> Result<Vec<&'a ProductCandidate>, VerifyError> {
        let selected: Vec<&ProductCandidate> = match (label, prefix) {
            (Some(l), _) => self.ds.candidate(l).into_iter().collect(),
            (None, Some(p)) => self.ds.candidates_with_prefix(p),
            (None, None) => {
                return Err(VerifyError::BadCheck {
                    id: id.into(),
                    detail: "needs either 'label' or 'labels_prefix'".into(),
                })
            }
        };
        if selected.is_empty() {
            return Err(VerifyError::MissingCandidate(
                label.or(prefix).unwrap_or_default().to_string(),
            ));
        }
        Ok(selected)
    }

    fn one(&self, _id: &str, label: &str) -> Result<&'a ProductCandidate, VerifyError> {
        self.ds
            .candidate(label)
            .ok_or_else(|| VerifyError::MissingCandidate(label.to_string()))
    }

    /// Permutation induced by a named isometry on the enumerated coset
    /// list (indices into the sorted enumeration).
    fn isometry_action(
        &self,
        id: &str,
        isometry: &str,
        order: u64,
        norm: &str,
    ) -> Result<(Vec<Coset>, Vec<usize>), VerifyError> {
        let matrix = self
            .ds
            .isometry(isometry)
            .ok_or_else(|| VerifyError::MissingIsometry(isometry.to_string()))?;
        let cosets = self.enumerate(id, order, norm)?;
        let index: HashMap<&Coset, usize> =
            cosets.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut image = Vec::with_capacity(cosets.len());
        for coset in &cosets {
            let mapped = apply_isometry(&self.ds.group, matrix, coset)?;
            let target = index.get(&mapped).ok_or_else(|| VerifyError::BadCheck {
                id: id.into(),
                detail: format!("isometry image {mapped} leaves the enumerated set"),
            })?;
            image.push(*target);
        }
        Ok((cosets, image))
    }

    /// The vertex prefix of the dataset's star-graph check.
    fn star_prefix(&self) -> Result<String, VerifyError> {
        self.ds
            .checks
            .iter()
            .find_map(|c| match c {
                CheckSpec::StarGraph { vertex_prefix, .. } => Some(vertex_prefix.clone()),
                _ => None,
            })
            .ok_or_else(|| VerifyError::BadCheck {
                id: "star".into(),
                detail: "dataset has no star_graph check to supply the vertex set".into(),
            })
    }

    fn star_data(&mut self, prefix: &str) -> Result<&StarData, VerifyError> {
        if !self.star.contains_key(prefix) {
            let candidates: Vec<ProductCandidate> = self
                .ds
                .candidates_with_prefix(prefix)
                .into_iter()
                .cloned()
                .collect();
            if candidates.is_empty() {
                return Err(VerifyError::MissingCandidate(prefix.to_string()));
            }
            let graph = build_graph(&candidates)?;
            let cliques = maximal_cliques(&graph);
            let stats = clique_stats(&cliques, graph.vertex_count());
            self.star
                .insert(prefix.to_string(), StarData { graph, cliques, stats });
        }
        Ok(&self.star[prefix])
    }

    /// Group generated by the induced reflections of every reflective
    /// coset of the discriminant group, acting on the element indices.
    fn all_reflections_group(&self) -> Result<PermutationGroup, VerifyError> {
        let elements = self.ds.group.all_cosets()?.to_vec();
        let mut generators = Vec::new();
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        for coset in &elements {
            for rc in reflective_parameters(&self.ds.group, coset)? {
                let sigma = induced_reflection(&self.ds.group, &rc)?;
                if sigma.is_identity() {
                    continue;
                }
                let table = sigma.image_table().to_vec();
                if seen.insert(table.clone()) {
                    generators.push(Permutation::from_images(table));
                }
            }
        }
        Ok(PermutationGroup::from_generators(elements.len(), generators))
    }
}

fn clique_label_sets(
    graph: &CompatibilityGraph,
    cliques: &[Vec<u32>],
) -> BTreeSet<Vec<String>> {
    cliques
        .iter()
        .map(|clique| {
            let mut labels: Vec<String> = clique
                .iter()
                .map(|&v| graph.labels()[v as usize].clone())
                .collect();
            labels.sort();
            labels
        })
        .collect()
}
