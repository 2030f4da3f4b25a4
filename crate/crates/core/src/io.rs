//! The JSON document format for FBAS, failure distributions, and a
//! converter for the public quorum-set convention.
//!
//! A document looks like this:
//!
//! ```json
//! {
//!   "version": 1,
//!   "nodes": [
//!     { "name": "a", "slices": [["a", "b"], ["a", "c"]] },
//!     { "name": "b", "simple": { "quorum_set": ["a", "b", "c"], "threshold": 2 } },
//!     { "name": "c", "definition": { "threshold": 2, "validators": ["a", "b", "c"], "inner": [] } }
//!   ],
//!   "organizations": [ { "name": "Org", "members": ["a", "b"] } ]
//! }
//! ```
//!
//! Node ids are assigned in natural name order (`n2` before `n10`), and
//! [`FbasDocument::to_json`] emits nodes and sets in that same order, so
//! emitting is canonical and `parse(emit(parse(x))) = parse(x)`.
//!
//! A `definition` is the shared threshold tree; the node runs its
//! personalization `(2, {v}, {R_v(d)})`. In a document that is not entirely
//! simple, simple nodes are expanded and the result is a general FBAS.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{FbasError, Result};
use crate::fbas::{make_general, make_simple, Fbas, SliceRule};
use crate::nodeset::{NameTable, NodeId, NodeSet};
use crate::probability::FailureDistribution;
use crate::slices::{
    generate_slices_capped, personalize, OrgFbas, Organization, QuorumSliceDefinition, DEFAULT_GENERATION_CAP,
};

pub const FORMAT_VERSION: u32 = 1;

/// Compares strings treating runs of ASCII digits as numbers.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut x, mut y) = (a.as_bytes(), b.as_bytes());
    while !x.is_empty() && !y.is_empty() {
        if x[0].is_ascii_digit() && y[0].is_ascii_digit() {
            let run = |s: &[u8]| s.iter().take_while(|c| c.is_ascii_digit()).count();
            let (lx, ly) = (run(x), run(y));
            let strip = |s: &[u8]| {
                let z = s.iter().take_while(|&&c| c == b'0').count();
                s[z..].to_vec()
            };
            let (dx, dy) = (strip(&x[..lx]), strip(&y[..ly]));
            let ord = dx.len().cmp(&dy.len()).then_with(|| dx.cmp(&dy));
            if ord != Ordering::Equal {
                return ord;
            }
            x = &x[lx..];
            y = &y[ly..];
        } else {
            if x[0] != y[0] {
                return x[0].cmp(&y[0]);
            }
            x = &x[1..];
            y = &y[1..];
        }
    }
    x.len().cmp(&y.len()).then_with(|| a.cmp(b))
}

/// How one node's slices are given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SliceForm {
    Explicit(Vec<NodeSet>),
    Simple {
        quorum_set: NodeSet,
        threshold: usize,
    },
    /// The shared definition; the node uses its personalization.
    Definition(QuorumSliceDefinition),
}

/// A parsed document before slices are generated.
#[derive(Clone, Debug, PartialEq)]
pub struct FbasDocument {
    pub names: NameTable,
    pub forms: Vec<SliceForm>,
    pub organizations: Vec<Organization>,
}

/// An FBAS loaded from a document, with the document it came from.
#[derive(Clone, Debug)]
pub struct LoadedFbas {
    pub fbas: Fbas,
    pub names: NameTable,
    pub organizations: Vec<Organization>,
    pub document: FbasDocument,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentDto {
    version: u32,
    nodes: Vec<NodeDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    organizations: Vec<OrgDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDto {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slices: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    simple: Option<SimpleDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    definition: Option<DefinitionDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimpleDto {
    quorum_set: Vec<String>,
    threshold: usize,
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
struct DefinitionDto {
    threshold: usize,
    #[serde(default)]
    validators: Vec<String>,
    #[serde(default, alias = "innerQuorumSets")]
    inner: Vec<DefinitionDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrgDto {
    name: String,
    members: Vec<String>,
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> FbasError {
    FbasError::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn json_err(e: serde_json::Error) -> FbasError {
    parse_err(format!("line {}, column {}", e.line(), e.column()), e.to_string())
}

/// Resolves a list of names to a set, rejecting unknown and repeated names.
fn resolve(names: &NameTable, list: &[String], at: &str) -> Result<NodeSet> {
    let mut s = NodeSet::empty();
    for n in list {
        let id = names
            .id(n)
            .ok_or_else(|| parse_err(at, format!("unknown node name {n:?}")))?;
        if !s.insert(id) {
            return Err(parse_err(at, format!("node {n:?} listed twice")));
        }
    }
    Ok(s)
}

fn resolve_definition(names: &NameTable, d: &DefinitionDto, at: &str) -> Result<QuorumSliceDefinition> {
    Ok(QuorumSliceDefinition::new(
        d.threshold,
        resolve(names, &d.validators, at)?,
        d.inner
            .iter()
            .enumerate()
            .map(|(i, c)| resolve_definition(names, c, &format!("{at}.inner[{i}]")))
            .collect::<Result<_>>()?,
    ))
}

/// Names of `s` in natural order.
fn sorted_names(names: &NameTable, s: &NodeSet) -> Vec<String> {
    let mut v = names.names_of(s);
    v.sort_by(|a, b| natural_cmp(a, b));
    v
}

fn definition_dto(names: &NameTable, d: &QuorumSliceDefinition) -> DefinitionDto {
    let mut inner: Vec<DefinitionDto> = d.inner.iter().map(|c| definition_dto(names, c)).collect();
    // inner trees form a set; order them by their canonical text
    inner.sort_by_cached_key(|c| serde_json::to_string(c).expect("serializable"));
    DefinitionDto {
        threshold: d.threshold,
        validators: sorted_names(names, &d.validators),
        inner,
    }
}

impl FbasDocument {
    /// Parses a document without generating slices.
    pub fn parse(text: &str) -> Result<Self> {
        let dto: DocumentDto = serde_json::from_str(text).map_err(json_err)?;
        if dto.version != FORMAT_VERSION {
            return Err(parse_err(
                "version",
                format!("unsupported version {}, expected {FORMAT_VERSION}", dto.version),
            ));
        }
        if dto.nodes.is_empty() {
            return Err(parse_err("nodes", "a document needs at least one node"));
        }
        let mut seen = HashSet::new();
        for (i, n) in dto.nodes.iter().enumerate() {
            if !seen.insert(n.name.as_str()) {
                return Err(parse_err(
                    format!("nodes[{i}]"),
                    format!("duplicate node name {:?}", n.name),
                ));
            }
        }
        let mut order: Vec<usize> = (0..dto.nodes.len()).collect();
        order.sort_by(|&a, &b| natural_cmp(&dto.nodes[a].name, &dto.nodes[b].name));
        let names = NameTable::new(order.iter().map(|&i| dto.nodes[i].name.clone()))?;

        let mut forms = Vec::with_capacity(order.len());
        for &i in &order {
            let node = &dto.nodes[i];
            let at = format!("nodes[{i}] ({:?})", node.name);
            let form = match (&node.slices, &node.simple, &node.definition) {
                (Some(slices), None, None) => SliceForm::Explicit(
                    slices
                        .iter()
                        .enumerate()
                        .map(|(j, s)| resolve(&names, s, &format!("{at}.slices[{j}]")))
                        .collect::<Result<_>>()?,
                ),
                (None, Some(s), None) => SliceForm::Simple {
                    quorum_set: resolve(&names, &s.quorum_set, &format!("{at}.simple"))?,
                    threshold: s.threshold,
                },
                (None, None, Some(d)) => {
                    let d = resolve_definition(&names, d, &format!("{at}.definition"))?;
                    d.validate()
                        .map_err(|e| parse_err(format!("{at}.definition"), e.to_string()))?;
                    SliceForm::Definition(d)
                }
                _ => {
                    return Err(parse_err(
                        at,
                        "exactly one of \"slices\", \"simple\" or \"definition\" is required",
                    ))
                }
            };
            forms.push(form);
        }

        let mut organizations = Vec::with_capacity(dto.organizations.len());
        let mut covered = NodeSet::empty();
        let mut org_names = HashSet::new();
        for (i, o) in dto.organizations.iter().enumerate() {
            let at = format!("organizations[{i}] ({:?})", o.name);
            if !org_names.insert(o.name.as_str()) {
                return Err(parse_err(at, "duplicate organization name"));
            }
            let members = resolve(&names, &o.members, &at)?;
            if members.is_empty() {
                return Err(parse_err(at, "organization has no members"));
            }
            if members.intersects(&covered) {
                return Err(parse_err(at, "organizations overlap"));
            }
            covered = covered.union(&members);
            organizations.push(Organization {
                name: o.name.clone(),
                members,
            });
        }
        Ok(FbasDocument {
            names,
            forms,
            organizations,
        })
    }

    /// Generates the FBAS. Definition nodes may generate at most `cap`
    /// slices each.
    pub fn build(&self, cap: usize) -> Result<Fbas> {
        let n = self.forms.len();
        if self.forms.iter().all(|f| matches!(f, SliceForm::Simple { .. })) {
            let (q, t) = self
                .forms
                .iter()
                .map(|f| match f {
                    SliceForm::Simple {
                        quorum_set,
                        threshold,
                    } => (*quorum_set, *threshold),
                    _ => unreachable!(),
                })
                .unzip();
            return make_simple(n, q, t);
        }
        let mut slices = Vec::with_capacity(n);
        let mut rules = Vec::with_capacity(n);
        for (i, form) in self.forms.iter().enumerate() {
            let v = NodeId(i);
            let tree = match form {
                SliceForm::Explicit(list) => {
                    slices.push(list.clone());
                    rules.push(SliceRule::Listed);
                    continue;
                }
                SliceForm::Simple {
                    quorum_set,
                    threshold,
                } => {
                    // the personalization of the leaf (n, q) generates
                    // exactly the n-subsets of q that contain v
                    if !quorum_set.contains(v) {
                        return Err(FbasError::MembershipViolation { node: v });
                    }
                    if *threshold < 1 || *threshold > quorum_set.len() {
                        return Err(FbasError::ThresholdOutOfRange {
                            node: v,
                            threshold: *threshold,
                            max: quorum_set.len(),
                        });
                    }
                    personalize(&QuorumSliceDefinition::leaf(*threshold, *quorum_set), v)
                }
                SliceForm::Definition(d) => personalize(d, v),
            };
            slices.push(generate_slices_capped(&tree, cap)?);
            rules.push(SliceRule::Tree(tree));
        }
        match make_general(n, slices)? {
            Fbas::General(g) => Ok(Fbas::General(g.with_rules(rules))),
            Fbas::Simple(_) => unreachable!("make_general builds a general FBAS"),
        }
    }

    /// Describes `f` node by node: simple FBAS in simple form, general ones
    /// by their explicit slices.
    pub fn from_fbas(f: &Fbas, names: &NameTable, organizations: &[Organization]) -> Result<Self> {
        if names.len() != f.universe() {
            return Err(FbasError::PreconditionViolation(format!(
                "{} names for {} nodes",
                names.len(),
                f.universe()
            )));
        }
        let forms = f
            .nodes()
            .iter()
            .map(|v| match f {
                Fbas::Simple(s) => SliceForm::Simple {
                    quorum_set: s.quorum_set(v),
                    threshold: s.threshold(v),
                },
                Fbas::General(g) => SliceForm::Explicit(g.slices(v).to_vec()),
            })
            .collect();
        Ok(FbasDocument {
            names: names.clone(),
            forms,
            organizations: organizations.to_vec(),
        })
    }

    /// Every node shares the generating definition.
    pub fn from_org_fbas(o: &OrgFbas) -> Self {
        FbasDocument {
            names: o.names.clone(),
            forms: vec![SliceForm::Definition(o.definition.clone()); o.names.len()],
            organizations: o.organizations.clone(),
        }
    }

    /// Canonical JSON: nodes, sets and organizations in natural name order.
    pub fn to_json(&self) -> String {
        let names = &self.names;
        let mut order: Vec<usize> = (0..self.forms.len()).collect();
        order.sort_by(|&a, &b| natural_cmp(names.name(NodeId(a)), names.name(NodeId(b))));
        let nodes = order
            .iter()
            .map(|&i| {
                let mut dto = NodeDto {
                    name: names.name(NodeId(i)).to_string(),
                    slices: None,
                    simple: None,
                    definition: None,
                };
                match &self.forms[i] {
                    SliceForm::Explicit(list) => {
                        let mut lists: Vec<Vec<String>> =
                            list.iter().map(|s| sorted_names(names, s)).collect();
                        lists.sort_by(|a, b| {
                            a.iter()
                                .zip(b)
                                .map(|(x, y)| natural_cmp(x, y))
                                .find(|o| o.is_ne())
                                .unwrap_or_else(|| a.len().cmp(&b.len()))
                        });
                        dto.slices = Some(lists);
                    }
                    SliceForm::Simple {
                        quorum_set,
                        threshold,
                    } => {
                        dto.simple = Some(SimpleDto {
                            quorum_set: sorted_names(names, quorum_set),
                            threshold: *threshold,
                        })
                    }
                    SliceForm::Definition(d) => dto.definition = Some(definition_dto(names, d)),
                }
                dto
            })
            .collect();
        let mut organizations: Vec<OrgDto> = self
            .organizations
            .iter()
            .map(|o| OrgDto {
                name: o.name.clone(),
                members: sorted_names(names, &o.members),
            })
            .collect();
        organizations.sort_by(|a, b| natural_cmp(&a.name, &b.name));
        let doc = DocumentDto {
            version: FORMAT_VERSION,
            nodes,
            organizations,
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
        out.push('\n');
        out
    }
}

/// Parses a document and generates its FBAS with the default cap.
pub fn parse_fbas(text: &str) -> Result<LoadedFbas> {
    parse_fbas_capped(text, DEFAULT_GENERATION_CAP)
}

pub fn parse_fbas_capped(text: &str, cap: usize) -> Result<LoadedFbas> {
    let document = FbasDocument::parse(text)?;
    let fbas = document.build(cap)?;
    Ok(LoadedFbas {
        fbas,
        names: document.names.clone(),
        organizations: document.organizations.clone(),
        document,
    })
}

/// Canonical document text for `f`.
pub fn emit_fbas(f: &Fbas, names: &NameTable, organizations: &[Organization]) -> Result<String> {
    Ok(FbasDocument::from_fbas(f, names, organizations)?.to_json())
}

#[derive(Deserialize)]
struct StellarNodeDto {
    #[serde(rename = "publicKey")]
    public_key: String,
    #[serde(rename = "quorumSet")]
    quorum_set: Option<DefinitionDto>,
}

/// Converts a JSON array of `{"publicKey", "quorumSet": {"threshold",
/// "validators", "innerQuorumSets"}}` records into a document. Nodes are
/// named by public key; other fields are ignored.
pub fn convert_stellar_nodes(text: &str) -> Result<FbasDocument> {
    let nodes: Vec<StellarNodeDto> = serde_json::from_str(text).map_err(json_err)?;
    let dto = DocumentDto {
        version: FORMAT_VERSION,
        nodes: nodes
            .into_iter()
            .enumerate()
            .map(|(i, n)| {
                let definition = n.quorum_set.ok_or_else(|| {
                    parse_err(format!("[{i}] ({:?})", n.public_key), "node has no quorum set")
                })?;
                Ok(NodeDto {
                    name: n.public_key,
                    slices: None,
                    simple: None,
                    definition: Some(definition),
                })
            })
            .collect::<Result<_>>()?,
        organizations: Vec::new(),
    };
    FbasDocument::parse(&serde_json::to_string(&dto).expect("serializable"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDto {
    set: Vec<String>,
    p: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableGroupDto {
    members: Vec<String>,
    table: Vec<EntryDto>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ByzantineGroupDto {
    members: Vec<String>,
    q: f64,
    r: f64,
}

#[derive(Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
enum DistributionDto {
    AtMostOne {
        p_empty: Option<f64>,
        p_single: BTreeMap<String, f64>,
    },
    Independent {
        #[serde(default)]
        default: f64,
        #[serde(default)]
        p: BTreeMap<String, f64>,
    },
    Grouped {
        groups: Vec<TableGroupDto>,
    },
    GroupedByzantine {
        groups: Option<Vec<ByzantineGroupDto>>,
        q: Option<f64>,
        r: Option<f64>,
    },
    Explicit {
        table: Vec<EntryDto>,
    },
}

fn per_node(names: &NameTable, map: &BTreeMap<String, f64>, default: f64, at: &str) -> Result<Vec<f64>> {
    let mut p = vec![default; names.len()];
    for (name, &x) in map {
        let v = names
            .id(name)
            .ok_or_else(|| parse_err(at, format!("unknown node name {name:?}")))?;
        p[v.0] = x;
    }
    Ok(p)
}

fn table(names: &NameTable, entries: &[EntryDto], at: &str) -> Result<Vec<(NodeSet, f64)>> {
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| Ok((resolve(names, &e.set, &format!("{at}[{i}]"))?, e.p)))
        .collect()
}

/// Parses a failure distribution over the nodes of `names`.
///
/// ```json
/// {"model": "independent", "default": 0.01, "p": {"a1": 0.1}}
/// {"model": "at-most-one", "p_single": {"1": 0.1}}
/// {"model": "grouped-byzantine", "q": 0.1, "r": 0.01}
/// {"model": "grouped-byzantine", "groups": [{"members": ["a", "b"], "q": 0.1, "r": 0.0}]}
/// {"model": "grouped", "groups": [{"members": ["a"], "table": [{"set": [], "p": 0.9}, {"set": ["a"], "p": 0.1}]}]}
/// {"model": "explicit", "table": [{"set": [], "p": 0.5}, {"set": ["a"], "p": 0.5}]}
/// ```
///
/// For `at-most-one`, a missing `p_empty` is one minus the singleton mass.
/// A `grouped-byzantine` model without `groups` uses `organizations` with
/// the uniform `q` and `r`. The result is validated.
pub fn parse_distribution(
    text: &str,
    names: &NameTable,
    organizations: &[Organization],
) -> Result<FailureDistribution> {
    let dto: DistributionDto = serde_json::from_str(text).map_err(json_err)?;
    let dist = match dto {
        DistributionDto::AtMostOne { p_empty, p_single } => {
            let p_single = per_node(names, &p_single, 0.0, "p_single")?;
            let p_empty = p_empty.unwrap_or_else(|| 1.0 - p_single.iter().sum::<f64>());
            FailureDistribution::AtMostOne { p_empty, p_single }
        }
        DistributionDto::Independent { default, p } => FailureDistribution::Independent {
            p: per_node(names, &p, default, "p")?,
        },
        DistributionDto::Grouped { groups } => {
            let mut orgs = Vec::new();
            let mut tables = Vec::new();
            for (i, g) in groups.iter().enumerate() {
                let at = format!("groups[{i}]");
                orgs.push(resolve(names, &g.members, &at)?);
                tables.push(table(names, &g.table, &format!("{at}.table"))?);
            }
            FailureDistribution::Grouped { orgs, tables }
        }
        DistributionDto::GroupedByzantine { groups, q, r } => match (groups, q, r) {
            (Some(groups), None, None) => {
                let mut orgs = Vec::new();
                let (mut qs, mut rs) = (Vec::new(), Vec::new());
                for (i, g) in groups.iter().enumerate() {
                    orgs.push(resolve(names, &g.members, &format!("groups[{i}]"))?);
                    qs.push(g.q);
                    rs.push(g.r);
                }
                FailureDistribution::GroupedByzantine { orgs, q: qs, r: rs }
            }
            (None, Some(q), Some(r)) => {
                if organizations.is_empty() {
                    return Err(parse_err(
                        "model",
                        "grouped-byzantine without groups needs organizations in the FBAS document",
                    ));
                }
                crate::probability::uniform_grouped_byzantine(
                    organizations.iter().map(|o| o.members).collect(),
                    q,
                    r,
                )
            }
            _ => {
                return Err(parse_err(
                    "model",
                    "grouped-byzantine takes either \"groups\" or both \"q\" and \"r\"",
                ))
            }
        },
        DistributionDto::Explicit { table: entries } => FailureDistribution::Explicit {
            table: table(names, &entries, "table")?,
        },
    };
    dist.validate(names.len())?;
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::nodeset::set_of;

    const HUB: &str = r#"{
      "version": 1,
      "nodes": [
        {"name": "7", "slices": [["7"]]},
        {"name": "1", "slices": [["1","2","3","7"]]},
        {"name": "2", "slices": [["1","2","3","7"]]},
        {"name": "3", "slices": [["7","1","2","3"]]},
        {"name": "4", "slices": [["4","5","6","7"]]},
        {"name": "5", "slices": [["4","5","6","7"]]},
        {"name": "6", "slices": [["4","5","6","7"]]}
      ]
    }"#;

    #[test]
    fn natural_order() {
        let mut v = vec!["a10", "a2", "b1", "a1", "a02", "10", "9"];
        v.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(v, ["9", "10", "a1", "a02", "a2", "a10", "b1"]);
    }

    #[test]
    fn hub_document_round_trips() {
        let loaded = parse_fbas(HUB).unwrap();
        assert_eq!(loaded.fbas, catalog::hub_and_two_triads());
        let text = loaded.document.to_json();
        let again = parse_fbas(&text).unwrap();
        assert_eq!(again.fbas, loaded.fbas);
        assert_eq!(again.document.to_json(), text);
        assert_eq!(emit_fbas(&loaded.fbas, &loaded.names, &[]).unwrap(), text);
    }

    #[test]
    fn symmetric_emits_simple_form() {
        let f = catalog::symmetric(4, 3);
        let text = emit_fbas(&f, &NameTable::numbered(4), &[]).unwrap();
        assert!(text.contains("\"simple\""));
        assert!(!text.contains("\"slices\""));
        assert_eq!(parse_fbas(&text).unwrap().fbas, f);
    }

    #[test]
    fn stellar_definition_document() {
        let o = catalog::stellar_2019();
        let text = FbasDocument::from_org_fbas(&o).to_json();
        assert!(text.contains("\"definition\""));
        let loaded = parse_fbas(&text).unwrap();
        assert_eq!(loaded.fbas, o.fbas);
        assert_eq!(loaded.organizations, o.organizations);
        let Fbas::General(g) = &loaded.fbas else { panic!() };
        assert_eq!(g.slices(loaded.names.id("a1").unwrap()).len(), 3132);
        assert_eq!(g.slices(loaded.names.id("f1").unwrap()).len(), 2673);
    }

    #[test]
    fn mixed_document_expands_simple_nodes() {
        let text = r#"{"version":1,"nodes":[
            {"name":"a","simple":{"quorum_set":["a","b","c"],"threshold":2}},
            {"name":"b","slices":[["a","b"]]},
            {"name":"c","definition":{"threshold":1,"validators":["a","b"],"innerQuorumSets":[]}}
        ]}"#;
        let f = parse_fbas(text).unwrap().fbas;
        let Fbas::General(g) = &f else { panic!() };
        assert_eq!(g.slices(NodeId(0)), &[set_of(&[0, 1]), set_of(&[0, 2])]);
        assert_eq!(g.slices(NodeId(2)), &[set_of(&[0, 2]), set_of(&[1, 2])]);
        assert!(f.has_slice_within(NodeId(1), &set_of(&[0, 1])));
        assert!(!f.has_slice_within(NodeId(1), &set_of(&[1, 2])));
    }

    #[test]
    fn rejects_bad_documents() {
        let cases = [
            r#"{"version":1,"nodes":[{"name":"a","slices":[["a"]]},{"name":"a","slices":[["a"]]}]}"#,
            r#"{"version":2,"nodes":[{"name":"a","slices":[["a"]]}]}"#,
            r#"{"version":1,"nodes":[{"name":"a","slices":[["b"]]}]}"#,
            r#"{"version":1,"nodes":[{"name":"a"}]}"#,
            r#"{"version":1,"nodes":[{"name":"a","slices":[["a"]],"simple":{"quorum_set":["a"],"threshold":1}}]}"#,
            r#"{"version":1,"nodes":[{"name":"a","slices":[["a","a"]]}]}"#,
            r#"{"version":1,"nodes":[]}"#,
            r#"{"version":1,"nodes":[{"name":"a","slices":[["a"]]}],"organizations":[{"name":"A","members":["a"]},{"name":"B","members":["a"]}]}"#,
            "{\"version\":1,\n\"nodes\": [",
        ];
        for c in cases {
            assert!(matches!(parse_fbas(c), Err(FbasError::Parse { .. })), "{c}");
        }
        let not_member =
            r#"{"version":1,"nodes":[{"name":"a","slices":[["b"]]},{"name":"b","slices":[["b"]]}]}"#;
        assert!(matches!(
            parse_fbas(not_member),
            Err(FbasError::MembershipViolation { .. })
        ));
        let bad_threshold =
            r#"{"version":1,"nodes":[{"name":"a","simple":{"quorum_set":["a"],"threshold":2}}]}"#;
        assert!(matches!(
            parse_fbas(bad_threshold),
            Err(FbasError::ThresholdOutOfRange { .. })
        ));
    }

    #[test]
    fn parse_error_reports_position() {
        let err = parse_fbas("{\"version\":1,\n\"nodes\": [").unwrap_err();
        let FbasError::Parse { location, .. } = err else {
            panic!()
        };
        assert!(location.starts_with("line 2"), "{location}");
    }

    #[test]
    fn stellar_nodes_conversion() {
        let text = r#"[
          {"publicKey": "GA", "name": "x", "quorumSet": {"threshold": 2, "validators": ["GA", "GB"], "innerQuorumSets": []}},
          {"publicKey": "GB", "quorumSet": {"threshold": 1, "validators": [], "innerQuorumSets": [{"threshold": 1, "validators": ["GA"]}]}}
        ]"#;
        let doc = convert_stellar_nodes(text).unwrap();
        let f = doc.build(DEFAULT_GENERATION_CAP).unwrap();
        let Fbas::General(g) = &f else { panic!() };
        assert_eq!(g.slices(NodeId(0)), &[set_of(&[0, 1])]);
        assert_eq!(g.slices(NodeId(1)), &[set_of(&[0, 1])]);
    }

    #[test]
    fn distributions() {
        let names = NameTable::numbered(3);
        let n = |i: usize| names.name(NodeId(i)).to_string();
        let d = parse_distribution(
            &format!(
                r#"{{"model":"independent","default":0.1,"p":{{"{}":0.5}}}}"#,
                n(2)
            ),
            &names,
            &[],
        )
        .unwrap();
        assert_eq!(
            d,
            FailureDistribution::Independent {
                p: vec![0.1, 0.1, 0.5]
            }
        );
        let d = parse_distribution(
            &format!(r#"{{"model":"at-most-one","p_single":{{"{}":0.25}}}}"#, n(0)),
            &names,
            &[],
        )
        .unwrap();
        assert_eq!(
            d,
            FailureDistribution::AtMostOne {
                p_empty: 0.75,
                p_single: vec![0.25, 0.0, 0.0]
            }
        );
        let orgs = [Organization {
            name: "A".into(),
            members: NodeSet::full(3),
        }];
        assert!(
            parse_distribution(r#"{"model":"grouped-byzantine","q":0.1,"r":0.0}"#, &names, &orgs).is_ok()
        );
        assert!(parse_distribution(r#"{"model":"grouped-byzantine","q":0.1,"r":0.0}"#, &names, &[]).is_err());
        assert!(matches!(
            parse_distribution(
                r#"{"model":"explicit","table":[{"set":[],"p":0.5}]}"#,
                &names,
                &[]
            ),
            Err(FbasError::InvalidDistribution(_))
        ));
        assert!(parse_distribution(r#"{"model":"nope"}"#, &names, &[]).is_err());
    }
}
