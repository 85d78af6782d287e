//! Forward-chaining saturation over the three rules the walk benefits from:
//! subclass transitivity, type propagation along subclass edges, and inverse
//! materialization. Rules only add triples, tagged [`Provenance::Inferred`].

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{EdgeLabel, KnowledgeGraph, NodeRef, Provenance, Triple};
use crate::ingest::{find_cycle, format_cycle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("subClassOf cycle: {}", format_cycle(.members))]
    SubClassCycle { members: Vec<NodeRef> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// `a ⊑ b, b ⊑ c  =>  a ⊑ c`
    SubClassTransitivity,
    /// `d typeOf b, b ⊑ c  =>  d typeOf c`
    TypePropagation,
    /// `s p o  =>  o inverse(p) s`
    InverseMaterialization,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    rules: BTreeSet<Rule>,
}

impl RuleSet {
    pub fn all() -> RuleSet {
        RuleSet {
            rules: [
                Rule::SubClassTransitivity,
                Rule::TypePropagation,
                Rule::InverseMaterialization,
            ]
            .into_iter()
            .collect(),
        }
    }

    pub fn inverses_only() -> RuleSet {
        RuleSet {
            rules: [Rule::InverseMaterialization].into_iter().collect(),
        }
    }

    pub fn none() -> RuleSet {
        RuleSet { rules: BTreeSet::new() }
    }

    pub fn with(mut self, rule: Rule) -> RuleSet {
        self.rules.insert(rule);
        self
    }

    pub fn contains(&self, rule: Rule) -> bool {
        self.rules.contains(&rule)
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::all()
    }
}

fn inferred(s: NodeRef, p: EdgeLabel, o: NodeRef) -> Triple {
    Triple::new(s, p, o, Provenance::Inferred)
}

/// Strict ancestors of every class along `subClassOf`, or the cycle that
/// makes the relation non-strict.
fn ancestors(g: &KnowledgeGraph) -> Result<BTreeMap<NodeRef, BTreeSet<NodeRef>>, ReasonerError> {
    let edges: Vec<(NodeRef, NodeRef)> = g
        .triples_with_label(EdgeLabel::SubClassOf)
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();
    if let Some(members) = find_cycle(&edges) {
        return Err(ReasonerError::SubClassCycle { members });
    }
    let mut out: BTreeMap<NodeRef, BTreeSet<NodeRef>> = BTreeMap::new();
    for (start, _) in &edges {
        if out.contains_key(start) {
            continue;
        }
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&NodeRef> = vec![start];
        while let Some(node) = stack.pop() {
            if let Some(parents) = g.neighbor_set(node, EdgeLabel::SubClassOf) {
                for p in parents {
                    if seen.insert(p.clone()) {
                        stack.push(p);
                    }
                }
            }
        }
        out.insert(start.clone(), seen);
    }
    Ok(out)
}

fn apply_subclass_closure(g: &mut KnowledgeGraph) -> Result<bool, ReasonerError> {
    let mut changed = false;
    for (class, ups) in ancestors(g)? {
        for up in ups {
            changed |= g.add_triple(inferred(class.clone(), EdgeLabel::SubClassOf, up));
        }
    }
    Ok(changed)
}

fn apply_type_propagation(g: &mut KnowledgeGraph) -> Result<bool, ReasonerError> {
    let anc = ancestors(g)?;
    let lifts: Vec<Triple> = g
        .triples_with_label(EdgeLabel::TypeOf)
        .flat_map(|(instance, class)| {
            anc.get(class)
                .into_iter()
                .flatten()
                .filter(move |up| *up != instance)
                .map(move |up| inferred(instance.clone(), EdgeLabel::TypeOf, up.clone()))
        })
        .collect();
    let mut changed = false;
    for t in lifts {
        changed |= g.add_triple(t);
    }
    Ok(changed)
}

fn apply_inverses(g: &mut KnowledgeGraph) -> bool {
    let missing: Vec<Triple> = g
        .triples()
        .filter(|t| !g.contains(&t.object, t.predicate.inverse(), &t.subject))
        .map(|t| inferred(t.object, t.predicate.inverse(), t.subject))
        .collect();
    let changed = !missing.is_empty();
    g.extend(missing);
    changed
}

/// Adds every transitive `subClassOf` edge. Reflexive edges are never added;
/// a cycle is an error.
pub fn subclass_closure(g: &KnowledgeGraph) -> Result<KnowledgeGraph, ReasonerError> {
    let mut out = g.clone();
    apply_subclass_closure(&mut out)?;
    Ok(out)
}

/// Lifts every `typeOf` edge to all superclasses of its class.
pub fn type_propagation(g: &KnowledgeGraph) -> Result<KnowledgeGraph, ReasonerError> {
    let mut out = g.clone();
    apply_type_propagation(&mut out)?;
    Ok(out)
}

pub fn materialize_inverses(g: &KnowledgeGraph) -> KnowledgeGraph {
    let mut out = g.clone();
    apply_inverses(&mut out);
    out
}

/// Least fixpoint of all three rules.
pub fn saturate(g: &KnowledgeGraph) -> Result<KnowledgeGraph, ReasonerError> {
    saturate_with(g, &RuleSet::all())
}

/// Least fixpoint of the selected rules.
pub fn saturate_with(g: &KnowledgeGraph, rules: &RuleSet) -> Result<KnowledgeGraph, ReasonerError> {
    let mut out = g.clone();
    saturate_in_place(&mut out, rules)?;
    Ok(out)
}

pub fn saturate_in_place(g: &mut KnowledgeGraph, rules: &RuleSet) -> Result<(), ReasonerError> {
    loop {
        let mut changed = false;
        if rules.contains(Rule::SubClassTransitivity) {
            changed |= apply_subclass_closure(g)?;
        }
        if rules.contains(Rule::TypePropagation) {
            changed |= apply_type_propagation(g)?;
        }
        if rules.contains(Rule::InverseMaterialization) {
            changed |= apply_inverses(g);
        }
        if !changed {
            return Ok(());
        }
    }
}
