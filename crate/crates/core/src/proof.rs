//! Proof DAGs and their renderings.

use std::collections::HashMap;
use std::fmt::Write;

use serde::Serialize;

use crate::gdd::{Justification, HYPOTHESIS};
use crate::i18n::{lookup, CatalogChain};
use crate::model::Fact;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofNode {
    /// 1-based; leaves take the smallest indices.
    pub index: usize,
    pub fact: Fact,
    pub rule: String,
    /// Phrase key of the reason.
    pub reason: String,
    pub antecedents: Vec<usize>,
}

impl ProofNode {
    pub fn is_hypothesis(&self) -> bool {
        self.rule == HYPOTHESIS
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofDag {
    nodes: Vec<ProofNode>,
    root: usize,
}

impl ProofDag {
    /// Builds the DAG of `root` from justifications (one per produced fact;
    /// the first wins). Facts not reachable from `root` are dropped. A fact
    /// without a justification becomes an unexplained leaf.
    pub fn extract(root: &Fact, justifications: &[Justification]) -> Self {
        let mut by_fact: HashMap<&Fact, &Justification> = HashMap::new();
        for j in justifications {
            by_fact.entry(&j.produced).or_insert(j);
        }

        // Iterative post-order DFS; antecedents in justification order.
        let mut order: Vec<&Fact> = Vec::new();
        let mut state: HashMap<&Fact, bool> = HashMap::new(); // false = open, true = done
        let mut stack: Vec<(&Fact, usize)> = vec![(root, 0)];
        state.insert(root, false);
        while let Some((f, next)) = stack.pop() {
            let ants = by_fact.get(f).map_or(&[][..], |j| j.antecedents.as_slice());
            if let Some(a) = ants.get(next) {
                stack.push((f, next + 1));
                if !state.contains_key(a) {
                    state.insert(a, false);
                    stack.push((a, 0));
                }
            } else {
                state.insert(f, true);
                order.push(f);
            }
        }

        let is_leaf = |f: &Fact| by_fact.get(f).is_none_or(|j| j.antecedents.is_empty());
        let mut numbered: Vec<&Fact> = order.iter().copied().filter(|f| is_leaf(f)).collect();
        numbered.extend(order.iter().copied().filter(|f| !is_leaf(f)));
        let index: HashMap<&Fact, usize> = numbered.iter().enumerate().map(|(i, f)| (*f, i + 1)).collect();

        let nodes = numbered
            .iter()
            .map(|f| {
                let (rule, reason, ants) = match by_fact.get(f) {
                    Some(j) => {
                        let mut ants: Vec<usize> = Vec::new();
                        for a in &j.antecedents {
                            let i = index[a];
                            // Back edges only arise from cyclic input; drop them.
                            if i < index[f] && !ants.contains(&i) {
                                ants.push(i);
                            }
                        }
                        (j.rule_id.clone(), j.phrase_key.clone(), ants)
                    }
                    None => ("unjustified".to_string(), "unjustified".to_string(), Vec::new()),
                };
                ProofNode {
                    index: index[f],
                    fact: (*f).clone(),
                    rule,
                    reason,
                    antecedents: ants,
                }
            })
            .collect();
        Self {
            nodes,
            root: index[root],
        }
    }

    pub fn nodes(&self) -> &[ProofNode] {
        &self.nodes
    }

    pub fn root(&self) -> &ProofNode {
        self.node(self.root)
    }

    pub fn node(&self, index: usize) -> &ProofNode {
        &self.nodes[index - 1]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of nodes listing `index` as an antecedent.
    pub fn out_degree(&self, index: usize) -> usize {
        self.nodes.iter().filter(|n| n.antecedents.contains(&index)).count()
    }

    pub fn is_tree(&self) -> bool {
        self.nodes.iter().all(|n| self.out_degree(n.index) <= 1)
    }

    /// Lines of the tree rendering; shared subtrees are expanded each time.
    pub fn tree_line_count(&self) -> usize {
        let mut memo = vec![0usize; self.nodes.len() + 1];
        for n in &self.nodes {
            memo[n.index] = 1 + n.antecedents.iter().map(|&a| memo[a]).sum::<usize>();
        }
        memo[self.root]
    }
}

/// `midp(M,A,B)` with the predicate name looked up in `chain`.
pub fn localized_fact(f: &Fact, chain: &CatalogChain) -> String {
    f.render_with(lookup(chain, f.predicate().name()))
}

fn line(n: &ProofNode, chain: &CatalogChain) -> String {
    format!("{}. {} ({})", n.index, localized_fact(&n.fact, chain), lookup(chain, &n.reason))
}

/// Tree rendering when `structure_on`, otherwise the flat numbered list in
/// which derived lines also cite their antecedents.
pub fn render_tree(dag: &ProofDag, chain: &CatalogChain, structure_on: bool) -> String {
    let mut out = String::new();
    if structure_on {
        let mut stack = vec![(dag.root, 0usize)];
        while let Some((i, depth)) = stack.pop() {
            let n = dag.node(i);
            let _ = writeln!(out, "{}{}", "  ".repeat(depth), line(n, chain));
            stack.extend(n.antecedents.iter().rev().map(|&a| (a, depth + 1)));
        }
    } else {
        let because = lookup(chain, "because");
        for n in dag.nodes() {
            if n.antecedents.is_empty() {
                let _ = writeln!(out, "{}", line(n, chain));
            } else {
                let refs: Vec<String> = n.antecedents.iter().map(usize::to_string).collect();
                let _ = writeln!(
                    out,
                    "{}. {} ({}; {} {})",
                    n.index,
                    localized_fact(&n.fact, chain),
                    lookup(chain, &n.reason),
                    because,
                    refs.join(", ")
                );
            }
        }
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// GraphViz source: one node per fact, edges from antecedent to consequence.
pub fn export_dot(dag: &ProofDag, chain: &CatalogChain) -> String {
    let mut out = String::from("digraph proof {\n  rankdir=BT;\n  node [fontname=\"Helvetica\"];\n");
    for n in dag.nodes() {
        let label = format!(
            "{}. {}\\n({})",
            n.index,
            dot_escape(&localized_fact(&n.fact, chain)),
            dot_escape(lookup(chain, &n.reason))
        );
        let shape = if n.antecedents.is_empty() { "box" } else { "ellipse" };
        let _ = writeln!(out, "  n{} [label=\"{}\", shape={}];", n.index, label, shape);
    }
    for n in dag.nodes() {
        for a in &n.antecedents {
            let _ = writeln!(out, "  n{} -> n{};", a, n.index);
        }
    }
    out.push_str("}\n");
    out
}
