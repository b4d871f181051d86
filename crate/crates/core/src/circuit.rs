//! Algebraic formulas, circuits and branching programs.
//!
//! A [`Circuit`] is a DAG of add/mul gates over variable and constant
//! leaves, stored so that every child index precedes its parent; formulas
//! are circuits whose reachable graph is a tree. Size follows the model:
//! leaf count for formulas, nodes plus edges for general circuits. The
//! formal degree is 1 at every leaf, the max over addition gates and the
//! sum over multiplication gates.
//!
//! An [`Abp`] is a layered graph with affine edge labels; it computes the
//! sum over source-sink paths of the product of labels, and its size is the
//! number of edges.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::multipoly::MultiPoly;
use crate::unipoly::UniPoly;
use serde::{Deserialize, Serialize};

pub const DEFAULT_EXPAND_TERMS: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Node {
    Var { index: usize },
    Const { value: u64 },
    Add { children: Vec<usize> },
    Mul { children: Vec<usize> },
}

impl Node {
    fn children(&self) -> &[usize] {
        match self {
            Node::Var { .. } | Node::Const { .. } => &[],
            Node::Add { children } | Node::Mul { children } => children,
        }
    }

    fn is_leaf(&self) -> bool {
        matches!(self, Node::Var { .. } | Node::Const { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitKind {
    Formula,
    Circuit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Formula,
    Abp,
    Circuit,
}

/// Size and formal degree of a syntactic object, under its model's measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeReport {
    pub model: Model,
    pub size: u64,
    pub formal_degree: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CircuitRepr", into = "CircuitRepr")]
pub struct Circuit {
    field: Field,
    nodes: Vec<Node>,
    output: usize,
    kind: CircuitKind,
}

#[derive(Serialize, Deserialize, Clone)]
struct CircuitRepr {
    field: Field,
    nodes: Vec<Node>,
    output: usize,
    kind: CircuitKind,
}

impl TryFrom<CircuitRepr> for Circuit {
    type Error = Error;
    fn try_from(r: CircuitRepr) -> Result<Circuit> {
        Circuit::new(r.field, r.nodes, r.output, r.kind)
    }
}

impl From<Circuit> for CircuitRepr {
    fn from(c: Circuit) -> CircuitRepr {
        CircuitRepr { field: c.field, nodes: c.nodes, output: c.output, kind: c.kind }
    }
}

impl Circuit {
    /// Validates the node list: children precede parents (which makes the
    /// graph acyclic), constants are canonical, gates are nonempty, and for
    /// formulas the reachable graph is a tree.
    pub fn new(field: Field, nodes: Vec<Node>, output: usize, kind: CircuitKind) -> Result<Circuit> {
        if output >= nodes.len() {
            return Err(Error::format(format!("output index {output} out of range")));
        }
        for (i, node) in nodes.iter().enumerate() {
            match node {
                Node::Const { value } => {
                    if !field.is_canonical(*value) {
                        return Err(Error::format(format!("constant {value} not canonical in {field}")));
                    }
                }
                Node::Add { children } | Node::Mul { children } => {
                    if children.is_empty() {
                        return Err(Error::format(format!("gate {i} has no children")));
                    }
                    for &c in children {
                        if c >= i {
                            return Err(Error::format(format!(
                                "node {i} references child {c}, children must precede parents"
                            )));
                        }
                    }
                }
                Node::Var { .. } => {}
            }
        }
        let c = Circuit { field, nodes, output, kind };
        if kind == CircuitKind::Formula {
            c.check_tree()?;
        }
        Ok(c)
    }

    fn check_tree(&self) -> Result<()> {
        let reach = self.reachable();
        let mut parents = vec![0u32; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if !reach[i] {
                continue;
            }
            for &c in node.children() {
                parents[c] += 1;
            }
        }
        for (i, &p) in parents.iter().enumerate() {
            if reach[i] && ((i == self.output && p != 0) || (i != self.output && p > 1)) {
                return Err(Error::format(format!(
                    "node {i} has {p} parents, formulas must be trees"
                )));
            }
        }
        Ok(())
    }

    pub fn builder(field: Field, kind: CircuitKind) -> CircuitBuilder {
        CircuitBuilder { field, kind, nodes: Vec::new() }
    }

    pub fn constant_circuit(field: Field, value: u64) -> Circuit {
        let mut b = Circuit::builder(field, CircuitKind::Formula);
        let n = b.constant(value);
        b.finish(n).expect("single constant is a formula")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn kind(&self) -> CircuitKind {
        self.kind
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// 1 + the largest variable index appearing in the circuit, 0 if none.
    pub fn num_vars(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Var { index } => Some(index + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    fn reachable(&self) -> Vec<bool> {
        let mut reach = vec![false; self.nodes.len()];
        let mut stack = vec![self.output];
        while let Some(i) = stack.pop() {
            if reach[i] {
                continue;
            }
            reach[i] = true;
            stack.extend_from_slice(self.nodes[i].children());
        }
        reach
    }

    /// Leaf count of the reachable graph (the formula size measure).
    pub fn leaf_count(&self) -> u64 {
        let reach = self.reachable();
        self.nodes
            .iter()
            .enumerate()
            .filter(|(i, n)| reach[*i] && n.is_leaf())
            .count() as u64
    }

    /// Size under this object's own measure: leaves for formulas, reachable
    /// nodes plus edges for circuits.
    pub fn size(&self) -> u64 {
        match self.kind {
            CircuitKind::Formula => self.leaf_count(),
            CircuitKind::Circuit => {
                let reach = self.reachable();
                let mut nodes = 0u64;
                let mut edges = 0u64;
                for (i, n) in self.nodes.iter().enumerate() {
                    if reach[i] {
                        nodes += 1;
                        edges += n.children().len() as u64;
                    }
                }
                nodes + edges
            }
        }
    }

    pub fn formal_degree(&self) -> u64 {
        let mut deg = vec![0u64; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            deg[i] = match node {
                Node::Var { .. } | Node::Const { .. } => 1,
                Node::Add { children } => children.iter().map(|&c| deg[c]).max().unwrap_or(1),
                Node::Mul { children } => {
                    children.iter().map(|&c| deg[c]).fold(0u64, u64::saturating_add)
                }
            };
        }
        deg[self.output]
    }

    pub fn size_report(&self) -> SizeReport {
        SizeReport {
            model: match self.kind {
                CircuitKind::Formula => Model::Formula,
                CircuitKind::Circuit => Model::Circuit,
            },
            size: self.size(),
            formal_degree: self.formal_degree(),
        }
    }

    pub fn evaluate(&self, point: &[u64]) -> Result<u64> {
        let f = self.field;
        let mut vals = vec![0u64; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            vals[i] = match node {
                Node::Var { index } => *point.get(*index).copied().as_ref().ok_or_else(|| {
                    Error::domain(format!(
                        "variable x_{index} out of range for a {}-coordinate point",
                        point.len()
                    ))
                })?,
                Node::Const { value } => *value,
                Node::Add { children } => {
                    children.iter().fold(0u64, |acc, &c| f.add(acc, vals[c]))
                }
                Node::Mul { children } => {
                    children.iter().fold(1u64, |acc, &c| f.mul(acc, vals[c]))
                }
            };
        }
        Ok(vals[self.output])
    }

    /// The exact polynomial this circuit computes, as a sparse MultiPoly.
    /// `max_terms` caps every intermediate term count.
    pub fn expand(&self, degree_cap: u64, max_terms: usize) -> Result<MultiPoly> {
        if self.formal_degree() > degree_cap {
            return Err(Error::parameter(format!(
                "formal degree {} exceeds the requested cap {degree_cap}",
                self.formal_degree()
            )));
        }
        let n = self.num_vars();
        let f = self.field;
        let reach = self.reachable();
        let mut polys: Vec<Option<MultiPoly>> = vec![None; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if !reach[i] {
                continue;
            }
            let p = match node {
                Node::Var { index } => MultiPoly::var(f, n, *index),
                Node::Const { value } => MultiPoly::constant(f, n, *value),
                Node::Add { children } => {
                    let mut acc = MultiPoly::zero(f, n);
                    for &c in children {
                        acc = acc.add(polys[c].as_ref().expect("child before parent"))?;
                    }
                    acc
                }
                Node::Mul { children } => {
                    let mut acc = MultiPoly::constant(f, n, 1);
                    for &c in children {
                        acc = acc.mul(polys[c].as_ref().expect("child before parent"))?;
                    }
                    acc
                }
            };
            if p.num_terms() > max_terms {
                return Err(Error::budget("circuit expansion term count", p.num_terms(), max_terms));
            }
            polys[i] = Some(p);
        }
        Ok(polys[self.output].take().expect("output reachable"))
    }

    pub fn expand_default(&self) -> Result<MultiPoly> {
        self.expand(self.formal_degree(), DEFAULT_EXPAND_TERMS)
    }

    /// Replaces assigned variable leaves by constant leaves. Leaf and edge
    /// counts are unchanged, so the size never increases.
    pub fn substitute_partial(&self, assignment: &[(usize, u64)]) -> Circuit {
        let nodes = self
            .nodes
            .iter()
            .map(|node| match node {
                Node::Var { index } => match assignment.iter().find(|(v, _)| v == index) {
                    Some(&(_, value)) => Node::Const { value },
                    None => node.clone(),
                },
                _ => node.clone(),
            })
            .collect();
        Circuit { field: self.field, nodes, output: self.output, kind: self.kind }
    }

    /// Renames variable leaves: x_i becomes x_(mapping\[i\]).
    pub fn relabel_vars(&self, mapping: &[usize]) -> Result<Circuit> {
        let nodes = self
            .nodes
            .iter()
            .map(|node| match node {
                Node::Var { index } => mapping
                    .get(*index)
                    .map(|&j| Node::Var { index: j })
                    .ok_or_else(|| Error::domain(format!("variable x_{index} has no mapping"))),
                _ => Ok(node.clone()),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit { field: self.field, nodes, output: self.output, kind: self.kind })
    }
}

pub struct CircuitBuilder {
    field: Field,
    kind: CircuitKind,
    nodes: Vec<Node>,
}

impl CircuitBuilder {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn input(&mut self, index: usize) -> usize {
        self.push(Node::Var { index })
    }

    pub fn constant(&mut self, value: u64) -> usize {
        debug_assert!(self.field.is_canonical(value));
        self.push(Node::Const { value })
    }

    pub fn add(&mut self, children: Vec<usize>) -> usize {
        self.push(Node::Add { children })
    }

    pub fn mul(&mut self, children: Vec<usize>) -> usize {
        self.push(Node::Mul { children })
    }

    fn push(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Appends a full copy of `other` (rooted at its output); returns the
    /// index of the copied root.
    pub fn splice(&mut self, other: &Circuit) -> usize {
        let offset = self.nodes.len();
        for node in &other.nodes {
            let shifted = match node {
                Node::Add { children } => {
                    Node::Add { children: children.iter().map(|c| c + offset).collect() }
                }
                Node::Mul { children } => {
                    Node::Mul { children: children.iter().map(|c| c + offset).collect() }
                }
                other => other.clone(),
            };
            self.nodes.push(shifted);
        }
        other.output + offset
    }

    pub fn finish(self, output: usize) -> Result<Circuit> {
        Circuit::new(self.field, self.nodes, output, self.kind)
    }
}

/// Horner formula for a univariate: (..((p_d x + p_{d-1}) x + p_{d-2})..) x + p_0,
/// exactly 2d+1 leaves.
pub fn horner_formula(p: &UniPoly, var_index: usize) -> Circuit {
    let field = p.field();
    let mut b = Circuit::builder(field, CircuitKind::Formula);
    let d = match p.degree() {
        None => {
            let n = b.constant(0);
            return b.finish(n).expect("constant leaf");
        }
        Some(d) => d,
    };
    let mut acc = b.constant(p.coeff(d));
    for i in (0..d).rev() {
        let x = b.input(var_index);
        let prod = b.mul(vec![acc, x]);
        let c = b.constant(p.coeff(i));
        acc = b.add(vec![prod, c]);
    }
    b.finish(acc).expect("horner shape is a tree")
}

/// Sum-of-products formula for a sparse polynomial: one coefficient leaf and
/// one variable leaf per exponent unit in each term, so the leaf count is at
/// most terms * (total degree + 1).
pub fn sparse_to_formula(f: &MultiPoly) -> Circuit {
    let field = f.field();
    let mut b = Circuit::builder(field, CircuitKind::Formula);
    if f.is_zero() {
        let n = b.constant(0);
        return b.finish(n).expect("constant leaf");
    }
    let mut term_roots = Vec::with_capacity(f.num_terms());
    for (exps, c) in f.terms() {
        let mut factors = vec![b.constant(c)];
        for (var, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                factors.push(b.input(var));
            }
        }
        let root = if factors.len() == 1 { factors[0] } else { b.mul(factors) };
        term_roots.push(root);
    }
    let out = if term_roots.len() == 1 { term_roots[0] } else { b.add(term_roots) };
    b.finish(out).expect("sum of products is a tree")
}

/// Substitutes a circuit for every variable of `p`. For formula inputs each
/// leaf occurrence receives its own copy, so the result stays a tree and its
/// leaf count is at most size(p) * max size(subs).
pub fn compose(p: &Circuit, subs: &[Circuit]) -> Result<Circuit> {
    for s in subs {
        if s.field() != p.field() {
            return Err(Error::SpecMismatch(p.field().to_string(), s.field().to_string()));
        }
    }
    if p.num_vars() > subs.len() {
        return Err(Error::domain(format!(
            "composition needs {} substitutions, got {}",
            p.num_vars(),
            subs.len()
        )));
    }
    let all_formula = p.kind() == CircuitKind::Formula
        && subs.iter().all(|s| s.kind() == CircuitKind::Formula);

    if all_formula {
        let mut b = Circuit::builder(p.field(), CircuitKind::Formula);
        let root = compose_tree(&mut b, p, p.output(), subs);
        b.finish(root)
    } else {
        // Shared-DAG splice: one copy of every substitution.
        let mut b = Circuit::builder(p.field(), CircuitKind::Circuit);
        let sub_roots: Vec<usize> = subs.iter().map(|s| b.splice(s)).collect();
        let offset = b.nodes.len();
        let mut remap = vec![0usize; p.nodes.len()];
        for (i, node) in p.nodes.iter().enumerate() {
            remap[i] = match node {
                Node::Var { index } => sub_roots[*index],
                Node::Const { value } => b.constant(*value),
                Node::Add { children } => {
                    let ch = children.iter().map(|&c| remap[c]).collect();
                    b.add(ch)
                }
                Node::Mul { children } => {
                    let ch = children.iter().map(|&c| remap[c]).collect();
                    b.mul(ch)
                }
            };
            debug_assert!(remap[i] < offset + p.nodes.len());
        }
        b.finish(remap[p.output()])
    }
}

fn compose_tree(b: &mut CircuitBuilder, p: &Circuit, node: usize, subs: &[Circuit]) -> usize {
    match &p.nodes[node] {
        Node::Var { index } => b.splice(&subs[*index]),
        Node::Const { value } => b.constant(*value),
        Node::Add { children } => {
            let ch: Vec<usize> = children.iter().map(|&c| compose_tree(b, p, c, subs)).collect();
            b.add(ch)
        }
        Node::Mul { children } => {
            let ch: Vec<usize> = children.iter().map(|&c| compose_tree(b, p, c, subs)).collect();
            b.mul(ch)
        }
    }
}

/// Affine edge label: coeffs . x + constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineForm {
    pub coeffs: Vec<u64>,
    pub constant: u64,
}

impl AffineForm {
    pub fn evaluate(&self, field: Field, point: &[u64]) -> Result<u64> {
        if point.len() < self.coeffs.len() {
            return Err(Error::domain(format!(
                "affine form over {} variables evaluated at {} coordinates",
                self.coeffs.len(),
                point.len()
            )));
        }
        let mut acc = self.constant;
        for (c, x) in self.coeffs.iter().zip(point) {
            acc = field.add(acc, field.mul(*c, *x));
        }
        Ok(acc)
    }

    fn to_multipoly(&self, field: Field, num_vars: usize) -> MultiPoly {
        let mut p = MultiPoly::constant(field, num_vars, self.constant);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let mut exps = vec![0u32; num_vars];
                exps[i] = 1;
                p.add_term(&exps, c);
            }
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbpEdge {
    pub from: usize,
    pub to: usize,
    pub label: AffineForm,
}

/// Layered algebraic branching program. Vertices are numbered layer by
/// layer; vertex 0 is the source, the last vertex is the sink.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AbpRepr", into = "AbpRepr")]
pub struct Abp {
    field: Field,
    num_vars: usize,
    layer_sizes: Vec<usize>,
    edges: Vec<AbpEdge>,
}

#[derive(Serialize, Deserialize, Clone)]
struct AbpRepr {
    field: Field,
    num_vars: usize,
    layer_sizes: Vec<usize>,
    edges: Vec<AbpEdge>,
}

impl TryFrom<AbpRepr> for Abp {
    type Error = Error;
    fn try_from(r: AbpRepr) -> Result<Abp> {
        Abp::new(r.field, r.num_vars, r.layer_sizes, r.edges)
    }
}

impl From<Abp> for AbpRepr {
    fn from(a: Abp) -> AbpRepr {
        AbpRepr { field: a.field, num_vars: a.num_vars, layer_sizes: a.layer_sizes, edges: a.edges }
    }
}

impl Abp {
    pub fn new(
        field: Field,
        num_vars: usize,
        layer_sizes: Vec<usize>,
        edges: Vec<AbpEdge>,
    ) -> Result<Abp> {
        if layer_sizes.len() < 2 || layer_sizes[0] != 1 || *layer_sizes.last().unwrap() != 1 {
            return Err(Error::format(
                "layer sizes must start and end with a single vertex (source and sink)",
            ));
        }
        if layer_sizes.contains(&0) {
            return Err(Error::format("empty layer"));
        }
        let total: usize = layer_sizes.iter().sum();
        let layer_of = layer_index(&layer_sizes);
        for e in &edges {
            if e.from >= total || e.to >= total {
                return Err(Error::format(format!("edge {}->{} out of range", e.from, e.to)));
            }
            if layer_of[e.to] != layer_of[e.from] + 1 {
                return Err(Error::format(format!(
                    "edge {}->{} must connect consecutive layers",
                    e.from, e.to
                )));
            }
            if e.label.coeffs.len() > num_vars {
                return Err(Error::format("edge label has more coefficients than variables"));
            }
            for &c in e.label.coeffs.iter().chain([&e.label.constant]) {
                if !field.is_canonical(c) {
                    return Err(Error::format(format!("label value {c} not canonical in {field}")));
                }
            }
        }
        if edges.iter().any(|e| e.to == 0) {
            return Err(Error::format("source must have in-degree 0"));
        }
        if edges.iter().any(|e| e.from == total - 1) {
            return Err(Error::format("sink must have out-degree 0"));
        }
        Ok(Abp { field, num_vars, layer_sizes, edges })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_vertices(&self) -> usize {
        self.layer_sizes.iter().sum()
    }

    /// Size of an ABP: the number of edges.
    pub fn size(&self) -> u64 {
        self.edges.len() as u64
    }

    /// Edge labels have degree at most 1, so the formal degree is the path
    /// length: one less than the number of layers.
    pub fn formal_degree(&self) -> u64 {
        (self.layer_sizes.len() - 1) as u64
    }

    pub fn size_report(&self) -> SizeReport {
        SizeReport { model: Model::Abp, size: self.size(), formal_degree: self.formal_degree() }
    }

    /// Sum over s-t paths of the product of edge labels, by dynamic
    /// programming over the layers.
    pub fn evaluate(&self, point: &[u64]) -> Result<u64> {
        if point.len() < self.num_vars {
            return Err(Error::domain(format!(
                "ABP over {} variables evaluated at {} coordinates",
                self.num_vars,
                point.len()
            )));
        }
        let f = self.field;
        let total = self.num_vertices();
        let mut acc = vec![0u64; total];
        acc[0] = 1;
        for e in &self.edges {
            let w = e.label.evaluate(f, point)?;
            let add = f.mul(acc[e.from], w);
            acc[e.to] = f.add(acc[e.to], add);
        }
        Ok(acc[total - 1])
    }

    pub fn expand(&self, max_terms: usize) -> Result<MultiPoly> {
        let f = self.field;
        let n = self.num_vars;
        let total = self.num_vertices();
        let mut acc: Vec<MultiPoly> = (0..total).map(|_| MultiPoly::zero(f, n)).collect();
        acc[0] = MultiPoly::constant(f, n, 1);
        for e in &self.edges {
            let w = e.label.to_multipoly(f, n);
            let add = acc[e.from].mul(&w)?;
            acc[e.to] = acc[e.to].add(&add)?;
            if acc[e.to].num_terms() > max_terms {
                return Err(Error::budget("ABP expansion term count", acc[e.to].num_terms(), max_terms));
            }
        }
        Ok(acc.swap_remove(total - 1))
    }
}

fn layer_index(layer_sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(layer_sizes.iter().sum());
    for (layer, &sz) in layer_sizes.iter().enumerate() {
        out.extend(std::iter::repeat_n(layer, sz));
    }
    out
}
