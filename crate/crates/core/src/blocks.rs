//! Block diagrams built from unit delays, gains and summing junctions.
//!
//! A graph has one input and one output node. Every edge into a sum node
//! carries a sign; edges into any other node must be positive.
//!
//! Flattening eliminates interior nodes of the equivalent signal-flow graph
//! one at a time, with edge transmittances held as ratios of polynomials in
//! the unit delay. Products of gains and delays stay exact, so a direct-form
//! graph flattens back to exactly the coefficients it was built from.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use crate::dt::{DifferenceEquation, Sequence};
use crate::error::{Error, Result};
use crate::rational::Polynomial;

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Input,
    Output,
    Delay,
    Gain(f64),
    Sum,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub from: String,
    pub to: String,
    /// `+1.0` or `-1.0`.
    pub sign: f64,
}

/// The four elementary architectures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Architecture {
    /// `1 - z_z z^-1`
    FirDifferentiator(f64),
    /// `1 + z_z z^-1`
    MovingSum(f64),
    /// `1 / (1 - z_p z^-1)`
    Accumulator(f64),
    /// `1 / (1 + z_p z^-1)`
    Oscillator(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Composition {
    Series,
    /// One sign per branch.
    Parallel(Vec<f64>),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BlockGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

/// Index form used by simulation and flattening.
struct Compiled {
    kinds: Vec<NodeKind>,
    /// Incoming `(source, sign)` per node, in edge order.
    inputs: Vec<Vec<(usize, f64)>>,
    input: usize,
    output: usize,
    /// Non-delay nodes in dependency order.
    order: Vec<usize>,
}

impl BlockGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn add_node(&mut self, id: impl Into<String>, kind: NodeKind) -> Result<&mut Self> {
        let id = id.into();
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(Error::InvalidGraph(format!("bad node id {id:?}")));
        }
        if self.nodes.iter().any(|n| n.id == id) {
            return Err(Error::InvalidGraph(format!("duplicate node {id}")));
        }
        if let NodeKind::Gain(k) = kind {
            if !k.is_finite() {
                return Err(Error::NonFinite("gain"));
            }
        }
        self.nodes.push(Node { id, kind });
        Ok(self)
    }

    pub fn connect(&mut self, from: &str, to: &str) -> Result<&mut Self> {
        self.connect_signed(from, to, 1.0)
    }

    pub fn connect_signed(&mut self, from: &str, to: &str, sign: f64) -> Result<&mut Self> {
        if sign != 1.0 && sign != -1.0 {
            return Err(Error::InvalidGraph(format!("edge sign must be +1 or -1, got {sign}")));
        }
        for id in [from, to] {
            if !self.nodes.iter().any(|n| n.id == id) {
                return Err(Error::InvalidGraph(format!("unknown node {id}")));
            }
        }
        self.edges.push(Edge {
            from: from.to_string(),
            to: to.to_string(),
            sign,
        });
        Ok(self)
    }

    /// Direct-form realization with one summing junction. Its simulation
    /// performs the same floating-point operations as [`crate::dt::simulate`].
    pub fn direct_form(de: &DifferenceEquation) -> Self {
        let mut g = Self::new();
        let add = |g: &mut Self, id: String, kind| {
            g.add_node(id, kind).expect("fresh id");
        };
        add(&mut g, "in".into(), NodeKind::Input);
        add(&mut g, "sum".into(), NodeKind::Sum);
        add(&mut g, "out".into(), NodeKind::Output);
        let mut prev = "in".to_string();
        for (j, &bj) in de.b().iter().enumerate() {
            if j > 0 {
                let d = format!("xd{j}");
                add(&mut g, d.clone(), NodeKind::Delay);
                g.connect(&prev, &d).expect("known");
                prev = d;
            }
            let k = format!("b{j}");
            add(&mut g, k.clone(), NodeKind::Gain(bj));
            g.connect(&prev, &k).expect("known");
            g.connect(&k, "sum").expect("known");
        }
        let mut prev = "sum".to_string();
        for (k, &ak) in de.a().iter().enumerate().skip(1) {
            let d = format!("yd{k}");
            add(&mut g, d.clone(), NodeKind::Delay);
            g.connect(&prev, &d).expect("known");
            prev = d.clone();
            let a = format!("a{k}");
            add(&mut g, a.clone(), NodeKind::Gain(ak));
            g.connect(&d, &a).expect("known");
            g.connect_signed(&a, "sum", -1.0).expect("known");
        }
        g.connect("sum", "out").expect("known");
        g
    }

    /// Checks the structural invariants: one input, one output, correct
    /// fan-in per node kind, output reachable from input, and no loop
    /// without a delay.
    pub fn validate(&self) -> Result<()> {
        self.compile().map(|_| ())
    }

    fn compile(&self) -> Result<Compiled> {
        let index: HashMap<&str, usize> = self.nodes.iter().enumerate().map(|(i, n)| (n.id.as_str(), i)).collect();
        let n = self.nodes.len();
        let kinds: Vec<NodeKind> = self.nodes.iter().map(|n| n.kind.clone()).collect();
        let find = |k: fn(&NodeKind) -> bool, name: &str| -> Result<usize> {
            let hits: Vec<usize> = (0..n).filter(|&i| k(&kinds[i])).collect();
            match hits.as_slice() {
                [i] => Ok(*i),
                _ => Err(Error::InvalidGraph(format!("need exactly one {name} node, found {}", hits.len()))),
            }
        };
        let input = find(|k| matches!(k, NodeKind::Input), "input")?;
        let output = find(|k| matches!(k, NodeKind::Output), "output")?;

        let mut inputs = vec![Vec::new(); n];
        let mut outputs = vec![Vec::new(); n];
        for e in &self.edges {
            let (&f, &t) = match (index.get(e.from.as_str()), index.get(e.to.as_str())) {
                (Some(f), Some(t)) => (f, t),
                _ => return Err(Error::InvalidGraph(format!("edge {} -> {} names an unknown node", e.from, e.to))),
            };
            if e.sign != 1.0 && !matches!(kinds[t], NodeKind::Sum) {
                return Err(Error::InvalidGraph(format!("negative edge into non-sum node {}", e.to)));
            }
            inputs[t].push((f, e.sign));
            outputs[f].push(t);
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let fan_in = inputs[i].len();
            let ok = match node.kind {
                NodeKind::Input => fan_in == 0,
                NodeKind::Sum => fan_in >= 1,
                _ => fan_in == 1,
            };
            if !ok {
                return Err(Error::InvalidGraph(format!("node {} has {fan_in} inputs", node.id)));
            }
        }
        if !outputs[output].is_empty() {
            return Err(Error::InvalidGraph("output node has outgoing edges".into()));
        }

        let mut seen = vec![false; n];
        let mut stack = vec![input];
        seen[input] = true;
        while let Some(u) = stack.pop() {
            for &v in &outputs[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        if !seen[output] {
            return Err(Error::InvalidGraph("output is not reachable from input".into()));
        }

        // Kahn's algorithm on the graph with delay outputs cut.
        let mut indeg: Vec<usize> = (0..n)
            .map(|v| inputs[v].iter().filter(|(u, _)| !matches!(kinds[*u], NodeKind::Delay)).count())
            .collect();
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).rev().collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = ready.pop() {
            order.push(u);
            if matches!(kinds[u], NodeKind::Delay) {
                continue;
            }
            for &v in &outputs[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.push(v);
                }
            }
        }
        if order.len() != n {
            return Err(Error::DelayFreeLoop);
        }
        order.retain(|&v| !matches!(kinds[v], NodeKind::Delay));
        Ok(Compiled {
            kinds,
            inputs,
            input,
            output,
            order,
        })
    }

    /// One of the four elementary architectures; the parameter must lie in
    /// `[0, 1]`.
    pub fn canonical(arch: Architecture) -> Result<Self> {
        let (param, feedback, sign) = match arch {
            Architecture::FirDifferentiator(p) => (p, false, -1.0),
            Architecture::MovingSum(p) => (p, false, 1.0),
            Architecture::Accumulator(p) => (p, true, 1.0),
            Architecture::Oscillator(p) => (p, true, -1.0),
        };
        if !(0.0..=1.0).contains(&param) {
            return Err(Error::BadParameter(param));
        }
        let mut g = Self::new();
        g.add_node("in", NodeKind::Input)?
            .add_node("sum", NodeKind::Sum)?
            .add_node("delay", NodeKind::Delay)?
            .add_node("gain", NodeKind::Gain(param))?
            .add_node("out", NodeKind::Output)?;
        g.connect("in", "sum")?;
        g.connect(if feedback { "sum" } else { "in" }, "delay")?;
        g.connect("delay", "gain")?;
        g.connect_signed("gain", "sum", sign)?;
        g.connect("sum", "out")?;
        Ok(g)
    }

    /// Netlist text, one `node` or `edge` statement per line.
    pub fn to_netlist(&self) -> String {
        let mut s = String::new();
        for n in &self.nodes {
            let _ = match n.kind {
                NodeKind::Input => writeln!(s, "node {} input", n.id),
                NodeKind::Output => writeln!(s, "node {} output", n.id),
                NodeKind::Delay => writeln!(s, "node {} delay", n.id),
                NodeKind::Sum => writeln!(s, "node {} sum", n.id),
                NodeKind::Gain(k) => writeln!(s, "node {} gain {:?}", n.id, k),
            };
        }
        for e in &self.edges {
            let sign = if e.sign < 0.0 { "-" } else { "+" };
            let _ = writeln!(s, "edge {} {} {}", e.from, e.to, sign);
        }
        s
    }

    /// Parses the netlist format. Blank lines and `#` comments are ignored.
    pub fn from_netlist(text: &str) -> Result<Self> {
        let mut g = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| Error::Netlist { line, msg };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tok: Vec<&str> = content.split_whitespace().collect();
            let wrap = |e: Error| match e {
                Error::InvalidGraph(m) => err(m),
                Error::NonFinite(m) => err(format!("non-finite {m}")),
                other => other,
            };
            match tok.as_slice() {
                ["node", id, kind, rest @ ..] => {
                    let kind = match (*kind, rest) {
                        ("input", []) => NodeKind::Input,
                        ("output", []) => NodeKind::Output,
                        ("delay", []) => NodeKind::Delay,
                        ("sum", []) => NodeKind::Sum,
                        ("gain", [k]) => NodeKind::Gain(k.parse().map_err(|_| err(format!("bad gain {k:?}")))?),
                        ("gain", _) => return Err(err("gain needs exactly one factor".into())),
                        (k, []) => return Err(err(format!("unknown node kind {k:?}"))),
                        (k, _) => return Err(err(format!("node kind {k:?} takes no parameter"))),
                    };
                    g.add_node(*id, kind).map_err(wrap)?;
                }
                ["edge", from, to, rest @ ..] => {
                    let sign = match rest {
                        [] | ["+"] => 1.0,
                        ["-"] => -1.0,
                        _ => return Err(err(format!("bad edge sign {:?}", rest.join(" ")))),
                    };
                    g.connect_signed(from, to, sign).map_err(wrap)?;
                }
                _ => return Err(err(format!("cannot parse {content:?}"))),
            }
        }
        Ok(g)
    }

    /// Copies the nodes and edges of `other` under `prefix`, turning its
    /// input and output into unit gains. Returns their new ids.
    fn embed(&mut self, other: &Self, prefix: &str) -> (String, String) {
        let (mut i, mut o) = (String::new(), String::new());
        for n in &other.nodes {
            let id = format!("{prefix}{}", n.id);
            let kind = match n.kind {
                NodeKind::Input => {
                    i = id.clone();
                    NodeKind::Gain(1.0)
                }
                NodeKind::Output => {
                    o = id.clone();
                    NodeKind::Gain(1.0)
                }
                ref k => k.clone(),
            };
            self.nodes.push(Node { id, kind });
        }
        for e in &other.edges {
            self.edges.push(Edge {
                from: format!("{prefix}{}", e.from),
                to: format!("{prefix}{}", e.to),
                sign: e.sign,
            });
        }
        (i, o)
    }
}

impl fmt::Display for BlockGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_netlist())
    }
}

/// Series or signed-parallel combination. A single graph in series is
/// returned unchanged.
pub fn compose(graphs: &[BlockGraph], mode: &Composition) -> Result<BlockGraph> {
    if graphs.is_empty() {
        return Err(Error::Empty("graph list"));
    }
    for g in graphs {
        g.validate()?;
    }
    if graphs.len() == 1 && *mode == Composition::Series {
        return Ok(graphs[0].clone());
    }
    let mut out = BlockGraph::new();
    out.add_node("in", NodeKind::Input)?;
    let ends: Vec<(String, String)> = graphs
        .iter()
        .enumerate()
        .map(|(i, g)| out.embed(g, &format!("g{i}.")))
        .collect();
    out.add_node("out", NodeKind::Output)?;
    match mode {
        Composition::Series => {
            out.connect("in", &ends[0].0)?;
            for w in ends.windows(2) {
                out.connect(&w[0].1, &w[1].0)?;
            }
            out.connect(&ends[ends.len() - 1].1, "out")?;
        }
        Composition::Parallel(signs) => {
            if signs.len() != graphs.len() {
                return Err(Error::InvalidGraph(format!(
                    "{} signs for {} branches",
                    signs.len(),
                    graphs.len()
                )));
            }
            out.add_node("sum", NodeKind::Sum)?;
            for ((i, o), &s) in ends.iter().zip(signs) {
                out.connect("in", i)?;
                out.connect_signed(o, "sum", s)?;
            }
            out.connect("sum", "out")?;
        }
    }
    Ok(out)
}

/// Runs the graph sample by sample from zero delay state. Input samples
/// past the end read as zero.
pub fn simulate_graph(g: &BlockGraph, input: &Sequence, n: usize) -> Result<Sequence> {
    let c = g.compile()?;
    let delays: Vec<usize> = (0..c.kinds.len()).filter(|&v| matches!(c.kinds[v], NodeKind::Delay)).collect();
    let mut value = vec![0.0; c.kinds.len()];
    let mut y = Vec::with_capacity(n);
    for step in 0..n {
        for &v in &c.order {
            value[v] = match c.kinds[v] {
                NodeKind::Input => input.get(step as isize),
                NodeKind::Gain(k) => k * value[c.inputs[v][0].0],
                NodeKind::Output => value[c.inputs[v][0].0],
                NodeKind::Sum => {
                    let mut acc = 0.0;
                    for &(u, s) in &c.inputs[v] {
                        acc += s * value[u];
                    }
                    acc
                }
                NodeKind::Delay => unreachable!("delays are state"),
            };
        }
        y.push(value[c.output]);
        let next: Vec<f64> = delays.iter().map(|&d| value[c.inputs[d][0].0]).collect();
        for (&d, v) in delays.iter().zip(next) {
            value[d] = v;
        }
    }
    Ok(Sequence::new(y, input.sample_rate())?.with_origin(input.origin()))
}

/// Transmittance `num / den` in powers of the unit delay.
#[derive(Clone, Debug)]
struct Ratio {
    num: Polynomial,
    den: Polynomial,
}

impl Ratio {
    fn poly(p: Polynomial) -> Self {
        Self { num: p, den: Polynomial::one() }
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }

    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            Self {
                num: &self.num + &o.num,
                den: self.den.clone(),
            }
        } else {
            Self {
                num: &(&self.num * &o.den) + &(&o.num * &self.den),
                den: &self.den * &o.den,
            }
        }
    }

    /// `self / (1 - lp)`.
    fn close_loop(&self, lp: &Self) -> Self {
        Self {
            num: &self.num * &lp.den,
            den: &self.den * &(&lp.den - &lp.num),
        }
    }
}

/// Reduces the graph to a single recurrence by node elimination.
pub fn flatten(g: &BlockGraph) -> Result<DifferenceEquation> {
    let c = g.compile()?;
    let n = c.kinds.len();
    // Edge u -> v carries the sign times the transmittance of v.
    let mut edges: Vec<BTreeMap<usize, Ratio>> = vec![BTreeMap::new(); n];
    for v in 0..n {
        let node_gain = match c.kinds[v] {
            NodeKind::Delay => Polynomial::new([0.0, 1.0]),
            NodeKind::Gain(k) => Polynomial::constant(k),
            _ => Polynomial::one(),
        };
        for &(u, s) in &c.inputs[v] {
            let w = Ratio::poly(node_gain.scale(s));
            let slot = edges[u].entry(v);
            match slot {
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let sum = o.get().add(&w);
                    o.insert(sum);
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(w);
                }
            }
        }
    }
    // Pass-through nodes first, junctions last.
    let mut victims: Vec<usize> = (0..n).filter(|&v| v != c.input && v != c.output).collect();
    victims.sort_by_key(|&v| matches!(c.kinds[v], NodeKind::Sum));
    for v in victims {
        let lp = edges[v].remove(&v);
        let outs: Vec<(usize, Ratio)> = std::mem::take(&mut edges[v]).into_iter().collect();
        for u in 0..n {
            let Some(a) = edges[u].remove(&v) else { continue };
            let a = match &lp {
                Some(l) => a.close_loop(l),
                None => a,
            };
            for (x, b) in &outs {
                let w = a.mul(b);
                let merged = match edges[u].remove(x) {
                    Some(old) => old.add(&w),
                    None => w,
                };
                edges[u].insert(*x, merged);
            }
        }
    }
    let total = edges[c.input]
        .remove(&c.output)
        .unwrap_or_else(|| Ratio::poly(Polynomial::zero()));
    if total.den.coeffs()[0] == 0.0 {
        return Err(Error::UnsupportedTopology(format!(
            "reduced denominator {} has no constant term",
            total.den
        )));
    }
    DifferenceEquation::new(total.num.coeffs().to_vec(), total.den.coeffs().to_vec())
}
