//! Seeded generators for test and benchmark documents.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{
    to_layout_tree, FragId, LayoutTree, LayoutTreeBuilder, Metrics, NodeId, SyntaxNode, SyntaxTree,
};

pub type SynthRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SynthRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Base seed from `ROCKS_SEED`, or `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("ROCKS_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

#[derive(Debug, Clone)]
pub struct TreeParams {
    pub max_fragments: usize,
    /// Maximum nesting of wraps.
    pub max_depth: usize,
    pub spacers: bool,
    pub join_v: bool,
    /// Pin ids to draw from; empty for no pins.
    pub pids: Vec<String>,
    pub max_padding: u32,
    pub line_height: f64,
    /// One leaf in five gets a random height in `4..=max_height`.
    pub max_height: u32,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_fragments: 50,
            max_depth: 6,
            spacers: true,
            join_v: true,
            pids: Vec::new(),
            max_padding: 4,
            line_height: 16.0,
            max_height: 24,
        }
    }
}

struct Gen<'a, R> {
    rng: &'a mut R,
    b: LayoutTreeBuilder,
    p: &'a TreeParams,
    wraps: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn leaf(&mut self) -> NodeId {
        let r: f64 = self.rng.gen();
        if self.p.spacers && r < 0.12 {
            let w = 8.0 * self.rng.gen_range(0..4) as f64;
            return self.b.spacer(w);
        }
        let w = self.rng.gen_range(1..=40) as f64;
        let h = if self.rng.gen_bool(0.8) {
            self.p.line_height
        } else {
            self.rng.gen_range(4..=self.p.max_height.max(4)) as f64
        };
        if !self.p.pids.is_empty() && self.rng.gen_bool(0.25) {
            let pid = self.p.pids.choose(self.rng).expect("non-empty").clone();
            return self.b.pin_sized(pid, w, h);
        }
        self.b.atom(w, h)
    }

    fn padding(&mut self) -> f64 {
        let p = self.rng.gen_range(0..=self.p.max_padding) as f64;
        if self.rng.gen_bool(0.15) {
            p + 0.5
        } else {
            p
        }
    }

    fn node(&mut self, budget: usize, depth: usize) -> NodeId {
        if budget <= 1 {
            if depth < self.p.max_depth && self.rng.gen_bool(0.3) {
                return self.wrap(1, depth);
            }
            return self.leaf();
        }
        let r: f64 = self.rng.gen();
        if depth < self.p.max_depth && r < 0.3 {
            return self.wrap(budget, depth);
        }
        let left = self.rng.gen_range(1..budget);
        let a = self.node(left, depth);
        let b = self.node(budget - left, depth);
        if self.p.join_v && self.rng.gen_bool(0.35) {
            self.b.join_v(a, b)
        } else {
            self.b.join_h(a, b)
        }
    }

    fn wrap(&mut self, budget: usize, depth: usize) -> NodeId {
        let c = self.node(budget, depth + 1);
        self.wraps += 1;
        let p = self.padding();
        self.b.wrap(format!("w{}", self.wraps), c, p)
    }
}

/// A random layout tree with at most `max_fragments` leaves.
pub fn random_tree<R: Rng>(rng: &mut R, p: &TreeParams) -> LayoutTree {
    let n = rng.gen_range(1..=p.max_fragments.max(1));
    let mut g = Gen {
        rng,
        b: LayoutTreeBuilder::new(),
        p,
        wraps: 0,
    };
    let root = g.node(n, 0);
    g.b.build(root).expect("generator builds valid trees")
}

const WORDS: &[&str] = &[
    "x", "y", "i", "n", "acc", "len", "value", "node", "items", "result", "f", "map", "filter",
    "0", "1", "42", "true", "null", "self", "key",
];
const OPS: &[&str] = &["+", "-", "*", "<", "==", "&&", "||", "=>"];

/// A code-shaped syntax tree: nested blocks of indented statements whose
/// expressions nest a few levels deep. Produces roughly `fragments` atoms.
pub fn code_like<R: Rng>(rng: &mut R, fragments: usize, metrics: &Metrics) -> SyntaxTree {
    let mut c = CodeGen {
        rng,
        m: *metrics,
        next_id: 0,
        next_frag: 0,
    };
    let mut body = Vec::new();
    while (c.next_frag as usize) < fragments {
        if !body.is_empty() {
            body.push(SyntaxTree::Newline);
        }
        body.push(c.block(0));
    }
    SyntaxTree::node("root", 2.0, body)
}

struct CodeGen<'a, R> {
    rng: &'a mut R,
    m: Metrics,
    next_id: usize,
    next_frag: u32,
}

impl<R: Rng> CodeGen<'_, R> {
    fn id(&mut self, kind: &str) -> String {
        self.next_id += 1;
        format!("{kind}{}", self.next_id)
    }

    fn atom(&mut self, s: &str) -> SyntaxTree {
        let f = crate::model::measure_fragment(FragId(self.next_frag), s, &self.m)
            .expect("no newlines in generated text");
        self.next_frag += 1;
        SyntaxTree::Atom(f)
    }

    fn indent(&mut self, level: usize) -> Option<SyntaxTree> {
        (level > 0).then(|| self.atom(&" ".repeat(2 * level)))
    }

    fn expr(&mut self, depth: usize) -> SyntaxTree {
        if depth >= 4 || self.rng.gen_bool(0.35) {
            let w = *WORDS.choose(self.rng).expect("non-empty");
            return self.atom(&format!("{w} "));
        }
        let id = self.id("e");
        let mut kids = vec![self.expr(depth + 1)];
        for _ in 0..self.rng.gen_range(1..=2) {
            let op = *OPS.choose(self.rng).expect("non-empty");
            kids.push(self.atom(&format!("{op} ")));
            kids.push(self.expr(depth + 1));
        }
        if self.rng.gen_bool(0.3) {
            kids.insert(0, self.atom("("));
            kids.push(self.atom(") "));
        }
        SyntaxTree::node(id, 1.0, kids)
    }

    fn statement(&mut self, level: usize) -> SyntaxTree {
        let id = self.id("s");
        let mut kids: Vec<SyntaxTree> = self.indent(level).into_iter().collect();
        let kw = ["let ", "return ", "const ", ""][self.rng.gen_range(0..4)];
        if !kw.is_empty() {
            kids.push(self.atom(kw));
        }
        kids.push(self.expr(0));
        kids.push(self.atom(";"));
        SyntaxTree::node(id, 1.0, kids)
    }

    fn block(&mut self, level: usize) -> SyntaxTree {
        let id = self.id("b");
        let mut kids: Vec<SyntaxTree> = self.indent(level).into_iter().collect();
        kids.push(self.atom("if "));
        kids.push(self.expr(1));
        kids.push(self.atom("{"));
        let n = self.rng.gen_range(1..=4);
        for _ in 0..n {
            kids.push(SyntaxTree::Newline);
            if level < 3 && self.rng.gen_bool(0.25) {
                kids.push(self.block(level + 1));
            } else {
                kids.push(self.statement(level + 1));
            }
        }
        kids.push(SyntaxTree::Newline);
        if let Some(i) = self.indent(level) {
            kids.push(i);
        }
        kids.push(self.atom("}"));
        SyntaxTree::Node(SyntaxNode {
            id,
            padding: 2.0,
            style: Default::default(),
            children: kids,
        })
    }
}

/// Layout tree of a [`code_like`] document.
pub fn code_like_tree<R: Rng>(rng: &mut R, fragments: usize, metrics: &Metrics) -> LayoutTree {
    to_layout_tree(&code_like(rng, fragments, metrics)).expect("generated trees are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_trees_respect_bounds() {
        let mut r = rng(7);
        let p = TreeParams::default();
        for _ in 0..50 {
            let t = random_tree(&mut r, &p);
            assert!(t.fragments().len() <= 50);
            assert!(t.wrap_depths().iter().all(|&d| d < 6));
        }
    }

    #[test]
    fn same_seed_same_tree() {
        let p = TreeParams::default();
        assert_eq!(random_tree(&mut rng(3), &p), random_tree(&mut rng(3), &p));
    }

    #[test]
    fn code_like_reaches_size() {
        let t = code_like_tree(&mut rng(1), 2000, &Metrics::default());
        assert!(t.fragments().len() >= 2000);
        assert!(t.fragments().len() < 2400);
    }
}
