//! Certificates for the Artin relations among the generator zig-zags.
//!
//! A certificate is a finite diagram in `Q_2` (objects, quasibijection edges
//! and commuting triangles) together with rewrite derivations that take both
//! sides of a relation, written as paths in the diagram, to one common path.
//! Every step is replayed and every triangle is compared as a set map.
//!
//! The generator `σ̄_i` is the path `S <-id- T -s_i-> S` with `T` the all-0
//! and `S` the all-1 ordinal. Two adjacent paths `x(a) x(b)` merge into
//! `x(a then b)` through a hub object `X` that receives `a` and emits `b`.

use std::collections::HashMap;

use serde::Serialize;

use super::section::q_section;
use super::word::{braid_equal, BraidWord};
use super::BraidError;
use crate::maps::{make_map, OrdinalMap};
use crate::ordinal::{LevelDomain, NOrdinal};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub map: OrdinalMap,
}

/// `composite = second ∘ first`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub first: usize,
    pub second: usize,
    pub composite: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Rewrite {
    /// Replace the composite edge at `at` by the two edges of `cell`.
    Expand { at: usize, cell: usize },
    /// Replace the two edges at `at`, `at + 1` by the composite of `cell`.
    Contract { at: usize, cell: usize },
    /// Remove an edge followed by its own reverse.
    Cancel { at: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub start: Vec<Step>,
    pub rewrites: Vec<Rewrite>,
    pub end: Vec<Step>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Diagram {
    pub objects: Vec<NOrdinal>,
    pub edges: Vec<Edge>,
    pub cells: Vec<Cell>,
}

impl Diagram {
    fn object(&mut self, o: NOrdinal) -> usize {
        match self.objects.iter().position(|x| *x == o) {
            Some(i) => i,
            None => {
                self.objects.push(o);
                self.objects.len() - 1
            }
        }
    }

    fn edge(&mut self, src: usize, dst: usize, table: Vec<usize>) -> Result<usize, BraidError> {
        if let Some(i) = self.edges.iter().position(|e| e.src == src && e.dst == dst && e.map.table() == table.as_slice()) {
            return Ok(i);
        }
        let map = make_map(&self.objects[src], &self.objects[dst], table)
            .map_err(|e| BraidError::DiagramBroken(format!("edge {src}->{dst}: {e}")))?;
        self.edges.push(Edge { src, dst, map });
        Ok(self.edges.len() - 1)
    }

    fn cell(&mut self, first: usize, second: usize, composite: usize) -> usize {
        let c = Cell { first, second, composite };
        match self.cells.iter().position(|x| *x == c) {
            Some(i) => i,
            None => {
                self.cells.push(c);
                self.cells.len() - 1
            }
        }
    }

    /// Every edge is a quasibijection and every cell commutes.
    pub fn verify(&self) -> Result<(), BraidError> {
        for (i, e) in self.edges.iter().enumerate() {
            if e.map.source() != &self.objects[e.src] || e.map.target() != &self.objects[e.dst] || !e.map.is_quasibijection() {
                return Err(BraidError::DiagramBroken(format!("edge {i} is not a quasibijection between its endpoints")));
            }
        }
        for (i, c) in self.cells.iter().enumerate() {
            let (f, g, h) = (&self.edges[c.first], &self.edges[c.second], &self.edges[c.composite]);
            let table: Vec<usize> = f.map.table().iter().map(|&x| g.map.apply(x)).collect();
            if f.dst != g.src || f.src != h.src || g.dst != h.dst || table != h.map.table() {
                return Err(BraidError::DiagramBroken(format!("cell {i}: composite of edges {} and {} is not edge {}", c.first, c.second, c.composite)));
            }
        }
        Ok(())
    }

    fn step_ends(&self, s: Step) -> (usize, usize) {
        let e = &self.edges[s.edge];
        if s.forward {
            (e.src, e.dst)
        } else {
            (e.dst, e.src)
        }
    }

    pub fn check_path(&self, path: &[Step]) -> Result<(), BraidError> {
        for w in path.windows(2) {
            if self.step_ends(w[0]).1 != self.step_ends(w[1]).0 {
                return Err(BraidError::DiagramBroken(format!("path breaks between edges {} and {}", w[0].edge, w[1].edge)));
            }
        }
        Ok(())
    }

    /// Apply one rewrite.
    pub fn rewrite(&self, path: &[Step], r: Rewrite) -> Result<Vec<Step>, BraidError> {
        let bad = |why: &str| Err(BraidError::DiagramBroken(format!("{r:?}: {why}")));
        let mut out = path.to_vec();
        match r {
            Rewrite::Expand { at, cell } => {
                let c = self.cells[cell];
                let Some(&s) = path.get(at) else { return bad("position out of range") };
                if s.edge != c.composite {
                    return bad("step is not the composite edge");
                }
                let pair = if s.forward {
                    [Step { edge: c.first, forward: true }, Step { edge: c.second, forward: true }]
                } else {
                    [Step { edge: c.second, forward: false }, Step { edge: c.first, forward: false }]
                };
                out.splice(at..at + 1, pair);
            }
            Rewrite::Contract { at, cell } => {
                let c = self.cells[cell];
                let (Some(&a), Some(&b)) = (path.get(at), path.get(at + 1)) else { return bad("position out of range") };
                let forward = if a.forward && b.forward && a.edge == c.first && b.edge == c.second {
                    true
                } else if !a.forward && !b.forward && a.edge == c.second && b.edge == c.first {
                    false
                } else {
                    return bad("steps do not match the cell");
                };
                out.splice(at..at + 2, [Step { edge: c.composite, forward }]);
            }
            Rewrite::Cancel { at } => {
                let (Some(&a), Some(&b)) = (path.get(at), path.get(at + 1)) else { return bad("position out of range") };
                if a.edge != b.edge || a.forward == b.forward {
                    return bad("steps are not mutually inverse");
                }
                out.drain(at..at + 2);
            }
        }
        self.check_path(&out)?;
        Ok(out)
    }

    pub fn replay(&self, d: &Derivation) -> Result<(), BraidError> {
        self.check_path(&d.start)?;
        let mut cur = d.start.clone();
        for &r in &d.rewrites {
            cur = self.rewrite(&cur, r)?;
        }
        if cur != d.end {
            return Err(BraidError::DiagramBroken("derivation does not reach its stated end".into()));
        }
        Ok(())
    }

    /// Braid of a path, reading each edge through `q`.
    pub fn path_braid(&self, path: &[Step], strands: usize) -> Result<BraidWord, BraidError> {
        let mut b = BraidWord::empty(strands);
        for s in path {
            let q = q_section(&self.edges[s.edge].map.permutation().expect("quasibijection"));
            b = b.multiply(&if s.forward { q } else { q.invert() })?;
        }
        Ok(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    FarCommutation,
    YangBaxter,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArtinCertificate {
    pub relation: Relation,
    pub strands: usize,
    pub i: usize,
    pub j: usize,
    pub diagram: Diagram,
    pub left: Derivation,
    pub right: Derivation,
}

impl ArtinCertificate {
    /// Re-check everything the certificate claims.
    pub fn verify(&self) -> Result<(), BraidError> {
        self.diagram.verify()?;
        self.diagram.replay(&self.left)?;
        self.diagram.replay(&self.right)?;
        if self.left.end != self.right.end {
            return Err(BraidError::DiagramBroken("the two sides end on different paths".into()));
        }
        let k = self.strands;
        let lb = self.diagram.path_braid(&self.left.start, k)?;
        let rb = self.diagram.path_braid(&self.right.start, k)?;
        let (gi, gj) = (self.i as i32, self.j as i32);
        let (lw, rw) = match self.relation {
            Relation::FarCommutation => (vec![gi, gj], vec![gj, gi]),
            Relation::YangBaxter => (vec![gi, gj, gi], vec![gj, gi, gj]),
        };
        if lb != BraidWord::new(k, lw)? || rb != BraidWord::new(k, rw)? || !braid_equal(&lb, &rb)? {
            return Err(BraidError::DiagramBroken("paths do not read as the relation words".into()));
        }
        Ok(())
    }
}

struct Builder {
    d: Diagram,
    t: usize,
    s: usize,
    k: usize,
    /// T -> S edge for each permutation table.
    direct: HashMap<Vec<usize>, usize>,
}

impl Builder {
    fn new(k: usize) -> Self {
        let dom = LevelDomain::Finite(2);
        let mut d = Diagram::default();
        let t = d.object(NOrdinal::constant(dom, k, 0).expect("levels"));
        let s = d.object(NOrdinal::constant(dom, k, 1).expect("levels"));
        Self { d, t, s, k, direct: HashMap::new() }
    }

    fn direct(&mut self, p: &Permutation) -> Result<usize, BraidError> {
        if let Some(&e) = self.direct.get(p.images()) {
            return Ok(e);
        }
        let e = self.d.edge(self.t, self.s, p.images().to_vec())?;
        self.direct.insert(p.images().to_vec(), e);
        Ok(e)
    }

    /// Path `S <-id- T -p-> S`.
    fn generator_path(&mut self, p: &Permutation) -> Result<Vec<Step>, BraidError> {
        let id = self.direct(&Permutation::identity(self.k))?;
        let e = self.direct(p)?;
        Ok(vec![Step { edge: id, forward: false }, Step { edge: e, forward: true }])
    }

    /// Hub receiving `a` and emitting `b`: gaps spanned by an inversion of
    /// `a` sit at level 1, all others at level 0.
    fn hub(&mut self, a: &Permutation, b: &Permutation) -> Result<usize, BraidError> {
        let k = self.k;
        let mut levels = vec![0; k.saturating_sub(1)];
        for (x, y) in a.inversions() {
            let (lo, hi) = (a.apply(y), a.apply(x));
            levels[lo..hi].iter_mut().for_each(|l| *l = 1);
        }
        for (x, y) in b.inversions() {
            if levels[x..y].iter().all(|&l| l == 1) {
                return Err(BraidError::DiagramBroken(format!("no hub merges {:?} with {:?}", a.images(), b.images())));
            }
        }
        let o = NOrdinal::new(LevelDomain::Finite(2), levels).expect("levels");
        Ok(self.d.object(o))
    }

    /// Rewrite `x(a) x(b)` at position `p` of `path` into `x(a then b)`.
    fn merge(
        &mut self,
        path: &mut Vec<Step>,
        rewrites: &mut Vec<Rewrite>,
        p: usize,
        a: &Permutation,
        b: &Permutation,
    ) -> Result<Permutation, BraidError> {
        let ab = a.then(b);
        let id = Permutation::identity(self.k);
        let x = self.hub(a, b)?;
        let tx_id = self.d.edge(self.t, x, id.images().to_vec())?;
        let tx_a = self.d.edge(self.t, x, a.images().to_vec())?;
        let xs_id = self.d.edge(x, self.s, id.images().to_vec())?;
        let xs_b = self.d.edge(x, self.s, b.images().to_vec())?;
        let (g_id, g_a, g_b, g_ab) = (self.direct(&id)?, self.direct(a)?, self.direct(b)?, self.direct(&ab)?);
        let c1 = self.d.cell(tx_id, xs_id, g_id);
        let c2 = self.d.cell(tx_a, xs_id, g_a);
        let c3 = self.d.cell(tx_id, xs_b, g_b);
        let c4 = self.d.cell(tx_a, xs_b, g_ab);
        let steps = [
            Rewrite::Expand { at: p + 3, cell: c3 },
            Rewrite::Expand { at: p + 2, cell: c1 },
            Rewrite::Cancel { at: p + 3 },
            Rewrite::Expand { at: p + 1, cell: c2 },
            Rewrite::Cancel { at: p + 2 },
            Rewrite::Contract { at: p + 1, cell: c4 },
        ];
        for r in steps {
            *path = self.d.rewrite(path, r)?;
            rewrites.push(r);
        }
        Ok(ab)
    }

    /// Derive a product of generators down to a single `x(w)`, merging from the right.
    fn derive(&mut self, gens: &[usize]) -> Result<Derivation, BraidError> {
        let perms: Vec<Permutation> = gens.iter().map(|&g| Permutation::transposition(self.k, g - 1)).collect();
        let mut start = Vec::new();
        for p in &perms {
            start.extend(self.generator_path(p)?);
        }
        let mut path = start.clone();
        let mut rewrites = Vec::new();
        let mut acc = perms.last().expect("nonempty").clone();
        for idx in (0..perms.len() - 1).rev() {
            acc = self.merge(&mut path, &mut rewrites, 2 * idx, &perms[idx], &acc)?;
        }
        Ok(Derivation { start, rewrites, end: path })
    }
}

/// Certificate for `σ̄_i σ̄_j = σ̄_j σ̄_i` (`|i - j| >= 2`) or
/// `σ̄_i σ̄_j σ̄_i = σ̄_j σ̄_i σ̄_j` (`|i - j| = 1`) on `k` strands.
pub fn artin_diagram_check(k: usize, i: usize, j: usize) -> Result<ArtinCertificate, BraidError> {
    if i == 0 || j == 0 || i >= k || j >= k || i == j {
        return Err(BraidError::Precondition(format!("generators ({i}, {j}) invalid on {k} strands")));
    }
    let relation = if i.abs_diff(j) == 1 { Relation::YangBaxter } else { Relation::FarCommutation };
    let mut b = Builder::new(k);
    let (left, right) = match relation {
        Relation::FarCommutation => (b.derive(&[i, j])?, b.derive(&[j, i])?),
        Relation::YangBaxter => (b.derive(&[i, j, i])?, b.derive(&[j, i, j])?),
    };
    let cert = ArtinCertificate { relation, strands: k, i, j, diagram: b.d, left, right };
    cert.verify()?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(artin_diagram_check(4, 1, 3).unwrap().relation, Relation::FarCommutation);
        assert_eq!(artin_diagram_check(3, 1, 2).unwrap().relation, Relation::YangBaxter);
        assert!(matches!(artin_diagram_check(2, 1, 1), Err(BraidError::Precondition(_))));
    }

    #[test]
    fn all_small() {
        for k in 2..=6 {
            for i in 1..k {
                for j in 1..k {
                    if i != j {
                        artin_diagram_check(k, i, j).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn tampered_certificate_fails() {
        let mut c = artin_diagram_check(3, 1, 2).unwrap();
        c.left.rewrites.pop();
        assert!(c.verify().is_err());
        let mut c = artin_diagram_check(4, 1, 3).unwrap();
        let cell = c.diagram.cells[0];
        c.diagram.cells[0] = Cell { first: cell.first, second: cell.second, composite: cell.first };
        assert!(c.verify().is_err());
    }
}
