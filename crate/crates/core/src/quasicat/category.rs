//! Quasibijection categories `Q_n(k)` and Milgram posets `J_n(k)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use super::QuasiCatError;
use crate::maps::{enumerate_maps, make_map, MapFilter, OrdinalMap};
use crate::ordinal::{count_ordinals, enumerate_ordinals, NOrdinal};
use crate::perm::Permutation;

/// Default cap on objects, elements or morphisms in one construction.
pub const DEFAULT_SIZE_LIMIT: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Morphism {
    pub src: usize,
    pub dst: usize,
    pub map: OrdinalMap,
}

/// A small category given by explicit objects, morphisms and composition.
#[derive(Debug, Clone, Serialize)]
pub struct CategoryGraph {
    pub objects: Vec<NOrdinal>,
    pub morphisms: Vec<Morphism>,
    #[serde(skip)]
    hom: BTreeMap<(usize, usize), Vec<usize>>,
    #[serde(skip)]
    identities: Vec<usize>,
    #[serde(skip)]
    composition: HashMap<(usize, usize), usize>,
}

impl CategoryGraph {
    /// Assemble from objects and morphisms; composition is computed on tables
    /// and every composite must already be present.
    pub fn from_parts(objects: Vec<NOrdinal>, morphisms: Vec<Morphism>) -> Result<Self, QuasiCatError> {
        let mut hom: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let mut by_table: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
        for (id, m) in morphisms.iter().enumerate() {
            hom.entry((m.src, m.dst)).or_default().push(id);
            by_table.insert((m.src, m.dst, m.map.table().to_vec()), id);
        }
        let mut identities = Vec::with_capacity(objects.len());
        for (x, obj) in objects.iter().enumerate() {
            let key = (x, x, (0..obj.arity()).collect::<Vec<_>>());
            let id = *by_table
                .get(&key)
                .ok_or_else(|| QuasiCatError::InvariantBroken(format!("identity missing on object {x}")))?;
            identities.push(id);
        }
        let mut composition = HashMap::new();
        for (fi, f) in morphisms.iter().enumerate() {
            for (&(_, c), gs) in hom.range((f.dst, 0)..(f.dst + 1, 0)) {
                for &gi in gs {
                    let g = &morphisms[gi];
                    let table: Vec<usize> = f.map.table().iter().map(|&i| g.map.apply(i)).collect();
                    let h = *by_table.get(&(f.src, c, table)).ok_or_else(|| {
                        QuasiCatError::InvariantBroken(format!("composite of morphisms {fi} and {gi} missing"))
                    })?;
                    composition.insert((fi, gi), h);
                }
            }
        }
        Ok(Self { objects, morphisms, hom, identities, composition })
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        self.hom.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        let m = &self.morphisms[f];
        m.src == m.dst && self.identities[m.src] == f
    }

    /// `g ∘ f` for `f: a -> b`, `g: b -> c`.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.composition.get(&(f, g)).copied()
    }

    /// Non-identity morphisms leaving each object.
    pub fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.objects.len()];
        for (id, m) in self.morphisms.iter().enumerate() {
            if !self.is_identity(id) {
                out[m.src].push(id);
            }
        }
        out
    }
}

/// The category of arity-`k` n-ordinals and quasibijections.
pub fn build_q(n: u32, k: usize, limit: u64) -> Result<CategoryGraph, QuasiCatError> {
    let objects = enumerate_ordinals(n, k, limit)?;
    let mut morphisms = Vec::new();
    for (a, t) in objects.iter().enumerate() {
        for (b, s) in objects.iter().enumerate() {
            for map in enumerate_maps(t, s, MapFilter::Quasibijections, limit)? {
                morphisms.push(Morphism { src: a, dst: b, map });
                if morphisms.len() as u64 > limit {
                    return Err(QuasiCatError::ResourceLimit { what: "morphisms", limit });
                }
            }
        }
    }
    CategoryGraph::from_parts(objects, morphisms)
}

/// Number of connected components of the underlying graph.
pub fn connected_components(c: &CategoryGraph) -> usize {
    let mut parent: Vec<usize> = (0..c.objects.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for m in &c.morphisms {
        let (a, b) = (find(&mut parent, m.src), find(&mut parent, m.dst));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    (0..c.objects.len()).filter(|&x| find(&mut parent, x) == x).count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrictnessCertificate {
    /// Length of the longest chain of non-identity morphisms ending at each object.
    pub ranks: Vec<usize>,
}

/// Certify that all endomorphisms are identities and non-identity morphisms
/// form an acyclic relation on objects.
pub fn assert_strict(c: &CategoryGraph) -> Result<StrictnessCertificate, QuasiCatError> {
    for x in 0..c.objects.len() {
        if let Some(&f) = c.hom(x, x).iter().find(|&&f| !c.is_identity(f)) {
            return Err(QuasiCatError::EndoFound { object: x, morphism: f });
        }
    }
    let out = c.outgoing();
    let mut indeg = vec![0usize; c.objects.len()];
    for fs in &out {
        for &f in fs {
            indeg[c.morphisms[f].dst] += 1;
        }
    }
    let mut ranks = vec![0usize; c.objects.len()];
    let mut queue: Vec<usize> = (0..c.objects.len()).filter(|&x| indeg[x] == 0).collect();
    let mut seen = 0;
    while let Some(x) = queue.pop() {
        seen += 1;
        for &f in &out[x] {
            let y = c.morphisms[f].dst;
            ranks[y] = ranks[y].max(ranks[x] + 1);
            indeg[y] -= 1;
            if indeg[y] == 0 {
                queue.push(y);
            }
        }
    }
    if seen != c.objects.len() {
        let x = (0..c.objects.len()).find(|&x| indeg[x] > 0).expect("cycle");
        return Err(QuasiCatError::EndoFound { object: x, morphism: out[x][0] });
    }
    Ok(StrictnessCertificate { ranks })
}

/// An n-ordinal structure on `{0, ..., k-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LabeledStructure {
    pub ordinal: NOrdinal,
    /// `labels[i]` is the label at position `i`.
    pub labels: Permutation,
}

impl LabeledStructure {
    /// Table of the label-preserving bijection to `other`.
    pub fn label_map_to(&self, other: &LabeledStructure) -> Vec<usize> {
        self.labels.then(&other.labels.inverse()).images().to_vec()
    }
}

/// All labeled structures with the strict order `x > y` when the
/// label-preserving bijection `x -> y` is a quasibijection.
#[derive(Debug, Clone, Serialize)]
pub struct MilgramPoset {
    pub n: u32,
    pub k: usize,
    pub elements: Vec<LabeledStructure>,
    /// `below[x]` lists every `y` with `x > y`, ascending.
    pub below: Vec<Vec<usize>>,
}

impl MilgramPoset {
    pub fn greater(&self, x: usize, y: usize) -> bool {
        self.below[x].binary_search(&y).is_ok()
    }

    pub fn index_of(&self, s: &LabeledStructure) -> Option<usize> {
        self.elements.binary_search(s).ok()
    }

    /// Pairs `x > y` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.elements.len() {
            for &y in &self.below[x] {
                if !self.below[x].iter().any(|&z| self.greater(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

pub fn build_j(n: u32, k: usize, limit: u64) -> Result<MilgramPoset, QuasiCatError> {
    let fact = (1..=k as u64).product::<u64>();
    let total = count_ordinals(n, k).saturating_mul(fact);
    if total > limit {
        return Err(QuasiCatError::ResourceLimit { what: "poset elements", limit });
    }
    let perms = Permutation::all(k);
    let mut elements = Vec::new();
    for ordinal in enumerate_ordinals(n, k, limit)? {
        for p in &perms {
            elements.push(LabeledStructure { ordinal: ordinal.clone(), labels: p.clone() });
        }
    }
    elements.sort();
    let mut below = vec![Vec::new(); elements.len()];
    for (x, ex) in elements.iter().enumerate() {
        for (y, ey) in elements.iter().enumerate() {
            if x != y && make_map(&ex.ordinal, &ey.ordinal, ex.label_map_to(ey)).is_ok() {
                below[x].push(y);
            }
        }
    }
    for x in 0..elements.len() {
        for &y in &below[x] {
            if below[y].binary_search(&x).is_ok() {
                return Err(QuasiCatError::AntisymmetryViolation(x, y));
            }
        }
    }
    Ok(MilgramPoset { n, k, elements, below })
}

/// Quotient of `J` by relabelling.
pub fn quotient_j(j: &MilgramPoset) -> Result<CategoryGraph, QuasiCatError> {
    let mut objects: Vec<NOrdinal> = j.elements.iter().map(|e| e.ordinal.clone()).collect();
    objects.dedup();
    let index: HashMap<&NOrdinal, usize> = objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let mut seen = std::collections::BTreeSet::new();
    for (x, ex) in j.elements.iter().enumerate() {
        let targets = std::iter::once(x).chain(j.below[x].iter().copied());
        for y in targets {
            let ey = &j.elements[y];
            seen.insert((index[&ex.ordinal], index[&ey.ordinal], ex.label_map_to(ey)));
        }
    }
    let mut morphisms = Vec::with_capacity(seen.len());
    for (src, dst, table) in seen {
        let map = make_map(&objects[src], &objects[dst], table)?;
        morphisms.push(Morphism { src, dst, map });
    }
    CategoryGraph::from_parts(objects, morphisms)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CategoryIso {
    pub object_map: Vec<usize>,
    pub morphism_map: Vec<usize>,
}

/// Find and verify an isomorphism matching objects and morphisms by content.
pub fn find_isomorphism(a: &CategoryGraph, b: &CategoryGraph) -> Result<CategoryIso, QuasiCatError> {
    let fail = |w: String| Err(QuasiCatError::IsoCheckFailed(w));
    if a.objects.len() != b.objects.len() || a.morphisms.len() != b.morphisms.len() {
        return fail(format!(
            "sizes differ: {}/{} objects, {}/{} morphisms",
            a.objects.len(),
            b.objects.len(),
            a.morphisms.len(),
            b.morphisms.len()
        ));
    }
    let obj_index: HashMap<&NOrdinal, usize> = b.objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let mut object_map = Vec::with_capacity(a.objects.len());
    for (x, o) in a.objects.iter().enumerate() {
        match obj_index.get(o) {
            Some(&y) => object_map.push(y),
            None => return fail(format!("object {x} ({o}) has no counterpart")),
        }
    }
    let mor_index: HashMap<(usize, usize, &[usize]), usize> =
        b.morphisms.iter().enumerate().map(|(i, m)| ((m.src, m.dst, m.map.table()), i)).collect();
    let mut morphism_map = Vec::with_capacity(a.morphisms.len());
    let mut hit = vec![false; b.morphisms.len()];
    for (f, m) in a.morphisms.iter().enumerate() {
        match mor_index.get(&(object_map[m.src], object_map[m.dst], m.map.table())) {
            Some(&g) if !hit[g] => {
                hit[g] = true;
                morphism_map.push(g);
            }
            _ => return fail(format!("morphism {f} ({}) has no counterpart", m.map)),
        }
    }
    for (&(f, g), &h) in &a.composition {
        if b.compose(morphism_map[f], morphism_map[g]) != Some(morphism_map[h]) {
            return fail(format!("composition of {f} and {g} not preserved"));
        }
    }
    Ok(CategoryIso { object_map, morphism_map })
}

fn levels_label(o: &NOrdinal) -> String {
    format!("{:?}", o.levels())
}

pub fn category_to_dot(c: &CategoryGraph) -> String {
    let mut s = String::from("digraph Q {\n");
    for (i, o) in c.objects.iter().enumerate() {
        let _ = writeln!(s, "  o{i} [label=\"{}\"];", levels_label(o));
    }
    for (id, m) in c.morphisms.iter().enumerate() {
        if !c.is_identity(id) {
            let _ = writeln!(s, "  o{} -> o{} [label=\"{:?}\"];", m.src, m.dst, m.map.table());
        }
    }
    s.push_str("}\n");
    s
}

pub fn poset_to_dot(j: &MilgramPoset) -> String {
    let mut s = String::from("digraph J {\n");
    for (i, e) in j.elements.iter().enumerate() {
        let _ = writeln!(s, "  x{i} [label=\"{} {:?}\"];", levels_label(&e.ordinal), e.labels.images());
    }
    for (x, y) in j.covers() {
        let _ = writeln!(s, "  x{x} -> x{y};");
    }
    s.push_str("}\n");
    s
}
