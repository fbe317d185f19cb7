use super::{Assignment, Signature, Tuples, Val, Var};
use crate::error::{Error, Result};
use petgraph::graphmap::DiGraphMap;

/// One structural equation: a dense table indexed mixed-radix by the parent
/// values, first parent most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Law {
    parents: Vec<Var>,
    radices: Vec<usize>,
    table: Vec<Val>,
}

impl Law {
    pub fn new(sig: &Signature, v: Var, parents: Vec<Var>, table: Vec<Val>) -> Result<Self> {
        if v >= sig.len() {
            return Err(Error::Law(format!("variable #{v} out of bounds")));
        }
        if parents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Law(format!(
                "parents of `{}` must be distinct and in signature order",
                sig.name(v)
            )));
        }
        if let Some(&p) = parents.iter().find(|&&p| p >= sig.len() || p == v) {
            return Err(Error::Law(format!("bad parent #{p} for `{}`", sig.name(v))));
        }
        let radices: Vec<usize> = parents.iter().map(|&p| sig.range_size(p)).collect();
        let size: usize = radices.iter().product();
        if table.len() != size {
            return Err(Error::Law(format!(
                "table for `{}` has {} entries, expected {size}",
                sig.name(v),
                table.len()
            )));
        }
        if table.iter().any(|&x| x as usize >= sig.range_size(v)) {
            return Err(Error::Law(format!("table for `{}` leaves its range", sig.name(v))));
        }
        Ok(Law { parents, radices, table })
    }

    /// A constant law with no parents.
    pub fn constant(sig: &Signature, v: Var, x: Val) -> Result<Self> {
        Law::new(sig, v, vec![], vec![x])
    }

    /// Build a law by evaluating `f` on every parent tuple.
    pub fn from_fn(
        sig: &Signature,
        v: Var,
        parents: Vec<Var>,
        f: impl Fn(&[Val]) -> Val,
    ) -> Result<Self> {
        let table = sig.tuples(&parents).map(|t| f(&t)).collect();
        Law::new(sig, v, parents, table)
    }

    pub fn parents(&self) -> &[Var] {
        &self.parents
    }

    pub fn table(&self) -> &[Val] {
        &self.table
    }

    pub fn tuple_index(&self, tuple: &[Val]) -> usize {
        tuple
            .iter()
            .zip(&self.radices)
            .fold(0, |acc, (&x, &r)| acc * r + x as usize)
    }

    pub fn apply(&self, tuple: &[Val]) -> Val {
        self.table[self.tuple_index(tuple)]
    }

    /// F_V(s(PA_V)).
    pub fn eval(&self, s: &Assignment) -> Val {
        let idx = self
            .parents
            .iter()
            .zip(&self.radices)
            .fold(0, |acc, (&p, &r)| acc * r + s.get(p) as usize);
        self.table[idx]
    }

    pub fn is_constant(&self) -> bool {
        self.table.windows(2).all(|w| w[0] == w[1])
    }

    /// Is the parent at position `i` a dummy argument?
    fn is_dummy_position(&self, i: usize) -> bool {
        let stride: usize = self.radices[i + 1..].iter().product();
        let block = stride * self.radices[i];
        (0..self.table.len()).all(|idx| {
            let base = idx - (idx % block) + idx % stride;
            self.table[idx] == self.table[base]
        })
    }

    pub fn dummy_parents(&self) -> Vec<Var> {
        (0..self.parents.len())
            .filter(|&i| self.is_dummy_position(i))
            .map(|i| self.parents[i])
            .collect()
    }

    /// The same function with every dummy parent removed.
    pub fn pruned(&self) -> Law {
        let keep: Vec<usize> = (0..self.parents.len())
            .filter(|&i| !self.is_dummy_position(i))
            .collect();
        let parents: Vec<Var> = keep.iter().map(|&i| self.parents[i]).collect();
        let radices: Vec<usize> = keep.iter().map(|&i| self.radices[i]).collect();
        let mut full = vec![0 as Val; self.parents.len()];
        let table = Tuples::new(radices.clone())
            .map(|t| {
                for (j, &i) in keep.iter().enumerate() {
                    full[i] = t[j];
                }
                self.apply(&full)
            })
            .collect();
        Law { parents, radices, table }
    }
}

/// A system of structural functions over a signature. Exogenous variables
/// carry no law.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionSystem {
    laws: Vec<Option<Law>>,
}

impl FunctionSystem {
    /// Every variable exogenous.
    pub fn exogenous(sig: &Signature) -> Self {
        FunctionSystem { laws: vec![None; sig.len()] }
    }

    /// Build and require recursiveness.
    pub fn new(sig: &Signature, laws: Vec<Option<Law>>) -> Result<Self> {
        let f = FunctionSystem::new_allow_cycles(sig, laws)?;
        if !f.is_recursive() {
            return Err(Error::Cyclic);
        }
        Ok(f)
    }

    /// Build without the acyclicity check. Semantic operations reject the
    /// result unless it happens to be recursive.
    pub fn new_allow_cycles(sig: &Signature, laws: Vec<Option<Law>>) -> Result<Self> {
        if laws.len() != sig.len() {
            return Err(Error::Law("one slot per variable is required".into()));
        }
        for (v, l) in laws.iter().enumerate() {
            if let Some(l) = l {
                // revalidate against this signature
                Law::new(sig, v, l.parents.clone(), l.table.clone())?;
            }
        }
        Ok(FunctionSystem { laws })
    }

    /// Replace (or add) the law of `v`, keeping the system recursive.
    pub fn with_law(mut self, sig: &Signature, v: Var, law: Option<Law>) -> Result<Self> {
        self.laws[v] = law;
        FunctionSystem::new(sig, self.laws)
    }

    pub fn len(&self) -> usize {
        self.laws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.laws.is_empty()
    }

    pub fn law(&self, v: Var) -> Option<&Law> {
        self.laws[v].as_ref()
    }

    pub fn laws(&self) -> &[Option<Law>] {
        &self.laws
    }

    pub fn is_endogenous(&self, v: Var) -> bool {
        self.laws[v].is_some()
    }

    /// En(F).
    pub fn endogenous(&self) -> Vec<Var> {
        (0..self.laws.len()).filter(|&v| self.is_endogenous(v)).collect()
    }

    /// Cn(F): endogenous variables generated by a constant function.
    pub fn constants(&self) -> Vec<Var> {
        (0..self.laws.len())
            .filter(|&v| self.laws[v].as_ref().is_some_and(Law::is_constant))
            .collect()
    }

    /// En(F) ∖ Cn(F).
    pub fn nontrivial(&self) -> Vec<Var> {
        (0..self.laws.len())
            .filter(|&v| self.laws[v].as_ref().is_some_and(|l| !l.is_constant()))
            .collect()
    }

    fn graph(&self) -> DiGraphMap<Var, ()> {
        let mut g = DiGraphMap::new();
        for v in 0..self.laws.len() {
            g.add_node(v);
        }
        for (v, l) in self.laws.iter().enumerate() {
            if let Some(l) = l {
                for &p in &l.parents {
                    g.add_edge(p, v, ());
                }
            }
        }
        g
    }

    /// Edges X→V of the causal graph G_F.
    pub fn edges(&self) -> Vec<(Var, Var)> {
        let mut e = Vec::new();
        for (v, l) in self.laws.iter().enumerate() {
            if let Some(l) = l {
                e.extend(l.parents.iter().map(|&p| (p, v)));
            }
        }
        e
    }

    pub fn is_recursive(&self) -> bool {
        !petgraph::algo::is_cyclic_directed(&self.graph())
    }

    /// Endogenous variables in an order where parents come first.
    pub fn topological_order(&self) -> Result<Vec<Var>> {
        let order = petgraph::algo::toposort(&self.graph(), None).map_err(|_| Error::Cyclic)?;
        Ok(order.into_iter().filter(|&v| self.is_endogenous(v)).collect())
    }

    /// s(V) = F_V(s(PA_V)) for every V ∈ En(F).
    pub fn is_compatible(&self, s: &Assignment) -> bool {
        self.laws
            .iter()
            .enumerate()
            .all(|(v, l)| l.as_ref().is_none_or(|l| l.eval(s) == s.get(v)))
    }

    /// All assignments compatible with this (recursive) system, in the
    /// enumeration order of A_σ.
    pub fn compatible_assignments(&self, sig: &Signature) -> Result<Vec<Assignment>> {
        let order = self.topological_order()?;
        let exo: Vec<Var> = sig.vars().filter(|&v| !self.is_endogenous(v)).collect();
        let mut out: Vec<Assignment> = sig
            .tuples(&exo)
            .map(|t| {
                let mut s = Assignment(vec![0; sig.len()]);
                for (i, &v) in exo.iter().enumerate() {
                    s.set(v, t[i]);
                }
                for &v in &order {
                    let x = self.laws[v].as_ref().unwrap().eval(&s);
                    s.set(v, x);
                }
                s
            })
            .collect();
        out.sort();
        Ok(out)
    }

    /// Parents of `v` whose value never influences F_V.
    pub fn dummy_parents(&self, sig: &Signature, v: Var) -> Result<Vec<Var>> {
        self.laws[v]
            .as_ref()
            .map(Law::dummy_parents)
            .ok_or_else(|| Error::Invalid(format!("`{}` is exogenous", sig.name(v))))
    }

    /// F restricted to En(F) ∖ vars.
    pub fn without(&self, vars: &[Var]) -> FunctionSystem {
        let mut laws = self.laws.clone();
        for &v in vars {
            laws[v] = None;
        }
        FunctionSystem { laws }
    }

    pub fn canonicalize(&self) -> CanonicalLaw {
        let laws = self
            .laws
            .iter()
            .map(|l| l.as_ref().filter(|l| !l.is_constant()).map(Law::pruned))
            .collect();
        CanonicalLaw(FunctionSystem { laws })
    }

    /// F ∼ G.
    pub fn similar(&self, other: &FunctionSystem) -> bool {
        self.canonicalize() == other.canonicalize()
    }
}

/// Canonical form of a ∼-class: only the non-constant endogenous variables
/// keep a law, and every law is pruned of its dummy parents. The wrapped
/// system is itself a member of the class and serves as its representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalLaw(FunctionSystem);

impl CanonicalLaw {
    pub fn system(&self) -> &FunctionSystem {
        &self.0
    }

    pub fn into_system(self) -> FunctionSystem {
        self.0
    }
}

pub fn canonicalize(f: &FunctionSystem) -> CanonicalLaw {
    f.canonicalize()
}

pub fn similar(f: &FunctionSystem, g: &FunctionSystem) -> bool {
    f.similar(g)
}

pub fn dummy_parents(sig: &Signature, f: &FunctionSystem, v: Var) -> Result<Vec<Var>> {
    f.dummy_parents(sig, v)
}

pub fn is_compatible(sig: &Signature, s: &Assignment, f: &FunctionSystem) -> Result<bool> {
    if s.0.len() != sig.len() || f.len() != sig.len() {
        return Err(Error::Invalid("signature mismatch".into()));
    }
    Ok(f.is_compatible(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::simple(&[
            ("X", &["0", "1", "2"]),
            ("Y", &["0", "1"]),
            ("Z1", &["0", "1"]),
            ("Z2", &["0", "1"]),
            ("V", &["0", "1", "2", "3", "4"]),
        ])
        .unwrap()
    }

    #[test]
    fn dummy_detection_matches_additive_example() {
        // g(X,Y,Z1,Z2) = X + 0*Z2 + (Y - Z1) + Z1, clipped into range
        let s = sig();
        let g = Law::from_fn(&s, 4, vec![0, 1, 2, 3], |t| t[0] + t[1]).unwrap();
        assert_eq!(g.dummy_parents(), vec![2, 3]);
        let p = g.pruned();
        assert_eq!(p.parents(), &[0, 1]);
        assert_eq!(p.apply(&[2, 1]), 3);
    }

    #[test]
    fn constant_and_identity() {
        let s = sig();
        let c = Law::from_fn(&s, 4, vec![0, 1], |_| 3).unwrap();
        assert_eq!(c.dummy_parents(), vec![0, 1]);
        let id = Law::from_fn(&s, 1, vec![2], |t| t[0]).unwrap();
        assert!(id.dummy_parents().is_empty());
    }

    #[test]
    fn cycles_are_rejected() {
        let s = Signature::simple(&[("X", &["0", "1"]), ("Y", &["0", "1"])]).unwrap();
        let lx = Law::from_fn(&s, 0, vec![1], |t| t[0]).unwrap();
        let ly = Law::from_fn(&s, 1, vec![0], |t| t[0]).unwrap();
        assert_eq!(
            FunctionSystem::new(&s, vec![Some(lx.clone()), Some(ly.clone())]),
            Err(Error::Cyclic)
        );
        let f = FunctionSystem::new_allow_cycles(&s, vec![Some(lx), Some(ly)]).unwrap();
        assert!(!f.is_recursive());
    }
}
