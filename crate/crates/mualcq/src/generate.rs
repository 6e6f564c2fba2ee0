//! Seeded random generators for concepts, TBoxes, interpretations and
//! valuations.
//!
//! Everything is driven by an explicit ChaCha RNG so that suites replay
//! byte-for-byte from a seed. Generated concepts are well-formed by
//! construction: the generator tracks the negation parity at which each
//! in-scope variable was bound and only emits an occurrence when the current
//! parity matches.


use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::models::{ElemSet, Interpretation, Signature, Valuation};
use crate::syntax::{Concept, TBox};

/// RNG used throughout the crate's randomized suites.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape parameters for concept generation.
#[derive(Clone, Debug)]
pub struct GenCfg {
    pub max_depth: usize,
    pub atomics: Vec<String>,
    pub roles: Vec<String>,
    /// Allow `atleast`/`atmost` nodes.
    pub allow_counts: bool,
    /// Largest number in a generated restriction.
    pub max_n: u32,
}

impl Default for GenCfg {
    fn default() -> Self {
        GenCfg {
            max_depth: 3,
            atomics: vec!["a".into(), "b".into()],
            roles: vec!["r".into()],
            allow_counts: true,
            max_n: 2,
        }
    }
}

impl GenCfg {
    pub fn mu_alc(mut self) -> Self {
        self.allow_counts = false;
        self
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }
}

struct Gen<'a, R: Rng> {
    rng: &'a mut R,
    cfg: &'a GenCfg,
    /// In-scope variables with the parity at which they were bound.
    vars: Vec<(String, bool)>,
    /// Current negation parity (true under an odd number of flips).
    odd: bool,
    binders_made: usize,
}

impl<'a, R: Rng> Gen<'a, R> {
    fn eligible_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .filter(|(_, bound_odd)| *bound_odd == self.odd)
            .map(|(name, _)| name.clone())
            .collect()
    }

    fn atomic(&mut self) -> Concept {
        let name = self.cfg.atomics.choose(self.rng).expect("atomics non-empty");
        Concept::Atomic(name.clone())
    }

    fn role(&mut self) -> String {
        self.cfg.roles.choose(self.rng).expect("roles non-empty").clone()
    }

    fn leaf(&mut self) -> Concept {
        let vars = self.eligible_vars();
        let pick = self.rng.gen_range(0..8);
        match pick {
            0 => Concept::Top,
            1 => Concept::Bot,
            2 | 3 if !vars.is_empty() => {
                Concept::Var(vars.choose(self.rng).expect("non-empty").clone())
            }
            _ => self.atomic(),
        }
    }

    fn concept(&mut self, depth: usize) -> Concept {
        if depth == 0 {
            return self.leaf();
        }
        let has_roles = !self.cfg.roles.is_empty();
        loop {
            match self.rng.gen_range(0..12) {
                0 => return self.leaf(),
                1 => {
                    self.odd = !self.odd;
                    let b = self.concept(depth - 1);
                    self.odd = !self.odd;
                    return Concept::not(b);
                }
                2 | 3 => {
                    return Concept::and(self.concept(depth - 1), self.concept(depth - 1))
                }
                4 | 5 => {
                    return Concept::or(self.concept(depth - 1), self.concept(depth - 1))
                }
                6 if has_roles => {
                    let r = self.role();
                    return Concept::exists(r, self.concept(depth - 1));
                }
                7 if has_roles => {
                    let r = self.role();
                    return Concept::forall(r, self.concept(depth - 1));
                }
                8 if has_roles && self.cfg.allow_counts => {
                    let n = self.rng.gen_range(0..=self.cfg.max_n);
                    let r = self.role();
                    // The qualifier of atmost sits under one negation.
                    self.odd = !self.odd;
                    let b = self.concept(depth - 1);
                    self.odd = !self.odd;
                    return Concept::at_most(n, r, b);
                }
                9 if has_roles && self.cfg.allow_counts => {
                    let n = self.rng.gen_range(0..=self.cfg.max_n);
                    let r = self.role();
                    return Concept::at_least(n, r, self.concept(depth - 1));
                }
                10 | 11 => {
                    self.binders_made += 1;
                    let name = format!("V{}", self.binders_made);
                    self.vars.push((name.clone(), self.odd));
                    let body = self.concept(depth - 1);
                    self.vars.pop();
                    return if self.rng.gen_bool(0.5) {
                        Concept::mu(name, body)
                    } else {
                        Concept::nu(name, body)
                    };
                }
                _ => continue,
            }
        }
    }
}

/// A closed, well-formed concept.
pub fn gen_closed(rng: &mut impl Rng, cfg: &GenCfg) -> Concept {
    let mut g = Gen {
        rng,
        cfg,
        vars: Vec::new(),
        odd: false,
        binders_made: 0,
    };
    g.concept(cfg.max_depth)
}

/// A well-formed concept in which `var` may occur free, only positively
/// (possibly not at all).
pub fn gen_positive_in(rng: &mut impl Rng, cfg: &GenCfg, var: &str) -> Concept {
    let mut g = Gen {
        rng,
        cfg,
        vars: vec![(var.to_string(), false)],
        odd: false,
        binders_made: 0,
    };
    g.concept(cfg.max_depth)
}

/// A well-formed concept in which `var` may occur free at any polarity:
/// generated as a closed concept over an extra marker atomic, whose
/// occurrences become the variable.
pub fn gen_with_hole(rng: &mut impl Rng, cfg: &GenCfg, var: &str) -> Concept {
    let marker = "__hole";
    let mut extended = cfg.clone();
    extended.atomics.push(marker.to_string());
    let skeleton = gen_closed(rng, &extended);
    fn fill(c: &Concept, marker: &str, var: &str) -> Concept {
        match c {
            Concept::Atomic(a) if a == marker => Concept::var(var),
            Concept::Atomic(_) | Concept::Var(_) | Concept::Top | Concept::Bot => c.clone(),
            Concept::Not(b) => Concept::not(fill(b, marker, var)),
            Concept::And(a, b) => Concept::and(fill(a, marker, var), fill(b, marker, var)),
            Concept::Or(a, b) => Concept::or(fill(a, marker, var), fill(b, marker, var)),
            Concept::Exists(r, b) => Concept::exists(r.clone(), fill(b, marker, var)),
            Concept::Forall(r, b) => Concept::forall(r.clone(), fill(b, marker, var)),
            Concept::AtMost(n, r, b) => Concept::at_most(*n, r.clone(), fill(b, marker, var)),
            Concept::AtLeast(n, r, b) => Concept::at_least(*n, r.clone(), fill(b, marker, var)),
            Concept::Mu(v, b) => Concept::mu(v.clone(), fill(b, marker, var)),
            Concept::Nu(v, b) => Concept::nu(v.clone(), fill(b, marker, var)),
        }
    }
    fill(&skeleton, marker, var)
}

/// A TBox of up to `max_assertions` inclusions between generated closed
/// concepts.
pub fn gen_tbox(rng: &mut impl Rng, cfg: &GenCfg, max_assertions: usize) -> TBox {
    let count = rng.gen_range(0..=max_assertions);
    let pairs = (0..count)
        .map(|_| (gen_closed(rng, cfg), gen_closed(rng, cfg)))
        .collect();
    TBox::new(pairs).expect("generated concepts are closed and well-formed")
}

/// A uniformly random interpretation over the signature.
pub fn gen_interpretation(rng: &mut impl Rng, sig: &Signature, size: usize) -> Interpretation {
    let mut interp = Interpretation::canonical(size).expect("size is valid");
    let mask = ElemSet::full(size).bits();
    for c in sig.concepts() {
        interp.set_concept(c.clone(), ElemSet::from_bits(rng.gen::<u64>() & mask));
    }
    for r in sig.roles() {
        let mut pairs = Vec::new();
        for from in 0..size {
            for to in 0..size {
                if rng.gen_bool(0.35) {
                    pairs.push((from, to));
                }
            }
        }
        interp.set_role(r.clone(), &pairs);
    }
    interp
}

/// A tree-shaped interpretation: element d1 is the root, every other element
/// has exactly one incoming role edge, each node gets at most `branching`
/// children and the tree is at most `depth` edges deep. Concept extensions
/// are random.
pub fn gen_tree_interpretation(
    rng: &mut impl Rng,
    sig: &Signature,
    depth: usize,
    branching: usize,
) -> Interpretation {
    assert!(!sig.roles().is_empty(), "a tree needs at least one role");
    // First lay out the nodes level by level.
    let mut parents: Vec<Option<(usize, String)>> = vec![None];
    let mut frontier = vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &node in &frontier {
            let children = rng.gen_range(0..=branching);
            for _ in 0..children {
                if parents.len() >= 12 {
                    break;
                }
                let role = sig.roles().choose(rng).expect("non-empty").clone();
                parents.push(Some((node, role)));
                next.push(parents.len() - 1);
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    let size = parents.len();
    let mut interp = Interpretation::canonical(size).expect("bounded size");
    let mask = ElemSet::full(size).bits();
    for c in sig.concepts() {
        interp.set_concept(c.clone(), ElemSet::from_bits(rng.gen::<u64>() & mask));
    }
    for r in sig.roles() {
        let pairs: Vec<(usize, usize)> = parents
            .iter()
            .enumerate()
            .filter_map(|(child, p)| match p {
                Some((parent, role)) if role == r => Some((*parent, child)),
                _ => None,
            })
            .collect();
        interp.set_role(r.clone(), &pairs);
    }
    interp
}

/// A valuation assigning a random subset to each of `vars`.
pub fn gen_valuation(rng: &mut impl Rng, interp: &Interpretation, vars: &[&str]) -> Valuation {
    let mask = interp.full().bits();
    let mut rho = Valuation::empty();
    for v in vars {
        rho.set(*v, ElemSet::from_bits(rng.gen::<u64>() & mask));
    }
    rho
}
