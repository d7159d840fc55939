use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Perm;

#[derive(Debug, Clone)]
struct Level {
    point: usize,
    gens: Vec<Perm>,
    /// `transversal[w]` maps `point` to `w`.
    transversal: Vec<Option<Perm>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(degree: usize, point: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[point] = Some(Perm::identity(degree));
        Level {
            point,
            gens: Vec::new(),
            transversal,
            orbit: vec![point],
        }
    }

    fn rebuild_orbit(&mut self) {
        let degree = self.transversal.len();
        self.transversal.iter_mut().for_each(|t| *t = None);
        self.transversal[self.point] = Some(Perm::identity(degree));
        self.orbit = vec![self.point];
        let mut i = 0;
        while i < self.orbit.len() {
            let w = self.orbit[i];
            for s in &self.gens {
                let y = s.apply(w);
                if self.transversal[y].is_none() {
                    let u = self.transversal[w].as_ref().unwrap().then(s);
                    self.transversal[y] = Some(u);
                    self.orbit.push(y);
                }
            }
            i += 1;
        }
    }
}

/// A base and strong generating set with explicit transversals.
#[derive(Debug, Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn trivial(degree: usize) -> Self {
        StabChain {
            degree,
            levels: Vec::new(),
        }
    }

    /// Builds the chain from a set already known to be strong with respect
    /// to `base`, such as the generators produced by the automorphism search.
    pub fn from_sgs(degree: usize, base: &[usize], sgs: &[Perm]) -> Self {
        let mut levels: Vec<Level> = base.iter().map(|&b| Level::new(degree, b)).collect();
        for g in sgs.iter().filter(|g| !g.is_identity()) {
            let fixed = base.iter().take_while(|&&b| g.fixes(b)).count();
            for level in levels.iter_mut().take((fixed + 1).min(base.len())) {
                level.gens.push(g.clone());
            }
        }
        for level in &mut levels {
            level.rebuild_orbit();
        }
        StabChain { degree, levels }
    }

    /// Deterministic Schreier–Sims. The base starts with `prefix`.
    pub fn schreier_sims(degree: usize, gens: &[Perm], prefix: &[usize]) -> Self {
        let mut chain = StabChain::trivial(degree);
        for &b in prefix {
            chain.levels.push(Level::new(degree, b));
        }
        for g in gens {
            if !chain.contains(g) {
                let (h, j) = chain.sift(g);
                chain.add_residue(h, j);
            }
        }
        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            match chain.check_level(i as usize) {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
        chain
    }

    /// Randomised Schreier–Sims that stops once the chain reaches the known
    /// group order. Sound because a partial chain never overestimates.
    pub fn with_known_order(
        degree: usize,
        gens: &[Perm],
        prefix: &[usize],
        order: &BigUint,
        seed: u64,
    ) -> Self {
        let mut chain = StabChain::trivial(degree);
        for &b in prefix {
            chain.levels.push(Level::new(degree, b));
        }
        for g in gens {
            let (h, j) = chain.sift(g);
            if !h.is_identity() {
                chain.add_residue(h, j);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if pool.is_empty() {
            return chain;
        }
        let k = pool.len();
        while pool.len() < 10 {
            pool.push(pool[pool.len() % k].clone());
        }
        let mut acc = Perm::identity(degree);
        let mut stale = 0usize;
        while &chain.order() < order {
            // Product replacement.
            let a = rng.gen_range(0..pool.len());
            let mut b = rng.gen_range(0..pool.len());
            while b == a {
                b = rng.gen_range(0..pool.len());
            }
            pool[a] = pool[a].then(&pool[b]);
            acc = acc.then(&pool[a]);
            let (h, j) = chain.sift(&acc);
            if !h.is_identity() {
                chain.add_residue(h, j);
                stale = 0;
            } else {
                stale += 1;
                if stale > 2000 {
                    // The supplied order was wrong; fall back to the exact method.
                    return StabChain::schreier_sims(degree, gens, prefix);
                }
            }
        }
        chain
    }

    /// Same group with a base starting at `prefix`.
    pub fn rebase(&self, prefix: &[usize]) -> StabChain {
        let order = self.order();
        let mut chain = StabChain::trivial(self.degree);
        for &b in prefix {
            chain.levels.push(Level::new(self.degree, b));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for g in self.strong_generators() {
            let (h, j) = chain.sift(&g);
            if !h.is_identity() {
                chain.add_residue(h, j);
            }
        }
        while chain.order() < order {
            let g = self.random_element(&mut rng);
            let (h, j) = chain.sift(&g);
            if !h.is_identity() {
                chain.add_residue(h, j);
            }
        }
        chain
    }

    fn check_level(&mut self, i: usize) -> Option<usize> {
        let level = &self.levels[i];
        let orbit = level.orbit.clone();
        let gens = level.gens.clone();
        for &w in &orbit {
            for s in &gens {
                let uw = self.levels[i].transversal[w].as_ref().unwrap();
                let y = s.apply(w);
                let uws = uw.then(s);
                let uy = self.levels[i].transversal[y].as_ref().unwrap();
                if &uws == uy {
                    continue;
                }
                let schreier = uws.then(&uy.inverse());
                let (h, j) = self.sift_from(&schreier, i + 1);
                if !h.is_identity() {
                    self.add_residue(h, j);
                    return Some(j.min(self.levels.len() - 1));
                }
            }
        }
        None
    }

    /// Adds a sifting residue that fixes the first `j` base points.
    fn add_residue(&mut self, h: Perm, j: usize) {
        debug_assert!(!h.is_identity());
        if j == self.levels.len() {
            let p = (0..self.degree).find(|&x| !h.fixes(x)).unwrap();
            self.levels.push(Level::new(self.degree, p));
        }
        for l in 0..=j {
            self.levels[l].gens.push(h.clone());
            self.levels[l].rebuild_orbit();
        }
    }

    /// Strips `g` through the chain. Returns the residue and the level where
    /// sifting stopped (`levels` when it passed every level).
    pub fn sift(&self, g: &Perm) -> (Perm, usize) {
        self.sift_from(g, 0)
    }

    fn sift_from(&self, g: &Perm, start: usize) -> (Perm, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let w = h.apply(level.point);
            match &level.transversal[w] {
                Some(u) => {
                    if w != level.point {
                        h = h.then(&u.inverse());
                    }
                }
                None => return (h, i),
            }
        }
        let n = self.levels.len();
        (h, n)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.sift(g).0.is_identity()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    pub fn transversal(&self, level: usize, w: usize) -> Option<&Perm> {
        self.levels[level].transversal[w].as_ref()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn order_u128(&self) -> Option<u128> {
        self.order().to_u128()
    }

    /// Union of the level generators, without repeats.
    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Chain of the stabiliser of the first `k` base points.
    pub fn stabilizer_chain(&self, k: usize) -> StabChain {
        StabChain {
            degree: self.degree,
            levels: self.levels[k.min(self.levels.len())..].to_vec(),
        }
    }

    /// Exact stabiliser of `v`.
    pub fn point_stabilizer(&self, v: usize) -> StabChain {
        self.rebase(&[v]).stabilizer_chain(1)
    }

    /// A uniformly random element.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity(self.degree);
        for level in self.levels.iter().rev() {
            let w = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.then(level.transversal[w].as_ref().unwrap());
        }
        g
    }

    /// Every element; intended for small groups.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for g in &out {
                for &w in &level.orbit {
                    next.push(g.then(level.transversal[w].as_ref().unwrap()));
                }
            }
            out = next;
        }
        out
    }
}
