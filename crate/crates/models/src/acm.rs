//! Almost-constant monoids `N0^Ω(c, Λ)` over a finite `Ω = [0, r]`.
//!
//! Nonzero elements have `x_0 = ℓ(x) > 0` and `Σ_{i∈I} x_i = C_I·ℓ(x)` for each
//! tower `I ∈ Λ`. The arithmetic runs on a core monoid: the coordinates in
//! `∪Λ` (or `x_0` alone when `Λ` is empty), extended by `N0` for each
//! remaining coordinate.

use crate::monext::{DPart, Monext};
use crate::zss::{block_monoid_of_vectors, some_zss_atoms, SomeZss};
use crate::ModelError;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use zsl_invariants::{
    elements_up_to, half_factorial_probe, max_catenary, omega, set_of_lengths, tame_degree, DivisibilityMode, Elem,
    Monoid, PresentedMonoid,
};
use zsl_linalg::{lattice_contains, lattice_quotient};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcmSpecJson {
    pub omega: usize,
    /// Rationals as `"p/q"` or `"p"`.
    pub c: Vec<String>,
    pub lambda: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcmSpec {
    omega: usize,
    c: Vec<BigRational>,
    lambda: Vec<Vec<usize>>,
    sums: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AcmShape {
    /// `|Ω| = 1`: the monoid is `N0`.
    Singleton,
    /// The towers cover `Ω ∖ {0}`.
    Covered,
    /// Some coordinates lie outside every tower.
    Extended,
}

impl AcmSpec {
    pub fn new(omega: usize, c: Vec<BigRational>, lambda: Vec<Vec<usize>>) -> Result<Self, ModelError> {
        let spec = |m: String| Err(ModelError::Spec(m));
        if omega == 0 {
            return spec("omega: Ω must contain the index 0".into());
        }
        if c.len() != omega {
            return spec(format!("c: expected {omega} entries, got {}", c.len()));
        }
        if !c[0].is_one() {
            return spec("c: c_0 must equal 1".into());
        }
        if let Some(i) = c.iter().position(|v| !v.is_positive()) {
            return spec(format!("c: entry {i} is not positive"));
        }
        let mut seen = BTreeSet::new();
        let mut lambda: Vec<Vec<usize>> = lambda;
        let mut sums = Vec::with_capacity(lambda.len());
        for tower in &mut lambda {
            tower.sort_unstable();
            if tower.len() < 2 {
                return spec(format!("lambda: tower {tower:?} needs at least two members"));
            }
            for &i in tower.iter() {
                if i == 0 || i >= omega {
                    return spec(format!("lambda: index {i} outside [1, {}]", omega - 1));
                }
                if !seen.insert(i) {
                    return spec(format!("lambda: index {i} appears twice"));
                }
            }
            let total: BigRational = tower.iter().map(|&i| c[i].clone()).sum();
            if !total.is_integer() {
                return spec(format!("lambda: C_I = {total} for tower {tower:?} is not an integer"));
            }
            sums.push(total.to_integer().to_u64().expect("positive and small"));
        }
        Ok(Self { omega, c, lambda, sums })
    }

    pub fn from_json(j: &AcmSpecJson) -> Result<Self, ModelError> {
        let c =
            j.c.iter()
                .enumerate()
                .map(|(i, s)| {
                    s.trim()
                        .parse::<BigRational>()
                        .map_err(|_| ModelError::Spec(format!("c: entry {i} `{s}` is not a rational")))
                })
                .collect::<Result<Vec<_>, _>>()?;
        Self::new(j.omega, c, j.lambda.clone())
    }

    pub fn to_json(&self) -> AcmSpecJson {
        AcmSpecJson {
            omega: self.omega,
            c: self.c.iter().map(|v| v.to_string()).collect(),
            lambda: self.lambda.clone(),
        }
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn c(&self) -> &[BigRational] {
        &self.c
    }

    pub fn lambda(&self) -> &[Vec<usize>] {
        &self.lambda
    }

    /// `C_I` for each tower, in the order of `lambda`.
    pub fn tower_sums(&self) -> &[u64] {
        &self.sums
    }

    pub fn shape(&self) -> AcmShape {
        if self.omega == 1 {
            AcmShape::Singleton
        } else if self.lambda.iter().map(Vec::len).sum::<usize>() == self.omega - 1 {
            AcmShape::Covered
        } else {
            AcmShape::Extended
        }
    }

    /// Factorial exactly when every atom is prime: no towers, or one tower with `C = 1` covering `Ω ∖ {0}`.
    pub fn is_factorial(&self) -> bool {
        match self.shape() {
            AcmShape::Singleton => true,
            AcmShape::Covered => self.sums == [1],
            AcmShape::Extended => false,
        }
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        if x.len() != self.omega || x.iter().any(|&v| v < 0) {
            return false;
        }
        if x[0] == 0 {
            return x.iter().all(|&v| v == 0);
        }
        self.lambda.iter().zip(&self.sums).all(|(t, &s)| t.iter().map(|&i| x[i]).sum::<i64>() == s as i64 * x[0])
    }

    pub fn ell(&self, x: &[i64]) -> u64 {
        x[0] as u64
    }

    pub fn is_atom(&self, x: &[i64]) -> bool {
        self.contains(x) && x[0] == 1
    }
}

/// All ways to write `total` as an ordered sum of `parts` nonnegative integers.
fn compositions(total: u64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 1 {
        return vec![vec![total as i64]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first as i64);
                rest
            })
        })
        .collect()
}

/// `N0^Ω(c, Λ)` realized on its core coordinates.
pub struct Acm {
    spec: AcmSpec,
    core_coords: Vec<usize>,
    free_coords: Vec<usize>,
    core: PresentedMonoid,
    model: Box<dyn Monoid>,
    truncation: u64,
}

impl Acm {
    /// `truncation` bounds the free part of listed atoms when some coordinates lie outside `∪Λ`.
    pub fn new(spec: AcmSpec, truncation: u64) -> Result<Self, ModelError> {
        let mut core_coords: Vec<usize> = spec.lambda.iter().flatten().copied().collect();
        core_coords.sort_unstable();
        if core_coords.is_empty() {
            core_coords.push(0);
        }
        let free_coords: Vec<usize> = (1..spec.omega).filter(|i| !core_coords.contains(i)).collect();
        let mut core_atoms: Vec<Elem> = vec![vec![0; core_coords.len()]];
        if spec.lambda.is_empty() {
            core_atoms = vec![vec![1]];
        } else {
            let cc = &core_coords;
            for (tower, &s) in spec.lambda.iter().zip(&spec.sums) {
                let parts = compositions(s, tower.len());
                core_atoms = core_atoms
                    .into_iter()
                    .flat_map(|a| {
                        parts.iter().map(move |p| {
                            let mut b = a.clone();
                            for (&i, &v) in tower.iter().zip(p) {
                                let pos = cc.binary_search(&i).expect("tower member");
                                b[pos] = v;
                            }
                            b
                        })
                    })
                    .collect();
            }
        }
        core_atoms.sort();
        let core = PresentedMonoid::new(core_coords.len(), core_atoms, DivisibilityMode::Saturated)?;
        let model: Box<dyn Monoid> = if free_coords.is_empty() {
            Box::new(core.clone())
        } else {
            Box::new(Monext::new(Box::new(core.clone()), DPart::Free { rank: free_coords.len(), truncation })?)
        };
        Ok(Self { spec, core_coords, free_coords, core, model, truncation })
    }

    pub fn spec(&self) -> &AcmSpec {
        &self.spec
    }

    /// The core monoid `j(H')` under saturated divisibility.
    pub fn core(&self) -> &PresentedMonoid {
        &self.core
    }

    /// The whole monoid on the embedded coordinates.
    pub fn model(&self) -> &dyn Monoid {
        self.model.as_ref()
    }

    pub fn embed(&self, x: &[i64]) -> Elem {
        self.core_coords.iter().chain(&self.free_coords).map(|&i| x[i]).collect()
    }

    pub fn lift(&self, e: &[i64]) -> Elem {
        let mut x = vec![0; self.spec.omega];
        for (k, &i) in self.core_coords.iter().chain(&self.free_coords).enumerate() {
            x[i] = e[k];
        }
        if let (Some(tower), Some(&s)) = (self.spec.lambda.first(), self.spec.sums.first()) {
            x[0] = tower.iter().map(|&i| x[i]).sum::<i64>() / s as i64;
        }
        x
    }

    /// Listed atoms as vectors over `Ω`.
    pub fn atoms(&self) -> Vec<Elem> {
        self.model.atoms().iter().map(|a| self.lift(a)).collect()
    }

    /// `e_0 + Σ_I C_I e_{min I}`.
    pub fn extremal_atom(&self) -> Elem {
        let mut x = vec![0; self.spec.omega];
        x[0] = 1;
        for (t, &s) in self.spec.lambda.iter().zip(&self.spec.sums) {
            x[t[0]] = s as i64;
        }
        x
    }
}

/// Replay of `ℓ` being a transfer homomorphism onto `N0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub samples: usize,
    /// `ℓ(x + y) = ℓ(x) + ℓ(y)` and sums stay in `H`.
    pub additive: bool,
    /// Every sampled `x` has `L(x) = {ℓ(x)}`.
    pub splits: bool,
    /// The listed atoms are exactly the `ℓ = 1` vectors with free part inside the truncation.
    pub atoms_are_level_one: bool,
}

/// A random element with `ℓ(x) = k`, free coordinates summing to at most `free_max`.
fn random_element(acm: &Acm, k: u64, free_max: u64, rng: &mut ChaCha8Rng) -> Elem {
    let spec = acm.spec();
    let mut x = vec![0; spec.omega];
    x[0] = k as i64;
    for (t, &s) in spec.lambda.iter().zip(&spec.sums) {
        let mut left = s * k;
        for (n, &i) in t.iter().enumerate() {
            let v = if n + 1 == t.len() { left } else { rng.gen_range(0..=left) };
            x[i] = v as i64;
            left -= v;
        }
    }
    let mut left = free_max;
    for &i in &acm.free_coords {
        let v = rng.gen_range(0..=left);
        x[i] = v as i64;
        left -= v;
    }
    x
}

pub fn acm_transfer_check(acm: &Acm, samples: usize, max_level: u64, seed: u64) -> TransferReport {
    let spec = acm.spec();
    let m = acm.model();
    let free_max = if acm.free_coords.is_empty() { 0 } else { acm.truncation };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut additive = true;
    let mut splits = true;
    for _ in 0..samples {
        let k = rng.gen_range(1..=max_level);
        let j = rng.gen_range(1..=max_level);
        let x = random_element(acm, k, free_max, &mut rng);
        let y = random_element(acm, j, free_max, &mut rng);
        let s: Elem = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        additive &= spec.contains(&x) && spec.contains(&s) && spec.ell(&s) == spec.ell(&x) + spec.ell(&y);
        splits &= set_of_lengths(m, &acm.embed(&x)) == BTreeSet::from([k]);
    }
    let listed = acm.atoms();
    let atoms_are_level_one = listed.iter().all(|a| spec.is_atom(a))
        && count_level_one(acm, free_max) == listed.len()
        && listed.iter().collect::<BTreeSet<_>>().len() == listed.len();
    TransferReport { samples, additive, splits, atoms_are_level_one }
}

/// Number of `ℓ = 1` vectors whose free part sums to at most `free_max`, by direct count.
fn count_level_one(acm: &Acm, free_max: u64) -> usize {
    let towers: usize =
        acm.spec.lambda.iter().zip(&acm.spec.sums).map(|(t, &s)| compositions(s, t.len()).len()).product();
    let k = acm.free_coords.len();
    let free: usize = if k == 0 { 1 } else { (0..=free_max).map(|n| compositions(n, k).len()).sum() };
    towers * free
}

/// Structure of `Z^r / quo(j(H))` for a covered spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcmClassGroup {
    pub torsion: Vec<u64>,
    pub free_rank: usize,
    /// Coordinates `i` grouped by the class of `e_i`.
    pub classes: Vec<Vec<usize>>,
    /// `A_i = C_n / gcd(C_i, C_n)` and `B_i = C_i / gcd(C_i, C_n)` for `i < n`.
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    /// The image of each class under `φ*` (towers with two or more classes only).
    pub images: Vec<Vec<i64>>,
    /// Atoms of the block monoid over the class images, as multiplicities.
    pub class_block_atoms: Vec<Vec<u64>>,
    /// The structure matches the closed form.
    pub verified: bool,
}

fn phi_star(spec: &AcmSpec, a: &[u64], b: &[u64], x: &[i64]) -> Vec<i64> {
    let n = spec.lambda.len();
    let last: i64 = spec.lambda[n - 1].iter().map(|&i| x[i - 1]).sum();
    (0..n - 1)
        .map(|k| a[k] as i64 * spec.lambda[k].iter().map(|&i| x[i - 1]).sum::<i64>() - b[k] as i64 * last)
        .collect()
}

pub fn acm_class_group(acm: &Acm) -> Result<AcmClassGroup, ModelError> {
    let spec = acm.spec();
    if spec.shape() != AcmShape::Covered {
        return Err(ModelError::Spec("acm class group: the towers must cover Ω ∖ {0}".into()));
    }
    let r = spec.omega - 1;
    let gens = acm.core().atoms();
    let q = lattice_quotient(r, gens)?;
    let torsion: Vec<u64> = q.torsion.iter().map(|t| t.to_u64().expect("small")).collect();
    let unit = |i: usize| {
        let mut e = vec![0i64; r];
        e[i - 1] = 1;
        e
    };
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 1..=r {
        let mut placed = false;
        for class in &mut classes {
            let d: Vec<i64> = unit(class[0]).iter().zip(unit(i)).map(|(x, y)| x - y).collect();
            if lattice_contains(r, gens, &d)? {
                class.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![i]);
        }
    }
    let n = spec.lambda.len();
    let cn = spec.sums[n - 1];
    let a: Vec<u64> = spec.sums[..n - 1].iter().map(|&c| cn / c.gcd(&cn)).collect();
    let b: Vec<u64> = spec.sums[..n - 1].iter().map(|&c| c / c.gcd(&cn)).collect();
    let same_partition = {
        let mut want: Vec<Vec<usize>> = spec.lambda.to_vec();
        want.sort();
        let mut got = classes.clone();
        got.sort();
        want == got
    };
    let (images, class_block_atoms, verified) = if n == 1 {
        let c1 = spec.sums[0];
        let expected: Vec<u64> = if c1 > 1 { vec![c1] } else { Vec::new() };
        (Vec::new(), Vec::new(), torsion == expected && q.free_rank == 0 && classes.len() == 1)
    } else {
        let images: Vec<Vec<i64>> = classes.iter().map(|c| phi_star(spec, &a, &b, &unit(c[0]))).collect();
        let mut expected: Vec<Vec<i64>> = (0..n - 1)
            .map(|k| {
                let mut v = vec![0; n - 1];
                v[k] = a[k] as i64;
                v
            })
            .collect();
        expected.push(b.iter().map(|&x| -(x as i64)).collect());
        let consistent = (1..=r).all(|i| {
            let cls = classes.iter().position(|c| c.contains(&i)).expect("placed");
            phi_star(spec, &a, &b, &unit(i)) == images[cls]
        });
        let kills_atoms = gens.iter().all(|g| phi_star(spec, &a, &b, g).iter().all(|&v| v == 0));
        let as_sets = images.iter().collect::<BTreeSet<_>>() == expected.iter().collect::<BTreeSet<_>>();
        let formula = some_zss_atoms(&SomeZss::Independent { a: a.clone(), b: b.clone() })?;
        let block = block_monoid_of_vectors(n - 1, &images, Some(formula.length() as usize + 1))?;
        let atoms: Vec<Vec<u64>> = block.atoms.iter().map(|s| s.mult.clone()).collect();
        let formula_matches = atoms.len() == 1 && {
            // Reorder the formula's exponents to the order of `images`.
            images
                .iter()
                .map(|v| formula.ground.iter().position(|g| g == v).map(|p| formula.exponents[p]))
                .collect::<Option<Vec<u64>>>()
                == Some(atoms[0].clone())
        };
        let ok = torsion.is_empty() && q.free_rank == n - 1 && consistent && kills_atoms && as_sets && formula_matches;
        (images, atoms, ok)
    };
    Ok(AcmClassGroup {
        torsion,
        free_rank: q.free_rank,
        classes,
        a,
        b,
        images,
        class_block_atoms,
        verified: verified && same_partition,
    })
}

/// Per-atom `ω` against `Σ(C_I - min_{i∈I} u_i) ≤ ω ≤ Σ C_I`, and the tame degree of `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcmTame {
    pub atoms: usize,
    /// `(atom, lower, ω, upper)` for every atom.
    pub omega: Vec<(Elem, u64, u64, u64)>,
    pub brackets_hold: bool,
    pub extremal_atom: Elem,
    pub extremal_omega: u64,
    /// `max t` over all atoms from the engine.
    pub tame_oracle: u64,
    /// `Σ C_I`, or 0 when factorial.
    pub tame_formula: u64,
    pub half_factorial: bool,
    pub catenary_max: u64,
    pub factorial: bool,
    pub note: Option<String>,
}

pub fn acm_tame(acm: &Acm, level: usize) -> Result<AcmTame, ModelError> {
    let spec = acm.spec();
    if spec.shape() == AcmShape::Extended {
        return Err(ModelError::Spec("acm tame: ω and t are infinite when coordinates lie outside every tower".into()));
    }
    let m = acm.model();
    let total: u64 = spec.sums.iter().sum();
    let mut rows = Vec::new();
    let mut tame_oracle = 0;
    for (i, a) in m.atoms().iter().enumerate() {
        let t = tame_degree(m, i, "minimal-cover", None)?;
        let x = acm.lift(a);
        let lower: u64 = spec
            .lambda
            .iter()
            .zip(&spec.sums)
            .map(|(tw, &s)| s - tw.iter().map(|&k| x[k] as u64).min().expect("nonempty"))
            .sum();
        rows.push((x, lower, t.omega, total));
        tame_oracle = tame_oracle.max(t.value);
    }
    let brackets_hold = rows.iter().all(|(_, lo, w, hi)| lo <= w && w <= hi);
    let extremal_atom = acm.extremal_atom();
    let extremal_omega = rows.iter().find(|r| r.0 == extremal_atom).map_or(0, |r| r.2);
    let factorial = spec.is_factorial();
    let hf = half_factorial_probe(m, level);
    let (catenary_max, _) = max_catenary(m, level);
    Ok(AcmTame {
        atoms: rows.len(),
        omega: rows,
        brackets_hold,
        extremal_atom,
        extremal_omega,
        tame_oracle,
        tame_formula: if factorial { 0 } else { total },
        half_factorial: hf.half_factorial,
        catenary_max,
        factorial,
        note: factorial.then(|| "factorial: every atom is prime, t = 0".to_string()),
    })
}

/// `ω(H, (u, f))` brackets in the extended shape: `max{ω(H',u), |f|} ≤ ω ≤ ω(H',u) + |f| + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedOmega {
    pub atom: Elem,
    pub lower: u64,
    pub omega: u64,
    pub upper: u64,
    pub complete: bool,
}

pub fn acm_extended_omega(acm: &Acm) -> Result<Vec<ExtendedOmega>, ModelError> {
    let m = acm.model();
    let core = acm.core();
    let k = acm.core_coords.len();
    m.atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let u0 = core.atoms().iter().position(|v| v[..] == a[..k]).expect("core atom");
            let w0 = tame_degree(core, u0, "minimal-cover", None)?.omega;
            let f: u64 = a[k..].iter().map(|&v| v as u64).sum();
            let w = omega(m, i, "minimal-cover", None)?;
            Ok(ExtendedOmega {
                atom: acm.lift(a),
                lower: w0.max(f),
                omega: w.value,
                upper: w0 + f + 1,
                complete: w.complete,
            })
        })
        .collect()
}

/// Every element of level at most `level` has `c ≤ 2`.
pub fn acm_catenary_bound(acm: &Acm, level: usize) -> (bool, usize) {
    let xs = elements_up_to(acm.model(), level);
    let (c, _) = max_catenary(acm.model(), level);
    (c <= 2, xs.len())
}
