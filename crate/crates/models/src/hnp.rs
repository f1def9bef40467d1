//! The monoid attached to tower data: `N0^Ω(c, Λ) ⋉ G` with `c_V = ρ(V)/udim`
//! and `Λ` the nontrivial cycle towers.

use crate::acm::{Acm, AcmShape, AcmSpec};
use crate::group::FiniteAbelianGroup;
use crate::monext::{DPart, Monext};
use crate::ModelError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use zsl_invariants::{half_factorial_probe, max_catenary, tame_degree, Monoid};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tower {
    pub ranks: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerData {
    pub udim: u64,
    #[serde(default)]
    pub cycle_towers: Vec<Tower>,
    /// The first member of each faithful tower is its faithful module.
    #[serde(default)]
    pub faithful_towers: Vec<Tower>,
    /// Cyclic orders of the class group.
    #[serde(default)]
    pub class_group: Vec<u64>,
}

impl TowerData {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.udim == 0 {
            return Err(ModelError::Spec("udim: must be positive".into()));
        }
        for (name, towers) in [("cycle_towers", &self.cycle_towers), ("faithful_towers", &self.faithful_towers)] {
            if let Some(k) = towers.iter().position(|t| t.ranks.is_empty() || t.ranks.contains(&0)) {
                return Err(ModelError::Spec(format!("{name}: tower {k} needs positive ranks")));
            }
        }
        for (k, t) in self.cycle_towers.iter().enumerate() {
            let total: u64 = t.ranks.iter().sum();
            if t.ranks.len() >= 2 && !total.is_multiple_of(self.udim) {
                return Err(ModelError::Spec(format!("cycle_towers: tower {k} has ρ = {total} not divisible by udim")));
            }
        }
        FiniteAbelianGroup::new(&self.class_group)?;
        Ok(())
    }

    fn nontrivial_cycles(&self) -> impl Iterator<Item = &Tower> {
        self.cycle_towers.iter().filter(|t| t.ranks.len() >= 2)
    }

    pub fn has_faithful_nontrivial(&self) -> bool {
        self.faithful_towers.iter().any(|t| t.ranks.len() >= 2)
    }

    /// `Ω = {0}` plus the unfaithful members of nontrivial towers.
    pub fn acm_spec(&self) -> Result<AcmSpec, ModelError> {
        self.validate()?;
        let udim = BigInt::from(self.udim);
        let mut c = vec![BigRational::one()];
        let mut lambda = Vec::new();
        for t in self.nontrivial_cycles() {
            let start = c.len();
            c.extend(t.ranks.iter().map(|&r| BigRational::new(r.into(), udim.clone())));
            lambda.push((start..c.len()).collect());
        }
        for t in self.faithful_towers.iter().filter(|t| t.ranks.len() >= 2) {
            c.extend(t.ranks[1..].iter().map(|&r| BigRational::new(r.into(), udim.clone())));
        }
        AcmSpec::new(c.len(), c, lambda)
    }

    pub fn class_group(&self) -> Result<FiniteAbelianGroup, ModelError> {
        FiniteAbelianGroup::new(&self.class_group)
    }
}

/// `N0^Ω(c, Λ) ⋉ G`; for faithful towers, the core `N0^{Ω'}(c, Λ) ⋉ G` the checks run on.
pub fn hnp_monoid(td: &TowerData) -> Result<(Acm, Monext), ModelError> {
    let spec = td.acm_spec()?;
    let core_spec = if spec.shape() == AcmShape::Extended {
        let covered: usize = spec.lambda().iter().map(Vec::len).sum();
        AcmSpec::new(covered + 1, spec.c()[..covered + 1].to_vec(), spec.lambda().to_vec())?
    } else {
        spec.clone()
    };
    let acm = Acm::new(core_spec, 0)?;
    let core = Box::new(acm.core().clone());
    let m = Monext::new(core, DPart::Group(td.class_group()?))?;
    Ok((Acm::new(spec, 1)?, m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HnpReport {
    pub factorial: bool,
    /// `None` stands for infinity.
    pub tame: Option<u64>,
    pub omega: Option<u64>,
    /// `t` and `ω` recomputed by the engine on the finite core.
    pub core_tame: u64,
    pub core_omega: u64,
    pub half_factorial: bool,
    pub catenary_max: u64,
    pub catenary_at_most_two: bool,
    pub elements_checked: usize,
    pub notes: Vec<String>,
}

pub fn hnp_report(td: &TowerData, level: usize) -> Result<HnpReport, ModelError> {
    let (acm, m) = hnp_monoid(td)?;
    let spec = acm.spec();
    let group = td.class_group()?;
    let towers_sum: u64 = td.nontrivial_cycles().map(|t| t.ranks.iter().sum::<u64>()).sum::<u64>() / td.udim;
    let cycles: Vec<&Tower> = td.nontrivial_cycles().collect();
    let nontrivial = cycles.len() + td.faithful_towers.iter().filter(|t| t.ranks.len() >= 2).count();
    let factorial = group.is_trivial()
        && (nontrivial == 0
            || (nontrivial == 1 && cycles.len() == 1 && cycles[0].ranks.iter().sum::<u64>() == td.udim));
    let mut notes = Vec::new();
    let (tame, omega) = if td.has_faithful_nontrivial() {
        notes.push("a faithful nontrivial tower makes t and ω infinite; checks run on the cycle-tower core".into());
        (None, None)
    } else if factorial {
        (Some(0), Some(1))
    } else if spec.is_factorial() {
        notes.push("tower part factorial with nontrivial class group: every atom is non-prime with t = ω = 2".into());
        (Some(2), Some(2))
    } else {
        (Some(towers_sum), Some(towers_sum))
    };
    let mut core_tame = 0;
    let mut core_omega = 0;
    for i in 0..m.atoms().len() {
        let t = tame_degree(&m, i, "minimal-cover", None)?;
        core_tame = core_tame.max(t.value);
        core_omega = core_omega.max(t.omega);
    }
    let hf = half_factorial_probe(&m, level);
    let (c, _) = max_catenary(&m, level);
    Ok(HnpReport {
        factorial,
        tame,
        omega,
        core_tame,
        core_omega,
        half_factorial: hf.half_factorial,
        catenary_max: c,
        catenary_at_most_two: c <= 2,
        elements_checked: hf.checked,
        notes,
    })
}
