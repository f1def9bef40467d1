use crate::ModelError;
use num_traits::ToPrimitive;
use zsl_linalg::{smith_normal_form, IntMatrix};

/// A finite abelian group `Z/m_1 ⊕ ... ⊕ Z/m_t`, elements stored as residue tuples.
///
/// The cyclic orders are kept as given so that direct sums concatenate
/// coordinates; [`FiniteAbelianGroup::invariant_factors`] gives the normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    moduli: Vec<u64>,
}

impl FiniteAbelianGroup {
    /// Orders equal to 1 are dropped; 0 is rejected.
    pub fn new(orders: &[u64]) -> Result<Self, ModelError> {
        if orders.contains(&0) {
            return Err(ModelError::Spec("group: cyclic orders must be positive".into()));
        }
        Ok(Self { moduli: orders.iter().copied().filter(|&m| m > 1).collect() })
    }

    pub fn trivial() -> Self {
        Self { moduli: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Result<Self, ModelError> {
        Self::new(&[n])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Coordinates of an element.
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.moduli.is_empty()
    }

    /// `n_1 | n_2 | ... | n_t`, each at least 2.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let t = self.moduli.len();
        let mut m = IntMatrix::zeros(t, t);
        for (i, &n) in self.moduli.iter().enumerate() {
            m.set(i, i, n.into());
        }
        smith_normal_form(&m)
            .diag
            .iter()
            .map(|d| d.to_u64().expect("divides the group order"))
            .filter(|&d| d > 1)
            .collect()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self { moduli: self.moduli.iter().chain(&other.moduli).copied().collect() }
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.moduli).map(|(&v, &m)| v.rem_euclid(m as i64)).collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        self.reduce(&x.iter().zip(y).map(|(a, b)| a + b).collect::<Vec<_>>())
    }

    pub fn sub(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        self.reduce(&x.iter().zip(y).map(|(a, b)| a - b).collect::<Vec<_>>())
    }

    pub fn neg(&self, x: &[i64]) -> Vec<i64> {
        self.reduce(&x.iter().map(|a| -a).collect::<Vec<_>>())
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.rank() && x.iter().zip(&self.moduli).all(|(&v, &m)| (0..m as i64).contains(&v))
    }

    /// All elements in lexicographic order, zero first.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &m in &self.moduli {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..m as i64).map(move |v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        out
    }

    pub fn element_order(&self, x: &[i64]) -> u64 {
        x.iter().zip(&self.moduli).map(|(&v, &m)| m / num_integer::gcd(v as u64, m)).fold(1, num_integer::lcm)
    }
}
