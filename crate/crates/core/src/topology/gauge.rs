//! Existence of trapping and non-trapping gauges for hyperbolic surfaces and
//! cusped three-manifolds.

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::snf::{row_gcd, smith_normal_form};
use super::Subgroup;
use crate::error::TopologyError;
use crate::model::{is_integral, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeOptions {
    pub trapping_exists: bool,
    pub non_trapping_exists: bool,
}

/// `b_class` is `∫B / 2π`; it only matters for one orientable cusp.
pub fn surface_gauge_options(cusps: usize, orientable: bool, b_class: Rational) -> Result<GaugeOptions, TopologyError> {
    if cusps == 0 {
        return Err(TopologyError::Invalid("a cusp surface needs at least one cusp".into()));
    }
    if !orientable || cusps >= 2 {
        return Ok(GaugeOptions { trapping_exists: true, non_trapping_exists: true });
    }
    let integral = is_integral(&b_class);
    Ok(GaugeOptions { trapping_exists: !integral, non_trapping_exists: integral })
}

/// Integer cohomology data of a compactified manifold with torus cusps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyPresentation {
    /// `b₁` of each boundary component.
    pub boundary_rank: Vec<usize>,
    /// Columns span the image of `H¹(X̄; ℤ)` in `⊕ H¹(M_j; ℤ)`; rows are stacked per component.
    pub lagrangian: Vec<Vec<i64>>,
    pub dimension: usize,
    pub orientable: bool,
}

impl CohomologyPresentation {
    pub fn cusps(&self) -> usize {
        self.boundary_rank.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThreeManifoldGauge {
    pub non_trapping_exists: bool,
    pub q: i64,
    /// Per-cusp generator of the reachable flux values, `AllReals` when every real value is reachable.
    #[serde(skip)]
    pub generators: Vec<Subgroup>,
}

/// For a cusp whose slice of `L` is spanned by the primitive class `ℓ`, the boundary
/// values reachable by integer shifts along `L` form `gcd(ℓ)/|ℓ_c| · ℤ` in the
/// coordinate `c` transverse to `ℓ`.
fn cusp_generator(block: &[Vec<i64>]) -> Result<Subgroup, TopologyError> {
    let snf = smith_normal_form(block)?;
    match snf.rank() {
        2 => Ok(Subgroup::AllReals),
        1 => {
            let col = (0..block[0].len())
                .map(|j| (block[0][j], block[1][j]))
                .find(|&(a, b)| a != 0 || b != 0)
                .expect("rank one block has a non-zero column");
            let g = row_gcd(&[col.0, col.1])? as i64;
            let (l1, l2) = (col.0 / g, col.1 / g);
            let denom = if l2 != 0 { l2.abs() } else { l1.abs() };
            Ok(Subgroup::Cyclic(Rational::new(1, denom)))
        }
        _ => Err(TopologyError::Invalid("cusp block of L vanishes; L is not Lagrangian".into())),
    }
}

/// Decides whether `B` admits a non-trapping potential and returns the least common
/// denominator `q` of the per-cusp generators.
pub fn three_manifold_gauge(
    pres: &CohomologyPresentation,
    b_components: &[Rational],
) -> Result<ThreeManifoldGauge, TopologyError> {
    if pres.dimension != 3 || !pres.orientable {
        return Err(TopologyError::Invalid("requires an orientable three-manifold".into()));
    }
    let h = pres.cusps();
    if pres.boundary_rank.iter().any(|&b| b != 2) {
        return Err(TopologyError::Invalid("torus cusps have b1 = 2".into()));
    }
    if pres.lagrangian.len() != 2 * h || pres.lagrangian.iter().any(|r| r.len() != h) {
        return Err(TopologyError::Invalid(format!("L basis must be {}x{h}", 2 * h)));
    }
    if b_components.len() != h {
        return Err(TopologyError::Invalid(format!("expected {h} class components, found {}", b_components.len())));
    }
    if smith_normal_form(&pres.lagrangian)?.rank() != h {
        return Err(TopologyError::RankDeficient);
    }
    let mut generators = Vec::with_capacity(h);
    for j in 0..h {
        generators.push(cusp_generator(&pres.lagrangian[2 * j..2 * j + 2])?);
    }
    let non_trapping_exists = generators.iter().zip(b_components).any(|(g, b)| g.contains(b) || b.is_zero());
    let q = generators.iter().fold(1i64, |acc, g| match g {
        Subgroup::AllReals => acc,
        Subgroup::Cyclic(r) => acc.lcm(r.denom()),
    });
    Ok(ThreeManifoldGauge { non_trapping_exists, q, generators })
}

/// Least common denominator of a list of generators.
pub fn generator_denominator_lcm(generators: &[Rational]) -> i64 {
    generators.iter().fold(1i64, |acc, g| acc.lcm(g.denom()))
}
