//! Camacho-Sad index differences on the dual graph, divisor classification,
//! and the rational functions M_E(z) whose zeros locate the jacobian mass
//! that is not explained by the separatrix branches.

use crate::graph::DualGraph;
use crate::scalar::Scalar;
use crate::upoly::{RationalFunction, UPoly};
use crate::{Error, Result};

/// Index pair and difference at one divisor point.
#[derive(Clone, Debug)]
pub struct PointDelta {
    pub index_f: Scalar,
    pub index_g: Scalar,
    /// Sign convention: second row minus first, i.e. I(G) - I(F).
    pub delta: Scalar,
}

impl PointDelta {
    pub fn is_collinear(&self) -> bool {
        self.delta.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivisorClass {
    Collinear,
    NonCollinear,
    PurelyNonCollinear,
}

/// Per-divisor table of index differences, aligned with the graph's points.
#[derive(Clone, Debug)]
pub struct DivisorDelta {
    pub divisor: usize,
    pub points: Vec<PointDelta>,
}

impl DivisorDelta {
    pub fn class(&self) -> DivisorClass {
        let nc = self.points.iter().filter(|p| !p.is_collinear()).count();
        if nc == 0 {
            DivisorClass::Collinear
        } else if nc == self.points.len() {
            DivisorClass::PurelyNonCollinear
        } else {
            DivisorClass::NonCollinear
        }
    }

    pub fn is_non_collinear(&self) -> bool {
        self.class() != DivisorClass::Collinear
    }

    pub fn collinear_points(&self) -> Vec<usize> {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_collinear())
            .map(|(l, _)| l)
            .collect()
    }

    pub fn non_collinear_points(&self) -> Vec<usize> {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_collinear())
            .map(|(l, _)| l)
            .collect()
    }

    pub fn delta_sum(&self) -> Scalar {
        self.points
            .iter()
            .fold(Scalar::zero(), |acc, p| acc.add_ref(&p.delta))
    }

    pub fn delta_sum_over_non_collinear(&self) -> Scalar {
        self.points
            .iter()
            .filter(|p| !p.is_collinear())
            .fold(Scalar::zero(), |acc, p| acc.add_ref(&p.delta))
    }
}

/// Index differences for the whole graph.
#[derive(Clone, Debug)]
pub struct DeltaTable {
    pub rows: Vec<DivisorDelta>,
}

impl DeltaTable {
    pub fn row(&self, divisor: usize) -> &DivisorDelta {
        &self.rows[divisor]
    }
}

/// The rational function of a divisor: M_E(z) = sum_l Delta_l / (z - c_l),
/// with its zero structure. Zeros are kept as squarefree bundles; they are
/// never split into individual roots.
#[derive(Clone, Debug)]
pub struct MeFunction {
    pub divisor: usize,
    /// Unreduced numerator sum_l Delta_l prod_{j != l} (z - c_j).
    pub raw_numerator: UPoly,
    /// prod_l (z - c_l).
    pub denominator: UPoly,
    /// Reduced form.
    pub rational: RationalFunction,
    /// Squarefree bundles (factor, multiplicity) of the reduced numerator.
    pub zero_bundles: Vec<(UPoly, usize)>,
    /// Zero multiplicity of the reduced numerator at each graph point.
    pub t_at_point: Vec<usize>,
    /// t(E): total number of zeros with multiplicity.
    pub t_total: usize,
    /// t*(E): zeros not located at collinear points.
    pub t_star: usize,
    pub identically_zero: bool,
}

impl MeFunction {
    /// tau_E(P) for a graph point: t_P on M(E), -1 on N(E), 0 elsewhere.
    pub fn tau_at_point(&self, row: &DivisorDelta, l: usize) -> i64 {
        if !row.points[l].is_collinear() {
            -1
        } else {
            self.t_at_point[l] as i64
        }
    }
}

/// Assemble M_E(z) from the delta row and the point coordinates.
pub fn me_function(graph: &DualGraph, row: &DivisorDelta) -> Result<MeFunction> {
    let pts = &graph.divisors[row.divisor].points;
    let coords: Vec<Scalar> = pts.iter().map(|p| p.coord.clone()).collect();
    me_function_from(&coords, row)
}

/// Assemble M_E(z) from explicit point coordinates.
pub fn me_function_from(coords: &[Scalar], row: &DivisorDelta) -> Result<MeFunction> {
    let mut denominator = UPoly::one();
    for c in coords {
        denominator = denominator.mul(&UPoly::linear_root(c));
    }
    let mut raw = UPoly::zero();
    for (l, pd) in row.points.iter().enumerate() {
        if pd.delta.is_zero() {
            continue;
        }
        let mut term = UPoly::constant(pd.delta.clone());
        for (j, c) in coords.iter().enumerate() {
            if j != l {
                term = term.mul(&UPoly::linear_root(c));
            }
        }
        raw = raw.add(&term);
    }
    let identically_zero = raw.is_zero();
    let rational = RationalFunction::new(raw.clone(), denominator.clone())?;
    let (zero_bundles, t_total) = if identically_zero {
        (vec![], 0)
    } else {
        let dec = rational.num.squarefree_decomposition();
        let t: usize = dec
            .iter()
            .map(|(f, k)| f.degree().unwrap_or(0) * k)
            .sum();
        (dec, t)
    };
    let t_at_point: Vec<usize> = if identically_zero {
        vec![0; coords.len()]
    } else {
        coords
            .iter()
            .map(|c| rational.num.root_multiplicity(c))
            .collect()
    };
    let collinear_mass: usize = row
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_collinear())
        .map(|(l, _)| t_at_point[l])
        .sum();
    let t_star = t_total - collinear_mass;
    Ok(MeFunction {
        divisor: row.divisor,
        raw_numerator: raw,
        denominator,
        rational,
        zero_bundles,
        t_at_point,
        t_total,
        t_star,
        identically_zero,
    })
}

/// Structural facts about M_E for a non-collinear divisor: zeros avoid
/// non-collinear points, #N >= t + 1, with equality when the deltas over
/// the non-collinear points do not cancel.
pub fn validate_me(row: &DivisorDelta, me: &MeFunction) -> Result<()> {
    if !row.is_non_collinear() {
        return Ok(());
    }
    let n_count = row.non_collinear_points().len();
    for l in row.non_collinear_points() {
        if me.t_at_point[l] != 0 {
            return Err(Error::TheoremCheck(format!(
                "divisor {}: zero of M at a non-collinear point",
                row.divisor
            )));
        }
    }
    if n_count < me.t_total + 1 {
        return Err(Error::TheoremCheck(format!(
            "divisor {}: {} non-collinear points but t(E) = {}",
            row.divisor, n_count, me.t_total
        )));
    }
    if !row.delta_sum_over_non_collinear().is_zero() && n_count != me.t_total + 1 {
        return Err(Error::TheoremCheck(format!(
            "divisor {}: expected #N = t + 1 with non-cancelling deltas",
            row.divisor
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::Branch;
    use crate::scalar::Scalar;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn pd(f: Scalar, g: Scalar) -> PointDelta {
        let delta = g.sub_ref(&f);
        PointDelta {
            index_f: f,
            index_g: g,
            delta,
        }
    }

    /// Two points at 0 and 1 with deltas 1 and -1:
    /// M(z) = 1/z - 1/(z-1) = -1/(z(z-1)), no zeros, #N = 2 >= t+1.
    #[test]
    fn partial_fraction_identity() {
        let b0 = Branch::smooth(vec![(1, s(0)), (2, s(5))], 16, "b0").unwrap();
        let b1 = Branch::smooth(vec![(1, s(1))], 16, "b1").unwrap();
        let graph = DualGraph::build(vec![b0, b1]).unwrap();
        let row = DivisorDelta {
            divisor: 0,
            points: vec![
                pd(Scalar::zero(), s(1)),
                pd(Scalar::zero(), s(-1)),
            ],
        };
        let me = me_function(&graph, &row).unwrap();
        assert_eq!(me.rational.num, UPoly::constant(s(-1)));
        assert_eq!(me.t_total, 0);
        assert_eq!(me.t_star, 0);
        validate_me(&row, &me).unwrap();
    }

    #[test]
    fn classification() {
        let row = DivisorDelta {
            divisor: 0,
            points: vec![pd(s(1), s(1)), pd(s(1), s(2))],
        };
        assert_eq!(row.class(), DivisorClass::NonCollinear);
        let all0 = DivisorDelta {
            divisor: 0,
            points: vec![pd(s(1), s(1))],
        };
        assert_eq!(all0.class(), DivisorClass::Collinear);
        let pure = DivisorDelta {
            divisor: 0,
            points: vec![pd(s(0), s(2)), pd(s(1), s(2))],
        };
        assert_eq!(pure.class(), DivisorClass::PurelyNonCollinear);
    }
}
