// SPDX-License-Identifier: Apache-2.0

//! Distances to the optimum and attracting-region membership.

use crate::flows::{GateProblem, ObservableProblem, SimplexPoint, UnitaryObservableFlow};
use crate::matcore::{ComplexMatrix, Unitary};
use crate::scalar::Real;

/// `‖x − x(∞)‖₂` with `x(∞) = (1/k)(1, …, 1, 0, …, 0)`.
pub fn distance_observable<T: Real>(x: &SimplexPoint<T>, problem: &ObservableProblem<T>) -> T {
    let k = problem.multiplicity();
    let w = T::one() / T::from_count(k);
    x.as_slice()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let d = if i < k { v - w } else { v };
            d * d
        })
        .sum::<T>()
        .sqrt()
}

/// `‖U' − I‖_F`.
pub fn distance_gate<T: Real>(u_prime: &Unitary<T>) -> T {
    (u_prime.matrix() - &ComplexMatrix::identity(u_prime.dim())).frobenius_norm()
}

/// `Σ_j λ_j x_j > λ_{k+1}`: every population outside the top eigenspace is
/// decaying. Always true when the whole spectrum is degenerate.
pub fn in_attracting_region_observable<T: Real>(
    x: &SimplexPoint<T>,
    problem: &ObservableProblem<T>,
) -> bool {
    let k = problem.multiplicity();
    let lambda = problem.eigenvalues();
    if k >= lambda.len() {
        return true;
    }
    let mean: T = x.as_slice().iter().zip(lambda).map(|(&a, &b)| a * b).sum();
    mean > lambda[k]
}

/// Attracting-region membership for the state type of each flow.
pub trait AttractingRegion<T: Real> {
    type Point;
    fn in_attracting_region(&self, point: &Self::Point) -> bool;
}

impl<T: Real> AttractingRegion<T> for ObservableProblem<T> {
    type Point = SimplexPoint<T>;
    fn in_attracting_region(&self, x: &SimplexPoint<T>) -> bool {
        in_attracting_region_observable(x, self)
    }
}

impl<T: Real> AttractingRegion<T> for UnitaryObservableFlow<'_, T> {
    type Point = Unitary<T>;
    fn in_attracting_region(&self, u: &Unitary<T>) -> bool {
        in_attracting_region_observable(&self.problem().populations(u), self.problem())
    }
}

/// With `A = I` the region is all of `U(N)`.
impl<T: Real> AttractingRegion<T> for GateProblem<T> {
    type Point = Unitary<T>;
    fn in_attracting_region(&self, _u: &Unitary<T>) -> bool {
        true
    }
}
