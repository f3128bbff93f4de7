#pragma once

// Internal helpers for analytic tail descriptors. All functions take
// t = log n so that degrees beyond double range stay addressable.

#include "sphgrf/spectrum.hpp"

namespace sgrf::detail {

/// Checks parameter ranges and that A(n) strictly decreases for n >= start.
void validate_tail(const TailDescriptor& tail, double start);

/// log A(e^t); -infinity for an empty tail.
double tail_log_mass(const TailDescriptor& tail, double t);

/// log of a(n) = A(n) - A(n+1) at real n >= start.
double tail_log_coefficient(const TailDescriptor& tail, double n);

/// log of n * a(n) at n = e^t. Uses the exact difference for moderate n and
/// the derivative -n A'(n) once 1/n is below double resolution.
double tail_log_density(const TailDescriptor& tail, double t);

/// log (1 + n(n + 2 lambda)) at n = e^t.
double log_laplace_factor(double t, double lambda);

}  // namespace sgrf::detail
