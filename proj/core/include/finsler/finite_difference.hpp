// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "finsler/jet.hpp"

namespace finsler {

using RealFunction = std::function<double(std::span<const double>)>;

/// Mixed partial d^idx f at `point` by a tensor product of central
/// differences (second order per axis) plus one Richardson step (h, h/2).
/// Any finsler::Error raised by `f` on the stencil becomes
/// StencilOutOfDomain.
double fd_partial(const RealFunction& f, std::span<const double> point, const MultiIndex& idx, double h);

enum class Side { Plus, Minus };

/// One-sided derivative of order `derivative_order` at t0 using only nodes
/// t0 + side*j*h for j = 1..nodes (t0 itself is never evaluated), followed by
/// one Richardson step. Intended for limits such as f'''(0+) of functions
/// that are singular or non-smooth at t0.
double fd_one_sided(const std::function<double(double)>& f, double t0, int derivative_order, double h,
                    Side side, int nodes = 7);

/// Finite-difference weights (Fornberg) for the m-th derivative at `at` on
/// arbitrary distinct nodes.
std::vector<double> fornberg_weights(double at, std::span<const double> nodes, int m);

}  // namespace finsler
