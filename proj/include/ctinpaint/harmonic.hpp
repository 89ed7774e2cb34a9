#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "ctinpaint/errors.hpp"
#include "ctinpaint/raster.hpp"

namespace ctinpaint {

enum class HarmonicNode : std::uint8_t { Outside, Dirichlet, Free };

struct HarmonicProblem {
  /// Role of each pixel. Free pixels must only touch Dirichlet or Free pixels.
  Grid<HarmonicNode> nodes;
  /// Prescribed values at Dirichlet nodes.
  Grid<double> dirichlet;
};

struct HarmonicSolution {
  Grid<double> values;
  double max_residual = 0.0;
  int refinement_steps = 0;
};

/// Five-point Laplacian residual sum_{4-nbrs}(T(y) - T(x)) at a free pixel.
/// Neighbors outside the image are dropped (zero-flux image border).
inline double five_point_residual(const Grid<HarmonicNode>& nodes, const Grid<double>& values,
                                  int i, int j) {
  double r = 0.0;
  for (PixelCoord o : kNeighbors4) {
    const int ni = i + o.i, nj = j + o.j;
    if (!nodes.contains(ni, nj))
      continue;
    r += values(ni, nj) - values(i, j);
  }
  return r;
}

/// Solves the discrete Laplace equation on the free nodes with a sparse
/// Cholesky factorization, followed by iterative refinement until the largest
/// five-point residual is at most `tolerance`.
inline HarmonicSolution solve_harmonic(const HarmonicProblem& problem, double tolerance = 1e-8,
                                       int max_refinements = 20) {
  const auto& nodes = problem.nodes;
  const int w = nodes.width(), h = nodes.height();
  Grid<long> unknown(w, h, -1);
  long n = 0;
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      if (nodes(i, j) == HarmonicNode::Free)
        unknown(i, j) = n++;

  HarmonicSolution sol{Grid<double>(w, h, std::numeric_limits<double>::quiet_NaN()), 0.0, 0};
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      if (nodes(i, j) == HarmonicNode::Dirichlet)
        sol.values(i, j) = problem.dirichlet(i, j);
  if (n == 0)
    return sol;

  // Negated Laplacian: symmetric positive definite whenever every connected
  // group of free nodes touches a Dirichlet node. Check that up front; the
  // factorization does not reliably flag a singular semidefinite system.
  {
    Grid<std::uint8_t> seen(w, h, 0);
    std::vector<PixelCoord> stack;
    for (int i0 = 0; i0 < h; ++i0)
      for (int j0 = 0; j0 < w; ++j0) {
        if (unknown(i0, j0) < 0 || seen(i0, j0))
          continue;
        bool anchored = false;
        seen(i0, j0) = 1;
        stack.push_back({i0, j0});
        while (!stack.empty()) {
          const PixelCoord p = stack.back();
          stack.pop_back();
          for (PixelCoord o : kNeighbors4) {
            const int ni = p.i + o.i, nj = p.j + o.j;
            if (!nodes.contains(ni, nj))
              continue;
            if (nodes(ni, nj) == HarmonicNode::Dirichlet)
              anchored = true;
            else if (nodes(ni, nj) == HarmonicNode::Free && !seen(ni, nj)) {
              seen(ni, nj) = 1;
              stack.push_back({ni, nj});
            }
          }
        }
        if (!anchored)
          throw SolverError("harmonic system is singular: free region at (" +
                            std::to_string(i0) + "," + std::to_string(j0) +
                            ") has no Dirichlet data");
      }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * 5);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const long row = unknown(i, j);
      if (row < 0)
        continue;
      double degree = 0.0;
      for (PixelCoord o : kNeighbors4) {
        const int ni = i + o.i, nj = j + o.j;
        if (!nodes.contains(ni, nj))
          continue;
        degree += 1.0;
        switch (nodes(ni, nj)) {
        case HarmonicNode::Free:
          triplets.emplace_back(row, unknown(ni, nj), -1.0);
          break;
        case HarmonicNode::Dirichlet:
          rhs[row] += problem.dirichlet(ni, nj);
          break;
        case HarmonicNode::Outside:
          throw InvalidArgument("free node adjacent to a pixel without a value");
        }
      }
      triplets.emplace_back(row, row, degree);
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  if (solver.info() != Eigen::Success)
    throw SolverError("harmonic system is singular (a free region has no Dirichlet data)");
  Eigen::VectorXd x = solver.solve(rhs);
  if (solver.info() != Eigen::Success || !x.allFinite())
    throw SolverError("harmonic solve failed (a free region may lack Dirichlet data)");

  auto scatter = [&] {
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j)
        if (unknown(i, j) >= 0)
          sol.values(i, j) = x[unknown(i, j)];
  };
  auto max_residual = [&] {
    double m = 0.0;
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j)
        if (unknown(i, j) >= 0)
          m = std::max(m, std::abs(five_point_residual(nodes, sol.values, i, j)));
    return m;
  };

  scatter();
  sol.max_residual = max_residual();
  while (sol.max_residual > tolerance && sol.refinement_steps < max_refinements) {
    const Eigen::VectorXd r = rhs - a * x;
    x += solver.solve(r);
    scatter();
    sol.max_residual = max_residual();
    ++sol.refinement_steps;
  }
  if (!(sol.max_residual <= tolerance))
    throw SolverError("harmonic solve did not reach the residual tolerance");
  return sol;
}

} // namespace ctinpaint
