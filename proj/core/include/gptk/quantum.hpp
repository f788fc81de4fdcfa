/**
 * Floating-point density-matrix cross-checks: distinguishability of quantum
 * states is vanishing of the operator product, jointly distinguishable sets
 * are pairwise so, and convex mixtures of a jointly distinguishable set
 * commute.  Everything here is double precision with a fixed 1e-9 tolerance;
 * this module deliberately stays outside the exact-arithmetic core.
 */

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace gptk::quantum {

inline constexpr double kTol = 1e-9;

struct DensityMatrix {
    Eigen::MatrixXcd rho;

    std::size_t dim() const { return static_cast<std::size_t>(rho.rows()); }

    /**
     * Validates Hermiticity, unit trace and positivity, all within kTol.
     * Throws std::invalid_argument otherwise.
     */
    static DensityMatrix make(Eigen::MatrixXcd m);
};

double operator_norm(const Eigen::MatrixXcd& m);

/** True iff ||rho rho'|| < kTol (equivalently, orthogonal supports). */
bool are_distinguishable(const DensityMatrix& a, const DensityMatrix& b);

/** The projector onto the support of rho: the effect certifying distinguishability. */
Eigen::MatrixXcd distinguishing_witness(const DensityMatrix& rho);

bool jointly_distinguishable(const std::vector<DensityMatrix>& set);

bool pairwise_commuting(const std::vector<DensityMatrix>& set);

/** Rank of the support at the kTol eigenvalue threshold. */
std::size_t support_rank(const DensityMatrix& rho);

}  // namespace gptk::quantum
