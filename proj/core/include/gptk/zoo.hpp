/**
 * The worked example models: classical simplices, the two-test square, the
 * three-test firefly loop, the row/column test space of 3x3 doubly
 * stochastic matrices, and a couple of qubit density matrices for the
 * quantum cross-check.
 */

#pragma once

#include "gptk/io.hpp"

namespace gptk::zoo {

/** One test with n named outcomes: the classical n-outcome simplex. */
StateSpace simplex(std::size_t n);

/** Two disjoint binary tests; the state space is a square. */
StateSpace square();

/** Three three-outcome tests pasted in a loop; five pure states. */
StateSpace firefly();

/** Rows and columns of a 3x3 array; doubly stochastic matrices. */
StateSpace birkhoff();

/** A single one-outcome test: the one-point state space. */
StateSpace point();

quantum::DensityMatrix qubit_zero();
quantum::DensityMatrix qubit_one();
quantum::DensityMatrix qubit_plus();

/** The example models as (filename, canonical json) pairs. */
std::vector<std::pair<std::string, Json>> model_files();

}  // namespace gptk::zoo
