/**
 * The structured model file format: JSON with every scalar an exact rational
 * string ("p" or "p/q"), except density matrices which may also use decimal
 * entries.  Loading validates all model invariants; serialization is
 * canonical, so parse-then-serialize is byte-stable.
 *
 * Kinds: test_space, polytope_v, polytope_h, affine_map, tensor_space,
 * stochastic_matrix, density_matrix.
 */

#pragma once

#include "gptk/quantum.hpp"
#include "gptk/stochastic.hpp"
#include "gptk/tensor.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace gptk {

using Json = nlohmann::ordered_json;

struct LoadedModel {
    std::string kind;
    std::string name;
    std::variant<StateSpace, AffineMap, TensorSpace, StochasticMatrix, quantum::DensityMatrix> value;

    const StateSpace& state_space() const;
    const AffineMap& affine_map() const;
    const TensorSpace& tensor_space() const;
    const StochasticMatrix& stochastic_matrix() const;
    const quantum::DensityMatrix& density_matrix() const;
};

LoadedModel parse_model(const Json& j);
LoadedModel load_model(const std::string& path);

/** Loads a stochastic matrix from a whitespace grid (row per line) or a model file. */
StochasticMatrix load_stochastic(const std::string& path);

Json serialize_state_space(const StateSpace& s, const std::string& name = "");
Json serialize_affine_map(const AffineMap& m, const std::string& name = "");
Json serialize_tensor_space(const TensorSpace& t, const std::string& name = "");
Json serialize_stochastic(const StochasticMatrix& m, const std::string& name = "");
Json serialize_density(const quantum::DensityMatrix& d, const std::string& name = "");
Json serialize_model(const LoadedModel& m);

Json json_vec(const Vec& v);
Vec parse_vec(const Json& j);
Json json_functional(const AffineFunctional& f);
AffineFunctional parse_functional(const Json& j);

/** FNV-1a 64-bit digest, hex; used to echo input identities into reports. */
std::string digest_hex(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace gptk
