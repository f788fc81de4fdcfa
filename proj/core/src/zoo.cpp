#include "gptk/zoo.hpp"

namespace gptk::zoo {

StateSpace simplex(std::size_t n)
{
    if (n == 0)
        throw invalid_model("simplex: need at least one outcome");
    TestSpace t;
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < n; ++i) {
        t.outcomes.push_back("x" + std::to_string(i));
        all.push_back(i);
    }
    t.tests.push_back(all);
    return state_space_from_test_space(t);
}

StateSpace square()
{
    TestSpace t;
    t.outcomes = {"a00", "a01", "a10", "a11"};
    t.tests = {{0, 1}, {2, 3}};
    return state_space_from_test_space(t);
}

StateSpace firefly()
{
    TestSpace t;
    t.outcomes = {"a", "x", "b", "y", "c", "z"};
    t.tests = {{0, 1, 2}, {2, 3, 4}, {4, 5, 0}};
    return state_space_from_test_space(t);
}

StateSpace birkhoff()
{
    TestSpace t;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            t.outcomes.push_back("m" + std::to_string(r) + std::to_string(c));
    for (std::size_t r = 0; r < 3; ++r)
        t.tests.push_back({3 * r, 3 * r + 1, 3 * r + 2});
    for (std::size_t c = 0; c < 3; ++c)
        t.tests.push_back({c, 3 + c, 6 + c});
    return state_space_from_test_space(t);
}

StateSpace point()
{
    TestSpace t;
    t.outcomes = {"x"};
    t.tests = {{0}};
    return state_space_from_test_space(t);
}

quantum::DensityMatrix qubit_zero()
{
    Eigen::MatrixXcd m(2, 2);
    m << 1, 0, 0, 0;
    return quantum::DensityMatrix::make(m);
}

quantum::DensityMatrix qubit_one()
{
    Eigen::MatrixXcd m(2, 2);
    m << 0, 0, 0, 1;
    return quantum::DensityMatrix::make(m);
}

quantum::DensityMatrix qubit_plus()
{
    Eigen::MatrixXcd m(2, 2);
    m << 0.5, 0.5, 0.5, 0.5;
    return quantum::DensityMatrix::make(m);
}

std::vector<std::pair<std::string, Json>> model_files()
{
    std::vector<std::pair<std::string, Json>> files;
    files.emplace_back("delta3.json", serialize_state_space(simplex(3), "delta3"));
    files.emplace_back("square.json", serialize_state_space(square(), "square"));
    files.emplace_back("qubit_plus.json", serialize_density(qubit_plus(), "qubit_plus"));
    files.emplace_back("firefly.json", serialize_state_space(firefly(), "firefly"));
    files.emplace_back("birkhoff.json", serialize_state_space(birkhoff(), "birkhoff"));
    return files;
}

}  // namespace gptk::zoo
