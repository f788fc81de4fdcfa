#include "gptk/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace gptk {

namespace {

[[noreturn]] void bad(const std::string& msg)
{
    throw invalid_model("model file: " + msg);
}

Rational rat(const Json& j)
{
    if (!j.is_string())
        bad("expected a rational string, got " + j.dump());
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        bad(e.what());
    }
}

double decimal_or_rational(const Json& j)
{
    if (!j.is_string())
        bad("expected a numeric string, got " + j.dump());
    const std::string s = j.get<std::string>();
    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
        s.find('E') != std::string::npos) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size())
                bad("malformed decimal literal: " + s);
            return v;
        } catch (const std::exception&) {
            bad("malformed decimal literal: " + s);
        }
    }
    return static_cast<double>(parse_rational(s));
}

StateSpace parse_test_space(const Json& j)
{
    TestSpace t;
    for (const auto& o : j.at("outcomes"))
        t.outcomes.push_back(o.get<std::string>());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < t.outcomes.size(); ++i) {
        if (!index.emplace(t.outcomes[i], i).second)
            bad("duplicate outcome name '" + t.outcomes[i] + "'");
    }
    for (const auto& test : j.at("tests")) {
        std::vector<std::size_t> ids;
        for (const auto& o : test) {
            auto it = index.find(o.get<std::string>());
            if (it == index.end())
                bad("test mentions unknown outcome '" + o.get<std::string>() + "'");
            ids.push_back(it->second);
        }
        t.tests.push_back(std::move(ids));
    }
    return state_space_from_test_space(t);
}

AffineFunctional unit_or_default(const Json& j, std::size_t dim)
{
    if (!j.contains("unit"))
        return AffineFunctional::constant_one(dim);
    AffineFunctional u = parse_functional(j.at("unit"));
    if (u.dim() != dim)
        bad("unit dimension mismatch");
    return u;
}

std::vector<std::string> labels_or_default(const Json& j)
{
    std::vector<std::string> labels;
    if (j.contains("labels"))
        for (const auto& l : j.at("labels"))
            labels.push_back(l.get<std::string>());
    return labels;
}

StateSpace parse_polytope_v(const Json& j)
{
    const std::size_t d = j.at("ambient_dim").get<std::size_t>();
    std::vector<Vec> verts;
    for (const auto& row : j.at("vertices")) {
        Vec v = parse_vec(row);
        if (v.size() != d)
            bad("vertex dimension mismatch");
        verts.push_back(std::move(v));
    }
    Polytope p = Polytope::from_vertices(d, verts);
    if (p.vertices().size() != verts.size())
        bad("vertex list contains duplicates");

    // Each listed vertex must be extreme: not a convex combination of the others.
    const auto& vs = p.vertices();
    for (std::size_t k = 0; k < vs.size() && vs.size() > 1; ++k) {
        ConstraintSystem sys(vs.size() - 1);
        for (std::size_t c = 0; c < d; ++c) {
            Vec row;
            for (std::size_t i = 0; i < vs.size(); ++i)
                if (i != k)
                    row.push_back(vs[i][c]);
            sys.add_eq(std::move(row), vs[k][c]);
        }
        sys.add_eq(Vec(vs.size() - 1, Rational(1)), Rational(1));
        for (std::size_t i = 0; i + 1 < vs.size(); ++i)
            sys.mark_nonnegative(i);
        if (sys.solve().feasible)
            bad("listed vertex " + std::to_string(k) + " is not extreme");
    }
    return StateSpace::make(std::move(p), unit_or_default(j, d), labels_or_default(j));
}

StateSpace parse_polytope_h(const Json& j)
{
    const std::size_t d = j.at("ambient_dim").get<std::size_t>();
    HRep h;
    if (j.contains("inequalities"))
        for (const auto& e : j.at("inequalities")) {
            Vec n = parse_vec(e.at("normal"));
            if (n.size() != d)
                bad("inequality normal dimension mismatch");
            h.inequalities.push_back({std::move(n), rat(e.at("offset"))});
        }
    if (j.contains("equalities"))
        for (const auto& e : j.at("equalities")) {
            Vec n = parse_vec(e.at("normal"));
            if (n.size() != d)
                bad("equality normal dimension mismatch");
            h.equalities.push_back({std::move(n), rat(e.at("offset"))});
        }
    return StateSpace::make(Polytope::from_hrep(d, std::move(h)), unit_or_default(j, d),
                            labels_or_default(j));
}

AffineMap parse_affine_map(const Json& j)
{
    const std::size_t sd = j.at("source_dim").get<std::size_t>();
    const std::size_t td = j.at("target_dim").get<std::size_t>();
    const auto& rows = j.at("matrix");
    if (rows.size() != td + 1)
        bad("affine map needs target_dim + 1 matrix rows");
    Mat hom(td + 1, sd + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        Vec row = parse_vec(rows[r]);
        if (row.size() != sd + 1)
            bad("affine map rows need source_dim + 1 entries");
        hom.set_row(r, row);
    }
    return AffineMap::from_hom(sd, td, std::move(hom));
}

TensorSpace parse_tensor_space(const Json& j)
{
    const std::string kind = j.at("tensor").get<std::string>();
    std::vector<StateSpace> factors;
    for (const auto& f : j.at("factors")) {
        LoadedModel m = parse_model(f);
        if (!std::holds_alternative<StateSpace>(m.value))
            bad("tensor factors must be state spaces");
        factors.push_back(std::get<StateSpace>(std::move(m.value)));
    }
    if (kind == "max")
        return TensorSpace::max_tensor(std::move(factors));
    if (kind == "min")
        return TensorSpace::min_tensor(std::move(factors));
    bad("unknown tensor kind '" + kind + "' (expected max or min)");
}

StochasticMatrix parse_stochastic(const Json& j)
{
    const std::size_t n = j.at("size").get<std::size_t>();
    const auto& cols = j.at("columns");
    if (cols.size() != n)
        bad("stochastic matrix needs exactly 'size' columns");
    Mat m(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        Vec col = parse_vec(cols[c]);
        if (col.size() != n)
            bad("stochastic column length mismatch");
        for (std::size_t r = 0; r < n; ++r)
            m.at(r, c) = col[r];
    }
    return StochasticMatrix::make(std::move(m));
}

quantum::DensityMatrix parse_density(const Json& j)
{
    const std::size_t d = j.at("dim").get<std::size_t>();
    const auto& rows = j.at("entries");
    if (rows.size() != d)
        bad("density matrix needs 'dim' rows");
    Eigen::MatrixXcd m(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        if (rows[r].size() != 2 * d)
            bad("density rows interleave re,im for each of 'dim' entries");
        for (std::size_t c = 0; c < d; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {
                decimal_or_rational(rows[r][2 * c]), decimal_or_rational(rows[r][2 * c + 1])};
    }
    try {
        return quantum::DensityMatrix::make(std::move(m));
    } catch (const std::invalid_argument& e) {
        bad(e.what());
    }
}

}  // namespace

const StateSpace& LoadedModel::state_space() const
{
    if (const auto* p = std::get_if<StateSpace>(&value))
        return *p;
    throw invalid_model("expected a state-space model, got kind '" + kind + "'");
}

const AffineMap& LoadedModel::affine_map() const
{
    if (const auto* p = std::get_if<AffineMap>(&value))
        return *p;
    throw invalid_model("expected an affine-map model, got kind '" + kind + "'");
}

const TensorSpace& LoadedModel::tensor_space() const
{
    if (const auto* p = std::get_if<TensorSpace>(&value))
        return *p;
    throw invalid_model("expected a tensor-space model, got kind '" + kind + "'");
}

const StochasticMatrix& LoadedModel::stochastic_matrix() const
{
    if (const auto* p = std::get_if<StochasticMatrix>(&value))
        return *p;
    throw invalid_model("expected a stochastic-matrix model, got kind '" + kind + "'");
}

const quantum::DensityMatrix& LoadedModel::density_matrix() const
{
    if (const auto* p = std::get_if<quantum::DensityMatrix>(&value))
        return *p;
    throw invalid_model("expected a density-matrix model, got kind '" + kind + "'");
}

LoadedModel parse_model(const Json& j)
{
    if (!j.is_object() || !j.contains("kind"))
        bad("top level must be an object with a 'kind' field");
    LoadedModel m;
    m.kind = j.at("kind").get<std::string>();
    if (j.contains("name"))
        m.name = j.at("name").get<std::string>();
    if (m.kind == "test_space")
        m.value = parse_test_space(j);
    else if (m.kind == "polytope_v")
        m.value = parse_polytope_v(j);
    else if (m.kind == "polytope_h")
        m.value = parse_polytope_h(j);
    else if (m.kind == "affine_map")
        m.value = parse_affine_map(j);
    else if (m.kind == "tensor_space")
        m.value = parse_tensor_space(j);
    else if (m.kind == "stochastic_matrix")
        m.value = parse_stochastic(j);
    else if (m.kind == "density_matrix")
        m.value = parse_density(j);
    else
        bad("unknown kind '" + m.kind + "'");
    return m;
}

LoadedModel load_model(const std::string& path)
{
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_model(path + ": " + e.what());
    }
    try {
        return parse_model(j);
    } catch (const invalid_model& e) {
        throw invalid_model(path + ": " + e.what());
    }
}

StochasticMatrix load_stochastic(const std::string& path)
{
    const std::string text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return load_model(path).stochastic_matrix();

    std::vector<Vec> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        Vec row;
        std::string tok;
        while (ls >> tok)
            row.push_back(parse_rational(tok));
        if (!row.empty())
            rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw invalid_model(path + ": empty matrix grid");
    for (const Vec& r : rows)
        if (r.size() != rows.size())
            throw invalid_model(path + ": matrix grid is not square");
    return StochasticMatrix::make(Mat::from_rows(rows));
}

Json json_vec(const Vec& v)
{
    Json a = Json::array();
    for (const Rational& x : v)
        a.push_back(format_rational(x));
    return a;
}

Vec parse_vec(const Json& j)
{
    if (!j.is_array())
        bad("expected an array of rational strings");
    Vec v;
    for (const auto& e : j)
        v.push_back(rat(e));
    return v;
}

Json json_functional(const AffineFunctional& f)
{
    Json j;
    j["coeffs"] = json_vec(f.coeffs);
    j["constant"] = format_rational(f.constant);
    return j;
}

AffineFunctional parse_functional(const Json& j)
{
    return AffineFunctional(parse_vec(j.at("coeffs")), rat(j.at("constant")));
}

Json serialize_state_space(const StateSpace& s, const std::string& name)
{
    Json j;
    if (s.provenance()) {
        j["kind"] = "test_space";
        if (!name.empty())
            j["name"] = name;
        j["outcomes"] = s.provenance()->outcomes;
        Json tests = Json::array();
        for (const auto& t : s.provenance()->tests) {
            Json one = Json::array();
            for (std::size_t idx : t)
                one.push_back(s.provenance()->outcomes[idx]);
            tests.push_back(one);
        }
        j["tests"] = tests;
        return j;
    }
    j["kind"] = "polytope_v";
    if (!name.empty())
        j["name"] = name;
    j["ambient_dim"] = s.dim();
    Json verts = Json::array();
    for (const Vec& v : s.geometry().vertices())
        verts.push_back(json_vec(v));
    j["vertices"] = verts;
    j["unit"] = json_functional(s.unit());
    if (!s.coordinate_labels().empty())
        j["labels"] = s.coordinate_labels();
    return j;
}

Json serialize_affine_map(const AffineMap& m, const std::string& name)
{
    Json j;
    j["kind"] = "affine_map";
    if (!name.empty())
        j["name"] = name;
    j["source_dim"] = m.source_dim;
    j["target_dim"] = m.target_dim;
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.hom.rows; ++r)
        rows.push_back(json_vec(m.hom.row(r)));
    j["matrix"] = rows;
    return j;
}

Json serialize_tensor_space(const TensorSpace& t, const std::string& name)
{
    Json j;
    j["kind"] = "tensor_space";
    if (!name.empty())
        j["name"] = name;
    j["tensor"] = t.kind() == TensorKind::Maximal ? "max" : "min";
    Json factors = Json::array();
    for (const StateSpace& f : t.factors())
        factors.push_back(serialize_state_space(f));
    j["factors"] = factors;
    return j;
}

Json serialize_stochastic(const StochasticMatrix& m, const std::string& name)
{
    Json j;
    j["kind"] = "stochastic_matrix";
    if (!name.empty())
        j["name"] = name;
    j["size"] = m.size();
    Json cols = Json::array();
    for (std::size_t c = 0; c < m.size(); ++c) {
        Vec col(m.size());
        for (std::size_t r = 0; r < m.size(); ++r)
            col[r] = m.m.at(r, c);
        cols.push_back(json_vec(col));
    }
    j["columns"] = cols;
    return j;
}

Json serialize_density(const quantum::DensityMatrix& d, const std::string& name)
{
    Json j;
    j["kind"] = "density_matrix";
    if (!name.empty())
        j["name"] = name;
    j["dim"] = d.dim();
    Json rows = Json::array();
    std::ostringstream fmt;
    fmt.precision(17);
    for (std::size_t r = 0; r < d.dim(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < d.dim(); ++c) {
            const auto z = d.rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            for (double part : {z.real(), z.imag()}) {
                fmt.str("");
                fmt << part;
                row.push_back(fmt.str());
            }
        }
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j;
}

Json serialize_model(const LoadedModel& m)
{
    return std::visit(
        [&](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, StateSpace>)
                return serialize_state_space(v, m.name);
            else if constexpr (std::is_same_v<T, AffineMap>)
                return serialize_affine_map(v, m.name);
            else if constexpr (std::is_same_v<T, TensorSpace>)
                return serialize_tensor_space(v, m.name);
            else if constexpr (std::is_same_v<T, StochasticMatrix>)
                return serialize_stochastic(v, m.name);
            else
                return serialize_density(v, m.name);
        },
        m.value);
}

std::string digest_hex(const std::string& bytes)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << h;
    return out.str();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw invalid_model("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw invalid_model("cannot write file: " + path);
    out << content;
}

}  // namespace gptk
