#include "gptk/stochastic.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace gptk {

StochasticMatrix StochasticMatrix::make(Mat m)
{
    if (m.rows != m.cols)
        throw invalid_model("stochastic matrix must be square");
    for (std::size_t j = 0; j < m.cols; ++j) {
        Rational sum = 0;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (m.at(i, j) < 0)
                throw invalid_model("stochastic matrix has a negative entry");
            sum += m.at(i, j);
        }
        if (sum != 1)
            throw invalid_model("column " + std::to_string(j) + " sums to " +
                                format_rational(sum) + ", not 1");
    }
    return StochasticMatrix{std::move(m)};
}

namespace {

// Iterative Tarjan strongly connected components on edges i -> j iff M[i][j] != 0.
std::vector<std::vector<std::size_t>> scc(const Mat& m)
{
    const std::size_t n = m.rows;
    std::vector<long> index(n, -1), low(n, 0);
    std::vector<char> onstack(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> comps;
    long counter = 0;

    struct Frame {
        std::size_t v;
        std::size_t next_j;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != -1)
            continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        onstack[root] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            bool descended = false;
            while (f.next_j < n) {
                const std::size_t j = f.next_j++;
                if (m.at(f.v, j) == 0)
                    continue;
                if (index[j] == -1) {
                    index[j] = low[j] = counter++;
                    stack.push_back(j);
                    onstack[j] = 1;
                    call.push_back({j, 0});
                    descended = true;
                    break;
                }
                if (onstack[j])
                    low[f.v] = std::min(low[f.v], index[j]);
            }
            if (descended)
                continue;
            if (low[f.v] == index[f.v]) {
                std::vector<std::size_t> comp;
                for (;;) {
                    const std::size_t w = stack.back();
                    stack.pop_back();
                    onstack[w] = 0;
                    comp.push_back(w);
                    if (w == f.v)
                        break;
                }
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
            const std::size_t child = f.v;
            call.pop_back();
            if (!call.empty())
                low[call.back().v] = std::min(low[call.back().v], low[child]);
        }
    }
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

bool class_is_closed(const Mat& m, const std::vector<std::size_t>& cls)
{
    std::vector<char> in(m.rows, 0);
    for (std::size_t k : cls)
        in[k] = 1;
    for (std::size_t j : cls)
        for (std::size_t i = 0; i < m.rows; ++i)
            if (!in[i] && m.at(i, j) != 0)
                return false;
    return true;
}

}  // namespace

ClassStructure communicating_classes(const StochasticMatrix& M)
{
    ClassStructure cs;
    cs.classes = scc(M.m);
    const std::size_t k = cs.classes.size();
    const std::size_t n = M.size();

    std::vector<std::size_t> class_of(n, 0);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t i : cs.classes[a])
            class_of[i] = a;

    cs.closed.resize(k);
    for (std::size_t a = 0; a < k; ++a)
        cs.closed[a] = class_is_closed(M.m, cs.classes[a]);

    // Class-level access = reachability in the condensation (Warshall).
    cs.access.assign(k, std::vector<bool>(k, false));
    for (std::size_t a = 0; a < k; ++a)
        cs.access[a][a] = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (M.m.at(i, j) != 0)
                cs.access[class_of[i]][class_of[j]] = true;
    for (std::size_t mid = 0; mid < k; ++mid)
        for (std::size_t a = 0; a < k; ++a)
            if (cs.access[a][mid])
                for (std::size_t b = 0; b < k; ++b)
                    if (cs.access[mid][b])
                        cs.access[a][b] = true;
    return cs;
}

Vec stationary_distribution(const StochasticMatrix& M, const std::vector<std::size_t>& cls)
{
    if (cls.empty())
        throw invalid_model("stationary_distribution: empty class");
    if (!class_is_closed(M.m, cls))
        throw invalid_model("stationary_distribution: class is not closed");

    const std::size_t b = cls.size();
    Mat block(b, b);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j)
            block.at(i, j) = M.m.at(cls[i], cls[j]);
    if (scc(block).size() != 1)
        throw invalid_model("stationary_distribution: class is not irreducible");

    Mat shifted = block;
    for (std::size_t i = 0; i < b; ++i)
        shifted.at(i, i) -= 1;
    std::vector<Vec> null = nullspace_basis(shifted);
    if (null.size() != 1)
        throw internal_error("closed irreducible block has fixed space of dimension != 1");

    Vec v = null.front();
    Rational sum = std::accumulate(v.begin(), v.end(), Rational(0));
    if (sum == 0)
        throw internal_error("stationary vector with zero mass");
    v = vec_scale(Rational(1) / sum, v);
    for (const Rational& x : v)
        if (x <= 0)
            throw internal_error("stationary vector is not strictly positive on its class");

    Vec full(M.size(), Rational(0));
    for (std::size_t i = 0; i < b; ++i)
        full[cls[i]] = v[i];
    return full;
}

FixedBasis fixed_point_basis(const StochasticMatrix& M)
{
    ClassStructure cs = communicating_classes(M);
    FixedBasis fb;
    for (std::size_t a = 0; a < cs.classes.size(); ++a) {
        if (!cs.closed[a])
            continue;
        fb.vectors.push_back(stationary_distribution(M, cs.classes[a]));
        fb.supports.push_back(cs.classes[a]);
    }

    // The closed-class count must match the dimension of ker(M - id).
    Mat shifted = M.m;
    for (std::size_t i = 0; i < M.size(); ++i)
        shifted.at(i, i) -= 1;
    if (nullspace_basis(shifted).size() != fb.vectors.size())
        throw internal_error("fixed_point_basis does not span ker(M - id)");
    for (const Vec& v : fb.vectors)
        if (mat_vec(M.m, v) != v)
            throw internal_error("fixed_point_basis vector is not fixed");
    return fb;
}

IntersectionResult intersect_fixed_spaces(const StochasticMatrix& M1, const StochasticMatrix& M2)
{
    if (M1.size() != M2.size())
        throw invalid_model("intersect_fixed_spaces: size mismatch");
    const std::size_t n = M1.size();

    IntersectionResult out;
    out.fixed1 = fixed_point_basis(M1);
    out.fixed2 = fixed_point_basis(M2);
    const auto& F1 = out.fixed1;
    const auto& F2 = out.fixed2;

    std::vector<char> z1(n, 1), z2(n, 1);  // indices outside every closed class
    for (const auto& sup : F1.supports)
        for (std::size_t k : sup)
            z1[k] = 0;
    for (const auto& sup : F2.supports)
        for (std::size_t k : sup)
            z2[k] = 0;

    // Overlap components over the union of both partitions (union-find).
    const std::size_t total = F1.supports.size() + F2.supports.size();
    std::vector<std::size_t> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

    auto overlap = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        std::vector<std::size_t> o;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(o));
        return o;
    };

    for (std::size_t i = 0; i < F1.supports.size(); ++i)
        for (std::size_t j = 0; j < F2.supports.size(); ++j)
            if (!overlap(F1.supports[i], F2.supports[j]).empty())
                unite(i, F1.supports.size() + j);

    std::vector<std::vector<std::size_t>> comp1(total), comp2(total);  // by root
    for (std::size_t i = 0; i < F1.supports.size(); ++i)
        comp1[find(i)].push_back(i);
    for (std::size_t j = 0; j < F2.supports.size(); ++j)
        comp2[find(F1.supports.size() + j)].push_back(j);

    std::vector<std::size_t> roots;
    for (std::size_t r = 0; r < total; ++r)
        if (!comp1[r].empty() || !comp2[r].empty())
            roots.push_back(r);
    // Deterministic component order: by the smallest index supporting it.
    std::sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) {
        auto key = [&](std::size_t r) {
            std::size_t k = n;
            for (std::size_t i : comp1[r])
                k = std::min(k, F1.supports[i].front());
            for (std::size_t j : comp2[r])
                k = std::min(k, F2.supports[j].front());
            return k;
        };
        return key(a) < key(b);
    });

    for (std::size_t r : roots) {
        const auto& is = comp1[r];
        const auto& js = comp2[r];

        // Zero propagation: a class meeting the other matrix's zero set kills
        // its whole component.
        bool killed = false;
        for (std::size_t i : is)
            for (std::size_t k : F1.supports[i])
                if (z2[k])
                    killed = true;
        for (std::size_t j : js)
            for (std::size_t k : F2.supports[j])
                if (z1[k])
                    killed = true;
        if (killed || is.empty() || js.empty())
            continue;

        // Proportionality of v and w on each overlap, recording beta ratios.
        struct Edge {
            std::size_t i, j;
            Rational beta;  // v_k / w_k on the overlap
        };
        std::vector<Edge> edges;
        for (std::size_t i : is)
            for (std::size_t j : js) {
                auto o = overlap(F1.supports[i], F2.supports[j]);
                if (o.empty())
                    continue;
                const Vec& v = F1.vectors[i];
                const Vec& w = F2.vectors[j];
                for (std::size_t a = 0; a + 1 < o.size() && !killed; ++a)
                    if (v[o[a]] * w[o[a + 1]] != v[o[a + 1]] * w[o[a]])
                        killed = true;
                if (killed)
                    break;
                edges.push_back({i, j, v[o.front()] / w[o.front()]});
            }
        if (killed)
            continue;

        // Propagate lambda ratios from the component representative and then
        // re-check every edge pair; an inconsistent ratio kills the component.
        std::map<std::size_t, Rational> lambda, mu;
        std::size_t rep = *std::min_element(is.begin(), is.end(), [&](std::size_t a, std::size_t b) {
            return F1.supports[a].front() < F1.supports[b].front();
        });
        lambda[rep] = 1;
        bool progress = true;
        while (progress && !killed) {
            progress = false;
            for (const Edge& e : edges) {
                const bool have_l = lambda.count(e.i), have_m = mu.count(e.j);
                if (have_l && !have_m) {
                    mu[e.j] = lambda[e.i] * e.beta;  // beta = mu_J / lambda_I
                    progress = true;
                } else if (!have_l && have_m) {
                    lambda[e.i] = mu[e.j] / e.beta;
                    progress = true;
                }
            }
        }
        for (const Edge& e : edges) {
            if (!lambda.count(e.i) || !mu.count(e.j))
                throw internal_error("intersection component is not overlap-connected");
            if (mu[e.j] != lambda[e.i] * e.beta)
                killed = true;
        }
        if (killed)
            continue;

        for (const Edge& e : edges)
            out.beta.push_back({e.i, e.j, e.beta});
        std::set<std::pair<std::size_t, std::size_t>> gamma_seen;
        for (const Edge& e1 : edges)
            for (const Edge& e2 : edges)
                if (e1.j == e2.j && e1.i != e2.i &&
                    gamma_seen.emplace(e1.i, e2.i).second)
                    out.gamma.push_back({e1.i, e2.i, e1.beta / e2.beta});

        Vec x(n, Rational(0));
        Rational mass = 0;
        for (std::size_t i : is) {
            for (std::size_t k : F1.supports[i])
                x[k] += lambda[i] * F1.vectors[i][k];
            mass += lambda[i];
        }
        Vec y(n, Rational(0));
        for (std::size_t j : js)
            for (std::size_t k : F2.supports[j])
                y[k] += mu[j] * F2.vectors[j][k];
        if (x != y)
            throw internal_error("intersection component fails the exact equality check");

        x = vec_scale(Rational(1) / mass, x);
        std::vector<std::size_t> sup;
        for (std::size_t k = 0; k < n; ++k)
            if (x[k] != 0)
                sup.push_back(k);
        out.basis.push_back(std::move(x));
        out.supports.push_back(std::move(sup));
    }

    std::vector<char> covered(n, 0);
    for (const auto& sup : out.supports)
        for (std::size_t k : sup)
            covered[k] = 1;
    for (std::size_t k = 0; k < n; ++k)
        if (!covered[k])
            out.zeroed.push_back(k);

    // Exactness against the stacked-nullspace oracle.
    Mat stacked(2 * n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            stacked.at(i, j) = M1.m.at(i, j) - Rational(i == j ? 1 : 0);
            stacked.at(n + i, j) = M2.m.at(i, j) - Rational(i == j ? 1 : 0);
        }
    if (nullspace_basis(stacked).size() != out.basis.size())
        throw internal_error("intersect_fixed_spaces does not span the nullspace intersection");
    for (const Vec& v : out.basis)
        if (mat_vec(M1.m, v) != v || mat_vec(M2.m, v) != v)
            throw internal_error("intersection basis vector is not a common fixed point");

    return out;
}

}  // namespace gptk
