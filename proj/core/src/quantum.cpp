#include "gptk/quantum.hpp"

#include <stdexcept>

namespace gptk::quantum {

DensityMatrix DensityMatrix::make(Eigen::MatrixXcd m)
{
    if (m.rows() != m.cols() || m.rows() == 0)
        throw std::invalid_argument("density matrix must be square and nonempty");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kTol)
        throw std::invalid_argument("density matrix is not Hermitian within tolerance");
    if (std::abs(m.trace().real() - 1.0) > kTol || std::abs(m.trace().imag()) > kTol)
        throw std::invalid_argument("density matrix trace is not 1 within tolerance");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kTol)
        throw std::invalid_argument("density matrix has a negative eigenvalue beyond tolerance");
    return DensityMatrix{std::move(m)};
}

double operator_norm(const Eigen::MatrixXcd& m)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
}

bool are_distinguishable(const DensityMatrix& a, const DensityMatrix& b)
{
    if (a.dim() != b.dim())
        throw std::invalid_argument("are_distinguishable: dimension mismatch");
    return operator_norm(a.rho * b.rho) < kTol;
}

Eigen::MatrixXcd distinguishing_witness(const DensityMatrix& rho)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.rho);
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(rho.rho.rows(), rho.rho.cols());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > kTol)
            proj += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    return proj;
}

bool jointly_distinguishable(const std::vector<DensityMatrix>& set)
{
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i + 1; j < set.size(); ++j)
            if (!are_distinguishable(set[i], set[j]))
                return false;
    return true;
}

bool pairwise_commuting(const std::vector<DensityMatrix>& set)
{
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i + 1; j < set.size(); ++j) {
            const Eigen::MatrixXcd comm =
                set[i].rho * set[j].rho - set[j].rho * set[i].rho;
            if (operator_norm(comm) >= kTol)
                return false;
        }
    return true;
}

std::size_t support_rank(const DensityMatrix& rho)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.rho, Eigen::EigenvaluesOnly);
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > kTol)
            ++r;
    return r;
}

}  // namespace gptk::quantum
