#include "cvtomo/fisher.hpp"

#include <cmath>

#include "cvtomo/parallel.hpp"

namespace cvtomo {

Eigen::MatrixXd fisher_matrix(const Eigen::MatrixXcd& coeff, const std::vector<cplx>& alphas,
                              cplx beta, int n_max) {
    const int p = int(alphas.size());
    if (coeff.rows() != p || coeff.cols() != p)
        throw ConfigError("fisher_matrix: coefficient matrix must be p x p");
    if (n_max < 0) n_max = default_ncut(beta, BasisSpec::coherent(alphas));
    const int n_par = p * p;

    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(n_par, n_par);
    Eigen::MatrixXcd kernel(p, p);
    Eigen::VectorXd grad(n_par);
    for (int n = 0; n <= n_max; ++n) {
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j)
                kernel(i, j) = qn_coherent_element(n, beta, alphas[size_t(i)], alphas[size_t(j)]);
        double f = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) f += std::real(coeff(i, j) * kernel(i, j));
        if (f < 1e-14) continue;
        int at = 0;
        for (int i = 0; i < p; ++i) grad(at++) = std::real(kernel(i, i));
        for (int k = 0; k < p; ++k)
            for (int l = k + 1; l < p; ++l) {
                grad(at++) = 2.0 * std::real(kernel(k, l));
                grad(at++) = -2.0 * std::imag(kernel(k, l));
            }
        info.noalias() += (grad * grad.transpose()) / f;
    }
    return info;
}

FisherMap fisher_det_map(const Eigen::MatrixXcd& coeff, const std::vector<cplx>& alphas,
                         const std::vector<cplx>& grid) {
    if (grid.empty()) throw ConfigError("fisher_det_map: empty grid");
    FisherMap map;
    map.grid = grid;
    map.det_values.resize(grid.size());
    parallel_for(int(grid.size()), [&](int g) {
        Eigen::MatrixXd info = fisher_matrix(coeff, alphas, grid[size_t(g)]);
        map.det_values[size_t(g)] = info.determinant();
    });
    return map;
}

}  // namespace cvtomo
