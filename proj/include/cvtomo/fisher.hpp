#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cvtomo/basis.hpp"

namespace cvtomo {

/// Fisher information of the excitation-count distribution at one beta for a
/// cat state with known components. Real chart: the p diagonal weights
/// first, then (Re, Im) of each off-diagonal coefficient in k < l order.
/// Bins with f(n) < 1e-14 are skipped. n_max < 0 means the truncation rule.
Eigen::MatrixXd fisher_matrix(const Eigen::MatrixXcd& coeff, const std::vector<cplx>& alphas,
                              cplx beta, int n_max = -1);

struct FisherMap {
    std::vector<cplx> grid;
    std::vector<double> det_values;
};

FisherMap fisher_det_map(const Eigen::MatrixXcd& coeff, const std::vector<cplx>& alphas,
                         const std::vector<cplx>& grid);

}  // namespace cvtomo
