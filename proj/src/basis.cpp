#include "cvtomo/basis.hpp"

#include <cmath>

namespace cvtomo {

BasisSpec BasisSpec::fock(int m_c) {
    if (m_c < 0) throw ConfigError("fock basis requires m_c >= 0");
    BasisSpec b;
    b.kind = Kind::Fock;
    b.m_c = m_c;
    return b;
}

BasisSpec BasisSpec::coherent(std::vector<cplx> alphas) {
    if (alphas.empty()) throw ConfigError("coherent basis requires at least one alpha");
    for (size_t i = 0; i < alphas.size(); ++i)
        for (size_t j = i + 1; j < alphas.size(); ++j)
            if (std::abs(alphas[i] - alphas[j]) <= 1e-9)
                throw ConfigError("coherent components must be pairwise distinct");
    BasisSpec b;
    b.kind = Kind::Coherent;
    b.alphas = std::move(alphas);
    return b;
}

BasisSpec BasisSpec::displaced_fock(std::vector<cplx> alphas, int m_c) {
    BasisSpec b = coherent(std::move(alphas));
    if (m_c < 0) throw ConfigError("displaced-fock basis requires m_c >= 0");
    b.kind = Kind::DisplacedFock;
    b.m_c = m_c;
    return b;
}

int BasisSpec::dimension() const {
    const int p = int(alphas.size());
    switch (kind) {
        case Kind::Fock: return (m_c + 1) * (m_c + 1);
        case Kind::Coherent: return p * p;
        case Kind::DisplacedFock: return p * p * (m_c + 1) * (m_c + 1);
    }
    return 0;
}

double BasisSpec::radius() const {
    double a_max = 0.0;
    for (const cplx& a : alphas) a_max = std::max(a_max, std::abs(a));
    switch (kind) {
        case Kind::Fock: return std::sqrt(double(m_c));
        case Kind::Coherent: return a_max;
        case Kind::DisplacedFock: return a_max + std::sqrt(double(m_c));
    }
    return 0.0;
}

int default_ncut(cplx beta, const BasisSpec& basis) {
    const double mu = std::pow(std::abs(beta) + basis.radius(), 2.0);
    return int(std::ceil(mu + 6.0 * std::sqrt(mu) + 10.0));
}

}  // namespace cvtomo
