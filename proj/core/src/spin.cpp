#include "isingmis/spin.hpp"

#include <stdexcept>

namespace isingmis {

SpinMatrix::SpinMatrix(int n, int p) : n_(n), p_(p) {
    if (n < 0 || p < 0) throw std::invalid_argument("SpinMatrix: negative dimension");
    values_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(p), std::int8_t{1});
}

SpinMatrix SpinMatrix::from_values(int n, int p, std::vector<std::int8_t> values) {
    SpinMatrix m(n, p);
    if (values.size() != m.values_.size()) {
        throw std::invalid_argument("SpinMatrix: value count does not match n*p");
    }
    for (std::int8_t v : values) {
        if (v != -1 && v != 1) throw std::invalid_argument("SpinMatrix: entry not in {-1,+1}");
    }
    m.values_ = std::move(values);
    return m;
}

void SpinMatrix::set(int obs, int node, std::int8_t value) {
    if (obs < 0 || obs >= n_ || node < 0 || node >= p_) {
        throw std::out_of_range("SpinMatrix::set: index out of range");
    }
    if (value != -1 && value != 1) throw std::invalid_argument("SpinMatrix: entry not in {-1,+1}");
    values_[static_cast<std::size_t>(obs) * static_cast<std::size_t>(p_) +
            static_cast<std::size_t>(node)] = value;
}

namespace {

void check_gammas(const std::vector<double>& gammas) {
    for (double g : gammas) {
        if (!(g >= 0.0 && g <= 1.0)) {
            throw std::invalid_argument("MisclassLaw: flip probability outside [0,1]");
        }
    }
}

}  // namespace

MisclassLaw MisclassLaw::per_node(std::vector<double> gammas) {
    check_gammas(gammas);
    MisclassLaw law;
    law.mode_ = Mode::PerNode;
    law.p_ = static_cast<int>(gammas.size());
    law.n_ = 0;
    law.gammas_ = std::move(gammas);
    return law;
}

MisclassLaw MisclassLaw::per_cell(int n, int p, std::vector<double> gammas) {
    if (n < 0 || p < 0) throw std::invalid_argument("MisclassLaw: negative dimension");
    if (gammas.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(p)) {
        throw std::invalid_argument("MisclassLaw: per-cell gamma count does not match n*p");
    }
    check_gammas(gammas);
    MisclassLaw law;
    law.mode_ = Mode::PerCell;
    law.n_ = n;
    law.p_ = p;
    law.gammas_ = std::move(gammas);
    return law;
}

double MisclassLaw::node_gamma(int node) const {
    if (node < 0 || node >= p_) throw std::out_of_range("MisclassLaw::node_gamma");
    if (mode_ == Mode::PerNode) return gammas_[static_cast<std::size_t>(node)];
    if (n_ == 0) return 0.0;
    double sum = 0.0;
    for (int i = 0; i < n_; ++i) sum += gamma(i, node);
    return sum / n_;
}

bool MisclassLaw::compatible_with(const SpinMatrix& data) const {
    if (p_ != data.p()) return false;
    if (mode_ == Mode::PerCell && n_ != data.n()) return false;
    return true;
}

}  // namespace isingmis
