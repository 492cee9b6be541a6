#include "ellipt/fock.hpp"

#include <algorithm>

namespace ellipt {

namespace {

void fill(Occupation& occ, std::size_t slot, int budget, int max_mode, std::vector<Occupation>& out)
{
    if (slot == occ.size()) {
        out.push_back(occ);
        return;
    }
    const int m = static_cast<int>(slot) % max_mode + 1;
    for (int k = 0; k * m <= budget; ++k) {
        occ[slot] = k;
        fill(occ, slot + 1, budget - k * m, max_mode, out);
    }
    occ[slot] = 0;
}

} // namespace

SectorBasis enumerate_sector(const Eigen::VectorXi& momentum, int rank, int cap, int max_mode)
{
    if (cap < 0)
        throw ContractViolation("enumerate_sector: negative degree cap");
    if (cap > max_mode)
        throw ContractViolation("enumerate_sector: cap exceeds the occupation layout");
    SectorBasis basis;
    basis.momentum = momentum;
    basis.cap = cap;
    Occupation occ(static_cast<std::size_t>(rank * max_mode), 0);
    fill(occ, 0, cap, max_mode, basis.states);
    std::stable_sort(basis.states.begin(), basis.states.end(), [&](const Occupation& a, const Occupation& b) {
        const int da = occupation_degree(a, max_mode), db = occupation_degree(b, max_mode);
        return da != db ? da < db : a > b;
    });
    for (std::size_t k = 0; k < basis.states.size(); ++k)
        basis.index.emplace(basis.states[k], static_cast<int>(k));
    return basis;
}

FockBasisState describe_state(const Occupation& occ, const Eigen::VectorXi& momentum, int rank, int max_mode)
{
    FockBasisState state;
    state.momentum = momentum;
    state.partitions.resize(static_cast<std::size_t>(rank));
    for (int j = 0; j < rank; ++j)
        for (int m = max_mode; m >= 1; --m)
            for (int k = 0; k < occ[static_cast<std::size_t>(j * max_mode + m - 1)]; ++k)
                state.partitions[static_cast<std::size_t>(j)].push_back(m);
    state.degree = occupation_degree(occ, max_mode);
    return state;
}

} // namespace ellipt
