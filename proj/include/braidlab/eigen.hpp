#pragma once

#include <optional>
#include <string>
#include <vector>

#include "braidlab/matrix.hpp"
#include "braidlab/roots.hpp"
#include "braidlab/upoly.hpp"

namespace braidlab {

struct EigenPair {
    Scalar value;
    int algebraic_multiplicity = 0;
    std::vector<Vec> eigenspace; // RREF basis
};

struct EigenReport {
    std::vector<EigenPair> pairs;
    bool split = false;          // characteristic polynomial factors linearly
    bool diagonalizable = false; // over the base field
};

inline EigenReport eigen(const Mat& a, Field field) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eigen of non-square matrix");
    EigenReport rep;
    UPoly cp = char_poly(a);
    RootList rl = field_roots(cp, field);
    rep.split = rl.split;
    for (const auto& [val, mult] : rl.roots) {
        Mat shifted = a;
        for (int i = 0; i < a.rows(); ++i) shifted.at(i, i) -= val;
        EigenPair p;
        p.value = val;
        p.algebraic_multiplicity = mult;
        p.eigenspace = rref_basis(shifted.kernel());
        rep.pairs.push_back(std::move(p));
    }
    // diagonalizable iff the minimal polynomial is squarefree and splits;
    // equivalently the eigenspaces fill the space
    int geo = 0;
    for (const auto& p : rep.pairs) geo += static_cast<int>(p.eigenspace.size());
    rep.diagonalizable = rep.split && geo == a.rows();
    return rep;
}

enum class SimulFail {
    None,
    DimensionMismatch,
    NonCommutingPair,
    Defective,
    NonSplit,
};

inline std::string simul_fail_name(SimulFail f) {
    switch (f) {
        case SimulFail::None: return "none";
        case SimulFail::DimensionMismatch: return "dimension mismatch";
        case SimulFail::NonCommutingPair: return "non-commuting pair";
        case SimulFail::Defective: return "defective matrix";
        case SimulFail::NonSplit: return "non-split spectrum";
    }
    return "?";
}

struct SimulBlock {
    std::vector<Vec> basis;      // RREF basis of the common eigenspace
    std::vector<Scalar> values;  // eigenvalue of each input matrix on it
};

struct SimulDiagResult {
    bool ok = false;
    SimulFail fail = SimulFail::None;
    int fail_index_a = -1, fail_index_b = -1; // offending matrix indices
    std::vector<SimulBlock> blocks;
};

// simultaneous eigenspace decomposition of a commuting diagonalizable
// family with split spectra; typed failure otherwise
inline SimulDiagResult simuldiag(const std::vector<Mat>& as, Field field) {
    SimulDiagResult res;
    if (as.empty()) {
        res.ok = true;
        return res;
    }
    int n = as[0].rows();
    for (const auto& m : as)
        if (m.rows() != n || m.cols() != n) {
            res.fail = SimulFail::DimensionMismatch;
            return res;
        }
    for (size_t i = 0; i < as.size(); ++i)
        for (size_t j = i + 1; j < as.size(); ++j)
            if (as[i] * as[j] != as[j] * as[i]) {
                res.fail = SimulFail::NonCommutingPair;
                res.fail_index_a = static_cast<int>(i);
                res.fail_index_b = static_cast<int>(j);
                return res;
            }
    std::vector<EigenReport> reports;
    for (size_t i = 0; i < as.size(); ++i) {
        EigenReport er = eigen(as[i], field);
        if (!er.split) {
            res.fail = SimulFail::NonSplit;
            res.fail_index_a = static_cast<int>(i);
            return res;
        }
        if (!er.diagonalizable) {
            res.fail = SimulFail::Defective;
            res.fail_index_a = static_cast<int>(i);
            return res;
        }
        reports.push_back(std::move(er));
    }
    // refine the trivial decomposition by each matrix's eigenspaces
    std::vector<SimulBlock> blocks;
    {
        SimulBlock whole;
        Mat id = Mat::identity(n);
        for (int i = 0; i < n; ++i) whole.basis.push_back(id.row(i));
        blocks.push_back(std::move(whole));
    }
    for (size_t i = 0; i < as.size(); ++i) {
        std::vector<SimulBlock> next;
        for (const auto& blk : blocks) {
            for (const auto& ep : reports[i].pairs) {
                auto inter = subspace_intersect(blk.basis, ep.eigenspace, n);
                if (inter.empty()) continue;
                SimulBlock nb;
                nb.basis = std::move(inter);
                nb.values = blk.values;
                nb.values.push_back(ep.value);
                next.push_back(std::move(nb));
            }
        }
        blocks = std::move(next);
    }
    int total = 0;
    for (const auto& b : blocks) total += subspace_dim(b.basis);
    if (total != n) {
        // cannot happen for a commuting diagonalizable split family
        res.fail = SimulFail::Defective;
        return res;
    }
    res.ok = true;
    res.blocks = std::move(blocks);
    return res;
}

} // namespace braidlab
