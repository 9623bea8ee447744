#pragma once

// Backpropagation that stops early once norm bounds certify that every
// remaining gradient block is below its threshold.
//
// Layer arguments of the bound functions are 0-based like Network; policy
// thresholds and reported reach layers are 1-based like FieldQuantity.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "regionlab/field.hpp"
#include "regionlab/network.hpp"
#include "regionlab/presets.hpp"

namespace regionlab {

struct CutoffPolicy {
    enum class Norm { L2, LInf };
    enum class LInfVariant { Tight, Loose };

    /// Bound on the weight-gradient block (Frobenius norm for L2, largest
    /// entry for LInf) below which layer k may be skipped. A layer without an
    /// entry is never skipped.
    std::map<std::size_t, double> weight_thresholds;
    /// Optional extra condition on the bias block. Missing entries are not checked.
    std::map<std::size_t, double> bias_thresholds;
    Norm norm = Norm::L2;
    LInfVariant linf_variant = LInfVariant::Tight;
    /// Use row norms of A_k in the LInf bound instead of column norms. Rows
    /// give a valid bound only by accident; kept for comparison.
    bool linf_rows = false;

    /// Throws ContractError on negative or NaN thresholds.
    void validate() const;
    double weight_threshold(std::size_t layer) const;
    double bias_threshold(std::size_t layer) const;

    /// Same weight threshold on layers 1..layers.
    static CutoffPolicy uniform(std::size_t layers, double weight_threshold, Norm norm = Norm::L2);
};

std::string to_string(CutoffPolicy::Norm norm);
CutoffPolicy::Norm norm_from_string(const std::string& name);
std::string to_string(CutoffPolicy::LInfVariant variant);
CutoffPolicy::LInfVariant linf_variant_from_string(const std::string& name);

/// Per-network constants of the bounds: spectral norms (power iteration,
/// inflated by 1%), largest row and column norms and all row/column norms.
class AdjointBounds {
public:
    static constexpr double kSpectralInflation = 1.01;

    explicit AdjointBounds(const Network& net);

    /// Upper bound on ||y_{k-1}||_2 from ||y_k||_2, k >= 1.
    double l2(const ForwardTrace& trace, std::size_t k, double y_k_norm2) const;
    /// Upper bound on ||y_{k-1}||_inf from ||y_k||_2, k >= 1.
    double linf(const ForwardTrace& trace, std::size_t k, double y_k_norm2,
                CutoffPolicy::LInfVariant variant, bool rows = false) const;

    double spectral_norm(std::size_t k) const { return spectral_[k]; }

private:
    const Network* net_;
    std::vector<double> spectral_;
    std::vector<Vector> col_norms_, row_norms_;
};

double bound_y_l2(const Network& net, const ForwardTrace& trace, std::size_t k, double y_k_norm2);
double bound_y_linf(const Network& net, const ForwardTrace& trace, std::size_t k,
                    double y_k_norm2, CutoffPolicy::LInfVariant variant, bool rows = false);

struct CutoffResult {
    /// Exact blocks for layers reached_layer..n, zero blocks below.
    GradientSet gradient;
    /// 1-based; n when only the output layer was differentiated.
    std::size_t reached_layer = 0;
};

CutoffResult backward_with_cutoff(const Network& net, const ForwardTrace& trace, std::size_t c,
                                  const CutoffPolicy& policy, const AdjointBounds& bounds);
CutoffResult backward_with_cutoff(const Network& net, const ForwardTrace& trace, std::size_t c,
                                  const CutoffPolicy& policy);

struct ReachStatistics {
    /// fractions[k - 1]: share of grid nodes whose backward pass reached layer k.
    std::vector<double> fractions;
    /// Reached layer per node, same layout as a FieldMap.
    FieldMap reached;
};

ReachStatistics reach_statistics(const Network& net, const GridSpec& spec, const Labeling& truth,
                                 const CutoffPolicy& policy);
ReachStatistics reach_statistics_serial(const Network& net, const GridSpec& spec,
                                        const Labeling& truth, const CutoffPolicy& policy);

}  // namespace regionlab
