// Model variants and the (nu, packed symmetric correlation) state they evolve.
#pragma once

#include <Eigen/Dense>
#include <string>

namespace mf {

enum class ModelVariant { WilsonCowan, InfiniteSize, BCC, BressloffRescaled, RodriguezTuckwell };

std::string variant_name(ModelVariant v);
ModelVariant variant_from_name(const std::string& name);
inline bool has_corr_block(ModelVariant v) { return v != ModelVariant::WilsonCowan; }

// Correlation block stored as the upper triangle, row-major:
// (0,0), (0,1), ..., (0,M-1), (1,1), ..., (M-1,M-1).
inline int packed_size(int M) { return M * (M + 1) / 2; }
inline int packed_index(int M, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * M - i * (i - 1) / 2 + (j - i);
}

struct MomentState {
    Eigen::VectorXd nu;    // length M
    Eigen::VectorXd corr;  // packed, length M(M+1)/2, or empty for WilsonCowan

    int M() const { return static_cast<int>(nu.size()); }
    int dim() const { return static_cast<int>(nu.size() + corr.size()); }

    double corr_at(int i, int j) const { return corr[packed_index(M(), i, j)]; }
    double& corr_at(int i, int j) { return corr[packed_index(M(), i, j)]; }

    Eigen::MatrixXd corr_matrix() const;
    void set_corr_matrix(const Eigen::MatrixXd& c);

    Eigen::VectorXd flatten() const;
    static MomentState unflatten(ModelVariant v, int M, const Eigen::VectorXd& x);

    static MomentState zero(ModelVariant v, int M);
};

}  // namespace mf
