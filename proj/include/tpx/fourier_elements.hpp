#ifndef TPX_FOURIER_ELEMENTS_HPP
#define TPX_FOURIER_ELEMENTS_HPP

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "tpx/congruence.hpp"
#include "tpx/partition.hpp"

namespace tpx {

struct MatrixElementValue {
    enum class Path { counting, dense_oracle };

    double value = 0.0;
    Path derivation = Path::counting;
};

// <E_p1 | F^{k,k} | E_p2> = N^{-k + (|p1|-|p2|)/2} * #solutions of the
// reduced congruence system; real and nonnegative.
MatrixElementValue e_matrix_element(const SetPartition& p1, const SetPartition& p2,
                                    std::int64_t n, int k);

// <I_p1 | F^{k,k} | I_p2> via the double Mobius sum over coarsenings.
// Requires N >= 2k.
std::complex<double> i_matrix_element(const SetPartition& p1, const SetPartition& p2,
                                      std::int64_t n, int k);

// Full Bell x Bell matrix of I-elements in canonical partition order,
// with E-elements evaluated once per pair.
Eigen::MatrixXd i_element_matrix(const PartitionIndex& idx, std::int64_t n, int k);

// Independent oracles: direct phase sums over the index classes,
// sum_{m in C1, n in C2} w^{m.n} with the appropriate normalization.
// Exponential in the class sizes; test-scale dimensions only.
MatrixElementValue e_matrix_element_dense(const SetPartition& p1, const SetPartition& p2,
                                          std::int64_t n, int k);
std::complex<double> i_matrix_element_dense(const SetPartition& p1, const SetPartition& p2,
                                            std::int64_t n, int k);

} // namespace tpx

#endif
