#ifndef TPX_DESIGN_HPP
#define TPX_DESIGN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tpx/moment_ops.hpp"

namespace tpx {

struct DesignSpec {
    std::string base_ref;       // ensemble file reference (or label)
    int m = 0;                  // iteration count
    double epsilon_target = 0.0;
    double lambda_used = 0.0;
    std::string word_count;     // D^m, decimal string
};

// Smallest m >= 1 with N^{2k} lambda^m <= eps.
int iteration_count(std::int64_t n, int k, double lambda, double eps);

// (E_nu)^m applied as m successive applications; the D^m words are never
// enumerated.
OpPtr iterate_moment(const QuantumEnsemble& ens, int m);

// || op - E_Haar ||_1 (Schatten 1-norm of the dense difference).
// Requires N^{2k} <= 4096.
double design_distance_1norm(const MomentOperator& op, const TupleSpace& space, int k);

// One design element: m i.i.d. generator indices drawn from the ensemble
// weights; the word applies right to left.
std::vector<int> sample_word(const QuantumEnsemble& ens, int m, std::uint64_t seed);

// D^m as a decimal string (exact).
std::string word_count_decimal(int degree, int m);

DesignSpec make_design_spec(const QuantumEnsemble& ens, const std::string& base_ref,
                            double lambda, double eps);

} // namespace tpx

#endif
