#ifndef TPX_KERNELS_HPP
#define TPX_KERNELS_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace tpx {
class TupleSpace;
}

// Data-parallel inner loops shared by the moment operators. The default
// entry points are OpenMP-parallel; kernels::serial holds the plain
// reference implementations kept for testing and benchmarking.
//
// All reductions accumulate over fixed-size chunks combined pairwise, so
// results are bit-identical for any thread count.
namespace tpx::kernels {

using cplx = std::complex<double>;

inline constexpr std::int64_t kReduceChunk = 4096;

// sum conj(a[i]) * b[i]
cplx dot(std::span<const cplx> a, std::span<const cplx> b);
cplx sum(std::span<const cplx> a);
double norm2(std::span<const cplx> a);
void scale(std::span<cplx> a, cplx factor);
// y += alpha * x
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);

// out[t] = in[value_map applied to every coordinate of t].
// value_map has length N; out and in must be distinct.
void gather_tuple_perm(const TupleSpace& space, std::span<const int> value_map,
                       std::span<const cplx> in, std::span<cplx> out);

// Fused weighted gather over several value permutations in one pass:
// out[t] = sum_g weights[g] * in[map_g applied to t]. Each tuple index is
// decoded once, so this is the hot path of averaged permutation moments.
void gather_tuple_perm_multi(const TupleSpace& space,
                             const std::vector<std::vector<int>>& value_maps,
                             std::span<const double> weights, std::span<const cplx> in,
                             std::span<cplx> out);

// Unnormalized DFT on one tensor factor: out_m = sum_n w^{sign*m*n} in_n
// with w = exp(2*pi*i/N), applied in place across the whole batch.
// sign = +1 gives the Fourier matrix used here, -1 its conjugate.
void dft_factor(const TupleSpace& space, int factor, int sign, std::span<cplx> data);

// In-place dense N x N matrix application on one tensor factor
// (matrix row-major, out_j = sum_j' m[j,j'] in_j').
void dense_factor_apply(const TupleSpace& space, int factor, const cplx* matrix,
                        std::span<cplx> data);

// Per-class sums: result[c] = sum over {i : class_of[i] == c} of in[i].
std::vector<cplx> class_sums(std::span<const cplx> in, std::span<const std::int32_t> class_of,
                             std::int64_t num_classes);

namespace serial {

cplx dot(std::span<const cplx> a, std::span<const cplx> b);
cplx sum(std::span<const cplx> a);
double norm2(std::span<const cplx> a);
void scale(std::span<cplx> a, cplx factor);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
void gather_tuple_perm(const TupleSpace& space, std::span<const int> value_map,
                       std::span<const cplx> in, std::span<cplx> out);
void gather_tuple_perm_multi(const TupleSpace& space,
                             const std::vector<std::vector<int>>& value_maps,
                             std::span<const double> weights, std::span<const cplx> in,
                             std::span<cplx> out);
void dft_factor(const TupleSpace& space, int factor, int sign, std::span<cplx> data);
void dense_factor_apply(const TupleSpace& space, int factor, const cplx* matrix,
                        std::span<cplx> data);
std::vector<cplx> class_sums(std::span<const cplx> in, std::span<const std::int32_t> class_of,
                             std::int64_t num_classes);

} // namespace serial

} // namespace tpx::kernels

#endif
