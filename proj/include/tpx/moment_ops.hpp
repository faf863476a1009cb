#ifndef TPX_MOMENT_OPS_HPP
#define TPX_MOMENT_OPS_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "tpx/rng.hpp"
#include "tpx/tuple_space.hpp"

namespace tpx {

// Weighted set of permutations of [N]; images are 0-based.
struct PermDistribution {
    struct Entry {
        std::vector<int> image;
        double weight;
    };

    std::int64_t n = 0;
    std::vector<Entry> entries;

    void validate() const;
    int degree() const { return int(entries.size()); }
};

struct PermGenerator {
    std::vector<int> image;
};
struct FourierGenerator {};
struct ExplicitGenerator {
    std::vector<cplx> u; // row-major N x N
};
using Generator = std::variant<PermGenerator, FourierGenerator, ExplicitGenerator>;

// Weighted set of unitary generators acting on (C^N)^{k,k}.
struct QuantumEnsemble {
    struct Entry {
        Generator op;
        double weight;
    };

    std::int64_t n = 0;
    int k = 0;
    std::vector<Entry> entries;

    void validate() const;
    int degree() const { return int(entries.size()); }
};

// Matrix-free linear operator on TupleSpace vectors. Implementations are
// immutable after construction; apply/apply_adjoint are reentrant.
class MomentOperator {
public:
    explicit MomentOperator(const TupleSpace& space) : space_(space) {}
    virtual ~MomentOperator() = default;

    const TupleSpace& space() const { return space_; }
    std::int64_t dim() const { return space_.dim(); }

    virtual void apply(std::span<const cplx> in, std::span<cplx> out) const = 0;
    virtual void apply_adjoint(std::span<const cplx> in, std::span<cplx> out) const = 0;

private:
    TupleSpace space_;
};

using OpPtr = std::shared_ptr<const MomentOperator>;

// E_{pi~nu}[B(pi)^{x copies}]: averaged simultaneous value permutation.
OpPtr permutation_moment(const PermDistribution& nu, int copies);

// F^{k,k}: Fourier on the first k factors, conjugate Fourier on the rest.
OpPtr fourier_layer(const TupleSpace& space, int k);

// E_{S_N}: orthogonal projector onto the equality-pattern fixed space,
// applied by averaging amplitudes within each pattern class.
class SymmetricProjector : public MomentOperator {
public:
    explicit SymmetricProjector(const TupleSpace& space);

    void apply(std::span<const cplx> in, std::span<cplx> out) const override;
    void apply_adjoint(std::span<const cplx> in, std::span<cplx> out) const override;

    // Number of non-empty pattern classes (= Bell number when N >= copies).
    std::int64_t rank() const { return rank_; }

private:
    std::shared_ptr<PartitionIndex> patterns_;
    std::vector<std::int32_t> class_of_;
    std::vector<std::int64_t> class_count_;
    std::int64_t rank_;
};

std::shared_ptr<const SymmetricProjector> symmetric_projector(const TupleSpace& space);

// E_{U(N)}: orthogonal projector onto span{|E_{P(pi)}> : pi in S_k},
// realized through the Gram pseudo-inverse of the spanning set.
class HaarProjector : public MomentOperator {
public:
    HaarProjector(const TupleSpace& space, int k);

    void apply(std::span<const cplx> in, std::span<cplx> out) const override;
    void apply_adjoint(std::span<const cplx> in, std::span<cplx> out) const override;

    std::int64_t rank() const { return rank_; }
    bool rank_deficient() const { return rank_ < std::int64_t(perm_weights_.size()); }
    double gram_condition() const { return gram_condition_; }

private:
    int k_;
    // per permutation: value-place weight of each free index, so that the
    // member index of free tuple f is sum_i f_i * fw[i].
    std::vector<std::vector<std::int64_t>> perm_weights_;
    Eigen::MatrixXd gram_pinv_;
    std::int64_t rank_;
    double gram_condition_;
    double state_norm_; // sqrt(N^k)
};

std::shared_ptr<const HaarProjector> haar_projector(const TupleSpace& space, int k);

// E_{U~nu}[U^{k,k}] for a mixed generator ensemble.
OpPtr ensemble_moment(const QuantumEnsemble& ens);

// op^m applied by m successive applications.
OpPtr power_operator(OpPtr op, int m);

// outer * inner * outer (all same space); used for compressions P F P.
OpPtr sandwich_operator(OpPtr outer, OpPtr inner);

// a - b as an operator.
OpPtr difference_operator(OpPtr a, OpPtr b);

// Dense materialization by applying to basis vectors; guarded.
Eigen::MatrixXcd materialize_dense(const MomentOperator& op);

// Haar-distributed N x N unitary: QR of a complex Gaussian matrix with the
// triangular factor's diagonal rotated to be positive real.
Eigen::MatrixXcd random_unitary(std::int64_t n, const CounterRng& rng);

// Uniformly random permutation image of [n] (Fisher-Yates on counter draws).
std::vector<int> random_permutation(std::int64_t n, const CounterRng& rng);

} // namespace tpx

#endif
