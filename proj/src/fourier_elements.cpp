#include "tpx/fourier_elements.hpp"

#include <cmath>
#include <numbers>

#include "tpx/tuple_space.hpp"

namespace tpx {

namespace {

double falling_factorial_d(std::int64_t n, int terms) {
    double prod = 1.0;
    for (int i = 0; i < terms; ++i) prod *= double(n - i);
    return prod;
}

// Visit every member tuple of E_p (or I_p when exact) over [N]^{2k}.
template <typename Fn>
void for_each_member(const SetPartition& p, std::int64_t n, bool exact, Fn&& fn) {
    int c = p.ground_size();
    int b = p.block_count();
    std::vector<int> ids = p.block_ids();
    std::vector<int> free_vals(size_t(b), 0);
    std::vector<int> tuple(static_cast<size_t>(c));
    while (true) {
        bool admit = true;
        if (exact) {
            for (int i = 0; admit && i < b; ++i)
                for (int j = i + 1; j < b; ++j)
                    if (free_vals[size_t(i)] == free_vals[size_t(j)]) {
                        admit = false;
                        break;
                    }
        }
        if (admit) {
            for (int e = 0; e < c; ++e) tuple[size_t(e)] = free_vals[size_t(ids[size_t(e)])];
            fn(std::span<const int>(tuple));
        }
        int d = b - 1;
        for (; d >= 0; --d) {
            if (++free_vals[size_t(d)] < n) break;
            free_vals[size_t(d)] = 0;
        }
        if (d < 0) break;
    }
}

std::complex<double> phase_sum(const SetPartition& p1, const SetPartition& p2, std::int64_t n,
                               int k, bool exact) {
    double sz1 = std::pow(double(n), double(p1.block_count()));
    double sz2 = std::pow(double(n), double(p2.block_count()));
    if (sz1 * sz2 > 2e8)
        throw SizeLimitError("phase_sum oracle: class-pair size exceeds guard");
    std::vector<std::complex<double>> omega(static_cast<size_t>(n));
    for (std::int64_t r = 0; r < n; ++r) {
        double ang = 2.0 * std::numbers::pi * double(r) / double(n);
        omega[size_t(r)] = {std::cos(ang), std::sin(ang)};
    }
    std::complex<double> total(0.0, 0.0);
    for_each_member(p1, n, exact, [&](std::span<const int> m) {
        std::complex<double> row(0.0, 0.0);
        for_each_member(p2, n, exact, [&](std::span<const int> nn) {
            std::int64_t d = signed_dot(m, nn, k);
            row += omega[size_t(((d % n) + n) % n)];
        });
        total += row;
    });
    return total;
}

} // namespace

MatrixElementValue e_matrix_element(const SetPartition& p1, const SetPartition& p2,
                                    std::int64_t n, int k) {
    if (n < 2) throw ArgumentError("e_matrix_element: N must be >= 2");
    SignedConstraintMatrix reduced = reduced_constraint_matrix(p1, p2, k);
    SolutionCount sc = count_congruence_snf(reduced);
    double solutions = sc.as_double(n);
    double exponent = -double(k) + 0.5 * double(p1.block_count() - p2.block_count());
    return {solutions * std::pow(double(n), exponent), MatrixElementValue::Path::counting};
}

std::complex<double> i_matrix_element(const SetPartition& p1, const SetPartition& p2,
                                      std::int64_t n, int k) {
    if (n < 2 * k) throw RegimeError("i_matrix_element: requires N >= 2k");
    double den = falling_factorial_d(n, p1.block_count()) *
                 falling_factorial_d(n, p2.block_count());
    double acc = 0.0;
    for (const SetPartition& c1 : coarsenings(p1)) {
        std::int64_t mu1 = mobius_closed_form(p1, c1);
        for (const SetPartition& c2 : coarsenings(p2)) {
            std::int64_t mu2 = mobius_closed_form(p2, c2);
            double num = std::pow(double(n), double(c1.block_count() + c2.block_count()));
            double coeff = double(mu1) * double(mu2) * std::sqrt(num / den);
            acc += coeff * e_matrix_element(c1, c2, n, k).value;
        }
    }
    return {acc, 0.0};
}

Eigen::MatrixXd i_element_matrix(const PartitionIndex& idx, std::int64_t n, int k) {
    if (idx.ground_size() != 2 * k)
        throw ArgumentError("i_element_matrix: index must cover {1..2k}");
    if (n < 2 * k) throw RegimeError("i_element_matrix: requires N >= 2k");
    std::int64_t b = idx.size();

    Eigen::MatrixXd e_mat(b, b);
    for (std::int64_t i = 0; i < b; ++i)
        for (std::int64_t j = 0; j < b; ++j)
            e_mat(i, j) = e_matrix_element(idx.at(i), idx.at(j), n, k).value;

    // positions and Mobius factors of each partition's coarsenings
    std::vector<std::vector<std::pair<std::int64_t, double>>> up(static_cast<size_t>(b));
    for (std::int64_t i = 0; i < b; ++i)
        for (const SetPartition& c : coarsenings(idx.at(i)))
            up[size_t(i)].push_back({idx.position(c), double(mobius_closed_form(idx.at(i), c))});

    Eigen::MatrixXd m(b, b);
    for (std::int64_t i = 0; i < b; ++i) {
        double ff_i = falling_factorial_d(n, idx.at(i).block_count());
        for (std::int64_t j = 0; j < b; ++j) {
            double den = ff_i * falling_factorial_d(n, idx.at(j).block_count());
            double acc = 0.0;
            for (const auto& [ci, mu1] : up[size_t(i)])
                for (const auto& [cj, mu2] : up[size_t(j)]) {
                    double num = std::pow(double(n), double(idx.at(ci).block_count() +
                                                            idx.at(cj).block_count()));
                    acc += mu1 * mu2 * std::sqrt(num / den) * e_mat(ci, cj);
                }
            m(i, j) = acc;
        }
    }
    return m;
}

MatrixElementValue e_matrix_element_dense(const SetPartition& p1, const SetPartition& p2,
                                          std::int64_t n, int k) {
    std::complex<double> s = phase_sum(p1, p2, n, k, false);
    double norm = std::pow(double(n), -(double(k) + 0.5 * double(p1.block_count() +
                                                                p2.block_count())));
    return {s.real() * norm, MatrixElementValue::Path::dense_oracle};
}

std::complex<double> i_matrix_element_dense(const SetPartition& p1, const SetPartition& p2,
                                            std::int64_t n, int k) {
    std::complex<double> s = phase_sum(p1, p2, n, k, true);
    double i1 = double(class_size_I(p1, n));
    double i2 = double(class_size_I(p2, n));
    if (i1 == 0.0 || i2 == 0.0)
        throw DegenerateClassError("i_matrix_element_dense: empty I-class");
    return s * std::pow(double(n), -double(k)) / std::sqrt(i1 * i2);
}

} // namespace tpx
