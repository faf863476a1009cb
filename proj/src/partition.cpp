#include "tpx/partition.hpp"

#include <algorithm>
#include <numeric>

namespace tpx {

namespace {

void check_ground_size(int n) {
    if (n < 1) throw SizeLimitError("partition ground size must be >= 1");
    if (n > kMaxGroundSize)
        throw SizeLimitError("partition ground size " + std::to_string(n) +
                             " exceeds supported maximum " + std::to_string(kMaxGroundSize));
}

// First-occurrence relabelling: ids such that element 1 gets id 0 and each
// new block gets the next id. Uniquely identifies the partition.
std::vector<int> canonical_ids(int n, const std::vector<std::vector<int>>& blocks) {
    std::vector<int> ids(size_t(n), -1);
    for (size_t b = 0; b < blocks.size(); ++b)
        for (int e : blocks[b]) ids[size_t(e - 1)] = int(b);
    return ids;
}

// Packs a canonical id array (values < 16, length <= 12) into 64 bits.
std::uint64_t pack_ids(std::span<const int> ids) {
    std::uint64_t key = 0;
    for (size_t i = 0; i < ids.size(); ++i) key |= std::uint64_t(ids[i] & 0xf) << (4 * i);
    return key;
}

} // namespace

SetPartition::SetPartition(int ground_size, std::vector<std::vector<int>> blocks)
    : n_(ground_size), blocks_(std::move(blocks)) {
    check_ground_size(n_);
    std::vector<char> seen(size_t(n_) + 1, 0);
    for (auto& block : blocks_) {
        if (block.empty()) throw ArgumentError("SetPartition: empty block");
        std::sort(block.begin(), block.end());
        for (int e : block) {
            if (e < 1 || e > n_) throw ArgumentError("SetPartition: element out of range");
            if (seen[size_t(e)]) throw ArgumentError("SetPartition: duplicate element");
            seen[size_t(e)] = 1;
        }
    }
    for (int e = 1; e <= n_; ++e)
        if (!seen[size_t(e)]) throw ArgumentError("SetPartition: element missing from blocks");
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

SetPartition SetPartition::from_block_ids(int ground_size, std::span<const int> ids) {
    check_ground_size(ground_size);
    if (int(ids.size()) != ground_size)
        throw ArgumentError("from_block_ids: wrong label count");
    int max_id = *std::max_element(ids.begin(), ids.end());
    std::vector<std::vector<int>> blocks(size_t(max_id) + 1);
    for (int i = 0; i < ground_size; ++i) {
        if (ids[size_t(i)] < 0) throw ArgumentError("from_block_ids: negative label");
        blocks[size_t(ids[size_t(i)])].push_back(i + 1);
    }
    std::erase_if(blocks, [](const auto& b) { return b.empty(); });
    return {ground_size, std::move(blocks)};
}

SetPartition SetPartition::bottom(int ground_size) {
    std::vector<std::vector<int>> blocks;
    for (int e = 1; e <= ground_size; ++e) blocks.push_back({e});
    return {ground_size, std::move(blocks)};
}

SetPartition SetPartition::top(int ground_size) {
    std::vector<int> all(static_cast<size_t>(ground_size));
    std::iota(all.begin(), all.end(), 1);
    return {ground_size, {all}};
}

std::vector<int> SetPartition::block_ids() const { return canonical_ids(n_, blocks_); }

std::string SetPartition::serialize() const {
    std::string out;
    for (size_t b = 0; b < blocks_.size(); ++b) {
        if (b) out.push_back('|');
        for (size_t i = 0; i < blocks_[b].size(); ++i) {
            if (i) out.push_back(',');
            out += std::to_string(blocks_[b][i]);
        }
    }
    return out;
}

SetPartition SetPartition::parse(const std::string& text) {
    std::vector<std::vector<int>> blocks(1);
    int value = -1;
    int n = 0;
    auto flush = [&](bool new_block) {
        if (value < 0) throw ArgumentError("SetPartition::parse: malformed text");
        blocks.back().push_back(value);
        n = std::max(n, value);
        value = -1;
        if (new_block) blocks.emplace_back();
    };
    for (char c : text) {
        if (c >= '0' && c <= '9')
            value = (value < 0 ? 0 : value * 10) + (c - '0');
        else if (c == ',')
            flush(false);
        else if (c == '|')
            flush(true);
        else
            throw ArgumentError("SetPartition::parse: bad character");
    }
    flush(false);
    return {n, std::move(blocks)};
}

PartitionIndex::PartitionIndex(int ground_size) : n_(ground_size) {
    check_ground_size(n_);
    // Restricted-growth strings enumerate every partition exactly once.
    std::vector<int> rgs(size_t(n_), 0);
    std::vector<SetPartition> all;
    while (true) {
        all.push_back(SetPartition::from_block_ids(n_, rgs));
        int i = n_ - 1;
        for (; i > 0; --i) {
            int cap = *std::max_element(rgs.begin(), rgs.begin() + i) + 1;
            if (rgs[size_t(i)] < cap) {
                ++rgs[size_t(i)];
                std::fill(rgs.begin() + i + 1, rgs.end(), 0);
                break;
            }
            rgs[size_t(i)] = 0;
        }
        if (i == 0) break;
    }
    std::vector<std::string> keys(all.size());
    std::vector<std::int64_t> perm(all.size());
    for (size_t i = 0; i < all.size(); ++i) {
        keys[i] = all[i].serialize();
        perm[i] = std::int64_t(i);
    }
    std::sort(perm.begin(), perm.end(),
              [&](std::int64_t a, std::int64_t b) { return keys[size_t(a)] < keys[size_t(b)]; });
    order_.reserve(all.size());
    for (std::int64_t src : perm) order_.push_back(std::move(all[size_t(src)]));
    by_key_.reserve(order_.size() * 2);
    for (size_t i = 0; i < order_.size(); ++i)
        by_key_[pack_ids(order_[i].block_ids())] = std::int64_t(i);
}

std::int64_t PartitionIndex::position(const SetPartition& p) const {
    if (p.ground_size() != n_) throw ArgumentError("PartitionIndex: ground size mismatch");
    auto it = by_key_.find(pack_ids(p.block_ids()));
    if (it == by_key_.end()) throw ArgumentError("PartitionIndex: unknown partition");
    return it->second;
}

std::int64_t PartitionIndex::position_of_ids(std::span<const int> canonical_ids) const {
    auto it = by_key_.find(pack_ids(canonical_ids));
    if (it == by_key_.end()) throw ArgumentError("PartitionIndex: unknown labelling");
    return it->second;
}

PartitionIndex enumerate_partitions(int n) { return PartitionIndex(n); }

bool is_refinement(const SetPartition& p1, const SetPartition& p2) {
    if (p1.ground_size() != p2.ground_size())
        throw ArgumentError("is_refinement: ground size mismatch");
    std::vector<int> id2 = p2.block_ids();
    for (const auto& block : p1.blocks()) {
        int want = id2[size_t(block.front() - 1)];
        for (int e : block)
            if (id2[size_t(e - 1)] != want) return false;
    }
    return true;
}

SetPartition meet(const SetPartition& p1, const SetPartition& p2) {
    if (p1.ground_size() != p2.ground_size())
        throw ArgumentError("meet: ground size mismatch");
    int n = p1.ground_size();
    std::vector<int> id1 = p1.block_ids(), id2 = p2.block_ids();
    // Blocks of the meet are the nonempty pairwise intersections.
    std::unordered_map<std::int64_t, int> pair_to_block;
    std::vector<int> ids(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::int64_t key = std::int64_t(id1[size_t(i)]) * 64 + id2[size_t(i)];
        auto [it, fresh] = pair_to_block.try_emplace(key, int(pair_to_block.size()));
        (void)fresh;
        ids[size_t(i)] = it->second;
    }
    return SetPartition::from_block_ids(n, ids);
}

SetPartition join(const SetPartition& p1, const SetPartition& p2) {
    if (p1.ground_size() != p2.ground_size())
        throw ArgumentError("join: ground size mismatch");
    int n = p1.ground_size();
    std::vector<int> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[size_t(x)] != x) x = parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
        return x;
    };
    auto unite = [&](int a, int b) { parent[size_t(find(a))] = find(b); };
    for (const auto* p : {&p1, &p2})
        for (const auto& block : p->blocks())
            for (size_t i = 1; i < block.size(); ++i)
                unite(block[0] - 1, block[i] - 1);
    std::vector<int> ids(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ids[size_t(i)] = find(i);
    return SetPartition::from_block_ids(n, ids);
}

std::vector<SetPartition> coarsenings(const SetPartition& p) {
    int m = p.block_count();
    PartitionIndex grouping(m);
    std::vector<int> base = p.block_ids();
    std::vector<SetPartition> out;
    out.reserve(size_t(grouping.size()));
    for (std::int64_t g = 0; g < grouping.size(); ++g) {
        std::vector<int> group_id = grouping.at(g).block_ids();
        std::vector<int> ids(size_t(p.ground_size()));
        for (int e = 0; e < p.ground_size(); ++e)
            ids[size_t(e)] = group_id[size_t(base[size_t(e)])];
        out.push_back(SetPartition::from_block_ids(p.ground_size(), ids));
    }
    return out;
}

IntMatrix zeta_matrix(const PartitionIndex& idx) {
    if (idx.ground_size() > kMaxMatrixGroundSize)
        throw SizeLimitError("zeta_matrix: dense matrix limited to n <= 8");
    std::int64_t b = idx.size();
    IntMatrix z{b, b, std::vector<std::int64_t>(size_t(b * b), 0)};
    for (std::int64_t i = 0; i < b; ++i)
        for (const SetPartition& coarse : coarsenings(idx.at(i)))
            z.at(i, idx.position(coarse)) = 1;
    return z;
}

IntMatrix mobius_matrix(const PartitionIndex& idx) {
    if (idx.ground_size() > kMaxMatrixGroundSize)
        throw SizeLimitError("mobius_matrix: dense matrix limited to n <= 8");
    std::int64_t b = idx.size();
    // Order by descending block count: a linear extension of refinement,
    // so zeta becomes unit upper-triangular and back-substitution is exact.
    std::vector<std::int64_t> ext(static_cast<size_t>(b));
    std::iota(ext.begin(), ext.end(), 0);
    std::stable_sort(ext.begin(), ext.end(), [&](std::int64_t a, std::int64_t c) {
        return idx.at(a).block_count() > idx.at(c).block_count();
    });
    std::vector<std::int64_t> rank(static_cast<size_t>(b));
    for (std::int64_t r = 0; r < b; ++r) rank[size_t(ext[size_t(r)])] = r;

    // Sparse zeta rows in extension coordinates.
    std::vector<std::vector<std::int64_t>> above(static_cast<size_t>(b));
    for (std::int64_t i = 0; i < b; ++i) {
        for (const SetPartition& coarse : coarsenings(idx.at(i)))
            above[size_t(rank[size_t(i)])].push_back(rank[size_t(idx.position(coarse))]);
        std::sort(above[size_t(rank[size_t(i)])].begin(), above[size_t(rank[size_t(i)])].end());
    }

    IntMatrix mu{b, b, std::vector<std::int64_t>(size_t(b * b), 0)};
    auto mu_ext = [&](std::int64_t ri, std::int64_t rj) -> std::int64_t& {
        return mu.at(ext[size_t(ri)], ext[size_t(rj)]);
    };
    for (std::int64_t j = 0; j < b; ++j) {
        mu_ext(j, j) = 1;
        for (std::int64_t i = j - 1; i >= 0; --i) {
            std::int64_t acc = 0;
            for (std::int64_t c : above[size_t(i)])
                if (c > i && c <= j) acc += mu_ext(c, j);
            // zeta(i,i) = 1, so mu(i,j) = -sum_{c > i} zeta(i,c) mu(c,j).
            if (acc != 0) mu_ext(i, j) = -acc;
        }
    }
    return mu;
}

std::int64_t mobius_closed_form(const SetPartition& p1, const SetPartition& p2) {
    if (p1.ground_size() != p2.ground_size())
        throw ArgumentError("mobius_closed_form: ground size mismatch");
    if (!is_refinement(p1, p2)) return 0;
    std::vector<int> id2 = p2.block_ids();
    std::vector<std::int64_t> blocks_inside(size_t(p2.block_count()), 0);
    for (const auto& block : p1.blocks()) ++blocks_inside[size_t(id2[size_t(block.front() - 1)])];
    std::int64_t value = 1;
    for (std::int64_t b : blocks_inside) value *= factorial(int(b - 1));
    int sign_exp = p1.block_count() - p2.block_count();
    return (sign_exp % 2 == 0) ? value : -value;
}

boost::rational<std::int64_t> abs_mobius_sum(const SetPartition& p,
                                             const boost::rational<std::int64_t>& x) {
    boost::rational<std::int64_t> total(0);
    for (const SetPartition& coarse : coarsenings(p)) {
        std::int64_t mu = mobius_closed_form(p, coarse);
        boost::rational<std::int64_t> term(mu < 0 ? -mu : mu);
        for (int i = 0; i < coarse.block_count(); ++i) term *= x;
        total += term;
    }
    return total;
}

boost::rational<std::int64_t> rising_factorial(const boost::rational<std::int64_t>& x, int n) {
    boost::rational<std::int64_t> prod(1);
    for (int i = 0; i < n; ++i) prod *= x + boost::rational<std::int64_t>(i);
    return prod;
}

SetPartition perm_partition(std::span<const int> image) {
    int k = int(image.size());
    if (k < 1) throw ArgumentError("perm_partition: empty permutation");
    std::vector<char> hit(size_t(k), 0);
    for (int v : image) {
        if (v < 0 || v >= k || hit[size_t(v)])
            throw ArgumentError("perm_partition: image is not a bijection");
        hit[size_t(v)] = 1;
    }
    std::vector<std::vector<int>> blocks;
    blocks.reserve(size_t(k));
    for (int i = 0; i < k; ++i) blocks.push_back({i + 1, k + 1 + image[size_t(i)]});
    return {2 * k, std::move(blocks)};
}

std::vector<std::vector<int>> all_permutations(int k) {
    std::vector<int> perm(static_cast<size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

} // namespace tpx
