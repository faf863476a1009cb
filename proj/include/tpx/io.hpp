#ifndef TPX_IO_HPP
#define TPX_IO_HPP

#include <optional>
#include <string>

#include "tpx/design.hpp"
#include "tpx/gap_analysis.hpp"
#include "tpx/moment_ops.hpp"
#include "tpx/partition.hpp"

namespace tpx::io {

// Doubles are printed with 17 significant digits (round-trip exact), so
// report bodies are byte-identical across reruns with the same seed.
std::string fmt_double(double v);

// Ensemble files:
// { "n": N, "k": k, "entries": [ {"op": {"type": "perm", "image": [...]},
//   "weight": w}, {"op": {"type": "fourier"}, "weight": w} ] }
// Classical permutation files use the same schema without "k". Weights
// must sum to 1 within 1e-9 on load and are renormalized exactly.
QuantumEnsemble load_quantum_ensemble(const std::string& path);
PermDistribution load_perm_distribution(const std::string& path);
std::string quantum_ensemble_json(const QuantumEnsemble& ens);
std::string perm_distribution_json(const PermDistribution& nu);

std::string gap_report_json(const GapReport& report);
std::string design_spec_json(const DesignSpec& spec, std::optional<double> distance);

// JSON array of canonical partition serializations.
std::string partition_index_json(const PartitionIndex& idx);

// temp file + rename, so readers never observe a partial file.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

} // namespace tpx::io

#endif
