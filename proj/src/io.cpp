#include "tpx/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tpx::io {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ArgumentError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

struct RawEntries {
    std::int64_t n;
    std::vector<std::pair<Generator, double>> entries;
};

RawEntries parse_entries(const json& j, const std::string& path) {
    RawEntries out;
    if (!j.contains("n") || !j.contains("entries"))
        throw ArgumentError(path + ": ensemble file needs \"n\" and \"entries\"");
    out.n = j["n"].get<std::int64_t>();
    double sum = 0.0;
    for (const auto& e : j["entries"]) {
        double w = e.at("weight").get<double>();
        sum += w;
        const auto& op = e.at("op");
        std::string type = op.at("type").get<std::string>();
        if (type == "perm") {
            out.entries.push_back({PermGenerator{op.at("image").get<std::vector<int>>()}, w});
        } else if (type == "fourier") {
            out.entries.push_back({FourierGenerator{}, w});
        } else {
            throw ArgumentError(path + ": unknown generator type \"" + type + "\"");
        }
    }
    if (out.entries.empty()) throw ArgumentError(path + ": ensemble has no entries");
    if (std::abs(sum - 1.0) > 1e-9)
        throw ArgumentError(path + ": weights sum to " + fmt_double(sum) + ", expected 1");
    for (auto& [op, w] : out.entries) w /= sum;
    return out;
}

} // namespace

QuantumEnsemble load_quantum_ensemble(const std::string& path) {
    json j = parse_file(path);
    if (!j.contains("k")) throw ArgumentError(path + ": quantum ensemble needs \"k\"");
    RawEntries raw = parse_entries(j, path);
    QuantumEnsemble ens;
    ens.n = raw.n;
    ens.k = j["k"].get<int>();
    for (auto& [op, w] : raw.entries) ens.entries.push_back({std::move(op), w});
    ens.validate();
    return ens;
}

PermDistribution load_perm_distribution(const std::string& path) {
    json j = parse_file(path);
    RawEntries raw = parse_entries(j, path);
    PermDistribution nu;
    nu.n = raw.n;
    for (auto& [op, w] : raw.entries) {
        auto* p = std::get_if<PermGenerator>(&op);
        if (!p) throw ArgumentError(path + ": classical ensemble must contain only permutations");
        nu.entries.push_back({std::move(p->image), w});
    }
    nu.validate();
    return nu;
}

namespace {

void append_entries_json(std::ostringstream& os, const std::vector<QuantumEnsemble::Entry>& entries) {
    os << "\"entries\":[";
    for (size_t i = 0; i < entries.size(); ++i) {
        if (i) os << ",";
        os << "{\"op\":";
        if (const auto* p = std::get_if<PermGenerator>(&entries[i].op)) {
            os << "{\"type\":\"perm\",\"image\":[";
            for (size_t j = 0; j < p->image.size(); ++j) {
                if (j) os << ",";
                os << p->image[j];
            }
            os << "]}";
        } else if (std::get_if<FourierGenerator>(&entries[i].op)) {
            os << "{\"type\":\"fourier\"}";
        } else {
            throw ArgumentError("explicit generators have no file representation");
        }
        os << ",\"weight\":" << fmt_double(entries[i].weight) << "}";
    }
    os << "]";
}

} // namespace

std::string quantum_ensemble_json(const QuantumEnsemble& ens) {
    std::ostringstream os;
    os << "{\"n\":" << ens.n << ",\"k\":" << ens.k << ",";
    append_entries_json(os, ens.entries);
    os << "}\n";
    return os.str();
}

std::string perm_distribution_json(const PermDistribution& nu) {
    std::vector<QuantumEnsemble::Entry> entries;
    for (const auto& e : nu.entries) entries.push_back({PermGenerator{e.image}, e.weight});
    std::ostringstream os;
    os << "{\"n\":" << nu.n << ",";
    append_entries_json(os, entries);
    os << "}\n";
    return os.str();
}

std::string gap_report_json(const GapReport& r) {
    std::ostringstream os;
    auto opt = [&](const std::optional<double>& v) -> std::string {
        return v ? fmt_double(*v) : "null";
    };
    os << "{\"n\":" << r.n << ",\"k\":" << r.k << ",\"d\":" << r.d;
    os << ",\"lambda\":" << opt(r.lambda);
    os << ",\"bound\":";
    if (r.bound)
        os << fmt_double(*r.bound);
    else if (r.bound_vacuous)
        os << "\"vacuous\"";
    else
        os << "null";
    os << ",\"eps_c\":" << opt(r.eps_c);
    os << ",\"eps_a\":" << opt(r.eps_a);
    os << ",\"p\":" << opt(r.p);
    os << ",\"method\":\"" << r.method << "\"";
    os << ",\"residual\":" << fmt_double(r.residual);
    os << ",\"seed\":" << r.seed;
    if (!r.eps_a_source.empty()) os << ",\"eps_a_source\":\"" << r.eps_a_source << "\"";
    if (!r.class_lambdas.empty()) {
        os << ",\"classes\":[";
        for (size_t i = 0; i < r.class_lambdas.size(); ++i) {
            if (i) os << ",";
            os << "{\"partition\":\"" << r.class_lambdas[i].first
               << "\",\"lambda\":" << fmt_double(r.class_lambdas[i].second) << "}";
        }
        os << "],\"argmax_class\":\"" << r.argmax_class << "\"";
    }
    os << "}\n";
    return os.str();
}

std::string design_spec_json(const DesignSpec& spec, std::optional<double> distance) {
    std::ostringstream os;
    os << "{\"base\":\"" << spec.base_ref << "\"";
    os << ",\"m\":" << spec.m;
    os << ",\"epsilon\":" << fmt_double(spec.epsilon_target);
    os << ",\"lambda_used\":" << fmt_double(spec.lambda_used);
    os << ",\"word_count\":\"" << spec.word_count << "\"";
    if (distance) os << ",\"distance\":" << fmt_double(*distance);
    os << "}\n";
    return os.str();
}

std::string partition_index_json(const PartitionIndex& idx) {
    std::ostringstream os;
    os << "[";
    for (std::int64_t i = 0; i < idx.size(); ++i) {
        if (i) os << ",";
        os << "\"" << idx.at(i).serialize() << "\"";
    }
    os << "]\n";
    return os.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ArgumentError("cannot write file: " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ArgumentError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace tpx::io
