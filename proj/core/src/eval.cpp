#include "homeconf/eval.hpp"

#include <chrono>
#include <fstream>
#include <set>

#include <json.hpp>

namespace homeconf {

using nlohmann::json;

Confusion confusion(const std::vector<Conflict>& detected,
                    const std::vector<Conflict>& truth) {
    std::set<std::string> det, tru;
    for (const auto& c : detected) det.insert(c.key());
    for (const auto& c : truth) tru.insert(c.key());
    Confusion out;
    for (const auto& k : det)
        tru.count(k) ? ++out.tp : ++out.fp;
    for (const auto& k : tru)
        if (!det.count(k)) ++out.fn;
    return out;
}

Prf prf(long tp, long fp, long fn) {
    if (tp < 0 || fp < 0 || fn < 0) throw std::invalid_argument("negative confusion count");
    Prf out;
    out.precision = (tp + fp == 0) ? (fn == 0 ? 1.0 : 0.0)
                                   : static_cast<double>(tp) / static_cast<double>(tp + fp);
    out.recall = (tp + fn == 0) ? (fp == 0 ? 1.0 : 0.0)
                                : static_cast<double>(tp) / static_cast<double>(tp + fn);
    out.f1 = (out.precision + out.recall == 0.0)
                 ? 0.0
                 : 2.0 * out.precision * out.recall / (out.precision + out.recall);
    return out;
}

std::vector<BenchRow> bench(const std::function<void(int)>& run,
                            const std::vector<int>& sizes, int runs) {
    std::vector<BenchRow> rows;
    for (int n : sizes) {
        run(n);  // warm-up, excluded
        double total_ms = 0.0;
        for (int r = 0; r < runs; ++r) {
            auto t0 = std::chrono::steady_clock::now();
            run(n);
            auto t1 = std::chrono::steady_clock::now();
            total_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
        rows.push_back(BenchRow{n, total_ms / runs});
    }
    return rows;
}

void save_bench_report(const std::vector<BenchRow>& rows, const std::string& path) {
    json j = json::array();
    for (const auto& row : rows)
        j.push_back({{"n_events", row.n_events}, {"mean_ms", row.mean_ms}});
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

void save_eval_report(const Confusion& c, const Prf& p, const std::string& method,
                      const std::string& path) {
    json j{{"method", method},
           {"tp", c.tp},
           {"fp", c.fp},
           {"fn", c.fn},
           {"precision", p.precision},
           {"recall", p.recall},
           {"f1", p.f1}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace homeconf
