#ifndef HOMECONF_EVAL_HPP
#define HOMECONF_EVAL_HPP

#include <functional>
#include <string>
#include <vector>

#include "homeconf/detector.hpp"

namespace homeconf {

struct Confusion {
    long tp = 0;
    long fp = 0;
    long fn = 0;
};

/// Set arithmetic over canonical conflict identities (Conflict::key):
/// TP = |detected ∩ truth|, FP = |detected \ truth|, FN = |truth \ detected|.
Confusion confusion(const std::vector<Conflict>& detected,
                    const std::vector<Conflict>& truth);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// precision = TP/(TP+FP), recall = TP/(TP+FN), F1 their harmonic mean.
/// Degenerate denominators: an empty side scores 1 when nothing was there to
/// find (no misses/spurious hits), else 0; F1 = 0 when precision+recall = 0.
Prf prf(long tp, long fp, long fn);

struct BenchRow {
    int n_events = 0;
    double mean_ms = 0.0;
};

/// Runs `run(n)` once for warm-up then `runs` times per size, reporting the
/// mean wall-clock milliseconds.
std::vector<BenchRow> bench(const std::function<void(int)>& run,
                            const std::vector<int>& sizes, int runs = 10);

void save_bench_report(const std::vector<BenchRow>& rows, const std::string& path);

/// report.json for one scored run.
void save_eval_report(const Confusion& c, const Prf& p, const std::string& method,
                      const std::string& path);

}  // namespace homeconf

#endif
