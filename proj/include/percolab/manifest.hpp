#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace percolab {

/// Everything an experiment needs to be reproduced. Recorded verbatim into
/// every output file; a file can be re-run from its embedded manifest.
/// The worker-pool width is deliberately not part of the manifest: results
/// are independent of it, and outputs must be byte-identical across it.
struct ExperimentManifest {
    std::string experiment;
    std::string sigma = "OC";
    std::vector<int32_t> scales = {8, 16, 32, 64};
    int32_t n = 32;
    int32_t m = 1;
    int32_t k = 1;
    int32_t ann_inner = 4;
    int32_t ann_outer = 8;
    double p = 0.5;
    double q = 0.5;
    uint64_t trials = 10000;
    uint64_t trials_critical = 0;  // 0: use `trials`
    uint64_t seed = 1;
    int32_t horizon = 0;  // 0: horizon_multiplier * n
    int32_t horizon_multiplier = 8;
    double eps = 0.02;
    double slack = 0.005;
    double tolerance = 1e-3;
    double ratio_tolerance = 4.0;
    std::string suite;  // verify subcommand
    std::string out_csv;
    std::string out_json;
    std::string out_svg;

    std::string canonical_json() const;
    static ExperimentManifest from_json_text(const std::string& text);
    /// Flat TOML (key = value, arrays, strings, numbers, bools) or JSON,
    /// decided by content sniffing.
    static ExperimentManifest from_file(const std::string& path);

    uint64_t critical_trials() const { return trials_critical ? trials_critical : trials; }
    int32_t horizon_for(int32_t scale) const {
        return horizon ? horizon : horizon_multiplier * scale;
    }
};

}  // namespace percolab
