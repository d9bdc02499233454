#include "percolab/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace percolab {

namespace {

using nlohmann::json;

json to_json(const ExperimentManifest& m) {
    json j;
    j["experiment"] = m.experiment;
    j["sigma"] = m.sigma;
    j["scales"] = m.scales;
    j["n"] = m.n;
    j["m"] = m.m;
    j["k"] = m.k;
    j["ann_inner"] = m.ann_inner;
    j["ann_outer"] = m.ann_outer;
    j["p"] = m.p;
    j["q"] = m.q;
    j["trials"] = m.trials;
    j["trials_critical"] = m.trials_critical;
    j["seed"] = m.seed;
    j["horizon"] = m.horizon;
    j["horizon_multiplier"] = m.horizon_multiplier;
    j["eps"] = m.eps;
    j["slack"] = m.slack;
    j["tolerance"] = m.tolerance;
    j["ratio_tolerance"] = m.ratio_tolerance;
    j["suite"] = m.suite;
    j["out_csv"] = m.out_csv;
    j["out_json"] = m.out_json;
    j["out_svg"] = m.out_svg;
    return j;
}

void apply_json(ExperimentManifest& m, const json& j) {
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("experiment", m.experiment);
    get("sigma", m.sigma);
    get("scales", m.scales);
    get("n", m.n);
    get("m", m.m);
    get("k", m.k);
    get("ann_inner", m.ann_inner);
    get("ann_outer", m.ann_outer);
    get("p", m.p);
    get("q", m.q);
    get("trials", m.trials);
    get("trials_critical", m.trials_critical);
    get("seed", m.seed);
    get("horizon", m.horizon);
    get("horizon_multiplier", m.horizon_multiplier);
    get("eps", m.eps);
    get("slack", m.slack);
    get("tolerance", m.tolerance);
    get("ratio_tolerance", m.ratio_tolerance);
    get("suite", m.suite);
    get("out_csv", m.out_csv);
    get("out_json", m.out_json);
    get("out_svg", m.out_svg);
}

/// Flat TOML subset: `key = value` lines, strings in double quotes, integer
/// and float literals, true/false, and one-line arrays of those. Comments
/// start with '#'. Tables/sections are rejected: manifests are flat.
json parse_flat_toml(const std::string& text) {
    json out = json::object();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("manifest line " + std::to_string(lineno) + ": " + why);
    };
    auto parse_scalar = [&](std::string tok) -> json {
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t");
            size_t b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        tok = trim(tok);
        if (tok.empty()) fail("empty value");
        if (tok.front() == '"') {
            if (tok.size() < 2 || tok.back() != '"') fail("unterminated string");
            return tok.substr(1, tok.size() - 2);
        }
        if (tok == "true") return true;
        if (tok == "false") return false;
        try {
            if (tok.find_first_of(".eE") != std::string::npos) return std::stod(tok);
            if (tok.front() == '-') return static_cast<int64_t>(std::stoll(tok));
            return static_cast<uint64_t>(std::stoull(tok));
        } catch (const std::exception&) {
            fail("cannot parse value '" + tok + "'");
        }
        return {};
    };

    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t b = line.find_last_not_of(" \t\r");
        line = line.substr(a, b - a + 1);
        if (line.front() == '[') fail("tables are not supported; manifests are flat");
        size_t eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        std::string key = line.substr(0, eq);
        size_t ke = key.find_last_not_of(" \t");
        key = key.substr(0, ke + 1);
        std::string val = line.substr(eq + 1);
        size_t va = val.find_first_not_of(" \t");
        if (va == std::string::npos) fail("missing value");
        val = val.substr(va);
        if (val.front() == '[') {
            if (val.back() != ']') fail("arrays must close on the same line");
            json arr = json::array();
            std::string body = val.substr(1, val.size() - 2);
            std::string item;
            std::istringstream items(body);
            while (std::getline(items, item, ',')) arr.push_back(parse_scalar(item));
            out[key] = arr;
        } else {
            out[key] = parse_scalar(val);
        }
    }
    return out;
}

}  // namespace

std::string ExperimentManifest::canonical_json() const {
    return to_json(*this).dump();  // nlohmann object keys are sorted
}

ExperimentManifest ExperimentManifest::from_json_text(const std::string& text) {
    ExperimentManifest m;
    apply_json(m, json::parse(text));
    return m;
}

ExperimentManifest ExperimentManifest::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open manifest file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    size_t first = text.find_first_not_of(" \t\r\n");
    ExperimentManifest m;
    if (first != std::string::npos && text[first] == '{') {
        apply_json(m, json::parse(text));
    } else {
        apply_json(m, parse_flat_toml(text));
    }
    return m;
}

}  // namespace percolab
