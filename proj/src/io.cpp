#include "percolab/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace percolab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

namespace {

std::string csv_header(const ExperimentManifest& manifest) {
    std::ostringstream out;
    out << "# percolab\n";
    out << "# manifest: " << manifest.canonical_json() << "\n";
    return out.str();
}

nlohmann::json record_to_json_obj(const EstimateRecord& r) {
    nlohmann::json j;
    j["experiment"] = r.experiment;
    j["event"] = r.event;
    j["sigma"] = r.sigma;
    j["n"] = r.n;
    j["m"] = r.m;
    j["p"] = r.p;
    j["q"] = r.q;
    j["trials"] = r.trials;
    j["hits"] = r.hits;
    j["unknowns"] = r.unknowns;
    j["estimate"] = r.estimate();
    j["ci_lo"] = r.ci_lo;
    j["ci_hi"] = r.ci_hi;
    j["seed"] = r.seed;
    return j;
}

}  // namespace

std::string records_to_csv(const ExperimentManifest& manifest,
                           const std::vector<EstimateRecord>& records) {
    std::ostringstream out;
    out << csv_header(manifest);
    out << "experiment,event,sigma,n,m,p,q,trials,hits,unknowns,ci_lo,ci_hi,seed\n";
    for (const auto& r : records) {
        out << r.experiment << ',' << r.event << ',' << r.sigma << ',' << r.n << ',' << r.m
            << ',' << format_double(r.p) << ',' << format_double(r.q) << ',' << r.trials << ','
            << r.hits << ',' << r.unknowns << ',' << format_double(r.ci_lo) << ','
            << format_double(r.ci_hi) << ',' << r.seed << '\n';
    }
    return out.str();
}

std::string records_to_json(const ExperimentManifest& manifest,
                            const std::vector<EstimateRecord>& records) {
    nlohmann::json j;
    j["manifest"] = nlohmann::json::parse(manifest.canonical_json());
    j["records"] = nlohmann::json::array();
    for (const auto& r : records) j["records"].push_back(record_to_json_obj(r));
    return j.dump(2) + "\n";
}

std::string ratio_series_to_csv(const ExperimentManifest& manifest,
                                const std::vector<RatioSeries>& series) {
    std::ostringstream out;
    out << csv_header(manifest);
    out << "experiment,sigma,n,num,num_unknown_rate,den,ratio,ratio_lo,ratio_hi,seed\n";
    for (const auto& s : series) {
        for (const auto& pt : s.points) {
            out << s.experiment << ',' << s.sigma << ',' << pt.n << ','
                << format_double(pt.numerator.estimate()) << ','
                << format_double(pt.numerator.unknown_rate()) << ','
                << format_double(pt.denominator.estimate()) << ',' << format_double(pt.ratio)
                << ',' << format_double(pt.ci_lo) << ',' << format_double(pt.ci_hi) << ','
                << pt.numerator.seed << '\n';
        }
    }
    return out.str();
}

std::string ratio_series_to_json(const ExperimentManifest& manifest,
                                 const std::vector<RatioSeries>& series) {
    nlohmann::json j;
    j["manifest"] = nlohmann::json::parse(manifest.canonical_json());
    j["series"] = nlohmann::json::array();
    for (const auto& s : series) {
        nlohmann::json js;
        js["experiment"] = s.experiment;
        js["sigma"] = s.sigma;
        js["points"] = nlohmann::json::array();
        for (const auto& pt : s.points) {
            nlohmann::json jp;
            jp["n"] = pt.n;
            jp["numerator"] = record_to_json_obj(pt.numerator);
            jp["denominator"] = record_to_json_obj(pt.denominator);
            jp["ratio"] = pt.ratio;
            jp["ratio_lo"] = pt.ci_lo;
            jp["ratio_hi"] = pt.ci_hi;
            js["points"].push_back(jp);
        }
        j["series"].push_back(js);
    }
    return j.dump(2) + "\n";
}

namespace {

struct LogRange {
    double lo = 0.0, hi = 1.0;
    void grow(double v) {
        if (v <= 0.0 || !std::isfinite(v)) return;
        double lv = std::log10(v);
        if (lv < lo) lo = lv;
        if (lv > hi) hi = lv;
    }
};

}  // namespace

std::string svg_loglog_plot(const std::string& title, const std::vector<PlotSeries>& series,
                            const std::vector<std::pair<double, double>>& fit_lines) {
    const int W = 640, H = 480, ML = 64, MR = 24, MT = 40, MB = 48;
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& s : series) {
        for (const auto& pt : s.points) {
            if (pt.x > 0) {
                xlo = std::min(xlo, std::log10(pt.x));
                xhi = std::max(xhi, std::log10(pt.x));
            }
            for (double v : {pt.y, pt.y_lo, pt.y_hi}) {
                if (v > 0 && std::isfinite(v)) {
                    ylo = std::min(ylo, std::log10(v));
                    yhi = std::max(yhi, std::log10(v));
                }
            }
        }
    }
    if (xlo > xhi) {
        xlo = 0;
        xhi = 1;
    }
    if (ylo > yhi) {
        ylo = -1;
        yhi = 0;
    }
    if (xhi - xlo < 1e-9) xhi = xlo + 1;
    if (yhi - ylo < 1e-9) yhi = ylo + 1;
    auto X = [&](double x) {
        return ML + (std::log10(x) - xlo) / (xhi - xlo) * (W - ML - MR);
    };
    auto Y = [&](double y) {
        return H - MB - (std::log10(y) - ylo) / (yhi - ylo) * (H - MT - MB);
    };

    static const char* colors[] = {"#1f6fb2", "#b2421f", "#3a9b3a", "#7a4fb2"};
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
        << "</text>\n";
    out << "<rect x='" << ML << "' y='" << MT << "' width='" << (W - ML - MR) << "' height='"
        << (H - MT - MB) << "' fill='none' stroke='#888'/>\n";
    // decade gridlines
    for (int d = static_cast<int>(std::ceil(xlo)); d <= static_cast<int>(std::floor(xhi)); ++d) {
        double px = ML + (d - xlo) / (xhi - xlo) * (W - ML - MR);
        out << "<line x1='" << format_double(px) << "' y1='" << MT << "' x2='"
            << format_double(px) << "' y2='" << (H - MB) << "' stroke='#ddd'/>\n";
        out << "<text x='" << format_double(px) << "' y='" << (H - MB + 18)
            << "' text-anchor='middle' font-size='11'>1e" << d << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ylo)); d <= static_cast<int>(std::floor(yhi)); ++d) {
        double py = H - MB - (d - ylo) / (yhi - ylo) * (H - MT - MB);
        out << "<line x1='" << ML << "' y1='" << format_double(py) << "' x2='" << (W - MR)
            << "' y2='" << format_double(py) << "' stroke='#ddd'/>\n";
        out << "<text x='" << (ML - 6) << "' y='" << format_double(py + 4)
            << "' text-anchor='end' font-size='11'>1e" << d << "</text>\n";
    }
    size_t ci = 0;
    for (const auto& [slope, amplitude] : fit_lines) {
        double x0 = std::pow(10.0, xlo), x1 = std::pow(10.0, xhi);
        double y0 = amplitude * std::pow(x0, slope), y1 = amplitude * std::pow(x1, slope);
        if (y0 > 0 && y1 > 0)
            out << "<line x1='" << format_double(X(x0)) << "' y1='" << format_double(Y(y0))
                << "' x2='" << format_double(X(x1)) << "' y2='" << format_double(Y(y1))
                << "' stroke='#aaa' stroke-dasharray='5,4'/>\n";
    }
    for (const auto& s : series) {
        const char* color = colors[ci++ % 4];
        for (const auto& pt : s.points) {
            if (pt.x <= 0 || pt.y <= 0) continue;
            double px = X(pt.x), py = Y(pt.y);
            if (pt.y_lo > 0 && pt.y_hi > 0)
                out << "<line x1='" << format_double(px) << "' y1='" << format_double(Y(pt.y_lo))
                    << "' x2='" << format_double(px) << "' y2='" << format_double(Y(pt.y_hi))
                    << "' stroke='" << color << "'/>\n";
            out << "<circle cx='" << format_double(px) << "' cy='" << format_double(py)
                << "' r='3.5' fill='" << color << "'/>\n";
        }
        out << "<text x='" << (ML + 10) << "' y='" << (MT + 16 + 16 * (ci - 1))
            << "' font-size='12' fill='" << color << "'>" << s.label << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace percolab
