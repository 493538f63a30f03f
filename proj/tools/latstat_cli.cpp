// latstat command-line harness: enumerates minimal-completion statistics of a
// planar lattice and serializes them as CSV/JSON/SVG.
//
// Subcommands: enumerate, stats, weyl, orbit-count, series, report.
// Exit codes: 0 ok, 2 configuration error, 3 coordinate overflow guard,
// 4 empty sample, 5 outside the series convergence domain, 6 unwritable
// output path.

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "latstat/latstat.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace latstat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitOverflow = 3;
constexpr int kExitEmpty = 4;
constexpr int kExitDomain = 5;
constexpr int kExitOutput = 6;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact mode is enabled when x parses as a small rational and x^2+y^2 stays
// small as well; long decimals (den(x) > 1e3 or den(x^2+y^2) > 1e6) take the
// float path so that 64-bit rational arithmetic cannot overflow mid-run.
LatticeShape parse_lattice(const std::string& z_text) {
    auto comma = z_text.find(',');
    if (comma == std::string::npos)
        throw ConfigError("--z expects 'x,y' (e.g. --z 0,1 for the square lattice)");
    std::string xs = z_text.substr(0, comma);
    std::string ys = z_text.substr(comma + 1);
    char* end = nullptr;
    double x = std::strtod(xs.c_str(), &end);
    if (end == xs.c_str() || *end != '\0') throw ConfigError("--z: cannot parse x component");
    double y = std::strtod(ys.c_str(), &end);
    if (end == ys.c_str() || *end != '\0') throw ConfigError("--z: cannot parse y component");
    if (!(y > 0.0)) throw ConfigError("--z: y must be > 0");

    auto xr = parse_decimal_rational(xs);
    auto yr = parse_decimal_rational(ys);
    if (xr && yr) {
        try {
            Rat r = *xr * *xr + *yr * *yr;
            if (xr->den() <= 1000 && r.den() <= 1000000)
                return LatticeShape::from_exact(*xr, r, y);
        } catch (const OverflowGuard&) {
            // fall through to the float path
        }
    }
    return LatticeShape::from_xy(x, y);
}

std::complex<double> parse_complex(const std::string& text) {
    auto comma = text.find(',');
    std::string res = comma == std::string::npos ? text : text.substr(0, comma);
    std::string ims = comma == std::string::npos ? "" : text.substr(comma + 1);
    char* end = nullptr;
    double re = std::strtod(res.c_str(), &end);
    if (end == res.c_str() || *end != '\0') throw ConfigError("--s: cannot parse real part");
    double im = 0.0;
    if (!ims.empty()) {
        im = std::strtod(ims.c_str(), &end);
        if (end == ims.c_str() || *end != '\0')
            throw ConfigError("--s: cannot parse imaginary part");
    }
    return {re, im};
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputError("cannot open output path: " + path);
    out << content;
    if (!out) throw OutputError("cannot write output path: " + path);
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_text(out_path, content);
}

struct CommonOpts {
    std::string z_text = "0,1";
    double max_norm = 0.0;
    double epsilon = 0.0;
    bool has_T = false;
    bool has_eps = false;
    int workers = 1;
    std::string out_path;
    std::string format;
};

EnumSpec make_spec(const CommonOpts& o, const LatticeShape& L) {
    if (o.has_T && o.has_eps) throw ConfigError("--max-norm and --epsilon are mutually exclusive");
    if (o.has_T) {
        if (!(o.max_norm > 0.0)) throw ConfigError("--max-norm must be > 0");
        return EnumSpec::by_norm(L, o.max_norm, 1024, o.workers);
    }
    if (o.has_eps) {
        if (!(o.epsilon > 0.0)) throw ConfigError("--epsilon must be > 0");
        return EnumSpec::by_epsilon(L, o.epsilon, 1024, o.workers);
    }
    throw ConfigError("one of --max-norm or --epsilon is required");
}

std::string csv_enumerate(const EnumResult& res) {
    std::string out = "c,d,a,b,norm_sq,sk,rho,im\n";
    for (const OrbitSample& s : res.samples) {
        out += std::to_string(s.c);
        out += ',';
        out += std::to_string(s.d);
        out += ',';
        out += std::to_string(s.a);
        out += ',';
        out += std::to_string(s.b);
        out += ',';
        out += fmt17(s.norm_sq);
        out += ',';
        out += fmt17(s.sk);
        out += ',';
        out += fmt17(s.rho);
        out += ',';
        out += fmt17(s.im);
        out += '\n';
    }
    return out;
}

json json_enumerate(const EnumResult& res) {
    json rows = json::array();
    for (const OrbitSample& s : res.samples) {
        rows.push_back(json{{"c", s.c},
                            {"d", s.d},
                            {"a", s.a},
                            {"b", s.b},
                            {"norm_sq", s.norm_sq},
                            {"sk", s.sk},
                            {"rho", s.rho},
                            {"im", s.im}});
    }
    return rows;
}

struct StatsBundle {
    std::int64_t n = 0;
    double discrepancy_sk = 0.0;
    double discrepancy_rho = 0.0;
    WeylReport weyl;
    HistogramReport hist;
    CountReport count;
};

StatsBundle compute_stats(const EnumResult& res, const std::vector<long long>& ms,
                          int bins) {
    StatsBundle b;
    b.n = res.count;
    std::vector<double> sk, rho;
    sk.reserve(res.samples.size());
    rho.reserve(res.samples.size());
    for (const OrbitSample& s : res.samples) {
        sk.push_back(s.sk);
        rho.push_back(s.rho);
    }
    ModOneSample msk = reduce_mod_one(sk);
    ModOneSample mrho = reduce_mod_one(rho);
    b.discrepancy_sk = star_discrepancy(msk);
    b.discrepancy_rho = star_discrepancy(mrho);
    b.weyl = weyl_sums(msk, ms);
    b.hist = histogram(msk, bins);
    b.count.count = 2 * res.count;
    b.count.predicted = res.predicted;
    b.count.relative_error =
        std::abs(static_cast<double>(b.count.count) - b.count.predicted) / b.count.predicted;
    return b;
}

json stats_json(const StatsBundle& b) {
    json weyl = json::array();
    for (size_t i = 0; i < b.weyl.ms.size(); ++i) {
        weyl.push_back(json{{"m", b.weyl.ms[i]},
                            {"re", b.weyl.sums[i].real()},
                            {"im", b.weyl.sums[i].imag()},
                            {"normalized", b.weyl.normalized[i]}});
    }
    return json{{"schema", 1},
                {"n", b.n},
                {"discrepancy_sk", b.discrepancy_sk},
                {"discrepancy_rho", b.discrepancy_rho},
                {"weyl", weyl},
                {"histogram",
                 json{{"bins", b.hist.bins},
                      {"counts", b.hist.counts},
                      {"chi_square", b.hist.chi_square}}},
                {"count_prediction",
                 json{{"count", b.count.count},
                      {"predicted", b.count.predicted},
                      {"relative_error", b.count.relative_error}}}};
}

int handle_empty(const EnumResult& res) {
    json doc{{"schema", 1}, {"n", 0}};
    std::cout << doc.dump(2) << '\n';
    std::cerr << "empty sample: no primitive vectors within the requested bound (predicted "
              << res.predicted << ")\n";
    return kExitEmpty;
}

// --- subcommand bodies -----------------------------------------------------

int cmd_enumerate(const CommonOpts& o) {
    LatticeShape L = parse_lattice(o.z_text);
    EnumSpec spec = make_spec(o, L);
    EnumResult res = enumerate(spec);
    if (o.format == "json")
        emit(o.out_path, json_enumerate(res).dump(2) + "\n");
    else
        emit(o.out_path, csv_enumerate(res));
    return kExitOk;
}

int cmd_stats(const CommonOpts& o, const std::vector<long long>& ms, int bins, bool weyl_only) {
    if (!o.format.empty() && o.format != "json")
        throw ConfigError("stats and weyl emit JSON only");
    if (bins < 2) throw ConfigError("--bins must be >= 2");
    for (long long m : ms)
        if (m == 0) throw ConfigError("--m-list frequencies must be nonzero");
    LatticeShape L = parse_lattice(o.z_text);
    EnumSpec spec = make_spec(o, L);
    EnumResult res = enumerate(spec);
    if (res.count == 0) return handle_empty(res);
    StatsBundle b = compute_stats(res, ms, bins);
    json doc;
    if (weyl_only) {
        json full = stats_json(b);
        doc = json{{"schema", 1}, {"n", full["n"]}, {"weyl", full["weyl"]}};
    } else {
        doc = stats_json(b);
    }
    emit(o.out_path, doc.dump(2) + "\n");
    return kExitOk;
}

int cmd_orbit_count(const CommonOpts& o, const std::vector<double>& eps_grid) {
    LatticeShape L = parse_lattice(o.z_text);
    std::vector<OrbitCountRow> rows;
    try {
        rows = orbit_count_scaling(L, eps_grid);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (o.format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back(json{{"epsilon", r.eps},
                               {"count", r.count},
                               {"eps_times_count", r.eps_times_count}});
        emit(o.out_path, arr.dump(2) + "\n");
    } else {
        std::string out = "epsilon,count,eps_times_count\n";
        for (const auto& r : rows) {
            out += fmt17(r.eps);
            out += ',';
            out += std::to_string(r.count);
            out += ',';
            out += fmt17(r.eps_times_count);
            out += '\n';
        }
        emit(o.out_path, out);
    }
    return kExitOk;
}

int cmd_series(const CommonOpts& o, long long m, const std::string& s_text, double trunc,
               bool laplacian_check, double h) {
    if (!o.format.empty() && o.format != "json")
        throw ConfigError("series emits JSON only");
    LatticeShape L = parse_lattice(o.z_text);
    std::complex<double> s = parse_complex(s_text);
    if (!(trunc > 0.0)) throw ConfigError("--trunc must be > 0");
    SeriesPoint pt = eval_series(L, m, s, trunc, o.workers);
    json doc{{"schema", 1},
             {"m", pt.m},
             {"s", json::array({pt.s.real(), pt.s.imag()})},
             {"trunc", pt.trunc},
             {"value", json::array({pt.value.real(), pt.value.imag()})},
             {"tail_bound", pt.tail_bound}};
    bool is_square_lattice = (L.x == 0.0 && L.y == 1.0);
    if (is_square_lattice && m == 0 && s.imag() == 0.0)
        doc["reference"] = eisenstein_reference(s.real());
    if (laplacian_check) {
        if (s.imag() != 0.0) throw ConfigError("--laplacian-check requires a real --s");
        LaplacianReport rep = laplacian_residual(L, m, s.real(), trunc, h, o.workers);
        doc["laplacian_check"] = json{{"lhs", json::array({rep.lhs.real(), rep.lhs.imag()})},
                                      {"rhs", json::array({rep.rhs.real(), rep.rhs.imag()})},
                                      {"rel_err", rep.rel_err},
                                      {"h", rep.h}};
    }
    emit(o.out_path, doc.dump(2) + "\n");
    return kExitOk;
}

std::string histogram_svg(const HistogramReport& hist, std::int64_t n) {
    const double width = 800.0, height = 500.0;
    const double ml = 60.0, mr = 20.0, mt = 20.0, mb = 40.0;
    const double pw = width - ml - mr, ph = height - mt - mb;
    std::int64_t cmax = 1;
    for (auto c : hist.counts) cmax = std::max(cmax, c);
    double ymax = static_cast<double>(cmax) * 1.1;
    auto fx = [&](double t) { return ml + t * pw; };           // t in [0,1]
    auto fy = [&](double c) { return mt + ph * (1.0 - c / ymax); };
    char buf[256];
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n";
    svg += "  <rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    for (size_t k = 0; k < hist.counts.size(); ++k) {
        double x0 = fx(static_cast<double>(k) / hist.bins);
        double x1 = fx(static_cast<double>(k + 1) / hist.bins);
        double ytop = fy(static_cast<double>(hist.counts[k]));
        std::snprintf(buf, sizeof(buf),
                      "  <rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" "
                      "fill=\"steelblue\" stroke=\"none\"/>\n",
                      x0, ytop, x1 - x0, mt + ph - ytop);
        svg += buf;
    }
    // uniform-density reference line at n / bins
    double yref = fy(static_cast<double>(n) / hist.bins);
    std::snprintf(buf, sizeof(buf),
                  "  <line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"crimson\" "
                  "stroke-dasharray=\"6 3\"/>\n",
                  fx(0.0), yref, fx(1.0), yref);
    svg += buf;
    // axes
    std::snprintf(buf, sizeof(buf),
                  "  <line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"black\"/>\n",
                  ml, mt, ml, mt + ph);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "  <line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"black\"/>\n",
                  ml, mt + ph, ml + pw, mt + ph);
    svg += buf;
    for (int i = 0; i <= 4; ++i) {
        double t = i / 4.0;
        std::snprintf(buf, sizeof(buf),
                      "  <text x=\"%.3f\" y=\"%.3f\" font-size=\"12\" "
                      "text-anchor=\"middle\">%.2f</text>\n",
                      fx(t), mt + ph + 18.0, -0.5 + t);
        svg += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%.3f\" y=\"%.3f\" font-size=\"12\" text-anchor=\"end\">%lld</text>\n",
                  ml - 6.0, yref + 4.0, static_cast<long long>(n / hist.bins));
    svg += buf;
    svg += "  <text x=\"430\" y=\"495\" font-size=\"13\" text-anchor=\"middle\">sk(v) in "
           "(-1/2, 1/2]</text>\n";
    svg += "</svg>\n";
    return svg;
}

int cmd_report(const CommonOpts& o, const std::vector<long long>& ms, int bins,
               const std::string& out_dir) {
    if (bins < 2) throw ConfigError("--bins must be >= 2");
    LatticeShape L = parse_lattice(o.z_text);
    if (!o.has_T) throw ConfigError("report requires --max-norm");
    EnumSpec spec = make_spec(o, L);
    EnumResult res = enumerate(spec);
    if (res.count == 0) return handle_empty(res);
    StatsBundle b = compute_stats(res, ms, bins);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) throw OutputError("cannot create directory: " + out_dir);

    // discrepancy vs T at a fixed geometric grid below the requested bound
    std::string csv = "T,n,discrepancy_sk,discrepancy_rho\n";
    const double T = spec.equivalent_T();
    for (double frac : {0.125, 0.25, 0.5, 1.0}) {
        double Ti = T * frac;
        EnumResult ri = enumerate(EnumSpec::by_norm(L, Ti, 1024, o.workers));
        if (ri.count == 0) continue;
        std::vector<double> sk, rho;
        for (const OrbitSample& s : ri.samples) {
            sk.push_back(s.sk);
            rho.push_back(s.rho);
        }
        csv += fmt17(Ti);
        csv += ',';
        csv += std::to_string(ri.count);
        csv += ',';
        csv += fmt17(star_discrepancy(reduce_mod_one(sk)));
        csv += ',';
        csv += fmt17(star_discrepancy(reduce_mod_one(rho)));
        csv += '\n';
    }

    std::int64_t inwin = 0;
    std::vector<double> rho;
    for (const OrbitSample& s : res.samples) rho.push_back(s.rho);
    for (double r : reduce_mod_one(rho).values)
        if (r > -0.25 && r < 0.0) ++inwin;

    std::ostringstream md;
    md << "# Lattice statistics report\n\n";
    md << "- lattice: z = " << fmt17(L.x) << " + " << fmt17(L.y) << "i (area " << fmt17(L.area)
       << ", mu " << fmt17(L.mu) << ", " << (L.exact ? "exact" : "float") << " mode)\n";
    md << "- max norm T = " << fmt17(T) << "\n";
    md << "- samples (one per +-class): " << b.n << "\n\n";
    md << "## Equidistribution\n\n";
    md << "- star discrepancy of sk: " << fmt17(b.discrepancy_sk) << "\n";
    md << "- star discrepancy of rho: " << fmt17(b.discrepancy_rho) << "\n";
    md << "- fraction of rho in (-1/4, 0): "
       << fmt17(static_cast<double>(inwin) / static_cast<double>(b.n)) << " (uniform: 0.25)\n";
    md << "- histogram chi-square (" << bins << " bins): " << fmt17(b.hist.chi_square) << "\n\n";
    md << "## Weyl sums\n\n| m | |S_m|/n |\n|---|--------|\n";
    for (size_t i = 0; i < b.weyl.ms.size(); ++i)
        md << "| " << b.weyl.ms[i] << " | " << fmt17(b.weyl.normalized[i]) << " |\n";
    md << "\n## Counting\n\n";
    md << "- primitive vectors (v and -v counted): " << b.count.count << "\n";
    md << "- asymptotic prediction (1/zeta(2)) (pi/area) T^2: " << fmt17(b.count.predicted)
       << "\n";
    md << "- relative error: " << fmt17(b.count.relative_error) << "\n";

    const std::string svg_path = (fs::path(out_dir) / "histogram.svg").string();
    const std::string csv_path = (fs::path(out_dir) / "discrepancy_vs_T.csv").string();
    const std::string md_path = (fs::path(out_dir) / "summary.md").string();
    write_text(svg_path, histogram_svg(b.hist, b.n));
    write_text(csv_path, csv);
    write_text(md_path, md.str());
    std::cout << svg_path << '\n' << csv_path << '\n' << md_path << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal lattice-basis completions and their mod-one statistics"};
    app.require_subcommand(1);

    CommonOpts o;
    std::vector<long long> ms = {1, 2, 3, 4, 5};
    int bins = 50;
    long long series_m = 0;
    std::string s_text = "2";
    double trunc = 1000.0;
    bool laplacian_check = false;
    double h = 1e-3;
    std::vector<double> eps_grid;
    std::string report_dir = "report";

    auto add_common = [&](CLI::App* sub, bool with_bound) {
        sub->add_option("--z", o.z_text, "lattice shape as 'x,y' for z = x + iy")->required();
        if (with_bound) {
            auto* t = sub->add_option("--max-norm", o.max_norm, "include |v| <= T");
            auto* e = sub->add_option("--epsilon", o.epsilon, "include Im(gamma z) >= eps");
            t->excludes(e);
            e->excludes(t);
        }
        sub->add_option("--workers", o.workers, "parallel enumeration workers")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", o.out_path, "write to file instead of stdout");
        sub->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* c_enum = app.add_subcommand("enumerate", "emit one CSV row per sample");
    add_common(c_enum, true);

    CLI::App* c_stats = app.add_subcommand("stats", "equidistribution statistics as JSON");
    add_common(c_stats, true);
    c_stats->add_option("--m-list", ms, "Weyl frequencies")->delimiter(',');
    c_stats->add_option("--bins", bins, "histogram bins");

    CLI::App* c_weyl = app.add_subcommand("weyl", "Weyl sums only, as JSON");
    add_common(c_weyl, true);
    c_weyl->add_option("--m-list", ms, "Weyl frequencies")->delimiter(',');

    CLI::App* c_orbit = app.add_subcommand("orbit-count", "N(eps) scaling table");
    add_common(c_orbit, false);
    c_orbit->add_option("--epsilon", eps_grid, "strictly decreasing eps grid")
        ->required()
        ->delimiter(',');

    CLI::App* c_series = app.add_subcommand("series", "truncated V_m(z,s) evaluation");
    add_common(c_series, false);
    c_series->add_option("--m", series_m, "series frequency m");
    c_series->add_option("--s", s_text, "s as 're' or 're,im'; requires Re(s) > 1");
    c_series->add_option("--trunc", trunc, "norm cutoff for included cosets")->required();
    c_series->add_flag("--laplacian-check", laplacian_check,
                       "verify (Delta - s(1-s)) V_m = (2 pi m)^2 V_m(s+2)");
    c_series->add_option("--step", h, "finite-difference step for --laplacian-check");

    CLI::App* c_report = app.add_subcommand("report", "write SVG/CSV/Markdown artifacts");
    add_common(c_report, true);
    c_report->add_option("--m-list", ms, "Weyl frequencies")->delimiter(',');
    c_report->add_option("--bins", bins, "histogram bins");
    c_report->add_option("--out-dir", report_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    }

    o.has_T = c_enum->count("--max-norm") || c_stats->count("--max-norm") ||
              c_weyl->count("--max-norm") || c_report->count("--max-norm");
    o.has_eps = c_enum->count("--epsilon") || c_stats->count("--epsilon") ||
                c_weyl->count("--epsilon");

    try {
        if (*c_enum) return cmd_enumerate(o);
        if (*c_stats) return cmd_stats(o, ms, bins, false);
        if (*c_weyl) return cmd_stats(o, ms, bins, true);
        if (*c_orbit) return cmd_orbit_count(o, eps_grid);
        if (*c_series) return cmd_series(o, series_m, s_text, trunc, laplacian_check, h);
        if (*c_report) return cmd_report(o, ms, bins, report_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const OverflowGuard& e) {
        std::cerr << "overflow guard: " << e.what() << '\n';
        return kExitOverflow;
    } catch (const EmptySample& e) {
        std::cerr << "empty sample: " << e.what() << '\n';
        return kExitEmpty;
    } catch (const ConvergenceDomain& e) {
        std::cerr << "convergence domain: " << e.what() << '\n';
        return kExitDomain;
    } catch (const OutputError& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return kExitOutput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kExitConfig;
}
