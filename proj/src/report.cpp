#include "heis/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace heis {

using nlohmann::json;

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RateFit fit_loglog(std::span<const double> param, std::span<const double> err, int min_points) {
    if (param.size() != err.size()) throw std::invalid_argument("fit_loglog: length mismatch");
    if (static_cast<int>(param.size()) < min_points)
        throw std::invalid_argument("fit_loglog: ladder needs at least " + std::to_string(min_points) + " points");
    const size_t n = param.size();
    std::vector<double> lx(n), ly(n);
    for (size_t i = 0; i < n; ++i) {
        if (!(param[i] > 0.0) || !(err[i] > 0.0))
            throw std::invalid_argument("fit_loglog: parameters and errors must be positive");
        lx[i] = std::log(param[i]);
        ly[i] = std::log(err[i]);
    }
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    RateFit fit;
    fit.npoints = static_cast<int>(n);
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ssr += r * r;
    }
    fit.stderr_slope = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
    fit.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    return fit;
}

void ConvergenceReport::add_row(std::span<const double> row) {
    if (row.size() != columns.size()) throw std::invalid_argument("ConvergenceReport: row width mismatch");
    rows.emplace_back(row.begin(), row.end());
}

void ConvergenceReport::add_check(const std::string& name, bool pass) { checks.push_back({name, pass}); }

bool ConvergenceReport::all_pass() const {
    for (const auto& [name, ok] : checks)
        if (!ok) return false;
    return true;
}

std::vector<double> ConvergenceReport::column(const std::string& name) const {
    for (size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] != name) continue;
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
    throw std::invalid_argument("ConvergenceReport: unknown column " + name);
}

std::string ConvergenceReport::to_csv() const {
    std::ostringstream os;
    for (size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
    os << "\n";
    for (const auto& r : rows) {
        for (size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << format_g17(r[c]);
        os << "\n";
    }
    return os.str();
}

std::string ConvergenceReport::to_json_text() const {
    json j;
    j["schema_version"] = schema_version;
    j["experiment"] = experiment;
    j["columns"] = columns;
    j["rows"] = rows;
    json jchecks = json::array();
    for (const auto& [name, ok] : checks) jchecks.push_back({{"name", name}, {"pass", ok}});
    j["checks"] = jchecks;
    json jfits = json::object();
    for (const auto& [name, f] : fits)
        jfits[name] = {{"slope", f.slope},
                       {"intercept", f.intercept},
                       {"stderr_slope", f.stderr_slope},
                       {"r2", f.r2},
                       {"npoints", f.npoints}};
    j["fits"] = jfits;
    j["noise_floor"] = noise_floor;
    j["verdict"] = verdict;
    return j.dump(2);
}

ConvergenceReport ConvergenceReport::from_json_text(const std::string& text) {
    json j = json::parse(text);
    ConvergenceReport r;
    r.schema_version = j.at("schema_version").get<int>();
    r.experiment = j.at("experiment").get<std::string>();
    r.columns = j.at("columns").get<std::vector<std::string>>();
    r.rows = j.at("rows").get<std::vector<std::vector<double>>>();
    for (const auto& c : j.at("checks")) r.checks.push_back({c.at("name"), c.at("pass").get<bool>()});
    for (auto it = j.at("fits").begin(); it != j.at("fits").end(); ++it) {
        RateFit f;
        f.slope = it.value().at("slope");
        f.intercept = it.value().at("intercept");
        f.stderr_slope = it.value().at("stderr_slope");
        f.r2 = it.value().at("r2");
        f.npoints = it.value().at("npoints");
        r.fits[it.key()] = f;
    }
    r.noise_floor = j.at("noise_floor");
    r.verdict = j.at("verdict").get<std::string>();
    return r;
}

void ConvergenceReport::write(const std::string& stem) const {
    {
        std::ofstream os(stem + ".csv");
        if (!os) throw std::runtime_error("ConvergenceReport: cannot write " + stem + ".csv");
        os << to_csv();
    }
    {
        std::ofstream os(stem + ".json");
        if (!os) throw std::runtime_error("ConvergenceReport: cannot write " + stem + ".json");
        os << to_json_text() << "\n";
    }
}

ConvergenceReport ConvergenceReport::read_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("ConvergenceReport: cannot read " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return from_json_text(buf.str());
}

CompareResult compare_reports(const ConvergenceReport& a, const ConvergenceReport& b, double value_rtol) {
    if (a.schema_version != b.schema_version || a.experiment != b.experiment || a.columns != b.columns ||
        a.rows.size() != b.rows.size())
        throw std::invalid_argument("compare_reports: schema mismatch (experiment, columns or row count differ)");
    CompareResult res;
    res.strict_equal = true;
    res.rates_compatible = true;
    std::ostringstream diff;
    for (size_t r = 0; r < a.rows.size(); ++r) {
        for (size_t c = 0; c < a.columns.size(); ++c) {
            const double va = a.rows[r][c], vb = b.rows[r][c];
            const double scale = std::max({std::fabs(va), std::fabs(vb), 1e-300});
            if (std::fabs(va - vb) > value_rtol * scale) {
                res.strict_equal = false;
                diff << "row " << r << " column " << a.columns[c] << ": " << format_g17(va) << " vs "
                     << format_g17(vb) << "\n";
            }
        }
    }
    for (const auto& [name, fa] : a.fits) {
        auto it = b.fits.find(name);
        if (it == b.fits.end()) throw std::invalid_argument("compare_reports: fit sets differ");
        const RateFit& fb = it->second;
        const double band = 2.0 * (fa.stderr_slope + fb.stderr_slope) + 1e-12;
        if (std::fabs(fa.slope - fb.slope) > band) {
            res.rates_compatible = false;
            diff << "fit " << name << ": slope " << format_g17(fa.slope) << " vs " << format_g17(fb.slope)
                 << " outside confidence band " << format_g17(band) << "\n";
        }
        if (fa.slope != fb.slope) res.strict_equal = false;
    }
    if (a.verdict != b.verdict) {
        res.strict_equal = false;
        diff << "verdict: " << a.verdict << " vs " << b.verdict << "\n";
    }
    res.diff = diff.str();
    return res;
}

}  // namespace heis
