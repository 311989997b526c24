#ifndef HEIS_REPORT_HPP
#define HEIS_REPORT_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

namespace heis {

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r2 = 0.0;
    int npoints = 0;
};

// least-squares slope of log(err) against log(param); err entries must be positive
RateFit fit_loglog(std::span<const double> param, std::span<const double> err, int min_points = 4);

// Universal experiment output: a parameter ladder with named value columns,
// named pass flags, fitted rates, a noise floor, and a verdict string.
struct ConvergenceReport {
    int schema_version = 1;
    std::string experiment;
    std::vector<std::string> columns;              // first column is the ladder parameter
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, bool>> checks;
    std::map<std::string, RateFit> fits;
    double noise_floor = 0.0;
    std::string verdict;

    void add_row(std::span<const double> row);
    void add_check(const std::string& name, bool pass);
    bool all_pass() const;
    std::vector<double> column(const std::string& name) const;

    std::string to_csv() const;
    std::string to_json_text() const;
    static ConvergenceReport from_json_text(const std::string& text);

    // writes <stem>.csv and <stem>.json
    void write(const std::string& stem) const;
    static ConvergenceReport read_json(const std::string& path);
};

struct CompareResult {
    bool strict_equal = false;
    bool rates_compatible = false;
    std::string diff;
};

// Tolerance-aware report diff.  Throws on schema mismatch.  Value cells are
// compared with relative tolerance value_rtol; fitted rates are compared
// within their combined standard errors.
CompareResult compare_reports(const ConvergenceReport& a, const ConvergenceReport& b,
                              double value_rtol = 1e-12);

std::string format_g17(double v);

}  // namespace heis

#endif
