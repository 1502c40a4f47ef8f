#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fht {

/// Thrown when an evaluation point sits exactly on a branch point.
struct branch_point_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thrown when an evaluation point violates an exclusion-zone precondition.
struct exclusion_error : std::domain_error {
    using std::domain_error::domain_error;
};

enum class BandLabel { E, J };

inline BandLabel other(BandLabel b) { return b == BandLabel::E ? BandLabel::J : BandLabel::E; }

/// One interval [a1,a2] split by n >= 1 interior double points into bands
/// that alternate between E and J, starting with `first_band` on (a1,b1).
struct IntervalConfig {
    double a1 = -1.0;
    double a2 = 1.0;
    std::vector<double> doubles;
    BandLabel first_band = BandLabel::E;

    int n() const { return static_cast<int>(doubles.size()); }
    double width() const { return a2 - a1; }
    /// Label of segment k, where segment 0 is (a1,b1).
    BandLabel segment_label(int k) const {
        return (k % 2 == 0) ? first_band : other(first_band);
    }
};

enum class PointClass { interior_E, interior_J, simple_endpoint, double_point, outside };

/// nu_k = arcsin(sqrt((a2-b_k)/(a2-a1))) and alpha = sum (-1)^{k+1} nu_k.
struct AngleSet {
    std::vector<double> nu;
    double alpha = 0.0;
};

struct ValidationResult {
    std::optional<IntervalConfig> config;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

ValidationResult validate_config(double a1, double a2, const std::vector<double>& doubles,
                                 BandLabel first_band);

/// Validating constructor; throws std::invalid_argument with all violations.
IntervalConfig make_config(double a1, double a2, const std::vector<double>& doubles,
                           BandLabel first_band = BandLabel::E);

PointClass classify(const IntervalConfig& cfg, double x);

AngleSet angles(const IntervalConfig& cfg);

} // namespace fht
