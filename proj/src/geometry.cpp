#include "fht/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fht {

ValidationResult validate_config(double a1, double a2, const std::vector<double>& doubles,
                                 BandLabel first_band) {
    ValidationResult res;
    auto reject = [&res](const std::string& msg) { res.errors.push_back(msg); };

    if (!std::isfinite(a1) || !std::isfinite(a2)) reject("endpoints must be finite");
    for (double b : doubles)
        if (!std::isfinite(b)) {
            reject("doubles must be finite");
            break;
        }
    if (!res.errors.empty()) return res;

    if (!(a1 < a2)) reject("a1 < a2 required");
    if (doubles.empty()) reject("n >= 1 required: at least one double point");
    for (std::size_t k = 0; k + 1 < doubles.size(); ++k) {
        if (doubles[k] > doubles[k + 1]) {
            reject("unordered doubles");
            break;
        }
        if (doubles[k] == doubles[k + 1]) {
            reject("coincident doubles");
            break;
        }
    }
    if (!doubles.empty()) {
        if (!(a1 < doubles.front())) reject("a1 < b_1 required");
        if (!(doubles.back() < a2)) reject("b_n < a2 required");
    }
    if (!res.errors.empty()) return res;

    IntervalConfig cfg;
    cfg.a1 = a1;
    cfg.a2 = a2;
    cfg.doubles = doubles;
    cfg.first_band = first_band;
    res.config = cfg;
    return res;
}

IntervalConfig make_config(double a1, double a2, const std::vector<double>& doubles,
                           BandLabel first_band) {
    ValidationResult r = validate_config(a1, a2, doubles, first_band);
    if (!r.ok()) {
        std::ostringstream os;
        os << "invalid interval configuration:";
        for (const auto& e : r.errors) os << " [" << e << "]";
        throw std::invalid_argument(os.str());
    }
    return *r.config;
}

PointClass classify(const IntervalConfig& cfg, double x) {
    if (x == cfg.a1 || x == cfg.a2) return PointClass::simple_endpoint;
    if (x < cfg.a1 || x > cfg.a2) return PointClass::outside;
    int seg = 0;
    for (double b : cfg.doubles) {
        if (x == b) return PointClass::double_point;
        if (x > b) ++seg;
    }
    return cfg.segment_label(seg) == BandLabel::E ? PointClass::interior_E
                                                  : PointClass::interior_J;
}

AngleSet angles(const IntervalConfig& cfg) {
    AngleSet as;
    as.nu.reserve(cfg.doubles.size());
    const double width = cfg.width();
    double alpha = 0.0;
    int sign = +1;
    for (double b : cfg.doubles) {
        double s2 = std::clamp((cfg.a2 - b) / width, 0.0, 1.0);
        double nu = std::asin(std::sqrt(s2));
        as.nu.push_back(nu);
        alpha += sign * nu;
        sign = -sign;
    }
    as.alpha = alpha;
    return as;
}

} // namespace fht
