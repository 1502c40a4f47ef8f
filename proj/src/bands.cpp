#include "fht/bands.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fht {

BandSystem BandSystem::from_config(const IntervalConfig& cfg) {
    BandSystem bs;
    Band band;
    band.lo = cfg.a1;
    band.hi = cfg.a2;
    double lo = cfg.a1;
    for (int k = 0; k <= cfg.n(); ++k) {
        double hi = (k == cfg.n()) ? cfg.a2 : cfg.doubles[k];
        band.segments.push_back(Segment{lo, hi, cfg.segment_label(k)});
        lo = hi;
    }
    bs.bands_.push_back(std::move(band));
    bs.endpoints_ = {cfg.a1, cfg.a2};
    return bs;
}

BandSystem BandSystem::from_bands(const std::vector<std::pair<double, double>>& bands,
                                  const std::vector<BandLabel>& labels) {
    if (bands.empty() || bands.size() != labels.size())
        throw std::invalid_argument("from_bands: need one label per band");
    BandSystem bs;
    double prev = -HUGE_VAL;
    for (std::size_t i = 0; i < bands.size(); ++i) {
        auto [lo, hi] = bands[i];
        if (!(lo < hi) || !(lo > prev))
            throw std::invalid_argument("from_bands: bands must be disjoint and ordered");
        prev = hi;
        Band b;
        b.lo = lo;
        b.hi = hi;
        b.segments.push_back(Segment{lo, hi, labels[i]});
        bs.bands_.push_back(std::move(b));
        bs.endpoints_.push_back(lo);
        bs.endpoints_.push_back(hi);
    }
    return bs;
}

double BandSystem::abs_radical(double x) const {
    double v = 1.0;
    for (double a : endpoints_) v *= std::sqrt(std::abs(x - a));
    return v;
}

double BandSystem::abs_radical(double x, double prot, double dist) const {
    double v = 1.0;
    for (double a : endpoints_) {
        if (a == prot)
            v *= std::sqrt(dist);
        else
            v *= std::sqrt(std::abs(x - a));
    }
    return v;
}

double BandSystem::dlog_abs_radical(double x) const {
    double s = 0.0;
    for (double a : endpoints_) s += 0.5 / (x - a);
    return s;
}

cplx BandSystem::radical(cplx z) const {
    cplx v = 1.0;
    for (double a : endpoints_) v *= pow_cut(z, a, 0.5);
    return v;
}

cplx BandSystem::radical(double x, Shore shore) const {
    cplx v = 1.0;
    for (double a : endpoints_) v *= pow_cut(x, a, 0.5, shore);
    return v;
}

int BandSystem::band_index_of(double x) const {
    for (std::size_t j = 0; j < bands_.size(); ++j)
        if (x > bands_[j].lo && x < bands_[j].hi) return static_cast<int>(j);
    return -1;
}

int BandSystem::gap_index_of(double x) const {
    for (std::size_t j = 0; j + 1 < bands_.size(); ++j)
        if (x > bands_[j].hi && x < bands_[j + 1].lo) return static_cast<int>(j);
    return -1;
}

bool BandSystem::is_endpoint(double x) const {
    return std::find(endpoints_.begin(), endpoints_.end(), x) != endpoints_.end();
}

int BandSystem::chi(double x) const {
    int j = band_index_of(x);
    if (j < 0) throw std::domain_error("chi: point not inside a band");
    for (const Segment& s : bands_[j].segments)
        if (x > s.lo && x < s.hi) return s.chi();
    throw std::domain_error("chi: point sits on a double point");
}

} // namespace fht
