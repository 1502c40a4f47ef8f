#pragma once

#include <vector>

#include "fht/branch.hpp"
#include "fht/geometry.hpp"

namespace fht {

/// Maximal subinterval of one band carrying a constant characteristic sign.
struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    BandLabel label = BandLabel::E;
    int chi() const { return label == BandLabel::E ? +1 : -1; }
};

/// One connected component [lo,hi] of U = J u E, split into segments at the
/// double points it contains.
struct Band {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<Segment> segments;
};

/// The cut geometry behind the radical R and the g-function: g+1 bands with
/// 2g+2 simple endpoints, plus g gaps between them.
class BandSystem {
  public:
    static BandSystem from_config(const IntervalConfig& cfg);
    /// General multi-band layout (no double points inside the bands).
    static BandSystem from_bands(const std::vector<std::pair<double, double>>& bands,
                                 const std::vector<BandLabel>& labels);

    int genus() const { return static_cast<int>(bands_.size()) - 1; }
    const std::vector<Band>& bands() const { return bands_; }
    const std::vector<double>& endpoints() const { return endpoints_; } // 2g+2 sorted
    /// Gap j lies between band j and band j+1, j = 0..g-1.
    std::pair<double, double> gap(int j) const {
        return {bands_[j].hi, bands_[j + 1].lo};
    }

    /// Sign epsilon with R(x_+) = i * epsilon * |R(x)| on band index j.
    int band_sign(int j) const { return ((genus() - j) % 2 == 0) ? +1 : -1; }
    /// Sign rho with R(x) = rho * |R(x)| on gap index j (2(g-j) endpoints lie
    /// to the right of gap j).
    int gap_sign(int j) const { return ((genus() - j) % 2 == 0) ? +1 : -1; }

    /// |R(x)| = prod |x - a_k|^{1/2}.
    double abs_radical(double x) const;
    /// Same, with the distance to one protected endpoint supplied exactly
    /// (for substituted quadrature nodes that round onto the endpoint).
    double abs_radical(double x, double prot, double dist) const;
    /// d/dx log |R(x)| = (1/2) sum 1/(x - a_k); valid off the endpoints.
    double dlog_abs_radical(double x) const;
    /// R(z) off the cuts, branch R(z) ~ z^{g+1} at infinity.
    cplx radical(cplx z) const;
    /// Boundary value R(x_+-) for x strictly inside a band.
    cplx radical(double x, Shore shore) const;

    int band_index_of(double x) const;   // -1 if not strictly inside a band
    int gap_index_of(double x) const;    // -1 if not strictly inside a gap
    bool is_endpoint(double x) const;
    /// Characteristic sign at x (requires x inside a segment).
    int chi(double x) const;

  private:
    std::vector<Band> bands_;
    std::vector<double> endpoints_;
};

} // namespace fht
