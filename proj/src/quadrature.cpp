#include "fht/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fht {

namespace {

GaussRule compute_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return r;
}

} // namespace

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

void panel_nodes(const Panel& p, int order, std::vector<double>& xs, std::vector<double>& ws) {
    const GaussRule& gr = gauss_legendre(order);
    const double len = p.b - p.a;
    xs.resize(order);
    ws.resize(order);
    switch (p.map) {
    case Panel::Map::linear:
        for (int i = 0; i < order; ++i) {
            xs[i] = p.a + 0.5 * len * (gr.x[i] + 1.0);
            ws[i] = 0.5 * len * gr.w[i];
        }
        break;
    case Panel::Map::sqrt_left:
        // zeta = a + t^2, t in [0, sqrt(len)]; d zeta = 2 t dt
        for (int i = 0; i < order; ++i) {
            double tmax = std::sqrt(len);
            double t = 0.5 * tmax * (gr.x[i] + 1.0);
            xs[i] = p.a + t * t;
            ws[i] = 0.5 * tmax * gr.w[i] * 2.0 * t;
        }
        break;
    case Panel::Map::sqrt_right:
        // zeta = b - t^2
        for (int i = 0; i < order; ++i) {
            double tmax = std::sqrt(len);
            double t = 0.5 * tmax * (gr.x[i] + 1.0);
            xs[i] = p.b - t * t;
            ws[i] = 0.5 * tmax * gr.w[i] * 2.0 * t;
        }
        break;
    }
}

std::vector<Panel> split_panels(double a, double b, int count, bool sqrt_left, bool sqrt_right) {
    if (count < 1) throw std::invalid_argument("split_panels: count must be positive");
    std::vector<Panel> ps;
    ps.reserve(count);
    const double h = (b - a) / count;
    for (int i = 0; i < count; ++i) {
        Panel p;
        p.a = a + i * h;
        p.b = (i + 1 == count) ? b : a + (i + 1) * h;
        if (i == 0 && sqrt_left) p.map = Panel::Map::sqrt_left;
        if (i + 1 == count && sqrt_right) p.map = Panel::Map::sqrt_right;
        ps.push_back(p);
    }
    return ps;
}

std::vector<Panel> graded_panels(double a, double b, double floor_width,
                                 bool sqrt_left, bool sqrt_right, double ratio) {
    const double len = b - a;
    if (len <= 0.0) throw std::invalid_argument("graded_panels: empty interval");
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("graded_panels: bad ratio");
    floor_width = std::min(floor_width, 0.25 * len);
    std::vector<double> left, right; // breakpoints measured from each end
    double h = 0.25 * len;
    for (; h > floor_width; h *= ratio) {
        left.push_back(h);
        right.push_back(h);
    }
    left.push_back(h);
    right.push_back(h);

    std::vector<Panel> ps;
    double lo = a;
    for (auto it = left.rbegin(); it != left.rend(); ++it) {
        double hi = a + *it;
        Panel p{lo, hi, Panel::Map::linear};
        if (ps.empty() && sqrt_left) p.map = Panel::Map::sqrt_left;
        if (hi > lo) ps.push_back(p);
        lo = hi;
    }
    // middle section [a + len/4, b - len/4] in two panels
    ps.push_back(Panel{a + 0.25 * len, a + 0.5 * len, Panel::Map::linear});
    ps.push_back(Panel{a + 0.5 * len, b - 0.25 * len, Panel::Map::linear});
    std::vector<Panel> tail;
    double hi = b;
    for (auto it = right.rbegin(); it != right.rend(); ++it) {
        double lo2 = b - *it;
        Panel p{lo2, hi, Panel::Map::linear};
        if (tail.empty() && sqrt_right) p.map = Panel::Map::sqrt_right;
        if (hi > lo2) tail.push_back(p);
        hi = lo2;
    }
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) ps.push_back(*it);
    return ps;
}

void Mesh::append(const Panel& p, int order) {
    std::vector<double> xs, ws;
    panel_nodes(p, order, xs, ws);
    x.insert(x.end(), xs.begin(), xs.end());
    w.insert(w.end(), ws.begin(), ws.end());
}

EndpointMesh endpoint_mesh(double lo, double hi, bool sqrt_lo, bool sqrt_hi, double double_floor,
                           int middle_panels, int order) {
    const double len = hi - lo;
    if (len <= 0.0) throw std::invalid_argument("endpoint_mesh: empty interval");
    const double q = 0.25 * len;
    EndpointMesh m;
    const double none = std::numeric_limits<double>::quiet_NaN();
    auto push_plain = [&](const std::vector<Panel>& ps) {
        Mesh mesh;
        for (const Panel& p : ps) mesh.append(p, order);
        for (std::size_t i = 0; i < mesh.size(); ++i) {
            m.x.push_back(mesh.x[i]);
            m.w.push_back(mesh.w[i]);
            m.prot.push_back(none);
            m.dist.push_back(0.0);
        }
    };
    auto push_sqrt = [&](double end, double sgn) {
        // zeta = end + sgn t^2, t in (0, sqrt(q)); d zeta = 2 t dt
        const double T = std::sqrt(q);
        Mesh tmesh;
        for (const Panel& p : graded_panels(0.0, T, 1.5e-6 * T, false, false))
            tmesh.append(p, order);
        for (std::size_t i = 0; i < tmesh.size(); ++i) {
            const double t = tmesh.x[i];
            m.x.push_back(end + sgn * t * t);
            m.w.push_back(2.0 * t * tmesh.w[i]);
            m.prot.push_back(end);
            m.dist.push_back(t * t);
        }
    };

    if (sqrt_lo)
        push_sqrt(lo, +1.0);
    else
        push_plain(graded_panels(lo, lo + q, double_floor, false, false));
    push_plain(split_panels(lo + q, hi - q, std::max(1, middle_panels), false, false));
    if (sqrt_hi)
        push_sqrt(hi, -1.0);
    else
        push_plain(graded_panels(hi - q, hi, double_floor, false, false));
    return m;
}

} // namespace fht
