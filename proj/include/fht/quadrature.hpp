#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fht {

/// Gauss-Legendre rule on [-1,1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Nodes and weights of the n-point Gauss-Legendre rule (Newton on P_n).
const GaussRule& gauss_legendre(int n);

/// One integration panel [a,b] with an optional square-root substitution
/// that absorbs an inverse-square-root integrand singularity at one end.
struct Panel {
    double a = 0.0;
    double b = 0.0;
    enum class Map { linear, sqrt_left, sqrt_right } map = Map::linear;
};

/// Quadrature nodes/weights of a panel for the given rule order.
void panel_nodes(const Panel& p, int order, std::vector<double>& xs, std::vector<double>& ws);

/// Uniform panels over [a,b]; the end panels optionally take the sqrt map.
std::vector<Panel> split_panels(double a, double b, int count, bool sqrt_left, bool sqrt_right);

/// Geometrically graded panels from both ends of [a,b] down to panel width
/// <= floor_width, glued to a uniform middle section.
std::vector<Panel> graded_panels(double a, double b, double floor_width,
                                 bool sqrt_left, bool sqrt_right, double ratio = 0.5);

/// Flattened node/weight mesh over a list of panels.
struct Mesh {
    std::vector<double> x;
    std::vector<double> w;
    void append(const Panel& p, int order);
    std::size_t size() const { return x.size(); }
};

/// Mesh over [lo,hi] whose end quarters may absorb inverse-square-root
/// integrand singularities through the substitution zeta = end -+ t^2 with
/// t-graded panels. For substituted nodes, `prot` holds the protected
/// endpoint and `dist` its exact distance t^2 (the rounded node coordinate
/// alone would collapse onto the endpoint for small t).
struct EndpointMesh {
    std::vector<double> x, w;
    std::vector<double> prot; // protected endpoint coordinate, NaN if none
    std::vector<double> dist; // exact distance to it
    std::size_t size() const { return x.size(); }
};

EndpointMesh endpoint_mesh(double lo, double hi, bool sqrt_lo, bool sqrt_hi, double double_floor,
                           int middle_panels, int order);

} // namespace fht
