#include "suborbit/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include "suborbit/error.hpp"

namespace suborbit {

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "gauss_legendre needs n >= 1");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = mid - half * x;
        rule.nodes[hi] = mid + half * x;
        rule.weights[lo] = half * w;
        rule.weights[hi] = half * w;
    }
    return rule;
}

std::vector<SphereNode> sphere_product_rule(const Eigen::Vector3d& e, const Eigen::Vector3d& b1,
                                            const Eigen::Vector3d& b2, int axial_nodes, int angle_nodes) {
    if (angle_nodes < 4 || angle_nodes % 4 != 0) {
        throw Error(ErrorKind::InvalidInput, "angle node count must be a positive multiple of 4");
    }
    const QuadratureRule axial = gauss_legendre(axial_nodes, -0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
    const QuadratureRule quarter = gauss_legendre(angle_nodes / 4, 0.0, 0.5 * std::numbers::pi);
    std::vector<SphereNode> out;
    out.reserve(static_cast<std::size_t>(axial_nodes) * static_cast<std::size_t>(angle_nodes));
    for (std::size_t a = 0; a < axial.nodes.size(); ++a) {
        const double theta = axial.nodes[a];
        const double ct = std::cos(theta);
        // dt / 2 with t = sin(theta).
        const double wt = 0.5 * ct * axial.weights[a];
        for (int q = 0; q < 4; ++q) {
            for (std::size_t k = 0; k < quarter.nodes.size(); ++k) {
                const double phi = quarter.nodes[k] + 0.5 * std::numbers::pi * q;
                const Eigen::Vector3d u = std::cos(phi) * b1 + std::sin(phi) * b2;
                out.push_back({std::sin(theta) * e + ct * u, wt * quarter.weights[k] / (2.0 * std::numbers::pi)});
            }
        }
    }
    return out;
}

std::vector<Eigen::Vector3d> icosphere(int level) {
    const double g = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> verts = {
        {-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
        {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
    for (auto& v : verts) v.normalize();
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
        {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> mids;
        auto midpoint = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            if (auto it = mids.find(key); it != mids.end()) return it->second;
            verts.push_back((verts[static_cast<std::size_t>(a)] + verts[static_cast<std::size_t>(b)]).normalized());
            const int idx = static_cast<int>(verts.size()) - 1;
            mids.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int ab = midpoint(f[0], f[1]);
            const int bc = midpoint(f[1], f[2]);
            const int ca = midpoint(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    return verts;
}

}  // namespace suborbit
