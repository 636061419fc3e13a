#include "suborbit/sphere_triangles.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <tuple>

#include "suborbit/error.hpp"
#include "suborbit/lp.hpp"
#include "suborbit/primes.hpp"

namespace suborbit::sphere {

namespace {

Rational parse_rational(const std::string& text) {
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) return Rational(std::stoll(text));
        const long long num = std::stoll(text.substr(0, slash));
        const long long den = std::stoll(text.substr(slash + 1));
        if (den <= 0) throw Error(ErrorKind::Parse, "arc denominator must be positive: " + text);
        return Rational(num, den);
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::Parse, "malformed fraction: " + text);
    }
}

long long reduce_mod(long long v, int p) {
    long long r = v % p;
    return r < 0 ? r + p : r;
}

}  // namespace

ArcTriple::ArcTriple(Rational a, Rational b, Rational c) : arcs_{a, b, c} {
    for (const auto& r : arcs_) {
        if (r < Rational(0) || r > Rational(1)) throw Error(ErrorKind::InvalidInput, "arcs must lie in [0, 1]");
    }
    if (a + b + c != Rational(1)) throw Error(ErrorKind::InvalidInput, "arcs must sum to exactly 1");
}

ArcTriple ArcTriple::parse(const std::string& text) {
    std::vector<Rational> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(parse_rational(item));
    if (parts.size() != 3) throw Error(ErrorKind::Parse, "expected three comma-separated arcs");
    return ArcTriple(parts[0], parts[1], parts[2]);
}

std::string ArcTriple::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < 3; ++i) {
        if (i) out += ",";
        out += std::to_string(arcs_[i].numerator()) + "/" + std::to_string(arcs_[i].denominator());
    }
    return out;
}

double sigma_residual(const TriangleSides& t) {
    const double x = t.x, y = t.y, z = t.z;
    return x * y * z + x * x + y * y + z * z - 2.0 * x * y - 2.0 * y * z - 2.0 * z * x;
}

double circumradius_sq(const TriangleSides& t) {
    const double x = t.x, y = t.y, z = t.z;
    const double den = 2.0 * x * y + 2.0 * y * z + 2.0 * z * x - x * x - y * y - z * z;
    if (den <= 1e-12) throw Error(ErrorKind::Degenerate, "circumradius undefined: collinear or repeated points");
    return x * y * z / den;
}

TriangleSides sides_from_arcs(const ArcTriple& arcs) {
    auto chord = [](const Rational& r) {
        const double s = std::sin(std::numbers::pi * boost::rational_cast<double>(r));
        return 4.0 * s * s;
    };
    const auto& a = arcs.arcs();
    return {chord(a[0]), chord(a[1]), chord(a[2])};
}

TriangleSides atom_sides(int p, const std::array<long long, 3>& idx) {
    return {pgon_chord_sq(p, idx[1] - idx[0]), pgon_chord_sq(p, idx[2] - idx[0]), pgon_chord_sq(p, idx[2] - idx[1])};
}

std::vector<Atom> sigma_p(int p) {
    if (p < 2) throw Error(ErrorKind::InvalidInput, "sigma_p needs p >= 2");
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(p) * static_cast<std::size_t>(p) - 1);
    for (long long j = 0; j < p; ++j) {
        for (long long k = 0; k < p; ++k) {
            if (j == 0 && k == 0) continue;
            const std::array<long long, 3> idx{0, j, k};
            atoms.push_back({idx, atom_sides(p, idx)});
        }
    }
    return atoms;
}

bool in_R(const TriangleSides& t) {
    if (t.x < 0.0 || t.y < 0.0 || t.z < 0.0) return false;
    return gram_of_unit_config(t.matrix()).psd;
}

TriangleSides DecompositionCertificate::sides() const {
    TriangleSides s;
    for (const auto& a : atoms) {
        const TriangleSides as = atom_sides(p, a.indices);
        s.x += a.weight * as.x;
        s.y += a.weight * as.y;
        s.z += a.weight * as.z;
    }
    return s;
}

void DecompositionCertificate::validate() const {
    if (p < 2 || !is_prime(p)) throw Error(ErrorKind::InvalidInput, "certificate prime is not a prime");
    double total = origin_weight;
    if (origin_weight < 0.0) throw Error(ErrorKind::InvalidInput, "origin weight must be nonnegative");
    for (const auto& a : atoms) {
        if (!(a.weight > 0.0)) throw Error(ErrorKind::InvalidInput, "atom weights must be positive");
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorKind::InvalidInput, "certificate weights must sum to 1");
}

namespace {

// Deduplicated atoms of Sigma_p (identical chord steps give identical sides)
// as LP columns, with the origin as the last column. Built once per prime.
struct AtomColumns {
    std::vector<Atom> atoms;
    Mat a;
    Vec cost;
};

std::shared_ptr<const AtomColumns> atom_columns(int p) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const AtomColumns>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(p); it != cache.end()) return it->second;
    }
    std::map<std::tuple<long long, long long, long long>, Atom> unique;
    for (const Atom& a : sigma_p(p)) {
        auto fold = [p](long long s) {
            const long long r = reduce_mod(s, p);
            return std::min(r, p - r);
        };
        const auto key = std::make_tuple(fold(a.indices[1] - a.indices[0]), fold(a.indices[2] - a.indices[0]),
                                         fold(a.indices[2] - a.indices[1]));
        unique.emplace(key, a);
    }
    auto cols = std::make_shared<AtomColumns>();
    const auto n = static_cast<Eigen::Index>(unique.size()) + 1;
    cols->a = Mat::Zero(4, n);
    cols->cost = Vec::Zero(n);
    Eigen::Index c = 0;
    for (const auto& [key, atom] : unique) {
        cols->a(0, c) = atom.sides.x;
        cols->a(1, c) = atom.sides.y;
        cols->a(2, c) = atom.sides.z;
        cols->a(3, c) = 1.0;
        cols->atoms.push_back(atom);
        ++c;
    }
    cols->a(3, n - 1) = 1.0;  // origin
    cols->cost(n - 1) = -1.0;
    std::lock_guard lock(mutex);
    return cache.emplace(p, std::move(cols)).first->second;
}

}  // namespace

std::optional<DecompositionCertificate> decompose_in_Rp(const TriangleSides& t, int p) {
    if (p < 2 || !is_prime(p)) throw Error(ErrorKind::InvalidInput, "decompose_in_Rp needs a prime p");
    const auto columns = atom_columns(p);
    const Mat& a = columns->a;
    const Vec& cost = columns->cost;
    const std::vector<Atom>& cols = columns->atoms;
    const Eigen::Index n = a.cols();
    Vec b(4);
    b << t.x, t.y, t.z, 1.0;

    lp::Options opts;
    opts.feasibility_tol = 1e-9;
    const lp::Result res = lp::solve(a, b, cost, opts);
    if (res.status != lp::Status::Optimal) return std::nullopt;

    DecompositionCertificate cert;
    cert.p = p;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if (res.x(i) > 1e-15) cert.atoms.push_back({cols[static_cast<std::size_t>(i)].indices, res.x(i)});
    }
    cert.origin_weight = res.x(n - 1) > 1e-15 ? res.x(n - 1) : 0.0;
    // Dropped dust goes to the origin so the weights stay a convex combination.
    double total = cert.origin_weight;
    for (const auto& wa : cert.atoms) total += wa.weight;
    cert.origin_weight = std::max(0.0, cert.origin_weight + (1.0 - total));

    const TriangleSides got = cert.sides();
    const double err = std::max({std::abs(got.x - t.x), std::abs(got.y - t.y), std::abs(got.z - t.z)});
    if (err > 1e-9) return std::nullopt;
    return cert;
}

GroupWitness witness_from_certificate(const DecompositionCertificate& c) {
    c.validate();
    const auto planes = static_cast<Eigen::Index>(c.atoms.size());
    const bool frozen = c.origin_weight > 0.0 || planes == 0;
    const Eigen::Index n = 2 * planes + (frozen ? 1 : 0);

    std::vector<Mat> gens;
    const Eigen::Matrix2d step = rotation2d(2.0 * std::numbers::pi / c.p);
    for (Eigen::Index k = 0; k < planes; ++k) {
        Mat g = Mat::Identity(n, n);
        g.block(2 * k, 2 * k, 2, 2) = step;
        gens.push_back(std::move(g));
    }

    std::array<Vec, 3> pts{Vec::Zero(n), Vec::Zero(n), Vec::Zero(n)};
    std::array<Word, 3> words;
    for (Eigen::Index k = 0; k < planes; ++k) {
        const auto& atom = c.atoms[static_cast<std::size_t>(k)];
        const double r = std::sqrt(atom.weight);
        for (std::size_t v = 0; v < 3; ++v) {
            const long long idx = reduce_mod(atom.indices[v], c.p);
            const double ang = 2.0 * std::numbers::pi * static_cast<double>(idx) / c.p;
            pts[v](2 * k) = r * std::cos(ang);
            pts[v](2 * k + 1) = r * std::sin(ang);
            words[v].push_back(idx);
        }
    }
    Vec base = Vec::Zero(n);
    for (Eigen::Index k = 0; k < planes; ++k) base(2 * k) = std::sqrt(c.atoms[static_cast<std::size_t>(k)].weight);
    if (frozen) {
        const double r = std::sqrt(planes == 0 ? 1.0 : c.origin_weight);
        for (auto& x : pts) x(n - 1) = r;
        base(n - 1) = r;
    }
    return GroupWitness{.p = c.p,
                        .generators = std::move(gens),
                        .center = Vec::Zero(n),
                        .base = std::move(base),
                        .words = {words[0], words[1], words[2]},
                        .claimed = PointConfiguration({pts[0], pts[1], pts[2]}, {"A", "B", "C"}, true)};
}

std::optional<PrimeCertificate> find_prime_spherical(const TriangleSides& t, int p_max) {
    for (int p : primes_up_to(p_max)) {
        if (auto c = decompose_in_Rp(t, p)) return PrimeCertificate{p, std::move(*c)};
    }
    return std::nullopt;
}

const char* to_string(CircleVerdict v) {
    switch (v) {
        case CircleVerdict::RightAngled: return "right_angled";
        case CircleVerdict::ZpSuborbit: return "zp_suborbit";
        case CircleVerdict::Degenerate: return "degenerate";
        case CircleVerdict::NotSubtoral: return "not_subtoral";
    }
    return "unknown";
}

CircleClassification classify_circle_triangle(const ArcTriple& arcs) {
    const auto& a = arcs.arcs();
    const TriangleSides sides = sides_from_arcs(arcs);
    CircleClassification out;

    auto from_two_torus = [&](CircleVerdict v, const std::string& why) {
        auto cert = decompose_in_Rp(sides, 2);
        if (!cert) throw Error(ErrorKind::Infeasible, "internal: Z_2 decomposition failed for " + arcs.to_string());
        out.verdict = v;
        out.p = 2;
        out.witness = witness_from_certificate(*cert);
        out.reason = why;
        return out;
    };

    for (const auto& r : a) {
        if (r == Rational(1, 2)) return from_two_torus(CircleVerdict::RightAngled, "an arc equals 1/2");
    }

    long long lcm = 1;
    for (const auto& r : a) lcm = std::lcm(lcm, r.denominator());
    if (lcm == 1 || is_prime(lcm)) {
        const int p = lcm == 1 ? 2 : static_cast<int>(lcm);
        const long long ib = (a[0] * p).numerator();
        const long long ic = ((a[0] + a[2]) * p).numerator();
        GroupWitness w = pgon_witness(p, 1.0, {0, ib, ic}, {"A", "B", "C"});
        out.verdict = CircleVerdict::ZpSuborbit;
        out.p = p;
        out.witness = std::move(w);
        out.reason = "all arcs are multiples of 1/" + std::to_string(p);
        return out;
    }

    for (const auto& r : a) {
        if (r == Rational(0)) return from_two_torus(CircleVerdict::Degenerate, "a zero arc leaves at most two distinct points");
    }

    out.verdict = CircleVerdict::NotSubtoral;
    out.reason = "common denominator " + std::to_string(lcm) + " is not prime and no arc equals 1/2";
    return out;
}

}  // namespace suborbit::sphere
