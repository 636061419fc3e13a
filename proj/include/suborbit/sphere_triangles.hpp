#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "suborbit/witness.hpp"

namespace suborbit::sphere {

/// Squared side lengths of a triangle (A, B, C):
/// x = |AB|^2, y = |AC|^2, z = |BC|^2. Degenerate triples are allowed.
struct TriangleSides {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    std::array<double, 3> as_array() const { return {x, y, z}; }
    SquaredDistanceMatrix matrix() const { return SquaredDistanceMatrix::from_triangle(x, y, z); }
};

using Rational = boost::rational<long long>;

/// Three arcs of the unit circle (fractions of a full turn) summing to 1.
/// Arc i is the arc subtended by side i: A -> B spans arc 0, B -> C spans
/// arc 2 and C -> A spans arc 1.
class ArcTriple {
  public:
    ArcTriple(Rational a, Rational b, Rational c);
    /// "a/b,c/d,e/f"; plain integers are accepted.
    static ArcTriple parse(const std::string& text);

    const std::array<Rational, 3>& arcs() const { return arcs_; }
    std::string to_string() const;

  private:
    std::array<Rational, 3> arcs_;
};

/// XYZ + X^2 + Y^2 + Z^2 - 2XY - 2YZ - 2ZX; zero on circumradius-1 triples.
double sigma_residual(const TriangleSides& t);

/// XYZ / (2XY + 2YZ + 2ZX - X^2 - Y^2 - Z^2). Throws Degenerate when the
/// denominator is <= 1e-12 (collinear or repeated points).
double circumradius_sq(const TriangleSides& t);

TriangleSides sides_from_arcs(const ArcTriple& arcs);

/// Triangle on the standard p-gon with vertices at indices (i, j, k).
struct Atom {
    std::array<long long, 3> indices{};
    TriangleSides sides;
};

TriangleSides atom_sides(int p, const std::array<long long, 3>& indices);

/// All ordered index triples (0, j, k) of Z_p except (0, 0, 0); repeated
/// indices (degenerate triangles) included.
std::vector<Atom> sigma_p(int p);

/// Realizable on a unit sphere: the unit Gram matrix is PSD.
bool in_R(const TriangleSides& t);

struct WeightedAtom {
    std::array<long long, 3> indices{};
    double weight = 0.0;
};

struct DecompositionCertificate {
    int p = 2;
    std::vector<WeightedAtom> atoms;
    double origin_weight = 0.0;

    /// Weighted sum of atom sides.
    TriangleSides sides() const;
    /// Throws InvalidInput unless weights are positive and sum to 1 within 1e-12.
    void validate() const;
};

/// LP over conv({0} U sigma_p(p)). Among feasible decompositions the one
/// with the largest origin weight is returned; nullopt means the LP is
/// infeasible at tolerance 1e-9.
std::optional<DecompositionCertificate> decompose_in_Rp(const TriangleSides& t, int p);

/// Direct sum of sqrt(w)-scaled unit p-gons, one rotation generator per
/// atom, plus a fixed coordinate of length sqrt(w_0). Labels A, B, C; all
/// points on the unit sphere, center at the origin.
GroupWitness witness_from_certificate(const DecompositionCertificate& c);

struct PrimeCertificate {
    int p = 0;
    DecompositionCertificate certificate;
};

/// Smallest prime p <= p_max with t in R_p.
std::optional<PrimeCertificate> find_prime_spherical(const TriangleSides& t, int p_max);

enum class CircleVerdict { RightAngled, ZpSuborbit, Degenerate, NotSubtoral };

const char* to_string(CircleVerdict v);

struct CircleClassification {
    CircleVerdict verdict = CircleVerdict::NotSubtoral;
    /// Prime of the witnessing action; 0 for not_subtoral.
    int p = 0;
    std::optional<GroupWitness> witness;
    std::string reason;
};

/// Exact classification of a triangle inscribed in S^1 given by rational
/// arcs: right-angled (an arc equals 1/2, Z_2^2 witness), Z_p suborbit (all
/// arcs multiples of 1/p, p prime), degenerate (an arc is 0: at most two
/// distinct points, sub-2-toral), otherwise not sub-p-toral for every p.
CircleClassification classify_circle_triangle(const ArcTriple& arcs);

}  // namespace suborbit::sphere
