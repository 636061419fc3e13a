#include "suborbit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "suborbit/batch.hpp"
#include "suborbit/euclid_embed.hpp"
#include "suborbit/group_certificate.hpp"
#include "suborbit/io.hpp"
#include "suborbit/knaster.hpp"
#include "suborbit/primes.hpp"
#include "suborbit/torus_gap.hpp"

namespace suborbit::cli {

namespace {

using io::Json;

struct Context {
    std::uint64_t seed = 42;
    std::optional<double> tol;
    bool quiet = false;
    std::ostringstream diag;

    double tolerance(double fallback) const { return tol.value_or(fallback); }
};

struct Outcome {
    int exit_code = 0;
    Json doc;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_document(const std::string& path) { return io::parse(read_file(path)); }

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, "malformed " + what + ": '" + text + "'");
        }
    }
    return out;
}

std::vector<int> parse_ints(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (double v : parse_numbers(text, what)) {
        if (v != std::floor(v) || v < 1 || v > 1e6) throw Error(ErrorKind::Parse, "malformed " + what + ": '" + text + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

sphere::TriangleSides parse_sides(const std::string& text) {
    const auto v = parse_numbers(text, "sides");
    if (v.size() != 3) throw Error(ErrorKind::Parse, "sides must be three comma-separated numbers");
    return {v[0], v[1], v[2]};
}

void require_prime(int p) {
    if (!is_prime(p)) throw Error(ErrorKind::InvalidInput, "p = " + std::to_string(p) + " is not prime");
}

Json with_verification(Json doc, const GroupWitness& w, double tol) {
    doc["verification"] = io::to_json(verify_witness(w, tol));
    doc["witness"] = io::witness_document(w);
    return doc;
}

// --- Euclidean embeddings -------------------------------------------------------

Json cuts_json(const euclid::CutDecomposition& cuts, const PointConfiguration& target) {
    Json out = Json::array();
    for (const auto& c : cuts.cuts) {
        Json cj;
        Json members = Json::array();
        for (int m : c.members) members.push_back(target.label(static_cast<std::size_t>(m)));
        cj["members"] = std::move(members);
        cj["weight"] = c.weight;
        out.push_back(std::move(cj));
    }
    return out;
}

Outcome embedding_outcome(const PointConfiguration& target, int p, const euclid::EmbedOptions& opts, double tol) {
    require_prime(p);
    const auto emb = euclid::try_embed_simplex(target, p, opts);
    if (!emb) {
        Json doc = io::document("embedding");
        doc["verdict"] = "infeasible";
        doc["p"] = p;
        doc["allow_raise_p"] = opts.allow_raise_p;
        doc["p_max"] = opts.p_max;
        return {2, doc};
    }
    Json doc = io::document("embedding");
    doc["verdict"] = "feasible";
    doc["p"] = emb->p;
    doc["eta"] = emb->eta;
    doc["resolution"] = emb->resolution;
    doc["attempts"] = emb->attempts;
    doc["distance_error"] = emb->distance_error;
    doc["cuts"] = cuts_json(emb->cuts, target);
    doc = with_verification(std::move(doc), emb->witness, tol);
    return {doc["verification"]["pass"].get<bool>() ? 0 : 2, doc};
}

PointConfiguration triangle_from_sides(const sphere::TriangleSides& s) {
    const SquaredDistanceMatrix d = s.matrix();
    const Eigen::SelfAdjointEigenSolver<Mat> eig(centered_gram(d));
    if (eig.eigenvalues().minCoeff() < -kPsdTolerance) {
        throw Error(ErrorKind::InvalidInput, "sides violate the triangle inequality");
    }
    return PointConfiguration(realize_distances(d), {"A", "B", "C"});
}

void add_embed_options(CLI::App* sub, int& p, bool& no_raise, long long& p_max) {
    sub->add_option("--p", p, "Starting prime")->default_val(2);
    sub->add_flag("--no-raise", no_raise, "Fail instead of raising p");
    sub->add_option("--p-max", p_max, "Largest prime to try when raising")->default_val(1'000'003);
}

// --- knaster ---------------------------------------------------------------------

struct MapSpec {
    std::string expressions;  // ';'-separated
    int random_linear = 0;
    int random_quadratic = 0;

    int output_dim() const {
        if (!expressions.empty()) return static_cast<int>(std::count(expressions.begin(), expressions.end(), ';')) + 1;
        return std::max(random_linear, random_quadratic);
    }

    void check() const {
        const int given = (!expressions.empty()) + (random_linear > 0) + (random_quadratic > 0);
        if (given != 1) {
            throw Error(ErrorKind::InvalidInput, "give exactly one of --map, --random-linear, --random-quadratic");
        }
    }

    knaster::TestMap build(int n, std::uint64_t seed) const {
        check();
        Rng rng(splitmix64(seed ^ 0x6d61702d73656564ULL));
        if (random_linear > 0) return knaster::TestMap::random_linear(random_linear, n, rng);
        if (random_quadratic > 0) return knaster::TestMap::random_quadratic(random_quadratic, n, rng);
        std::vector<std::string> parts;
        std::stringstream ss(expressions);
        std::string item;
        while (std::getline(ss, item, ';')) parts.push_back(item);
        if (!expressions.empty() && expressions.back() == ';') parts.push_back("");
        return knaster::TestMap::parse(parts, n);
    }
};

Json map_json(const knaster::TestMap& f) {
    Json j;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, knaster::TestMap::Linear>) {
                j["type"] = "linear";
                j["matrix"] = io::to_json(m.a);
            } else if constexpr (std::is_same_v<T, knaster::TestMap::Quadratic>) {
                j["type"] = "quadratic";
                Json forms = Json::array();
                for (const auto& q : m.q) forms.push_back(io::to_json(q));
                j["forms"] = std::move(forms);
            } else {
                j["type"] = "expression";
                Json e = Json::array();
                for (const auto& ex : m.e) e.push_back(ex.to_string());
                j["expressions"] = std::move(e);
            }
        },
        f.descriptor());
    return j;
}

void add_search_options(CLI::App* sub, MapSpec& map, knaster::SearchOptions& opts) {
    sub->add_option("--map", map.expressions, "Test map: ';'-separated expressions over x1..xn");
    sub->add_option("--random-linear", map.random_linear, "Random linear map to R^d (seeded)");
    sub->add_option("--random-quadratic", map.random_quadratic, "Random quadratic map to R^d (seeded)");
    sub->add_option("--restarts", opts.restarts, "Number of random restarts")->default_val(64);
    sub->add_option("--iterations", opts.iterations, "Iterations per restart")->default_val(500);
    sub->add_flag("--translate", opts.translate, "Also optimize a translation of the placed copy");
}

Outcome report_outcome(const knaster::SearchReport& r, const knaster::TestMap& f, Context& ctx, Json extra) {
    Json doc = io::document("knaster_report");
    doc["verdict"] = r.success ? "found" : "not_found";
    doc["success"] = r.success;
    doc["seed"] = r.seed;
    doc["n"] = r.n;
    doc["k"] = r.frame.cols();
    doc["d"] = f.output_dim();
    doc["dimension_bound"] = r.dimension_bound;
    doc["phi"] = r.phi;
    doc["restarts"] = r.restarts;
    doc["best_restart"] = r.best_restart;
    doc["iterations"] = r.iterations;
    doc["frame"] = io::to_json(r.frame);
    if (r.offset.size() > 0) doc["offset"] = io::to_json(r.offset);
    Json images = Json::array();
    for (const auto& v : r.images) images.push_back(io::to_json(v));
    doc["images"] = std::move(images);
    doc["map"] = map_json(f);
    doc["warnings"] = r.warnings;
    for (auto& [key, value] : extra.items()) doc[key] = value;
    for (const auto& w : r.warnings) ctx.diag << "warning: " << w << "\n";
    return {r.success ? 0 : 2, doc};
}

std::pair<PointConfiguration, GroupWitness> regular_orbit(int p) {
    require_prime(p);
    if (p == 2) {
        const PointConfiguration x({Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)}, {"0", "1"}, true);
        GroupWitness w{.p = 2,
                       .generators = {Mat::Constant(1, 1, -1.0)},
                       .center = Vec::Zero(1),
                       .base = Vec::Constant(1, 1.0),
                       .words = {{0}, {1}},
                       .claimed = x};
        return {x, w};
    }
    std::vector<long long> idx;
    std::vector<std::string> labels;
    for (int i = 0; i < p; ++i) {
        idx.push_back(i);
        labels.push_back(std::to_string(i));
    }
    GroupWitness w = pgon_witness(p, 1.0, idx, labels);
    PointConfiguration x(w.claimed.points(), w.claimed.labels(), true);
    return {x, w};
}

// --- group certificate -------------------------------------------------------------

Json params_json(const cert::DependenceParameters& d) { return Json::array({d.a, d.b, d.c}); }

}  // namespace

CommandResult dispatch(const std::vector<std::string>& args) {
    Context ctx;
    CommandResult result;
    std::string output_path;
    Outcome outcome;
    std::function<Outcome()> action;

    CLI::App app{"Suborbit constructions, certificates and searches"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", ctx.seed, "Random seed")->default_val(42);
    app.add_option("--tol", ctx.tol, "Tolerance (command-specific default)");
    app.add_option("--output", output_path, "Write the document to this path");
    app.add_flag("--quiet", ctx.quiet, "Suppress diagnostics");

    std::string input, target_path, sides_text, arcs_text, points_text, rep_path, ns_text = "2,3,4,5,6,7,8";
    int p = 2, p_max = 200, trials = 200, blocks = 1, n = 0;
    long long j = 1, k = 2, embed_p_max = 1'000'003;
    bool no_raise = false, sweep = false;
    double apex = 0.0, scale = 1.0;
    std::string method = "product";
    torus::QuadratureSpec qspec;
    MapSpec map;
    knaster::SearchOptions sopts;

    auto* embed = app.add_subcommand("embed-simplex", "Isometric copy of an affinely independent set in a p-torus orbit");
    embed->add_option("--input", input, "Config document")->required();
    add_embed_options(embed, p, no_raise, embed_p_max);
    embed->callback([&] {
        action = [&] {
            euclid::EmbedOptions o{.allow_raise_p = !no_raise, .p_max = embed_p_max, .tolerance = 1e-7};
            return embedding_outcome(io::config_from_json(read_document(input)), p, o, ctx.tolerance(1e-7));
        };
    });

    auto* tri = app.add_subcommand("embed-triangle", "Triangle by squared sides, or isosceles by apex angle");
    tri->add_option("--sides", sides_text, "Squared sides |AB|^2,|AC|^2,|BC|^2");
    tri->add_option("--apex-angle", apex, "Apex angle in radians (isosceles construction)");
    add_embed_options(tri, p, no_raise, embed_p_max);
    tri->callback([&] {
        action = [&]() -> Outcome {
            const bool by_angle = tri->count("--apex-angle") > 0;
            if (by_angle == !sides_text.empty()) throw Error(ErrorKind::InvalidInput, "give exactly one of --sides, --apex-angle");
            if (!by_angle) {
                euclid::EmbedOptions o{.allow_raise_p = !no_raise, .p_max = embed_p_max, .tolerance = 1e-7};
                return embedding_outcome(triangle_from_sides(parse_sides(sides_text)), p, o, ctx.tolerance(1e-7));
            }
            require_prime(p);
            Json doc = io::document("isosceles");
            doc["p"] = p;
            doc["apex_angle"] = apex;
            doc["consecutive_angle"] = euclid::consecutive_pgon_angle(p);
            try {
                const auto iso = euclid::isosceles_with_apex_angle(apex, p);
                doc["verdict"] = "feasible";
                doc["t"] = iso.t;
                doc["measured_apex_angle"] = iso.apex_angle;
                doc = with_verification(std::move(doc), iso.witness, ctx.tolerance(1e-7));
                return {doc["verification"]["pass"].get<bool>() ? 0 : 2, doc};
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::Infeasible) throw;
                doc["verdict"] = "infeasible";
                doc["reason"] = e.what();
                return {2, doc};
            }
        };
    });

    auto* minp = app.add_subcommand("min-prime", "Smallest prime admitting an exact embedding");
    minp->add_option("--input", input, "Config document")->required();
    minp->add_option("--p-max", p_max, "Largest prime to try")->default_val(200);
    minp->callback([&] {
        action = [&]() -> Outcome {
            const auto target = io::config_from_json(read_document(input));
            Json doc = io::document("min_prime");
            doc["p_max"] = p_max;
            const auto emb = euclid::min_prime_for(target, p_max);
            if (!emb) {
                doc["verdict"] = "exhausted";
                return {2, doc};
            }
            doc["verdict"] = "feasible";
            doc["p"] = emb->p;
            doc = with_verification(std::move(doc), emb->witness, ctx.tolerance(1e-7));
            return {0, doc};
        };
    });

    auto* classify = app.add_subcommand("classify-circle-triangle", "Exact classification of an inscribed triangle");
    classify->add_option("--arcs", arcs_text, "Arcs as fractions a/b,c/d,e/f summing to 1")->required();
    classify->callback([&] {
        action = [&]() -> Outcome {
            const auto arcs = sphere::ArcTriple::parse(arcs_text);
            const auto c = sphere::classify_circle_triangle(arcs);
            Json doc = io::document("classification");
            doc["arcs"] = arcs.to_string();
            const auto s = sphere::sides_from_arcs(arcs);
            doc["sides"] = {s.x, s.y, s.z};
            doc["verdict"] = sphere::to_string(c.verdict);
            doc["p"] = c.p;
            doc["reason"] = c.reason;
            if (c.witness) doc = with_verification(std::move(doc), *c.witness, ctx.tolerance(1e-8));
            return {c.verdict == sphere::CircleVerdict::NotSubtoral ? 2 : 0, doc};
        };
    });

    auto* decompose = app.add_subcommand("decompose", "Convex decomposition over the p-gon triangles and the origin");
    decompose->add_option("--sides", sides_text, "Squared sides X,Y,Z")->required();
    decompose->add_option("--p", p, "Prime (omit to search up to --p-max)");
    decompose->add_option("--p-max", p_max, "Largest prime when searching")->default_val(200);
    decompose->callback([&] {
        action = [&]() -> Outcome {
            const auto s = parse_sides(sides_text);
            std::optional<sphere::DecompositionCertificate> c;
            if (decompose->count("--p") > 0) {
                require_prime(p);
                c = sphere::decompose_in_Rp(s, p);
            } else if (auto pc = sphere::find_prime_spherical(s, p_max)) {
                c = std::move(pc->certificate);
            }
            if (!c) {
                Json doc = io::document("certificate");
                doc["verdict"] = "infeasible";
                if (decompose->count("--p") > 0) {
                    doc["p"] = p;
                } else {
                    doc["p_max"] = p_max;
                }
                doc["sides"] = {s.x, s.y, s.z};
                doc["in_R"] = sphere::in_R(s);
                return {2, doc};
            }
            return {0, io::certificate_document(*c, s)};
        };
    });

    auto* witness = app.add_subcommand("witness", "Group witness from a certificate document or from sides");
    witness->add_option("--input", input, "Certificate document");
    witness->add_option("--sides", sides_text, "Squared sides X,Y,Z (searches primes up to --p-max)");
    witness->add_option("--p-max", p_max, "Largest prime when searching")->default_val(200);
    witness->callback([&] {
        action = [&]() -> Outcome {
            if (input.empty() == sides_text.empty()) throw Error(ErrorKind::InvalidInput, "give exactly one of --input, --sides");
            sphere::DecompositionCertificate c;
            if (!input.empty()) {
                c = io::certificate_from_json(read_document(input));
            } else {
                const auto pc = sphere::find_prime_spherical(parse_sides(sides_text), p_max);
                if (!pc) {
                    Json doc = io::document("witness_search");
                    doc["verdict"] = "infeasible";
                    doc["p_max"] = p_max;
                    return {2, doc};
                }
                c = pc->certificate;
            }
            const GroupWitness w = sphere::witness_from_certificate(c);
            const auto check = verify_witness(w, ctx.tolerance(1e-8));
            ctx.diag << "verification: " << (check.pass ? "pass" : "FAIL") << ", max point error "
                     << check.max_point_error << "\n";
            return {check.pass ? 0 : 2, io::witness_document(w)};
        };
    });

    auto* verify = app.add_subcommand("verify-witness", "Check a witness (or any document embedding one)");
    verify->add_option("--input", input, "Witness document, or a document with a 'witness' field")->required();
    verify->add_option("--target", target_path, "Config document whose distances the witness must reproduce");
    verify->callback([&] {
        action = [&]() -> Outcome {
            Json in = read_document(input);
            if (in.is_object() && in.value("kind", "") != "witness" && in.contains("witness")) in = in["witness"];
            const GroupWitness w = io::witness_from_json(in);
            const double tol = ctx.tolerance(1e-7);
            const auto r = verify_witness(w, tol);
            Json doc = io::document("verification");
            doc["tol"] = tol;
            doc["p"] = w.p;
            doc["rank"] = w.rank();
            doc["dim"] = w.dim();
            bool pass = r.pass;
            Json rj = io::to_json(r);
            for (auto& [key, value] : rj.items()) doc[key] = value;
            if (!target_path.empty()) {
                const double err = distance_error_against(w, io::config_from_json(read_document(target_path)));
                doc["target_distance_error"] = err;
                pass = pass && err <= tol;
            }
            doc["pass"] = pass;
            doc["verdict"] = pass ? "verified" : "rejected";
            return {pass ? 0 : 2, doc};
        };
    });

    auto* gap = app.add_subcommand("torus-gap-verify", "Least expected squared distance from S^2 to torus orbits");
    gap->add_option("--n", ns_text, "Comma-separated complex dimensions, cycled over trials");
    gap->add_option("--trials", trials, "Random isometries")->default_val(200);
    gap->add_option("--method", method, "product or monte-carlo")->default_val("product");
    gap->add_option("--axial-nodes", qspec.axial_nodes, "Gauss nodes in the axial angle")->default_val(64);
    gap->add_option("--angle-nodes", qspec.angle_nodes, "Gauss nodes in the azimuth")->default_val(256);
    gap->add_option("--samples", qspec.samples, "Monte Carlo samples")->default_val(200000);
    gap->callback([&] {
        action = [&]() -> Outcome {
            if (method == "product") {
                qspec.method = torus::QuadratureSpec::Method::ProductGauss;
            } else if (method == "monte-carlo") {
                qspec.method = torus::QuadratureSpec::Method::MonteCarlo;
            } else {
                throw Error(ErrorKind::InvalidInput, "unknown method '" + method + "'");
            }
            const auto ns = parse_ints(ns_text, "--n");
            const double tol = ctx.tolerance(1e-6);
            const auto b = batch::torus_gap_batch(ns, trials, ctx.seed, qspec, Execution::Parallel);
            Json doc = io::document("torus_gap");
            doc["seed"] = ctx.seed;
            doc["method"] = method;
            doc["trials"] = trials;
            doc["n"] = ns;
            doc["bound"] = 1.0 / 16.0;
            doc["tol"] = tol;
            doc["min_total"] = b.min_total;
            doc["argmin"] = b.argmin;
            double moment_err = 0.0;
            Json rows = Json::array();
            for (const auto& t : b.trials) {
                moment_err = std::max(moment_err, std::abs(t.second_moment_sum - 1.0));
                rows.push_back(Json{{"n", t.n}, {"total", t.total}});
            }
            doc["max_second_moment_error"] = moment_err;
            doc["results"] = std::move(rows);
            const bool pass = b.min_total >= 1.0 / 16.0 - tol;
            doc["pass"] = pass;
            doc["verdict"] = pass ? "bound_holds" : "bound_violated";
            return {pass ? 0 : 2, doc};
        };
    });

    auto* far = app.add_subcommand("far-point", "Points of S^2 far from torus orbits for random (lambda, c)");
    far->add_option("--n", ns_text, "Comma-separated complex dimensions, cycled over trials");
    far->add_option("--trials", trials, "Random pairs (lambda, c)")->default_val(50);
    far->callback([&] {
        action = [&]() -> Outcome {
            const auto ns = parse_ints(ns_text, "--n");
            const double tol = ctx.tolerance(1e-6);
            const auto b = batch::far_point_batch(ns, trials, ctx.seed, Execution::Parallel);
            Json doc = io::document("far_point");
            doc["seed"] = ctx.seed;
            doc["trials"] = trials;
            doc["n"] = ns;
            doc["bound"] = 0.25;
            doc["tol"] = tol;
            doc["min_distance"] = b.min_distance;
            Json rows = Json::array();
            for (const auto& t : b.trials) rows.push_back(Json{{"n", t.n}, {"distance", t.distance}});
            doc["results"] = std::move(rows);
            const bool pass = b.min_distance >= 0.25 - tol;
            doc["pass"] = pass;
            doc["verdict"] = pass ? "bound_holds" : "bound_violated";
            return {pass ? 0 : 2, doc};
        };
    });

    auto* ks = app.add_subcommand("knaster-search", "Placement of a spherical suborbit on which f is constant");
    ks->add_option("--input", input, "Config document on the unit sphere (needs --witness)");
    ks->add_option("--witness", target_path, "Witness document for --input");
    ks->add_option("--pgon", p, "Use the regular p-gon orbit (p = 2: antipodal pair in R^1)");
    ks->add_option("--dim", n, "Ambient dimension n (default d(q-1)+k)");
    add_search_options(ks, map, sopts);
    ks->callback([&] {
        action = [&]() -> Outcome {
            map.check();
            const bool pgon = ks->count("--pgon") > 0;
            if (pgon == !input.empty()) throw Error(ErrorKind::InvalidInput, "give exactly one of --input, --pgon");
            std::optional<PointConfiguration> x;
            std::optional<GroupWitness> w;
            if (pgon) {
                auto [xx, ww] = regular_orbit(p);
                x = std::move(xx);
                w = std::move(ww);
            } else {
                if (target_path.empty()) throw Error(ErrorKind::InvalidInput, "--input needs --witness");
                x = io::config_from_json(read_document(input), true);
                w = io::witness_from_json(read_document(target_path));
            }
            const double q = std::pow(static_cast<double>(w->p), static_cast<double>(w->rank()));
            const int dim = n > 0 ? n : static_cast<int>(map.output_dim() * (q - 1.0) + static_cast<double>(x->dim()));
            const auto f = map.build(dim, ctx.seed);
            sopts.seed = ctx.seed;
            sopts.tol = ctx.tolerance(1e-8);
            const auto r = knaster::search_constant_configuration(*x, *w, f, dim, sopts);
            Json extra;
            extra["points"] = io::config_document(*x)["points"];
            return report_outcome(r, f, ctx, extra);
        };
    });

    auto* ke = app.add_subcommand("knaster-euclidean", "Isometric copy of a Euclidean set on which f is constant");
    ke->add_option("--input", input, "Config document (affinely independent)")->required();
    ke->add_option("--p", p, "Starting prime for the embedding")->default_val(2);
    ke->add_option("--dim", n, "Ambient dimension n (default d(|X|-1)+k')");
    add_search_options(ke, map, sopts);
    ke->callback([&] {
        action = [&]() -> Outcome {
            map.check();
            require_prime(p);
            auto setup = knaster::euclidean_setup(io::config_from_json(read_document(input)), p, map.output_dim());
            if (n > 0) setup.n = n;
            const auto f = map.build(setup.n, ctx.seed);
            sopts.seed = ctx.seed;
            sopts.tol = ctx.tolerance(1e-8);
            const auto r = knaster::euclidean_search(setup, f, sopts);
            Json extra;
            extra["p"] = setup.p;
            extra["orbit_dim"] = setup.k;
            extra["radius"] = setup.radius;
            extra["points"] = io::config_document(setup.centered)["points"];
            return report_outcome(r, f, ctx, extra);
        };
    });

    auto* cert_cmd = app.add_subcommand("certificate", "Dependence parameters and det(aI + bG + cH)");
    cert_cmd->add_option("--points", points_text, "ax,ay,bx,by,cx,cy on the unit circle")->required();
    cert_cmd->add_option("--rep", rep_path, "Representation document {g, h} (default: rotations A->B, A->C)");
    cert_cmd->add_option("--scale", scale, "Multiply the parameters by this factor")->default_val(1.0);
    cert_cmd->callback([&] {
        action = [&]() -> Outcome {
            const auto v = parse_numbers(points_text, "points");
            if (v.size() != 6) throw Error(ErrorKind::Parse, "points must be six numbers");
            const Eigen::Vector2d a(v[0], v[1]), b(v[2], v[3]), c(v[4], v[5]);
            for (const auto* pt : {&a, &b, &c}) {
                if (std::abs(pt->norm() - 1.0) > 1e-9) throw Error(ErrorKind::InvalidInput, "points must lie on the unit circle");
            }
            cert::RepresentationPair rep;
            if (!rep_path.empty()) {
                const Json doc = read_document(rep_path);
                io::expect_kind(doc, "representation");
                rep = {io::mat_from_json(doc.at("g")), io::mat_from_json(doc.at("h"))};
            } else {
                auto angle = [&](const Eigen::Vector2d& u) { return std::atan2(u.y(), u.x()) - std::atan2(a.y(), a.x()); };
                rep = {rotation2d(angle(b)), rotation2d(angle(c))};
            }
            const auto params = cert::dependence_parameters(a, b, c);
            const double residual = cert::certificate_residual(Eigen::Vector3d(scale * params.vector()), rep);
            const double tol = ctx.tolerance(1e-9);
            Json doc = io::document("group_certificate");
            doc["params"] = params_json(params);
            doc["scale"] = scale;
            doc["dim"] = rep.g.rows();
            doc["residual"] = residual;
            doc["tol"] = tol;
            const bool ok = std::abs(residual) < tol;
            doc["verdict"] = ok ? "satisfied" : "violated";
            return {ok ? 0 : 2, doc};
        };
    });

    auto* harness = app.add_subcommand("orbit-harness", "Certificate residual on constructed Z_p orbit triples");
    harness->add_option("--p", p, "Prime")->default_val(5);
    harness->add_option("--j", j, "First step")->default_val(1);
    harness->add_option("--k", k, "Second step")->default_val(2);
    harness->add_option("--blocks", blocks, "Number of 2x2 rotation blocks")->default_val(1);
    harness->add_option("--p-max", p_max, "Sweep every prime up to p-max and every step pair");
    harness->add_flag("--sweep", sweep, "Run the sweep up to --p-max (default 23)");
    harness->callback([&] {
        action = [&]() -> Outcome {
            const double tol = ctx.tolerance(1e-9);
            Json doc = io::document("orbit_harness");
            doc["tol"] = tol;
            doc["blocks"] = blocks;
            if (sweep || harness->count("--p-max") > 0) {
                const int limit = harness->count("--p-max") > 0 ? p_max : 23;
                const auto s = batch::orbit_harness_sweep(limit, blocks, Execution::Parallel);
                doc["p_max"] = limit;
                doc["triples"] = s.entries.size();
                doc["max_abs_residual"] = s.max_abs_residual;
                const bool ok = s.max_abs_residual < tol;
                doc["verdict"] = ok ? "satisfied" : "violated";
                return {ok ? 0 : 2, doc};
            }
            const auto h = cert::orbit_triple_harness(p, j, k, blocks);
            doc["p"] = p;
            doc["steps"] = {j, k};
            doc["params"] = params_json(h.params);
            doc["residual"] = h.residual;
            const bool ok = std::abs(h.residual) < tol;
            doc["verdict"] = ok ? "satisfied" : "violated";
            return {ok ? 0 : 2, doc};
        };
    });

    try {
        try {
            std::vector<std::string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);
        } catch (const CLI::CallForHelp&) {
            result.output = app.help();
            return result;
        } catch (const CLI::CallForAllHelp&) {
            result.output = app.help("", CLI::AppFormatMode::All);
            return result;
        } catch (const CLI::ParseError& e) {
            if (app.get_subcommands().empty()) {
                // First positional token, skipping the values of global options.
                for (std::size_t i = 0; i < args.size(); ++i) {
                    if (args[i] == "--seed" || args[i] == "--tol" || args[i] == "--output") {
                        ++i;
                    } else if (args[i].rfind("-", 0) != 0) {
                        throw Error(ErrorKind::UnknownCommand, "unknown command '" + args[i] + "'");
                    }
                }
                throw Error(ErrorKind::UnknownCommand, "no command given");
            }
            throw Error(ErrorKind::Parse, e.what());
        }
        if (!output_path.empty()) result.output_path = output_path;
        outcome = action();
        result.exit_code = outcome.exit_code;
        result.output = io::dump(outcome.doc);
    } catch (const Error& e) {
        result.exit_code = 1;
        result.output = io::dump(io::error_document(e.kind(), e.what()));
        ctx.diag << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.output = io::dump(io::error_document(ErrorKind::InvalidInput, e.what()));
        ctx.diag << "error: " << e.what() << "\n";
    }
    if (!ctx.quiet) result.diagnostics = ctx.diag.str();
    return result;
}

}  // namespace suborbit::cli
