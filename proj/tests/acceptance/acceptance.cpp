// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff all pass.

#include "oracles/rigidity_perturb.hpp"
#include "support/float_lint.hpp"
#include "support/random_fans.hpp"

#include "snctrop/breakable.hpp"
#include "snctrop/enumerate2d.hpp"
#include "snctrop/fixtures.hpp"
#include "snctrop/io.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <fstream>
#include <set>

#include <sys/wait.h>

using namespace snctrop;
namespace fx = snctrop::fixtures;
namespace fs = std::filesystem;
using io::Json;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
    void check(bool cond, const std::string& why) {
        if (!cond) fail(why);
    }
};

std::string data(const std::string& name) { return std::string(SNCTROP_DATA_DIR) + "/" + name; }

struct Shell {
    int code;
    std::string out;
};

Shell cli(const std::string& args) {
    std::string cmd = std::string(SNCTROP_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "snctrop_acceptance";
    fs::create_directories(dir);
    return dir / name;
}

void save(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

// Fraction-free elimination, independent of the library's linear algebra.
Int bareiss_det(std::vector<std::vector<Int>> a) {
    std::size_t n = a.size();
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a[piv][k] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

// Sum of |det| over the simplices of a triangulation given as JSON.
Int volume_sum(const Json& sub) {
    std::vector<std::vector<Int>> pts;
    for (const auto& p : sub.at("points")) {
        std::vector<Int> v;
        for (const auto& x : p) v.push_back(io::int_from_json(x));
        pts.push_back(v);
    }
    Int total = 0;
    for (const auto& cell : sub.at("cells")) {
        std::vector<std::size_t> idx = cell.get<std::vector<std::size_t>>();
        std::vector<std::vector<Int>> m;
        for (std::size_t i = 1; i < idx.size(); ++i) {
            std::vector<Int> row;
            for (std::size_t k = 0; k < pts[0].size(); ++k) row.push_back(pts[idx[i]][k] - pts[idx[0]][k]);
            m.push_back(row);
        }
        total += abs(bareiss_det(m));
    }
    return total;
}

Int binomial(unsigned long n, unsigned long k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

bool triangulation_checks(const Subdivision& S, Outcome& o, const std::string& what) {
    auto v = validate(S);
    o.check(v.ok, what + ": invalid (" + v.reason + ")");
    o.check(is_unimodular(S).unimodular, what + ": not unimodular");
    auto h = is_regular(S);
    o.check(h.has_value() && lifting_induces(S, *h), what + ": no lifting");
    return o.pass;
}

// ---------------------------------------------------------------------------

Outcome staircase() {
    Outcome o;
    auto r = cli("triangulate staircase --left " + data("2d2.json") + " --right " + data("2d1.json"));
    o.check(r.code == 0, "triangulate staircase exited " + std::to_string(r.code));
    if (!o.pass) return o;
    auto path = scratch("staircase.json");
    save(path, r.out);
    auto doc = io::parse(r.out);
    const auto& p = io::payload_of(doc, "subdivision");
    o.check(p.at("cells").size() == 24, "expected 24 cells, got " + std::to_string(p.at("cells").size()));
    o.check(cli("check unimodular --strict --subdivision " + path.string()).code == 0, "check unimodular failed");
    o.check(cli("check regular --strict --subdivision " + path.string()).code == 0, "check regular failed");

    std::set<std::vector<long>> want, got;
    for (long a = 0; a <= 2; ++a)
        for (long b = 0; a + b <= 2; ++b)
            for (long c = 0; c <= 2; ++c) want.insert({a, b, c});
    for (const auto& q : p.at("points")) got.insert(q.get<std::vector<long>>());
    o.check(got == want && p.at("points").size() == 18, "vertex set differs from the lattice points of 2D2 x 2D1");
    Int expected = Int(4) * Int(2) * binomial(3, 1);
    o.check(volume_sum(p) == expected && expected == 24, "cell volumes sum to " + volume_sum(p).get_str());
    if (o.pass) o.detail = "24 unimodular cells, regular, 18 points, volume 24";
    return o;
}

Outcome dilated_simplex_alcoves() {
    Outcome o;
    auto S = alcove_triangulation_dilated_simplex(3, 3);
    triangulation_checks(S, o, "alcove 3D3");
    o.check(S.cells.size() == 27, "expected 27 cells, got " + std::to_string(S.cells.size()));
    o.check(Int(S.points.size()) == binomial(6, 3) && S.points.size() == 20, "expected 20 points");
    Int vol = volume_sum(io::to_json(S));
    o.check(vol == 27, "cell volumes sum to " + vol.get_str());
    o.check(vol == bareiss_det({{3, 0, 0}, {0, 3, 0}, {0, 0, 3}}), "volume differs from the simplex determinant");
    if (o.pass) o.detail = "27 unimodular regular cells on 20 points";
    return o;
}

Outcome figure_two() {
    Outcome o;
    auto P = figure_two_polytope();
    o.check(P.vertices().size() == 5, "figure-2 polytope does not have 5 vertices");
    auto w = breakable_witness(P);
    o.check(w.witness.has_value(), "no witness within the default budget (" + w.method + ")");
    if (!o.pass) return o;
    triangulation_checks(*w.witness, o, "witness");
    std::size_t two = 0;
    for (const auto& S : subdivisions_with_at_most_two_cells(P))
        if (S.cells.size() == 2 && S.lifting) ++two;
    if (o.pass)
        o.detail = std::to_string(w.witness->cells.size()) + "-cell witness via " + w.method + "; report: " + std::to_string(two) +
                   " regular two-cell subdivisions";
    return o;
}

Outcome duality_round_trip() {
    Outcome o;
    std::size_t total = 0;
    for (unsigned long d : {2ul, 3ul}) {
        EnumerationOptions opt;
        opt.regular_only = true;
        auto all = enumerate_subdivisions_2d(dilated_simplex(d, 2), opt);
        o.check(!all.empty(), "no subdivisions of " + std::to_string(d) + "D2");
        auto plane = CurveClassContext::traditional(2);
        for (const auto& S : all) {
            auto G = curve_from_subdivision(S);
            o.check(check_curve(G, plane).ok, "curve fails check_curve");
            o.check(dual_subdivision(G).cells == S.cells, "dual subdivision differs");
            o.check(newton_polygon(asymptotic_star(G)) == S.ambient, "asymptotic Newton polygon differs");
            ++total;
        }
    }
    if (o.pass) o.detail = std::to_string(total) + " coherent subdivisions of 2D2 and 3D2 round-trip";
    return o;
}

Outcome star_order_rank_two() {
    Outcome o;
    auto line = fx::line_star(), conic = fx::conic_star();
    auto up = leq_traditional_2d(line, conic);
    o.check(up.relation == Relation::less && up.witness.has_value(), "line is not below conic with a witness");
    if (up.witness && up.witness_vertex) {
        o.check(check_curve(*up.witness, CurveClassContext::traditional(2)).ok, "witness fails check_curve");
        o.check(equivalent(asymptotic_star(*up.witness), conic), "witness does not recede to the conic");
        o.check(equivalent(vertex_star(*up.witness, *up.witness_vertex), line), "witness vertex is not a line star");
    }
    auto down = leq_traditional_2d(conic, line);
    o.check(down.relation == Relation::incomparable && down.certificate && down.certificate->kind == "volume",
            "conic vs line lacks a volume certificate");
    if (down.certificate) o.check(verify_certificate(conic, line, *down.certificate), "certificate does not verify");

    auto D = downset_2d(conic);
    auto has = [&](const Star& s) { return std::any_of(D.begin(), D.end(), [&](const Star& t) { return equivalent(s, t); }); };
    o.check(has(line) && has(conic), "downset misses the line or the conic");
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < D.size(); ++i)
        for (std::size_t j = 0; j < D.size(); ++j) {
            if (i == j) continue;
            auto a = leq_traditional_2d(D[i], D[j]).relation, b = leq_traditional_2d(D[j], D[i]).relation;
            o.check(!(a == Relation::less && b == Relation::less), "antisymmetry fails");
            o.check(a != Relation::equal && b != Relation::equal, "downset has duplicates");
            o.check(a != Relation::unknown && b != Relation::unknown, "undecided pair in the downset");
            ++pairs;
        }
    if (o.pass) o.detail = "downset of the conic has " + std::to_string(D.size()) + " stars, " + std::to_string(pairs) + " ordered pairs checked";
    return o;
}

bool same_picture(const TropicalCurve& a, const TropicalCurve& b) {
    auto key = [](const TropicalCurve& G) {
        std::multiset<std::pair<RatVector, RatVector>> segs;
        for (const auto& e : G.edges) {
            auto p = G.vertices[e.from].position, q = G.vertices[e.to].position;
            if (q < p) std::swap(p, q);
            segs.insert({p, q});
        }
        std::multiset<RatVector> pts;
        for (const auto& V : G.vertices) pts.insert(V.position);
        return std::make_pair(pts, segs);
    };
    return key(a) == key(b);
}

Outcome rigidity() {
    Outcome o;
    auto K = fx::triangle_complex();
    auto ctx = fx::triangle_context();
    auto spider = is_rigid(fx::spider(), K, ctx);
    o.check(spider.rigid && spider.dimension == 0, "spider is not rigid");
    auto tri = is_rigid(fx::inner_triangle(), K, ctx);
    o.check(!tri.rigid && tri.dimension >= 1, "inner triangle is rigid");
    o.check(!oracle::deforms_by_search(fx::spider(), K), "perturbation oracle deforms the spider");
    o.check(oracle::deforms_by_search(fx::inner_triangle(), K), "perturbation oracle cannot deform the triangle");

    RigidBounds b;
    b.max_vertices = 4;
    b.max_edge_weight = 1;
    LatticeVector beta{Int(1), Int(1), Int(1)};
    auto types = enumerate_rigid(K, CurveTotals{0, 0, beta}, ctx, b);
    auto count = [&](const TropicalCurve& G) {
        return std::count_if(types.begin(), types.end(), [&](const RigidType& t) { return same_picture(t.curve, G); });
    };
    o.check(count(fx::spider()) == 1, "spider emitted " + std::to_string(count(fx::spider())) + " times");
    o.check(count(fx::inner_triangle()) == 0, "inner triangle emitted");
    for (const auto& t : types) {
        o.check(check_curve(t.curve, ctx, &K).ok, "emitted type fails check_curve");
        o.check(is_rigid(t.curve, K, ctx).rigid, "emitted type is not rigid");
    }
    if (o.pass) o.detail = "spider dimension 0, triangle dimension " + std::to_string(tri.dimension) + ", " + std::to_string(types.size()) + " types";
    return o;
}

Outcome canonical_lift_properties() {
    Outcome o;
    std::mt19937 rng(20261015);
    std::size_t disjoint_cases = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = trial % 2 ? 3 : 2;
        auto coarse = support::random_blowups(orthant(n), rng, static_cast<int>(rng() % 3));
        auto fine = support::random_blowups(coarse, rng, 1 + static_cast<int>(rng() % 4));
        bool disjoint = trial % 3 == 0;
        ContactMatrix M{coarse.rays.size(), {}};
        for (int j = 0; j < 3; ++j) M.rows.push_back(support::random_row(coarse, rng, disjoint));
        auto L = canonical_lift(M, identity_map(fine, coarse));
        for (std::size_t j = 0; j < M.rows.size(); ++j)
            for (std::size_t i = 0; i < coarse.rays.size(); ++i) {
                Rat total = 0;
                for (std::size_t k = 0; k < fine.rays.size(); ++k) total += Rat(L.rows[j][k]) * support::pullback(coarse, i, fine.rays[k]);
                o.check(total == Rat(M.rows[j][i]), "tangency not preserved in trial " + std::to_string(trial));
            }
        if (disjoint) {
            ++disjoint_cases;
            o.check(is_disjoint(L), "disjointness lost in trial " + std::to_string(trial));
        }
    }
    auto O = orthant(2);
    auto blow = stellar_subdivide(O, LatticeVector{Int(1), Int(1)});
    auto L = canonical_lift(ContactMatrix{2, {LatticeVector{Int(1), Int(1)}}}, identity_map(blow, O));
    std::size_t nonzero = 0, at = 0;
    for (std::size_t k = 0; k < L.columns; ++k)
        if (L.rows[0][k] != 0) ++nonzero, at = k;
    o.check(nonzero == 1 && blow.rays[at] == LatticeVector{Int(1), Int(1)} && L.rows[0][at] == 1, "(1,1) row does not lift to the diagonal ray");
    if (o.pass) o.detail = "200 instances (" + std::to_string(disjoint_cases) + " disjoint), diagonal example";
    return o;
}

Outcome flatness() {
    Outcome o;
    auto O = orthant(2);
    auto diag = stellar_subdivide(O, LatticeVector{Int(1), Int(1)});
    auto ray = make_cone_complex(1, {LatticeVector{Int(1)}}, {{0}});
    o.check(is_combinatorially_flat(identity_map(O, O)).flat, "identity is not flat");
    o.check(!is_combinatorially_flat(identity_map(diag, O)).flat, "blowup over the orthant is flat");
    o.check(is_combinatorially_flat(make_complex_map(diag, ray, IntMatrix{LatticeVector{Int(1), Int(1)}})).flat, "blowup over the ray is not flat");

    std::mt19937 rng(7);
    std::size_t tested = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 2 + trial % 2, m = 2 + (trial / 2) % 2;
        auto src = support::random_blowups(orthant(n), rng, static_cast<int>(rng() % 4));
        if (all_cones(src).size() > 20) continue;
        IntMatrix A(m, LatticeVector(n, Int(0)));
        for (auto& row : A)
            for (auto& a : row) a = static_cast<long>(rng() % 3);
        auto f = make_complex_map(src, orthant(m), A);
        auto r = flatten(f);
        o.check(is_combinatorially_flat(r.map).flat, "flattened map is not flat (trial " + std::to_string(trial) + ")");
        o.check(is_subdivision_of(r.map.source, f.source) && is_subdivision_of(r.map.target, f.target), "flattening is not a refinement");
        ++tested;
    }
    o.check(tested >= 20, "too few complexes tested");
    if (o.pass) o.detail = "three examples, " + std::to_string(tested) + " complexes flattened";
    return o;
}

Outcome determinism() {
    Outcome o;
    auto d = [](const std::string& n) { return data(n); };
    const std::vector<std::string> commands = {
        "polytope simplex --dim 3 --dilation 2",
        "polytope product --left " + d("figure2.json") + " --right " + d("simplex-2-2.json"),
        "polytope newton --dims 2,1 --degrees 2,2",
        "polytope figure2",
        "polytope hull --point 0,0 --point 3,1 --point 1,3 --point 1,1",
        "triangulate alcove --dim 3 --dilation 3",
        "triangulate staircase --left " + d("2d2.json") + " --right " + d("2d1.json"),
        "triangulate search --polytope " + d("figure2.json"),
        "check unimodular --subdivision " + d("2d2.json"),
        "check regular --subdivision " + d("2d2.json"),
        "check flat --map " + d("diagonal-blowup.json"),
        "check balanced --curve " + d("spider.json"),
        "check balanced --star " + d("conic.json"),
        "check stable --curve " + d("inner-triangle.json"),
        "check rigid --complex " + d("triangle.json") + " --curve " + d("spider.json"),
        "check rigid --complex " + d("triangle-map.json") + " --curve " + d("inner-triangle.json"),
        "check disjoint --contact " + d("contact.json"),
        "dualcomplex --subdivision " + d("four-triangles.json"),
        "dualcomplex --map " + d("triangle-map.json"),
        "lift-contact --contact " + d("contact.json") + " --map " + d("diagonal-blowup.json"),
        "star order --w " + d("line.json") + " --v " + d("conic.json") + " --rank2-exact --json",
        "star order --w " + d("conic.json") + " --v " + d("line.json"),
        "star downset --v " + d("conic.json"),
        "star newton-polygon --star " + d("conic.json"),
        "curve dualize --curve " + d("conic-curve.json"),
        "curve from-subdivision --subdivision " + d("2d2.json"),
        "curve asymptotic --curve " + d("conic-curve.json"),
        "curve stabilize --curve " + d("spider.json"),
        "enumerate subdivisions --polytope " + d("simplex-2-2.json"),
        "enumerate subdivisions --polytope " + d("simplex-3-2.json") + " --max-cells 2",
        "enumerate rigid --complex " + d("triangle.json") + " --context " + d("triangle-context.json") + " --beta 1,1,1 --max-vertices 4",
    };
    for (const auto& c : commands) {
        auto base = cli("--threads 1 " + c);
        o.check(base.code == 0 && !base.out.empty(), "command failed: " + c);
        for (const char* t : {"1", "1", "4", "8"}) {
            auto again = cli(std::string("--threads ") + t + " " + c);
            o.check(again.out == base.out && again.code == base.code, "output differs (threads " + std::string(t) + "): " + c);
        }
    }
    if (o.pass) o.detail = std::to_string(commands.size()) + " commands, 3 runs at 1 thread plus 4 and 8 threads";
    return o;
}

Outcome exactness() {
    Outcome o;
    auto r = support::float_lint(SNCTROP_SOURCE_DIR);
    for (const auto& f : r.findings) o.fail("floating point: " + f);
    o.check(r.files > 10, "too few files scanned");
    if (o.pass) o.detail = std::to_string(r.files) + " files free of floating point";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"staircase pipeline", staircase},
        {"dilated simplex alcoves", dilated_simplex_alcoves},
        {"figure-2 breakability", figure_two},
        {"2D duality round trip", duality_round_trip},
        {"star order, rank 2", star_order_rank_two},
        {"rigidity of the figure types", rigidity},
        {"canonical lift properties", canonical_lift_properties},
        {"combinatorial flatness", flatness},
        {"CLI determinism", determinism},
        {"exactness lint", exactness},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        auto secs = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count() / 1000;
        if (secs >= 60) o.fail("took " + std::to_string(secs) + " s");
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.detail << " (" << secs << " s)"
                  << std::endl;
    }
    return failed ? 1 : 0;
}
