#include "snctrop/cli.hpp"

#include "snctrop/breakable.hpp"
#include "snctrop/duality2d.hpp"
#include "snctrop/enumerate2d.hpp"
#include "snctrop/io.hpp"

#include "CLI11.hpp"

#include <functional>
#include <sstream>

namespace snctrop::cli {

namespace {

using io::Json;

struct Verdict {
    bool ok = true;
    std::string reason;  // FAIL line payload
    std::string detail;  // human-readable lines
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

LatticeVector parse_ints(const std::string& s) {
    LatticeVector v;
    for (const auto& tok : split(s, ',')) v.push_back(io::int_from_json(Json(tok)));
    return v;
}

std::string show(const RatVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
    return s + ")";
}

std::string show(const IndexSet& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

// Loaded documents, keyed by path so that "-" is read once.
class Loader {
public:
    const Json& doc(const std::string& path) {
        auto it = cache_.find(path);
        if (it == cache_.end()) it = cache_.emplace(path, io::read_file(path)).first;
        return it->second;
    }
    const Json& payload(const std::string& path, const std::string& schema) { return io::payload_of(doc(path), schema); }

    LatticePolytope polytope(const std::string& p) { return io::polytope_from_json(payload(p, "polytope")); }
    Subdivision subdivision(const std::string& p) { return io::subdivision_from_json(payload(p, "subdivision")); }
    ConeComplex conecomplex(const std::string& p) { return io::conecomplex_from_json(payload(p, "conecomplex")); }
    ComplexMap complexmap(const std::string& p) { return io::complexmap_from_json(payload(p, "complexmap")); }
    ContactMatrix contact(const std::string& p) { return io::contactmatrix_from_json(payload(p, "contactmatrix")); }
    CurveClassContext context(const std::string& p) { return io::context_from_json(payload(p, "context")); }
    Star star(const std::string& p) { return io::star_from_json(payload(p, "star")); }
    TropicalCurve curve(const std::string& p) { return io::curve_from_json(payload(p, "tropicalcurve")); }

    // A carrier complex: a polyhedral complex, or a map whose fiber over 1 is one.
    PolyhedralComplex carrier(const std::string& p) {
        const auto& d = doc(p);
        if (io::schema_of(d) == "complexmap") return fiber_at_one(complexmap(p));
        return io::polyhedralcomplex_from_json(payload(p, "polyhedralcomplex"));
    }

    // Explicit --context wins over a context embedded in the document.
    CurveClassContext context_for(const std::string& ctx_path, const std::string& p, const std::string& schema,
                                  std::size_t dim) {
        if (!ctx_path.empty()) return context(ctx_path);
        if (auto c = io::embedded_context(payload(p, schema))) return *c;
        return CurveClassContext::traditional(dim);
    }

private:
    std::map<std::string, Json> cache_;
};

struct Options {
    unsigned threads = 1;
    bool strict = false;
    bool json = false;
    bool rank2_exact = false;
    std::string polytope, left, right, subdivision, map, contact, complex, curve, star, w, v, sigma, context;
    unsigned long dim = 2, dilation = 1;
    std::string dims, degrees, beta;
    std::vector<std::string> points;
    std::size_t budget = 0;
    std::optional<std::size_t> max_cells;
    std::size_t max_vertices = 4;
    long max_weight = 1;
    std::optional<long> denominator_bound;
    unsigned genus = 0;
    std::size_t markings = 0;
    bool regular_only = false;
};

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int emit(const std::string& schema, Json payload) {
        out_ << io::dump(io::document(schema, std::move(payload)));
        return 0;
    }

    int verdict(const Verdict& v, bool strict) {
        out_ << (v.ok ? std::string("OK") : "FAIL reason=" + v.reason) << "\n";
        if (!v.detail.empty()) out_ << v.detail << "\n";
        return v.ok || !strict ? 0 : 1;
    }

    std::ostream& out() { return out_; }
    std::ostream& err() { return err_; }

private:
    std::ostream& out_;
    std::ostream& err_;
};

void need(const std::string& value, const char* flag) {
    if (value.empty()) throw io::InputError(std::string("missing ") + flag);
}

// ---------------------------------------------------------------------------
// Verdicts

Verdict check_unimodular(const Subdivision& S) {
    auto v = validate(S);
    if (!v.ok) return {false, "invalid-subdivision", v.reason};
    auto u = is_unimodular(S);
    if (u.unimodular) return {true, "", "unimodular, " + std::to_string(S.cells.size()) + " cells of normalized volume 1"};
    if (!u.offending_cell) return {false, "not-a-triangulation", "some cell is not a simplex"};
    return {false, "cell-volume cell=" + std::to_string(*u.offending_cell) + " volume=" + u.offending_volume.get_str(),
            "cell " + show(S.cells[*u.offending_cell]) + " has normalized volume " + u.offending_volume.get_str()};
}

Verdict check_regular(const Subdivision& S) {
    auto v = validate(S);
    if (!v.ok) return {false, "invalid-subdivision", v.reason};
    if (auto h = is_regular(S)) return {true, "", "regular, lifting " + show(*h)};
    return {false, "not-regular", "no lifting induces this subdivision"};
}

Verdict check_flat(const ComplexMap& f) {
    auto v = is_combinatorially_flat(f);
    if (v.flat) return {true, "", "combinatorially flat"};
    return {false, "cone-not-surjective cone=" + show(*v.offending_cone),
            "cone " + show(*v.offending_cone) + " does not map onto its image carrier " + show(v.image_carrier)};
}

Verdict check_disjoint(const ContactMatrix& M) {
    for (std::size_t i = 0; i < M.rows.size(); ++i)
        for (std::size_t j = i + 1; j < M.rows.size(); ++j)
            for (std::size_t c = 0; c < M.columns; ++c)
                if (M.rows[i][c] != 0 && M.rows[j][c] != 0)
                    return {false, "shared-column rows=" + std::to_string(i) + "," + std::to_string(j) + " column=" + std::to_string(c),
                            "rows " + std::to_string(i) + " and " + std::to_string(j) + " both touch column " + std::to_string(c)};
    require(is_disjoint(M), "disjointness disagrees");
    return {true, "", "disjoint"};
}

Verdict check_balanced_curve(const TropicalCurve& G, const CurveClassContext& ctx) {
    auto v = check_curve(G, ctx);
    if (v.ok) return {true, "", "balanced at every vertex"};
    std::string where = v.vertex ? " vertex=" + std::to_string(*v.vertex) : "";
    return {false, "unbalanced" + where, v.reason};
}

Verdict check_balanced_star(const Star& s, const CurveClassContext& ctx) {
    require(ctx.ambient_dim() == s.dim(), "context and star have different dimensions");
    if (is_balanced(s, ctx)) return {true, "", "balanced"};
    return {false, "unbalanced", "the star's vectors do not sum to the balancing direction"};
}

Verdict check_stable(const TropicalCurve& G) {
    auto v = is_stable(G);
    if (v.stable) return {true, "", "stable"};
    std::string list;
    for (std::size_t i = 0; i < v.unstable_vertices.size(); ++i) list += (i ? "," : "") + std::to_string(v.unstable_vertices[i]);
    return {false, "unstable vertices=" + list, std::to_string(v.unstable_vertices.size()) + " unstable vertices"};
}

Verdict check_rigid(const TropicalCurve& G, const PolyhedralComplex& K, const CurveClassContext& ctx) {
    auto r = is_rigid(G, K, ctx);
    auto d = std::to_string(r.dimension);
    if (r.rigid) return {true, "", "rigid, deformation dimension " + d};
    return {false, "deformable dimension=" + d, "not rigid, deformation dimension " + d};
}

// ---------------------------------------------------------------------------

OrderVerdict star_order(Loader& L, const Options& o) {
    need(o.w, "--w");
    need(o.v, "--v");
    Star w = L.star(o.w), v = L.star(o.v);
    OrderBudget budget;
    if (o.budget) budget.point_cap = o.budget;
    budget.threads = o.threads;
    if (!o.sigma.empty()) {
        auto ctx = L.context_for(o.context, o.v, "star", v.dim());
        return leq_general(w, v, L.conecomplex(o.sigma), ctx, budget);
    }
    if (o.rank2_exact) return leq_traditional_2d(w, v, budget);
    return detail::leq_traditional(w, v, budget);
}

Json list_of(const std::vector<Subdivision>& subs) {
    Json a = Json::array();
    for (const auto& S : subs) a.push_back(io::to_json(S));
    return Json{{"count", subs.size()}, {"subdivisions", a}};
}

Json list_of(const std::vector<Star>& stars) {
    Json a = Json::array();
    for (const auto& s : stars) a.push_back(io::to_json(s));
    return Json{{"count", stars.size()}, {"stars", a}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    Runner R(out, err);
    Loader L;
    std::function<int()> action;

    CLI::App app{"Lattice polytopes, cone complexes and tropical curves in exact arithmetic", "snctrop"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--threads", o.threads, "worker threads for enumerations")->check(CLI::Range(1u, 256u));

    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, std::function<int()> fn) {
        auto* c = parent->add_subcommand(name, help);
        c->callback([&action, fn] { action = fn; });
        return c;
    };
    auto file = [](CLI::App* c, const std::string& flag, std::string& target, const std::string& help) {
        c->add_option(flag, target, help + " (path, or - for standard input)");
    };

    // polytope -------------------------------------------------------------
    auto* poly = app.add_subcommand("polytope", "construct lattice polytopes")->require_subcommand(1);
    {
        auto* c = leaf(poly, "simplex", "dilated standard simplex", [&] { return R.emit("polytope", io::to_json(dilated_simplex(o.dilation, o.dim))); });
        c->add_option("--dim", o.dim)->required();
        c->add_option("--dilation", o.dilation)->required();

        c = leaf(poly, "product", "product of two polytopes",
                 [&] { need(o.left, "--left"); need(o.right, "--right"); return R.emit("polytope", io::to_json(product(L.polytope(o.left), L.polytope(o.right)))); });
        file(c, "--left", o.left, "polytope");
        file(c, "--right", o.right, "polytope");

        c = leaf(poly, "newton", "Newton polytope of a multidegree in a product of projective spaces", [&] {
            std::vector<unsigned long> dims, degs;
            for (const auto& x : parse_ints(o.dims)) dims.push_back(x.get_ui());
            for (const auto& x : parse_ints(o.degrees)) degs.push_back(x.get_ui());
            return R.emit("polytope", io::to_json(newton_polytope(dims, degs)));
        });
        c->add_option("--dims", o.dims, "factor dimensions, comma separated")->required();
        c->add_option("--degrees", o.degrees, "multidegree, comma separated")->required();

        leaf(poly, "figure2", "the five-vertex breakable example", [&] { return R.emit("polytope", io::to_json(figure_two_polytope())); });

        c = leaf(poly, "hull", "convex hull of lattice points", [&] {
            std::vector<LatticeVector> pts;
            for (const auto& p : o.points) pts.push_back(parse_ints(p));
            if (pts.empty()) throw io::InputError("hull needs at least one --point");
            for (const auto& p : pts)
                if (p.size() != pts[0].size()) throw io::InputError("points have different dimensions");
            return R.emit("polytope", io::to_json(convex_hull(pts)));
        });
        c->add_option("--point", o.points, "lattice point, comma separated; repeatable")->required();
    }

    // triangulate ----------------------------------------------------------
    auto* tri = app.add_subcommand("triangulate", "constructive triangulations")->require_subcommand(1);
    {
        auto* c = leaf(tri, "alcove", "alcove triangulation of a dilated simplex",
                       [&] { return R.emit("subdivision", io::to_json(alcove_triangulation_dilated_simplex(o.dilation, o.dim))); });
        c->add_option("--dim", o.dim)->required();
        c->add_option("--dilation", o.dilation)->required();

        c = leaf(tri, "staircase", "staircase refinement of two triangulations", [&] {
            need(o.left, "--left");
            need(o.right, "--right");
            return R.emit("subdivision", io::to_json(staircase_triangulation(L.subdivision(o.left), L.subdivision(o.right))));
        });
        file(c, "--left", o.left, "subdivision");
        file(c, "--right", o.right, "subdivision");

        c = leaf(tri, "search", "search for a regular unimodular triangulation", [&] {
            need(o.polytope, "--polytope");
            auto r = breakable_witness(L.polytope(o.polytope), o.budget ? o.budget : 100000);
            if (!r.witness) {
                R.out() << "FAIL reason=" << r.method << " orderings=" << r.orderings_tried << "\n";
                return 1;
            }
            return R.emit("subdivision", io::to_json(*r.witness));
        });
        file(c, "--polytope", o.polytope, "polytope");
        c->add_option("--budget", o.budget, "candidate orderings to try (default 100000)");
    }

    // check ----------------------------------------------------------------
    auto* chk = app.add_subcommand("check", "verdicts; first line OK or FAIL reason=...")->require_subcommand(1);
    chk->add_flag("--strict", o.strict, "exit 1 on a negative verdict");
    {
        auto* c = leaf(chk, "unimodular", "every maximal cell has normalized volume 1",
                       [&] { need(o.subdivision, "--subdivision"); return R.verdict(check_unimodular(L.subdivision(o.subdivision)), o.strict); });
        file(c, "--subdivision", o.subdivision, "subdivision");

        c = leaf(chk, "regular", "some lifting induces the subdivision",
                 [&] { need(o.subdivision, "--subdivision"); return R.verdict(check_regular(L.subdivision(o.subdivision)), o.strict); });
        file(c, "--subdivision", o.subdivision, "subdivision");

        c = leaf(chk, "flat", "every cone maps onto a cone", [&] { need(o.map, "--map"); return R.verdict(check_flat(L.complexmap(o.map)), o.strict); });
        file(c, "--map", o.map, "complexmap");

        c = leaf(chk, "disjoint", "no two contact rows share a column",
                 [&] { need(o.contact, "--contact"); return R.verdict(check_disjoint(L.contact(o.contact)), o.strict); });
        file(c, "--contact", o.contact, "contactmatrix");

        c = leaf(chk, "balanced", "balancing of a curve or a star", [&] {
            if (!o.curve.empty()) {
                auto G = L.curve(o.curve);
                return R.verdict(check_balanced_curve(G, L.context_for(o.context, o.curve, "tropicalcurve", G.ambient_dim)), o.strict);
            }
            need(o.star, "--curve or --star");
            auto s = L.star(o.star);
            return R.verdict(check_balanced_star(s, L.context_for(o.context, o.star, "star", s.dim())), o.strict);
        });
        file(c, "--curve", o.curve, "tropicalcurve");
        file(c, "--star", o.star, "star");
        file(c, "--context", o.context, "context");

        c = leaf(chk, "stable", "no unstable vertices", [&] { need(o.curve, "--curve"); return R.verdict(check_stable(L.curve(o.curve)), o.strict); });
        file(c, "--curve", o.curve, "tropicalcurve");

        c = leaf(chk, "rigid", "no deformations within the combinatorial type", [&] {
            need(o.curve, "--curve");
            need(o.complex, "--complex");
            auto G = L.curve(o.curve);
            auto ctx = L.context_for(o.context, o.curve, "tropicalcurve", G.ambient_dim);
            return R.verdict(check_rigid(G, L.carrier(o.complex), ctx), o.strict);
        });
        file(c, "--curve", o.curve, "tropicalcurve");
        file(c, "--complex", o.complex, "polyhedralcomplex or complexmap");
        file(c, "--context", o.context, "context");
    }

    // dualcomplex, lift-contact ---------------------------------------------
    {
        auto* c = leaf(&app, "dualcomplex", "dual complex of a lifted subdivision or fiber of a map over 1", [&] {
            if (!o.map.empty()) return R.emit("polyhedralcomplex", io::to_json(fiber_at_one(L.complexmap(o.map))));
            need(o.subdivision, "--subdivision or --map");
            auto S = L.subdivision(o.subdivision);
            if (!S.lifting) {
                auto h = is_regular(S);
                if (!h) throw io::InputError("the subdivision is not regular");
                S = with_lifting(S, *h);
            }
            return R.emit("polyhedralcomplex", io::to_json(legendre_dual(S)));
        });
        file(c, "--subdivision", o.subdivision, "subdivision");
        file(c, "--map", o.map, "complexmap");

        c = leaf(&app, "lift-contact", "canonical lift of a contact matrix along a map", [&] {
            need(o.contact, "--contact");
            need(o.map, "--map");
            return R.emit("contactmatrix", io::to_json(canonical_lift(L.contact(o.contact), L.complexmap(o.map))));
        });
        file(c, "--contact", o.contact, "contactmatrix");
        file(c, "--map", o.map, "complexmap");
    }

    // star -----------------------------------------------------------------
    auto* st = app.add_subcommand("star", "the star order")->require_subcommand(1);
    {
        auto* c = leaf(st, "order", "decide w <= v", [&] {
            auto r = star_order(L, o);
            if (o.json) return R.emit("ordering-report", io::to_json(r));
            auto j = io::to_json(r);
            R.out() << j.at("summary").get<std::string>() << "\n";
            if (!r.reason.empty()) R.out() << r.reason << "\n";
            return 0;
        });
        file(c, "--w", o.w, "star");
        file(c, "--v", o.v, "star");
        file(c, "--sigma", o.sigma, "conecomplex; decides the general order");
        file(c, "--context", o.context, "context");
        c->add_flag("--rank2-exact", o.rank2_exact, "exact decision for plane stars");
        c->add_option("--budget", o.budget, "lattice point cap for the enumeration (default 12)");
        c->add_flag("--json", o.json, "print an ordering-report document");

        c = leaf(st, "downset", "all plane stars below v", [&] {
            need(o.v, "--v");
            OrderBudget b;
            if (o.budget) b.point_cap = o.budget;
            b.threads = o.threads;
            return R.emit("star-list", list_of(downset_2d(L.star(o.v), b)));
        });
        file(c, "--v", o.v, "star");
        c->add_option("--budget", o.budget, "lattice point cap (default 12)");

        c = leaf(st, "newton-polygon", "Newton polygon of a plane star", [&] {
            need(o.star, "--star");
            auto s = L.star(o.star);
            auto ctx = L.context_for(o.context, o.star, "star", s.dim());
            return R.emit("polytope", io::to_json(newton_polygon(s, ctx)));
        });
        file(c, "--star", o.star, "star");
        file(c, "--context", o.context, "context");
    }

    // curve ----------------------------------------------------------------
    auto* cv = app.add_subcommand("curve", "plane duality and recession")->require_subcommand(1);
    {
        auto* c = leaf(cv, "dualize", "dual subdivision of a plane curve",
                       [&] { need(o.curve, "--curve"); return R.emit("subdivision", io::to_json(dual_subdivision(L.curve(o.curve)))); });
        file(c, "--curve", o.curve, "tropicalcurve");

        c = leaf(cv, "from-subdivision", "plane curve dual to a regular subdivision", [&] {
            need(o.subdivision, "--subdivision");
            auto S = L.subdivision(o.subdivision);
            if (!S.lifting) {
                auto h = is_regular(S);
                if (!h) throw io::InputError("the subdivision is not regular");
                S = with_lifting(S, *h);
            }
            return R.emit("tropicalcurve", io::to_json(curve_from_subdivision(S)));
        });
        file(c, "--subdivision", o.subdivision, "subdivision");

        c = leaf(cv, "asymptotic", "recession star of a curve", [&] {
            need(o.curve, "--curve");
            Json s = io::to_json(asymptotic_star(L.curve(o.curve)));
            if (auto ctx = io::embedded_context(L.payload(o.curve, "tropicalcurve"))) s = io::with_context(s, *ctx);
            return R.emit("star", s);
        });
        file(c, "--curve", o.curve, "tropicalcurve");

        c = leaf(cv, "stabilize", "contract unstable vertices", [&] {
            need(o.curve, "--curve");
            Json g = io::to_json(stabilize(L.curve(o.curve)));
            if (auto ctx = io::embedded_context(L.payload(o.curve, "tropicalcurve"))) g = io::with_context(g, *ctx);
            return R.emit("tropicalcurve", g);
        });
        file(c, "--curve", o.curve, "tropicalcurve");
    }

    // enumerate ------------------------------------------------------------
    auto* en = app.add_subcommand("enumerate", "exhaustive enumerations")->require_subcommand(1);
    {
        auto* c = leaf(en, "subdivisions", "lattice subdivisions of a polygon, or with --max-cells 2 of any polytope", [&] {
            need(o.polytope, "--polytope");
            auto P = L.polytope(o.polytope);
            if (P.dim() > 2) {
                if (!o.max_cells || *o.max_cells > 2) throw io::InputError("above dimension two only --max-cells 1 or 2 is supported");
                auto subs = subdivisions_with_at_most_two_cells(P, o.budget ? o.budget : 12);
                std::erase_if(subs, [&](const Subdivision& S) {
                    return S.cells.size() > *o.max_cells || (o.regular_only && !S.lifting.has_value());
                });
                return R.emit("subdivision-list", list_of(subs));
            }
            EnumerationOptions opt;
            opt.regular_only = o.regular_only;
            opt.max_cells = o.max_cells;
            if (o.budget) opt.point_cap = o.budget;
            opt.threads = o.threads;
            return R.emit("subdivision-list", list_of(enumerate_subdivisions_2d(P, opt)));
        });
        file(c, "--polytope", o.polytope, "polytope");
        c->add_option("--max-cells", o.max_cells, "maximal number of cells");
        c->add_flag("--regular-only", o.regular_only, "keep regular subdivisions only");
        c->add_option("--budget", o.budget, "lattice point cap (default 12)");

        c = leaf(en, "rigid", "rigid embedded tropical curve types on a carrier", [&] {
            need(o.complex, "--complex");
            auto K = L.carrier(o.complex);
            CurveClassContext ctx = o.context.empty() ? CurveClassContext::traditional(K.ambient_dim) : L.context(o.context);
            CurveTotals totals{o.genus, o.markings, o.beta.empty() ? LatticeVector{} : parse_ints(o.beta)};
            RigidBounds b;
            b.max_vertices = o.max_vertices;
            b.max_edge_weight = o.max_weight;
            if (o.denominator_bound) b.denominator_bound = Int(*o.denominator_bound);
            b.threads = o.threads;
            return R.emit("rigid-report", io::to_json(enumerate_rigid(K, totals, ctx, b)));
        });
        file(c, "--complex", o.complex, "polyhedralcomplex or complexmap");
        file(c, "--context", o.context, "context");
        c->add_option("--beta", o.beta, "total curve class, comma separated");
        c->add_option("--genus", o.genus, "total genus");
        c->add_option("--markings", o.markings, "number of marked points");
        c->add_option("--max-vertices", o.max_vertices, "vertex bound (default 4)");
        c->add_option("--max-weight", o.max_weight, "edge weight bound (default 1)")->check(CLI::PositiveNumber);
        c->add_option("--denominator-bound", o.denominator_bound, "grid denominator (default derived from the carrier)")
            ->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        return action ? action() : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace snctrop::cli
