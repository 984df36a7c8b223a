#include "snctrop/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace snctrop::io {

namespace {

const Int kSafe = Int("9007199254740991");

void expect(bool cond, const std::string& msg) {
    if (!cond) throw InputError(msg);
}

const Json& field(const Json& j, const char* key) {
    expect(j.is_object() && j.contains(key), std::string("missing field \"") + key + "\"");
    return j.at(key);
}

Json ints(const LatticeVector& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(int_to_json(x));
    return a;
}

Json rats(const RatVector& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(rat_to_json(x));
    return a;
}

Json int_rows(const IntMatrix& m) {
    Json a = Json::array();
    for (const auto& r : m) a.push_back(ints(r));
    return a;
}

Json indices(const IndexSet& s) {
    Json a = Json::array();
    for (auto i : s) a.push_back(i);
    return a;
}

LatticeVector ints_from(const Json& j) {
    expect(j.is_array(), "expected an array of integers");
    LatticeVector v;
    for (const auto& x : j) v.push_back(int_from_json(x));
    return v;
}

RatVector rats_from(const Json& j) {
    expect(j.is_array(), "expected an array of rationals");
    RatVector v;
    for (const auto& x : j) v.push_back(rat_from_json(x));
    return v;
}

IntMatrix int_rows_from(const Json& j) {
    expect(j.is_array(), "expected an array of integer rows");
    IntMatrix m;
    for (const auto& r : j) m.push_back(ints_from(r));
    return m;
}

IndexSet indices_from(const Json& j) {
    expect(j.is_array(), "expected an array of indices");
    IndexSet s;
    for (const auto& x : j) {
        expect(x.is_number_unsigned() || (x.is_number_integer() && x.get<long long>() >= 0), "expected a non-negative index");
        s.push_back(x.get<std::size_t>());
    }
    return s;
}

std::vector<IndexSet> index_rows_from(const Json& j) {
    expect(j.is_array(), "expected an array of index sets");
    std::vector<IndexSet> out;
    for (const auto& r : j) out.push_back(indices_from(r));
    return out;
}

Json optional_index(const std::optional<std::size_t>& x) { return x ? Json(*x) : Json(nullptr); }

std::optional<std::size_t> optional_index_from(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    const auto& x = j.at(key);
    expect(x.is_number_unsigned() || (x.is_number_integer() && x.get<long long>() >= 0), "expected a non-negative index");
    return x.get<std::size_t>();
}

std::size_t size_from(const Json& j) {
    expect(j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0), "expected a non-negative integer");
    return j.get<std::size_t>();
}

}  // namespace

Json int_to_json(const Int& x) {
    if (abs(x) <= kSafe) return Json(x.get_si());
    return Json(x.get_str());
}

Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return j.is_number_unsigned() ? Int(std::to_string(j.get<unsigned long long>())) : Int(std::to_string(j.get<long long>()));
    expect(j.is_string(), "expected an integer");
    Int x;
    expect(x.set_str(j.get<std::string>(), 10) == 0, "malformed integer \"" + j.get<std::string>() + "\"");
    return x;
}

Json rat_to_json(const Rat& x) {
    Rat r = x;
    r.canonicalize();
    return Json(r.get_str());
}

Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat(int_from_json(j));
    expect(j.is_string(), "expected a rational string p/q");
    const auto s = j.get<std::string>();
    auto slash = s.find('/');
    Int p, q = 1;
    expect(p.set_str(s.substr(0, slash), 10) == 0, "malformed rational \"" + s + "\"");
    if (slash != std::string::npos) expect(q.set_str(s.substr(slash + 1), 10) == 0 && q != 0, "malformed rational \"" + s + "\"");
    Rat r(p, q);
    r.canonicalize();
    return r;
}

// ---------------------------------------------------------------------------

Json to_json(const LatticePolytope& P) {
    Json v = Json::array();
    for (const auto& x : P.vertices()) v.push_back(ints(x));
    return Json{{"ambient_dim", P.ambient_dim()}, {"vertices", v}};
}

LatticePolytope polytope_from_json(const Json& j) {
    auto verts = int_rows_from(field(j, "vertices"));
    expect(!verts.empty(), "a polytope needs at least one vertex");
    std::size_t n = size_from(field(j, "ambient_dim"));
    for (const auto& v : verts) expect(v.size() == n, "vertex has the wrong dimension");
    return LatticePolytope::hull(verts);
}

Json to_json(const Subdivision& S) {
    Json cells = Json::array();
    for (const auto& c : S.cells) cells.push_back(indices(c));
    Json pts = Json::array();
    for (const auto& p : S.points) pts.push_back(ints(p));
    return Json{{"polytope", to_json(S.ambient)},
                {"points", pts},
                {"cells", cells},
                {"lifting", S.lifting ? rats(*S.lifting) : Json(nullptr)}};
}

Subdivision subdivision_from_json(const Json& j) {
    auto P = polytope_from_json(field(j, "polytope"));
    auto pts = int_rows_from(field(j, "points"));
    for (const auto& p : pts) expect(p.size() == P.ambient_dim(), "point has the wrong dimension");
    auto cells = index_rows_from(field(j, "cells"));
    for (const auto& c : cells)
        for (auto i : c) expect(i < pts.size(), "cell refers to a missing point");
    std::optional<RatVector> h;
    if (j.contains("lifting") && !j.at("lifting").is_null()) {
        h = rats_from(j.at("lifting"));
        expect(h->size() == pts.size(), "lifting has the wrong length");
    }
    return make_subdivision(P, pts, cells, h);
}

Json to_json(const ConeComplex& S) {
    Json cones = Json::array();
    for (const auto& c : S.cones) cones.push_back(indices(c));
    return Json{{"ambient_dim", S.ambient_dim}, {"rays", int_rows(S.rays)}, {"cones", cones}};
}

ConeComplex conecomplex_from_json(const Json& j) {
    std::size_t n = size_from(field(j, "ambient_dim"));
    auto rays = int_rows_from(field(j, "rays"));
    for (const auto& r : rays) expect(r.size() == n, "ray has the wrong dimension");
    auto cones = index_rows_from(field(j, "cones"));
    for (const auto& c : cones)
        for (auto i : c) expect(i < rays.size(), "cone refers to a missing ray");
    return make_cone_complex(n, rays, cones);
}

Json to_json(const ComplexMap& f) {
    return Json{{"source", to_json(f.source)}, {"target", to_json(f.target)}, {"matrix", int_rows(f.matrix)}};
}

ComplexMap complexmap_from_json(const Json& j) {
    auto src = conecomplex_from_json(field(j, "source"));
    auto tgt = conecomplex_from_json(field(j, "target"));
    auto m = int_rows_from(field(j, "matrix"));
    expect(m.size() == tgt.ambient_dim, "map matrix has the wrong number of rows");
    for (const auto& r : m) expect(r.size() == src.ambient_dim, "map matrix has the wrong number of columns");
    return make_complex_map(src, tgt, m);
}

Json to_json(const ContactMatrix& M) { return Json{{"columns", M.columns}, {"rows", int_rows(M.rows)}}; }

ContactMatrix contactmatrix_from_json(const Json& j) {
    ContactMatrix M;
    M.columns = size_from(field(j, "columns"));
    M.rows = int_rows_from(field(j, "rows"));
    for (const auto& r : M.rows) {
        expect(r.size() == M.columns, "contact row has the wrong length");
        for (const auto& x : r) expect(x >= 0, "contact orders are non-negative");
    }
    return M;
}

Json to_json(const PolyhedralComplex& K) {
    Json verts = Json::array();
    for (const auto& v : K.vertices) verts.push_back(rats(v));
    Json cells = Json::array();
    for (const auto& c : K.cells)
        cells.push_back(Json{{"dim", c.dim}, {"vertices", indices(c.vertices)}, {"rays", indices(c.rays)},
                             {"facets", indices(c.facets)}, {"tag", indices(c.tag)}});
    return Json{{"ambient_dim", K.ambient_dim}, {"vertices", verts}, {"rays", int_rows(K.rays)}, {"cells", cells}};
}

PolyhedralComplex polyhedralcomplex_from_json(const Json& j) {
    PolyhedralComplex K;
    K.ambient_dim = size_from(field(j, "ambient_dim"));
    for (const auto& v : field(j, "vertices")) {
        K.vertices.push_back(rats_from(v));
        expect(K.vertices.back().size() == K.ambient_dim, "vertex has the wrong dimension");
    }
    K.rays = int_rows_from(field(j, "rays"));
    for (const auto& r : K.rays) expect(r.size() == K.ambient_dim, "ray has the wrong dimension");
    expect(field(j, "cells").is_array(), "cells must be an array");
    for (const auto& c : j.at("cells")) {
        PolyCell cell;
        cell.vertices = indices_from(field(c, "vertices"));
        cell.rays = indices_from(field(c, "rays"));
        if (c.contains("tag")) cell.tag = indices_from(c.at("tag"));
        for (auto i : cell.vertices) expect(i < K.vertices.size(), "cell refers to a missing vertex");
        for (auto i : cell.rays) expect(i < K.rays.size(), "cell refers to a missing ray");
        K.cells.push_back(cell);
    }
    finalize_complex(K);
    return K;
}

Json to_json(const CurveClassContext& ctx) { return Json{{"rank", ctx.rank}, {"intersection", int_rows(ctx.intersection)}}; }

CurveClassContext context_from_json(const Json& j) {
    CurveClassContext ctx;
    ctx.rank = size_from(field(j, "rank"));
    ctx.intersection = int_rows_from(field(j, "intersection"));
    for (const auto& r : ctx.intersection) expect(r.size() == ctx.rank, "intersection row has the wrong length");
    return ctx;
}

Json to_json(const Star& s) {
    return Json{{"base", rats(s.base)}, {"vectors", int_rows(s.vectors)}, {"beta", ints(s.beta)}, {"markings", indices(s.markings)}};
}

Star star_from_json(const Json& j) {
    Star s;
    s.base = rats_from(field(j, "base"));
    s.vectors = int_rows_from(field(j, "vectors"));
    for (const auto& v : s.vectors) expect(v.size() == s.base.size(), "star vector has the wrong dimension");
    if (j.contains("beta")) s.beta = ints_from(j.at("beta"));
    if (j.contains("markings")) s.markings = indices_from(j.at("markings"));
    return s;
}

Json to_json(const TropicalCurve& G) {
    Json verts = Json::array(), edges = Json::array(), legs = Json::array();
    for (const auto& V : G.vertices)
        verts.push_back(Json{{"position", rats(V.position)}, {"cell", optional_index(V.cell)}, {"beta", ints(V.beta)},
                             {"markings", indices(V.markings)}, {"genus", V.genus}});
    for (const auto& e : G.edges)
        edges.push_back(Json{{"from", e.from}, {"to", e.to}, {"direction", ints(e.direction)}, {"weight", int_to_json(e.weight)},
                             {"cell", optional_index(e.cell)}});
    for (const auto& l : G.legs)
        legs.push_back(Json{{"vertex", l.vertex}, {"direction", ints(l.direction)}, {"weight", int_to_json(l.weight)},
                            {"cell", optional_index(l.cell)}});
    return Json{{"ambient_dim", G.ambient_dim}, {"vertices", verts}, {"edges", edges}, {"legs", legs}};
}

TropicalCurve curve_from_json(const Json& j) {
    TropicalCurve G;
    G.ambient_dim = size_from(field(j, "ambient_dim"));
    expect(field(j, "vertices").is_array(), "vertices must be an array");
    for (const auto& v : j.at("vertices")) {
        CurveVertex V;
        V.position = rats_from(field(v, "position"));
        expect(V.position.size() == G.ambient_dim, "vertex position has the wrong dimension");
        V.cell = optional_index_from(v, "cell");
        if (v.contains("beta")) V.beta = ints_from(v.at("beta"));
        if (v.contains("markings")) V.markings = indices_from(v.at("markings"));
        if (v.contains("genus")) V.genus = static_cast<unsigned>(size_from(v.at("genus")));
        G.vertices.push_back(V);
    }
    auto check_dir = [&](const LatticeVector& d) { expect(d.size() == G.ambient_dim, "direction has the wrong dimension"); };
    if (j.contains("edges"))
        for (const auto& e : j.at("edges")) {
            CurveEdge E;
            E.from = size_from(field(e, "from"));
            E.to = size_from(field(e, "to"));
            expect(E.from < G.vertices.size() && E.to < G.vertices.size(), "edge refers to a missing vertex");
            E.direction = ints_from(field(e, "direction"));
            check_dir(E.direction);
            E.weight = e.contains("weight") ? int_from_json(e.at("weight")) : Int(1);
            E.cell = optional_index_from(e, "cell");
            G.edges.push_back(E);
        }
    if (j.contains("legs"))
        for (const auto& l : j.at("legs")) {
            CurveLeg L;
            L.vertex = size_from(field(l, "vertex"));
            expect(L.vertex < G.vertices.size(), "leg refers to a missing vertex");
            L.direction = ints_from(field(l, "direction"));
            check_dir(L.direction);
            L.weight = l.contains("weight") ? int_from_json(l.at("weight")) : Int(1);
            L.cell = optional_index_from(l, "cell");
            G.legs.push_back(L);
        }
    return G;
}

std::optional<CurveClassContext> embedded_context(const Json& payload) {
    if (!payload.is_object() || !payload.contains("context") || payload.at("context").is_null()) return std::nullopt;
    return context_from_json(payload.at("context"));
}

Json with_context(Json payload, const CurveClassContext& ctx) {
    payload["context"] = to_json(ctx);
    return payload;
}

Json to_json(const OrderVerdict& r) {
    Json cert = nullptr;
    if (r.certificate) {
        const auto& c = *r.certificate;
        cert = Json{{"kind", c.kind},
                    {"detail", c.detail},
                    {"volume_w", int_to_json(c.volume_w)},
                    {"volume_v", int_to_json(c.volume_v)},
                    {"basis", int_rows(c.basis)},
                    {"projection", int_rows(c.projection)}};
    }
    std::string summary = to_string(r.relation);
    if (r.witness) summary += ", witness attached";
    if (r.certificate) summary += ", certificate: " + r.certificate->kind;
    return Json{{"relation", to_string(r.relation)},
                {"summary", summary},
                {"reason", r.reason},
                {"witness", r.witness ? to_json(*r.witness) : Json(nullptr)},
                {"witness_vertex", optional_index(r.witness_vertex)},
                {"certificate", cert}};
}

OrderVerdict ordering_report_from_json(const Json& j) {
    OrderVerdict r;
    auto rel = field(j, "relation").get<std::string>();
    if (rel == "less") r.relation = Relation::less;
    else if (rel == "equal") r.relation = Relation::equal;
    else if (rel == "incomparable") r.relation = Relation::incomparable;
    else if (rel == "unknown-within-budget") r.relation = Relation::unknown;
    else throw InputError("unknown relation \"" + rel + "\"");
    if (j.contains("reason")) r.reason = j.at("reason").get<std::string>();
    if (j.contains("witness") && !j.at("witness").is_null()) r.witness = curve_from_json(j.at("witness"));
    r.witness_vertex = optional_index_from(j, "witness_vertex");
    if (j.contains("certificate") && !j.at("certificate").is_null()) {
        const auto& c = j.at("certificate");
        OrderCertificate oc;
        oc.kind = field(c, "kind").get<std::string>();
        oc.detail = c.value("detail", "");
        if (c.contains("volume_w")) oc.volume_w = int_from_json(c.at("volume_w"));
        if (c.contains("volume_v")) oc.volume_v = int_from_json(c.at("volume_v"));
        if (c.contains("basis")) oc.basis = int_rows_from(c.at("basis"));
        if (c.contains("projection")) oc.projection = int_rows_from(c.at("projection"));
        r.certificate = oc;
    }
    return r;
}

Json to_json(const std::vector<RigidType>& types) {
    Json arr = Json::array();
    for (const auto& t : types) {
        Json stars = Json::array();
        for (const auto& s : classify_type(t)) stars.push_back(to_json(s));
        arr.push_back(Json{{"curve", to_json(t.curve)}, {"deformation_dimension", t.deformation_dimension}, {"stars", stars}});
    }
    return Json{{"count", types.size()}, {"types", arr}};
}

std::vector<RigidType> rigid_report_from_json(const Json& j) {
    std::vector<RigidType> out;
    expect(field(j, "types").is_array(), "types must be an array");
    for (const auto& t : j.at("types"))
        out.push_back(RigidType{curve_from_json(field(t, "curve")), size_from(field(t, "deformation_dimension"))});
    return out;
}

// ---------------------------------------------------------------------------

Json document(const std::string& schema, Json payload) {
    return Json{{"schema", schema}, {"version", kVersion}, {"payload", std::move(payload)}};
}

std::string schema_of(const Json& doc) {
    expect(doc.is_object() && doc.contains("schema") && doc.at("schema").is_string(), "not a document: missing \"schema\"");
    return doc.at("schema").get<std::string>();
}

const Json& payload_of(const Json& doc, const std::string& schema) {
    auto s = schema_of(doc);
    expect(s == schema, "expected a \"" + schema + "\" document, got \"" + s + "\"");
    expect(doc.contains("version") && doc.at("version") == kVersion, "unsupported document version");
    return field(doc, "payload");
}

Json parse(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

Json read_file(const std::string& path) {
    std::stringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        expect(in.good(), "cannot open \"" + path + "\"");
        ss << in.rdbuf();
    }
    return parse(ss.str());
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace snctrop::io
