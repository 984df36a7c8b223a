#pragma once

// JSON documents: {"schema", "version", "payload"}. Rationals are strings
// "p/q" in lowest terms (integers as "p"); integers are JSON numbers inside
// the 53-bit safe range and strings outside it.

#include "rigidenum.hpp"
#include "starorder.hpp"

#include "json.hpp"

namespace snctrop::io {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "1";

// Raised for malformed documents.
struct InputError : Error {
    using Error::Error;
};

Json int_to_json(const Int& x);
Int int_from_json(const Json& j);
Json rat_to_json(const Rat& x);
Rat rat_from_json(const Json& j);

Json to_json(const LatticePolytope& P);
Json to_json(const Subdivision& S);
Json to_json(const ConeComplex& S);
Json to_json(const ComplexMap& f);
Json to_json(const ContactMatrix& M);
Json to_json(const PolyhedralComplex& K);
Json to_json(const CurveClassContext& ctx);
Json to_json(const Star& s);
Json to_json(const TropicalCurve& G);
Json to_json(const OrderVerdict& r);
Json to_json(const std::vector<RigidType>& types);

LatticePolytope polytope_from_json(const Json& j);
Subdivision subdivision_from_json(const Json& j);
ConeComplex conecomplex_from_json(const Json& j);
ComplexMap complexmap_from_json(const Json& j);
ContactMatrix contactmatrix_from_json(const Json& j);
PolyhedralComplex polyhedralcomplex_from_json(const Json& j);
CurveClassContext context_from_json(const Json& j);
Star star_from_json(const Json& j);
TropicalCurve curve_from_json(const Json& j);
OrderVerdict ordering_report_from_json(const Json& j);
std::vector<RigidType> rigid_report_from_json(const Json& j);

// Curves and stars may carry their curve-class context in the payload.
std::optional<CurveClassContext> embedded_context(const Json& payload);
Json with_context(Json payload, const CurveClassContext& ctx);

Json document(const std::string& schema, Json payload);
// The payload of a document of the given schema; InputError otherwise.
const Json& payload_of(const Json& doc, const std::string& schema);
std::string schema_of(const Json& doc);

Json parse(const std::string& text);
Json read_file(const std::string& path);  // "-" reads standard input
std::string dump(const Json& doc);        // two-space indent, trailing newline

}  // namespace snctrop::io
