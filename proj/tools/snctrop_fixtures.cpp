// Writes the example documents under data/ into the given directory.

#include "snctrop/fixtures.hpp"
#include "snctrop/io.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace snctrop;
namespace fx = snctrop::fixtures;
using io::Json;

namespace {

void write(const std::filesystem::path& dir, const std::string& name, const std::string& schema, const Json& payload) {
    std::ofstream f(dir / name);
    f << io::dump(io::document(schema, payload));
}

LatticeVector lv(std::initializer_list<long> xs) {
    LatticeVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: snctrop_fixtures DIR\n";
        return 2;
    }
    std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    auto ctx = fx::triangle_context();

    write(dir, "triangle.json", "polyhedralcomplex", io::to_json(fx::triangle_complex()));
    write(dir, "triangle-context.json", "context", io::to_json(ctx));
    write(dir, "spider.json", "tropicalcurve", io::with_context(io::to_json(fx::spider()), ctx));
    write(dir, "inner-triangle.json", "tropicalcurve", io::with_context(io::to_json(fx::inner_triangle()), ctx));
    write(dir, "line.json", "star", io::to_json(fx::line_star()));
    write(dir, "conic.json", "star", io::to_json(fx::conic_star()));
    write(dir, "2d2.json", "subdivision", io::to_json(alcove_triangulation_dilated_simplex(2, 2)));
    write(dir, "2d1.json", "subdivision", io::to_json(alcove_triangulation_dilated_simplex(2, 1)));
    write(dir, "figure2.json", "polytope", io::to_json(figure_two_polytope()));
    write(dir, "four-triangles.json", "subdivision", io::to_json(fx::four_triangles()));
    write(dir, "conic-curve.json", "tropicalcurve", io::to_json(curve_from_subdivision(fx::four_triangles())));
    write(dir, "simplex-2-2.json", "polytope", io::to_json(dilated_simplex(2, 2)));
    write(dir, "simplex-3-2.json", "polytope", io::to_json(dilated_simplex(2, 3)));

    ConeComplex ray = make_cone_complex(1, {lv({1})}, {{0}});
    write(dir, "triangle-map.json", "complexmap", io::to_json(make_complex_map(orthant(3), ray, IntMatrix{lv({1, 1, 1})})));

    auto O = orthant(2);
    auto blowup = stellar_subdivide(O, lv({1, 1}));
    write(dir, "orthant.json", "conecomplex", io::to_json(O));
    write(dir, "diagonal-blowup.json", "complexmap", io::to_json(identity_map(blowup, O)));
    write(dir, "contact.json", "contactmatrix", io::to_json(ContactMatrix{2, {lv({1, 1}), lv({2, 0})}}));
    return 0;
}
