#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "trapmodes/io.hpp"

using namespace trapmodes;

namespace {

int count(const std::string& s, const std::string& needle)
{
    int n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

const Structure& structure()
{
    static const Structure s = synthesize(ModeParams::make(1), {0.1, 0});
    return s;
}

} // namespace

TEST(Csv, FullPrecisionRoundTrip)
{
    for (double x : {M_PI, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.1})
        EXPECT_EQ(std::strtod(fmt17(x).c_str(), nullptr), x);
    const auto mp = ModeParams::make(1);
    const auto tr = free_surface_trace(mp, 0.0, 8.0, 400);
    const auto csv = trace_csv(tr);
    EXPECT_EQ(csv, trace_csv(free_surface_trace(mp, 0.0, 8.0, 400)));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "rho,value,clipped");
    std::size_t i = 0;
    int clipped = 0;
    while (std::getline(in, line)) {
        double r, v;
        int c;
        ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%d", &r, &v, &c), 3);
        EXPECT_EQ(r, tr[i].first);
        EXPECT_EQ(v, tr[i].second);
        EXPECT_EQ(c, std::abs(v) > trace_plot_bound ? 1 : 0);
        clipped += c;
        ++i;
    }
    EXPECT_EQ(i, tr.size());
    EXPECT_EQ(line.find(' '), std::string::npos);
}

TEST(Csv, ClippedNearTheRing)
{
    const auto mp = ModeParams::make(1);
    std::vector<std::pair<double, double>> tr;
    const FreeSurfaceTrace t(mp, 0.0);
    for (double d : {1e-1, 1e-3, 1e-5}) tr.emplace_back(mp.rho_r - d, t.value(mp.rho_r - d));
    const auto csv = trace_csv(tr);
    EXPECT_NE(csv.find(",0\n"), std::string::npos);
    EXPECT_EQ(csv.substr(csv.size() - 3), ",1\n");
}

TEST(Svg, StructureAndConventions)
{
    SvgCurve nodal{{{0, 0}, {1, -1}, {2, -1.5}}, true, false};
    SvgCurve crit{{{0, 0}, {1, -2}}, false, true};
    const auto svg = meridional_svg({nodal, crit}, SvgFrame{}, {}, 3.83);
    EXPECT_EQ(count(svg, "<svg "), 1);
    EXPECT_EQ(count(svg, "</svg>"), 1);
    EXPECT_EQ(count(svg, "viewBox=\""), 1);
    EXPECT_EQ(count(svg, "stroke-width=\"2.5\""), 1);
    EXPECT_EQ(count(svg, "stroke-dasharray"), 1);
    // eta grows downwards: the point (1, -1) maps to a positive y coordinate
    EXPECT_NE(svg.find("120,120"), std::string::npos);
    const auto ss = structure_svg(structure());
    EXPECT_EQ(count(ss, "<polygon"), 2);
    EXPECT_EQ(count(ss, "<svg "), 1);
}

TEST(KvDocumentTest, RoundTripAndErrors)
{
    KvDocument d;
    d.add("a", "x", "1.5");
    d.add("a", "p", "1 2");
    d.add("a", "p", "3 4");
    d.add("b c", "name", "hello world");
    const auto e = KvDocument::parse(d.str());
    EXPECT_EQ(e.str(), d.str());
    EXPECT_EQ(e.number("a", "x"), 1.5);
    EXPECT_EQ(e.all("a", "p").size(), 2u);
    EXPECT_EQ(e.get("b c", "name"), "hello world");
    EXPECT_TRUE(e.has("a"));
    EXPECT_FALSE(e.has("z"));
    EXPECT_THROW(e.get("a", "missing"), SchemaError);
    EXPECT_THROW(e.get("z", "x"), SchemaError);
    EXPECT_THROW(e.number("b c", "name"), SchemaError);
    EXPECT_THROW(KvDocument::parse("key without section = 1\n"), SchemaError);
    EXPECT_THROW(KvDocument::parse("[a]\nno equals sign\n"), SchemaError);
    EXPECT_THROW(KvDocument::parse_numbers("1 2 x", 3, "row"), SchemaError);
    EXPECT_THROW(KvDocument::parse_numbers("1 2", 3, "row"), SchemaError);
}

TEST(StructureDocument, RoundTrip)
{
    const auto& s = structure();
    const auto text = structure_document(s);
    EXPECT_EQ(text, structure_document(s));
    const auto t = parse_structure_document(text);
    ASSERT_EQ(t.bodies.size(), s.bodies.size());
    EXPECT_EQ(t.mode.m, 1);
    EXPECT_EQ(t.mode.rho_r, s.mode.rho_r);
    for (std::size_t k = 0; k < s.bodies.size(); ++k) {
        const auto &a = s.bodies[k], &b = t.bodies[k];
        EXPECT_EQ(a.H, b.H);
        EXPECT_EQ(a.wetted.encloses_ring, b.wetted.encloses_ring);
        ASSERT_EQ(a.wetted.points.size(), b.wetted.points.size());
        for (std::size_t i = 0; i < a.wetted.points.size(); ++i) {
            EXPECT_EQ(a.wetted.points[i].rho, b.wetted.points[i].rho);
            EXPECT_EQ(a.wetted.points[i].eta, b.wetted.points[i].eta);
        }
        EXPECT_EQ(a.inner_radius, b.inner_radius);
        EXPECT_EQ(a.outer_radius, b.outer_radius);
        EXPECT_TRUE(s.matrices[k].E0.isApprox(t.matrices[k].E0, 1e-14));
        EXPECT_TRUE(s.matrices[k].K0.isApprox(t.matrices[k].K0, 1e-14));
        EXPECT_EQ(check_kinematic(s, k), check_kinematic(t, k));
    }
}

TEST(StructureDocument, SchemaViolations)
{
    const auto text = structure_document(structure());
    auto drop_section = [&](const std::string& name) {
        const auto a = text.find("[" + name + "]");
        const auto b = text.find("\n[", a + 1);
        return text.substr(0, a) + (b == std::string::npos ? "" : text.substr(b + 1));
    };
    EXPECT_THROW(parse_structure_document(drop_section("body 1 geometry")), SchemaError);
    EXPECT_THROW(parse_structure_document(drop_section("mode")), SchemaError);
    EXPECT_THROW(parse_structure_document(drop_section("body 0 ballast")), SchemaError);
    auto bad = text;
    bad.replace(bad.find("format = trapmodes-structure 1"), 30, "format = something-else 9");
    EXPECT_THROW(parse_structure_document(bad), SchemaError);
    bad = text;
    const auto p = bad.find("point = ");
    bad.replace(p, 8, "point = 1e ");
    EXPECT_THROW(parse_structure_document(bad), SchemaError);
}

TEST(Files, AtomicWriteAndRead)
{
    const auto dir = std::filesystem::temp_directory_path() / "trapmodes_io_test";
    std::filesystem::remove_all(dir);
    write_atomic(dir / "sub" / "a.txt", "hello\n");
    EXPECT_EQ(read_file(dir / "sub" / "a.txt"), "hello\n");
    write_atomic(dir / "sub" / "a.txt", "again\n");
    EXPECT_EQ(read_file(dir / "sub" / "a.txt"), "again\n");
    int files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir / "sub")) files += e.is_regular_file();
    EXPECT_EQ(files, 1);
    EXPECT_THROW(read_file(dir / "missing.txt"), SchemaError);
    std::filesystem::remove_all(dir);
}
