#include "spectral_bounds/json_io.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace spb::io {

using nlohmann::json;

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace

geom::Domain parse_domain(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("domain spec: invalid JSON: ") + e.what());
    }
    const std::string type = j.value("type", "");
    if (type == "box") {
        geom::Box b;
        b.lengths = j.at("lengths").get<std::vector<double>>();
        b.dim = j.value("dim", static_cast<int>(b.lengths.size()));
        geom::validate(geom::Domain{b});
        return b;
    }
    if (type == "disk") {
        geom::Disk d{j.at("radius").get<double>()};
        geom::validate(geom::Domain{d});
        return d;
    }
    if (type == "annulus") {
        geom::Annulus a{j.at("r_in").get<double>(), j.at("r_out").get<double>()};
        geom::validate(geom::Domain{a});
        return a;
    }
    if (type == "polygon") {
        geom::Polygon p;
        for (const auto& v : j.at("vertices"))
            p.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
        geom::validate(geom::Domain{p});
        return p;
    }
    if (type == "curve") {
        if (j.contains("builtin")) {
            const std::string name = j.at("builtin").get<std::string>();
            if (name != "ellipse")
                throw std::invalid_argument("domain spec: unknown builtin curve " + name);
            auto c = geom::make_ellipse(j.at("a").get<double>(), j.at("b").get<double>(),
                                        j.value("samples_n", 2048));
            geom::validate(geom::Domain{c});
            return c;
        }
        geom::SmoothCurve c;
        for (const auto& row : j.at("samples")) {
            geom::CurvePoint p;
            p.t = row.at(0).get<double>();
            p.x = row.at(1).get<double>();
            p.y = row.at(2).get<double>();
            p.xp = row.at(3).get<double>();
            p.yp = row.at(4).get<double>();
            p.xpp = row.at(5).get<double>();
            p.ypp = row.at(6).get<double>();
            c.samples.push_back(p);
        }
        geom::validate(geom::Domain{c});
        return c;
    }
    throw std::invalid_argument("domain spec: unknown type '" + type + "'");
}

std::string domain_to_json(const geom::Domain& domain) {
    json j;
    std::visit(
        [&j](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, geom::Box>) {
                j["type"] = "box";
                j["dim"] = d.dim;
                j["lengths"] = d.lengths;
            } else if constexpr (std::is_same_v<T, geom::Disk>) {
                j["type"] = "disk";
                j["radius"] = d.radius;
            } else if constexpr (std::is_same_v<T, geom::Annulus>) {
                j["type"] = "annulus";
                j["r_in"] = d.r_in;
                j["r_out"] = d.r_out;
            } else if constexpr (std::is_same_v<T, geom::Polygon>) {
                j["type"] = "polygon";
                auto arr = json::array();
                for (const auto& v : d.vertices) arr.push_back({v.x(), v.y()});
                j["vertices"] = arr;
            } else {
                j["type"] = "curve";
                auto arr = json::array();
                for (const auto& s : d.samples)
                    arr.push_back({s.t, s.x, s.y, s.xp, s.yp, s.xpp, s.ypp});
                j["samples"] = arr;
            }
        },
        domain);
    return j.dump(2);
}

std::string summary_to_json(const geom::GeometricSummary& g) {
    json j;
    j["dim"] = g.dim;
    j["volume"] = g.volume;
    j["boundary_measure"] = g.boundary_measure;
    j["inradius"] = g.inradius;
    j["max_tube_radius"] = g.max_tube_radius;
    j["boundary_components"] = g.boundary_components;
    if (g.has_angle_sums) {
        j["angle_sum_convex"] = g.angle_sum_convex;
        j["angle_sum_reflex"] = g.angle_sum_reflex;
    }
    if (!g.curvature_integrals.empty()) j["curvature_integrals"] = g.curvature_integrals;
    j["tube_radius_fallback"] = g.tube_radius_fallback;
    j["tags"] = {{"convex", g.tags.convex},   {"classS", g.tags.class_s},
                 {"C2", g.tags.c2},           {"meanconvex", g.tags.mean_convex},
                 {"planar", g.tags.planar},   {"polygon", g.tags.polygon}};
    j["exact"] = {{"volume", g.exact.volume},
                  {"boundary", g.exact.boundary},
                  {"inradius", g.exact.inradius},
                  {"tube_radius", g.exact.tube_radius},
                  {"curvature", g.exact.curvature}};
    return j.dump(2);
}

std::string spectrum_to_json(const spectra::Spectrum& s) {
    json j;
    j["bc"] = spectra::to_string(s.bc);
    j["values"] = s.values;
    j["error_bounds"] = s.error_bounds;
    j["source"] = spectra::to_string(s.source);
    return j.dump(2);
}

spectra::Spectrum parse_spectrum(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("spectrum: invalid JSON: ") + e.what());
    }
    spectra::Spectrum s;
    const std::string bc = j.at("bc").get<std::string>();
    if (bc == "dirichlet")
        s.bc = spectra::Bc::dirichlet;
    else if (bc == "neumann")
        s.bc = spectra::Bc::neumann;
    else
        throw std::invalid_argument("spectrum: bc must be dirichlet or neumann");
    s.values = j.at("values").get<std::vector<double>>();
    if (j.contains("error_bounds"))
        s.error_bounds = j.at("error_bounds").get<std::vector<double>>();
    else
        s.error_bounds.assign(s.values.size(), 0.0);
    if (s.error_bounds.size() != s.values.size())
        throw std::invalid_argument("spectrum: error_bounds size mismatch");
    const std::string src = j.value("source", "user");
    s.source = src == "analytic" ? spectra::Source::analytic
               : src == "fem"    ? spectra::Source::fem
                                 : spectra::Source::user;
    for (std::size_t i = 1; i < s.values.size(); ++i)
        if (s.values[i] < s.values[i - 1])
            throw std::invalid_argument("spectrum: values must be sorted");
    return s;
}

namespace {

json record_to_json(const verify::Record& r) {
    json j;
    j["theorem_id"] = r.theorem_id;
    j["query_kind"] = r.query_kind;
    j["query"] = r.query;
    j["bound"] = r.bound;
    j["reference"] = r.reference;
    j["margin"] = r.margin;
    j["applicable"] = r.applicable;
    j["pass"] = r.pass;
    j["inconclusive"] = r.inconclusive;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

}  // namespace

std::string report_to_json(const verify::Report& r) {
    json j;
    j["domain"] = r.domain_desc;
    j["bc"] = r.bc;
    j["spectrum_source"] = r.spectrum_source;
    auto records = json::array();
    for (const auto& rec : r.records) records.push_back(record_to_json(rec));
    j["records"] = records;
    j["summary"] = {{"total", r.summary.total},
                    {"passed", r.summary.passed},
                    {"failed", r.summary.failed},
                    {"inapplicable", r.summary.inapplicable},
                    {"inconclusive", r.summary.inconclusive},
                    {"worst_margin", r.summary.worst_margin}};
    auto fits = json::array();
    for (const auto& f : r.fits)
        fits.push_back({{"theorem_id", f.theorem_id},
                        {"estimate", f.estimate},
                        {"prediction", f.prediction},
                        {"deviation", f.deviation}});
    j["asymptotic_fits"] = fits;
    return j.dump(2);
}

std::string report_to_csv(const verify::Report& r) {
    std::ostringstream os;
    os << "theorem_id,query_kind,query,bound,reference,margin,applicable,pass,inconclusive\n";
    for (const auto& rec : r.records) {
        os << rec.theorem_id << ',' << rec.query_kind << ',' << fmt(rec.query) << ','
           << fmt(rec.bound) << ',' << fmt(rec.reference) << ',' << fmt(rec.margin) << ','
           << (rec.applicable ? 1 : 0) << ',' << (rec.pass ? 1 : 0) << ','
           << (rec.inconclusive ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string report_to_tsv(const verify::Report& r) {
    std::ostringstream os;
    os << "theorem_id\tquery_kind\tquery\tbound\treference\tmargin\n";
    for (const auto& rec : r.records) {
        if (!rec.applicable) continue;
        os << rec.theorem_id << '\t' << rec.query_kind << '\t' << fmt(rec.query) << '\t'
           << fmt(rec.bound) << '\t' << fmt(rec.reference) << '\t' << fmt(rec.margin) << '\n';
    }
    return os.str();
}

}  // namespace spb::io
