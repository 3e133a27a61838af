#include "spectral_bounds/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace spb::verify {

namespace {

constexpr double kPi = std::numbers::pi;

struct Reference {
    double value = 0;
    double uncertainty = 0;
};

/// Running state shared by the per-theorem evaluators.
struct Context {
    const geom::Domain* domain = nullptr;
    geom::GeometricSummary summary;
    bounds::GeomInputs gin;
    spectra::Spectrum spectrum;
    const geom::Box* box = nullptr;  // exact heat-trace oracle available
    VerifyOptions opts;
    std::vector<double> prefix;  // prefix sums of eigenvalues

    double avg(int k) const { return prefix[static_cast<std::size_t>(k)] / k; }

    double lambda(int j) const {  // 1-based
        return spectrum.values[static_cast<std::size_t>(j - 1)];
    }

    Reference ref_average(int k) const {
        double err = 0;
        for (int j = 0; j < k; ++j) err += spectrum.error_bounds[static_cast<std::size_t>(j)];
        return {avg(k), err / k};
    }

    Reference ref_excess_average(int k) const {
        auto r = ref_average(k);
        r.value -= lambda(1);
        r.uncertainty += spectrum.error_bounds[0];
        return r;
    }

    Reference ref_single(int j) const {
        return {lambda(j), spectrum.error_bounds[static_cast<std::size_t>(j - 1)]};
    }

    Reference ref_riesz(double z) const {
        const double value = riesz::evaluate(spectrum, riesz::RieszMean{z, 1.0}).value;
        double err = 0;
        for (std::size_t j = 0; j < spectrum.values.size() && spectrum.values[j] < z; ++j)
            err += spectrum.error_bounds[j];
        return {value, err};
    }

    Reference ref_partition(double t) const {
        if (box) return {spectra::exact_heat_trace_box(*box, spectrum.bc, t), 0.0};
        const auto ev = riesz::evaluate(spectrum, riesz::Partition{t});
        double err = ev.truncation_bound;
        for (std::size_t j = 0; j < spectrum.values.size(); ++j)
            err += t * std::exp(-spectrum.values[j] * t) * spectrum.error_bounds[j];
        return {ev.value, err};
    }
};

Record make_record(const bounds::BoundResult& b, const std::string& kind, double query,
                   const Reference& ref, double rel_slack) {
    Record r;
    r.theorem_id = b.theorem_id;
    r.query_kind = kind;
    r.query = query;
    r.applicable = b.applicable;
    r.note = b.note;
    if (!b.applicable) {
        r.bound = std::numeric_limits<double>::quiet_NaN();
        r.reference = ref.value;
        r.margin = std::numeric_limits<double>::quiet_NaN();
        r.pass = false;
        return r;
    }
    r.bound = b.value;
    r.reference = ref.value;
    r.margin = (b.side == bounds::Side::upper) ? b.value - ref.value : ref.value - b.value;
    const double scale = std::max({std::abs(r.bound), std::abs(r.reference), 1e-30});
    if (r.margin >= -rel_slack * scale) {
        r.pass = true;
    } else if (r.margin >= -(ref.uncertainty + rel_slack * scale)) {
        r.inconclusive = true;
        r.note += (r.note.empty() ? "" : "; ");
        r.note += "violation within reference uncertainty";
    }
    return r;
}

bool wants(const std::vector<std::string>& ids, const std::string& id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

double tube_closed(const geom::Domain& domain, double h) {
    return geom::tube_volume(domain, h).value;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out;
    if (n < 2 || !(hi > lo)) return {lo};
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return out;
}

}  // namespace

std::vector<std::string> all_theorem_ids(spectra::Bc bc) {
    if (bc == spectra::Bc::dirichlet)
        return {"thm2.1", "cor2.2", "cor2.3", "thm2.4", "thm2.5", "thm2.7",
                "cor2.8", "thm2.9", "cor2.10", "thm2.11i", "thm2.11ii", "thm2.11iii",
                "thm2.11iv", "appA.1", "appA.2", "bly"};
    return {"thm3.1", "thm3.2", "thm3.3", "kroger"};
}

GridSpec default_grid(const geom::GeometricSummary& g, int spectrum_count) {
    GridSpec grid;
    std::set<int> ks;
    const int kmax = std::max(2, spectrum_count * 5 / 6);
    for (double x = 1; x <= kmax; x *= 1.45) ks.insert(static_cast<int>(std::lround(x)));
    ks.insert(kmax);
    grid.ks.assign(ks.begin(), ks.end());
    const double r2 = g.inradius * g.inradius;
    grid.ts = log_spaced(1e-4 * r2, r2, 9);
    // z-grid is filled once the spectrum is known (verify_domain).
    return grid;
}

Report verify_domain(const geom::Domain& domain, spectra::Bc bc,
                     const std::vector<std::string>& theorem_ids, const GridSpec& grid_in,
                     const VerifyOptions& opts) {
    if (grid_in.ks.empty() && grid_in.zs.empty() && grid_in.ts.empty())
        throw std::invalid_argument("verify_domain: empty grid");

    Context ctx;
    ctx.domain = &domain;
    ctx.summary = geom::summarize(domain);
    ctx.gin = bounds::from_summary(ctx.summary);
    ctx.opts = opts;
    ctx.box = std::get_if<geom::Box>(&domain);

    if (const auto* poly = std::get_if<geom::Polygon>(&domain)) {
        const auto fo = opts.fem_opts.value_or(spectra::FemOptions{});
        ctx.spectrum = spectra::fem_spectrum(*poly, bc, opts.spectrum_count, fo);
    } else {
        ctx.spectrum = spectra::analytic_spectrum(domain, bc, opts.spectrum_count);
    }
    ctx.prefix.resize(ctx.spectrum.values.size() + 1, 0.0);
    for (std::size_t j = 0; j < ctx.spectrum.values.size(); ++j)
        ctx.prefix[j + 1] = ctx.prefix[j] + ctx.spectrum.values[j];

    GridSpec grid = grid_in;
    const int count = ctx.spectrum.count();
    if (grid.zs.empty()) {
        const double z_lo = std::max(ctx.spectrum.values[0] * 1.05, 1e-6);
        const double z_hi = ctx.spectrum.values[static_cast<std::size_t>(count - 1)] * 0.98;
        if (z_hi > z_lo) grid.zs = log_spaced(z_lo, z_hi, 11);
    }
    std::vector<int> ks;
    for (int k : grid.ks)
        if (k >= 1 && k <= count) ks.push_back(k);

    Report rep;
    rep.bc = spectra::to_string(bc);
    rep.spectrum_source = spectra::to_string(ctx.spectrum.source);
    {
        std::ostringstream os;
        std::visit(
            [&os](const auto& d) {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, geom::Box>) {
                    os << "box d=" << d.dim;
                } else if constexpr (std::is_same_v<T, geom::Disk>) {
                    os << "disk R=" << d.radius;
                } else if constexpr (std::is_same_v<T, geom::Annulus>) {
                    os << "annulus (" << d.r_in << "," << d.r_out << ")";
                } else if constexpr (std::is_same_v<T, geom::Polygon>) {
                    os << "polygon n=" << d.vertices.size();
                } else {
                    os << "smooth curve";
                }
            },
            domain);
        rep.domain_desc = os.str();
    }

    auto add = [&](Record r) { rep.records.push_back(std::move(r)); };
    const double slack = opts.rel_slack;
    const auto& gin = ctx.gin;
    const auto tube = [&domain](double h) { return tube_closed(domain, h); };
    const int d = gin.d;

    const bool dirichlet = (bc == spectra::Bc::dirichlet);

    // ---- general AVP family (Dirichlet only) ----
    if (dirichlet) {
        for (double h : opts.phi_h) {
            if (!(h < ctx.summary.inradius)) continue;
            const auto phi = bounds::phi_family_norms(bounds::PhiProfile::linear, h,
                                                      gin.volume, tube(h));
            std::ostringstream tag;
            tag << " (phi_h, h=" << h << ")";
            if (wants(theorem_ids, "thm2.1")) {
                for (int k : ks) {
                    auto v = bounds::dirichlet_avp(phi, gin.volume, d, bounds::QAverage{k});
                    auto r = make_record(v[0], "k", k, ctx.ref_average(k), slack);
                    r.note += tag.str();
                    add(std::move(r));
                }
                for (double z : grid.zs) {
                    auto v = bounds::dirichlet_avp(phi, gin.volume, d, bounds::QRiesz{z});
                    auto r = make_record(v[0], "z", z, ctx.ref_riesz(z), slack);
                    r.note += tag.str();
                    add(std::move(r));
                }
            }
            if (wants(theorem_ids, "cor2.2")) {
                for (double t : grid.ts) {
                    auto v = bounds::dirichlet_avp(phi, gin.volume, d, bounds::QPartition{t});
                    auto r = make_record(v[0], "t", t, ctx.ref_partition(t), slack);
                    r.note += tag.str();
                    add(std::move(r));
                }
            }
            if (wants(theorem_ids, "cor2.3")) {
                for (int k : ks) {
                    if (k + 1 > count) continue;
                    bounds::QBracket q{k, ctx.avg(k), ctx.lambda(k)};
                    auto v = bounds::dirichlet_avp(phi, gin.volume, d, q);
                    auto lo = make_record(v[0], "k", k, ctx.ref_single(k), slack);
                    lo.note += tag.str();
                    add(std::move(lo));
                    auto hi = make_record(v[1], "k", k, ctx.ref_single(k + 1), slack);
                    hi.note += tag.str();
                    add(std::move(hi));
                }
            }
        }
    }

    // ---- convex bounds ----
    if (dirichlet && wants(theorem_ids, "thm2.4")) {
        if (gin.tags.convex) {
            for (int k : ks)
                add(make_record(bounds::dirichlet_convex(bounds::QAverage{k}, gin)[0], "k", k,
                                ctx.ref_average(k), slack));
            for (double z : grid.zs) {
                add(make_record(bounds::dirichlet_convex(bounds::QRiesz{z}, gin)[0], "z", z,
                                ctx.ref_riesz(z), slack));
                add(make_record(
                    bounds::dirichlet_convex_riesz_alpha(z, (d + 2.0) / (2.0 * d), gin), "z", z,
                    ctx.ref_riesz(z), slack));
            }
            add(make_record(bounds::lambda1_upper_convex(gin), "const", 0, ctx.ref_single(1),
                            slack));
            add(make_record(bounds::lambda1_lower_protter(gin.inradius, true), "const", 0,
                            ctx.ref_single(1), slack));
        } else {
            Record r;
            r.theorem_id = "thm2.4";
            r.query_kind = "const";
            r.applicable = false;
            r.note = "domain is not convex";
            add(std::move(r));
        }
    }

    // ---- inradius bounds ----
    if (dirichlet && wants(theorem_ids, "thm2.5")) {
        const double l1 = ctx.lambda(1);
        for (int k : ks) {
            auto v = bounds::dirichlet_inradius(bounds::QAverage{k}, l1, gin.inradius, gin.volume,
                                                d, gin.tags.convex);
            for (auto& b : v) add(make_record(b, "k", k, ctx.ref_excess_average(k), slack));
        }
        for (double z : grid.zs) {
            auto v = bounds::dirichlet_inradius(bounds::QRiesz{z}, l1, gin.inradius, gin.volume,
                                                d, gin.tags.convex);
            add(make_record(v[0], "z", z, ctx.ref_riesz(z), slack));
        }
        add(make_record(bounds::lambda1_upper_inradius(gin.inradius, d), "const", 0,
                        ctx.ref_single(1), slack));
    }

    // ---- class-S bounds, with the inradius fallback below threshold ----
    if (dirichlet && wants(theorem_ids, "thm2.7")) {
        for (int k : ks) {
            auto v = bounds::dirichlet_class_s(bounds::QAverage{k}, gin, tube);
            if (v[0].applicable) {
                add(make_record(v[0], "k", k, ctx.ref_average(k), slack));
            } else {
                // Below the threshold the inradius bound still holds.
                const double l1 = ctx.lambda(1);
                auto fb = bounds::dirichlet_inradius(bounds::QAverage{k}, l1, gin.inradius,
                                                     gin.volume, d, gin.tags.convex)[0];
                fb.theorem_id = "thm2.7";
                fb.note = "below threshold: inradius fallback on the excess average";
                fb.value += l1;
                add(make_record(fb, "k", k, ctx.ref_average(k), slack));
            }
        }
    }
    if (dirichlet && wants(theorem_ids, "cor2.8")) {
        for (double t : grid.ts) {
            auto v = bounds::dirichlet_class_s(bounds::QPartition{t}, gin, tube);
            add(make_record(v[0], "t", t, ctx.ref_partition(t), slack));
        }
    }

    // ---- C^2 bounds ----
    if (dirichlet && wants(theorem_ids, "thm2.9")) {
        if (gin.tags.c2 && !gin.curvature_integrals.empty()) {
            for (int k : ks)
                add(make_record(bounds::dirichlet_c2(bounds::QAverage{k}, gin)[0], "k", k,
                                ctx.ref_average(k), slack));
        } else {
            Record r;
            r.theorem_id = "thm2.9";
            r.query_kind = "const";
            r.applicable = false;
            r.note = "domain is not C^2";
            add(std::move(r));
        }
    }
    if (dirichlet && wants(theorem_ids, "cor2.10")) {
        if (gin.tags.c2 && gin.tags.mean_convex) {
            for (int k : ks)
                add(make_record(bounds::dirichlet_mean_convex(bounds::QAverage{k}, gin)[0], "k",
                                k, ctx.ref_average(k), slack));
        } else {
            Record r;
            r.theorem_id = "cor2.10";
            r.query_kind = "const";
            r.applicable = false;
            r.note = "domain is not mean-convex C^2";
            add(std::move(r));
        }
    }

    // ---- planar bounds ----
    auto planar_case = [&](const char* id, bounds::PlanarCase c, bool supported) {
        if (!wants(theorem_ids, id) || !dirichlet) return;
        if (!supported || d != 2) {
            Record r;
            r.theorem_id = id;
            r.query_kind = "const";
            r.applicable = false;
            r.note = "case hypotheses not met";
            add(std::move(r));
            return;
        }
        for (int k : ks)
            add(make_record(bounds::dirichlet_planar(c, bounds::QAverage{k}, gin, 0.5)[0], "k", k,
                            ctx.ref_average(k), slack));
    };
    planar_case("thm2.11i", bounds::PlanarCase::c2_general, gin.tags.c2);
    planar_case("thm2.11ii", bounds::PlanarCase::c2_two_components,
                gin.tags.c2 && gin.boundary_components <= 2);
    planar_case("thm2.11iii", bounds::PlanarCase::convex, gin.tags.convex);
    planar_case("thm2.11iv", bounds::PlanarCase::polygon,
                gin.tags.polygon && gin.has_angle_sums);

    // ---- semiclassical sandwich ----
    if (dirichlet && wants(theorem_ids, "bly")) {
        for (int k : ks) {
            const auto sc = bounds::semiclassical(d, gin.volume, gin.boundary, k);
            bounds::BoundResult b;
            b.theorem_id = "bly";
            b.side = bounds::Side::lower;
            b.functional = bounds::Functional::average;
            b.value = sc.one_term_average;
            b.threshold_desc = "all k";
            add(make_record(b, "k", k, ctx.ref_average(k), slack));
        }
    }
    if (!dirichlet && wants(theorem_ids, "kroger")) {
        for (int k : ks) {
            const auto sc = bounds::semiclassical(d, gin.volume, gin.boundary, k);
            bounds::BoundResult b;
            b.theorem_id = "kroger";
            b.side = bounds::Side::upper;
            b.functional = bounds::Functional::average;
            b.value = sc.one_term_average;
            b.threshold_desc = "all k";
            add(make_record(b, "k", k, ctx.ref_average(k), slack));
        }
    }

    // ---- appendix: generalized BLY with the eigenbasis family ----
    if (dirichlet && wants(theorem_ids, "appA.1")) {
        for (int k : ks) {
            const double sum_grad = ctx.prefix[static_cast<std::size_t>(k)];
            auto b = bounds::bly_generalized(sum_grad, static_cast<double>(k), gin.volume, d);
            Reference ref{sum_grad, 0};
            for (int j = 0; j < k; ++j)
                ref.uncertainty += ctx.spectrum.error_bounds[static_cast<std::size_t>(j)];
            add(make_record(b, "k", k, ref, slack));
        }
    }

    // ---- appendix: single eigenvalues from averages (convex constants) ----
    if (dirichlet && wants(theorem_ids, "appA.2")) {
        if (gin.tags.convex) {
            const double A =
                2.0 * std::sqrt(2.0 / (d + 2.0) * bounds::semiclassical_constant(d)) *
                (gin.boundary / gin.volume);
            const double B4 = 4.0 * gin.boundary * gin.boundary / (gin.volume * gin.volume);
            for (int k : ks) {
                if (k + 1 > count) continue;
                const auto s = bounds::single_from_averages(k, A, B4, 1, d, gin.volume);
                add(make_record(s.lower_k, "k", k, ctx.ref_single(k), slack));
                add(make_record(s.upper_k1, "k", k, ctx.ref_single(k + 1), slack));
            }
        } else {
            Record r;
            r.theorem_id = "appA.2";
            r.query_kind = "const";
            r.applicable = false;
            r.note = "convex constants unavailable";
            add(std::move(r));
        }
    }

    // ---- Neumann theorems ----
    if (!dirichlet && wants(theorem_ids, "thm3.1")) {
        for (int k : ks) {
            if (k + 1 <= count) {
                bounds::NeumannExtras ex;
                ex.mu_next = ctx.lambda(k + 1);
                auto v = bounds::neumann_classical(bounds::QAverage{k}, gin.volume, d, ex);
                add(make_record(v[0], "k", k, ctx.ref_average(k), slack));
            }
            bounds::NeumannExtras ex;
            ex.avg_k = ctx.avg(k);
            auto v = bounds::neumann_classical(bounds::QBracket{k, ctx.avg(k)}, gin.volume, d, ex);
            add(make_record(v[0], "k", k, ctx.ref_single(k), slack));
            if (k + 1 <= count) add(make_record(v[1], "k", k, ctx.ref_single(k + 1), slack));
        }
        for (double z : grid.zs) {
            auto v = bounds::neumann_classical(bounds::QRiesz{z}, gin.volume, d, {});
            add(make_record(v[0], "z", z, ctx.ref_riesz(z), slack));
        }
        for (double t : grid.ts) {
            auto v = bounds::neumann_classical(bounds::QPartition{t}, gin.volume, d, {});
            add(make_record(v[0], "t", t, ctx.ref_partition(t), slack));
        }
    }
    if (!dirichlet && wants(theorem_ids, "thm3.2")) {
        std::vector<std::vector<double>> dirs;
        for (int i = 0; i < d; ++i) {
            std::vector<double> e(static_cast<std::size_t>(d), 0.0);
            e[static_cast<std::size_t>(i)] = 1.0;
            dirs.push_back(e);
        }
        std::mt19937_64 rng(opts.seed);
        std::normal_distribution<double> gauss(0, 1);
        std::vector<double> v(static_cast<std::size_t>(d));
        double nrm = 0;
        for (auto& x : v) {
            x = gauss(rng);
            nrm += x * x;
        }
        for (auto& x : v) x /= std::sqrt(nrm);
        dirs.push_back(v);
        for (std::size_t di = 0; di < dirs.size(); ++di) {
            const double width = geom::direction_width(domain, dirs[di]);
            for (double z : grid.zs) {
                auto b = bounds::neumann_two_term_riesz(z, gin.volume, width, d);
                auto r = make_record(b, "z", z, ctx.ref_riesz(z), slack);
                r.note += " (direction " + std::to_string(di) + ")";
                add(std::move(r));
            }
        }
    }
    if (!dirichlet && wants(theorem_ids, "thm3.3")) {
        if (gin.tags.c2) {
            const double z0 = geom::neumann_z0_threshold(domain);
            const double M = geom::curvature_ratio_max(domain);
            std::vector<double> zs = grid.zs;
            zs.push_back(z0);
            zs.push_back(2 * z0);
            std::sort(zs.begin(), zs.end());
            for (double z : zs) {
                if (z > ctx.spectrum.values.back()) continue;
                auto v = bounds::neumann_c2(bounds::QRiesz{z}, gin, z0, M, tube);
                add(make_record(v[0], "z", z, ctx.ref_riesz(z), slack));
            }
            for (int k : ks) {
                auto v = bounds::neumann_c2(bounds::QAverage{k}, gin, z0, M, tube);
                add(make_record(v[0], "k", k, ctx.ref_average(k), slack));
            }
        } else {
            Record r;
            r.theorem_id = "thm3.3";
            r.query_kind = "const";
            r.applicable = false;
            r.note = "domain is not C^2";
            add(std::move(r));
        }
    }

    // ---- summary ----
    rep.summary.worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : rep.records) {
        ++rep.summary.total;
        if (!r.applicable) {
            ++rep.summary.inapplicable;
            continue;
        }
        if (r.pass) {
            ++rep.summary.passed;
        } else if (r.inconclusive) {
            ++rep.summary.inconclusive;
        } else {
            ++rep.summary.failed;
        }
        if (std::isfinite(r.margin))
            rep.summary.worst_margin = std::min(rep.summary.worst_margin, r.margin);
    }
    if (!std::isfinite(rep.summary.worst_margin)) rep.summary.worst_margin = 0;

    // ---- asymptotic fits ----
    if (opts.with_fits && dirichlet) {
        for (const auto& id : {std::string("thm2.9"), std::string("thm2.11i"),
                               std::string("thm2.11iv"), std::string("thm2.7")}) {
            if (!wants(theorem_ids, id)) continue;
            try {
                rep.fits.push_back(asymptotic_fit(id, domain, 1e2, 1e6));
            } catch (const std::exception&) {
                // fit hypotheses not met for this domain; skip quietly
            }
        }
    }
    return rep;
}

AsymptoticFitResult asymptotic_fit(const std::string& theorem_id, const geom::Domain& domain,
                                   double k_lo, double k_hi, int points) {
    if (!(k_hi >= 10.0 * k_lo))
        throw std::invalid_argument("asymptotic_fit: range must span at least a decade");
    const auto summary = geom::summarize(domain);
    const auto gin = bounds::from_summary(summary);
    const int d = gin.d;

    std::vector<double> kgrid = log_spaced(k_lo, k_hi, points);
    AsymptoticFitResult out;
    out.theorem_id = theorem_id;

    auto fit_limit = [&](auto&& f, double prediction) {
        // Least squares on R(k) = L + c k^{-1/d}.
        Eigen::MatrixXd A(static_cast<Eigen::Index>(kgrid.size()), 2);
        Eigen::VectorXd y(static_cast<Eigen::Index>(kgrid.size()));
        for (std::size_t i = 0; i < kgrid.size(); ++i) {
            A(static_cast<Eigen::Index>(i), 0) = 1.0;
            A(static_cast<Eigen::Index>(i), 1) = std::pow(kgrid[i], -1.0 / d);
            y(static_cast<Eigen::Index>(i)) = f(kgrid[i]);
        }
        const Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
        out.estimate = c(0);
        out.prediction = prediction;
        out.deviation = std::abs(out.estimate - out.prediction);
    };

    if (theorem_id == "thm2.9") {
        fit_limit([&](double k) { return bounds::c2_remainder(k, gin); },
                  bounds::c2_remainder_limit(gin));
    } else if (theorem_id == "thm2.11i") {
        fit_limit([&](double k) {
            return bounds::planar_remainder(bounds::PlanarCase::c2_general, k, gin);
        },
                  bounds::planar_remainder_limit(bounds::PlanarCase::c2_general, gin));
    } else if (theorem_id == "thm2.11iv") {
        fit_limit([&](double k) {
            return bounds::planar_remainder(bounds::PlanarCase::polygon, k, gin);
        },
                  bounds::planar_remainder_limit(bounds::PlanarCase::polygon, gin));
    } else if (theorem_id == "thm2.7") {
        // R(k) = o(k^{1/d}): slope of log(|R|/k^{1/d}) against log k.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (double k : kgrid) {
            const double Cd = bounds::semiclassical_constant(d);
            const double h = std::pow(2.0 / (d + 2.0) * Cd, -0.5) *
                             std::pow(k / gin.volume, -1.0 / d);
            if (!(h < summary.max_tube_radius)) continue;
            const double w = geom::tube_volume(domain, h).value;
            const double pref = 2.0 / (d + 2.0) * Cd * std::pow(k / gin.volume, 2.0 / d) +
                                1.0 / (h * h);
            const double R = pref *
                             (h * gin.boundary * w + gin.volume * (w - h * gin.boundary)) /
                             (gin.volume * (gin.volume - w));
            if (!(std::abs(R) > 0)) continue;
            const double x = std::log(k);
            const double yv = std::log(std::abs(R) / std::pow(k, 1.0 / d));
            sx += x;
            sy += yv;
            sxx += x * x;
            sxy += x * yv;
            ++m;
        }
        if (m < 3) throw std::runtime_error("asymptotic_fit: not enough usable points");
        out.estimate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        out.prediction = -1.0 / d;
        out.deviation = out.estimate - out.prediction;
    } else if (theorem_id == "thm3.3") {
        const double cd = bounds::neumann_cd_constant(d);
        const double Cd = bounds::semiclassical_constant(d);
        if (gin.curvature_integrals.empty())
            throw std::invalid_argument("asymptotic_fit: curvature integrals required");
        const double pred = kPi * kPi * (d - 1.0) * cd * std::pow(Cd, d / 2.0) /
                            (4.0 * gin.volume) * std::abs(gin.curvature_integrals[0]);
        fit_limit([&](double k) {
            const double zk = Cd * std::pow(k / gin.volume, 2.0 / d);
            const double h = kPi / (2.0 * std::sqrt(zk));
            const double rp = 2.0 * std::pow(zk, 1.0 + d / 2.0) * cd *
                              std::abs(geom::tube_volume(domain, h).value - h * gin.boundary);
            return rp / k;
        },
                  pred);
        // limsup statement: report only the excess over the prediction.
        out.deviation = std::max(0.0, out.estimate - out.prediction);
    } else {
        throw std::invalid_argument("asymptotic_fit: unsupported theorem id " + theorem_id);
    }
    return out;
}

// ---------------------------------------------------------------------------
//  Finite-dimensional AVP
// ---------------------------------------------------------------------------

Eigen::MatrixXd random_psd_matrix(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0, 1);
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = gauss(rng);
    return G.transpose() * G;
}

TightFrame make_random_tight_frame(int n, int m, std::uint64_t seed) {
    if (m < n) throw std::invalid_argument("tight frame needs at least n vectors");
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss(0, 1);
    std::uniform_real_distribution<double> unif(0.5, 2.0);
    Eigen::MatrixXd G(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = gauss(rng);
    Eigen::VectorXd w(m);
    for (int i = 0; i < m; ++i) w(i) = unif(rng);
    // Whiten so that sum_i w_i f_i f_i^T = C I.
    const Eigen::MatrixXd S = G.transpose() * w.asDiagonal() * G;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    const Eigen::MatrixXd half_inv = es.operatorInverseSqrt();
    TightFrame f;
    f.vectors = G * half_inv;  // rows are frame vectors
    f.weights = w;
    f.frame_constant = 1.0;
    const Eigen::MatrixXd check =
        f.vectors.transpose() * f.weights.asDiagonal() * f.vectors;
    if ((check - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
        throw std::runtime_error("tight frame construction failed");
    return f;
}

TightFrame make_eigenbasis_frame(int n) {
    TightFrame f;
    f.vectors = Eigen::MatrixXd::Identity(n, n);
    f.weights = Eigen::VectorXd::Ones(n);
    f.frame_constant = 1.0;
    return f;
}

AvpCheckResult avp_finite_check(const Eigen::MatrixXd& Q, const TightFrame& frame, int k) {
    const int n = static_cast<int>(Q.rows());
    if (k < 1 || k >= n) throw std::invalid_argument("avp_finite_check: need 1 <= k < n");
    const Eigen::MatrixXd check =
        frame.vectors.transpose() * frame.weights.asDiagonal() * frame.vectors;
    if ((check - frame.frame_constant * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() >
        1e-8)
        throw std::invalid_argument("avp_finite_check: frame is not tight");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
    const Eigen::VectorXd lam = es.eigenvalues();
    const Eigen::MatrixXd U = es.eigenvectors();
    const double z_top = lam(k);  // lambda_{k+1} in 1-based terms

    const int m = static_cast<int>(frame.vectors.rows());
    AvpCheckResult out;
    double lhs = 0;
    for (int j = 0; j < k; ++j) {
        double acc = 0;
        for (int xi = 0; xi < m; ++xi) {
            const double ip = frame.vectors.row(xi).dot(U.col(j));
            acc += frame.weights(xi) * ip * ip;
        }
        lhs += (z_top - lam(j)) * acc;
    }
    double rhs = 0;
    for (int xi = 0; xi < m; ++xi) {
        const Eigen::VectorXd f = frame.vectors.row(xi).transpose();
        const double val = z_top * f.squaredNorm() - f.dot(Q * f);
        if (val >= 0) rhs += frame.weights(xi) * val;
    }
    out.lhs = lhs;
    out.rhs = rhs;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
    out.pass = lhs >= rhs - 1e-10 * scale;

    // Riesz-mean form over sampled z in [lambda_k, lambda_{k+1}].
    out.worst_riesz_margin = std::numeric_limits<double>::infinity();
    for (double theta : {0.0, 0.31, 0.73, 1.0}) {
        const double z = lam(k - 1) + theta * (lam(k) - lam(k - 1));
        double r1 = 0;
        for (int j = 0; j < n; ++j) r1 += std::max(z - lam(j), 0.0);
        double avg = 0;
        for (int xi = 0; xi < m; ++xi) {
            const Eigen::VectorXd f = frame.vectors.row(xi).transpose();
            avg += frame.weights(xi) * std::max(z * f.squaredNorm() - f.dot(Q * f), 0.0);
        }
        out.worst_riesz_margin = std::min(out.worst_riesz_margin,
                                          r1 - avg / frame.frame_constant);
    }
    out.riesz_pass = out.worst_riesz_margin >= -1e-10 * std::max(1.0, std::abs(out.lhs));
    return out;
}

AvpCheckResult avp_finite_check_seeded(std::uint64_t seed, int n, int k, int frame_size) {
    const Eigen::MatrixXd Q = random_psd_matrix(n, seed);
    const TightFrame frame = make_random_tight_frame(n, frame_size, seed);
    return avp_finite_check(Q, frame, k);
}

}  // namespace spb::verify
